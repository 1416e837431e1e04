"""Command line front end.

Exit status: 0 on success, 1 when a verification fails (for instance
``verify`` on a matrix that is not a GENEO), 2 on unreadable or invalid
input.  Data goes to ``--out`` or standard output; diagnostics go to
standard error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import torus
from .action import DEFAULT_GUARD, SignedMeasure, all_orbits, is_permutant, measure_from_function
from .errors import GeneoError, NotEquivariant
from .groups import (
    grid_setting,
    group_from_json,
    homomorphism_from_json,
    identity_homomorphism,
    symmetric_group,
)
from .idx import read_images
from .polytope import check_redundancy_identity, orbit_basis
from .representation import (
    TOL,
    GeoProblem,
    check_equivariance,
    check_mutual_singularity,
    is_geneo,
    matrix_of_measure,
    operator_norm_inf,
    represent,
    split_by_target_orbits,
)
from .stochastic import decompose_stochastic, reconstruct


class InputError(Exception):
    pass


def _number(cell: str) -> float:
    cell = cell.strip()
    try:
        return float(cell)
    except ValueError:
        return float(Fraction(cell))


def read_matrix_csv(path) -> np.ndarray:
    """Comma separated rows; cells may be decimals or fractions such as ``1/3``."""
    try:
        text = Path(path).read_text()
        rows = [[_number(c) for c in row] for row in csv.reader(io.StringIO(text)) if row]
    except (OSError, ValueError, ZeroDivisionError) as exc:
        raise InputError(f"cannot read matrix {path}: {exc}") from exc
    if not rows or len({len(r) for r in rows}) != 1:
        raise InputError(f"{path}: rows must be non-empty and of equal length")
    return np.array(rows, dtype=float)


def _read_json(path):
    try:
        return json.loads(Path(path).read_text())
    except (OSError, ValueError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def _load_hom(args):
    G = group_from_json(_read_json(args.group))
    K = group_from_json(_read_json(args.target)) if args.target else None
    if args.hom:
        return homomorphism_from_json(_read_json(args.hom), G, K)
    if K is None or K.degree == G.degree:
        return identity_homomorphism(G)
    raise InputError("--hom is required when the target group differs from the source group")


def _emit(args, text: str) -> None:
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _triple_json(triple) -> dict:
    return {
        "mu_plus": triple.mu_plus.to_json(),
        "mu_minus": triple.mu_minus.to_json(),
        "mu": triple.mu.to_json(),
    }


def _report(P: GeoProblem, triple, tol: float) -> dict:
    tv = triple.mu.total_variation()
    norm = operator_norm_inf(P.B)
    residual = float(np.max(np.abs(matrix_of_measure(triple.mu) - P.B), initial=0.0))
    return {
        "equivariant": True,
        "operator_norm": norm,
        "total_variation": tv,
        "geneo": bool(tv <= 1.0 + tol),
        "mutually_singular": check_mutual_singularity(triple, tol),
        "reconstruction_residual": residual,
    }


# -- subcommands ---------------------------------------------------------------------


def cmd_decompose(args) -> int:
    A = read_matrix_csv(args.matrix)
    combo = decompose_stochastic(A, tol=args.tol)
    lines = [json.dumps(t) for t in combo.to_json_lines()]
    _emit(args, "".join(line + "\n" for line in lines))
    err = np.max(np.abs(reconstruct(combo, *A.shape) - A))
    print(f"{len(combo)} terms, reconstruction residual {err:.3g}", file=sys.stderr)
    return 0


def _problem(args) -> GeoProblem:
    hom = _load_hom(args)
    return GeoProblem(hom, read_matrix_csv(args.matrix))


def cmd_represent(args) -> int:
    P = _problem(args)
    if not check_equivariance(P, args.tol):
        print("matrix is not equivariant", file=sys.stderr)
        _emit(args, _dumps({"report": {"equivariant": False}}))
        return 1
    blocks = []
    for sub in split_by_target_orbits(P, args.tol):
        triple = represent(sub, args.tol)
        entry = _triple_json(triple)
        entry["rows"] = list(sub.rows) if sub.rows is not None else list(range(P.K.degree))
        entry["report"] = _report(sub, triple, args.tol)
        blocks.append(entry)
    if len(blocks) == 1:
        out = blocks[0]
        del out["rows"]
    else:
        out = {"blocks": blocks}
    _emit(args, _dumps(out))
    return 0


def cmd_verify(args) -> int:
    P = _problem(args)
    if not check_equivariance(P, args.tol):
        _emit(args, "equivariant: false\n")
        return 1
    verdicts = []
    norm = operator_norm_inf(P.B)
    for sub in split_by_target_orbits(P, args.tol):
        ok, _ = is_geneo(sub, args.tol)
        verdicts.append(ok)
    ok = all(verdicts)
    verdict = "true" if ok else "false"
    bound = "" if ok else " > 1"
    lines = ["equivariant: true", f"GENEO: {verdict}, norm {norm!r}{bound}"]
    _emit(args, "\n".join(lines) + "\n")
    return 0 if ok else 1


def cmd_orbits(args) -> int:
    hom = _load_hom(args)
    orbits = all_orbits(hom, guard=args.guard)
    out = [
        {
            "representative": list(o.representative),
            "size": len(o),
            "stabilizer_size": o.stabilizer_size,
            "members": [list(h) for h in o.members],
        }
        for o in orbits
    ]
    _emit(args, _dumps(out))
    return 0


def cmd_basis(args) -> int:
    hom = _load_hom(args)
    basis = orbit_basis(hom, guard=args.guard)
    if args.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        for i, (o, M) in enumerate(zip(basis.orbits, basis.basis_matrices)):
            rep = " ".join(str(v) for v in o.representative)
            writer.writerow([i, len(o), rep, *(repr(float(x)) for x in M.ravel())])
        _emit(args, buf.getvalue())
    else:
        out = [
            {"representative": list(o.representative), "size": len(o), "matrix": M.tolist()}
            for o, M in zip(basis.orbits, basis.basis_matrices)
        ]
        _emit(args, _dumps(out))
    return 0


def _parse_translation(spec: str | None):
    if spec is None or spec == "random":
        return spec
    try:
        v1, v2 = (int(s) for s in spec.split(","))
    except ValueError as exc:
        raise InputError(f"--translate expects 'random' or 'v1,v2', got {spec!r}") from exc
    return (v1, v2)


def cmd_torus_features(args) -> int:
    p = args.p
    if not torus.is_prime(p):
        raise InputError(f"--p {p} is not prime")
    try:
        raw = read_images(args.images)
    except (OSError, ValueError) as exc:
        raise InputError(str(exc)) from exc
    if args.limit is not None:
        raw = raw[: args.limit]
    shape = raw.shape[1:]
    if shape == (p, p):
        prepare = lambda img: img.astype(float) / 255.0  # noqa: E731
    elif shape == (torus.MNIST_SIDE, torus.MNIST_SIDE) and p == torus.MNIST_PRIME:
        prepare = torus.pad_mnist
    else:
        raise InputError(f"images are {shape[0]}x{shape[1]}; need {p}x{p} or 28x28 with --p 29")
    translation = _parse_translation(args.translate)
    if args.noise is not None and not 0.0 <= args.noise <= 1.0:
        raise InputError("--noise must lie in [0, 1]")
    # one PCG64 stream for the whole run; per image: translation draw, then noise draws
    rng = np.random.Generator(np.random.PCG64(args.seed))
    units = torus.unit_vectors(p)
    buf = io.StringIO()
    for k, img in enumerate(raw):
        phi = prepare(img)
        if translation == "random":
            phi = torus.toroidal_translate(phi, rng.integers(0, p, size=2))
        elif translation is not None:
            phi = torus.toroidal_translate(phi, translation)
        if args.noise is not None:
            phi = torus.salt_pepper(phi, args.noise, rng)
        feats = torus.stack_features(p, phi)
        buf.write(",".join([str(k), *(repr(float(x)) for x in feats.ravel())]) + "\n")
    _emit(args, buf.getvalue())
    if args.meta:
        meta = {
            "p": p,
            "unit_vectors": [list(u.w) for u in units],
            "noise": args.noise,
            "seed": args.seed,
            "translate": args.translate,
            "images": len(raw),
        }
        Path(args.meta).write_text(_dumps(meta))
    print(f"{len(raw)} images -> {len(units)}x{p} features each", file=sys.stderr)
    return 0


def run_demo(tol: float = TOL) -> list[tuple[str, bool]]:
    """The three worked examples, as (name, passed) pairs."""
    results = []

    B = np.array([[1 / 2, 0, 1 / 2], [1 / 3, 1 / 3, 1 / 3]])
    combo = decompose_stochastic(B)
    ok = abs(combo.weights.sum() - 1) <= 1e-12 and np.max(np.abs(reconstruct(combo, 2, 3) - B)) <= 1e-12
    results.append(("rectangular stochastic decomposition round-trip", bool(ok)))

    S3 = symmetric_group(3)
    T = identity_homomorphism(S3)
    third = np.full((3, 3), 1 / 3)
    P = GeoProblem(T, third)
    geneo, triple = is_geneo(P, tol)
    rec = np.max(np.abs(matrix_of_measure(triple.mu) - third)) <= tol
    mu = SignedMeasure(T, {(0, 1, 2): 1 / 3, (1, 2, 0): 1 / 3, (2, 0, 1): 1 / 3})
    nu = SignedMeasure(T, {(2, 1, 0): 1 / 3, (1, 0, 2): 1 / 3, (0, 2, 1): 1 / 3})
    same = np.array_equal(matrix_of_measure(mu), matrix_of_measure(nu))
    perm = is_permutant(mu) and is_permutant(nu)
    results.append(("Sym(3) averaging operator: GENEO, represented, two measures agree", bool(geneo and rec and same and perm)))

    basis = orbit_basis(T, functions=[(0, 1, 2), (1, 2, 0), (1, 0, 2)])
    results.append(("Sym(3) transposition orbit is not a vertex", check_redundancy_identity(basis)))

    hom = grid_setting(2, 3)
    image_size = measure_from_function(hom, lambda h: len(set(h)))
    row_cells = measure_from_function(hom, lambda h: float(all(h[i] // 3 == i for i in range(2))))
    results.append(("grid examples are permutant", is_permutant(image_size) and is_permutant(row_cells)))
    return results


def cmd_demo(args) -> int:
    results = run_demo(args.tol)
    for name, ok in results:
        print(f"{'PASS' if ok else 'FAIL'}  {name}")
    return 0 if all(ok for _, ok in results) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="geneo", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=TOL, help="numerical tolerance (default 1e-9)")
    common.add_argument("--guard", type=int, default=DEFAULT_GUARD, help="maximum |X^Y| to enumerate")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", help="output file (default: standard output)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decompose", parents=[common], help="decompose a row-stochastic matrix")
    p.add_argument("matrix", help="CSV file")
    p.set_defaults(func=cmd_decompose)

    def setting(p, matrix=True):
        p.add_argument("--group", required=True, help="group JSON {carrier_size, generators}")
        p.add_argument("--hom", help="homomorphism JSON {gen_images}; default identity")
        p.add_argument("--target", help="target group JSON; default: generated by the images")
        if matrix:
            p.add_argument("--matrix", required=True, help="operator matrix CSV, |Y| rows by |X| columns")

    for name, func, text in (
        ("represent", cmd_represent, "permutant measures for an equivariant matrix"),
        ("verify", cmd_verify, "check equivariance and non-expansivity"),
    ):
        p = sub.add_parser(name, parents=[common], help=text)
        setting(p)
        p.set_defaults(func=func)

    p = sub.add_parser("orbits", parents=[common], help="orbits of X^Y under the twisted action")
    setting(p, matrix=False)
    p.set_defaults(func=cmd_orbits)

    p = sub.add_parser("basis", parents=[common], help="orbit indicator basis and its operator matrices")
    setting(p, matrix=False)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_basis)

    p = sub.add_parser("torus-features", parents=[common], help="stack of torus line-average features")
    p.add_argument("--p", type=int, default=torus.MNIST_PRIME)
    p.add_argument("--images", required=True, help="IDX image file (optionally .gz)")
    p.add_argument("--noise", type=float, help="salt and pepper level in [0, 1]")
    p.add_argument("--translate", help="'random' or 'v1,v2'")
    p.add_argument("--limit", type=int, help="only the first N images")
    p.add_argument("--meta", help="write a JSON sidecar with the run parameters")
    p.set_defaults(func=cmd_torus_features)

    p = sub.add_parser("demo", parents=[common], help="run the worked examples")
    p.set_defaults(func=cmd_demo)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.tol <= 0 or args.guard < 1:
        print("--tol must be positive and --guard at least 1", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except NotEquivariant as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (InputError, GeneoError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
