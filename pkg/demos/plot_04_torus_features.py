"""
Line averages on the 29x29 torus
================================

Each unit vector ``w`` mod 29 gives an operator averaging an image along
lines in direction ``w_perp``.  Translating the image shifts each output
cyclically by ``v . w``.
"""
import numpy as np

from geneo.torus import (
    cyclic_shift,
    pad_mnist,
    salt_pepper,
    stack_features,
    toroidal_translate,
    unit_vectors,
)

units = unit_vectors(29)
print(len(units), "unit vectors, first few:", [u.w for u in units[:4]])

# %%
# A synthetic 28x28 digit-like blob, padded to the prime side length.
rr, cc = np.mgrid[:28, :28]
raw = (255 * np.exp(-((rr - 12) ** 2 + (cc - 15) ** 2) / 30)).astype(np.uint8)
phi = pad_mnist(raw)
feats = stack_features(29, phi)
print("feature stack:", feats.shape)

# %%
# Equivariance under a toroidal translation.
v = (7, 3)
moved = stack_features(29, toroidal_translate(phi, v))
defect = max(np.max(np.abs(moved[k] - cyclic_shift(feats[k], u.dot(v)))) for k, u in enumerate(units))
print("equivariance defect:", defect)

# %%
# Salt and pepper noise moves features by at most the pixel change.
noisy = salt_pepper(phi, 0.2, seed=42)
print("feature change:", np.max(np.abs(stack_features(29, noisy) - feats)), "<=", np.max(np.abs(noisy - phi)))
