"""NumPy fallback for the compiled kernels; same signatures and semantics."""
from __future__ import annotations

import numpy as np


def convolve_float(values: np.ndarray, table: np.ndarray, probs: np.ndarray) -> np.ndarray:
    out = np.zeros(table.shape[1], dtype=np.float64)
    for k in range(table.shape[0]):
        np.add.at(out, table[k], probs[k] * values)
    return out


def apply_swaps(decks, faces, rights, lefts, flips) -> None:
    R = decks.shape[0]
    rows = np.arange(R)
    signed = faces.shape[1] > 0
    for t in range(rights.shape[1]):
        a = lefts[:, t]
        b = rights[:, t]
        da = decks[rows, a].copy()
        decks[rows, a] = decks[rows, b]
        decks[rows, b] = da
        if signed:
            fa = faces[rows, a].copy()
            faces[rows, a] = faces[rows, b]
            faces[rows, b] = fa
            f = flips[:, t].astype(bool)
            faces[rows[f], a[f]] *= -1
            g = f & (a != b)
            faces[rows[g], b[g]] *= -1


def cover_update(seen, remaining, hit, draws, t0) -> None:
    active = np.flatnonzero(remaining > 0)
    for t in range(draws.shape[1]):
        if active.size == 0:
            break
        d = draws[active, t]
        new = seen[active, d] == 0
        idx = active[new]
        seen[idx, d[new]] = 1
        remaining[idx] -= 1
        done = idx[remaining[idx] == 0]
        hit[done] = t0 + t + 1
        active = active[remaining[active] > 0]
