# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops: dense convolution and Monte-Carlo deck updates."""
import numpy as np
cimport numpy as cnp

cnp.import_array()

ctypedef cnp.int64_t i64


def convolve_float(const double[::1] values, const i64[:, ::1] table, const double[::1] probs):
    """``out[table[k, h]] += probs[k] * values[h]`` over all k, h."""
    cdef Py_ssize_t k, h, m = table.shape[0], g = table.shape[1]
    out = np.zeros(g, dtype=np.float64)
    cdef double[::1] o = out
    cdef double p
    with nogil:
        for k in range(m):
            p = probs[k]
            for h in range(g):
                o[table[k, h]] += p * values[h]
    return out


def apply_swaps(i64[:, ::1] decks, cnp.int8_t[:, ::1] faces,
                const i64[:, ::1] rights, const i64[:, ::1] lefts,
                const cnp.uint8_t[:, ::1] flips):
    """Swap positions ``lefts[r, t]`` and ``rights[r, t]`` of deck r for each t.

    When ``faces`` has columns, the two moved cards are turned over whenever
    ``flips[r, t]`` is set (a single card when both hands coincide).
    """
    cdef Py_ssize_t r, t, R = decks.shape[0], T = rights.shape[1]
    cdef bint signed = faces.shape[1] > 0
    cdef i64 a, b, tmp
    cdef cnp.int8_t ftmp
    with nogil:
        for r in range(R):
            for t in range(T):
                a = lefts[r, t]
                b = rights[r, t]
                if a != b:
                    tmp = decks[r, a]
                    decks[r, a] = decks[r, b]
                    decks[r, b] = tmp
                    if signed:
                        ftmp = faces[r, a]
                        faces[r, a] = faces[r, b]
                        faces[r, b] = ftmp
                if signed and flips[r, t]:
                    faces[r, a] = -faces[r, a]
                    if a != b:
                        faces[r, b] = -faces[r, b]


def cover_update(cnp.uint8_t[:, ::1] seen, i64[::1] remaining, i64[::1] hit,
                 const i64[:, ::1] draws, i64 t0):
    """Advance a coupon collector by one block of draws.

    ``hit[r]`` is set to the 1-based step at which replica r first saw every
    coupon; finished replicas are skipped.
    """
    cdef Py_ssize_t r, t, R = draws.shape[0], T = draws.shape[1]
    cdef i64 d
    with nogil:
        for r in range(R):
            if remaining[r] == 0:
                continue
            for t in range(T):
                d = draws[r, t]
                if not seen[r, d]:
                    seen[r, d] = 1
                    remaining[r] -= 1
                    if remaining[r] == 0:
                        hit[r] = t0 + t + 1
                        break
