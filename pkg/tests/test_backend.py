import numpy as np
import pytest

from shufflelab import _backend, _pure_kernels
from shufflelab.shuffles import make_rng

pytestmark = pytest.mark.skipif(_backend.compiled is None, reason="compiled kernels not built")


def test_backend_selected():
    assert _backend.BACKEND == "cython"


def test_convolve_agrees():
    rng = make_rng(0)
    table = np.ascontiguousarray(np.stack([rng.permutation(50) for _ in range(7)]).astype(np.int64))
    probs = rng.random(7)
    values = rng.random(50)
    assert np.allclose(_backend.compiled.convolve_float(values, table, probs),
                       _pure_kernels.convolve_float(values, table, probs))


@pytest.mark.parametrize("signed", [False, True])
def test_swaps_agree(signed):
    rng = make_rng(1)
    R, n, T = 200, 9, 40
    rights = rng.integers(0, n, size=(R, T), dtype=np.int64)
    lefts = np.minimum(rng.integers(0, n, size=(R, T), dtype=np.int64), rights)
    flips = rng.integers(0, 2, size=(R, T)).astype(np.uint8)
    out = []
    for mod in (_backend.compiled, _pure_kernels):
        decks = np.tile(np.arange(1, n + 1, dtype=np.int64), (R, 1))
        faces = np.ones((R, n if signed else 0), dtype=np.int8)
        mod.apply_swaps(decks, faces, rights, lefts, flips)
        out.append((decks, faces))
        assert (np.sort(decks, axis=1) == np.arange(1, n + 1)).all()
    assert np.array_equal(out[0][0], out[1][0]) and np.array_equal(out[0][1], out[1][1])


def test_cover_agrees():
    rng = make_rng(2)
    R, n, C = 300, 12, 64
    draws = rng.integers(0, n, size=(R, C), dtype=np.int64)
    res = []
    for mod in (_backend.compiled, _pure_kernels):
        seen = np.zeros((R, n), dtype=np.uint8)
        remaining = np.full(R, n, dtype=np.int64)
        hit = np.zeros(R, dtype=np.int64)
        mod.cover_update(seen, remaining, hit, draws, 10)
        res.append((seen, remaining, hit))
    for a, b in zip(*res):
        assert np.array_equal(a, b)


def test_fallback_selected_by_environment():
    import subprocess
    import sys

    code = "import shufflelab; print(shufflelab.BACKEND)"
    out = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True,
                         env={"SHUFFLE_LAB_PURE": "1", "PATH": ""}, check=True)
    assert out.stdout.strip() == "numpy"
