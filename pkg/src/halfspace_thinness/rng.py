"""Counter-based random numbers (Philox4x64-10).

Every draw is a pure function of ``(seed, path, step, block)``, so results
do not depend on how paths are batched or which thread evaluates them.  The
block function is the same one numpy's :class:`numpy.random.Philox` uses; a
test checks the two agree word for word.
"""

import numpy as np

_M0 = np.uint64(0xD2E7470EE14C6C93)
_M1 = np.uint64(0xCA5A826395121157)
_W0 = np.uint64(0x9E3779B97F4A7C15)
_W1 = np.uint64(0xBB67AE8584CAA73B)
_LO32 = np.uint64(0xFFFFFFFF)
_S32 = np.uint64(32)
_ROUNDS = 10


def _mulhilo(a, b):
    """Full 64x64 -> 128 bit product split into (hi, lo) words."""
    a_lo, a_hi = a & _LO32, a >> _S32
    b_lo, b_hi = b & _LO32, b >> _S32
    ll = a_lo * b_lo
    lh = a_lo * b_hi
    hl = a_hi * b_lo
    hh = a_hi * b_hi
    mid = (ll >> _S32) + (lh & _LO32) + (hl & _LO32)
    hi = hh + (lh >> _S32) + (hl >> _S32) + (mid >> _S32)
    return hi, a * b


def philox4x64(counter, key):
    """Encrypt counters.

    Parameters
    ----------
    counter : ndarray of uint64, shape (..., 4)
    key : ndarray of uint64, shape (..., 2), broadcastable against counter

    Returns
    -------
    ndarray of uint64, shape (..., 4)
    """
    with np.errstate(over="ignore"):
        x0, x1, x2, x3 = (np.asarray(counter[..., i], dtype=np.uint64) for i in range(4))
        k0 = np.asarray(key[..., 0], dtype=np.uint64)
        k1 = np.asarray(key[..., 1], dtype=np.uint64)
        for r in range(_ROUNDS):
            if r:
                k0 = k0 + _W0
                k1 = k1 + _W1
            hi0, lo0 = _mulhilo(_M0, x0)
            hi1, lo1 = _mulhilo(_M1, x2)
            x0, x1, x2, x3 = hi1 ^ x1 ^ k0, lo1, hi0 ^ x3 ^ k1, lo0
        return np.stack(np.broadcast_arrays(x0, x1, x2, x3), axis=-1)


def to_unit_open(words):
    """Map uint64 words to doubles in the open interval (0, 1)."""
    # 52 bits so that k + 1/2 stays exactly representable below 2^52
    return ((words >> np.uint64(12)).astype(np.float64) + 0.5) * 2.0 ** -52


class CounterStream:
    """Uniform variates addressed by ``(path, step, block)`` under one seed."""

    def __init__(self, seed):
        self.seed = int(seed) & 0xFFFFFFFFFFFFFFFF
        self._key = np.array([self.seed, 0x5EED_5EED], dtype=np.uint64)

    def uniforms(self, paths, steps, block, lane=0):
        """Four uniforms per path, shape ``(len(paths), 4)``.

        ``steps`` is a scalar or one step index per path; ``block`` and
        ``lane`` separate independent draws made within one step.
        """
        paths = np.asarray(paths, dtype=np.uint64)
        ctr = np.zeros(paths.shape + (4,), dtype=np.uint64)
        ctr[..., 0] = np.asarray(steps, dtype=np.uint64)
        ctr[..., 1] = paths
        ctr[..., 2] = np.uint64(block)
        ctr[..., 3] = np.uint64(lane)
        return to_unit_open(philox4x64(ctr, self._key))

    def normals(self, paths, steps, lane, d):
        """``d`` standard normals per path via Box-Muller, shape ``(len(paths), d)``."""
        cols = []
        b = 0
        while len(cols) < d:
            u = self.uniforms(paths, steps, b, lane)
            for i in (0, 2):
                rad = np.sqrt(-2.0 * np.log(u[:, i]))
                ang = 2.0 * np.pi * u[:, i + 1]
                cols.extend([rad * np.cos(ang), rad * np.sin(ang)])
            b += 1
        return np.stack(cols[:d], axis=1)
