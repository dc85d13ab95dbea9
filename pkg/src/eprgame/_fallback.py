"""Pure-Python/numpy implementations of the hot kernels.

Mirrors ``_kernels.pyx`` function for function; ``eprgame.kernels`` picks
one of the two at import time.
"""
import math

import numpy as np

BACKEND = "python"

# Above this length the symmetric-sum recurrence carries a running
# compensation term per coefficient.
COMPENSATION_THRESHOLD = 64


def sym_sums(values):
    """Elementary symmetric sums e_0..e_N of ``values``."""
    v = np.asarray(values, dtype=float)
    n = v.shape[0]
    e = np.zeros(n + 1)
    e[0] = 1.0
    if n <= COMPENSATION_THRESHOLD:
        for i in range(n):
            e[1:i + 2] += v[i] * e[0:i + 1]
        return e
    c = np.zeros(n + 1)
    for i in range(n):
        x = v[i]
        hi = e[1:i + 2]
        p = x * e[0:i + 1]
        s = hi + p
        bp = s - hi
        err = (hi - (s - bp)) + (p - bp)
        c[1:i + 2] += err + x * c[0:i + 1]
        e[1:i + 2] = s
    return e + c


def omega(x1, x2):
    """Alternating even-subset aggregate via the paired-product recurrence.

    ``even`` accumulates terms with an even number of X2 factors, ``odd``
    those with one X2 factor still unpaired; pairing two X2 factors costs a
    sign.
    """
    even, odd = 1.0, 0.0
    for a, b in zip(np.asarray(x1, dtype=float), np.asarray(x2, dtype=float)):
        even, odd = even * a - odd * b, odd * a + even * b
    return float(even)


def _as_list(values, n):
    out = np.asarray(values, dtype=float)
    if out.ndim != 1 or out.shape[0] != n:
        raise ValueError("outcome length does not match coefficient count")
    return out.tolist()


def ghz_prob(bits, k, cos_g, omega_term):
    """Unclamped GHZ outcome probability for one outcome given as b"0101...".

    ``omega_term`` is the already signed product sign(N) * Omega * sin(gamma).
    The even and odd parts of the symmetric sums of z_i = eps_i K_i are
    accumulated directly (even + odd = prod(1 + z), even - odd = prod(1 - z)),
    which keeps every step a product of non-negative factors.
    """
    n = len(bits)
    even, odd, parity = 1.0, 0.0, 1.0
    for b, kk in zip(bits, _as_list(k, n)):
        if b == 49:
            kk = -kk
            parity = -parity
        even, odd = even + kk * odd, odd + kk * even
    return math.ldexp(even + cos_g * odd + parity * omega_term, -n)


def w_prob(bits, k, x1, x2):
    """Unclamped W outcome probability for one outcome given as b"0101...".

    ``single`` is sum_r (N - 2r) e_r = sum_i (1 - z_i) prod_{j != i} (1 + z_j);
    ``done`` is the pair sum over i < j of eps_i eps_j (X1_i X1_j + X2_i X2_j)
    times prod over the remaining players of (1 + z).
    """
    n = len(bits)
    base, single, px, py, done = 1.0, 0.0, 0.0, 0.0, 0.0
    for b, kk, a, c in zip(bits, _as_list(k, n), _as_list(x1, n), _as_list(x2, n)):
        s = -1.0 if b == 49 else 1.0
        z = s * kk
        f = 1.0 + z
        done = done * f + s * (px * a + py * c)
        px = px * f + base * s * a
        py = py * f + base * s * c
        single = single * f + base * (1.0 - z)
        base *= f
    return math.ldexp(single + 2.0 * done, -n) / n


def _expand(arrays, z):
    # children of each prefix: bit 0 -> +z, bit 1 -> -z, appended as lowest bit
    return [np.stack([a, a], axis=1).reshape(-1) for a in arrays], np.tile([z, -z], arrays[0].shape[0])


def ghz_dense(k, cos_g, omega_term):
    """All 2^N GHZ probabilities (player 1 = most significant bit).

    Uses the parity-collapsed form of the symmetric-sum recurrence, shared
    across outcomes with a common prefix.
    """
    kk = np.asarray(k, dtype=float)
    n = kk.shape[0]
    even = np.ones(1)
    odd = np.zeros(1)
    parity = np.ones(1)
    for q in range(n):
        (even, odd, parity), z = _expand([even, odd, parity], kk[q])
        even, odd = even + z * odd, odd + z * even
        parity = parity * np.tile([1.0, -1.0], parity.shape[0] // 2)
    return np.ldexp(even + cos_g * odd + parity * omega_term, -n)


def w_dense(k, x1, x2):
    """All 2^N W-state probabilities."""
    kk = np.asarray(k, dtype=float)
    a1 = np.asarray(x1, dtype=float)
    a2 = np.asarray(x2, dtype=float)
    n = kk.shape[0]
    base = np.ones(1)
    single = np.zeros(1)
    px = np.zeros(1)
    py = np.zeros(1)
    done = np.zeros(1)
    for q in range(n):
        (base, single, px, py, done), z = _expand([base, single, px, py, done], kk[q])
        s = np.tile([1.0, -1.0], base.shape[0] // 2)
        f = 1.0 + z
        done = done * f + s * (px * a1[q] + py * a2[q])
        px = px * f + base * s * a1[q]
        py = py * f + base * s * a2[q]
        single = single * f + base * (1.0 - z)
        base = base * f
    return np.ldexp(single + 2.0 * done, -n) / n
