from fractions import Fraction

import numpy as np
import pytest

from eprgame import _fallback, kernels
from reference import brute_omega, brute_sym_sums

BACKENDS = kernels.available_backends()
backend_param = pytest.mark.parametrize("mod", BACKENDS, ids=lambda m: m.BACKEND)


def exact_sym_sums(values):
    e = [Fraction(1)] + [Fraction(0)] * len(values)
    for i, v in enumerate(values):
        v = Fraction(v)
        for j in range(i + 1, 0, -1):
            e[j] += v * e[j - 1]
    return e


@backend_param
def test_sym_sums_small(mod):
    assert list(mod.sym_sums([1, 1, 1])) == [1, 3, 3, 1]
    assert list(mod.sym_sums([2, 3])) == [1, 5, 6]


@backend_param
def test_sym_sums_against_enumeration(mod):
    rng = np.random.default_rng(3)
    v = rng.uniform(-1, 1, 12)
    got = mod.sym_sums(v)
    ref = brute_sym_sums(list(v))
    for g, r in zip(got, ref):
        assert abs(g - r) <= 1e-12 * max(1.0, abs(r))


@backend_param
@pytest.mark.parametrize("n", [65, 200])
def test_sym_sums_compensated_path(mod, n):
    # alternating signs make the plain recurrence lose digits
    rng = np.random.default_rng(n)
    v = rng.uniform(0.5, 1.0, n) * np.where(np.arange(n) % 2, -1.0, 1.0)
    got = mod.sym_sums(v)
    ref = [float(x) for x in exact_sym_sums(v)]
    scale = max(abs(x) for x in ref)
    assert max(abs(g - r) for g, r in zip(got, ref)) <= 1e-13 * scale


@backend_param
def test_omega_against_enumeration(mod):
    x1 = [0.1, 0.2, 0.3, 0.4]
    x2 = [0.5, 0.6, 0.7, 0.8]
    assert abs(mod.omega(x1, x2) - brute_omega(x1, x2)) <= 1e-14
    rng = np.random.default_rng(5)
    for n in range(1, 9):
        a, b = rng.uniform(-1, 1, (2, n))
        assert abs(mod.omega(a, b) - brute_omega(list(a), list(b))) <= 1e-13


@backend_param
def test_dense_matches_per_outcome(mod):
    rng = np.random.default_rng(11)
    n = 6
    k, x1, x2 = rng.uniform(-1, 1, (3, n))
    g = mod.ghz_dense(k, 0.3, 0.05)
    w = mod.w_dense(k, x1, x2)
    for idx in range(1 << n):
        bits = format(idx, f"0{n}b").encode()
        assert abs(g[idx] - mod.ghz_prob(bits, k, 0.3, 0.05)) <= 1e-15
        assert abs(w[idx] - mod.w_prob(bits, k, x1, x2)) <= 1e-15


@backend_param
@pytest.mark.parametrize("n", [30, 120])
def test_per_outcome_matches_exact_symmetric_sums(mod, n):
    rng = np.random.default_rng(n)
    k, x1, x2 = rng.uniform(-1, 1, (3, n))
    bits = "".join(rng.choice(["0", "1"], n)).encode()
    eps = [1 if b == ord("0") else -1 for b in bits]
    e = exact_sym_sums([s * Fraction(v) for s, v in zip(eps, k)])
    scale = Fraction(1, 2 ** n)
    cos_g, omega_term = Fraction(0.4), Fraction(0.1)
    parity = int(np.prod(eps))
    ghz = scale * (sum(e[0::2]) + cos_g * sum(e[1::2]) + parity * omega_term)
    assert abs(mod.ghz_prob(bits, k, 0.4, 0.1) - float(ghz)) <= 1e-15 * max(1.0, abs(float(ghz)))
    first = sum((n - 2 * r) * e[r] for r in range(n + 1))
    f = [1 + s * Fraction(v) for s, v in zip(eps, k)]
    pairs = Fraction(0)
    for i in range(n):
        for j in range(i + 1, n):
            rest = Fraction(1)
            for m in range(n):
                if m != i and m != j:
                    rest *= f[m]
            pairs += eps[i] * eps[j] * (Fraction(x1[i]) * Fraction(x1[j]) + Fraction(x2[i]) * Fraction(x2[j])) * rest
    w = scale * (first + 2 * pairs) / n
    assert abs(mod.w_prob(bits, k, x1, x2) - float(w)) <= 1e-15 * max(1.0, abs(float(w)))


@pytest.mark.skipif(len(BACKENDS) < 2, reason="compiled backend not built")
def test_backends_agree():
    fast = BACKENDS[1]
    rng = np.random.default_rng(17)
    for n in (3, 10, 80):
        k, x1, x2 = rng.uniform(-1, 1, (3, n))
        np.testing.assert_allclose(fast.sym_sums(k), _fallback.sym_sums(k), rtol=0, atol=1e-12)
        assert abs(fast.omega(x1, x2) - _fallback.omega(x1, x2)) <= 1e-14
        bits = "".join(rng.choice(["0", "1"], n)).encode()
        assert abs(fast.ghz_prob(bits, k, 0.4, 0.1) - _fallback.ghz_prob(bits, k, 0.4, 0.1)) <= 1e-15
        assert abs(fast.w_prob(bits, k, x1, x2) - _fallback.w_prob(bits, k, x1, x2)) <= 1e-15
    k, x1, x2 = rng.uniform(-1, 1, (3, 9))
    np.testing.assert_allclose(fast.ghz_dense(k, 0.2, 0.3), _fallback.ghz_dense(k, 0.2, 0.3), atol=1e-15)
    np.testing.assert_allclose(fast.w_dense(k, x1, x2), _fallback.w_dense(k, x1, x2), atol=1e-15)


@backend_param
def test_kernel_accepts_lists_and_arrays(mod):
    k = [0.5, -0.25, 1.0]
    assert mod.ghz_prob(b"010", k, 1.0, 0.0) == mod.ghz_prob(b"010", np.array(k), 1.0, 0.0)


@pytest.mark.skipif(len(BACKENDS) < 2, reason="compiled backend not built")
def test_compiled_rejects_length_mismatch():
    with pytest.raises(ValueError):
        BACKENDS[1].ghz_prob(b"01", [0.1, 0.2, 0.3], 1.0, 0.0)


def test_selected_backend_is_listed():
    assert kernels.BACKEND in {m.BACKEND for m in BACKENDS}
