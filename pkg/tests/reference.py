"""Deliberately naive reference computations used as test oracles.

Everything here enumerates subsets or sums term by term; nothing is shared
with the recurrences in the package.
"""
import itertools
import math

import numpy as np


def brute_sym_sums(values):
    n = len(values)
    return [
        math.fsum(math.prod(c) for c in itertools.combinations(values, r)) if r else 1.0
        for r in range(n + 1)
    ]


def brute_omega(x1, x2):
    n = len(x1)
    total = 0.0
    for r in range(0, n + 1, 2):
        for subset in itertools.combinations(range(n), r):
            term = (-1) ** (r // 2)
            for i in range(n):
                term *= x2[i] if i in subset else x1[i]
            total += term
    return total


def brute_ghz_prob(k, x1, x2, gamma, bits):
    """GHZ outcome probability by subset enumeration (sign of Omega term: (-1)^N)."""
    n = len(k)
    eps = [1 - 2 * int(b) for b in bits]
    z = [e * kk for e, kk in zip(eps, k)]
    e = brute_sym_sums(z)
    even = sum(e[r] for r in range(0, n + 1, 2))
    odd = sum(e[r] for r in range(1, n + 1, 2))
    parity = math.prod(eps)
    return (even + math.cos(gamma) * odd + (-1) ** n * parity * brute_omega(x1, x2) * math.sin(gamma)) / 2 ** n


def brute_w_prob(k, x1, x2, bits):
    """W outcome probability: single sum plus pair terms over all subsets."""
    n = len(k)
    eps = [1 - 2 * int(b) for b in bits]
    z = [e * kk for e, kk in zip(eps, k)]
    e = brute_sym_sums(z)
    first = sum((n - 2 * r) * e[r] for r in range(n + 1))
    pairs = 0.0
    for i, j in itertools.combinations(range(n), 2):
        rest = [q for q in range(n) if q not in (i, j)]
        for r in range(len(rest) + 1):
            for subset in itertools.combinations(rest, r):
                pairs += eps[i] * eps[j] * (x1[i] * x1[j] + x2[i] * x2[j]) * math.prod(z[q] for q in subset)
    return (first + 2 * pairs) / (n * 2 ** n)


def printed_three_player_payoff(a, x, gamma):
    """Three-player embedded payoff for player 1, written out term by term.

    ``a`` maps index strings such as "110" to coefficients.
    """
    y = [1 - 2 * v for v in x]
    return (
        a["000"] + a["011"] * y[1] * y[2] + a["110"] * y[0] * (y[1] + y[2])
        - math.cos(gamma) * (a["111"] * y[0] * y[1] * y[2] + a["100"] * y[0] + a["001"] * (2 - 2 * x[1] - 2 * x[2]))
    )


def printed_three_player_bracket(a, x_star, gamma):
    """Bracket multiplying (x1* - x1) in the three-player NE condition."""
    return (
        a["110"] * (2 * x_star[1] - 1) + a["101"] * (2 * x_star[2] - 1)
        + math.cos(gamma) * (a["100"] + a["111"] * (2 * x_star[1] - 1) * (2 * x_star[2] - 1))
    )


def random_rotor_kappa(rng, n):
    alphas = rng.uniform(0, 2 * np.pi, size=(n, 3))
    kappas = rng.uniform(0, 2 * np.pi, size=n)
    return alphas, kappas
