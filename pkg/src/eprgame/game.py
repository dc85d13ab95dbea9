"""Payoff structures, a-coefficients and expected payoffs.

Conventions: players are indexed from 0 (player 1 of the literature is
index 0 and the most significant outcome bit).  "Cooperate" means choosing
the first detector direction kappa1; under the classical embedding that
direction yields outcome bit 0, so outcome payoffs count 0-bits as
cooperators and x[i] is player i's probability of cooperating.
"""
from __future__ import annotations

import enum
import itertools
import json
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Mapping, Optional, Union

import numpy as np

from .closedform import (
    Family,
    MeasurementFrame,
    OutcomeDistribution,
    RotorAngles,
    correlation_coefficients,
    full_distribution,
    k_coeff,
)

MAX_TENSOR_PLAYERS = 16
EMBEDDING_TOL = 1e-12


class Role(str, enum.Enum):
    FIRST = "first-direction"
    SECOND = "second-direction"


@dataclass(frozen=True)
class LinearPayoff:
    """$0 = a*n + b for first-direction players, $1 = c*n + d otherwise.

    ``n`` is the number of players choosing their first direction.  Fields
    may be ints or Fractions for exact arithmetic downstream.
    """

    a: float
    b: float
    c: float
    d: float

    @property
    def p1(self):
        return self.d - (self.a + self.b)

    @property
    def p2(self):
        return self.c - self.a

    @property
    def delta(self):
        if self.p2 == 0:
            raise ZeroDivisionError("delta = 2 p1 / p2 is undefined for p2 = 0")
        return 2 * self.p1 / self.p2

    def value(self, n: int, cooperating: bool):
        return self.a * n + self.b if cooperating else self.c * n + self.d

    def game_class(self, n_players: Optional[int] = None) -> Optional[str]:
        """'PD', 'Chicken', 'Minority' or None.

        Minority needs the player count since it requires d = b + a N.
        """
        a, b, c, d = self.a, self.b, self.c, self.d
        if a > 0 and c >= a and d > a + b:
            return "PD"
        if a > 0 and c >= a and d < a + b:
            return "Chicken"
        if n_players is not None and a < 0 and c == -a and d == b + a * n_players:
            return "Minority"
        return None

    def to_dict(self) -> dict:
        return {"a": self.a, "b": self.b, "c": self.c, "d": self.d}


STANDARD_PD = LinearPayoff(3, -3, 4, 1)
CHICKEN = LinearPayoff(2, -1, 4, 0)


def minority_game(n_players: int) -> LinearPayoff:
    return LinearPayoff(-1, 0, 1, -n_players)


@dataclass(frozen=True)
class FlitneyHollenbergPayoff:
    """Piecewise PD payoff with a special case for a lone cooperator.

    Cooperator: 0 if m = 1 else 3 + 4 (m - 2); defector: 5 + 4 (m - 1), with
    m the number of cooperators.
    """

    def value(self, m: int, cooperating: bool):
        if cooperating:
            return 0 if m == 1 else 3 + 4 * (m - 2)
        return 5 + 4 * (m - 1)


CountPayoff = Union[LinearPayoff, FlitneyHollenbergPayoff]


def linear_payoff_value(lp: LinearPayoff, n_cooperators: int, role) -> float:
    role = Role(role)
    if n_cooperators < 0:
        raise ValueError("cooperator count must be non-negative")
    if role is Role.FIRST and n_cooperators < 1:
        raise ValueError("a first-direction player implies at least one cooperator")
    return lp.value(n_cooperators, role is Role.FIRST)


@dataclass(frozen=True, eq=False)
class PayoffTensor:
    """Explicit payoffs: ``entries[p, k]`` is player p's payoff at outcome index k."""

    n_players: int
    entries: np.ndarray = field(repr=False)

    def __post_init__(self):
        e = np.asarray(self.entries, dtype=float)
        if e.shape != (self.n_players, 1 << self.n_players):
            raise ValueError(f"tensor must have shape ({self.n_players}, {1 << self.n_players})")
        if not np.all(np.isfinite(e)):
            raise ValueError("payoff entries must be finite")
        object.__setattr__(self, "entries", e)

    @classmethod
    def symmetric(cls, first_player) -> PayoffTensor:
        """Expand player 0's payoffs to every player by swapping bit positions."""
        g = np.asarray(first_player, dtype=float)
        n = int(round(math.log2(g.shape[0])))
        if n > MAX_TENSOR_PLAYERS:
            raise ValueError(f"explicit tensors limited to N <= {MAX_TENSOR_PLAYERS}")
        t = g.reshape((2,) * n)
        rows = []
        for p in range(n):
            axes = list(range(n))
            axes[0], axes[p] = axes[p], axes[0]
            rows.append(np.transpose(t, axes).reshape(-1))
        return cls(n, np.array(rows))

    def player(self, p: int) -> np.ndarray:
        return self.entries[p]


@lru_cache(maxsize=32)
def _outcome_table(n: int):
    idx = np.arange(1 << n)
    bits = (idx[:, None] >> (n - 1 - np.arange(n))[None, :]) & 1
    return bits, n - bits.sum(axis=1)


def _count_payoff_vector(payoff, n: int, player: int) -> np.ndarray:
    bits, zeros = _outcome_table(n)
    coop = bits[:, player] == 0
    if isinstance(payoff, LinearPayoff):
        return np.where(coop, payoff.a * zeros + payoff.b, payoff.c * zeros + payoff.d).astype(float)
    return np.array([payoff.value(int(m), bool(c)) for m, c in zip(zeros, coop)], dtype=float)


def tensor_from_linear(payoff: CountPayoff, n: int) -> PayoffTensor:
    """Materialize a count-based payoff (linear or piecewise) for N players."""
    if n > MAX_TENSOR_PLAYERS:
        raise ValueError(f"explicit tensors limited to N <= {MAX_TENSOR_PLAYERS}")
    return PayoffTensor(n, np.array([_count_payoff_vector(payoff, n, p) for p in range(n)]))


@dataclass(frozen=True, eq=False)
class ACoefficients:
    """Signed averages a^{mask} of one player's payoffs.

    Either ``dense`` (all 2^N masks, player 0 = most significant bit) or
    ``pattern`` for symmetric games, keyed by (mask contains the player,
    number of ones).  Missing pattern keys are zero.
    """

    n: int
    player: int = 0
    dense: Optional[np.ndarray] = field(default=None, repr=False)
    pattern: Optional[Mapping] = None

    def __post_init__(self):
        if (self.dense is None) == (self.pattern is None):
            raise ValueError("give exactly one of dense or pattern")

    @staticmethod
    def _mask(key, n: int) -> int:
        if isinstance(key, (int, np.integer)):
            return int(key)
        if isinstance(key, str):
            if len(key) != n:
                raise ValueError(f"index {key!r} must have {n} digits")
            return int(key, 2)
        return sum(1 << (n - 1 - q) for q in key)

    def __getitem__(self, key):
        mask = self._mask(key, self.n)
        if self.dense is not None:
            return self.dense[mask]
        contains = bool(mask >> (self.n - 1 - self.player) & 1)
        return self.pattern.get((contains, bin(mask).count("1")), 0)

    def to_dense(self) -> np.ndarray:
        if self.dense is not None:
            return self.dense
        if self.n > MAX_TENSOR_PLAYERS:
            raise ValueError(f"dense coefficients limited to N <= {MAX_TENSOR_PLAYERS}")
        return np.array([float(self[m]) for m in range(1 << self.n)])

    def to_pattern(self, tol: float = 0.0) -> dict:
        """Collapse dense coefficients of a symmetric game to pattern form."""
        if self.pattern is not None:
            return dict(self.pattern)
        bits, zeros = _outcome_table(self.n)
        order = self.n - zeros
        contains = bits[:, self.player] == 1
        out = {}
        for key in {(bool(c), int(o)) for c, o in zip(contains, order)}:
            vals = self.dense[(contains == key[0]) & (order == key[1])]
            if np.ptp(vals) > tol:
                raise ValueError(f"coefficients are not symmetric for pattern {key}")
            if vals[0] != 0:
                out[key] = float(vals[0])
        return out


def a_coeffs_from_tensor(g: PayoffTensor, player: int = 0) -> ACoefficients:
    """a^{mask} = 2^-N sum_k (-1)^{bits of k under mask} G_k (Walsh-Hadamard)."""
    n = g.n_players
    if n > MAX_TENSOR_PLAYERS:
        raise ValueError(f"explicit tensors limited to N <= {MAX_TENSOR_PLAYERS}")
    t = g.player(player).reshape((2,) * n)
    for axis in range(n):
        lo, hi = np.take(t, 0, axis=axis), np.take(t, 1, axis=axis)
        t = np.stack([lo + hi, lo - hi], axis=axis)
    return ACoefficients(n, player, dense=t.reshape(-1) / (1 << n))


def a_coeffs_linear(lp: LinearPayoff, n: int, player: int = 0) -> ACoefficients:
    """Closed-form a-coefficients of a linear payoff; the series stops at order two."""
    if n < 2:
        raise ValueError("need at least 2 players")
    a, b, c, d, p1, p2 = lp.a, lp.b, lp.c, lp.d, lp.p1, lp.p2
    pattern = {
        (False, 0): (n * (c + a) - p2 + 2 * (b + d)) / 4,
        (True, 1): -((n - 1) * p2 + 2 * p1) / 4,
        (True, 2): -p2 / 4,
        (False, 1): (c + a) / 4,
    }
    return ACoefficients(n, player, pattern=pattern)


@dataclass(frozen=True)
class StrategyProfile:
    x: tuple

    def __post_init__(self):
        object.__setattr__(self, "x", tuple(self.x))
        if not all(0 <= v <= 1 for v in self.x):
            raise ValueError(f"cooperation probabilities must lie in [0, 1], got {self.x}")

    @classmethod
    def symmetric_pure(cls, n_players: int, n_cooperators: int) -> StrategyProfile:
        return cls((1,) * n_cooperators + (0,) * (n_players - n_cooperators))

    def __len__(self):
        return len(self.x)

    def replace(self, player: int, value) -> StrategyProfile:
        x = list(self.x)
        x[player] = value
        return StrategyProfile(tuple(x))


def _as_profile(profile) -> StrategyProfile:
    return profile if isinstance(profile, StrategyProfile) else StrategyProfile(tuple(profile))


def expected_payoff(dist: OutcomeDistribution, payoff, player: int = 0) -> float:
    """sum_k G^player_k P_k for a tensor or count-based payoff."""
    n = dist.n_players
    if isinstance(payoff, PayoffTensor):
        if payoff.n_players != n:
            raise ValueError(f"payoff has {payoff.n_players} players, distribution {n}")
        g = payoff.player(player)
    else:
        if not 0 <= player < n:
            raise ValueError(f"player {player} out of range")
        g = _count_payoff_vector(payoff, n, player)
    return float(g @ dist.probabilities)


@dataclass(frozen=True)
class EPRSetup:
    """Everything fixed before play: state, rotors and both detector angles per player."""

    family: Family
    gamma: float
    rotors: tuple
    kappa1: tuple
    kappa2: tuple

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        n = len(self.kappa1)
        if len(self.kappa2) != n or len(self.rotors) != n:
            raise ValueError("rotors, kappa1 and kappa2 must have one entry per player")

    @property
    def n_players(self) -> int:
        return len(self.kappa1)

    def frame(self, choices) -> MeasurementFrame:
        """Frame for a pure choice vector (True/1 = first direction)."""
        kappas = tuple(k1 if c else k2 for c, k1, k2 in zip(choices, self.kappa1, self.kappa2))
        return MeasurementFrame(self.n_players, self.family, self.gamma, self.rotors, kappas)


@dataclass(frozen=True)
class EmbeddingAngles:
    rotors: tuple
    kappa1: tuple
    kappa2: tuple
    valid: bool

    @property
    def n_players(self) -> int:
        return len(self.kappa1)

    def setup(self, gamma: float = 0.0, family=Family.GHZ) -> EPRSetup:
        return EPRSetup(Family(family), gamma, self.rotors, self.kappa1, self.kappa2)


def _embedding(rotors, kappa1, kappa2) -> EmbeddingAngles:
    ok = all(
        abs(k_coeff(r, k1) - 1) <= EMBEDDING_TOL and abs(k_coeff(r, k2) + 1) <= EMBEDDING_TOL
        for r, k1, k2 in zip(rotors, kappa1, kappa2)
    )
    if ok:
        for kappas in (kappa1, kappa2):
            if abs(correlation_coefficients(rotors, kappas).omega) > EMBEDDING_TOL:
                ok = False
    return EmbeddingAngles(tuple(rotors), tuple(kappa1), tuple(kappa2), ok)


def canonical_embedding(n: int, alpha2: float = 0.0, alpha3: float = 0.0) -> EmbeddingAngles:
    """First solution class: alpha1 = 0, kappa1 = 0, kappa2 = pi; alpha2, alpha3 free."""
    if n < 2:
        raise ValueError("need at least 2 players")
    rotors = (RotorAngles(0.0, alpha2, alpha3),) * n
    return _embedding(rotors, (0.0,) * n, (math.pi,) * n)


def second_class_embedding(n: int, alpha1: float, alpha2: float = 0.0) -> EmbeddingAngles:
    """Second solution class: alpha3 = 0, kappa1 = alpha1, kappa2 = alpha1 - pi."""
    if n < 2:
        raise ValueError("need at least 2 players")
    rotors = (RotorAngles(alpha1, alpha2, 0.0),) * n
    return _embedding(rotors, (alpha1,) * n, (alpha1 - math.pi,) * n)


def mixed_strategy_payoff(payoff, setup: EPRSetup, profile, player: int = 0) -> float:
    """Average of pure-choice expected payoffs weighted by prod x or (1 - x).

    Enumerates the pure choice vectors directly (zero-weight branches are
    skipped) and evaluates each through the closed-form distribution.
    """
    prof = _as_profile(profile)
    n = setup.n_players
    if len(prof) != n:
        raise ValueError(f"profile has {len(prof)} entries for {n} players")
    if n > MAX_TENSOR_PLAYERS:
        if isinstance(payoff, LinearPayoff) and setup.family is Family.GHZ and _embedding(
            setup.rotors, setup.kappa1, setup.kappa2
        ).valid:
            return linear_embedded_payoff(payoff, prof, player, setup.gamma)
        raise ValueError(f"direct enumeration limited to N <= {MAX_TENSOR_PLAYERS}")
    options = []
    for x in prof.x:
        opts = []
        if x > 0:
            opts.append((True, x))
        if x < 1:
            opts.append((False, 1 - x))
        options.append(opts)
    total = 0.0
    for combo in itertools.product(*options):
        w = math.prod(p for _, p in combo)
        dist = full_distribution(setup.frame([c for c, _ in combo]))
        total += w * expected_payoff(dist, payoff, player)
    return total


def _cos(gamma, cos_gamma):
    if (gamma is None) == (cos_gamma is None):
        raise TypeError("give exactly one of gamma or cos_gamma")
    return math.cos(gamma) if cos_gamma is None else cos_gamma


def embedded_payoff(acoeffs: ACoefficients, gamma=None, profile=(), player: Optional[int] = None,
                    *, cos_gamma=None) -> float:
    """Payoff under the classical embedding as a multilinear polynomial.

    sum over masks S of a^S * prod_{i in S} (2 x_i - 1), with odd-order
    terms weighted by cos(gamma).
    """
    cg = _cos(gamma, cos_gamma)
    x = _as_profile(profile).x
    n = acoeffs.n
    if len(x) != n:
        raise ValueError(f"profile has {len(x)} entries for {n} players")
    me = acoeffs.player if player is None else player
    y = [2 * v - 1 for v in x]
    if acoeffs.pattern is not None:
        others = [y[i] for i in range(n) if i != me]
        e = _exact_sym_sums(others)
        total = 0
        for (contains, order), val in acoeffs.pattern.items():
            rest = order - 1 if contains else order
            if not 0 <= rest <= n - 1:
                continue
            term = val * e[rest] * (y[me] if contains else 1)
            total += term * cg if order % 2 else term
        return total
    if me != acoeffs.player:
        raise ValueError("dense coefficients belong to another player")
    prods = np.ones(1)
    for v in y:
        prods = np.kron(prods, [1.0, v])
    _, zeros = _outcome_table(n)
    weight = np.where((n - zeros) % 2 == 1, cg, 1.0)
    return float(np.sum(acoeffs.dense * prods * weight))


def _exact_sym_sums(values):
    # plain recurrence that keeps Fractions exact; values here are short
    e = [1] + [0] * len(values)
    for i, v in enumerate(values):
        for j in range(i + 1, 0, -1):
            e[j] = e[j] + v * e[j - 1]
    return e


def linear_embedded_payoff(lp: LinearPayoff, profile, player: int = 0, gamma=None, *, cos_gamma=None):
    """Closed-form embedded payoff of a linear game for any N."""
    cg = _cos(gamma, cos_gamma)
    x = _as_profile(profile).x
    n = len(x)
    s = sum(1 - 2 * v for i, v in enumerate(x) if i != player)
    a, b, c, d, p1, p2 = lp.a, lp.b, lp.c, lp.d, lp.p1, lp.p2
    return (
        2 * (b + d) - p2 + (c + a) * (n - cg * s)
        + (1 - 2 * x[player]) * (cg * ((n - 1) * p2 + 2 * p1) - p2 * s)
    ) / 4


@dataclass(frozen=True)
class GameSpec:
    n_players: int
    payoff: Union[LinearPayoff, PayoffTensor]

    def to_json(self) -> str:
        if isinstance(self.payoff, LinearPayoff):
            body = {"linear": self.payoff.to_dict()}
        else:
            body = {"tensor": self.payoff.entries.tolist()}
        return json.dumps({"n_players": self.n_players, "payoff": body})

    @classmethod
    def from_json(cls, text: str) -> GameSpec:
        obj = json.loads(text)
        n = int(obj["n_players"])
        body = obj["payoff"]
        if "linear" in body:
            lin = body["linear"]
            return cls(n, LinearPayoff(lin["a"], lin["b"], lin["c"], lin["d"]))
        if "tensor" in body:
            t = np.asarray(body["tensor"], dtype=float)
            tensor = PayoffTensor.symmetric(t) if t.ndim == 1 else PayoffTensor(n, t)
            if tensor.n_players != n:
                raise ValueError("tensor size does not match n_players")
            return cls(n, tensor)
        raise ValueError("payoff must be {'linear': ...} or {'tensor': ...}")
