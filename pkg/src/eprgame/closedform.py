"""Closed-form outcome distributions for GHZ-type and W-type states.

Every qubit i carries a rotor (alpha1, alpha2, alpha3) applied by the
supervisor and a detector angle kappa about e2.  The rotated qubit enters
the distributions only through three scalars: K (the component of the
rotated e3 axis along the detector), and X1, X2 (the rotated e1 and e2
axes, negated).  Aggregates over subsets of qubits are evaluated with
symmetric-sum recurrences from :mod:`eprgame.kernels`, never by subset
enumeration.

Outcome bit strings put player 1 leftmost; as integers player 1 is the
most significant bit.  Bit 0 ("spin-up") has sign +1, bit 1 has sign -1.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence, Union

import numpy as np

from . import kernels

# Sign conventions, fixed by exhaustive comparison with the state-vector
# oracle for N = 2..5 (see tests/test_conventions.py).
#
# K is taken with the positive sign (K = +1 at alpha = kappa = 0).  X1 and X2
# individually only enter through products whose overall sign is
# (-1)^N, so they keep the signs of the published component formulas and
# the whole ambiguity is carried by the sign of the Omega term, which
# alternates with N.
K_SIGN = 1
OMEGA_SIGN_BY_N_MOD_4 = {0: 1, 1: -1, 2: 1, 3: -1}

DENSE_LIMIT = 20
RANGE_TOL = 1e-10
# slack on |gamma| <= pi/2 so that rounded decimal input such as 1.5708 is accepted
GAMMA_SLACK = 1e-4


class Family(str, enum.Enum):
    GHZ = "ghz"
    W = "w"


class ProbabilityRangeError(ArithmeticError):
    """A closed-form probability fell outside [-1e-10, 1 + 1e-10].

    Roundoff cannot produce this; it indicates a broken sign convention.
    """


@dataclass(frozen=True)
class RotorAngles:
    alpha1: float = 0.0
    alpha2: float = 0.0
    alpha3: float = 0.0

    def __post_init__(self):
        for v in (self.alpha1, self.alpha2, self.alpha3):
            if not math.isfinite(v):
                raise ValueError(f"rotor angles must be finite, got {self}")

    def canonical(self) -> RotorAngles:
        """Same rotor with every angle reduced to [0, 2*pi)."""
        tau = 2 * math.pi
        return RotorAngles(self.alpha1 % tau, self.alpha2 % tau, self.alpha3 % tau)

    def as_tuple(self):
        return (self.alpha1, self.alpha2, self.alpha3)


IDENTITY_ROTOR = RotorAngles()


@dataclass(frozen=True, eq=False)
class CorrelationCoefficients:
    k: np.ndarray
    x1: np.ndarray
    x2: np.ndarray
    omega: float

    @property
    def n(self) -> int:
        return len(self.k)


@dataclass(frozen=True)
class MeasurementFrame:
    """Family, entanglement angle, rotors and chosen detector angles."""

    n_players: int
    family: Family
    gamma: float = 0.0
    rotors: tuple = ()
    kappas: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        rotors = tuple(r if isinstance(r, RotorAngles) else RotorAngles(*r) for r in self.rotors)
        if not rotors:
            rotors = (IDENTITY_ROTOR,) * self.n_players
        object.__setattr__(self, "rotors", rotors)
        object.__setattr__(self, "kappas", tuple(float(k) for k in self.kappas))
        if self.n_players < 2:
            raise ValueError(f"need at least 2 players, got {self.n_players}")
        if len(self.rotors) != self.n_players or len(self.kappas) != self.n_players:
            raise ValueError(
                f"expected {self.n_players} rotors and kappas, got "
                f"{len(self.rotors)} and {len(self.kappas)}"
            )
        if not all(math.isfinite(k) for k in self.kappas) or not math.isfinite(self.gamma):
            raise ValueError("angles must be finite")
        if self.family is Family.GHZ and abs(self.gamma) > math.pi / 2 + GAMMA_SLACK:
            raise ValueError(f"gamma must lie in [-pi/2, pi/2], got {self.gamma}")

    @classmethod
    def of(cls, family, kappas, gamma=0.0, rotors=None) -> MeasurementFrame:
        kappas = tuple(kappas)
        return cls(len(kappas), Family(family), gamma, tuple(rotors or ()), kappas)

    def with_kappas(self, kappas) -> MeasurementFrame:
        return MeasurementFrame(self.n_players, self.family, self.gamma, self.rotors, tuple(kappas))

    @cached_property
    def coefficients(self) -> CorrelationCoefficients:
        return correlation_coefficients(self.rotors, self.kappas)

    @cached_property
    def ghz_terms(self) -> tuple:
        """(cos gamma, signed Omega sin gamma), shared by every GHZ outcome."""
        sign = OMEGA_SIGN_BY_N_MOD_4[self.n_players % 4]
        return math.cos(self.gamma), sign * self.coefficients.omega * math.sin(self.gamma)


@dataclass(frozen=True)
class Outcome:
    bits: str

    def __post_init__(self):
        if not self.bits or self.bits.strip("01"):
            raise ValueError(f"outcome must be a non-empty 0/1 string, got {self.bits!r}")

    @classmethod
    def from_index(cls, index: int, n: int) -> Outcome:
        return cls(format(index, f"0{n}b"))

    @property
    def n(self) -> int:
        return len(self.bits)

    @property
    def index(self) -> int:
        return int(self.bits, 2)

    @property
    def signs(self) -> np.ndarray:
        return 1.0 - 2.0 * (np.frombuffer(self.bits.encode(), dtype=np.uint8) - 48)


OutcomeLike = Union[Outcome, str, Sequence[int]]


def as_outcome(outcome: OutcomeLike) -> Outcome:
    if isinstance(outcome, Outcome):
        return outcome
    if isinstance(outcome, str):
        return Outcome(outcome)
    return Outcome("".join(str(int(b)) for b in outcome))


@dataclass(frozen=True, eq=False)
class OutcomeDistribution:
    """Dense distribution over the 2^N outcomes, indexed by integer encoding."""

    n_players: int
    probabilities: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.probabilities.shape != (1 << self.n_players,):
            raise ValueError("probability vector must have length 2^N")

    def __getitem__(self, outcome) -> float:
        if isinstance(outcome, (int, np.integer)):
            return float(self.probabilities[outcome])
        o = as_outcome(outcome)
        if o.n != self.n_players:
            raise ValueError(f"outcome {o.bits} does not have {self.n_players} bits")
        return float(self.probabilities[o.index])

    def total(self) -> float:
        return float(math.fsum(self.probabilities))

    def items(self):
        for idx, p in enumerate(self.probabilities):
            yield format(idx, f"0{self.n_players}b"), float(p)

    def as_dict(self) -> dict:
        return dict(self.items())

    def marginal(self, players: Sequence[int]) -> OutcomeDistribution:
        """Distribution of the listed players' bits (0-based), in the given order."""
        n = self.n_players
        t = self.probabilities.reshape((2,) * n)
        rest = tuple(i for i in range(n) if i not in players)
        m = t.sum(axis=rest) if rest else t
        # axes of m are the kept players in ascending order
        order = [sorted(players).index(p) for p in players]
        return OutcomeDistribution(len(players), np.transpose(m, order).reshape(-1))


def k_coeff(rotor: RotorAngles, kappa: float) -> float:
    a1, _, a3 = rotor.as_tuple()
    return K_SIGN * (math.cos(kappa) * math.cos(a1) + math.sin(kappa) * math.sin(a1) * math.cos(a3))


def x_coeffs(rotor: RotorAngles, kappa: float) -> tuple:
    a1, a2, a3 = rotor.as_tuple()
    sk, ck = math.sin(kappa), math.cos(kappa)
    x1 = -sk * (math.cos(a1) * math.cos(a2) * math.cos(a3) - math.sin(a2) * math.sin(a3)) \
        + math.sin(a1) * math.cos(a2) * ck
    x2 = sk * (math.cos(a2) * math.sin(a3) + math.sin(a2) * math.cos(a3) * math.cos(a1)) \
        - math.sin(a1) * math.sin(a2) * ck
    return x1, x2


def correlation_coefficients(rotors, kappas) -> CorrelationCoefficients:
    """Vectorized K, X1, X2 for every qubit plus the aggregate Omega."""
    a = np.array([r.as_tuple() if isinstance(r, RotorAngles) else tuple(r) for r in rotors], dtype=float)
    kap = np.asarray(kappas, dtype=float)
    a1, a2, a3 = a[:, 0], a[:, 1], a[:, 2]
    sk, ck = np.sin(kap), np.cos(kap)
    s1, c1 = np.sin(a1), np.cos(a1)
    s2, c2 = np.sin(a2), np.cos(a2)
    s3, c3 = np.sin(a3), np.cos(a3)
    k = K_SIGN * (ck * c1 + sk * s1 * c3)
    x1 = -sk * (c1 * c2 * c3 - s2 * s3) + s1 * c2 * ck
    x2 = sk * (c2 * s3 + s2 * c3 * c1) - s1 * s2 * ck
    return CorrelationCoefficients(k, x1, x2, kernels.omega(x1, x2))


def omega(coeffs: CorrelationCoefficients) -> float:
    """Sum over even subsets S of (-1)^(|S|/2) prod_S X2 prod_(not S) X1."""
    return float(kernels.omega(coeffs.x1, coeffs.x2))


def sym_sums(values) -> np.ndarray:
    """Elementary symmetric sums e_0..e_N; compensated above N = 64."""
    v = np.asarray(values, dtype=float)
    if v.ndim != 1 or v.shape[0] < 1:
        raise ValueError("sym_sums needs a non-empty 1-D sequence")
    return kernels.sym_sums(v)


def omega_sign(n: int) -> int:
    return OMEGA_SIGN_BY_N_MOD_4[n % 4]


def check_probability(p: float) -> float:
    if not (-RANGE_TOL <= p <= 1 + RANGE_TOL):
        raise ProbabilityRangeError(f"probability {p!r} outside [0, 1]")
    return min(max(p, 0.0), 1.0)


def _bits_for(frame: MeasurementFrame, outcome: OutcomeLike) -> bytes:
    bits = outcome if isinstance(outcome, str) else as_outcome(outcome).bits
    if len(bits) != frame.n_players or bits.strip("01"):
        raise ValueError(f"outcome {bits!r} is not a {frame.n_players}-bit 0/1 string")
    return bits.encode("ascii")


def ghz_outcome_probability(frame: MeasurementFrame, outcome: OutcomeLike, *, check: bool = True) -> float:
    if frame.family is not Family.GHZ:
        raise ValueError("ghz_outcome_probability needs a GHZ frame")
    cos_g, omega_term = frame.ghz_terms
    p = kernels.ghz_prob(_bits_for(frame, outcome), frame.coefficients.k, cos_g, omega_term)
    return check_probability(p) if check else p


def w_outcome_probability(frame: MeasurementFrame, outcome: OutcomeLike, *, check: bool = True) -> float:
    if frame.family is not Family.W:
        raise ValueError("w_outcome_probability needs a W frame")
    c = frame.coefficients
    p = kernels.w_prob(_bits_for(frame, outcome), c.k, c.x1, c.x2)
    return check_probability(p) if check else p


def outcome_probability(frame: MeasurementFrame, outcome: OutcomeLike, *, check: bool = True) -> float:
    if frame.family is Family.GHZ:
        return ghz_outcome_probability(frame, outcome, check=check)
    return w_outcome_probability(frame, outcome, check=check)


def full_distribution(frame: MeasurementFrame, *, check: bool = True) -> OutcomeDistribution:
    """All 2^N probabilities; N is capped at DENSE_LIMIT.

    With ``check=False`` the raw closed-form values are returned without
    range checking or clamping.
    """
    n = frame.n_players
    if n > DENSE_LIMIT:
        raise ValueError(
            f"dense distribution limited to N <= {DENSE_LIMIT}; "
            "use outcome_probability for single outcomes"
        )
    c = frame.coefficients
    if frame.family is Family.GHZ:
        p = kernels.ghz_dense(c.k, *frame.ghz_terms)
    else:
        p = kernels.w_dense(c.k, c.x1, c.x2)
    if check:
        bad = (p < -RANGE_TOL) | (p > 1 + RANGE_TOL)
        if bad.any():
            i = int(np.argmax(bad))
            raise ProbabilityRangeError(
                f"probability {p[i]!r} for outcome {format(i, f'0{n}b')} outside [0, 1]"
            )
        p = np.clip(p, 0.0, 1.0)
    return OutcomeDistribution(n, p)
