"""Nash equilibria, PD phase structure and equilibrium payoffs.

All functions taking an entanglement angle accept either ``gamma`` (radians)
or ``cos_gamma``.  Integer and Fraction inputs are kept exact throughout, so
boundaries such as cos(gamma) = 1/3 can be hit without roundoff.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .closedform import DENSE_LIMIT, GAMMA_SLACK, Family, MeasurementFrame, RotorAngles, full_distribution
from .game import (
    ACoefficients,
    FlitneyHollenbergPayoff,
    LinearPayoff,
    StrategyProfile,
    a_coeffs_from_tensor,
    embedded_payoff,
    expected_payoff,
    linear_embedded_payoff,
    mixed_strategy_payoff,
    tensor_from_linear,
)

APPENDIX_B_TENSOR_LIMIT = 12
W_GRID_POINTS = 32


def _exact(v):
    return Fraction(v) if isinstance(v, int) and not isinstance(v, bool) else v


def _exact_lp(lp: LinearPayoff) -> LinearPayoff:
    return LinearPayoff(*(_exact(v) for v in (lp.a, lp.b, lp.c, lp.d)))


def resolve_cos_gamma(gamma=None, cos_gamma=None):
    """cos(gamma) from exactly one of the two parametrizations."""
    if (gamma is None) == (cos_gamma is None):
        raise TypeError("give exactly one of gamma or cos_gamma")
    if cos_gamma is not None:
        if not 0 <= cos_gamma <= 1:
            raise ValueError(f"cos_gamma must lie in [0, 1], got {cos_gamma}")
        return _exact(cos_gamma)
    if abs(gamma) > math.pi / 2 + GAMMA_SLACK:
        raise ValueError(f"gamma must lie in [-pi/2, pi/2], got {gamma}")
    return math.cos(gamma)


def ne_bracket(lp: LinearPayoff, n_others_cooperating: int, gamma=None, n_players: int = 2, *, cos_gamma=None):
    """B = p2 (N-1-2 n_o) - cos(gamma) ((N-1) p2 + 2 p1).

    Cooperating is a best response when B >= 0, defecting when B <= 0.
    """
    if not 0 <= n_others_cooperating <= n_players - 1:
        raise ValueError("n_others_cooperating must lie in [0, N-1]")
    cg = resolve_cos_gamma(gamma, cos_gamma)
    lp = _exact_lp(lp)
    n = n_players
    return lp.p2 * (n - 1 - 2 * n_others_cooperating) - cg * ((n - 1) * lp.p2 + 2 * lp.p1)


@dataclass(frozen=True)
class NEPoint:
    """Symmetric pure equilibrium with ``n`` cooperators (players 0..n-1).

    ``at_lower_edge``: defectors are indifferent, so n+1 is also an
    equilibrium; ``at_upper_edge``: cooperators are indifferent, so n-1 is.
    """

    n: int
    n_players: int
    cos_gamma: float
    payoff_cooperate: Optional[float]
    payoff_defect: Optional[float]
    at_lower_edge: bool = False
    at_upper_edge: bool = False

    @property
    def profile(self) -> StrategyProfile:
        return StrategyProfile.symmetric_pure(self.n_players, self.n)


def ne_payoffs(lp: LinearPayoff, n_players: int, n: int, gamma=None, *, cos_gamma=None):
    """(Pi^c, Pi^d) at the symmetric pure profile with n cooperators.

    Pi^c is None for n = 0 and Pi^d is None for n = N.
    """
    if not 0 <= n <= n_players:
        raise ValueError("n must lie in [0, N]")
    cg = resolve_cos_gamma(gamma, cos_gamma)
    lp = _exact_lp(lp)
    prof = StrategyProfile.symmetric_pure(n_players, n).x
    coop = linear_embedded_payoff(lp, prof, 0, cos_gamma=cg) if n > 0 else None
    defect = linear_embedded_payoff(lp, prof, n_players - 1, cos_gamma=cg) if n < n_players else None
    return coop, defect


def find_symmetric_pure_NE(lp: LinearPayoff, n_players: int, gamma=None, *, cos_gamma=None,
                           tol: float = 0.0) -> list:
    """All cooperator counts n at which no player gains by switching direction."""
    if n_players < 2:
        raise ValueError("need at least 2 players")
    cg = resolve_cos_gamma(gamma, cos_gamma)
    out = []
    for n in range(n_players + 1):
        coop_b = ne_bracket(lp, n - 1, n_players=n_players, cos_gamma=cg) if n > 0 else None
        def_b = ne_bracket(lp, n, n_players=n_players, cos_gamma=cg) if n < n_players else None
        if (coop_b is None or coop_b >= -tol) and (def_b is None or def_b <= tol):
            pc, pd = ne_payoffs(lp, n_players, n, cos_gamma=cg)
            out.append(NEPoint(
                n, n_players, cg, pc, pd,
                at_lower_edge=def_b is not None and abs(def_b) <= tol,
                at_upper_edge=coop_b is not None and abs(coop_b) <= tol,
            ))
    return out


def deviation_bracket(acoeffs: ACoefficients, profile, player: int = 0, gamma=None, *, cos_gamma=None):
    """Half the payoff change when ``player`` switches from defect to cooperate.

    Pi(x*) - Pi(x) = 2 (x* - x) * bracket, so x* is a best response when the
    bracket has the sign of (x* - x) for all x.
    """
    cg = resolve_cos_gamma(gamma, cos_gamma)
    prof = StrategyProfile(tuple(profile.x if isinstance(profile, StrategyProfile) else profile))
    hi = embedded_payoff(acoeffs, profile=prof.replace(player, 1), player=player, cos_gamma=cg)
    lo = embedded_payoff(acoeffs, profile=prof.replace(player, 0), player=player, cos_gamma=cg)
    return (hi - lo) / 2


def symmetric_pure_NE_from_acoeffs(acoeffs: ACoefficients, gamma=None, *, cos_gamma=None,
                                   tol: float = 1e-12) -> list:
    """Numerical symmetric pure NE search for any symmetric a-coefficient pattern."""
    if acoeffs.pattern is None:
        raise ValueError("symmetric search needs pattern-form coefficients")
    cg = resolve_cos_gamma(gamma, cos_gamma)
    n_players = acoeffs.n
    out = []
    for n in range(n_players + 1):
        prof = StrategyProfile.symmetric_pure(n_players, n)
        coop_b = deviation_bracket(acoeffs, prof, 0, cos_gamma=cg) if n > 0 else None
        def_b = deviation_bracket(acoeffs, prof, n_players - 1, cos_gamma=cg) if n < n_players else None
        if (coop_b is None or coop_b >= -tol) and (def_b is None or def_b <= tol):
            pc = embedded_payoff(acoeffs, profile=prof, player=0, cos_gamma=cg) if n > 0 else None
            pd = embedded_payoff(acoeffs, profile=prof, player=n_players - 1, cos_gamma=cg) \
                if n < n_players else None
            out.append(NEPoint(
                n, n_players, cg, pc, pd,
                at_lower_edge=def_b is not None and abs(def_b) <= tol,
                at_upper_edge=coop_b is not None and abs(coop_b) <= tol,
            ))
    return out


def max_deviation_gain(payoff, setup, profile, player: int, grid=None) -> float:
    """Largest payoff gain over unilateral deviations x in ``grid`` (default 0, 0.1, ..., 1)."""
    if grid is None:
        grid = [i / 10 for i in range(11)]
    prof = profile if isinstance(profile, StrategyProfile) else StrategyProfile(tuple(profile))
    base = mixed_strategy_payoff(payoff, setup, prof, player)
    return max(mixed_strategy_payoff(payoff, setup, prof.replace(player, x), player) - base for x in grid)


# --- PD phase structure ---------------------------------------------------

@dataclass(frozen=True)
class Affine:
    """intercept + slope * cos(gamma)."""

    intercept: object
    slope: object

    def __call__(self, c):
        return self.intercept + self.slope * c


@dataclass(frozen=True)
class Zone:
    n: int
    lo: object
    hi: object
    payoff_cooperate: Optional[Affine]
    payoff_defect: Optional[Affine]


def _fmt(v) -> str:
    return "" if v is None else format(float(v), ".17g")


def _json_value(v):
    if v is None or isinstance(v, float):
        return v
    if isinstance(v, Fraction):
        return str(v) if v.denominator != 1 else v.numerator
    return v


def _from_json_value(v):
    if isinstance(v, str):
        return Fraction(v)
    return v


CSV_COLUMNS = (
    "n", "cos_gamma_lo", "cos_gamma_hi",
    "payoff_coop_at_lo", "payoff_coop_at_hi", "payoff_defect_at_lo", "payoff_defect_at_hi",
)


@dataclass(frozen=True)
class PhaseDiagram:
    lp: LinearPayoff
    n_players: int
    zones: tuple = field(default_factory=tuple)

    def zone_for(self, cos_gamma) -> list:
        return [z for z in self.zones if z.lo <= cos_gamma <= z.hi]

    def rows(self) -> list:
        out = []
        for z in self.zones:
            c, d = z.payoff_cooperate, z.payoff_defect
            out.append((
                z.n, z.lo, z.hi,
                c(z.lo) if c else None, c(z.hi) if c else None,
                d(z.lo) if d else None, d(z.hi) if d else None,
            ))
        return out

    def to_csv(self) -> str:
        lines = [",".join(CSV_COLUMNS)]
        for r in self.rows():
            lines.append(",".join([str(r[0])] + [_fmt(v) for v in r[1:]]))
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        def aff(a):
            return None if a is None else {"intercept": _json_value(a.intercept), "slope": _json_value(a.slope)}

        body = {
            "payoff": {k: _json_value(v) for k, v in self.lp.to_dict().items()},
            "n_players": self.n_players,
            "zones": [
                {
                    "n": z.n, "cos_gamma_lo": _json_value(z.lo), "cos_gamma_hi": _json_value(z.hi),
                    "payoff_cooperate": aff(z.payoff_cooperate), "payoff_defect": aff(z.payoff_defect),
                }
                for z in self.zones
            ],
        }
        return json.dumps(body, indent=2)

    @classmethod
    def from_json(cls, text: str) -> PhaseDiagram:
        obj = json.loads(text)

        def aff(a):
            return None if a is None else Affine(_from_json_value(a["intercept"]), _from_json_value(a["slope"]))

        p = obj["payoff"]
        lp = LinearPayoff(*(_from_json_value(p[k]) for k in "abcd"))
        zones = tuple(
            Zone(z["n"], _from_json_value(z["cos_gamma_lo"]), _from_json_value(z["cos_gamma_hi"]),
                 aff(z["payoff_cooperate"]), aff(z["payoff_defect"]))
            for z in obj["zones"]
        )
        return cls(lp, int(obj["n_players"]), zones)


def _require_pd(lp: LinearPayoff):
    if lp.game_class() != "PD":
        raise ValueError(f"payoff {lp.to_dict()} is not a Prisoner's Dilemma")
    if lp.p2 == 0:
        raise ValueError("phase boundaries need p2 != 0 (delta = 2 p1 / p2 undefined)")


def _affine_payoffs(lp, n_players, n):
    c0, d0 = ne_payoffs(lp, n_players, n, cos_gamma=0)
    c1, d1 = ne_payoffs(lp, n_players, n, cos_gamma=1)
    return (Affine(c0, c1 - c0) if c0 is not None else None,
            Affine(d0, d1 - d0) if d0 is not None else None)


def pd_phase_boundaries(lp: LinearPayoff, n_players: int) -> PhaseDiagram:
    """Equilibrium zones n = 0..floor(N/2) over cos(gamma) in [0, 1].

    Zone n spans [(N-1-2n)/(N-1+delta), (N+1-2n)/(N-1+delta)] clipped to
    [0, 1]; neighbouring zones share their endpoint, where both counts are
    equilibria.
    """
    _require_pd(lp)
    if n_players < 2:
        raise ValueError("need at least 2 players")
    ex = _exact_lp(lp)
    n_ = n_players
    denom = (n_ - 1) * ex.p2 + 2 * ex.p1
    zones = []
    for n in range(n_ // 2 + 1):
        lo = max(_exact(0), (n_ - 1 - 2 * n) * ex.p2 / denom)
        hi = min(_exact(1), (n_ + 1 - 2 * n) * ex.p2 / denom)
        if hi < lo:
            continue
        zones.append(Zone(n, lo, hi, *_affine_payoffs(ex, n_, n)))
    return PhaseDiagram(lp, n_players, tuple(zones))


def max_entanglement_payoffs(lp: LinearPayoff, n_players: int):
    """(Pi^c, Pi^d) at cos(gamma) = 0 for the equilibrium count floor(N/2).

    Equal for even N; differ by (c - a)/2 for odd N.
    """
    if n_players < 2:
        raise ValueError("need at least 2 players")
    ex = _exact_lp(lp)
    base = 2 * (ex.b + ex.d) + (ex.c + ex.a) * n_players
    odd = ex.p2 if n_players % 2 else 0
    return (base + odd) / 4, (base - odd) / 4


def boundary_payoff_curve(lp: LinearPayoff, n_players: int, gamma=None, *, cos_gamma=None):
    """Defector payoff along the lower zone edges, as a function of cos(gamma).

    (2(b+d) - p2 + (c+a) N - (c+a)(N-1+delta) cos^2 gamma) / 4, which for the
    standard PD is -3 + 7/4 (N+1) sin^2 gamma.
    """
    _require_pd(lp)
    cg = resolve_cos_gamma(gamma, cos_gamma)
    ex = _exact_lp(lp)
    n = n_players
    spread = ((n - 1) * ex.p2 + 2 * ex.p1) / ex.p2
    return (2 * (ex.b + ex.d) - ex.p2 + (ex.c + ex.a) * n - (ex.c + ex.a) * spread * cg * cg) / 4


# --- W-state analysis -----------------------------------------------------

def w_frame(kappas, rotors=None) -> MeasurementFrame:
    return MeasurementFrame.of(Family.W, kappas, 0.0, rotors)


def w_payoff(payoff, kappas, rotors=None, player: int = 0) -> float:
    """Expected payoff of ``player`` when every qubit of a W state is measured at ``kappas``."""
    return expected_payoff(full_distribution(w_frame(kappas, rotors)), payoff, player)


def w_payoff_from_acoeffs(acoeffs: ACoefficients, kappas, rotors=None) -> float:
    """W-state payoff written directly in a-coefficients (small N).

    (1/N) [ sum_S (N - 2|S|) a^S K_S + 2 sum_{i<j} (X1_i X1_j + X2_i X2_j)
    sum_{T disjoint from i,j} a^{T+i+j} K_T ].
    """
    from .closedform import correlation_coefficients

    n = acoeffs.n
    coeffs = correlation_coefficients(rotors if rotors is not None else (RotorAngles(),) * n, kappas)
    a = acoeffs.to_dense()
    k = coeffs.k
    total = 0.0
    for mask in range(1 << n):
        members = [q for q in range(n) if mask >> (n - 1 - q) & 1]
        total += (n - 2 * len(members)) * a[mask] * math.prod(k[q] for q in members)
    for i in range(n):
        for j in range(i + 1, n):
            xx = coeffs.x1[i] * coeffs.x1[j] + coeffs.x2[i] * coeffs.x2[j]
            pair = (1 << (n - 1 - i)) | (1 << (n - 1 - j))
            for mask in range(1 << n):
                if mask & pair:
                    continue
                members = [q for q in range(n) if mask >> (n - 1 - q) & 1]
                total += 2 * xx * a[mask | pair] * math.prod(k[q] for q in members)
    return total / n


def kappa_grid(points: int = W_GRID_POINTS) -> np.ndarray:
    return 2 * np.pi * np.arange(points) / points


def w_best_kappa_gain(payoff, kappas, player: int, points: int = W_GRID_POINTS) -> float:
    """Largest gain ``player`` can get by re-choosing its own kappa on the grid."""
    base = w_payoff(payoff, kappas, player=player)
    best = base
    for k in kappa_grid(points):
        trial = list(kappas)
        trial[player] = k
        best = max(best, w_payoff(payoff, trial, player=player))
    return best - base


def w_symmetric_stable_kappas(payoff, n_players: int, points: int = W_GRID_POINTS, tol: float = 1e-9) -> list:
    """Grid angles kappa such that, with everyone at kappa, no player improves alone."""
    out = []
    for k in kappa_grid(points):
        prof = [float(k)] * n_players
        if all(w_best_kappa_gain(payoff, prof, p, points) <= tol for p in range(n_players)):
            out.append(float(k))
    return out


@dataclass(frozen=True)
class WOptimum:
    kappas: tuple
    payoff: object
    numeric_payoff: Optional[float]
    max_unilateral_gain: Optional[float]


def w_pd_optimum(lp: LinearPayoff, n_players: int, points: int = W_GRID_POINTS,
                 check_grid: bool = True) -> WOptimum:
    """All-defect W-state PD outcome: everyone measures at kappa = pi.

    Payoff c + d - (c + d - (a + b)) / N.  ``numeric_payoff`` re-evaluates it
    from the W distribution (N <= 20); with ``check_grid`` the largest
    unilateral gain over the kappa grid is computed (expected to be <= 0).
    """
    if lp.game_class() != "PD":
        raise ValueError(f"payoff {lp.to_dict()} is not a Prisoner's Dilemma")
    if n_players < 2:
        raise ValueError("need at least 2 players")
    ex = _exact_lp(lp)
    analytic = ex.c + ex.d - (ex.c + ex.d - (ex.a + ex.b)) / n_players
    kappas = (math.pi,) * n_players
    numeric = w_payoff(lp, kappas) if n_players <= DENSE_LIMIT else None
    gain = None
    if check_grid and numeric is not None:
        gain = max(w_best_kappa_gain(lp, kappas, p, points) for p in range(n_players))
    return WOptimum(kappas, analytic, numeric, gain)


# --- Alternative piecewise payoff ----------------------------------------

def appendix_b_pattern(n_players: int) -> dict:
    """Closed-form a-coefficient pattern of the piecewise PD payoff (exact)."""
    n = n_players
    u = Fraction(1, 1 << n)
    pattern = {(False, 0): 2 * (n - 1) + u, (True, 1): -1 + u, (False, 1): 2 - u}
    for k in range(2, n + 1):
        pattern[(True, k)] = (-1) ** (k + 1) * u
        if k <= n - 1:
            pattern[(False, k)] = (-1) ** k * u
    return pattern


def appendix_b_coefficients(n_players: int, player: int = 0) -> ACoefficients:
    """a-coefficients of the piecewise payoff; tensor transform up to 12 players."""
    if n_players < 2:
        raise ValueError("need at least 2 players")
    if n_players <= APPENDIX_B_TENSOR_LIMIT:
        dense = a_coeffs_from_tensor(tensor_from_linear(FlitneyHollenbergPayoff(), n_players), player)
        return ACoefficients(n_players, player, pattern=dense.to_pattern())
    return ACoefficients(n_players, player, pattern=appendix_b_pattern(n_players))
