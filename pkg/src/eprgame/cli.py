"""Command-line interface: eprgame {dist,verify,equilibria,phase-diagram,payoff}."""
from __future__ import annotations

import argparse
import io
import json
import math
import os
import sys
import time
from fractions import Fraction

import numpy as np

from . import closedform as cf
from . import equilibrium as eq
from . import game
from .oracle import oracle_distribution

EXIT_INVALID = 2
EXIT_RANGE = 3
EXIT_VERIFY = 4
OUTPUT_DIR_ENV = "EPRGAME_OUTPUT_DIR"
VERIFY_MAX_N = 14
PRESETS = ("pd-standard", "minority", "chicken", "appendix-b")


class ConfigError(ValueError):
    pass


def fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, str):
        return v
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return format(float(v), ".17g")


def _num(v):
    if v is None or isinstance(v, (bool, int)):
        return v
    return float(v)


def parse_n_range(text: str) -> list:
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            values = list(range(int(lo), int(hi) + 1))
        else:
            values = [int(text)]
    except ValueError:
        raise ConfigError(f"invalid player count {text!r}; use N or LO..HI") from None
    if not values or min(values) < 2:
        raise ConfigError("player counts must be >= 2")
    return values


def single_n(text) -> int:
    values = parse_n_range(str(text))
    if len(values) != 1:
        raise ConfigError("this command takes a single --n")
    return values[0]


def parse_floats(text: str) -> list:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise ConfigError(f"invalid number list {text!r}") from None


def parse_payoff(text: str, n_players: int):
    """A LinearPayoff (exact Fractions) or the piecewise payoff for 'appendix-b'."""
    if text == "pd-standard":
        return game.LinearPayoff(*(Fraction(v) for v in (3, -3, 4, 1)))
    if text == "minority":
        return game.LinearPayoff(Fraction(-1), Fraction(0), Fraction(1), Fraction(-n_players))
    if text == "chicken":
        return game.LinearPayoff(*(Fraction(v) for v in (2, -1, 4, 0)))
    if text == "appendix-b":
        return game.FlitneyHollenbergPayoff()
    try:
        parts = [Fraction(t.strip()) for t in text.split(",")]
    except ValueError:
        raise ConfigError(f"invalid payoff {text!r}; use a,b,c,d or one of {', '.join(PRESETS)}") from None
    if len(parts) != 4:
        raise ConfigError("payoff needs exactly four values a,b,c,d")
    return game.LinearPayoff(*parts)


def _float_lp(lp):
    return game.LinearPayoff(*(float(v) for v in (lp.a, lp.b, lp.c, lp.d)))


def resolve_angle(args):
    """Returns (gamma, cos_gamma) with exactly one set; defaults to gamma = 0."""
    if args.gamma is not None and args.cos_gamma is not None:
        raise ConfigError("give at most one of --gamma and --cos-gamma")
    if args.cos_gamma is not None:
        try:
            c = Fraction(args.cos_gamma)
        except ValueError:
            raise ConfigError(f"invalid --cos-gamma {args.cos_gamma!r}") from None
        if not 0 <= c <= 1:
            raise ConfigError("--cos-gamma must lie in [0, 1]")
        return None, c
    return (args.gamma if args.gamma is not None else 0.0), None


def _gamma_value(gamma, cos_gamma) -> float:
    return gamma if gamma is not None else math.acos(float(cos_gamma))


def _per_qubit(values: list, n: int, name: str) -> list:
    if len(values) == 1:
        return values * n
    if len(values) != n:
        raise ConfigError(f"--{name} needs 1 or {n} values, got {len(values)}")
    return values


def parse_rotors(text, n: int) -> tuple:
    """'a1,a2,a3' for every qubit, or one triple per qubit separated by ';'."""
    if text is None:
        return (cf.IDENTITY_ROTOR,) * n
    triples = [parse_floats(t) for t in text.split(";")]
    if any(len(t) != 3 for t in triples):
        raise ConfigError("--alpha triples need exactly three angles")
    triples = _per_qubit(triples, n, "alpha")
    return tuple(cf.RotorAngles(*t) for t in triples)


def emit(text: str, out) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    path = out
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not os.path.isabs(path):
        path = os.path.join(base, path)
    parent = os.path.dirname(path)
    if parent:
        os.makedirs(parent, exist_ok=True)
    with open(path, "w", newline="") as fh:
        fh.write(text)


def csv_text(header, rows) -> str:
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for r in rows:
        buf.write(",".join(fmt(v) for v in r) + "\n")
    return buf.getvalue()


# --- commands --------------------------------------------------------------

def cmd_dist(args) -> int:
    n = single_n(args.n)
    gamma, cos_gamma = resolve_angle(args)
    kappas = _per_qubit(parse_floats(args.kappa), n, "kappa") if args.kappa else [0.0] * n
    frame = cf.MeasurementFrame(n, cf.Family(args.family), _gamma_value(gamma, cos_gamma),
                                parse_rotors(args.alpha, n), tuple(kappas))
    if args.outcome is not None:
        items = [(args.outcome, cf.outcome_probability(frame, args.outcome))]
        total = None
    else:
        if n > cf.DENSE_LIMIT:
            raise ConfigError(f"dense output limited to N <= {cf.DENSE_LIMIT}; use --outcome")
        dist = cf.full_distribution(frame)
        items = list(dist.items())
        total = dist.total()
    if args.format == "json":
        body = {"n_players": n, "family": frame.family.value, "gamma": frame.gamma,
                "probabilities": {k: float(v) for k, v in items}}
        if total is not None:
            body["total"] = total
        text = json.dumps(body, indent=2) + "\n"
    else:
        rows = list(items) + ([("total", total)] if total is not None else [])
        text = csv_text(("outcome", "probability"), rows)
    emit(text, args.out)
    return 0


def random_frame(rng: np.random.Generator, family: cf.Family, n: int) -> cf.MeasurementFrame:
    alphas = rng.uniform(0.0, 2 * math.pi, size=(n, 3))
    kappas = rng.uniform(0.0, 2 * math.pi, size=n)
    gamma = float(rng.uniform(-math.pi / 2, math.pi / 2))
    rotors = tuple(cf.RotorAngles(*map(float, a)) for a in alphas)
    return cf.MeasurementFrame(n, family, gamma, rotors, tuple(map(float, kappas)))


def verify_family(family, ns, samples: int, seed: int, timing: bool = False) -> list:
    """Max per-outcome |closed form - oracle| per player count.

    Closed-form probabilities are taken unchecked so a sign regression shows
    up as a deviation instead of an exception.
    """
    family = cf.Family(family)
    results = []
    for n in ns:
        if n > VERIFY_MAX_N:
            raise ConfigError(f"verify limited to N <= {VERIFY_MAX_N}")
        rng = np.random.default_rng([seed, n])
        max_dev = 0.0
        for _ in range(samples):
            frame = random_frame(rng, family, n)
            ref = oracle_distribution(frame).probabilities
            got = cf.full_distribution(frame, check=False).probabilities
            max_dev = max(max_dev, float(np.max(np.abs(got - ref))))
        row = {"family": family.value, "n": n, "samples": samples, "max_dev": max_dev}
        if timing:
            row.update(timing_comparison(family, n, seed))
        results.append(row)
    return results


def timing_comparison(family, n: int, seed: int, repeats: int = 200) -> dict:
    """Seconds per single-outcome closed-form query vs per oracle evaluation."""
    rng = np.random.default_rng([seed, n, 1])
    frame = random_frame(rng, cf.Family(family), n)
    outcome = "".join(rng.choice(["0", "1"], size=n))
    t0 = time.perf_counter()
    for _ in range(repeats):
        cf.outcome_probability(frame, outcome, check=False)
    t1 = time.perf_counter()
    oracle_reps = max(1, repeats // 20)
    for _ in range(oracle_reps):
        oracle_distribution(frame)[outcome]
    t2 = time.perf_counter()
    closed = (t1 - t0) / repeats
    oracle = (t2 - t1) / oracle_reps
    return {"closed_form_s": closed, "oracle_s": oracle, "speedup": oracle / closed}


def cmd_verify(args) -> int:
    ns = parse_n_range(str(args.n))
    if args.samples < 1:
        raise ConfigError("--samples must be positive")
    results = verify_family(args.family, ns, args.samples, args.seed, timing=args.timing)
    worst = max(r["max_dev"] for r in results)
    passed = worst <= args.tol
    if args.format == "json":
        text = json.dumps({"tol": args.tol, "seed": args.seed, "passed": passed, "results": results}, indent=2) + "\n"
    else:
        header = ["family", "n", "samples", "max_dev"] + (["closed_form_s", "oracle_s", "speedup"] if args.timing else [])
        rows = [[r[h] for h in header] for r in results]
        text = csv_text(header, rows) + f"# max_dev={fmt(worst)} tol={fmt(args.tol)} {'PASS' if passed else 'FAIL'}\n"
    emit(text, args.out)
    return 0 if passed else EXIT_VERIFY


EQ_HEADER = ("n", "payoff_cooperate", "payoff_defect", "at_lower_edge", "at_upper_edge")


def _equilibria(payoff, n: int, gamma, cos_gamma) -> list:
    if isinstance(payoff, game.FlitneyHollenbergPayoff):
        acoeffs = eq.appendix_b_coefficients(n)
        if cos_gamma is not None:
            return eq.symmetric_pure_NE_from_acoeffs(acoeffs, cos_gamma=float(cos_gamma))
        return eq.symmetric_pure_NE_from_acoeffs(acoeffs, gamma)
    if cos_gamma is not None:
        return eq.find_symmetric_pure_NE(payoff, n, cos_gamma=cos_gamma)
    return eq.find_symmetric_pure_NE(payoff, n, gamma)


def cmd_equilibria(args) -> int:
    n = single_n(args.n)
    payoff = parse_payoff(args.payoff, n)
    gamma, cos_gamma = resolve_angle(args)
    if args.require_class and isinstance(payoff, game.LinearPayoff) and payoff.game_class(n) is None:
        raise ConfigError(f"payoff {args.payoff} is neither PD, Chicken nor Minority for N={n}")
    points = _equilibria(payoff, n, gamma, cos_gamma)
    rows = [(p.n, p.payoff_cooperate, p.payoff_defect, p.at_lower_edge, p.at_upper_edge) for p in points]
    if args.format == "json":
        body = {"n_players": n, "payoff": args.payoff,
                "equilibria": [dict(zip(EQ_HEADER, map(_num, r))) for r in rows]}
        text = json.dumps(body, indent=2) + "\n"
    else:
        text = csv_text(EQ_HEADER, rows)
    emit(text, args.out)
    return 0


def boundary_curve_points(lp, n: int, samples: int) -> list:
    """(cos_gamma, payoff_defect, kind) at every lower zone edge plus a uniform sample."""
    pts = []
    for k in range(n // 2 + 1):
        c = Fraction(n - 1 - 2 * k) * lp.p2 / ((n - 1) * lp.p2 + 2 * lp.p1)
        if 0 <= c <= 1:
            pts.append((c, eq.boundary_payoff_curve(lp, n, cos_gamma=c), "edge"))
    for j in range(samples):
        c = Fraction(j, max(samples - 1, 1))
        pts.append((c, eq.boundary_payoff_curve(lp, n, cos_gamma=c), "sample"))
    return pts


def cmd_phase_diagram(args) -> int:
    n = single_n(args.n)
    lp = parse_payoff(args.payoff, n)
    if not isinstance(lp, game.LinearPayoff) or lp.game_class() != "PD" or lp.p2 == 0:
        raise ConfigError(f"phase diagrams need PD parameters with p2 > 0, got {args.payoff}")
    diagram = eq.pd_phase_boundaries(lp, n)
    curve = boundary_curve_points(lp, n, args.samples) if args.curve else None
    if args.format == "json":
        body = json.loads(diagram.to_json())
        if curve is not None:
            body["curve"] = [{"cos_gamma": float(c), "payoff_defect": float(v), "kind": k} for c, v, k in curve]
        text = json.dumps(body, indent=2) + "\n"
    else:
        text = diagram.to_csv()
        if curve is not None:
            text += "\n" + csv_text(("cos_gamma", "payoff_defect", "kind"), curve)
    emit(text, args.out)
    return 0


def cmd_payoff(args) -> int:
    n = single_n(args.n)
    payoff = parse_payoff(args.payoff, n)
    gamma, cos_gamma = resolve_angle(args)
    x = _per_qubit(parse_floats(args.x), n, "x") if args.x else [1.0] * n
    profile = game.StrategyProfile(tuple(x))
    if isinstance(payoff, game.FlitneyHollenbergPayoff):
        numeric_payoff = payoff
        analytic = [game.embedded_payoff(eq.appendix_b_coefficients(n, p), profile=profile, player=p,
                                         cos_gamma=math.cos(_gamma_value(gamma, cos_gamma)))
                    for p in range(n)]
    else:
        numeric_payoff = _float_lp(payoff)
        cg = cos_gamma if cos_gamma is not None else math.cos(gamma)
        analytic = [game.linear_embedded_payoff(payoff, profile, p, cos_gamma=cg) for p in range(n)]
    rows = []
    setup = game.canonical_embedding(n).setup(_gamma_value(gamma, cos_gamma))
    for p in range(n):
        direct = game.mixed_strategy_payoff(numeric_payoff, setup, profile, p) \
            if n <= game.MAX_TENSOR_PLAYERS else None
        rows.append((p + 1, x[p], analytic[p], direct))
    header = ("player", "x", "payoff", "payoff_from_distribution")
    if args.format == "json":
        body = {"n_players": n, "payoff": args.payoff, "players": [dict(zip(header, map(_num, r))) for r in rows]}
        text = json.dumps(body, indent=2) + "\n"
    else:
        text = csv_text(header, rows)
    emit(text, args.out)
    return 0


# --- parser ----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="eprgame", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, payoff=False, angle=True):
        p.add_argument("--n", required=True, help="player count (verify also accepts LO..HI)")
        if angle:
            p.add_argument("--gamma", type=float, help="entanglement angle in radians")
            p.add_argument("--cos-gamma", help="cos(gamma), exact fractions such as 1/3 allowed")
        if payoff:
            p.add_argument("--payoff", default="pd-standard", help=f"a,b,c,d or one of {', '.join(PRESETS)}")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--out", help=f"output file (relative paths resolve against ${OUTPUT_DIR_ENV})")

    p = sub.add_parser("dist", help="outcome distribution from the closed form")
    common(p)
    p.add_argument("--family", choices=("ghz", "w"), default="ghz")
    p.add_argument("--kappa", help="measurement angles, one value or one per player")
    p.add_argument("--alpha", help="rotor angles a1,a2,a3 (one triple, or ';'-separated per player)")
    p.add_argument("--outcome", help="query a single outcome bitstring instead of the full table")
    p.set_defaults(func=cmd_dist)

    p = sub.add_parser("verify", help="closed form vs state-vector oracle on random frames")
    common(p, angle=False)
    p.add_argument("--family", choices=("ghz", "w"), default="ghz")
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--timing", action="store_true", help="add single-outcome timing columns (not deterministic)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("equilibria", help="symmetric pure Nash equilibria at one angle")
    common(p, payoff=True)
    p.add_argument("--require-class", action="store_true", help="reject payoffs outside PD/Chicken/Minority")
    p.set_defaults(func=cmd_equilibria)

    p = sub.add_parser("phase-diagram", help="PD equilibrium zones over cos(gamma)")
    common(p, payoff=True, angle=False)
    p.add_argument("--curve", action="store_true", help="append the boundary payoff curve")
    p.add_argument("--samples", type=int, default=21, help="uniform curve samples")
    p.set_defaults(func=cmd_phase_diagram)

    p = sub.add_parser("payoff", help="payoffs of a mixed profile under the classical embedding")
    common(p, payoff=True)
    p.add_argument("--x", help="cooperation probabilities, one value or one per player")
    p.set_defaults(func=cmd_payoff)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except cf.ProbabilityRangeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RANGE
    except (ConfigError, ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
