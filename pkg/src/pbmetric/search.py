"""Random finite instances and large-scale probes of fixed-point claims.

Every trial draws a space and a self-map from a seed derived from the master
seed and the trial index, so a report is a pure function of its
:class:`GenConfig` and any single trial can be regenerated on its own.

Probe targets:

* ``chatterjea`` -- ``lam_Ch < 1/s^2`` at ``s = max(s_min, 2)``; rate ``lam/(1-lam)``.
* ``chatterjea-max`` -- ``lam < 1/s_min``; rate ``lam``.
* ``chatterjea-kannan`` -- five constants (``l2..l5`` random, ``l1`` least
  feasible); rate from :func:`~pbmetric.contraction.picard_rate`; also runs
  geometric-noise stability trials where the stability condition holds.
* ``power-banach`` -- some ``T^n`` is a Banach contraction.
* ``transform`` -- builds the weighted-sum metric and the series metric and
  checks every promised property.
* ``orbit-pproperty`` -- ``p(Tx,T^2x) <= lam p(x,Tx)`` with ``lam < 1`` and a
  fixed point implies ``F(T) = F(T^n)``.
* ``s-window`` -- Chatterjea with ``s_min < sqrt 2`` and ``lam < 1/s_min^2``,
  a regime no proof covers; ``[sqrt 2, 2)`` is tallied separately.
* ``ck-pproperty`` -- does the Chatterjea-Kannan condition force the P
  property? (open)

The first six targets test proved statements: any counterexample there
points at a bug. The last two may legitimately produce counterexamples.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .contraction import (
    check_banach, check_chatterjea, check_chatterjea_kannan, check_chatterjea_max,
)
from .errors import DivergenceError, GenerationError, ParameterError
from .maps import SelfMap
from .picard import certify_rate, fixed_points, iterate_all
from .pproperty import p_property
from .serialize import map_to_dict, space_to_dict
from .space import PartialBMetricSpace, minimal_coefficient, verify_axioms
from .stability import StabilityParams, geometric_noise, run_perturbed, stability_condition
from .transform import (
    build_h_series, build_pprime, check_convergence_transfer, verify_transform_contraction,
)

PROVED_TARGETS = ("chatterjea", "chatterjea-max", "chatterjea-kannan", "power-banach",
                  "transform", "orbit-pproperty")
OPEN_TARGETS = ("s-window", "ck-pproperty")
TARGETS = PROVED_TARGETS + OPEN_TARGETS

NOISE_LEVELS = (Fraction(1, 2), Fraction(1), Fraction(2), Fraction(4))


@dataclass(frozen=True)
class GenConfig:
    """Generator and probe settings.

    Off-diagonal distances are drawn from ``{1, ..., max_value * denominator}
    / denominator``; a self-distance is 0 with probability ``zero_self_prob``
    and otherwise drawn from the same grid, then clamped to its row minimum.
    """

    n_points: int = 4
    denominator: int = 16
    max_value: int = 4
    zero_self_prob: float = 0.5
    seed: int = 0
    trials: int = 100
    target: str = "s-window"
    n_max: int = 8
    inject_golden: bool = True
    stability_runs: int = 4
    stability_steps: int = 40
    resample_budget: int = 100

    def __post_init__(self):
        if self.n_points < 1:
            raise ParameterError("n_points must be >= 1")
        if self.trials < 0:
            raise ParameterError("trials must be >= 0")
        if self.denominator < 1 or self.max_value < 1:
            raise ParameterError("denominator and max_value must be positive")
        if not 0 <= self.zero_self_prob <= 1:
            raise ParameterError("zero_self_prob must lie in [0, 1]")
        if self.n_max < 2:
            raise ParameterError("n_max must be >= 2")
        if self.target not in TARGETS:
            raise ParameterError(f"unknown target {self.target!r}; choose from {list(TARGETS)}")


def trial_seed(master: int, index: int) -> int:
    """Seed for one trial, independent of execution order."""
    digest = hashlib.sha256(f"{master}:{index}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


def random_space(config: GenConfig, seed: int) -> PartialBMetricSpace:
    """A random finite partial b-metric space on points ``0..n-1``.

    ``declared_s`` is the exact minimal coefficient.

    Raises:
        GenerationError: if no instance without pm1 collisions turns up
            within ``config.resample_budget`` attempts.
    """
    rng = random.Random(seed)
    n, den = config.n_points, config.denominator
    top = config.max_value * den
    for _ in range(max(1, config.resample_budget)):
        P = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                P[i][j] = P[j][i] = rng.randint(1, top)
        for i in range(n):
            v = 0 if rng.random() < config.zero_self_prob else rng.randint(0, top)
            row_min = min((P[i][j] for j in range(n) if j != i), default=v)
            P[i][i] = min(v, row_min)
        # pm1: p(x,x) = p(x,y) = p(y,y) only for x = y
        if any(P[i][i] == P[i][j] == P[j][j] for i in range(n) for j in range(i + 1, n)):
            continue
        table = [[Fraction(v, den) for v in row] for row in P]
        space = PartialBMetricSpace(tuple(range(n)), table)
        return space.with_declared_s(minimal_coefficient(space))
    raise GenerationError(f"pm1 resampling budget exhausted (seed {seed})", seed)


def random_map(space, seed: int) -> SelfMap:
    """Uniform, independent image for every point."""
    rng = random.Random(seed)
    pts = space.points
    return SelfMap(table={x: rng.choice(pts) for x in pts})


def instance(config: GenConfig, index: int):
    """Regenerate the (space, map) of trial ``index``."""
    if index == 0 and config.inject_golden and config.target == "s-window":
        from .golden import example1_map, example1_space
        space = example1_space()
        return space.with_declared_s(minimal_coefficient(space)), example1_map()
    ts = trial_seed(config.seed, index)
    space = random_space(config, ts)
    return space, random_map(space, ts + 1)


def complete_lambdas(space, T, rng: random.Random) -> Optional[tuple]:
    """Random ``l2..l5`` and the least ``l1`` making the five-term condition hold.

    Each of ``l2..l5`` is 0 with probability 1/2, else ``k/64`` for
    ``k`` in 1..16. Returns ``None`` when no ``l1`` works (a pair with
    ``p(x,y) = 0`` whose left side exceeds the rational terms).
    """
    rest = tuple(Fraction(0) if rng.random() < 0.5 else Fraction(rng.randint(1, 16), 64)
                 for _ in range(4))
    l2, l3, l4, l5 = rest
    tab, t = space.table, T.indices(space)
    n = len(tab)
    l1 = Fraction(0)
    for i in range(n):
        for j in range(n):
            pxy = tab[i][j]
            a, b = tab[i][t[i]], tab[j][t[j]]
            c, d = tab[i][t[j]], tab[j][t[i]]
            need = tab[t[i]][t[j]] - (l2 * a * b + l3 * c * d + l4 * a * c + l5 * b * d) / (1 + pxy)
            if need <= 0:
                continue
            if pxy == 0:
                return None
            l1 = max(l1, need / pxy)
    return (l1,) + rest


@dataclass
class SearchReport:
    """Aggregate of one probe run.

    ``hypothesis`` counts instances meeting the probed statement's
    hypothesis, ``verified`` those whose conclusion was then confirmed;
    each shortfall appears in ``counterexamples`` with the full instance.
    """

    config: dict
    trials: int = 0
    hypothesis: int = 0
    verified: int = 0
    counterexamples: list = field(default_factory=list)
    certificate_failures: list = field(default_factory=list)
    subcounts: dict = field(default_factory=dict)
    stats: dict = field(default_factory=dict)
    stability: dict = field(default_factory=dict)
    injected: Optional[dict] = None

    @property
    def proved_target(self) -> bool:
        return self.config["target"] in PROVED_TARGETS

    @property
    def clean(self) -> bool:
        return not self.counterexamples and not self.certificate_failures


def _record(index, config, space, T, reason, **extra):
    ts = None if (index == 0 and config.inject_golden and config.target == "s-window") \
        else trial_seed(config.seed, index)
    return {"trial": index, "seed": ts, "reason": reason,
            "space": space_to_dict(space), "map": map_to_dict(T), **extra}


def _bump(d, key, by=1):
    d[key] = d.get(key, 0) + by


def _unique_fixed(space, T):
    """(ok, u, traces, reason): unique fixed point with zero self-distance
    reached by Picard iteration from every start."""
    fp = fixed_points(space, T)
    if len(fp) != 1:
        return False, None, None, f"{len(fp)} fixed points {fp.points}"
    u = fp.points[0]
    if space.p(u, u) != 0:
        return False, u, None, f"fixed point {u!r} has p(u,u) = {space.p(u, u)}"
    traces = iterate_all(space, T)
    for tr in traces:
        if tr.fixed_point != u:
            return False, u, traces, f"Picard from {tr.orbit[0]!r} does not reach {u!r}"
    return True, u, traces, ""


def _certify(rep, index, config, space, T, traces, mu, s, label):
    for tr in traces:
        cert = certify_rate(tr, mu, s)
        if not cert.all_pass:
            rep.certificate_failures.append(_record(
                index, config, space, T, f"{label} rate certificate failed",
                start=tr.orbit[0], mu=mu, s=s,
                step_failures=cert.step_failures[:3], tail_failures=cert.tail_failures[:3]))
            return


def _uniqueness_trial(rep, index, config, space, T, hyp, mu, s, label, extra=None):
    if not hyp:
        return None
    rep.hypothesis += 1
    ok, u, traces, reason = _unique_fixed(space, T)
    if ok:
        rep.verified += 1
        if mu is not None:
            _certify(rep, index, config, space, T, traces, mu, s, label)
    else:
        rep.counterexamples.append(_record(index, config, space, T, reason, **(extra or {})))
    return u if ok else None


def _probe_chatterjea(rep, index, config, space, T, s_min, lams):
    s = max(s_min, Fraction(2))
    lam = check_chatterjea(space, T, s).constant
    lams.append(lam)
    hyp = lam is not None and lam < 1 / (s * s)
    if hyp and s_min >= 2:
        _bump(rep.subcounts, "hypothesis_at_s_min")
    mu = lam / (1 - lam) if hyp else None
    _uniqueness_trial(rep, index, config, space, T, hyp, mu, s, "chatterjea",
                      {"lambda": lam, "s": s})


def _probe_chatterjea_max(rep, index, config, space, T, s_min, lams):
    r = check_chatterjea_max(space, T, s_min)
    lams.append(r.constant)
    if r.admissible and s_min == 1:
        _bump(rep.subcounts, "hypothesis_with_s_equal_1")
    _uniqueness_trial(rep, index, config, space, T, r.admissible, r.constant, s_min,
                      "chatterjea-max", {"lambda": r.constant, "s": s_min})


def _ck_hypothesis(space, T, s_min, ts):
    lam = complete_lambdas(space, T, random.Random(ts + 2))
    if lam is None:
        return None, None
    return lam, check_chatterjea_kannan(space, T, lam, s_min)


def _probe_ck(rep, index, config, space, T, s_min, lams):
    ts = trial_seed(config.seed, index)
    lam, r = _ck_hypothesis(space, T, s_min, ts)
    lams.append(None if lam is None else lam[0])
    hyp = r is not None and r.admissible
    rate = r.constant if hyp else None
    u = _uniqueness_trial(rep, index, config, space, T, hyp, rate, s_min,
                          "chatterjea-kannan", {"lambdas": lam, "s": s_min})
    if u is None:
        return
    params = StabilityParams(lam, s_min)
    if not stability_condition(params).holds:
        return
    st = rep.stability
    _bump(st, "eligible_instances")
    for k in range(config.stability_runs):
        r_k = NOISE_LEVELS[k % len(NOISE_LEVELS)]
        sched = geometric_noise(r=r_k, seed=ts + 3 + k)
        trial = run_perturbed(space, T, u, sched, config.stability_steps, params=params)
        _bump(st, "trials")
        _bump(st, trial.verdict)
        if trial.recurrence_ok is False:
            _bump(st, "recurrence_failures")
        if trial.verdict != "converged":
            rep.counterexamples.append(_record(
                index, config, space, T, "perturbed orbit did not converge",
                lambdas=lam, s=s_min, noise=r_k, schedule_seed=ts + 3 + k,
                drift_vanished=trial.drift_vanished))


def _first_power_contraction(space, T, n_min, n_max):
    """Least ``n`` in ``[n_min, n_max]`` with Banach constant of ``T^n`` below 1."""
    for n in range(n_min, n_max + 1):
        k = check_banach(space, T.power(n)).constant
        if k is not None and k < 1:
            return n, k
    return None


def _probe_power(rep, index, config, space, T, s_min, lams):
    found = _first_power_contraction(space, T, 1, config.n_max)
    lams.append(None if found is None else found[1])
    hyp = found is not None
    _uniqueness_trial(rep, index, config, space, T, hyp, None, s_min, "power-banach")


def _lam_for(K, n):
    """A rational ``lam`` with ``1 < lam`` and ``lam^n K < 1``."""
    bound = float(K) ** (-1.0 / n)
    lam = Fraction(1 + (bound - 1) / 2).limit_denominator(64)
    if lam <= 1:
        # K so close to 1 that the midpoint rounds onto 1
        lam = Fraction(65, 64)
    while lam ** n * K >= 1:
        lam = 1 + (lam - 1) / 2
    return lam


def _probe_transform(rep, index, config, space, T, s_min, lams):
    found = _first_power_contraction(space, T, 2, config.n_max)
    lams.append(None if found is None else found[1])
    if found is None:
        return
    rep.hypothesis += 1
    n, measured = found
    K = measured if measured > 0 else Fraction(1, 2)
    lam = _lam_for(K, n)
    t = build_pprime(space, T, n, K, lam)
    problems = []
    if not verify_axioms(t.space, space.declared_s).passed:
        problems.append("p' fails the axioms at the base coefficient")
    chk = verify_transform_contraction(t)
    if not chk.holds:
        problems.append(f"p' contraction fails at {chk.witness}")
    if not chk.identity_holds:
        problems.append(f"p' identity fails at {chk.identity_witness}")
    if any(a > b for ra, rb in zip(space.table, t.space.table) for a, b in zip(ra, rb)):
        problems.append("p <= p' fails")
    try:
        h = build_h_series(space, T, lam, n=n, K=K)
        if not h.details["sandwich_ok"]:
            problems.append("p' <= h <= p'/(1 - lam^n K) fails")
    except DivergenceError as exc:
        problems.append(f"series diverges at {exc.pair}")
    for tr in iterate_all(space, T):
        if tr.converged and space.p(tr.fixed_point, tr.fixed_point) == 0:
            if check_convergence_transfer(space, T, t, tr.orbit).verdict == "fails":
                problems.append(f"convergence does not transfer from {tr.orbit[0]!r}")
    if problems:
        rep.counterexamples.append(_record(index, config, space, T, "; ".join(problems),
                                           power=n, K=K, lam=lam))
    else:
        rep.verified += 1


def _probe_orbit_pp(rep, index, config, space, T, s_min, lams):
    r = p_property(space, T, config.n_max)
    lams.append(r.orbit_lambda)
    if not r.subset_ok:
        rep.counterexamples.append(_record(index, config, space, T, "F(T) not contained in F(T^n)"))
    if r.implication in ("confirmed", "falsified"):
        rep.hypothesis += 1
        if r.holds:
            rep.verified += 1
        else:
            rep.counterexamples.append(_record(index, config, space, T,
                                               f"F(T) != F(T^n) at {r.first_violation}"))


def _region(s):
    if s * s < 2:
        return "open"
    return "sharp" if s < 2 else "proved"


def _probe_window(rep, index, config, space, T, s_min, lams):
    lam = check_chatterjea(space, T, s_min).constant
    lams.append(lam)
    region = _region(s_min)
    sub = rep.subcounts.setdefault(region, {"instances": 0, "hypothesis": 0, "verified": 0,
                                            "counterexamples": 0})
    sub["instances"] += 1
    if lam is None or lam >= 1 / (s_min * s_min) or region == "proved":
        return
    sub["hypothesis"] += 1
    ok, u, _, reason = _unique_fixed(space, T)
    if ok:
        sub["verified"] += 1
    else:
        sub["counterexamples"] += 1
        rep.counterexamples.append(_record(index, config, space, T, reason, region=region,
                                           lam=lam, s_min=s_min))
    if region == "open":
        rep.hypothesis += 1
        rep.verified += ok
    if index == 0 and config.inject_golden:
        rep.injected = {"s_min": s_min, "lambda": lam, "region": region,
                        "hypothesis": True, "verified": ok, "fixed_point": u}


def _probe_ck_pp(rep, index, config, space, T, s_min, lams):
    ts = trial_seed(config.seed, index)
    lam, r = _ck_hypothesis(space, T, s_min, ts)
    lams.append(None if lam is None else lam[0])
    if r is None or not r.details["inequality_holds"]:
        return
    weighted = r.admissible
    plain = s_min == 1 and sum(lam) < 1
    if not (weighted or plain):
        return
    rep.hypothesis += 1
    if weighted:
        _bump(rep.subcounts, "weighted_sum_condition")
    if plain:
        _bump(rep.subcounts, "plain_sum_condition_s_equal_1")
    pp = p_property(space, T, config.n_max)
    if pp.orbit_lambda is not None and pp.orbit_lambda < 1:
        _bump(rep.subcounts, "orbit_condition_holds")
    if pp.holds:
        rep.verified += 1
    else:
        rep.counterexamples.append(_record(index, config, space, T,
                                           f"F(T) != F(T^n) at {pp.first_violation}",
                                           lambdas=lam, s=s_min, weighted_sum_condition=weighted,
                                           plain_sum_condition=plain))


_PROBES = {
    "chatterjea": _probe_chatterjea,
    "chatterjea-max": _probe_chatterjea_max,
    "chatterjea-kannan": _probe_ck,
    "power-banach": _probe_power,
    "transform": _probe_transform,
    "orbit-pproperty": _probe_orbit_pp,
    "s-window": _probe_window,
    "ck-pproperty": _probe_ck_pp,
}


def _summary(values) -> dict:
    vals = np.array([float(v) for v in values if v is not None], dtype=float)
    if vals.size == 0:
        return {"count": 0}
    q25, q50, q75 = np.quantile(vals, [0.25, 0.5, 0.75])
    return {"count": int(vals.size), "min": float(vals.min()), "q25": float(q25),
            "median": float(q50), "q75": float(q75), "max": float(vals.max()),
            "mean": float(vals.mean())}


def probe(config: GenConfig) -> SearchReport:
    """Run ``config.trials`` trials of ``config.target``."""
    rep = SearchReport(config=asdict(config))
    run = _PROBES[config.target]
    s_values, lams = [], []
    for index in range(config.trials):
        space, T = instance(config, index)
        s_min = space.declared_s
        s_values.append(s_min)
        run(rep, index, config, space, T, s_min, lams)
        rep.trials += 1
    rep.stats = {"s_min": _summary(s_values), "lambda": _summary(lams)}
    return rep
