"""Deterministic master/worker straggler simulation.

Time is modeled as an arrival permutation, not a clock: the decoding outcome
depends only on which responses arrive among the first R, so a seeded
permutation (or an explicit one) gives full coverage with exact
reproducibility. Wall-clock time is recorded for information only and is
excluded from every reproducibility contract.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field as dc_field, replace

import numpy as np

from .codes import (basis_descriptor, decode, encode, partition,
                    recovery_threshold, scheme_params, worker_multiply)
from .curves import RationalCurve, curve_from_json, curve_to_json, genus, usable_places
from .exceptions import (AgdmmError, ConfigInvalid, DecodeFailed, Inconsistent,
                         InsufficientResponses, RankDeficient)
from .linalg import Matrix, OpCounter, matmul

DISTRIBUTIONS = ("uniform_shuffle", "geometric_tail")


@dataclass(frozen=True)
class FixedOrder:
    """Responses arrive exactly in the given worker-id order."""

    order: tuple

    def arrival_order(self, n_workers):
        order = tuple(int(i) for i in self.order)
        if sorted(order) != list(range(n_workers)):
            raise ConfigInvalid(f"order must be a permutation of 0..{n_workers - 1}")
        return list(order)


@dataclass(frozen=True)
class SeededRandom:
    """Seeded arrival order; geometric_tail skews late arrivals heavily."""

    seed: int
    distribution: str = "uniform_shuffle"
    tail_prob: float = 0.5

    def arrival_order(self, n_workers):
        if self.distribution not in DISTRIBUTIONS:
            raise ConfigInvalid(f"unknown distribution {self.distribution!r}")
        rng = np.random.default_rng(self.seed)
        if self.distribution == "uniform_shuffle":
            return [int(i) for i in rng.permutation(n_workers)]
        if not 0.0 < self.tail_prob <= 1.0:
            raise ConfigInvalid(f"tail_prob must be in (0, 1], got {self.tail_prob}")
        delays = rng.geometric(self.tail_prob, size=n_workers)
        tiebreak = rng.random(n_workers)
        return [int(i) for i in np.lexsort((tiebreak, delays))]


@dataclass(frozen=True)
class SimConfig:
    params: SchemeParams
    workers: int
    delay_model: object = SeededRandom(0)
    stragglers: tuple = ()
    rng_seed: int = 0


@dataclass
class SimReport:
    scheme: str
    threshold: int
    workers: int
    usable_place_count: int
    response_order: tuple
    workers_used: tuple
    decode_success: bool
    max_stragglers_tolerated: int
    op_counts: dict
    wall_time_s: float = dc_field(default=0.0, compare=False)

    def to_json_dict(self):
        return {
            "scheme": self.scheme,
            "threshold": self.threshold,
            "workers": self.workers,
            "usable_place_count": self.usable_place_count,
            "response_order": list(self.response_order),
            "workers_used": list(self.workers_used),
            "decode_success": self.decode_success,
            "max_stragglers_tolerated": self.max_stragglers_tolerated,
            "op_counts": dict(self.op_counts),
            "wall_time_s": self.wall_time_s,  # informational only
        }


def run_simulation(cfg):
    """Encode, fan out, collect by arrival order, decode at the threshold.

    Fully reproducible from (config, seeds). Raises DecodeFailed when fewer
    than R workers respond or the decode step itself reports a defect; a
    successful run verifies the decoded product against direct multiplication.
    """
    t0 = time.perf_counter()
    params = cfg.params
    r_threshold = recovery_threshold(params)
    usable = usable_places(params.curve, params.scheme)
    n = cfg.workers
    if not r_threshold <= n <= len(usable):
        raise ConfigInvalid(f"need threshold {r_threshold} <= workers {n} "
                            f"<= usable places {len(usable)}")
    stragglers = set(int(w) for w in cfg.stragglers)
    if not stragglers <= set(range(n)):
        raise ConfigInvalid("straggler ids must be valid worker ids")

    rng = np.random.default_rng(cfg.rng_seed)
    a = Matrix.random(params.curve.field, params.r, params.s, rng)
    b = Matrix.random(params.curve.field, params.s, params.t, rng)
    a_blocks, b_blocks = partition(a, b, params)
    desc = basis_descriptor(params)
    tasks = encode(a_blocks, b_blocks, desc, usable[:n])

    results = {}
    worker_max = 0
    for wid in range(n):
        if wid in stragglers:
            continue
        res, count = worker_multiply(tasks[wid])
        res.arrival_rank = None
        results[wid] = res
        worker_max = max(worker_max, count)

    order = cfg.delay_model.arrival_order(n)
    responders = [wid for wid in order if wid not in stragglers]
    op_counts = {
        "encode": n * (params.r * params.s + params.s * params.t),
        "worker_max": worker_max,
        "decode": 0,
    }
    if len(responders) < r_threshold:
        raise DecodeFailed(
            f"only {len(responders)} responses, need {r_threshold}",
            reason=InsufficientResponses(f"{len(responders)} < {r_threshold}"))
    used = responders[:r_threshold]
    ordered_results = []
    for rank_, wid in enumerate(used):
        results[wid].arrival_rank = rank_
        ordered_results.append(results[wid])
    ops = OpCounter()
    try:
        decoded = decode(ordered_results, desc, params, ops=ops)
    except (RankDeficient, Inconsistent) as exc:
        raise DecodeFailed(f"decode step failed: {exc}", reason=exc) from exc
    op_counts["decode"] = ops.mults
    direct, _ = matmul(a, b)
    return SimReport(
        scheme=params.scheme,
        threshold=r_threshold,
        workers=n,
        usable_place_count=len(usable),
        response_order=tuple(order),
        workers_used=tuple(used),
        decode_success=decoded == direct,
        max_stragglers_tolerated=n - r_threshold,
        op_counts=op_counts,
        wall_time_s=time.perf_counter() - t0,
    )


def straggler_sweep(cfg, k_range, trials=3):
    """Success rate as a function of the straggler count k.

    Straggler sets are drawn with seeds derived from (rng_seed, k, trial), so
    the sweep is reproducible; rates are exactly 1.0 up to the headroom
    N - R and exactly 0.0 beyond it.
    """
    rows = []
    for k in k_range:
        k = int(k)
        if not 0 <= k <= cfg.workers:
            raise ConfigInvalid(f"straggler count {k} outside [0, {cfg.workers}]")
        successes = 0
        for trial in range(trials):
            rng = np.random.default_rng(np.random.SeedSequence([cfg.rng_seed, k, trial]))
            chosen = tuple(int(w) for w in rng.choice(cfg.workers, size=k, replace=False))
            try:
                report = run_simulation(replace(cfg, stragglers=chosen))
                successes += int(report.decode_success)
            except DecodeFailed:
                pass
        rows.append({"k": k, "trials": trials, "successes": successes,
                     "rate": successes / trials})
    return rows


def compare_rational_baseline(curve, m, n, dims, rational_m=None, rational_n=None):
    """Side-by-side capacity report: the given curve vs the rational baseline.

    Worker counts are capped by usable places (q for the baseline), so the
    same field supports more workers exactly when the curve brings more
    rational points than the line.
    """
    r, s, t = dims
    matdot = n is None
    rm = m if rational_m is None else rational_m
    rn = n if rational_n is None else rational_n

    def column(cur, mm, nn):
        g = genus(cur)
        usable = len(usable_places(cur, "rational_poly"))
        if matdot:
            threshold = 2 * g + 2 * mm - 1
            if s % mm:
                raise ConfigInvalid(f"m={mm} must divide s={s}")
            worker = r * (s // mm) * t
        else:
            threshold = g + mm * nn
            if r % mm or t % nn:
                raise ConfigInvalid(f"need m | r and n | t for m={mm}, n={nn}")
            worker = (r // mm) * s * (t // nn)
        return {
            "curve_kind": cur.kind,
            "genus": g,
            "m": mm,
            "n": nn,
            "usable_places": usable,
            "threshold": threshold,
            "max_workers": usable,
            "straggler_headroom": usable - threshold,
            "worker_mults": worker,
        }

    baseline_curve = RationalCurve(curve.field)
    return {
        "field": curve.field.to_json(),
        "mode": "matdot" if matdot else "poly",
        "dims": {"r": r, "s": s, "t": t},
        "curve": column(curve, m, n),
        "rational": column(baseline_curve, rm, rn),
    }


# -- JSON config ingestion ----------------------------------------------------

_TOP_KEYS = {"scheme", "curve", "m", "n", "r", "s", "t", "workers",
             "delay_model", "stragglers", "rng_seed"}
_REQUIRED = {"scheme", "curve", "m", "r", "s", "t", "workers"}
_DELAY_KEYS = {"kind", "order", "seed", "distribution", "tail_prob"}


def _delay_model_from_json(obj):
    if not isinstance(obj, dict) or "kind" not in obj:
        raise ConfigInvalid("delay_model must be an object with a 'kind' key")
    extra = set(obj) - _DELAY_KEYS
    if extra:
        raise ConfigInvalid(f"unknown delay_model keys {sorted(extra)}")
    if obj["kind"] == "fixed_order":
        if "order" not in obj:
            raise ConfigInvalid("fixed_order needs 'order'")
        return FixedOrder(tuple(int(i) for i in obj["order"]))
    if obj["kind"] == "seeded_random":
        if "seed" not in obj:
            raise ConfigInvalid("seeded_random needs 'seed'")
        return SeededRandom(int(obj["seed"]),
                            obj.get("distribution", "uniform_shuffle"),
                            float(obj.get("tail_prob", 0.5)))
    raise ConfigInvalid(f"unknown delay_model kind {obj['kind']!r}")


def sim_config_from_json(obj):
    """Strict-schema SimConfig parser; unknown or missing keys are rejected."""
    if not isinstance(obj, dict):
        raise ConfigInvalid("simulation config must be a JSON object")
    extra = set(obj) - _TOP_KEYS
    if extra:
        raise ConfigInvalid(f"unknown config keys {sorted(extra)}")
    missing = _REQUIRED - set(obj)
    if missing:
        raise ConfigInvalid(f"missing config keys {sorted(missing)}")
    curve = curve_from_json(obj["curve"])
    n = obj.get("n")
    try:
        params = scheme_params(obj["scheme"], curve, int(obj["m"]),
                               None if n is None else int(n),
                               r=int(obj["r"]), s=int(obj["s"]), t=int(obj["t"]))
    except (ValueError, AgdmmError) as exc:
        raise ConfigInvalid(f"invalid scheme parameters: {exc}") from exc
    delay = obj.get("delay_model")
    delay_model = SeededRandom(0) if delay is None else _delay_model_from_json(delay)
    return SimConfig(
        params=params,
        workers=int(obj["workers"]),
        delay_model=delay_model,
        stragglers=tuple(int(w) for w in obj.get("stragglers", ())),
        rng_seed=int(obj.get("rng_seed", 0)),
    )


def sim_config_to_json(cfg):
    params = cfg.params
    if isinstance(cfg.delay_model, FixedOrder):
        delay = {"kind": "fixed_order", "order": list(cfg.delay_model.order)}
    else:
        delay = {"kind": "seeded_random", "seed": cfg.delay_model.seed,
                 "distribution": cfg.delay_model.distribution,
                 "tail_prob": cfg.delay_model.tail_prob}
    return {
        "scheme": params.scheme,
        "curve": curve_to_json(params.curve),
        "m": params.m,
        "n": params.n,
        "r": params.r, "s": params.s, "t": params.t,
        "workers": cfg.workers,
        "delay_model": delay,
        "stragglers": list(cfg.stragglers),
        "rng_seed": cfg.rng_seed,
    }
