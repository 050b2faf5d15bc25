"""Property checks behind ``sketchmatch verify``."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from . import sketch as sk
from .data import random_small_instance, unit_vectors
from .fast import fast_greedy_run, fast_postponed_greedy_run
from .greedy import greedy_trace
from .oracle import brute_force_opt, brute_force_opt_general, dual_certificate_check

STAT_SLACK = 0.05


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} {self.name}: {self.detail}"


def small_instances(count: int, max_n: int, seed: int):
    rng = np.random.default_rng(seed)
    return [random_small_instance(rng, max_n=max_n) for _ in range(count)]


def check_greedy(instances, opts) -> List[CheckResult]:
    worst = math.inf
    violations = cert_fail = ident_fail = 0
    for inst, opt in zip(instances, opts):
        outcome, state = greedy_trace(inst)
        if outcome.total_weight < 0.5 * opt.total_weight:
            violations += 1
        if opt.total_weight > 0:
            worst = min(worst, outcome.total_weight / opt.total_weight)
        cert = state.certificate()
        if not dual_certificate_check(inst, cert):
            cert_fail += 1
        sellers, buyers = cert
        lhs, rhs = math.fsum(buyers.values()), math.fsum(sellers.values())
        if abs(lhs - rhs) > 1e-9 * max(1.0, abs(rhs)):
            ident_fail += 1
    n = len(instances)
    return [
        CheckResult("greedy-half-competitive", violations == 0,
                    f"{violations}/{n} below OPT/2, worst ratio {worst:.4f}"),
        CheckResult("dual-certificate", cert_fail == 0 and ident_fail == 0,
                    f"{cert_fail}/{n} infeasible certificates, {ident_fail}/{n} accounting mismatches"),
    ]


def check_fast(instances, opts, eps, delta, seed, s=None) -> CheckResult:
    bound = (1 - eps) / 2
    ok = 0
    for k, (inst, opt) in enumerate(zip(instances, opts)):
        got = fast_greedy_run(inst, eps=eps, delta=delta, seed=seed + k, s=s).total_weight
        if got >= bound * opt.total_weight:
            ok += 1
    frac = ok / len(instances)
    need = 1 - delta - STAT_SLACK
    return CheckResult("fast-greedy-ratio", frac >= need,
                       f"{frac:.3f} of instances reach (1-eps)/2 OPT (need {need:.3f})")


def check_postponed(instances, eps, delta, seed, s=None, coins: int = 20) -> CheckResult:
    """Mean over coin seeds, pooled over the family, against (1-eps)/4 OPT."""
    got_total = opt_total = 0.0
    for k, inst in enumerate(instances):
        pinst = inst.as_postponed()
        opt = brute_force_opt_general(pinst).total_weight
        runs = [
            fast_postponed_greedy_run(pinst, eps=eps, delta=delta, seed=seed + 1000 * k + c, s=s).total_weight
            for c in range(coins)
        ]
        got_total += float(np.mean(runs))
        opt_total += opt
    need = (1 - eps) / 4 * opt_total - STAT_SLACK * opt_total
    ratio = got_total / opt_total if opt_total else 1.0
    return CheckResult("fast-postponed-ratio", got_total >= need,
                       f"pooled mean/OPT = {ratio:.4f} (need >= {(1 - eps) / 4 - STAT_SLACK:.4f})")


def jl_violation_fraction(points: int, d: int, eps: float, delta: float, trials: int,
                          seed: int, s: Optional[int] = None) -> float:
    """Fraction of trials in which any pairwise sketched distance leaves (1 +- eps)."""
    if s is None:
        s = sk.recommended_s(points, eps, delta)
    failed = 0
    iu = np.triu_indices(points, 1)
    for t in range(trials):
        rng = np.random.default_rng([seed, t])
        x = unit_vectors(rng, points, d)
        m = sk.build(s, d, seed * 1_000_003 + t)
        y = sk.apply_rows(m, x)
        true = np.sqrt(((x[:, None, :] - x[None, :, :]) ** 2).sum(-1))[iu]
        approx = np.sqrt(((y[:, None, :] - y[None, :, :]) ** 2).sum(-1))[iu]
        ratio = approx / true
        if np.any(ratio < 1 - eps) or np.any(ratio > 1 + eps):
            failed += 1
    return failed / trials


def check_jl(eps, delta, seed, s=None, points=100, d=500, trials=50) -> CheckResult:
    frac = jl_violation_fraction(points, d, eps, delta, trials, seed, s)
    need = delta + STAT_SLACK
    used = s if s is not None else sk.recommended_s(points, eps, delta)
    return CheckResult("jl-distortion", frac <= need,
                       f"{frac:.3f} of {trials} trials distorted at s={used} (allowed {need:.3f})")


def run_suite(instances: int = 200, max_n: int = 6, eps: float = 0.1, delta: float = 0.01,
              seed: int = 0, s: Optional[int] = None, jl_points: int = 100, jl_dim: int = 500,
              jl_trials: int = 50) -> List[CheckResult]:
    family = small_instances(instances, max_n, seed)
    opts = [brute_force_opt(inst) for inst in family]
    results = check_greedy(family, opts)
    results.append(check_fast(family, opts, eps, delta, seed, s))
    results.append(check_postponed(family, eps, delta, seed, s))
    results.append(check_jl(eps, delta, seed, s, jl_points, jl_dim, jl_trials))
    return results
