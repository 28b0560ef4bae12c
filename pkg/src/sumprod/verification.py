"""Fixed verification suite run by ``sumprod verify`` and the acceptance tests.

Every criterion uses fixed seeds, so its outcome and detail text are
reproducible.  Runtimes are measured by the caller, not recorded here.
"""

from __future__ import annotations

import csv
import io
import itertools
import math
from dataclasses import dataclass

import numpy as np

from . import spectral
from .bounds import (
    asymptotic_ratio,
    check_chain,
    energy_upper_check,
    fourier_tail_check,
    holder_check,
    meets_exact_lower_bound,
    third_moment_check,
)
from .explorer import ExperimentConfig, format_report, run_suite
from .field import make_field
from .setstats import (
    SubsetFq,
    ba_plus_c,
    energy3,
    energy3_bruteforce,
    image_set,
    lines_from_bc,
    rep_function,
)

TEST_FIELDS = [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2), (2, 4), (5, 2), (3, 3)]
TOL = 1e-9
SEED = 20240601


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.number}. {self.name}: {self.detail}"


def _random_subset(rng, q, lo, hi, exclude_zero=False):
    pool = np.arange(1 if exclude_zero else 0, q)
    k = int(rng.integers(lo, min(hi, pool.size) + 1))
    return SubsetFq.from_elements(q, rng.choice(pool, size=k, replace=False))


def check_orthogonality() -> CriterionResult:
    worst = 0.0
    for p, l in TEST_FIELDS:
        F = make_field(p, l)
        for s in range(F.q):
            expected = F.q if s == 0 else 0
            worst = max(worst, abs(spectral.orthogonality_sum(F, s) - expected))
    return CriterionResult(1, "orthogonality", worst < TOL, f"max deviation {worst:.3e}")


def check_plancherel() -> CriterionResult:
    rng = np.random.default_rng(SEED)
    worst_defect = worst_fast = 0.0
    for p, l in TEST_FIELDS:
        F = make_field(p, l)
        for _ in range(100):
            f = rng.normal(size=F.q) + 1j * rng.normal(size=F.q)
            slow = spectral.fourier_forward(F, f)
            fast = spectral.fourier_fast(F, f)
            defect = abs(np.sum(np.abs(slow) ** 2) - np.sum(np.abs(f) ** 2) / F.q)
            worst_defect = max(worst_defect, defect)
            worst_fast = max(worst_fast, float(np.max(np.abs(slow - fast))))
    ok = worst_defect < TOL and worst_fast < TOL
    return CriterionResult(2, "plancherel", ok,
                           f"max defect {worst_defect:.3e}, max fast/naive gap {worst_fast:.3e}")


def check_energy_oracle(instances: int = 100) -> CriterionResult:
    rng = np.random.default_rng(SEED + 3)
    orders = [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2), (11, 1)]
    mismatches = 0
    for i in range(instances):
        F = make_field(*orders[i % len(orders)])
        A, B, C = (_random_subset(rng, F.q, 1, 5) for _ in range(3))
        L = lines_from_bc(F, B, C)
        if energy3(F, L, A) != energy3_bruteforce(F, L, A):
            mismatches += 1
    return CriterionResult(3, "energy oracle", mismatches == 0,
                           f"{instances} instances, {mismatches} mismatches")


def _nonempty_subsets(q):
    for bits in range(1, 1 << q):
        yield SubsetFq.from_elements(q, [x for x in range(q) if bits >> x & 1])


def check_exhaustive_f3() -> CriterionResult:
    """All nonempty A, B, C in F_3.

    Hoelder and the third-moment bound need no slope hypothesis and run on the
    full family (B x C minus (0, 0)) whenever it is nonempty.  The upper-bound
    steps run on B minus {0}.
    """
    F = make_field(3)
    subsets = list(_nonempty_subsets(3))
    triples = failures = chained = 0
    for A, B, C in itertools.product(subsets, repeat=3):
        triples += 1
        L = lines_from_bc(F, B, C)
        if len(L):
            ok = holder_check(F, L, A).passed
            ok &= third_moment_check(rep_function(F, L, A).tolist(), 3).passed
            failures += not ok
        if B.elements().tolist() != [0]:
            rep = check_chain(F, A, B, C)
            chained += 1
            failures += not rep.checks_passed
    ok = triples == 343 and failures == 0
    return CriterionResult(4, "exhaustive chain over F_3", ok,
                           f"{triples} triples, {chained} chained, {failures} failures")


def check_random_chain(instances: int = 500) -> CriterionResult:
    rng = np.random.default_rng(SEED + 5)
    primes = [5, 7, 11, 13]
    failures = 0
    worst_tail_margin = math.inf
    for i in range(instances):
        F = make_field(primes[i % len(primes)])
        A = _random_subset(rng, F.q, 1, F.q)
        B = _random_subset(rng, F.q, 1, F.q - 1, exclude_zero=True)
        C = _random_subset(rng, F.q, 1, F.q)
        rep = check_chain(F, A, B, C)
        L = lines_from_bc(F, B, C)
        ok = rep.checks_passed
        ok &= holder_check(F, L, A).passed and energy_upper_check(F, L, A).passed
        tail = fourier_tail_check(F, A, B, C)
        ok &= tail.passed
        ok &= meets_exact_lower_bound(image_set(F, L, A).size, F.q, len(L), A.size)
        worst_tail_margin = min(worst_tail_margin, tail.rhs - tail.lhs)
        failures += not ok
    return CriterionResult(5, "randomized chain q in {5,7,11,13}", failures == 0,
                           f"{instances} instances, {failures} failures, "
                           f"min tail margin {worst_tail_margin:.6g}")


def check_lemma2_standalone(instances: int = 1000) -> CriterionResult:
    rng = np.random.default_rng(SEED + 6)
    failures = equality_misses = 0
    for i in range(instances):
        n = (2, 3, 4)[i % 3]
        size = int(rng.integers(2, 51))
        f = rng.integers(0, int(rng.integers(1, 40)) + 1, size=size).tolist()
        res = third_moment_check(f, n)
        failures += not res.passed
        if n == 2 and res.lhs != res.rhs:
            equality_misses += 1
    ok = failures == 0 and equality_misses == 0
    return CriterionResult(6, "third-moment bound standalone", ok,
                           f"{instances} functions, {failures} failures, "
                           f"{equality_misses} n=2 equality misses")


def check_tightness() -> CriterionResult:
    parts, ok = [], True
    for p in (2, 3, 5):
        F = make_field(p, 2)
        A = SubsetFq.from_elements(F.q, F.subfield(1))
        size = ba_plus_c(F, A, A, A).size
        ratio = asymptotic_ratio(F, A, A, A)
        ok &= size == p and ratio == 1.0
        parts.append(f"q={F.q}: |AA+A|={size} ratio={ratio!r}")
    return CriterionResult(7, "subfield tightness", ok, "; ".join(parts))


LARGE_SET_CONFIG = {
    "fields": [[101, 1], [257, 1]],
    "families": [{"kind": "random"}],
    "sizes": [{"exponent": "3/4"}],
    "trials_per_cell": 20,
    "master_seed": SEED,
    "mode": "BA+C",
}


def check_large_sets() -> CriterionResult:
    rows = run_suite(ExperimentConfig.from_dict(dict(LARGE_SET_CONFIG)))
    failures = 0
    for r in rows:
        bound_ok = r.size_image >= r.size_image_checked and meets_exact_lower_bound(
            r.size_image_checked, r.q, r.size_L_checked, r.size_A)
        failures += not (bound_ok and r.size_A == r.size_B == r.size_C)
    min_ratio = min(r.ratio for r in rows)
    ok = failures == 0 and len(rows) == 40
    return CriterionResult(8, "large-set regime |A| = ceil(q^(3/4))", ok,
                           f"{len(rows)} instances, {failures} below exact bound, "
                           f"empirical min ratio {min_ratio!r}")


DETERMINISM_CONFIG = {
    "fields": ["3^2", "13", "2^3"],
    "families": [{"kind": "random"}, {"kind": "subfield", "degree": 1},
                 {"kind": "interval", "start": 1, "step": 1}],
    "sizes": [2, 0.5],
    "trials_per_cell": 3,
    "master_seed": 99,
    "mode": "both",
}


def check_determinism() -> CriterionResult:
    outputs = [format_report(run_suite(ExperimentConfig.from_dict(dict(DETERMINISM_CONFIG))))
               for _ in range(2)]
    return CriterionResult(9, "determinism", outputs[0] == outputs[1],
                           f"{outputs[0].count(chr(10))} CSV lines compared")


CRITERIA = [
    check_orthogonality,
    check_plancherel,
    check_energy_oracle,
    check_exhaustive_f3,
    check_random_chain,
    check_lemma2_standalone,
    check_tightness,
    check_large_sets,
    check_determinism,
]


def run_all() -> list:
    return [c() for c in CRITERIA]


def results_csv(results) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["criterion", "name", "passed", "detail"])
    for r in results:
        w.writerow([r.number, r.name, "true" if r.passed else "false", r.detail])
    return buf.getvalue()

