"""Instance-level checks of the inequality chain

    |L|^3 |A|^3 / |L(A)|^2  <=  E_3(L, A)  <=  |L|^3 |A|^3 / q^2 + 3 |L|^2 |A| q

and of the Fourier tail estimate that feeds the upper bound.

Rational quantities are compared exactly after clearing denominators.  Only the
Fourier tail is floating point, compared with a fixed slack of TAIL_SLACK.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from . import spectral
from .errors import EmptyDomain, EmptyInput, NegativeValue, NonProductFamily, ZeroSize, ZeroSlopePresent
from .field import FieldSpec
from .setstats import (
    LineFamily,
    SubsetFq,
    b_a_plus_c,
    ba_plus_c,
    cube_sum,
    energy3,
    image_set,
    lines_from_b_times_c,
    lines_from_bc,
    rep_function,
)

TAIL_SLACK = 1e-9
MODES = ("BA+C", "B(A+C)")


class CheckResult(NamedTuple):
    lhs: object
    rhs: object
    passed: bool


def _require_nonempty(L: LineFamily, A: SubsetFq):
    if len(L) == 0 or A.size == 0:
        raise EmptyInput("line family and A must be nonempty")


def holder_check(F: FieldSpec, L: LineFamily, A: SubsetFq) -> CheckResult:
    """|L|^3 |A|^3 <= E_3 |L(A)|^2, all in integers."""
    _require_nonempty(L, A)
    lhs = len(L) ** 3 * A.size**3
    rhs = energy3(F, L, A) * image_set(F, L, A).size ** 2
    return CheckResult(lhs, rhs, lhs <= rhs)


def third_moment_check(f, n: int = 3) -> CheckResult:
    """sum f^n <= |D| mu^n + n(n-1)/2 * max(f)^(n-2) * sum (f - mu)^2, mu = sum f / |D|.

    Holds for any nonnegative f on a finite domain D; evaluated in exact rationals.
    """
    vals = [Fraction(v) for v in f]
    if not vals:
        raise EmptyDomain("function has an empty domain")
    if any(v < 0 for v in vals):
        raise NegativeValue("function takes a negative value")
    if n < 2:
        raise ValueError("exponent n must be >= 2")
    size = len(vals)
    mean = sum(vals) / size
    lhs = sum(v**n for v in vals)
    spread = sum((v - mean) ** 2 for v in vals)
    rhs = size * mean**n + Fraction(n * (n - 1), 2) * max(vals) ** (n - 2) * spread
    return CheckResult(lhs, rhs, lhs <= rhs)


def _family(F, B, C, mode):
    if mode == "BA+C":
        return lines_from_bc(F, B, C)
    if mode == "B(A+C)":
        return lines_from_b_times_c(F, B, C)
    raise ValueError(f"unknown mode {mode!r}")


def fourier_tail(F: FieldSpec, counts, transform=spectral.fourier_forward) -> float:
    """sum over xi != 0 of |fhat(xi)|^2."""
    fhat = transform(F, np.asarray(counts, dtype=np.float64))
    return float(np.sum(np.abs(fhat[1:]) ** 2))


def fourier_tail_check(F: FieldSpec, A: SubsetFq, B: SubsetFq, C: SubsetFq,
                       mode: str = "BA+C", transform=spectral.fourier_forward) -> CheckResult:
    """Tail of the spectrum of r against |A||B||C|, with 0 not in B."""
    if not (A.size and B.size and C.size):
        raise EmptyInput("A, B and C must be nonempty")
    if 0 in B:
        raise ZeroSlopePresent("0 in B gives slope-zero lines")
    L = _family(F, B, C, mode)
    tail = fourier_tail(F, rep_function(F, L, A), transform)
    bound = A.size * B.size * C.size
    return CheckResult(tail, bound, tail <= bound + TAIL_SLACK)


def energy_upper_rhs(q: int, size_L: int, size_A: int) -> Fraction:
    return Fraction(size_L**3 * size_A**3, q * q) + 3 * size_L**2 * size_A * q


def energy_upper_check(F: FieldSpec, L: LineFamily, A: SubsetFq) -> CheckResult:
    """E_3(L, A) <= |L|^3 |A|^3 / q^2 + 3 |L|^2 |A| q for families built from B x C."""
    _require_nonempty(L, A)
    if not L.all_slopes_nonzero:
        raise ZeroSlopePresent("family contains slope-zero lines")
    if L.structure is None:
        raise NonProductFamily("family was not built from a pair (B, C)")
    e3 = energy3(F, L, A)
    rhs = energy_upper_rhs(F.q, len(L), A.size)
    return CheckResult(e3, rhs, e3 <= rhs)


def exact_lower_bound(q: int, size_L: int, size_A: int) -> float:
    """sqrt(X / (X / q^2 + 3 |L|^2 |A| q)) with X = |L|^3 |A|^3."""
    if size_L < 1 or size_A < 1:
        raise ZeroSize("|L| and |A| must be positive")
    x = size_L**3 * size_A**3
    return math.sqrt(Fraction(x) / energy_upper_rhs(q, size_L, size_A))


def meets_exact_lower_bound(size_image: int, q: int, size_L: int, size_A: int) -> bool:
    """size_image >= exact_lower_bound(q, size_L, size_A), decided in integers."""
    if size_L < 1 or size_A < 1:
        raise ZeroSize("|L| and |A| must be positive")
    x = size_L**3 * size_A**3
    return size_image**2 * (x + 3 * size_L**2 * size_A * q**3) >= x * q * q


def _sqrt_fraction(fr: Fraction) -> float:
    n, d = fr.numerator, fr.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return rn / rd
    return math.sqrt(fr)


def asymptotic_bound(q: int, size_A: int, size_B: int, size_C: int) -> float:
    """min{q, sqrt(|B||C|) |A| / sqrt(q)}."""
    sq = Fraction(size_B * size_C * size_A**2, q)
    return float(q) if sq >= q * q else _sqrt_fraction(sq)


def _ratio(size: int, q: int, size_A: int, size_B: int, size_C: int) -> float:
    sq = Fraction(size_B * size_C * size_A**2, q)
    if sq >= q * q:
        return size / q
    return _sqrt_fraction(Fraction(size * size) / sq)


def asymptotic_ratio(F: FieldSpec, A: SubsetFq, B: SubsetFq, C: SubsetFq, mode: str = "BA+C") -> float:
    if not (A.size and B.size and C.size):
        raise EmptyInput("A, B and C must be nonempty")
    image = ba_plus_c(F, A, B, C) if mode == "BA+C" else b_a_plus_c(F, A, B, C)
    return _ratio(image.size, F.q, A.size, B.size, C.size)


@dataclass
class BoundReport:
    field: str
    q: int
    p: int
    l: int
    mode: str
    size_A: int
    size_B: int
    size_C: int
    size_L: int
    size_image: int
    family: str = ""
    seed: int | None = None
    status: str = "ok"
    size_L_checked: int = 0
    size_image_checked: int = 0
    E3: int | None = None
    lemma1_lhs: int | None = None
    lemma1_rhs: int | None = None
    lemma1_pass: bool | None = None
    lemma2_lhs: Fraction | None = None
    lemma2_rhs: Fraction | None = None
    lemma2_pass: bool | None = None
    tail_sum: float | None = None
    tail_bound: int | None = None
    tail_pass: bool | None = None
    energy_upper_rhs: Fraction | None = None
    energy_upper_pass: bool | None = None
    exact_lower_bound: float | None = None
    exact_bound_pass: bool | None = None
    asymptotic_bound: float = 0.0
    ratio: float = 0.0
    all_slopes_nonzero: bool = True
    checks_passed: bool | None = None
    notes: list = field(default_factory=list)

    def to_dict(self) -> dict:
        out = asdict(self)
        for k, v in out.items():
            if isinstance(v, Fraction):
                out[k] = f"{v.numerator}/{v.denominator}"
        out["notes"] = list(self.notes)
        return out

    def consistent(self) -> bool:
        """Stored pass flags agree with the stored sides."""
        pairs = [
            (self.lemma1_pass, self.lemma1_lhs, self.lemma1_rhs),
            (self.lemma2_pass, self.lemma2_lhs, self.lemma2_rhs),
            (self.energy_upper_pass, self.E3, self.energy_upper_rhs),
        ]
        ok = all(flag is None or flag == (lhs <= rhs) for flag, lhs, rhs in pairs)
        if self.tail_pass is not None:
            ok &= self.tail_pass == (self.tail_sum <= self.tail_bound + TAIL_SLACK)
        return ok


def check_chain(F: FieldSpec, A: SubsetFq, B: SubsetFq, C: SubsetFq, mode: str = "BA+C",
                family: str = "", seed: int | None = None,
                transform=spectral.fourier_forward) -> BoundReport:
    """Run every check on one instance.

    Slope-zero lines are dropped before the chain is evaluated: the checked
    family uses B minus {0}, and the final comparison is
    |image| >= |L'(A)| >= exact lower bound.
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    if not (A.size and B.size and C.size):
        raise EmptyInput("A, B and C must be nonempty")
    image = ba_plus_c(F, A, B, C) if mode == "BA+C" else b_a_plus_c(F, A, B, C)
    rep = BoundReport(
        field=str(F), q=F.q, p=F.p, l=F.l, mode=mode,
        size_A=A.size, size_B=B.size, size_C=C.size, size_L=B.size * C.size,
        size_image=image.size, family=family, seed=seed,
        asymptotic_bound=asymptotic_bound(F.q, A.size, B.size, C.size),
        ratio=_ratio(image.size, F.q, A.size, B.size, C.size),
        all_slopes_nonzero=0 not in B,
    )
    B_nz = B - SubsetFq.from_elements(F.q, [0])
    if B_nz.size == 0:
        rep.status = "skipped:no-nonzero-slope"
        return rep
    if B_nz.size != B.size:
        rep.notes.append("slope-zero-excluded")

    L = _family(F, B_nz, C, mode)
    counts = rep_function(F, L, A)
    checked_image = image_set(F, L, A).size
    rep.size_L_checked = len(L)
    rep.size_image_checked = checked_image

    e3 = cube_sum(counts)
    rep.E3 = e3
    rep.lemma1_lhs = len(L) ** 3 * A.size**3
    rep.lemma1_rhs = e3 * checked_image**2
    rep.lemma1_pass = rep.lemma1_lhs <= rep.lemma1_rhs

    lem2 = third_moment_check(counts.tolist(), 3)
    rep.lemma2_lhs, rep.lemma2_rhs, rep.lemma2_pass = lem2

    tail = fourier_tail(F, counts, transform)
    rep.tail_sum = tail
    rep.tail_bound = A.size * B_nz.size * C.size
    rep.tail_pass = tail <= rep.tail_bound + TAIL_SLACK

    rep.energy_upper_rhs = energy_upper_rhs(F.q, len(L), A.size)
    rep.energy_upper_pass = e3 <= rep.energy_upper_rhs

    rep.exact_lower_bound = exact_lower_bound(F.q, len(L), A.size)
    rep.exact_bound_pass = (image.size >= checked_image
                            and meets_exact_lower_bound(checked_image, F.q, len(L), A.size))

    rep.checks_passed = all([rep.lemma1_pass, rep.lemma2_pass, rep.tail_pass,
                             rep.energy_upper_pass, rep.exact_bound_pass])
    if not rep.checks_passed:
        rep.status = "failed"
    return rep
