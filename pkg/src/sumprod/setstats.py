"""Subsets of F_q, pinned line families and their counting statistics."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import IoFailure
from .field import FieldSpec

_BLOCK = 1 << 20  # pairs evaluated per numpy block


class SubsetFq:
    """A subset of F_q stored as a read-only boolean vector of length q."""

    __slots__ = ("bits", "size")

    def __init__(self, bits):
        bits = np.array(bits, dtype=bool, copy=True).reshape(-1)
        bits.setflags(write=False)
        self.bits = bits
        self.size = int(bits.sum())

    @classmethod
    def from_elements(cls, q: int, elements) -> SubsetFq:
        bits = np.zeros(q, dtype=bool)
        idx = np.asarray(list(elements) if not isinstance(elements, np.ndarray) else elements,
                         dtype=np.int64)
        if idx.size and (idx.min() < 0 or idx.max() >= q):
            raise ValueError(f"element index outside [0, {q})")
        bits[idx] = True
        return cls(bits)

    @classmethod
    def full(cls, q: int) -> SubsetFq:
        return cls(np.ones(q, dtype=bool))

    @property
    def q(self) -> int:
        return self.bits.shape[0]

    def elements(self) -> np.ndarray:
        return np.flatnonzero(self.bits)

    def __len__(self):
        return self.size

    def __contains__(self, x):
        return 0 <= x < self.q and bool(self.bits[x])

    def __iter__(self):
        return iter(self.elements().tolist())

    def __eq__(self, other):
        if not isinstance(other, SubsetFq):
            return NotImplemented
        return self.q == other.q and bool(np.array_equal(self.bits, other.bits))

    def __hash__(self):
        return hash((self.q, self.bits.tobytes()))

    def __le__(self, other):
        return bool(np.all(~self.bits | other.bits))

    def __or__(self, other):
        return SubsetFq(self.bits | other.bits)

    def __and__(self, other):
        return SubsetFq(self.bits & other.bits)

    def __sub__(self, other):
        return SubsetFq(self.bits & ~other.bits)

    def __repr__(self):
        return f"SubsetFq(q={self.q}, {self.elements().tolist()})"

    def translate(self, F: FieldSpec, s: int) -> SubsetFq:
        return SubsetFq.from_elements(F.q, F.add(self.elements(), s))

    def dilate(self, F: FieldSpec, lam: int) -> SubsetFq:
        return SubsetFq.from_elements(F.q, F.mul(self.elements(), lam))


def _image(F: FieldSpec, xs, ys, op) -> SubsetFq:
    """{op(x, y)} over all pairs, evaluated in bounded-size blocks."""
    xs, ys = np.asarray(xs, dtype=np.int64), np.asarray(ys, dtype=np.int64)
    bits = np.zeros(F.q, dtype=bool)
    if xs.size and ys.size:
        step = max(1, _BLOCK // ys.size)
        for start in range(0, xs.size, step):
            bits[np.asarray(op(xs[start:start + step, None], ys[None, :])).ravel()] = True
    return SubsetFq(bits)


def sumset(F: FieldSpec, A: SubsetFq, B: SubsetFq) -> SubsetFq:
    return _image(F, A.elements(), B.elements(), F.add)


def productset(F: FieldSpec, A: SubsetFq, B: SubsetFq) -> SubsetFq:
    return _image(F, A.elements(), B.elements(), F.mul)


def ba_plus_c(F: FieldSpec, A: SubsetFq, B: SubsetFq, C: SubsetFq) -> SubsetFq:
    """BA + C = {ba + c}."""
    return sumset(F, productset(F, B, A), C)


def b_a_plus_c(F: FieldSpec, A: SubsetFq, B: SubsetFq, C: SubsetFq) -> SubsetFq:
    """B(A + C) = {b(a + c)}."""
    return productset(F, B, sumset(F, A, C))


@dataclass(frozen=True, eq=False)
class LineFamily:
    """Lines x -> m x + b indexed by distinct points (m, b) != (0, 0).

    ``structure`` records how the family was built from a pair (B, C):
    "BA+C" for points B x C, "B(A+C)" for points (b, b c).  It is None for
    families given point by point.
    """

    slopes: np.ndarray
    intercepts: np.ndarray
    structure: str | None = None
    factor_sizes: tuple | None = None

    def __post_init__(self):
        m = np.array(self.slopes, dtype=np.int64).reshape(-1)
        b = np.array(self.intercepts, dtype=np.int64).reshape(-1)
        if m.shape != b.shape:
            raise ValueError("slopes and intercepts differ in length")
        if np.any((m == 0) & (b == 0)):
            raise ValueError("(0, 0) is not a valid line")
        if m.size and np.unique(np.stack([m, b], axis=1), axis=0).shape[0] != m.size:
            raise ValueError("duplicate lines in family")
        m.setflags(write=False)
        b.setflags(write=False)
        object.__setattr__(self, "slopes", m)
        object.__setattr__(self, "intercepts", b)

    @classmethod
    def from_points(cls, points) -> LineFamily:
        pts = list(points)
        if not pts:
            return cls(np.zeros(0, np.int64), np.zeros(0, np.int64))
        m, b = zip(*pts)
        return cls(np.array(m), np.array(b))

    @property
    def all_slopes_nonzero(self) -> bool:
        return bool(np.all(self.slopes != 0))

    @property
    def points(self) -> list:
        return list(zip(self.slopes.tolist(), self.intercepts.tolist()))

    def __len__(self):
        return int(self.slopes.size)

    def nonzero_slopes(self) -> LineFamily:
        keep = self.slopes != 0
        if keep.all():
            return self
        return LineFamily(self.slopes[keep], self.intercepts[keep])


def lines_from_bc(F: FieldSpec, B: SubsetFq, C: SubsetFq) -> LineFamily:
    """Points (B x C) minus (0, 0)."""
    m, b = np.meshgrid(B.elements(), C.elements(), indexing="ij")
    m, b = m.ravel(), b.ravel()
    keep = (m != 0) | (b != 0)
    return LineFamily(m[keep], b[keep], structure="BA+C", factor_sizes=(B.size, C.size))


def lines_from_b_times_c(F: FieldSpec, B: SubsetFq, C: SubsetFq) -> LineFamily:
    """Points (b, b c) for b in B minus {0}; the family whose image of A is (B minus 0)(A + C)."""
    nz = B.elements()
    nz = nz[nz != 0]
    m, c = np.meshgrid(nz, C.elements(), indexing="ij")
    m, c = m.ravel(), c.ravel()
    return LineFamily(m, np.asarray(F.mul(m, c)).reshape(-1), structure="B(A+C)",
                      factor_sizes=(int(nz.size), C.size))


def _line_values(F: FieldSpec, L: LineFamily, a: np.ndarray, start: int, stop: int):
    m = L.slopes[start:stop, None]
    b = L.intercepts[start:stop, None]
    return np.asarray(F.add(F.mul(m, a[None, :]), b)).ravel()


def image_set(F: FieldSpec, L: LineFamily, A: SubsetFq) -> SubsetFq:
    """L(A) = {m a + b : (m, b) in L, a in A}."""
    a = A.elements()
    bits = np.zeros(F.q, dtype=bool)
    if len(L) and a.size:
        step = max(1, _BLOCK // a.size)
        for start in range(0, len(L), step):
            bits[_line_values(F, L, a, start, start + step)] = True
    return SubsetFq(bits)


def rep_function(F: FieldSpec, L: LineFamily, A: SubsetFq) -> np.ndarray:
    """counts[x] = #{((m, b), a) : m a + b = x}."""
    a = A.elements()
    counts = np.zeros(F.q, dtype=np.int64)
    if len(L) and a.size:
        step = max(1, _BLOCK // a.size)
        for start in range(0, len(L), step):
            counts += np.bincount(_line_values(F, L, a, start, start + step), minlength=F.q)
    return counts


def cube_sum(counts) -> int:
    """sum of c^3 in Python integers; int64 cubes overflow once c > 2^21."""
    return sum(c * c * c for c in np.asarray(counts).tolist())


def energy3(F: FieldSpec, L: LineFamily, A: SubsetFq) -> int:
    """E_3(L, A) = sum_x r(x)^3 as an exact integer."""
    return cube_sum(rep_function(F, L, A))


def energy3_bruteforce(F: FieldSpec, L: LineFamily, A: SubsetFq) -> int:
    """Count triples of (line, a) pairs with a common value by direct enumeration."""
    values = np.array(
        [F.add(F.mul(m, a), b) for m, b in L.points for a in A.elements().tolist()],
        dtype=np.int64,
    )
    n = values.size
    total = 0
    step = max(1, _BLOCK // max(1, n * n))
    for start in range(0, n, step):
        v1 = values[start:start + step, None, None]
        same = (v1 == values[None, :, None]) & (v1 == values[None, None, :])
        total += int(same.sum())
    return total


def read_subset(path, cap: int | None = None) -> tuple[FieldSpec, SubsetFq]:
    """Read the text format: header "field p^l/modulus", then one index per line."""
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise IoFailure(str(exc)) from exc
    lines = [ln.strip() for ln in lines if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines or not lines[0].startswith("field "):
        raise ValueError(f"{path}: missing 'field p^l/modulus' header")
    F = FieldSpec.parse(lines[0].split(None, 1)[1], cap=cap)
    return F, SubsetFq.from_elements(F.q, [int(x) for x in lines[1:]])


def write_subset(path, F: FieldSpec, A: SubsetFq) -> None:
    text = f"field {F}\n" + "".join(f"{x}\n" for x in A.elements().tolist())
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise IoFailure(str(exc)) from exc
