import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sumprod.field import make_field
from sumprod.setstats import (
    LineFamily,
    SubsetFq,
    b_a_plus_c,
    ba_plus_c,
    cube_sum,
    energy3,
    energy3_bruteforce,
    image_set,
    lines_from_b_times_c,
    lines_from_bc,
    productset,
    read_subset,
    rep_function,
    sumset,
    write_subset,
)

FIELDS = [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2), (11, 1)]


def S(q, *xs):
    return SubsetFq.from_elements(q, xs)


@st.composite
def instances(draw, max_size=5):
    F = make_field(*draw(st.sampled_from(FIELDS)))
    sets = [draw(st.sets(st.integers(0, F.q - 1), min_size=0, max_size=max_size)) for _ in range(3)]
    return F, sets


def brute_image(F, L_points, A):
    return {F.add(F.mul(m, a), b) for m, b in L_points for a in A}


def test_subset_basics():
    A = S(7, 1, 3, 3)
    assert A.size == 2 and len(A) == 2
    assert 3 in A and 2 not in A
    assert list(A) == [1, 3]
    assert A == S(7, 3, 1)
    assert hash(A) == hash(S(7, 1, 3))
    with pytest.raises(ValueError):
        A.bits[0] = True
    with pytest.raises(ValueError):
        S(5, 5)


def test_sumset_productset_examples(f5):
    zero = S(5, 0)
    assert sumset(f5, zero, zero) == zero
    assert productset(f5, zero, zero) == zero
    A = S(5, 1, 2)
    assert sumset(f5, A, A) == S(5, 2, 3, 4)
    assert productset(f5, A, A) == S(5, 1, 2, 4)


def test_full_set_closure(field):
    full = SubsetFq.full(field.q)
    assert sumset(field, full, full) == full
    assert productset(field, full, full) == full


def test_empty_sets(f5):
    empty = S(5)
    A = S(5, 1, 2)
    assert sumset(f5, empty, A).size == 0
    assert ba_plus_c(f5, A, empty, A).size == 0


def test_ba_plus_c_examples(f5):
    A = S(5, 1, 2)
    assert ba_plus_c(f5, A, A, A) == SubsetFq.full(5)
    F4 = make_field(2, 2)
    sub = S(4, 0, 1)
    assert ba_plus_c(F4, sub, sub, sub) == sub
    one = S(5, 1)
    assert ba_plus_c(f5, A, one, S(5, 0, 3)) == sumset(f5, A, S(5, 0, 3))


@settings(max_examples=150, deadline=None)
@given(instances())
def test_triple_images_match_enumeration(inst):
    F, (A, B, C) = inst
    q = F.q
    expected_ba = {F.add(F.mul(b, a), c) for a in A for b in B for c in C}
    expected_bac = {F.mul(b, F.add(a, c)) for a in A for b in B for c in C}
    sA, sB, sC = (SubsetFq.from_elements(q, X) for X in (A, B, C))
    assert set(ba_plus_c(F, sA, sB, sC)) == expected_ba
    assert set(b_a_plus_c(F, sA, sB, sC)) == expected_bac


def test_lines_from_bc_examples(f5):
    L = lines_from_bc(f5, S(5, 1, 2), S(5, 1, 2))
    assert len(L) == 4 and L.all_slopes_nonzero
    L = lines_from_bc(f5, S(5, 0, 1), S(5, 0, 1))
    assert len(L) == 3 and not L.all_slopes_nonzero
    assert (0, 0) not in L.points
    assert len(lines_from_bc(f5, S(5), S(5, 1))) == 0


def test_line_family_validation():
    with pytest.raises(ValueError):
        LineFamily.from_points([(0, 0), (1, 1)])
    with pytest.raises(ValueError):
        LineFamily.from_points([(1, 1), (1, 1)])
    L = LineFamily.from_points([(0, 2), (3, 1)])
    assert not L.all_slopes_nonzero
    assert L.nonzero_slopes().points == [(3, 1)]
    assert L.structure is None


def test_image_set_examples(f5):
    A = S(5, 1, 2)
    L = lines_from_bc(f5, A, A)
    assert image_set(f5, L, A) == SubsetFq.full(5) == ba_plus_c(f5, A, A, A)
    assert image_set(f5, L, S(5, 0)) == S(5, 1, 2)
    assert image_set(f5, LineFamily.from_points([]), A).size == 0
    assert image_set(f5, L, S(5)).size == 0


def test_rep_function_examples(f5):
    A = S(5, 1, 2)
    r = rep_function(f5, lines_from_bc(f5, A, A), A)
    assert r.tolist() == [1, 1, 1, 3, 2]
    one_line = LineFamily.from_points([(3, 4)])
    r = rep_function(f5, one_line, S(5, 0, 2, 4))
    assert set(r.tolist()) <= {0, 1} and r.sum() == 3
    assert rep_function(f5, LineFamily.from_points([(1, 0)]), SubsetFq.full(5)).tolist() == [1] * 5


def test_energy_examples(f5):
    A = S(5, 1, 2)
    L = lines_from_bc(f5, A, A)
    assert energy3(f5, L, A) == 38
    assert energy3_bruteforce(f5, L, A) == 38
    one_line = LineFamily.from_points([(2, 1)])
    assert energy3(f5, one_line, S(5, 0, 1, 3)) == 3
    assert energy3(f5, LineFamily.from_points([]), A) == 0
    assert energy3(f5, L, S(5)) == 0
    assert energy3_bruteforce(f5, L, S(5)) == 0


def test_cube_sum_is_exact_beyond_64_bits():
    counts = np.array([3_000_000, 5, 2_100_000], dtype=np.int64)
    expected = 3_000_000**3 + 125 + 2_100_000**3
    assert expected > 2**63
    assert cube_sum(counts) == expected
    assert int(np.sum(counts**3)) != expected  # the int64 route wraps


def test_energy_large_prime_field():
    F = make_field(8191)
    L = LineFamily(np.arange(1, 8191), np.zeros(8190, dtype=np.int64))
    # r(0) = 8190 from a = 0, and each nonzero x is hit once by each a != 0
    A = SubsetFq.from_elements(F.q, [0, 1])
    assert energy3(F, L, A) == 8190**3 + 8190


@settings(max_examples=120, deadline=None)
@given(instances())
def test_rep_function_invariants(inst):
    F, (A, B, C) = inst
    sA, sB, sC = (SubsetFq.from_elements(F.q, X) for X in (A, B, C))
    L = lines_from_bc(F, sB, sC)
    r = rep_function(F, L, sA)
    assert r.sum() == len(L) * sA.size
    if L.all_slopes_nonzero and len(L):
        assert r.max() <= len(L)
    assert set(np.flatnonzero(r).tolist()) == set(image_set(F, L, sA))
    assert set(image_set(F, L, sA)) == brute_image(F, L.points, A)
    assert energy3(F, L, sA) == energy3_bruteforce(F, L, sA)


def test_slope_zero_can_exceed_family_size():
    F = make_field(5)
    L = LineFamily.from_points([(0, 1), (1, 0)])
    r = rep_function(F, L, SubsetFq.full(5))
    assert r.max() > len(L)


@settings(max_examples=120, deadline=None)
@given(instances())
def test_family_images_vs_direct_sets(inst):
    F, (A, B, C) = inst
    q = F.q
    sA, sB, sC = (SubsetFq.from_elements(q, X) for X in (A, B, C))
    direct = ba_plus_c(F, sA, sB, sC)
    via_lines = image_set(F, lines_from_bc(F, sB, sC), sA)
    if not (0 in B and 0 in C):
        assert via_lines == direct
    else:
        assert via_lines <= direct
        assert set(direct - via_lines) <= {0}
    zero = S(q, 0) if sA.size and sC.size and 0 in B else S(q)
    family = lines_from_b_times_c(F, sB, sC)
    assert image_set(F, family, sA) | zero == b_a_plus_c(F, sA, sB, sC)
    assert len(family) == (sB.size - (0 in B)) * sC.size


def test_subset_file_roundtrip(tmp_path):
    F = make_field(3, 2)
    A = S(9, 0, 4, 8)
    path = tmp_path / "a.txt"
    write_subset(path, F, A)
    assert path.read_text().splitlines()[0] == "field 3^2/10"
    G, B = read_subset(path)
    assert G == F and B == A


def test_subset_file_bad_header(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("1\n2\n")
    with pytest.raises(ValueError):
        read_subset(path)


def test_translation_and_dilation_helpers(f5):
    A = S(5, 1, 2)
    assert A.translate(f5, 3) == S(5, 4, 0)
    assert A.dilate(f5, 2) == S(5, 2, 4)


def test_exhaustive_small_field_images():
    F = make_field(2, 2)
    subsets = [SubsetFq.from_elements(4, [x for x in range(4) if m >> x & 1]) for m in range(16)]
    for A, B, C in itertools.product(subsets[1::3], repeat=3):
        expected = {F.add(F.mul(b, a), c) for a in A for b in B for c in C}
        assert set(ba_plus_c(F, A, B, C)) == expected
