import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from koszul_forge.errors import InternalInvariantError
from koszul_forge.free_algebra import MonomialOrder, parse_poly
from koszul_forge.graphs import Graph, stanley_reisner
from koszul_forge.koszul import (
    Verdict,
    ext_table,
    extremal_series_koszul,
    koszul_verdict,
    series_identity_check,
    strongly_free_check,
    uw_check,
    uw_search,
)
from koszul_forge.quadratic import (
    combine,
    component_dim,
    demushkin_algebra,
    dual,
    exterior_algebra,
    free_algebra,
    make_quadratic,
    symmetric_algebra,
    trivial_algebra,
)
from koszul_forge.rewriting import algebra_hilbert, series_inverse
from strategies import random_algebra

NON_KOSZUL = ["X1^2 + X2*X3 + X3*X2", "X1*X2 + X2*X1 + X2^2 + X2*X3 + X3*X1", "X1*X3 + X2*X1 + X3*X1 + X3*X2"]


def non_koszul():
    return make_quadratic(2, 3, [parse_poly(s, 2, 3) for s in NON_KOSZUL])


def polys(texts, p, d):
    return [parse_poly(t, p, d) for t in texts]


def test_verdict_invariants():
    with pytest.raises(InternalInvariantError):
        Verdict("Certified")
    with pytest.raises(InternalInvariantError):
        Verdict("Refuted")
    with pytest.raises(InternalInvariantError):
        Verdict("Certified", "PBW", refutation={"kind": "x"})
    assert Verdict("ConsistentUpTo", upto=6).label() == "ConsistentUpTo(6)"


def test_empty_sequence_is_strongly_free():
    assert strongly_free_check([], p=3, d=2).certificate == "EmptySequence"


def test_strong_freeness_routes():
    v = strongly_free_check(polys(["[X1,X2]", "[X1,X3]", "[X2,X3] + [X4,X5]"], 3, 5))
    assert v.certificate == "CombinatorialFreeness"
    v = strongly_free_check(polys(["X1^2"], 3, 1))
    assert v.refuted and v.refutation == {"kind": "SeriesMismatch", "degree": 3}
    # x1 x2 under the order X2 < X1: a finite basis with the right rational series
    v = strongly_free_check(polys(["X1*X2"], 3, 2), MonomialOrder((2, 1)))
    assert v.certified


def test_strong_freeness_rejects_bad_input():
    with pytest.raises(ValueError):
        strongly_free_check(polys(["X1 + X1*X2"], 3, 2))
    with pytest.raises(ValueError):
        strongly_free_check(polys(["X1"], 3, 2))


def test_strong_freeness_through_koszul_dual():
    # commutators along a 5-cycle: no order makes the leading words free
    rels = polys(["[X1,X2]", "[X2,X3]", "[X3,X4]", "[X4,X5]", "[X1,X5]"], 3, 5)
    v = strongly_free_check(rels)
    assert v.certificate == "KoszulDual"
    assert algebra_hilbert(make_quadratic(3, 5, rels), 7) == series_inverse([1, -5, 5], 7)


@pytest.mark.parametrize(
    "A, cert",
    [
        (symmetric_algebra(3, 3), "PBW"),
        (exterior_algebra(3, 3), "PBW"),
        (free_algebra(5, 2), "PBW"),
        (trivial_algebra(2, 2), "PBW"),
        (demushkin_algebra(3, 4), "PBW"),
        (combine(symmetric_algebra(3, 2), exterior_algebra(3, 2), "free"), "ClosureOperation"),
        (stanley_reisner(Graph.cycle(5), 3), "UWDecomposition"),
    ],
)
def test_certified_algebras(A, cert):
    v = koszul_verdict(A, 6)
    assert v.certificate == cert
    assert series_identity_check(A, 8).holds


def test_series_identity_refutation():
    v = koszul_verdict(non_koszul(), 8)
    assert v.refutation == {"kind": "SeriesIdentityFailure", "degree": 4}


def test_off_diagonal_ext_refutation():
    v = koszul_verdict(non_koszul(), 3, ext_bounds=(4, 5))
    assert v.refutation == {"kind": "OffDiagonalExt", "i": 3, "j": 4}


def test_random_d3_r3_mostly_refuted():
    rng = random.Random(7)
    refuted = 0
    for _ in range(20):
        A = random_algebra(rng, (2, 3), 3, 3)
        if A.d == 3 and not series_identity_check(A, 6).holds:
            refuted += 1
    assert refuted > 0


def test_extremal_series():
    assert extremal_series_koszul(demushkin_algebra(3, 2), 6).certificate == "ExtremalSeries"
    v = extremal_series_koszul(exterior_algebra(3, 3), 6)
    assert v.refuted and any("extremal" in n for n in v.notes)


def test_uw_square_graph():
    A = stanley_reisner(Graph.cycle(4), 3)
    e = [[1 if i == j else 0 for j in range(4)] for i in range(4)]
    res = uw_check(A, [e[0], e[2]], [e[1], e[3]])
    assert res.certified and "verified A_3 = 0" in res.notes
    assert not uw_check(A, [e[0], e[1]], [e[2], e[3]]).certified


def test_uw_rejects_non_complementary_split():
    A = stanley_reisner(Graph.cycle(4), 3)
    with pytest.raises(ValueError):
        uw_check(A, [[1, 0, 0, 0]], [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0]])


def test_uw_search_not_found_for_polynomial_ring():
    assert not uw_search(symmetric_algebra(3, 2), 1, coordinate_only=True).found


def test_uw_search_is_seeded():
    A = stanley_reisner(Graph.cycle(5), 3)
    a, b = uw_search(A, 2000, seed=3), uw_search(A, 2000, seed=3)
    assert a.found and (a.U, a.W, a.tried) == (b.U, b.W, b.tried)


def test_ext_exterior_is_diagonal():
    T = ext_table(exterior_algebra(3, 2), 4, 6)
    assert T.is_diagonal()
    assert T.diagonal() == [1, 2, 3, 4, 5]


def test_ext_of_free_and_trivial():
    T = ext_table(free_algebra(3, 2), 3, 4)
    assert {k: v for k, v in T.dims.items() if v} == {(0, 0): 1, (1, 1): 2}
    assert ext_table(trivial_algebra(3, 2), 4, 4).diagonal() == [1, 2, 4, 8, 16]


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_ext_euler_characteristic(seed):
    """sum_i (-1)^i Ext^{i,j} is the z^j coefficient of 1/h_A, for any A."""
    rng = random.Random(seed)
    A = random_algebra(rng, (2, 3), 3)
    n = 5
    T = ext_table(A, n, n)
    h = algebra_hilbert(A, n)
    inv = series_inverse(h, n)
    for j in range(n + 1):
        assert sum((-1) ** i * T[i, j] for i in range(n + 1)) == inv[j]
    assert T[1, 1] == A.d and T[2, 2] == A.r
    assert all(T[2, j] == 0 for j in range(3, n + 1))


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_ext_diagonal_is_dual(seed):
    rng = random.Random(seed)
    A = random_algebra(rng, (2, 3), 3)
    T = ext_table(A, 3, 3)
    B = dual(A)
    assert T.diagonal() == [component_dim(B, i) for i in range(4)]


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_verdicts_are_consistent(seed):
    rng = random.Random(seed)
    A = random_algebra(rng, (2, 3), 3)
    v = koszul_verdict(A, 6, budget=20)
    ident = series_identity_check(A, 6)
    if v.certified:
        assert ident.holds
        # Koszulity transfers to the dual
        assert not koszul_verdict(dual(A), 6, budget=20).refuted
    if not ident.holds:
        assert v.refuted
