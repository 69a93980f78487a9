import pytest

from lodaymay.algebra import FilteredAlgebra, exterior_algebra, truncated_polynomial, whitehead_filtration
from lodaymay.apps import square_zero_collapses
from lodaymay.corpus import x4_weighted
from lodaymay.loday import build, homology
from lodaymay.mayfilt import filter, gr_complex
from lodaymay.simplicial import circle
from lodaymay.specseq import (ExplicitComplex, ExplicitFiltered, UnboundedFiltration, collapse_by_bidegree, pages,
                              persistence_pages, upper_bound_check)


def test_two_term_complex_dies_on_e2():
    # F_3 -> F_3, source weight 0, target weight 1: d^1 is an isomorphism
    ss = pages(ExplicitFiltered(ExplicitComplex(3, {0: [1], 1: [0]}, {1: [[1]]})))
    assert ss.dim(1, 1, 0) == 1 and ss.dim(1, 0, 1) == 1
    assert ss.diff_rank(1, 1, 0) == 1
    assert ss.dim(2, 1, 0) == ss.dim(2, 0, 1) == 0
    assert ss.einf_total(0) == ss.einf_total(1) == 0


def test_longer_differential_appears_on_the_right_page():
    # the same isomorphism with a weight gap of 2 survives E^1 and E^2 and is killed by d^2
    ss = pages(ExplicitFiltered(ExplicitComplex(5, {0: [2], 1: [0]}, {1: [[3]]})))
    assert [ss.dim(r, 1, 0) for r in (1, 2, 3)] == [1, 1, 0]
    assert ss.diff_rank(1, 1, 0) == 0 and ss.diff_rank(2, 1, 0) == 1
    assert ss.nonzero_differentials() == [(2, 1, 0, 1)]


def test_trivial_filtration_gives_homology_on_e1():
    # d = [1 1] from F^2 to F: homology is one class in degree 1
    ss = pages(ExplicitFiltered(ExplicitComplex(3, {0: [0], 1: [0, 0]}, {1: [[1, 1]]})))
    assert ss.page_total(1, 1) == 1 and ss.page_total(1, 0) == 0
    assert ss.einf_total(1) == ss.abutment[1] == 1


def test_explicit_complex_validation():
    with pytest.raises(ValueError):
        ExplicitComplex(3, {0: [0], 1: [0]}, {1: [[1, 1]]})
    with pytest.raises(ValueError):
        ExplicitComplex(3, {0: [0], 1: [0], 2: [0]}, {1: [[1]], 2: [[1]]})
    with pytest.raises(ValueError):
        ExplicitFiltered(ExplicitComplex(3, {0: [0], 1: [1]}, {1: [[1]]}))


def test_collapse_by_bidegree():
    assert not collapse_by_bidegree({(5, 0): 1, (4, 2): 1})
    assert collapse_by_bidegree({(0, 0): 1, (0, 1): 2, (0, 4): 1})
    assert collapse_by_bidegree({})
    # restricting the sources to generators
    assert collapse_by_bidegree({(5, 0): 1, (4, 2): 1}, sources=[(4, 2)])
    assert square_zero_collapses(7, 1, 60) and not square_zero_collapses(5, 1, 60)


@pytest.mark.parametrize("fa,T", [(x4_weighted(), 8), (whitehead_filtration(exterior_algebra(3, 3)), 8),
                                  (FilteredAlgebra(truncated_polynomial(5, 2, 3), [0, 1, 3]), 8)])
def test_pages_match_persistence(fa, T):
    fc = filter(build(circle(5), fa, T))
    ss = pages(fc)
    dims, ranks, einf = persistence_pages(fc, ss.degrees, ss.last_page)
    for r in range(1, ss.last_page + 1):
        for n in ss.degrees:
            for w in ss.weights():
                assert ss.dim(r, n, w) == dims.get((r, n, w), 0), (r, n, w)
                assert ss.diff_rank(r, n, w) == ranks.get((r, n, w), 0), (r, n, w)
    for n in ss.degrees:
        assert ss.strongly_converges(n)
        for w in ss.weights():
            assert ss.einf.get((n, w), 0) == einf.get((n, w), 0)
            for r in range(1, ss.last_page):
                assert ss.page_turn_holds(r, n, w)


def test_e1_is_homology_of_gr():
    c = build(circle(5), x4_weighted(), 8)
    ss = pages(filter(c))
    hg = homology(gr_complex(c))
    for n in ss.degrees:
        assert ss.page_total(1, n) == hg.total(n)


def test_upper_bound_split_and_strict():
    split = upper_bound_check(circle(5), whitehead_filtration(truncated_polynomial(3, 2, 4)), 8)
    assert split.passed and not split.strict_degrees()
    weighted = upper_bound_check(circle(5), x4_weighted(), 10)
    assert weighted.passed and weighted.strict_degrees()


def test_weight_bound():
    fc = filter(build(circle(4), x4_weighted(), 8))
    with pytest.raises(UnboundedFiltration):
        pages(fc, weight_bound=1)
