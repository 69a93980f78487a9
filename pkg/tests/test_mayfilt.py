from itertools import product as iproduct
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lodaymay.algebra import FilteredAlgebra, exterior_algebra, truncated_polynomial, whitehead_filtration
from lodaymay.corpus import coefficient_example, named_corpus
from lodaymay.loday import build, build_with_coefficients, homology
from lodaymay.mayfilt import FiltrationError, check_fundamental, filter, gr_complex, weight_component_count
from lodaymay.simplicial import circle, torus


@pytest.mark.parametrize("name", sorted(named_corpus()))
def test_fundamental_theorem_circle(name):
    fc = filter(build(circle(5), named_corpus()[name], 8))
    rep = check_fundamental(fc)
    assert rep.passed, rep.first_failure
    assert rep.results  # something was compared


def test_fundamental_theorem_coefficients():
    a, m = coefficient_example()
    rep = check_fundamental(filter(build_with_coefficients(circle(5), a, m, 8)))
    assert rep.passed, rep.first_failure


def test_fundamental_theorem_degree_zero():
    fa = FilteredAlgebra(truncated_polynomial(3, 0, 4), [0, 1, 3, 4])
    assert check_fundamental(filter(build(circle(5), fa, 0))).passed


def test_gr_complex_of_split_filtration_is_identical():
    c = build(circle(4), whitehead_filtration(exterior_algebra(3, 3)), 8)
    g = gr_complex(c)
    for h, t in c.bidegrees():
        assert c.basis(h, t) == g.basis(h, t)
        assert c.differential(h, t) == g.differential(h, t)


def test_weighted_gr_changes_homology():
    # gr of (0,1,3,4)-weighted x^4 has xbar^2 = 0, so its HH is larger somewhere
    fa = FilteredAlgebra(truncated_polynomial(3, 2, 4), [0, 1, 3, 4])
    c = build(circle(5), fa, 10)
    h, hg = homology(c).by_total(), homology(gr_complex(c)).by_total()
    assert all(h[n] <= hg[n] for n in h)
    assert any(h[n] < hg[n] for n in h)


def test_filter_rejects_weight_lowering():
    fa = whitehead_filtration(truncated_polynomial(3, 2, 4))
    c = build(circle(3), fa, 8)
    fc = filter(c)
    assert fc.violations() == []
    # corrupt the cached weights: claim the target has weight 0 where d hits it
    for h, t in c.bidegrees():
        if h and c.differential(h, t).entries:
            fc._weights[(h - 1, t)] = [0] * c.size(h - 1, t)
            fc._weights[(h, t)] = [5] * c.size(h, t)
            break
    assert fc.violations()
    from lodaymay import mayfilt

    class Broken(mayfilt.FilteredChainComplex):
        def weights(self, h, t):
            return fc.weights(h, t)

    orig = mayfilt.FilteredChainComplex
    mayfilt.FilteredChainComplex = Broken
    try:
        with pytest.raises(FiltrationError):
            filter(c)
    finally:
        mayfilt.FilteredChainComplex = orig


def test_weight_component_small_values():
    assert weight_component_count(1, 5) == 1
    assert weight_component_count(2, 2) == 3
    assert weight_component_count(3, 2) == 6
    assert weight_component_count(0, 0) == 1 and weight_component_count(0, 3) == 0
    with pytest.raises(ValueError):
        weight_component_count(-1, 2)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 5), st.integers(0, 8))
def test_weight_component_matches_enumeration(s, n):
    brute = sum(1 for x in iproduct(range(n + 1), repeat=s) if sum(x) == n)
    assert weight_component_count(s, n) == brute == comb(n + s - 1, s - 1)


def test_weight_component_large_paths_agree():
    # medium inputs go through the prefix-sum path, larger ones through the closed form
    assert weight_component_count(12, 30) == comb(41, 11)
    assert weight_component_count(3000, 400) == comb(3399, 2999)
