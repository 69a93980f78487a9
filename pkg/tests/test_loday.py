import random

import pytest

from lodaymay.algebra import (FilteredAlgebra, exterior_algebra, ground_field, polynomial_truncated_model,
                              regular_bimodule, tensor_product, truncated_polynomial, whitehead_filtration)
from lodaymay.apps import hh_exterior_expected, hh_truncated_square_expected, polynomial_hh_series
from lodaymay.corpus import random_instance
from lodaymay.algebra import AlgebraValidationError, as_filtered
from lodaymay.loday import (CutoffTooSmall, LodayComplex, NotPointed, build, build_with_coefficients, coefficient_les,
                            homology)
from lodaymay.selfcheck import d_squared_zero
from lodaymay.simplicial import SimplicialFiniteSet, circle, point, torus


def cyclic_bar_differential(a, h, t, basis_src, index_tgt):
    """The textbook cyclic bar differential on A^(h+1), written out directly."""
    p = a.p
    deg = a.degrees
    out = {}
    for col, x in enumerate(basis_src):
        for i in range(h + 1):
            if i < h:
                prod = a.table[x[i]][x[i + 1]]
                terms = [(x[:i] + (k,) + x[i + 2:], c) for k, c in prod.items()]
                sign = 1
            else:
                prod = a.table[x[h]][x[0]]
                terms = [((k,) + x[1:h], c) for k, c in prod.items()]
                sign = -1 if (deg[x[h]] * sum(deg[v] for v in x[:h])) % 2 else 1
            for y, c in terms:
                r = index_tgt[y]
                out[(r, col)] = (out.get((r, col), 0) + (-1) ** i * sign * c) % p
    return {k: v for k, v in out.items() if v}


@pytest.mark.parametrize("seed", range(12))
def test_moore_circle_matches_cyclic_bar(seed):
    inst = random_instance(random.Random(seed), max_dim=4, max_level=3)
    c = LodayComplex(circle(3), inst.algebra, inst.max_internal, normalized=False)
    for h in range(1, 4):
        for t in c.internal_degrees(h):
            want = cyclic_bar_differential(inst.algebra, h, t, c.basis(h, t), c.index(h - 1, t))
            assert c.differential(h, t).as_dict() == want, inst.description


def test_exterior_hh_divided_power_pattern():
    c = build(circle(8), whitehead_filtration(exterior_algebra(3, 3)), 16)
    tab = homology(c)
    valid = tab.valid_totals()
    assert valid[:17] == list(range(17))
    want = hh_exterior_expected(3, 3, max(valid))
    assert [tab.total(n) for n in valid] == [want[n] for n in valid]


def test_truncated_square_bidegrees():
    c = build(circle(8), truncated_polynomial(3, 2, 2), 14)
    tab = homology(c)
    expected = hh_truncated_square_expected(3, 2, 20)
    for h in range(7):
        for t in range(15):
            assert tab.get(h, t) == expected.get((h, t), 0), (h, t)


def test_polynomial_model_series():
    c = build(circle(7), polynomial_truncated_model(3, 4, 16), 16)
    by_total = homology(c).by_total()
    series = polynomial_hh_series(2, 14)
    assert all(by_total[n] == series[n] for n in range(15))


def test_point_gives_the_algebra():
    a = truncated_polynomial(5, 2, 4)
    tab = homology(build(point(4), a, 10))
    assert {k: v for k, v in tab.dims.items() if v} == {(0, 0): 1, (0, 2): 1, (0, 4): 1, (0, 6): 1}


def test_ground_field_is_trivial():
    tab = homology(build(torus(2, 4), ground_field(3), 5))
    assert {k: v for k, v in tab.dims.items() if v} == {(0, 0): 1}


def test_graded_commutative_level_one_vanishes():
    # on the circle, d(a0 (x) a1) = a0 a1 - (-1)^{|a0||a1|} a1 a0 = 0
    a = tensor_product(exterior_algebra(3, 1, "x"), exterior_algebra(3, 3, "y"))
    c = build(circle(3), a, 8)
    for t in c.internal_degrees(1):
        assert c.differential(1, t).is_zero()


def test_torus_d_squared_and_moore_agree():
    a = whitehead_filtration(exterior_algebra(3, 3))
    c = build(torus(2, 4), a, 6)
    m = build(torus(2, 4), a, 6, normalized=False)
    assert d_squared_zero(c) and d_squared_zero(m)
    hc, hm = homology(c), homology(m)
    assert hc.valid_dims() == {k: v for k, v in hm.valid_dims().items() if k in hc.valid_dims()}


def test_regular_coefficients_match_plain():
    a = FilteredAlgebra(truncated_polynomial(3, 2, 4), [0, 1, 3, 4])
    plain = homology(build(circle(5), a, 8)).valid_dims()
    coeff = homology(build_with_coefficients(circle(5), a, regular_bimodule(a), 8)).valid_dims()
    assert plain == coeff


def test_cutoff_and_pointedness_errors():
    with pytest.raises(CutoffTooSmall):
        build(circle(1), exterior_algebra(3, 1), 3)
    unpointed = SimplicialFiniteSet(circle(3).levels, circle(3).faces, circle(3).degeneracies)
    a = whitehead_filtration(exterior_algebra(3, 1))
    with pytest.raises(NotPointed):
        build_with_coefficients(unpointed, a, regular_bimodule(a), 3)
    with pytest.raises(ValueError):
        build(circle(3), a, -1)


def test_validity_bounds_reported():
    c = build(circle(6), polynomial_truncated_model(3, 4, 12), 20)
    tab = homology(c)
    assert tab.h_valid == 4 and tab.t_valid == 12
    assert max(tab.valid_totals()) <= 16


def test_koszul_signs_on_two_odd_generators():
    # Moore circle, level 1 -> 0 in internal degree 2, columns x(x)y and y(x)x:
    # d0(a0 (x) a1) = a0 a1 and d1(a0 (x) a1) = (-1)^{|a0||a1|} a1 a0, with yx = -xy
    a = tensor_product(exterior_algebra(3, 1, "x"), exterior_algebra(3, 1, "y"))
    c = LodayComplex(circle(2), as_filtered(a), 2, normalized=False)
    cols = [c.index(1, 2)[(a.index(u), a.index(v))] for u, v in [("x*1", "1*y"), ("1*y", "x*1")]]
    for i in (0, 1):
        block = c.face_matrix(1, i, 2).to_dense()[:, cols]
        assert block.tolist() == [[1, 2]]


def test_coefficient_les_exterior():
    fa = whitehead_filtration(exterior_algebra(3, 3))
    rep = coefficient_les(circle(8), fa, regular_bimodule(fa), [1], 16, max_h=5)
    assert rep.short_exact and rep.chain_maps and rep.passed
    assert {n.h for n in rep.nodes} == set(range(6))
    for n in rep.nodes:
        assert n.dim_full <= n.dim_sub + n.dim_quot


@pytest.mark.parametrize("sub", [[1, 2, 3], [3]])
def test_coefficient_les_with_nonzero_connecting_map(sub):
    fa = whitehead_filtration(truncated_polynomial(3, 2, 4))
    rep = coefficient_les(circle(7), fa, regular_bimodule(fa), sub, 12, max_h=5)
    assert rep.passed and rep.first_failure() is None
    assert any(n.conn_in for n in rep.nodes)


def test_coefficient_les_needs_a_submodule():
    fa = whitehead_filtration(truncated_polynomial(3, 2, 4))
    with pytest.raises(AlgebraValidationError):
        coefficient_les(circle(4), fa, regular_bimodule(fa), [1], 8)
