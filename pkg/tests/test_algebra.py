import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lodaymay.algebra import (AlgebraValidationError, DegreeMismatch, FieldMismatch, FilteredAlgebra,
                              FilteredBimodule, GradedAlgebra, OddDegreeTruncation, associated_graded,
                              associated_graded_bimodule, exterior_algebra, ground_field, polynomial_truncated_model,
                              quotient_module, regular_bimodule, shift_module, square_zero_extension, submodule,
                              tensor_filtered, tensor_product, truncated_polynomial, whitehead_filtration)
from lodaymay.exactlin import NotPrime
from lodaymay.fileio import algebra_from_json, algebra_to_json, load_algebra


def test_exterior_structure():
    a = exterior_algebra(3, 3)
    assert a.names == ("1", "x") and a.degrees == (0, 3)
    assert a.mul(1, 1) == {}
    assert a.mul(0, 1) == {1: 1}


def test_truncated_polynomial_products():
    a = truncated_polynomial(5, 2, 4)
    assert a.dim == 4
    assert a.mul(1, 2) == {3: 1}
    assert a.mul(2, 2) == {}
    assert a.dims_by_degree() == {0: 1, 2: 1, 4: 1, 6: 1}


def test_odd_truncation_rejected():
    with pytest.raises(OddDegreeTruncation):
        truncated_polynomial(3, 1, 3)
    # at p = 2 signs vanish, so odd generators may have nonzero squares
    assert truncated_polynomial(2, 1, 3).dim == 3
    with pytest.raises(OddDegreeTruncation):
        polynomial_truncated_model(3, 3, 9)


def test_validation_names_the_invariant():
    with pytest.raises(DegreeMismatch):
        GradedAlgebra(3, ["1", "x"], [0, 2], 0, {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 0): {1: 1}, (1, 1): {1: 1}})
    with pytest.raises(AlgebraValidationError) as exc:
        GradedAlgebra(3, ["1", "x"], [0, 2], 0, {(0, 0): {0: 1}, (0, 1): {1: 1}})
    assert exc.value.invariant == "unitality"
    # x y = z but y x = z with x, y odd: needs y x = -z
    tab = {(0, k): {k: 1} for k in range(4)} | {(k, 0): {k: 1} for k in range(4)}
    tab[(1, 2)] = {3: 1}
    tab[(2, 1)] = {3: 1}
    with pytest.raises(AlgebraValidationError) as exc:
        GradedAlgebra(3, ["1", "x", "y", "z"], [0, 1, 1, 2], 0, tab)
    assert exc.value.invariant == "graded commutativity"
    tab[(2, 1)] = {3: 2}
    assert GradedAlgebra(3, ["1", "x", "y", "z"], [0, 1, 1, 2], 0, tab).dim == 4


def test_associativity_violation():
    # degree-0 basis {1, e, f}: e*e = f, f*f = e, e*f = 0 is commutative but not associative
    tab = {(0, k): {k: 1} for k in range(3)} | {(k, 0): {k: 1} for k in range(3)}
    tab[(1, 1)] = {2: 1}
    tab[(2, 2)] = {1: 1}
    with pytest.raises(AlgebraValidationError) as exc:
        GradedAlgebra(3, ["1", "e", "f"], [0, 0, 0], 0, tab)
    assert exc.value.invariant == "associativity"


def test_bad_modulus():
    with pytest.raises(NotPrime):
        ground_field(6)


def test_tensor_product_koszul_sign():
    t = tensor_product(exterior_algebra(3, 1, "x"), exterior_algebra(3, 1, "y"))
    x, y = t.index("x*1"), t.index("1*y")
    xy = t.index("x*y")
    assert t.mul(x, y) == {xy: 1}
    assert t.mul(y, x) == {xy: 2}
    with pytest.raises(FieldMismatch):
        tensor_product(exterior_algebra(3, 1), exterior_algebra(5, 1))


def test_weighted_x4_associated_graded():
    fa = FilteredAlgebra(truncated_polynomial(3, 2, 4), [0, 1, 3, 4])
    g = associated_graded(fa)
    assert g.mul(1, 1) == {}  # x*x = x^2 has weight 3 > 1 + 1
    assert g.mul(1, 2) == {3: 1}  # x * x^2 = x^3, weight 4 = 1 + 3
    assert not fa.is_split() and g.is_split()


def test_whitehead_is_split():
    fa = whitehead_filtration(truncated_polynomial(3, 2, 4))
    assert fa.is_split()
    assert associated_graded(fa) == fa


def test_multiplicativity_enforced():
    with pytest.raises(AlgebraValidationError) as exc:
        FilteredAlgebra(truncated_polynomial(3, 2, 3), [0, 2, 3])
    assert exc.value.invariant == "multiplicativity"
    with pytest.raises(AlgebraValidationError):
        FilteredAlgebra(exterior_algebra(3, 1), [1, 0])


def test_tensor_filtered_weights_add():
    t = tensor_filtered(whitehead_filtration(exterior_algebra(3, 1)), FilteredAlgebra(exterior_algebra(3, 3), [0, 2]))
    assert t.weights == (0, 2, 1, 3)


def test_modules():
    fa = whitehead_filtration(exterior_algebra(3, 3))
    m = regular_bimodule(fa)
    ideal = submodule(m, [1])
    assert ideal.dim == 1 and ideal.act(1, 0) == {}
    q = quotient_module(m, [1])
    assert q.names == ("1",) and q.act(1, 0) == {}
    with pytest.raises(AlgebraValidationError):
        submodule(m, [0])
    s = shift_module(m, 1)
    assert s.degrees == (1, 4)
    assert s.act(1, 0) == {1: 2}  # a.(s u) = (-1)^{|a|} s (a.u), |a| = 3
    assert associated_graded_bimodule(m) == m


def test_module_weight_compatibility():
    fa = whitehead_filtration(exterior_algebra(3, 3))
    with pytest.raises(AlgebraValidationError):
        FilteredBimodule(fa, ["u", "v"], [0, 3], [0, 1], {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 0): {1: 1}})


def test_square_zero_extension():
    a = exterior_algebra(3, 2)
    m = shift_module(regular_bimodule(a), 5)
    e = square_zero_extension(a, m)
    assert e.dim == 4
    mi = e.dim - 2
    assert e.mul(mi, mi) == {}
    assert e.mul(1, mi) == {mi + 1: 1}


@settings(max_examples=25, deadline=None)
@given(st.sampled_from([2, 3, 5]), st.integers(1, 4), st.integers(2, 5))
def test_truncated_roundtrip_through_json(p, d, n):
    if d % 2 and p != 2 and n > 2:
        return
    fa = whitehead_filtration(truncated_polynomial(p, d, n))
    back = algebra_from_json(json.loads(json.dumps(algebra_to_json(fa))))
    assert back == fa


def test_json_fills_commutativity_and_rejects_bad_files(tmp_path):
    doc = {"p": 3, "unit": "1",
           "basis": [{"name": "1", "degree": 0}, {"name": "x", "degree": 1}, {"name": "y", "degree": 1},
                     {"name": "xy", "degree": 2}],
           "products": [{"left": "1", "right": n, "result": [{"basis": n, "coeff": 1}]} for n in ["1", "x", "y", "xy"]]
           + [{"left": "x", "right": "y", "result": [{"basis": "xy", "coeff": 1}]}]}
    fa = algebra_from_json(doc)
    assert fa.algebra.mul(2, 1) == {3: 2}
    assert fa.weights == (0, 0, 0, 0)
    bad = dict(doc, products=doc["products"] + [{"left": "y", "right": "x", "result": []}])
    with pytest.raises(AlgebraValidationError):
        algebra_from_json(bad)
    with pytest.raises(AlgebraValidationError):
        algebra_from_json(dict(doc, unit="z"))
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    with pytest.raises(AlgebraValidationError):
        load_algebra(path)
