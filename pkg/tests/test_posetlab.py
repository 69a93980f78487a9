from itertools import product as iproduct
from math import comb

import pytest

from lodaymay.posetlab import (D_poset_truncated, E_n, E_poset, InvalidParams, J, K, adjunction_suite,
                               check_adjunction, l1_functoriality, leq, pushforward)


def test_e_poset_needs_k_at_least_n():
    with pytest.raises(InvalidParams):
        E_poset(2, 3, 2)
    assert len(E_poset(2, 2, 2)) == 6  # (0,2) (1,1) (2,0) (1,2) (2,1) (2,2)
    assert len(E_poset(1, 0, 0)) == 1


def test_e_n_contains_the_weight_n_layer():
    # the minimal elements of E_n are exactly the vectors of norm n
    s, n = 3, 3
    e = E_n(s, n)
    minimal = [z for z in e.elements if not any(leq(y, z) and y != z for y in e.elements)]
    assert sorted(minimal) == sorted(z for z in iproduct(range(n + 1), repeat=s) if sum(z) == n)
    assert len(minimal) == comb(n + s - 1, s - 1)


def test_d_membership():
    d = D_poset_truncated(2, 2, (1, 0), 4)
    assert (1, 2) in d and (3, 0) in d and (2, 1) in d
    assert (0, 3) not in d  # below x in the first slot
    assert (1, 1) not in d  # norm 2 < n + |x| = 3
    with pytest.raises(InvalidParams):
        D_poset_truncated(2, 2, (1,), 4)


def test_orders_are_partial_orders():
    assert E_n(2, 3).check_order()
    assert D_poset_truncated(2, 1, (1, 1), 4).check_order()


@pytest.mark.parametrize("s,n,x", [(1, 2, (1,)), (2, 2, (0, 1)), (3, 1, (1, 0, 1))])
def test_unit_is_identity_on_e(s, n, x):
    # K(J(z)) = z for z in E_n since every z(s) <= n
    for z in E_n(s, n).elements:
        assert K(n, x, J(x, z)) == z


def test_counit_is_below_identity():
    s, n, x = 2, 2, (1, 0)
    for y in D_poset_truncated(s, n, x, 6).elements:
        assert leq(J(x, K(n, x, y)), y)


def test_check_adjunction_single_case():
    rep = check_adjunction(2, 2, (0, 1), 6)
    assert rep and rep.checked > 0 and rep.counterexample is None


def test_check_adjunction_detects_a_wrong_right_adjoint(monkeypatch):
    from lodaymay import posetlab

    # forgetting the cap at n sends K outside E_n
    monkeypatch.setattr(posetlab, "K", lambda n, x, y: tuple(b - a for a, b in zip(x, y)))
    rep = posetlab.check_adjunction(2, 2, (0, 1), 6)
    assert not rep and rep.counterexample[0] == "K leaves E"


def test_adjunction_suite_all_pass():
    results = adjunction_suite(2, 2, 1)
    assert results and all(rep.passed for _, rep in results)


def test_l1_functoriality():
    f = [0, 0, 1, 2, 2]
    x = (1, 2, 0, 3, 1)
    assert pushforward(f, 3, x) == (3, 0, 4)
    assert l1_functoriality(f, 3, x)
    assert l1_functoriality([0, 0, 0], 2, (1, 1, 1))  # non-surjective maps too
    with pytest.raises(InvalidParams):
        l1_functoriality([0, 3], 3, (1, 1))
