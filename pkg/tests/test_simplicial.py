import json
from itertools import combinations_with_replacement
from math import comb, factorial

import pytest

from lodaymay.fileio import dump_simplicial, load_simplicial
from lodaymay.simplicial import (CutoffMismatch, IdentityViolation, SimplicialError, SimplicialFiniteSet, circle,
                                 from_json, point, product, torus)


def standard_simplex(k: int, L: int) -> SimplicialFiniteSet:
    """Delta[k] as monotone sequences in {0..k}, built independently of the library constructors."""
    levels = [list(combinations_with_replacement(range(k + 1), h + 1)) for h in range(L + 1)]
    pos = [{s: i for i, s in enumerate(lv)} for lv in levels]
    faces = [[]] + [[[pos[h - 1][s[:i] + s[i + 1:]] for s in levels[h]] for i in range(h + 1)]
                    for h in range(1, L + 1)]
    degs = [[[pos[h + 1][s[:i + 1] + s[i:]] for s in levels[h]] for i in range(h + 1)] for h in range(L)]
    return SimplicialFiniteSet([["".join(map(str, s)) for s in lv] for lv in levels], faces, degs)


def stirling2(n, k):
    if n == k:
        return 1
    if k == 0 or k > n:
        return 0
    return k * stirling2(n - 1, k) + stirling2(n - 1, k - 1)


def torus_nondegenerate_count(d: int, n: int) -> int:
    # choose the k circle factors carrying the 1-cell; each of their jumps lands on one of the
    # n steps, every step used at least once
    return sum(comb(d, k) * factorial(n) * stirling2(k, n) for k in range(d + 1)) if n else 1


def test_circle_levels():
    s = circle(3)
    assert s.counts() == (1, 2, 3, 4)
    assert [len(s.nondegenerate(h)) for h in range(4)] == [1, 1, 0, 0]
    x = s.levels[1].index(s.nondegenerate(1)[0])
    assert s.face(1, 0, x) == s.face(1, 1, x) == s.base_indices[0]
    assert s.dimension() == 1


def test_standard_simplex_passes_identities():
    d2 = standard_simplex(2, 4)
    assert [len(d2.nondegenerate(h)) for h in range(5)] == [3, 3, 1, 0, 0]


def test_products():
    t = product(circle(3), circle(3))
    assert t.counts() == (1, 4, 9, 16)
    assert [len(t.nondegenerate(h)) for h in range(4)] == [1, 3, 2, 0]
    c = circle(3)
    cp = product(c, point(3))
    assert cp.faces == c.faces and cp.degeneracies == c.degeneracies
    with pytest.raises(CutoffMismatch):
        product(circle(2), circle(3))


@pytest.mark.parametrize("d", [1, 2, 3])
def test_torus_nondegenerate_counts(d):
    t = torus(d, 4)
    assert [len(t.nondegenerate(h)) for h in range(5)] == [torus_nondegenerate_count(d, h) for h in range(5)]


def test_broken_face_table_is_named():
    doc = circle(3).to_json()
    # swap two entries of d_0 at level 2 so d0 d2 != d1 d0 somewhere
    f = doc["faces"][2][0]
    f[1], f[2] = f[2], f[1]
    with pytest.raises(IdentityViolation) as exc:
        from_json(doc)
    assert "d" in exc.value.identity


def test_malformed_documents():
    with pytest.raises(SimplicialError):
        from_json({"levels": [["*"]]})
    with pytest.raises(SimplicialError):
        from_json({"levels": [["*"], ["a"]], "faces": [[], [[0]]], "degeneracies": [[[0]]]})


def test_json_roundtrip(tmp_path):
    c = torus(2, 3)
    path = tmp_path / "t.json"
    dump_simplicial(c, path)
    assert load_simplicial(path) == c
    assert json.loads(dump_simplicial(point(2)))["levels"] == [["*"], ["*"], ["*"]]


def test_point_is_constant():
    pt = point(4)
    assert pt.counts() == (1,) * 5
    assert [len(pt.nondegenerate(h)) for h in range(5)] == [1, 0, 0, 0, 0]


def test_truncate():
    assert circle(5).truncate(3) == circle(3)
    with pytest.raises(CutoffMismatch):
        circle(2).truncate(3)
