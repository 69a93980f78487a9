"""Invariant checks shared by the ``selftest`` command and the test suite."""

from __future__ import annotations

import random

import numpy as np

from .algebra import AlgebraValidationError, GradedAlgebra
from .corpus import RandomInstance, exterior_whitehead, named_corpus, random_instance
from .exactlin import SparseMatrix
from .loday import LodayComplex, homology
from .mayfilt import check_fundamental
from .mayfilt import filter as may_filter
from .simplicial import circle
from .specseq import pages


def d_squared_zero(c: LodayComplex) -> bool:
    for h in range(2, c.max_level + 1):
        for t in c.internal_degrees(h):
            d1, d0 = c.differential(h, t), c.differential(h - 1, t)
            if d1.entries and d0.entries and not (d0 @ d1).is_zero():
                return False
    return True


def signs_vanish_mod2(c: LodayComplex) -> bool:
    """At p = 2 the differential is the plain sum of the face maps."""
    if c.p != 2:
        return True
    for h in range(1, c.max_level + 1):
        for t in c.internal_degrees(h):
            acc: dict = {}
            for i in range(h + 1):
                for r, col, v in c.face_matrix(h, i, t).entries:
                    acc[(r, col)] = (acc.get((r, col), 0) + v) % 2
            d = c.differential(h, t)
            if SparseMatrix.from_dict(d.rows, d.cols, 2, acc).entries != d.entries:
                return False
    return True


def normalized_matches_moore(inst: RandomInstance, c: LodayComplex) -> bool:
    m = LodayComplex(c.x, c.algebra, c.max_internal, normalized=False)
    hn, hm = homology(c), homology(m)
    return all(hm.get(h, t) == d for (h, t), d in hn.valid_dims().items()) and \
        all(hn.get(h, t) == d for (h, t), d in hm.valid_dims().items())


def rejects_broken_tables(a: GradedAlgebra, rng: random.Random) -> bool:
    """Changing e_i * e_j without touching e_j * e_i must be caught by validation."""
    pairs = [(i, j) for i in range(a.dim) for j in range(i + 1, a.dim) if a.unit not in (i, j)]
    rng.shuffle(pairs)
    for i, j in pairs:
        targets = [k for k in range(a.dim) if a.degrees[k] == a.degrees[i] + a.degrees[j]]
        if not targets:
            continue
        k = rng.choice(targets)
        one_sided = {(x, y): dict(a.table[x][y]) for x in range(a.dim) for y in range(a.dim)}
        one_sided[(i, j)][k] = (one_sided[(i, j)].get(k, 0) + 1) % a.p
        try:
            GradedAlgebra(a.p, a.names, a.degrees, a.unit, one_sided)
            return False
        except AlgebraValidationError:
            pass
        return True
    return True  # nothing to perturb


def instance_properties(inst: RandomInstance, rng: random.Random) -> dict[str, bool]:
    c = LodayComplex(circle(inst.max_level), inst.algebra, inst.max_internal)
    fc = may_filter(c)
    ss = pages(fc)
    page_turn = all(ss.page_turn_holds(r, n, w) for r in range(1, ss.last_page)
                    for n in ss.degrees for w in ss.weights())
    drdr = True
    for (r, n, w), m in ss.diffs.items():
        nxt = ss.diffs.get((r, n - 1, w + r))
        if m.size and nxt is not None and nxt.size and np.any((nxt @ m) % c.p):
            drdr = False
    return {
        "d^2=0": d_squared_zero(c),
        "filtration preserved": not fc.violations(),
        "page turn": page_turn,
        "d^r d^r=0": drdr,
        "strong convergence": all(ss.strongly_converges(n) for n in ss.degrees),
        "validation": rejects_broken_tables(inst.algebra.algebra, rng),
        "signs mod 2": signs_vanish_mod2(c),
        "normalized vs Moore": normalized_matches_moore(inst, c),
    }


def run_selftest(rng: random.Random, count: int = 20) -> list[tuple[str, bool]]:
    from .apps import (bound_generators, hh_exterior_expected, hh_truncated_square_expected,
                       vanishing_degrees, verify_hh_against_expected)
    from .algebra import truncated_polynomial, whitehead_filtration
    from .posetlab import adjunction_suite

    out: list[tuple[str, bool]] = []
    c = LodayComplex(circle(6), exterior_whitehead(), 12)
    out.append(("HH E(x) closed form", verify_hh_against_expected(homology(c), hh_exterior_expected(3, 3, 12)).passed))
    c = LodayComplex(circle(6), whitehead_filtration(truncated_polynomial(3, 2, 2)), 10)
    out.append(("HH x^2 closed form",
                verify_hh_against_expected(homology(c), hh_truncated_square_expected(3, 2, 14)).passed))
    for name, a in named_corpus().items():
        fc = may_filter(LodayComplex(circle(5), a, 6))
        out.append((f"fundamental theorem {name}", check_fundamental(fc).passed))
        ss = pages(fc)
        out.append((f"strong convergence {name}", all(ss.strongly_converges(n) for n in ss.degrees)))
    out.append(("poincare enumeration", all(list(bound_generators(p, n).series(40).coeffs)
                                            == bound_generators(p, n).enumerate(40)
                                            for p, n in [(3, 2), (5, 2), (3, 3), (7, 1)])))
    out.append(("vanishing certificates", all(vanishing_degrees(p, n).certified for p, n in [(3, 2), (5, 2), (5, 3)])))
    out.append(("poset adjunction", all(bool(r) for _, r in adjunction_suite(3, 3, 2))))
    agg: dict[str, bool] = {}
    for _ in range(count):
        inst = random_instance(rng)
        for k, v in instance_properties(inst, rng).items():
            agg[k] = agg.get(k, True) and v
    out += [(f"random {k}", v) for k, v in sorted(agg.items())]
    return out
