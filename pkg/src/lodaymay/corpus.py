"""Named example algebras and a seeded generator of random filtered algebras.

The named corpus drives ``selftest`` and the theorem-level tests; the random
instances drive the property suites.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import product as iproduct

from .algebra import (FilteredAlgebra, FilteredBimodule, GradedAlgebra, exterior_algebra, regular_bimodule,
                      tensor_product, truncated_polynomial, whitehead_filtration)
from .simplicial import SimplicialFiniteSet, circle, point, torus


def exterior_whitehead(p: int = 3, deg_x: int = 3) -> FilteredAlgebra:
    return whitehead_filtration(exterior_algebra(p, deg_x))


def x4_whitehead(p: int = 3, deg_x: int = 2) -> FilteredAlgebra:
    return whitehead_filtration(truncated_polynomial(p, deg_x, 4))


def x4_weighted(p: int = 3, deg_x: int = 2) -> FilteredAlgebra:
    """F_p[x]/x^4 with weights (0, 1, 3, 4): x * x^2 drops in gr, so gr has xbar^2 = 0."""
    return FilteredAlgebra(truncated_polynomial(p, deg_x, 4), [0, 1, 3, 4])


def coefficient_example(p: int = 3, deg_x: int = 2) -> tuple[FilteredAlgebra, FilteredBimodule]:
    """The weighted x^4 algebra acting on itself."""
    a = x4_weighted(p, deg_x)
    return a, regular_bimodule(a)


def named_corpus() -> dict[str, FilteredAlgebra]:
    return {
        "exterior-whitehead": exterior_whitehead(),
        "x4-whitehead": x4_whitehead(),
        "x4-weighted": x4_weighted(),
    }


def space(name: str, max_level: int) -> SimplicialFiniteSet:
    """'circle', 'point' or 'torus:d'; anything else is read as a JSON file path."""
    if name == "circle":
        return circle(max_level)
    if name == "point":
        return point(max_level)
    if name.startswith("torus:"):
        try:
            d = int(name.split(":", 1)[1])
        except ValueError:
            raise ValueError(f"bad torus dimension in {name!r}") from None
        return torus(d, max_level)
    from .fileio import load_simplicial

    x = load_simplicial(name)
    if x.max_level > max_level:
        x = x.truncate(max_level)
    return x


# ---------------------------------------------------------------- random instances

@dataclass
class RandomInstance:
    algebra: FilteredAlgebra
    description: str
    max_level: int
    max_internal: int


def _random_monomial_algebra(rng: random.Random, p: int, max_dim: int) -> GradedAlgebra:
    """Tensor product of exterior and truncated polynomial pieces, dim <= max_dim."""
    a = None
    n_gens = 0
    while True:
        dim = 1 if a is None else a.dim
        kinds = []
        if dim * 2 <= max_dim:
            kinds.append("ext")
        if dim * 3 <= max_dim:
            kinds.append("poly")
        if not kinds or (a is not None and rng.random() < 0.4):
            break
        name = f"x{n_gens}"
        n_gens += 1
        if rng.choice(kinds) == "ext":
            piece = exterior_algebra(p, rng.randint(1, 3), name)
        else:
            top = 3 if dim * 4 <= max_dim and rng.random() < 0.5 else 2
            d = rng.choice([2, 4]) if p != 2 else rng.randint(1, 2)
            piece = truncated_polynomial(p, d, top + 1, name)
        a = piece if a is None else tensor_product(a, piece)
    return a


def _weights_for(a: GradedAlgebra, rng: random.Random) -> list[int]:
    """sum_i e_i w_i + c * max(k - 1, 0) over the monomial exponents, parsed from the names."""
    c = rng.randint(0, 2)
    gen_w: dict[str, int] = {}
    out = []
    for name in a.names:
        expo: dict[str, int] = {}
        for part in name.split("*"):
            if part == "1":
                continue
            base, _, e = part.partition("^")
            expo[base] = expo.get(base, 0) + (int(e) if e else 1)
        for g in expo:
            gen_w.setdefault(g, rng.randint(0, 2))
        k = sum(expo.values())
        out.append(sum(gen_w[g] * e for g, e in expo.items()) + c * max(k - 1, 0))
    return out


def _change_basis(fa: FilteredAlgebra, rng: random.Random) -> FilteredAlgebra:
    """b'_i = b_i + sum c_ij b_j over j > i of equal degree and weight >= w_i.

    The new basis spans the same filtration pieces, so it is still adapted,
    with each element keeping the weight of its leading term.
    """
    a, w, p = fa.algebra, fa.weights, fa.p
    n = a.dim
    T = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for i, j in iproduct(range(n), repeat=2):
        if j > i and i != a.unit and j != a.unit and a.degrees[i] == a.degrees[j] and w[j] >= w[i]:
            T[i][j] = rng.randrange(p)
    # T is unitriangular; invert by back substitution
    Tinv = [[0] * n for _ in range(n)]
    for col in range(n):
        for i in range(n - 1, -1, -1):
            s = 1 if i == col else 0
            for j in range(i + 1, n):
                s -= T[i][j] * Tinv[j][col]
            Tinv[i][col] = s % p
    table = {}
    for i, j in iproduct(range(n), repeat=2):
        acc = [0] * n
        for a_, ca in enumerate(T[i]):
            if not ca:
                continue
            for b_, cb in enumerate(T[j]):
                if not cb:
                    continue
                for k, c in a.table[a_][b_].items():
                    acc[k] += ca * cb * c
        # coordinates in the new basis: v = u T, so u = v T^-1
        new = {}
        for k2 in range(n):
            s = sum(acc[k] * Tinv[k][k2] for k in range(n)) % p
            if s:
                new[k2] = s
        if new:
            table[(i, j)] = new
    names = [nm if all(T[i][j] == 0 for j in range(n) if j != i) else f"{nm}'" for i, nm in enumerate(a.names)]
    b = GradedAlgebra(p, names, a.degrees, a.unit, table)
    return FilteredAlgebra(b, w)


def random_instance(rng: random.Random, primes=(2, 3, 5), max_dim: int = 6,
                    max_level: int = 4) -> RandomInstance:
    p = rng.choice(primes)
    a = _random_monomial_algebra(rng, p, max_dim)
    fa = FilteredAlgebra(a, _weights_for(a, rng))
    if rng.random() < 0.5:
        fa = _change_basis(fa, rng)
    level = rng.randint(2, max_level)
    top = max(fa.degrees)
    mi = rng.randint(top, 2 * top + 1)
    desc = f"p={p} basis={list(zip(fa.names, fa.degrees, fa.weights))} L={level} T={mi}"
    return RandomInstance(fa, desc, level, mi)
