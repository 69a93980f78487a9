"""Graded-commutative F_p-algebras with basis-adapted decreasing filtrations.

An algebra is a finite ordered basis with internal degrees and a full table of
structure constants ``table[i][j] = {k: c}`` meaning ``e_i * e_j = sum c e_k``.
A filtration is a weight per basis element; ``I_n`` is the span of the basis
elements of weight >= n.  Every constructor validates its invariants
exhaustively, so a live object is always a valid one.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iproduct
from typing import Mapping, Sequence

from .exactlin import PrimeField

Vector = dict  # basis index -> nonzero residue


class AlgebraValidationError(ValueError):
    """An invariant of an algebra, filtration or module is violated.

    ``invariant`` names the violated property.
    """

    def __init__(self, invariant: str, message: str):
        super().__init__(f"{invariant}: {message}")
        self.invariant = invariant


class DegreeMismatch(AlgebraValidationError):
    def __init__(self, message: str):
        super().__init__("degree additivity", message)


class OddDegreeTruncation(AlgebraValidationError):
    def __init__(self, message: str):
        super().__init__("graded commutativity", message)


class FieldMismatch(ValueError):
    pass


def koszul(d1: int, d2: int) -> int:
    """Sign (+1 or -1) for transposing homogeneous elements of degrees d1, d2."""
    return -1 if (d1 * d2) % 2 else 1


def _clean(vec: Mapping[int, int], p: int) -> Vector:
    return {k: c % p for k, c in vec.items() if c % p}


def _add_into(acc: dict, vec: Mapping[int, int], scale: int, p: int):
    for k, c in vec.items():
        v = (acc.get(k, 0) + scale * c) % p
        if v:
            acc[k] = v
        else:
            acc.pop(k, None)


class GradedAlgebra:
    """Finite-dimensional unital graded-commutative algebra over F_p.

    ``exact_through`` records a truncation: when not None, products whose
    true value lives above this internal degree were set to zero, so only
    internal degrees <= exact_through are faithful.
    """

    def __init__(self, p: int, names: Sequence[str], degrees: Sequence[int], unit: int,
                 table: Mapping[tuple[int, int], Mapping[int, int]] | Sequence[Sequence[Mapping[int, int]]],
                 exact_through: int | None = None, validate: bool = True):
        self.field = PrimeField(p)
        self.p = p
        self.names = tuple(names)
        self.degrees = tuple(int(d) for d in degrees)
        self.unit = unit
        self.exact_through = exact_through
        n = len(self.names)
        if len(self.degrees) != n:
            raise AlgebraValidationError("basis", "names and degrees differ in length")
        if len(set(self.names)) != n:
            raise AlgebraValidationError("basis", "basis names are not unique")
        if not 0 <= unit < n:
            raise AlgebraValidationError("unitality", f"unit index {unit} out of range")
        if isinstance(table, Mapping):
            rows = [[_clean(table.get((i, j), {}), p) for j in range(n)] for i in range(n)]
        else:
            rows = [[_clean(table[i][j], p) for j in range(n)] for i in range(n)]
        self.table = tuple(tuple(r) for r in rows)
        if validate:
            self._validate()

    @property
    def dim(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"no basis element named {name!r}") from None

    def mul(self, i: int, j: int) -> Vector:
        return self.table[i][j]

    def mul_vec(self, u: Mapping[int, int], v: Mapping[int, int]) -> Vector:
        acc: dict = {}
        for i, a in u.items():
            for j, b in v.items():
                _add_into(acc, self.table[i][j], a * b, self.p)
        return acc

    def _validate(self):
        p, n, deg = self.p, self.dim, self.degrees
        if deg[self.unit] != 0:
            raise AlgebraValidationError("unitality", "unit must have internal degree 0")
        if any(d < 0 for d in deg):
            raise AlgebraValidationError("basis", "internal degrees must be nonnegative")
        for i, j in iproduct(range(n), repeat=2):
            for k in self.table[i][j]:
                if deg[k] != deg[i] + deg[j]:
                    raise DegreeMismatch(
                        f"{self.names[i]}*{self.names[j]} has a component on {self.names[k]} "
                        f"of degree {deg[k]} != {deg[i]}+{deg[j]}")
        for i in range(n):
            e = {i: 1}
            if self.table[self.unit][i] != e or self.table[i][self.unit] != e:
                raise AlgebraValidationError("unitality", f"unit does not act as identity on {self.names[i]}")
        for i, j in iproduct(range(n), repeat=2):
            s = koszul(deg[i], deg[j])
            swapped = _clean({k: s * c for k, c in self.table[j][i].items()}, p)
            if self.table[i][j] != swapped:
                raise AlgebraValidationError(
                    "graded commutativity", f"{self.names[i]}*{self.names[j]} != ±{self.names[j]}*{self.names[i]}")
        for i, j, k in iproduct(range(n), repeat=3):
            left = self.mul_vec(self.table[i][j], {k: 1})
            right = self.mul_vec({i: 1}, self.table[j][k])
            if left != right:
                raise AlgebraValidationError(
                    "associativity", f"({self.names[i]}*{self.names[j]})*{self.names[k]} != "
                    f"{self.names[i]}*({self.names[j]}*{self.names[k]})")

    def structure_constants(self) -> dict[tuple[int, int], Vector]:
        return {(i, j): dict(self.table[i][j]) for i in range(self.dim) for j in range(self.dim) if self.table[i][j]}

    def dims_by_degree(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for d in self.degrees:
            out[d] = out.get(d, 0) + 1
        return dict(sorted(out.items()))

    def same_structure(self, other: "GradedAlgebra") -> bool:
        return (self.p == other.p and self.names == other.names and self.degrees == other.degrees
                and self.unit == other.unit and self.table == other.table)

    def __eq__(self, other):
        if not isinstance(other, GradedAlgebra):
            return NotImplemented
        return self.same_structure(other) and self.exact_through == other.exact_through

    def __hash__(self):
        return hash((self.p, self.names, self.degrees, self.unit))

    def __repr__(self):
        return f"GradedAlgebra(p={self.p}, basis={list(zip(self.names, self.degrees))})"


class FilteredAlgebra:
    """A GradedAlgebra with a weight per basis element (a multiplicative decreasing filtration)."""

    def __init__(self, algebra: GradedAlgebra, weights: Sequence[int] | None = None):
        self.algebra = algebra
        self.weights = tuple(int(w) for w in (weights if weights is not None else [0] * algebra.dim))
        self._validate()

    # convenience passthroughs; the Loday code treats both classes uniformly
    @property
    def p(self):
        return self.algebra.p

    @property
    def names(self):
        return self.algebra.names

    @property
    def degrees(self):
        return self.algebra.degrees

    @property
    def unit(self):
        return self.algebra.unit

    @property
    def dim(self):
        return self.algebra.dim

    @property
    def table(self):
        return self.algebra.table

    @property
    def exact_through(self):
        return self.algebra.exact_through

    def mul(self, i, j):
        return self.algebra.table[i][j]

    def _validate(self):
        a, w = self.algebra, self.weights
        if len(w) != a.dim:
            raise AlgebraValidationError("filtration", "one weight per basis element required")
        if any(x < 0 for x in w):
            raise AlgebraValidationError("filtration", "weights must be nonnegative")
        if w[a.unit] != 0:
            raise AlgebraValidationError("filtration", "the unit must have weight 0")
        for i, j in iproduct(range(a.dim), repeat=2):
            for k in a.table[i][j]:
                if w[k] < w[i] + w[j]:
                    raise AlgebraValidationError(
                        "multiplicativity",
                        f"{a.names[i]}*{a.names[j]} hits {a.names[k]} of weight {w[k]} < {w[i]}+{w[j]}")

    def filtration_piece(self, n: int) -> list[int]:
        """Basis indices spanning I_n."""
        return [i for i, x in enumerate(self.weights) if x >= n]

    def is_split(self) -> bool:
        """True when every structure constant adds weights exactly (gr(A) = A)."""
        a, w = self.algebra, self.weights
        return all(w[k] == w[i] + w[j]
                   for i in range(a.dim) for j in range(a.dim) for k in a.table[i][j])

    def __eq__(self, other):
        if not isinstance(other, FilteredAlgebra):
            return NotImplemented
        return self.algebra == other.algebra and self.weights == other.weights

    def __hash__(self):
        return hash((self.algebra, self.weights))

    def __repr__(self):
        return f"FilteredAlgebra({self.algebra!r}, weights={list(self.weights)})"


def as_filtered(a: GradedAlgebra | FilteredAlgebra) -> FilteredAlgebra:
    return a if isinstance(a, FilteredAlgebra) else FilteredAlgebra(a)


class FilteredBimodule:
    """A symmetric bimodule over a FilteredAlgebra, given by its left action.

    ``action[(a, m)] = {m': c}`` means ``e_a . f_m = sum c f_m'``; the right
    action is ``f_m . e_a = (-1)^{|m||a|} e_a . f_m``.
    """

    def __init__(self, base: FilteredAlgebra | GradedAlgebra, names: Sequence[str], degrees: Sequence[int],
                 weights: Sequence[int] | None, action: Mapping[tuple[int, int], Mapping[int, int]]):
        self.base = as_filtered(base)
        self.names = tuple(names)
        self.degrees = tuple(int(d) for d in degrees)
        self.weights = tuple(int(w) for w in (weights if weights is not None else [0] * len(self.names)))
        p = self.base.p
        n, na = len(self.names), self.base.dim
        self.action = tuple(tuple(_clean(action.get((a, m), {}), p) for m in range(n)) for a in range(na))
        self._validate()

    @property
    def p(self):
        return self.base.p

    @property
    def dim(self):
        return len(self.names)

    def act(self, a: int, m: int) -> Vector:
        return self.action[a][m]

    def right_act(self, m: int, a: int) -> Vector:
        s = koszul(self.degrees[m], self.base.degrees[a])
        return {k: (s * c) % self.p for k, c in self.action[a][m].items()}

    def act_vec(self, a: Mapping[int, int], m: Mapping[int, int]) -> Vector:
        acc: dict = {}
        for i, x in a.items():
            for j, y in m.items():
                _add_into(acc, self.action[i][j], x * y, self.p)
        return acc

    def _validate(self):
        A, p = self.base, self.p
        n = self.dim
        if len(self.degrees) != n or len(self.weights) != n:
            raise AlgebraValidationError("basis", "module names, degrees and weights differ in length")
        if len(set(self.names)) != n:
            raise AlgebraValidationError("basis", "module basis names are not unique")
        if any(w < 0 for w in self.weights):
            raise AlgebraValidationError("filtration", "module weights must be nonnegative")
        for a, m in iproduct(range(A.dim), range(n)):
            for k in self.action[a][m]:
                if self.degrees[k] != A.degrees[a] + self.degrees[m]:
                    raise DegreeMismatch(f"{A.names[a]}.{self.names[m]} has a component on {self.names[k]}")
                if self.weights[k] < A.weights[a] + self.weights[m]:
                    raise AlgebraValidationError(
                        "weight compatibility", f"{A.names[a]}.{self.names[m]} lowers weight")
        for m in range(n):
            if self.action[A.unit][m] != {m: 1}:
                raise AlgebraValidationError("unitality", f"unit does not fix {self.names[m]}")
        for a, b, m in iproduct(range(A.dim), range(A.dim), range(n)):
            left = self.act_vec(A.table[a][b], {m: 1})
            right = self.act_vec({a: 1}, self.action[b][m])
            if left != right:
                raise AlgebraValidationError(
                    "associativity", f"({A.names[a]}{A.names[b]}).{self.names[m]} != "
                    f"{A.names[a]}.({A.names[b]}.{self.names[m]})")

    def __eq__(self, other):
        if not isinstance(other, FilteredBimodule):
            return NotImplemented
        return (self.base == other.base and self.names == other.names and self.degrees == other.degrees
                and self.weights == other.weights and self.action == other.action)

    def __hash__(self):
        return hash((self.base, self.names, self.degrees, self.weights))

    def __repr__(self):
        return f"FilteredBimodule(basis={list(zip(self.names, self.degrees, self.weights))})"


# ---------------------------------------------------------------- constructors

def ground_field(p: int) -> GradedAlgebra:
    return GradedAlgebra(p, ["1"], [0], 0, {(0, 0): {0: 1}})


def exterior_algebra(p: int, deg_x: int, name: str = "x") -> GradedAlgebra:
    """E(x): basis {1, x} with x^2 = 0."""
    if deg_x < 1:
        raise ValueError("deg_x must be positive")
    return GradedAlgebra(p, ["1", name], [0, deg_x], 0,
                         {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 0): {1: 1}})


def _power_name(name: str, k: int) -> str:
    return "1" if k == 0 else name if k == 1 else f"{name}^{k}"


def _monomial_algebra(p, deg_x, top, name, exact_through=None) -> GradedAlgebra:
    names = [_power_name(name, k) for k in range(top + 1)]
    table = {(i, j): {i + j: 1} for i in range(top + 1) for j in range(top + 1) if i + j <= top}
    return GradedAlgebra(p, names, [k * deg_x for k in range(top + 1)], 0, table, exact_through=exact_through)


def truncated_polynomial(p: int, deg_x: int, n: int, name: str = "x") -> GradedAlgebra:
    """F_p[x]/(x^n)."""
    if n < 2:
        raise ValueError("truncation exponent must be at least 2")
    if deg_x < 0:
        raise ValueError("deg_x must be nonnegative")
    if deg_x % 2 and p != 2 and n > 2:
        raise OddDegreeTruncation(f"x of odd degree {deg_x} squares to zero at p={p}; x^{n} truncation impossible")
    return _monomial_algebra(p, deg_x, n - 1, name)


def polynomial_truncated_model(p: int, deg_x: int, max_internal: int, name: str = "x") -> GradedAlgebra:
    """F_p[x] cut off above ``max_internal``; products past the cutoff are zero and flagged."""
    if deg_x < 1:
        raise ValueError("deg_x must be positive")
    if deg_x % 2 and p != 2:
        raise OddDegreeTruncation("a polynomial generator of odd degree is not graded-commutative at odd p")
    if max_internal < 0:
        raise ValueError("max_internal must be nonnegative")
    return _monomial_algebra(p, deg_x, max_internal // deg_x, name, exact_through=max_internal)


def tensor_product(a: GradedAlgebra, b: GradedAlgebra) -> GradedAlgebra:
    """A (x) B with the Koszul sign (a1 b1)(a2 b2) = (-1)^{|b1||a2|} a1a2 b1b2."""
    a, b = _underlying(a), _underlying(b)
    if a.p != b.p:
        raise FieldMismatch(f"cannot tensor algebras over F_{a.p} and F_{b.p}")
    p = a.p
    pairs = [(i, j) for i in range(a.dim) for j in range(b.dim)]
    pos = {pr: k for k, pr in enumerate(pairs)}
    names = [f"{a.names[i]}*{b.names[j]}" for i, j in pairs]
    degrees = [a.degrees[i] + b.degrees[j] for i, j in pairs]
    table = {}
    for (i1, j1), (i2, j2) in iproduct(pairs, repeat=2):
        s = koszul(b.degrees[j1], a.degrees[i2])
        out: dict = {}
        for ka, ca in a.table[i1][i2].items():
            for kb, cb in b.table[j1][j2].items():
                _add_into(out, {pos[(ka, kb)]: 1}, s * ca * cb, p)
        if out:
            table[(pos[(i1, j1)], pos[(i2, j2)])] = out
    et = [e for e in (a.exact_through, b.exact_through) if e is not None]
    return GradedAlgebra(p, names, degrees, pos[(a.unit, b.unit)], table,
                         exact_through=min(et) if et else None)


def tensor_filtered(a: FilteredAlgebra, b: FilteredAlgebra) -> FilteredAlgebra:
    """Tensor product with weights adding."""
    t = tensor_product(a.algebra, b.algebra)
    weights = [wa + wb for wa in a.weights for wb in b.weights]
    return FilteredAlgebra(t, weights)


def _underlying(a) -> GradedAlgebra:
    return a.algebra if isinstance(a, FilteredAlgebra) else a


def whitehead_filtration(a: GradedAlgebra) -> FilteredAlgebra:
    """Weight := internal degree."""
    a = _underlying(a)
    return FilteredAlgebra(a, a.degrees)


def associated_graded(fa: FilteredAlgebra) -> FilteredAlgebra:
    """Keep only the structure constants that add weights exactly."""
    a, w = fa.algebra, fa.weights
    table = {}
    for i, j in iproduct(range(a.dim), repeat=2):
        kept = {k: c for k, c in a.table[i][j].items() if w[k] == w[i] + w[j]}
        if kept:
            table[(i, j)] = kept
    gr = GradedAlgebra(a.p, a.names, a.degrees, a.unit, table, exact_through=a.exact_through)
    return FilteredAlgebra(gr, w)


def associated_graded_bimodule(m: FilteredBimodule) -> FilteredBimodule:
    """gr of the module over gr of its base: action constants that add weights exactly."""
    base = m.base
    action = {}
    for a, j in iproduct(range(base.dim), range(m.dim)):
        kept = {k: c for k, c in m.action[a][j].items() if m.weights[k] == base.weights[a] + m.weights[j]}
        if kept:
            action[(a, j)] = kept
    return FilteredBimodule(associated_graded(base), m.names, m.degrees, m.weights, action)


def regular_bimodule(fa: FilteredAlgebra | GradedAlgebra) -> FilteredBimodule:
    """A as a bimodule over itself, same weights."""
    fa = as_filtered(fa)
    action = {(i, j): dict(fa.table[i][j]) for i in range(fa.dim) for j in range(fa.dim) if fa.table[i][j]}
    return FilteredBimodule(fa, fa.names, fa.degrees, fa.weights, action)


def shift_module(m: FilteredBimodule, n: int) -> FilteredBimodule:
    """Sigma^n M, with a.(s^n u) = (-1)^{n|a|} s^n (a.u)."""
    A = m.base
    action = {}
    for a, j in iproduct(range(A.dim), range(m.dim)):
        s = koszul(n, A.degrees[a])
        if m.action[a][j]:
            action[(a, j)] = {k: s * c for k, c in m.action[a][j].items()}
    names = [f"s{n}{x}" for x in m.names]
    return FilteredBimodule(A, names, [d + n for d in m.degrees], m.weights, action)


def submodule(m: FilteredBimodule, indices: Sequence[int]) -> FilteredBimodule:
    """The submodule spanned by a subset of basis elements (must be closed under the action)."""
    idx = sorted(set(indices))
    pos = {j: k for k, j in enumerate(idx)}
    action = {}
    for a in range(m.base.dim):
        for j in idx:
            out = m.action[a][j]
            if any(k not in pos for k in out):
                raise AlgebraValidationError("submodule", f"span is not closed under {m.base.names[a]}")
            if out:
                action[(a, pos[j])] = {pos[k]: c for k, c in out.items()}
    return FilteredBimodule(m.base, [m.names[j] for j in idx], [m.degrees[j] for j in idx],
                            [m.weights[j] for j in idx], action)


def quotient_module(m: FilteredBimodule, indices: Sequence[int]) -> FilteredBimodule:
    """M / span(indices); the span must be a submodule."""
    submodule(m, indices)
    drop = set(indices)
    keep = [j for j in range(m.dim) if j not in drop]
    pos = {j: k for k, j in enumerate(keep)}
    action = {}
    for a in range(m.base.dim):
        for j in keep:
            out = {pos[k]: c for k, c in m.action[a][j].items() if k in pos}
            if out:
                action[(a, pos[j])] = out
    return FilteredBimodule(m.base, [m.names[j] for j in keep], [m.degrees[j] for j in keep],
                            [m.weights[j] for j in keep], action)


def square_zero_extension(a: GradedAlgebra | FilteredAlgebra, m: FilteredBimodule) -> GradedAlgebra:
    """Trivial square-zero extension A |x M with M*M = 0."""
    A = _underlying(a)
    base = m.base.algebra
    if base.p != A.p:
        raise FieldMismatch("module and algebra live over different fields")
    if not base.same_structure(A):
        raise AlgebraValidationError("square-zero extension", "module is not a module over the given algebra")
    na, nm = A.dim, m.dim
    names = list(A.names) + [f"{x}'" if x in A.names else x for x in m.names]
    degrees = list(A.degrees) + list(m.degrees)
    table = {}
    for i, j in iproduct(range(na), repeat=2):
        if A.table[i][j]:
            table[(i, j)] = dict(A.table[i][j])
    for i, j in iproduct(range(na), range(nm)):
        left = m.act(i, j)
        for k in left:
            if m.degrees[k] != A.degrees[i] + m.degrees[j]:
                raise DegreeMismatch(f"action {A.names[i]}.{m.names[j]} is not degree additive")
        if left:
            table[(i, na + j)] = {na + k: c for k, c in left.items()}
            right = m.right_act(j, i)
            table[(na + j, i)] = {na + k: c for k, c in right.items()}
    return GradedAlgebra(A.p, names, degrees, A.unit, table, exact_through=A.exact_through)
