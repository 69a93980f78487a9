"""Chain complexes of the Loday construction X (x) A, with optional coefficients.

Level h of the complex has one tensor factor of A per h-simplex of X (the
basepoint factor drawn from a bimodule M in the coefficient variant).  A face
map d_i sends the factor at simplex z to the factor at d_i(z); factors landing
on the same simplex are multiplied in stored simplex order after a Koszul-signed
regrouping.  The total differential is sum (-1)^i d_i.

The complex splits by internal degree t, and each (h, t) block is built
independently.  By default the normalized complex is used: the quotient by
tensors in the image of a degeneracy, i.e. tensors whose factors off the image
of some s_i are all units.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product as iproduct
from math import ceil
from typing import Iterator

import numpy as np

from .algebra import FilteredAlgebra, FilteredBimodule, GradedAlgebra, as_filtered, koszul, quotient_module, submodule
from .exactlin import SparseMatrix, Subspace, dense_kernel, matmul_mod, rank
from .simplicial import SimplicialFiniteSet


class CutoffTooSmall(ValueError):
    pass


class NotPointed(ValueError):
    pass


Assignment = tuple  # one basis index per simplex of the level


class _FaceData:
    """Precomputed grouping of factors for one face map d_i on level h."""

    __slots__ = ("groups", "inversions")

    def __init__(self, targets: tuple[int, ...], n_targets: int):
        groups: list[list[int]] = [[] for _ in range(n_targets)]
        for pos, y in enumerate(targets):
            groups[y].append(pos)
        self.groups = tuple(tuple(g) for g in groups)
        # pairs j < k whose relative order flips when grouping by target
        self.inversions = tuple((j, k) for k in range(len(targets)) for j in range(k) if targets[j] > targets[k])


class LodayComplex:
    """The (normalized) chain complex of X (x) A, or X (x) (A; M) when ``module`` is given."""

    def __init__(self, x: SimplicialFiniteSet, algebra: FilteredAlgebra, max_internal: int,
                 module: FilteredBimodule | None = None, normalized: bool = True):
        if x.max_level < 2:
            raise CutoffTooSmall(f"simplicial set cutoff {x.max_level} < 2: no degree-1 homology computable")
        if max_internal < 0:
            raise ValueError("max_internal must be nonnegative")
        if module is not None:
            if not x.pointed:
                raise NotPointed("coefficients need a pointed simplicial set")
            if module.base.algebra != algebra.algebra or module.base.weights != algebra.weights:
                raise ValueError("module is not a module over the given filtered algebra")
        self.x = x
        self.algebra = algebra
        self.module = module
        self.max_internal = max_internal
        self.normalized = normalized
        self.p = algebra.p
        self.max_level = x.max_level
        self._faces: dict[tuple[int, int], _FaceData] = {}
        self._basis: dict[int, dict[int, list[Assignment]]] = {}
        self._index: dict[tuple[int, int], dict[Assignment, int]] = {}
        self._diff: dict[tuple[int, int], SparseMatrix] = {}
        self._face_cache: dict[tuple[int, int, int], SparseMatrix] = {}
        self._product_cache: dict = {}
        for h in range(self.max_level + 1):
            self._enumerate(h)

    # ------------------------------------------------------------ bookkeeping

    def _is_base(self, h: int, pos: int) -> bool:
        return self.module is not None and self.x.base_indices[h] == pos

    def factor_degree(self, h: int, pos: int, idx: int) -> int:
        if self._is_base(h, pos):
            return self.module.degrees[idx]
        return self.algebra.degrees[idx]

    def factor_weight(self, h: int, pos: int, idx: int) -> int:
        if self._is_base(h, pos):
            return self.module.weights[idx]
        return self.algebra.weights[idx]

    def degree(self, h: int, a: Assignment) -> int:
        return sum(self.factor_degree(h, k, i) for k, i in enumerate(a))

    def weight(self, h: int, a: Assignment) -> int:
        return sum(self.factor_weight(h, k, i) for k, i in enumerate(a))

    def factor_names(self, h: int, a: Assignment) -> tuple[str, ...]:
        return tuple(self.module.names[i] if self._is_base(h, k) else self.algebra.names[i]
                     for k, i in enumerate(a))

    def _enumerate(self, h: int):
        x, A, M = self.x, self.algebra, self.module
        n = x.size(h)
        unit = A.unit
        choices, degs = [], []
        for pos in range(n):
            if self._is_base(h, pos):
                choices.append(list(range(M.dim)))
                degs.append(M.degrees)
            else:
                choices.append(list(range(A.dim)))
                degs.append(A.degrees)
        # degenerate iff for some i all positions off im(s_i) carry the unit
        checks: dict[int, list[frozenset[int]]] = {}
        if self.normalized:
            for img in x.degenerate_images(h):
                comp = frozenset(range(n)) - img
                if not comp:
                    continue  # every tensor is degenerate under this s_i
                checks.setdefault(max(comp), []).append(comp)
            if h > 0 and any(not (frozenset(range(n)) - img) for img in x.degenerate_images(h)):
                self._basis[h] = {}
                return
        budget = self.max_internal
        out: list[Assignment] = []
        prefix: list[int] = []

        def rec(k: int, remaining: int):
            if k == n:
                out.append(tuple(prefix))
                return
            for c in choices[k]:
                d = degs[k][c]
                if d > remaining:
                    continue
                prefix.append(c)
                ok = True
                for comp in checks.get(k, ()):
                    if all(prefix[j] == unit and not self._is_base(h, j) for j in comp):
                        ok = False
                        break
                if ok:
                    rec(k + 1, remaining - d)
                prefix.pop()

        rec(0, budget)
        blocks: dict[int, list[Assignment]] = {}
        for a in out:
            blocks.setdefault(self.degree(h, a), []).append(a)
        self._basis[h] = dict(sorted(blocks.items()))

    def basis(self, h: int, t: int) -> list[Assignment]:
        if h < 0 or h > self.max_level:
            return []
        return self._basis[h].get(t, [])

    def index(self, h: int, t: int) -> dict[Assignment, int]:
        key = (h, t)
        if key not in self._index:
            self._index[key] = {a: k for k, a in enumerate(self.basis(h, t))}
        return self._index[key]

    def internal_degrees(self, h: int) -> list[int]:
        return list(self._basis[h]) if 0 <= h <= self.max_level else []

    def bidegrees(self) -> Iterator[tuple[int, int]]:
        for h in range(self.max_level + 1):
            for t in self._basis[h]:
                yield h, t

    def size(self, h: int, t: int) -> int:
        return len(self.basis(h, t))

    # ------------------------------------------------------------ face maps

    def _face_data(self, h: int, i: int) -> _FaceData:
        key = (h, i)
        if key not in self._faces:
            self._faces[key] = _FaceData(self.x.faces[h][i], self.x.size(h - 1))
        return self._faces[key]

    def _group_product(self, h_target: int, y: int, factors: tuple[tuple[bool, int], ...]) -> dict:
        """Ordered product of the factors landing on simplex y; ``factors`` are (is_module, index)."""
        key = (self.module is not None and self.x.base_indices[h_target] == y, factors)
        cached = self._product_cache.get(key)
        if cached is not None:
            return cached
        A, M, p = self.algebra, self.module, self.p
        if not factors:
            res = {A.unit: 1}
        else:
            is_mod, idx = factors[0]
            res = {idx: 1}
            state_mod = is_mod
            for is_mod, idx in factors[1:]:
                acc: dict = {}
                for k, c in res.items():
                    if not state_mod and not is_mod:
                        prod = A.table[k][idx]
                    elif not state_mod and is_mod:
                        prod = M.action[k][idx]
                    elif state_mod and not is_mod:
                        prod = M.right_act(k, idx)
                    else:
                        raise ValueError("two module factors on one simplex")
                    for kk, cc in prod.items():
                        v = (acc.get(kk, 0) + c * cc) % p
                        if v:
                            acc[kk] = v
                        else:
                            acc.pop(kk, None)
                res = acc
                state_mod = state_mod or is_mod
                if not res:
                    break
        self._product_cache[key] = res
        return res

    def apply_face(self, h: int, i: int, a: Assignment) -> dict[Assignment, int]:
        """d_i of a basis tensor at level h, as a combination of level h-1 tensors (unnormalized)."""
        fd = self._face_data(h, i)
        p = self.p
        sign = 1
        for j, k in fd.inversions:
            if self.factor_degree(h, j, a[j]) % 2 and self.factor_degree(h, k, a[k]) % 2:
                sign = -sign
        parts = []
        for y, group in enumerate(fd.groups):
            factors = tuple((self._is_base(h, pos), a[pos]) for pos in group)
            vec = self._group_product(h - 1, y, factors)
            if not vec:
                return {}
            parts.append(vec)
        out: dict[Assignment, int] = {}
        for combo in iproduct(*(list(v.items()) for v in parts)):
            c = sign
            for _, cc in combo:
                c *= cc
            c %= p
            if c:
                key = tuple(k for k, _ in combo)
                out[key] = (out.get(key, 0) + c) % p
        return {k: v for k, v in out.items() if v}

    def face_matrix(self, h: int, i: int, t: int) -> SparseMatrix:
        """Matrix of d_i: C_{h,t} -> C_{h-1,t} in the complex's bases (degenerate targets dropped)."""
        key = (h, i, t)
        if key not in self._face_cache:
            src = self.basis(h, t)
            tgt = self.index(h - 1, t)
            data: dict[tuple[int, int], int] = {}
            for col, a in enumerate(src):
                for b, c in self.apply_face(h, i, a).items():
                    row = tgt.get(b)
                    if row is None:
                        if self.normalized:
                            continue
                        raise RuntimeError(f"face of a basis tensor left the basis: {b}")
                    data[(row, col)] = (data.get((row, col), 0) + c) % self.p
            self._face_cache[key] = SparseMatrix.from_dict(len(tgt), len(src), self.p, data)
        return self._face_cache[key]

    def differential(self, h: int, t: int) -> SparseMatrix:
        """d = sum (-1)^i d_i : C_{h,t} -> C_{h-1,t}."""
        key = (h, t)
        if key in self._diff:
            return self._diff[key]
        if h <= 0 or h > self.max_level:
            m = SparseMatrix.zeros(self.size(h - 1, t) if h > 0 else 0, self.size(h, t), self.p)
            self._diff[key] = m
            return m
        src = self.basis(h, t)
        tgt = self.index(h - 1, t)
        data: dict[tuple[int, int], int] = {}
        p = self.p
        for col, a in enumerate(src):
            for i in range(h + 1):
                s = -1 if i % 2 else 1
                for b, c in self.apply_face(h, i, a).items():
                    row = tgt.get(b)
                    if row is None:
                        if self.normalized:
                            continue
                        raise RuntimeError(f"face of a basis tensor left the basis: {b}")
                    data[(row, col)] = (data.get((row, col), 0) + s * c) % p
        m = SparseMatrix.from_dict(len(tgt), len(src), p, data)
        self._diff[key] = m
        return m

    # ------------------------------------------------------------ validity

    @property
    def h_valid(self) -> int:
        return self.max_level - 2

    @property
    def t_valid(self) -> int:
        et = self.algebra.exact_through
        return self.max_internal if et is None else min(self.max_internal, et)

    def min_positive_degree(self) -> int:
        """Smallest internal degree of a non-unit algebra basis element (0 if one sits in degree 0)."""
        A = self.algebra
        degs = [d for k, d in enumerate(A.degrees) if k != A.unit]
        return min(degs) if degs else 0

    def chain_degree_bounds(self, h: int) -> tuple[int, float]:
        """Bounds (lo, hi) on the internal degree of level-h chains of the untruncated complex.

        A normalized h-chain has at least ceil(h / dim X) non-unit factors;
        hi is finite only when the algebra is not a truncated model and the
        level is within the cutoff (or every degree is 0).
        """
        A, M = self.algebra, self.module
        mod_lo = min(M.degrees) if M is not None else 0
        mod_hi = max(M.degrees) if M is not None else 0
        dim_x = self.x.dimension()
        if not self.normalized or h == 0:
            lo = mod_lo
        elif dim_x == 0:
            return 1, 0  # no chains at all
        else:
            lo = ceil(h / dim_x) * self.min_positive_degree() + mod_lo
        top = max(A.degrees)
        if A.exact_through is not None:
            hi = float("inf")
        elif top == 0 and mod_hi == 0:
            hi = 0
        elif h <= self.max_level:
            hi = self.x.size(h) * top + mod_hi
        else:
            hi = float("inf")
        return lo, hi

    def valid_total(self, n: int) -> bool:
        """True when total degree n = h + t is computed exactly.

        Every bidegree (h, n - h) that can carry chains of the untruncated
        complex must satisfy h <= h_valid and t <= t_valid.
        """
        if n < 0:
            return False
        for h in range(n + 1):
            lo, hi = self.chain_degree_bounds(h)
            t = n - h
            if lo <= t <= hi and not (h <= self.h_valid and t <= self.t_valid):
                return False
        return True

    # ------------------------------------------------------------ total degree

    def total_basis(self, n: int) -> list[tuple[int, int, int]]:
        """Basis of total degree n as (h, t, index) triples, ordered by h then index."""
        out = []
        for h in range(self.max_level + 1):
            t = n - h
            for k in range(self.size(h, t)):
                out.append((h, t, k))
        return out

    def total_differential(self, n: int) -> SparseMatrix:
        """d : C_n -> C_{n-1} on total degrees."""
        src = self.total_basis(n)
        tgt = self.total_basis(n - 1)
        src_off, tgt_off = _offsets(src), _offsets(tgt)
        entries = []
        for h in range(1, self.max_level + 1):
            t = n - h
            if not self.size(h, t):
                continue
            for r, c, v in self.differential(h, t).entries:
                entries.append((tgt_off[(h - 1, t)] + r, src_off[(h, t)] + c, v))
        entries.sort()
        return SparseMatrix(len(tgt), len(src), self.p, tuple(entries))

    def total_weights(self, n: int) -> list[int]:
        return [self.weight(h, self.basis(h, t)[k]) for h, t, k in self.total_basis(n)]

    def total_degrees(self) -> list[int]:
        return sorted({h + t for h, t in self.bidegrees()})


def _offsets(triples) -> dict[tuple[int, int], int]:
    off: dict[tuple[int, int], int] = {}
    for pos, (h, t, k) in enumerate(triples):
        if k == 0:
            off[(h, t)] = pos
    return off


def build(x: SimplicialFiniteSet, a: FilteredAlgebra | GradedAlgebra, max_internal: int,
          normalized: bool = True) -> LodayComplex:
    return LodayComplex(x, as_filtered(a), max_internal, normalized=normalized)


def build_with_coefficients(y: SimplicialFiniteSet, a: FilteredAlgebra | GradedAlgebra, m: FilteredBimodule,
                            max_internal: int, normalized: bool = True) -> LodayComplex:
    return LodayComplex(y, as_filtered(a), max_internal, module=m, normalized=normalized)


@dataclass
class HomologyTable:
    """dim H_{h,t} for every computed bidegree, with the bounds inside which they are exact."""

    dims: dict[tuple[int, int], int]
    h_valid: int
    t_valid: int
    complex: LodayComplex = field(repr=False, compare=False)

    def get(self, h: int, t: int) -> int:
        return self.dims.get((h, t), 0)

    def valid(self, h: int, t: int) -> bool:
        return 0 <= h <= self.h_valid and 0 <= t <= self.t_valid

    def valid_dims(self) -> dict[tuple[int, int], int]:
        return {k: v for k, v in self.dims.items() if self.valid(*k)}

    def total(self, n: int) -> int:
        return sum(v for (h, t), v in self.dims.items() if h + t == n)

    def valid_totals(self) -> list[int]:
        return [n for n in range(self.h_valid + self.t_valid + 1) if self.complex.valid_total(n)]

    def by_total(self) -> dict[int, int]:
        """Total-degree dims for every valid total degree."""
        return {n: self.total(n) for n in self.valid_totals()}


def homology(c: LodayComplex) -> HomologyTable:
    """dim H_{h,t} = dim ker d_{h,t} - rank d_{h+1,t} over every built bidegree."""
    dims = {}
    ranks: dict[tuple[int, int], int] = {}

    def rk(h, t):
        if (h, t) not in ranks:
            ranks[(h, t)] = rank(c.differential(h, t)) if 0 < h <= c.max_level else 0
        return ranks[(h, t)]

    for h, t in c.bidegrees():
        dims[(h, t)] = c.size(h, t) - rk(h, t) - rk(h + 1, t)
    return HomologyTable(dims, c.h_valid, c.t_valid, c)


@dataclass
class LESNode:
    """Dims and induced-map ranks around H_h at internal degree t.

    ``conn_in`` is the rank of the connecting map H_{h+1}(Q) -> H_h(M1) and
    ``conn_out`` that of H_h(Q) -> H_{h-1}(M1).
    """

    h: int
    t: int
    dim_sub: int
    dim_full: int
    dim_quot: int
    incl: int
    proj: int
    conn_in: int
    conn_out: int

    def exact(self) -> bool:
        return (self.dim_sub - self.incl == self.conn_in
                and self.dim_full - self.proj == self.incl
                and self.dim_quot - self.conn_out == self.proj)


@dataclass
class LESReport:
    nodes: list[LESNode]
    short_exact: bool
    chain_maps: bool

    @property
    def passed(self) -> bool:
        return self.short_exact and self.chain_maps and all(n.exact() for n in self.nodes)

    def first_failure(self) -> LESNode | None:
        return next((n for n in self.nodes if not n.exact()), None)


def coefficient_les(y: SimplicialFiniteSet, a: FilteredAlgebra | GradedAlgebra, m: FilteredBimodule,
                    sub_indices, max_internal: int, max_h: int | None = None) -> LESReport:
    """Long exact sequence of Y (x) (A; -) for the submodule spanned by ``sub_indices`` of m.

    Builds the three complexes, checks that inclusion and projection are chain
    maps forming a levelwise short exact sequence, and computes the ranks of
    i_*, q_* and the connecting map on every valid (h, t) with h <= max_h.
    """
    a = as_filtered(a)
    idx = sorted(set(sub_indices))
    keep = [j for j in range(m.dim) if j not in set(idx)]
    c1 = build_with_coefficients(y, a, submodule(m, idx), max_internal)
    c0 = build_with_coefficients(y, a, m, max_internal)
    cq = build_with_coefficients(y, a, quotient_module(m, idx), max_internal)
    p = c0.p
    tab = homology(c0)
    top = tab.h_valid if max_h is None else min(max_h, tab.h_valid)

    def embed(c, relabel, h, t):
        # matrix of the levelwise map C(sub or quot) -> C(M) and its image rows
        base = c.x.base_indices[h]
        rows = c0.index(h, t)
        m_ = np.zeros((c0.size(h, t), c.size(h, t)), dtype=np.int64)
        for col, b in enumerate(c.basis(h, t)):
            img = b[:base] + (relabel[b[base]],) + b[base + 1:]
            m_[rows[img], col] = 1
        return m_

    def dense(c, h, t):
        if h <= 0 or h > c.max_level or not c.size(h, t) or not c.size(h - 1, t):
            return np.zeros((c.size(h - 1, t) if h > 0 else 0, c.size(h, t)), dtype=np.int64)
        return c.differential(h, t).to_dense()

    def cycles(c, h, t):
        return dense_kernel(dense(c, h, t), p) if h > 0 else Subspace.full(c.size(h, t), p)

    def boundaries(c, h, t):
        d = dense(c, h + 1, t)
        return Subspace.span(d.T, c.size(h, t), p)

    def induced_rank(z: Subspace, f, target_b: Subspace) -> int:
        return (z.image_under(f) + target_b).dim - target_b.dim

    short_exact = chain_maps = True
    maps = {}
    for h in range(top + 2):
        for t in c0.internal_degrees(h):
            i = embed(c1, idx, h, t)
            j = embed(cq, keep, h, t)
            both = np.hstack([i, j])
            if both.shape[0] != both.shape[1] or not (both.sum(axis=1) == 1).all():
                short_exact = False
            maps[(h, t)] = (i, j)
    for (h, t), (i, j) in maps.items():
        if h == 0 or (h - 1, t) not in maps:
            continue
        i_lo, j_lo = maps[(h - 1, t)]
        d0, d1, dq = dense(c0, h, t), dense(c1, h, t), dense(cq, h, t)
        # d0 i = i d1 and q d0 = dq q, where q = j^T is the coordinate projection
        if (matmul_mod(d0, i, p) != matmul_mod(i_lo, d1, p)).any():
            chain_maps = False
        if (matmul_mod(j_lo.T, d0, p) != matmul_mod(dq, j.T, p)).any():
            chain_maps = False

    def connecting(h, t) -> int:
        # H_h(Q) -> H_{h-1}(M1): lift a cycle along j, apply d, read off in M1
        if h == 0 or (h, t) not in maps or (h - 1, t) not in maps:
            return 0
        zq = cycles(cq, h, t)
        if zq.dim == 0:
            return 0
        _, j = maps[(h, t)]
        i_lo, _ = maps[(h - 1, t)]
        pushed = matmul_mod(dense(c0, h, t), j, p)
        return induced_rank(zq, matmul_mod(i_lo.T, pushed, p), boundaries(c1, h - 1, t))

    nodes = []
    for h in range(top + 1):
        for t in c0.internal_degrees(h):
            if not tab.valid(h, t):
                continue
            i, j = maps[(h, t)]
            h1, h0, hq = (homology_dim(c, h, t) for c in (c1, c0, cq))
            nodes.append(LESNode(h, t, h1, h0, hq,
                                 induced_rank(cycles(c1, h, t), i, boundaries(c0, h, t)),
                                 induced_rank(cycles(c0, h, t), j.T, boundaries(cq, h, t)),
                                 connecting(h + 1, t), connecting(h, t)))
    return LESReport(nodes, short_exact, chain_maps)


def homology_dim(c: LodayComplex, h: int, t: int) -> int:
    """dim H_{h,t} of a single block."""
    n = c.size(h, t)
    out = rank(c.differential(h, t)) if 0 < h <= c.max_level and n else 0
    inn = rank(c.differential(h + 1, t)) if h + 1 <= c.max_level and c.size(h + 1, t) else 0
    return n - out - inn
