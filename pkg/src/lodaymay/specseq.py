"""Spectral sequence of a filtered chain complex with a basis-adapted filtration.

Indexing: n is total degree (homological + internal), w the filtration
weight, and d^r : E^r_{n,w} -> E^r_{n-1,w+r}.  Pages are computed from the
subquotients

    Z^r_{n,w} = {c in F_w C_n : dc in F_{w+r}}
    E^r_{n,w} = Z^r_{n,w} / (Z^{r-1}_{n,w+1} + d Z^{r-1}_{n+1,w-r+1})

with bases given by canonical lifts.  ``persistence_pages`` computes the same
dimensions independently from the pairing produced by one column reduction.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exactlin import SparseMatrix, Subspace, dense_kernel, dense_rank, matmul_mod, rank
from .mayfilt import FilteredChainComplex


class UnboundedFiltration(ValueError):
    pass


class ExplicitComplex:
    """A finite chain complex given degreewise: basis weights and dense differentials.

    ``diffs[n]`` is the matrix of d : C_n -> C_{n-1}.  Exposes the
    total-degree interface that ``pages`` reads from a Loday complex.
    """

    def __init__(self, p: int, weights: dict[int, list[int]], diffs: dict[int, object]):
        self.p = p
        self._w = {n: [int(x) for x in ws] for n, ws in weights.items()}
        self._d = {}
        for n, m in diffs.items():
            m = np.asarray(m, dtype=np.int64) % p
            want = (len(self._w.get(n - 1, [])), len(self._w.get(n, [])))
            if m.shape != want:
                raise ValueError(f"d_{n} has shape {m.shape}, expected {want}")
            self._d[n] = m
        for n, m in self._d.items():
            nxt = self._d.get(n - 1)
            if nxt is not None and m.size and nxt.size and matmul_mod(nxt, m, p).any():
                raise ValueError(f"d_{n - 1} d_{n} != 0")

    def total_degrees(self) -> list[int]:
        return sorted(self._w)

    def valid_total(self, n: int) -> bool:
        return n in self._w

    def total_basis(self, n: int) -> list[int]:
        return list(range(len(self._w.get(n, []))))

    def total_weights(self, n: int) -> list[int]:
        return list(self._w.get(n, []))

    def total_differential(self, n: int) -> SparseMatrix:
        rows, cols = len(self._w.get(n - 1, [])), len(self._w.get(n, []))
        m = self._d.get(n)
        if m is None:
            return SparseMatrix.zeros(rows, cols, self.p)
        return SparseMatrix.from_dense(m, self.p)


class ExplicitFiltered:
    """Wraps an ExplicitComplex for ``pages``; rejects differentials that lower weight."""

    def __init__(self, c: ExplicitComplex):
        for n in c.total_degrees():
            src, tgt = c.total_weights(n), c.total_weights(n - 1)
            for r, col, _ in c.total_differential(n).entries:
                if tgt[r] < src[col]:
                    raise ValueError(f"d lowers weight in degree {n}")
        self.complex = c
        self.p = c.p


class _TotalDegreeData:
    """Dense differentials and weights of the total-degree complex, built on demand."""

    def __init__(self, fc: FilteredChainComplex):
        self.fc = fc
        self.c = fc.complex
        self.p = fc.p
        self._w: dict[int, np.ndarray] = {}
        self._d: dict[int, np.ndarray] = {}

    def weights(self, n: int) -> np.ndarray:
        if n not in self._w:
            self._w[n] = np.array(self.c.total_weights(n), dtype=np.int64)
        return self._w[n]

    def dim(self, n: int) -> int:
        return len(self.weights(n))

    def d(self, n: int) -> np.ndarray:
        """Dense matrix of d : C_n -> C_{n-1}."""
        if n not in self._d:
            rows, cols = self.dim(n - 1), self.dim(n)
            if rows == 0 or cols == 0:
                self._d[n] = np.zeros((rows, cols), dtype=np.int64)
            else:
                self._d[n] = self.c.total_differential(n).to_dense()
        return self._d[n]


@dataclass
class SpectralSequencePages:
    p: int
    degrees: list[int]
    weight_bounds: tuple[int, int]
    last_page: int
    dims: dict[tuple[int, int, int], int] = field(default_factory=dict)
    diffs: dict[tuple[int, int, int], np.ndarray] = field(default_factory=dict, repr=False)
    einf: dict[tuple[int, int], int] = field(default_factory=dict)
    abutment: dict[int, int] = field(default_factory=dict)
    r_stab: dict[tuple[int, int], int] = field(default_factory=dict)
    lifts: dict[tuple[int, int, int], np.ndarray] = field(default_factory=dict, repr=False)

    def dim(self, r: int, n: int, w: int) -> int:
        r = min(r, self.last_page)
        return self.dims.get((r, n, w), 0)

    def diff_rank(self, r: int, n: int, w: int) -> int:
        m = self.diffs.get((r, n, w))
        return 0 if m is None or m.size == 0 else dense_rank(m, self.p)

    def weights(self) -> range:
        lo, hi = self.weight_bounds
        return range(lo, hi + 1)

    def page_total(self, r: int, n: int) -> int:
        return sum(self.dim(r, n, w) for w in self.weights())

    def einf_total(self, n: int) -> int:
        return sum(v for (m, _), v in self.einf.items() if m == n)

    def nonzero_differentials(self) -> list[tuple[int, int, int, int]]:
        """(r, n, w, rank) for every d^r of positive rank."""
        out = []
        for (r, n, w), m in sorted(self.diffs.items()):
            rk = dense_rank(m, self.p) if m.size else 0
            if rk:
                out.append((r, n, w, rk))
        return out

    def strongly_converges(self, n: int) -> bool:
        return self.einf_total(n) == self.abutment[n]

    def page_turn_holds(self, r: int, n: int, w: int) -> bool:
        """dim E^{r+1}_{n,w} == dim ker d^r_{n,w} - rank d^r_{n+1,w-r}."""
        out_rank = self.diff_rank(r, n, w)
        in_rank = self.diff_rank(r, n + 1, w - r)
        return self.dims.get((r + 1, n, w), 0) == self.dims.get((r, n, w), 0) - out_rank - in_rank

    def tsv_rows(self) -> list[str]:
        rows = ["kind\tr\tn\tw\tvalue"]
        for (r, n, w), v in sorted(self.dims.items()):
            if v:
                rows.append(f"dim\t{r}\t{n}\t{w}\t{v}")
        for (r, n, w), m in sorted(self.diffs.items()):
            rk = dense_rank(m, self.p) if m.size else 0
            if rk:
                rows.append(f"rank\t{r}\t{n}\t{w}\t{rk}")
        for (n, w), v in sorted(self.einf.items()):
            if v:
                rows.append(f"dim\tinf\t{n}\t{w}\t{v}")
        return rows


def _coords_in(sub: Subspace, idx: np.ndarray, ambient: int) -> np.ndarray:
    """Embed vectors given on coordinate subset ``idx`` into the ambient space."""
    out = np.zeros((sub.dim, ambient), dtype=np.int64)
    if sub.dim:
        out[:, idx] = sub.basis
    return out


def pages(fc: FilteredChainComplex, r_max: int | None = None, degrees=None,
          weight_bound: int | None = None) -> SpectralSequencePages:
    """Compute E^1 .. E^{r_max} (default: until the weight range forces stabilization) and E^infinity.

    ``degrees`` selects the total degrees reported (default: every valid
    total degree of the complex).  ``weight_bound`` raises
    UnboundedFiltration if any weight in play exceeds it.
    """
    c = fc.complex
    data = _TotalDegreeData(fc)
    p = fc.p
    if degrees is None:
        degrees = [n for n in c.total_degrees() if c.valid_total(n)]
    degrees = sorted(degrees)
    if not degrees:
        return SpectralSequencePages(p, [], (0, -1), 0)
    span = list(range(degrees[0] - 1, degrees[-1] + 2))
    all_w = [int(w) for n in span + [span[-1] + 1] for w in data.weights(n)]
    wlo, whi = (min(all_w), max(all_w)) if all_w else (0, 0)
    if weight_bound is not None and whi > weight_bound:
        raise UnboundedFiltration(f"weight {whi} exceeds the configured bound {weight_bound}")
    stab = whi - wlo + 1
    last = stab + 1 if r_max is None else r_max
    weights = range(wlo, whi + 1)

    zcache: dict[tuple[int, int, int], Subspace] = {}

    def wrange(n: int) -> tuple[int, int]:
        wt = data.weights(n)
        return (int(wt.min()), int(wt.max())) if len(wt) else (0, -1)

    def Z(n: int, w: int, r: int) -> Subspace:
        """Z^r_{n,w}; r <= 0 gives F_w."""
        lo, hi = wrange(n)
        top = None
        if r > 0:
            tlo, thi = wrange(n - 1)
            top = min(w + r, thi + 1)
            if top <= tlo:
                top = None  # no constraint: every target weight is >= w + r
        w = max(w, lo)
        if w > hi:
            w, top = hi + 1, None  # F_w = 0
        key = (n, w, top)
        if key in zcache:
            return zcache[key]
        amb = data.dim(n)
        wt = data.weights(n)
        cols = np.nonzero(wt >= w)[0]
        if top is None or len(cols) == 0:
            res = Subspace.coordinate(cols.tolist(), amb, p)
        else:
            rows = np.nonzero(data.weights(n - 1) < top)[0]
            sub = data.d(n)[np.ix_(rows, cols)]
            k = dense_kernel(sub, p)
            res = Subspace.span(_coords_in(k, cols, amb), amb, p)
        zcache[key] = res
        return res

    dcache: dict = {}

    def denominator(n: int, w: int, r: int) -> Subspace:
        amb = data.dim(n)
        z_up = Z(n, w + 1, r - 1)
        src = Z(n + 1, w - r + 1, r - 1)
        key = (n, id(z_up), id(src))
        if key in dcache:
            return dcache[key]
        if src.dim and amb:
            boundaries = src.image_under(data.d(n + 1))
        else:
            boundaries = Subspace.zero(amb, p)
        dcache[key] = res = z_up + boundaries
        return res

    ss = SpectralSequencePages(p, degrees, (wlo, whi), last)
    page_span = span
    for r in range(1, last + 1):
        quot: dict[tuple[int, int], tuple[Subspace, Subspace]] = {}
        for n in page_span:
            for w in weights:
                num = Z(n, w, r)
                den = denominator(n, w, r)
                if not num.contains_space(den):
                    raise AssertionError(f"denominator escapes Z at r={r}, n={n}, w={w}")
                lift = num.complement_basis(den)
                ss.dims[(r, n, w)] = lift.shape[0]
                ss.lifts[(r, n, w)] = lift
                quot[(n, w)] = (den, Subspace.span(lift, data.dim(n), p) if lift.shape[0] else Subspace.zero(data.dim(n), p))
        for n in page_span:
            if n - 1 not in page_span:
                continue
            for w in weights:
                lift = ss.lifts[(r, n, w)]
                tgt = (n - 1, w + r)
                tdim = ss.dims.get((r, *tgt), 0)
                if lift.shape[0] == 0 or tgt not in quot:
                    ss.diffs[(r, n, w)] = np.zeros((tdim, lift.shape[0]), dtype=np.int64)
                    continue
                den, lspace = quot[tgt]
                images = (lift @ data.d(n).T) % p
                reduced = den.reduce(images)
                if tdim == 0:
                    if reduced.any():
                        raise AssertionError("d^r lands outside its target page")
                    ss.diffs[(r, n, w)] = np.zeros((0, lift.shape[0]), dtype=np.int64)
                    continue
                ss.diffs[(r, n, w)] = lspace.coordinates(reduced).T % p

    # E^infinity straight from cycles and boundaries
    for n in degrees:
        amb = data.dim(n)
        wt = data.weights(n)
        cyc = dense_kernel(data.d(n), p) if amb else Subspace.zero(0, p)
        bnd = (Subspace.span(data.d(n + 1).T, amb, p) if amb and data.dim(n + 1) else Subspace.zero(amb, p))
        ss.abutment[n] = cyc.dim - bnd.dim
        for w in weights:
            fw = Subspace.coordinate(np.nonzero(wt >= w)[0].tolist(), amb, p)
            fw1 = Subspace.coordinate(np.nonzero(wt >= w + 1)[0].tolist(), amb, p)
            top = cyc.intersect(fw)
            bottom = cyc.intersect(fw1) + bnd.intersect(fw)
            ss.einf[(n, w)] = top.dim - bottom.dim
            for r in range(1, last + 1):
                if all(ss.dims.get((s, n, w), 0) == ss.einf[(n, w)] for s in range(r, last + 1)):
                    ss.r_stab[(n, w)] = r
                    break
            else:
                ss.r_stab[(n, w)] = last + 1
    return ss


def persistence_pages(fc: FilteredChainComplex, degrees, last_page: int) -> tuple[dict, dict, dict]:
    """Page dimensions from the persistence pairing of one column reduction.

    Returns (dims[(r, n, w)], ranks[(r, n, w)], einf[(n, w)]).  A pair whose
    weights differ by g >= 1 survives to E^g at both ends and is hit by d^g;
    unpaired cycles survive to E^infinity.
    """
    c = fc.complex
    p = fc.p
    degrees = sorted(degrees)
    span = list(range(degrees[0] - 1, degrees[-1] + 3))
    order: dict[int, list[int]] = {}
    weights: dict[int, list[int]] = {}
    for n in span:
        ws = c.total_weights(n)
        weights[n] = ws
        # filtration order: higher weight first
        order[n] = sorted(range(len(ws)), key=lambda k, ws=ws: (-ws[k], k))
    pairs: list[tuple[int, int, int, int]] = []  # (n of tau, w tau, w sigma)
    killed: dict[int, set[int]] = {n: set() for n in span}
    zero_cols: dict[int, set[int]] = {n: set() for n in span}
    for n in span[1:]:
        if not c.total_basis(n) or not c.total_basis(n - 1):
            zero_cols[n] = set(range(len(weights[n])))
            continue
        pos = {k: i for i, k in enumerate(order[n - 1])}
        cols = c.total_differential(n).column_dicts()
        pivots: dict[int, dict[int, int]] = {}
        for j in order[n]:
            col = {pos[r]: v for r, v in cols[j].items()}
            while col:
                low = max(col)
                other = pivots.get(low)
                if other is None:
                    break
                f = (col[low] * pow(other[low], p - 2, p)) % p
                for k, v in other.items():
                    nv = (col.get(k, 0) - f * v) % p
                    if nv:
                        col[k] = nv
                    else:
                        col.pop(k, None)
            if col:
                low = max(col)
                pivots[low] = col
                sigma = order[n - 1][low]
                killed[n - 1].add(sigma)
                pairs.append((n, weights[n][j], weights[n - 1][sigma]))
            else:
                zero_cols[n].add(j)
    n0 = span[0]
    zero_cols[n0] = set(range(len(weights[n0])))
    dims: dict = {}
    ranks: dict = {}
    einf: dict = {}
    for n in span:
        for k in zero_cols.get(n, ()):
            if k not in killed[n]:
                w = weights[n][k]
                einf[(n, w)] = einf.get((n, w), 0) + 1
                for r in range(1, last_page + 1):
                    dims[(r, n, w)] = dims.get((r, n, w), 0) + 1
    for n, wt, ws in pairs:
        g = ws - wt
        if g >= 1:
            ranks[(g, n, wt)] = ranks.get((g, n, wt), 0) + 1
            for r in range(1, min(g, last_page) + 1):
                dims[(r, n, wt)] = dims.get((r, n, wt), 0) + 1
                dims[(r, n - 1, ws)] = dims.get((r, n - 1, ws), 0) + 1
    keep = set(degrees)
    return ({k: v for k, v in dims.items() if k[1] in keep},
            {k: v for k, v in ranks.items() if k[1] in keep},
            {k: v for k, v in einf.items() if k[0] in keep})


@dataclass
class UpperBoundReport:
    degrees: list[int]
    actual: dict[int, int]
    bound: dict[int, int]

    @property
    def holds(self) -> dict[int, bool]:
        return {n: self.actual[n] <= self.bound[n] for n in self.degrees}

    @property
    def slack(self) -> dict[int, int]:
        return {n: self.bound[n] - self.actual[n] for n in self.degrees}

    @property
    def passed(self) -> bool:
        return all(self.holds.values())

    def strict_degrees(self) -> list[int]:
        return [n for n in self.degrees if self.actual[n] < self.bound[n]]


def upper_bound_check(x, a, max_internal: int, module=None) -> UpperBoundReport:
    """dim H_n(X (x) A) <= dim H_n(X (x) gr A) for every valid total degree n."""
    from .algebra import as_filtered
    from .loday import LodayComplex, homology
    from .mayfilt import gr_complex

    c = LodayComplex(x, as_filtered(a), max_internal, module=module)
    g = gr_complex(c)
    hc, hg = homology(c), homology(g)
    degrees = hc.valid_totals()
    return UpperBoundReport(degrees, {n: hc.total(n) for n in degrees}, {n: hg.total(n) for n in degrees})


def collapse_by_bidegree(e1: dict[tuple[int, int], int], pattern=None, sources=None) -> bool:
    """True iff no d^r (r >= 1) can connect two nonzero entries of the table.

    ``pattern(n, w, r)`` gives the target bidegree of d^r from (n, w); default
    (n - 1, w + r).  ``sources`` restricts the bidegrees a differential may
    start from; for a multiplicative spectral sequence pass the bidegrees of
    the algebra generators, since the Leibniz rule determines d^r from them.
    """
    if pattern is None:
        def pattern(n, w, r):
            return n - 1, w + r
    support = {k for k, v in e1.items() if v}
    if not support:
        return True
    ws = [w for _, w in support]
    r_top = max(ws) - min(ws) + 1
    start = support if sources is None else {tuple(b) for b in sources}
    for n, w in start:
        for r in range(1, r_top + 1):
            if pattern(n, w, r) in support:
                return False
    return True


def total_homology(fc: FilteredChainComplex, n: int) -> int:
    """dim H_n of the total-degree complex, via sparse ranks."""
    c = fc.complex
    dim = len(c.total_basis(n))
    r_out = rank(c.total_differential(n)) if dim and c.total_basis(n - 1) else 0
    r_in = rank(c.total_differential(n + 1)) if dim and c.total_basis(n + 1) else 0
    return dim - r_out - r_in
