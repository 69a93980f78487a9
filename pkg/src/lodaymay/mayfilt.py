"""The May filtration of a Loday complex by total weight.

F_n is spanned by the basis tensors whose factor weights sum to at least n.
Because the filtration is basis-adapted, F_n / F_{n+1} is spanned by the
tensors of weight exactly n and its differential is the weight-preserving
part of d.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product as iproduct
from math import comb

from .algebra import associated_graded, associated_graded_bimodule
from .exactlin import SparseMatrix
from .loday import LodayComplex


class FiltrationError(ValueError):
    pass


class FilteredChainComplex:
    """A LodayComplex with the May weight of each basis tensor."""

    def __init__(self, c: LodayComplex):
        self.complex = c
        self.p = c.p
        self._weights: dict[tuple[int, int], list[int]] = {}

    def weights(self, h: int, t: int) -> list[int]:
        key = (h, t)
        if key not in self._weights:
            c = self.complex
            self._weights[key] = [c.weight(h, a) for a in c.basis(h, t)]
        return self._weights[key]

    def max_weight(self) -> int:
        return max((max(self.weights(h, t), default=0) for h, t in self.complex.bidegrees()), default=0)

    def weight_range(self, n: int) -> tuple[int, int]:
        """(min, max) weight present in total degree n."""
        ws = self.complex.total_weights(n)
        return (min(ws), max(ws)) if ws else (0, -1)

    def piece(self, h: int, t: int, n: int) -> list[int]:
        """Indices of the basis of C_{h,t} spanning F_n."""
        return [k for k, w in enumerate(self.weights(h, t)) if w >= n]

    def violations(self) -> list[tuple[int, int, int, int]]:
        """Entries of d that lower weight, as (h, t, row, col); empty iff d(F_n) is in F_n for all n."""
        bad = []
        c = self.complex
        for h, t in c.bidegrees():
            if h == 0:
                continue
            ws, wt = self.weights(h, t), self.weights(h - 1, t)
            for r, col, _ in c.differential(h, t).entries:
                if wt[r] < ws[col]:
                    bad.append((h, t, r, col))
        return bad

    def graded_differential(self, h: int, t: int, n: int) -> tuple[list[int], list[int], SparseMatrix]:
        """The differential of F_n/F_{n+1} from (h, t) to (h-1, t).

        Returns the source and target basis indices (weight exactly n) and the
        matrix between them.
        """
        src = [k for k, w in enumerate(self.weights(h, t)) if w == n]
        tgt = [k for k, w in enumerate(self.weights(h - 1, t)) if w == n] if h > 0 else []
        if h == 0:
            return src, tgt, SparseMatrix.zeros(0, len(src), self.p)
        spos = {k: i for i, k in enumerate(src)}
        tpos = {k: i for i, k in enumerate(tgt)}
        entries = tuple(sorted((tpos[r], spos[col], v) for r, col, v in self.complex.differential(h, t).entries
                               if r in tpos and col in spos))
        return src, tgt, SparseMatrix(len(tgt), len(src), self.p, entries)


def filter(c: LodayComplex) -> FilteredChainComplex:  # noqa: A001 - mirrors the operation name
    """Attach the May filtration; raises FiltrationError if d lowers weight somewhere."""
    fc = FilteredChainComplex(c)
    bad = fc.violations()
    if bad:
        h, t, r, col = bad[0]
        raise FiltrationError(f"differential lowers weight at bidegree ({h}, {t}), column {col}")
    return fc


def gr_complex(c: LodayComplex) -> LodayComplex:
    """The Loday complex of the associated graded algebra (and module), same cutoffs."""
    a = associated_graded(c.algebra)
    m = associated_graded_bimodule(c.module) if c.module is not None else None
    return LodayComplex(c.x, a, c.max_internal, module=m, normalized=c.normalized)


@dataclass
class FundamentalReport:
    """Per (h, t, n): does F_n/F_{n+1} coincide with the weight-n part of the gr complex?"""

    results: dict[tuple[int, int, int], bool] = field(default_factory=dict)
    first_failure: str | None = None

    @property
    def passed(self) -> bool:
        return all(self.results.values())

    def __bool__(self):
        return self.passed


def check_fundamental(fc: FilteredChainComplex) -> FundamentalReport:
    """Compare each filtration quotient with the gr complex, basis tensor by basis tensor.

    Both complexes share the same tensor basis (same factor indices), so the
    comparison demands equal bases and identical matrices, not just equal
    homology.
    """
    c = fc.complex
    g = FilteredChainComplex(gr_complex(c))
    gc = g.complex
    report = FundamentalReport()
    keys = sorted(set(c.bidegrees()) | set(gc.bidegrees()))
    for h, t in keys:
        weights = set(fc.weights(h, t)) | set(g.weights(h, t))
        if h > 0:
            weights |= set(fc.weights(h - 1, t)) | set(g.weights(h - 1, t))
        for n in sorted(weights):
            src, tgt, m = fc.graded_differential(h, t, n)
            gsrc, gtgt, gm = g.graded_differential(h, t, n)
            same_basis = ([c.basis(h, t)[k] for k in src] == [gc.basis(h, t)[k] for k in gsrc]
                          and [c.basis(h - 1, t)[k] for k in tgt] == [gc.basis(h - 1, t)[k] for k in gtgt])
            ok = same_basis and m.entries == gm.entries and m.rows == gm.rows and m.cols == gm.cols
            report.results[(h, t, n)] = ok
            if not ok and report.first_failure is None:
                what = "bases differ" if not same_basis else "differentials differ"
                report.first_failure = f"(h={h}, t={t}, n={n}): {what}"
    return report


def weight_component_count(s_size: int, n: int) -> int:
    """|{x in N^S : |x| = n}| for #S = s_size.

    Small cases are enumerated outright; otherwise, while s_size * n <= 10**6,
    the count is accumulated part by part (prefix-sum recursion over the last
    coordinate).  Past that the closed form C(n + s - 1, s - 1) is used.
    """
    if s_size < 0 or n < 0:
        raise ValueError("s_size and n must be nonnegative")
    if s_size == 0:
        return 1 if n == 0 else 0
    if (n + 1) ** s_size <= 10**6:
        return sum(1 for x in iproduct(range(n + 1), repeat=s_size) if sum(x) == n)
    if s_size * n <= 10**6:
        # after k passes, ways[m] = number of (k+1)-part vectors summing to m;
        # the last part absorbs n - m
        ways = [1] + [0] * n
        for _ in range(s_size - 1):
            running, nxt = 0, []
            for m in range(n + 1):
                running += ways[m]
                nxt.append(running)
            ways = nxt
        return sum(ways)
    return comb(n + s_size - 1, s_size - 1)
