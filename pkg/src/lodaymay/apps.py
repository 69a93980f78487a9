"""Closed-form answers and symbolic bounds to test the Loday computations against.

Everything here is a dimension count: truncated integer power series,
Poincare series of free graded-commutative algebras on a few generators, and
the degrees where such a series must vanish.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product as iproduct
from math import gcd
from typing import Mapping, Sequence

from .posetlab import InvalidParams


class PowerSeries:
    """Integer power series c_0 + c_1 t + ... truncated at order N (inclusive)."""

    def __init__(self, coeffs: Sequence[int], N: int | None = None):
        if N is None:
            N = len(coeffs) - 1
        if N < 0:
            raise ValueError("truncation order must be nonnegative")
        self.N = N
        c = [int(v) for v in coeffs[: N + 1]]
        self.coeffs = tuple(c + [0] * (N + 1 - len(c)))

    @classmethod
    def one(cls, N: int) -> "PowerSeries":
        return cls([1], N)

    @classmethod
    def monomial(cls, d: int, N: int, c: int = 1) -> "PowerSeries":
        out = [0] * (N + 1)
        if 0 <= d <= N:
            out[d] = c
        return cls(out, N)

    @classmethod
    def geometric(cls, d: int, N: int) -> "PowerSeries":
        """1 / (1 - t^d) for d >= 1."""
        if d < 1:
            raise ValueError("1/(1 - t^d) needs d >= 1")
        return cls([1 if k % d == 0 else 0 for k in range(N + 1)], N)

    def _check(self, other: "PowerSeries"):
        if self.N != other.N:
            raise ValueError(f"truncation orders differ: {self.N} vs {other.N}")

    def __add__(self, other: "PowerSeries") -> "PowerSeries":
        self._check(other)
        return PowerSeries([a + b for a, b in zip(self.coeffs, other.coeffs)], self.N)

    def __sub__(self, other: "PowerSeries") -> "PowerSeries":
        self._check(other)
        return PowerSeries([a - b for a, b in zip(self.coeffs, other.coeffs)], self.N)

    def __mul__(self, other: "PowerSeries") -> "PowerSeries":
        self._check(other)
        out = [0] * (self.N + 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j in range(self.N + 1 - i):
                    out[i + j] += a * other.coeffs[j]
        return PowerSeries(out, self.N)

    def __getitem__(self, k: int) -> int:
        return self.coeffs[k] if 0 <= k <= self.N else 0

    def __eq__(self, other):
        if not isinstance(other, PowerSeries):
            return NotImplemented
        return self.N == other.N and self.coeffs == other.coeffs

    def __le__(self, other: "PowerSeries") -> bool:
        """Coefficientwise comparison."""
        self._check(other)
        return all(a <= b for a, b in zip(self.coeffs, other.coeffs))

    def __repr__(self):
        return f"PowerSeries({list(self.coeffs)})"

    def __str__(self):
        return ",".join(str(c) for c in self.coeffs)


KINDS = ("exterior", "polynomial", "divided-power")


@dataclass(frozen=True)
class SymbolicGradedDims:
    """Dimensions of a tensor product of free graded algebras on the given generators.

    A divided-power generator counts like a polynomial one.
    """

    generators: tuple[tuple[int, str], ...] = ()

    def __post_init__(self):
        for d, kind in self.generators:
            if kind not in KINDS:
                raise ValueError(f"unknown generator kind {kind!r}")
            if d < 1:
                raise ValueError("generator degrees must be positive")

    def series(self, N: int) -> PowerSeries:
        s = PowerSeries.one(N)
        for d, kind in self.generators:
            if kind == "exterior":
                s = s * (PowerSeries.one(N) + PowerSeries.monomial(d, N))
            else:
                s = s * PowerSeries.geometric(d, N)
        return s

    def enumerate(self, N: int) -> list[int]:
        """Same dimensions by listing every monomial of degree <= N."""
        ranges = []
        for d, kind in self.generators:
            top = 1 if kind == "exterior" else N // d
            ranges.append(range(top + 1))
        out = [0] * (N + 1)
        degs = [d for d, _ in self.generators]
        for expo in iproduct(*ranges):
            deg = sum(e * d for e, d in zip(expo, degs))
            if deg <= N:
                out[deg] += 1
        return out


def hh_exterior_expected(p: int, deg_x: int, N: int) -> list[int]:
    """dims of E(x) (x) Gamma(sigma x) per total degree 0..N, |sigma x| = deg_x + 1."""
    if deg_x < 1:
        raise InvalidParams("deg_x must be positive")
    if p != 2 and deg_x % 2 == 0:
        raise InvalidParams("the exterior formula needs deg_x odd when p is odd")
    return list(SymbolicGradedDims(((deg_x, "exterior"), (deg_x + 1, "divided-power"))).series(N).coeffs)


def hh_truncated_square_expected(p: int, deg_x: int, N: int) -> dict[tuple[int, int], int]:
    """Bigraded dims of HH of F_p[x]/x^2, |x| even, p odd, for every (h, t) with h + t <= N.

    Classes: 1 at (0, 0), x at (0, |x|), x_i at (2i, 2|x|i + |x|) for i >= 1,
    y_j at (2j + 1, 2|x|j + |x|) for j >= 0.  Zero entries are included so
    the keys record the range covered.
    """
    if deg_x < 1 or deg_x % 2:
        raise InvalidParams("deg_x must be positive and even")
    if p == 2:
        raise InvalidParams("the formula assumes p odd")
    out = {(h, t): 0 for h in range(N + 1) for t in range(N + 1 - h)}

    def put(h, t):
        if h + t <= N:
            out[(h, t)] += 1

    put(0, 0)
    put(0, deg_x)
    i = 1
    while 2 * i <= N:
        put(2 * i, 2 * deg_x * i + deg_x)
        i += 1
    j = 0
    while 2 * j + 1 <= N:
        put(2 * j + 1, 2 * deg_x * j + deg_x)
        j += 1
    return out


def bound_generators(p: int, n: int) -> SymbolicGradedDims:
    """E(lambda_1, sigma x) (x) P(mu_1, x) with |x| = 2n."""
    return SymbolicGradedDims(((2 * p - 1, "exterior"), (2 * n + 1, "exterior"),
                               (2 * n, "polynomial"), (2 * p, "polynomial")))


def poincare_bound(p: int, n: int, N: int) -> PowerSeries:
    """(1 + t^(2p-1))(1 + t^(2n+1)) / ((1 - t^(2n))(1 - t^(2p))) up to t^N."""
    if n <= 0:
        raise InvalidParams("n must be positive")
    return bound_generators(p, n).series(N)


def polynomial_hh_series(n: int, N: int) -> PowerSeries:
    """HH of F_p[x], |x| = 2n: P(x) (x) E(sigma x)."""
    return SymbolicGradedDims(((2 * n, "polynomial"), (2 * n + 1, "exterior"))).series(N)


@dataclass
class VanishingReport:
    p: int
    n: int
    divides: bool
    frobenius: int  # pn - p - n, only meaningful when p does not divide n
    degrees: list[int] = field(default_factory=list)
    allowed_residues: list[int] = field(default_factory=list)  # mod 2p, when p | n
    certificate: dict[int, int] = field(default_factory=dict)  # degree -> bound coefficient

    @property
    def certified(self) -> bool:
        if self.divides:
            m = 2 * self.p
            return all(c == 0 or d % m in self.allowed_residues for d, c in self.certificate.items())
        return all(c == 0 for c in self.certificate.values())


def vanishing_degrees(p: int, n: int, horizon: int | None = None) -> VanishingReport:
    """Degrees where the Poincare bound forces vanishing, with an enumeration certificate.

    p not dividing n: even degrees 2i <= 2(pn - p - n) with i = -p mod n or
    i = -n mod p.  p dividing n: the residues mod 2p outside of which the
    bound vanishes, certified for every degree up to ``horizon``
    (default 8p + 2n).
    """
    if n <= 0:
        raise InvalidParams("n must be positive")
    if p < 2:
        raise InvalidParams("p must be a prime")
    gens = bound_generators(p, n)
    if n % p == 0:
        m = 2 * p
        allowed = sorted({(-1) % m, 0, 1 % m})
        N = horizon if horizon is not None else 8 * p + 2 * n
        counts = gens.enumerate(N)
        return VanishingReport(p, n, True, p * n - p - n, [], allowed, {d: counts[d] for d in range(N + 1)})
    F = p * n - p - n
    degs = [2 * i for i in range(0, F + 1) if i % n == (-p) % n or i % p == (-n) % p]
    counts = gens.enumerate(max(2 * F, 0))
    return VanishingReport(p, n, False, F, degs, [], {d: counts[d] for d in degs})


@dataclass
class VerificationReport:
    results: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return bool(self.results) and all(ok for ok, _, _ in self.results.values())

    def mismatches(self) -> dict:
        return {k: (got, want) for k, (ok, got, want) in self.results.items() if not ok}

    def __bool__(self):
        return self.passed


def verify_hh_against_expected(computed, expected) -> VerificationReport:
    """Compare a HomologyTable with expected dims inside its validity range.

    ``expected`` is either a list indexed by total degree or a mapping
    (h, t) -> dim; only keys covered by ``expected`` are compared.
    """
    rep = VerificationReport()
    if isinstance(expected, Mapping):
        for (h, t), want in sorted(expected.items()):
            if computed.valid(h, t):
                got = computed.get(h, t)
                rep.results[(h, t)] = (got == want, got, want)
    else:
        for n in computed.valid_totals():
            if n < len(expected):
                got = computed.total(n)
                rep.results[n] = (got == expected[n], got, expected[n])
    return rep


def hh_exterior_even_classes(deg_x: int, N: int) -> dict[tuple[int, int], int]:
    """(total degree, May weight) of the HH(E(x)) classes, |x| even, weight = number of x factors.

    1 -> (0, 0); x -> (|x|, 1); x_i = x^(2i+1) -> (2i + 2|x|i + |x|, 2i + 1);
    y_j = 1 (x) x^(2j+1) -> (2j + 1 + 2|x|j + |x|, 2j + 1).
    """
    out: dict[tuple[int, int], int] = {}

    def put(n, w):
        if n <= N:
            out[(n, w)] = out.get((n, w), 0) + 1

    put(0, 0)
    put(deg_x, 1)
    i = 1
    while 2 * i + 2 * deg_x * i + deg_x <= N:
        put(2 * i + 2 * deg_x * i + deg_x, 2 * i + 1)
        i += 1
    j = 0
    while 2 * j + 1 + 2 * deg_x * j + deg_x <= N:
        put(2 * j + 1 + 2 * deg_x * j + deg_x, 2 * j + 1)
        j += 1
    return out


def square_zero_e1(p: int, k: int, N: int) -> dict[tuple[int, int], int]:
    """E^1 of the square-zero May filtration: E(lambda_1) (x) P(mu_1) (x) HH(E(x)), |x| = 2k.

    lambda_1 and mu_1 sit in degrees 2p - 1 and 2p with weight 0.
    """
    if k < 1:
        raise InvalidParams("k must be positive")
    hh = hh_exterior_even_classes(2 * k, N)
    bok = SymbolicGradedDims(((2 * p - 1, "exterior"), (2 * p, "polynomial"))).series(N)
    out: dict[tuple[int, int], int] = {}
    for (n, w), c in hh.items():
        for s in range(N + 1 - n):
            if bok[s]:
                out[(n + s, w)] = out.get((n + s, w), 0) + c * bok[s]
    return out


def square_zero_generators(p: int, k: int, N: int) -> list[tuple[int, int]]:
    """Bidegrees of the multiplicative generators of square_zero_e1: lambda_1, mu_1 and the HH classes."""
    gens = set(hh_exterior_even_classes(2 * k, N)) | {(2 * p - 1, 0), (2 * p, 0)}
    return sorted(g for g in gens if 0 < g[0] <= N)


def square_zero_collapses(p: int, k: int, N: int) -> bool:
    """No d^r out of a generator can hit a nonzero class of the E^1 table through degree N."""
    from .specseq import collapse_by_bidegree

    return collapse_by_bidegree(square_zero_e1(p, k, N), sources=square_zero_generators(p, k, N))


def rigidity_holds(p: int, k: int) -> bool:
    """The congruence under which the square-zero spectral sequence is expected to collapse."""
    return p % (2 * k + 1) != (k + 1) % (2 * k + 1)


def frobenius_number(a: int, b: int) -> int:
    """Largest integer not a nonnegative combination of coprime a, b."""
    if gcd(a, b) != 1:
        raise InvalidParams("a and b must be coprime")
    return a * b - a - b
