"""Finite posets of functions S -> N under the componentwise order.

These are the indexing diagrams of the May filtration: the cube-like posets
E_{n,k}, the (capped) up-sets D_{n;x}, and the Galois connection J -| K
between them.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iproduct
from typing import Sequence

Vec = tuple[int, ...]


class InvalidParams(ValueError):
    pass


def leq(a: Vec, b: Vec) -> bool:
    return all(x <= y for x, y in zip(a, b))


def norm(x: Sequence[int]) -> int:
    return sum(x)


@dataclass(frozen=True)
class FinitePoset:
    elements: tuple[Vec, ...]

    def __len__(self):
        return len(self.elements)

    def __contains__(self, v):
        return tuple(v) in set(self.elements)

    def le(self, a: Vec, b: Vec) -> bool:
        return leq(a, b)

    def check_order(self) -> bool:
        """Reflexive, antisymmetric and transitive on the element set (exhaustive up to 10**4 elements)."""
        els = self.elements
        if len(els) > 10**4:
            raise InvalidParams("poset too large for an exhaustive order check")
        for a in els:
            if not leq(a, a):
                return False
        for a, b in iproduct(els, repeat=2):
            if leq(a, b) and leq(b, a) and a != b:
                return False
        for a, b in iproduct(els, repeat=2):
            if not leq(a, b):
                continue
            for c in els:
                if leq(b, c) and not leq(a, c):
                    return False
        return True


def E_poset(s_size: int, n: int, k: int) -> FinitePoset:
    """{x in {0..n}^S : sum x >= k}, requires k >= n."""
    if s_size < 0 or n < 0:
        raise InvalidParams("s_size and n must be nonnegative")
    if k < n:
        raise InvalidParams(f"E_(n,k) needs k >= n, got n={n}, k={k}")
    return FinitePoset(tuple(x for x in iproduct(range(n + 1), repeat=s_size) if sum(x) >= k))


def E_n(s_size: int, n: int) -> FinitePoset:
    return E_poset(s_size, n, n)


def D_poset_truncated(s_size: int, n: int, x: Sequence[int], cap: int) -> FinitePoset:
    """{y in N^S : y >= x, |y| >= n + |x|} with every coordinate capped at ``cap``."""
    x = tuple(x)
    if len(x) != s_size:
        raise InvalidParams("base vector has the wrong length")
    if n < 0 or any(v < 0 for v in x):
        raise InvalidParams("n and x must be nonnegative")
    bound = n + norm(x)
    ranges = [range(xi, cap + 1) for xi in x]
    return FinitePoset(tuple(y for y in iproduct(*ranges) if sum(y) >= bound))


def J(x: Vec, z: Vec) -> Vec:
    return tuple(a + b for a, b in zip(x, z))


def K(n: int, x: Vec, y: Vec) -> Vec:
    return tuple(min(n, b - a) for a, b in zip(x, y))


@dataclass
class AdjunctionReport:
    passed: bool
    checked: int
    counterexample: tuple | None = None

    def __bool__(self):
        return self.passed


def check_adjunction(s_size: int, n: int, x: Sequence[int], cap: int) -> AdjunctionReport:
    """Check z <= K(y) <=> J(z) <= y for all z in E_n and y in the capped D_{n;x}.

    Also checks that J lands in D_{n;x} and K lands in E_n.
    """
    x = tuple(x)
    E = E_n(s_size, n).elements
    D = D_poset_truncated(s_size, n, x, cap).elements
    bound = n + norm(x)
    e_set = set(E)
    checked = 0
    for z in E:
        jz = J(x, z)
        if not (leq(x, jz) and norm(jz) >= bound):
            return AdjunctionReport(False, checked, ("J leaves D", z))
    for y in D:
        ky = K(n, x, y)
        if ky not in e_set:
            return AdjunctionReport(False, checked, ("K leaves E", y))
        for z in E:
            checked += 1
            if leq(z, ky) != leq(J(x, z), y):
                return AdjunctionReport(False, checked, (z, y))
    return AdjunctionReport(True, checked)


def pushforward(f: Sequence[int], s_size: int, x: Sequence[int]) -> Vec:
    """(N^f x)(s) = sum of x(t) over t with f(t) = s."""
    out = [0] * s_size
    for t, s in enumerate(f):
        out[s] += x[t]
    return tuple(out)


def l1_functoriality(f: Sequence[int], s_size: int, x: Sequence[int]) -> bool:
    """|N^f(x)| == |x| for the map f : T -> S given as a list of targets."""
    if len(f) != len(x):
        raise InvalidParams("f and x must both be indexed by T")
    if any(not 0 <= s < s_size for s in f):
        raise InvalidParams("f has a target outside S")
    return norm(pushforward(f, s_size, x)) == norm(x)


def adjunction_suite(max_s: int = 3, max_n: int = 3, max_x: int = 2) -> list[tuple[tuple, AdjunctionReport]]:
    """Run check_adjunction for every s <= max_s, n <= max_n and base vector with |x| <= max_x."""
    out = []
    for s in range(1, max_s + 1):
        for n in range(max_n + 1):
            for x in iproduct(range(max_x + 1), repeat=s):
                if sum(x) > max_x:
                    continue
                cap = n + sum(x) + 3
                out.append(((s, n, x, cap), check_adjunction(s, n, x, cap)))
    return out
