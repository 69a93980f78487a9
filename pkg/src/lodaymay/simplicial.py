"""Simplicial finite sets given extensionally, up to a level cutoff."""

from __future__ import annotations

import json
from itertools import product as iproduct
from pathlib import Path
from typing import Sequence


class SimplicialError(ValueError):
    pass


class IdentityViolation(SimplicialError):
    """A simplicial identity fails; ``identity`` and ``simplex`` locate it."""

    def __init__(self, identity: str, level: int, simplex: str):
        super().__init__(f"simplicial identity {identity} fails at level {level} on simplex {simplex!r}")
        self.identity = identity
        self.level = level
        self.simplex = simplex


class CutoffMismatch(SimplicialError):
    pass


class SimplicialFiniteSet:
    """Levels 0..max_level of a simplicial set with face and degeneracy tables.

    ``faces[h][i][s]`` is the index of d_i(s) at level h-1 (``faces[0]`` is
    empty); ``degeneracies[h][i][s]`` is the index of s_i(s) at level h+1 and
    is only stored for h < max_level.
    """

    def __init__(self, levels: Sequence[Sequence[str]], faces, degeneracies, basepoint: str | None = None,
                 validate: bool = True):
        self.levels = tuple(tuple(lv) for lv in levels)
        self.max_level = len(self.levels) - 1
        if self.max_level < 0:
            raise SimplicialError("a simplicial set needs at least level 0")
        self.faces = tuple(tuple(tuple(int(v) for v in f) for f in lv) for lv in faces)
        self.degeneracies = tuple(tuple(tuple(int(v) for v in s) for s in lv) for lv in degeneracies)
        self.basepoint = basepoint
        self._check_shapes()
        self.base_indices: tuple[int, ...] | None = None
        if basepoint is not None:
            if basepoint not in self.levels[0]:
                raise SimplicialError(f"basepoint {basepoint!r} is not a 0-simplex")
            idx = [self.levels[0].index(basepoint)]
            for h in range(self.max_level):
                idx.append(self.degeneracies[h][0][idx[-1]])
            self.base_indices = tuple(idx)
        if validate:
            self._validate()

    @property
    def pointed(self) -> bool:
        return self.basepoint is not None

    def size(self, h: int) -> int:
        return len(self.levels[h])

    def counts(self) -> tuple[int, ...]:
        return tuple(len(lv) for lv in self.levels)

    def face(self, h: int, i: int, s: int) -> int:
        return self.faces[h][i][s]

    def degeneracy(self, h: int, i: int, s: int) -> int:
        return self.degeneracies[h][i][s]

    def _check_shapes(self):
        L = self.max_level
        if len(self.faces) != L + 1:
            raise SimplicialError("faces must have one entry per level (empty at level 0)")
        if len(self.degeneracies) < L:
            raise SimplicialError("degeneracies missing below the top level")
        for h in range(1, L + 1):
            if len(self.faces[h]) != h + 1:
                raise SimplicialError(f"level {h} needs {h + 1} face maps")
            for f in self.faces[h]:
                if len(f) != self.size(h) or any(not 0 <= v < self.size(h - 1) for v in f):
                    raise SimplicialError(f"malformed face table at level {h}")
        for h in range(L):
            if len(self.degeneracies[h]) != h + 1:
                raise SimplicialError(f"level {h} needs {h + 1} degeneracy maps")
            for s in self.degeneracies[h]:
                if len(s) != self.size(h) or any(not 0 <= v < self.size(h + 1) for v in s):
                    raise SimplicialError(f"malformed degeneracy table at level {h}")

    def _validate(self):
        L, F, S = self.max_level, self.faces, self.degeneracies
        name = self.levels
        for h in range(2, L + 1):
            for i in range(h + 1):
                for j in range(i + 1, h + 1):
                    for x in range(self.size(h)):
                        if F[h - 1][i][F[h][j][x]] != F[h - 1][j - 1][F[h][i][x]]:
                            raise IdentityViolation(f"d{i} d{j} = d{j - 1} d{i}", h, name[h][x])
        for h in range(L):
            for j in range(h + 1):
                for x in range(self.size(h)):
                    y = S[h][j][x]
                    for i in range(h + 2):
                        lhs = F[h + 1][i][y]
                        if i in (j, j + 1):
                            rhs, ident = x, f"d{i} s{j} = id"
                        elif h == 0:
                            continue
                        elif i < j:
                            rhs, ident = S[h - 1][j - 1][F[h][i][x]], f"d{i} s{j} = s{j - 1} d{i}"
                        else:
                            rhs, ident = S[h - 1][j][F[h][i - 1][x]], f"d{i} s{j} = s{j} d{i - 1}"
                        if lhs != rhs:
                            raise IdentityViolation(ident, h, name[h][x])
        for h in range(L - 1):
            for i in range(h + 1):
                for j in range(i, h + 1):
                    for x in range(self.size(h)):
                        if S[h + 1][i][S[h][j][x]] != S[h + 1][j + 1][S[h][i][x]]:
                            raise IdentityViolation(f"s{i} s{j} = s{j + 1} s{i}", h, name[h][x])
        if self.base_indices is not None:
            b = self.base_indices
            for h in range(1, L + 1):
                for i in range(h + 1):
                    if F[h][i][b[h]] != b[h - 1]:
                        raise IdentityViolation(f"d{i} preserves the basepoint", h, name[h][b[h]])
            for h in range(L):
                for i in range(h + 1):
                    if S[h][i][b[h]] != b[h + 1]:
                        raise IdentityViolation(f"s{i} preserves the basepoint", h, name[h][b[h]])

    def degenerate_images(self, h: int) -> list[frozenset[int]]:
        """For each i < h, the set of level-h simplices in the image of s_i."""
        if h == 0:
            return []
        return [frozenset(self.degeneracies[h - 1][i]) for i in range(h)]

    def nondegenerate(self, h: int) -> list[str]:
        degenerate = set().union(*self.degenerate_images(h)) if h else set()
        return [s for k, s in enumerate(self.levels[h]) if k not in degenerate]

    def dimension(self) -> int:
        """Largest level (within the cutoff) carrying a nondegenerate simplex."""
        return max(h for h in range(self.max_level + 1) if self.nondegenerate(h))

    def truncate(self, max_level: int) -> "SimplicialFiniteSet":
        if max_level > self.max_level:
            raise CutoffMismatch("cannot extend a simplicial set past its cutoff")
        return SimplicialFiniteSet(self.levels[: max_level + 1], self.faces[: max_level + 1],
                                   self.degeneracies[:max_level], self.basepoint, validate=False)

    def to_json(self) -> dict:
        doc = {
            "levels": [list(lv) for lv in self.levels],
            "faces": [[list(f) for f in lv] for lv in self.faces],
            "degeneracies": [[list(s) for s in lv] for lv in self.degeneracies[: self.max_level]],
        }
        if self.basepoint is not None:
            doc["basepoint"] = self.basepoint
        return doc

    def __eq__(self, other):
        if not isinstance(other, SimplicialFiniteSet):
            return NotImplemented
        return (self.levels == other.levels and self.faces == other.faces
                and self.degeneracies[: self.max_level] == other.degeneracies[: other.max_level]
                and self.basepoint == other.basepoint)

    def __repr__(self):
        return f"SimplicialFiniteSet(counts={self.counts()}, basepoint={self.basepoint!r})"


def point(max_level: int) -> SimplicialFiniteSet:
    levels = [["*"] for _ in range(max_level + 1)]
    faces = [[]] + [[[0]] * (h + 1) for h in range(1, max_level + 1)]
    degs = [[[0]] * (h + 1) for h in range(max_level)]
    return SimplicialFiniteSet(levels, faces, degs, basepoint="*")


def circle(max_level: int) -> SimplicialFiniteSet:
    """Delta[1]/dDelta[1]: level h holds the basepoint and the h sequences 0^k 1^(h+1-k), 1 <= k <= h."""
    if max_level < 0:
        raise ValueError("max_level must be nonnegative")

    def name(h, k):
        return "*" if k in (0, h + 1) else "0" * k + "1" * (h + 1 - k)

    levels = [[name(h, k) for k in range(0, h + 1)] for h in range(max_level + 1)]

    def idx(h, k):
        # k zeros in a sequence of length h+1; both ends collapse to the basepoint
        return 0 if k in (0, h + 1) else k

    faces = [[]]
    for h in range(1, max_level + 1):
        faces.append([[idx(h - 1, k - 1 if i < k else k) if k else 0 for k in range(h + 1)]
                      for i in range(h + 1)])
    degs = []
    for h in range(max_level):
        degs.append([[idx(h + 1, k + 1 if i < k else k) if k else 0 for k in range(h + 1)]
                     for i in range(h + 1)])
    return SimplicialFiniteSet(levels, faces, degs, basepoint="*")


def product(x: SimplicialFiniteSet, y: SimplicialFiniteSet) -> SimplicialFiniteSet:
    """Levelwise cartesian product, pairs ordered lexicographically."""
    if x.max_level != y.max_level:
        raise CutoffMismatch(f"cutoffs differ: {x.max_level} vs {y.max_level}")
    L = x.max_level
    levels, faces, degs = [], [[]], []
    for h in range(L + 1):
        levels.append([f"({a},{b})" for a, b in iproduct(x.levels[h], y.levels[h])])
    ny = [y.size(h) for h in range(L + 1)]
    for h in range(1, L + 1):
        faces.append([[x.faces[h][i][a] * ny[h - 1] + y.faces[h][i][b]
                       for a, b in iproduct(range(x.size(h)), range(y.size(h)))] for i in range(h + 1)])
    for h in range(L):
        degs.append([[x.degeneracies[h][i][a] * ny[h + 1] + y.degeneracies[h][i][b]
                      for a, b in iproduct(range(x.size(h)), range(y.size(h)))] for i in range(h + 1)])
    base = None
    if x.pointed and y.pointed:
        base = f"({x.basepoint},{y.basepoint})"
    return SimplicialFiniteSet(levels, faces, degs, basepoint=base)


def torus(d: int, max_level: int) -> SimplicialFiniteSet:
    if d < 1:
        raise ValueError("torus dimension must be at least 1")
    t = circle(max_level)
    for _ in range(d - 1):
        t = product(t, circle(max_level))
    return t


def from_json(doc: dict) -> SimplicialFiniteSet:
    try:
        levels = doc["levels"]
        faces = doc["faces"]
        degs = doc.get("degeneracies", [])
    except (KeyError, TypeError) as exc:
        raise SimplicialError(f"malformed simplicial-set document: {exc}") from None
    return SimplicialFiniteSet(levels, faces, degs, basepoint=doc.get("basepoint"))


def custom(path: str | Path) -> SimplicialFiniteSet:
    """Load and validate a simplicial set from a JSON file."""
    with open(path) as fh:
        return from_json(json.load(fh))
