"""JSON readers and writers for algebra and simplicial-set files.

Algebra document::

    {"p": 3,
     "basis": [{"name": "1", "degree": 0}, {"name": "x", "degree": 3, "weight": 3}],
     "unit": "1",
     "products": [{"left": "1", "right": "x", "result": [{"basis": "x", "coeff": 1}]}, ...]}

Only pairs with left index <= right index may be listed; the transposed
products are filled in by graded commutativity.  Omitted products are zero.
An optional ``exact_through`` marks a truncated model (see GradedAlgebra).
"""

from __future__ import annotations

import json
from pathlib import Path

from .algebra import AlgebraValidationError, FilteredAlgebra, GradedAlgebra, koszul
from .simplicial import SimplicialFiniteSet, from_json


def _basis_ref(ref, names: list[str], where: str) -> int:
    if isinstance(ref, bool):
        raise AlgebraValidationError("file format", f"{where}: bad basis reference {ref!r}")
    if isinstance(ref, int):
        if not 0 <= ref < len(names):
            raise AlgebraValidationError("file format", f"{where}: basis index {ref} out of range")
        return ref
    if ref not in names:
        raise AlgebraValidationError("file format", f"{where}: unknown basis element {ref!r}")
    return names.index(ref)


def algebra_from_json(doc: dict) -> FilteredAlgebra:
    """Parse and validate an algebra document; weights default to 0."""
    try:
        p = doc["p"]
        basis = doc["basis"]
        unit = doc["unit"]
        products = doc.get("products", [])
    except (KeyError, TypeError) as exc:
        raise AlgebraValidationError("file format", f"missing field {exc}") from None
    if not isinstance(p, int) or isinstance(p, bool):
        raise AlgebraValidationError("file format", "p must be an integer")
    try:
        names = [str(b["name"]) for b in basis]
        degrees = [int(b["degree"]) for b in basis]
        weights = [int(b.get("weight", 0)) for b in basis]
    except (KeyError, TypeError, ValueError) as exc:
        raise AlgebraValidationError("file format", f"bad basis entry: {exc}") from None
    u = _basis_ref(unit, names, "unit")
    table: dict[tuple[int, int], dict[int, int]] = {}
    for k, entry in enumerate(products):
        where = f"products[{k}]"
        try:
            i = _basis_ref(entry["left"], names, where)
            j = _basis_ref(entry["right"], names, where)
            result = entry.get("result", [])
            vec: dict[int, int] = {}
            for term in result:
                b = _basis_ref(term["basis"], names, where)
                vec[b] = (vec.get(b, 0) + int(term["coeff"])) % p
        except (KeyError, TypeError, ValueError) as exc:
            raise AlgebraValidationError("file format", f"{where}: {exc}") from None
        if i > j:
            raise AlgebraValidationError("file format", f"{where}: left index {i} > right index {j}")
        if (i, j) in table:
            raise AlgebraValidationError("file format", f"{where}: product listed twice")
        vec = {b: c for b, c in vec.items() if c}
        table[(i, j)] = vec
        if i != j:
            s = koszul(degrees[i], degrees[j])
            table[(j, i)] = {b: (s * c) % p for b, c in vec.items()}
    et = doc.get("exact_through")
    a = GradedAlgebra(p, names, degrees, u, table, exact_through=None if et is None else int(et))
    return FilteredAlgebra(a, weights)


def algebra_to_json(fa: FilteredAlgebra | GradedAlgebra) -> dict:
    if isinstance(fa, GradedAlgebra):
        fa = FilteredAlgebra(fa)
    a = fa.algebra
    basis = [{"name": n, "degree": d, "weight": w} for n, d, w in zip(a.names, a.degrees, fa.weights)]
    products = []
    for i in range(a.dim):
        for j in range(i, a.dim):
            vec = a.table[i][j]
            if vec:
                products.append({"left": a.names[i], "right": a.names[j],
                                 "result": [{"basis": a.names[k], "coeff": c} for k, c in sorted(vec.items())]})
    doc = {"p": a.p, "basis": basis, "unit": a.names[a.unit], "products": products}
    if a.exact_through is not None:
        doc["exact_through"] = a.exact_through
    return doc


def load_algebra(path: str | Path) -> FilteredAlgebra:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise AlgebraValidationError("file format", f"{path}: invalid JSON ({exc})") from None
    return algebra_from_json(doc)


def dump_algebra(fa, path: str | Path | None = None) -> str:
    text = json.dumps(algebra_to_json(fa), indent=2, sort_keys=True)
    if path is not None:
        Path(path).write_text(text + "\n")
    return text


def load_simplicial(path: str | Path) -> SimplicialFiniteSet:
    with open(path) as fh:
        return from_json(json.load(fh))


def dump_simplicial(x: SimplicialFiniteSet, path: str | Path | None = None) -> str:
    text = json.dumps(x.to_json(), sort_keys=True)
    if path is not None:
        Path(path).write_text(text + "\n")
    return text
