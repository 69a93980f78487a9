"""Command-line front end.

Exit status: 0 on success, 1 when a check command finds a failure, 2 when an
input fails validation.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass

from .algebra import AlgebraValidationError, associated_graded
from .exactlin import NotPrime
from .fileio import algebra_to_json, dump_algebra, load_algebra
from .posetlab import InvalidParams

COMMANDS = ("hh", "gr", "pages", "check-fundamental", "bound", "poincare", "vanishing", "poset-check", "selftest")


class ValidationFailure(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    algebra: str | None = None
    space: str = "circle"
    max_internal: int = 8
    max_level: int = 5
    r_max: int | None = None
    format: str = "tsv"
    seed: int = 0
    p: int | None = None
    n: int | None = None
    N: int | None = None
    count: int = 20

    def validate(self):
        if self.max_level < 2:
            raise ValidationFailure("max_level must be at least 2")
        if self.max_internal < 0:
            raise ValidationFailure("max_internal must be nonnegative")
        if self.space.startswith("torus:"):
            try:
                d = int(self.space.split(":", 1)[1])
            except ValueError:
                raise ValidationFailure(f"bad torus dimension in {self.space!r}") from None
            if d < 1:
                raise ValidationFailure("torus dimension must be at least 1")
        if self.command in ("hh", "gr", "pages", "check-fundamental", "bound") and not self.algebra:
            raise ValidationFailure(f"{self.command} needs --algebra")
        if self.command in ("poincare", "vanishing") and (self.p is None or self.n is None):
            raise ValidationFailure(f"{self.command} needs --p and --n")
        if self.command == "poincare" and self.N is None:
            raise ValidationFailure("poincare needs --N")
        if self.r_max is not None and self.r_max < 1:
            raise ValidationFailure("r_max must be at least 1")


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lodaymay", description="Loday complexes, May filtrations and their pages.")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--algebra", help="algebra JSON file")
    ap.add_argument("--space", default="circle", help="circle | point | torus:d | path to a simplicial-set JSON file")
    ap.add_argument("--max-internal", type=int, default=8)
    ap.add_argument("--max-level", type=int, default=5)
    ap.add_argument("--r-max", type=int, default=None)
    ap.add_argument("--format", choices=("tsv", "json"), default="tsv")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--count", type=int, default=20, help="random instances for selftest")
    ap.add_argument("--p", type=int)
    ap.add_argument("--n", type=int)
    ap.add_argument("--N", type=int)
    return ap


def _emit(out, fmt: str, rows: list[str], doc: dict):
    if fmt == "json":
        out.write(json.dumps(doc, sort_keys=True) + "\n")
    else:
        out.write("\n".join(rows) + "\n")


def _complex(cfg: RunConfig):
    from .corpus import space
    from .loday import LodayComplex

    a = load_algebra(cfg.algebra)
    x = space(cfg.space, cfg.max_level)
    return LodayComplex(x, a, cfg.max_internal)


def _cmd_hh(cfg, out) -> int:
    from .loday import homology

    c = _complex(cfg)
    tab = homology(c)
    totals = tab.by_total()
    rows = [f"# h_valid={tab.h_valid}\tt_valid={tab.t_valid}", "h\tt\tdim\tvalid"]
    for (h, t), d in sorted(tab.dims.items()):
        rows.append(f"{h}\t{t}\t{d}\t{int(tab.valid(h, t))}")
    rows.append("n\ttotal_dim")
    rows += [f"{n}\t{d}" for n, d in sorted(totals.items())]
    doc = {"h_valid": tab.h_valid, "t_valid": tab.t_valid,
           "bigraded": [{"h": h, "t": t, "dim": d, "valid": tab.valid(h, t)} for (h, t), d in sorted(tab.dims.items())],
           "totals": {str(n): d for n, d in sorted(totals.items())}}
    _emit(out, cfg.format, rows, doc)
    return 0


def _cmd_gr(cfg, out) -> int:
    g = associated_graded(load_algebra(cfg.algebra))
    if cfg.format == "json":
        out.write(json.dumps(algebra_to_json(g), sort_keys=True) + "\n")
    else:
        out.write(dump_algebra(g) + "\n")
    return 0


def _cmd_pages(cfg, out) -> int:
    from .mayfilt import filter as may_filter
    from .specseq import pages

    ss = pages(may_filter(_complex(cfg)), r_max=cfg.r_max)
    doc = {"degrees": ss.degrees, "last_page": ss.last_page,
           "dims": [[r, n, w, d] for (r, n, w), d in sorted(ss.dims.items()) if d],
           "ranks": [[r, n, w, k] for r, n, w, k in ss.nonzero_differentials()],
           "einf": [[n, w, d] for (n, w), d in sorted(ss.einf.items()) if d],
           "abutment": {str(n): d for n, d in sorted(ss.abutment.items())}}
    _emit(out, cfg.format, ss.tsv_rows(), doc)
    return 0 if all(ss.strongly_converges(n) for n in ss.degrees) else 1


def _cmd_fundamental(cfg, out) -> int:
    from .mayfilt import check_fundamental
    from .mayfilt import filter as may_filter

    rep = check_fundamental(may_filter(_complex(cfg)))
    rows = ["h\tt\tn\tresult"] + [f"{h}\t{t}\t{n}\t{'pass' if ok else 'fail'}"
                                  for (h, t, n), ok in sorted(rep.results.items())]
    if rep.first_failure:
        rows.append(f"# first failure {rep.first_failure}")
    doc = {"passed": rep.passed, "first_failure": rep.first_failure,
           "results": [[h, t, n, ok] for (h, t, n), ok in sorted(rep.results.items())]}
    _emit(out, cfg.format, rows, doc)
    return 0 if rep.passed else 1


def _cmd_bound(cfg, out) -> int:
    from .corpus import space
    from .specseq import upper_bound_check

    rep = upper_bound_check(space(cfg.space, cfg.max_level), load_algebra(cfg.algebra), cfg.max_internal)
    rows = ["n\tactual\tbound\tslack\tholds"] + [
        f"{n}\t{rep.actual[n]}\t{rep.bound[n]}\t{rep.slack[n]}\t{int(rep.holds[n])}" for n in rep.degrees]
    doc = {"passed": rep.passed, "strict": rep.strict_degrees(),
           "degrees": [{"n": n, "actual": rep.actual[n], "bound": rep.bound[n]} for n in rep.degrees]}
    _emit(out, cfg.format, rows, doc)
    return 0 if rep.passed else 1


def _cmd_poincare(cfg, out) -> int:
    from .apps import poincare_bound

    s = poincare_bound(cfg.p, cfg.n, cfg.N)
    _emit(out, cfg.format, [str(s)], {"p": cfg.p, "n": cfg.n, "N": cfg.N, "coefficients": list(s.coeffs)})
    return 0


def _cmd_vanishing(cfg, out) -> int:
    from .apps import vanishing_degrees

    rep = vanishing_degrees(cfg.p, cfg.n)
    if rep.divides:
        rows = [f"# p divides n; nonzero only in residues mod {2 * cfg.p}",
                "residue"] + [str(r) for r in rep.allowed_residues]
    else:
        rows = [f"# frobenius {rep.frobenius}", "degree\tbound_coefficient"] + [
            f"{d}\t{rep.certificate[d]}" for d in rep.degrees]
    rows.append(f"# certified {int(rep.certified)}")
    doc = {"p": rep.p, "n": rep.n, "divides": rep.divides, "frobenius": rep.frobenius,
           "degrees": rep.degrees, "allowed_residues": rep.allowed_residues, "certified": rep.certified}
    _emit(out, cfg.format, rows, doc)
    return 0 if rep.certified else 1


def _cmd_poset(cfg, out) -> int:
    from itertools import product as iproduct

    from .posetlab import E_n, adjunction_suite, l1_functoriality

    suite = adjunction_suite(3, 3, 2)
    rows = ["s\tn\tx\tcap\tchecked\tresult"]
    ok = True
    for (s, n, x, cap), rep in suite:
        rows.append(f"{s}\t{n}\t{','.join(map(str, x))}\t{cap}\t{rep.checked}\t{'pass' if rep else 'fail'}")
        ok &= bool(rep)
    orders = all(E_n(s, n).check_order() for s in range(1, 4) for n in range(4))
    funct = all(l1_functoriality(f, 2, x) for f in iproduct(range(2), repeat=3) for x in iproduct(range(3), repeat=3))
    rows.append(f"# partial orders {int(orders)}\tl1 functoriality {int(funct)}")
    ok = ok and orders and funct
    doc = {"passed": ok, "cases": len(suite), "orders": orders, "functoriality": funct}
    _emit(out, cfg.format, rows, doc)
    return 0 if ok else 1


def _cmd_selftest(cfg, out) -> int:
    from .selfcheck import run_selftest

    results = run_selftest(random.Random(cfg.seed), cfg.count)
    rows = ["check\tresult"] + [f"{name}\t{'pass' if ok else 'fail'}" for name, ok in results]
    doc = {"passed": all(ok for _, ok in results), "checks": [[name, ok] for name, ok in results]}
    _emit(out, cfg.format, rows, doc)
    return 0 if all(ok for _, ok in results) else 1


HANDLERS = {
    "hh": _cmd_hh, "gr": _cmd_gr, "pages": _cmd_pages, "check-fundamental": _cmd_fundamental,
    "bound": _cmd_bound, "poincare": _cmd_poincare, "vanishing": _cmd_vanishing,
    "poset-check": _cmd_poset, "selftest": _cmd_selftest,
}


def run(cfg: RunConfig, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        cfg.validate()
        return HANDLERS[cfg.command](cfg, out)
    except (ValidationFailure, AlgebraValidationError, InvalidParams, NotPrime, ValueError,
            KeyError, OSError) as exc:
        # SimplicialError, CutoffTooSmall and friends are ValueErrors too
        err.write(f"error: {exc}\n")
        return 2


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    cfg = RunConfig(command=args.command, algebra=args.algebra, space=args.space,
                    max_internal=args.max_internal, max_level=args.max_level, r_max=args.r_max,
                    format=args.format, seed=args.seed, p=args.p, n=args.n, N=args.N, count=args.count)
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
