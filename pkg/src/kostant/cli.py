"""Command-line front end emitting deterministic JSON documents.

Exit codes: 0 success/verdict, 1 parse error, 2 precondition error,
3 internal invariant violation.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import random
import sys
from fractions import Fraction

from .chevalley import ConsistencyError, build_algebra, standard_rep
from .linalg import charpoly, discriminant, is_prime
from .padic import FormNotPerfect, PrecisionExhausted, trace_form
from .reduction import (
    check_selfdual,
    conjugate,
    constants,
    is_topologically_nilpotent,
    newton_root_valuations,
    random_group_element,
    random_section_point,
    reduce_to_section,
    verify_certificate,
)
from .roots import (
    build_root_datum,
    build_root_system,
    catalog_datum,
    datum_to_json,
    isogeny_label,
    lambda_cocharacter,
)
from .sections import (
    SectionUnavailable,
    excluded_n,
    g_good_excluded_primes,
    invariant_system,
    invariants_chi,
    is_g_good,
    is_g_good_closed_form,
    is_n_good,
    is_n_good_closed_form,
    section_for,
    section_invert,
)

SCHEMA = "kostant/1"

PARSE_ERROR = 1
PRECONDITION_ERROR = 2
INTERNAL_ERROR = 3


class PreconditionError(ValueError):
    pass


class _ParseFailure(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _ParseFailure(message)


def _parser() -> argparse.ArgumentParser:
    top = _Parser(prog="kostant", description=__doc__)
    sub = top.add_subparsers(dest="command", required=True)

    def add_datum_args(p):
        p.add_argument("--type", required=True, help="Cartan type A..G")
        p.add_argument("--rank", type=int, required=True)
        p.add_argument("--isogeny", default="sc", help="sc, ad or gl")

    def add_family_args(p):
        p.add_argument("--family", required=True, choices=["gl", "sl", "sp"])
        p.add_argument("--n", type=int, required=True, help="family parameter")

    p = sub.add_parser("roots", parents=[], help="root datum as JSON")
    add_datum_args(p)
    p.add_argument("--extended", action="store_true")

    p = sub.add_parser("primes", help="excluded primes and goodness tables")
    add_datum_args(p)

    p = sub.add_parser("section", help="basis of the section complement")
    add_datum_args(p)

    p = sub.add_parser("nilpotent", help="topological nilpotence verdict")
    add_family_args(p)
    p.add_argument("--p", type=int, required=True)
    _add_matrix_args(p)

    p = sub.add_parser("invariants", help="adjoint-quotient invariants of a matrix")
    add_family_args(p)
    _add_matrix_args(p)

    p = sub.add_parser("reduce", help="conjugate into the section")
    add_family_args(p)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--precision", type=int, default=20)
    _add_matrix_args(p)

    p = sub.add_parser("constants", help="orbital-integral constants")
    add_datum_args(p)
    p.add_argument("--p", type=int, required=True)

    p = sub.add_parser("selfcheck", help="per-datum property sweep")
    add_datum_args(p)
    p.add_argument("--p", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=5)
    return top


def _add_matrix_args(p):
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--matrix", help="JSON array of rows; entries int or 'num/den'")
    group.add_argument("--file", help="path to a JSON matrix document")


def _parse_entry(x) -> Fraction:
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        if "/" in x:
            num, den = x.split("/")
            return Fraction(int(num), int(den))
        return Fraction(int(x))
    raise PreconditionError(f"matrix entries must be ints or 'num/den' strings, got {x!r}")


def _load_matrix(args):
    if args.matrix is not None:
        text = args.matrix
    else:
        with open(args.file, "r", encoding="utf-8") as fh:
            text = fh.read()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise _ParseFailure(f"matrix is not valid JSON: {exc}") from None
    if not isinstance(doc, list) or not all(isinstance(r, list) for r in doc):
        raise PreconditionError("matrix must be a JSON array of rows")
    return [[_parse_entry(x) for x in row] for row in doc]


def _family_datum(family: str, n: int):
    if family == "gl":
        if n < 1:
            raise PreconditionError("gl needs n >= 1")
        return catalog_datum("A", n - 1, "GL_n")
    if family == "sl":
        if n < 2:
            raise PreconditionError("sl needs n >= 2")
        return catalog_datum("A", n - 1, "simply_connected")
    if family == "sp":
        if n < 2:
            raise PreconditionError("sp needs n >= 2 (the algebra sp_2n)")
        return catalog_datum("C", n, "simply_connected")
    raise PreconditionError(f"unknown family {family!r}")


def _datum(args):
    try:
        rs = build_root_system(args.type, args.rank)
        return build_root_datum(rs, isogeny_label(args.isogeny))
    except ValueError as exc:
        raise PreconditionError(str(exc)) from None


def _frac_json(x: Fraction):
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _seeded_rng(seed: int, *tags) -> random.Random:
    h = hashlib.sha256(repr((seed,) + tags).encode()).digest()
    return random.Random(int.from_bytes(h[:8], "big"))


def _cmd_roots(args):
    doc = datum_to_json(_datum(args), extended=args.extended)
    doc["schema"] = SCHEMA
    return doc


def _cmd_primes(args):
    datum = _datum(args)
    n = excluded_n(datum)
    n_excl = sorted(p for p in range(2, n + 1) if is_prime(p) and n % p == 0)
    g_excl = g_good_excluded_primes(datum)
    for p in set(n_excl) | set(g_excl) | {2, 3, 5, 7, 11, 13}:
        if is_n_good(datum, p) != is_n_good_closed_form(datum, p):
            raise ConsistencyError("n-good classifiers disagree")
        if is_g_good(datum, p) != is_g_good_closed_form(datum, p):
            raise ConsistencyError("g-good classifiers disagree")
    return {
        "schema": SCHEMA,
        "N": n,
        "n_good_excluded": n_excl,
        "g_good_excluded": g_excl,
    }


def _cmd_section(args):
    datum = _datum(args)
    section = section_for(datum)
    return {
        "schema": SCHEMA,
        "N": section.excluded_N,
        "weights": list(section.weights),
        "xi_basis": [list(v) for v in section.xi_basis],
    }


def _rep_system(args):
    datum = _family_datum(args.family, args.n)
    algebra = build_algebra(datum)
    rep = standard_rep(algebra)
    return algebra, rep, invariant_system(rep)


def _check_shape(rep, mat):
    if len(mat) != rep.rep_dim or any(len(r) != rep.rep_dim for r in mat):
        raise PreconditionError(
            f"expected a {rep.rep_dim} x {rep.rep_dim} matrix for this family"
        )


def _cmd_nilpotent(args):
    algebra, rep, system = _rep_system(args)
    mat = _load_matrix(args)
    _check_shape(rep, mat)
    if not is_prime(args.p):
        raise PreconditionError(f"{args.p} is not prime")
    from .reduction import algebra_coordinates

    try:
        algebra_coordinates(rep, mat)
    except ValueError as exc:
        raise PreconditionError(str(exc)) from None
    verdict = is_topologically_nilpotent(system, mat, args.p)
    doc = {"schema": SCHEMA, "p": args.p, "family": args.family, "n": args.n}
    doc.update(verdict.to_json())
    return doc


def _cmd_invariants(args):
    algebra, rep, system = _rep_system(args)
    mat = _load_matrix(args)
    _check_shape(rep, mat)
    from .reduction import algebra_coordinates

    try:
        algebra_coordinates(rep, mat)
    except ValueError as exc:
        raise PreconditionError(str(exc)) from None
    values = invariants_chi(system, mat)
    return {
        "schema": SCHEMA,
        "family": args.family,
        "n": args.n,
        "degrees": list(system.degrees),
        "invariants": [_frac_json(v) for v in values],
    }


def _cmd_reduce(args):
    algebra, rep, system = _rep_system(args)
    mat = _load_matrix(args)
    _check_shape(rep, mat)
    section = section_for(algebra.datum)
    try:
        cert = reduce_to_section(rep, section, mat, args.p, args.precision)
    except ValueError as exc:
        raise PreconditionError(str(exc)) from None
    checks = verify_certificate(rep, system, cert, mat)
    if not all(checks.values()):
        raise ConsistencyError(f"certificate failed verification: {checks}")
    doc = {"schema": SCHEMA}
    doc.update(cert.to_json())
    doc["verified"] = checks
    return doc


def _cmd_constants(args):
    datum = _datum(args)
    if not is_prime(args.p):
        raise PreconditionError(f"{args.p} is not prime")
    doc = {"schema": SCHEMA}
    doc.update(constants(datum, args.p).to_json())
    return doc


def _cmd_selfcheck(args):
    datum = _datum(args)
    p = args.p
    if not is_prime(p):
        raise PreconditionError(f"{p} is not prime")
    results: dict[str, bool] = {}
    lam = lambda_cocharacter(datum)
    results["lambda_pairing"] = all(
        datum.pairing(datum.embed_root(s), lam.coordinates) == 2
        for s in _simple_roots(datum)
    )
    n = excluded_n(datum)
    results["goodness_tables"] = all(
        is_n_good(datum, q) == (n % q != 0)
        and is_g_good(datum, q) == is_g_good_closed_form(datum, q)
        for q in (2, 3, 5, 7, 11, 13)
    )
    algebra = build_algebra(datum)
    if is_g_good(datum, p):
        results["constants_codimension"] = (
            constants(datum, p).m == algebra.dim - algebra.rank
        )
    fam = _auto_family(datum)
    if fam is not None and n % p != 0:
        rep = standard_rep(algebra)
        system = invariant_system(rep)
        section = section_for(datum)
        tag = (datum.root_system.cartan_type, datum.root_system.rank, datum.isogeny)
        rng = _seeded_rng(args.seed, "invert", *tag)
        ok = True
        y = list(algebra.principal_nilpotent().coordinates)
        for _ in range(args.count):
            c = [Fraction(rng.randint(-10**6, 10**6)) for _ in range(system.count)]
            xi = section_invert(section, system, c)
            ok = ok and list(invariants_chi(system, [a + b for a, b in zip(y, xi)])) == c
        results["section_round_trip"] = ok
        rng = _seeded_rng(args.seed, "nilpotent", *tag)
        ok = True
        for _ in range(4 * args.count):
            coords = [
                Fraction(rng.randint(-9, 9)) * Fraction(p) ** rng.randint(-2, 2)
                for _ in range(algebra.dim)
            ]
            mat = rep.matrix_of(coords)
            verdict = is_topologically_nilpotent(system, mat, p)
            oracle = all(
                v > 0 for v in newton_root_valuations(charpoly(mat), p)
            )
            ok = ok and verdict.is_topologically_nilpotent == oracle
        results["nilpotence_oracle"] = ok
        if p > 2 and is_g_good(datum, p):
            rng = _seeded_rng(args.seed, "reduce", *tag)
            ok = True
            for _ in range(args.count):
                xi0 = random_section_point(section, rng, p)
                g0 = random_group_element(rep, rng, p)
                z = conjugate(rep, g0, [a + b for a, b in zip(y, xi0)])
                cert = reduce_to_section(rep, section, z, p, 20)
                mod = p**20
                ok = ok and all(
                    (a - b) % mod == 0 for a, b in zip(cert.xi, [x % mod for x in xi0])
                )
                ok = ok and all(verify_certificate(rep, system, cert, z).values())
            results["reduction_round_trip"] = ok
            try:
                form = trace_form(algebra, rep, p)
            except FormNotPerfect:
                form = None
            if form is not None:
                rng = _seeded_rng(args.seed, "selfdual", *tag)
                ok = True
                done = 0
                attempts = 0
                while done < args.count and attempts < 50 * args.count:
                    attempts += 1
                    xi0 = random_section_point(section, rng, p)
                    x = [a + b for a, b in zip(y, xi0)]
                    if discriminant(charpoly(rep.matrix_of(x))) == 0:
                        continue
                    report = check_selfdual(rep, form, x, p)
                    ok = ok and report.dual_equality and report.rank_identity
                    done += 1
                results["selfdual"] = ok and done == args.count
    passed = all(results.values())
    return {
        "schema": SCHEMA,
        "seed": args.seed,
        "p": p,
        "properties": results,
        "ok": passed,
    }


def _simple_roots(datum):
    r = datum.root_system.rank
    return [tuple(1 if j == i else 0 for j in range(r)) for i in range(r)]


def _auto_family(datum):
    from .chevalley import _family_for

    fam = _family_for(datum)
    return fam if fam in ("gl", "sl", "sp") else None


_COMMANDS = {
    "roots": _cmd_roots,
    "primes": _cmd_primes,
    "section": _cmd_section,
    "nilpotent": _cmd_nilpotent,
    "invariants": _cmd_invariants,
    "reduce": _cmd_reduce,
    "constants": _cmd_constants,
    "selfcheck": _cmd_selfcheck,
}


def run(argv) -> tuple[int, dict | None]:
    try:
        args = _parser().parse_args(argv)
    except _ParseFailure as exc:
        return PARSE_ERROR, {"schema": SCHEMA, "error": str(exc)}
    try:
        doc = _COMMANDS[args.command](args)
    except _ParseFailure as exc:
        return PARSE_ERROR, {"schema": SCHEMA, "error": str(exc)}
    except (PreconditionError, SectionUnavailable, FormNotPerfect, PrecisionExhausted) as exc:
        return PRECONDITION_ERROR, {"schema": SCHEMA, "error": str(exc)}
    except (ConsistencyError, AssertionError) as exc:
        return INTERNAL_ERROR, {"schema": SCHEMA, "error": str(exc)}
    code = 0
    if args.command == "selfcheck" and not doc.get("ok", False):
        code = INTERNAL_ERROR
    return code, doc


def main(argv=None) -> int:
    code, doc = run(sys.argv[1:] if argv is None else argv)
    if doc is not None:
        print(json.dumps(doc, sort_keys=True, separators=(",", ":")))
    return code


if __name__ == "__main__":
    sys.exit(main())
