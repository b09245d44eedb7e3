"""Command-line surface: JSON in, JSON out, scriptable exit codes.

Exit codes: 0 success / true, 1 false / refuted, 2 usage or input error,
3 subspace budget exhausted.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import __version__
from .linalg import Subspace, format_rational, parse_rational
from .datum import HblDatum, clamp_exponents, enumerate_subspaces, classify, Criticality
from .polytope import minimize_linear, polytopes_equal
from .decision import BudgetExhaustedError, compute_polytope, is_member
from .oracle import (
    PointSet,
    brute_force_constraints,
    counterexample_family,
    run_function_verification,
    run_set_verification,
    verify_set_inequality,
)
from .diophantine import (
    DiophEncoding,
    PolySystem,
    bounded_witness_search,
    encode,
    extract_solution,
    to_basic_set,
    verify_witness,
)

DEFAULT_SEED = 1729
DEFAULT_BUDGET = 10_000


class InputError(ValueError):
    pass


def _load_json(path: str):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read JSON from {path}: {exc}") from exc


def _load_datum(path: str) -> HblDatum:
    try:
        return HblDatum.from_json(_load_json(path))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(f"bad datum in {path}: {exc}") from exc


def _load_subspace(path: str) -> Subspace:
    try:
        return Subspace.from_json(_load_json(path))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(f"bad subspace in {path}: {exc}") from exc


def _parse_exponents(text: str) -> tuple[Fraction, ...]:
    parts = text.split(",")
    out = []
    for i, piece in enumerate(parts):
        try:
            out.append(parse_rational(piece))
        except ValueError as exc:
            raise InputError(f"exponent {i + 1} of {len(parts)}: {exc}") from exc
    return tuple(out)


def _parse_seed(text: str) -> int:
    if text == "random":
        import secrets

        return secrets.randbits(32)
    try:
        return int(text)
    except ValueError as exc:
        raise InputError(f"bad seed {text!r}") from exc


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, indent=2) + "\n")


def _budget(value: int) -> int | None:
    return None if value < 0 else value


def _cmd_polytope(args) -> int:
    datum = _load_datum(args.datum)
    result = compute_polytope(datum, _budget(args.budget))
    out = result.to_json()
    if args.oracle_height is not None:
        oracle = brute_force_constraints(datum, args.oracle_height)
        out["oracle_height"] = args.oracle_height
        out["oracle_agrees"] = polytopes_equal(result.polytope, oracle)
    _emit(out)
    return 0


def _cmd_member(args) -> int:
    datum = _load_datum(args.datum)
    s = _parse_exponents(args.s)
    try:
        verdict, trace = is_member(datum, s, _budget(args.budget))
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    _emit({"member": verdict, "trace": trace.to_json()})
    return 0 if verdict else 1


def _cmd_shbl(args) -> int:
    datum = _load_datum(args.datum)
    weights = (
        _parse_exponents(args.weights)
        if args.weights is not None
        else (Fraction(1),) * datum.num_maps
    )
    if len(weights) != datum.num_maps:
        raise InputError("weight count disagrees with the number of maps")
    result = compute_polytope(datum, _budget(args.budget))
    try:
        value, vertex = minimize_linear(result.polytope, weights)
    except ValueError:
        _emit({"empty": True})
        return 1
    _emit(
        {
            "value": format_rational(value),
            "argmin": [format_rational(x) for x in vertex.point],
        }
    )
    return 0


def _cmd_verify_sets(args) -> int:
    datum = _load_datum(args.datum)
    s = _parse_exponents(args.s)
    report = run_set_verification(
        datum, s, args.samples, _parse_seed(args.seed), args.box, args.max_size
    )
    _emit(report)
    return 0 if not report["violations"] else 1


def _cmd_verify_functions(args) -> int:
    datum = _load_datum(args.datum)
    s = _parse_exponents(args.s)
    report = run_function_verification(
        datum, s, args.samples, _parse_seed(args.seed), args.tol
    )
    _emit(report)
    return 0 if not report["violations"] else 1


def _cmd_counterexample(args) -> int:
    datum = _load_datum(args.datum)
    s = _parse_exponents(args.s)
    witness = _load_subspace(args.witness)
    try:
        if classify(datum, witness, s) is not Criticality.SUPERCRITICAL:
            raise InputError("witness subspace is not supercritical for these exponents")
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    for n in range(1, args.max_n + 1):
        family = counterexample_family(datum, s, witness, n)
        holds, lhs, rhs = verify_set_inequality(datum, s, family)
        if not holds:
            _emit(
                {
                    "n": n,
                    "size": len(family.points),
                    "lhs_pow": str(lhs),
                    "rhs_pow": str(rhs),
                    "points": [list(p) for p in family.points],
                }
            )
            return 0
    _emit({"refuted": False, "max_n": args.max_n})
    return 1


def _cmd_enum_subspaces(args) -> int:
    if args.d < 0 or args.n < 1:
        raise InputError("need d >= 0 and n >= 1")
    spaces = enumerate_subspaces(args.d, args.n)
    _emit({"d": args.d, "n": args.n, "subspaces": [w.to_json() for w in spaces]})
    return 0


def _cmd_dioph_encode(args) -> int:
    try:
        system = PolySystem.from_json(_load_json(args.system))
        basic = to_basic_set(system)
        a = _parse_exponents(args.a) if args.a else ()
        encoding = encode(basic, len(a), a)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(str(exc)) from exc
    out = encoding.to_json()
    out["basic"] = {
        "num_vars": basic.num_vars,
        "monomials": [list(m) for m in basic.monomials],
        "affine": [
            {"constant": const, "coeffs": [[i, c] for i, c in coeffs]}
            for const, coeffs in basic.affine
        ],
        "mults": [list(t) for t in basic.mults],
        "projection": list(basic.projection),
    }
    _emit(out)
    return 0


def _load_encoding(path: str) -> DiophEncoding:
    try:
        return DiophEncoding.from_json(_load_json(path))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(f"bad encoding in {path}: {exc}") from exc


def _cmd_dioph_verify(args) -> int:
    encoding = _load_encoding(args.encoding)
    witness = _load_subspace(args.subspace)
    try:
        verdict = verify_witness(encoding, witness)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    _emit({"verified": verdict})
    return 0 if verdict else 1


def _cmd_dioph_extract(args) -> int:
    encoding = _load_encoding(args.encoding)
    witness = _load_subspace(args.subspace)
    try:
        prefix, full = extract_solution(encoding, witness)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    _emit(
        {
            "a": [format_rational(x) for x in prefix],
            "full": [format_rational(x) for x in full],
        }
    )
    return 0


def _cmd_dioph_search(args) -> int:
    encoding = _load_encoding(args.encoding)
    if args.height < 1:
        raise InputError("height must be at least 1")
    witness = bounded_witness_search(encoding, args.height)
    _emit(
        {
            "witness": witness.to_json() if witness is not None else None,
            "complete": False,
        }
    )
    return 0 if witness is not None else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hblpoly",
        description="Exact admissible-exponent polytopes for lattice HBL data.",
    )
    parser.add_argument("--version", action="version", version=f"hblpoly {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("polytope", help="compute the exact polytope of a datum")
    p.add_argument("--datum", required=True)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--oracle-height", type=int, default=None)
    p.set_defaults(func=_cmd_polytope)

    p = sub.add_parser("member", help="decide membership of an exponent tuple")
    p.add_argument("--datum", required=True)
    p.add_argument("--s", required=True)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.set_defaults(func=_cmd_member)

    p = sub.add_parser("shbl", help="minimize a linear objective over the polytope")
    p.add_argument("--datum", required=True)
    p.add_argument("--weights", default=None)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.set_defaults(func=_cmd_shbl)

    p = sub.add_parser("verify-sets", help="randomized exact set-form verification")
    p.add_argument("--datum", required=True)
    p.add_argument("--s", required=True)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", default=str(DEFAULT_SEED))
    p.add_argument("--box", type=int, default=10)
    p.add_argument("--max-size", type=int, default=100)
    p.set_defaults(func=_cmd_verify_sets)

    p = sub.add_parser("verify-functions", help="randomized function-form verification")
    p.add_argument("--datum", required=True)
    p.add_argument("--s", required=True)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", default=str(DEFAULT_SEED))
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(func=_cmd_verify_functions)

    p = sub.add_parser("counterexample", help="grow a violating set inside a witness")
    p.add_argument("--datum", required=True)
    p.add_argument("--s", required=True)
    p.add_argument("--witness", required=True)
    p.add_argument("--max-n", type=int, default=32)
    p.set_defaults(func=_cmd_counterexample)

    p = sub.add_parser("enum-subspaces", help="prefix of the subspace enumeration")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=_cmd_enum_subspaces)

    p = sub.add_parser("dioph-encode", help="encode a polynomial-system query")
    p.add_argument("--system", required=True)
    p.add_argument("--a", default="")
    p.set_defaults(func=_cmd_dioph_encode)

    p = sub.add_parser("dioph-verify", help="check a witness against an encoding")
    p.add_argument("--encoding", required=True)
    p.add_argument("--subspace", required=True)
    p.set_defaults(func=_cmd_dioph_verify)

    p = sub.add_parser("dioph-extract", help="decode a witness into a solution")
    p.add_argument("--encoding", required=True)
    p.add_argument("--subspace", required=True)
    p.set_defaults(func=_cmd_dioph_extract)

    p = sub.add_parser("dioph-search", help="bounded-height witness search")
    p.add_argument("--encoding", required=True)
    p.add_argument("--height", type=int, required=True)
    p.set_defaults(func=_cmd_dioph_search)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BudgetExhaustedError as exc:
        payload = {"error": str(exc)}
        if exc.partial is not None:
            payload["partial"] = exc.partial.to_json()
        _emit(payload)
        return 3


if __name__ == "__main__":
    sys.exit(main())
