"""
Command-line entry point for the Vahlen/Weyl toolkit.

    python cli.py extend --type B --rank 3
    python cli.py spinor-outer --type D --rank 4
    python cli.py check-vahlen --space v.json --matrix x.json --order --plus
    python cli.py enumerate --type A --rank 1 --max-len 3 --out a1.json
    python cli.py decompose --space w.json --isometry s.json
    python cli.py examples
"""

import argparse
import json
import logging
import sys
from typing import Any, Callable, Dict, List, Optional, Sequence

import pandas as pd
from pydantic import ValidationError

from config import (
    EXIT_MALFORMED,
    EXIT_NEGATIVE,
    EXIT_OK,
    EXTENSION_RANK_LIMIT,
    FINITE_TYPE_RANKS,
    LOG_LEVEL,
    validate_limits,
)
from services.cartan import ExtensionSpec, double_extend
from services.exactform import (
    compose_reflections,
    cartan_dieudonne,
    is_lorentzian,
    o_plus_member,
    quadratic,
    spinor_norm,
    timelike_witness,
)
from services.paravector import worked_example_A1, worked_example_A2
from services.spinor_table import full_table, spinor_outer_table
from services.vahlen import check_vahlen
from services.weyl_enumeration import enumerate_weyl
from utils.cache_utils import get_cache_stats
from utils.errors import AlgebraError, ResourceLimitError
from utils.rational import format_rational
from utils.serialization import (
    ExtensionSpecModel,
    dump_json,
    dumps,
    format_vectors,
    load_isometry,
    load_matrix,
    load_space,
    weyl_element_to_dict,
    word_labels,
)


# ===========================
# Output
# ===========================

def emit(args: argparse.Namespace, payload: Any, records: Optional[List[Dict]] = None) -> None:
    """JSON is the contract; --format text prints an aligned pandas table when rows exist."""
    out = getattr(args, "out", None)
    if out:
        dump_json(payload, out)
        logging.info(f"Wrote {out}")
        return
    if args.format == "text" and records is not None:
        print(pd.DataFrame(records).to_string(index=False) if records else "(empty)")
        return
    sys.stdout.write(dumps(payload))


def build_extension(args: argparse.Namespace) -> ExtensionSpec:
    if args.rank + 2 > EXTENSION_RANK_LIMIT and not args.unsafe_limits:
        raise ResourceLimitError(
            f"{args.type}{args.rank}++ has rank {args.rank + 2} > EXTENSION_RANK_LIMIT={EXTENSION_RANK_LIMIT}"
        )
    return double_extend(args.type, args.rank)


# ===========================
# Commands
# ===========================

def cmd_extend(args: argparse.Namespace) -> int:
    ext = build_extension(args)
    payload = ExtensionSpecModel.from_extension(ext).model_dump()
    records = [
        {"": label, **{other: entry for other, entry in zip(ext.labels, row)}}
        for label, row in zip(ext.labels, ext.cartan.entries)
    ]
    emit(args, payload, records)
    return EXIT_OK


def cmd_spinor_outer(args: argparse.Namespace) -> int:
    if args.all:
        tables = full_table()
    else:
        if args.type is None or args.rank is None:
            raise AlgebraError("spinor-outer needs --type and --rank, or --all")
        tables = [spinor_outer_table(args.type, args.rank)]
    payload: Any = [t.to_dict() for t in tables] if args.all else tables[0].to_dict()
    records = [row for t in tables for row in t.to_records()]
    emit(args, payload, records)
    return EXIT_OK


def cmd_check_vahlen(args: argparse.Namespace) -> int:
    space = load_space(args.space) if args.space else None
    A = load_matrix(args.matrix, space)
    verdict = check_vahlen(A, order=args.order, plus=args.plus, even=args.even)
    emit(args, verdict.to_dict(), [verdict.to_dict()])
    return EXIT_OK if verdict.member else EXIT_NEGATIVE


def cmd_enumerate(args: argparse.Namespace) -> int:
    ext = build_extension(args)
    elements = enumerate_weyl(ext, args.max_len, unsafe=args.unsafe_limits)
    payload = {
        "extension": ext.name,
        "max_len": args.max_len,
        "count": len(elements),
        "elements": [weyl_element_to_dict(el) for el in elements],
    }
    records = [
        {
            "word": " ".join(word_labels(ext, el.word)) or "id",
            "length": el.length,
            "lambda": format_rational(el.lam),
            "spinor_class": int(el.spinor_class),
            "o_plus": el.o_plus,
        }
        for el in elements
    ]
    emit(args, payload, records)
    return EXIT_OK


def cmd_decompose(args: argparse.Namespace) -> int:
    space = load_space(args.space)
    sigma = load_isometry(args.isometry, space)
    mirrors = cartan_dieudonne(space, sigma, verify=False)
    recomposed = compose_reflections(space, mirrors) == sigma
    if not recomposed:
        logging.warning(f"{len(mirrors)} mirrors do not recompose the isometry")
    theta = spinor_norm(space, sigma) if recomposed else None
    o_plus = o_plus_member(space, sigma, timelike_witness(space)) if is_lorentzian(space) else None
    payload = {
        "mirrors": format_vectors(mirrors),
        "count": len(mirrors),
        "recomposed": recomposed,
        "determinant": format_rational(sigma.determinant()),
        "spinor_class": None if theta is None else int(theta),
        "o_plus": o_plus,
    }
    records = [{"mirror": " ".join(format_vectors([v])[0]), "q": format_rational(quadratic(space, v))} for v in mirrors]
    emit(args, payload, records)
    return EXIT_OK if recomposed else EXIT_NEGATIVE


def cmd_examples(args: argparse.Namespace) -> int:
    reports = {"A1++": worked_example_A1(), "A2++": worked_example_A2()}
    records = [
        {"example": name, "check": check, "pass": entry["pass"], "witness": entry["witness"]}
        for name, report in reports.items()
        for check, entry in report.items()
    ]
    emit(args, reports, records)
    failed = [r for r in records if r["pass"] is False]
    return EXIT_NEGATIVE if failed else EXIT_OK


COMMANDS: Dict[str, Callable[[argparse.Namespace], int]] = {
    "extend": cmd_extend,
    "spinor-outer": cmd_spinor_outer,
    "check-vahlen": cmd_check_vahlen,
    "enumerate": cmd_enumerate,
    "decompose": cmd_decompose,
    "examples": cmd_examples,
}


# ===========================
# Parser
# ===========================

def _add_type_args(parser: argparse.ArgumentParser, required: bool = True) -> None:
    parser.add_argument("--type", choices=sorted(FINITE_TYPE_RANKS), required=required, help="finite type T")
    parser.add_argument("--rank", type=int, required=required, help="rank n of T_n")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="Exact Clifford/Vahlen realization of T_n++ Weyl groups.")
    parser.add_argument("--format", choices=["json", "text"], default="json", help="output format (default: json)")
    parser.add_argument("--unsafe-limits", action="store_true", help="lift the configured resource bounds")
    parser.add_argument("--log-level", default=None, help=f"logging level (default: {LOG_LEVEL})")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("extend", help="build the canonical double extension T_n++")
    _add_type_args(p)
    p.add_argument("--out", help="write JSON here instead of stdout")

    p = sub.add_parser("spinor-outer", help="spinor norms of the outer automorphisms")
    _add_type_args(p, required=False)
    p.add_argument("--all", action="store_true", help="every simply-laced hyperbolic extension")

    p = sub.add_parser("check-vahlen", help="Vahlen group membership of a 2x2 matrix")
    p.add_argument("--space", help="QuadSpace JSON (optional when the matrix file embeds one)")
    p.add_argument("--matrix", required=True, help="CliffMat2 JSON")
    p.add_argument("--order", action="store_true", help="integral version over the order")
    p.add_argument("--plus", action="store_true", help="require lambda = 1")
    p.add_argument("--even", action="store_true", help="require a, d even and b, c odd")

    p = sub.add_parser("enumerate", help="Weyl group elements up to a word length")
    _add_type_args(p)
    p.add_argument("--max-len", type=int, required=True)
    p.add_argument("--out", help="write JSON here instead of stdout")

    p = sub.add_parser("decompose", help="factor an isometry into reflections")
    p.add_argument("--space", required=True, help="QuadSpace JSON")
    p.add_argument("--isometry", required=True, help="Isometry JSON")

    sub.add_parser("examples", help="A1++ and A2++ paravector correspondences")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_MALFORMED if e.code else EXIT_OK

    level = (args.log_level or LOG_LEVEL).upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), stream=sys.stderr)

    ok, message = validate_limits()
    if not ok:
        logging.error(message)
        return EXIT_MALFORMED

    try:
        code = COMMANDS[args.command](args)
        logging.debug(f"Memo tables: {get_cache_stats()}")
        return code
    except AlgebraError as e:
        logging.error(f"{type(e).__name__}: {e}")
        return e.exit_code
    except (ValidationError, json.JSONDecodeError) as e:
        logging.error(f"Malformed input: {e}")
        return EXIT_MALFORMED
    except (OSError, ValueError, TypeError) as e:
        logging.error(f"Invalid input: {e}")
        return EXIT_MALFORMED


if __name__ == "__main__":
    sys.exit(main())
