"""JSON-in, JSON-out command line front end.

    wittkit chi    --ring R --in matrix.json [--N 5] [--S 1,2,3,4]
    wittkit op OP  --ring R --in x.json [--in y.json] [--n 2] [--N ..] [--S ..]
    wittkit oracle --ring R --N 4 [--checks equality,pivot] [--seed 0]

Arguments taking documents accept a file path or inline JSON.  Exit codes:
0 ok, 2 malformed input, 3 unsupported operation, 4 resource guard.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .charpoly import chi
from .errors import (
    ConfigurationError,
    MalformedInputError,
    NotSpecialUnitError,
    RingMismatchError,
    ShapeError,
    SizeGuardError,
    UnsupportedOperationError,
)
from .oracle import ALL_CHECKS, run_oracle_checks
from .rings import Ring, ring_make
from .witt import (
    TruncationSet,
    WittRep,
    frobenius,
    ghost,
    restrict,
    star,
    to_series,
    verschiebung,
    witt_add,
    witt_equals,
    witt_neg,
)

EXIT_OK, EXIT_MALFORMED, EXIT_UNSUPPORTED, EXIT_GUARD = 0, 2, 3, 4
OPS = ("add", "neg", "V", "F", "star", "restrict", "ghost", "equals")


def load_document(arg: str):
    text = arg.strip()
    if text[:1] in "{[":
        source = text
    else:
        try:
            source = Path(arg).read_text()
        except OSError as exc:
            raise MalformedInputError(f"cannot read {arg}: {exc}") from exc
    try:
        return json.loads(source)
    except json.JSONDecodeError as exc:
        raise MalformedInputError(f"invalid JSON in {arg}: {exc}") from exc


def _ring(arg: str | None, doc: dict | None = None) -> Ring:
    if arg is not None:
        return ring_make(load_document(arg))
    if isinstance(doc, dict) and "ring" in doc:
        return ring_make(doc["ring"])
    raise MalformedInputError("no ring given: pass --ring or embed 'ring' in the input")


def _truncation(args, N: int) -> TruncationSet:
    return TruncationSet.parse(args.S) if args.S else TruncationSet.full(N)


def _witt_input(doc, args, ring_arg: str | None) -> WittRep:
    if not isinstance(doc, dict):
        raise MalformedInputError("a Witt vector document must be a JSON object")
    R = _ring(ring_arg, doc)
    doc = dict(doc)
    if "N" not in doc:
        if args.N is None:
            raise MalformedInputError("precision missing: pass --N or set 'N'")
        doc["N"] = args.N
    if "S" not in doc and args.S:
        doc["S"] = list(TruncationSet.parse(args.S))
    return WittRep.from_json(doc, R)


def _witt_report(w: WittRep) -> dict:
    series = to_series(w)
    return {
        "coords": w.to_json(),
        "series": series.to_json(),
        "display": series.format(),
        "ghost": ghost(w).to_json(),
    }


def cmd_chi(args) -> dict:
    doc = load_document(args.inputs[0])
    R = _ring(args.ring, doc if isinstance(doc, dict) else None)
    matrix_doc = doc.get("matrix") if isinstance(doc, dict) else doc
    if not isinstance(matrix_doc, list) or not matrix_doc:
        raise MalformedInputError("expected a square matrix as a nested array")
    f = []
    for row in matrix_doc:
        if not isinstance(row, list) or len(row) != len(matrix_doc):
            raise MalformedInputError("expected a square matrix as a nested array")
        f.append(tuple(R.element_from_json(x) for x in row))
    N = args.N if args.N is not None else (doc.get("N", 5) if isinstance(doc, dict) else 5)
    S = _truncation(args, N)
    return _witt_report(chi(R, tuple(f), N, S))


def cmd_op(args) -> dict:
    docs = [load_document(a) for a in args.inputs]
    need = 2 if args.op in ("add", "star", "equals") else 1
    if len(docs) != need:
        raise MalformedInputError(f"op {args.op} needs {need} --in document(s)")
    ring_args = [args.ring, args.ring]
    if args.op == "star":
        # the second operand may live over another ring
        ring_args[1] = args.ring2 or (None if "ring" in docs[1] else args.ring)
    xs = [_witt_input(d, args, r) for d, r in zip(docs, ring_args)]
    x = xs[0]
    if args.op in ("V", "F") and args.n is None:
        raise MalformedInputError(f"op {args.op} needs --n")
    if args.op == "add":
        return _witt_report(witt_add(*xs))
    if args.op == "neg":
        return _witt_report(witt_neg(x))
    if args.op == "V":
        N = args.target_N if args.target_N is not None else x.N
        S = TruncationSet.parse(args.target_S) if args.target_S else None
        return _witt_report(verschiebung(args.n, x, S, N))
    if args.op == "F":
        return _witt_report(frobenius(args.n, x))
    if args.op == "star":
        return _witt_report(star(*xs))
    if args.op == "restrict":
        if not args.target_S:
            raise MalformedInputError("restrict needs --to-S")
        return _witt_report(restrict(x, TruncationSet.parse(args.target_S)))
    if args.op == "ghost":
        return {"ghost": ghost(x).to_json()}
    if args.op == "equals":
        return {"verdict": witt_equals(*xs).value}
    raise UnsupportedOperationError(f"unknown op {args.op}")


def cmd_oracle(args) -> dict:
    R = _ring(args.ring)
    if args.N is None:
        raise MalformedInputError("oracle needs --N")
    checks = ALL_CHECKS if args.checks in (None, "all") else tuple(
        c.strip() for c in args.checks.split(",") if c.strip()
    )
    S = TruncationSet.parse(args.S) if args.S else None
    return run_oracle_checks(R, args.N, checks, seed=args.seed, samples=args.samples, S=S)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wittkit", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--ring", help="ring descriptor (path or inline JSON)")
    common.add_argument("--in", dest="inputs", action="append", default=[], help="input document")
    common.add_argument("--N", type=int, help="precision")
    common.add_argument("--S", help="truncation set, comma separated")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", help="output path (default stdout)")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("chi", parents=[common], help="characteristic element of a matrix")

    op = sub.add_parser("op", parents=[common], help="Witt vector operation")
    op.add_argument("op", choices=OPS)
    op.add_argument("--n", type=int, help="index for V and F")
    op.add_argument("--ring2", help="ring of the second star operand")
    op.add_argument("--to-S", dest="target_S", help="target truncation set for V and restrict")
    op.add_argument("--to-N", dest="target_N", type=int, help="target precision for V")

    oracle = sub.add_parser("oracle", parents=[common], help="brute-force consistency checks")
    oracle.add_argument("--checks", default="all", help=f"comma separated subset of {','.join(ALL_CHECKS)}")
    oracle.add_argument("--samples", type=int, default=50)
    return parser


COMMANDS = {"chi": cmd_chi, "op": cmd_op, "oracle": cmd_oracle}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "chi" and not args.inputs:
        print("wittkit: chi needs --in", file=sys.stderr)
        return EXIT_MALFORMED
    try:
        result = COMMANDS[args.command](args)
    except SizeGuardError as exc:
        print(f"wittkit: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except UnsupportedOperationError as exc:
        print(f"wittkit: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except (
        MalformedInputError,
        ConfigurationError,
        RingMismatchError,
        ShapeError,
        NotSpecialUnitError,
    ) as exc:
        print(f"wittkit: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    text = json.dumps(result, sort_keys=True, indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
