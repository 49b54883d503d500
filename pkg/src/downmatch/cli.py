"""Command-line front end.

Exit codes: 0 ok, 1 counterexample or failed verification, 2 bad usage or
bad input.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import sys
from typing import Any, Sequence

from . import theorems
from .family import (
    AmbientSizeError,
    Family,
    NotDownSetError,
    WeightFn,
    down_closure,
    elements,
    fmt_set,
    set_mask,
    up_closure,
)
from .formats import (
    FormatError,
    dump_family,
    family_to_json,
    pairs_from_json,
    parse_family,
    parse_weight_fn,
    weighted_matching_from_json,
)
from .matching import (
    MatchingInputError,
    QuotaError,
    matched_into,
    self_matching,
    verify_injection,
    verify_pair_matching,
    verify_weighted_matching,
    weighted_disjoint_matching,
)
from .oracles import MAX_ENUM_N, MAX_TABLE_N, CapExceeded, enumerate_down_sets, m_table

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    try:
        if path == "-":
            return sys.stdin.read()
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path!r}: {exc.strerror}") from None


def _family(path: str) -> Family:
    try:
        return parse_family(_read(path))
    except (FormatError, ValueError) as exc:
        raise UsageError(f"{path}: {exc}") from None


def _weights(path: str) -> WeightFn:
    try:
        return parse_weight_fn(_read(path))
    except (FormatError, ValueError) as exc:
        raise UsageError(f"{path}: {exc}") from None


def _pairs_doc(kind: str, n: int, pairs, **extra) -> dict:
    doc = {"kind": kind, "n": n, "pairs": [[elements(a), elements(b)] for a, b in pairs]}
    doc.update(extra)
    return doc


def _pairs_text(pairs, arrow: str) -> str:
    return "".join(f"{fmt_set(a)} {arrow} {fmt_set(b)}\n" for a, b in pairs)


# -- subcommands -------------------------------------------------------------


def cmd_match(args) -> tuple[int, str]:
    F, G = _family(args.F), _family(args.G)
    phi = matched_into(F, G)
    pairs = sorted(phi.items())
    if args.format == "text":
        return EXIT_OK, _pairs_text(pairs, "->")
    return EXIT_OK, json.dumps(_pairs_doc("injection", F.n, pairs)) + "\n"


def cmd_self_match(args) -> tuple[int, str]:
    A = _family(args.A)
    M = self_matching(A)
    odd = len(A) % 2 == 1
    note = "odd: the empty set is left unmatched" if odd else "even: every set is matched"
    if args.format == "text":
        return EXIT_OK, _pairs_text(M.pairs, "--") + f"# {note}\n"
    doc = _pairs_doc("pair-matching", A.n, M.pairs, parity="odd" if odd else "even", unmatched=[[]] if odd else [])
    return EXIT_OK, json.dumps(doc) + "\n"


def cmd_weighted_match(args) -> tuple[int, str]:
    f, g = _weights(args.f), _weights(args.g)
    p = weighted_disjoint_matching(f, g)
    entries = sorted(p.weights.items())
    if args.format == "text":
        return EXIT_OK, "".join(f"{fmt_set(x)} {fmt_set(y)} {w}\n" for (x, y), w in entries)
    doc = {"kind": "weighted-matching", "n": p.n, "entries": [[elements(x), elements(y), w] for (x, y), w in entries]}
    return EXIT_OK, json.dumps(doc) + "\n"


def _as_mask(token: Any, where: str) -> int:
    if isinstance(token, int) and not isinstance(token, bool):
        if token < 0:
            raise UsageError(f"{where}: bad set token {token!r}")
        return token
    if isinstance(token, list) and all(isinstance(e, int) and e >= 1 for e in token):
        return set_mask(token)
    raise UsageError(f"{where}: bad set token {token!r}")


def _load_matching(path: str, n_inputs: int) -> tuple[str, Any]:
    """The matching file is either a document written by this tool (with a
    "kind" key) or a bare list: triples for a weighted matching, pairs for
    a pair matching (one input) or an injection (two inputs)."""
    try:
        obj = json.loads(_read(path))
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: malformed JSON: {exc}") from None
    if isinstance(obj, dict):
        kind = obj.get("kind")
        body = obj.get("entries" if kind == "weighted-matching" else "pairs")
        if kind not in ("injection", "pair-matching", "weighted-matching") or not isinstance(body, list):
            raise UsageError(f"{path}: unknown matching kind {kind!r}")
    elif isinstance(obj, list):
        body = obj
        if body and isinstance(body[0], list) and len(body[0]) == 3:
            kind = "weighted-matching"
        else:
            kind = "pair-matching" if n_inputs == 1 else "injection"
    else:
        raise UsageError(f"{path}: matching must be a JSON object or list")
    try:
        if kind == "weighted-matching":
            out: dict[tuple[int, int], int] = {}
            for item in body:
                if not (isinstance(item, list) and len(item) == 3 and isinstance(item[2], int) and item[2] >= 0):
                    raise UsageError(f"{path}: bad weighted-matching entry {item!r}")
                key = (_as_mask(item[0], path), _as_mask(item[1], path))
                out[key] = out.get(key, 0) + item[2]
            return kind, weighted_matching_from_json([[x, y, w] for (x, y), w in out.items()])
        pairs = []
        for item in body:
            if not (isinstance(item, list) and len(item) == 2):
                raise UsageError(f"{path}: bad pair entry {item!r}")
            pairs.append([_as_mask(item[0], path), _as_mask(item[1], path)])
        return kind, pairs_from_json(pairs)
    except FormatError as exc:
        raise UsageError(f"{path}: {exc}") from None


def cmd_verify(args) -> tuple[int, str]:
    kind, m = _load_matching(args.matching, len(args.inputs))
    need = 1 if kind == "pair-matching" else 2
    if len(args.inputs) != need:
        raise UsageError(f"{kind} needs {need} input file(s), got {len(args.inputs)}")
    if kind == "weighted-matching":
        f, g = (_weights(p) for p in args.inputs)
        bad = verify_weighted_matching(m, f, g)
    elif kind == "pair-matching":
        bad = verify_pair_matching(m, _family(args.inputs[0]))
    else:
        F, G = (_family(p) for p in args.inputs)
        phi: dict[int, int] = {}
        for x, y in m:
            if x in phi:
                raise UsageError(f"{args.matching}: set {fmt_set(x)} mapped twice")
            phi[x] = y
        bad = verify_injection(phi, F, G)
    if args.format == "text":
        return (EXIT_OK, f"{kind}: ok\n") if bad is None else (EXIT_FAIL, f"{kind}: FAILED {bad}\n")
    doc = {"kind": kind, "ok": bad is None, "violation": None if bad is None else str(bad)}
    return (EXIT_OK if bad is None else EXIT_FAIL), json.dumps(doc) + "\n"


def cmd_enumerate(args) -> tuple[int, str]:
    if args.n > MAX_ENUM_N:
        raise UsageError(f"--n {args.n} exceeds the enumeration cap {MAX_ENUM_N}")
    fams = enumerate_down_sets(args.n)
    if args.format == "text":
        chunks = [f"# down-set {i}\n" + dump_family(F, "text") for i, F in enumerate(fams)]
        return EXIT_OK, "".join(chunks)
    sets = [family_to_json(F)["sets"] for F in fams]
    return EXIT_OK, json.dumps({"n": args.n, "count": len(sets), "families": sets}) + "\n"


def cmd_m_table(args) -> tuple[int, str]:
    if args.n > MAX_TABLE_N:
        raise UsageError(f"--n {args.n} exceeds the m-table cap {MAX_TABLE_N}")
    table = m_table(args.n, args.t, args.s)
    return EXIT_OK, table.to_tsv() if args.format == "text" else table.to_json() + "\n"


def _run_check(args) -> theorems.CheckReport:
    claim, n = args.claim, args.n
    if claim == "ekr":
        return theorems.check_ekr(n)
    if claim == "harris-kleitman":
        return theorems.check_harris_kleitman(n)
    if claim == "crossiu-sum":
        return theorems.check_crossiu_sum(n, args.samples, args.seed)
    if claim in ("chvatal", "chvatal-tau2"):
        return theorems.scan_chvatal(n, "full" if claim == "chvatal" else "tau2")
    if claim == "iu":
        return theorems.check_iu_bounds(n)
    if claim == "hilton":
        if args.d is None:
            return theorems.scan_hilton_range(n, samples=args.samples, seed=args.seed)
        return theorems.scan_hilton(n, args.d, args.samples, args.seed)
    if claim == "self-matching":
        return theorems.check_self_matching_theorem(n)
    if claim == "two-family-matching":
        return theorems.check_two_family_matching(n, args.samples, args.seed)
    if claim == "ts-conjectures":
        return theorems.scan_ts_conjectures(n)
    raise UsageError(f"unknown claim {claim!r}")


def cmd_check(args) -> tuple[int, str]:
    if args.d is not None and args.claim != "hilton":
        raise UsageError(f"--d only applies to hilton, not {args.claim!r}")
    report = _run_check(args)
    code = EXIT_OK if report.ok else EXIT_FAIL
    return code, (report.to_text() if args.format == "text" else report.to_json()) + "\n"


def cmd_closure(args) -> tuple[int, str]:
    F = _family(args.F)
    return EXIT_OK, dump_family(up_closure(F) if args.up else down_closure(F), args.format)


# -- parser ------------------------------------------------------------------


def _nonneg(token: str) -> int:
    try:
        v = int(token)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {token!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0: {token!r}")
    return v


def _positive(token: str) -> int:
    v = _nonneg(token)
    if v == 0:
        raise argparse.ArgumentTypeError(f"must be >= 1: {token!r}")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--out", metavar="PATH", help="write output here instead of stdout")

    parser = argparse.ArgumentParser(prog="downmatch", description="Disjointness matchings in down-sets and small extremal checks.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("match", parents=[common], help="match down-set F injectively into down-set G by disjoint sets")
    p.add_argument("F")
    p.add_argument("G")
    p.set_defaults(func=cmd_match)

    p = sub.add_parser("self-match", parents=[common], help="pair up the sets of a down-set by disjoint pairs")
    p.add_argument("A")
    p.set_defaults(func=cmd_self_match)

    p = sub.add_parser("weighted-match", parents=[common], help="weighted disjoint matching of two monotone weight functions")
    p.add_argument("f")
    p.add_argument("g")
    p.set_defaults(func=cmd_weighted_match)

    p = sub.add_parser("verify", parents=[common], help="check a matching file against its inputs")
    p.add_argument("matching")
    p.add_argument("inputs", nargs="+")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("enumerate-downsets", parents=[common], help="list every down-set of 2^[n]")
    p.add_argument("--n", type=_nonneg, required=True)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("m-table", parents=[common], help="m(n, t) and m(n, t, s) for all small parameters")
    p.add_argument("--n", type=_nonneg, required=True)
    p.add_argument("--t", type=_positive, required=True)
    p.add_argument("--s", type=_positive, default=1)
    p.set_defaults(func=cmd_m_table)

    p = sub.add_parser("check", parents=[common], help="run a bound checker")
    p.add_argument("claim", choices=sorted(theorems.CHECKERS))
    p.add_argument("--n", type=_nonneg, required=True)
    p.add_argument("--seed", type=_nonneg, default=0)
    p.add_argument("--samples", type=_positive, default=theorems.DEFAULT_SAMPLES)
    p.add_argument("--d", type=_positive, default=None, help="number of families (hilton only; default scans 2..6)")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("closure", parents=[common], help="up- or down-closure of a family")
    side = p.add_mutually_exclusive_group(required=True)
    side.add_argument("--up", action="store_true")
    side.add_argument("--down", action="store_true")
    p.add_argument("F")
    p.set_defaults(func=cmd_closure)
    return parser


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        with contextlib.redirect_stderr(stderr), contextlib.redirect_stdout(stdout):
            args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        code, text = args.func(args)
    except UsageError as exc:
        print(f"downmatch: error: {exc}", file=stderr)
        return EXIT_USAGE
    except (CapExceeded, NotDownSetError, AmbientSizeError, MatchingInputError, QuotaError, FormatError, ValueError) as exc:
        print(f"downmatch: error: {exc}", file=stderr)
        return EXIT_USAGE
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"downmatch: error: cannot write {args.out!r}: {exc.strerror}", file=stderr)
            return EXIT_USAGE
    else:
        stdout.write(text)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
