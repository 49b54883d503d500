"""Reading and writing families, weight functions and matchings.

Family text format::

    n=3
    1,2
    3
    -

one set per line as comma-separated 1-based elements, ``-`` for the empty
set.  The JSON form is ``{"n": 3, "sets": [[], [3], [1, 2]]}``.  Both are
written canonically: sets ordered by ascending mask.
"""

from __future__ import annotations

import json
from typing import Any

from .family import Family, WeightFn, elements, set_mask


class FormatError(ValueError):
    pass


def family_to_text(fam: Family) -> str:
    lines = [f"n={fam.n}"]
    for x in fam.members:
        lines.append(",".join(map(str, elements(x))) if x else "-")
    return "\n".join(lines) + "\n"


def _parse_elements(token: str, n: int, lineno: int) -> int:
    if token == "-":
        return 0
    elems = []
    for part in token.split(","):
        part = part.strip()
        try:
            e = int(part)
        except ValueError:
            raise FormatError(f"line {lineno}: bad element token {part!r}") from None
        if not 1 <= e <= n:
            raise FormatError(f"line {lineno}: element {e} outside 1..{n}")
        elems.append(e)
    return set_mask(elems)


def family_from_text(text: str) -> Family:
    lines = [ln.strip() for ln in text.splitlines()]
    body = [(k + 1, ln) for k, ln in enumerate(lines) if ln and not ln.startswith("#")]
    if not body or not body[0][1].startswith("n="):
        raise FormatError("missing header line 'n=<k>'")
    header = body[0][1]
    try:
        n = int(header[2:])
    except ValueError:
        raise FormatError(f"bad header token {header!r}") from None
    if n < 0:
        raise FormatError(f"bad header token {header!r}")
    return Family(n, (_parse_elements(ln, n, k) for k, ln in body[1:]))


def family_to_json(fam: Family) -> dict[str, Any]:
    return {"n": fam.n, "sets": [elements(x) for x in fam.members]}


def family_from_json(obj: Any) -> Family:
    if not isinstance(obj, dict) or "n" not in obj or "sets" not in obj:
        raise FormatError('family JSON needs keys "n" and "sets"')
    n = obj["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise FormatError(f"bad ground size {n!r}")
    masks = []
    for s in obj["sets"]:
        if not isinstance(s, list) or not all(isinstance(e, int) for e in s):
            raise FormatError(f"bad set token {s!r}")
        if any(not 1 <= e <= n for e in s):
            raise FormatError(f"set {s} has elements outside 1..{n}")
        masks.append(set_mask(s))
    return Family(n, masks)


def parse_family(text: str) -> Family:
    """Parse either the JSON or the line-based text form."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise FormatError(f"malformed JSON: {exc}") from None
        return family_from_json(obj)
    return family_from_text(text)


def dump_family(fam: Family, fmt: str = "json") -> str:
    if fmt == "text":
        return family_to_text(fam)
    return json.dumps(family_to_json(fam)) + "\n"


def weight_fn_to_json(w: WeightFn) -> dict[str, Any]:
    return {"n": w.n, "values": list(w.values)}


def weight_fn_from_json(obj: Any) -> WeightFn:
    """Accepts ``{"n", "values"}`` (dense, indexed by mask), ``{"n",
    "weights": [[set, value], ...]}`` (sparse), or a family (its
    characteristic function)."""
    if not isinstance(obj, dict) or "n" not in obj:
        raise FormatError('weight JSON needs key "n"')
    if "sets" in obj:
        return WeightFn.characteristic(family_from_json(obj))
    n = obj["n"]
    if not isinstance(n, int) or n < 0:
        raise FormatError(f"bad ground size {n!r}")
    try:
        if "values" in obj:
            return WeightFn(n, obj["values"])
        if "weights" in obj:
            vals = [0] * (1 << n)
            for s, v in obj["weights"]:
                if any(not 1 <= e <= n for e in s):
                    raise FormatError(f"set {s} has elements outside 1..{n}")
                vals[set_mask(s)] = v
            return WeightFn(n, vals)
    except (TypeError, ValueError) as exc:
        raise FormatError(str(exc)) from None
    raise FormatError('weight JSON needs "values", "weights" or "sets"')


def parse_weight_fn(text: str) -> WeightFn:
    stripped = text.lstrip()
    if not stripped.startswith("{"):
        return WeightFn.characteristic(family_from_text(text))
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"malformed JSON: {exc}") from None
    return weight_fn_from_json(obj)


# Matchings travel as bare JSON lists of integer masks.


def weighted_matching_to_json(p: dict[tuple[int, int], int]) -> list[list[int]]:
    return [[x, y, w] for (x, y), w in sorted(p.items()) if w]


def weighted_matching_from_json(obj: Any) -> dict[tuple[int, int], int]:
    if not isinstance(obj, list):
        raise FormatError("weighted matching must be a JSON list of triples")
    p: dict[tuple[int, int], int] = {}
    for item in obj:
        if not (isinstance(item, list) and len(item) == 3 and all(isinstance(v, int) for v in item)):
            raise FormatError(f"bad weighted-matching entry {item!r}")
        x, y, w = item
        if x < 0 or y < 0 or w < 0:
            raise FormatError(f"bad weighted-matching entry {item!r}")
        if w:
            p[(x, y)] = p.get((x, y), 0) + w
    return p


def pairs_to_json(pairs) -> list[list[int]]:
    """Pairs (a PairMatching or the items of an injection) as ``[[a, b], ...]``."""
    return [[a, b] for a, b in pairs]


def pairs_from_json(obj: Any) -> list[tuple[int, int]]:
    if not isinstance(obj, list):
        raise FormatError("pair matching must be a JSON list of pairs")
    out = []
    for item in obj:
        if not (isinstance(item, list) and len(item) == 2 and all(isinstance(v, int) for v in item)):
            raise FormatError(f"bad pair entry {item!r}")
        if item[0] < 0 or item[1] < 0:
            raise FormatError(f"bad pair entry {item!r}")
        out.append((item[0], item[1]))
    return out
