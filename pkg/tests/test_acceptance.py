"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run directly (``python3 tests/test_acceptance.py``) for just the summary
lines, or under pytest where the lines appear in the terminal summary.
"""

import random
import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from conftest import random_monotone  # noqa: E402
from downmatch.family import Family, WeightFn, down_closure, is_iu  # noqa: E402
from downmatch.matching import (  # noqa: E402
    matched_into,
    self_matching,
    verify_injection,
    verify_pair_matching,
    verify_weighted_matching,
    weighted_disjoint_matching,
)
from downmatch.oracles import (  # noqa: E402
    down_set_bits,
    flow_feasibility,
    m_value,
    max_subfamily,
    pair_relation,
)
from downmatch.theorems import (  # noqa: E402
    CONSISTENT,
    VERIFIED,
    check_chvatal,
    check_crossiu_sum,
    check_cross_ts_conjecture,
    check_hilton_sum,
    check_iu_bounds,
    check_ts_extension,
    check_ts_product,
    check_ts_split_conjecture,
    scan_chvatal,
    scan_hilton_range,
)

RESULTS: list[str] = []


def record(number: int, title: str, ok: bool, detail: str) -> None:
    RESULTS.append(f"criterion {number} [{'PASS' if ok else 'FAIL'}] {title}: {detail}")


def criterion_1():
    start = time.perf_counter()
    downs = [Family.from_bits(4, b) for b in down_set_bits(4)]
    pairs = failures = 0
    for F in downs:
        for G in downs:
            if len(F) > len(G):
                continue
            pairs += 1
            phi = matched_into(F, G)
            if verify_injection(phi, F, G) is not None or len(phi) != len(F):
                failures += 1
    elapsed = time.perf_counter() - start
    ok = failures == 0 and pairs > 0 and elapsed < 60
    return ok, f"{pairs} ordered pairs, {failures} failures, {elapsed:.1f}s (limit 60s)"


def criterion_2():
    rng = random.Random(0)
    failures = flow_disagree = 0
    count = 10_000
    for _ in range(count):
        n = rng.randint(0, 5)
        f, g = random_monotone(rng, n, 8), random_monotone(rng, n, 8)
        if f.total() > g.total():
            f, g = g, f
        p = weighted_disjoint_matching(f, g)
        failures += verify_weighted_matching(p, f, g) is not None
        flow_disagree += not flow_feasibility(f, g)
    ok = failures == 0 and flow_disagree == 0
    return ok, f"{count} monotone pairs (seed 0), {failures} condition failures, {flow_disagree} flow disagreements"


def criterion_3():
    start = time.perf_counter()
    count = failures = 0
    for bits in down_set_bits(5):
        A = Family.from_bits(5, bits)
        count += 1
        M = self_matching(A)
        bad = verify_pair_matching(M.pairs, A)
        if bad is not None or 2 * len(M) != len(A) - len(A) % 2:
            failures += 1
    elapsed = time.perf_counter() - start
    ok = count == 7581 and failures == 0 and elapsed < 300
    return ok, f"{count} down-sets, {failures} failures, {elapsed:.1f}s (limit 300s)"


def criterion_4():
    parts = []
    ok = True
    for n in (2, 3, 4):
        cube = Family.power_set(n)
        inter = max_subfamily(cube, pair_relation("intersecting", n)).optimum
        iu = max_subfamily(cube, pair_relation("iu", n))
        ok &= inter == 1 << (n - 1) and iu.optimum == 1 << (n - 2) and is_iu(iu.witness)
        parts.append(f"n={n}: intersecting {inter}, IU {iu.optimum}")
    rep = check_iu_bounds(3)
    product = rep.details["product_achieved"]
    ok &= product == 4 and rep.status == VERIFIED
    parts.append(f"cross-IU product max at n=3: {product}")
    return ok, "; ".join(parts)


def criterion_5():
    rep = check_crossiu_sum(3)
    ok = rep.status == VERIFIED and rep.counterexamples == 0 and rep.details["matching_step_failures"] == 0
    return ok, f"{rep.instance_count} cross-intersecting pairs, {rep.counterexamples} violations"


def criterion_6():
    full = scan_chvatal(4, "full")
    tau2 = scan_chvatal(4, "tau2")
    built = tau2.details["tau2_instances"]
    ok = (
        full.instance_count == 168
        and full.counterexamples == 0
        and tau2.counterexamples == 0
        and built > 0
    )
    return ok, (
        f"full: {full.instance_count} down-sets, {full.counterexamples} violations; "
        f"tau-2 decomposition: {built} instances, {tau2.counterexamples} violations"
    )


def criterion_7():
    scan = scan_hilton_range(4, (2, 3, 4, 5, 6), samples=100_000, seed=0)
    iu = max_subfamily(Family.power_set(4), pair_relation("iu", 4)).witness
    hits = []
    eq = check_hilton_sum([iu] * 5)
    hits.append(eq.achieved == eq.bound == 20)
    for d in (2, 3, 4):
        rep = check_hilton_sum([Family.power_set(4)] + [Family(4)] * (d - 1))
        hits.append(rep.achieved == rep.bound == 16)
    ok = scan.counterexamples == 0 and scan.instance_count == 100_000 and all(hits)
    return ok, (
        f"{scan.instance_count} tuples (seed 0), {scan.counterexamples} violations; "
        f"equality witnesses hit {sum(hits)}/{len(hits)}"
    )


def criterion_8():
    col1 = [m_value(n, 1) for n in range(1, 6)]
    col11 = [m_value(n, 1, 1) for n in range(2, 6)]
    ext, prod = check_ts_extension(5), check_ts_product(5)
    split, cross = check_ts_split_conjecture(4), check_cross_ts_conjecture(3)
    ok = (
        col1 == [1 << (n - 1) for n in range(1, 6)]
        and col11 == [1 << (n - 2) for n in range(2, 6)]
        and ext.status == prod.status == VERIFIED
        and split.status == cross.status == CONSISTENT
        and split.counterexamples == cross.counterexamples == 0
    )
    return ok, (
        f"m(n,1)={col1}, m(n,1,1)={col11}; lower bounds {ext.status}/{prod.status}; "
        f"conjectures {split.status}/{cross.status} ({split.instance_count}+{cross.instance_count} points)"
    )


CRITERIA = [
    (1, "two-family matching, n=4", criterion_1),
    (2, "weighted matching, random monotone pairs", criterion_2),
    (3, "self-matching, n=5", criterion_3),
    (4, "intersecting and IU extremal values", criterion_4),
    (5, "cross-intersecting sum, n=3 exhaustive", criterion_5),
    (6, "Chvatal at n=4", criterion_6),
    (7, "Hilton-type sum, n=4", criterion_7),
    (8, "m(n,t) and m(n,t,s) tables", criterion_8),
]


@pytest.mark.parametrize("number, title, fn", CRITERIA, ids=[f"criterion_{c[0]}" for c in CRITERIA])
def test_criterion(number, title, fn):
    ok, detail = fn()
    record(number, title, ok, detail)
    assert ok, detail


if __name__ == "__main__":
    failed = 0
    for number, title, fn in CRITERIA:
        ok, detail = fn()
        record(number, title, ok, detail)
        print(RESULTS[-1], flush=True)
        failed += not ok
    sys.exit(1 if failed else 0)
