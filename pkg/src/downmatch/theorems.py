"""Checkers for the extremal bounds: each one scans an instance space
(exhaustively or by seeded sampling), or replays a constructive argument,
and returns a :class:`CheckReport`.

Inequalities are tallied as ``lhs <= rhs`` per instance.  A report's bound
and achieved value come from the tightest instance (smallest rhs - lhs, then
largest rhs, then earliest); a failing instance becomes the witness instead.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Any, Callable, Iterable, Sequence

from .family import (
    Family,
    NotDownSetError,
    complement_family,
    covering_number,
    down_closure,
    down_closure_bits,
    full_bits,
    is_cross_intersecting,
    is_cross_iu,
    is_cross_ts,
    is_down_set,
    is_intersecting,
    is_iu,
    link_and_deletion,
    max_degree,
    minimum_covers,
    popcount,
    same_n,
    up_closure,
    up_closure_bits,
)
from .formats import family_from_json, family_to_json
from .matching import (
    matched_into,
    self_matching,
    verify_injection,
    verify_pair_matching,
)
from .oracles import (
    CapExceeded,
    compatible_subfamilies,
    down_set_bits,
    kneser_bipartite,
    m_value,
    max_bipartite_matching,
    max_subfamily,
    pair_relation,
)

SCHEMA = "downmatch.report/1"
VERIFIED = "verified"
COUNTEREXAMPLE = "counterexample"
CONSISTENT = "conjecture-consistent"

DEFAULT_SAMPLES = 100_000

CONJECTURES = {"ts-split", "cross-ts-product", "ts-conjectures"}


@dataclass
class CheckReport:
    claim_id: str
    instance_count: int
    bound: int
    achieved: int
    status: str
    witness: dict | None = None
    counterexamples: int = 0
    seed: int | None = None
    unit: str = "instances"
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.status == COUNTEREXAMPLE and self.witness is None:
            raise ValueError("a counterexample report needs a witness")
        if self.status == VERIFIED and self.achieved > self.bound:
            raise ValueError("verified report with achieved > bound")

    @property
    def ok(self) -> bool:
        return self.status != COUNTEREXAMPLE

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA,
            "claim_id": self.claim_id,
            "status": self.status,
            "instance_count": self.instance_count,
            "unit": self.unit,
            "counterexamples": self.counterexamples,
            "bound": self.bound,
            "achieved": self.achieved,
            "seed": self.seed,
            "witness": self.witness,
            "details": self.details,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), default=str)

    def to_text(self) -> str:
        line = (
            f"{self.claim_id}: {self.instance_count} {self.unit}, "
            f"{self.counterexamples} counterexamples; "
            f"bound {self.bound} achieved {self.achieved} {self.status}"
        )
        if self.seed is not None:
            line += f" (seed {self.seed})"
        return line


def _status(claim_id: str, failures: int) -> str:
    if failures:
        return COUNTEREXAMPLE
    return CONSISTENT if claim_id in CONJECTURES else VERIFIED


def _witness(**parts: Any) -> dict:
    out = {}
    for key, val in parts.items():
        out[key] = family_to_json(val) if isinstance(val, Family) else val
    return out


class Tally:
    """Running summary of ``lhs <= rhs`` checks over an ordered instance
    stream.  ``merge`` is associative and commutative, so partial tallies
    from parallel workers combine to the same result."""

    def __init__(self, claim_id: str):
        self.claim_id = claim_id
        self.count = 0
        self.failures = 0
        self.tight: tuple | None = None  # (slack, -rhs, index, lhs, rhs, witness thunk)
        self.first_bad: tuple | None = None  # (index, lhs, rhs, witness thunk)

    def add(self, index: int, lhs: int, rhs: int, witness: Callable[[], dict]) -> bool:
        self.count += 1
        slack = rhs - lhs
        if slack < 0:
            self.failures += 1
            if self.first_bad is None or index < self.first_bad[0]:
                self.first_bad = (index, lhs, rhs, witness)
            return False
        key = (slack, -rhs, index)
        if self.tight is None or key < self.tight[:3]:
            self.tight = (*key, lhs, rhs, witness)
        return True

    def fail(self, index: int, witness: Callable[[], dict], lhs: int = 1, rhs: int = 0) -> None:
        self.add(index, lhs, rhs, witness)

    def merge(self, other: Tally) -> Tally:
        out = Tally(self.claim_id)
        out.count = self.count + other.count
        out.failures = self.failures + other.failures
        tights = [t for t in (self.tight, other.tight) if t is not None]
        out.tight = min(tights, key=lambda t: t[:3]) if tights else None
        bads = [b for b in (self.first_bad, other.first_bad) if b is not None]
        out.first_bad = min(bads, key=lambda b: b[0]) if bads else None
        return out

    def report(self, seed: int | None = None, unit: str = "instances", details: dict | None = None) -> CheckReport:
        if self.first_bad is not None:
            _, lhs, rhs, thunk = self.first_bad
        elif self.tight is not None:
            lhs, rhs, thunk = self.tight[3:]
        else:
            lhs, rhs, thunk = 0, 0, None
        return CheckReport(
            claim_id=self.claim_id,
            instance_count=self.count,
            bound=rhs,
            achieved=lhs,
            status=_status(self.claim_id, self.failures),
            witness=thunk() if thunk else None,
            counterexamples=self.failures,
            seed=seed,
            unit=unit,
            details=details or {},
        )


# -- helpers over dense bitsets ----------------------------------------------


def _compat_bits(n: int, rel: Callable[[int, int], bool]) -> list[int]:
    """compat[a] = dense bitset of the sets b with rel(a, b)."""
    size = 1 << n
    return [sum(1 << b for b in range(size) if rel(a, b)) for a in range(size)]


def _partner_table(n: int, compat: Sequence[int]) -> list[int]:
    """For every family F (as a dense bitset), the largest G with every
    (A in F, B in G) related: C(F) = AND of compat[A] over A in F."""
    total = 1 << (1 << n)
    table = [0] * total
    table[0] = full_bits(n)
    for fb in range(1, total):
        low = fb & -fb
        table[fb] = table[fb ^ low] & compat[low.bit_length() - 1]
    return table


def _submasks(mask: int) -> Iterable[int]:
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def _fam(n: int, bits: int) -> Family:
    return Family.from_bits(n, bits)


@lru_cache(maxsize=None)
def _matching_cached(n: int, small: int, big: int) -> dict[int, int]:
    return matched_into(_fam(n, small), _fam(n, big))


def _matching_step_ok(n: int, fb: int, gb: int) -> bool:
    """Replays the matching argument for cross-intersecting F, G: match the
    smaller closure into the larger and confirm no matched pair has one end
    in F and the other in G."""
    fd, gd = down_closure_bits(n, fb), down_closure_bits(n, gb)
    if popcount(fd) > popcount(gd):
        fd, gd, fb, gb = gd, fd, gb, fb
    phi = _matching_cached(n, fd, gd)
    return not any(fb >> x & 1 and gb >> y & 1 for x, y in phi.items())


# -- Erdos-Ko-Rado and Harris-Kleitman ---------------------------------------


def check_ekr(n: int) -> CheckReport:
    """Intersecting families in 2^[n] have at most 2^(n-1) members, and
    every maximal one reaches that size."""
    if not 1 <= n <= 4:
        raise CapExceeded("check_ekr supports 1 <= n <= 4")
    bound = 1 << (n - 1)
    cube = Family.power_set(n)
    rel = pair_relation("intersecting", n)
    best = max_subfamily(cube, rel)
    if not is_intersecting(best.witness) or len(best.witness) != best.optimum:
        raise AssertionError("oracle returned an invalid witness")

    tally = Tally("ekr")
    tally.add(0, best.optimum, bound, lambda: _witness(F=best.witness))
    nonempty = [x for x in cube.members if x]
    families = 0
    short_maximal = 0
    for idx, sub in enumerate(compatible_subfamilies(cube, rel), start=1):
        families += 1
        subset = set(sub)
        if any(x not in subset and all(x & y for y in sub) for x in nonempty):
            continue
        if len(sub) != bound:
            short_maximal += 1
            tally.fail(idx, lambda sub=sub: _witness(F=Family(n, sub), note="maximal but short"), len(sub), bound)
    if best.optimum < bound:
        tally.fail(0, lambda: _witness(F=best.witness, note="optimum below 2^(n-1)"), best.optimum, bound)
    report = tally.report(details={"intersecting_families": families, "short_maximal": short_maximal})
    report.instance_count = families
    report.unit = "intersecting families"
    report.bound, report.achieved = bound, best.optimum
    if report.ok:
        report.witness = _witness(F=best.witness)
    return report


def _up_down_pairs(n: int) -> tuple[list[int], list[int]]:
    downs = list(down_set_bits(n))
    ups = [complement_family(_fam(n, b)).bits for b in downs]
    return ups, downs


def check_harris_kleitman(n: int) -> CheckReport:
    """2^n |A & B| <= |A| |B| for every up-set A and down-set B."""
    if not 0 <= n <= 4:
        raise CapExceeded("check_harris_kleitman supports n <= 4")
    ups, downs = _up_down_pairs(n)
    tally = Tally("harris-kleitman")
    idx = 0
    for a in ups:
        for b in downs:
            lhs = popcount(a & b) << n
            rhs = popcount(a) * popcount(b)
            tally.add(idx, lhs, rhs, lambda a=a, b=b: _witness(A=_fam(n, a), B=_fam(n, b)))
            idx += 1
    return tally.report(unit="pairs")


# -- cross-intersecting sums -------------------------------------------------


def check_crossiu_sum(n: int, samples: int = DEFAULT_SAMPLES, seed: int = 0) -> CheckReport:
    """|F| + |G| <= max(|F down|, |G down|) for cross-intersecting F, G.

    Exhaustive over all pairs for n <= 3.  For n = 4 every pair of
    down-sets (the possible closures) gets a disjointness matching, and
    ``samples`` random cross-intersecting pairs are checked.  Each checked
    pair also replays the matching argument.
    """
    if not 0 <= n <= 4:
        raise CapExceeded("check_crossiu_sum supports n <= 4")
    compat = _compat_bits(n, lambda a, b: a & b != 0)
    tally = Tally("crossiu-sum")
    step_failures = 0

    def one(idx: int, fb: int, gb: int) -> None:
        nonlocal step_failures
        lhs = popcount(fb) + popcount(gb)
        rhs = max(popcount(down_closure_bits(n, fb)), popcount(down_closure_bits(n, gb)))
        thunk = lambda: _witness(F=_fam(n, fb), G=_fam(n, gb))
        tally.add(idx, lhs, rhs, thunk)
        if not _matching_step_ok(n, fb, gb):
            step_failures += 1
            tally.fail(idx, lambda: _witness(F=_fam(n, fb), G=_fam(n, gb), note="matching step"))

    details: dict[str, Any] = {}
    if n <= 3:
        table = _partner_table(n, compat)
        idx = 0
        for fb in range(len(table)):
            for gb in _submasks(table[fb]):
                one(idx, fb, gb)
                idx += 1
        report = tally.report(unit="cross-intersecting pairs", details=details)
    else:
        downs = list(down_set_bits(n))
        closure_pairs = 0
        for d1 in downs:
            for d2 in downs:
                if popcount(d1) <= popcount(d2):
                    phi = _matching_cached(n, d1, d2)
                    closure_pairs += 1
                    if verify_injection(phi, _fam(n, d1), _fam(n, d2)) is not None:
                        tally.fail(-1, lambda d1=d1, d2=d2: _witness(F=_fam(n, d1), G=_fam(n, d2), note="closure matching"))
        details["closure_pairs"] = closure_pairs
        rng = random.Random(seed)
        size = 1 << n
        for idx in range(samples):
            pf = rng.random()
            fb = sum(1 << x for x in range(size) if rng.random() < pf)
            cb = full_bits(n)
            for x in range(size):
                if fb >> x & 1:
                    cb &= compat[x]
            pg = rng.random()
            gb = sum(1 << x for x in range(size) if cb >> x & 1 and rng.random() < pg)
            one(idx, fb, gb)
        report = tally.report(seed=seed, unit="cross-intersecting pairs", details=details)
    report.details["matching_step_failures"] = step_failures
    return report


# -- Chvatal -----------------------------------------------------------------


def _split_by_cover(fam: Family, x: int, y: int) -> tuple[Family, Family, Family]:
    """(F_x, F_y, F_xy) for a cover {x, y} given as 0-based bits."""
    bx, by = 1 << x, 1 << y
    both = bx | by
    fx = Family(fam.n, (s ^ bx for s in fam.members if s & both == bx))
    fy = Family(fam.n, (s ^ by for s in fam.members if s & both == by))
    fxy = Family(fam.n, (s ^ both for s in fam.members if s & both == both))
    return fx, fy, fxy


def _tau2_failure(D: Family, F: Family, delta: int) -> str | None:
    """Replay the covering-number-2 argument on one instance; the name of
    the first step that fails, or None."""
    cover = minimum_covers(F)[0]
    x, y = [i for i in range(F.n) if cover >> i & 1]
    fx, fy, fxy = _split_by_cover(F, x, y)
    gx, gy, gxy = _split_by_cover(D, x, y)
    if len(F) != len(fx) + len(fy) + len(fxy):
        return "cover split"
    dx, _ = link_and_deletion(D, x + 1)
    dy, _ = link_and_deletion(D, y + 1)
    if len(dx) != len(gx) + len(gxy) or len(dy) != len(gy) + len(gxy):
        return "degree split"
    if not fxy <= gxy:
        return "F_xy inside G_xy"
    if not is_cross_intersecting(fx, fy):
        return "F_x, F_y cross-intersecting"
    cx, cy = down_closure(fx), down_closure(fy)
    if not (cx <= gx and cy <= gy):
        return "closures inside G_x, G_y"
    if len(fx) + len(fy) > max(len(cx), len(cy)):
        return "cross-intersecting sum"
    if not _matching_step_ok(F.n, fx.bits, fy.bits):
        return "matching step"
    if len(fx) + len(fy) > max(len(gx), len(gy)):
        return "sum against link sizes"
    if len(F) > delta:
        return "degree bound"
    return None


def check_chvatal(D: Family, mode: str = "full") -> CheckReport:
    """Intersecting subfamilies of a down-set D against its maximum degree.

    ``full``: the largest intersecting subfamily (exact search) has at most
    max_degree(D) members.  ``tau2``: every intersecting subfamily with
    covering number 2 is decomposed along a 2-cover and each step of the
    argument is re-checked.
    """
    if not is_down_set(D):
        raise NotDownSetError("D is not a down-set")
    delta = max_degree(D)
    if mode == "full":
        best = max_subfamily(D, pair_relation("intersecting", D.n))
        tally = Tally("chvatal")
        tally.add(0, best.optimum, delta, lambda: _witness(D=D, F=best.witness))
        return tally.report()
    if mode != "tau2":
        raise ValueError(f"unknown mode {mode!r}")
    tally = Tally("chvatal-tau2")
    families = 0
    for idx, sub in enumerate(compatible_subfamilies(D, pair_relation("intersecting", D.n))):
        families += 1
        F = Family(D.n, sub)
        if covering_number(F) != 2:
            continue
        step = _tau2_failure(D, F, delta)
        if step is None:
            tally.add(idx, len(F), delta, lambda F=F: _witness(D=D, F=F))
        else:
            tally.fail(idx, lambda F=F, step=step: _witness(D=D, F=F, step=step))
    return tally.report(unit="tau-2 families", details={"intersecting_families": families})


def scan_chvatal(n: int, mode: str = "full") -> CheckReport:
    """check_chvatal over every down-set of 2^[n]."""
    if not 0 <= n <= 5:
        raise CapExceeded("scan_chvatal supports n <= 5")
    if mode == "tau2" and n > 4:
        raise CapExceeded("tau2 scans enumerate all intersecting subfamilies; n <= 4")
    claim = "chvatal" if mode == "full" else "chvatal-tau2"
    tally = Tally(claim)
    constructed = 0
    for idx, bits in enumerate(down_set_bits(n)):
        D = _fam(n, bits)
        rep = check_chvatal(D, mode)
        constructed += rep.instance_count
        thunk = lambda rep=rep: rep.witness or _witness(D=D)
        if rep.status == COUNTEREXAMPLE:
            tally.fail(idx, thunk, rep.achieved, rep.bound)
        else:
            tally.add(idx, rep.achieved, rep.bound, thunk)
    details = {"tau2_instances": constructed} if mode == "tau2" else {}
    return tally.report(unit="down-sets", details=details)


# -- IU families -------------------------------------------------------------


@dataclass(frozen=True)
class RatioTrace:
    """Densities (size / 2^n) of A, B and their up- and down-closures."""

    alpha: Fraction
    beta: Fraction
    alpha_up: Fraction
    alpha_down: Fraction
    beta_up: Fraction
    beta_down: Fraction

    def chain(self) -> dict[str, bool]:
        q = Fraction(1, 4)
        return {
            "alpha <= alpha_up*alpha_down": self.alpha <= self.alpha_up * self.alpha_down,
            "beta <= beta_up*beta_down": self.beta <= self.beta_up * self.beta_down,
            "alpha_up*beta_up <= 1/4": self.alpha_up * self.beta_up <= q,
            "alpha_down*beta_down <= 1/4": self.alpha_down * self.beta_down <= q,
            "alpha*beta <= 1/16": self.alpha * self.beta
            <= (self.alpha_up * self.beta_up) * (self.alpha_down * self.beta_down)
            <= q * q,
        }

    def holds(self) -> bool:
        return all(self.chain().values())

    def to_dict(self) -> dict[str, str]:
        return {k: str(getattr(self, k)) for k in ("alpha", "beta", "alpha_up", "alpha_down", "beta_up", "beta_down")}


def ratio_trace(A: Family, B: Family) -> RatioTrace:
    n = same_n(A, B)
    d = Fraction(1, 1 << n)
    return RatioTrace(
        len(A) * d,
        len(B) * d,
        len(up_closure(A)) * d,
        len(down_closure(A)) * d,
        len(up_closure(B)) * d,
        len(down_closure(B)) * d,
    )


def check_iu_bounds(n: int) -> CheckReport:
    """IU families have at most 2^(n-2) members, and cross-IU pairs have
    |A| |B| <= 2^(2n-4).  Both maxima are computed exactly; the product
    scan takes each A with its largest cross-IU partner and also checks
    the density chain on every such pair."""
    if not 0 <= n <= 4:
        raise CapExceeded("check_iu_bounds supports n <= 4")
    if n < 2:
        return CheckReport("iu", 0, 0, 0, VERIFIED, details={"note": "trivial for n < 2"})
    cube = Family.power_set(n)
    rel = pair_relation("iu", n)
    single_bound = 1 << (n - 2)
    best = max_subfamily(cube, rel)
    if not is_iu(best.witness):
        raise AssertionError("oracle returned a non-IU witness")

    product_bound = 1 << (2 * n - 4)
    table = _partner_table(n, _compat_bits(n, rel))
    product_tally = Tally("iu-product")
    chain_failures = 0
    dn = lambda b: popcount(down_closure_bits(n, b))
    up = lambda b: popcount(up_closure_bits(n, b))
    for ab in range(len(table)):
        bb = table[ab]
        pa, pb = popcount(ab), popcount(bb)
        product_tally.add(ab, pa * pb, product_bound, lambda ab=ab, bb=bb: _witness(A=_fam(n, ab), B=_fam(n, bb)))
        if pa and pb:
            # density chain in integers: |A| 2^n <= |A up| |A down|, etc.
            ok = (
                pa << n <= up(ab) * dn(ab)
                and pb << n <= up(bb) * dn(bb)
                and up(ab) + up(bb) <= 1 << n
                and dn(ab) + dn(bb) <= 1 << n
            )
            chain_failures += not ok

    prod = product_tally.report()
    wA = family_from_json(prod.witness["A"])
    wB = family_from_json(prod.witness["B"])
    if not is_cross_iu(wA, wB):
        raise AssertionError("product witness is not cross-IU")
    trace = ratio_trace(wA, wB)

    failures = prod.counterexamples + chain_failures
    failures += best.optimum != single_bound
    failures += prod.achieved != product_bound
    status = COUNTEREXAMPLE if failures else VERIFIED
    witness = _witness(F=best.witness, A=wA, B=wB)
    return CheckReport(
        claim_id="iu",
        instance_count=prod.instance_count,
        bound=single_bound,
        achieved=best.optimum,
        status=status,
        witness=witness,
        counterexamples=failures,
        unit="families A with maximal cross-IU partner",
        details={
            "product_bound": product_bound,
            "product_achieved": prod.achieved,
            "product_violations": prod.counterexamples,
            "chain_failures": chain_failures,
            "ratio_trace": trace.to_dict(),
            "ratio_chain": trace.chain(),
        },
    )


# -- Hilton-type sums --------------------------------------------------------


def lemma_grid_holds(d_max: int = 12, steps: int = 24) -> bool:
    """x + d/x <= 1 + d for d in 1..d_max and x on a rational grid in [1, d]."""
    for d in range(1, d_max + 1):
        for k in range(steps + 1):
            x = 1 + Fraction((d - 1) * k, steps)
            if x + d / x > 1 + d:
                return False
    return True


def hilton_bound(n: int, d: int) -> int:
    return max(1 << n, d << n >> 2)


def _hilton_shape(families: Sequence[Family]) -> dict:
    n = families[0].n
    return {
        "d": len(families),
        "all_equal": all(f == families[0] for f in families),
        "has_power_set": any(len(f) == 1 << n for f in families),
        "sizes": [len(f) for f in families],
    }


def check_hilton_sum(families: Sequence[Family]) -> CheckReport:
    """sum |A_i| <= max(2^n, d 2^(n-2)) for pairwise cross-IU A_1..A_d, and
    |A| + 3|B| <= 2^n when d = 2 and |A| >= |B|.  Equality is recorded with
    a description of the tuple, not classified."""
    d = len(families)
    if d < 2:
        raise ValueError("need at least two families")
    n = families[0].n
    for f in families:
        same_n(families[0], f)
    for i in range(d):
        for j in range(i + 1, d):
            if not is_cross_iu(families[i], families[j]):
                raise ValueError(f"families {i + 1} and {j + 1} are not cross-IU")
    total = sum(len(f) for f in families)
    bound = hilton_bound(n, d)
    failures = total > bound
    details: dict[str, Any] = {"equality": total == bound, "shape": _hilton_shape(families)}
    if d == 2:
        big, small = sorted(families, key=len, reverse=True)
        lhs = len(big) + 3 * len(small)
        details["a_plus_3b"] = {"lhs": lhs, "rhs": 1 << n}
        failures += lhs > 1 << n
    return CheckReport(
        "hilton",
        1,
        bound,
        total,
        COUNTEREXAMPLE if failures else VERIFIED,
        witness=_witness(families=[family_to_json(f) for f in families]),
        counterexamples=int(failures),
        details=details,
    )


def _random_cross_iu_tuple(rng: random.Random, n: int, d: int, compat: Sequence[int]) -> list[int]:
    """Greedy random pairwise cross-IU d-tuple (dense bitsets).  A set joins
    family i only if it is IU-compatible with every member of every other
    family."""
    size = 1 << n
    fams = [0] * d
    pick = [rng.random() for _ in range(d)]
    keep = rng.random()
    order = list(range(size))
    rng.shuffle(order)
    slots = list(range(d))
    for s in order:
        if rng.random() > keep:
            continue
        rng.shuffle(slots)
        for i in slots:
            if rng.random() >= pick[i]:
                continue
            if all(fams[j] & ~compat[s] == 0 for j in range(d) if j != i):
                fams[i] |= 1 << s
    return fams


def scan_hilton(n: int, d: int, samples: int = DEFAULT_SAMPLES, seed: int = 0) -> CheckReport:
    """The Hilton-type sum bound over pairwise cross-IU d-tuples: every
    ordered tuple when n <= 3 and d <= 3, else ``samples`` seeded random
    tuples.  The d = 2 companion bound and the rational lemma
    x + d/x <= 1 + d are checked alongside."""
    if d < 2:
        raise ValueError("need d >= 2")
    if not 1 <= n <= 6:
        raise CapExceeded("scan_hilton supports 1 <= n <= 6")
    compat = _compat_bits(n, pair_relation("iu", n))
    bound = hilton_bound(n, d)
    tally = Tally("hilton")
    pair = Tally("hilton-pair")
    equality_shapes: dict[str, int] = {}

    def one(idx: int, fams: Sequence[int]) -> None:
        sizes = [popcount(b) for b in fams]
        total = sum(sizes)
        thunk = lambda: _witness(families=[family_to_json(_fam(n, b)) for b in fams])
        tally.add(idx, total, bound, thunk)
        if total == bound:
            shape = _hilton_shape([_fam(n, b) for b in fams])
            key = "all_equal" if shape["all_equal"] else "has_power_set" if shape["has_power_set"] else "other"
            equality_shapes[key] = equality_shapes.get(key, 0) + 1
        if d == 2:
            big, small = sorted(sizes, reverse=True)
            pair.add(idx, big + 3 * small, 1 << n, thunk)

    exhaustive = n <= 3 and d <= 3
    if exhaustive:
        table = _partner_table(n, compat)
        idx = 0

        def rec(prefix: list[int], allowed: int) -> None:
            nonlocal idx
            if len(prefix) == d:
                one(idx, prefix)
                idx += 1
                return
            space = full_bits(n) if not prefix else allowed
            for b in _submasks(space):
                rec(prefix + [b], allowed & table[b] if prefix else table[b])

        rec([], full_bits(n))
    else:
        rng = random.Random(seed)
        for idx in range(samples):
            one(idx, _random_cross_iu_tuple(rng, n, d, compat))

    report = tally.report(seed=None if exhaustive else seed, unit="tuples")
    lemma_ok = lemma_grid_holds()
    report.details = {
        "d": d,
        "mode": "exhaustive" if exhaustive else "sampled",
        "equality_hits": equality_shapes,
        "lemma_grid": lemma_ok,
    }
    if d == 2:
        e = pair.report()
        report.details["a_plus_3b"] = {"violations": e.counterexamples, "bound": e.bound, "achieved": e.achieved}
        report.counterexamples += e.counterexamples
        if e.counterexamples and report.status != COUNTEREXAMPLE:
            report.status, report.witness = COUNTEREXAMPLE, e.witness
    if not lemma_ok:
        report.counterexamples += 1
        report.status = COUNTEREXAMPLE
        report.witness = report.witness or {"note": "lemma grid"}
    return report


def scan_hilton_range(n: int, ds: Sequence[int] = (2, 3, 4, 5, 6), samples: int = DEFAULT_SAMPLES, seed: int = 0) -> CheckReport:
    """scan_hilton for each d in ``ds``, sharing ``samples`` evenly (the
    remainder goes to the first values of d).  Every d uses the same seed."""
    if not ds:
        raise ValueError("need at least one d")
    share, extra = divmod(samples, len(ds))
    parts = [scan_hilton(n, d, share + (k < extra), seed) for k, d in enumerate(ds)]
    failures = sum(r.counterexamples for r in parts)
    lead = next((r for r in parts if r.status == COUNTEREXAMPLE), None)
    if lead is None:
        lead = min(parts, key=lambda r: (r.bound - r.achieved, -r.bound))
    seeded = any(r.seed is not None for r in parts)
    return CheckReport(
        claim_id="hilton",
        instance_count=sum(r.instance_count for r in parts),
        bound=lead.bound,
        achieved=lead.achieved,
        status=COUNTEREXAMPLE if failures else VERIFIED,
        witness=lead.witness,
        counterexamples=failures,
        seed=seed if seeded else None,
        unit="tuples",
        details={"per_d": {r.details["d"]: r.to_dict() for r in parts}},
    )


# -- constructions -----------------------------------------------------------


def check_self_matching_theorem(n: int) -> CheckReport:
    """Every down-set of 2^[n] splits into disjoint pairs (all of it when
    even, all but the empty set when odd)."""
    if not 0 <= n <= 5:
        raise CapExceeded("check_self_matching_theorem supports n <= 5")
    tally = Tally("self-matching")
    odd = 0
    for idx, bits in enumerate(down_set_bits(n)):
        A = _fam(n, bits)
        M = self_matching(A)
        odd += len(A) % 2
        bad = verify_pair_matching(M.pairs, A)
        if bad is None and 2 * len(M) != len(A) - len(A) % 2:
            bad = "wrong size"
        if bad is None:
            tally.add(idx, 0, 0, lambda A=A: _witness(A=A))
        else:
            tally.fail(idx, lambda A=A, M=M, bad=bad: _witness(A=A, pairs=[list(p) for p in M.pairs], violation=str(bad)))
    report = tally.report(unit="down-sets", details={"odd": odd, "even": tally.count - odd})
    report.bound, report.achieved = report.instance_count, report.instance_count - report.counterexamples
    return report


def check_two_family_matching(n: int, samples: int = DEFAULT_SAMPLES, seed: int = 0) -> CheckReport:
    """For down-sets F, G with |F| <= |G|, matched_into gives a valid
    injection, and its size equals the maximum matching in KG(F, G).
    All ordered pairs for n <= 4, ``samples`` random pairs for n = 5."""
    if not 0 <= n <= 5:
        raise CapExceeded("check_two_family_matching supports n <= 5")
    downs = list(down_set_bits(n))
    tally = Tally("two-family-matching")

    def one(idx: int, fb: int, gb: int) -> None:
        F, G = _fam(n, fb), _fam(n, gb)
        phi = matched_into(F, G)
        bad = verify_injection(phi, F, G)
        if bad is None:
            size, _ = max_bipartite_matching(kneser_bipartite(F, G))
            if size != len(F):
                bad = f"oracle matching size {size} != |F| = {len(F)}"
        if bad is None:
            tally.add(idx, 0, 0, lambda: _witness(F=F, G=G))
        else:
            tally.fail(idx, lambda: _witness(F=F, G=G, violation=str(bad)))

    if n <= 4:
        idx = 0
        for fb in downs:
            for gb in downs:
                if popcount(fb) <= popcount(gb):
                    one(idx, fb, gb)
                    idx += 1
        seed_out = None
    else:
        rng = random.Random(seed)
        for idx in range(samples):
            fb, gb = rng.choice(downs), rng.choice(downs)
            if popcount(fb) > popcount(gb):
                fb, gb = gb, fb
            one(idx, fb, gb)
        seed_out = seed
    report = tally.report(seed=seed_out, unit="pairs")
    report.bound, report.achieved = report.instance_count, report.instance_count - report.counterexamples
    return report


# -- (t, s)-families ---------------------------------------------------------


def check_ts_extension(n_max: int) -> CheckReport:
    """m(n+1, t, 1) >= m(n, t) for n + 1 <= n_max."""
    tally = Tally("ts-extension")
    idx = 0
    for n in range(1, n_max):
        for t in range(1, n + 1):
            lhs, rhs = m_value(n, t), m_value(n + 1, t, 1)
            tally.add(idx, lhs, rhs, lambda n=n, t=t, lhs=lhs, rhs=rhs: {"n": n, "t": t, "m(n,t)": lhs, "m(n+1,t,1)": rhs})
            idx += 1
    return tally.report(unit="points")


def check_ts_product(n_max: int) -> CheckReport:
    """m(n+n', t, s) >= m(n, t) m(n', s) for n + n' <= n_max."""
    tally = Tally("ts-product")
    idx = 0
    for n in range(1, n_max):
        for n2 in range(1, n_max - n + 1):
            for t in range(1, n + 1):
                for s in range(1, n2 + 1):
                    lhs = m_value(n, t) * m_value(n2, s)
                    rhs = m_value(n + n2, t, s)
                    tally.add(idx, lhs, rhs, lambda n=n, n2=n2, t=t, s=s, lhs=lhs, rhs=rhs: {
                        "n": n, "n'": n2, "t": t, "s": s, "product": lhs, "m(n+n',t,s)": rhs})
                    idx += 1
    return tally.report(unit="points")


def split_product_max(n: int, t: int, s: int) -> int:
    return max(m_value(k, t) * m_value(n - k, s) for k in range(t, n - s + 1))


def check_ts_split_conjecture(n_max: int) -> CheckReport:
    """m(n, t, s) = max over t <= n' <= n - s of m(n', t) m(n - n', s), for
    t + s <= n <= n_max.  The >= direction is a theorem; a mismatch either
    way is reported as a counterexample."""
    tally = Tally("ts-split")
    idx = 0
    for n in range(2, n_max + 1):
        for t in range(1, n):
            for s in range(1, n - t + 1):
                m = m_value(n, t, s)
                rhs = split_product_max(n, t, s)
                point = {"n": n, "t": t, "s": s, "m(n,t,s)": m, "max_product": rhs}
                # equality as two inequalities
                if m == rhs:
                    tally.add(idx, m, rhs, lambda point=point: point)
                else:
                    tally.fail(idx, lambda point=point: point, max(m, rhs), min(m, rhs))
                idx += 1
    return tally.report(unit="points")


def check_cross_ts_conjecture(n_max: int) -> CheckReport:
    """|F| |G| <= m(n, t, s)^2 for cross-(t, s) pairs, t + s <= n <= n_max.

    Exhaustive: for each F the largest admissible G is the set of all B
    related to every member of F, and the product only grows with G.
    """
    if n_max > 4:
        raise CapExceeded("cross (t, s) product scans support n <= 4")
    tally = Tally("cross-ts-product")
    idx = 0
    for n in range(2, n_max + 1):
        for t in range(1, n):
            for s in range(1, n - t + 1):
                rhs = m_value(n, t, s) ** 2
                table = _partner_table(n, _compat_bits(n, pair_relation("ts", n, t, s)))
                for fb, gb in enumerate(table):
                    lhs = popcount(fb) * popcount(gb)
                    tally.add(idx, lhs, rhs, lambda n=n, t=t, s=s, fb=fb, gb=gb: _witness(
                        n=n, t=t, s=s, F=_fam(n, fb), G=_fam(n, gb)))
                    idx += 1
    return tally.report(unit="families F with maximal partner")


def scan_ts_conjectures(n_max: int, split_max: int = 4, cross_max: int = 3) -> CheckReport:
    """Relations between m(n, t) and m(n, t, s).  The two lower bounds are
    theorems and get checked at every point n <= n_max; the split formula
    runs up to ``split_max`` and the cross product bound up to ``cross_max``.
    The combined status is never better than conjecture-consistent."""
    if not 1 <= n_max <= 5:
        raise CapExceeded("scan_ts_conjectures supports n_max <= 5")
    parts = {
        "ts-extension": check_ts_extension(n_max),
        "ts-product": check_ts_product(n_max),
        "ts-split": check_ts_split_conjecture(min(n_max, split_max)),
        "cross-ts-product": check_cross_ts_conjecture(min(n_max, cross_max)),
    }
    failures = sum(r.counterexamples for r in parts.values())
    first_bad = next((r for r in parts.values() if r.status == COUNTEREXAMPLE), None)
    return CheckReport(
        claim_id="ts-conjectures",
        instance_count=sum(r.instance_count for r in parts.values()),
        bound=parts["cross-ts-product"].bound,
        achieved=parts["cross-ts-product"].achieved,
        status=COUNTEREXAMPLE if failures else CONSISTENT,
        witness=first_bad.witness if first_bad else None,
        counterexamples=failures,
        unit="points/families",
        details={k: r.to_dict() for k, r in parts.items()},
    )


# -- re-checking witnesses from scratch --------------------------------------


def _fams(w: dict, *keys: str) -> list[Family]:
    return [family_from_json(w[k]) for k in keys]


def _recheck_crossiu(w):
    F, G = _fams(w, "F", "G")
    return is_cross_intersecting(F, G), len(F) + len(G), max(len(down_closure(F)), len(down_closure(G)))


def _recheck_hk(w):
    A, B = _fams(w, "A", "B")
    from .family import is_up_set

    return is_up_set(A) and is_down_set(B), len(A.intersection(B)) << A.n, len(A) * len(B)


def _recheck_hilton(w):
    fams = [family_from_json(f) for f in w["families"]]
    ok = all(is_cross_iu(a, b) for i, a in enumerate(fams) for b in fams[i + 1:])
    return ok, sum(map(len, fams)), hilton_bound(fams[0].n, len(fams))


def _recheck_cross_ts(w):
    F, G = _fams(w, "F", "G")
    return is_cross_ts(F, G, w["t"], w["s"]), len(F) * len(G), m_value(w["n"], w["t"], w["s"]) ** 2


def _recheck_chvatal(w):
    D, F = _fams(w, "D", "F")
    return is_down_set(D) and F <= D and is_intersecting(F), len(F), max_degree(D)


WITNESS_CHECKS: dict[str, Callable[[dict], tuple[bool, int, int]]] = {
    "crossiu-sum": _recheck_crossiu,
    "harris-kleitman": _recheck_hk,
    "hilton": _recheck_hilton,
    "cross-ts-product": _recheck_cross_ts,
    "chvatal": _recheck_chvatal,
}


def recheck(report: CheckReport) -> bool:
    """Re-evaluate a report's witness with the plain family predicates.

    For a counterexample: the witness meets the hypotheses and breaks the
    inequality.  Otherwise: it meets them and attains the reported values.
    """
    check = WITNESS_CHECKS.get(report.claim_id)
    if check is None or report.witness is None:
        raise KeyError(f"no witness re-check for {report.claim_id!r}")
    valid, lhs, rhs = check(report.witness)
    if report.status == COUNTEREXAMPLE:
        return valid and lhs > rhs
    return valid and lhs <= rhs and (lhs, rhs) == (report.achieved, report.bound)


CHECKERS = {
    "ekr": "check_ekr",
    "harris-kleitman": "check_harris_kleitman",
    "crossiu-sum": "check_crossiu_sum",
    "chvatal": "scan_chvatal",
    "chvatal-tau2": "scan_chvatal",
    "iu": "check_iu_bounds",
    "hilton": "scan_hilton",
    "self-matching": "check_self_matching_theorem",
    "two-family-matching": "check_two_family_matching",
    "ts-conjectures": "scan_ts_conjectures",
}
