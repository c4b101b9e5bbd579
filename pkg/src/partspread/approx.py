"""Greedy spread-approximation peeling and the core-reduction machinery.

The peeling loop repeatedly extracts a maximal threshold set S_i from the
current family, peels off the star of S_i, and stops once the extracted set
is larger than the size cap q (or the family is exhausted).  What remains is
the remainder F'; the extracted cores form the low-uniformity approximation.
Verification of the guaranteed properties is a separate pass so that
out-of-gate exploratory runs stay possible.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Optional

from . import guards
from .bounds import exceeds_log2
from .errors import DomainError, IntegrityError, PreconditionError
from .exact import ExactPow, as_fraction
from .report import FAIL, INFO, PASS, SKIPPED, Record
from .setfam import ElementSet, SetFamily, restrict, star_count, stars
from .spread import (
    _candidate_counts,
    find_max_violating,
    is_r_spread,
    spread_factor,
    weak_spread,
)


@dataclass
class PeelStep:
    core: ElementSet
    family_size: int  # |F^i| before peeling
    threshold: Fraction  # r^(-|core|) |F^i|
    peeled: int  # |F^i[S_i]|


@dataclass
class ApproxResult:
    cores: list[ElementSet]
    core_families: list[SetFamily]
    remainder: SetFamily
    trace: list[PeelStep]
    oversized_core: Optional[ElementSet]  # the S_m that stopped the loop, if any

    def records(self) -> list[Record]:
        out = []
        for i, step in enumerate(self.trace):
            out.append(
                Record.make(
                    "peel-step",
                    {"i": i + 1, "core": _set_text(step.core), "size": step.core.size},
                    step.family_size,
                    step.threshold,
                    step.peeled,
                    INFO,
                )
            )
        out.append(
            Record.make(
                "peel-remainder",
                {"steps": len(self.trace)},
                self.remainder.size,
                "-",
                "-",
                INFO,
            )
        )
        return out


def _set_text(es: ElementSet) -> str:
    return "{" + " ".join(str(i) for i in es.indices()) + "}"


def spread_approximate(f: SetFamily, r, q: int) -> ApproxResult:
    """Peel threshold stars until the extracted core would exceed size q.

    Loop: S_i = maximal set with |F^i(S_i)| >= r^(-|S_i|) |F^i|; stop when
    |S_i| > q or F^i is empty, else peel F^(i+1) = F^i minus F^i[S_i].
    Deterministic given the greedy violator rule; always terminates because
    every peel removes at least one member.
    """
    r = as_fraction(r)
    if f.size == 0:
        raise DomainError("spread_approximate needs a nonempty family")
    if r <= 1:
        raise DomainError("spread_approximate needs r > 1")
    if q < 1:
        raise DomainError("spread_approximate needs q >= 1")
    cores: list[ElementSet] = []
    fams: list[SetFamily] = []
    trace: list[PeelStep] = []
    oversized: Optional[ElementSet] = None
    cur = f
    while cur.size > 0:
        s_i = find_max_violating(cur, r)
        if s_i.size > q:
            oversized = s_i
            break
        star = stars(cur, [s_i])
        cores.append(s_i)
        fams.append(star)
        trace.append(
            PeelStep(s_i, cur.size, Fraction(cur.size) / r**s_i.size, star.size)
        )
        star_masks = set(star.masks)
        cur = SetFamily(cur.universe, (m for m in cur.masks if m not in star_masks))
    return ApproxResult(cores, fams, cur, trace, oversized)


@dataclass
class ApproxVerdict:
    coverage_ok: bool  # (i)  F without F' sits inside A[S]
    core_spread_ok: list[bool]  # (ii) each F_B(B) is r-spread
    remainder_ok: bool  # (iii) |F'| <= (r0/r)^(-q-1) |A|
    remainder_lhs: int
    remainder_rhs: Fraction
    pairwise_t_ok: bool  # cores pairwise t-intersect (self pairs included)
    gate_r_spreadness: Optional[bool]  # r > 2^12 log2(2k)
    gate_r_2q: bool  # r >= 2q
    gate_r0_gt_r: bool  # r0 > r
    gate_ambient_spread: Optional[bool]  # A is r0-spread (None if too big to scan)
    conservation_ok: bool  # sum |F_B| + |F'| = |F|
    records_list: list[Record] = field(default_factory=list)

    @property
    def gates_hold(self) -> bool:
        return bool(self.gate_r_spreadness) and self.gate_r_2q and self.gate_r0_gt_r

    @property
    def conclusions_ok(self) -> bool:
        return self.coverage_ok and all(self.core_spread_ok) and self.remainder_ok

    def records(self) -> list[Record]:
        return list(self.records_list)


def verify_approx(
    res: ApproxResult,
    f: SetFamily,
    a: SetFamily,
    r,
    r0,
    q: int,
    t: int,
) -> ApproxVerdict:
    """Check every guaranteed property of a peeling run, all exactly.

    Conclusions and hypothesis gates are evaluated independently: when the
    gates fail the conclusions may still hold and both facts are reported.
    """
    r = as_fraction(r)
    r0 = as_fraction(r0)
    # integrity: cores + remainder partition the input family
    peeled_masks: list[int] = []
    for fam in res.core_families:
        peeled_masks.extend(fam.masks)
    rebuilt = peeled_masks + list(res.remainder.masks)
    if len(rebuilt) != len(set(rebuilt)) or set(rebuilt) != set(f.masks):
        raise IntegrityError("result cores/remainder do not partition the family")
    recs: list[Record] = []

    remainder_set = set(res.remainder.masks)
    covered = stars(a, res.cores)
    covered_masks = set(covered.masks)
    coverage_ok = all(m in covered_masks for m in f.masks if m not in remainder_set)
    recs.append(
        Record.make(
            "approx-coverage",
            {"cores": len(res.cores)},
            f.size - res.remainder.size,
            len(covered_masks),
            "-",
            PASS if coverage_ok else FAIL,
        )
    )

    core_spread_ok = []
    for i, (core, fam) in enumerate(zip(res.cores, res.core_families)):
        ok, witness = is_r_spread(restrict(fam, core), r)
        core_spread_ok.append(ok)
        recs.append(
            Record.make(
                "approx-core-spread",
                {"i": i + 1, "core": _set_text(core)},
                fam.size,
                r,
                "-" if witness is None else _set_text(witness),
                PASS if ok else FAIL,
            )
        )

    k_max = f.max_size()
    gate_spread = None
    if k_max >= 1:
        gate_spread = exceeds_log2(r / 2**12, 2 * k_max)
    gate_r_2q = r >= 2 * q
    gate_r0 = r0 > r
    gate_ambient = None
    if sum(2 ** m.bit_count() for m in a.masks) <= guards.SPREAD_CANDIDATE_MAX:
        gate_ambient, _ = is_r_spread(a, r0)
    gates_hold = bool(gate_spread) and gate_r_2q and gate_r0

    # the remainder bound presumes an r0-spread ambient family, and the
    # t-intersection of the cores presumes all gates; where the hypotheses
    # fail the facts are still reported, only without a hard failure
    remainder_rhs = (r / r0) ** (q + 1) * a.size
    remainder_ok = Fraction(res.remainder.size) <= remainder_rhs
    recs.append(
        Record.make(
            "approx-remainder",
            {"q": q},
            res.remainder.size,
            remainder_rhs,
            remainder_rhs - res.remainder.size,
            PASS if remainder_ok else (FAIL if gate_ambient else INFO),
        )
    )

    pairwise_ok = True
    for i in range(len(res.cores)):
        for j in range(i, len(res.cores)):
            inter = res.cores[i].intersection(res.cores[j]).size
            if inter < t:
                pairwise_ok = False
    recs.append(
        Record.make(
            "approx-cores-t-intersect",
            {"t": t, "cores": len(res.cores)},
            "-",
            "-",
            "-",
            PASS if pairwise_ok else (FAIL if gates_hold else INFO),
        )
    )

    # a gate that does not hold is a reported fact, not a failed check
    for name, val in (
        ("gate-r-vs-log", gate_spread),
        ("gate-r-vs-2q", gate_r_2q),
        ("gate-r0-vs-r", gate_r0),
        ("gate-ambient-r0-spread", gate_ambient),
    ):
        recs.append(
            Record.make(
                "approx-gate",
                {"gate": name, "r": r, "r0": r0, "q": q, "k": k_max},
                "-",
                "-",
                "-",
                SKIPPED if val is None else (PASS if val else "gated"),
            )
        )

    conservation = sum(fam.size for fam in res.core_families) + res.remainder.size
    conservation_ok = conservation == f.size
    recs.append(
        Record.make(
            "approx-conservation",
            {},
            conservation,
            f.size,
            conservation - f.size,
            PASS if conservation_ok else FAIL,
        )
    )

    return ApproxVerdict(
        coverage_ok=coverage_ok,
        core_spread_ok=core_spread_ok,
        remainder_ok=remainder_ok,
        remainder_lhs=res.remainder.size,
        remainder_rhs=remainder_rhs,
        pairwise_t_ok=pairwise_ok,
        gate_r_spreadness=gate_spread,
        gate_r_2q=gate_r_2q,
        gate_r0_gt_r=gate_r0,
        gate_ambient_spread=gate_ambient,
        conservation_ok=conservation_ok,
        records_list=recs,
    )


# ---------------------------------------------------------------------------
# t-intersecting minimization and the reduction sequence


def _canonical_member_order(fam: SetFamily) -> list[int]:
    return sorted(fam.masks, key=lambda m: (m.bit_count(), _index_tuple(m)))


def _index_tuple(mask: int) -> tuple[int, ...]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return tuple(out)


def _is_t_intersecting(masks: list[int], t: int) -> bool:
    """Pairwise |A & B| >= t, member-with-itself included (sizes >= t)."""
    for i, m in enumerate(masks):
        if m.bit_count() < t:
            return False
        for m2 in masks[i + 1 :]:
            if (m & m2).bit_count() < t:
                return False
    return True


def _submasks_of_size(mask: int, size: int) -> list[int]:
    """Submasks with `size` bits, in lexicographic order of their index tuples."""
    idx = _index_tuple(mask)
    return [sum(1 << i for i in c) for c in combinations(idx, size)]


def minimize_t_intersecting(s: SetFamily, t: int, p: int) -> SetFamily:
    """Shrink members to proper subsets while keeping the family t-intersecting.

    Deterministic replacement: members in canonical order, candidate subsets
    by increasing size then lexicographic, replace on the first subset that
    still t-intersects every other member, dedupe, repeat to a fixpoint.  At
    the fixpoint every proper subset X of a member fails against some member
    (|X ∩ T'| < t), and star coverage never shrank.
    """
    if t < 1:
        raise DomainError("minimize_t_intersecting needs t >= 1")
    masks = list(s.masks)
    if any(m.bit_count() > p for m in masks):
        raise PreconditionError(f"some member exceeds the size cap p = {p}")
    if not _is_t_intersecting(masks, t):
        raise PreconditionError("family is not t-intersecting")
    changed = True
    while changed:
        changed = False
        for m in _canonical_member_order(SetFamily(s.universe, masks)):
            if m not in masks:
                continue
            others = [o for o in masks if o != m]
            replacement = None
            for size in range(t, m.bit_count()):
                for x in _submasks_of_size(m, size):
                    if all((x & o).bit_count() >= t for o in others):
                        replacement = x
                        break
                if replacement is not None:
                    break
            if replacement is not None:
                masks = others + [replacement] if replacement not in others else others
                changed = True
        # loop again until a full pass makes no replacement
    return SetFamily(s.universe, masks)


@dataclass
class ReductionReport:
    records_list: list[Record] = field(default_factory=list)

    def add(self, rec: Record) -> None:
        self.records_list.append(rec)

    def records(self) -> list[Record]:
        return list(self.records_list)

    @property
    def ok(self) -> bool:
        return all(r.verdict != FAIL for r in self.records_list)


def _forbidden_restriction_exists(
    fam: SetFamily, bound: int, scan_guard: int
) -> tuple[Optional[bool], int]:
    """Search for G ⊆ fam(X) with |G| > 1 and spread factor > bound.

    Returns (found, scanned); found is None when the scan would exceed the
    guard (reported as skipped by the caller).
    """
    if fam.size <= 1:
        return False, 0
    x_candidates = [0] + sorted(_candidate_counts(fam, unguarded=True))
    total = 0
    for x in x_candidates:
        cnt = sum(1 for m in fam.masks if m & x == x)
        total += 2**cnt
        if total > scan_guard:
            return None, total
    scanned = 0
    for x in x_candidates:
        residues = [m & ~x for m in fam.masks if m & x == x]
        if len(residues) < 2:
            continue
        for size in range(2, len(residues) + 1):
            for combo in combinations(residues, size):
                scanned += 1
                g = SetFamily(fam.universe, combo)
                if g.size < 2:
                    continue
                rep = spread_factor(g, guard=None)
                if rep.r_star > bound:
                    return True, scanned
    return False, scanned


def reduction_sequence(
    a: SetFamily,
    s: SetFamily,
    q: int,
    t: int,
    r=None,
    scan_guard: int | None = None,
) -> tuple[list[tuple[SetFamily, SetFamily]], ReductionReport]:
    """Build the nested families T_0, W_0, T_1, ... and check their properties.

    W_i collects the size-(q-i) members of T_i and T_(i+1) re-minimizes the
    rest under the cap q-i-1.  The report checks, per level: (i) size caps,
    (ii) star-coverage inclusion, (iii) absence of a >(q-i-t+1)-spread
    restricted subfamily with more than one member (skipped above the scan
    guard), (iv) |W_i| <= (6(q-i))^(q-i-t), and (v) the handoff bound
    |A[T_(i-1) minus W_(i-1)]| <= (q/r) |A[T]| when T_i first becomes a
    single t-set.  r defaults to the weak-spreadness factor of the ambient
    family.
    """
    if a.size == 0:
        raise PreconditionError("ambient family is empty")
    if any(m.bit_count() > q for m in s.masks):
        raise PreconditionError(f"some member exceeds q = {q}")
    if not _is_t_intersecting(list(s.masks), t):
        raise PreconditionError("family is not t-intersecting")
    guard_val = guards.effective(scan_guard, guards.SUBFAMILY_SCAN_MAX)

    t_best, r_weak, _ = weak_spread(a, t)
    if r is None:
        r_cmp = r_weak
    else:
        r_cmp = r if isinstance(r, ExactPow) else ExactPow(as_fraction(r))
    a_t_count = star_count(a, t_best)

    report = ReductionReport()
    levels: list[tuple[SetFamily, SetFamily]] = []
    t_i = minimize_t_intersecting(s, t, q) if s.size else SetFamily(s.universe, [])
    for i in range(0, q - t + 1):
        w_i = SetFamily(t_i.universe, (m for m in t_i.masks if m.bit_count() == q - i))
        levels.append((t_i, w_i))

        max_sz = t_i.max_size()
        report.add(
            Record.make(
                "reduction-size-cap",
                {"i": i},
                max_sz,
                q - i,
                (q - i) - max_sz,
                PASS if max_sz <= q - i else FAIL,
            )
        )

        found, scanned = _forbidden_restriction_exists(t_i, q - i - t + 1, guard_val)
        report.add(
            Record.make(
                "reduction-no-spread-subfamily",
                {"i": i, "bound": q - i - t + 1, "scanned": scanned},
                "-",
                "-",
                "-",
                SKIPPED if found is None else (PASS if not found else FAIL),
            )
        )

        w_bound = (6 * (q - i)) ** (q - i - t)
        report.add(
            Record.make(
                "reduction-w-size",
                {"i": i},
                w_i.size,
                w_bound,
                w_bound - w_i.size,
                PASS if w_i.size <= w_bound else FAIL,
            )
        )

        rest = SetFamily(t_i.universe, (m for m in t_i.masks if m.bit_count() != q - i))
        t_next = (
            minimize_t_intersecting(rest, t, q - i - 1)
            if rest.size
            else SetFamily(t_i.universe, [])
        )

        # (ii) A[T_i] ⊆ A[T_(i+1)] ∪ A[W_i]
        lhs_fam = stars(a, t_i.members()) if t_i.size else SetFamily(a.universe, [])
        rhs_masks = set()
        if t_next.size:
            rhs_masks.update(stars(a, t_next.members()).masks)
        if w_i.size:
            rhs_masks.update(stars(a, w_i.members()).masks)
        cover_ok = all(m in rhs_masks for m in lhs_fam.masks)
        report.add(
            Record.make(
                "reduction-star-coverage",
                {"i": i + 1},
                lhs_fam.size,
                len(rhs_masks),
                "-",
                PASS if cover_ok else FAIL,
            )
        )

        # (v) handoff bound when T_(i+1) first collapses to a single t-set
        next_single = t_next.size == 1 and t_next.max_size() == t
        cur_single = t_i.size == 1 and t_i.max_size() == t
        if next_single and not cur_single:
            lhs = stars(a, rest.members()).size if rest.size else 0
            # lhs <= (q/r) |A[T]|  <=>  r <= q*|A[T]| / lhs
            if lhs == 0:
                ok = True
                rhs_txt = "0"
            else:
                cap = Fraction(q * a_t_count, lhs)
                ok = r_cmp <= ExactPow(cap) if not r_cmp.infinite else False
                rhs_txt = f"{q}*{a_t_count}/r"
            report.add(
                Record.make(
                    "reduction-handoff",
                    {"i": i + 1, "aT": a_t_count},
                    lhs,
                    rhs_txt,
                    "-",
                    PASS if ok else FAIL,
                )
            )
        t_i = t_next
    return levels, report


# ---------------------------------------------------------------------------
# dominance check


@dataclass
class DominanceReport:
    trivial: bool
    best_t_set: Optional[ElementSet]
    lhs: Optional[int]  # |A[S]|
    rhs: Optional[Fraction]  # eps * |A[T]|
    conclusion_ok: Optional[bool]
    gate_ok: Optional[bool]  # eps * r >= 24 q
    records_list: list[Record] = field(default_factory=list)

    def records(self) -> list[Record]:
        return list(self.records_list)


def check_dominance(
    a: SetFamily, s: SetFamily, t: int, eps, r=None, q: int | None = None
) -> DominanceReport:
    """Compare |A[S]| against eps * |A[T]| for the best t-set T.

    A family with a common t-subset is reported trivial (the comparison is
    not claimed there).  The hypothesis gate eps*r >= 24q is evaluated
    separately from the conclusion; gate failure never masks the counts.
    """
    if s.size == 0:
        raise PreconditionError("core family is empty")
    if not _is_t_intersecting(list(s.masks), t):
        raise PreconditionError("family is not t-intersecting")
    eps = as_fraction(eps)
    common = s.masks[0]
    for m in s.masks:
        common &= m
    trivial = common.bit_count() >= t
    recs: list[Record] = []

    counts = _candidate_counts(a, unguarded=True)
    t_masks = [m for m in counts if m.bit_count() == t]
    if not t_masks:
        raise DomainError(f"no member of the ambient family has size >= {t}")
    best = max(t_masks, key=lambda m: (counts[m], -m))
    at_count = counts[best]

    if trivial:
        # the comparison is not claimed for a family with a common t-set;
        # the counts are still reported
        lhs = stars(a, s.members()).size
        recs.append(
            Record.make(
                "dominance",
                {"t": t, "trivial": True, "T": _set_text(ElementSet(a.universe, best))},
                lhs,
                at_count,
                "-",
                SKIPPED,
            )
        )
        return DominanceReport(
            True, ElementSet(a.universe, best), lhs, None, None, None, recs
        )

    if q is None:
        q = max(m.bit_count() for m in s.masks)
    if r is None:
        _, r_val, _ = weak_spread(a, t)
    else:
        r_val = r if isinstance(r, ExactPow) else ExactPow(as_fraction(r))
    # eps * r >= 24 q  <=>  r >= 24 q / eps
    gate = True if r_val.infinite else r_val >= ExactPow(Fraction(24 * q) / eps)

    lhs = stars(a, s.members()).size
    rhs = eps * at_count
    ok = Fraction(lhs) <= rhs
    recs.append(
        Record.make(
            "dominance",
            {"t": t, "eps": eps, "T": _set_text(ElementSet(a.universe, best))},
            lhs,
            rhs,
            rhs - lhs,
            PASS if ok else (FAIL if gate else INFO),
        )
    )
    recs.append(
        Record.make(
            "dominance-gate",
            {"q": q, "eps": eps},
            "eps*r",
            24 * q,
            "-",
            PASS if gate else "gated",
        )
    )
    return DominanceReport(
        False, ElementSet(a.universe, best), lhs, rhs, ok, gate, recs
    )
