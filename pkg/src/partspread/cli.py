"""Command-line front end.

Every subcommand is a thin adapter: it parses flags, loads or builds the
requested family, calls one library operation and renders its records.
Identical invocations produce byte-identical reports (all randomness is
seeded).  Exit codes: 0 all verdicts pass/informational, 1 some verdict
failed, 2 usage or guard error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field

from . import guards
from .approx import (
    check_dominance,
    minimize_t_intersecting,
    reduction_sequence,
    spread_approximate,
    verify_approx,
)
from .encoding import encode_family_edges, encode_parts
from .errors import DomainError, IntegrityError, PreconditionError, ResourceLimitError
from .exact import parse_ratio
from .extremal import (
    CanonicalSpec,
    canonical_family,
    check_conjecture_instance,
    max_compatible_family,
    run_catalog,
)
from .partitions import (
    Partition,
    Profile,
    bell,
    count_derangements,
    count_profiled,
    enumerate_into_blocks,
    enumerate_partitions,
    enumerate_profiled,
    stirling2,
    tilde_bell,
    u_count,
)
from .report import FAIL, INFO, PASS, Record, records_to_table, records_to_text
from .setfam import (
    PartsUniverse,
    SetFamily,
    covering_number,
    family_from_text,
    family_to_text,
)
from .spread import find_sunflower, is_r_spread, spread_factor, weak_spread
from .verify import (
    check_bell_ratio,
    check_dobinski,
    check_encoded_spreadness,
    check_no_singleton_bound,
    check_nonintersect_count,
    check_stirling_growth,
    check_random_containment,
)

GUARD_FLAGS = {
    "enum": "ENUM_MAX_N",
    "profiled": "PROFILED_ENUM_MAX",
    "spread": "SPREAD_CANDIDATE_MAX",
    "clique": "CLIQUE_VERTEX_MAX",
    "sunflower": "SUNFLOWER_FAMILY_MAX",
    "cover-universe": "COVER_UNIVERSE_MAX",
    "cover-family": "COVER_FAMILY_MAX",
    "scan": "SUBFAMILY_SCAN_MAX",
}


@dataclass
class RunConfig:
    command: str
    args: argparse.Namespace
    seed: int = 0
    out: str | None = None
    fmt: str = "text-table"
    guard_overrides: dict = field(default_factory=dict)


def _parse_profile(text: str) -> Profile:
    return Profile(tuple(int(x) for x in text.split(",")))


def _parse_partition(text: str) -> Partition:
    blocks = [[int(e) for e in blk.split(",")] for blk in text.split("|")]
    return Partition(blocks)


def _parse_int_list(text: str) -> tuple[int, ...]:
    return tuple(int(x) for x in text.split(","))


def _spec_partitions(spec: str):
    """Partition list plus encoding kind for a partition-backed family spec."""
    kind, _, rest = spec.partition(":")
    if kind == "bell":
        return "parts", enumerate_partitions(int(rest))
    if kind == "blocks":
        n, l = _parse_int_list(rest)
        return "parts", enumerate_into_blocks(n, l)
    if kind == "profiled":
        return "parts", enumerate_profiled(_parse_profile(rest))
    if kind == "kl":
        k, l = _parse_int_list(rest)
        return "edges", enumerate_profiled(Profile.uniform(k, l))
    if kind == "ct":
        k, l, t = _parse_int_list(rest)
        fam, _ = canonical_family(
            CanonicalSpec(setting="partial", profile=Profile.uniform(k, l), t=t)
        )
        return "edges", fam
    if kind == "file":
        return "file", rest
    raise DomainError(f"unknown family spec {spec!r}")


def load_family(spec: str):
    """Build (universe, family) from a family spec string.

    Specs: bell:N | blocks:N,L | profiled:K1,K2,... | kl:K,L | ct:K,L,T
    | file:PATH.  The first three are parts-encoded, kl and ct are
    edge-encoded, file loads the text format over a plain universe.
    """
    encoding, payload = _spec_partitions(spec)
    if encoding == "file":
        with open(payload, "r", encoding="utf-8") as fh:
            f = family_from_text(fh.read())
        return f.universe, f
    if encoding == "edges":
        return encode_family_edges(payload)
    u = PartsUniverse(payload[0].n)
    return u, SetFamily(u, [encode_parts(p, u).mask for p in payload])


def load_subfamily(spec: str, universe) -> SetFamily:
    """Build a family over an existing universe (shared index space)."""
    encoding, payload = _spec_partitions(spec)
    if encoding == "file":
        with open(payload, "r", encoding="utf-8") as fh:
            return family_from_text(fh.read(), universe=universe)
    if encoding == "edges":
        if universe.kind != "edges" or universe.n != payload[0].n:
            raise DomainError(f"family spec {spec!r} does not match the ambient universe")
        from .encoding import encode_edges

        return SetFamily(universe, [encode_edges(p, universe).mask for p in payload])
    if universe.kind != "parts" or universe.n != payload[0].n:
        raise DomainError(f"family spec {spec!r} does not match the ambient universe")
    return SetFamily(universe, [encode_parts(p, universe).mask for p in payload])


def _family_from_indices(universe, text: str) -> SetFamily:
    """Parse 'i,j;k,l;...' into a family over an existing universe."""
    masks = []
    for part in text.split(";"):
        mask = 0
        for tok in part.split(","):
            tok = tok.strip()
            if tok:
                mask |= 1 << int(tok)
        masks.append(mask)
    return SetFamily(universe, masks)


# ---------------------------------------------------------------------------
# subcommand handlers: each returns a list of Records


def _run_count(args) -> list[Record]:
    if args.what == "bell":
        value = bell(args.n)
        params = {"n": args.n}
    elif args.what == "stirling2":
        value = stirling2(args.n, args.l)
        params = {"n": args.n, "l": args.l}
    elif args.what == "tilde-bell":
        value = tilde_bell(args.n)
        params = {"n": args.n}
    elif args.what == "profiled":
        value = count_profiled(_parse_profile(args.profile))
        params = {"profile": args.profile}
    elif args.what == "uniform":
        value = u_count(args.k, args.l)
        params = {"k": args.k, "l": args.l}
    elif args.what == "derangements":
        value = count_derangements(_parse_partition(args.partition))
        params = {"partition": args.partition}
    else:
        raise DomainError(f"unknown count {args.what!r}")
    return [Record.make(f"count-{args.what}", params, value, "-", "-", INFO)]


def _run_enumerate(args) -> list[Record]:
    if args.what == "partitions":
        fam = enumerate_partitions(args.n)
        params = {"n": args.n}
    elif args.what == "blocks":
        fam = enumerate_into_blocks(args.n, args.l)
        params = {"n": args.n, "l": args.l}
    elif args.what == "profiled":
        fam = enumerate_profiled(_parse_profile(args.profile))
        params = {"profile": args.profile}
    else:
        raise DomainError(f"unknown enumeration {args.what!r}")
    recs = [Record.make("enumerate", params, len(fam), "-", "-", INFO)]
    if args.list:
        for i, p in enumerate(fam):
            recs.append(Record.make("partition", {"i": i}, repr(p), "-", "-", INFO))
    return recs


def _run_spread(args) -> list[Record]:
    _, fam = load_family(args.family)
    if args.what == "factor":
        rep = spread_factor(fam)
        return [
            Record.make(
                "spread-factor",
                {"family": args.family, "scanned": rep.scanned},
                f"{float(rep.r_star):.8g}",
                "-",
                "-" if rep.witness is None else str(rep.witness.indices()),
                INFO,
            )
        ]
    if args.what == "check":
        r = parse_ratio(args.r)
        ok, witness = is_r_spread(fam, r)
        return [
            Record.make(
                "spread-check",
                {"family": args.family, "r": r},
                ok,
                "-",
                "-" if witness is None else str(witness.indices()),
                PASS if ok else FAIL,
            )
        ]
    if args.what == "weak":
        t_set, r, witness = weak_spread(fam, args.t)
        return [
            Record.make(
                "spread-weak",
                {"family": args.family, "t": args.t, "T": str(t_set.indices())},
                f"{float(r):.8g}",
                "-",
                "-" if witness is None else str(witness.indices()),
                INFO,
            )
        ]
    if args.what == "sunflower":
        got = find_sunflower(fam, args.l)
        if got is None:
            return [
                Record.make(
                    "sunflower", {"family": args.family, "l": args.l}, "none", "-", "-", INFO
                )
            ]
        core, petals = got
        return [
            Record.make(
                "sunflower",
                {"family": args.family, "l": args.l},
                str(core.indices()),
                "-",
                ";".join(str(p.indices()) for p in petals),
                INFO,
            )
        ]
    if args.what == "covering":
        tau, witness = covering_number(fam)
        return [
            Record.make(
                "covering-number",
                {"family": args.family},
                tau,
                "-",
                str(witness.indices()),
                INFO,
            )
        ]
    raise DomainError(f"unknown spread op {args.what!r}")


def _run_approximate(args) -> list[Record]:
    if args.ambient:
        universe, ambient = load_family(args.ambient)
        fam = load_subfamily(args.family, universe)
        if not set(fam.masks).issubset(ambient.masks):
            raise DomainError("--family is not a subfamily of --ambient")
    else:
        universe, fam = load_family(args.family)
        ambient = fam
    r = parse_ratio(args.r)
    res = spread_approximate(fam, r, args.q)
    recs = res.records()
    if args.r0 is not None and args.t is not None:
        verdict = verify_approx(res, fam, ambient, r, parse_ratio(args.r0), args.q, args.t)
        recs += verdict.records()
    return recs


def _run_reduce(args) -> list[Record]:
    universe, ambient = load_family(args.family)
    if args.s_file:
        with open(args.s_file, "r", encoding="utf-8") as fh:
            s = family_from_text(fh.read(), universe=universe)
    else:
        s = _family_from_indices(universe, args.s)
    if args.what == "minimize":
        out = minimize_t_intersecting(s, args.t, args.q)
        return [
            Record.make(
                "minimize",
                {"t": args.t, "p": args.q},
                s.size,
                out.size,
                ";".join(str(sorted(m_indices(m))) for m in out.masks),
                INFO,
            )
        ]
    if args.what == "sequence":
        r = parse_ratio(args.r) if args.r else None
        levels, rep = reduction_sequence(ambient, s, args.q, args.t, r=r)
        recs = []
        for i, (t_i, w_i) in enumerate(levels):
            recs.append(
                Record.make(
                    "reduction-level", {"i": i}, t_i.size, w_i.size, "-", INFO
                )
            )
        return recs + rep.records()
    if args.what == "dominance":
        r = parse_ratio(args.r) if args.r else None
        rep = check_dominance(ambient, s, args.t, parse_ratio(args.eps), r=r)
        return rep.records()
    raise DomainError(f"unknown reduce op {args.what!r}")


def m_indices(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def _run_extremal(args) -> list[Record]:
    if args.what == "conjecture":
        rep = check_conjecture_instance(args.k, args.l, args.t)
        return rep.records()
    if args.what == "oracle":
        if args.setting == "bell":
            universe = enumerate_partitions(args.n)
            params = {"setting": "bell", "n": args.n}
        elif args.setting == "blocks":
            universe = enumerate_into_blocks(args.n, args.l)
            params = {"setting": "blocks", "n": args.n, "l": args.l}
        elif args.setting == "uniform":
            universe = enumerate_profiled(Profile.uniform(args.k, args.l))
            params = {"setting": "uniform", "k": args.k, "l": args.l}
        elif args.setting == "profiled":
            universe = enumerate_profiled(_parse_profile(args.profile))
            params = {"setting": "profiled", "profile": args.profile}
        else:
            raise DomainError(f"unknown oracle setting {args.setting!r}")
        res = max_compatible_family(universe, args.predicate, args.t)
        params.update({"predicate": args.predicate, "t": args.t, "nodes": res.nodes})
        return [
            Record.make(
                "oracle", params, res.max_size, len(universe), "-", INFO
            )
        ]
    if args.what == "canonical":
        spec = CanonicalSpec(
            setting=args.setting,
            n=args.n or 0,
            l=args.l or 0,
            t=args.t or 0,
            profile=_parse_profile(args.profile) if args.profile else None,
            t_set=_parse_int_list(args.t_set) if args.t_set else None,
        )
        fam, size = canonical_family(spec)
        return [
            Record.make(
                "canonical", {"setting": args.setting, "t": args.t}, size, "-", "-", INFO
            )
        ]
    if args.what == "catalog":
        with open(args.file, "r", encoding="utf-8") as fh:
            records = run_catalog(fh.read())
        if args.results:
            with open(args.results, "a", encoding="utf-8") as fh:
                fh.write(records_to_text(records))
        return records
    raise DomainError(f"unknown extremal op {args.what!r}")


def _run_verify(args) -> list[Record]:
    if args.what == "bell-ratio":
        rep = check_bell_ratio(args.n_max)
    elif args.what == "dobinski":
        rep = check_dobinski(args.n, args.s_max)
    elif args.what == "no-singleton":
        rep = check_no_singleton_bound(args.s_max)
    elif args.what == "stirling-growth":
        rep = check_stirling_growth(args.l_max, args.n_cap)
    elif args.what == "spreadness":
        rep = check_encoded_spreadness(
            args.setting,
            n=args.n,
            l=args.l,
            t=args.t,
            k=args.k,
            profile=_parse_profile(args.profile) if args.profile else None,
            mode=args.mode,
            s_max=args.s_max,
        )
    elif args.what == "containment":
        _, fam = load_family(args.family)
        rep = check_random_containment(
            fam, parse_ratio(args.r), args.m, parse_ratio(args.delta),
            args.trials, args.seed,
        )
    elif args.what == "nonintersect":
        rep = check_nonintersect_count(
            args.k, args.l, args.t, _parse_int_list(args.t_set),
            _parse_partition(args.y),
        )
    else:
        raise DomainError(f"unknown verify op {args.what!r}")
    head = Record.make(rep.name, rep.params, "-", "-", "-", rep.verdict)
    notes = [
        Record.make(rep.name + "-note", {}, "-", "-", note, INFO) for note in rep.notes
    ]
    return [head] + rep.records() + notes


def _run_export(args) -> list[Record]:
    _, fam = load_family(args.family)
    text = family_to_text(fam)
    with open(args.path, "w", encoding="utf-8") as fh:
        fh.write(text)
    return [Record.make("export", {"family": args.family, "path": args.path}, fam.size, "-", "-", INFO)]


HANDLERS = {
    "count": _run_count,
    "enumerate": _run_enumerate,
    "spread": _run_spread,
    "approximate": _run_approximate,
    "reduce": _run_reduce,
    "extremal": _run_extremal,
    "verify": _run_verify,
    "export": _run_export,
}


# ---------------------------------------------------------------------------
# argument parsing


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1, help="reserved; runs are single-threaded")
    p.add_argument("--out", type=str, default=None)
    p.add_argument(
        "--format", choices=("text-table", "structured-records"), default="text-table"
    )
    for flag in GUARD_FLAGS:
        p.add_argument(f"--guard-{flag}", type=int, default=None, dest=f"guard_{flag.replace('-', '_')}")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="partspread",
        description="spread-approximation toolkit for set-partition families",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count")
    p.add_argument("what", choices=("bell", "stirling2", "tilde-bell", "profiled", "uniform", "derangements"))
    p.add_argument("--n", type=int)
    p.add_argument("--l", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--profile", type=str)
    p.add_argument("--partition", type=str)
    _add_common(p)

    p = sub.add_parser("enumerate")
    p.add_argument("what", choices=("partitions", "blocks", "profiled"))
    p.add_argument("--n", type=int)
    p.add_argument("--l", type=int)
    p.add_argument("--profile", type=str)
    p.add_argument("--list", action="store_true")
    _add_common(p)

    p = sub.add_parser("spread")
    p.add_argument("what", choices=("factor", "check", "weak", "sunflower", "covering"))
    p.add_argument("--family", type=str, required=True)
    p.add_argument("--r", type=str)
    p.add_argument("--t", type=int)
    p.add_argument("--l", type=int)
    _add_common(p)

    p = sub.add_parser("approximate")
    p.add_argument("--family", type=str, required=True)
    p.add_argument("--ambient", type=str, default=None)
    p.add_argument("--r", type=str, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--r0", type=str, default=None)
    p.add_argument("--t", type=int, default=None)
    _add_common(p)

    p = sub.add_parser("reduce")
    p.add_argument("what", choices=("minimize", "sequence", "dominance"))
    p.add_argument("--family", type=str, required=True, help="ambient family spec")
    p.add_argument("--s", type=str, default=None, help="members as 'i,j;k,l' indices")
    p.add_argument("--s-file", type=str, default=None)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--r", type=str, default=None)
    p.add_argument("--eps", type=str, default="1/2")
    _add_common(p)

    p = sub.add_parser("extremal")
    p.add_argument("what", choices=("conjecture", "oracle", "canonical", "catalog"))
    p.add_argument("--setting", type=str, default="uniform")
    p.add_argument("--predicate", choices=("t-intersect", "partially-t-intersect"),
                   default="partially-t-intersect")
    p.add_argument("--n", type=int)
    p.add_argument("--l", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--t", type=int)
    p.add_argument("--profile", type=str)
    p.add_argument("--t-set", type=str, default=None)
    p.add_argument("--file", type=str, help="instance catalog path")
    p.add_argument("--results", type=str, help="append records to this file")
    _add_common(p)

    p = sub.add_parser("verify")
    p.add_argument("what", choices=(
        "bell-ratio", "dobinski", "no-singleton", "stirling-growth",
        "spreadness", "containment", "nonintersect",
    ))
    p.add_argument("--n-max", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--s-max", type=int)
    p.add_argument("--l-max", type=int)
    p.add_argument("--n-cap", type=int)
    p.add_argument("--setting", type=str)
    p.add_argument("--l", type=int)
    p.add_argument("--t", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--profile", type=str)
    p.add_argument("--mode", choices=("direct", "formula", "both"), default="both")
    p.add_argument("--family", type=str)
    p.add_argument("--r", type=str)
    p.add_argument("--m", type=int)
    p.add_argument("--delta", type=str)
    p.add_argument("--trials", type=int, default=10**4)
    p.add_argument("--t-set", type=str)
    p.add_argument("--y", type=str)
    _add_common(p)

    p = sub.add_parser("export", help="write a family to the text format")
    p.add_argument("--family", type=str, required=True)
    p.add_argument("--path", type=str, required=True)
    _add_common(p)
    return ap


def _apply_guards(args) -> tuple[dict, dict]:
    overrides = {}
    previous = {}
    for flag, attr in GUARD_FLAGS.items():
        val = getattr(args, f"guard_{flag.replace('-', '_')}", None)
        if val is not None:
            previous[attr] = getattr(guards, attr)
            setattr(guards, attr, val)
            overrides[attr] = val
    return overrides, previous


def run(config: RunConfig) -> int:
    """Execute one command, write its report, return the exit code."""
    handler = HANDLERS[config.command]
    try:
        records = handler(config.args)
    except (DomainError, PreconditionError, ResourceLimitError, IntegrityError,
            FileNotFoundError, ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if config.fmt == "structured-records":
        text = records_to_text(records)
    else:
        text = records_to_table(records)
    sys.stdout.write(text)
    if config.out:
        with open(config.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    return 1 if any(r.verdict == FAIL for r in records) else 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    overrides, previous = _apply_guards(args)
    config = RunConfig(
        command=args.command,
        args=args,
        seed=getattr(args, "seed", 0),
        out=getattr(args, "out", None),
        fmt=getattr(args, "format", "text-table"),
        guard_overrides=overrides,
    )
    try:
        return run(config)
    finally:
        for attr, val in previous.items():
            setattr(guards, attr, val)


if __name__ == "__main__":
    sys.exit(main())
