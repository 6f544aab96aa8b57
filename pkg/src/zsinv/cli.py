"""Command-line harness.

Subcommands: invariant | formula | bounds | witness | find | atoms | verify.
Groups are comma-separated factor lists ("2,6,4"), sequences use the term
grammar ("0.1^3 1.2"), and length sets accept "N", "4N", "6", "1..6", or
"{2,4}".  The cache directory defaults to $ZSINV_CACHE_DIR when set.
"""

from __future__ import annotations

import argparse
import sys

from . import invariants
from .engine import Budget, kernel_name
from .errors import BudgetExceeded, HypothesisUnmet, InfiniteInvariant, ZsinvError
from .finder import decompose_blocks, find_zero_sum
from .formulas import (
    all_s_dN_predictions,
    bounds_s_dN,
    dstar,
    dstar_extended,
    hypothesis_flags,
    predict_eta_s,
)
from .groups import parse_group
from .sequences import LengthSet, parse_length_set, parse_sequence
from .store import ResultStore, default_cache_dir
from .verify import ALL_THEOREMS, RecordWriter, run_verify
from .witnesses import (
    certify_l_free,
    certify_padding,
    witness_davenport_padding,
    witness_dstar_extended,
    witness_remark_disjoint,
)

INVARIANT_NAMES = ("D", "s", "eta", "ZS", "s_dN", "s_L")


def _add_budget_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--max-nodes", type=int, default=None, help="node budget per search")
    p.add_argument("--max-seconds", type=float, default=None, help="time budget per search")
    p.add_argument("--workers", type=int, default=1, help="parallel workers")
    p.add_argument("--order-limit", type=int, default=invariants.DEFAULT_ORDER_LIMIT,
                   help="search feasibility ceiling on |G|")
    p.add_argument("--no-cap", action="store_true",
                   help="disable the admissible Davenport depth cap")
    p.add_argument("--cache-dir", default=None,
                   help="results cache directory (default: $ZSINV_CACHE_DIR)")


def _budget(args) -> Budget:
    return Budget(max_nodes=args.max_nodes, max_seconds=args.max_seconds,
                  workers=args.workers)


def _store(args):
    root = args.cache_dir or default_cache_dir()
    return ResultStore(root) if root else None


def _invariant_kwargs(args) -> dict:
    return dict(
        budget=_budget(args),
        store=_store(args),
        order_limit=args.order_limit,
        use_upper_cap=not args.no_cap,
    )


def cmd_invariant(args) -> int:
    group = parse_group(args.group)
    kwargs = _invariant_kwargs(args)
    try:
        if args.which == "D":
            result = invariants.davenport(group, **kwargs)
        elif args.which == "s":
            result = invariants.egz(group, **kwargs)
        elif args.which == "eta":
            result = invariants.eta(group, **kwargs)
        elif args.which == "ZS":
            result = invariants.zs(group, **kwargs)
        elif args.which == "s_dN":
            if args.d is None:
                raise ZsinvError("s_dN needs --d")
            result = invariants.s_dN(group, args.d, **kwargs)
        else:
            if args.L is None:
                raise ZsinvError("s_L needs --L")
            result = invariants.s_L(group, parse_length_set(args.L), **kwargs)
    except InfiniteInvariant as exc:
        print(f"{args.which}({group.to_text()}) = infinity  # {exc}")
        return 0
    except BudgetExceeded as exc:
        p = exc.partial
        print(f"{args.which}({group.to_text()}) >= {p.max_length + 1}  "
              f"# inexact, budget exhausted after {p.nodes_expanded} nodes")
        return 3
    param = f", {result.param}" if result.param is not None else ""
    print(f"{result.name}({group.to_text()}{param}) = {result.value}")
    print(f"  witness ({len(result.witness)} elements): {result.witness.to_text() or '(empty)'}")
    print(f"  exact: {result.exact}  nodes: {result.nodes_expanded}  "
          f"seconds: {result.wall_time:.3f}  kernel: {kernel_name()}")
    return 0


def cmd_formula(args) -> int:
    group = parse_group(args.group)
    d = args.d if args.d is not None else 1
    print(f"group {group.to_text()}  ({group})")
    print(f"  dstar = {dstar(group)}")
    value, chain = dstar_extended(group, d)
    print(f"  dstar(G + C_{d}) = {value}   m-chain {chain}")
    preds = all_s_dN_predictions(group, d)
    if preds:
        for v, tag in preds:
            print(f"  s_{d}N prediction: {v}  [{tag}]")
    else:
        print(f"  s_{d}N prediction: none (no theorem hypothesis applies)")
    es = predict_eta_s(group)
    if es.exact:
        print(f"  eta = {es.eta}, s = {es.s}  [{es.tag}]")
    elif es.eta_upper is not None:
        print(f"  eta <= {es.eta_upper}, s <= {es.s_upper}  [{es.tag}, bounds only]")
    else:
        print("  eta/s: no prediction (hypotheses fail)")
    flags = hypothesis_flags(group, d)
    print(f"  hypothesis flags: {flags}")
    return 0


def cmd_bounds(args) -> int:
    group = parse_group(args.group)
    d = args.d if args.d is not None else 1
    report = bounds_s_dN(group, d)
    print(f"bounds for s_{d}N({group.to_text()}):")
    for b in report.lower_bounds:
        print(f"  lower {b.value:>5}  [{b.source}]")
    for b in report.upper_bounds:
        print(f"  upper {b.value:>5}  [{b.source}]")
    if report.predicted:
        print(f"  predicted {report.predicted[0]}  [{report.predicted[1]}]")
    if report.pinched:
        print("  pinched: lower and upper bounds meet")
    for note in report.notes:
        print(f"  note: {note}")
    return 0


def cmd_witness(args) -> int:
    group = parse_group(args.group)
    d = args.d if args.d is not None else 1
    kwargs = _invariant_kwargs(args)
    if args.kind == "dstar-extended":
        w = witness_dstar_extended(group, d)
        ok = certify_l_free(w, LengthSet.multiples_of(d))
        print(f"{w.to_text()}  # length {len(w)}, certified "
              f"{'free' if ok else 'NOT FREE'} of zero-sum subsequences of length = 0 mod {d}")
        return 0 if ok else 2
    if args.kind == "davenport-padding":
        w = witness_davenport_padding(group, d, **kwargs)
        ok = certify_padding(w, group, d)
        print(f"{w.to_text()}  # length {len(w)}, certified: only zero-sums are 0^k, k < {d}"
              if ok else f"{w.to_text()}  # CERTIFICATION FAILED")
        return 0 if ok else 2
    u, v = witness_remark_disjoint(group, **kwargs)
    from .sequences import count_zero_sum_subsequences

    count = count_zero_sum_subsequences(u.concat(v))
    print(f"{u.to_text()}  # U, atom of length {len(u)} on the first summand")
    print(f"{v.to_text()}  # V, atom of length {len(v)} on the second summand")
    print(f"# UV has exactly {count} nonempty zero-sum subsequences (U, V, UV expected)")
    return 0 if count == 3 else 2


def cmd_find(args) -> int:
    group = parse_group(args.group)
    seq = parse_sequence(args.seq, group)
    ls = parse_length_set(args.L)
    cert = find_zero_sum(seq, ls)
    if cert is None:
        print("none")
        return 0
    ok = cert.verify(seq)
    print(f"{cert.subsequence.to_text()}  # length {cert.length} in {ls}, "
          f"sum {cert.sum_check}, re-verified: {ok}")
    return 0 if ok else 2


def cmd_atoms(args) -> int:
    group = parse_group(args.group)
    atoms = invariants.enumerate_atoms(group, order_limit=args.order_limit)
    for a in atoms:
        print(a.to_text())
    print(f"# {len(atoms)} minimal zero-sum sequences over {group.to_text()}; "
          f"max length {max((len(a) for a in atoms), default=0)}")
    return 0


def cmd_decompose(args) -> int:
    group = parse_group(args.group)
    seq = parse_sequence(args.seq, group)
    try:
        blocks, rest = decompose_blocks(seq, group, args.t, **_invariant_kwargs(args))
    except HypothesisUnmet as exc:
        print(f"hypothesis unmet: {exc}")
        return 1
    for i, b in enumerate(blocks, 1):
        print(f"{b.to_text()}  # block {i}, length {len(b)}, zero-sum")
    print(f"{rest.to_text() or '(empty)'}  # remainder")
    return 0


def cmd_verify(args) -> int:
    theorems = tuple(args.theorems.split(",")) if args.theorems else ALL_THEOREMS
    unknown = set(theorems) - set(ALL_THEOREMS)
    if unknown:
        print(f"unknown theorem filter {sorted(unknown)}; choose from {ALL_THEOREMS}",
              file=sys.stderr)
        return 1
    stream = open(args.out_file, "w") if args.out_file else sys.stdout
    try:
        writer = RecordWriter(stream, args.out)
        root = args.cache_dir or default_cache_dir()
        return run_verify(
            max_order=args.max_order,
            d_max=args.d_max,
            theorems=theorems,
            budget=Budget(max_nodes=args.max_nodes, max_seconds=args.max_seconds),
            workers=args.workers,
            store_root=root,
            writer=writer,
            order_limit=args.order_limit,
            samples=args.samples,
        )
    finally:
        if args.out_file:
            stream.close()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zsinv",
        description="Exact zero-sum invariants of finite abelian groups",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("invariant", help="compute one invariant by exact search")
    p.add_argument("--group", required=True)
    p.add_argument("--which", required=True, choices=INVARIANT_NAMES)
    p.add_argument("--d", type=int, default=None)
    p.add_argument("--L", default=None, help='length set, e.g. "N", "4N", "6", "1..6", "{2,4}"')
    _add_budget_flags(p)
    p.set_defaults(func=cmd_invariant)

    p = sub.add_parser("formula", help="evaluate closed formulas and predictions")
    p.add_argument("--group", required=True)
    p.add_argument("--d", type=int, default=None)
    p.set_defaults(func=cmd_formula)

    p = sub.add_parser("bounds", help="assemble the bound sandwich for s_dN")
    p.add_argument("--group", required=True)
    p.add_argument("--d", type=int, default=None)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("witness", help="construct and certify an extremal witness")
    p.add_argument("--group", required=True)
    p.add_argument("--d", type=int, default=None)
    p.add_argument("--kind", default="dstar-extended",
                   choices=("dstar-extended", "davenport-padding", "remark-disjoint"))
    _add_budget_flags(p)
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("find", help="extract a zero-sum subsequence certificate")
    p.add_argument("--group", required=True)
    p.add_argument("--seq", required=True)
    p.add_argument("--L", required=True)
    p.set_defaults(func=cmd_find)

    p = sub.add_parser("atoms", help="enumerate minimal zero-sum sequences")
    p.add_argument("--group", required=True)
    p.add_argument("--order-limit", type=int, default=invariants.ATOM_ORDER_LIMIT)
    p.set_defaults(func=cmd_atoms)

    p = sub.add_parser("decompose", help="split a sequence into zero-sum blocks")
    p.add_argument("--group", required=True)
    p.add_argument("--seq", required=True)
    p.add_argument("--t", type=int, required=True)
    _add_budget_flags(p)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("verify", help="run the theorem verification sweep")
    p.add_argument("--max-order", type=int, default=9)
    p.add_argument("--d-max", type=int, default=6)
    p.add_argument("--theorems", default=None,
                   help=f"comma list from {','.join(ALL_THEOREMS)}")
    p.add_argument("--out", default="jsonl", choices=("jsonl", "csv"))
    p.add_argument("--out-file", default=None)
    p.add_argument("--samples", type=int, default=100_000)
    _add_budget_flags(p)
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ZsinvError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
