"""Theorem verification sweeps: brute force vs formulas vs witnesses.

For every canonical abelian group up to a given order and every d in range,
the sweep brute-forces s_{dN}(G), compares it with the applicable theorem
prediction and the bound sandwich, brute-forces D/eta/s against the
exact-value and bound theorems where their hypotheses hold, certifies the
constructed witnesses, and runs the short-zero-sum checks on
hypothesis-passing cells.  One structured record per cell; a MISMATCH
anywhere is a hard failure.
"""

from __future__ import annotations

import csv
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from itertools import product as iter_product

from . import invariants
from .engine import Budget
from .errors import BudgetExceeded, InfiniteInvariant
from .formulas import (
    all_p_components_small,
    bounds_s_dN,
    davenport_matches_lower_bound,
    dstar,
    dstar_extended,
    predict_eta_s,
    predict_s_dN,
)
from .groups import GroupSpec, canonicalize, factorize
from .sequences import LengthSet
from .store import ResultStore
from .witnesses import (
    certify_l_free,
    certify_padding,
    check_short_zero_sum_theorem,
    witness_davenport_padding,
    witness_dstar_extended,
)

STATUS_MATCH = "MATCH"
STATUS_BOUNDS_ONLY = "BOUNDS_ONLY"
STATUS_MISMATCH = "MISMATCH"
STATUS_SKIPPED = "SKIPPED"

ALL_THEOREMS = ("s_dN", "eta_s", "witness", "short")

CSV_COLUMNS = [
    "kind", "group", "d", "invariant", "lower", "brute", "upper",
    "predicted", "tag", "status", "reason", "nodes", "seconds",
]


@dataclass
class VerifyRecord:
    kind: str
    group: str
    d: int | None = None
    invariant: str | None = None
    brute: int | None = None
    predicted: int | None = None
    tag: str | None = None
    lower: int | None = None
    upper: int | None = None
    status: str = STATUS_MATCH
    reason: str = ""
    witness: str | None = None
    nodes: int = 0
    seconds: float = 0.0

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)


def _partitions(e: int, most: int | None = None):
    if e == 0:
        yield ()
        return
    most = most if most is not None else e
    for first in range(min(e, most), 0, -1):
        for rest in _partitions(e - first, first):
            yield (first,) + rest


def groups_up_to(max_order: int) -> list[GroupSpec]:
    """Every finite abelian group of order <= max_order, canonical, sorted by
    (order, factors)."""
    out = []
    for m in range(1, max_order + 1):
        parts_per_prime = []
        for p, e in sorted(factorize(m).items()) if m > 1 else []:
            parts_per_prime.append([(p, part) for part in _partitions(e)])
        if not parts_per_prime:
            out.append(GroupSpec(()))
            continue
        for combo in iter_product(*parts_per_prime):
            orders = [p ** a for p, part in combo for a in part]
            out.append(canonicalize(orders))
    return sorted(set(out), key=lambda g: (g.order, g.factors))


def _invariant_kwargs(budget: Budget | None, store_root, order_limit: int):
    kwargs = {"order_limit": order_limit}
    if budget is not None:
        kwargs["budget"] = Budget(max_nodes=budget.max_nodes, max_seconds=budget.max_seconds)
    if store_root is not None:
        kwargs["store"] = ResultStore(store_root)
    return kwargs


def s_dN_cell(factors, d, budget=None, store_root=None, order_limit=36) -> VerifyRecord:
    group = GroupSpec(tuple(factors))
    rec = VerifyRecord(kind="s_dN", group=group.to_text(), d=d)
    bounds = bounds_s_dN(group, d)
    rec.lower = bounds.best_lower
    rec.upper = bounds.best_upper
    pred = predict_s_dN(group, d)
    if pred is not None:
        rec.predicted, rec.tag = pred
    try:
        result = invariants.s_dN(group, d, **_invariant_kwargs(budget, store_root, order_limit))
    except BudgetExceeded as exc:
        rec.status = STATUS_SKIPPED
        rec.reason = f"budget exhausted; lower bound {exc.partial.max_length + 1}"
        rec.nodes = exc.partial.nodes_expanded
        return rec
    except InfiniteInvariant as exc:
        rec.status = STATUS_SKIPPED
        rec.reason = str(exc)
        return rec
    rec.brute = result.value
    rec.witness = result.witness.to_text()
    rec.nodes = result.nodes_expanded
    rec.seconds = result.wall_time
    if rec.lower is not None and rec.brute < rec.lower:
        rec.status = STATUS_MISMATCH
        rec.reason = f"below lower bound {rec.lower}"
    elif rec.upper is not None and rec.brute > rec.upper:
        rec.status = STATUS_MISMATCH
        rec.reason = f"above upper bound {rec.upper}"
    elif rec.predicted is not None:
        rec.status = STATUS_MATCH if rec.brute == rec.predicted else STATUS_MISMATCH
        if rec.status == STATUS_MISMATCH:
            rec.reason = f"brute {rec.brute} != predicted {rec.predicted} ({rec.tag})"
    else:
        rec.status = STATUS_BOUNDS_ONLY
    return rec


def eta_s_cells(factors, budget=None, store_root=None, order_limit=36) -> list[VerifyRecord]:
    group = GroupSpec(tuple(factors))
    kwargs = _invariant_kwargs(budget, store_root, order_limit)
    records: list[VerifyRecord] = []
    values: dict[str, int] = {}
    pred = predict_eta_s(group)
    n = group.exponent
    specs = [
        ("D", invariants.davenport,
         dstar(group) if davenport_matches_lower_bound(group) else None,
         "D=D*" if davenport_matches_lower_bound(group) else None,
         dstar(group),
         2 * n - 1 if all_p_components_small(group) else None),
        ("eta", invariants.eta, pred.eta if pred.exact else None, pred.tag,
         None, pred.eta_upper),
        ("s", invariants.egz, pred.s if pred.exact else None, pred.tag,
         None, pred.s_upper),
    ]
    for name, func, predicted, tag, lower, upper in specs:
        rec = VerifyRecord(kind="eta_s", group=group.to_text(), invariant=name,
                           predicted=predicted, tag=tag, lower=lower, upper=upper)
        try:
            result = func(group, **kwargs)
        except BudgetExceeded as exc:
            rec.status = STATUS_SKIPPED
            rec.reason = f"budget exhausted; lower bound {exc.partial.max_length + 1}"
            records.append(rec)
            continue
        values[name] = rec.brute = result.value
        rec.witness = result.witness.to_text()
        rec.nodes = result.nodes_expanded
        rec.seconds = result.wall_time
        if lower is not None and rec.brute < lower:
            rec.status, rec.reason = STATUS_MISMATCH, f"below lower bound {lower}"
        elif upper is not None and rec.brute > upper:
            rec.status, rec.reason = STATUS_MISMATCH, f"above upper bound {upper}"
        elif predicted is not None:
            rec.status = STATUS_MATCH if rec.brute == predicted else STATUS_MISMATCH
            if rec.status == STATUS_MISMATCH:
                rec.reason = f"brute {rec.brute} != predicted {predicted} ({tag})"
        else:
            rec.status = STATUS_BOUNDS_ONLY
        records.append(rec)
    if {"D", "eta", "s"} <= values.keys():
        if not values["D"] <= values["eta"] <= values["s"]:
            records.append(VerifyRecord(
                kind="eta_s", group=group.to_text(), invariant="chain",
                status=STATUS_MISMATCH,
                reason=f"chain D <= eta <= s violated: {values}",
            ))
    return records


def witness_cell(factors, d, budget=None, store_root=None, order_limit=36) -> list[VerifyRecord]:
    group = GroupSpec(tuple(factors))
    kwargs = _invariant_kwargs(budget, store_root, order_limit)
    records = []

    rec = VerifyRecord(kind="witness", group=group.to_text(), d=d, invariant="dstar-extended")
    value, _ = dstar_extended(group, d)
    w = witness_dstar_extended(group, d)
    rec.witness = w.to_text()
    rec.brute = len(w)
    rec.predicted = value - 1
    ok = len(w) == value - 1 and certify_l_free(w, LengthSet.multiples_of(d))
    rec.status = STATUS_MATCH if ok else STATUS_MISMATCH
    if not ok:
        rec.reason = "construction length or certification failed"
    records.append(rec)

    rec = VerifyRecord(kind="witness", group=group.to_text(), d=d, invariant="davenport-padding")
    try:
        dav = invariants.davenport(group, **kwargs)
        w = witness_davenport_padding(group, d, **kwargs)
        rec.witness = w.to_text()
        rec.brute = len(w)
        rec.predicted = dav.value + d - 2
        ok = len(w) == dav.value + d - 2 and certify_padding(w, group, d)
        rec.status = STATUS_MATCH if ok else STATUS_MISMATCH
        if not ok:
            rec.reason = "padded witness length or certification failed"
    except BudgetExceeded:
        rec.status = STATUS_SKIPPED
        rec.reason = "budget exhausted computing the Davenport witness"
    records.append(rec)
    return records


def short_cell(factors, d, budget=None, store_root=None, order_limit=36,
               samples=100_000) -> VerifyRecord:
    group = GroupSpec(tuple(factors))
    kwargs = _invariant_kwargs(budget, store_root, order_limit)
    rec = VerifyRecord(kind="short", group=group.to_text(), d=d)
    try:
        report = check_short_zero_sum_theorem(group, d, sample_limit=samples, **kwargs)
    except BudgetExceeded:
        rec.status = STATUS_SKIPPED
        rec.reason = "budget exhausted computing prerequisites"
        return rec
    if not report.applicable:
        rec.status = STATUS_SKIPPED
        rec.reason = report.reason
        return rec
    rec.brute = report.part1_checked + report.part2_checked
    rec.predicted = 0
    failures = report.part1_failures + report.part2_failures + report.certificate_failures
    rec.status = STATUS_MATCH if failures == 0 else STATUS_MISMATCH
    if failures:
        rec.reason = (
            f"part1 {report.part1_failures}, part2 {report.part2_failures}, "
            f"certificates {report.certificate_failures}"
        )
    rec.tag = "exhaustive" if report.part1_exhaustive and report.part2_exhaustive else "sampled"
    return rec


class RecordWriter:
    def __init__(self, stream, fmt: str = "jsonl"):
        self.stream = stream
        self.fmt = fmt
        self._csv = None
        if fmt == "csv":
            self._csv = csv.DictWriter(stream, fieldnames=CSV_COLUMNS, extrasaction="ignore")
            self._csv.writeheader()

    def write(self, rec: VerifyRecord) -> None:
        if self._csv is not None:
            self._csv.writerow(asdict(rec))
        else:
            self.stream.write(rec.to_json() + "\n")
        self.stream.flush()


def run_verify(
    max_order: int = 9,
    d_max: int = 6,
    theorems=ALL_THEOREMS,
    budget: Budget | None = None,
    workers: int = 1,
    store_root=None,
    writer: RecordWriter | None = None,
    order_limit: int = 36,
    samples: int = 100_000,
) -> int:
    """Run the sweep; returns the process exit code (0 ok, 2 mismatch,
    3 budget exhaustion with incomplete coverage)."""
    writer = writer or RecordWriter(sys.stdout)
    groups = groups_up_to(max_order)
    d_range = range(1, d_max + 1)
    records: list[VerifyRecord] = []

    def emit(rec: VerifyRecord):
        records.append(rec)
        writer.write(rec)

    common = dict(budget=budget, store_root=store_root, order_limit=order_limit)

    jobs: list[tuple] = []
    if "s_dN" in theorems:
        jobs += [("s_dN", g.factors, d) for g in groups for d in d_range]
    if "eta_s" in theorems:
        jobs += [("eta_s", g.factors, None) for g in groups]
    if "witness" in theorems:
        jobs += [("witness", g.factors, d) for g in groups for d in d_range]

    if workers > 1 and jobs:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for recs in pool.map(_run_job_packed, [(job, common) for job in jobs]):
                for rec in recs:
                    emit(rec)
    else:
        for job in jobs:
            for rec in _run_job_packed((job, common)):
                emit(rec)

    if "short" in theorems:
        # Sequential: reuses cached s_dN / D values gathered above.
        for g in groups:
            for d in d_range:
                emit(short_cell(g.factors, d, samples=samples, **common))

    if any(r.status == STATUS_MISMATCH for r in records):
        return 2
    if any(r.status == STATUS_SKIPPED and "budget" in r.reason for r in records):
        return 3
    return 0


def _run_job_packed(packed):
    job, common = packed
    kind, factors, d = job
    if kind == "s_dN":
        return [s_dN_cell(factors, d, **common)]
    if kind == "eta_s":
        return eta_s_cells(factors, **common)
    return witness_cell(factors, d, **common)
