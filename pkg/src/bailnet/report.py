"""Result documents shared by the command line and the HTTP service.

Both front ends build their payloads here so that a clearing run or an
optimization reported over HTTP is numerically identical to the same run
reported by the CLI.  Currency amounts are rounded to 9 decimal digits
and JSON is emitted with sorted keys, so equal inputs give byte-equal
output.
"""

from __future__ import annotations

import json

import numpy as np

from .network import Allocation, ClearingOutcome, LiabilityNetwork
from .optimize import OptimizationResult, ReweightParams

__all__ = [
    "round_currency",
    "fmt_number",
    "outcome_summary",
    "optimization_summary",
    "dumps",
    "outcome_csv",
    "outcome_text",
    "optimization_text",
]


def round_currency(value: float) -> float:
    return round(float(value), 9)


def fmt_number(value: float) -> str:
    """Compact decimal string; integral values drop the trailing ``.0``."""
    rounded = round_currency(value)
    if rounded == int(rounded) and abs(rounded) < 1e15:
        return str(int(rounded))
    return repr(rounded)


def outcome_summary(net: LiabilityNetwork, alloc: Allocation,
                    outcome: ClearingOutcome) -> dict:
    """Full clearing report: totals plus one record per node."""
    pbar = net.liabilities.sum(axis=1)
    nodes = []
    for i in range(net.n):
        shortfall = max(float(pbar[i] - outcome.p[i]), 0.0)
        nodes.append({
            "id": net.label(i),
            "obligation": round_currency(pbar[i]),
            "payment": round_currency(outcome.p[i]),
            "received": round_currency(outcome.q[i]),
            "funds": round_currency(outcome.r[i]),
            "injection": round_currency(alloc.c[i]),
            "shortfall": round_currency(shortfall),
            "in_default": i in outcome.defaults,
        })
    return {
        "n": net.n,
        "total_obligations": round_currency(pbar.sum()),
        "injection_total": round_currency(alloc.total),
        "payments_total": round_currency(float(np.sum(outcome.p))),
        "unpaid_total": round_currency(outcome.unpaid_total),
        "n_defaults": outcome.n_defaults,
        "defaults": [net.label(i) for i in sorted(outcome.defaults)],
        "nodes": nodes,
    }


def _allocation_entries(net: LiabilityNetwork, alloc: Allocation) -> list[dict]:
    entries = []
    for i in range(net.n):
        amount = round_currency(alloc.c[i])
        if amount > 0.0:
            entries.append({"id": net.label(i), "amount": amount})
    return entries


def optimization_summary(net: LiabilityNetwork, mode: str,
                         result: OptimizationResult,
                         budget: float | None = None,
                         cost_weight: float | None = None,
                         params: ReweightParams | None = None) -> dict:
    doc = {
        "mode": mode,
        "allocation": {
            "total": round_currency(result.allocation.total),
            "entries": _allocation_entries(net, result.allocation),
        },
        "outcome": outcome_summary(net, result.allocation, result.outcome),
    }
    if budget is not None:
        doc["budget"] = round_currency(budget)
    if cost_weight is not None:
        doc["cost_weight"] = round_currency(cost_weight)
        # The program picks its own budget; report what it chose.
        doc["budget"] = round_currency(result.allocation.total)
    if params is not None:
        doc["params"] = {
            "k_const": params.k_const,
            "epsilon": params.epsilon,
            "delta": params.delta,
            "max_iterations": params.max_iterations,
            "num_random_starts": params.num_random_starts,
            "rng_seed": params.rng_seed,
        }
    if result.starts_summary:
        doc["starts"] = [{
            "start": s.start,
            "n_defaults": s.n_defaults,
            "unpaid_total": round_currency(s.unpaid_total),
            "iterations": s.iterations,
            "converged": s.converged,
        } for s in result.starts_summary]
    if result.objective_trace:
        doc["trace"] = [{
            "iteration": t.iteration,
            "n_defaults": t.n_defaults,
            "unpaid_total": round_currency(t.unpaid_total),
            "weight_change": round_currency(t.weight_change),
        } for t in result.objective_trace]
    return doc


def dumps(doc: dict) -> str:
    """Deterministic JSON: sorted keys, two-space indent, one trailing newline."""
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


_CSV_COLUMNS = ("id", "obligation", "payment", "received", "funds",
                "injection", "shortfall", "in_default")


def outcome_csv(summary: dict) -> str:
    """Per-node table for an ``outcome_summary`` document."""
    lines = [",".join(_CSV_COLUMNS)]
    for node in summary["nodes"]:
        cells = []
        for col in _CSV_COLUMNS:
            value = node[col]
            if col == "id":
                cells.append(str(value))
            elif col == "in_default":
                cells.append("true" if value else "false")
            else:
                cells.append(fmt_number(value))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def outcome_text(summary: dict) -> str:
    lines = [
        f"nodes: {summary['n']}",
        f"total obligations: {fmt_number(summary['total_obligations'])}",
        f"injected: {fmt_number(summary['injection_total'])}",
        f"paid: {fmt_number(summary['payments_total'])}",
        f"unpaid: {fmt_number(summary['unpaid_total'])}",
        f"defaults: {summary['n_defaults']}",
    ]
    if summary["defaults"]:
        shown = summary["defaults"][:20]
        suffix = " ..." if len(summary["defaults"]) > 20 else ""
        lines.append("defaulting: " + " ".join(shown) + suffix)
    return "\n".join(lines) + "\n"


def optimization_text(doc: dict) -> str:
    lines = [f"mode: {doc['mode']}"]
    if "budget" in doc:
        lines.append(f"budget: {fmt_number(doc['budget'])}")
    if "cost_weight" in doc:
        lines.append(f"cost weight: {fmt_number(doc['cost_weight'])}")
    entries = doc["allocation"]["entries"]
    lines.append(f"allocation total: {fmt_number(doc['allocation']['total'])} "
                 f"across {len(entries)} node(s)")
    for entry in entries[:20]:
        lines.append(f"  {entry['id']}: {fmt_number(entry['amount'])}")
    if len(entries) > 20:
        lines.append(f"  ... {len(entries) - 20} more")
    return "\n".join(lines) + "\n" + outcome_text(doc["outcome"])
