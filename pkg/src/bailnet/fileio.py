"""JSON document format for networks and injection vectors.

A network document looks like::

    {
      "nodes": [{"id": "a", "cash": 4.0}, {"id": "b", "cash": 0.0}],
      "liabilities": [{"from": "a", "to": "b", "amount": 10.0}]
    }

Node order in the document fixes the index order everywhere else.
Duplicate (from, to) pairs are summed.  An injection document carries
``{"injections": [{"id": ..., "amount": ...}]}``; nodes not listed
receive zero.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .network import Allocation, LiabilityNetwork, NetworkValidationError

__all__ = [
    "NetworkFormatError",
    "network_from_doc",
    "network_to_doc",
    "load_network",
    "save_network",
    "allocation_from_doc",
    "load_allocation",
]


class NetworkFormatError(ValueError):
    """A network or injection document is malformed."""


def _require_number(value, what: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise NetworkFormatError(f"{what} must be a number, got {value!r}")
    return float(value)


def _node_index(doc: dict) -> tuple[list[str], list[float]]:
    nodes = doc.get("nodes")
    if not isinstance(nodes, list) or not nodes:
        raise NetworkFormatError("document needs a non-empty 'nodes' list")
    ids: list[str] = []
    cash: list[float] = []
    for entry in nodes:
        if not isinstance(entry, dict):
            raise NetworkFormatError(f"node entry must be an object, got {entry!r}")
        node_id = entry.get("id")
        if not isinstance(node_id, str) or not node_id:
            raise NetworkFormatError(f"node id must be a non-empty string, got {node_id!r}")
        if node_id in ids:
            raise NetworkFormatError(f"duplicate node id {node_id!r}")
        amount = _require_number(entry.get("cash", 0.0), f"cash for node {node_id!r}")
        if amount < 0.0:
            raise NetworkFormatError(f"negative cash for node {node_id!r}")
        ids.append(node_id)
        cash.append(amount)
    return ids, cash


def network_from_doc(doc) -> LiabilityNetwork:
    """Parse a network document into a validated ``LiabilityNetwork``."""
    if not isinstance(doc, dict):
        raise NetworkFormatError("network document must be a JSON object")
    ids, cash = _node_index(doc)
    index = {node_id: i for i, node_id in enumerate(ids)}
    entries = doc.get("liabilities", [])
    if not isinstance(entries, list):
        raise NetworkFormatError("'liabilities' must be a list")
    edges = []
    for entry in entries:
        if not isinstance(entry, dict):
            raise NetworkFormatError(f"liability entry must be an object, got {entry!r}")
        debtor, creditor = entry.get("from"), entry.get("to")
        for node_id in (debtor, creditor):
            if node_id not in index:
                raise NetworkFormatError(f"liability references unknown node {node_id!r}")
        amount = _require_number(entry.get("amount"),
                                 f"liability amount {debtor!r} -> {creditor!r}")
        if amount < 0.0:
            raise NetworkFormatError(
                f"negative liability amount {debtor!r} -> {creditor!r}")
        if debtor == creditor and amount != 0.0:
            raise NetworkFormatError(f"node {debtor!r} cannot owe itself")
        edges.append((index[debtor], index[creditor], amount))
    try:
        return LiabilityNetwork.from_edge_list(cash, edges, node_labels=tuple(ids))
    except NetworkValidationError as exc:
        raise NetworkFormatError(str(exc)) from exc


def network_to_doc(net: LiabilityNetwork) -> dict:
    """Serialize a network to the document format, edges in row-major order."""
    nodes = [{"id": net.label(i), "cash": float(net.cash[i])} for i in range(net.n)]
    liabilities = []
    rows, cols = np.nonzero(net.liabilities)
    for i, j in zip(rows.tolist(), cols.tolist()):
        liabilities.append({
            "from": net.label(i),
            "to": net.label(j),
            "amount": float(net.liabilities[i, j]),
        })
    return {"nodes": nodes, "liabilities": liabilities}


def load_network(path) -> LiabilityNetwork:
    text = Path(path).read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise NetworkFormatError(f"invalid JSON in {path}: {exc}") from exc
    return network_from_doc(doc)


def save_network(net: LiabilityNetwork, path) -> None:
    doc = network_to_doc(net)
    Path(path).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")


def allocation_from_doc(doc, net: LiabilityNetwork) -> Allocation:
    """Parse an injection document against a known network."""
    if not isinstance(doc, dict):
        raise NetworkFormatError("injection document must be a JSON object")
    entries = doc.get("injections")
    if not isinstance(entries, list):
        raise NetworkFormatError("document needs an 'injections' list")
    index = {net.label(i): i for i in range(net.n)}
    c = np.zeros(net.n)
    for entry in entries:
        if not isinstance(entry, dict):
            raise NetworkFormatError(f"injection entry must be an object, got {entry!r}")
        node_id = entry.get("id")
        if node_id not in index:
            raise NetworkFormatError(f"injection references unknown node {node_id!r}")
        amount = _require_number(entry.get("amount"), f"injection for node {node_id!r}")
        if amount < 0.0:
            raise NetworkFormatError(f"negative injection for node {node_id!r}")
        c[index[node_id]] += amount
    return Allocation.from_amounts(c)


def load_allocation(path, net: LiabilityNetwork) -> Allocation:
    text = Path(path).read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise NetworkFormatError(f"invalid JSON in {path}: {exc}") from exc
    return allocation_from_doc(doc, net)
