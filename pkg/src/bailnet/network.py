"""Borrower-lender network model and clearing-payment computation.

A network is a directed graph of nominal liabilities: ``L[i][j]`` is the
amount node ``i`` owes node ``j``, and each node holds a nonnegative cash
buffer.  Given an optional external cash injection, the clearing payment
vector is the mutually consistent set of payments under limited liability
and pro-rata seniority: each node pays the smaller of what it owes and
what it has, and what it has depends on what everyone else pays.

``clearing_vector`` computes the greatest such fixed point with the
fictitious-default procedure; ``picard_clearing`` iterates the payment map
directly and is mainly useful as a cross-check and as the least-fixed-point
side of the uniqueness diagnostic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "DEFAULT_TOL_SCALE",
    "NetworkValidationError",
    "ClearingError",
    "LiabilityNetwork",
    "RelativeLiabilities",
    "Allocation",
    "ClearingOutcome",
    "validate",
    "relative_liabilities",
    "default_tolerance",
    "outcome_metrics",
    "clearing_vector",
    "picard_clearing",
    "clearing_uniqueness_gap",
]

# Relative slack when classifying a node as defaulting: shortfalls below
# DEFAULT_TOL_SCALE * max(1, obligation) are treated as paid in full.
DEFAULT_TOL_SCALE = 1e-6

_FIXED_POINT_TOL_SCALE = 1e-6
_PICARD_TOL = 1e-10
_PICARD_MAX_ITER = 500_000


class NetworkValidationError(ValueError):
    """A network, allocation, or payment vector violates a structural invariant."""


class ClearingError(RuntimeError):
    """The clearing computation failed to reach a consistent fixed point."""


def _describe_violation(liabilities: np.ndarray, cash: np.ndarray,
                        node_labels: tuple[str, ...] | None) -> str | None:
    """Return a message for the first violated invariant, or None if clean."""
    if liabilities.ndim != 2 or liabilities.shape[0] != liabilities.shape[1]:
        return f"liability matrix must be square, got shape {liabilities.shape}"
    n = liabilities.shape[0]
    if cash.ndim != 1 or cash.shape[0] != n:
        return f"cash vector has length {cash.shape}, expected ({n},)"
    if node_labels is not None and len(node_labels) != n:
        return f"got {len(node_labels)} node labels for {n} nodes"
    if not np.all(np.isfinite(liabilities)):
        i, j = np.argwhere(~np.isfinite(liabilities))[0]
        return f"non-finite liability at ({i}, {j})"
    if not np.all(np.isfinite(cash)):
        i = int(np.flatnonzero(~np.isfinite(cash))[0])
        return f"non-finite cash at node {i}"
    diag = np.diagonal(liabilities)
    if np.any(diag != 0.0):
        i = int(np.flatnonzero(diag != 0.0)[0])
        return f"nonzero diagonal at node {i}: nodes cannot owe themselves"
    if np.any(liabilities < 0.0):
        i, j = np.argwhere(liabilities < 0.0)[0]
        return f"negative liability at ({i}, {j})"
    if np.any(cash < 0.0):
        i = int(np.flatnonzero(cash < 0.0)[0])
        return f"negative cash at node {i}"
    return None


@dataclass(frozen=True, eq=False)
class LiabilityNetwork:
    """Immutable liability matrix plus per-node cash buffers."""

    liabilities: np.ndarray
    cash: np.ndarray
    node_labels: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        liab = np.array(self.liabilities, dtype=float)
        cash = np.array(self.cash, dtype=float)
        labels = tuple(self.node_labels) if self.node_labels is not None else None
        message = _describe_violation(liab, cash, labels)
        if message is not None:
            raise NetworkValidationError(message)
        liab.setflags(write=False)
        cash.setflags(write=False)
        object.__setattr__(self, "liabilities", liab)
        object.__setattr__(self, "cash", cash)
        object.__setattr__(self, "node_labels", labels)

    @property
    def n(self) -> int:
        return self.cash.shape[0]

    def label(self, i: int) -> str:
        if self.node_labels is not None:
            return self.node_labels[i]
        return str(i)

    @classmethod
    def from_edge_list(cls, cash, edges, node_labels=None) -> "LiabilityNetwork":
        """Build the dense matrix from (debtor, creditor, amount) index triples.

        Duplicate (debtor, creditor) pairs are summed.
        """
        cash = np.asarray(cash, dtype=float)
        n = cash.shape[0]
        liab = np.zeros((n, n))
        for i, j, amount in edges:
            if not 0 <= i < n or not 0 <= j < n:
                raise NetworkValidationError(
                    f"liability edge ({i}, {j}) references a node outside 0..{n - 1}")
            liab[i, j] += amount
        return cls(liab, cash, node_labels)


def validate(net: LiabilityNetwork) -> None:
    """Re-check every structural invariant, raising on the first violation."""
    message = _describe_violation(net.liabilities, net.cash, net.node_labels)
    if message is not None:
        raise NetworkValidationError(message)


@dataclass(frozen=True, eq=False)
class RelativeLiabilities:
    """Row-stochastic payment split ``pi`` and total obligations ``pbar``."""

    pi: np.ndarray
    pbar: np.ndarray


def relative_liabilities(net: LiabilityNetwork) -> RelativeLiabilities:
    """Total obligation per node and the pro-rata split of its payments.

    Rows of ``pi`` sum to 1, except rows of nodes with no obligations,
    which are identically zero.
    """
    pbar = net.liabilities.sum(axis=1)
    pi = np.zeros_like(net.liabilities)
    owing = pbar > 0.0
    pi[owing] = net.liabilities[owing] / pbar[owing, None]
    pi.setflags(write=False)
    pbar.setflags(write=False)
    return RelativeLiabilities(pi=pi, pbar=pbar)


@dataclass(frozen=True, eq=False)
class Allocation:
    """Nonnegative cash injection per node; ``total`` is its component sum."""

    c: np.ndarray
    total: float

    def __post_init__(self) -> None:
        c = np.array(self.c, dtype=float)
        if not np.all(np.isfinite(c)):
            raise NetworkValidationError("non-finite injection amount")
        if np.any(c < 0.0):
            i = int(np.flatnonzero(c < 0.0)[0])
            raise NetworkValidationError(f"negative injection at node {i}")
        if abs(float(self.total) - float(c.sum())) > 1e-9:
            raise NetworkValidationError(
                f"allocation total {self.total} does not match component sum {c.sum()}")
        c.setflags(write=False)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "total", float(self.total))

    @classmethod
    def zeros(cls, n: int) -> "Allocation":
        return cls(np.zeros(n), 0.0)

    @classmethod
    def from_amounts(cls, c) -> "Allocation":
        c = np.asarray(c, dtype=float)
        return cls(c, float(c.sum()))

    @classmethod
    def single(cls, n: int, node: int, amount: float) -> "Allocation":
        c = np.zeros(n)
        c[node] = amount
        return cls(c, float(amount))


@dataclass(frozen=True, eq=False)
class ClearingOutcome:
    """Cleared payments plus derived default metrics.

    ``p`` is the payment vector, ``q`` the payments received by each node,
    and ``r`` the total funds available (received + cash + injection).
    """

    p: np.ndarray
    q: np.ndarray
    r: np.ndarray
    unpaid_total: float
    defaults: frozenset[int]
    n_defaults: int


def default_tolerance(pbar: np.ndarray) -> np.ndarray:
    """Per-node shortfall slack below which a node counts as paid in full."""
    return DEFAULT_TOL_SCALE * np.maximum(1.0, pbar)


def outcome_metrics(net: LiabilityNetwork, p: np.ndarray,
                    rel: RelativeLiabilities | None = None,
                    ) -> tuple[float, frozenset[int], int]:
    """Unpaid total and the default set implied by a payment vector."""
    if rel is None:
        rel = relative_liabilities(net)
    p = np.asarray(p, dtype=float)
    pbar = rel.pbar
    grace = 1e-9 * np.maximum(1.0, pbar)
    if p.shape != pbar.shape:
        raise NetworkValidationError(
            f"payment vector has shape {p.shape}, expected {pbar.shape}")
    if np.any(p < -grace) or np.any(p > pbar + grace):
        raise NetworkValidationError("payment vector outside [0, obligations]")
    shortfall = np.clip(pbar - p, 0.0, None)
    unpaid_total = float(shortfall.sum())
    in_default = shortfall > default_tolerance(pbar)
    defaults = frozenset(int(i) for i in np.flatnonzero(in_default))
    return unpaid_total, defaults, len(defaults)


def _outcome_from_payments(net: LiabilityNetwork, rel: RelativeLiabilities,
                           alloc: Allocation, p: np.ndarray) -> ClearingOutcome:
    q = rel.pi.T @ p
    r = q + net.cash + alloc.c
    unpaid_total, defaults, n_defaults = outcome_metrics(net, p, rel)
    for arr in (p, q, r):
        arr.setflags(write=False)
    return ClearingOutcome(p=p, q=q, r=r, unpaid_total=unpaid_total,
                           defaults=defaults, n_defaults=n_defaults)


def _check_allocation(net: LiabilityNetwork, alloc: Allocation) -> None:
    if alloc.c.shape[0] != net.n:
        raise NetworkValidationError(
            f"allocation covers {alloc.c.shape[0]} nodes, network has {net.n}")


def clearing_vector(net: LiabilityNetwork, alloc: Allocation | None = None,
                    rel: RelativeLiabilities | None = None) -> ClearingOutcome:
    """Greatest clearing payment vector for the network plus injection.

    Runs the fictitious-default procedure: start from full payment, find
    the nodes whose available funds fall short, re-solve their payments as
    a linear system with everyone else paying in full, and repeat until
    the default set stabilizes.  The set can only grow, so at most n+1
    rounds are needed; failure to stabilize indicates a bug and raises
    ``ClearingError``.

    If the defaulting subsystem is singular (payments not uniquely
    determined, e.g. an isolated cycle of defaulters with no outside
    obligations), falls back to iterating the payment map from full
    payment, which converges to the same greatest fixed point.
    """
    if alloc is None:
        alloc = Allocation.zeros(net.n)
    _check_allocation(net, alloc)
    if rel is None:
        rel = relative_liabilities(net)
    pi, pbar = rel.pi, rel.pbar
    resources = net.cash + alloc.c
    tol = default_tolerance(pbar)

    p = pbar.copy()
    in_default = np.zeros(net.n, dtype=bool)
    for _ in range(net.n + 2):
        funds = pi.T @ p + resources
        new_default = (pbar - funds) > tol
        if np.array_equal(new_default, in_default):
            break
        in_default = new_default
        idx = np.flatnonzero(in_default)
        others = np.flatnonzero(~in_default)
        sub = pi[np.ix_(idx, idx)]
        system = np.eye(idx.size) - sub.T
        rhs = pi[np.ix_(others, idx)].T @ pbar[others] + resources[idx]
        try:
            paid = np.linalg.solve(system, rhs)
        except np.linalg.LinAlgError:
            p = picard_clearing(net, alloc, start="pbar", rel=rel)
            return _outcome_from_payments(net, rel, alloc, p)
        p = pbar.copy()
        p[idx] = np.clip(paid, 0.0, pbar[idx])
    else:
        raise ClearingError("default set failed to stabilize; this is a bug")

    residual = np.abs(p - np.minimum(pbar, pi.T @ p + resources))
    if np.any(residual > _FIXED_POINT_TOL_SCALE * np.maximum(1.0, pbar)):
        raise ClearingError(
            f"clearing vector violates the fixed-point equation "
            f"(max residual {residual.max():.3e})")
    return _outcome_from_payments(net, rel, alloc, p)


def picard_clearing(net: LiabilityNetwork, alloc: Allocation | None = None,
                    start: str = "pbar", tol: float = _PICARD_TOL,
                    max_iterations: int = _PICARD_MAX_ITER,
                    rel: RelativeLiabilities | None = None) -> np.ndarray:
    """Iterate the payment map until successive iterates differ by < tol.

    ``start="pbar"`` descends to the greatest fixed point, ``start="zero"``
    ascends to the least.
    """
    if alloc is None:
        alloc = Allocation.zeros(net.n)
    _check_allocation(net, alloc)
    if rel is None:
        rel = relative_liabilities(net)
    pi, pbar = rel.pi, rel.pbar
    resources = net.cash + alloc.c
    if start == "pbar":
        p = pbar.copy()
    elif start == "zero":
        p = np.zeros(net.n)
    else:
        raise ValueError(f"start must be 'pbar' or 'zero', got {start!r}")
    for _ in range(max_iterations):
        nxt = np.minimum(pbar, pi.T @ p + resources)
        if p.size == 0 or np.max(np.abs(nxt - p)) < tol:
            return nxt
        p = nxt
    raise ClearingError(
        f"payment-map iteration did not converge within {max_iterations} steps")


def clearing_uniqueness_gap(net: LiabilityNetwork,
                            alloc: Allocation | None = None,
                            rel: RelativeLiabilities | None = None) -> float:
    """Sup-norm gap between the greatest and least clearing vectors.

    A gap beyond clearing tolerance means the clearing vector is not
    unique and results that depend on it should be read as the greatest
    solution.
    """
    greatest = clearing_vector(net, alloc, rel=rel).p
    least = picard_clearing(net, alloc, start="zero", rel=rel)
    if greatest.size == 0:
        return 0.0
    return float(np.max(np.abs(greatest - least)))
