import numpy as np
import pytest

from bailnet import LiabilityNetwork


def make_random_network(rng: np.random.Generator, n: int,
                        density: float = 0.4,
                        cash_scale: float = 5.0) -> LiabilityNetwork:
    """Random sparse liability network with nonnegative cash.

    Roughly ``density`` of the off-diagonal entries carry a liability in
    (0, 10]; some nodes end up owing nothing so zero obligation rows are
    exercised too.
    """
    liabilities = rng.uniform(0.0, 10.0, (n, n))
    mask = rng.random((n, n)) < density
    liabilities = np.where(mask, liabilities, 0.0)
    np.fill_diagonal(liabilities, 0.0)
    cash = rng.uniform(0.0, cash_scale, n)
    return LiabilityNetwork(liabilities, cash)


def picard_reference(liabilities: np.ndarray, cash: np.ndarray,
                     injections: np.ndarray | None = None,
                     tol: float = 1e-12, max_iterations: int = 500_000) -> np.ndarray:
    """Independent fixed-point iteration used as a test oracle.

    Deliberately written from the payment map alone, sharing no code with
    the library: start from full payment and apply
    p <- min(obligations, received + cash + injections) until it settles.
    """
    liabilities = np.asarray(liabilities, dtype=float)
    cash = np.asarray(cash, dtype=float)
    n = liabilities.shape[0]
    if injections is None:
        injections = np.zeros(n)
    pbar = liabilities.sum(axis=1)
    shares = np.zeros_like(liabilities)
    owing = pbar > 0.0
    shares[owing] = liabilities[owing] / pbar[owing, None]
    p = pbar.copy()
    for _ in range(max_iterations):
        nxt = np.minimum(pbar, shares.T @ p + cash + injections)
        if np.max(np.abs(nxt - p)) < tol:
            return nxt
        p = nxt
    raise AssertionError("reference iteration did not settle")


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
