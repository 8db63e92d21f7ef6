"""Concentratable-entanglement estimators, CE histograms, and TVD.

The full power-set measure for an n-qubit pure state is

    CE = 1 - 2^-n * sum_a Tr(rho_a^2)

with the sum over all 2^n qubit subsets; the empty subset contributes purity
1 and so does the full set for pure inputs. The size-k restriction is

    CE_k = 2^k/(2^k - 1) * (1 - mean of Tr(rho_S^2) over |S| = k)

and the two cheap surrogates are NZP (one minus the all-zeros probability)
and the parallel single-qubit SWAP-test estimate of CE_1 with its
conservative bounds.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from . import backend
from .errors import CapacityError, DegenerateInputError
from .statevector import StateVector, sample_counts

CE_FULL_MAX_QUBITS = 12


class CEMethod(enum.Enum):
    FULL_POWERSET = "full"
    CE_K = "ce_k"
    NZP = "nzp"
    CE1_SWAP_BOUND = "ce1"


@dataclass(frozen=True)
class CEEstimate:
    value: float
    method: CEMethod
    lower: float | None = None
    upper: float | None = None
    k: int | None = None


def ce_full(state: StateVector) -> CEEstimate:
    """Exact power-set CE; cost grows as 2^n, refused above 12 qubits."""
    n = state.num_qubits
    if n > CE_FULL_MAX_QUBITS:
        raise CapacityError(
            f"full power-set CE over {n} qubits needs 2^{n} subset purities; "
            "use nzp or ce1_swap_bounds instead"
        )
    total = backend.powerset_purity_sum(state.amplitudes, n)
    return CEEstimate(1.0 - total / (1 << n), CEMethod.FULL_POWERSET)


def ce_k(state: StateVector, k: int) -> CEEstimate:
    """Normalized size-k CE: averages subsystem purities over all |S| = k."""
    n = state.num_qubits
    if not 1 <= k <= n - 1:
        raise ValueError(f"k must be in [1, {n - 1}], got {k}")
    masks = [sum(1 << q for q in combo) for combo in combinations(range(n), k)]
    mean_purity = sum(backend.subset_purity(state.amplitudes, n, m) for m in masks) / len(masks)
    scale = (1 << k) / ((1 << k) - 1)
    return CEEstimate(scale * (1.0 - mean_purity), CEMethod.CE_K, k=k)


def nzp(state: StateVector, shots: int = 0, seed: int = 0) -> CEEstimate:
    """One minus the all-zeros probability; shots > 0 estimates it by sampling."""
    if shots > 0:
        record = sample_counts(state, shots, seed=seed)
        zeros = record.counts.get("0" * state.num_qubits, 0)
        return CEEstimate(1.0 - zeros / shots, CEMethod.NZP)
    return CEEstimate(1.0 - float(abs(state.amplitudes[0]) ** 2), CEMethod.NZP)


def ce1_swap_bounds(state: StateVector, shots: int = 0, seed: int = 0) -> CEEstimate:
    """Parallel single-qubit SWAP-test estimate of CE_1 with conservative bounds.

    Per qubit j the ancilla-zero probability is p0_j = (1 + Tr rho_j^2)/2;
    on a pure two-copy input the ancillas are independent, so the all-zeros
    probability is q = prod_j p0_j and

        (4/n) (1 - q)  <=  CE_1 = 4 (1 - mean_j p0_j)  <=  4 (1 - q).

    ``shots = 0`` is analytic mode; otherwise each p0_j is a binomial
    estimate at the given shot budget.
    """
    n = state.num_qubits
    p0 = np.empty(n, dtype=np.float64)
    for q in range(n):
        pur = backend.subset_purity(state.amplitudes, n, 1 << q)
        p0[q] = 0.5 * (1.0 + pur)
    if shots > 0:
        rng = np.random.default_rng(seed)
        p0 = rng.binomial(shots, p0) / shots
    q_all_zero = float(np.prod(p0))
    value = 4.0 * (1.0 - float(np.mean(p0)))
    return CEEstimate(
        value,
        CEMethod.CE1_SWAP_BOUND,
        lower=(4.0 / n) * (1.0 - q_all_zero),
        upper=4.0 * (1.0 - q_all_zero),
    )


def estimate_ce(state: StateVector, method: str = "full", k: int = 1,
                shots: int = 0, seed: int = 0) -> float:
    """Scalar CE value by estimator name: full, nzp, ce1 or ce_k."""
    m = CEMethod(method)
    if m is CEMethod.FULL_POWERSET:
        return ce_full(state).value
    if m is CEMethod.NZP:
        return nzp(state, shots=shots, seed=seed).value
    if m is CEMethod.CE1_SWAP_BOUND:
        return ce1_swap_bounds(state, shots=shots, seed=seed).value
    return ce_k(state, k).value


def ce_values_for_batch(batch: np.ndarray, n: int, method: str = "full",
                        shots: int = 0, seed: int = 0) -> np.ndarray:
    """CE per row of an amplitude batch; the hot path of objective evaluation."""
    m = CEMethod(method)
    if m is CEMethod.FULL_POWERSET:
        if n > CE_FULL_MAX_QUBITS:
            raise CapacityError(f"full power-set CE refused for {n} qubits")
        return backend.ce_full_batch(batch, n)
    if m is CEMethod.NZP and shots == 0:
        return 1.0 - np.abs(batch[:, 0]) ** 2
    return np.array([
        estimate_ce(StateVector(n, row), method, shots=shots, seed=seed + i)
        for i, row in enumerate(batch)
    ])


@dataclass(frozen=True)
class CEHistogram:
    """Normalized binned distribution of CE values.

    Bins are right-open except the last, which is closed; out-of-range values
    are clamped into the boundary bins and tallied in the clamp counters.
    """

    bin_edges: np.ndarray
    masses: np.ndarray
    sample_count: int
    clamped_low: int = 0
    clamped_high: int = 0


def histogram(values, bin_edges) -> CEHistogram:
    values = np.asarray(values, dtype=np.float64)
    edges = np.asarray(bin_edges, dtype=np.float64)
    if values.size == 0:
        raise DegenerateInputError("cannot bin an empty value array")
    if edges.ndim != 1 or edges.size < 2 or np.any(np.diff(edges) <= 0):
        raise ValueError("bin edges must be a strictly increasing 1-D array")
    low = int(np.sum(values < edges[0]))
    high = int(np.sum(values > edges[-1]))
    counts, _ = np.histogram(np.clip(values, edges[0], edges[-1]), bins=edges)
    return CEHistogram(edges, counts / values.size, values.size, low, high)


def tvd(p: CEHistogram, q: CEHistogram) -> float:
    """Total variation distance, half the L1 distance between mass vectors."""
    if not np.array_equal(p.bin_edges, q.bin_edges):
        raise ValueError("histograms must share identical bin edges")
    return 0.5 * float(np.sum(np.abs(p.masses - q.masses)))


def histogram_table(hist: CEHistogram) -> str:
    """Two-column plain-text table (bin_left, mass) for external plotting."""
    lines = ["# bin_left mass"]
    for left, mass in zip(hist.bin_edges[:-1], hist.masses):
        lines.append(f"{left:.10g} {mass:.17g}")
    return "\n".join(lines) + "\n"
