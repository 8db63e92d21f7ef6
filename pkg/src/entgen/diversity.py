"""SWAP-test similarity, per-CE-bin diversity scans, and the collapse penalty.

The ancilla-zero probability of a SWAP test between |psi> and |phi> is
p0 = (1 + |<psi|phi>|^2) / 2: 1.0 for identical states, 0.5 for orthogonal
ones. A generator that emits near-identical states shows mean p0 near 1
within a CE bin, which is the mode-collapse signature the penalty targets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import StructureError
from .gates import Circuit, GateKind, GateOp
from .statevector import StateVector, apply_circuit, inner_product

DEFAULT_COLLAPSE_THRESHOLD = 0.95


def swap_test_circuit(num_qubits: int) -> Circuit:
    """Explicit (2n+1)-qubit SWAP-test circuit.

    Register layout: first state on qubits [0, n), second on [n, 2n), ancilla
    at 2n. Ancilla H, one CSWAP per qubit pair, ancilla H.
    """
    n = num_qubits
    anc = 2 * n
    ops = [GateOp(GateKind.H, (anc,))]
    ops += [GateOp(GateKind.CSWAP, (anc, q, n + q)) for q in range(n)]
    ops.append(GateOp(GateKind.H, (anc,)))
    return Circuit(2 * n + 1, ops)


def swap_test_circuit_probability(a: StateVector, b: StateVector) -> float:
    """Analytic ancilla-zero probability of the explicit SWAP-test circuit."""
    if a.num_qubits != b.num_qubits:
        raise StructureError("SWAP test needs equal qubit counts")
    n = a.num_qubits
    joint = np.kron(b.amplitudes, a.amplitudes)  # ancilla |0> is implicit MSB
    full = np.concatenate([joint, np.zeros_like(joint)])
    out = apply_circuit(StateVector(2 * n + 1, full), swap_test_circuit(n))
    return float(np.sum(np.abs(out.amplitudes[: 1 << (2 * n)]) ** 2))


def swap_test(a: StateVector, b: StateVector, shots: int = 0, seed: int = 0) -> float:
    """SWAP-test p0. ``shots = 0`` is exact; otherwise a binomial estimate
    drawn from the explicit circuit's ancilla distribution."""
    if a.num_qubits != b.num_qubits:
        raise StructureError("SWAP test needs equal qubit counts")
    if shots == 0:
        return 0.5 * (1.0 + abs(inner_product(a, b)) ** 2)
    p0 = swap_test_circuit_probability(a, b)
    rng = np.random.default_rng(seed)
    return float(rng.binomial(shots, p0)) / shots


@dataclass(frozen=True)
class SwapBin:
    ce_low: float
    ce_high: float
    mean_p0: float  # NaN when the bin holds no tested pairs
    pair_count: int


@dataclass(frozen=True)
class SwapReport:
    bins: tuple[SwapBin, ...]
    threshold: float
    overall_mean_p0: float
    total_pairs: int
    collapsed: bool


def _sample_pairs(rng: np.random.Generator, members: np.ndarray, limit: int) -> list[tuple[int, int]]:
    """Up to ``limit`` distinct unordered pairs from ``members``."""
    m = len(members)
    total = m * (m - 1) // 2
    if total <= limit:
        return [(int(members[i]), int(members[j])) for i in range(m) for j in range(i + 1, m)]
    chosen = rng.choice(total, size=limit, replace=False)
    pairs = []
    for flat in sorted(int(c) for c in chosen):
        # unrank the flat pair index into (i, j), i < j
        i = int((2 * m - 1 - math.sqrt((2 * m - 1) ** 2 - 8 * flat)) // 2)
        j = flat - i * (2 * m - i - 1) // 2 + i + 1
        pairs.append((int(members[i]), int(members[j])))
    return pairs


def diversity_scan(
    states: list[StateVector],
    ce_values,
    bin_edges,
    pairs_per_bin: int = 50,
    shots: int = 0,
    seed: int = 0,
    threshold: float = DEFAULT_COLLAPSE_THRESHOLD,
) -> SwapReport:
    """Group states by CE bin, SWAP-test random pairs within each bin.

    Pair selection is drawn up front from the seed, so results do not depend
    on evaluation order. Bins with fewer than two states are reported with
    ``pair_count`` 0. With no testable pairs anywhere, ``overall_mean_p0``
    falls back to 0.5 (the no-evidence, fully-diverse floor).
    """
    ce_values = np.asarray(ce_values, dtype=np.float64)
    if len(states) != ce_values.size or len(states) < 2:
        raise StructureError("need >= 2 states with one CE value each")
    edges = np.asarray(bin_edges, dtype=np.float64)
    clipped = np.clip(ce_values, edges[0], edges[-1])
    which = np.clip(np.searchsorted(edges, clipped, side="right") - 1, 0, edges.size - 2)
    rng = np.random.default_rng(seed)
    all_pairs: list[list[tuple[int, int]]] = []
    for b in range(edges.size - 1):
        members = np.nonzero(which == b)[0]
        all_pairs.append(_sample_pairs(rng, members, pairs_per_bin) if len(members) >= 2 else [])
    bins = []
    p0_sum = 0.0
    total_pairs = 0
    for b, pairs in enumerate(all_pairs):
        if pairs:
            scores = [
                swap_test(states[i], states[j], shots=shots, seed=seed + 7919 * (total_pairs + k))
                for k, (i, j) in enumerate(pairs)
            ]
            mean_p0 = float(np.mean(scores))
            p0_sum += float(np.sum(scores))
            total_pairs += len(pairs)
        else:
            mean_p0 = float("nan")
        bins.append(SwapBin(float(edges[b]), float(edges[b + 1]), mean_p0, len(pairs)))
    overall = p0_sum / total_pairs if total_pairs else 0.5
    return SwapReport(tuple(bins), threshold, overall, total_pairs, overall > threshold)


def diversity_penalty(report: SwapReport, weight: float) -> float:
    """Hinge penalty: weight * max(0, overall_mean_p0 - threshold)."""
    if weight < 0:
        raise ValueError(f"penalty weight must be >= 0, got {weight}")
    return weight * max(0.0, report.overall_mean_p0 - report.threshold)


def swap_report_table(report: SwapReport) -> str:
    """Plain-text table (bin_low, bin_high, mean_p0, pair_count)."""
    lines = [
        "# bin_low bin_high mean_p0 pair_count",
        f"# threshold = {report.threshold:.10g}",
        f"# overall_mean_p0 = {report.overall_mean_p0:.17g}",
        f"# collapsed = {str(report.collapsed).lower()}",
    ]
    for b in report.bins:
        lines.append(f"{b.ce_low:.10g} {b.ce_high:.10g} {b.mean_p0:.17g} {b.pair_count}")
    return "\n".join(lines) + "\n"
