"""Dense statevector simulation primitives.

States are immutable by convention: every operation returns a new
``StateVector`` and never mutates its inputs. Randomized operations take
explicit seeds, so everything here is safe to call from concurrent workers.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np

from . import backend
from .errors import (
    DegenerateInputError,
    NumericalStateError,
    ShapeError,
    StructureError,
)
from .gates import ARITY, Circuit, GateKind

NORM_TOL = 1e-6

_SINGLE_QUBIT = frozenset({GateKind.RX, GateKind.RY, GateKind.RZ, GateKind.H, GateKind.X})


@dataclass(eq=False)
class StateVector:
    """Pure n-qubit state as 2^n complex amplitudes, qubit 0 = LSB of the index."""

    num_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.ascontiguousarray(self.amplitudes, dtype=np.complex128)
        if amps.ndim != 1 or amps.shape[0] != (1 << self.num_qubits):
            raise StructureError(
                f"expected {1 << self.num_qubits} amplitudes for {self.num_qubits} qubits, "
                f"got shape {np.shape(self.amplitudes)}"
            )
        self.amplitudes = amps

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2


@dataclass(frozen=True)
class NoiseSpec:
    """Parametric noise: depolarizing-style Pauli insertion plus readout flips.

    ``p1``/``p2`` are per-gate error probabilities for one-qubit and
    multi-qubit gates; ``p_readout`` is the per-qubit classical bit-flip
    probability at measurement. Defaults are representative contemporary
    superconducting-device magnitudes, not a calibration of any machine.
    """

    p1: float = 3e-4
    p2: float = 8e-3
    p_readout: float = 1.5e-2

    def __post_init__(self):
        for name in ("p1", "p2", "p_readout"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise StructureError(f"{name} must be in [0, 1], got {v}")


@dataclass(frozen=True)
class MeasurementRecord:
    shots: int
    counts: dict[str, int]

    def __post_init__(self):
        if sum(self.counts.values()) != self.shots:
            raise StructureError("counts must sum to the shot budget")


def zero_state(num_qubits: int) -> StateVector:
    amps = np.zeros(1 << num_qubits, dtype=np.complex128)
    amps[0] = 1.0
    return StateVector(num_qubits, amps)


def _check_compatible(state: StateVector, circuit: Circuit) -> None:
    if state.num_qubits != circuit.num_qubits:
        raise StructureError(
            f"state has {state.num_qubits} qubits, circuit expects {circuit.num_qubits}"
        )


def apply_circuit(state: StateVector, circuit: Circuit, params=()) -> StateVector:
    """Apply the circuit (with symbolic parameters bound to ``params``) exactly."""
    _check_compatible(state, circuit)
    cc = circuit.compiled()
    angles = cc.bind(params)
    amps = state.amplitudes.copy()
    backend.run_circuit(amps, state.num_qubits, cc.kinds, cc.t0, cc.t1, cc.t2, angles)
    return StateVector(state.num_qubits, amps)


def apply_circuit_noisy(
    state: StateVector, circuit: Circuit, params, noise: NoiseSpec, seed: int
) -> StateVector:
    """One Monte-Carlo noise trajectory.

    After each gate, with probability ``p1`` (one-qubit gates) or ``p2``
    (multi-qubit gates) a uniformly random Pauli from {X, Y, Z} is applied to
    a uniformly random target of that gate. With both probabilities zero the
    output is bit-identical to :func:`apply_circuit`.
    """
    _check_compatible(state, circuit)
    cc = circuit.compiled()
    angles = cc.bind(params)
    n = state.num_qubits
    amps = state.amplitudes.copy()
    if noise.p1 == 0.0 and noise.p2 == 0.0:
        backend.run_circuit(amps, n, cc.kinds, cc.t0, cc.t1, cc.t2, angles)
        return StateVector(n, amps)
    rng = np.random.default_rng(seed)
    targets = (cc.t0, cc.t1, cc.t2)
    for g in range(len(cc.kinds)):
        backend.apply_gate(
            amps, n, int(cc.kinds[g]), int(cc.t0[g]), int(cc.t1[g]), int(cc.t2[g]),
            float(angles[g]),
        )
        kind = GateKind(cc.kinds[g])
        arity = ARITY[kind]
        p_err = noise.p1 if kind in _SINGLE_QUBIT else noise.p2
        if p_err > 0.0 and rng.random() < p_err:
            pauli = int(rng.integers(3))
            victim = int(targets[int(rng.integers(arity))][g])
            backend.apply_pauli(amps, n, pauli, victim)
    return StateVector(n, amps)


def sample_counts(
    state: StateVector, shots: int, noise: NoiseSpec | None = None, seed: int = 0
) -> MeasurementRecord:
    """Draw ``shots`` i.i.d. computational-basis outcomes from |amplitude|^2.

    With a noise spec, each measured bit flips independently with
    ``p_readout``. Bitstring keys render the basis index MSB-first, i.e. the
    leftmost character is qubit n-1.
    """
    if shots < 1:
        raise StructureError(f"shots must be >= 1, got {shots}")
    probs = state.probabilities()
    total = probs.sum()
    if abs(total - 1.0) > NORM_TOL:
        raise NumericalStateError(f"state norm deviates from 1 by {abs(total - 1.0):.3e}")
    n = state.num_qubits
    rng = np.random.default_rng(seed)
    outcomes = rng.choice(probs.size, size=shots, p=probs / total)
    if noise is not None and noise.p_readout > 0.0:
        flips = (rng.random((shots, n)) < noise.p_readout).astype(np.int64)
        outcomes = outcomes ^ (flips << np.arange(n)).sum(axis=1)
    counts = Counter(int(o) for o in outcomes)
    return MeasurementRecord(
        shots, {format(idx, f"0{n}b"): c for idx, c in sorted(counts.items())}
    )


def partial_trace(state: StateVector, keep) -> np.ndarray:
    """Reduced density matrix over ``keep``.

    Row/column ordering of the reduced matrix: the smallest kept qubit index
    is the least-significant bit of the reduced basis index.
    """
    keep = sorted(set(int(q) for q in keep))
    n = state.num_qubits
    if not keep:
        raise ValueError("keep must be a nonempty set of qubit indices")
    if keep[0] < 0 or keep[-1] >= n:
        raise StructureError(f"kept qubits {keep} outside register of {n}")
    psi = state.amplitudes.reshape((2,) * n)
    # tensor axis of qubit q is n-1-q; rows take kept qubits MSB-first
    row_axes = [n - 1 - q for q in reversed(keep)]
    rest_axes = [ax for ax in range(n) if ax not in row_axes]
    a = np.transpose(psi, row_axes + rest_axes).reshape(1 << len(keep), -1)
    return a @ a.conj().T


def purity(rho: np.ndarray) -> float:
    """Tr(rho^2) of a unit-trace Hermitian density matrix."""
    rho = np.asarray(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ShapeError(f"density matrix must be square, got shape {rho.shape}")
    trace_dev = abs(np.trace(rho) - 1.0)
    if trace_dev > 1e-6:
        raise NumericalStateError(f"trace deviates from 1 by {trace_dev:.3e}")
    return float(np.real(np.einsum("ij,ji->", rho, rho)))


def inner_product(a: StateVector, b: StateVector) -> complex:
    """<a|b> (conjugate-linear in the first argument)."""
    if a.num_qubits != b.num_qubits:
        raise StructureError(
            f"qubit count mismatch: {a.num_qubits} vs {b.num_qubits}"
        )
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def amplitude_encode(features) -> StateVector:
    """Embed a real feature vector of length 2^n - 1 as statevector amplitudes.

    The missing 2^n-th amplitude is set to zero before L2 normalization.
    """
    feats = np.asarray(features, dtype=np.float64)
    if feats.ndim != 1:
        raise ShapeError(f"feature vector must be 1-D, got shape {feats.shape}")
    dim = feats.size + 1
    if dim < 2 or dim & (dim - 1):
        raise ShapeError(f"feature count must be 2^n - 1 for some n >= 1, got {feats.size}")
    norm = np.linalg.norm(feats)
    if norm == 0.0:
        raise DegenerateInputError("cannot amplitude-encode the zero vector")
    amps = np.zeros(dim, dtype=np.complex128)
    amps[:-1] = feats / norm
    return StateVector(dim.bit_length() - 1, amps)


def circuit_depth_report(circuit: Circuit) -> dict:
    """Greedy layer-packed depth plus per-kind gate counts."""
    depth_at = [0] * circuit.num_qubits
    for op in circuit.ops:
        layer = 1 + max(depth_at[q] for q in op.targets)
        for q in op.targets:
            depth_at[q] = layer
    counts = Counter(op.kind.name for op in circuit.ops)
    return {"depth": max(depth_at, default=0), "gate_counts": dict(counts)}
