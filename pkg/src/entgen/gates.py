"""Gate and circuit representation.

Qubit 0 is the least-significant bit of the basis-state index throughout the
package. Rotation conventions: RX(t) = exp(-i t X/2), RY(t) = exp(-i t Y/2),
RZ(t) = exp(-i t Z/2); controlled rotations apply the rotation to the second
listed target conditioned on the first.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterCountError, StructureError


class GateKind(enum.IntEnum):
    """Gate alphabet. Integer values are the codes used by the kernels."""

    RX = 0
    RY = 1
    RZ = 2
    H = 3
    X = 4
    CNOT = 5
    CRX = 6
    CRZ = 7
    CSWAP = 8


PARAMETRIC = frozenset({GateKind.RX, GateKind.RY, GateKind.RZ, GateKind.CRX, GateKind.CRZ})

ARITY = {
    GateKind.RX: 1,
    GateKind.RY: 1,
    GateKind.RZ: 1,
    GateKind.H: 1,
    GateKind.X: 1,
    GateKind.CNOT: 2,
    GateKind.CRX: 2,
    GateKind.CRZ: 2,
    GateKind.CSWAP: 3,
}


@dataclass(frozen=True)
class GateOp:
    """One gate: kind, target qubits, and either a fixed angle or a symbolic slot.

    For controlled gates ``targets[0]`` is the control. CSWAP lists
    (control, swap_a, swap_b).
    """

    kind: GateKind
    targets: tuple[int, ...]
    angle: float | None = None
    param_index: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "targets", tuple(int(t) for t in self.targets))
        if len(self.targets) != ARITY[self.kind]:
            raise StructureError(
                f"{self.kind.name} takes {ARITY[self.kind]} targets, got {len(self.targets)}"
            )
        if len(set(self.targets)) != len(self.targets):
            raise StructureError(f"{self.kind.name} targets must be distinct: {self.targets}")
        if any(t < 0 for t in self.targets):
            raise StructureError(f"negative qubit index in {self.targets}")
        if self.kind in PARAMETRIC:
            if (self.angle is None) == (self.param_index is None):
                raise StructureError(
                    f"{self.kind.name} needs exactly one of a fixed angle or a parameter index"
                )
        elif self.angle is not None or self.param_index is not None:
            raise StructureError(f"{self.kind.name} takes no parameter")


class Circuit:
    """Ordered gate list over a fixed qubit register.

    Immutable by convention: ops are stored as a tuple and the compiled form
    is cached on first use. Symbolic parameter indices may be shared between
    gates (several gates bound to one angle).
    """

    def __init__(self, num_qubits: int, ops, num_symbolic_params: int = 0):
        if num_qubits < 1:
            raise StructureError("circuit needs at least one qubit")
        self.num_qubits = int(num_qubits)
        self.ops: tuple[GateOp, ...] = tuple(ops)
        self.num_symbolic_params = int(num_symbolic_params)
        for op in self.ops:
            if any(t >= self.num_qubits for t in op.targets):
                raise StructureError(
                    f"{op.kind.name} targets {op.targets} exceed register of {self.num_qubits}"
                )
            if op.param_index is not None and not (0 <= op.param_index < self.num_symbolic_params):
                raise StructureError(
                    f"parameter index {op.param_index} outside [0, {self.num_symbolic_params})"
                )
        self._compiled: CompiledCircuit | None = None

    def compiled(self) -> "CompiledCircuit":
        if self._compiled is None:
            self._compiled = _compile(self)
        return self._compiled

    def __len__(self) -> int:
        return len(self.ops)

    def __repr__(self) -> str:
        return (
            f"Circuit(num_qubits={self.num_qubits}, ops={len(self.ops)}, "
            f"params={self.num_symbolic_params})"
        )


@dataclass
class CompiledCircuit:
    """Array form of a circuit consumed by the kernels.

    ``param_slots[g]`` is -1 for fixed-angle/parameterless gates, otherwise
    the index into the bound parameter vector.
    """

    num_qubits: int
    kinds: np.ndarray
    t0: np.ndarray
    t1: np.ndarray
    t2: np.ndarray
    base_angles: np.ndarray
    param_slots: np.ndarray
    num_symbolic_params: int
    _sym_mask: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        self._sym_mask = self.param_slots >= 0

    def bind(self, params) -> np.ndarray:
        """Resolve symbolic slots against ``params``, returning per-gate angles."""
        params = np.asarray(params, dtype=np.float64)
        if params.ndim != 1 or params.shape[0] != self.num_symbolic_params:
            raise ParameterCountError(
                f"expected {self.num_symbolic_params} parameters, got shape {params.shape}"
            )
        angles = self.base_angles.copy()
        if self.num_symbolic_params:
            angles[self._sym_mask] = params[self.param_slots[self._sym_mask]]
        return angles


def _compile(circuit: Circuit) -> CompiledCircuit:
    g = len(circuit.ops)
    kinds = np.zeros(g, dtype=np.int32)
    t0 = np.zeros(g, dtype=np.int32)
    t1 = np.zeros(g, dtype=np.int32)
    t2 = np.zeros(g, dtype=np.int32)
    base = np.zeros(g, dtype=np.float64)
    slots = np.full(g, -1, dtype=np.int32)
    for i, op in enumerate(circuit.ops):
        kinds[i] = int(op.kind)
        t0[i] = op.targets[0]
        if len(op.targets) > 1:
            t1[i] = op.targets[1]
        if len(op.targets) > 2:
            t2[i] = op.targets[2]
        if op.angle is not None:
            base[i] = op.angle
        if op.param_index is not None:
            slots[i] = op.param_index
    return CompiledCircuit(
        circuit.num_qubits, kinds, t0, t1, t2, base, slots, circuit.num_symbolic_params
    )


def bind_circuit(circuit: Circuit, params) -> Circuit:
    """Return an equivalent circuit with every symbolic angle fixed."""
    params = np.asarray(params, dtype=np.float64)
    if params.shape != (circuit.num_symbolic_params,):
        raise ParameterCountError(
            f"expected {circuit.num_symbolic_params} parameters, got shape {params.shape}"
        )
    ops = []
    for op in circuit.ops:
        if op.param_index is not None:
            ops.append(GateOp(op.kind, op.targets, angle=float(params[op.param_index])))
        else:
            ops.append(op)
    return Circuit(circuit.num_qubits, ops, 0)


def inverse_circuit(circuit: Circuit) -> Circuit:
    """Exact inverse of a fully bound circuit: reversed ops, negated angles."""
    if circuit.num_symbolic_params:
        raise StructureError("bind the circuit before inverting it")
    ops = []
    for op in reversed(circuit.ops):
        if op.angle is not None:
            ops.append(GateOp(op.kind, op.targets, angle=-op.angle))
        else:
            ops.append(op)  # H, X, CNOT, CSWAP are self-inverse
    return Circuit(circuit.num_qubits, ops, 0)


def ghz_ops(qubits) -> list[GateOp]:
    """H on the first listed qubit, then a CNOT ladder along the rest."""
    qubits = list(qubits)
    if len(qubits) < 2:
        raise StructureError("GHZ preparation needs at least two qubits")
    ops = [GateOp(GateKind.H, (qubits[0],))]
    for a, b in zip(qubits, qubits[1:]):
        ops.append(GateOp(GateKind.CNOT, (a, b)))
    return ops


def ghz_circuit(num_qubits: int) -> Circuit:
    return Circuit(num_qubits, ghz_ops(range(num_qubits)))
