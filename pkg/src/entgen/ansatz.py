"""The four low-depth ansatz families.

One layer of each family (repeated ``layers`` times, each repetition with
fresh parameters; indices are assigned in gate-emission order):

* A1 -- RX then RZ on every qubit, CRZ on nearest-neighbor pairs.
* A2 -- A1's rotation layer, CRZ on all ordered pairs i < j.
* A3 -- H on every qubit, CRX on nearest-neighbor pairs, RZ on every qubit.
* A4 -- RX and RY on every qubit, CNOT on nearest neighbors, CRZ on nearest
  neighbors (a fixed plus a parameterized entangling sublayer).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .errors import StructureError
from .gates import Circuit, GateKind, GateOp


class AnsatzFamily(str, enum.Enum):
    A1 = "A1"
    A2 = "A2"
    A3 = "A3"
    A4 = "A4"


@dataclass(frozen=True)
class AnsatzSpec:
    family: AnsatzFamily
    num_qubits: int
    layers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "family", AnsatzFamily(self.family))
        if self.num_qubits < 2:
            raise StructureError("ansatz families all entangle; need num_qubits >= 2")
        if self.layers < 1:
            raise StructureError(f"layers must be >= 1, got {self.layers}")


def _params_per_layer(family: AnsatzFamily, n: int) -> int:
    if family is AnsatzFamily.A1:
        return 3 * n - 1
    if family is AnsatzFamily.A2:
        return 2 * n + n * (n - 1) // 2
    if family is AnsatzFamily.A3:
        return 2 * n - 1
    return 3 * n - 1  # A4


def param_count(spec: AnsatzSpec) -> int:
    return spec.layers * _params_per_layer(spec.family, spec.num_qubits)


def build_ansatz(spec: AnsatzSpec) -> Circuit:
    """Deterministic circuit for the family; every rotation gets its own parameter."""
    n = spec.num_qubits
    ops: list[GateOp] = []
    p = 0

    def rot(kind: GateKind, *targets: int):
        nonlocal p
        ops.append(GateOp(kind, targets, param_index=p))
        p += 1

    for _ in range(spec.layers):
        if spec.family in (AnsatzFamily.A1, AnsatzFamily.A2):
            for q in range(n):
                rot(GateKind.RX, q)
            for q in range(n):
                rot(GateKind.RZ, q)
            if spec.family is AnsatzFamily.A1:
                for q in range(n - 1):
                    rot(GateKind.CRZ, q, q + 1)
            else:
                for i in range(n):
                    for j in range(i + 1, n):
                        rot(GateKind.CRZ, i, j)
        elif spec.family is AnsatzFamily.A3:
            for q in range(n):
                ops.append(GateOp(GateKind.H, (q,)))
            for q in range(n - 1):
                rot(GateKind.CRX, q, q + 1)
            for q in range(n):
                rot(GateKind.RZ, q)
        else:  # A4
            for q in range(n):
                rot(GateKind.RX, q)
            for q in range(n):
                rot(GateKind.RY, q)
            for q in range(n - 1):
                ops.append(GateOp(GateKind.CNOT, (q, q + 1)))
            for q in range(n - 1):
                rot(GateKind.CRZ, q, q + 1)

    return Circuit(n, ops, num_symbolic_params=p)
