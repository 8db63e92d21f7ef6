"""GHZ-based quantum-sensing protocol simulators.

Both protocols prepare a GHZ probe over the sensor qubits, imprint a signal
phase, and map the result onto one extra memory qubit. Only the circuit-level
protocol is modeled; the recorded output per ensemble member is the full
pre-measurement state and its CE value (exact CE_1 by default, with the full
power-set value kept alongside when the register is small enough).

Soil-moisture protocol (differential phase readout): GHZ over the sensors,
RZ(+(phi_soil + jitter)) on the soil half and RZ(-phi_free) on the reference
half (opposite orientations, so the GHZ branch phase is the soil/reference
difference), H on every sensor, then a CNOT from every sensor onto the
memory qubit. With phi_soil = phi_free and no jitter the differential phase
vanishes and the memory qubit stays pure.

Dark-matter protocol: GHZ over the sensors, the weak signal as RX(phi +
jitter) on every sensor simultaneously, the reversed GHZ ladder plus H to
disentangle, then a CNOT from sensor 0 onto the memory qubit. A null signal
returns the register exactly to a computational basis product state (CE 0).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .entanglement import ce1_swap_bounds, ce_full
from .errors import StructureError
from .gates import Circuit, GateKind, GateOp, ghz_ops
from .seeding import derive_seed
from .statevector import StateVector, apply_circuit, zero_state


@dataclass(frozen=True)
class SoilConfig:
    num_sensor_qubits: int = 4
    phi_soil_mean: float = 1.0
    phi_free: float = 0.2
    jitter_sigma: float = 0.1
    shots_per_state: int = 0
    ensemble_size: int = 1800
    seed: int = 0

    def __post_init__(self):
        if self.num_sensor_qubits < 2 or self.num_sensor_qubits % 2:
            raise StructureError("sensor qubits must split evenly into two groups")
        if self.jitter_sigma < 0:
            raise StructureError("jitter_sigma must be >= 0")
        if self.ensemble_size < 1:
            raise StructureError("ensemble_size must be >= 1")


@dataclass(frozen=True)
class DarkMatterConfig:
    num_sensor_qubits: int = 4
    phi: float = 0.1
    jitter_sigma: float = 0.005
    ensemble_size: int = 500
    seed: int = 0

    def __post_init__(self):
        if self.num_sensor_qubits < 2:
            raise StructureError("need at least two sensor qubits")
        if self.phi < 0:
            raise StructureError("phi must be >= 0")
        if self.jitter_sigma < 0:
            raise StructureError("jitter_sigma must be >= 0")
        if self.ensemble_size < 1:
            raise StructureError("ensemble_size must be >= 1")


@dataclass
class SensorEnsemble:
    states: list[StateVector]
    ce_values: np.ndarray
    ce_full_values: np.ndarray | None


def soil_circuit(num_sensor_qubits: int) -> Circuit:
    """Sensor register plus memory qubit at the top index.

    Symbolic parameters: 0 = soil-group phase, 1 = reference-group phase
    (bind the reference value negated for the differential readout).
    """
    ns = num_sensor_qubits
    memory = ns
    ops = list(ghz_ops(range(ns)))
    for q in range(ns // 2):
        ops.append(GateOp(GateKind.RZ, (q,), param_index=0))
    for q in range(ns // 2, ns):
        ops.append(GateOp(GateKind.RZ, (q,), param_index=1))
    for q in range(ns):
        ops.append(GateOp(GateKind.H, (q,)))
    for q in range(ns):
        ops.append(GateOp(GateKind.CNOT, (q, memory)))
    return Circuit(ns + 1, ops, num_symbolic_params=2)


def dark_matter_circuit(num_sensor_qubits: int) -> Circuit:
    """Sensor register plus memory qubit; one symbolic parameter, the RX signal angle."""
    ns = num_sensor_qubits
    memory = ns
    ops = list(ghz_ops(range(ns)))
    for q in range(ns):
        ops.append(GateOp(GateKind.RX, (q,), param_index=0))
    for a in reversed(range(ns - 1)):  # reversed GHZ ladder disentangles the probe
        ops.append(GateOp(GateKind.CNOT, (a, a + 1)))
    ops.append(GateOp(GateKind.H, (0,)))
    ops.append(GateOp(GateKind.CNOT, (0, memory)))
    return Circuit(ns + 1, ops, num_symbolic_params=1)


def _record(states: list[StateVector], shots: int, seed: int) -> SensorEnsemble:
    n = states[0].num_qubits
    ce_vals = np.array([
        ce1_swap_bounds(s, shots=shots, seed=derive_seed(seed, f"ce-{i}")).value
        for i, s in enumerate(states)
    ])
    full = None
    if n <= 8:  # cross-check against the exact measure while it is cheap
        full = np.array([ce_full(s).value for s in states])
    return SensorEnsemble(states, ce_vals, full)


def simulate_soil(config: SoilConfig) -> SensorEnsemble:
    circuit = soil_circuit(config.num_sensor_qubits)
    rng = np.random.default_rng(derive_seed(config.seed, "soil-jitter"))
    start = zero_state(config.num_sensor_qubits + 1)
    states = []
    for _ in range(config.ensemble_size):
        jitter = rng.normal(0.0, config.jitter_sigma) if config.jitter_sigma > 0 else 0.0
        params = (config.phi_soil_mean + jitter, -config.phi_free)
        states.append(apply_circuit(start, circuit, params))
    return _record(states, config.shots_per_state, config.seed)


def simulate_dark_matter(config: DarkMatterConfig) -> SensorEnsemble:
    circuit = dark_matter_circuit(config.num_sensor_qubits)
    rng = np.random.default_rng(derive_seed(config.seed, "dm-jitter"))
    start = zero_state(config.num_sensor_qubits + 1)
    states = []
    for _ in range(config.ensemble_size):
        jitter = rng.normal(0.0, config.jitter_sigma) if config.jitter_sigma > 0 else 0.0
        states.append(apply_circuit(start, circuit, (config.phi + jitter,)))
    return _record(states, 0, config.seed)
