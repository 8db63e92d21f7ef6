"""End-to-end generation: target distributions, the TVD-plus-penalty
objective, annealing-driven training, dataset emission, and family comparison.

The training input ensemble is resampled fresh at every objective evaluation
from a per-evaluation derived seed (preventing overfit to one batch), and the
reported ``final_tvd`` comes from a held-out ensemble the optimizer never saw.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import backend
from .anneal import AnnealConfig, AnnealResult, dual_annealing
from .ansatz import AnsatzFamily, AnsatzSpec, build_ansatz
from .diversity import diversity_penalty, diversity_scan
from .entanglement import CEHistogram, ce_values_for_batch, histogram, tvd
from .errors import DegenerateInputError, StructureError
from .gates import Circuit
from .seeding import derive_seed
from .statevector import NoiseSpec, StateVector, apply_circuit_noisy

DEFAULT_CE_MAX = 0.4
DEFAULT_BINS = 20


class TargetKind(str, enum.Enum):
    UNIFORM = "uniform"
    GAUSSIAN = "gaussian"
    WEIBULL_LEFT = "weibull_left"
    WEIBULL_RIGHT = "weibull_right"
    EMPIRICAL = "empirical"


@dataclass(frozen=True)
class TargetDistribution:
    kind: TargetKind
    params: dict
    ce_max: float
    bin_edges: np.ndarray
    masses: np.ndarray

    def __post_init__(self):
        masses = np.asarray(self.masses, dtype=np.float64)
        if np.any(masses < 0) or abs(masses.sum() - 1.0) > 1e-9:
            raise StructureError("target masses must be a probability vector")
        object.__setattr__(self, "masses", masses)

    def as_histogram(self) -> CEHistogram:
        return CEHistogram(self.bin_edges, self.masses, sample_count=0)


def _edges(ce_max: float, bins: int) -> np.ndarray:
    return np.linspace(0.0, ce_max, bins + 1)


def _gauss_cdf(x: np.ndarray, mu: float, sigma: float) -> np.ndarray:
    return 0.5 * (1.0 + np.vectorize(math.erf)((x - mu) / (sigma * math.sqrt(2.0))))


def _weibull_cdf(x: np.ndarray, shape: float, scale: float) -> np.ndarray:
    x = np.maximum(x, 0.0)
    return 1.0 - np.exp(-np.power(x / scale, shape))


def _masses_from_cdf(edges: np.ndarray, cdf) -> np.ndarray:
    raw = np.diff(cdf(edges))
    total = raw.sum()
    if total <= 0:
        raise StructureError("target density has no mass on the CE interval")
    return raw / total


def uniform_target(ce_max: float = DEFAULT_CE_MAX, bins: int = DEFAULT_BINS) -> TargetDistribution:
    edges = _edges(ce_max, bins)
    return TargetDistribution(TargetKind.UNIFORM, {}, ce_max, edges, np.full(bins, 1.0 / bins))


def gaussian_target(mu: float = 0.2, sigma: float = 0.05, ce_max: float = DEFAULT_CE_MAX,
                    bins: int = DEFAULT_BINS) -> TargetDistribution:
    edges = _edges(ce_max, bins)
    masses = _masses_from_cdf(edges, lambda x: _gauss_cdf(x, mu, sigma))
    return TargetDistribution(
        TargetKind.GAUSSIAN, {"mu": mu, "sigma": sigma}, ce_max, edges, masses
    )


def weibull_left_target(shape: float = 1.2, scale: float = 0.05,
                        ce_max: float = DEFAULT_CE_MAX, bins: int = DEFAULT_BINS) -> TargetDistribution:
    edges = _edges(ce_max, bins)
    masses = _masses_from_cdf(edges, lambda x: _weibull_cdf(x, shape, scale))
    return TargetDistribution(
        TargetKind.WEIBULL_LEFT, {"shape": shape, "scale": scale}, ce_max, edges, masses
    )


def weibull_right_target(shape: float = 1.2, scale: float = 0.05, reflect_point: float = 0.2,
                         ce_max: float = DEFAULT_CE_MAX, bins: int = DEFAULT_BINS) -> TargetDistribution:
    """Left-skewed Weibull reflected across ``reflect_point``.

    On binning symmetric about the reflect point this is exactly the
    left-skewed mass vector reversed.
    """
    edges = _edges(ce_max, bins)
    # reflected density f'(x) = f(2R - x); bin mass = F(2R - left) - F(2R - right)
    raw = _weibull_cdf(2 * reflect_point - edges[:-1], shape, scale) - _weibull_cdf(
        2 * reflect_point - edges[1:], shape, scale
    )
    masses = raw / raw.sum()
    return TargetDistribution(
        TargetKind.WEIBULL_RIGHT,
        {"shape": shape, "scale": scale, "reflect_point": reflect_point},
        ce_max, edges, masses,
    )


def empirical_target(values, ce_max: float = DEFAULT_CE_MAX,
                     bins: int = DEFAULT_BINS) -> TargetDistribution:
    edges = _edges(ce_max, bins)
    hist = histogram(values, edges)
    return TargetDistribution(
        TargetKind.EMPIRICAL, {"count": hist.sample_count}, ce_max, edges, hist.masses
    )


_TARGET_BUILDERS = {
    TargetKind.UNIFORM: uniform_target,
    TargetKind.GAUSSIAN: gaussian_target,
    TargetKind.WEIBULL_LEFT: weibull_left_target,
    TargetKind.WEIBULL_RIGHT: weibull_right_target,
}


def make_target(kind: str, **params) -> TargetDistribution:
    k = TargetKind(kind)
    if k is TargetKind.EMPIRICAL:
        return empirical_target(**params)
    return _TARGET_BUILDERS[k](**params)


def sample_haar_product(n: int, count: int, seed: int, true_haar: bool = False) -> list[StateVector]:
    """Tensor products of independently random single-qubit states.

    ``true_haar=False`` draws the polar angle uniformly on (0, pi);
    ``true_haar=True`` draws cos(theta) uniformly on (-1, 1), the actual
    Bloch-sphere-uniform law. Azimuth is uniform on (0, 2 pi) either way.
    """
    rng = np.random.default_rng(seed)
    if true_haar:
        thetas = np.arccos(rng.uniform(-1.0, 1.0, size=(count, n)))
    else:
        thetas = rng.uniform(0.0, math.pi, size=(count, n))
    phis = rng.uniform(0.0, 2.0 * math.pi, size=(count, n))
    states = []
    for i in range(count):
        amps = np.array([1.0], dtype=np.complex128)
        for q in reversed(range(n)):  # highest qubit first so qubit 0 is the LSB
            single = np.array(
                [math.cos(thetas[i, q] / 2.0),
                 np.exp(1j * phis[i, q]) * math.sin(thetas[i, q] / 2.0)],
                dtype=np.complex128,
            )
            amps = np.kron(amps, single)
        states.append(StateVector(n, amps))
    return states


@dataclass(frozen=True)
class ObjectiveBreakdown:
    """One objective evaluation, decomposed so total = tvd + penalty exactly."""

    tvd: float
    penalty: float
    total: float
    mean_p0: float
    histogram: CEHistogram
    ce_values: np.ndarray


def evaluate_objective(
    params,
    circuit: Circuit,
    target: TargetDistribution,
    inputs: list[StateVector],
    config: AnnealConfig,
    pair_seed: int = 0,
) -> ObjectiveBreakdown:
    """Transform ``inputs`` through the bound circuit, bin the per-state CE,
    and score TVD to the target plus the mode-collapse penalty."""
    cc = circuit.compiled()
    angles = cc.bind(params)
    n = circuit.num_qubits
    batch = np.array([s.amplitudes for s in inputs], dtype=np.complex128)
    backend.run_circuit_batch(batch, n, cc.kinds, cc.t0, cc.t1, cc.t2, angles)
    ce_vals = ce_values_for_batch(batch, n, method=config.ce_method)
    hist = histogram(ce_vals, target.bin_edges)
    distance = tvd(hist, target.as_histogram())
    states = [StateVector(n, row) for row in batch]
    report = diversity_scan(
        states, ce_vals,
        bin_edges=np.array([0.0, target.ce_max]),
        pairs_per_bin=config.diversity_pairs,
        shots=0,
        seed=pair_seed,
        threshold=config.diversity_threshold,
    )
    penalty = diversity_penalty(report, config.diversity_weight)
    return ObjectiveBreakdown(
        distance, penalty, distance + penalty, report.overall_mean_p0, hist, ce_vals
    )


@dataclass
class GenerationRun:
    """A completed training run: what was trained, on what, and how well."""

    ansatz: AnsatzSpec
    target: TargetDistribution
    best_params: np.ndarray
    best_cost: float
    final_tvd: float
    cost_trace: np.ndarray
    seed: int
    anneal: AnnealResult = field(repr=False, default=None)


def train_generator(spec: AnsatzSpec, target: TargetDistribution,
                    config: AnnealConfig, true_haar: bool = False) -> GenerationRun:
    """Tune the ansatz so transformed Haar-product inputs match the target CE
    distribution; ``final_tvd`` is evaluated on a held-out input ensemble."""
    circuit = build_ansatz(spec)
    if len(config.bounds) == 1 and circuit.num_symbolic_params > 1:
        bounds = config.bounds * circuit.num_symbolic_params
    else:
        bounds = config.bounds
    if len(bounds) != circuit.num_symbolic_params:
        raise StructureError(
            f"{len(bounds)} bounds for {circuit.num_symbolic_params} parameters"
        )
    config = replace(config, bounds=bounds)
    root = config.seed
    n = spec.num_qubits
    eval_index = 0

    def objective(params) -> float:
        nonlocal eval_index
        inputs = sample_haar_product(
            n, config.samples_per_eval, derive_seed(root, f"train-inputs-{eval_index}"),
            true_haar=true_haar,
        )
        breakdown = evaluate_objective(
            params, circuit, target, inputs, config,
            pair_seed=derive_seed(root, f"train-pairs-{eval_index}"),
        )
        eval_index += 1
        return breakdown.total

    result = dual_annealing(objective, config)
    holdout = sample_haar_product(
        n, config.holdout_samples, derive_seed(root, "holdout"), true_haar=true_haar
    )
    final = evaluate_objective(
        result.best_params, circuit, target, holdout, config,
        pair_seed=derive_seed(root, "holdout-pairs"),
    )
    return GenerationRun(
        spec, target, result.best_params, result.best_cost, final.tvd,
        result.cost_trace, root, anneal=result,
    )


@dataclass
class Dataset:
    """Generated ensemble with per-state CE values and full provenance."""

    states: list[StateVector]
    ce_values: np.ndarray
    metadata: dict


def generate_dataset(run: GenerationRun, count: int, seed: int, shots: int = 0,
                     noise: NoiseSpec | None = None, true_haar: bool = False) -> Dataset:
    """Fresh Haar-product inputs through the trained circuit.

    ``shots = 0`` records exact-mode CE (re-loadable datasets recompute to the
    same values); a positive budget switches the estimator to shot mode.
    ``noise`` runs one seeded Monte-Carlo trajectory per state.
    """
    circuit = build_ansatz(run.ansatz)
    n = run.ansatz.num_qubits
    inputs = sample_haar_product(n, count, derive_seed(seed, "dataset-inputs"), true_haar)
    method = "full"
    if noise is None:
        cc = circuit.compiled()
        angles = cc.bind(run.best_params)
        batch = np.array([s.amplitudes for s in inputs], dtype=np.complex128)
        backend.run_circuit_batch(batch, n, cc.kinds, cc.t0, cc.t1, cc.t2, angles)
        states = [StateVector(n, row) for row in batch]
    else:
        states = [
            apply_circuit_noisy(s, circuit, run.best_params, noise,
                                derive_seed(seed, f"trajectory-{i}"))
            for i, s in enumerate(inputs)
        ]
        batch = np.array([s.amplitudes for s in states], dtype=np.complex128)
    ce_vals = ce_values_for_batch(batch, n, method=method, shots=shots,
                                  seed=derive_seed(seed, "ce-shots"))
    metadata = {
        "kind": "generated",
        "num_qubits": n,
        "count": count,
        "seed": seed,
        "shots": shots,
        "ce_method": method,
        "ansatz_family": run.ansatz.family.value,
        "ansatz_layers": run.ansatz.layers,
        "target_kind": run.target.kind.value,
        "noise": "none" if noise is None else f"p1={noise.p1!r},p2={noise.p2!r},p_readout={noise.p_readout!r}",
    }
    return Dataset(states, ce_vals, metadata)


def _average_ranks(values: np.ndarray) -> np.ndarray:
    """Ranks 1..m, ties sharing the mean of the tied rank positions."""
    order = np.argsort(values, kind="stable")
    ranks = np.empty(values.size, dtype=np.float64)
    i = 0
    while i < values.size:
        j = i
        while j + 1 < values.size and values[order[j + 1]] == values[order[i]]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


@dataclass(frozen=True)
class FamilyComparison:
    family: AnsatzFamily
    tvds: tuple[float, ...]
    mean_tvd: float
    median_tvd: float
    tvd_variance: float
    avg_rank: float


def compare_ansatzes(targets: list[TargetDistribution], families, num_qubits: int,
                     config: AnnealConfig, layers: int = 1) -> list[FamilyComparison]:
    """Train every family on every target; aggregate TVD stats and average rank."""
    families = [AnsatzFamily(f) for f in families]
    if len(families) < 2:
        raise DegenerateInputError("comparison needs at least two ansatz families")
    if not targets:
        raise DegenerateInputError("comparison needs at least one target")
    tvd_matrix = np.zeros((len(families), len(targets)))
    for fi, family in enumerate(families):
        for ti, target in enumerate(targets):
            run_seed = derive_seed(config.seed, f"compare:{family.value}:{target.kind.value}:{ti}")
            run = train_generator(
                AnsatzSpec(family, num_qubits, layers), target, config.with_seed(run_seed)
            )
            tvd_matrix[fi, ti] = run.final_tvd
    rank_matrix = np.stack([_average_ranks(tvd_matrix[:, ti]) for ti in range(len(targets))], axis=1)
    rows = []
    for fi, family in enumerate(families):
        rows.append(FamilyComparison(
            family,
            tuple(float(v) for v in tvd_matrix[fi]),
            float(np.mean(tvd_matrix[fi])),
            float(np.median(tvd_matrix[fi])),
            float(np.var(tvd_matrix[fi])),
            float(np.mean(rank_matrix[fi])),
        ))
    return rows
