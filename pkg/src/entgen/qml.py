"""Three-qubit variational classifier on CE feature vectors.

Each 9-value feature vector enters through an RY-RX-RZ feature map (three
rotations per qubit), followed by a real-amplitudes-style variational block:
an RY layer, then per repetition an all-to-all CNOT entangler and another RY
layer (9 trainable angles at the default two repetitions). The readout is the
Z expectation on qubit 0; training minimizes the MSE between that expectation
and labels mapped to +1 (label 0) / -1 (label 1). A logistic-regression
baseline trained with plain batch gradient descent provides the classical
reference on identical folds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import backend
from .anneal import AnnealConfig, dual_annealing
from .errors import DegenerateInputError, ParameterCountError, ShapeError
from .gates import Circuit, GateKind, GateOp
from .seeding import derive_seed
from .statevector import NoiseSpec, StateVector, apply_circuit_noisy, zero_state

FEATURES_PER_SAMPLE = 9


@dataclass(frozen=True)
class LabeledSample:
    features: tuple[float, ...]
    label: int

    def __post_init__(self):
        object.__setattr__(self, "features", tuple(float(f) for f in self.features))
        if len(self.features) != FEATURES_PER_SAMPLE:
            raise ShapeError(f"expected {FEATURES_PER_SAMPLE} features, got {len(self.features)}")
        if self.label not in (0, 1):
            raise ShapeError(f"label must be 0 or 1, got {self.label}")


@dataclass(frozen=True)
class ClassifierSpec:
    num_qubits: int = 3
    ansatz_reps: int = 2
    decision_threshold: float = 0.0

    @property
    def num_params(self) -> int:
        return self.num_qubits * (self.ansatz_reps + 1)


def feature_map_circuit(features) -> Circuit:
    """RY-RX-RZ encoding: qubit q receives features 3q, 3q+1, 3q+2."""
    feats = np.asarray(features, dtype=np.float64)
    if feats.shape != (FEATURES_PER_SAMPLE,) or not np.all(np.isfinite(feats)):
        raise ShapeError(f"need {FEATURES_PER_SAMPLE} finite features, got shape {feats.shape}")
    ops = []
    for q in range(3):
        ops.append(GateOp(GateKind.RY, (q,), angle=float(feats[3 * q])))
        ops.append(GateOp(GateKind.RX, (q,), angle=float(feats[3 * q + 1])))
        ops.append(GateOp(GateKind.RZ, (q,), angle=float(feats[3 * q + 2])))
    return Circuit(3, ops)


def classifier_circuit(features, spec: ClassifierSpec = ClassifierSpec()) -> Circuit:
    """Feature map followed by the variational block (symbolic parameters)."""
    base = feature_map_circuit(features)
    ops = list(base.ops)
    n = spec.num_qubits
    p = 0
    for q in range(n):
        ops.append(GateOp(GateKind.RY, (q,), param_index=p))
        p += 1
    for _ in range(spec.ansatz_reps):
        for i in range(n):
            for j in range(i + 1, n):
                ops.append(GateOp(GateKind.CNOT, (i, j)))
        for q in range(n):
            ops.append(GateOp(GateKind.RY, (q,), param_index=p))
            p += 1
    return Circuit(n, ops, num_symbolic_params=p)


_Z0_SIGNS = 1.0 - 2.0 * (np.arange(8) & 1)  # +1 where qubit 0 (index LSB) is 0


def _expectation_batch(feature_matrix: np.ndarray, params: np.ndarray,
                       template) -> np.ndarray:
    """Exact <Z0> per row of ``feature_matrix`` (ideal simulation)."""
    cc = template
    angles = cc.bind(params)
    out = np.empty(feature_matrix.shape[0])
    amps = np.zeros(8, dtype=np.complex128)
    for i, feats in enumerate(feature_matrix):
        angles[:FEATURES_PER_SAMPLE] = feats  # feature gates are emitted first
        amps[:] = 0.0
        amps[0] = 1.0
        backend.run_circuit(amps, 3, cc.kinds, cc.t0, cc.t1, cc.t2, angles)
        out[i] = np.real(np.sum(_Z0_SIGNS * (amps.real**2 + amps.imag**2)))
    return out


def classifier_expectation(features, params, spec: ClassifierSpec = ClassifierSpec(),
                           noise: NoiseSpec | None = None, seed: int = 0,
                           trajectories: int = 256) -> float:
    """<Z0> after the feature map and variational block.

    Ideal mode is exact. With noise, the value is averaged over seeded
    Monte-Carlo trajectories and scaled by (1 - 2 p_readout), the exact effect
    of an independent readout flip on a Z expectation.
    """
    params = np.asarray(params, dtype=np.float64)
    spec_params = spec.num_params
    if params.shape != (spec_params,):
        raise ParameterCountError(f"expected {spec_params} parameters, got {params.shape}")
    circuit = classifier_circuit(features, spec)
    if noise is None:
        feats = np.asarray(features, dtype=np.float64)[None, :]
        return float(_expectation_batch(feats, params, circuit.compiled())[0])
    start = zero_state(spec.num_qubits)
    total = 0.0
    for t in range(trajectories):
        out = apply_circuit_noisy(start, circuit, params, noise, derive_seed(seed, f"traj-{t}"))
        total += float(np.sum(_Z0_SIGNS * out.probabilities()))
    return (total / trajectories) * (1.0 - 2.0 * noise.p_readout)


@dataclass
class TrainResult:
    params: np.ndarray
    best_cost: float
    cost_trace: np.ndarray


def _as_arrays(dataset: list[LabeledSample]) -> tuple[np.ndarray, np.ndarray]:
    feats = np.array([s.features for s in dataset], dtype=np.float64)
    labels = np.array([s.label for s in dataset], dtype=np.int64)
    return feats, labels


def train(dataset: list[LabeledSample], config: AnnealConfig,
          spec: ClassifierSpec = ClassifierSpec()) -> TrainResult:
    """Anneal the variational angles to minimize MSE(<Z0>, +/-1 targets)."""
    if not dataset:
        raise DegenerateInputError("empty training set")
    feats, labels = _as_arrays(dataset)
    if len(set(labels.tolist())) < 2:
        raise DegenerateInputError("training set must contain both classes")
    bounds = config.bounds
    if len(bounds) == 1 and spec.num_params > 1:
        bounds = bounds * spec.num_params
    config = replace(config, bounds=bounds)
    targets = np.where(labels == 0, 1.0, -1.0)
    template = classifier_circuit(np.zeros(FEATURES_PER_SAMPLE), spec).compiled()

    def objective(params) -> float:
        exp = _expectation_batch(feats, np.asarray(params, dtype=np.float64), template)
        return float(np.mean((exp - targets) ** 2))

    result = dual_annealing(objective, config)
    return TrainResult(result.best_params, result.best_cost, result.cost_trace)


@dataclass(frozen=True)
class FoldMetrics:
    fold_index: int
    accuracy: float
    precision: float
    recall: float
    f1: float


def _metrics(fold_index: int, y_true: np.ndarray, y_pred: np.ndarray) -> FoldMetrics:
    tp = int(np.sum((y_pred == 1) & (y_true == 1)))
    fp = int(np.sum((y_pred == 1) & (y_true == 0)))
    fn = int(np.sum((y_pred == 0) & (y_true == 1)))
    accuracy = float(np.mean(y_pred == y_true))
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return FoldMetrics(fold_index, accuracy, precision, recall, f1)


def _mean_metrics(folds: list[FoldMetrics]) -> FoldMetrics:
    return FoldMetrics(
        -1,
        float(np.mean([f.accuracy for f in folds])),
        float(np.mean([f.precision for f in folds])),
        float(np.mean([f.recall for f in folds])),
        float(np.mean([f.f1 for f in folds])),
    )


def stratified_folds(labels: np.ndarray, folds: int, seed: int) -> list[np.ndarray]:
    """Round-robin deal within each shuffled class; every fold sees both classes."""
    labels = np.asarray(labels)
    if labels.size < folds:
        raise DegenerateInputError(f"{labels.size} samples cannot fill {folds} folds")
    rng = np.random.default_rng(seed)
    assignments: list[list[int]] = [[] for _ in range(folds)]
    for cls in np.unique(labels):
        members = np.nonzero(labels == cls)[0]
        if members.size < folds:
            raise DegenerateInputError(
                f"class {cls} has {members.size} samples, fewer than {folds} folds; re-seed "
                "or rebalance the dataset"
            )
        members = rng.permutation(members)
        for i, idx in enumerate(members):
            assignments[i % folds].append(int(idx))
    return [np.sort(np.array(a, dtype=np.int64)) for a in assignments]


@dataclass
class CVResult:
    per_fold: list[FoldMetrics]
    mean: FoldMetrics
    fold_params: list[np.ndarray] = field(default_factory=list)


def cross_validate(dataset: list[LabeledSample], config: AnnealConfig,
                   spec: ClassifierSpec = ClassifierSpec(), folds: int = 5, seed: int = 0,
                   noise: NoiseSpec | None = None, trajectories: int = 256) -> CVResult:
    """Stratified k-fold CV. Training is always ideal-mode; a noise spec makes
    the held-out evaluation noisy (trajectory-averaged expectations)."""
    feats, labels = _as_arrays(dataset)
    fold_indices = stratified_folds(labels, folds, seed)
    per_fold: list[FoldMetrics] = []
    fold_params: list[np.ndarray] = []
    template = classifier_circuit(np.zeros(FEATURES_PER_SAMPLE), spec).compiled()
    for f, test_idx in enumerate(fold_indices):
        train_idx = np.setdiff1d(np.arange(len(dataset)), test_idx)
        trained = train(
            [dataset[i] for i in train_idx],
            config.with_seed(derive_seed(seed, f"fold-{f}")),
            spec,
        )
        fold_params.append(trained.params)
        if noise is None:
            exp = _expectation_batch(feats[test_idx], trained.params, template)
        else:
            exp = np.array([
                classifier_expectation(
                    feats[i], trained.params, spec, noise=noise,
                    seed=derive_seed(seed, f"noisy-eval-{f}-{i}"),
                    trajectories=trajectories,
                )
                for i in test_idx
            ])
        y_pred = (exp < spec.decision_threshold).astype(np.int64)
        per_fold.append(_metrics(f, labels[test_idx], y_pred))
    return CVResult(per_fold, _mean_metrics(per_fold), fold_params)


def logistic_baseline(dataset: list[LabeledSample], folds: int = 5, seed: int = 0,
                      l2: float = 1e-3, step: float = 0.1, epochs: int = 500) -> CVResult:
    """L2-regularized logistic regression by full-batch gradient descent,
    evaluated on the same stratified folds as the quantum model."""
    feats, labels = _as_arrays(dataset)
    fold_indices = stratified_folds(labels, folds, seed)
    per_fold: list[FoldMetrics] = []
    for f, test_idx in enumerate(fold_indices):
        train_idx = np.setdiff1d(np.arange(len(dataset)), test_idx)
        x_train, y_train = feats[train_idx], labels[train_idx]
        mu = x_train.mean(axis=0)
        sigma = np.maximum(x_train.std(axis=0), 1e-12)
        x_train = (x_train - mu) / sigma
        x_test = (feats[test_idx] - mu) / sigma
        w = np.zeros(x_train.shape[1])
        b = 0.0
        for _ in range(epochs):
            z = x_train @ w + b
            p = 1.0 / (1.0 + np.exp(-z))
            err = p - y_train
            w -= step * (x_train.T @ err / len(y_train) + l2 * w)
            b -= step * float(np.mean(err))
        y_pred = ((x_test @ w + b) > 0).astype(np.int64)
        per_fold.append(_metrics(f, labels[test_idx], y_pred))
    return CVResult(per_fold, _mean_metrics(per_fold))


def samples_from_ce_arrays(low_ce, high_ce, block: int = FEATURES_PER_SAMPLE) -> list[LabeledSample]:
    """Batch CE value streams into labeled samples: consecutive non-overlapping
    blocks, label 0 for the low-moisture stream and 1 for the high."""
    samples = []
    for values, label in ((np.asarray(low_ce), 0), (np.asarray(high_ce), 1)):
        for i in range(values.size // block):
            samples.append(LabeledSample(tuple(values[i * block:(i + 1) * block]), label))
    if not samples:
        raise DegenerateInputError(f"need at least {block} CE values per class")
    return samples


def mirrored_readout_params(params, spec: ClassifierSpec = ClassifierSpec()) -> np.ndarray:
    """Parameters whose model emits exactly -<Z0> for every input.

    Shifting the final RY on qubit 0 by pi conjugates the readout by Y, which
    maps Z to -Z; useful for label-flip symmetry checks.
    """
    params = np.asarray(params, dtype=np.float64).copy()
    params[spec.num_qubits * spec.ansatz_reps] += math.pi  # first angle of the last RY layer
    return params
