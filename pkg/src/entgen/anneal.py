"""Generalized simulated annealing (dual annealing without mid-run restarts).

Candidate steps come from a heavy-tailed Tsallis visiting distribution with
shape ``visiting_shape``; uphill moves are accepted under the generalized
Metropolis rule with shape ``acceptance_shape``; the temperature follows the
GSA schedule T(t) = T0 * (2^(qv-1) - 1) / ((t+2)^(qv-1) - 1). An optional
greedy coordinate-descent refinement of the incumbent runs at the end. The
default shapes/temperature are the widely used GSA settings.

One "iteration" is one objective evaluation, so ``max_iterations`` is the
annealing-phase evaluation budget and ``cost_trace`` records every evaluated
candidate in order (refinement evaluations included, appended after the
annealing phase).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import StructureError

_TAIL_LIMIT = 1e8
_MIN_VISIT_BOUND = 1e-10


@dataclass(frozen=True)
class AnnealConfig:
    """Search-space bounds, GSA schedule knobs, and objective configuration.

    The estimator-related fields (``samples_per_eval``, ``ce_method``,
    ``diversity_*``) configure objectives built by the generator/classifier
    layers; the optimizer itself only reads the schedule fields.
    """

    bounds: tuple[tuple[float, float], ...]
    max_iterations: int = 1000
    initial_temperature: float = 5230.0
    visiting_shape: float = 2.62
    acceptance_shape: float = -5.0
    local_search: bool = True
    seed: int = 0
    samples_per_eval: int = 200
    ce_method: str = "full"
    diversity_weight: float = 1.0
    diversity_pairs: int = 100
    diversity_threshold: float = 0.95
    holdout_samples: int = 1000

    def __post_init__(self):
        object.__setattr__(
            self, "bounds", tuple((float(lo), float(hi)) for lo, hi in self.bounds)
        )
        if not self.bounds:
            raise StructureError("bounds must be nonempty")
        if any(hi <= lo for lo, hi in self.bounds):
            raise StructureError("each bound must satisfy low < high")
        if self.max_iterations < 0:
            raise StructureError("max_iterations must be >= 0")
        if not 1.0 < self.visiting_shape < 3.0:
            raise StructureError("visiting_shape must lie in (1, 3)")
        if self.samples_per_eval < 10:
            raise StructureError("samples_per_eval must be >= 10")

    def with_seed(self, seed: int) -> "AnnealConfig":
        return replace(self, seed=seed)


@dataclass
class AnnealResult:
    best_params: np.ndarray
    best_cost: float
    cost_trace: np.ndarray
    evaluations: int
    accepted: int
    running_best: np.ndarray = field(init=False)

    def __post_init__(self):
        self.running_best = np.minimum.accumulate(self.cost_trace)


class _Visitor:
    """Tsallis visiting distribution sampler (shape qv in (1, 3))."""

    def __init__(self, qv: float, rng: np.random.Generator):
        self._qv = qv
        self._rng = rng
        factor2 = math.exp((4.0 - qv) * math.log(qv - 1.0))
        factor3 = math.exp((2.0 - qv) * math.log(2.0) / (qv - 1.0))
        self._factor4p = math.sqrt(math.pi) * factor2 / (factor3 * (3.0 - qv))
        factor5 = 1.0 / (qv - 1.0) - 0.5
        d1 = 2.0 - factor5
        self._factor6 = (
            math.pi * (1.0 - factor5) / math.sin(math.pi * (1.0 - factor5))
            / math.exp(math.lgamma(d1))
        )

    def draw(self, temperature: float, dim: int) -> np.ndarray:
        qv = self._qv
        x = self._rng.normal(size=dim)
        y = self._rng.normal(size=dim)
        factor1 = math.exp(math.log(temperature) / (qv - 1.0))
        factor4 = self._factor4p * factor1
        x *= math.exp(-(qv - 1.0) * math.log(self._factor6 / factor4) / (3.0 - qv))
        den = np.exp((qv - 1.0) * np.log(np.fabs(y)) / (3.0 - qv))
        visits = x / den
        big = visits > _TAIL_LIMIT
        visits[big] = _TAIL_LIMIT * self._rng.uniform(size=int(big.sum()))
        small = visits < -_TAIL_LIMIT
        visits[small] = -_TAIL_LIMIT * self._rng.uniform(size=int(small.sum()))
        return visits


def _wrap(x: np.ndarray, lower: np.ndarray, span: np.ndarray) -> np.ndarray:
    wrapped = np.fmod(np.fmod(x - lower, span) + span, span) + lower
    wrapped[np.fabs(wrapped - lower) < _MIN_VISIT_BOUND] += _MIN_VISIT_BOUND
    return wrapped


def dual_annealing(objective, config: AnnealConfig) -> AnnealResult:
    """Minimize ``objective(params) -> float`` within the configured bounds.

    Deterministic for a fixed config seed. A ``max_iterations`` of 0 skips
    the annealing phase and returns the evaluated random-uniform start point.
    """
    rng = np.random.default_rng(config.seed)
    lower = np.array([b[0] for b in config.bounds])
    upper = np.array([b[1] for b in config.bounds])
    span = upper - lower
    dim = lower.size
    qa = config.acceptance_shape
    qv = config.visiting_shape
    visitor = _Visitor(qv, rng)
    t1 = math.exp((qv - 1.0) * math.log(2.0)) - 1.0

    x = rng.uniform(lower, upper)
    energy = float(objective(x))
    trace = [energy]
    best_x, best_e = x.copy(), energy
    evals = 1
    accepted = 0

    step = 0
    while evals < config.max_iterations:
        t2 = math.exp((qv - 1.0) * math.log(step + 2.0)) - 1.0
        temperature = config.initial_temperature * t1 / t2
        temperature_step = temperature / (step + 1.0)
        for chain in range(2 * dim):
            if evals >= config.max_iterations:
                break
            if chain < dim:
                visit = visitor.draw(temperature, dim)
                x_new = _wrap(x + visit, lower, span)
            else:
                x_new = x.copy()
                coord = chain - dim
                v = float(visitor.draw(temperature, 1)[0])
                x_new[coord] = x[coord] + v
                x_new[coord : coord + 1] = _wrap(
                    x_new[coord : coord + 1], lower[coord : coord + 1], span[coord : coord + 1]
                )
            e_new = float(objective(x_new))
            trace.append(e_new)
            evals += 1
            if e_new < energy:
                take = True
            else:
                base = 1.0 - (1.0 - qa) * (e_new - energy) / temperature_step
                prob = 0.0 if base <= 0.0 else math.exp(math.log(base) / (1.0 - qa))
                take = rng.uniform() <= prob
            if take:
                x, energy = x_new, e_new
                accepted += 1
                if e_new < best_e:
                    best_x, best_e = x_new.copy(), e_new
        step += 1

    if config.local_search and config.max_iterations > 0:
        best_x, best_e, refine_trace = _coordinate_refine(
            objective, best_x, best_e, lower, upper
        )
        trace.extend(refine_trace)
        evals += len(refine_trace)

    return AnnealResult(best_x, best_e, np.asarray(trace, dtype=np.float64), evals, accepted)


def _coordinate_refine(objective, x, energy, lower, upper, max_evals: int = 200):
    """Greedy coordinate descent with a halving step, bounded by ``max_evals``."""
    span = upper - lower
    step = 0.1 * span
    trace: list[float] = []
    while len(trace) < max_evals and float(np.max(step / span)) > 1e-4:
        improved = False
        for coord in range(x.size):
            for sign in (1.0, -1.0):
                if len(trace) >= max_evals:
                    break
                cand = x.copy()
                cand[coord] = np.clip(cand[coord] + sign * step[coord], lower[coord], upper[coord])
                if cand[coord] == x[coord]:
                    continue
                e = float(objective(cand))
                trace.append(e)
                if e < energy:
                    x, energy = cand, e
                    improved = True
                    break
        if not improved:
            step *= 0.5
    return x, energy, trace
