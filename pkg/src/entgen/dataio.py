"""Artifact serialization: dataset files, run files, and report tables.

Dataset files carry a ``# key = value`` header block followed by one row per
sample: id, CE value, then interleaved real/imag amplitude columns printed
with 17 significant digits (exact round-trip for 64-bit floats). All writes
go through write-temp-then-rename so readers never see partial artifacts.
"""

from __future__ import annotations

import os
import tempfile

import numpy as np

from .errors import ConfigError, ShapeError
from .statevector import StateVector


def write_text_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".entgen-tmp-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def dataset_to_text(states: list[StateVector], ce_values, metadata: dict) -> str:
    n = states[0].num_qubits
    lines = ["# entgen dataset", "# format_version = 1"]
    for key in sorted(metadata):
        lines.append(f"# {key} = {metadata[key]}")
    lines.append(f"# columns = id ce " + " ".join(f"re{i} im{i}" for i in range(1 << n)))
    ce_values = np.asarray(ce_values, dtype=np.float64)
    for i, state in enumerate(states):
        cells = [str(i), f"{ce_values[i]:.17g}"]
        for amp in state.amplitudes:
            cells.append(f"{amp.real:.17g}")
            cells.append(f"{amp.imag:.17g}")
        lines.append(" ".join(cells))
    return "\n".join(lines) + "\n"


def parse_dataset(text: str) -> tuple[list[StateVector], np.ndarray, dict]:
    metadata: dict[str, str] = {}
    states: list[StateVector] = []
    ce_values: list[float] = []
    num_qubits = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if "=" in body:
                key, _, value = body.partition("=")
                metadata[key.strip()] = value.strip()
            continue
        cells = line.split()
        if len(cells) < 4 or (len(cells) - 2) % 2:
            raise ShapeError(f"dataset line {lineno}: malformed row of {len(cells)} cells")
        dim = (len(cells) - 2) // 2
        if dim & (dim - 1):
            raise ShapeError(f"dataset line {lineno}: {dim} amplitudes is not a power of two")
        if num_qubits is None:
            num_qubits = dim.bit_length() - 1
        elif dim != (1 << num_qubits):
            raise ShapeError(f"dataset line {lineno}: inconsistent amplitude count")
        ce_values.append(float(cells[1]))
        values = np.array([float(c) for c in cells[2:]])
        states.append(StateVector(num_qubits, values[0::2] + 1j * values[1::2]))
    if not states:
        raise ShapeError("dataset file holds no sample rows")
    return states, np.asarray(ce_values), metadata


def load_dataset(path: str) -> tuple[list[StateVector], np.ndarray, dict]:
    try:
        with open(path, encoding="utf-8") as fh:
            return parse_dataset(fh.read())
    except OSError as exc:
        raise ConfigError(f"cannot read dataset: {exc}") from exc


def comparison_table(rows) -> str:
    lines = ["# family mean_tvd median_tvd tvd_variance avg_rank per_target_tvds"]
    for row in rows:
        tvds = ",".join(f"{v:.17g}" for v in row.tvds)
        lines.append(
            f"{row.family.value} {row.mean_tvd:.17g} {row.median_tvd:.17g} "
            f"{row.tvd_variance:.17g} {row.avg_rank:.17g} {tvds}"
        )
    return "\n".join(lines) + "\n"


def metrics_table(named_results: list[tuple[str, object]], baseline_accuracy: float) -> str:
    """Table-style report: one block per mode, fold rows plus a mean row,
    each with the accuracy relative to the classical baseline."""
    lines = ["# mode fold accuracy precision recall f1 relative_accuracy"]
    for name, cv in named_results:
        for fm in list(cv.per_fold) + [cv.mean]:
            fold = "mean" if fm.fold_index < 0 else str(fm.fold_index)
            rel = fm.accuracy / baseline_accuracy if baseline_accuracy > 0 else float("nan")
            lines.append(
                f"{name} {fold} {fm.accuracy:.6f} {fm.precision:.6f} "
                f"{fm.recall:.6f} {fm.f1:.6f} {rel:.6f}"
            )
    return "\n".join(lines) + "\n"
