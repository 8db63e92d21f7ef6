"""Pure-numpy statevector kernels.

Fallback implementation of the kernel API in ``entgen._core``; selected by
``entgen.backend`` when the compiled extension is unavailable or when
``ENTGEN_BACKEND=pure``. All functions mutate ``amps``/``batch`` in place and
assume C-contiguous complex128 arrays of length ``2**n``.
"""

from __future__ import annotations

import numpy as np

BACKEND_NAME = "pure"

_K_RX, _K_RY, _K_RZ, _K_H, _K_X, _K_CNOT, _K_CRX, _K_CRZ, _K_CSWAP = range(9)

_INV_SQRT2 = 1.0 / np.sqrt(2.0)


def _mat2(kind: int, angle: float) -> np.ndarray:
    c = np.cos(angle / 2.0)
    s = np.sin(angle / 2.0)
    if kind in (_K_RX, _K_CRX):
        return np.array([[c, -1j * s], [-1j * s, c]])
    if kind == _K_RY:
        return np.array([[c, -s], [s, c]], dtype=complex)
    if kind in (_K_RZ, _K_CRZ):
        return np.array([[c - 1j * s, 0.0], [0.0, c + 1j * s]])
    if kind == _K_H:
        return np.array([[_INV_SQRT2, _INV_SQRT2], [_INV_SQRT2, -_INV_SQRT2]], dtype=complex)
    if kind == _K_X:
        return np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
    raise ValueError(f"not a single-qubit matrix kind: {kind}")


def _apply_1q(amps: np.ndarray, target: int, m: np.ndarray) -> None:
    # view with the target bit as the middle axis: index = hi*2^(t+1) + b*2^t + lo
    a = amps.reshape(-1, 2, 1 << target)
    a0 = a[:, 0, :].copy()
    a1 = a[:, 1, :]
    a[:, 0, :] = m[0, 0] * a0 + m[0, 1] * a1
    a[:, 1, :] = m[1, 0] * a0 + m[1, 1] * a1


def _apply_ctrl_1q(amps: np.ndarray, control: int, target: int, m: np.ndarray) -> None:
    hi, lo = max(control, target), min(control, target)
    a = amps.reshape(-1, 2, 1 << (hi - lo - 1), 2, 1 << lo)
    sub = a[:, :, :, 1, :] if control == lo else a[:, 1, :, :, :]
    # remaining pair axis belongs to the target
    if control == lo:
        t0 = sub[:, 0, :, :].copy()
        t1 = sub[:, 1, :, :]
        sub[:, 0, :, :] = m[0, 0] * t0 + m[0, 1] * t1
        sub[:, 1, :, :] = m[1, 0] * t0 + m[1, 1] * t1
    else:
        t0 = sub[:, :, 0, :].copy()
        t1 = sub[:, :, 1, :]
        sub[:, :, 0, :] = m[0, 0] * t0 + m[0, 1] * t1
        sub[:, :, 1, :] = m[1, 0] * t0 + m[1, 1] * t1


def _swap_indices(amps: np.ndarray, i_idx: np.ndarray, j_idx: np.ndarray) -> None:
    tmp = amps[i_idx].copy()
    amps[i_idx] = amps[j_idx]
    amps[j_idx] = tmp


def _apply_cnot(amps: np.ndarray, control: int, target: int) -> None:
    idx = np.arange(amps.shape[0])
    sel = ((idx >> control) & 1).astype(bool) & (((idx >> target) & 1) == 0)
    i_idx = idx[sel]
    _swap_indices(amps, i_idx, i_idx | (1 << target))


def _apply_cswap(amps: np.ndarray, control: int, a: int, b: int) -> None:
    idx = np.arange(amps.shape[0])
    sel = (
        ((idx >> control) & 1).astype(bool)
        & ((idx >> a) & 1).astype(bool)
        & (((idx >> b) & 1) == 0)
    )
    i_idx = idx[sel]
    _swap_indices(amps, i_idx, i_idx ^ (1 << a) ^ (1 << b))


def apply_gate(amps: np.ndarray, n: int, kind: int, t0: int, t1: int, t2: int, angle: float) -> None:
    if kind == _K_CNOT:
        _apply_cnot(amps, t0, t1)
    elif kind == _K_CSWAP:
        _apply_cswap(amps, t0, t1, t2)
    elif kind in (_K_CRX, _K_CRZ):
        _apply_ctrl_1q(amps, t0, t1, _mat2(kind, angle))
    else:
        _apply_1q(amps, t0, _mat2(kind, angle))


def apply_pauli(amps: np.ndarray, n: int, which: int, target: int) -> None:
    """Apply X (0), Y (1) or Z (2) to ``target`` in place."""
    a = amps.reshape(-1, 2, 1 << target)
    if which == 0:
        a0 = a[:, 0, :].copy()
        a[:, 0, :] = a[:, 1, :]
        a[:, 1, :] = a0
    elif which == 1:
        a0 = a[:, 0, :].copy()
        a[:, 0, :] = -1j * a[:, 1, :]
        a[:, 1, :] = 1j * a0
    elif which == 2:
        a[:, 1, :] *= -1.0
    else:
        raise ValueError(f"pauli code must be 0..2, got {which}")


def run_circuit(amps, n, kinds, t0, t1, t2, angles) -> None:
    for g in range(len(kinds)):
        apply_gate(amps, n, int(kinds[g]), int(t0[g]), int(t1[g]), int(t2[g]), float(angles[g]))


def run_circuit_batch(batch, n, kinds, t0, t1, t2, angles) -> None:
    for row in batch:
        run_circuit(row, n, kinds, t0, t1, t2, angles)


def _scatter_indices(n: int, mask: int) -> tuple[np.ndarray, np.ndarray]:
    """Index tables mapping (subset value, rest value) -> basis index."""
    sub_bits = [q for q in range(n) if (mask >> q) & 1]
    rest_bits = [q for q in range(n) if not (mask >> q) & 1]
    sidx = np.zeros(1 << len(sub_bits), dtype=np.int64)
    for j, q in enumerate(sub_bits):
        sidx |= ((np.arange(sidx.size) >> j) & 1) << q
    ridx = np.zeros(1 << len(rest_bits), dtype=np.int64)
    for j, q in enumerate(rest_bits):
        ridx |= ((np.arange(ridx.size) >> j) & 1) << q
    return sidx, ridx


def subset_purity(amps: np.ndarray, n: int, mask: int) -> float:
    """Tr(rho_S^2) for the subset of qubits whose bits are set in ``mask``."""
    if mask <= 0 or mask >= (1 << n):
        raise ValueError(f"mask must select a nonempty proper or full subset, got {mask}")
    sidx, ridx = _scatter_indices(n, mask)
    a = amps[sidx[:, None] + ridx[None, :]]
    gram = a @ a.conj().T
    return float(np.real(np.sum(gram * gram.conj())))


def powerset_purity_sum(amps: np.ndarray, n: int) -> float:
    """Sum of Tr(rho_a^2) over all 2^n subsets of a pure state.

    The empty and full subsets contribute 1 each analytically. Proper-subset
    purities come in equal complement pairs for pure states, so only masks of
    size <= n/2 are evaluated.
    """
    total = 2.0
    full = (1 << n) - 1
    for mask in range(1, full):
        k = int(mask).bit_count()
        if 2 * k < n:
            total += 2.0 * subset_purity(amps, n, mask)
        elif 2 * k == n and mask < (full ^ mask):
            total += 2.0 * subset_purity(amps, n, mask)
    return total


def ce_full_batch(batch: np.ndarray, n: int) -> np.ndarray:
    scale = 1.0 / (1 << n)
    out = np.empty(batch.shape[0], dtype=np.float64)
    for i in range(batch.shape[0]):
        out[i] = 1.0 - scale * powerset_purity_sum(batch[i], n)
    return out
