"""Gate matrices and the tensor kernel shared by matrix synthesis and simulation.

Convention: for an operator on operands ``(o_0, ..., o_{k-1})`` bit ``j`` of the
matrix row/column index is the state of ``o_j``.  For ``cx c, t`` the control is
bit 0 and the target bit 1.  State vectors use the same little-endian layout
with global qubit ``q`` as bit ``q``.
"""
from __future__ import annotations

import cmath
import math
from typing import Sequence

import numpy as np

_SQ2 = 1 / math.sqrt(2)


def u3(theta: float, phi: float, lam: float) -> np.ndarray:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array(
        [
            [c, -cmath.exp(1j * lam) * s],
            [cmath.exp(1j * phi) * s, cmath.exp(1j * (phi + lam)) * c],
        ],
        dtype=complex,
    )


def _controlled_perm(k: int, mapping) -> np.ndarray:
    dim = 2**k
    m = np.zeros((dim, dim), dtype=complex)
    for col in range(dim):
        m[mapping(col), col] = 1
    return m


_FIXED = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
    "h": np.array([[_SQ2, _SQ2], [_SQ2, -_SQ2]], dtype=complex),
    "s": np.diag([1, 1j]).astype(complex),
    "sdg": np.diag([1, -1j]).astype(complex),
    "t": np.diag([1, cmath.exp(1j * math.pi / 4)]),
    "tdg": np.diag([1, cmath.exp(-1j * math.pi / 4)]),
    "cx": _controlled_perm(2, lambda i: i ^ 2 if i & 1 else i),
    "cz": np.diag([1, 1, 1, -1]).astype(complex),
    "swap": _controlled_perm(2, lambda i: ((i & 1) << 1) | ((i >> 1) & 1)),
    "ccx": _controlled_perm(3, lambda i: i ^ 4 if (i & 3) == 3 else i),
}


def gate_matrix(name: str, params: Sequence[float] = ()) -> np.ndarray:
    """Matrix of a builtin gate."""
    if name in _FIXED:
        return _FIXED[name]
    if name == "rx":
        (theta,) = params
        c, s = math.cos(theta / 2), math.sin(theta / 2)
        return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)
    if name == "ry":
        (theta,) = params
        c, s = math.cos(theta / 2), math.sin(theta / 2)
        return np.array([[c, -s], [s, c]], dtype=complex)
    if name == "rz":
        (theta,) = params
        return np.diag([cmath.exp(-0.5j * theta), cmath.exp(0.5j * theta)])
    if name == "u1":
        (lam,) = params
        return np.diag([1, cmath.exp(1j * lam)]).astype(complex)
    if name == "u2":
        phi, lam = params
        return u3(math.pi / 2, phi, lam)
    if name == "u3":
        return u3(*params)
    raise KeyError(f"unknown gate {name!r}")


def apply_matrix(psi: np.ndarray, matrix: np.ndarray, qubits: Sequence[int], n: int) -> np.ndarray:
    """Apply ``matrix`` to ``qubits`` of a state tensor of shape ``(2,)*n + batch``.

    Axis ``n-1-q`` of the tensor holds qubit ``q`` so that ``psi.reshape(-1)``
    is the little-endian state vector.  Trailing batch axes are carried along.
    """
    k = len(qubits)
    ut = matrix.reshape((2,) * (2 * k))
    # ut axis m (m < k) is output bit k-1-m; axis k+m is input bit k-1-m
    psi_axes = [n - 1 - qubits[k - 1 - m] for m in range(k)]
    out = np.tensordot(ut, psi, axes=(list(range(k, 2 * k)), psi_axes))
    return np.moveaxis(out, list(range(k)), psi_axes)


def operator_matrix(ops: Sequence[tuple[np.ndarray, Sequence[int]]], qubits: Sequence[int]) -> np.ndarray:
    """Compose ``(matrix, global qubits)`` pairs into one matrix over ``qubits``.

    Bit ``j`` of the result index corresponds to ``qubits[j]``.
    """
    k = len(qubits)
    local = {q: j for j, q in enumerate(qubits)}
    dim = 2**k
    # columns of the identity as a batch of k-qubit states
    batch = np.eye(dim, dtype=complex).reshape((2,) * k + (dim,))
    for matrix, targets in ops:
        batch = apply_matrix(batch, matrix, [local[q] for q in targets], k)
    return batch.reshape(dim, dim)
