"""Splitting equality assertions into single-qubit factors of the asserted state."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .program import FlatProgram, make_assertion
from .qasm import AssertionKind

SEPARABILITY_TOL = 1e-9
ADDED_BY = "separation"


def _phase_fix(vec: np.ndarray) -> tuple[np.ndarray, complex]:
    """Make the first nonzero component real positive; return the applied phase."""
    for c in vec:
        if abs(c) > 1e-12:
            phase = abs(c) / c
            return vec * phase, phase
    return vec, 1.0


def _as_tensor(amps: np.ndarray, k: int) -> np.ndarray:
    # axis j <-> target position j (position 0 is the least significant bit)
    return np.asarray(amps, dtype=complex).reshape((2,) * k).transpose(range(k - 1, -1, -1))


def separable_qubits(amps, tol: float = SEPARABILITY_TOL) -> tuple[list[tuple[int, np.ndarray]], np.ndarray | None, list[int]]:
    """Greedily extract every single-qubit tensor factor of a pure state.

    Returns ``(factors, residual, residual_positions)`` where ``factors`` lists
    ``(target position, normalized 2-vector)`` and ``residual`` is the state of
    the remaining positions (None once every qubit has been extracted).
    """
    amps = np.asarray(amps, dtype=complex)
    amps = amps / np.linalg.norm(amps)
    k = int(round(np.log2(len(amps))))
    tensor = _as_tensor(amps, k)
    positions = list(range(k))
    factors: list[tuple[int, np.ndarray]] = []
    j = 0
    while j < len(positions):
        if len(positions) == 1:
            vec, _ = _phase_fix(tensor.reshape(2) / np.linalg.norm(tensor))
            factors.append((positions[0], vec))
            return sorted(factors, key=lambda f: f[0]), None, []
        grouped = np.moveaxis(tensor, j, 0).reshape(2, -1)
        u, s, vh = np.linalg.svd(grouped, full_matrices=False)
        if s[1] < tol:
            left, phase = _phase_fix(u[:, 0])
            right = (vh[0] / phase).reshape(tensor.shape[:j] + tensor.shape[j + 1:])
            factors.append((positions[j], left))
            del positions[j]
            tensor = right / np.linalg.norm(right)
            j = 0
        else:
            j += 1
    residual = tensor.transpose(range(len(positions) - 1, -1, -1)).reshape(-1)
    return sorted(factors, key=lambda f: f[0]), residual, positions


def reconstruct(k: int, factors, residual, residual_positions) -> np.ndarray:
    """Tensor factors back into a 2^k amplitude vector (little-endian positions)."""
    pieces = [(p, v) for p, v in factors]
    tensor = np.ones((), dtype=complex)
    axes: list[int] = []
    for p, v in pieces:
        tensor = np.multiply.outer(tensor, v)
        axes.append(p)
    if residual is not None:
        r = len(residual_positions)
        tensor = np.multiply.outer(tensor, _as_tensor(residual, r))
        axes.extend(residual_positions)
    # current axis i holds position axes[i]; reorder to MSB-first layout
    order = [axes.index(p) for p in range(k - 1, -1, -1)]
    return tensor.transpose(order).reshape(-1)


def _clean(vec: np.ndarray) -> tuple[complex, ...]:
    out = []
    for c in vec:
        re_, im = round(c.real, 12), round(c.imag, 12)
        out.append(complex(re_ + 0.0, im + 0.0))
    return tuple(out)


@dataclass(frozen=True)
class SeparabilitySplit:
    source_assertion: int  # uid
    separable_qubits: tuple[tuple[int, tuple[complex, ...]], ...]  # (target position, amplitudes)
    residual: tuple[complex, ...] | None
    residual_positions: tuple[int, ...]
    added_uids: tuple[int, ...]
    dropped_original: bool = False

    def to_json(self, flat: FlatProgram) -> dict:
        return {
            "source_assertion": self.source_assertion,
            "separable": [
                {"position": p, "amplitudes": [[a.real, a.imag] for a in amps]}
                for p, amps in self.separable_qubits
            ],
            "residual_positions": list(self.residual_positions),
            "residual": None if self.residual is None else [[a.real, a.imag] for a in self.residual],
            "added_uids": list(self.added_uids),
            "dropped_original": self.dropped_original,
        }


def refine_equality(
    flat: FlatProgram, drop_subsumed: bool = False, tol: float = SEPARABILITY_TOL
) -> tuple[FlatProgram, list[SeparabilitySplit]]:
    """Insert single-qubit ``assert-eq`` for each separable target right above
    the multi-qubit equality assertion it came from."""
    items = list(flat.instructions)
    splits: list[SeparabilitySplit] = []
    next_uid = flat.next_uid()
    originals = [
        ins for ins in flat.instructions
        if ins.assertion_kind is AssertionKind.EQUALITY and len(ins.targets) >= 2 and ins.added_by is None
    ]
    for source in originals:
        factors, residual, rest = separable_qubits(np.array(source.amplitudes), tol)
        if not factors:
            continue
        pos = next(i for i, ins in enumerate(items) if ins.uid == source.uid)
        new = []
        for position, vec in factors:
            q = source.targets[position]
            amps = _clean(vec)
            # skip if an identical single-qubit assertion already sits right above
            duplicate = False
            for prev in reversed(items[:pos]):
                if not prev.is_assertion:
                    break
                if prev.assertion_kind is AssertionKind.EQUALITY and prev.targets == (q,) and prev.amplitudes == amps:
                    duplicate = True
                    break
            if duplicate:
                continue
            new.append(make_assertion(flat, next_uid, AssertionKind.EQUALITY, (q,), amps,
                                      origin=source.origin, added_by=ADDED_BY))
            next_uid += 1
        items[pos:pos] = new
        dropped = drop_subsumed and residual is None
        if dropped:
            items = [ins for ins in items if ins.uid != source.uid]
        splits.append(SeparabilitySplit(
            source.uid,
            tuple((p, _clean(v)) for p, v in factors),
            None if residual is None else tuple(complex(c) for c in residual),
            tuple(rest),
            tuple(ins.uid for ins in new),
            dropped,
        ))
    return flat.with_instructions(items), splits
