"""Dense statevector simulation and assertion verdicts."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .gates import apply_matrix
from .program import FlatProgram, Instruction, Kind
from .qasm import AssertionKind

QUBIT_CAP = 16
NORM_TOL = 1e-9
SUPERPOSITION_TOL = 1e-9
ENTANGLEMENT_TOL = 1e-6
EQUALITY_EPS = 1e-6


class SimulationError(RuntimeError):
    pass


@dataclass
class QuantumState:
    amplitudes: np.ndarray
    num_qubits: int

    @classmethod
    def zero(cls, n: int) -> "QuantumState":
        amps = np.zeros(2**n, dtype=complex)
        amps[0] = 1
        return cls(amps, n)

    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape((2,) * self.num_qubits)


@dataclass(frozen=True)
class Verdict:
    assertion_index: int
    uid: int
    kind: AssertionKind
    passed: bool
    diagnostics: dict = field(default_factory=dict, compare=False)

    @property
    def outcome(self) -> str:
        return "pass" if self.passed else "fail"

    def to_json(self) -> dict:
        return {
            "assertion_index": self.assertion_index,
            "uid": self.uid,
            "kind": self.kind.value,
            "outcome": self.outcome,
            "diagnostics": self.diagnostics,
        }


@dataclass(frozen=True)
class CheckerConfig:
    equality_eps: float = EQUALITY_EPS
    entanglement_tol: float = ENTANGLEMENT_TOL
    superposition_tol: float = SUPERPOSITION_TOL
    entanglement_criterion: str = "correlation"  # or "ppt"
    qubit_cap: int = QUBIT_CAP


DEFAULT_CONFIG = CheckerConfig()


def reduced_density_matrix(amplitudes: np.ndarray, n: int, targets: Sequence[int]) -> np.ndarray:
    """Partial trace onto ``targets``; bit j of the result index is ``targets[j]``."""
    k = len(targets)
    psi = np.asarray(amplitudes).reshape((2,) * n)
    front = [n - 1 - targets[k - 1 - m] for m in range(k)]
    m = np.moveaxis(psi, front, list(range(k))).reshape(2**k, -1)
    return m @ m.conj().T


def check_superposition(state: QuantumState, targets: Sequence[int], tol: float = SUPERPOSITION_TOL) -> tuple[bool, dict]:
    rho = reduced_density_matrix(state.amplitudes, state.num_qubits, targets)
    support = int(np.sum(np.real(np.diag(rho)) > tol))
    return support >= 2, {"support": support}


def _pair_correlation(rho_ab: np.ndarray) -> float:
    # rho_ab index bit 0 = a, bit 1 = b; tensor axes (b_out, a_out, b_in, a_in)
    t = rho_ab.reshape(2, 2, 2, 2)
    rho_a = np.einsum("jajb->ab", t)
    rho_b = np.einsum("ajbj->ab", t)
    product = np.kron(rho_b, rho_a)
    return float(np.linalg.norm(rho_ab - product))


def partial_transpose_b(rho_ab: np.ndarray) -> np.ndarray:
    t = rho_ab.reshape(2, 2, 2, 2)
    return t.transpose(2, 1, 0, 3).reshape(4, 4)


def negativity(rho_ab: np.ndarray) -> float:
    eig = np.linalg.eigvalsh(partial_transpose_b(rho_ab))
    return float(-np.sum(eig[eig < 0]))


def check_entanglement(
    state: QuantumState,
    targets: Sequence[int],
    tol: float = ENTANGLEMENT_TOL,
    criterion: str = "correlation",
) -> tuple[bool, dict]:
    """Pass iff every pair of targets is correlated (or NPT with ``criterion='ppt'``)."""
    scores = []
    for i in range(len(targets)):
        for j in range(i + 1, len(targets)):
            rho = reduced_density_matrix(state.amplitudes, state.num_qubits, [targets[i], targets[j]])
            if criterion == "ppt":
                scores.append(negativity(rho))
            else:
                scores.append(_pair_correlation(rho))
    worst = min(scores)
    return worst > tol, {"criterion": criterion, "min_pair_score": worst}


def check_equality(
    state: QuantumState,
    targets: Sequence[int],
    amplitudes: Sequence[complex],
    eps: float = EQUALITY_EPS,
) -> tuple[bool, dict]:
    psi = np.asarray(amplitudes, dtype=complex)
    psi = psi / np.linalg.norm(psi)
    rho = reduced_density_matrix(state.amplitudes, state.num_qubits, targets)
    fidelity = float(np.real(psi.conj() @ rho @ psi))
    return fidelity >= 1 - eps, {"fidelity": fidelity}


def evaluate_assertion(state: QuantumState, instr: Instruction, config: CheckerConfig = DEFAULT_CONFIG) -> tuple[bool, dict]:
    kind = instr.assertion_kind
    if kind is AssertionKind.SUPERPOSITION:
        return check_superposition(state, instr.targets, config.superposition_tol)
    if kind is AssertionKind.ENTANGLEMENT:
        return check_entanglement(state, instr.targets, config.entanglement_tol, config.entanglement_criterion)
    return check_equality(state, instr.targets, instr.amplitudes, config.equality_eps)


def _measure(psi: np.ndarray, q: int, n: int, rng: np.random.Generator) -> tuple[np.ndarray, int]:
    axis = n - 1 - q
    p1 = float(np.sum(np.abs(np.take(psi, 1, axis=axis)) ** 2))
    outcome = int(rng.random() < p1)
    index = [slice(None)] * n
    index[axis] = 1 - outcome
    psi = psi.copy()
    psi[tuple(index)] = 0
    prob = p1 if outcome else 1 - p1
    return psi / np.sqrt(prob), outcome


@dataclass
class SimulationResult:
    verdicts: list[Verdict]
    state: QuantumState
    clbits: list[int]

    @property
    def all_passed(self) -> bool:
        return all(v.passed for v in self.verdicts)


def run(flat: FlatProgram, seed: int = 0, config: CheckerConfig = DEFAULT_CONFIG) -> SimulationResult:
    """Simulate from |0...0>, recording one verdict per assertion in program order."""
    n = flat.num_qubits
    if n > config.qubit_cap:
        raise SimulationError(f"{n} qubits exceeds the simulation cap of {config.qubit_cap}")
    rng = np.random.default_rng(seed)
    psi = QuantumState.zero(n).tensor()
    clbits = [0] * flat.num_clbits
    verdicts: list[Verdict] = []
    for index, instr in enumerate(flat.instructions):
        if instr.kind is Kind.ASSERTION:
            state = QuantumState(psi.reshape(-1), n)
            passed, diag = evaluate_assertion(state, instr, config)
            verdicts.append(Verdict(index, instr.uid, instr.assertion_kind, passed, diag))
            continue
        for op in instr.ops:
            if op.kind == "unitary":
                psi = apply_matrix(psi, op.matrix, op.qubits, n)
            else:
                (q,) = op.qubits
                psi, outcome = _measure(psi, q, n, rng)
                if op.kind == "measure":
                    if op.bits and op.bits[0] is not None:
                        clbits[op.bits[0]] = outcome
                elif outcome:
                    psi = apply_matrix(psi, np.array([[0, 1], [1, 0]], dtype=complex), (q,), n)
        if instr.ops:
            norm = float(np.linalg.norm(psi))
            if abs(norm - 1) > NORM_TOL:
                raise SimulationError(f"instruction {index} broke normalization (norm {norm})")
    return SimulationResult(verdicts, QuantumState(psi.reshape(-1), n), clbits)


def simulate(flat: FlatProgram, seed: int = 0, config: CheckerConfig = DEFAULT_CONFIG) -> list[Verdict]:
    return run(flat, seed, config).verdicts


def final_state(flat: FlatProgram, seed: int = 0) -> np.ndarray:
    return run(flat, seed).state.amplitudes
