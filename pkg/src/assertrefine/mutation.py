"""Single-instruction mutants and diagnosis-distance measurement."""
from __future__ import annotations

import math
import statistics
from dataclasses import dataclass, replace
from enum import Enum
from typing import Sequence

import numpy as np

from .program import FlatProgram, Kind, relower
from .qasm import GateApply
from .simulator import CheckerConfig, DEFAULT_CONFIG, Verdict, run

EQUIVALENCE_TOL = 1e-9
DEFAULT_REPETITIONS = 10


class Mutation(str, Enum):
    REMOVE_SINGLE_QUBIT_GATE = "remove"
    SWAP_FIRST_LAST_QUBIT = "swap"


@dataclass(frozen=True)
class Mutant:
    id: str
    base: FlatProgram
    mutated_uid: int
    mutation: Mutation

    @property
    def mutated_index(self) -> int:
        return self.base.index_of(self.mutated_uid)

    def apply(self, flat: FlatProgram | None = None) -> FlatProgram:
        """Apply this mutation to ``flat`` (default: the base program), locating
        the target instruction by identity."""
        return apply_mutation(self.base if flat is None else flat, self.mutated_uid, self.mutation)


def apply_mutation(flat: FlatProgram, uid: int, mutation: Mutation) -> FlatProgram:
    index = flat.index_of(uid)
    items = list(flat.instructions)
    instr = items[index]
    if mutation is Mutation.REMOVE_SINGLE_QUBIT_GATE:
        del items[index]
        return flat.with_instructions(items)
    stmt = instr.statement
    refs = list(stmt.operands)
    refs[0], refs[-1] = refs[-1], refs[0]
    items[index] = relower(flat, instr, replace(stmt, operands=tuple(refs)))
    return flat.with_instructions(items)


def mutable_instructions(flat: FlatProgram) -> list[tuple[int, Mutation]]:
    out = []
    for ins in flat.instructions:
        if ins.kind is not Kind.UNITARY or not isinstance(ins.statement, GateApply):
            continue
        if len(ins.operands) == 1:
            out.append((ins.uid, Mutation.REMOVE_SINGLE_QUBIT_GATE))
        else:
            out.append((ins.uid, Mutation.SWAP_FIRST_LAST_QUBIT))
    return out


def state_fidelity(a: np.ndarray, b: np.ndarray) -> float:
    return float(abs(np.vdot(a, b)) ** 2)


def generate_mutants(
    flat: FlatProgram,
    repetitions: int = DEFAULT_REPETITIONS,
    seed: int = 0,
    name: str = "p",
    tol: float = EQUIVALENCE_TOL,
) -> list[Mutant]:
    """Draw ``repetitions`` mutation sites uniformly (with replacement) and keep
    the mutants whose final state differs from the original beyond global phase."""
    sites = mutable_instructions(flat)
    if not sites:
        return []
    rng = np.random.default_rng(seed)
    reference = run(flat, seed).state.amplitudes
    mutants = []
    for rep in range(repetitions):
        uid, mutation = sites[int(rng.integers(len(sites)))]
        mutant = Mutant(f"{name}#{rep}", flat, uid, mutation)
        mutated = run(mutant.apply(), seed).state.amplitudes
        if state_fidelity(reference, mutated) > 1 - tol:
            continue
        mutants.append(mutant)
    return mutants


def _functional(flat: FlatProgram, i: int) -> bool:
    ins = flat.instructions[i]
    return ins.kind in (Kind.UNITARY, Kind.MEASUREMENT_LIKE)


def first_failing_after(flat: FlatProgram, verdicts: Sequence[Verdict], after_uid: int) -> int | None:
    """Index (in ``flat``) of the first failing assertion located below ``after_uid``."""
    position = flat.index_of(after_uid)
    index = {ins.uid: i for i, ins in enumerate(flat.instructions)}
    candidates = [index[v.uid] for v in verdicts if not v.passed and v.uid in index and index[v.uid] > position]
    return min(candidates) if candidates else None


def distance_between(flat: FlatProgram, start: int, stop: int) -> int:
    """Non-assertion, non-declaration instructions strictly between two positions."""
    return sum(1 for i in range(start + 1, stop) if _functional(flat, i))


def inspection_span(flat: FlatProgram, verdicts: Sequence[Verdict]) -> int | None:
    """Source statements a developer inspects without knowing the fault: the
    distinct lines of functional instructions above the first failing assertion."""
    failing = [v.assertion_index for v in verdicts if not v.passed]
    if not failing:
        return None
    stop = min(failing)
    return len({flat.instructions[i].origin for i in range(stop) if _functional(flat, i)})


def candidate_region(flat: FlatProgram, verdicts: Sequence[Verdict]) -> int | None:
    """Functional instructions between the first failing assertion and the
    nearest passing assertion above it (or program start)."""
    failing = [v.assertion_index for v in verdicts if not v.passed]
    if not failing:
        return None
    stop = min(failing)
    passing = [v.assertion_index for v in verdicts if v.passed and v.assertion_index < stop]
    start = max(passing) if passing else -1
    return distance_between(flat, start, stop)


@dataclass(frozen=True)
class DiagnosisReport:
    mutant_id: str
    mutation: Mutation
    mutated_line: int
    detected: bool
    first_failing_original: int | None
    first_failing_refined: int | None
    distance_original: int | None
    distance_refined: int | None

    @property
    def reduction(self) -> float | None:
        if not self.detected or not self.distance_original:
            return None
        return (self.distance_original - self.distance_refined) / self.distance_original

    @property
    def status(self) -> str:
        if not self.detected:
            return "undetected"
        if self.reduction is None:
            return "zero-distance"
        return "ok"


def diagnose(mutant: Mutant, refined: FlatProgram, seed: int = 0, config: CheckerConfig = DEFAULT_CONFIG) -> DiagnosisReport:
    base = mutant.base
    uid = mutant.mutated_uid
    fails = []
    dists = []
    for program in (base, refined):
        verdicts = run(mutant.apply(program), seed, config).verdicts
        # verdict indices refer to the mutated program; map back through uids
        first = first_failing_after(program, verdicts, uid)
        fails.append(first)
        dists.append(None if first is None else distance_between(program, program.index_of(uid), first))
    detected = fails[0] is not None and fails[1] is not None
    return DiagnosisReport(
        mutant.id, mutant.mutation, base.instructions[mutant.mutated_index].origin, detected,
        fails[0], fails[1],
        dists[0] if detected else None, dists[1] if detected else None,
    )


def evaluate(
    base: FlatProgram,
    refined: FlatProgram,
    mutants: Sequence[Mutant],
    seed: int = 0,
    config: CheckerConfig = DEFAULT_CONFIG,
) -> tuple[list[DiagnosisReport], "Aggregate"]:
    reports = [diagnose(m, refined, seed, config) for m in mutants]
    return reports, aggregate([r.reduction for r in reports])


@dataclass(frozen=True)
class Aggregate:
    count: int
    mean: float | None
    std: float | None

    def format(self) -> str:
        if self.count == 0:
            return "no detected mutants"
        std = "n/a" if self.std is None else f"{100 * self.std:.1f}%"
        return f"{100 * self.mean:.1f}% ± {std}"


def aggregate(reductions: Sequence[float | None]) -> Aggregate:
    """Mean and sample standard deviation over the defined reductions."""
    values = [r for r in reductions if r is not None]
    if not values:
        return Aggregate(0, None, None)
    mean = math.fsum(values) / len(values)
    std = statistics.stdev(values) if len(values) > 1 else None
    return Aggregate(len(values), mean, std)
