"""The refinement pipeline: interaction addition, separation addition, movement."""
from __future__ import annotations

from dataclasses import asdict, dataclass, field, replace

from .interaction import AddedAssertion, refine_entanglement
from .mover import MoveRecord, move_all
from .program import DIAGONAL_TOL, FlatProgram, Instruction
from .separation import SEPARABILITY_TOL, SeparabilitySplit, refine_equality
from .simulator import (
    ENTANGLEMENT_TOL,
    EQUALITY_EPS,
    QUBIT_CAP,
    SUPERPOSITION_TOL,
    CheckerConfig,
)

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class Config:
    equality_eps: float = EQUALITY_EPS
    separability_tol: float = SEPARABILITY_TOL
    diagonal_tol: float = DIAGONAL_TOL
    entanglement_tol: float = ENTANGLEMENT_TOL
    superposition_tol: float = SUPERPOSITION_TOL
    drop_subsumed: bool = False
    annotations: bool = False
    entanglement_criterion: str = "correlation"
    seed: int = 0
    qubit_cap: int = QUBIT_CAP

    def __post_init__(self):
        for name in ("equality_eps", "separability_tol", "diagonal_tol", "entanglement_tol", "superposition_tol"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be strictly positive")
        if self.entanglement_criterion not in ("correlation", "ppt"):
            raise ValueError("entanglement_criterion must be 'correlation' or 'ppt'")

    def checker(self) -> CheckerConfig:
        return CheckerConfig(
            equality_eps=self.equality_eps,
            entanglement_tol=self.entanglement_tol,
            superposition_tol=self.superposition_tol,
            entanglement_criterion=self.entanglement_criterion,
            qubit_cap=self.qubit_cap,
        )

    @classmethod
    def from_mapping(cls, data: dict) -> "Config":
        known = {k: v for k, v in data.items() if k in cls.__dataclass_fields__}
        return cls(**known)

    def to_json(self) -> dict:
        return asdict(self)


@dataclass
class RefinementResult:
    program: FlatProgram
    moves: list[MoveRecord] = field(default_factory=list)
    added: list[AddedAssertion] = field(default_factory=list)
    splits: list[SeparabilitySplit] = field(default_factory=list)
    notes: list[dict] = field(default_factory=list)

    def report(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "moves": [m.to_json() for m in self.moves],
            "added": [a.to_json(self.program) for a in self.added],
            "splits": [s.to_json(self.program) for s in self.splits],
            "notes": self.notes,
        }


def _dedupe_added(flat: FlatProgram) -> FlatProgram:
    """Drop added assertions that repeat an assertion at the same program point."""
    out: list[Instruction] = []
    run: list[Instruction] = []

    def key(ins: Instruction):
        return (ins.assertion_kind, frozenset(ins.targets) if ins.amplitudes is None else ins.targets, ins.amplitudes)

    for ins in list(flat.instructions) + [None]:
        if ins is not None and ins.is_assertion:
            run.append(ins)
            continue
        seen = {key(a) for a in run if a.added_by is None}
        for a in run:
            if a.added_by is not None:
                if key(a) in seen:
                    continue
                seen.add(key(a))
            out.append(a)
        run = []
        if ins is not None:
            out.append(ins)
    return flat.with_instructions(out)


def refine(flat: FlatProgram, config: Config = Config(), add: bool = True, move: bool = True) -> RefinementResult:
    """Run interaction refinement, then separation refinement, then movement.

    ``add=False`` gives the movement-only variant used as the baseline in the
    evaluation.
    """
    result = RefinementResult(flat)
    program = flat
    if add:
        program, result.added, result.notes = refine_entanglement(program)
        program, result.splits = refine_equality(program, config.drop_subsumed, config.separability_tol)
    if move:
        program, result.moves = move_all(program)
    if add:
        program = _dedupe_added(program)
        kept = {ins.uid for ins in program.instructions}
        result.added = [a for a in result.added if a.uid in kept]
        result.moves = [m for m in result.moves if m.uid in kept]
        if move:
            index = {ins.uid: i for i, ins in enumerate(program.instructions)}
            result.moves = [_reindex(m, index) for m in result.moves]
    result.program = program
    return result


def _reindex(record: MoveRecord, index: dict[int, int]) -> MoveRecord:
    blocked = None if record.blocked_by_uid is None else index[record.blocked_by_uid]
    return replace(record, assertion_index_after=index[record.uid], blocked_by=blocked)
