"""Instruction-level IR: global qubit indices, inlined primitive ops, unitary classes."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np

from . import qasm
from .gates import gate_matrix, operator_matrix
from .qasm import (
    Assertion,
    AssertionKind,
    Barrier,
    CRegDecl,
    GateApply,
    GateDef,
    Include,
    Measure,
    QRegDecl,
    QubitRef,
    Reset,
    SourceProgram,
    VersionHeader,
)

DIAGONAL_TOL = 1e-9
MATRIX_QUBIT_CAP = 3


class ProgramError(ValueError):
    pass


class Kind(str, Enum):
    NON_FUNCTIONAL = "non-functional"
    UNITARY = "unitary"
    MEASUREMENT_LIKE = "measurement-like"
    ASSERTION = "assertion"


class Tag(str, Enum):
    NON_FUNCTIONAL = "non-functional"
    DIAGONAL = "diagonal"
    ANTI_DIAGONAL = "anti-diagonal"
    GENERAL = "general-unitary"
    MEASUREMENT_LIKE = "measurement-like"


@dataclass(frozen=True, eq=False)
class UnitaryClass:
    tag: Tag
    matrix: np.ndarray | None = None

    def __eq__(self, other):
        if not isinstance(other, UnitaryClass) or self.tag != other.tag:
            return False
        if self.matrix is None or other.matrix is None:
            return self.matrix is None and other.matrix is None
        return np.array_equal(self.matrix, other.matrix)

    def __hash__(self):
        return hash(self.tag)


@dataclass(frozen=True, eq=False)
class PrimitiveOp:
    """One simulator step: a unitary, a measurement or a reset."""

    kind: str  # "unitary" | "measure" | "reset"
    qubits: tuple[int, ...]
    matrix: np.ndarray | None = None
    bits: tuple[int | None, ...] = ()


@dataclass(frozen=True)
class Instruction:
    uid: int
    kind: Kind
    statement: qasm.Statement
    origin: int
    acted_qubits: frozenset[int] = frozenset()
    operands: tuple[int, ...] = ()
    unitary_class: UnitaryClass = UnitaryClass(Tag.NON_FUNCTIONAL)
    ops: tuple[PrimitiveOp, ...] = field(default=(), compare=False)
    # assertion-only fields
    assertion_kind: AssertionKind | None = None
    targets: tuple[int, ...] = ()
    amplitudes: tuple[complex, ...] | None = None
    added_by: str | None = None
    moved_from: int | None = None

    @property
    def is_assertion(self) -> bool:
        return self.kind is Kind.ASSERTION

    @property
    def is_declaration(self) -> bool:
        return isinstance(self.statement, qasm.DECLARATION_TYPES)


@dataclass(frozen=True)
class FlatProgram:
    instructions: tuple[Instruction, ...]
    num_qubits: int
    qubit_names: tuple[tuple[str, int], ...]
    num_clbits: int = 0

    @property
    def assertions(self) -> tuple[int, ...]:
        return tuple(i for i, ins in enumerate(self.instructions) if ins.is_assertion)

    @property
    def line_map(self) -> tuple[int, ...]:
        return tuple(ins.origin for ins in self.instructions)

    def __len__(self) -> int:
        return len(self.instructions)

    def index_of(self, uid: int) -> int:
        for i, ins in enumerate(self.instructions):
            if ins.uid == uid:
                return i
        raise KeyError(uid)

    def with_instructions(self, instructions) -> "FlatProgram":
        return replace(self, instructions=tuple(instructions))

    def next_uid(self) -> int:
        return max((ins.uid for ins in self.instructions), default=-1) + 1

    def qubit_ref(self, q: int) -> QubitRef:
        reg, idx = self.qubit_names[q]
        return QubitRef(reg, idx)


def _classify_matrix(matrix: np.ndarray, tol: float) -> Tag:
    dim = matrix.shape[0]
    off_diag = matrix - np.diag(np.diag(matrix))
    if np.all(np.abs(off_diag) < tol):
        return Tag.DIAGONAL
    anti = np.fliplr(matrix)
    if np.all(np.abs(anti - np.diag(np.diag(anti))) < tol) and dim > 1:
        return Tag.ANTI_DIAGONAL
    return Tag.GENERAL


def classify_unitary(instr: Instruction, tol: float = DIAGONAL_TOL) -> UnitaryClass:
    """Classify a unitary instruction by its operator matrix over its acted qubits.

    Instructions acting on more than three qubits are conservatively general.
    """
    if instr.kind is Kind.NON_FUNCTIONAL:
        return UnitaryClass(Tag.NON_FUNCTIONAL)
    if instr.kind is Kind.MEASUREMENT_LIKE:
        return UnitaryClass(Tag.MEASUREMENT_LIKE)
    if instr.kind is not Kind.UNITARY:
        raise ValueError("only unitary instructions have a unitary class")
    qubits = sorted(instr.acted_qubits)
    if len(qubits) > MATRIX_QUBIT_CAP:
        return UnitaryClass(Tag.GENERAL)
    matrix = operator_matrix([(op.matrix, op.qubits) for op in instr.ops], qubits)
    return UnitaryClass(_classify_matrix(matrix, tol), matrix)


class _Flattener:
    def __init__(self, program: SourceProgram, diag_tol: float):
        self.program = program
        self.diag_tol = diag_tol
        self.qubit_names: list[tuple[str, int]] = []
        self.qoffset: dict[str, int] = {}
        self.coffset: dict[str, int] = {}
        self.csize: dict[str, int] = {}
        self.num_clbits = 0
        self.gates: dict[str, GateDef] = {}
        self.out: list[Instruction] = []

    def qubits(self, ref: QubitRef) -> list[int]:
        if ref.reg not in self.qoffset:
            raise ProgramError(f"undeclared register {ref.reg!r}")
        base = self.qoffset[ref.reg]
        size = sum(1 for r, _ in self.qubit_names if r == ref.reg)
        if ref.index is None:
            return list(range(base, base + size))
        return [base + ref.index]

    def clbits(self, ref: QubitRef) -> list[int]:
        base = self.coffset[ref.reg]
        if ref.index is None:
            return list(range(base, base + self.csize[ref.reg]))
        return [base + ref.index]

    def inline(self, name: str, params: list[float], qubits: list[int], stack: tuple[str, ...]) -> list[PrimitiveOp]:
        if name in qasm.BUILTIN_GATES:
            return [PrimitiveOp("unitary", tuple(qubits), gate_matrix(name, params))]
        if name in stack:
            raise ProgramError(f"recursive gate definition {name!r}")
        if name not in self.gates:
            raise ProgramError(f"unknown gate {name!r}")
        gdef = self.gates[name]
        env = dict(zip(gdef.params, params))
        binding = dict(zip(gdef.qargs, qubits))
        ops: list[PrimitiveOp] = []
        for stmt in gdef.body:
            if isinstance(stmt, GateApply):
                values = [qasm.evaluate(p, env) for p in stmt.params]
                ops += self.inline(stmt.name, values, [binding[r.reg] for r in stmt.operands], stack + (name,))
            elif isinstance(stmt, Measure):
                ops.append(PrimitiveOp("measure", (binding[stmt.qubit.reg],), bits=(None,)))
            elif isinstance(stmt, Reset):
                ops.append(PrimitiveOp("reset", (binding[stmt.qubit.reg],)))
        return ops

    def emit(self, **kwargs) -> None:
        self.out.append(Instruction(uid=len(self.out), **kwargs))

    def gate_apply(self, stmt: GateApply) -> None:
        params = [qasm.evaluate(p) for p in stmt.params]
        expanded = [self.qubits(r) for r in stmt.operands]
        width = max(len(q) for q in expanded)
        broadcast = any(r.index is None for r in stmt.operands)
        for i in range(width):
            operands = [q[i] if len(q) > 1 or r.index is None else q[0] for q, r in zip(expanded, stmt.operands)]
            if len(set(operands)) != len(operands):
                raise ProgramError(f"line {stmt.line}: gate {stmt.name!r} applied to a repeated qubit")
            concrete = stmt
            if broadcast:
                refs = tuple(QubitRef(*self.qubit_names[q]) for q in operands)
                concrete = GateApply(stmt.name, stmt.params, refs, line=stmt.line)
            ops = self.inline(stmt.name, params, operands, ())
            acted = frozenset(q for op in ops for q in op.qubits)
            measuring = any(op.kind != "unitary" for op in ops)
            kind = Kind.MEASUREMENT_LIKE if measuring else Kind.UNITARY
            instr = Instruction(
                uid=len(self.out), kind=kind, statement=concrete, origin=stmt.line,
                acted_qubits=acted, operands=tuple(operands), ops=tuple(ops),
            )
            if kind is Kind.UNITARY:
                instr = replace(instr, unitary_class=classify_unitary(instr, self.diag_tol))
            else:
                instr = replace(instr, unitary_class=UnitaryClass(Tag.MEASUREMENT_LIKE))
            self.out.append(instr)

    def run(self) -> FlatProgram:
        for stmt in self.program.statements:
            if isinstance(stmt, QRegDecl):
                self.qoffset[stmt.name] = len(self.qubit_names)
                self.qubit_names += [(stmt.name, i) for i in range(stmt.size)]
                self.emit(kind=Kind.NON_FUNCTIONAL, statement=stmt, origin=stmt.line)
            elif isinstance(stmt, CRegDecl):
                self.coffset[stmt.name] = self.num_clbits
                self.csize[stmt.name] = stmt.size
                self.num_clbits += stmt.size
                self.emit(kind=Kind.NON_FUNCTIONAL, statement=stmt, origin=stmt.line)
            elif isinstance(stmt, GateDef):
                self.gates[stmt.name] = stmt
                self.emit(kind=Kind.NON_FUNCTIONAL, statement=stmt, origin=stmt.line)
            elif isinstance(stmt, (VersionHeader, Include)):
                self.emit(kind=Kind.NON_FUNCTIONAL, statement=stmt, origin=stmt.line)
            elif isinstance(stmt, Barrier):
                acted = frozenset(q for r in stmt.operands for q in self.qubits(r))
                self.emit(kind=Kind.NON_FUNCTIONAL, statement=stmt, origin=stmt.line, acted_qubits=acted)
            elif isinstance(stmt, Measure):
                qs = self.qubits(stmt.qubit)
                bits = self.clbits(stmt.bit) if stmt.bit is not None else [None] * len(qs)
                ops = tuple(PrimitiveOp("measure", (q,), bits=(b,)) for q, b in zip(qs, bits))
                self.emit(kind=Kind.MEASUREMENT_LIKE, statement=stmt, origin=stmt.line,
                          acted_qubits=frozenset(qs), operands=tuple(qs), ops=ops,
                          unitary_class=UnitaryClass(Tag.MEASUREMENT_LIKE))
            elif isinstance(stmt, Reset):
                qs = self.qubits(stmt.qubit)
                ops = tuple(PrimitiveOp("reset", (q,)) for q in qs)
                self.emit(kind=Kind.MEASUREMENT_LIKE, statement=stmt, origin=stmt.line,
                          acted_qubits=frozenset(qs), operands=tuple(qs), ops=ops,
                          unitary_class=UnitaryClass(Tag.MEASUREMENT_LIKE))
            elif isinstance(stmt, GateApply):
                self.gate_apply(stmt)
            elif isinstance(stmt, Assertion):
                targets = tuple(q for r in stmt.targets for q in self.qubits(r))
                self.emit(kind=Kind.ASSERTION, statement=stmt, origin=stmt.line,
                          acted_qubits=frozenset(targets), assertion_kind=stmt.kind,
                          targets=targets, amplitudes=stmt.amplitudes)
            else:
                raise ProgramError(f"unsupported statement {stmt!r}")
        return FlatProgram(tuple(self.out), len(self.qubit_names), tuple(self.qubit_names), self.num_clbits)


def flatten(program: SourceProgram, diag_tol: float = DIAGONAL_TOL) -> FlatProgram:
    """Lower a parsed program to one Instruction per statement.

    Gate applications on whole registers become one instruction per qubit.
    Custom gates stay single instructions; their bodies are inlined into
    ``ops`` for matrix synthesis and simulation.
    """
    return _Flattener(program, diag_tol).run()


def make_assertion(
    flat: FlatProgram,
    uid: int,
    kind: AssertionKind,
    targets,
    amplitudes=None,
    origin: int = 0,
    added_by: str | None = None,
) -> Instruction:
    """Build an assertion instruction over global qubit indices."""
    targets = tuple(int(q) for q in targets)
    amps = None if amplitudes is None else tuple(complex(a) for a in amplitudes)
    stmt = Assertion(kind, tuple(flat.qubit_ref(q) for q in targets), amps, line=origin)
    return Instruction(
        uid=uid, kind=Kind.ASSERTION, statement=stmt, origin=origin,
        acted_qubits=frozenset(targets), assertion_kind=kind, targets=targets,
        amplitudes=amps, added_by=added_by,
    )


def to_source(flat: FlatProgram) -> SourceProgram:
    """Back to a printable program; declarations are hoisted to the top.

    Assertions carry a note for annotated printing when they were added or moved.
    """
    decls = [ins for ins in flat.instructions if ins.is_declaration]
    decls.sort(key=lambda ins: 0 if isinstance(ins.statement, VersionHeader) else 1)
    rest = [ins for ins in flat.instructions if not ins.is_declaration]
    statements = []
    for ins in itertools.chain(decls, rest):
        stmt = ins.statement
        if ins.is_assertion:
            note = None
            if ins.added_by:
                note = f"added by {ins.added_by}"
            elif ins.moved_from is not None:
                note = f"moved from line {ins.moved_from}"
            stmt = replace(stmt, note=note)
        statements.append(stmt)
    return SourceProgram(tuple(statements))


def relower(flat: FlatProgram, instr: Instruction, statement: GateApply) -> Instruction:
    """Rebuild ``instr`` from a modified concrete gate statement, keeping its uid."""
    lowering = _Flattener(SourceProgram(()), DIAGONAL_TOL)
    lowering.qubit_names = list(flat.qubit_names)
    for q, (reg, _) in enumerate(flat.qubit_names):
        lowering.qoffset.setdefault(reg, q)
    lowering.gates = {
        ins.statement.name: ins.statement for ins in flat.instructions if isinstance(ins.statement, GateDef)
    }
    lowering.gate_apply(statement)
    (new,) = lowering.out
    return replace(new, uid=instr.uid, origin=instr.origin)
