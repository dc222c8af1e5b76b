"""Commutation rules and iterative upward movement of assertions."""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import IntEnum

from .program import FlatProgram, Instruction, Kind, Tag
from .qasm import AssertionKind


class Rule(IntEnum):
    ASSERTION = 0  # two assertions always commute
    NON_FUNCTIONAL = 1
    DISJOINT = 2
    DIAGONAL = 3
    SINGLE_QUBIT = 4
    MEASUREMENT = 5


def commutes(assertion: Instruction, instr: Instruction) -> Rule | None:
    """Return the lowest-numbered rule letting ``assertion`` rise above ``instr``.

    None means the two do not commute.  Measurement-like instructions veto
    every other rule.
    """
    if instr.kind is Kind.MEASUREMENT_LIKE:
        return None
    if instr.kind is Kind.ASSERTION:
        return Rule.ASSERTION
    if instr.kind is Kind.NON_FUNCTIONAL:
        return Rule.NON_FUNCTIONAL
    if not instr.acted_qubits & set(assertion.targets):
        return Rule.DISJOINT
    if (
        assertion.assertion_kind is AssertionKind.SUPERPOSITION
        and instr.unitary_class.tag in (Tag.DIAGONAL, Tag.ANTI_DIAGONAL)
    ):
        return Rule.DIAGONAL
    if assertion.assertion_kind is AssertionKind.ENTANGLEMENT and len(instr.acted_qubits) == 1:
        return Rule.SINGLE_QUBIT
    return None


@dataclass(frozen=True)
class MoveRecord:
    uid: int
    assertion_index_before: int
    assertion_index_after: int
    blocked_by: int | None
    blocked_by_line: int | None
    blocked_by_uid: int | None = None
    rules_fired: tuple[Rule, ...] = field(default=())

    @property
    def moved(self) -> bool:
        return bool(self.rules_fired)

    def to_json(self) -> dict:
        return {
            "uid": self.uid,
            "index_before": self.assertion_index_before,
            "index_after": self.assertion_index_after,
            "blocked_by": self.blocked_by,
            "blocked_by_line": self.blocked_by_line,
            "rules_fired": [int(r) for r in self.rules_fired],
        }


def _sort_assertion_runs(items: list[Instruction], order: dict[int, int]) -> list[Instruction]:
    out: list[Instruction] = []
    run: list[Instruction] = []
    for ins in items + [None]:
        if ins is not None and ins.is_assertion:
            run.append(ins)
            continue
        out.extend(sorted(run, key=lambda a: order[a.uid]))
        run = []
        if ins is not None:
            out.append(ins)
    return out


def move_all(flat: FlatProgram) -> tuple[FlatProgram, list[MoveRecord]]:
    """Hoist every assertion above all consecutive commuting predecessors.

    Assertions are processed top-down.  Assertions that end up adjacent keep
    their original relative order.
    """
    items = list(flat.instructions)
    order = {ins.uid: i for i, ins in enumerate(items)}
    hops: dict[int, list[Rule]] = {}
    for uid in [ins.uid for ins in items if ins.is_assertion]:
        pos = next(i for i, ins in enumerate(items) if ins.uid == uid)
        assertion = items[pos]
        fired: list[Rule] = []
        while pos > 0:
            rule = commutes(assertion, items[pos - 1])
            if rule is None:
                break
            if rule is not Rule.ASSERTION:
                fired.append(rule)
            items[pos - 1], items[pos] = items[pos], items[pos - 1]
            pos -= 1
        hops[uid] = fired
    items = _sort_assertion_runs(items, order)

    records: list[MoveRecord] = []
    for i, ins in enumerate(items):
        if not ins.is_assertion:
            continue
        blocker = i - 1
        while blocker >= 0 and items[blocker].is_assertion:
            blocker -= 1
        fired = hops[ins.uid]
        if fired and ins.moved_from is None and ins.added_by is None:
            items[i] = replace(ins, moved_from=ins.origin)
        records.append(
            MoveRecord(
                uid=ins.uid,
                assertion_index_before=order[ins.uid],
                assertion_index_after=i,
                blocked_by=blocker if blocker >= 0 else None,
                blocked_by_line=items[blocker].origin if blocker >= 0 else None,
                blocked_by_uid=items[blocker].uid if blocker >= 0 else None,
                rules_fired=tuple(fired),
            )
        )
    records.sort(key=lambda r: r.assertion_index_before)
    return flat.with_instructions(items), records
