"""Interaction-graph based addition of two-qubit entanglement assertions."""
from __future__ import annotations

from dataclasses import dataclass

from .program import FlatProgram, Instruction, Kind, make_assertion
from .qasm import AssertionKind

ADDED_BY = "interaction"


@dataclass
class InteractionGraph:
    """Undirected qubit graph; each edge is labeled with the uid of the
    earliest multi-qubit unitary instruction acting on both endpoints."""

    nodes: tuple[int, ...]
    edges: dict[frozenset[int], int]

    def neighbors(self, q: int) -> list[int]:
        return sorted(next(iter(e - {q})) for e in self.edges if q in e)

    def label(self, a: int, b: int) -> int:
        return self.edges[frozenset((a, b))]


def build_graph(flat: FlatProgram, upto: int) -> InteractionGraph:
    edges: dict[frozenset[int], int] = {}
    for instr in flat.instructions[:upto]:
        if instr.kind is not Kind.UNITARY or len(instr.acted_qubits) < 2:
            continue
        qs = sorted(instr.acted_qubits)
        for i, a in enumerate(qs):
            for b in qs[i + 1:]:
                edges.setdefault(frozenset((a, b)), instr.uid)
    return InteractionGraph(tuple(range(flat.num_qubits)), edges)


def simple_paths(graph: InteractionGraph, source: int, target: int, limit: int = 2) -> list[list[int]]:
    """Enumerate simple paths from ``source`` to ``target``, stopping at ``limit``."""
    found: list[list[int]] = []
    path = [source]
    on_path = {source}

    def dfs(node: int) -> bool:
        if node == target:
            found.append(list(path))
            return len(found) >= limit
        for nxt in graph.neighbors(node):
            if nxt in on_path:
                continue
            path.append(nxt)
            on_path.add(nxt)
            stop = dfs(nxt)
            path.pop()
            on_path.discard(nxt)
            if stop:
                return True
        return False

    dfs(source)
    return found


@dataclass(frozen=True)
class AddedAssertion:
    targets: tuple[int, int]
    insert_after: int  # uid of the edge-creating instruction
    provenance: int  # uid of the source assertion
    uid: int
    kind: AssertionKind = AssertionKind.ENTANGLEMENT

    def to_json(self, flat: FlatProgram) -> dict:
        return {
            "kind": self.kind.value,
            "targets": [str(flat.qubit_ref(q)) for q in self.targets],
            "insert_after_index": flat.index_of(self.insert_after),
            "insert_after_line": flat.instructions[flat.index_of(self.insert_after)].origin,
            "source_assertion": self.provenance,
            "uid": self.uid,
        }


def _point_run(items: list[Instruction], after: int) -> list[Instruction]:
    """Assertions directly following position ``after``."""
    run = []
    for ins in items[after + 1:]:
        if not ins.is_assertion:
            break
        run.append(ins)
    return run


def _same(a: Instruction, kind: AssertionKind, targets: tuple[int, ...]) -> bool:
    return a.assertion_kind is kind and set(a.targets) == set(targets)


def refine_entanglement(flat: FlatProgram) -> tuple[FlatProgram, list[AddedAssertion], list[dict]]:
    """Add entanglement assertions along unique interaction paths.

    For every two-qubit entanglement assertion whose endpoints are joined by
    exactly one simple path of length > 1 in the interaction graph built from
    the instructions above it, assert each adjacent pair on the path right
    after the instruction that created their edge.  Returns the new program,
    the added assertions, and notes for assertions that were skipped.
    """
    items = list(flat.instructions)
    added: list[AddedAssertion] = []
    notes: list[dict] = []
    next_uid = flat.next_uid()
    originals = [ins for ins in flat.instructions if ins.assertion_kind is AssertionKind.ENTANGLEMENT]
    for source in originals:
        if len(source.targets) != 2:
            notes.append({"uid": source.uid, "skipped": "entanglement assertion over more than two qubits"})
            continue
        pos = next(i for i, ins in enumerate(items) if ins.uid == source.uid)
        graph = build_graph(flat.with_instructions(items), pos)
        qa, qb = source.targets
        paths = simple_paths(graph, qa, qb)
        if len(paths) != 1:
            reason = "no interaction path" if not paths else "multiple interaction paths"
            notes.append({"uid": source.uid, "skipped": reason})
            continue
        path = paths[0]
        if len(path) <= 2:
            notes.append({"uid": source.uid, "skipped": "targets interact directly"})
            continue
        for a, b in zip(path, path[1:]):
            label = graph.label(a, b)
            at = next(i for i, ins in enumerate(items) if ins.uid == label)
            run = _point_run(items, at)
            # an assertion at the source's own program point localizes nothing
            if any(ins.uid == source.uid for ins in run):
                continue
            if any(_same(ins, AssertionKind.ENTANGLEMENT, (a, b)) for ins in run):
                continue
            new = make_assertion(
                flat, next_uid, AssertionKind.ENTANGLEMENT, (a, b),
                origin=items[at].origin, added_by=ADDED_BY,
            )
            items.insert(at + 1 + len(run), new)
            added.append(AddedAssertion((a, b), label, source.uid, next_uid))
            next_uid += 1
    return flat.with_instructions(items), added, notes
