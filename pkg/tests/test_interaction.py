import itertools
from pathlib import Path

import numpy as np
import pytest

from assertrefine.interaction import ADDED_BY, build_graph, refine_entanglement, simple_paths
from assertrefine.mutation import candidate_region
from assertrefine.pipeline import refine
from assertrefine.program import flatten
from assertrefine.qasm import parse
from assertrefine.simulator import run

FIXTURES = Path(__file__).parent / "fixtures"


def _flat(name):
    return flatten(parse((FIXTURES / name).read_text()))


def brute_force_paths(edges, n, s, t):
    """Every simple path as a vertex permutation, checked edge by edge."""
    count = 0
    others = [v for v in range(n) if v not in (s, t)]
    for r in range(len(others) + 1):
        for middle in itertools.permutations(others, r):
            walk = (s, *middle, t)
            if all(frozenset(p) in edges for p in zip(walk, walk[1:])):
                count += 1
    return count


class TestGraph:
    def test_ghz_fixture_labels(self):
        flat = _flat("ghz5.qasm")
        graph = build_graph(flat, len(flat) - 1)
        lines = {tuple(sorted(e)): flat.instructions[flat.index_of(uid)].origin for e, uid in graph.edges.items()}
        assert lines == {(0, 1): 3, (0, 2): 4, (1, 3): 5, (3, 4): 6}

    def test_single_qubit_gates_give_no_edges(self):
        flat = flatten(parse("qreg q[3];\nh q;\nt q[1];\nassert-ent q[0], q[2];"))
        assert build_graph(flat, len(flat) - 1).edges == {}

    def test_ccx_gives_three_edges_with_one_label(self):
        flat = flatten(parse("qreg q[3];\nccx q[0], q[1], q[2];\ncx q[0], q[1];"))
        graph = build_graph(flat, len(flat))
        assert len(graph.edges) == 3
        assert len(set(graph.edges.values())) == 1

    def test_earliest_label_wins(self):
        flat = flatten(parse("qreg q[2];\ncx q[0], q[1];\ncz q[1], q[0];"))
        graph = build_graph(flat, len(flat))
        assert flat.instructions[flat.index_of(graph.label(0, 1))].origin == 2

    def test_later_instructions_are_ignored(self):
        flat = flatten(parse("qreg q[3];\ncx q[0], q[1];\nassert-ent q[0], q[2];\ncx q[1], q[2];"))
        graph = build_graph(flat, flat.assertions[0])
        assert simple_paths(graph, 0, 2) == []

    @pytest.mark.parametrize("seed", range(30))
    def test_path_count_matches_brute_force(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(3, 7))
        pairs = [p for p in itertools.combinations(range(n), 2) if rng.random() < 0.4]
        body = "".join(f"cx q[{a}], q[{b}];\n" for a, b in pairs)
        flat = flatten(parse(f"qreg q[{n}];\n{body}"))
        graph = build_graph(flat, len(flat))
        oracle = brute_force_paths(set(graph.edges), n, 0, n - 1)
        assert len(simple_paths(graph, 0, n - 1)) == min(oracle, 2)
        assert len(simple_paths(graph, 0, n - 1, limit=100)) == oracle


class TestRefinement:
    def test_ghz_chain_adds_two_assertions(self):
        flat = _flat("ghz5.qasm")
        out, added, notes = refine_entanglement(flat)
        assert [(a.targets, out.instructions[out.index_of(a.insert_after)].origin) for a in added] == [
            ((0, 1), 3),
            ((1, 3), 5),
        ]
        for a in added:
            i = out.index_of(a.uid)
            assert out.instructions[i].added_by == ADDED_BY
            assert set(a.targets) <= out.instructions[out.index_of(a.insert_after)].acted_qubits

    def test_added_assertions_pass_on_correct_program(self):
        out, _, _ = refine_entanglement(_flat("ghz5.qasm"))
        assert all(v.passed for v in run(out).verdicts)

    def test_mutant_narrows_to_single_instruction(self):
        flat = _flat("ghz5_mutant.qasm")
        refined = refine(flat).program
        verdicts = run(refined).verdicts
        assert [v.outcome for v in verdicts] == ["pass", "pass", "fail"]
        assert candidate_region(refined, verdicts) == 1

    def test_cycle_gives_no_addition(self):
        flat = flatten(parse("qreg q[4];\nh q[0];\ncx q[0], q[1];\ncx q[1], q[2];\ncx q[2], q[3];\ncx q[3], q[0];\nassert-ent q[0], q[2];"))
        out, added, notes = refine_entanglement(flat)
        assert added == [] and notes[0]["skipped"] == "multiple interaction paths"

    def test_disconnected_gives_no_addition(self):
        flat = flatten(parse("qreg q[4];\ncx q[0], q[1];\ncx q[2], q[3];\nassert-ent q[0], q[3];"))
        assert refine_entanglement(flat)[1] == []

    def test_direct_edge_gives_no_addition(self):
        flat = flatten(parse("qreg q[2];\nh q[0];\ncx q[0], q[1];\nassert-ent q[0], q[1];"))
        assert refine_entanglement(flat)[1] == []

    def test_three_target_assertion_skipped(self):
        flat = flatten(parse("qreg q[3];\ncx q[0], q[1];\ncx q[1], q[2];\nassert-ent q;"))
        out, added, notes = refine_entanglement(flat)
        assert added == [] and notes

    def test_non_assertions_untouched(self):
        flat = _flat("ghz5.qasm")
        out, _, _ = refine_entanglement(flat)
        assert [i.uid for i in out.instructions if not i.is_assertion] == [i.uid for i in flat.instructions if not i.is_assertion]

    def test_pipeline_is_idempotent_on_added_assertions(self):
        once = refine(_flat("ghz5.qasm")).program
        twice = refine(once).program
        assert len(twice.assertions) == len(once.assertions)
