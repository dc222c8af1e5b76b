from pathlib import Path

import numpy as np
import pytest

from assertrefine.gates import gate_matrix, operator_matrix
from assertrefine.program import Kind, Tag, flatten, to_source
from assertrefine.qasm import parse, print_program
from randprog import random_program

FIXTURES = Path(__file__).parent / "fixtures"


def _single(body: str, n: int = 3):
    flat = flatten(parse(f"qreg q[{n}];\ncreg c[{n}];\n{body}"))
    return [ins for ins in flat.instructions if not ins.is_declaration][0]


class TestFlatten:
    def test_cccx_has_fifteen_instructions(self):
        flat = flatten(parse((FIXTURES / "cccx.qasm").read_text()))
        assert len(flat) == 15
        assert flat.num_qubits == 6
        assert [ins.origin for ins in flat.instructions if ins.kind is Kind.UNITARY] == [6, 6, 6, 9, 10, 11, 14, 15, 18]
        assert flat.assertions == (12, 13, 14)

    def test_whole_register_gate_expands_per_qubit(self):
        flat = flatten(parse("qreg q[3];\nh q;"))
        hs = [ins for ins in flat.instructions if ins.kind is Kind.UNITARY]
        assert [sorted(ins.acted_qubits) for ins in hs] == [[0], [1], [2]]
        assert len({ins.uid for ins in flat.instructions}) == len(flat)

    def test_register_qubit_indices_are_contiguous(self):
        flat = flatten(parse("qreg a[2];\nqreg b[2];\ncx a[1], b[0];"))
        assert flat.qubit_names == (("a", 0), ("a", 1), ("b", 0), ("b", 1))
        assert flat.instructions[-1].operands == (1, 2)

    def test_custom_gate_is_one_instruction(self):
        ins = _single("gate g a, b { h a; cx a, b; }\ng q[2], q[0];")
        assert ins.kind is Kind.UNITARY
        assert ins.acted_qubits == frozenset({0, 2})
        assert len(ins.ops) == 2

    def test_custom_gate_with_measurement_is_measurement_like(self):
        ins = _single("gate g a { h a; reset a; }\ng q[1];")
        assert ins.kind is Kind.MEASUREMENT_LIKE

    def test_deterministic(self):
        text = random_program(np.random.default_rng(3), exact_eq=False)
        assert flatten(parse(text)) == flatten(parse(text))

    def test_to_source_reparses(self):
        text = (FIXTURES / "cccx.qasm").read_text()
        flat = flatten(parse(text))
        again = flatten(parse(print_program(to_source(flat))))
        assert [i.statement for i in again.instructions] == [i.statement for i in flat.instructions]


class TestClassification:
    @pytest.mark.parametrize(
        "body, tag",
        [
            ("z q[0];", Tag.DIAGONAL),
            ("t q[1];", Tag.DIAGONAL),
            ("rz(0.3) q[0];", Tag.DIAGONAL),
            ("u1(pi/3) q[0];", Tag.DIAGONAL),
            ("cz q[0], q[1];", Tag.DIAGONAL),
            ("x q[0];", Tag.ANTI_DIAGONAL),
            ("y q[0];", Tag.ANTI_DIAGONAL),
            ("h q[0];", Tag.GENERAL),
            ("cx q[0], q[1];", Tag.GENERAL),
            ("swap q[0], q[1];", Tag.GENERAL),
            ("ccx q[0], q[1], q[2];", Tag.GENERAL),
            ("barrier q;", Tag.NON_FUNCTIONAL),
            ("measure q[0] -> c[0];", Tag.MEASUREMENT_LIKE),
            ("reset q[2];", Tag.MEASUREMENT_LIKE),
            ("gate xx a, b { x a; x b; }\nxx q[0], q[1];", Tag.ANTI_DIAGONAL),
            ("gate zz a, b { cx a, b; rz(0.4) b; cx a, b; }\nzz q[0], q[2];", Tag.DIAGONAL),
        ],
    )
    def test_examples(self, body, tag):
        assert _single(body).unitary_class.tag is tag

    def test_symmetric_gates_stable_under_relabeling(self):
        for gate in ("cz", "swap"):
            a = _single(f"{gate} q[0], q[2];").unitary_class
            b = _single(f"{gate} q[2], q[0];").unitary_class
            assert a == b

    def test_large_custom_gate_falls_back_to_general(self):
        body = "gate zzzz a, b, c, d { z a; z b; z c; z d; }\nzzzz q[0], q[1], q[2], q[3];"
        assert _single(body, n=4).unitary_class.tag is Tag.GENERAL

    def test_synthesised_matrices_are_unitary(self):
        for seed in range(40):
            flat = flatten(parse(random_program(np.random.default_rng(seed), exact_eq=False)))
            for ins in flat.instructions:
                m = ins.unitary_class.matrix
                if m is None:
                    continue
                assert np.max(np.abs(m.conj().T @ m - np.eye(len(m)))) < 1e-9

    def test_cx_matrix_control_is_first_operand(self):
        # index bit 0 = first operand (control), bit 1 = target
        m = operator_matrix([(gate_matrix("cx"), (0, 1))], [0, 1])
        assert m[3, 1] == 1 and m[1, 3] == 1 and m[0, 0] == 1 and m[2, 2] == 1
