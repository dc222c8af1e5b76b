from pathlib import Path

import numpy as np
import pytest

from assertrefine.program import flatten
from assertrefine.qasm import parse
from assertrefine.simulator import (
    CheckerConfig,
    QuantumState,
    SimulationError,
    check_entanglement,
    check_equality,
    check_superposition,
    negativity,
    reduced_density_matrix,
    run,
)
from randprog import random_state

FIXTURES = Path(__file__).parent / "fixtures"
S = 1 / np.sqrt(2)


def state(amps):
    amps = np.asarray(amps, dtype=complex)
    return QuantumState(amps / np.linalg.norm(amps), int(np.log2(len(amps))))


def ghz(n):
    amps = np.zeros(2**n, dtype=complex)
    amps[0] = amps[-1] = S
    return QuantumState(amps, n)


class TestChecks:
    def test_superposition(self):
        assert check_superposition(state([S, S]), [0])[0]
        assert not check_superposition(state([1, 0]), [0])[0]

    def test_entanglement(self):
        assert check_entanglement(state([S, 0, 0, S]), [0, 1])[0]
        assert not check_entanglement(state([0.5, 0.5, 0.5, 0.5]), [0, 1])[0]

    def test_ghz_pair_distance_is_one_half(self):
        ok, diag = check_entanglement(ghz(5), [0, 4])
        assert ok and abs(diag["min_pair_score"] - 0.5) < 1e-12
        rho = reduced_density_matrix(ghz(5).amplitudes, 5, [0, 4])
        assert np.allclose(rho, np.diag([0.5, 0, 0, 0.5]))

    def test_ghz_pair_is_ppt(self):
        rho = reduced_density_matrix(ghz(5).amplitudes, 5, [0, 4])
        assert negativity(rho) < 1e-12
        assert not check_entanglement(ghz(5), [0, 4], criterion="ppt")[0]
        assert check_entanglement(state([S, 0, 0, S]), [0, 1], criterion="ppt")[0]

    def test_equality(self):
        zero2 = state([1, 0, 0, 0])
        assert check_equality(zero2, [0, 1], [1, 0, 0, 0])[0]
        assert check_equality(QuantumState(np.exp(1j * np.pi / 3) * zero2.amplitudes, 2), [0, 1], [1, 0, 0, 0])[0]
        ok, diag = check_equality(state([S, 0, 0, S]), [0], [1, 0])
        assert not ok and abs(diag["fidelity"] - 0.5) < 1e-12

    def test_equality_bit_order(self):
        # q0 = |1>, q1 = |0>: index 1 when q0 is listed first, index 2 otherwise
        s = state([0, 1, 0, 0])
        assert check_equality(s, [0, 1], [0, 1, 0, 0])[0]
        assert check_equality(s, [1, 0], [0, 0, 1, 0])[0]


class TestPartialTrace:
    @pytest.mark.parametrize("seed", range(30))
    def test_sanity(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(1, 7))
        k = int(rng.integers(1, n + 1))
        targets = [int(t) for t in rng.choice(n, size=k, replace=False)]
        rho = reduced_density_matrix(random_state(rng, n), n, targets)
        assert abs(np.trace(rho) - 1) < 1e-9
        assert np.allclose(rho, rho.conj().T, atol=1e-12)
        assert np.linalg.eigvalsh(rho).min() > -1e-9

    def test_product_marginal(self):
        a, b = np.array([0.6, 0.8]), np.array([S, -S * 1j])
        amps = np.kron(b, a)  # qubit 0 = a, qubit 1 = b
        assert np.allclose(reduced_density_matrix(amps, 2, [0]), np.outer(a, a.conj()))
        assert np.allclose(reduced_density_matrix(amps, 2, [1]), np.outer(b, b.conj()))


class TestRun:
    def test_cccx_all_fail(self):
        flat = flatten(parse((FIXTURES / "cccx.qasm").read_text()))
        assert [v.passed for v in run(flat).verdicts] == [False, False, False]

    def test_corrected_cccx_passes(self):
        flat = flatten(parse((FIXTURES / "cccx_correct.qasm").read_text()))
        assert all(v.passed for v in run(flat).verdicts)

    def test_ghz_fixture_passes(self):
        assert run(flatten(parse((FIXTURES / "ghz5.qasm").read_text()))).all_passed

    def test_empty_circuit(self):
        assert run(flatten(parse("qreg q[1];\nassert-eq q[0] { 1, 0 }"))).all_passed

    def test_assertions_do_not_touch_state(self):
        text = "qreg q[2];\nh q[0];\ncx q[0], q[1];\n"
        a = run(flatten(parse(text))).state.amplitudes
        b = run(flatten(parse(text + "assert-sup q;\nassert-eq q[0] { 1, 0 }\n"))).state.amplitudes
        assert np.array_equal(a, b)

    def test_seeded_measurement_is_reproducible(self):
        text = "qreg q[4];\ncreg c[4];\nh q;\nmeasure q -> c;\n"
        flat = flatten(parse(text))
        outcomes = {tuple(run(flat, seed).clbits) for seed in range(20)}
        assert len(outcomes) > 1
        assert run(flat, 5).clbits == run(flat, 5).clbits

    def test_collapse_and_reset(self):
        flat = flatten(parse("qreg q[1];\ncreg c[1];\nh q[0];\nreset q[0];\nassert-eq q[0] { 1, 0 }"))
        for seed in range(10):
            assert run(flat, seed).all_passed

    def test_qubit_cap(self):
        flat = flatten(parse("qreg q[17];\nh q[0];"))
        with pytest.raises(SimulationError):
            run(flat)
        with pytest.raises(SimulationError):
            run(flatten(parse("qreg q[3];")), config=CheckerConfig(qubit_cap=2))
