"""Self-generated benchmark families with trailing assertions.

Each generator returns a correct program for ``n`` qubits (4 to 8 in the
evaluation).  Equality assertions embed the classically simulated final
state; entanglement assertions are only emitted when some qubit pair of the
final state is correlated.
"""
from __future__ import annotations

import itertools
import math

import numpy as np

from .interaction import build_graph
from .program import flatten
from .qasm import AssertionKind, SourceProgram, format_complex, parse
from .simulator import QuantumState, check_entanglement, final_state

FAMILIES = ("ghz", "graph-state", "dj-like", "qft-like")


class BenchmarkError(ValueError):
    pass


def _ghz_body(n: int) -> list[str]:
    # spine q0 .. q[s-1], q[n-1]; remaining qubits branch off interior spine nodes
    s = math.ceil(n / 2)
    spine = list(range(s)) + [n - 1]
    lines = ["h q[0];"]
    lines += [f"cx q[{a}], q[{b}];" for a, b in zip(spine, spine[1:])]
    interior = spine[1:-1]
    for j, leaf in enumerate(range(s, n - 1)):
        lines.append(f"cx q[{interior[j % len(interior)]}], q[{leaf}];")
    return lines


def _graph_edges(n: int) -> list[tuple[int, int]]:
    # seeded random tree, edges applied in shuffled order
    rng = np.random.default_rng(1000 + n)
    edges = [(int(rng.integers(0, v)), v) for v in range(1, n)]
    order = rng.permutation(len(edges))
    return [edges[i] for i in order]


def _graph_body(n: int) -> list[str]:
    return ["h q;"] + [f"cz q[{a}], q[{b}];" for a, b in _graph_edges(n)]


def _dj_body(n: int) -> list[str]:
    # n-1 inputs plus one ancilla; balanced oracle on a fixed subset
    anc = n - 1
    rng = np.random.default_rng(2000 + n)
    mask = [int(b) for b in rng.integers(0, 2, size=n - 1)]
    if not any(mask):
        mask[0] = 1
    flips = [i for i in range(n - 1) if rng.random() < 0.5]
    lines = [f"x q[{anc}];", "h q;"]
    lines += [f"x q[{i}];" for i in flips]
    lines += [f"cx q[{i}], q[{anc}];" for i in range(n - 1) if mask[i]]
    lines += [f"x q[{i}];" for i in flips]
    lines += [f"h q[{i}];" for i in range(n - 1)]
    return lines


def _qft_body(n: int) -> list[str]:
    lines = [
        "gate cu1(lam) a, b { u1(lam / 2) a; cx a, b; u1(-lam / 2) b; cx a, b; u1(lam / 2) b; }",
        "x q[1];",
        "h q[0];",
        f"cx q[0], q[{n - 1}];",
    ]
    for target in range(n - 1, -1, -1):
        lines.append(f"h q[{target}];")
        for control in range(target - 1, -1, -1):
            lines.append(f"cu1(pi / {2 ** (target - control)}) q[{control}], q[{target}];")
    for i in range(n // 2):
        lines.append(f"swap q[{i}], q[{n - 1 - i}];")
    return lines


_BODIES = {"ghz": _ghz_body, "graph-state": _graph_body, "dj-like": _dj_body, "qft-like": _qft_body}


def _distance(graph, a: int, b: int) -> int:
    frontier, seen, d = {a}, {a}, 0
    while frontier:
        if b in frontier:
            return d
        frontier = {m for q in frontier for m in graph.neighbors(q)} - seen
        seen |= frontier
        d += 1
    return -1


def _entangled_pair(text: str, n: int, family: str) -> tuple[int, int]:
    flat = flatten(parse(text))
    state = QuantumState(final_state(flat), n)
    if family == "ghz":
        return 0, n - 1
    graph = build_graph(flat, len(flat))
    pairs = [p for p in itertools.combinations(range(n), 2) if check_entanglement(state, p)[0]]
    if not pairs:
        raise BenchmarkError(f"{family}({n}) ends in a product state; no entanglement assertion applies")
    return max(pairs, key=lambda p: (_distance(graph, *p), -p[0], -p[1]))


def generate_benchmark(family: str, n: int, kind: AssertionKind | str) -> SourceProgram:
    """Build ``family`` on ``n`` qubits with one trailing assertion of ``kind``."""
    if family not in _BODIES:
        raise BenchmarkError(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")
    if not 2 <= n <= 16:
        raise BenchmarkError("qubit count must be between 2 and 16")
    kind = AssertionKind(kind)
    body = _BODIES[family](n)
    head = ['OPENQASM 2.0;', 'include "qelib1.inc";', f"qreg q[{n}];"]
    text = "\n".join(head + body) + "\n"
    if kind is AssertionKind.EQUALITY:
        amps = final_state(flatten(parse(text)))
        amps = np.where(np.abs(amps) < 1e-12, 0, amps)
        literal = ", ".join(format_complex(complex(round(a.real, 12), round(a.imag, 12))) for a in amps)
        text += f"assert-eq q {{ {literal} }}\n"
    elif kind is AssertionKind.ENTANGLEMENT:
        a, b = _entangled_pair(text, n, family)
        text += f"assert-ent q[{a}], q[{b}];\n"
    else:
        text += "assert-sup q;\n"
    return parse(text)


def parse_sizes(spec: str) -> list[int]:
    """``"4..8"`` -> [4, 5, 6, 7, 8]; ``"4,6"`` -> [4, 6]."""
    sizes: list[int] = []
    for part in spec.split(","):
        if ".." in part:
            lo, hi = part.split("..")
            sizes.extend(range(int(lo), int(hi) + 1))
        else:
            sizes.append(int(part))
    return sizes
