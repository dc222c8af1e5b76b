"""Lexer, parser and printer for OpenQASM 2 extended with assertion statements.

Three assertion forms are accepted on top of the usual OpenQASM 2 statements::

    assert-eq <targets> { <complex>, ... } [;]
    assert-sup <targets> ;
    assert-ent <targets> ;

Amplitude ordering for ``assert-eq``: the first listed target qubit is the
least-significant bit of the amplitude index.  ``assert-eq a, b { w, x, y, z }``
therefore means ``w|a=0,b=0> + x|a=1,b=0> + y|a=0,b=1> + z|a=1,b=1>``.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Union

__all__ = [
    "AMPLITUDE_NORM_TOL",
    "BUILTIN_GATES",
    "Assertion",
    "AssertionKind",
    "Barrier",
    "BinOp",
    "Call",
    "CRegDecl",
    "GateApply",
    "GateDef",
    "Include",
    "Measure",
    "Name",
    "Neg",
    "Num",
    "ParseError",
    "QRegDecl",
    "QubitRef",
    "Reset",
    "SourceProgram",
    "VersionHeader",
    "format_expr",
    "parse",
    "print_program",
]

# tolerance on sum |a_i|^2 - 1 for assert-eq blocks
AMPLITUDE_NORM_TOL = 1e-4

# name -> (number of angle parameters, number of qubit operands)
BUILTIN_GATES: dict[str, tuple[int, int]] = {
    "x": (0, 1), "y": (0, 1), "z": (0, 1), "h": (0, 1),
    "s": (0, 1), "sdg": (0, 1), "t": (0, 1), "tdg": (0, 1),
    "rx": (1, 1), "ry": (1, 1), "rz": (1, 1),
    "u1": (1, 1), "u2": (2, 1), "u3": (3, 1),
    "cx": (0, 2), "cz": (0, 2), "swap": (0, 2), "ccx": (0, 3),
}

_FUNCTIONS = {
    "sin": math.sin, "cos": math.cos, "tan": math.tan,
    "exp": math.exp, "ln": math.log, "sqrt": math.sqrt,
}


class ParseError(ValueError):
    """Raised for any lexical, syntactic or semantic error in a program."""

    def __init__(self, message: str, line: int, column: int = 0):
        self.message = message
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")


# ---------------------------------------------------------------------------
# AST
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Name:
    id: str


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Expr"


Expr = Union[Num, Name, Neg, BinOp, Call]


def evaluate(expr: Expr, env: dict[str, float] | None = None) -> float:
    """Evaluate a parameter expression; ``pi`` is always bound."""
    if isinstance(expr, Num):
        return expr.value
    if isinstance(expr, Name):
        if expr.id == "pi":
            return math.pi
        if env is None or expr.id not in env:
            raise KeyError(expr.id)
        return env[expr.id]
    if isinstance(expr, Neg):
        return -evaluate(expr.operand, env)
    if isinstance(expr, Call):
        return _FUNCTIONS[expr.func](evaluate(expr.arg, env))
    a, b = evaluate(expr.left, env), evaluate(expr.right, env)
    if expr.op == "+":
        return a + b
    if expr.op == "-":
        return a - b
    if expr.op == "*":
        return a * b
    if expr.op == "/":
        return a / b
    return a ** b


def _fmt_real(x: float) -> str:
    if x == int(x) and abs(x) < 1e15:
        return str(int(x))
    return repr(float(x))


def format_expr(expr: Expr) -> str:
    if isinstance(expr, Num):
        return _fmt_real(expr.value)
    if isinstance(expr, Name):
        return expr.id
    if isinstance(expr, Neg):
        inner = format_expr(expr.operand)
        if isinstance(expr.operand, (BinOp, Neg)):
            inner = f"({inner})"
        return f"-{inner}"
    if isinstance(expr, Call):
        return f"{expr.func}({format_expr(expr.arg)})"
    parts = []
    for side in (expr.left, expr.right):
        text = format_expr(side)
        parts.append(f"({text})" if isinstance(side, BinOp) else text)
    return f"{parts[0]} {expr.op} {parts[1]}"


def format_complex(z: complex) -> str:
    re_, im = z.real, z.imag
    if im == 0:
        return _fmt_real(re_)
    if re_ == 0:
        return f"{_fmt_real(im)}i"
    sign = "-" if im < 0 else "+"
    return f"{_fmt_real(re_)}{sign}{_fmt_real(abs(im))}i"


@dataclass(frozen=True)
class QubitRef:
    """``reg`` or ``reg[index]``; index None means the whole register."""

    reg: str
    index: int | None = None

    def __str__(self) -> str:
        return self.reg if self.index is None else f"{self.reg}[{self.index}]"


class AssertionKind(str, Enum):
    EQUALITY = "eq"
    SUPERPOSITION = "sup"
    ENTANGLEMENT = "ent"


@dataclass(frozen=True)
class VersionHeader:
    version: str = "2.0"
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Include:
    path: str
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class QRegDecl:
    name: str
    size: int
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class CRegDecl:
    name: str
    size: int
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class GateApply:
    name: str
    params: tuple[Expr, ...]
    operands: tuple[QubitRef, ...]
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Measure:
    qubit: QubitRef
    bit: QubitRef | None = None
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Reset:
    qubit: QubitRef
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Barrier:
    operands: tuple[QubitRef, ...]
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class GateDef:
    """``gate name(params) args { body }``.

    Body entries are GateApply / Measure / Reset / Barrier statements whose
    QubitRefs name formal arguments (index None).
    """

    name: str
    params: tuple[str, ...]
    qargs: tuple[str, ...]
    body: tuple["Statement", ...]
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Assertion:
    kind: AssertionKind
    targets: tuple[QubitRef, ...]
    amplitudes: tuple[complex, ...] | None = None
    line: int = field(default=0, compare=False)
    note: str | None = field(default=None, compare=False)


Statement = Union[
    VersionHeader, Include, QRegDecl, CRegDecl, GateDef,
    GateApply, Measure, Reset, Barrier, Assertion,
]

DECLARATION_TYPES = (VersionHeader, Include, QRegDecl, CRegDecl, GateDef)


@dataclass(frozen=True)
class SourceProgram:
    statements: tuple[Statement, ...]

    @property
    def line_map(self) -> tuple[int, ...]:
        return tuple(s.line for s in self.statements)

    def qregs(self) -> dict[str, int]:
        return {s.name: s.size for s in self.statements if isinstance(s, QRegDecl)}

    def cregs(self) -> dict[str, int]:
        return {s.name: s.size for s in self.statements if isinstance(s, CRegDecl)}

    def gate_defs(self) -> dict[str, GateDef]:
        return {s.name: s for s in self.statements if isinstance(s, GateDef)}

    def resolve(self, refs: Iterable[QubitRef]) -> list[tuple[str, int]]:
        """Expand whole-register references, register index 0 first."""
        sizes = self.qregs()
        out: list[tuple[str, int]] = []
        for ref in refs:
            if ref.index is None:
                out.extend((ref.reg, i) for i in range(sizes[ref.reg]))
            else:
                out.append((ref.reg, ref.index))
        return out


# ---------------------------------------------------------------------------
# Lexer
# ---------------------------------------------------------------------------

_TOKEN_SPEC = [
    ("COMMENT", r"//[^\n]*"),
    ("BLOCKCOMMENT", r"/\*.*?\*/"),
    ("NEWLINE", r"\n"),
    ("WS", r"[ \t\r\f]+"),
    ("ASSERT", r"assert-(?:eq|sup|ent)\b"),
    ("IMAG", r"(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?i(?![A-Za-z0-9_])"),
    ("NUMBER", r"(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?"),
    ("STRING", r'"[^"\n]*"'),
    ("ARROW", r"->"),
    ("EQEQ", r"=="),
    ("ID", r"[A-Za-z_][A-Za-z0-9_]*"),
    ("SYM", r"[;,\[\]\(\)\{\}\+\-\*/\^]"),
]
_TOKEN_RE = re.compile("|".join(f"(?P<{n}>{p})" for n, p in _TOKEN_SPEC), re.DOTALL)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        value = m.group()
        if kind == "NEWLINE":
            line += 1
            line_start = m.end()
        elif kind == "BLOCKCOMMENT":
            line += value.count("\n")
            if "\n" in value:
                line_start = pos + value.rindex("\n") + 1
        elif kind not in ("WS", "COMMENT"):
            if kind == "SYM":
                kind = value
            tokens.append(Token(kind, value, line, pos - line_start + 1))
        pos = m.end()
    tokens.append(Token("EOF", "", line, pos - line_start + 1))
    return tokens


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


class _Parser:
    def __init__(self, text: str, norm_tol: float):
        self.tokens = tokenize(text)
        self.pos = 0
        self.norm_tol = norm_tol
        self.qregs: dict[str, int] = {}
        self.cregs: dict[str, int] = {}
        self.gates: dict[str, tuple[int, int]] = {}
        self.defining: str | None = None

    # token helpers
    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def error(self, message: str, tok: Token | None = None) -> ParseError:
        tok = tok or self.tok
        return ParseError(message, tok.line, tok.col)

    def advance(self) -> Token:
        tok = self.tok
        self.pos += 1
        return tok

    def accept(self, kind: str, text: str | None = None) -> Token | None:
        if self.tok.kind == kind and (text is None or self.tok.text == text):
            return self.advance()
        return None

    def expect(self, kind: str, text: str | None = None) -> Token:
        tok = self.accept(kind, text)
        if tok is None:
            want = text or kind
            got = self.tok.text or "end of input"
            raise self.error(f"expected {want!r}, found {got!r}")
        return tok

    def expect_int(self) -> int:
        tok = self.expect("NUMBER")
        if not tok.text.isdigit():
            raise self.error("expected a non-negative integer", tok)
        return int(tok.text)

    # program
    def program(self) -> SourceProgram:
        statements: list[Statement] = []
        if self.tok.kind == "ID" and self.tok.text == "OPENQASM":
            start = self.advance()
            version = self.expect("NUMBER").text
            self.expect(";")
            statements.append(VersionHeader(version, line=start.line))
        while self.tok.kind != "EOF":
            statements.append(self.statement())
        return SourceProgram(tuple(statements))

    def statement(self) -> Statement:
        tok = self.tok
        if tok.kind == "ASSERT":
            return self.assertion()
        if tok.kind != "ID":
            raise self.error(f"unexpected token {tok.text!r}")
        word = tok.text
        if word == "OPENQASM":
            raise self.error("version header must be the first statement")
        if word == "include":
            self.advance()
            path = self.expect("STRING").text[1:-1]
            self.expect(";")
            return Include(path, line=tok.line)
        if word in ("qreg", "creg"):
            self.advance()
            name_tok = self.expect("ID")
            self.expect("[")
            size = self.expect_int()
            self.expect("]")
            self.expect(";")
            if size == 0:
                raise self.error("register size must be positive", name_tok)
            if name_tok.text in self.qregs or name_tok.text in self.cregs:
                raise self.error(f"register {name_tok.text!r} already declared", name_tok)
            if word == "qreg":
                self.qregs[name_tok.text] = size
                return QRegDecl(name_tok.text, size, line=tok.line)
            self.cregs[name_tok.text] = size
            return CRegDecl(name_tok.text, size, line=tok.line)
        if word == "gate":
            return self.gate_def()
        if word == "if":
            raise self.error("classical control flow ('if') is not supported")
        if word == "opaque":
            raise self.error("opaque gates are not supported")
        if word == "measure":
            self.advance()
            qubit = self.qubit_ref()
            self.expect("ARROW")
            bit = self.bit_ref()
            self.expect(";")
            qsize = self._ref_size(qubit, self.qregs)
            bsize = self._ref_size(bit, self.cregs)
            if qsize != bsize:
                raise self.error("measure operands have different sizes", tok)
            return Measure(qubit, bit, line=tok.line)
        if word == "reset":
            self.advance()
            qubit = self.qubit_ref()
            self.expect(";")
            return Reset(qubit, line=tok.line)
        if word == "barrier":
            self.advance()
            operands = self.ref_list(self.qubit_ref)
            self.expect(";")
            return Barrier(tuple(operands), line=tok.line)
        return self.gate_apply()

    @staticmethod
    def _ref_size(ref: QubitRef, regs: dict[str, int]) -> int:
        return regs[ref.reg] if ref.index is None else 1

    def ref_list(self, item):
        refs = [item()]
        while self.accept(","):
            refs.append(item())
        return refs

    def _register_ref(self, regs: dict[str, int], what: str) -> QubitRef:
        name_tok = self.expect("ID")
        if name_tok.text not in regs:
            raise self.error(f"undeclared {what} register {name_tok.text!r}", name_tok)
        if self.accept("["):
            idx_tok = self.tok
            index = self.expect_int()
            self.expect("]")
            if index >= regs[name_tok.text]:
                raise self.error(
                    f"index {index} out of range for {name_tok.text}[{regs[name_tok.text]}]",
                    idx_tok,
                )
            return QubitRef(name_tok.text, index)
        return QubitRef(name_tok.text)

    def qubit_ref(self) -> QubitRef:
        return self._register_ref(self.qregs, "quantum")

    def bit_ref(self) -> QubitRef:
        return self._register_ref(self.cregs, "classical")

    def gate_arity(self, name_tok: Token) -> tuple[int, int]:
        name = name_tok.text
        if name == self.defining:
            raise self.error(f"recursive gate definition {name!r}", name_tok)
        if name in BUILTIN_GATES:
            return BUILTIN_GATES[name]
        if name in self.gates:
            return self.gates[name]
        raise self.error(f"unknown gate {name!r}", name_tok)

    def gate_apply(self) -> GateApply:
        name_tok = self.expect("ID")
        n_params, n_qubits = self.gate_arity(name_tok)
        params = self.param_list(allowed=set())
        operands = self.ref_list(self.qubit_ref)
        self.expect(";")
        if len(params) != n_params:
            raise self.error(
                f"gate {name_tok.text!r} takes {n_params} parameter(s), got {len(params)}", name_tok
            )
        if len(operands) != n_qubits:
            raise self.error(
                f"gate {name_tok.text!r} takes {n_qubits} qubit(s), got {len(operands)}", name_tok
            )
        sizes = {self.qregs[r.reg] for r in operands if r.index is None}
        if len(sizes) > 1:
            raise self.error("register operands of different sizes", name_tok)
        singles = [(r.reg, r.index) for r in operands if r.index is not None]
        if len(set(singles)) != len(singles):
            raise self.error("duplicate qubit operand", name_tok)
        return GateApply(name_tok.text, tuple(params), tuple(operands), line=name_tok.line)

    def param_list(self, allowed: set[str]) -> list[Expr]:
        if not self.accept("("):
            return []
        if self.accept(")"):
            return []
        params = [self.expr(allowed)]
        while self.accept(","):
            params.append(self.expr(allowed))
        self.expect(")")
        return params

    # expressions
    def expr(self, allowed: set[str]) -> Expr:
        node = self.term(allowed)
        while self.tok.kind in ("+", "-"):
            op = self.advance().kind
            node = BinOp(op, node, self.term(allowed))
        return node

    def term(self, allowed: set[str]) -> Expr:
        node = self.power(allowed)
        while self.tok.kind in ("*", "/"):
            op = self.advance().kind
            node = BinOp(op, node, self.power(allowed))
        return node

    def power(self, allowed: set[str]) -> Expr:
        node = self.unary(allowed)
        if self.accept("^"):
            node = BinOp("^", node, self.power(allowed))
        return node

    def unary(self, allowed: set[str]) -> Expr:
        if self.accept("-"):
            return Neg(self.unary(allowed))
        if self.accept("+"):
            return self.unary(allowed)
        return self.primary(allowed)

    def primary(self, allowed: set[str]) -> Expr:
        tok = self.tok
        if tok.kind == "NUMBER":
            self.advance()
            return Num(float(tok.text))
        if tok.kind == "(":
            self.advance()
            node = self.expr(allowed)
            self.expect(")")
            return node
        if tok.kind == "ID":
            self.advance()
            if tok.text in _FUNCTIONS:
                self.expect("(")
                arg = self.expr(allowed)
                self.expect(")")
                return Call(tok.text, arg)
            if tok.text != "pi" and tok.text not in allowed:
                raise self.error(f"unknown identifier {tok.text!r} in expression", tok)
            return Name(tok.text)
        raise self.error(f"unexpected token {tok.text or 'end of input'!r} in expression")

    # gate definitions
    def gate_def(self) -> GateDef:
        start = self.advance()
        name_tok = self.expect("ID")
        name = name_tok.text
        if name in BUILTIN_GATES or name in self.gates:
            raise self.error(f"gate {name!r} already defined", name_tok)
        params: list[str] = []
        if self.accept("("):
            if not self.accept(")"):
                params = [t.text for t in self.ref_list(lambda: self.expect("ID"))]
                self.expect(")")
        qargs = [t.text for t in self.ref_list(lambda: self.expect("ID"))]
        if len(set(qargs)) != len(qargs) or len(set(params)) != len(params):
            raise self.error("duplicate argument name in gate definition", name_tok)
        self.expect("{")
        self.defining = name
        body: list[Statement] = []
        formal = set(qargs)

        def formal_ref() -> QubitRef:
            tok = self.expect("ID")
            if tok.text not in formal:
                raise self.error(f"unknown gate argument {tok.text!r}", tok)
            return QubitRef(tok.text)

        while not self.accept("}"):
            tok = self.tok
            if tok.kind == "EOF":
                raise self.error(f"unterminated gate definition {name!r}")
            if tok.kind == "ID" and tok.text == "barrier":
                self.advance()
                body.append(Barrier(tuple(self.ref_list(formal_ref)), line=tok.line))
            elif tok.kind == "ID" and tok.text == "reset":
                self.advance()
                body.append(Reset(formal_ref(), line=tok.line))
            elif tok.kind == "ID" and tok.text == "measure":
                self.advance()
                body.append(Measure(formal_ref(), None, line=tok.line))
            else:
                call_tok = self.expect("ID")
                n_params, n_qubits = self.gate_arity(call_tok)
                call_params = self.param_list(allowed=set(params))
                operands = self.ref_list(formal_ref)
                if len(call_params) != n_params or len(operands) != n_qubits:
                    raise self.error(f"wrong arity for gate {call_tok.text!r}", call_tok)
                if len({r.reg for r in operands}) != len(operands):
                    raise self.error("duplicate qubit operand", call_tok)
                body.append(GateApply(call_tok.text, tuple(call_params), tuple(operands), line=tok.line))
            self.expect(";")
        self.defining = None
        self.gates[name] = (len(params), len(qargs))
        return GateDef(name, tuple(params), tuple(qargs), tuple(body), line=start.line)

    # assertions
    def assertion(self) -> Assertion:
        tok = self.advance()
        kind = AssertionKind(tok.text.split("-", 1)[1])
        targets = self.ref_list(self.qubit_ref)
        resolved: list[tuple[str, int]] = []
        for ref in targets:
            if ref.index is None:
                resolved.extend((ref.reg, i) for i in range(self.qregs[ref.reg]))
            else:
                resolved.append((ref.reg, ref.index))
        if len(set(resolved)) != len(resolved):
            raise self.error("duplicate qubit in assertion targets", tok)
        amplitudes = None
        if kind is AssertionKind.EQUALITY:
            brace = self.expect("{")
            amps = [self.complex_literal()]
            while self.accept(","):
                amps.append(self.complex_literal())
            self.expect("}")
            self.accept(";")
            if len(amps) != 2 ** len(resolved):
                raise self.error(
                    f"assert-eq over {len(resolved)} qubit(s) needs {2 ** len(resolved)} "
                    f"amplitudes, got {len(amps)}",
                    brace,
                )
            norm = sum(abs(a) ** 2 for a in amps)
            if abs(norm - 1.0) > self.norm_tol:
                raise self.error(f"amplitude vector has squared norm {norm:.6g}, expected 1", brace)
            amplitudes = tuple(amps)
        else:
            if self.tok.kind == "{":
                raise self.error(f"{tok.text} takes no amplitude block")
            self.expect(";")
            if kind is AssertionKind.ENTANGLEMENT and len(resolved) < 2:
                raise self.error("assert-ent requires at least two target qubits", tok)
        return Assertion(kind, tuple(targets), amplitudes, line=tok.line)

    def complex_literal(self) -> complex:
        sign = -1.0 if self.accept("-") else 1.0
        if not sign < 0:
            self.accept("+")
        tok = self.tok
        if tok.kind == "IMAG":
            self.advance()
            return complex(0.0, sign * float(tok.text[:-1]))
        if tok.kind != "NUMBER":
            raise self.error(f"expected a numeric amplitude literal, found {tok.text!r}")
        self.advance()
        real = sign * float(tok.text)
        if self.tok.kind in ("+", "-") and self.tokens[self.pos + 1].kind == "IMAG":
            isign = 1.0 if self.advance().kind == "+" else -1.0
            return complex(real, isign * float(self.advance().text[:-1]))
        return complex(real, 0.0)


def parse(text: str, norm_tol: float = AMPLITUDE_NORM_TOL) -> SourceProgram:
    """Parse program text; raises ParseError with the offending line."""
    return _Parser(text, norm_tol).program()


# ---------------------------------------------------------------------------
# Printer
# ---------------------------------------------------------------------------


def _refs(refs: Iterable[QubitRef]) -> str:
    return ", ".join(str(r) for r in refs)


def format_statement(stmt: Statement, annotations: bool = False) -> str:
    if isinstance(stmt, VersionHeader):
        return f"OPENQASM {stmt.version};"
    if isinstance(stmt, Include):
        return f'include "{stmt.path}";'
    if isinstance(stmt, QRegDecl):
        return f"qreg {stmt.name}[{stmt.size}];"
    if isinstance(stmt, CRegDecl):
        return f"creg {stmt.name}[{stmt.size}];"
    if isinstance(stmt, GateApply):
        params = ""
        if stmt.params:
            params = "(" + ", ".join(format_expr(p) for p in stmt.params) + ")"
        return f"{stmt.name}{params} {_refs(stmt.operands)};"
    if isinstance(stmt, Measure):
        if stmt.bit is None:
            return f"measure {stmt.qubit};"
        return f"measure {stmt.qubit} -> {stmt.bit};"
    if isinstance(stmt, Reset):
        return f"reset {stmt.qubit};"
    if isinstance(stmt, Barrier):
        return f"barrier {_refs(stmt.operands)};"
    if isinstance(stmt, GateDef):
        params = f"({', '.join(stmt.params)})" if stmt.params else ""
        body = " ".join(format_statement(s) for s in stmt.body)
        body = f" {body} " if body else " "
        return f"gate {stmt.name}{params} {', '.join(stmt.qargs)} {{{body}}}"
    if isinstance(stmt, Assertion):
        text = f"assert-{stmt.kind.value} {_refs(stmt.targets)}"
        if stmt.amplitudes is not None:
            text += " { " + ", ".join(format_complex(a) for a in stmt.amplitudes) + " }"
        else:
            text += ";"
        if annotations and stmt.note:
            text += f" // {stmt.note}"
        return text
    raise TypeError(f"not a statement: {stmt!r}")


def print_program(program: SourceProgram, annotations: bool = False) -> str:
    """One statement per line; assertion notes become trailing comments."""
    return "".join(format_statement(s, annotations) + "\n" for s in program.statements)
