"""AST, parser and printer for the stabilizer-code program language.

Surface syntax (one statement per line, or ``;``-separated; ``//`` comments):

    name: rep3_init
    qubits: 3
    svars: s0 s1

    q2 q1 q0 := |0>
    s0 := Z0*Z1
    if M[s0; q1 q0] then
      skip
    else
      q1 := X q1
      s0 := -s0
    end
    while @scrub M[s1; q2 q1] do ... done
    correct(s0, s1)

Unitary statements take an indexed gate product (``X2*X1*X0``), a bare
gate name applied to every listed qubit (``H``), a two-qubit gate name
(``CNOT``, ``CZ``), or an inline Pauli-sum unitary in braces.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from typing import Iterator, Mapping, Optional, Union

from .errors import ArityMismatch, MissingDecoder, ProgramSyntaxError, UndeclaredVariable
from .pauli import GATE_ARITY, GateApp, SignedPauli, StabilizerExpr, parse_expr, parse_pauli


# ---------------------------------------------------------------------------
# AST
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Literal:
    """A concrete signed Pauli value (phase +-1 or +-i); I turns a variable off."""

    value: SignedPauli


@dataclass(frozen=True)
class VarRef:
    """+-s for a stabilizer variable s."""

    var: str
    negate: bool = False


UnaryStabExpr = Union[Literal, VarRef]


@dataclass(frozen=True)
class Skip:
    pass


@dataclass(frozen=True)
class Init:
    qubits: tuple[int, ...]


@dataclass(frozen=True)
class Unitary:
    """One statement applying a product of gates (circuit order)."""

    ops: tuple[GateApp, ...]


@dataclass(frozen=True)
class SAssign:
    var: str
    rhs: UnaryStabExpr


@dataclass(frozen=True)
class Seq:
    stmts: tuple["Stmt", ...]

    def __post_init__(self):
        if not self.stmts:
            raise ValueError("empty Seq")


@dataclass(frozen=True)
class IfM:
    var: str
    qubits: tuple[int, ...]
    then_body: Optional["Stmt"]
    else_body: Optional["Stmt"]


@dataclass(frozen=True)
class WhileM:
    var: str
    qubits: tuple[int, ...]
    body: "Stmt"
    label: Optional[str] = None


@dataclass(frozen=True)
class Correct:
    vars: tuple[str, ...]


Stmt = Union[Skip, Init, Unitary, SAssign, Seq, IfM, WhileM, Correct]


@dataclass(frozen=True)
class ProgramUnit:
    name: str
    n_qubits: int
    svar_decls: tuple[str, ...]
    body: Stmt
    decoder_bindings: Mapping[int, str] = field(default_factory=dict)

    def with_bindings(self, bindings: Mapping[int, str]) -> "ProgramUnit":
        return replace(self, decoder_bindings=dict(bindings))


def walk(stmt: Stmt) -> Iterator[Stmt]:
    """Pre-order traversal, Seq transparent for child recursion."""
    yield stmt
    if isinstance(stmt, Seq):
        for s in stmt.stmts:
            yield from walk(s)
    elif isinstance(stmt, IfM):
        if stmt.then_body is not None:
            yield from walk(stmt.then_body)
        if stmt.else_body is not None:
            yield from walk(stmt.else_body)
    elif isinstance(stmt, WhileM):
        yield from walk(stmt.body)


# ---------------------------------------------------------------------------
# Tokenizer
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t]+)
  | (?P<comment>//[^\n]*)
  | (?P<newline>\n)
  | (?P<assign>:=)
  | (?P<ket>\|0+>)
  | (?P<inline>\{[^}]*\})
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<punct>[;\[\]\(\),*@\-])
""",
    re.VERBOSE,
)

KEYWORDS = {"skip", "if", "then", "else", "end", "while", "do", "done", "correct", "M"}


@dataclass
class Token:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str, first_line: int = 1) -> list[Token]:
    tokens = []
    line, col = first_line, 1
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ProgramSyntaxError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        tok = m.group()
        if kind == "newline":
            tokens.append(Token("sep", "\n", line, col))
            line += 1
            col = 1
        else:
            if kind not in ("ws", "comment"):
                if kind == "punct" and tok == ";":
                    tokens.append(Token("sep", ";", line, col))
                else:
                    tokens.append(Token(kind, tok, line, col))
            col += len(tok)
        pos = m.end()
    tokens.append(Token("eof", "", line, col))
    return tokens


_QUBIT_RE = re.compile(r"^q(\d+)$")


class _Parser:
    def __init__(self, tokens: list[Token], svars: set[str], n_qubits: int):
        self.toks = tokens
        self.i = 0
        self.svars = svars
        self.n_qubits = n_qubits

    # -- token helpers ------------------------------------------------------
    def peek(self) -> Token:
        return self.toks[self.i]

    def next(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def skip_seps(self):
        while self.peek().kind == "sep":
            self.next()

    def expect(self, text: str) -> Token:
        t = self.next()
        if t.text != text:
            raise ProgramSyntaxError(f"expected {text!r}, found {t.text!r}", t.line, t.col)
        return t

    def error(self, msg: str):
        t = self.peek()
        raise ProgramSyntaxError(msg, t.line, t.col)

    # -- grammar ------------------------------------------------------------
    def parse_body(self, terminators: set[str]) -> Optional[Stmt]:
        stmts = []
        while True:
            self.skip_seps()
            t = self.peek()
            if t.kind == "eof" or t.text in terminators:
                break
            stmts.append(self.parse_stmt())
            t = self.peek()
            if t.kind not in ("sep", "eof") and t.text not in terminators:
                self.error(f"expected end of statement, found {t.text!r}")
        if not stmts:
            return None
        if len(stmts) == 1:
            return stmts[0]
        return Seq(tuple(stmts))

    def parse_stmt(self) -> Stmt:
        t = self.peek()
        if t.text == "skip":
            self.next()
            return Skip()
        if t.text == "if":
            return self.parse_if()
        if t.text == "while":
            return self.parse_while()
        if t.text == "correct":
            return self.parse_correct()
        if t.kind == "ident" and _QUBIT_RE.match(t.text):
            return self.parse_qubit_stmt()
        if t.kind == "ident":
            return self.parse_sassign()
        self.error(f"cannot start a statement with {t.text!r}")

    def parse_measure_head(self) -> tuple[str, tuple[int, ...]]:
        self.expect("M")
        self.expect("[")
        var = self.ident()
        if var not in self.svars:
            raise UndeclaredVariable(f"stabilizer variable {var!r} not declared")
        self.expect(";")
        qubits = []
        while self.peek().text != "]":
            qubits.append(self.qubit())
        self.expect("]")
        return var, tuple(qubits)

    def parse_if(self) -> IfM:
        self.expect("if")
        var, qubits = self.parse_measure_head()
        self.expect("then")
        then_body = self.parse_body({"else", "end"})
        else_body = None
        if self.peek().text == "else":
            self.next()
            else_body = self.parse_body({"end"})
        self.expect("end")
        return IfM(var, qubits, then_body, else_body)

    def parse_while(self) -> WhileM:
        self.expect("while")
        label = None
        if self.peek().text == "@":
            self.next()
            label = self.ident()
        var, qubits = self.parse_measure_head()
        self.expect("do")
        body = self.parse_body({"done"})
        self.expect("done")
        if body is None:
            body = Skip()
        return WhileM(var, qubits, body, label)

    def parse_correct(self) -> Correct:
        self.expect("correct")
        self.expect("(")
        names = []
        while self.peek().text != ")":
            names.append(self.ident())
            if self.peek().text == ",":
                self.next()
        self.expect(")")
        for v in names:
            if v not in self.svars:
                raise UndeclaredVariable(f"stabilizer variable {v!r} not declared")
        return Correct(tuple(names))

    def parse_qubit_stmt(self) -> Stmt:
        qubits = [self.qubit()]
        while self.peek().kind == "ident" and _QUBIT_RE.match(self.peek().text):
            qubits.append(self.qubit())
        self.expect(":=")
        t = self.peek()
        if t.kind == "ket":
            self.next()
            return Init(tuple(qubits))
        if t.kind == "inline":
            self.next()
            expr = parse_expr(t.text[1:-1])
            trailing = self.qlist()
            if trailing != tuple(qubits):
                raise ArityMismatch(
                    f"unitary operand list {trailing} differs from target {tuple(qubits)}"
                )
            bad = expr.support - set(qubits)
            if bad:
                raise UndeclaredVariable(f"inline unitary touches undeclared operands {sorted(bad)}")
            return Unitary((GateApp(expr, tuple(qubits)),))
        return self.parse_gate_product(tuple(qubits))

    def parse_gate_product(self, targets: tuple[int, ...]) -> Unitary:
        # gate spec: indexed product X2*X1*X0, or bare name (H / CNOT / ...)
        t = self.next()
        if t.kind != "ident":
            raise ProgramSyntaxError(f"expected gate name, found {t.text!r}", t.line, t.col)
        name = t.text
        m = re.fullmatch(r"([XYZHST])(\d+)", name)
        if m:
            ops = [GateApp(m.group(1), (int(m.group(2)),))]
            while self.peek().text == "*":
                self.next()
                t2 = self.next()
                m2 = re.fullmatch(r"([XYZHST])(\d+)", t2.text)
                if not m2:
                    raise ProgramSyntaxError(
                        f"expected indexed gate, found {t2.text!r}", t2.line, t2.col
                    )
                ops.append(GateApp(m2.group(1), (int(m2.group(2)),)))
            trailing = self.qlist()
            if trailing != targets:
                raise ArityMismatch(
                    f"unitary operand list {trailing} differs from target {targets}"
                )
            touched = {g.operands[0] for g in ops}
            if not touched <= set(targets):
                raise ArityMismatch(f"gate product touches {sorted(touched)} outside {targets}")
            return Unitary(tuple(ops))
        gate = name.upper()
        if gate not in GATE_ARITY:
            raise ProgramSyntaxError(f"unknown gate {name!r}", t.line, t.col)
        trailing = self.qlist()
        if trailing != targets:
            raise ArityMismatch(f"unitary operand list {trailing} differs from target {targets}")
        if GATE_ARITY[gate] == 2:
            if len(targets) != 2:
                raise ArityMismatch(f"{gate} expects 2 qubits, got {len(targets)}")
            return Unitary((GateApp(gate, targets),))
        return Unitary(tuple(GateApp(gate, (q,)) for q in targets))

    def parse_sassign(self) -> SAssign:
        var = self.ident()
        if var not in self.svars:
            raise UndeclaredVariable(f"stabilizer variable {var!r} not declared")
        self.expect(":=")
        negate = False
        if self.peek().text == "-":
            # distinguish -svar from a -Z0*Z1 literal after consuming the sign
            self.next()
            negate = True
        t = self.peek()
        if t.kind == "ident" and t.text in self.svars:
            self.next()
            return SAssign(var, VarRef(t.text, negate))
        # literal Pauli: gather raw tokens to the statement end
        pieces = []
        while self.peek().kind not in ("sep", "eof") and self.peek().text not in (
            "then", "else", "end", "do", "done",
        ):
            pieces.append(self.next().text)
        raw = ("-" if negate else "") + "".join(pieces)
        try:
            value = parse_pauli(raw)
        except Exception:
            self.error(f"bad stabilizer value {raw!r}")
        if value.phase_exp not in (0, 1, 2, 3):  # defensive; phase is mod 4 already
            self.error(f"bad phase in {raw!r}")
        for q in value.support:
            if q >= self.n_qubits:
                raise UndeclaredVariable(f"qubit q{q} out of range (qubits: {self.n_qubits})")
        return SAssign(var, Literal(value))

    # -- atoms --------------------------------------------------------------
    def ident(self) -> str:
        t = self.next()
        if t.kind != "ident":
            raise ProgramSyntaxError(f"expected name, found {t.text!r}", t.line, t.col)
        return t.text

    def qubit(self) -> int:
        t = self.next()
        m = _QUBIT_RE.match(t.text) if t.kind == "ident" else None
        if not m:
            raise ProgramSyntaxError(f"expected qubit (q<n>), found {t.text!r}", t.line, t.col)
        q = int(m.group(1))
        if q >= self.n_qubits:
            raise UndeclaredVariable(f"qubit q{q} out of range (qubits: {self.n_qubits})")
        return q

    def qlist(self) -> tuple[int, ...]:
        qubits = []
        while self.peek().kind == "ident" and _QUBIT_RE.match(self.peek().text):
            qubits.append(self.qubit())
        if not qubits:
            self.error("expected qubit list")
        return tuple(qubits)


_HEADER_RE = re.compile(r"^(name|qubits|svars)\s*:\s*(.*)$")


def parse_program(text: str) -> ProgramUnit:
    """Parse a full program unit (header lines then body)."""
    lines = text.split("\n")
    header = {"name": "anonymous", "qubits": None, "svars": ""}
    body_start = 0
    for idx, ln in enumerate(lines):
        stripped = ln.split("//")[0].strip()
        if not stripped:
            body_start = idx + 1
            continue
        m = _HEADER_RE.match(stripped)
        if m:
            header[m.group(1)] = m.group(2).strip()
            body_start = idx + 1
        else:
            break
    if header["qubits"] is None:
        raise ProgramSyntaxError("missing 'qubits:' header", 1, 1)
    n_qubits = int(header["qubits"])
    svars = tuple(header["svars"].split()) if header["svars"] else ()
    body_text = "\n".join(lines[body_start:])
    parser = _Parser(_tokenize(body_text, first_line=body_start + 1), set(svars), n_qubits)
    body = parser.parse_body(set())
    parser.skip_seps()
    if parser.peek().kind != "eof":
        parser.error("trailing input after program body")
    if body is None:
        body = Skip()
    prog = ProgramUnit(header["name"], n_qubits, svars, body)
    return _assign_labels(prog)


def _assign_labels(p: ProgramUnit) -> ProgramUnit:
    """Give every unlabeled while a positional label; check uniqueness."""
    counter = [0]
    seen: set[str] = set()

    def fix(stmt: Stmt) -> Stmt:
        if isinstance(stmt, Seq):
            return Seq(tuple(fix(s) for s in stmt.stmts))
        if isinstance(stmt, IfM):
            return IfM(
                stmt.var,
                stmt.qubits,
                fix(stmt.then_body) if stmt.then_body is not None else None,
                fix(stmt.else_body) if stmt.else_body is not None else None,
            )
        if isinstance(stmt, WhileM):
            label = stmt.label
            if label is None:
                label = f"while{counter[0]}"
            counter[0] += 1
            if label in seen:
                raise ProgramSyntaxError(f"duplicate while label {label!r}", 0, 0)
            seen.add(label)
            return WhileM(stmt.var, stmt.qubits, fix(stmt.body), label)
        return stmt

    return replace(p, body=fix(p.body))


# ---------------------------------------------------------------------------
# Printer
# ---------------------------------------------------------------------------


def _print_unary(rhs: UnaryStabExpr) -> str:
    if isinstance(rhs, VarRef):
        return ("-" if rhs.negate else "") + rhs.var
    return str(rhs.value)


def _print_gatespec(ops: tuple[GateApp, ...]) -> tuple[str, tuple[int, ...]]:
    if len(ops) == 1 and not isinstance(ops[0].gate, str):
        return "{" + str(ops[0].gate) + "}", ops[0].operands
    if len(ops) == 1 and len(ops[0].operands) == 2:
        return ops[0].gate, ops[0].operands
    spec = "*".join(f"{g.gate}{g.operands[0]}" for g in ops)
    qubits = tuple(g.operands[0] for g in ops)
    return spec, qubits


def _print_stmt(stmt: Optional[Stmt], indent: int, out: list[str]):
    pad = "  " * indent
    if stmt is None:
        return
    if isinstance(stmt, Skip):
        out.append(pad + "skip")
    elif isinstance(stmt, Init):
        qs = " ".join(f"q{q}" for q in stmt.qubits)
        out.append(f"{pad}{qs} := |0>")
    elif isinstance(stmt, Unitary):
        spec, qubits = _print_gatespec(stmt.ops)
        qs = " ".join(f"q{q}" for q in qubits)
        out.append(f"{pad}{qs} := {spec} {qs}")
    elif isinstance(stmt, SAssign):
        out.append(f"{pad}{stmt.var} := {_print_unary(stmt.rhs)}")
    elif isinstance(stmt, Seq):
        for s in stmt.stmts:
            _print_stmt(s, indent, out)
    elif isinstance(stmt, IfM):
        qs = " ".join(f"q{q}" for q in stmt.qubits)
        out.append(f"{pad}if M[{stmt.var}; {qs}] then")
        _print_stmt(stmt.then_body, indent + 1, out)
        if stmt.else_body is not None:
            out.append(pad + "else")
            _print_stmt(stmt.else_body, indent + 1, out)
        out.append(pad + "end")
    elif isinstance(stmt, WhileM):
        qs = " ".join(f"q{q}" for q in stmt.qubits)
        label = f"@{stmt.label} " if stmt.label else ""
        out.append(f"{pad}while {label}M[{stmt.var}; {qs}] do")
        _print_stmt(stmt.body, indent + 1, out)
        out.append(pad + "done")
    elif isinstance(stmt, Correct):
        out.append(f"{pad}correct({', '.join(stmt.vars)})")
    else:
        raise TypeError(f"unknown statement {stmt!r}")


def print_program(p: ProgramUnit) -> str:
    """Canonical, reparseable text for a program unit."""
    out = [f"name: {p.name}", f"qubits: {p.n_qubits}"]
    if p.svar_decls:
        out.append(f"svars: {' '.join(p.svar_decls)}")
    out.append("")
    _print_stmt(p.body, 0, out)
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# correct(...) expansion and program metrics
# ---------------------------------------------------------------------------

AXIOMATIC = "axiomatic"


def correct_sites(p: ProgramUnit) -> list[Correct]:
    return [s for s in walk(p.body) if isinstance(s, Correct)]


def expand_correct(
    p: ProgramUnit,
    registry: Mapping[str, ProgramUnit],
    allow_axiomatic: bool = False,
) -> ProgramUnit:
    """Replace correct(...) statements with their bound decoder bodies.

    Site indices count Correct statements in pre-order.  A site bound to
    "axiomatic" (or any site, when allow_axiomatic is set and no binding
    exists) is left intact.
    """
    counter = [0]

    def rewrite(stmt: Stmt) -> Stmt:
        if isinstance(stmt, Seq):
            return Seq(tuple(rewrite(s) for s in stmt.stmts))
        if isinstance(stmt, IfM):
            return IfM(
                stmt.var,
                stmt.qubits,
                rewrite(stmt.then_body) if stmt.then_body is not None else None,
                rewrite(stmt.else_body) if stmt.else_body is not None else None,
            )
        if isinstance(stmt, WhileM):
            return WhileM(stmt.var, stmt.qubits, rewrite(stmt.body), stmt.label)
        if isinstance(stmt, Correct):
            site = counter[0]
            counter[0] += 1
            binding = p.decoder_bindings.get(site)
            if binding is None and allow_axiomatic:
                return stmt
            if binding is None or binding == AXIOMATIC:
                if binding == AXIOMATIC:
                    return stmt
                raise MissingDecoder(f"correct site {site} has no decoder binding")
            decoder = registry.get(binding)
            if decoder is None:
                raise MissingDecoder(f"no decoder named {binding!r} registered")
            missing = set(decoder.svar_decls) - set(p.svar_decls)
            if missing:
                raise UndeclaredVariable(
                    f"decoder {binding!r} uses undeclared svars {sorted(missing)}"
                )
            return decoder.body
        return stmt

    return replace(p, body=rewrite(p.body))


def program_stats(p: ProgramUnit) -> dict:
    """Primitive-statement count (Seq transparent), svar/qubit counts, if depth."""

    def count(stmt: Optional[Stmt], depth: int) -> tuple[int, int]:
        if stmt is None:
            return 0, depth
        if isinstance(stmt, Seq):
            total, deepest = 0, depth
            for s in stmt.stmts:
                c, d = count(s, depth)
                total += c
                deepest = max(deepest, d)
            return total, deepest
        if isinstance(stmt, IfM):
            c1, d1 = count(stmt.then_body, depth + 1)
            c0, d0 = count(stmt.else_body, depth + 1)
            return 1 + c1 + c0, max(d1, d0)
        if isinstance(stmt, WhileM):
            c, d = count(stmt.body, depth)
            return 1 + c, d
        return 1, depth

    statements, max_if_depth = count(p.body, 0)
    return {
        "statement_count": statements,
        "svar_count": len(p.svar_decls),
        "qubit_count": p.n_qubits,
        "max_if_depth": max_if_depth,
    }
