"""Forward Hoare-style verification of stabilizer-code programs.

The verifier pushes a strongest-derivable postcondition through the
program, threading a symbolic view of the stabilizer-variable store.
Assignment of a new stabilizer value rewrites the assertion into an
equivalent form that commutes with the value when possible (multiplying
anticommuting generators into each other and transporting sum terms);
when no such form exists the assertion weakens to TRUE, which is the
rule's side-condition fallback.

correct(...) sites are either expanded into their decoder bodies before
the pass or handled axiomatically: the post keeps every conjunct that
commutes with (and does not contradict) the active stabilizer values
and conjoins those values.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Mapping, Optional, Sequence, Union

import numpy as np

from . import oracle as orc
from .assertions import (
    CONTRADICTION,
    FALSE,
    TRUE,
    And,
    Assertion,
    ExprA,
    ImpliesConfig,
    Or,
    ProofStatus,
    _FalseA,
    _TrueA,
    assertion_simplify,
    conj_tableau,
    implies,
    parse_assertion,
    split_conjuncts,
    unknown,
)
from .errors import (
    MissingDecoder,
    MissingInvariant,
    OracleCapExceeded,
    StabVerifyError,
    TermExplosion,
    UndeclaredSVar,
    UnresolvedSigma,
)
from .lang import (
    AXIOMATIC,
    Correct,
    IfM,
    Init,
    Literal,
    ProgramUnit,
    SAssign,
    Seq,
    Skip,
    Stmt,
    Unitary,
    VarRef,
    WhileM,
    expand_correct,
    parse_program,
)
from .pauli import (
    SignedPauli,
    StabilizerExpr,
    commutes,
    conjugate_by_gate,
    expr_conjugate,
    expr_mul,
    mul_pauli,
    parse_pauli,
)


class _Sentinel:
    def __init__(self, name: str):
        self.name = name

    def __repr__(self):
        return self.name


UNASSIGNED = _Sentinel("UNASSIGNED")  # no runtime value yet: commutation vacuous
UNKNOWN = _Sentinel("UNKNOWN")  # havoc after a branch join: be conservative

SigmaValue = Union[SignedPauli, _Sentinel]
SymbolicSigma = dict[str, SigmaValue]


# ---------------------------------------------------------------------------
# Config, obligations, traces
# ---------------------------------------------------------------------------


@dataclass
class VerifyConfig:
    oracle_cap: int = 12
    unroll_cap: int = 64
    tol: float = 1e-9
    samples: int = 100
    seed: int = 0
    max_terms: int = 4096

    def implies_config(self) -> ImpliesConfig:
        return ImpliesConfig(self.oracle_cap, self.max_terms, self.tol)


@dataclass
class Obligation:
    rule: str
    lhs: Assertion
    rhs: Assertion
    status: ProofStatus

    def to_dict(self) -> dict:
        return {
            "rule": self.rule,
            "lhs": str(self.lhs),
            "rhs": str(self.rhs),
            "status": self.status.kind,
            "detail": self.status.detail,
        }


@dataclass
class TraceEntry:
    rule: str
    stmt: str
    pre: str
    post: str
    obligations: tuple[Obligation, ...] = ()

    def to_dict(self) -> dict:
        return {
            "rule": self.rule,
            "stmt": self.stmt,
            "pre": self.pre,
            "post": self.post,
            "obligations": [o.to_dict() for o in self.obligations],
        }


@dataclass
class ProofTrace:
    entries: list[TraceEntry] = field(default_factory=list)

    def rules(self) -> list[str]:
        return [e.rule for e in self.entries]

    def obligations(self) -> list[Obligation]:
        out = []
        for e in self.entries:
            out.extend(e.obligations)
        return out

    def to_dict(self) -> list[dict]:
        return [e.to_dict() for e in self.entries]


@dataclass
class VerificationOutcome:
    status: str  # Verified | Refuted | Inconclusive
    trace: ProofTrace
    reason: str = ""

    @property
    def verified(self) -> bool:
        return self.status == "Verified"

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "reason": self.reason,
            "obligations": [o.to_dict() for o in self.trace.obligations()],
        }


InvariantSpec = Union[Assertion, tuple[Assertion, Assertion]]


@dataclass
class Triple:
    name: str
    pre: Assertion
    program: ProgramUnit
    post: Assertion
    invariants: Mapping[str, InvariantSpec] = field(default_factory=dict)
    decoders: Mapping[str, ProgramUnit] = field(default_factory=dict)
    initial_sigma: Mapping[str, SignedPauli] = field(default_factory=dict)


# ---------------------------------------------------------------------------
# The forward transformer
# ---------------------------------------------------------------------------


class _Ctx:
    def __init__(self, cfg: VerifyConfig, invariants: Mapping[str, InvariantSpec]):
        self.cfg = cfg
        self.imp = cfg.implies_config()
        self.invariants = invariants
        self.trace = ProofTrace()

    def emit(self, rule: str, stmt: str, pre: Assertion, post: Assertion,
             obligations: Sequence[Obligation] = ()):
        self.trace.entries.append(
            TraceEntry(rule, stmt, str(pre), str(post), tuple(obligations))
        )

    def oblige(self, rule: str, lhs: Assertion, rhs: Assertion) -> Obligation:
        return Obligation(rule, lhs, rhs, implies(lhs, rhs, self.imp))


def _stmt_text(stmt: Stmt) -> str:
    from .lang import _print_stmt

    out: list[str] = []
    _print_stmt(stmt, 0, out)
    return out[0] if out else ""


def _rebuild(rows: Sequence[SignedPauli], sums: Sequence[StabilizerExpr],
             others: Sequence[Assertion] = ()) -> Assertion:
    items: list[Assertion] = [ExprA(StabilizerExpr.from_pauli(r)) for r in rows]
    items.extend(ExprA(e) for e in sums)
    items.extend(others)
    if not items:
        return TRUE
    return items[0] if len(items) == 1 else And(tuple(items))


def _pivot_repair(
    rows: list[SignedPauli], sums: list[StabilizerExpr], value: SignedPauli,
    max_terms: int,
) -> Optional[tuple[list[SignedPauli], list[StabilizerExpr]]]:
    """Rewrite the conjunction into an equivalent form commuting with value.

    Generators anticommuting with the value are multiplied into a pivot
    generator (which is dropped: its sign is no longer determined once
    the value is measured or enforced); anticommuting terms of sum
    conjuncts are transported by the same pivot.  Returns None when no
    pivot exists for an anticommuting sum term.
    """
    anti_rows = [r for r in rows if not commutes(r, value)]
    bad_sums = [e for e in sums if any(not commutes(p, value) for _, p in e.terms)]
    if not anti_rows and not bad_sums:
        return rows, sums
    if not anti_rows:
        return None
    pivot = anti_rows[0]
    new_rows = []
    for r in rows:
        if r is pivot:
            continue
        new_rows.append(mul_pauli(pivot, r) if not commutes(r, value) else r)
    new_sums = []
    for e in sums:
        if any(not commutes(p, value) for _, p in e.terms):
            e = StabilizerExpr.from_terms(
                (
                    (c, mul_pauli(p, pivot)) if not commutes(p, value) else (c, p)
                    for c, p in e.terms
                ),
                max_terms=max_terms,
            )
        new_sums.append(e)
    return new_rows, new_sums


def _split_or_none(a: Assertion):
    """(rows, sums) when a is TRUE or a conjunction of expression leaves."""
    if isinstance(a, (_TrueA,)):
        return [], []
    if isinstance(a, (ExprA, And)):
        rows, sums, others = split_conjuncts(a)
        if others:
            return None
        return rows, sums
    return None


def sp(a: Assertion, sig: SymbolicSigma, stmt: Stmt, ctx: _Ctx,
       branch_body: bool = False) -> tuple[Assertion, SymbolicSigma]:
    """Strongest-derivable postcondition of stmt from a, updating sigma."""
    if isinstance(a, _FalseA) and not isinstance(stmt, Seq):
        # unreachable branch: statements keep FALSE; sigma updates cannot
        # matter for any join because the live branch wins
        return FALSE, sig

    if isinstance(stmt, Seq):
        cur, cur_sig = a, sig
        for s in stmt.stmts:
            cur, cur_sig = sp(cur, cur_sig, s, ctx)
        if branch_body and len(stmt.stmts) > 1 and not isinstance(a, _FalseA):
            ctx.emit("Sequencing", "...", a, cur)
        return cur, cur_sig

    if isinstance(stmt, Skip):
        ctx.emit("Skip", "skip", a, a)
        return a, sig

    if isinstance(stmt, Init):
        post, obs = _sp_init(a, sig, stmt, ctx)
        ctx.emit("Initialization", _stmt_text(stmt), a, post, obs)
        return post, sig

    if isinstance(stmt, Unitary):
        post, obs = _sp_unitary(a, stmt, ctx)
        ctx.emit("Unitary", _stmt_text(stmt), a, post, obs)
        return post, sig

    if isinstance(stmt, SAssign):
        post, out_sig = _sp_assign(a, sig, stmt, ctx)
        ctx.emit("Assignment", _stmt_text(stmt), a, post)
        return post, out_sig

    if isinstance(stmt, IfM):
        return _sp_if(a, sig, stmt, ctx)

    if isinstance(stmt, WhileM):
        return _sp_while(a, sig, stmt, ctx)

    if isinstance(stmt, Correct):
        post = apply_decode_axiom(a, sig, stmt.vars, ctx.cfg)
        ctx.emit("Correct", _stmt_text(stmt), a, post)
        return post, sig

    raise TypeError(f"unknown statement {stmt!r}")


def _known_values(sig: SymbolicSigma) -> list[SignedPauli]:
    return [v for v in sig.values() if isinstance(v, SignedPauli)]


def _sp_init(a: Assertion, sig: SymbolicSigma, stmt: Init, ctx: _Ctx
             ) -> tuple[Assertion, tuple[Obligation, ...]]:
    split = _split_or_none(a)
    if split is None:
        ob = Obligation("Initialization", a, TRUE,
                        unknown("init from a non-conjunctive precondition"))
        return TRUE, (ob,)
    rows, sums = split
    touched = set(stmt.qubits)
    kept_rows = [r for r in rows if not (r.support & touched)]
    kept_sums = [e for e in sums if not (e.support & touched)]
    new_rows = list(kept_rows)
    havoc = any(v is UNKNOWN for v in sig.values())
    for q in stmt.qubits:
        z = SignedPauli.single("Z", q)
        if not havoc and all(commutes(z, v) for v in _known_values(sig)):
            new_rows.append(z)
    return assertion_simplify(_rebuild(new_rows, kept_sums)), ()


def _sp_unitary(a: Assertion, stmt: Unitary, ctx: _Ctx
                ) -> tuple[Assertion, tuple[Obligation, ...]]:
    def conj_assertion(node: Assertion) -> Assertion:
        if isinstance(node, (_TrueA, _FalseA)):
            return node
        if isinstance(node, And):
            return And(tuple(conj_assertion(i) for i in node.items))
        if isinstance(node, Or):
            return Or(tuple(conj_assertion(i) for i in node.items))
        if isinstance(node, ExprA):
            if all(g.is_clifford() for g in stmt.ops):
                terms = []
                for c, p in node.expr.terms:
                    for g in stmt.ops:
                        p = conjugate_by_gate(g, p)
                    terms.append((c, p))
                return ExprA(StabilizerExpr.from_terms(terms, max_terms=ctx.cfg.max_terms))
            return ExprA(expr_conjugate(list(stmt.ops), node.expr, ctx.cfg.max_terms))
        raise TypeError(f"cannot conjugate {node!r}")

    try:
        return assertion_simplify(conj_assertion(a)), ()
    except TermExplosion:
        ob = Obligation("Unitary", a, TRUE, unknown("TermExplosion"))
        return TRUE, (ob,)


def _sp_assign(
    a: Assertion, sig: SymbolicSigma, stmt: SAssign, ctx: _Ctx
) -> tuple[Assertion, SymbolicSigma]:
    rhs = stmt.rhs
    if isinstance(rhs, VarRef) and rhs.var == stmt.var:
        # {A} s := +-s {A}: a sign flip never breaks commutation
        old = sig.get(stmt.var, UNASSIGNED)
        if old is UNASSIGNED:
            raise UndeclaredSVar(f"{stmt.var} flipped before assignment")
        new = old.negate() if (rhs.negate and isinstance(old, SignedPauli)) else old
        out = dict(sig)
        out[stmt.var] = new
        return a, out

    if isinstance(rhs, VarRef):
        src = sig.get(rhs.var, UNASSIGNED)
        if src is UNASSIGNED:
            raise UndeclaredSVar(f"{rhs.var} read before assignment")
        if src is UNKNOWN:
            out = dict(sig)
            out[stmt.var] = UNKNOWN
            return TRUE, out
        value = src.negate() if rhs.negate else src
    else:
        value = rhs.value

    out = dict(sig)
    out[stmt.var] = value
    if value.is_identity_letters():
        # turning a variable off (or a bare phase) commutes with everything
        return a, out
    split = _split_or_none(a)
    if split is None:
        return (a, out) if _assertion_commutes(a, value) else (TRUE, out)
    rows, sums = split
    try:
        repaired = _pivot_repair(rows, sums, value, ctx.cfg.max_terms)
    except TermExplosion:
        repaired = None
    if repaired is None:
        return TRUE, out
    new_rows, new_sums = repaired
    return assertion_simplify(_rebuild(new_rows, new_sums)), out


def _assertion_commutes(a: Assertion, value: SignedPauli) -> bool:
    if isinstance(a, (_TrueA, _FalseA)):
        return True
    if isinstance(a, (And, Or)):
        return all(_assertion_commutes(i, value) for i in a.items)
    if isinstance(a, ExprA):
        return all(commutes(p, value) for _, p in a.expr.terms)
    return False


def _sigma_join(s1: SymbolicSigma, s0: SymbolicSigma) -> SymbolicSigma:
    out: SymbolicSigma = {}
    for k in set(s1) | set(s0):
        v1, v0 = s1.get(k, UNASSIGNED), s0.get(k, UNASSIGNED)
        if isinstance(v1, SignedPauli) and isinstance(v0, SignedPauli) and v1 == v0:
            out[k] = v1
        elif v1 is v0:
            out[k] = v1
        else:
            out[k] = UNKNOWN
    return out


def _sp_if(a: Assertion, sig: SymbolicSigma, stmt: IfM, ctx: _Ctx
           ) -> tuple[Assertion, SymbolicSigma]:
    sval = sig.get(stmt.var, UNASSIGNED)
    if sval is UNASSIGNED:
        raise UndeclaredSVar(f"measured {stmt.var} before assignment")
    if sval is UNKNOWN:
        ob = Obligation("Condition", a, TRUE, unknown(f"sigma({stmt.var}) unresolved"))
        ctx.emit("Condition", _stmt_text(stmt), a, TRUE, (ob,))
        return TRUE, sig

    if sval.is_identity_letters() and sval.phase_exp == 0:
        # measuring a turned-off variable: the -1 branch has zero mass
        body = stmt.then_body if stmt.then_body is not None else Skip()
        post, out_sig = sp(a, sig, body, ctx, branch_body=True)
        ctx.emit("Condition", _stmt_text(stmt), a, post)
        return post, out_sig

    split = _split_or_none(a)
    if split is not None:
        repaired = _pivot_repair(split[0], split[1], sval, ctx.cfg.max_terms)
        base = assertion_simplify(_rebuild(*repaired)) if repaired is not None else TRUE
    else:
        base = a if _assertion_commutes(a, sval) else TRUE

    pre1 = assertion_simplify(And((base, ExprA(StabilizerExpr.from_pauli(sval)))))
    pre0 = assertion_simplify(And((base, ExprA(StabilizerExpr.from_pauli(sval.negate())))))
    sig0_in = dict(sig)
    sig0_in[stmt.var] = sval.negate()

    then_body = stmt.then_body if stmt.then_body is not None else Skip()
    else_body = stmt.else_body if stmt.else_body is not None else Skip()
    post1, sig1 = sp(pre1, dict(sig), then_body, ctx, branch_body=True)
    post0, sig0 = sp(pre0, sig0_in, else_body, ctx, branch_body=True)

    if isinstance(post0, _FalseA):
        ctx.emit("Condition", _stmt_text(stmt), a, post1)
        return post1, sig1
    if isinstance(post1, _FalseA):
        ctx.emit("Condition", _stmt_text(stmt), a, post0)
        return post0, sig0
    if post1 == post0:
        joined = _sigma_join(sig1, sig0)
        ctx.emit("Condition", _stmt_text(stmt), a, post1)
        return post1, joined
    post = assertion_simplify(Or((post1, post0)))
    joined = _sigma_join(sig1, sig0)
    ctx.emit("Condition", _stmt_text(stmt), a, post)
    return post, joined


def _sp_while(a: Assertion, sig: SymbolicSigma, stmt: WhileM, ctx: _Ctx
              ) -> tuple[Assertion, SymbolicSigma]:
    sval = sig.get(stmt.var, UNASSIGNED)
    if sval is UNASSIGNED:
        raise UndeclaredSVar(f"measured {stmt.var} before assignment")
    spec = ctx.invariants.get(stmt.label)
    if spec is None:
        raise MissingInvariant(f"while loop {stmt.label!r} has no invariant")
    if sval is UNKNOWN:
        ob = Obligation("While", a, TRUE, unknown(f"sigma({stmt.var}) unresolved"))
        ctx.emit("While", _stmt_text(stmt), a, TRUE, (ob,))
        return TRUE, sig

    obligations = []
    if isinstance(spec, tuple):
        inv1, inv0 = (assertion_simplify(x) for x in spec)
        pre_mix = _invariant_mix(inv1, inv0, sval, ctx)
        if pre_mix is None:
            ob = Obligation("While", a, TRUE,
                            unknown("A1/A0 invariants must be expression leaves"))
            ctx.emit("While", _stmt_text(stmt), a, TRUE, (ob,))
            return TRUE, sig
    else:
        inv1 = inv0 = assertion_simplify(spec)
        pre_mix = inv1
    obligations.append(ctx.oblige("While-pre", a, pre_mix))

    body_pre = assertion_simplify(And((inv1, ExprA(StabilizerExpr.from_pauli(sval)))))
    body_post, body_sig = sp(body_pre, dict(sig), stmt.body, ctx, branch_body=True)
    obligations.append(ctx.oblige("While-body", body_post, pre_mix))

    exit_sig = _sigma_join(sig, body_sig)
    exit_val = exit_sig.get(stmt.var, UNASSIGNED)
    if isinstance(exit_val, SignedPauli):
        exit_sig[stmt.var] = exit_val.negate()
        post = assertion_simplify(
            And((inv0, ExprA(StabilizerExpr.from_pauli(exit_val.negate()))))
        )
    else:
        obligations.append(
            Obligation("While", a, TRUE, unknown(f"sigma({stmt.var}) unstable in body"))
        )
        post = inv0
    ctx.emit("While", _stmt_text(stmt), a, post, obligations)
    return post, exit_sig


def _invariant_mix(inv1: Assertion, inv0: Assertion, sval: SignedPauli,
                   ctx: _Ctx) -> Optional[Assertion]:
    """A1 M1 + A0 M0 as one stabilizer expression, when both are leaves."""
    if inv1 == inv0:
        return inv1
    if not (isinstance(inv1, ExprA) and isinstance(inv0, ExprA)):
        return None
    e1, e0 = inv1.expr, inv0.expr
    s_expr = StabilizerExpr.from_pauli(sval)
    half_sum = (e1 + e0).scale(0.5)
    half_diff = (e1 + e0.scale(-1)).scale(0.5)
    return assertion_simplify(ExprA(half_sum + expr_mul(half_diff, s_expr, ctx.cfg.max_terms)))


# ---------------------------------------------------------------------------
# Decode-correctness axiom
# ---------------------------------------------------------------------------


def apply_decode_axiom(
    a: Assertion,
    sig: SymbolicSigma,
    vars: Sequence[str],
    cfg: VerifyConfig = VerifyConfig(),
) -> Assertion:
    """Axiomatic correct(...): conjoin the active stabilizer values,
    keeping the commuting, non-contradicting part of the precondition.

    Conjuncts that anticommute with an active value, or whose negation
    the active set derives (an error syndrome the protocol repairs),
    are dropped.
    """
    values = []
    for v in vars:
        val = sig.get(v, UNASSIGNED)
        if not isinstance(val, SignedPauli):
            raise UnresolvedSigma(f"sigma({v}) is {val!r} at a correct(...) site")
        values.append(val)
    active = [v for v in values if not v.is_identity_letters()]
    if any(v.phase_exp not in (0, 2) for v in active):
        raise UnresolvedSigma("active stabilizer value carries an imaginary phase")
    tableau = conj_tableau(active)
    if tableau is CONTRADICTION:
        raise UnresolvedSigma("active stabilizer values are mutually contradictory")

    a = assertion_simplify(a)
    if isinstance(a, _FalseA):
        return FALSE
    split = _split_or_none(a)
    if split is None:
        return assertion_simplify(_rebuild(active, []))
    rows, sums = split
    kept_rows = [
        r
        for r in rows
        if all(commutes(r, s) for s in active) and tableau.implies_pauli(r) is not False
    ]
    kept_sums = [
        e for e in sums if all(commutes(p, s) for _, p in e.terms for s in active)
    ]
    return assertion_simplify(_rebuild(kept_rows + active, kept_sums))


# ---------------------------------------------------------------------------
# Triple checking
# ---------------------------------------------------------------------------


def _prepare_program(t: Triple, allow_axiomatic: bool = True) -> ProgramUnit:
    return expand_correct(t.program, t.decoders, allow_axiomatic=allow_axiomatic)


def _initial_sigma(t: Triple) -> SymbolicSigma:
    sig: SymbolicSigma = {v: UNASSIGNED for v in t.program.svar_decls}
    for k, v in t.initial_sigma.items():
        if k not in sig:
            raise UndeclaredSVar(f"initial sigma binds undeclared variable {k!r}")
        sig[k] = v
    return sig


def verify_triple(t: Triple, cfg: VerifyConfig = VerifyConfig()) -> VerificationOutcome:
    """Run the forward pass and discharge every obligation."""
    ctx = _Ctx(cfg, t.invariants)
    try:
        program = _prepare_program(t)
        pre = assertion_simplify(t.pre)
        sig = _initial_sigma(t)
        final, _ = sp(pre, sig, program.body, ctx)
        consequence = ctx.oblige("Consequence", final, t.post)
        ctx.emit("Consequence", "", final, t.post, (consequence,))
    except (MissingInvariant, UndeclaredSVar, UnresolvedSigma, MissingDecoder,
            TermExplosion, OracleCapExceeded) as e:
        return VerificationOutcome("Inconclusive", ctx.trace, f"{type(e).__name__}: {e}")

    status = "Verified"
    reason = ""
    for ob in ctx.trace.obligations():
        if ob.status.is_disproved:
            return VerificationOutcome(
                "Refuted", ctx.trace, f"{ob.rule}: {ob.status.detail}"
            )
        if ob.status.is_unknown and status == "Verified":
            status = "Inconclusive"
            reason = f"{ob.rule}: {ob.status.detail}"
    return VerificationOutcome(status, ctx.trace, reason)


def oracle_check(t: Triple, cfg: VerifyConfig = VerifyConfig()) -> dict:
    """Sample precondition states, execute, and check the postcondition."""
    program = _prepare_program(t, allow_axiomatic=False)
    if program.n_qubits > cfg.oracle_cap:
        raise OracleCapExceeded(
            f"{program.n_qubits} qubits > oracle cap {cfg.oracle_cap}"
        )
    sigma0 = orc.SigmaState(
        {k: v for k, v in t.initial_sigma.items() if isinstance(v, SignedPauli)}
    )
    samples = orc.sample_pre_states(
        t.pre, program.n_qubits, cfg.samples, cfg.seed, sigma=sigma0,
        cap=cfg.oracle_cap, tol=cfg.tol,
    )
    failures = []
    for i, (state, sg) in enumerate(samples):
        result = orc.run_program(
            program, (state, sg), unroll_cap=cfg.unroll_cap, cap=cfg.oracle_cap
        )
        if result.inconclusive:
            failures.append({"sample": i, "detail": "residual loop mass"})
            continue
        for b_state, b_sigma in result.branches:
            if b_state.mass() <= cfg.tol:
                continue
            normalized = orc.QState(b_state.n_qubits, b_state.data / np.sqrt(b_state.mass())
                                    if b_state.is_pure else b_state.data / b_state.mass())
            if not orc.satisfies((normalized, b_sigma), t.post, cfg.tol, cfg.oracle_cap):
                failures.append(
                    {
                        "sample": i,
                        "detail": f"terminal branch (sigma {b_sigma.pretty()}) "
                        "violates the postcondition",
                    }
                )
                break
    return {
        "name": t.name,
        "samples": len(samples),
        "passes": len(samples) - len(failures),
        "failures": failures,
    }


# ---------------------------------------------------------------------------
# Triple files (.qtrip)
# ---------------------------------------------------------------------------


def load_triple(
    path: Union[str, Path],
    registry: Optional[Mapping[str, ProgramUnit]] = None,
) -> Triple:
    """Load a triple file.

    Keys: name:, pre:, post:, program: <path or <<< inline >>> block>,
    invariant <label>: <assertion>, decoder <site>: <name|axiomatic|path>,
    sigma <svar>: <pauli>.
    """
    path = Path(path)
    registry = dict(registry or {})
    fields: dict[str, str] = {}
    invariants: dict[str, InvariantSpec] = {}
    bindings: dict[int, str] = {}
    sigma: dict[str, SignedPauli] = {}
    lines = path.read_text().split("\n")
    i = 0
    while i < len(lines):
        line = lines[i].split("//")[0].rstrip()
        i += 1
        if not line.strip():
            continue
        key, _, value = line.partition(":")
        key, value = key.strip(), value.strip()
        if key == "program" and value == "<<<":
            block = []
            while i < len(lines) and lines[i].strip() != ">>>":
                block.append(lines[i])
                i += 1
            i += 1
            fields["program_inline"] = "\n".join(block)
        elif key in ("name", "pre", "post", "program"):
            fields[key] = value
        elif key.startswith("invariant "):
            label = key.split(None, 1)[1]
            if label.endswith(" then"):
                lbl = label[:-5].strip()
                prev = invariants.get(lbl)
                a0 = prev[1] if isinstance(prev, tuple) else TRUE
                invariants[lbl] = (parse_assertion(value), a0)
            elif label.endswith(" else"):
                lbl = label[:-5].strip()
                prev = invariants.get(lbl)
                a1 = prev[0] if isinstance(prev, tuple) else TRUE
                invariants[lbl] = (a1, parse_assertion(value))
            else:
                invariants[label] = parse_assertion(value)
        elif key.startswith("decoder "):
            site = int(key.split(None, 1)[1])
            if value != AXIOMATIC and value not in registry:
                dec_path = path.parent / (
                    value if value.endswith(".qecv") else f"{value}.qecv"
                )
                if not dec_path.exists():
                    raise MissingDecoder(f"decoder {value!r} not found near {path}")
                prog = parse_program(dec_path.read_text())
                registry[prog.name] = prog
                value = prog.name
            bindings[site] = value
        elif key.startswith("sigma "):
            svar = key.split(None, 1)[1]
            sigma[svar] = parse_pauli(value)
        else:
            raise StabVerifyError(f"unknown triple key {key!r} in {path}")
    if "program_inline" in fields:
        program = parse_program(fields["program_inline"])
    elif "program" in fields:
        program = parse_program((path.parent / fields["program"]).read_text())
    else:
        raise StabVerifyError(f"{path} has no program")
    program = program.with_bindings(bindings)
    return Triple(
        name=fields.get("name", path.stem),
        pre=parse_assertion(fields["pre"]),
        program=program,
        post=parse_assertion(fields["post"]),
        invariants=invariants,
        decoders=registry,
        initial_sigma=sigma,
    )


def save_triple(t: Triple, path: Union[str, Path], program_path: Optional[str] = None):
    """Write a .qtrip file; inline program block unless a path is given."""
    out = [f"name: {t.name}", f"pre: {t.pre}", f"post: {t.post}"]
    for label, spec in t.invariants.items():
        if isinstance(spec, tuple):
            out.append(f"invariant {label} then: {spec[0]}")
            out.append(f"invariant {label} else: {spec[1]}")
        else:
            out.append(f"invariant {label}: {spec}")
    for site, binding in sorted(t.program.decoder_bindings.items()):
        out.append(f"decoder {site}: {binding}")
    for svar, value in t.initial_sigma.items():
        out.append(f"sigma {svar}: {value}")
    if program_path is not None:
        out.append(f"program: {program_path}")
    else:
        from .lang import print_program

        out.append("program: <<<")
        out.append(print_program(t.program).rstrip())
        out.append(">>>")
    Path(path).write_text("\n".join(out) + "\n")


def report_json(outcome: VerificationOutcome, name: str, elapsed: float) -> str:
    payload = {"name": name, **outcome.to_dict(), "timings": {"verify_s": round(elapsed, 6)}}
    return json.dumps(payload, indent=2)
