"""Ground-truth interpreter: dense operational and denotational semantics.

Program state is (rho, sigma): a partial density matrix over the
declared qubits plus a map from stabilizer variables to signed Pauli
values.  Measurement statements branch into both projector outcomes
weighted by trace, so runs are deterministic and the branch multiset
can be compared against the denotational superoperator composition.

Branches that remain pure are tracked as state vectors and widened to
density matrices only when a reset channel genuinely mixes them.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, replace
from typing import Optional, Union

import numpy as np

from . import assertions as asrt
from .assertions import Assertion, And, ExprA, Implies, Or, _FalseA, _TrueA
from .errors import (
    NonHermitianMeasurement,
    OracleCapExceeded,
    UndeclaredSVar,
    UnsatisfiableAssertion,
)
from .lang import (
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
)
from .pauli import (
    GateApp,
    SignedPauli,
    StabilizerExpr,
    apply_pauli,
    commutes,
    gate_to_expr,
)

DEFAULT_UNROLL_CAP = 64
DEFAULT_MASS_FLOOR = 1e-12


# ---------------------------------------------------------------------------
# States
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DensityMatrix:
    """Validated partial density operator."""

    n_qubits: int
    data: np.ndarray

    def __post_init__(self):
        dim = 2**self.n_qubits
        if self.data.shape != (dim, dim):
            raise ValueError(f"expected {dim}x{dim} matrix for {self.n_qubits} qubits")
        if np.linalg.norm(self.data - self.data.conj().T) > 1e-10:
            raise ValueError("density matrix is not Hermitian")
        eigs = np.linalg.eigvalsh(self.data)
        if eigs.min(initial=0.0) < -1e-10:
            raise ValueError("density matrix is not positive semidefinite")
        if eigs.sum() > 1 + 1e-10:
            raise ValueError("trace exceeds 1")

    @classmethod
    def from_basis_state(cls, n_qubits: int, bits: str) -> "DensityMatrix":
        """|b><b| with bits written q_{n-1} ... q_0 (paper ket order)."""
        v = basis_vector(n_qubits, bits)
        return cls(n_qubits, np.outer(v, v.conj()))

    def mass(self) -> float:
        return float(np.trace(self.data).real)


def basis_vector(n_qubits: int, bits: str) -> np.ndarray:
    if len(bits) != n_qubits or set(bits) - {"0", "1"}:
        raise ValueError(f"bad basis label {bits!r} for {n_qubits} qubits")
    idx = int(bits, 2)  # leftmost char is the highest qubit
    v = np.zeros(2**n_qubits, dtype=complex)
    v[idx] = 1.0
    return v


class SigmaState(dict):
    """Map from stabilizer variable to its signed Pauli value."""

    def value(self, var: str) -> SignedPauli:
        try:
            return self[var]
        except KeyError:
            raise UndeclaredSVar(f"stabilizer variable {var!r} has no value") from None

    def subst(self, var: str, value: SignedPauli) -> "SigmaState":
        out = SigmaState(self)
        out[var] = value
        return out

    def pretty(self) -> str:
        return "{" + ", ".join(f"{k}={v}" for k, v in sorted(self.items())) + "}"


class QState:
    """A branch state: pure vector (ndim 1) or density matrix (ndim 2)."""

    __slots__ = ("n_qubits", "data")

    def __init__(self, n_qubits: int, data: np.ndarray):
        self.n_qubits = n_qubits
        self.data = data

    @property
    def is_pure(self) -> bool:
        return self.data.ndim == 1

    def mass(self) -> float:
        if self.is_pure:
            return float(np.vdot(self.data, self.data).real)
        return float(np.trace(self.data).real)

    def density(self) -> np.ndarray:
        if self.is_pure:
            return np.outer(self.data, self.data.conj())
        return self.data

    def apply(self, op: np.ndarray) -> "QState":
        if self.is_pure:
            return QState(self.n_qubits, op @ self.data)
        return QState(self.n_qubits, op @ self.data @ op.conj().T)

    def reset_qubit(self, q: int) -> "QState":
        """rho -> |0><0| rho |0><0| + |0><1| rho |1><0| on qubit q."""
        dim = 2**self.n_qubits
        idx = np.arange(dim)
        idx0 = idx[(idx >> q) & 1 == 0]
        idx1 = idx0 + (1 << q)
        if self.is_pure:
            n0 = float(np.linalg.norm(self.data[idx0]))
            n1 = float(np.linalg.norm(self.data[idx1]))
            if n1 <= 1e-14:  # already |0> on q
                return self
            if n0 <= 1e-14:  # definite |1>: relabel
                v = np.zeros_like(self.data)
                v[idx0] = self.data[idx1]
                return QState(self.n_qubits, v)
            rho = self.density()
        else:
            rho = self.data
        out = np.zeros_like(rho)
        out[np.ix_(idx0, idx0)] = rho[np.ix_(idx0, idx0)] + rho[np.ix_(idx1, idx1)]
        return QState(self.n_qubits, out)

    def digest(self) -> str:
        return hashlib.sha1(np.round(self.density(), 10).tobytes()).hexdigest()[:16]


@dataclass(frozen=True)
class Configuration:
    """<remaining, (rho, sigma)>; remaining None is the terminated marker."""

    remaining: Optional[Stmt]
    state: QState
    sigma: SigmaState
    loop_counts: tuple[tuple[str, int], ...] = ()

    @property
    def weight(self) -> float:
        return self.state.mass()


@dataclass
class ExecutionResult:
    branches: list[tuple[QState, SigmaState]]
    residual: list[Configuration]
    pruned_mass: float = 0.0
    trace: Optional[list[dict]] = None

    def total_mass(self) -> float:
        return (
            sum(s.mass() for s, _ in self.branches)
            + sum(c.weight for c in self.residual)
            + self.pruned_mass
        )

    @property
    def inconclusive(self) -> bool:
        return sum(c.weight for c in self.residual) > 1e-9


# ---------------------------------------------------------------------------
# Matrix-free operator application
# ---------------------------------------------------------------------------

_gate_expr_cache: dict[GateApp, StabilizerExpr] = {}


def _gate_expr(g: GateApp) -> StabilizerExpr:
    e = _gate_expr_cache.get(g)
    if e is None:
        e = gate_to_expr(g)
        _gate_expr_cache[g] = e
    return e


def _apply_expr(e: StabilizerExpr, arr: np.ndarray, n: int) -> np.ndarray:
    out = np.zeros_like(arr, dtype=complex)
    for c, p in e.terms:
        out += c * apply_pauli(p, arr, n)
    return out


def _apply_unitary(state: QState, g: GateApp) -> QState:
    u = _gate_expr(g)
    n = state.n_qubits
    if state.is_pure:
        return QState(n, _apply_expr(u, state.data, n))
    half = _apply_expr(u, state.data, n)  # U rho
    return QState(n, _apply_expr(u, half.conj().T, n).conj().T)  # (U (U rho)^+)^+


def _measure(state: QState, value: SignedPauli) -> tuple[QState, QState]:
    """(M1 rho M1^+, M0 rho M0^+) for M_i = (I +- s)/2."""
    if not value.is_hermitian():
        raise NonHermitianMeasurement(f"cannot measure {value}: imaginary phase")
    n = state.n_qubits
    if state.is_pure:
        sv = apply_pauli(value, state.data, n)
        return QState(n, (state.data + sv) / 2), QState(n, (state.data - sv) / 2)
    rho = state.data
    t1 = apply_pauli(value, rho, n)  # s rho
    t2 = t1.conj().T  # rho s
    srs = apply_pauli(value, t2, n)  # s rho s
    return (
        QState(n, (rho + t1 + t2 + srs) / 4),
        QState(n, (rho - t1 - t2 + srs) / 4),
    )


# ---------------------------------------------------------------------------
# Small-step operational semantics
# ---------------------------------------------------------------------------


def _eval_unary(rhs, sigma: SigmaState) -> SignedPauli:
    if isinstance(rhs, Literal):
        return rhs.value
    value = sigma.value(rhs.var)
    return value.negate() if rhs.negate else value


def step(c: Configuration, cap: int = 12, mass_floor: float = DEFAULT_MASS_FLOOR) -> list[Configuration]:
    """One transition; measurement statements yield both projector branches."""
    stmt = c.remaining
    if stmt is None:
        raise ValueError("configuration already terminated")
    n = c.state.n_qubits
    if n > cap:
        raise OracleCapExceeded(f"{n} qubits > cap {cap}")

    if isinstance(stmt, Seq):
        head, rest = stmt.stmts[0], stmt.stmts[1:]
        tail: Optional[Stmt] = rest[0] if len(rest) == 1 else (Seq(rest) if rest else None)
        out = []
        for succ in step(replace(c, remaining=head), cap, mass_floor):
            if succ.remaining is None:
                out.append(replace(succ, remaining=tail))
            else:
                seq_rest = (succ.remaining,) + rest if rest else (succ.remaining,)
                out.append(
                    replace(succ, remaining=seq_rest[0] if len(seq_rest) == 1 else Seq(seq_rest))
                )
        return out

    if isinstance(stmt, Skip):
        return [replace(c, remaining=None)]

    if isinstance(stmt, Init):
        state = c.state
        for q in stmt.qubits:
            state = state.reset_qubit(q)
        return [replace(c, remaining=None, state=state)]

    if isinstance(stmt, Unitary):
        state = c.state
        for g in stmt.ops:
            state = _apply_unitary(state, g)
        return [replace(c, remaining=None, state=state)]

    if isinstance(stmt, SAssign):
        value = _eval_unary(stmt.rhs, c.sigma)
        return [replace(c, remaining=None, sigma=c.sigma.subst(stmt.var, value))]

    if isinstance(stmt, IfM):
        value = c.sigma.value(stmt.var)
        plus, minus = _measure(c.state, value)
        out = []
        if plus.mass() > mass_floor:
            out.append(Configuration(stmt.then_body, plus, c.sigma, c.loop_counts))
        if minus.mass() > mass_floor:
            out.append(
                Configuration(
                    stmt.else_body,
                    minus,
                    c.sigma.subst(stmt.var, value.negate()),
                    c.loop_counts,
                )
            )
        return out

    if isinstance(stmt, WhileM):
        value = c.sigma.value(stmt.var)
        plus, minus = _measure(c.state, value)
        out = []
        if plus.mass() > mass_floor:
            counts = dict(c.loop_counts)
            counts[stmt.label] = counts.get(stmt.label, 0) + 1
            body = Seq((stmt.body, stmt)) if not isinstance(stmt.body, Seq) else Seq(
                stmt.body.stmts + (stmt,)
            )
            out.append(Configuration(body, plus, c.sigma, tuple(sorted(counts.items()))))
        if minus.mass() > mass_floor:
            out.append(
                Configuration(
                    None, minus, c.sigma.subst(stmt.var, value.negate()), c.loop_counts
                )
            )
        return out

    if isinstance(stmt, Correct):
        raise UndeclaredSVar(
            f"correct({', '.join(stmt.vars)}) reached the interpreter; "
            "bind and expand a decoder first"
        )

    raise TypeError(f"unknown statement {stmt!r}")


def run_program(
    p: ProgramUnit,
    init: tuple[Union[QState, DensityMatrix, np.ndarray], SigmaState],
    unroll_cap: int = DEFAULT_UNROLL_CAP,
    mass_floor: float = DEFAULT_MASS_FLOOR,
    cap: int = 12,
    want_trace: bool = False,
) -> ExecutionResult:
    """Breadth-first closure of step; while loops unrolled to unroll_cap."""
    state0, sigma0 = init
    if isinstance(state0, DensityMatrix):
        state0 = QState(state0.n_qubits, state0.data)
    elif isinstance(state0, np.ndarray):
        state0 = QState(p.n_qubits, state0)
    start_mass = state0.mass()
    queue = [Configuration(p.body, state0, SigmaState(sigma0))]
    branches: list[tuple[QState, SigmaState]] = []
    residual: list[Configuration] = []
    trace: Optional[list[dict]] = [] if want_trace else None
    steps = 0
    while queue:
        c = queue.pop(0)
        if c.remaining is None:
            branches.append((c.state, c.sigma))
            continue
        if any(k > unroll_cap for _, k in c.loop_counts):
            residual.append(c)
            continue
        succs = step(c, cap, mass_floor)
        if trace is not None:
            steps += 1
            for succ in succs:
                trace.append(
                    {
                        "step": steps,
                        "rule": _rule_name(c.remaining, succ),
                        "stmt": _stmt_head(c.remaining),
                        "sigma": succ.sigma.pretty(),
                        "weight": round(succ.weight, 12),
                        "rho_digest": succ.state.digest(),
                    }
                )
        queue.extend(succs)
    result = ExecutionResult(branches, residual, trace=trace)
    result.pruned_mass = max(0.0, start_mass - result.total_mass())
    return result


def _stmt_head(stmt: Stmt) -> str:
    from .lang import _print_stmt  # local import to avoid polluting module API

    out: list[str] = []
    if isinstance(stmt, Seq):
        _print_stmt(stmt.stmts[0], 0, out)
    else:
        _print_stmt(stmt, 0, out)
    return out[0]


def _rule_name(stmt: Stmt, succ: Configuration) -> str:
    target = stmt.stmts[0] if isinstance(stmt, Seq) else stmt
    if isinstance(target, Skip):
        return "Skip"
    if isinstance(target, Init):
        return "Initialization"
    if isinstance(target, Unitary):
        return "Unitary"
    if isinstance(target, SAssign):
        return "Assignment"
    if isinstance(target, IfM):
        plus = succ.remaining is target.then_body
        return "If 1" if plus else "If -1"
    if isinstance(target, WhileM):
        return "While -1" if succ.remaining is None else "While 1"
    return type(target).__name__


# ---------------------------------------------------------------------------
# Denotational semantics (independent compositional evaluation)
# ---------------------------------------------------------------------------


def denote(
    stmt: Optional[Stmt],
    state: QState,
    sigma: SigmaState,
    unroll_cap: int = DEFAULT_UNROLL_CAP,
    mass_floor: float = DEFAULT_MASS_FLOOR,
    cap: int = 12,
) -> tuple[list[tuple[QState, SigmaState]], list[tuple[QState, SigmaState]]]:
    """(terminals, residual) of the superoperator for stmt applied to one branch."""
    if stmt is None:
        return [(state, sigma)], []
    n = state.n_qubits
    if isinstance(stmt, Skip):
        return [(state, sigma)], []
    if isinstance(stmt, Init):
        for q in stmt.qubits:
            state = state.reset_qubit(q)
        return [(state, sigma)], []
    if isinstance(stmt, Unitary):
        for g in stmt.ops:
            state = _apply_unitary(state, g)
        return [(state, sigma)], []
    if isinstance(stmt, SAssign):
        return [(state, sigma.subst(stmt.var, _eval_unary(stmt.rhs, sigma)))], []
    if isinstance(stmt, Seq):
        terminals = [(state, sigma)]
        residual: list[tuple[QState, SigmaState]] = []
        for s in stmt.stmts:
            nxt: list[tuple[QState, SigmaState]] = []
            for st, sg in terminals:
                t, r = denote(s, st, sg, unroll_cap, mass_floor, cap)
                nxt.extend(t)
                residual.extend(r)
            terminals = nxt
        return terminals, residual
    if isinstance(stmt, IfM):
        value = sigma.value(stmt.var)
        plus, minus = _measure(state, value)
        terminals: list[tuple[QState, SigmaState]] = []
        residual: list[tuple[QState, SigmaState]] = []
        if plus.mass() > mass_floor:
            t, r = denote(stmt.then_body, plus, sigma, unroll_cap, mass_floor, cap)
            terminals.extend(t)
            residual.extend(r)
        if minus.mass() > mass_floor:
            t, r = denote(
                stmt.else_body, minus, sigma.subst(stmt.var, value.negate()),
                unroll_cap, mass_floor, cap,
            )
            terminals.extend(t)
            residual.extend(r)
        return terminals, residual
    if isinstance(stmt, WhileM):
        terminals = []
        residual = []
        pending = [(state, sigma)]
        for _ in range(unroll_cap + 1):
            if not pending:
                break
            nxt = []
            for st, sg in pending:
                value = sg.value(stmt.var)
                plus, minus = _measure(st, value)
                if minus.mass() > mass_floor:
                    terminals.append((minus, sg.subst(stmt.var, value.negate())))
                if plus.mass() > mass_floor:
                    t, r = denote(stmt.body, plus, sg, unroll_cap, mass_floor, cap)
                    nxt.extend(t)
                    residual.extend(r)
            pending = nxt
        residual.extend(pending)
        return terminals, residual
    if isinstance(stmt, Correct):
        raise UndeclaredSVar("correct(...) must be expanded before denotation")
    raise TypeError(f"unknown statement {stmt!r}")


def denote_program(
    p: ProgramUnit,
    init: tuple[Union[QState, np.ndarray], SigmaState],
    unroll_cap: int = DEFAULT_UNROLL_CAP,
    mass_floor: float = DEFAULT_MASS_FLOOR,
    cap: int = 12,
) -> ExecutionResult:
    state0, sigma0 = init
    if isinstance(state0, np.ndarray):
        state0 = QState(p.n_qubits, state0)
    terminals, residual = denote(p.body, state0, SigmaState(sigma0), unroll_cap, mass_floor, cap)
    res = ExecutionResult(
        terminals,
        [Configuration(Skip(), st, sg) for st, sg in residual],
    )
    res.pruned_mass = max(0.0, state0.mass() - res.total_mass())
    return res


def branch_sum(result: ExecutionResult, n_qubits: int) -> np.ndarray:
    """Multiset sum of terminal branch density matrices."""
    dim = 2**n_qubits
    total = np.zeros((dim, dim), dtype=complex)
    for st, _ in result.branches:
        total += st.density()
    return total


# ---------------------------------------------------------------------------
# Satisfaction and sampling
# ---------------------------------------------------------------------------


def _expr_commutes_with_sigma(e: StabilizerExpr, sigma: SigmaState) -> bool:
    # exact: Pauli strings are linearly independent, so the commutator is
    # zero iff every term commutes with every sigma value
    return all(
        commutes(p, v) for _, p in e.terms for v in sigma.values()
    )


def satisfies(
    state: tuple[Union[QState, DensityMatrix, np.ndarray], SigmaState],
    a: Assertion,
    tol: float = 1e-9,
    cap: int = 12,
) -> bool:
    """(rho, sigma) |= a: fixed-point check plus commutation with sigma."""
    q, sigma = state
    if isinstance(q, DensityMatrix):
        q = QState(q.n_qubits, q.data)
    elif isinstance(q, np.ndarray):
        n = q.shape[0].bit_length() - 1
        q = QState(n, q)
    if isinstance(a, _TrueA):
        return True
    if isinstance(a, _FalseA):
        return q.mass() <= tol
    if isinstance(a, And):
        return all(satisfies((q, sigma), item, tol, cap) for item in a.items)
    if isinstance(a, Or):
        return any(satisfies((q, sigma), item, tol, cap) for item in a.items)
    if isinstance(a, Implies):
        return (not satisfies((q, sigma), a.lhs, tol, cap)) or satisfies(
            (q, sigma), a.rhs, tol, cap
        )
    assert isinstance(a, ExprA)
    if max(a.expr.support, default=-1) >= q.n_qubits:
        raise OracleCapExceeded(f"assertion touches qubits beyond state width {q.n_qubits}")
    if not _expr_commutes_with_sigma(a.expr, sigma):
        return False
    # pure: ||A psi - psi||_2; mixed: ||A rho - rho||_F
    residual = _apply_expr(a.expr, q.data, q.n_qubits) - q.data
    return float(np.linalg.norm(residual)) <= tol


def sample_pre_states(
    a: Assertion,
    n_qubits: int,
    count: int,
    seed: int,
    sigma: Optional[SigmaState] = None,
    cap: int = 12,
    tol: float = 1e-9,
) -> list[tuple[QState, SigmaState]]:
    """Haar-random pure states projected into the satisfaction subspace of a."""
    sigma = SigmaState(sigma or {})
    a = asrt.assertion_simplify(a)
    if isinstance(a, _FalseA):
        raise UnsatisfiableAssertion("assertion simplifies to FALSE")
    disjuncts = a.items if isinstance(a, Or) else (a,)
    bases = []
    for d in disjuncts:
        exprs = asrt._conjunct_exprs(d)
        if exprs is None:
            raise UnsatisfiableAssertion(f"cannot sample from {d}")
        for e in exprs:
            if not _expr_commutes_with_sigma(e, sigma):
                raise UnsatisfiableAssertion(
                    f"assertion leaf {e} anticommutes with a sigma value"
                )
        basis = asrt.fixed_space_basis(exprs, n_qubits, cap, tol)
        if basis.shape[1] > 0:
            bases.append(basis)
    if not bases:
        raise UnsatisfiableAssertion(f"no state at width {n_qubits} satisfies {a}")
    rng = np.random.default_rng(seed)
    out = []
    for i in range(count):
        basis = bases[i % len(bases)]
        for _ in range(64):
            g = rng.normal(size=basis.shape[1]) + 1j * rng.normal(size=basis.shape[1])
            v = basis @ g
            norm = np.linalg.norm(v)
            if norm > 1e-9:
                out.append((QState(n_qubits, v / norm), SigmaState(sigma)))
                break
        else:  # pragma: no cover - projection of Gaussian is almost surely nonzero
            raise UnsatisfiableAssertion("projection kept collapsing to zero")
    return out


def trace_log_lines(result: ExecutionResult) -> list[str]:
    if result.trace is None:
        return []
    return [json.dumps(entry, sort_keys=True) for entry in result.trace]
