"""Assertion language over stabilizer expressions.

Assertions combine StabilizerExpr leaves with /\\, \\/ and =>.  A
conjunction of plain signed Paulis is normalized to a reduced signed
tableau (GF(2) symplectic elimination with exact sign tracking via
mul_pauli); implications are decided by a sound, deliberately
incomplete ladder ending in a dense fixed-subspace check.

The decision here covers the density-matrix half of satisfaction
(A rho = rho); commutation with stabilizer-variable values is enforced
by the verifier's rule side conditions and checked numerically by the
interpreter.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from .errors import ImaginaryPhaseConjunct, OracleCapExceeded, TermExplosion
from .pauli import (
    _BITS,
    DEDUP_TOL,
    SignedPauli,
    StabilizerExpr,
    apply_pauli,
    commutes,
    expr_to_matrix,
    mul_pauli,
    parse_expr,
    pauli_fixed_basis,
)

# ---------------------------------------------------------------------------
# Assertion AST
# ---------------------------------------------------------------------------


class Assertion:
    """Abstract base; concrete nodes below."""

    def __and__(self, other: "Assertion") -> "Assertion":
        return And((self, other))


@dataclass(frozen=True)
class ExprA(Assertion):
    expr: StabilizerExpr

    def __str__(self) -> str:
        s = str(self.expr)
        return f"({s})" if len(self.expr.terms) > 1 else s


@dataclass(frozen=True)
class And(Assertion):
    items: tuple[Assertion, ...]

    def __post_init__(self):
        if not self.items:
            raise ValueError("empty And")

    def __str__(self) -> str:
        return " /\\ ".join(_paren(a) for a in self.items)


@dataclass(frozen=True)
class Or(Assertion):
    items: tuple[Assertion, ...]

    def __post_init__(self):
        if not self.items:
            raise ValueError("empty Or")

    def __str__(self) -> str:
        return " \\/ ".join(_paren(a, or_ctx=True) for a in self.items)


@dataclass(frozen=True)
class Implies(Assertion):
    lhs: Assertion
    rhs: Assertion

    def __str__(self) -> str:
        return f"{_paren(self.lhs)} => {_paren(self.rhs)}"


class _TrueA(Assertion):
    def __str__(self):
        return "TRUE"

    def __repr__(self):
        return "TRUE"


class _FalseA(Assertion):
    def __str__(self):
        return "FALSE"

    def __repr__(self):
        return "FALSE"


TRUE = _TrueA()
FALSE = _FalseA()


def _paren(a: Assertion, or_ctx: bool = False) -> str:
    if isinstance(a, Implies) or (isinstance(a, Or) and not or_ctx) or (
        isinstance(a, And) and or_ctx
    ):
        return f"({a})"
    return str(a)


def expr_assert(e: Union[str, StabilizerExpr, SignedPauli]) -> Assertion:
    if isinstance(e, str):
        e = parse_expr(e)
    if isinstance(e, SignedPauli):
        e = StabilizerExpr.from_pauli(e)
    return ExprA(e)


def conj(*items: Union[str, Assertion, StabilizerExpr, SignedPauli]) -> Assertion:
    parts = tuple(a if isinstance(a, Assertion) else expr_assert(a) for a in items)
    return parts[0] if len(parts) == 1 else And(parts)


# ---------------------------------------------------------------------------
# Signed tableau
# ---------------------------------------------------------------------------

Contradiction = type("Contradiction", (), {"__repr__": lambda self: "CONTRADICTION"})
CONTRADICTION = Contradiction()


def _columns(p: SignedPauli) -> list[tuple[int, int]]:
    """(qubit, 0 for x / 1 for z) symplectic columns set in p."""
    cols = []
    for q, l in p.letters:
        x, z = _BITS[l]
        if x:
            cols.append((q, 0))
        if z:
            cols.append((q, 1))
    return cols


@dataclass(frozen=True)
class SignedTableau:
    """Independent commuting +-1-phase generators in reduced echelon form."""

    rows: tuple[SignedPauli, ...]
    pivots: tuple[tuple[int, int], ...]
    reduced: bool = True

    def member_phase(self, p: SignedPauli) -> Optional[int]:
        """Phase exponent k with p = i^k * (product of rows), or None.

        k == 0 means p is in the generated group; k == 2 means -p is.
        """
        r = p
        for row, piv in zip(self.rows, self.pivots):
            if piv in _columns(r):
                r = mul_pauli(r, row)
        if r.is_identity_letters():
            return r.phase_exp
        return None

    def implies_pauli(self, p: SignedPauli) -> Optional[bool]:
        """True if p follows, False if -p does (contradiction), None if neither."""
        k = self.member_phase(p)
        if k == 0:
            return True
        if k == 2:
            return False
        return None

    def __str__(self) -> str:
        return " /\\ ".join(str(r) for r in self.rows) if self.rows else "TRUE"


def conj_tableau(gens: Iterable[SignedPauli]) -> Union[SignedTableau, Contradiction]:
    """Reduce a conjunction of signed Paulis; detect empty-subspace sets.

    Generators must carry +-1 phases.  The set collapses to a
    contradiction when two generators anticommute or elimination
    produces -I.
    """
    pending = list(gens)
    for g in pending:
        if not g.is_hermitian():
            raise ImaginaryPhaseConjunct(f"conjunct {g} has imaginary phase")
    for a, b in itertools.combinations(pending, 2):
        if not commutes(a, b):
            return CONTRADICTION
    # forward-only echelon: each new row is reduced against the existing
    # rows, so later rows never contain earlier pivots and membership
    # reduction in pivot order terminates; earlier rows keep their input
    # shape, which preserves the human-readable generator forms
    rows: list[SignedPauli] = []
    pivots: list[tuple[int, int]] = []
    for g in pending:
        r = g
        for row, piv in _pivot_order(rows, pivots):
            if piv in _columns(r):
                r = mul_pauli(r, row)
        if r.is_identity_letters():
            if r.phase_exp == 2:
                return CONTRADICTION
            continue  # dependent, consistent
        rows.append(r)
        pivots.append(min(_columns(r)))
    order = sorted(range(len(rows)), key=lambda i: pivots[i])
    return SignedTableau(
        tuple(rows[i] for i in order), tuple(pivots[i] for i in order)
    )


def _pivot_order(rows, pivots):
    return sorted(zip(rows, pivots), key=lambda t: t[1])


# ---------------------------------------------------------------------------
# Proof status
# ---------------------------------------------------------------------------

NO_APPLICABLE_RULE = "NoApplicableRule"


@dataclass(frozen=True)
class ProofStatus:
    kind: str  # proved | disproved | unknown
    detail: str = ""

    @property
    def is_proved(self) -> bool:
        return self.kind == "proved"

    @property
    def is_disproved(self) -> bool:
        return self.kind == "disproved"

    @property
    def is_unknown(self) -> bool:
        return self.kind == "unknown"

    def __str__(self) -> str:
        return f"{self.kind}({self.detail})" if self.detail else self.kind


def proved(by: str) -> ProofStatus:
    return ProofStatus("proved", by)


def disproved(witness: str) -> ProofStatus:
    return ProofStatus("disproved", witness)


def unknown(reason: str) -> ProofStatus:
    return ProofStatus("unknown", reason)


@dataclass(frozen=True)
class ImpliesConfig:
    oracle_cap: int = 12
    max_terms: int = 4096
    tol: float = 1e-9


DEFAULT_CONFIG = ImpliesConfig()


# ---------------------------------------------------------------------------
# Simplification
# ---------------------------------------------------------------------------


def _expr_leaf_status(e: StabilizerExpr) -> Union[Assertion, SignedPauli, StabilizerExpr]:
    """Classify a leaf: TRUE/FALSE, a plain signed Pauli, or a sum."""
    if e.is_zero():
        return FALSE
    if e.is_identity():
        return TRUE
    if e.is_single_pauli():
        p = e.as_signed_pauli()
        if not p.is_hermitian():
            return FALSE  # i^+-1 times a Pauli fixes no state
        if p.is_identity_letters():
            return TRUE if p.phase_exp == 0 else FALSE
        return p
    return e


def assertion_simplify(a: Assertion) -> Assertion:
    """Flatten, fold contradictions to FALSE, normalize conjunctions to tableaus."""
    if isinstance(a, (_TrueA, _FalseA)):
        return a
    if isinstance(a, ExprA):
        leaf = _expr_leaf_status(a.expr)
        if isinstance(leaf, Assertion):
            return leaf
        if isinstance(leaf, SignedPauli):
            t = conj_tableau([leaf])
            return FALSE if t is CONTRADICTION else ExprA(StabilizerExpr.from_pauli(leaf))
        return ExprA(leaf)
    if isinstance(a, Implies):
        return Implies(assertion_simplify(a.lhs), assertion_simplify(a.rhs))
    if isinstance(a, Or):
        flat: list[Assertion] = []
        for item in a.items:
            s = assertion_simplify(item)
            if isinstance(s, _TrueA):
                return TRUE
            if isinstance(s, _FalseA):
                continue
            if isinstance(s, Or):
                flat.extend(s.items)
            elif s not in flat:
                flat.append(s)
        if not flat:
            return FALSE
        return flat[0] if len(flat) == 1 else Or(tuple(flat))
    if isinstance(a, And):
        paulis: list[SignedPauli] = []
        sums: list[StabilizerExpr] = []
        others: list[Assertion] = []
        stack = list(a.items)
        while stack:
            s = assertion_simplify(stack.pop(0))
            if isinstance(s, _FalseA):
                return FALSE
            if isinstance(s, _TrueA):
                continue
            if isinstance(s, And):
                stack = list(s.items) + stack
                continue
            if isinstance(s, ExprA):
                leaf = _expr_leaf_status(s.expr)
                if isinstance(leaf, SignedPauli):
                    paulis.append(leaf)
                    continue
                if isinstance(leaf, StabilizerExpr):
                    if leaf not in sums:
                        sums.append(leaf)
                    continue
                if isinstance(leaf, _FalseA):
                    return FALSE
                continue
            if s not in others:
                others.append(s)
        tableau = conj_tableau(paulis)
        if tableau is CONTRADICTION:
            return FALSE
        items: list[Assertion] = [ExprA(StabilizerExpr.from_pauli(r)) for r in tableau.rows]
        items.extend(ExprA(e) for e in sums)
        items.extend(others)
        if not items:
            return TRUE
        return items[0] if len(items) == 1 else And(tuple(items))
    raise TypeError(f"not an assertion: {a!r}")


def split_conjuncts(a: Assertion) -> tuple[list[SignedPauli], list[StabilizerExpr], list[Assertion]]:
    """Plain Pauli conjuncts, sum-expression conjuncts, anything else.

    Expects a simplified assertion (TRUE / ExprA / And of leaves).
    """
    if isinstance(a, _TrueA):
        return [], [], []
    items: Sequence[Assertion] = a.items if isinstance(a, And) else (a,)
    paulis, sums, others = [], [], []
    for item in items:
        if isinstance(item, ExprA):
            leaf = _expr_leaf_status(item.expr)
            if isinstance(leaf, SignedPauli):
                paulis.append(leaf)
            elif isinstance(leaf, StabilizerExpr):
                sums.append(leaf)
        else:
            others.append(item)
    return paulis, sums, others


# ---------------------------------------------------------------------------
# Implication
# ---------------------------------------------------------------------------


def implies(a: Assertion, b: Assertion, cfg: ImpliesConfig = DEFAULT_CONFIG) -> ProofStatus:
    """Sound three-valued decision of |= (a => b)."""
    try:
        a = assertion_simplify(a)
        b = assertion_simplify(b)
    except TermExplosion:
        return unknown("TermExplosion")
    return _implies_simplified(a, b, cfg)


def _implies_simplified(a: Assertion, b: Assertion, cfg: ImpliesConfig) -> ProofStatus:
    if isinstance(a, _FalseA):
        return proved("false-antecedent")
    if isinstance(b, _TrueA):
        return proved("true-consequent")
    if a == b:
        return proved("reflexive")
    # case split on a disjunction antecedent
    if isinstance(a, Or):
        for item in a.items:
            st = _implies_simplified(item, b, cfg)
            if st.is_disproved:
                return disproved(f"disjunct {item}: {st.detail}")
            if not st.is_proved:
                return st
        return proved("case-split")
    if isinstance(a, Implies):
        return unknown(NO_APPLICABLE_RULE)
    # conjunction consequent: prove each conjunct
    if isinstance(b, And):
        traces = []
        for item in b.items:
            st = _implies_simplified(a, item, cfg)
            if st.is_disproved:
                return disproved(f"conjunct {item}: {st.detail}")
            if st.is_unknown:
                return st
            traces.append(st.detail)
        return proved("conjunction(" + "; ".join(traces) + ")")
    if isinstance(b, Implies):
        try:
            strengthened = assertion_simplify(And((a, b.lhs)))
        except TermExplosion:
            return unknown("TermExplosion")
        return _implies_simplified(strengthened, b.rhs, cfg)
    if isinstance(b, Or):
        for item in b.items:
            st = _implies_simplified(a, item, cfg)
            if st.is_proved:
                return proved(f"disjunct-intro({st.detail})")
        return _dense_fallback(a, b, cfg)
    # now b is FALSE or an ExprA leaf
    if isinstance(b, _FalseA):
        # a is simplified and not FALSE: it is satisfiable
        return disproved("antecedent satisfiable, consequent empty")
    assert isinstance(b, ExprA)
    paulis, sums, others = split_conjuncts(a) if not isinstance(a, _TrueA) else ([], [], [])
    if others:
        return _dense_fallback(a, b, cfg)
    tableau = conj_tableau(paulis)
    if tableau is CONTRADICTION:  # defensive; simplify folds this
        return proved("false-antecedent")
    leaf = _expr_leaf_status(b.expr)
    if isinstance(leaf, SignedPauli):
        verdict = tableau.implies_pauli(leaf)
        if verdict is True:
            return proved("tableau-member")
        if verdict is False:
            return disproved(f"negation {leaf.negate()} is derivable from antecedent")
        st = _sum_rules(tableau, sums, StabilizerExpr.from_pauli(leaf), cfg)
        if st is not None:
            return st
        return _dense_fallback(a, b, cfg)
    if isinstance(leaf, StabilizerExpr):
        st = _sum_rules(tableau, sums, leaf, cfg)
        if st is not None:
            return st
    return _dense_fallback(a, b, cfg)


def _sum_rules(
    tableau: SignedTableau,
    sums: list[StabilizerExpr],
    target: StabilizerExpr,
    cfg: ImpliesConfig,
) -> Optional[ProofStatus]:
    """Affine/product reasoning for sum expressions.

    Rule A: target = sum_i lambda_i s_i with every s_i in the tableau
    group and sum lambda_i = 1 (satisfied stabilizers mix affinely).
    Rule B: target matches a satisfied sum conjunct term-by-term after
    multiplying individual terms by satisfied stabilizers.
    """
    # Rule A
    lam_total = 0.0 + 0j
    ok = True
    for c, p in target.terms:
        k = tableau.member_phase(p)
        if k == 0:
            lam_total += c
        elif k == 2:
            lam_total -= c
        else:
            ok = False
            break
    if ok and abs(lam_total - 1) <= cfg.tol:
        return proved("affine-combination")
    # Rule B
    for e in sums:
        if _matches_modulo_group(e, target, tableau, cfg):
            return proved("sum-term-transport")
    return None


def _matches_modulo_group(
    e: StabilizerExpr, target: StabilizerExpr, tableau: SignedTableau, cfg: ImpliesConfig
) -> bool:
    if len(e.terms) != len(target.terms):
        return False
    remaining = list(e.terms)
    for cb, pb in target.terms:
        hit = None
        for idx, (ce, pe) in enumerate(remaining):
            m = mul_pauli(pe, pb)  # i^j * u with u unsigned
            u = m.unsigned()
            k = tableau.member_phase(u)
            if k is None:
                continue
            sigma = 1 if k == 0 else -1
            # p_e * (sigma u) = sigma * i^{-j} * p_b
            factor = sigma * ((1, -1j, -1, 1j)[m.phase_exp % 4])
            if abs(ce * factor - cb) <= cfg.tol:
                hit = idx
                break
        if hit is None:
            return False
        remaining.pop(hit)
    return True


# ---------------------------------------------------------------------------
# Dense fallback: fixed-subspace inclusion
# ---------------------------------------------------------------------------


def _conjunct_exprs(a: Assertion) -> Optional[list[StabilizerExpr]]:
    if isinstance(a, _TrueA):
        return []
    if isinstance(a, ExprA):
        return [a.expr]
    if isinstance(a, And):
        out = []
        for item in a.items:
            sub = _conjunct_exprs(item)
            if sub is None:
                return None
            out.extend(sub)
        return out
    return None


def assertion_support(a: Assertion) -> frozenset[int]:
    if isinstance(a, ExprA):
        return a.expr.support
    if isinstance(a, (And, Or)):
        return frozenset().union(*(assertion_support(i) for i in a.items))
    if isinstance(a, Implies):
        return assertion_support(a.lhs) | assertion_support(a.rhs)
    return frozenset()


def fixed_space_basis(
    exprs: Sequence[StabilizerExpr], n_qubits: int, cap: int, tol: float = 1e-9
) -> np.ndarray:
    """Orthonormal basis of the joint +1-fixed subspace {v : E v = v for all E}.

    Plain signed-Pauli conjuncts are intersected by projector application
    ((I+s)/2 maps the running basis onto its fixed space and, for the
    commuting sets produced by tableau reduction, stays inside the spaces
    already intersected); general sums fall back to a basis-restricted
    null-space computation.
    """
    if n_qubits > cap:
        raise OracleCapExceeded(f"{n_qubits} qubits > cap {cap}")
    dim = 2**n_qubits
    basis = np.eye(dim, dtype=complex)
    paulis: list[SignedPauli] = []
    general: list[StabilizerExpr] = []
    for e in exprs:
        leaf = _expr_leaf_status(e)
        if isinstance(leaf, SignedPauli) and leaf.is_hermitian():
            paulis.append(leaf)
        elif isinstance(leaf, _TrueA):
            continue
        elif isinstance(leaf, _FalseA):
            return np.zeros((dim, 0), dtype=complex)
        else:
            general.append(e)
    if any(
        not commutes(a, b) for a, b in itertools.combinations(paulis, 2)
    ):
        # anticommuting Hermitian involutions share no +1 eigenvector
        return np.zeros((dim, 0), dtype=complex)
    full = True
    for p in paulis:
        if full:
            basis = pauli_fixed_basis(p, n_qubits)
            full = False
        else:
            # restrict (I+s)/2 to the running basis: for the commuting
            # sets reaching this path it is a projector in coordinates,
            # so its eigenvalues split cleanly at {0, 1}
            sb = basis.conj().T @ apply_pauli(p, basis, n_qubits)
            k = basis.shape[1]
            w, v = np.linalg.eigh((np.eye(k) + sb) / 2)
            basis = basis @ v[:, w > 0.5]
        if basis.shape[1] == 0:
            return basis
    for e in general:
        m = expr_to_matrix(e, n_qubits, cap)
        residual = m @ basis - basis
        # null space of the residual in basis coordinates
        _, s, vh = np.linalg.svd(residual, full_matrices=True)
        rank = int(np.sum(s > tol * max(1.0, s[0] if len(s) else 1.0)))
        coeffs = vh[rank:].conj().T
        basis = basis @ coeffs
        if basis.shape[1] == 0:
            return basis
    return basis


def _orthonormal_range(mat: np.ndarray, tol: float) -> np.ndarray:
    u, s, _ = np.linalg.svd(mat, full_matrices=False)
    if s.size == 0:
        return mat[:, :0]
    keep = s > tol * max(1.0, s[0])
    return u[:, keep]


def _fixed_basis_of(a: Assertion, n: int, cfg: ImpliesConfig) -> Optional[np.ndarray]:
    exprs = _conjunct_exprs(a)
    if exprs is None:
        return None
    return fixed_space_basis(exprs, n, cfg.oracle_cap, cfg.tol)


def _dense_fallback(a: Assertion, b: Assertion, cfg: ImpliesConfig) -> ProofStatus:
    support = assertion_support(a) | assertion_support(b)
    n = max(support, default=-1) + 1
    if n > cfg.oracle_cap:
        return unknown("OracleCapExceeded")
    if n == 0:
        n = 1
    basis_a = _fixed_basis_of(a, n, cfg)
    if basis_a is None:
        return unknown(NO_APPLICABLE_RULE)
    if basis_a.shape[1] == 0:
        return proved("dense(empty antecedent subspace)")
    disjuncts = b.items if isinstance(b, Or) else (b,)
    bases_b = []
    for d in disjuncts:
        bb = _fixed_basis_of(d, n, cfg)
        if bb is None:
            return unknown(NO_APPLICABLE_RULE)
        bases_b.append(bb)
    for bb in bases_b:
        proj = bb @ bb.conj().T
        residual = basis_a - proj @ basis_a
        if np.linalg.norm(residual) <= cfg.tol:
            return proved(f"dense(subspace inclusion, dim {basis_a.shape[1]})")
    # witness: a deterministic combination of the antecedent basis outside
    # every consequent subspace
    rng = np.random.default_rng(7)
    for _ in range(32):
        coeffs = rng.normal(size=basis_a.shape[1]) + 1j * rng.normal(size=basis_a.shape[1])
        v = basis_a @ coeffs
        v /= np.linalg.norm(v)
        if all(
            np.linalg.norm(v - bb @ (bb.conj().T @ v)) > max(10 * cfg.tol, 1e-6)
            for bb in bases_b
        ):
            return disproved(f"state {np.round(v, 6).tolist()} satisfies lhs only")
    return unknown(NO_APPLICABLE_RULE)


# ---------------------------------------------------------------------------
# Text syntax:  =>  <  \/  <  /\ ; leaves in Pauli-sum syntax; TRUE / FALSE.
# ---------------------------------------------------------------------------


def _split_top(text: str, op: str) -> list[str]:
    parts, depth, cur, i = [], 0, "", 0
    while i < len(text):
        ch = text[i]
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if depth == 0 and text.startswith(op, i):
            parts.append(cur)
            cur = ""
            i += len(op)
            continue
        cur += ch
        i += 1
    parts.append(cur)
    return parts


def _fully_wrapped(s: str) -> bool:
    if not (s.startswith("(") and s.endswith(")")):
        return False
    depth = 0
    for i, ch in enumerate(s):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth == 0 and i < len(s) - 1:
                return False
    return depth == 0


def parse_assertion(text: str) -> Assertion:
    s = text.strip()
    while _fully_wrapped(s) and any(op in s for op in ("/\\", "\\/", "=>")):
        s = s[1:-1].strip()
    parts = _split_top(s, "=>")
    if len(parts) > 1:
        rhs = parse_assertion(parts[-1])
        for lhs_text in reversed(parts[:-1]):
            rhs = Implies(parse_assertion(lhs_text), rhs)
        return rhs
    parts = _split_top(s, "\\/")
    if len(parts) > 1:
        return Or(tuple(parse_assertion(p) for p in parts))
    parts = _split_top(s, "/\\")
    if len(parts) > 1:
        return And(tuple(parse_assertion(p) for p in parts))
    while _fully_wrapped(s) and any(op in s for op in ("/\\", "\\/", "=>")):
        s = s[1:-1].strip()
    if s.upper() == "TRUE":
        return TRUE
    if s.upper() == "FALSE" or s == "0":
        return FALSE
    if _fully_wrapped(s):
        inner = s[1:-1].strip()
        # grouping parens around a bare sum (not a coefficient)
        try:
            return ExprA(parse_expr(inner))
        except Exception:
            return parse_assertion(inner)
    return ExprA(parse_expr(s))
