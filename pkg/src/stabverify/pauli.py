"""Phase-exact algebra of signed Pauli strings and their complex-weighted sums.

Phase convention: Y = iXZ, which fixes the cyclic products X*Y = iZ,
Y*Z = iX, Z*X = iY (anti-cyclic products carry -i).  A string is stored
sparsely as {qubit: letter} with an i^k global phase; the (x|z) bit pair
per qubit backs multiplication and commutation.
"""

from __future__ import annotations

import cmath
import re
from dataclasses import dataclass, field
from functools import reduce
from typing import Iterable, Mapping, Sequence, Union

import numpy as np

from .errors import (
    NonCliffordGate,
    OracleCapExceeded,
    PauliSyntaxError,
    TermExplosion,
)

DEDUP_TOL = 1e-12
MAX_TERMS = 4096
ORACLE_CAP = 12

# letter -> (x, z) bits under Y = iXZ
_BITS = {"X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
_LETTER = {(1, 0): "X", (1, 1): "Y", (0, 1): "Z"}

_MAT = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

_PHASE = (1, 1j, -1, -1j)


@dataclass(frozen=True)
class SignedPauli:
    """i^phase_exp times a tensor product of X/Y/Z letters on named qubits.

    `letters` is canonically sorted by qubit id and never stores an
    explicit identity letter.  Empty letters with phase_exp 0 is I.
    """

    phase_exp: int = 0
    letters: tuple[tuple[int, str], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "phase_exp", self.phase_exp % 4)
        lts = tuple(sorted(self.letters))
        for q, l in lts:
            if q < 0 or l not in ("X", "Y", "Z"):
                raise ValueError(f"bad letter {l!r} on qubit {q}")
        object.__setattr__(self, "letters", lts)

    @classmethod
    def from_map(cls, letters: Mapping[int, str], phase_exp: int = 0) -> "SignedPauli":
        return cls(phase_exp, tuple((q, l) for q, l in letters.items() if l != "I"))

    @classmethod
    def identity(cls) -> "SignedPauli":
        return cls()

    @classmethod
    def single(cls, letter: str, qubit: int, phase_exp: int = 0) -> "SignedPauli":
        return cls(phase_exp, ((qubit, letter),))

    @property
    def letter_map(self) -> dict[int, str]:
        return dict(self.letters)

    @property
    def phase(self) -> complex:
        return _PHASE[self.phase_exp]

    @property
    def support(self) -> frozenset[int]:
        return frozenset(q for q, _ in self.letters)

    def is_identity(self) -> bool:
        return not self.letters and self.phase_exp == 0

    def is_identity_letters(self) -> bool:
        return not self.letters

    def is_hermitian(self) -> bool:
        return self.phase_exp in (0, 2)

    def negate(self) -> "SignedPauli":
        return SignedPauli(self.phase_exp + 2, self.letters)

    def times_i(self) -> "SignedPauli":
        return SignedPauli(self.phase_exp + 1, self.letters)

    def unsigned(self) -> "SignedPauli":
        return SignedPauli(0, self.letters)

    def dagger(self) -> "SignedPauli":
        return SignedPauli(-self.phase_exp, self.letters)

    def weight(self) -> int:
        return len(self.letters)

    def __mul__(self, other: "SignedPauli") -> "SignedPauli":
        return mul_pauli(self, other)

    def __neg__(self) -> "SignedPauli":
        return self.negate()

    def __str__(self) -> str:
        prefix = ("", "i", "-", "-i")[self.phase_exp]
        if not self.letters:
            return prefix + "I"
        return prefix + "*".join(f"{l}{q}" for q, l in self.letters)

    __repr__ = __str__


def mul_pauli(a: SignedPauli, b: SignedPauli) -> SignedPauli:
    """Exact group product a*b.

    Per qubit, with P(x,z) = i^(xz) X^x Z^z, the product picks up
    i^(x1 z1 + x2 z2 + 2 z1 x2 - x3 z3) where (x3,z3) = (x1^x2, z1^z2).
    """
    phase = a.phase_exp + b.phase_exp
    out: dict[int, str] = dict(a.letters)
    for q, lb in b.letters:
        la = out.get(q)
        if la is None:
            out[q] = lb
            continue
        x1, z1 = _BITS[la]
        x2, z2 = _BITS[lb]
        x3, z3 = x1 ^ x2, z1 ^ z2
        phase += x1 * z1 + x2 * z2 + 2 * z1 * x2 - x3 * z3
        if x3 == 0 and z3 == 0:
            del out[q]
        else:
            out[q] = _LETTER[(x3, z3)]
    return SignedPauli.from_map(out, phase)


def commutes(a: SignedPauli, b: SignedPauli) -> bool:
    """True iff ab = ba: even count of positions with differing non-I letters."""
    bmap = dict(b.letters)
    anti = sum(1 for q, la in a.letters if (lb := bmap.get(q)) and lb != la)
    return anti % 2 == 0


def pauli_product(paulis: Iterable[SignedPauli]) -> SignedPauli:
    return reduce(mul_pauli, paulis, SignedPauli.identity())


# ---------------------------------------------------------------------------
# Stabilizer expressions: complex-weighted sums of signed Paulis.
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class StabilizerExpr:
    """Canonical complex-weighted sum of Pauli strings.

    Terms are keyed by the unsigned letters; the i^k phase of each
    SignedPauli is folded into the coefficient.  Terms with |coeff|
    below DEDUP_TOL are dropped.  The identity expression is [(1, I)].
    Equality compares coefficients to DEDUP_TOL (floating-point work
    upstream, e.g. non-Clifford conjugation, leaves ~1e-16 residue).
    """

    terms: tuple[tuple[complex, SignedPauli], ...] = ()

    def __eq__(self, other) -> bool:
        if not isinstance(other, StabilizerExpr):
            return NotImplemented
        if len(self.terms) != len(other.terms):
            return False
        return all(
            pa.letters == pb.letters and abs(ca - cb) <= 1e-9
            for (ca, pa), (cb, pb) in zip(self.terms, other.terms)
        )

    def __hash__(self) -> int:
        return hash(tuple(p.letters for _, p in self.terms))

    @classmethod
    def from_terms(
        cls,
        terms: Iterable[tuple[complex, SignedPauli]],
        max_terms: int = MAX_TERMS,
    ) -> "StabilizerExpr":
        acc: dict[tuple, complex] = {}
        for coeff, p in terms:
            key = p.letters
            acc[key] = acc.get(key, 0) + complex(coeff) * p.phase
        folded = []
        for key, c in acc.items():
            if abs(c) > DEDUP_TOL:
                folded.append((c, SignedPauli(0, key)))
        folded.sort(key=lambda t: t[1].letters)
        if len(folded) > max_terms:
            raise TermExplosion(len(folded), max_terms)
        return cls(tuple(folded))

    @classmethod
    def from_pauli(cls, p: SignedPauli, coeff: complex = 1.0) -> "StabilizerExpr":
        return cls.from_terms([(coeff, p)])

    @classmethod
    def identity(cls) -> "StabilizerExpr":
        return cls.from_pauli(SignedPauli.identity())

    @classmethod
    def zero(cls) -> "StabilizerExpr":
        return cls(())

    def is_zero(self) -> bool:
        return not self.terms

    def is_identity(self) -> bool:
        return (
            len(self.terms) == 1
            and self.terms[0][1].is_identity_letters()
            and abs(self.terms[0][0] - 1) <= DEDUP_TOL
        )

    def is_single_pauli(self) -> bool:
        """One term with a +-1 or +-i coefficient (a plain signed Pauli)."""
        if len(self.terms) != 1:
            return False
        c = self.terms[0][0]
        return any(abs(c - u) <= DEDUP_TOL for u in (1, -1, 1j, -1j))

    def as_signed_pauli(self) -> SignedPauli:
        if not self.is_single_pauli():
            raise ValueError(f"not a single signed Pauli: {self}")
        c, p = self.terms[0]
        k = min(range(4), key=lambda k: abs(c - _PHASE[k]))
        return SignedPauli(k, p.letters)

    @property
    def support(self) -> frozenset[int]:
        return frozenset(q for _, p in self.terms for q in p.support)

    def is_hermitian(self) -> bool:
        this = {p.letters: c for c, p in self.terms}
        return all(abs(c - this[p.letters].conjugate()) <= 1e-10 for c, p in self.terms)

    def dagger(self) -> "StabilizerExpr":
        return StabilizerExpr.from_terms(
            (c.conjugate(), p.dagger()) for c, p in self.terms
        )

    def scale(self, factor: complex) -> "StabilizerExpr":
        return StabilizerExpr.from_terms((factor * c, p) for c, p in self.terms)

    def __add__(self, other: "StabilizerExpr") -> "StabilizerExpr":
        return StabilizerExpr.from_terms(list(self.terms) + list(other.terms))

    def __neg__(self) -> "StabilizerExpr":
        return self.scale(-1)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for c, p in self.terms:
            body = "*".join(f"{l}{q}" for q, l in p.letters) or "I"
            if abs(c - 1) <= DEDUP_TOL:
                piece = body
            elif abs(c + 1) <= DEDUP_TOL:
                piece = f"-{body}"
            else:
                piece = f"({_fmt_complex(c)})*{body}"
            if parts and not piece.startswith("-"):
                parts.append(f"+ {piece}")
            elif parts:
                parts.append(f"- {piece[1:]}")
            else:
                parts.append(piece)
        return " ".join(parts)

    __repr__ = __str__


def _fmt_complex(c: complex) -> str:
    re_, im = c.real, c.imag
    if abs(im) <= DEDUP_TOL:
        return repr(re_)
    if abs(re_) <= DEDUP_TOL:
        return f"{im!r}i"
    sign = "+" if im >= 0 else "-"
    return f"{re_!r}{sign}{abs(im)!r}i"


def expr_mul(
    a: StabilizerExpr, b: StabilizerExpr, max_terms: int = MAX_TERMS
) -> StabilizerExpr:
    """Distribute term-by-term via mul_pauli, then canonicalize."""
    out = []
    for ca, pa in a.terms:
        for cb, pb in b.terms:
            out.append((ca * cb, mul_pauli(pa, pb)))
    return StabilizerExpr.from_terms(out, max_terms=max_terms)


# ---------------------------------------------------------------------------
# Gates and conjugation.
# ---------------------------------------------------------------------------

GATE_ARITY = {"X": 1, "Y": 1, "Z": 1, "H": 1, "S": 1, "T": 1, "CNOT": 2, "CX": 2, "CZ": 2}
CLIFFORD_GATES = {"X", "Y", "Z", "H", "S", "CNOT", "CX", "CZ"}


@dataclass(frozen=True)
class GateApp:
    """A named gate (or inline Pauli-sum unitary) applied to ordered qubits."""

    gate: Union[str, StabilizerExpr]
    operands: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "operands", tuple(self.operands))
        if isinstance(self.gate, str):
            name = self.gate.upper()
            if name not in GATE_ARITY:
                raise ValueError(f"unknown gate {self.gate!r}")
            object.__setattr__(self, "gate", "CNOT" if name == "CX" else name)
            if len(self.operands) != GATE_ARITY[name]:
                raise ValueError(
                    f"{name} expects {GATE_ARITY[name]} operands, got {len(self.operands)}"
                )

    def is_clifford(self) -> bool:
        return isinstance(self.gate, str) and self.gate in CLIFFORD_GATES

    def __str__(self) -> str:
        if isinstance(self.gate, str):
            return f"{self.gate}({', '.join(map(str, self.operands))})"
        return f"{{{self.gate}}}({', '.join(map(str, self.operands))})"


# Images of X_q and Z_q under conjugation by each named Clifford gate.
# Y is handled via Y = iXZ, products via mul_pauli (conjugation is a
# homomorphism), so signs come out exact.
def _img_1q(gate: str, letter: str, q: int) -> SignedPauli:
    tbl = {
        "H": {"X": ("Z", 0), "Z": ("X", 0)},
        "S": {"X": ("Y", 0), "Z": ("Z", 0)},
        "X": {"X": ("X", 0), "Z": ("Z", 2)},
        "Y": {"X": ("X", 2), "Z": ("Z", 2)},
        "Z": {"X": ("X", 2), "Z": ("Z", 0)},
    }
    new, ph = tbl[gate][letter]
    return SignedPauli.single(new, q, ph)


def _img_2q(gate: str, letter: str, pos: int, a: int, b: int) -> SignedPauli:
    if gate == "CNOT":
        if pos == 0:  # control
            if letter == "X":
                return SignedPauli.from_map({a: "X", b: "X"})
            return SignedPauli.single("Z", a)
        if letter == "X":
            return SignedPauli.single("X", b)
        return SignedPauli.from_map({a: "Z", b: "Z"})
    if gate == "CZ":
        if letter == "X":
            other = b if pos == 0 else a
            here = a if pos == 0 else b
            return SignedPauli.from_map({here: "X", other: "Z"})
        return SignedPauli.single("Z", a if pos == 0 else b)
    raise ValueError(gate)


def conjugate_by_gate(g: GateApp, p: SignedPauli) -> SignedPauli:
    """g p g^dagger for a named Clifford gate (Clifford closure)."""
    if not g.is_clifford():
        raise NonCliffordGate(f"{g} is not Clifford; use expr_conjugate")
    gate = g.gate
    out = SignedPauli(p.phase_exp)
    for q, letter in p.letters:
        if q not in g.operands:
            out = mul_pauli(out, SignedPauli.single(letter, q))
            continue
        pos = g.operands.index(q)

        def img(l: str) -> SignedPauli:
            if len(g.operands) == 1:
                return _img_1q(gate, l, q)
            return _img_2q(gate, l, pos, *g.operands)

        if letter == "Y":  # Y = i X Z
            piece = mul_pauli(img("X"), img("Z")).times_i()
        else:
            piece = img(letter)
        out = mul_pauli(out, piece)
    return out


def _t_gate_expr(q: int) -> StabilizerExpr:
    # T = e^{i pi/8} (cos(pi/8) I - i sin(pi/8) Z)
    ph = cmath.exp(1j * cmath.pi / 8)
    return StabilizerExpr.from_terms(
        [
            (ph * cmath.cos(cmath.pi / 8), SignedPauli.identity()),
            (-1j * ph * cmath.sin(cmath.pi / 8), SignedPauli.single("Z", q)),
        ]
    )


def gate_to_expr(g: GateApp) -> StabilizerExpr:
    """The gate as an explicit Pauli-sum unitary."""
    if not isinstance(g.gate, str):
        return g.gate
    if g.gate == "T":
        return _t_gate_expr(g.operands[0])
    if g.gate == "CNOT":
        a, b = g.operands
        # 1/2 (I + X_b + Z_a - Z_a X_b)
        return StabilizerExpr.from_terms(
            [
                (0.5, SignedPauli.identity()),
                (0.5, SignedPauli.single("X", b)),
                (0.5, SignedPauli.single("Z", a)),
                (-0.5, SignedPauli.from_map({a: "Z", b: "X"})),
            ]
        )
    if g.gate == "CZ":
        a, b = g.operands
        return StabilizerExpr.from_terms(
            [
                (0.5, SignedPauli.identity()),
                (0.5, SignedPauli.single("Z", b)),
                (0.5, SignedPauli.single("Z", a)),
                (-0.5, SignedPauli.from_map({a: "Z", b: "Z"})),
            ]
        )
    q = g.operands[0]
    if g.gate in ("X", "Y", "Z"):
        return StabilizerExpr.from_pauli(SignedPauli.single(g.gate, q))
    if g.gate == "H":
        r = 1 / np.sqrt(2)
        return StabilizerExpr.from_terms(
            [(r, SignedPauli.single("X", q)), (r, SignedPauli.single("Z", q))]
        )
    if g.gate == "S":
        # S = e^{i pi/4} (cos(pi/4) I - i sin(pi/4) Z)
        ph = cmath.exp(1j * cmath.pi / 4)
        r = cmath.cos(cmath.pi / 4)
        return StabilizerExpr.from_terms(
            [(ph * r, SignedPauli.identity()), (-1j * ph * r, SignedPauli.single("Z", q))]
        )
    raise ValueError(g.gate)


UnitaryLike = Union[StabilizerExpr, GateApp, Sequence[GateApp]]


def expr_conjugate(
    u: UnitaryLike, a: StabilizerExpr, max_terms: int = MAX_TERMS
) -> StabilizerExpr:
    """u a u^dagger.

    Clifford gate sequences map each term to a single term; an
    expression-form u (or T gate) goes through u * a * u^dagger.
    """
    if isinstance(u, GateApp):
        u = [u]
    if isinstance(u, StabilizerExpr):
        return expr_mul(expr_mul(u, a, max_terms), u.dagger(), max_terms)
    out = a
    for g in u:
        if g.is_clifford():
            out = StabilizerExpr.from_terms(
                ((c, conjugate_by_gate(g, p)) for c, p in out.terms),
                max_terms=max_terms,
            )
        else:
            ue = gate_to_expr(g)
            out = expr_mul(expr_mul(ue, out, max_terms), ue.dagger(), max_terms)
    return out


# ---------------------------------------------------------------------------
# Dense realization.  Basis index bit q (LSB = qubit 0) is the value of
# qubit q, so |0001> for q3q2q1q0 sits at index 1.
# ---------------------------------------------------------------------------


def pauli_action(p: SignedPauli, n_qubits: int) -> tuple[int, np.ndarray]:
    """(xmask, coeffs) with p |i> = coeffs[i] |i ^ xmask>.

    Basis index bit q is qubit q's value; X^x Z^z |b> = (-1)^(z.b) |b^x>,
    and each Y carries the i of Y = iXZ.
    """
    if p.support and max(p.support) >= n_qubits:
        raise ValueError(f"{p} references qubit >= {n_qubits}")
    dim = 2**n_qubits
    xmask = zmask = 0
    n_y = 0
    for q, l in p.letters:
        x, z = _BITS[l]
        xmask |= x << q
        zmask |= z << q
        n_y += x & z
    idx = np.arange(dim)
    parity = np.zeros(dim, dtype=np.int8)
    for q in range(n_qubits):
        if (zmask >> q) & 1:
            parity ^= ((idx >> q) & 1).astype(np.int8)
    phase = _PHASE[(p.phase_exp + n_y) % 4]
    coeffs = phase * np.where(parity == 1, -1.0, 1.0)
    return xmask, coeffs


def apply_pauli(p: SignedPauli, vec: np.ndarray, n_qubits: int) -> np.ndarray:
    """p @ vec without materializing the matrix (vec may be a column stack)."""
    dim = 2**n_qubits
    if vec.shape[0] != dim:
        raise ValueError(f"state has dimension {vec.shape[0]}, expected {dim}")
    xmask, coeffs = pauli_action(p, n_qubits)
    idx = np.arange(dim)
    out = np.empty_like(vec, dtype=complex)
    scaled = coeffs[:, None] * vec if vec.ndim == 2 else coeffs * vec
    out[idx ^ xmask] = scaled
    return out


def pauli_fixed_basis(p: SignedPauli, n_qubits: int) -> np.ndarray:
    """Orthonormal basis of the +1 eigenspace of a Hermitian signed Pauli."""
    if not p.is_hermitian():
        raise ValueError(f"{p} is not Hermitian")
    dim = 2**n_qubits
    xmask, coeffs = pauli_action(p, n_qubits)
    if xmask == 0:
        cols = np.flatnonzero(coeffs.real > 0)
        basis = np.zeros((dim, len(cols)), dtype=complex)
        basis[cols, np.arange(len(cols))] = 1.0
        return basis
    # orbits {i, i^xmask}: (|i> + c_i |i^xmask>)/sqrt(2) is the +1 vector
    idx = np.arange(dim)
    reps = idx[idx < (idx ^ xmask)]
    basis = np.zeros((dim, len(reps)), dtype=complex)
    r = np.arange(len(reps))
    basis[reps, r] = 1 / np.sqrt(2)
    basis[reps ^ xmask, r] = coeffs[reps] / np.sqrt(2)
    return basis


def pauli_to_matrix(p: SignedPauli, n_qubits: int, cap: int = ORACLE_CAP) -> np.ndarray:
    if n_qubits > cap:
        raise OracleCapExceeded(f"{n_qubits} qubits > cap {cap}")
    if p.support and max(p.support) >= n_qubits:
        raise ValueError(f"{p} references qubit >= {n_qubits}")
    lm = p.letter_map
    m = np.array([[1]], dtype=complex)
    for q in range(n_qubits - 1, -1, -1):
        m = np.kron(m, _MAT[lm.get(q, "I")])
    return p.phase * m


def expr_to_matrix(a: StabilizerExpr, n_qubits: int, cap: int = ORACLE_CAP) -> np.ndarray:
    if n_qubits > cap:
        raise OracleCapExceeded(f"{n_qubits} qubits > cap {cap}")
    dim = 2**n_qubits
    m = np.zeros((dim, dim), dtype=complex)
    for c, p in a.terms:
        m += c * pauli_to_matrix(p, n_qubits, cap)
    return m


def pauli_expansion(mat: np.ndarray) -> StabilizerExpr:
    """Decompose a 2^n x 2^n matrix into Pauli-string weights.

    Weights are tr(P M) / 2^n; for Hermitian M they are real.
    """
    dim = mat.shape[0]
    n = dim.bit_length() - 1
    if 2**n != dim or mat.shape != (dim, dim):
        raise ValueError("matrix must be square with power-of-two dimension")
    terms = []
    letters = ["I", "X", "Y", "Z"]

    def rec(q: int, acc: dict[int, str]):
        if q == n:
            p = SignedPauli.from_map(acc)
            w = np.trace(pauli_to_matrix(p, n, cap=max(n, ORACLE_CAP)) @ mat) / dim
            if abs(w) > DEDUP_TOL:
                terms.append((w, p))
            return
        for l in letters:
            if l == "I":
                rec(q + 1, acc)
            else:
                rec(q + 1, {**acc, q: l})

    rec(0, {})
    return StabilizerExpr.from_terms(terms, max_terms=4**n)


# ---------------------------------------------------------------------------
# Text syntax.
#
#   pauli  := [phase] letterterm ('*' letterterm)*      e.g.  -Z0*Z1*Z2
#   phase  := '-' | 'i' | '-i'
#   expr   := term (('+'|'-') term)*
#   term   := '(' complex ')' '*' pauli  |  pauli       e.g.  (0.5)*I + (0.5)*X1
#   complex:= re [('+'|'-') im 'i']
# ---------------------------------------------------------------------------

_TERM_RE = re.compile(r"([XYZ])(\d+)", re.IGNORECASE)
_NUM = r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_COMPLEX_RE = re.compile(rf"^\s*({_NUM})\s*(?:([+-])\s*({_NUM})\s*i)?\s*$|^\s*({_NUM})\s*i\s*$")


_PHASE_RE = re.compile(r"^(-i|-|i)\s*\*?\s*")


def parse_pauli(text: str) -> SignedPauli:
    """Parse a signed Pauli term like ``-Z0*Z1*Z2``, ``i*X3`` or ``-I``.

    Lowercase ``i`` is the imaginary unit; uppercase ``I`` the identity.
    """
    s = text.strip()
    phase = 0
    m = _PHASE_RE.match(s)
    if m:
        phase = {"-i": 3, "-": 2, "i": 1}[m.group(1)]
        s = s[m.end() :]
    if not s:
        raise PauliSyntaxError(f"empty Pauli term in {text!r}")
    out = SignedPauli(phase)
    for piece in s.split("*"):
        piece = piece.strip()
        if piece == "I":
            continue
        m = _TERM_RE.fullmatch(piece)
        if not m:
            raise PauliSyntaxError(f"bad Pauli factor {piece!r} in {text!r}")
        out = mul_pauli(out, SignedPauli.single(m.group(1).upper(), int(m.group(2))))
    return out


def _parse_complex(text: str) -> complex:
    m = _COMPLEX_RE.match(text)
    if not m:
        raise PauliSyntaxError(f"bad complex literal {text!r}")
    if m.group(4) is not None:
        return complex(0, float(m.group(4)))
    re_ = float(m.group(1))
    if m.group(3) is None:
        return complex(re_, 0)
    im = float(m.group(3))
    if m.group(2) == "-":
        im = -im
    return complex(re_, im)


def parse_expr(text: str) -> StabilizerExpr:
    """Parse a stabilizer-expression sum like ``(0.5)*I + (0.5)*X1``."""
    s = text.strip()
    if s == "0":
        return StabilizerExpr.zero()
    terms: list[tuple[complex, SignedPauli]] = []
    # split on top-level + and - (minus kept with the term), respecting parens
    pieces: list[str] = []
    depth, cur = 0, ""
    for ch in s:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if depth == 0 and ch == "+":
            if cur.strip():
                pieces.append(cur)
            cur = ""
            continue
        if depth == 0 and ch == "-" and cur.strip() and cur.rstrip()[-1] not in "(*+-eE":
            pieces.append(cur)
            cur = "-"
            continue
        cur += ch
    if cur.strip():
        pieces.append(cur)
    for piece in pieces:
        piece = piece.strip()
        neg = False
        if piece.startswith("-") and piece[1:].lstrip().startswith("("):
            neg, piece = True, piece[1:].lstrip()
        if piece.startswith("("):
            close = piece.index(")")
            coeff = _parse_complex(piece[1:close])
            rest = piece[close + 1 :].strip()
            if rest.startswith("*"):
                rest = rest[1:].strip()
            if not rest:
                raise PauliSyntaxError(f"coefficient without Pauli in {text!r}")
            p = parse_pauli(rest)
            terms.append((-coeff if neg else coeff, p))
        else:
            p = parse_pauli(piece)
            terms.append((1.0, p))
    return StabilizerExpr.from_terms(terms)
