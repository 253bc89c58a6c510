"""Randomized algebraic law checks; dense matrices are the oracle.

The checker functions return the number of cases exercised so the
acceptance suite can run them at full volume (10k total) while the
regular suite keeps counts small.
"""

import numpy as np

from stabverify.pauli import (
    GateApp,
    SignedPauli,
    StabilizerExpr,
    apply_pauli,
    commutes,
    conjugate_by_gate,
    expr_to_matrix,
    gate_to_expr,
    mul_pauli,
    pauli_expansion,
    pauli_to_matrix,
)

from conftest import make_rand_pauli

ATOL = 1e-12


def check_group_laws(rng, count: int) -> int:
    identity = SignedPauli.identity()
    for _ in range(count):
        a = make_rand_pauli(rng, 4)
        b = make_rand_pauli(rng, 4)
        c = make_rand_pauli(rng, 4)
        assert mul_pauli(mul_pauli(a, b), c) == mul_pauli(a, mul_pauli(b, c))
        assert mul_pauli(a, identity) == a
        assert mul_pauli(identity, a) == a
        assert mul_pauli(a, a.dagger()) == identity
    return count


def check_phase_consistency(rng, count: int) -> int:
    for _ in range(count):
        n = int(rng.integers(1, 6))
        a = make_rand_pauli(rng, n)
        b = make_rand_pauli(rng, n)
        left = pauli_to_matrix(mul_pauli(a, b), n)
        right = pauli_to_matrix(a, n) @ pauli_to_matrix(b, n)
        assert np.allclose(left, right, atol=ATOL)
    return count


def check_commutation_vs_matrix(rng, count: int) -> int:
    for _ in range(count):
        n = int(rng.integers(1, 5))
        a = make_rand_pauli(rng, n)
        b = make_rand_pauli(rng, n)
        ma, mb = pauli_to_matrix(a, n), pauli_to_matrix(b, n)
        comm_norm = np.linalg.norm(ma @ mb - mb @ ma)
        assert commutes(a, b) == (comm_norm <= ATOL)
    return count


_CLIFFORDS = [
    GateApp("X", (0,)), GateApp("Y", (0,)), GateApp("Z", (1,)),
    GateApp("H", (0,)), GateApp("H", (1,)), GateApp("S", (0,)), GateApp("S", (2,)),
    GateApp("CNOT", (0, 1)), GateApp("CNOT", (2, 0)), GateApp("CZ", (1, 2)),
]


def check_clifford_conjugation_vs_matrix(rng, count: int) -> int:
    n = 3
    mats = {g: expr_to_matrix(gate_to_expr(g), n) for g in _CLIFFORDS}
    for _ in range(count):
        g = _CLIFFORDS[int(rng.integers(0, len(_CLIFFORDS)))]
        p = make_rand_pauli(rng, n)
        got = pauli_to_matrix(conjugate_by_gate(g, p), n)
        u = mats[g]
        assert np.allclose(got, u @ pauli_to_matrix(p, n) @ u.conj().T, atol=ATOL)
    return count


def check_pauli_expansion_roundtrip(rng, count: int) -> int:
    for _ in range(count):
        m = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        m = m + m.conj().T
        e = pauli_expansion(m)
        assert np.allclose(expr_to_matrix(e, 2), m, atol=ATOL)
        assert all(abs(c.imag) <= ATOL for c, _ in e.terms)
    return count


def check_apply_pauli_vs_matrix(rng, count: int) -> int:
    for _ in range(count):
        n = int(rng.integers(1, 5))
        p = make_rand_pauli(rng, n)
        v = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
        assert np.allclose(apply_pauli(p, v, n), pauli_to_matrix(p, n) @ v, atol=1e-10)
    return count


def run_algebra_checks(seed: int, per_family: int) -> int:
    """All families at per_family cases each; returns the total count."""
    rng = np.random.default_rng(seed)
    total = 0
    total += check_group_laws(rng, per_family)
    total += check_phase_consistency(rng, per_family)
    total += check_commutation_vs_matrix(rng, per_family)
    total += check_clifford_conjugation_vs_matrix(rng, per_family)
    total += check_pauli_expansion_roundtrip(rng, per_family)
    return total


class TestAlgebraProperties:
    def test_group_laws(self, rng):
        check_group_laws(rng, 200)

    def test_phase_consistency(self, rng):
        check_phase_consistency(rng, 100)

    def test_commutation_vs_matrix(self, rng):
        check_commutation_vs_matrix(rng, 100)

    def test_clifford_conjugation_vs_matrix(self, rng):
        check_clifford_conjugation_vs_matrix(rng, 100)

    def test_pauli_expansion_roundtrip(self, rng):
        check_pauli_expansion_roundtrip(rng, 25)

    def test_apply_pauli_vs_matrix(self, rng):
        check_apply_pauli_vs_matrix(rng, 100)


class TestProjectorAlgebra:
    def test_measurement_resolution_of_identity(self, rng):
        # for any a commuting with s: a*(I+s)/2 + a*(I-s)/2 == a
        from stabverify.pauli import expr_mul

        for _ in range(50):
            s = make_rand_pauli(rng, 3, phase=False)
            if s.is_identity_letters():
                continue
            terms = [make_rand_pauli(rng, 3) for _ in range(2)]
            a = StabilizerExpr.from_terms(
                [(complex(rng.normal(), rng.normal()), t) for t in terms]
            )
            s_expr = StabilizerExpr.from_pauli(s)
            plus = StabilizerExpr.identity() + s_expr
            minus = StabilizerExpr.identity() + s_expr.scale(-1)
            total = expr_mul(a, plus.scale(0.5)) + expr_mul(a, minus.scale(0.5))
            assert total == a
