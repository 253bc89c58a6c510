"""Pauli algebra unit tests; dense matrices are the independent oracle."""

import numpy as np
import pytest

from stabverify.errors import NonCliffordGate, OracleCapExceeded, TermExplosion
from stabverify.pauli import (
    GateApp,
    SignedPauli,
    StabilizerExpr,
    commutes,
    conjugate_by_gate,
    expr_conjugate,
    expr_mul,
    expr_to_matrix,
    gate_to_expr,
    mul_pauli,
    parse_expr,
    parse_pauli,
    pauli_expansion,
    pauli_to_matrix,
)

from conftest import make_rand_expr, make_rand_pauli

X0 = SignedPauli.single("X", 0)
Y0 = SignedPauli.single("Y", 0)
Z0 = SignedPauli.single("Z", 0)
I = SignedPauli.identity()


class TestMulPauli:
    def test_cyclic_products(self):
        assert mul_pauli(X0, Y0) == parse_pauli("i*Z0")
        assert mul_pauli(Y0, SignedPauli.single("Z", 0)) == parse_pauli("i*X0")
        assert mul_pauli(Z0, X0) == parse_pauli("i*Y0")
        assert mul_pauli(Y0, X0) == parse_pauli("-i*Z0")

    def test_overlapping_strings_cancel(self):
        assert mul_pauli(parse_pauli("Z0*Z1"), parse_pauli("Z1*Z2")) == parse_pauli("Z0*Z2")

    def test_identity(self):
        p = parse_pauli("-Z0*Z1*Z2")
        assert mul_pauli(I, p) == p
        assert mul_pauli(p, I) == p

    def test_square_of_hermitian_is_identity(self):
        for text in ("X0", "-Z0*Z1", "Y1*X3"):
            p = parse_pauli(text)
            sq = mul_pauli(p, p)
            assert sq.is_identity_letters()
            assert sq.phase_exp == 0


class TestCommutes:
    def test_single_qubit_anticommute(self):
        assert not commutes(X0, Z0)

    def test_even_parity_commutes(self):
        assert commutes(parse_pauli("X0*X1"), parse_pauli("Z0*Z1"))

    def test_shared_z_pair(self):
        # brute-force 8x8 check: [Z0Z1, Z1Z2] = 0 (frozen result)
        a, b = parse_pauli("Z0*Z1"), parse_pauli("Z1*Z2")
        assert commutes(a, b)
        ma, mb = pauli_to_matrix(a, 3), pauli_to_matrix(b, 3)
        assert np.allclose(ma @ mb - mb @ ma, 0)


class TestConjugateByGate:
    def test_x_chain_flips_logical_z(self):
        chain = [GateApp("X", (q,)) for q in (0, 1, 2)]
        p = parse_pauli("Z0*Z1*Z2")
        for g in chain:
            p = conjugate_by_gate(g, p)
        assert p == parse_pauli("-Z0*Z1*Z2")

    def test_cnot_extends_logical_x(self):
        got = conjugate_by_gate(GateApp("CNOT", (0, 3)), parse_pauli("X0*X1*X2"))
        assert got == parse_pauli("X0*X1*X2*X3")

    def test_h_swaps_x_z(self):
        assert conjugate_by_gate(GateApp("H", (0,)), Z0) == X0
        assert conjugate_by_gate(GateApp("H", (0,)), X0) == Z0
        assert conjugate_by_gate(GateApp("H", (0,)), Y0) == Y0.negate()

    def test_t_rejected(self):
        with pytest.raises(NonCliffordGate):
            conjugate_by_gate(GateApp("T", (0,)), X0)

    @pytest.mark.parametrize("gate,ops", [
        ("X", (0,)), ("Y", (0,)), ("Z", (1,)), ("H", (1,)), ("S", (0,)),
        ("CNOT", (0, 1)), ("CNOT", (1, 0)), ("CZ", (0, 1)),
    ])
    def test_matches_dense_conjugation(self, gate, ops, rng):
        g = GateApp(gate, ops)
        u = expr_to_matrix(gate_to_expr(g), 2)
        assert np.allclose(u @ u.conj().T, np.eye(4), atol=1e-12)
        for _ in range(25):
            p = make_rand_pauli(rng, 2)
            got = expr_to_matrix(StabilizerExpr.from_pauli(conjugate_by_gate(g, p)), 2)
            want = u @ pauli_to_matrix(p, 2) @ u.conj().T
            assert np.allclose(got, want, atol=1e-12)


class TestExprMul:
    def test_projector_idempotent(self):
        proj = parse_expr("(0.5)*I + (0.5)*Z0")
        assert expr_mul(proj, proj) == proj

    def test_worked_example_product(self):
        got = expr_mul(parse_expr("Z0*Z1"), parse_expr("Z1"))
        assert got == parse_expr("Z0")

    def test_identity_case(self):
        e = parse_expr("(0.6)*Z0*Z1*Z2 + (0.8)*X0*X1*X2")
        assert expr_mul(e, StabilizerExpr.identity()) == e

    def test_term_explosion(self):
        big = StabilizerExpr.from_terms(
            [(1.0, SignedPauli.single("X", q)) for q in range(8)]
        )
        with pytest.raises(TermExplosion):
            expr_mul(big, big, max_terms=16)


class TestExprConjugate:
    def test_cnot_pauli_sum_on_target_z(self):
        # CNOT_ab = 1/2 (I + X_b + Z_a - Z_a X_b), conjugating Z_b -> Z_a Z_b
        cnot = gate_to_expr(GateApp("CNOT", (0, 1)))
        got = expr_conjugate(cnot, parse_expr("Z1"))
        assert got == parse_expr("Z0*Z1")

    def test_t_on_x(self):
        got = expr_conjugate(GateApp("T", (0,)), parse_expr("X0"))
        r = float(1 / np.sqrt(2))
        assert got == parse_expr(f"({r!r})*X0 + ({r!r})*Y0")

    def test_identity_fixed(self):
        for u in (GateApp("T", (0,)), GateApp("H", (0,)), gate_to_expr(GateApp("S", (1,)))):
            assert expr_conjugate(u, StabilizerExpr.identity()) == StabilizerExpr.identity()

    def test_t_chain_term_growth(self):
        # T on each of 8 qubits doubles the X-string's term count per gate
        a = StabilizerExpr.from_pauli(SignedPauli.from_map({q: "X" for q in range(8)}))
        for q in range(8):
            a = expr_conjugate(GateApp("T", (q,)), a)
        assert len(a.terms) == 2**8


class TestExprToMatrix:
    def test_z_diag(self):
        assert np.allclose(expr_to_matrix(parse_expr("Z0"), 1), np.diag([1, -1]))

    def test_projector_diag(self):
        assert np.allclose(expr_to_matrix(parse_expr("(0.5)*I + (0.5)*Z0"), 1), np.diag([1, 0]))

    def test_two_qubit_kron(self):
        assert np.allclose(expr_to_matrix(parse_expr("Z0*Z1"), 2), np.diag([1, -1, -1, 1]))

    def test_cap(self):
        with pytest.raises(OracleCapExceeded):
            expr_to_matrix(parse_expr("Z0"), 13)


class TestPauliExpansion:
    def test_reconstructs_random_hermitian(self, rng):
        m = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        m = m + m.conj().T
        expansion = pauli_expansion(m)
        assert all(abs(c.imag) < 1e-12 for c, _ in expansion.terms)
        assert np.allclose(expr_to_matrix(expansion, 2), m, atol=1e-12)


class TestParsing:
    @pytest.mark.parametrize("text", [
        "X0", "-Z0*Z1*Z2", "i*Y3", "-i*X0*Z2", "I", "-I",
        "(0.5)*I + (0.5)*X1",
        "(0.5-0.5i)*Z0 + X1 - Z2",
        "(0.7071067811865475)*X0 + (0.7071067811865475)*Y0",
    ])
    def test_roundtrip(self, text):
        e = parse_expr(text)
        assert parse_expr(str(e)) == e

    def test_pauli_product_syntax(self):
        assert parse_pauli("Z0*Z0") == I
        assert parse_pauli("X0*Z0") == parse_pauli("-i*Y0")


class TestEigenstateExample:
    def test_tilted_state_is_plus_one_eigenstate(self):
        # (sqrt(3)/2)|0> + (1/2)|1> is fixed by (1/2) Z + (sqrt(3)/2) X
        psi = np.array([np.sqrt(3) / 2, 0.5])
        s_e = parse_expr(f"({0.5!r})*Z0 + ({float(np.sqrt(3)/2)!r})*X0")
        assert np.allclose(expr_to_matrix(s_e, 1) @ psi, psi, atol=1e-12)
