import itertools

import numpy as np
import pytest

from stabverify.assertions import (
    CONTRADICTION,
    FALSE,
    TRUE,
    And,
    ExprA,
    Implies,
    Or,
    assertion_simplify,
    conj,
    conj_tableau,
    expr_assert,
    fixed_space_basis,
    implies,
    parse_assertion,
)
from stabverify.errors import ImaginaryPhaseConjunct
from stabverify.pauli import SignedPauli, StabilizerExpr, expr_to_matrix, parse_expr, parse_pauli

from conftest import make_rand_pauli


def P(text):
    return parse_pauli(text)


class TestConjTableau:
    def test_independent_rows_kept(self):
        t = conj_tableau([P("Z0"), P("Z1"), P("Z2")])
        assert len(t.rows) == 3

    def test_opposite_signs_contradict(self):
        assert conj_tableau([P("Z0"), P("-Z0")]) is CONTRADICTION

    def test_anticommuting_pair_contradicts(self):
        assert conj_tableau([P("X0"), P("Z0")]) is CONTRADICTION

    def test_dependent_row_dropped(self):
        t = conj_tableau([P("Z0*Z1"), P("Z1*Z2"), P("Z0*Z2")])
        assert len(t.rows) == 2

    def test_imaginary_phase_rejected(self):
        with pytest.raises(ImaginaryPhaseConjunct):
            conj_tableau([P("i*Z0")])

    def test_membership_sign_tracking(self):
        t = conj_tableau([P("-Z0"), P("Z1")])
        assert t.implies_pauli(P("-Z0*Z1")) is True
        assert t.implies_pauli(P("Z0*Z1")) is False
        assert t.implies_pauli(P("X0")) is None

    def test_membership_agrees_with_dense_inclusion_two_qubits(self):
        # exhaustive over +-1-signed two-qubit Pauli pairs
        strings = [
            SignedPauli.from_map(dict(zip((0, 1), ls)), 2 * s)
            for ls in itertools.product("IXYZ", repeat=2)
            for s in (0, 1)
            if ls != ("I", "I")
        ]
        for a, b in itertools.product(strings, repeat=2):
            t = conj_tableau([a]) if a else None
            verdict = t.implies_pauli(b)
            basis_a = fixed_space_basis([StabilizerExpr.from_pauli(a)], 2, 4)
            basis_b = fixed_space_basis([StabilizerExpr.from_pauli(b)], 2, 4)
            proj_b = basis_b @ basis_b.conj().T
            included = np.linalg.norm(basis_a - proj_b @ basis_a) <= 1e-9
            if verdict is True:
                assert included, f"{a} => {b}"
            elif included and basis_a.shape[1] > 0:
                # dense inclusion but not a member: only when a is unsatisfiable
                assert verdict is True, f"{a} => {b}"


class TestSimplify:
    def test_true_absorbed(self):
        assert assertion_simplify(conj("Z0", TRUE)) == expr_assert("Z0")

    def test_anticommuting_conjunction_collapses(self):
        assert assertion_simplify(conj("X0", "Z0")) is FALSE

    def test_redundant_generator_dropped(self):
        got = assertion_simplify(conj("Z0*Z1", "Z1*Z2", "Z0*Z2"))
        assert isinstance(got, And) and len(got.items) == 2

    def test_identity_leaf_is_true(self):
        assert assertion_simplify(expr_assert("I")) is TRUE
        assert assertion_simplify(expr_assert("0")) is FALSE

    def test_imaginary_single_pauli_is_false(self):
        assert assertion_simplify(expr_assert("i*Z0")) is FALSE

    def test_or_folding(self):
        assert assertion_simplify(Or((FALSE, expr_assert("Z0")))) == expr_assert("Z0")
        assert assertion_simplify(Or((TRUE, expr_assert("Z0")))) is TRUE


class TestImplies:
    def test_all_z_literals_imply_product(self):
        st = implies(conj("Z0", "Z1", "Z2"), expr_assert("Z0*Z1"))
        assert st.is_proved

    def test_worked_example_implication(self):
        st = implies(conj("Z0*Z1", "Z1"), expr_assert("Z0"))
        assert st.is_proved

    def test_dense_witness_disproves(self):
        st = implies(expr_assert("Z0"), expr_assert("X0"))
        assert st.is_disproved

    def test_sign_conflict_disproved_symbolically(self):
        st = implies(conj("-Z0", "Z1"), expr_assert("Z0*Z1"))
        assert st.is_disproved

    def test_false_implies_anything(self):
        assert implies(FALSE, expr_assert("X0")).is_proved
        assert implies(conj("X0", "Z0"), expr_assert("Y1")).is_proved

    def test_anything_implies_true(self):
        assert implies(expr_assert("Z0"), TRUE).is_proved

    def test_conjunction_on_right(self):
        st = implies(conj("Z0", "Z1", "Z2"), conj("Z0*Z1", "Z1*Z2"))
        assert st.is_proved

    def test_disjunction_intro(self):
        assert implies(expr_assert("Z0"), Or((expr_assert("Z0"), expr_assert("X0")))).is_proved

    def test_case_split_on_left(self):
        a = Or((conj("Z0", "Z1"), conj("-Z0", "-Z1")))
        assert implies(a, expr_assert("Z0*Z1")).is_proved

    def test_affine_combination(self):
        st = implies(conj("Z0", "X1"), expr_assert("(0.5)*Z0 + (0.5)*X1"))
        assert st.is_proved
        st = implies(conj("Z0", "X1"), expr_assert("(0.25)*Z0 + (0.5)*X1"))
        assert not st.is_proved

    def test_sum_term_transport(self):
        # (0.6 Z0 + 0.8 X0) /\ Z2  =>  0.6 Z0 + 0.8 X0 Z2
        a = conj("(0.6)*Z0 + (0.8)*X0", "Z2")
        st = implies(a, expr_assert("(0.6)*Z0 + (0.8)*X0*Z2"))
        assert st.is_proved

    def test_sum_term_transport_with_sign(self):
        a = conj("(0.6)*Z0 + (0.8)*X0", "-Z2")
        st = implies(a, expr_assert("(0.6)*Z0 - (0.8)*X0*Z2"))
        assert st.is_proved

    def test_implication_on_right(self):
        st = implies(expr_assert("Z0"), Implies(expr_assert("Z1"), conj("Z0", "Z1")))
        assert st.is_proved

    def test_reflexive_and_transitive_samples(self, rng):
        for _ in range(20):
            paulis = [make_rand_pauli(rng, 3, phase=False) for _ in range(2)]
            a = conj(*(StabilizerExpr.from_pauli(p) for p in paulis))
            assert implies(a, a).is_proved
        a = conj("Z0", "Z1", "Z2")
        b = conj("Z0*Z1", "Z1*Z2")
        c = expr_assert("Z0*Z2")
        assert implies(a, b).is_proved
        assert implies(b, c).is_proved
        assert implies(a, c).is_proved

    def test_oracle_cap_gives_unknown(self):
        big = conj(StabilizerExpr.from_pauli(SignedPauli.from_map({q: "Z" for q in range(20)})))
        target = expr_assert("(0.5)*Z0 + (0.5)*" + "*".join(f"Z{q}" for q in range(20)))
        st = implies(big, target)
        assert st.is_unknown and "OracleCap" in st.detail


class TestSoundnessSampling:
    def test_proved_implications_hold_on_sampled_states(self, rng):
        cases = [
            (conj("Z0", "Z1", "Z2"), expr_assert("Z0*Z1")),
            (conj("Z0*Z1", "Z1"), expr_assert("Z0")),
            (conj("Z0", "X1"), expr_assert("(0.5)*Z0 + (0.5)*X1")),
            (conj("(0.6)*Z0 + (0.8)*X0", "Z2"), expr_assert("(0.6)*Z0 + (0.8)*X0*Z2")),
        ]
        from stabverify.assertions import _conjunct_exprs

        for a, b in cases:
            assert implies(a, b).is_proved
            n = 3
            basis = fixed_space_basis(_conjunct_exprs(a), n, 8)
            assert basis.shape[1] > 0
            mats = [expr_to_matrix(e, n) for e in _conjunct_exprs(b)]
            for _ in range(25):
                coeff = rng.normal(size=basis.shape[1]) + 1j * rng.normal(size=basis.shape[1])
                v = basis @ coeff
                v /= np.linalg.norm(v)
                for m in mats:
                    assert np.linalg.norm(m @ v - v) <= 1e-9


class TestParseAssertion:
    def test_precedence(self):
        a = parse_assertion("Z0*Z1 /\\ Z1 => Z0")
        assert isinstance(a, Implies)
        assert isinstance(a.lhs, And)

    def test_or_binds_looser_than_and(self):
        a = parse_assertion("Z0 /\\ Z1 \\/ X0")
        assert isinstance(a, Or)

    def test_constants(self):
        assert parse_assertion("TRUE") is TRUE
        assert parse_assertion("FALSE") is FALSE
        assert parse_assertion("0") is FALSE

    def test_sum_leaf(self):
        a = parse_assertion("(0.5)*Z0 + (0.5)*X0")
        assert isinstance(a, ExprA) and len(a.expr.terms) == 2

    def test_grouping(self):
        a = parse_assertion("(Z0 \\/ Z1) /\\ X2")
        assert isinstance(a, And) and isinstance(a.items[0], Or)

    @pytest.mark.parametrize("text", [
        "Z0*Z1 /\\ Z1 => Z0",
        "Z0 \\/ (X0 /\\ X1)",
        "(0.5)*Z0 + (0.5)*X0",
        "TRUE",
        "-Z0*Z1*Z2 /\\ Z0*Z1",
    ])
    def test_print_parse_roundtrip(self, text):
        a = parse_assertion(text)
        assert parse_assertion(str(a)) == a


class TestTableauVsDenseRandomized:
    def test_four_qubit_membership_agrees_with_inclusion(self, rng):
        # randomized conjunction pairs from the 4-qubit Pauli group
        from stabverify.assertions import _conjunct_exprs

        for _ in range(60):
            gens = []
            for _ in range(int(rng.integers(1, 4))):
                p = make_rand_pauli(rng, 4, phase=False)
                if not p.is_identity_letters():
                    gens.append(p)
            if not gens:
                continue
            target = make_rand_pauli(rng, 4, phase=False)
            if target.is_identity_letters():
                continue
            t = conj_tableau(gens)
            if t is CONTRADICTION:
                continue
            a = conj(*(StabilizerExpr.from_pauli(g) for g in gens))
            basis_a = fixed_space_basis(_conjunct_exprs(a), 4, 8)
            basis_b = fixed_space_basis([StabilizerExpr.from_pauli(target)], 4, 8)
            included = (
                np.linalg.norm(basis_a - basis_b @ (basis_b.conj().T @ basis_a)) <= 1e-9
            )
            if t.implies_pauli(target) is True:
                assert included
            if basis_a.shape[1] > 0 and not included:
                assert t.implies_pauli(target) is not True
