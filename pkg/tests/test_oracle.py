import numpy as np
import pytest

from stabverify.assertions import FALSE, conj, expr_assert, parse_assertion
from stabverify.errors import UndeclaredSVar, UnsatisfiableAssertion
from stabverify.lang import parse_program
from stabverify.oracle import (
    Configuration,
    DensityMatrix,
    QState,
    SigmaState,
    basis_vector,
    branch_sum,
    denote_program,
    run_program,
    sample_pre_states,
    satisfies,
    step,
)
from stabverify.pauli import parse_pauli

SYNDROME_PROGRAM = """\
name: syndrome_experiment
qubits: 4
svars: s0

s0 := Z0*Z1*Z2*Z3
if M[s0; q3 q2 q1 q0] then
  skip
else
  q0 := X q0
  s0 := -s0
end
"""


def pure(n, bits):
    return QState(n, basis_vector(n, bits))


class TestStep:
    def test_skip(self):
        c = Configuration(parse_program("qubits: 1\nskip").body, pure(1, "0"), SigmaState())
        (succ,) = step(c)
        assert succ.remaining is None
        assert succ.state.mass() == pytest.approx(1.0)

    def test_sassign_updates_sigma(self):
        p = parse_program("qubits: 4\nsvars: s0\ns0 := Z0*Z1*Z2*Z3")
        c = Configuration(p.body, pure(4, "0000"), SigmaState())
        (succ,) = step(c)
        assert succ.sigma["s0"] == parse_pauli("Z0*Z1*Z2*Z3")

    def test_if_on_minus_eigenstate_takes_else_and_flips_sigma(self):
        p = parse_program(SYNDROME_PROGRAM)
        sigma = SigmaState({"s0": parse_pauli("Z0*Z1*Z2*Z3")})
        ifm = p.body.stmts[1]
        c = Configuration(ifm, pure(4, "0001"), sigma)
        succs = step(c)
        assert len(succs) == 1  # +1 branch has zero mass
        (succ,) = succs
        assert succ.sigma["s0"] == parse_pauli("-Z0*Z1*Z2*Z3")
        assert succ.weight == pytest.approx(1.0)

    def test_measurement_splits_mass(self):
        p = parse_program("qubits: 1\nsvars: s\nif M[s; q0] then skip else skip end")
        plus = QState(1, np.array([1, 1]) / np.sqrt(2))
        c = Configuration(p.body, plus, SigmaState({"s": parse_pauli("Z0")}))
        succs = step(c)
        assert len(succs) == 2
        assert sorted(s.weight for s in succs) == pytest.approx([0.5, 0.5])

    def test_undeclared_svar(self):
        p = parse_program("qubits: 1\nsvars: s\nif M[s; q0] then skip else skip end")
        c = Configuration(p.body, pure(1, "0"), SigmaState())
        with pytest.raises(UndeclaredSVar):
            step(c)


class TestRunProgram:
    def test_error_correction_experiment(self):
        # noisy |0001> input: the -1 branch corrects q0 and restores the sign
        p = parse_program(SYNDROME_PROGRAM)
        res = run_program(p, (pure(4, "0001"), SigmaState()))
        assert len(res.branches) == 1
        state, sigma = res.branches[0]
        want = np.outer(basis_vector(4, "0000"), basis_vector(4, "0000").conj())
        assert np.allclose(state.density(), want, atol=1e-12)
        assert sigma["s0"] == parse_pauli("Z0*Z1*Z2*Z3")

    def test_skip_keeps_input(self):
        p = parse_program("qubits: 2\nskip")
        v = np.array([0.5, 0.5, 0.5, 0.5], dtype=complex)
        res = run_program(p, (QState(2, v), SigmaState()))
        assert len(res.branches) == 1
        assert np.allclose(res.branches[0][0].data, v)

    def test_noisy_x_gate_trajectory(self):
        # rep-3 logical X with an X error on q1, then the lookup decoder:
        # |000> ends at |111> with both sigma values positive
        text = """\
name: noisy_x
qubits: 3
svars: s0 s1

s0 := I
s1 := I
q2 q1 q0 := X2*X1*X0 q2 q1 q0
q1 := X q1
s0 := Z0*Z1
s1 := Z1*Z2
if M[s0; q0 q1] then
  if M[s1; q1 q2] then
    skip
  else
    q2 := X q2
    s1 := -s1
  end
else
  if M[s1; q1 q2] then
    q0 := X q0
    s0 := -s0
  else
    q1 := X q1
    s0 := -s0
    s1 := -s1
  end
end
"""
        p = parse_program(text)
        res = run_program(p, (pure(3, "000"), SigmaState()))
        assert len(res.branches) == 1
        state, sigma = res.branches[0]
        assert np.allclose(state.density(), DensityMatrix.from_basis_state(3, "111").data, atol=1e-12)
        assert sigma["s0"] == parse_pauli("Z0*Z1")
        assert sigma["s1"] == parse_pauli("Z1*Z2")

    def test_trace_mass_conservation(self, rng):
        p = parse_program(
            "qubits: 2\nsvars: s\n"
            "s := Z0\nif M[s; q0] then q1 := X q1 else skip end\ns := Z1"
        )
        g = rng.normal(size=4) + 1j * rng.normal(size=4)
        g /= np.linalg.norm(g)
        res = run_program(p, (QState(2, g), SigmaState()))
        assert res.total_mass() == pytest.approx(1.0, abs=1e-10)
        assert not res.residual

    def test_while_loop_unrolls(self):
        # while on a turned-off variable measures +1 forever; body flips it off
        text = """\
name: scrub
qubits: 1
svars: s

s := Z0
while M[s; q0] do
  q0 := X q0
done
"""
        p = parse_program(text)
        res = run_program(p, (pure(1, "0"), SigmaState()), unroll_cap=8)
        # |0>: measure +1, body flips to |1>, next measure -1 exits (sign flip)
        assert len(res.branches) == 1
        state, sigma = res.branches[0]
        assert sigma["s"] == parse_pauli("-Z0")
        assert np.allclose(state.density(), DensityMatrix.from_basis_state(1, "1").data)

    def test_while_residual_reported(self):
        # |+> splits forever: mass halves every iteration until the cap
        text = "name: loop\nqubits: 1\nsvars: s\ns := Z0\nwhile M[s; q0] do q0 := H q0 done"
        p = parse_program(text)
        plus = QState(1, np.array([1, 1]) / np.sqrt(2))
        res = run_program(p, (plus, SigmaState()), unroll_cap=5)
        assert res.residual
        assert res.total_mass() == pytest.approx(1.0, abs=1e-9)

    def test_trace_log(self):
        p = parse_program(SYNDROME_PROGRAM)
        res = run_program(p, (pure(4, "0001"), SigmaState()), want_trace=True)
        rules = [e["rule"] for e in res.trace]
        assert rules[0] == "Assignment"
        assert "If -1" in rules
        assert all("rho_digest" in e for e in res.trace)


class TestDenotational:
    @pytest.mark.parametrize("bits", ["0000", "0001", "0011"])
    def test_agrees_with_operational_on_syndrome_program(self, bits):
        p = parse_program(SYNDROME_PROGRAM)
        op = run_program(p, (pure(4, bits), SigmaState()))
        den = denote_program(p, (pure(4, bits), SigmaState()))
        assert np.allclose(branch_sum(op, 4), branch_sum(den, 4), atol=1e-9)

    def test_agrees_on_superposition_with_measurement(self, rng):
        p = parse_program(
            "qubits: 2\nsvars: s\ns := Z0\n"
            "if M[s; q0] then q1 := X q1 else q0 := X q0; s := -s end"
        )
        g = rng.normal(size=4) + 1j * rng.normal(size=4)
        g /= np.linalg.norm(g)
        op = run_program(p, (QState(2, g), SigmaState()))
        den = denote_program(p, (QState(2, g), SigmaState()))
        assert np.allclose(branch_sum(op, 2), branch_sum(den, 2), atol=1e-9)
        # sigma multisets agree as well
        assert sorted(s.pretty() for _, s in op.branches) == sorted(
            s.pretty() for _, s in den.branches
        )


class TestSatisfies:
    def test_ground_state_satisfies_z(self):
        assert satisfies((pure(1, "0"), SigmaState()), expr_assert("Z0"))

    def test_ground_state_fails_x(self):
        assert not satisfies((pure(1, "0"), SigmaState()), expr_assert("X0"))

    def test_tilted_eigenstate(self):
        psi = QState(1, np.array([np.sqrt(3) / 2, 0.5], dtype=complex))
        a = expr_assert(f"({0.5!r})*Z0 + ({float(np.sqrt(3)/2)!r})*X0")
        assert satisfies((psi, SigmaState()), a)

    def test_sigma_commutation_required(self):
        sigma = SigmaState({"s": parse_pauli("X0")})
        assert not satisfies((pure(1, "0"), sigma), expr_assert("Z0"))

    def test_boolean_structure(self):
        state = (pure(2, "00"), SigmaState())
        assert satisfies(state, conj("Z0", "Z1"))
        assert satisfies(state, parse_assertion("Z0 \\/ X0"))
        assert not satisfies(state, parse_assertion("Z0 /\\ X0"))


class TestSamplePreStates:
    def test_z0_samples_are_ground_state(self):
        samples = sample_pre_states(expr_assert("Z0"), 1, 5, seed=1)
        for st, _ in samples:
            assert np.allclose(st.density(), DensityMatrix.from_basis_state(1, "0").data, atol=1e-9)

    def test_zz_samples_live_in_even_parity_plane(self):
        samples = sample_pre_states(expr_assert("Z0*Z1"), 2, 10, seed=2)
        for st, _ in samples:
            assert satisfies((st, SigmaState()), expr_assert("Z0*Z1"), tol=1e-9)

    def test_false_unsatisfiable(self):
        with pytest.raises(UnsatisfiableAssertion):
            sample_pre_states(FALSE, 1, 1, seed=0)

    def test_sigma_passed_through(self):
        sigma = SigmaState({"s0": parse_pauli("Z0*Z1")})
        samples = sample_pre_states(expr_assert("Z0"), 2, 3, seed=3, sigma=sigma)
        assert all(sg["s0"] == parse_pauli("Z0*Z1") for _, sg in samples)


class TestSemanticsDiscipline:
    def test_minus_branch_sigma_is_negation_of_plus_branch(self, rng):
        p = parse_program(
            "qubits: 2\nsvars: s t\ns := Z0\nt := X1\n"
            "if M[s; q0] then skip else skip end"
        )
        g = rng.normal(size=4) + 1j * rng.normal(size=4)
        g /= np.linalg.norm(g)
        res = run_program(p, (QState(2, g), SigmaState()))
        assert len(res.branches) == 2
        sigmas = sorted(((str(s["s"]), s["t"]) for _, s in res.branches))
        assert sigmas[0][0] == "-Z0" and sigmas[1][0] == "Z0"
        assert sigmas[0][1] == sigmas[1][1] == parse_pauli("X1")

    def test_repeated_measurement_is_idempotent(self, rng):
        p = parse_program(
            "qubits: 1\nsvars: s\ns := Z0\n"
            "if M[s; q0] then skip else skip end\n"
            "if M[s; q0] then skip else skip end"
        )
        g = rng.normal(size=2) + 1j * rng.normal(size=2)
        g /= np.linalg.norm(g)
        res = run_program(p, (QState(1, g), SigmaState()))
        # one branch per first-round outcome; the second round never splits
        assert len(res.branches) == 2
        assert res.total_mass() == pytest.approx(1.0, abs=1e-10)
