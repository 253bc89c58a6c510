"""Exception types shared across the package."""


class StabVerifyError(Exception):
    """Base class for all package errors."""


class PauliSyntaxError(StabVerifyError):
    """Malformed Pauli term / stabilizer expression text."""


class NonCliffordGate(StabVerifyError):
    """A Clifford-only conjugation path was asked to handle a non-Clifford gate."""


class TermExplosion(StabVerifyError):
    """A stabilizer-expression operation exceeded the term budget."""

    def __init__(self, n_terms: int, max_terms: int):
        super().__init__(f"expression grew to {n_terms} terms (budget {max_terms})")
        self.n_terms = n_terms
        self.max_terms = max_terms


class OracleCapExceeded(StabVerifyError):
    """Dense-matrix work requested beyond the configured qubit cap."""


class ProgramSyntaxError(StabVerifyError):
    """Program text failed to parse; carries line/column."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class UndeclaredVariable(StabVerifyError):
    """A statement references a stabilizer variable or qubit not declared."""


class ArityMismatch(StabVerifyError):
    """Gate operand count does not match the gate's arity."""


class MissingDecoder(StabVerifyError):
    """A correct(...) site has no decoder binding and axiomatic mode was not requested."""


class ImaginaryPhaseConjunct(StabVerifyError):
    """A conjunction literal carried a +-i phase; conjuncts must be Hermitian."""


class UndeclaredSVar(StabVerifyError):
    """Execution or verification read a stabilizer variable with no value."""


class NonHermitianMeasurement(StabVerifyError):
    """Measured a stabilizer variable whose value has a +-i phase."""


class UnsatisfiableAssertion(StabVerifyError):
    """No state satisfies the assertion at the requested width."""


class MissingInvariant(StabVerifyError):
    """A while loop has no invariant annotation."""


class UnresolvedSigma(StabVerifyError):
    """The decode-correctness axiom needs sigma values that are unknown."""


class InvalidDistance(StabVerifyError):
    """Repetition-code distance must be an odd integer >= 3."""


class AmbiguousSyndrome(StabVerifyError):
    """Two table entries decode the same syndrome pattern."""
