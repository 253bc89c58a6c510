import numpy as np
import pytest

from stabverify.pauli import SignedPauli, StabilizerExpr


def make_rand_pauli(rng: np.random.Generator, n_qubits: int, phase=True) -> SignedPauli:
    letters = {}
    for q in range(n_qubits):
        l = rng.choice(["I", "X", "Y", "Z"])
        if l != "I":
            letters[q] = str(l)
    k = int(rng.integers(0, 4)) if phase else 2 * int(rng.integers(0, 2))
    return SignedPauli.from_map(letters, k)


def make_rand_expr(rng: np.random.Generator, n_qubits: int, n_terms: int) -> StabilizerExpr:
    terms = []
    for _ in range(n_terms):
        c = complex(rng.normal(), rng.normal())
        terms.append((c, make_rand_pauli(rng, n_qubits)))
    return StabilizerExpr.from_terms(terms)


@pytest.fixture
def rng():
    return np.random.default_rng(0)
