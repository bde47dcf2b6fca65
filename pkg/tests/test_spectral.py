from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pstforge.errors import InvalidInputError
from pstforge.permutation import (
    Cycle,
    SitePermutation,
    antidiagonal_permutation,
    one_cycle_permutation,
)
from pstforge.spectral import (
    SpectralAssignment,
    assemble_eigensystem,
    basis_phases,
    cycle_spectrum,
    degeneracy_table,
    eigen_branches,
    is_unitary,
    random_assignment,
    random_unitary,
)
from strategies import transfer_permutations


def test_two_cycle_eigenvalues():
    pairs = cycle_spectrum(Cycle((1, 4)), 4)
    assert [p.eigenvalue for p in pairs] == pytest.approx([1, -1])
    np.testing.assert_allclose(pairs[0].vector, np.array([1, 0, 0, 1]) / np.sqrt(2))
    np.testing.assert_allclose(pairs[1].vector, np.array([1, 0, 0, -1]) / np.sqrt(2))


def test_fixed_point_is_basis_vector():
    (pair,) = cycle_spectrum(Cycle((2,)), 3)
    assert pair.phase == 0
    np.testing.assert_allclose(pair.vector, [0, 1, 0])


def test_shift_permutation_eigenvectors():
    n = 3
    P = one_cycle_permutation(n).matrix()
    for pair in cycle_spectrum(Cycle((1, 3, 2)), n):
        lam = pair.eigenvalue
        expected = np.array([lam ** (a - 1) for a in range(1, n + 1)]) / np.sqrt(n)
        np.testing.assert_allclose(pair.vector, expected, atol=1e-15)
        np.testing.assert_allclose(P @ pair.vector, lam * pair.vector, atol=1e-15)


def test_degeneracy_tables():
    assert degeneracy_table(antidiagonal_permutation(4)) == {Fraction(0): 2, Fraction(1, 2): 2}
    assert degeneracy_table(one_cycle_permutation(5)) == {Fraction(j, 5): 1 for j in range(5)}
    p = SitePermutation(4, (4, 2, 3, 1))  # (1 4)(2)(3)
    assert degeneracy_table(p) == {Fraction(0): 3, Fraction(1, 2): 1}
    assert basis_phases(p) == (0, 0, 0, Fraction(1, 2))


def test_branch_order_is_by_phase_then_cycle():
    branches = eigen_branches(SitePermutation(5, (5, 3, 2, 4, 1)))
    phases = [ph for ph, _ in branches]
    assert phases == sorted(phases)
    for _, members in branches:
        idx = [m.cycle_index for m in members]
        assert idx == sorted(idx)


@given(transfer_permutations(), st.integers(0, 2**32 - 1))
@settings(max_examples=60, deadline=None)
def test_eigensystem_is_orthonormal_and_diagonalizes_p(p, seed):
    rng = np.random.default_rng(seed)
    a = random_assignment(p, rng)
    e = assemble_eigensystem(p, a)
    assert e.gram_error() < 1e-12
    P = p.matrix()
    lam = np.exp(2j * np.pi * np.array([float(ph) for ph in e.phases]))
    np.testing.assert_allclose(P @ e.vectors, e.vectors * lam, atol=1e-12)
    np.testing.assert_allclose(np.exp(1j * e.energies * a.tau), lam, atol=1e-12)


@given(transfer_permutations())
def test_total_degeneracy_is_n(p):
    assert sum(degeneracy_table(p).values()) == p.n


def test_energies_are_shifted_phases():
    p = one_cycle_permutation(4)
    e = assemble_eigensystem(p, SpectralAssignment((0, 1, -1, 2), tau=2.0))
    np.testing.assert_allclose(e.energies, 2 * np.pi * np.array([0, 1.25, -0.5, 2.75]) / 2.0)


def test_wrong_shift_count():
    with pytest.raises(InvalidInputError):
        assemble_eigensystem(one_cycle_permutation(4), SpectralAssignment((0, 0, 0)))


def test_non_unitary_mixing_rejected():
    p = antidiagonal_permutation(4)
    bad = SpectralAssignment((0,) * 4, mixing={0: np.array([[1, 1], [0, 1]])})
    with pytest.raises(InvalidInputError, match="not unitary"):
        assemble_eigensystem(p, bad)


def test_mixing_shape_and_index_checked():
    p = antidiagonal_permutation(4)
    with pytest.raises(InvalidInputError):
        assemble_eigensystem(p, SpectralAssignment((0,) * 4, mixing={0: np.eye(3)}))
    with pytest.raises(InvalidInputError):
        assemble_eigensystem(p, SpectralAssignment((0,) * 4, mixing={5: np.eye(2)}))


def test_non_positive_tau():
    with pytest.raises(InvalidInputError):
        SpectralAssignment((0, 0), tau=0.0)


def test_assignment_round_trip(rng):
    p = antidiagonal_permutation(6)
    a = random_assignment(p, rng, tau=0.5)
    b = SpectralAssignment.from_dict(a.to_dict())
    assert b.shifts == a.shifts and b.tau == a.tau
    for k in a.mixing:
        np.testing.assert_array_equal(a.mixing[k], b.mixing[k])


def test_malformed_assignment():
    with pytest.raises(InvalidInputError):
        SpectralAssignment.from_dict({"tau": 1.0})


@pytest.mark.parametrize("d", [1, 2, 3, 5])
def test_random_unitary(d, rng):
    assert is_unitary(random_unitary(d, rng))
    assert not is_unitary(np.ones((d, d + 1)))
