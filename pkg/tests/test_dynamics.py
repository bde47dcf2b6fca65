import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.linalg import expm

from pstforge.dynamics import (
    PRESETS,
    concurrence,
    evolve,
    occupation_trace,
    pairwise_concurrence_sum,
    preset_assignment,
    preset_hamiltonian,
    preset_info,
    preset_permutation,
    tangle_bound,
    total_tangle,
)
from pstforge.errors import InvalidInputError
from pstforge.hamiltonian import PstHamiltonian, build_hamiltonian, verify_pst
from pstforge.permutation import make_transfer_permutation
from pstforge.spectral import SpectralAssignment, assemble_eigensystem


@pytest.fixture(scope="module")
def swap():
    p = make_transfer_permutation(2, [])
    return build_hamiltonian(assemble_eigensystem(p, SpectralAssignment((0, 0))), p)


@pytest.fixture(scope="module")
def traces():
    return {name: occupation_trace(preset_hamiltonian(name), 1, 1, 500) for name in PRESETS}


def test_evolve_at_zero_is_identity(swap):
    np.testing.assert_allclose(evolve(swap, 1, 0), [1, 0], atol=1e-15)


def test_evolve_matches_expm(rng):
    h = preset_hamiltonian("descending", tau=0.8)
    m = 0.37
    expected = expm(1j * h.matrix * h.tau * m)[:, 2]
    np.testing.assert_allclose(evolve(h, 3, m), expected, atol=1e-12)


def test_evolve_rejects_negative_time(swap):
    with pytest.raises(InvalidInputError):
        evolve(swap, 1, -0.5)
    with pytest.raises(InvalidInputError):
        evolve(swap, 3, 0.5)


def test_swap_half_period(swap):
    trace = occupation_trace(swap, 1, 1, 2)
    np.testing.assert_allclose(trace.probabilities[1], [0.5, 0.5], atol=1e-14)
    np.testing.assert_allclose(trace.probabilities[2], [0, 1], atol=1e-14)
    assert concurrence(trace, 1, 2)[1] == pytest.approx(1.0)
    # closed form for the 2x2 case: P_1 = cos^2(pi m / 2)
    fine = occupation_trace(swap, 1, 1, 40)
    np.testing.assert_allclose(fine.site(1), np.cos(np.pi * fine.times / 2) ** 2, atol=1e-13)


def test_trace_shape():
    trace = occupation_trace(preset_hamiltonian("descending"), 1, 2, 10)
    assert trace.probabilities.shape == (21, 11)
    np.testing.assert_allclose(trace.times, np.arange(21) / 10)


def test_concurrence_examples(swap):
    trace = occupation_trace(swap, 1, 1, 4)
    c = concurrence(trace, 1, 2)
    assert c[0] == pytest.approx(0, abs=1e-12)
    with pytest.raises(InvalidInputError):
        concurrence(trace, 1, 1)
    with pytest.raises(InvalidInputError):
        concurrence(trace, 1, 5)


def test_tangle_examples():
    assert total_tangle(np.eye(11)[4]) == 0
    assert total_tangle(np.full(11, 1 / 11)) == pytest.approx(20 / 11)
    assert total_tangle([0.5, 0.5, 0, 0]) == pytest.approx(1.0)
    assert tangle_bound(11) == pytest.approx(20 / 11)
    with pytest.raises(InvalidInputError):
        total_tangle([0.5, 0.6])


@given(st.lists(st.floats(0, 1), min_size=2, max_size=12).filter(lambda v: sum(v) > 1e-3))
@settings(max_examples=200)
def test_tangle_bound_and_concurrence_identity(raw):
    p = np.array(raw) / np.sum(raw)
    T = total_tangle(p)
    assert 0 <= T <= tangle_bound(len(p)) + 1e-12
    assert abs(pairwise_concurrence_sum(p) - T) < 1e-12
    assert abs(T - 2 * (1 - np.sum(p**2))) < 1e-12


def test_preset_shift_vectors():
    assert preset_info("descending").shifts == (11, 10, 9, 8, 7, 6, 5, 4, 3, 2, 1)
    assert preset_info("symmetric_dip").shifts == (6, 5, 4, 3, 2, 1, 0, 1, 2, 3, 4)
    assert preset_info("interrupted").shifts == (1, 16, 0, 13, 0, 10, 0, 7, 0, 4, 0)
    assert preset_info("interrupted").dropped == ((12, 0),)
    assert preset_info("alternating").shifts == (5, 0, 0, 5, 5, 0, 0, 5, 5, 0, 0)
    assert preset_info("alternating").dropped == ((12, 5),)
    assert preset_assignment("descending", 2.0).tau == 2.0
    with pytest.raises(InvalidInputError):
        preset_info("nope")


@pytest.mark.parametrize("name", PRESETS)
def test_presets_transfer(name):
    h = preset_hamiltonian(name)
    assert verify_pst(h, preset_permutation(), 1e-9).passed


@pytest.mark.parametrize("name", PRESETS)
def test_preset_invariants(name, traces):
    t = traces[name]
    assert t.probabilities.shape == (501, 11)
    assert np.abs(t.probabilities.sum(axis=1) - 1).max() < 1e-12
    assert t.site(1)[0] == pytest.approx(1, abs=1e-12)
    assert t.site(11)[-1] == pytest.approx(1, abs=1e-9)
    assert abs(t.tangle[0]) < 1e-9 and abs(t.tangle[-1]) < 1e-9
    assert t.tangle.max() <= 20 / 11 + 1e-9
    c2 = sum(concurrence(t, i, j) ** 2 for i in range(1, 12) for j in range(i + 1, 12))
    assert np.abs(c2 - t.tangle).max() < 1e-12


def test_descending_packet_moves_forward(traces):
    peaks = traces["descending"].probabilities.argmax(axis=1)
    assert np.all(np.diff(peaks) >= 0)
    assert peaks[0] == 0 and peaks[-1] == 10


def test_interrupted_preset_nears_tangle_bound(traces):
    assert traces["interrupted"].tangle.max() > 1.7


def test_arbitrary_hamiltonian_is_unitary(rng):
    A = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
    h = PstHamiltonian(5, 1.0, A + A.conj().T)
    for m in (0.1, 0.5, 2.3):
        assert abs(np.linalg.norm(evolve(h, 2, m)) - 1) < 1e-12
