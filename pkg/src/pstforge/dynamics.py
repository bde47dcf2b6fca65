"""Single-excitation wave-packet dynamics and entanglement measures.

Evolution time is measured in transfer periods: ``m = 1`` means one full
application ``exp(i H tau)``; fractional ``m`` samples in between.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import InvalidInputError
from .hamiltonian import PstHamiltonian, build_hamiltonian
from .permutation import SitePermutation, one_cycle_permutation
from .spectral import SpectralAssignment, assemble_eigensystem

NORMALIZATION_TOL = 1e-9
PRESET_SITES = 11
PRESETS = ("descending", "interrupted", "symmetric_dip", "alternating")


@dataclass(frozen=True)
class DynamicsTrace:
    times: np.ndarray
    probabilities: np.ndarray  # (samples, n)
    tangle: np.ndarray
    initial_site: int
    hamiltonian: Optional[PstHamiltonian] = field(default=None, repr=False)

    @property
    def n(self) -> int:
        return self.probabilities.shape[1]

    def site(self, f: int) -> np.ndarray:
        """Occupation probability of site ``f`` (1-indexed) at every sample."""
        return self.probabilities[:, f - 1]


@dataclass(frozen=True)
class PresetInfo:
    name: str
    shifts: tuple[int, ...]
    dropped: tuple[tuple[int, int], ...]  # (raw eigenvalue index, shift) lost to a clash

    def to_dict(self) -> dict:
        return {
            "preset": self.name,
            "n": PRESET_SITES,
            "shifts": list(self.shifts),
            "index_reduction": f"mod {PRESET_SITES}, first assignment wins",
            "dropped_assignments": [list(d) for d in self.dropped],
        }


def _check_site(h: PstHamiltonian, i: int) -> None:
    if not 1 <= i <= h.n:
        raise InvalidInputError(f"site {i} outside 1..{h.n}")


def evolve(h: PstHamiltonian, i: int, m: float) -> np.ndarray:
    """Amplitudes of ``exp(i H tau m) |i>`` on every site."""
    _check_site(h, i)
    if m < 0:
        raise InvalidInputError(f"m must be non-negative, got {m}")
    w, V = h.spectrum()
    return V @ (np.exp(1j * w * h.tau * m) * V[i - 1].conj())


def occupation_trace(
    h: PstHamiltonian, i: int, m_max: float = 1, substeps: int = 500
) -> DynamicsTrace:
    """Probabilities ``|<f|U(m)|i>|^2`` for ``m = 0, 1/substeps, ..., m_max``."""
    _check_site(h, i)
    if substeps < 1:
        raise InvalidInputError("substeps must be at least 1")
    count = int(round(m_max * substeps))
    times = np.arange(count + 1) / substeps
    w, V = h.spectrum()
    weights = V[i - 1].conj()
    phases = np.exp(1j * np.outer(times, w) * h.tau)
    amps = (phases * weights) @ V.T
    probs = np.abs(amps) ** 2
    tangle = np.array([total_tangle(p) for p in probs])
    return DynamicsTrace(times, probs, tangle, i, h)


def concurrence(trace: DynamicsTrace, i: int, j: int) -> np.ndarray:
    """Pairwise concurrence ``2 sqrt(P_i P_j)`` at every sample."""
    if i == j:
        raise InvalidInputError("concurrence needs two distinct sites")
    for s in (i, j):
        if not 1 <= s <= trace.n:
            raise InvalidInputError(f"site {s} outside 1..{trace.n}")
    return 2 * np.sqrt(trace.site(i) * trace.site(j))


def total_tangle(p) -> float:
    p = np.asarray(p, dtype=float)
    if abs(p.sum() - 1) > NORMALIZATION_TOL:
        raise InvalidInputError(f"probabilities sum to {p.sum()!r}, not 1")
    # 2(1 - sum p^2) rewritten as 4 * sum_{i<j} p_i p_j: identical for normalized p
    # and free of the cancellation that makes a localized state come out negative
    return float(4 * np.triu(np.outer(p, p), 1).sum())


def pairwise_concurrence_sum(p) -> float:
    """``sum_{i<j} C_ij**2``, which equals the total tangle for normalized ``p``."""
    p = np.asarray(p, dtype=float)
    n = p.size
    return float(sum((2 * np.sqrt(p[i] * p[j])) ** 2 for i in range(n) for j in range(i + 1, n)))


def tangle_bound(n: int) -> float:
    return 2 * (1 - 1 / n)


def preset_info(name: str) -> PresetInfo:
    n = PRESET_SITES
    if name == "descending":
        raw = [(j, n - j) for j in range(n)]
    elif name == "symmetric_dip":
        raw = [(j, abs(j - 6)) for j in range(n)]
    elif name == "interrupted":
        raw = [(2 * j - 1, 19 - 3 * j) for j in range(1, 7)]
        raw += [(2 * j, 0) for j in range(1, 7)]
    elif name == "alternating":
        raw = []
        for j in range(1, 4):
            raw += [(4 * j - 3, 0), (4 * j - 2, 0), (4 * j - 1, 5), (4 * j, 5)]
    else:
        raise InvalidInputError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}")
    shifts: dict[int, int] = {}
    dropped = []
    for index, value in raw:
        slot = index % n
        if slot in shifts:
            dropped.append((index, value))
        else:
            shifts[slot] = value
    if len(shifts) != n:
        raise AssertionError(f"preset {name} leaves slots {set(range(n)) - set(shifts)} unset")
    return PresetInfo(name, tuple(shifts[j] for j in range(n)), tuple(dropped))


def preset_permutation() -> SitePermutation:
    return one_cycle_permutation(PRESET_SITES)


def preset_assignment(name: str, tau: float = 1.0) -> SpectralAssignment:
    return SpectralAssignment(preset_info(name).shifts, tau)


def preset_hamiltonian(name: str, tau: float = 1.0) -> PstHamiltonian:
    p = preset_permutation()
    return build_hamiltonian(assemble_eigensystem(p, preset_assignment(name, tau)), p)
