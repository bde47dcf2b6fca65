"""Eigenstructure of transfer permutations and the shifted-spectrum parameterization.

Eigenvalues are handled as exact phases ``j/d`` (``fractions.Fraction`` in
``[0, 1)``) so grouping degenerate roots of unity never depends on a float
tolerance.  The eigenbasis order used everywhere (shift vectors, mixing
indices, energies) is: distinct eigenvalues by increasing phase, then cycles
in canonical order within each eigenvalue.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .errors import InvalidInputError
from .permutation import Cycle, SitePermutation, cycle_decompose

UNITARY_TOL = 1e-12
ORTHONORMAL_TOL = 1e-12


@dataclass(frozen=True)
class CycleEigenpair:
    phase: Fraction  # eigenvalue is exp(2*pi*i*phase)
    vector: np.ndarray = field(repr=False)
    cycle_index: int = 0

    @property
    def eigenvalue(self) -> complex:
        return root_of_unity(self.phase)


@dataclass(frozen=True)
class SpectralAssignment:
    """Integer shifts per eigenbasis member, optional mixing blocks, and the transfer time.

    ``mixing`` maps a distinct-eigenvalue index (position in
    :func:`eigen_branches`) to a ``d x d`` unitary whose rows give the chosen
    basis vectors as combinations of the raw cycle eigenvectors.
    """

    shifts: tuple[int, ...]
    tau: float = 1.0
    mixing: Mapping[int, np.ndarray] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "shifts", tuple(int(s) for s in self.shifts))
        object.__setattr__(
            self,
            "mixing",
            {int(k): np.asarray(v, dtype=complex) for k, v in dict(self.mixing).items()},
        )
        if not self.tau > 0:
            raise InvalidInputError(f"tau must be positive, got {self.tau}")

    def to_dict(self) -> dict:
        return {
            "tau": float(self.tau),
            "shifts": list(self.shifts),
            "mixing": [
                {
                    "eigenvalue_index": k,
                    "block": [[[float(z.real), float(z.imag)] for z in row] for row in block],
                }
                for k, block in sorted(self.mixing.items())
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SpectralAssignment":
        try:
            mixing = {}
            for entry in data.get("mixing", []):
                block = np.array(
                    [[complex(re, im) for re, im in row] for row in entry["block"]],
                    dtype=complex,
                )
                mixing[int(entry["eigenvalue_index"])] = block
            return cls(tuple(data["shifts"]), float(data.get("tau", 1.0)), mixing)
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidInputError(f"malformed spectral assignment: {exc}") from exc


@dataclass(frozen=True)
class Eigensystem:
    """Orthonormal eigenvectors (columns of ``vectors``) with energies ``energies``.

    ``phases[k]`` records the permutation eigenvalue each column came from, so
    ``exp(1j * energies[k] * tau) == exp(2j * pi * phases[k])``.
    """

    vectors: np.ndarray = field(repr=False)
    energies: np.ndarray
    phases: tuple[Fraction, ...]
    tau: float = 1.0

    @property
    def n(self) -> int:
        return self.vectors.shape[0]

    def gram_error(self) -> float:
        V = self.vectors
        return float(np.abs(V.conj().T @ V - np.eye(V.shape[1])).max())


def root_of_unity(phase: Fraction) -> complex:
    return complex(np.exp(2j * np.pi * float(phase)))


def cycle_spectrum(c: Cycle, n: int) -> list[CycleEigenpair]:
    """The ``d`` eigenpairs of a single cycle of length ``d`` embedded in ``n`` sites.

    Along the cycle ``c_0 -> c_1 -> ...`` the eigenvector for ``lambda_j`` has
    amplitude ``lambda_j**(-k) / sqrt(d)`` at ``c_k``.  For the shift permutation
    this is ``lambda_j**(alpha - 1) / sqrt(n)`` at site ``alpha``.
    """
    d = c.length
    if max(c.sites) > n:
        raise InvalidInputError(f"cycle {c} does not fit in {n} sites")
    idx = np.array(c.sites) - 1
    k = np.arange(d)
    out = []
    for j in range(d):
        v = np.zeros(n, dtype=complex)
        v[idx] = np.exp(-2j * np.pi * j * k / d) / np.sqrt(d)
        out.append(CycleEigenpair(Fraction(j, d), v))
    return out


def eigen_branches(p: SitePermutation) -> list[tuple[Fraction, list[CycleEigenpair]]]:
    """Distinct eigenvalue phases of ``p``, each with its cycle eigenvectors."""
    groups: dict[Fraction, list[CycleEigenpair]] = {}
    for ci, c in enumerate(cycle_decompose(p)):
        for pair in cycle_spectrum(c, p.n):
            groups.setdefault(pair.phase, []).append(
                CycleEigenpair(pair.phase, pair.vector, ci)
            )
    return sorted(groups.items())


def degeneracy_table(p: SitePermutation) -> dict[Fraction, int]:
    """Eigenvalue phase -> number of cycles carrying that eigenvalue."""
    return {phase: len(members) for phase, members in eigen_branches(p)}


def basis_phases(p: SitePermutation) -> tuple[Fraction, ...]:
    """Eigenvalue phase of each eigenbasis slot, in shift-vector order."""
    return tuple(phase for phase, members in eigen_branches(p) for _ in members)


def is_unitary(block: np.ndarray, tol: float = UNITARY_TOL) -> bool:
    block = np.asarray(block)
    if block.ndim != 2 or block.shape[0] != block.shape[1]:
        return False
    return bool(np.abs(block @ block.conj().T - np.eye(block.shape[0])).max() <= tol)


def assemble_eigensystem(p: SitePermutation, a: SpectralAssignment) -> Eigensystem:
    """Orthonormal eigensystem with energies ``(2*pi*phase + 2*pi*l) / tau``."""
    branches = eigen_branches(p)
    if len(a.shifts) != p.n:
        raise InvalidInputError(f"expected {p.n} shifts, got {len(a.shifts)}")
    extra = set(a.mixing) - set(range(len(branches)))
    if extra:
        raise InvalidInputError(
            f"mixing given for eigenvalue indices {sorted(extra)}; "
            f"permutation has {len(branches)} distinct eigenvalues"
        )
    columns = []
    phases: list[Fraction] = []
    for g, (phase, members) in enumerate(branches):
        raw = np.array([m.vector for m in members])  # rows
        block = a.mixing.get(g)
        if block is not None:
            if block.shape != (len(members), len(members)):
                raise InvalidInputError(
                    f"mixing block for eigenvalue index {g} has shape {block.shape}, "
                    f"degeneracy is {len(members)}"
                )
            if not is_unitary(block):
                raise InvalidInputError(f"mixing block for eigenvalue index {g} is not unitary")
            raw = block @ raw
        columns.extend(raw)
        phases.extend([phase] * len(members))
    V = np.array(columns).T
    shifts = np.array(a.shifts, dtype=float)
    energies = 2 * np.pi * (np.array([float(ph) for ph in phases]) + shifts) / a.tau
    return Eigensystem(V, energies, tuple(phases), a.tau)


def random_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary via QR of a complex Gaussian matrix."""
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_assignment(
    p: SitePermutation,
    rng: np.random.Generator,
    shift_range: Sequence[int] = (-5, 5),
    tau: float = 1.0,
    mix: bool = True,
) -> SpectralAssignment:
    lo, hi = shift_range
    shifts = tuple(int(s) for s in rng.integers(lo, hi + 1, size=p.n))
    mixing = {}
    if mix:
        for g, (_, members) in enumerate(eigen_branches(p)):
            if len(members) > 1:
                mixing[g] = random_unitary(len(members), rng)
    return SpectralAssignment(shifts, tau, mixing)
