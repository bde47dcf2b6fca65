"""Analytic nearest-neighbour class on four sites.

Only the mirror permutation ``(1,4)(2,3)`` admits tridiagonal PST Hamiltonians
on four sites.  Its class is fixed by a spectrum (two even and two odd
multiples of pi) and two complex mixing amplitudes per parity sector; asking
``<1|H|3> = <1|H|4> = 0`` leaves one linear and one quadratic constraint in
``a = |nu|^2`` and ``b = |xi|^2``.
"""
from __future__ import annotations

import enum
import logging
from dataclasses import dataclass

import numpy as np

from ..errors import BrokenNetworkError, InvalidInputError, NoSolutionError
from ..hamiltonian import PstHamiltonian, build_hamiltonian
from ..permutation import SitePermutation, antidiagonal_permutation, cycle_decompose
from ..spectral import SpectralAssignment, assemble_eigensystem

log = logging.getLogger(__name__)

CONSTRAINT_TOL = 1e-10
ACCEPT_TOL = 1e-8


@dataclass(frozen=True)
class Nn4Spectrum:
    """Eigenphases ``eps * tau`` in units of pi: even integers for +1, odd for -1."""

    eps_plus_1: int
    eps_plus_2: int
    eps_minus_1: int
    eps_minus_2: int

    def __post_init__(self) -> None:
        for name in ("eps_plus_1", "eps_plus_2", "eps_minus_1", "eps_minus_2"):
            v = getattr(self, name)
            if int(v) != v:
                raise InvalidInputError(f"{name}={v} is not an integer multiple of pi")
            object.__setattr__(self, name, int(v))
        if self.eps_plus_1 % 2 or self.eps_plus_2 % 2:
            raise InvalidInputError("the +1 sector needs even multiples of pi")
        if not (self.eps_minus_1 % 2 and self.eps_minus_2 % 2):
            raise InvalidInputError("the -1 sector needs odd multiples of pi")

    @classmethod
    def from_sequence(cls, values) -> "Nn4Spectrum":
        values = list(values)
        if len(values) != 4:
            raise InvalidInputError(f"need four eigenphases, got {len(values)}")
        return cls(*values)

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.eps_plus_1, self.eps_plus_2, self.eps_minus_1, self.eps_minus_2)

    def radians(self) -> np.ndarray:
        return np.pi * np.array(self.as_tuple(), dtype=float)

    @property
    def is_degenerate(self) -> bool:
        return self.eps_plus_1 == self.eps_plus_2 or self.eps_minus_1 == self.eps_minus_2

    def shifted(self, j: int) -> "Nn4Spectrum":
        """Every eigenphase moved by ``2*pi*j``."""
        return Nn4Spectrum(*(v + 2 * j for v in self.as_tuple()))

    def shifts(self) -> tuple[int, int, int, int]:
        p1, p2, m1, m2 = self.as_tuple()
        return (p1 // 2, p2 // 2, (m1 - 1) // 2, (m2 - 1) // 2)


@dataclass(frozen=True)
class Nn4Amplitudes:
    mu: complex
    nu: complex
    xi: complex
    zeta: complex
    phi: float
    chi: float
    m: int

    def constraint_residuals(self, s: Nn4Spectrum) -> tuple[float, float]:
        p1, p2, m1, m2 = s.radians()
        r1 = (
            p1 * abs(self.nu) ** 2
            + p2 * abs(self.mu) ** 2
            - m1 * abs(self.xi) ** 2
            - m2 * abs(self.zeta) ** 2
        )
        r2 = (p1 - p2) * self.nu * np.conj(self.mu) + (m2 - m1) * self.xi * np.conj(self.zeta)
        return abs(r1), abs(r2)

    def normalisation_error(self) -> float:
        return max(
            abs(abs(self.mu) ** 2 + abs(self.nu) ** 2 - 1),
            abs(abs(self.xi) ** 2 + abs(self.zeta) ** 2 - 1),
        )

    def mixing_blocks(self) -> dict[int, np.ndarray]:
        mu, nu, xi, zeta = self.mu, self.nu, self.xi, self.zeta
        plus = np.array([[nu, mu], [np.conj(mu), -np.conj(nu)]], dtype=complex)
        minus = np.array([[xi, zeta], [np.conj(zeta), -np.conj(xi)]], dtype=complex)
        return {0: plus, 1: minus}

    def to_dict(self) -> dict:
        return {
            "mu": [self.mu.real, self.mu.imag],
            "nu": [self.nu.real, self.nu.imag],
            "xi": [self.xi.real, self.xi.imag],
            "zeta": [self.zeta.real, self.zeta.imag],
            "phi": self.phi,
            "chi": self.chi,
            "m": self.m,
        }


def check_overlap(s: Nn4Spectrum) -> bool:
    """Whether the even-sector and odd-sector eigenphase intervals intersect."""
    lo_p, hi_p = sorted((s.eps_plus_1, s.eps_plus_2))
    lo_m, hi_m = sorted((s.eps_minus_1, s.eps_minus_2))
    return max(lo_p, lo_m) <= min(hi_p, hi_m)


def printed_closed_forms(s: Nn4Spectrum) -> dict[str, float]:
    """Squared magnitudes from the published closed-form expressions, taken literally."""
    p1, p2, m1, m2 = (float(v) for v in s.as_tuple())
    D = p1 - m2 - m1 + p2
    return {
        "mu2": (p2 - m2) * (m1 - p2) / ((p1 - p2) * D),
        "nu2": (m1 - p1) * (m2 - p1) / ((p1 - p2) * D),
        "xi2": (m2 - p1) * (m2 - p2) / ((m1 - m2) * D),
        "zeta2": (m1 - p1) * (m1 - p2) / ((m2 - m1) * D),
    }


def _solve_magnitudes(s: Nn4Spectrum) -> tuple[float, float]:
    """Solve for ``(|nu|^2, |xi|^2)`` without the closed forms.

    The zero of ``<1|H|4>`` gives ``b = (a*dp + c) / dm``; substituting into the
    squared-modulus form of ``<1|H|3> = 0``, ``dp^2 a(1-a) = dm^2 b(1-b)``, gives a
    polynomial in ``a`` whose quadratic coefficient vanishes identically.
    """
    p1, p2, m1, m2 = (float(v) for v in s.as_tuple())
    dp, dm, c = p1 - p2, m1 - m2, p2 - m2
    b_of_a = np.polynomial.Polynomial([c / dm, dp / dm])
    lhs = dp**2 * np.polynomial.Polynomial([0.0, 1.0, -1.0])
    rhs = dm**2 * b_of_a * (1 - b_of_a)
    c0, c1, c2 = np.pad((lhs - rhs).coef, (0, 3))[:3]
    tol = 1e-12 * max(1.0, abs(c0), abs(c1), abs(c2))
    if abs(c2) > tol:
        roots = np.polynomial.Polynomial([c0, c1, c2]).roots()
        roots = roots[np.abs(roots.imag) < 1e-12].real
    elif abs(c1) > tol:
        roots = np.array([-c0 / c1])
    else:
        raise NoSolutionError(f"constraint system for spectrum {s.as_tuple()} is singular")
    admissible = [
        (a, b_of_a(a)) for a in roots if _unit(a) is not None and _unit(b_of_a(a)) is not None
    ]
    if not admissible:
        raise NoSolutionError(
            f"spectrum {s.as_tuple()} needs squared magnitudes outside [0, 1] "
            f"(candidates a={roots.tolist()})"
        )
    a, b = admissible[0]
    return _unit(a), _unit(b)


def _unit(x: float, slack: float = 1e-12):
    if -slack <= x <= 1 + slack:
        return min(max(float(x), 0.0), 1.0)
    return None


def solve_nn4(s: Nn4Spectrum) -> Nn4Amplitudes:
    """Amplitudes making the mirror-permutation class member tridiagonal.

    ``nu`` and ``xi`` are real and non-negative, ``zeta`` is real (``chi = 0``) and
    ``mu`` carries the phase ``phi = m*pi``.
    """
    if s.is_degenerate:
        raise BrokenNetworkError(
            f"degenerate spectrum {s.as_tuple()}: couplings vanish and the network is broken"
        )
    if not check_overlap(s):
        raise NoSolutionError(f"spectrum {s.as_tuple()}: even and odd intervals do not overlap")
    a, b = _solve_magnitudes(s)

    closed = printed_closed_forms(s)
    if not np.allclose([closed["nu2"], closed["xi2"]], [a, b], atol=1e-10):
        log.info(
            "closed forms disagree with direct solve for %s: printed |nu|^2=%.6g |mu|^2=%.6g, "
            "direct |nu|^2=%.6g; keeping direct solution",
            s.as_tuple(), closed["nu2"], closed["mu2"], a,
        )

    dp = s.eps_plus_1 - s.eps_plus_2
    dm = s.eps_minus_1 - s.eps_minus_2
    m = 0 if dp * dm > 0 else 1
    phi = m * np.pi
    nu = complex(np.sqrt(a))
    mu = complex(np.sqrt(1 - a) * np.cos(phi))
    xi = complex(np.sqrt(b))
    zeta = complex(np.sqrt(1 - b))
    amp = Nn4Amplitudes(mu, nu, xi, zeta, float(phi), 0.0, m)

    scale = max(1.0, float(np.abs(s.radians()).max()))
    r1, r2 = amp.constraint_residuals(s)
    if max(r1, r2) > CONSTRAINT_TOL * scale:
        raise NoSolutionError(f"constraint residuals {r1:.2e}, {r2:.2e} above tolerance")
    return amp


def nn4_hamiltonian(s: Nn4Spectrum, a: Nn4Amplitudes, tau: float = 1.0) -> PstHamiltonian:
    scale = max(1.0, float(np.abs(s.radians()).max()))
    if max(a.constraint_residuals(s)) > ACCEPT_TOL * scale or a.normalisation_error() > ACCEPT_TOL:
        raise InvalidInputError("amplitudes do not satisfy the nearest-neighbour constraints")
    p = antidiagonal_permutation(4)
    assignment = SpectralAssignment(s.shifts(), tau, a.mixing_blocks())
    return build_hamiltonian(assemble_eigensystem(p, assignment), p)


def nn4_parameters(h: PstHamiltonian) -> dict[str, float]:
    """Site energies and couplings of a mirror-symmetric four-site chain."""
    H = h.matrix
    return {
        "E1": float(H[0, 0].real),
        "E2": float(H[1, 1].real),
        "g1": float(H[0, 1].real),
        "g2": float(H[1, 2].real),
    }


class Nn4Verdict(enum.Enum):
    FEASIBLE = "feasible"
    INFEASIBLE_DECOUPLED = "infeasible_decoupled"
    INFEASIBLE_CONTRADICTION = "infeasible_contradiction"
    INFEASIBLE_ONE_CYCLE = "infeasible_one_cycle"


def nn_commutant_connects(p: SitePermutation, tol: float = 1e-10) -> bool:
    """Whether some tridiagonal Hermitian matrix commuting with ``P`` links site 1 to site n.

    Any ``H`` with ``exp(i H tau) = P`` commutes with ``P``.  The commuting
    tridiagonal matrices form a linear space; a bond can be nonzero only if some
    member of that space has it nonzero, so if the union of admissible bonds
    leaves sites 1 and n disconnected, no nearest-neighbour Hamiltonian can
    transfer the excitation.
    """
    n = p.n
    P = p.matrix()
    # real coordinates: n diagonal entries, then (re, im) of each superdiagonal entry
    basis = []
    for k in range(n):
        E = np.zeros((n, n), dtype=complex)
        E[k, k] = 1
        basis.append(E)
    for k in range(n - 1):
        for z in (1.0, 1j):
            E = np.zeros((n, n), dtype=complex)
            E[k, k + 1] = z
            E[k + 1, k] = np.conj(z)
            basis.append(E)
    A = np.array([np.concatenate([(P @ E - E @ P).real.ravel(), (P @ E - E @ P).imag.ravel()])
                  for E in basis]).T
    _, sv, vh = np.linalg.svd(A)
    rank = int(np.sum(sv > tol * sv[0]))
    null = vh[rank:]
    bonds = [
        k for k in range(n - 1)
        if np.abs(null[:, n + 2 * k : n + 2 * k + 2]).max(initial=0.0) > tol
    ]
    reach = 0
    while reach in bonds:
        reach += 1
    return reach == n - 1


def classify_4site_permutation(p: SitePermutation) -> Nn4Verdict:
    if p.n != 4:
        raise InvalidInputError(f"classification is defined for 4 sites, got n={p.n}")
    lengths = sorted((c.length for c in cycle_decompose(p)), reverse=True)
    if lengths == [4]:
        verdict = Nn4Verdict.INFEASIBLE_ONE_CYCLE
    elif lengths == [2, 2]:
        verdict = Nn4Verdict.FEASIBLE
    elif lengths == [2, 1, 1]:
        verdict = Nn4Verdict.INFEASIBLE_DECOUPLED
    else:
        # 3-cycle through 1 and 4 plus a fixed point: the two non-real eigenphases
        # would have to coincide, which their quantization forbids
        verdict = Nn4Verdict.INFEASIBLE_CONTRADICTION
    if (verdict is Nn4Verdict.FEASIBLE) != nn_commutant_connects(p):
        raise AssertionError(f"commutant check disagrees with cycle-type verdict for {p.image}")
    return verdict
