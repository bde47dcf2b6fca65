"""PST Hamiltonians: materialization, coupling extraction and verification.

Evolution follows the ``exp(+i H t)`` sign convention throughout; a Hamiltonian
achieves transfer when ``exp(i H tau)`` equals the target permutation matrix.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import InvalidInputError
from .permutation import SitePermutation
from .spectral import Eigensystem

HERMITIAN_TOL = 1e-12
RANK_RTOL = 1e-10


@dataclass(frozen=True)
class PstHamiltonian:
    n: int
    tau: float
    matrix: np.ndarray = field(repr=False)
    permutation: Optional[SitePermutation] = None
    eigensystem: Optional[Eigensystem] = field(default=None, repr=False)

    def __post_init__(self) -> None:
        H = np.asarray(self.matrix, dtype=complex)
        if H.shape != (self.n, self.n):
            raise InvalidInputError(f"matrix shape {H.shape} does not match n={self.n}")
        scale = max(1.0, float(np.abs(H).max()))
        if np.abs(H - H.conj().T).max() > HERMITIAN_TOL * scale:
            raise InvalidInputError("matrix is not Hermitian")
        if not self.tau > 0:
            raise InvalidInputError(f"tau must be positive, got {self.tau}")
        object.__setattr__(self, "matrix", H)

    @property
    def site_energies(self) -> np.ndarray:
        return self.matrix.diagonal().real.copy()

    @property
    def couplings(self) -> dict[tuple[int, int], complex]:
        """Off-diagonal entries keyed by 1-indexed site pairs."""
        H = self.matrix
        return {
            (a + 1, b + 1): complex(H[a, b])
            for a in range(self.n)
            for b in range(self.n)
            if a != b
        }

    def spectrum(self) -> tuple[np.ndarray, np.ndarray]:
        """Energies and eigenvectors, reusing the generating eigensystem when known."""
        if self.eigensystem is not None:
            return self.eigensystem.energies, self.eigensystem.vectors
        return np.linalg.eigh(self.matrix)

    def to_dict(self) -> dict:
        out = {
            "n": self.n,
            "tau": float(self.tau),
            "matrix": [[[float(z.real), float(z.imag)] for z in row] for row in self.matrix],
        }
        if self.permutation is not None:
            out["permutation"] = self.permutation.to_dict()
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "PstHamiltonian":
        try:
            M = np.array(
                [[complex(re, im) for re, im in row] for row in data["matrix"]], dtype=complex
            )
            perm = data.get("permutation")
            return cls(
                int(data["n"]),
                float(data.get("tau", 1.0)),
                M,
                SitePermutation.from_dict(perm) if perm is not None else None,
            )
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, InvalidInputError):
                raise
            raise InvalidInputError(f"malformed Hamiltonian record: {exc}") from exc


@dataclass(frozen=True)
class VerificationReport:
    residual_max: float
    passed: bool
    tolerance: float

    def to_dict(self) -> dict:
        return {"residual_max": self.residual_max, "pass": self.passed, "tolerance": self.tolerance}


@dataclass(frozen=True)
class NoGoCertificate:
    n: int
    lambda_matrix: np.ndarray = field(repr=False)
    rank: int
    nullspace_basis: np.ndarray  # columns span the real solutions of Lambda x = 0
    singular_values: np.ndarray = field(repr=False)

    @property
    def only_uniform_solution(self) -> bool:
        if self.nullspace_basis.shape[1] != 1:
            return False
        x = self.nullspace_basis[:, 0]
        return bool(np.allclose(x / x[0], 1.0, atol=1e-10))

    @property
    def certified(self) -> bool:
        return self.rank == self.n - 2 and self.only_uniform_solution

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "rank": self.rank,
            "expected_rank": self.n - 2,
            "singular_values": [float(s) for s in self.singular_values],
            "real_nullspace_basis": self.nullspace_basis.T.tolist(),
            "certified": self.certified,
        }


def build_hamiltonian(
    e: Eigensystem, permutation: Optional[SitePermutation] = None, tol: float = 1e-10
) -> PstHamiltonian:
    """``H = sum_k eps_k |y_k><y_k|``."""
    if e.gram_error() > tol:
        raise InvalidInputError(f"eigenvectors not orthonormal (Gram error {e.gram_error():.2e})")
    V = e.vectors
    H = (V * e.energies) @ V.conj().T
    H = 0.5 * (H + H.conj().T)
    return PstHamiltonian(e.n, e.tau, H, permutation, e)


def extract_energies_couplings(
    h: PstHamiltonian,
) -> tuple[np.ndarray, dict[tuple[int, int], complex]]:
    return h.site_energies, h.couplings


def evolution_operator(h: PstHamiltonian, t: float) -> np.ndarray:
    """``exp(i H t)`` from the Hermitian eigendecomposition."""
    w, V = h.spectrum()
    return (V * np.exp(1j * w * t)) @ V.conj().T


def verify_pst(
    h: PstHamiltonian, p: SitePermutation, tol: float = 1e-10, q: int = 1
) -> VerificationReport:
    """Max-norm distance between ``exp(i H q tau)`` and ``P**q``.

    Always eigendecomposes ``h.matrix`` afresh so the check is independent of the
    spectral data the Hamiltonian may have been built from.
    """
    if not tol > 0:
        raise InvalidInputError("tolerance must be positive")
    if p.n != h.n:
        raise InvalidInputError(f"permutation on {p.n} sites, Hamiltonian on {h.n}")
    w, V = np.linalg.eigh(h.matrix)
    U = (V * np.exp(1j * w * h.tau * q)) @ V.conj().T
    residual = float(np.abs(U - p.power(q)).max())
    return VerificationReport(residual, residual <= tol, tol)


def is_nearest_neighbour(h: PstHamiltonian, tol: float = 1e-12) -> bool:
    if tol < 0:
        raise InvalidInputError("tolerance must be non-negative")
    H = h.matrix
    far = np.abs(np.subtract.outer(np.arange(h.n), np.arange(h.n))) > 1
    return bool(np.all(np.abs(H[far]) <= tol))


def perturb_coupling(h: PstHamiltonian, a: int, b: int, delta: float) -> PstHamiltonian:
    """Copy of ``h`` with the (real) coupling between sites ``a`` and ``b`` shifted by ``delta``."""
    H = h.matrix.copy()
    H[a - 1, b - 1] += delta
    H[b - 1, a - 1] += delta
    return PstHamiltonian(h.n, h.tau, H, h.permutation)


def lambda_matrix(n: int) -> np.ndarray:
    """Rows ``alpha = 2..n-1`` of ``lambda_j**alpha`` for the n-th roots of unity."""
    alpha = np.arange(2, n)[:, None]
    j = np.arange(n)[None, :]
    return np.exp(2j * np.pi * alpha * j / n)


def _null_space(A: np.ndarray, rtol: float) -> tuple[int, np.ndarray, np.ndarray]:
    _, s, vh = np.linalg.svd(A)
    cutoff = rtol * (s[0] if s.size else 1.0)
    rank = int(np.sum(s > cutoff))
    return rank, vh[rank:].conj().T, s


def no_go_certificate(n: int, rtol: float = RANK_RTOL) -> NoGoCertificate:
    """Certify that the shift permutation admits no nearest-neighbour PST Hamiltonian.

    A tridiagonal member of the one-cycle class needs a real energy vector x with
    ``Lambda x = 0``.  Realness is imposed by stacking the real and imaginary
    parts of ``Lambda`` into one real system.
    """
    if n <= 2:
        raise InvalidInputError(f"no-go statement needs n > 2, got n={n}")
    L = lambda_matrix(n)
    rank, _, s = _null_space(L, rtol)
    _, real_null, _ = _null_space(np.vstack([L.real, L.imag]), rtol)
    real_null = real_null.real
    # fix sign so a uniform vector comes out positive
    for k in range(real_null.shape[1]):
        if real_null[np.argmax(np.abs(real_null[:, k])), k] < 0:
            real_null[:, k] *= -1
    return NoGoCertificate(n, L, rank, real_null, s)
