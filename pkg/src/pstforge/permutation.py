"""Transfer permutations of the single-excitation basis.

A transfer permutation sends site 1 to site n.  Sites are 1-indexed in every
public signature and in serialized form; arrays are 0-indexed internally.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .errors import InvalidInputError


@dataclass(frozen=True)
class SitePermutation:
    """Bijection ``alpha -> image[alpha - 1]`` on sites ``1..n`` with ``image(1) == n``."""

    n: int
    image: tuple[int, ...]

    def __post_init__(self) -> None:
        image = tuple(int(v) for v in self.image)
        object.__setattr__(self, "image", image)
        if self.n < 2:
            raise InvalidInputError(f"need at least 2 sites, got n={self.n}")
        if len(image) != self.n:
            raise InvalidInputError(f"image has {len(image)} entries for n={self.n}")
        if sorted(image) != list(range(1, self.n + 1)):
            raise InvalidInputError(f"image {image} is not a bijection on 1..{self.n}")
        if image[0] != self.n:
            raise InvalidInputError(f"image(1) must be {self.n}, got {image[0]}")

    def __call__(self, site: int) -> int:
        if not 1 <= site <= self.n:
            raise InvalidInputError(f"site {site} outside 1..{self.n}")
        return self.image[site - 1]

    def matrix(self) -> np.ndarray:
        """Permutation matrix with ``P[image(a), a] = 1`` (so ``P e_1 = e_n``)."""
        P = np.zeros((self.n, self.n))
        P[np.array(self.image) - 1, np.arange(self.n)] = 1.0
        return P

    def power(self, q: int) -> np.ndarray:
        return np.linalg.matrix_power(self.matrix(), q)

    @property
    def is_one_cycle(self) -> bool:
        return len(cycle_decompose(self)) == 1

    def to_dict(self) -> dict:
        return {"n": self.n, "image": list(self.image)}

    @classmethod
    def from_dict(cls, data: dict) -> "SitePermutation":
        try:
            return cls(int(data["n"]), tuple(data["image"]))
        except (KeyError, TypeError) as exc:
            raise InvalidInputError(f"malformed permutation record: {exc}") from exc


@dataclass(frozen=True)
class Cycle:
    """Orbit of a permutation; ``sites[k + 1] == image(sites[k])``."""

    sites: tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.sites)

    def __str__(self) -> str:
        return "(" + ",".join(str(s) for s in self.sites) + ")"


def make_transfer_permutation(n: int, intermediate_order: Sequence[int]) -> SitePermutation:
    """Build the transfer permutation whose sites ``2..n-1`` map to ``intermediate_order``.

    ``intermediate_order[k]`` is the image of site ``k + 2``; entries are distinct
    values from ``1..n-1``.  The image of site ``n`` is the one value left over,
    so the ``(n-1)!`` admissible orders give all transfer permutations.
    """
    if n < 2:
        raise InvalidInputError(f"need at least 2 sites, got n={n}")
    order = [int(v) for v in intermediate_order]
    if len(order) != n - 2:
        raise InvalidInputError(f"expected {n - 2} intermediate images, got {len(order)}")
    if len(set(order)) != len(order):
        raise InvalidInputError(f"duplicate sites in {order}")
    bad = [v for v in order if not 1 <= v <= n - 1]
    if bad:
        raise InvalidInputError(f"sites {bad} outside 1..{n - 1}")
    (last,) = set(range(1, n)) - set(order)
    return SitePermutation(n, (n, *order, last))


def enumerate_transfer_permutations(n: int) -> Iterator[SitePermutation]:
    """All ``(n-1)!`` transfer permutations, in lexicographic order of the image."""
    if n < 2:
        raise InvalidInputError(f"need at least 2 sites, got n={n}")
    for order in itertools.permutations(range(1, n), n - 2):
        yield make_transfer_permutation(n, order)


def count_transfer_permutations(n: int) -> int:
    if n < 2:
        raise InvalidInputError(f"need at least 2 sites, got n={n}")
    return math.factorial(n - 1)


def one_cycle_permutation(n: int) -> SitePermutation:
    """Shift permutation with ones on the superdiagonal and at ``(n, 1)``."""
    return make_transfer_permutation(n, range(1, n - 1))


def antidiagonal_permutation(n: int) -> SitePermutation:
    """Mirror permutation ``alpha -> n + 1 - alpha``."""
    return SitePermutation(n, tuple(range(n, 0, -1)))


def cycle_decompose(p: SitePermutation) -> list[Cycle]:
    """Disjoint cycles, each starting at its smallest site, sorted by that site."""
    seen: set[int] = set()
    cycles = []
    for start in range(1, p.n + 1):
        if start in seen:
            continue
        orbit = [start]
        seen.add(start)
        nxt = p(start)
        while nxt != start:
            orbit.append(nxt)
            seen.add(nxt)
            nxt = p(nxt)
        cycles.append(Cycle(tuple(orbit)))
    return cycles


def recompose(cycles: Sequence[Cycle], n: int) -> SitePermutation:
    """Inverse of :func:`cycle_decompose`."""
    image = [0] * n
    for c in cycles:
        for k, site in enumerate(c.sites):
            image[site - 1] = c.sites[(k + 1) % c.length]
    if 0 in image:
        raise InvalidInputError("cycles do not cover every site")
    return SitePermutation(n, tuple(image))
