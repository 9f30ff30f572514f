"""Generalized N-qudit GHZ states ``sum_i a_i |i>^N`` and bipartitions."""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field

import numpy as np

from .errors import CapacityError, InvalidDimensionError

__all__ = [
    "DEFAULT_DENSE_CAP",
    "DENSE_CAP_ENV",
    "GHZSpec",
    "Bipartition",
    "make_ghz",
    "ghz_density_matrix",
    "ghz_index",
    "dense_cap",
]

DEFAULT_DENSE_CAP = 4096
DENSE_CAP_ENV = "GHZDECAY_DENSE_CAP"
ZERO_AMPLITUDE = 1e-15


def dense_cap(cap: int | None = None) -> int:
    """Resolve the dense-dimension cap: explicit value, then environment, then default."""
    if cap is not None:
        return int(cap)
    env = os.environ.get(DENSE_CAP_ENV)
    if env:
        return int(env)
    return DEFAULT_DENSE_CAP


@dataclass(frozen=True, eq=False)
class GHZSpec:
    """Validated, normalized GHZ amplitudes.

    Use :func:`make_ghz` to build one.  ``rescale`` is the factor that was
    applied to the raw amplitudes to normalize them; ``active`` marks the
    amplitudes treated as nonzero (``|a_i| >= 1e-15``).
    """

    d: int
    N: int
    alphas: np.ndarray
    rescale: float = 1.0
    active: np.ndarray = field(default=None, repr=False)

    @property
    def weights(self) -> np.ndarray:
        """Populations ``|a_i|^2`` with inactive levels set to exactly zero."""
        w = np.abs(self.alphas) ** 2
        return np.where(self.active, w, 0.0)

    @property
    def is_product(self) -> bool:
        return int(np.count_nonzero(self.active)) <= 1

    @property
    def dim(self) -> int:
        return self.d**self.N

    def pairs(self):
        """All level pairs ``(i, j)``, ``i < j``, in lexicographic order."""
        return itertools.combinations(range(self.d), 2)

    def active_pairs(self):
        return [(i, j) for i, j in self.pairs() if self.active[i] and self.active[j]]

    def with_phases(self, phases) -> "GHZSpec":
        return make_ghz(self.d, self.N, self.alphas * np.exp(1j * np.asarray(phases, float)))


@dataclass(frozen=True)
class Bipartition:
    """An ``(N-n)|n`` split; ``subset`` lists the transposed sites.

    Without an explicit subset the last ``n`` sites are used.
    """

    N: int
    n: int
    subset: tuple[int, ...] | None = None

    def __post_init__(self):
        if not 1 <= self.n <= self.N - 1 and not (self.subset is not None and self.n == self.N):
            raise ValueError(f"bipartition size n={self.n} outside [1, N-1] for N={self.N}")
        if self.subset is not None:
            sub = tuple(int(s) for s in self.subset)
            if len(set(sub)) != len(sub) or len(sub) != self.n:
                raise ValueError(f"subset {sub} must hold exactly n={self.n} distinct sites")
            if any(s < 0 or s >= self.N for s in sub):
                raise ValueError(f"subset {sub} has sites outside [0, {self.N - 1}]")
            object.__setattr__(self, "subset", tuple(sorted(sub)))

    @classmethod
    def of(cls, N: int, sites) -> "Bipartition":
        """Bipartition from an explicit site list.  All N sites is allowed (full transpose)."""
        sites = tuple(sites)
        return cls(N, len(sites), sites)

    @property
    def sites(self) -> tuple[int, ...]:
        if self.subset is not None:
            return self.subset
        return tuple(range(self.N - self.n, self.N))

    def complement(self) -> "Bipartition":
        rest = tuple(s for s in range(self.N) if s not in self.sites)
        return Bipartition(self.N, len(rest), rest)


def make_ghz(d: int, N: int, alphas) -> GHZSpec:
    """Validate and normalize GHZ amplitudes.

    Examples
    --------
    >>> make_ghz(3, 4, [1, 1, 1]).alphas.real.round(6)
    array([0.57735, 0.57735, 0.57735])
    """
    if int(d) != d or d < 2:
        raise InvalidDimensionError(f"d must be an integer >= 2, got {d}")
    if int(N) != N or N < 2:
        raise InvalidDimensionError(f"N must be an integer >= 2, got {N}")
    a = np.array(alphas, dtype=complex).ravel()
    if a.shape != (d,):
        raise ValueError(f"expected {d} amplitudes, got {a.size}")
    if not np.all(np.isfinite(a)):
        raise ValueError("amplitudes must be finite")
    norm = np.linalg.norm(a)
    if norm == 0.0:
        raise ValueError("amplitude vector is zero")
    rescale = 1.0 / norm
    if abs(norm - 1.0) > 1e-15:
        a = a * rescale
    else:
        rescale = 1.0
    active = np.abs(a) >= ZERO_AMPLITUDE
    a = np.where(active, a, 0.0)
    a.setflags(write=False)
    active.setflags(write=False)
    return GHZSpec(int(d), int(N), a, rescale, active)


def ghz_index(level: int, d: int, N: int) -> int:
    """Flat index of ``|level>^N``; site 0 is the most significant base-d digit."""
    return level * (d**N - 1) // (d - 1)


def ghz_density_matrix(spec: GHZSpec, cap: int | None = None) -> np.ndarray:
    """Dense ``|Psi><Psi|`` of size ``d^N x d^N``."""
    cap = dense_cap(cap)
    if spec.dim > cap:
        raise CapacityError(spec.dim, cap)
    psi = np.zeros(spec.dim, dtype=complex)
    for level in range(spec.d):
        psi[ghz_index(level, spec.d, spec.N)] = spec.alphas[level]
    return np.outer(psi, psi.conj())
