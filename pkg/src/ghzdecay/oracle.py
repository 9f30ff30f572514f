"""Dense density-matrix reference path.

Evolves ``|Psi><Psi|`` through ``N`` independent local channels, partially
transposes a site subset and reads the negativity off a Hermitian
eigendecomposition.  Everything here is brute force on purpose; it is the
ground truth the analytic module is checked against.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channels import ChannelKind, ChannelModel
from .errors import CapacityError
from .ghz import Bipartition, GHZSpec, dense_cap, ghz_density_matrix

__all__ = [
    "DensityMatrix",
    "PTMatrix",
    "evolve",
    "apply_local_channel",
    "partial_transpose",
    "negativity_threshold",
    "negativity_exact",
    "oracle_negativity",
    "oracle_critical_p",
    "ORACLE_XTOL",
    "ORACLE_ZERO",
]

ORACLE_XTOL = 1e-8
ORACLE_ZERO = 1e-11


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    d: int
    N: int
    data: np.ndarray

    @property
    def dim(self) -> int:
        return self.d**self.N

    def tensor(self) -> np.ndarray:
        return self.data.reshape((self.d,) * (2 * self.N))


@dataclass(frozen=True, eq=False)
class PTMatrix(DensityMatrix):
    sites: tuple[int, ...] = ()


def apply_local_channel(rho: np.ndarray, channel: ChannelModel, site: int, N: int) -> np.ndarray:
    """Closed-form single-site channel on a ``(d,)*2N`` tensor."""
    d, p = channel.d, channel.p
    if channel.kind is ChannelKind.DEPOLARIZING:
        reduced = np.trace(rho, axis1=site, axis2=N + site)
        mixed = np.multiply.outer(reduced, np.eye(d) / d)
        mixed = np.moveaxis(mixed, [2 * N - 2, 2 * N - 1], [site, N + site])
        return (1 - p) * rho + p * mixed
    shape = [1] * (2 * N)
    shape[site] = shape[N + site] = d
    keep = np.eye(d).reshape(shape)
    return rho * ((1 - p) + p * keep)


def evolve(spec: GHZSpec, channel: ChannelModel, cap: int | None = None,
           order=None) -> DensityMatrix:
    """Apply ``channel`` independently to every site of the GHZ state."""
    if channel.d != spec.d:
        raise ValueError(f"channel dimension {channel.d} != state dimension {spec.d}")
    d, N = spec.d, spec.N
    rho = ghz_density_matrix(spec, cap).reshape((d,) * (2 * N))
    for site in (range(N) if order is None else order):
        rho = apply_local_channel(rho, channel, site, N)
    return DensityMatrix(d, N, rho.reshape(d**N, d**N))


def partial_transpose(rho: DensityMatrix, subset) -> PTMatrix:
    """Transpose the tensor factors listed in ``subset`` (a :class:`Bipartition`
    or a site sequence)."""
    if not isinstance(subset, Bipartition):
        subset = Bipartition.of(rho.N, subset)
    if subset.N != rho.N:
        raise ValueError(f"bipartition is for N={subset.N}, matrix has N={rho.N}")
    N = rho.N
    perm = list(range(2 * N))
    for s in subset.sites:
        perm[s], perm[N + s] = perm[N + s], perm[s]
    data = rho.tensor().transpose(perm).reshape(rho.dim, rho.dim)
    return PTMatrix(rho.d, rho.N, np.ascontiguousarray(data), subset.sites)


def negativity_threshold(a: np.ndarray) -> float:
    """Eigenvalue noise floor ``1e-12 * dim * max|entry|``."""
    return 1e-12 * a.shape[0] * float(np.abs(a).max())


def negativity_exact(rho_pt, tol: float | None = None) -> float:
    """Sum of ``|lambda|`` over eigenvalues below ``-tol``.

    ``tol`` defaults to :func:`negativity_threshold`.
    """
    a = rho_pt.data if isinstance(rho_pt, DensityMatrix) else np.asarray(rho_pt)
    evals = np.linalg.eigvalsh(a)
    if tol is None:
        tol = negativity_threshold(a)
    neg = evals[evals < -tol]
    return float(-neg.sum()) if neg.size else 0.0


def _subset(spec: GHZSpec, subset) -> Bipartition:
    if isinstance(subset, Bipartition):
        return subset
    if isinstance(subset, (int, np.integer)):
        return Bipartition(spec.N, int(subset))
    return Bipartition.of(spec.N, subset)


def oracle_negativity(spec: GHZSpec, channel: ChannelModel, subset, cap: int | None = None) -> float:
    """Exact negativity for a site subset, or an integer ``n`` (last ``n`` sites)."""
    part = _subset(spec, subset)
    return negativity_exact(partial_transpose(evolve(spec, channel, cap), part))


def oracle_critical_p(spec: GHZSpec, kind, n: int, cap: int | None = None,
                      xtol: float = ORACLE_XTOL, zero: float = ORACLE_ZERO) -> float:
    """Smallest channel strength at which the brute-force negativity reaches zero.

    Plain bisection on ``[0, 1]`` using ``negativity <= zero`` as the test.
    Phase damping returns 1 without computing anything beyond the cap check.
    """
    kind = ChannelKind.parse(kind)
    cap_ = dense_cap(cap)
    if spec.dim > cap_:
        raise CapacityError(spec.dim, cap_)
    if kind is ChannelKind.PHASE_DAMPING:
        return 1.0
    part = Bipartition(spec.N, n)

    def vanished(p):
        ch = ChannelModel(kind, p, spec.d)
        return oracle_negativity(spec, ch, part, cap) <= zero

    lo, hi = 0.0, 1.0
    while hi - lo > xtol:
        mid = 0.5 * (lo + hi)
        if vanished(mid):
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)
