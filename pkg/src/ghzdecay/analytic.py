"""Closed-form negativity of a noisy GHZ state and its critical channel strengths.

After local noise the partially transposed GHZ state is block diagonal: a
diagonal part plus one 2x2 block per level pair ``i < j``, spanned by
``|i..i j..j>`` and ``|j..j i..i>`` (``N-n`` copies then ``n`` copies).
Every negative eigenvalue comes from one of those blocks, so the negativity
is a sum over pairs.

For the depolarizing channel the block diagonals are

    lambda_n = w_i r^n q^(N-n) + w_j r^(N-n) q^n  [+ s r^N]

with ``w_k = |a_k|^2``, ``r = p/d``, ``q = 1 - (d-1) p / d`` and ``s`` the
total population of the other ``d-2`` levels.  The bracketed spectator term
is the weight that fully depolarized spectator levels leave on every basis
state; it vanishes for qubits and for two-level superpositions.  It is
included by default (``spectators=True``), which makes the block spectrum
exact; ``spectators=False`` drops it and gives the commonly quoted
expression, which is also what the balanced closed form below solves.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from .channels import ChannelKind, ChannelModel
from .errors import UnsupportedClosedFormError
from .ghz import GHZSpec

__all__ = [
    "PairBlock",
    "NegativityReport",
    "CriticalKind",
    "Method",
    "CriticalProbability",
    "lambda_n",
    "pair_block",
    "negativity",
    "critical_p_balanced_closed_form",
    "critical_p_partition",
    "epsilon_threshold",
    "asymptote_balanced",
    "epsilon_scaling_estimate",
    "large_d_epsilon_limit",
    "SCAN_STEP",
    "ROOT_XTOL",
    "ROOT_MAXITER",
]

SCAN_STEP = 1e-3
ROOT_XTOL = 1e-12
ROOT_MAXITER = 200

SPECTATOR_WARNING = "closed form ignores spectator levels; exact vanishing point differs"


def _kind(channel) -> ChannelKind:
    if isinstance(channel, ChannelModel):
        return channel.kind
    return ChannelKind.parse(channel)


def _check_n(spec: GHZSpec, n: int):
    if int(n) != n or not 1 <= n <= spec.N - 1:
        raise ValueError(f"bipartition size n={n} outside [1, {spec.N - 1}]")


def _check_pair(spec: GHZSpec, i: int, j: int):
    if not (0 <= i < j < spec.d):
        raise IndexError(f"level pair ({i}, {j}) invalid for d={spec.d}; need 0 <= i < j < d")


def _lambdas(wi, wj, rest, p, d, N, n, spectators):
    """Both block diagonals ``(lambda_n, lambda_{N-n})``; broadcasts over arrays."""
    r = p / d
    q = 1.0 - (d - 1) * p / d
    lam_a = wi * r**n * q ** (N - n) + wj * r ** (N - n) * q**n
    lam_b = wi * r ** (N - n) * q**n + wj * r**n * q ** (N - n)
    if spectators:
        bg = rest * r**N
        lam_a = lam_a + bg
        lam_b = lam_b + bg
    return lam_a, lam_b


def _block(wi, wj, rest, p, d, N, n, spectators):
    lam_a, lam_b = _lambdas(wi, wj, rest, p, d, N, n, spectators)
    coh = np.sqrt(wi * wj) * (1.0 - p) ** N
    xi = 0.5 * (lam_a + lam_b)
    eta = lam_a * lam_b - coh**2
    radicand = (0.5 * (lam_a - lam_b)) ** 2 + coh**2
    assert np.all(radicand >= 0.0)
    root = np.sqrt(radicand)
    # eta / (xi + root) avoids cancellation when xi is close to root
    with np.errstate(divide="ignore", invalid="ignore"):
        mu = np.where(xi > 0.0, eta / (xi + root), xi - root)
    return lam_a, lam_b, coh, xi, eta, mu


@dataclass(frozen=True)
class PairBlock:
    """Spectrum data of the 2x2 block for levels ``i < j``."""

    i: int
    j: int
    n: int
    p: float
    kind: ChannelKind
    lambda_n: float
    lambda_Nn: float
    coherence: float
    xi: float
    eta: float
    mu: float | None = None
    nu: float | None = None

    @property
    def eigenvalue(self) -> float:
        """The smaller block eigenvalue (``mu`` or ``nu``)."""
        return self.mu if self.kind is ChannelKind.DEPOLARIZING else self.nu

    @property
    def contribution(self) -> float:
        return max(-self.eigenvalue, 0.0)


def lambda_n(spec: GHZSpec, p: float, i: int, j: int, n: int, spectators: bool = True) -> float:
    """Diagonal entry of the depolarized state on ``|i^(N-n) j^n>``."""
    _check_pair(spec, i, j)
    _check_n(spec, n)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p={p} outside [0, 1]")
    w = spec.weights
    rest = w.sum() - w[i] - w[j]
    lam, _ = _lambdas(w[i], w[j], rest, p, spec.d, spec.N, n, spectators)
    return float(lam)


def pair_block(spec: GHZSpec, channel: ChannelModel, i: int, j: int, n: int,
               spectators: bool = True) -> PairBlock:
    _check_pair(spec, i, j)
    _check_n(spec, n)
    kind, p, N = channel.kind, channel.p, spec.N
    w = spec.weights
    if kind is ChannelKind.PHASE_DAMPING:
        coh = math.sqrt(w[i] * w[j]) * (1.0 - p) ** N
        return PairBlock(i, j, n, p, kind, 0.0, 0.0, coh, 0.0, -coh * coh, nu=-coh)
    rest = w.sum() - w[i] - w[j]
    lam_a, lam_b, coh, xi, eta, mu = _block(w[i], w[j], rest, p, spec.d, N, n, spectators)
    return PairBlock(i, j, n, p, kind, float(lam_a), float(lam_b), float(coh),
                     float(xi), float(eta), mu=float(mu))


@dataclass(frozen=True)
class NegativityReport:
    """Negativity per bipartition size with the per-pair breakdown.

    ``values[n]`` is the sum over pairs, in lexicographic ``(i, j)`` order, of
    ``contributions[(i, j, n)]``.
    """

    spec: GHZSpec
    kind: ChannelKind
    p: float
    values: dict[int, float]
    contributions: dict[tuple[int, int, int], float]

    def __getitem__(self, n: int) -> float:
        return self.values[n]


def negativity(spec: GHZSpec, channel: ChannelModel, n=None, spectators: bool = True) -> NegativityReport:
    """Analytic negativity for one ``n`` or (``n=None``) every ``1 <= n <= N-1``."""
    if channel.d != spec.d:
        raise ValueError(f"channel dimension {channel.d} != state dimension {spec.d}")
    ns = range(1, spec.N) if n is None else [n]
    for m in ns:
        _check_n(spec, m)
    w = spec.weights
    ii, jj = np.triu_indices(spec.d, k=1)
    wi, wj = w[ii], w[jj]
    p, N = channel.p, spec.N
    values, contributions = {}, {}
    for m in ns:
        if channel.kind is ChannelKind.PHASE_DAMPING:
            eig = -np.sqrt(wi * wj) * (1.0 - p) ** N
        else:
            rest = w.sum() - wi - wj
            eig = _block(wi, wj, rest, p, spec.d, N, m, spectators)[-1]
        contrib = np.maximum(-eig, 0.0)
        total = 0.0
        for a, b, c in zip(ii.tolist(), jj.tolist(), contrib.tolist()):
            contributions[(a, b, m)] = c
            total += c
        values[m] = total
    return NegativityReport(spec, channel.kind, p, values, contributions)


class CriticalKind(enum.Enum):
    VANISH_BALANCED = "vanish-balanced"
    VANISH_PARTITION = "vanish-partition"
    EPSILON_THRESHOLD = "epsilon-threshold"


class Method(enum.Enum):
    CLOSED_FORM = "closed-form"
    BISECTION = "bisection"


@dataclass(frozen=True)
class CriticalProbability:
    """A critical channel strength, maximized over contributing level pairs.

    Pairs sharing the same populations ``(w_i, w_j)`` always share the same
    root, so values are stored once per population signature and expanded
    into ``pair_values`` on demand.
    """

    kind: CriticalKind
    value: float | None
    method: Method
    n: int | None = None
    epsilon: float | None = None
    multiplicity_warning: bool = False
    warnings: tuple[str, ...] = ()
    _weights: np.ndarray | None = field(default=None, repr=False, compare=False)
    _by_signature: dict = field(default_factory=dict, repr=False, compare=False)

    def pair_value(self, i: int, j: int) -> float | None:
        w = self._weights
        if w is None or w[i] == 0.0 or w[j] == 0.0:
            return None
        return self._by_signature[_signature(w[i], w[j])]

    @property
    def pair_values(self) -> dict[tuple[int, int], float]:
        if self._weights is None:
            return {}
        d = len(self._weights)
        out = {}
        for i in range(d):
            for j in range(i + 1, d):
                v = self.pair_value(i, j)
                if v is not None:
                    out[(i, j)] = v
        return out


def _signature(wi, wj):
    return (float(min(wi, wj)), float(max(wi, wj)))


def _signatures(spec: GHZSpec):
    """Distinct ``(w_i, w_j)`` signatures over active pairs, with spectator weight."""
    w = spec.weights
    total = w.sum()
    vals, counts = np.unique(w[spec.active], return_counts=True)
    out = []
    for a in range(len(vals)):
        if counts[a] >= 2:
            out.append((vals[a], vals[a]))
        for b in range(a + 1, len(vals)):
            out.append((vals[a], vals[b]))
    return [(wi, wj, max(total - wi - wj, 0.0)) for wi, wj in out], w


def _scan_root(f, lo=0.0, hi=1.0, step=SCAN_STEP):
    """Smallest sign change of vectorized ``f`` on a uniform grid, refined by bisection.

    Returns ``(root, number_of_sign_changes)``; root is None without a change.
    """
    grid = np.linspace(lo, hi, int(round((hi - lo) / step)) + 1)
    vals = f(grid)
    pos = vals > 0.0
    changes = np.flatnonzero(pos[1:] != pos[:-1])
    if changes.size == 0:
        return None, 0
    k = changes[0]
    a, b = grid[k], grid[k + 1]
    if vals[k] == 0.0:
        return float(a), int(changes.size)
    root = optimize.bisect(lambda x: float(f(np.float64(x))), a, b,
                           xtol=ROOT_XTOL, maxiter=ROOT_MAXITER)
    return float(root), int(changes.size)


def _product_result(kind, method, n=None, epsilon=None):
    return CriticalProbability(kind, None, method, n=n, epsilon=epsilon,
                               warnings=("product state: no entangled pair",))


def _balanced_closed_form(wi, wj, d, N):
    g = math.sqrt(wi * wj) ** (2.0 / N)
    s = (wi + wj) ** (1.0 / N)
    return 2 * g * d / (2 * g * d + s * (s + math.sqrt(4 * g + s * s)))


def critical_p_balanced_closed_form(spec: GHZSpec) -> CriticalProbability:
    """Vanishing point of the ``N/2 | N/2`` negativity under depolarizing noise.

    Closed-form root of ``lambda_{N/2} = |a_i a_j| (1-p)^N`` without spectator
    terms, which is exact for qubits and two-level states and an
    approximation otherwise (a warning is attached in that case).
    """
    N, d = spec.N, spec.d
    if N % 2:
        raise UnsupportedClosedFormError(
            f"balanced closed form needs even N (got N={N}); "
            "use critical_p_partition(spec, channel, n=N//2)")
    kind = CriticalKind.VANISH_BALANCED
    if spec.is_product:
        return _product_result(kind, Method.CLOSED_FORM, n=N // 2)
    sigs, w = _signatures(spec)
    by_sig = {_signature(wi, wj): _balanced_closed_form(wi, wj, d, N) for wi, wj, _ in sigs}
    warnings = (SPECTATOR_WARNING,) if any(rest > 0.0 for *_, rest in sigs) else ()
    return CriticalProbability(kind, max(by_sig.values()), Method.CLOSED_FORM, n=N // 2,
                               warnings=warnings, _weights=w, _by_signature=by_sig)


def critical_p_partition(spec: GHZSpec, channel, n: int, spectators: bool = True) -> CriticalProbability:
    """Channel strength at which the ``(N-n)|n`` negativity vanishes.

    Depolarizing: per pair, the smallest root of the block determinant
    ``eta(p) = lambda_n lambda_{N-n} - |a_i a_j|^2 (1-p)^(2N)`` (same sign as
    the smaller block eigenvalue).  Phase damping never reaches zero before
    ``p = 1``.
    """
    _check_n(spec, n)
    kind = CriticalKind.VANISH_PARTITION
    if _kind(channel) is ChannelKind.PHASE_DAMPING:
        if spec.is_product:
            return _product_result(kind, Method.CLOSED_FORM, n=n)
        sigs, w = _signatures(spec)
        by_sig = {_signature(wi, wj): 1.0 for wi, wj, _ in sigs}
        return CriticalProbability(kind, 1.0, Method.CLOSED_FORM, n=n,
                                   _weights=w, _by_signature=by_sig)
    if spec.is_product:
        return _product_result(kind, Method.BISECTION, n=n)
    d, N = spec.d, spec.N
    sigs, w = _signatures(spec)
    by_sig, multiple, warnings = {}, False, []
    for wi, wj, rest in sigs:
        def eta(p, wi=wi, wj=wj, rest=rest):
            lam_a, lam_b = _lambdas(wi, wj, rest, p, d, N, n, spectators)
            return lam_a * lam_b - wi * wj * (1.0 - p) ** (2 * N)
        root, changes = _scan_root(eta)
        if root is None:
            warnings.append(f"no sign change for populations ({wi:.6g}, {wj:.6g})")
            root = 1.0
        if changes > 1:
            multiple = True
        by_sig[_signature(wi, wj)] = root
    if multiple:
        warnings.append("more than one sign change found; smallest root reported")
    return CriticalProbability(kind, max(by_sig.values()), Method.BISECTION, n=n,
                               multiplicity_warning=multiple, warnings=tuple(warnings),
                               _weights=w, _by_signature=by_sig)


def epsilon_threshold(spec: GHZSpec, channel, epsilon: float, n: int | None = None,
                      spectators: bool = True) -> CriticalProbability:
    """Channel strength at which the dominant block eigenvalue has shrunk to ``epsilon``
    times its noiseless value.

    Depolarizing: per pair, smallest root of ``mu_n(p) - epsilon * mu_n(0)``.  At
    ``n = N/2`` with ``spectators=False`` this is

        (w_i + w_j) (p/d)^(N/2) (1 - (d-1)p/d)^(N/2) - |a_i a_j| (1-p)^N + epsilon |a_i a_j| = 0.

    Phase damping: ``1 - epsilon^(1/N)`` for every pair and every ``n``.
    ``n`` defaults to ``N // 2``.
    """
    if not 0.0 < epsilon < 1.0:
        raise ValueError(f"epsilon={epsilon} must lie in (0, 1)")
    N, d = spec.N, spec.d
    if n is None:
        n = N // 2
    _check_n(spec, n)
    kind = CriticalKind.EPSILON_THRESHOLD
    if _kind(channel) is ChannelKind.PHASE_DAMPING:
        if spec.is_product:
            return _product_result(kind, Method.CLOSED_FORM, n=n, epsilon=epsilon)
        value = 1.0 - epsilon ** (1.0 / N)
        sigs, w = _signatures(spec)
        by_sig = {_signature(wi, wj): value for wi, wj, _ in sigs}
        return CriticalProbability(kind, value, Method.CLOSED_FORM, n=n, epsilon=epsilon,
                                   _weights=w, _by_signature=by_sig)
    if spec.is_product:
        return _product_result(kind, Method.BISECTION, n=n, epsilon=epsilon)
    sigs, w = _signatures(spec)
    by_sig, multiple, warnings = {}, False, []
    for wi, wj, rest in sigs:
        target = epsilon * math.sqrt(wi * wj)

        def g(p, wi=wi, wj=wj, rest=rest, target=target):
            return _block(wi, wj, rest, p, d, N, n, spectators)[-1] + target
        root, changes = _scan_root(g)
        if root is None:
            warnings.append(f"no sign change for populations ({wi:.6g}, {wj:.6g})")
            root = 1.0
        if changes > 1:
            multiple = True
        by_sig[_signature(wi, wj)] = root
    if multiple:
        warnings.append("more than one sign change found; smallest root reported")
    return CriticalProbability(kind, max(by_sig.values()), Method.BISECTION, n=n, epsilon=epsilon,
                               multiplicity_warning=multiple, warnings=tuple(warnings),
                               _weights=w, _by_signature=by_sig)


def asymptote_balanced(d: int) -> float:
    """Large-N limit ``2d / (2d + 1 + sqrt 5)`` of the balanced vanishing point."""
    return 2 * d / (2 * d + 1 + math.sqrt(5))


def epsilon_scaling_estimate(N: int, epsilon: float) -> float:
    """Large-N estimate ``-ln(epsilon) / N`` of the epsilon threshold."""
    return -math.log(epsilon) / N


def large_d_epsilon_limit(N: int, epsilon: float) -> float:
    """Large-d limit ``1 - epsilon^(1/N)`` of the depolarizing epsilon threshold."""
    return 1.0 - epsilon ** (1.0 / N)
