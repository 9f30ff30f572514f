"""Clock and shift operators on a single qudit and the two local noise maps.

Both maps are available in two forms.  :func:`apply_channel` uses the
closed-form action and is what the rest of the package calls;
:func:`apply_channel_twirl` evaluates the explicit weighted sum of
clock/shift conjugations and only exists to cross-check the closed form.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace

import numpy as np

from .errors import InvalidDimensionError

__all__ = [
    "ChannelKind",
    "ChannelModel",
    "shift_matrix",
    "clock_matrix",
    "apply_channel",
    "apply_channel_twirl",
    "choi_matrix",
    "is_hermitian",
]

CHOI_MAX_DIM = 16


class ChannelKind(enum.Enum):
    DEPOLARIZING = "depolarizing"
    PHASE_DAMPING = "phase-damping"

    @classmethod
    def parse(cls, value) -> "ChannelKind":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower().replace("_", "-")
        aliases = {"depol": "depolarizing", "dephasing": "phase-damping", "phase": "phase-damping"}
        key = aliases.get(key, key)
        try:
            return cls(key)
        except ValueError:
            raise ValueError(f"unknown channel kind {value!r}") from None


@dataclass(frozen=True)
class ChannelModel:
    """A local noise map of strength ``p`` acting on one qudit of dimension ``d``."""

    kind: ChannelKind
    p: float
    d: int

    def __post_init__(self):
        object.__setattr__(self, "kind", ChannelKind.parse(self.kind))
        _check_dim(self.d)
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"channel strength p={self.p} outside [0, 1]")

    def with_p(self, p: float) -> "ChannelModel":
        return replace(self, p=p)


def _check_dim(d):
    if int(d) != d or d < 2:
        raise InvalidDimensionError(f"local dimension must be an integer >= 2, got {d}")


def shift_matrix(d: int) -> np.ndarray:
    """Cyclic shift ``X|i> = |i+1 mod d>``."""
    _check_dim(d)
    return np.roll(np.eye(d, dtype=complex), 1, axis=0)


def clock_matrix(d: int) -> np.ndarray:
    """Clock ``Z|i> = w^i |i>`` with ``w = exp(2 pi i / d)``."""
    _check_dim(d)
    omega = np.exp(2j * np.pi / d)
    return np.diag(omega ** np.arange(d))


def is_hermitian(a: np.ndarray, rtol: float = 1e-12) -> bool:
    a = np.asarray(a)
    scale = max(np.abs(a).max(initial=0.0), 1.0)
    return bool(np.abs(a - a.conj().T).max(initial=0.0) <= rtol * a.shape[0] * scale)


def _check_operator(channel: ChannelModel, a) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    if a.shape != (channel.d, channel.d):
        raise InvalidDimensionError(
            f"operator shape {a.shape} does not match channel dimension {channel.d}"
        )
    return a


def apply_channel(channel: ChannelModel, rho) -> np.ndarray:
    """Closed-form channel action on a ``d x d`` operator.

    The depolarizing map is written as ``(1-p) rho + (p/d) tr(rho) 1`` so that
    it stays linear on operators that are not normalized.
    """
    rho = _check_operator(channel, rho)
    p, d = channel.p, channel.d
    if channel.kind is ChannelKind.DEPOLARIZING:
        return (1 - p) * rho + (p / d) * np.trace(rho) * np.eye(d)
    return (1 - p) * rho + p * np.diag(np.diag(rho))


def apply_channel_twirl(channel: ChannelModel, a) -> np.ndarray:
    """Channel action as an explicit sum of clock/shift conjugations.

    d**2 terms ``X^i Z^j A Z^-j X^-i`` for the depolarizing map, d terms
    ``Z^i A Z^-i`` for phase damping.
    """
    a = _check_operator(channel, a)
    p, d = channel.p, channel.d
    x, z = shift_matrix(d), clock_matrix(d)
    zs = [np.linalg.matrix_power(z, k) for k in range(d)]
    if channel.kind is ChannelKind.DEPOLARIZING:
        xs = [np.linalg.matrix_power(x, k) for k in range(d)]
        acc = np.zeros_like(a)
        for xi in xs:
            for zj in zs:
                u = xi @ zj
                acc += u @ a @ u.conj().T
        return (1 - p) * a + (p / d**2) * acc
    acc = sum(zi @ a @ zi.conj().T for zi in zs)
    return (1 - p) * a + (p / d) * acc


def choi_matrix(channel: ChannelModel) -> np.ndarray:
    """Choi matrix ``(E x id)(|Phi><Phi|)`` with unnormalized ``|Phi> = sum_k |kk>``.

    The output factor is the first tensor slot.
    """
    d = channel.d
    if d > CHOI_MAX_DIM:
        raise InvalidDimensionError(f"choi_matrix supports d <= {CHOI_MAX_DIM}, got {d}")
    choi = np.zeros((d, d, d, d), dtype=complex)
    for k in range(d):
        for l in range(d):
            unit = np.zeros((d, d), dtype=complex)
            unit[k, l] = 1.0
            choi[:, k, :, l] = apply_channel(channel, unit)
    return choi.reshape(d * d, d * d)
