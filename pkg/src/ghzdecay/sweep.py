"""Grid evaluation of critical strengths, asymptote tables and oracle verification."""

from __future__ import annotations

import csv
import enum
import io
import json
import math
import time
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from . import __version__
from . import analytic
from .analytic import Method
from .channels import ChannelKind, ChannelModel
from .errors import CapacityError, GHZDecayError
from .ghz import GHZSpec, dense_cap, make_ghz
from .oracle import evolve, negativity_exact, partial_transpose

__all__ = [
    "Quantity",
    "SweepRequest",
    "SweepTable",
    "run_sweep",
    "asymptote_report",
    "InstanceResult",
    "VerificationReport",
    "verify",
    "default_suite",
    "verify_tolerance",
    "plot_script",
    "DEFAULT_N_VALUES",
    "DEFAULT_EPSILON",
]

DEFAULT_N_VALUES = (4, 6, 8)
DEFAULT_EPSILON = 0.01
DEFAULT_P_GRID = tuple(np.round(np.linspace(0.0, 1.0, 11), 10))


class Quantity(enum.Enum):
    P_BALANCED = "p-balanced"
    P_LEAST_BALANCED = "p-least-balanced"
    P_EPSILON = "p-epsilon"
    NEGATIVITY_CURVE = "negativity-curve"


@dataclass(frozen=True)
class SweepRequest:
    """Grid specification.

    ``amplitudes`` is ``"equal"`` (``a_i = 1/sqrt d``) or a mapping from ``d``
    to an explicit amplitude list.  ``p_grid`` and ``n`` only matter for
    negativity curves (``n`` defaults to ``N // 2``).
    """

    quantity: Quantity
    d_values: Sequence[int]
    N_values: Sequence[int] = DEFAULT_N_VALUES
    channel: ChannelKind = ChannelKind.DEPOLARIZING
    epsilon: float = DEFAULT_EPSILON
    amplitudes: str | Mapping[int, Sequence[complex]] = "equal"
    p_grid: Sequence[float] = DEFAULT_P_GRID
    n: int | None = None
    spectators: bool = True

    def __post_init__(self):
        object.__setattr__(self, "quantity", Quantity(self.quantity))
        object.__setattr__(self, "channel", ChannelKind.parse(self.channel))
        object.__setattr__(self, "d_values", tuple(int(d) for d in self.d_values))
        object.__setattr__(self, "N_values", tuple(int(N) for N in self.N_values))
        object.__setattr__(self, "p_grid", tuple(float(p) for p in self.p_grid))
        if not self.d_values or not self.N_values:
            raise ValueError("d and N value lists must be nonempty")
        if self.quantity is Quantity.P_EPSILON and not 0.0 < self.epsilon < 1.0:
            raise ValueError(f"epsilon={self.epsilon} must lie in (0, 1)")
        if self.quantity is Quantity.NEGATIVITY_CURVE:
            if not self.p_grid:
                raise ValueError("negativity curves need a nonempty p grid")
            if any(not 0.0 <= p <= 1.0 for p in self.p_grid):
                raise ValueError("p grid values must lie in [0, 1]")
        if self.amplitudes != "equal" and not isinstance(self.amplitudes, Mapping):
            raise ValueError("amplitudes must be 'equal' or a mapping d -> amplitude list")

    def spec(self, d: int, N: int) -> GHZSpec:
        if self.amplitudes == "equal":
            return make_ghz(d, N, np.full(d, 1 / math.sqrt(d)))
        return make_ghz(d, N, self.amplitudes[d])


@dataclass
class SweepTable:
    columns: tuple[str, ...]
    rows: list[tuple]
    provenance: dict = field(default_factory=dict)

    def column(self, name: str) -> list:
        k = self.columns.index(name)
        return [row[k] for row in self.rows]

    def records(self) -> list[dict]:
        return [dict(zip(self.columns, row)) for row in self.rows]

    def lookup(self, **keys) -> dict:
        for rec in self.records():
            if all(rec[k] == v for k, v in keys.items()):
                return rec
        raise KeyError(keys)

    def to_csv(self, precision: int = 12, provenance: bool = True, timestamp: bool = False) -> str:
        buf = io.StringIO()
        if provenance:
            stamp = dict(self.provenance)
            if timestamp:
                stamp["generated"] = time.strftime("%Y-%m-%dT%H:%M:%S%z")
            buf.write("# " + json.dumps(stamp, sort_keys=True) + "\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.columns)
        for row in self.rows:
            writer.writerow([_fmt(v, precision) for v in row])
        return buf.getvalue()

    def to_json(self, precision: int = 12) -> str:
        recs = [{k: _json_value(v, precision) for k, v in rec.items()} for rec in self.records()]
        return json.dumps(recs, indent=1) + "\n"


def _fmt(v, precision):
    if v is None:
        return ""
    if isinstance(v, (float, np.floating)):
        return format(float(v), f".{precision}g")
    return str(v)


def _json_value(v, precision):
    if isinstance(v, (float, np.floating)):
        return float(format(float(v), f".{precision}g"))
    return v


def _provenance(**extra):
    stamp = {
        "ghzdecay": __version__,
        "scan_step": analytic.SCAN_STEP,
        "root_xtol": analytic.ROOT_XTOL,
    }
    stamp.update(extra)
    return stamp


def _critical(req: SweepRequest, spec: GHZSpec):
    N = spec.N
    if req.quantity is Quantity.P_BALANCED:
        if req.channel is ChannelKind.DEPOLARIZING and N % 2 == 0:
            return analytic.critical_p_balanced_closed_form(spec)
        return analytic.critical_p_partition(spec, req.channel, N // 2, spectators=req.spectators)
    if req.quantity is Quantity.P_LEAST_BALANCED:
        return analytic.critical_p_partition(spec, req.channel, 1, spectators=req.spectators)
    return analytic.epsilon_threshold(spec, req.channel, req.epsilon, spectators=req.spectators)


def _method_tag(req):
    if req.quantity is Quantity.P_BALANCED and req.channel is ChannelKind.DEPOLARIZING:
        return Method.CLOSED_FORM.value
    if req.channel is ChannelKind.PHASE_DAMPING:
        return Method.CLOSED_FORM.value
    return Method.BISECTION.value


def run_sweep(req: SweepRequest) -> SweepTable:
    """Evaluate ``req.quantity`` on the ``(d, N)`` grid, rows in ``(d, N)`` order.

    A failing grid point produces a row with an empty value and the error
    text in the ``warning`` column.
    """
    curve = req.quantity is Quantity.NEGATIVITY_CURVE
    columns = ("d", "N", "n", "p", "value", "method", "warning") if curve else \
        ("d", "N", "value", "method", "warning")
    rows = []
    for d in sorted(req.d_values):
        for N in sorted(req.N_values):
            try:
                spec = req.spec(d, N)
                if curve:
                    n = req.n if req.n is not None else N // 2
                    for p in req.p_grid:
                        rep = analytic.negativity(spec, ChannelModel(req.channel, p, d), n,
                                                  spectators=req.spectators)
                        rows.append((d, N, n, p, rep[n], "analytic", ""))
                    continue
                cp = _critical(req, spec)
                warning = "; ".join(cp.warnings)
                rows.append((d, N, cp.value, cp.method.value, warning))
            except (GHZDecayError, ValueError, KeyError, IndexError) as exc:
                err = f"{type(exc).__name__}: {exc}"
                if curve:
                    rows.append((d, N, req.n, None, None, "analytic", err))
                else:
                    rows.append((d, N, None, _method_tag(req), err))
    prov = _provenance(quantity=req.quantity.value, channel=req.channel.value,
                       amplitudes="equal" if req.amplitudes == "equal" else "explicit",
                       spectators=req.spectators)
    if req.quantity is Quantity.P_EPSILON:
        prov["epsilon"] = req.epsilon
    return SweepTable(columns, rows, prov)


def _rel(x, ref):
    return (x - ref) / ref if ref else float("nan")


def asymptote_report(d_values, N_values, epsilon: float = DEFAULT_EPSILON,
                     amplitudes="equal") -> SweepTable:
    """Exact depolarizing thresholds next to their large-N and large-d limits.

    ``p_balanced`` uses the closed form for even N and the partition root for
    odd N; ``p_epsilon`` is the balanced epsilon threshold.
    """
    if not 0.0 < epsilon < 1.0:
        raise ValueError(f"epsilon={epsilon} must lie in (0, 1)")
    req = SweepRequest(Quantity.P_EPSILON, d_values, N_values, epsilon=epsilon, amplitudes=amplitudes)
    columns = ("d", "N", "p_balanced", "balanced_limit", "balanced_rel_dev",
               "p_epsilon", "log_estimate", "log_rel_dev", "large_d_limit", "large_d_rel_dev")
    rows = []
    for d in sorted(req.d_values):
        for N in sorted(req.N_values):
            spec = req.spec(d, N)
            if N % 2 == 0:
                pb = analytic.critical_p_balanced_closed_form(spec).value
            else:
                pb = analytic.critical_p_partition(spec, ChannelKind.DEPOLARIZING, N // 2).value
            pe = analytic.epsilon_threshold(spec, ChannelKind.DEPOLARIZING, epsilon).value
            bl = analytic.asymptote_balanced(d)
            le = analytic.epsilon_scaling_estimate(N, epsilon)
            ld = analytic.large_d_epsilon_limit(N, epsilon)
            rows.append((d, N, pb, bl, _rel(pb, bl), pe, le, _rel(pe, le), ld, _rel(pe, ld)))
    return SweepTable(columns, rows, _provenance(quantity="asymptotes", epsilon=epsilon))


def verify_tolerance(dim: int) -> float:
    return 1e-10 if dim <= 512 else 1e-9


@dataclass(frozen=True)
class InstanceResult:
    d: int
    N: int
    label: str
    channel: str
    max_deviation: float | None
    tolerance: float
    passed: bool
    seconds: float
    skipped: str = ""


@dataclass
class VerificationReport:
    results: list[InstanceResult]

    @property
    def ok(self) -> bool:
        return all(r.passed for r in self.results if not r.skipped)

    @property
    def max_deviation(self) -> float:
        devs = [r.max_deviation for r in self.results if r.max_deviation is not None]
        return max(devs, default=0.0)

    def table(self) -> SweepTable:
        columns = ("d", "N", "label", "channel", "max_deviation", "tolerance",
                   "passed", "seconds", "skipped")
        rows = [(r.d, r.N, r.label, r.channel, r.max_deviation, r.tolerance,
                 r.passed, r.seconds, r.skipped) for r in self.results]
        return SweepTable(columns, rows, _provenance(quantity="verify"))


def verify(instances, p_grid=DEFAULT_P_GRID, n_values=None, cap: int | None = None) -> VerificationReport:
    """Compare analytic and brute-force negativity on each instance.

    ``instances`` is an iterable of ``(label, spec, channel_kind)``.  For every
    ``p`` in ``p_grid`` and every ``n`` (all ``1 <= n <= N-1`` by default) the
    absolute deviation is recorded; an instance passes when the largest one
    stays within :func:`verify_tolerance`.
    """
    cap = dense_cap(cap)
    results = []
    for label, spec, kind in instances:
        kind = ChannelKind.parse(kind)
        tol = verify_tolerance(spec.dim)
        if spec.dim > cap:
            results.append(InstanceResult(spec.d, spec.N, label, kind.value, None, tol, False, 0.0,
                                          skipped=str(CapacityError(spec.dim, cap))))
            continue
        t0 = time.perf_counter()
        ns = range(1, spec.N) if n_values is None else [n for n in n_values if 1 <= n < spec.N]
        worst = 0.0
        for p in p_grid:
            ch = ChannelModel(kind, float(p), spec.d)
            rho = evolve(spec, ch, cap)
            rep = analytic.negativity(spec, ch)
            for n in ns:
                exact = negativity_exact(partial_transpose(rho, range(spec.N - n, spec.N)))
                worst = max(worst, abs(exact - rep[n]))
        dt = time.perf_counter() - t0
        results.append(InstanceResult(spec.d, spec.N, label, kind.value, worst, tol,
                                      worst <= tol, dt))
    return VerificationReport(results)


def random_amplitudes(rng: np.random.Generator, d: int) -> np.ndarray:
    a = rng.normal(size=d) + 1j * rng.normal(size=d)
    return a / np.linalg.norm(a)


def default_suite(d_values=(2, 3), N_values=(2, 3, 4), n_random: int = 20, seed: int = 2024):
    """Equal amplitudes plus ``n_random`` seeded complex amplitude vectors per
    ``(d, N)``, each under both channels."""
    rng = np.random.default_rng(seed)
    instances = []
    for d in d_values:
        vectors = [("equal", np.full(d, 1 / math.sqrt(d)))]
        vectors += [(f"random-{k}", random_amplitudes(rng, d)) for k in range(n_random)]
        for N in N_values:
            for label, a in vectors:
                spec = make_ghz(d, N, a)
                for kind in ChannelKind:
                    instances.append((label, spec, kind))
    return instances


def plot_script(csv_path: str, table: SweepTable) -> str:
    """Standalone matplotlib script that plots a sweep CSV, one curve per N."""
    x = "p" if "p" in table.columns else "d"
    return f'''"""Plot {csv_path} (generated by ghzdecay)."""
import csv

import matplotlib.pyplot as plt

curves = {{}}
with open({csv_path!r}, newline="") as fh:
    rows = csv.DictReader(line for line in fh if not line.startswith("#"))
    for row in rows:
        if row["value"]:
            curves.setdefault((row["d"], row["N"]) if {x!r} == "p" else row["N"], []).append(
                (float(row[{x!r}]), float(row["value"])))

fig, ax = plt.subplots()
for key, pts in sorted(curves.items()):
    xs, ys = zip(*sorted(pts))
    ax.plot(xs, ys, marker="o", label=f"{{key}}")
ax.set_xlabel({x!r})
ax.set_ylabel({table.provenance.get("quantity", "value")!r})
ax.legend(title="N" if {x!r} == "d" else "(d, N)")
fig.savefig({str(csv_path).rsplit(".", 1)[0] + ".png"!r}, dpi=150)
'''
