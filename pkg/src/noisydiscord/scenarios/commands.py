"""Library side of the CLI: trajectories, steady states, the reference steady-state table and scans."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ..correlations import CorrelationRecord, measure_all, measure_matrix
from ..noisedyn import ConfigError, EvolutionConfig, Trajectory, evolve, steady_map
from ..qstate import (
    NoiseConfig,
    as_x_state,
    make_alpha_state,
    make_bell,
    make_beta_state,
    make_product,
)
from .config import RunConfig

MEASURES = CorrelationRecord.names()
EVOLVE_HEADER = ["t", *MEASURES]


def _fmt(v: float) -> str:
    return repr(float(v))


def _write_csv(rows, header, path=None) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    text = buf.getvalue()
    if path is not None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return text


# --- evolve -------------------------------------------------------------------


def run_trajectory(cfg: RunConfig) -> tuple[Trajectory, list[CorrelationRecord]]:
    if cfg.evolution is None:
        raise ConfigError("t_end is required to evolve")
    traj = evolve(cfg.initial_state.build(), cfg.hamiltonian, cfg.noise, cfg.evolution)
    return traj, [measure_matrix(rho) for rho in traj.states]


def evolve_csv(times, records, path=None) -> str:
    rows = ([_fmt(t), *(_fmt(getattr(r, m)) for m in MEASURES)] for t, r in zip(times, records))
    return _write_csv(rows, EVOLVE_HEADER, path)


def cmd_evolve(cfg: RunConfig, path=None) -> str:
    """Integrate ``cfg`` and write one CSV row of measures per sample."""
    traj, records = run_trajectory(cfg)
    return evolve_csv(traj.times, records, path if path is not None else cfg.output_path)


# --- steady -------------------------------------------------------------------


def cmd_steady(cfg: RunConfig) -> CorrelationRecord:
    if not cfg.hamiltonian.is_zero:
        raise ConfigError("steady maps hold only for delta0 = omega0 = 0")
    x0 = as_x_state(cfg.initial_state.build())
    return measure_all(steady_map(x0, cfg.noise))


def format_record(record: CorrelationRecord) -> str:
    return "".join(f"{k}={_fmt(v)}\n" for k, v in record.as_dict().items())


# --- table1 --------------------------------------------------------------------

TABLE_MEASURES = ("eof", "qd", "gmqd", "cc", "linear_entropy")
TABLE_LABELS = ("EoF", "QD", "GMQD", "CC", "S_L")
TABLE_BLOCKS = {
    "transverse": NoiseConfig(0.0, 0.05),
    "collective": NoiseConfig(0.05, 0.05),
}

# printed values, per row: (transverse block, collective block)
PRINTED_TABLE1 = {
    "gg/ee": (("0", "0.311", "0.0625", "0.189", "0.833"), ("0", "1/3", "0.0556", "0.0817", "8/9")),
    "eg/ge": (("0", "0.311", "0.0625", "0.189", "0.833"), ("0", "0.126", "0.0556", "0.0817", "8/9")),
    "phi_plus": (("0", "0", "0", "1", "6/9"), ("0", "1/3", "0.0556", "0.0817", "8/9")),
    "phi_minus": (("1", "1", "0.5", "1", "0"), ("1", "1", "0.5", "1", "0")),
    "psi_plus": (("0", "0", "0", "1", "6/9"), ("0", "1/3", "0.0556", "0.0817", "8/9")),
    "psi_minus": (("1", "1", "0.5", "1", "0"), ("0", "1/3", "0.0556", "0.0817", "8/9")),
}

TABLE_STATES = {
    "gg/ee": lambda: make_product("gg"),
    "eg/ge": lambda: make_product("eg"),
    "phi_plus": lambda: make_bell("phi_plus"),
    "phi_minus": lambda: make_bell("phi_minus"),
    "psi_plus": lambda: make_bell("psi_plus"),
    "psi_minus": lambda: make_bell("psi_minus"),
}


@dataclass(frozen=True)
class TableEntry:
    state: str
    block: str
    measure: str
    computed: float
    printed_text: str

    @property
    def printed(self) -> float:
        return float(Fraction(self.printed_text))

    @property
    def gap(self) -> float:
        return abs(self.computed - self.printed)


def table1() -> list[TableEntry]:
    entries = []
    for state, build in TABLE_STATES.items():
        x0 = as_x_state(build())
        for b, (block, noise) in enumerate(TABLE_BLOCKS.items()):
            rec = measure_all(steady_map(x0, noise)).as_dict()
            for m, printed in zip(TABLE_MEASURES, PRINTED_TABLE1[state][b]):
                entries.append(TableEntry(state, block, m, rec[m], printed))
    return entries


def format_table1(entries: list[TableEntry]) -> str:
    lines = []
    for block in TABLE_BLOCKS:
        lines.append(f"[{block}]")
        lines.append(f"{'state':<10} " + " ".join(f"{lab:>22}" for lab in TABLE_LABELS))
        for state in TABLE_STATES:
            cells = []
            for m in TABLE_MEASURES:
                e = next(e for e in entries if (e.state, e.block, e.measure) == (state, block, m))
                cells.append(f"{e.computed:.4f} ({e.printed_text}) {e.gap:.0e}".rjust(22))
            lines.append(f"{state:<10} " + " ".join(cells))
        lines.append("")
    worst = max(e.gap for e in entries)
    lines.append(f"max |computed - printed| = {worst:.2e}")
    return "\n".join(lines) + "\n"


def table1_csv(entries, path=None) -> str:
    rows = (
        [e.state, e.block, e.measure, f"{e.computed:.4f}", e.printed_text, f"{e.gap:.6f}"]
        for e in entries
    )
    return _write_csv(rows, ["state", "block", "measure", "computed", "printed", "gap"], path)


# --- scans --------------------------------------------------------------------

SCAN_NOISE = {
    "transverse": NoiseConfig(0.0, 0.05),
    "collective": NoiseConfig(0.05, 0.05),
}


@dataclass
class ScanResult:
    parameter: str
    values: np.ndarray
    records: list[CorrelationRecord]
    peaks: list[tuple[float, float]] = field(default_factory=list)

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.records])


def _vertex_shift(left, mid, right) -> float:
    """Offset (in stencil steps) of the parabola through three equispaced points."""
    curv = left - 2 * mid + right
    if curv >= 0:
        return 0.0
    return float(np.clip(0.5 * (left - right) / curv, -1.0, 1.0))


def grid_peaks(y, tol: float = 1e-12) -> list[int]:
    """Indices of interior grid maxima; flat stretches (within ``tol``) are skipped."""
    y = np.asarray(y, float)
    peaks: list[int] = []
    for i in range(1, len(y) - 1):
        left, mid, right = y[i - 1], y[i], y[i + 1]
        if mid >= left and mid >= right and mid > min(left, right) + tol:
            if mid == left and peaks and peaks[-1] == i - 1:
                continue
            peaks.append(i)
    return peaks


def refine_peak(f, x0: float, h: float, lo=0.0, hi=1.0, rounds: int = 40) -> tuple[float, float]:
    """Repeated 3-point quadratic fits on ``f`` around ``x0``, halving the stencil.

    The maxima of steady discord are often kinks (two measurement branches
    cross) where a single parabola on the coarse grid is biased.
    """
    x = x0
    fx = f(x)
    for _ in range(rounds):
        a, b = max(lo, x - h), min(hi, x + h)
        fa, fb = f(a), f(b)
        if fa > fx or fb > fx:
            x, fx = (a, fa) if fa >= fb else (b, fb)
            continue
        if b - x == x - a:
            cand = x + _vertex_shift(fa, fx, fb) * h
            fc = f(cand)
            if fc > fx:
                x, fx = cand, fc
        h *= 0.5
    return x, fx


def refine_peaks(x, y, f=None, tol: float = 1e-12) -> list[tuple[float, float]]:
    """Grid maxima refined by quadratic fits.

    Without ``f`` a single parabola through the grid neighbours is used.
    With ``f`` the fit is iterated on the function itself, and a rising
    endpoint is also tried since a narrow peak can hide next to it; peaks
    that settle on the boundary are dropped.
    """
    x, y = np.asarray(x, float), np.asarray(y, float)
    h = x[1] - x[0]
    if f is None:
        out = []
        for i in grid_peaks(y, tol):
            s = _vertex_shift(y[i - 1], y[i], y[i + 1])
            out.append((x[i] + s * h, y[i] - 0.25 * (y[i - 1] - y[i + 1]) * s))
        return out
    starts = grid_peaks(y, tol)
    if y[0] > y[1] + tol:
        starts.insert(0, 0)
    if y[-1] > y[-2] + tol:
        starts.append(len(y) - 1)
    out = []
    for i in starts:
        px, py = refine_peak(f, x[i], h, x[0], x[-1])
        if x[0] < px < x[-1] and not any(abs(px - q) < h for q, _ in out):
            out.append((px, py))
    return out


def cmd_scan_alpha(family: str, noise_case: str, n_points: int) -> ScanResult:
    """Steady-state measures over alpha in [0, 1] for a Bell-like family."""
    if n_points < 50:
        raise ConfigError("scan-alpha needs at least 50 points")
    if family not in ("phi_alpha_plus", "psi_alpha_plus"):
        raise ConfigError(f"unknown family {family!r}")
    if noise_case not in SCAN_NOISE:
        raise ConfigError(f"unknown noise case {noise_case!r}")
    noise = SCAN_NOISE[noise_case]
    alphas = np.linspace(0.0, 1.0, n_points)

    def steady(a):
        return measure_all(steady_map(as_x_state(make_alpha_state(family, a)), noise))

    result = ScanResult("alpha", alphas, [steady(a) for a in alphas])
    result.peaks = refine_peaks(alphas, result.column("qd"), lambda a: steady(a).qd)
    return result


def cmd_scan_beta(n_points: int) -> ScanResult:
    """Collective-noise steady measures over beta in [0, 1]."""
    if n_points < 11:
        raise ConfigError("scan-beta needs at least 11 points")
    noise = SCAN_NOISE["collective"]
    betas = np.linspace(0.0, 1.0, n_points)
    records = [measure_all(steady_map(as_x_state(make_beta_state(b)), noise)) for b in betas]
    return ScanResult("beta", betas, records)


def scan_csv(result: ScanResult, path=None) -> str:
    rows = (
        [_fmt(v), *(_fmt(getattr(r, m)) for m in MEASURES)]
        for v, r in zip(result.values, result.records)
    )
    return _write_csv(rows, [result.parameter, *MEASURES], path)
