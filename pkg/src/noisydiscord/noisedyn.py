"""Noise-averaged dynamics of two qubits in fluctuating classical fields.

The averaged generator is

    d rho/dt = -i[H0, rho] - (gd/4)[Z,[Z,rho]] - (go/4)[X,[X,rho]]

with Z = sz(A) + sz(B), X = sx(A) + sx(B) for a common (global) field and
H0 = (delta0 Z + omega0 X)/2.  For independent (local) fields each qubit
gets its own double commutator and there is no coherent part.

Besides the integrator, this module holds the closed-form propagator for
pure longitudinal dephasing and the closed-form steady states reached from
X-structured initial states when delta0 = omega0 = 0.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .qstate import (
    HamiltonianParams,
    NoiseConfig,
    Topology,
    XState,
    check_density_matrix,
)

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)  # |e> = (1, 0)
I2 = np.eye(2, dtype=complex)

SX_A, SX_B = np.kron(SX, I2), np.kron(I2, SX)
SZ_A, SZ_B = np.kron(SZ, I2), np.kron(I2, SZ)
SX_TOT = SX_A + SX_B
SZ_TOT = SZ_A + SZ_B

STABILITY_LIMIT = 0.1


class StepSizeError(ValueError):
    """The requested RK4 step is too coarse for the generator's rates."""


class ConfigError(ValueError):
    """A noise or run configuration does not fit the requested operation."""


@dataclass(frozen=True)
class EvolutionConfig:
    """Integration horizon and sampling, in units of 1/omega.

    ``dt=None`` picks 0.01 / max(1, rates) for the run's parameters.
    """

    t_end: float
    dt: float | None = None
    record_every: int = 1

    def __post_init__(self):
        if not self.t_end > 0:
            raise ValueError(f"t_end must be > 0, got {self.t_end}")
        if self.dt is not None and not 0 < self.dt <= self.t_end:
            raise ValueError(f"dt must satisfy 0 < dt <= t_end, got {self.dt}")
        if int(self.record_every) != self.record_every or self.record_every < 1:
            raise ValueError(f"record_every must be a positive integer, got {self.record_every}")


@dataclass
class Trajectory:
    times: np.ndarray  # shape (n,)
    states: np.ndarray  # shape (n, 4, 4)

    def __len__(self):
        return len(self.times)

    @property
    def final(self) -> np.ndarray:
        return self.states[-1]


def hamiltonian(h: HamiltonianParams) -> np.ndarray:
    return 0.5 * (h.delta0 * SZ_TOT + h.omega0 * SX_TOT)


def _double_commutator(a, rho):
    return a @ a @ rho - 2 * a @ rho @ a + rho @ a @ a


def master_rhs(rho, h: HamiltonianParams, noise: NoiseConfig) -> np.ndarray:
    """Time derivative of ``rho`` under the averaged master equation."""
    rho = np.asarray(rho, dtype=complex)
    gd, go = noise.gamma_delta / 4, noise.gamma_omega / 4
    if noise.topology is Topology.GLOBAL:
        h0 = hamiltonian(h)
        out = -1j * (h0 @ rho - rho @ h0)
        out -= gd * _double_commutator(SZ_TOT, rho)
        out -= go * _double_commutator(SX_TOT, rho)
        return out
    # the local model carries no coherent term
    out = np.zeros((4, 4), dtype=complex)
    for z, x in ((SZ_A, SX_A), (SZ_B, SX_B)):
        out -= gd * _double_commutator(z, rho)
        out -= go * _double_commutator(x, rho)
    return out


def _dissipator_super(a):
    # row-major vec: vec(A rho B) = kron(A, B.T) vec(rho)
    a2 = a @ a
    eye = np.eye(4)
    return np.kron(a2, eye) - 2 * np.kron(a, a.T) + np.kron(eye, a2.T)


def liouvillian(h: HamiltonianParams, noise: NoiseConfig) -> np.ndarray:
    """16x16 generator acting on row-major vectorized density matrices."""
    eye = np.eye(4)
    gd, go = noise.gamma_delta / 4, noise.gamma_omega / 4
    if noise.topology is Topology.GLOBAL:
        h0 = hamiltonian(h)
        gen = -1j * (np.kron(h0, eye) - np.kron(eye, h0.T))
        gen -= gd * _dissipator_super(SZ_TOT) + go * _dissipator_super(SX_TOT)
        return gen
    gen = np.zeros((16, 16), dtype=complex)
    for z, x in ((SZ_A, SX_A), (SZ_B, SX_B)):
        gen -= gd * _dissipator_super(z) + go * _dissipator_super(x)
    return gen


def _max_rate(h: HamiltonianParams, noise: NoiseConfig) -> float:
    return max(noise.gamma_delta, noise.gamma_omega, abs(h.delta0), abs(h.omega0), 1.0)


def default_dt(h: HamiltonianParams, noise: NoiseConfig) -> float:
    return 0.01 / _max_rate(h, noise)


def rk4_propagator(gen: np.ndarray, dt: float) -> np.ndarray:
    """One classical RK4 step for a constant linear generator.

    For y' = L y the four stages collapse to the degree-4 Taylor polynomial
    of exp(L dt), so a step is a single matrix-vector product.
    """
    a = gen * dt
    step = np.eye(gen.shape[0], dtype=complex)
    term = step.copy()
    for k in range(1, 5):
        term = term @ a / k
        step = step + term
    return step


def _clean(rho):
    rho = 0.5 * (rho + rho.conj().T)
    return rho / np.trace(rho).real


def evolve(rho0, h: HamiltonianParams, noise: NoiseConfig, cfg: EvolutionConfig) -> Trajectory:
    """Integrate the master equation from ``rho0`` with fixed-step RK4.

    The step actually used is t_end / ceil(t_end / dt) so the last sample
    lands on t_end.  Samples are taken every ``record_every`` steps plus the
    final step; each sample is re-Hermitized and trace-normalized.
    """
    rho0 = check_density_matrix(rho0)
    dt = cfg.dt if cfg.dt is not None else default_dt(h, noise)
    if dt * _max_rate(h, noise) > STABILITY_LIMIT:
        raise StepSizeError(
            f"dt={dt} too large: dt * max rate = {dt * _max_rate(h, noise):.3g} > {STABILITY_LIMIT}"
        )
    n_steps = max(1, math.ceil(cfg.t_end / dt - 1e-9))
    step = cfg.t_end / n_steps
    prop = rk4_propagator(liouvillian(h, noise), step)

    every = int(cfg.record_every)
    n_rec = n_steps // every + 1 + (n_steps % every != 0)
    times = np.empty(n_rec)
    states = np.empty((n_rec, 4, 4), dtype=complex)
    vec = rho0.reshape(16).copy()
    times[0], states[0] = 0.0, rho0
    r = 1
    for k in range(1, n_steps + 1):
        vec = prop @ vec
        if k % every == 0 or k == n_steps:
            times[r] = k * step
            states[r] = _clean(vec.reshape(4, 4))
            r += 1
    return Trajectory(times, states)


def dephasing_propagate(x0: XState, gamma_delta: float, t: float) -> XState:
    """Exact state at time t under global longitudinal noise alone."""
    if gamma_delta < 0 or t < 0:
        raise ValueError("gamma_delta and t must be >= 0")
    return XState(x0.p1, x0.p2, x0.p3, x0.p4, x0.c14 * math.exp(-4 * gamma_delta * t), x0.c23)


def steady_detuning_only(x0: XState) -> XState:
    """Global longitudinal noise only: rho_14 is erased, all else kept."""
    return XState(x0.p1, x0.p2, x0.p3, x0.p4, 0j, x0.c23)


def steady_transverse_only(x0: XState) -> XState:
    """Global transverse noise only (delta0 = omega0 = 0)."""
    r11, r22, r33, r44 = x0.p1, x0.p2, x0.p3, x0.p4
    r14, r23 = x0.c14, x0.c23
    r41, r32 = np.conj(r14), np.conj(r23)
    p14 = (3 * r11 - r14 + r22 + r23 + r32 + r33 - r41 + 3 * r44) / 8
    p23 = (r11 + r14 + 3 * r22 - r23 - r32 + 3 * r33 + r41 + r44) / 8
    c14 = (-r11 + 3 * r14 + r22 + r23 + r32 + r33 + 3 * r41 - r44) / 8
    c23 = (r11 + r14 - r22 + 3 * r23 + 3 * r32 - r33 + r41 + r44) / 8
    return XState(p14.real, p23.real, p23.real, p14.real, c14.real, c23.real)


def steady_collective(x0: XState) -> XState:
    """Global longitudinal and transverse noise together (delta0 = omega0 = 0)."""
    r11, r22, r33, r44 = x0.p1, x0.p2, x0.p3, x0.p4
    r23 = x0.c23
    r32 = np.conj(r23)
    p14 = (2 * r11 + r22 + r23 + r32 + r33 + 2 * r44) / 6
    p23 = (r11 + 2 * r22 - r23 - r32 + 2 * r33 + r44) / 6
    c23 = (r11 - r22 + 2 * r23 + 2 * r32 - r33 + r44) / 6
    return XState(p14.real, p23.real, p23.real, p14.real, 0j, c23.real)


def steady_local(x0: XState, noise: NoiseConfig) -> XState:
    """Steady state under independent fields on each qubit.

    Longitudinal noise (alone or with transverse) leaves a diagonal state:
    populations are kept when it acts alone and flattened to 1/4 when both
    act.  Transverse noise alone flattens the populations and sets
    rho_14 = rho_23 = Re(rho_14 + rho_23) / 2.
    """
    if noise.topology is not Topology.LOCAL:
        raise ConfigError("steady_local needs a local-topology NoiseConfig")
    gd, go = noise.gamma_delta, noise.gamma_omega
    if gd == 0 and go == 0:
        raise ConfigError("steady_local needs at least one nonzero noise strength")
    if gd > 0 and go > 0:
        return XState(0.25, 0.25, 0.25, 0.25)
    if gd > 0:
        return XState(x0.p1, x0.p2, x0.p3, x0.p4)
    c = (x0.c14 + x0.c23 + np.conj(x0.c14) + np.conj(x0.c23)) / 4
    return XState(0.25, 0.25, 0.25, 0.25, c.real, c.real)


def steady_map(x0: XState, noise: NoiseConfig) -> XState:
    """Dispatch to the closed-form steady state for ``noise``."""
    if noise.topology is Topology.LOCAL:
        return steady_local(x0, noise)
    gd, go = noise.gamma_delta, noise.gamma_omega
    if gd > 0 and go > 0:
        return steady_collective(x0)
    if gd > 0:
        return steady_detuning_only(x0)
    if go > 0:
        return steady_transverse_only(x0)
    raise ConfigError("no active noise: every state is stationary, there is no steady map")


def steady_horizon(noise: NoiseConfig) -> float:
    """Fixed long-time horizon 20 / min(active strengths)."""
    if not noise.active:
        raise ConfigError("no active noise")
    return 20.0 / min(noise.active)
