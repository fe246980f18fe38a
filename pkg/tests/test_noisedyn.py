import numpy as np
import pytest
from hypothesis import given, settings

from noisydiscord.noisedyn import (
    ConfigError,
    EvolutionConfig,
    StepSizeError,
    dephasing_propagate,
    evolve,
    liouvillian,
    master_rhs,
    rk4_propagator,
    steady_collective,
    steady_detuning_only,
    steady_local,
    steady_map,
    steady_transverse_only,
)
from noisydiscord.qstate import (
    HamiltonianParams,
    NoiseConfig,
    XState,
    as_x_state,
    make_bell,
    make_c_class,
    make_product,
    off_x_leakage,
    random_x_state,
)

from conftest import x_states

H0 = HamiltonianParams()
G = 0.05
GLOBAL_CASES = {
    "detuning": NoiseConfig(G, 0.0),
    "transverse": NoiseConfig(0.0, G),
    "collective": NoiseConfig(G, G),
}
LOCAL_CASES = {
    "detuning": NoiseConfig(1.0, 0.0, "local"),
    "transverse": NoiseConfig(0.0, 1.0, "local"),
    "collective": NoiseConfig(1.0, 1.0, "local"),
}
GLOBAL_MAPS = {
    "detuning": steady_detuning_only,
    "transverse": steady_transverse_only,
    "collective": steady_collective,
}


def x_close(a: XState, b: XState, tol=1e-15):
    np.testing.assert_allclose(a.populations, b.populations, atol=tol, rtol=0)
    assert abs(a.c14 - b.c14) <= tol
    assert abs(a.c23 - b.c23) <= tol


def long_run(rho0, noise, h=H0, record_every=1000):
    t_end = 20 / min(noise.active)
    return evolve(rho0, h, noise, EvolutionConfig(t_end, record_every=record_every))


# --- generator ------------------------------------------------------------------


def test_rhs_zero_on_identity():
    for noise in [*GLOBAL_CASES.values(), *LOCAL_CASES.values()]:
        assert np.abs(master_rhs(np.eye(4) / 4, H0, noise)).max() == 0
    assert np.abs(master_rhs(np.eye(4) / 4, HamiltonianParams(0.3, 0.7), NoiseConfig(1, 1))).max() < 1e-16


def test_rhs_decoherence_free_states():
    assert np.abs(master_rhs(make_bell("phi_minus"), H0, NoiseConfig(0.3, 0.7))).max() < 1e-15
    assert np.abs(master_rhs(make_product("gg"), H0, NoiseConfig(0.3, 0.0))).max() == 0


@settings(max_examples=50, deadline=None)
@given(x_states())
def test_rhs_traceless_and_hermitian(x):
    rho = x.to_matrix()
    for noise in (NoiseConfig(0.3, 0.7), NoiseConfig(0.3, 0.7, "local")):
        h = HamiltonianParams(0.4, -0.2) if noise.topology.value == "global" else H0
        d = master_rhs(rho, h, noise)
        assert abs(np.trace(d)) < 1e-14
        assert np.abs(d - d.conj().T).max() < 1e-14


def test_superoperator_matches_rhs(rng):
    for noise in (NoiseConfig(0.3, 0.7), NoiseConfig(0.2, 0.5, "local")):
        h = HamiltonianParams(0.25, 0.4) if noise.topology.value == "global" else H0
        gen = liouvillian(h, noise)
        for _ in range(20):
            a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
            np.testing.assert_allclose(gen @ a.reshape(16), master_rhs(a, h, noise).reshape(16), atol=1e-13)


def test_rk4_propagator_is_four_stage_rk4(rng):
    gen = liouvillian(HamiltonianParams(0.3, 0.2), NoiseConfig(0.4, 0.6))
    y = rng.normal(size=16) + 1j * rng.normal(size=16)
    dt = 0.01
    k1 = gen @ y
    k2 = gen @ (y + dt / 2 * k1)
    k3 = gen @ (y + dt / 2 * k2)
    k4 = gen @ (y + dt * k3)
    np.testing.assert_allclose(rk4_propagator(gen, dt) @ y, y + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4), atol=1e-14)


# --- evolve ----------------------------------------------------------------------


def test_evolve_dephasing_example():
    traj = evolve(make_bell("psi_plus"), H0, NoiseConfig(0.05, 0.0), EvolutionConfig(5.0))
    assert traj.times[-1] == pytest.approx(5.0)
    assert abs(traj.final[0, 3] - 0.5 * np.exp(-1)) < 1e-10
    assert abs(traj.final[0, 3] - 0.18394) < 1e-5


def test_evolve_without_generator_is_constant(rng):
    rho0 = random_x_state(rng).to_matrix()
    traj = evolve(rho0, H0, NoiseConfig(), EvolutionConfig(3.0, record_every=10))
    assert np.abs(traj.states - rho0).max() < 1e-15


def test_evolve_gg_to_collective_steady_state():
    traj = long_run(make_product("gg"), NoiseConfig(G, G))
    expected = steady_collective(as_x_state(make_product("gg"))).to_matrix()
    assert np.abs(traj.final - expected).max() < 1e-6


def test_evolve_sampling():
    traj = evolve(make_product("gg"), H0, NoiseConfig(0.1, 0.1), EvolutionConfig(1.0, dt=0.003, record_every=7))
    assert traj.times[0] == 0 and np.all(np.diff(traj.times) > 0)
    assert traj.times[-1] == pytest.approx(1.0)
    assert len(traj) == len(traj.states)


def test_step_size_guard():
    with pytest.raises(StepSizeError):
        evolve(make_product("gg"), H0, NoiseConfig(0.0, 5.0), EvolutionConfig(1.0, dt=0.05))
    with pytest.raises(StepSizeError):
        evolve(make_product("gg"), H0, NoiseConfig(), EvolutionConfig(1.0, dt=0.2))


@pytest.mark.parametrize("kwargs", [dict(t_end=0), dict(t_end=1, dt=2), dict(t_end=1, record_every=0)])
def test_evolution_config_validation(kwargs):
    with pytest.raises(ValueError):
        EvolutionConfig(**kwargs)


def test_step_halving_converges():
    noise = NoiseConfig(0.3, 0.5)
    h = HamiltonianParams(0.2, 0.3)
    rho0 = make_bell("phi_plus")
    coarse = evolve(rho0, h, noise, EvolutionConfig(5.0, dt=0.02)).final
    fine = evolve(rho0, h, noise, EvolutionConfig(5.0, dt=0.01)).final
    finer = evolve(rho0, h, noise, EvolutionConfig(5.0, dt=0.005)).final
    e1, e2 = np.abs(coarse - finer).max(), np.abs(fine - finer).max()
    assert e2 < 1e-9
    # fourth order: halving the step shrinks the error ~16x
    assert e1 / e2 > 10


def test_invariants_along_trajectories(rng):
    cases = [(NoiseConfig(0.3, 0.6), H0), (NoiseConfig(0.3, 0.6, "local"), H0),
             (NoiseConfig(0.3, 0.6), HamiltonianParams(0.5, 0.4))]
    for noise, h in cases:
        rho0 = random_x_state(rng).to_matrix()
        traj = evolve(rho0, h, noise, EvolutionConfig(10.0, record_every=20))
        for rho in traj.states:
            assert abs(np.trace(rho) - 1) <= 1e-10
            assert np.abs(rho - rho.conj().T).max() <= 1e-10
            assert np.linalg.eigvalsh(rho).min() >= -1e-10
            if h.is_zero:
                assert off_x_leakage(rho) <= 1e-10


def test_coherent_drive_breaks_x_structure():
    traj = evolve(make_product("gg"), HamiltonianParams(0.0, 0.5), NoiseConfig(0.1, 0.1), EvolutionConfig(2.0))
    assert off_x_leakage(traj.final) > 1e-3


def test_dephasing_equivalence(rng):
    for _ in range(3):
        x0 = random_x_state(rng)
        traj = evolve(x0.to_matrix(), H0, NoiseConfig(G, 0.0), EvolutionConfig(5 / G, record_every=250))
        for t, rho in zip(traj.times, traj.states):
            assert np.abs(rho - dephasing_propagate(x0, G, t).to_matrix()).max() <= 1e-8


def test_noise_strength_scaling(rng):
    rho0 = random_x_state(rng).to_matrix()
    k = 4.0
    a = evolve(rho0, H0, NoiseConfig(0.05, 0.08), EvolutionConfig(12.0, dt=0.01)).final
    b = evolve(rho0, H0, NoiseConfig(0.05 * k, 0.08 * k), EvolutionConfig(12.0 / k, dt=0.01 / k)).final
    assert np.abs(a - b).max() < 1e-10


# --- closed forms ----------------------------------------------------------------


def test_dephasing_propagate_examples():
    psi = as_x_state(make_bell("psi_plus"))
    x_close(dephasing_propagate(psi, 0.05, 1e6), XState(0.5, 0, 0, 0.5))
    phi = as_x_state(make_bell("phi_plus"))
    assert dephasing_propagate(phi, 0.3, 7.0) == phi
    assert dephasing_propagate(psi, 0.05, 5).c14 == pytest.approx(0.5 * np.exp(-1), abs=1e-15)


def test_steady_detuning_only_examples():
    assert steady_detuning_only(as_x_state(make_bell("psi_plus"))) == XState(0.5, 0, 0, 0.5)
    x_close(
        steady_detuning_only(as_x_state(make_c_class("plus", 1 / 6))),
        XState(1 / 3, 1 / 6, 1 / 6, 1 / 3, 0, 1 / 6),
    )
    gg = as_x_state(make_product("gg"))
    assert steady_detuning_only(gg) == gg


def test_steady_transverse_only_examples():
    x_close(steady_transverse_only(as_x_state(make_product("gg"))), XState(3 / 8, 1 / 8, 1 / 8, 3 / 8, -1 / 8, 1 / 8))
    x_close(steady_transverse_only(XState(0.25, 0.25, 0.25, 0.25)), XState(0.25, 0.25, 0.25, 0.25))
    phim = as_x_state(make_bell("phi_minus"))
    x_close(steady_transverse_only(phim), phim)
    psim = as_x_state(make_bell("psi_minus"))
    x_close(steady_transverse_only(psim), psim)


def test_steady_collective_examples():
    x_close(steady_collective(as_x_state(make_product("gg"))), XState(1 / 3, 1 / 6, 1 / 6, 1 / 3, 0, 1 / 6), 1e-15)
    x_close(steady_collective(as_x_state(make_product("eg"))), XState(1 / 6, 1 / 3, 1 / 3, 1 / 6, 0, -1 / 6), 1e-15)
    phim = as_x_state(make_bell("phi_minus"))
    x_close(steady_collective(phim), phim)


def test_steady_local_examples():
    psi = as_x_state(make_bell("psi_plus"))
    assert steady_local(psi, NoiseConfig(0, 1, "local")) == XState(0.25, 0.25, 0.25, 0.25, 0.25, 0.25)
    assert steady_local(psi, NoiseConfig(1, 1, "local")) == XState(0.25, 0.25, 0.25, 0.25)
    gg = as_x_state(make_product("gg"))
    assert steady_local(gg, NoiseConfig(1, 0, "local")) == gg
    with pytest.raises(ConfigError):
        steady_local(psi, NoiseConfig(0, 0, "local"))
    with pytest.raises(ConfigError):
        steady_local(psi, NoiseConfig(1, 0))


def test_steady_map_dispatch():
    x = as_x_state(make_product("gg"))
    assert steady_map(x, NoiseConfig(G, G)) == steady_collective(x)
    assert steady_map(x, NoiseConfig(0, G)) == steady_transverse_only(x)
    assert steady_map(x, NoiseConfig(G, 0)) == steady_detuning_only(x)
    with pytest.raises(ConfigError):
        steady_map(x, NoiseConfig())


@settings(max_examples=60, deadline=None)
@given(x_states())
def test_steady_maps_are_fixed_points(x):
    for name, noise in GLOBAL_CASES.items():
        ss = GLOBAL_MAPS[name](x).to_matrix()
        assert np.abs(master_rhs(ss, H0, noise)).max() <= 1e-12
    for noise in LOCAL_CASES.values():
        ss = steady_local(x, noise).to_matrix()
        assert np.abs(master_rhs(ss, H0, noise)).max() <= 1e-12


@settings(max_examples=60, deadline=None)
@given(x_states())
def test_steady_maps_preserve_trace_and_balance(x):
    for f in GLOBAL_MAPS.values():
        ss = f(x)
        assert abs(ss.populations.sum() - 1) < 1e-12
        if f is not steady_detuning_only:
            assert ss.p2 == ss.p3 and ss.p1 == ss.p4
        ss.check()


def test_long_time_integration_matches_maps(rng):
    for _ in range(4):
        x0 = random_x_state(rng)
        for name, noise in GLOBAL_CASES.items():
            final = long_run(x0.to_matrix(), noise).final
            assert np.abs(final - GLOBAL_MAPS[name](x0).to_matrix()).max() <= 1e-6, name
        for noise in LOCAL_CASES.values():
            final = long_run(x0.to_matrix(), noise).final
            assert np.abs(final - steady_local(x0, noise).to_matrix()).max() <= 1e-6
