"""Wave-packet solver: exact discrete limits, conservation, and guards.

The solver is validated against cases with closed-form answers on the
*discrete* problem (box eigenstates are exact eigenvectors of the
tridiagonal H, free Gaussians follow the analytic dispersion law to
stepping error), so failures here indict the implementation, not the
discretization.
"""

import math

import numpy as np
import pytest

from sltime.errors import (
    NoTransmissionError,
    NumericError,
    ValidationError,
)
from sltime.medium import CONSTANTS, CellSpec, Layer, StackSpec, representative_stack
from sltime.tdse import (
    Grid1D,
    PacketRecord,
    WavePacket,
    evolve,
    free_reference,
    initial_state,
    packet_delay,
    plan_run,
    spectral_average,
    stationary_packet_delay,
)

LEAD = Layer(9.5, 0.0, 0.067)


def _uniform_stack(width=50.0):
    return StackSpec(core=CellSpec((Layer(width, 0.0, 0.067),)), replicas=1, outside=LEAD)


def test_free_gaussian_follows_dispersion_law():
    stack = _uniform_stack()
    grid = Grid1D(x_min=-500.0, x_max=500.0, dx=0.25, dt=1.0, n_steps=400)
    packet = WavePacket(x0=-150.0, E0=60.0, sigma_x=20.0)
    rec = evolve(stack, grid, packet, x_sep=-499.0)

    x = grid.x
    dens = np.abs(rec.psi_final) ** 2
    dens /= dens.sum() * grid.dx
    mean = grid.dx * float(np.sum(x * dens))
    sigma = math.sqrt(grid.dx * float(np.sum((x - mean) ** 2 * dens)))

    k0 = packet.k0(LEAD)
    v0 = CONSTANTS.velocity(k0, 0.067)
    t = grid.t_final
    alpha = CONSTANTS.hbar2_over_2m0 / 0.067
    sigma_t = packet.sigma_x * math.hypot(1.0, alpha * t / (CONSTANTS.hbar * packet.sigma_x**2))
    assert mean == pytest.approx(packet.x0 + v0 * t, rel=0.01)
    assert sigma == pytest.approx(sigma_t, rel=0.01)
    assert rec.norm_drift < 1e-10


def test_box_eigenstate_is_stationary():
    stack = _uniform_stack(10.0)
    grid = Grid1D(x_min=-25.0, x_max=25.0, dx=0.25, dt=2.0, n_steps=200)
    n_pts = grid.n_points
    # exact eigenvector of the discrete hard-wall Hamiltonian (ghost nodes
    # one cell outside each end), third mode
    j = np.arange(n_pts)
    psi0 = np.sin(3 * math.pi * (j + 1) / (n_pts + 1)).astype(complex)
    rec = evolve(stack, grid, WavePacket(x0=0.0, E0=50.0), x_sep=0.0,
                 psi0=psi0, monitor_walls=False)
    want = np.abs(psi0) ** 2
    want /= want.sum() * grid.dx
    got = np.abs(rec.psi_final) ** 2
    assert np.abs(got - want).max() < 1e-8
    assert rec.norm_drift < 1e-10
    assert rec.energy_drift < 1e-10


def test_norm_and_energy_conserved_through_stack():
    stack = representative_stack()
    grid, packet, x_sep, x_d = plan_run(stack, 58.5, sigma_x=25.0, dx=0.5, dt=2.0)
    rec = evolve(stack, grid, packet, x_sep)
    assert rec.norm_drift < 1e-9
    assert rec.energy_drift < 1e-9
    assert 0.0 < rec.transmitted_fraction < 1.0
    # transmitted probability is monotone once the packet has cleared the sep
    late = rec.beyond_prob[-200:]
    assert np.all(np.diff(late) > -1e-9)


def test_plan_run_geometry():
    stack = representative_stack()
    grid, packet, x_sep, x_d = plan_run(stack, 58.5, sigma_x=40.0)
    half_w = 0.5 * stack.width
    assert packet.x0 == pytest.approx(-(half_w + 400.0))
    assert x_sep == pytest.approx(half_w + grid.dx)
    assert x_d == pytest.approx(half_w + 240.0)
    assert grid.x_min < packet.x0 - 10.0 * packet.sigma_x
    assert grid.x_max > x_d
    longer, *_ = plan_run(stack, 58.5, sigma_x=40.0, extra_time=3000.0)
    assert longer.n_steps > grid.n_steps
    assert longer.t_final >= grid.t_final + 3000.0 - 1.0


def test_wall_monitor_trips_on_undersized_domain():
    stack = _uniform_stack(10.0)
    grid = Grid1D(x_min=-100.0, x_max=100.0, dx=0.5, dt=1.0, n_steps=400)
    packet = WavePacket(x0=-20.0, E0=60.0, sigma_x=12.0)
    with pytest.raises(NumericError, match="wall"):
        evolve(stack, grid, packet, x_sep=10.0)


def _synthetic_record(beyond, centroid, x_sep=25.0, n=50):
    times = np.linspace(0.0, 490.0, n)
    return PacketRecord(
        times=times,
        beyond_prob=np.full(n, beyond),
        centroid=np.full(n, centroid),
        x_sep=x_sep,
        norm_drift=0.0,
        energy_drift=0.0,
        psi_final=np.zeros(4, dtype=complex),
        grid=Grid1D(-1.0, 1.0, 0.1, 10.0, n - 1),
    )


def _moving_record(speed=0.5, x_sep=25.0, n=50):
    times = np.linspace(0.0, 490.0, n)
    return PacketRecord(
        times=times,
        beyond_prob=np.full(n, 0.8),
        centroid=x_sep + speed * times,
        x_sep=x_sep,
        norm_drift=0.0,
        energy_drift=0.0,
        psi_final=np.zeros(4, dtype=complex),
        grid=Grid1D(-1.0, 1.0, 0.1, 10.0, n - 1),
    )


def test_packet_delay_guards():
    free = _moving_record()
    with pytest.raises(NoTransmissionError):
        packet_delay(_synthetic_record(5e-5, 40.0), 60.0, free)
    with pytest.raises(ValidationError, match="detector"):
        packet_delay(_moving_record(), 10.0, free)
    with pytest.raises(NumericError, match="never crossed"):
        packet_delay(_synthetic_record(0.5, 30.0), 200.0, free)
    short = _moving_record(n=40)
    with pytest.raises(ValidationError, match="time grids"):
        packet_delay(_moving_record(), 60.0, short)


def test_packet_delay_interpolates_crossings():
    # both centroids move ballistically; the slower one lags by a known time
    fast = _moving_record(speed=0.5)
    slow = _moving_record(speed=0.4)
    x_d = 100.0
    res = packet_delay(slow, x_d, fast)
    want = (x_d - 25.0) / 0.4 - (x_d - 25.0) / 0.5
    assert res.delay == pytest.approx(want, abs=1e-9)
    assert res.arrival_free == pytest.approx((x_d - 25.0) / 0.5, abs=1e-9)
    assert res.transmitted_fraction == pytest.approx(0.8)


def test_delay_result_fraction_range_guard():
    from sltime.tdse import DelayResult

    with pytest.raises(ValidationError):
        DelayResult(100.0, 50.0, 50.0, 1.5, math.nan)


def test_spectral_average_constant_and_linear():
    packet = WavePacket(x0=-500.0, E0=58.5, sigma_x=60.0)
    E = np.linspace(40.0, 80.0, 4001)
    assert spectral_average(E, np.full(E.shape, 7.25), packet, LEAD) == pytest.approx(7.25, rel=1e-12)
    # mean energy of the momentum Gaussian: E0 + alpha sigma_k^2 exactly
    alpha = CONSTANTS.hbar2_over_2m0 / 0.067
    shift = alpha * (0.5 / packet.sigma_x) ** 2
    assert spectral_average(E, E, packet, LEAD) == pytest.approx(58.5 + shift, abs=1e-3)


def test_spectral_average_narrow_packet_picks_local_value():
    packet = WavePacket(x0=-500.0, E0=58.5, sigma_x=400.0)
    E = np.linspace(50.0, 67.0, 2001)
    f = (E - 58.5) ** 3 + 4.0 * E
    assert spectral_average(E, f, packet, LEAD) == pytest.approx(4.0 * 58.5, rel=1e-4)


def test_spectral_average_guards_and_tail_warning():
    packet = WavePacket(x0=-500.0, E0=58.5, sigma_x=60.0)
    E = np.linspace(50.0, 67.0, 101)
    with pytest.raises(ValidationError):
        spectral_average(E[::-1], E, packet, LEAD)
    with pytest.raises(ValidationError):
        spectral_average(E, E[:-1], packet, LEAD)
    with pytest.raises(ValidationError):
        spectral_average(np.linspace(-2.0, 2.0, 40), np.ones(40), packet, LEAD)
    with pytest.warns(UserWarning, match="spectrum"):
        spectral_average(np.linspace(57.5, 59.5, 40), np.ones(40), packet, LEAD)


def test_stationary_delay_vanishes_for_free_stack():
    free = free_reference(representative_stack())
    assert free.width == pytest.approx(47.5)
    assert all(l.potential == 0.0 for l in free.segments())
    packet = WavePacket(x0=-500.0, E0=58.5, sigma_x=60.0)
    delay = stationary_packet_delay(free, packet, 24.0, 264.0, t_max=2400.0)
    assert abs(delay) < 1e-3


def test_stationary_delay_rejects_spectrum_reaching_zero():
    packet = WavePacket(x0=-300.0, E0=58.5, sigma_x=1.5)
    with pytest.raises(ValidationError):
        stationary_packet_delay(representative_stack(), packet, 24.0, 264.0, 2400.0)


def test_grid_and_packet_validation():
    with pytest.raises(ValidationError):
        Grid1D(x_min=1.0, x_max=-1.0, dx=0.1, dt=1.0, n_steps=10)
    with pytest.raises(ValidationError):
        Grid1D(x_min=-1.0, x_max=1.0, dx=-0.1, dt=1.0, n_steps=10)
    with pytest.raises(ValidationError):
        Grid1D(x_min=-1.0, x_max=1.0, dx=0.1, dt=1.0, n_steps=0)
    with pytest.raises(ValidationError):
        WavePacket(x0=0.0, E0=60.0, sigma_x=0.0)
    with pytest.raises(ValidationError):
        WavePacket(x0=0.0, E0=-3.0).k0(LEAD)


def test_evolve_validations():
    stack = _uniform_stack(10.0)
    grid = Grid1D(x_min=-200.0, x_max=200.0, dx=0.5, dt=1.0, n_steps=5)
    with pytest.raises(ValidationError, match="separator"):
        evolve(stack, grid, WavePacket(x0=-100.0, E0=60.0, sigma_x=15.0), x_sep=500.0)
    with pytest.raises(ValidationError, match="launch"):
        evolve(stack, grid, WavePacket(x0=-150.0, E0=60.0, sigma_x=15.0))


def test_initial_state_normalized_and_centered():
    grid = Grid1D(x_min=-400.0, x_max=400.0, dx=0.25, dt=1.0, n_steps=1)
    packet = WavePacket(x0=-120.0, E0=58.5, sigma_x=30.0)
    psi = initial_state(grid, packet, LEAD)
    dens = np.abs(psi) ** 2
    assert grid.dx * dens.sum() == pytest.approx(1.0, rel=1e-12)
    assert grid.x[int(np.argmax(dens))] == pytest.approx(-120.0, abs=grid.dx)
