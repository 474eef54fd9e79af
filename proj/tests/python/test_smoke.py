import math

import numpy as np
import pytest

mk = pytest.importorskip("_minklab")


def test_metric_and_hamiltonian():
    m = mk.minkowski(1)
    g = m.dual_metric(np.zeros(2))
    assert g[0, 0] == -1.0 and g[1, 1] == 1.0
    assert mk.hamiltonian(m, np.zeros(2), np.array([1.0, 1.0])) == pytest.approx(0.0)
    assert mk.c_mu_constant(1.0) == pytest.approx(math.pi / 2, rel=1e-9)


def test_geodesic_escape():
    m = mk.perturbed_family(1, 1.0, 0.05, "radial_bump")
    s0 = mk.null_lift(m, np.zeros(2), np.array([1.0]), 1)
    tr = mk.integrate_hamilton(m, s0, 200.0, 1e-10, escape_radius=10.0)
    assert tr.terminal == mk.TerminalKind.Escaped
    assert tr.certificate is not None
    assert tr.certificate.radius > 10.0
    assert max(abs(p) for p in tr.p_values) < 1e-8


def test_escape_function_check():
    vals = mk.escape_function_check(mk.minkowski(1), 20.0, 500)
    assert vals["M_estimate"] == pytest.approx(2.0, abs=1e-10)


def test_resolvent_roundtrip():
    grid = mk.GridSpec(n=1, L=16.0, N_y=64, T0=-8.0, T1=8.0, N_t=256)
    plan = mk.ResolventPlan(grid)
    t = -8.0 + 16.0 * np.arange(256) / 256
    y = -16.0 + 32.0 * np.arange(64) / 64
    vals = np.exp(-t[:, None] ** 2 / (2 * 0.85**2)) * np.exp(-y[None, :] ** 2 / 2)
    f = mk.SpaceTimeField(grid, vals.astype(complex))
    u = mk.apply_resolvent(plan, f)
    assert mk.l2_norm(u) <= 2.0 * mk.l2_norm(f)
    assert mk.residual_check(plan, f) < 1e-4
    assert mk.smoothing_probe_locsmoy(plan, f) > 0.0


def test_symbol_and_kernel():
    a = mk.symbol_a(0.0)
    assert a.real == pytest.approx(1 / math.sqrt(2), rel=1e-12)
    assert a.imag == pytest.approx(-1 / math.sqrt(2), rel=1e-12)
    p = mk.CounterexampleParams()
    assert mk.chi_bump(0.6) == 1.0
    assert abs(mk.kernel_bt(p, 0.1, 5.0)) > 0.0
    scan = mk.divergence_scan(p, [1.0, 2.0, 4.0, 8.0, 16.0])
    assert scan["alpha"] > 0.0
