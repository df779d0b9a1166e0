"""Design search, sweeps, rasters, and the directional-limit probe."""

import math

import numpy as np
import pytest

from imspe_kit import (
    Family,
    Kernel,
    ValidationError,
    discontinuity_probe,
    envelope_x1,
    fig_design,
    fig_imspe,
    fig_kernel,
    log_grid,
    optimize_n1,
    optimize_n2,
    scan_surface,
    sweep_theta,
)
from imspe_kit.optimize import FIG_FIXED, FIG_THETA, OptimumReport

ALL_FAMILIES = list(Family)


# ---------------------------------------------------------------------------
# single point
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("family", ALL_FAMILIES)
@pytest.mark.parametrize("theta", [0.1, 1.0, 10.0])
def test_n1_optimum_is_centered(family, theta):
    rep = optimize_n1(Kernel(family, (theta,)), theta)
    assert abs(rep.design[0][0]) <= 1e-6
    assert rep.converged
    assert all(v > 0 for v in rep.second_order_check)


def test_n1_report_fields():
    rep = optimize_n1(Kernel(Family.EXP_P1, (1.0,)), 1.0)
    assert 0.0 < rep.imspe_value < 2.0
    assert rep.boundary_distance == pytest.approx(1.0, abs=1e-5)
    assert rep.gradient_norm <= 1e-6


# ---------------------------------------------------------------------------
# two points
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("family", ALL_FAMILIES)
def test_n2_optimum_symmetric_and_interior(family):
    rep = optimize_n2(Kernel(family, (1.0,)), 1.0)
    x1, x2 = rep.design[0][0], rep.design[1][0]
    assert rep.converged
    assert abs(x1 + x2) <= 1e-5
    assert rep.boundary_distance >= 0.05
    assert all(v > 0 for v in rep.second_order_check)


def test_n2_symmetric_constraint_matches_free_search():
    kernel = Kernel(Family.MATERN52, (2.0,))
    free = optimize_n2(kernel, 2.0)
    tied = optimize_n2(kernel, 2.0, constraint="symmetric_pair")
    assert tied.imspe_value == pytest.approx(free.imspe_value, abs=1e-9)
    assert max(p[0] for p in tied.design) == pytest.approx(
        max(p[0] for p in free.design), abs=1e-4
    )


@pytest.mark.parametrize("family", [Family.EXP_P1, Family.GAUSS_P2])
def test_n2_flat_basin_large_theta(family):
    # at very large decay rates the criterion is flat to 64-bit precision
    # around the optimum; the refined search must still land near the
    # quarter-point design
    rep = optimize_n2(Kernel(family, (100.0,)), 100.0)
    x1 = max(p[0] for p in rep.design)
    assert rep.converged
    assert 0.3 < x1 < 0.7
    assert abs(rep.design[0][0] + rep.design[1][0]) <= 1e-5


def test_n2_beats_coincident_pair():
    # the optimal spread pair must beat the near-coincident configuration
    kernel = Kernel(Family.GAUSS_P2, (1.0,))
    rep = optimize_n2(kernel, 1.0)
    from imspe_kit import imspe_gauss_cluster

    assert rep.imspe_value < imspe_gauss_cluster(1.0, 0.0, 0.0)


# ---------------------------------------------------------------------------
# grids, sweeps, envelopes
# ---------------------------------------------------------------------------

def test_log_grid_endpoints_and_monotonicity():
    g = log_grid(0.01, 100.0, 9)
    assert g[0] == pytest.approx(0.01, rel=1e-12)
    assert g[-1] == pytest.approx(100.0, rel=1e-12)
    assert np.all(np.diff(g) > 0)
    assert g[4] == pytest.approx(1.0, rel=1e-12)


def test_log_grid_rejects_bad_args():
    with pytest.raises(ValidationError):
        log_grid(-1.0, 1.0, 5)
    with pytest.raises(ValidationError):
        log_grid(1.0, 1.0, 5)


def test_sweep_serial_and_parallel_agree():
    kernel = Kernel(Family.MATERN32, (1.0,))
    grid = log_grid(0.1, 10.0, 4)
    serial = sweep_theta(kernel, 2, grid, parallel=1)
    parallel = sweep_theta(kernel, 2, grid, parallel=2)
    for a, b in zip(serial, parallel):
        assert a.design == b.design
        assert a.imspe_value == b.imspe_value


def test_envelope_x1():
    def rep(x1, x2, ok=True):
        return OptimumReport(
            design=((x1,), (x2,)),
            imspe_value=0.5,
            converged=ok,
            gradient_norm=0.0,
            second_order_check=(1.0, 1.0),
            boundary_distance=0.1,
        )

    lo, hi = envelope_x1([rep(0.4, -0.4), rep(-0.55, 0.55), rep(0.9, -0.9, ok=False)])
    assert (lo, hi) == (0.4, 0.55)


def test_envelope_requires_converged_reports():
    with pytest.raises(ValidationError):
        envelope_x1([])


# ---------------------------------------------------------------------------
# rasters
# ---------------------------------------------------------------------------

def test_scan_surface_row_major_order_and_values():
    kernel = Kernel(Family.EXP_P1, (1.0,))
    axes = [np.array([-0.5, 0.5]), np.array([-0.25, 0.25])]
    rows = scan_surface(
        kernel, axes, lambda c: np.array([[c[0]], [c[1]]]), parallel=1
    )
    assert [r[:2] for r in rows] == [
        (-0.5, -0.25),
        (-0.5, 0.25),
        (0.5, -0.25),
        (0.5, 0.25),
    ]
    assert all(r[2] is not None for r in rows)


def test_scan_surface_masks_singular_nodes():
    kernel = Kernel(Family.EXP_P1, (1.0,))
    axes = [np.array([-0.3, 0.0, 0.3])]
    rows = scan_surface(
        kernel, axes, lambda c: np.array([[c[0]], [0.0]]), parallel=1
    )
    values = {r[0]: r[1] for r in rows}
    assert values[0.0] is None
    assert values[-0.3] is not None


# ---------------------------------------------------------------------------
# constrained demo scenario
# ---------------------------------------------------------------------------

def test_fig_design_layout():
    d = fig_design((0.2, -0.1))
    assert d.shape == (4, 2)
    assert tuple(d[0]) == FIG_FIXED[0]
    assert tuple(d[1]) == FIG_FIXED[1]
    assert tuple(d[2]) == (0.2, -0.1)
    assert tuple(d[3]) == (-0.2, 0.1)


def test_fig_kernel_parameters():
    k = fig_kernel()
    assert k.family is Family.GAUSS_P2
    assert k.theta == FIG_THETA


def test_fig_imspe_continuous_on_smooth_region():
    base = fig_imspe(0.4, 0.2)
    assert fig_imspe(0.4 + 1e-7, 0.2) == pytest.approx(base, abs=1e-9)


def test_fig_imspe_precision_handoff_is_seamless():
    # values just inside and outside the extended-precision switchover
    # must agree to solve accuracy
    from imspe_kit.optimize import _FIG_HP_SEPARATION

    t_out = _FIG_HP_SEPARATION / 2.0 * 1.05  # pair separation just above
    t_in = _FIG_HP_SEPARATION / 2.0 * 0.95
    gap = abs(fig_imspe(t_out, 0.0) - fig_imspe(t_in, 0.0))
    assert gap < 1e-6


def test_probe_certifies_origin_discontinuity():
    h_seq = (0.01, 0.005, 0.002, 0.001, 1e-4, 1e-5)
    rep = discontinuity_probe(fig_imspe, (0.0, 0.0), ((1, 0), (0, 1)), h_seq)
    assert rep.max_gap > 10.0 * max(rep.residuals)


def test_probe_no_false_positive_at_smooth_point():
    h_seq = (0.01, 0.005, 0.002, 0.001, 1e-4, 1e-5)
    rep = discontinuity_probe(fig_imspe, (0.5, 0.3), ((1, 0), (0, 1)), h_seq)
    assert rep.max_gap <= 10.0 * max(max(rep.residuals), 1e-12)


def test_probe_validates_inputs():
    with pytest.raises(ValidationError):
        discontinuity_probe(fig_imspe, (0, 0), ((0, 0),), (0.1, 0.01))
    with pytest.raises(ValidationError):
        discontinuity_probe(fig_imspe, (0, 0), ((1, 0),), ())
