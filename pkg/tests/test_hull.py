import numpy as np
import pytest

from pointspec.geometry import Interval, cluster_1d
from pointspec.hull import (
    CylinderSpec,
    IncompletePartitionError,
    PatchTooSmallError,
    build_partition_1d,
    cylinder_contains,
    empirical_cylinder_measure,
    hull_metric,
    partition_params,
    sample_orbit,
)
from pointspec.sources import (
    PointSource,
    TranslatedSource,
    fibonacci_cut_project,
    integer_lattice,
)
from pointspec.stats import halton
from pointspec.spectra import plateau_kernel


# ---------------------------------------------------------------------------
# the metric


def test_metric_identity():
    z = integer_lattice()
    br = hull_metric(z, z, eps_grid=0.01)
    assert br.lower == 0.0
    assert br.upper <= 0.01


def test_metric_refines_with_grid():
    z = integer_lattice()
    coarse = hull_metric(z, z, eps_grid=0.05).upper
    fine = hull_metric(z, z, eps_grid=0.005).upper
    assert fine <= coarse


def test_metric_shifted_lattice():
    z = integer_lattice()
    br = hull_metric(z, TranslatedSource(z, 0.1), eps_grid=0.01)
    assert br.contains(0.05)
    assert br.upper - br.lower <= 0.01


class _LatticePlusFarPoint(PointSource):
    """Z with one extra point far from the origin (outside B_100)."""

    dim = 1
    m = 1
    coords = "float"
    id = "Z+far"

    def __init__(self):
        self.base = integer_lattice()

    def _query(self, region):
        parts = [list(self.base.window(region).parts[0])]
        if region.contains_value(500.25):
            parts[0].append((500.25,))
        return parts


def test_metric_far_modification_small():
    z = integer_lattice()
    mod = _LatticePlusFarPoint()
    br = hull_metric(z, mod, eps_grid=0.005)
    assert br.upper <= 0.01  # x = y = 0 matches out to radius 1/eps < 500


def test_metric_symmetry_and_cap():
    z = integer_lattice()
    fib = fibonacci_cut_project()
    a = hull_metric(z, fib, eps_grid=0.02)
    b = hull_metric(fib, z, eps_grid=0.02)
    assert abs(a.upper - b.upper) <= 0.02 + 1e-9
    assert a.upper <= 2 ** -0.5 + 1e-12


def test_metric_triangle_sampled():
    fib = fibonacci_cut_project()
    eps_grid = 0.05
    hs = halton(20) * 40.0
    srcs = [TranslatedSource(fib, float(h)) for h in hs]
    rng = np.random.default_rng(0)
    for _ in range(20):
        i, j, k = rng.integers(0, len(srcs), 3)
        dij = hull_metric(srcs[i], srcs[j], eps_grid=eps_grid).upper
        djk = hull_metric(srcs[j], srcs[k], eps_grid=eps_grid).upper
        dik = hull_metric(srcs[i], srcs[k], eps_grid=eps_grid).lower
        assert dik <= dij + djk + 2 * eps_grid


# ---------------------------------------------------------------------------
# orbit sampling


def test_sample_orbit_identity_and_shift():
    z = integer_lattice()
    region = Interval(-3, 3)
    patches = sample_orbit(z, [0.0, 0.5], region)
    assert np.allclose(patches[0].positions(0), [-3, -2, -1, 0, 1, 2, 3])
    assert np.allclose(patches[1].positions(0), [-2.5, -1.5, -0.5, 0.5, 1.5, 2.5])


def test_sample_orbit_consistency():
    fib = fibonacci_cut_project()
    region = Interval(-20, 20)
    inner = Interval(-8, 8)
    for patch in sample_orbit(fib, (halton(100) * 100.0).tolist(), region):
        direct = patch.restrict(inner)
        for i in range(2):
            a = direct.positions(i)
            b = patch.positions(i)
            b = b[(b >= -8 - 1e-9) & (b <= 8 + 1e-9)]
            assert np.allclose(a, b)


# ---------------------------------------------------------------------------
# cylinders


def test_cylinder_examples():
    z = integer_lattice()
    patch = z.window(Interval(-5, 5))
    assert cylinder_contains(patch, CylinderSpec(cluster_1d([0.0]), Interval(-0.2, 0.2)))
    assert not cylinder_contains(patch, CylinderSpec(cluster_1d([0.0]), Interval(0.3, 0.4)))
    shifted = TranslatedSource(z, -0.35).window(Interval(-5, 5))
    assert not cylinder_contains(shifted, CylinderSpec(cluster_1d([0.0]), Interval(0.3, 0.4)))


def test_cylinder_patch_too_small_is_an_error():
    z = integer_lattice()
    patch = z.window(Interval(-1, 1))
    with pytest.raises(PatchTooSmallError):
        cylinder_contains(patch, CylinderSpec(cluster_1d([0.0, 1.0, 2.0]), Interval(-3.0, 3.0)))


# ---------------------------------------------------------------------------
# partition


def test_partition_lattice_cells():
    part = build_partition_1d(integer_lattice(), 1.0, 0.6, scan_length=200)
    assert len(part.representatives) == 1
    assert part.n_cells == 2
    assert part.total_window_length() == pytest.approx(1.0)
    for cell in part.cells:
        assert cell.window.volume() < 0.6
        assert not cell.window.closed_hi  # half-open grid cells


def test_partition_2z_cells():
    part = build_partition_1d(integer_lattice(2.0), 1.5, 0.7, scan_length=300)
    assert len(part.representatives) == 2
    assert part.n_cells == 4  # two length-1 windows, two cells each
    assert part.total_window_length() == pytest.approx(2.0)


def test_partition_rejects_bad_parameters():
    z = integer_lattice()
    with pytest.raises(ValueError):
        build_partition_1d(z, 0.3, 0.5, scan_length=100)  # R < b/2
    with pytest.raises(ValueError):
        build_partition_1d(z, 1.0, 1.5, scan_length=100)  # delta >= eta


def test_partition_scan_stability_guard():
    fib = fibonacci_cut_project()
    with pytest.raises(IncompletePartitionError):
        build_partition_1d(fib, 3.0, 0.2, scan_length=16.0)


def test_partition_fibonacci_disjoint_cover():
    fib = fibonacci_cut_project()
    part = build_partition_1d(fib, 3.0, 0.2, scan_length=1500)
    for h in halton(150) * 300.0:
        patch = TranslatedSource(fib, float(h)).window(Interval(-16, 16))
        assert len(part.locate(patch)) == 1


# ---------------------------------------------------------------------------
# empirical cylinder measure


def test_cylinder_measure_lattice():
    z = integer_lattice()
    m, _, _ = empirical_cylinder_measure(
        z, CylinderSpec(cluster_1d([0.0]), Interval(0.0, 0.3, True, False)), 1000, eta=1.0)
    assert m == pytest.approx(0.3, abs=1e-3)
    m2, _, _ = empirical_cylinder_measure(
        z, CylinderSpec(cluster_1d([0.0, 1.0]), Interval(0.0, 0.5, True, False)), 1000, eta=1.0)
    assert m2 == pytest.approx(0.5, abs=1e-3)


def test_cylinder_measure_requires_small_window():
    z = integer_lattice()
    with pytest.raises(ValueError):
        empirical_cylinder_measure(
            z, CylinderSpec(cluster_1d([0.0]), Interval(0.0, 1.5)), 100, eta=1.0)


# ---------------------------------------------------------------------------
# theta and the smoothed-indicator bound


def test_partition_params_bounds():
    fib = fibonacci_cut_project()
    pp = partition_params(fib, 1 / 3.0, scan=Interval(0.0, 300.0))
    assert 0 < pp.theta <= pp.eta
    assert pp.zeta < pp.theta / 2
    assert pp.theta <= pp.epsilon


def test_smoothed_indicator_l2_bound():
    # orbit-average of |f_omega - indicator|^2 against freq * Vol((dV)^{+zeta})
    fib = fibonacci_cut_project()
    pp = partition_params(fib, 1 / 3.0, scan=Interval(0.0, 300.0))
    v_lo, v_hi = 0.1, 0.1 + min(pp.theta, pp.eta) * 0.6
    zeta = (v_hi - v_lo) / 4
    assert zeta < pp.theta / 2
    kern = plateau_kernel(v_lo, v_hi, zeta)
    color = 0
    n = 4000
    patch = fib.window(Interval(-n, n))
    freq = len(patch.parts[color]) / (2.0 * n)
    region = Interval(-2.0, 2.0)
    sq_sum = 0.0
    count = 0
    for h in halton(1500) * 700.0:
        p = TranslatedSource(fib, float(h)).window(region)
        pos = p.positions(color)
        f_val = float(np.sum(kern(-pos)))
        chi = 1.0 if np.any((-pos >= v_lo - 1e-12) & (-pos <= v_hi + 1e-12)) else 0.0
        # indicator of the single-point cylinder: some point of color i in -V
        sq_sum += abs(f_val - chi) ** 2
        count += 1
    mean = sq_sum / count
    bound = freq * 4 * zeta + 1e-3
    assert mean <= bound


def test_metric_accepts_patches():
    z = integer_lattice()
    p1 = z.window(Interval(-300, 300))
    p2 = TranslatedSource(z, 0.1).window(Interval(-300, 300))
    br = hull_metric(p1, p2, eps_grid=0.01)
    assert br.contains(0.05)
    tiny = z.window(Interval(-1.5, 1.5))
    with pytest.raises(ValueError):
        hull_metric(tiny, p2, eps_grid=0.01)
