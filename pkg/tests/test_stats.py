import numpy as np
import pytest

from pointspec.geometry import Box, Interval, cluster_1d
from pointspec.hull import CylinderSpec, empirical_cylinder_measure
from pointspec.sources import TranslatedSource, fibonacci_cut_project, integer_lattice
from pointspec.stats import (
    VanHoveSpec,
    count_cluster,
    default_offsets,
    estimate_frequency,
    van_hove_region,
)


# ---------------------------------------------------------------------------
# van Hove diagnostics


def test_van_hove_1d():
    region, ratios, K = van_hove_region(VanHoveSpec(dim=1), 100, rs=(1.0,))
    assert ratios[1.0] == pytest.approx(0.02)
    assert K == 2.0
    assert region.volume() == 200.0


def test_van_hove_2d():
    _, ratios, K = van_hove_region(VanHoveSpec(dim=2), 10, rs=(1.0,))
    assert ratios[1.0] == pytest.approx((22 ** 2 - 18 ** 2) / 20 ** 2)
    assert K == 4.0


def test_van_hove_ratio_vanishes_along_schedule():
    spec = VanHoveSpec(n0=125, doublings=4)
    for r in (1.0, 10.0):
        vals = [van_hove_region(spec, n, rs=(r,))[1][r] for n in spec.schedule()]
        assert all(b < a for a, b in zip(vals, vals[1:]))
        assert vals[-1] < 0.05 * r


# ---------------------------------------------------------------------------
# counting


def test_count_examples():
    z = integer_lattice()
    assert count_cluster(z, cluster_1d([0.0]), Interval(0, 10)) == 11
    assert count_cluster(z, cluster_1d([0.0, 1.0]), Interval(0, 10)) == 10
    assert count_cluster(z, cluster_1d([0.0, 0.5]), Interval(0, 10)) == 0


def test_count_2d():
    from pointspec.sources import lattice_source
    from pointspec.geometry import Cluster

    z2 = lattice_source([[1.0, 0.0], [0.0, 1.0]])
    P = Cluster([[(0.0, 0.0), (1.0, 0.0)]], dim=2)
    assert count_cluster(z2, P, Box((0.0, 0.0), (3.0, 3.0))) == 12


def test_count_translation_covariance():
    fib = fibonacci_cut_project()
    P = cluster_1d([0.0, 1.0], [])
    rng = np.random.default_rng(2)
    for _ in range(5):
        x = float(rng.uniform(-20, 20))
        A = Interval(3.0, 40.0)
        moved = Interval(3.0 - x, 40.0 - x)
        assert count_cluster(fib, P, A) == count_cluster(TranslatedSource(fib, x), P, moved)


def test_count_subadditivity_and_separated_equality():
    fib = fibonacci_cut_project()
    P = cluster_1d([0.0, 1.0], [])
    a = count_cluster(fib, P, Interval(0, 30))
    b = count_cluster(fib, P, Interval(20, 50))
    u = count_cluster(fib, P, Interval(0, 50))
    assert u <= a + b
    c = count_cluster(fib, P, Interval(60, 90))
    u2 = count_cluster(fib, P, Interval(0, 30))
    # separated regions (gap > diam supp P): counts add over the union
    assert count_cluster(fib, P, Interval(0, 90)) >= u2 + c


# ---------------------------------------------------------------------------
# frequency estimation


def test_lattice_frequency_exact_ratios():
    z = integer_lattice()
    spec = VanHoveSpec(n0=125, doublings=3)
    est = estimate_frequency(z, cluster_1d([0.0]), spec, [(0.0,)])
    for n, v in est.per_n:
        assert v == pytest.approx((2 * n + 1) / (2 * n))
    est2 = estimate_frequency(z, cluster_1d([0.0, 1.0]), spec, [(0.0,)])
    assert est2.value == pytest.approx(1.0, abs=1e-3)


def test_periodic_offsets_give_identical_ratios():
    z = integer_lattice()
    spec = VanHoveSpec(n0=125, doublings=1)
    est = estimate_frequency(z, cluster_1d([0.0]), spec, [(0.3,), (1.3,), (5.3,)])
    vals = [r for _, r in est.per_offset]
    assert vals[0] == vals[1] == vals[2]


def test_freq_prime_is_offsets_zero():
    fib = fibonacci_cut_project()
    spec = VanHoveSpec(n0=250, doublings=2)
    est = estimate_frequency(fib, cluster_1d([0.0], []), spec, [(0.0,)])
    assert est.uniformity_gap == 0.0
    assert est.value == pytest.approx(1 / 5 ** 0.5, abs=5e-3)  # color-a density


def test_uniformity_gap_probes_offsets():
    fib = fibonacci_cut_project()
    spec = VanHoveSpec(n0=125, doublings=2)
    est = estimate_frequency(fib, cluster_1d([0.0], []), spec, default_offsets(20, 10.0))
    assert est.uniformity_gap < 5e-3
    assert est.cauchy_gap < 5e-3


# ---------------------------------------------------------------------------
# boundary sandwich for cylinder integrals


def test_boundary_sandwich():
    fib = fibonacci_cut_project()
    P = cluster_1d([0.0, 1.0], [])
    V = Interval(0.0, 0.4, True, False)
    r = 0.4 + 1.0  # max |V| + max |supp P|
    n = 500
    for h in (0.0, 7.3, -12.9):
        _, J, _ = empirical_cylinder_measure(fib, CylinderSpec(P, V), n, offset=h, eta=1.0)
        lo_region = Interval(h - (n - r), h + (n - r))
        hi_region = Interval(h - (n + r), h + (n + r))
        lower = V.volume() * count_cluster(fib, P, lo_region)
        upper = V.volume() * count_cluster(fib, P, hi_region)
        assert lower - 1e-9 <= J <= upper + 1e-9


def test_threaded_frequency_identical():
    fib = fibonacci_cut_project()
    spec = VanHoveSpec(n0=125, doublings=2)
    P = cluster_1d([0.0], [])
    offs = default_offsets(8, 10.0)
    serial = estimate_frequency(fib, P, spec, offs, threads=1)
    threaded = estimate_frequency(fib, P, spec, offs, threads=4)
    assert serial.per_n == threaded.per_n
    assert serial.per_offset == threaded.per_offset
