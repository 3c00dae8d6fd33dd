"""Coverage, fiber variation, invariant-set residuals, duality projections."""

import math
import random

import pytest

from horoflow.diagnostics import (
    BinningSpec,
    DensityReport,
    borel_grid,
    coverage,
    duality_project,
    fiber_variation,
    kset_distance,
    minimal_set_residual,
)
from horoflow.flows import (
    GeodesicD,
    HorocycleU,
    OrbitSegment,
    Sol3U,
    integrate_orbit,
)
from horoflow.groups import BOUNDARY_CIRCLE
from horoflow.models import build_modular, build_octagon, build_product, build_t3a
from horoflow.models.base import QuotientPoint
from horoflow.moebius import BoundaryPoint, MoebiusElement


@pytest.fixture(scope="module")
def t3a():
    return build_t3a(((2, 1), (1, 1)))


@pytest.fixture(scope="module")
def diagonal():
    return build_product(build_octagon(), BOUNDARY_CIRCLE)


def segment_of(coords_list, names=()):
    samples = tuple(
        (float(i), QuotientPoint("synthetic", c)) for i, c in enumerate(coords_list)
    )
    return OrbitSegment("synthetic", HorocycleU(1.0), samples, None,
                        max(0, len(coords_list) - 1), coord_names=names)


# -- binning spec -------------------------------------------------------------


def test_binning_validation():
    with pytest.raises(ValueError):
        BinningSpec((), ())
    with pytest.raises(ValueError):
        BinningSpec(((0.0, 1.0),), (4, 4))
    with pytest.raises(ValueError):
        BinningSpec(((1.0, 0.0),), (4,))
    with pytest.raises(ValueError):
        BinningSpec(((0.0, 1.0),), (0,))
    with pytest.raises(ValueError):
        BinningSpec(((0.0, math.inf),), (4,))


def test_binning_indices():
    spec = BinningSpec(((0.0, 1.0), (-2.0, 2.0)), (4, 8))
    assert spec.total == 32
    assert spec.indices((0.1, -1.9)) == (0, 0)
    assert spec.indices((0.0, -2.0)) == (0, 0)
    # the far corner folds into the last cell instead of falling out
    assert spec.indices((1.0, 2.0)) == (3, 7)
    assert spec.indices((0.99, 1.99)) == (3, 7)
    assert spec.indices((1.01, 0.0)) is None
    assert spec.indices((0.5, -2.5)) is None


# -- coverage -----------------------------------------------------------------


def test_coverage_empty_orbit_is_zero():
    report = coverage(segment_of([]), BinningSpec(((0.0, 1.0),), (5,)))
    assert report.fraction == 0.0
    assert report.visited == 0
    assert report.samples == 0


def test_coverage_full_grid_is_one():
    spec = BinningSpec(((0.0, 1.0), (0.0, 1.0)), (4, 4))
    centers = [
        ((i + 0.5) / 4, (j + 0.5) / 4) for i in range(4) for j in range(4)
    ]
    report = coverage(segment_of(centers), spec)
    assert report.fraction == 1.0
    assert report.visited == report.total == 16


def test_coverage_skips_out_of_box_samples():
    spec = BinningSpec(((0.0, 1.0),), (2,))
    report = coverage(segment_of([(0.25,), (7.0,), (-3.0,)]), spec)
    assert report.visited == 1
    assert report.fraction == 0.5


def test_coverage_monotone_in_prefix(t3a):
    seg = integrate_orbit(t3a, None, Sol3U(0.037), 20_000, seed=8)
    spec = BinningSpec(((0.0, 1.0), (0.0, 1.0)), (30, 30))
    prefix = OrbitSegment(seg.model, seg.flow, seg.samples[:4000], seg.seed,
                          4000, coord_names=seg.coord_names)
    assert coverage(prefix, spec).fraction <= coverage(seg, spec).fraction


def test_coverage_torus_fiber_dense(t3a):
    # irrational-slope winding: 1e5 unipotent steps fill the 50x50 torus grid
    seg = integrate_orbit(t3a, None, Sol3U(0.037), 100_000, seed=5)
    report = coverage(seg, BinningSpec(((0.0, 1.0), (0.0, 1.0)), (50, 50)))
    assert report.fraction >= 0.99
    assert report.model == "t3a"
    assert report.bins == (50, 50)


def test_coverage_axis_validation(t3a):
    seg = integrate_orbit(t3a, None, Sol3U(0.1), 10, seed=1)
    spec = BinningSpec(((0.0, 1.0),) * 4, (2, 2, 2, 2))
    with pytest.raises(ValueError):
        coverage(seg, spec)
    with pytest.raises(ValueError):
        coverage(seg, BinningSpec(((0.0, 1.0),), (2,)), axes=(0, 1))


def test_coverage_explicit_axes(t3a):
    seg = integrate_orbit(t3a, None, GeodesicD(0.01), 2000, seed=2)
    t_only = coverage(seg, BinningSpec(((0.0, 1.0),), (10,)), axes=(2,))
    assert t_only.fraction == 1.0  # geodesic time sweeps the suspension circle


# -- fiber variation ----------------------------------------------------------


def test_fiber_variation_unipotent_keeps_t(t3a):
    seg = integrate_orbit(t3a, None, Sol3U(0.037), 5000, seed=3)
    assert fiber_variation(seg, "t") == 0.0
    assert fiber_variation(seg, 2) == 0.0
    assert fiber_variation(seg, "x") > 0.3


def test_fiber_variation_geodesic_moves_t(t3a):
    seg = integrate_orbit(t3a, None, GeodesicD(0.01), 1000, seed=3)
    assert fiber_variation(seg, "t") > 0.1


def test_fiber_variation_constant_orbit():
    seg = segment_of([(0.3, 0.7)] * 5, names=("x", "y"))
    assert fiber_variation(seg, 0) == 0.0
    assert fiber_variation(seg, "y") == 0.0


def test_fiber_variation_wraps_circular_coordinates():
    seg = segment_of([(0.0, 0.0, 0.95), (0.0, 0.0, 0.05)], names=("x", "y", "t"))
    assert fiber_variation(seg, "t") == pytest.approx(0.1)
    plain = segment_of([(0.95,), (0.05,)], names=("fibre",))
    assert fiber_variation(plain, "fibre") == pytest.approx(0.9)


def test_fiber_variation_bad_coordinate():
    seg = segment_of([(0.0,)], names=("x",))
    with pytest.raises(ValueError):
        fiber_variation(seg, "q")
    with pytest.raises(IndexError):
        fiber_variation(seg, 5)


# -- minimal set residual -----------------------------------------------------


def test_borel_grid_shape():
    grid = borel_grid(50)
    assert len(grid) == 50
    keys = {g.key(1e-12) for g in grid}
    assert len(keys) == 50
    for g in grid:
        a, b, c, d = g.entries
        assert abs(c) < 1e-15  # upper triangular
    with pytest.raises(ValueError):
        borel_grid(0)


def test_graph_set_survives_identity_moves(diagonal):
    residual = minimal_set_residual(
        diagonal, 10, 0, (MoebiusElement.identity(),), seed=4
    )
    # identity boundary action still runs the half-angle fold, so the
    # residual is the tan/atan round trip error, not literally zero
    assert residual <= 1e-15


def test_graph_set_invariance(diagonal):
    residual = minimal_set_residual(diagonal, 25, 2, borel_grid(12), seed=4)
    assert residual <= 1e-8


def test_infinity_set_invariance(t3a):
    residual = minimal_set_residual(t3a, 40, 3, seed=4)
    assert residual <= 1e-8


def test_residual_needs_supported_model():
    with pytest.raises(ValueError):
        minimal_set_residual(build_modular(), 5, 1)


# -- duality projections ------------------------------------------------------


def test_duality_of_identity():
    v, y = duality_project(MoebiusElement.identity(), "U")
    assert v == (1.0, 0.0)
    assert y is None
    xi, _ = duality_project(MoebiusElement.identity(), "B")
    assert xi.is_infinity()


def test_duality_of_integer_frame():
    f = MoebiusElement(2.0, 1.0, 1.0, 1.0)
    assert duality_project(f, "U")[0] == (2.0, 1.0)
    xi, _ = duality_project(f, "B")
    assert abs(xi.value - 2.0) < 1e-12


def test_duality_rejects_unknown_subgroup():
    with pytest.raises(ValueError):
        duality_project(MoebiusElement.identity(), "D")


def test_duality_right_invariance():
    rng = random.Random(7)
    for _ in range(40):
        f = (
            MoebiusElement.u(rng.uniform(-2, 2))
            .mul(MoebiusElement.geo(math.exp(rng.uniform(-1, 1))))
            .mul(MoebiusElement.rot(rng.uniform(-2, 2)))
        )
        v0, _ = duality_project(f, "U")
        xi0, _ = duality_project(f, "B")
        for t in (-1.5, -0.2, 0.4, 2.0):
            v, _ = duality_project(f.mul(MoebiusElement.u(t)), "U")
            assert math.hypot(v[0] - v0[0], v[1] - v0[1]) < 1e-9
        for alpha in (0.3, 1.0, 2.7):
            for beta in (-1.0, 0.0, 1.3):
                moved = f.mul(MoebiusElement.b_el(alpha, beta))
                xi, _ = duality_project(moved, "B")
                assert xi.chordal(xi0) < 1e-9


def test_duality_transverse_rides_along(diagonal):
    point = diagonal.graph_point(MoebiusElement.geo(1.5))
    v, y = duality_project(point, "U")
    assert y is point.transverse
    xi, y2 = duality_project((point.frame, point.transverse), "B")
    assert y2 is point.transverse
    assert xi.chordal(point.transverse) < 1e-12


# -- graph set in dual coordinates --------------------------------------------


def test_kset_frozen_values():
    f = MoebiusElement(2.0, 1.0, 1.0, 1.0)
    assert kset_distance((f, 2.0)) < 1e-15
    assert kset_distance((MoebiusElement.identity(), BoundaryPoint.infinity())) == 0.0
    # first column (0, 1) against xi = 0: collinear with (0, 1), distance 0
    quarter_turn = MoebiusElement(0.0, -1.0, 1.0, 0.0)
    assert kset_distance((quarter_turn, 0.0)) == 0.0
    # the perpendicular pairing: column (1, 0) against the vector (0, 1)
    assert kset_distance(((1.0, 0.0), 0.0)) == 1.0


def test_kset_range():
    rng = random.Random(12)
    for _ in range(200):
        v = (rng.uniform(-3, 3), rng.uniform(-3, 3))
        if math.hypot(*v) < 1e-3:
            continue
        d = kset_distance((v, rng.uniform(-5, 5)))
        assert 0.0 <= d <= 1.0 + 1e-12


def test_kset_vanishes_along_unipotent_orbit(diagonal):
    # a graph point has first column collinear with (xi, 1); the right
    # unipotent action preserves both the column and xi up to holonomy
    start = diagonal.graph_point(
        MoebiusElement.geo(1.2).mul(MoebiusElement.u(0.7))
    )
    seg = integrate_orbit(diagonal, start, HorocycleU(0.05), 1000, sample_every=10)
    for _, point in seg.samples:
        assert kset_distance(point) <= 1e-8


def test_density_report_is_plain_data(t3a):
    seg = integrate_orbit(t3a, None, Sol3U(0.05), 50, seed=2)
    report = coverage(seg, BinningSpec(((0.0, 1.0), (0.0, 1.0)), (5, 5)))
    assert isinstance(report, DensityReport)
    assert report.flow == "Sol3U(0.05)"
    assert report.seed == 2
    assert 0.0 <= report.fraction <= 1.0
    assert report.visited <= report.total
