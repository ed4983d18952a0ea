from fractions import Fraction

import numpy as np
import pytest

from dessins import finite_groups as fg
from dessins import metrics as mt
from dessins import moebius as mb
from dessins.errors import CyclicGroupUnsupported, StencilOutOfDomain


def involution_group():
    # {id, z -> 1/(4z)}: the conjugate of z -> 1/z by z -> 2z
    return fg.closure([mb.MoebiusTransform([[0, 0.5], [2, 0]])])


def test_round_metric_values():
    rnd = mt.round_metric()
    assert rnd.rho(0.0) == 4.0
    assert rnd.rho(1.0) == 1.0
    assert rnd.rho_at_infinity(0.0) == 4.0
    assert mt.chart_compatibility_defect(rnd) < 1e-12
    z = np.array([0.5 + 0.5j, 2.0 + 0j])
    assert np.allclose(rnd.rho(z), 4.0 / (1 + np.abs(z) ** 2) ** 2)


def test_pullback_identity_and_scaling():
    rnd = mt.round_metric()
    g = mt.pullback(mb.MoebiusTransform.identity(), rnd)
    assert abs(g.rho(0.7 + 0.1j) - rnd.rho(0.7 + 0.1j)) < 1e-14
    doubled = mt.pullback(mb.MoebiusTransform.scaling(2.0), rnd)
    assert abs(doubled.rho(1.0) - 16.0 / 25.0) < 1e-14


def test_pullback_by_rotation_preserves_round():
    rnd = mt.round_metric()
    for gen in mb.standard_generators(fg.parse_group_tag("S4")):
        assert mt.metric_distance(mt.pullback(gen, rnd), rnd, 100) < 1e-10


def test_pullback_functoriality():
    rng = np.random.default_rng(7)
    rnd = mt.round_metric()
    zf, uf = mt.sphere_samples(40)
    for _ in range(20):
        m1 = fg.random_conjugator(rng, 20.0)
        m2 = fg.random_conjugator(rng, 20.0)
        lhs = mt.pullback(m1.compose(m2), rnd)
        rhs = mt.pullback(m2, mt.pullback(m1, rnd))
        num = np.abs(np.asarray(lhs.rho(zf)) - np.asarray(rhs.rho(zf)))
        assert float(np.max(num / np.asarray(rhs.rho(zf)))) < 1e-10
        num = np.abs(np.asarray(lhs.rho_at_infinity(uf)) - np.asarray(rhs.rho_at_infinity(uf)))
        assert float(np.max(num / np.asarray(rhs.rho_at_infinity(uf)))) < 1e-10


def test_pullback_total_at_poles():
    # z -> 1/z sends 0 to infinity; the factor must still evaluate there
    g = mt.pullback(mb.MoebiusTransform.inversion(), mt.round_metric())
    assert np.isfinite(g.rho(0.0)) and g.rho(0.0) > 0
    assert abs(g.rho(0.0) - 4.0) < 1e-14  # inversion preserves the round metric


def test_averaged_metric_trivial_group_is_round():
    g = fg.closure([])
    assert mt.metric_distance(mt.averaged_metric(g), mt.round_metric(), 100) < 1e-14


def test_averaged_metric_rotation_group_is_round():
    g = fg.from_type("D4")
    assert mt.metric_distance(mt.averaged_metric(g), mt.round_metric(), 200) < 1e-10


def test_averaged_metric_two_element_group():
    g = involution_group()
    m = mt.averaged_metric(g)
    # two-term average at z = 1, frozen from the closed form:
    # (4/(1+1)^2 + 4/(1/4^2+4)... the pulled factor is 4/((1/2)^2+2^2)^2
    expected = Fraction(1, 2) * (1 + Fraction(64, 289))
    assert abs(m.rho(1.0) - float(expected)) < 1e-14
    assert mt.invariance_defect(m, g, 200) < 1e-9
    assert mt.metric_distance(m, mt.round_metric(), 200) > 0.01
    assert mt.chart_compatibility_defect(m) < 1e-9


def test_conjugated_metric_rotation_group_is_round():
    assert mt.metric_distance(mt.conjugated_metric(fg.from_type("S4")),
                              mt.round_metric(), 200) < 1e-10


def test_conjugated_metric_translated_group():
    g = fg.conjugate_group(fg.from_type("A4"),
                           mb.MoebiusTransform.translation(1 + 1j))
    metric = mt.conjugated_metric(g)
    grid = mt.grid_points(40)
    for chart in ("finite", "infinity"):
        assert np.abs(mt.curvature_samples(metric, chart, grid, 1e-3) - 1).max() < 1e-4
    assert mt.invariance_defect(metric, g, 200) < 1e-8
    assert mt.chart_compatibility_defect(metric) < 1e-9


def test_conjugated_metric_rejects_cyclic():
    with pytest.raises(CyclicGroupUnsupported):
        mt.conjugated_metric(fg.from_type("C3"))


def test_hermitian_metric_trivial_and_rotations():
    rnd = mt.round_metric()
    assert mt.metric_distance(mt.hermitian_metric(fg.closure([])), rnd, 100) < 1e-12
    assert mt.metric_distance(mt.hermitian_metric(fg.from_type("D4")), rnd, 200) < 1e-9
    assert mt.metric_distance(mt.hermitian_metric(fg.from_type("A5")), rnd, 200) < 1e-9


def test_hermitian_metric_involution_group():
    g = involution_group()
    m = mt.hermitian_metric(g)
    assert mt.invariance_defect(m, g, 200) < 1e-8
    ks = mt.curvature_samples(m, "finite", mt.grid_points(20))
    assert ks.max() - ks.min() > 1e-3
    assert mt.chart_compatibility_defect(m) < 1e-9


def test_orbit_triple_metric_cyclic_fallback():
    assert mt.metric_distance(mt.orbit_triple_metric(fg.from_type("C7")),
                              mt.round_metric(), 100) < 1e-14


def test_orbit_triple_counts():
    # equal-size orbit pair doubles the sum; all sizes distinct keeps it single
    assert mt.orbit_triple_matrices(fg.from_type("A4")).shape[0] == 2 * 6 * 4 * 4
    assert mt.orbit_triple_matrices(fg.from_type("S4")).shape[0] == 12 * 8 * 6
    assert mt.orbit_triple_matrices(fg.from_type("D2")).shape[0] == 6 * 2 * 2 * 2


def test_orbit_triple_metric_values():
    a4 = mt.orbit_triple_metric(fg.from_type("A4"))
    grid = mt.grid_points(20)
    assert np.all(np.asarray(a4.rho(grid)) > 0)
    assert mt.chart_compatibility_defect(a4) < 1e-9
    s4 = mt.orbit_triple_metric(fg.from_type("S4"))
    ks = mt.curvature_samples(s4, "finite", grid)
    assert ks.max() - ks.min() > 1e-3


def test_curvature_reference_values():
    rnd = mt.round_metric()
    assert abs(mt.curvature(rnd, 0.3 + 0.2j, 1e-3) - 1.0) < 1e-4
    rot = mt.pullback(mb.MoebiusTransform([[1, 1j], [1j, 1]]), rnd)
    assert abs(mt.curvature(rot, 0.1 - 0.4j, 1e-3) - 1.0) < 1e-4
    flat = mt.ConformalMetric(lambda z: np.ones_like(np.asarray(z, complex), dtype=float)
                              if np.ndim(z) else 1.0,
                              lambda u: np.ones_like(np.asarray(u, complex), dtype=float)
                              if np.ndim(u) else 1.0)
    assert abs(mt.curvature(flat, 0.2 + 0.1j)) < 1e-8


def test_curvature_chart_switching():
    rnd = mt.round_metric()
    assert abs(mt.curvature(rnd, 5.0 + 2j) - 1.0) < 1e-4
    assert abs(mt.curvature(rnd, mb.INFINITY) - 1.0) < 1e-4
    assert abs(mt.curvature(rnd, 0.5, richardson=True) - 1.0) < 1e-8


def test_curvature_scaling_consistency():
    g = mt.averaged_metric(involution_group())
    z = 0.4 + 0.3j
    assert abs(mt.curvature(mt.scaled(g, 4.0), z) - mt.curvature(g, z) / 4.0) < 1e-6


def test_curvature_stencil_out_of_domain():
    bad = mt.ConformalMetric(lambda z: np.asarray(np.real(z), dtype=float)
                             if np.ndim(z) else float(np.real(z)),
                             lambda u: 1.0)
    with pytest.raises(StencilOutOfDomain):
        mt.curvature(bad, -0.5 + 0j)
    with pytest.raises(ValueError):
        mt.curvature(mt.round_metric(), 0.0, step=0.0)


def test_invariance_defect_reference_cases():
    rnd = mt.round_metric()
    assert mt.invariance_defect(rnd, fg.from_type("D6"), 200) < 1e-10
    assert mt.invariance_defect(rnd, involution_group(), 200) > 0.01


def test_metric_distance_properties():
    rnd = mt.round_metric()
    assert mt.metric_distance(rnd, rnd, 100) == 0.0
    with pytest.raises(ValueError):
        mt.metric_distance(rnd, rnd, 0)


def test_conjugated_metric_independent_of_preconjugation():
    rng = np.random.default_rng(21)
    base = fg.from_type("A4")
    metrics = []
    for _ in range(2):
        m = fg.random_conjugator(rng)
        moved = fg.conjugate_group(base, m)
        phi = fg.unitarize(moved).phi
        metrics.append(mt.pullback(phi.compose(m), mt.round_metric()))
    assert mt.metric_distance(metrics[0], metrics[1], 200) < 1e-6


def test_chart_compatibility_for_all_constructions():
    g = fg.conjugate_group(fg.from_type("D3"),
                           mb.MoebiusTransform([[1.1, 0.2j], [0.1, 0.9]]))
    for build in (mt.averaged_metric, mt.conjugated_metric,
                  mt.hermitian_metric, mt.orbit_triple_metric):
        assert mt.chart_compatibility_defect(build(g)) < 1e-9


def test_grid_rows_and_formats():
    rows = mt.metric_grid_rows(mt.round_metric(), n=8)
    csv = mt.format_grid_csv(rows)
    lines = csv.strip().split("\n")
    assert lines[0] == "re,im,chart,rho,curvature"
    assert len(lines) == len(rows) + 1
    # 17 significant digits survive a parse round trip
    for text, value in zip(lines[1].split(","), rows[0]):
        if isinstance(value, float):
            assert float(text) == value
    as_json = mt.grid_rows_as_json(rows)
    assert as_json[0].keys() == {"re", "im", "chart", "rho", "curvature"}


def test_grid_rows_worker_independent():
    metric = mt.averaged_metric(fg.from_type("D3"))
    assert mt.metric_grid_rows(metric, n=10) == mt.metric_grid_rows(metric, n=10, workers=3)


def test_sphere_samples_cover_both_charts():
    zf, uf = mt.sphere_samples(101)
    assert len(zf) + len(uf) == 101
    assert np.all(np.abs(zf) <= 1.0 + 1e-12)
    assert np.all(np.abs(uf) < 1.0)
