"""Conformal metrics on the Riemann sphere.

A metric is a pair of positive conformal factors, one per chart:
``rho(z) |dz|^2`` on the finite chart and ``rho_at_infinity(u) |du|^2``
in the coordinate ``u = 1/z``.  Chart compatibility means
``rho(z) = rho_at_infinity(1/z) / |z|^4``.  Factors are callables that
accept a complex scalar or any ndarray of complex values.

Constructions:

* the round sphere of radius 1, ``4 |dz|^2 / (1 + |z|^2)^2``;
* pullbacks along Moebius transformations;
* the group average of round-metric pullbacks (invariant for any finite
  group, curvature not constant in general);
* the pullback of the round metric through the unitarizing conjugator
  (non-cyclic groups only; constant curvature 1 and conjugator-independent);
* the group-symmetrized restriction of the averaged Hermitian form to the
  embedded sphere;
* the average of round-metric pullbacks over Moebius maps anchored at
  triples drawn from the three orbits of the fixed-point set.

The pullback of the round metric by a matrix M has the closed form
``4 |det M|^2 / ((|a z + b|^2 + |c z + d|^2)^2)``, positive and smooth on
the whole chart, which all stack-based constructions share.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import CyclicGroupUnsupported, StencilOutOfDomain
from .finite_groups import (FiniteMoebiusGroup, averaged_hermitian_form,
                            orbit_analysis, unitarize)
from .moebius import FLIP, MoebiusTransform, as_sphere_point, from_triple

DEFAULT_CURVATURE_STEP = 1e-3
DEFAULT_SAMPLES = 200
_CHUNK_BUDGET = 4_000_000  # max matrix-point pairs per vectorized block


@dataclass(frozen=True)
class ConformalMetric:
    rho: Callable
    rho_at_infinity: Callable
    provenance: str = "custom"


def _wrap(fn):
    """Lift a 1-d-array kernel to accept complex scalars or ndarrays."""
    def rho(z):
        arr = np.asarray(z, dtype=complex)
        vals = fn(np.atleast_1d(arr).ravel())
        if arr.shape == ():
            return float(vals[0])
        return vals.reshape(arr.shape)
    return rho


def _swap_charts(g: ConformalMetric) -> ConformalMetric:
    return ConformalMetric(g.rho_at_infinity, g.rho, g.provenance)


# ---------------------------------------------------------------------------
# stack-based densities (sums of round-metric pullbacks)

def _pulled_round_kernel(mats) -> Callable:
    mats = np.asarray(mats, dtype=complex)
    a = mats[:, 0, 0][:, None]
    b = mats[:, 0, 1][:, None]
    c = mats[:, 1, 0][:, None]
    d = mats[:, 1, 1][:, None]
    det2 = np.abs(mats[:, 0, 0] * mats[:, 1, 1] - mats[:, 0, 1] * mats[:, 1, 0])[:, None] ** 2
    chunk = max(1, _CHUNK_BUDGET // mats.shape[0])

    def kernel(zf):
        out = np.empty(zf.shape[0])
        for s in range(0, zf.shape[0], chunk):
            zz = zf[s:s + chunk][None, :]
            n2 = np.abs(a * zz + b) ** 2 + np.abs(c * zz + d) ** 2
            out[s:s + chunk] = np.mean(4.0 * det2 / (n2 * n2), axis=0)
        return out

    return kernel


def _metric_from_stack(mats, provenance: str) -> ConformalMetric:
    mats = np.asarray(mats, dtype=complex)
    flip = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
    return ConformalMetric(
        rho=_wrap(_pulled_round_kernel(mats)),
        rho_at_infinity=_wrap(_pulled_round_kernel(mats @ flip)),
        provenance=provenance,
    )


def round_metric() -> ConformalMetric:
    """The radius-1 round sphere carried to both charts: 4 / (1 + |.|^2)^2."""
    def kernel(zf):
        return 4.0 / (1.0 + np.abs(zf) ** 2) ** 2
    return ConformalMetric(_wrap(kernel), _wrap(kernel), "round")


# ---------------------------------------------------------------------------
# pullback

def _pullback_density(g: ConformalMetric, m: MoebiusTransform) -> Callable:
    """Density z -> rho_g(m(z)) |m'(z)|^2, switching charts where |m(z)| > 1."""
    a, b, c, d = m.a, m.b, m.c, m.d

    def kernel(zf):
        top = a * zf + b
        bot = c * zf + d
        with np.errstate(divide="ignore", invalid="ignore"):
            w = top / bot
        finite = np.isfinite(w) & (np.abs(w) <= 1.0)
        out = np.empty(zf.shape[0])
        if finite.any():
            out[finite] = (np.asarray(g.rho(w[finite]), float)
                           / np.abs(bot[finite]) ** 4)
        other = ~finite
        if other.any():
            # image lies in the u = 1/z chart; 1/m has matrix [[c,d],[a,b]]
            out[other] = (np.asarray(g.rho_at_infinity(bot[other] / top[other]), float)
                          / np.abs(top[other]) ** 4)
        return out

    return _wrap(kernel)


def pullback(m: MoebiusTransform, g: ConformalMetric) -> ConformalMetric:
    """The metric h with h = g pulled back along m: rho_h = (rho_g ∘ m) |m'|^2."""
    return ConformalMetric(
        rho=_pullback_density(g, m),
        rho_at_infinity=_pullback_density(g, m.compose(FLIP)),
        provenance=f"pullback[{g.provenance}]",
    )


def scaled(g: ConformalMetric, factor: float) -> ConformalMetric:
    """Multiply both conformal factors by a positive constant."""
    if factor <= 0:
        raise ValueError("factor must be positive")
    return ConformalMetric(
        rho=lambda z: factor * np.asarray(g.rho(z)) if np.ndim(z) else factor * g.rho(z),
        rho_at_infinity=lambda u: (factor * np.asarray(g.rho_at_infinity(u))
                                   if np.ndim(u) else factor * g.rho_at_infinity(u)),
        provenance=f"scaled[{g.provenance}]",
    )


def _mean_density(densities) -> Callable:
    def rho(z):
        vals = [dens(z) for dens in densities]
        if isinstance(vals[0], float):
            return sum(vals) / len(vals)
        return np.mean(np.stack(vals), axis=0)
    return rho


# ---------------------------------------------------------------------------
# the four group constructions

def averaged_metric(g: FiniteMoebiusGroup) -> ConformalMetric:
    """Group average of round-metric pullbacks; defined for every finite group.

    Invariant under g by construction and equal to the round metric when
    the group is already made of rotations.
    """
    return _metric_from_stack(g.matrix_stack(), f"average[{g.type_tag}]")


def conjugated_metric(g: FiniteMoebiusGroup) -> ConformalMetric:
    """Round metric pulled back through the unitarizing conjugator.

    Constant Gaussian curvature 1, invariant under g, and independent of
    the conjugator choice; cyclic groups are rejected because their
    normalizer leaves the conjugator essentially free.
    """
    if g.type_tag.is_cyclic:
        raise CyclicGroupUnsupported(
            f"{g.type_tag} is cyclic; the conjugated metric is not canonical")
    phi = unitarize(g).phi
    return _metric_from_stack(phi.matrix[None, :, :], f"conjugate[{g.type_tag}]")


def _hermitian_base(h: np.ndarray) -> ConformalMetric:
    """Conformal part of the h-Hermitian form restricted to the embedded sphere.

    The sphere sits in C^2 as (z, t) with t real; pushing the tangent
    frame of the stereographic parametrization through the form and
    averaging the two chart directions gives a closed-form factor in each
    chart.
    """
    h11 = float(h[0, 0].real)
    h22 = float(h[1, 1].real)
    h12 = complex(h[0, 1])

    def q(v1, v2):
        return (h11 * np.abs(v1) ** 2
                + 2.0 * (np.conj(v1) * h12 * v2).real
                + h22 * np.abs(v2) ** 2)

    def fin(zf):
        dd = 2.0 / (1.0 + np.abs(zf) ** 2) ** 2
        zz = zf * zf
        return 0.5 * dd * dd * (q(1.0 - zz, 2.0 * zf.real)
                                + q(1.0 + zz, -2j * zf.imag))

    def inf(uf):
        ub = np.conj(uf)
        dd = 2.0 / (1.0 + np.abs(uf) ** 2) ** 2
        uu = ub * ub
        return 0.5 * dd * dd * (q(1.0 - uu, -(uf + ub))
                                + q(1.0 + uu, ub - uf))

    return ConformalMetric(_wrap(fin), _wrap(inf), "hermitian-base")


def hermitian_metric(g: FiniteMoebiusGroup) -> ConformalMetric:
    """Sphere metric from the averaged invariant Hermitian form.

    The averaged form is restricted to tangent planes of the embedded
    sphere and expressed in each chart; the restriction itself is not
    preserved by non-rotation group elements, so the group average of its
    pullbacks is taken, which is exactly invariant and still reduces to
    the round metric whenever the group lies in the rotations.
    """
    base = _hermitian_base(averaged_hermitian_form(g))
    fins = [_pullback_density(base, m) for m in g.elements]
    infs = [_pullback_density(base, m.compose(FLIP)) for m in g.elements]
    return ConformalMetric(_mean_density(fins), _mean_density(infs),
                           f"hermitian[{g.type_tag}]")


def orbit_triple_matrices(g: FiniteMoebiusGroup) -> np.ndarray:
    """Matrices sending (0, 1, infinity) to the orbit triples of g.

    Orbits are sorted by decreasing size; triples run over the product of
    the three orbits, once per size-preserving reassignment of the orbit
    roles (orbits of equal size cannot be told apart).
    """
    data = orbit_analysis(g)
    sizes = data.sizes
    assignments = [p for p in itertools.permutations(range(3))
                   if all(sizes[p[i]] == sizes[i] for i in range(3))]
    mats = []
    for assign in assignments:
        triples = itertools.product(data.orbits[assign[0]].points,
                                    data.orbits[assign[1]].points,
                                    data.orbits[assign[2]].points)
        for p0, p1, p2 in triples:
            mats.append(from_triple(p0, p1, p2).matrix)
    return np.array(mats)


def orbit_triple_metric(g: FiniteMoebiusGroup) -> ConformalMetric:
    """Average of round-metric pullbacks over orbit-anchored transformations.

    Cyclic groups have no orbit triple and fall back to the round metric.
    """
    if g.type_tag.is_cyclic:
        rnd = round_metric()
        return ConformalMetric(rnd.rho, rnd.rho_at_infinity,
                               f"orbit-round-fallback[{g.type_tag}]")
    return _metric_from_stack(orbit_triple_matrices(g), f"orbit[{g.type_tag}]")


# ---------------------------------------------------------------------------
# curvature

def _stencil_values(rho, coords, h):
    offsets = (0.0, h, -h, 1j * h, -1j * h)
    vals = np.stack([np.asarray(rho(coords + off), dtype=float) for off in offsets])
    if not np.all(np.isfinite(vals)) or np.any(vals <= 0.0):
        raise StencilOutOfDomain("conformal factor undefined or non-positive "
                                 "on the finite-difference stencil")
    return vals


def _laplacian_curvature(vals, h):
    u = 0.5 * np.log(vals)
    lap = (u[1] + u[2] + u[3] + u[4] - 4.0 * u[0]) / (h * h)
    return -lap / vals[0]


def curvature_samples(g: ConformalMetric, chart: str, coords, step: float = DEFAULT_CURVATURE_STEP):
    """Gaussian curvature at an array of chart coordinates."""
    rho = g.rho if chart == "finite" else g.rho_at_infinity
    coords = np.atleast_1d(np.asarray(coords, dtype=complex))
    return _laplacian_curvature(_stencil_values(rho, coords, step), step)


def curvature(g: ConformalMetric, z, step: float = DEFAULT_CURVATURE_STEP,
              richardson: bool = False) -> float:
    """Gaussian curvature at a point, by the 5-point Laplacian of log(rho)/2.

    Points with |z| > 1 (and infinity itself) are evaluated in the
    u = 1/z chart, where the factor is regular.
    """
    if step <= 0:
        raise ValueError("step must be positive")
    p = as_sphere_point(z)
    if p.is_infinity:
        chart, w = "infinity", 0j
    elif abs(p.z) > 1.0:
        chart, w = "infinity", 1.0 / p.z
    else:
        chart, w = "finite", p.z
    k = float(curvature_samples(g, chart, w, step)[0])
    if richardson:
        k_half = float(curvature_samples(g, chart, w, step / 2.0)[0])
        k = (4.0 * k_half - k) / 3.0
    return k


# ---------------------------------------------------------------------------
# sampling and diagnostics

def sphere_samples(n: int = DEFAULT_SAMPLES):
    """Deterministic spiral covering of the sphere, split by chart.

    Returns (finite-chart coordinates with |z| <= 1, infinity-chart
    coordinates with |u| < 1).
    """
    if n < 1:
        raise ValueError("need at least one sample")
    i = np.arange(n)
    t = (2.0 * i + 1.0) / n - 1.0
    golden_angle = np.pi * (3.0 - np.sqrt(5.0))
    zc = np.sqrt(1.0 - t * t) * np.exp(1j * golden_angle * i)
    south = t <= 0.0
    finite = zc[south] / (1.0 - t[south])
    inf = (1.0 - t[~south]) / zc[~south]
    return finite, inf


def invariance_defect(g: ConformalMetric, grp: FiniteMoebiusGroup,
                      samples: int = DEFAULT_SAMPLES) -> float:
    """sup over samples and group elements of |rho(h(z)) |h'|^2 - rho(z)| / rho(z)."""
    if samples < 1:
        raise ValueError("need at least one sample")
    zf, uf = sphere_samples(samples)
    flipped = _swap_charts(g)
    rho_f = np.asarray(g.rho(zf), float)
    rho_i = np.asarray(flipped.rho(uf), float)
    worst = 0.0
    for el in grp.elements:
        if el.is_identity():
            continue
        lhs = np.asarray(_pullback_density(g, el)(zf), float)
        worst = max(worst, float(np.max(np.abs(lhs - rho_f) / rho_f)))
        el_inf = FLIP.compose(el).compose(FLIP)
        lhs_i = np.asarray(_pullback_density(flipped, el_inf)(uf), float)
        worst = max(worst, float(np.max(np.abs(lhs_i - rho_i) / rho_i)))
    return worst


def metric_distance(g1: ConformalMetric, g2: ConformalMetric,
                    samples: int = DEFAULT_SAMPLES) -> float:
    """sup over samples of |rho1 - rho2| / rho2, evaluated chart-aware."""
    if samples < 1:
        raise ValueError("need at least one sample")
    zf, uf = sphere_samples(samples)
    worst = 0.0
    for coords, r1, r2 in ((zf, g1.rho, g2.rho),
                           (uf, g1.rho_at_infinity, g2.rho_at_infinity)):
        a = np.asarray(r1(coords), float)
        b = np.asarray(r2(coords), float)
        worst = max(worst, float(np.max(np.abs(a - b) / b)))
    return worst


def chart_compatibility_defect(g: ConformalMetric, samples: int = 64) -> float:
    """Max relative mismatch of rho(z) vs rho_inf(1/z)/|z|^4 on 0.5 <= |z| <= 2."""
    radii = np.linspace(0.5, 2.0, 8)
    angles = np.linspace(0.0, 2.0 * np.pi, max(2, samples // 8), endpoint=False)
    z = (radii[:, None] * np.exp(1j * angles)[None, :]).ravel()
    lhs = np.asarray(g.rho(z), float)
    rhs = np.asarray(g.rho_at_infinity(1.0 / z), float) / np.abs(z) ** 4
    return float(np.max(np.abs(lhs - rhs) / rhs))


# ---------------------------------------------------------------------------
# report grid

def grid_points(n: int = 40) -> np.ndarray:
    """Tensor grid on [-1, 1]^2 clipped to the closed unit disc."""
    xs = np.linspace(-1.0, 1.0, n)
    z = (xs[:, None] + 1j * xs[None, :]).ravel()
    return z[np.abs(z) <= 1.0]


def metric_grid_rows(g: ConformalMetric, n: int = 40,
                     step: float = DEFAULT_CURVATURE_STEP, workers: int = 1):
    """Grid rows (re, im, chart, rho, curvature) over both charts.

    The result is independent of ``workers``; the pool only splits the
    evaluation into ordered chunks.
    """
    pts = grid_points(n)
    rows = []
    for chart in ("finite", "infinity"):
        rho = g.rho if chart == "finite" else g.rho_at_infinity
        if workers > 1:
            chunks = np.array_split(pts, workers)
            with ThreadPoolExecutor(max_workers=workers) as pool:
                dens_parts = list(pool.map(lambda c: np.asarray(rho(c), float), chunks))
                curv_parts = list(pool.map(
                    lambda c: curvature_samples(g, chart, c, step), chunks))
            dens = np.concatenate(dens_parts)
            curv = np.concatenate(curv_parts)
        else:
            dens = np.asarray(rho(pts), float)
            curv = curvature_samples(g, chart, pts, step)
        rows.extend((float(z.real), float(z.imag), chart, float(r), float(k))
                    for z, r, k in zip(pts, dens, curv))
    return rows


GRID_HEADER = "re,im,chart,rho,curvature"


def format_grid_csv(rows) -> str:
    lines = [GRID_HEADER]
    for re_, im_, chart, rho, curv in rows:
        lines.append(f"{re_:.17g},{im_:.17g},{chart},{rho:.17g},{curv:.17g}")
    return "\n".join(lines) + "\n"


def grid_rows_as_json(rows) -> list[dict]:
    return [{"re": r, "im": i, "chart": c, "rho": rho, "curvature": k}
            for r, i, c, rho, k in rows]
