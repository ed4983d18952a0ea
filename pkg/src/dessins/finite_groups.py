"""Finite Moebius groups as explicit element lists.

Groups are built by breadth-first closure of a generating set with
projective deduplication, classified through their element-order census,
and conjugated into the rotation group by averaging the Hermitian forms
A^H A over the elements (the averaged form H is positive definite; its
triangular factor conjugates the group onto projectively unitary
matrices).
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import (CyclicGroupUnsupported, InfiniteGroup, NumericalAmbiguity,
                     TrivialGroup)
from .grouptypes import GroupType, classify_census, parse_group_tag
from .moebius import (DEFAULT_ORDER_CAP, PROJECTIVE_TOL, MoebiusTransform,
                      SpherePoint, chordal_distance, element_order,
                      fixed_points, projective_distance, standard_generators)

DEFAULT_CLOSURE_CAP = 200
CLUSTER_TOL = 1e-8  # chordal distance identifying sphere points


@dataclass(frozen=True)
class FiniteMoebiusGroup:
    elements: tuple[MoebiusTransform, ...]
    type_tag: GroupType

    @property
    def order(self) -> int:
        return len(self.elements)

    def matrix_stack(self) -> np.ndarray:
        """All normalized element matrices as one (order, 2, 2) array."""
        return np.array([m.matrix for m in self.elements])

    def to_json(self) -> dict:
        return {"type": str(self.type_tag),
                "elements": [m.to_entries() for m in self.elements]}

    @staticmethod
    def from_json(data: dict) -> "FiniteMoebiusGroup":
        els = tuple(MoebiusTransform.from_entries(e) for e in data["elements"])
        return FiniteMoebiusGroup(els, parse_group_tag(data["type"]))


@dataclass(frozen=True)
class Conjugator:
    phi: MoebiusTransform


@dataclass(frozen=True)
class Orbit:
    points: tuple[SpherePoint, ...]
    stabilizer_order: int


@dataclass(frozen=True)
class OrbitData:
    orbits: tuple[Orbit, ...]
    group_order: int

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(o.points) for o in self.orbits)


def _census(elements) -> dict[int, int]:
    # element orders divide the group order, which may exceed the default cap
    cap = max(DEFAULT_ORDER_CAP, len(elements))
    return dict(Counter(element_order(m, cap) for m in elements))


def _is_abelian(elements) -> bool:
    for i, a in enumerate(elements):
        for b in elements[i + 1:]:
            if not a.compose(b).projectively_equal(b.compose(a)):
                return False
    return True


def classify_elements(elements) -> GroupType:
    census = _census(elements)
    if None in census:
        return GroupType.other()
    return classify_census(len(elements), census, _is_abelian(elements))


def closure(generators, cap: int = DEFAULT_CLOSURE_CAP) -> FiniteMoebiusGroup:
    """Breadth-first product closure with projective deduplication.

    Raises InfiniteGroup past ``cap`` elements and NumericalAmbiguity if a
    product lands in the unreliable band between the dedup tolerance and
    ten times it.
    """
    if cap < 1:
        raise ValueError("cap must be at least 1")
    elements: list[MoebiusTransform] = [MoebiusTransform.identity()]

    def register(m: MoebiusTransform) -> bool:
        best = min(projective_distance(m, e) for e in elements)
        if best < PROJECTIVE_TOL:
            return False
        if best < 10 * PROJECTIVE_TOL:
            raise NumericalAmbiguity(
                f"two elements at projective distance {best:.3e}; "
                "tighten the generators")
        elements.append(m)
        if len(elements) > cap:
            raise InfiniteGroup(f"closure exceeded {cap} elements")
        return True

    gens = [MoebiusTransform(g.matrix) for g in generators]
    frontier = [g for g in gens if register(g)]
    while frontier:
        fresh = []
        for w in frontier:
            for g in gens:
                p = w.compose(g)
                if register(p):
                    fresh.append(p)
        frontier = fresh
    els = tuple(elements)
    return FiniteMoebiusGroup(els, classify_elements(els))


def from_type(tag: GroupType | str) -> FiniteMoebiusGroup:
    """Closure of the standard generators for the given type tag."""
    if isinstance(tag, str):
        tag = parse_group_tag(tag)
    return closure(standard_generators(tag))


def conjugate_group(g: FiniteMoebiusGroup, m: MoebiusTransform) -> FiniteMoebiusGroup:
    """m G m^{-1}, element by element; the type tag is preserved."""
    mi = m.inverse()
    els = tuple(m.compose(e).compose(mi) for e in g.elements)
    return FiniteMoebiusGroup(els, g.type_tag)


def averaged_hermitian_form(g: FiniteMoebiusGroup) -> np.ndarray:
    """H = mean of A^H A over the normalized lifts; positive definite Hermitian."""
    stack = g.matrix_stack()
    h = np.mean(np.conj(np.transpose(stack, (0, 2, 1))) @ stack, axis=0)
    return (h + h.conj().T) / 2.0


def unitarize(g: FiniteMoebiusGroup) -> Conjugator:
    """A transformation phi with phi G phi^{-1} projectively unitary.

    Factor the averaged form H = P^H P; invariance A^H H A = H then gives
    (P A P^{-1})^H (P A P^{-1}) = I exactly.
    """
    h = averaged_hermitian_form(g)
    lower = np.linalg.cholesky(h)
    return Conjugator(MoebiusTransform(lower.conj().T))


def is_in_SO3(g: FiniteMoebiusGroup, tol: float = 1e-8) -> bool:
    """Is every element projectively unitary, i.e. a rotation of the sphere?"""
    if tol <= 0:
        raise ValueError("tol must be positive")
    return all(m.unitarity_defect() < tol for m in g.elements)


def _cluster_points(points: list[SpherePoint]) -> list[SpherePoint]:
    reps: list[SpherePoint] = []
    for p in points:
        if all(chordal_distance(p, r) >= CLUSTER_TOL for r in reps):
            reps.append(p)
    return reps


def _find_cluster(reps, p: SpherePoint) -> int:
    for k, r in enumerate(reps):
        if chordal_distance(p, r) < CLUSTER_TOL:
            return k
    raise RuntimeError("group image of a fixed point missed every cluster")


def orbit_analysis(g: FiniteMoebiusGroup) -> OrbitData:
    """Fixed points of the non-identity elements, grouped into orbits.

    The class formula |orbit| * stabilizer = |G| is validated for every
    orbit; orbits come back sorted by decreasing size.
    """
    non_identity = [m for m in g.elements if not m.is_identity()]
    if not non_identity:
        raise TrivialGroup("the trivial group fixes everything")
    collected: list[SpherePoint] = []
    for m in non_identity:
        fp = fixed_points(m)
        collected.extend(fp)
    reps = _cluster_points(collected)
    assigned = [False] * len(reps)
    orbits: list[Orbit] = []
    for k, rep in enumerate(reps):
        if assigned[k]:
            continue
        members: set[int] = set()
        for m in g.elements:
            members.add(_find_cluster(reps, m.apply(rep)))
        for idx in members:
            assigned[idx] = True
        stab = sum(1 for m in g.elements
                   if chordal_distance(m.apply(rep), rep) < CLUSTER_TOL)
        orbit = Orbit(tuple(reps[i] for i in sorted(members)), stab)
        if len(orbit.points) * stab != g.order:
            raise RuntimeError(
                f"class formula violated: {len(orbit.points)} * {stab} != {g.order}")
        orbits.append(orbit)
    orbits.sort(key=lambda o: len(o.points), reverse=True)
    return OrbitData(tuple(orbits), g.order)


def burnside_consistent(data: OrbitData) -> bool:
    """Sum of 1/stabilizer over orbits equals k - 2 + 2/|G|, exactly."""
    k = len(data.orbits)
    lhs = sum(Fraction(1, o.stabilizer_order) for o in data.orbits)
    return lhs == k - 2 + Fraction(2, data.group_order)


def random_conjugator(rng: np.random.Generator,
                      max_condition: float = 100.0) -> MoebiusTransform:
    """Random transformation with entries uniform in the unit disc.

    Draws are rejected while the normalized matrix is singular or has
    condition number above ``max_condition``.
    """
    while True:
        flat = []
        while len(flat) < 4:
            x, y = rng.uniform(-1.0, 1.0, 2)
            if x * x + y * y <= 1.0:
                flat.append(complex(x, y))
        m = np.array(flat).reshape(2, 2)
        if abs(np.linalg.det(m)) < 1e-9:
            continue
        cand = MoebiusTransform(m)
        if np.linalg.cond(cand.matrix) <= max_condition:
            return cand


def conjugator_well_defined(g: FiniteMoebiusGroup, trials: int = 3,
                            seed: int = 0, samples: int = 200,
                            max_condition: float = 100.0) -> float:
    """Spread between sphere metrics built through independent conjugators.

    Each trial moves the group by a random transformation, unitarizes the
    moved copy and pulls the round metric back through the combined map;
    for non-cyclic groups all trials must produce the same metric.  Cyclic
    groups are rejected: their normalizer is too large for the metric to
    be pinned down.
    """
    from .metrics import metric_distance, pullback, round_metric

    if trials < 2:
        raise ValueError("need at least 2 trials to compare")
    if g.type_tag.is_cyclic:
        raise CyclicGroupUnsupported(
            f"{g.type_tag} is cyclic; the conjugated metric is not canonical")
    rng = np.random.default_rng(seed)
    rnd = round_metric()
    metrics = []
    for _ in range(trials):
        m = random_conjugator(rng, max_condition)
        moved = conjugate_group(g, m)
        phi = unitarize(moved).phi
        metrics.append(pullback(phi.compose(m), rnd))
    worst = 0.0
    for i in range(len(metrics)):
        for j in range(i + 1, len(metrics)):
            worst = max(worst, metric_distance(metrics[i], metrics[j], samples))
    return worst
