"""Combinatorial dessins: bicolored maps encoded by a pair of permutations.

A dessin on ``n`` darts is a pair (sigma_white, sigma_black) of
permutations of the darts: the counterclockwise rotations around white
and black vertices respectively.  Faces are the cycles of
sigma_white∘sigma_black (black rotation applied first).  Everything in
this module is exact integer arithmetic.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass

from . import permutations as perms
from .errors import Disconnected, MalformedInput, NotAPermutation
from .grouptypes import GroupType, classify_census


@dataclass(frozen=True)
class Dessin:
    dart_count: int
    sigma_white: tuple[int, ...]
    sigma_black: tuple[int, ...]

    def __post_init__(self):
        n = self.dart_count
        if n < 1:
            raise MalformedInput("dart count must be positive")
        for p in (self.sigma_white, self.sigma_black):
            if len(p) != n or sorted(p) != list(range(n)):
                raise NotAPermutation("not a bijection of the darts")
        if not perms.is_transitive((self.sigma_white, self.sigma_black), n):
            raise Disconnected("the two rotations do not generate a transitive action")

    @property
    def face_permutation(self) -> tuple[int, ...]:
        return perms.compose(self.sigma_white, self.sigma_black)


@dataclass(frozen=True)
class Passport:
    white_degrees: tuple[int, ...]
    black_degrees: tuple[int, ...]
    face_half_degrees: tuple[int, ...]
    degree: int


@dataclass(frozen=True)
class TriangulatedMap:
    triangle_count: int
    butterfly_count: int
    # (white vertex id, black vertex id, face id, sign) with sign in {+1, -1}
    triangles: tuple[tuple[int, int, int, int], ...]
    butterfly_pairs: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class PermGroup:
    """A group of dart permutations, stored as an explicit element list."""
    elements: tuple[tuple[int, ...], ...]

    @property
    def order(self) -> int:
        return len(self.elements)


def parse_dessin(text: str) -> Dessin:
    """Parse the JSON dessin format.

    Expected shape: ``{"darts": n, "sigma_white": [[...], ...],
    "sigma_black": [[...], ...]}`` with 1-based dart labels written in
    disjoint cycles; darts missing from every cycle are fixed.
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"invalid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise MalformedInput("top-level value must be an object")
    for key in ("darts", "sigma_white", "sigma_black"):
        if key not in data:
            raise MalformedInput(f"missing key {key!r}")
    n = data["darts"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise MalformedInput("'darts' must be a positive integer")
    sigmas = []
    for key in ("sigma_white", "sigma_black"):
        cycles = data[key]
        if not isinstance(cycles, list) or not all(isinstance(c, list) for c in cycles):
            raise MalformedInput(f"{key!r} must be a list of cycles")
        sigmas.append(perms.from_cycles(cycles, n))
    return Dessin(n, sigmas[0], sigmas[1])


def genus(d: Dessin) -> int:
    """Genus from the Euler characteristic of the bicolored map."""
    chi = (len(perms.cycles(d.sigma_white))
           + len(perms.cycles(d.sigma_black))
           + len(perms.cycles(d.face_permutation))
           - d.dart_count)
    assert chi % 2 == 0 and chi <= 2, "impossible Euler characteristic"
    return (2 - chi) // 2


def passport(d: Dessin) -> Passport:
    """Vertex-degree and face-half-degree multisets (the ramification profile)."""
    return Passport(
        white_degrees=perms.cycle_lengths(d.sigma_white),
        black_degrees=perms.cycle_lengths(d.sigma_black),
        face_half_degrees=perms.cycle_lengths(d.face_permutation),
        degree=d.dart_count,
    )


def riemann_hurwitz_holds(d: Dessin) -> bool:
    """2 - 2g == 2*degree - sum(e - 1) over every passport entry."""
    p = passport(d)
    total = sum(e - 1 for part in (p.white_degrees, p.black_degrees, p.face_half_degrees)
                for e in part)
    return 2 - 2 * genus(d) == 2 * p.degree - total


def _cycle_index(p: tuple[int, ...]) -> list[int]:
    idx = [0] * len(p)
    for k, cyc in enumerate(perms.cycles(p)):
        for d in cyc:
            idx[d] = k
    return idx


def triangulate(d: Dessin) -> TriangulatedMap:
    """Split each face into triangles (white, black, center); pair them into butterflies.

    Each dart contributes one positive triangle at its own (white, black)
    corner and one negative triangle sharing the black-center edge, so a
    face of half-degree p carries 2p triangles and every dart carries one
    butterfly.
    """
    wid = _cycle_index(d.sigma_white)
    bid = _cycle_index(d.sigma_black)
    fid = _cycle_index(d.face_permutation)
    face = d.face_permutation
    triangles: list[tuple[int, int, int, int]] = []
    pairs: list[tuple[int, int]] = []
    for dart in range(d.dart_count):
        nxt = face[dart]  # next corner counterclockwise inside the same face
        plus = (wid[dart], bid[dart], fid[dart], +1)
        minus = (wid[nxt], bid[dart], fid[dart], -1)
        triangles.append(plus)
        triangles.append(minus)
        pairs.append((2 * dart, 2 * dart + 1))
    return TriangulatedMap(
        triangle_count=len(triangles),
        butterfly_count=d.dart_count,
        triangles=tuple(triangles),
        butterfly_pairs=tuple(pairs),
    )


def _extend_from_seed(sw, sb, target: int) -> tuple[int, ...] | None:
    # A permutation commuting with both rotations is fixed by the image of
    # one dart; propagate dart 0 -> target along the action and check
    # consistency.
    n = len(sw)
    img = [-1] * n
    img[0] = target
    stack = [0]
    while stack:
        d = stack.pop()
        for s in (sw, sb):
            e = s[d]
            fe = s[img[d]]
            if img[e] == -1:
                img[e] = fe
                stack.append(e)
            elif img[e] != fe:
                return None
    if -1 in img or len(set(img)) != n:
        return None
    return tuple(img)


def automorphisms(d: Dessin) -> PermGroup:
    """All dart permutations commuting with both rotations.

    For a connected dessin this centralizer acts freely, so each
    automorphism is determined by the image of dart 0 and the group order
    divides the dart count.
    """
    els = []
    for target in range(d.dart_count):
        img = _extend_from_seed(d.sigma_white, d.sigma_black, target)
        if img is not None:
            els.append(img)
    els.sort()
    return PermGroup(tuple(els))


def brute_force_automorphisms(d: Dessin) -> PermGroup:
    """Independent oracle: filter all n! permutations (small n only)."""
    import itertools

    n = d.dart_count
    els = []
    for cand in itertools.permutations(range(n)):
        if (perms.compose(cand, d.sigma_white) == perms.compose(d.sigma_white, cand)
                and perms.compose(cand, d.sigma_black) == perms.compose(d.sigma_black, cand)):
            els.append(cand)
    els.sort()
    return PermGroup(tuple(els))


def classify_perm_group(g: PermGroup) -> GroupType:
    """Classify via order, element-order census and abelianness."""
    census = dict(Counter(perms.order(p) for p in g.elements))
    abelian = all(perms.compose(a, b) == perms.compose(b, a)
                  for i, a in enumerate(g.elements) for b in g.elements[i + 1:])
    return classify_census(g.order, census, abelian)
