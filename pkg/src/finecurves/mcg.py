"""Piecewise-linear half-twists and braid words acting on curves.

A half-twist about adjacent punctures i, i+1 is realized exactly over
the rationals: an elliptical core containing the two punctures rotates
by half a turn (an exact rational map, x -> 2c - x), the identity holds
outside a concentric outer ring, and the annulus in between is split
into K/2 bands of K quads each, sheared by one vertex index per band.
Each ring polygon is antipodally symmetric, so the index shift by K/2
is exactly the half-turn rotation on ring vertices, and the whole map
is simplicial on the band triangulations.

The construction is validated at build time: the two punctures are
strictly inside the core, all other punctures are strictly outside the
outer ring, and every triangle of every band keeps its orientation
under the vertex map.

Words are kept lazy (a sequence of signed generators) and evaluated
curve by curve; composing charts explicitly would blow up coordinates.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from gmpy2 import mpq

from .rationals import Q
from .geometry import (
    Point,
    add,
    candidate_pairs,
    cross,
    lerp,
    orient,
    perp,
    scale,
    seg_intersect,
    sub,
    winding_number,
)
from .geom import PolyCurve, validate_curve
from .surface import DiskModel, SurfaceModel, unit_direction


class TwistError(ValueError):
    pass


K_RING = 16  # vertices per ring; bands = K_RING // 2
N_BANDS = K_RING // 2


@dataclass(frozen=True)
class BraidWord:
    """A word in the half-twist generators: ((index, sign), ...) with
    1-based indices and signs +-1."""

    letters: tuple

    @staticmethod
    def parse(text: str) -> "BraidWord":
        """Parse words like "s1 s2^-1 s3"."""
        letters = []
        for tok in text.split():
            m = re.fullmatch(r"s(\d+)(?:\^(-?1))?", tok)
            if not m:
                raise TwistError(f"bad braid letter: {tok!r}")
            letters.append((int(m.group(1)), int(m.group(2) or 1)))
        return BraidWord(tuple(letters))

    def inverse(self) -> "BraidWord":
        return BraidWord(tuple((i, -s) for i, s in reversed(self.letters)))

    def __mul__(self, other: "BraidWord") -> "BraidWord":
        return BraidWord(self.letters + other.letters)

    def __str__(self) -> str:
        return " ".join(f"s{i}" if s > 0 else f"s{i}^-1" for i, s in self.letters)


class PLMap:
    """One exact PL half-twist (or its inverse) about punctures i, i+1."""

    def __init__(self, model, index: int, sign: int = 1):
        punctures = model.punctures
        if not (1 <= index <= len(punctures) - 1):
            raise TwistError(f"half-twist index {index} out of range")
        if sign not in (1, -1):
            raise TwistError("sign must be +-1")
        self.index = index
        self.sign = sign
        p_lo = punctures[index - 1]
        p_hi = punctures[index]
        self.center = scale(add(p_lo, p_hi), Q(1, 2))
        self.axis = sub(p_hi, self.center)
        self._build(model)

    # -- construction ------------------------------------------------------

    def _build(self, model) -> None:
        punctures = model.punctures
        others = [
            p
            for k, p in enumerate(punctures)
            if k not in (self.index - 1, self.index)
        ]
        u = [unit_direction(Fraction(j, K_RING)) for j in range(K_RING // 2)]
        u = u + [scale(d, -1) for d in u]
        # Near-circular rings: the index shift is then close to a rigid
        # rotation, keeping every band triangle safely oriented.
        rho = 2 * max(abs(self.axis[0]), abs(self.axis[1]))
        base_ring = [add(self.center, scale(d, rho)) for d in u]
        for lam in (Q(2), Q(3, 2), Q(5, 4), Q(9, 8), Q(17, 16)):
            rings = []
            for t in range(N_BANDS + 1):
                mu = 1 + (lam - 1) * Q(t, N_BANDS)
                rings.append(
                    [add(self.center, scale(sub(v, self.center), mu)) for v in base_ring]
                )
            if self._valid_support(model, rings, others):
                self.rings = rings
                break
        else:
            raise TwistError("could not fit twist support between punctures")
        # ring t rotates by shift s_t vertex indices (half turn = K/2)
        self.shifts = [self.sign * (N_BANDS - t) for t in range(N_BANDS + 1)]
        self._check_triangles()
        self._boundary_segments = self._collect_boundaries()

    def _valid_support(self, model, rings, others) -> bool:
        inner, outer = rings[0], rings[-1]
        for p in (model.punctures[self.index - 1], model.punctures[self.index]):
            if winding_number(inner, p) == 0 or _on_polygon(p, inner):
                return False
        for p in others:
            if winding_number(outer, p) != 0 or _on_polygon(p, outer):
                return False
        if isinstance(model, DiskModel):
            for v in outer:
                if not model.contains(v):
                    return False
        return True

    def _band_triangles(self, t: int):
        """Source triangles of band t as vertex-index triples
        ((ring, idx), ...)."""
        tris = []
        for j in range(K_RING):
            j1 = (j + 1) % K_RING
            tris.append((("in", j), ("in", j1), ("out", j1)))
            tris.append((("in", j), ("out", j1), ("out", j)))
        return tris

    def _vertex(self, t: int, tag, j: int, image: bool) -> Point:
        ring = t if tag == "in" else t + 1
        if image:
            j = (j + self.shifts[ring]) % K_RING
        return self.rings[ring][j % K_RING]

    def _check_triangles(self) -> None:
        for t in range(N_BANDS):
            for tri in self._band_triangles(t):
                src = [self._vertex(t, tag, j, False) for tag, j in tri]
                img = [self._vertex(t, tag, j, True) for tag, j in tri]
                s1 = orient(*src)
                s2 = orient(*img)
                if s1 == 0 or s2 == 0 or s1 != s2:
                    raise TwistError("degenerate band triangle in twist chart")

    def _collect_boundaries(self):
        segs = []
        for ring in self.rings:
            for j in range(K_RING):
                segs.append((ring[j], ring[(j + 1) % K_RING]))
        for t in range(N_BANDS):
            for j in range(K_RING):
                j1 = (j + 1) % K_RING
                segs.append((self.rings[t][j], self.rings[t + 1][j]))
                segs.append((self.rings[t][j], self.rings[t + 1][j1]))
        return segs

    # -- evaluation ---------------------------------------------------------

    def apply_point(self, p: Point) -> Point:
        inside0 = winding_number(self.rings[0], p) != 0 or _on_polygon(p, self.rings[0])
        if inside0:
            return sub(scale(self.center, 2), p)
        outside = winding_number(self.rings[-1], p) == 0 and not _on_polygon(
            p, self.rings[-1]
        )
        if outside:
            return p
        for t in range(N_BANDS):
            for tri in self._band_triangles(t):
                src = [self._vertex(t, tag, j, False) for tag, j in tri]
                bary = _barycentric(p, src)
                if bary is None:
                    continue
                img = [self._vertex(t, tag, j, True) for tag, j in tri]
                return (
                    bary[0] * img[0][0] + bary[1] * img[1][0] + bary[2] * img[2][0],
                    bary[0] * img[0][1] + bary[1] * img[1][1] + bary[2] * img[2][1],
                )
        raise TwistError("point fell through the twist chart")

    def apply_polyline(self, pts: list[Point], closed: bool) -> list[Point]:
        out = []
        m = len(pts) if closed else len(pts) - 1
        for i in range(m):
            a, b = pts[i], pts[(i + 1) % len(pts)]
            params = {Q(0), Q(1)}
            for c, d in self._boundary_segments:
                if max(c[0], d[0]) < min(a[0], b[0]) or min(c[0], d[0]) > max(a[0], b[0]):
                    continue
                if max(c[1], d[1]) < min(a[1], b[1]) or min(c[1], d[1]) > max(a[1], b[1]):
                    continue
                hit = seg_intersect(a, b, c, d)
                if hit is None:
                    continue
                if hit[0] == "point":
                    params.add(hit[2])
                else:
                    params.update((hit[1], hit[2]))
            for t in sorted(params):
                if t == 1:
                    continue
                out.append(self.apply_point(lerp(a, b, t)))
        if not closed:
            out.append(self.apply_point(pts[-1]))
        return out

    def permutation(self, n: int) -> tuple:
        perm = list(range(n))
        perm[self.index - 1], perm[self.index] = perm[self.index], perm[self.index - 1]
        return tuple(perm)


def _on_polygon(p: Point, poly) -> bool:
    m = len(poly)
    from .geometry import on_segment

    return any(on_segment(p, poly[i], poly[(i + 1) % m]) for i in range(m))


def _barycentric(p: Point, tri):
    a, b, c = tri
    d = cross(sub(b, a), sub(c, a))
    if d == 0:
        return None
    l1 = cross(sub(p, a), sub(c, a)) / d
    l2 = cross(sub(b, a), sub(p, a)) / d
    l0 = 1 - l1 - l2
    if l0 < 0 or l1 < 0 or l2 < 0:
        return None
    return (l0, l1, l2)


# ---------------------------------------------------------------------------
# Model-level API
# ---------------------------------------------------------------------------

def half_twist(index: int, model, sign: int = 1) -> PLMap:
    """The half-twist generator exchanging punctures index, index+1
    (1-based), cached per model."""
    cache = model.__dict__.setdefault("_twist_cache", {})
    key = (index, sign)
    if key not in cache:
        cache[key] = PLMap(model, index, sign)
    return cache[key]


def _as_letters(h) -> tuple:
    if isinstance(h, PLMap):
        return ((h.index, h.sign),)
    if isinstance(h, BraidWord):
        return h.letters
    raise TwistError(f"cannot interpret {h!r} as a mapping class")


def apply_to_points(h, pts: list[Point], model, closed: bool) -> list[Point]:
    out = list(pts)
    for index, sign in _as_letters(h):
        out = half_twist(index, model, sign).apply_polyline(out, closed)
    return out


def apply(h, curve: PolyCurve, model) -> PolyCurve:
    """Image of a curve under a PL map or braid word; exact, simple, and
    puncture-avoiding by construction (validated anyway)."""
    surface = model.sphere_model() if isinstance(model, DiskModel) else model
    pts = apply_to_points(h, list(curve.vertices), model, closed=True)
    return validate_curve(pts, surface)


def puncture_permutation(h, model) -> tuple:
    """Induced permutation of the finite punctures (infinity is fixed)."""
    n = len(model.punctures)
    perm = tuple(range(n))
    for index, sign in _as_letters(h):
        step = half_twist(index, model, sign).permutation(n)
        perm = tuple(step[p] for p in perm)
    return perm
