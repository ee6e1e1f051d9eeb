"""Minimal position of a pair of curves by explicit bigon removal.

This is the geometric oracle used for geometric intersection numbers
and as the independent cross-check of the normal-coordinate homotopy
engine. It operates on honest rational geometry throughout:

  1. one curve is put transverse to the other by an exact translation,
     small enough to be an isotopy of the punctured plane (checked, not
     assumed: the translation sweep must miss every puncture);
  2. while an empty bigon exists (two crossings adjacent along both
     curves whose disk contains no punctures), the arc of the moving
     curve is pushed across: it is replaced by a beveled rational offset
     of the other curve's arc on the far side of the bigon.

Every push is validated exactly (simplicity, punctures avoided, the
crossing count drops by exactly 2, transversality maintained) and is
retried with a smaller offset radius on failure; all the failure modes
of the construction vanish as the radius shrinks.

Two simple closed curves bound no empty bigon exactly when they realize
the geometric intersection number of their classes, so the loop ends in
minimal position.
"""

from __future__ import annotations

from dataclasses import dataclass

from gmpy2 import mpq

from .rationals import Q
from .geometry import (
    Point,
    add,
    candidate_pairs,
    clearance_radius,
    cross,
    dot,
    lerp,
    perp,
    polygon_area2,
    scale,
    seg_intersect,
    sub,
    winding_number,
)
from .geom import PolyCurve, CurveError, _walk_subpath, validate_curve
from .surface import SurfaceModel, unit_direction
from fractions import Fraction


class MinimalPositionError(RuntimeError):
    pass


@dataclass(frozen=True)
class Crossing:
    point: Point
    param_a: object
    param_b: object


def transverse_crossings(a: PolyCurve, b: PolyCurve) -> list[Crossing]:
    """All intersections, required to be clean transverse crossings:
    single points, interior to segments of both curves."""
    sa, sb = a.segments(), b.segments()
    out = []
    for i, j in candidate_pairs(sa, sb):
        hit = seg_intersect(*sa[i], *sb[j])
        if hit is None:
            continue
        if hit[0] != "point":
            raise MinimalPositionError("curves share a segment")
        _, p, t, u = hit
        if not (0 < t < 1 and 0 < u < 1):
            raise MinimalPositionError("intersection at a vertex")
        out.append(Crossing(p, i + t, j + u))
    return out


def is_transverse(a: PolyCurve, b: PolyCurve) -> bool:
    try:
        transverse_crossings(a, b)
        return True
    except MinimalPositionError:
        return False


def _translate(curve: PolyCurve, delta: Point) -> PolyCurve:
    return PolyCurve(tuple(add(v, delta) for v in curve.vertices))


def transverse_resolve(a: PolyCurve, b: PolyCurve, surface: SurfaceModel) -> PolyCurve:
    """An isotopic copy of a transverse to b.

    The copy is a translate of a; the translation is accepted only if
    the straight-line sweep of a misses every puncture (so the move is
    an isotopy of the punctured plane) and the result is transverse to b
    and still avoids the punctures.
    """
    if is_transverse(a, b):
        return a
    base = clearance_radius(
        a.segments() + b.segments(), list(surface.punctures), skip_touching=True
    )
    directions = [unit_direction(Fraction(k, 12)) for k in range(12)]
    for shrink in range(24):
        radius = base / (2 ** shrink)
        for d in directions:
            delta = scale(d, radius)
            moved = _translate(a, delta)
            if not _sweep_misses_punctures(a, delta, surface):
                continue
            if any(moved.contains_point_on_curve(p) for p in surface.punctures):
                continue
            if is_transverse(moved, b):
                return moved
    raise MinimalPositionError("could not find a transverse translate")


def _sweep_misses_punctures(a: PolyCurve, delta: Point, surface) -> bool:
    back = scale(delta, -1)
    for p in surface.punctures:
        q = add(p, back)
        for s, t in a.segments():
            if seg_intersect(p, q, s, t) is not None:
                return False
    return True


# ---------------------------------------------------------------------------
# Bigon detection
# ---------------------------------------------------------------------------

def _cyclic_successor(items, key):
    order = sorted(range(len(items)), key=key)
    succ = {}
    for r, idx in enumerate(order):
        succ[idx] = order[(r + 1) % len(order)]
    return succ


def find_empty_bigon(a: PolyCurve, b: PolyCurve, surface, crossings):
    """A pair of crossings adjacent along both curves whose disk is free
    of punctures, or None. Returns (i, j, alpha, beta, area2) where
    alpha runs x->y along a and beta runs x->y along b."""
    if len(crossings) < 2:
        return None
    succ_a = _cyclic_successor(crossings, key=lambda i: crossings[i].param_a)
    succ_b = _cyclic_successor(crossings, key=lambda i: crossings[i].param_b)
    pred_b = {v: k for k, v in succ_b.items()}
    candidates = []
    for i in range(len(crossings)):
        j = succ_a[i]
        if j == i:
            continue
        if succ_b[i] == j or pred_b[i] == j:
            candidates.append((crossings[i].param_a, i, j))
    candidates.sort(key=lambda c: c[0])
    for _, i, j in candidates:
        x, y = crossings[i], crossings[j]
        alpha = _walk_subpath(a.vertices, x.param_a, y.param_a)
        if succ_b[i] == j:
            beta = _walk_subpath(b.vertices, x.param_b, y.param_b)
        else:
            beta = list(reversed(_walk_subpath(b.vertices, y.param_b, x.param_b)))
        polygon = alpha[:-1] + list(reversed(beta))[:-1]
        if any(winding_number(polygon, p) != 0 for p in surface.punctures):
            continue
        return (i, j, alpha, beta, polygon_area2(polygon))
    return None


# ---------------------------------------------------------------------------
# The push
# ---------------------------------------------------------------------------

def _bevel_offset(path: list[Point], side: int, eps) -> list[Point]:
    """Offset polyline on the given side (+1 left, -1 right), beveled at
    vertices; vertices are displaced by roughly eps."""
    out = []
    for k in range(len(path) - 1):
        d = sub(path[k + 1], path[k])
        n = perp(d) if side > 0 else scale(perp(d), -1)
        m = max(abs(n[0]), abs(n[1]))
        off = scale(n, eps / m)
        p0, p1 = add(path[k], off), add(path[k + 1], off)
        if not out or out[-1] != p0:
            out.append(p0)
        out.append(p1)
    return out


def _stub_junction(a: PolyCurve, param, toward_prev: bool, x: Point, d_beta: Point, eps):
    """Point on the curve segment containing `param`, on the retained
    side of the crossing x, at unnormalized height 2*eps*gamma above the
    first/last beta piece (heights measured by cross(d_beta, . - x))."""
    m = len(a.vertices)
    seg_idx = int(param % m)
    v0 = a.vertices[seg_idx]
    v1 = a.vertices[(seg_idx + 1) % m]
    far = v0 if toward_prev else v1
    gamma = abs(cross(d_beta, perp(d_beta))) / max(abs(d_beta[0]), abs(d_beta[1]))
    target = 2 * eps * gamma
    g_far = cross(d_beta, sub(far, x))
    if g_far == 0:
        raise MinimalPositionError("degenerate stub")
    t = target / abs(g_far)
    if t >= 1:
        raise MinimalPositionError("stub too short for junction")
    return lerp(x, far, t)


def push_across(a: PolyCurve, b: PolyCurve, surface, crossings, bigon) -> PolyCurve:
    """Replace the a-arc of the bigon by an offset copy of the b-arc on
    the far side, removing exactly two crossings."""
    i, j, alpha, beta, area2 = bigon
    x, y = crossings[i], crossings[j]
    n_old = len(crossings)
    # tube side: the bigon disk sits left of the x->y polygon walk when
    # area2 > 0; the walk runs along beta in reverse, so relative to the
    # forward beta direction the disk is right when area2 > 0.
    tube_side = 1 if area2 > 0 else -1
    base = clearance_radius(
        a.segments() + b.segments(), list(surface.punctures), skip_touching=True
    )
    eps = base / 4
    for attempt in range(40):
        try:
            candidate = _attempt_push(a, x, y, beta, tube_side, eps)
        except (MinimalPositionError, CurveError, ZeroDivisionError):
            eps = eps / 4
            continue
        try:
            new_curve = validate_curve(candidate, surface)
            new_crossings = transverse_crossings(new_curve, b)
        except (CurveError, MinimalPositionError):
            eps = eps / 4
            continue
        if len(new_crossings) == n_old - 2:
            return new_curve
        eps = eps / 4
    raise MinimalPositionError("push failed to converge")


def _attempt_push(a: PolyCurve, x: Crossing, y: Crossing, beta, tube_side, eps):
    d_first = sub(beta[1], beta[0])
    d_last = sub(beta[-1], beta[-2])
    p_junction = _stub_junction(a, x.param_a, True, x.point, d_first, eps)
    q_junction = _stub_junction(a, y.param_a, False, y.point, d_last, eps)
    tube = _bevel_offset(beta, tube_side, eps)
    retained = _walk_subpath(a.vertices, y.param_a, x.param_a)
    # trim retained to the junction points: the ends of `retained` are
    # exactly y.point and x.point, interior to their segments.
    new_pts = [q_junction] + retained[1:-1] + [p_junction] + tube
    return new_pts


# ---------------------------------------------------------------------------
# Top-level oracle operations
# ---------------------------------------------------------------------------

def minimal_position(a: PolyCurve, b: PolyCurve, surface: SurfaceModel):
    """(a', n) with a' isotopic to a, transverse to b, bounding no empty
    bigon with b; n = |a' cap b| is the geometric intersection number."""
    moving = transverse_resolve(a, b, surface)
    while True:
        crossings = transverse_crossings(moving, b)
        bigon = find_empty_bigon(moving, b, surface, crossings)
        if bigon is None:
            return moving, len(crossings)
        moving = push_across(moving, b, surface, crossings, bigon)


def geometric_intersection_number(a: PolyCurve, b: PolyCurve, surface) -> int:
    """Minimal crossing count over the isotopy classes of a and b."""
    if a.vertices == b.vertices:
        return 0
    return minimal_position(a, b, surface)[1]


def oracle_homotopic(a: PolyCurve, b: PolyCurve, surface) -> bool:
    """Bigon-removal decision of homotopy, independent of the
    normal-coordinate engine: tighten the pair; homotopic simple closed
    curves are exactly the disjoint-izable nested pairs whose middle
    region contains no puncture."""
    if a.vertices == b.vertices:
        return True
    moved, count = minimal_position(a, b, surface)
    if count != 0:
        return False
    inside_a = {
        p
        for p in range(len(surface.punctures))
        if winding_number(moved.vertices, surface.punctures[p]) % 2
    }
    inside_b = {
        p
        for p in range(len(surface.punctures))
        if winding_number(b.vertices, surface.punctures[p]) % 2
    }
    nested = (
        winding_number(moved.vertices, b.vertices[0]) % 2 != 0
        or winding_number(b.vertices, moved.vertices[0]) % 2 != 0
    )
    if not nested:
        return False
    return len(inside_a ^ inside_b) == 0
