"""Guiding-curve geometry: arc-length evaluation for every representation.

All curves live in viewer coordinates: the viewer stands at the origin,
up is +y and forward is -z.  Each curve is parameterized by signed arc
length with its anchor (s = 0) at the curve's viewer-facing point, so the
layout can slide time points along the curve by pure arc-length offsets.
Parabolic and spherical curves are placed by true arc length via numeric
inversion; the others have closed forms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .design import (
    ConcaveParabola,
    ConvexArc,
    ConvexParabola,
    FlatLine,
    Helicoid,
    RepresentationSpec,
    Spherical,
)
from .errors import OutOfDomain

Vec3 = tuple[float, float, float]

_DOMAIN_TOL = 1e-9
_INVERT_TOL = 1e-12


@dataclass(frozen=True)
class CurvePoint:
    position: Vec3
    tangent: Vec3
    up: Vec3


def _stable_up(tangent: Vec3) -> Vec3:
    # keep a vertical reading axis; fall back when the tangent is vertical
    ty = tangent[1]
    ux, uy, uz = -ty * tangent[0], 1.0 - ty * tangent[1], -ty * tangent[2]
    norm = math.sqrt(ux * ux + uy * uy + uz * uz)
    if norm < 1e-9:
        return (0.0, 0.0, -1.0)
    return (ux / norm, uy / norm, uz / norm)


class GuidingCurve:
    """Base class; subclasses implement :meth:`eval` over signed arc length."""

    def eval(self, s: float) -> CurvePoint:
        raise NotImplementedError


class LineCurve(GuidingCurve):
    def __init__(self, spec: FlatLine):
        self.direction = spec.direction

    def eval(self, s: float) -> CurvePoint:
        d = self.direction
        return CurvePoint((s * d[0], s * d[1], s * d[2]), d, _stable_up(d))


class ArcCurve(GuidingCurve):
    """Horizontal circle about ``center``; anchor faces forward (-z)."""

    def __init__(self, center: Vec3, radius: float):
        self.center = center
        self.radius = radius

    def eval(self, s: float) -> CurvePoint:
        theta = s / self.radius
        sin_t, cos_t = math.sin(theta), math.cos(theta)
        cx, cy, cz = self.center
        position = (cx + self.radius * sin_t, cy, cz - self.radius * cos_t)
        tangent = (cos_t, 0.0, sin_t)
        return CurvePoint(position, tangent, (0.0, 1.0, 0.0))


class ParabolaCurve(GuidingCurve):
    """Horizontal-plane parabola z = -d0 + sign*a*x^2, placed by arc length.

    sign +1 bends around the viewer (convex), -1 sends the far ends deeper
    into the scene (concave).  The closed-form arc length is inverted with
    Newton iterations to 1e-12 m.
    """

    def __init__(self, coefficient: float, apex_distance: float, sign: float):
        self.a = coefficient
        self.d0 = apex_distance
        self.sign = sign

    def _arclen(self, x: float) -> float:
        a = self.a
        q = math.sqrt(1.0 + 4.0 * a * a * x * x)
        return 0.5 * x * q + math.asinh(2.0 * a * x) / (4.0 * a)

    def _speed(self, x: float) -> float:
        return math.sqrt(1.0 + 4.0 * self.a * self.a * x * x)

    def x_at(self, s: float) -> float:
        """Lateral coordinate whose arc length from the apex equals ``s``."""
        if s == 0.0:
            return 0.0
        target = abs(s)
        x = target  # arc length >= |x|, so start at the chord bound
        for _ in range(60):
            err = self._arclen(x) - target
            if abs(err) < _INVERT_TOL:
                break
            x -= err / self._speed(x)
            if x < 0.0:
                x = 0.0
        return math.copysign(x, s)

    def eval(self, s: float) -> CurvePoint:
        x = self.x_at(s)
        z = -self.d0 + self.sign * self.a * x * x
        speed = self._speed(x)
        tangent = (1.0 / speed, 0.0, self.sign * 2.0 * self.a * x / speed)
        return CurvePoint((x, 0.0, z), tangent, (0.0, 1.0, 0.0))


class HelixCurve(GuidingCurve):
    """Helix coiling a vertical cylinder; anchor at height 0 facing forward."""

    def __init__(self, spec: Helicoid, radius: float | None = None):
        self.axis = spec.axis_point
        self.radius = spec.radius if radius is None else radius
        self.pitch = spec.pitch
        self.loop_length = math.sqrt((2.0 * math.pi * self.radius) ** 2 + self.pitch**2)

    def eval(self, s: float) -> CurvePoint:
        frac = s / self.loop_length
        theta = 2.0 * math.pi * frac
        sin_t, cos_t = math.sin(theta), math.cos(theta)
        ax, ay, az = self.axis
        position = (
            ax + self.radius * sin_t,
            ay + self.pitch * frac,
            az - self.radius * cos_t,
        )
        k = 2.0 * math.pi * self.radius / self.loop_length
        tangent = (k * cos_t, self.pitch / self.loop_length, k * sin_t)
        return CurvePoint(position, tangent, (0.0, 1.0, 0.0))


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(5)


@lru_cache(maxsize=32)
def _sphere_length_table(radius: float, loops: int) -> tuple[np.ndarray, np.ndarray]:
    """Cumulative arc length of the pole-to-pole spiral at 4096 colatitudes.

    Per-interval 5-point Gauss-Legendre keeps the table accurate far below
    the 1e-9 inversion tolerance.
    """
    segments = 4096
    edges = np.linspace(0.0, math.pi, segments + 1)
    nodes, weights = _GL_NODES, _GL_WEIGHTS
    mid = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * (edges[1:] - edges[:-1])
    ts = mid[:, None] + half[:, None] * nodes[None, :]
    speeds = radius * np.sqrt(1.0 + 4.0 * loops * loops * np.sin(ts) ** 2)
    per_segment = (speeds * weights[None, :]).sum(axis=1) * half
    cumulative = np.concatenate(([0.0], np.cumsum(per_segment)))
    return edges, cumulative


class SphereSpiralCurve(GuidingCurve):
    """Spiral from pole to pole on a sphere, traversed at unit speed.

    Colatitude runs 0..pi while the azimuth completes ``loops`` full turns;
    the mapping from arc length to colatitude is inverted numerically.
    """

    def __init__(self, spec: Spherical, radius: float | None = None):
        self.center = spec.center
        self.radius = spec.radius if radius is None else radius
        self.loops = spec.loops
        edges, cumulative = _sphere_length_table(self.radius, self.loops)
        self._edges = edges
        self._cumulative = cumulative
        self.total_length = float(cumulative[-1])

    def speed(self, t: float) -> float:
        """Norm of the position derivative w.r.t. colatitude."""
        return self.radius * math.sqrt(1.0 + 4.0 * self.loops**2 * math.sin(t) ** 2)

    def param_at(self, s: float) -> float:
        """Colatitude whose arc length from the north pole equals ``s``."""
        if s < -_DOMAIN_TOL or s > self.total_length + _DOMAIN_TOL:
            raise OutOfDomain(
                f"arc length {s} outside spherical spiral domain [0, {self.total_length}]"
            )
        s = min(max(s, 0.0), self.total_length)
        idx = int(np.searchsorted(self._cumulative, s, side="right")) - 1
        idx = min(max(idx, 0), len(self._edges) - 2)
        t = self._edges[idx]
        base = self._cumulative[idx]
        nodes, weights = _GL_NODES, _GL_WEIGHTS
        for _ in range(60):
            # residual arc length on [edge, t], 5-point GL on the subinterval
            half = 0.5 * (t - self._edges[idx])
            mid = 0.5 * (t + self._edges[idx])
            ts = mid + half * nodes
            seg = float(np.sum(weights * self.radius * np.sqrt(
                1.0 + 4.0 * self.loops**2 * np.sin(ts) ** 2)) * half)
            err = base + seg - s
            if abs(err) < _INVERT_TOL:
                break
            t -= err / self.speed(t)
            t = min(max(t, self._edges[idx]), self._edges[idx + 1])
        return float(t)

    def eval(self, s: float) -> CurvePoint:
        t = self.param_at(s)
        psi = 2.0 * self.loops * t
        sin_t, cos_t = math.sin(t), math.cos(t)
        sin_p, cos_p = math.sin(psi), math.cos(psi)
        cx, cy, cz = self.center
        r = self.radius
        position = (cx + r * sin_t * sin_p, cy + r * cos_t, cz - r * sin_t * cos_p)
        # d(position)/dt, normalized: unit tangent w.r.t. arc length
        dx = r * (cos_t * sin_p + 2.0 * self.loops * sin_t * cos_p)
        dy = -r * sin_t
        dz = r * (-cos_t * cos_p + 2.0 * self.loops * sin_t * sin_p)
        norm = self.speed(t)
        tangent = (dx / norm, dy / norm, dz / norm)
        return CurvePoint(position, tangent, (0.0, 1.0, 0.0))


def make_curve(rep: RepresentationSpec, radius_offset: float = 0.0) -> GuidingCurve:
    """Build the evaluable curve for a representation.

    ``radius_offset`` grows the curve's radial parameter (radius for arcs,
    helicoids and spheres, apex distance for parabolas) and is how
    concentric-cylinder supports push branches onto outer shells; a flat
    line has no radial parameter and ignores it.
    """
    if isinstance(rep, FlatLine):
        return LineCurve(rep)
    if isinstance(rep, ConvexArc):
        return ArcCurve(rep.center, rep.radius + radius_offset)
    if isinstance(rep, ConvexParabola):
        return ParabolaCurve(rep.coefficient, rep.apex_distance + radius_offset, +1.0)
    if isinstance(rep, ConcaveParabola):
        return ParabolaCurve(rep.coefficient, rep.apex_distance + radius_offset, -1.0)
    if isinstance(rep, Helicoid):
        return HelixCurve(rep, radius=rep.radius + radius_offset)
    if isinstance(rep, Spherical):
        return SphereSpiralCurve(rep, radius=rep.radius + radius_offset)
    raise TypeError(f"unknown representation {type(rep).__name__}")


def eval_curve(rep: RepresentationSpec, s: float) -> CurvePoint:
    """Evaluate a representation's guiding curve at arc length ``s``."""
    return make_curve(rep).eval(s)
