"""Color assignment for annotation fields.

Numerical fields map through a perceptually uniform dark-blue-to-yellow
ramp sampled at 33 fixed control points and interpolated linearly;
categorical fields cycle through a small qualitative palette.  Snapshots
without a bound value render in neutral gray.
"""

from __future__ import annotations

from dataclasses import dataclass

Color = tuple[float, float, float]

NEUTRAL_GRAY: Color = (0.5, 0.5, 0.5)

# 33 control points of the sequential ramp at t = i/32, i = 0..32.
VIRIDIS_POINTS: tuple[Color, ...] = (
    (0.267004, 0.004874, 0.329415),
    (0.277018, 0.050344, 0.375715),
    (0.282327, 0.094955, 0.417331),
    (0.282884, 0.13592, 0.453427),
    (0.278826, 0.17549, 0.483397),
    (0.270595, 0.214069, 0.507052),
    (0.258965, 0.251537, 0.524736),
    (0.244972, 0.287675, 0.53726),
    (0.229739, 0.322361, 0.545706),
    (0.214298, 0.355619, 0.551184),
    (0.19943, 0.387607, 0.554642),
    (0.185556, 0.41857, 0.556753),
    (0.172719, 0.448791, 0.557885),
    (0.160665, 0.47854, 0.558115),
    (0.149039, 0.508051, 0.55725),
    (0.13777, 0.537492, 0.554906),
    (0.127568, 0.566949, 0.550556),
    (0.120565, 0.596422, 0.543611),
    (0.120638, 0.625828, 0.533488),
    (0.132268, 0.655014, 0.519661),
    (0.157851, 0.683765, 0.501686),
    (0.196571, 0.711827, 0.479221),
    (0.24607, 0.73891, 0.452024),
    (0.304148, 0.764704, 0.419943),
    (0.369214, 0.788888, 0.382914),
    (0.440137, 0.811138, 0.340967),
    (0.515992, 0.831158, 0.294279),
    (0.595839, 0.848717, 0.243329),
    (0.678489, 0.863742, 0.189503),
    (0.762373, 0.876424, 0.137064),
    (0.845561, 0.887322, 0.099702),
    (0.926106, 0.89733, 0.104071),
    (0.993248, 0.906157, 0.143936),
)

# Distinct hues for categorical fields, reused cyclically past ten values.
QUALITATIVE: tuple[Color, ...] = (
    (0.121569, 0.466667, 0.705882),
    (1.0, 0.498039, 0.054902),
    (0.172549, 0.627451, 0.172549),
    (0.839216, 0.152941, 0.156863),
    (0.580392, 0.403922, 0.741176),
    (0.54902, 0.337255, 0.294118),
    (0.890196, 0.466667, 0.760784),
    (0.498039, 0.498039, 0.498039),
    (0.737255, 0.741176, 0.133333),
    (0.090196, 0.745098, 0.811765),
)


@dataclass(frozen=True)
class ColorMap:
    """Piecewise-linear color ramp bound to a value domain.

    Control points are (t, rgb) with t sorted and spanning [0, 1];
    ``lookup`` clamps t, and a degenerate domain (min = max) sends every
    value to the ramp's midpoint.
    """

    name: str
    control_points: tuple[tuple[float, Color], ...]
    domain: tuple[float, float]

    def __post_init__(self) -> None:
        ts = [t for t, _ in self.control_points]
        if len(ts) < 2 or ts != sorted(ts) or ts[0] != 0.0 or ts[-1] != 1.0:
            raise ValueError("control points must be sorted over t and cover [0, 1]")

    def lookup(self, t: float) -> Color:
        t = min(max(t, 0.0), 1.0)
        points = self.control_points
        for i in range(len(points) - 1):
            t0, c0 = points[i]
            t1, c1 = points[i + 1]
            if t <= t1:
                if t1 == t0:
                    return c1
                frac = (t - t0) / (t1 - t0)
                return (
                    c0[0] + frac * (c1[0] - c0[0]),
                    c0[1] + frac * (c1[1] - c0[1]),
                    c0[2] + frac * (c1[2] - c0[2]),
                )
        return points[-1][1]

    def color_for(self, value: float) -> Color:
        low, high = self.domain
        if high <= low:
            return self.lookup(0.5)
        return self.lookup((value - low) / (high - low))


def viridis(domain: tuple[float, float]) -> ColorMap:
    points = tuple(
        (i / (len(VIRIDIS_POINTS) - 1), rgb) for i, rgb in enumerate(VIRIDIS_POINTS)
    )
    return ColorMap(name="viridis", control_points=points, domain=domain)


def categorical_color(value: str, ordering: tuple[str, ...]) -> Color:
    """Palette entry for ``value`` given the sorted distinct values."""
    idx = ordering.index(value)
    return QUALITATIVE[idx % len(QUALITATIVE)]
