"""Finite metric spaces, covers with multiplicity bounds, and Lipschitz bumps.

The classical substrate: validated distance matrices, covers colored so
that same-color members stay separated, and the distance-bump partitions
of unity that the cutting procedure consumes.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT_TOL, Tolerances
from .exceptions import DimensionMismatch, EmptyBox, MetricValidationError, NotACover

__all__ = [
    "MetricSpace",
    "Cover",
    "BumpFamily",
    "Violation",
    "find_violations",
    "validate_metric",
    "lipschitz_const",
    "r_multiplicity",
    "grid_space",
    "grid_cover",
    "bump_partition",
]


@dataclass(frozen=True)
class Violation:
    """One failed metric axiom with the offending points."""

    kind: str  # "nonzero_diagonal" | "asymmetry" | "negative" | "duplicate" | "triangle"
    points: tuple[int, ...]
    detail: str = ""

    def __str__(self):
        return f"{self.kind}{self.points} {self.detail}".rstrip()


@dataclass(frozen=True)
class MetricSpace:
    """Finite point set with a validated distance matrix."""

    dist: np.ndarray
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        d = np.asarray(self.dist, dtype=float)
        object.__setattr__(self, "dist", d)
        if not self.labels:
            object.__setattr__(self, "labels", tuple(str(i) for i in range(d.shape[0])))
        if len(self.labels) != d.shape[0]:
            raise DimensionMismatch("label count does not match distance matrix size")

    @property
    def n(self) -> int:
        return self.dist.shape[0]

    @property
    def scale(self) -> float:
        return float(self.dist.max()) if self.dist.size else 0.0

    def set_distance(self, a, b) -> float:
        """min distance between two point subsets (inf if either is empty)."""
        a = np.asarray(sorted(a), dtype=int)
        b = np.asarray(sorted(b), dtype=int)
        if a.size == 0 or b.size == 0:
            return float("inf")
        return float(self.dist[np.ix_(a, b)].min())

    def set_diameter(self, pts) -> float:
        pts = np.asarray(sorted(pts), dtype=int)
        if pts.size == 0:
            return 0.0
        return float(self.dist[np.ix_(pts, pts)].max())

    def ball(self, x: int, radius: float) -> np.ndarray:
        """Indices of the closed ball around point x."""
        return np.flatnonzero(self.dist[x] <= radius)


def find_violations(dist, tol: Tolerances = DEFAULT_TOL) -> list[Violation]:
    """Every metric axiom failure in a candidate distance matrix."""
    d = np.asarray(dist, dtype=float)
    if d.ndim != 2 or d.shape[0] != d.shape[1]:
        raise DimensionMismatch(f"distance matrix must be square, got shape {d.shape}")
    n = d.shape[0]
    scale = float(np.max(np.abs(d))) if d.size else 0.0
    out: list[Violation] = []
    for i in range(n):
        if d[i, i] != 0.0:
            out.append(Violation("nonzero_diagonal", (i,), f"d={d[i, i]:g}"))
    for i in range(n):
        for j in range(i + 1, n):
            if d[i, j] != d[j, i]:
                out.append(Violation("asymmetry", (i, j), f"{d[i, j]:g} vs {d[j, i]:g}"))
            if d[i, j] < 0:
                out.append(Violation("negative", (i, j), f"d={d[i, j]:g}"))
            elif d[i, j] == 0.0:
                out.append(Violation("duplicate", (i, j), "distinct points at distance 0"))
    slack = tol.triangle * scale
    for i, j, k in itertools.permutations(range(n), 3):
        if i < k and d[i, k] > d[i, j] + d[j, k] + slack:
            out.append(
                Violation("triangle", (i, j, k), f"d({i},{k})={d[i, k]:g} > {d[i, j] + d[j, k]:g}")
            )
    return out


def validate_metric(dist, labels=(), tol: Tolerances = DEFAULT_TOL) -> MetricSpace:
    """Validated MetricSpace, or MetricValidationError carrying all violations."""
    violations = find_violations(dist, tol)
    if violations:
        raise MetricValidationError(violations)
    return MetricSpace(np.asarray(dist, dtype=float), tuple(labels))


def lipschitz_const(f, space: MetricSpace) -> float:
    """max over x != y of |f(x) - f(y)| / d(x, y)."""
    v = np.asarray(f, dtype=float)
    if v.shape != (space.n,):
        raise DimensionMismatch(f"function has shape {v.shape}, space has {space.n} points")
    if space.n < 2:
        return 0.0
    diff = np.abs(v[:, None] - v[None, :])
    iu = np.triu_indices(space.n, k=1)
    return float(np.max(diff[iu] / space.dist[iu]))


@dataclass(frozen=True)
class Cover:
    """Point subsets covering a space, colored so same-color sets stay apart.

    ``separation`` is the scale R the coloring was built for: distinct
    same-color members must be more than R apart.
    """

    sets: tuple[tuple[int, ...], ...]
    colors: tuple[int, ...]
    diam_bound: float
    separation: float

    def __post_init__(self):
        object.__setattr__(self, "sets", tuple(tuple(int(i) for i in s) for s in self.sets))
        object.__setattr__(self, "colors", tuple(int(c) for c in self.colors))
        if len(self.sets) != len(self.colors):
            raise NotACover("one color per cover set required")

    @property
    def n_colors(self) -> int:
        return max(self.colors) + 1 if self.colors else 0

    def color_class(self, color: int) -> list[tuple[int, ...]]:
        return [s for s, c in zip(self.sets, self.colors) if c == color]

    def check(self, space: MetricSpace) -> None:
        """Verify covering, diameter bound, and same-color separation exhaustively."""
        covered = set()
        for s in self.sets:
            if not s:
                raise NotACover("empty cover set")
            if min(s) < 0 or max(s) >= space.n:
                raise NotACover(f"cover set {s} references points outside the space")
            covered.update(s)
            if space.set_diameter(s) > self.diam_bound:
                raise NotACover(f"set {s} has diameter {space.set_diameter(s):g} > {self.diam_bound:g}")
        if covered != set(range(space.n)):
            missing = sorted(set(range(space.n)) - covered)
            raise NotACover(f"points not covered: {missing[:10]}")
        for color in range(self.n_colors):
            members = self.color_class(color)
            for a, b in itertools.combinations(members, 2):
                if space.set_distance(a, b) <= self.separation:
                    raise NotACover(
                        f"color {color} sets {a} and {b} at distance "
                        f"{space.set_distance(a, b):g} <= separation {self.separation:g}"
                    )


def r_multiplicity(cover: Cover, space: MetricSpace, radius: float) -> int:
    """max over points x of #{U in cover : closed B_radius(x) meets U}."""
    cover.check(space)
    best = 0
    for x in range(space.n):
        ball = set(space.ball(x, radius).tolist())
        hits = sum(1 for s in cover.sets if ball.intersection(s))
        best = max(best, hits)
    return best


def _lattice_points(bounds) -> np.ndarray:
    bounds = [(int(lo), int(hi)) for lo, hi in bounds]
    if not bounds or any(hi < lo for lo, hi in bounds):
        raise EmptyBox(f"box {bounds} contains no lattice points")
    axes = [np.arange(lo, hi + 1) for lo, hi in bounds]
    grid = np.meshgrid(*axes, indexing="ij")
    return np.stack([g.ravel() for g in grid], axis=1)


def grid_space(bounds) -> MetricSpace:
    """All lattice points of a box in Z^d with the l1 metric.

    Point order is lexicographic in the coordinates; `grid_cover` indexes
    into the same order.
    """
    pts = _lattice_points(bounds)
    dist = np.abs(pts[:, None, :] - pts[None, :, :]).sum(axis=2).astype(float)
    labels = tuple(",".join(str(c) for c in p) for p in pts)
    return MetricSpace(dist, labels)


def grid_cover(bounds, radius: float) -> Cover:
    """Blocks of side 2*ceil(R) per axis with alternating per-axis 2-coloring.

    Same-color classes are more than R apart and the R-multiplicity is at
    most 2^d; the diameter bound is recomputed exactly for the l1 metric.
    """
    if radius <= 0:
        raise ValueError("cover radius must be positive")
    pts = _lattice_points(bounds)
    d = pts.shape[1]
    side = 2 * int(np.ceil(radius))
    lows = np.array([lo for lo, _ in bounds])
    block = (pts - lows) // side  # per-axis block index
    keys = [tuple(row) for row in block]
    groups: dict[tuple, list[int]] = {}
    for idx, key in enumerate(keys):
        groups.setdefault(key, []).append(idx)
    sets = []
    colors = []
    for key in sorted(groups):
        sets.append(tuple(groups[key]))
        parity = tuple(b % 2 for b in key)
        colors.append(sum(p << i for i, p in enumerate(parity)))
    # exact diameters under l1
    diam = 0.0
    for s in sets:
        span = pts[list(s)]
        diam = max(diam, float(np.sum(span.max(axis=0) - span.min(axis=0))))
    # compact color indices (small boxes may not use all 2^d parities)
    used = sorted(set(colors))
    remap = {c: i for i, c in enumerate(used)}
    colors = [remap[c] for c in colors]
    return Cover(tuple(sets), tuple(colors), diam, float(radius))


@dataclass(frozen=True)
class BumpFamily:
    """Distance bumps over a cover: raw 4/R-Lipschitz bumps and their
    normalization to an exact partition of unity.

    ``raw[j]`` is 1 on cover set j, vanishes outside the closed R/4
    neighborhood, and is 4/R-Lipschitz.  ``normalized[j] = raw[j] / sum``
    sums to 1 exactly; normalization can inflate Lipschitz constants, so
    the measured constants of both families are recorded.
    """

    raw: np.ndarray          # (n_sets, n_points)
    normalized: np.ndarray   # (n_sets, n_points)
    supports: tuple[tuple[int, ...], ...]
    lip_bound: float         # 4/R, satisfied by every raw bump
    raw_lipschitz: tuple[float, ...] = field(default=())
    normalized_lipschitz: tuple[float, ...] = field(default=())


def bump_partition(space: MetricSpace, cover: Cover, radius: float,
                   tol: Tolerances = DEFAULT_TOL) -> BumpFamily:
    """Raw bumps e_j(x) = clamp(1 - (4/R) d(x, U_j), 0, 1) plus the
    normalized partition of unity, with measured Lipschitz constants."""
    cover.check(space)
    if radius <= 0:
        raise ValueError("bump radius must be positive")
    raw = np.zeros((len(cover.sets), space.n))
    supports = []
    for j, s in enumerate(cover.sets):
        d_to_set = space.dist[:, list(s)].min(axis=1)
        raw[j] = np.clip(1.0 - (4.0 / radius) * d_to_set, 0.0, 1.0)
        supports.append(tuple(np.flatnonzero(raw[j] > 0.0).tolist()))
    total = raw.sum(axis=0)
    if np.any(total <= 0.0):
        raise NotACover("bump sum vanishes at a point, cover does not cover")
    normalized = raw / total
    raw_lip = tuple(lipschitz_const(raw[j], space) for j in range(raw.shape[0]))
    norm_lip = tuple(lipschitz_const(normalized[j], space) for j in range(raw.shape[0]))
    return BumpFamily(raw, normalized, tuple(supports), 4.0 / radius, raw_lip, norm_lip)
