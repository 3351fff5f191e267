"""Exact lattice geometry for primitive triangulations in vertical strips.

Everything in this module is integer or rational arithmetic; no floats.  The
brute-force counter is the reference oracle that the dynamic-programming
counter and the series identities are validated against, so it is written for
obvious correctness rather than speed.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from fractions import Fraction
from itertools import combinations
from math import gcd

Point = tuple[int, int]
Triangle = tuple[Point, Point, Point]


class GeometryError(ValueError):
    """Invalid geometric input."""


class AreaCapExceeded(GeometryError):
    """Polygon too large for brute-force enumeration."""


def doubled_area(p: Point, q: Point, r: Point) -> int:
    """Twice the signed area of triangle (p, q, r); positive when counterclockwise."""
    return (q[0] - p[0]) * (r[1] - p[1]) - (r[0] - p[0]) * (q[1] - p[1])


def _sign(v: int) -> int:
    return (v > 0) - (v < 0)


def _on_segment(p: Point, a: Point, b: Point) -> bool:
    """p lies on the closed segment [a, b]."""
    if doubled_area(a, b, p) != 0:
        return False
    return (min(a[0], b[0]) <= p[0] <= max(a[0], b[0])
            and min(a[1], b[1]) <= p[1] <= max(a[1], b[1]))


def segments_cross_properly(a: Point, b: Point, c: Point, d: Point) -> bool:
    """[a,b] and [c,d] intersect in a point interior to both segments."""
    d1 = _sign(doubled_area(c, d, a))
    d2 = _sign(doubled_area(c, d, b))
    d3 = _sign(doubled_area(a, b, c))
    d4 = _sign(doubled_area(a, b, d))
    return d1 * d2 < 0 and d3 * d4 < 0


def segments_touch(a: Point, b: Point, c: Point, d: Point) -> bool:
    """Any intersection at all, including endpoints and collinear overlap."""
    if segments_cross_properly(a, b, c, d):
        return True
    return (any(_on_segment(p, c, d) for p in (a, b))
            or any(_on_segment(p, a, b) for p in (c, d)))


def polygon_doubled_area(verts: tuple[Point, ...]) -> int:
    total = 0
    n = len(verts)
    for i in range(n):
        x0, y0 = verts[i]
        x1, y1 = verts[(i + 1) % n]
        total += x0 * y1 - x1 * y0
    return total


def _point_in_polygon_scaled(px: int, py: int, den: int, verts: tuple[Point, ...]) -> bool:
    """Closed-region membership of the rational point (px/den, py/den), exact.

    The polygon has integer vertices; they are scaled by den so that all
    comparisons stay integral.
    """
    n = len(verts)
    sv = [(vx * den, vy * den) for vx, vy in verts]
    p = (px, py)
    for i in range(n):
        a, b = sv[i], sv[(i + 1) % n]
        if _on_segment(p, a, b):
            return True
    inside = False
    for i in range(n):
        (ax, ay), (bx, by) = sv[i], sv[(i + 1) % n]
        if (ay > py) != (by > py):
            # compare px against the edge's x at height py without division
            lhs = (px - ax) * (by - ay)
            rhs = (bx - ax) * (py - ay)
            if (lhs < rhs) if by > ay else (lhs > rhs):
                inside = not inside
    return inside


def _point_strictly_in_triangle_scaled(px: int, py: int, den: int, tri: Triangle) -> bool:
    a, b, c = ((v[0] * den, v[1] * den) for v in tri)
    p = (px, py)
    s1 = _sign(doubled_area(a, b, p))
    s2 = _sign(doubled_area(b, c, p))
    s3 = _sign(doubled_area(c, a, p))
    return s1 == s2 == s3 != 0


@dataclass(frozen=True)
class LatticePolygon:
    """Simple lattice polygon, stored counterclockwise."""

    vertices: tuple[Point, ...]

    def __post_init__(self):
        verts = tuple((int(x), int(y)) for x, y in self.vertices)
        if len(verts) < 3:
            raise GeometryError("polygon needs at least 3 vertices")
        for i, v in enumerate(verts):
            if v == verts[(i + 1) % len(verts)]:
                raise GeometryError("consecutive vertices coincide")
        if polygon_doubled_area(verts) < 0:
            verts = tuple(reversed(verts))
        if polygon_doubled_area(verts) <= 0:
            raise GeometryError("polygon has nonpositive area")
        object.__setattr__(self, "vertices", verts)
        self._check_simple()

    def _check_simple(self):
        v = self.vertices
        n = len(v)
        edges = [(v[i], v[(i + 1) % n]) for i in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                a, b = edges[i]
                c, d = edges[j]
                if j == i + 1:
                    # shared vertex is b == c; a fold-back puts the far end
                    # of either edge on the other edge
                    if (_on_segment(d, a, b) and d != a and d != b) or \
                            (_on_segment(a, c, d) and a != c and a != d):
                        raise GeometryError("polygon folds back on itself")
                    continue
                if i == 0 and j == n - 1:
                    # shared vertex is a == d
                    if (_on_segment(c, a, b) and c != a and c != b) or \
                            (_on_segment(b, c, d) and b != c and b != d):
                        raise GeometryError("polygon folds back on itself")
                    continue
                if segments_touch(a, b, c, d):
                    raise GeometryError("polygon edges intersect")

    @property
    def doubled_area(self) -> int:
        return polygon_doubled_area(self.vertices)

    def contains(self, x, y) -> bool:
        """Closed-region membership for a rational point."""
        fx, fy = Fraction(x), Fraction(y)
        den = fx.denominator * fy.denominator // gcd(fx.denominator, fy.denominator)
        return _point_in_polygon_scaled(int(fx * den), int(fy * den), den, self.vertices)

    def lattice_points(self) -> list[Point]:
        xs = [v[0] for v in self.vertices]
        ys = [v[1] for v in self.vertices]
        out = []
        for x in range(min(xs), max(xs) + 1):
            for y in range(min(ys), max(ys) + 1):
                if _point_in_polygon_scaled(x, y, 1, self.vertices):
                    out.append((x, y))
        return out


def rectangle(m: int, n: int) -> LatticePolygon:
    if m < 1 or n < 1:
        raise GeometryError("rectangle needs m, n >= 1")
    return LatticePolygon(((0, 0), (m, 0), (m, n), (0, n)))


def _dedup_cycle(verts):
    out = []
    for v in verts:
        if not out or v != out[-1]:
            out.append(v)
    if len(out) > 1 and out[0] == out[-1]:
        out.pop()
    return tuple(out)


def trapezoid_height2(a: int, c: int) -> LatticePolygon:
    """Trapezoid of height 2 with bottom side a and top side c (triangle if one is 0)."""
    if a < 0 or c < 0 or a + c == 0:
        raise GeometryError("need a, c >= 0 and a + c > 0")
    verts = _dedup_cycle(((0, 0), (a, 0), (1 + c, 2), (1, 2)))
    return LatticePolygon(verts)


def trapezoid_height3(a: int, d: int) -> LatticePolygon:
    """Trapezoid of height 3 with bottom side a and top side d (triangle if one is 0)."""
    if a < 0 or d < 0 or a + d == 0:
        raise GeometryError("need a, d >= 0 and a + d > 0")
    verts = _dedup_cycle(((0, 0), (a, 0), (1 + d, 3), (1, 3)))
    return LatticePolygon(verts)


# ---------------------------------------------------------------------------
# strip shapes (region between two piecewise-linear lattice graphs)
# ---------------------------------------------------------------------------

def merge_collinear(points) -> tuple[Point, ...]:
    out = []
    for p in points:
        while len(out) >= 2 and doubled_area(out[-2], out[-1], p) == 0:
            out.pop()
        out.append(p)
    return tuple(out)


def _pl_value(bps: tuple[Point, ...], x) -> Fraction:
    """Value of the piecewise-linear function through bps at x (exact)."""
    fx = Fraction(x)
    if not bps[0][0] <= fx <= bps[-1][0]:
        raise GeometryError(f"x={x} outside [{bps[0][0]}, {bps[-1][0]}]")
    for (x0, y0), (x1, y1) in zip(bps, bps[1:]):
        if fx <= x1:
            return Fraction(y0) + Fraction(y1 - y0, x1 - x0) * (fx - x0)
    return Fraction(bps[-1][1])


def _pl_ge(upper: tuple[Point, ...], lower: tuple[Point, ...]) -> bool:
    """upper >= lower pointwise; both are linear between their own breakpoints,
    so it is enough to compare at the merged breakpoint set."""
    xs = sorted({p[0] for p in upper} | {p[0] for p in lower})
    return all(_pl_value(upper, x) >= _pl_value(lower, x) for x in xs)


def profile_lattice_points(bps: tuple[Point, ...]) -> tuple[Point, ...]:
    """All lattice points on the graph, in x order.  Consecutive output points
    are consecutive lattice points on one segment, hence primitive steps."""
    pts = [bps[0]]
    for (x0, y0), (x1, y1) in zip(bps, bps[1:]):
        g = gcd(x1 - x0, abs(y1 - y0))
        sx, sy = (x1 - x0) // g, (y1 - y0) // g
        for i in range(1, g + 1):
            pts.append((x0 + i * sx, y0 + i * sy))
    return tuple(pts)


@dataclass(frozen=True)
class ShapeProfile:
    """Region of a width-m strip between a fixed floor and a ceiling, both
    piecewise-linear graphs with lattice breakpoints."""

    width: int
    ceiling: tuple[Point, ...]
    floor: tuple[Point, ...] = None  # default: flat floor at height 0

    def __post_init__(self):
        m = int(self.width)
        if m < 1:
            raise GeometryError("strip width must be >= 1")
        floor = self.floor if self.floor is not None else ((0, 0), (m, 0))
        ceiling = merge_collinear(tuple((int(x), int(y)) for x, y in self.ceiling))
        floor = merge_collinear(tuple((int(x), int(y)) for x, y in floor))
        for bps in (ceiling, floor):
            if bps[0][0] != 0 or bps[-1][0] != m:
                raise GeometryError("breakpoints must span x = 0 .. width")
            if any(b[0] <= a[0] for a, b in zip(bps, bps[1:])):
                raise GeometryError("breakpoint x must be strictly increasing")
        if not _pl_ge(ceiling, floor):
            raise GeometryError("ceiling must dominate the floor")
        object.__setattr__(self, "width", m)
        object.__setattr__(self, "ceiling", ceiling)
        object.__setattr__(self, "floor", floor)

    @property
    def doubled_area(self) -> int:
        total = Fraction(0)
        xs = sorted({p[0] for p in self.ceiling} | {p[0] for p in self.floor})
        for x0, x1 in zip(xs, xs[1:]):
            h0 = _pl_value(self.ceiling, x0) - _pl_value(self.floor, x0)
            h1 = _pl_value(self.ceiling, x1) - _pl_value(self.floor, x1)
            total += (h0 + h1) * (x1 - x0)
        if total.denominator != 1:
            raise GeometryError("non-integral doubled area")
        return int(total)

    @property
    def is_degenerate(self) -> bool:
        return self.doubled_area == 0

    def ceiling_value(self, x) -> Fraction:
        return _pl_value(self.ceiling, x)

    def floor_value(self, x) -> Fraction:
        return _pl_value(self.floor, x)

    def has_flat_zero_floor(self) -> bool:
        return self.floor == ((0, 0), (self.width, 0))


def unit_strip_shape(m: int, n: int) -> ShapeProfile:
    """The m x n rectangle as a strip shape over the flat floor."""
    return ShapeProfile(m, ((0, n), (m, n)))


class TileKind(IntEnum):
    PLAIN = 1      # triangle without vertical sides
    BOUNDARY = 2   # triangle with its vertical side on a strip wall
    DOUBLE = 3     # two triangles glued along an interior vertical side


@dataclass(frozen=True)
class PrimitiveTile:
    kind: TileKind
    triangles: tuple[Triangle, ...]
    span: tuple[int, int]
    upper_chain: tuple[Point, ...]
    lower_chain: tuple[Point, ...]


def _seg_above_floor(p: Point, q: Point, floor: tuple[Point, ...] | None) -> bool:
    if floor is None:
        return p[1] >= 0 and q[1] >= 0
    seg = (p, q)
    xs = sorted({p[0], q[0]} | {x for x, _ in floor if p[0] <= x <= q[0]})
    return all(_pl_value(seg, x) >= _pl_value(floor, x) for x in xs)


def _tiles_raw(pts: tuple[Point, ...], m: int, floor: tuple[Point, ...] | None):
    """All maximal primitive tiles under the ceiling through pts.

    pts must be the full lattice-point list of the ceiling graph.  floor=None
    means the flat floor y == 0.  Returns (lo, hi, lower_chain, kind,
    triangles) tuples sorted by span.

    A tile is maximal when its whole upper boundary lies on the ceiling, which
    pins every vertex except a single lower one, so candidates are found by a
    local scan: an apex below one primitive ceiling edge, the chord below two
    adjacent ceiling edges, or the unit vertical drop below a ceiling lattice
    point at integer x.
    """
    tiles = []
    npts = len(pts)
    for i in range(npts - 1):
        p, q = pts[i], pts[i + 1]
        px, py = p
        qx, qy = q
        dx, dy = qx - px, qy - py
        for rx in range(0, m + 1):
            t = dy * (rx - px) - 1
            if t % dx:
                continue
            r = (rx, py + t // dx)
            if rx == px:
                if px == 0 and _seg_above_floor(r, q, floor):
                    tiles.append((0, qx, (r, q), TileKind.BOUNDARY, ((r, p, q),)))
            elif rx == qx:
                if qx == m and _seg_above_floor(p, r, floor):
                    tiles.append((px, m, (p, r), TileKind.BOUNDARY, ((p, r, q),)))
            elif px < rx < qx:
                if _seg_above_floor(p, r, floor) and _seg_above_floor(r, q, floor):
                    tiles.append((px, qx, (p, r, q), TileKind.PLAIN, ((p, r, q),)))
    for i in range(npts - 2):
        p, s, q = pts[i], pts[i + 1], pts[i + 2]
        if doubled_area(p, q, s) == 1 and _seg_above_floor(p, q, floor):
            tiles.append((p[0], q[0], (p, q), TileKind.PLAIN, ((p, q, s),)))
    for i in range(1, npts - 1):
        u, v, w = pts[i - 1], pts[i], pts[i + 1]
        if v[0] - u[0] == 1 and w[0] - v[0] == 1 and 1 <= v[0] <= m - 1:
            b = (v[0], v[1] - 1)
            if _seg_above_floor(u, b, floor) and _seg_above_floor(b, w, floor):
                tiles.append((u[0], w[0], (u, b, w), TileKind.DOUBLE,
                              ((u, b, v), (b, w, v))))
    tiles.sort(key=lambda t: (t[0], t[1], t[2]))
    return tiles


def enumerate_maximal_tiles(shape: ShapeProfile) -> list[PrimitiveTile]:
    """Every primitive tile inside the shape whose upper boundary lies on the
    shape's upper boundary.  Empty exactly when the shape is degenerate."""
    pts = profile_lattice_points(shape.ceiling)
    floor = None if shape.has_flat_zero_floor() else shape.floor
    raw = _tiles_raw(pts, shape.width, floor)
    out = []
    for lo, hi, chain, kind, tris in raw:
        upper = tuple(p for p in pts if lo <= p[0] <= hi)
        if kind == TileKind.PLAIN and len(chain) == 2:
            upper = (chain[0], tris[0][2], chain[1])
        out.append(PrimitiveTile(kind, tris, (lo, hi), upper, chain))
    return out


def remove_tiles(shape: ShapeProfile, tiles) -> ShapeProfile:
    """Shape left after removing tiles with pairwise disjoint spans."""
    tiles = sorted(tiles, key=lambda t: t.span)
    for a, b in zip(tiles, tiles[1:]):
        if b.span[0] < a.span[1]:
            raise GeometryError("tiles overlap")
    pts = list(profile_lattice_points(shape.ceiling))
    index = {p[0]: i for i, p in enumerate(pts)}
    out = []
    cursor = 0
    for t in tiles:
        i_lo, i_hi = index[t.span[0]], index[t.span[1]]
        out.extend(pts[cursor:i_lo])
        chain = t.lower_chain
        out.extend(chain[1:] if out and out[-1] == chain[0] else chain)
        cursor = i_hi + 1
    out.extend(pts[cursor:])
    return ShapeProfile(shape.width, merge_collinear(out), shape.floor)


# ---------------------------------------------------------------------------
# brute-force oracle
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Triangulation:
    polygon: LatticePolygon
    triangles: tuple[Triangle, ...]

    def edges(self) -> set[tuple[Point, Point]]:
        out = set()
        for tri in self.triangles:
            for i in range(3):
                a, b = tri[i], tri[(i + 1) % 3]
                out.add((a, b) if a <= b else (b, a))
        return out

    def validate(self) -> None:
        area = 0
        for tri in self.triangles:
            da = doubled_area(*tri)
            if abs(da) != 1:
                raise GeometryError("non-primitive triangle")
            area += abs(da)
        if area != self.polygon.doubled_area:
            raise GeometryError("triangle areas do not fill the polygon")
        for t1, t2 in combinations(self.triangles, 2):
            if _triangles_overlap(t1, t2):
                raise GeometryError("triangles overlap")
        # shared boundary must be a full common edge: with primitive lattice
        # triangles a partial edge overlap would need an interior lattice point
        for tri in self.triangles:
            for v in tri:
                for other in self.triangles:
                    if other is tri:
                        continue
                    for i in range(3):
                        a, b = other[i], other[(i + 1) % 3]
                        if v != a and v != b and _on_segment(v, a, b):
                            raise GeometryError("vertex interior to another edge")


def _triangles_overlap(t1: Triangle, t2: Triangle) -> bool:
    """Open interiors intersect.  Sharing vertices or full edges is fine."""
    if set(t1) == set(t2):
        return True
    for i in range(3):
        a, b = t1[i], t1[(i + 1) % 3]
        for j in range(3):
            c, d = t2[j], t2[(j + 1) % 3]
            if segments_cross_properly(a, b, c, d):
                return True
    return (any(_point_strictly_in_triangle_scaled(v[0], v[1], 1, t2) for v in t1)
            or any(_point_strictly_in_triangle_scaled(v[0], v[1], 1, t1) for v in t2))


def _triangle_in_polygon(tri: Triangle, poly: LatticePolygon) -> bool:
    verts = poly.vertices
    n = len(verts)
    for v in tri:
        if not _point_in_polygon_scaled(v[0], v[1], 1, verts):
            return False
    for i in range(n):
        a, b = verts[i], verts[(i + 1) % n]
        for j in range(3):
            c, d = tri[j], tri[(j + 1) % 3]
            if segments_cross_properly(a, b, c, d):
                return False
    for v in verts:
        if _point_strictly_in_triangle_scaled(v[0], v[1], 1, tri):
            return False
    # centroid and edge midpoints, exact with scaled coordinates
    cx = sum(v[0] for v in tri)
    cy = sum(v[1] for v in tri)
    if not _point_in_polygon_scaled(cx, cy, 3, verts):
        return False
    for j in range(3):
        c, d = tri[j], tri[(j + 1) % 3]
        if not _point_in_polygon_scaled(c[0] + d[0], c[1] + d[1], 2, verts):
            return False
    return True


class _BruteForcer:
    """Backtracking over primitive triangles with a canonical witness point.

    At each step the lowest-indexed still-usable candidate supplies a witness
    point interior to the uncovered region; every completion must cover the
    witness with exactly one candidate, so branching over those candidates
    counts each triangulation once.
    """

    def __init__(self, polygon: LatticePolygon, cap: int):
        self.polygon = polygon
        area = polygon.doubled_area
        if area > cap:
            raise AreaCapExceeded(
                f"polygon doubled area {area} exceeds enumeration cap {cap}")
        self.target = area
        pts = polygon.lattice_points()
        cands = []
        for a, b, c in combinations(pts, 3):
            da = doubled_area(a, b, c)
            if abs(da) != 1:
                continue
            tri = (a, b, c) if da > 0 else (a, c, b)
            if _triangle_in_polygon(tri, polygon):
                cands.append(tri)
        cands.sort()
        self.cands = cands
        n = len(cands)
        self.compat = [0] * n
        for i in range(n):
            for j in range(i + 1, n):
                if not _triangles_overlap(cands[i], cands[j]):
                    self.compat[i] |= 1 << j
                    self.compat[j] |= 1 << i
        lines = set()
        for tri in cands:
            for k in range(3):
                a, b = tri[k], tri[(k + 1) % 3]
                la = b[1] - a[1]
                lb = a[0] - b[0]
                lc = la * a[0] + lb * a[1]
                g = gcd(gcd(abs(la), abs(lb)), abs(lc)) or 1
                la, lb, lc = la // g, lb // g, lc // g
                if la < 0 or (la == 0 and lb < 0):
                    la, lb, lc = -la, -lb, -lc
                lines.add((la, lb, lc))
        self.cover = [0] * n
        for i, tri in enumerate(cands):
            wx, wy, den = self._witness(tri, lines)
            mask = 0
            for j, other in enumerate(cands):
                if _point_strictly_in_triangle_scaled(wx, wy, den, other):
                    mask |= 1 << j
            assert mask >> i & 1
            self.cover[i] = mask

    @staticmethod
    def _witness(tri: Triangle, lines) -> tuple[int, int, int]:
        """Interior rational point of tri avoiding every candidate edge line."""
        a, b, c = tri
        k = 2
        while True:
            den = k * k
            wx = (den - k - 1) * a[0] + k * b[0] + c[0]
            wy = (den - k - 1) * a[1] + k * b[1] + c[1]
            if all(la * wx + lb * wy != lc * den for la, lb, lc in lines):
                return wx, wy, den
            k += 1

    def count(self) -> int:
        n = len(self.cands)
        if self.target == 0:
            return 1
        full = (1 << n) - 1
        compat, cover = self.compat, self.cover

        def rec(avail: int, remaining: int) -> int:
            if remaining == 0:
                return 1
            if not avail:
                return 0
            i = (avail & -avail).bit_length() - 1
            total = 0
            choices = cover[i] & avail
            while choices:
                low = choices & -choices
                j = low.bit_length() - 1
                choices ^= low
                total += rec(avail & compat[j], remaining - 1)
            return total

        return rec(full, self.target)

    def enumerate(self):
        n = len(self.cands)
        if self.target == 0:
            yield ()
            return
        chosen = []

        def rec(avail: int, remaining: int):
            if remaining == 0:
                yield tuple(chosen)
                return
            if not avail:
                return
            i = (avail & -avail).bit_length() - 1
            choices = self.cover[i] & avail
            while choices:
                low = choices & -choices
                j = low.bit_length() - 1
                choices ^= low
                chosen.append(self.cands[j])
                yield from rec(avail & self.compat[j], remaining - 1)
                chosen.pop()

        yield from rec((1 << n) - 1, self.target)


def brute_force_count(polygon, cap: int = 16) -> int:
    """Number of primitive triangulations of a small lattice polygon, by
    exhaustive backtracking.  Refuses polygons with doubled area above cap."""
    if not isinstance(polygon, LatticePolygon):
        polygon = LatticePolygon(tuple(polygon))
    return _BruteForcer(polygon, cap).count()


def enumerate_triangulations(polygon, cap: int = 16):
    """Yield every primitive triangulation (as a Triangulation)."""
    if not isinstance(polygon, LatticePolygon):
        polygon = LatticePolygon(tuple(polygon))
    bf = _BruteForcer(polygon, cap)
    for tris in bf.enumerate():
        yield Triangulation(polygon, tris)
