"""Exact rectangle triangulation counts.

The counter removes maximal tiles from under the ceiling of a strip shape and
combines the resulting smaller shapes by inclusion-exclusion, memoizing counts
per canonical ceiling.  Arithmetic is either arbitrary-precision integer or
modular with Chinese-remainder reconstruction.
"""

from __future__ import annotations

import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from .geometry import (
    ShapeProfile,
    _tiles_raw,
    enumerate_maximal_tiles,
    merge_collinear,
    profile_lattice_points,
    remove_tiles,
)


class CountingError(ValueError):
    pass


class ModulusTooSmall(CountingError):
    """Product of the primes does not dominate the count's upper bound."""


class StateBudgetExceeded(CountingError):
    """The profile table grew past the configured limit."""


# ---------------------------------------------------------------------------
# profile DP
# ---------------------------------------------------------------------------

class _StripDP:
    """f*(shape) for ceilings over the flat floor of a width-m strip with
    heights in [0, n].  Profiles are keyed by a packed breakpoint integer."""

    def __init__(self, width: int, height: int, modulus: int | None = None,
                 max_states: int | None = None):
        self.m = width
        self.n = height
        self.mod = modulus
        self.max_states = max_states
        self.memo: dict[int, int] = {}
        self.layer_histogram: dict[int, int] = {}
        self.xbits = max(4, width.bit_length())
        self.ybits = max(1, height.bit_length() + 1)

    def _pack(self, bps) -> int:
        shift = self.xbits + self.ybits
        yb = self.ybits
        key = 1
        for x, y in bps:
            key = (key << shift) | (x << yb) | y
        return key

    def count_rectangle(self) -> int:
        if self.n == 0:
            return 1
        sys.setrecursionlimit(max(sys.getrecursionlimit(), 40 * self.m * self.n + 1000))
        return self._fstar(((0, self.n), (self.m, self.n)))

    def count_ceiling(self, bps) -> int:
        bps = merge_collinear(tuple(bps))
        if any(not 0 <= y <= self.n for _, y in bps):
            raise CountingError(
                f"ceiling heights must lie in [0, {self.n}] for this table")
        sys.setrecursionlimit(max(sys.getrecursionlimit(), 40 * self.m * self.n + 1000))
        return self._fstar(bps)

    def _fstar(self, bps) -> int:
        key = self._pack(bps)
        memo = self.memo
        val = memo.get(key)
        if val is not None:
            return val
        m = self.m
        mod = self.mod
        pts = profile_lattice_points(bps)
        area = 0
        for (x0, y0), (x1, y1) in zip(bps, bps[1:]):
            area += (x1 - x0) * (y0 + y1)
        if area == 0:
            memo[key] = 1
            return 1
        if self.max_states is not None and len(memo) >= self.max_states:
            raise StateBudgetExceeded(
                f"profile table hit {self.max_states} states while working on "
                f"doubled-area layer {area}")
        tiles = _tiles_raw(pts, m, None)
        assert tiles, "positive-area shape must own at least one maximal tile"
        index = {p[0]: i for i, p in enumerate(pts)}
        total = 0
        ntiles = len(tiles)
        selection: list[tuple] = []

        def splice() -> tuple:
            # the lower chain replaces the ceiling over the tile's whole span;
            # boundary tiles end strictly below the old ceiling at the wall
            out = []
            cursor = 0
            for lo, hi, chain, _, _ in selection:
                i_lo, i_hi = index[lo], index[hi]
                out.extend(pts[cursor:i_lo])
                if out and out[-1] == chain[0]:
                    out.extend(chain[1:])
                else:
                    out.extend(chain)
                cursor = i_hi + 1
            out.extend(pts[cursor:])
            return merge_collinear(out)

        def sweep(start: int, bound: int):
            nonlocal total
            for j in range(start, ntiles):
                t = tiles[j]
                if t[0] < bound:
                    continue
                selection.append(t)
                child = self._fstar(splice())
                total += child if len(selection) & 1 else -child
                sweep(j + 1, t[1])
                selection.pop()

        sweep(0, 0)
        if mod is not None:
            total %= mod
        elif total < 1:
            raise AssertionError("triangulation count must be positive")
        memo[key] = total
        self.layer_histogram[area] = self.layer_histogram.get(area, 0) + 1
        return total


@dataclass
class CountTable:
    """Memoized f* values of one DP run: packed-profile key -> count, with a
    per-area-layer histogram of the states visited."""

    width: int
    height: int
    modulus: int | None
    entries: dict[int, int]
    layer_histogram: dict[int, int]

    def __len__(self) -> int:
        return len(self.entries)


def profile_count_table(m: int, n: int, modulus: int | None = None) -> CountTable:
    """Run the rectangle DP and expose its memo table for diagnostics."""
    dp = _StripDP(m, n, modulus=modulus)
    dp.count_rectangle()
    return CountTable(width=m, height=n, modulus=modulus,
                      entries=dict(dp.memo),
                      layer_histogram=dict(dp.layer_histogram))


def subshape_expansion(shape: ShapeProfile) -> list[tuple[int, ShapeProfile]]:
    """Signed inclusion-exclusion terms for f*(shape): one term per nonempty
    set of span-disjoint maximal tiles, with sign (-1)^(k-1) for k tiles."""
    tiles = enumerate_maximal_tiles(shape)
    out: list[tuple[int, ShapeProfile]] = []
    selection = []

    def sweep(start: int, bound: int):
        for j in range(start, len(tiles)):
            t = tiles[j]
            if t.span[0] < bound:
                continue
            selection.append(t)
            sign = 1 if len(selection) & 1 else -1
            out.append((sign, remove_tiles(shape, selection)))
            sweep(j + 1, t.span[1])
            selection.pop()

    sweep(0, 0)
    return out


def count_shape(shape: ShapeProfile, max_states: int | None = None) -> int:
    """f*(shape) for a flat-zero-floor shape, via the profile DP."""
    if not shape.has_flat_zero_floor():
        raise CountingError("the DP counter handles flat-zero floors only")
    height = max(y for _, y in shape.ceiling)
    dp = _StripDP(shape.width, max(height, 1), max_states=max_states)
    return dp.count_ceiling(shape.ceiling)


# ---------------------------------------------------------------------------
# primes / CRT
# ---------------------------------------------------------------------------

def _is_prime_u64(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    r = (d & -d).bit_length() - 1
    d >>= r
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def default_primes(count: int) -> list[int]:
    """Deterministic word-sized primes, descending from 2^31 - 1."""
    out = []
    p = (1 << 31) - 1
    while len(out) < count:
        if _is_prime_u64(p):
            out.append(p)
        p -= 2
    return out


@dataclass(frozen=True)
class ResidueVector:
    """A count known only through residues modulo pairwise-distinct primes."""

    primes: tuple[int, ...]
    residues: tuple[int, ...]

    def __post_init__(self):
        if len(self.primes) != len(self.residues):
            raise CountingError("primes and residues differ in length")
        if len(set(self.primes)) != len(self.primes):
            raise CountingError("duplicate primes")
        for p, r in zip(self.primes, self.residues):
            if not 0 <= r < p:
                raise CountingError(f"residue {r} out of range for modulus {p}")

    def reconstruct(self, bound: int | None = None) -> int:
        return crt_reconstruct(self.residues, self.primes, bound=bound)


def crt_reconstruct(residues, primes, bound: int | None = None) -> int:
    """The unique value in [0, prod primes) matching every residue."""
    primes = list(primes)
    residues = list(residues)
    if len(primes) != len(residues):
        raise CountingError("primes and residues differ in length")
    if len(set(primes)) != len(primes):
        raise CountingError("duplicate primes")
    product = math.prod(primes)
    if bound is not None and product <= bound:
        raise ModulusTooSmall(
            f"prime product {product} does not exceed the required bound {bound}; "
            f"supply more primes")
    acc = 0
    for p, r in zip(primes, residues):
        rest = product // p
        acc = (acc + r * rest * pow(rest, -1, p)) % product
    return acc


# ---------------------------------------------------------------------------
# public counting API
# ---------------------------------------------------------------------------

def rectangle_count_bound(m: int, n: int) -> int:
    """Coarse upper bound 2^(3mn) on f(m, n) (one bit per non-half-integral
    lattice point), used to size the modular arithmetic."""
    return 1 << (3 * m * n)


def count_rectangle(m: int, n: int, mode: str = "bigint", primes=None,
                    threads: int = 1, max_states: int | None = None,
                    cache: "CountCache | None" = None,
                    orientation: str = "auto") -> int:
    """Exact number of primitive triangulations of the m x n rectangle.

    mode is "bigint" for one arbitrary-precision pass or "modular" for one DP
    pass per prime followed by Chinese-remainder reconstruction.

    The profile table grows exponentially in the strip width but mildly in the
    height, so orientation="auto" runs the DP across the narrow side (the
    count is symmetric; the symmetry itself is exercised by tests that force
    orientation="literal", which keeps the strip width at m as given).
    """
    if m < 1 or n < 0:
        raise CountingError("need m >= 1 and n >= 0")
    if orientation not in ("auto", "literal"):
        raise CountingError(f"unknown orientation {orientation!r}")
    if cache is not None:
        hit = cache.lookup(m, n)
        if hit is not None:
            return hit
    wm, wn = (min(m, n), max(m, n)) if orientation == "auto" and n >= 1 else (m, n)
    if mode == "bigint":
        value = _StripDP(wm, wn, max_states=max_states).count_rectangle()
    elif mode == "modular":
        bound = rectangle_count_bound(m, n)
        if primes is None:
            need = max(3, (3 * m * n) // 31 + 1)
            primes = default_primes(need)
        primes = list(primes)
        if math.prod(primes) <= bound:
            raise ModulusTooSmall(
                f"prime product must exceed 2^(3mn) = 2^{3 * m * n}; "
                f"supply more primes")

        def one_pass(p: int) -> int:
            return _StripDP(wm, wn, modulus=p, max_states=max_states).count_rectangle() % p

        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                residues = list(pool.map(one_pass, primes))
        else:
            residues = [one_pass(p) for p in primes]
        value = ResidueVector(tuple(primes), tuple(residues)).reconstruct(bound=None)
        # the reconstruction is exact because the product dominates the bound
        assert value < math.prod(primes)
    else:
        raise CountingError(f"unknown mode {mode!r}")
    if cache is not None:
        cache.append(m, n, value)
    return value


def count_rectangle_residues(m: int, n: int, primes, threads: int = 1) -> ResidueVector:
    """Per-prime counts without reconstruction (one independent DP per prime)."""
    primes = list(primes)
    wm, wn = (min(m, n), max(m, n)) if n >= 1 else (m, n)

    def one_pass(p: int) -> int:
        return _StripDP(wm, wn, modulus=p).count_rectangle() % p

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            residues = list(pool.map(one_pass, primes))
    else:
        residues = [one_pass(p) for p in primes]
    return ResidueVector(tuple(primes), tuple(residues))


@dataclass(frozen=True)
class CapacityRecord:
    m: int
    n: int
    count: int
    capacity: float


def capacity(m: int, n: int, count: int | None = None) -> CapacityRecord:
    """Per-unit-area information content log2(f(m, n)) / (m n)."""
    if m < 1 or n < 1:
        raise CountingError("capacity needs m, n >= 1")
    if count is None:
        count = count_rectangle(m, n)
    return CapacityRecord(m, n, count, math.log2(count) / (m * n))


def convexity_check(m: int, n_max: int, counts: list[int] | None = None) -> list[bool]:
    """Log-convexity f(m,n-1) f(m,n+1) >= f(m,n)^2 for n = 1 .. n_max-1,
    with the empty-rectangle convention f(m,0) = 1."""
    if counts is None:
        counts = [count_rectangle(m, n) for n in range(n_max + 1)]
    if len(counts) < n_max + 1:
        raise CountingError("need counts for n = 0 .. n_max")
    return [counts[n - 1] * counts[n + 1] >= counts[n] ** 2 for n in range(1, n_max)]


def capacity_extrapolate(m: int, n: int, count_n: int | None = None,
                         count_n1: int | None = None) -> float:
    """Lower-bound extrapolation (n+1) c(m,n+1) - n c(m,n) for the strip
    constant, valid under the log-convexity conjecture."""
    c0 = capacity(m, n, count_n).capacity
    c1 = capacity(m, n + 1, count_n1).capacity
    return (n + 1) * c1 - n * c0


# ---------------------------------------------------------------------------
# persistent cache
# ---------------------------------------------------------------------------

CACHE_ENV_VAR = "TRICOUNT_CACHE_DIR"


class CountCache:
    """Line-oriented count cache: one `m<TAB>n<TAB>count` record per line."""

    def __init__(self, directory: str | os.PathLike):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)
        self.path = self.directory / "counts.tsv"

    def lookup(self, m: int, n: int) -> int | None:
        if not self.path.exists():
            return None
        hit = None
        with open(self.path, "r", encoding="ascii") as fh:
            for line in fh:
                parts = line.split()
                if len(parts) == 3 and parts[0] == str(m) and parts[1] == str(n):
                    hit = int(parts[2])
        return hit

    def append(self, m: int, n: int, count: int) -> None:
        if self.lookup(m, n) == count:
            return
        # a single short write is atomic enough for append-only records
        with open(self.path, "a", encoding="ascii") as fh:
            fh.write(f"{m}\t{n}\t{count}\n")
            fh.flush()
            os.fsync(fh.fileno())

    def records(self) -> list[tuple[int, int, int]]:
        if not self.path.exists():
            return []
        out = []
        with open(self.path, "r", encoding="ascii") as fh:
            for line in fh:
                parts = line.split()
                if len(parts) == 3:
                    out.append((int(parts[0]), int(parts[1]), int(parts[2])))
        return out


def cache_from_env() -> CountCache | None:
    directory = os.environ.get(CACHE_ENV_VAR)
    return CountCache(directory) if directory else None
