"""Closed forms and power series for narrow-strip triangulation counts.

The width-2 growth constant has an exact algebraic expression; everything
here keeps series coefficients as exact integers or rationals and only
evaluates to floating point at the very end.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath as mp


class SeriesError(ValueError):
    pass


@dataclass(frozen=True)
class PowerSeries:
    """Truncated power series with exact coefficients (index = power of x)."""

    coefficients: tuple

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    def __getitem__(self, k: int):
        return self.coefficients[k]

    def eval(self, x):
        acc = 0
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc


# ---------------------------------------------------------------------------
# three-index counts for width-2 profiles
# ---------------------------------------------------------------------------

_F_TABLE: dict[tuple[int, int, int], int] = {}


def f_abc(a: int, b: int, c: int) -> int:
    """Coefficient of x^a y^b z^c in 1/(1 - x - y - z + xz).

    Counts width-2 profile configurations by the additive recurrence
    f = f[a-1] + f[b-1] + f[c-1] - f[a-1,c-1]; indices below zero give 0.
    """
    if min(a, b, c) < 0:
        return 0
    if (a, b, c) == (0, 0, 0):
        return 1
    hit = _F_TABLE.get((a, b, c))
    if hit is not None:
        return hit
    # fill bottom-up to keep recursion depth flat
    for s in range(0, a + b + c + 1):
        for i in range(0, min(a, s) + 1):
            for j in range(0, min(b, s - i) + 1):
                k = s - i - j
                if k > c or (i, j, k) in _F_TABLE:
                    continue
                if (i, j, k) == (0, 0, 0):
                    _F_TABLE[(i, j, k)] = 1
                    continue
                val = (f_abc(i - 1, j, k) + f_abc(i, j - 1, k)
                       + f_abc(i, j, k - 1) - f_abc(i - 1, j, k - 1))
                _F_TABLE[(i, j, k)] = val
    return _F_TABLE[(a, b, c)]


def tri_gf_table(bound: int) -> dict[tuple[int, int, int], int]:
    """Dense table of f_abc for all indices up to bound."""
    out = {}
    for a in range(bound + 1):
        for b in range(bound + 1):
            for c in range(bound + 1):
                out[(a, b, c)] = f_abc(a, b, c)
    return out


# ---------------------------------------------------------------------------
# width-2 diagonal series and the exact growth constant
# ---------------------------------------------------------------------------

def G_closed(x, dps: int = 30):
    """Diagonal generating value 1/(4 sqrt(1-4x)) + 1/(4 sqrt(1+4x)) - 1/2.

    Defined for |x| < 1/4.
    """
    with mp.workdps(dps):
        xv = mp.mpf(x) if not isinstance(x, mp.mpf) else x
        if abs(xv) >= mp.mpf(1) / 4:
            raise SeriesError("closed form needs |x| < 1/4")
        return mp.mpf(1) / (4 * mp.sqrt(1 - 4 * xv)) \
            + mp.mpf(1) / (4 * mp.sqrt(1 + 4 * xv)) - mp.mpf(1) / 2


def G_series(order: int) -> PowerSeries:
    """Maclaurin coefficients of the diagonal: halved central binomials at
    even powers, zero elsewhere."""
    coeffs = []
    for k in range(order + 1):
        if k % 2:
            coeffs.append(0)
        elif k == 0:
            coeffs.append(0)
        else:
            central = math.comb(2 * k, k)
            assert central % 2 == 0
            coeffs.append(central // 2)
    return PowerSeries(tuple(coeffs))


def gstar_coeffs(order: int) -> PowerSeries:
    """Coefficients g*_n of the geometric resummation 1/(1 - G) on the
    diagonal, indexed by n (the power of x is 2n)."""
    g = [math.comb(4 * k, 2 * k) // 2 if k else 0 for k in range(order + 1)]
    out = [1]
    for n in range(1, order + 1):
        out.append(sum(g[k] * out[n - k] for k in range(1, n + 1)))
    return PowerSeries(tuple(out))


def alpha_c2(dps: int = 60):
    """The width-2 growth constant (611 + sqrt 73)/36 and its halved log2."""
    with mp.workdps(dps):
        alpha = (611 + mp.sqrt(73)) / 36
        c2 = mp.log(alpha, 2) / 2
        return alpha, c2


def growth_pole_polynomial() -> tuple[int, int, int]:
    """Coefficients (a, b, c) of a x^4 + b x^2 + c whose smallest positive
    root is the reciprocal square root of the width-2 constant."""
    return (5184, -611, 18)


# ---------------------------------------------------------------------------
# width-3 series plumbing
# ---------------------------------------------------------------------------

def series_reciprocal_of_one_minus(coeffs) -> tuple:
    """Coefficients of 1/(1 - H) given H with H[0] = 0, same truncation."""
    coeffs = list(coeffs)
    if not coeffs or coeffs[0] != 0:
        raise SeriesError("series must vanish at 0")
    out = [1]
    for n in range(1, len(coeffs)):
        out.append(sum(coeffs[k] * out[n - k] for k in range(1, n + 1)))
    return tuple(out)


def Hstar_from_H(h: PowerSeries | tuple | list) -> PowerSeries:
    """Resummation 1/(1 - H): counts with strip-spanning cuts restored."""
    coeffs = h.coefficients if isinstance(h, PowerSeries) else tuple(h)
    return PowerSeries(series_reciprocal_of_one_minus(coeffs))


# ---------------------------------------------------------------------------
# upper bound for counts of all (not necessarily primitive) triangulations
# ---------------------------------------------------------------------------

def binary_entropy(x: float) -> float:
    if x <= 0 or x >= 1:
        return 0.0
    return -x * math.log2(x) - (1 - x) * math.log2(1 - x)


LOG2_30 = math.log2(30)


def np_upper_bound(c: float, tol: float = 1e-13) -> tuple[float, float]:
    """Maximize min(3 h(x) + c, h(x) + x log2 30) over [0, 1].

    c is the exponent bound for primitive triangulations; the result bounds
    the exponent when edge removals are allowed.  Returns (bound, argmax).
    """
    if c < 0:
        raise SeriesError("need c >= 0")

    def branch_low(x):
        return 3 * binary_entropy(x) + c

    def branch_high(x):
        return binary_entropy(x) + x * LOG2_30

    def objective(x):
        return min(branch_low(x), branch_high(x))

    def diff(x):
        return branch_low(x) - branch_high(x)

    # the difference is concave, so one scan finds the descending crossing
    candidates = [1e-9, 0.5, 30.0 / 31.0, 1 - 1e-9]
    grid = [i / 4096 for i in range(1, 4096)]
    prev_x, prev_d = grid[0], diff(grid[0])
    for x in grid[1:]:
        d = diff(x)
        if prev_d > 0 >= d:
            lo, hi = prev_x, x
            for _ in range(200):
                mid = 0.5 * (lo + hi)
                if hi - lo < tol:
                    break
                if diff(mid) > 0:
                    lo = mid
                else:
                    hi = mid
            candidates.append(0.5 * (lo + hi))
        prev_x, prev_d = x, d
    best_x = max(candidates, key=objective)
    return objective(best_x), best_x
