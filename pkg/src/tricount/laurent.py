"""Sparse integer Laurent polynomials on one or two circle variables.

Used for exact x-power-series with Laurent-polynomial coefficients: the
kernel reciprocal, its residue extraction, and the solution series of the
width-3 boundary equation are all computed in this ring before any floating
point enters.
"""

from __future__ import annotations

from dataclasses import dataclass

# one variable: dict[power -> int]; two variables (u, t): dict[(pu, pt) -> int]


def l1_add(a: dict, b: dict) -> dict:
    out = dict(a)
    for k, v in b.items():
        w = out.get(k, 0) + v
        if w:
            out[k] = w
        else:
            out.pop(k, None)
    return out


def l1_scale(a: dict, s: int) -> dict:
    if s == 0:
        return {}
    return {k: s * v for k, v in a.items()}


def l1_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for ka, va in a.items():
        for kb, vb in b.items():
            k = ka + kb
            w = out.get(k, 0) + va * vb
            if w:
                out[k] = w
            else:
                out.pop(k, None)
    return out


def l1_shift(a: dict, d: int) -> dict:
    return {k + d: v for k, v in a.items()}


def l1_eval(a: dict, t):
    return sum(v * t ** k for k, v in a.items())


def l2_add(a: dict, b: dict) -> dict:
    out = dict(a)
    for k, v in b.items():
        w = out.get(k, 0) + v
        if w:
            out[k] = w
        else:
            out.pop(k, None)
    return out


def l2_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for (ua, ta), va in a.items():
        for (ub, tb), vb in b.items():
            k = (ua + ub, ta + tb)
            w = out.get(k, 0) + va * vb
            if w:
                out[k] = w
            else:
                out.pop(k, None)
    return out


def l2_scale(a: dict, s: int) -> dict:
    if s == 0:
        return {}
    return {k: s * v for k, v in a.items()}


def l2_shift(a: dict, du: int, dt: int) -> dict:
    return {(u + du, t + dt): v for (u, t), v in a.items()}


def l2_coef_u(a: dict, pu: int) -> dict:
    """The t-Laurent polynomial sitting at u^pu."""
    return {t: v for (u, t), v in a.items() if u == pu}


def l2_by_u(a: dict) -> dict:
    """Group a two-variable polynomial by u power: dict[pu -> t-poly]."""
    out: dict = {}
    for (u, t), v in a.items():
        out.setdefault(u, {})[t] = v
    return out


@dataclass(frozen=True)
class LaurentSeries:
    """Truncated power series in x whose coefficients are integer Laurent
    polynomials in the circle variable t."""

    coefficients: tuple  # tuple of dict[int -> int]

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    def __getitem__(self, k: int) -> dict:
        return self.coefficients[k]

    def eval(self, x, t):
        """Evaluate with any numeric type supporting * and ** (complex,
        mpmath, gmpy2)."""
        total = 0
        xp = 1
        for coeff in self.coefficients:
            if coeff:
                total += xp * l1_eval(coeff, t)
            xp = xp * x
        return total
