"""Width-3 growth constant pipeline.

The boundary generating function of width-3 strips satisfies a second-kind
integral equation on the unit circle.  This module evaluates the quartic
kernel polynomial and its unit-disk roots, builds the circle-quadrature
discretization, solves the dense linear system at arbitrary precision, and
root-finds the growth constant.  Exact integer Laurent series for the same
objects provide independent low-order checks.

Hot paths run on gmpy2 (C-backed arbitrary precision); results are returned
as mpmath numbers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import gmpy2
import mpmath as mp
import numpy as np

from .laurent import (
    LaurentSeries,
    l1_add,
    l1_mul,
    l1_scale,
    l1_shift,
    l2_add,
    l2_by_u,
    l2_mul,
    l2_scale,
    l2_shift,
)


class FredholmError(ArithmeticError):
    pass


class RootCountError(FredholmError):
    """The quartic does not have exactly two roots inside the unit disk."""


class KernelSingular(FredholmError):
    """Kernel denominator vanished inside the certified domain."""


class BracketError(FredholmError):
    """No sign change over the root bracket."""


# bracket endpoints: continued-fraction convergents enclosing the root
X0_MINUS = Fraction(16, 33)
X0_PLUS = Fraction(17, 35)


@dataclass(frozen=True)
class CirclePoint:
    """Quadrature node on the unit circle: angle as a fraction of a turn and
    the corresponding complex value."""

    angle: Fraction
    value: mp.mpc

    def __post_init__(self):
        if not 0 <= self.angle < 1:
            raise ValueError("angle must lie in [0, 1)")


@dataclass(frozen=True)
class RootBracket:
    """Interval known to enclose the root of H(x^3) = 1."""

    lo: Fraction = X0_MINUS
    hi: Fraction = X0_PLUS

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError("need lo < hi")

    def __iter__(self):
        return iter((self.lo, self.hi))


@dataclass(frozen=True)
class PrecisionContext:
    digits: int = 24
    nodes: int = 100

    def __post_init__(self):
        if self.digits < 15:
            raise ValueError("need at least 15 working digits")
        if self.nodes < 4:
            raise ValueError("need at least 4 quadrature nodes")

    @classmethod
    def for_nodes(cls, nodes: int) -> "PrecisionContext":
        """Working digits tracking the observed residual decay per node."""
        return cls(digits=max(15, int(0.12 * nodes) + 20), nodes=nodes)


def _bits(digits: int) -> int:
    return int(digits * 3.32193) + 24


def _ctx(bits: int):
    return gmpy2.context(precision=bits, allow_complex=True)


def _to_mpfr(x):
    """Exact-as-possible conversion of int/float/str/Fraction/mpmath.mpf."""
    if isinstance(x, Fraction):
        return gmpy2.mpfr(gmpy2.mpq(x.numerator, x.denominator))
    if isinstance(x, mp.mpf):
        # read the mantissa directly: mp.mpf(x) would re-round to ambient prec
        sign, man, exp, _ = x._mpf_
        if man == 0:
            return gmpy2.mpfr(0)
        r = gmpy2.mpfr(gmpy2.mpz(man))
        r = gmpy2.mul_2exp(r, exp) if exp >= 0 else gmpy2.div_2exp(r, -exp)
        return -r if sign else r
    return gmpy2.mpfr(x)


def _mpfr_to_mpf(y) -> mp.mpf:
    m, e = y.as_mantissa_exp()
    with mp.workprec(max(mp.mp.prec, y.precision + 16)):
        return mp.ldexp(int(m), int(e))


def _mpc_to_mpc(z) -> mp.mpc:
    # build inside a wide-enough precision: the mpc constructor re-rounds
    with mp.workprec(max(mp.mp.prec, z.real.precision + 16)):
        return mp.mpc(_mpfr_to_mpf(z.real), _mpfr_to_mpf(z.imag))


# ---------------------------------------------------------------------------
# kernel polynomial
# ---------------------------------------------------------------------------

def eval_P(x, t, u):
    """Quartic kernel polynomial; symmetric in (t, u)."""
    ut = u * t
    return (ut * ut - (u + t) * ut * x + (1 - t ** 3 - u ** 3) * ut * x * x
            + (t ** 4 + u ** 4) * x ** 3)


def _u_coeffs(x, t):
    """Coefficients (c4, c2, c1, c0) of the kernel as a quartic in u
    (the cubic coefficient vanishes identically)."""
    x2 = x * x
    t3 = t * t * t
    c4 = x2 * (x - t)
    c2 = t * (t - x)
    c1 = t * x * (x - t - t3 * x)
    c0 = t3 * t * x2 * x
    return c4, c2, c1, c0


def unit_disk_roots(x, t, digits: int = 20):
    """The two simple roots of the kernel quartic inside |u| < 1.

    Seeds come from companion-matrix eigenvalues in double precision and are
    polished by Newton steps at working precision.  Raises RootCountError if
    the inside-root count is not exactly 2 or a root sits on the guard band
    around the circle.
    """
    bits = _bits(digits)
    with _ctx(bits):
        xf = _to_mpfr(x)
        if not 0 < xf < 0.5:
            raise FredholmError("unit-disk root count is established for 0 < x < 1/2")
        tc = _to_gmpy_complex(t)
        roots = _roots_inside(xf, tc, bits)
        return tuple(_mpc_to_mpc(r) for r in roots)


def _roots_inside(xf, tc, bits):
    c4, c2, c1, c0 = _u_coeffs(xf, tc)
    seeds = np.roots([complex(c4), 0.0, complex(c2), complex(c1), complex(c0)])
    zero = gmpy2.mpc(0)
    polished = []
    for s in seeds:
        u = gmpy2.mpc(s)
        prev = gmpy2.mpfr("inf")
        for _ in range(12):
            pu = ((c4 * u * u + c2) * u + c1) * u + c0
            dpu = (4 * c4 * u * u + 2 * c2) * u + c1
            if dpu == zero:
                break
            step = pu / dpu
            u -= step
            mag = gmpy2.norm(step)
            if mag >= prev or mag == 0:
                break
            prev = mag
        polished.append(u)
    guard = gmpy2.exp2(-(bits // 2))
    inside = []
    for u in polished:
        nrm = gmpy2.norm(u)
        if abs(nrm - 1) < guard:
            raise RootCountError(
                f"root with |u| ~ 1 at x={xf}, t={tc}: precision loss or "
                f"out-of-domain input")
        if nrm < 1:
            inside.append(u)
    if len(inside) != 2:
        raise RootCountError(
            f"expected 2 unit-disk roots, found {len(inside)} at x={xf}, t={tc}")
    inside.sort(key=lambda z: (z.real, z.imag))
    residual_cap = gmpy2.mpfr(10) ** (8 - bits * 0.30103)
    for u in inside:
        pu = ((c4 * u * u + c2) * u + c1) * u + c0
        if gmpy2.sqrt(gmpy2.norm(pu)) > residual_cap:
            raise RootCountError("polished root residual too large")
    return inside


def _phi_psi_at(xf, tc, bits):
    """(Phi, Psi) at one circle point via the residue sum over inside roots."""
    if xf == 0:
        return gmpy2.mpc(0), gmpy2.mpc(1)
    c4, c2, c1, c0 = _u_coeffs(xf, tc)
    u1, u2 = _roots_inside(xf, tc, bits)
    phi = gmpy2.mpc(0)
    for u in (u1, u2):
        dpu = (4 * c4 * u * u + 2 * c2) * u + c1
        phi += u * u * u / dpu
    psi = 1 - xf * xf * (tc - xf) * phi
    return phi, psi


def eval_Phi(x, t, digits: int = 20) -> mp.mpc:
    """Residue form of the annulus coefficient extraction of u^3 / P."""
    bits = _bits(digits)
    with _ctx(bits):
        xf = _to_mpfr(x)
        tc = _to_gmpy_complex(t)
        phi, _ = _phi_psi_at(xf, tc, bits)
        return _mpc_to_mpc(phi)


def eval_Psi(x, t, digits: int = 20) -> mp.mpc:
    bits = _bits(digits)
    with _ctx(bits):
        xf = _to_mpfr(x)
        tc = _to_gmpy_complex(t)
        _, psi = _phi_psi_at(xf, tc, bits)
        return _mpc_to_mpc(psi)


def eval_Phi_contour(x, t, n: int = 512, digits: int = 25) -> mp.mpc:
    """Independent contour-quadrature evaluation of the same extraction:
    the n-point circle average of u^4 / P(x, t, u)."""
    bits = _bits(digits)
    with _ctx(bits):
        xf = _to_mpfr(x)
        tc = _to_gmpy_complex(t)
        nodes = _unit_nodes(n)
        acc = gmpy2.mpc(0)
        for u in nodes:
            acc += u ** 4 / eval_P(xf, tc, u)
        return _mpc_to_mpc(acc / n)


def kernel_and_rhs(x, tau, theta, digits: int = 20):
    """Kernel and right-hand side of the circle integral equation at angles
    tau, theta in [0, 1); both are 1-periodic."""
    bits = _bits(digits)
    with _ctx(bits):
        xf = _to_mpfr(x)
        two_pi = 2 * gmpy2.const_pi()
        at = two_pi * _to_mpfr(tau)
        au = two_pi * _to_mpfr(theta)
        t = gmpy2.mpc(gmpy2.cos(at), gmpy2.sin(at))
        u = gmpy2.mpc(gmpy2.cos(au), gmpy2.sin(au))
        _, psi = _phi_psi_at(xf, t, bits)
        if gmpy2.sqrt(gmpy2.norm(psi)) < 1e-6:
            raise KernelSingular("Psi vanished inside the certified domain")
        p = eval_P(xf, t, u)
        if gmpy2.sqrt(gmpy2.norm(p)) < 1e-9:
            raise KernelSingular("P vanished on the torus")
        kern = xf * xf * t ** 3 * u * (u - xf) / (p * psi)
        rhs = t * t / ((t - xf) * psi)
        return _mpc_to_mpc(kern), _mpc_to_mpc(rhs)


def _to_gmpy_complex(t):
    if isinstance(t, gmpy2.mpc):
        return t
    if isinstance(t, mp.mpc):
        return gmpy2.mpc(_to_mpfr(t.real), _to_mpfr(t.imag))
    if isinstance(t, complex):
        return gmpy2.mpc(t)
    return gmpy2.mpc(_to_mpfr(t))


# ---------------------------------------------------------------------------
# exact integer series
# ---------------------------------------------------------------------------

# x-coefficients of the kernel polynomial as Laurent polys in (u, t)
_A1 = {(2, 1): -1, (1, 2): -1}
_A2 = {(1, 1): 1, (1, 4): -1, (4, 1): -1}
_A3 = {(0, 4): 1, (4, 0): 1}

_S_SERIES: list[dict] = [{(-2, -2): 1}]
_S_BY_U: list[dict] = [l2_by_u(_S_SERIES[0])]


def _extend_reciprocal_series(order: int) -> None:
    while len(_S_SERIES) <= order:
        s = len(_S_SERIES)
        acc: dict = {}
        acc = l2_add(acc, l2_mul(_A1, _S_SERIES[s - 1]))
        if s >= 2:
            acc = l2_add(acc, l2_mul(_A2, _S_SERIES[s - 2]))
        if s >= 3:
            acc = l2_add(acc, l2_mul(_A3, _S_SERIES[s - 3]))
        nxt = l2_shift(l2_scale(acc, -1), -2, -2)
        _S_SERIES.append(nxt)
        _S_BY_U.append(l2_by_u(nxt))


def phi_series(order: int) -> LaurentSeries:
    """Exact x-series of the annulus extraction, coefficients Laurent in t."""
    _extend_reciprocal_series(order)
    return LaurentSeries(tuple(
        dict(_S_BY_U[s].get(-4, {})) for s in range(order + 1)))


def psi_series(order: int) -> LaurentSeries:
    phis = phi_series(order)
    coeffs: list[dict] = [{0: 1}, {}]
    for s in range(2, order + 1):
        term = l1_scale(l1_shift(phis[s - 2], 1), -1)
        if s >= 3:
            term = l1_add(term, phis[s - 3])
        coeffs.append(term)
    return LaurentSeries(tuple(coeffs[: order + 1]))


_G_SERIES: list[dict] = [{1: 1}]


def g_series(order: int) -> LaurentSeries:
    """Exact x-series of the boundary solution on the circle.

    Derived order by order from the integral identity: the new coefficient
    equals the simple-pole source plus the residue convolution of older
    coefficients, minus corrections from higher kernel-denominator terms.
    """
    _extend_reciprocal_series(max(0, order - 2))
    psis = psi_series(order)
    while len(_G_SERIES) <= order:
        s = len(_G_SERIES)
        acc = {1 - s: 1}  # source term t^2/(t - x), expanded in x/t
        w: dict = {}
        for i in range(0, s - 1):
            j = s - 2 - i
            gi = _G_SERIES[i]
            sj = _S_BY_U[j]
            for k, coeff in gi.items():
                band = sj.get(-2 - k)
                if band:
                    w = l1_add(w, l1_scale(band, coeff))
        for i in range(0, max(0, s - 2)):
            j = s - 3 - i
            gi = _G_SERIES[i]
            sj = _S_BY_U[j]
            for k, coeff in gi.items():
                band = sj.get(-1 - k)
                if band:
                    w = l1_add(w, l1_scale(band, -coeff))
        acc = l1_add(acc, l1_shift(w, 3))
        for j in range(4, s + 1):
            pj = psis[j]
            if pj:
                acc = l1_add(acc, l1_scale(l1_mul(pj, _G_SERIES[s - j]), -1))
        _G_SERIES.append(acc)
    return LaurentSeries(tuple(dict(c) for c in _G_SERIES[: order + 1]))


def h_series(order: int):
    """Exact coefficients h_1..h_order of the width-3 cut-free series, from
    the circle average of the boundary solution series."""
    gs = g_series(3 * order - 2 if order >= 1 else 0)
    coeffs = [0]
    for s in range(0, gs.order + 1):
        c0 = gs[s].get(0, 0)
        if s % 3 == 1:
            if (s + 2) // 3 <= order:
                if len(coeffs) <= (s + 2) // 3:
                    coeffs.extend([0] * ((s + 2) // 3 + 1 - len(coeffs)))
                coeffs[(s + 2) // 3] = c0
        elif c0 != 0:
            raise AssertionError("circle average must vanish off the 3-grid")
    return tuple(coeffs[: order + 1])


def phi_series_numeric(t, order: int, digits: int = 30):
    """x-series coefficients of the extraction at one fixed circle point t,
    computed in floating point (complex), for high-order comparisons."""
    bits = _bits(digits)
    with _ctx(bits):
        tc = _to_gmpy_complex(t)
        t2 = tc * tc
        t3 = t2 * tc
        t4 = t3 * tc
        inv_a0 = 1 / t2  # times u^-2
        a1 = {2: -tc, 1: -t2}
        a2 = {1: tc - t4, 4: -tc}
        a3 = {0: t4, 4: gmpy2.mpc(1)}
        series = [{-2: inv_a0}]
        phis = [gmpy2.mpc(0)]
        for s in range(1, order + 1):
            acc: dict = {}
            for coeffs, back in ((a1, 1), (a2, 2), (a3, 3)):
                if s - back < 0:
                    continue
                prev = series[s - back]
                for ka, va in coeffs.items():
                    for kb, vb in prev.items():
                        k = ka + kb
                        acc[k] = acc.get(k, gmpy2.mpc(0)) + va * vb
            nxt = {k - 2: -v * inv_a0 for k, v in acc.items()}
            series.append(nxt)
            phis.append(nxt.get(-4, gmpy2.mpc(0)))
        return [_mpc_to_mpc(p) for p in phis]


# ---------------------------------------------------------------------------
# circle quadrature and the dense solve
# ---------------------------------------------------------------------------

@dataclass
class NystromSystem:
    """Discretized circle system: (I - K) phi = f at equally spaced nodes."""

    x: mp.mpf
    nodes: tuple
    kernel: list          # rows of K (node weight 1/n included)
    rhs: list
    solution: list
    residual_inf: mp.mpf

    @property
    def size(self) -> int:
        return len(self.nodes)

    def circle_points(self) -> tuple[CirclePoint, ...]:
        n = self.size
        return tuple(CirclePoint(Fraction(j, n), t)
                     for j, t in enumerate(self.nodes))


def _unit_nodes(n: int):
    two_pi = 2 * gmpy2.const_pi()
    out = []
    for j in range(n):
        ang = two_pi * j / n
        out.append(gmpy2.mpc(gmpy2.cos(ang), gmpy2.sin(ang)))
    return out


def _assemble(xf, n: int, bits: int):
    nodes = _unit_nodes(n)
    x2 = xf * xf
    zero = gmpy2.mpc(0)
    if xf == 0:
        kernel = [[zero] * n for _ in range(n)]
        rhs = list(nodes)
        return nodes, kernel, rhs
    psi_floor = gmpy2.mpfr("1e-12")
    rowf = []
    rhs = []
    for t in nodes:
        _, psi = _phi_psi_at(xf, t, bits)
        if gmpy2.norm(psi) < psi_floor:
            raise KernelSingular("Psi vanished at a quadrature node")
        rowf.append(x2 * t ** 3 / (psi * n))
        rhs.append(t * t / ((t - xf) * psi))
    colf = [u * (u - xf) for u in nodes]
    kernel = [[zero] * n for _ in range(n)]
    p_floor = gmpy2.mpfr("1e-18")
    for j in range(n):
        t = nodes[j]
        row = kernel[j]
        rj = rowf[j]
        for k in range(j, n):
            p = eval_P(xf, t, nodes[k])
            if gmpy2.norm(p) < p_floor:
                raise KernelSingular("P vanished on the torus")
            row[k] = rj * colf[k] / p
            if k != j:
                # P is symmetric in (t, u); only the row factors differ
                kernel[k][j] = rowf[k] * colf[j] / p
    return nodes, kernel, rhs


def _lu_solve(a: list, b: list):
    """In-place LU with partial pivoting; a is a list of row lists (consumed)."""
    n = len(a)
    x = list(b)
    for col in range(n):
        piv = max(range(col, n), key=lambda r: gmpy2.norm(a[r][col]))
        if gmpy2.norm(a[piv][col]) == 0:
            raise FredholmError("singular linear system")
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            x[col], x[piv] = x[piv], x[col]
        arow = a[col]
        inv = 1 / arow[col]
        for r in range(col + 1, n):
            f = a[r][col] * inv
            if f == 0:
                continue
            rrow = a[r]
            rrow[col + 1:] = [v - f * w for v, w in
                              zip(rrow[col + 1:], arow[col + 1:])]
            x[r] -= f * x[col]
    for col in range(n - 1, -1, -1):
        arow = a[col]
        acc = x[col]
        for k in range(col + 1, n):
            acc -= arow[k] * x[k]
        x[col] = acc / arow[col]
    return x


def _solve_raw(xf, n: int, bits: int):
    nodes, kernel, rhs = _assemble(xf, n, bits)
    a = [[(1 if j == k else 0) - kernel[j][k] for k in range(n)] for j in range(n)]
    phi = _lu_solve(a, rhs)
    resid = gmpy2.mpfr(0)
    for j in range(n):
        row = kernel[j]
        acc = rhs[j] - phi[j]
        for k in range(n):
            acc += row[k] * phi[k]
        resid = max(resid, gmpy2.sqrt(gmpy2.norm(acc)))
    return nodes, kernel, rhs, phi, resid


def nystrom_solve(x, ctx: PrecisionContext = PrecisionContext()) -> NystromSystem:
    """Solve the discretized circle equation at fixed x in [0, 17/35]."""
    bits = _bits(ctx.digits)
    with _ctx(bits):
        xf = _to_mpfr(x)
        _check_domain(xf)
        nodes, kernel, rhs, phi, resid = _solve_raw(xf, ctx.nodes, bits)
        cap = mp.mpf(10) ** (5 - ctx.digits)
        resid_mp = _mpfr_to_mpf(resid)
        if resid_mp >= cap:
            raise FredholmError(
                f"solve residual {resid_mp} above tolerance {cap}")
        return NystromSystem(
            x=_mpfr_to_mpf(xf),
            nodes=tuple(_mpc_to_mpc(t) for t in nodes),
            kernel=kernel,
            rhs=[_mpc_to_mpc(v) for v in rhs],
            solution=[_mpc_to_mpc(v) for v in phi],
            residual_inf=resid_mp,
        )


def _check_domain(xf):
    hi = gmpy2.mpfr(gmpy2.mpq(17, 35))
    if xf < 0 or xf > hi + gmpy2.mpfr("1e-30"):
        raise FredholmError(f"x={xf} outside the certified interval [0, 17/35]")


def _H_raw(xf, n: int, bits: int):
    """H at the cubed argument: x^2 times the circle average of the solution."""
    if xf == 0:
        return gmpy2.mpfr(0)
    _, _, _, phi, _ = _solve_raw(xf, n, bits)
    acc = gmpy2.mpc(0)
    for v in phi:
        acc += v
    val = acc * xf * xf / n
    imag_cap = gmpy2.mpfr(10) ** (5 - bits * 0.30103)
    if abs(val.imag) > imag_cap:
        raise FredholmError("circle average acquired an imaginary part")
    return val.real


def H_eval(x, ctx: PrecisionContext = PrecisionContext()) -> mp.mpf:
    """The cut-free width-3 series evaluated at x^3, via the circle system."""
    bits = _bits(ctx.digits)
    with _ctx(bits):
        xf = _to_mpfr(x)
        _check_domain(xf)
        return _mpfr_to_mpf(_H_raw(xf, ctx.nodes, bits))


def residual_at(x, ctx: PrecisionContext = PrecisionContext()) -> mp.mpf:
    """|H(x^3) - 1| at the given point."""
    return abs(H_eval(x, ctx) - 1)


# ---------------------------------------------------------------------------
# root finding
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class C3Result:
    x0: mp.mpf
    limit: mp.mpf
    c3: mp.mpf
    residual: mp.mpf
    nodes: int
    digits: int


def _expected_residual_log10(n: int) -> float:
    # observed geometric decay of the quadrature error per node count
    return min(-1.0, 1.16 - 0.1146 * n)


def _stage_solve(n: int, digits: int, lo_full, hi_full, center, spread):
    """Safeguarded secant on F(x) = H(x^3) - 1 for the n-node discretization.

    The stage converges to the discrete system's own root, so each stage
    re-evaluates the bracket ends: a warm-start interval around the previous
    stage's root is tried first and widened to the full bracket if the sign
    change is lost.
    """
    bits = _bits(digits)
    with _ctx(bits):
        lo_full = _to_mpfr(lo_full)
        hi_full = _to_mpfr(hi_full)

        def F(v):
            return _H_raw(v, n, bits) - 1

        lo, hi = lo_full, hi_full
        if center is not None:
            guess_lo = max(lo_full, _to_mpfr(center) - _to_mpfr(spread))
            guess_hi = min(hi_full, _to_mpfr(center) + _to_mpfr(spread))
            if guess_lo < guess_hi:
                flo, fhi = F(guess_lo), F(guess_hi)
                if flo < 0 < fhi:
                    lo, hi = guess_lo, guess_hi
                else:
                    flo, fhi = F(lo_full), F(hi_full)
            else:
                flo, fhi = F(lo_full), F(hi_full)
        else:
            flo, fhi = F(lo_full), F(hi_full)
        if not (flo < 0 < fhi):
            raise BracketError(
                f"no sign change on [{lo}, {hi}]: F = {flo}, {fhi}")
        tol = gmpy2.mpfr(10) ** min(-(digits - 6),
                                    _expected_residual_log10(n) - 3)
        xa, fa = lo, flo
        xb, fb = hi, fhi
        for it in range(90):
            if hi - lo <= tol:
                break
            if fb != fa and it % 3 != 2:
                cand = xa - fa * (xb - xa) / (fb - fa)
                if not lo < cand < hi:
                    cand = (lo + hi) / 2
            else:
                cand = (lo + hi) / 2
            if cand == lo or cand == hi:
                break
            fc = F(cand)
            xb, fb = xa, fa
            xa, fa = cand, fc
            if fc < 0:
                lo = cand
            else:
                hi = cand
            if fc == 0:
                break
        root, froot = (xa, fa) if abs(fa) <= abs(fb) else (xb, fb)
        slope = abs((fb - fa) / (xb - xa)) if xb != xa else gmpy2.mpfr(1)
        return root, froot, slope


def solve_x0_c3(ctx: PrecisionContext = PrecisionContext(),
                bracket: RootBracket | tuple = RootBracket()) -> C3Result:
    """Growth data for width-3 strips: the root of H(x^3) = 1 in the bracket,
    the limit 1/x0^2, and its log2.

    Runs a ladder of coarser node counts first so the expensive target stage
    starts next to the root; successive stages re-bracket by the previous
    stage's discretization error.
    """
    stages = [(32, 15), (100, 24), (200, 36)]
    stages = [s for s in stages if s[0] < ctx.nodes and s[1] < ctx.digits]
    stages.append((ctx.nodes, ctx.digits))
    lo, hi = bracket
    root = froot = None
    center = None
    spread = None
    prev_n = None
    for n, digits in stages:
        if center is not None:
            # the discrete roots of consecutive stages differ by roughly the
            # coarser stage's quadrature error over the local slope
            gap = mp.mpf(10) ** (_expected_residual_log10(prev_n) + 3)
            spread = max(gap, mp.mpf(10) ** (-digits + 6))
        root, froot, _ = _stage_solve(n, digits, lo, hi, center, spread)
        center = _mpfr_to_mpf(root)
        prev_n = n
    with mp.workdps(ctx.digits + 12):
        x0 = _mpfr_to_mpf(root)
        limit = 1 / (x0 * x0)
        c3 = -2 * mp.log(x0, 2)
        return C3Result(x0=x0, limit=limit, c3=c3,
                        residual=abs(_mpfr_to_mpf(froot)), nodes=ctx.nodes,
                        digits=ctx.digits)


# ---------------------------------------------------------------------------
# double-precision kernel path (diagnostics and certification sweeps)
# ---------------------------------------------------------------------------

def kernel_matrix_f64(x: float, n: int = 200):
    """Unweighted kernel values K(x, tau_j, theta_k) on the n x n node grid,
    plus the right-hand side, in double precision."""
    nodes = np.exp(2j * np.pi * np.arange(n) / n)
    if x == 0:
        return np.zeros((n, n), dtype=complex), nodes.copy(), np.ones(n, dtype=complex), nodes
    phi = np.empty(n, dtype=complex)
    for j, t in enumerate(nodes):
        c4, c2, c1, c0 = _u_coeffs(x, t)
        roots = np.roots([c4, 0.0, c2, c1, c0])
        inside = roots[np.abs(roots) < 1]
        if len(inside) != 2:
            raise RootCountError(f"expected 2 unit-disk roots at t index {j}")
        dp = (4 * c4 * inside ** 2 + 2 * c2) * inside + c1
        phi[j] = np.sum(inside ** 3 / dp)
    psi = 1 - x * x * (nodes - x) * phi
    t_col = nodes[:, None]
    u_row = nodes[None, :]
    p = eval_P(x, t_col, u_row)
    kernel = x * x * t_col ** 3 * u_row * (u_row - x) / (p * psi[:, None])
    rhs = nodes ** 2 / ((nodes - x) * psi)
    return kernel, rhs, psi, nodes


def kernel_l2_norm_sq(x: float, n: int = 200) -> float:
    """Squared L2 norm of the kernel over the unit torus (node average)."""
    kernel, _, _, _ = kernel_matrix_f64(x, n)
    return float(np.mean(np.abs(kernel) ** 2))
