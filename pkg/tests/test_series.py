import math

import mpmath as mp
import pytest

from tricount.counting import count_rectangle
from tricount.geometry import brute_force_count, trapezoid_height2
from tricount.series import (
    G_closed,
    G_series,
    Hstar_from_H,
    PowerSeries,
    SeriesError,
    alpha_c2,
    binary_entropy,
    f_abc,
    growth_pole_polynomial,
    gstar_coeffs,
    np_upper_bound,
    tri_gf_table,
)


class TestFabc:
    def test_base_case(self):
        assert f_abc(0, 0, 0) == 1

    def test_negative_indices(self):
        assert f_abc(-1, 0, 0) == 0
        assert f_abc(0, -2, 5) == 0

    def test_total_degree_3(self):
        # frozen from expanding 1/(1 - x - y - z + xz) directly
        assert f_abc(1, 1, 1) == 4

    def test_defining_identity(self):
        # multiplying the table by (1 - x - y - z + xz) leaves the constant 1
        for a in range(4):
            for b in range(4):
                for c in range(4):
                    delta = (f_abc(a, b, c) - f_abc(a - 1, b, c)
                             - f_abc(a, b - 1, c) - f_abc(a, b, c - 1)
                             + f_abc(a - 1, b, c - 1))
                    assert delta == (1 if (a, b, c) == (0, 0, 0) else 0)

    def test_dense_table(self):
        table = tri_gf_table(2)
        assert table[(0, 0, 0)] == 1
        assert table[(1, 1, 1)] == 4
        assert all(v >= 0 for v in table.values())

    @staticmethod
    def _count_without_spanning_edges(a, b, c):
        """Filtered oracle: triangulations of the width-2 profile (a, b, c)
        without an interior edge projecting onto the whole base [0, 2]."""
        from tricount.geometry import (LatticePolygon, _on_segment,
                                       enumerate_triangulations)
        verts = [(0, 0), (2, 0), (2, c), (1, b), (0, a)]
        dedup = [v for i, v in enumerate(verts) if v != verts[(i + 1) % len(verts)]]
        poly = LatticePolygon(tuple(dedup))
        boundary = [(poly.vertices[i], poly.vertices[(i + 1) % len(poly.vertices)])
                    for i in range(len(poly.vertices))]

        def interior_spanning(tri_edges):
            for p, q in tri_edges:
                if {p[0], q[0]} != {0, 2}:
                    continue
                on_boundary = any(_on_segment(p, u, v) and _on_segment(q, u, v)
                                  for u, v in boundary)
                if not on_boundary:
                    return True
            return False

        total = 0
        for t in enumerate_triangulations(poly):
            if not interior_spanning(t.edges()):
                total += 1
        return total

    def test_matches_filtered_oracle(self):
        for a, b, c in [(1, 1, 1), (0, 1, 1), (1, 1, 0), (2, 1, 1), (1, 2, 1)]:
            assert f_abc(a, b, c) == self._count_without_spanning_edges(a, b, c), \
                (a, b, c)


class TestGSeries:
    def test_value_at_zero(self):
        assert G_closed(0) == 0

    def test_domain_error(self):
        with pytest.raises(SeriesError):
            G_closed(0.3)

    def test_coefficients(self):
        s = G_series(6)
        assert s[2] == 3
        assert s[4] == 35
        assert s[6] == 462
        assert all(s[k] == 0 for k in (0, 1, 3, 5))

    def test_halved_central_binomials(self):
        s = G_series(12)
        for k in range(0, 7):
            expected = math.comb(4 * k, 2 * k) // 2 if k else 0
            assert s[2 * k] == expected

    def test_series_matches_closed_form(self):
        # tail after x^64 is below (16 x^2)^32 ~ 1e-32 at x = 0.08
        s = G_series(64)
        with mp.workdps(40):
            x = mp.mpf("0.08")
            series_val = sum(mp.mpf(c) * x ** k for k, c in enumerate(s.coefficients))
            assert abs(series_val - G_closed(x, dps=40)) < mp.mpf("1e-25")


class TestGStar:
    def test_first_values(self):
        s = gstar_coeffs(2)
        assert s.coefficients == (1, 3, 44)

    def test_oracle_sums(self):
        # sums of trapezoid counts over a fixed perimeter weight, both parities
        for n in (1, 2):
            total = 0
            for a in range(0, 2 * n + 1):
                c = 2 * n - a
                total += brute_force_count(trapezoid_height2(a, c))
            assert total == gstar_coeffs(n)[n]

    def test_growth_ratio_approaches_alpha(self):
        s = gstar_coeffs(21)
        alpha, _ = alpha_c2(dps=30)
        ratio = s[21] / s[20]
        assert abs(ratio - float(alpha)) < 0.05

    def test_strip_count_interleaving(self):
        # two-column rectangles embed into the trapezoid family and back
        g = gstar_coeffs(4).coefficients
        assert count_rectangle(2, 1) < g[2]
        assert count_rectangle(2, 2) < g[3]
        assert 12 ** 2 < count_rectangle(2, 5)  # middle weight-4 trapezoid


class TestAlphaC2:
    def test_c2_digits(self):
        _, c2 = alpha_c2()
        assert abs(c2 - mp.mpf("2.05256897")) < 5e-9

    def test_alpha_value(self):
        alpha, _ = alpha_c2()
        assert abs(alpha - mp.mpf("17.2095556595921536")) < 1e-12

    def test_pole_polynomial_root(self):
        with mp.workdps(50):
            alpha, _ = alpha_c2(dps=50)
            x = 1 / mp.sqrt(alpha)
            a4, a2, a0 = growth_pole_polynomial()
            assert abs(a4 * x ** 4 + a2 * x ** 2 + a0) < mp.mpf("1e-40")

    def test_closed_form_pole(self):
        with mp.workdps(50):
            alpha, _ = alpha_c2(dps=50)
            x = 1 / mp.sqrt(alpha)
            assert abs(G_closed(x, dps=50) - 1) < mp.mpf("1e-12")


class TestHstar:
    def test_published_digits(self):
        hs = Hstar_from_H((0, 1, 2, 14, 86))
        assert hs.coefficients == (1, 1, 3, 19, 125)

    def test_zero_series(self):
        assert Hstar_from_H((0, 0, 0)).coefficients == (1, 0, 0)

    def test_nonzero_constant_rejected(self):
        with pytest.raises(SeriesError):
            Hstar_from_H((1, 2))

    def test_inverse_relation(self):
        # (1 - H) * H* == 1 up to truncation
        h = (0, 1, 2, 14, 86, 712)
        hs = Hstar_from_H(h).coefficients
        for n in range(len(h)):
            conv = hs[n] - sum(h[k] * hs[n - k] for k in range(1, n + 1))
            assert conv == (1 if n == 0 else 0)


class TestNpUpperBound:
    def test_entropy_peak(self):
        assert binary_entropy(0.5) == 1.0

    def test_published_bound(self):
        c = 4 * math.log2((1 + math.sqrt(5)) / 2)
        bound, argmax = np_upper_bound(c)
        assert abs(bound - 4.735820221) < 1e-8
        assert abs(argmax - 0.83206855) < 1e-6

    def test_monotone_in_c(self):
        values = [np_upper_bound(c)[0] for c in (0.5, 1.5, 2.5, 3.5)]
        assert values == sorted(values)

    def test_regression_c3(self):
        # frozen optimizer output for the historical exponent bound 3
        bound, argmax = np_upper_bound(3.0)
        assert bound == pytest.approx(4.7923373354, abs=1e-9)
        assert argmax == pytest.approx(0.8548981224, abs=1e-8)

    def test_c_zero_edge(self):
        bound, argmax = np_upper_bound(0.0)
        assert bound == pytest.approx(3.0, abs=1e-12)
        assert argmax == pytest.approx(0.5, abs=1e-9)


class TestPowerSeries:
    def test_eval(self):
        s = PowerSeries((1, 2, 3))
        assert s.eval(2) == 1 + 4 + 12
        assert s.order == 2
