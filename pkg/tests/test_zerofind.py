import cmath
import math

import numpy as np
import pytest

from schottkyzeta.errors import BadInput, WindingError, ZeroOnContour
from schottkyzeta.zerofind import (
    Compact,
    ConvexCocompact,
    circle_path,
    dim_Hn,
    expected_zero_order,
    scan_contour,
    winding_number,
    winding_rectangle,
)


class TestWinding:
    def test_triple_zero(self):
        f = lambda s: (s - 1j) ** 3
        assert winding_number(f, 1j, 0.5) == 3

    def test_exponential_no_zeros(self):
        assert winding_number(cmath.exp, 0.3 + 0.2j, 2.0) == 0

    def test_sine(self):
        assert winding_number(cmath.sin, 0.0, 1.0) == 1

    def test_polynomial_in_rectangle(self):
        f = lambda s: (s - 0.5 - 0.5j) * (s + 0.25j) ** 2
        assert winding_rectangle(f, (-1, 1, -1, 1)) == 3

    def test_zero_on_contour_rejected(self):
        f = lambda s: s - 1.0
        with pytest.raises(ZeroOnContour):
            winding_number(f, 0.0, 1.0)

    def test_additivity_under_subdivision(self):
        rng = np.random.default_rng(3)
        roots = rng.uniform(-0.8, 0.8, 6) + 1j * rng.uniform(-0.8, 0.8, 6)
        f = lambda s: np.prod([s - r for r in roots])
        whole = winding_rectangle(f, (-1, 1, -1, 1))
        quads = [(-1, 0, -1, 0), (0, 1, -1, 0), (-1, 0, 0, 1), (0, 1, 0, 1)]
        assert whole == sum(winding_rectangle(f, q) for q in quads) == 6

    def test_product_rule(self):
        rng = np.random.default_rng(11)
        r1 = rng.uniform(-0.5, 0.5, 3) + 1j * rng.uniform(-0.5, 0.5, 3)
        r2 = rng.uniform(-0.5, 0.5, 2) + 1j * rng.uniform(-0.5, 0.5, 2)
        f = lambda s: np.prod([s - r for r in r1])
        g = lambda s: np.prod([s - r for r in r2])
        fg = lambda s: f(s) * g(s)
        c, rad = 0.1 + 0.1j, 1.2
        assert winding_number(fg, c, rad) == winding_number(f, c, rad) + winding_number(g, c, rad)

    def test_half_circle_plus_chord_additivity(self):
        # winding over a circle = sum over the two chord-closed half-disks
        f = lambda s: (s - 0.1 - 0.4j) ** 2 * (s + 0.3 - 0.25j)

        def upper_path(t):
            if t < 0.5:
                return cmath.exp(1j * math.pi * (2 * t))
            return -1 + (t - 0.5) * 4  # chord -1 -> 1

        def lower_path(t):
            if t < 0.5:
                return cmath.exp(1j * (math.pi + math.pi * 2 * t))
            return 1 - (t - 0.5) * 4  # chord 1 -> -1

        w_up = scan_contour(f, upper_path).winding
        w_lo = scan_contour(f, lower_path).winding
        assert w_up + w_lo == winding_number(f, 0.0, 1.0) == 3

    def test_branch_cut_exhausts_refinement(self):
        from schottkyzeta.errors import RefinementExhausted
        with pytest.raises(RefinementExhausted):
            winding_number(cmath.sqrt, 0.0, 1.0, max_depth=8)

    def test_non_integer_phase_refused(self):
        # undersampling aliasing is the only way a non-integer total arises;
        # the refusal logic is exercised on a synthetic scan
        from schottkyzeta.zerofind import ContourScan
        scan = ContourScan(((1 + 0j, 1 + 0j),), total_phase=0.4 * math.pi,
                           refinement_depth=0)
        with pytest.raises(WindingError):
            scan.winding

    def test_scan_reports_samples(self):
        scan = scan_contour(lambda s: s - 0.2, circle_path(0.0, 1.0))
        assert scan.winding == 1
        assert scan.min_modulus > 0
        first, last = scan.samples[0], scan.samples[-1]
        assert abs(first[0] - last[0]) < 1e-12


class TestDimensions:
    def test_compact_examples(self):
        assert dim_Hn(Compact(2), 2) == 3
        assert dim_Hn(Compact(2), 1) == 2

    def test_convex_cocompact_examples(self):
        assert dim_Hn(ConvexCocompact(-1), 1) == 2
        assert dim_Hn(ConvexCocompact(-1), 2) == 3

    def test_compact_table(self):
        # complex dims: n = 1 gives g; n > 1 gives (2n-1)(g-1)
        for g in range(2, 6):
            assert dim_Hn(Compact(g), 1) == g
            for n in range(2, 7):
                assert dim_Hn(Compact(g), n) == (2 * n - 1) * (g - 1)

    def test_convex_cocompact_table(self):
        for chi in range(-1, -5, -1):
            assert dim_Hn(ConvexCocompact(chi), 1) == abs(chi) + 1
            for n in range(2, 7):
                assert dim_Hn(ConvexCocompact(chi), n) == (2 * n - 1) * abs(chi)

    def test_bad_input(self):
        with pytest.raises(BadInput):
            dim_Hn(Compact(1), 2)
        with pytest.raises(BadInput):
            dim_Hn(ConvexCocompact(0), 1)
        with pytest.raises(BadInput):
            dim_Hn(Compact(2), 0)

    def test_expected_orders(self):
        assert expected_zero_order(-1, 0) == 2
        assert expected_zero_order(-1, 1) == 3
        assert expected_zero_order(-1, 2) == 5
        assert expected_zero_order(-2, 1) == 6
        assert expected_zero_order(-2, 2) == 10
