"""Acceptance suite: one test per verification target, each printing a
PASS/FAIL line with its runtime (run pytest -s to see them)."""

import cmath
import math
import time
from functools import lru_cache
from itertools import product

import numpy as np
import pytest

import schottkyzeta as sz
from schottkyzeta.moebius import GEN_U_PLUS, GEN_V, GEN_X, GENERATORS, exp_sl2, lie_bracket
from schottkyzeta.sections import vertical_eigenvalue_check
from schottkyzeta.transfer import _DetCache
from schottkyzeta.zerofind import circle_path, expected_zero_order, scan_contour


class _Budget:
    def __init__(self, label: str, seconds: float):
        self.label = label
        self.seconds = seconds

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.perf_counter() - self.t0
        status = "PASS" if exc_type is None else "FAIL"
        print(f"ACCEPTANCE {self.label}: {status} ({elapsed:.2f}s)")
        if exc_type is None:
            assert elapsed < self.seconds, f"{self.label}: {elapsed:.1f}s over budget"


@lru_cache(maxsize=None)
def pop6():
    return sz.pair_of_pants(6.0, 6.0, 6.0)


@lru_cache(maxsize=None)
def pop6_spectrum(cutoff=12.0):
    return sz.length_spectrum(pop6(), cutoff, sz.Convention.ORIENTED)


@lru_cache(maxsize=None)
def chain3():
    return sz.funnel_chain(3, 3.0, 6.0)


def random_tangent(rng):
    r = math.sqrt(rng.uniform(0, 0.64))
    return sz.UnitTangentPoint.from_coords(
        r * cmath.exp(1j * rng.uniform(0, 2 * math.pi)),
        rng.uniform(0, 2 * math.pi))


def random_isometry(rng):
    return (exp_sl2(GEN_X, rng.uniform(-1, 1))
            .compose(exp_sl2(GEN_U_PLUS, rng.uniform(-1, 1)))
            .compose(exp_sl2(GEN_V, rng.uniform(0, 2 * math.pi))))


def test_01_lie_algebra_identities():
    with _Budget("01 lie-algebra-identities", 1.0):
        X, UP, UM = GENERATORS["X"], GENERATORS["U+"], GENERATORS["U-"]
        XP, V = GENERATORS["X_perp"], GENERATORS["V"]
        assert np.array_equal(lie_bracket(X, UP), UP)
        assert np.array_equal(lie_bracket(X, UM), -UM)
        assert np.array_equal(lie_bracket(UP, UM), 2 * X)
        assert np.array_equal(lie_bracket(X, V), XP)
        assert np.array_equal(lie_bracket(X, XP), V)
        assert np.array_equal(lie_bracket(V, XP), X)


def test_02_flow_calculus():
    with _Budget("02 flow-calculus", 5.0):
        rng = np.random.default_rng(20240201)
        for _ in range(100):
            y = random_tangent(rng)
            t = rng.uniform(-2, 2)
            yt = y.flow("X", t)
            fm0, fp0 = sz.phi_pm(y)
            fm1, fp1 = sz.phi_pm(yt)
            assert abs(fp1 - math.exp(t) * fp0) <= 1e-9 * fp1
            assert abs(fm1 - math.exp(-t) * fm0) <= 1e-9 * max(fm1, 1e-12)
            bm0, bp0 = sz.endpoint_maps(y)
            bm1, bp1 = sz.endpoint_maps(yt)
            assert abs(bm0.point - bm1.point) < 1e-10
            assert abs(bp0.point - bp1.point) < 1e-10
            g = random_isometry(rng)
            fmg, fpg = sz.phi_pm(y.translate(g))
            assert abs(fpg - fp0 / g.boundary_derivative(bp0)) <= 1e-9 * fpg
            assert abs(fmg - fm0 / g.boundary_derivative(bm0)) <= 1e-9 * max(fmg, 1e-12)


def _oracle_classes(rank, max_len, convention):
    letters = [j for j in range(1, rank + 1)] + [-j for j in range(1, rank + 1)]
    order = lambda w: tuple((abs(x), 0 if x > 0 else 1) for x in w)
    out = set()
    for n in range(1, max_len + 1):
        for w in product(letters, repeat=n):
            if any(w[i] == -w[i + 1] for i in range(n - 1)) or w[0] == -w[-1]:
                continue
            rots = [w[i:] + w[:i] for i in range(n)]
            if any(rots[i] == w for i in range(1, n)):
                continue
            cands = list(rots)
            if convention is sz.Convention.UNORIENTED:
                iw = tuple(-x for x in reversed(w))
                cands += [iw[i:] + iw[:i] for i in range(n)]
            out.add(min(cands, key=order))
    return out


def test_03_enumeration_oracle():
    with _Budget("03 enumeration-oracle", 30.0):
        surfaces = {1: sz.cylinder(2.0), 2: pop6(), 3: chain3()}
        for rank, group in surfaces.items():
            for convention in sz.Convention:
                got = {c.word for c in sz.conjugacy_classes(group, 6, convention)}
                assert got == _oracle_classes(rank, 6, convention), \
                    f"rank {rank}, {convention}"


def test_04_cross_method_zeta():
    with _Budget("04 cross-method-zeta", 120.0):
        group = pop6()
        spec = pop6_spectrum(12.0)
        delta = sz.hausdorff_dimension(group, tol=1e-8, N=20)
        rng = np.random.default_rng(4)
        points = [complex(rng.uniform(1.6, 3.0), rng.uniform(-2.0, 2.0))
                  for _ in range(20)]
        assert all(s.real >= delta + 0.3 for s in points)
        for s in points:
            det = sz.fredholm_det(group, s, N=20)
            euler = sz.selberg_zeta(s, spec).value
            assert abs(det / euler - 1.0) < 1e-6, f"s = {s}"


def test_05_factorization():
    with _Budget("05 factorization", 60.0):
        group = pop6()
        spec = pop6_spectrum(12.0)
        delta = sz.hausdorff_dimension(group, tol=1e-8, N=20)
        rng = np.random.default_rng(5)
        for _ in range(10):
            lam = complex(delta + 0.5 + rng.uniform(0.0, 1.5), rng.uniform(-2, 2))
            assert sz.factorization_check(lam, spec, p_max=48) < 1e-8, f"lambda = {lam}"


def test_06_topological_zeros_chi_minus_one():
    with _Budget("06a topological-zeros-chi=-1", 600.0):
        report = sz.verify_topological_zeros(pop6(), 2, N=20, radius=0.25)
        observed = {e["n"]: e["observed"] for e in report["entries"]}
        assert observed == {0: 2, 1: 3, 2: 5}
        assert all(e["pass"] for e in report["entries"])
        assert all(e["radius"] <= 0.25 for e in report["entries"])


def test_06_topological_zeros_chi_minus_two():
    with _Budget("06b topological-zeros-chi=-2", 600.0):
        report = sz.verify_topological_zeros(chain3(), 1, N=16, radius=0.25)
        e1 = [e for e in report["entries"] if e["n"] == 1][0]
        assert e1["observed"] == 6 == expected_zero_order(-2, 1)
        assert e1["pass"]


def test_07_zero_order_consistency():
    with _Budget("07 zero-order-consistency", 600.0):
        group = pop6()
        N, P, radius = 20, 4, 0.1
        f = _DetCache(group, N)

        def flow_zeta(lam):
            # phase of Z_X(lam) continued as a product of shifted determinants
            sign_all = 1.0 + 0.0j
            for p in range(1, P + 1):
                sign_all *= f.phase(lam + p)
            return sign_all

        lhs = scan_contour(flow_zeta, circle_path(-1.0, radius),
                           check_modulus=False).winding
        rhs = sum(scan_contour(f.phase, circle_path(-1.0 + p, radius),
                               check_modulus=False).winding
                  for p in range(1, P + 1))
        assert lhs == rhs
        assert lhs == expected_zero_order(-1, 0)  # order of Z_S at s=0, radius 0.1


def test_08_hausdorff_two_methods_and_monotonicity():
    with _Budget("08 hausdorff", 120.0):
        deltas = []
        for L in (4.0, 5.0, 6.0):
            g = sz.pair_of_pants(L, L, L)
            d_eig = sz.hausdorff_dimension(g, tol=1e-9, N=24)
            d_det = sz.hausdorff_dimension_det(g, tol=1e-9, N=24)
            assert abs(d_eig - d_det) < 1e-6, f"L = {L}"
            deltas.append(d_eig)
        assert deltas[0] > deltas[1] > deltas[2]


def test_09_scattering_functional_equation():
    with _Budget("09 scattering", 60.0):
        rng = np.random.default_rng(9)
        worst = 0.0
        tested = 0
        while tested < 50:
            s = complex(rng.uniform(-4, 4), rng.uniform(-4, 4))
            if abs(s.imag) < 0.05:
                continue
            tested += 1
            for k in range(33):
                r = abs(sz.scattering_multiplier(s, k)
                        * sz.scattering_multiplier(1 - s, k) - 1.0)
                worst = max(worst, r)
        assert worst < 1e-10
        from schottkyzeta.special import reflection_residual
        refl = max(reflection_residual(complex(re, im))
                   for re in np.linspace(-3.3, 3.7, 15)
                   for im in np.linspace(-2.5, 2.5, 11)
                   if not (abs(im) < 1e-9 and abs(re - round(re)) < 1e-9))
        assert refl < 1e-12


def test_10_poisson_helgason():
    with _Budget("10 poisson-helgason", 60.0):
        rng = np.random.default_rng(10)
        cases = [(0.0, sz.FourierDistribution.constant()),
                 (1.0, sz.FourierDistribution.mode(1)),
                 (-0.5 + 2.0j, sz.FourierDistribution.random_real(rng, 3))]
        for lam, omega in cases:
            assert sz.harmonicity_residual(lam, omega, 0.3, h=1e-3) < 1e-4
            assert sz.harmonicity_residual(lam, omega, 0.25 - 0.15j, h=1e-3) < 1e-4
        g = sz.MoebiusMap(2.0, 1.0, 1.0, 1.0)
        assert sz.equivariance_residual(0.7, sz.FourierDistribution.mode(1), g, 0.2) < 1e-9
        for n in range(1, 5):
            for k in range(n, 9):
                assert sz.kernel_check_Pn(n, k) < 1e-12
                assert sz.kernel_check_Pn(n, -k) < 1e-12
            for k in range(-n + 1, n):
                assert sz.kernel_check_Pn(n, k) > 1e-3


def test_11_ladder_calculus():
    with _Budget("11 ladder-calculus", 60.0):
        for n in (1, 2, 3):
            rungs = sz.ladder_build(n, 6)  # raises LoweringMismatch on failure
            assert len(rungs) == 7
            for u in rungs:
                assert vertical_eigenvalue_check(u)
        assert sz.ladder_norm_ratio(1, 1)[0] == 2
        assert sz.ladder_norm_ratio(2, 2)[0] == 10


def test_12_dimension_formulas():
    with _Budget("12 dimension-formulas", 10.0):
        for genus in range(2, 6):
            assert sz.dim_Hn(sz.Compact(genus), 1) == genus
            for n in range(2, 7):
                assert sz.dim_Hn(sz.Compact(genus), n) == (2 * n - 1) * (genus - 1)
        for chi in range(-1, -5, -1):
            assert sz.dim_Hn(sz.ConvexCocompact(chi), 1) == abs(chi) + 1
            for n in range(2, 7):
                assert sz.dim_Hn(sz.ConvexCocompact(chi), n) == (2 * n - 1) * abs(chi)
