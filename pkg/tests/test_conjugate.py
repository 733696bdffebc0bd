import math

import mpmath
import numpy as np
import pytest

from cartanconj.elliptic import complete_K, jacobi_arrays
from cartanconj.errors import StratumError
from cartanconj.flow import (Covector, EllipticCoord, JacobianPath, Stratum,
                             dilate_covector, from_elliptic, reflect3,
                             rotate_covector, to_elliptic)
from cartanconj import conjugate as cj
from cartanconj import maxwell as mx
from cartanconj.conjugate import (a01_C1, a21_C1, a010, a210, certificate_x1,
                                  certificate_x2, first_conjugate_time, fz0,
                                  j1_C1, j1_C2, j1_factors, two_sided_check)
from cartanconj.verify import random_c1, random_c2


# ---------------------------------------------------------------------------
# small-argument anchors (high precision: the targets sit under float64 noise)
# ---------------------------------------------------------------------------

def test_a01_c1_small_p_anchor_mp():
    with mpmath.workdps(60):
        p = mpmath.mpf("0.01")
        for kk in ("0.3", "0.6", "0.9"):
            k = mpmath.mpf(kk)
            k2, sn, cn, dn, e2 = mx.c1_ingredients_mp(p, k)
            val = mx.a01_c1_kernel(p, k2, sn, cn, dn, e2)[0]
            target = mpmath.mpf(4) / 1575 * k2 * (1 - k2) * p ** 10
            assert float(val / target) == pytest.approx(1.0, rel=2e-2)


def test_a21_c1_small_p_anchor_mp():
    with mpmath.workdps(60):
        p = mpmath.mpf("0.01")
        for kk in ("0.3", "0.6", "0.9"):
            k = mpmath.mpf(kk)
            k2, sn, cn, dn, e2 = mx.c1_ingredients_mp(p, k)
            val = mx.a21_c1_kernel(p, k2, sn, cn, dn, e2)[0]
            target = mpmath.mpf(16) / 1488375 * k2 ** 2 * (1 - k2) * p ** 15
            assert float(val / target) == pytest.approx(1.0, rel=2e-2)


def test_c2_table_smallk_anchors_mp():
    """a01 -> (3/2048) k^8 a010(u1) and a21 -> (k^17/4194304) a210(u1)."""
    from cartanconj.elliptic import am_mp
    with mpmath.workdps(60):
        k = mpmath.mpf("0.01")
        for pp in ("0.8", "1.7", "2.4"):
            p = mpmath.mpf(pp)
            F, E, s, c, d = mx.c2_ingredients_from_p_mp(p, k)
            u1 = float(am_mp(p, k))
            a01 = cj.a01_c2_kernel(k, k * k, F, E, s, c, d)[0]
            a21 = cj.a21_c2_kernel(k, k * k, F, E, s, c, d)[0]
            t01 = mpmath.mpf(3) / 2048 * k ** 8 * mpmath.mpf(float(a010(u1)))
            t21 = k ** 17 / 4194304 * mpmath.mpf(float(a210(u1)))
            assert float(a01 / t01) == pytest.approx(1.0, rel=5e-2)
            assert float(a21 / t21) == pytest.approx(1.0, rel=5e-2)


def test_j1_c2_joint_origin_anchor_mp():
    """J1 ~ (4/70875) k^16 u1^16 along u1 = k -> 0 (at xi = 0, J1 = a0)."""
    from cartanconj.elliptic import am_mp
    with mpmath.workdps(120):
        for kk in ("0.05", "0.02"):
            k = mpmath.mpf(kk)
            p = k   # u1 = am(p, k) ~ p
            F, E, s, c, d = mx.c2_ingredients_from_p_mp(p, k)
            u1 = am_mp(p, k)
            a0 = (mx.fv_c2_kernel(k, k * k, F, E, s, c, d)[0]
                  * cj.a01_c2_kernel(k, k * k, F, E, s, c, d)[0]) / 16
            target = mpmath.mpf(4) / 70875 * k ** 16 * u1 ** 16
            assert float(a0 / target) == pytest.approx(1.0, rel=0.2)


# ---------------------------------------------------------------------------
# asymptotic trigonometric profiles
# ---------------------------------------------------------------------------

def test_a010_special_value():
    assert float(a010(math.pi)) == pytest.approx(48.0 * math.pi ** 2, rel=1e-10)


def test_a010_negative_up_to_three_quarters_pi():
    # below u ~ 0.05 the u^8-small value sits under the roundoff of the
    # O(1) trigonometric terms
    for u in np.linspace(0.05, 0.75 * math.pi, 120):
        assert float(a010(float(u))) < 0.0


def test_a010_first_root_bracket():
    # negative at 3pi/4, positive at pi
    assert float(a010(0.75 * math.pi)) < 0.0 < float(a010(math.pi))


def test_a210_negative():
    for u in np.linspace(0.05, 10.0, 200):
        assert float(a210(float(u))) < 0.0


def test_fz0_positive():
    for p in np.linspace(0.05, 10.0, 50):
        assert float(fz0(float(p))) > 0.0


# ---------------------------------------------------------------------------
# second transcription pass: the C2 tables against the reciprocal-modulus
# transform of the (independently validated) C1 formulas
# ---------------------------------------------------------------------------

def _transform_c1_kernel(kernel, p, k):
    """Evaluate a C1 kernel at modulus 1/k, argument k p, via modulus-k data."""
    sn, cn, dn, _, eps = jacobi_arrays(p, k)
    q = k * p
    sn_t = k * sn
    cn_t = dn
    dn_t = cn
    e2_t = 2.0 * (eps - (1.0 - k * k) * p) / k - q
    return kernel(q, 1.0 / (k * k), sn_t, cn_t, dn_t, e2_t)[0]


@pytest.mark.parametrize("k", [0.35, 0.55, 0.8])
def test_c2_functions_are_transformed_c1(rng, k):
    for _ in range(10):
        p = rng.uniform(0.2, 2.0 * complete_K(k) - 0.2)
        F, E, s, c, d = mx.c2_ingredients_from_p(p, k)
        fz2 = float(mx.fz_c2_kernel(k, k * k, F, E, s, c, d)[0])
        fv2 = float(mx.fv_c2_kernel(k, k * k, F, E, s, c, d)[0])
        a012 = float(cj.a01_c2_kernel(k, k * k, F, E, s, c, d)[0])
        a212 = float(cj.a21_c2_kernel(k, k * k, F, E, s, c, d)[0])
        assert fz2 == pytest.approx(
            2.0 * _transform_c1_kernel(mx.fz_c1_kernel, p, k), rel=1e-9)
        assert fv2 == pytest.approx(
            k * k * _transform_c1_kernel(mx.fv_c1_kernel, p, k), rel=1e-8)
        assert a012 == pytest.approx(
            4.0 * k * k * _transform_c1_kernel(mx.a01_c1_kernel, p, k), rel=1e-7)
        assert a212 == pytest.approx(
            (k ** 8 / 8.0) * _transform_c1_kernel(mx.a21_c1_kernel, p, k), rel=1e-7)


# ---------------------------------------------------------------------------
# J1 structure
# ---------------------------------------------------------------------------

def test_j1_factor_relations(rng):
    for _ in range(20):
        lam = random_c1(rng, k_range=(0.2, 0.9))
        ec = to_elliptic(lam)
        f = j1_C1(ec, rng.uniform(0.5, 4.0))
        k2 = ec.k * ec.k
        scale = max(abs(f.a0), abs(f.a2) / k2, 1e-300)
        assert abs(f.a1 + f.a0 + f.a2 / k2) / scale < 1e-10
        assert abs(f.J1 - (f.a0 + f.a1 * f.xi + f.a2 * f.xi ** 2)) <= \
            1e-10 * max(scale, abs(f.J1)) + 1e2 * f.noise
        assert 0.0 < f.Delta <= 1.0
        assert 0.0 <= f.xi <= 1.0

        lam = random_c2(rng, k_range=(0.35, 0.9))
        ec = to_elliptic(lam)
        f = j1_C2(ec, rng.uniform(0.5, 2.0))
        k2 = ec.k * ec.k
        scale = max(abs(f.a0), abs(f.a2), 1e-300)
        assert abs(f.a1 + k2 * f.a0 + f.a2) / scale < 1e-10
        assert 0.0 < f.Delta <= 1.0


def test_j1_wrong_stratum_rejected(rng):
    ec = to_elliptic(random_c1(rng))
    with pytest.raises(StratumError):
        j1_C2(ec, 1.0)


def test_j1_zero_at_uv1_boundary_xi():
    for k in (0.35, 0.6, 0.85):
        pv = mx.p1_V(k, Stratum.C2)
        t1 = 2.0 * k * pv
        K = complete_K(k)
        for tau_target, xi_val in ((2.0 * K, 0.0), (K, 1.0)):
            phi = k * tau_target - t1 / 2.0
            ec = EllipticCoord(Stratum.C2, phi, k, 1.0, 0.0)
            f = j1_factors(ec, t1)
            assert abs(f.xi - xi_val) < 1e-12
            assert abs(f.J1) < 1e-9


def test_j1_endpoint_factorization_c2():
    # J1 = -a2 xi (1 - xi) at u1 = u_v1(k); evaluated in high precision
    # since a2 is k**17-suppressed against float64 noise in a0
    from cartanconj.elliptic import jacobi_mp
    for k in (0.4, 0.7):
        t1 = 2.0 * k * mx.p1_V(k, Stratum.C2)
        for phi in (0.15, 0.6):
            ec = EllipticCoord(Stratum.C2, phi, k, 1.0, 0.0)
            f = j1_factors(ec, t1)
            assert f.a2 < 0.0
            with mpmath.workdps(50):
                km = mpmath.mpf(k)
                j1 = cj._j1_scalar_mp(ec, t1, 50)
                p = mpmath.mpf(t1) / (2 * km)
                tau = (mpmath.mpf(phi) + mpmath.mpf(t1) / 2) / km
                F, E, s, c, d = mx.c2_ingredients_from_p_mp(p, km)
                a2 = float(mx.fz_c2_kernel(km, km * km, F, E, s, c, d)[0]
                           * cj.a21_c2_kernel(km, km * km, F, E, s, c, d)[0])
                xi = float(jacobi_mp(tau, km)[0]) ** 2
            assert j1 == pytest.approx(-a2 * xi * (1.0 - xi), rel=1e-9)


def test_c1_sign_structure(rng):
    for _ in range(10):
        k = rng.uniform(0.1, 0.9)
        p1 = min(mx.p1_z(k), mx.p1_V(k, Stratum.C1))
        ps = np.linspace(0.3, p1 - 1e-6, 50)
        k2, sn, cn, dn, e2 = mx.c1_ingredients(ps, k)
        a0 = mx.fv_c1_kernel(ps, k2, sn, cn, dn, e2)[0] * mx.a01_c1_kernel(ps, k2, sn, cn, dn, e2)[0]
        a2 = mx.fz_c1_kernel(ps, k2, sn, cn, dn, e2)[0] * mx.a21_c1_kernel(ps, k2, sn, cn, dn, e2)[0]
        assert np.all(a0 < 0)
        assert np.all(a2 > 0)
        assert np.all(a0 + (-a0 - a2 / k2) + a2 < 0)


# ---------------------------------------------------------------------------
# certificates
# ---------------------------------------------------------------------------

def test_certificates_nonnegative(rng):
    for _ in range(500):
        k = rng.uniform(0.02, 0.98)
        p = rng.uniform(0.05, 9.0)
        assert float(certificate_x2(p, k)) >= 0.0
        assert float(certificate_x1(p, k)) >= 0.0


def test_certificate_x2_derivative_identity(rng):
    h = 1e-5
    for _ in range(8):
        k = rng.uniform(0.15, 0.85)
        p = rng.uniform(0.4, 2.6)
        fz = float(mx.f_z_C1(p, k))
        ratio = lambda pp: float(a01_C1(pp, k)) / float(mx.f_z_C1(pp, k))
        lhs = (ratio(p + h) - ratio(p - h)) / (2 * h) * fz * fz
        assert lhs == pytest.approx(0.75 * float(certificate_x2(p, k)), rel=1e-5)


def _richardson_derivative(f, p, h=2e-4):
    d1 = (f(p + h) - f(p - h)) / (2 * h)
    d2 = (f(p + h / 2) - f(p - h / 2)) / h
    return (4.0 * d2 - d1) / 3.0


def test_certificate_x1_derivative_identity(rng):
    for _ in range(8):
        k = rng.uniform(0.15, 0.85)
        p = rng.uniform(0.4, 2.6)
        fv = float(mx.f_V_C1(p, k))
        ratio = lambda pp: float(a21_C1(pp, k)) / float(mx.f_V_C1(pp, k))
        lhs = _richardson_derivative(ratio, p) * fv * fv
        assert lhs == pytest.approx(-(4.0 / 3.0) * k * k * float(certificate_x1(p, k)),
                                    rel=1e-5)


# ---------------------------------------------------------------------------
# first conjugate time
# ---------------------------------------------------------------------------

def test_special_strata():
    assert first_conjugate_time(Covector(0.0, 0.0, 0.0, 0.0)).t_conj == math.inf
    assert first_conjugate_time(Covector(0.3, 0.0, 1.0, 0.3)).t_conj == math.inf
    assert first_conjugate_time(Covector(0.2 + math.pi, 0.0, 1.0, 0.2)).t_conj == math.inf
    c = math.sqrt(2.0 * (1.0 + math.cos(0.7)))
    assert first_conjugate_time(Covector(0.7, c, 1.0, 0.0)).t_conj == math.inf


def test_c6_equals_maxwell():
    res = first_conjugate_time(Covector(0.1, 2.0, 0.0, 0.0))
    assert res.t_conj == res.t_max == pytest.approx(2.0 * mx.p1_V0())


def test_lower_bound_runtime_invariant(rng):
    for _ in range(10):
        lam = random_c1(rng, k_range=(0.15, 0.9)) if rng.random() < 0.5 \
            else random_c2(rng, k_range=(0.35, 0.9))
        res = first_conjugate_time(lam)
        assert res.t_conj >= res.t_max - 1e-6


def test_cross_validation_agrees(rng):
    for _ in range(4):
        lam = random_c1(rng, k_range=(0.2, 0.85)) if rng.random() < 0.5 \
            else random_c2(rng, k_range=(0.4, 0.8))
        res = first_conjugate_time(lam, cross_validate=True)
        assert res.method == "analytic+variational"


def test_equality_cases_critical_moduli():
    k1, k0 = mx.critical_moduli()
    for k in (k1, k0):
        for phi in (0.17, 0.45):
            lam = from_elliptic(EllipticCoord(Stratum.C1, phi, k, 1.0, 0.0))
            res = first_conjugate_time(lam)
            assert abs(res.t_conj - res.t_max) < 1e-6


def test_equality_cases_cn_tau_zero():
    k1, k0 = mx.critical_moduli()
    for k in (0.4, 0.75, 0.93, 0.96):
        assert k < k1 or k > k0
        tm = 2.0 * min(mx.p1_z(k), mx.p1_V(k, Stratum.C1))
        phi = complete_K(k) - tm / 2.0     # tau = K: cn tau = 0
        lam = from_elliptic(EllipticCoord(Stratum.C1, phi, k, 1.0, 0.0))
        res = first_conjugate_time(lam)
        assert abs(res.t_conj - res.t_max) < 1e-6


def test_equality_cases_sn_tau_zero():
    k1, k0 = mx.critical_moduli()
    for k in (0.82, 0.88):
        assert k1 < k < k0
        tm = 2.0 * min(mx.p1_z(k), mx.p1_V(k, Stratum.C1))
        phi = 2.0 * complete_K(k) - tm / 2.0   # tau = 2K: sn tau = 0
        lam = from_elliptic(EllipticCoord(Stratum.C1, phi, k, 1.0, 0.0))
        res = first_conjugate_time(lam)
        assert abs(res.t_conj - res.t_max) < 1e-6


def test_equality_cases_c2():
    for k in (0.45, 0.7):
        tm = 2.0 * k * mx.p1_V(k, Stratum.C2)
        K = complete_K(k)
        for tau_target in (2.0 * K, K):     # sn^2 tau in {0, 1}
            phi = k * tau_target - tm / 2.0
            lam = from_elliptic(EllipticCoord(Stratum.C2, phi, k, 1.0, 0.0))
            res = first_conjugate_time(lam)
            assert abs(res.t_conj - res.t_max) < 1e-6


def test_generic_strict_inequality(rng):
    # away from the equality loci t_conj > t_max strictly
    lam = from_elliptic(EllipticCoord(Stratum.C1, 0.37, 0.5, 1.0, 0.4))
    res = first_conjugate_time(lam)
    assert res.t_conj - res.t_max > 1e-3


def test_symmetry_invariance(rng):
    for _ in range(6):
        lam = random_c1(rng, k_range=(0.2, 0.9)) if rng.random() < 0.5 \
            else random_c2(rng, k_range=(0.35, 0.85))
        t0 = first_conjugate_time(lam).t_conj
        assert first_conjugate_time(reflect3(lam)).t_conj == pytest.approx(t0, abs=1e-6)
        s = rng.uniform(0, 2 * math.pi)
        assert first_conjugate_time(rotate_covector(lam, s)).t_conj == \
            pytest.approx(t0, abs=1e-6)
        r = rng.uniform(-0.6, 0.6)
        lam_d, scale = dilate_covector(lam, r)
        assert first_conjugate_time(lam_d).t_conj == pytest.approx(scale * t0, rel=1e-6)


def test_discontinuity_at_c4_limit():
    """Along cn tau = 0 extremals, t_conj stays bounded as k -> 0 while the
    C4 limit point has t_conj = +inf."""
    limit = 2.0 * mx.p1_z(1e-6)     # -> 2 p1z(0) ~ 8.99 for alpha = 1
    for k in (0.05, 0.02):
        tm = 2.0 * min(mx.p1_z(k), mx.p1_V(k, Stratum.C1))
        phi = complete_K(k) - tm / 2.0
        lam = from_elliptic(EllipticCoord(Stratum.C1, phi, k, 1.0, 0.0))
        res = first_conjugate_time(lam)
        assert math.isfinite(res.t_conj)
        assert abs(res.t_conj - limit) < 0.2
    assert first_conjugate_time(Covector(0.0, 0.0, 1.0, 0.0)).t_conj == math.inf


def test_continuity_at_infinite_values():
    # k -> 1 along C1: t_conj grows beyond any cap
    lam = from_elliptic(EllipticCoord(Stratum.C1, 0.1, 1.0 - 1e-10, 1.0, 0.0))
    assert first_conjugate_time(lam).t_conj == math.inf
    prev = 0.0
    for k in (0.97, 0.99, 0.997):
        lam = from_elliptic(EllipticCoord(Stratum.C1, 0.1, k, 1.0, 0.0))
        t = first_conjugate_time(lam).t_conj
        assert t > prev
        prev = t


# ---------------------------------------------------------------------------
# two-sided bounds
# ---------------------------------------------------------------------------

def test_two_sided_flags(rng):
    for _ in range(8):
        lam = random_c1(rng, k_range=(0.15, 0.9)) if rng.random() < 0.5 \
            else random_c2(rng, k_range=(0.35, 0.85))
        lower, upper, tc, tm, ub = two_sided_check(lam)
        assert lower and upper
        assert tm <= tc + 1e-6
        assert tc <= ub + 1e-6


def test_two_sided_equality_case():
    k = 0.6
    tm = 2.0 * k * mx.p1_V(k, Stratum.C2)
    phi = 2.0 * k * complete_K(k) - tm / 2.0
    lam = from_elliptic(EllipticCoord(Stratum.C2, phi, k, 1.0, 0.0))
    lower, upper, tc, tm2, _ = two_sided_check(lam)
    assert lower and upper
    assert tc == pytest.approx(tm2, abs=1e-6)


def test_two_sided_dilation_invariance(rng):
    lam = random_c1(rng, k_range=(0.3, 0.7))
    flags = two_sided_check(lam)[:2]
    lam2, _ = dilate_covector(lam, 0.5)
    assert two_sided_check(lam2)[:2] == flags


def test_two_sided_rejects_special_strata():
    with pytest.raises(StratumError):
        two_sided_check(Covector(0.0, 2.0, 0.0, 0.0))


# ---------------------------------------------------------------------------
# variational cross-checks
# ---------------------------------------------------------------------------

def test_j0_delta2_proportional_to_j1(rng):
    """J0(t) * Delta^2 / J1(t) is constant along an extremal (the smooth
    factor linking the variational and factored Jacobians); records the
    empirically fitted constant."""
    for stratum in (Stratum.C1, Stratum.C2):
        lam = random_c1(rng, k_range=(0.3, 0.7)) if stratum is Stratum.C1 \
            else random_c2(rng, k_range=(0.45, 0.8))
        ec = to_elliptic(lam)
        tm = mx.t_max1(lam).t_max
        jp = JacobianPath(lam, 0.9 * tm)
        ratios = []
        for t in np.linspace(0.4 * tm, 0.88 * tm, 9):
            f = j1_factors(ec, float(t))
            ratios.append(jp(float(t)) * f.Delta ** 2 / f.J1)
        ratios = np.array(ratios)
        assert np.max(np.abs(ratios / ratios[0] - 1.0)) < 1e-6
        # the factored form absorbs a nonzero constant; only its sign and
        # constancy matter for zero-finding
        assert (ratios[0] < 0) == (stratum is Stratum.C1)


def test_first_zero_matches_variational(rng):
    for _ in range(3):
        lam = random_c1(rng, k_range=(0.25, 0.8)) if rng.random() < 0.5 \
            else random_c2(rng, k_range=(0.45, 0.8))
        res = first_conjugate_time(lam)
        jp = JacobianPath(lam, 1.05 * res.t_conj)
        ts = np.linspace(0.4 * res.t_conj, 1.05 * res.t_conj, 400)
        vals = jp.values(ts)
        sign = np.sign(vals)
        flips = np.nonzero(sign[:-1] * sign[1:] < 0)[0]
        assert len(flips) > 0
        from scipy.optimize import brentq
        t_var = brentq(jp, float(ts[flips[0]]), float(ts[flips[0] + 1]), xtol=1e-12)
        assert t_var == pytest.approx(res.t_conj, abs=1e-5)


def test_horizon_below_first_zero_gives_infinity():
    lam = from_elliptic(EllipticCoord(Stratum.C1, 0.37, 0.5, 1.0, 0.4))
    full = first_conjugate_time(lam)
    capped = first_conjugate_time(lam, t_cap=0.5 * full.t_max)
    assert capped.t_conj == math.inf
    assert capped.t_max == pytest.approx(full.t_max)
    with pytest.raises(ValueError):
        first_conjugate_time(lam, t_cap=-1.0)


def test_c6_chart_degeneracy():
    """At alpha = 0 the beta-direction acts trivially, so the variational
    Jacobian vanishes identically; the exact C6 dispatch exists because of
    this chart singularity."""
    lam = Covector(0.2, 1.5, 0.0, 0.0)
    jp = JacobianPath(lam, 5.0)
    assert np.max(np.abs(jp.values(np.linspace(0.5, 5.0, 20)))) < 1e-20


def test_cross_validation_low_k_c2(rng):
    # the noise-guarded float64 region just above the mp switchover
    for k in (0.22, 0.27):
        period = 2.0 * k * complete_K(k)
        lam = from_elliptic(EllipticCoord(Stratum.C2, 0.3 * period, k, 1.0, 0.8))
        res = first_conjugate_time(lam, cross_validate=True)
        assert res.method == "analytic+variational"
        assert res.t_conj >= res.t_max - 1e-6


def test_mp_path_c2_small_k():
    lam = from_elliptic(EllipticCoord(Stratum.C2, 0.05, 0.12, 1.0, 0.0))
    res = first_conjugate_time(lam)
    assert res.finite
    assert 0.0 <= res.t_conj - res.t_max < 1e-3
