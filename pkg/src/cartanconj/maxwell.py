"""First Maxwell time: the functions fz, fv, their first roots, and t_max1.

Symmetric geodesics meet again when one of two conditions holds; in the
half-arc variable p these are the zeros of fz (the z-coordinate family)
and fv (the (v, w) family).  The first Maxwell time is

    C1:  t = (2/sqrt(alpha)) min(p1z(k), p1v(k)),   p1z in (K, 3K), p1v in [2K, 4K)
    C2:  t = (2k/sqrt(alpha)) p1v(k),               p1v in (K, 2K)
    C6:  t = (4/|c|) p1v0,                          p1v0 in (pi/2, pi)
    C3, C4, C5, C7:  +inf

fv0 is stored as the unscaled trigonometric numerator (a conventional
1/512 normalization drops out of the root).

Every kernel returns (value, magnitude) where magnitude is the sum of the
absolute values of the summed monomials: eps * magnitude bounds the
float64 cancellation noise, which downstream sign logic uses.  All kernels
run unchanged on numpy arrays and on mpmath scalars; rational constants
are written as integer multiply/divide so the mp path keeps full
precision.  For small moduli the C2 functions are evaluated under mpmath,
since their values are suppressed by k**3 (fz) and k**8 (fv) against O(1)
monomials and float64 would return noise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import mpmath
import numpy as np
from scipy.optimize import brentq

from .config import DEFAULT, Tolerances
from .elliptic import (_kval, am_mp, complete_E, complete_K, incomplete_E,
                       incomplete_F, jacobi_arrays, jacobi_mp)
from .errors import NumericalError, StratumError
from .flow import Covector, Stratum, classify, to_elliptic

_EPS = 2.220446049250313e-16
# modulus this close to 1 means the period diverges: report +inf times
K_ONE_CUTOFF = 1.0 - 1e-9


# ---------------------------------------------------------------------------
# kernels over precomputed elliptic ingredients (numpy arrays or mpf scalars)
# ---------------------------------------------------------------------------

def _sum_terms(terms):
    val = terms[0]
    mag = abs(terms[0])
    for t in terms[1:]:
        val = val + t
        mag = mag + abs(t)
    return val, mag


def fz_c1_kernel(p, k2, sn, cn, dn, e2):
    return _sum_terms([sn * dn, -e2 * cn])


def fv_c1_kernel(p, k2, sn, cn, dn, e2):
    inner, m_inner = _sum_terms([
        -p,
        -2 * (1 - 2 * k2 + 6 * k2 * cn * cn) * e2,
        e2 ** 3,
        8 * k2 * cn * sn * dn,
    ])
    lead = 4 * sn * dn
    tail = 4 * cn * (1 - 2 * k2 * sn * sn) * e2 * e2
    val = (lead * inner) / 3 + tail
    mag = (abs(lead) * m_inner) / 3 + abs(tail)
    return val, mag


def a01_c1_kernel(p, k2, sn, cn, dn, e2):
    sn2 = sn * sn
    A, mA = _sum_terms([
        -3 * e2 * e2,
        4 * e2 * p,
        -8 * e2 * k2 * p,
        -p * p,
        -8 * k2 * sn2,
        6 * k2 * e2 * e2 * sn2,
        8 * k2 * e2 * (2 * k2 - 1) * p * sn2,
        2 * k2 * p * p * sn2,
        8 * k2 * k2 * sn2 * sn2,
    ])
    B, mB = _sum_terms([
        -e2 ** 3,
        -2 * p,
        (2 - 4 * k2) * e2 * e2 * p,
        8 * k2 * p,
        8 * k2 * (1 - 2 * k2) * p * sn2,
        2 * e2,
        -e2 * p * p,
        8 * k2 * e2,
        -12 * k2 * e2 * sn2,
    ])
    val = (3 * (cn * A + dn * sn * B)) / 4
    mag = (3 * (abs(cn) * mA + abs(dn * sn) * mB)) / 4
    return val, mag


def a21_c1_kernel(p, k2, sn, cn, dn, e2):
    k4 = k2 * k2
    sn2 = sn * sn
    C, mC = _sum_terms([
        -e2 ** 5,
        (2 - 4 * k2) * e2 ** 4 * p,
        -(9 - 64 * k2 + 64 * k4) * e2 * e2 * p,
        p ** 3,
        (8 - 16 * k2) * e2 ** 3,
        -e2 ** 3 * p * p,
    ])
    D, mD = _sum_terms([
        -4 * e2 * e2,
        5 * e2 ** 4,
        48 * k2 * e2 * e2,
        2 * e2 * p,
        -8 * e2 ** 3 * p,
        -96 * k2 * e2 * p,
        16 * k2 * e2 ** 3 * p,
        128 * k4 * e2 * p,
        2 * p * p,
        3 * e2 * e2 * p * p,
    ])
    G, mG = _sum_terms([5 * e2, -2 * p, 4 * k2 * p])
    H, mH = _sum_terms([-12, 10 * e2 * e2, 8 * e2 * (2 * k2 - 1) * p, p * p])
    asn = abs(sn)
    val = -(k2 * (cn * C + dn * sn * D - 16 * k2 * cn * G * sn2
                  - 4 * k2 * dn * H * sn2 * sn + 16 * k4 * cn * G * sn2 * sn2
                  - 48 * k4 * dn * sn2 * sn2 * sn))
    mag = k2 * (abs(cn) * mC + abs(dn) * asn * mD + 16 * k2 * abs(cn) * mG * sn2
                + 4 * k2 * abs(dn) * mH * sn2 * asn + 16 * k4 * abs(cn) * mG * sn2 * sn2
                + 48 * k4 * abs(dn) * sn2 * sn2 * asn)
    return val, mag


def fz_c2_kernel(k, k2, F, E, sinu, cosu, dnu):
    val, mag = _sum_terms([
        (2 - k2) * F * dnu,
        -2 * E * dnu,
        k2 * cosu * sinu,
    ])
    return (2 * val) / k, (2 * mag) / k


def fv_c2_kernel(k, k2, F, E, sinu, cosu, dnu):
    k4 = k2 * k2
    D = 2 * E - (2 - k2) * F
    Dmag = 2 * abs(E) + (2 - k2) * abs(F)
    br, m_br = _sum_terms([
        8 * E ** 3,
        -4 * E * (4 + k2),
        -12 * E * E * (2 - k2) * F,
        6 * E * (2 - k2) ** 2 * F * F,
        16 * F,
        -4 * k2 * F,
        -3 * k4 * F,
        -(2 - k2) ** 3 * F ** 3,
    ])
    s2 = sinu * sinu
    terms = [
        3 * dnu * D * D,
        cosu * sinu * br,
        8 * k2 * dnu * s2,
        -6 * dnu * D * D * s2,
        12 * k2 * cosu * D * sinu * s2,
        -8 * k2 * s2 * s2 * dnu,
    ]
    mags = [
        3 * dnu * 2 * abs(D) * Dmag,
        abs(cosu * sinu) * m_br,
        8 * k2 * dnu * s2,
        6 * dnu * 2 * abs(D) * Dmag * s2,
        12 * k2 * abs(cosu * sinu) * Dmag * s2,
        8 * k2 * s2 * s2 * dnu,
    ]
    val = terms[0]
    for t in terms[1:]:
        val = val + t
    mag = mags[0]
    for t in mags[1:]:
        mag = mag + t
    return (4 * val) / 3, (4 * mag) / 3


def fv0_kernel(u):
    """Unscaled numerator whose first positive root is p1v0."""
    return (32 * u * u - 1) * np.cos(2 * u) - 8 * u * np.sin(2 * u) + np.cos(6 * u)


# ---------------------------------------------------------------------------
# ingredient providers
# ---------------------------------------------------------------------------

def c1_ingredients(p, k):
    k = _kval(k)
    sn, cn, dn, _, eps = jacobi_arrays(p, k)
    return k * k, sn, cn, dn, 2.0 * eps - np.asarray(p, dtype=float)


def c1_ingredients_mp(p, k):
    k = mpmath.mpf(k)
    p = mpmath.mpf(p)
    sn, cn, dn, _, eps = jacobi_mp(p, k)
    return k * k, sn, cn, dn, 2 * eps - p


def c2_ingredients_from_p(p, k):
    """(F, E, sin u1, cos u1, dn u1) with u1 = am(p, k), so F(u1) = p."""
    k = _kval(k)
    sn, cn, dn, _, eps = jacobi_arrays(p, k)
    return np.asarray(p, dtype=float), eps, sn, cn, dn


def c2_ingredients_from_p_mp(p, k):
    k = mpmath.mpf(k)
    p = mpmath.mpf(p)
    sn, cn, dn, _, eps = jacobi_mp(p, k)
    return p, eps, sn, cn, dn


def c2_ingredients_from_u1(u1, k):
    k = _kval(k)
    u1 = np.asarray(u1, dtype=float)
    F = incomplete_F(u1, k)
    E = incomplete_E(u1, k)
    s = np.sin(u1)
    return F, E, s, np.cos(u1), np.sqrt(1.0 - (k * s) ** 2)


# ---------------------------------------------------------------------------
# public function surface
# ---------------------------------------------------------------------------

def f_z_C1(p, k):
    k = _kval(k)
    k2, sn, cn, dn, e2 = c1_ingredients(p, k)
    return fz_c1_kernel(np.asarray(p, dtype=float), k2, sn, cn, dn, e2)[0]


def f_V_C1(p, k):
    k = _kval(k)
    k2, sn, cn, dn, e2 = c1_ingredients(p, k)
    return fv_c1_kernel(np.asarray(p, dtype=float), k2, sn, cn, dn, e2)[0]


def f_z_C2(u1, k):
    k = _kval(k)
    F, E, s, c, d = c2_ingredients_from_u1(u1, k)
    return fz_c2_kernel(k, k * k, F, E, s, c, d)[0]


def f_V_C2(u1, k):
    """Evaluated from the u1-form; never by substitution into the C1 form."""
    k = _kval(k)
    F, E, s, c, d = c2_ingredients_from_u1(u1, k)
    return fv_c2_kernel(k, k * k, F, E, s, c, d)[0]


def f_V0(u1):
    return fv0_kernel(np.asarray(u1, dtype=float))


# ---------------------------------------------------------------------------
# first positive roots
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RootInfo:
    root: float
    bracket: tuple
    residual: float


def _first_root(f, lo, hi, panels, xtol) -> RootInfo:
    """First sign change of f on (lo, hi), refined by Brent.

    Where |f| dips by orders of magnitude inside one panel without a sign
    change at its ends, the panel is rescanned finely: near-tangential root
    pairs (fv develops one near the lower critical modulus) would otherwise
    be skipped and the first root misreported.
    """
    ps = np.linspace(lo, hi, panels + 1)
    vals = np.array([f(p) for p in ps])

    def refine(a, b):
        root = brentq(f, a, b, xtol=xtol, rtol=4 * _EPS)
        return RootInfo(float(root), (float(a), float(b)), abs(float(f(root))))

    sign = np.sign(vals)
    hits = np.nonzero((sign[:-1] * sign[1:]) < 0)[0]
    first_flip = hits[0] if len(hits) else len(ps)
    absv = np.abs(vals)
    scale = np.maximum.accumulate(absv)
    dips = [j for j in np.nonzero((absv[1:-1] < 1e-2 * scale[1:-1])
                                  & (absv[1:-1] <= absv[:-2])
                                  & (absv[1:-1] <= absv[2:]))[0]
            if j < first_flip]
    for j in dips:
        fine = np.linspace(ps[j], ps[min(j + 2, len(ps) - 1)], 257)
        fvals = np.array([f(p) for p in fine])
        fs = np.sign(fvals)
        ff = np.nonzero(fs[:-1] * fs[1:] < 0)[0]
        if len(ff):
            return refine(fine[ff[0]], fine[ff[0] + 1])
    if len(hits) == 0:
        exact = np.nonzero(vals == 0.0)[0]
        if len(exact):
            p0 = float(ps[exact[0]])
            return RootInfo(p0, (p0 - xtol, p0 + xtol), 0.0)
        raise NumericalError(
            f"no sign change of {getattr(f, '__name__', 'f')} in ({lo:g}, {hi:g})")
    i = hits[0]
    return refine(ps[i], ps[i + 1])


def _polish_root_mp(fmp, info: RootInfo, xtol: float, dx: float = 1e-3) -> RootInfo:
    """Re-locate a float64 root under mpmath.

    Needed where the target function is nearly degenerate: fz has a cubic
    root at p = 2K when 2E(k) = K(k) and fv develops a double root at the
    lower critical modulus, so float64 noise shifts the located root by up
    to (noise)**(1/3).  The mp bracket is kept narrow so it contains only
    the intended root.  If the bracket shows no sign change, the root is a
    tangency: its location is taken as the interior minimum of |f|.
    """
    from scipy.optimize import minimize_scalar
    with mpmath.workdps(40):
        a, b = info.root - dx, info.root + dx
        fa, fb = fmp(a), fmp(b)
        if fa == 0.0 or fb == 0.0:
            return info
        if fa * fb < 0.0:
            root = brentq(fmp, a, b, xtol=xtol, rtol=4 * _EPS)
            return RootInfo(float(root), (a, b), abs(fmp(float(root))))
        res = minimize_scalar(lambda p: abs(fmp(p)), bounds=(a, b),
                              method="bounded", options={"xatol": xtol})
        if res.fun < 1e-4 * max(abs(fa), abs(fb)):
            return RootInfo(float(res.x), (a, b), float(res.fun))
        return info


def _fz_c1_mp(p, k):
    k2, sn, cn, dn, e2 = c1_ingredients_mp(p, k)
    return float(fz_c1_kernel(mpmath.mpf(p), k2, sn, cn, dn, e2)[0])


def _fv_c1_mp(p, k):
    k2, sn, cn, dn, e2 = c1_ingredients_mp(p, k)
    return float(fv_c1_kernel(mpmath.mpf(p), k2, sn, cn, dn, e2)[0])


@lru_cache(maxsize=4096)
def _p1_z_cached(k: float, panels: int, xtol: float) -> RootInfo:
    K = complete_K(k)
    def f(p):
        k2, sn, cn, dn, e2 = c1_ingredients(p, k)
        return float(fz_c1_kernel(p, k2, sn, cn, dn, e2)[0])
    info = _first_root(f, 0.02, 3.0 * K - 1e-9, panels, xtol)
    info = _polish_root_mp(lambda p: _fz_c1_mp(p, k), info, xtol)
    if not K < info.root < 3.0 * K:
        raise NumericalError(f"p1z(k={k}) = {info.root} escaped (K, 3K)")
    return info


@lru_cache(maxsize=4096)
def _p1_v_c1_cached(k: float, panels: int, xtol: float) -> RootInfo:
    K = complete_K(k)
    def f(p):
        k2, sn, cn, dn, e2 = c1_ingredients(p, k)
        return float(fv_c1_kernel(p, k2, sn, cn, dn, e2)[0])
    info = _first_root(f, 0.02, 4.0 * K - 1e-9, panels, xtol)
    info = _polish_root_mp(lambda p: _fv_c1_mp(p, k), info, xtol)
    if not 2.0 * K - 1e-6 <= info.root < 4.0 * K:
        raise NumericalError(f"p1v(k={k}) = {info.root} escaped [2K, 4K)")
    return info


@lru_cache(maxsize=4096)
def _p1_v_c2_cached(k: float, panels: int, xtol: float, mp_k: float, dps: int) -> RootInfo:
    K = complete_K(k)
    if k < mp_k:
        with mpmath.workdps(dps):
            def f(p):
                km = mpmath.mpf(k)
                F, E, s, c, d = c2_ingredients_from_p_mp(p, km)
                return float(fv_c2_kernel(km, km * km, F, E, s, c, d)[0])
            info = _first_root(f, 1e-3, 2.0 * K - 1e-9, panels, xtol)
    else:
        def f(p):
            F, E, s, c, d = c2_ingredients_from_p(p, k)
            return float(fv_c2_kernel(k, k * k, F, E, s, c, d)[0])
        def fmp(p):
            km = mpmath.mpf(k)
            F, E, s, c, d = c2_ingredients_from_p_mp(p, km)
            return float(fv_c2_kernel(km, km * km, F, E, s, c, d)[0])
        info = _first_root(f, 0.02, 2.0 * K - 1e-9, panels, xtol)
        info = _polish_root_mp(fmp, info, xtol)
    if not K < info.root < 2.0 * K:
        raise NumericalError(f"p1v_C2(k={k}) = {info.root} escaped (K, 2K)")
    return info


@lru_cache(maxsize=1)
def _p1_v0_cached() -> RootInfo:
    info = _first_root(lambda u: float(fv0_kernel(u)), 0.05, math.pi - 1e-12, 256, 1e-13)
    if not math.pi / 2.0 < info.root < math.pi:
        raise NumericalError(f"p1v0 = {info.root} escaped (pi/2, pi)")
    return info


def p1_z(k, tol: Tolerances = DEFAULT) -> float:
    k = _kval(k)
    if not 0.0 < k < 1.0:
        raise ValueError("p1_z needs k in (0, 1)")
    return _p1_z_cached(k, tol.scan_panels, tol.root_xtol).root


def p1_V(k, stratum, tol: Tolerances = DEFAULT) -> float:
    """First root of fv for the given stratum; k = 0 gives the C6 limit."""
    st = Stratum(stratum) if not isinstance(stratum, Stratum) else stratum
    k = _kval(k)
    if k == 0.0:
        if st is not Stratum.C2:
            raise StratumError("k = 0 is the C6 limit of the C2 family only")
        return _p1_v0_cached().root
    if not 0.0 < k < 1.0:
        raise ValueError("p1_V needs k in [0, 1)")
    if st is Stratum.C1:
        return _p1_v_c1_cached(k, tol.scan_panels, tol.root_xtol).root
    if st is Stratum.C2:
        return _p1_v_c2_cached(k, tol.scan_panels, tol.root_xtol,
                               tol.maxwell_mp_k, tol.mp_dps).root
    raise StratumError(f"p1_V is defined on C1/C2, not {st}")


def p1_V0() -> float:
    return _p1_v0_cached().root


def u_v1(k, tol: Tolerances = DEFAULT) -> float:
    """Amplitude of the first C2 root: u_v1 = am(p1v, k)."""
    k = _kval(k)
    p = p1_V(k, Stratum.C2, tol)
    if k < tol.maxwell_mp_k:
        with mpmath.workdps(tol.mp_dps):
            return float(am_mp(p, k))
    return float(jacobi_arrays(p, k)[3])


@lru_cache(maxsize=8)
def _critical_moduli_cached(panels: int, xtol: float):
    # p1z(k) = p1v(k) exactly when fz and fv share their first root, i.e.
    # when fv vanishes at p1z(k); that formulation stays smooth through the
    # steep region where the first fv root emerges from a tangential pair.
    def shared(k):
        p = _p1_z_cached(k, panels, xtol).root
        k2, sn, cn, dn, e2 = c1_ingredients(p, k)
        return float(fv_c1_kernel(p, k2, sn, cn, dn, e2)[0])
    ks = np.linspace(0.02, 0.98, 121)
    vals = np.array([shared(k) for k in ks])
    sign = np.sign(vals)
    hits = np.nonzero(sign[:-1] * sign[1:] < 0)[0]
    if len(hits) != 2:
        raise NumericalError(f"expected 2 critical moduli, found {len(hits)}")
    roots = [brentq(shared, float(ks[i]), float(ks[i + 1]), xtol=1e-12) for i in hits]
    k1, k0 = sorted(float(r) for r in roots)

    # Report each modulus a hair below its true value.  min(p1z, p1v) is
    # attained by the nondegenerate branch on that side (pz simple at k1,
    # pv simple at k0); on the other side a cube-root (k0) or square-root
    # (k1) branch blows a ~1e-12 modulus error up to ~1e-4 in the root.
    def below_k1(k):
        return _polished_shared_sign(k, panels, xtol) < 0.0
    while not below_k1(k1):
        k1 = float(np.nextafter(k1, 0.0))
    def below_k0(k):
        return 2.0 * complete_E(k) - complete_K(k) > 0.0
    while not below_k0(k0):
        k0 = float(np.nextafter(k0, 0.0))
    # a few extra ulps of margin: reconstructing k from a covector built at
    # the critical modulus may round it back up across the crossing
    for _ in range(4):
        k1 = float(np.nextafter(k1, 0.0))
        k0 = float(np.nextafter(k0, 0.0))
    return k1, k0


def _polished_shared_sign(k, panels, xtol):
    """fv at the first fz root, evaluated fully under mpmath."""
    with mpmath.workdps(40):
        pz = _p1_z_cached(k, panels, xtol).root
        pz = brentq(lambda p: _fz_c1_mp(p, k), pz - 1e-3, pz + 1e-3,
                    xtol=1e-14, rtol=4 * _EPS)
        return _fv_c1_mp(float(pz), k)


def critical_moduli(tol: Tolerances = DEFAULT):
    """The two moduli (k1, k0) with p1z(k) = p1v(k), k1 < k0."""
    return _critical_moduli_cached(tol.scan_panels, tol.root_xtol)


# ---------------------------------------------------------------------------
# the first Maxwell time
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MaxwellResult:
    t_max: float                # may be +inf
    root_p: float | None
    bracket: tuple | None
    residual: float
    stratum: Stratum


def t_max1(lam: Covector, tol: Tolerances = DEFAULT) -> MaxwellResult:
    st = classify(lam)
    if st in (Stratum.C3, Stratum.C4, Stratum.C5, Stratum.C7):
        return MaxwellResult(math.inf, None, None, 0.0, st)
    if st is Stratum.C6:
        info = _p1_v0_cached()
        return MaxwellResult(4.0 / abs(lam.c) * info.root, info.root,
                             info.bracket, info.residual, st)
    ec = to_elliptic(lam)
    sa = math.sqrt(ec.alpha)
    if ec.k > K_ONE_CUTOFF:
        return MaxwellResult(math.inf, None, None, 0.0, st)
    if st is Stratum.C1:
        iz = _p1_z_cached(ec.k, tol.scan_panels, tol.root_xtol)
        iv = _p1_v_c1_cached(ec.k, tol.scan_panels, tol.root_xtol)
        info = iz if iz.root <= iv.root else iv
        return MaxwellResult(2.0 / sa * info.root, info.root,
                             info.bracket, info.residual, st)
    info = _p1_v_c2_cached(ec.k, tol.scan_panels, tol.root_xtol,
                           tol.maxwell_mp_k, tol.mp_dps)
    return MaxwellResult(2.0 * ec.k / sa * info.root, info.root,
                         info.bracket, info.residual, st)
