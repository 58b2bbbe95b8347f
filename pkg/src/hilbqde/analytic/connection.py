"""Gluing factors, solutions at q = -1, monodromy, intertwiners and scattering.

Conventions
-----------
* Monodromy ``X`` of a loop is the transport of the identity around it, so a
  fundamental solution continues as ``Phi -> Phi X``.
* Powers ``q^s`` on a ray use the principal argument of the ray.  The
  factor ``q^{-c}`` inside G_DT is read as ``(-q)^{-c}`` by default, so it is
  1 at q = -1; the branches ``log(-1) = +i pi`` and ``-i pi`` are available
  through ``branch``.
* Parameters are exact rationals (strings such as ``"0.31"`` are parsed
  exactly), which keeps the series recursion and the M_D entries exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import mpmath
from mpmath import mp

from ..algebra import LaurentPoly
from ..operators import root_angle, root_value, singular_roots
from ..partitions import (Partition, content_sum_numeric, enumerate_partitions,
                          tangent_weight_pairs, transpose)
from ..fock import kt_weight_numeric
from ..series import frobenius_specialized
from ..symfun import haiman_matrix_numeric
from .gamma import gamma, rgamma
from .transport import GUARD_BITS, PathSpec, system

LOOP_RATIO = 0.3
POLYGON_SIDES = 16
INFINITY_RADIUS = 2


class ExcludedParameter(ValueError):
    pass


class FitResidualTooLarge(ArithmeticError):
    pass


def rational(x) -> Fraction:
    """Exact rational from an int, Fraction, decimal string or float."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        return Fraction(repr(x))
    return Fraction(x)


def _mp(x: Fraction):
    return mpmath.mpf(x.numerator) / x.denominator


def _diag(values) -> mpmath.matrix:
    m = mpmath.matrix(len(values), len(values))
    for i, v in enumerate(values):
        m[i, i] = v
    return m


def _weights(lam, s1, s2):
    out = []
    for w1, w2 in tangent_weight_pairs(lam):
        for c1, c2 in (w1, w2):
            out.append(c1 * s1 + c2 * s2)
    return out


def _content_coeffs(lam) -> tuple[int, int]:
    lam = Partition(lam)
    return (sum(j - 1 for i, j in lam.boxes()), sum(i - 1 for i, j in lam.boxes()))


# -- gluing matrices ----------------------------------------------------------


def g_factor(x: int, t):
    """x^{t x} / Gamma(t x)."""
    t = mpmath.mpmathify(t)
    return mpmath.exp(t * x * mpmath.log(x)) * rgamma(t * x)


def gw_gluing(n: int, s1, s2, prec: int = 256) -> list:
    """Eigenvalues of G_GW on the partition basis."""
    with mp.workprec(prec + GUARD_BITS):
        t1v, t2v = _mp(rational(s1)), _mp(rational(s2))
        out = []
        for mu in enumerate_partitions(n):
            v = mpmath.mpf(1)
            for m in mu:
                v *= g_factor(m, t1v) * g_factor(m, t2v)
            out.append(v)
        return out


def gamma_op(n: int, s1, s2, prec: int = 256) -> list:
    """Eigenvalues of the Gamma-operator: (2 pi i)^l / prod(mu_i) times G_GW."""
    with mp.workprec(prec + GUARD_BITS):
        gw = gw_gluing(n, s1, s2, prec)
        out = []
        for mu, g in zip(enumerate_partitions(n), gw):
            out.append((2j * mp.pi) ** len(mu) / math.prod(mu) * g)
        return out


def dt_gamma_part(lam, s1, s2, prec: int = 256):
    """prod over tangent weights of 1 / Gamma(w + 1)."""
    return _dt_gamma_part(Partition(lam), rational(s1), rational(s2), prec)


@lru_cache(maxsize=1024)
def _dt_gamma_part(lam, s1, s2, prec):
    with mp.workprec(prec + GUARD_BITS):
        v = mpmath.mpf(1)
        for w in _weights(lam, _mp(s1), _mp(s2)):
            v *= rgamma(w + 1)
        return v


BRANCHES = ("-q", "+pi", "-pi")


def _log_q(q, branch: str):
    q = mpmath.mpc(q)
    if branch == "-q":
        return mpmath.log(-q)
    if branch == "+pi":
        return mpmath.log(q)
    if branch == "-pi":
        v = mpmath.log(q)
        return mpmath.mpc(v.real, -mp.pi) if mpmath.im(q) == 0 and mpmath.re(q) < 0 else v
    raise ValueError(f"unknown branch {branch!r}, expected one of {BRANCHES}")


def dt_gluing(n: int, s1, s2, q, prec: int = 256, branch: str = "-q") -> list:
    """Eigenvalues of G_DT at q.

    ``branch`` selects how q^{-c} is formed: ``"-q"`` uses (-q)^{-c} with the
    principal log, ``"+pi"`` the principal log of q (log(-1) = i pi) and
    ``"-pi"`` the same with log(-1) = -i pi.
    """
    with mp.workprec(prec + GUARD_BITS):
        s1, s2 = rational(s1), rational(s2)
        logq = _log_q(q, branch)
        out = []
        for lam in enumerate_partitions(n):
            c = content_sum_numeric(lam, _mp(s1), _mp(s2))
            out.append(mpmath.exp(-c * logq) * dt_gamma_part(lam, s1, s2, prec))
        return out


# -- solutions ----------------------------------------------------------------


def _series_columns(n, s1, s2, order):
    return _series_columns_at(n, s1, s2, order, mp.prec)


@lru_cache(maxsize=128)
def _series_columns_at(n, s1, s2, order, _prec):
    cols = []
    for lam in enumerate_partitions(n):
        us = frobenius_specialized(lam, order, s1, s2)
        cols.append([[_mp(x) for x in u] for u in us])
    return cols


def _eval_series(col, q):
    d = len(col[0])
    out = [mpmath.mpc(0)] * d
    for u in reversed(col):
        out = [a * q + b for a, b in zip(out, u)]
    return out


def _eval_series_derivative(col, q):
    d = len(col[0])
    out = [mpmath.mpc(0)] * d
    for k in range(len(col) - 1, 0, -1):
        out = [a * q + k * b for a, b in zip(out, col[k])]
    return out


def _start_radius(cols, order, tol):
    """Largest r <= 1/2 at which the truncated series are trusted to ``tol``."""
    r = mpmath.mpf(1) / 2
    for col in cols:
        a0 = max(abs(x) for x in col[0])
        tail = max(max(abs(x) for x in col[-1]), max(abs(x) for x in col[-2]) if order > 1 else 0)
        if tail == 0:
            continue
        r = min(r, (tol * a0 / tail) ** (mpmath.mpf(1) / (order - 1)))
    return r


def y_matrix(n: int, s1, s2, q, order: int = 30, prec: int = 256) -> mpmath.matrix:
    """Matrix with columns Y^lam(q), continued from q = 0 along the ray through q.

    The order-``order`` series is summed close to 0, where its tail is below
    the working precision, and the solution Y q^{-c} is transported out.
    """
    s1, s2 = rational(s1), rational(s2)
    basis = enumerate_partitions(n)
    with mp.workprec(prec + GUARD_BITS):
        q = mpmath.mpc(q)
        if q == 0:
            raise ValueError("q = 0 is the base of the series, use the coefficients")
        arg = mpmath.arg(q)
        cs = [content_sum_numeric(lam, _mp(s1), _mp(s2)) for lam in basis]
        cols = _series_columns(n, s1, s2, order)
        tol = mpmath.ldexp(1, -prec - 8)
        r = min(_start_radius(cols, order, tol), abs(q))
        qs = r * mpmath.expj(arg)
        d = len(basis)
        psi = mpmath.matrix(d, d)
        for j, col in enumerate(cols):
            vals = _eval_series(col, qs)
            scale = mpmath.exp(-cs[j] * (mpmath.log(r) + 1j * arg))
            for i in range(d):
                psi[i, j] = vals[i] * scale
        if r < abs(q):
            psi = system(n, s1, s2, prec).transport([qs, q], initial=psi)
        for j in range(d):
            scale = mpmath.exp(cs[j] * (mpmath.log(abs(q)) + 1j * arg))
            for i in range(d):
                psi[i, j] *= scale
        return psi


def fundamental_solution(n: int, s1, s2, q, prec: int = 256) -> mpmath.matrix:
    """Phi(q) with Phi(-1) = 1, continued along the segment from -1."""
    return system(n, rational(s1), rational(s2), prec).transport([-1, q])


# -- monodromy ------------------------------------------------------------------


def _signed_angle(d: int, j: int) -> float:
    a = float(root_angle(d, j)) * 2 * math.pi
    return a - 2 * math.pi if a > math.pi else a


def _finite_points(n: int) -> list:
    return [mpmath.mpc(0)] + [root_value(d, j) for d, j in singular_roots(n)]


def _polygon(center, start, clockwise=False, sides=POLYGON_SIDES):
    r = abs(start - center)
    alpha = mpmath.arg(start - center)
    sgn = -1 if clockwise else 1
    return [center + r * mpmath.expj(alpha + sgn * 2 * mp.pi * k / sides) for k in range(sides + 1)]


def _detour_height(n: int) -> float:
    pos = [_signed_angle(d, j) for d, j in singular_roots(n) if _signed_angle(d, j) > 1e-12]
    return math.tan(min(pos) / 4) if pos else 0.5


def _loop_radius(n: int, center) -> mpmath.mpf:
    others = [p for p in _finite_points(n) if abs(p - center) > 1e-30]
    return LOOP_RATIO * min(abs(p - center) for p in others) if others else mpmath.mpf(LOOP_RATIO)


def loop_label(target) -> str:
    if target in ("zero", "infinity"):
        return target
    d, j = target
    return f"root:{d},{j}"


def loop_path(n: int, target) -> tuple[PathSpec, float]:
    """Loop based at -1 around ``target`` and its departure angle at -1.

    ``target`` is "zero", "infinity" or a root label (d, j).  Loops around
    finite points are counterclockwise; the loop around infinity is a large
    clockwise circle.  Connectors leave -1 in distinct directions and do not
    cross, so the loops ordered by departure angle compose to the identity.
    """
    with mp.workprec(128):
        singular = _finite_points(n)
        h = _detour_height(n)
        if target == "zero":
            r0 = min(mpmath.mpf(LOOP_RATIO), mpmath.mpf(h) / (2 * mpmath.sqrt(1 + h * h)))
            start = mpmath.mpc(-r0)
            pts = [mpmath.mpc(-1), start] + _polygon(mpmath.mpc(0), start)[1:] + [mpmath.mpc(-1)]
            angle = 0.0
        elif target == "infinity":
            start = mpmath.mpc(-INFINITY_RADIUS)
            pts = [mpmath.mpc(-1), start] + _polygon(mpmath.mpc(0), start, clockwise=True)[1:] + [mpmath.mpc(-1)]
            angle = math.pi
        else:
            d, j = target
            zeta = root_value(d, j)
            r = _loop_radius(n, zeta)
            if abs(zeta - 1) < 1e-20:
                via = [mpmath.mpc(0, h)]
                angle = math.atan(h)
            else:
                via = []
                angle = _signed_angle(d, j) / 2
            last = via[-1] if via else mpmath.mpc(-1)
            u = (zeta - last) / abs(zeta - last)
            start = zeta - r * u
            conn = [mpmath.mpc(-1)] + via + [start]
            pts = conn + _polygon(zeta, start)[1:] + conn[::-1][1:]
        gaps = [abs(a - b) for a in singular for b in singular if a != b]
        clearance = mpmath.mpf(LOOP_RATIO) * min(gaps, default=1) / 4
        return PathSpec(pts, clearance, singular), angle


def monodromy(n: int, s1, s2, target, prec: int = 256) -> mpmath.matrix:
    """Transport of the identity around the standard loop for ``target``."""
    return _monodromy(n, rational(s1), rational(s2), target, prec).copy()


@lru_cache(maxsize=256)
def _monodromy(n, s1, s2, target, prec):
    path, _ = loop_path(n, target)
    return system(n, s1, s2, prec).transport(path)


def all_targets(n: int) -> list:
    return ["zero"] + list(singular_roots(n)) + ["infinity"]


def monodromy_all(n: int, s1, s2, prec: int = 256) -> dict:
    return {loop_label(t): monodromy(n, s1, s2, t, prec) for t in all_targets(n)}


def product_relation_error(n: int, s1, s2, prec: int = 256, mats: dict | None = None):
    """|| X_inf X_k ... X_1 - 1 || with the finite loops in increasing departure angle."""
    mats = mats or monodromy_all(n, s1, s2, prec)
    finite = [t for t in all_targets(n) if t != "infinity"]
    finite.sort(key=lambda t: loop_path(n, t)[1])
    with mp.workprec(prec + GUARD_BITS):
        prod = mpmath.eye(len(enumerate_partitions(n)))
        for t in finite:
            prod = mats[loop_label(t)] * prod
        prod = mats["infinity"] * prod
        return mpmath.mnorm(prod - mpmath.eye(prod.rows), 1)


def gamma_conjugated(n: int, s1, s2, x: mpmath.matrix, prec: int = 256) -> mpmath.matrix:
    """Gamma^{-1} X Gamma; invariant under t_i -> t_i + 1."""
    g = gamma_op(n, s1, s2, prec)
    with mp.workprec(prec + GUARD_BITS):
        out = mpmath.matrix(x.rows, x.cols)
        for i in range(x.rows):
            for j in range(x.cols):
                out[i, j] = x[i, j] * g[j] / g[i]
        return out


# -- genericity -------------------------------------------------------------------


def check_shift_generic(n: int, s2) -> None:
    """Parameters where nabla(t1, t2) and nabla(t1, t2 - 1) may fail to be isomorphic."""
    s2 = rational(s2)
    for s in range(1, n + 1):
        for r in range(1, s + 1):
            if s2 == Fraction(r, s):
                raise ExcludedParameter(f"t2 = {r}/{s} is excluded for n = {n}")


def check_semisimple_generic(n: int, s1, level: int) -> None:
    s1 = rational(s1)
    for s in range(1, n + 1):
        rs = range(1, level * s) if level > 0 else range(level * s, 1)
        for r in rs:
            if s1 == Fraction(r, s):
                raise ExcludedParameter(f"t1 = {r}/{s} is excluded at level {level}, n = {n}")


def check_connect_generic(n: int, s1, s2) -> None:
    """Domain used for the connection check: positive t's, non-integral level,
    and no integral differences of content sums."""
    s1, s2 = rational(s1), rational(s2)
    if s1 <= 0 or s2 <= 0:
        raise ExcludedParameter("the connection check needs t1, t2 > 0")
    if (s1 + s2).denominator == 1:
        raise ExcludedParameter(f"t1 + t2 = {s1 + s2} is an integer")
    cs = {lam: content_sum_numeric(lam, s1, s2) for lam in enumerate_partitions(n)}
    for lam, a in cs.items():
        for mu, b in cs.items():
            if lam != mu and (a - b).denominator == 1 and a != b:
                raise ExcludedParameter(f"c({lam}) - c({mu}) = {a - b} is an integer (resonance)")


@dataclass
class Genericity:
    ok: bool
    reason: str = ""


def genericity(n: int, s1, s2, context: str) -> Genericity:
    """Status of (t1, t2) for a theorem check: "Tmonodr", "semisimple" or "connect"."""
    try:
        if context == "Tmonodr":
            check_shift_generic(n, s2)
        elif context == "semisimple":
            level = rational(s1) + rational(s2)
            if level.denominator != 1:
                raise ExcludedParameter("the semisimplicity statement needs an integer level")
            check_semisimple_generic(n, s1, int(level))
        elif context == "connect":
            check_connect_generic(n, s1, s2)
        else:
            raise ValueError(f"unknown context {context!r}")
    except ExcludedParameter as exc:
        return Genericity(False, str(exc))
    return Genericity(True)


# -- reports ----------------------------------------------------------------------


@dataclass
class Report:
    name: str
    ok: bool
    max_error: float
    tolerance: float
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"check": self.name, "ok": self.ok, "max_error": self.max_error,
                "tolerance": self.tolerance, "details": self.details}


def _max_rel_entry(a: mpmath.matrix, b: mpmath.matrix):
    """Entrywise relative error, with near-zero reference entries measured
    against the largest reference entry."""
    scale = max(abs(b[i, j]) for i in range(b.rows) for j in range(b.cols))
    worst = mpmath.mpf(0)
    for i in range(b.rows):
        for j in range(b.cols):
            ref = abs(b[i, j])
            den = ref if ref > scale * mpmath.mpf(10) ** -30 else scale
            worst = max(worst, abs(a[i, j] - b[i, j]) / den)
    return worst


def _rel(a, b):
    return mpmath.mnorm(a - b, 1) / mpmath.mnorm(b, 1)


# -- connection theorem -------------------------------------------------------------


def connection_sides(n: int, s1, s2, prec: int = 256, order: int = 30, branch: str = "-q"):
    """(Gamma^{-1} Y G_DT at q = -1, (2 pi i)^{-n} O(1/2) H)."""
    s1, s2 = rational(s1), rational(s2)
    basis = enumerate_partitions(n)
    with mp.workprec(prec + GUARD_BITS):
        y = y_matrix(n, s1, s2, -1, order, prec)
        g = gamma_op(n, s1, s2, prec)
        gdt = dt_gluing(n, s1, s2, -1, prec, branch)
        lhs = _diag([1 / x for x in g]) * y * _diag(gdt)
        h = haiman_matrix_numeric(n, _mp(s1), _mp(s2))
        half = _diag([mpmath.expjpi(-content_sum_numeric(lam, _mp(s1), _mp(s2))) for lam in basis])
        rhs = h * half / (2j * mp.pi) ** n
        return lhs, rhs


def verify_connect(n: int, s1, s2, prec: int = 256, order: int = 30, tol: float = 1e-20,
                   branch: str = "-q") -> Report:
    check_connect_generic(n, s1, s2)
    lhs, rhs = connection_sides(n, s1, s2, prec, order, branch)
    err = float(_max_rel_entry(lhs, rhs))
    return Report("connection", err <= tol, err, tol,
                  {"n": n, "t1": str(s1), "t2": str(s2), "prec": prec, "order": order,
                   "branch": branch, "entry_errors": [[float(abs(lhs[i, j] - rhs[i, j])) for j in range(rhs.cols)]
                                    for i in range(rhs.rows)]})


def verify_connect_n1(prec: int = 256, s1="0.31", s2="0.47") -> Report:
    """At n = 1 both sides equal 1 / (2 pi i)."""
    lhs, rhs = connection_sides(1, s1, s2, prec, order=1)
    with mp.workprec(prec):
        want = 1 / (2j * mp.pi)
        err = float(max(abs(lhs[0, 0] - want), abs(rhs[0, 0] - want)) / abs(want))
    tol = float(mpmath.ldexp(1, -prec + 16))
    return Report("connection_n1", err <= tol, err, tol, {"prec": prec})


# -- monodromy checks ---------------------------------------------------------------


def zero_loop_eigen_error(n: int, s1, s2, prec: int = 256):
    """Distance between the eigenvalues of the q = 0 loop and exp(-2 pi i c(lam))."""
    x = monodromy(n, s1, s2, "zero", prec)
    with mp.workprec(prec + GUARD_BITS):
        ev = [x[0, 0]] if x.rows == 1 else list(mpmath.eig(x, left=False, right=False))
        want = [mpmath.expjpi(-2 * content_sum_numeric(lam, _mp(rational(s1)), _mp(rational(s2))))
                for lam in enumerate_partitions(n)]
        worst = mpmath.mpf(0)
        for w in want:
            k = min(range(len(ev)), key=lambda i: abs(ev[i] - w))
            worst = max(worst, abs(ev.pop(k) - w))
        return worst


def periodicity_error(n: int, s1, s2, target, prec: int = 256, shift=(1, 0)):
    """Gamma^{-1} X Gamma at t versus t + shift."""
    s1, s2 = rational(s1), rational(s2)
    a = gamma_conjugated(n, s1, s2, monodromy(n, s1, s2, target, prec), prec)
    u1, u2 = s1 + shift[0], s2 + shift[1]
    b = gamma_conjugated(n, u1, u2, monodromy(n, u1, u2, target, prec), prec)
    with mp.workprec(prec + GUARD_BITS):
        return _rel(b, a)


def kt_gram(n: int, s1, s2, prec: int = 256) -> mpmath.matrix:
    with mp.workprec(prec + GUARD_BITS):
        return _diag([kt_weight_numeric(mu, _mp(rational(s1)), _mp(rational(s2)))
                      for mu in enumerate_partitions(n)])


def unitarity_error(n: int, s1, s2, target, prec: int = 256):
    """|| Y(-t)^T K_T Y(t) - K_T || with Y = Gamma^{-1} X Gamma."""
    s1, s2 = rational(s1), rational(s2)
    y = gamma_conjugated(n, s1, s2, monodromy(n, s1, s2, target, prec), prec)
    ym = gamma_conjugated(n, -s1, -s2, monodromy(n, -s1, -s2, target, prec), prec)
    k = kt_gram(n, s1, s2, prec)
    with mp.workprec(prec + GUARD_BITS):
        return _rel(ym.T * k * y, k)


def gram_identity_error(n: int, s1, s2, prec: int = 256):
    """Gamma(-t) K Gamma(t) against the closed-form Gram matrix K_T."""
    s1, s2 = rational(s1), rational(s2)
    a = gamma_op(n, -s1, -s2, prec)
    b = gamma_op(n, s1, s2, prec)
    with mp.workprec(prec + GUARD_BITS):
        k = kt_gram(n, s1, s2, prec)
        worst = mpmath.mpf(0)
        tt = _mp(s1) * _mp(s2)
        from ..partitions import zmu
        for i, mu in enumerate(enumerate_partitions(n)):
            herm = tt ** (-len(mu)) / zmu(mu)
            worst = max(worst, abs(a[i] * herm * b[i] - k[i, i]) / abs(k[i, i]))
        return worst


def level_commutator_error(n: int, s1, level: int = 1, prec: int = 256):
    """Largest relative commutator among the finite loop monodromies at integer level."""
    s1 = rational(s1)
    s2 = level - s1
    mats = [monodromy(n, s1, s2, t, prec) for t in all_targets(n) if t != "infinity"]
    with mp.workprec(prec + GUARD_BITS):
        worst = mpmath.mpf(0)
        for i in range(len(mats)):
            for j in range(i + 1, len(mats)):
                a, b = mats[i], mats[j]
                worst = max(worst, mpmath.mnorm(a * b - b * a, 1) / (mpmath.mnorm(a, 1) * mpmath.mnorm(b, 1)))
        return worst


def shift_conjugation_error(n: int, s1, s2, target, prec: int = 256):
    """X(t1, t2 - 1) against C^{-1} X(t) C with C = G_GW(t) G_GW(t1, t2 - 1)^{-1}."""
    s1, s2 = rational(s1), rational(s2)
    check_shift_generic(n, s2)
    x = monodromy(n, s1, s2, target, prec)
    xs = monodromy(n, s1, s2 - 1, target, prec)
    a = gw_gluing(n, s1, s2, prec)
    b = gw_gluing(n, s1, s2 - 1, prec)
    with mp.workprec(prec + GUARD_BITS):
        c = _diag([u / v for u, v in zip(a, b)])
        return _rel(c ** -1 * x * c, xs)


def verify_Tpolynom(n: int, s1, s2, prec: int = 256, tol: float = 1e-15, targets=None) -> Report:
    targets = targets or [t for t in all_targets(n) if t != "infinity"]
    per = {loop_label(t): float(periodicity_error(n, s1, s2, t, prec)) for t in targets}
    uni = {loop_label(t): float(unitarity_error(n, s1, s2, t, prec)) for t in targets}
    worst = max(list(per.values()) + list(uni.values()))
    return Report("gamma_monodromy", worst <= tol, worst, tol, {"periodicity": per, "unitarity": uni})


def verify_Tmonodr(n: int, s1, s2, prec: int = 256, tol: float = 1e-15, targets=None) -> Report:
    targets = targets or [t for t in all_targets(n) if t != "infinity"]
    errs = {loop_label(t): float(shift_conjugation_error(n, s1, s2, t, prec)) for t in targets}
    worst = max(errs.values())
    return Report("shift_monodromy", worst <= tol, worst, tol, errs)


# -- intertwiners ---------------------------------------------------------------------


def _gw_ratio(n, s1, s2, a, b, prec):
    g0 = gw_gluing(n, s1, s2, prec)
    g1 = gw_gluing(n, s1 - a, s2 - b, prec)
    return _diag([u / v for u, v in zip(g0, g1)])


def intertwiner_gw(n: int, s1, s2, a: int, b: int, q, prec: int = 256) -> mpmath.matrix:
    """Phi(t) G_GW(t) G_GW(t - (a, b))^{-1} Phi(t - (a, b))^{-1} at q."""
    s1, s2 = rational(s1), rational(s2)
    p0 = fundamental_solution(n, s1, s2, q, prec)
    p1 = fundamental_solution(n, s1 - a, s2 - b, q, prec)
    with mp.workprec(prec + GUARD_BITS):
        return p0 * _gw_ratio(n, s1, s2, a, b, prec) * p1 ** -1


def _dt_ratio(n, s1, s2, a, b, q, prec):
    vals = []
    for lam in enumerate_partitions(n):
        ca, cb = _content_coeffs(lam)
        num = dt_gamma_part(lam, s1, s2, prec)
        den = dt_gamma_part(lam, s1 - a, s2 - b, prec)
        if den == 0:
            raise ExcludedParameter(f"Gamma pole in the DT factor of {lam} at t - ({a}, {b})")
        vals.append(mpmath.mpc(q) ** (-(a * ca + b * cb)) * num / den)
    return _diag(vals)


def intertwiner_dt(n: int, s1, s2, a: int, b: int, q, prec: int = 256, order: int = 30) -> mpmath.matrix:
    """Y(t) G_DT(t) G_DT(t - (a, b))^{-1} Y(t - (a, b))^{-1} at q."""
    s1, s2 = rational(s1), rational(s2)
    y0 = y_matrix(n, s1, s2, q, order, prec)
    y1 = y_matrix(n, s1 - a, s2 - b, q, order, prec)
    with mp.workprec(prec + GUARD_BITS):
        return y0 * _dt_ratio(n, s1, s2, a, b, q, prec) * y1 ** -1


def intertwiner_S(n: int, s1, s2, a: int, b: int, q, line: str = "gw", prec: int = 256, order: int = 30):
    if line == "gw":
        return intertwiner_gw(n, s1, s2, a, b, q, prec)
    if line == "dt":
        return intertwiner_dt(n, s1, s2, a, b, q, prec, order)
    raise ValueError("line must be 'gw' or 'dt'")


def lines_error(n, s1, s2, a, b, q, prec=256, order=30):
    with mp.workprec(prec + GUARD_BITS):
        return _rel(intertwiner_dt(n, s1, s2, a, b, q, prec, order), intertwiner_gw(n, s1, s2, a, b, q, prec))


def composition_error(n, s1, s2, ab1, ab2, q, prec=256, order=30):
    """S(ab1; t) S(ab2; t - ab1) from the DT line against S(ab1 + ab2; t) from the GW line."""
    s1, s2 = rational(s1), rational(s2)
    (a1, b1), (a2, b2) = ab1, ab2
    left = intertwiner_dt(n, s1, s2, a1, b1, q, prec, order)
    right = intertwiner_dt(n, s1 - a1, s2 - b1, a2, b2, q, prec, order)
    total = intertwiner_gw(n, s1, s2, a1 + a2, b1 + b2, q, prec)
    with mp.workprec(prec + GUARD_BITS):
        return _rel(left * right, total)


def swap_symmetry_error(n, s1, s2, a, b, q, prec=256, order=30):
    """S(a, b; t1, t2) = S(b, a; t2, t1), both on the DT line."""
    x = intertwiner_dt(n, s1, s2, a, b, q, prec, order)
    y = intertwiner_dt(n, s2, s1, b, a, q, prec, order)
    with mp.workprec(prec + GUARD_BITS):
        return _rel(x, y)


@dataclass
class LaurentFit:
    coefficients: dict
    window: tuple
    residual: float

    @property
    def poly(self) -> LaurentPoly:
        return LaurentPoly("q", dict(self.coefficients))


def laurent_fit(n: int, s1, s2, a: int, b: int, prec: int = 256, samples: int = 32,
                r1: float = 0.5, r2: float = 0.3, checks: int = 4, tol: float = 1e-10,
                order: int = 160, strict: bool = False) -> LaurentFit:
    """Fit S(a, b)(q) by a DFT on |q| = r1 and test the fit on |q| = r2."""
    with mp.workprec(prec + GUARD_BITS):
        r1m, r2m = mpmath.mpf(r1), mpmath.mpf(r2)
        pts = [r1m * mpmath.expjpi(mpmath.mpf(2 * k) / samples) for k in range(samples)]
        vals = [intertwiner_dt(n, s1, s2, a, b, p, prec, order) for p in pts]
        d = vals[0].rows
        half = samples // 2
        coeffs = {}
        for k in range(-half, half):
            m = mpmath.matrix(d, d)
            for p, v in zip(pts, vals):
                m += v * p ** (-k)
            coeffs[k] = m / samples
        scale = max(mpmath.mnorm(m, 1) for m in coeffs.values())
        live = [k for k, m in coeffs.items() if mpmath.mnorm(m, 1) > scale * mpmath.mpf(10) ** -40]
        window = (min(live), max(live)) if live else (0, 0)
        worst = mpmath.mpf(0)
        for k in range(checks):
            p = r2m * mpmath.expjpi(mpmath.mpf(2 * k + 1) / checks)
            want = intertwiner_dt(n, s1, s2, a, b, p, prec, order)
            got = mpmath.matrix(d, d)
            for e, m in coeffs.items():
                got += m * p ** e
            worst = max(worst, _rel(got, want))
        fit = LaurentFit({k: coeffs[k] for k in live}, window, float(worst))
    if strict and fit.residual > tol:
        raise FitResidualTooLarge(f"Laurent fit residual {fit.residual:.3e} exceeds {tol:.1e}")
    return fit


# -- scattering ---------------------------------------------------------------------


def parity_matrix(n: int) -> mpmath.matrix:
    return _diag([(-1) ** len(mu) for mu in enumerate_partitions(n)])


def _pattern_error(b: mpmath.matrix, basis) -> tuple:
    """Largest entry off the transpose pattern, relative to the largest on it."""
    on = mpmath.mpf(0)
    off = mpmath.mpf(0)
    for i, lam in enumerate(basis):
        for j, mu in enumerate(basis):
            v = abs(b[i, j])
            if lam == transpose(mu):
                on = max(on, v)
            else:
                off = max(off, v)
    return off / on, on


def scattering_H(n: int, s1, level: int = 1, prec: int = 256):
    """(-1)^l in the H basis at t2 = level - t1, and its off-pattern size."""
    s1 = rational(s1)
    s2 = level - s1
    with mp.workprec(prec + GUARD_BITS):
        h = haiman_matrix_numeric(n, _mp(s1), _mp(s2))
        b = h ** -1 * parity_matrix(n) * h
        err, _ = _pattern_error(b, enumerate_partitions(n))
        return b, err


def scattering_matrix(n: int, s1, level: int = 1, prec: int = 256, order: int = 30):
    """Psi_0(-1)^{-1} Psi_inf(-1) with Psi_0 = Y(q) q^{-c} and Psi_inf = (-1)^l Y(1/q) q^{c}."""
    s1 = rational(s1)
    s2 = level - s1
    basis = enumerate_partitions(n)
    with mp.workprec(prec + GUARD_BITS):
        y = y_matrix(n, s1, s2, -1, order, prec)
        cs = [content_sum_numeric(lam, _mp(s1), _mp(s2)) for lam in basis]
        psi0 = y * _diag([mpmath.expjpi(-c) for c in cs])
        psiinf = parity_matrix(n) * y * _diag([mpmath.expjpi(c) for c in cs])
        sig = psi0 ** -1 * psiinf
        err, _ = _pattern_error(sig, basis)
        return sig, err


def inverted_solution_residual(n: int, s1, s2, q, order: int = 60, prec: int = 256):
    """Residual of (-1)^l Y(1/q) q^{c} in q dPsi/dq = M_D Psi, with |q| > 1.

    Uses the termwise derivative of the series, so at integer level (where the
    series terminate) the residual is pure rounding.
    """
    s1, s2 = rational(s1), rational(s2)
    basis = enumerate_partitions(n)
    with mp.workprec(prec + GUARD_BITS):
        q = mpmath.mpc(q)
        w = 1 / q
        cols = _series_columns(n, s1, s2, order)
        cs = [content_sum_numeric(lam, _mp(s1), _mp(s2)) for lam in basis]
        d = len(basis)
        yv = mpmath.matrix(d, d)
        dy = mpmath.matrix(d, d)
        for j, col in enumerate(cols):
            v = _eval_series(col, w)
            dv = _eval_series_derivative(col, w)
            for i in range(d):
                yv[i, j] = v[i]
                dy[i, j] = -w * dv[i] + v[i] * cs[j]
        par = parity_matrix(n)
        md = system(n, s1, s2, prec).matrix(q)
        res = par * dy - md * par * yv
        return mpmath.mnorm(res, 1) / (mpmath.mnorm(md, 1) * mpmath.mnorm(yv, 1) + mpmath.mnorm(dy, 1))
