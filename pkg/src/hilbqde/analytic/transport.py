"""Numerical continuation of q dPsi/dq = M_D(q) Psi along polygonal paths.

Each step expands M_D(q)/q in a Taylor series about the current point and
sums the matrix solution to high order.  The radius is tied to the distance
of the nearest singular point, and the truncation tail is checked a
posteriori.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import flint
import mpmath
from mpmath import mp

from ._arb import flint_prec, to_acb, to_acb_matrix, to_mp_matrix, to_mpc, to_mpf
from ..operators import build_MD, singular_points
from ..partitions import enumerate_partitions

GUARD_BITS = 24
STEP_RATIO = math.exp(-2)
# paths given as bare waypoint lists must still keep off the singular points
MIN_CLEARANCE = 1e-8


class StepUnderflow(ArithmeticError):
    pass


class SingularityTooClose(ValueError):
    pass


def _exact(x) -> bool:
    return isinstance(x, (int, Fraction))


def _num(x):
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    return mpmath.mpmathify(x)


def _segment_distance(a, b, p):
    ab = b - a
    if ab == 0:
        return abs(p - a)
    s = mpmath.re((p - a) * mpmath.conj(ab)) / abs(ab) ** 2
    s = min(max(s, 0), 1)
    return abs(a + s * ab - p)


@dataclass
class PathSpec:
    """Polygonal path in the q-plane, checked against a list of singular points."""

    waypoints: list
    clearance: float
    singular: list

    def __post_init__(self):
        self.waypoints = [mpmath.mpc(w) for w in self.waypoints]
        if len(self.waypoints) < 2:
            raise ValueError("a path needs at least two waypoints")
        for a, b in zip(self.waypoints, self.waypoints[1:]):
            for p in self.singular:
                if _segment_distance(a, b, p) < self.clearance:
                    raise SingularityTooClose(
                        f"segment {mpmath.nstr(a, 6)} -> {mpmath.nstr(b, 6)} passes within "
                        f"{self.clearance} of {mpmath.nstr(p, 6)}")

    @property
    def start(self):
        return self.waypoints[0]

    @property
    def end(self):
        return self.waypoints[-1]


class QDESystem:
    """M_D at fixed (t1, t2) as data for fast Taylor expansion.

    Rational parameters are substituted exactly, so the pole of the A-terms at
    q = -1 cancels before any floating point arithmetic happens.  The inner
    loops run on arb/acb balls; midpoints are kept between steps.
    """

    def __init__(self, n: int, s1, s2, prec: int = 256):
        self.n = n
        self.prec = prec
        self.s1, self.s2 = s1, s2
        self.basis = enumerate_partitions(n)
        self.dim = len(self.basis)
        md = build_MD(n)
        exact = _exact(s1) and _exact(s2)
        point = {"t1": Fraction(s1) if exact else s1, "t2": Fraction(s2) if exact else s2}
        with mp.workprec(prec + GUARD_BITS), flint_prec(prec + GUARD_BITS):
            off = {}
            self.diag = []
            for i in range(self.dim):
                for j in range(self.dim):
                    f = md[i, j]
                    if i != j:
                        if not f.is_zero():
                            if "q" in f.variables:
                                raise ValueError("off-diagonal entry depends on q")
                            off[(i, j)] = f.evaluate(point)
                        continue
                    if exact:
                        f = f.subs(point)
                        self.diag.append((_coeff_list(f.num, {}), _coeff_list(f.den, {})))
                    else:
                        self.diag.append((_coeff_list(f.num, point), _coeff_list(f.den, point)))
            self.off = flint.acb_mat(self.dim, self.dim)
            for (i, j), v in off.items():
                self.off[i, j] = to_acb(v)
        self.singular = [p for p in singular_points(n) if p != mpmath.inf]
        self.trivial = all(x == 0 for x in self.off.entries()) and all(
            all(c == 0 for c in num) for num, _ in self.diag)

    # -- evaluation --------------------------------------------------------
    def matrix(self, q):
        """M_D(q) as an mpmath matrix."""
        with flint_prec(self.prec + GUARD_BITS):
            z = to_acb(q)
            m = flint.acb_mat(self.off)
            for i, (num, den) in enumerate(self.diag):
                m[i, i] = _polyval(num, z) / _polyval(den, z)
            return to_mp_matrix(m)

    def trace(self, q):
        with flint_prec(self.prec + GUARD_BITS):
            z = to_acb(q)
            return to_mpc(sum((_polyval(nu, z) / _polyval(de, z) for nu, de in self.diag), flint.acb(0)))

    def nearest_singular(self, z):
        return min(abs(z - p) for p in self.singular)

    def _expansion(self, z, order: int):
        """Taylor coefficients at z of 1/q (scalars) and of the diagonal of
        M_D(q)/q (diagonal acb matrices)."""
        inv = 1 / z
        off = []
        p = inv
        for _ in range(order + 1):
            off.append(p)
            p = -p * inv
        cols = []
        for num, den in self.diag:
            cols.append(_quotient_taylor(num, [flint.acb(0)] + den, z, order))
        diag = []
        for k in range(order + 1):
            m = flint.acb_mat(self.dim, self.dim)
            for i in range(self.dim):
                m[i, i] = cols[i][k]
            diag.append(m)
        return off, diag

    def step_series(self, z, psi, order: int):
        """Taylor coefficients (acb matrices) at z of the solution with Psi(z) = psi."""
        off, diag = self._expansion(z, order)
        coeffs = [psi]
        c = self.off
        for k in range(order):
            s = coeffs[k] * off[0]
            dsum = diag[0] * coeffs[k]
            for j in range(1, k + 1):
                prev = coeffs[k - j]
                s += prev * off[j]
                dsum += diag[j] * prev
            coeffs.append((c * s + dsum) * flint.arb(flint.fmpq(1, k + 1)))
        return coeffs

    # -- transport ---------------------------------------------------------
    def transport(self, path, initial=None, tol=None):
        """Transport ``initial`` (identity by default) along ``path``."""
        if not isinstance(path, PathSpec):
            path = PathSpec(list(path), MIN_CLEARANCE, self.singular)
        with mp.workprec(self.prec + GUARD_BITS), flint_prec(self.prec + GUARD_BITS):
            d = self.dim
            if initial is None:
                psi = flint.acb_mat(d, d)
                for i in range(d):
                    psi[i, i] = 1
            else:
                psi = to_acb_matrix(initial)
            if self.trivial:
                return to_mp_matrix(psi)
            tol = tol if tol is not None else mpmath.ldexp(1, -self.prec - 4)
            order = int(self.prec * math.log(2) / -math.log(STEP_RATIO)) + 8
            for a, b in zip(path.waypoints, path.waypoints[1:]):
                psi = self._segment(a, b, psi, order, tol)
            return to_mp_matrix(psi)

    def _segment(self, a, b, psi, order, tol):
        z = a
        while True:
            remaining = b - z
            if abs(remaining) == 0:
                return psi
            radius = self.nearest_singular(z)
            if radius == 0:
                raise SingularityTooClose("path touches a singular point")
            h_len = min(abs(remaining), STEP_RATIO * radius)
            coeffs = self.step_series(to_acb(z), psi, order)
            norm0 = _norm(psi)
            last, second = _norm(coeffs[-1]), _norm(coeffs[-2])
            while True:
                tail = last * h_len ** order + second * h_len ** (order - 1)
                if tail <= tol * norm0:
                    break
                h_len /= 2
                if h_len < radius * mpmath.ldexp(1, -40):
                    raise StepUnderflow(f"no admissible step at {mpmath.nstr(z, 8)}")
            final = h_len >= abs(remaining)
            h = remaining if final else remaining * (h_len / abs(remaining))
            psi = _horner(coeffs, to_acb(h)).mid()
            if final:
                return psi
            z = z + h


def _coeff_list(p, point) -> list:
    coll = p.collect("q")
    top = max(coll) if coll else 0
    out = []
    for k in range(top + 1):
        c = coll.get(k)
        if c is None or c.is_zero():
            out.append(flint.acb(0))
        elif c.variables:
            out.append(to_acb(c.evaluate(point)))
        else:
            out.append(to_acb(c.constant_value()))
    return out


def _polyval(coeffs, z):
    out = flint.acb(0)
    for c in reversed(coeffs):
        out = out * z + c
    return out


def _shift(coeffs, z):
    a = list(coeffs)
    n = len(a)
    for i in range(n):
        for j in range(n - 2, i - 1, -1):
            a[j] = a[j] + z * a[j + 1]
    return a


def _quotient_taylor(num, den, z, order):
    a = _shift(num, z) + [flint.acb(0)] * (order + 1)
    b = _shift(den, z)
    if b[0].contains(0) and abs(b[0].mid()) == 0:
        raise SingularityTooClose(f"pole at {to_mpc(z)}")
    inv0 = 1 / b[0]
    out = []
    for k in range(order + 1):
        s = a[k]
        for j in range(1, min(k, len(b) - 1) + 1):
            s -= b[j] * out[k - j]
        out.append(s * inv0)
    return out


def _norm(m) -> mpmath.mpf:
    return max((to_mpf(abs(x).mid()) for x in m.entries()), default=mpmath.mpf(0))


def _horner(coeffs, h):
    out = coeffs[-1]
    for c in reversed(coeffs[:-1]):
        out = out * h + c
    return out


@lru_cache(maxsize=64)
def system(n: int, s1, s2, prec: int = 256) -> QDESystem:
    return QDESystem(n, s1, s2, prec)


def transport(n: int, s1, s2, path, initial=None, prec: int = 256):
    return system(n, s1, s2, prec).transport(path, initial)


def fundamental_Phi(n: int, s1, s2, q, prec: int = 256, path=None, base=-1):
    """Phi(q) with Phi(base) = 1, continued along ``path`` (straight by default)."""
    sysm = system(n, s1, s2, prec)
    if path is None:
        path = [base, q]
    return sysm.transport(path)


def liouville_error(n: int, s1, s2, path, prec: int = 256):
    """|det Phi(end) - exp(int tr M_D dq/q)| relative, along ``path`` from its start."""
    sysm = system(n, s1, s2, prec)
    phi = sysm.transport(path)
    pts = [mpmath.mpc(w) for w in (path.waypoints if isinstance(path, PathSpec) else path)]
    with mp.workprec(prec + GUARD_BITS):
        integral = mpmath.mpc(0)
        for a, b in zip(pts, pts[1:]):
            integral += mpmath.quad(lambda s: sysm.trace(a + s * (b - a)) / (a + s * (b - a)) * (b - a), [0, 1])
        want = mpmath.exp(integral)
        got = mpmath.det(phi)
        return abs(got - want) / abs(want)
