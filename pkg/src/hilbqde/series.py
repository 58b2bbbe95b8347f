"""Frobenius solutions Y^lam(q) q^{-c(lam)} of q dPsi/dq = M_D Psi at q = 0.

The recursion is run fraction-free: u_k = U_k / Den_k with polynomial U_k and
Den_k = prod_{i<=k} det((i - c) - M_0).  Solving (k - c - M_0) u_k = rhs uses
the adjugate from the Faddeev-LeVerrier expansion, so no gcd is ever taken
while building the series.  The same code runs over Q when t1, t2 are
specialized to rationals.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import flint

from .algebra import ONE, ZERO, Poly, RatFunc, ratfunc_taylor, t1, t2
from .fock import FockVector
from .operators import OperatorMatrix, build_M0, build_MD
from .partitions import Partition, content_sum, enumerate_partitions, transpose, zmu
from .symfun import jack, jack_norm, swap_t

DEFAULT_ORDER = 30


class ResonanceAtSpecializedParameters(ArithmeticError):
    pass


class NotTerminated(ArithmeticError):
    pass


def d_scalar(mu, m: int) -> Fraction:
    """D_m |mu> = d_scalar(mu, m) (t1 + t2) |mu>."""
    n = sum(mu)
    s = Fraction(sum(x * x for x in mu if m % x == 0), 2) - Fraction(n, 2)
    return -2 * (-1) ** m * s


def md_taylor(n: int, order: int) -> list[OperatorMatrix]:
    """[M_0, D_1, ..., D_N] with M_D(q) = M_0 + sum_m q^m D_m."""
    basis = enumerate_partitions(n)
    out = [build_M0(n)]
    for m in range(1, order + 1):
        mat = [[ZERO] * len(basis) for _ in basis]
        for i, mu in enumerate(basis):
            mat[i][i] = (t1 + t2) * d_scalar(mu, m)
        out.append(OperatorMatrix(n, mat))
    return out


def _specialize(f: RatFunc, level):
    return f if level is None else f.subs({"t2": RatFunc(level) - t1})


def _poly(f: RatFunc, level=None):
    f = _specialize(f, level)
    if not f.is_polynomial():
        raise ValueError("expected a polynomial")
    return f.num._p


def _faddeev(a: list, zero) -> tuple[list, list]:
    """Matrices B_1..B_d and charpoly coefficients with
    adj(xI - a) = sum_j x^{d-j} B_j and det(xI - a) = sum_i cs[i] x^i."""
    d = len(a)
    cs = [zero] * (d + 1)
    cs[d] = zero + 1
    bs = []
    prev = None
    for k in range(1, d + 1):
        if prev is None:
            b = [[cs[d] if i == j else zero for j in range(d)] for i in range(d)]
        else:
            b = _matmul(a, prev, zero)
            for i in range(d):
                b[i][i] = b[i][i] + cs[d - k + 1]
        bs.append(b)
        ab = _matmul(a, b, zero)
        tr = zero
        for i in range(d):
            tr = tr + ab[i][i]
        cs[d - k] = tr * flint.fmpq(-1, k)
        prev = b
    return bs, cs


def _matmul(a, b, zero):
    d = len(a)
    out = []
    for i in range(d):
        row = []
        for j in range(d):
            s = zero
            for k in range(d):
                if a[i][k] != 0 and b[k][j] != 0:
                    s = s + a[i][k] * b[k][j]
            row.append(s)
        out.append(row)
    return out


def _matvec(a, v, zero):
    out = []
    for row in a:
        s = zero
        for x, y in zip(row, v):
            if x != 0 and y != 0:
                s = s + x * y
        out.append(s)
    return out


def _recurse(n: int, m0, c, lev, u0, order: int, zero, field: bool):
    """Core recursion over any commutative ring.

    Returns (U, P) with u_k = U_k / (P_1 ... P_k).  With ``field`` the
    division is carried out each step and every P_k is reported as 1.
    """
    basis = enumerate_partitions(n)
    d = len(basis)
    bs, cs = _faddeev(m0, zero)
    one = zero + 1
    us = [list(u0)]
    ps = [one]
    sums = {}  # (x, k) -> numerator of sum_{x | m} (-1)^m u_{k-m}, over Den_{k-x}

    def ratio(lo, hi):
        r = one
        for i in range(lo, hi + 1):
            r = r * ps[i]
        return r

    for k in range(1, order + 1):
        x_k = c * (-1) + k
        pk = zero
        for coef in reversed(cs):
            pk = pk * x_k + coef
        if pk == 0:
            raise ResonanceAtSpecializedParameters(
                f"order {k}: k - c(lambda) + c(mu) vanishes for some mu")
        for x in range(1, min(n, k) + 1):
            num = list(us[k - x])
            prev = sums.get((x, k - x))
            if prev is not None:
                r = ratio(k - 2 * x + 1, k - x)
                num = [a + b * r for a, b in zip(num, prev)]
            if x % 2:
                num = [-a for a in num]
            sums[(x, k)] = num
        rhs = []
        for i, mu in enumerate(basis):
            s = sums[(1, k)][i] * n
            for x in set(mu):
                if x <= k:
                    s = s - sums[(x, k)][i] * ratio(k - x + 1, k - 1) * (x * x * mu.count(x))
            rhs.append(lev * s)
        if all(x == 0 for x in rhs):
            uk = [zero] * d
        else:
            uk = None
            for b in bs:
                w = _matvec(b, rhs, zero)
                uk = w if uk is None else [a * x_k + y for a, y in zip(uk, w)]
        if field:
            uk = [a / pk for a in uk]
            pk = one
        us.append(uk)
        ps.append(pk)
    return us, ps


@dataclass
class SeriesSolution:
    """u_k = numerators[k] / denominators[k] (entrywise over the partition basis)."""

    lam: Partition
    exponent: RatFunc
    numerators: list
    denominators: list
    level: int | None = None
    _reduced: dict = field(default_factory=dict, repr=False)

    @property
    def order(self) -> int:
        return len(self.numerators) - 1

    @property
    def n(self) -> int:
        return self.lam.size

    def is_zero_at(self, k: int) -> bool:
        return all(x.is_zero() for x in self.numerators[k])

    def coefficient(self, k: int) -> FockVector:
        """u_k as a FockVector with reduced RatFunc entries."""
        if k not in self._reduced:
            den = self.denominators[k]
            col = [RatFunc(Poly(x), Poly(den)) for x in self.numerators[k]]
            self._reduced[k] = FockVector.from_column(self.n, col)
        return self._reduced[k]

    @property
    def coeffs(self) -> list[FockVector]:
        return [self.coefficient(k) for k in range(self.order + 1)]

    def to_json(self) -> dict:
        return {"lambda": str(self.lam), "exponent": str(self.exponent),
                "level": self.level, "order": self.order,
                "coefficients": [u.to_json() for u in self.coeffs]}


@lru_cache(maxsize=None)
def _frobenius_cached(lam: Partition, order: int, level) -> SeriesSolution:
    n = lam.size
    zero = _CTX_ZERO
    m0 = [[_poly(x, level) for x in row] for row in build_M0(n).entries]
    c = _poly(content_sum(lam), level)
    lev = _poly(t1 + t2, level)
    u0 = [_poly(x, level) for x in jack(lam).vector.column()]
    us, ps = _recurse(n, m0, c, lev, u0, order, zero, field=False)
    dens = [ps[0]]
    for p in ps[1:]:
        dens.append(dens[-1] * p)
    return SeriesSolution(lam, -_specialize(content_sum(lam), level),
                          [[Poly(x) for x in u] for u in us], [Poly(x) for x in dens], level)


_CTX_ZERO = ZERO.num._p


def frobenius(lam, order: int = DEFAULT_ORDER, level: int | None = None) -> SeriesSolution:
    """Exact solution with u_0 = J^lam through q^order.

    With ``level`` the substitution t2 = level - t1 is made first.
    """
    return _frobenius_cached(Partition(lam), order, level)


@lru_cache(maxsize=None)
def _specialized_cached(lam: Partition, order: int, s1: Fraction, s2: Fraction):
    n = lam.size
    point = {"t1": s1, "t2": s2}

    def val(f: RatFunc):
        return flint.fmpq(Fraction(f.evaluate(point)).numerator, Fraction(f.evaluate(point)).denominator)

    zero = flint.fmpq(0)
    m0 = [[val(x) for x in row] for row in build_M0(n).entries]
    c = val(content_sum(lam))
    u0 = [val(x) for x in jack(lam).vector.column()]
    us, _ = _recurse(n, m0, c, val(t1 + t2), u0, order, zero, field=True)
    return [[Fraction(int(x.p), int(x.q)) for x in u] for u in us]


def frobenius_specialized(lam, order: int, s1, s2) -> list[list[Fraction]]:
    """Coefficient columns u_0..u_order at rational (t1, t2) = (s1, s2), exactly."""
    return _specialized_cached(Partition(lam), order, Fraction(s1), Fraction(s2))


@lru_cache(maxsize=None)
def _md_series_exact(n: int, order: int, level) -> list:
    """Taylor coefficients at q = 0 of every entry of M_D, from the matrix itself."""
    md = build_MD(n)
    d = md.dim
    out = [[[_CTX_ZERO] * d for _ in range(d)] for _ in range(order + 1)]
    for i in range(d):
        for j in range(d):
            f = md[i, j]
            if f.is_zero():
                continue
            for k, x in enumerate(ratfunc_taylor(f, "q", 0, order)):
                out[k][i][j] = _poly(x, level)
    return out


@dataclass
class ResidualReport:
    ok: bool
    verified_through: int
    first_failure: int | None


def check_ode_residual(s: SeriesSolution) -> ResidualReport:
    """Order-by-order residual of q dPsi/dq - M_D Psi.

    Uses Taylor coefficients of the exact M_D entries, not the D_m formula
    that built the series.  Order k is multiplied through by Den_k.
    """
    taylor = _md_series_exact(s.n, s.order, s.level)
    zero = _CTX_ZERO
    nums = [[x._p for x in u] for u in s.numerators]
    dens = [x._p for x in s.denominators]
    c = _poly(-s.exponent)
    for k in range(s.order + 1):
        # Horner over m: sum_m T_m U_{k-m} Den_k / Den_{k-m}
        acc = [zero] * len(nums[k])
        for m in range(k, 0, -1):
            term = _matvec(taylor[m], nums[k - m], zero)
            acc = [a + b for a, b in zip(acc, term)]
            step = dens[k - m + 1] / dens[k - m]
            acc = [a * step for a in acc]
        lhs = [x * (c * (-1) + k) for x in nums[k]]
        lhs = [a - b - e for a, b, e in zip(lhs, _matvec(taylor[0], nums[k], zero), acc)]
        if any(x != 0 for x in lhs):
            return ResidualReport(False, k - 1, k)
    return ResidualReport(True, s.order, None)


@dataclass
class OrthogonalityReport:
    """``raw[k]`` is (numerator, denominator) of the order-k pairing."""

    ok: bool
    raw: list
    first_failure: int | None

    @property
    def values(self) -> list[RatFunc]:
        return [RatFunc(Poly(a), Poly(b)) for a, b in self.raw]


def check_orthogonality(lam, mu, order: int) -> OrthogonalityReport:
    """sum_{a+b=k} <u_a^lam, u_b^mu> equals delta ||J^lam||^2 at k = 0 and 0 above.

    Each order is compared as a polynomial identity after clearing the known
    denominators, so no gcd is needed.
    """
    lam, mu = Partition(lam), Partition(mu)
    if lam.size != mu.size:
        raise ValueError("partitions of different size")
    n = lam.size
    a = frobenius(lam, order)
    b = frobenius(mu, order)
    basis = enumerate_partitions(n)
    # (t1 t2)^n herm_weight(nu) is the polynomial (t1 t2)^{n - l(nu)} / z_nu
    tt = (t1 * t2).num._p
    weights = [tt ** (n - len(nu)) * flint.fmpq(1, zmu(nu)) for nu in basis]
    abar = [[x.bar()._p for x in u] for u in a.numerators]
    adbar = [x.bar()._p for x in a.denominators]
    bn = [[x._p for x in u] for u in b.numerators]
    bd = [x._p for x in b.denominators]
    norm = jack_norm(lam)
    raw = []
    for k in range(order + 1):
        total = _CTX_ZERO
        for i in range(k + 1):
            j = k - i
            if all(x == 0 for x in abar[i]) or all(x == 0 for x in bn[j]):
                continue
            part = _CTX_ZERO
            for w, x, y in zip(weights, abar[i], bn[j]):
                if x != 0 and y != 0:
                    part = part + w * x * y
            total = total + part * (adbar[k] / adbar[i]) * (bd[k] / bd[j])
        scale = adbar[k] * bd[k] * tt ** n
        raw.append((total, scale))
        if k == 0 and lam == mu:
            good = total * norm.den._p == norm.num._p * scale
        else:
            good = total == 0
        if not good:
            return OrthogonalityReport(False, raw, k)
    return OrthogonalityReport(True, raw, None)


def check_polynomial_level(lam, level: int, order: int = DEFAULT_ORDER) -> int:
    """Degree of Y^lam at t2 = level - t1, or NotTerminated if u_order != 0."""
    s = frobenius(lam, order, level)
    nz = [k for k in range(s.order + 1) if not s.is_zero_at(k)]
    deg = nz[-1] if nz else 0
    if deg == order and order > 0:
        raise NotTerminated(f"u_{order} is nonzero for {Partition(lam)} at level {level}")
    return deg


def check_series_symmetry(lam, order: int) -> bool:
    """Y^lam(t2, t1) = Y^{lam'}(t1, t2) coefficientwise."""
    a = frobenius(lam, order)
    b = frobenius(transpose(Partition(lam)), order)
    return all(a.coefficient(k).map_coeffs(swap_t) == b.coefficient(k) for k in range(order + 1))

