"""Jack, Schur, Macdonald and Haiman symmetric functions as Fock vectors.

A symmetric function sum_mu a_mu p_mu is the Fock vector sum_mu a_mu z(mu) |mu>.
Internally the power-sum coordinates a_mu are used for products and changes
of basis; everything returned to callers is a FockVector.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial

import flint
import mpmath

from . import linalg
from .algebra import ONE, ZERO, RatFunc, as_ratfunc, t1, t2, Q, T, T1, T2
from .fock import FockVector, herm_weight, inner_herm
from .operators import build_M0
from .partitions import (Partition, content_sum, content_sum_numeric, enumerate_partitions, index_of, nstat,
                         tangent_weights, transpose, arm_leg, dominance_leq, zmu)


class DegenerateEigenvalue(ArithmeticError):
    pass


class SingularHMatrix(ArithmeticError):
    pass


# ---------------------------------------------------------------------------
# power-sum coordinates
# ---------------------------------------------------------------------------


def from_p(n: int, pcoords: dict) -> FockVector:
    return FockVector(n, {mu: as_ratfunc(c) * zmu(mu) for mu, c in pcoords.items()})


def to_p(v: FockVector) -> dict:
    return {mu: c * RatFunc(1, zmu(mu)) for mu, c in v.coeffs.items()}


def p_product(a: dict, b: dict) -> dict:
    out: dict = {}
    for mu, x in a.items():
        for nu, y in b.items():
            key = Partition(sorted(mu + nu, reverse=True))
            out[key] = out.get(key, 0) + x * y
    return {k: v for k, v in out.items() if v != 0}


@lru_cache(maxsize=None)
def h_in_p(k: int) -> dict:
    """Complete homogeneous h_k = sum_{|nu|=k} p_nu / z(nu)."""
    return {nu: Fraction(1, zmu(nu)) for nu in enumerate_partitions(k)}


def _count_assignments(nu, mu) -> int:
    """Number of maps from the parts of nu to the rows of mu filling each row exactly."""
    target = list(mu)

    def rec(i, rem):
        if i == len(nu):
            return 1 if all(r == 0 for r in rem) else 0
        total = 0
        for j in range(len(rem)):
            if rem[j] >= nu[i]:
                rem[j] -= nu[i]
                total += rec(i + 1, rem)
                rem[j] += nu[i]
        return total

    return rec(0, target)


@lru_cache(maxsize=None)
def p_to_m_matrix(n: int) -> flint.fmpq_mat:
    """Row nu holds the monomial coordinates of p_nu."""
    basis = enumerate_partitions(n)
    d = len(basis)
    mat = flint.fmpq_mat(d, d)
    for i, nu in enumerate(basis):
        for j, mu in enumerate(basis):
            mat[i, j] = _count_assignments(nu, mu)
    return mat


@lru_cache(maxsize=None)
def m_to_p_matrix(n: int) -> flint.fmpq_mat:
    """Row mu holds the power-sum coordinates of m_mu."""
    return p_to_m_matrix(n).inv()


def _fmpq_to_fraction(x) -> Fraction:
    return Fraction(int(x.p), int(x.q))


def monomial(mu) -> FockVector:
    mu = Partition(mu)
    n = mu.size
    inv = m_to_p_matrix(n)
    i = index_of(n)[mu]
    return from_p(n, {nu: _fmpq_to_fraction(inv[i, j]) for j, nu in enumerate(enumerate_partitions(n))
                      if inv[i, j] != 0})


def m_coordinates(v: FockVector) -> dict:
    """Monomial coordinates of a Fock vector."""
    n = v.energy
    pc = to_p(v)
    mat = p_to_m_matrix(n)
    basis = enumerate_partitions(n)
    idx = index_of(n)
    out = {}
    for j, mu in enumerate(basis):
        s = ZERO
        for nu, c in pc.items():
            x = mat[idx[nu], j]
            if x != 0:
                s = s + c * _fmpq_to_fraction(x)
        if not s.is_zero():
            out[mu] = s
    return out


def from_m(n: int, mcoords: dict) -> FockVector:
    inv = m_to_p_matrix(n)
    basis = enumerate_partitions(n)
    idx = index_of(n)
    pc: dict = {}
    for mu, c in mcoords.items():
        i = idx[Partition(mu)]
        for j, nu in enumerate(basis):
            x = inv[i, j]
            if x != 0:
                pc[nu] = pc.get(nu, ZERO) + as_ratfunc(c) * _fmpq_to_fraction(x)
    return from_p(n, pc)


# ---------------------------------------------------------------------------
# Schur functions
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def schur_p(lam: Partition) -> dict:
    """Power-sum coordinates of s_lam via the Jacobi-Trudi determinant."""
    lam = Partition(lam)
    k = len(lam)
    if k == 0:
        return {Partition(()): Fraction(1)}
    total: dict = {}
    for perm in itertools.permutations(range(k)):
        sign = _perm_sign(perm)
        term = {Partition(()): Fraction(sign)}
        for i, j in enumerate(perm):
            deg = lam[i] - i + j
            if deg < 0:
                term = None
                break
            if deg > 0:
                term = p_product(term, h_in_p(deg))
        if term is None:
            continue
        for mu, c in term.items():
            total[mu] = total.get(mu, 0) + c
    return {mu: c for mu, c in total.items() if c != 0}


def _perm_sign(perm) -> int:
    sign, seen = 1, set()
    for i in range(len(perm)):
        if i in seen:
            continue
        j, length = i, 0
        while j not in seen:
            seen.add(j)
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def schur(lam) -> FockVector:
    lam = Partition(lam)
    return from_p(lam.size, schur_p(lam))


# ---------------------------------------------------------------------------
# Jack polynomials
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class JackVector:
    lam: Partition
    vector: FockVector


@lru_cache(maxsize=None)
def jack(lam) -> JackVector:
    """Eigenvector of M_D(0) with eigenvalue -c(lam), normalized on |1^n>."""
    lam = Partition(lam)
    n = lam.size
    if n == 0:
        return JackVector(lam, FockVector(0, {(): ONE}))
    m0 = build_M0(n)
    c = content_sum(lam)
    shifted = [[x + (c if i == j else ZERO) for j, x in enumerate(row)] for i, row in enumerate(m0.entries)]
    kernel = linalg.nullspace(shifted)
    if len(kernel) > 1:
        # c(lam) can coincide for dominance-incomparable partitions (first at
        # n = 6: (4,1,1) and (3,3)); triangularity in the monomial basis then
        # picks the eigenvector.
        kernel = _triangular_combination(lam, kernel)
    if len(kernel) != 1:
        raise DegenerateEigenvalue(f"eigenspace of dimension {len(kernel)} for {lam}")
    v = kernel[0]
    last = v[-1]  # |1^n> is the last basis vector
    scale = RatFunc(factorial(n)) * (t1 * t2) ** n / last
    return JackVector(lam, FockVector.from_column(n, [scale * x for x in v]))


def _triangular_combination(lam, kernel):
    n = lam.size
    # undo the t1^{l(mu)} twist so the classical Jack triangularity applies
    untwisted = [[x / t1 ** len(mu) for x, mu in zip(k, enumerate_partitions(n))] for k in kernel]
    mcs = [m_coordinates(FockVector.from_column(n, k)) for k in untwisted]
    outside = [mu for mu in enumerate_partitions(n) if dominance_leq(mu, lam) is not True]
    conditions = [[mc.get(mu, ZERO) for mc in mcs] for mu in outside]
    combos = linalg.nullspace(conditions) if conditions else [[ONE if i == j else ZERO for i in range(len(kernel))]
                                                                for j in range(len(kernel))]
    out = []
    for x in combos:
        out.append([sum((xi * k[r] for xi, k in zip(x, kernel)), ZERO) for r in range(len(kernel[0]))])
    return out


def jack_norm(lam) -> RatFunc:
    """Product of the tangent weights."""
    out = ONE
    for w in tangent_weights(lam):
        out = out * w
    return out


def check_jack_norm(lam):
    """None if <J, J> equals the weight product, else the pair (got, expected)."""
    v = jack(lam).vector
    got = inner_herm(v, v)
    want = jack_norm(lam)
    return None if got == want else (got, want)


def check_jack_eigen(lam) -> bool:
    v = jack(lam).vector
    return build_M0(v.energy) @ v == v.scale(-content_sum(lam))


def check_jack_normalization(lam) -> bool:
    n = Partition(lam).size
    return jack(lam).vector[(1,) * n] == RatFunc(factorial(n)) * (t1 * t2) ** n


def swap_t(f: RatFunc) -> RatFunc:
    return f.subs({"t1": t2, "t2": t1})


def check_jack_symmetry(lam) -> bool:
    """J^lam(t2, t1) = J^{lam'}(t1, t2)."""
    lam = Partition(lam)
    return jack(lam).vector.map_coeffs(swap_t) == jack(transpose(lam)).vector


def degree_structure_check(lam):
    """Each coefficient on |mu> is (t1 t2)^l(mu) times a homogeneous polynomial
    of degree |lam| - l(mu).  Returns the first violating mu or None."""
    lam = Partition(lam)
    for mu, c in jack(lam).vector.coeffs.items():
        reduced = c / (t1 * t2) ** len(mu)
        if not reduced.is_polynomial():
            return mu
        want = lam.size - len(mu)
        if any(sum(e) != want for e in reduced.num.terms()):
            return mu
    return None


# ---------------------------------------------------------------------------
# Macdonald polynomials
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MacdonaldVector:
    lam: Partition
    vector: FockVector
    m_coeffs: dict


def qt_weight(mu) -> RatFunc:
    """<p_mu, p_mu>_{Q,T}."""
    w = RatFunc(zmu(mu))
    for m in mu:
        w = w * (1 - Q ** m) / (1 - T ** m)
    return w


def inner_qt(v: FockVector, w: FockVector) -> RatFunc:
    """Bilinear (Q,T) product."""
    a, b = to_p(v), to_p(w)
    s = ZERO
    for mu, x in a.items():
        y = b.get(mu)
        if y is not None:
            s = s + x * y * qt_weight(mu)
    return s


@lru_cache(maxsize=None)
def _macdonald_level(n: int) -> dict:
    """All monic P^lam for lam |- n, by Gram-Schmidt from 1^n upward."""
    basis = list(reversed(enumerate_partitions(n)))
    done: dict = {}
    norms: dict = {}
    for lam in basis:
        vec = monomial(lam)
        mco = {lam: ONE}
        for mu, (pmu, mmu) in done.items():
            coef = inner_qt(vec, pmu)
            if coef.is_zero():
                continue
            coef = coef / norms[mu]
            vec = vec - pmu.scale(coef)
            for nu, c in mmu.items():
                mco[nu] = mco.get(nu, ZERO) - coef * c
        # re-derive the monomial coordinates from the orthogonalized vector
        done[lam] = (vec, {k: v for k, v in mco.items() if not v.is_zero()})
        norms[lam] = inner_qt(vec, vec)
    return {lam: MacdonaldVector(lam, v, m) for lam, (v, m) in done.items()}


def macdonald_P(lam) -> MacdonaldVector:
    lam = Partition(lam)
    if lam.size == 0:
        return MacdonaldVector(lam, FockVector(0, {(): ONE}), {lam: ONE})
    return _macdonald_level(lam.size)[lam]


def check_macdonald_triangular(lam) -> bool:
    mv = macdonald_P(lam)
    return mv.m_coeffs.get(mv.lam) == ONE and all(dominance_leq(mu, mv.lam) is True for mu in mv.m_coeffs)


# ---------------------------------------------------------------------------
# Haiman's H and the line bundle operators
# ---------------------------------------------------------------------------


def upsilon(v: FockVector, direction: str = "apply") -> FockVector:
    """|mu> -> prod (1 - T2^{-mu_i})^{-1} |mu>, or its inverse."""
    out = {}
    for mu, c in v.coeffs.items():
        f = ONE
        for m in mu:
            f = f * (1 - T2 ** (-m))
        out[mu] = c / f if direction == "apply" else c * f
    return FockVector(v.energy, out)


@dataclass(frozen=True)
class HaimanVector:
    lam: Partition
    vector: FockVector


@lru_cache(maxsize=None)
def haiman_H(lam) -> HaimanVector:
    lam = Partition(lam)
    p = macdonald_P(lam).vector.map_coeffs(lambda f: f.subs({"Q": T1, "T": T2.inverse()}))
    v = upsilon(p, "apply")
    pre = T2 ** nstat(lam)
    for box in lam.boxes():
        a, l = arm_leg(lam, box)
        pre = pre * (1 - T1 ** a * T2 ** (-l - 1))
    return HaimanVector(lam, v.scale(pre))


def haiman_matrix_exact(n: int) -> list[list[RatFunc]]:
    """Columns H^lam, rows |mu>, both in the standard order."""
    basis = enumerate_partitions(n)
    cols = [haiman_H(lam).vector.column() for lam in basis]
    return linalg.transpose(cols)


def check_haiman_invertible(n: int, point=(Fraction(2), Fraction(3, 5))) -> bool:
    """det of the H-matrix is a nonzero rational function: witness a nonzero value."""
    h = haiman_matrix_exact(n)
    val = [[x.subs({"T1": RatFunc(point[0]), "T2": RatFunc(point[1])}) for x in row] for row in h]
    return not linalg.det(val).is_zero()


def haiman_matrix_numeric(n: int, s1, s2):
    """H-matrix at T_i = exp(2 pi i s_i)."""
    T1v = mpmath.expjpi(2 * mpmath.mpmathify(s1))
    T2v = mpmath.expjpi(2 * mpmath.mpmathify(s2))
    h = haiman_matrix_exact(n)
    d = len(h)
    m = mpmath.matrix(d, d)
    for i in range(d):
        for j in range(d):
            if not h[i][j].is_zero():
                m[i, j] = h[i][j].evaluate({"T1": T1v, "T2": T2v})
    return m


def O_line(a, n: int, s1, s2):
    """Numeric matrix of O(a): H diag(exp(-2 pi i a c(lam))) H^{-1} in the |mu> basis."""
    a = mpmath.mpmathify(a) if not isinstance(a, Fraction) else mpmath.mpf(a.numerator) / a.denominator
    h = haiman_matrix_numeric(n, s1, s2)
    d = h.rows
    diag = mpmath.matrix(d, d)
    for i, lam in enumerate(enumerate_partitions(n)):
        diag[i, i] = mpmath.expjpi(-2 * a * content_sum_numeric(lam, s1, s2))
    try:
        hinv = h ** -1
    except ZeroDivisionError as exc:
        raise SingularHMatrix(str(exc)) from None
    return h * diag * hinv
