"""The QDE operator M and its relatives as exact matrices on a fixed energy level.

Entry (rho, sigma) of every matrix is the coefficient of |rho> in op|sigma>,
with rows and columns in decreasing lexicographic order of partitions.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd

import flint
import mpmath

from . import linalg
from .algebra import ONE, ZERO, Poly, RatFunc, as_ratfunc, q, t1, t2
from .fock import FockVector, bar, herm_weight
from .partitions import Partition, content_sum, enumerate_partitions, index_of


class NotASingularRoot(ValueError):
    pass


class OperatorMatrix:
    __slots__ = ("energy", "entries")

    def __init__(self, energy: int, entries):
        self.energy = energy
        self.entries = [[as_ratfunc(x) for x in row] for row in entries]
        d = len(enumerate_partitions(energy))
        if len(self.entries) != d or any(len(r) != d for r in self.entries):
            raise ValueError(f"expected a {d}x{d} matrix")

    @property
    def basis(self) -> tuple[Partition, ...]:
        return enumerate_partitions(self.energy)

    @property
    def dim(self) -> int:
        return len(self.entries)

    def entry(self, rho, sigma) -> RatFunc:
        idx = index_of(self.energy)
        return self.entries[idx[Partition(rho)]][idx[Partition(sigma)]]

    def __getitem__(self, ij):
        return self.entries[ij[0]][ij[1]]

    def map(self, f) -> "OperatorMatrix":
        return OperatorMatrix(self.energy, [[f(x) for x in row] for row in self.entries])

    def __add__(self, other):
        return OperatorMatrix(self.energy, [[a + b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)])

    def __sub__(self, other):
        return OperatorMatrix(self.energy, [[a - b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)])

    def __neg__(self):
        return self.map(lambda x: -x)

    def __matmul__(self, other):
        if isinstance(other, OperatorMatrix):
            return OperatorMatrix(self.energy, linalg.matmul(self.entries, other.entries))
        if isinstance(other, FockVector):
            return FockVector.from_column(self.energy, linalg.matvec(self.entries, other.column()))
        return NotImplemented

    def scale(self, a) -> "OperatorMatrix":
        a = as_ratfunc(a)
        return self.map(lambda x: a * x)

    def subs(self, mapping) -> "OperatorMatrix":
        return self.map(lambda x: x.subs(mapping))

    def conjugate_diag(self, d) -> "OperatorMatrix":
        """diag(d)^{-1} A diag(d) for a list d of scalars."""
        d = [as_ratfunc(x) for x in d]
        return OperatorMatrix(self.energy, [[d[i].inverse() * x * d[j] for j, x in enumerate(row)]
                                            for i, row in enumerate(self.entries)])

    def is_diagonal(self) -> bool:
        return all(x.is_zero() for i, r in enumerate(self.entries) for j, x in enumerate(r) if i != j)

    def trace(self) -> RatFunc:
        s = ZERO
        for i in range(self.dim):
            s = s + self.entries[i][i]
        return s

    def __eq__(self, other):
        if not isinstance(other, OperatorMatrix):
            return NotImplemented
        return self.energy == other.energy and self.entries == other.entries

    def first_mismatch(self, other):
        for i, (r, s) in enumerate(zip(self.entries, other.entries)):
            for j, (a, b) in enumerate(zip(r, s)):
                if a != b:
                    return self.basis[i], self.basis[j], a, b
        return None

    def to_json(self) -> dict:
        return {"basis": [str(p) for p in self.basis],
                "entries": [[str(x) for x in row] for row in self.entries]}

    def numeric(self, point: dict):
        """mpmath matrix at a numeric point (current working precision)."""
        m = mpmath.matrix(self.dim, self.dim)
        for i, row in enumerate(self.entries):
            for j, x in enumerate(row):
                if not x.is_zero():
                    v = x.evaluate(point)
                    m[i, j] = mpmath.mpf(v.numerator) / v.denominator if isinstance(v, Fraction) else v
        return m

    def __repr__(self):
        return f"OperatorMatrix(n={self.energy}, {[[str(x) for x in r] for r in self.entries]})"


# ---------------------------------------------------------------------------
# integer parts of the off-diagonal terms
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _split_join(n: int):
    """Integer matrices of the splitting and joining sums (with the 1/2)."""
    basis = enumerate_partitions(n)
    idx = index_of(n)
    d = len(basis)
    split = [[Fraction(0)] * d for _ in range(d)]
    join = [[Fraction(0)] * d for _ in range(d)]
    for j, sigma in enumerate(basis):
        # splitting: remove a part k+l, add parts k and l
        for m in set(sigma):
            for k in range(1, m):
                l = m - k
                rest = sigma.remove_part(m)
                coef = Fraction(l * (rest.count(l) + 1))
                rest = rest.add_part(l)
                coef *= k * (rest.count(k) + 1)
                rest = rest.add_part(k)
                split[idx[rest]][j] += coef / 2
        # joining: remove parts k and l, add k+l
        # each ordered pair of values (k, l) occurs once in the sum
        for k in set(sigma):
            for l in set(sigma.remove_part(k)):
                rest = sigma.remove_part(l).remove_part(k)
                m = k + l
                join[idx[rest.add_part(m)]][j] += Fraction(m * (rest.count(m) + 1), 2)
    return split, join


def _off_diagonal(n: int) -> list[list[RatFunc]]:
    split, join = _split_join(n)
    p = t1 * t2
    d = len(split)
    return [[p * split[i][j] - join[i][j] for j in range(d)] for i in range(d)]


def A(k: int) -> RatFunc:
    """((-q)^k + 1) / ((-q)^k - 1)."""
    x = (-q) ** k
    return (x + 1) / (x - 1)


def _diag_M(mu) -> RatFunc:
    s = ZERO
    for m in mu:
        s = s + RatFunc(Fraction(m * m, 2)) * A(m)
    return (t1 + t2) * s


@lru_cache(maxsize=None)
def build_M(n: int) -> OperatorMatrix:
    entries = _off_diagonal(n)
    for i, mu in enumerate(enumerate_partitions(n)):
        entries[i][i] = entries[i][i] + _diag_M(mu)
    return OperatorMatrix(n, entries)


@lru_cache(maxsize=None)
def build_MD(n: int) -> OperatorMatrix:
    shift = (t1 + t2) * RatFunc(Fraction(n, 2)) * A(1)
    entries = [list(r) for r in build_M(n).entries]
    for i in range(len(entries)):
        entries[i][i] = entries[i][i] - shift
    return OperatorMatrix(n, entries)


def build_M_at_zero(n: int) -> OperatorMatrix:
    """M (without the energy correction) at q = 0."""
    entries = _off_diagonal(n)
    for i, mu in enumerate(enumerate_partitions(n)):
        entries[i][i] = entries[i][i] - (t1 + t2) * Fraction(sum(m * m for m in mu), 2)
    return OperatorMatrix(n, entries)


@lru_cache(maxsize=None)
def build_M0(n: int) -> OperatorMatrix:
    """M_D at q = 0."""
    entries = _off_diagonal(n)
    for i, mu in enumerate(enumerate_partitions(n)):
        entries[i][i] = entries[i][i] + (t1 + t2) * Fraction(n - sum(m * m for m in mu), 2)
    return OperatorMatrix(n, entries)


def build_CS(n: int, theta) -> OperatorMatrix:
    """The Fock-space Calogero-Sutherland operator at coupling ``theta``."""
    theta = as_ratfunc(theta)
    split, join = _split_join(n)
    basis = enumerate_partitions(n)
    out = []
    for i, rho in enumerate(basis):
        row = []
        for j in range(len(basis)):
            x = theta * split[i][j] + RatFunc(join[i][j])
            if i == j:
                x = x + (1 - theta) * Fraction(sum(m * m for m in rho), 2)
            row.append(x)
        out.append(row)
    return OperatorMatrix(n, out)


def _ell_powers(n: int, base: RatFunc) -> list[RatFunc]:
    return [base ** len(mu) for mu in enumerate_partitions(n)]


def check_MDCS(n: int):
    """Compare M(0) with -t1^{l+1} Delta_CS(-t2/t1) t1^{-l}.

    Returns (ok, shift, mismatch) where ``shift`` is the scalar s such that
    M(0) = rhs + s*Id when the two sides differ by a multiple of the identity.
    """
    lhs = build_M_at_zero(n)
    cs = build_CS(n, -t2 / t1)
    # t1^{l} Delta t1^{-l} is conjugation by diag(t1^{-l}) in our helper's convention
    rhs = cs.conjugate_diag(_ell_powers(n, t1.inverse())).scale(-t1)
    diff = lhs - rhs
    if diff == OperatorMatrix(n, linalg.zeros(len(lhs.basis))):
        return True, ZERO, None
    if diff.is_diagonal():
        vals = {diff[i, i] for i in range(diff.dim)}
        if len(vals) == 1:
            return True, vals.pop(), None
    return False, None, lhs.first_mismatch(rhs)


def check_CS_duality(n: int):
    """Delta(1/theta) = -theta^{-1} (-theta)^{-l} Delta(theta) (-theta)^{l} at theta = -t2/t1.

    With theta = -t2/t1 the left side is Delta at -t1/t2, so this is the
    t1 <-> t2 exchange.  Returns the first mismatch or None.
    """
    theta = -t2 / t1
    lhs = build_CS(n, theta.inverse())
    conj = build_CS(n, theta).conjugate_diag(_ell_powers(n, -theta))
    rhs = conj.scale(-theta.inverse())
    return lhs.first_mismatch(rhs)


# ---------------------------------------------------------------------------
# singular points and residues
# ---------------------------------------------------------------------------


def singular_roots(n: int) -> list[tuple[int, int]]:
    """Labels (d, j) of the finite singular points zeta = -exp(2 pi i j / d).

    d runs over 2..n and j over residues coprime to d, so -zeta has exact
    order d.  Sorted by the argument of zeta in [0, 2 pi).
    """
    out = [(d, j) for d in range(2, n + 1) for j in range(d) if gcd(j, d) == 1]
    return sorted(out, key=lambda dj: root_angle(*dj))


def root_angle(d: int, j: int) -> Fraction:
    """Argument of zeta divided by 2 pi, in [0, 1)."""
    return (Fraction(j, d) + Fraction(1, 2)) % 1


def root_value(d: int, j: int):
    return -mpmath.expjpi(mpmath.mpf(2 * j) / d)


def singular_points(n: int) -> list:
    """0, the finite singular roots of unity, and infinity (as mpmath.inf)."""
    return [mpmath.mpc(0)] + [root_value(d, j) for d, j in singular_roots(n)] + [mpmath.inf]


def _label_of(n: int, zeta) -> tuple[int, int]:
    if isinstance(zeta, tuple):
        d, j = zeta
        if 2 <= d <= n and gcd(j, d) == 1:
            return d, j % d
        raise NotASingularRoot(f"{zeta} is not a singular root for n={n}")
    z = complex(zeta)
    for d, j in singular_roots(n):
        if abs(complex(root_value(d, j)) - z) < 1e-9:
            return d, j
    raise NotASingularRoot(f"{zeta} is not a singular root for n={n}")


def residue_formula(n: int, zeta) -> OperatorMatrix:
    """(t1+t2) sum_{k : (-zeta)^k = 1} alpha_{-k} alpha_k, a diagonal matrix."""
    d, _ = _label_of(n, zeta)
    basis = enumerate_partitions(n)
    out = linalg.zeros(len(basis))
    for i, mu in enumerate(basis):
        out[i][i] = (t1 + t2) * sum(m for m in mu if m % d == 0)
    return OperatorMatrix(n, out)


@lru_cache(maxsize=None)
def _min_poly(d: int) -> flint.fmpq_poly:
    """Monic minimal polynomial of zeta, i.e. Phi_d(-x) up to sign."""
    phi = flint.fmpz_poly.cyclotomic(d)
    coeffs = [int(c) * (-1) ** k for k, c in enumerate(phi.coeffs())]
    p = flint.fmpq_poly(coeffs)
    return p / p[p.degree()]


def _q_univariate(p: Poly) -> flint.fmpq_poly:
    if set(p.variables) - {"q"}:
        raise ValueError("expected a polynomial in q only")
    coeffs = {k: c.constant_value() for k, c in p.collect("q").items()}
    top = max(coeffs) if coeffs else 0
    return flint.fmpq_poly([flint.fmpq(coeffs.get(k, 0).numerator, coeffs.get(k, 0).denominator) for k in range(top + 1)])


def _mod_inverse(a: flint.fmpq_poly, m: flint.fmpq_poly) -> flint.fmpq_poly:
    g, s, _ = a.xgcd(m)
    if g.degree() != 0:
        raise ZeroDivisionError("not invertible modulo the minimal polynomial")
    return (s / g[0]) % m


def residue_entry(f: RatFunc, d: int) -> RatFunc:
    """Exact residue at any zeta with -zeta of order d of f(q)/q.

    ``f`` must have a q-only denominator.  The result is checked to be free
    of zeta (true for the QDE since all such residues are rational).
    """
    if f.is_zero():
        return ZERO
    P = _min_poly(d)
    den = _q_univariate(f.den)
    mult = 0
    rest = den
    while True:
        quo, rem = divmod(rest, P)
        if rem != 0:
            break
        rest = quo
        mult += 1
    if mult == 0:
        return ZERO
    if mult > 1:
        raise ArithmeticError("pole of order > 1")
    x = flint.fmpq_poly([0, 1])
    denom = (x * rest * P.derivative()) % P
    inv = _mod_inverse(denom, P)
    # numerator: q-polynomials times (t1, t2) monomials
    total = ZERO
    num = f.num
    other = {}
    for e, c in num.terms().items():
        key = e[1:]
        other.setdefault(key, {})[e[0]] = c
    for key, qc in other.items():
        top = max(qc)
        npoly = flint.fmpq_poly([flint.fmpq(qc.get(k, 0).numerator, qc.get(k, 0).denominator) for k in range(top + 1)])
        val = (npoly * inv) % P
        if val.degree() > 0:
            raise ArithmeticError("residue is not rational")
        r = val[0] if val.degree() == 0 else flint.fmpq(0)
        mono = Poly.from_terms({(0,) + key: 1})
        total = total + RatFunc(mono) * Fraction(int(r.p), int(r.q))
    return total


def residue_at_root(n: int, zeta) -> OperatorMatrix:
    """Residue of q^{-1} M_D at a finite singular root, computed from the matrix entries."""
    d, _ = _label_of(n, zeta)
    md = build_MD(n)
    out = linalg.zeros(md.dim)
    for i in range(md.dim):
        for j in range(md.dim):
            out[i][j] = residue_entry(md[i, j], d)
    return OperatorMatrix(n, out)


def residue_at_infinity(n: int) -> OperatorMatrix:
    """Residue of M_D(q) dq/q at q = infinity, i.e. minus the limit of M_D."""
    return build_MD(n).map(lambda f: -_limit_at_infinity(f))


def _limit_at_infinity(f: RatFunc) -> RatFunc:
    dn, dd = f.num.degree("q"), f.den.degree("q")
    if dn < dd:
        return ZERO
    if dn > dd:
        raise ArithmeticError("entry has a pole at infinity")
    return RatFunc(f.num.collect("q")[dn], f.den.collect("q")[dd])


def check_residue_sum(n: int):
    """Fuchsian relation: residues at 0, infinity and all roots sum to zero."""
    total = build_M0(n) + residue_at_infinity(n)
    for label in singular_roots(n):
        total = total + residue_at_root(n, label)
    zero = OperatorMatrix(n, linalg.zeros(total.dim))
    return total.first_mismatch(zero)


def check_residues(n: int):
    """Each symbolic residue equals the diagonal formula; returns first mismatch or None."""
    for label in singular_roots(n):
        got = residue_at_root(n, label)
        mm = got.first_mismatch(residue_formula(n, label))
        if mm is not None:
            return label, mm
    return None


# ---------------------------------------------------------------------------
# symmetries
# ---------------------------------------------------------------------------


def check_skew(n: int, which: str = "MD"):
    """<M v, w> + <v, M w> = 0 on all basis pairs; returns first failing pair or None."""
    m = build_MD(n) if which == "MD" else build_M(n)
    basis = m.basis
    weights = [herm_weight(mu) for mu in basis]
    for s in range(m.dim):
        for r in range(m.dim):
            if bar(m[r, s]) * weights[r] + weights[s] * m[s, r] != ZERO:
                return basis[s], basis[r]
    return None


def parity_signs(n: int) -> list[int]:
    return [(-1) ** len(mu) for mu in enumerate_partitions(n)]


def check_inversion(n: int):
    """M_D(1/q) = -S M_D(q) S with S = (-1)^l; returns first failing entry or None."""
    m = build_MD(n)
    sg = parity_signs(n)
    inv = m.subs({"q": q.inverse()})
    for i in range(m.dim):
        for j in range(m.dim):
            if inv[i, j] != -sg[i] * sg[j] * m[i, j]:
                return m.basis[i], m.basis[j]
    return None


def check_M0_spectrum(n: int):
    """det(M0 + c(lam)) = 0 for every lam |- n; returns the first failing lam or None."""
    m0 = build_M0(n)
    for lam in enumerate_partitions(n):
        c = content_sum(lam)
        shifted = [[x + (c if i == j else ZERO) for j, x in enumerate(row)] for i, row in enumerate(m0.entries)]
        if not linalg.det(shifted).is_zero():
            return lam
    return None
