"""Fock space vectors, the Heisenberg operators alpha_k and the two inner products.

Basis vectors are |mu> = (1/z(mu)) prod alpha_{-mu_i} |0>.  With this
normalization alpha_{-m}|mu> = m (m_m(mu) + 1) |mu + m> and, for k > 0,
alpha_k |mu> = |mu - k> when k is a part of mu and 0 otherwise.
"""

from __future__ import annotations

from typing import Callable, Iterable, Mapping

import mpmath

from .algebra import ONE, ZERO, Poly, RatFunc, as_ratfunc, parse, t1, t2, VARIABLES
from .partitions import Partition, enumerate_partitions, zmu


class MixedEnergy(ValueError):
    pass


class FockVector:
    """Homogeneous finite sum of basis vectors with RatFunc coefficients."""

    __slots__ = ("energy", "coeffs")

    def __init__(self, energy: int, coeffs: Mapping | None = None):
        self.energy = energy
        clean = {}
        for mu, c in (coeffs or {}).items():
            mu = Partition(mu)
            if mu.size != energy:
                raise MixedEnergy(f"{mu} does not have size {energy}")
            c = as_ratfunc(c)
            if not c.is_zero():
                clean[mu] = c
        self.coeffs = clean

    @classmethod
    def from_column(cls, n: int, column: Iterable) -> "FockVector":
        return cls(n, dict(zip(enumerate_partitions(n), column)))

    def column(self) -> list[RatFunc]:
        return [self.coeffs.get(mu, ZERO) for mu in enumerate_partitions(self.energy)]

    def __getitem__(self, mu) -> RatFunc:
        return self.coeffs.get(Partition(mu), ZERO)

    def is_zero(self) -> bool:
        return not self.coeffs

    def _check(self, other: "FockVector"):
        if other.energy != self.energy:
            raise MixedEnergy(f"energies {self.energy} and {other.energy}")

    def __add__(self, other: "FockVector") -> "FockVector":
        self._check(other)
        out = dict(self.coeffs)
        for mu, c in other.coeffs.items():
            out[mu] = out.get(mu, ZERO) + c
        return FockVector(self.energy, out)

    def __sub__(self, other: "FockVector") -> "FockVector":
        return self + (-1) * other

    def __neg__(self):
        return (-1) * self

    def scale(self, a) -> "FockVector":
        a = as_ratfunc(a)
        return FockVector(self.energy, {mu: a * c for mu, c in self.coeffs.items()})

    def __rmul__(self, a):
        return self.scale(a)

    def map_coeffs(self, f: Callable[[RatFunc], RatFunc]) -> "FockVector":
        return FockVector(self.energy, {mu: f(c) for mu, c in self.coeffs.items()})

    def relabel(self, f: Callable[[Partition], Partition]) -> "FockVector":
        return FockVector(self.energy, {f(mu): c for mu, c in self.coeffs.items()})

    def __eq__(self, other):
        if not isinstance(other, FockVector):
            return NotImplemented
        return self.energy == other.energy and self.coeffs == other.coeffs

    def to_json(self) -> dict:
        return {str(mu): str(c) for mu, c in sorted(self.coeffs.items(), key=lambda kv: _order_key(kv[0]))}

    @classmethod
    def from_json(cls, energy: int, data: Mapping[str, str]) -> "FockVector":
        return cls(energy, {Partition(k): parse(v) for k, v in data.items()})

    def __repr__(self):
        body = " + ".join(f"({c})|{mu}>" for mu, c in self.coeffs.items()) or "0"
        return f"FockVector[{self.energy}]: {body}"


def _order_key(mu: Partition):
    return enumerate_partitions(mu.size).index(mu)


def vacuum() -> FockVector:
    return FockVector(0, {Partition(()): ONE})


def basis_vector(mu) -> FockVector:
    mu = Partition(mu)
    return FockVector(mu.size, {mu: ONE})


def power_sum(mu) -> FockVector:
    """The power sum p_mu, which is z(mu)|mu>."""
    mu = Partition(mu)
    return FockVector(mu.size, {mu: RatFunc(zmu(mu))})


def apply_alpha(k: int, v: FockVector) -> FockVector:
    if k == 0:
        raise ValueError("alpha_0 is not used")
    out: dict = {}
    if k < 0:
        m = -k
        for mu, c in v.coeffs.items():
            nu = mu.add_part(m)
            out[nu] = out.get(nu, ZERO) + c * (m * (mu.count(m) + 1))
        return FockVector(v.energy + m, out)
    for mu, c in v.coeffs.items():
        if k in mu:
            nu = mu.remove_part(k)
            out[nu] = out.get(nu, ZERO) + c
    return FockVector(v.energy - k, out)


def apply_word(ks: Iterable[int], v: FockVector) -> FockVector:
    """Apply alpha_{k_last} first: ``apply_word([a, b], v) = alpha_a alpha_b v``."""
    for k in reversed(list(ks)):
        v = apply_alpha(k, v)
    return v


def energy(v: FockVector) -> int:
    return v.energy


def bar(f: RatFunc) -> RatFunc:
    """t1 -> -t1, t2 -> -t2; q is fixed."""
    return as_ratfunc(f).bar(("t1", "t2"))


def herm_weight(mu) -> RatFunc:
    return (t1 * t2) ** (-len(mu)) * RatFunc(1, zmu(mu))


def inner_herm(v: FockVector, w: FockVector) -> RatFunc:
    if v.energy != w.energy:
        raise MixedEnergy("inner product of different energies")
    total = ZERO
    for mu, c in v.coeffs.items():
        d = w.coeffs.get(mu)
        if d is not None:
            total = total + bar(c) * d * herm_weight(mu)
    return total


# -- the (T1, T2) product ----------------------------------------------------


class HalfExp:
    """Rational function in T1^(1/2), T2^(1/2).

    Stored as a RatFunc whose variables ``T1``, ``T2`` stand for the square
    roots, i.e. exponents live on the doubled lattice.
    """

    __slots__ = ("root",)

    def __init__(self, root: RatFunc):
        self.root = root

    @classmethod
    def from_T(cls, f) -> "HalfExp":
        f = as_ratfunc(f)
        s1, s2 = RatFunc.var("T1"), RatFunc.var("T2")
        return cls(f.subs({"T1": s1 * s1, "T2": s2 * s2}))

    def as_T(self) -> RatFunc | None:
        """The same value as a RatFunc in T1, T2, if all exponents are even."""
        num, den = self.root.num, self.root.den
        i1, i2 = VARIABLES.index("T1"), VARIABLES.index("T2")
        parts = []
        for p in (num, den):
            terms = p.terms()
            if any(e[i1] % 2 or e[i2] % 2 for e in terms):
                return None
            halved = {tuple(x // 2 if k in (i1, i2) else x for k, x in enumerate(e)): c for e, c in terms.items()}
            parts.append(Poly.from_terms(halved))
        return RatFunc(parts[0], parts[1])

    def bar(self) -> "HalfExp":
        s1, s2 = RatFunc.var("T1"), RatFunc.var("T2")
        return HalfExp(self.root.subs({"T1": s1.inverse(), "T2": s2.inverse()}))

    def __add__(self, other):
        return HalfExp(self.root + _root(other))

    def __mul__(self, other):
        return HalfExp(self.root * _root(other))

    __rmul__ = __mul__
    __radd__ = __add__

    def __eq__(self, other):
        return self.root == _root(other)

    def evaluate(self, s1, s2):
        """Value at T1 = e^{2 pi i s1}, T2 = e^{2 pi i s2}."""
        r1 = mpmath.exp(mpmath.pi * 1j * s1)
        r2 = mpmath.exp(mpmath.pi * 1j * s2)
        return self.root.evaluate({"T1": r1, "T2": r2})

    def __str__(self):
        t = self.as_T()
        if t is not None:
            return str(t)
        n = _half_poly_str(self.root.num)
        if self.root.is_polynomial():
            return n
        return f"({n})/({_half_poly_str(self.root.den)})"

    __repr__ = __str__


def _half_poly_str(p: Poly) -> str:
    out = []
    for e, c in p.terms().items():
        factors = [] if abs(c) == 1 and any(e) else [str(abs(c))]
        for name, k in zip(VARIABLES, e):
            if not k:
                continue
            if name in ("T1", "T2"):
                k = str(k // 2) if k % 2 == 0 else f"({k}/2)"
            factors.append(name if k in (1, "1") else f"{name}^{k}")
        out.append(("-" if c < 0 else "+") + "*".join(factors))
    s = "".join(out) or "0"
    return s[1:] if s.startswith("+") else s


def _root(x) -> RatFunc:
    if isinstance(x, HalfExp):
        return x.root
    return HalfExp.from_T(x).root


def kt_weight(mu) -> HalfExp:
    s1, s2 = RatFunc.var("T1"), RatFunc.var("T2")
    w = RatFunc(1, zmu(mu))
    for m in mu:
        w = w * (s1 ** m - s1 ** (-m)) * (s2 ** m - s2 ** (-m))
    return HalfExp(w)


def kt_weight_numeric(mu, s1, s2):
    w = mpmath.mpf(1) / zmu(mu)
    for m in mu:
        w *= (2j * mpmath.sin(mpmath.pi * m * s1)) * (2j * mpmath.sin(mpmath.pi * m * s2))
    return w


def inner_KT(v: FockVector, w: FockVector) -> HalfExp:
    if v.energy != w.energy:
        raise MixedEnergy("inner product of different energies")
    total = HalfExp(ZERO)
    for mu, c in v.coeffs.items():
        d = w.coeffs.get(mu)
        if d is not None:
            total = total + HalfExp.from_T(c).bar() * HalfExp.from_T(d) * kt_weight(mu)
    return total


def adjoint_check(k: int, n: int):
    """Check <alpha_k v, w> = <v, (t1 t2)^sgn(k) alpha_{-k} w> on all basis pairs.

    Returns None on success, otherwise the first failing (v, w) pair of partitions.
    """
    sgn = 1 if k > 0 else -1
    factor = (t1 * t2) ** sgn
    for e in range(0, n + 1):
        e2 = e - k
        if e2 < 0:
            continue
        for mu in enumerate_partitions(e):
            for nu in enumerate_partitions(e2):
                v, w = basis_vector(mu), basis_vector(nu)
                lhs = inner_herm(apply_alpha(k, v), w)
                rhs = inner_herm(v, apply_alpha(-k, w).scale(factor))
                if lhs != rhs:
                    return mu, nu
    return None
