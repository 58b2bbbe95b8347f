"""Exact scalar arithmetic: rationals, sparse polynomials and rational functions.

Everything symbolic in the package lives in the field Q(q, t1, t2) (or the
Macdonald/K-theory variables Q, T1, T2).  Polynomials are sparse maps from
exponent vectors to rationals over the fixed alphabet ``VARIABLES``; terms are
kept in graded-lexicographic order with ``q > t1 > t2 > Q > T > T1 > T2``.
(Q, T) are the Macdonald parameters, (T1, T2) the exponentiated t's.

The heavy lifting (multiplication, exact division, multivariate gcd) is done
by FLINT's ``fmpq_mpoly``; this module owns the canonical forms, the string
format, evaluation and Taylor expansion.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Any, Iterable, Mapping

import flint
import mpmath

VARIABLES = ("q", "t1", "t2", "Q", "T", "T1", "T2")
_INDEX = {name: i for i, name in enumerate(VARIABLES)}
_NVARS = len(VARIABLES)
_CTX = flint.fmpq_mpoly_ctx.get(VARIABLES, "deglex")

Rational = Fraction

#: relative size below which a numerically evaluated denominator counts as zero
POLE_GUARD_BITS = 16


class ZeroDenominator(ZeroDivisionError):
    pass


class PoleAtPoint(ZeroDivisionError):
    pass


class PoleAtCenter(PoleAtPoint):
    pass


def _fmpq(x) -> flint.fmpq:
    if isinstance(x, flint.fmpq):
        return x
    if isinstance(x, int):
        return flint.fmpq(x)
    if isinstance(x, _RationalABC):
        return flint.fmpq(int(x.numerator), int(x.denominator))
    if isinstance(x, str):
        f = Fraction(x)
        return flint.fmpq(f.numerator, f.denominator)
    raise TypeError(f"not an exact rational: {x!r}")


def _fraction(c: flint.fmpq) -> Fraction:
    return Fraction(int(c.p), int(c.q))


def _is_exact(x) -> bool:
    return isinstance(x, (int, _RationalABC, flint.fmpq)) and not isinstance(x, bool)


# ---------------------------------------------------------------------------
# Poly
# ---------------------------------------------------------------------------


class Poly:
    """Immutable sparse polynomial with rational coefficients."""

    __slots__ = ("_p", "_hash")

    def __init__(self, value: Any = 0):
        if isinstance(value, Poly):
            p = value._p
        elif isinstance(value, flint.fmpq_mpoly):
            p = value
        else:
            p = _CTX.constant(_fmpq(value))
        self._p = p
        self._hash = None

    @classmethod
    def var(cls, name: str) -> "Poly":
        return cls(_CTX.gens()[_INDEX[name]])

    @classmethod
    def from_terms(cls, terms: Mapping[tuple, Any], variables: Iterable[str] = VARIABLES) -> "Poly":
        """Build from ``{exponent tuple: coefficient}`` over ``variables``."""
        variables = tuple(variables)
        idx = [_INDEX[v] for v in variables]
        full = {}
        for exps, c in terms.items():
            if len(exps) != len(variables):
                raise ValueError("exponent vector does not match variable set")
            e = [0] * _NVARS
            for i, k in zip(idx, exps):
                if k < 0:
                    raise ValueError("negative exponent in polynomial")
                e[i] = int(k)
            e = tuple(e)
            full[e] = full.get(e, flint.fmpq(0)) + _fmpq(c)
        return cls(_CTX.from_dict({e: c for e, c in full.items() if c != 0}))

    # -- structure -------------------------------------------------------
    def terms(self) -> dict[tuple, Fraction]:
        """Exponent vector (full alphabet) to coefficient, graded-lex descending."""
        return {tuple(int(x) for x in e): _fraction(c) for e, c in zip(self._p.monoms(), self._p.coeffs())}

    @property
    def variables(self) -> tuple[str, ...]:
        degs = self._p.degrees() if not self._p.is_zero() else (0,) * _NVARS
        return tuple(v for v, d in zip(VARIABLES, degs) if d > 0)

    def is_zero(self) -> bool:
        return self._p.is_zero()

    def is_constant(self) -> bool:
        return self._p.is_constant()

    def constant_value(self) -> Fraction:
        if not self._p.is_constant():
            raise ValueError("polynomial is not constant")
        return _fraction(self._p.leading_coefficient()) if not self._p.is_zero() else Fraction(0)

    def degree(self, name: str) -> int:
        if self._p.is_zero():
            return -1
        return int(self._p.degrees()[_INDEX[name]])

    def total_degree(self) -> int:
        return -1 if self._p.is_zero() else int(self._p.total_degree())

    def leading_coefficient(self) -> Fraction:
        return _fraction(self._p.leading_coefficient())

    def collect(self, name: str) -> dict[int, "Poly"]:
        """Coefficients with respect to one variable: ``{degree: Poly}``."""
        i = _INDEX[name]
        out: dict[int, dict] = {}
        for e, c in zip(self._p.monoms(), self._p.coeffs()):
            e = [int(x) for x in e]
            k = e[i]
            e[i] = 0
            out.setdefault(k, {})[tuple(e)] = c
        return {k: Poly(_CTX.from_dict(d)) for k, d in sorted(out.items())}

    # -- arithmetic ------------------------------------------------------
    @staticmethod
    def _coerce(other) -> flint.fmpq_mpoly | None:
        if isinstance(other, Poly):
            return other._p
        if _is_exact(other):
            return _CTX.constant(_fmpq(other))
        return None

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else Poly(self._p + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else Poly(self._p - o)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else Poly(o - self._p)

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else Poly(self._p * o)

    __rmul__ = __mul__

    def __neg__(self):
        return Poly(-self._p)

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of a polynomial; use RatFunc")
        return Poly(self._p ** k)

    def __truediv__(self, other):
        return RatFunc(self, other)

    def __rtruediv__(self, other):
        return RatFunc(other, self)

    def divexact(self, other: "Poly") -> "Poly":
        return Poly(self._p / self._coerce(other))

    def gcd(self, other: "Poly") -> "Poly":
        return Poly(self._p.gcd(other._p))

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._p == o

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(sorted((tuple(e), str(c)) for e, c in zip(self._p.monoms(), self._p.coeffs()))))
        return self._hash

    # -- substitution / evaluation ---------------------------------------
    def bar(self, names=("t1", "t2")) -> "Poly":
        """Substitute ``v -> -v`` for every name in ``names``."""
        idx = [_INDEX[n] for n in names]
        d = {}
        for e, c in zip(self._p.monoms(), self._p.coeffs()):
            s = sum(e[i] for i in idx)
            d[tuple(e)] = -c if s % 2 else c
        return Poly(_CTX.from_dict(d))

    def evaluate(self, point: Mapping[str, Any]):
        """Evaluate at ``point`` (variables not present must not occur).

        Exact rationals give a ``Fraction``; anything else is combined with
        ordinary arithmetic (so mpmath numbers give mpmath numbers).
        """
        used = self.variables
        missing = [v for v in used if v not in point]
        if missing:
            raise KeyError(f"no value for {missing}")
        if all(_is_exact(point[v]) for v in used):
            vals = [_fmpq(point[v]) if v in used else flint.fmpq(0) for v in VARIABLES]
            if self._p.is_zero():
                return Fraction(0)
            return _fraction(self._p(*vals))
        return _eval_terms(self._p, point, used)

    def __str__(self):
        return _poly_str(self._p)

    def __repr__(self):
        return f"Poly({str(self)!r})"


def _eval_terms(p: flint.fmpq_mpoly, point, used):
    idx = [_INDEX[v] for v in used]
    vals = [point[v] for v in used]
    powers: list[dict[int, Any]] = [{0: 1} for _ in used]
    total = 0
    for e, c in zip(p.monoms(), p.coeffs()):
        term = mpmath.mpf(int(c.p)) / int(c.q)
        for j, i in enumerate(idx):
            k = int(e[i])
            if k:
                cache = powers[j]
                if k not in cache:
                    cache[k] = vals[j] ** k
                term = term * cache[k]
        total = total + term
    return total


def _monomial_str(e) -> str:
    parts = []
    for name, k in zip(VARIABLES, e):
        if k == 1:
            parts.append(name)
        elif k > 1:
            parts.append(f"{name}^{k}")
    return "*".join(parts)


def _poly_str(p: flint.fmpq_mpoly) -> str:
    if p.is_zero():
        return "0"
    out = []
    for e, c in zip(p.monoms(), p.coeffs()):
        c = _fraction(c)
        mono = _monomial_str(e)
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if not mono:
            body = str(a)
        elif a == 1:
            body = mono
        elif a.denominator == 1:
            body = f"{a}*{mono}"
        else:
            body = f"{a.numerator}/{a.denominator}*{mono}"
        out.append((sign, body))
    s = ("-" if out[0][0] == "-" else "") + out[0][1]
    for sign, body in out[1:]:
        s += sign + body
    return s


# ---------------------------------------------------------------------------
# RatFunc
# ---------------------------------------------------------------------------


class RatFunc:
    """Reduced quotient of polynomials with a monic (graded-lex) denominator.

    Equal rational functions have identical ``num``/``den``, so equality and
    hashing are structural.
    """

    __slots__ = ("_n", "_d", "_hash")

    def __init__(self, num: Any = 0, den: Any = 1):
        if isinstance(num, RatFunc) or isinstance(den, RatFunc):
            r = as_ratfunc(num) / as_ratfunc(den)
            self._n, self._d, self._hash = r._n, r._d, None
            return
        n = Poly(num)._p
        d = Poly(den)._p
        if d.is_zero():
            raise ZeroDenominator("zero denominator")
        if n.is_zero():
            self._n, self._d, self._hash = n, _CTX.constant(1), None
            return
        if not d.is_constant():
            g = n.gcd(d)
            if not g.is_constant():
                n = n / g
                d = d / g
        self._n, self._d = _monic(n, d)
        self._hash = None

    @classmethod
    def _raw(cls, n, d) -> "RatFunc":
        r = object.__new__(cls)
        r._n, r._d, r._hash = n, d, None
        return r

    @classmethod
    def var(cls, name: str) -> "RatFunc":
        return cls._raw(_CTX.gens()[_INDEX[name]], _CTX.constant(1))

    @property
    def num(self) -> Poly:
        return Poly(self._n)

    @property
    def den(self) -> Poly:
        return Poly(self._d)

    @property
    def variables(self) -> tuple[str, ...]:
        used = set(self.num.variables) | set(self.den.variables)
        return tuple(v for v in VARIABLES if v in used)

    def is_zero(self) -> bool:
        return self._n.is_zero()

    def is_polynomial(self) -> bool:
        return self._d.is_constant()

    def is_constant(self) -> bool:
        return self._n.is_constant() and self._d.is_constant()

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"not a constant: {self}")
        return Poly(self._n).constant_value() / Poly(self._d).constant_value()

    # -- arithmetic ------------------------------------------------------
    def __add__(self, other):
        o = _coerce_rf(other)
        if o is None:
            return NotImplemented
        return _add(self, o)

    __radd__ = __add__

    def __sub__(self, other):
        o = _coerce_rf(other)
        if o is None:
            return NotImplemented
        return _add(self, -o)

    def __rsub__(self, other):
        o = _coerce_rf(other)
        if o is None:
            return NotImplemented
        return _add(o, -self)

    def __neg__(self):
        return RatFunc._raw(-self._n, self._d)

    def __mul__(self, other):
        o = _coerce_rf(other)
        if o is None:
            return NotImplemented
        return _mul(self, o)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _coerce_rf(other)
        if o is None:
            return NotImplemented
        return _mul(self, o.inverse())

    def __rtruediv__(self, other):
        o = _coerce_rf(other)
        if o is None:
            return NotImplemented
        return _mul(o, self.inverse())

    def inverse(self) -> "RatFunc":
        if self._n.is_zero():
            raise ZeroDenominator("inverse of zero")
        n, d = _monic(self._d, self._n)
        return RatFunc._raw(n, d)

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return RatFunc._raw(self._n ** k, self._d ** k)

    def __eq__(self, other):
        o = _coerce_rf(other)
        if o is None:
            return NotImplemented
        return self._n == o._n and self._d == o._d

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((Poly(self._n), Poly(self._d)))
        return self._hash

    # -- substitution ----------------------------------------------------
    def bar(self, names=("t1", "t2")) -> "RatFunc":
        """``v -> -v`` for each name; q and the other variables are fixed."""
        n = Poly(self._n).bar(names)._p
        d = Poly(self._d).bar(names)._p
        n, d = _monic(n, d)
        return RatFunc._raw(n, d)

    def subs(self, mapping: Mapping[str, Any]) -> "RatFunc":
        """Exact substitution of variables by rationals, Polys or RatFuncs."""
        vals = {k: as_ratfunc(v) for k, v in mapping.items()}
        return _compose(Poly(self._n), vals) / _compose(Poly(self._d), vals)

    def evaluate(self, point: Mapping[str, Any]):
        """Exact value at rational points, numeric (mpmath) otherwise."""
        n = Poly(self._n).evaluate(point)
        d = Poly(self._d).evaluate(point)
        if isinstance(d, Fraction):
            if d == 0:
                raise PoleAtPoint(f"denominator of {self} vanishes at {dict(point)}")
            return n / d
        scale = _abs_terms(self._d, point)
        if abs(d) <= scale * mpmath.mpf(2) ** (-mpmath.mp.prec + POLE_GUARD_BITS):
            raise PoleAtPoint(f"denominator of {self} vanishes at {dict(point)}")
        return n / d

    def __str__(self):
        n = _poly_str(self._n)
        if self._d.is_one():
            return n
        d = _poly_str(self._d)
        if len(self._n) > 1:
            n = f"({n})"
        if len(self._d) > 1 or not self._d.is_constant():
            d = f"({d})"
        return f"{n}/{d}"

    def __repr__(self):
        return f"RatFunc({str(self)!r})"


def _abs_terms(p, point):
    used = Poly(p).variables
    return sum(abs(mpmath.mpf(int(c.p)) / int(c.q)) *
               mpmath.fprod(abs(point[v]) ** int(e[_INDEX[v]]) for v in used)
               for e, c in zip(p.monoms(), p.coeffs()))


def _monic(n, d):
    lc = d.leading_coefficient()
    if lc != 1:
        inv = 1 / lc
        n = n * inv
        d = d * inv
    return n, d


def _coerce_rf(x) -> RatFunc | None:
    if isinstance(x, RatFunc):
        return x
    if isinstance(x, Poly):
        return RatFunc._raw(x._p, _CTX.constant(1))
    if _is_exact(x):
        return RatFunc._raw(_CTX.constant(_fmpq(x)), _CTX.constant(1))
    return None


def as_ratfunc(x) -> RatFunc:
    r = _coerce_rf(x)
    if r is None:
        if isinstance(x, str):
            return parse(x)
        raise TypeError(f"cannot convert {x!r} to RatFunc")
    return r


def _add(a: RatFunc, b: RatFunc) -> RatFunc:
    if a._n.is_zero():
        return b
    if b._n.is_zero():
        return a
    if a._d == b._d:
        n = a._n + b._n
        if n.is_zero():
            return RatFunc._raw(n, _CTX.constant(1))
        if a._d.is_constant():
            return RatFunc._raw(n, a._d)
        g = n.gcd(a._d)
        if g.is_constant():
            return RatFunc._raw(n, a._d)
        return RatFunc._raw(*_monic(n / g, a._d / g))
    if a._d.is_constant() and b._d.is_constant():
        return RatFunc._raw(a._n + b._n, a._d)
    g = a._d.gcd(b._d)
    if g.is_constant():
        n = a._n * b._d + b._n * a._d
        return RatFunc._raw(*_monic(n, a._d * b._d)) if not n.is_zero() else RatFunc(0)
    ad, bd = a._d / g, b._d / g
    n = a._n * bd + b._n * ad
    if n.is_zero():
        return RatFunc(0)
    d = a._d * bd
    h = n.gcd(g)
    if not h.is_constant():
        n, d = n / h, d / h
    return RatFunc._raw(*_monic(n, d))


def _mul(a: RatFunc, b: RatFunc) -> RatFunc:
    if a._n.is_zero() or b._n.is_zero():
        return RatFunc(0)
    an, ad, bn, bd = a._n, a._d, b._n, b._d
    if not bd.is_constant():
        g = an.gcd(bd)
        if not g.is_constant():
            an, bd = an / g, bd / g
    if not ad.is_constant():
        g = bn.gcd(ad)
        if not g.is_constant():
            bn, ad = bn / g, ad / g
    return RatFunc._raw(*_monic(an * bn, ad * bd))


def _compose(p: Poly, vals: Mapping[str, RatFunc]) -> RatFunc:
    """Substitute into a polynomial by Horner in each substituted variable."""
    names = [v for v in p.variables if v in vals]
    if not names:
        return RatFunc._raw(p._p, _CTX.constant(1))
    name, rest = names[0], {k: v for k, v in vals.items() if k != names[0]}
    coeffs = p.collect(name)
    x = vals[name]
    top = max(coeffs)
    acc = RatFunc(0)
    for k in range(top, -1, -1):
        acc = acc * x
        if k in coeffs:
            acc = acc + _compose(coeffs[k], rest)
    return acc


# ---------------------------------------------------------------------------
# convenience
# ---------------------------------------------------------------------------

q, t1, t2, Q, T, T1, T2 = (RatFunc.var(v) for v in VARIABLES)
ZERO = RatFunc(0)
ONE = RatFunc(1)


def poly_arith(a: Poly, b: Poly, op: str) -> Poly:
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


def ratfunc_normalize(num: Poly, den: Poly) -> RatFunc:
    return RatFunc(num, den)


def ratfunc_eval(f: RatFunc, point: Mapping[str, Any], prec: int = 256):
    """Evaluate ``f`` as an ``mpc`` at ``prec`` bits.

    The result carries a relative error of at most ``2**(-prec + 16)``
    away from poles: coefficients are exact and the number of roundings is
    bounded by the term count, which stays well below 2**16 here.
    """
    with mpmath.workprec(prec):
        pt = {k: (mpmath.mpc(v) if not _is_exact(v) else v) for k, v in point.items()}
        value = f.evaluate(pt)
        if isinstance(value, Fraction):
            return mpmath.mpc(mpmath.mpf(value.numerator) / value.denominator)
        return mpmath.mpc(value)


def ratfunc_taylor(f: RatFunc, variable: str, center: Any, order: int,
                   point: Mapping[str, Any] | None = None) -> list:
    """First ``order + 1`` Taylor coefficients of ``f`` in ``variable``.

    With a rational ``center`` and no ``point`` the coefficients are exact
    RatFuncs in the remaining variables.  Otherwise the remaining variables are
    bound by ``point`` and the coefficients are mpmath numbers at the current
    working precision.
    """
    exact = point is None and _is_exact(center)
    num = f.num.collect(variable)
    den = f.den.collect(variable)
    if exact:
        c = Fraction(center)
        a = _shift_exact(num, c, order)
        b = _shift_exact(den, c, order)
        if b[0].is_zero():
            raise PoleAtCenter(f"{f} has a pole at {variable}={center}")
        inv0 = b[0].inverse()
        out = []
        for k in range(order + 1):
            s = a[k]
            for j in range(1, k + 1):
                if not b[j].is_zero() and not out[k - j].is_zero():
                    s = s - b[j] * out[k - j]
            out.append(s * inv0)
        return out
    point = dict(point or {})
    ncoef = _numeric_coeffs(num, point)
    dcoef = _numeric_coeffs(den, point)
    return taylor_of_quotient(ncoef, dcoef, center, order)


def _shift_exact(coeffs: dict[int, Poly], c: Fraction, order: int) -> list[RatFunc]:
    top = max(coeffs) if coeffs else 0
    dense = [RatFunc(coeffs.get(k, Poly(0))) for k in range(top + 1)]
    shifted = _taylor_shift(dense, c, lambda x: x.is_zero())
    shifted += [ZERO] * (order + 1 - len(shifted))
    return shifted[: order + 1]


def _numeric_coeffs(coeffs: dict[int, Poly], point) -> list:
    top = max(coeffs) if coeffs else 0
    out = []
    for k in range(top + 1):
        p = coeffs.get(k)
        if p is None or p.is_zero():
            out.append(mpmath.mpc(0))
            continue
        v = p.evaluate(point) if p.variables else p.constant_value()
        if isinstance(v, Fraction):
            v = mpmath.mpf(v.numerator) / v.denominator
        out.append(mpmath.mpc(v))
    return out


def _taylor_shift(coeffs: list, c, is_zero=None) -> list:
    """Coefficients of p(c + h) in h from those of p(x) (repeated Horner)."""
    a = list(coeffs)
    n = len(a)
    for i in range(n):
        for j in range(n - 2, i - 1, -1):
            a[j] = a[j] + c * a[j + 1]
    return a


def taylor_of_quotient(num: list, den: list, center, order: int) -> list:
    """Taylor coefficients at ``center`` of the quotient of two numeric polynomials."""
    a = _taylor_shift(num, center)
    b = _taylor_shift(den, center)
    a += [0] * (order + 1 - len(a))
    b += [0] * (order + 1 - len(b))
    scale = max((abs(x) for x in b), default=0)
    if scale == 0 or abs(b[0]) <= scale * mpmath.mpf(2) ** (-mpmath.mp.prec + POLE_GUARD_BITS):
        raise PoleAtCenter(f"pole at center {center}")
    inv0 = 1 / b[0]
    out = []
    nb = len(b)
    for k in range(order + 1):
        s = a[k]
        for j in range(1, min(k, nb - 1) + 1):
            s -= b[j] * out[k - j]
        out.append(s * inv0)
    return out


# ---------------------------------------------------------------------------
# Laurent polynomials
# ---------------------------------------------------------------------------


@dataclass
class LaurentPoly:
    """Finite sum ``sum_k terms[k] * variable**k`` with arbitrary coefficients."""

    variable: str
    terms: dict[int, Any] = field(default_factory=dict)

    def evaluate(self, x):
        total = None
        for k, c in self.terms.items():
            v = c * (x ** k)
            total = v if total is None else total + v
        return 0 if total is None else total

    def degree_window(self) -> tuple[int, int]:
        ks = sorted(self.terms)
        return (ks[0], ks[-1]) if ks else (0, 0)

    def __str__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"({c})*{self.variable}^{k}" for k, c in sorted(self.terms.items()))


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+(?:\.\d*)?|\.\d+)|([A-Za-z]\w*)|(\*\*|[-+*/^()]))")


def _tokenize(s: str) -> list[str]:
    pos, out = 0, []
    s = s.strip()
    while pos < len(s):
        m = _TOKEN.match(s, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse {s!r} at position {pos}")
        out.append(m.group(1) or m.group(2) or ("^" if m.group(3) == "**" else m.group(3)))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, tokens):
        self.toks = tokens
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self, expected=None):
        tok = self.peek()
        if tok is None or (expected is not None and tok != expected):
            raise ValueError(f"expected {expected or 'token'}, got {tok!r}")
        self.i += 1
        return tok

    def expr(self):
        sign = 1
        while self.peek() in ("+", "-"):
            if self.take() == "-":
                sign = -sign
        val = self.term()
        if sign < 0:
            val = -val
        while self.peek() in ("+", "-"):
            op = self.take()
            rhs = self.term()
            val = val + rhs if op == "+" else val - rhs
        return val

    def term(self):
        val = self.unary()
        while self.peek() in ("*", "/"):
            op = self.take()
            rhs = self.unary()
            val = val * rhs if op == "*" else val / rhs
        return val

    def unary(self):
        if self.peek() == "-":
            self.take()
            return -self.unary()
        if self.peek() == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() == "^":
            self.take()
            sign = 1
            if self.peek() == "-":
                self.take()
                sign = -1
            exp = self.take()
            if not exp.isdigit():
                raise ValueError(f"integer exponent expected, got {exp!r}")
            return base ** (sign * int(exp))
        return base

    def atom(self):
        tok = self.take()
        if tok == "(":
            val = self.expr()
            self.take(")")
            return val
        if tok[0].isdigit() or tok[0] == ".":
            return RatFunc(Fraction(tok))
        if tok in _INDEX:
            return RatFunc.var(tok)
        raise ValueError(f"unknown symbol {tok!r}")


def parse(s: str) -> RatFunc:
    """Parse the canonical string form (or any +-*/^ expression) back to a RatFunc."""
    p = _Parser(_tokenize(s))
    val = p.expr()
    if p.peek() is not None:
        raise ValueError(f"trailing input in {s!r}")
    return val
