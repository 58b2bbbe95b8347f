"""Exact conversions between mpmath numbers and python-flint balls."""

from __future__ import annotations

from contextlib import contextmanager
from fractions import Fraction

import flint
import mpmath


@contextmanager
def flint_prec(bits: int):
    old = flint.ctx.prec
    flint.ctx.prec = bits
    try:
        yield
    finally:
        flint.ctx.prec = old


def _arb_from_mpf(x) -> flint.arb:
    x = mpmath.mpf(x)
    if not mpmath.isfinite(x):
        raise ValueError("cannot convert a non-finite number")
    sign, man, exp, _ = x._mpf_
    return flint.arb((-int(man) if sign else int(man), int(exp)))


def to_acb(x) -> flint.acb:
    if isinstance(x, flint.acb):
        return x
    if isinstance(x, flint.arb):
        return flint.acb(x)
    if isinstance(x, (int, flint.fmpz)):
        return flint.acb(x)
    if isinstance(x, Fraction):
        return flint.acb(flint.arb(flint.fmpq(x.numerator, x.denominator)))
    x = mpmath.mpmathify(x)
    if isinstance(x, mpmath.mpc):
        return flint.acb(_arb_from_mpf(x.real), _arb_from_mpf(x.imag))
    return flint.acb(_arb_from_mpf(x))


def to_mpf(x: flint.arb) -> mpmath.mpf:
    man, exp = x.mid().man_exp()
    return mpmath.mpf((int(man), int(exp))) if man != 0 else mpmath.mpf(0)


def to_mpc(x: flint.acb) -> mpmath.mpc:
    return mpmath.mpc(to_mpf(x.real), to_mpf(x.imag))


def to_acb_matrix(m) -> flint.acb_mat:
    if isinstance(m, flint.acb_mat):
        return m
    rows, cols = m.rows, m.cols
    out = flint.acb_mat(rows, cols)
    for i in range(rows):
        for j in range(cols):
            out[i, j] = to_acb(m[i, j])
    return out


def to_mp_matrix(m: flint.acb_mat) -> mpmath.matrix:
    out = mpmath.matrix(m.nrows(), m.ncols())
    for i in range(m.nrows()):
        for j in range(m.ncols()):
            out[i, j] = to_mpc(m[i, j])
    return out
