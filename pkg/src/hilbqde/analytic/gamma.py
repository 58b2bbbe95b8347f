"""Complex Gamma function by Spouge's approximation, with reflection."""

from __future__ import annotations

import math
from functools import lru_cache

import mpmath
from mpmath import mp


class PoleOfGamma(ZeroDivisionError):
    pass


@lru_cache(maxsize=None)
def _spouge(prec: int) -> tuple[int, tuple]:
    """Parameter a and coefficients c_0..c_{a-1}, valid to ``prec`` bits."""
    a = int(math.ceil(prec / math.log2(2 * math.pi))) + 2
    # the coefficients alternate and reach about (2 pi)^a in size
    with mp.workprec(2 * prec + 64):
        coeffs = [mp.sqrt(2 * mp.pi)]
        fact = mpmath.mpf(1)
        for k in range(1, a):
            if k > 1:
                fact *= k - 1
            ck = (-1) ** (k - 1) / fact * mpmath.power(a - k, k - mpmath.mpf(1) / 2) * mp.exp(a - k)
            coeffs.append(ck)
    return a, tuple(coeffs)


def _near_pole(z, prec: int) -> bool:
    if abs(mpmath.im(z)) > mpmath.ldexp(1, -prec + 12):
        return False
    r = mpmath.re(z)
    k = mpmath.nint(r)
    return k <= 0 and abs(r - k) <= mpmath.ldexp(1, -prec + 12) * max(1, abs(k))


def gamma(z, prec: int | None = None):
    """Gamma(z) to ``prec`` bits (default: the current mpmath precision)."""
    prec = prec or mp.prec
    with mp.workprec(prec + 32):
        z = mpmath.mpmathify(z)
        if _near_pole(z, prec):
            raise PoleOfGamma(f"Gamma has a pole at {mpmath.nstr(z, 10)}")
        if mpmath.re(z) < 0.5:
            out = mp.pi / (mp.sin(mp.pi * z) * _gamma_right(1 - z, prec))
        else:
            out = _gamma_right(z, prec)
    return +out


def rgamma(z, prec: int | None = None):
    """1/Gamma(z); zero at the poles."""
    prec = prec or mp.prec
    try:
        return 1 / gamma(z, prec)
    except PoleOfGamma:
        return mpmath.mpf(0)


def _gamma_right(z, prec: int):
    """Gamma(z) for Re z >= 1/2: Spouge's formula gives Gamma(z + 1)."""
    a, coeffs = _spouge(prec)
    with mp.workprec(2 * prec + 64):
        w = mpmath.mpmathify(z)
        s = coeffs[0]
        for k in range(1, a):
            s += coeffs[k] / (w + k)
        out = mpmath.power(w + a, w + mpmath.mpf(1) / 2) * mp.exp(-(w + a)) * s
        return out / w
