from fractions import Fraction

import mpmath
import pytest

from hilbqde.analytic.transport import PathSpec, SingularityTooClose, liouville_error, system, transport
from hilbqde.operators import singular_points

S1, S2 = Fraction(31, 100), Fraction(47, 100)
PREC = 192


def eye_error(m):
    return mpmath.mnorm(m - mpmath.eye(m.rows), 1)


def test_energy_one_is_trivial():
    phi = transport(1, S1, S2, [-1, 0.3 + 0.4j, 2j], prec=PREC)
    assert phi.rows == 1 and phi[0, 0] == 1


def test_matrix_matches_exact_operator():
    sysm = system(3, S1, S2, PREC)
    from hilbqde.operators import build_MD
    md = build_MD(3)
    qv = Fraction(1, 3)
    with mpmath.workprec(PREC):
        m = sysm.matrix(mpmath.mpf(1) / 3)
        for i in range(3):
            for j in range(3):
                want = md[i, j].evaluate({"q": qv, "t1": S1, "t2": S2})
                assert abs(m[i, j] - mpmath.mpf(want.numerator) / want.denominator) < mpmath.mpf(2) ** -180


def test_round_trip_is_identity():
    path = [-1, -0.5 + 0.5j, 0.4j, 0.3 - 0.1j]
    fwd = transport(3, S1, S2, path, prec=PREC)
    back = transport(3, S1, S2, path[::-1], initial=fwd, prec=PREC)
    with mpmath.workprec(PREC):
        assert eye_error(back) < mpmath.mpf(10) ** -45


def test_contractible_loop_is_identity():
    # a small square around q = -1 (a regular point) encloses no singularity
    path = [-1, -1.2, -1.2 + 0.2j, -0.8 + 0.2j, -0.8 - 0.2j, -1.2 - 0.2j, -1.2, -1]
    with mpmath.workprec(PREC):
        assert eye_error(transport(3, S1, S2, path, prec=PREC)) < mpmath.mpf(10) ** -45


def test_path_independence_in_simply_connected_region():
    a = transport(2, S1, S2, [-1, 0.5j, 0.5 + 0.5j], prec=PREC)
    b = transport(2, S1, S2, [-1, -1 + 0.9j, 0.5 + 0.5j], prec=PREC)
    with mpmath.workprec(PREC):
        assert mpmath.mnorm(a - b, 1) / mpmath.mnorm(a, 1) < mpmath.mpf(10) ** -45


def test_liouville():
    path = [-1, -0.5 + 0.6j, 0.3j, 0.5 + 0.2j]
    with mpmath.workprec(PREC):
        assert liouville_error(3, S1, S2, path, prec=PREC) < mpmath.mpf(10) ** -20


def test_solves_the_equation():
    # finite-difference derivative of the transported matrix against M_D Phi / q
    sysm = system(2, S1, S2, PREC)
    with mpmath.workprec(PREC):
        z = mpmath.mpc("0.2", "0.35")
        h = mpmath.mpf(10) ** -20
        plus = sysm.transport([-1, 0.35j, z + h])
        minus = sysm.transport([-1, 0.35j, z - h])
        mid = sysm.transport([-1, 0.35j, z])
        deriv = (plus - minus) / (2 * h)
        res = deriv - sysm.matrix(z) * mid / z
        assert mpmath.mnorm(res, 1) < mpmath.mpf(10) ** -30


def test_clearance_enforced():
    sing = [p for p in singular_points(3) if p != mpmath.inf]
    with pytest.raises(SingularityTooClose):
        PathSpec([-1, 0.5j, 1.05], 0.1, sing)
    with pytest.raises(SingularityTooClose):
        PathSpec([0.1 - 0.01j, 0.1 + 0.01j, -0.1 + 0.01j], 0.05, sing)
    PathSpec([-1, 0.5j, 0.8], 0.1, sing)


def test_path_through_pole_rejected():
    with pytest.raises(SingularityTooClose):
        transport(2, S1, S2, [-1, 1], prec=PREC)
