from fractions import Fraction

import mpmath
import pytest

from hilbqde.analytic import connection as C
from hilbqde.partitions import enumerate_partitions, transpose
from hilbqde.series import frobenius_specialized

S1, S2 = Fraction(31, 100), Fraction(47, 100)
PREC = 192


def mp(x):
    return mpmath.mpf(x.numerator) / x.denominator


def close(a, b, digits=50):
    return abs(a - b) <= mpmath.mpf(10) ** -digits * max(1, abs(b))


def test_gluing_examples():
    with mpmath.workprec(PREC):
        t1, t2 = mp(S1), mp(S2)
        gw = C.gw_gluing(1, S1, S2, PREC)[0]
        assert close(gw, 1 / (mpmath.gamma(t1) * mpmath.gamma(t2)))
        g = C.gamma_op(1, S1, S2, PREC)[0]
        assert close(g, 2j * mpmath.pi / (mpmath.gamma(t1) * mpmath.gamma(t2)))
        for branch in C.BRANCHES:
            dt = C.dt_gluing(1, S1, S2, -1, PREC, branch)[0]
            assert close(dt, 1 / (mpmath.gamma(t1 + 1) * mpmath.gamma(t2 + 1)))


def test_gw_gluing_two():
    with mpmath.workprec(PREC):
        t1, t2 = mp(S1), mp(S2)
        g = lambda x, t: mpmath.power(x, t * x) / mpmath.gamma(t * x)
        got = C.gw_gluing(2, S1, S2, PREC)
        assert close(got[0], g(2, t1) * g(2, t2))
        assert close(got[1], (g(1, t1) * g(1, t2)) ** 2)


def test_branches_differ_by_content_phase():
    with mpmath.workprec(PREC):
        a = C.dt_gluing(2, S1, S2, -1, PREC, "-q")
        b = C.dt_gluing(2, S1, S2, -1, PREC, "+pi")
        for lam, x, y in zip(enumerate_partitions(2), a, b):
            c = C.content_sum_numeric(lam, mp(S1), mp(S2))
            assert close(y, x * mpmath.expjpi(-c))
    with pytest.raises(ValueError):
        C.dt_gluing(2, S1, S2, -1, PREC, "sideways")


def test_y_at_minus_one_energy_one():
    with mpmath.workprec(PREC):
        y = C.y_matrix(1, S1, S2, -1, prec=PREC)
        assert close(y[0, 0], mp(S1 * S2))


def test_y_matrix_matches_direct_series():
    q = Fraction(-1, 5)
    with mpmath.workprec(PREC):
        y = C.y_matrix(2, S1, S2, mp(q), prec=PREC)
        for j, lam in enumerate(enumerate_partitions(2)):
            us = frobenius_specialized(lam, 140, S1, S2)
            for i in range(2):
                direct = sum(mp(u[i]) * mp(q) ** k for k, u in enumerate(us))
                assert close(y[i, j], direct, 45)


def test_connection_energy_one():
    rep = C.verify_connect_n1(PREC)
    assert rep.ok


def test_connection_energy_two():
    rep = C.verify_connect(2, "0.31", "0.47", 256)
    assert rep.max_error < 1e-25 and rep.ok


def test_connection_principal_branch_is_off_by_content_phase():
    good = C.verify_connect(2, "0.31", "0.47", PREC)
    bad = C.verify_connect(2, "0.31", "0.47", PREC, branch="+pi")
    assert good.ok and not bad.ok
    lhs, rhs = C.connection_sides(2, "0.31", "0.47", PREC, branch="+pi")
    with mpmath.workprec(PREC):
        for j, lam in enumerate(enumerate_partitions(2)):
            c = C.content_sum_numeric(lam, mpmath.mpf("0.31"), mpmath.mpf("0.47"))
            for i in range(2):
                assert close(lhs[i, j], rhs[i, j] * mpmath.expjpi(-c), 40)


def test_connection_swap_consistency():
    a, _ = C.connection_sides(2, S1, S2, PREC)
    b, _ = C.connection_sides(2, S2, S1, PREC)
    basis = enumerate_partitions(2)
    with mpmath.workprec(PREC):
        for j, lam in enumerate(basis):
            jt = basis.index(transpose(lam))
            for i in range(2):
                assert close(a[i, jt], b[i, j], 40)
    assert C.verify_connect(2, S2, S1, PREC).ok


def test_connection_error_shrinks_with_precision():
    lo = C.verify_connect(2, S1, S2, 128, order=30).max_error
    hi = C.verify_connect(2, S1, S2, 320, order=60).max_error
    assert hi < lo


def test_genericity_examples():
    assert not C.genericity(3, "0.31", Fraction(2, 3), "Tmonodr").ok
    assert C.genericity(3, "0.31", "0.31", "Tmonodr").ok
    assert not C.genericity(2, Fraction(1, 2), Fraction(1, 2), "semisimple").ok
    assert C.genericity(2, "0.31", "0.69", "semisimple").ok
    assert not C.genericity(2, "0.5", "0.5", "connect").ok
    with pytest.raises(C.ExcludedParameter):
        C.verify_Tmonodr(2, "0.31", "0.5", PREC)


def test_monodromy_energy_one_is_identity():
    for t in C.all_targets(1):
        assert C.monodromy(1, S1, S2, t, PREC)[0, 0] == 1


def test_zero_loop_and_product_relation_n2():
    with mpmath.workprec(PREC):
        assert C.zero_loop_eigen_error(2, S1, S2, PREC) < mpmath.mpf(10) ** -40
        assert C.product_relation_error(2, S1, S2, PREC) < mpmath.mpf(10) ** -40


def test_monodromy_theorems_n2():
    assert C.verify_Tpolynom(2, S1, S2, PREC, tol=1e-40).ok
    assert C.verify_Tmonodr(2, S1, S2, PREC, tol=1e-40).ok
    assert C.gram_identity_error(2, S1, S2, PREC) < 1e-40
    assert C.level_commutator_error(2, S1, 1, PREC) < 1e-40


def test_loop_paths_keep_clear():
    for n in range(1, 5):
        for t in C.all_targets(n):
            path, angle = C.loop_path(n, t)
            assert path.waypoints[0] == -1 and path.waypoints[-1] == -1


def test_intertwiner_zero_shift_is_identity():
    q = mpmath.mpc(-0.5, 0.2)
    with mpmath.workprec(PREC):
        for line in ("gw", "dt"):
            s = C.intertwiner_S(2, S1, S2, 0, 0, q, line, PREC)
            assert mpmath.mnorm(s - mpmath.eye(2), 1) < mpmath.mpf(10) ** -40


def test_lines_agree_n1_closed_form():
    # at n = 1 both lines reduce to scalars: t1 t2 / ((t1 - a)(t2 - b)) times Gamma ratios
    q = mpmath.mpf(-0.5)
    with mpmath.workprec(PREC):
        s = C.intertwiner_dt(1, S1, S2, 1, 0, q, PREC)[0, 0]
        t1, t2 = mp(S1), mp(S2)
        want = (t1 * t2) / ((t1 - 1) * t2) * (mpmath.rgamma(t1 + 1) / mpmath.rgamma(t1))
        assert close(s, want, 40)
        assert C.lines_error(1, S1, S2, 1, 0, q, PREC) < mpmath.mpf(10) ** -40


def test_intertwiner_n2():
    q = mpmath.mpc(-0.5, 0.2)
    assert C.lines_error(2, S1, S2, 1, 1, q, PREC) < 1e-40
    assert C.composition_error(2, S1, S2, (1, 0), (0, 1), q, PREC) < 1e-40
    assert C.swap_symmetry_error(2, S1, S2, 1, 0, q, PREC) < 1e-40


def test_laurent_fit_constant():
    fit = C.laurent_fit(1, S1, S2, 0, 0, 128, samples=8, checks=2)
    assert fit.window == (0, 0) and fit.residual < 1e-30
    assert fit.poly.terms.keys() == {0}


def test_laurent_fit_shift_n1():
    fit = C.laurent_fit(1, S1, S2, 1, 0, 128, samples=16, checks=2)
    assert fit.residual < 1e-10


def test_scattering_level_one():
    _, err = C.scattering_H(2, "0.31", 1, PREC)
    assert err < 1e-40
    sig, err = C.scattering_matrix(2, "0.31", 1, PREC)
    assert err < 1e-40


def test_inverted_solution_residual():
    assert C.inverted_solution_residual(2, S1, 1 - S1, mpmath.mpc(-1.5, 0.3), prec=PREC) < 1e-40
