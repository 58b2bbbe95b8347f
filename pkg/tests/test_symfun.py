from fractions import Fraction

import mpmath
import pytest

from hilbqde import symfun as sf
from hilbqde.algebra import ONE, ZERO, RatFunc, Q, T, T1, T2, t1, t2
from hilbqde.fock import FockVector, basis_vector, inner_herm
from hilbqde.partitions import Partition, content_sum_numeric, enumerate_partitions


def mn_character(lam, mu):
    """Murnaghan-Nakayama rule on beta-numbers: chi^lam at cycle type mu."""
    if not mu:
        return 1 if not lam else 0
    k, rest = mu[0], mu[1:]
    beta = {p - i + len(lam) - 1 for i, p in enumerate(lam)}
    total = 0
    for b in sorted(beta):
        if b - k >= 0 and b - k not in beta:
            height = sum(1 for c in beta if b - k < c < b)
            new = sorted((beta - {b}) | {b - k}, reverse=True)
            m = len(new)
            shape = [x - (m - 1 - i) for i, x in enumerate(new)]
            total += (-1) ** height * mn_character(tuple(p for p in shape if p > 0), rest)
    return total


def test_jack_examples():
    assert sf.jack((1,)).vector.coeffs == {(1,): t1 * t2}
    j2 = sf.jack((2,)).vector
    assert j2[(1, 1)] == 2 * t1 ** 2 * t2 ** 2 and j2[(2,)] == -2 * t1 ** 2 * t2
    j11 = sf.jack((1, 1)).vector
    assert j11[(1, 1)] == 2 * t1 ** 2 * t2 ** 2 and j11[(2,)] == -2 * t1 * t2 ** 2


def test_single_row_closed_form():
    # J^(k) = k! t1^k sum_mu (-1)^{k - l(mu)} t2^{l(mu)} |mu>
    from math import factorial
    for k in range(1, 6):
        v = sf.jack((k,)).vector
        for mu in enumerate_partitions(k):
            assert v[mu] == factorial(k) * t1 ** k * (-1) ** (k - len(mu)) * t2 ** len(mu)


def test_jack_norms():
    assert sf.jack_norm((1,)) == t1 * t2
    assert sf.jack_norm((2,)) == 2 * t1 ** 2 * t2 * (t2 - t1)
    j2 = sf.jack((2,)).vector
    assert inner_herm(j2, j2) == 2 * t1 ** 2 * t2 ** 2 - 2 * t1 ** 3 * t2
    assert inner_herm(j2, sf.jack((1, 1)).vector).is_zero()


@pytest.mark.parametrize("n", range(1, 7))
def test_jack_level(n):
    for lam in enumerate_partitions(n):
        assert sf.check_jack_eigen(lam)
        assert sf.check_jack_normalization(lam)
        assert sf.check_jack_symmetry(lam)
        assert sf.check_jack_norm(lam) is None
        assert sf.degree_structure_check(lam) is None


@pytest.mark.parametrize("n", range(2, 6))
def test_jack_orthogonality(n):
    ps = enumerate_partitions(n)
    for i, lam in enumerate(ps):
        for mu in ps[i + 1:]:
            assert inner_herm(sf.jack(lam).vector, sf.jack(mu).vector).is_zero()


def test_degenerate_content_at_n6():
    # c(4,1,1) = c(3,3); both vectors are still distinct eigenvectors
    a, b = sf.jack((4, 1, 1)).vector, sf.jack((3, 3)).vector
    assert a != b
    assert inner_herm(a, b).is_zero()


def test_schur_examples():
    assert sf.schur((1,)).coeffs == {(1,): ONE}
    assert sf.schur_p(Partition((2,))) == {(1, 1): Fraction(1, 2), (2,): Fraction(1, 2)}
    m11 = sf.to_p(sf.monomial((1, 1)))
    assert m11 == {(1, 1): RatFunc(1, 2), (2,): RatFunc(-1, 2)}


@pytest.mark.parametrize("n", range(1, 8))
def test_schur_matches_characters(n):
    for lam in enumerate_partitions(n):
        s = sf.schur(lam)
        for mu in enumerate_partitions(n):
            assert s[mu] == RatFunc(mn_character(lam, mu))


def test_monomial_round_trip():
    for n in range(1, 6):
        for mu in enumerate_partitions(n):
            assert sf.m_coordinates(sf.monomial(mu)) == {mu: ONE}


def test_macdonald_examples():
    assert sf.macdonald_P((1,)).vector.coeffs == {(1,): ONE}
    p2 = sf.macdonald_P((2,))
    assert p2.m_coeffs == {(2,): ONE, (1, 1): (1 + Q) * (1 - T) / (1 - Q * T)}
    assert sf.m_coordinates(p2.vector) == p2.m_coeffs


@pytest.mark.parametrize("n", range(1, 5))
def test_macdonald_schur_limit(n):
    for lam in enumerate_partitions(n):
        v = sf.macdonald_P(lam).vector.map_coeffs(lambda f: f.subs({"Q": T}))
        assert v == sf.schur(lam)


@pytest.mark.parametrize("n", range(2, 6))
def test_macdonald_orthogonal_and_triangular(n):
    ps = enumerate_partitions(n)
    for i, lam in enumerate(ps):
        assert sf.check_macdonald_triangular(lam)
        for mu in ps[i + 1:]:
            assert sf.inner_qt(sf.macdonald_P(lam).vector, sf.macdonald_P(mu).vector).is_zero()


def test_jack_is_macdonald_degeneration():
    # t1 = 2, t2 = -1 is Jack parameter alpha = 2; (Q, T) = (eps^2, eps) with eps -> 1
    eps = Fraction(1) + Fraction(1, 10 ** 6)
    for n in range(2, 5):
        for lam in enumerate_partitions(n):
            jv = sf.jack(lam).vector
            untw = FockVector(n, {mu: c.subs({"t1": RatFunc(2), "t2": RatFunc(-1)}) / RatFunc(2) ** len(mu)
                                for mu, c in jv.coeffs.items()})
            jm = sf.m_coordinates(untw)
            lead = jm[lam]
            mac = sf.macdonald_P(lam).m_coeffs
            for mu in enumerate_partitions(n):
                a = jm.get(mu, ZERO) / lead
                b = mac.get(mu, ZERO).subs({"Q": RatFunc(eps * eps), "T": RatFunc(eps)})
                assert abs(float(a.evaluate({})) - float(b.evaluate({}))) < 1e-3


def test_upsilon():
    v = sf.upsilon(basis_vector((1,)))
    assert v.coeffs == {(1,): ONE / (1 - T2.inverse())}
    w = sf.upsilon(basis_vector((2, 1)))
    assert w[(2, 1)] == ONE / ((1 - T2 ** -2) * (1 - T2.inverse()))
    for n in range(1, 6):
        for mu in enumerate_partitions(n):
            b = basis_vector(mu)
            assert sf.upsilon(sf.upsilon(b), "invert") == b


def test_haiman():
    assert sf.haiman_H((1,)).vector == basis_vector((1,))
    for n in range(1, 5):
        for lam in enumerate_partitions(n):
            assert sf.haiman_H(lam).vector.energy == n


@pytest.mark.parametrize("n", range(1, 6))
def test_haiman_invertible(n):
    assert sf.check_haiman_invertible(n)


def test_haiman_hook_row_is_modified_macdonald():
    # H^(2) in the monomial basis has the classical form m_2 + (1+q) m_11 at (q,t) = (T1,T2)
    h = sf.m_coordinates(sf.haiman_H((2,)).vector)
    # H~_(2) = s_2 + q s_11 = m_2 + (1+q) m_11
    assert h == {(2,): ONE, (1, 1): 1 + T1}


def test_O_line():
    mpmath.mp.prec = 128
    s1, s2 = mpmath.mpf("0.31"), mpmath.mpf("0.47")
    ident = sf.O_line(0, 3, s1, s2)
    assert mpmath.mnorm(ident - mpmath.eye(3), 1) < 1e-30
    assert abs(sf.O_line(Fraction(1, 3), 1, s1, s2)[0, 0] - 1) < 1e-30
    o = sf.O_line(Fraction(1, 2), 2, s1, s2)
    h = sf.haiman_matrix_numeric(2, s1, s2)
    col = h[:, 0]
    assert mpmath.mnorm(o * col - mpmath.expjpi(-s1) * col, 1) < 1e-30
    for i, lam in enumerate(enumerate_partitions(3)):
        o3 = sf.O_line(Fraction(1, 2), 3, s1, s2)
        h3 = sf.haiman_matrix_numeric(3, s1, s2)
        ev = mpmath.expjpi(-content_sum_numeric(lam, s1, s2))
        assert mpmath.mnorm(o3 * h3[:, i] - ev * h3[:, i], 1) < 1e-30
