from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, settings, strategies as st
from sympy import primerange

from charclass.algebra import PowerSeries, RingPresentation, bso, poly_reduce, poly_substitute, pontryagin_ring
from charclass.genus import (
    ScalingReport,
    bernoulli,
    characteristic_sequence,
    genus_product,
    genus_series,
    hirzebruch_L,
    multiplicative_sequence,
    power_of_two_exponent,
    scaling_relation_report,
)
from charclass.symmetric import elementary_in_monomials, monomial_to_elementary, partitions
from conftest import small_fractions
from oracles import bernoulli_oracle, brute_force_product, l_series_oracle, newton_multiplicative_sequence


def _as_dict(poly, num_p):
    ring = pontryagin_ring(num_p)
    out = {}
    for e, c in poly_reduce(poly, ring).terms():
        out[tuple(e)] = c
    return out


# -- Bernoulli ---------------------------------------------------------------

def test_bernoulli_against_division_oracle():
    ref = bernoulli_oracle(40)
    assert bernoulli(1) == Fraction(-1, 2)
    for n in [0] + list(range(2, 41, 2)):
        assert bernoulli(n) == ref[n]
    assert bernoulli(12) == Fraction(-691, 2730)


def test_bernoulli_rejects_odd():
    with pytest.raises(ValueError):
        bernoulli(3)
    with pytest.raises(ValueError):
        bernoulli(-2)


@pytest.mark.parametrize("k", range(1, 21))
def test_von_staudt_clausen(k):
    s = bernoulli(2 * k) + sum(Fraction(1, p) for p in primerange(2, 2 * k + 2) if (2 * k) % (p - 1) == 0)
    assert s.denominator == 1


# -- series ------------------------------------------------------------------

def test_series_match_hyperbolic_oracle():
    assert list(genus_series("L", 10).coeffs) == l_series_oracle(10)
    assert list(genus_series("Ltilde", 10).coeffs) == l_series_oracle(10, half=True)
    assert list(genus_series("inv_linear", 4).coeffs) == [1, -1, 1, -1, 1]
    assert list(genus_series("total_p", 3).coeffs) == [1, 1, 0, 0]
    with pytest.raises(ValueError):
        genus_series("A-hat", 3)


# -- multiplicative sequences --------------------------------------------------

def test_low_L_polynomials():
    seq = multiplicative_sequence(genus_series("L", 3), 3, 12)
    assert str(seq[4]) == "1/3*p1"
    assert str(seq[8]) == "7/45*p2 - 1/45*p1^2"
    assert str(seq[12]) == "62/945*p3 - 13/945*p1*p2 + 2/945*p1^3"
    assert seq[6] == seq.ring.zero()


def test_inverse_linear_sequence():
    seq = multiplicative_sequence(genus_series("inv_linear", 3), 3, 12)
    assert str(seq[4]) == "-p1"
    assert str(seq[8]) == "-p2 + p1^2"
    assert str(seq[12]) == "-p3 + 2*p1*p2 - p1^3"


@pytest.mark.parametrize("kind", ["L", "inv_linear", "total_p"])
def test_against_newton_oracle(kind):
    kmax = 5
    q = list(genus_series(kind, kmax).coeffs)
    seq = multiplicative_sequence(genus_series(kind, kmax), kmax, 4 * kmax)
    assert _as_dict(seq.total(), kmax) == newton_multiplicative_sequence(q, kmax, kmax)


def test_against_brute_force_roots():
    # expand prod Q(t_i) over 3 roots and evaluate at a numeric point
    q = list(genus_series("L", 3).coeffs)
    prod = brute_force_product(q, 3, 3)
    roots = [Fraction(2), Fraction(-1, 3), Fraction(5)]
    seq = multiplicative_sequence(genus_series("L", 3), 3, 12, num_roots=3)
    e1 = sum(roots)
    e2 = roots[0] * roots[1] + roots[0] * roots[2] + roots[1] * roots[2]
    e3 = roots[0] * roots[1] * roots[2]
    for k in range(4):
        want = sum(c * roots[0] ** e[0] * roots[1] ** e[1] * roots[2] ** e[2] for e, c in prod.items() if sum(e) == k)
        got = sum(Fraction(c) * e1 ** ex[0] * e2 ** ex[1] * e3 ** ex[2] for ex, c in seq[4 * k].terms())
        assert got == want


@pytest.mark.parametrize("N", [3, 4, 5])
def test_stability_in_number_of_roots(N):
    a = multiplicative_sequence(genus_series("L", 4), 4, 16, num_roots=N + 1).total()
    b = multiplicative_sequence(genus_series("L", 4), 4, 16, num_roots=N).total()
    if N >= 4:
        assert a == b
    else:  # too few roots: p4 cannot appear
        assert a != b


def test_requires_unit_constant_term():
    with pytest.raises(ValueError):
        multiplicative_sequence(genus_series("Ltilde", 2), 2, 8)
    with pytest.raises(ValueError):
        multiplicative_sequence(PowerSeries([1, 1]), 2, 8)  # series too short


def test_p1_power_coefficients_on_bso3():
    L = hirzebruch_L(bso(3, truncation=48), 48)
    for k in range(1, 13):
        want = Fraction(2 ** (2 * k)) * bernoulli(2 * k) / factorial(2 * k)
        assert L.coefficient({"p1": k}) == want != 0


def test_hirzebruch_L_in_even_bso_uses_chi_relation():
    L = hirzebruch_L(bso(4), 8)
    assert str(L) == "1 + 1/3*p1 + 7/45*p2 - 1/45*p1^2"


def test_whitney_multiplicativity_to_degree_16():
    k = 4
    ring = RingPresentation([(f"a{i}", 4 * i) for i in range(1, k + 1)] + [(f"b{i}", 4 * i) for i in range(1, k + 1)],
                            truncation=16)
    L = characteristic_sequence("L", pontryagin_ring(k, truncation=16), 16)

    def gen(prefix, i):
        return ring.one() if i == 0 else ring.gen(f"{prefix}{i}")

    total = {f"p{j}": sum((gen("a", i) * gen("b", j - i) for i in range(j + 1)), ring.zero()) for j in range(1, k + 1)}
    lhs = poly_substitute(L, total, ring)
    la = poly_substitute(L, {f"p{i}": ring.gen(f"a{i}") for i in range(1, k + 1)}, ring)
    lb = poly_substitute(L, {f"p{i}": ring.gen(f"b{i}") for i in range(1, k + 1)}, ring)
    assert lhs == la * lb


@settings(max_examples=25)
@given(st.lists(small_fractions, min_size=3, max_size=3))
def test_whitney_for_random_series(tail):
    # multiplicativity of a random genus on a sum of two rank-4 bundles (roots split 1+1)
    Q = PowerSeries([1] + tail)
    seq = multiplicative_sequence(Q, 2, 12, num_roots=3).total()
    ring = RingPresentation([("a", 4), ("b", 4)], truncation=12)
    lhs = poly_substitute(seq, {"p1": ring.parse("a + b"), "p2": ring.parse("a*b")}, ring)
    one = multiplicative_sequence(Q, 1, 12).total()
    rhs = poly_substitute(one, {"p1": ring.gen("a")}, ring) * poly_substitute(one, {"p1": ring.gen("b")}, ring)
    assert lhs == rhs


# -- symmetric functions --------------------------------------------------------

def test_partitions_and_elementary():
    assert list(partitions(4)) == [(4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)]
    assert list(partitions(5, max_len=2)) == [(5,), (4, 1), (3, 2)]
    assert elementary_in_monomials((2, 1)) == {(2, 1): 1, (1, 1, 1): 3}
    assert monomial_to_elementary({(2,): 1}) == {(1, 1): 1, (2,): -2}  # p_2 = e1^2 - 2 e2
    assert monomial_to_elementary({(1, 1, 1): 1}, nvars=2) == {}  # m_111 vanishes in two variables
    assert monomial_to_elementary({(1, 1, 1): 2}) == {(3,): 2}


# -- scaling relation -------------------------------------------------------------

@pytest.mark.parametrize("m", [1, 2, 3])
@pytest.mark.parametrize("k", [1, 2, 3])
def test_scaling_relation_is_power_of_two(m, k):
    rep = scaling_relation_report(m, k)
    assert rep.is_power_of_two
    assert rep.exponent == m - 2 * k  # computed; the printed exponent is m - k
    assert rep.printed_exponent == m - k and not rep.agrees
    assert ScalingReport.from_dict(rep.to_dict()) == rep


def test_genus_product_constant_term():
    seq = genus_product(genus_series("Ltilde", 2), 2, 8)
    assert str(seq[0]) == "4"
    assert str(seq[4]) == "1/3*p1"


def test_power_of_two_exponent():
    assert power_of_two_exponent(Fraction(8)) == 3
    assert power_of_two_exponent(Fraction(1, 4)) == -2
    assert power_of_two_exponent(Fraction(3)) is None
    assert power_of_two_exponent(Fraction(-2)) is None
