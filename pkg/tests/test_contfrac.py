import math
import warnings
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from fareystair.contfrac import (EmptyDomainWarning, PartialQuotients, approximation_bounds_check,
                                 beta_calibrated, beta_estimate, bracket, cf_of_fraction,
                                 claim1_min_denominator, claim1_oracle, claim2_claim3_probe,
                                 continuant, convergents, golden, integers, is_convergent,
                                 jarnik_dimension, jarnik_witness, liouville_digits, liouville_rule, parse_digits,
                                 periodic, silver, split_identity_check, value)

digit_lists = st.lists(st.integers(1, 50), min_size=1, max_size=8)


def fib(n):
    a, b = 0, 1
    for _ in range(n):
        a, b = b, a + b
    return a


@pytest.mark.parametrize("digits, expected", [
    ([1, 1, 1, 1], ["1", "1/2", "2/3", "3/5"]),
    ([2, 2, 2], ["1/2", "2/5", "5/12"]),
    ([1], ["1"]),
])
def test_convergents(digits, expected):
    assert [c.value for c in convergents(PartialQuotients(digits), len(digits))] == [F(x) for x in expected]


def test_convergents_need_digits():
    with pytest.raises(ValueError):
        convergents(PartialQuotients([1, 2]), 3)


@given(st.lists(st.integers(1, 10 ** 6), min_size=1, max_size=30))
def test_convergent_invariants(digits):
    cs = convergents(PartialQuotients(digits), len(digits))
    prev = (0, 1)
    for i, c in enumerate(cs, 1):
        assert math.gcd(c.Q, c.P) == 1
        assert c.Q * prev[1] - prev[0] * c.P in (1, -1)
        assert c.P >= fib(i)
        prev = (c.Q, c.P)


@pytest.mark.parametrize("f, digits", [(F(2, 5), (2, 2)), (F(1, 2), (2,)), (F(3, 5), (1, 1, 2))])
def test_cf_of_fraction(f, digits):
    assert cf_of_fraction(f).digits == digits


@given(st.fractions(min_value=0, max_value=1).filter(lambda x: 0 < x < 1))
def test_cf_round_trip_and_canonical_form(f):
    pq = cf_of_fraction(f)
    assert value(pq) == f
    assert len(pq) == 1 or pq.digits[-1] >= 2


def test_canonicalization_of_trailing_one():
    assert PartialQuotients([2, 1], finite=True).digits == (3,)
    assert PartialQuotients([1], finite=True).digits == (1,)


@pytest.mark.parametrize("f", [F(0), F(1), F(3, 2)])
def test_cf_domain(f):
    with pytest.raises(ValueError):
        cf_of_fraction(f)


@pytest.mark.parametrize("digits, k", [([1, 1, 1, 1], 5), ([3, 7], 22), ([], 1), ([4], 4)])
def test_continuant_values(digits, k):
    assert continuant(digits) == k


@pytest.mark.parametrize("n", range(0, 31))
def test_continuant_of_ones_is_fibonacci(n):
    assert continuant([1] * n) == fib(n + 1)


@given(st.lists(st.integers(1, 50), max_size=12))
def test_continuant_reversal_symmetry(digits):
    assert continuant(digits) == continuant(digits[::-1])


@pytest.mark.parametrize("b, a", [((1, 1), (1, 1)), ((2,), (3,)), ((1, 2, 3), (4, 5))])
def test_split_identity_examples(b, a):
    assert split_identity_check(b, a)


@given(digit_lists, digit_lists)
def test_split_identity(b, a):
    assert split_identity_check(b, a)


def test_split_identity_drops_first_digit_of_a():
    b, a = [1, 2], [3, 4]
    wrong = continuant(b) * continuant(a) + continuant(b[:-1]) * continuant(a[:-1])
    assert continuant(b + a) != wrong


@pytest.mark.parametrize("pq, n", [(golden(), 5), (PartialQuotients([1, 2, 3, 4, 5, 6, 7]), 3), (silver(), 1)])
def test_approximation_bounds_examples(pq, n):
    assert approximation_bounds_check(pq, n)


def test_approximation_bounds_need_two_extra_digits():
    with pytest.raises(ValueError):
        approximation_bounds_check(PartialQuotients([1, 2, 3]), 2)


@given(st.lists(st.integers(1, 60), min_size=17, max_size=20), st.integers(1, 15))
def test_approximation_bounds_random(digits, n):
    assert approximation_bounds_check(PartialQuotients(digits), n)


def test_bracket_contains_golden_point():
    lo, hi = bracket(golden(30))
    phi1 = (math.sqrt(5) - 1) / 2
    assert lo < hi and float(lo) <= phi1 <= float(hi)


@pytest.mark.parametrize("r, expected", [(F(3, 5), True), (F(2, 5), False), (F(8, 13), True)])
def test_is_convergent(r, expected):
    assert is_convergent(golden(), r, 20) is expected


def test_claim1_min_denominator():
    # s**theta > 2 first holds at floor(2**(1/theta)) + 1
    for theta in (0.3, 0.5, 0.8):
        s = claim1_min_denominator(theta)
        assert s ** theta > 2 >= (s - 1) ** theta


@pytest.mark.parametrize("pq, beta, theta, s_max", [
    (golden(), 2.0, 0.5, 200),
    (periodic([1, 2]), 2.0, 0.8, 100),
    (silver(), 2.5, 0.3, 150),
])
def test_claim1_oracle_examples(pq, beta, theta, s_max):
    assert claim1_oracle(pq, beta, theta, s_max) == []


def test_claim1_oracle_empty_domain():
    with pytest.warns(EmptyDomainWarning):
        assert claim1_oracle(golden(), 2.0, 0.5, 4) == []


def test_claim1_oracle_is_conservative_for_coarse_brackets():
    # one known digit only brackets i within [1/3, 1/2]; fractions inside cannot be cleared
    found = claim1_oracle(PartialQuotients([2]), 2.0, 0.5, 20)
    assert F(2, 5) in found


@pytest.mark.parametrize("a1, count, digits", [(1, 3, (1, 2, 10)), (2, 2, (2, 3))])
def test_liouville_digits(a1, count, digits):
    assert liouville_digits(a1, count).digits == digits


def test_liouville_warns_beyond_safe_count():
    with pytest.warns(UserWarning):
        liouville_digits(1, 9)


@pytest.mark.parametrize("k", range(2, 7))
def test_liouville_membership_in_jarnik_classes(k):
    pq = liouville_digits(1, 7)
    n = jarnik_witness(pq, k)
    assert n is not None
    c = convergents(pq, n)[-1]
    assert approximation_bounds_check(pq, n)
    # |i - Q_n/P_n| < 1/(P_n P_{n+1}) <= 1/P_n**k
    p_next = convergents(pq, n + 1)[-1].P
    assert c.P ** (k - 1) <= p_next


def test_beta_estimate_golden():
    est = beta_estimate(golden(), 30)
    assert est.label == "G_beta"
    assert abs(est.beta_hat - 2) <= 0.1


def test_beta_estimate_integers():
    est = beta_estimate(integers(), 40)
    assert est.label == "G_beta" and est.beta_hat < 2.5


@pytest.mark.parametrize("N", [5, 6])
def test_beta_estimate_liouville(N):
    assert beta_estimate(liouville_digits(1, N), N).label == "G_inf"


def test_beta_estimate_finite_is_rational():
    assert beta_estimate(PartialQuotients([2, 2, 2], finite=True), 30).label == "rational"


def test_beta_estimate_rejects_short_horizon():
    with pytest.raises(ValueError):
        beta_estimate(golden(), 1)


@pytest.mark.parametrize("beta", [2.0, 2.5, 3.0, 4.0])
def test_beta_calibrated(beta):
    est = beta_estimate(beta_calibrated(beta), 25)
    assert abs(est.beta_hat - beta) <= 0.1
    tail = est.exponent_series[-12:]
    assert all(abs(e - 1 / beta) <= 0.05 for e in tail)


def test_jarnik_dimension():
    assert jarnik_dimension(2) == 1.0
    assert jarnik_dimension(4) == 0.5


def test_claim_probe_golden():
    probe = claim2_claim3_probe(golden(), 2.0, 0.2, 0.3, 40)
    # the first index from which P_n (P_n + P_{n+1}) < P_n**2.2 always holds
    assert probe.n_delta == 11
    assert probe.witnesses and probe.status == "holds"


def test_claim_probe_calibrated():
    probe = claim2_claim3_probe(beta_calibrated(2.5), 2.5, 0.3, 0.3, 25)
    assert probe.status == "holds"


def test_claim_probe_misdeclared_beta():
    probe = claim2_claim3_probe(golden(), 3.0, 0.2, 0.3, 40)
    assert probe.witnesses == [] and probe.status == "inconclusive(40)"


@pytest.mark.parametrize("spec, first", [("golden", 1), ("silver", 2), ("2,3,...", 2), ("liouville:1", 1)])
def test_parse_digits(spec, first):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        assert parse_digits(spec, 8).prefix(1) == (first,)


def test_liouville_rule_matches_explicit_digits():
    assert liouville_rule(2).prefix(6) == liouville_digits(2, 6).digits


def test_liouville_spec_is_lazy():
    est = beta_estimate(parse_digits("liouville:1"), 14)
    assert est.label == "G_inf"


@pytest.mark.parametrize("spec", ["", "1,x", "0,1", "calibrated:abc"])
def test_parse_digits_rejects(spec):
    with pytest.raises(ValueError):
        parse_digits(spec)


@given(st.lists(st.integers(1, 30), min_size=2, max_size=12), st.integers(1, 10))
def test_bracket_of_prefix_contains_every_extension(digits, n):
    n = min(n, len(digits) - 1)
    lo, hi = bracket(PartialQuotients(digits[:n]), n)
    v = value(PartialQuotients(digits, finite=True))
    assert lo <= v <= hi


def test_bracket_of_single_digit():
    assert bracket(PartialQuotients([2]), 1) == (F(1, 3), F(1, 2))
