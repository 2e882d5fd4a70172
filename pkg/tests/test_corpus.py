import pickle

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from seqrec import corpus
from seqrec.corpus import (
    check_two_level_reduction,
    check_within_level_collapse,
    delannoy,
    eval_g,
    eval_h,
    eval_s,
    floor_log,
    growth_exponent,
    make_oracle,
    oracle_names,
    padic_valuation,
    tm,
    tm_factor_complexity,
)
from seqrec.dfao import thue_morse_dfao

from oracles import digit_sum


@given(st.integers(2, 7), st.integers(1, 10**12))
def test_floor_log_bracketing(k, n):
    s = floor_log(k, n)
    assert k**s <= n < k ** (s + 1)


def test_floor_log_rejects_bad_inputs():
    with pytest.raises(ValueError):
        floor_log(1, 5)
    with pytest.raises(ValueError):
        floor_log(2, 0)


def test_g_examples():
    for k in (2, 3, 5):
        for ell in (2, 3, 5):
            assert eval_g(k, ell, 1) == 2
    assert eval_g(2, 3, 5) == 10
    assert eval_g(3, 3, 27) == 28
    assert eval_g(2, 3, 0) == 1


def test_g_parameter_errors():
    with pytest.raises(ValueError):
        eval_g(1, 3, 5)
    with pytest.raises(ValueError):
        eval_g(2, 1, 5)
    with pytest.raises(ValueError):
        eval_g(2, 3, -1)


def test_s_examples():
    assert eval_s(2, 0) == 0
    assert eval_s(2, 7) == 3
    assert eval_s(3, 10) == 2


def test_tm_matches_dfao():
    d = thue_morse_dfao()
    assert all(tm(n) == d.eval(n) for n in range(20000))


def test_h_small_values():
    # n = 2 is congruent 2 mod 3, so h(2) = h(0) + (0 mod 2) = 0
    assert [eval_h(n) for n in range(4)] == [0, 1, 0, 2]


def test_h_powers_of_three():
    for t in range(11):
        assert eval_h(3**t) == t + 1
    # and the companion column value used by the three-sample system
    for r in range(8):
        assert eval_h(3**r + 1) == r


def test_h_rejects_negative():
    with pytest.raises(ValueError):
        eval_h(-1)


def test_h_displayed_relations():
    for n in range(2001):
        assert eval_h(3 * n + 2) == eval_h(n) + n % 2
        lhs_9n = eval_h(9 * n)
        assert lhs_9n == eval_h(9 * n + 6)
        assert lhs_9n == eval_h(n) + 2 * (n % 2)
        assert lhs_9n == -eval_h(n) + 2 * eval_h(3 * n)
        lhs_9n1 = eval_h(9 * n + 1)
        assert lhs_9n1 == eval_h(9 * n + 4) == eval_h(9 * n + 7)
        assert lhs_9n1 == eval_h(n) + 1
        assert lhs_9n1 == -eval_h(n) + eval_h(3 * n) + eval_h(3 * n + 1)
        lhs_9n3 = eval_h(9 * n + 3)
        assert lhs_9n3 == eval_h(n) + 2 * (1 - n % 2)
        assert lhs_9n3 == -eval_h(n) + 2 * eval_h(3 * n + 1)


def test_h_two_branch_closed_form():
    for t in range(1, 5):
        p = 3**t
        for n in range(201):
            hn = eval_h(n)
            for b in range(p):
                expect = hn + eval_h(b) if n % 2 == 0 else hn + t - eval_h(b)
                assert eval_h(p * n + b) == expect


def test_h_unit_interpolation_identity():
    # h(3^t n + b) = (1 - h(b)) h(3^t n) + h(b) h(3^t n + 1)
    for t in range(1, 5):
        p = 3**t
        for n in range(201):
            h0 = eval_h(p * n)
            h1 = eval_h(p * n + 1)
            for b in range(p):
                hb = eval_h(b)
                assert eval_h(p * n + b) == (1 - hb) * h0 + hb * h1


def test_delannoy_examples():
    assert delannoy(0) == 1
    assert delannoy(1) == 3
    assert delannoy(2) == 13
    assert delannoy(3) == 63
    assert padic_valuation(3, delannoy(3)) == 2 == eval_h(3)


def test_delannoy_matches_three_term_recurrence():
    # n d(n) = 3(2n-1) d(n-1) - (n-1) d(n-2)
    d0, d1 = delannoy(0), delannoy(1)
    for n in range(2, 301):
        d2 = delannoy(n)
        assert n * d2 == 3 * (2 * n - 1) * d1 - (n - 1) * d0
        d0, d1 = d1, d2


def test_valuation_matches_h_spot_check():
    for n in range(1, 301):
        assert eval_h(n) == padic_valuation(3, delannoy(n))


def test_padic_valuation_examples_and_errors():
    assert padic_valuation(3, 63) == 2
    assert padic_valuation(2, 40) == 3
    assert padic_valuation(5, 7) == 0
    with pytest.raises(ValueError):
        padic_valuation(3, 0)
    with pytest.raises(ValueError):
        padic_valuation(1, 9)


def test_factor_complexity_small_values():
    assert tm_factor_complexity(0) == 1
    assert tm_factor_complexity(1) == 2
    assert tm_factor_complexity(4) == 10
    assert tm_factor_complexity(7) == 20
    # doubling relation at n = 0: f(16*0+7) = 2 f(8*0+4)
    assert tm_factor_complexity(7) == 2 * tm_factor_complexity(4)


def test_growth_exponent_values():
    g23 = make_oracle("g", k=2, ell=3)
    assert abs(growth_exponent(g23, 2, 12) - 1.585) < 0.05
    g33 = make_oracle("g", k=3, ell=3)
    assert abs(growth_exponent(g33, 3, 12) - 1.0) < 0.05
    s2 = make_oracle("s", k=2)
    assert abs(growth_exponent(s2, 2, 12)) < 0.1


def test_growth_exponent_errors():
    with pytest.raises(ValueError):
        growth_exponent(lambda n: 0, 2, 12)
    with pytest.raises(ValueError):
        growth_exponent(lambda n: n, 2, 3)


def test_within_level_collapse_holds():
    for k in (2, 3):
        for ell in (2, 3):
            for t in (2, 3):
                assert check_within_level_collapse(k, ell, t, 300) is None


def test_within_level_collapse_detects_breakage():
    # same shape but wrong weight must fail somewhere
    kt = 2**2
    found = False
    for n in range(50):
        g0 = eval_g(2, 3, kt * n)
        g1 = eval_g(2, 3, kt * n + 1)
        if eval_g(2, 3, kt * n + 2) != (1 - 2) * g0 + 2 * g1:
            found = True
            break
    assert found


def test_two_level_reduction_holds():
    for k in (2, 3):
        for ell in (2, 3):
            assert check_two_level_reduction(k, ell, 1000) is None


def test_two_level_reduction_boundary_cases():
    # n = 0 instances: both sides 1, both sides 2, both sides 1 + ell
    for k, ell in ((2, 5), (3, 2)):
        assert eval_g(k, ell, 0) == 1
        assert -ell * 1 + (ell + 1) * 1 == 1
        assert -ell * 1 + ell * 1 + 2 == 2
        assert -ell * 1 + 1 + ell * 2 == 1 + ell


def test_registry_names_and_errors():
    assert set(oracle_names()) == {"g", "s", "tm", "tmfc", "h", "d", "id"}
    with pytest.raises(ValueError, match="unknown sequence"):
        make_oracle("nope")
    with pytest.raises(ValueError, match="needs parameters"):
        make_oracle("g", k=2)
    with pytest.raises(ValueError, match="does not take"):
        make_oracle("tm", k=2)
    with pytest.raises(ValueError):
        make_oracle("g", k=1, ell=3)


def test_oracle_labels_and_pickling():
    g = make_oracle("g", k=2, ell=3)
    assert g.label() == "g(k=2,ell=3)"
    assert g(5) == 10
    clone = pickle.loads(pickle.dumps(g))
    assert clone == g
    assert clone(5) == 10
    assert make_oracle("id").label() == "id"


def test_identity_and_s_oracles():
    ident = make_oracle("id")
    assert [ident(n) for n in range(5)] == [0, 1, 2, 3, 4]
    s3 = make_oracle("s", k=3)
    for n in range(200):
        assert s3(n) == digit_sum(3, n)
