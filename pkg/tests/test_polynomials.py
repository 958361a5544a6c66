"""Charlier/Krawtchouk evaluators against exact-rational oracles."""

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sh22osc.errors import ParameterError
from sh22osc.polynomials import (
    CharlierParams,
    KrawtchoukParams,
    charlier,
    charlier_orthogonality_sum,
    charlier_shift_residuals,
    hyp2f0_terminating,
    krawtchouk,
    krawtchouk_norm_squared,
    krawtchouk_normalized,
    krawtchouk_orthogonality_sum,
    pochhammer,
)

RATIONAL_A = [Fraction(1, 4), Fraction(1, 2), Fraction(1), Fraction(5, 2), Fraction(9)]


def test_pochhammer_basics():
    assert pochhammer(3, 0) == 1
    assert pochhammer(3, 2) == 12
    assert pochhammer(Fraction(1, 2), 3) == Fraction(1, 2) * Fraction(3, 2) * Fraction(5, 2)


def test_pochhammer_negative_integer_truncates():
    # (-m)_k = 0 for k > m, without ever forming 0 * inf
    assert pochhammer(-3, 4) == 0
    assert pochhammer(-3, 3) == -3 * -2 * -1
    assert pochhammer(0, 1) == 0


def test_hyp2f0_order_zero_is_one():
    assert hyp2f0_terminating(0, 123.4, -7.0) == 1.0
    assert hyp2f0_terminating(0, Fraction(5), Fraction(-1, 3)) == 1


def test_hyp2f0_hand_value():
    # 1 + (-1)(-2)(-1) = -1
    assert hyp2f0_terminating(1, 2, -1) == -1


def test_hyp2f0_zero_argument_kills_tail():
    assert hyp2f0_terminating(3, 0, Fraction(-1, 4)) == 1


def test_charlier_degree_zero_and_origin():
    params = CharlierParams(Fraction(7, 3))
    for x in (0, 3, Fraction(11, 2)):
        assert charlier(0, x, params) == 1
    for n in range(13):
        assert charlier(n, 0, params) == 1
        assert charlier(n, 0.0, CharlierParams(2.25)) == 1.0


def test_charlier_degree_one_exact():
    # C_1(x; a) = 1 - x/a
    assert charlier(1, 3, CharlierParams(Fraction(2))) == Fraction(-1, 2)


@pytest.mark.parametrize("a", RATIONAL_A)
def test_charlier_float_matches_exact(a):
    # float path within 1e-12 relative of the exact terminating series
    exact_params = CharlierParams(a)
    float_params = CharlierParams(float(a))
    for n in range(0, 21, 2):
        for x in range(0, 41, 3):
            exact = charlier(n, x, exact_params)
            got = charlier(n, float(x), float_params)
            ref = float(exact)
            assert got == pytest.approx(ref, rel=1e-12, abs=1e-300), (n, x, a)


def test_charlier_float_snaps_sqrt_roundoff():
    # x*x for x = sqrt(k) lands within one ulp of k; the integer fast path
    # must still engage
    a = 2.0
    x = math.sqrt(7.0)
    assert charlier(5, x * x, CharlierParams(a)) == pytest.approx(
        float(charlier(5, 7, CharlierParams(Fraction(2)))), rel=1e-11
    )


@pytest.mark.parametrize(
    "n,x,a",
    [(1, 1, Fraction(1)), (5, 7, Fraction(5, 2)), (12, 30, Fraction(9)), (3, 0, Fraction(1, 4))],
)
def test_shift_relations_exact_zero(n, x, a):
    fwd, bwd = charlier_shift_residuals(n, x, CharlierParams(a))
    assert fwd == 0
    assert bwd == 0


def test_shift_relation_backward_only_at_degree_zero():
    fwd, bwd = charlier_shift_residuals(0, 2, CharlierParams(Fraction(3)))
    assert fwd is None
    assert bwd == 0


def test_shift_relations_sweep_exact():
    params = CharlierParams(Fraction(5, 2))
    for n in range(1, 16):
        for x in range(0, 31, 5):
            fwd, bwd = charlier_shift_residuals(n, x, params)
            assert fwd == 0 and bwd == 0


def test_orthogonality_sum_exponential():
    # m = n = 0 reduces to sum 1/x! = e
    got = charlier_orthogonality_sum(0, 0, CharlierParams(1.0), tail_eps=1e-12)
    assert got == pytest.approx(math.e, rel=1e-12)


def test_orthogonality_sum_off_diagonal_vanishes():
    got = charlier_orthogonality_sum(0, 1, CharlierParams(1.0), tail_eps=1e-12)
    assert abs(got) < 1e-12 + 1e-10


@pytest.mark.parametrize("a", [1.0, 4.0])
def test_orthogonality_sum_battery(a):
    tail_eps = 1e-12
    params = CharlierParams(a)
    for m in range(13):
        for n in range(m, 13):
            got = charlier_orthogonality_sum(m, n, params, tail_eps=tail_eps)
            if m == n:
                expected = a**-n * math.exp(a) * math.factorial(n)
                assert got == pytest.approx(expected, rel=tail_eps + 1e-10)
            else:
                scale = a**-n * math.exp(a) * math.factorial(n)
                assert abs(got) <= (tail_eps + 1e-10) * scale


def test_krawtchouk_trivial_values():
    params = KrawtchoukParams(Fraction(1, 5), 6)
    assert krawtchouk(0, 3, params) == 1
    for n in range(7):
        assert krawtchouk(n, 0, params) == 1


def test_krawtchouk_hand_value():
    assert krawtchouk(1, 1, KrawtchoukParams(Fraction(1, 2), 4)) == Fraction(1, 2)


def test_krawtchouk_rejects_degree_above_cutoff():
    with pytest.raises(ParameterError):
        krawtchouk(5, 1, KrawtchoukParams(0.5, 4))


@settings(max_examples=60, deadline=None)
@given(
    n=st.integers(0, 12),
    x=st.integers(0, 12),
    num=st.integers(1, 9),
)
def test_krawtchouk_duality(n, x, num):
    # K_n(x; p, N) = K_x(n; p, N) exactly on the exact path
    params = KrawtchoukParams(Fraction(num, 10), 12)
    assert krawtchouk(n, x, params) == krawtchouk(x, n, params)


def test_krawtchouk_norm_matches_bruteforce_oracle():
    for num, den, n_cap in [(1, 3, 5), (2, 5, 7), (1, 2, 8)]:
        params = KrawtchoukParams(Fraction(num, den), n_cap)
        for m in range(n_cap + 1):
            for n in range(m, n_cap + 1):
                total = krawtchouk_orthogonality_sum(m, n, params)
                if m == n:
                    assert total == krawtchouk_norm_squared(n, params)
                else:
                    assert total == 0


def test_normalized_krawtchouk_weight_row():
    # Ktilde_0(x) is the square root of the binomial weight
    params = KrawtchoukParams(0.2, 6)
    p, n_top = 0.2, 6
    for x in range(n_top + 1):
        expected = math.sqrt(math.comb(n_top, x) * p**x * (1 - p) ** (n_top - x))
        assert krawtchouk_normalized(0, x, params) == pytest.approx(expected, rel=1e-14)
    norm = sum(krawtchouk_normalized(0, x, params) ** 2 for x in range(n_top + 1))
    assert norm == pytest.approx(1.0, rel=1e-13)


@pytest.mark.parametrize("N", [6, 17, 30])
def test_normalized_krawtchouk_orthonormality(N):
    params = KrawtchoukParams(1.0 / 3.0, N)
    for m in range(N + 1):
        for n in range(m, N + 1):
            total = sum(
                krawtchouk_normalized(m, x, params) * krawtchouk_normalized(n, x, params)
                for x in range(N + 1)
            )
            assert total == pytest.approx(1.0 if m == n else 0.0, abs=1e-12)


def test_normalized_krawtchouk_domain_checks():
    params = KrawtchoukParams(0.3, 5)
    with pytest.raises(ParameterError):
        krawtchouk_normalized(6, 2, params)
    with pytest.raises(ParameterError):
        krawtchouk_normalized(2, 7, params)
    with pytest.raises(ParameterError):
        KrawtchoukParams(1.2, 5)
    with pytest.raises(ParameterError):
        CharlierParams(0)
