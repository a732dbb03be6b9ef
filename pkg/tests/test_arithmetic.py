import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st
from sympy import factorint, isprime

from ellcensus.arithmetic import (
    IntervalReal,
    factorize,
    is_prime,
    is_squarefree,
    primes_below,
    radical,
    valuation,
)


def trial_division(n):
    n = abs(n)
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def test_factorize_examples():
    f = factorize(-23296)
    assert f.sign == -1
    assert f.as_dict() == {2: 8, 7: 1, 13: 1} == trial_division(23296)
    assert f.value() == -23296

    one = factorize(1)
    assert one.sign == 1 and one.factors == () and one.is_unit

    assert factorize(91).as_dict() == {7: 1, 13: 1}


def test_factorize_rejects_zero():
    with pytest.raises(ValueError):
        factorize(0)
    with pytest.raises(ValueError):
        valuation(0, 5)
    with pytest.raises(ValueError):
        is_squarefree(0)


def test_factorize_random_roundtrip():
    rng = random.Random(1)
    for _ in range(100_000):
        n = rng.randint(-10**9, 10**9) or 1
        f = factorize(n)
        assert f.value() == n
        primes = [p for p, _ in f.factors]
        assert primes == sorted(set(primes))


@settings(max_examples=300, deadline=None)
@given(st.integers(min_value=2, max_value=10**24))
def test_factorize_matches_sympy(n):
    assert factorize(n).as_dict() == factorint(n)


def test_factorize_semiprimes_of_large_primes():
    p, q = 1_000_000_007, 998_244_353
    assert factorize(p * q).as_dict() == {q: 1, p: 1}
    assert factorize(p**2 * 7).as_dict() == {7: 1, p: 2}


@settings(max_examples=500, deadline=None)
@given(st.integers(min_value=0, max_value=10**15))
def test_is_prime_matches_sympy(n):
    assert is_prime(n) == isprime(n)


def test_primes_below():
    assert primes_below(30) == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert len(primes_below(10**5)) == 9592


def test_valuation_examples():
    assert valuation(-921875, 5) == 6
    assert valuation(7, 7) == 1
    assert valuation(6, 5) == 0
    assert valuation(Fraction(50, 27), 5) == 2


@settings(max_examples=500, deadline=None)
@given(
    st.integers(-10**12, 10**12).filter(bool),
    st.integers(-10**12, 10**12).filter(bool),
    st.sampled_from([2, 3, 5, 7, 11, 13]),
)
def test_valuation_additive(a, b, p):
    assert valuation(a * b, p) == valuation(a, p) + valuation(b, p)


def test_squarefree_and_radical():
    assert is_squarefree(91)
    assert is_squarefree(1)
    assert not is_squarefree(25)
    assert not is_squarefree(-12)
    assert radical(-23296) == 2 * 7 * 13


class TestIntervalReal:
    def test_basic_containment(self):
        x = IntervalReal.from_fraction(Fraction(1, 3))
        assert x.contains(Fraction(1, 3))
        assert x.lower <= x.upper
        assert x.width() < mpmath.mpf(2) ** -120

    def test_constants(self):
        pi = IntervalReal.pi()
        with mpmath.workprec(400):
            assert pi.contains(+mpmath.pi)
        g = IntervalReal.gamma(Fraction(1, 2))
        assert g.overlaps(pi.sqrt())
        assert g.width() < mpmath.mpf(2) ** -100

    def test_zeta_closed_form(self):
        z = IntervalReal.zeta(Fraction(10))
        closed = IntervalReal.pi() ** 10 / 93555
        assert z.overlaps(closed)

    def test_division_by_straddling_interval_fails(self):
        z = IntervalReal.hull(Fraction(-1), Fraction(1))
        with pytest.raises(ZeroDivisionError):
            IntervalReal.from_fraction(Fraction(1)) / z

    def test_operations_contain_midpoint_at_double_precision(self):
        rng = random.Random(7)
        prec = 128
        ops = {
            "add": (lambda a, b: a + b, lambda a, b: a + b),
            "sub": (lambda a, b: a - b, lambda a, b: a - b),
            "mul": (lambda a, b: a * b, lambda a, b: a * b),
            "div": (lambda a, b: a / b, lambda a, b: a / b),
        }
        names = list(ops)
        for trial in range(10_000):
            fa = Fraction(rng.randint(-10**12, 10**12), rng.randint(1, 10**6))
            fb = Fraction(rng.randint(1, 10**12), rng.randint(1, 10**6))
            if rng.random() < 0.5:
                fb = -fb
            name = names[trial % 4]
            iv_op, mp_op = ops[name]
            a = IntervalReal.from_fraction(fa, prec=prec)
            b = IntervalReal.from_fraction(fb, prec=prec)
            result = iv_op(a, b)
            with mpmath.workprec(2 * prec):
                reference = mp_op(a.midpoint(), b.midpoint())
            assert result.contains(reference), (name, fa, fb)

    def test_functions_contain_reference(self):
        rng = random.Random(3)
        for _ in range(300):
            q = Fraction(rng.randint(1, 10**6), rng.randint(1, 10**3))
            x = IntervalReal.from_fraction(q)
            with mpmath.workprec(256):
                ref = mpmath.mpf(q.numerator) / q.denominator
                assert x.sqrt().contains(mpmath.sqrt(ref))
                assert x.log().contains(mpmath.log(ref))
                assert (x.log() / 100).exp().contains(mpmath.exp(mpmath.log(ref) / 100))
                assert x.pow(Fraction(-7, 6)).contains(ref ** (mpmath.mpf(-7) / 6))
