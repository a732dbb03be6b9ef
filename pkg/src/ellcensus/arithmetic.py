"""Exact integer utilities and certified real intervals.

Everything here is a pure function on immutable values.  Rationals are plain
:class:`fractions.Fraction` objects; certified reals are :class:`IntervalReal`
balls backed by Arb (``python-flint``), which rounds outward on every
operation.
"""

from __future__ import annotations

import math
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Union

import flint
import mpmath

__all__ = [
    "BudgetExceeded",
    "Factorization",
    "IntervalReal",
    "factorize",
    "is_prime",
    "is_squarefree",
    "primes_below",
    "radical",
    "valuation",
    "DEFAULT_PRECISION",
]

DEFAULT_PRECISION = 128


class BudgetExceeded(RuntimeError):
    """A computation was refused because it would exceed its configured budget."""

Rational = Union[int, Fraction]


# --------------------------------------------------------------------------
# primes


@lru_cache(maxsize=8)
def _sieve(limit: int) -> tuple[int, ...]:
    if limit < 3:
        return ()
    flags = bytearray([1]) * limit
    flags[0:2] = b"\x00\x00"
    for i in range(2, math.isqrt(limit - 1) + 1):
        if flags[i]:
            flags[i * i :: i] = bytearray(len(range(i * i, limit, i)))
    return tuple(i for i, f in enumerate(flags) if f)


def primes_below(limit: int) -> list[int]:
    """All primes ``p < limit`` in increasing order."""
    return list(_sieve(int(limit)))


_SMALL_PRIMES = _sieve(1000)
# Deterministic Miller-Rabin witnesses, valid for n < 3.3e24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_MR_LIMIT = 3_317_044_064_679_887_385_961_981


def _strong_probable_prime(n: int, a: int) -> bool:
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    x = pow(a, d, n)
    if x in (1, n - 1):
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def _lucas_probable_prime(n: int) -> bool:
    # Strong Lucas test with Selfridge parameters (second half of BPSW).
    if math.isqrt(n) ** 2 == n:
        return False
    d = 5
    while True:
        j = _jacobi(d, n)
        if j == -1:
            break
        if j == 0 and abs(d) != n:
            return False
        d = -d - 2 if d > 0 else -d + 2
    p, q = 1, (1 - d) // 4
    k, s = n + 1, 0
    while k % 2 == 0:
        k //= 2
        s += 1
    u, v, qk = 0, 2, 1
    for bit in bin(k)[2:]:
        u, v, qk = u * v % n, (v * v - 2 * qk) % n, qk * qk % n
        if bit == "1":
            u, v = (p * u + v), (d * u + p * v)
            u = (u * (n + 1) // 2) % n if u % 2 else (u // 2) % n
            v = (v * (n + 1) // 2) % n if v % 2 else (v // 2) % n
            qk = qk * q % n
    if u == 0 or v == 0:
        return True
    for _ in range(s - 1):
        v = (v * v - 2 * qk) % n
        if v == 0:
            return True
        qk = qk * qk % n
    return False


def _jacobi(a: int, n: int) -> int:
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def is_prime(n: int) -> bool:
    """Primality test: deterministic below 3.3e24, BPSW above."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    if n < 1_000_000:
        return True
    if n < _MR_LIMIT:
        return all(_strong_probable_prime(n, a) for a in _MR_BASES)
    return _strong_probable_prime(n, 2) and _lucas_probable_prime(n)


def _pollard_brent(n: int) -> int:
    """Return a nontrivial factor of the odd composite ``n``."""
    for c in range(1, 1000):
        y, r, q, g = 2, 1, 1, 1
        m = 128
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
    raise ArithmeticError(f"rho failed on {n}")  # pragma: no cover


def _split(n: int, out: dict[int, int]) -> None:
    if n == 1:
        return
    if is_prime(n):
        out[n] = out.get(n, 0) + 1
        return
    r = math.isqrt(n)
    if r * r == n:
        _split(r, out)
        _split(r, out)
        return
    d = _pollard_brent(n)
    _split(d, out)
    _split(n // d, out)


@dataclass(frozen=True)
class Factorization:
    """Signed prime factorization ``sign * prod(p**e)``."""

    sign: int
    factors: tuple[tuple[int, int], ...]

    @property
    def is_unit(self) -> bool:
        return not self.factors

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    def as_dict(self) -> dict[int, int]:
        return dict(self.factors)

    def value(self) -> int:
        out = self.sign
        for p, e in self.factors:
            out *= p**e
        return out

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(self.factors)


def factorize(n: int) -> Factorization:
    """Factor a nonzero integer.

    Trial division by primes below 1000, then Pollard-Brent on the cofactor
    with every prime factor confirmed by :func:`is_prime`.
    """
    n = int(n)
    if n == 0:
        raise ValueError("cannot factor 0")
    sign = -1 if n < 0 else 1
    m = abs(n)
    found: dict[int, int] = {}
    for p in _SMALL_PRIMES:
        if p * p > m:
            break
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            found[p] = e
    _split(m, found)
    return Factorization(sign, tuple(sorted(found.items())))


def valuation(n: Rational, p: int) -> int:
    """p-adic valuation of a nonzero integer or rational."""
    if isinstance(n, Fraction):
        if n == 0:
            raise ValueError("valuation of 0 is infinite")
        return valuation(n.numerator, p) - (
            valuation(n.denominator, p) if n.denominator != 1 else 0
        )
    n = int(n)
    if n == 0:
        raise ValueError("valuation of 0 is infinite")
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


def is_squarefree(n: int) -> bool:
    if n == 0:
        raise ValueError("0 is not squarefree-testable")
    return all(e == 1 for _, e in factorize(n))


def radical(n: int) -> int:
    return math.prod(factorize(n).primes)


# --------------------------------------------------------------------------
# certified reals


@contextmanager
def _prec(bits: int) -> Iterator[None]:
    saved = flint.ctx.prec
    flint.ctx.prec = bits
    try:
        yield
    finally:
        flint.ctx.prec = saved


def _arb_point_to_mpf(x: flint.arb) -> mpmath.mpf:
    man, exp = x.man_exp()
    man = int(man)
    with mpmath.workprec(max(53, man.bit_length() + 8)):
        return mpmath.ldexp(mpmath.mpf(man), int(exp))


def _to_fraction(x) -> Fraction:
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, mpmath.mpf):
        sign, man, exp, _ = x._mpf_
        if not man and exp:
            raise ValueError("non-finite value")
        man, exp = (-1) ** sign * int(man), int(exp)
        return Fraction(man * 2**exp) if exp >= 0 else Fraction(man, 2**-exp)
    if isinstance(x, float):
        return Fraction(x)
    raise TypeError(f"cannot convert {type(x).__name__} exactly")


class IntervalReal:
    """A closed real interval with outward-rounded arithmetic.

    Internally an Arb ball; ``lower`` and ``upper`` are exact binary
    endpoints returned as :class:`mpmath.mpf`.
    """

    __slots__ = ("_ball", "prec")

    def __init__(self, ball: flint.arb, prec: int = DEFAULT_PRECISION):
        if not ball.is_finite():
            raise ValueError("interval endpoints must be finite")
        self._ball = ball
        self.prec = prec

    # construction -------------------------------------------------------
    @classmethod
    def from_fraction(cls, q: Rational, prec: int = DEFAULT_PRECISION) -> "IntervalReal":
        q = Fraction(q)
        with _prec(prec):
            return cls(flint.arb(flint.fmpq(q.numerator, q.denominator)), prec)

    @classmethod
    def hull(cls, lo: Rational, hi: Rational, prec: int = DEFAULT_PRECISION) -> "IntervalReal":
        if lo > hi:
            raise ValueError("lower bound exceeds upper bound")
        a, b = cls.from_fraction(lo, prec), cls.from_fraction(hi, prec)
        with _prec(prec):
            return cls(a._ball.union(b._ball), prec)

    @classmethod
    def pi(cls, prec: int = DEFAULT_PRECISION) -> "IntervalReal":
        with _prec(prec):
            return cls(flint.arb.pi(), prec)

    @classmethod
    def gamma(cls, q: Rational, prec: int = DEFAULT_PRECISION) -> "IntervalReal":
        q = Fraction(q)
        with _prec(prec):
            return cls(flint.arb.gamma_fmpq(flint.fmpq(q.numerator, q.denominator)), prec)

    @classmethod
    def zeta(cls, s: Rational, prec: int = DEFAULT_PRECISION) -> "IntervalReal":
        s = Fraction(s)
        with _prec(prec):
            return cls(flint.arb(flint.fmpq(s.numerator, s.denominator)).zeta(), prec)

    # views ----------------------------------------------------------------
    @property
    def ball(self) -> flint.arb:
        return self._ball

    # Endpoint extraction rounds at the ambient precision, so widen it.
    @property
    def lower(self) -> mpmath.mpf:
        with _prec(2 * self.prec + 64):
            return _arb_point_to_mpf(self._ball.lower())

    @property
    def upper(self) -> mpmath.mpf:
        with _prec(2 * self.prec + 64):
            return _arb_point_to_mpf(self._ball.upper())

    def midpoint(self) -> mpmath.mpf:
        with _prec(2 * self.prec + 64):
            return _arb_point_to_mpf(self._ball.mid())

    def width(self) -> mpmath.mpf:
        with mpmath.workprec(self.prec + 64):
            return self.upper - self.lower

    def contains(self, x) -> bool:
        q = _to_fraction(x)
        return _to_fraction(self.lower) <= q <= _to_fraction(self.upper)

    def contains_interval(self, other: "IntervalReal") -> bool:
        return _to_fraction(self.lower) <= _to_fraction(other.lower) and _to_fraction(
            other.upper
        ) <= _to_fraction(self.upper)

    def overlaps(self, other: "IntervalReal") -> bool:
        return not (
            _to_fraction(self.upper) < _to_fraction(other.lower)
            or _to_fraction(other.upper) < _to_fraction(self.lower)
        )

    def is_positive(self) -> bool:
        return self.lower > 0

    def is_negative(self) -> bool:
        return self.upper < 0

    def union(self, other: "IntervalReal") -> "IntervalReal":
        with _prec(self._p(other)):
            return IntervalReal(self._ball.union(other._ball), self._p(other))

    def intersection(self, other: "IntervalReal") -> "IntervalReal":
        with _prec(self._p(other)):
            return IntervalReal(self._ball.intersection(other._ball), self._p(other))

    def __float__(self) -> float:
        return float(self.midpoint())

    def __repr__(self) -> str:
        return f"IntervalReal([{mpmath.nstr(self.lower, 20)}, {mpmath.nstr(self.upper, 20)}])"

    def digits(self, n: int) -> str:
        """Midpoint printed to ``n`` significant digits."""
        return mpmath.nstr(self.midpoint(), n)

    # arithmetic -----------------------------------------------------------
    def _p(self, other) -> int:
        return max(self.prec, other.prec) if isinstance(other, IntervalReal) else self.prec

    def _coerce(self, other) -> flint.arb:
        if isinstance(other, IntervalReal):
            return other._ball
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            return flint.arb(flint.fmpq(q.numerator, q.denominator))
        return NotImplemented

    def _binary(self, other, op):
        p = self._p(other)
        with _prec(p):
            o = self._coerce(other)
            if o is NotImplemented:
                return NotImplemented
            return IntervalReal(op(self._ball, o), p)

    def __add__(self, other):
        return self._binary(other, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binary(other, lambda a, b: a - b)

    def __rsub__(self, other):
        return self._binary(other, lambda a, b: b - a)

    def __mul__(self, other):
        return self._binary(other, lambda a, b: a * b)

    __rmul__ = __mul__

    def _checked_div(self, a, b):
        if b.contains(0):
            raise ZeroDivisionError("divisor interval contains 0")
        return a / b

    def __truediv__(self, other):
        return self._binary(other, lambda a, b: self._checked_div(a, b))

    def __rtruediv__(self, other):
        return self._binary(other, lambda a, b: self._checked_div(b, a))

    def __neg__(self):
        return IntervalReal(-self._ball, self.prec)

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        with _prec(self.prec):
            return IntervalReal(self._ball**k, self.prec)

    def pow(self, s: Rational) -> "IntervalReal":
        """``self ** s`` for a positive interval and rational exponent."""
        if not self.is_positive():
            raise ValueError("real power needs a positive base")
        s = Fraction(s)
        with _prec(self.prec):
            e = flint.arb(flint.fmpq(s.numerator, s.denominator))
            return IntervalReal((self._ball.log() * e).exp(), self.prec)

    def sqrt(self) -> "IntervalReal":
        if self.upper < 0:
            raise ValueError("sqrt of a negative interval")
        with _prec(self.prec):
            return IntervalReal(self._ball.sqrt(), self.prec)

    def log(self) -> "IntervalReal":
        if not self.is_positive():
            raise ValueError("log needs a positive interval")
        with _prec(self.prec):
            return IntervalReal(self._ball.log(), self.prec)

    def exp(self) -> "IntervalReal":
        with _prec(self.prec):
            return IntervalReal(self._ball.exp(), self.prec)

    def abs(self) -> "IntervalReal":
        with _prec(self.prec):
            return IntervalReal(abs(self._ball), self.prec)
