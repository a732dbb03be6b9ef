"""Reduction types of y^2 = x^3 + Ax + B at primes p >= 5.

Two independent classifiers are provided.  :func:`classify_by_valuations`
reads the symbol off ``(v(A), v(B), v(Delta))``.  :func:`classify_by_translation`
searches for a translate ``f(x + t)`` whose coefficients satisfy one of the
congruence patterns characterising each symbol, refining ``t`` one p-adic
digit at a time.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Union

from .arithmetic import factorize, valuation
from .good_reduction import row_at_2, row_at_3

__all__ = [
    "KodairaSymbol",
    "LocalData",
    "MonicCubic",
    "NonMinimalError",
    "UnclassifiableError",
    "WeierstrassCurve",
    "GlobalInvariants",
    "classify_by_translation",
    "classify_by_valuations",
    "conductor",
    "global_invariants",
    "index",
    "is_small",
    "local_data",
    "minimalize",
    "sigma",
    "twist_by_p",
]

Number = Union[int, Fraction]
INF = math.inf


class NonMinimalError(ValueError):
    """Raised when p^4 | A and p^6 | B."""


class UnclassifiableError(RuntimeError):
    """No congruence pattern matched; indicates a bug, never expected."""


# ---------------------------------------------------------------------------
# symbols

_FAMILIES = ("I", "I*", "II", "III", "IV", "IV*", "III*", "II*")
_SYMBOL_RE = re.compile(r"^(I|II|III|IV)(\d*)(\*?)$")


@dataclass(frozen=True, order=True)
class KodairaSymbol:
    """A reduction type; ``n`` is only meaningful for the ``I`` and ``I*`` families."""

    family: str
    n: int = 0

    def __post_init__(self):
        if self.family not in _FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.n < 0 or (self.n and self.family not in ("I", "I*")):
            raise ValueError(f"bad parameter n={self.n} for {self.family}")

    @classmethod
    def parse(cls, text: str) -> "KodairaSymbol":
        m = _SYMBOL_RE.match(text.strip().replace("star", "*"))
        if not m:
            raise ValueError(f"cannot parse Kodaira symbol {text!r}")
        roman, digits, star = m.groups()
        if roman == "I":
            if not digits:
                raise ValueError(f"I needs a subscript: {text!r}")
            return cls("I" + star, int(digits))
        if digits:
            raise ValueError(f"{roman} takes no subscript: {text!r}")
        return cls(roman + star)

    def __str__(self) -> str:
        if self.family == "I":
            return f"I{self.n}"
        if self.family == "I*":
            return f"I{self.n}*"
        return self.family

    @property
    def is_starred(self) -> bool:
        return self.family.endswith("*")

    @property
    def reduction(self) -> str:
        if self.family == "I":
            return "good" if self.n == 0 else "multiplicative"
        return "additive"


_SIGMA = {"II": "IV*", "III": "III*", "IV": "II*", "IV*": "II", "III*": "III", "II*": "IV"}


def sigma(T: KodairaSymbol) -> KodairaSymbol:
    """The symbol of the quadratic twist by p."""
    if T.family == "I":
        return KodairaSymbol("I*", T.n)
    if T.family == "I*":
        return KodairaSymbol("I", T.n)
    return KodairaSymbol(_SIGMA[T.family])


# ---------------------------------------------------------------------------
# local exponents

_FIXED = {
    # family: (c, delta, q, d)
    "II": (2, 2, 0, 2),
    "III": (2, 3, 1, 1),
    "IV": (2, 4, 1, 2),
    "IV*": (2, 8, 3, 2),
    "III*": (2, 9, 4, 1),
    "II*": (2, 10, 4, 2),
}


@dataclass(frozen=True)
class LocalData:
    p: int
    symbol: KodairaSymbol
    c_exp: int
    delta_exp: int
    q_exp: int
    d_exp: int

    @property
    def reduction(self) -> str:
        return self.symbol.reduction

    @property
    def index_exp(self) -> int:
        return self.delta_exp - self.c_exp

    def as_dict(self) -> dict:
        return {
            "p": self.p,
            "symbol": str(self.symbol),
            "reduction": self.reduction,
            "c_exp": self.c_exp,
            "delta_exp": self.delta_exp,
            "q_exp": self.q_exp,
            "d_exp": self.d_exp,
            "index_exp": self.index_exp,
        }


def local_exponents(T: KodairaSymbol) -> tuple[int, int, int, int]:
    n = T.n
    if T.family == "I":
        return (0, 0, 0, 0) if n == 0 else (1, n, n // 2, n % 2)
    if T.family == "I*":
        return (2, n + 6, n // 2 + 3, n % 2)
    return _FIXED[T.family]


def local_data(symbol: KodairaSymbol, p: int) -> LocalData:
    return LocalData(p, symbol, *local_exponents(symbol))


# ---------------------------------------------------------------------------
# curves and cubics


@dataclass(frozen=True)
class WeierstrassCurve:
    """The curve y^2 = x^3 + Ax + B."""

    A: int
    B: int

    @classmethod
    def from_rational(cls, A: Number, B: Number) -> "WeierstrassCurve":
        """Clear denominators with a twist by a unit (only 3 can occur)."""
        A, B = Fraction(A), Fraction(B)
        u = 1
        while (A * u**2).denominator != 1 or (B * u**3).denominator != 1:
            u *= 3
        return cls(int(A * u**2), int(B * u**3))

    @property
    def discriminant(self) -> int:
        return -4 * self.A**3 - 27 * self.B**2

    def is_minimal_at(self, p: int) -> bool:
        return not (self.A % p**4 == 0 and self.B % p**6 == 0)

    def is_minimal(self) -> bool:
        g = math.gcd(self.A, self.B)
        if g == 0:
            return False
        return all(self.is_minimal_at(p) for p in factorize(g).primes)

    def as_cubic(self) -> "MonicCubic":
        return MonicCubic(0, self.A, self.B)


@dataclass(frozen=True)
class MonicCubic:
    """x^3 + a x^2 + b x + c with integer or rational coefficients."""

    a: Number
    b: Number
    c: Number

    @property
    def discriminant(self) -> Number:
        a, b, c = self.a, self.b, self.c
        return a * a * b * b - 4 * b**3 - 4 * a**3 * c - 27 * c * c + 18 * a * b * c

    @property
    def is_integral(self) -> bool:
        return all(Fraction(x).denominator == 1 for x in (self.a, self.b, self.c))

    def shift(self, t: Number) -> "MonicCubic":
        """The cubic f(x + t)."""
        a, b, c = self.a, self.b, self.c
        return MonicCubic(
            _norm(a + 3 * t),
            _norm(b + 2 * a * t + 3 * t * t),
            _norm(c + b * t + a * t * t + t**3),
        )

    def traceless(self) -> tuple[Number, Number]:
        """(A, B) with f(x - a/3) = x^3 + Ax + B; rational when 3 does not divide a."""
        g = self.shift(-Fraction(self.a) / 3)
        return g.b, g.c

    def __call__(self, x: Number) -> Number:
        return ((x + self.a) * x + self.b) * x + self.c


def _norm(x: Number) -> Number:
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x)
    return x


def _v(x: Number, p: int) -> float:
    """Valuation with v(0) = inf; denominators here are prime to p."""
    if x == 0:
        return INF
    return valuation(x, p)


def minimalize(A: int, B: int) -> WeierstrassCurve:
    """Divide (A, B) by (p^4, p^6) as long as possible at every prime."""
    if 4 * A**3 + 27 * B**2 == 0:
        raise ValueError("singular curve: Delta(A, B) = 0")
    g = math.gcd(A, B)
    for p in factorize(g).primes if g > 1 else ():
        while A % p**4 == 0 and B % p**6 == 0:
            A, B = A // p**4, B // p**6
    return WeierstrassCurve(A, B)


def _check_prime(p: int) -> None:
    if p < 5:
        raise ValueError("classification is implemented for p >= 5 only")


def _traceless_valuations(f: MonicCubic | WeierstrassCurve, p: int) -> tuple[float, float, float]:
    if isinstance(f, WeierstrassCurve):
        A, B = f.A, f.B
    else:
        A, B = f.traceless()
    D = -4 * A**3 - 27 * B**2
    if D == 0:
        raise ValueError("singular cubic: discriminant 0")
    vA, vB = _v(A, p), _v(B, p)
    if vA >= 4 and vB >= 6:
        raise NonMinimalError(f"not minimal at {p}")
    return vA, vB, _v(D, p)


# ---------------------------------------------------------------------------
# classifier 1: valuations


def classify_by_valuations(E: WeierstrassCurve, p: int) -> KodairaSymbol:
    _check_prime(p)
    vA, vB, vD = _traceless_valuations(E, p)
    vD = int(vD)
    if vD == 0:
        return KodairaSymbol("I", 0)
    if vA == 0:
        return KodairaSymbol("I", vD)
    if vA >= 1 and vB == 1:
        return KodairaSymbol("II")
    if vA == 1 and vB >= 2:
        return KodairaSymbol("III")
    if vA >= 2 and vB == 2:
        return KodairaSymbol("IV")
    if vA >= 2 and vB >= 3 and vD == 6:
        return KodairaSymbol("I*", 0)
    if vA == 2 and vB == 3 and vD > 6:
        return KodairaSymbol("I*", vD - 6)
    if vA >= 3 and vB == 4:
        return KodairaSymbol("IV*")
    if vA == 3 and vB >= 5:
        return KodairaSymbol("III*")
    if vA >= 4 and vB == 5:
        return KodairaSymbol("II*")
    raise UnclassifiableError(f"no valuation row for v(A)={vA}, v(B)={vB}, v(D)={vD}")


# ---------------------------------------------------------------------------
# classifier 2: translation search
#
# For the disc t in t0 + p^j Z_p, a coefficient polynomial P(t) expands as
# sum_k P_k(t0) p^(jk) s^k.  With v0 = v(P_0) and w = min_{k>=1} v(P_k) + jk,
# the valuation of P on the whole disc is exactly v0 when v0 < w, and is at
# least min(v0, w) in any case.  Conditions are evaluated to True / False /
# None (undecided on this disc).

# Coefficient polynomials in t of f(x + t), lowest degree first.
def _coefficient_polys(f: MonicCubic) -> tuple[tuple[int, ...], ...]:
    a, b, c = f.a, f.b, f.c
    return ((a, 3), (b, 2 * a, 3), (c, b, a, 1))


@lru_cache(maxsize=None)
def _binom(n: int, k: int) -> int:
    return math.comb(n, k)


def _disc_profile(poly: tuple[int, ...], t0: int, j: int, p: int) -> tuple[float, float]:
    deg = len(poly) - 1
    taylor = []
    for k in range(deg + 1):
        taylor.append(sum(_binom(i, k) * poly[i] * t0 ** (i - k) for i in range(k, deg + 1)))
    v0 = _v(taylor[0], p)
    w = min((_v(taylor[k], p) + j * k for k in range(1, deg + 1)), default=INF)
    return v0, w


def _divisible(profile: tuple[float, float], e: int):
    v0, w = profile
    if min(v0, w) >= e:
        return True
    if v0 < w and v0 < e:
        return False
    return None


def _exact(profile: tuple[float, float], e: int):
    v0, w = profile
    if v0 < w:
        return v0 == e
    if min(v0, w) > e:
        return False
    return None


def _all(conds: Iterable) -> bool | None:
    out = True
    for c in conds:
        if c is False:
            return False
        if c is None:
            out = None
    return out


def _row_status(T: KodairaSymbol, pa, pb, pc, vD: float):
    fam, n = T.family, T.n
    if fam == "I":
        return _all((_exact(pa, 0), _divisible(pb, (n + 1) // 2), _exact(pc, n)))
    if fam == "II":
        return _all((_divisible(pa, 1), _divisible(pb, 1), _exact(pc, 1)))
    if fam == "III":
        return _all((_divisible(pa, 1), _exact(pb, 1), _divisible(pc, 2)))
    if fam == "IV":
        return _all((_divisible(pa, 1), _divisible(pb, 2), _exact(pc, 2)))
    if fam == "I*" and n == 0:
        if vD >= 7:
            return False
        return _all((_divisible(pa, 1), _divisible(pb, 2), _divisible(pc, 3)))
    if fam == "I*":
        return _all((_exact(pa, 1), _divisible(pb, (n + 1) // 2 + 2), _exact(pc, n + 3)))
    if fam == "IV*":
        return _all((_divisible(pa, 2), _divisible(pb, 3), _exact(pc, 4)))
    if fam == "III*":
        return _all((_divisible(pa, 2), _exact(pb, 3), _divisible(pc, 5)))
    if fam == "II*":
        return _all((_divisible(pa, 2), _divisible(pb, 4), _exact(pc, 5)))
    raise AssertionError(fam)


def _integral_model(f: MonicCubic) -> MonicCubic:
    """An integral cubic with the same reduction type at every p >= 5."""
    if f.is_integral:
        return MonicCubic(int(f.a), int(f.b), int(f.c))
    # x -> x/3 scaling: 27 f(x/3) is monic after clearing, and differs by a unit twist.
    u = 1
    while not MonicCubic(f.a * u, f.b * u * u, f.c * u**3).is_integral:
        u *= 3
    return MonicCubic(int(f.a * u), int(f.b * u * u), int(f.c * u**3))


def classify_by_translation(f: MonicCubic, p: int) -> tuple[KodairaSymbol, int]:
    """Find a translate of ``f`` satisfying a congruence row; return (symbol, t).

    The rows for ``I_n`` with n even (and ``I_n*`` likewise) are necessary but
    not sufficient: one cubic may satisfy the ``I_2`` row at one t and the
    ``I_3`` row at another.  All witnessed rows are collected and the largest
    n within a family is reported.
    """
    _check_prime(p)
    f = _integral_model(f)
    _, _, vD = _traceless_valuations(f, p)
    if vD == 0:
        return KodairaSymbol("I", 0), 0
    vD = int(vD)
    candidates = [KodairaSymbol(x) for x in ("II", "III", "IV", "IV*", "III*", "II*")]
    candidates.append(KodairaSymbol("I*", 0))
    candidates += [KodairaSymbol("I", n) for n in range(1, vD + 1)]
    candidates += [KodairaSymbol("I*", n) for n in range(1, vD - 5)]

    polys = _coefficient_polys(f)
    max_depth = vD + 2
    witnessed: dict[KodairaSymbol, int] = {}
    stack = [(0, 0, tuple(candidates))]
    while stack:
        t0, j, rows = stack.pop()
        pa, pb, pc = (_disc_profile(P, t0, j, p) for P in polys)
        open_rows = []
        for T in rows:
            status = _row_status(T, pa, pb, pc, vD)
            if status is True:
                witnessed.setdefault(T, t0)
            elif status is None:
                open_rows.append(T)
        if open_rows:
            if j >= max_depth:
                raise UnclassifiableError(f"search depth exhausted for {f} at {p}")
            step = p**j
            rows_t = tuple(open_rows)
            for d in range(p - 1, -1, -1):
                stack.append((t0 + d * step, j + 1, rows_t))

    if not witnessed:
        raise UnclassifiableError(f"no congruence row witnessed for {f} at p={p}")
    families = {T.family for T in witnessed}
    if len(families) != 1:
        raise UnclassifiableError(f"rows of several families witnessed: {sorted(map(str, witnessed))}")
    best = max(witnessed, key=lambda T: T.n)
    return best, witnessed[best]


# ---------------------------------------------------------------------------
# small / large and the twist


def _as_traceless(f: MonicCubic | WeierstrassCurve) -> tuple[Number, Number]:
    if isinstance(f, WeierstrassCurve):
        return f.A, f.B
    return f.traceless()


def is_small(f: MonicCubic | WeierstrassCurve, p: int) -> bool:
    _check_prime(p)
    vA, vB, _ = _traceless_valuations(f, p)
    return vA < 2 or vB < 3


def twist_by_p(f: MonicCubic | WeierstrassCurve, p: int) -> MonicCubic:
    """Traceless model of the quadratic twist by p (p^2 A, p^3 B) or its inverse."""
    A, B = _as_traceless(f)
    if is_small(f, p):
        return MonicCubic(0, _norm(A * p**2), _norm(B * p**3))
    return MonicCubic(0, _norm(Fraction(A) / p**2), _norm(Fraction(B) / p**3))


# ---------------------------------------------------------------------------
# global invariants


@dataclass(frozen=True)
class GlobalInvariants:
    delta: int
    conductor: int
    index: int
    q: int
    d: int
    local: tuple[LocalData, ...]

    def as_dict(self) -> dict:
        return {
            "delta": self.delta,
            "conductor": self.conductor,
            "index": self.index,
            "q": self.q,
            "d": self.d,
            "local": [ld.as_dict() for ld in self.local],
        }


def prime_to_six_discriminant(E: WeierstrassCurve) -> int:
    """Delta(E) for a curve with good reduction at 2 and 3.

    Raises if the congruence tables do not place (A, B) in a good-reduction
    class at 2 or at 3.
    """
    r2, r3 = row_at_2(E.A, E.B), row_at_3(E.A, E.B)
    if r2 is None or r3 is None:
        raise ValueError("curve does not have good reduction at both 2 and 3")
    D = E.discriminant
    scale = 2**r2.delta_exp * 3**r3.delta_exp
    if D % scale:
        raise ValueError("discriminant does not carry the tabulated 2,3-part")
    out = D // scale
    if out % 2 == 0 or out % 3 == 0:
        raise ValueError("reduced discriminant is not prime to 6")
    return out


def global_invariants(E: WeierstrassCurve) -> GlobalInvariants:
    if E.discriminant == 0:
        raise ValueError("singular curve")
    delta = prime_to_six_discriminant(E)
    for p in factorize(math.gcd(E.A, E.B) or 1).primes:
        if p >= 5 and not E.is_minimal_at(p):
            raise NonMinimalError(f"not minimal at {p}")
    C = Q = D = 1
    local = []
    for p, _ in factorize(delta):
        ld = local_data(classify_by_valuations(E, p), p)
        local.append(ld)
        C *= p**ld.c_exp
        Q *= p**ld.q_exp
        D *= p**ld.d_exp
    D = D if delta > 0 else -D
    return GlobalInvariants(delta, C, abs(delta) // C, Q, D, tuple(local))


def conductor(E: WeierstrassCurve) -> int:
    return global_invariants(E).conductor


def index(E: WeierstrassCurve) -> int:
    return global_invariants(E).index
