"""Certified Euler products over primes p >= 5 and the census constants.

Every local factor used here is a rational function of ``u = p^(-1/6)``
of the form ``N(u) / D(u)`` with ``N(0) = D(0) = 1``.  The product is
accelerated by peeling off zeta factors: writing

    F(u) = R(u) * prod_{k <= K} (1 - u^k)^(-b_k),   R(u) = 1 + O(u^(K+1)),

the part ``prod_p (1 - p^(-k/6))^(-b_k)`` is a power of a zeta value with
the Euler factors at 2 and 3 removed.  The primes below ``P0`` are
multiplied directly and the rest is enclosed by a Cauchy estimate on
``log R`` over the disc ``|u| <= rho``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import flint
import mpmath

from .arithmetic import IntervalReal, _prec, primes_below

__all__ = [
    "LocalFactor",
    "EulerConstant",
    "ReductionCollection",
    "REDUCTION_TYPES",
    "sf_factor",
    "kappa_factor",
    "generic_factor",
    "zeta_exponents",
    "euler_product",
    "euler_constant",
    "c_infinity",
    "gamma_ratio",
    "CONSTANT_NAMES",
]

REDUCTION_TYPES = ("good", "multiplicative", "additive")
Poly = tuple[Fraction, ...]


def _poly(terms: Mapping[int, int | Fraction]) -> Poly:
    n = max(terms) + 1 if terms else 1
    out = [Fraction(0)] * n
    for k, c in terms.items():
        out[k] += Fraction(c)
    return tuple(out)


def _add(p: Sequence[Fraction], q: Sequence[Fraction]) -> Poly:
    n = max(len(p), len(q))
    return tuple((p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n))


def _mul(p: Sequence[Fraction], q: Sequence[Fraction]) -> Poly:
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return tuple(out)


def _prod(*ps: Sequence[Fraction]) -> Poly:
    out: Poly = (Fraction(1),)
    for p in ps:
        out = _mul(out, p)
    return out


ONE = _poly({0: 1})
ONE_MINUS_U = _poly({0: 1, 1: -1})
ONE_MINUS_P = _poly({0: 1, 6: -1})  # 1 - 1/p
ONE_PLUS_U = _poly({0: 1, 1: 1})


@dataclass(frozen=True)
class LocalFactor:
    """N(u) / D(u) in u = p^(-1/6)."""

    num: Poly
    den: Poly = ONE

    def __post_init__(self):
        if self.num[0] != 1 or self.den[0] != 1:
            raise ValueError("local factors must be normalized to 1 at u = 0")

    def series(self, K: int) -> list[Fraction]:
        """Power series coefficients of N/D up to u^K."""
        out = [Fraction(0)] * (K + 1)
        num = list(self.num) + [Fraction(0)] * (K + 1)
        for n in range(K + 1):
            acc = num[n]
            for j in range(1, min(n, len(self.den) - 1) + 1):
                acc -= self.den[j] * out[n - j]
            out[n] = acc
        return out

    def log_series(self, K: int) -> list[Fraction]:
        """Coefficients a_0..a_K of log(N/D)."""
        f = self.series(K)
        a = [Fraction(0)] * (K + 1)
        for n in range(1, K + 1):
            acc = n * f[n]
            for j in range(1, n):
                acc -= j * a[j] * f[n - j]
            a[n] = acc / n
        return a

    def evaluate(self, u: flint.arb) -> flint.arb:
        return _horner(self.num, u) / _horner(self.den, u)

    def evaluate_at_prime(self, p: int, prec: int) -> IntervalReal:
        with _prec(prec):
            u = flint.arb(p) ** flint.arb(flint.fmpq(-1, 6))
            return IntervalReal(self.evaluate(u), prec)

    def perturbation_bound(self, rho: Fraction) -> Fraction:
        """An upper bound for |N/D - 1| on |u| <= rho."""
        top = sum(abs(c) * rho**k for k, c in enumerate(_add(self.num, tuple(-c for c in self.den))))
        below = 1 - sum(abs(c) * rho**k for k, c in enumerate(self.den) if k)
        if below <= 0:
            raise ValueError("denominator may vanish on the disc")
        return top / below


def _horner(coeffs: Sequence[Fraction], u: flint.arb) -> flint.arb:
    acc = flint.arb(0)
    for c in reversed(coeffs):
        acc = acc * u + flint.arb(flint.fmpq(c.numerator, c.denominator))
    return acc


def _with_den(terms: Sequence[tuple[Poly, bool]]) -> LocalFactor:
    """Sum of polynomials, some of them divided by (1 - u)."""
    num: Poly = (Fraction(0),)
    has_den = any(d for _, d in terms)
    for p, divided in terms:
        num = _add(num, p if (divided or not has_den) else _mul(p, ONE_MINUS_U))
    return LocalFactor(num, ONE_MINUS_U if has_den else ONE)


# -- the local factors ---------------------------------------------------------------

def _e_terms(types: Sequence[str]) -> list[tuple[Poly, bool]]:
    table = {
        "good": ONE_MINUS_P,
        "multiplicative": _prod(_poly({6: 1}), ONE_PLUS_U, ONE_MINUS_P, ONE_MINUS_P),
        "additive": _prod(_poly({12: 1}), ONE_PLUS_U, ONE_MINUS_P),
    }
    return [(table[t], False) for t in types]


def _f_terms(types: Sequence[str]) -> list[tuple[Poly, bool]]:
    out = []
    for t in types:
        if t == "good":
            out.append((ONE_MINUS_P, False))
        elif t == "multiplicative":
            out.append((_prod(_poly({6: 1}), ONE_MINUS_P, ONE_MINUS_P), True))
        else:
            out.append((_prod(_poly({10: 1}), ONE_MINUS_P, _poly({0: 1, 1: 1, 7: 1})), False))
            out.append((_prod(_poly({12: 1}), ONE_MINUS_P, _poly({0: 3, 3: -2})), True))
    return out


def sf_factor(types: Sequence[str] = REDUCTION_TYPES) -> LocalFactor:
    """c_g e_g + c_m e_m + c_a e_a for the allowed reduction types."""
    return _with_den(_e_terms(types)) if types else _zero_factor()


def kappa_factor(types: Sequence[str] = REDUCTION_TYPES) -> LocalFactor:
    """c_g f_g + c_m f_m + c_a f_a for the allowed reduction types."""
    return _with_den(_f_terms(types)) if types else _zero_factor()


def generic_factor() -> LocalFactor:
    """1 - p^-10."""
    return LocalFactor(_poly({0: 1, 60: -1}))


def _zero_factor() -> LocalFactor:
    raise ValueError("a collection must allow at least one reduction type at every prime")


@dataclass(frozen=True)
class ReductionCollection:
    """Allowed reduction types at finitely many primes p >= 5; all types elsewhere."""

    allowed: tuple[tuple[int, frozenset[str]], ...] = ()

    @classmethod
    def parse(cls, text: str) -> "ReductionCollection":
        """``"5:gm,7:a"``: letters g, m, a for good, multiplicative, additive."""
        letters = {"g": "good", "m": "multiplicative", "a": "additive"}
        out: dict[int, frozenset[str]] = {}
        for item in filter(None, (s.strip() for s in text.split(","))):
            p_text, _, letters_text = item.partition(":")
            p = int(p_text)
            if p < 5 or p in out:
                raise ValueError(f"bad prime {p} in collection")
            if not letters_text or any(ch not in letters for ch in letters_text):
                raise ValueError(f"bad reduction letters {letters_text!r}")
            out[p] = frozenset(letters[ch] for ch in letters_text)
        return cls(tuple(sorted(out.items())))

    def types_at(self, p: int) -> frozenset[str]:
        for q, types in self.allowed:
            if q == p:
                return types
        return frozenset(REDUCTION_TYPES)

    def admits(self, p: int, reduction: str) -> bool:
        return reduction in self.types_at(p)

    def __str__(self) -> str:
        return ",".join(f"{p}:" + "".join(t[0] for t in REDUCTION_TYPES if t in ts) for p, ts in self.allowed)


# -- accelerated products ------------------------------------------------------------------

def _mobius(n: int) -> int:
    out, m, d = 1, n, 2
    while d * d <= m:
        if m % d == 0:
            m //= d
            if m % d == 0:
                return 0
            out = -out
        d += 1
    return -out if m > 1 else out


def zeta_exponents(F: LocalFactor, K: int) -> dict[int, Fraction]:
    """b_k with F(u) = R(u) prod_{k<=K} (1 - u^k)^(-b_k), R = 1 + O(u^(K+1))."""
    a = F.log_series(K)
    b = {}
    for k in range(1, K + 1):
        kb = sum(_mobius(k // d) * d * a[d] for d in range(1, k + 1) if k % d == 0)
        if kb:
            b[k] = Fraction(kb, k)
    bad = [k for k in b if k <= 6]
    if bad:
        raise ValueError(f"the product over primes diverges (terms u^{bad[0]} survive)")
    return b


@dataclass(frozen=True)
class ProductEnclosure:
    partial: IntervalReal  # zeta part times the primes below P0
    tail: IntervalReal  # upper bound T for |log| of the remaining primes
    value: IntervalReal
    P0: int
    K: int


def euler_product(F: LocalFactor, *, K: int = 42, P0: int = 10**4, rho: Fraction = Fraction(1, 2),
                  prec: int = 128) -> ProductEnclosure:
    """Certified enclosure of prod_{p >= 5} F(p)."""
    if K < 7:
        raise ValueError("K must be at least 7")
    if P0 ** Fraction(-1, 6) >= rho or P0 < 5:
        raise ValueError("P0 too small for the chosen disc")
    b = zeta_exponents(F, K)
    eps = F.perturbation_bound(rho)
    if eps >= 1:
        raise ValueError("local factor may vanish on the disc")
    with _prec(prec):
        arb = flint.arb

        def q(x: Fraction) -> flint.arb:
            return arb(flint.fmpq(x.numerator, x.denominator))

        zeta_part = arb(1)
        for k, bk in b.items():
            s = q(Fraction(k, 6))
            z = s.zeta() * (1 - arb(2) ** (-s)) * (1 - arb(3) ** (-s))
            zeta_part *= (z.log() * q(bk)).exp()

        partial = arb(1)
        sixth = q(Fraction(-1, 6))
        for p in primes_below(P0):
            if p < 5:
                continue
            u = arb(p) ** sixth
            val = F.evaluate(u)
            upow = arb(1)
            powers = []
            for _ in range(K):
                upow *= u
                powers.append(upow)
            for k, bk in b.items():
                val *= ((1 - powers[k - 1]).log() * q(bk)).exp()
            partial *= val

        # Cauchy bound for log R on |u| = rho, then summed over n >= P0
        r = q(rho)
        M = -(1 - q(eps)).log()
        for k, bk in b.items():
            M += abs(q(bk)) * -(1 - r**k).log()
        u0 = arb(P0) ** sixth
        s = Fraction(K + 1, 6)
        tail_sum = (arb(P0 - 1) ** q(1 - s)) / q(s - 1)
        T = (M / (1 - u0 / r) * r ** (-(K + 1)) * tail_sum).upper()
        spread = arb(0).union(T).union(-T)
        value = zeta_part * partial * spread.exp()
        return ProductEnclosure(IntervalReal(zeta_part * partial, prec), IntervalReal(T, prec),
                                IntervalReal(value, prec), P0, K)


# -- the named constants ----------------------------------------------------------------------

CONSTANT_NAMES = ("sf", "sf+", "sf-", "kappa", "kappa+", "kappa-", "generic", "generic+", "generic-")


def gamma_ratio(prec: int = 128) -> IntervalReal:
    """Gamma(1/2) Gamma(1/6) / Gamma(2/3)."""
    G = IntervalReal.gamma
    return G(Fraction(1, 2), prec) * G(Fraction(1, 6), prec) / G(Fraction(2, 3), prec)


def _alpha(sign: str, prec: int) -> IntervalReal:
    sqrt3 = IntervalReal.from_fraction(3, prec).sqrt()
    if sign == "+":
        return IntervalReal.from_fraction(1, prec)
    if sign == "-":
        return sqrt3
    return sqrt3 + 1


def c_infinity(sign: str, prec: int = 128) -> IntervalReal:
    """Area of {(A, B) : 0 < +-(-4A^3 - 27B^2) < 1}, via Beta values."""
    G = IntervalReal.gamma
    base = IntervalReal.from_fraction(2, prec) / (
        IntervalReal.from_fraction(4, prec).pow(Fraction(1, 3)) * IntervalReal.from_fraction(27, prec).sqrt()
    )
    if sign == "+":
        beta = G(Fraction(1, 2), prec) * G(Fraction(1, 6), prec) / G(Fraction(2, 3), prec)
        return base * Fraction(1, 5) * beta
    if sign == "-":
        beta = G(Fraction(1, 2), prec) * G(Fraction(1, 3), prec) / G(Fraction(5, 6), prec)
        return base * Fraction(3, 5) * beta
    raise ValueError("sign must be '+' or '-'")


@dataclass(frozen=True)
class EulerConstant:
    name: str
    prefactor: IntervalReal
    product_partial: IntervalReal
    tail_bound: IntervalReal
    value: IntervalReal
    product: IntervalReal
    collection: str = ""
    parameters: dict = field(default_factory=dict)

    def as_dict(self, digits: int = 15) -> dict:
        def enc(x: IntervalReal) -> dict:
            return {"lower": _fmt(x.lower, digits), "upper": _fmt(x.upper, digits), "width": _fmt(x.width(), 3)}

        return {
            "name": self.name,
            "collection": self.collection,
            "prefactor": enc(self.prefactor),
            "product": enc(self.product),
            "tail_bound": _fmt(self.tail_bound.upper, 3),
            "value": enc(self.value),
            "parameters": dict(self.parameters),
        }


def _fmt(x, digits: int) -> str:
    return mpmath.nstr(x, digits)


def euler_constant(name: str, *, digits: int = 15, collection: ReductionCollection | None = None,
                   K: int = 42, P0: int = 10**4) -> EulerConstant:
    """The census constants: prefactor alpha/(60 sqrt 3) Gamma-ratio times the Euler product."""
    if name not in CONSTANT_NAMES:
        raise ValueError(f"unknown constant {name!r}; choose from {', '.join(CONSTANT_NAMES)}")
    prec = max(128, int(digits * 3.33) + 64)
    sign = "+" if name.endswith("+") else "-" if name.endswith("-") else ""
    family = name.rstrip("+-")
    collection = collection or ReductionCollection()
    if family == "generic":
        F = generic_factor()
        if collection.allowed:
            raise ValueError("the generic constant takes no reduction collection")
    else:
        F = sf_factor() if family == "sf" else kappa_factor()
    enclosure = euler_product(F, K=K, P0=P0, prec=prec)
    product = enclosure.value
    for p, types in collection.allowed:
        local = sf_factor(sorted(types)) if family == "sf" else kappa_factor(sorted(types))
        product = product * local.evaluate_at_prime(p, prec) / F.evaluate_at_prime(p, prec)
    sqrt3 = IntervalReal.from_fraction(3, prec).sqrt()
    prefactor = _alpha(sign, prec) / (sqrt3 * 60) * gamma_ratio(prec)
    return EulerConstant(
        name=name,
        prefactor=prefactor,
        product_partial=enclosure.partial,
        tail_bound=enclosure.tail,
        value=prefactor * product,
        product=product,
        collection=str(collection),
        parameters={"K": K, "P0": P0, "precision_bits": prec},
    )
