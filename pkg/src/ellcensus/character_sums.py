"""Finite Fourier analysis on monic cubics over Z/NZ.

A character chi = (a', b', c') of (Z/NZ)^3 acts by
chi(x^3 + ax^2 + bx + c) = e((a'a + b'b + c'c) / N).  Sums of characters are
kept exactly as elements of Z[zeta_N] (coefficient vectors on zeta_N^k), so
equalities and magnitudes can be tested without rounding.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Callable, Iterator, Mapping, Sequence

import flint
import numpy as np

from .arithmetic import DEFAULT_PRECISION, BudgetExceeded, IntervalReal, _prec
from .exact_densities import m_min, closed_form_symbol_density, truncated_symbol
from .local_classification import KodairaSymbol

__all__ = [
    "BudgetExceeded",
    "CharacterTriple",
    "ComplexValue",
    "CyclotomicInteger",
    "ResidueFunction",
    "SplittingType",
    "char_eval",
    "count_splitting_type",
    "delta2",
    "fourier_at",
    "fourier_table",
    "ga_action",
    "ga_action_char",
    "k_T",
    "stated_fourier_magnitude",
    "m_p",
    "n_p",
    "phi0_indicator",
    "phi_T",
    "psi_r",
    "r_T_count",
    "r_T_reference_exponents",
    "r_T_statement",
    "verify_fourier_statements",
    "StatementCheck",
    "R_T_CONSTANT",
]

FOURIER_BUDGET = 10**8


# ---------------------------------------------------------------------------
# exact values in Z[zeta_N]


@lru_cache(maxsize=None)
def _cyclotomic(N: int) -> flint.fmpz_poly:
    return flint.fmpz_poly.cyclotomic(N)


@dataclass(frozen=True)
class ComplexValue:
    real: IntervalReal
    imag: IntervalReal

    def __complex__(self) -> complex:
        return complex(float(self.real), float(self.imag))

    def abs(self) -> IntervalReal:
        return (self.real * self.real + self.imag * self.imag).sqrt()


class CyclotomicInteger:
    """sum_k coeffs[k] zeta_N^k with integer coefficients."""

    __slots__ = ("N", "coeffs")

    def __init__(self, N: int, coeffs: Sequence[int] | np.ndarray):
        if len(coeffs) != N:
            raise ValueError("need exactly N coefficients")
        self.N = N
        self.coeffs = np.asarray(coeffs, dtype=object)

    @classmethod
    def integer(cls, N: int, n: int) -> "CyclotomicInteger":
        c = [0] * N
        c[0] = n
        return cls(N, c)

    @classmethod
    def root(cls, N: int, k: int) -> "CyclotomicInteger":
        c = [0] * N
        c[k % N] = 1
        return cls(N, c)

    def _check(self, other: "CyclotomicInteger") -> None:
        if self.N != other.N:
            raise ValueError("different cyclotomic fields")

    def __add__(self, other: "CyclotomicInteger") -> "CyclotomicInteger":
        self._check(other)
        return CyclotomicInteger(self.N, self.coeffs + other.coeffs)

    def __sub__(self, other: "CyclotomicInteger") -> "CyclotomicInteger":
        self._check(other)
        return CyclotomicInteger(self.N, self.coeffs - other.coeffs)

    def __mul__(self, other):
        if isinstance(other, int):
            return CyclotomicInteger(self.N, self.coeffs * other)
        self._check(other)
        N = self.N
        out = np.zeros(N, dtype=object)
        for k in np.nonzero(self.coeffs)[0]:
            out += self.coeffs[k] * np.roll(other.coeffs, k)
        return CyclotomicInteger(N, out)

    __rmul__ = __mul__

    def shift(self, k: int) -> "CyclotomicInteger":
        """Multiply by zeta_N^k."""
        return CyclotomicInteger(self.N, np.roll(self.coeffs, k % self.N))

    def conjugate(self) -> "CyclotomicInteger":
        idx = (-np.arange(self.N)) % self.N
        return CyclotomicInteger(self.N, self.coeffs[idx])

    def norm_squared(self) -> "CyclotomicInteger":
        """|z|^2 as an element of the real subfield."""
        return self * self.conjugate()

    def is_zero(self) -> bool:
        poly = flint.fmpz_poly([int(c) for c in self.coeffs])
        _, rem = divmod(poly, _cyclotomic(self.N))
        return rem == 0

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = CyclotomicInteger.integer(self.N, other)
        if not isinstance(other, CyclotomicInteger):
            return NotImplemented
        return self.N == other.N and (self - other).is_zero()

    __hash__ = None

    def abs_equals(self, n: int) -> bool:
        """|z| == n, decided exactly."""
        return self.norm_squared() == n * n

    def value(self, prec: int = DEFAULT_PRECISION) -> ComplexValue:
        with _prec(prec):
            total = flint.acb(0)
            two_pi_i = flint.acb(0, 2 * flint.arb.pi())
            for k in np.nonzero(self.coeffs)[0]:
                total += int(self.coeffs[k]) * (two_pi_i * int(k) / self.N).exp()
        return ComplexValue(IntervalReal(total.real, prec), IntervalReal(total.imag, prec))

    def __complex__(self) -> complex:
        k = np.arange(self.N)
        return complex(np.sum(self.coeffs.astype(float) * np.exp(2j * np.pi * k / self.N)))

    def __repr__(self) -> str:
        terms = [f"{c}*z^{k}" for k, c in enumerate(self.coeffs) if c]
        return f"CyclotomicInteger(N={self.N}, {' + '.join(terms) or '0'})"


# ---------------------------------------------------------------------------
# characters and the translation action


@dataclass(frozen=True)
class CharacterTriple:
    a_check: int
    b_check: int
    c_check: int
    N: int

    def __post_init__(self):
        if self.N < 1 or math.gcd(self.N, 6) != 1:
            raise ValueError("N must be positive and coprime to 6")
        for name in ("a_check", "b_check", "c_check"):
            object.__setattr__(self, name, getattr(self, name) % self.N)

    @property
    def triple(self) -> tuple[int, int, int]:
        return (self.a_check, self.b_check, self.c_check)

    def divisible_by(self, p: int) -> bool:
        return all(v % p == 0 for v in self.triple)

    @classmethod
    def all(cls, N: int) -> Iterator["CharacterTriple"]:
        for a in range(N):
            for b in range(N):
                for c in range(N):
                    yield cls(a, b, c, N)


Triple = tuple[int, int, int]


def char_eval(chi: CharacterTriple, f: Triple) -> CyclotomicInteger:
    a, b, c = f
    return CyclotomicInteger.root(chi.N, chi.a_check * a + chi.b_check * b + chi.c_check * c)


def ga_action(r: int, f: Triple, N: int) -> Triple:
    """(r . f)(x) = f(x + r) on coefficient triples mod N."""
    a, b, c = f
    return ((a + 3 * r) % N, (b + 2 * r * a + 3 * r * r) % N, (c + r * b + r * r * a + r**3) % N)


def ga_action_char(r: int, chi: CharacterTriple) -> CharacterTriple:
    a, b, c = chi.triple
    return CharacterTriple(a + 2 * r * b + r * r * c, b + r * c, c, chi.N)


def psi_r(r: int, chi: CharacterTriple) -> CyclotomicInteger:
    a, b, c = chi.triple
    return CyclotomicInteger.root(chi.N, 3 * a * r + 3 * b * r * r + c * r**3)


def delta2(chi: CharacterTriple) -> int:
    return (chi.b_check**2 - chi.a_check * chi.c_check) % chi.N


# ---------------------------------------------------------------------------
# functions on U(Z/NZ)


@dataclass(frozen=True)
class ResidueFunction:
    """An integer-valued function on (Z/NZ)^3 stored by its support."""

    N: int
    values: Mapping[Triple, int]

    def __call__(self, f: Triple) -> int:
        return self.values.get(tuple(v % self.N for v in f), 0)

    @classmethod
    def constant(cls, N: int, value: int = 1) -> "ResidueFunction":
        r = range(N)
        return cls(N, {(a, b, c): value for a in r for b in r for c in r})

    def translate(self, r: int) -> "ResidueFunction":
        """(r . phi)(f) = phi((-r) . f); its support is r . support."""
        return ResidueFunction(self.N, {ga_action(r, f, self.N): v for f, v in self.values.items()})

    @cached_property
    def _arrays(self) -> tuple[np.ndarray, np.ndarray]:
        pts = np.array(list(self.values.keys()), dtype=np.int64).reshape(-1, 3)
        vals = np.array(list(self.values.values()), dtype=np.int64)
        return pts, vals

    def sum_squares(self) -> int:
        return sum(v * v for v in self.values.values())


def fourier_at(phi: ResidueFunction, chi: CharacterTriple) -> CyclotomicInteger:
    """phi^(chi) = sum_f phi(f) chi(f), summed over the support of phi."""
    if phi.N != chi.N:
        raise ValueError("modulus mismatch")
    if len(phi.values) > FOURIER_BUDGET:
        raise BudgetExceeded("support too large for direct summation")
    pts, vals = phi._arrays
    N = phi.N
    exps = (pts @ np.array(chi.triple, dtype=np.int64)) % N
    coeffs = np.zeros(N, dtype=np.int64)
    np.add.at(coeffs, exps, vals)
    return CyclotomicInteger(N, [int(c) for c in coeffs])


def fourier_table(phi: ResidueFunction, chis: np.ndarray) -> np.ndarray:
    """Coefficient vectors of phi^ at many characters (rows of ``chis``)."""
    N = phi.N
    pts, vals = phi._arrays
    chis = np.asarray(chis, dtype=np.int64).reshape(-1, 3)
    if len(chis) * len(pts) > FOURIER_BUDGET:
        raise BudgetExceeded("fourier table exceeds budget")
    exps = (chis @ pts.T) % N  # (n_chi, n_pts)
    out = np.zeros((len(chis), N), dtype=np.int64)
    rows = np.repeat(np.arange(len(chis)), len(pts))
    np.add.at(out, (rows, exps.ravel()), np.tile(vals, len(chis)))
    return out


# ---------------------------------------------------------------------------
# the sets S_0(T) and their translates


def _check_T(T: KodairaSymbol) -> None:
    if T.family in ("III", "IV"):
        return
    if T.family == "I" and T.n >= 2:
        return
    raise ValueError(f"symbol must be III, IV or I_n with n >= 2, got {T}")


def n_p(T: KodairaSymbol, p: int) -> int:
    _check_T(T)
    return p**2 if T.family in ("III", "IV") else p**T.n


def m_p(T: KodairaSymbol, p: int) -> int:
    _check_T(T)
    if T.family in ("III", "IV"):
        return p
    return p ** ((T.n + 1) // 2)


def k_T(T: KodairaSymbol) -> int:
    _check_T(T)
    if T.family == "III":
        return 2
    if T.family == "IV":
        return 1
    n = T.n // 2
    return 3 * n if T.n % 2 == 0 else 3 * n + 1


def _s0_exponents(T: KodairaSymbol) -> tuple[int, int, int]:
    """S_0(T) = {p^ea | a, p^eb | b, p^ec | c} inside (Z/NZ)^3."""
    if T.family == "III":
        return (1, 1, 2)
    if T.family == "IV":
        return (1, 2, 2)
    n = T.n // 2
    return (0, n, 2 * n) if T.n % 2 == 0 else (0, n + 1, 2 * n + 1)


def phi0_indicator(T: KodairaSymbol, p: int) -> ResidueFunction:
    _check_T(T)
    N = n_p(T, p)
    ea, eb, ec = _s0_exponents(T)
    pts = {
        (a, b, c): 1
        for a in range(0, N, p**ea)
        for b in range(0, N, p**eb)
        for c in range(0, N, p**ec)
    }
    return ResidueFunction(N, pts)


def phi_T(T: KodairaSymbol, p: int) -> ResidueFunction:
    """sum over r in Z/M of r . phi_{0,T}."""
    base = phi0_indicator(T, p)
    N = base.N
    out: dict[Triple, int] = {}
    for r in range(m_p(T, p)):
        for f in base.values:
            g = ga_action(r, f, N)
            out[g] = out.get(g, 0) + 1
    return ResidueFunction(N, out)


def _annihilates_s0(T: KodairaSymbol, p: int, chi: CharacterTriple) -> bool:
    """chi is trivial on the subgroup S_0(T), i.e. chi is in the support of its transform."""
    N = chi.N
    gens = _s0_exponents(T)
    return all((v * p**e) % N == 0 for v, e in zip(chi.triple, gens))


def stated_fourier_magnitude(T: KodairaSymbol, p: int, chi: CharacterTriple) -> int:
    """The case values of |phi_{0,T}^(chi)| as stated for III, IV, I_2n, I_2n+1."""
    _check_T(T)
    a, b, _ = chi.triple
    if T.family == "III":
        return p**2 if a % p == 0 and b % p == 0 else 0
    if T.family == "IV":
        return p if a % p == 0 else 0
    n = T.n // 2
    if T.n % 2 == 0:
        return p ** (3 * n) if a % p ** (2 * n) == 0 and b % p**n == 0 else 0
    return p ** (3 * n + 1) if a % p ** (2 * n + 1) == 0 and b % p**n == 0 else 0


def r_T_count(T: KodairaSymbol, p: int, chi: CharacterTriple) -> int:
    """#{r in 0..M-1 : r . chi lies in the support of phi_{0,T}^}."""
    _check_T(T)
    if chi.N != n_p(T, p):
        raise ValueError("character modulus must be N_p(T)")
    return sum(_annihilates_s0(T, p, ga_action_char(r, chi)) for r in range(m_p(T, p)))


def _v(x: int, p: int, cap: int) -> int:
    if x == 0:
        return cap
    v = 0
    while x % p == 0 and v < cap:
        x //= p
        v += 1
    return v


def r_T_reference_exponents(T: KodairaSymbol, p: int, chi: CharacterTriple) -> list[int]:
    """Exponents e with r_T(chi) << p^e, one per representative (0, b, c) of the orbit.

    For I_2n: chi ~ (0, p^(n+i) b, p^j c) and e = min(i, floor(j/2));
    for I_2n+1 the same with ceil(j/2).  Valuations of 0 are capped at
    v_p(N).  An empty list means no representative has p^n | b.
    """
    _check_T(T)
    if T.family != "I":
        raise ValueError("only defined for I_n")
    N = chi.N
    K = T.n
    n = T.n // 2
    out = []
    for r in range(N):
        a2, b2, c2 = ga_action_char(r, chi).triple
        if a2 != 0:
            continue
        vb, vc = _v(b2, p, K), _v(c2, p, K)
        if vb < n:
            continue
        i, j = vb - n, vc
        half = j // 2 if T.n % 2 == 0 else (j + 1) // 2
        out.append(min(i, half))
    return out


# ---------------------------------------------------------------------------
# checking the magnitude and translate-count statements

R_T_CONSTANT = 2  # observed max of r_T / p^e for I_n at p = 5, 7
EXHAUSTIVE_LIMIT = 200_000


def r_T_statement(T: KodairaSymbol, p: int, chi: CharacterTriple, literal: bool = False) -> tuple[str, int]:
    """("exact", v) or ("at_most", v) as stated for III and IV.

    For III with p | b', p | c' and p not dividing a' the translates never reach
    the support, so the value is 0; ``literal=True`` uses 1 there instead.
    """
    _check_T(T)
    if T.family == "IV":
        return ("exact", p) if chi.divisible_by(p) else ("at_most", 2)
    if T.family != "III":
        raise ValueError("exact statements exist for III and IV only")
    if delta2(chi) % p:
        return ("exact", 0)
    if chi.divisible_by(p):
        return ("exact", p)
    if not literal and chi.b_check % p == 0 and chi.c_check % p == 0:
        return ("exact", 0)
    return ("exact", 1)


def _rows_vanish(table: np.ndarray, p: int) -> np.ndarray:
    """Exact zero test in Z[zeta_N] for N = p^k: coefficients constant along cosets of p^(k-1)."""
    N = table.shape[1]
    t = table.reshape(table.shape[0], p, N // p)
    return np.all(t == t[:, :1, :], axis=(1, 2))


def _characters(T: KodairaSymbol, p: int, sample: int, seed: int) -> np.ndarray:
    N = n_p(T, p)
    if N**3 <= EXHAUSTIVE_LIMIT:
        r = np.arange(N)
        return np.array(np.meshgrid(r, r, r, indexing="ij")).reshape(3, -1).T
    rng = np.random.default_rng(seed)
    n = T.n // 2
    # the support classes: a' divisible by p^(2n) (or p^(2n+1)), b' by p^n
    step_a = p ** (T.n if T.n % 2 else 2 * n)
    support = np.stack([
        step_a * rng.integers(0, N // step_a, sample),
        p**n * rng.integers(0, N // p**n, sample),
        rng.integers(0, N, sample),
    ], axis=1)
    return np.concatenate([rng.integers(0, N, size=(sample, 3)), support])


@dataclass
class StatementCheck:
    symbol: str
    p: int
    characters: int
    exhaustive: bool
    magnitude_failures: list[tuple[int, int, int]]
    r_T_failures: list[tuple[int, int, int]]
    r_T_worst_ratio: float | None

    @property
    def ok(self) -> bool:
        return not self.magnitude_failures and not self.r_T_failures

    def as_dict(self) -> dict:
        return {
            "symbol": self.symbol,
            "p": self.p,
            "characters": self.characters,
            "exhaustive": self.exhaustive,
            "magnitude_failures": [list(c) for c in self.magnitude_failures[:20]],
            "n_magnitude_failures": len(self.magnitude_failures),
            "r_T_failures": [list(c) for c in self.r_T_failures[:20]],
            "n_r_T_failures": len(self.r_T_failures),
            "r_T_worst_ratio": self.r_T_worst_ratio,
            "ok": self.ok,
        }


def verify_fourier_statements(T: KodairaSymbol, p: int, chis: np.ndarray | None = None, *, literal: bool = False,
                          r_T_limit: int | None = None, sample: int = 10_000, seed: int = 0,
                          chunk: int = 20_000) -> StatementCheck:
    """Compare exact transform magnitudes and translate counts against their stated values.

    All characters are used when N^3 is small, otherwise random characters plus
    random characters from the support classes.  ``r_T_limit`` caps how many of
    them get the (slower) translate count.
    """
    _check_T(T)
    N = n_p(T, p)
    exhaustive = chis is None and N**3 <= EXHAUSTIVE_LIMIT
    if chis is None:
        chis = _characters(T, p, sample, seed)
    chis = np.asarray(chis, dtype=np.int64).reshape(-1, 3)
    phi = phi0_indicator(T, p)
    mag_fail: list[tuple[int, int, int]] = []
    for start in range(0, len(chis), chunk):
        block = chis[start:start + chunk]
        table = fourier_table(phi, block)
        zero = _rows_vanish(table, p)
        for row, chi_t, z in zip(table, block, zero):
            chi = CharacterTriple(*map(int, chi_t), N)
            expected = stated_fourier_magnitude(T, p, chi)
            if expected == 0:
                good = bool(z)
            else:
                good = not z and CyclotomicInteger(N, list(row)).abs_equals(expected)
            if not good:
                mag_fail.append(chi.triple)
    r_fail: list[tuple[int, int, int]] = []
    worst = None
    for chi_t in chis[: r_T_limit or len(chis)]:
        chi = CharacterTriple(*map(int, chi_t), N)
        r = r_T_count(T, p, chi)
        if T.family in ("III", "IV"):
            kind, v = r_T_statement(T, p, chi, literal)
            if (kind == "exact" and r != v) or (kind == "at_most" and r > v):
                r_fail.append(chi.triple)
            continue
        exps = r_T_reference_exponents(T, p, chi)
        if not exps:
            if r:
                r_fail.append(chi.triple)
            continue
        ratio = r / p ** min(exps)
        worst = ratio if worst is None else max(worst, ratio)
        if ratio > R_T_CONSTANT:
            r_fail.append(chi.triple)
    return StatementCheck(str(T), p, len(chis), exhaustive, mag_fail, r_fail, worst)



# ---------------------------------------------------------------------------
# splitting types


@dataclass(frozen=True)
class SplittingType:
    """Symbols III, IV or I_n (n >= 2) prescribed at finitely many primes p >= 5."""

    entries: tuple[tuple[int, KodairaSymbol], ...]

    def __post_init__(self):
        primes = [p for p, _ in self.entries]
        if len(set(primes)) != len(primes):
            raise ValueError("each prime may appear once")
        for p, T in self.entries:
            if p < 5:
                raise ValueError("primes must be >= 5")
            _check_T(T)

    @classmethod
    def parse(cls, text: str) -> "SplittingType":
        """'5:III,7:I2' style."""
        if not text.strip():
            return cls(())
        out = []
        for item in text.split(","):
            p, T = item.split(":")
            out.append((int(p), KodairaSymbol.parse(T)))
        return cls(tuple(out))

    def _prod(self, pred: Callable[[KodairaSymbol], bool]) -> int:
        return math.prod(p for p, T in self.entries if pred(T))

    @property
    def Q_Sigma(self) -> int:
        return math.prod(p ** (1 if T.family in ("III", "IV") else T.n // 2) for p, T in self.entries)

    @property
    def m_III(self) -> int:
        return self._prod(lambda T: T.family == "III")

    @property
    def m_IV(self) -> int:
        return self._prod(lambda T: T.family == "IV")

    @property
    def m_even(self) -> int:
        return self._prod(lambda T: T.family == "I" and T.n % 2 == 0)

    @property
    def m_odd(self) -> int:
        return self._prod(lambda T: T.family == "I" and T.n % 2 == 1)

    @property
    def nu_Sigma(self) -> Fraction:
        return math.prod((closed_form_symbol_density(T, p) for p, T in self.entries), start=Fraction(1))

    def main_term(self, Y) -> Fraction:
        """Y / (Q^2 m_III m_IV^2 m_odd)."""
        return Fraction(Y) / (self.Q_Sigma**2 * self.m_III * self.m_IV**2 * self.m_odd)


def _allowed_c(p: int, T: KodairaSymbol, m: int) -> dict[tuple[int, int], list[int]]:
    """For each (a, b) mod p^m, the residues c mod p^m where every lift has type T.

    Requires m >= m_min(T), where every class of type T is already determined;
    undetermined classes are therefore not of type T.
    """
    N = p**m
    inv3, inv27 = pow(3, -1, N), pow(27, -1, N)
    b_sets = {}
    for A in range(N):
        bs = [B for B in range(N) if truncated_symbol(A, m, B, m, p) == T]
        if bs:
            b_sets[A] = bs
    out: dict[tuple[int, int], list[int]] = {}
    for a in range(N):
        for b in range(N):
            A = (b - a * a * inv3) % N
            if A not in b_sets:
                continue
            base = (-a * b * inv3 + 2 * a**3 * inv27) % N
            out[(a, b)] = sorted((B - base) % N for B in b_sets[A])
    return out


def _floor_count(lo: int, hi: int, r: int, L: int) -> int:
    """#{x in [lo, hi] : x = r mod L}."""
    if hi < lo:
        return 0
    return (hi - r) // L - (lo - 1 - r) // L


def _max_abs_below(Y: Fraction, k: int, inclusive: bool) -> int:
    """Largest x >= 0 with x^k < Y (or <= Y), or -1 if none."""
    x = int(float(Y) ** (1 / k)) + 2 if Y > 0 else 0
    while x >= 0 and (Fraction(x) ** k > Y if inclusive else Fraction(x) ** k >= Y):
        x -= 1
    return x


def count_splitting_type(sigma_type: SplittingType, Y, budget: int = 10**7, inclusive: bool = False) -> int:
    """#{f in U(Z) with splitting type Sigma : max(|a|^6, |b|^3, |c|^2) < Y}.

    ``inclusive`` counts H <= Y instead.
    """
    Y = Fraction(Y)
    if Y > 10**12:
        raise BudgetExceeded("Y above 10^12")
    A, B, C = (_max_abs_below(Y, k, inclusive) for k in (6, 3, 2))
    if min(A, B, C) < 0:
        return 0
    if not sigma_type.entries:
        return (2 * A + 1) * (2 * B + 1) * (2 * C + 1)
    tables = []
    L = 1
    for p, T in sigma_type.entries:
        m = m_min(T)
        tables.append((p**m, _allowed_c(p, T, m)))
        L *= p**m
    if L * L > budget:
        raise BudgetExceeded("congruence modulus too large")
    c_count = [_floor_count(-C, C, r, L) for r in range(L)]
    crt = [(Lp, (L // Lp) * pow(L // Lp, -1, Lp)) for Lp, _ in tables]
    a_count = [_floor_count(-A, A, r, L) for r in range(L)]
    b_count = [_floor_count(-B, B, r, L) for r in range(L)]
    total = 0
    for a in range(L):
        if not a_count[a]:
            continue
        for b in range(L):
            if not b_count[b]:
                continue
            lists = []
            for (Lp, tab), _ in zip(tables, crt):
                cs = tab.get((a % Lp, b % Lp))
                if not cs:
                    break
                lists.append(cs)
            else:
                w = 0
                for combo in itertools.product(*lists):
                    r = sum(c * e for c, (_, e) in zip(combo, crt)) % L
                    w += c_count[r]
                total += a_count[a] * b_count[b] * w
    return total
