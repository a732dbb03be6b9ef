"""Exact p-adic densities of reduction types by residue-class counting.

For p >= 5 the map (a, b, c) -> (a, A, B), with A = b - a^2/3 and
B = c - ab/3 + 2a^3/27, is a bijection of (Z/p^m)^3, and the Kodaira symbol of
a lift depends on (A, B) only.  So the number of triples mod p^m of type T is
p^m times the number of pairs (A, B) mod p^m whose every lift has type T.

Pairs are counted by refining residue classes one digit at a time.  Each
class is labelled from what its digits force: a symbol, "not yet known", or
"large" (p^2 | A, p^3 | B), in which case the count continues on
(A/p^2, B/p^3) with the twisted target.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

from .arithmetic import BudgetExceeded
from .local_classification import KodairaSymbol, local_exponents, sigma

__all__ = [
    "BudgetExceeded",
    "DensityReport",
    "IndexDensityReport",
    "NONMINIMAL",
    "UndeterminedResidues",
    "count_index_density",
    "count_pairs",
    "count_symbol_density",
    "index_exponent",
    "m_min",
    "symbols_with_index",
    "closed_form_symbol_density",
    "closed_form_index_density",
    "truncated_symbol",
]

NONMINIMAL = "nonminimal"
Target = Union[KodairaSymbol, str]

DEFAULT_NODE_BUDGET = 5_000_000


class UndeterminedResidues(RuntimeError):
    """Some residue classes at the requested modulus do not determine the symbol."""


# ---------------------------------------------------------------------------
# closed forms


def closed_form_symbol_density(T: KodairaSymbol, p: int) -> Fraction:
    """Density of monic cubics over Z_p with symbol T."""
    q = Fraction(p)
    fam, n = T.family, T.n
    if fam == "I":
        return (q - 1) / q if n == 0 else (q - 1) ** 2 / q ** (n + 2)
    if fam == "I*":
        return (q - 1) / q**6 if n == 0 else (q - 1) ** 2 / q ** (n + 7)
    exp = {"II": 3, "III": 4, "IV": 5, "IV*": 8, "III*": 9, "II*": 10}[fam]
    return (q - 1) / q**exp


def index_exponent(T: KodairaSymbol) -> int:
    c, delta, _, _ = local_exponents(T)
    return delta - c


def symbols_with_index(k: int) -> list[KodairaSymbol]:
    """All symbols with v_p(index) = k."""
    out = []
    if k == 0:
        out += [KodairaSymbol("I", 0), KodairaSymbol("I", 1)]
    if k >= 1:
        out.append(KodairaSymbol("I", k + 1))
    for fam in ("II", "III", "IV", "IV*", "III*", "II*"):
        if index_exponent(KodairaSymbol(fam)) == k:
            out.append(KodairaSymbol(fam))
    if k == 4:
        out.append(KodairaSymbol("I*", 0))
    if k >= 5:
        out.append(KodairaSymbol("I*", k - 4))
    return out


def closed_form_index_density(k: int, p: int) -> dict[str, Fraction]:
    """Densities with v_p(index) = k split by reduction type, as tabulated."""
    q = Fraction(p)
    good = (q - 1) / q if k == 0 else Fraction(0)
    mult = (q - 1) ** 2 / q ** (k + 3)
    if k == 0:
        add = (q - 1) / q**3
    elif k in (1, 2):
        add = (q - 1) / q ** (k + 3)
    elif k == 3:
        add = Fraction(0)
    elif k == 4:
        add = (q - 1) / q**6
    elif k in (6, 7, 8):
        add = (2 * q - 1) * (q - 1) / q ** (k + 3)
    else:
        add = (q - 1) ** 2 / q ** (k + 3)
    return {"good": good, "multiplicative": mult, "additive": add, "total": good + mult + add}


def m_min(T: KodairaSymbol) -> int:
    """Starting modulus exponent; sufficiency is checked at run time."""
    fam, n = T.family, T.n
    if fam == "I":
        return 2 if n == 0 else n + 1
    if fam in ("II", "III", "IV"):
        return 3
    if fam == "I*":
        return 4 if n == 0 else n + 4
    return 6


# ---------------------------------------------------------------------------
# truncated classification of residue classes


def _vres(x: int, k: int, p: int) -> int | None:
    """Valuation of a residue mod p^k, or None when x = 0 mod p^k."""
    if k == 0 or x % p**k == 0:
        return None
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


_I0 = KodairaSymbol("I", 0)
_LARGE = "large"
_OPEN = "open"  # nothing excluded
_OPEN_NOT_I = "open-not-I"  # A = 0 mod p: no I_n with n >= 1


def _status(A0: int, i: int, B0: int, j: int, p: int):
    """What the digits of (A mod p^i, B mod p^j) force about the symbol.

    Returns a KodairaSymbol, ("I>=", k) for unit A with Delta = 0 mod p^k,
    _LARGE, _OPEN or _OPEN_NOT_I.
    """
    vA, vB = _vres(A0, i, p), _vres(B0, j, p)
    k = min(i, j)
    vD = _vres(-4 * A0**3 - 27 * B0**2, k, p)
    if vD == 0:
        return _I0
    if vA == 0:
        return KodairaSymbol("I", vD) if vD is not None else ("I>=", k)
    if i == 0:
        return _OPEN
    if vB == 0:
        return _I0
    if vB == 1:
        return KodairaSymbol("II")
    if vB is None and j < 2:
        return _OPEN_NOT_I
    if vA == 1:
        return KodairaSymbol("III")
    if vA is None and i < 2:
        return _OPEN_NOT_I
    if vB == 2:
        return KodairaSymbol("IV")
    if vB is None and j < 3:
        return _OPEN_NOT_I
    return _LARGE


def truncated_symbol(A0: int, i: int, B0: int, j: int, p: int, _twisted: bool = False) -> Target | None:
    """The symbol shared by all lifts of (A mod p^i, B mod p^j), if determined."""
    st = _status(A0 % p**i, i, B0 % p**j, j, p)
    if isinstance(st, KodairaSymbol):
        return sigma(st) if _twisted else st
    if st == _LARGE:
        if _twisted:
            return NONMINIMAL
        return truncated_symbol(A0 // p**2, i - 2, B0 // p**3, j - 3, p, True)
    return None


def _is_large_type(T: Target) -> bool:
    return isinstance(T, KodairaSymbol) and T.is_starred


def _may_equal(v: int | None, lo: int, k: int) -> bool:
    return v == k if v is not None else k >= lo


def _may_contain(st, T: Target, A0: int, i: int, B0: int, j: int, p: int) -> bool:
    """Whether a class with undecided status ``st`` can contain type T."""
    if isinstance(st, tuple):  # unit A, Delta = 0 mod p^k
        return T != NONMINIMAL and T.family == "I" and T.n >= st[1]
    if st == _OPEN:
        return True
    # p | A; bound the possible valuations of A and B
    vA, vB = _vres(A0, i, p), _vres(B0, j, p)
    a_ge2 = vA is None or vA >= 2
    b_ge3 = vB is None or vB >= 3
    if T == NONMINIMAL or _is_large_type(T):
        return a_ge2 and b_ge3
    fam = T.family
    if fam == "I":
        return T.n == 0 and _may_equal(vB, j, 0)
    if fam == "II":
        return _may_equal(vB, j, 1)
    if fam == "III":
        return _may_equal(vA, i, 1) and (vB is None or vB >= 2)
    if fam == "IV":
        return a_ge2 and _may_equal(vB, j, 2)
    raise AssertionError(fam)


@dataclass
class _Counter:
    p: int
    budget: int
    nodes: int = 0
    undetermined: int = 0

    def count(self, T: Target, capA: int, capB: int, root=(0, 0, 0, 0), large_depth: int = 0) -> int:
        """Pairs mod (p^capA, p^capB) below ``root`` whose type is T."""
        p = self.p
        fav = 0
        stack = [root]
        while stack:
            A0, i, B0, j = stack.pop()
            self.nodes += 1
            if self.nodes > self.budget:
                raise BudgetExceeded(f"more than {self.budget} residue classes visited")
            st = _status(A0, i, B0, j, p)
            weight = p ** ((capA - i) + (capB - j))
            if isinstance(st, KodairaSymbol):
                if st == T:
                    fav += weight
                continue
            if st == _LARGE:
                if large_depth == 1:
                    if T == NONMINIMAL:
                        fav += weight
                    continue
                if T == NONMINIMAL:
                    inner = NONMINIMAL
                elif _is_large_type(T):
                    inner = sigma(T)
                else:
                    continue
                sub = (A0 // p**2, i - 2, B0 // p**3, j - 3)
                fav += self.count(inner, capA - 2, capB - 3, sub, large_depth + 1)
                continue
            if not _may_contain(st, T, A0, i, B0, j, p):
                continue
            if i == capA and j == capB:
                self.undetermined += 1
                continue
            if i < capA and (i <= j or j == capB):
                step = p**i
                stack.extend((A0 + d * step, i + 1, B0, j) for d in range(p))
            else:
                step = p**j
                stack.extend((A0, i, B0 + d * step, j + 1) for d in range(p))
        return fav


def count_pairs(T: Target, p: int, m: int, budget: int = DEFAULT_NODE_BUDGET) -> tuple[int, int]:
    """(favorable, undetermined) counts of pairs (A, B) mod p^m of type T."""
    if p < 5:
        raise ValueError("densities are implemented for p >= 5")
    c = _Counter(p, budget)
    fav = c.count(T, m, m)
    return fav, c.undetermined


# ---------------------------------------------------------------------------
# reports


@dataclass(frozen=True)
class DensityReport:
    p: int
    target: str
    m: int
    favorable: int
    total: int
    density: Fraction
    expected: Fraction | None
    match: bool | None

    def as_dict(self) -> dict:
        return {
            "p": self.p,
            "target": self.target,
            "m": self.m,
            "favorable": self.favorable,
            "total": self.total,
            "density": str(self.density),
            "expected": None if self.expected is None else str(self.expected),
            "match": self.match,
        }


def count_symbol_density(
    p: int, T: Target, m: int | None = None, budget: int = DEFAULT_NODE_BUDGET
) -> DensityReport:
    """Exact density of triples (a, b, c) mod p^m whose lifts all have type T.

    Raises UndeterminedResidues when some classes mod p^m could still have
    type T or not depending on the lift.
    """
    if isinstance(T, str) and T != NONMINIMAL:
        T = KodairaSymbol.parse(T)
    if m is None:
        m = m_min(T) if T != NONMINIMAL else 6
    fav_pairs, undetermined = count_pairs(T, p, m, budget)
    if undetermined:
        raise UndeterminedResidues(f"{undetermined} classes mod {p}^{m} undetermined for {T}")
    favorable = fav_pairs * p**m
    total = p ** (3 * m)
    density = Fraction(favorable, total)
    if T == NONMINIMAL:
        expected = Fraction(1, p**10)
    else:
        expected = closed_form_symbol_density(T, p)
    return DensityReport(p, str(T), m, favorable, total, density, expected, density == expected)


@dataclass(frozen=True)
class IndexDensityReport:
    p: int
    k: int
    m: int
    by_symbol: dict[str, Fraction]
    split: dict[str, Fraction]
    expected: dict[str, Fraction]
    match: bool = field(default=False)

    def as_dict(self) -> dict:
        return {
            "p": self.p,
            "k": self.k,
            "m": self.m,
            "by_symbol": {s: str(v) for s, v in self.by_symbol.items()},
            "split": {s: str(v) for s, v in self.split.items()},
            "expected": {s: str(v) for s, v in self.expected.items()},
            "match": self.match,
        }


def count_index_density(p: int, k: int, m: int | None = None) -> IndexDensityReport:
    """Density of v_p(index) = k, split into good, multiplicative and additive.

    Each symbol is counted at max(m, m_min(symbol)).
    """
    by_symbol: dict[str, Fraction] = {}
    split = {"good": Fraction(0), "multiplicative": Fraction(0), "additive": Fraction(0)}
    used = 0
    for T in symbols_with_index(k):
        mm = max(m or 0, m_min(T))
        used = max(used, mm)
        rep = count_symbol_density(p, T, mm)
        by_symbol[str(T)] = rep.density
        split[T.reduction] += rep.density
    split["total"] = sum(split.values(), Fraction(0))
    expected = closed_form_index_density(k, p)
    return IndexDensityReport(p, k, used, by_symbol, split, expected, split == expected)
