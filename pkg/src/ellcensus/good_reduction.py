"""Congruence conditions for good reduction at 2 and 3.

Short Weierstrass pairs (A, B) whose curve has good reduction at 2 (resp. 3)
fall into finitely many residue classes.  Each row records the classes, the
exponent of the prime in Delta(A, B) for that row, and the row's density.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

__all__ = ["CongruenceRow", "ROWS_AT_2", "ROWS_AT_3", "row_at_2", "row_at_3"]


@dataclass(frozen=True)
class CongruenceRow:
    """One row: ``(A mod a_mod, B mod b_mod)`` lies in ``classes``.

    ``exclude`` lists (modulus, residue) pairs for A that must *not* hold,
    used for the exact-valuation condition ``3^4 || A``.
    """

    label: str
    a_mod: int
    b_mod: int
    classes: tuple[tuple[int, int], ...]
    delta_exp: int
    density: Fraction
    a_exclude: tuple[tuple[int, int], ...] = ()

    def matches(self, A: int, B: int) -> bool:
        if any(A % m == r for m, r in self.a_exclude):
            return False
        return (A % self.a_mod, B % self.b_mod) in self._class_set

    @property
    def _class_set(self) -> frozenset[tuple[int, int]]:
        return frozenset(self.classes)

    def class_density(self) -> Fraction:
        """Density computed from the residue classes themselves."""
        total = Fraction(0)
        for a, _ in self.classes:
            share = Fraction(1, self.a_mod)
            for m, r in self.a_exclude:
                if a % self.a_mod == r % self.a_mod:
                    share -= Fraction(1, m)
            total += share / self.b_mod
        return total


def _rows_at_2() -> tuple[CongruenceRow, ...]:
    rows = [
        CongruenceRow(
            "A=0 (16), B=16 (64)", 16, 64, ((0, 16),), 8, Fraction(1, 2**10)
        )
    ]
    pairs = [(5, 22), (13, 14), (21, 38), (29, 94), (37, 54), (45, 46), (53, 70), (61, 126)]
    for r, s in pairs:
        classes = tuple(((r + 64 * d) % 128, (s + 64 * d) % 128) for d in (0, 1))
        rows.append(
            CongruenceRow(f"A={r}+64d, B={s}+64d (128)", 128, 128, classes, 8, Fraction(1, 2**13))
        )
    return tuple(rows)


def _rows_at_3() -> tuple[CongruenceRow, ...]:
    rows = [
        CongruenceRow("3 does not divide A", 3, 1, ((1, 0), (2, 0)), 0, Fraction(2, 3)),
        CongruenceRow(
            "3^4 || A, 3^6 | B",
            81,
            729,
            ((0, 0),),
            12,
            Fraction(2, 3**11),
            a_exclude=((243, 0),),
        ),
    ]
    data = [
        (2, 20, 34), (5, 11, 16), (8, 2, 29), (11, 7, 20), (14, 16, 38),
        (17, 2, 25), (20, 7, 34), (23, 11, 38), (26, 25, 29),
    ]
    for k, u, v in data:
        a = k * 27 % 3**6
        bs = sorted({(sgn * w * 27) % 3**7 for w in (u, v) for sgn in (1, -1)})
        classes = tuple((a, b) for b in bs)
        rows.append(
            CongruenceRow(f"A={k}*27 (3^6), B=+-{u}*27,+-{v}*27 (3^7)", 3**6, 3**7, classes, 12,
                          Fraction(4, 3**13))
        )
    return tuple(rows)


ROWS_AT_2 = _rows_at_2()
ROWS_AT_3 = _rows_at_3()


def row_at_2(A: int, B: int) -> CongruenceRow | None:
    """The row of the 2-adic table containing (A, B), if any."""
    for row in ROWS_AT_2:
        if row.matches(A, B):
            return row
    return None


def row_at_3(A: int, B: int) -> CongruenceRow | None:
    for row in ROWS_AT_3:
        if row.matches(A, B):
            return row
    return None
