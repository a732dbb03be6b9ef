"""Binary quartic forms, rooted reducible quartics and the embedding of cubics.

A form ``a x^4 + b x^3 y + c x^2 y^2 + d x y^3 + e y^4`` is stored by its
coefficient tuple.  Matrices act on the right: ``(gamma . g)(x, y) =
g((x, y) gamma) / det(gamma)^2`` and a root ``[alpha : beta]`` moves to
``[alpha : beta] gamma^-1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

from .cubic_rings import BinaryCubicForm, delone_faddeev_form, disc_binary_cubic, q_and_d
from .local_classification import MonicCubic

__all__ = [
    "BinaryQuarticForm",
    "RootedQuartic",
    "UnimodularMatrix",
    "invariants_IJ",
    "disc_quartic",
    "cubic_IJ",
    "pgl2_act",
    "q_d_rooted",
    "embed_sigma",
    "lattice_basis",
    "tuple_to_form",
    "tuple_invariants",
    "disc3",
    "t_alpha_beta",
]


def _mul(p: Sequence[int], q: Sequence[int]) -> list[int]:
    out = [0] * (len(p) + len(q) - 1)
    for i, x in enumerate(p):
        if x:
            for j, y in enumerate(q):
                out[i + j] += x * y
    return out


def _substitute(coeffs: Sequence[int], m: tuple[tuple[int, int], tuple[int, int]]) -> list[int]:
    """Coefficients of F((x, y) m), where coeffs[i] multiplies x^(d-i) y^i."""
    d = len(coeffs) - 1
    (m00, m01), (m10, m11) = m
    X = [m00, m10]  # x -> m00 x + m10 y
    Y = [m01, m11]  # y -> m01 x + m11 y
    out = [0] * (d + 1)
    for i, c in enumerate(coeffs):
        if not c:
            continue
        term = [c]
        for _ in range(d - i):
            term = _mul(term, X)
        for _ in range(i):
            term = _mul(term, Y)
        for k, v in enumerate(term):
            out[k] += v
    return out


@dataclass(frozen=True)
class BinaryQuarticForm:
    a: int
    b: int
    c: int
    d: int
    e: int

    @classmethod
    def from_coeffs(cls, coeffs: Sequence[int]) -> "BinaryQuarticForm":
        if len(coeffs) != 5:
            raise ValueError("a binary quartic has five coefficients")
        return cls(*(int(x) for x in coeffs))

    @property
    def coeffs(self) -> tuple[int, int, int, int, int]:
        return (self.a, self.b, self.c, self.d, self.e)

    def __call__(self, x: int, y: int) -> int:
        a, b, c, d, e = self.coeffs
        return a * x**4 + b * x**3 * y + c * x * x * y * y + d * x * y**3 + e * y**4

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    @property
    def invariants(self) -> tuple[int, int]:
        return invariants_IJ(self)

    @property
    def discriminant(self) -> int:
        return disc_quartic(self)

    def __str__(self) -> str:
        return ",".join(map(str, self.coeffs))


@dataclass(frozen=True)
class UnimodularMatrix:
    m00: int
    m01: int
    m10: int
    m11: int

    def __post_init__(self):
        if abs(self.det) != 1:
            raise ValueError(f"determinant {self.det} is not +-1")

    @property
    def det(self) -> int:
        return self.m00 * self.m11 - self.m01 * self.m10

    @property
    def rows(self) -> tuple[tuple[int, int], tuple[int, int]]:
        return ((self.m00, self.m01), (self.m10, self.m11))

    def inverse(self) -> "UnimodularMatrix":
        s = self.det  # 1/det == det for det = +-1
        return UnimodularMatrix(s * self.m11, -s * self.m01, -s * self.m10, s * self.m00)

    def __matmul__(self, other: "UnimodularMatrix") -> "UnimodularMatrix":
        (a, b), (c, d) = self.rows
        (e, f), (g, h) = other.rows
        return UnimodularMatrix(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)

    @classmethod
    def identity(cls) -> "UnimodularMatrix":
        return cls(1, 0, 0, 1)


@dataclass(frozen=True)
class RootedQuartic:
    g: BinaryQuarticForm
    root: tuple[int, int]

    def __post_init__(self):
        alpha, beta = self.root
        if gcd(alpha, beta) != 1:
            raise ValueError(f"root {self.root} is not primitive")
        if self.g.is_zero():
            raise ValueError("the zero form has no distinguished root")
        if self.g(alpha, beta) != 0:
            raise ValueError(f"{self.root} is not a root of {self.g}")

    def normalized(self) -> "RootedQuartic":
        """Same point of P^1 with the sign chosen so the first nonzero coordinate is positive."""
        alpha, beta = self.root
        if alpha < 0 or (alpha == 0 and beta < 0):
            return RootedQuartic(self.g, (-alpha, -beta))
        return self


def invariants_IJ(g: BinaryQuarticForm) -> tuple[int, int]:
    a, b, c, d, e = g.coeffs
    I = 12 * a * e - 3 * b * d + c * c
    J = 72 * a * c * e + 9 * b * c * d - 27 * a * d * d - 27 * e * b * b - 2 * c**3
    return I, J


def disc_quartic(g: BinaryQuarticForm) -> int:
    I, J = invariants_IJ(g)
    num = 4 * I**3 - J * J
    if num % 27:
        raise AssertionError(f"4I^3 - J^2 = {num} is not divisible by 27")
    return num // 27


def cubic_IJ(f: MonicCubic) -> tuple[int, int]:
    """(I, J) = (-3A, -27B) for the traceless model x^3 + A x + B of f."""
    A, B = f.traceless()
    I, J = -3 * Fraction(A), -27 * Fraction(B)
    if I.denominator != 1 or J.denominator != 1:
        raise ValueError(f"{f} does not have integral I, J")
    return int(I), int(J)


def pgl2_act(gamma: UnimodularMatrix, rq: RootedQuartic) -> RootedQuartic:
    coeffs = _substitute(rq.g.coeffs, gamma.rows)  # det^2 = 1
    alpha, beta = rq.root
    inv = gamma.inverse()
    root = (alpha * inv.m00 + beta * inv.m10, alpha * inv.m01 + beta * inv.m11)
    return RootedQuartic(BinaryQuarticForm.from_coeffs(coeffs), root)


def _divide_by_root(g: BinaryQuarticForm, root: tuple[int, int]) -> BinaryCubicForm:
    """h with g = (beta x - alpha y) h."""
    alpha, beta = root
    g0, g1, g2, g3, g4 = g.coeffs
    h = [0, 0, 0, 0]
    if beta:
        rhs = [g0, g1, g2, g3]
        prev = 0
        for i in range(4):
            num = rhs[i] + alpha * prev
            if num % beta:
                raise ValueError(f"{root} is not a root of {g}")
            h[i] = prev = num // beta
        if -alpha * h[3] != g4:
            raise ValueError(f"{root} is not a root of {g}")
    else:
        # beta = 0 forces alpha = +-1 and g = -alpha y h
        if abs(alpha) != 1 or g0 != 0:
            raise ValueError(f"{root} is not a root of {g}")
        h = [-alpha * x for x in (g1, g2, g3, g4)]
    return BinaryCubicForm(*h)


def q_d_rooted(rq: RootedQuartic) -> tuple[int, int]:
    """(Q, D) = (h(alpha, beta), disc h) with h = g / (beta x - alpha y)."""
    h = _divide_by_root(rq.g, rq.root)
    alpha, beta = rq.root
    return h(alpha, beta), disc_binary_cubic(h)


def embed_sigma(f: MonicCubic, Q_f: int | None = None) -> RootedQuartic:
    """(y h(x, y), [1 : 0]) where h = n x^3 + a x^2 y + b x y^2 + c y^3 comes from a translate
    f(x + r) = x^3 + a x^2 + b n x + c n^2 with 0 <= r < n = Q_f."""
    if Q_f is None:
        Q_f = q_and_d(f).q_index
    h = delone_faddeev_form(f, Q_f)
    return RootedQuartic(BinaryQuarticForm(0, *h.coeffs), (1, 0))


def lattice_basis(alpha: int, beta: int) -> list[tuple[int, int, int, int, int]]:
    """Integral basis w_1..w_4 of the forms vanishing at (alpha, beta)."""
    if gcd(alpha, beta) != 1:
        raise ValueError(f"({alpha}, {beta}) is not primitive")
    out = []
    for i in range(4):
        w = [0] * 5
        w[i], w[i + 1] = beta, -alpha
        out.append(tuple(w))
    return out


def tuple_to_form(alpha: int, beta: int, a1: int, a2: int, a3: int, a4: int) -> RootedQuartic:
    coeffs = [0] * 5
    for a, w in zip((a1, a2, a3, a4), lattice_basis(alpha, beta)):
        for k in range(5):
            coeffs[k] += a * w[k]
    return RootedQuartic(BinaryQuarticForm.from_coeffs(coeffs), (alpha, beta))


def disc3(a1: int, a2: int, a3: int, a4: int) -> int:
    return disc_binary_cubic(BinaryCubicForm(a1, a2, a3, a4))


def tuple_invariants(alpha: int, beta: int, a1: int, a2: int, a3: int, a4: int) -> tuple[int, int]:
    """(Q, D) of the rooted form with tuple coordinates (a1..a4), by the closed formulas."""
    Q = a1 * alpha**3 + a2 * alpha**2 * beta + a3 * alpha * beta**2 + a4 * beta**3
    return Q, disc3(a1, a2, a3, a4)


def t_alpha_beta(alpha: int, beta: int, a1: int, a2: int, a3: int) -> int:
    b3 = beta**3
    return disc3(a1 * b3, a2 * b3, a3 * b3, -(a1 * alpha**3 + a2 * alpha**2 * beta + a3 * alpha * beta**2))
