"""Cubic rings attached to monic cubics and binary cubic forms.

The ring of a binary cubic form F = (a, b, c, d) has Z-basis 1, w, t with
w = a*xi and t = a*xi^2 + b*xi for a root xi of F(x, 1); a monic cubic f
corresponds to (1, a, b, c).  The index Q(f) of Z[x]/(f) in the maximal order
is found by saturation on forms: at p the ring is not maximal iff p divides
the form or some GL2(Z)-translate has p^2 | a and p | b, and in that case
(a/p^2, b/p, c, p*d) is an overring of index p.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import flint

from .arithmetic import DEFAULT_PRECISION, IntervalReal, _prec, factorize
from .local_classification import MonicCubic

__all__ = [
    "BinaryCubicForm",
    "CubicRingInvariants",
    "DegenerateCubicError",
    "Shape",
    "count_traceless_primitive",
    "delone_faddeev_form",
    "disc_binary_cubic",
    "disc_monic_cubic",
    "is_p_maximal",
    "maximal_order_form",
    "q_and_d",
    "shape",
    "traceless_normalize",
]


class DegenerateCubicError(ValueError):
    """The cubic or form has discriminant zero."""


Matrix = tuple[tuple[int, int], tuple[int, int]]


@dataclass(frozen=True)
class BinaryCubicForm:
    """a x^3 + b x^2 y + c x y^2 + d y^3."""

    a: int
    b: int
    c: int
    d: int

    @classmethod
    def from_monic(cls, f: MonicCubic) -> "BinaryCubicForm":
        _require_integral(f)
        return cls(1, int(f.a), int(f.b), int(f.c))

    @property
    def coeffs(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    @property
    def discriminant(self) -> int:
        return disc_binary_cubic(self)

    @property
    def content(self) -> int:
        return math.gcd(*self.coeffs)

    def __call__(self, x: int, y: int) -> int:
        return self.a * x**3 + self.b * x * x * y + self.c * x * y * y + self.d * y**3

    def transform(self, m: Matrix) -> "BinaryCubicForm":
        """F((x, y) m), i.e. F(m00 x + m10 y, m01 x + m11 y)."""
        (p, q), (r, s) = m
        # linear forms u = p x + r y, v = q x + s y as coefficient pairs (x, y)
        out = [0, 0, 0, 0]
        for k, coef in enumerate(self.coeffs):
            if coef == 0:
                continue
            # coef * u^(3-k) * v^k
            poly = [coef]
            for _ in range(3 - k):
                poly = _mul_binary(poly, (p, r))
            for _ in range(k):
                poly = _mul_binary(poly, (q, s))
            for i, v in enumerate(poly):
                out[i] += v
        return BinaryCubicForm(*out)


def _mul_binary(poly: Sequence[int], lin: tuple[int, int]) -> list[int]:
    """Multiply a form listed by descending x-power by (lin[0] x + lin[1] y)."""
    out = [0] * (len(poly) + 1)
    for i, v in enumerate(poly):
        out[i] += v * lin[0]
        out[i + 1] += v * lin[1]
    return out


def disc_binary_cubic(F: BinaryCubicForm) -> int:
    a, b, c, d = F.coeffs
    return b * b * c * c - 4 * a * c**3 - 4 * b**3 * d - 27 * a * a * d * d + 18 * a * b * c * d


def disc_monic_cubic(f: MonicCubic):
    return f.discriminant


def _require_integral(f: MonicCubic) -> None:
    if not f.is_integral:
        raise ValueError(f"integral coefficients required, got {f}")


def traceless_normalize(f: MonicCubic) -> tuple[Fraction | int, MonicCubic]:
    """(t, f(x + t)) with t = -a/3, so the result has no x^2 term.

    When 3 does not divide a the shift and the result carry exact thirds.
    """
    t = Fraction(-f.a) / 3
    t = int(t) if t.denominator == 1 else t
    return t, f.shift(t)


# ---------------------------------------------------------------------------
# polynomials over F_p, lowest degree first, no trailing zeros


def _trim(u: list[int]) -> list[int]:
    while u and u[-1] == 0:
        u.pop()
    return u


def _red(u: Sequence[int], p: int) -> list[int]:
    return _trim([c % p for c in u])


def _pmul(u: list[int], v: list[int], p: int) -> list[int]:
    if not u or not v:
        return []
    out = [0] * (len(u) + len(v) - 1)
    for i, x in enumerate(u):
        for j, y in enumerate(v):
            out[i + j] = (out[i + j] + x * y) % p
    return _trim(out)


def _pdivmod(u: list[int], v: list[int], p: int) -> tuple[list[int], list[int]]:
    u = list(u)
    inv = pow(v[-1], -1, p)
    q = [0] * max(len(u) - len(v) + 1, 0)
    while len(u) >= len(v) and u:
        k = len(u) - len(v)
        c = u[-1] * inv % p
        q[k] = c
        for i, x in enumerate(v):
            u[i + k] = (u[i + k] - c * x) % p
        _trim(u)
    return _trim(q), u


def _pgcd(u: list[int], v: list[int], p: int) -> list[int]:
    while v:
        u, v = v, _pdivmod(u, v, p)[1]
    if not u:
        return u
    inv = pow(u[-1], -1, p)
    return [c * inv % p for c in u]


def _ppowmod(base: list[int], e: int, mod: list[int], p: int) -> list[int]:
    result = [1]
    base = _pdivmod(base, mod, p)[1]
    while e:
        if e & 1:
            result = _pdivmod(_pmul(result, base, p), mod, p)[1]
        base = _pdivmod(_pmul(base, base, p), mod, p)[1]
        e >>= 1
    return result


def _psub(u: list[int], v: list[int], p: int) -> list[int]:
    n = max(len(u), len(v))
    u, v = u + [0] * (n - len(u)), v + [0] * (n - len(v))
    return _trim([(x - y) % p for x, y in zip(u, v)])


def _zmul(u: Sequence[int], v: Sequence[int]) -> list[int]:
    out = [0] * (len(u) + len(v) - 1)
    for i, x in enumerate(u):
        for j, y in enumerate(v):
            out[i + j] += x * y
    return out


def is_p_maximal(f: MonicCubic, p: int) -> bool:
    """Dedekind's criterion for Z[x]/(f) at p.

    With g the product of the distinct irreducible factors of f mod p and
    h = f / g mod p, Z[x]/(f) is p-maximal iff gcd(T, g, h) = 1 where
    T = (g h - f) / p computed from integer lifts.
    """
    _require_integral(f)
    if f.discriminant == 0:
        raise DegenerateCubicError(f"discriminant of {f} is zero")
    F = [int(f.c), int(f.b), int(f.a), 1]
    fbar = _red(F, p)
    dfbar = _red([F[1], 2 * F[2], 3], p)
    if len(_pgcd(fbar, dfbar, p)) <= 1:
        return True  # squarefree mod p
    # A cubic with a repeated factor mod p splits into linear factors, so the
    # radical is the product of the distinct roots, gcd(f, x^p - x).
    xp = _ppowmod([0, 1], p, fbar, p)
    g = _pgcd(fbar, _psub(xp, [0, 1], p), p)
    h, rem = _pdivmod(fbar, g, p)
    assert not rem
    gh = _zmul(g, h)
    T = [(x - y) // p for x, y in zip(gh, F)]
    assert all((x - y) % p == 0 for x, y in zip(gh, F))
    common = _pgcd(_pgcd(_red(T, p), g, p), h, p)
    return len(common) <= 1


# ---------------------------------------------------------------------------
# saturation


def _multiple_root(F: BinaryCubicForm, p: int) -> tuple[int, int] | None:
    """A root of multiplicity >= 2 of F mod p in P^1(F_p), as (x, y)."""
    a, b, c, d = (v % p for v in F.coeffs)
    if a == 0 and b == 0:
        return (1, 0)
    poly = _trim([d, c, b, a])  # F(x, 1)
    deriv = _red([c, 2 * b, 3 * a], p)
    if p < 1000:
        for r in range(p):
            v = ((a * r + b) * r + c) * r + d
            dv = (3 * a * r + 2 * b) * r + c
            if v % p == 0 and dv % p == 0:
                return (r, 1)
        return None
    g = _pgcd(poly, deriv, p)
    if len(g) == 2:
        return ((-g[0]) % p, 1)
    if len(g) == 3:  # (x - r)^2, p odd
        return ((-g[1]) * pow(2, -1, p) % p, 1)
    return None


def _root_to_infinity(root: tuple[int, int]) -> Matrix:
    """An SL2(Z) matrix m with (1, 0) m = root."""
    r, s = root
    if s == 0:
        return ((1, 0), (0, 1))
    # root (r, 1): m = [[r, 1], [-1, 0]]
    return ((r, 1), (-1, 0))


def _saturate_once(F: BinaryCubicForm, p: int) -> tuple[BinaryCubicForm, int] | None:
    """An overring of index p or p^2, or None when F is p-maximal."""
    if F.content % p == 0:
        return BinaryCubicForm(*(v // p for v in F.coeffs)), 2
    root = _multiple_root(F, p)
    if root is None:
        return None
    G = F.transform(_root_to_infinity(root))
    if G.a % (p * p) or G.b % p:
        return None
    return BinaryCubicForm(G.a // (p * p), G.b // p, G.c, G.d * p), 1


def _saturate(F: BinaryCubicForm, primes) -> tuple[BinaryCubicForm, int]:
    q = 1
    for p in primes:
        while True:
            step = _saturate_once(F, p)
            if step is None:
                break
            F, k = step
            q *= p**k
    return F, q


def _candidate_primes(disc: int) -> list[int]:
    return [p for p, e in factorize(disc) if e >= 2]


@dataclass(frozen=True)
class CubicRingInvariants:
    disc_order: int
    q_index: int
    disc_field: int

    def as_dict(self) -> dict:
        return {"disc_order": self.disc_order, "q_index": self.q_index, "disc_field": self.disc_field}


def _saturated(f: MonicCubic) -> tuple[BinaryCubicForm, int]:
    _require_integral(f)
    disc = f.discriminant
    if disc == 0:
        raise DegenerateCubicError(f"discriminant of {f} is zero")
    return _saturate(BinaryCubicForm.from_monic(f), _candidate_primes(disc))


def q_and_d(f: MonicCubic) -> CubicRingInvariants:
    """Index Q of Z[x]/(f) in the maximal order, and the discriminant D of the algebra."""
    F, q = _saturated(f)
    disc = f.discriminant
    D = disc // (q * q)
    if D * q * q != disc or disc_binary_cubic(F) != D:
        raise AssertionError("saturation broke the discriminant identity")
    return CubicRingInvariants(disc, q, D)


def maximal_order_form(f: MonicCubic) -> BinaryCubicForm:
    """A binary cubic form whose ring is the maximal order of Q[x]/(f)."""
    return _saturated(f)[0]


def delone_faddeev_form(f: MonicCubic, n: int) -> BinaryCubicForm:
    """The form n x^3 + a x^2 y + b x y^2 + c y^3 for a translate
    f(x + r) = x^3 + a x^2 + b n x + c n^2 with 0 <= r < n.

    Its ring contains Z[x]/(f) with index n.  Raises ValueError when no
    translate has the required divisibility.
    """
    _require_integral(f)
    if n < 1:
        raise ValueError("n must be positive")
    for r in range(n):
        g = f.shift(r)
        if g.b % n == 0 and g.c % (n * n) == 0:
            return BinaryCubicForm(n, int(g.a), int(g.b) // n, int(g.c) // (n * n))
    raise ValueError(f"no translate of {f} has the index-{n} pattern")


# ---------------------------------------------------------------------------
# shape of the traceless lattice


@dataclass(frozen=True)
class Shape:
    """Successive minima of the trace-zero sublattice of the maximal order.

    The length is |alpha|^2 = sum over the three complex embeddings of
    |sigma(alpha)|^2.  ``basis`` holds a reduced basis in coordinates of the
    form basis (1, w, t).
    """

    l1: IntervalReal
    l2: IntervalReal
    basis: tuple[tuple[int, int, int], tuple[int, int, int]]
    gram: tuple[tuple[IntervalReal, IntervalReal], tuple[IntervalReal, IntervalReal]]

    @property
    def skewness(self) -> IntervalReal:
        return self.l2 / self.l1

    @property
    def covolume(self) -> IntervalReal:
        (g11, g12), (_, g22) = self.gram
        return (g11 * g22 - g12 * g12).sqrt()


def _kernel_basis(row: Sequence[int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Z-basis of {n in Z^3 : row . n = 0} by unimodular column reduction."""
    cols = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    vals = list(row)
    # Euclid on the entries, mirroring column operations
    while sum(1 for v in vals if v) > 1:
        nz = [i for i, v in enumerate(vals) if v]
        i = min(nz, key=lambda k: abs(vals[k]))
        for j in nz:
            if j != i:
                q = vals[j] // vals[i]
                vals[j] -= q * vals[i]
                cols[j] = [x - q * y for x, y in zip(cols[j], cols[i])]
    return tuple(tuple(cols[k]) for k in range(3) if vals[k] == 0)


def _embeddings(F: BinaryCubicForm, prec: int):
    """Images of the basis (1, w, t) under the three complex embeddings."""
    if F.a == 0:
        raise ValueError("form has a root at infinity")
    with _prec(prec):
        roots = flint.fmpz_poly([F.d, F.c, F.b, F.a]).complex_roots()
        if any(m != 1 for _, m in roots):
            raise DegenerateCubicError("repeated root")
        out = []
        for xi, _ in roots:
            out.append((flint.acb(1), F.a * xi, F.a * xi * xi + F.b * xi))
    return out


def _usable_form(f: MonicCubic) -> BinaryCubicForm:
    F = maximal_order_form(f)
    k = 0
    while F.a == 0:  # move the rational root at infinity away
        k += 1
        F = F.transform(((1, k), (0, 1)))
    return F


def _gram(F: BinaryCubicForm, vecs, prec: int):
    emb = _embeddings(F, prec)
    with _prec(prec):
        images = []
        for v in vecs:
            images.append([sum((v[i] * e[i] for i in range(3)), flint.acb(0)) for e in emb])
        n = len(vecs)
        G = [[None] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                s = sum((x * y.conjugate() for x, y in zip(images[i], images[j])), flint.acb(0))
                G[i][j] = IntervalReal(s.real, prec)
    return G


def _less(x: IntervalReal, y: IntervalReal) -> bool:
    """Certified x < y; raises on an undecidable tie."""
    if x.upper < y.lower:
        return True
    if x.lower > y.upper:
        return False
    raise ArithmeticError("comparison undecidable at working precision")


def _reduced_traceless(f: MonicCubic, prec: int):
    F = _usable_form(f)
    # traces of 1, w, t are 3, -b, -2c
    v1, v2 = _kernel_basis((3, -F.b, -2 * F.c))
    v1, v2 = list(v1), list(v2)
    while True:
        (g11, g12), (_, g22) = _gram(F, [v1, v2], prec)
        if g22.upper < g11.lower:
            v1, v2 = v2, v1
            continue
        mu = round(float(g12 / g11))
        if mu == 0:
            break
        v2 = [x - mu * y for x, y in zip(v2, v1)]
    return F, tuple(v1), tuple(v2), ((g11, g12), (g12, g22))


def shape(f: MonicCubic, prec: int = DEFAULT_PRECISION) -> Shape:
    """Successive minima l1 <= l2 of the trace-zero part of the maximal order.

    Gauss reduction of a rank-two lattice yields the successive minima
    directly.  Reducible but nondegenerate cubics are accepted; their algebra
    is Q + K for a quadratic K.
    """
    _require_integral(f)
    if f.discriminant == 0:
        raise DegenerateCubicError(f"discriminant of {f} is zero")
    _, v1, v2, gram = _reduced_traceless(f, prec)
    (g11, _), (_, g22) = gram
    return Shape(g11.sqrt(), g22.sqrt(), (v1, v2), gram)


def count_traceless_primitive(f: MonicCubic, Y, prec: int = DEFAULT_PRECISION) -> int:
    """Number of primitive trace-zero alpha in the maximal order with |alpha| < Y,
    counted up to sign."""
    Y = Fraction(Y)
    if Y <= 0:
        return 0
    _, _, _, gram = _reduced_traceless(f, prec)
    (g11, g12), (_, g22) = gram
    det = g11 * g22 - g12 * g12
    Y2 = IntervalReal.from_fraction(Y * Y, prec)
    fg11, fg12, fdet = float(g11), float(g12), float(det)
    bound2 = int(math.isqrt(int(float(Y * Y) * fg11 / fdet) + 1)) + 1
    count = 0
    for n2 in range(0, bound2 + 1):
        centre = -n2 * fg12 / fg11
        rest = float(Y * Y) - n2 * n2 * fdet / fg11
        if rest < -1e-9 * float(Y * Y):
            continue
        span = math.sqrt(max(rest, 0.0) / fg11) + 1
        for n1 in range(math.floor(centre - span), math.ceil(centre + span) + 1):
            if n2 == 0 and n1 <= 0:
                continue
            if math.gcd(n1, n2) != 1:
                continue
            q = g11 * (n1 * n1) + g12 * (2 * n1 * n2) + g22 * (n2 * n2)
            if _less(q, Y2):
                count += 1
    return count
