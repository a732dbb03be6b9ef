"""Enumeration and counting of the curve family with good reduction at 2 and 3.

Curves are short Weierstrass pairs (A, B) with ``16 | A``, ``B = 16 mod 64``
and ``3 ∤ A``.  For these ``Delta(E) = Delta(A, B) / 2^8`` is prime to 6.
The family keeps curves with ``|j(E)| < log |Delta(E)|``.  Records are
classified prime by prime and counted by conductor.
"""

from __future__ import annotations

import csv
import io
import json
import math
from bisect import bisect_left
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

from .arithmetic import BudgetExceeded, IntervalReal, is_squarefree
from .euler import EulerConstant, ReductionCollection, euler_constant
from .good_reduction import ROWS_AT_2, ROWS_AT_3
from .local_classification import NonMinimalError, WeierstrassCurve, global_invariants

__all__ = [
    "CongruenceFamily",
    "SINGLE_CLASS",
    "FULL_TABLES",
    "CurveRecord",
    "CensusReport",
    "InvariantViolation",
    "j_invariant",
    "passes_j_cutoff",
    "classify_pair",
    "enumerate_family_E",
    "family_filters",
    "admitted",
    "check_record",
    "run_census",
    "dyadic_grid",
    "DEFAULT_H_BUDGET",
]

DEFAULT_H_BUDGET = 10**13


class InvariantViolation(AssertionError):
    """A per-record identity failed."""


@dataclass(frozen=True)
class CongruenceFamily:
    """Residue classes of (A, B) at 2 and at 3 giving good reduction."""

    name: str
    rows_2: tuple
    rows_3: tuple

    def contains(self, A: int, B: int) -> bool:
        return any(r.matches(A, B) for r in self.rows_2) and any(r.matches(A, B) for r in self.rows_3)

    def density(self) -> tuple[Fraction, Fraction]:
        return sum(r.density for r in self.rows_2), sum(r.density for r in self.rows_3)


SINGLE_CLASS = CongruenceFamily("single-class", ROWS_AT_2[:1], ROWS_AT_3[:1])
FULL_TABLES = CongruenceFamily("full-tables", ROWS_AT_2, ROWS_AT_3)


@dataclass(frozen=True)
class CurveRecord:
    A: int
    B: int
    delta_AB: int
    delta_E: int
    conductor: int
    index: int
    q_inv: int
    d_inv: int
    j_num: int
    j_den: int
    symbols: tuple[tuple[int, str], ...]
    reductions: tuple[tuple[int, str], ...]
    in_E: bool = True
    in_E_sf: bool = False
    in_E_kappa: bool = False

    def as_dict(self) -> dict:
        d = asdict(self)
        d["symbols"] = [list(s) for s in self.symbols]
        d["reductions"] = [list(s) for s in self.reductions]
        return d


# -- j-invariant ---------------------------------------------------------------------


def j_invariant(A: int, B: int) -> Fraction:
    den = 4 * A**3 + 27 * B * B
    if den == 0:
        raise ValueError("singular curve has no j-invariant")
    return Fraction(6912 * A**3, den)


def passes_j_cutoff(j: Fraction, delta_E: int) -> bool:
    """|j| < log |Delta(E)|, decided exactly; raises if an enclosure cannot separate them."""
    if delta_E == 0:
        raise ValueError("zero discriminant")
    a = abs(j)
    log_d = math.log(abs(delta_E))
    if abs(float(a) - log_d) > 1e-9 * max(1.0, log_d):
        return float(a) < log_d
    for prec in (128, 512):
        L = IntervalReal.from_fraction(abs(delta_E), prec).log()
        J = IntervalReal.from_fraction(a, prec)
        if J.upper < L.lower:
            return True
        if J.lower > L.upper:
            return False
    raise ArithmeticError(f"cannot separate |j| = {a} from log|Delta| = {abs(delta_E)}")


# -- classification ------------------------------------------------------------------------


def classify_pair(A: int, B: int, kappa: float | None = None) -> CurveRecord:
    """Full record for a curve with good reduction at 2 and 3 (any table row)."""
    E = WeierstrassCurve(A, B)
    inv = global_invariants(E)
    j = j_invariant(A, B)
    symbols = tuple((ld.p, str(ld.symbol)) for ld in inv.local)
    reductions = tuple((ld.p, ld.reduction) for ld in inv.local)
    rec = CurveRecord(
        A=A, B=B, delta_AB=E.discriminant, delta_E=inv.delta, conductor=inv.conductor,
        index=inv.index, q_inv=inv.q, d_inv=inv.d, j_num=j.numerator, j_den=j.denominator,
        symbols=symbols, reductions=reductions,
    )
    return family_filters(rec, kappa)


def family_filters(rec: CurveRecord, kappa: float | None = None,
                   collection: ReductionCollection | None = None) -> CurveRecord:
    """Set the E_sf and E_kappa flags; a collection restricts the reduction type at listed primes."""
    ok = collection is None or admitted(rec, collection)
    sf = ok and is_squarefree(rec.index)
    kap = ok and kappa is not None and _below_power(abs(rec.delta_E), rec.conductor, kappa)
    return CurveRecord(**{**rec.__dict__, "in_E_sf": sf, "in_E_kappa": kap})


def admitted(rec: CurveRecord, collection: ReductionCollection) -> bool:
    """Whether the reduction type at every listed prime is allowed."""
    local = dict(rec.reductions)
    return all(collection.admits(p, local.get(p, "good")) for p, _ in collection.allowed)


def _below_power(delta: int, C: int, kappa: float) -> bool:
    """delta < C^kappa, exact for rational kappa."""
    k = Fraction(kappa).limit_denominator(10**6) if isinstance(kappa, float) else Fraction(kappa)
    # delta^q < C^p
    return delta**k.denominator < C**k.numerator


def check_record(rec: CurveRecord) -> None:
    """Raise InvariantViolation unless every per-record identity holds exactly."""
    d = rec.delta_E
    if d % 2 == 0 or d % 3 == 0:
        raise InvariantViolation(f"{rec.A},{rec.B}: Delta(E) = {d} not prime to 6")
    if abs(d) != rec.q_inv**2 * abs(rec.d_inv) or (d > 0) != (rec.d_inv > 0):
        raise InvariantViolation(f"{rec.A},{rec.B}: Delta != Q^2 D")
    if abs(d) % rec.conductor or rec.index != abs(d) // rec.conductor:
        raise InvariantViolation(f"{rec.A},{rec.B}: index inconsistent with conductor")
    if rec.in_E_sf and abs(rec.d_inv) * abs(d) != rec.conductor**2:
        raise InvariantViolation(f"{rec.A},{rec.B}: sf curve with |D| != C^2/|Delta|")


# -- enumeration ---------------------------------------------------------------------------------


def _a_bound(B: int, L: float) -> int:
    """|A| beyond which |j| >= L for every A with this B (needs L < 1728)."""
    return int((27 * B * B * L / (6912 - 4 * L)) ** (1 / 3)) + 2


def _strips(lo: int, hi: int, step: int, width: int) -> Iterator[range]:
    start = lo
    while start <= hi:
        yield range(start, min(hi, start + width * step - 1) + 1, step)
        start += width * step


def _is_reduced_representative(A: int, B: int, family: CongruenceFamily) -> bool:
    """False when a model (A/u^4, B/u^6), u in {2, 3, 6}, of the same curve is also in the family."""
    for u in (2, 3, 6):
        if A % u**4 == 0 and B % u**6 == 0 and family.contains(A // u**4, B // u**6):
            return False
    return True


def enumerate_family_E(H_max: float, *, family: CongruenceFamily = SINGLE_CLASS, kappa: float | None = None,
                       j_cutoff: bool = True, log_delta_max: float | None = None,
                       budget: float = DEFAULT_H_BUDGET, stats: dict | None = None,
                       strip_width: int = 256) -> Iterator[CurveRecord]:
    """Classified records for all (A, B) in the family with max(4|A|^3, 27B^2) < H_max.

    ``log_delta_max`` bounds log|Delta(E)| over the records of interest and is
    used to restrict A through the j-cutoff; it defaults to log(H_max).
    """
    if H_max > budget:
        raise BudgetExceeded(f"H_max = {H_max:.3g} exceeds budget {budget:.3g}")
    if not j_cutoff and H_max > 10**9:
        raise BudgetExceeded("without the j-cutoff the box is enumerated in full; H_max <= 1e9")
    stats = stats if stats is not None else {}
    for k in ("pairs", "singular", "nonminimal", "j_cut", "duplicate", "records"):
        stats.setdefault(k, 0)
    L = log_delta_max if log_delta_max is not None else math.log(H_max)
    b_max = math.isqrt(int(H_max // 27) + 1) + 1
    a_box = int((H_max / 4) ** (1 / 3)) + 2
    b_step = 64 if family is SINGLE_CLASS else 1
    b_lo = -b_max + ((16 + b_max) % 64) if family is SINGLE_CLASS else -b_max
    for strip in _strips(b_lo, b_max, b_step, strip_width):
        for B in strip:
            if 27 * B * B >= H_max:
                continue
            a_lim = min(a_box, _a_bound(B, L)) if j_cutoff else a_box
            if family is SINGLE_CLASS:
                A_values = (A for A in range(-(a_lim // 16) * 16, a_lim + 1, 16) if A % 3)
            else:
                A_values = range(-a_lim, a_lim + 1)
            for A in A_values:
                if 4 * abs(A) ** 3 >= H_max:
                    continue
                if family is not SINGLE_CLASS:
                    if not family.contains(A, B):
                        continue
                    if not _is_reduced_representative(A, B, family):
                        stats["duplicate"] += 1
                        continue
                stats["pairs"] += 1
                if 4 * A**3 + 27 * B * B == 0:
                    stats["singular"] += 1
                    continue
                try:
                    rec = classify_pair(A, B, kappa)
                except NonMinimalError:
                    stats["nonminimal"] += 1
                    continue
                if j_cutoff and not passes_j_cutoff(Fraction(rec.j_num, rec.j_den), rec.delta_E):
                    stats["j_cut"] += 1
                    continue
                stats["records"] += 1
                yield rec


# -- the census --------------------------------------------------------------------------------------


def dyadic_grid(x_max: float, points: int = 8) -> list[int]:
    return sorted({max(1, int(x_max) >> k) for k in range(points)})


def decade_grid(x_max: float, x_min: float = 1e3) -> list[int]:
    out, x = [], int(x_max)
    while x >= x_min:
        out.append(x)
        x //= 10
    return sorted(out)


FAMILIES = ("E", "E_sf", "E_sf+", "E_sf-", "E_kappa")


@dataclass
class CensusReport:
    grid: list[int]
    kappa: float
    collection: str
    family: str
    index_cap: int
    H_max: float
    counts: dict[str, list[int]]
    ratios: dict[str, list[float]]
    constants: dict[str, dict]
    predicted: dict[str, float]
    tails: list[dict]
    stats: dict
    records_checked: int
    notes: list[str] = field(default_factory=list)

    def to_json(self) -> str:
        doc = {
            "grid": self.grid,
            "families": {name: {"counts": self.counts[name], "ratios": self.ratios[name]} for name in self.counts},
            "constants": self.constants,
            "predicted": self.predicted,
            "tails": self.tails,
            "parameters": {
                "kappa": self.kappa, "collection": self.collection, "family": self.family,
                "index_cap": self.index_cap, "H_max": self.H_max,
            },
            "stats": self.stats,
            "records_checked": self.records_checked,
            "notes": self.notes,
        }
        return json.dumps(doc, indent=2, sort_keys=True)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["X", "family", "count", "ratio"])
        for i, X in enumerate(self.grid):
            for name in self.counts:
                w.writerow([X, name, self.counts[name][i], f"{self.ratios[name][i]:.12g}"])
        return buf.getvalue()


def _h_max_for(x_max: float, index_cap: int) -> tuple[float, float]:
    """H bound capturing every curve in the family with |Delta(E)| < index_cap * x_max."""
    delta_cap = index_cap * x_max
    L = math.log(delta_cap)
    # |j| < L gives (6912 - 4L) 4|A|^3 < 4L 27B^2, and 27B^2 <= 2^8 |Delta(E)| + 4|A|^3
    return 256 * delta_cap * (6912 - 4 * L) / (6912 - 8 * L) * 1.000001 + 1, L


def run_census(grid: Sequence[int], *, kappa: float = 1.5, collection: ReductionCollection | None = None,
               family: CongruenceFamily = SINGLE_CLASS, index_cap: int = 64,
               tail_multipliers: Sequence[int] | None = None, budget: float = DEFAULT_H_BUDGET,
               constant_digits: int = 10, records: list | None = None, j_cutoff: bool = True) -> CensusReport:
    """Counts by conductor on the grid, with invariant checks on every record.

    Curves are enumerated up to |Delta(E)| < index_cap * max(grid); curves with
    C(E) < X but index above index_cap * max(grid) / X are not seen.  With
    ``j_cutoff=False`` the count is over the same (A, B) height box only, as a
    diagnostic: without the cutoff a discriminant bound does not bound the height.
    """
    grid = sorted(set(int(x) for x in grid))
    if not grid or grid[0] < 1:
        raise ValueError("grid must contain positive values")
    x_max = grid[-1]
    H_max, L = _h_max_for(x_max, index_cap)
    delta_cap = index_cap * x_max
    stats: dict = {}
    conductors: dict[str, list[int]] = {name: [] for name in FAMILIES}
    tail_pairs: list[tuple[int, int]] = []
    checked = 0
    for rec in enumerate_family_E(H_max, family=family, kappa=kappa, log_delta_max=L, budget=budget,
                                  stats=stats, j_cutoff=j_cutoff):
        if abs(rec.delta_E) >= delta_cap:
            continue
        if collection is not None:
            rec = family_filters(rec, kappa, collection)
        check_record(rec)
        checked += 1
        if records is not None:
            records.append(rec)
        if collection is not None and not admitted(rec, collection):
            continue
        C = rec.conductor
        conductors["E"].append(C)
        tail_pairs.append((C, rec.index))
        if rec.in_E_sf:
            conductors["E_sf"].append(C)
            conductors["E_sf+" if rec.delta_E > 0 else "E_sf-"].append(C)
        if rec.in_E_kappa:
            conductors["E_kappa"].append(C)
    counts, ratios = {}, {}
    for name, cs in conductors.items():
        cs.sort()
        counts[name] = [bisect_left(cs, X) for X in grid]
        ratios[name] = [n / X ** (5 / 6) for n, X in zip(counts[name], grid)]
    for name in FAMILIES:
        if any(b < a for a, b in zip(counts[name], counts[name][1:])):
            raise InvariantViolation(f"counts for {name} are not monotone")
    if any(s > e for s, e in zip(counts["E_sf"], counts["E"])):
        raise InvariantViolation("sf counts exceed E counts")

    multipliers = list(tail_multipliers) if tail_multipliers else [2**k for k in range(0, 21)]
    tails = []
    for X in grid:
        row = {"X": X, "M": multipliers, "count": [], "scaled": []}
        sel = [i for c, i in tail_pairs if c < X]
        for M in multipliers:
            n = sum(1 for i in sel if i > M)
            row["count"].append(n)
            row["scaled"].append(n * M ** (1 / 6) / X ** (5 / 6))
        if any(b > a for a, b in zip(row["count"], row["count"][1:])):
            raise InvariantViolation("tail counts increase with M")
        tails.append(row)

    constants: dict[str, dict] = {}
    predicted: dict[str, float] = {}
    for cname, fam in (("sf", "E_sf"), ("sf+", "E_sf+"), ("sf-", "E_sf-"), ("kappa", "E_kappa")):
        c: EulerConstant = euler_constant(cname, digits=constant_digits, collection=collection)
        constants[cname] = c.as_dict(constant_digits)
        predicted[fam] = float(c.value)

    notes = [
        f"family {family.name}; records enumerated up to |Delta(E)| < {delta_cap:.6g} (H < {H_max:.6g})",
        f"curves with C(E) < X and index > {index_cap} * {x_max} / X are not counted",
        "j-cutoff read as |j(E)| < log|Delta(E)|" if j_cutoff else "j-cutoff disabled: height-box diagnostic",
    ]
    return CensusReport(
        grid=grid, kappa=kappa, collection=str(collection or ""), family=family.name, index_cap=index_cap,
        H_max=H_max, counts=counts, ratios=ratios, constants=constants, predicted=predicted, tails=tails,
        stats=stats, records_checked=checked, notes=notes,
    )
