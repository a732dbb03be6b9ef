"""Command line entry point: ``ellcensus <subcommand> ...``.

Exit codes: 0 success, 1 mismatch or bad input, 2 internal invariant
violation, 3 refused for budget.
"""

from __future__ import annotations

import argparse
import configparser
import json
import sys
from pathlib import Path
from typing import Sequence

from . import census as census_mod
from .arithmetic import BudgetExceeded, factorize
from .character_sums import (
    CharacterTriple,
    fourier_at,
    stated_fourier_magnitude,
    n_p,
    phi0_indicator,
    r_T_count,
    verify_fourier_statements,
)
from .cubic_rings import q_and_d, shape
from .euler import CONSTANT_NAMES, ReductionCollection, euler_constant
from .exact_densities import count_index_density, count_symbol_density
from .local_classification import (
    KodairaSymbol,
    MonicCubic,
    WeierstrassCurve,
    classify_by_translation,
    classify_by_valuations,
    global_invariants,
    local_data,
)
from .quartic_forms import (
    BinaryQuarticForm,
    RootedQuartic,
    cubic_IJ,
    embed_sigma,
    invariants_IJ,
    disc_quartic,
    q_d_rooted,
)

EXIT_OK, EXIT_MISMATCH, EXIT_INVARIANT, EXIT_BUDGET = 0, 1, 2, 3

CONFIG_KEYS = {
    "h_budget": float,
    "index_cap": int,
    "precision_digits": int,
    "density_budget": int,
    "fourier_sample": int,
}


def load_config(path: str | None) -> dict:
    """``key = value`` lines; unknown keys are an error."""
    if path is None:
        return {}
    parser = configparser.ConfigParser()
    parser.read_string("[ellcensus]\n" + Path(path).read_text())
    out = {}
    for key, raw in parser["ellcensus"].items():
        if key not in CONFIG_KEYS:
            raise ValueError(f"unknown config key {key!r}; known: {', '.join(sorted(CONFIG_KEYS))}")
        out[key] = CONFIG_KEYS[key](float(raw)) if CONFIG_KEYS[key] is int else CONFIG_KEYS[key](raw)
    return out


def _ints(text: str, n: int | None = None) -> list[int]:
    vals = [int(x) for x in text.split(",")]
    if n is not None and len(vals) != n:
        raise ValueError(f"expected {n} comma-separated integers, got {text!r}")
    return vals


def _emit(doc: dict, as_json: bool) -> None:
    if as_json:
        print(json.dumps(doc, indent=2, sort_keys=True, default=str))
        return
    for key, value in doc.items():
        print(f"{key}: {value}")


# -- subcommands ----------------------------------------------------------------------------


def cmd_classify(args, cfg) -> int:
    A, B = _ints(args.curve, 2)
    E = WeierstrassCurve(A, B)
    if E.discriminant == 0:
        raise ValueError("singular curve")
    if args.prime is not None:
        T = classify_by_valuations(E, args.prime)
        T2, _ = classify_by_translation(E.as_cubic(), args.prime)
        doc = local_data(T, args.prime).as_dict()
        doc["translation_route"] = str(T2)
        _emit(doc, args.json)
        return EXIT_OK if T == T2 else EXIT_INVARIANT
    try:
        doc = global_invariants(E).as_dict()
    except ValueError as exc:
        # no good reduction at 2 or 3: local data at p >= 5 only
        primes = [p for p in factorize(abs(E.discriminant)).primes if p >= 5]
        doc = {"note": str(exc), "local": [local_data(classify_by_valuations(E, p), p).as_dict() for p in primes]}
    if args.json:
        _emit(doc, True)
    else:
        for ld in doc.pop("local"):
            print(f"p={ld['p']}: {ld['symbol']} ({ld['reduction']}) c={ld['c_exp']} delta={ld['delta_exp']} "
                  f"q={ld['q_exp']} d={ld['d_exp']}")
        _emit(doc, False)
    return EXIT_OK


def cmd_cubic(args, cfg) -> int:
    a, b, c = _ints(args.poly, 3)
    f = MonicCubic(a, b, c)
    doc = q_and_d(f).as_dict()
    if args.shape:
        s = shape(f)
        doc.update({"l1": str(s.l1), "l2": str(s.l2), "skewness": str(s.skewness)})
    _emit(doc, args.json)
    return EXIT_OK


def cmd_density(args, cfg) -> int:
    if (args.symbol is None) == (args.index is None):
        raise ValueError("give exactly one of --symbol and --index")
    if args.symbol is not None:
        kwargs = {"budget": cfg["density_budget"]} if "density_budget" in cfg else {}
        rep = count_symbol_density(args.prime, args.symbol, args.m, **kwargs)
    else:
        rep = count_index_density(args.prime, args.index, args.m)
    _emit(rep.as_dict(), args.json)
    return EXIT_OK if rep.match else EXIT_MISMATCH


def cmd_fourier(args, cfg) -> int:
    T = KodairaSymbol.parse(args.symbol)
    p = args.prime
    status = EXIT_OK
    if args.chi:
        chi = CharacterTriple(*_ints(args.chi, 3), n_p(T, p))
        value = fourier_at(phi0_indicator(T, p), chi)
        expected = stated_fourier_magnitude(T, p, chi)
        exact = value.is_zero() if expected == 0 else value.abs_equals(expected)
        doc = {
            "chi": list(chi.triple),
            "N": chi.N,
            "value": str(complex(value)),
            "expected_magnitude": expected,
            "magnitude_matches": exact,
            "r_T": r_T_count(T, p, chi),
        }
        _emit(doc, args.json)
        status = EXIT_OK if exact else EXIT_MISMATCH
    if args.verify_lemmas:
        check = verify_fourier_statements(T, p, literal=args.literal, sample=cfg.get("fourier_sample", 10_000))
        _emit(check.as_dict(), args.json)
        if not check.ok:
            status = EXIT_MISMATCH
    if not args.chi and not args.verify_lemmas:
        raise ValueError("give --chi and/or --verify-lemmas")
    return status


def cmd_quartic(args, cfg) -> int:
    g = BinaryQuarticForm.from_coeffs(_ints(args.form, 5))
    I, J = invariants_IJ(g)
    doc = {"form": list(g.coeffs), "I": I, "J": J, "discriminant": disc_quartic(g)}
    if args.root:
        rq = RootedQuartic(g, tuple(_ints(args.root, 2)))
        Q, D = q_d_rooted(rq)
        doc.update({"root": list(rq.root), "Q": Q, "D": D})
        if Q * Q * D != doc["discriminant"]:
            _emit(doc, args.json)
            return EXIT_INVARIANT
    _emit(doc, args.json)
    return EXIT_OK


def cmd_embed(args, cfg) -> int:
    A, B = _ints(args.poly, 2)
    f = MonicCubic(0, A, B)
    inv = q_and_d(f)
    rq = embed_sigma(f, inv.q_index)
    Q, D = q_d_rooted(rq)
    doc = {
        "cubic": [0, A, B],
        "IJ_cubic": list(cubic_IJ(f)),
        "quartic": list(rq.g.coeffs),
        "root": list(rq.root),
        "IJ_quartic": list(invariants_IJ(rq.g)),
        "Q_cubic": inv.q_index,
        "Q_quartic": Q,
        "D_cubic": inv.disc_field,
        "D_quartic": D,
    }
    ok = doc["IJ_cubic"] == doc["IJ_quartic"] and abs(Q) == inv.q_index and D == inv.disc_field
    doc["identities_hold"] = ok
    _emit(doc, args.json)
    return EXIT_OK if ok else EXIT_INVARIANT


def cmd_census(args, cfg) -> int:
    grid_fn = census_mod.dyadic_grid if args.grid == "dyadic" else census_mod.decade_grid
    grid = grid_fn(args.xmax)
    collection = ReductionCollection.parse(args.collection) if args.collection else None
    report = census_mod.run_census(
        grid,
        kappa=args.kappa,
        collection=collection,
        family=census_mod.FULL_TABLES if args.full_tables else census_mod.SINGLE_CLASS,
        index_cap=args.index_cap or cfg.get("index_cap", 64),
        budget=cfg.get("h_budget", census_mod.DEFAULT_H_BUDGET),
        constant_digits=cfg.get("precision_digits", 10),
        j_cutoff=not args.no_j_cutoff,
    )
    text = report.to_json()
    if args.out:
        Path(args.out).write_text(text + "\n")
    else:
        print(text)
    if args.csv:
        Path(args.csv).write_text(report.to_csv())
    last = len(grid) - 1
    print(f"X={grid[last]} E_sf={report.counts['E_sf'][last]} ratio={report.ratios['E_sf'][last]:.6g} "
          f"constant={report.predicted['E_sf']:.6g} records={report.records_checked}", file=sys.stderr)
    return EXIT_OK


def cmd_constants(args, cfg) -> int:
    collection = ReductionCollection.parse(args.collection) if args.collection else None
    c = euler_constant(args.name, digits=args.digits, collection=collection)
    doc = c.as_dict(args.digits)
    if args.json:
        _emit(doc, True)
    else:
        print(f"{args.name} = [{doc['value']['lower']}, {doc['value']['upper']}]  (width {doc['value']['width']})")
    return EXIT_OK


# -- parser -------------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ellcensus", description="Local data and conductor census for elliptic curves.")
    parser.add_argument("--config", help="file of key = value lines (budgets, precision)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="Kodaira symbols and global invariants of y^2 = x^3 + Ax + B")
    p.add_argument("--curve", required=True, metavar="A,B")
    p.add_argument("--prime", type=int)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("cubic", help="index and field discriminant of x^3 + ax^2 + bx + c")
    p.add_argument("--poly", required=True, metavar="a,b,c")
    p.add_argument("--shape", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_cubic)

    p = sub.add_parser("density", help="exact p-adic density of a symbol or index exponent")
    p.add_argument("--prime", type=int, required=True)
    p.add_argument("--symbol")
    p.add_argument("--index", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("fourier", help="transforms of the symbol indicators")
    p.add_argument("--prime", type=int, required=True)
    p.add_argument("--symbol", required=True)
    p.add_argument("--chi", metavar="a,b,c")
    p.add_argument("--verify-lemmas", action="store_true")
    p.add_argument("--literal", action="store_true", help="check the uncorrected translate-count rule for III")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_fourier)

    p = sub.add_parser("quartic", help="invariants of a binary quartic, optionally rooted")
    p.add_argument("--form", required=True, metavar="a,b,c,d,e")
    p.add_argument("--root", metavar="alpha,beta")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_quartic)

    p = sub.add_parser("embed", help="rooted quartic attached to x^3 + Ax + B")
    p.add_argument("--poly", required=True, metavar="A,B")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("census", help="count the curve family by conductor")
    p.add_argument("--xmax", type=float, required=True)
    p.add_argument("--grid", choices=("dyadic", "decade"), default="dyadic")
    p.add_argument("--kappa", type=float, default=1.5)
    p.add_argument("--collection", help="allowed reduction types, e.g. 5:gm,7:a")
    p.add_argument("--full-tables", action="store_true")
    p.add_argument("--index-cap", type=int)
    p.add_argument("--no-j-cutoff", action="store_true", help="height-box diagnostic without the j condition")
    p.add_argument("--out")
    p.add_argument("--csv")
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("constants", help="certified census constants")
    p.add_argument("--name", required=True, choices=CONSTANT_NAMES)
    p.add_argument("--digits", type=int, default=15)
    p.add_argument("--collection")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_constants)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        return args.func(args, cfg)
    except census_mod.InvariantViolation as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except BudgetExceeded as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MISMATCH


if __name__ == "__main__":
    sys.exit(main())
