import random
from collections import Counter
from fractions import Fraction

import pytest

from ellcensus.exact_densities import (
    NONMINIMAL,
    BudgetExceeded,
    UndeterminedResidues,
    count_index_density,
    count_symbol_density,
    m_min,
    symbols_with_index,
    closed_form_symbol_density,
    closed_form_index_density,
    truncated_symbol,
)
from ellcensus.local_classification import (
    KodairaSymbol,
    MonicCubic,
    NonMinimalError,
    classify_by_translation,
)

K = KodairaSymbol.parse
SYMBOLS = ["I0", "I1", "I2", "I3", "II", "III", "IV", "I0*", "I1*", "I2*", "IV*", "III*", "II*"]


def test_reference_examples():
    assert count_symbol_density(5, K("II")).density == Fraction(4, 125)
    assert count_symbol_density(5, K("I2")).density == Fraction(16, 625)
    assert count_symbol_density(7, K("I0")).density == Fraction(6, 7)
    assert count_index_density(5, 1).split["total"] == Fraction(4, 125)
    assert count_index_density(5, 3).split["total"] == Fraction(16, 15625)
    assert count_index_density(5, 0).split["total"] == Fraction(24, 25)


@pytest.mark.parametrize("p", [5, 7])
@pytest.mark.parametrize("name", SYMBOLS)
def test_symbol_density_matches_table(p, name):
    rep = count_symbol_density(p, K(name))
    assert rep.density == closed_form_symbol_density(K(name), p)
    assert rep.total == p ** (3 * rep.m)
    assert rep.match


@pytest.mark.parametrize("name", ["I0", "I2", "III", "I1*", "IV*"])
def test_density_stable_in_m(name):
    T = K(name)
    assert count_symbol_density(5, T, m_min(T) + 1).density == count_symbol_density(5, T).density


def test_too_small_modulus_is_reported():
    with pytest.raises(UndeterminedResidues):
        count_symbol_density(5, K("I3"), 3)
    with pytest.raises(UndeterminedResidues):
        count_symbol_density(5, K("II*"), 5)


def test_budget_is_enforced():
    with pytest.raises(BudgetExceeded):
        count_symbol_density(7, K("I3"), budget=100)


def test_nonminimal_mass():
    assert count_symbol_density(5, NONMINIMAL).density == Fraction(1, 5**10)


@pytest.mark.parametrize("p", [5, 7, 11])
def test_closed_forms_sum_to_one_minus_nonminimal(p):
    q = Fraction(p)
    fixed = sum(closed_form_symbol_density(K(s), p) for s in ["I0", "II", "III", "IV", "I0*", "IV*", "III*", "II*"])
    # sum over n >= 1 of (q-1)^2/q^(n+2) and (q-1)^2/q^(n+7), geometric series
    i_n = (q - 1) ** 2 / q**3 / (1 - 1 / q)
    i_n_star = (q - 1) ** 2 / q**8 / (1 - 1 / q)
    assert fixed + i_n + i_n_star == 1 - q**-10


def test_counted_densities_approach_one():
    p = 5
    total = count_symbol_density(p, NONMINIMAL).density
    for s in ["I0", "II", "III", "IV", "I0*", "IV*", "III*", "II*"]:
        total += count_symbol_density(p, K(s)).density
    for n in range(1, 6):
        total += count_symbol_density(p, KodairaSymbol("I", n)).density
        total += count_symbol_density(p, KodairaSymbol("I*", n)).density
    assert total <= 1
    assert 1 - total < Fraction(1, 5**6)


@pytest.mark.parametrize("k", range(7))
def test_index_table_exact_with_split(k):
    rep = count_index_density(5, k)
    assert rep.split == closed_form_index_density(k, 5)
    exp = closed_form_index_density(k, 5)
    assert exp["good"] + exp["multiplicative"] + exp["additive"] == exp["total"]


def test_symbols_with_index_partition():
    seen = set()
    for k in range(12):
        for T in symbols_with_index(k):
            assert T not in seen
            seen.add(T)
    assert K("I5") in seen and K("I3*") in seen and K("II*") in seen


# -- brute force: classify lifts of every residue class ------------------------------


def traceless_residues(a, b, c, p, m):
    N = p**m
    inv3 = pow(3, -1, N)
    A = (b - a * a * inv3) % N
    B = (c - a * b * inv3 + 2 * a**3 * pow(27, -1, N)) % N
    return A, B


def classify_lift(a, b, c, p, m, rng):
    N = p**m
    f = MonicCubic(a + N * rng.randint(-10**6, 10**6), b + N * rng.randint(-10**6, 10**6),
                   c + N * rng.randint(-10**6, 10**6))
    if f.discriminant == 0:
        return None
    try:
        return classify_by_translation(f, p)[0]
    except NonMinimalError:
        return NONMINIMAL


def test_brute_force_all_residues_mod_25():
    p, m = 5, 2
    rng = random.Random(0)
    labels = Counter()
    for a in range(p**m):
        for b in range(p**m):
            for c in range(p**m):
                A, B = traceless_residues(a, b, c, p, m)
                label = truncated_symbol(A, m, B, m, p)
                labels[label] += 1
                if label is not None and (a * 31 + b * 7 + c) % 11 == 0:
                    got = classify_lift(a, b, c, p, m, rng)
                    assert got is None or got == label, (a, b, c, label, got)
    for name in ("I0", "I1"):
        assert labels[K(name)] == count_symbol_density(p, K(name), m).favorable


def test_brute_force_sampled_residues_mod_125():
    p, m = 5, 3
    rng = random.Random(1)
    N = p**m
    for _ in range(4000):
        a, b, c = rng.randrange(N), rng.randrange(N), rng.randrange(N)
        A, B = traceless_residues(a, b, c, p, m)
        label = truncated_symbol(A, m, B, m, p)
        if label is None:
            continue
        got = classify_lift(a, b, c, p, m, rng)
        assert got is None or got == label


def test_monte_carlo_frequencies():
    p = 5
    rng = random.Random(2)
    n = 20_000
    seen = Counter()
    for _ in range(n):
        f = MonicCubic(rng.randint(-10**9, 10**9), rng.randint(-10**9, 10**9), rng.randint(-10**9, 10**9))
        try:
            seen[classify_by_translation(f, p)[0]] += 1
        except NonMinimalError:
            seen[NONMINIMAL] += 1
    for name in ["I0", "I1", "I2", "II", "III"]:
        d = float(closed_form_symbol_density(K(name), p))
        sd = (d * (1 - d) / n) ** 0.5
        assert abs(seen[K(name)] / n - d) < 5 * sd + 1e-4, name
