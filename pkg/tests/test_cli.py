import json

import pytest

from ellcensus import census, cli
from ellcensus.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_classify_json(capsys):
    code, out, _ = run(capsys, "classify", "--curve", "16,16", "--json")
    doc = json.loads(out)
    assert code == 0
    assert (doc["delta"], doc["conductor"], doc["index"]) == (-91, 91, 1)


def test_classify_at_prime_cross_checks_routes(capsys):
    code, out, _ = run(capsys, "classify", "--curve", "25,125", "--prime", "5", "--json")
    doc = json.loads(out)
    assert code == 0
    assert doc["symbol"] == doc["translation_route"]


def test_classify_singular(capsys):
    code, _, err = run(capsys, "classify", "--curve=-3,2")
    assert code == 1 and "singular" in err


def test_cubic(capsys):
    code, out, _ = run(capsys, "cubic", "--poly", "0,-7,13", "--json")
    assert code == 0
    assert json.loads(out) == {"disc_order": -3191, "q_index": 1, "disc_field": -3191}


def test_density_matches(capsys):
    code, out, _ = run(capsys, "density", "--prime", "5", "--symbol", "IV", "--json")
    assert code == 0
    assert json.loads(out)["density"] == "4/3125"


def test_density_needs_one_target(capsys):
    code, _, _ = run(capsys, "density", "--prime", "5")
    assert code == 1


def test_fourier_single_character(capsys):
    code, out, _ = run(capsys, "fourier", "--prime", "5", "--symbol", "III", "--chi", "0,0,3", "--json")
    doc = json.loads(out)
    assert code == 0 and doc["magnitude_matches"] and doc["expected_magnitude"] == 25


def test_fourier_literal_rule_exits_nonzero(capsys):
    assert run(capsys, "fourier", "--prime", "5", "--symbol", "III", "--verify-lemmas")[0] == 0
    assert run(capsys, "fourier", "--prime", "5", "--symbol", "III", "--verify-lemmas", "--literal")[0] == 1


def test_quartic_rooted(capsys):
    code, out, _ = run(capsys, "quartic", "--form", "1,0,-3,0,2", "--root", "1,1", "--json")
    doc = json.loads(out)
    assert code == 0
    assert doc["Q"] ** 2 * doc["D"] == doc["discriminant"]


def test_quartic_rejects_non_root(capsys):
    assert run(capsys, "quartic", "--form", "1,0,-3,0,2", "--root", "1,2")[0] == 1


def test_embed(capsys):
    code, out, _ = run(capsys, "embed", "--poly=-7,13", "--json")
    doc = json.loads(out)
    assert code == 0 and doc["identities_hold"]
    assert doc["IJ_cubic"] == doc["IJ_quartic"]


def test_constants(capsys):
    code, out, _ = run(capsys, "constants", "--name", "sf+", "--digits", "8", "--json")
    doc = json.loads(out)
    assert code == 0
    assert doc["value"]["lower"].startswith("0.153174")


def test_census_writes_report_and_csv(capsys, tmp_path):
    out, csv_path = tmp_path / "r.json", tmp_path / "r.csv"
    code, _, err = run(capsys, "census", "--xmax", "4000", "--index-cap", "16", "--out", str(out), "--csv", str(csv_path))
    assert code == 0 and "E_sf" in err
    doc = json.loads(out.read_text())
    assert set(doc) >= {"grid", "families", "constants", "tails"}
    assert csv_path.read_text().startswith("X,family,count,ratio")


def test_census_is_deterministic(capsys, tmp_path):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for p in paths:
        run(capsys, "census", "--xmax", "2000", "--index-cap", "8", "--out", str(p))
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_budget_refusal_exit_code(capsys, tmp_path):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("h_budget = 1e6\nindex_cap = 16\n")
    code, _, err = run(capsys, "--config", str(cfg), "census", "--xmax", "4000")
    assert code == 3 and "refused" in err


def test_invariant_violation_exit_code(capsys, monkeypatch):
    def broken(rec):
        raise census.InvariantViolation("forced")

    monkeypatch.setattr(census, "check_record", broken)
    code, _, err = run(capsys, "census", "--xmax", "2000", "--index-cap", "8")
    assert code == 2 and "forced" in err


def test_unknown_config_key(tmp_path):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("bogus = 1\n")
    with pytest.raises(ValueError):
        cli.load_config(str(cfg))


def test_config_values_are_typed(tmp_path):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("# budgets\nh_budget = 1e12\nindex_cap = 32\n")
    assert cli.load_config(str(cfg)) == {"h_budget": 1e12, "index_cap": 32}
