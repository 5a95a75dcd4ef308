import csv
import io
import itertools
import json

import pytest

from quottangent.cli import main
from quottangent.enumeration import monomial_submodules
from quottangent.pipeline import (CSV_FIELDS, DEFAULT_SEED, REPRO_CASES, SearchConfig,
                                  _chart_records, default_workers, fixture_names,
                                  fixture_text, load_fixture, repro, repro_all, repro_csv,
                                  report_emit, reverify, search)
from quottangent.scalars import parse_field

RECORD_KEYS = ["chart", "candidate", "seed", "ring", "chart_generators", "B", "S", "gamma",
               "generators", "colength", "tangent_dim", "parity_expected", "parity_ok",
               "check_colength", "check_tangent_dim", "second_draw_tangent_dim",
               "qq_tangent_dim", "status", "counterexample"]


def small(**kw):
    kw.setdefault("workers", 1)
    return SearchConfig(2, 4, **kw)


# ---------------------------------------------------------------------------
# report files


def test_report_empty_stream(tmp_path):
    j, c = tmp_path / "r.jsonl", tmp_path / "r.csv"
    assert report_emit(iter(()), j, c) == 0
    assert j.read_text() == ""
    assert c.read_text() == ",".join(CSV_FIELDS) + "\n"


def test_report_one_counterexample(tmp_path):
    stairs = next(itertools.islice(monomial_submodules(3, 2, 8, True), 12, None))
    config = SearchConfig(2, 8, workers=1, max_candidates=117)
    rec = _chart_records((config, 12, stairs, None))[116]
    assert rec["status"] == "COUNTEREXAMPLE"
    j, c = tmp_path / "r.jsonl", tmp_path / "r.csv"
    assert report_emit([rec], j, c) == 1
    line = j.read_text()
    assert line.endswith("\n") and line.count("\n") == 1
    assert '"counterexample":true' in line
    assert list(json.loads(line)) == RECORD_KEYS
    rows = list(csv.reader(io.StringIO(c.read_text())))
    assert rows[0] == list(CSV_FIELDS)
    assert rows[1][CSV_FIELDS.index("status")] == "COUNTEREXAMPLE"
    assert rows[1][CSV_FIELDS.index("tangent_dim")] == "39"


# ---------------------------------------------------------------------------
# search


def test_zero_cap_gives_empty_stream():
    assert list(search(small(max_candidates=0))) == []


@pytest.mark.parametrize("kw", [dict(n=2), dict(r=0), dict(d=-1), dict(max_b=0), dict(max_s=0),
                                dict(max_candidates=-1), dict(workers=0), dict(field="fp:4")])
def test_config_validation(kw):
    base = dict(r=2, d=4, workers=1)
    base.update(kw)
    with pytest.raises(ValueError):
        SearchConfig(**base).validate()


def test_default_workers_from_environment(monkeypatch):
    monkeypatch.setenv("QUOTTANGENT_WORKERS", "3")
    assert default_workers() == 3
    monkeypatch.setenv("QUOTTANGENT_WORKERS", "junk")
    assert default_workers() == 1
    monkeypatch.delenv("QUOTTANGENT_WORKERS")
    assert default_workers() == 1


def test_records_are_well_formed():
    recs = list(search(small()))
    assert recs
    assert [(r["chart"], r["candidate"]) for r in recs] == \
        sorted((r["chart"], r["candidate"]) for r in recs)
    for r in recs:
        assert list(r) == RECORD_KEYS
        assert r["seed"] == DEFAULT_SEED
        assert r["colength"] == 4
        assert r["status"] == "OK" and r["parity_ok"]
        assert r["tangent_dim"] % 2 == 0
        assert len(r["gamma"]) == len(r["B"]) * len(r["S"])


def test_search_is_deterministic_across_workers():
    one = list(search(small(workers=1)))
    two = list(search(small(workers=2)))
    assert one == two
    assert list(search(small(workers=1))) == one


def test_seed_changes_gamma():
    a = list(search(small(seed=1, max_candidates=3)))
    b = list(search(small(seed=2, max_candidates=3)))
    assert [r["gamma"] for r in a] != [r["gamma"] for r in b]


def test_exhaustive_covers_more_charts():
    ss = {r["chart"] for r in search(small(max_candidates=1))}
    ex = {r["chart"] for r in search(small(max_candidates=1, strongly_stable=False))}
    assert len(ex) > len(ss)


def test_records_reverify():
    for r in itertools.islice(search(small()), 0, None, 25):
        assert reverify(r)
    r = next(search(small()))
    r = dict(r, tangent_dim=r["tangent_dim"] + 1)
    assert not reverify(r)


def test_time_budget_stops_early():
    assert list(search(SearchConfig(2, 8, workers=1, time_budget=0))) == []


@pytest.mark.parametrize("confirm,status", [(False, "UNCONFIRMED"), (True, "COUNTEREXAMPLE")])
def test_prime_field_hits_need_confirmation(confirm, status):
    stairs = next(itertools.islice(monomial_submodules(3, 2, 8, True), 12, None))
    config = SearchConfig(2, 8, field="fp:32003", confirm_qq=confirm, workers=1,
                          max_candidates=117)
    rec = _chart_records((config, 12, stairs, None))[116]
    assert rec["tangent_dim"] == 39
    assert rec["status"] == status
    assert rec["qq_tangent_dim"] == (39 if confirm else None)


# ---------------------------------------------------------------------------
# fixtures and reproduction


def test_fixtures_are_shipped():
    names = fixture_names()
    assert {c.fixture for c in REPRO_CASES.values()} <= set(names)
    for n in names:
        assert fixture_text(n).startswith("#")
        assert load_fixture(n).blocks


@pytest.mark.parametrize("name", list(REPRO_CASES))
def test_repro_case(name):
    res = repro(name)
    assert res.passed, res.summary()
    assert res.runtime <= REPRO_CASES[name].budget


def test_repro_unknown_case():
    with pytest.raises(KeyError):
        repro("no-such-case")


def test_repro_csv_has_one_row_per_case():
    results = repro_all(["thm-main-quot28", "binomial-ideal-hilb12"])
    rows = list(csv.reader(io.StringIO(repro_csv(results))))
    assert rows[0] == ["case", "status", "runtime_s", "details"]
    assert [r[:2] for r in rows[1:]] == [["thm-main-quot28", "PASS"],
                                         ["binomial-ideal-hilb12", "PASS"]]


# ---------------------------------------------------------------------------
# command line


@pytest.fixture
def fx(tmp_path):
    def write(name, text=None):
        p = tmp_path / f"{name}.txt"
        p.write_text(fixture_text(name) if text is None else text)
        return str(p)
    return write


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_cli_tangent_family(capsys, fx):
    code, out, _ = run(capsys, "tangent", fx("thm-main-quot28"), "--at", "1")
    assert code == 0
    rep = json.loads(out)
    assert (rep["colength"], rep["tangent_dim"]) == (8, 37)


def test_cli_tangent_kernel_document(capsys, fx):
    code, out, _ = run(capsys, "tangent", fx("binomial-kernel-quot28"))
    assert code == 0 and json.loads(out)["tangent_dim"] == 39


def test_cli_tangent_over_prime_field(capsys, fx):
    code, out, _ = run(capsys, "tangent", fx("binomial-ideal-hilb12"), "--field", "fp:32003")
    assert code == 0 and json.loads(out)["tangent_dim"] == 45


def test_cli_graded_and_tnt(capsys, fx):
    code, out, _ = run(capsys, "graded", fx("tnt-family-n2"))
    assert code == 0 and json.loads(out)["graded"]["-1"] == 4
    code, out, _ = run(capsys, "tnt", fx("tnt-family-n2"))
    assert code == 0 and json.loads(out)["has_tnt"] is True


def test_cli_nested(capsys, fx):
    code, out, _ = run(capsys, "nested-tangent", fx("nested-18-a4"), "--chain", "m,I")
    assert code == 0
    assert json.loads(out) == {"levels": [1, 8], "nested_tangent_dim": 29}
    code, out, _ = run(capsys, "tnt", fx("nested-18-a4"), "--chain", "m,I")
    assert code == 0 and json.loads(out)["has_tnt"] is False


def test_cli_enumerate(capsys):
    assert run(capsys, "enumerate", "--d", "8", "--count-only")[1] == "160\n"
    code, out, _ = run(capsys, "enumerate", "--d", "2", "--r", "2", "--n", "2", "--format", "json")
    assert code == 0 and len(out.splitlines()) == 2 + 2 + 1
    assert all(isinstance(json.loads(line), list) for line in out.splitlines())


def test_cli_search_to_files(capsys, tmp_path):
    prefix = str(tmp_path / "out")
    code, out, err = run(capsys, "search", "--r", "2", "--d", "4", "--workers", "1",
                         "--output", prefix)
    assert code == 0 and out == ""
    n = len(open(prefix + ".jsonl").read().splitlines())
    assert err.strip() == f"{n} records, 0 counterexamples"
    assert len(open(prefix + ".csv").read().splitlines()) == n + 1


def test_cli_search_stdout(capsys):
    code, out, _ = run(capsys, "search", "--r", "1", "--d", "3", "--workers", "1")
    assert code == 0
    assert all(json.loads(line)["status"] == "OK" for line in out.splitlines())


def test_cli_family_and_support(capsys, fx):
    code, out, _ = run(capsys, "family", fx("smoothable-family-hilb24"), "--base", "base")
    assert code == 0 and json.loads(out)["colengths"] == [24] * 4
    code, out, _ = run(capsys, "support", fx("smoothable-family-hilb24"), "--at", "1")
    assert code == 0
    assert sorted(p["length"] for p in json.loads(out)) == [6, 8, 10]


def test_cli_family_not_flat_exits_one(capsys, fx):
    path = fx("bad", "ring x; param t;\n@family\nx + t\nx\n")
    assert run(capsys, "family", path)[0] == 1


def test_cli_repro(capsys, tmp_path):
    table = tmp_path / "repro.csv"
    code, out, _ = run(capsys, "repro", "thm-main-quot28", "--csv", str(table))
    assert code == 0 and out.startswith("PASS  thm-main-quot28")
    assert len(table.read_text().splitlines()) == 2


def test_cli_usage_errors(capsys, fx, tmp_path):
    assert run(capsys, "repro", "nope")[0] == 2
    assert run(capsys, "repro")[0] == 2
    assert run(capsys, "tangent", str(tmp_path / "missing.txt"))[0] == 2
    assert run(capsys, "tangent", fx("thm-main-quot28"))[0] == 2
    assert run(capsys, "tangent", fx("binomial-ideal-hilb12"), "--at", "1")[0] == 2
    assert run(capsys, "tangent", fx("garbled", "ring x,y;\nx +* y\n"))[0] == 2
    assert run(capsys, "search", "--r", "0", "--d", "3")[0] == 2


def test_cli_check_failures(capsys, fx):
    code, _, err = run(capsys, "tangent", fx("line", "ring x,y;\nx\n"))
    assert code == 1 and "error" in err
    code, _, err = run(capsys, "support", fx("irr", "ring x;\nx^2 - 2\n"))
    assert code == 1 and "[" in err
    code, _, _ = run(capsys, "graded", fx("inhom", "ring x,y;\nx^2 + y\ny^2\n"))
    assert code == 1


def test_parse_field_roundtrip():
    assert parse_field("fp:7")(10) == 3
