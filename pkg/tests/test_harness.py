import json

import pytest

from hallorbits import verify_main_inequality
from hallorbits.harness import (
    CHECKS,
    MISMATCH,
    NOT_APPLICABLE,
    SKIPPED,
    ConfigError,
    CorpusError,
    RunConfig,
    VerificationRecord,
    apply_expectations,
    check_entry,
    load_corpus,
    pi_sets_for,
    report_lines,
    run_all,
    summary_csv,
)
from hallorbits.pisets import PiSet

SMALL = [
    {"name": "GL23", "kind": "mat", "field": "GF(3)", "dim": 2,
     "gens": [[1, 1, 0, 1], [0, 2, 1, 0], [2, 0, 0, 1]]},
    {"name": "S4", "kind": "perm", "degree": 4, "gens": ["(0 1 2 3)", "(0 1)"]},
    {"name": "Gamma8", "kind": "mat", "field": "GF(2)", "dim": 3,
     "gens": [[0, 1, 0, 0, 0, 1, 1, 1, 0], [1, 0, 0, 0, 0, 1, 0, 1, 1]]},
]


def write(tmp_path, entries, name="corpus.json"):
    p = tmp_path / name
    p.write_text(json.dumps(entries))
    return p


def test_default_corpus_size(corpus):
    assert len(corpus) >= 50
    solvable = [e for e in corpus if e.perm_group().is_solvable()]
    assert len(solvable) >= 30
    assert len(corpus) - len(solvable) >= 2


def test_small_corpus_builds(tmp_path):
    es = load_corpus(write(tmp_path, SMALL))
    assert [e.perm_group().order for e in es] == [48, 24, 21]


@pytest.mark.parametrize("bad,needle", [
    (SMALL[:2] + [dict(SMALL[1])], "duplicate entry name 'S4'"),
    ([{"name": "X", "kind": "mat", "field": "GF(3)", "dim": 2, "gens": [[1, 1, 1, 1]]}], "singular"),
    ([{"name": "X", "kind": "perm", "degree": 0, "gens": []}], "degree"),
    ([{"name": "X", "kind": "perm", "degree": 3, "gens": ["(0 5)"]}], "gens[0]"),
    ([{"name": "X", "kind": "mat", "field": "GF(3)", "dim": 2, "gens": [[1, 0, 0]]}], "4 row-major"),
    ([{"name": "X", "kind": "mat", "field": "GF(6)", "dim": 1, "gens": []}], "components[0]"),
    ([{"name": "X", "kind": "group"}], "kind"),
    ([{"kind": "perm"}], "name"),
    ({"name": "X"}, "top level"),
])
def test_corpus_errors(tmp_path, bad, needle):
    with pytest.raises(CorpusError) as info:
        load_corpus(write(tmp_path, bad))
    assert needle in str(info.value)


def test_bad_json_reports_position(tmp_path):
    p = tmp_path / "c.json"
    p.write_text('[\n  {"name": "A",\n   "kind": perm}\n]')
    with pytest.raises(CorpusError, match="line 3"):
        load_corpus(p)
    with pytest.raises(CorpusError):
        load_corpus(tmp_path / "missing.json")


def test_empty_gens_trivial(tmp_path):
    es = load_corpus(write(tmp_path, [{"name": "T", "kind": "perm", "degree": 3, "gens": []},
                                      {"name": "TM", "kind": "mat", "field": "GF(5)", "dim": 1, "gens": []}]))
    assert [e.perm_group().order for e in es] == [1, 1]


def test_mixed_components(corpus):
    e = next(x for x in corpus if x.name == "SL23+C4")
    M = e.build()
    assert M.order == 96 and len(M.space.components) == 2


def test_main_inequality_fixtures(s4, gl23):
    r = verify_main_inequality(s4, [3])
    assert r.details["lhs"] == r.details["rhs"] == 1 and r.holds
    r = verify_main_inequality(gl23.perm_group, [2])
    assert (r.details["lhs"], r.details["rhs"]) == (2, 4) and r.holds
    assert r.details["hall_order"] == 16


def test_main_inequality_skips_non_separable(a5):
    r = verify_main_inequality(a5, [2])
    assert r.status == SKIPPED and r.holds is None


def test_pi_policy(corpus):
    by = {e.name: e for e in corpus}
    assert len(pi_sets_for(by["S4"], 24, "all")) == 3
    e = by["A5xC7"]
    explicit = pi_sets_for(e, e.perm_group().order, "explicit")
    assert PiSet((7,)) in explicit and PiSet((2, 3, 5)) in explicit


def test_record_count_and_complements(tmp_path):
    cfg = RunConfig(corpus=str(write(tmp_path, SMALL)), out=str(tmp_path / "out"))
    res = run_all(cfg)
    per = {}
    for r in res.records:
        per.setdefault(r.entry, set()).add((str(r.pi), r.check))
    # every nonempty subset of prime divisors, times every check
    assert len(per["GL23"]) == 3 * len(CHECKS)
    assert len(per["Gamma8"]) == 3 * len(CHECKS)
    assert len(res.records) == sum(len(v) for v in per.values())
    pis = {str(r.pi) for r in res.records if r.entry == "GL23"}
    assert {"2", "3"} <= pis
    assert all(r.status == NOT_APPLICABLE for r in res.records if r.entry == "S4" and r.check != "main-inequality")
    assert res.exit_code == 0


def test_skipped_does_not_fail(tmp_path):
    cfg = RunConfig(corpus=str(write(tmp_path, SMALL)), out=str(tmp_path / "o"), mode="strict")
    res = run_all(cfg, write=False)
    assert any(r.status == SKIPPED for r in res.records)
    assert all(r.holds is None for r in res.records if r.status == SKIPPED)
    assert res.exit_code == 0


def test_g_unit_flags_gl23(tmp_path):
    cfg = RunConfig(corpus=str(write(tmp_path, SMALL[:1])), out=str(tmp_path / "o"), mode="lenient", unit="G",
                    checks=("orbit-theorem",))
    res = run_all(cfg, write=False)
    bad = res.violations
    assert [(r.entry, str(r.pi)) for r in bad] == [("GL23", "2")]
    assert res.exit_code == 1


def test_expectation_mismatch(tmp_path):
    entry = dict(SMALL[1], expectations={"main-inequality": {"3": {"lhs": 2}}})
    cfg = RunConfig(corpus=str(write(tmp_path, [entry])), out=str(tmp_path / "o"))
    res = run_all(cfg)
    bad = res.violations
    assert len(bad) == 1 and bad[0].status == MISMATCH
    assert bad[0].diff == {"lhs": {"expected": 2, "actual": 1}}
    first = json.loads(res.report_path.read_text().splitlines()[0])
    assert first["type"] == "violation" and first["entry"] == "S4"
    assert res.exit_code == 1


def test_apply_expectations_holds_key():
    rec = VerificationRecord("X", PiSet((2,)), "main-inequality", "HOLDS", True, 0, {"lhs": 1})
    assert apply_expectations(rec, {"main-inequality": {"2": {"holds": True, "lhs": 1}}}).status == "HOLDS"
    assert apply_expectations(rec, {"main-inequality": {"2": {"holds": False}}}).status == MISMATCH


def test_corpus_expectations_pass(corpus):
    cfg = RunConfig(mode="lenient", entries=("GL23", "S4"))
    for e in corpus:
        if e.name in cfg.entries:
            assert all(r.status != MISMATCH for r in check_entry(e, cfg))


def test_reports_and_timings(tmp_path):
    cfg = RunConfig(corpus=str(write(tmp_path, SMALL)), out=str(tmp_path / "o"), seed=3)
    res = run_all(cfg)
    lines = [json.loads(x) for x in res.report_path.read_text().splitlines()]
    assert all(x["type"] == "record" for x in lines) and len(lines) == len(res.records)
    assert all("timing" not in x for x in lines)
    head = res.summary_path.read_text().splitlines()[0]
    assert head == "entry,pi,check,status,holds,lhs,rhs,qualifying,threshold,witness"
    assert res.timings_path.read_text().startswith("entry,pi,check,seconds")
    assert report_lines(res.records) == res.report_path.read_text()
    assert summary_csv(res.records) == res.summary_path.read_text()


def test_determinism_across_jobs(tmp_path):
    path = str(write(tmp_path, SMALL))
    a = run_all(RunConfig(corpus=path, out=str(tmp_path / "a"), seed=7, jobs=1))
    b = run_all(RunConfig(corpus=path, out=str(tmp_path / "b"), seed=7, jobs=2))
    assert a.report_path.read_bytes() == b.report_path.read_bytes()
    assert a.summary_path.read_bytes() == b.summary_path.read_bytes()


@pytest.mark.parametrize("kwargs", [
    {"checks": ("nope",)}, {"pi_policy": "some"}, {"unit": "K"}, {"mode": "loose"}, {"jobs": 0},
    {"caps": {"no_such_cap": 3}},
])
def test_config_errors(kwargs):
    with pytest.raises(ConfigError):
        RunConfig(**kwargs).validate()


def test_config_file(tmp_path):
    p = tmp_path / "cfg.json"
    p.write_text(json.dumps({"mode": "lenient", "seed": 4}))
    cfg = RunConfig.from_file(p, seed=9)
    assert cfg.mode == "lenient" and cfg.seed == 9
    p.write_text(json.dumps({"colour": "red"}))
    with pytest.raises(ConfigError, match="colour"):
        RunConfig.from_file(p)


def test_unknown_entry(tmp_path):
    with pytest.raises(ConfigError):
        run_all(RunConfig(corpus=str(write(tmp_path, SMALL)), entries=("nope",)), write=False)


def test_entry_failure_becomes_corpus_error(tmp_path):
    huge = [{"name": "Big", "kind": "perm", "degree": 12, "gens": ["(0 1 2 3 4 5 6 7 8 9 10 11)", "(0 1)"]}]
    cfg = RunConfig(corpus=str(write(tmp_path, huge)), caps={"enumeration": 1000}, checks=("main-inequality",))
    with pytest.raises(CorpusError):
        run_all(cfg, write=False)

