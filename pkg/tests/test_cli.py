import json
from fractions import Fraction

import pytest

from awcentralizer import cli
from awcentralizer.cli import (
    SMALL_TRIPLES,
    Options,
    Task,
    build_parser,
    main,
    options_from_args,
    parse_spins,
    report_document,
    run_suite,
    run_task,
    suite_tasks,
)
from awcentralizer.report import FAIL, UNSUPPORTED, VerificationReport

H = Fraction(1, 2)


def test_parse_spins():
    assert parse_spins("1/2,1/2,1/2;1,1/2,1/2") == [(H, H, H), (1, H, H)]
    with pytest.raises(ValueError):
        parse_spins("1,2")
    with pytest.raises(ValueError):
        parse_spins("1/3,0,0")
    with pytest.raises(ValueError):
        parse_spins("-1,0,0")


def test_twenty_small_triples():
    assert len(SMALL_TRIPLES) == 20
    assert len(set(SMALL_TRIPLES)) == 20


def test_default_suites_cover_the_case_list():
    labels = {t.label for t in suite_tasks("all", Options())}
    assert labels >= {
        "aw-homomorphism", "r-matrix", "centralizer-dim", "surjectivity", "minimal-polys", "quotient-dim",
        "classify", "tridiagonal-modules", "classify-raw-count", "presentation-tl", "iso-tl", "iso-bmw",
        "presentation-1btl", "iso-1btl", "permutation-invariance", "q1-limit",
    }


def test_one_boundary_at_two_is_scheduled():
    tasks = suite_tasks("isomorphisms", Options(spins=[(2, H, H)]))
    assert {(t.label, t.spins[0]) for t in tasks} == {("presentation-1btl", 2), ("iso-1btl", 2)}


def test_unknown_suite():
    with pytest.raises(ValueError):
        suite_tasks("nope", Options())
    with pytest.raises(SystemExit) as err:
        main(["nope"])
    assert err.value.code == 2


def test_configuration_error_exit_code(capsys):
    assert main(["q1-limit", "--spins", "1,2"]) == 2
    assert main(["q1-limit", "--samples", "0"]) == 2
    assert "configuration error" in capsys.readouterr().err


def test_jobs_environment_override(monkeypatch):
    monkeypatch.setenv("AW_VERIFY_JOBS", "3")
    args = build_parser().parse_args(["q1-limit", "--jobs", "1"])
    assert options_from_args(args).jobs == 3


def test_seed_accepts_hex():
    args = build_parser().parse_args(["q1-limit", "--seed", "0xA3"])
    assert args.seed == 163


def test_resource_cap_becomes_unsupported():
    rep = run_task(Task("centralizer.check_centralizer_dim", ((8, 8, 8),), (), "centralizer-dim", (8, 8, 8)))
    assert rep.status == UNSUPPORTED
    assert "cap" in rep.details["reason"]


def test_reports_sorted_and_passing():
    reps = run_suite("q1-limit", Options(spins=[(1, H, H), (H, H, H)]))
    assert [r.spins for r in reps] == [(H, H, H), (1, H, H)]
    assert all(r.passed for r in reps)


def test_report_document_keys():
    doc = report_document(run_suite("q1-limit", Options(spins=[(H, H, H)])), Options(spins=[(H, H, H)]))
    assert set(doc) == {"version", "config", "reports"}
    assert set(doc["config"]) == {"spins", "mode", "samples", "seed", "max_word_len", "kmax"}
    assert set(doc["reports"][0]) == {
        "check_id", "spins", "k_or_ell", "mode", "samples", "status", "details", "wall_time_ms",
    }


def test_json_output_is_byte_identical(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    argv = ["permutation-invariance", "--spins", "1,1/2,1/2", "--format", "json"]
    assert main(argv + ["--out", str(a)]) == 0
    assert main(argv + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    doc = json.loads(a.read_text())
    assert doc["reports"][0]["status"] == "PASS"


def test_text_output(capsys):
    assert main(["q1-limit", "--spins", "1/2,1/2,1/2"]) == 0
    out = capsys.readouterr().out
    assert "PASS        q1-limit (1/2,1/2,1/2)" in out
    assert out.rstrip().endswith("summary: PASS=1")


def test_failure_exit_code_and_witness(monkeypatch, capsys):
    def failing(name, options=None):
        return [VerificationReport("aw-homomorphism", (H, H, H)).fail({"quantity": "def1", "entry": [0, 1]})]

    monkeypatch.setattr(cli, "run_suite", failing)
    assert main(["aw-homomorphism"]) == 1
    out = capsys.readouterr().out
    assert out.startswith("aw-verify")
    assert "FAIL" in out and "witness=" in out


def test_fail_requires_witness():
    with pytest.raises(ValueError):
        VerificationReport("x").fail(None)
    assert VerificationReport("x").fail("w").status == FAIL


def test_custom_samples_change_points():
    reps = run_suite("centralizer-dims", Options(spins=[(H, H, H)], samples=3, seed=7))
    dim = next(r for r in reps if r.check_id == "centralizer-dim")
    assert dim.passed and len(dim.samples) == 3


def test_exhausted_sampling_becomes_unsupported(monkeypatch):
    from awcentralizer import centralizer
    from awcentralizer.errors import PoleAtSample

    def pole(*args, **kwargs):
        raise PoleAtSample("no pole-free sample")

    monkeypatch.setattr(centralizer, "check_centralizer_dim", pole)
    rep = run_task(Task("centralizer.check_centralizer_dim", ((H, H, H),), (), "centralizer-dim", (H, H, H)))
    assert rep.status == UNSUPPORTED
