import json
import subprocess
import sys

import pytest

from lndkit.cli_runner import (
    CORPUS_SESSIONS,
    RunConfig,
    Session,
    corpus_path,
    format_session,
    main,
    parse_session,
    report_to_json,
    run,
    run_corpus,
    strip_timing,
)
from lndkit.errors import ParseError

SIMPLE = """\
ring B = poly(x, y)
derivation D on B { y -> 1 }
check nilpotent D
kernel D degree 2
"""


class TestParse:
    def test_single_ring(self):
        session = parse_session("ring B = poly(x, y)\n")
        assert len(session.declarations) == 1
        assert session.declarations[0].vars == ("x", "y")

    def test_corpus_files_parse(self):
        for name in CORPUS_SESSIONS:
            text = corpus_path(name).read_text(encoding="utf-8")
            session = parse_session(text)
            assert session.declarations and session.commands

    def test_example_6_1_objects(self):
        text = corpus_path("example_6_1.lnd").read_text(encoding="utf-8")
        session = parse_session(text)
        names = [d.name for d in session.declarations]
        for expected in ("P3", "R", "A", "B", "C", "D", "Dp", "Dt"):
            assert expected in names
        kinds = {c.kind for c in session.commands}
        assert {"check-nilpotent", "check-fpf", "grade-derivation",
                "kernel", "slice"} <= kinds

    def test_empty_image_rejected(self):
        bad = "ring B = poly(x)\nderivation D on B { x -> }\n"
        with pytest.raises(ParseError) as err:
            parse_session(bad)
        assert err.value.line == 2

    def test_undefined_name(self):
        with pytest.raises(ParseError):
            parse_session("grade D\n")

    def test_duplicate_name(self):
        with pytest.raises(ParseError):
            parse_session("ring B = poly(x)\nring B = poly(y)\n")

    def test_comments_and_blank_lines(self):
        text = "# heading\n\nring B = poly(x)  # trailing\n"
        session = parse_session(text)
        assert len(session.declarations) == 1

    def test_multiline_braces(self):
        text = """\
ring B = poly(x, y)
subalgebra S in B = gens {
    x^2,
    x^3
}
"""
        session = parse_session(text)
        assert session.declarations[1].generators == ("x^2", "x^3")

    def test_round_trip(self):
        for name in CORPUS_SESSIONS:
            text = corpus_path(name).read_text(encoding="utf-8")
            session = parse_session(text)
            again = parse_session(format_session(session))
            assert again == session

    def test_round_trip_simple(self):
        session = parse_session(SIMPLE)
        assert parse_session(format_session(session)) == session


class TestRun:
    def test_empty_session(self):
        report, code = run(Session([], []), RunConfig())
        assert code == 0
        assert report["commands"] == []

    def test_simple_session(self):
        report, code = run(parse_session(SIMPLE), RunConfig())
        assert code == 0
        kernel = report["commands"][1]
        assert kernel["value"]["generators"] == ["x"]

    def test_command_failure_does_not_abort(self):
        text = """\
ring B = poly(x)
derivation D on B { x -> x }
check nilpotent D bound 3
check fpf D
"""
        report, code = run(parse_session(text), RunConfig())
        assert code == 0  # inconclusive nilpotency is an answer, not an error
        assert report["commands"][0]["value"]["certified"] is False
        assert report["commands"][1]["status"] == "ok"

    def test_error_sets_exit_two(self):
        text = """\
ring B = poly(x)
derivation Z on B { x -> 0 }
grade Z
check fpf Z
"""
        report, code = run(parse_session(text), RunConfig())
        assert code == 2
        assert report["commands"][0]["status"] == "error"
        # later independent commands still ran
        assert report["commands"][1]["status"] == "ok"

    def test_non_restricting_derivation_fails_declaration(self):
        text = """\
ring B = poly(X)
subalgebra R in B = gens { X^2, X^3 }
derivation D on R { X -> 1 }
check fpf D
"""
        report, code = run(parse_session(text), RunConfig())
        assert code == 2
        assert report["declaration_error"]

    def test_ill_defined_quotient_derivation_rejected(self):
        text = """\
ring S = poly(u, v, w)
ring Q = quotient(S, (u*w - v^2))
derivation D on Q { w -> 1 }
check fpf D
"""
        report, code = run(parse_session(text), RunConfig())
        assert code == 2
        assert "not well defined" in report["declaration_error"]

    def test_well_defined_quotient_derivation_accepted(self):
        text = """\
ring S = poly(u, v, w)
ring Q = quotient(S, (u*w - v^2))
derivation D on Q { u -> 2*v; v -> w }
check nilpotent D
"""
        report, code = run(parse_session(text), RunConfig())
        assert code == 0
        assert report["commands"][0]["value"]["certified"] is True

    def test_seed_echoed(self):
        report, _ = run(parse_session(SIMPLE), RunConfig(seed=13))
        assert report["seed"] == 13


class TestGolden:
    def test_corpus_matches_golden(self, capsys):
        assert run_corpus(RunConfig(seed=0)) == 0
        out = capsys.readouterr().out
        assert out.count("PASS") == len(CORPUS_SESSIONS)

    def test_determinism_same_seed(self):
        name = "example_6_2.lnd"
        text = corpus_path(name).read_text(encoding="utf-8")
        payloads = []
        for _ in range(2):
            report, _ = run(parse_session(text), RunConfig(seed=5), name)
            payloads.append(report_to_json(strip_timing(report)))
        assert payloads[0] == payloads[1]

    def test_timing_present_but_stripped(self):
        report, _ = run(parse_session(SIMPLE), RunConfig())
        assert "timing" in report
        assert "timing" not in strip_timing(report)


class TestCommandLine:
    def test_run_writes_json(self, tmp_path):
        session_file = tmp_path / "s.lnd"
        session_file.write_text(SIMPLE, encoding="utf-8")
        out_file = tmp_path / "report.json"
        rc = main(["run", str(session_file), "--json", str(out_file), "--seed", "3"])
        assert rc == 0
        report = json.loads(out_file.read_text(encoding="utf-8"))
        assert report["seed"] == 3
        assert report["schema_version"] == 1

    def test_parse_error_exit_one(self, tmp_path):
        session_file = tmp_path / "bad.lnd"
        session_file.write_text("ring = poly(\n", encoding="utf-8")
        assert main(["run", str(session_file)]) == 1

    def test_missing_file_exit_one(self, tmp_path):
        assert main(["run", str(tmp_path / "absent.lnd")]) == 1

    def test_corpus_subcommand(self, capsys):
        assert main(["corpus", "--seed", "0"]) == 0

    def test_seed_env_fallback(self, tmp_path, monkeypatch):
        monkeypatch.setenv("LND_SEED", "42")
        session_file = tmp_path / "s.lnd"
        session_file.write_text(SIMPLE, encoding="utf-8")
        out_file = tmp_path / "report.json"
        assert main(["run", str(session_file), "--json", str(out_file)]) == 0
        report = json.loads(out_file.read_text(encoding="utf-8"))
        assert report["seed"] == 42

    def test_installed_entry_point(self, tmp_path):
        session_file = tmp_path / "s.lnd"
        session_file.write_text(SIMPLE, encoding="utf-8")
        proc = subprocess.run(
            [sys.executable, "-m", "lndkit.cli_runner", "run", str(session_file)],
            capture_output=True, text=True)
        assert proc.returncode == 0
        assert json.loads(proc.stdout)["schema_version"] == 1
