# tests/test_cli.py

import json

import pytest

from gkatcheck import app


def run(capsys, *argv):
    code = app.main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def write(tmp_path):
    def _write(name, text):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path
    return _write


class TestCheck:
    def test_equivalent_programs(self, capsys, programs_dir):
        code, out, _ = run(capsys, "check", programs_dir / "nested-loops.gkat",
                           programs_dir / "single-loop.gkat")
        assert code == 0
        assert out == "equivalent (lang)\n"

    def test_bisim_counterexample(self, capsys, programs_dir):
        code, out, _ = run(capsys, "check", programs_dir / "p-then-fail.gkat",
                           programs_dir / "fail.gkat", "--mode", "bisim")
        assert code == 1
        assert out.startswith("inequivalent (bisim)\n")
        assert "left steps with p, right rejects" in out

    def test_language_mode_forgives_failure(self, capsys, programs_dir):
        code, _, _ = run(capsys, "check", programs_dir / "p-then-fail.gkat", programs_dir / "fail.gkat")
        assert code == 0

    def test_inclusion(self, capsys, programs_dir):
        code, out, _ = run(capsys, "check", programs_dir / "fail.gkat",
                           programs_dir / "skip.gkat", "--mode", "incl")
        assert (code, out) == (0, "included (incl)\n")
        code, out, _ = run(capsys, "check", programs_dir / "skip.gkat",
                           programs_dir / "fail.gkat", "--mode", "incl")
        assert code == 1
        assert out.startswith("not included (incl)\n")

    def test_mixed_kinds_need_embedding(self, capsys, programs_dir):
        left, right = programs_dir / "nested-loops.gkat", programs_dir / "single-loop.kat"
        code, out, err = run(capsys, "check", left, right)
        assert code == 2
        assert out == ""
        assert err.startswith("error: ") and "--via-embedding" in err
        code, out, _ = run(capsys, "check", left, right, "--via-embedding")
        assert (code, out) == (0, "equivalent (lang)\n")

    def test_max_tests_raises_the_atom_cap(self, capsys, write):
        names = " ".join(f"t{i}" for i in range(13))
        path = write("wide.gkat", f"tests: {names}\nactions: p\nif t12 then p else p\n")
        code, _, err = run(capsys, "check", path, path)
        assert code == 3
        assert "atom cap" in err
        code, out, _ = run(capsys, "check", path, path, "--max-tests", "14")
        assert (code, out) == (0, "equivalent (lang)\n")
        code, out, _ = run(capsys, "check", path, path, "--max-tests", "14", "--mode", "bisim")
        assert (code, out) == (0, "equivalent (bisim)\n")

    def test_json_output(self, capsys, programs_dir):
        code, out, _ = run(capsys, "check", programs_dir / "loop.gkat",
                           programs_dir / "unrolled-loop.gkat", "--mode", "bisim",
                           "--format", "json", "--stats")
        assert code == 0
        payload = json.loads(out)
        assert payload["equivalent"] is True and payload["mode"] == "bisim"
        assert "witness" not in payload
        assert payload["stats"]["pair_explorations"] >= 1

    def test_json_witness(self, capsys, programs_dir):
        code, out, _ = run(capsys, "check", programs_dir / "skip.gkat", programs_dir / "fail.gkat",
                           "--format", "json")
        assert code == 1
        assert json.loads(out)["witness"]

    def test_default_mode_from_config(self, capsys, programs_dir, write):
        config = write("custom.json", json.dumps({"default_mode": "bisim"}))
        code, out, _ = run(capsys, "check", programs_dir / "p-then-fail.gkat",
                           programs_dir / "fail.gkat", "--config", config)
        assert code == 1
        assert out.startswith("inequivalent (bisim)")


class TestOtherCommands:
    def test_lang_lists_every_atom(self, capsys, programs_dir):
        code, out, _ = run(capsys, "lang", programs_dir / "skip.gkat", "--bound", "2")
        assert code == 0
        assert out.splitlines() == ["{}", "{t}", "{u}", "{t,u}"]

    def test_lang_of_failure_is_empty(self, capsys, programs_dir):
        assert run(capsys, "lang", programs_dir / "fail.gkat") == (0, "", "")

    def test_lang_negative_bound(self, capsys, programs_dir):
        code, _, err = run(capsys, "lang", programs_dir / "skip.gkat", "--bound", "-1")
        assert code == 2
        assert "non-negative" in err

    def test_run_counter(self, capsys, programs_dir):
        code, out, _ = run(capsys, "run", programs_dir / "loop.gkat",
                           "--interp", programs_dir / "counter.interp.json")
        assert code == 0
        assert json.loads(out) == {"s0": "s2", "s1": "s2", "s2": "s2"}

    def test_run_divergent_loop(self, capsys, programs_dir, write):
        interp = write("one.interp.json", json.dumps(
            {"states": ["s0"], "functional": True, "tau": {"t": []}, "sigma": {"p": [["s0", "s0"]]}}))
        code, out, _ = run(capsys, "run", programs_dir / "while-true-p.gkat", "--interp", interp)
        assert (code, out) == (0, "{}\n")

    def test_run_bad_interpretation(self, capsys, programs_dir, write):
        interp = write("bad.interp.json", "{\"states\": 3}")
        code, _, err = run(capsys, "run", programs_dir / "loop.gkat", "--interp", interp)
        assert code == 2
        assert "invalid interpretation JSON" in err

    def test_dot_of_fixture(self, capsys, fixtures_dir):
        code, out, _ = run(capsys, "dot", fixtures_dir / "parity.json")
        assert code == 0
        assert out.startswith('digraph "automaton" {')
        assert '  q0 -> q0 [label="β|p1"];' in out.splitlines()

    def test_dot_json_of_program(self, capsys, programs_dir):
        code, out, _ = run(capsys, "dot", programs_dir / "loop.gkat", "--format", "json")
        assert code == 0
        payload = json.loads(out)
        assert payload["initial"] == 0
        assert payload["tests"] == ["b"] and payload["actions"] == ["e"]

    def test_stats(self, capsys):
        code, out, _ = run(capsys, "stats", "--corpus", "25", "--towers", "3,6", "--format", "json")
        assert code == 0
        payload = json.loads(out)
        assert payload["corpus"]["expressions"] == 25
        assert payload["corpus"]["bound_violations"] == 0
        assert [row["depth"] for row in payload["towers"]] == [3, 6]
        for row in payload["towers"]:
            assert row["states"] <= row["size"] + 1

    def test_stats_bad_towers(self, capsys):
        code, _, err = run(capsys, "stats", "--corpus", "1", "--towers", "3,x")
        assert code == 2
        assert "--towers" in err


class TestLaws:
    def test_list_text(self, capsys):
        code, out, _ = run(capsys, "laws", "list", "--family", "gkat")
        assert code == 0
        lines = out.splitlines()
        assert all(line.startswith("gkat.") for line in lines)
        assert any("fixpoint-unsound" in line and line.endswith("[UNSOUND]") for line in lines)
        assert any("annihilation-right" in line and "[language only]" in line for line in lines)

    def test_list_json(self, capsys):
        code, out, _ = run(capsys, "laws", "list", "--format", "json")
        assert code == 0
        families = {entry["family"] for entry in json.loads(out)["laws"]}
        assert families == {"kat", "gkat"}

    def test_check_one_law(self, capsys):
        code, out, _ = run(capsys, "laws", "check", "--law", "gkat.branch-idem", "--samples", "5")
        assert code == 0
        assert out == "ok   gkat.branch-idem: 5 instances, 0 vacuous\n"

    def test_unsound_law_reported_as_refuted(self, capsys):
        code, out, _ = run(capsys, "laws", "check", "--law", "gkat.fixpoint-unsound", "--samples", "3")
        assert code == 0
        assert "(refuted as expected)" in out

    def test_unknown_law(self, capsys):
        code, _, err = run(capsys, "laws", "check", "--law", "kat.nope")
        assert code == 2
        assert err == "error: unknown law 'kat.nope'\n"


class TestErrors:
    def test_missing_file(self, capsys, tmp_path):
        code, _, err = run(capsys, "lang", tmp_path / "absent.gkat")
        assert code == 2
        assert err.startswith("error: cannot read")

    def test_unknown_extension(self, capsys, write):
        code, _, err = run(capsys, "lang", write("prog.txt", "skip"))
        assert code == 2
        assert "expected a .gkat or .kat program file" in err

    def test_parse_error_location(self, capsys, write):
        path = write("bad.gkat", "tests: b\nactions: p\nwhile b p\n")
        code, _, err = run(capsys, "lang", path)
        assert code == 2
        assert f"{path}:3:9:" in err
        assert "expected 'do'" in err

    def test_atom_cap_is_a_resource_error(self, capsys, programs_dir):
        code, _, err = run(capsys, "lang", programs_dir / "skip.gkat", "--max-tests", "1")
        assert code == 3
        assert "atom cap" in err

    def test_oracle_ceiling(self, capsys, programs_dir, write):
        config = write("tight.json", json.dumps({"oracle_max_strings": 2}))
        code, _, err = run(capsys, "lang", programs_dir / "loop.gkat", "--bound", "3",
                           "--config", config)
        assert code == 3
        assert "limit" in err

    def test_usage_errors_exit_through_argparse(self, capsys):
        with pytest.raises(SystemExit) as exc:
            app.main(["check", "only-one.gkat"])
        assert exc.value.code == 2

    def test_forced_gkat_pipeline_rejects_kat_input(self, capsys, write):
        path = write("loop.kat", "tests: b\nactions: p\np*\n")
        code, out, err = run(capsys, "check", path, path, "--pipeline", "gkat")
        assert code == 2
        assert out == ""
        assert "gkat pipeline needs GKAT input" in err

    def test_negative_max_tests(self, capsys, programs_dir):
        code, _, err = run(capsys, "check", programs_dir / "skip.gkat", programs_dir / "skip.gkat",
                           "--max-tests", "-1")
        assert code == 2
        assert "--max-tests must be non-negative" in err

    @pytest.mark.parametrize("value", [-1, "many"])
    def test_bad_max_tests_in_config(self, capsys, programs_dir, write, value):
        config = write("bad.json", json.dumps({"max_tests": value}))
        code, _, err = run(capsys, "lang", programs_dir / "skip.gkat", "--config", config)
        assert code == 2
        assert "max_tests" in err
