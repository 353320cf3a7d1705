"""Command line interface: commands, formats, exit codes, determinism."""

import json

import pytest

from torf.cli import main
from torf.fixtures import broken_fixture_names, fixture_names
from torf.model import SCHEMA


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def write_fixture(capsys, tmp_path, name):
    code, out, err = run(capsys, "fixtures", name)
    assert code == 0, err
    path = tmp_path / f"{name}.json"
    path.write_text(out)
    return str(path)


class TestFixturesCommand:
    def test_all_valid_fixtures_roundtrip(self, capsys, tmp_path):
        for name in fixture_names():
            path = write_fixture(capsys, tmp_path, name)
            code, out, _err = run(capsys, "validate", path)
            assert code == 0, name
            assert "valid monoidal complex" in out

    def test_unknown_fixture(self, capsys):
        code, _out, err = run(capsys, "fixtures", "no-such-thing")
        assert code == 1
        assert "unknown fixture" in err

    def test_fixture_output_is_schema(self, capsys):
        _code, out, _err = run(capsys, "fixtures", "pinch")
        doc = json.loads(out)
        assert doc["schema"] == SCHEMA


class TestValidate:
    @pytest.mark.parametrize("name,expected", [
        ("broken-missing-face", "MissingFace"),
        ("broken-overlap", "BadIntersection"),
        ("broken-incompatible", "CompatibilityFailure"),
    ])
    def test_broken_rejected(self, capsys, tmp_path, name, expected):
        path = write_fixture(capsys, tmp_path, name)
        code, out, _err = run(capsys, "validate", path)
        assert code == 2
        assert expected in out

    def test_parse_error_exit_one(self, capsys, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{"schema": "torf-1", "surprise": true}')
        code, _out, err = run(capsys, "validate", str(path))
        assert code == 1
        assert "unknown keys" in err

    def test_unreadable_file(self, capsys, tmp_path):
        code, _out, err = run(capsys, "validate", str(tmp_path / "absent.json"))
        assert code == 1

    def test_non_integer_rejected(self, capsys, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({
            "schema": SCHEMA,
            "ambient_rank": "1",
            "cones": {"r": [["1.5"]]},
            "fan": {"face_closure_of": ["r"]},
        }))
        code, _out, err = run(capsys, "validate", str(path))
        assert code == 1


class TestClassify:
    def test_pinch_verdicts(self, capsys, tmp_path):
        path = write_fixture(capsys, tmp_path, "pinch")
        code, out, _err = run(capsys, "classify", path, "--format", "machine")
        assert code == 0
        body = json.loads(out)
        res = body["results"]
        assert res["seminormal"] is True
        assert res["weakly_normal"]["2"] is False
        assert res["weakly_normal"]["3"] is True
        assert res["weakly_normal"]["5"] is True
        assert res["weakly_normal"]["0"] is True

    def test_numeric_semigroup_not_sn(self, capsys, tmp_path):
        path = write_fixture(capsys, tmp_path, "numeric-semigroup-2-3")
        code, out, _err = run(capsys, "classify", path, "--format", "machine")
        assert code == 0
        assert json.loads(out)["results"]["seminormal"] is False

    def test_normal_crossings_all_p(self, capsys, tmp_path):
        path = write_fixture(capsys, tmp_path, "normal-crossings-2-1")
        code, out, _err = run(
            capsys, "classify", path,
            "--char", "2", "--char", "3", "--char", "7", "--format", "machine",
        )
        assert code == 0
        wn = json.loads(out)["results"]["weakly_normal"]
        assert all(wn.values())


class TestNormalize:
    def test_pinch_wn_two(self, capsys, tmp_path):
        path = write_fixture(capsys, tmp_path, "pinch")
        code, out, _err = run(
            capsys, "normalize", path,
            "--mode", "wn", "--char", "2", "--format", "machine",
        )
        assert code == 0
        res = json.loads(out)["results"]
        assert res["already_normal"] is False
        top = max(res["cones"], key=lambda c: c["cone"]["dim"])
        assert sorted(top["generators"]) == [["0", "1"], ["1", "0"]]

    def test_sn_of_numeric_semigroup(self, capsys, tmp_path):
        path = write_fixture(capsys, tmp_path, "numeric-semigroup-2-3")
        code, out, _err = run(capsys, "normalize", path, "--mode", "sn",
                              "--format", "machine")
        assert code == 0
        res = json.loads(out)["results"]
        top = max(res["cones"], key=lambda c: c["cone"]["dim"])
        assert top["generators"] == [["1"]]

    def test_already_normal(self, capsys, tmp_path):
        path = write_fixture(capsys, tmp_path, "affine-2")
        code, out, _err = run(capsys, "normalize", path, "--format", "machine")
        assert code == 0
        assert json.loads(out)["results"]["already_normal"] is True


class TestBetti:
    @pytest.mark.parametrize("name,expected", [
        ("torus-1", ["1", "1"]),
        ("torus-2", ["1", "2", "1"]),
        ("affine-2", ["1", "0", "0"]),
        ("normal-crossings-2-1", ["1", "0", "0"]),
    ])
    def test_values(self, capsys, tmp_path, name, expected):
        path = write_fixture(capsys, tmp_path, name)
        code, out, _err = run(capsys, "betti", path, "--format", "machine")
        assert code == 0
        assert json.loads(out)["results"]["betti"] == expected

    def test_theoretical_agrees(self, capsys, tmp_path):
        path = write_fixture(capsys, tmp_path, "torus-2")
        _c, out1, _e = run(capsys, "betti", path, "--format", "machine")
        _c, out2, _e = run(capsys, "betti", path, "--theoretical",
                           "--format", "machine")
        assert json.loads(out1)["results"]["betti"] == json.loads(out2)["results"]["betti"]

    def test_pair(self, capsys, tmp_path):
        path = write_fixture(capsys, tmp_path, "affine-2")
        code, out, _err = run(capsys, "betti", path, "--pair", "boundary",
                              "--format", "machine")
        assert code == 0
        assert json.loads(out)["results"]["betti"] == ["0", "0", "0"]

    def test_unknown_pair(self, capsys, tmp_path):
        path = write_fixture(capsys, tmp_path, "affine-2")
        code, _out, err = run(capsys, "betti", path, "--pair", "nope")
        assert code == 1


class TestOrbitsGermForms:
    def test_orbits(self, capsys, tmp_path):
        path = write_fixture(capsys, tmp_path, "affine-2")
        code, out, _err = run(capsys, "orbits", path, "--format", "machine")
        assert code == 0
        rows = json.loads(out)["results"]["orbits"]
        assert len(rows) == 4
        assert sum(1 for r in rows if r["closed_orbit"]) == 1
        assert sum(1 for r in rows if r["is_facet"]) == 1

    def test_germ(self, capsys, tmp_path):
        path = write_fixture(capsys, tmp_path, "affine-2")
        # find the name of a one dimensional cone in the emitted model
        _c, out, _e = run(capsys, "fixtures", "affine-2")
        doc = json.loads(out)
        ray = next(n for n, g in doc["cones"].items() if len(g) == 1)
        code, out, _err = run(capsys, "germ", path, "--cone", ray,
                              "--format", "machine")
        assert code == 0
        germ = json.loads(out)["results"]["germ_model"]
        assert len(germ["cones"]) == 2

    def test_germ_requires_cone(self, capsys, tmp_path):
        path = write_fixture(capsys, tmp_path, "affine-2")
        code, _out, err = run(capsys, "germ", path)
        assert code == 1

    def test_forms_pair(self, capsys, tmp_path):
        path = write_fixture(capsys, tmp_path, "affine-2")
        code, out, _err = run(capsys, "forms", path, "--pair", "boundary",
                              "--p", "1", "--box", "2", "--format", "machine")
        assert code == 0
        per = json.loads(out)["results"]["per_degree"]
        assert per["(1, 1)"] == "2"

    def test_forms_general(self, capsys, tmp_path):
        path = write_fixture(capsys, tmp_path, "numeric-semigroup-2-3")
        code, out, _err = run(capsys, "forms", path, "--p", "0", "--box", "3",
                              "--format", "machine")
        assert code == 0
        per = json.loads(out)["results"]["per_degree"]
        assert per["(1)"] == "1"


class TestDeterminism:
    def test_byte_identical_machine_output(self, capsys, tmp_path):
        path = write_fixture(capsys, tmp_path, "pinch")
        _c, out1, _e = run(capsys, "classify", path, "--format", "machine")
        _c, out2, _e = run(capsys, "classify", path, "--format", "machine")
        assert out1 == out2

    def test_fixture_emission_stable(self, capsys):
        _c, out1, _e = run(capsys, "fixtures", "normal-crossings-2-2")
        _c, out2, _e = run(capsys, "fixtures", "normal-crossings-2-2")
        assert out1 == out2

    def test_all_broken_fixture_names_emit(self, capsys):
        for name in broken_fixture_names():
            code, out, _err = run(capsys, "fixtures", name)
            assert code == 0
            json.loads(out)
