import json
import subprocess
import sys

import pytest

from wnlink import cli, __version__
from wnlink.errors import InvariantError
from wnlink.pipeline import ARTIFACTS, STAGES

SMALL_FLAGS = ["--synsets", "60", "--target-words", "100", "--documents", "30", "--seed", "3"]


@pytest.fixture(scope="module")
def world(tmp_path_factory):
    out = tmp_path_factory.mktemp("cli") / "w"
    assert cli.main(["synth", str(out), *SMALL_FLAGS]) == 0
    return out


@pytest.fixture(scope="module")
def ran(world):
    ini = str(world / "pipeline.ini")
    assert cli.main(["pipeline", "-c", ini, "--emb-dim", "40", "--emb-min-count", "1"]) == 0
    return world


def test_synth_writes_config(world):
    text = (world / "pipeline.ini").read_text()
    assert "wordnet = wordnet.jsonl" in text and "workdir = work" in text


def test_pipeline_produces_every_artifact(ran, capsys):
    for name in ARTIFACTS.values():
        assert (ran / "work" / name).exists(), name
    report = json.loads((ran / "work" / "evaluation.json").read_text())
    assert report["total"]["evaluated"] > 0


def test_rerun_is_byte_identical(ran, tmp_path):
    ini = str(ran / "pipeline.ini")
    other = tmp_path / "again"
    assert cli.main(["pipeline", "-c", ini, "--emb-dim", "40", "--emb-min-count", "1",
                     "--workdir", str(other)]) == 0
    for name in ARTIFACTS.values():
        assert (other / name).read_bytes() == (ran / "work" / name).read_bytes(), name


def test_single_stage_rerun(ran):
    before = (ran / "work" / "crossval.json").read_bytes()
    assert cli.main(["crossval", "-c", str(ran / "pipeline.ini"), "--workers", "3"]) == 0
    assert (ran / "work" / "crossval.json").read_bytes() == before


def test_flags_override_config(ran):
    ini = str(ran / "pipeline.ini")
    assert cli.main(["crossval", "-c", ini, "--classifier", "knn:5", "--workdir",
                     str(ran / "work")]) == 0
    report = json.loads((ran / "work" / "crossval.json").read_text())
    assert report["classifier"] == "knn:5"
    assert cli.main(["crossval", "-c", ini]) == 0


def test_missing_dictionary(world, capsys):
    code = cli.main(["gen-candidates", "-c", str(world / "pipeline.ini"),
                     "--dictionary", "/nonexistent/dict.tsv"])
    assert code == 1
    assert "/nonexistent/dict.tsv" in capsys.readouterr().err


def test_missing_artifact(tmp_path, world, capsys):
    code = cli.main(["train", "-c", str(world / "pipeline.ini"), "--workdir", str(tmp_path / "empty")])
    assert code == 1
    assert "trainset.tsv" in capsys.readouterr().err


def test_bad_config(tmp_path, capsys):
    cfg = tmp_path / "bad.ini"
    cfg.write_text("folds = 10\nbogus = 1\n")
    assert cli.main(["stats", "-c", str(cfg)]) == 1
    assert "bogus" in capsys.readouterr().err
    cfg.write_text("folds = ten\n")
    assert cli.main(["stats", "-c", str(cfg)]) == 1
    assert "bad.ini" in capsys.readouterr().err


def test_malformed_input_names_file_and_line(tmp_path, world, capsys):
    bad = tmp_path / "dict.tsv"
    bad.write_text("a\tb\nonly-one-column\n")
    code = cli.main(["gen-candidates", "-c", str(world / "pipeline.ini"), "--dictionary", str(bad),
                     "--workdir", str(tmp_path / "w")])
    assert code == 1
    assert f"{bad}:2" in capsys.readouterr().err


def test_invariant_violation_exit_code(monkeypatch, world, capsys):
    def boom(cfg):
        raise InvariantError("broken")
    monkeypatch.setitem(STAGES, "stats", boom)
    assert cli.main(["stats", "-c", str(world / "pipeline.ini")]) == 2
    assert "broken" in capsys.readouterr().err


@pytest.mark.parametrize("sub", [[], ["pipeline"], ["synth"], ["featurize"], ["rank-features"]])
def test_help(sub, capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main([*sub, "--help"])
    assert exc.value.code == 0
    assert "usage:" in capsys.readouterr().out


def test_every_stage_has_a_subcommand():
    parser = cli.build_parser()
    sub = next(a for a in parser._actions if a.dest == "command")
    assert set(sub.choices) == set(STAGES) | {"pipeline", "synth"}


def test_version_via_module():
    res = subprocess.run([sys.executable, "-m", "wnlink", "--version"], capture_output=True, text=True)
    assert res.returncode == 0
    assert __version__ in res.stdout and "formats v1" in res.stdout
