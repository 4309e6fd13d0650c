"""Tests for the command-line factory and the command surface."""

from __future__ import annotations

import json
import os
from unittest import mock

import pytest

from tempcr.app import create_parser
from tempcr.app.cli import EXIT_FAILURE, EXIT_OK, EXIT_USAGE, run
from tempcr.services.storage import RunDirectory
from tempcr.tests.helpers import tiny_spec


def test_commands_registered():
    parser, _ = create_parser(["--profile", "smoke"])

    subparsers = next(action for action in parser._actions if action.dest == "command")
    expected = {
        "synth",
        "preprocess",
        "pretrain-sg",
        "train",
        "eval",
        "sweep-lambda",
        "sweep-size",
        "gradcheck",
        "curves",
    }

    assert expected == set(subparsers.choices)


def test_environment_driven_profile():
    with mock.patch.dict(os.environ, {"TEMPCR_PROFILE": "desk", "TEMPCR_SEED": "9"}, clear=False):
        _, config = create_parser([])
        _, explicit = create_parser(["--profile", "smoke"])

    assert config.NAME == "desk"
    assert config.MAX_EPOCHS == 80
    assert config.SEED == 9
    assert explicit.NAME == "smoke"


def test_profile_defaults_reach_arguments():
    parser, config = create_parser(["--profile", "smoke"])

    args = parser.parse_args(["--profile", "smoke", "train", "--train", "t.jsonl"])

    assert args.lstm_units == config.LSTM_UNITS == 8
    assert args.setting == "rc+sg"
    assert args.lambda_sg == config.LAMBDA_SG


def test_missing_required_argument_is_a_usage_error(capsys):
    assert run(["--profile", "smoke", "train"]) == EXIT_USAGE
    assert "--train" in capsys.readouterr().err


def test_unknown_setting_is_a_usage_error():
    assert run(["train", "--train", "t.jsonl", "--setting", "rc-magic"]) == EXIT_USAGE


def test_invalid_dtype_is_a_runtime_error(capsys):
    with mock.patch.dict(os.environ, {"TEMPCR_DTYPE": "float16"}, clear=False):
        assert run(["gradcheck"]) == EXIT_FAILURE
    assert capsys.readouterr().err.startswith("error: ")


def test_gradcheck_passes(capsys):
    assert run(["--profile", "smoke", "gradcheck", "--seed", "3"]) == EXIT_OK
    assert capsys.readouterr().out.startswith("max relative error ")


def test_missing_checkpoint_fails_with_one_line(tmp_path, capsys):
    corpus = tmp_path / "test.jsonl"
    corpus.write_text("", encoding="utf-8")

    code = run(["eval", "--checkpoint", str(tmp_path / "absent"), "--corpus", str(corpus)])

    assert code == EXIT_FAILURE
    err = capsys.readouterr().err
    assert err.startswith("error: ")
    assert len(err.strip().splitlines()) == 1


def test_curves_header(tmp_path):
    for seed, f_measure in ((1, 0.5), (2, 0.25)):
        run_dir = RunDirectory(tmp_path / "runs" / f"lambda-rc+sg-x0.1-s{seed}")
        run_dir.write_config({"sweep": "lambda", "setting": "rc+sg", "x": 0.1, "seed": seed})
        run_dir.write_report(
            {"overall": {"P": f_measure, "R": f_measure, "F": f_measure}, "sweep": "lambda", "setting": "rc+sg", "x": 0.1, "seed": seed}
        )

    code = run(
        ["curves", "--runs", *(str(path) for path in sorted((tmp_path / "runs").iterdir())), "--out", str(tmp_path / "out")]
    )

    assert code == EXIT_OK
    lines = (tmp_path / "out" / "lambda_curve.tsv").read_text(encoding="utf-8").splitlines()
    assert lines[0] == "setting\tx\tP\tR\tF\tseed"
    assert lines[1] == "rc+sg\t0.1\t0.500000\t0.500000\t0.500000\t1"
    assert len(lines) == 3


def test_curves_reject_runs_without_report(tmp_path):
    (tmp_path / "empty").mkdir()

    assert run(["curves", "--runs", str(tmp_path / "empty"), "--out", str(tmp_path / "out")]) == EXIT_FAILURE


@pytest.fixture()
def synthetic_dir(tmp_path):
    spec_path = tmp_path / "spec.json"
    spec_path.write_text(json.dumps(tiny_spec().to_mapping()), encoding="utf-8")
    out = tmp_path / "data"
    assert run(["--profile", "smoke", "synth", "--seed", "2", "--spec", str(spec_path), "--out", str(out)]) == EXIT_OK
    return out


def test_synth_and_preprocess(synthetic_dir, tmp_path, capsys):
    assert {path.name for path in synthetic_dir.iterdir()} >= {"train.jsonl", "dev.jsonl", "test.jsonl", "raw", "synth_spec.json"}

    code = run(
        [
            "--profile",
            "smoke",
            "preprocess",
            "--train",
            str(synthetic_dir / "train.jsonl"),
            "--raw",
            str(synthetic_dir / "raw"),
            "--out",
            str(tmp_path / "prep"),
        ]
    )

    assert code == EXIT_OK
    assert (tmp_path / "prep" / "vocab.txt").is_file()
    header = (tmp_path / "prep" / "candidates.csv").read_text(encoding="utf-8").splitlines()[0]
    assert header == "doc_id,arg1,arg2,kind,distance,label"


def _pipeline(data, work):
    common = ["--profile", "smoke"]
    train_args = ["--train", str(data / "train.jsonl"), "--raw", str(data / "raw")]
    assert run([*common, "pretrain-sg", *train_args, "--seed", "4", "--out", str(work / "sg.txt")]) == EXIT_OK
    assert (
        run(
            [
                *common,
                "train",
                *train_args,
                "--seed",
                "4",
                "--setting",
                "rc+sg",
                "--pretrained",
                str(work / "sg.txt"),
                "--max-epochs",
                "2",
                "--min-epochs",
                "1",
                "--run-dir",
                str(work / "run"),
            ]
        )
        == EXIT_OK
    )
    assert (
        run(
            [
                *common,
                "eval",
                "--checkpoint",
                str(work / "run" / "checkpoint"),
                "--corpus",
                str(data / "test.jsonl"),
                "--out",
                str(work / "metrics.json"),
            ]
        )
        == EXIT_OK
    )
    return json.loads((work / "metrics.json").read_text(encoding="utf-8"))


def test_pipeline_is_deterministic(synthetic_dir, tmp_path):
    first = _pipeline(synthetic_dir, tmp_path / "first")
    second = _pipeline(synthetic_dir, tmp_path / "second")

    assert first == second
    assert first["setting"] == "rc+sg"
    assert 0.0 <= first["overall"]["F"] <= 1.0
    assert (tmp_path / "first" / "run" / "metrics.csv").is_file()
