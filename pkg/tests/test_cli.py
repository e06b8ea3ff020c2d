from __future__ import annotations

import importlib
import json
from pathlib import Path

import pytest
from typer.testing import CliRunner

import formal_polylog.cli as cli_module

runner = CliRunner()


@pytest.fixture()
def cli(tmp_path: Path, monkeypatch: pytest.MonkeyPatch):
    monkeypatch.setenv("PLG_DB_PATH", str(tmp_path / "relations.jsonl"))
    monkeypatch.setenv("PLG_TIME_BUDGET_S", "30")
    monkeypatch.delenv("PLG_OUTPUT_FORMAT", raising=False)
    monkeypatch.delenv("PLG_VARIABLES", raising=False)
    return importlib.reload(cli_module)


def test_normalize_identifies_affine_images(cli) -> None:
    first = runner.invoke(cli.app, ["normalize", "cor(3, 5, 7)"])
    second = runner.invoke(cli.app, ["normalize", "cor(0, 1, 2)"])

    assert first.exit_code == 0, first.output
    assert first.output == second.output


def test_weight1_prints_the_word(cli) -> None:
    result = runner.invoke(cli.app, ["weight1", "cor(0, 4)"])

    assert result.exit_code == 0, result.output
    assert result.output.strip() == "{2: 2}"


def test_weight1_rejects_higher_weight(cli) -> None:
    result = runner.invoke(cli.app, ["weight1", "cor(0, 1, t)"])

    assert result.exit_code == 1
    assert "symbol_error" in result.output


def test_parse_errors_exit_with_one(cli) -> None:
    result = runner.invoke(cli.app, ["normalize", "cor(0, 1, q)"])

    assert result.exit_code == 1
    assert "parse_error at line 1, column 11" in result.output


def test_five_term_is_certified(cli) -> None:
    result = runner.invoke(cli.app, ["verify", "five-term", "--a", "2", "--b", "3"])

    assert result.exit_code == 0, result.output
    assert "five-term: certified tier=delta-exact weight=2" in result.output


def test_five_term_degenerate_arguments(cli) -> None:
    result = runner.invoke(cli.app, ["verify", "five-term", "--a", "t", "--b", "t"])

    assert result.exit_code == 1
    assert "field_error" in result.output


def test_structured_output(cli) -> None:
    result = runner.invoke(cli.app, ["--format", "structured", "depth", "cor(0, 1, t, s)"])

    assert result.exit_code == 0, result.output
    report = json.loads(result.output)
    assert report["record"] == "report"
    assert report["command"] == "depth"
    assert report["payload"] == {"weight": 3, "depth_bound": 2}


def test_structured_errors(cli) -> None:
    result = runner.invoke(cli.app, ["--format", "structured", "normalize", "cor(0)"])

    assert result.exit_code == 1
    error = json.loads(result.output)
    assert error["error_type"] == "parse_error"
    assert error["stage"] == "parse"


def test_unknown_format_is_a_usage_error(cli) -> None:
    result = runner.invoke(cli.app, ["--format", "bogus", "depth", "cor(0, 1, t)"])

    assert result.exit_code == 2


def test_depth_and_li_expand(cli) -> None:
    depth = runner.invoke(cli.app, ["depth", "cor(0, 1, t, s)"])
    expanded = runner.invoke(cli.app, ["li-expand", "Li[1,1](t, s)", "--lie"])

    assert depth.output.strip() == "depth <= 2"
    assert expanded.exit_code == 0, expanded.output
    assert expanded.output.splitlines()[0] == "II(0; 1, t; t*s)"
    assert len(expanded.output.splitlines()) == 2


def test_verify_shuffle_and_cyclic_depth(cli) -> None:
    shuffle = runner.invoke(cli.app, ["verify", "shuffle", "0, 1, x", "--n1", "1", "--n2", "1"])
    cyclic = runner.invoke(cli.app, ["verify", "cyclic-depth", "x, y, 1", "--i", "1"])

    assert shuffle.exit_code == 0, shuffle.output
    assert cyclic.exit_code == 0, cyclic.output
    assert "tier=depth-syntactic" in cyclic.output


def test_depth_drop_needs_a_degenerate_argument(cli) -> None:
    result = runner.invoke(cli.app, ["verify", "depth-drop", "Li[1,1](t, x)", "--var", "x", "--at", "y"])

    assert result.exit_code == 1
    assert "symbol_error" in result.output


def test_uncertified_family_exits_with_two(cli, tmp_path: Path) -> None:
    family = tmp_path / "single.txt"
    family.write_text("Li[2](t)", encoding="utf-8")

    result = runner.invoke(
        cli.app, ["derive", "--family", str(family), "--var", "t", "--from", "0", "--to", "1", "--no-establish"]
    )

    assert result.exit_code == 2
    assert "not certified tier=none" in result.output
    assert not (tmp_path / "relations.jsonl").exists()


def test_derive_list_and_replay(cli, tmp_path: Path) -> None:
    family = tmp_path / "reflection.txt"
    family.write_text("Li[2](t) + Li[2](1 - t)", encoding="utf-8")

    derived = runner.invoke(cli.app, ["derive", "--family", str(family), "--var", "t", "--from", "s", "--to", "0"])
    listed = runner.invoke(cli.app, ["relations", "list"])
    replayed = runner.invoke(cli.app, ["relations", "replay"])

    assert derived.exit_code == 0, derived.output
    assert (tmp_path / "relations.jsonl").exists()
    assert listed.exit_code == 0, listed.output
    assert "weight=2 kind=derive identity=reflection" in listed.output
    assert replayed.exit_code == 0, replayed.output
    assert "replayed 1 generator(s)" in replayed.output


def test_relations_add_refuses_uncertified_generators(cli) -> None:
    result = runner.invoke(cli.app, ["relations", "add", "Li[2](t)"])

    assert result.exit_code == 1
    assert "certificate_error" in result.output


def test_empty_database_lists_nothing(cli) -> None:
    result = runner.invoke(cli.app, ["relations", "list"])

    assert result.exit_code == 0, result.output
    assert result.output.strip() == "(empty)"


def test_selftest_command(cli) -> None:
    result = runner.invoke(cli.app, ["selftest", "--samples", "1"])

    assert result.exit_code == 0, result.output
    assert "cojacobi: ok" in result.output
