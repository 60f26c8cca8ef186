from __future__ import annotations

import json

import pytest
from click.testing import CliRunner
from fastapi.testclient import TestClient

from avatarquest import default_pack_path
from avatarquest.cli import main
from avatarquest.service import Settings, create_app


@pytest.fixture()
def runner() -> CliRunner:
    return CliRunner()


class TestValidate:
    def test_valid_pack_exits_zero(self, runner):
        result = runner.invoke(main, ["validate", str(default_pack_path())])
        assert result.exit_code == 0
        assert result.output.startswith("OK:")

    def test_invalid_pack_exits_one_with_diagnostics(self, runner, tmp_path):
        data = json.loads(default_pack_path().read_text(encoding="utf-8"))
        data["standard_challenges"] = data["standard_challenges"][:6]
        path = tmp_path / "short.json"
        path.write_text(json.dumps(data), encoding="utf-8")
        result = runner.invoke(main, ["validate", str(path)])
        assert result.exit_code == 1
        assert "insufficient standard challenges" in result.output

    def test_unparseable_pack_exits_two(self, runner, tmp_path):
        path = tmp_path / "junk.json"
        path.write_text("]{", encoding="utf-8")
        result = runner.invoke(main, ["validate", str(path)])
        assert result.exit_code == 2
        assert "UNPARSEABLE" in result.output


class TestSimulateCommand:
    def test_perfect_player_scores_175(self, runner):
        result = runner.invoke(
            main, ["simulate", "--players", "1", "--days", "1", "--seed", "42"]
        )
        assert result.exit_code == 0
        lines = result.output.strip().splitlines()
        header = lines[0].split(",")
        row = lines[1].split(",")
        assert row[header.index("score")] == "175"

    def test_seed_reproducibility_byte_identical(self, runner):
        args = ["simulate", "--players", "2", "--days", "3",
                "--model", "fixed:0.6", "--seed", "42"]
        first = runner.invoke(main, args)
        second = runner.invoke(main, args)
        assert first.exit_code == second.exit_code == 0
        assert first.stdout_bytes == second.stdout_bytes

    def test_hopeless_model_never_earns_trophies(self, runner):
        result = runner.invoke(
            main,
            ["simulate", "--days", "2", "--model", "fixed:0", "--seed", "1",
             "--max-turns", "50"],
        )
        assert result.exit_code == 0
        lines = result.output.strip().splitlines()
        header = lines[0].split(",")
        trophy = header.index("badge_trophy")
        assert all(line.split(",")[trophy] == "0" for line in lines[1:])

    def test_out_file(self, runner, tmp_path):
        out = tmp_path / "trace.csv"
        result = runner.invoke(main, ["simulate", "--seed", "1", "--out", str(out)])
        assert result.exit_code == 0
        content = out.read_bytes()
        assert content.startswith(b"player,day,")
        assert b"\r\n" in content

    def test_invalid_model_reported(self, runner):
        result = runner.invoke(main, ["simulate", "--model", "fixed:2"])
        assert result.exit_code != 0

    def test_help_documents_columns(self, runner):
        result = runner.invoke(main, ["simulate", "--help"])
        assert result.exit_code == 0
        assert "would_pass_reset" in result.output
        assert "cumulative_score" in result.output


@pytest.fixture()
def served_app(tmp_path, monkeypatch):
    settings = Settings(data_dir=str(tmp_path / "data"), seed=7)
    app = create_app(settings)
    monkeypatch.setattr(
        "avatarquest.cli.api_client", lambda base_url: TestClient(app)
    )
    return app


class TestThinClientCommands:
    def test_player_create_prints_profile(self, runner, served_app):
        result = runner.invoke(main, ["player", "create", "--seed", "9"])
        assert result.exit_code == 0, result.output
        payload = json.loads(result.output[: result.output.rindex("}") + 1])
        assert payload["player_id"]
        assert payload["profile"]["values"]

    def test_reset_demo_granted(self, runner, served_app):
        created = runner.invoke(main, ["player", "create", "--seed", "9"])
        payload = json.loads(created.output[: created.output.rindex("}") + 1])
        player_id = payload["player_id"]
        values = payload["profile"]["values"]
        answers = [f"--answer={attr}={value}" for attr, value in values.items()]
        result = runner.invoke(
            main, ["reset-demo", "--player", player_id, "--seed", "3", *answers]
        )
        assert result.exit_code == 0, result.output
        assert "outcome: granted" in result.output

    def test_reset_demo_denied(self, runner, served_app):
        created = runner.invoke(main, ["player", "create", "--seed", "9"])
        payload = json.loads(created.output[: created.output.rindex("}") + 1])
        player_id = payload["player_id"]
        answers = [
            f"--answer={attr}=wrong" for attr in payload["profile"]["values"]
        ]
        result = runner.invoke(
            main, ["reset-demo", "--player", player_id, "--seed", "3", *answers]
        )
        assert result.exit_code == 1
        assert "outcome: denied" in result.output
