"""Admin and experimentation CLI.

``validate`` and ``simulate`` run locally against a content pack; ``serve``
boots the HTTP service; ``player create`` and ``reset-demo`` are thin HTTP
clients against a running service.
"""

from __future__ import annotations

import io
import json
import sys
from pathlib import Path

import click
import httpx

from . import __version__
from .authgate import VerifyPolicy
from .content import default_pack_path, load_content_pack
from .engagement import ProgressionPolicy
from .errors import PackParseError, PackValidationError
from .sessions import SessionConfig
from .simulate import (
    CSV_COLUMNS,
    SimulationSettings,
    parse_model,
    run_simulation,
    write_csv,
)

EXIT_INVALID = 1
EXIT_UNPARSEABLE = 2


def api_client(base_url: str) -> httpx.Client:
    """HTTP client for thin-client commands (overridable in tests)."""
    return httpx.Client(base_url=base_url, timeout=10.0)


@click.group()
@click.version_option(version=__version__)
def main() -> None:
    """Avatar-profile training game: admin, simulation, and client tools."""


@main.command()
@click.argument("pack_path", type=click.Path(path_type=Path))
def validate(pack_path: Path) -> None:
    """Validate a content pack file.

    Exit codes: 0 valid, 1 invalid content, 2 unreadable/unparseable file.
    """
    try:
        pack = load_content_pack(pack_path)
    except PackValidationError as exc:
        click.echo(f"INVALID: {pack_path} ({len(exc.diagnostics)} issue(s))")
        for diagnostic in exc.diagnostics:
            click.echo(f"  - {diagnostic}")
        sys.exit(EXIT_INVALID)
    except PackParseError as exc:
        click.echo(f"UNPARSEABLE: {exc.message}")
        sys.exit(EXIT_UNPARSEABLE)
    click.echo(
        f"OK: {pack.pack_id} v{pack.version}: "
        f"{len(pack.standard_challenges)} standard, "
        f"{len(pack.recognition_challenges)} recognition, "
        f"{len(pack.recall_challenges)} recall, "
        f"{len(pack.attributes)} attributes, "
        f"{len(pack.value_pools)} value pools"
    )


SIMULATE_HELP = f"""Run headless simulated players and emit per-day CSV traces.

Every player plays one session per day; output is deterministic for a fixed
--seed. CSV columns:

\b
  player               simulated player id
  day                  1-based day index
  stage                recognition|recall (progression stage that day)
  session_completed    1 if the day's session reached its end
  score                session final score
  cumulative_score     running total across days
  recognition_correct  recognition challenges solved that day
  recall_correct       recall challenges solved that day
  badge_smiley/cake/trophy   1 if earned that day
  would_pass_reset     1 if a dry-run reset (k of m questions) would pass

Accuracy models: always_correct | fixed:P | decay:RATE (P in [0,1]; RATE is
the per-day forgetting rate, halved for recognition, reset on rehearsal).
Column order: {",".join(CSV_COLUMNS)}
"""


@main.command(help=SIMULATE_HELP)
@click.option("--players", default=1, show_default=True, help="Number of simulated players.")
@click.option("--days", default=1, show_default=True, help="Days to simulate.")
@click.option("--model", "model_spec", default="always_correct", show_default=True)
@click.option("--seed", default=0, show_default=True, help="Master RNG seed.")
@click.option("--pack", "pack_path", type=click.Path(path_type=Path), default=None)
@click.option("--skill-window", default=6, show_default=True)
@click.option("--skill-threshold", default=0.8, show_default=True)
@click.option("--fallback-days", default=7, show_default=True)
@click.option("--advanced-recognition", default=1, show_default=True,
              help="Recognition quota once the recall stage unlocks.")
@click.option("--advanced-recall", default=5, show_default=True,
              help="Recall quota once the recall stage unlocks.")
@click.option("--reset-k", default=3, show_default=True)
@click.option("--reset-m", default=3, show_default=True)
@click.option("--max-turns", default=200, show_default=True)
@click.option("--out", "out_path", type=click.Path(path_type=Path), default=None,
              help="Write CSV here instead of stdout.")
def simulate(
    players: int,
    days: int,
    model_spec: str,
    seed: int,
    pack_path: Path | None,
    skill_window: int,
    skill_threshold: float,
    fallback_days: int,
    advanced_recognition: int,
    advanced_recall: int,
    reset_k: int,
    reset_m: int,
    max_turns: int,
    out_path: Path | None,
) -> None:
    pack = load_content_pack(pack_path or default_pack_path())
    settings = SimulationSettings(
        players=players,
        days=days,
        model=parse_model(model_spec),
        policy=ProgressionPolicy(
            skill_window=skill_window,
            skill_threshold=skill_threshold,
            elapsed_days_fallback=fallback_days,
        ),
        reset_policy=VerifyPolicy(k=reset_k, m=reset_m),
        seed=seed,
        advanced_config=SessionConfig(
            standard_count=7,
            recognition_quota=advanced_recognition,
            recall_quota=advanced_recall,
            daily_quota=advanced_recognition + advanced_recall,
        ),
        max_turns=max_turns,
    )
    result = run_simulation(settings, pack)
    buffer = io.StringIO()
    write_csv(result.rows, buffer)
    if out_path is None:
        click.echo(buffer.getvalue(), nl=False)
    else:
        out_path.write_text(buffer.getvalue(), encoding="utf-8", newline="")


@main.command()
@click.option("--host", envvar="AVATARQUEST_HOST", default="127.0.0.1", show_default=True)
@click.option("--port", envvar="AVATARQUEST_PORT", default=8000, show_default=True)
@click.option("--data-dir", envvar="AVATARQUEST_DATA_DIR", default="./data", show_default=True)
@click.option("--pack", envvar="AVATARQUEST_CONTENT_PACK", default=None,
              help="Content pack path (bundled sample pack when omitted).")
@click.option("--seed", envvar="AVATARQUEST_SEED", default=None, type=int,
              help="Deterministic seed override (test mode).")
def serve(host: str, port: int, data_dir: str, pack: str | None, seed: int | None) -> None:
    """Boot the HTTP service."""
    from .service import Settings, run

    run(
        Settings(
            host=host,
            port=port,
            data_dir=data_dir,
            content_pack=pack or "",
            seed=seed,
        )
    )


@main.group()
def player() -> None:
    """Player operations against a running service."""


@player.command("create")
@click.option("--api", default="http://127.0.0.1:8000", show_default=True)
@click.option("--seed", default=None, type=int, help="Profile seed (random when omitted).")
@click.option("--reveal/--no-reveal", default=True, show_default=True,
              help="Show the generated profile values for enrollment.")
def player_create(api: str, seed: int | None, reveal: bool) -> None:
    """Create a player and print the enrollment summary."""
    with api_client(api) as client:
        response = client.post(
            "/players", json={"seed": seed, "reveal_values": reveal}
        )
    if response.status_code != 201:
        click.echo(f"error: {response.status_code} {response.text}")
        sys.exit(1)
    data = response.json()
    click.echo(json.dumps(data, indent=2))
    if reveal:
        click.echo("\nStudy these values: they answer your reset questions later.")


@main.command("reset-demo")
@click.option("--api", default="http://127.0.0.1:8000", show_default=True)
@click.option("--player", "player_id", required=True)
@click.option("--answer", "answers", multiple=True, metavar="ATTRIBUTE=VALUE",
              help="Answer a question non-interactively (repeatable).")
@click.option("--seed", default=None, type=int)
def reset_demo(api: str, player_id: str, answers: tuple[str, ...], seed: int | None) -> None:
    """Walk a password-reset verification against the trained profile."""
    given = {}
    for item in answers:
        if "=" not in item:
            click.echo(f"error: --answer needs ATTRIBUTE=VALUE, got {item!r}")
            sys.exit(1)
        key, value = item.split("=", 1)
        given[key.strip()] = value.strip()

    with api_client(api) as client:
        begin = client.post(f"/auth/{player_id}/reset", json={"seed": seed})
        if begin.status_code != 201:
            click.echo(f"error: {begin.status_code} {begin.text}")
            sys.exit(1)
        attempt = begin.json()
        click.echo(f"attempt {attempt['attempt_id']}")
        submission = {}
        for question in attempt["questions"]:
            attribute_id = question["attribute_id"]
            if attribute_id in given:
                submission[attribute_id] = given[attribute_id]
                click.echo(f"  {question['question']} -> {given[attribute_id]}")
            else:
                submission[attribute_id] = click.prompt(f"  {question['question']}")
        result = client.post(
            f"/auth/{player_id}/reset/{attempt['attempt_id']}/verify",
            json={"answers": submission},
        )
    if result.status_code != 200:
        click.echo(f"error: {result.status_code} {result.text}")
        sys.exit(1)
    outcome = result.json()["outcome"]
    click.echo(f"outcome: {outcome}")
    sys.exit(0 if outcome == "granted" else 1)


if __name__ == "__main__":
    main()
