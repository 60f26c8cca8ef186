"""Headless simulated players for sweeping rehearsal configurations.

Each simulated player plays one session per day. Avatar-challenge accuracy
follows a pluggable model (perfect, fixed probability, or exponential
forgetting with rehearsal reset); standard challenges are always answered
correctly since they exercise general knowledge, not avatar memory.

The progression gate decides each day's session mix: recognition-stage days
run the default program, advanced days run a recall-dominant one. At the end
of every day the player faces a dry-run reset check under the verification
policy. Output is one CSV row per player-day, byte-identical for a fixed
seed.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone
from typing import IO

from .authgate import VerifyPolicy
from .avatars import AvatarProfile, derived_rng, generate_profile
from .challenges import AvatarChallenge, ChallengeKind, answer_for
from .content import ContentPack
from .engagement import Progression, ProgressionPolicy, progression_decision
from .errors import GameError
from .sessions import BadgeKind, SessionConfig, SessionEngine, SessionState

# Fixed epoch so simulated timestamps never depend on the wall clock.
SIM_EPOCH = datetime(2025, 1, 1, 18, 0, tzinfo=timezone.utc)
SECONDS_PER_TURN = 20

CSV_COLUMNS = [
    "player",
    "day",
    "stage",
    "session_completed",
    "score",
    "cumulative_score",
    "recognition_correct",
    "recall_correct",
    "badge_smiley",
    "badge_cake",
    "badge_trophy",
    "would_pass_reset",
]


class ModelParseError(GameError):
    code = "invalid_model"


@dataclass(frozen=True)
class AccuracyModel:
    """Probability that a simulated player answers an avatar challenge
    correctly, given days since the attribute was last rehearsed."""

    name: str = "always_correct"
    fixed_p: float = 1.0
    decay_rate: float | None = None

    def probability(self, kind: ChallengeKind, days_since_rehearsal: int) -> float:
        if self.decay_rate is None:
            return self.fixed_p
        # recognition halves the effective decay: picking from options is
        # easier than reproducing the word
        rate = self.decay_rate / 2 if kind is ChallengeKind.RECOGNITION else self.decay_rate
        return math.exp(-rate * max(0, days_since_rehearsal))


def parse_model(spec: str) -> AccuracyModel:
    """Parse ``always_correct``, ``fixed:P`` (0 <= P <= 1), or ``decay:RATE``."""
    if spec == "always_correct":
        return AccuracyModel()
    if spec.startswith("fixed:"):
        try:
            p = float(spec.split(":", 1)[1])
        except ValueError:
            raise ModelParseError(f"bad fixed model {spec!r}")
        if not 0.0 <= p <= 1.0:
            raise ModelParseError(f"fixed probability must be in [0, 1], got {p}")
        return AccuracyModel(name=f"fixed({p})", fixed_p=p)
    if spec.startswith("decay:"):
        try:
            rate = float(spec.split(":", 1)[1])
        except ValueError:
            raise ModelParseError(f"bad decay model {spec!r}")
        if rate < 0:
            raise ModelParseError(f"decay rate must be >= 0, got {rate}")
        return AccuracyModel(name=f"decay({rate})", decay_rate=rate)
    raise ModelParseError(
        f"unknown accuracy model {spec!r}; expected always_correct, fixed:P, or decay:RATE"
    )


ADVANCED_CONFIG = SessionConfig(
    standard_count=7, recognition_quota=1, recall_quota=5, daily_quota=6
)


@dataclass(frozen=True)
class SimulationSettings:
    players: int = 1
    days: int = 1
    model: AccuracyModel = field(default_factory=AccuracyModel)
    policy: ProgressionPolicy = field(default_factory=ProgressionPolicy)
    reset_policy: VerifyPolicy = field(default_factory=VerifyPolicy)
    seed: int = 0
    base_config: SessionConfig = field(default_factory=SessionConfig)
    advanced_config: SessionConfig = ADVANCED_CONFIG
    # safety valve: a hopeless player (e.g. fixed:0) never meets the avatar
    # quotas, so a day is abandoned after this many submissions
    max_turns: int = 200

    def __post_init__(self) -> None:
        if self.players < 1 or self.days < 1:
            raise ValueError("players and days must be >= 1")


@dataclass
class SimulationResult:
    rows: list[dict[str, object]]
    sessions: list[SessionState]


def _play_day(
    engine: SessionEngine,
    pack: ContentPack,
    profile: AvatarProfile,
    player_id: str,
    day: int,
    config: SessionConfig,
    model: AccuracyModel,
    rehearsed_day: dict[str, int],
    history: list[tuple[datetime, bool]],
    seed: int,
    max_turns: int,
) -> SessionState:
    now = SIM_EPOCH + timedelta(days=day - 1)
    rng = derived_rng(seed, "answers", player_id, day)
    state = engine.start_session(
        player_id,
        seed=derived_rng(seed, "session", player_id, day).getrandbits(63),
        now=now,
        config=config,
        session_id=f"{player_id}-day{day:03d}",
    )
    turns = 0
    while not state.ended and turns < max_turns:
        challenge = pack.challenge_by_id(state.pending_id)
        kind = state.pending_kind
        if kind is ChallengeKind.STANDARD:
            correct = True
        else:
            assert isinstance(challenge, AvatarChallenge)
            since = day - rehearsed_day.get(challenge.attribute_id, 0)
            correct = rng.random() < model.probability(kind, since)
        answer = answer_for(challenge, profile)
        submission = answer if correct else f"wrong {answer}"
        now += timedelta(seconds=SECONDS_PER_TURN)
        state, verdict, _ = engine.submit(state, submission, now)
        turns += 1
        if kind is not ChallengeKind.STANDARD:
            assert isinstance(challenge, AvatarChallenge)
            if verdict.correct:
                rehearsed_day[challenge.attribute_id] = day
            if kind is ChallengeKind.RECOGNITION:
                history.append((now, verdict.correct))
    return state


def _would_pass_reset(
    pack: ContentPack,
    model: AccuracyModel,
    reset_policy: VerifyPolicy,
    rehearsed_day: dict[str, int],
    player_id: str,
    day: int,
    seed: int,
) -> bool:
    """Dry-run reset at day end: reset questions are typed free-text, so the
    recall probability applies."""
    rng = derived_rng(seed, "reset", player_id, day)
    attribute_ids = [a.attribute_id for a in pack.attributes]
    questions = rng.sample(attribute_ids, reset_policy.k)
    correct = 0
    for attribute_id in questions:
        since = day - rehearsed_day.get(attribute_id, 0)
        if rng.random() < model.probability(ChallengeKind.RECALL, since):
            correct += 1
    return correct >= reset_policy.m


def run_simulation(settings: SimulationSettings, pack: ContentPack) -> SimulationResult:
    rows: list[dict[str, object]] = []
    sessions: list[SessionState] = []
    for index in range(1, settings.players + 1):
        player_id = f"sim{index:03d}"
        profile = generate_profile(
            derived_rng(settings.seed, "profile", player_id).getrandbits(63),
            pack.attributes,
            pack.value_pools,
            profile_id=f"profile-{player_id}",
        )
        engine = SessionEngine(pack, profile)
        rehearsed_day: dict[str, int] = {a.attribute_id: 0 for a in pack.attributes}
        history: list[tuple[datetime, bool]] = []
        cumulative = 0
        for day in range(1, settings.days + 1):
            day_start = SIM_EPOCH + timedelta(days=day - 1)
            stage = progression_decision(history, settings.policy, day_start)
            config = (
                settings.advanced_config
                if stage is Progression.ADVANCE_RECALL
                else settings.base_config
            )
            state = _play_day(
                engine,
                pack,
                profile,
                player_id,
                day,
                config,
                settings.model,
                rehearsed_day,
                history,
                settings.seed,
                settings.max_turns,
            )
            sessions.append(state)
            cumulative += state.score
            badges = {badge.kind for badge in state.badges}
            rows.append(
                {
                    "player": player_id,
                    "day": day,
                    "stage": "recall" if stage is Progression.ADVANCE_RECALL else "recognition",
                    "session_completed": int(state.ended),
                    "score": state.score,
                    "cumulative_score": cumulative,
                    "recognition_correct": state.recognition_done,
                    "recall_correct": state.recall_done,
                    "badge_smiley": int(BadgeKind.SMILEY in badges),
                    "badge_cake": int(BadgeKind.CAKE in badges),
                    "badge_trophy": int(BadgeKind.TROPHY in badges),
                    "would_pass_reset": int(
                        _would_pass_reset(
                            pack,
                            settings.model,
                            settings.reset_policy,
                            rehearsed_day,
                            player_id,
                            day,
                            settings.seed,
                        )
                    ),
                }
            )
    return SimulationResult(rows=rows, sessions=sessions)


def write_csv(rows: list[dict[str, object]], stream: IO[str]) -> None:
    """RFC-4180-style CSV with a header row."""
    writer = csv.DictWriter(stream, fieldnames=CSV_COLUMNS, lineterminator="\r\n")
    writer.writeheader()
    writer.writerows(rows)
