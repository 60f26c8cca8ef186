"""Engagement mechanics: nudges, hint pricing, progression gating, and stats.

Everything here is a pure decision function over injected timestamps and
logs. Delivery (push, polling, rendering) belongs to the service layer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from datetime import date, datetime, timedelta
from enum import Enum
from typing import Iterable, Mapping, Sequence

from .avatars import derived_rng
from .challenges import ChallengeKind
from .errors import InvalidPhase, NoTemplates
from .events import EventKind, GameEvent

# Reminder fires after a full day away; a second day away counts as irregular
# play and switches the tone to disappointment. Boundaries are inclusive.
REMINDER_AFTER = timedelta(hours=24)
DISAPPOINTMENT_AFTER = timedelta(hours=48)
FREE_HINT_AFTER = timedelta(hours=24)

# A player counts as stuck after this many consecutive wrong answers on the
# same challenge.
STUCK_AFTER_WRONG_STREAK = 3

HINT_COST_RECOGNITION = 30
HINT_COST_RECALL = 50

EMOTICONS = (":-)", ";-)", ":D", "\\o/", "🙂", "🎉", "💪", "🏆")
EMOTICON_TOKEN = "{emoticon}"


class MessageKind(str, Enum):
    REMINDER = "reminder"
    RETURN_CONGRATULATION = "return_congratulation"
    MILESTONE_APPLAUSE = "milestone_applause"
    WRONG_ANSWER_ENCOURAGEMENT = "wrong_answer_encouragement"
    ABSENCE_DISAPPOINTMENT = "absence_disappointment"


class Progression(str, Enum):
    STAY_RECOGNITION = "stay_recognition"
    ADVANCE_RECALL = "advance_recall"


@dataclass(frozen=True)
class SocialMessage:
    kind: MessageKind
    text: str
    celebrate: bool = False


@dataclass(frozen=True)
class Notification:
    message: SocialMessage
    absent_for: timedelta


@dataclass
class ActivityLog:
    """Per-player play history the nudge logic decides on."""

    player_id: str
    last_played_at: datetime | None = None
    last_reminded_at: datetime | None = None
    stuck_since: datetime | None = None
    stuck_challenge_id: str | None = None
    daily_correct: dict[date, int] = field(default_factory=dict)


@dataclass(frozen=True)
class ProgressionPolicy:
    """When recall challenges unlock: skill gate with a calendar fallback."""

    skill_window: int = 6
    skill_threshold: float = 0.8
    elapsed_days_fallback: int = 7

    def __post_init__(self) -> None:
        if self.skill_window < 1:
            raise ValueError("skill_window must be >= 1")
        if not 0 < self.skill_threshold <= 1:
            raise ValueError("skill_threshold must be in (0, 1]")
        if self.elapsed_days_fallback < 1:
            raise ValueError("elapsed_days_fallback must be >= 1")

    @property
    def correct_needed(self) -> int:
        return math.ceil(self.skill_window * self.skill_threshold)


@dataclass(frozen=True)
class StatsBucket:
    day: date
    correct: int


@dataclass(frozen=True)
class StatsReport:
    range_kind: str
    buckets: tuple[StatsBucket, ...]
    total_correct: int
    stage: Progression
    remaining_to_next_stage: int


MessageCatalog = Mapping[MessageKind, Sequence[str]]


def hint_cost(phase: object) -> int:
    """Points charged for a hint in the given session phase.

    Costs ramp with difficulty: 30 while recognition challenges run, 50 once
    recall challenges are in play.
    """
    value = getattr(phase, "value", phase)
    if value == "recognition_phase":
        return HINT_COST_RECOGNITION
    if value == "recall_phase":
        return HINT_COST_RECALL
    raise InvalidPhase(f"no hint cost defined for phase {value!r}")


def social_message(catalog: MessageCatalog, kind: MessageKind, rng_seed: int) -> SocialMessage:
    """Seeded-deterministic pick of a message template for an event kind."""
    templates = catalog.get(kind)
    if not templates:
        raise NoTemplates(f"no templates loaded for {kind.value!r}")
    rng = derived_rng(rng_seed, "social", kind.value)
    template = templates[rng.randrange(len(templates))]
    emoticon = EMOTICONS[rng.randrange(len(EMOTICONS))]
    return SocialMessage(
        kind=kind,
        text=template.replace(EMOTICON_TOKEN, emoticon),
        celebrate=kind is MessageKind.MILESTONE_APPLAUSE,
    )


def next_notification(
    log: ActivityLog,
    now: datetime,
    catalog: MessageCatalog,
    rng_seed: int = 0,
) -> Notification | None:
    """Reminder decision: nudge after >= 24 h away, at most once per 24 h.

    After >= 48 h away the reminder carries the disappointment message instead
    of the neutral one.
    """
    if log.last_played_at is None:
        return None
    absent = now - log.last_played_at
    if absent < REMINDER_AFTER:
        return None
    if log.last_reminded_at is not None and now - log.last_reminded_at < REMINDER_AFTER:
        return None
    kind = (
        MessageKind.ABSENCE_DISAPPOINTMENT
        if absent >= DISAPPOINTMENT_AFTER
        else MessageKind.REMINDER
    )
    return Notification(message=social_message(catalog, kind, rng_seed), absent_for=absent)


def mark_reminded(log: ActivityLog, now: datetime) -> None:
    log.last_reminded_at = now


def free_hint_due(log: ActivityLog, now: datetime) -> bool:
    """True once a player has been stuck on the same challenge for >= 24 h."""
    return log.stuck_since is not None and now - log.stuck_since >= FREE_HINT_AFTER


def consume_free_hint(log: ActivityLog) -> None:
    log.stuck_since = None
    log.stuck_challenge_id = None


def progression_decision(
    history: Sequence[tuple[datetime, bool]],
    policy: ProgressionPolicy,
    now: datetime,
) -> Progression:
    """Decide whether recall challenges should dominate a player's schedule.

    Advances when any full window of recognition answers met the accuracy
    threshold, or when enough days have passed since the first answer. Both
    arms are monotone in history/time, so the decision never reverts once it
    advances.
    """
    ordered = sorted(history, key=lambda item: item[0])
    if not ordered:
        return Progression.STAY_RECOGNITION
    if now - ordered[0][0] >= timedelta(days=policy.elapsed_days_fallback):
        return Progression.ADVANCE_RECALL
    window = policy.skill_window
    correct_flags = [1 if correct else 0 for _, correct in ordered]
    running = sum(correct_flags[:window])
    if len(correct_flags) >= window:
        if running >= policy.correct_needed:
            return Progression.ADVANCE_RECALL
        for i in range(window, len(correct_flags)):
            running += correct_flags[i] - correct_flags[i - window]
            if running >= policy.correct_needed:
                return Progression.ADVANCE_RECALL
    return Progression.STAY_RECOGNITION


def _is_correct_avatar_answer(event: GameEvent) -> bool:
    return (
        event.kind is EventKind.ANSWERED
        and bool(event.payload.get("correct"))
        and event.payload.get("kind")
        in (ChallengeKind.RECOGNITION.value, ChallengeKind.RECALL.value)
    )


def recognition_history(events: Iterable[GameEvent]) -> list[tuple[datetime, bool]]:
    """Extract (timestamp, correct) pairs for recognition answers."""
    return [
        (event.at, bool(event.payload.get("correct")))
        for event in events
        if event.kind is EventKind.ANSWERED
        and event.payload.get("kind") == ChallengeKind.RECOGNITION.value
    ]


RANGE_DAYS = {"day": 1, "week": 7, "month": 30}


def stats(
    events: Sequence[GameEvent],
    range_kind: str,
    now: datetime,
    policy: ProgressionPolicy | None = None,
) -> StatsReport:
    """Bucket correct avatar answers per calendar day over the chosen range,
    plus how many more correct recognition answers unlock the recall stage."""
    if range_kind not in RANGE_DAYS:
        raise ValueError(f"range must be one of {sorted(RANGE_DAYS)}, got {range_kind!r}")
    policy = policy or ProgressionPolicy()
    days = RANGE_DAYS[range_kind]
    today = now.date()
    window = [today - timedelta(days=offset) for offset in range(days - 1, -1, -1)]
    counts = {day: 0 for day in window}
    for event in events:
        if _is_correct_avatar_answer(event):
            day = event.at.date()
            if day in counts:
                counts[day] += 1
    buckets = tuple(StatsBucket(day=day, correct=counts[day]) for day in window)

    history = recognition_history(events)
    stage = progression_decision(history, policy, now)
    if stage is Progression.ADVANCE_RECALL:
        remaining = 0
    else:
        recent = history[-policy.skill_window :]
        correct_recent = sum(1 for _, correct in recent if correct)
        remaining = max(0, policy.correct_needed - correct_recent)
    return StatsReport(
        range_kind=range_kind,
        buckets=buckets,
        total_correct=sum(bucket.correct for bucket in buckets),
        stage=stage,
        remaining_to_next_stage=remaining,
    )


def fold_events_into_activity(log: ActivityLog, events: Iterable[GameEvent]) -> None:
    """Update a player's activity log from freshly emitted session events."""
    for event in events:
        if event.kind is EventKind.SESSION_START:
            log.last_played_at = event.at
        elif event.kind is EventKind.ANSWERED:
            log.last_played_at = event.at
            if _is_correct_avatar_answer(event):
                day = event.at.date()
                log.daily_correct[day] = log.daily_correct.get(day, 0) + 1
            challenge_id = event.payload.get("challenge_id")
            if event.payload.get("correct") and challenge_id == log.stuck_challenge_id:
                consume_free_hint(log)
            elif (
                not event.payload.get("correct")
                and event.payload.get("wrong_streak", 0) >= STUCK_AFTER_WRONG_STREAK
                and log.stuck_since is None
            ):
                log.stuck_since = event.at
                log.stuck_challenge_id = str(challenge_id)
        elif event.kind is EventKind.FREE_HINT:
            consume_free_hint(log)
