"""Embedded persistence: player records, profiles, event logs, reset attempts.

Single-writer, file-backed store. Session histories are append-only JSONL
event logs; player records and profiles are snapshot documents written
atomically. No external database.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from datetime import date, datetime
from pathlib import Path
from typing import Any, Iterable

from .authgate import ResetAttempt, ResetOutcome
from .avatars import AvatarProfile
from .engagement import ActivityLog, fold_events_into_activity
from .errors import NotFound, SequenceGap
from .events import EventKind, GameEvent, event_from_json, event_to_json
from .sessions import BadgeKind


@dataclass
class PlayerRecord:
    """Snapshot document for one enrolled player."""

    player_id: str
    profile_id: str
    enrolled_at: datetime
    activity: ActivityLog
    badges_by_day: dict[date, set[BadgeKind]] = field(default_factory=dict)
    lifetime_score: int = 0
    session_ids: list[str] = field(default_factory=list)

    def badges_on(self, day: date) -> frozenset[BadgeKind]:
        return frozenset(self.badges_by_day.get(day, set()))

    def avatar_solved_on(self, day: date) -> int:
        return self.activity.daily_correct.get(day, 0)


def _dt(value: str | None) -> datetime | None:
    return datetime.fromisoformat(value) if value else None


def _player_to_json(record: PlayerRecord) -> dict[str, Any]:
    activity = record.activity
    return {
        "player_id": record.player_id,
        "profile_id": record.profile_id,
        "enrolled_at": record.enrolled_at.isoformat(),
        "lifetime_score": record.lifetime_score,
        "session_ids": list(record.session_ids),
        "badges_by_day": {
            day.isoformat(): sorted(kind.value for kind in kinds)
            for day, kinds in record.badges_by_day.items()
        },
        "activity": {
            "last_played_at": activity.last_played_at.isoformat()
            if activity.last_played_at
            else None,
            "last_reminded_at": activity.last_reminded_at.isoformat()
            if activity.last_reminded_at
            else None,
            "stuck_since": activity.stuck_since.isoformat() if activity.stuck_since else None,
            "stuck_challenge_id": activity.stuck_challenge_id,
            "daily_correct": {
                day.isoformat(): count for day, count in activity.daily_correct.items()
            },
        },
    }


def _player_from_json(data: dict[str, Any]) -> PlayerRecord:
    raw_activity = data.get("activity", {})
    activity = ActivityLog(
        player_id=data["player_id"],
        last_played_at=_dt(raw_activity.get("last_played_at")),
        last_reminded_at=_dt(raw_activity.get("last_reminded_at")),
        stuck_since=_dt(raw_activity.get("stuck_since")),
        stuck_challenge_id=raw_activity.get("stuck_challenge_id"),
        daily_correct={
            date.fromisoformat(day): int(count)
            for day, count in raw_activity.get("daily_correct", {}).items()
        },
    )
    return PlayerRecord(
        player_id=data["player_id"],
        profile_id=data["profile_id"],
        enrolled_at=datetime.fromisoformat(data["enrolled_at"]),
        activity=activity,
        badges_by_day={
            date.fromisoformat(day): {BadgeKind(kind) for kind in kinds}
            for day, kinds in data.get("badges_by_day", {}).items()
        },
        lifetime_score=int(data.get("lifetime_score", 0)),
        session_ids=list(data.get("session_ids", [])),
    )


def _attempt_to_json(attempt: ResetAttempt) -> dict[str, Any]:
    return {
        "attempt_id": attempt.attempt_id,
        "player_id": attempt.player_id,
        "questions": list(attempt.questions),
        "submitted": dict(attempt.submitted),
        "outcome": attempt.outcome.value if attempt.outcome else None,
        "at": attempt.at.isoformat(),
        "resolved_at": attempt.resolved_at.isoformat() if attempt.resolved_at else None,
    }


def _attempt_from_json(data: dict[str, Any]) -> ResetAttempt:
    return ResetAttempt(
        attempt_id=data["attempt_id"],
        player_id=data["player_id"],
        questions=tuple(data["questions"]),
        submitted=dict(data.get("submitted", {})),
        outcome=ResetOutcome(data["outcome"]) if data.get("outcome") else None,
        at=datetime.fromisoformat(data["at"]),
        resolved_at=_dt(data.get("resolved_at")),
    )


class GameStore:
    """File-backed store rooted at a data directory."""

    def __init__(self, data_dir: str | Path):
        self.root = Path(data_dir)
        for sub in ("players", "profiles", "sessions", "attempts"):
            (self.root / sub).mkdir(parents=True, exist_ok=True)
        self._last_seq: dict[str, int] = {}

    # -- atomic snapshot writes -------------------------------------------

    @staticmethod
    def _write_json(path: Path, data: dict[str, Any]) -> None:
        tmp = path.with_suffix(".tmp")
        tmp.write_text(json.dumps(data, indent=2, ensure_ascii=False), encoding="utf-8")
        os.replace(tmp, path)

    # -- profiles -----------------------------------------------------------

    def save_profile(self, profile: AvatarProfile) -> None:
        self._write_json(
            self.root / "profiles" / f"{profile.profile_id}.json",
            {
                "profile_id": profile.profile_id,
                "seed": profile.seed,
                "assignments": dict(profile.assignments),
                "created_at": profile.created_at.isoformat() if profile.created_at else None,
            },
        )

    def load_profile(self, profile_id: str) -> AvatarProfile:
        path = self.root / "profiles" / f"{profile_id}.json"
        if not path.exists():
            raise NotFound(f"profile {profile_id!r} not found")
        data = json.loads(path.read_text(encoding="utf-8"))
        return AvatarProfile(
            profile_id=data["profile_id"],
            seed=int(data["seed"]),
            assignments=dict(data["assignments"]),
            created_at=_dt(data.get("created_at")),
        )

    # -- players ------------------------------------------------------------

    def save_player(self, record: PlayerRecord) -> None:
        self._write_json(
            self.root / "players" / f"{record.player_id}.json", _player_to_json(record)
        )

    def load_player(self, player_id: str) -> PlayerRecord:
        path = self.root / "players" / f"{player_id}.json"
        if not path.exists():
            raise NotFound(f"player {player_id!r} not found")
        return _player_from_json(json.loads(path.read_text(encoding="utf-8")))

    def has_player(self, player_id: str) -> bool:
        return (self.root / "players" / f"{player_id}.json").exists()

    def player_ids(self) -> list[str]:
        return sorted(p.stem for p in (self.root / "players").glob("*.json"))

    # -- session event logs ---------------------------------------------------

    def _session_path(self, session_id: str) -> Path:
        return self.root / "sessions" / f"{session_id}.jsonl"

    def last_seq(self, session_id: str) -> int:
        if session_id in self._last_seq:
            return self._last_seq[session_id]
        path = self._session_path(session_id)
        last = 0
        if path.exists():
            with path.open(encoding="utf-8") as fh:
                for line in fh:
                    if line.strip():
                        last = json.loads(line)["seq"]
        self._last_seq[session_id] = last
        return last

    def append_event(self, session_id: str, event: GameEvent) -> int:
        """Durably append one event. ``seq`` must follow the previous one."""
        expected = self.last_seq(session_id) + 1
        if event.seq != expected:
            raise SequenceGap(
                f"session {session_id}: expected seq {expected}, got {event.seq}"
            )
        path = self._session_path(session_id)
        with path.open("a", encoding="utf-8") as fh:
            fh.write(json.dumps(event_to_json(event), ensure_ascii=False) + "\n")
            fh.flush()
            os.fsync(fh.fileno())
        self._last_seq[session_id] = event.seq
        return event.seq

    def append_events(self, session_id: str, events: Iterable[GameEvent]) -> None:
        for event in events:
            self.append_event(session_id, event)

    def read_events(self, session_id: str) -> list[GameEvent]:
        path = self._session_path(session_id)
        if not path.exists():
            raise NotFound(f"session {session_id!r} has no event log")
        events = []
        with path.open(encoding="utf-8") as fh:
            for line in fh:
                if line.strip():
                    events.append(event_from_json(json.loads(line)))
        return events

    def has_session(self, session_id: str) -> bool:
        return self._session_path(session_id).exists()

    def session_ids(self) -> list[str]:
        return sorted(p.stem for p in (self.root / "sessions").glob("*.jsonl"))

    # -- reset attempts -------------------------------------------------------

    def _attempts_path(self, player_id: str) -> Path:
        return self.root / "attempts" / f"{player_id}.jsonl"

    def record_attempt(self, attempt: ResetAttempt) -> None:
        """Append the attempt's current state; the latest line per id wins."""
        with self._attempts_path(attempt.player_id).open("a", encoding="utf-8") as fh:
            fh.write(json.dumps(_attempt_to_json(attempt), ensure_ascii=False) + "\n")
            fh.flush()
            os.fsync(fh.fileno())

    def load_attempts(self, player_id: str) -> list[ResetAttempt]:
        path = self._attempts_path(player_id)
        if not path.exists():
            return []
        by_id: dict[str, ResetAttempt] = {}
        with path.open(encoding="utf-8") as fh:
            for line in fh:
                if line.strip():
                    attempt = _attempt_from_json(json.loads(line))
                    by_id[attempt.attempt_id] = attempt
        return sorted(by_id.values(), key=lambda a: (a.at, a.attempt_id))

    def load_attempt(self, player_id: str, attempt_id: str) -> ResetAttempt:
        for attempt in self.load_attempts(player_id):
            if attempt.attempt_id == attempt_id:
                return attempt
        raise NotFound(f"reset attempt {attempt_id!r} not found")


def apply_session_events(record: PlayerRecord, events: Iterable[GameEvent]) -> None:
    """Fold freshly emitted session events into a player record."""
    events = list(events)
    fold_events_into_activity(record.activity, events)
    for event in events:
        if event.kind is EventKind.BADGE:
            day = event.at.date()
            kinds = record.badges_by_day.setdefault(day, set())
            kinds.add(BadgeKind(event.payload["kind"]))
        elif event.kind is EventKind.SESSION_END:
            record.lifetime_score += int(event.payload["final_score"])
