"""Game event records: the append-only audit trail every session produces.

Events serve two purposes: sessions can be reconstructed exactly by replaying
the command-bearing events (answers, hint purchases), and the engagement
logic derives activity statistics from them.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime
from enum import Enum
from typing import Any, Mapping


class EventKind(str, Enum):
    SESSION_START = "session_start"
    PRESENTED = "presented"
    ANSWERED = "answered"
    HINT_BOUGHT = "hint_bought"
    FREE_HINT = "free_hint"
    BADGE = "badge"
    MILESTONE = "milestone"
    SESSION_END = "session_end"


@dataclass(frozen=True)
class GameEvent:
    """One audit record. ``seq`` is strictly increasing within a session.

    Payload values are JSON primitives (plus lists of them) so that a disk
    round trip reproduces the record exactly.
    """

    seq: int
    at: datetime
    kind: EventKind
    payload: Mapping[str, Any]


def event_to_json(event: GameEvent) -> dict[str, Any]:
    return {
        "seq": event.seq,
        "at": event.at.isoformat(),
        "kind": event.kind.value,
        "payload": dict(event.payload),
    }


def event_from_json(data: Mapping[str, Any]) -> GameEvent:
    return GameEvent(
        seq=int(data["seq"]),
        at=datetime.fromisoformat(data["at"]),
        kind=EventKind(data["kind"]),
        payload=dict(data["payload"]),
    )
