"""Session state machine: alternating challenges, scoring, badges, hints.

A session walks a fixed daily program: a randomized pool of standard
challenges interleaved with avatar challenges, recognition ones first, recall
ones after the recognition quota is met. Avatar challenges repeat until
solved; standard challenges are consumed whatever the verdict. The session
ends once every avatar quota is met and the standard pool is drained.

All transitions are pure (state in, state out) with timestamps injected, so a
session can be reconstructed exactly by replaying its event log.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from datetime import datetime
from enum import Enum
from typing import TYPE_CHECKING, Iterable, Mapping, Sequence

from .avatars import AvatarProfile
from .challenges import (
    AvatarChallenge,
    Challenge,
    ChallengeKind,
    ChallengeView,
    HintKind,
    Verdict,
    answer_for,
    apply_hint,
    check_answer,
    present,
)
from .engagement import hint_cost
from .errors import (
    InsufficientContent,
    InsufficientPoints,
    InvalidQuota,
    InvalidSessionConfig,
    NoPendingChallenge,
    SessionEnded,
)
from .events import EventKind, GameEvent

if TYPE_CHECKING:
    from .content import ContentPack

from .avatars import derived_rng


class Phase(str, Enum):
    RECOGNITION = "recognition_phase"
    RECALL = "recall_phase"
    ENDED = "ended"


class BadgeKind(str, Enum):
    SMILEY = "smiley"
    CAKE = "cake"
    TROPHY = "trophy"


REWARDS: Mapping[ChallengeKind, int] = {
    ChallengeKind.STANDARD: 10,
    ChallengeKind.RECOGNITION: 15,
    ChallengeKind.RECALL: 20,
}


def reward_for(kind: ChallengeKind) -> int:
    return REWARDS[kind]


def penalty_for(kind: ChallengeKind) -> int:
    """Wrong answers cost half the reward, floored (5 / 7 / 10)."""
    return REWARDS[kind] // 2


@dataclass(frozen=True)
class SessionConfig:
    """Daily program shape. Defaults match the prototype session."""

    standard_count: int = 7
    recognition_quota: int = 3
    recall_quota: int = 3
    daily_quota: int = 6

    def __post_init__(self) -> None:
        if self.standard_count < 1:
            raise InvalidSessionConfig("standard_count must be >= 1")
        if self.recognition_quota < 0 or self.recall_quota < 0:
            raise InvalidSessionConfig("quotas must be >= 0")
        if self.recognition_quota + self.recall_quota < 1:
            raise InvalidSessionConfig("at least one avatar challenge per session")
        if self.daily_quota < 2:
            raise InvalidSessionConfig("daily_quota must be >= 2")

    def to_payload(self) -> dict[str, int]:
        return {
            "standard_count": self.standard_count,
            "recognition_quota": self.recognition_quota,
            "recall_quota": self.recall_quota,
            "daily_quota": self.daily_quota,
        }


@dataclass(frozen=True)
class Badge:
    kind: BadgeKind
    awarded_at: datetime
    avatar_solved_count_at_award: int


def award_badges(
    avatar_solved_today: int,
    daily_quota: int,
    already: Iterable[BadgeKind],
) -> list[BadgeKind]:
    """Badges newly earned at this solved count, at most one of each per day.

    smiley on the first solved avatar challenge, cake at half the daily
    quota, trophy at the full quota.
    """
    if daily_quota < 2:
        raise InvalidQuota("daily_quota must be >= 2")
    owned = set(already)
    thresholds = (
        (BadgeKind.SMILEY, 1),
        (BadgeKind.CAKE, math.ceil(daily_quota / 2)),
        (BadgeKind.TROPHY, daily_quota),
    )
    return [
        kind
        for kind, threshold in thresholds
        if avatar_solved_today >= threshold and kind not in owned
    ]


@dataclass(frozen=True)
class SessionState:
    """Immutable snapshot of one running session."""

    session_id: str
    player_id: str
    pack_id: str
    seed: int
    config: SessionConfig
    phase: Phase
    standard_queue: tuple[str, ...]
    recognition_queue: tuple[str, ...]
    recall_queue: tuple[str, ...]
    recognition_done: int
    recall_done: int
    standard_answered: int
    pending_id: str | None
    pending_kind: ChallengeKind | None
    pending_view: ChallengeView | None
    score: int
    badges: tuple[Badge, ...]
    prior_avatar_solved: int
    prior_badges: frozenset[BadgeKind]
    presented_ids: frozenset[str]
    wrong_streaks: Mapping[str, int]
    saved_views: Mapping[str, ChallengeView]
    event_log: tuple[GameEvent, ...]

    @property
    def ended(self) -> bool:
        return self.phase is Phase.ENDED

    @property
    def avatar_solved(self) -> int:
        return self.recognition_done + self.recall_done

    @property
    def avatar_solved_today(self) -> int:
        return self.prior_avatar_solved + self.avatar_solved

    @property
    def next_seq(self) -> int:
        return len(self.event_log) + 1

    @property
    def badge_kinds(self) -> frozenset[BadgeKind]:
        return self.prior_badges | {badge.kind for badge in self.badges}


def _build_avatar_queue(spec_ids: Sequence[str], quota: int, rng) -> tuple[str, ...]:
    """Seeded queue of avatar challenge ids covering the quota.

    When the quota exceeds the number of distinct specs, specs repeat in
    fresh shuffled rounds (rehearsal naturally revisits the same material),
    avoiding immediate back-to-back repeats where possible.
    """
    queue: list[str] = []
    while len(queue) < quota:
        round_ids = list(spec_ids)
        rng.shuffle(round_ids)
        if queue and len(round_ids) > 1 and round_ids[0] == queue[-1]:
            round_ids[0], round_ids[1] = round_ids[1], round_ids[0]
        queue.extend(round_ids)
    return tuple(queue[:quota])


class SessionEngine:
    """Applies session transitions for one (content pack, profile) pair."""

    def __init__(self, content: "ContentPack", profile: AvatarProfile):
        self.content = content
        self.profile = profile

    # -- construction -----------------------------------------------------

    def start_session(
        self,
        player_id: str,
        seed: int,
        now: datetime,
        config: SessionConfig | None = None,
        session_id: str | None = None,
        prior_avatar_solved: int = 0,
        prior_badges: frozenset[BadgeKind] = frozenset(),
    ) -> SessionState:
        config = config or SessionConfig()
        content = self.content
        if len(content.standard_challenges) < config.standard_count:
            raise InsufficientContent(
                f"pack has {len(content.standard_challenges)} standard challenges, "
                f"session needs {config.standard_count}"
            )
        recognition_specs = [c.challenge_id for c in content.recognition_challenges]
        recall_specs = [c.challenge_id for c in content.recall_challenges]
        if config.recognition_quota > 0 and not recognition_specs:
            raise InsufficientContent("pack has no recognition avatar challenges")
        if config.recall_quota > 0 and not recall_specs:
            raise InsufficientContent("pack has no recall avatar challenges")

        standard_ids = [c.challenge_id for c in content.standard_challenges]
        standard_queue = tuple(
            derived_rng(seed, "standard").sample(standard_ids, config.standard_count)
        )
        recognition_queue = _build_avatar_queue(
            recognition_specs, config.recognition_quota, derived_rng(seed, "recognition")
        )
        recall_queue = _build_avatar_queue(
            recall_specs, config.recall_quota, derived_rng(seed, "recall")
        )

        session_id = session_id or f"session-{player_id}-{seed & 0xFFFFFFFF:08x}"
        state = SessionState(
            session_id=session_id,
            player_id=player_id,
            pack_id=content.pack_id,
            seed=seed,
            config=config,
            phase=Phase.RECALL if config.recognition_quota == 0 else Phase.RECOGNITION,
            standard_queue=standard_queue,
            recognition_queue=recognition_queue,
            recall_queue=recall_queue,
            recognition_done=0,
            recall_done=0,
            standard_answered=0,
            pending_id=None,
            pending_kind=None,
            pending_view=None,
            score=0,
            badges=(),
            prior_avatar_solved=prior_avatar_solved,
            prior_badges=frozenset(prior_badges),
            presented_ids=frozenset(),
            wrong_streaks={},
            saved_views={},
            event_log=(),
        )
        start_event = GameEvent(
            seq=1,
            at=now,
            kind=EventKind.SESSION_START,
            payload={
                "session_id": session_id,
                "player_id": player_id,
                "pack_id": content.pack_id,
                "seed": seed,
                "config": config.to_payload(),
                "prior_avatar_solved": prior_avatar_solved,
                "prior_badges": sorted(kind.value for kind in prior_badges),
            },
        )
        state = replace(state, event_log=(start_event,))
        state, _ = self._present(state, standard_queue[0], ChallengeKind.STANDARD, now)
        return state

    # -- lookups -----------------------------------------------------------

    def _challenge(self, challenge_id: str) -> Challenge:
        return self.content.challenge_by_id(challenge_id)

    def _build_view(self, state: SessionState, challenge: Challenge) -> ChallengeView:
        pool = None
        if isinstance(challenge, AvatarChallenge) and challenge.kind is ChallengeKind.RECOGNITION:
            pool = self.content.pool_for_attribute(challenge.attribute_id)
        return present(challenge, self.profile, seed=state.seed, pool=pool)

    def _present(
        self,
        state: SessionState,
        challenge_id: str,
        kind: ChallengeKind,
        now: datetime,
    ) -> tuple[SessionState, GameEvent]:
        challenge = self._challenge(challenge_id)
        view = state.saved_views.get(challenge_id) or self._build_view(state, challenge)
        event = GameEvent(
            seq=state.next_seq,
            at=now,
            kind=EventKind.PRESENTED,
            payload={
                "challenge_id": challenge_id,
                "kind": kind.value,
                "repeat": challenge_id in state.presented_ids,
            },
        )
        state = replace(
            state,
            pending_id=challenge_id,
            pending_kind=kind,
            pending_view=view,
            presented_ids=state.presented_ids | {challenge_id},
            event_log=state.event_log + (event,),
        )
        return state, event

    # -- transitions -------------------------------------------------------

    def submit(
        self,
        state: SessionState,
        submission: str,
        now: datetime,
    ) -> tuple[SessionState, Verdict, list[GameEvent]]:
        """Answer the pending challenge; returns the new state, the verdict,
        and the events this step emitted."""
        if state.ended:
            raise SessionEnded(f"session {state.session_id} already ended")
        if state.pending_id is None or state.pending_kind is None:
            raise NoPendingChallenge("no challenge is pending")

        challenge_id = state.pending_id
        kind = state.pending_kind
        challenge = self._challenge(challenge_id)
        verdict = check_answer(challenge, self.profile, submission)

        delta = reward_for(kind) if verdict.correct else -penalty_for(kind)
        score = max(0, state.score + delta)
        streak = 0 if verdict.correct else state.wrong_streaks.get(challenge_id, 0) + 1
        wrong_streaks = dict(state.wrong_streaks)
        wrong_streaks[challenge_id] = streak

        emitted: list[GameEvent] = []
        config = state.config
        standard_queue = state.standard_queue
        recognition_queue = state.recognition_queue
        recall_queue = state.recall_queue
        recognition_done = state.recognition_done
        recall_done = state.recall_done
        standard_answered = state.standard_answered
        phase = state.phase
        badges = state.badges
        saved_views = dict(state.saved_views)

        if kind is ChallengeKind.STANDARD:
            # consumed regardless of verdict
            standard_queue = standard_queue[1:]
            standard_answered += 1
        elif verdict.correct:
            if kind is ChallengeKind.RECOGNITION:
                recognition_queue = recognition_queue[1:]
                recognition_done += 1
                if recognition_done >= config.recognition_quota and config.recall_quota > 0:
                    phase = Phase.RECALL
            else:
                recall_queue = recall_queue[1:]
                recall_done += 1
            saved_views.pop(challenge_id, None)
        else:
            # wrong avatar answer: keep the challenge queued, preserve any
            # hints already bought for it
            if state.pending_view is not None:
                saved_views[challenge_id] = state.pending_view

        state = replace(
            state,
            score=score,
            standard_queue=standard_queue,
            recognition_queue=recognition_queue,
            recall_queue=recall_queue,
            recognition_done=recognition_done,
            recall_done=recall_done,
            standard_answered=standard_answered,
            phase=phase,
            wrong_streaks=wrong_streaks,
            saved_views=saved_views,
            pending_id=None,
            pending_kind=None,
            pending_view=None,
        )

        answered = GameEvent(
            seq=state.next_seq,
            at=now,
            kind=EventKind.ANSWERED,
            payload={
                "challenge_id": challenge_id,
                "kind": kind.value,
                "submission": submission,
                "normalized": verdict.normalized_submission,
                "correct": verdict.correct,
                "delta": delta,
                "score": score,
                "recognition_done": recognition_done,
                "recall_done": recall_done,
                "wrong_streak": streak,
            },
        )
        state = replace(state, event_log=state.event_log + (answered,))
        emitted.append(answered)

        if kind is not ChallengeKind.STANDARD and verdict.correct:
            state, badge_events = self._award_badges(state, now)
            emitted.extend(badge_events)

        state, tail_events = self._advance(state, kind, now)
        emitted.extend(tail_events)
        return state, verdict, emitted

    def _award_badges(
        self, state: SessionState, now: datetime
    ) -> tuple[SessionState, list[GameEvent]]:
        count = state.avatar_solved_today
        new_kinds = award_badges(count, state.config.daily_quota, state.badge_kinds)
        events: list[GameEvent] = []
        badges = state.badges
        for badge_kind in new_kinds:
            badges = badges + (Badge(badge_kind, now, count),)
            event = GameEvent(
                seq=len(state.event_log) + len(events) + 1,
                at=now,
                kind=EventKind.BADGE,
                payload={"kind": badge_kind.value, "count": count},
            )
            events.append(event)
            if badge_kind is BadgeKind.TROPHY:
                events.append(
                    GameEvent(
                        seq=len(state.event_log) + len(events) + 1,
                        at=now,
                        kind=EventKind.MILESTONE,
                        payload={"label": "daily_quota_complete", "count": count},
                    )
                )
        state = replace(state, badges=badges, event_log=state.event_log + tuple(events))
        return state, events

    def _avatar_needed(self, state: SessionState) -> bool:
        return (
            state.recognition_done < state.config.recognition_quota
            or state.recall_done < state.config.recall_quota
        )

    def _avatar_head(self, state: SessionState) -> tuple[str, ChallengeKind]:
        if state.recognition_done < state.config.recognition_quota:
            return state.recognition_queue[0], ChallengeKind.RECOGNITION
        return state.recall_queue[0], ChallengeKind.RECALL

    def _advance(
        self, state: SessionState, just_answered: ChallengeKind, now: datetime
    ) -> tuple[SessionState, list[GameEvent]]:
        """Pick the next pending challenge or end the session.

        Standard and avatar challenges alternate while the standard pool
        lasts; afterwards avatar challenges run consecutively. The session
        ends once the avatar quotas are met and the pool is drained.
        """
        avatar_needed = self._avatar_needed(state)
        if not avatar_needed and not state.standard_queue:
            end_event = GameEvent(
                seq=state.next_seq,
                at=now,
                kind=EventKind.SESSION_END,
                payload={
                    "final_score": state.score,
                    "standard_answered": state.standard_answered,
                    "recognition_done": state.recognition_done,
                    "recall_done": state.recall_done,
                    "badges": sorted(badge.kind.value for badge in state.badges),
                },
            )
            state = replace(
                state,
                phase=Phase.ENDED,
                event_log=state.event_log + (end_event,),
            )
            return state, [end_event]

        if just_answered is ChallengeKind.STANDARD:
            if avatar_needed:
                next_id, next_kind = self._avatar_head(state)
            else:
                next_id, next_kind = state.standard_queue[0], ChallengeKind.STANDARD
        else:
            if state.standard_queue:
                next_id, next_kind = state.standard_queue[0], ChallengeKind.STANDARD
            else:
                next_id, next_kind = self._avatar_head(state)

        state, event = self._present(state, next_id, next_kind, now)
        return state, [event]

    def buy_hint(
        self,
        state: SessionState,
        kind: HintKind,
        now: datetime,
    ) -> tuple[SessionState, ChallengeView, GameEvent]:
        """Spend points on a hint for the pending challenge."""
        if state.ended:
            raise SessionEnded(f"session {state.session_id} already ended")
        if state.pending_id is None or state.pending_view is None:
            raise NoPendingChallenge("no challenge is pending")
        cost = hint_cost(state.phase)
        if state.score < cost:
            raise InsufficientPoints(
                f"hint costs {cost} points, player has {state.score}"
            )
        view = self._apply_hint_to_pending(state, kind)
        score = state.score - cost
        event = GameEvent(
            seq=state.next_seq,
            at=now,
            kind=EventKind.HINT_BOUGHT,
            payload={
                "challenge_id": state.pending_id,
                "hint": kind.value,
                "cost": cost,
                "score": score,
            },
        )
        state = replace(
            state,
            score=score,
            pending_view=view,
            event_log=state.event_log + (event,),
        )
        return state, view, event

    def redeem_free_hint(
        self,
        state: SessionState,
        kind: HintKind,
        now: datetime,
    ) -> tuple[SessionState, ChallengeView, GameEvent]:
        """Apply a hint at no cost (the 24 h stuck-player allowance)."""
        if state.ended:
            raise SessionEnded(f"session {state.session_id} already ended")
        if state.pending_id is None or state.pending_view is None:
            raise NoPendingChallenge("no challenge is pending")
        view = self._apply_hint_to_pending(state, kind)
        event = GameEvent(
            seq=state.next_seq,
            at=now,
            kind=EventKind.FREE_HINT,
            payload={"challenge_id": state.pending_id, "hint": kind.value},
        )
        state = replace(
            state,
            pending_view=view,
            event_log=state.event_log + (event,),
        )
        return state, view, event

    def _apply_hint_to_pending(self, state: SessionState, kind: HintKind) -> ChallengeView:
        assert state.pending_id is not None and state.pending_view is not None
        challenge = self._challenge(state.pending_id)
        answer = answer_for(challenge, self.profile)
        return apply_hint(state.pending_view, answer, kind)

    # -- replay ------------------------------------------------------------

    def replay(self, events: Sequence[GameEvent]) -> SessionState:
        """Reconstruct a session by re-running its command-bearing events."""
        if not events or events[0].kind is not EventKind.SESSION_START:
            raise ValueError("event log must begin with a session_start event")
        start = events[0].payload
        if start["pack_id"] != self.content.pack_id:
            raise ValueError(
                f"log was recorded against pack {start['pack_id']!r}, "
                f"engine holds {self.content.pack_id!r}"
            )
        state = self.start_session(
            player_id=start["player_id"],
            seed=start["seed"],
            now=events[0].at,
            config=SessionConfig(**start["config"]),
            session_id=start["session_id"],
            prior_avatar_solved=start["prior_avatar_solved"],
            prior_badges=frozenset(BadgeKind(k) for k in start["prior_badges"]),
        )
        for event in events[1:]:
            if event.kind is EventKind.ANSWERED:
                state, _, _ = self.submit(state, event.payload["submission"], event.at)
            elif event.kind is EventKind.HINT_BOUGHT:
                state, _, _ = self.buy_hint(state, HintKind(event.payload["hint"]), event.at)
            elif event.kind is EventKind.FREE_HINT:
                state, _, _ = self.redeem_free_hint(
                    state, HintKind(event.payload["hint"]), event.at
                )
        return state
