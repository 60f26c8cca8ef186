from __future__ import annotations

from datetime import timedelta

import pytest

from avatarquest import BadgeKind, Phase, SessionEngine
from avatarquest.challenges import ChallengeKind, HintKind, answer_for
from avatarquest.errors import (
    InsufficientContent,
    InsufficientPoints,
    InvalidQuota,
    SessionEnded,
)
from avatarquest.events import EventKind
from avatarquest.sessions import SessionConfig, award_badges

from conftest import NOW, always_correct, play_session, random_policy


def answered_events(state):
    return [e for e in state.event_log if e.kind is EventKind.ANSWERED]


def submit_pending(engine, pack, profile, state, correct, now):
    challenge = pack.challenge_by_id(state.pending_id)
    answer = answer_for(challenge, profile)
    return engine.submit(state, answer if correct else f"wrong {answer}", now)


class TestStartSession:
    def test_seven_standard_picks_and_standard_first(self, engine):
        state = engine.start_session("p", seed=1, now=NOW)
        assert len(state.standard_queue) == 7
        assert state.pending_kind is ChallengeKind.STANDARD
        assert state.phase is Phase.RECOGNITION
        assert state.score == 0

    def test_same_seed_same_first_challenge(self, engine):
        a = engine.start_session("p", seed=5, now=NOW)
        b = engine.start_session("p", seed=5, now=NOW)
        assert a.pending_id == b.pending_id
        assert a.standard_queue == b.standard_queue

    def test_insufficient_standard_content(self, pack, profile):
        engine = SessionEngine(pack, profile)
        config = SessionConfig(standard_count=len(pack.standard_challenges) + 1)
        with pytest.raises(InsufficientContent):
            engine.start_session("p", seed=1, now=NOW, config=config)


class TestScoring:
    def test_correct_standard_scores_ten(self, engine, pack, profile):
        state = engine.start_session("p", seed=1, now=NOW)
        state, verdict, _ = submit_pending(engine, pack, profile, state, True, NOW)
        assert verdict.correct and state.score == 10

    def test_recognition_then_recall_rewards(self, engine, pack, profile):
        state = play_session(engine, pack, profile, always_correct, seed=1)
        deltas = {
            e.payload["kind"]: e.payload["delta"]
            for e in answered_events(state)
            if e.payload["kind"] != "standard"
        }
        assert deltas == {"recognition": 15, "recall": 20}

    def test_wrong_standard_clamps_at_zero_and_consumes(self, engine, pack, profile):
        state = engine.start_session("p", seed=1, now=NOW)
        pool_before = state.standard_queue
        first = state.pending_id
        state, verdict, _ = submit_pending(engine, pack, profile, state, False, NOW)
        assert not verdict.correct
        assert state.score == 0  # -5 clamped
        assert first not in state.standard_queue
        assert len(state.standard_queue) == len(pool_before) - 1

    def test_wrong_deductions_are_half_reward_floored(self, engine, pack, profile):
        # drive a session with alternating right/wrong avatar answers and
        # check every delta against the 10/15/20 and -5/-7/-10 table
        expected = {"standard": (10, -5), "recognition": (15, -7), "recall": (20, -10)}
        state = play_session(engine, pack, profile, random_policy(3), seed=2)
        for event in answered_events(state):
            reward, penalty = expected[event.payload["kind"]]
            assert event.payload["delta"] in (reward, penalty)

    def test_score_equals_clamped_ledger_replay(self, engine, pack, profile):
        for seed in range(5):
            state = play_session(engine, pack, profile, random_policy(seed, 0.5), seed=seed)
            score = 0
            for event in state.event_log:
                if event.kind is EventKind.ANSWERED:
                    score = max(0, score + event.payload["delta"])
                elif event.kind is EventKind.HINT_BOUGHT:
                    score -= event.payload["cost"]
            assert score == state.score


class TestAlternationAndTraceShape:
    def test_all_correct_trace(self, engine, pack, profile):
        state = play_session(engine, pack, profile, always_correct, seed=1)
        kinds = [e.payload["kind"] for e in answered_events(state)]
        assert kinds.count("standard") == 7
        assert kinds.count("recognition") == 3
        assert kinds.count("recall") == 3
        assert state.score == 175
        assert state.ended

    def test_alternation_while_standard_pool_lasts(self, engine, pack, profile):
        state = play_session(engine, pack, profile, always_correct, seed=1)
        kinds = [e.payload["kind"] for e in answered_events(state)]
        # perfect play: strict alternation, standard first, final standard last
        assert kinds[::2] == ["standard"] * 7
        assert all(k in ("recognition", "recall") for k in kinds[1::2])

    def test_trace_shape_for_any_policy(self, engine, pack, profile):
        for seed in range(10):
            state = play_session(engine, pack, profile, random_policy(seed, 0.5), seed=seed)
            assert state.ended, "session must terminate under a 50% policy"
            events = answered_events(state)
            standards = [e for e in events if e.payload["kind"] == "standard"]
            rec_correct = [
                e for e in events if e.payload["kind"] == "recognition" and e.payload["correct"]
            ]
            recall_correct = [
                e for e in events if e.payload["kind"] == "recall" and e.payload["correct"]
            ]
            assert len(standards) == 7
            assert len(rec_correct) == 3
            assert len(recall_correct) == 3

    def test_no_recall_before_recognition_quota(self, engine, pack, profile):
        for seed in range(10):
            state = play_session(engine, pack, profile, random_policy(seed, 0.4), seed=seed)
            recognition_done = 0
            for event in answered_events(state):
                if event.payload["kind"] == "recall":
                    assert recognition_done == 3
                if event.payload["kind"] == "recognition" and event.payload["correct"]:
                    recognition_done += 1

    def test_wrong_avatar_reappears_after_next_standard(self, engine, pack, profile):
        state = engine.start_session("p", seed=1, now=NOW)
        state, _, _ = submit_pending(engine, pack, profile, state, True, NOW)
        failed = state.pending_id
        assert state.pending_kind is ChallengeKind.RECOGNITION
        state, _, _ = submit_pending(engine, pack, profile, state, False, NOW)
        assert state.pending_kind is ChallengeKind.STANDARD
        state, _, _ = submit_pending(engine, pack, profile, state, True, NOW)
        assert state.pending_id == failed

    def test_avatars_run_consecutively_once_pool_empty(self, engine, pack, profile):
        # answer avatar challenges wrong until the standard pool drains, then
        # presented challenges must all be avatar ones
        state = engine.start_session("p", seed=1, now=NOW)
        now = NOW
        while not state.ended and state.standard_queue:
            correct = state.pending_kind is ChallengeKind.STANDARD
            now += timedelta(seconds=5)
            state, _, _ = submit_pending(engine, pack, profile, state, correct, now)
        seen = []
        while not state.ended:
            seen.append(state.pending_kind)
            now += timedelta(seconds=5)
            state, _, _ = submit_pending(engine, pack, profile, state, True, now)
        assert seen and all(k is not ChallengeKind.STANDARD for k in seen)

    def test_determinism_full_trace(self, engine, pack, profile):
        a = play_session(engine, pack, profile, random_policy(9, 0.5), seed=77)
        b = play_session(engine, pack, profile, random_policy(9, 0.5), seed=77)
        assert a == b

    def test_submit_after_end_rejected(self, engine, pack, profile):
        state = play_session(engine, pack, profile, always_correct, seed=1)
        with pytest.raises(SessionEnded):
            engine.submit(state, "anything", NOW)


class TestBadges:
    def test_award_badges_examples(self):
        assert award_badges(1, 6, set()) == [BadgeKind.SMILEY]
        assert award_badges(3, 6, {BadgeKind.SMILEY}) == [BadgeKind.CAKE]
        assert award_badges(6, 6, {BadgeKind.SMILEY, BadgeKind.CAKE}) == [BadgeKind.TROPHY]
        assert award_badges(2, 6, {BadgeKind.SMILEY}) == []

    def test_award_badges_requires_quota(self):
        with pytest.raises(InvalidQuota):
            award_badges(1, 1, set())

    def test_badge_sequence_in_session(self, engine, pack, profile):
        state = play_session(engine, pack, profile, always_correct, seed=1)
        assert [b.kind for b in state.badges] == [
            BadgeKind.SMILEY,
            BadgeKind.CAKE,
            BadgeKind.TROPHY,
        ]
        assert [b.avatar_solved_count_at_award for b in state.badges] == [1, 3, 6]

    def test_badges_unique_across_random_policies(self, engine, pack, profile):
        for seed in range(10):
            state = play_session(engine, pack, profile, random_policy(seed, 0.5), seed=seed)
            kinds = [b.kind for b in state.badges]
            assert len(kinds) == len(set(kinds))
            assert kinds == [BadgeKind.SMILEY, BadgeKind.CAKE, BadgeKind.TROPHY]

    def test_prior_day_progress_respected(self, engine):
        state = engine.start_session(
            "p",
            seed=1,
            now=NOW,
            prior_avatar_solved=2,
            prior_badges=frozenset({BadgeKind.SMILEY}),
        )
        assert state.avatar_solved_today == 2
        assert BadgeKind.SMILEY in state.badge_kinds

    def test_milestone_event_on_trophy(self, engine, pack, profile):
        state = play_session(engine, pack, profile, always_correct, seed=1)
        milestones = [e for e in state.event_log if e.kind is EventKind.MILESTONE]
        assert len(milestones) == 1
        assert milestones[0].payload["count"] == 6


class TestHintsInSession:
    def _state_with_score(self, engine, pack, profile, target: int):
        state = engine.start_session("p", seed=1, now=NOW)
        now = NOW
        while state.score < target:
            state, _, _ = submit_pending(engine, pack, profile, state, True, now)
            now += timedelta(seconds=5)
        return state, now

    def test_buy_hint_charges_phase_cost(self, engine, pack, profile):
        state, now = self._state_with_score(engine, pack, profile, 40)
        assert state.phase is Phase.RECOGNITION
        before = state.score
        state, view, event = engine.buy_hint(state, HintKind.UNLOCK_CUES, now)
        assert event.payload["cost"] == 30
        assert state.score == before - 30
        assert view.cues_unlocked

    def test_insufficient_points(self, engine, pack, profile):
        state = engine.start_session("p", seed=1, now=NOW)
        with pytest.raises(InsufficientPoints):
            engine.buy_hint(state, HintKind.UNLOCK_CUES, NOW)

    def test_score_exactly_cost_allowed(self, engine, pack, profile):
        # +10 +15 -5 +15 -5 lands on exactly the recognition-phase cost
        outcomes = [True, True, False, True, False]
        state = engine.start_session("p", seed=1, now=NOW)
        for correct in outcomes:
            state, _, _ = submit_pending(engine, pack, profile, state, correct, NOW)
        assert state.score == 30
        assert state.phase is Phase.RECOGNITION
        state, _, _ = engine.buy_hint(state, HintKind.UNLOCK_CUES, NOW)
        assert state.score == 0

    def test_recall_phase_costs_fifty(self, engine, pack, profile):
        state = engine.start_session("p", seed=1, now=NOW)
        now = NOW
        while state.phase is not Phase.RECALL:
            state, _, _ = submit_pending(engine, pack, profile, state, True, now)
            now += timedelta(seconds=5)
        before = state.score
        state, _, event = engine.buy_hint(state, HintKind.UNLOCK_CUES, now)
        assert event.payload["cost"] == 50
        assert state.score == before - 50

    def test_requeued_challenge_keeps_bought_hints(self, engine, pack, profile):
        # buy a hint on an avatar challenge, fail it, solve the interleaved
        # standard, and check the hint is still applied when it returns
        state, now = self._state_with_score(engine, pack, profile, 30)
        if state.pending_kind is ChallengeKind.STANDARD:
            state, _, _ = submit_pending(engine, pack, profile, state, True, now)
        assert state.pending_kind is not ChallengeKind.STANDARD
        target = state.pending_id
        state, view, _ = engine.buy_hint(state, HintKind.UNLOCK_CUES, now)
        state, _, _ = submit_pending(engine, pack, profile, state, False, now)
        state, _, _ = submit_pending(engine, pack, profile, state, True, now)
        assert state.pending_id == target
        assert state.pending_view.cues_unlocked


class TestReplay:
    def test_replay_reconstructs_exact_state(self, engine, pack, profile):
        for seed in range(5):
            state = play_session(engine, pack, profile, random_policy(seed, 0.5), seed=seed)
            assert engine.replay(list(state.event_log)) == state

    def test_replay_with_hints(self, engine, pack, profile):
        state = engine.start_session("p", seed=3, now=NOW)
        now = NOW
        while state.score < 30:
            state, _, _ = submit_pending(engine, pack, profile, state, True, now)
            now += timedelta(seconds=7)
        state, _, _ = engine.buy_hint(state, HintKind.UNLOCK_CUES, now)
        while not state.ended:
            state, _, _ = submit_pending(engine, pack, profile, state, True, now)
            now += timedelta(seconds=7)
        assert engine.replay(list(state.event_log)) == state

    def test_event_seqs_strictly_increasing(self, engine, pack, profile):
        state = play_session(engine, pack, profile, random_policy(1, 0.5), seed=4)
        seqs = [e.seq for e in state.event_log]
        assert seqs == list(range(1, len(seqs) + 1))
