from __future__ import annotations

import random
from datetime import datetime, timedelta, timezone
from typing import Callable

import pytest

from avatarquest import (
    AvatarProfile,
    ContentPack,
    SessionEngine,
    SessionState,
    default_pack_path,
    generate_profile,
    load_content_pack,
)
from avatarquest.challenges import answer_for
from avatarquest.sessions import SessionConfig

NOW = datetime(2025, 3, 10, 18, 0, tzinfo=timezone.utc)


@pytest.fixture(scope="session")
def pack() -> ContentPack:
    return load_content_pack(default_pack_path())


@pytest.fixture(scope="session")
def profile(pack: ContentPack) -> AvatarProfile:
    return generate_profile(7, pack.attributes, pack.value_pools)


@pytest.fixture()
def engine(pack: ContentPack, profile: AvatarProfile) -> SessionEngine:
    return SessionEngine(pack, profile)


def play_session(
    engine: SessionEngine,
    pack: ContentPack,
    profile: AvatarProfile,
    decide: Callable[[SessionState, int], bool],
    seed: int = 1,
    start: datetime = NOW,
    config: SessionConfig | None = None,
    max_turns: int = 500,
) -> SessionState:
    """Run a session to completion under a correctness policy.

    ``decide(state, turn)`` returns whether this turn's answer is correct.
    """
    state = engine.start_session("tester", seed=seed, now=start, config=config)
    now = start
    turn = 0
    while not state.ended and turn < max_turns:
        challenge = pack.challenge_by_id(state.pending_id)
        answer = answer_for(challenge, profile)
        submission = answer if decide(state, turn) else f"wrong {answer}"
        now += timedelta(seconds=20)
        state, _, _ = engine.submit(state, submission, now)
        turn += 1
    return state


def always_correct(_state: SessionState, _turn: int) -> bool:
    return True


def random_policy(seed: int, p_correct: float = 0.6) -> Callable[[SessionState, int], bool]:
    rng = random.Random(seed)
    return lambda _state, _turn: rng.random() < p_correct
