"""Password-reset gate: verify trained avatar answers, m-of-k, with lockout.

This is the payoff path of the whole system: the attribute values a player
rehearsed in the game become the security-question answers checked here.
Verification is pure; attempt history is passed in so the caller controls
persistence and atomicity.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from datetime import datetime, timedelta
from enum import Enum
from fractions import Fraction
from math import comb
from typing import Mapping, Sequence

from .avatars import AttributeDescriptor, AvatarProfile, derived_rng, normalize_answer
from .errors import (
    AttemptAlreadyResolved,
    EmptyAnswer,
    IncompleteSubmission,
    LockedOut,
)

ATTEMPT_WINDOW = timedelta(hours=24)


class ResetOutcome(str, Enum):
    GRANTED = "granted"
    DENIED = "denied"
    LOCKED = "locked"


@dataclass(frozen=True)
class VerifyPolicy:
    """k questions per attempt, m required correct, rate-limited attempts."""

    k: int = 3
    m: int = 3
    max_attempts: int = 3
    lockout: timedelta = timedelta(hours=24)

    def __post_init__(self) -> None:
        if not 1 <= self.m <= self.k:
            raise ValueError("policy requires 1 <= m <= k")
        if self.max_attempts < 1:
            raise ValueError("max_attempts must be >= 1")


@dataclass(frozen=True)
class ResetAttempt:
    attempt_id: str
    player_id: str
    questions: tuple[str, ...]
    submitted: Mapping[str, str] = field(default_factory=dict)
    outcome: ResetOutcome | None = None
    at: datetime | None = None
    resolved_at: datetime | None = None

    @property
    def resolved(self) -> bool:
        return self.outcome is not None


def _denials_in_window(
    history: Sequence[ResetAttempt], now: datetime
) -> list[ResetAttempt]:
    return [
        attempt
        for attempt in history
        if attempt.outcome in (ResetOutcome.DENIED, ResetOutcome.LOCKED)
        and attempt.resolved_at is not None
        and now - attempt.resolved_at < ATTEMPT_WINDOW
    ]


def lockout_until(
    history: Sequence[ResetAttempt],
    policy: VerifyPolicy,
    now: datetime,
) -> datetime | None:
    """When the player's lockout expires, or None if not locked out."""
    denials = _denials_in_window(history, now)
    if len(denials) < policy.max_attempts:
        return None
    last = max(a.resolved_at for a in denials if a.resolved_at is not None)
    until = last + policy.lockout
    return until if until > now else None


def begin_reset(
    player_id: str,
    schema: Sequence[AttributeDescriptor],
    policy: VerifyPolicy,
    history: Sequence[ResetAttempt],
    seed: int,
    now: datetime,
    attempt_id: str | None = None,
) -> ResetAttempt:
    """Open a reset attempt with k seeded-sampled distinct questions."""
    until = lockout_until(history, policy, now)
    if until is not None:
        raise LockedOut(f"locked out until {until.isoformat()}")
    if policy.k > len(schema):
        raise ValueError(
            f"policy asks {policy.k} questions but schema has {len(schema)} attributes"
        )
    attribute_ids = [descriptor.attribute_id for descriptor in schema]
    questions = derived_rng(seed, "reset", player_id).sample(attribute_ids, policy.k)
    return ResetAttempt(
        attempt_id=attempt_id or f"reset-{player_id}-{seed & 0xFFFFFFFF:08x}",
        player_id=player_id,
        questions=tuple(questions),
        at=now,
    )


def verify(
    attempt: ResetAttempt,
    profile: AvatarProfile,
    policy: VerifyPolicy,
    history: Sequence[ResetAttempt],
    now: datetime,
    submitted: Mapping[str, str] | None = None,
) -> ResetAttempt:
    """Resolve an attempt: granted iff at least m answers match.

    The returned attempt reports only the aggregate outcome, never which
    questions were wrong. A denial that exhausts the attempt budget comes
    back as ``locked`` and starts the lockout clock.
    """
    if attempt.resolved:
        raise AttemptAlreadyResolved(f"attempt {attempt.attempt_id} already resolved")
    answers = dict(submitted if submitted is not None else attempt.submitted)
    missing = [q for q in attempt.questions if q not in answers]
    if missing:
        raise IncompleteSubmission(
            f"missing answers for {len(missing)} of {len(attempt.questions)} questions"
        )

    correct = 0
    for question in attempt.questions:
        try:
            given = normalize_answer(answers[question])
        except EmptyAnswer:
            continue
        if given == normalize_answer(profile.assigned(question)):
            correct += 1

    if correct >= policy.m:
        outcome = ResetOutcome.GRANTED
    else:
        prior_denials = len(_denials_in_window(history, now))
        outcome = (
            ResetOutcome.LOCKED
            if prior_denials + 1 >= policy.max_attempts
            else ResetOutcome.DENIED
        )
    return replace(
        attempt,
        submitted=answers,
        outcome=outcome,
        resolved_at=now,
    )


def blind_guess_success(k: int, m: int, pool_size: int) -> Fraction:
    """Exact probability that uniform blind guessing passes m-of-k when every
    pool has ``pool_size`` values."""
    p = Fraction(1, pool_size)
    return sum(
        comb(k, j) * p**j * (1 - p) ** (k - j) for j in range(m, k + 1)
    )
