"""Pydantic request/response models for the HTTP API.

Response models never carry the answer of an open challenge: views expose
cue texts only once unlocked, lengths only for standard challenges, and
verdicts report correctness without revealing the expected answer.
"""

from __future__ import annotations

from datetime import date, datetime
from typing import Optional

from pydantic import BaseModel, Field

from ..challenges import ChallengeView
from ..engagement import Notification, SocialMessage, StatsReport
from ..sessions import Badge, SessionState


class ErrorDetail(BaseModel):
    code: str
    message: str


class ErrorBody(BaseModel):
    error: ErrorDetail


class AttributeQuestion(BaseModel):
    attribute_id: str
    question: str


class ProfileSummary(BaseModel):
    profile_id: str
    attributes: list[AttributeQuestion]
    # assigned values are withheld unless the request explicitly asked for
    # them (enrollment screen)
    values: Optional[dict[str, str]] = None


class PlayerCreateRequest(BaseModel):
    seed: Optional[int] = None
    reveal_values: bool = False


class PlayerCreateResponse(BaseModel):
    player_id: str
    token: str
    token_expires_at: datetime
    profile: ProfileSummary


class RevealedLetter(BaseModel):
    index: int
    letter: str


class ChallengeViewModel(BaseModel):
    challenge_id: str
    kind: str
    images: list[str]
    cues_unlocked: bool
    letter_pool: Optional[list[str]] = None
    options: Optional[list[str]] = None
    length: Optional[int] = None
    revealed: list[RevealedLetter] = Field(default_factory=list)
    cues: Optional[list[str]] = None


class MessageModel(BaseModel):
    kind: str
    text: str
    celebrate: bool = False


class BadgeModel(BaseModel):
    kind: str
    awarded_at: datetime
    avatar_solved_count_at_award: int


class SessionCreateRequest(BaseModel):
    player_id: str
    seed: Optional[int] = None


class SessionStateResponse(BaseModel):
    session_id: str
    player_id: str
    phase: str
    score: int
    recognition_done: int
    recall_done: int
    standard_remaining: int
    avatar_solved_today: int
    badges: list[BadgeModel]
    ended: bool
    view: Optional[ChallengeViewModel] = None
    message: Optional[MessageModel] = None


class AnswerRequest(BaseModel):
    text: str
    # echo of the challenge being answered; a mismatch with the pending
    # challenge is rejected so concurrent answers cannot double-apply
    challenge_id: Optional[str] = None


class AnswerResponse(BaseModel):
    correct: bool
    delta: int
    score: int
    phase: str
    badges_awarded: list[str]
    milestone: bool
    ended: bool
    view: Optional[ChallengeViewModel] = None
    message: Optional[MessageModel] = None


class HintRequest(BaseModel):
    kind: str
    use_free: bool = False


class HintResponse(BaseModel):
    score: int
    cost: int
    free: bool
    view: ChallengeViewModel


class StatsBucketModel(BaseModel):
    day: date
    correct: int


class StatsResponse(BaseModel):
    range: str
    buckets: list[StatsBucketModel]
    total_correct: int
    stage: str
    remaining_to_next_stage: int


class NotificationModel(BaseModel):
    message: MessageModel
    absent_hours: float


class NotificationsResponse(BaseModel):
    reminder: Optional[NotificationModel] = None
    free_hint_due: bool = False


class ResetBeginRequest(BaseModel):
    seed: Optional[int] = None


class ResetQuestionModel(BaseModel):
    attribute_id: str
    question: str


class ResetBeginResponse(BaseModel):
    attempt_id: str
    player_id: str
    questions: list[ResetQuestionModel]


class ResetVerifyRequest(BaseModel):
    answers: dict[str, str]


class ResetVerifyResponse(BaseModel):
    # aggregate outcome only; per-question results are never disclosed
    outcome: str


class HealthResponse(BaseModel):
    status: str
    pack_id: str
    version: str


def message_model(message: SocialMessage) -> MessageModel:
    return MessageModel(kind=message.kind.value, text=message.text, celebrate=message.celebrate)


def notification_model(notification: Notification) -> NotificationModel:
    return NotificationModel(
        message=message_model(notification.message),
        absent_hours=notification.absent_for.total_seconds() / 3600,
    )


def badge_model(badge: Badge) -> BadgeModel:
    return BadgeModel(
        kind=badge.kind.value,
        awarded_at=badge.awarded_at,
        avatar_solved_count_at_award=badge.avatar_solved_count_at_award,
    )


def view_model(view: ChallengeView) -> ChallengeViewModel:
    """Client-safe projection of a challenge view."""
    return ChallengeViewModel(
        challenge_id=view.challenge_id,
        kind=view.kind.value,
        images=list(view.images),
        cues_unlocked=view.cues_unlocked,
        letter_pool=list(view.letter_pool.letters) if view.letter_pool else None,
        options=list(view.options) if view.options else None,
        length=view.answer_length if view.show_length else None,
        revealed=[
            RevealedLetter(index=index, letter=letter)
            for index, letter in sorted(view.revealed_positions)
        ],
        cues=list(view.cues) if view.cues_unlocked else None,
    )


def session_response(
    state: SessionState,
    message: MessageModel | None = None,
) -> SessionStateResponse:
    return SessionStateResponse(
        session_id=state.session_id,
        player_id=state.player_id,
        phase=state.phase.value,
        score=state.score,
        recognition_done=state.recognition_done,
        recall_done=state.recall_done,
        standard_remaining=len(state.standard_queue),
        avatar_solved_today=state.avatar_solved_today,
        badges=[badge_model(b) for b in state.badges],
        ended=state.ended,
        view=view_model(state.pending_view) if state.pending_view else None,
        message=message,
    )


def stats_response(report: StatsReport) -> StatsResponse:
    return StatsResponse(
        range=report.range_kind,
        buckets=[
            StatsBucketModel(day=bucket.day, correct=bucket.correct)
            for bucket in report.buckets
        ],
        total_correct=report.total_correct,
        stage=report.stage.value,
        remaining_to_next_stage=report.remaining_to_next_stage,
    )
