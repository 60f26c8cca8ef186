"""Domain error hierarchy.

Every error carries a stable machine-readable ``code`` so the HTTP layer and
the CLI can map failures without parsing message text.
"""

from __future__ import annotations


class GameError(Exception):
    """Base class for all domain errors."""

    code = "game_error"

    def __init__(self, message: str = ""):
        super().__init__(message or self.code)
        self.message = message or self.code


class UnresolvedPool(GameError):
    code = "unresolved_pool"


class EntropyFloorViolation(GameError):
    code = "entropy_floor"


class TooManyDistractors(GameError):
    code = "too_many_distractors"


class EmptyAnswer(GameError):
    code = "empty_answer"


class AnswerTooLong(GameError):
    code = "answer_too_long"


class UnrepresentableAnswer(GameError):
    code = "unrepresentable_answer"


class ProfileRequired(GameError):
    code = "profile_required"


class HintInapplicable(GameError):
    code = "hint_inapplicable"


class InsufficientContent(GameError):
    code = "insufficient_content"


class InvalidSessionConfig(GameError):
    code = "invalid_session_config"


class SessionEnded(GameError):
    code = "session_ended"


class NoPendingChallenge(GameError):
    code = "no_pending_challenge"


class StaleChallenge(GameError):
    code = "stale_challenge"


class InsufficientPoints(GameError):
    code = "insufficient_points"


class InvalidPhase(GameError):
    code = "invalid_phase"


class InvalidQuota(GameError):
    code = "invalid_quota"


class NoTemplates(GameError):
    code = "no_templates"


class LockedOut(GameError):
    code = "locked_out"


class NotEnrolled(GameError):
    code = "not_enrolled"


class AttemptAlreadyResolved(GameError):
    code = "attempt_already_resolved"


class IncompleteSubmission(GameError):
    code = "incomplete_submission"


class SequenceGap(GameError):
    code = "sequence_gap"


class PackParseError(GameError):
    code = "parse_error"


class PackValidationError(GameError):
    """Content pack failed validation; ``diagnostics`` lists every violation."""

    code = "validation_error"

    def __init__(self, diagnostics: list[str]):
        super().__init__(f"{len(diagnostics)} validation issue(s)")
        self.diagnostics = list(diagnostics)


class NotFound(GameError):
    code = "not_found"


class Unauthorized(GameError):
    code = "unauthorized"


class FreeHintUnavailable(GameError):
    code = "free_hint_unavailable"
