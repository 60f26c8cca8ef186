"""avatarquest: a memory-training game for avatar-profile fallback authentication.

Players rehearse a system-generated avatar profile through picture puzzles;
the same profile later answers their password-reset questions. The package
ships the game engine, an HTTP service, a simulation CLI, and an embedded
store.
"""

from .avatars import (
    AttributeDescriptor,
    AvatarProfile,
    ValuePool,
    distractors_for,
    generate_profile,
    normalize_answer,
)
from .challenges import (
    AvatarChallenge,
    ChallengeKind,
    ChallengeView,
    HintKind,
    LetterPool,
    StandardChallenge,
    Verdict,
    apply_hint,
    build_letter_pool,
    check_answer,
    present,
)
from .content import ContentPack, default_pack_path, load_content_pack, validate_pack
from .engagement import (
    ActivityLog,
    MessageKind,
    Progression,
    ProgressionPolicy,
    SocialMessage,
    free_hint_due,
    hint_cost,
    next_notification,
    progression_decision,
    social_message,
    stats,
)
from .events import EventKind, GameEvent
from .sessions import (
    Badge,
    BadgeKind,
    Phase,
    SessionConfig,
    SessionEngine,
    SessionState,
    award_badges,
)
from .authgate import (
    ResetAttempt,
    ResetOutcome,
    VerifyPolicy,
    begin_reset,
    blind_guess_success,
    verify,
)
from .store import GameStore, PlayerRecord

__version__ = "0.1.0"
