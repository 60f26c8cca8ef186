"""Challenge definitions, presentation, answer checking, and hints.

A challenge shows four pictures in a fixed authored order (the order itself is
a memory cue and is never permuted). Standard challenges carry their own
answer word; avatar challenges bind to a profile attribute and come in
recognition form (pick from options) or recall form (spell the word from a
pool of 12 letter tiles, word length hidden).
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum

from .avatars import AvatarProfile, ValuePool, derived_rng, distractors_for, normalize_answer
from .errors import (
    AnswerTooLong,
    HintInapplicable,
    ProfileRequired,
    UnrepresentableAnswer,
    UnresolvedPool,
)

ALPHABET = "ABCDEFGHIJKLMNOPQRSTUVWXYZ"
LETTER_POOL_SIZE = 12
IMAGES_PER_CHALLENGE = 4
DEFAULT_OPTION_COUNT = 6


class ChallengeKind(str, Enum):
    STANDARD = "standard"
    RECOGNITION = "recognition"
    RECALL = "recall"


class HintKind(str, Enum):
    REVEAL_LETTER = "reveal_letter"
    UNLOCK_CUES = "unlock_cues"
    ELIMINATE_OPTIONS = "eliminate_options"


def answer_letters(answer: str) -> str:
    """Uppercase tile letters for an answer.

    The normalized answer must be 1-12 characters, all A-Z: that is what the
    12-tile keyboard can express.
    """
    normalized = normalize_answer(answer)
    if len(normalized) > LETTER_POOL_SIZE:
        raise AnswerTooLong(
            f"answer {normalized!r} has {len(normalized)} characters, "
            f"maximum is {LETTER_POOL_SIZE}"
        )
    upper = normalized.upper()
    if any(ch not in ALPHABET for ch in upper):
        raise UnrepresentableAnswer(
            f"answer {normalized!r} contains characters outside A-Z"
        )
    return upper


@dataclass(frozen=True)
class StandardChallenge:
    """A four-picture puzzle with a fixed answer word."""

    challenge_id: str
    answer: str
    images: tuple[str, str, str, str]
    cues: tuple[str, str, str, str]

    @property
    def kind(self) -> ChallengeKind:
        return ChallengeKind.STANDARD


@dataclass(frozen=True)
class AvatarChallenge:
    """A four-picture puzzle whose answer is a profile attribute value."""

    challenge_id: str
    attribute_id: str
    kind: ChallengeKind
    images: tuple[str, str, str, str]
    cues: tuple[str, str, str, str]
    option_count: int = DEFAULT_OPTION_COUNT


Challenge = StandardChallenge | AvatarChallenge


@dataclass(frozen=True)
class LetterPool:
    """Twelve uppercase tiles containing the answer's letters plus fillers."""

    letters: tuple[str, ...]
    seed: int


@dataclass(frozen=True)
class Verdict:
    correct: bool
    normalized_submission: str


@dataclass(frozen=True)
class ChallengeView:
    """What the player is shown. Never contains the answer itself.

    ``cues`` are carried server-side but must only be surfaced to a client
    once ``cues_unlocked`` is true.
    """

    challenge_id: str
    kind: ChallengeKind
    images: tuple[str, str, str, str]
    cues: tuple[str, str, str, str]
    letter_pool: LetterPool | None
    options: tuple[str, ...] | None
    show_length: bool
    answer_length: int | None
    revealed_positions: frozenset[tuple[int, str]]
    cues_unlocked: bool


def build_letter_pool(answer: str, seed: int) -> LetterPool:
    """Build the 12-tile pool for an answer.

    The pool always contains the answer's letter multiset; remaining slots are
    filled with uniform A-Z draws (no exclusions, so fillers leak nothing
    about the answer) and the final order is a seeded shuffle.
    """
    letters = answer_letters(answer)
    rng = derived_rng(seed, "letterpool", letters)
    tiles = list(letters)
    tiles.extend(rng.choice(ALPHABET) for _ in range(LETTER_POOL_SIZE - len(tiles)))
    rng.shuffle(tiles)
    return LetterPool(letters=tuple(tiles), seed=seed)


def answer_for(challenge: Challenge, profile: AvatarProfile | None) -> str:
    """Resolve the answer text for a challenge (assigned value for avatar ones)."""
    if isinstance(challenge, StandardChallenge):
        return challenge.answer
    if profile is None:
        raise ProfileRequired(
            f"avatar challenge {challenge.challenge_id!r} requires a profile"
        )
    return profile.assigned(challenge.attribute_id)


def present(
    challenge: Challenge,
    profile: AvatarProfile | None = None,
    seed: int = 0,
    pool: ValuePool | None = None,
) -> ChallengeView:
    """Build the initial view for a challenge.

    Images keep their authored order for every seed. Recognition views shuffle
    the assigned value in among seeded distractors; recall views hide the
    word length; standard views show it.
    """
    answer = answer_for(challenge, profile)
    kind = challenge.kind
    letter_pool: LetterPool | None = None
    options: tuple[str, ...] | None = None
    show_length = False
    answer_length: int | None = None

    if kind is ChallengeKind.STANDARD:
        letter_pool = build_letter_pool(answer, seed)
        show_length = True
        answer_length = len(answer_letters(answer))
    elif kind is ChallengeKind.RECALL:
        letter_pool = build_letter_pool(answer, seed)
    else:
        assert isinstance(challenge, AvatarChallenge)
        if pool is None:
            raise UnresolvedPool(
                f"recognition challenge {challenge.challenge_id!r} needs its value pool"
            )
        assert profile is not None
        picks = distractors_for(
            profile, challenge.attribute_id, challenge.option_count - 1, seed, pool
        )
        shuffled = [answer, *picks]
        derived_rng(seed, "options", challenge.challenge_id).shuffle(shuffled)
        options = tuple(shuffled)

    return ChallengeView(
        challenge_id=challenge.challenge_id,
        kind=kind,
        images=challenge.images,
        cues=challenge.cues,
        letter_pool=letter_pool,
        options=options,
        show_length=show_length,
        answer_length=answer_length,
        revealed_positions=frozenset(),
        cues_unlocked=False,
    )


def check_answer(
    challenge: Challenge,
    profile: AvatarProfile | None,
    submission: str,
) -> Verdict:
    """Compare a submission against the challenge answer in normalized form."""
    normalized = normalize_answer(submission)
    expected = normalize_answer(answer_for(challenge, profile))
    return Verdict(correct=normalized == expected, normalized_submission=normalized)


def apply_hint(view: ChallengeView, answer: str, kind: HintKind) -> ChallengeView:
    """Apply a hint to a view, returning the updated view.

    reveal_letter discloses the lowest unrevealed position of the answer;
    eliminate_options drops two wrong options (never the correct one);
    unlock_cues exposes the four verbal cue texts.
    """
    if kind is HintKind.UNLOCK_CUES:
        if view.cues_unlocked:
            raise HintInapplicable("cues are already unlocked")
        return replace(view, cues_unlocked=True)

    if kind is HintKind.REVEAL_LETTER:
        if view.letter_pool is None:
            raise HintInapplicable("reveal_letter only applies to letter-tile views")
        letters = answer_letters(answer)
        taken = {index for index, _ in view.revealed_positions}
        remaining = [i for i in range(len(letters)) if i not in taken]
        if not remaining:
            raise HintInapplicable("every letter is already revealed")
        position = min(remaining)
        revealed = view.revealed_positions | {(position, letters[position])}
        return replace(view, revealed_positions=revealed)

    if kind is HintKind.ELIMINATE_OPTIONS:
        if view.options is None:
            raise HintInapplicable("eliminate_options only applies to recognition views")
        if len(view.options) <= 2:
            raise HintInapplicable("too few options left to eliminate")
        expected = normalize_answer(answer)
        dropped = 0
        kept: list[str] = []
        for option in view.options:
            if dropped < 2 and normalize_answer(option) != expected:
                dropped += 1
            else:
                kept.append(option)
        return replace(view, options=tuple(kept))

    raise HintInapplicable(f"unknown hint kind {kind!r}")
