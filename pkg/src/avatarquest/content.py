"""Content packs: the on-disk bundle of challenges, pools, and messages.

A pack is a single UTF-8 JSON document. Top-level fields:

    pack_id              string
    version              integer
    standard_challenges  [] of {id, answer, images[4], cues[4]}
    avatar_challenges    [] of {id, attribute_id, kind, images[4], cues[4],
                                option_count (recognition only)}
    attributes           [] of {attribute_id, display_question, value_pool_ref}
    value_pools          [] of {pool_id, values[]}
    messages             {message kind: [template, ...]}

Loading validates every pack invariant and reports all violations at once
with item-level diagnostics instead of stopping at the first.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Any, Mapping

from .avatars import (
    ENTROPY_FLOOR,
    AttributeDescriptor,
    ValuePool,
    letter_count,
    normalize_answer,
)
from .challenges import (
    IMAGES_PER_CHALLENGE,
    LETTER_POOL_SIZE,
    AvatarChallenge,
    Challenge,
    ChallengeKind,
    StandardChallenge,
    answer_letters,
)
from .engagement import EMOTICON_TOKEN, MessageKind
from .errors import EmptyAnswer, GameError, NotFound, PackParseError, PackValidationError

MIN_STANDARD_CHALLENGES = 7
MIN_RECOGNITION_CHALLENGES = 3
MIN_RECALL_CHALLENGES = 3


@dataclass(frozen=True)
class ContentPack:
    pack_id: str
    version: int
    standard_challenges: tuple[StandardChallenge, ...]
    avatar_challenges: tuple[AvatarChallenge, ...]
    attributes: tuple[AttributeDescriptor, ...]
    value_pools: tuple[ValuePool, ...]
    messages: Mapping[MessageKind, tuple[str, ...]]

    @property
    def recognition_challenges(self) -> tuple[AvatarChallenge, ...]:
        return tuple(
            c for c in self.avatar_challenges if c.kind is ChallengeKind.RECOGNITION
        )

    @property
    def recall_challenges(self) -> tuple[AvatarChallenge, ...]:
        return tuple(c for c in self.avatar_challenges if c.kind is ChallengeKind.RECALL)

    def challenge_by_id(self, challenge_id: str) -> Challenge:
        for challenge in self.standard_challenges + self.avatar_challenges:
            if challenge.challenge_id == challenge_id:
                return challenge
        raise NotFound(f"challenge {challenge_id!r} not in pack {self.pack_id!r}")

    def attribute_by_id(self, attribute_id: str) -> AttributeDescriptor:
        for attribute in self.attributes:
            if attribute.attribute_id == attribute_id:
                return attribute
        raise NotFound(f"attribute {attribute_id!r} not in pack {self.pack_id!r}")

    def pool_by_id(self, pool_id: str) -> ValuePool:
        for pool in self.value_pools:
            if pool.pool_id == pool_id:
                return pool
        raise NotFound(f"value pool {pool_id!r} not in pack {self.pack_id!r}")

    def pool_for_attribute(self, attribute_id: str) -> ValuePool:
        return self.pool_by_id(self.attribute_by_id(attribute_id).value_pool_ref)


def default_pack_path() -> Path:
    """Path of the sample pack bundled with the package."""
    return Path(str(resources.files("avatarquest.data") / "sample_pack.json"))


def _as_image_tuple(raw: Any) -> tuple[str, ...]:
    if not isinstance(raw, list):
        return ()
    return tuple(str(item) for item in raw)


def _parse_pack(data: Mapping[str, Any], issues: list[str]) -> ContentPack:
    if not isinstance(data, dict):
        raise PackParseError("pack root must be a JSON object")

    pack_id = str(data.get("pack_id") or "")
    if not pack_id:
        issues.append("pack: missing pack_id")
    try:
        version = int(data.get("version", 0))
    except (TypeError, ValueError):
        issues.append("pack: version is not an integer")
        version = 0

    standards: list[StandardChallenge] = []
    for i, raw in enumerate(data.get("standard_challenges") or []):
        cid = str(raw.get("id") or f"standard[{i}]")
        standards.append(
            StandardChallenge(
                challenge_id=cid,
                answer=str(raw.get("answer") or ""),
                images=_as_image_tuple(raw.get("images")),
                cues=_as_image_tuple(raw.get("cues")),
            )
        )

    avatars: list[AvatarChallenge] = []
    for i, raw in enumerate(data.get("avatar_challenges") or []):
        cid = str(raw.get("id") or f"avatar[{i}]")
        kind_raw = str(raw.get("kind") or "")
        try:
            kind = ChallengeKind(kind_raw)
        except ValueError:
            issues.append(f"avatar_challenges[{cid}]: unknown kind {kind_raw!r}")
            kind = ChallengeKind.RECOGNITION
        if kind is ChallengeKind.STANDARD:
            issues.append(f"avatar_challenges[{cid}]: kind must be recognition or recall")
            kind = ChallengeKind.RECOGNITION
        try:
            option_count = int(raw.get("option_count", 6))
        except (TypeError, ValueError):
            issues.append(f"avatar_challenges[{cid}]: option_count is not an integer")
            option_count = 6
        avatars.append(
            AvatarChallenge(
                challenge_id=cid,
                attribute_id=str(raw.get("attribute_id") or ""),
                kind=kind,
                images=_as_image_tuple(raw.get("images")),
                cues=_as_image_tuple(raw.get("cues")),
                option_count=option_count,
            )
        )

    attributes = tuple(
        AttributeDescriptor(
            attribute_id=str(raw.get("attribute_id") or f"attribute[{i}]"),
            display_question=str(raw.get("display_question") or ""),
            value_pool_ref=str(raw.get("value_pool_ref") or ""),
        )
        for i, raw in enumerate(data.get("attributes") or [])
    )

    pools = tuple(
        ValuePool(
            pool_id=str(raw.get("pool_id") or f"pool[{i}]"),
            values=tuple(str(v) for v in (raw.get("values") or [])),
        )
        for i, raw in enumerate(data.get("value_pools") or [])
    )

    messages: dict[MessageKind, tuple[str, ...]] = {}
    raw_messages = data.get("messages") or {}
    if isinstance(raw_messages, dict):
        for key, templates in raw_messages.items():
            try:
                kind = MessageKind(str(key))
            except ValueError:
                issues.append(f"messages: unknown message kind {key!r}")
                continue
            messages[kind] = tuple(str(t) for t in (templates or []))

    return ContentPack(
        pack_id=pack_id,
        version=version,
        standard_challenges=tuple(standards),
        avatar_challenges=tuple(avatars),
        attributes=attributes,
        value_pools=pools,
        messages=messages,
    )


def _check_answer_fits_tiles(answer: str, label: str, issues: list[str]) -> None:
    try:
        answer_letters(answer)
    except GameError as exc:
        issues.append(f"{label}: {exc.message}")


def validate_pack(pack: ContentPack) -> list[str]:
    """All invariant violations in a pack, one diagnostic per violation."""
    issues: list[str] = []

    if len(pack.standard_challenges) < MIN_STANDARD_CHALLENGES:
        issues.append(
            f"pack: insufficient standard challenges "
            f"({len(pack.standard_challenges)} < {MIN_STANDARD_CHALLENGES})"
        )
    if len(pack.recognition_challenges) < MIN_RECOGNITION_CHALLENGES:
        issues.append(
            f"pack: insufficient recognition challenges "
            f"({len(pack.recognition_challenges)} < {MIN_RECOGNITION_CHALLENGES})"
        )
    if len(pack.recall_challenges) < MIN_RECALL_CHALLENGES:
        issues.append(
            f"pack: insufficient recall challenges "
            f"({len(pack.recall_challenges)} < {MIN_RECALL_CHALLENGES})"
        )

    seen_ids: set[str] = set()
    for challenge in pack.standard_challenges + pack.avatar_challenges:
        if challenge.challenge_id in seen_ids:
            issues.append(f"pack: duplicate challenge id {challenge.challenge_id!r}")
        seen_ids.add(challenge.challenge_id)

    pool_ids = {pool.pool_id for pool in pack.value_pools}
    if len(pool_ids) != len(pack.value_pools):
        issues.append("pack: duplicate pool ids")
    attribute_ids = {a.attribute_id for a in pack.attributes}
    if len(attribute_ids) != len(pack.attributes):
        issues.append("pack: duplicate attribute ids")

    for attribute in pack.attributes:
        if attribute.value_pool_ref not in pool_ids:
            issues.append(
                f"attributes[{attribute.attribute_id}]: unresolved pool "
                f"{attribute.value_pool_ref!r}"
            )
        if not attribute.display_question:
            issues.append(f"attributes[{attribute.attribute_id}]: empty display_question")

    for pool in pack.value_pools:
        if len(pool.values) < ENTROPY_FLOOR:
            issues.append(
                f"value_pools[{pool.pool_id}]: {len(pool.values)} values, "
                f"entropy floor is {ENTROPY_FLOOR}"
            )
        normalized_seen: set[str] = set()
        for value in pool.values:
            try:
                normalized = normalize_answer(value)
            except EmptyAnswer:
                issues.append(f"value_pools[{pool.pool_id}]: empty value {value!r}")
                continue
            if normalized in normalized_seen:
                issues.append(
                    f"value_pools[{pool.pool_id}]: duplicate value {value!r} "
                    "after normalization"
                )
            normalized_seen.add(normalized)
            if letter_count(normalized) > LETTER_POOL_SIZE:
                issues.append(
                    f"value_pools[{pool.pool_id}]: value {value!r} exceeds "
                    f"{LETTER_POOL_SIZE} letters"
                )

    for challenge in pack.standard_challenges:
        label = f"standard_challenges[{challenge.challenge_id}]"
        if len(challenge.images) != IMAGES_PER_CHALLENGE:
            issues.append(f"{label}: expected {IMAGES_PER_CHALLENGE} images")
        if len(challenge.cues) != IMAGES_PER_CHALLENGE:
            issues.append(f"{label}: expected {IMAGES_PER_CHALLENGE} cues")
        _check_answer_fits_tiles(challenge.answer, f"{label}: answer", issues)

    recall_pool_refs: set[str] = set()
    for challenge in pack.avatar_challenges:
        label = f"avatar_challenges[{challenge.challenge_id}]"
        if len(challenge.images) != IMAGES_PER_CHALLENGE:
            issues.append(f"{label}: expected {IMAGES_PER_CHALLENGE} images")
        if len(challenge.cues) != IMAGES_PER_CHALLENGE:
            issues.append(f"{label}: expected {IMAGES_PER_CHALLENGE} cues")
        if challenge.attribute_id not in attribute_ids:
            issues.append(f"{label}: unresolved attribute {challenge.attribute_id!r}")
            continue
        pool_ref = next(
            (a.value_pool_ref for a in pack.attributes if a.attribute_id == challenge.attribute_id),
            None,
        )
        if challenge.kind is ChallengeKind.RECOGNITION:
            if challenge.option_count < 2:
                issues.append(f"{label}: option_count must be >= 2")
            if pool_ref in pool_ids:
                pool = pack.pool_by_id(pool_ref)  # type: ignore[arg-type]
                if challenge.option_count > len(pool.values):
                    issues.append(
                        f"{label}: option_count {challenge.option_count} exceeds "
                        f"pool size {len(pool.values)}"
                    )
        elif pool_ref is not None:
            recall_pool_refs.add(pool_ref)

    # every value of a pool used by recall challenges must be spellable on the
    # 12-letter tile keyboard
    for pool in pack.value_pools:
        if pool.pool_id not in recall_pool_refs:
            continue
        for value in pool.values:
            _check_answer_fits_tiles(
                value, f"value_pools[{pool.pool_id}]: value {value!r}", issues
            )

    for kind in MessageKind:
        templates = pack.messages.get(kind, ())
        if not templates:
            issues.append(f"messages[{kind.value}]: no templates")
        for template in templates:
            if EMOTICON_TOKEN not in template:
                issues.append(
                    f"messages[{kind.value}]: template {template!r} lacks the "
                    f"{EMOTICON_TOKEN} token"
                )

    return issues


def load_content_pack(path: str | Path) -> ContentPack:
    """Load and fully validate a content pack file.

    Raises PackParseError when the file is missing or not valid JSON, and
    PackValidationError (with the complete diagnostic list) when any pack
    invariant fails.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise PackParseError(f"cannot read {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PackParseError(f"{path} is not valid JSON: {exc}") from exc

    issues: list[str] = []
    pack = _parse_pack(data, issues)
    issues.extend(validate_pack(pack))
    if issues:
        raise PackValidationError(issues)
    return pack
