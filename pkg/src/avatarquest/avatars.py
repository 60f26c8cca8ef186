"""Avatar profiles: system-generated fictitious-person data.

A profile assigns one value per attribute (favourite colour, pet's name, ...),
drawn from content-pack value pools. Those assignments are the secret material
a player rehearses in the game and later types to answer reset questions, so
value selection is seeded and fully reproducible.
"""

from __future__ import annotations

import random
import unicodedata
from dataclasses import dataclass
from datetime import datetime
from typing import Iterable, Mapping

from .errors import (
    EmptyAnswer,
    EntropyFloorViolation,
    TooManyDistractors,
    UnresolvedPool,
)

# Minimum values per pool: keeps per-attribute blind-guess probability <= 1/32.
ENTROPY_FLOOR = 32


def derived_rng(*parts: object) -> random.Random:
    """Build an RNG from a composite seed string.

    String seeding hashes the content (not ``hash()``), so streams are stable
    across processes and platforms.
    """
    return random.Random("|".join(str(p) for p in parts))


def normalize_answer(raw: str) -> str:
    """Canonicalize an answer: fold diacritics and case, collapse whitespace.

    Raises EmptyAnswer when nothing is left after trimming.
    """
    decomposed = unicodedata.normalize("NFKD", raw)
    without_marks = "".join(ch for ch in decomposed if not unicodedata.combining(ch))
    collapsed = " ".join(without_marks.casefold().split())
    if not collapsed:
        raise EmptyAnswer("answer is empty after normalization")
    return collapsed


def letter_count(value: str) -> int:
    """Number of alphabetic characters in a value (spaces excluded)."""
    return sum(1 for ch in value if ch.isalpha())


@dataclass(frozen=True)
class AttributeDescriptor:
    """One avatar attribute: a question plus the pool its answer comes from."""

    attribute_id: str
    display_question: str
    value_pool_ref: str


@dataclass(frozen=True)
class ValuePool:
    """Ordered collection of candidate answer values for one attribute."""

    pool_id: str
    values: tuple[str, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", tuple(self.values))


@dataclass(frozen=True)
class AvatarProfile:
    """A generated fictitious person: one chosen value per schema attribute."""

    profile_id: str
    seed: int
    assignments: Mapping[str, str]
    created_at: datetime | None = None

    def assigned(self, attribute_id: str) -> str:
        try:
            return self.assignments[attribute_id]
        except KeyError:
            raise UnresolvedPool(f"attribute {attribute_id!r} not assigned in profile")


def _pool_index(pools: Iterable[ValuePool]) -> dict[str, ValuePool]:
    return {pool.pool_id: pool for pool in pools}


def generate_profile(
    seed: int,
    schema: Iterable[AttributeDescriptor],
    pools: Iterable[ValuePool],
    *,
    profile_id: str | None = None,
    created_at: datetime | None = None,
) -> AvatarProfile:
    """Deterministically assign one pool value to every schema attribute.

    The same (seed, schema, pools) always yields identical assignments. Each
    attribute draws from an independent seeded stream so assignments stay
    uniform per attribute.
    """
    index = _pool_index(pools)
    assignments: dict[str, str] = {}
    for descriptor in schema:
        pool = index.get(descriptor.value_pool_ref)
        if pool is None:
            raise UnresolvedPool(
                f"attribute {descriptor.attribute_id!r} references missing pool "
                f"{descriptor.value_pool_ref!r}"
            )
        if len(pool.values) < ENTROPY_FLOOR:
            raise EntropyFloorViolation(
                f"pool {pool.pool_id!r} has {len(pool.values)} values, "
                f"minimum is {ENTROPY_FLOOR}"
            )
        rng = derived_rng(seed, "assign", descriptor.attribute_id)
        assignments[descriptor.attribute_id] = pool.values[rng.randrange(len(pool.values))]
    return AvatarProfile(
        profile_id=profile_id or f"avatar-{seed:016x}",
        seed=seed,
        assignments=assignments,
        created_at=created_at,
    )


def distractors_for(
    profile: AvatarProfile,
    attribute_id: str,
    n: int,
    seed: int,
    pool: ValuePool,
) -> list[str]:
    """Pick ``n`` distinct wrong options for an attribute, excluding the
    profile's assigned value (compared in normalized form)."""
    assigned = normalize_answer(profile.assigned(attribute_id))
    candidates = [v for v in pool.values if normalize_answer(v) != assigned]
    if n > len(candidates):
        raise TooManyDistractors(
            f"requested {n} distractors but pool {pool.pool_id!r} "
            f"only offers {len(candidates)}"
        )
    rng = derived_rng(seed, "distractors", attribute_id)
    return rng.sample(candidates, n)
