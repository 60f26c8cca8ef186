"""HTTP service wrapping the game engine, store, and reset gate.

The service is the single writer for all game state: answers are checked
server-side only, responses never include the answer of an open challenge,
and operations on one session are serialized behind a per-session lock.
"""

from __future__ import annotations

import os
import secrets
import threading
import uuid
from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone
from pathlib import Path
from typing import Callable

from fastapi import Depends, FastAPI, Header, Query, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .. import __version__
from ..authgate import VerifyPolicy, begin_reset, verify
from ..avatars import AvatarProfile, derived_rng, generate_profile
from ..challenges import HintKind
from ..content import ContentPack, default_pack_path, load_content_pack
from ..engagement import (
    ActivityLog,
    MessageKind,
    consume_free_hint,
    free_hint_due,
    mark_reminded,
    next_notification,
    social_message,
    stats,
)
from ..errors import (
    FreeHintUnavailable,
    GameError,
    HintInapplicable,
    NotEnrolled,
    NotFound,
    StaleChallenge,
    Unauthorized,
)
from ..events import EventKind, GameEvent
from ..sessions import SessionEngine, SessionState
from ..store import GameStore, PlayerRecord, apply_session_events
from . import schemas

REMINDER_GAP_HOURS = 24

HTTP_STATUS_BY_CODE = {
    "not_found": 404,
    "not_enrolled": 404,
    "unauthorized": 401,
    "locked_out": 423,
    "empty_answer": 422,
    "incomplete_submission": 422,
    "validation_error": 422,
    "parse_error": 400,
    "session_ended": 409,
    "no_pending_challenge": 409,
    "stale_challenge": 409,
    "insufficient_points": 409,
    "hint_inapplicable": 409,
    "free_hint_unavailable": 409,
    "attempt_already_resolved": 409,
}


def utcnow() -> datetime:
    return datetime.now(timezone.utc)


@dataclass
class Settings:
    host: str = "127.0.0.1"
    port: int = 8000
    data_dir: str = "./data"
    content_pack: str = ""
    seed: int | None = None
    token_ttl_hours: int = 24

    @classmethod
    def from_env(cls) -> "Settings":
        seed_raw = os.environ.get("AVATARQUEST_SEED", "")
        return cls(
            host=os.environ.get("AVATARQUEST_HOST", "127.0.0.1"),
            port=int(os.environ.get("AVATARQUEST_PORT", "8000")),
            data_dir=os.environ.get("AVATARQUEST_DATA_DIR", "./data"),
            content_pack=os.environ.get("AVATARQUEST_CONTENT_PACK", ""),
            seed=int(seed_raw) if seed_raw else None,
            token_ttl_hours=int(os.environ.get("AVATARQUEST_TOKEN_TTL_HOURS", "24")),
        )


@dataclass
class ApiSession:
    token: str
    player_id: str
    expires_at: datetime


@dataclass
class _SessionSlot:
    state: SessionState
    engine: SessionEngine
    lock: threading.Lock = field(default_factory=threading.Lock)


class ServiceState:
    """Runtime state: store, content pack, live sessions, issued tokens."""

    def __init__(self, settings: Settings, clock: Callable[[], datetime] | None = None):
        self.settings = settings
        self.clock = clock or utcnow
        pack_path = Path(settings.content_pack) if settings.content_pack else default_pack_path()
        self.pack: ContentPack = load_content_pack(pack_path)
        self.store = GameStore(settings.data_dir)
        self.policy = VerifyPolicy()
        self.sessions: dict[str, _SessionSlot] = {}
        self.tokens: dict[str, ApiSession] = {}
        self._profiles: dict[str, AvatarProfile] = {}
        self._registry_lock = threading.Lock()
        self._counters: dict[str, int] = {}
        self._seed_rng = (
            derived_rng(settings.seed, "service") if settings.seed is not None else None
        )

    # -- id and seed generation --------------------------------------------

    def new_id(self, prefix: str) -> str:
        if self.settings.seed is None:
            return f"{prefix}-{uuid.uuid4().hex[:12]}"
        with self._registry_lock:
            self._counters[prefix] = self._counters.get(prefix, 0) + 1
            return f"{prefix}-{self._counters[prefix]:04d}"

    def next_seed(self) -> int:
        if self._seed_rng is None:
            return secrets.randbits(63)
        with self._registry_lock:
            return self._seed_rng.getrandbits(63)

    # -- tokens --------------------------------------------------------------

    def issue_token(self, player_id: str) -> ApiSession:
        session = ApiSession(
            token=secrets.token_urlsafe(32),
            player_id=player_id,
            expires_at=self.clock() + timedelta(hours=self.settings.token_ttl_hours),
        )
        self.tokens[session.token] = session
        return session

    def authenticate(self, authorization: str | None) -> ApiSession:
        # unknown and expired tokens get the same rejection
        if not authorization or not authorization.startswith("Bearer "):
            raise Unauthorized("missing or malformed bearer token")
        token = authorization.removeprefix("Bearer ").strip()
        session = self.tokens.get(token)
        if session is None or self.clock() >= session.expires_at:
            raise Unauthorized("invalid or expired token")
        return session

    # -- profiles and sessions -----------------------------------------------

    def profile(self, profile_id: str) -> AvatarProfile:
        if profile_id not in self._profiles:
            self._profiles[profile_id] = self.store.load_profile(profile_id)
        return self._profiles[profile_id]

    def engine_for(self, profile: AvatarProfile) -> SessionEngine:
        return SessionEngine(self.pack, profile)

    def session_slot(self, session_id: str) -> _SessionSlot:
        with self._registry_lock:
            slot = self.sessions.get(session_id)
            if slot is not None:
                return slot
        # not in memory: rebuild from the event log (service restart)
        if not self.store.has_session(session_id):
            raise NotFound(f"session {session_id!r} not found")
        events = self.store.read_events(session_id)
        player_id = str(events[0].payload["player_id"])
        record = self.store.load_player(player_id)
        engine = self.engine_for(self.profile(record.profile_id))
        state = engine.replay(events)
        with self._registry_lock:
            slot = self.sessions.setdefault(session_id, _SessionSlot(state=state, engine=engine))
        return slot

    def register_session(self, state: SessionState, engine: SessionEngine) -> _SessionSlot:
        slot = _SessionSlot(state=state, engine=engine)
        with self._registry_lock:
            self.sessions[state.session_id] = slot
        return slot


def create_app(
    settings: Settings | None = None,
    clock: Callable[[], datetime] | None = None,
) -> FastAPI:
    settings = settings or Settings.from_env()
    svc = ServiceState(settings, clock)

    app = FastAPI(title="avatarquest", version=__version__)
    app.state.svc = svc
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(GameError)
    async def game_error_handler(_request: Request, exc: GameError) -> JSONResponse:
        status = HTTP_STATUS_BY_CODE.get(exc.code, 400)
        return JSONResponse(
            status_code=status,
            content={"error": {"code": exc.code, "message": exc.message}},
        )

    def state() -> ServiceState:
        return svc

    def bearer(
        authorization: str | None = Header(default=None),
        svc: ServiceState = Depends(state),
    ) -> ApiSession:
        return svc.authenticate(authorization)

    # -- players -------------------------------------------------------------

    @app.get("/healthz", response_model=schemas.HealthResponse)
    def healthz(svc: ServiceState = Depends(state)) -> schemas.HealthResponse:
        return schemas.HealthResponse(status="ok", pack_id=svc.pack.pack_id, version=__version__)

    @app.post("/players", response_model=schemas.PlayerCreateResponse, status_code=201)
    def create_player(
        body: schemas.PlayerCreateRequest,
        svc: ServiceState = Depends(state),
    ) -> schemas.PlayerCreateResponse:
        now = svc.clock()
        seed = body.seed if body.seed is not None else svc.next_seed()
        player_id = svc.new_id("player")
        profile = generate_profile(
            seed,
            svc.pack.attributes,
            svc.pack.value_pools,
            profile_id=f"profile-{player_id}",
            created_at=now,
        )
        record = PlayerRecord(
            player_id=player_id,
            profile_id=profile.profile_id,
            enrolled_at=now,
            activity=ActivityLog(player_id=player_id, last_played_at=now),
        )
        svc.store.save_profile(profile)
        svc.store.save_player(record)
        svc._profiles[profile.profile_id] = profile
        token = svc.issue_token(player_id)
        summary = schemas.ProfileSummary(
            profile_id=profile.profile_id,
            attributes=[
                schemas.AttributeQuestion(
                    attribute_id=a.attribute_id, question=a.display_question
                )
                for a in svc.pack.attributes
            ],
            values=dict(profile.assignments) if body.reveal_values else None,
        )
        return schemas.PlayerCreateResponse(
            player_id=player_id,
            token=token.token,
            token_expires_at=token.expires_at,
            profile=summary,
        )

    def _require_player(svc: ServiceState, auth: ApiSession, player_id: str) -> PlayerRecord:
        if auth.player_id != player_id:
            raise Unauthorized("token does not grant access to this player")
        return svc.store.load_player(player_id)

    # -- sessions --------------------------------------------------------------

    @app.post("/sessions", response_model=schemas.SessionStateResponse, status_code=201)
    def create_session(
        body: schemas.SessionCreateRequest,
        auth: ApiSession = Depends(bearer),
        svc: ServiceState = Depends(state),
    ) -> schemas.SessionStateResponse:
        record = _require_player(svc, auth, body.player_id)
        now = svc.clock()
        message = None
        last_played = record.activity.last_played_at
        if last_played is not None and now - last_played >= timedelta(hours=REMINDER_GAP_HOURS):
            message = schemas.message_model(
                social_message(
                    svc.pack.messages,
                    MessageKind.RETURN_CONGRATULATION,
                    f"{body.player_id}:{now.date()}",
                )
            )
        profile = svc.profile(record.profile_id)
        engine = svc.engine_for(profile)
        seed = body.seed if body.seed is not None else svc.next_seed()
        today = now.date()
        game_state = engine.start_session(
            player_id=body.player_id,
            seed=seed,
            now=now,
            session_id=svc.new_id("session"),
            prior_avatar_solved=record.avatar_solved_on(today),
            prior_badges=record.badges_on(today),
        )
        svc.store.append_events(game_state.session_id, game_state.event_log)
        apply_session_events(record, game_state.event_log)
        record.session_ids.append(game_state.session_id)
        svc.store.save_player(record)
        svc.register_session(game_state, engine)
        return schemas.session_response(game_state, message)

    def _owned_slot(svc: ServiceState, auth: ApiSession, session_id: str) -> _SessionSlot:
        slot = svc.session_slot(session_id)
        if slot.state.player_id != auth.player_id:
            raise Unauthorized("token does not grant access to this session")
        return slot

    @app.get("/sessions/{session_id}", response_model=schemas.SessionStateResponse)
    def get_session(
        session_id: str,
        auth: ApiSession = Depends(bearer),
        svc: ServiceState = Depends(state),
    ) -> schemas.SessionStateResponse:
        slot = _owned_slot(svc, auth, session_id)
        return schemas.session_response(slot.state)

    @app.post("/sessions/{session_id}/answer", response_model=schemas.AnswerResponse)
    def answer(
        session_id: str,
        body: schemas.AnswerRequest,
        auth: ApiSession = Depends(bearer),
        svc: ServiceState = Depends(state),
    ) -> schemas.AnswerResponse:
        slot = _owned_slot(svc, auth, session_id)
        now = svc.clock()
        with slot.lock:
            current = slot.state
            if body.challenge_id is not None and body.challenge_id != current.pending_id:
                raise StaleChallenge(
                    f"challenge {body.challenge_id!r} is not the pending challenge"
                )
            new_state, verdict, events = slot.engine.submit(current, body.text, now)
            svc.store.append_events(session_id, events)
            record = svc.store.load_player(new_state.player_id)
            apply_session_events(record, events)
            svc.store.save_player(record)
            slot.state = new_state

        badge_kinds = [
            str(e.payload["kind"]) for e in events if e.kind is EventKind.BADGE
        ]
        milestone = any(e.kind is EventKind.MILESTONE for e in events)
        message = None
        if milestone:
            message = schemas.message_model(
                social_message(
                    svc.pack.messages, MessageKind.MILESTONE_APPLAUSE, new_state.seed
                )
            )
        elif not verdict.correct:
            message = schemas.message_model(
                social_message(
                    svc.pack.messages,
                    MessageKind.WRONG_ANSWER_ENCOURAGEMENT,
                    f"{new_state.seed}:{len(new_state.event_log)}",
                )
            )
        answered = next(e for e in events if e.kind is EventKind.ANSWERED)
        return schemas.AnswerResponse(
            correct=verdict.correct,
            delta=int(answered.payload["delta"]),
            score=new_state.score,
            phase=new_state.phase.value,
            badges_awarded=badge_kinds,
            milestone=milestone,
            ended=new_state.ended,
            view=schemas.view_model(new_state.pending_view)
            if new_state.pending_view
            else None,
            message=message,
        )

    @app.post("/sessions/{session_id}/hint", response_model=schemas.HintResponse)
    def hint(
        session_id: str,
        body: schemas.HintRequest,
        auth: ApiSession = Depends(bearer),
        svc: ServiceState = Depends(state),
    ) -> schemas.HintResponse:
        slot = _owned_slot(svc, auth, session_id)
        now = svc.clock()
        try:
            kind = HintKind(body.kind)
        except ValueError:
            raise HintInapplicable(f"unknown hint kind {body.kind!r}")
        with slot.lock:
            current = slot.state
            record = svc.store.load_player(current.player_id)
            if body.use_free:
                if not free_hint_due(record.activity, now):
                    raise FreeHintUnavailable("no free hint is due")
                new_state, view, event = slot.engine.redeem_free_hint(current, kind, now)
                consume_free_hint(record.activity)
                cost = 0
            else:
                new_state, view, event = slot.engine.buy_hint(current, kind, now)
                cost = int(event.payload["cost"])
            svc.store.append_event(session_id, event)
            svc.store.save_player(record)
            slot.state = new_state
        return schemas.HintResponse(
            score=new_state.score,
            cost=cost,
            free=body.use_free,
            view=schemas.view_model(view),
        )

    # -- player insights ---------------------------------------------------------

    @app.get("/players/{player_id}/stats", response_model=schemas.StatsResponse)
    def player_stats(
        player_id: str,
        range: str = Query(default="day", pattern="^(day|week|month)$"),
        auth: ApiSession = Depends(bearer),
        svc: ServiceState = Depends(state),
    ) -> schemas.StatsResponse:
        record = _require_player(svc, auth, player_id)
        events: list[GameEvent] = []
        for session_id in record.session_ids:
            if svc.store.has_session(session_id):
                events.extend(svc.store.read_events(session_id))
        report = stats(events, range, svc.clock())
        return schemas.stats_response(report)

    @app.get(
        "/players/{player_id}/notifications",
        response_model=schemas.NotificationsResponse,
    )
    def notifications(
        player_id: str,
        auth: ApiSession = Depends(bearer),
        svc: ServiceState = Depends(state),
    ) -> schemas.NotificationsResponse:
        record = _require_player(svc, auth, player_id)
        now = svc.clock()
        reminder = next_notification(
            record.activity, now, svc.pack.messages, f"{player_id}:{now.date()}"
        )
        if reminder is not None:
            # serving the reminder counts as delivering it: at most one per 24h
            mark_reminded(record.activity, now)
            svc.store.save_player(record)
        return schemas.NotificationsResponse(
            reminder=schemas.notification_model(reminder) if reminder else None,
            free_hint_due=free_hint_due(record.activity, now),
        )

    # -- reset gate (unauthenticated: the caller lost their credentials) ---------

    @app.post(
        "/auth/{player_id}/reset",
        response_model=schemas.ResetBeginResponse,
        status_code=201,
    )
    def reset_begin(
        player_id: str,
        body: schemas.ResetBeginRequest | None = None,
        svc: ServiceState = Depends(state),
    ) -> schemas.ResetBeginResponse:
        if not svc.store.has_player(player_id):
            raise NotEnrolled(f"player {player_id!r} is not enrolled")
        now = svc.clock()
        seed = body.seed if body and body.seed is not None else svc.next_seed()
        history = svc.store.load_attempts(player_id)
        attempt = begin_reset(
            player_id,
            svc.pack.attributes,
            svc.policy,
            history,
            seed,
            now,
            attempt_id=svc.new_id("attempt"),
        )
        svc.store.record_attempt(attempt)
        return schemas.ResetBeginResponse(
            attempt_id=attempt.attempt_id,
            player_id=player_id,
            questions=[
                schemas.ResetQuestionModel(
                    attribute_id=attribute_id,
                    question=svc.pack.attribute_by_id(attribute_id).display_question,
                )
                for attribute_id in attempt.questions
            ],
        )

    @app.post(
        "/auth/{player_id}/reset/{attempt_id}/verify",
        response_model=schemas.ResetVerifyResponse,
    )
    def reset_verify(
        player_id: str,
        attempt_id: str,
        body: schemas.ResetVerifyRequest,
        svc: ServiceState = Depends(state),
    ) -> schemas.ResetVerifyResponse:
        if not svc.store.has_player(player_id):
            raise NotEnrolled(f"player {player_id!r} is not enrolled")
        attempt = svc.store.load_attempt(player_id, attempt_id)
        record = svc.store.load_player(player_id)
        profile = svc.profile(record.profile_id)
        history = svc.store.load_attempts(player_id)
        resolved = verify(
            attempt, profile, svc.policy, history, svc.clock(), submitted=body.answers
        )
        svc.store.record_attempt(resolved)
        return schemas.ResetVerifyResponse(outcome=resolved.outcome.value)

    return app


def run(settings: Settings | None = None) -> None:
    """Boot the service with uvicorn (used by the CLI ``serve`` command)."""
    import uvicorn

    settings = settings or Settings.from_env()
    uvicorn.run(create_app(settings), host=settings.host, port=settings.port)
