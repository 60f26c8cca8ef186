/**
 * Typed client for the game service. All game logic stays server-side: this
 * client only moves JSON and never stores secrets beyond the in-memory
 * bearer token for the current tab.
 */

import type {
  AnswerResult,
  HintKind,
  HintResult,
  Notifications,
  PlayerCreated,
  ResetAttempt,
  ResetOutcome,
  SessionState,
  StatsRange,
  StatsReport,
} from './types.js';

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly code: string,
    message: string,
  ) {
    super(message);
    this.name = 'ApiError';
  }
}

export class ApiClient {
  private token: string | null = null;
  private readonly fetchImpl: FetchLike;

  constructor(
    private readonly baseUrl: string,
    fetchImpl?: FetchLike,
  ) {
    this.fetchImpl = fetchImpl ?? ((input, init) => fetch(input, init));
  }

  setToken(token: string | null): void {
    this.token = token;
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const headers: Record<string, string> = { 'Content-Type': 'application/json' };
    if (this.token) {
      headers['Authorization'] = `Bearer ${this.token}`;
    }
    const response = await this.fetchImpl(`${this.baseUrl}${path}`, {
      method,
      headers,
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const text = await response.text();
    const payload = text ? JSON.parse(text) : null;
    if (!response.ok) {
      const code = payload?.error?.code ?? `http_${response.status}`;
      const message = payload?.error?.message ?? response.statusText;
      throw new ApiError(response.status, code, message);
    }
    return payload as T;
  }

  async createPlayer(seed?: number, revealValues = true): Promise<PlayerCreated> {
    const created = await this.request<PlayerCreated>('POST', '/players', {
      seed: seed ?? null,
      reveal_values: revealValues,
    });
    this.token = created.token;
    return created;
  }

  startSession(playerId: string, seed?: number): Promise<SessionState> {
    return this.request('POST', '/sessions', { player_id: playerId, seed: seed ?? null });
  }

  getSession(sessionId: string): Promise<SessionState> {
    return this.request('GET', `/sessions/${sessionId}`);
  }

  answer(sessionId: string, text: string, challengeId?: string): Promise<AnswerResult> {
    return this.request('POST', `/sessions/${sessionId}/answer`, {
      text,
      challenge_id: challengeId ?? null,
    });
  }

  hint(sessionId: string, kind: HintKind, useFree = false): Promise<HintResult> {
    return this.request('POST', `/sessions/${sessionId}/hint`, {
      kind,
      use_free: useFree,
    });
  }

  stats(playerId: string, range: StatsRange): Promise<StatsReport> {
    return this.request('GET', `/players/${playerId}/stats?range=${range}`);
  }

  notifications(playerId: string): Promise<Notifications> {
    return this.request('GET', `/players/${playerId}/notifications`);
  }

  beginReset(playerId: string, seed?: number): Promise<ResetAttempt> {
    return this.request('POST', `/auth/${playerId}/reset`, { seed: seed ?? null });
  }

  verifyReset(
    playerId: string,
    attemptId: string,
    answers: Record<string, string>,
  ): Promise<ResetOutcome> {
    return this.request('POST', `/auth/${playerId}/reset/${attemptId}/verify`, { answers });
  }
}
