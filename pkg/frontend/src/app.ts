/**
 * Single-page app wiring: enrollment, daily play loop, progress dashboard,
 * and the password-reset walkthrough. The client never advances past a
 * challenge until the server verdict arrives, and it never persists profile
 * values - they are shown once at enrollment for the player to study.
 */

import { ApiClient, ApiError } from './api.js';
import { renderChallenge } from './challenge.js';
import { renderRewards, renderScore } from './rewards.js';
import { renderStats } from './stats.js';
import type {
  ChallengeView,
  PlayerCreated,
  SocialMessage,
  StatsRange,
} from './types.js';

interface AppState {
  player: PlayerCreated | null;
  sessionId: string | null;
  view: ChallengeView | null;
  score: number;
  ended: boolean;
}

export class App {
  private readonly state: AppState = {
    player: null,
    sessionId: null,
    view: null,
    score: 0,
    ended: false,
  };

  constructor(
    private readonly api: ApiClient,
    private readonly root: HTMLElement,
  ) {}

  start(): void {
    this.renderEnrollScreen();
  }

  private clear(): HTMLElement {
    this.root.replaceChildren();
    return this.root;
  }

  private banner(text: string, cls = 'info'): HTMLElement {
    const el = document.createElement('div');
    el.className = `banner banner-${cls}`;
    el.textContent = text;
    return el;
  }

  private messageBanner(message: SocialMessage): HTMLElement {
    const el = this.banner(message.text, message.celebrate ? 'celebrate' : 'social');
    el.dataset.testid = 'social-message';
    return el;
  }

  // -- enrollment ----------------------------------------------------------

  private renderEnrollScreen(): void {
    const root = this.clear();
    const intro = document.createElement('section');
    intro.className = 'enroll';
    intro.innerHTML = `
      <h1>avatarquest</h1>
      <p>Meet your avatar: a generated character whose details answer your
      password-reset questions. Play daily puzzles to make those details
      unforgettable.</p>`;
    const button = document.createElement('button');
    button.className = 'primary';
    button.textContent = 'Create my avatar';
    button.addEventListener('click', () => {
      void this.enroll();
    });
    intro.appendChild(button);
    root.appendChild(intro);
  }

  private async enroll(): Promise<void> {
    const player = await this.api.createPlayer(undefined, true);
    this.state.player = player;
    const root = this.clear();
    const section = document.createElement('section');
    section.className = 'profile-study';
    const heading = document.createElement('h2');
    heading.textContent = 'Study your avatar';
    section.appendChild(heading);
    const note = document.createElement('p');
    note.textContent =
      'These details answer your security questions later. The game will help you remember them - this is the only time they are shown in full.';
    section.appendChild(note);

    const table = document.createElement('table');
    table.className = 'profile-table';
    for (const attribute of player.profile.attributes) {
      const row = table.insertRow();
      row.insertCell().textContent = attribute.question;
      row.insertCell().textContent = player.profile.values?.[attribute.attribute_id] ?? '';
    }
    section.appendChild(table);

    const play = document.createElement('button');
    play.className = 'primary';
    play.textContent = 'Start training';
    play.addEventListener('click', () => {
      void this.startSession();
    });
    section.appendChild(play);
    root.appendChild(section);
  }

  // -- play loop -------------------------------------------------------------

  private async startSession(): Promise<void> {
    const player = this.state.player;
    if (!player) return;
    const session = await this.api.startSession(player.player_id);
    this.state.sessionId = session.session_id;
    this.state.view = session.view;
    this.state.score = session.score;
    this.state.ended = session.ended;
    this.renderPlayScreen(session.message ?? undefined, session.badges.length > 0);
  }

  private renderPlayScreen(message?: SocialMessage, milestone = false, awarded: string[] = []): void {
    const root = this.clear();
    const header = document.createElement('header');
    header.className = 'play-header';
    header.appendChild(renderScore(this.state.score));
    root.appendChild(header);

    if (message) root.appendChild(this.messageBanner(message));
    if (awarded.length > 0) {
      root.appendChild(
        renderRewards(
          awarded.map((kind) => ({
            kind,
            awarded_at: '',
            avatar_solved_count_at_award: 0,
          })),
          milestone,
        ),
      );
    }

    const view = this.state.view;
    if (this.state.ended || view === null) {
      void this.renderSessionDone(root);
      return;
    }

    root.appendChild(
      renderChallenge(view, {
        onSubmit: (text) => {
          void this.submitAnswer(text);
        },
        onHint: (kind) => {
          void this.buyHint(kind);
        },
      }),
    );
  }

  private async submitAnswer(text: string): Promise<void> {
    const { sessionId, view } = this.state;
    if (!sessionId || !view) return;
    try {
      // server verdict is authoritative: no optimistic advance
      const result = await this.api.answer(sessionId, text, view.challenge_id);
      this.state.view = result.view;
      this.state.score = result.score;
      this.state.ended = result.ended;
      this.renderPlayScreen(result.message ?? undefined, result.milestone, result.badges_awarded);
    } catch (error) {
      this.showError(error);
    }
  }

  private async buyHint(kind: 'reveal_letter' | 'unlock_cues' | 'eliminate_options'): Promise<void> {
    const { sessionId } = this.state;
    if (!sessionId) return;
    try {
      const result = await this.api.hint(sessionId, kind);
      this.state.view = result.view;
      this.state.score = result.score;
      this.renderPlayScreen();
    } catch (error) {
      this.showError(error);
    }
  }

  private async renderSessionDone(root: HTMLElement): Promise<void> {
    const done = document.createElement('section');
    done.className = 'session-done';
    const heading = document.createElement('h2');
    heading.textContent = `Session complete - ${this.state.score} points`;
    done.appendChild(heading);

    const actions = document.createElement('div');
    actions.className = 'actions';
    const statsButton = document.createElement('button');
    statsButton.textContent = 'My progress';
    statsButton.addEventListener('click', () => {
      void this.renderStatsScreen('week');
    });
    const againButton = document.createElement('button');
    againButton.textContent = 'Play again';
    againButton.addEventListener('click', () => {
      void this.startSession();
    });
    const resetButton = document.createElement('button');
    resetButton.textContent = 'Try a password reset';
    resetButton.addEventListener('click', () => {
      void this.renderResetScreen();
    });
    actions.append(statsButton, againButton, resetButton);
    done.appendChild(actions);
    root.appendChild(done);
  }

  // -- dashboard ----------------------------------------------------------------

  private async renderStatsScreen(range: StatsRange): Promise<void> {
    const player = this.state.player;
    if (!player) return;
    const report = await this.api.stats(player.player_id, range);
    const root = this.clear();

    const selector = document.createElement('div');
    selector.className = 'range-selector';
    (['day', 'week', 'month'] as StatsRange[]).forEach((option) => {
      const button = document.createElement('button');
      button.textContent = option;
      button.disabled = option === range;
      button.addEventListener('click', () => {
        void this.renderStatsScreen(option);
      });
      selector.appendChild(button);
    });
    root.appendChild(selector);
    root.appendChild(renderStats(report));

    const back = document.createElement('button');
    back.textContent = 'Keep training';
    back.addEventListener('click', () => {
      void this.startSession();
    });
    root.appendChild(back);
  }

  // -- reset walkthrough -----------------------------------------------------------

  private async renderResetScreen(): Promise<void> {
    const player = this.state.player;
    if (!player) return;
    const root = this.clear();
    const section = document.createElement('section');
    section.className = 'reset';
    const heading = document.createElement('h2');
    heading.textContent = 'Password reset drill';
    section.appendChild(heading);

    try {
      const attempt = await this.api.beginReset(player.player_id);
      const form = document.createElement('form');
      const inputs = new Map<string, HTMLInputElement>();
      for (const question of attempt.questions) {
        const label = document.createElement('label');
        label.textContent = question.question;
        const input = document.createElement('input');
        input.type = 'text';
        input.name = question.attribute_id;
        inputs.set(question.attribute_id, input);
        label.appendChild(input);
        form.appendChild(label);
      }
      const submit = document.createElement('button');
      submit.className = 'primary';
      submit.type = 'submit';
      submit.textContent = 'Verify';
      form.appendChild(submit);
      form.addEventListener('submit', (event) => {
        event.preventDefault();
        const answers: Record<string, string> = {};
        inputs.forEach((input, attributeId) => {
          answers[attributeId] = input.value;
        });
        void this.api
          .verifyReset(player.player_id, attempt.attempt_id, answers)
          .then((result) => {
            section.appendChild(
              this.banner(
                result.outcome === 'granted'
                  ? 'Access granted - your training paid off!'
                  : `Outcome: ${result.outcome}`,
                result.outcome === 'granted' ? 'celebrate' : 'warn',
              ),
            );
          })
          .catch((error) => this.showError(error));
      });
      section.appendChild(form);
    } catch (error) {
      if (error instanceof ApiError && error.code === 'locked_out') {
        section.appendChild(this.banner('Too many failed attempts - locked out for now.', 'warn'));
      } else {
        throw error;
      }
    }

    const back = document.createElement('button');
    back.textContent = 'Back to training';
    back.addEventListener('click', () => {
      void this.startSession();
    });
    section.appendChild(back);
    root.appendChild(section);
  }

  private showError(error: unknown): void {
    const text =
      error instanceof ApiError ? `${error.message} (${error.code})` : String(error);
    this.root.prepend(this.banner(text, 'warn'));
  }
}
