import { describe, expect, it, vi } from 'vitest';

import { renderChallenge, type ChallengeHandlers } from '../src/challenge.js';
import type { ChallengeView } from '../src/types.js';

const IMAGES = ['img/one.svg', 'img/two.svg', 'img/three.svg', 'img/four.svg'];
const CUE_TEXTS = ['first cue', 'second cue', 'third cue', 'fourth cue'];

function handlers(): ChallengeHandlers & { onSubmit: ReturnType<typeof vi.fn>; onHint: ReturnType<typeof vi.fn> } {
  return { onSubmit: vi.fn(), onHint: vi.fn() };
}

function recallView(overrides: Partial<ChallengeView> = {}): ChallengeView {
  return {
    challenge_id: 'av-colour-recall',
    kind: 'recall',
    images: IMAGES,
    cues_unlocked: false,
    letter_pool: ['T', 'E', 'A', 'L', 'Q', 'X', 'M', 'B', 'R', 'O', 'P', 'K'],
    options: null,
    revealed: [],
    ...overrides,
  };
}

function standardView(overrides: Partial<ChallengeView> = {}): ChallengeView {
  return {
    challenge_id: 'std-01',
    kind: 'standard',
    images: IMAGES,
    cues_unlocked: false,
    letter_pool: ['G', 'E', 'R', 'M', 'A', 'N', 'Y', 'Q', 'X', 'B', 'P', 'K'],
    options: null,
    length: 7,
    revealed: [],
    ...overrides,
  };
}

function recognitionView(overrides: Partial<ChallengeView> = {}): ChallengeView {
  return {
    challenge_id: 'av-food-recog',
    kind: 'recognition',
    images: IMAGES,
    cues_unlocked: false,
    letter_pool: null,
    options: ['paella', 'ramen', 'sushi', 'tacos', 'curry', 'fondue'],
    revealed: [],
    ...overrides,
  };
}

describe('recall screen', () => {
  it('renders 12 letter tiles and no word-length indicator', () => {
    const screen = renderChallenge(recallView(), handlers());
    expect(screen.querySelectorAll('[data-testid="letter-tile"]')).toHaveLength(12);
    expect(screen.querySelector('[data-testid="slot-row"]')).toBeNull();
    expect(screen.querySelectorAll('[data-testid="slot"]')).toHaveLength(0);
  });

  it('composes the answer from tapped tiles and submits it', () => {
    const h = handlers();
    const screen = renderChallenge(recallView(), h);
    const tiles = [...screen.querySelectorAll<HTMLButtonElement>('[data-testid="letter-tile"]')];
    const byLetter = (letter: string) =>
      tiles.find((tile) => tile.textContent === letter && !tile.disabled)!;
    for (const letter of ['T', 'E', 'A', 'L']) byLetter(letter).click();
    expect(screen.querySelector('[data-testid="entry"]')!.textContent).toBe('TEAL');
    screen.querySelector<HTMLButtonElement>('[data-testid="submit"]')!.click();
    expect(h.onSubmit).toHaveBeenCalledWith('TEAL');
  });

  it('each tile is usable once until backspaced', () => {
    const screen = renderChallenge(recallView(), handlers());
    const tile = screen.querySelector<HTMLButtonElement>('[data-testid="letter-tile"]')!;
    tile.click();
    expect(tile.disabled).toBe(true);
    screen.querySelector<HTMLButtonElement>('.backspace')!.click();
    expect(tile.disabled).toBe(false);
  });
});

describe('standard screen', () => {
  it('renders a slot row of exactly the answer length', () => {
    const screen = renderChallenge(standardView(), handlers());
    expect(screen.querySelector('[data-testid="slot-row"]')).not.toBeNull();
    expect(screen.querySelectorAll('[data-testid="slot"]')).toHaveLength(7);
  });
});

describe('recognition screen', () => {
  it('renders tappable options that submit their text', () => {
    const h = handlers();
    const screen = renderChallenge(recognitionView(), h);
    const options = [...screen.querySelectorAll<HTMLButtonElement>('[data-testid="option"]')];
    expect(options).toHaveLength(6);
    options[2].click();
    expect(h.onSubmit).toHaveBeenCalledWith('sushi');
  });

  it('offers option elimination only while more than two remain', () => {
    const many = renderChallenge(recognitionView(), handlers());
    expect(many.querySelector('[data-hint-kind="eliminate_options"]')).not.toBeNull();
    const two = renderChallenge(
      recognitionView({ options: ['paella', 'ramen'] }),
      handlers(),
    );
    expect(two.querySelector('[data-hint-kind="eliminate_options"]')).toBeNull();
  });
});

describe('images and cues', () => {
  it('renders the four images in exactly the payload order', () => {
    const screen = renderChallenge(standardView(), handlers());
    const rendered = [...screen.querySelectorAll<HTMLElement>('[data-testid="challenge-image"]')];
    expect(rendered.map((el) => el.dataset.imageRef)).toEqual(IMAGES);
  });

  it('hides cues until unlocked, then shows all four beneath the images', () => {
    const locked = renderChallenge(standardView(), handlers());
    expect(locked.querySelectorAll('[data-testid="cue"]')).toHaveLength(0);

    const unlocked = renderChallenge(
      standardView({ cues_unlocked: true, cues: CUE_TEXTS }),
      handlers(),
    );
    const cues = [...unlocked.querySelectorAll('[data-testid="cue"]')];
    expect(cues.map((el) => el.textContent)).toEqual(CUE_TEXTS);
    // each cue lives inside its image figure
    for (const cue of cues) {
      expect(cue.closest('[data-testid="challenge-image"]')).not.toBeNull();
    }
  });

  it('requests cue unlock through the hint handler', () => {
    const h = handlers();
    const screen = renderChallenge(standardView(), h);
    screen.querySelector<HTMLButtonElement>('[data-hint-kind="unlock_cues"]')!.click();
    expect(h.onHint).toHaveBeenCalledWith('unlock_cues');
  });

  it('shows revealed letters as position chips', () => {
    const screen = renderChallenge(
      recallView({ revealed: [{ index: 1, letter: 'E' }, { index: 0, letter: 'T' }] }),
      handlers(),
    );
    const chips = [...screen.querySelectorAll('.revealed-chip')];
    expect(chips.map((el) => el.textContent)).toEqual(['1: T', '2: E']);
  });
});
