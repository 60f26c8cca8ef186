/**
 * Challenge screen rendering: four pictures in the server-given order, then
 * either letter tiles (standard and recall challenges) or tappable options
 * (recognition).
 *
 * Layout rules the server contract relies on:
 *  - image DOM order always equals payload order (spatial memory cue);
 *  - a slot row showing the word length appears only when the view carries
 *    a `length` (standard challenges) - recall screens show no length
 *    indicator anywhere;
 *  - cue captions render beneath the images only once unlocked.
 */

import type { ChallengeView, HintKind } from './types.js';

export interface ChallengeHandlers {
  onSubmit(text: string): void;
  onHint(kind: HintKind): void;
}

const KIND_LABELS: Record<string, string> = {
  standard: 'Picture puzzle',
  recognition: 'Your avatar: pick the answer',
  recall: 'Your avatar: spell the answer',
};

/** Deterministic pastel from an image reference, used as an art stand-in. */
function refColor(ref: string): string {
  let hash = 0;
  for (let i = 0; i < ref.length; i++) {
    hash = (hash * 31 + ref.charCodeAt(i)) | 0;
  }
  const hue = ((hash % 360) + 360) % 360;
  return `hsl(${hue}, 65%, 78%)`;
}

function imageCaption(ref: string): string {
  const base = ref.split('/').pop() ?? ref;
  return base.replace(/\.[a-z0-9]+$/i, '').replace(/[_-]+/g, ' ');
}

function renderImages(view: ChallengeView): HTMLElement {
  const grid = document.createElement('div');
  grid.className = 'image-grid';
  grid.dataset.testid = 'image-grid';
  view.images.forEach((ref, index) => {
    const figure = document.createElement('figure');
    figure.className = 'challenge-image';
    figure.dataset.testid = 'challenge-image';
    figure.dataset.imageRef = ref;
    const art = document.createElement('div');
    art.className = 'image-art';
    art.style.background = refColor(ref);
    art.textContent = imageCaption(ref);
    figure.appendChild(art);
    if (view.cues_unlocked && view.cues && view.cues[index] !== undefined) {
      const caption = document.createElement('figcaption');
      caption.className = 'cue';
      caption.dataset.testid = 'cue';
      caption.textContent = view.cues[index];
      figure.appendChild(caption);
    }
    grid.appendChild(figure);
  });
  return grid;
}

function renderSlotRow(length: number): HTMLElement {
  const row = document.createElement('div');
  row.className = 'slot-row';
  row.dataset.testid = 'slot-row';
  for (let i = 0; i < length; i++) {
    const slot = document.createElement('span');
    slot.className = 'slot';
    slot.dataset.testid = 'slot';
    row.appendChild(slot);
  }
  return row;
}

function renderRevealed(view: ChallengeView): HTMLElement | null {
  if (view.revealed.length === 0) return null;
  const row = document.createElement('div');
  row.className = 'revealed-row';
  row.dataset.testid = 'revealed-row';
  for (const item of [...view.revealed].sort((a, b) => a.index - b.index)) {
    const chip = document.createElement('span');
    chip.className = 'revealed-chip';
    chip.textContent = `${item.index + 1}: ${item.letter}`;
    row.appendChild(chip);
  }
  return row;
}

function renderTileEntry(view: ChallengeView, handlers: ChallengeHandlers): HTMLElement {
  const wrap = document.createElement('div');
  wrap.className = 'tile-entry';

  const entry = document.createElement('div');
  entry.className = 'entry';
  entry.dataset.testid = 'entry';
  wrap.appendChild(entry);

  const tiles = document.createElement('div');
  tiles.className = 'tile-row';
  const picked: { button: HTMLButtonElement; letter: string }[] = [];

  const refreshEntry = () => {
    entry.textContent = picked.map((p) => p.letter).join('');
  };

  (view.letter_pool ?? []).forEach((letter) => {
    const tile = document.createElement('button');
    tile.type = 'button';
    tile.className = 'letter-tile';
    tile.dataset.testid = 'letter-tile';
    tile.textContent = letter;
    tile.addEventListener('click', () => {
      if (tile.disabled) return;
      tile.disabled = true;
      picked.push({ button: tile, letter });
      refreshEntry();
    });
    tiles.appendChild(tile);
  });
  wrap.appendChild(tiles);

  const controls = document.createElement('div');
  controls.className = 'entry-controls';

  const backspace = document.createElement('button');
  backspace.type = 'button';
  backspace.className = 'backspace';
  backspace.textContent = '⌫';
  backspace.addEventListener('click', () => {
    const last = picked.pop();
    if (last) {
      last.button.disabled = false;
      refreshEntry();
    }
  });
  controls.appendChild(backspace);

  const submit = document.createElement('button');
  submit.type = 'button';
  submit.className = 'submit';
  submit.dataset.testid = 'submit';
  submit.textContent = 'Submit';
  submit.addEventListener('click', () => {
    const text = picked.map((p) => p.letter).join('');
    if (text.length > 0) handlers.onSubmit(text);
  });
  controls.appendChild(submit);

  wrap.appendChild(controls);
  return wrap;
}

function renderOptions(view: ChallengeView, handlers: ChallengeHandlers): HTMLElement {
  const list = document.createElement('div');
  list.className = 'option-list';
  list.dataset.testid = 'option-list';
  (view.options ?? []).forEach((option) => {
    const button = document.createElement('button');
    button.type = 'button';
    button.className = 'option';
    button.dataset.testid = 'option';
    button.textContent = option;
    button.addEventListener('click', () => handlers.onSubmit(option));
    list.appendChild(button);
  });
  return list;
}

function renderHintBar(view: ChallengeView, handlers: ChallengeHandlers): HTMLElement {
  const bar = document.createElement('div');
  bar.className = 'hint-bar';
  bar.dataset.testid = 'hint-bar';

  const add = (kind: HintKind, label: string) => {
    const button = document.createElement('button');
    button.type = 'button';
    button.className = 'hint';
    button.dataset.hintKind = kind;
    button.textContent = label;
    button.addEventListener('click', () => handlers.onHint(kind));
    bar.appendChild(button);
  };

  if (!view.cues_unlocked) add('unlock_cues', 'Unlock cues');
  if (view.letter_pool) add('reveal_letter', 'Reveal a letter');
  if (view.options && view.options.length > 2) add('eliminate_options', 'Remove 2 options');
  return bar;
}

export function renderChallenge(view: ChallengeView, handlers: ChallengeHandlers): HTMLElement {
  const screen = document.createElement('section');
  screen.className = `challenge challenge-${view.kind}`;
  screen.dataset.testid = 'challenge';
  screen.dataset.challengeId = view.challenge_id;
  screen.dataset.kind = view.kind;

  const heading = document.createElement('h2');
  heading.textContent = KIND_LABELS[view.kind] ?? 'Challenge';
  screen.appendChild(heading);

  screen.appendChild(renderImages(view));

  // length indicator only when the server says to show one
  if (view.length !== undefined && view.length !== null) {
    screen.appendChild(renderSlotRow(view.length));
  }

  const revealed = renderRevealed(view);
  if (revealed) screen.appendChild(revealed);

  if (view.kind === 'recognition') {
    screen.appendChild(renderOptions(view, handlers));
  } else {
    screen.appendChild(renderTileEntry(view, handlers));
  }

  screen.appendChild(renderHintBar(view, handlers));
  return screen;
}
