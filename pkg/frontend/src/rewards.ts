/**
 * Score, badge, and celebration rendering. Milestones flash a celebration
 * banner and play a short chime (skipped where WebAudio is unavailable).
 */

import type { BadgeAward } from './types.js';

const BADGE_ICONS: Record<string, string> = {
  smiley: '🙂',
  cake: '🍰',
  trophy: '🏆',
};

export function renderScore(score: number): HTMLElement {
  const el = document.createElement('div');
  el.className = 'score';
  el.dataset.testid = 'score';
  el.textContent = `${score} points`;
  return el;
}

export function renderRewards(badges: BadgeAward[], milestone: boolean): HTMLElement {
  const panel = document.createElement('div');
  panel.className = 'rewards';
  panel.dataset.testid = 'rewards';

  const shelf = document.createElement('div');
  shelf.className = 'badge-shelf';
  for (const badge of badges) {
    const chip = document.createElement('span');
    chip.className = `badge badge-${badge.kind}`;
    chip.dataset.testid = 'badge';
    chip.dataset.badgeKind = badge.kind;
    chip.title = `earned at ${badge.avatar_solved_count_at_award} avatar challenges`;
    chip.textContent = BADGE_ICONS[badge.kind] ?? '🎖';
    shelf.appendChild(chip);
  }
  panel.appendChild(shelf);

  if (milestone) {
    const celebration = document.createElement('div');
    celebration.className = 'celebration';
    celebration.dataset.testid = 'celebration';
    celebration.textContent = '🎉 Milestone! 🎉';
    panel.appendChild(celebration);
    playChime();
  }
  return panel;
}

function playChime(): void {
  const AudioCtor =
    (globalThis as { AudioContext?: typeof AudioContext }).AudioContext;
  if (!AudioCtor) return;
  try {
    const ctx = new AudioCtor();
    const osc = ctx.createOscillator();
    const gain = ctx.createGain();
    osc.frequency.value = 880;
    gain.gain.setValueAtTime(0.12, ctx.currentTime);
    gain.gain.exponentialRampToValueAtTime(0.0001, ctx.currentTime + 0.4);
    osc.connect(gain).connect(ctx.destination);
    osc.start();
    osc.stop(ctx.currentTime + 0.4);
  } catch {
    // audio is a nicety; never let it break the game
  }
}
