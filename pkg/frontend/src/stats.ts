/**
 * Progress dashboard: per-day bar chart of correctly solved avatar
 * challenges plus the remaining-to-next-stage counter.
 */

import type { StatsReport } from './types.js';

export function renderStats(report: StatsReport): HTMLElement {
  const panel = document.createElement('div');
  panel.className = 'stats';
  panel.dataset.testid = 'stats';

  const heading = document.createElement('h3');
  heading.textContent = `Solved avatar challenges (${report.range})`;
  panel.appendChild(heading);

  const max = Math.max(1, ...report.buckets.map((b) => b.correct));
  const chart = document.createElement('div');
  chart.className = 'bar-chart';
  chart.dataset.testid = 'bar-chart';
  for (const bucket of report.buckets) {
    const column = document.createElement('div');
    column.className = 'bar-column';
    const bar = document.createElement('div');
    bar.className = 'bar';
    bar.dataset.testid = 'bar';
    bar.dataset.day = bucket.day;
    bar.dataset.count = String(bucket.correct);
    bar.style.height = `${Math.round((bucket.correct / max) * 100)}%`;
    bar.title = `${bucket.day}: ${bucket.correct}`;
    const label = document.createElement('span');
    label.className = 'bar-label';
    label.textContent = bucket.day.slice(5); // MM-DD
    column.appendChild(bar);
    column.appendChild(label);
    chart.appendChild(column);
  }
  panel.appendChild(chart);

  const total = document.createElement('p');
  total.className = 'stats-total';
  total.dataset.testid = 'stats-total';
  total.textContent = `${report.total_correct} solved in this ${report.range}`;
  panel.appendChild(total);

  const remaining = document.createElement('p');
  remaining.className = 'stats-remaining';
  remaining.dataset.testid = 'stats-remaining';
  remaining.textContent =
    report.stage === 'advance_recall'
      ? 'Recall stage unlocked'
      : `${report.remaining_to_next_stage} correct recognition answers to unlock the recall stage`;
  panel.appendChild(remaining);

  return panel;
}
