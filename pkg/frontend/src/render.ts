/** Pure HTML-string renderers. Testable in node without a DOM. */

import type { RenderHint, RoundRecord } from './api.js';
import type { CardState, UiState } from './state.js';

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;');
}

function bounds(points: number[][]): { xMin: number; xMax: number; yMin: number; yMax: number } {
  let xMin = Infinity;
  let xMax = -Infinity;
  let yMin = Infinity;
  let yMax = -Infinity;
  for (const [x, y] of points) {
    xMin = Math.min(xMin, x);
    xMax = Math.max(xMax, x);
    yMin = Math.min(yMin, y);
    yMax = Math.max(yMax, y);
  }
  if (!isFinite(xMin)) {
    return { xMin: -1, xMax: 1, yMin: -1, yMax: 1 };
  }
  const padX = (xMax - xMin || 1) * 0.05;
  const padY = (yMax - yMin || 1) * 0.05;
  return { xMin: xMin - padX, xMax: xMax + padX, yMin: yMin - padY, yMax: yMax + padY };
}

/** SVG scatter of the training cloud with the query point highlighted. */
export function renderScatter(
  query: number[],
  contextPoints: number[][],
  size = 220
): string {
  const b = bounds(contextPoints.length > 0 ? contextPoints : [query]);
  const sx = (x: number): number => ((x - b.xMin) / (b.xMax - b.xMin)) * size;
  const sy = (y: number): number => size - ((y - b.yMin) / (b.yMax - b.yMin)) * size;
  const dots = contextPoints
    .map(([x, y]) => `<circle cx="${sx(x).toFixed(1)}" cy="${sy(y).toFixed(1)}" r="2" class="ctx"/>`)
    .join('');
  const q = `<circle cx="${sx(query[0]).toFixed(1)}" cy="${sy(query[1]).toFixed(1)}" r="6" class="query"/>`;
  return `<svg viewBox="0 0 ${size} ${size}" class="scatter">${dots}${q}</svg>`;
}

/** Grayscale image grid for a flattened square image in [0, 1]-ish range. */
export function renderImage(features: number[], width: number, height: number): string {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of features) {
    lo = Math.min(lo, v);
    hi = Math.max(hi, v);
  }
  const span = hi - lo || 1;
  const cell = 8;
  const rects: string[] = [];
  for (let r = 0; r < height; r++) {
    for (let c = 0; c < width; c++) {
      const v = Math.round(((features[r * width + c] - lo) / span) * 255);
      rects.push(
        `<rect x="${c * cell}" y="${r * cell}" width="${cell}" height="${cell}" ` +
          `fill="rgb(${v},${v},${v})"/>`
      );
    }
  }
  return `<svg viewBox="0 0 ${width * cell} ${height * cell}" class="image">${rects.join('')}</svg>`;
}

/** Plain numeric table for feature vectors that are neither 2-D nor images. */
export function renderVector(features: number[]): string {
  const cells = features.map((v) => `<span class="feat">${v.toPrecision(4)}</span>`).join(' ');
  return `<div class="vector">${cells}</div>`;
}

export function renderFeatures(features: number[], hint: RenderHint, contextPoints: number[][]): string {
  if (hint.kind === 'scatter2d') {
    return renderScatter(features, contextPoints);
  }
  if (hint.kind === 'image' && hint.width && hint.height) {
    return renderImage(features, hint.width, hint.height);
  }
  return renderVector(features);
}

export function renderCard(card: CardState, numClasses: number, contextPoints: number[][]): string {
  const buttons = Array.from({ length: numClasses }, (_, k) => {
    const active = card.label === k ? ' active' : '';
    return (
      `<button class="label-btn${active}" data-index="${card.item.index}" ` +
      `data-label="${k}">class ${k}</button>`
    );
  }).join('');
  const status =
    card.label === null
      ? '<span class="status unlabeled">unlabeled</span>'
      : `<span class="status labeled">labeled: ${card.label}</span>`;
  return (
    `<div class="card" data-index="${card.item.index}">` +
    `<h3>point #${card.item.index}</h3>` +
    renderFeatures(card.item.features, card.item.render, contextPoints) +
    `<div class="buttons">${buttons}</div>${status}</div>`
  );
}

/** Polyline learning curve: accuracy vs labeled-set size. */
export function renderCurve(records: RoundRecord[], width = 420, height = 160): string {
  if (records.length === 0) {
    return '<svg class="curve"></svg>';
  }
  const ns = records.map((r) => r.n_labeled);
  const nMin = Math.min(...ns);
  const nMax = Math.max(...ns);
  const sx = (n: number): number => (nMax === nMin ? width / 2 : ((n - nMin) / (nMax - nMin)) * width);
  const sy = (a: number): number => height - a * height;
  const pts = records.map((r) => `${sx(r.n_labeled).toFixed(1)},${sy(r.accuracy).toFixed(1)}`).join(' ');
  const last = records[records.length - 1];
  return (
    `<svg viewBox="0 0 ${width} ${height}" class="curve">` +
    `<polyline points="${pts}" fill="none"/>` +
    `</svg><p class="curve-caption">round ${last.round}: ` +
    `${(last.accuracy * 100).toFixed(1)}% with ${last.n_labeled} labels</p>`
  );
}

export function renderApp(state: UiState): string {
  const header = `<header><h1>activepool labeler</h1><p class="phase">${state.phase}</p></header>`;
  if (state.phase === 'error') {
    return `${header}<div class="error">${escapeHtml(state.message)}</div>`;
  }
  const curve = renderCurve(state.records);
  if (state.phase === 'labeling') {
    const cards = state.cards
      .map((c) => renderCard(c, state.numClasses, state.contextPoints))
      .join('');
    const ready = state.cards.every((c) => c.label !== null);
    const submit = `<button id="submit" ${ready ? '' : 'disabled '}class="submit">submit labels</button>`;
    return `${header}<h2>round ${state.round}: label these points</h2>` +
      `<div class="cards">${cards}</div>${submit}${curve}`;
  }
  if (state.phase === 'done') {
    return `${header}<h2>session complete</h2>${curve}`;
  }
  const advance = '<button id="advance" class="advance">next round</button>';
  return `${header}${state.phase === 'idle' ? '' : advance}${curve}`;
}
