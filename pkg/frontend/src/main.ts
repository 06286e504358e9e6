/** DOM wiring: connects the session client, view-model, and renderers. */

import { ApiError, SessionClient } from './api.js';
import type { AdvanceResponse } from './api.js';
import * as state from './state.js';
import { renderApp } from './render.js';

const DEFAULT_CONFIG = {
  dataset: { kind: 'two_gaussians', n_per_class: 100, separation: 3.0, noise_sd: 1.0 },
  preprocess: 'none',
  n_init: 10,
  n_query: 5,
  rounds: 10,
  test_fraction: 0.25,
  net: { layer_widths: [2, 8, 2], dropout_rate: 0.2, init_seed: 0 },
  train: { epochs: 100, batch_size: 32, learning_rate: 0.1 },
  strategy: { kind: 'entropy' },
  seed: 0,
  warm_start: false
};

let ui = state.initialState();
let client: SessionClient | null = null;

const root = document.getElementById('app') as HTMLElement;
const baseInput = document.getElementById('base-url') as HTMLInputElement;
const startBtn = document.getElementById('start') as HTMLButtonElement;

function redraw(): void {
  root.innerHTML = renderApp(ui);
}

async function refreshCurve(): Promise<void> {
  if (client === null) return;
  const curve = await client.curve();
  ui = { ...ui, records: curve.records, roundsTotal: curve.rounds_total };
}

function applyAdvance(resp: AdvanceResponse): void {
  if (resp.done) {
    ui = state.sessionDone(ui);
  } else if (resp.pending !== undefined) {
    ui = state.beginRound(
      ui,
      resp.pending,
      resp.context_points ?? [],
      resp.num_classes ?? 0,
      resp.round ?? ui.round
    );
  }
}

async function advance(): Promise<void> {
  if (client === null) return;
  try {
    applyAdvance(await client.advance());
  } catch (err) {
    if (err instanceof ApiError && err.code === 'labels_pending') {
      // Reload the outstanding queries instead of failing (e.g. page refresh).
      const pending = await client.pending();
      ui = state.beginRound(ui, pending.pending, pending.context_points, pending.num_classes, pending.round);
    } else {
      ui = state.withError(ui, String(err));
    }
  }
  redraw();
}

async function submit(): Promise<void> {
  if (client === null) return;
  try {
    const resp = await client.submitLabels(state.labelsForSubmit(ui));
    if (resp.remaining === 0 && resp.record) {
      ui = state.roundComplete(ui, resp.record);
      await refreshCurve();
    }
  } catch (err) {
    ui = state.withError(ui, String(err));
  }
  redraw();
}

async function start(): Promise<void> {
  const base = baseInput.value.replace(/\/$/, '');
  try {
    client = await SessionClient.create(base, DEFAULT_CONFIG, 'human');
    ui = state.initialState();
    ui = { ...ui, phase: 'between-rounds' };
    await refreshCurve();
    redraw();
  } catch (err) {
    ui = state.withError(ui, `cannot reach server at ${base}: ${String(err)}`);
    redraw();
  }
}

root.addEventListener('click', (ev) => {
  const target = ev.target as HTMLElement;
  if (target.id === 'advance') {
    void advance();
    return;
  }
  if (target.id === 'submit') {
    void submit();
    return;
  }
  if (target.classList.contains('label-btn')) {
    const index = Number(target.dataset.index);
    const label = Number(target.dataset.label);
    ui = state.setLabel(ui, index, label);
    redraw();
  }
});

startBtn.addEventListener('click', () => void start());
redraw();
