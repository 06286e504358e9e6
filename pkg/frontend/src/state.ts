/** Pure view-model for a labeling session. No DOM, no network. */

import type { PendingItem, RoundRecord, LabelPair } from './api.js';

export interface CardState {
  item: PendingItem;
  /** Chosen class, or null while undecided. */
  label: number | null;
}

export interface UiState {
  phase: 'idle' | 'labeling' | 'between-rounds' | 'done' | 'error';
  round: number;
  numClasses: number;
  cards: CardState[];
  contextPoints: number[][];
  records: RoundRecord[];
  roundsTotal: number;
  message: string;
}

export function initialState(): UiState {
  return {
    phase: 'idle',
    round: 0,
    numClasses: 0,
    cards: [],
    contextPoints: [],
    records: [],
    roundsTotal: 0,
    message: ''
  };
}

export function beginRound(
  state: UiState,
  pending: PendingItem[],
  contextPoints: number[][],
  numClasses: number,
  round: number
): UiState {
  return {
    ...state,
    phase: 'labeling',
    round,
    numClasses,
    contextPoints,
    cards: pending.map((item) => ({ item, label: null })),
    message: ''
  };
}

export function setLabel(state: UiState, index: number, label: number): UiState {
  if (label < 0 || label >= state.numClasses) {
    throw new RangeError(`label ${label} outside [0, ${state.numClasses})`);
  }
  const cards = state.cards.map((c) => (c.item.index === index ? { ...c, label } : c));
  if (cards.every((c, i) => c === state.cards[i])) {
    throw new RangeError(`index ${index} is not pending`);
  }
  return { ...state, cards };
}

export function allLabeled(state: UiState): boolean {
  return state.cards.length > 0 && state.cards.every((c) => c.label !== null);
}

export function labelsForSubmit(state: UiState): LabelPair[] {
  if (!allLabeled(state)) {
    throw new Error('cannot submit: some cards are unlabeled');
  }
  return state.cards.map((c) => ({ index: c.item.index, label: c.label as number }));
}

export function roundComplete(state: UiState, record: RoundRecord): UiState {
  return {
    ...state,
    phase: 'between-rounds',
    cards: [],
    records: [...state.records, record],
    message: ''
  };
}

export function sessionDone(state: UiState): UiState {
  return { ...state, phase: 'done', cards: [], message: '' };
}

export function withError(state: UiState, message: string): UiState {
  return { ...state, phase: 'error', message };
}

/** Accuracy curve as [n_labeled, accuracy] pairs for plotting. */
export function curvePoints(records: RoundRecord[]): Array<[number, number]> {
  return records.map((r) => [r.n_labeled, r.accuracy]);
}
