/** Typed client for the activepool labeling service HTTP API (docs/api.md). */

export interface RenderHint {
  kind: 'scatter2d' | 'image' | 'vector';
  width?: number;
  height?: number;
  length?: number;
}

export interface PendingItem {
  index: number;
  features: number[];
  render: RenderHint;
}

export interface RoundRecord {
  round: number;
  n_labeled: number;
  accuracy: number;
  selected_indices: number[];
  wall_time: number;
}

export interface PendingPayload {
  pending: PendingItem[];
  context_points: number[][];
  num_classes: number;
  round: number;
}

export interface AdvanceResponse extends Partial<PendingPayload> {
  done: boolean;
  record?: RoundRecord;
  round?: number;
}

export interface CurveResponse {
  records: RoundRecord[];
  rounds_total: number;
  done: boolean;
}

export interface SessionInfo {
  session_id: string;
  mode: string;
  round: number;
  accuracy: number;
}

export interface LabelPair {
  index: number;
  label: number;
}

export interface SubmitResponse {
  remaining: number;
  record?: RoundRecord;
}

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string
  ) {
    super(message);
  }
}

async function request<T>(base: string, path: string, init?: RequestInit): Promise<T> {
  const resp = await fetch(base + path, {
    headers: { 'Content-Type': 'application/json' },
    ...init
  });
  const body = await resp.json();
  if (!resp.ok) {
    const detail = body?.detail ?? {};
    throw new ApiError(resp.status, detail.code ?? 'unknown', detail.message ?? resp.statusText);
  }
  return body as T;
}

export class SessionClient {
  constructor(
    readonly base: string,
    readonly sessionId: string
  ) {}

  static async create(base: string, config: unknown, mode: string): Promise<SessionClient> {
    const info = await request<SessionInfo>(base, '/sessions', {
      method: 'POST',
      body: JSON.stringify({ config, mode })
    });
    return new SessionClient(base, info.session_id);
  }

  advance(): Promise<AdvanceResponse> {
    return request(this.base, `/sessions/${this.sessionId}/advance`, { method: 'POST' });
  }

  submitLabels(labels: LabelPair[]): Promise<SubmitResponse> {
    return request(this.base, `/sessions/${this.sessionId}/labels`, {
      method: 'POST',
      body: JSON.stringify({ labels })
    });
  }

  curve(): Promise<CurveResponse> {
    return request(this.base, `/sessions/${this.sessionId}/curve`);
  }

  pending(): Promise<PendingPayload> {
    return request(this.base, `/sessions/${this.sessionId}/pending`);
  }

  config(): Promise<{ mode: string; config: Record<string, unknown> }> {
    return request(this.base, `/sessions/${this.sessionId}/config`);
  }
}
