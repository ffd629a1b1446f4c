import { GroupPayload, HitPayload, SearchParams, SearchResponse } from '../src/api.js';

export function hit(id: string, score: number, tags: string[] = []): HitPayload {
  return { id, score, title: '', tags, concepts: [] };
}

export function group(conceptId: string, label: string[], score: number, ids: string[]): GroupPayload {
  return {
    concept_id: conceptId,
    label,
    score,
    items: ids.map((id, n) => ({ id, score: 1 - n * 0.1, title: '', tags: [] })),
  };
}

export function response(overrides: Partial<SearchResponse> = {}): SearchResponse {
  return {
    query: 'jasmine',
    mode: 'community',
    k: 10,
    alpha: 1.0,
    lambda: 0.5,
    top_concepts: 10,
    effective_alpha: 1.0,
    total_candidates: 6,
    timing_ms: 0.5,
    hits: [hit('i1', 2.5), hit('i3', 2.2)],
    groups: [
      group('c000', ['flower', 'jasmine', 'garden'], 2.78, ['i1', 'i2', 'i3']),
      group('c001', ['dog', 'jasmine'], 1.27, ['i4']),
    ],
    ...overrides,
  };
}

/** Scriptable fake API recording every search call. */
export class FakeApi {
  calls: SearchParams[] = [];
  private queue: Array<() => Promise<SearchResponse>> = [];
  fallback: () => Promise<SearchResponse> = () => Promise.resolve(response());

  enqueue(fn: () => Promise<SearchResponse>): void {
    this.queue.push(fn);
  }

  search(params: SearchParams): Promise<SearchResponse> {
    this.calls.push(params);
    const next = this.queue.shift() ?? this.fallback;
    return next();
  }
}

export function deferred<T>(): { promise: Promise<T>; resolve: (v: T) => void; reject: (e: unknown) => void } {
  let resolve!: (v: T) => void;
  let reject!: (e: unknown) => void;
  const promise = new Promise<T>((res, rej) => {
    resolve = res;
    reject = rej;
  });
  return { promise, resolve, reject };
}
