// Typed client for the search service. The UI consumes only /search and
// /concepts and never computes scores itself: every number it shows comes
// verbatim from these payloads.

export type Mode = 'plain' | 'cluster' | 'community';

export interface HitPayload {
  id: string;
  score: number;
  title: string;
  tags: string[];
  concepts: [string, number][];
}

export interface GroupItemPayload {
  id: string;
  score: number;
  title: string;
  tags: string[];
}

export interface GroupPayload {
  concept_id: string;
  label: string[];
  score: number;
  items: GroupItemPayload[];
}

export interface SearchResponse {
  query: string;
  mode: string;
  k: number;
  alpha: number;
  lambda: number;
  top_concepts: number;
  effective_alpha: number;
  total_candidates: number;
  timing_ms: number;
  hits: HitPayload[];
  groups: GroupPayload[] | null;
}

export interface ConceptSummary {
  id: string;
  label: string[];
  query_score: number;
  popularity: number;
  member_total: number;
  member_items: number;
}

export interface SearchParams {
  q: string;
  mode: Mode;
  k: number;
  alpha: number;
  lambda: number;
  grouped: boolean;
  concept?: string;
  seed?: number;
}

export class ApiError extends Error {
  constructor(message: string, readonly status: number) {
    super(message);
  }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private readonly baseUrl: string = '',
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async get<T>(path: string, params: Record<string, string>): Promise<T> {
    const qs = new URLSearchParams(params).toString();
    const resp = await this.fetchFn(`${this.baseUrl}${path}?${qs}`);
    if (!resp.ok) {
      let detail = resp.statusText;
      try {
        const body = await resp.json();
        if (body && typeof body.detail === 'string') detail = body.detail;
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiError(detail, resp.status);
    }
    return (await resp.json()) as T;
  }

  search(params: SearchParams): Promise<SearchResponse> {
    const query: Record<string, string> = {
      q: params.q,
      mode: params.mode,
      k: String(params.k),
      alpha: String(params.alpha),
      lambda: String(params.lambda),
      grouped: params.grouped ? 'true' : 'false',
    };
    if (params.concept !== undefined) query.concept = params.concept;
    if (params.seed !== undefined) query.seed = String(params.seed);
    return this.get<SearchResponse>('/search', query);
  }

  concepts(q: string, top = 5): Promise<{ query: string; concepts: ConceptSummary[] }> {
    return this.get('/concepts', { q, top: String(top) });
  }
}
