// View state and transitions. Requests carry a sequence number so a slow
// response can never overwrite a newer one; control changes are debounced
// into exactly one request each; drill-down snapshots the state so back
// restores the prior view without refetching.

import { ApiError, Mode, SearchParams, SearchResponse } from './api.js';

/** The slice of ApiClient the store needs; tests substitute fakes. */
export interface SearchApi {
  search(params: SearchParams): Promise<SearchResponse>;
}

export interface ViewState {
  query: string;
  mode: Mode;
  alpha: number;
  lambda: number;
  k: number;
  view: 'groups' | 'flat';
  response: SearchResponse | null;
  selectedConcept: string | null;
  drillResponse: SearchResponse | null;
  loading: boolean;
  error: string | null;
}

export function initialState(): ViewState {
  return {
    query: '',
    mode: 'community',
    alpha: 1.0,
    lambda: 0.5,
    k: 10,
    view: 'groups',
    response: null,
    selectedConcept: null,
    drillResponse: null,
    loading: false,
    error: null,
  };
}

type Listener = (state: ViewState) => void;

interface Snapshot {
  selectedConcept: string | null;
  drillResponse: SearchResponse | null;
  view: 'groups' | 'flat';
}

export class SearchStore {
  private state: ViewState = initialState();
  private listeners: Listener[] = [];
  private seq = 0; // last issued request
  private appliedSeq = 0; // last response applied to state
  private timer: ReturnType<typeof setTimeout> | null = null;
  private history: Snapshot[] = [];

  constructor(
    private readonly api: SearchApi,
    private readonly debounceMs = 150,
  ) {}

  getState(): ViewState {
    return this.state;
  }

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  private patch(changes: Partial<ViewState>): void {
    this.state = { ...this.state, ...changes };
    for (const listener of this.listeners) listener(this.state);
  }

  setQuery(query: string): void {
    this.patch({ query });
    this.scheduleSearch();
  }

  setControls(changes: Partial<Pick<ViewState, 'mode' | 'alpha' | 'lambda' | 'k'>>): void {
    // any control change invalidates drill-down state: groups from the old
    // configuration must never be reused
    this.history = [];
    this.patch({ ...changes, selectedConcept: null, drillResponse: null });
    this.scheduleSearch();
  }

  toggleView(): void {
    this.patch({ view: this.state.view === 'groups' ? 'flat' : 'groups' });
  }

  private scheduleSearch(): void {
    if (this.timer !== null) clearTimeout(this.timer);
    this.timer = setTimeout(() => {
      this.timer = null;
      void this.runSearch();
    }, this.debounceMs);
  }

  /** Issue the main (unpinned) search for the current controls. */
  async runSearch(): Promise<void> {
    if (!this.state.query.trim()) {
      this.patch({ response: null, loading: false, error: null });
      return;
    }
    const mySeq = ++this.seq;
    this.patch({ loading: true });
    try {
      const response = await this.api.search({
        q: this.state.query,
        mode: this.state.mode,
        k: this.state.k,
        alpha: this.state.alpha,
        lambda: this.state.lambda,
        grouped: true,
      });
      if (mySeq <= this.appliedSeq) return; // stale: a newer response landed
      this.appliedSeq = mySeq;
      this.patch({ response, loading: false, error: null });
    } catch (err) {
      if (mySeq <= this.appliedSeq) return;
      this.appliedSeq = mySeq;
      // keep the previous results on screen; just show the banner
      this.patch({ loading: false, error: err instanceof Error ? err.message : String(err) });
    }
  }

  /** Fetch the pinned full item list for one concept. */
  async drillDown(conceptId: string): Promise<void> {
    this.history.push({
      selectedConcept: this.state.selectedConcept,
      drillResponse: this.state.drillResponse,
      view: this.state.view,
    });
    const mySeq = ++this.seq;
    this.patch({ loading: true, selectedConcept: conceptId });
    try {
      const response = await this.api.search({
        q: this.state.query,
        mode: this.state.mode,
        k: this.state.k,
        alpha: this.state.alpha,
        lambda: this.state.lambda,
        grouped: true,
        concept: conceptId,
      });
      if (mySeq <= this.appliedSeq) return;
      this.appliedSeq = mySeq;
      this.patch({ drillResponse: response, loading: false, error: null });
    } catch (err) {
      if (mySeq <= this.appliedSeq) return;
      this.appliedSeq = mySeq;
      if (err instanceof ApiError && err.status === 404) {
        // stale concept id: drop the pin and refetch the whole search
        this.history.pop();
        this.patch({ selectedConcept: null, drillResponse: null });
        await this.runSearch();
        return;
      }
      this.patch({ loading: false, error: err instanceof Error ? err.message : String(err) });
    }
  }

  /** Restore the view as it was before the last drill-down. */
  back(): void {
    const snapshot = this.history.pop();
    if (!snapshot) return;
    this.patch({
      selectedConcept: snapshot.selectedConcept,
      drillResponse: snapshot.drillResponse,
      view: snapshot.view,
      error: null,
    });
  }
}
