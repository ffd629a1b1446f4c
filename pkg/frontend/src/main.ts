// Page wiring: controls feed the store, the store renders into #results.
// The service base URL comes from ?api=... or window.CONCEPTSEARCH_URL,
// defaulting to same-origin.

import { ApiClient, Mode } from './api.js';
import { render } from './render.js';
import { SearchStore } from './state.js';

declare global {
  interface Window {
    CONCEPTSEARCH_URL?: string;
  }
}

function baseUrl(): string {
  const fromQuery = new URLSearchParams(window.location.search).get('api');
  return fromQuery ?? window.CONCEPTSEARCH_URL ?? '';
}

export function mount(root: Document = document): SearchStore {
  const api = new ApiClient(baseUrl());
  const store = new SearchStore(api);

  const queryInput = root.getElementById('query') as HTMLInputElement;
  const modeSelect = root.getElementById('mode') as HTMLSelectElement;
  const alphaInput = root.getElementById('alpha') as HTMLInputElement;
  const lambdaInput = root.getElementById('lambda') as HTMLInputElement;
  const kInput = root.getElementById('k') as HTMLInputElement;
  const viewToggle = root.getElementById('view-toggle') as HTMLButtonElement;
  const results = root.getElementById('results') as HTMLElement;

  queryInput.addEventListener('input', () => store.setQuery(queryInput.value));
  modeSelect.addEventListener('change', () =>
    store.setControls({ mode: modeSelect.value as Mode }),
  );
  alphaInput.addEventListener('change', () =>
    store.setControls({ alpha: Number(alphaInput.value) }),
  );
  lambdaInput.addEventListener('change', () =>
    store.setControls({ lambda: Number(lambdaInput.value) }),
  );
  kInput.addEventListener('change', () => store.setControls({ k: Number(kInput.value) }));
  viewToggle.addEventListener('click', () => store.toggleView());

  results.addEventListener('click', (event) => {
    const target = event.target as HTMLElement;
    if (target.classList.contains('drill-button') && target.dataset.conceptId) {
      void store.drillDown(target.dataset.conceptId);
    } else if (target.classList.contains('back-button')) {
      store.back();
    }
  });

  store.subscribe((state) => render(state, results));
  render(store.getState(), results);
  return store;
}

if (typeof document !== 'undefined' && document.getElementById('results')) {
  mount();
}
