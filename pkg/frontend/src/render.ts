// DOM rendering. Scores are displayed formatted but every element carries
// the server's verbatim value in data-score, so the thin-client contract
// (the UI never computes a number) is checkable.

import { GroupItemPayload, HitPayload, SearchResponse } from './api.js';
import { ViewState } from './state.js';

function el(tag: string, className: string, text?: string): HTMLElement {
  const node = document.createElement(tag);
  node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function scoreBadge(score: number): HTMLElement {
  const badge = el('span', 'score', score.toFixed(4));
  badge.dataset.score = String(score);
  return badge;
}

function itemCard(item: GroupItemPayload | HitPayload): HTMLElement {
  const card = el('div', 'item-card');
  card.dataset.itemId = item.id;
  const head = el('div', 'item-head');
  head.appendChild(el('span', 'item-id', item.title || item.id));
  head.appendChild(scoreBadge(item.score));
  card.appendChild(head);
  const chips = el('div', 'tag-chips');
  for (const tag of item.tags) chips.appendChild(el('span', 'chip', tag));
  card.appendChild(chips);
  return card;
}

export function renderGroups(state: ViewState, root: HTMLElement): void {
  const response = state.response as SearchResponse;
  const groups = response.groups ?? [];
  if (groups.length === 0) {
    root.appendChild(el('p', 'empty', 'no concepts matched this query'));
    return;
  }
  for (const group of groups) {
    const panel = el('section', 'concept-panel');
    panel.dataset.conceptId = group.concept_id;
    const header = el('header', 'concept-header');
    header.appendChild(el('h3', 'concept-label', group.label.join(' ')));
    header.appendChild(scoreBadge(group.score));
    const drill = el('button', 'drill-button', 'open');
    drill.dataset.conceptId = group.concept_id;
    header.appendChild(drill);
    panel.appendChild(header);
    const list = el('div', 'concept-items');
    for (const item of group.items) list.appendChild(itemCard(item));
    panel.appendChild(list);
    root.appendChild(panel);
  }
}

export function renderFlat(state: ViewState, root: HTMLElement): void {
  const response = state.response as SearchResponse;
  if (response.hits.length === 0) {
    root.appendChild(el('p', 'empty', 'no results'));
    return;
  }
  const list = el('ol', 'flat-list');
  for (const hit of response.hits) {
    const row = el('li', 'flat-row');
    row.appendChild(itemCard(hit));
    list.appendChild(row);
  }
  root.appendChild(list);
}

export function renderDrill(state: ViewState, root: HTMLElement): void {
  const drill = state.drillResponse as SearchResponse;
  const group = (drill.groups ?? [])[0];
  const panel = el('section', 'concept-panel drill');
  if (group) {
    panel.dataset.conceptId = group.concept_id;
    const header = el('header', 'concept-header');
    const backButton = el('button', 'back-button', 'back');
    header.appendChild(backButton);
    header.appendChild(el('h3', 'concept-label', group.label.join(' ')));
    header.appendChild(scoreBadge(group.score));
    panel.appendChild(header);
    const list = el('div', 'concept-items');
    for (const item of group.items) list.appendChild(itemCard(item));
    panel.appendChild(list);
  }
  root.appendChild(panel);
}

/** Render the whole results area for the current state. */
export function render(state: ViewState, root: HTMLElement): void {
  root.textContent = '';

  const banner = el('div', 'error-banner');
  banner.style.display = state.error ? 'block' : 'none';
  banner.textContent = state.error ?? '';
  root.appendChild(banner);

  if (state.loading) root.appendChild(el('p', 'loading', 'searching…'));

  if (!state.response && !state.drillResponse) {
    if (!state.loading && !state.error) {
      root.appendChild(el('p', 'empty', 'type a query to search'));
    }
    return;
  }

  const results = el('div', 'results');
  if (state.selectedConcept && state.drillResponse) {
    renderDrill(state, results);
  } else if (state.response) {
    const meta = el(
      'p',
      'meta',
      `${state.response.total_candidates} candidates, mode ${state.response.mode}`,
    );
    results.appendChild(meta);
    if (state.response.hits.length === 0 && (state.response.groups ?? []).length === 0) {
      results.appendChild(el('p', 'empty', 'no results'));
    } else if (state.view === 'groups') {
      renderGroups(state, results);
    } else {
      renderFlat(state, results);
    }
  }
  root.appendChild(results);
}
