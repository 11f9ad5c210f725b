// HTML rendering for the console views. Pure string templates so the
// review logic stays testable without a DOM.

import type { CaseItemView, CaseView, ChecklistRow, HitView } from './api.js';
import { orderForReview } from './gallery.js';

function esc(text: string): string {
  return text
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;');
}

export function renderHit(hit: HitView): string {
  const where = hit.location.path
    ? `${hit.location.path}@${hit.location.offset}`
    : `@${hit.location.offset}`;
  const note = hit.note ? `<span class="note">${esc(hit.note)}</span>` : '';
  const star = hit.flagged ? '&#9733;' : '&#9734;';
  return (
    `<li class="hit${hit.flagged ? ' flagged' : ''}" data-hit-id="${esc(hit.hit_id)}">` +
    `<button class="flag-toggle" data-hit-id="${esc(hit.hit_id)}" ` +
    `data-flagged="${hit.flagged}">${star}</button>` +
    `<span class="kind">${esc(hit.kind)}</span> ` +
    `<code>${esc(hit.value)}</code> ` +
    `<span class="where">${esc(where)}</span> ${note}</li>`
  );
}

export function renderChecklist(rows: ChecklistRow[]): string {
  if (rows.length === 0) return '<p class="empty">no checklist recorded</p>';
  const body = rows
    .map(
      (row) =>
        `<tr class="status-${row.status}"><td>${esc(row.name)}</td>` +
        `<td>${esc(row.status)}</td><td>${esc(row.detail)}</td></tr>`,
    )
    .join('');
  return `<table class="checklist"><tbody>${body}</tbody></table>`;
}

export function renderItemCard(item: CaseItemView, decision?: string): string {
  const hits = orderForReview(item.hits);
  const gallery = hits.length
    ? `<ul class="gallery">${hits.map(renderHit).join('')}</ul>`
    : '<p class="empty">no artifacts observed</p>';
  const encryption = item.encryption
    ? `<p class="encryption">encryption: ${esc(item.encryption.summary)}</p>`
    : '';
  const priority = item.priority === null ? 'unranked' : item.priority.toFixed(3);
  const decisionBadge = decision
    ? `<span class="decision decision-${esc(decision)}">${esc(decision)}</span>`
    : '';
  return (
    `<section class="item-card" data-item-id="${esc(item.item_id)}">` +
    `<h2>${esc(item.item_id)} <span class="priority">${priority}</span> ${decisionBadge}</h2>` +
    `<p>${esc(item.description)}</p>` +
    gallery +
    encryption +
    renderChecklist(item.checklist) +
    `</section>`
  );
}

export function renderCase(view: CaseView): string {
  if (view.items.length === 0) {
    return '<main class="empty-state"><p>This case has no evidence items yet.</p></main>';
  }
  const cards = view.items
    .map((item) => renderItemCard(item, view.decisions[item.item_id]?.decision))
    .join('');
  const header =
    `<header><h1>${esc(view.case_id)}</h1>` +
    `<p>${esc(view.dft_file_number)} &middot; member ${esc(view.member_id)} &middot; ` +
    `profile ${esc(view.profile)}</p></header>`;
  return `<main>${header}${cards}</main>`;
}

export function renderErrorBanner(message: string, retryable = true): string {
  const retry = retryable ? '<button class="retry">retry</button>' : '';
  return `<div class="banner error"><span>${esc(message)}</span>${retry}</div>`;
}
