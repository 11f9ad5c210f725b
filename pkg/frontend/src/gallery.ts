// Review-ordering and finalize-gating rules for the artifact gallery.
// The member sees every extracted hit; flagged ones are pinned first so
// salient artifacts lead, but nothing is hidden.

import type { CaseItemView, ChecklistRow, HitView } from './api.js';

export function orderForReview(hits: HitView[]): HitView[] {
  const flagged = hits.filter((h) => h.flagged);
  const rest = hits.filter((h) => !h.flagged);
  return [...flagged, ...rest];
}

export function checklistComplete(rows: ChecklistRow[]): boolean {
  return rows.length > 0 && rows.every((row) => row.status !== 'not_performed');
}

export interface FinalizeBlock {
  item_id: string;
  missing_rows: string[];
}

// A decision other than "meets" needs the absence-of-evidence checklist
// answered; report which rows block each item so the form can say why.
export function finalizeBlockers(items: CaseItemView[], meetsItems: Set<string>): FinalizeBlock[] {
  const blockers: FinalizeBlock[] = [];
  for (const item of items) {
    if (!item.assessed || meetsItems.has(item.item_id)) continue;
    const missing = item.checklist
      .filter((row) => row.status === 'not_performed')
      .map((row) => row.name);
    if (missing.length > 0) {
      blockers.push({ item_id: item.item_id, missing_rows: missing });
    }
  }
  return blockers;
}

export function hasTargetHit(item: CaseItemView, targetKinds: string[]): boolean {
  return item.hits.some((h) => targetKinds.includes(h.kind));
}

export function flaggedCount(items: CaseItemView[]): number {
  return items.reduce((n, item) => n + item.hits.filter((h) => h.flagged).length, 0);
}
