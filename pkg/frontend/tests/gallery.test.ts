import { describe, expect, it } from 'vitest';

import type { CaseItemView, HitView } from '../src/api.js';
import {
  checklistComplete,
  finalizeBlockers,
  flaggedCount,
  hasTargetHit,
  orderForReview,
} from '../src/gallery.js';

function hit(id: string, flagged = false, kind = 'media_file'): HitView {
  return {
    hit_id: id,
    kind,
    value: id,
    location: { path: 'f', offset: 0 },
    scanner_id: 'media',
    flagged,
  };
}

function item(overrides: Partial<CaseItemView> = {}): CaseItemView {
  return {
    item_id: 'laptop',
    description: '',
    priority: 0.5,
    assessed: true,
    hits: [],
    encryption: null,
    checklist: [
      { name: 'encryption-signatures-checked', status: 'yes', detail: '' },
      { name: 'encryption-programs-checked', status: 'yes', detail: '' },
      { name: 'prioritization-reasoning-recorded', status: 'no', detail: '' },
    ],
    searches_run: [],
    ...overrides,
  };
}

describe('orderForReview', () => {
  it('pins flagged hits first but keeps every hit visible', () => {
    const hits = [hit('a'), hit('b', true), hit('c'), hit('d', true)];
    const ordered = orderForReview(hits);
    expect(ordered.map((h) => h.hit_id)).toEqual(['b', 'd', 'a', 'c']);
    expect(ordered).toHaveLength(hits.length);
  });

  it('keeps stable order when nothing is flagged', () => {
    const hits = [hit('a'), hit('b'), hit('c')];
    expect(orderForReview(hits).map((h) => h.hit_id)).toEqual(['a', 'b', 'c']);
  });
});

describe('checklistComplete', () => {
  it('accepts answered rows, including explicit "no"', () => {
    expect(checklistComplete(item().checklist)).toBe(true);
  });

  it('rejects not_performed rows and empty checklists', () => {
    const rows = item().checklist.slice();
    rows[0] = { ...rows[0], status: 'not_performed' };
    expect(checklistComplete(rows)).toBe(false);
    expect(checklistComplete([])).toBe(false);
  });
});

describe('finalizeBlockers', () => {
  it('names the missing rows per blocked item', () => {
    const blocked = item({
      checklist: [
        { name: 'encryption-signatures-checked', status: 'not_performed', detail: '' },
        { name: 'encryption-programs-checked', status: 'not_performed', detail: '' },
        { name: 'prioritization-reasoning-recorded', status: 'yes', detail: '' },
      ],
    });
    const blockers = finalizeBlockers([blocked], new Set());
    expect(blockers).toEqual([
      {
        item_id: 'laptop',
        missing_rows: ['encryption-signatures-checked', 'encryption-programs-checked'],
      },
    ]);
  });

  it('does not block items whose decision meets the threshold', () => {
    const blocked = item({
      checklist: [{ name: 'encryption-signatures-checked', status: 'not_performed', detail: '' }],
    });
    expect(finalizeBlockers([blocked], new Set(['laptop']))).toEqual([]);
  });

  it('ignores unassessed items', () => {
    const unassessed = item({ assessed: false, checklist: [] });
    expect(finalizeBlockers([unassessed], new Set())).toEqual([]);
  });
});

describe('hit helpers', () => {
  it('detects threshold-target hits', () => {
    const media = item({ hits: [hit('a', false, 'media_file')] });
    expect(hasTargetHit(media, ['media_file'])).toBe(true);
    expect(hasTargetHit(media, ['card_number'])).toBe(false);
  });

  it('counts flags across items', () => {
    const items = [
      item({ hits: [hit('a', true), hit('b')] }),
      item({ item_id: 'usb', hits: [hit('c', true)] }),
    ];
    expect(flaggedCount(items)).toBe(2);
  });
});
