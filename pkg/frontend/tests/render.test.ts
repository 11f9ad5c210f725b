import { describe, expect, it } from 'vitest';

import type { CaseView } from '../src/api.js';
import { renderCase, renderErrorBanner, renderHit, renderItemCard } from '../src/render.js';

const view: CaseView = {
  case_id: 'CASE-7',
  dft_file_number: 'DFT-2015-000042',
  member_id: 'm-001',
  profile: 'fraud',
  items: [
    {
      item_id: 'laptop',
      description: 'suspect laptop',
      priority: 1.0,
      assessed: true,
      hits: [
        {
          hit_id: 'laptop|cards|note.txt|5',
          kind: 'card_number',
          value: '4111111111111111',
          location: { path: 'note.txt', offset: 5 },
          scanner_id: 'cards',
          flagged: false,
          bank_code: '411111',
        },
        {
          hit_id: 'laptop|media|x.jpg|0',
          kind: 'media_file',
          value: 'x.jpg',
          location: { path: 'x.jpg', offset: 0 },
          scanner_id: 'media',
          flagged: true,
        },
      ],
      encryption: { summary: 'none', fde_signatures: [], suspect_programs: [] },
      checklist: [{ name: 'encryption-signatures-checked', status: 'yes', detail: '0 signature(s)' }],
      searches_run: [{ scanner_id: 'cards', config_digest: 'abc' }],
    },
  ],
  decisions: { laptop: { decision: 'meets', basis: ['hit:cards:note.txt@5'] } },
  has_report: false,
};

describe('renderCase', () => {
  it('renders one card per item with ranked header', () => {
    const html = renderCase(view);
    expect(html).toContain('CASE-7');
    expect(html).toContain('data-item-id="laptop"');
    expect(html).toContain('decision-meets');
  });

  it('shows the empty state for a case without items', () => {
    const html = renderCase({ ...view, items: [] });
    expect(html).toContain('empty-state');
  });
});

describe('renderItemCard', () => {
  it('pins the flagged hit before the unflagged one', () => {
    const html = renderItemCard(view.items[0]);
    const flaggedPos = html.indexOf('laptop|media|x.jpg|0');
    const otherPos = html.indexOf('laptop|cards|note.txt|5');
    expect(flaggedPos).toBeGreaterThan(-1);
    expect(flaggedPos).toBeLessThan(otherPos);
  });

  it('escapes artifact values', () => {
    const hostile = {
      ...view.items[0],
      hits: [
        {
          hit_id: 'laptop|p|f|0',
          kind: 'email',
          value: '<script>alert(1)</script>',
          location: { path: 'f', offset: 0 },
          scanner_id: 'p',
          flagged: false,
        },
      ],
    };
    const html = renderItemCard(hostile);
    expect(html).not.toContain('<script>alert');
    expect(html).toContain('&lt;script&gt;');
  });
});

describe('renderHit', () => {
  it('carries the hit id for flag toggling', () => {
    const html = renderHit(view.items[0].hits[0]);
    expect(html).toContain('data-hit-id="laptop|cards|note.txt|5"');
    expect(html).toContain('data-flagged="false"');
  });
});

describe('renderErrorBanner', () => {
  it('offers a retry for transient failures', () => {
    const html = renderErrorBanner('coordinator unreachable');
    expect(html).toContain('retry');
    expect(html).toContain('coordinator unreachable');
  });
});
