import { afterEach, describe, expect, it, vi } from 'vitest';

import type { CaseView } from '../src/api.js';
import { ConsoleSession } from '../src/session.js';

// In-memory stand-in for the service: flags live server-side only, so a
// fresh session must see them without any local carry-over.
function fakeService() {
  const flags = new Map<string, boolean>();
  let finalized: { notes: string; decisions: unknown[] } | null = null;

  const caseView = (): CaseView => ({
    case_id: 'C-1',
    dft_file_number: 'DFT-2015-000001',
    member_id: 'm-1',
    profile: 'fraud',
    items: [
      {
        item_id: 'laptop',
        description: '',
        priority: 1,
        assessed: true,
        hits: [
          {
            hit_id: 'laptop|cards|f|0',
            kind: 'card_number',
            value: '4111111111111111',
            location: { path: 'f', offset: 0 },
            scanner_id: 'cards',
            flagged: flags.get('laptop|cards|f|0') ?? false,
          },
        ],
        encryption: null,
        checklist: [],
        searches_run: [],
      },
    ],
    decisions: {},
    has_report: finalized !== null,
  });

  const fetchImpl = vi.fn(async (input: RequestInfo | URL, init?: RequestInit) => {
    const url = String(input);
    const body = init?.body ? JSON.parse(String(init.body)) : null;
    const json = (data: unknown) =>
      new Response(JSON.stringify(data), {
        status: 200,
        headers: { 'content-type': 'application/json' },
      });
    if (url.endsWith('/health')) return json({ status: 'ok' });
    if (url.includes('/flags')) {
      flags.set(body.hit_id, body.flagged);
      return json(body);
    }
    if (url.includes('/finalize')) {
      finalized = body;
      return json({ report_ref: 'report.obsreport', decisions: { laptop: 'meets' } });
    }
    if (url.includes('/cases/C-1')) return json(caseView());
    return json({ cases: ['C-1'] });
  });
  return { fetchImpl, flags, getFinalized: () => finalized };
}

afterEach(() => {
  vi.unstubAllGlobals();
});

describe('ConsoleSession', () => {
  it('persists flags through the service, not locally', async () => {
    const service = fakeService();
    vi.stubGlobal('fetch', service.fetchImpl);

    const session = new ConsoleSession('http://svc', 'm-1');
    await session.openCase('C-1');
    const view = await session.toggleFlag('laptop|cards|f|0', true);
    expect(view.items[0].hits[0].flagged).toBe(true);

    // kill the console: a brand-new session sees the same flag
    const reopened = new ConsoleSession('http://svc', 'm-1');
    const fresh = await reopened.openCase('C-1');
    expect(fresh.items[0].hits[0].flagged).toBe(true);
  });

  it('stages decisions locally until finalize, then clears', async () => {
    const service = fakeService();
    vi.stubGlobal('fetch', service.fetchImpl);

    const session = new ConsoleSession('http://svc', 'm-1');
    await session.openCase('C-1');
    session.stageDecision('laptop', 'card artifacts observed');
    session.setNotes('observation notes');
    expect(session.stagedDecisions()).toHaveLength(1);

    const result = await session.finalize();
    expect(result.decisions.laptop).toBe('meets');
    expect(session.stagedDecisions()).toHaveLength(0);
    expect(service.getFinalized()).toMatchObject({
      notes: 'observation notes',
      decisions: [{ item_id: 'laptop', reasoning_note: 'card artifacts observed' }],
    });
  });

  it('surfaces service errors without destroying the session', async () => {
    const failing = vi.fn(async () =>
      new Response(JSON.stringify({ error: 'integrity.NotFound', detail: 'case nope' }), {
        status: 404,
        headers: { 'content-type': 'application/json' },
      }),
    );
    vi.stubGlobal('fetch', failing);
    const session = new ConsoleSession('http://svc', 'm-1');
    await expect(session.openCase('nope')).rejects.toThrow('integrity.NotFound');
    expect(session.caseView).toBeNull();
  });
});
