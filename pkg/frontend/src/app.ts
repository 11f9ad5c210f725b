// Browser bootstrap: wires the session to the page. The service address
// comes from the query string (?coordinator=...&case=...&member=...).

import { ApiError } from './api.js';
import { finalizeBlockers } from './gallery.js';
import { renderCase, renderErrorBanner } from './render.js';
import { ConsoleSession } from './session.js';

function params(): { coordinator: string; caseId: string | null; member: string } {
  const search = new URLSearchParams(window.location.search);
  return {
    coordinator: search.get('coordinator') ?? 'http://127.0.0.1:8765',
    caseId: search.get('case'),
    member: search.get('member') ?? '',
  };
}

async function redraw(session: ConsoleSession, root: HTMLElement): Promise<void> {
  const view = session.caseView;
  if (!view) return;
  root.innerHTML = renderCase(view);
  for (const button of root.querySelectorAll<HTMLButtonElement>('.flag-toggle')) {
    button.addEventListener('click', async () => {
      const hitId = button.dataset.hitId ?? '';
      const flagged = button.dataset.flagged === 'true';
      try {
        await session.toggleFlag(hitId, !flagged);
        await redraw(session, root);
      } catch (error) {
        showError(root, error);
      }
    });
  }
  const finalizeButton = document.querySelector<HTMLButtonElement>('#finalize');
  if (finalizeButton) {
    finalizeButton.onclick = async () => {
      const notes = document.querySelector<HTMLTextAreaElement>('#notes')?.value ?? '';
      session.setNotes(notes);
      for (const item of view.items.filter((i) => i.assessed)) {
        session.stageDecision(item.item_id, notes || undefined);
      }
      const blockers = finalizeBlockers(view.items, new Set());
      try {
        const result = await session.finalize();
        const summary = Object.entries(result.decisions)
          .map(([item, decision]) => `${item}: ${decision}`)
          .join(', ');
        showBanner(root, `report ${result.report_ref} — ${summary}`);
        await redraw(session, root);
      } catch (error) {
        if (error instanceof ApiError && blockers.length > 0) {
          const rows = blockers
            .map((b) => `${b.item_id}: ${b.missing_rows.join(', ')}`)
            .join('; ');
          showError(root, new Error(`checklist incomplete — ${rows}`));
        } else {
          showError(root, error);
        }
      }
    };
  }
}

function showBanner(root: HTMLElement, message: string): void {
  root.insertAdjacentHTML('afterbegin', `<div class="banner ok">${message}</div>`);
}

function showError(root: HTMLElement, error: unknown): void {
  const message = error instanceof Error ? error.message : String(error);
  root.insertAdjacentHTML('afterbegin', renderErrorBanner(message));
  root.querySelector<HTMLButtonElement>('.banner .retry')?.addEventListener('click', () => {
    window.location.reload();
  });
}

export async function start(): Promise<void> {
  const root = document.querySelector<HTMLElement>('#console-root');
  if (!root) return;
  const { coordinator, caseId, member } = params();
  const session = new ConsoleSession(coordinator, member);
  try {
    await session.api.health();
    if (!caseId) {
      const { cases } = await session.api.listCases();
      root.innerHTML =
        '<main><h1>Cases</h1><ul>' +
        cases
          .map(
            (id) =>
              `<li><a href="?coordinator=${encodeURIComponent(coordinator)}&case=${encodeURIComponent(id)}">${id}</a></li>`,
          )
          .join('') +
        '</ul></main>';
      return;
    }
    await session.openCase(caseId);
    await redraw(session, root);
  } catch (error) {
    showError(root, error);
  }
}

if (typeof window !== 'undefined' && typeof document !== 'undefined') {
  void start();
}
