// Console session: coordinator address, the active case, and the member's
// unsaved inputs. Holds no authoritative state; killing the console and
// reopening reloads everything from the service.

import { TriageApi, type CaseView, type ThresholdEntry } from './api.js';

export interface PendingDecision {
  item_id: string;
  reasoning_note?: string;
}

export class ConsoleSession {
  readonly api: TriageApi;
  caseView: CaseView | null = null;
  private pendingDecisions = new Map<string, PendingDecision>();
  private notesDraft = '';

  constructor(
    readonly coordinatorUrl: string,
    readonly memberId: string,
  ) {
    this.api = new TriageApi(coordinatorUrl);
  }

  async openCase(caseId: string): Promise<CaseView> {
    this.caseView = await this.api.fetchCase(caseId);
    return this.caseView;
  }

  async refresh(): Promise<CaseView> {
    if (!this.caseView) throw new Error('no case open');
    return this.openCase(this.caseView.case_id);
  }

  // Flags persist server-side immediately; the refetch is what the
  // gallery renders, so the console never trusts its own copy.
  async toggleFlag(hitId: string, flagged: boolean): Promise<CaseView> {
    if (!this.caseView) throw new Error('no case open');
    await this.api.submitFlag(this.caseView.case_id, hitId, flagged);
    return this.refresh();
  }

  stageDecision(itemId: string, reasoningNote?: string): void {
    this.pendingDecisions.set(itemId, { item_id: itemId, reasoning_note: reasoningNote });
  }

  stagedDecisions(): PendingDecision[] {
    return [...this.pendingDecisions.values()];
  }

  setNotes(notes: string): void {
    this.notesDraft = notes;
  }

  get notes(): string {
    return this.notesDraft;
  }

  async finalize(): Promise<{ report_ref: string; decisions: Record<string, string> }> {
    if (!this.caseView) throw new Error('no case open');
    const decisions: ThresholdEntry[] = this.stagedDecisions();
    const result = await this.api.finalize(this.caseView.case_id, decisions, this.notesDraft);
    this.pendingDecisions.clear();
    await this.refresh();
    return result;
  }
}
