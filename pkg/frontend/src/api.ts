// Typed client for the field triage coordinator service. The console owns
// no state: everything it shows comes from these calls.

export interface HitView {
  hit_id: string;
  kind: string;
  value: string;
  location: { path: string; offset: number };
  scanner_id: string;
  flagged: boolean;
  note?: string;
  bank_code?: string;
}

export interface ChecklistRow {
  name: string;
  status: 'yes' | 'no' | 'not_performed';
  detail: string;
}

export interface CaseItemView {
  item_id: string;
  description: string;
  priority: number | null;
  assessed: boolean;
  hits: HitView[];
  encryption: { summary: string; fde_signatures: unknown[]; suspect_programs: string[] } | null;
  checklist: ChecklistRow[];
  searches_run: { scanner_id: string; config_digest: string }[];
}

export interface CaseView {
  case_id: string;
  dft_file_number: string;
  member_id: string;
  profile: string;
  items: CaseItemView[];
  decisions: Record<string, { decision: string; basis: string[] }>;
  has_report: boolean;
}

export interface ObservationReport {
  schema_version: number;
  dft_file_number: string;
  case_id: string;
  member_id: string;
  items: unknown[];
  notes: string;
  threshold_decisions: { item_id: string; decision: string; basis: string[] }[];
  manifests: Record<string, string>;
  created_at: string;
}

export interface ThresholdEntry {
  item_id: string;
  reasoning_note?: string;
}

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    detail: string,
  ) {
    super(`${code}: ${detail}`);
  }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  const response = await fetch(url, {
    headers: { 'Content-Type': 'application/json' },
    ...init,
  });
  if (!response.ok) {
    let code = `http.${response.status}`;
    let detail = response.statusText;
    try {
      const body = (await response.json()) as { error?: string; detail?: string };
      code = body.error ?? code;
      detail = body.detail ?? detail;
    } catch {
      // non-JSON error body; keep the HTTP status text
    }
    throw new ApiError(response.status, code, detail);
  }
  const contentType = response.headers.get('content-type') ?? '';
  if (contentType.includes('application/json')) {
    return (await response.json()) as T;
  }
  return (await response.text()) as unknown as T;
}

export class TriageApi {
  constructor(private readonly baseUrl: string) {}

  private url(path: string): string {
    return `${this.baseUrl.replace(/\/$/, '')}${path}`;
  }

  health(): Promise<{ status: string }> {
    return request(this.url('/health'));
  }

  listCases(): Promise<{ cases: string[] }> {
    return request(this.url('/cases'));
  }

  fetchCase(caseId: string): Promise<CaseView> {
    return request(this.url(`/cases/${encodeURIComponent(caseId)}`));
  }

  createCase(caseDescription: unknown): Promise<{ case_id: string }> {
    return request(this.url('/cases'), {
      method: 'POST',
      body: JSON.stringify({ case: caseDescription }),
    });
  }

  scanCase(caseId: string): Promise<{ scanned: string[]; hits: number }> {
    return request(this.url(`/cases/${encodeURIComponent(caseId)}/scan`), { method: 'POST' });
  }

  submitFlag(caseId: string, hitId: string, flagged: boolean): Promise<{ hit_id: string; flagged: boolean }> {
    return request(this.url(`/cases/${encodeURIComponent(caseId)}/flags`), {
      method: 'POST',
      body: JSON.stringify({ hit_id: hitId, flagged }),
    });
  }

  finalize(
    caseId: string,
    decisions: ThresholdEntry[],
    notes: string,
  ): Promise<{ report_ref: string; decisions: Record<string, string> }> {
    return request(this.url(`/cases/${encodeURIComponent(caseId)}/finalize`), {
      method: 'POST',
      body: JSON.stringify({ notes, decisions }),
    });
  }

  fetchReport(caseId: string): Promise<ObservationReport> {
    return request(this.url(`/cases/${encodeURIComponent(caseId)}/report`));
  }

  fetchReadableReport(caseId: string): Promise<string> {
    return request(this.url(`/cases/${encodeURIComponent(caseId)}/report?format=readable`));
  }

  registerMember(member: {
    member_id: string;
    name: string;
    certified_on?: string;
  }): Promise<{ member_id: string }> {
    return request(this.url('/members'), { method: 'POST', body: JSON.stringify(member) });
  }

  issueFileNumber(memberId: string, investigationId: string): Promise<{ value: string }> {
    return request(this.url('/file-numbers'), {
      method: 'POST',
      body: JSON.stringify({ member_id: memberId, investigation_id: investigationId }),
    });
  }
}
