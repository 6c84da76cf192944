/**
 * Thin typed client for the cdsm service. The fetch implementation is
 * injectable so tests can stub the whole backend.
 */

import type {
  EditJson,
  HeatmapTable,
  StructuredReport,
  WhatIfResponse,
  WorkspaceDoc,
  WorkspaceList,
} from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  readonly code: string;
  readonly status: number;

  constructor(status: number, code: string, message: string) {
    super(message);
    this.code = code;
    this.status = status;
  }
}

/** Thrown when the service cannot be reached at all (network level). */
export class ServiceUnreachableError extends Error {
  constructor(cause: unknown) {
    super(`service unreachable: ${cause instanceof Error ? cause.message : String(cause)}`);
  }
}

async function parseError(response: Response): Promise<ApiError> {
  let code = `HTTP ${response.status}`;
  let message = response.statusText;
  try {
    const body = (await response.json()) as {
      error?: { code?: string; message?: string };
      detail?: string;
    };
    if (body.error) {
      code = body.error.code ?? code;
      message = body.error.message ?? message;
    } else if (body.detail) {
      message = body.detail;
    }
  } catch {
    // non-JSON error body; keep the status text
  }
  return new ApiError(response.status, code, message);
}

export class ApiClient {
  private readonly base: string;
  private readonly fetchFn: FetchLike;

  constructor(baseUrl = "", fetchFn?: FetchLike) {
    this.base = baseUrl.replace(/\/$/, "");
    this.fetchFn = fetchFn ?? ((url, init) => fetch(url, init));
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    let response: Response;
    try {
      response = await this.fetchFn(this.base + path, init);
    } catch (cause) {
      throw new ServiceUnreachableError(cause);
    }
    if (!response.ok) {
      throw await parseError(response);
    }
    return (await response.json()) as T;
  }

  listWorkspaces(): Promise<WorkspaceList> {
    return this.request<WorkspaceList>("/workspaces");
  }

  getWorkspace(name: string): Promise<WorkspaceDoc> {
    return this.request<WorkspaceDoc>(`/workspaces/${encodeURIComponent(name)}`);
  }

  getReport(name: string): Promise<StructuredReport> {
    return this.request<StructuredReport>(
      `/workspaces/${encodeURIComponent(name)}/report`,
    );
  }

  postWhatIf(name: string, edits: EditJson[]): Promise<WhatIfResponse> {
    return this.request<WhatIfResponse>(
      `/workspaces/${encodeURIComponent(name)}/whatif`,
      {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify({ edits }),
      },
    );
  }

  putWorkspace(name: string, doc: WorkspaceDoc): Promise<{ status: string }> {
    return this.request<{ status: string }>(`/workspaces/${encodeURIComponent(name)}`, {
      method: "PUT",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(doc),
    });
  }

  getHeatmap(): Promise<HeatmapTable> {
    return this.request<HeatmapTable>("/heatmap");
  }
}

/** Extract (index, reason) from a service EditError message like "edit 2: …". */
export function parseEditRejection(error: ApiError): { index: number; reason: string } | null {
  if (error.code !== "EditError") {
    return null;
  }
  const match = /^edit (\d+): (.*)$/s.exec(error.message);
  if (!match) {
    return { index: 0, reason: error.message };
  }
  return { index: Number(match[1]), reason: match[2] };
}
