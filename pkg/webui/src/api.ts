/**
 * Typed client for the analysis service.  Every result shown in the UI
 * round-trips through these endpoints; the client computes nothing itself.
 */

export interface ApiErrorBody {
  code: string;
  message: string;
  stage?: string;
}

export class ApiError extends Error {
  readonly status: number;
  readonly code: string;
  readonly stage?: string;

  constructor(status: number, body: ApiErrorBody) {
    super(body.message);
    this.status = status;
    this.code = body.code;
    this.stage = body.stage;
  }
}

export interface CreateSessionResult {
  id: string;
  total_occurrences: number;
  distinct_values: number;
}

export interface PreviewGroup {
  abstracted: string;
  originals: [string, number][];
}

export interface TableItem {
  representative: string;
  count: number;
  abstracted: string;
  originals: [string, number][];
}

export interface TableCluster {
  id: number;
  noise: boolean;
  original_count: number;
  abstracted_count: number;
  items: TableItem[] | string[];
}

export interface Question {
  id: string;
  text: string;
  example: string;
}

export class ApiClient {
  constructor(readonly base: string) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await fetch(this.base + path, {
      method,
      headers: body !== undefined ? { "Content-Type": "application/json" } : undefined,
      body: body !== undefined ? JSON.stringify(body) : undefined,
    });
    if (!response.ok) {
      let parsed: ApiErrorBody;
      try {
        parsed = (await response.json()) as ApiErrorBody;
      } catch {
        parsed = { code: "error", message: `${response.status} ${response.statusText}` };
      }
      throw new ApiError(response.status, parsed);
    }
    return (await response.json()) as T;
  }

  createSession(values: string[], label: string): Promise<CreateSessionResult> {
    return this.request("POST", "/sessions", { values, label });
  }

  createSessionFromText(text: string, label: string): Promise<CreateSessionResult> {
    return this.request("POST", "/sessions", { text, label });
  }

  getSession(id: string): Promise<any> {
    return this.request("GET", `/sessions/${id}`);
  }

  putConfig(id: string, part: "abstraction" | "distance" | "clustering" | "embedding", body: object): Promise<any> {
    return this.request("PUT", `/sessions/${id}/${part}`, body);
  }

  run(id: string, stage: "abstract" | "distance" | "cluster" | "project"): Promise<any> {
    return this.request("POST", `/sessions/${id}/run?stage=${stage}`);
  }

  progress(id: string): Promise<{ state: string; stage?: string; done?: number; total?: number }> {
    return this.request("GET", `/sessions/${id}/progress`);
  }

  preview(id: string, limit = 100): Promise<{ limit: number; groups: PreviewGroup[] }> {
    return this.request("GET", `/sessions/${id}/preview?limit=${limit}`);
  }

  table(id: string, layout: "representatives" | "originals"): Promise<{ layout: string; clusters: TableCluster[] }> {
    return this.request("GET", `/sessions/${id}/table?layout=${layout}`);
  }

  scatter(id: string): Promise<{ points: any[]; k: number }> {
    return this.request("GET", `/sessions/${id}/scatter`);
  }

  questionnaire(): Promise<{ version: number; questions: Question[] }> {
    return this.request("GET", "/questionnaire");
  }

  translateQuestionnaire(answers: Record<string, boolean>): Promise<{ abstraction: object }> {
    return this.request("POST", "/questionnaire", { answers });
  }

  profiles(): Promise<{ profiles: { name: string; description: string }[] }> {
    return this.request("GET", "/profiles");
  }

  profile(name: string): Promise<any> {
    return this.request("GET", `/profiles/${name}`);
  }

  async exportCsv(id: string, layout: "representatives" | "originals"): Promise<string> {
    const response = await fetch(`${this.base}/sessions/${id}/export.csv?layout=${layout}`);
    if (!response.ok) throw new ApiError(response.status, (await response.json()) as ApiErrorBody);
    return response.text();
  }
}
