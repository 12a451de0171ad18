// Typed client for the proofminer service. Every raw response body is kept
// in a capture log so the thin-client property (rendered numbers appear
// verbatim in some response) stays checkable.

export interface LemmaInfo {
  name: string;
  statement: string;
}

export interface CorpusInfo {
  library: string;
  count: number;
  levels: string[];
  lemmas: LemmaInfo[];
}

export interface ClusterEntry {
  lemmas: string[];
  frequency: number;
  frequency_str: string;
}

export interface ClusterReport {
  entries: ClusterEntry[];
  count: number;
}

export interface SuggestResponse {
  found: boolean;
  lemma: string;
  lemmas?: string[];
  frequency?: number;
  frequency_str?: string;
}

export interface LemmaDetail {
  name: string;
  statement: string;
  script: string;
}

export interface EngineSettings {
  algorithm: string;
  level: string;
  granularity: number;
  frequency_param: number;
  seed: number;
}

export interface ApiErrorBody {
  error: { code: string; message: string };
}

export class ApiError extends Error {
  code: string;
  status: number;

  constructor(status: number, code: string, message: string) {
    super(message);
    this.code = code;
    this.status = status;
  }
}

export class Client {
  base: string;
  captured: string[] = [];

  constructor(base: string) {
    this.base = base.replace(/\/$/, "");
  }

  private async request<T>(
    path: string,
    init?: RequestInit & { signal?: AbortSignal },
  ): Promise<T> {
    const response = await fetch(this.base + path, init);
    const text = await response.text();
    this.captured.push(text);
    if (!response.ok) {
      let code = "http_" + response.status;
      let message = text;
      try {
        const body = JSON.parse(text) as ApiErrorBody;
        code = body.error.code;
        message = body.error.message;
      } catch {
        // non-JSON error body; keep the raw text
      }
      throw new ApiError(response.status, code, message);
    }
    return JSON.parse(text) as T;
  }

  corpus(): Promise<CorpusInfo> {
    return this.request<CorpusInfo>("/corpus");
  }

  cluster(settings: EngineSettings, signal?: AbortSignal): Promise<ClusterReport> {
    return this.request<ClusterReport>("/cluster", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(settings),
      signal,
    });
  }

  suggest(partial: string, settings: EngineSettings): Promise<SuggestResponse> {
    return this.request<SuggestResponse>("/suggest", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ partial, ...settings }),
    });
  }

  lemma(name: string): Promise<LemmaDetail> {
    return this.request<LemmaDetail>("/lemma/" + encodeURIComponent(name));
  }
}
