/** Typed client for the labeling service's JSON endpoints. */

export type Strategy = "sequential" | "uncertainty";

export interface NextItem {
  id: string;
  image_url: string;
  model_score?: number;
}

export interface LabelResult {
  n_labeled: number;
  like_fraction: number;
}

export interface Stats extends LabelResult {
  splits: Record<string, number>;
}

export interface ConsistencyItem {
  id: string;
  image_url: string;
}

export interface ConsistencyState {
  n: number;
  index: number;
  done: boolean;
  current?: ConsistencyItem;
  agreement_rate?: number;
  noise_estimate?: number;
  disagreements?: string[];
}

/** HTTP failure with the status code preserved for dispatch. */
export class ApiError extends Error {
  constructor(public status: number, public detail: string) {
    super(`${status}: ${detail}`);
    this.name = "ApiError";
  }
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private baseUrl = "",
    private fetchFn: FetchLike = (u, i) => fetch(u, i),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const resp = await this.fetchFn(this.baseUrl + path, init);
    if (!resp.ok) {
      let detail = resp.statusText;
      try {
        const body = await resp.json();
        if (body && typeof body.detail === "string") detail = body.detail;
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiError(resp.status, detail);
    }
    return (await resp.json()) as T;
  }

  private post<T>(path: string, body: unknown): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  next(strategy: Strategy = "sequential"): Promise<NextItem> {
    return this.request<NextItem>(`/next?strategy=${strategy}`);
  }

  label(id: string, label: 0 | 1): Promise<LabelResult> {
    return this.post<LabelResult>("/label", { id, label });
  }

  predict(id: string): Promise<{ p_like: number }> {
    return this.request(`/predict/${encodeURIComponent(id)}`);
  }

  stats(): Promise<Stats> {
    return this.request<Stats>("/stats");
  }

  imageUrl(item: NextItem | ConsistencyItem): string {
    return this.baseUrl + item.image_url;
  }

  consistencyStart(n: number, seed = 0): Promise<ConsistencyState> {
    return this.request<ConsistencyState>(`/consistency/start?n=${n}&seed=${seed}`);
  }

  consistencyState(): Promise<ConsistencyState> {
    return this.request<ConsistencyState>("/consistency/state");
  }

  consistencyAnswer(label: 0 | 1): Promise<ConsistencyState> {
    return this.post<ConsistencyState>("/consistency/answer", { label });
  }
}
