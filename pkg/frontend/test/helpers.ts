/** Shared fakes: an in-memory service matching the JSON contract. */

import { ApiClient, FetchLike } from "../src/api.js";

export function jsonResponse(status: number, body: unknown): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

export interface FakeServiceOptions {
  nImages?: number;
  hasModel?: boolean;
  /** per-image like-probability when hasModel */
  scores?: number[];
}

/** Minimal in-memory stand-in for the labeling service. */
export class FakeService {
  labels = new Map<string, number>();
  posts: { id: string; label: number }[] = [];
  session: { ids: string[]; answers: number[]; disagreements: string[] } | null =
    null;
  readonly ids: string[];
  private scores: number[];
  private hasModel: boolean;

  constructor(opts: FakeServiceOptions = {}) {
    const n = opts.nImages ?? 5;
    this.ids = Array.from({ length: n }, (_, i) => `img-${i}`);
    this.hasModel = opts.hasModel ?? false;
    this.scores = opts.scores ?? this.ids.map(() => 0.5);
  }

  private counts() {
    const n = this.labels.size;
    let likes = 0;
    for (const v of this.labels.values()) likes += v;
    return { n_labeled: n, like_fraction: n ? likes / n : 0 };
  }

  private sessionState() {
    const s = this.session!;
    const i = s.answers.length;
    const out: Record<string, unknown> = {
      n: s.ids.length,
      index: i,
      done: i >= s.ids.length,
    };
    if (i < s.ids.length) {
      out.current = { id: s.ids[i], image_url: `/image/${s.ids[i]}` };
    } else {
      const d = s.disagreements.length;
      out.agreement_rate = (s.ids.length - d) / s.ids.length;
      out.disagreements = s.disagreements;
      out.noise_estimate = Math.min(1, (2 * d) / s.ids.length);
    }
    return out;
  }

  fetch: FetchLike = async (url, init) => {
    const u = new URL(url, "http://fake");
    const path = u.pathname;
    if (path === "/next") {
      const strategy = u.searchParams.get("strategy") ?? "sequential";
      const unlabeled = this.ids.filter((i) => !this.labels.has(i));
      if (strategy === "uncertainty" && !this.hasModel) {
        return jsonResponse(409, { detail: "uncertainty strategy needs a model" });
      }
      if (!unlabeled.length) {
        return jsonResponse(404, { detail: "no unlabeled entries" });
      }
      let pick = unlabeled[0];
      if (strategy === "uncertainty") {
        pick = unlabeled.reduce((a, b) =>
          Math.abs(this.score(a) - 0.5) <= Math.abs(this.score(b) - 0.5) ? a : b,
        );
      }
      const body: Record<string, unknown> = {
        id: pick,
        image_url: `/image/${pick}`,
      };
      if (this.hasModel) body.model_score = this.score(pick);
      return jsonResponse(200, body);
    }
    if (path === "/label") {
      const { id, label } = JSON.parse(String(init?.body));
      if (!this.ids.includes(id)) return jsonResponse(404, { detail: "unknown id" });
      if (label !== 0 && label !== 1)
        return jsonResponse(400, { detail: "label must be 0 or 1" });
      this.posts.push({ id, label });
      this.labels.set(id, label);
      return jsonResponse(200, this.counts());
    }
    if (path === "/stats") {
      return jsonResponse(200, { ...this.counts(), splits: {} });
    }
    if (path.startsWith("/predict/")) {
      const id = path.slice("/predict/".length);
      if (!this.hasModel) return jsonResponse(409, { detail: "no model loaded" });
      if (!this.ids.includes(id)) return jsonResponse(404, { detail: "unknown id" });
      return jsonResponse(200, { p_like: this.score(id) });
    }
    if (path === "/consistency/start") {
      const n = Number(u.searchParams.get("n"));
      const labeled = this.ids.filter((i) => this.labels.has(i));
      if (n > labeled.length)
        return jsonResponse(400, { detail: "not enough labeled entries" });
      this.session = { ids: labeled.slice(0, n), answers: [], disagreements: [] };
      return jsonResponse(200, this.sessionState());
    }
    if (path === "/consistency/state") {
      if (!this.session) return jsonResponse(404, { detail: "no session" });
      return jsonResponse(200, this.sessionState());
    }
    if (path === "/consistency/answer") {
      if (!this.session) return jsonResponse(404, { detail: "no session" });
      const { label } = JSON.parse(String(init?.body));
      const s = this.session;
      const id = s.ids[s.answers.length];
      s.answers.push(label);
      if (label !== this.labels.get(id)) s.disagreements.push(id);
      return jsonResponse(200, this.sessionState());
    }
    return jsonResponse(404, { detail: `no route ${path}` });
  };

  private score(id: string): number {
    return this.scores[this.ids.indexOf(id)];
  }

  client(): ApiClient {
    return new ApiClient("", this.fetch);
  }
}
