/** State machine behind the one-photo-at-a-time labeling view.

The controller owns all view state; the DOM layer only renders snapshots
and forwards events. Every accepted choice maps to exactly one POST:
while a submission is in flight further choices are dropped, which is
what makes key auto-repeat safe.
*/

import { ApiClient, ApiError, NextItem, Strategy } from "./api.js";

export type LabelingPhase =
  | "idle"
  | "loading"
  | "ready"
  | "submitting"
  | "done" // every manifest entry is labeled
  | "error";

export interface LabelingSnapshot {
  phase: LabelingPhase;
  item: NextItem | null;
  strategy: Strategy;
  showScore: boolean;
  /** false once the service answered 409 for the uncertainty strategy */
  uncertaintyAvailable: boolean;
  nLabeled: number;
  likeFraction: number;
  /** human-readable message for error states; null otherwise */
  message: string | null;
}

export class LabelingController {
  private phase: LabelingPhase = "idle";
  private item: NextItem | null = null;
  private strategy: Strategy = "sequential";
  private showScore = false;
  private uncertaintyAvailable = true;
  private nLabeled = 0;
  private likeFraction = 0;
  private message: string | null = null;
  private listeners: ((s: LabelingSnapshot) => void)[] = [];

  constructor(private api: ApiClient) {}

  onChange(fn: (s: LabelingSnapshot) => void): void {
    this.listeners.push(fn);
  }

  snapshot(): LabelingSnapshot {
    return {
      phase: this.phase,
      item: this.item,
      strategy: this.strategy,
      showScore: this.showScore,
      uncertaintyAvailable: this.uncertaintyAvailable,
      nLabeled: this.nLabeled,
      likeFraction: this.likeFraction,
      message: this.message,
    };
  }

  private emit(): void {
    const snap = this.snapshot();
    for (const fn of this.listeners) fn(snap);
  }

  /** "53% likes" banner text, or a placeholder before any label exists. */
  statsBanner(): string {
    if (this.nLabeled === 0) return "no labels yet";
    const pct = (this.likeFraction * 100).toFixed(0);
    return `${this.nLabeled} labeled · ${pct}% likes`;
  }

  async start(): Promise<void> {
    try {
      const stats = await this.api.stats();
      this.nLabeled = stats.n_labeled;
      this.likeFraction = stats.like_fraction;
    } catch {
      // stats are cosmetic; the /next fetch below surfaces real failures
    }
    await this.advance();
  }

  private async advance(): Promise<void> {
    this.phase = "loading";
    this.message = null;
    this.emit();
    try {
      this.item = await this.api.next(this.strategy);
      this.phase = "ready";
    } catch (err) {
      this.item = null;
      if (err instanceof ApiError && err.status === 404) {
        this.phase = "done";
        this.message = "all images are labeled";
      } else if (err instanceof ApiError && err.status === 409) {
        // uncertainty needs a model the service does not have
        this.uncertaintyAvailable = false;
        this.strategy = "sequential";
        this.emit();
        await this.advance();
        return;
      } else {
        this.phase = "error";
        this.message = err instanceof Error ? err.message : String(err);
      }
    }
    this.emit();
  }

  /** Submit a choice for the current image. No-op unless one is showing. */
  async choose(label: 0 | 1): Promise<void> {
    if (this.phase !== "ready" || this.item === null) return;
    const id = this.item.id;
    this.phase = "submitting";
    this.emit();
    try {
      const res = await this.api.label(id, label);
      this.nLabeled = res.n_labeled;
      this.likeFraction = res.like_fraction;
    } catch (err) {
      this.phase = "error";
      this.message = err instanceof Error ? err.message : String(err);
      this.emit();
      return;
    }
    await this.advance();
  }

  /** Arrow keys: left = dislike(0), right = like(1). */
  handleKey(key: string): Promise<void> {
    if (key === "ArrowLeft") return this.choose(0);
    if (key === "ArrowRight") return this.choose(1);
    return Promise.resolve();
  }

  async setStrategy(strategy: Strategy): Promise<void> {
    if (strategy === "uncertainty" && !this.uncertaintyAvailable) return;
    if (strategy === this.strategy) return;
    this.strategy = strategy;
    if (this.phase === "ready" || this.phase === "error") await this.advance();
  }

  setShowScore(show: boolean): void {
    this.showScore = show;
    this.emit();
  }

  /** Retry after a network failure, re-fetching the current item. */
  retry(): Promise<void> {
    return this.advance();
  }
}
