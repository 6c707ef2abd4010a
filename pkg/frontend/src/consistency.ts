/** Controller for the relabeling (consistency) session view.

The service owns the session; this controller just mirrors its state, so
a page reload can resume by calling resume() and continuing at whatever
index the service reports.
*/

import { ApiClient, ApiError, ConsistencyState } from "./api.js";

export type ConsistencyPhase =
  | "idle"
  | "loading"
  | "active"
  | "submitting"
  | "finished"
  | "error";

export interface ConsistencySnapshot {
  phase: ConsistencyPhase;
  state: ConsistencyState | null;
  message: string | null;
}

export class ConsistencyController {
  private phase: ConsistencyPhase = "idle";
  private state: ConsistencyState | null = null;
  private message: string | null = null;
  private listeners: ((s: ConsistencySnapshot) => void)[] = [];

  constructor(private api: ApiClient) {}

  onChange(fn: (s: ConsistencySnapshot) => void): void {
    this.listeners.push(fn);
  }

  snapshot(): ConsistencySnapshot {
    return { phase: this.phase, state: this.state, message: this.message };
  }

  private emit(): void {
    const snap = this.snapshot();
    for (const fn of this.listeners) fn(snap);
  }

  private apply(state: ConsistencyState): void {
    this.state = state;
    this.phase = state.done ? "finished" : "active";
    this.message = null;
    this.emit();
  }

  private fail(err: unknown): void {
    this.phase = "error";
    this.message = err instanceof Error ? err.message : String(err);
    this.emit();
  }

  async begin(n: number, seed = 0): Promise<void> {
    this.phase = "loading";
    this.emit();
    try {
      this.apply(await this.api.consistencyStart(n, seed));
    } catch (err) {
      this.fail(err);
    }
  }

  /** Pick up an in-flight session (page reload); false if none exists. */
  async resume(): Promise<boolean> {
    this.phase = "loading";
    this.emit();
    try {
      this.apply(await this.api.consistencyState());
      return true;
    } catch (err) {
      if (err instanceof ApiError && err.status === 404) {
        this.phase = "idle";
        this.state = null;
        this.message = null;
        this.emit();
        return false;
      }
      this.fail(err);
      return false;
    }
  }

  async answer(label: 0 | 1): Promise<void> {
    if (this.phase !== "active") return;
    this.phase = "submitting";
    this.emit();
    try {
      this.apply(await this.api.consistencyAnswer(label));
    } catch (err) {
      this.fail(err);
    }
  }

  handleKey(key: string): Promise<void> {
    if (key === "ArrowLeft") return this.answer(0);
    if (key === "ArrowRight") return this.answer(1);
    return Promise.resolve();
  }

  /** "88%" for 12 disagreements over 100. */
  agreementText(): string {
    const r = this.state?.agreement_rate;
    return r === undefined ? "" : `${(r * 100).toFixed(0)}%`;
  }

  /** "0.24" for 12 disagreements over 100 (the 2e/n estimate). */
  noiseText(): string {
    const e = this.state?.noise_estimate;
    return e === undefined ? "" : e.toFixed(2);
  }

  progressText(): string {
    if (!this.state) return "";
    return `${this.state.index} / ${this.state.n}`;
  }
}
