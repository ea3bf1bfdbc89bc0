/** Console controller: state machine glue between the API and a renderer.
 *
 * The controller owns one session at a time, enforces a single in-flight
 * request, validates priorities client-side (strictly positive, complete)
 * before anything is sent, and coordinates the answer -> step protocol so
 * the DM always lands back on a pending question or a stop badge.
 */

import { ApiError, SessionApi } from "./api.js";
import { buildView, SessionView, ViewOptions } from "./view.js";
import type { CreateSessionBody, SessionDoc } from "./types.js";

export interface Renderer {
  render(view: SessionView, expert: boolean): void;
  showError(message: string): void;
  clearError(): void;
}

export class DmConsole {
  private doc: SessionDoc | null = null;
  private priorities: (number | null)[] = [];
  private expert = false;
  private inFlight = false;
  private questionSerial = 0;

  constructor(
    private api: SessionApi,
    private renderer: Renderer,
    private viewOptions: ViewOptions = {},
  ) {}

  get session(): SessionDoc | null {
    return this.doc;
  }

  get currentView(): SessionView | null {
    return this.doc ? buildView(this.doc, this.viewOptions) : null;
  }

  get busy(): boolean {
    return this.inFlight;
  }

  private adopt(doc: SessionDoc) {
    const hadQuestion = this.doc?.question != null;
    this.doc = doc;
    if (doc.question) {
      const count = doc.question.probe_points.length;
      if (!hadQuestion || this.priorities.length !== count) {
        this.priorities = new Array(count).fill(null);
        this.questionSerial += 1;
      }
    } else {
      this.priorities = [];
    }
    this.renderer.clearError();
    this.renderer.render(buildView(doc, this.viewOptions), this.expert);
  }

  private questionKey(): string {
    return `${this.doc?.id ?? "?"}:q${this.doc?.current.iteration ?? 0}:${this.questionSerial}`;
  }

  private async guarded<T>(fn: () => Promise<T>): Promise<T> {
    if (this.inFlight) {
      throw new Error("a request is already in flight");
    }
    this.inFlight = true;
    try {
      return await fn();
    } finally {
      this.inFlight = false;
    }
  }

  async start(body: CreateSessionBody): Promise<SessionDoc> {
    return this.guarded(async () => {
      const doc = await this.api.createSession(body);
      this.adopt(doc);
      return doc;
    });
  }

  async load(id: string): Promise<SessionDoc> {
    return this.guarded(async () => {
      const doc = await this.api.getSession(id);
      this.adopt(doc);
      return doc;
    });
  }

  setPriority(index: number, value: number): void {
    if (index < 0 || index >= this.priorities.length) {
      throw new Error(`no probe ${index}`);
    }
    this.priorities[index] = value;
  }

  prioritiesComplete(): boolean {
    return this.priorities.length > 0 && this.priorities.every((p) => p !== null);
  }

  /** Validate and submit the collected priorities, then step when the
   * server reports ready_to_step so the next question (or the stop badge)
   * is on screen when the promise resolves. */
  async submitPriorities(): Promise<SessionDoc> {
    const doc = this.doc;
    if (!doc || doc.phase !== "awaiting_answer" || !doc.question) {
      throw new Error("no question is pending");
    }
    if (!this.prioritiesComplete()) {
      this.renderer.showError("fill in every priority before submitting");
      throw new Error("incomplete priorities");
    }
    const values = this.priorities.map((p) => p as number);
    if (values.some((p) => !(p > 0) || !Number.isFinite(p))) {
      this.renderer.showError("priorities must be strictly positive");
      throw new Error("nonpositive priority");
    }
    return this.guarded(async () => {
      let next: SessionDoc;
      try {
        next = await this.api.answer(doc.id, { priorities: values }, this.questionKey());
      } catch (err) {
        this.renderer.showError(err instanceof ApiError ? err.detail : String(err));
        throw err;
      }
      if (next.phase === "ready_to_step") {
        next = await this.api.step(doc.id);
      }
      this.adopt(next);
      return next;
    });
  }

  async markSatisfied(): Promise<SessionDoc> {
    const doc = this.doc;
    if (!doc || doc.phase !== "awaiting_answer") {
      throw new Error("no question is pending");
    }
    return this.guarded(async () => {
      const next = await this.api.answer(doc.id, { satisfied: true }, this.questionKey());
      this.adopt(next);
      return next;
    });
  }

  /** Fork a fresh session from an earlier iterate; the original session is
   * untouched and the console switches to the fork. */
  async rewind(iteration: number): Promise<SessionDoc> {
    const doc = this.doc;
    if (!doc) throw new Error("no session loaded");
    if (iteration < 0 || iteration >= doc.trace.length) {
      this.renderer.showError(`iteration ${iteration} is outside the trace`);
      throw new Error("iteration out of range");
    }
    return this.guarded(async () => {
      const fork = await this.api.fork(doc.id, iteration);
      this.adopt(fork);
      return fork;
    });
  }

  toggleExpert(): void {
    this.expert = !this.expert;
    if (this.doc) {
      this.renderer.render(buildView(this.doc, this.viewOptions), this.expert);
    }
  }
}
