/** End-to-end: drive the real server through the console controller.
 *
 * Spawns `wacbench serve`, creates an interactive session on the triangle
 * problem, plays a scripted DM (two informative answers derived from a
 * log utility, then equal priorities), and checks after every render that
 * each displayed number equals the value the API reports.
 */

import { spawn, ChildProcess } from "node:child_process";
import { mkdtempSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { SessionApi } from "../src/api.js";
import { DmConsole, Renderer } from "../src/console.js";
import type { SessionDoc } from "../src/types.js";
import type { SessionView } from "../src/view.js";

const PORT = 18731 + (process.pid % 211);
const BASE = `http://127.0.0.1:${PORT}`;

let server: ChildProcess;

async function waitForHealthy(timeoutMs = 45_000): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  let lastErr: unknown;
  while (Date.now() < deadline) {
    try {
      const res = await fetch(`${BASE}/healthz`);
      if (res.ok) return;
    } catch (err) {
      lastErr = err;
    }
    await new Promise((r) => setTimeout(r, 250));
  }
  throw new Error(`server never became healthy: ${String(lastErr)}`);
}

beforeAll(async () => {
  const dataDir = mkdtempSync(join(tmpdir(), "wacbench-e2e-"));
  server = spawn(
    "python3",
    ["-m", "wacbench.cli", "serve", "--listen", `127.0.0.1:${PORT}`, "--data-dir", dataDir],
    { stdio: ["ignore", "pipe", "pipe"], cwd: join(__dirname, "..", "..") },
  );
  await waitForHealthy();
}, 60_000);

afterAll(() => {
  server?.kill("SIGTERM");
});

class CheckingRenderer implements Renderer {
  views: SessionView[] = [];
  errors: string[] = [];
  render(view: SessionView): void {
    this.views.push(view);
  }
  showError(message: string): void {
    this.errors.push(message);
  }
  clearError(): void {}
  get last(): SessionView {
    const v = this.views[this.views.length - 1];
    if (!v) throw new Error("nothing rendered");
    return v;
  }
}

const TRIANGLE = {
  problem: {
    A: [[1.0, -1.0, -1.0, -1.0]],
    b: [1.0, 0.0, 0.0, -0.1],
    v: 0.1,
    row_labels: ["capacity", "floor-a", "floor-b", "objective-floor"],
    c: [1.0],
    name: "triangle",
  },
  uncertainty: { rows: { "1": { delta: [0.05, 0.05, 0.05], N: 3 } }, symmetric: true },
  mode: "interactive" as const,
  config: { max_iter: 50, seed: 4 },
};

/** Scripted DM for U(s) = sum t_i ln s_i: priorities are the utility
 * values at the probe points, shifted positive (only differences matter
 * to the server). This mimics a perfectly consistent human. */
function scriptedPriorities(probes: number[][], t: number[]): number[] {
  const utilities = probes.map((s) => s.reduce((acc, si, i) => acc + (t[i] ?? 0) * Math.log(si), 0));
  const lo = Math.min(...utilities);
  return utilities.map((u) => u - lo + 1.0);
}

/** Every number the console would display must equal the API's value. */
async function assertZeroMath(view: SessionView, sessionId: string): Promise<void> {
  const res = await fetch(`${BASE}/sessions/${sessionId}`);
  const doc = (await res.json()) as SessionDoc;
  expect(view.objective.value).toBe(doc.current.objective);
  expect(view.iteration).toBe(doc.current.iteration);
  for (const cell of view.allSlacks) {
    const row = doc.row_labels.indexOf(cell.label) + 1;
    expect(cell.value).toBe(doc.current.s[row - 1]);
  }
  for (const cell of view.factors) {
    const row = doc.row_labels.indexOf(cell.label) + 1;
    expect(cell.value).toBe(doc.current.s[row - 1]);
  }
  expect(view.bounds).toEqual(doc.report?.rows ?? []);
  expect(view.history).toEqual(doc.history);
  if (view.question) {
    view.question.probes.forEach((probe, idx) => {
      expect(probe.slacks).toEqual(doc.question!.probe_points[idx]);
    });
  }
}

describe("scripted run against the live server", () => {
  it("completes create -> 3 answers -> stop with zero-math rendering", async () => {
    const api = new SessionApi({ baseUrl: BASE });
    const renderer = new CheckingRenderer();
    const dm = new DmConsole(api, renderer);
    const t = [0.2, 0.3, 0.4, 0.1];

    const created = await dm.start(TRIANGLE);
    expect(created.phase).toBe("awaiting_answer");
    await assertZeroMath(renderer.last, created.id);

    let answers = 0;
    for (; answers < 2; answers++) {
      const view = renderer.last;
      expect(view.question).not.toBeNull();
      const priorities = scriptedPriorities(
        view.question!.probes.map((p) => p.slacks),
        t,
      );
      priorities.forEach((p, i) => dm.setPriority(i, p));
      const doc = await dm.submitPriorities();
      await assertZeroMath(renderer.last, doc.id);
      expect(doc.phase).toBe("awaiting_answer");
      expect(doc.current.iteration).toBe(answers + 1);
    }

    // third answer: all-equal priorities -> zero gradient -> server stops
    const view = renderer.last;
    const count = view.question!.probes.length;
    for (let i = 0; i < count; i++) dm.setPriority(i, 1.0);
    const finalDoc = await dm.submitPriorities();
    expect(finalDoc.phase).toBe("stopped");
    expect(finalDoc.stop_reason).toBe("gradient_tolerance");
    expect(renderer.last.badge).toBe("stationary");
    await assertZeroMath(renderer.last, finalDoc.id);

    // trail: the trace endpoint agrees with the rendered history length
    const trace = await api.trace(finalDoc.id);
    expect(trace.length).toBe(renderer.last.history.length);
    expect(renderer.errors).toEqual([]);
  }, 60_000);

  it("rewind forks a live session without touching the original", async () => {
    const api = new SessionApi({ baseUrl: BASE });
    const renderer = new CheckingRenderer();
    const dm = new DmConsole(api, renderer);
    const t = [0.2, 0.3, 0.4, 0.1];

    const created = await dm.start(TRIANGLE);
    const priorities = scriptedPriorities(
      renderer.last.question!.probes.map((p) => p.slacks),
      t,
    );
    priorities.forEach((p, i) => dm.setPriority(i, p));
    await dm.submitPriorities();

    const originalId = created.id;
    const fork = await dm.rewind(0);
    expect(fork.id).not.toBe(originalId);
    expect(fork.phase).toBe("awaiting_answer");
    expect(fork.current.w).toEqual((await api.getSession(originalId)).trace[0]!.w);
    // original untouched
    const original = await api.getSession(originalId);
    expect(original.current.iteration).toBe(1);
    await assertZeroMath(renderer.last, fork.id);
  }, 60_000);

  it("displays a simulated-DM (demo) session read-only", async () => {
    // demo mode: the server runs the DM itself; the console just watches
    const create = await fetch(`${BASE}/sessions`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({
        ...TRIANGLE,
        mode: "simulated",
        utility: { family: "log_weighted", t: [0.2, 0.3, 0.4, 0.1] },
      }),
    });
    expect(create.status).toBe(201);
    const { id } = (await create.json()) as SessionDoc;
    await fetch(`${BASE}/sessions/${id}/step`, { method: "POST" });

    const api = new SessionApi({ baseUrl: BASE });
    const renderer = new CheckingRenderer();
    const dm = new DmConsole(api, renderer);
    const doc = await dm.load(id);
    expect(doc.phase).toBe("stopped");
    expect(renderer.last.badge).toBe("stationary");
    expect(renderer.last.question).toBeNull();
    expect(renderer.last.history.length).toBeGreaterThan(0);
    await assertZeroMath(renderer.last, id);
  }, 60_000);

  it("server rejects malformed priorities and the console surfaces it inline", async () => {
    const api = new SessionApi({ baseUrl: BASE });
    const renderer = new CheckingRenderer();
    const dm = new DmConsole(api, renderer);
    await dm.start(TRIANGLE);
    const count = renderer.last.question!.probes.length;
    for (let i = 0; i < count; i++) dm.setPriority(i, 1.0);
    dm.setPriority(0, 0); // client-side block, no request leaves
    await expect(dm.submitPriorities()).rejects.toThrow();
    expect(renderer.errors.at(-1)).toMatch(/strictly positive/);
  }, 60_000);
});
