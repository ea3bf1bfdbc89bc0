/** Thin browser renderer: builds DOM nodes from a SessionView.
 *
 * All numbers pass through formatNumber only; nothing is computed here.
 */

import { SessionApi } from "./api.js";
import { DmConsole, Renderer } from "./console.js";
import { formatNumber, sparkline, SessionView } from "./view.js";

export class DomRenderer implements Renderer {
  private errorBox: HTMLElement;

  constructor(
    private root: HTMLElement,
    private hooks: {
      onPriority: (index: number, value: number) => void;
      onSubmit: () => void;
      onSatisfied: () => void;
      onRewind: (iteration: number) => void;
      onExpertToggle: () => void;
    },
  ) {
    this.errorBox = document.createElement("div");
    this.errorBox.className = "error";
  }

  showError(message: string): void {
    this.errorBox.textContent = message;
  }

  clearError(): void {
    this.errorBox.textContent = "";
  }

  private numberRow(label: string, value: number): HTMLElement {
    const row = document.createElement("div");
    row.className = "cell";
    const name = document.createElement("span");
    name.textContent = label;
    const val = document.createElement("span");
    val.className = "num";
    val.textContent = formatNumber(value);
    row.append(name, val);
    return row;
  }

  render(view: SessionView, expert: boolean): void {
    const root = this.root;
    root.textContent = "";

    const header = document.createElement("header");
    const title = document.createElement("h1");
    title.textContent = `session ${view.id}`;
    const status = document.createElement("p");
    status.textContent = `iteration ${view.iteration} — phase ${view.phase}`;
    header.append(title, status);
    if (view.badge) {
      const badge = document.createElement("span");
      badge.className = `badge badge-${view.badge}`;
      badge.textContent = view.badge;
      header.append(badge);
    }
    root.append(header, this.errorBox);

    const summary = document.createElement("section");
    summary.append(this.numberRow(view.objective.label, view.objective.value));
    root.append(summary);

    const factors = document.createElement("section");
    const fTitle = document.createElement("h2");
    fTitle.textContent = "driving factors";
    factors.append(fTitle);
    for (const cell of view.factors) {
      factors.append(this.numberRow(cell.label, cell.value));
    }
    root.append(factors);

    const expertBtn = document.createElement("button");
    expertBtn.textContent = expert ? "hide full slack table" : "expert: all slacks";
    expertBtn.onclick = () => this.hooks.onExpertToggle();
    root.append(expertBtn);
    if (expert) {
      const all = document.createElement("section");
      for (const cell of view.allSlacks) {
        all.append(this.numberRow(cell.label, cell.value));
      }
      root.append(all);
    }

    if (view.bounds.length > 0) {
      const bounds = document.createElement("table");
      const head = document.createElement("tr");
      for (const col of ["row", "delta", "robust", "hoeffding", "binomial"]) {
        const th = document.createElement("th");
        th.textContent = col;
        head.append(th);
      }
      bounds.append(head);
      for (const row of view.bounds) {
        const tr = document.createElement("tr");
        const cells = [
          String(row.row),
          formatNumber(row.delta_ratio),
          String(row.robust_feasible),
          formatNumber(row.hoeffding),
          row.binomial === null ? "-" : formatNumber(row.binomial),
        ];
        for (const value of cells) {
          const td = document.createElement("td");
          td.textContent = value;
          tr.append(td);
        }
        bounds.append(tr);
      }
      root.append(bounds);
    }

    if (view.history.length > 0) {
      const spark = document.createElement("pre");
      spark.className = "sparkline";
      spark.textContent =
        `objective ${sparkline(view.history.map((h) => h.objective))}\n` +
        `utility   ${sparkline(view.history.map((h) => h.value))}`;
      root.append(spark);
    }

    if (view.question) {
      const form = document.createElement("form");
      form.onsubmit = (ev) => {
        ev.preventDefault();
        this.hooks.onSubmit();
      };
      const qTitle = document.createElement("h2");
      qTitle.textContent = "rate these slack profiles";
      form.append(qTitle);
      view.question.probes.forEach((probe) => {
        const card = document.createElement("fieldset");
        const legend = document.createElement("legend");
        legend.textContent = probe.label;
        card.append(legend);
        const values = document.createElement("code");
        values.textContent = probe.slacks.map((v) => formatNumber(v)).join(", ");
        card.append(values);
        const input = document.createElement("input");
        input.type = "range";
        input.min = "0.1";
        input.max = "10";
        input.step = "0.1";
        input.value = "1";
        input.oninput = () => this.hooks.onPriority(probe.index, Number(input.value));
        card.append(input);
        form.append(card);
      });
      const submit = document.createElement("button");
      submit.type = "submit";
      submit.textContent = "submit priorities";
      const satisfied = document.createElement("button");
      satisfied.type = "button";
      satisfied.textContent = "satisfied";
      satisfied.onclick = () => this.hooks.onSatisfied();
      form.append(submit, satisfied);
      root.append(form);
    }

    if (view.iteration > 0) {
      const rewind = document.createElement("button");
      rewind.textContent = "rewind to iteration 0";
      rewind.onclick = () => this.hooks.onRewind(0);
      root.append(rewind);
    }

    for (const warning of view.warnings) {
      const p = document.createElement("p");
      p.className = "warning";
      p.textContent = warning;
      root.append(p);
    }
  }
}

/** Wire a console into the page; used by index.html. */
export function mountConsole(root: HTMLElement, baseUrl: string): DmConsole {
  let consoleRef: DmConsole | null = null;
  const renderer = new DomRenderer(root, {
    onPriority: (i, v) => consoleRef?.setPriority(i, v),
    onSubmit: () => void consoleRef?.submitPriorities().catch(() => undefined),
    onSatisfied: () => void consoleRef?.markSatisfied().catch(() => undefined),
    onRewind: (i) => void consoleRef?.rewind(i).catch(() => undefined),
    onExpertToggle: () => consoleRef?.toggleExpert(),
  });
  const api = new SessionApi({ baseUrl });
  consoleRef = new DmConsole(api, renderer);
  return consoleRef;
}
