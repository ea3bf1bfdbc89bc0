/** View-model construction: selects and labels values from the session
 * document. Every numeric cell carries the API value verbatim; the only
 * transformation this module ever applies is display formatting.
 */

import type { BoundRowDoc, HistoryPointDoc, QuestionDoc, SessionDoc } from "./types.js";

export interface NumberCell {
  label: string;
  value: number; // verbatim API value
}

export interface ProbeCard {
  index: number; // 0 = base point, i >= 1 bumps slack row i
  label: string;
  slacks: number[]; // verbatim probe point
}

export interface QuestionView {
  kind: string;
  probes: ProbeCard[];
}

export interface SessionView {
  id: string;
  mode: string;
  phase: string;
  stopReason: string | null;
  badge: string | null; // "stationary" | "satisfied" | "stopped"
  iteration: number;
  objective: NumberCell;
  factors: NumberCell[]; // driving-factor slacks
  allSlacks: NumberCell[]; // behind the expert toggle
  bounds: BoundRowDoc[];
  question: QuestionView | null;
  history: HistoryPointDoc[];
  warnings: string[];
}

export interface ViewOptions {
  /** 1-based slack rows to surface as driving factors; defaults to the
   * uncertain rows plus the embedded objective row. */
  drivingRows?: number[];
}

export function badgeFor(doc: SessionDoc): string | null {
  if (doc.phase !== "stopped") return null;
  if (doc.stop_reason === "gradient_tolerance") return "stationary";
  if (doc.stop_reason === "dm_satisfied") return "satisfied";
  return "stopped";
}

export function defaultDrivingRows(doc: SessionDoc): number[] {
  const rows = Object.keys(doc.uncertainty?.rows ?? {})
    .map((k) => parseInt(k, 10))
    .filter((k) => Number.isFinite(k));
  rows.sort((a, b) => a - b);
  const m = doc.current.s.length;
  if (!rows.includes(m)) rows.push(m); // the objective-floor row
  return rows.slice(0, 20);
}

function rowLabel(doc: SessionDoc, row: number): string {
  return doc.row_labels[row - 1] ?? `row ${row}`;
}

function questionView(q: QuestionDoc | null, doc: SessionDoc): QuestionView | null {
  if (!q) return null;
  const probes: ProbeCard[] = q.probe_points.map((point, idx) => ({
    index: idx,
    label: idx === 0 ? "current slacks" : `bump ${rowLabel(doc, idx)}`,
    slacks: point,
  }));
  return { kind: q.kind, probes };
}

export function buildView(doc: SessionDoc, opts: ViewOptions = {}): SessionView {
  const driving = (opts.drivingRows ?? defaultDrivingRows(doc)).filter(
    (row) => row >= 1 && row <= doc.current.s.length,
  );
  const factors = driving.map((row) => ({
    label: rowLabel(doc, row),
    value: doc.current.s[row - 1]!,
  }));
  const allSlacks = doc.current.s.map((value, i) => ({
    label: rowLabel(doc, i + 1),
    value,
  }));
  return {
    id: doc.id,
    mode: doc.mode,
    phase: doc.phase,
    stopReason: doc.stop_reason,
    badge: badgeFor(doc),
    iteration: doc.current.iteration,
    objective: { label: "objective", value: doc.current.objective },
    factors,
    allSlacks,
    bounds: doc.report?.rows ?? [],
    question: questionView(doc.question, doc),
    history: doc.history ?? [],
    warnings: doc.warnings ?? [],
  };
}

/** Display rounding: shortest of fixed/exponential that stays faithful. */
export function formatNumber(value: number, digits = 6): string {
  if (!Number.isFinite(value)) return String(value);
  if (value === 0) return "0";
  const magnitude = Math.abs(value);
  if (magnitude >= 1e6 || magnitude < 1e-4) {
    return value.toExponential(Math.max(0, digits - 1));
  }
  const fixed = value.toPrecision(digits);
  return fixed.includes(".") ? fixed.replace(/\.?0+$/, "") : fixed;
}

/** Unicode sparkline of a numeric series (formatting, not computation). */
export function sparkline(series: (number | null)[]): string {
  const bars = "▁▂▃▄▅▆▇█";
  const present = series.filter((v): v is number => v !== null && Number.isFinite(v));
  if (present.length === 0) return "";
  const lo = Math.min(...present);
  const hi = Math.max(...present);
  const span = hi - lo || 1;
  return series
    .map((v) => {
      if (v === null || !Number.isFinite(v)) return " ";
      const idx = Math.min(bars.length - 1, Math.floor(((v - lo) / span) * (bars.length - 1) + 0.5));
      return bars[idx]!;
    })
    .join("");
}
