import { DETEQ_METHOD, MC_METHOD, type ResultRow } from "./csv.js";

export type FigureKind = "se_vs_pu" | "se_vs_M";

export const FIGURE_KINDS: readonly FigureKind[] = ["se_vs_pu", "se_vs_M"];

export interface SeriesPoint {
  x: number;
  y: number;
  stderr: number | null;
}

export interface Series {
  /** Stable identity of the series; also its sort key. */
  key: string;
  /** Everything but the method; the simulated/closed-form pair shares it (and a color). */
  colorKey: string;
  label: string;
  receiver: string;
  method: string;
  points: SeriesPoint[];
}

const RECEIVER_LABELS: Record<string, string> = {
  proposed: "quant-aware MMSE",
  awgn_only: "AWGN-only MMSE",
  mrc: "MRC",
};

const METHOD_LABELS: Record<string, string> = {
  [MC_METHOD]: "sim",
  [DETEQ_METHOD]: "closed form",
};

const SCENARIO_LABELS: Record<string, string> = {
  "fig2-fixed-pu": "fixed power",
  "fig2-scaled-pu": "scaled power",
};

export function bitsLabel(spec: string): string {
  if (spec === "uINF") return "ideal ADC";
  const uniform = /^u(\d+)$/.exec(spec);
  if (uniform) return `${uniform[1]}-bit`;
  const random = /^r(\d+)-(\d+)$/.exec(spec);
  if (random) return `random ${random[1]}-${random[2]} bit`;
  return spec; // explicit per-antenna lists stay verbatim
}

function receiverLabel(r: string): string {
  return RECEIVER_LABELS[r] ?? r;
}

function methodLabel(m: string): string {
  return METHOD_LABELS[m] ?? m;
}

/**
 * Group sum-rate rows into plottable series.
 *
 * se_vs_pu: x is transmit power, one series per (scenario, receiver, bits, M, K, method).
 * se_vs_M:  x is the antenna count, one series per (scenario, receiver, bits, K, method);
 *           the power column stays out of the key because scaled-power sweeps vary it
 *           along the x axis (the scenario tag already says which power rule applied).
 */
export function buildSeries(rows: ResultRow[], kind: FigureKind): Series[] {
  const sums = rows.filter((r) => r.target === "SUM");
  if (sums.length === 0) {
    throw new Error("empty selection: no SUM rows in the CSV");
  }

  const groups = new Map<string, { parts: string[]; row: ResultRow; points: SeriesPoint[] }>();
  for (const r of sums) {
    const parts =
      kind === "se_vs_pu"
        ? [r.scenario, r.receiver, r.bitsSpec, `M=${r.M}`, `K=${r.K}`]
        : [r.scenario, r.receiver, r.bitsSpec, `K=${r.K}`];
    const key = [...parts, r.method].join("|");
    let g = groups.get(key);
    if (!g) {
      g = { parts, row: r, points: [] };
      groups.set(key, g);
    }
    g.points.push({ x: kind === "se_vs_pu" ? r.puDb : r.M, y: r.value, stderr: r.stderr });
  }

  // with one bits spec in play its mention moves to the subtitle (se_vs_pu)
  const bitsVaries = new Set(sums.map((r) => r.bitsSpec)).size > 1;

  const series: Series[] = [];
  for (const [key, g] of groups) {
    g.points.sort((a, b) => a.x - b.x);
    series.push({
      key,
      colorKey: g.parts.join("|"),
      label: seriesLabel(g.row, kind, bitsVaries),
      receiver: g.row.receiver,
      method: g.row.method,
      points: g.points,
    });
  }
  // numeric-aware compare so M=60 sorts ahead of M=120
  const cmp = (a: string, b: string) => a.localeCompare(b, "en", { numeric: true });
  series.sort((a, b) => (a.colorKey === b.colorKey ? cmp(a.method, b.method) : cmp(a.colorKey, b.colorKey)));
  return series;
}

function seriesLabel(row: ResultRow, kind: FigureKind, bitsVaries: boolean): string {
  const scen = SCENARIO_LABELS[row.scenario];
  const bits = bitsLabel(row.bitsSpec);
  const pieces: string[] = [];
  if (kind === "se_vs_pu") {
    pieces.push(receiverLabel(row.receiver), `M=${row.M}`);
    if (bitsVaries) pieces.push(bits);
  } else {
    pieces.push(bits);
    if (row.receiver !== "proposed") pieces.push(receiverLabel(row.receiver));
    if (scen) pieces.push(scen);
    else if (row.scenario !== "custom") pieces.push(row.scenario);
  }
  return `${pieces.join(", ")} (${methodLabel(row.method)})`;
}
