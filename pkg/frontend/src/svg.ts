import { DETEQ_METHOD, MC_METHOD } from "./csv.js";
import type { Series } from "./series.js";

export interface ChartOpts {
  title: string;
  subtitle?: string;
  xLabel: string;
  yLabel: string;
  series: Series[];
}

// Same hue for the simulated points and the closed-form line of one configuration.
const PALETTE = [
  "#4361ee",
  "#e63946",
  "#2d6a4f",
  "#f3722c",
  "#7209b7",
  "#0096c7",
  "#b5838d",
  "#6a994e",
  "#ffb703",
  "#5e548e",
];

// 1.96 standard errors on either side of the estimate.
const ERRBAR_Z = 1.96;

const W = 800;
const H = 430;
const ML = 62;
const MR = 276;
const MT = 46;
const MB = 58;

function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;").replace(/"/g, "&quot;");
}

function fmtTick(v: number): string {
  return String(Number(v.toFixed(6)));
}

function niceTicks(min: number, max: number, count: number): number[] {
  const range = max - min || 1;
  const rough = range / count;
  const mag = Math.pow(10, Math.floor(Math.log10(rough)));
  const step = [1, 2, 5, 10].map((m) => m * mag).find((n) => n >= rough) ?? rough;
  const start = Math.ceil(min / step) * step;
  const ticks: number[] = [];
  for (let v = start; v <= max + step * 1e-9; v += step) ticks.push(Number(v.toFixed(9)));
  return ticks;
}

function markerFor(receiver: string, cx: number, cy: number, color: string): string {
  const x = cx.toFixed(1);
  const y = cy.toFixed(1);
  switch (receiver) {
    case "awgn_only": {
      const h = 3;
      return `<rect x="${(cx - h).toFixed(1)}" y="${(cy - h).toFixed(1)}" width="${2 * h}" height="${2 * h}" fill="${color}"/>`;
    }
    case "mrc":
      return `<path d="M ${x} ${(cy - 3.8).toFixed(1)} L ${(cx + 3.8).toFixed(1)} ${y} L ${x} ${(cy + 3.8).toFixed(1)} L ${(cx - 3.8).toFixed(1)} ${y} Z" fill="${color}"/>`;
    default:
      return `<circle cx="${x}" cy="${y}" r="3" fill="${color}"/>`;
  }
}

export function renderChart(opts: ChartOpts): string {
  const { series } = opts;
  if (series.length === 0) throw new Error("empty selection: nothing to draw");

  const pw = W - ML - MR;
  const ph = H - MT - MB;

  // Data ranges; y always starts at zero and leaves headroom for the error bars.
  const xs = series.flatMap((s) => s.points.map((p) => p.x));
  const tops = series.flatMap((s) => s.points.map((p) => p.y + ERRBAR_Z * (p.stderr ?? 0)));
  const xMin = Math.min(...xs);
  const xMax = Math.max(...xs);
  const yMax = Math.max(...tops) * 1.06 || 1;

  const xOf = (v: number) => ML + ((v - xMin) / (xMax - xMin || 1)) * pw;
  const yOf = (v: number) => MT + ph - (v / yMax) * ph;

  // Ticks sit on the measured sweep values when the sweep is short.
  const xUnique = [...new Set(xs)].sort((a, b) => a - b);
  const xTicks = xUnique.length <= 9 ? xUnique : niceTicks(xMin, xMax, 8);
  const yTicks = niceTicks(0, yMax, 6);

  const colorOf = new Map<string, string>();
  for (const s of series) {
    if (!colorOf.has(s.colorKey)) colorOf.set(s.colorKey, PALETTE[colorOf.size % PALETTE.length]!);
  }

  let out = `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${W} ${H}" font-family="Helvetica, Arial, sans-serif">\n`;
  out += `<rect width="${W}" height="${H}" fill="#fff"/>\n`;
  out += `<text x="${ML}" y="18" font-size="12" font-weight="600" fill="#222">${esc(opts.title)}</text>\n`;
  if (opts.subtitle) {
    out += `<text x="${ML}" y="32" font-size="8.5" fill="#888">${esc(opts.subtitle)}</text>\n`;
  }

  // Grid and y tick labels
  for (const v of yTicks) {
    const y = yOf(v);
    out += `<line x1="${ML}" y1="${y.toFixed(1)}" x2="${ML + pw}" y2="${y.toFixed(1)}" stroke="#eee" stroke-width="0.6"/>\n`;
    out += `<text x="${ML - 6}" y="${(y + 2.6).toFixed(1)}" font-size="8.5" fill="#444" text-anchor="end">${fmtTick(v)}</text>\n`;
  }

  // X ticks
  for (const v of xTicks) {
    const x = xOf(v);
    out += `<line x1="${x.toFixed(1)}" y1="${MT + ph}" x2="${x.toFixed(1)}" y2="${MT + ph + 4}" stroke="#333" stroke-width="0.6"/>\n`;
    out += `<text x="${x.toFixed(1)}" y="${MT + ph + 14}" font-size="8.5" fill="#444" text-anchor="middle">${fmtTick(v)}</text>\n`;
  }

  // Axes frame
  out += `<line x1="${ML}" y1="${MT}" x2="${ML}" y2="${MT + ph}" stroke="#333" stroke-width="0.8"/>\n`;
  out += `<line x1="${ML}" y1="${MT + ph}" x2="${ML + pw}" y2="${MT + ph}" stroke="#333" stroke-width="0.8"/>\n`;
  out += `<text x="${ML + pw / 2}" y="${H - 22}" font-size="10" fill="#222" text-anchor="middle">${esc(opts.xLabel)}</text>\n`;
  out += `<text x="16" y="${MT + ph / 2}" font-size="10" fill="#222" text-anchor="middle" transform="rotate(-90 16 ${MT + ph / 2})">${esc(opts.yLabel)}</text>\n`;

  // Closed-form curves first so the simulated markers stay on top.
  const ordered = [...series].sort((a, b) => Number(a.method === MC_METHOD) - Number(b.method === MC_METHOD));
  let hasErrorBars = false;
  for (const s of ordered) {
    const color = colorOf.get(s.colorKey)!;
    if (s.method === DETEQ_METHOD) {
      const pts = s.points.map((p) => `${xOf(p.x).toFixed(1)},${yOf(p.y).toFixed(1)}`).join(" ");
      out += `<polyline fill="none" stroke="${color}" stroke-width="1.4" points="${pts}"/>\n`;
      continue;
    }
    for (const p of s.points) {
      const x = xOf(p.x);
      if (p.stderr !== null && p.stderr > 0) {
        hasErrorBars = true;
        const yLo = yOf(p.y - ERRBAR_Z * p.stderr);
        const yHi = yOf(p.y + ERRBAR_Z * p.stderr);
        out += `<line class="errbar" x1="${x.toFixed(1)}" y1="${yLo.toFixed(1)}" x2="${x.toFixed(1)}" y2="${yHi.toFixed(1)}" stroke="${color}" stroke-width="0.9"/>\n`;
        for (const yEnd of [yLo, yHi]) {
          out += `<line class="errbar" x1="${(x - 2.4).toFixed(1)}" y1="${yEnd.toFixed(1)}" x2="${(x + 2.4).toFixed(1)}" y2="${yEnd.toFixed(1)}" stroke="${color}" stroke-width="0.9"/>\n`;
        }
      }
      out += markerFor(s.receiver, x, yOf(p.y), color) + "\n";
    }
  }

  // Legend, one entry per series, in series order
  const lx = ML + pw + 18;
  let ly = MT + 4;
  for (const s of series) {
    const color = colorOf.get(s.colorKey)!;
    if (s.method === DETEQ_METHOD) {
      out += `<line x1="${lx}" y1="${ly}" x2="${lx + 16}" y2="${ly}" stroke="${color}" stroke-width="1.4"/>\n`;
    } else {
      out += markerFor(s.receiver, lx + 8, ly, color) + "\n";
    }
    out += `<text x="${lx + 22}" y="${ly + 2.8}" font-size="8.5" fill="#333">${esc(s.label)}</text>\n`;
    ly += 15;
  }
  if (hasErrorBars) {
    out += `<text x="${lx}" y="${ly + 6}" font-size="7.5" fill="#888">error bars: ±${ERRBAR_Z} SE</text>\n`;
  }

  out += `</svg>\n`;
  return out;
}
