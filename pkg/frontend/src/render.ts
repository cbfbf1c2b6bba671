import { MC_METHOD, parseResultCsv, type ResultRow } from "./csv.js";
import { bitsLabel, buildSeries, type FigureKind } from "./series.js";
import { renderChart } from "./svg.js";

const AXIS: Record<FigureKind, { title: string; xLabel: string }> = {
  se_vs_pu: {
    title: "Sum spectral efficiency vs transmit power",
    xLabel: "transmit power (dB)",
  },
  se_vs_M: {
    title: "Sum spectral efficiency vs antenna count",
    xLabel: "number of receive antennas M",
  },
};

const Y_LABEL = "sum spectral efficiency (bits/s/Hz)";

/** Facts shared by every row become the subtitle; anything that varies is left out. */
function subtitleFor(rows: ResultRow[], kind: FigureKind): string | undefined {
  const parts: string[] = [];
  const ks = new Set(rows.map((r) => r.K));
  if (ks.size === 1) parts.push(`K=${[...ks][0]}`);
  const bits = new Set(rows.map((r) => r.bitsSpec));
  if (kind === "se_vs_pu" && bits.size === 1) {
    const b = bitsLabel([...bits][0]!);
    parts.push(b.includes("ADC") ? `${b}s` : `${b} ADCs`);
  }
  const drops = new Set(rows.map((r) => r.dropSeed));
  if (drops.size === 1) parts.push(`drop ${[...drops][0]}`);
  const trials = new Set(rows.filter((r) => r.method === MC_METHOD).map((r) => r.trials));
  if (trials.size === 1) {
    const [t] = trials;
    if (t !== undefined && t > 0) parts.push(`${t} trials/point`);
  }
  return parts.length > 0 ? parts.join("  ·  ") : undefined;
}

export function renderFromCsv(csvText: string, kind: FigureKind): string {
  const rows = parseResultCsv(csvText);
  const series = buildSeries(rows, kind);
  return renderChart({
    title: AXIS[kind].title,
    subtitle: subtitleFor(rows.filter((r) => r.target === "SUM"), kind),
    xLabel: AXIS[kind].xLabel,
    yLabel: Y_LABEL,
    series,
  });
}
