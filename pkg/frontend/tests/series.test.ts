import { describe, expect, it } from "vitest";

import { CSV_COLUMNS, parseResultCsv } from "../src/csv.js";
import { bitsLabel, buildSeries } from "../src/series.js";

function csv(rows: string[]): string {
  return [CSV_COLUMNS.join(","), ...rows].join("\n");
}

// two receivers x two methods at two power points, plus per-user rows that must be ignored
const FIG1_LIKE = csv([
  "fig1,proposed,monte_carlo,60,8,10,u1,21,16,SUM,12.0,0.05",
  "fig1,proposed,monte_carlo,60,8,10,u1,21,16,0,1.5,0.02",
  "fig1,proposed,monte_carlo,60,8,0,u1,21,16,SUM,4.0,0.03",
  "fig1,proposed,detequiv,60,8,0,u1,21,0,SUM,3.9,",
  "fig1,proposed,detequiv,60,8,10,u1,21,0,SUM,11.9,",
  "fig1,awgn_only,monte_carlo,60,8,0,u1,21,16,SUM,3.8,0.03",
  "fig1,awgn_only,monte_carlo,60,8,10,u1,21,16,SUM,10.5,0.05",
]);

describe("buildSeries, se_vs_pu", () => {
  it("groups by receiver and method and sorts points by power", () => {
    const series = buildSeries(parseResultCsv(FIG1_LIKE), "se_vs_pu");
    expect(series).toHaveLength(3);
    const methods = series.map((s) => `${s.receiver}/${s.method}`);
    expect(methods).toEqual(["awgn_only/monte_carlo", "proposed/detequiv", "proposed/monte_carlo"]);
    for (const s of series) {
      expect(s.points.map((p) => p.x)).toEqual([0, 10]);
    }
    const mc = series.find((s) => s.receiver === "proposed" && s.method === "monte_carlo")!;
    expect(mc.points[1]).toEqual({ x: 10, y: 12.0, stderr: 0.05 });
  });

  it("pairs the simulated and closed-form series of one configuration", () => {
    const series = buildSeries(parseResultCsv(FIG1_LIKE), "se_vs_pu");
    const proposed = series.filter((s) => s.receiver === "proposed");
    expect(proposed).toHaveLength(2);
    expect(proposed[0]!.colorKey).toBe(proposed[1]!.colorKey);
    expect(series[0]!.colorKey).not.toBe(proposed[0]!.colorKey);
  });

  it("splits different antenna counts into different series", () => {
    const text = csv([
      "fig1,proposed,monte_carlo,60,8,10,u1,21,16,SUM,12.0,0.05",
      "fig1,proposed,monte_carlo,120,8,10,u1,21,16,SUM,20.0,0.05",
    ]);
    const series = buildSeries(parseResultCsv(text), "se_vs_pu");
    expect(series.map((s) => s.label)).toEqual([
      "quant-aware MMSE, M=60 (sim)",
      "quant-aware MMSE, M=120 (sim)",
    ]);
  });

  it("mentions the bits spec only once it varies", () => {
    const text = csv([
      "custom,proposed,monte_carlo,60,8,10,u1,21,16,SUM,12.0,0.05",
      "custom,proposed,monte_carlo,60,8,10,u2,21,16,SUM,14.0,0.05",
    ]);
    const series = buildSeries(parseResultCsv(text), "se_vs_pu");
    expect(series.map((s) => s.label)).toEqual([
      "quant-aware MMSE, M=60, 1-bit (sim)",
      "quant-aware MMSE, M=60, 2-bit (sim)",
    ]);
  });
});

describe("buildSeries, se_vs_M", () => {
  it("keeps a scaled-power sweep as one series even though power varies", () => {
    const text = csv([
      "fig2-scaled-pu,proposed,monte_carlo,64,8,11.9,u2,21,8,SUM,14.0,0.05",
      "fig2-scaled-pu,proposed,monte_carlo,128,8,8.9,u2,21,8,SUM,14.5,0.05",
      "fig2-scaled-pu,proposed,monte_carlo,256,8,5.9,u2,21,8,SUM,14.8,0.05",
      "fig2-fixed-pu,proposed,monte_carlo,64,8,10,u2,21,8,SUM,15.0,0.05",
      "fig2-fixed-pu,proposed,monte_carlo,128,8,10,u2,21,8,SUM,17.0,0.05",
    ]);
    const series = buildSeries(parseResultCsv(text), "se_vs_M");
    expect(series).toHaveLength(2);
    expect(series.map((s) => s.label)).toEqual([
      "2-bit, fixed power (sim)",
      "2-bit, scaled power (sim)",
    ]);
    expect(series[1]!.points.map((p) => p.x)).toEqual([64, 128, 256]);
  });

  it("separates bits specs", () => {
    const text = csv([
      "fig2-fixed-pu,proposed,detequiv,64,8,10,u2,21,0,SUM,15.0,",
      "fig2-fixed-pu,proposed,detequiv,64,8,10,uINF,21,0,SUM,16.0,",
    ]);
    const series = buildSeries(parseResultCsv(text), "se_vs_M");
    expect(series.map((s) => s.label)).toEqual([
      "2-bit, fixed power (closed form)",
      "ideal ADC, fixed power (closed form)",
    ]);
  });

  it("rejects a CSV with no sum rows", () => {
    const text = csv(["fig1,proposed,monte_carlo,60,8,10,u1,21,16,0,1.5,0.02"]);
    expect(() => buildSeries(parseResultCsv(text), "se_vs_M")).toThrow(/empty selection/);
  });
});

describe("bitsLabel", () => {
  it("spells out the common specs", () => {
    expect(bitsLabel("u1")).toBe("1-bit");
    expect(bitsLabel("u12")).toBe("12-bit");
    expect(bitsLabel("uINF")).toBe("ideal ADC");
    expect(bitsLabel("r1-3")).toBe("random 1-3 bit");
    expect(bitsLabel("x1.2.3")).toBe("x1.2.3");
  });
});
