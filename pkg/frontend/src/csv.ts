import Papa from "papaparse";

/** Column order of the experiment-runner CSV. Extra columns are tolerated. */
export const CSV_COLUMNS = [
  "scenario",
  "receiver",
  "method",
  "M",
  "K",
  "pu_db",
  "bits_spec",
  "drop_seed",
  "trials",
  "target",
  "value",
  "stderr",
] as const;

export const MC_METHOD = "monte_carlo";
export const DETEQ_METHOD = "detequiv";

/** One CSV row. `stderr` is null for closed-form rows (empty field). */
export interface ResultRow {
  scenario: string;
  receiver: string;
  method: string;
  M: number;
  K: number;
  puDb: number;
  bitsSpec: string;
  dropSeed: string;
  trials: number;
  target: string;
  value: number;
  stderr: number | null;
}

function num(raw: string | undefined, col: string, line: number): number {
  const v = Number(raw);
  if (raw === undefined || raw.trim() === "" || !Number.isFinite(v)) {
    throw new Error(`row ${line}: column ${col} is not a finite number (got ${JSON.stringify(raw ?? "")})`);
  }
  return v;
}

export function parseResultCsv(text: string): ResultRow[] {
  const parsed = Papa.parse<Record<string, string>>(text, {
    header: true,
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    const e = parsed.errors[0]!;
    throw new Error(`CSV parse failed at row ${e.row ?? "?"}: ${e.message}`);
  }

  const fields = parsed.meta.fields ?? [];
  const missing = CSV_COLUMNS.filter((c) => !fields.includes(c));
  if (missing.length > 0) {
    throw new Error(`missing column(s): ${missing.join(", ")}`);
  }

  return parsed.data.map((r, i) => {
    const line = i + 2; // 1-based, after the header
    const stderrRaw = (r.stderr ?? "").trim();
    return {
      scenario: r.scenario ?? "",
      receiver: r.receiver ?? "",
      method: r.method ?? "",
      M: num(r.M, "M", line),
      K: num(r.K, "K", line),
      puDb: num(r.pu_db, "pu_db", line),
      bitsSpec: r.bits_spec ?? "",
      dropSeed: r.drop_seed ?? "",
      trials: num(r.trials, "trials", line),
      target: r.target ?? "",
      value: num(r.value, "value", line),
      stderr: stderrRaw === "" ? null : num(stderrRaw, "stderr", line),
    };
  });
}
