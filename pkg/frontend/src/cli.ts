#!/usr/bin/env node
import { readFile, writeFile } from "node:fs/promises";
import { pathToFileURL } from "node:url";
import { parseArgs } from "node:util";

import { FIGURE_KINDS, type FigureKind } from "./series.js";
import { renderFromCsv } from "./render.js";

const USAGE = "usage: quplink-plot render --csv <path> --kind <se_vs_pu|se_vs_M> --out <path>";

export async function runCli(argv: string[], stderr: (line: string) => void = console.error): Promise<number> {
  try {
    const [command, ...rest] = argv;
    if (command !== "render") {
      throw new Error(command === undefined ? USAGE : `unknown command ${JSON.stringify(command)}; ${USAGE}`);
    }
    const { values, positionals } = parseArgs({
      args: rest,
      options: {
        csv: { type: "string" },
        kind: { type: "string" },
        out: { type: "string" },
      },
      allowPositionals: false,
    });
    if (positionals.length > 0) throw new Error(USAGE);
    const { csv, kind, out } = values;
    if (!csv || !kind || !out) throw new Error(USAGE);
    if (!(FIGURE_KINDS as readonly string[]).includes(kind)) {
      throw new Error(`unknown kind ${JSON.stringify(kind)}; expected one of ${FIGURE_KINDS.join(", ")}`);
    }

    const text = await readFile(csv, "utf-8");
    const svg = renderFromCsv(text, kind as FigureKind);
    await writeFile(out, svg, "utf-8");
    return 0;
  } catch (err) {
    stderr(`error: ${err instanceof Error ? err.message : String(err)}`);
    return 1;
  }
}

const invokedPath = process.argv[1];
if (invokedPath && import.meta.url === pathToFileURL(invokedPath).href) {
  process.exitCode = await runCli(process.argv.slice(2));
}
