#!/usr/bin/env node
/** plot --kind <k> --in <csv> [--in2 <csv>] --out <img> [--fit-min v] [--fit-max v]
 *
 * Renders one figure from the simulator's CSV outputs and prints the fit
 * summary. Exit codes: 0 ok, 2 schema/empty-input errors, 1 unexpected.
 */

import { readFileSync, writeFileSync } from "node:fs";
import { EmptyInput, SchemaMismatch } from "./csv.js";
import { FigureKind, render } from "./figures.js";

const KINDS: FigureKind[] = [
  "drift_slope",
  "bilinear_overlay",
  "growth_envelope",
  "order_check",
];

function parseArgs(argv: string[]): Map<string, string> {
  const out = new Map<string, string>();
  for (let i = 0; i < argv.length; i += 2) {
    const key = argv[i];
    if (!key.startsWith("--") || i + 1 >= argv.length) {
      throw new Error(`malformed arguments near ${key}`);
    }
    out.set(key.slice(2), argv[i + 1]);
  }
  return out;
}

export function main(argv: string[]): number {
  try {
    const args = parseArgs(argv[0] === "plot" ? argv.slice(1) : argv);
    const kind = args.get("kind") as FigureKind | undefined;
    const input = args.get("in");
    const output = args.get("out");
    if (!kind || !KINDS.includes(kind) || !input || !output) {
      console.error(
        `usage: plot --kind <${KINDS.join("|")}> --in <csv> [--in2 <csv>] --out <img>`,
      );
      return 2;
    }
    let fitRange: [number, number] | undefined;
    if (args.has("fit-min") || args.has("fit-max")) {
      fitRange = [
        Number(args.get("fit-min") ?? "-Infinity"),
        Number(args.get("fit-max") ?? "Infinity"),
      ];
    }
    const req = {
      kind,
      csvText: readFileSync(input, "ascii"),
      csvText2: args.has("in2") ? readFileSync(args.get("in2")!, "ascii") : undefined,
      fitRange,
    };
    const result = render(req);
    writeFileSync(output, result.svg, "ascii");
    for (const line of result.summary) {
      console.log(line);
    }
    return 0;
  } catch (err) {
    if (err instanceof SchemaMismatch || err instanceof EmptyInput) {
      console.error(`input error: ${(err as Error).message}`);
      return 2;
    }
    console.error(`error: ${(err as Error).message}`);
    return 1;
  }
}

if (process.argv[1] && process.argv[1].endsWith("cli.js")) {
  process.exit(main(process.argv.slice(2)));
}
