import { pathToFileURL } from "node:url";
import { SchemaError } from "./csv.js";
import { FIGURE_IDS, type FigureId, type FigureSpec } from "./figures.js";
import { renderFigure } from "./render.js";

const USAGE = `usage: cogrelay-plots --figure {${FIGURE_IDS.join(",")}} --in <csv> --out <svg>

Renders one sweep CSV as an SVG chart: analytic values as lines, simulated
values as markers, one series per delay cap plus the uncapped baseline when
the CSV carries one. Exit codes: 0 ok, 1 usage, 2 bad input file.`;

export class UsageError extends Error {}

export function parseArgs(argv: string[]): FigureSpec {
  let figure: string | undefined;
  let input: string | undefined;
  let output: string | undefined;
  for (let i = 0; i < argv.length; i++) {
    const flag = argv[i]!;
    const value = argv[i + 1];
    if (flag === "--figure" || flag === "--in" || flag === "--out") {
      if (value === undefined) throw new UsageError(`${flag} needs a value`);
      if (flag === "--figure") figure = value;
      else if (flag === "--in") input = value;
      else output = value;
      i++;
    } else {
      throw new UsageError(`unknown argument ${flag}`);
    }
  }
  if (figure === undefined || input === undefined || output === undefined) {
    throw new UsageError("--figure, --in and --out are all required");
  }
  if (!(FIGURE_IDS as readonly string[]).includes(figure)) {
    throw new UsageError(`unknown figure ${figure}, expected one of ${FIGURE_IDS.join(", ")}`);
  }
  return { figure: figure as FigureId, input, output };
}

export function main(argv: string[]): number {
  let spec: FigureSpec;
  try {
    spec = parseArgs(argv);
  } catch (e) {
    if (e instanceof UsageError) {
      console.error(`error: ${e.message}\n\n${USAGE}`);
      return 1;
    }
    throw e;
  }
  try {
    const out = renderFigure(spec);
    console.log(`wrote ${out}`);
    return 0;
  } catch (e) {
    if (e instanceof SchemaError) {
      console.error(`error: schema mismatch in column "${e.column}": ${e.message}`);
      return 2;
    }
    if (e instanceof Error && "code" in e) {
      // filesystem problems (missing input, unwritable output)
      console.error(`error: ${e.message}`);
      return 2;
    }
    throw e;
  }
}

const invokedDirectly =
  process.argv[1] !== undefined && import.meta.url === pathToFileURL(process.argv[1]).href;
if (invokedDirectly) process.exit(main(process.argv.slice(2)));
