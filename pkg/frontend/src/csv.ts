import Papa from "papaparse";

// Column contract shared with the sweep CSVs. Order matters: the header is
// validated positionally so a reordered or renamed column fails loudly
// instead of silently shifting data.
export const COLUMNS = [
  "swept",
  "psi",
  "status",
  "a",
  "b",
  "mu_p",
  "objective",
  "d_p_analytic",
  "d_s_analytic",
  "mu_s_analytic",
  "d_p_sim",
  "d_s_sim",
  "thr_sim",
  "seed",
] as const;

export type Column = (typeof COLUMNS)[number];

export interface SweepRow {
  swept: number;
  /** Delay cap in slots; Infinity marks uncapped baseline rows. */
  psi: number;
  status: "feasible" | "infeasible";
  a: number | null;
  b: number | null;
  mu_p: number | null;
  objective: number | null;
  /** May be Infinity: baseline optima pinned at the relay-stability edge. */
  d_p_analytic: number | null;
  d_s_analytic: number | null;
  mu_s_analytic: number | null;
  d_p_sim: number | null;
  d_s_sim: number | null;
  thr_sim: number | null;
  seed: number | null;
}

export class SchemaError extends Error {
  readonly column: string;

  constructor(column: string, message: string) {
    super(message);
    this.name = "SchemaError";
    this.column = column;
  }
}

function checkHeader(fields: readonly string[]): void {
  for (let i = 0; i < COLUMNS.length; i++) {
    const want = COLUMNS[i]!;
    const got = fields[i];
    if (got === undefined) {
      throw new SchemaError(want, `missing column "${want}" (header has ${fields.length} fields, expected ${COLUMNS.length})`);
    }
    if (got !== want) {
      throw new SchemaError(got, `unexpected column "${got}" at position ${i + 1}, expected "${want}"`);
    }
  }
  if (fields.length > COLUMNS.length) {
    const extra = fields[COLUMNS.length]!;
    throw new SchemaError(extra, `unexpected extra column "${extra}"`);
  }
}

// Empty cell -> null, "inf"/"-inf" -> signed Infinity, anything non-numeric
// is a schema error naming the column.
function numCell(rowNo: number, col: Column, raw: string): number | null {
  if (raw === "") return null;
  if (raw === "inf") return Infinity;
  if (raw === "-inf") return -Infinity;
  const v = Number(raw);
  if (!Number.isFinite(v)) {
    throw new SchemaError(col, `row ${rowNo}: cannot parse "${raw}" as a number in column "${col}"`);
  }
  return v;
}

function required(rowNo: number, col: Column, v: number | null): number {
  if (v === null) throw new SchemaError(col, `row ${rowNo}: column "${col}" must not be empty`);
  return v;
}

/** Parse one sweep CSV, enforcing the column contract. */
export function parseSweepCsv(text: string): SweepRow[] {
  const parsed = Papa.parse<string[]>(text.trim(), { skipEmptyLines: true });
  if (parsed.errors.length > 0) {
    const e = parsed.errors[0]!;
    throw new SchemaError(COLUMNS[0], `CSV parse error at row ${e.row ?? "?"}: ${e.message}`);
  }
  const data = parsed.data;
  if (data.length === 0) throw new SchemaError(COLUMNS[0], "empty file, expected a header row");
  checkHeader(data[0]!);

  const rows: SweepRow[] = [];
  for (let i = 1; i < data.length; i++) {
    const cells = data[i]!;
    const rowNo = i + 1;
    if (cells.length !== COLUMNS.length) {
      const col = COLUMNS[Math.min(cells.length, COLUMNS.length - 1)]!;
      throw new SchemaError(col, `row ${rowNo} has ${cells.length} fields, expected ${COLUMNS.length}`);
    }
    const cell = (col: Column) => cells[COLUMNS.indexOf(col)]!;

    const swept = required(rowNo, "swept", numCell(rowNo, "swept", cell("swept")));
    if (!Number.isFinite(swept)) {
      throw new SchemaError("swept", `row ${rowNo}: column "swept" must be finite, got "${cell("swept")}"`);
    }
    const psi = required(rowNo, "psi", numCell(rowNo, "psi", cell("psi")));
    if (!(psi > 0)) {
      throw new SchemaError("psi", `row ${rowNo}: column "psi" must be positive, got "${cell("psi")}"`);
    }
    const status = cell("status");
    if (status !== "feasible" && status !== "infeasible") {
      throw new SchemaError("status", `row ${rowNo}: column "status" must be feasible or infeasible, got "${status}"`);
    }

    rows.push({
      swept,
      psi,
      status,
      a: numCell(rowNo, "a", cell("a")),
      b: numCell(rowNo, "b", cell("b")),
      mu_p: numCell(rowNo, "mu_p", cell("mu_p")),
      objective: numCell(rowNo, "objective", cell("objective")),
      d_p_analytic: numCell(rowNo, "d_p_analytic", cell("d_p_analytic")),
      d_s_analytic: numCell(rowNo, "d_s_analytic", cell("d_s_analytic")),
      mu_s_analytic: numCell(rowNo, "mu_s_analytic", cell("mu_s_analytic")),
      d_p_sim: numCell(rowNo, "d_p_sim", cell("d_p_sim")),
      d_s_sim: numCell(rowNo, "d_s_sim", cell("d_s_sim")),
      thr_sim: numCell(rowNo, "thr_sim", cell("thr_sim")),
      seed: numCell(rowNo, "seed", cell("seed")),
    });
  }
  return rows;
}
