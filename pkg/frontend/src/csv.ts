/** Strict CSV reading for the simulator's documented schemas. */

export class SchemaMismatch extends Error {}
export class EmptyInput extends Error {}

export interface Table {
  header: string[];
  rows: string[][];
}

export function parseCsv(text: string, expectedHeader: string[]): Table {
  const lines = text.split("\n").filter((l) => l.length > 0);
  if (lines.length === 0) {
    throw new EmptyInput("no header row");
  }
  const header = lines[0].split(",");
  if (
    header.length !== expectedHeader.length ||
    header.some((h, i) => h !== expectedHeader[i])
  ) {
    throw new SchemaMismatch(
      `expected header ${expectedHeader.join(",")}, got ${lines[0]}`,
    );
  }
  const rows = lines.slice(1).map((l) => l.split(","));
  if (rows.length === 0) {
    throw new EmptyInput("no data rows");
  }
  for (const r of rows) {
    if (r.length !== header.length) {
      throw new SchemaMismatch(`row has ${r.length} fields, expected ${header.length}`);
    }
  }
  return { header, rows };
}

export function numericColumn(t: Table, name: string): number[] {
  const idx = t.header.indexOf(name);
  if (idx < 0) {
    throw new SchemaMismatch(`missing column ${name}`);
  }
  return t.rows.map((r) => {
    const v = Number(r[idx]);
    if (!Number.isFinite(v)) {
      throw new SchemaMismatch(`non-numeric value ${r[idx]} in column ${name}`);
    }
    return v;
  });
}
