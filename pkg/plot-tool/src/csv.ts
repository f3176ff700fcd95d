/** Reading of the schema-versioned CSV files the solver CLI emits. */

export interface CsvTable {
  schema: string;
  columns: string[];
  rows: string[][];
}

export class SchemaError extends Error {}

/** Parse a CSV with a `# schema=<name> v<N>` first line. */
export function parseCsv(text: string): CsvTable {
  const lines = text.split(/\r?\n/).filter((l) => l.length > 0);
  if (lines.length < 2 || !lines[0].startsWith("# schema=")) {
    throw new SchemaError("missing '# schema=' header line");
  }
  const schema = lines[0].slice("# schema=".length).split(" ")[0];
  let i = 1;
  while (i < lines.length && lines[i].startsWith("#")) i++; // metadata comments
  const columns = lines[i].split(",");
  const rows = lines.slice(i + 1).map((l) => l.split(","));
  return { schema, columns, rows };
}

/** Assert the table matches what the plot expects; report the diff. */
export function requireColumns(table: CsvTable, expected: string[]): void {
  const missing = expected.filter((c) => !table.columns.includes(c));
  if (missing.length > 0) {
    throw new SchemaError(
      `schema '${table.schema}' column mismatch: expected [${expected.join(", ")}], ` +
        `found [${table.columns.join(", ")}]; missing [${missing.join(", ")}]`,
    );
  }
}

/** Numeric values of one column, in file order. Blank cells become NaN. */
export function numericColumn(table: CsvTable, name: string): number[] {
  const idx = table.columns.indexOf(name);
  if (idx < 0) {
    throw new SchemaError(
      `no column '${name}' in schema '${table.schema}' ` +
        `(have [${table.columns.join(", ")}])`,
    );
  }
  return table.rows.map((r) => (r[idx] === "" || r[idx] === undefined ? NaN : Number(r[idx])));
}

/** Distinct values of a column, preserving first-occurrence order. */
export function distinctValues(table: CsvTable, name: string): string[] {
  const idx = table.columns.indexOf(name);
  if (idx < 0) throw new SchemaError(`no column '${name}'`);
  const seen = new Set<string>();
  const out: string[] = [];
  for (const r of table.rows) {
    if (!seen.has(r[idx])) {
      seen.add(r[idx]);
      out.push(r[idx]);
    }
  }
  return out;
}
