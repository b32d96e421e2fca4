/**
 * Minimal CSV reader for the simulator's result tables.
 *
 * The simulator writes plain comma-separated UTF-8 with a header row and
 * no quoting (all fields are numbers or bare identifiers), so a split on
 * "," is exact. Header validation is strict: a renamed or missing column
 * means the file is not the table we were asked to plot, and silently
 * picking a different column would draw a wrong-but-plausible figure.
 */

export type Row = Record<string, string>;

/** Parse one table, insisting on the exact expected column set. */
export function parseTable(text: string, name: string, expected: string[]): Row[] {
  const lines = text.split(/\r?\n/).filter((l) => l.length > 0);
  if (lines.length === 0) {
    throw new Error(`${name}: empty CSV`);
  }
  const header = lines[0].split(",");
  for (const col of expected) {
    if (!header.includes(col)) {
      throw new Error(`${name}: missing column "${col}"`);
    }
  }
  for (const col of header) {
    if (!expected.includes(col)) {
      throw new Error(`${name}: unexpected column "${col}"`);
    }
  }
  if (lines.length === 1) {
    throw new Error(`${name}: header only, no data rows`);
  }

  const rows: Row[] = [];
  for (let i = 1; i < lines.length; i++) {
    const cells = lines[i].split(",");
    if (cells.length !== header.length) {
      throw new Error(`${name}: row ${i + 1} has ${cells.length} fields, expected ${header.length}`);
    }
    const row: Row = {};
    header.forEach((col, k) => (row[col] = cells[k]));
    rows.push(row);
  }
  return rows;
}

/** Parse a numeric cell, refusing NaN/empty so bad data fails loudly. */
export function num(row: Row, col: string, name: string): number {
  const v = Number(row[col]);
  if (!Number.isFinite(v)) {
    throw new Error(`${name}: non-numeric value "${row[col]}" in column "${col}"`);
  }
  return v;
}
