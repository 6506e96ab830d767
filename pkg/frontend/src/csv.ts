/** Minimal reader for the simulator's numeric CSV datasets. */

export interface Dataset {
  columns: string[];
  /** rows[i][j] is the value of columns[j] in row i */
  rows: number[][];
}

export function parseCsv(text: string): Dataset {
  const lines = text.split("\n").filter((line) => line.length > 0);
  if (lines.length === 0) {
    throw new Error("empty CSV: no header row");
  }
  const columns = lines[0].split(",");
  const rows: number[][] = [];
  for (let i = 1; i < lines.length; i++) {
    const cells = lines[i].split(",");
    if (cells.length !== columns.length) {
      throw new Error(
        `CSV row ${i + 1} has ${cells.length} cells, expected ${columns.length}`,
      );
    }
    const row = cells.map(Number);
    const bad = row.findIndex((v) => !Number.isFinite(v));
    if (bad >= 0) {
      throw new Error(
        `CSV row ${i + 1}, column ${columns[bad]}: not a finite number`,
      );
    }
    rows.push(row);
  }
  if (rows.length === 0) {
    throw new Error("empty CSV: header but no data rows");
  }
  return { columns, rows };
}

export function column(data: Dataset, name: string): number[] {
  const idx = data.columns.indexOf(name);
  if (idx < 0) {
    throw new Error(`dataset has no column ${JSON.stringify(name)}`);
  }
  return data.rows.map((row) => row[idx]);
}
