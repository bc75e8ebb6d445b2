// Strict reader for the simulator's CSV outputs: one header row of column
// names, then numeric rows. The writers never quote or escape, and they
// spell failed sweep points as literal "nan", so anything else non-numeric
// is a schema problem worth failing loudly on.

export interface Table {
  columns: string[];
  rows: number[][];
}

export function parseCsv(text: string): Table {
  const lines = text.split(/\r?\n/).filter((line) => line.length > 0);
  const headerLine = lines[0];
  if (headerLine === undefined) {
    throw new Error("CSV is empty");
  }
  const columns = headerLine.split(",").map((name) => name.trim());
  if (columns.some((name) => name.length === 0)) {
    throw new Error("CSV header has an unnamed column");
  }

  const rows: number[][] = [];
  for (let i = 1; i < lines.length; i += 1) {
    const parts = (lines[i] as string).split(",");
    if (parts.length !== columns.length) {
      throw new Error(
        `CSV row ${i + 1} has ${parts.length} fields, expected ${columns.length}`,
      );
    }
    rows.push(
      parts.map((part, j) => {
        const trimmed = part.trim();
        const value = Number(trimmed);
        if (trimmed === "" || (Number.isNaN(value) && trimmed !== "nan")) {
          throw new Error(
            `CSV row ${i + 1}, column '${columns[j]}' is not numeric: '${part}'`,
          );
        }
        return value;
      }),
    );
  }
  if (rows.length === 0) {
    throw new Error("CSV has a header but no data rows");
  }
  return { columns, rows };
}

// Resolve required column names to indices, naming the offender on failure.
export function requireColumns<const K extends readonly string[]>(
  table: Table,
  kind: string,
  names: K,
): Record<K[number], number> {
  const index: Record<string, number> = {};
  for (const name of names) {
    const at = table.columns.indexOf(name);
    if (at < 0) {
      throw new Error(
        `${kind} input is missing column '${name}' (found: ${table.columns.join(", ")})`,
      );
    }
    index[name] = at;
  }
  return index as Record<K[number], number>;
}
