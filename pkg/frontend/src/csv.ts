import { readFileSync } from 'node:fs'
import Papa from 'papaparse'

export class CsvError extends Error {
  constructor(message: string, readonly path: string, readonly line?: number) {
    super(line === undefined ? `${path}: ${message}` : `${path}:${line}: ${message}`)
  }
}

export interface CsvTable {
  path: string
  /** key=value pairs from the `# config:` header line, if present */
  config: Map<string, string>
  columns: string[]
  /** row-major cells; non-numeric or empty cells are NaN */
  rows: number[][]
  /** true where the raw cell was empty */
  masked: boolean[][]
  /** raw cell text, for non-numeric columns */
  text: string[][]
}

/**
 * Read one of the solver's CSV artifacts: `#`-prefixed header lines
 * (`# config: ...` and `# columns: ...`) followed by plain numeric rows.
 */
export function readTable(path: string): CsvTable {
  let text: string
  try {
    text = readFileSync(path, 'utf8')
  } catch (err) {
    throw new CsvError(`cannot read CSV (${(err as Error).message})`, path)
  }

  const config = new Map<string, string>()
  let columns: string[] | null = null
  const lines = text.split('\n')
  let body = 0
  for (; body < lines.length; body++) {
    const line = lines[body]
    if (!line.startsWith('#')) break
    const content = line.slice(1).trim()
    if (content.startsWith('config:')) {
      for (const pair of content.slice('config:'.length).trim().split(/\s+/)) {
        const eq = pair.indexOf('=')
        if (eq > 0) config.set(pair.slice(0, eq), pair.slice(eq + 1))
      }
    } else if (content.startsWith('columns:')) {
      columns = content.slice('columns:'.length).trim().split(',')
    }
  }
  if (!columns) throw new CsvError(`missing '# columns:' header`, path, 1)

  const parsed = Papa.parse<string[]>(lines.slice(body).join('\n').trim(), {
    delimiter: ',',
    skipEmptyLines: true,
  })
  if (parsed.errors.length > 0) {
    const e = parsed.errors[0]
    throw new CsvError(e.message, path, body + 1 + (e.row ?? 0))
  }

  const rows: number[][] = []
  const masked: boolean[][] = []
  const textRows: string[][] = []
  for (let i = 0; i < parsed.data.length; i++) {
    const raw = parsed.data[i]
    if (raw.length !== columns.length) {
      throw new CsvError(
        `expected ${columns.length} fields, got ${raw.length}`, path, body + 1 + i)
    }
    const cells = raw.map((c) => c.trim())
    rows.push(cells.map((c) => (c === '' ? NaN : Number(c))))
    masked.push(cells.map((c) => c === ''))
    textRows.push(cells)
  }
  if (rows.length === 0) throw new CsvError('no data rows', path)
  return { path, config, columns, rows, masked, text: textRows }
}

/** Numeric column accessor; rejects non-numeric (but not empty) cells. */
export function column(table: CsvTable, name: string): number[] {
  const j = table.columns.indexOf(name)
  if (j < 0) throw new CsvError(`missing column '${name}'`, table.path)
  return table.rows.map((r, i) => {
    if (Number.isNaN(r[j]) && !table.masked[i][j]) {
      throw new CsvError(`field '${name}' is not a number: '${table.text[i][j]}'`, table.path)
    }
    return r[j]
  })
}
