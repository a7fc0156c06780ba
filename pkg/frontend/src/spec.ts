import { readFileSync } from 'node:fs'

export type FigureKind = 'convergence' | 'profiles' | 'surface'

export interface FigureSpec {
  kind: FigureKind
  inputs: string[]
  output: string
  title?: string
  xlabel?: string
  ylabel?: string
}

export class SpecError extends Error {
  constructor(message: string, readonly path: string, readonly line?: number) {
    super(line === undefined ? `${path}: ${message}` : `${path}:${line}: ${message}`)
  }
}

const KNOWN_KEYS = new Set(['kind', 'input', 'output', 'title', 'xlabel', 'ylabel'])
const KINDS = new Set<string>(['convergence', 'profiles', 'surface'])

/** Parse a `key = value` figure-spec file. `#` starts a comment. */
export function parseSpec(path: string): FigureSpec {
  let text: string
  try {
    text = readFileSync(path, 'utf8')
  } catch (err) {
    throw new SpecError(`cannot read spec file (${(err as Error).message})`, path)
  }

  const values = new Map<string, string>()
  const lines = text.split('\n')
  for (let i = 0; i < lines.length; i++) {
    const stripped = lines[i].replace(/#.*/, '').trim()
    if (!stripped) continue
    const eq = stripped.indexOf('=')
    if (eq < 0) throw new SpecError(`expected 'key = value', got '${stripped}'`, path, i + 1)
    const key = stripped.slice(0, eq).trim()
    const value = stripped.slice(eq + 1).trim()
    if (!KNOWN_KEYS.has(key)) throw new SpecError(`unknown key '${key}'`, path, i + 1)
    if (values.has(key)) throw new SpecError(`duplicate key '${key}'`, path, i + 1)
    values.set(key, value)
  }

  const kind = values.get('kind')
  if (!kind || !KINDS.has(kind)) {
    throw new SpecError(`'kind' must be one of convergence|profiles|surface, got '${kind ?? ''}'`, path)
  }
  const input = values.get('input')
  if (!input) throw new SpecError(`missing required key 'input'`, path)
  const output = values.get('output')
  if (!output) throw new SpecError(`missing required key 'output'`, path)

  const inputs = input.split(',').map((s) => s.trim()).filter((s) => s.length > 0)
  if (kind !== 'profiles' && inputs.length !== 1) {
    throw new SpecError(`kind '${kind}' takes exactly one input CSV, got ${inputs.length}`, path)
  }

  return {
    kind: kind as FigureKind,
    inputs,
    output,
    title: values.get('title'),
    xlabel: values.get('xlabel'),
    ylabel: values.get('ylabel'),
  }
}
