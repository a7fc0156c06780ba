import { describe, expect, it } from 'vitest'
import { mkdtempSync, writeFileSync, readFileSync } from 'node:fs'
import { tmpdir } from 'node:os'
import { join } from 'node:path'
import { parseSpec, SpecError } from '../src/spec.js'
import { readTable, column, CsvError } from '../src/csv.js'
import { render, convergence, profiles, surface } from '../src/figures.js'

const DATA = join(__dirname, '..', 'testdata')
const ERRORS = join(DATA, 'plane_source_errors.csv')
const PROFILES = [1, 2, 3].map((n) => join(DATA, `plane_source_kershaw${n}_profile.csv`))
const SURFACE = join(DATA, 'surface_kershaw2.csv')

function specFile(contents: string): string {
  const dir = mkdtempSync(join(tmpdir(), 'plots-'))
  const path = join(dir, 'fig.txt')
  writeFileSync(path, contents)
  return path
}

describe('spec parsing', () => {
  it('parses a full spec with comments', () => {
    const spec = parseSpec(specFile(
      `# convergence figure\nkind = convergence\ninput = ${ERRORS}\noutput = out.svg\ntitle = Plane source\n`))
    expect(spec.kind).toBe('convergence')
    expect(spec.inputs).toEqual([ERRORS])
    expect(spec.title).toBe('Plane source')
  })

  it('splits comma-separated profile inputs', () => {
    const spec = parseSpec(specFile(
      `kind = profiles\ninput = ${PROFILES.join(', ')}\noutput = out.svg\n`))
    expect(spec.inputs).toEqual(PROFILES)
  })

  it('rejects unknown keys with a line number', () => {
    expect(() => parseSpec(specFile('kind = surface\nbogus = 1\n')))
      .toThrow(/:2: unknown key 'bogus'/)
  })

  it('rejects a missing kind and multi-input convergence', () => {
    expect(() => parseSpec(specFile(`input = ${ERRORS}\noutput = o.svg\n`))).toThrow(SpecError)
    expect(() => parseSpec(specFile(
      `kind = convergence\ninput = a.csv, b.csv\noutput = o.svg\n`))).toThrow(/exactly one input/)
  })
})

describe('csv reading', () => {
  it('parses header config and columns', () => {
    const table = readTable(PROFILES[0])
    expect(table.config.get('scenario')).toBe('plane_source')
    expect(table.config.get('order')).toBe('1')
    expect(table.columns).toEqual(['time', 'z', 'u_0', 'u_1'])
    expect(table.rows.length).toBe(600)
  })

  it('reports missing files and missing columns with the path', () => {
    expect(() => readTable(join(DATA, 'nope.csv'))).toThrow(/nope\.csv: cannot read/)
    expect(() => column(readTable(ERRORS), 'zzz')).toThrow(CsvError)
  })

  it('flags empty cells as masked NaN', () => {
    const table = readTable(SURFACE)
    const j = table.columns.indexOf('phi_3')
    const anyMasked = table.masked.some((m) => m[j])
    expect(anyMasked).toBe(true)
    for (let i = 0; i < table.rows.length; i++) {
      expect(Number.isNaN(table.rows[i][j])).toBe(table.masked[i][j])
    }
  })
})

describe('figures', () => {
  it('renders a convergence figure with a log error axis', () => {
    const svg = convergence(readTable(ERRORS), {
      kind: 'convergence', inputs: [ERRORS], output: 'o.svg', title: 'Plane source',
    })
    expect(svg).toContain('<svg')
    expect(svg).toContain('Plane source')
    // three orders, two norms -> six markers plus two legend dots
    expect((svg.match(/<circle/g) ?? []).length).toBe(8)
    // log ticks cover the error decade
    expect(svg).toMatch(/>0\.1</)
  })

  it('renders profile overlays restricted to z >= 0 for the plane source', () => {
    const svg = profiles(PROFILES.map(readTable), {
      kind: 'profiles', inputs: PROFILES, output: 'o.svg',
    })
    expect((svg.match(/<polyline/g) ?? []).length).toBe(3)
    expect(svg).toContain('kershaw1')
    expect(svg).toContain('kershaw3')
    // the z axis starts at 0: no negative x tick labels
    expect(svg).not.toMatch(/>-\d[^<]*<\/text>/)
  })

  it('renders the surface heatmap and masks exactly the non-realizable cells', () => {
    const table = readTable(SURFACE)
    const svg = surface(table, { kind: 'surface', inputs: [SURFACE], output: 'o.svg' })
    const p1 = column(table, 'phi_1')
    const p2 = column(table, 'phi_2')
    let realizable = 0
    for (let i = 0; i < p1.length; i++) {
      const inside = p2[i] >= p1[i] * p1[i] && p2[i] <= 1
      // the writer leaves the value empty exactly outside the realizable triangle
      expect(table.masked[i][2]).toBe(!inside)
      if (inside) realizable++
    }
    const cells = (svg.match(/<rect/g) ?? []).length - 42 // background + frame + 40 colorbar strips
    expect(cells).toBe(realizable)
  })

  it('is deterministic byte-for-byte', () => {
    const spec = { kind: 'surface' as const, inputs: [SURFACE], output: 'o.svg' }
    expect(render(spec)).toBe(render(spec))
  })

  it('writes the SVG through the CLI entry point', async () => {
    const { main } = await import('../src/cli.js')
    const dir = mkdtempSync(join(tmpdir(), 'plots-'))
    const out = join(dir, 'fig.svg')
    const path = specFile(`kind = convergence\ninput = ${ERRORS}\noutput = ${out}\n`)
    expect(main([path])).toBe(0)
    expect(readFileSync(out, 'utf8')).toContain('</svg>')
    expect(main(['/does/not/exist.txt'])).toBe(2)
    expect(main([])).toBe(2)
  })

  it('rejects a CSV of the wrong kind with its path', () => {
    expect(() => convergence(readTable(PROFILES[0]), {
      kind: 'convergence', inputs: PROFILES, output: 'o.svg',
    })).toThrow(/not an errors table/)
    expect(() => profiles([readTable(ERRORS)], {
      kind: 'profiles', inputs: [ERRORS], output: 'o.svg',
    })).toThrow(/not a profile table/)
  })
})
