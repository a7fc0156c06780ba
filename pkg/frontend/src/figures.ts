import { readTable, column, CsvError, type CsvTable } from './csv.js'
import { Svg, linearScale, logScale, formatTick, MARGIN, PALETTE } from './svg.js'
import type { FigureSpec } from './spec.js'

const WIDTH = 640
const HEIGHT = 440

export function render(spec: FigureSpec): string {
  switch (spec.kind) {
    case 'convergence':
      return convergence(readTable(spec.inputs[0]), spec)
    case 'profiles':
      return profiles(spec.inputs.map(readTable), spec)
    case 'surface':
      return surface(readTable(spec.inputs[0]), spec)
  }
}

/** L1/L∞ error vs moment order, one curve pair per model, log error axis. */
export function convergence(table: CsvTable, spec: FigureSpec): string {
  for (const name of ['model', 'order', 'l1', 'linf']) {
    if (name !== 'model' && !table.columns.includes(name)) {
      throw new CsvError(`not an errors table: missing column '${name}'`, table.path)
    }
  }
  const orders = column(table, 'order')
  const l1 = column(table, 'l1')
  const linf = column(table, 'linf')

  const errs = l1.concat(linf).filter((v) => v > 0)
  const lo = Math.min(...errs)
  const hi = Math.max(...errs)
  const svg = new Svg(WIDTH, HEIGHT)
  const x = linearScale(Math.min(...orders), Math.max(...orders), MARGIN.left, WIDTH - MARGIN.right)
  const y = logScale(lo / 1.5, hi * 1.5, HEIGHT - MARGIN.bottom, MARGIN.top)
  svg.axes(x, y, {
    title: spec.title,
    xlabel: spec.xlabel ?? 'moment order N',
    ylabel: spec.ylabel ?? 'error',
    xticks: x.ticks().filter((t) => Number.isInteger(t)),
    yticks: y.ticks(),
    yfmt: formatTick,
  })

  const series: Array<[string, number[], boolean]> = [['L1', l1, false], ['Linf', linf, true]]
  series.forEach(([label, values, dashed], s) => {
    const color = PALETTE[s]
    const pts = orders.map((o, i) => [x(o), y(values[i])] as [number, number])
    const path = pts.map(([px, py]) => `${px.toPrecision(6)},${py.toPrecision(6)}`).join(' ')
    svg.raw(`<polyline points="${path}" fill="none" stroke="${color}" stroke-width="1.5"` +
            (dashed ? ' stroke-dasharray="6 3"' : '') + '/>')
    for (const [px, py] of pts) svg.circle(px, py, 3.5, color)
    svg.circle(WIDTH - 150, MARGIN.top + 16 + 18 * s, 3.5, color)
    svg.text(WIDTH - 140, MARGIN.top + 20 + 18 * s, label as string)
  })
  return svg.toString()
}

/** u_0 vs z at the final snapshot time, one curve per input CSV. */
export function profiles(tables: CsvTable[], spec: FigureSpec): string {
  const curves: Array<{ label: string; z: number[]; u0: number[] }> = []
  for (const table of tables) {
    for (const name of ['time', 'z', 'u_0']) {
      if (!table.columns.includes(name)) {
        throw new CsvError(`not a profile table: missing column '${name}'`, table.path)
      }
    }
    const times = column(table, 'time')
    const tf = Math.max(...times)
    const zAll = column(table, 'z')
    const uAll = column(table, 'u_0')
    // plane-source solutions are symmetric in z; show only the right half
    const halfOnly = table.config.get('scenario') === 'plane_source'
    const z: number[] = []
    const u0: number[] = []
    for (let i = 0; i < times.length; i++) {
      if (times[i] !== tf) continue
      if (halfOnly && zAll[i] < 0) continue
      z.push(zAll[i])
      u0.push(uAll[i])
    }
    const label = `${table.config.get('model') ?? 'model'}${table.config.get('order') ?? ''}`
    curves.push({ label, z, u0 })
  }

  const zs = curves.flatMap((c) => c.z)
  const us = curves.flatMap((c) => c.u0)
  const svg = new Svg(WIDTH, HEIGHT)
  const x = linearScale(Math.min(...zs), Math.max(...zs), MARGIN.left, WIDTH - MARGIN.right)
  const uHi = Math.max(...us)
  const y = linearScale(0, uHi * 1.05, HEIGHT - MARGIN.bottom, MARGIN.top)
  svg.axes(x, y, {
    title: spec.title,
    xlabel: spec.xlabel ?? 'z',
    ylabel: spec.ylabel ?? 'u_0',
    xticks: x.ticks(),
    yticks: y.ticks(),
  })
  curves.forEach((c, s) => {
    const color = PALETTE[s % PALETTE.length]
    svg.polyline(c.z.map((zi, i) => [x(zi), y(c.u0[i])]), color)
    svg.line(WIDTH - 160, MARGIN.top + 16 + 18 * s, WIDTH - 140, MARGIN.top + 16 + 18 * s, color, 2)
    svg.text(WIDTH - 134, MARGIN.top + 20 + 18 * s, c.label)
  })
  return svg.toString()
}

/** Closing-moment heatmap over the (phi_1, phi_2) plane; non-realizable cells stay blank. */
export function surface(table: CsvTable, spec: FigureSpec): string {
  for (const name of ['phi_1', 'phi_2']) {
    if (!table.columns.includes(name)) {
      throw new CsvError(`not a surface table: missing column '${name}'`, table.path)
    }
  }
  const p1 = column(table, 'phi_1')
  const p2 = column(table, 'phi_2')
  const valueCol = table.columns[table.columns.length - 1]
  const values = column(table, valueCol)
  const jValue = table.columns.length - 1

  const finite = values.filter(Number.isFinite)
  const lo = Math.min(...finite)
  const hi = Math.max(...finite)
  const svg = new Svg(WIDTH, HEIGHT)
  const x = linearScale(-1, 1, MARGIN.left, WIDTH - MARGIN.right)
  const y = linearScale(0, 1, HEIGHT - MARGIN.bottom, MARGIN.top)
  const n = Math.round(Math.sqrt(values.length))
  const dx = Math.abs(x(p1[n] ?? 1) - x(p1[0]))
  const dy = Math.abs(y(p2[1] ?? 1) - y(p2[0]))
  for (let i = 0; i < values.length; i++) {
    if (table.masked[i][jValue]) continue
    svg.rect(x(p1[i]) - dx / 2, y(p2[i]) - dy / 2, dx, dy, ramp((values[i] - lo) / (hi - lo || 1)))
  }
  svg.axes(x, y, {
    title: spec.title,
    xlabel: spec.xlabel ?? 'phi_1',
    ylabel: spec.ylabel ?? 'phi_2',
    xticks: x.ticks(),
    yticks: y.ticks(),
  })
  // colorbar
  for (let i = 0; i < 40; i++) {
    svg.rect(WIDTH - 14, HEIGHT - MARGIN.bottom - (i + 1) * ((HEIGHT - MARGIN.top - MARGIN.bottom) / 40),
             8, (HEIGHT - MARGIN.top - MARGIN.bottom) / 40 + 0.5, ramp(i / 39))
  }
  svg.text(WIDTH - 18, MARGIN.top - 6, formatTick(hi), 'text-anchor="end" font-size="10"')
  svg.text(WIDTH - 18, HEIGHT - MARGIN.bottom + 12, formatTick(lo), 'text-anchor="end" font-size="10"')
  return svg.toString()
}

/** blue → white → red */
function ramp(t: number): string {
  const u = Math.min(1, Math.max(0, t))
  const lerp = (a: number, b: number, s: number) => Math.round(a + (b - a) * s)
  const [r, g, b] = u < 0.5
    ? [lerp(33, 247, u * 2), lerp(102, 247, u * 2), lerp(172, 247, u * 2)]
    : [lerp(247, 178, u * 2 - 1), lerp(247, 24, u * 2 - 1), lerp(247, 43, u * 2 - 1)]
  return `rgb(${r},${g},${b})`
}
