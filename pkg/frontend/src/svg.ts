export interface Scale {
  (v: number): number
  ticks(): number[]
}

const fmt = (v: number) => {
  const s = v.toPrecision(6)
  return s.includes('.') || s.includes('e') ? s.replace(/\.?0+($|e)/, '$1') : s
}

export function linearScale(d0: number, d1: number, r0: number, r1: number): Scale {
  const span = d1 - d0 || 1
  const scale = ((v: number) => r0 + ((v - d0) / span) * (r1 - r0)) as Scale
  scale.ticks = () => {
    const step = niceStep(span / 6)
    const ticks: number[] = []
    for (let t = Math.ceil(d0 / step) * step; t <= d1 + 1e-12 * Math.abs(span); t += step) {
      ticks.push(Math.abs(t) < step * 1e-9 ? 0 : t)
    }
    return ticks
  }
  return scale
}

export function logScale(d0: number, d1: number, r0: number, r1: number): Scale {
  const l0 = Math.log10(d0)
  const l1 = Math.log10(d1)
  const span = l1 - l0 || 1
  const scale = ((v: number) => r0 + ((Math.log10(v) - l0) / span) * (r1 - r0)) as Scale
  scale.ticks = () => {
    const decades: number[] = []
    for (let e = Math.ceil(l0); e <= Math.floor(l1 + 1e-12); e++) decades.push(10 ** e)
    if (decades.length >= 2) return decades
    const ticks: number[] = []
    for (let e = Math.floor(l0); e <= Math.ceil(l1); e++) {
      for (const m of [1, 2, 5]) {
        const t = m * 10 ** e
        if (t >= d0 * (1 - 1e-12) && t <= d1 * (1 + 1e-12)) ticks.push(t)
      }
    }
    return ticks.length >= 2 ? ticks : [d0, d1]
  }
  return scale
}

function niceStep(raw: number): number {
  const mag = 10 ** Math.floor(Math.log10(raw))
  const n = raw / mag
  if (n < 1.5) return mag
  if (n < 3.5) return 2 * mag
  if (n < 7.5) return 5 * mag
  return 10 * mag
}

export const PALETTE = ['#1f77b4', '#d62728', '#2ca02c', '#9467bd', '#ff7f0e', '#8c564b']

export const MARGIN = { top: 40, right: 20, bottom: 45, left: 60 }

export class Svg {
  private parts: string[] = []

  constructor(readonly width: number, readonly height: number) {
    this.parts.push(
      `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
      `viewBox="0 0 ${width} ${height}" font-family="sans-serif" font-size="12">`)
    this.parts.push(`<rect width="${width}" height="${height}" fill="white"/>`)
  }

  raw(tag: string): void {
    this.parts.push(tag)
  }

  line(x1: number, y1: number, x2: number, y2: number, stroke: string, width = 1): void {
    this.parts.push(
      `<line x1="${fmt(x1)}" y1="${fmt(y1)}" x2="${fmt(x2)}" y2="${fmt(y2)}" ` +
      `stroke="${stroke}" stroke-width="${width}"/>`)
  }

  polyline(pts: Array<[number, number]>, stroke: string): void {
    const path = pts.map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(' ')
    this.parts.push(`<polyline points="${path}" fill="none" stroke="${stroke}" stroke-width="1.5"/>`)
  }

  circle(x: number, y: number, r: number, fill: string): void {
    this.parts.push(`<circle cx="${fmt(x)}" cy="${fmt(y)}" r="${r}" fill="${fill}"/>`)
  }

  rect(x: number, y: number, w: number, h: number, fill: string): void {
    this.parts.push(
      `<rect x="${fmt(x)}" y="${fmt(y)}" width="${fmt(w)}" height="${fmt(h)}" fill="${fill}"/>`)
  }

  text(x: number, y: number, content: string, attrs = ''): void {
    const esc = content.replace(/&/g, '&amp;').replace(/</g, '&lt;').replace(/>/g, '&gt;')
    this.parts.push(`<text x="${fmt(x)}" y="${fmt(y)}" ${attrs}>${esc}</text>`)
  }

  /** Frame, tick marks, tick labels and axis titles for a plot area. */
  axes(x: Scale, y: Scale, opts: { xlabel?: string; ylabel?: string; title?: string;
                                   xticks: number[]; yticks: number[];
                                   xfmt?: (v: number) => string; yfmt?: (v: number) => string }): void {
    const { top, right, bottom, left } = MARGIN
    const w = this.width
    const h = this.height
    const xf = opts.xfmt ?? ((v) => String(formatTick(v)))
    const yf = opts.yfmt ?? ((v) => String(formatTick(v)))
    this.raw(`<rect x="${left}" y="${top}" width="${w - left - right}" height="${h - top - bottom}" ` +
             `fill="none" stroke="black"/>`)
    for (const t of opts.xticks) {
      const px = x(t)
      this.line(px, h - bottom, px, h - bottom + 5, 'black')
      this.text(px, h - bottom + 18, xf(t), 'text-anchor="middle"')
    }
    for (const t of opts.yticks) {
      const py = y(t)
      this.line(left - 5, py, left, py, 'black')
      this.text(left - 8, py + 4, yf(t), 'text-anchor="end"')
    }
    if (opts.xlabel) this.text(left + (w - left - right) / 2, h - 10, opts.xlabel, 'text-anchor="middle"')
    if (opts.ylabel) {
      this.text(15, top + (h - top - bottom) / 2, opts.ylabel,
                `text-anchor="middle" transform="rotate(-90 15 ${top + (h - top - bottom) / 2})"`)
    }
    if (opts.title) this.text(w / 2, 22, opts.title, 'text-anchor="middle" font-size="15"')
  }

  toString(): string {
    return this.parts.join('\n') + '\n</svg>\n'
  }
}

export function formatTick(v: number): string {
  if (v !== 0 && (Math.abs(v) < 1e-3 || Math.abs(v) >= 1e4)) {
    const e = Math.round(Math.log10(Math.abs(v)))
    const m = v / 10 ** e
    return Math.abs(m - 1) < 1e-9 ? `1e${e}` : `${fmt(m)}e${e}`
  }
  return fmt(v)
}
