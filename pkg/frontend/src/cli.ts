#!/usr/bin/env node
import { writeFileSync } from 'node:fs'
import { parseSpec, SpecError } from './spec.js'
import { render } from './figures.js'
import { CsvError } from './csv.js'

export function main(argv: string[]): number {
  if (argv.length !== 1) {
    console.error('usage: plot <figure-spec-file>')
    return 2
  }
  try {
    const spec = parseSpec(argv[0])
    const svg = render(spec)
    writeFileSync(spec.output, svg, 'utf8')
    console.log(spec.output)
    return 0
  } catch (err) {
    if (err instanceof SpecError || err instanceof CsvError) {
      console.error(`plot: ${err.message}`)
      return 2
    }
    throw err
  }
}

import { pathToFileURL } from 'node:url'

if (process.argv[1] && import.meta.url === pathToFileURL(process.argv[1]).href) {
  process.exit(main(process.argv.slice(2)))
}
