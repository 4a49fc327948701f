// Builds the augmented code view from (raw source, decoration stream,
// occurrence list). All display logic consumes the stream verbatim; no
// augmentation rule is re-implemented here. Spans are byte offsets, so the
// walk happens over the UTF-8 encoding of the source.

import type { DecorationRec, DecorationStream, OccurrenceRec } from "./api.js"

const encoder = new TextEncoder()
const decoder = new TextDecoder()

interface OccurrenceItem {
  kind: "occurrence"
  pos: number
  occ: OccurrenceRec
  replace: DecorationRec | null
  prefixes: DecorationRec[]
  suffixes: DecorationRec[]
}

interface InsertItem {
  kind: "insert"
  pos: number
  dec: DecorationRec
  withSpace: boolean
}

type Item = OccurrenceItem | InsertItem

function glyphSpan(dec: DecorationRec): HTMLElement {
  const el = document.createElement("span")
  el.className =
    (dec.kind === "inline-hint" ? "impid-hint" : "impid-glyph") +
    ` cat-${dec.category}`
  el.title = dec.description
  el.textContent = dec.kind === "inline-hint" ? dec.text + " " : dec.text
  return el
}

export function buildView(
  source: string,
  stream: DecorationStream,
  occurrences: OccurrenceRec[],
): HTMLElement {
  const bytes = encoder.encode(source)
  const byKey = new Map<string, { replace: DecorationRec | null; prefixes: DecorationRec[]; suffixes: DecorationRec[] }>()
  const inserts: InsertItem[] = []
  const spanKeys = new Set(occurrences.map((o) => `${o.span.start}:${o.span.end}`))

  for (const dec of stream.decorations) {
    const key = `${dec.span.start}:${dec.span.end}`
    if (dec.kind === "inline-hint" || !spanKeys.has(key)) {
      // hints anchor at argument starts; anything not on an occurrence span
      // degrades to a plain insertion so nothing in the stream is dropped
      const pos = dec.kind === "suffix-glyph" ? dec.span.end : dec.span.start
      inserts.push({ kind: "insert", pos, dec, withSpace: false })
      continue
    }
    let group = byKey.get(key)
    if (!group) {
      group = { replace: null, prefixes: [], suffixes: [] }
      byKey.set(key, group)
    }
    if (dec.kind === "replace-name") group.replace = dec
    else if (dec.kind === "prefix-glyph") group.prefixes.push(dec)
    else group.suffixes.push(dec)
  }

  const items: Item[] = [...inserts]
  for (const occ of occurrences) {
    const group = byKey.get(`${occ.span.start}:${occ.span.end}`) ?? {
      replace: null,
      prefixes: [],
      suffixes: [],
    }
    items.push({ kind: "occurrence", pos: occ.span.start, occ, ...group })
  }
  // inserts at a position come before the occurrence starting there
  const rank = (it: Item) => (it.kind === "insert" ? 0 : 1)
  items.sort((a, b) => a.pos - b.pos || rank(a) - rank(b))

  const pre = document.createElement("pre")
  pre.className = "impid-code"
  let pos = 0
  const flushGap = (upto: number) => {
    if (upto > pos) {
      pre.appendChild(document.createTextNode(decoder.decode(bytes.subarray(pos, upto))))
      pos = upto
    }
  }

  for (const item of items) {
    flushGap(item.pos)
    if (item.kind === "insert") {
      pre.appendChild(glyphSpan(item.dec))
      continue
    }
    const { occ, replace, prefixes, suffixes } = item
    const wrapper = document.createElement("span")
    wrapper.className = "impid-ident"
    wrapper.dataset.identity = occ.identity
    wrapper.dataset.name = occ.name
    wrapper.tabIndex = 0
    for (const dec of prefixes) wrapper.appendChild(glyphSpan(dec))
    if (replace) {
      const name = document.createElement("span")
      name.className = `impid-replace cat-${replace.category}`
      name.title = replace.description
      name.textContent = replace.text
      wrapper.appendChild(name)
    } else {
      const name = document.createElement("span")
      name.className = "impid-name"
      name.textContent = decoder.decode(bytes.subarray(occ.span.start, occ.span.end))
      wrapper.appendChild(name)
    }
    for (const dec of suffixes) wrapper.appendChild(glyphSpan(dec))
    pre.appendChild(wrapper)
    pos = occ.span.end
  }
  flushGap(bytes.length)
  return pre
}

export function displayedNameOf(wrapper: HTMLElement): string {
  const replaced = wrapper.querySelector(".impid-replace")
  if (replaced?.textContent) return replaced.textContent
  return wrapper.querySelector(".impid-name")?.textContent ?? ""
}
