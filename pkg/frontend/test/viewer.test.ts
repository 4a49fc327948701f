// @vitest-environment jsdom
//
// Scripted UI test against a fake backend that implements the documented
// HTTP endpoints (and records every request, so we can assert the viewer
// never calls anything undocumented). The fixture mirrors the engine's
// synchronized-method scenario: `inc()` carries a 🚦 glyph at declaration
// and at its call site.

import { afterEach, beforeEach, describe, expect, it, vi } from "vitest"

import { ApiClient } from "../src/api.js"
import { ViewerApp, initApp } from "../src/app.js"

const SOURCE = `package demo;

class Counter {
    int count;

    synchronized void inc() {
        count = count + 1;
    }

    void tick() {
        inc();
    }
}
`

const TRAFFIC_LIGHT = "\u{1F6A6}"
const INC_IDENTITY = "demo.Counter#inc(0)"

interface Occ {
  identity: string
  span: { start: number; end: number }
  role: string
  kind: string
  name: string
}

function at(pattern: string, offset: number, name: string, identity: string,
            role: string, kind: string): Occ {
  const start = SOURCE.indexOf(pattern) + offset
  return { identity, span: { start, end: start + name.length }, role, kind, name }
}

const OCCURRENCES: Occ[] = [
  at("Counter {", 0, "Counter", "demo.Counter", "declaration", "class"),
  at("int count", 4, "count", "demo.Counter#count", "declaration", "field"),
  at("void inc()", 5, "inc", INC_IDENTITY, "declaration", "method"),
  at("count = count", 0, "count", "demo.Counter#count", "usage", "field"),
  at("count + 1", 0, "count", "demo.Counter#count", "usage", "field"),
  at("void tick()", 5, "tick", "demo.Counter#tick(0)", "declaration", "method"),
  at("inc();", 0, "inc", INC_IDENTITY, "usage", "method"),
]

class FakeBackend {
  aliases = new Map<string, string>()
  requests: string[] = []
  undocumented: string[] = []

  private decorations(slider: number, categoriesOff: Set<string>) {
    const records: object[] = []
    let n = 0
    const push = (rec: Record<string, unknown>) => {
      records.push({ id: `d${String(n++).padStart(4, "0")}`, line: 1, col: 1, ...rec })
    }
    for (const occ of OCCURRENCES) {
      const alias = this.aliases.get(occ.identity)
      if (alias && !categoriesOff.has("alias")) {
        push({ span: occ.span, kind: "replace-name", text: alias, category: "alias",
               priority: 1,
               description: `alias of ${occ.name} (${occ.identity})`,
               identity: occ.identity })
      }
      if (occ.identity === INC_IDENTITY && !categoriesOff.has("modifiers") && slider >= 1) {
        push({ span: occ.span, kind: "suffix-glyph", text: TRAFFIC_LIGHT,
               category: "modifiers", priority: 1,
               description: "has the synchronized modifier",
               identity: occ.identity })
      }
    }
    return records
  }

  fetch = async (input: RequestInfo | URL, init?: RequestInit): Promise<Response> => {
    const url = new URL(String(input))
    const method = (init?.method ?? "GET").toUpperCase()
    this.requests.push(`${method} ${url.pathname}`)

    if (method === "GET" && url.pathname === "/api/files") {
      return json(["Counter.java"])
    }
    if (method === "GET" && url.pathname === "/api/identities") {
      return json({ path: url.searchParams.get("path"), identities: OCCURRENCES })
    }
    if (method === "GET" && url.pathname === "/api/render") {
      const format = url.searchParams.get("format") ?? "json"
      if (format === "source") {
        return new Response(SOURCE, { status: 200 })
      }
      const slider = Number(url.searchParams.get("slider") ?? "1")
      const categoriesOff = new Set(
        url.searchParams.getAll("category")
          .filter((c) => c.endsWith("=off"))
          .map((c) => c.split("=")[0]))
      return json({ version: 1, file: url.searchParams.get("path"),
                    sourceHash: "fake", decorations: this.decorations(slider, categoriesOff) })
    }
    if (method === "POST" && url.pathname === "/api/alias") {
      const body = JSON.parse(String(init?.body)) as { identity: string; display: string }
      if (body.display === "count") {
        return json({ error: "alias conflict", code: "alias-conflict",
                      detail: "display name 'count' already names demo.Counter#count " +
                              "(scope of demo.Counter#count)" }, 409)
      }
      this.aliases.set(body.identity, body.display)
      return json({ status: "ok" })
    }
    if (method === "DELETE" && url.pathname.startsWith("/api/alias/")) {
      this.aliases.delete(decodeURIComponent(url.pathname.slice("/api/alias/".length)))
      return json({ status: "ok" })
    }
    this.undocumented.push(`${method} ${url.pathname}`)
    return json({ error: "not found", code: "not-found", detail: url.pathname }, 404)
  }
}

function json(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "content-type": "application/json" },
  })
}

const DOCUMENTED = [
  /^GET \/api\/files$/,
  /^GET \/api\/render$/,
  /^GET \/api\/identities$/,
  /^POST \/api\/alias$/,
  /^DELETE \/api\/alias\/.+$/,
  /^GET \/api\/profile$/,
  /^PUT \/api\/profile$/,
  /^PATCH \/api\/categories\/.+$/,
  /^GET \/api\/health$/,
]

describe("viewer", () => {
  let backend: FakeBackend
  let app: ViewerApp
  let root: HTMLElement

  beforeEach(async () => {
    backend = new FakeBackend()
    vi.stubGlobal("fetch", backend.fetch)
    root = document.createElement("div")
    document.body.appendChild(root)
    app = initApp(root, new ApiClient("http://api.test"))
    await app.start()
  })

  afterEach(() => {
    vi.unstubAllGlobals()
    document.body.innerHTML = ""
  })

  const glyphs = () =>
    [...root.querySelectorAll<HTMLElement>(".impid-glyph")]
      .filter((el) => el.textContent === TRAFFIC_LIGHT)

  const displayedInc = () =>
    [...root.querySelectorAll<HTMLElement>(`[data-identity="${INC_IDENTITY}"]`)]
      .map((el) => (el.querySelector(".impid-replace, .impid-name") as HTMLElement).textContent)

  it("renders the synchronized glyph with hover text at both occurrences", () => {
    const found = glyphs()
    expect(found).toHaveLength(2)
    for (const glyph of found) {
      expect(glyph.title).toBe("has the synchronized modifier")
    }
    expect(root.querySelector(".impid-code")?.textContent).toContain("class Counter")
  })

  it("sets an alias through the dialog and every occurrence updates", async () => {
    expect(displayedInc()).toEqual(["inc", "inc"])
    const wrapper = root.querySelector<HTMLElement>(`[data-identity="${INC_IDENTITY}"]`)!
    wrapper.click()
    const dialog = root.querySelector<HTMLElement>(".impid-dialog")!
    expect(dialog.hidden).toBe(false)
    const input = root.querySelector<HTMLInputElement>(".impid-dialog-input")!
    input.value = "increment"
    root.querySelector<HTMLElement>(".impid-dialog-save")!.click()
    await vi.waitFor(() => {
      expect(displayedInc()).toEqual(["increment", "increment"])
    })
    expect(dialog.hidden).toBe(true)
    // glyphs still present alongside the alias
    expect(glyphs()).toHaveLength(2)
  })

  it("shows a 409 conflict inline and leaves the view unchanged", async () => {
    const before = root.querySelector(".impid-codebox")!.innerHTML
    const tick = root.querySelector<HTMLElement>('[data-identity="demo.Counter#tick(0)"]')!
    tick.click()
    const input = root.querySelector<HTMLInputElement>(".impid-dialog-input")!
    input.value = "count"
    root.querySelector<HTMLElement>(".impid-dialog-save")!.click()
    const error = root.querySelector<HTMLElement>(".impid-dialog-error")!
    await vi.waitFor(() => {
      expect(error.hidden).toBe(false)
    })
    expect(error.textContent).toContain("demo.Counter#count")
    expect(root.querySelector<HTMLElement>(".impid-dialog")!.hidden).toBe(false)
    expect(root.querySelector(".impid-codebox")!.innerHTML).toBe(before)
  })

  it("slider to 0 removes glyphs but keeps aliases", async () => {
    await app.submitAliasFor(INC_IDENTITY, "increment")
    await vi.waitFor(() => expect(displayedInc()).toEqual(["increment", "increment"]))
    const slider = root.querySelector<HTMLInputElement>(".impid-slider")!
    slider.value = "0"
    slider.dispatchEvent(new Event("input"))
    await vi.waitFor(() => {
      expect(glyphs()).toHaveLength(0)
    })
    expect(displayedInc()).toEqual(["increment", "increment"])
  })

  it("removing the alias restores the original name everywhere", async () => {
    await app.submitAliasFor(INC_IDENTITY, "increment")
    await vi.waitFor(() => expect(displayedInc()).toEqual(["increment", "increment"]))
    root.querySelector<HTMLElement>(`[data-identity="${INC_IDENTITY}"]`)!.click()
    root.querySelector<HTMLElement>(".impid-dialog-remove")!.click()
    await vi.waitFor(() => {
      expect(displayedInc()).toEqual(["inc", "inc"])
    })
  })

  it("category toggle removes exactly that category", async () => {
    const modifiersBox = root.querySelector<HTMLInputElement>(
      'input[data-category="modifiers"]')!
    modifiersBox.checked = false
    modifiersBox.dispatchEvent(new Event("change"))
    await vi.waitFor(() => expect(glyphs()).toHaveLength(0))
    modifiersBox.checked = true
    modifiersBox.dispatchEvent(new Event("change"))
    await vi.waitFor(() => expect(glyphs()).toHaveLength(2))
  })

  it("after a mutation the view equals a fresh view of the same file", async () => {
    await app.submitAliasFor(INC_IDENTITY, "increment")
    await vi.waitFor(() => expect(displayedInc()).toEqual(["increment", "increment"]))
    const afterMutation = root.querySelector(".impid-codebox")!.innerHTML
    await app.viewFile("Counter.java")
    expect(root.querySelector(".impid-codebox")!.innerHTML).toBe(afterMutation)
  })

  it("issues only documented API calls", () => {
    expect(backend.undocumented).toEqual([])
    for (const req of backend.requests) {
      expect(DOCUMENTED.some((re) => re.test(req)), req).toBe(true)
    }
  })
})
