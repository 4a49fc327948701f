// Typed client for the impid HTTP service. The viewer goes through this
// module for every request, and only the endpoints documented by the
// service exist here.

export interface SpanRec {
  start: number
  end: number
}

export interface DecorationRec {
  id: string
  span: SpanRec
  line: number
  col: number
  kind: "replace-name" | "prefix-glyph" | "suffix-glyph" | "inline-hint"
  text: string
  category: string
  priority: number
  description: string
  identity: string | null
}

export interface DecorationStream {
  version: number
  file: string
  sourceHash: string
  decorations: DecorationRec[]
}

export interface OccurrenceRec {
  identity: string
  span: SpanRec
  role: "declaration" | "usage"
  kind: string
  name: string
}

export interface ApiErrorBody {
  error: string
  code: string
  detail: string
}

export class HttpError extends Error {
  constructor(
    public status: number,
    public body: ApiErrorBody | null,
  ) {
    super(body ? body.detail : `HTTP ${status}`)
  }
}

async function fail(response: Response): Promise<never> {
  let body: ApiErrorBody | null = null
  try {
    body = (await response.json()) as ApiErrorBody
  } catch {
    body = null
  }
  throw new HttpError(response.status, body)
}

export class ApiClient {
  constructor(private baseUrl: string = "") {}

  private url(path: string, params?: Record<string, string>): string {
    const query = params ? "?" + new URLSearchParams(params).toString() : ""
    return `${this.baseUrl}${path}${query}`
  }

  async listFiles(): Promise<string[]> {
    const r = await fetch(this.url("/api/files"))
    if (!r.ok) return fail(r)
    return (await r.json()) as string[]
  }

  async fetchSource(path: string): Promise<string> {
    const r = await fetch(this.url("/api/render", { path, format: "source" }))
    if (!r.ok) return fail(r)
    return await r.text()
  }

  async fetchStream(
    path: string,
    slider: number,
    categoriesOff: string[],
  ): Promise<DecorationStream> {
    const params = new URLSearchParams({ path, format: "json", slider: String(slider) })
    for (const cat of categoriesOff) {
      params.append("category", `${cat}=off`)
    }
    const r = await fetch(`${this.baseUrl}/api/render?${params.toString()}`)
    if (!r.ok) return fail(r)
    return (await r.json()) as DecorationStream
  }

  async fetchIdentities(path: string): Promise<OccurrenceRec[]> {
    const r = await fetch(this.url("/api/identities", { path }))
    if (!r.ok) return fail(r)
    const body = (await r.json()) as { identities: OccurrenceRec[] }
    return body.identities
  }

  async setAlias(identity: string, display: string): Promise<void> {
    const r = await fetch(this.url("/api/alias"), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ identity, display }),
    })
    if (!r.ok) return fail(r)
  }

  async removeAlias(identity: string): Promise<void> {
    const r = await fetch(
      `${this.baseUrl}/api/alias/${encodeURIComponent(identity)}`,
      { method: "DELETE" },
    )
    if (!r.ok) return fail(r)
  }
}
