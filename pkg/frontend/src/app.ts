// Viewer wiring: file list, augmented code pane, category toggles, the
// overload slider, and the click-to-alias dialog. The displayed view is
// always derived from (raw source, decoration stream); after any successful
// mutation the viewer re-fetches, so what is shown always equals a fresh
// view of the file.

import { ApiClient, HttpError } from "./api.js"
import type { DecorationStream, OccurrenceRec } from "./api.js"
import { buildView, displayedNameOf } from "./render.js"

export const KNOWN_CATEGORIES = [
  "alias", "transform", "naming", "modifiers", "annotations", "project",
  "api-usage", "history", "risk", "analysis", "process", "hints",
]

export interface ViewerState {
  files: string[]
  selected: string | null
  source: string | null
  stream: DecorationStream | null
  occurrences: OccurrenceRec[]
  categoriesOff: Set<string>
  slider: number
  pendingAlias: { identity: string; draft: string } | null
  error: string | null
}

export class ViewerApp {
  readonly state: ViewerState = {
    files: [],
    selected: null,
    source: null,
    stream: null,
    occurrences: [],
    categoriesOff: new Set(),
    slider: 3,
    pendingAlias: null,
    error: null,
  }

  private fileSelect!: HTMLSelectElement
  private sliderInput!: HTMLInputElement
  private categoriesBox!: HTMLElement
  private banner!: HTMLElement
  private codeBox!: HTMLElement
  private dialog!: HTMLElement
  private dialogTitle!: HTMLElement
  private dialogInput!: HTMLInputElement
  private dialogError!: HTMLElement

  constructor(
    private root: HTMLElement,
    private api: ApiClient,
  ) {}

  async start(): Promise<void> {
    this.buildSkeleton()
    try {
      this.state.files = await this.api.listFiles()
    } catch (err) {
      this.showBanner(`cannot list files: ${String(err)}`)
      return
    }
    this.fileSelect.replaceChildren(
      ...this.state.files.map((f) => new Option(f, f)),
    )
    if (this.state.files.length > 0) {
      await this.viewFile(this.state.files[0])
    }
  }

  // -- rendering ----------------------------------------------------------

  async viewFile(path: string): Promise<void> {
    try {
      const [source, stream, occurrences] = await Promise.all([
        this.api.fetchSource(path),
        this.api.fetchStream(path, this.state.slider, [...this.state.categoriesOff]),
        this.api.fetchIdentities(path),
      ])
      this.state.selected = path
      this.state.source = source
      this.state.stream = stream
      this.state.occurrences = occurrences
      this.state.error = null
      this.fileSelect.value = path
      this.renderCode()
      this.hideBanner()
    } catch (err) {
      // previous view stays on screen
      this.showBanner(`failed to load ${path}: ${String(err)}`)
    }
  }

  private async refresh(): Promise<void> {
    if (this.state.selected) {
      await this.viewFile(this.state.selected)
    }
  }

  private renderCode(): void {
    if (this.state.source === null || this.state.stream === null) return
    const view = buildView(this.state.source, this.state.stream, this.state.occurrences)
    view.addEventListener("click", (ev) => {
      const wrapper = (ev.target as HTMLElement).closest<HTMLElement>(".impid-ident")
      if (wrapper?.dataset.identity) {
        this.openAliasDialog(wrapper.dataset.identity, displayedNameOf(wrapper))
      }
    })
    this.codeBox.replaceChildren(view)
  }

  // -- alias dialog ---------------------------------------------------------

  openAliasDialog(identity: string, currentDisplay: string): void {
    this.state.pendingAlias = { identity, draft: currentDisplay }
    this.dialogTitle.textContent = identity
    this.dialogInput.value = currentDisplay
    this.dialogError.hidden = true
    this.dialogError.textContent = ""
    this.dialog.hidden = false
    this.dialogInput.focus()
  }

  closeAliasDialog(): void {
    this.state.pendingAlias = null
    this.dialog.hidden = true
  }

  async submitAlias(): Promise<void> {
    const pending = this.state.pendingAlias
    if (!pending) return
    const draft = this.dialogInput.value.trim()
    try {
      await this.api.setAlias(pending.identity, draft)
      this.closeAliasDialog()
      await this.refresh()
    } catch (err) {
      if (err instanceof HttpError && err.status === 409 && err.body) {
        // conflict: inline message, dialog stays open, view untouched
        this.dialogError.textContent = err.body.detail
        this.dialogError.hidden = false
      } else {
        this.closeAliasDialog()
        this.showBanner(`alias failed: ${String(err)}`)
      }
    }
  }

  /** Dialog flow driven programmatically; used by scripted tests. */
  async submitAliasFor(identity: string, display: string): Promise<void> {
    this.openAliasDialog(identity, display)
    this.dialogInput.value = display
    await this.submitAlias()
  }

  async removePendingAlias(): Promise<void> {
    const pending = this.state.pendingAlias
    if (!pending) return
    try {
      await this.api.removeAlias(pending.identity)
      this.closeAliasDialog()
      await this.refresh()
    } catch (err) {
      this.closeAliasDialog()
      this.showBanner(`remove failed: ${String(err)}`)
    }
  }

  // -- view controls ---------------------------------------------------------

  async setSlider(level: number): Promise<void> {
    this.state.slider = level
    this.sliderInput.value = String(level)
    await this.refresh()
  }

  async toggleCategory(category: string, enabled: boolean): Promise<void> {
    if (enabled) this.state.categoriesOff.delete(category)
    else this.state.categoriesOff.add(category)
    await this.refresh()
  }

  // -- chrome -----------------------------------------------------------------

  private showBanner(message: string): void {
    this.state.error = message
    this.banner.textContent = message
    this.banner.hidden = false
  }

  private hideBanner(): void {
    this.state.error = null
    this.banner.hidden = true
  }

  private buildSkeleton(): void {
    this.root.innerHTML = `
      <div class="impid-app">
        <header class="impid-toolbar">
          <select class="impid-file-select"></select>
          <label class="impid-slider-label">detail
            <input class="impid-slider" type="range" min="0" max="6" step="1" value="3">
            <span class="impid-slider-value">3</span>
          </label>
          <span class="impid-categories"></span>
        </header>
        <div class="impid-banner" hidden></div>
        <div class="impid-codebox"></div>
        <div class="impid-dialog" hidden>
          <div class="impid-dialog-title"></div>
          <input class="impid-dialog-input" type="text" spellcheck="false">
          <button class="impid-dialog-save">set alias</button>
          <button class="impid-dialog-remove">remove alias</button>
          <button class="impid-dialog-cancel">cancel</button>
          <div class="impid-dialog-error" hidden></div>
        </div>
      </div>`
    const q = <T extends HTMLElement>(sel: string): T => {
      const el = this.root.querySelector<T>(sel)
      if (!el) throw new Error(`missing ${sel}`)
      return el
    }
    this.fileSelect = q<HTMLSelectElement>(".impid-file-select")
    this.sliderInput = q<HTMLInputElement>(".impid-slider")
    this.categoriesBox = q(".impid-categories")
    this.banner = q(".impid-banner")
    this.codeBox = q(".impid-codebox")
    this.dialog = q(".impid-dialog")
    this.dialogTitle = q(".impid-dialog-title")
    this.dialogInput = q<HTMLInputElement>(".impid-dialog-input")
    this.dialogError = q(".impid-dialog-error")

    this.fileSelect.addEventListener("change", () => {
      void this.viewFile(this.fileSelect.value)
    })
    this.sliderInput.addEventListener("input", () => {
      q(".impid-slider-value").textContent = this.sliderInput.value
      void this.setSlider(Number(this.sliderInput.value))
    })
    for (const cat of KNOWN_CATEGORIES) {
      const label = document.createElement("label")
      label.className = "impid-cat-toggle"
      const box = document.createElement("input")
      box.type = "checkbox"
      box.checked = true
      box.dataset.category = cat
      box.addEventListener("change", () => {
        void this.toggleCategory(cat, box.checked)
      })
      label.append(box, document.createTextNode(cat))
      this.categoriesBox.appendChild(label)
    }
    q(".impid-dialog-save").addEventListener("click", () => void this.submitAlias())
    q(".impid-dialog-remove").addEventListener("click", () => void this.removePendingAlias())
    q(".impid-dialog-cancel").addEventListener("click", () => this.closeAliasDialog())
    this.dialogInput.addEventListener("keydown", (ev) => {
      if (ev.key === "Enter") void this.submitAlias()
      if (ev.key === "Escape") this.closeAliasDialog()
    })
  }
}

export function initApp(root: HTMLElement, api: ApiClient): ViewerApp {
  return new ViewerApp(root, api)
}
