"""Composition and rendering: profile-filtered decoration plans emitted as
ANSI text, HTML, or the machine-readable decoration stream.

Rendering never alters the source: every renderer's output is reversible
back to the input bytes (see recover_source), which is the whole point —
names change only when the code is displayed.
"""
from __future__ import annotations

import hashlib
import html
import json
import re
from typing import Any, Callable, Iterable

from impid.model import (
    Decoration,
    DecorationKind,
    KIND_ORDER,
    Occurrence,
    RenderPlan,
    parse_identity,
)
from impid.profiles import Profile

STREAM_VERSION = 1

_GLYPH_KINDS = (DecorationKind.PREFIX_GLYPH, DecorationKind.SUFFIX_GLYPH,
                DecorationKind.INLINE_HINT)


class ComposeError(RuntimeError):
    """Internal invariant violation while composing decorations."""


class StalePlanError(RuntimeError):
    """A plan was applied to source bytes it was not built for."""


def source_hash(source: str) -> str:
    return hashlib.sha256(source.encode("utf-8")).hexdigest()


def _sort_key(d: Decoration) -> tuple:
    return (d.target.start, KIND_ORDER[d.kind], d.priority, d.category, d.text,
            d.target.end, d.description, d.identity or "")


def compose(occurrences: list[Occurrence], decorations: Iterable[Decoration],
            profile: Profile, *, file: str, source: str) -> RenderPlan:
    """Filter by category enablement and the slider, re-key priorities from
    the profile's category settings, and order everything deterministically.

    Replace-name decorations are gated by their category only; glyphs and
    hints additionally need category priority <= slider.
    """
    surviving: list[Decoration] = []
    for dec in decorations:
        setting = profile.category(dec.category)
        if not setting.enabled:
            continue
        effective = Decoration(
            target=dec.target, kind=dec.kind, text=dec.text, category=dec.category,
            priority=setting.priority, description=dec.description, identity=dec.identity)
        if dec.kind in _GLYPH_KINDS and effective.priority > profile.slider:
            continue
        surviving.append(effective)

    replaces: dict[tuple[int, int], Decoration] = {}
    deduped: list[Decoration] = []
    for dec in surviving:
        if dec.kind is not DecorationKind.REPLACE_NAME:
            deduped.append(dec)
            continue
        key = (dec.target.start, dec.target.end)
        prior = replaces.get(key)
        if prior is None:
            replaces[key] = dec
            deduped.append(dec)
        elif prior.text != dec.text:
            raise ComposeError(
                f"two replace-name decorations for span {key}: "
                f"{prior.text!r} vs {dec.text!r}")
    deduped.sort(key=_sort_key)
    return RenderPlan(file=file, source_hash=source_hash(source),
                      decorations=tuple(deduped))


# ---------------------------------------------------------------------------
# Edit application (shared by all renderers)
# ---------------------------------------------------------------------------

# rank: inserts after a span sort before inserts before the next span at the
# same byte position; replacements come last.
_RANK_AFTER, _RANK_BEFORE, _RANK_REPLACE = 0, 1, 2


def _edits(plan: RenderPlan) -> list[tuple[int, int, Decoration]]:
    edits = []
    for dec in plan.decorations:
        if dec.kind is DecorationKind.REPLACE_NAME:
            edits.append((dec.target.start, _RANK_REPLACE, dec))
        elif dec.kind is DecorationKind.SUFFIX_GLYPH:
            edits.append((dec.target.end, _RANK_AFTER, dec))
        else:  # prefix glyph / inline hint insert before the span
            edits.append((dec.target.start, _RANK_BEFORE, dec))
    edits.sort(key=lambda e: (e[0], e[1]))
    return edits


def insertion_text(dec: Decoration) -> str:
    """The plain text a renderer inserts for a glyph/hint decoration."""
    if dec.kind is DecorationKind.INLINE_HINT:
        return dec.text + " "
    return dec.text


def _apply(source: str, plan: RenderPlan,
           gap: Callable[[str], str],
           insert: Callable[[Decoration], str],
           replace: Callable[[Decoration], str]) -> str:
    data = source.encode("utf-8")
    out: list[str] = []
    pos = 0
    for at, rank, dec in _edits(plan):
        if at > pos:
            out.append(gap(data[pos:at].decode("utf-8")))
            pos = at
        if rank == _RANK_REPLACE:
            out.append(replace(dec))
            pos = dec.target.end
        else:
            out.append(insert(dec))
    if pos < len(data):
        out.append(gap(data[pos:].decode("utf-8")))
    return "".join(out)


def original_name(dec: Decoration) -> str:
    """The source text a replace-name decoration covers, recovered from the
    identity key (identity keys carry the original simple name)."""
    if dec.identity is None:
        raise ComposeError("replace-name decoration without identity")
    return parse_identity(dec.identity).display_name


def recover_source(plain_output: str, plan: RenderPlan) -> str:
    """Reverse all plan edits from an unstyled rendering (ANSI output after
    escape stripping, or HTML after tag removal + unescaping), recovering the
    exact input text. Needs no access to the original file."""
    out_bytes = plain_output.encode("utf-8")
    rebuilt: list[bytes] = []
    opos = 0  # position in the rendered output
    spos = 0  # position in the reconstructed source
    for at, rank, dec in _edits(plan):
        gap_len = at - spos
        rebuilt.append(out_bytes[opos:opos + gap_len])
        opos += gap_len
        spos = at
        if rank == _RANK_REPLACE:
            opos += len(dec.text.encode("utf-8"))
            orig = original_name(dec)
            rebuilt.append(orig.encode("utf-8"))
            spos = dec.target.end
        else:
            opos += len(insertion_text(dec).encode("utf-8"))
    rebuilt.append(out_bytes[opos:])
    return b"".join(rebuilt).decode("utf-8")


# ---------------------------------------------------------------------------
# ANSI
# ---------------------------------------------------------------------------

_ITALIC_ON, _ITALIC_OFF = "\x1b[3m", "\x1b[23m"
_DIM_ON, _DIM_OFF = "\x1b[2m", "\x1b[22m"

_SGR_RE = re.compile(r"\x1b\[[0-9;]*m")


def render_ansi(source: str, plan: RenderPlan) -> str:
    """Replace-names in italics, glyphs/hints dimmed; an empty plan renders
    the source byte-identically."""
    if plan.source_hash != source_hash(source):
        raise StalePlanError(f"plan was built for hash {plan.source_hash[:12]}…, "
                             f"source has {source_hash(source)[:12]}…")
    return _apply(
        source, plan,
        gap=lambda s: s,
        insert=lambda d: f"{_DIM_ON}{insertion_text(d)}{_DIM_OFF}",
        replace=lambda d: f"{_ITALIC_ON}{d.text}{_ITALIC_OFF}",
    )


def strip_ansi(text: str) -> str:
    return _SGR_RE.sub("", text)


# ---------------------------------------------------------------------------
# HTML
# ---------------------------------------------------------------------------

def render_html(source: str, plan: RenderPlan) -> str:
    """Escaped source inside <pre>; each decoration becomes a span with the
    category as a class and the description as the hover title."""
    if plan.source_hash != source_hash(source):
        raise StalePlanError(f"plan was built for hash {plan.source_hash[:12]}…, "
                             f"source has {source_hash(source)[:12]}…")

    def span_for(dec: Decoration, content: str, role: str) -> str:
        title = html.escape(dec.description, quote=True)
        return (f'<span class="impid-{role} cat-{html.escape(dec.category)}" '
                f'title="{title}">{html.escape(content)}</span>')

    body = _apply(
        source, plan,
        gap=lambda s: html.escape(s),
        insert=lambda d: span_for(d, insertion_text(d),
                                  "hint" if d.kind is DecorationKind.INLINE_HINT else "glyph"),
        replace=lambda d: span_for(d, d.text, "replace"),
    )
    return f'<pre class="impid">{body}</pre>'


_TAG_RE = re.compile(r"</?(?:pre|span)\b[^>]*>")


def html_to_plain(rendered: str) -> str:
    """Strip the renderer's own markup and unescape entities; the result
    feeds recover_source."""
    return html.unescape(_TAG_RE.sub("", rendered))


# ---------------------------------------------------------------------------
# Decoration stream
# ---------------------------------------------------------------------------

def emit_stream(plan: RenderPlan) -> str:
    """Canonical machine-readable decoration stream for editor hosts."""
    records = []
    for i, dec in enumerate(plan.decorations):
        rec: dict[str, Any] = {"id": f"d{i:04d}"}
        rec.update(dec.to_dict())
        records.append(rec)
    doc = {
        "version": STREAM_VERSION,
        "file": plan.file,
        "sourceHash": plan.source_hash,
        "decorations": records,
    }
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def parse_stream(text: str) -> RenderPlan:
    doc = json.loads(text)
    if doc.get("version") != STREAM_VERSION:
        raise ValueError(f"unsupported stream version {doc.get('version')!r}")
    return RenderPlan(
        file=doc["file"],
        source_hash=doc["sourceHash"],
        decorations=tuple(Decoration.from_dict(r) for r in doc["decorations"]),
    )


def apply_replace_edits(source: str, plan: RenderPlan) -> str:
    """Apply only the replace-name edits as plain text (host-editor view of
    aliased code, no styling)."""
    only_replaces = RenderPlan(
        file=plan.file, source_hash=plan.source_hash,
        decorations=tuple(d for d in plan.decorations
                          if d.kind is DecorationKind.REPLACE_NAME))
    return _apply(source, only_replaces, gap=lambda s: s,
                  insert=insertion_text, replace=lambda d: d.text)


def reverse_replace_edits(augmented: str, plan: RenderPlan) -> str:
    """Inverse of apply_replace_edits."""
    only_replaces = RenderPlan(
        file=plan.file, source_hash=plan.source_hash,
        decorations=tuple(d for d in plan.decorations
                          if d.kind is DecorationKind.REPLACE_NAME))
    return recover_source(augmented, only_replaces)


__all__ = [
    "STREAM_VERSION",
    "ComposeError",
    "StalePlanError",
    "source_hash",
    "compose",
    "insertion_text",
    "original_name",
    "recover_source",
    "render_ansi",
    "strip_ansi",
    "render_html",
    "html_to_plain",
    "emit_stream",
    "parse_stream",
    "apply_replace_edits",
    "reverse_replace_edits",
]
