"""Glyph handling: codepoint-sequence notation and the default glyph map.

Config and profile files never contain literal emoji; glyphs are written as
codepoint sequences like ``U+1F6A6`` or ``U+1F937 U+200D U+2640`` (space- or
comma-separated) and only turned into characters at render time.
"""
from __future__ import annotations

import re

_CODEPOINT_RE = re.compile(r"^[Uu]\+([0-9A-Fa-f]{1,6})$")


class GlyphError(ValueError):
    pass


def parse_codepoints(seq: str) -> str:
    """Turn ``"U+1F6A6"`` / ``"U+1F467,U+1F3FE"`` into the actual characters."""
    if not seq.strip():
        raise GlyphError("empty codepoint sequence")
    chars: list[str] = []
    for part in re.split(r"[,\s]+", seq.strip()):
        m = _CODEPOINT_RE.match(part)
        if not m:
            raise GlyphError(f"bad codepoint {part!r} in {seq!r}")
        chars.append(chr(int(m.group(1), 16)))
    return "".join(chars)


def format_codepoints(text: str, sep: str = " ") -> str:
    """Inverse of parse_codepoints: characters -> ``U+XXXX`` notation."""
    return sep.join(f"U+{ord(c):04X}" for c in text)


def is_codepoint_seq(seq: str) -> bool:
    try:
        parse_codepoints(seq)
        return True
    except GlyphError:
        return False


# Semantic glyph keys -> codepoint sequences. Every entry can be overridden
# per profile; these defaults follow the emoji assignments the rules document.
DEFAULT_GLYPH_MAP: dict[str, str] = {
    # naming findings
    "naming.singular-holds-many": "U+1F522",   # input numbers
    "naming.plural-holds-one": "U+1F648",      # see-no-evil monkey
    "naming.single-letter": "U+1F90F",         # pinching hand
    "naming.getter-no-return": "U+1F922",      # nauseated face
    # declaration modifiers
    "modifier.synchronized": "U+1F6A6",        # vertical traffic light
    "modifier.private": "U+1F512",             # locked
    "modifier.public": "U+1F513",              # unlocked
    # transforms
    "transform.shortened": "U+1FA73",          # shorts: name has been shortened
    # annotations (transaction attributes)
    "annotation.tx-requires-new": "U+1F195",   # NEW button
    "annotation.tx-requires": "U+27A1",        # right arrow
    "annotation.tx-not-supported": "U+26D4",   # no entry
    # API usage pairing
    "api.open-reminder": "U+1F4D6",            # open book
    "api.close-reminder": "U+1F4D8",           # blue (closed) book
    # history facts
    "history.renamed": "U+270D",               # writing hand
    "history.method-added": "U+1F476",         # baby
    "history.method-changed": "U+270F",        # pencil
    # analysis / risk facts
    "risk.risky-call": "U+2620",               # skull and crossbones
    "analysis.lost-exception": "U+1F937 U+200D U+2640",  # woman shrugging
    # change-process status
    "process.inspection-pending": "U+1F7E0",   # orange circle
    "process.needs-change": "U+1F534",         # red circle
    "process.no-change": "U+1F7E2",            # green circle
    "process.implemented": "U+1F7E3",          # purple circle
}

STATUS_GLYPH_KEYS = {
    "inspection-pending": "process.inspection-pending",
    "needs-change": "process.needs-change",
    "no-change": "process.no-change",
    "implemented": "process.implemented",
}


def glyph_chars(glyph_map: dict[str, str], key: str) -> str | None:
    """Resolve a semantic key to display characters; None when unmapped."""
    seq = glyph_map.get(key)
    if seq is None:
        return None
    return parse_codepoints(seq)


__all__ = [
    "GlyphError",
    "parse_codepoints",
    "format_codepoints",
    "is_codepoint_seq",
    "DEFAULT_GLYPH_MAP",
    "STATUS_GLYPH_KEYS",
    "glyph_chars",
]
