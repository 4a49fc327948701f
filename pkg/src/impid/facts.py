"""Ingestion of external facts: VCS events, analysis findings, change status.

The engine never talks to a VCS or an analyzer; it consumes pre-exported
text (newline-delimited JSON records, or the line-oriented VCS export) and
turns records into decorations. Recency is judged against an explicit
reference time — no implicit clock reads here.
"""
from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from datetime import datetime, timedelta
from typing import Iterable, Optional

from impid.glyphs import STATUS_GLYPH_KEYS, glyph_chars, parse_codepoints
from impid.model import (
    Decoration,
    DecorationKind,
    FactRecord,
    FactType,
    ModelError,
    Occurrence,
    Role,
    parse_timestamp,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class RecencyConfig:
    reference_time: datetime
    window: timedelta = timedelta(days=14)

    def __post_init__(self) -> None:
        if self.window <= timedelta(0):
            raise ModelError("recency window must be positive")

    def is_recent(self, ts: Optional[datetime]) -> bool:
        if ts is None:
            return False
        return ts >= self.reference_time - self.window


def parse_facts(text: str) -> tuple[list[FactRecord], list[str]]:
    """Parse newline-delimited fact records; malformed or unknown lines are
    skipped individually, reported in the diagnostics list."""
    records: list[FactRecord] = []
    diagnostics: list[str] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            diagnostics.append(f"line {lineno}: not a valid record ({exc.msg})")
            continue
        if not isinstance(obj, dict):
            diagnostics.append(f"line {lineno}: record is not an object")
            continue
        try:
            records.append(FactRecord.from_dict(obj))
        except ModelError as exc:
            diagnostics.append(f"line {lineno}: {exc}")
    return records, diagnostics


_FACT_CATEGORY = {
    FactType.RENAMED: "history",
    FactType.METHOD_ADDED: "history",
    FactType.METHOD_CHANGED: "history",
    FactType.LAST_AUTHOR: "history",
    FactType.RISKY_CALL: "risk",
    FactType.FINDING: "analysis",
    FactType.CHANGE_STATUS: "process",
}


def facts_decorations(facts: Iterable[FactRecord], occurrences: list[Occurrence],
                      recency: RecencyConfig, glyph_map: dict[str, str],
                      priority: int = 1) -> list[Decoration]:
    """Map facts onto the given occurrences. Facts targeting identities or
    spans not present in this file are silently ignored (cross-file facts are
    legal); every emitted decoration sits on an occurrence span."""
    by_identity: dict[str, list[Occurrence]] = {}
    by_span: dict[tuple[int, int], Occurrence] = {}
    for occ in occurrences:
        by_identity.setdefault(occ.identity, []).append(occ)
        by_span[(occ.span.start, occ.span.end)] = occ

    out: list[Decoration] = []

    def emit(occ: Occurrence, text: str, description: str, category: str) -> None:
        out.append(Decoration(target=occ.span, kind=DecorationKind.SUFFIX_GLYPH,
                              text=text, category=category, priority=priority,
                              description=description, identity=occ.identity))

    def targets(fact: FactRecord, declarations_only: bool = False,
                usages_only: bool = False) -> list[Occurrence]:
        found: list[Occurrence] = []
        if fact.identity is not None:
            found = by_identity.get(fact.identity, [])
        elif fact.span is not None:
            occ = by_span.get(fact.span)
            found = [occ] if occ else []
        if declarations_only:
            found = [o for o in found if o.role is Role.DECLARATION]
        if usages_only:
            found = [o for o in found if o.role is Role.USAGE]
        return found

    for fact in facts:
        category = _FACT_CATEGORY[fact.type]
        if fact.type is FactType.RENAMED:
            if not recency.is_recent(fact.timestamp):
                continue
            chars = glyph_chars(glyph_map, "history.renamed")
            if chars is None:
                continue
            desc = f"recently renamed from '{fact.previous}'" if fact.previous \
                else "recently renamed"
            for occ in targets(fact):
                emit(occ, chars, desc, category)
        elif fact.type in (FactType.METHOD_ADDED, FactType.METHOD_CHANGED):
            if not recency.is_recent(fact.timestamp):
                continue
            key = "history.method-added" if fact.type is FactType.METHOD_ADDED \
                else "history.method-changed"
            chars = glyph_chars(glyph_map, key)
            if chars is None:
                continue
            desc = "recently added method" if fact.type is FactType.METHOD_ADDED \
                else "recently changed method"
            for occ in targets(fact, declarations_only=True):
                emit(occ, chars, desc, category)
        elif fact.type is FactType.LAST_AUTHOR:
            if not fact.avatar:
                logger.warning("last-author fact without avatar glyph ignored")
                continue
            try:
                chars = parse_codepoints(fact.avatar)
            except ValueError:
                logger.warning("last-author fact has bad avatar %r", fact.avatar)
                continue
            desc = f"last modified by {fact.author}" if fact.author else "last modified"
            for occ in targets(fact, declarations_only=True):
                emit(occ, chars, desc, category)
        elif fact.type is FactType.RISKY_CALL:
            chars = glyph_chars(glyph_map, "risk.risky-call")
            if chars is None:
                continue
            desc = fact.message or "call into code with known risks"
            if fact.severity:
                desc = f"[{fact.severity}] {desc}"
            for occ in targets(fact, usages_only=True):
                emit(occ, chars, desc, category)
        elif fact.type is FactType.FINDING:
            rule = fact.rule or "finding"
            chars = glyph_chars(glyph_map, f"analysis.{rule}")
            if chars is None:
                logger.warning("no glyph for analysis rule %r; finding skipped", rule)
                continue
            desc = fact.message or f"analysis finding: {rule}"
            for occ in targets(fact):
                emit(occ, chars, desc, category)
        elif fact.type is FactType.CHANGE_STATUS:
            assert fact.status is not None
            chars = glyph_chars(glyph_map, STATUS_GLYPH_KEYS[fact.status])
            if chars is None:
                continue
            desc = f"change status: {fact.status}"
            for occ in targets(fact):
                emit(occ, chars, desc, category)
    return out


def derive_vcs_facts(export_text: str, reference_time: datetime
                     ) -> tuple[list[FactRecord], list[str]]:
    """Derive facts from a line-oriented VCS export.

    Format, one record per line, space-separated:
        op(A|M|R) iso-timestamp author glyph-codepoints(comma-joined) identity [previous-name]

    A -> method-added, M -> method-changed, R -> renamed; every line also
    contributes to last-author (most recent event per identity wins). Lines
    dated after the reference time are ignored.
    """
    records: list[FactRecord] = []
    diagnostics: list[str] = []
    latest: dict[str, FactRecord] = {}
    for lineno, line in enumerate(export_text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) < 5:
            diagnostics.append(f"line {lineno}: expected at least 5 fields")
            continue
        op, ts_text, author, glyphs, identity = parts[:5]
        if op not in ("A", "M", "R"):
            diagnostics.append(f"line {lineno}: unknown op {op!r}")
            continue
        try:
            ts = parse_timestamp(ts_text)
        except ModelError as exc:
            diagnostics.append(f"line {lineno}: {exc}")
            continue
        if ts > reference_time:
            continue
        avatar = glyphs.replace(",", " ")
        try:
            parse_codepoints(avatar)
        except ValueError:
            diagnostics.append(f"line {lineno}: bad glyph codepoints {glyphs!r}")
            continue
        if op == "A":
            records.append(FactRecord(type=FactType.METHOD_ADDED, identity=identity,
                                      timestamp=ts, author=author))
        elif op == "M":
            records.append(FactRecord(type=FactType.METHOD_CHANGED, identity=identity,
                                      timestamp=ts, author=author))
        else:
            if len(parts) < 6:
                diagnostics.append(f"line {lineno}: rename without previous name")
                continue
            records.append(FactRecord(type=FactType.RENAMED, identity=identity,
                                      timestamp=ts, author=author, previous=parts[5]))
        author_fact = FactRecord(type=FactType.LAST_AUTHOR, identity=identity,
                                 timestamp=ts, author=author, avatar=avatar)
        prev = latest.get(identity)
        if prev is None or (prev.timestamp or ts) <= ts:
            latest[identity] = author_fact
    records.extend(latest[k] for k in sorted(latest))
    return records, diagnostics


__all__ = ["RecencyConfig", "parse_facts", "facts_decorations", "derive_vcs_facts"]
