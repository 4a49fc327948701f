"""End-to-end augmentation pipeline: parse -> rules -> facts -> resolve ->
compose. The CLI and the HTTP service both render through build_plan, which
is what keeps their outputs byte-identical."""
from __future__ import annotations

from dataclasses import replace
from datetime import datetime, timezone
from typing import Iterable, Optional, Sequence

from impid.facts import RecencyConfig, derive_vcs_facts, facts_decorations, parse_facts
from impid.javaparse.parser import DeclarationInfo, SymbolTable, extract_occurrences
from impid.lint import (
    annotation_decorations,
    api_usage_decorations,
    detect_naming_issues,
    finding_decorations,
    modifier_decorations,
    project_rule_decorations,
)
from impid.model import Decoration, DecorationKind, FactRecord, Occurrence, RenderPlan, Role
from impid.profiles import CategorySetting, Profile, resolve_display
from impid.render import compose, emit_stream, render_ansi, render_html
from impid.transforms import parameter_hints
from impid.glyphs import glyph_chars

_PROVENANCE_DESCRIPTIONS = {
    "expansion": "expanded from '{orig}' using its parameter names",
    "accessor-strip": "accessor prefix removed from '{orig}'",
    "abbreviation": "abbreviated from '{orig}'",
    "convention": "naming-convention form of '{orig}'",
}


def build_plan(source: str, file: str, profile: Profile,
               facts: Sequence[FactRecord] = (),
               recency: Optional[RecencyConfig] = None) -> RenderPlan:
    """Run every decoration source over one file and compose the plan."""
    table, occurrences = extract_occurrences(source)
    return build_plan_from_parsed(table, occurrences, source, file, profile,
                                  facts, recency)


def build_plan_from_parsed(table: SymbolTable, occurrences: list[Occurrence],
                           source: str, file: str, profile: Profile,
                           facts: Sequence[FactRecord] = (),
                           recency: Optional[RecencyConfig] = None) -> RenderPlan:
    """build_plan for a unit that is already parsed (service cache path)."""
    decorations: list[Decoration] = []
    glyph_map = profile.glyphs
    rules = profile.rules

    decls_by_identity: dict[str, DeclarationInfo] = {
        d.identity: d for d in table.declarations}

    # naming antipatterns at declarations
    for decl in table.declarations:
        findings = detect_naming_issues(decl.occurrence, decl.facts,
                                        rules.plural_exceptions,
                                        is_loop_index=decl.is_loop_index)
        decorations.extend(finding_decorations(findings, decl.occurrence, glyph_map))

    # declaration facts surfaced at declarations and usages
    for occ in occurrences:
        decl = decls_by_identity.get(occ.identity)
        if decl is None:
            continue
        decorations.extend(modifier_decorations(occ, decl.facts, rules, glyph_map))
        decorations.extend(annotation_decorations(occ, decl.facts, rules, glyph_map))

    decorations.extend(project_rule_decorations(table, occurrences, rules, glyph_map))
    decorations.extend(api_usage_decorations(table, occurrences, rules, glyph_map))

    if facts:
        if recency is None:
            recency = RecencyConfig(reference_time=datetime.now(timezone.utc))
        decorations.extend(facts_decorations(facts, occurrences, recency, glyph_map))

    decorations.extend(_display_decorations(table, occurrences, profile))
    decorations.extend(_hint_decorations(table, occurrences, profile))

    return compose(occurrences, decorations, profile, file=file, source=source)


def _display_decorations(table: SymbolTable, occurrences: list[Occurrence],
                         profile: Profile) -> list[Decoration]:
    """Replace-name decorations from alias/transform resolution, applied at
    every occurrence of each identity, plus shortened-name markers."""
    out: list[Decoration] = []
    decls = {d.identity: d for d in table.declarations}
    by_identity: dict[str, list[Occurrence]] = {}
    for occ in occurrences:
        by_identity.setdefault(occ.identity, []).append(occ)

    for identity, occs in by_identity.items():
        original = occs[0].name
        decl = decls.get(identity)
        resolved = resolve_display(identity, original, profile,
                                   decl.facts if decl else None)
        if resolved.display == original:
            continue
        if resolved.provenance == "alias":
            category = "alias"
            description = f"alias of {original} ({identity})"
        else:
            category = "transform"
            description = _PROVENANCE_DESCRIPTIONS[resolved.provenance].format(orig=original)
        marker = None
        if resolved.shortened:
            marker = glyph_chars(profile.glyphs, profile.transform.shortened_marker_glyph)
        for occ in occs:
            out.append(Decoration(
                target=occ.span, kind=DecorationKind.REPLACE_NAME,
                text=resolved.display, category=category,
                description=description, identity=identity))
            if marker:
                out.append(Decoration(
                    target=occ.span, kind=DecorationKind.SUFFIX_GLYPH, text=marker,
                    category="transform",
                    description=f"name has been shortened (from '{original}')",
                    identity=identity))
    return out


def _hint_decorations(table: SymbolTable, occurrences: list[Occurrence],
                      profile: Profile) -> list[Decoration]:
    """Inline parameter hints at call sites whose callee is declared in-unit."""
    if not profile.transform.parameter_hints_enabled:
        return []
    out: list[Decoration] = []
    decls = {d.identity: d for d in table.declarations}
    for call in table.calls:
        decl = decls.get(call.callee_identity)
        if decl is None or decl.facts.parameter_names is None:
            continue
        if not call.arg_spans:
            continue
        out.extend(parameter_hints(decl.facts.parameter_names, call.arg_spans,
                                   callee_name=call.callee_name,
                                   callee_identity=call.callee_identity))
    return out


def apply_view_overrides(profile: Profile, slider: Optional[int] = None,
                         category_overrides: Optional[dict[str, bool]] = None) -> Profile:
    """Per-invocation view settings (CLI flags / query params) layered over
    the profile without persisting."""
    out = profile
    if slider is not None:
        out = replace(out, slider=slider)
    if category_overrides:
        cats = dict(out.categories)
        for cid, enabled in category_overrides.items():
            current = cats.get(cid, CategorySetting())
            cats[cid] = CategorySetting(enabled=enabled, priority=current.priority)
        out = replace(out, categories=cats)
    return out


def load_facts_text(text: str, path_hint: str,
                    reference_time: datetime) -> tuple[list[FactRecord], list[str]]:
    """Facts come either as .facts.ndjson records or a .vcs.txt export."""
    if path_hint.endswith(".vcs.txt"):
        return derive_vcs_facts(text, reference_time)
    return parse_facts(text)


def render_output(source: str, plan: RenderPlan, fmt: str) -> str:
    if fmt == "json":
        return emit_stream(plan)
    if fmt == "ansi":
        return render_ansi(source, plan)
    if fmt == "html":
        return render_html(source, plan)
    raise ValueError(f"unknown format {fmt!r}")


__all__ = [
    "build_plan",
    "build_plan_from_parsed",
    "apply_view_overrides",
    "load_facts_text",
    "render_output",
]
