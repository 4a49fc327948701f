"""Naming-antipattern detection and declaration-fact glyph rules.

These rules only ever append decorations; occurrence spans and names are
never altered. Usages inherit the glyphs of their declaration, which is the
point: facts visible only at the declaration get surfaced where the name is
used.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any, Iterable, Optional

from impid.glyphs import glyph_chars
from impid.javaparse.parser import DeclarationInfo, SymbolTable
from impid.model import (
    ContextFacts,
    Decoration,
    DecorationKind,
    Finding,
    Occurrence,
    RuleId,
    SymbolKind,
)
from impid.transforms import split_words, strip_accessor_prefix

logger = logging.getLogger(__name__)

DEFAULT_PLURAL_EXCEPTIONS = ("status", "class", "address", "bus", "alias")

LOOP_INDEX_NAMES = frozenset({"i", "j", "k"})

FINDING_GLYPH_KEYS = {
    RuleId.SINGULAR_HOLDS_MANY: "naming.singular-holds-many",
    RuleId.PLURAL_HOLDS_ONE: "naming.plural-holds-one",
    RuleId.SINGLE_LETTER: "naming.single-letter",
    RuleId.GETTER_NO_RETURN: "naming.getter-no-return",
}

DEFAULT_MODIFIER_GLYPHS = {
    "synchronized": "modifier.synchronized",
    "private": "modifier.private",
    "public": "modifier.public",
}


@dataclass(frozen=True, slots=True)
class AnnotationRule:
    annotation: str        # simple annotation name, or '*'
    argument: str          # substring the raw argument text must contain, or '*'
    glyph: str             # semantic glyph key
    description: str

    def matches(self, name: str, arg_text: str) -> bool:
        if self.annotation != "*" and self.annotation != name:
            return False
        return self.argument == "*" or self.argument in arg_text


@dataclass(frozen=True, slots=True)
class ProjectRule:
    predicate: str         # field-of-type | class-implements | method-annotated
    argument: str          # literal name or '*'
    glyph: str
    description: str


@dataclass(frozen=True, slots=True)
class PairingRule:
    open_pattern: str      # e.g. "new PrintWriter", or '*'
    close_pattern: str     # member-call name, e.g. "close"
    open_glyph: str
    close_glyph: str
    description: str = "paired API usage"


DEFAULT_ANNOTATION_RULES = (
    AnnotationRule("TransactionAttribute", "REQUIRES_NEW", "annotation.tx-requires-new",
                   "transaction attribute REQUIRES_NEW"),
    AnnotationRule("TransactionAttribute", "NOT_SUPPORTED", "annotation.tx-not-supported",
                   "transaction attribute NOT_SUPPORTED"),
    AnnotationRule("TransactionAttribute", "REQUIRES", "annotation.tx-requires",
                   "transaction attribute REQUIRES"),
)

DEFAULT_PAIRING_RULES = (
    PairingRule("new PrintWriter", "close", "api.open-reminder", "api.close-reminder",
                "PrintWriter needs to be closed after use"),
)


@dataclass(frozen=True, slots=True)
class GlyphRuleSet:
    modifier_glyphs: dict[str, str] = field(default_factory=lambda: dict(DEFAULT_MODIFIER_GLYPHS))
    annotation_rules: tuple[AnnotationRule, ...] = DEFAULT_ANNOTATION_RULES
    project_rules: tuple[ProjectRule, ...] = ()
    pairing_rules: tuple[PairingRule, ...] = DEFAULT_PAIRING_RULES
    plural_exceptions: tuple[str, ...] = DEFAULT_PLURAL_EXCEPTIONS

    def to_dict(self) -> dict[str, Any]:
        return {
            "modifierGlyphs": dict(sorted(self.modifier_glyphs.items())),
            "annotationRules": [
                {"annotation": r.annotation, "argument": r.argument,
                 "glyph": r.glyph, "description": r.description}
                for r in self.annotation_rules
            ],
            "projectRules": [
                {"predicate": r.predicate, "argument": r.argument,
                 "glyph": r.glyph, "description": r.description}
                for r in self.project_rules
            ],
            "pairingRules": [
                {"open": r.open_pattern, "close": r.close_pattern,
                 "openGlyph": r.open_glyph, "closeGlyph": r.close_glyph,
                 "description": r.description}
                for r in self.pairing_rules
            ],
            "pluralExceptions": list(self.plural_exceptions),
        }

    @staticmethod
    def from_dict(d: dict[str, Any]) -> "GlyphRuleSet":
        annotation_rules = DEFAULT_ANNOTATION_RULES
        if "annotationRules" in d:
            annotation_rules = tuple(
                AnnotationRule(r["annotation"], r["argument"], r["glyph"], r["description"])
                for r in d["annotationRules"])
        pairing_rules = DEFAULT_PAIRING_RULES
        if "pairingRules" in d:
            pairing_rules = tuple(
                PairingRule(r["open"], r["close"], r["openGlyph"], r["closeGlyph"],
                            r.get("description", "paired API usage"))
                for r in d["pairingRules"])
        return GlyphRuleSet(
            modifier_glyphs=dict(d.get("modifierGlyphs", DEFAULT_MODIFIER_GLYPHS)),
            annotation_rules=annotation_rules,
            project_rules=tuple(
                ProjectRule(r["predicate"], r["argument"], r["glyph"], r["description"])
                for r in d.get("projectRules", ())
            ),
            pairing_rules=pairing_rules,
            plural_exceptions=tuple(d.get("pluralExceptions", DEFAULT_PLURAL_EXCEPTIONS)),
        )


def _is_plural(name: str, exceptions: Iterable[str]) -> bool:
    last = split_words(name)[-1].lower()
    return last.endswith("s") and last not in set(exceptions)


_VALUE_KINDS = (SymbolKind.FIELD, SymbolKind.LOCAL, SymbolKind.PARAMETER)


def detect_naming_issues(occurrence: Occurrence, facts: ContextFacts,
                         plural_exceptions: Iterable[str] = DEFAULT_PLURAL_EXCEPTIONS,
                         *, is_loop_index: bool = False) -> list[Finding]:
    """Closed set of naming antipattern checks for one declaration."""
    findings: list[Finding] = []
    name = occurrence.name
    kind = occurrence.kind
    if kind in _VALUE_KINDS and facts.is_container and not _is_plural(name, plural_exceptions):
        findings.append(Finding(
            RuleId.SINGULAR_HOLDS_MANY, occurrence.identity,
            f"'{name}' has a singular name but holds many values ({facts.declared_type})"))
    if kind in _VALUE_KINDS and not facts.is_container and _is_plural(name, plural_exceptions):
        findings.append(Finding(
            RuleId.PLURAL_HOLDS_ONE, occurrence.identity,
            f"'{name}' has a plural name but holds a single value ({facts.declared_type})"))
    if len(name) == 1 and not (is_loop_index and name in LOOP_INDEX_NAMES):
        findings.append(Finding(
            RuleId.SINGLE_LETTER, occurrence.identity,
            f"'{name}' is a single letter and lacks meaningful naming"))
    if kind is SymbolKind.METHOD and facts.return_type == "void" \
            and name != strip_accessor_prefix(name):
        findings.append(Finding(
            RuleId.GETTER_NO_RETURN, occurrence.identity,
            f"'{name}' looks like a getter but does not return a value"))
    return findings


def finding_decorations(findings: Iterable[Finding], declaration: Occurrence,
                        glyph_map: dict[str, str], priority: int = 1) -> list[Decoration]:
    """One suffix glyph per finding at the declaration span."""
    out = []
    for f in findings:
        key = FINDING_GLYPH_KEYS[f.rule]
        chars = glyph_chars(glyph_map, key)
        if chars is None:
            logger.warning("no glyph mapped for %s; finding %s not decorated", key, f.rule.value)
            continue
        out.append(Decoration(
            target=declaration.span, kind=DecorationKind.SUFFIX_GLYPH, text=chars,
            category="naming", priority=priority, description=f.message,
            identity=f.identity))
    return out


def modifier_decorations(occurrence: Occurrence, declaration_facts: ContextFacts,
                         rules: GlyphRuleSet, glyph_map: dict[str, str],
                         priority: int = 1) -> list[Decoration]:
    """Suffix glyph per mapped modifier; usages inherit declaration modifiers."""
    out = []
    for mod in sorted(declaration_facts.modifiers):
        key = rules.modifier_glyphs.get(mod)
        if key is None:
            continue
        chars = glyph_chars(glyph_map, key)
        if chars is None:
            logger.warning("modifier glyph key %s missing from glyph map", key)
            continue
        out.append(Decoration(
            target=occurrence.span, kind=DecorationKind.SUFFIX_GLYPH, text=chars,
            category="modifiers", priority=priority,
            description=f"has the {mod} modifier", identity=occurrence.identity))
    return out


def annotation_decorations(occurrence: Occurrence, declaration_facts: ContextFacts,
                           rules: GlyphRuleSet, glyph_map: dict[str, str],
                           priority: int = 1) -> list[Decoration]:
    """Suffix glyph for annotation rules matching the declaration's annotations.

    Rules are checked in order; the first matching rule per annotation wins,
    so a REQUIRES_NEW argument does not additionally fire a REQUIRES rule.
    """
    out = []
    for anno_name, arg_text in declaration_facts.annotations:
        for rule in rules.annotation_rules:
            if not rule.matches(anno_name, arg_text):
                continue
            chars = glyph_chars(glyph_map, rule.glyph)
            if chars is None:
                logger.warning("annotation glyph key %s missing from glyph map", rule.glyph)
                break
            out.append(Decoration(
                target=occurrence.span, kind=DecorationKind.SUFFIX_GLYPH, text=chars,
                category="annotations", priority=priority,
                description=rule.description, identity=occurrence.identity))
            break
    return out


def _base_type_name(declared_type: Optional[str]) -> str:
    if not declared_type:
        return ""
    return declared_type.split("<", 1)[0].split("[", 1)[0].rsplit(".", 1)[-1]


def _rule_matches_name(pattern: str, name: str) -> bool:
    return pattern == "*" or pattern == name


def project_rule_decorations(table: SymbolTable, occurrences: list[Occurrence],
                             rules: GlyphRuleSet, glyph_map: dict[str, str],
                             priority: int = 1) -> list[Decoration]:
    """Project-specific predicates: field types, implemented interfaces,
    method annotations. Class/method predicates decorate usages too."""
    out: list[Decoration] = []
    by_identity: dict[str, list[Occurrence]] = {}
    for occ in occurrences:
        by_identity.setdefault(occ.identity, []).append(occ)

    for rule in rules.project_rules:
        chars = glyph_chars(glyph_map, rule.glyph)
        if chars is None:
            logger.warning("project glyph key %s missing from glyph map", rule.glyph)
            continue
        for decl in table.declarations:
            occ = decl.occurrence
            matched = False
            at_usages = False
            if rule.predicate == "field-of-type" and occ.kind is SymbolKind.FIELD:
                matched = _rule_matches_name(rule.argument, _base_type_name(decl.facts.declared_type))
            elif rule.predicate == "class-implements" and occ.kind in (
                    SymbolKind.CLASS, SymbolKind.INTERFACE, SymbolKind.ENUM):
                matched = any(_rule_matches_name(rule.argument, s) for s in decl.facts.supertypes)
                at_usages = True
            elif rule.predicate == "method-annotated" and occ.kind is SymbolKind.METHOD:
                matched = any(_rule_matches_name(rule.argument, a) for a, _ in decl.facts.annotations)
                at_usages = True
            if not matched:
                continue
            targets = by_identity.get(decl.identity, []) if at_usages else [
                o for o in by_identity.get(decl.identity, []) if o.role.value == "declaration"]
            for t in targets:
                out.append(Decoration(
                    target=t.span, kind=DecorationKind.SUFFIX_GLYPH, text=chars,
                    category="project", priority=priority,
                    description=rule.description, identity=decl.identity))
    return out


def api_usage_decorations(table: SymbolTable, occurrences: list[Occurrence],
                          rules: GlyphRuleSet, glyph_map: dict[str, str],
                          priority: int = 1) -> list[Decoration]:
    """Open/close usage reminders: the variable initialized by an open-pattern
    match gets the open glyph at its declaration; close-pattern calls on that
    variable get the close glyph."""
    out: list[Decoration] = []
    for rule in rules.pairing_rules:
        open_chars = glyph_chars(glyph_map, rule.open_glyph)
        close_chars = glyph_chars(glyph_map, rule.close_glyph)
        if open_chars is None or close_chars is None:
            logger.warning("pairing rule %s/%s has unmapped glyphs",
                           rule.open_glyph, rule.close_glyph)
            continue
        opened: set[str] = set()
        for decl in table.declarations:
            if decl.new_expr is None:
                continue
            if rule.open_pattern != "*" and decl.new_expr != rule.open_pattern:
                continue
            opened.add(decl.identity)
            out.append(Decoration(
                target=decl.occurrence.span, kind=DecorationKind.SUFFIX_GLYPH,
                text=open_chars, category="api-usage", priority=priority,
                description=rule.description, identity=decl.identity))
        if not opened:
            continue
        for call in table.member_calls:
            if call.receiver_identity not in opened:
                continue
            if not _rule_matches_name(rule.close_pattern, call.member_name):
                continue
            occ = occurrences[call.occurrence_index]
            out.append(Decoration(
                target=occ.span, kind=DecorationKind.SUFFIX_GLYPH, text=close_chars,
                category="api-usage", priority=priority,
                description=f"closes '{_receiver_name(table, call.receiver_identity)}'",
                identity=occ.identity))
    return out


def _receiver_name(table: SymbolTable, identity: str) -> str:
    decl = table.declaration_for_identity(identity)
    return decl.occurrence.name if decl else identity


__all__ = [
    "DEFAULT_PLURAL_EXCEPTIONS",
    "DEFAULT_MODIFIER_GLYPHS",
    "DEFAULT_ANNOTATION_RULES",
    "DEFAULT_PAIRING_RULES",
    "FINDING_GLYPH_KEYS",
    "LOOP_INDEX_NAMES",
    "AnnotationRule",
    "ProjectRule",
    "PairingRule",
    "GlyphRuleSet",
    "detect_naming_issues",
    "finding_decorations",
    "modifier_decorations",
    "annotation_decorations",
    "project_rule_decorations",
    "api_usage_decorations",
]
