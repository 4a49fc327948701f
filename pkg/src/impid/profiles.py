"""Personal aliases and shareable name profiles.

A profile bundles aliases, category settings, the overload slider, the glyph
map and the transform/rule configuration. Profiles are immutable values;
set/remove/merge return new profiles. Saving is canonical (version first,
remaining keys sorted) so that save∘load∘save is byte-stable.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field, replace
from typing import Any, Iterable, Optional

from impid.glyphs import DEFAULT_GLYPH_MAP, is_codepoint_seq
from impid.javaparse.parser import SymbolTable
from impid.lint import GlyphRuleSet
from impid.model import EXT_PREFIX, ContextFacts, ModelError, parse_identity
from impid.transforms import (
    Abbreviation,
    Convention,
    TransformConfig,
    abbreviate,
    convert_convention,
    expand_method_name,
    strip_accessor_prefix,
)

PROFILE_VERSION = 1

KNOWN_CATEGORIES = (
    "alias", "transform", "naming", "modifiers", "annotations", "project",
    "api-usage", "history", "risk", "analysis", "process", "hints",
)

_IDENTIFIER_RE = re.compile(r"^[A-Za-z_$][A-Za-z0-9_$]*$")


class ProfileError(ValueError):
    """Malformed or unsupported profile content."""


@dataclass(frozen=True, slots=True)
class CategorySetting:
    enabled: bool = True
    priority: int = 1

    def __post_init__(self) -> None:
        if self.priority < 1:
            raise ProfileError("category priority must be >= 1")

    def to_dict(self) -> dict[str, Any]:
        return {"enabled": self.enabled, "priority": self.priority}

    @staticmethod
    def from_dict(d: dict[str, Any]) -> "CategorySetting":
        return CategorySetting(bool(d.get("enabled", True)), int(d.get("priority", 1)))


def default_categories() -> dict[str, CategorySetting]:
    return {c: CategorySetting() for c in KNOWN_CATEGORIES}


@dataclass(frozen=True, slots=True)
class AliasConflict:
    requested: str
    conflicting_identity: str
    scope_description: str

    def __str__(self) -> str:
        return (f"display name '{self.requested}' already names "
                f"{self.conflicting_identity} ({self.scope_description})")


class AliasConflictError(ValueError):
    def __init__(self, conflicts: list[AliasConflict]):
        super().__init__("; ".join(str(c) for c in conflicts))
        self.conflicts = conflicts


@dataclass(frozen=True, slots=True)
class Profile:
    name: str = "default"
    version: int = PROFILE_VERSION
    aliases: dict[str, str] = field(default_factory=dict)
    categories: dict[str, CategorySetting] = field(default_factory=default_categories)
    slider: int = 1
    glyphs: dict[str, str] = field(default_factory=lambda: dict(DEFAULT_GLYPH_MAP))
    transform: TransformConfig = TransformConfig()
    rules: GlyphRuleSet = GlyphRuleSet()
    extra: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.slider < 0:
            raise ProfileError("slider must be >= 0")
        for identity, display in self.aliases.items():
            parse_identity(identity)
            if not display or any(c.isspace() for c in display):
                raise ProfileError(f"alias for {identity} is empty or has whitespace")
        for key, seq in self.glyphs.items():
            if not is_codepoint_seq(seq):
                raise ProfileError(f"glyph {key} is not a codepoint sequence: {seq!r}")

    def category(self, cid: str) -> CategorySetting:
        return self.categories.get(cid, CategorySetting())


@dataclass(frozen=True, slots=True)
class ResolvedDisplay:
    display: str
    provenance: str  # alias | expansion | accessor-strip | abbreviation | convention | original
    shortened: bool = False


# ---------------------------------------------------------------------------
# Alias operations
# ---------------------------------------------------------------------------

def _display_of(identity: str, aliases: dict[str, str],
                table: Optional[SymbolTable]) -> str:
    if identity in aliases:
        return aliases[identity]
    if table is not None:
        decl = table.declaration_for_identity(identity)
        if decl is not None:
            return decl.occurrence.name
    return parse_identity(identity).display_name


def _scopes_overlap_keys(a: str, b: str) -> Optional[str]:
    """Key-derived visibility check (no symbol table): overlapping iff one
    scope path is a prefix of the other. Returns a human description."""
    pa = parse_identity(a).scope_path()
    pb = parse_identity(b).scope_path()
    shorter, longer = (pa, pb) if len(pa) <= len(pb) else (pb, pa)
    if longer[:len(shorter)] == shorter:
        return "scope " + ("/".join(longer) if longer else "whole unit")
    return None


def _scopes_overlap_table(a: str, b: str, table: SymbolTable) -> Optional[str]:
    da = table.declaration_for_identity(a)
    db = table.declaration_for_identity(b)
    if da is None or db is None:
        # at least one is external or out-of-unit: visible everywhere
        return _scopes_overlap_keys(a, b)
    chain_a = {s.id for s in table.scope_chain(da.scope_id)}
    chain_b = {s.id for s in table.scope_chain(db.scope_id)}
    if da.scope_id in chain_b or db.scope_id in chain_a:
        inner = db if da.scope_id in chain_b else da
        return f"scope of {inner.identity}"
    return None


def find_alias_conflicts(aliases: dict[str, str], identity: str, display: str,
                         table: Optional[SymbolTable]) -> list[AliasConflict]:
    """All identities that would display as `display` in a scope where
    `identity` is visible, after applying `aliases`."""
    conflicts: list[AliasConflict] = []
    others: set[str] = set(aliases)
    if table is not None:
        others.update(d.identity for d in table.declarations)
    for other in sorted(others):
        if other == identity:
            continue
        if _display_of(other, aliases, table) != display:
            continue
        overlap = (_scopes_overlap_table(identity, other, table)
                   if table is not None else _scopes_overlap_keys(identity, other))
        if overlap is not None:
            conflicts.append(AliasConflict(display, other, overlap))
    return conflicts


def set_alias(profile: Profile, identity: str, display: str,
              table: Optional[SymbolTable] = None) -> Profile:
    """Add/replace an alias; raises AliasConflictError when another visible
    identity would display identically, ProfileError on bad input."""
    if not _IDENTIFIER_RE.match(display):
        raise ProfileError(f"display name {display!r} is not a valid identifier")
    try:
        parse_identity(identity)
    except ModelError as exc:
        raise ProfileError(str(exc)) from None
    candidate = dict(profile.aliases)
    candidate[identity] = display
    conflicts = find_alias_conflicts(candidate, identity, display, table)
    if conflicts:
        raise AliasConflictError(conflicts)
    return replace(profile, aliases=candidate)


def remove_alias(profile: Profile, identity: str) -> Profile:
    if identity not in profile.aliases:
        return profile
    candidate = dict(profile.aliases)
    del candidate[identity]
    return replace(profile, aliases=candidate)


# ---------------------------------------------------------------------------
# Display resolution
# ---------------------------------------------------------------------------

def resolve_display(identity: str, original_name: str, profile: Profile,
                    facts: Optional[ContextFacts] = None) -> ResolvedDisplay:
    """Single display name for an identity, used at every occurrence.

    Precedence: alias > expansion > accessor-strip > abbreviation >
    convention > original; the first applicable transform wins and no
    second one is applied on top of it.
    """
    alias = profile.aliases.get(identity)
    if alias is not None:
        return ResolvedDisplay(alias, "alias")
    cfg = profile.transform
    is_method = facts is not None and facts.parameter_names is not None
    if cfg.expansion_enabled and is_method and facts.parameter_names:
        expanded = expand_method_name(original_name, facts.parameter_names)
        if expanded != original_name:
            return ResolvedDisplay(expanded, "expansion")
    if cfg.strip_accessor_prefixes and is_method:
        stripped = strip_accessor_prefix(original_name)
        if stripped != original_name:
            return ResolvedDisplay(stripped, "accessor-strip")
    if cfg.abbreviation is not Abbreviation.NONE:
        abbreviated, shortened = abbreviate(original_name, cfg.abbreviation,
                                            cfg.abbreviation_min_length)
        if shortened:
            return ResolvedDisplay(abbreviated, "abbreviation", shortened=True)
    if cfg.target_convention is not Convention.NONE:
        converted = convert_convention(original_name, cfg.target_convention)
        if converted != original_name:
            return ResolvedDisplay(converted, "convention")
    return ResolvedDisplay(original_name, "original")


# ---------------------------------------------------------------------------
# Persistence
# ---------------------------------------------------------------------------

_CORE_FIELDS = ("version", "name", "aliases", "categories", "glyphs", "rules",
                "slider", "transform")


def save_profile(profile: Profile) -> str:
    """Canonical text form: version first, remaining keys sorted, two-space
    indentation, UTF-8, trailing newline. load(save(p)) == p."""
    body: dict[str, Any] = {
        "name": profile.name,
        "aliases": {k: profile.aliases[k] for k in sorted(profile.aliases)},
        "categories": {k: profile.categories[k].to_dict() for k in sorted(profile.categories)},
        "glyphs": {k: profile.glyphs[k] for k in sorted(profile.glyphs)},
        "rules": profile.rules.to_dict(),
        "slider": profile.slider,
        "transform": profile.transform.to_dict(),
    }
    for k, v in profile.extra.items():
        body.setdefault(k, v)
    doc: dict[str, Any] = {"version": profile.version}
    for k in sorted(body):
        doc[k] = body[k]
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def load_profile(text: str) -> Profile:
    """Parse a profile file; unknown top-level fields are preserved opaquely."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProfileError(f"malformed profile at line {exc.lineno}, col {exc.colno}: "
                           f"{exc.msg}") from None
    if not isinstance(doc, dict):
        raise ProfileError("profile must be an object")
    version = doc.get("version")
    if version != PROFILE_VERSION:
        raise ProfileError(f"unsupported profile version {version!r} "
                           f"(supported: {PROFILE_VERSION})")
    try:
        if "categories" in doc:
            categories = {k: CategorySetting.from_dict(v)
                          for k, v in doc["categories"].items()}
        else:
            categories = default_categories()
        profile = Profile(
            name=str(doc.get("name", "default")),
            version=version,
            aliases=dict(doc.get("aliases", {})),
            categories=categories,
            slider=int(doc.get("slider", 1)),
            glyphs=dict(doc.get("glyphs", DEFAULT_GLYPH_MAP)),
            transform=TransformConfig.from_dict(doc.get("transform", {})),
            rules=GlyphRuleSet.from_dict(doc.get("rules", {})),
            extra={k: v for k, v in doc.items() if k not in _CORE_FIELDS},
        )
    except (ModelError, ValueError, KeyError, TypeError) as exc:
        raise ProfileError(f"bad profile content: {exc}") from None
    return profile


def merge_profiles(base: Profile, shared: Profile) -> tuple[Profile, list[AliasConflict]]:
    """Overlay shared aliases/categories onto base; base wins per identity.
    Shared entries whose display name would collide in some shared scope are
    dropped and reported."""
    merged_aliases = dict(base.aliases)
    conflicts: list[AliasConflict] = []
    for identity in sorted(shared.aliases):
        display = shared.aliases[identity]
        if identity in merged_aliases:
            continue  # base wins
        found = find_alias_conflicts({**merged_aliases, identity: display},
                                     identity, display, table=None)
        if found:
            conflicts.extend(found)
            continue
        merged_aliases[identity] = display
    merged_categories = dict(shared.categories)
    merged_categories.update(base.categories)
    merged = replace(base, aliases=merged_aliases, categories=merged_categories)
    return merged, conflicts


__all__ = [
    "PROFILE_VERSION",
    "KNOWN_CATEGORIES",
    "ProfileError",
    "CategorySetting",
    "default_categories",
    "AliasConflict",
    "AliasConflictError",
    "Profile",
    "ResolvedDisplay",
    "find_alias_conflicts",
    "set_alias",
    "remove_alias",
    "resolve_display",
    "save_profile",
    "load_profile",
    "merge_profiles",
]
