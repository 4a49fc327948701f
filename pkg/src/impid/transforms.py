"""Automated display-name transformations.

Word splitting, naming-convention conversion, abbreviation, accessor-prefix
stripping, method-name expansion, and inline parameter hints. All functions
are pure; TransformConfig picks which ones a profile applies.
"""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import Any, Optional, Sequence

from impid.model import Decoration, DecorationKind, Span


class Convention(str, enum.Enum):
    CAMEL = "camelCase"
    SNAKE = "snake_case"
    NONE = "none"


class Abbreviation(str, enum.Enum):
    INITIALISM_KEEP_LAST = "initialism-keep-last"
    PER_WORD_PREFIX_3 = "per-word-prefix-3"
    NONE = "none"


@dataclass(frozen=True, slots=True)
class TransformConfig:
    target_convention: Convention = Convention.NONE
    abbreviation: Abbreviation = Abbreviation.NONE
    abbreviation_min_length: int = 15
    strip_accessor_prefixes: bool = False
    expansion_enabled: bool = False
    parameter_hints_enabled: bool = False
    shortened_marker_glyph: str = "transform.shortened"

    def __post_init__(self) -> None:
        if self.abbreviation_min_length < 1:
            raise ValueError("abbreviation min length must be >= 1")

    def to_dict(self) -> dict[str, Any]:
        return {
            "targetConvention": self.target_convention.value,
            "abbreviation": self.abbreviation.value,
            "abbreviationMinLength": self.abbreviation_min_length,
            "stripAccessorPrefixes": self.strip_accessor_prefixes,
            "expansionEnabled": self.expansion_enabled,
            "parameterHintsEnabled": self.parameter_hints_enabled,
            "shortenedMarkerGlyph": self.shortened_marker_glyph,
        }

    @staticmethod
    def from_dict(d: dict[str, Any]) -> "TransformConfig":
        return TransformConfig(
            target_convention=Convention(d.get("targetConvention", "none")),
            abbreviation=Abbreviation(d.get("abbreviation", "none")),
            abbreviation_min_length=int(d.get("abbreviationMinLength", 15)),
            strip_accessor_prefixes=bool(d.get("stripAccessorPrefixes", False)),
            expansion_enabled=bool(d.get("expansionEnabled", False)),
            parameter_hints_enabled=bool(d.get("parameterHintsEnabled", False)),
            shortened_marker_glyph=str(d.get("shortenedMarkerGlyph", "transform.shortened")),
        )


_WORD_RE = re.compile(
    r"""
      [0-9]+                      # digit runs are their own words
    | [A-Z]+(?![a-z0-9])          # acronym run not followed by lowercase
    | [A-Z]+(?=[A-Z][a-z])        # acronym run, last capital starts next word
    | [A-Z][a-z]*                 # Capitalized word
    | [a-z]+                      # lowercase word
    """,
    re.VERBOSE,
)


def split_words(name: str) -> list[str]:
    """Split an identifier into words at case transitions, underscores and
    digit runs; an uppercase run followed by lowercase keeps its last capital
    for the next word (parseHTTPResponse -> parse, HTTP, Response)."""
    words = _WORD_RE.findall(name)
    return words if words else [name]


def convert_convention(name: str, target: Convention) -> str:
    if target is Convention.NONE:
        return name
    words = split_words(name)
    if target is Convention.SNAKE:
        return "_".join(w.lower() for w in words)
    head, *rest = words
    return head.lower() + "".join(w[:1].upper() + w[1:].lower() for w in rest)


# Irregular per-word abbreviations: words whose common short form is not a
# plain 3-character prefix (Exception is conventionally shortened to "Exp").
PREFIX_OVERRIDES = {"exception": "Exp"}


def abbreviate(name: str, strategy: Abbreviation, min_length: int = 15) -> tuple[str, bool]:
    """Shorten a long name; returns (display, shortened). Applies only when
    len(name) >= min_length."""
    if strategy is Abbreviation.NONE or len(name) < min_length:
        return name, False
    words = split_words(name)
    if strategy is Abbreviation.INITIALISM_KEEP_LAST:
        if len(words) < 2:
            return name, False
        out = "".join(w[0] for w in words[:-1]) + words[-1]
    else:
        parts = []
        for w in words:
            override = PREFIX_OVERRIDES.get(w.lower())
            if override is not None:
                parts.append(override if w[:1].isupper() else override.lower())
            else:
                parts.append(w[:3])
        out = "".join(parts)
    if len(out) >= len(name):
        return name, False
    return out, True


_GETTER_RE = re.compile(r"^get([A-Z])(.*)$")


def strip_accessor_prefix(name: str) -> str:
    """getUsers -> users; anything not matching get+Upper is returned as is.
    Callers apply this to method names only."""
    m = _GETTER_RE.match(name)
    if not m:
        return name
    return m.group(1).lower() + m.group(2)


def expand_method_name(name: str, parameter_names: Sequence[str]) -> str:
    """Append parameter information: getUsers + [status] -> getUsersByStatus.
    No-op when the name already mentions every parameter word."""
    if not parameter_names:
        return name
    lowered = name.lower()
    if all(p.lower() in lowered for p in parameter_names):
        return name
    joined = "And".join(p[:1].upper() + p[1:] for p in parameter_names)
    return f"{name}By{joined}"


def parameter_hints(callee_parameter_names: Sequence[str],
                    call_arg_spans: Sequence[Span],
                    callee_name: str = "",
                    callee_identity: Optional[str] = None,
                    priority: int = 1) -> list[Decoration]:
    """One inline hint `<param>:` anchored at each argument start;
    count = min(#params, #args)."""
    hints = []
    for pname, span in zip(callee_parameter_names, call_arg_spans):
        hints.append(Decoration(
            target=span,
            kind=DecorationKind.INLINE_HINT,
            text=f"{pname}:",
            category="hints",
            priority=priority,
            description=f"parameter '{pname}' of {callee_name or 'callee'}",
            identity=callee_identity,
        ))
    return hints


__all__ = [
    "Convention",
    "Abbreviation",
    "TransformConfig",
    "PREFIX_OVERRIDES",
    "split_words",
    "convert_convention",
    "abbreviate",
    "strip_accessor_prefix",
    "expand_method_name",
    "parameter_hints",
]
