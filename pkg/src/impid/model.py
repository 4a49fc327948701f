"""Shared vocabulary types: identities, occurrences, decorations, facts, profiles.

Everything here is an immutable value object; operations elsewhere build new
values instead of mutating. Each type has a `to_dict`/`from_dict` pair whose
dict form is the canonical serialization used by profile files and the
decoration stream.
"""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from typing import Any, Optional


class ModelError(ValueError):
    """Raised when a value violates a model invariant during construction/parse."""


# ---------------------------------------------------------------------------
# Spans and occurrences
# ---------------------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class Span:
    """Byte range [start, end) in a source file; line/col are derived, 1-based."""

    start: int
    end: int
    line: int = 1
    col: int = 1

    def __post_init__(self) -> None:
        if self.start < 0 or self.end <= self.start:
            raise ModelError(f"invalid span [{self.start},{self.end})")

    def to_dict(self) -> dict[str, int]:
        return {"start": self.start, "end": self.end, "line": self.line, "col": self.col}

    @staticmethod
    def from_dict(d: dict[str, Any]) -> "Span":
        return Span(int(d["start"]), int(d["end"]), int(d.get("line", 1)), int(d.get("col", 1)))


class Role(str, enum.Enum):
    DECLARATION = "declaration"
    USAGE = "usage"


class SymbolKind(str, enum.Enum):
    CLASS = "class"
    INTERFACE = "interface"
    ENUM = "enum"
    METHOD = "method"
    FIELD = "field"
    PARAMETER = "parameter"
    LOCAL = "local"


@dataclass(frozen=True, slots=True)
class Occurrence:
    """One textual appearance of an identity: the `name` equals the source slice."""

    identity: str
    span: Span
    role: Role
    kind: SymbolKind
    name: str

    def to_dict(self) -> dict[str, Any]:
        return {
            "identity": self.identity,
            "span": self.span.to_dict(),
            "role": self.role.value,
            "kind": self.kind.value,
            "name": self.name,
        }

    @staticmethod
    def from_dict(d: dict[str, Any]) -> "Occurrence":
        return Occurrence(
            identity=str(d["identity"]),
            span=Span.from_dict(d["span"]),
            role=Role(d["role"]),
            kind=SymbolKind(d["kind"]),
            name=str(d["name"]),
        )


@dataclass(frozen=True, slots=True)
class ContextFacts:
    """Declaration-site facts surfaced at usages (modifiers, annotations, types).

    `parameter_names`/`return_type` are populated for methods only;
    `supertypes` (extends + implements names) for type declarations only.
    """

    modifiers: frozenset[str] = frozenset()
    annotations: tuple[tuple[str, str], ...] = ()
    declared_type: Optional[str] = None
    is_container: bool = False
    parameter_names: Optional[tuple[str, ...]] = None
    return_type: Optional[str] = None
    supertypes: tuple[str, ...] = ()

    def to_dict(self) -> dict[str, Any]:
        return {
            "modifiers": sorted(self.modifiers),
            "annotations": [list(a) for a in self.annotations],
            "declaredType": self.declared_type,
            "isContainer": self.is_container,
            "parameterNames": list(self.parameter_names) if self.parameter_names is not None else None,
            "returnType": self.return_type,
            "supertypes": list(self.supertypes),
        }

    @staticmethod
    def from_dict(d: dict[str, Any]) -> "ContextFacts":
        params = d.get("parameterNames")
        return ContextFacts(
            modifiers=frozenset(d.get("modifiers", ())),
            annotations=tuple((str(n), str(a)) for n, a in d.get("annotations", ())),
            declared_type=d.get("declaredType"),
            is_container=bool(d.get("isContainer", False)),
            parameter_names=tuple(params) if params is not None else None,
            return_type=d.get("returnType"),
            supertypes=tuple(d.get("supertypes", ())),
        )


MODIFIER_SET = frozenset(
    {"public", "private", "protected", "static", "final", "synchronized", "abstract"}
)


# ---------------------------------------------------------------------------
# Identity keys
# ---------------------------------------------------------------------------
#
# Grammar:
#   pkg.Class                          type
#   pkg.Class#field                    field / enum constant
#   pkg.Class#method(arity)            method (…@n appended only for duplicate
#                                      name+arity overloads, n >= 2)
#   pkg.Class#method(arity)$name@ord   parameter / local (ord >= 1)
#   ext:dotted.name                    unresolved external reference

EXT_PREFIX = "ext:"

_NAME = r"[A-Za-z_$<>][A-Za-z0-9_$<>]*"
_TYPE_RE = re.compile(rf"^(?:{_NAME}\.)*{_NAME}$")
_MEMBER_RE = re.compile(
    rf"^(?P<type>(?:{_NAME}\.)*{_NAME})#(?P<member>{_NAME})"
    rf"(?:\((?P<arity>\d+)\)(?:@(?P<dup>\d+))?(?:\$(?P<var>{_NAME})@(?P<ord>\d+))?)?$"
)


@dataclass(frozen=True, slots=True)
class ParsedIdentity:
    """Structured view of an identity key; `raw` is the canonical text form."""

    raw: str
    kind: str  # "type" | "field" | "method" | "var" | "ext"
    type_name: Optional[str] = None
    member: Optional[str] = None
    arity: Optional[int] = None
    var_name: Optional[str] = None
    ordinal: Optional[int] = None

    @property
    def display_name(self) -> str:
        """The simple name this identity renders as when undecorated."""
        if self.kind == "ext":
            return self.raw[len(EXT_PREFIX):].rsplit(".", 1)[-1]
        if self.kind == "var":
            assert self.var_name is not None
            return self.var_name
        if self.kind in ("field", "method"):
            assert self.member is not None
            return self.member
        assert self.type_name is not None
        return self.type_name.rsplit(".", 1)[-1]

    def scope_path(self) -> tuple[str, ...]:
        """Nested lexical path derived from the key, innermost last.

        Used for conflict checks when no symbol table is at hand: two
        identities can collide only if one path is a prefix of the other.
        External identities get the empty path (visible everywhere).
        """
        if self.kind in ("ext", "type"):
            # Externals and type names are treated as visible unit-wide.
            return ()
        assert self.type_name is not None
        if self.kind in ("field", "method"):
            return (self.type_name,)
        return (self.type_name, f"{self.member}({self.arity})")


def parse_identity(key: str) -> ParsedIdentity:
    """Parse a canonical identity key; raises ModelError on bad grammar."""
    if not key or any(c.isspace() for c in key):
        raise ModelError(f"identity key may not be empty or contain whitespace: {key!r}")
    if key.startswith(EXT_PREFIX):
        rest = key[len(EXT_PREFIX):]
        if not rest or not _TYPE_RE.match(rest):
            raise ModelError(f"bad external identity: {key!r}")
        return ParsedIdentity(raw=key, kind="ext")
    if "#" not in key:
        if not _TYPE_RE.match(key):
            raise ModelError(f"bad type identity: {key!r}")
        return ParsedIdentity(raw=key, kind="type", type_name=key)
    m = _MEMBER_RE.match(key)
    if not m:
        raise ModelError(f"bad identity key: {key!r}")
    type_name = m.group("type")
    member = m.group("member")
    if m.group("arity") is None:
        return ParsedIdentity(raw=key, kind="field", type_name=type_name, member=member)
    arity = int(m.group("arity"))
    if m.group("var") is not None:
        return ParsedIdentity(
            raw=key,
            kind="var",
            type_name=type_name,
            member=member,
            arity=arity,
            var_name=m.group("var"),
            ordinal=int(m.group("ord")),
        )
    return ParsedIdentity(raw=key, kind="method", type_name=type_name, member=member, arity=arity)


def is_valid_identity(key: str) -> bool:
    try:
        parse_identity(key)
        return True
    except ModelError:
        return False


# ---------------------------------------------------------------------------
# Decorations and findings
# ---------------------------------------------------------------------------

class DecorationKind(str, enum.Enum):
    REPLACE_NAME = "replace-name"
    PREFIX_GLYPH = "prefix-glyph"
    SUFFIX_GLYPH = "suffix-glyph"
    INLINE_HINT = "inline-hint"


# Sort rank when several decorations target the same start offset.
KIND_ORDER = {
    DecorationKind.REPLACE_NAME: 0,
    DecorationKind.PREFIX_GLYPH: 1,
    DecorationKind.SUFFIX_GLYPH: 2,
    DecorationKind.INLINE_HINT: 3,
}


@dataclass(frozen=True, slots=True)
class Decoration:
    """A display instruction bound to a span; never applied to stored source."""

    target: Span
    kind: DecorationKind
    text: str
    category: str
    description: str
    priority: int = 1
    identity: Optional[str] = None

    def __post_init__(self) -> None:
        if self.kind is DecorationKind.REPLACE_NAME and not self.text:
            raise ModelError("replace-name decoration needs non-empty text")
        if not self.description:
            raise ModelError("decoration needs a non-empty description")
        if self.priority < 1:
            raise ModelError("decoration priority must be >= 1")

    def to_dict(self) -> dict[str, Any]:
        return {
            "span": {"start": self.target.start, "end": self.target.end},
            "line": self.target.line,
            "col": self.target.col,
            "kind": self.kind.value,
            "text": self.text,
            "category": self.category,
            "priority": self.priority,
            "description": self.description,
            "identity": self.identity,
        }

    @staticmethod
    def from_dict(d: dict[str, Any]) -> "Decoration":
        return Decoration(
            target=Span(
                int(d["span"]["start"]),
                int(d["span"]["end"]),
                int(d.get("line", 1)),
                int(d.get("col", 1)),
            ),
            kind=DecorationKind(d["kind"]),
            text=str(d["text"]),
            category=str(d["category"]),
            priority=int(d.get("priority", 1)),
            description=str(d["description"]),
            identity=d.get("identity"),
        )


class RuleId(str, enum.Enum):
    SINGULAR_HOLDS_MANY = "SINGULAR_HOLDS_MANY"
    PLURAL_HOLDS_ONE = "PLURAL_HOLDS_ONE"
    SINGLE_LETTER = "SINGLE_LETTER"
    GETTER_NO_RETURN = "GETTER_NO_RETURN"


@dataclass(frozen=True, slots=True)
class Finding:
    rule: RuleId
    identity: str
    message: str

    def __post_init__(self) -> None:
        if not self.message:
            raise ModelError("finding message must be non-empty")

    def to_dict(self) -> dict[str, Any]:
        return {"rule": self.rule.value, "identity": self.identity, "message": self.message}

    @staticmethod
    def from_dict(d: dict[str, Any]) -> "Finding":
        return Finding(RuleId(d["rule"]), str(d["identity"]), str(d["message"]))


# ---------------------------------------------------------------------------
# External facts
# ---------------------------------------------------------------------------

class FactType(str, enum.Enum):
    RENAMED = "renamed"
    METHOD_ADDED = "method-added"
    METHOD_CHANGED = "method-changed"
    LAST_AUTHOR = "last-author"
    RISKY_CALL = "risky-call"
    FINDING = "finding"
    CHANGE_STATUS = "change-status"


CHANGE_STATUSES = ("inspection-pending", "needs-change", "no-change", "implemented")


def parse_timestamp(text: str) -> datetime:
    """Parse an ISO-8601 UTC timestamp; `Z` suffix accepted."""
    try:
        ts = datetime.fromisoformat(text.replace("Z", "+00:00"))
    except ValueError as exc:
        raise ModelError(f"bad timestamp {text!r}: {exc}") from None
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    return ts.astimezone(timezone.utc)


def format_timestamp(ts: datetime) -> str:
    return ts.astimezone(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


@dataclass(frozen=True, slots=True)
class FactRecord:
    """One externally ingested fact, keyed to an identity or a byte span."""

    type: FactType
    identity: Optional[str] = None
    span: Optional[tuple[int, int]] = None
    timestamp: Optional[datetime] = None
    author: Optional[str] = None
    avatar: Optional[str] = None  # codepoint sequence, e.g. "U+1F467 U+1F3FE"
    previous: Optional[str] = None
    severity: Optional[str] = None
    message: Optional[str] = None
    status: Optional[str] = None
    rule: Optional[str] = None

    def __post_init__(self) -> None:
        if self.identity is None and self.span is None:
            raise ModelError(f"{self.type.value} fact needs an identity or span target")
        if self.type is FactType.CHANGE_STATUS and self.status not in CHANGE_STATUSES:
            raise ModelError(f"bad change status {self.status!r}")

    def to_dict(self) -> dict[str, Any]:
        d: dict[str, Any] = {"type": self.type.value}
        if self.identity is not None:
            d["identity"] = self.identity
        if self.span is not None:
            d["span"] = {"start": self.span[0], "end": self.span[1]}
        if self.timestamp is not None:
            d["timestamp"] = format_timestamp(self.timestamp)
        for key in ("author", "avatar", "previous", "severity", "message", "status", "rule"):
            val = getattr(self, key)
            if val is not None:
                d[key] = val
        return d

    @staticmethod
    def from_dict(d: dict[str, Any]) -> "FactRecord":
        try:
            ftype = FactType(d["type"])
        except (KeyError, ValueError):
            raise ModelError(f"unknown fact type {d.get('type')!r}") from None
        span = None
        if "span" in d and d["span"] is not None:
            span = (int(d["span"]["start"]), int(d["span"]["end"]))
        ts = parse_timestamp(d["timestamp"]) if d.get("timestamp") else None
        return FactRecord(
            type=ftype,
            identity=d.get("identity"),
            span=span,
            timestamp=ts,
            author=d.get("author"),
            avatar=d.get("avatar"),
            previous=d.get("previous"),
            severity=d.get("severity"),
            message=d.get("message"),
            status=d.get("status"),
            rule=d.get("rule"),
        )


# ---------------------------------------------------------------------------
# Render plan
# ---------------------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class RenderPlan:
    """Post-composition decorations for one file, bound to its content hash."""

    file: str
    source_hash: str
    decorations: tuple[Decoration, ...]

    def to_dict(self) -> dict[str, Any]:
        return {
            "file": self.file,
            "sourceHash": self.source_hash,
            "decorations": [d.to_dict() for d in self.decorations],
        }

    @staticmethod
    def from_dict(d: dict[str, Any]) -> "RenderPlan":
        return RenderPlan(
            file=str(d["file"]),
            source_hash=str(d["sourceHash"]),
            decorations=tuple(Decoration.from_dict(x) for x in d["decorations"]),
        )


__all__ = [
    "ModelError",
    "Span",
    "Role",
    "SymbolKind",
    "Occurrence",
    "ContextFacts",
    "MODIFIER_SET",
    "EXT_PREFIX",
    "ParsedIdentity",
    "parse_identity",
    "is_valid_identity",
    "DecorationKind",
    "KIND_ORDER",
    "Decoration",
    "RuleId",
    "Finding",
    "FactType",
    "CHANGE_STATUSES",
    "FactRecord",
    "RenderPlan",
    "parse_timestamp",
    "format_timestamp",
]
