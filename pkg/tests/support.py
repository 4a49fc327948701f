"""Shared test support: a seeded random program generator for the Java
subset with an independent scope-walk oracle, plus random profile builders.

The generator tracks its own scope structure while emitting source text, so
expected resolutions are computed without touching the parser — that is the
brute-force oracle the parser is checked against.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Optional

from impid.glyphs import DEFAULT_GLYPH_MAP
from impid.lint import GlyphRuleSet, AnnotationRule, PairingRule, ProjectRule
from impid.profiles import CategorySetting, KNOWN_CATEGORIES, Profile
from impid.transforms import Abbreviation, Convention, TransformConfig

SHADOW_POOL = ["a", "b", "c", "d", "e"]
UNIQUE_POOL = ["total", "limit", "cursor", "buffer", "result"]


@dataclass
class GenScope:
    id: int
    parent: Optional[int]
    kind: str  # unit | type | method | block | for
    # name -> (identity, kind, decl_end_pos, arity or None)
    decls: dict[str, list[tuple[str, str, int, Optional[int]]]] = field(default_factory=dict)


@dataclass
class GenUse:
    name: str
    pos: int
    is_call: bool
    arity: int
    expected_identity: str


@dataclass
class GenDecl:
    name: str
    identity: str
    kind: str
    pos: int
    scope_id: int


@dataclass
class GenProgram:
    source: str
    package: str
    decls: list[GenDecl]
    uses: list[GenUse]
    scopes: list[GenScope]

    def scope_chain_ids(self, scope_id: int) -> list[int]:
        out = []
        sid: Optional[int] = scope_id
        while sid is not None:
            out.append(sid)
            sid = self.scopes[sid].parent
        return out


class ProgramBuilder:
    """Emits a random program while maintaining the oracle scope stack."""

    def __init__(self, rng: random.Random):
        self.rng = rng
        self.out: list[str] = []
        self.pos = 0
        self.scopes: list[GenScope] = [GenScope(0, None, "unit")]
        self.stack: list[int] = [0]
        self.decls: list[GenDecl] = []
        self.uses: list[GenUse] = []
        self.package = ""
        self.class_identity = ""
        self.method_identity = ""
        self.method_var_counts: dict[str, int] = {}
        self.methods: list[tuple[str, int]] = []  # (name, arity)

    # -- emission helpers --

    def emit(self, text: str) -> None:
        self.out.append(text)
        self.pos += len(text)

    def push_scope(self, kind: str) -> GenScope:
        scope = GenScope(len(self.scopes), self.stack[-1], kind)
        self.scopes.append(scope)
        self.stack.append(scope.id)
        return scope

    def pop_scope(self) -> None:
        self.stack.pop()

    def declare(self, name: str, identity: str, kind: str,
                name_pos: int, arity: Optional[int] = None) -> None:
        scope = self.scopes[self.stack[-1]]
        scope.decls.setdefault(name, []).append((identity, kind, name_pos + len(name), arity))
        self.decls.append(GenDecl(name, identity, kind, name_pos, scope.id))

    # -- oracle --

    def resolve(self, name: str, pos: int, is_call: bool, arity: int) -> str:
        """Independent scope walk: innermost scope first; locals only after
        their declaration; calls match methods by name+arity only."""
        for sid in reversed(self.stack):
            scope = self.scopes[sid]
            candidates = scope.decls.get(name, [])
            if is_call:
                for identity, kind, _end, darity in candidates:
                    if kind == "method" and darity == arity:
                        return identity
                continue
            best = None
            for identity, kind, end, _darity in candidates:
                if kind in ("local",) and scope.kind in ("method", "block", "for") and end > pos:
                    continue
                if kind in ("local", "param"):
                    best = identity  # last visible var declaration wins
                elif best is None and kind == "field":
                    best = identity
            if best is not None:
                return best
        return f"ext:{name}"

    # -- uses --

    def emit_use(self, name: str) -> None:
        identity = self.resolve(name, self.pos, False, 0)
        self.uses.append(GenUse(name, self.pos, False, 0, identity))
        self.emit(name)

    def emit_call(self, name: str, arity: int) -> None:
        identity = self.resolve(name, self.pos, True, arity)
        self.uses.append(GenUse(name, self.pos, True, arity, identity))
        self.emit(name)
        self.emit("(")
        for i in range(arity):
            if i:
                self.emit(", ")
            self.emit_expression()
        self.emit(")")

    def emit_expression(self) -> None:
        roll = self.rng.random()
        if roll < 0.45:
            self.emit(str(self.rng.randint(0, 99)))
        elif roll < 0.9:
            self.emit_use(self.rng.choice(SHADOW_POOL + UNIQUE_POOL))
        else:
            self.emit_use(self.rng.choice(SHADOW_POOL))
            self.emit(" + ")
            self.emit(str(self.rng.randint(0, 9)))

    # -- declarations/statements --

    def var_identity(self, name: str) -> str:
        count = self.method_var_counts.get(name, 0) + 1
        self.method_var_counts[name] = count
        return f"{self.method_identity}${name}@{count}"

    def emit_local(self, indent: str) -> None:
        name = self.rng.choice(SHADOW_POOL + UNIQUE_POOL)
        self.emit(f"{indent}int ")
        name_pos = self.pos
        self.emit(name)
        identity = self.var_identity(name)
        # the declared name is in scope from the end of its declarator on,
        # including inside its own initializer
        scope = self.scopes[self.stack[-1]]
        scope.decls.setdefault(name, []).append((identity, "local", name_pos + len(name), None))
        self.decls.append(GenDecl(name, identity, "local", name_pos, scope.id))
        if self.rng.random() < 0.5:
            self.emit(" = ")
            self.emit_expression()
        self.emit(";\n")

    def emit_assignment(self, indent: str) -> None:
        self.emit(indent)
        self.emit_use(self.rng.choice(SHADOW_POOL + UNIQUE_POOL))
        self.emit(" = ")
        self.emit_expression()
        self.emit(";\n")

    def emit_call_statement(self, indent: str) -> None:
        self.emit(indent)
        if self.methods and self.rng.random() < 0.8:
            name, arity = self.rng.choice(self.methods)
        else:
            name, arity = self.rng.choice(["helper", "log", "min"]), self.rng.randint(0, 2)
        self.emit_call(name, arity)
        self.emit(";\n")

    def emit_for(self, indent: str, depth: int) -> None:
        self.push_scope("for")
        self.emit(f"{indent}for (int ")
        name = self.rng.choice(["i", "j", "k"])
        name_pos = self.pos
        self.emit(name)
        identity = self.var_identity(name)
        self.emit(" = 0; ")
        scope = self.scopes[self.stack[-1]]
        scope.decls.setdefault(name, []).append((identity, "local", name_pos + len(name), None))
        self.decls.append(GenDecl(name, identity, "local", name_pos, scope.id))
        self.emit_use(name)
        self.emit(" < ")
        self.emit_expression()
        self.emit("; ")
        self.emit_use(name)
        self.emit("++) {\n")
        self.emit_statements(indent + "    ", depth + 1, max_statements=2)
        self.emit(f"{indent}}}\n")
        self.pop_scope()

    def emit_block(self, indent: str, depth: int) -> None:
        self.push_scope("block")
        self.emit(f"{indent}{{\n")
        self.emit_statements(indent + "    ", depth + 1, max_statements=2)
        self.emit(f"{indent}}}\n")
        self.pop_scope()

    def emit_while(self, indent: str, depth: int) -> None:
        self.emit(f"{indent}while (")
        self.emit_use(self.rng.choice(SHADOW_POOL + UNIQUE_POOL))
        self.emit(" > 0) {\n")
        self.push_scope("block")
        self.emit_statements(indent + "    ", depth + 1, max_statements=2)
        self.pop_scope()
        self.emit(f"{indent}}}\n")

    def emit_statements(self, indent: str, depth: int, max_statements: int = 4) -> None:
        for _ in range(self.rng.randint(1, max_statements)):
            roll = self.rng.random()
            if roll < 0.35:
                self.emit_local(indent)
            elif roll < 0.6:
                self.emit_assignment(indent)
            elif roll < 0.75:
                self.emit_call_statement(indent)
            elif depth < 3 and roll < 0.85:
                self.emit_for(indent, depth)
            elif depth < 3 and roll < 0.95:
                self.emit_block(indent, depth)
            else:
                self.emit_while(indent, depth)

    def build(self) -> GenProgram:
        rng = self.rng
        if rng.random() < 0.7:
            self.package = f"gen.p{rng.randint(0, 9)}"
            self.emit(f"package {self.package};\n\n")
        class_name = "C" + str(rng.randint(0, 99))
        self.class_identity = f"{self.package}.{class_name}" if self.package else class_name
        self.emit(f"public class {class_name}")
        class_name_pos = self.pos - len(class_name)
        self.emit(" {\n")
        unit_scope = self.scopes[0]
        unit_scope.decls.setdefault(class_name, []).append(
            (self.class_identity, "class", class_name_pos + len(class_name), None))
        self.decls.append(GenDecl(class_name, self.class_identity, "class",
                                  class_name_pos, 0))
        type_scope = self.push_scope("type")

        # fields
        for name in rng.sample(SHADOW_POOL + UNIQUE_POOL, rng.randint(0, 3)):
            self.emit("    int ")
            name_pos = self.pos
            self.emit(name)
            self.emit(";\n")
            identity = f"{self.class_identity}#{name}"
            type_scope.decls.setdefault(name, []).append(
                (identity, "field", name_pos + len(name), None))
            self.decls.append(GenDecl(name, identity, "field", name_pos, type_scope.id))

        # method signatures first so calls can target any of them
        n_methods = rng.randint(1, 3)
        sigs = []
        for i in range(n_methods):
            name = f"m{i}"
            arity = rng.randint(0, 2)
            sigs.append((name, arity))
            self.methods.append((name, arity))
            type_scope.decls.setdefault(name, []).append(
                (f"{self.class_identity}#{name}({arity})", "method", 0, arity))

        for name, arity in sigs:
            self.method_identity = f"{self.class_identity}#{name}({arity})"
            self.method_var_counts = {}
            self.emit("\n    void ")
            name_pos = self.pos
            self.emit(name)
            self.decls.append(GenDecl(name, self.method_identity, "method",
                                      name_pos, type_scope.id))
            self.emit("(")
            method_scope = self.push_scope("method")
            params = rng.sample(SHADOW_POOL, arity) if arity else []
            for idx, pname in enumerate(params):
                if idx:
                    self.emit(", ")
                self.emit("int ")
                ppos = self.pos
                self.emit(pname)
                identity = self.var_identity(pname)
                method_scope.decls.setdefault(pname, []).append(
                    (identity, "param", ppos + len(pname), None))
                self.decls.append(GenDecl(pname, identity, "param", ppos, method_scope.id))
            self.emit(") {\n")
            self.emit_statements("        ", 1)
            self.emit("    }\n")
            self.pop_scope()

        self.pop_scope()
        self.emit("}\n")
        return GenProgram(source="".join(self.out), package=self.package,
                          decls=self.decls, uses=self.uses, scopes=self.scopes)


def generate_program(seed: int) -> GenProgram:
    return ProgramBuilder(random.Random(seed)).build()


# ---------------------------------------------------------------------------
# Random profiles
# ---------------------------------------------------------------------------

_GLYPH_POOL = ["U+1F6A6", "U+1F512", "U+1F513", "U+270D", "U+1F476", "U+270F",
               "U+2620", "U+1F7E0", "U+1F937 U+200D U+2640", "U+1F4D6"]


def random_identity(rng: random.Random) -> str:
    pkg = rng.choice(["demo", "gen.p1", ""])
    cls = rng.choice(["C1", "Translator", "Counter"])
    base = f"{pkg}.{cls}" if pkg else cls
    kind = rng.random()
    if kind < 0.2:
        return base
    if kind < 0.4:
        return f"{base}#{rng.choice(['count', 'total', 'words'])}"
    if kind < 0.6:
        return f"{base}#{rng.choice(['run', 'inc', 'translate'])}({rng.randint(0, 3)})"
    if kind < 0.8:
        return (f"{base}#{rng.choice(['run', 'inc'])}({rng.randint(0, 2)})"
                f"${rng.choice(['x', 'y', 'tmp'])}@{rng.randint(1, 3)}")
    return "ext:" + ".".join(rng.sample(["System", "out", "println", "exec", "close"],
                                        rng.randint(1, 3)))


def random_profile(rng: random.Random) -> Profile:
    aliases = {}
    for _ in range(rng.randint(0, 4)):
        identity = random_identity(rng)
        aliases[identity] = rng.choice(["alpha", "beta", "gammaRay", "toItalian", "shortName"]) \
            + str(rng.randint(0, 99))
    categories = {}
    for cat in KNOWN_CATEGORIES:
        categories[cat] = CategorySetting(enabled=rng.random() < 0.8,
                                          priority=rng.randint(1, 5))
    if rng.random() < 0.3:
        categories[f"custom{rng.randint(0, 9)}"] = CategorySetting(True, rng.randint(1, 9))
    glyphs = dict(DEFAULT_GLYPH_MAP)
    if rng.random() < 0.5:
        glyphs[f"extra.key{rng.randint(0, 9)}"] = rng.choice(_GLYPH_POOL)
    transform = TransformConfig(
        target_convention=rng.choice(list(Convention)),
        abbreviation=rng.choice(list(Abbreviation)),
        abbreviation_min_length=rng.randint(4, 30),
        strip_accessor_prefixes=rng.random() < 0.5,
        expansion_enabled=rng.random() < 0.5,
        parameter_hints_enabled=rng.random() < 0.5,
    )
    rules = GlyphRuleSet(
        project_rules=tuple(
            [ProjectRule("field-of-type", "String", "modifier.private", "string field")]
            if rng.random() < 0.3 else []),
    )
    return Profile(
        name=f"random-{rng.randint(0, 10_000)}",
        aliases=aliases,
        categories=categories,
        slider=rng.randint(0, 6),
        glyphs=glyphs,
        transform=transform,
        rules=rules,
        extra={"note": "fixture"} if rng.random() < 0.3 else {},
    )
