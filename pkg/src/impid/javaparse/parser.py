"""Tolerant two-pass parser for the Java-like subset.

Pass 1 walks the token stream structurally: package, types, members, method
bodies deep enough to register every declaration (with context facts) in a
lexical scope tree. Pass 2 walks every identifier token in order and
classifies it as a declaration or a usage, resolving usages against the scope
tree (locals position-aware, members through declared types) and falling back
to ``ext:`` identities for anything external.

Unknown constructs inside bodies are skipped token-wise; identifiers inside
them still become usage occurrences, so the engine stays useful on real
files that exceed the subset.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from impid.model import ContextFacts, MODIFIER_SET, Occurrence, Role, Span, SymbolKind
from impid.javaparse.tokens import JavaParseError, Token, TokenKind, tokenize

DEFAULT_COLLECTION_TYPES = (
    "List", "ArrayList", "LinkedList", "Set", "HashSet", "TreeSet",
    "Map", "HashMap", "Collection", "Iterable",
)

PRIMITIVE_TYPES = frozenset(
    {"int", "long", "short", "byte", "char", "float", "double", "boolean", "void", "var"}
)

_MODIFIER_WORDS = frozenset(
    {"public", "private", "protected", "static", "final", "synchronized", "abstract",
     "native", "transient", "volatile", "strictfp", "default", "sealed"}
)


@dataclass
class Scope:
    id: int
    kind: str  # unit | type | method | block | for | catch | try
    parent: Optional[int]
    start: int
    end: int
    children: list[int] = field(default_factory=list)
    decl_indexes: list[int] = field(default_factory=list)
    owner_decl: Optional[int] = None


@dataclass
class DeclarationInfo:
    index: int
    identity: str
    occurrence: Occurrence
    facts: ContextFacts
    scope_id: int
    name_token: int
    body_scope_id: Optional[int] = None
    is_loop_index: bool = False
    initializer: Optional[tuple[int, int]] = None
    new_expr: Optional[str] = None


@dataclass
class CallSite:
    callee_identity: str
    callee_name: str
    arity: int
    arg_spans: tuple[Span, ...]
    occurrence_index: int


@dataclass
class MemberCall:
    receiver_identity: str
    member_name: str
    occurrence_index: int


@dataclass
class SymbolTable:
    package: str = ""
    declarations: list[DeclarationInfo] = field(default_factory=list)
    scopes: list[Scope] = field(default_factory=list)
    decl_by_token: dict[int, int] = field(default_factory=dict)
    calls: list[CallSite] = field(default_factory=list)
    member_calls: list[MemberCall] = field(default_factory=list)
    collection_types: tuple[str, ...] = DEFAULT_COLLECTION_TYPES

    def declaration_for_identity(self, identity: str) -> Optional[DeclarationInfo]:
        for d in self.declarations:
            if d.identity == identity:
                return d
        return None

    def scope_chain(self, scope_id: int) -> list[Scope]:
        chain = []
        sid: Optional[int] = scope_id
        while sid is not None:
            chain.append(self.scopes[sid])
            sid = self.scopes[sid].parent
        return chain

    def innermost_scope_at(self, offset: int) -> Scope:
        scope = self.scopes[0]
        while True:
            for cid in scope.children:
                child = self.scopes[cid]
                if child.start <= offset < child.end:
                    scope = child
                    break
            else:
                return scope


@dataclass
class _TypeRef:
    text: str            # source-ish text, e.g. "List<User>" or "java.io.File[]"
    base: str            # last simple name of the head chain, e.g. "List"
    array_dims: int
    end_sp: int          # sig position one past the type


class _Parser:
    def __init__(self, tokens: list[Token], collection_types: tuple[str, ...]):
        self.toks = tokens
        self.sig = [i for i, t in enumerate(tokens) if t.is_significant]
        self.cur = 0
        self.table = SymbolTable(collection_types=collection_types)
        self.table.scopes.append(Scope(id=0, kind="unit", parent=None, start=0,
                                       end=tokens[-1].span.end if tokens else 1))
        # per-method counters for local/param ordinals: (method decl idx, name) -> count
        self._var_ordinals: dict[tuple[int, str], int] = {}
        self._method_dups: dict[str, int] = {}
        self._field_dups: dict[str, int] = {}

    # -- token helpers ------------------------------------------------------

    def tok(self, sp: int) -> Optional[Token]:
        if 0 <= sp < len(self.sig):
            return self.toks[self.sig[sp]]
        return None

    def peek(self, ahead: int = 0) -> Optional[Token]:
        return self.tok(self.cur + ahead)

    def at(self, text: str, ahead: int = 0) -> bool:
        t = self.peek(ahead)
        return t is not None and t.text == text

    def at_kind(self, kind: TokenKind, ahead: int = 0) -> bool:
        t = self.peek(ahead)
        return t is not None and t.kind is kind

    def advance(self) -> Optional[Token]:
        t = self.peek()
        self.cur += 1
        return t

    def expect(self, text: str) -> Token:
        t = self.peek()
        if t is None or t.text != text:
            where = t.span if t else self.toks[-1].span
            raise JavaParseError(f"expected {text!r}", where.line, where.col, where.start)
        self.cur += 1
        return t

    def error_at(self, message: str, t: Optional[Token]) -> JavaParseError:
        span = t.span if t else (self.toks[-1].span if self.toks else Span(0, 1))
        return JavaParseError(message, span.line, span.col, span.start)

    # -- scope / declaration bookkeeping -------------------------------------

    def new_scope(self, kind: str, parent: int, start: int, end: int,
                  owner: Optional[int] = None) -> Scope:
        scope = Scope(id=len(self.table.scopes), kind=kind, parent=parent,
                      start=start, end=end, owner_decl=owner)
        self.table.scopes.append(scope)
        self.table.scopes[parent].children.append(scope.id)
        return scope

    def add_decl(self, identity: str, name_tok_idx: int, kind: SymbolKind,
                 facts: ContextFacts, scope_id: int, *, loop_index: bool = False) -> DeclarationInfo:
        tok = self.toks[name_tok_idx]
        occ = Occurrence(identity=identity, span=tok.span, role=Role.DECLARATION,
                         kind=kind, name=tok.text)
        decl = DeclarationInfo(index=len(self.table.declarations), identity=identity,
                               occurrence=occ, facts=facts, scope_id=scope_id,
                               name_token=name_tok_idx, is_loop_index=loop_index)
        self.table.declarations.append(decl)
        self.table.decl_by_token[name_tok_idx] = decl.index
        self.table.scopes[scope_id].decl_indexes.append(decl.index)
        return decl

    def _method_identity(self, type_identity: str, name: str, arity: int) -> str:
        base = f"{type_identity}#{name}({arity})"
        n = self._method_dups.get(base, 0) + 1
        self._method_dups[base] = n
        return base if n == 1 else f"{base}@{n}"

    def _field_identity(self, type_identity: str, name: str) -> str:
        base = f"{type_identity}#{name}"
        n = self._field_dups.get(base, 0) + 1
        self._field_dups[base] = n
        return base if n == 1 else f"{base}@{n}"

    def _var_identity(self, method_decl: DeclarationInfo, name: str) -> str:
        key = (method_decl.index, name)
        n = self._var_ordinals.get(key, 0) + 1
        self._var_ordinals[key] = n
        return f"{method_decl.identity}${name}@{n}"

    # -- modifiers and annotations -------------------------------------------

    def parse_mods_annos(self) -> tuple[frozenset[str], tuple[tuple[str, str], ...]]:
        mods: set[str] = set()
        annos: list[tuple[str, str]] = []
        while True:
            t = self.peek()
            if t is None:
                break
            if t.kind is TokenKind.ANNOTATION and not self.at("interface", 1):
                self.advance()
                name = self._parse_dotted_name()
                if name is None:
                    break
                arg = ""
                if self.at("("):
                    arg = self._raw_paren_text()
                annos.append((name.rsplit(".", 1)[-1], arg))
            elif t.kind is TokenKind.KEYWORD and t.text in _MODIFIER_WORDS:
                mods.add(t.text)
                self.advance()
            else:
                break
        return frozenset(mods & MODIFIER_SET), tuple(annos)

    def _parse_dotted_name(self) -> Optional[str]:
        if not self.at_kind(TokenKind.IDENTIFIER):
            return None
        parts = [self.advance().text]
        while self.at(".") and self.at_kind(TokenKind.IDENTIFIER, 1):
            self.advance()
            parts.append(self.advance().text)
        return ".".join(parts)

    def _raw_paren_text(self) -> str:
        """Consume a balanced paren group, returning the raw inner source text."""
        open_tok = self.expect("(")
        depth = 1
        start = open_tok.span.end
        end = start
        while depth > 0:
            t = self.advance()
            if t is None:
                raise self.error_at("unterminated annotation arguments", open_tok)
            if t.text == "(":
                depth += 1
            elif t.text == ")":
                depth -= 1
                if depth == 0:
                    end = t.span.start
                    break
        return self._source_bytes_text(start, end).strip()

    def _source_bytes_text(self, start: int, end: int) -> str:
        # reconstruct from tokens covering [start, end)
        parts = []
        for t in self.toks:
            if t.span.end <= start:
                continue
            if t.span.start >= end:
                break
            parts.append(t.text)
        return "".join(parts)

    # -- types ---------------------------------------------------------------

    def try_type_ref(self) -> Optional[_TypeRef]:
        """Parse a type reference at the cursor without committing on failure."""
        save = self.cur
        t = self.peek()
        if t is None:
            return None
        parts: list[str] = []
        base = ""
        if t.kind is TokenKind.KEYWORD and t.text in PRIMITIVE_TYPES:
            parts.append(t.text)
            base = t.text
            self.advance()
        elif t.kind is TokenKind.IDENTIFIER:
            name = self._parse_dotted_name()
            if name is None:
                self.cur = save
                return None
            parts.append(name)
            base = name.rsplit(".", 1)[-1]
        else:
            return None
        if self.at("<"):
            generics = self._try_generic_args()
            if generics is None:
                # not a generic argument list (e.g. a comparison); plain name
                pass
            else:
                parts.append(generics)
        dims = 0
        while self.at("[") and self.at("]", 1):
            self.advance()
            self.advance()
            dims += 1
        return _TypeRef(text="".join(parts) + "[]" * dims, base=base,
                        array_dims=dims, end_sp=self.cur)

    _GENERIC_OK = frozenset({".", ",", "<", ">", "?", "[", "]", "&", "@"})

    def _try_generic_args(self) -> Optional[str]:
        save = self.cur
        open_tok = self.expect("<")
        depth = 1
        parts = ["<"]
        while depth > 0:
            t = self.peek()
            if t is None:
                self.cur = save
                return None
            ok = (
                t.kind in (TokenKind.IDENTIFIER,)
                or (t.kind is TokenKind.KEYWORD and (t.text in PRIMITIVE_TYPES
                                                     or t.text in ("extends", "super")))
                or t.text in self._GENERIC_OK
            )
            if not ok:
                self.cur = save
                return None
            if t.text == "<":
                depth += 1
            elif t.text == ">":
                depth -= 1
            parts.append(t.text)
            self.advance()
        return "".join(parts)

    def _is_container(self, ref: _TypeRef) -> bool:
        return ref.array_dims > 0 or ref.base in self.table.collection_types

    # -- unit ----------------------------------------------------------------

    def parse_unit(self) -> SymbolTable:
        if self.at("package"):
            self.advance()
            pkg = self._parse_dotted_name()
            if pkg:
                self.table.package = pkg
            self._skip_past(";")
        while self.at("import"):
            self._skip_past(";")
        while self.peek() is not None:
            t = self.peek()
            if t.text == "}":
                raise self.error_at("unbalanced '}' at top level", t)
            if t.text == ";":
                self.advance()
                continue
            before = self.cur
            self.parse_type_decl(parent_scope=0, outer_identity=self.table.package)
            if self.cur == before:  # safety: never loop in place
                self.advance()
        return self.table

    def _skip_past(self, terminator: str) -> None:
        while True:
            t = self.advance()
            if t is None or t.text == terminator:
                return

    def _skip_balanced_braces(self) -> None:
        """Cursor sits on '{'; skip to just past its matching '}'."""
        open_tok = self.expect("{")
        depth = 1
        while depth > 0:
            t = self.advance()
            if t is None:
                raise self.error_at("unbalanced '{'", open_tok)
            if t.text == "{":
                depth += 1
            elif t.text == "}":
                depth -= 1

    def _skip_statement_like(self) -> None:
        """Tolerant skip: to ';' at depth 0, or stop before '}' at depth 0."""
        depth = 0
        while True:
            t = self.peek()
            if t is None:
                return
            if depth == 0 and t.text == ";":
                self.advance()
                return
            if depth == 0 and t.text == "}":
                return
            if t.text in ("(", "[", "{"):
                depth += 1
            elif t.text in (")", "]", "}"):
                depth -= 1
                if depth < 0:
                    return
            self.advance()

    # -- type declarations ----------------------------------------------------

    _TYPE_KEYWORDS = {"class": SymbolKind.CLASS, "interface": SymbolKind.INTERFACE,
                      "enum": SymbolKind.ENUM, "record": SymbolKind.CLASS}

    def parse_type_decl(self, parent_scope: int, outer_identity: str,
                        mods: Optional[frozenset[str]] = None,
                        annos: Optional[tuple[tuple[str, str], ...]] = None
                        ) -> Optional[DeclarationInfo]:
        if mods is None:
            mods, annos = self.parse_mods_annos()
        assert annos is not None
        t = self.peek()
        if t is None:
            return None
        if t.kind is TokenKind.ANNOTATION and self.at("interface", 1):
            self.advance()  # '@interface Name { ... }'
            t = self.peek()
        if t is None or t.text not in self._TYPE_KEYWORDS:
            # not a type declaration; tolerant skip of one construct
            self._skip_statement_like()
            if self.at("{"):
                self._skip_balanced_braces()
            return None
        kind = self._TYPE_KEYWORDS[t.text]
        is_record = t.text == "record"
        self.advance()
        if not self.at_kind(TokenKind.IDENTIFIER):
            raise self.error_at("expected type name", self.peek())
        name_tok_idx = self.sig[self.cur]
        name = self.advance().text
        identity = f"{outer_identity}.{name}" if outer_identity else name
        if self.at("<"):
            self._try_generic_args()

        record_params_sp = None
        if is_record and self.at("("):
            record_params_sp = self.cur
            self._skip_balanced_parens()

        supertypes: list[str] = []
        while self.at("extends") or self.at("implements") or self.at("permits"):
            keep = not self.at("permits")
            self.advance()
            while True:
                ref = self.try_type_ref()
                if ref is None:
                    break
                if keep:
                    supertypes.append(ref.base)
                if self.at(","):
                    self.advance()
                    continue
                break

        facts = ContextFacts(modifiers=mods, annotations=annos, supertypes=tuple(supertypes))
        decl = self.add_decl(identity, name_tok_idx, kind, facts, parent_scope)

        open_tok = self.peek()
        if open_tok is None or open_tok.text != "{":
            self._skip_statement_like()
            return decl
        body = self.new_scope("type", parent_scope, open_tok.span.start,
                              self.toks[-1].span.end, owner=decl.index)
        decl.body_scope_id = body.id
        self.advance()

        if record_params_sp is not None:
            self._parse_record_components(record_params_sp, decl, body.id)
        if kind is SymbolKind.ENUM:
            self._parse_enum_constants(decl, body.id)

        depth_guard = 0
        while True:
            t = self.peek()
            if t is None:
                raise self.error_at("unbalanced '{' in type body", open_tok)
            if t.text == "}":
                body.end = t.span.end
                self.advance()
                return decl
            before = self.cur
            self.parse_member(decl, body.id)
            if self.cur == before:
                self.advance()
                depth_guard += 1
                if depth_guard > len(self.sig):
                    raise self.error_at("parser made no progress", t)

    def _skip_balanced_parens(self) -> None:
        open_tok = self.expect("(")
        depth = 1
        while depth > 0:
            t = self.advance()
            if t is None:
                raise self.error_at("unbalanced '('", open_tok)
            if t.text == "(":
                depth += 1
            elif t.text == ")":
                depth -= 1

    def _parse_record_components(self, params_sp: int, type_decl: DeclarationInfo,
                                 body_scope: int) -> None:
        # record components behave as final fields
        save = self.cur
        self.cur = params_sp
        self.expect("(")
        while not self.at(")") and self.peek() is not None:
            ref = self.try_type_ref()
            if ref is None or not self.at_kind(TokenKind.IDENTIFIER):
                self._skip_to_any({",", ")"})
            else:
                name_tok_idx = self.sig[self.cur]
                self.advance()
                facts = ContextFacts(modifiers=frozenset({"final"}), declared_type=ref.text,
                                     is_container=self._is_container(ref))
                self.add_decl(self._field_identity(type_decl.identity, self.toks[name_tok_idx].text),
                              name_tok_idx, SymbolKind.FIELD, facts, body_scope)
            if self.at(","):
                self.advance()
        self.cur = save

    def _skip_to_any(self, stops: set[str]) -> None:
        depth = 0
        while True:
            t = self.peek()
            if t is None:
                return
            if depth == 0 and t.text in stops:
                return
            if t.text in ("(", "[", "{", "<"):
                depth += 1
            elif t.text in (")", "]", "}", ">"):
                if depth == 0:
                    return
                depth -= 1
            self.advance()

    def _parse_enum_constants(self, type_decl: DeclarationInfo, body_scope: int) -> None:
        while self.at_kind(TokenKind.IDENTIFIER):
            nxt = self.peek(1)
            if nxt is not None and nxt.text not in (",", ";", "(", "{", "}"):
                return  # not a constant list; regular member parsing takes over
            name_tok_idx = self.sig[self.cur]
            self.advance()
            facts = ContextFacts(modifiers=frozenset({"public", "static", "final"}),
                                 declared_type=type_decl.occurrence.name)
            self.add_decl(self._field_identity(type_decl.identity, self.toks[name_tok_idx].text),
                          name_tok_idx, SymbolKind.FIELD, facts, body_scope)
            if self.at("("):
                self._skip_balanced_parens()
            if self.at("{"):
                self._skip_balanced_braces()
            if self.at(","):
                self.advance()
                continue
            if self.at(";"):
                self.advance()
            return

    # -- members ---------------------------------------------------------------

    def parse_member(self, type_decl: DeclarationInfo, body_scope: int) -> None:
        if self.at(";"):
            self.advance()
            return
        mods, annos = self.parse_mods_annos()
        t = self.peek()
        if t is None:
            return
        if t.text in self._TYPE_KEYWORDS or (t.kind is TokenKind.ANNOTATION and self.at("interface", 1)):
            self.parse_type_decl(body_scope, type_decl.identity, mods, annos)
            return
        if t.text == "{":  # instance/static initializer block
            block_decl = self._initializer_pseudo_method(type_decl, body_scope, static="static" in mods)
            self._parse_method_body(block_decl)
            return
        if t.text == "<":
            if self._try_generic_args() is None:
                self._skip_statement_like()
                return
            t = self.peek()
            if t is None:
                return
        ref = self.try_type_ref()
        if ref is None:
            self._skip_statement_like()
            if self.at("{"):
                self._skip_balanced_braces()
            return
        if self.at("(") and ref.array_dims == 0 and "." not in ref.text and "<" not in ref.text \
                and ref.base == type_decl.occurrence.name:
            # constructor: the "type" we read is the class name
            name_tok_idx = self.sig[ref.end_sp - 1]
            self._parse_method(type_decl, body_scope, mods, annos, None, name_tok_idx)
            return
        if not self.at_kind(TokenKind.IDENTIFIER):
            self._skip_statement_like()
            if self.at("{"):
                self._skip_balanced_braces()
            return
        name_tok_idx = self.sig[self.cur]
        self.advance()
        if self.at("("):
            self._parse_method(type_decl, body_scope, mods, annos, ref, name_tok_idx)
        else:
            self._parse_field_declarators(type_decl, body_scope, mods, annos, ref, name_tok_idx)

    def _initializer_pseudo_method(self, type_decl: DeclarationInfo, body_scope: int,
                                   static: bool) -> DeclarationInfo:
        name = "<clinit>" if static else "<init>"
        identity = self._method_identity(type_decl.identity, name, 0)
        open_tok = self.peek()
        facts = ContextFacts(return_type="void", parameter_names=())
        # pseudo declaration anchored at the '{' token; not user-visible
        occ_tok_idx = self.sig[self.cur]
        decl = DeclarationInfo(index=len(self.table.declarations), identity=identity,
                               occurrence=Occurrence(identity=identity, span=open_tok.span,
                                                     role=Role.DECLARATION,
                                                     kind=SymbolKind.METHOD, name=name),
                               facts=facts, scope_id=body_scope, name_token=occ_tok_idx)
        self.table.declarations.append(decl)
        self.table.scopes[body_scope].decl_indexes.append(decl.index)
        # NOTE: not registered in decl_by_token (the '{' is not an identifier)
        return decl

    def _parse_method(self, type_decl: DeclarationInfo, body_scope: int,
                      mods: frozenset[str], annos: tuple, return_ref: Optional[_TypeRef],
                      name_tok_idx: int) -> None:
        name = self.toks[name_tok_idx].text
        open_tok = self.peek()
        params = self._parse_param_list()
        arity = len(params)
        identity = self._method_identity(type_decl.identity, name, arity)
        facts = ContextFacts(
            modifiers=mods,
            annotations=annos,
            parameter_names=tuple(p[1] for p in params),
            return_type=return_ref.text if return_ref is not None else name,
        )
        decl = self.add_decl(identity, name_tok_idx, SymbolKind.METHOD, facts, body_scope)
        method_scope = self.new_scope("method", body_scope, open_tok.span.start,
                                      self.toks[-1].span.end, owner=decl.index)
        decl.body_scope_id = method_scope.id
        for ref, pname, ptok in params:
            pfacts = ContextFacts(declared_type=ref.text if ref else None,
                                  is_container=self._is_container(ref) if ref else False)
            self.add_decl(self._var_identity(decl, pname), ptok, SymbolKind.PARAMETER,
                          pfacts, method_scope.id)
        while self.at("throws"):
            self.advance()
            while self.try_type_ref() is not None:
                if self.at(","):
                    self.advance()
                    continue
                break
        t = self.peek()
        if t is not None and t.text == "{":
            self._parse_method_body(decl)
        else:
            if self.at(";"):
                self.advance()
            elif self.at("default"):  # annotation-member default value
                self._skip_past(";")
            last = self.tok(self.cur - 1)
            method_scope.end = last.span.end if last else open_tok.span.end

    def _parse_param_list(self) -> list[tuple[Optional[_TypeRef], str, int]]:
        params: list[tuple[Optional[_TypeRef], str, int]] = []
        self.expect("(")
        while self.peek() is not None and not self.at(")"):
            self.parse_mods_annos()
            ref = self.try_type_ref()
            while self.at(".") or self.at("..."):  # varargs dots tokenized as '.'
                self.advance()
            if self.at("this"):  # receiver parameter; not a declaration
                self.advance()
            elif self.at_kind(TokenKind.IDENTIFIER):
                name_tok_idx = self.sig[self.cur]
                name = self.advance().text
                while self.at("[") and self.at("]", 1):
                    self.advance()
                    self.advance()
                params.append((ref, name, name_tok_idx))
            else:
                self._skip_to_any({",", ")"})
            if self.at(","):
                self.advance()
        if self.at(")"):
            self.advance()
        return params

    # -- statements -------------------------------------------------------------

    def _parse_method_body(self, method_decl: DeclarationInfo) -> None:
        """Cursor on '{' of a body belonging to method_decl's scope."""
        open_tok = self.expect("{")
        scope_id = method_decl.body_scope_id
        if scope_id is None:
            scope = self.new_scope("block", method_decl.scope_id, open_tok.span.start,
                                   self.toks[-1].span.end, owner=method_decl.index)
            method_decl.body_scope_id = scope.id
            scope_id = scope.id
        self._parse_statements_until_brace(scope_id, method_decl)
        close = self.peek()
        if close is None or close.text != "}":
            raise self.error_at("unbalanced '{' in body", open_tok)
        self.table.scopes[scope_id].end = close.span.end
        self.advance()

    def _parse_statements_until_brace(self, scope_id: int, method_decl: DeclarationInfo) -> None:
        while True:
            t = self.peek()
            if t is None or t.text == "}":
                return
            before = self.cur
            self.parse_statement(scope_id, method_decl)
            if self.cur == before:
                self.advance()

    def _parse_block(self, parent_scope: int, method_decl: DeclarationInfo,
                     kind: str = "block") -> None:
        open_tok = self.expect("{")
        scope = self.new_scope(kind, parent_scope, open_tok.span.start,
                               self.toks[-1].span.end)
        self._parse_statements_until_brace(scope.id, method_decl)
        close = self.peek()
        if close is None or close.text != "}":
            raise self.error_at("unbalanced '{' in block", open_tok)
        scope.end = close.span.end
        self.advance()

    def parse_statement(self, scope_id: int, method_decl: DeclarationInfo) -> None:
        t = self.peek()
        if t is None:
            return
        text = t.text
        if text == ";":
            self.advance()
            return
        if text == "{":
            self._parse_block(scope_id, method_decl)
            return
        if text == "}":
            return
        if text in ("if", "while", "switch", "synchronized"):
            self.advance()
            if self.at("("):
                self._consume_parens_shallow()
            self._parse_substatement(scope_id, method_decl)
            while self.at("else"):
                self.advance()
                if self.at("if"):
                    self.advance()
                    if self.at("("):
                        self._consume_parens_shallow()
                self._parse_substatement(scope_id, method_decl)
            return
        if text == "do":
            self.advance()
            self._parse_substatement(scope_id, method_decl)
            if self.at("while"):
                self.advance()
                if self.at("("):
                    self._consume_parens_shallow()
            if self.at(";"):
                self.advance()
            return
        if text == "for":
            self._parse_for(scope_id, method_decl)
            return
        if text == "try":
            self._parse_try(scope_id, method_decl)
            return
        if text in ("return", "throw", "break", "continue", "yield", "assert"):
            self.advance()
            self._skip_statement_like()
            return
        if text in ("case", "default"):
            self.advance()
            self._skip_to_any({":", ";", "}"})
            if self.at(":"):
                self.advance()
            elif self.at("-") and self.at(">", 1):
                self.advance()
                self.advance()
            return
        if text in ("class", "interface", "enum", "record"):
            self._skip_local_type(scope_id)
            return
        if not self._try_local_declaration(scope_id, method_decl):
            self._skip_statement_like()

    def _skip_local_type(self, scope_id: int) -> None:
        # local classes are outside the subset; skip but keep brace balance
        self._skip_to_any({"{", ";", "}"})
        if self.at("{"):
            self._skip_balanced_braces()
        elif self.at(";"):
            self.advance()

    def _parse_substatement(self, scope_id: int, method_decl: DeclarationInfo) -> None:
        if self.at("{"):
            self._parse_block(scope_id, method_decl)
        else:
            self.parse_statement(scope_id, method_decl)

    def _consume_parens_shallow(self) -> None:
        self._skip_balanced_parens()

    def _parse_for(self, scope_id: int, method_decl: DeclarationInfo) -> None:
        for_tok = self.expect("for")
        scope = self.new_scope("for", scope_id, for_tok.span.start, self.toks[-1].span.end)
        if self.at("("):
            open_tok = self.peek()
            self.advance()
            self._try_local_declaration(scope.id, method_decl, loop_header=True)
            # consume the rest of the header regardless of shape
            depth = 1
            while depth > 0:
                t = self.peek()
                if t is None:
                    raise self.error_at("unterminated for header", open_tok)
                if t.text == "(":
                    depth += 1
                elif t.text == ")":
                    depth -= 1
                self.advance()
        self._parse_substatement(scope.id, method_decl)
        last = self.tok(self.cur - 1)
        scope.end = last.span.end if last else scope.start + 1

    def _parse_try(self, scope_id: int, method_decl: DeclarationInfo) -> None:
        try_tok = self.expect("try")
        scope = self.new_scope("try", scope_id, try_tok.span.start, self.toks[-1].span.end)
        if self.at("("):
            self.advance()
            while self.peek() is not None and not self.at(")"):
                if not self._try_local_declaration(scope.id, method_decl, resource=True):
                    self._skip_to_any({";", ")"})
                if self.at(";"):
                    self.advance()
            if self.at(")"):
                self.advance()
        if self.at("{"):
            self._parse_block(scope.id, method_decl)
        while self.at("catch"):
            self.advance()
            catch_scope = self.new_scope("catch", scope.id,
                                         self.peek().span.start if self.peek() else scope.start,
                                         self.toks[-1].span.end)
            if self.at("("):
                self.advance()
                self.parse_mods_annos()
                ref = self.try_type_ref()
                while self.at("|"):  # multi-catch: TypeA | TypeB e
                    self.advance()
                    nxt = self.try_type_ref()
                    if nxt is None:
                        break
                    ref = nxt
                if self.at_kind(TokenKind.IDENTIFIER):
                    name_tok_idx = self.sig[self.cur]
                    name = self.advance().text
                    facts = ContextFacts(declared_type=ref.text if ref else None,
                                         is_container=self._is_container(ref) if ref else False)
                    self.add_decl(self._var_identity(method_decl, name), name_tok_idx,
                                  SymbolKind.LOCAL, facts, catch_scope.id)
                if self.at(")"):
                    self.advance()
                else:
                    self._skip_to_any({")"})
                    if self.at(")"):
                        self.advance()
            if self.at("{"):
                open_tok = self.peek()
                self.advance()
                self._parse_statements_until_brace(catch_scope.id, method_decl)
                close = self.peek()
                if close is None or close.text != "}":
                    raise self.error_at("unbalanced '{' in catch", open_tok)
                catch_scope.end = close.span.end
                self.advance()
        if self.at("finally"):
            self.advance()
            if self.at("{"):
                self._parse_block(scope.id, method_decl)
        last = self.tok(self.cur - 1)
        scope.end = last.span.end if last else scope.start + 1

    _DECL_FOLLOW = frozenset({"=", ";", ",", ":", ")"})

    def _try_local_declaration(self, scope_id: int, method_decl: DeclarationInfo,
                               loop_header: bool = False, resource: bool = False) -> bool:
        save = self.cur
        self.parse_mods_annos()
        ref = self.try_type_ref()
        if ref is None or not self.at_kind(TokenKind.IDENTIFIER):
            self.cur = save
            return False
        follow = self.peek(1)
        if follow is None or (follow.text not in self._DECL_FOLLOW
                              and not (follow.text == "[" and self.at("]", 2))):
            self.cur = save
            return False
        # committed: one or more declarators
        while True:
            if not self.at_kind(TokenKind.IDENTIFIER):
                break
            name_tok_idx = self.sig[self.cur]
            name = self.advance().text
            dims = ref.array_dims
            while self.at("[") and self.at("]", 1):
                self.advance()
                self.advance()
                dims += 1
            facts = ContextFacts(
                declared_type=ref.text + "[]" * (dims - ref.array_dims),
                is_container=self._is_container(ref) or dims > 0,
            )
            decl = self.add_decl(self._var_identity(method_decl, name), name_tok_idx,
                                 SymbolKind.LOCAL, facts, scope_id,
                                 loop_index=loop_header)
            if self.at("="):
                self.advance()
                init_start_tok = self.peek()
                self._consume_initializer(decl, init_start_tok)
            elif self.at(":"):
                # for-each: 'for (Type name : expr)' — expr consumed by caller
                return True
            if self.at(","):
                self.advance()
                continue
            break
        if self.at(";"):
            self.advance()
        return True

    def _consume_initializer(self, decl: DeclarationInfo, start_tok: Optional[Token]) -> None:
        """Consume an initializer expression up to ',' or ';' at depth 0."""
        if start_tok is None:
            return
        # detect 'new Qualified.Name(' heads for API-usage pairing
        if start_tok.text == "new":
            sp = self.cur + 1
            last_name = None
            while True:
                t = self.tok(sp)
                if t is None:
                    break
                if t.kind is TokenKind.IDENTIFIER:
                    last_name = t.text
                    nxt = self.tok(sp + 1)
                    if nxt is not None and nxt.text == ".":
                        sp += 2
                        continue
                    break
                break
            if last_name is not None:
                decl.new_expr = f"new {last_name}"
        depth = 0
        end = start_tok.span.end
        while True:
            t = self.peek()
            if t is None:
                break
            if depth == 0 and t.text in (",", ";", ")"):
                break
            if t.text in ("(", "[", "{"):
                depth += 1
            elif t.text in (")", "]", "}"):
                if depth == 0:
                    break
                depth -= 1
            end = t.span.end
            self.advance()
        decl.initializer = (start_tok.span.start, end)

    # -- field declarators ------------------------------------------------------

    def _parse_field_declarators(self, type_decl: DeclarationInfo, body_scope: int,
                                 mods: frozenset[str], annos: tuple, ref: _TypeRef,
                                 first_name_tok: int) -> None:
        name_tok_idx = first_name_tok
        while True:
            name = self.toks[name_tok_idx].text
            dims = ref.array_dims
            while self.at("[") and self.at("]", 1):
                self.advance()
                self.advance()
                dims += 1
            facts = ContextFacts(
                modifiers=mods,
                annotations=annos,
                declared_type=ref.text + "[]" * (dims - ref.array_dims),
                is_container=self._is_container(ref) or dims > 0,
            )
            decl = self.add_decl(self._field_identity(type_decl.identity, name),
                                 name_tok_idx, SymbolKind.FIELD, facts, body_scope)
            if self.at("="):
                self.advance()
                self._consume_initializer(decl, self.peek())
            if self.at(",") and self.at_kind(TokenKind.IDENTIFIER, 1):
                self.advance()
                name_tok_idx = self.sig[self.cur]
                self.advance()
                continue
            break
        if self.at(";"):
            self.advance()


def parse_declarations(tokens: list[Token],
                       collection_types: tuple[str, ...] = DEFAULT_COLLECTION_TYPES) -> SymbolTable:
    """Pass 1: build the symbol table (declarations + scope tree) from tokens."""
    if not tokens:
        return SymbolTable(collection_types=collection_types)
    parser = _Parser(tokens, collection_types)
    return parser.parse_unit()


def identity_key(declaration: Occurrence, table: SymbolTable) -> str:
    """Return the identity key the table assigned to this declaration occurrence."""
    for d in table.declarations:
        if d.occurrence.span == declaration.span and d.occurrence.name == declaration.name:
            return d.identity
    raise KeyError(f"no declaration at span {declaration.span}")


# ---------------------------------------------------------------------------
# Pass 2: occurrence classification
# ---------------------------------------------------------------------------

class _ChainState:
    """Rolling receiver state while scanning `a.b.c(...)` chains."""

    NONE = "none"          # no receiver (chain root position)
    EXT = "ext"            # receiver is an unresolved dotted chain
    EXT_BARE = "ext-bare"  # receiver resolved but its type is unknown
    TYPE = "type"          # receiver is an in-unit type (static-style access)
    VAR = "var"            # receiver is a var whose declared type is in-unit
    UNKNOWN = "unknown"    # receiver is a computed value

    def __init__(self) -> None:
        self.mode = self.NONE
        self.ext_path: str = ""
        self.type_decl: Optional[DeclarationInfo] = None
        self.receiver_decl: Optional[DeclarationInfo] = None

    def reset(self) -> None:
        self.mode = self.NONE
        self.ext_path = ""
        self.type_decl = None
        self.receiver_decl = None


class _Classifier:
    def __init__(self, tokens: list[Token], table: SymbolTable):
        self.toks = tokens
        self.sig = [i for i, t in enumerate(tokens) if t.is_significant]
        self.table = table
        self.occurrences: list[Occurrence] = []
        self._types_by_name: dict[str, DeclarationInfo] = {}
        for d in table.declarations:
            if d.occurrence.kind in (SymbolKind.CLASS, SymbolKind.INTERFACE, SymbolKind.ENUM):
                self._types_by_name.setdefault(d.occurrence.name, d)

    def run(self) -> list[Occurrence]:
        state = _ChainState()
        prev: Optional[Token] = None
        sp = 0
        while sp < len(self.sig):
            tok_idx = self.sig[sp]
            t = self.toks[tok_idx]
            if t.kind is TokenKind.IDENTIFIER:
                self._classify_identifier(sp, tok_idx, t, prev, state)
            elif t.kind is TokenKind.KEYWORD and t.text == "this":
                state.mode = _ChainState.TYPE
                state.type_decl = self._enclosing_type(t.span.start)
                state.ext_path = ""
            elif t.kind is TokenKind.KEYWORD and t.text == "super":
                state.mode = _ChainState.UNKNOWN
            elif t.text in (")", "]"):
                state.mode = _ChainState.UNKNOWN
            elif t.text == ".":
                pass  # keep receiver state for the member that follows
            elif t.kind is TokenKind.KEYWORD and t.text == "new":
                state.reset()
            else:
                state.reset()
            prev = t
            sp += 1
        self.occurrences.sort(key=lambda o: o.span.start)
        return self.occurrences

    # -- helpers -----------------------------------------------------------

    def _enclosing_type(self, offset: int) -> Optional[DeclarationInfo]:
        scope = self.table.innermost_scope_at(offset)
        for s in self.table.scope_chain(scope.id):
            if s.kind == "type" and s.owner_decl is not None:
                return self.table.declarations[s.owner_decl]
        return None

    def _next_sig(self, sp: int) -> Optional[Token]:
        if sp + 1 < len(self.sig):
            return self.toks[self.sig[sp + 1]]
        return None

    def _call_args(self, sp: int) -> tuple[int, tuple[Span, ...]]:
        """sp points at the identifier; next sig token is '('. Returns
        (arity, first-token span per argument) without moving the scan."""
        i = sp + 1
        t = self._tok_at(i)
        assert t is not None and t.text == "("
        depth = 1
        i += 1
        args: list[Span] = []
        expecting_arg = True
        while True:
            t = self._tok_at(i)
            if t is None:
                break
            if depth == 1 and t.text == ")":
                break
            if expecting_arg and t.text != ")":
                args.append(t.span)
                expecting_arg = False
            if t.text in ("(", "[", "{"):
                depth += 1
            elif t.text in (")", "]", "}"):
                depth -= 1
                if depth == 0:
                    break
            elif t.text == "," and depth == 1:
                expecting_arg = True
            i += 1
        return len(args), tuple(args)

    def _tok_at(self, sp: int) -> Optional[Token]:
        if 0 <= sp < len(self.sig):
            return self.toks[self.sig[sp]]
        return None

    def _lookup_member(self, type_decl: DeclarationInfo, name: str,
                       is_call: bool, arity: int) -> Optional[DeclarationInfo]:
        if type_decl.body_scope_id is None:
            return None
        scope = self.table.scopes[type_decl.body_scope_id]
        fallback = None
        for di in scope.decl_indexes:
            d = self.table.declarations[di]
            if d.occurrence.name != name:
                continue
            if is_call:
                if d.occurrence.kind is SymbolKind.METHOD and d.facts.parameter_names is not None \
                        and len(d.facts.parameter_names) == arity:
                    return d
            else:
                if d.occurrence.kind is not SymbolKind.METHOD:
                    return d
                fallback = fallback or d
        return fallback

    def _resolve_root(self, name: str, offset: int, is_call: bool,
                      arity: int) -> Optional[DeclarationInfo]:
        scope = self.table.innermost_scope_at(offset)
        for s in self.table.scope_chain(scope.id):
            vars_first: list[DeclarationInfo] = []
            fields: list[DeclarationInfo] = []
            types: list[DeclarationInfo] = []
            methods: list[DeclarationInfo] = []
            for di in s.decl_indexes:
                d = self.table.declarations[di]
                if d.occurrence.name != name:
                    continue
                k = d.occurrence.kind
                if k in (SymbolKind.LOCAL, SymbolKind.PARAMETER):
                    if k is SymbolKind.LOCAL and s.kind in ("block", "method", "for", "catch", "try") \
                            and d.occurrence.span.end > offset:
                        continue  # locals resolve only after their declaration
                    vars_first.append(d)
                elif k is SymbolKind.FIELD:
                    fields.append(d)
                elif k is SymbolKind.METHOD:
                    methods.append(d)
                else:
                    types.append(d)
            if is_call:
                for m in methods:
                    if m.facts.parameter_names is not None and len(m.facts.parameter_names) == arity:
                        return m
                # a variable/field can shadow nothing for calls; keep walking out
                continue
            for bucket in (vars_first, fields, types, methods):
                if bucket:
                    return bucket[-1] if bucket is vars_first else bucket[0]
        return None

    def _emit(self, tok: Token, identity: str, kind: SymbolKind) -> int:
        occ = Occurrence(identity=identity, span=tok.span, role=Role.USAGE,
                         kind=kind, name=tok.text)
        self.occurrences.append(occ)
        return len(self.occurrences) - 1

    def _decl_var_type(self, decl: DeclarationInfo) -> Optional[DeclarationInfo]:
        dt = decl.facts.declared_type
        if not dt:
            return None
        base = dt.split("<", 1)[0].split("[", 1)[0].rsplit(".", 1)[-1]
        return self._types_by_name.get(base)

    # -- main classification -------------------------------------------------

    def _classify_identifier(self, sp: int, tok_idx: int, t: Token,
                             prev: Optional[Token], state: _ChainState) -> None:
        decl_idx = self.table.decl_by_token.get(tok_idx)
        if decl_idx is not None:
            self.occurrences.append(self.table.declarations[decl_idx].occurrence)
            state.reset()
            return

        nxt = self._next_sig(sp)
        is_call = nxt is not None and nxt.text == "("
        arity, arg_spans = self._call_args(sp) if is_call else (0, ())
        is_member = prev is not None and prev.text == "." and state.mode != _ChainState.NONE
        after_new = prev is not None and prev.text == "new"

        if is_member:
            occ_idx = self._classify_member(t, state, is_call, arity)
        else:
            occ_idx = self._classify_root(t, state, is_call, arity, after_new)

        occ = self.occurrences[occ_idx]
        if is_call:
            self.table.calls.append(CallSite(
                callee_identity=occ.identity, callee_name=t.text, arity=arity,
                arg_spans=arg_spans, occurrence_index=occ_idx))

    def _classify_member(self, t: Token, state: _ChainState, is_call: bool,
                         arity: int) -> int:
        name = t.text
        receiver_decl = state.receiver_decl
        if state.mode == _ChainState.EXT:
            path = f"{state.ext_path}.{name}"
            idx = self._emit(t, f"ext:{path}", SymbolKind.FIELD if not is_call else SymbolKind.METHOD)
            state.ext_path = path
            return idx
        if state.mode in (_ChainState.TYPE, _ChainState.VAR) and state.type_decl is not None:
            member = self._lookup_member(state.type_decl, name, is_call, arity)
            if member is not None:
                idx = self._emit(t, member.identity, member.occurrence.kind)
                self._record_member_call(receiver_decl, name, idx, is_call)
                self._update_state_for(member, state)
                return idx
        # resolved receiver but unknown member, or unknown receiver
        idx = self._emit(t, f"ext:{name}", SymbolKind.METHOD if is_call else SymbolKind.FIELD)
        self._record_member_call(receiver_decl, name, idx, is_call)
        state.mode = _ChainState.EXT_BARE
        state.type_decl = None
        state.receiver_decl = None
        return idx

    def _record_member_call(self, receiver_decl: Optional[DeclarationInfo], name: str,
                            occ_idx: int, is_call: bool) -> None:
        if is_call and receiver_decl is not None:
            self.table.member_calls.append(MemberCall(
                receiver_identity=receiver_decl.identity, member_name=name,
                occurrence_index=occ_idx))

    def _update_state_for(self, member: DeclarationInfo, state: _ChainState) -> None:
        kind = member.occurrence.kind
        if kind in (SymbolKind.CLASS, SymbolKind.INTERFACE, SymbolKind.ENUM):
            state.mode = _ChainState.TYPE
            state.type_decl = member
            state.receiver_decl = None
            return
        if kind in (SymbolKind.FIELD, SymbolKind.LOCAL, SymbolKind.PARAMETER):
            state.receiver_decl = member
            inner = self._decl_var_type(member)
            if inner is not None:
                state.mode = _ChainState.VAR
                state.type_decl = inner
            else:
                state.mode = _ChainState.EXT_BARE
                state.type_decl = None
            return
        state.mode = _ChainState.UNKNOWN
        state.type_decl = None
        state.receiver_decl = None

    def _classify_root(self, t: Token, state: _ChainState, is_call: bool,
                       arity: int, after_new: bool) -> int:
        name = t.text
        if after_new:
            decl = self._types_by_name.get(name) \
                or self._resolve_root(name, t.span.start, False, arity)
        else:
            decl = self._resolve_root(name, t.span.start, is_call, arity)
        if decl is not None:
            idx = self._emit(t, decl.identity, decl.occurrence.kind)
            state.reset()
            self._update_state_for(decl, state)
            return idx
        kind = SymbolKind.METHOD if is_call else SymbolKind.FIELD
        idx = self._emit(t, f"ext:{name}", kind)
        state.reset()
        state.mode = _ChainState.EXT
        state.ext_path = name
        return idx


def extract_occurrences(source: str,
                        collection_types: tuple[str, ...] = DEFAULT_COLLECTION_TYPES
                        ) -> tuple[SymbolTable, list[Occurrence]]:
    """Tokenize + parse + classify: every identifier token becomes exactly one
    occurrence (declaration or usage); spans never overlap."""
    tokens = tokenize(source)
    table = parse_declarations(tokens, collection_types)
    classifier = _Classifier(tokens, table)
    occurrences = classifier.run()
    return table, occurrences


__all__ = [
    "DEFAULT_COLLECTION_TYPES",
    "Scope",
    "DeclarationInfo",
    "CallSite",
    "MemberCall",
    "SymbolTable",
    "parse_declarations",
    "identity_key",
    "extract_occurrences",
]
