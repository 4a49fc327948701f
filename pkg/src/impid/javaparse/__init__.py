"""Tokenizer and tolerant parser for the Java-like subset."""
from impid.javaparse.tokens import JavaParseError, Token, TokenKind, tokenize
from impid.javaparse.parser import (
    CallSite,
    DeclarationInfo,
    MemberCall,
    Scope,
    SymbolTable,
    extract_occurrences,
    identity_key,
    parse_declarations,
)

__all__ = [
    "JavaParseError",
    "Token",
    "TokenKind",
    "tokenize",
    "CallSite",
    "DeclarationInfo",
    "MemberCall",
    "Scope",
    "SymbolTable",
    "extract_occurrences",
    "identity_key",
    "parse_declarations",
]
