"""Lossless tokenizer for the Java-like subset.

Concatenating the text of all tokens reproduces the input byte-for-byte.
Spans are byte offsets over the UTF-8 encoding of the source; line and column
are 1-based (column counts bytes within the line).
"""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass

from impid.model import Span


class JavaParseError(Exception):
    """Lex or parse failure, carrying the offending location."""

    def __init__(self, message: str, line: int, col: int, offset: int = 0):
        super().__init__(f"{message} at line {line}, col {col}")
        self.message = message
        self.line = line
        self.col = col
        self.offset = offset


class TokenKind(str, enum.Enum):
    IDENTIFIER = "identifier"
    KEYWORD = "keyword"
    ANNOTATION = "annotation-marker"
    STRING = "string"
    CHAR = "char"
    NUMBER = "number"
    COMMENT = "comment"
    PUNCT = "punctuation"
    WHITESPACE = "whitespace"


LITERAL_KINDS = frozenset({TokenKind.STRING, TokenKind.CHAR, TokenKind.NUMBER})

KEYWORDS = frozenset("""
abstract assert boolean break byte case catch char class const continue
default do double else enum extends final finally float for goto if
implements import instanceof int interface long native new package private
protected public return short static strictfp super switch synchronized this
throw throws transient try void volatile while true false null var record
yield sealed permits
""".split())


@dataclass(frozen=True, slots=True)
class Token:
    kind: TokenKind
    span: Span
    text: str

    @property
    def is_significant(self) -> bool:
        return self.kind not in (TokenKind.WHITESPACE, TokenKind.COMMENT)


_TOKEN_RE = re.compile(
    r"""
    (?P<whitespace>[ \t\r\n\f]+)
  | (?P<comment>//[^\n]*|/\*(?:[^*]|\*(?!/))*\*/)
  | (?P<badcomment>/\*(?:[^*]|\*(?!/))*\Z)
  | (?P<string>"(?:[^"\\\n]|\\[^\n])*")
  | (?P<badstring>"(?:[^"\\\n]|\\[^\n])*)
  | (?P<char>'(?:[^'\\\n]|\\[^\n])*')
  | (?P<badchar>'(?:[^'\\\n]|\\[^\n])*)
  | (?P<number>
        0[xX][0-9a-fA-F_]+[lL]?
      | 0[bB][01_]+[lL]?
      | \d[\d_]*(?:\.[\d_]*)?(?:[eE][+-]?\d+)?[fFdDlL]?
      | \.\d[\d_]*(?:[eE][+-]?\d+)?[fFdD]?
    )
  | (?P<identifier>[A-Za-z_$][A-Za-z0-9_$]*)
  | (?P<annotation>@)
    """,
    re.VERBOSE,
)


def tokenize(source: str) -> list[Token]:
    """Produce the lossless token stream; raises JavaParseError on
    unterminated string/char/comment literals."""
    tokens: list[Token] = []
    pos = 0
    byte_pos = 0
    line = 1
    line_start_byte = 0
    n = len(source)
    while pos < n:
        m = _TOKEN_RE.match(source, pos)
        col = byte_pos - line_start_byte + 1
        if m is None:
            text = source[pos]
            kind = TokenKind.PUNCT
        else:
            group = m.lastgroup
            text = m.group()
            if group in ("badstring", "badchar", "badcomment"):
                what = {"badstring": "string literal", "badchar": "char literal",
                        "badcomment": "block comment"}[group]
                raise JavaParseError(f"unterminated {what}", line, col, byte_pos)
            kind = TokenKind[group.upper()] if group != "annotation" else TokenKind.ANNOTATION
        nbytes = len(text.encode("utf-8"))
        tokens.append(
            Token(
                kind=TokenKind.KEYWORD
                if kind is TokenKind.IDENTIFIER and text in KEYWORDS
                else kind,
                span=Span(byte_pos, byte_pos + nbytes, line, col),
                text=text,
            )
        )
        newlines = text.count("\n")
        if newlines:
            line += newlines
            line_start_byte = byte_pos + len(text[: text.rfind("\n") + 1].encode("utf-8"))
        pos += len(text)
        byte_pos += nbytes
    return tokens


__all__ = ["JavaParseError", "Token", "TokenKind", "KEYWORDS", "LITERAL_KINDS", "tokenize"]
