"""Tokenizer: losslessness, literal opacity, error reporting."""
import pytest
from hypothesis import given, settings, strategies as st

from impid.javaparse import JavaParseError, TokenKind, tokenize


def kinds(source):
    return [(t.kind, t.text) for t in tokenize(source) if t.is_significant]


def test_minimal_declaration():
    toks = tokenize("int x;")
    assert [(t.kind, t.text) for t in toks] == [
        (TokenKind.KEYWORD, "int"),
        (TokenKind.WHITESPACE, " "),
        (TokenKind.IDENTIFIER, "x"),
        (TokenKind.PUNCT, ";"),
    ]


def test_comments_are_opaque():
    toks = tokenize("// getUsers")
    assert len(toks) == 1 and toks[0].kind is TokenKind.COMMENT
    toks = tokenize("/* int hidden; */")
    assert [t.kind for t in toks] == [TokenKind.COMMENT]


def test_string_literals_are_single_tokens():
    toks = kinds('say("int x; // not code")')
    assert (TokenKind.STRING, '"int x; // not code"') in toks
    assert sum(1 for k, _ in toks if k is TokenKind.IDENTIFIER) == 1


def test_identifiers_in_descriptive_names_snippet(fixtures_dir):
    source = (fixtures_dir / "scenarios" / "descriptive_names.java").read_text(encoding="utf-8")
    names = {t.text for t in tokenize(source) if t.kind is TokenKind.IDENTIFIER}
    assert {"addTranslation", "translate"} <= names


@pytest.mark.parametrize("bad,what", [
    ('"unterminated', "string"),
    ("'u", "char"),
    ("/* forever", "comment"),
])
def test_unterminated_literals_error_with_location(bad, what):
    source = "int a;\n  " + bad
    with pytest.raises(JavaParseError) as err:
        tokenize(source)
    assert err.value.line == 2 and err.value.col == 3
    assert what in str(err.value)


def test_annotation_marker_token():
    toks = kinds("@Override void f()")
    assert toks[0] == (TokenKind.ANNOTATION, "@")
    assert toks[1] == (TokenKind.IDENTIFIER, "Override")


def test_numbers_and_unicode_text():
    src = 'double d = 1.5e3; String s = "héllo"; // commentaire: café\n'
    toks = tokenize(src)
    assert "".join(t.text for t in toks) == src
    # byte spans stay consistent for multi-byte content
    enc = src.encode("utf-8")
    for t in toks:
        assert enc[t.span.start:t.span.end].decode("utf-8") == t.text


_pieces = st.sampled_from([
    "int", "x", "foo", "getUsers", ";", "{", "}", "(", ")", "=", "+",
    " ", "\n", "\t", "// note\n", "/* block */", '"text"', "'c'", "42",
    "1.5", "@", "Override", ".", ",", "<", ">", "List", "public",
])


@settings(max_examples=500, deadline=None)
@given(st.lists(_pieces, min_size=0, max_size=60))
def test_lossless_tokenization_hypothesis(parts):
    source = "".join(parts)
    toks = tokenize(source)
    assert "".join(t.text for t in toks) == source


def test_lossless_on_generated_corpus(corpus):
    for prog in corpus[:500]:
        toks = tokenize(prog.source)
        assert "".join(t.text for t in toks) == prog.source
