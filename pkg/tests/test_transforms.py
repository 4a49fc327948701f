"""Transform rules: goldens and algebraic properties."""
import pytest
from hypothesis import given, settings, strategies as st

from impid.model import Span
from impid.transforms import (
    Abbreviation,
    Convention,
    TransformConfig,
    abbreviate,
    convert_convention,
    expand_method_name,
    parameter_hints,
    split_words,
    strip_accessor_prefix,
)


@pytest.mark.parametrize("name,words", [
    ("addTranslation", ["add", "Translation"]),
    ("VeryLongJavaLanguageException", ["Very", "Long", "Java", "Language", "Exception"]),
    ("parseHTTPResponse", ["parse", "HTTP", "Response"]),
    ("utf8Decode", ["utf", "8", "Decode"]),
    ("add_translation", ["add", "translation"]),
    ("x", ["x"]),
    ("HTML", ["HTML"]),
])
def test_split_words(name, words):
    assert split_words(name) == words


@pytest.mark.parametrize("name,target,expected", [
    ("addTranslation", Convention.SNAKE, "add_translation"),
    ("add_translation", Convention.CAMEL, "addTranslation"),
    ("x", Convention.SNAKE, "x"),
    ("translate", Convention.SNAKE, "translate"),
    ("addTranslation", Convention.NONE, "addTranslation"),
])
def test_convert_convention(name, target, expected):
    assert convert_convention(name, target) == expected


@pytest.mark.parametrize("name,strategy,expected", [
    ("VeryLongJavaLanguageException", Abbreviation.INITIALISM_KEEP_LAST, ("VLJLException", True)),
    ("InvocationTargetException", Abbreviation.PER_WORD_PREFIX_3, ("InvTarExp", True)),
    ("name", Abbreviation.INITIALISM_KEEP_LAST, ("name", False)),
    ("name", Abbreviation.PER_WORD_PREFIX_3, ("name", False)),
])
def test_abbreviate_goldens(name, strategy, expected):
    assert abbreviate(name, strategy, 15) == expected


@pytest.mark.parametrize("name,expected", [
    ("getUsers", "users"),
    ("getter", "getter"),
    ("fetchUsers", "fetchUsers"),
    ("get", "get"),
])
def test_strip_accessor_prefix(name, expected):
    assert strip_accessor_prefix(name) == expected


@pytest.mark.parametrize("name,params,expected", [
    ("getUsers", ["status"], "getUsersByStatus"),
    ("getUsers", [], "getUsers"),
    ("findOrder", ["customerId", "date"], "findOrderByCustomerIdAndDate"),
    ("getUsersByStatus", ["status"], "getUsersByStatus"),
])
def test_expand_method_name(name, params, expected):
    assert expand_method_name(name, params) == expected


def test_parameter_hints_texts_and_anchors():
    spans = (Span(10, 11), Span(13, 14))
    hints = parameter_hints(("argument1", "argument2"), spans, callee_name="add")
    assert [h.text for h in hints] == ["argument1:", "argument2:"]
    assert [h.target.start for h in hints] == [10, 13]
    assert all(h.kind.value == "inline-hint" and h.category == "hints" for h in hints)


def test_parameter_hints_zero_args_and_trailing_params():
    assert parameter_hints(("a",), ()) == []
    hints = parameter_hints(("word", "translation"), (Span(5, 6),))
    assert [h.text for h in hints] == ["word:"]  # min(#params, #args)


def test_config_validates_min_length():
    with pytest.raises(ValueError):
        TransformConfig(abbreviation_min_length=0)


# canonical camelCase: no uppercase runs, no digits — so every non-head word
# must be at least two letters long (a capitalized single letter next to
# another capital would form a run)
_camel_words = st.tuples(
    st.from_regex(r"[a-z]{1,8}", fullmatch=True),
    st.lists(st.from_regex(r"[a-z]{2,8}", fullmatch=True), max_size=3))


@settings(max_examples=500, deadline=None)
@given(_camel_words)
def test_convention_round_trip_on_canonical_camel(parts):
    head, rest = parts
    name = head + "".join(w.capitalize() for w in rest)
    snake = convert_convention(name, Convention.SNAKE)
    assert convert_convention(snake, Convention.CAMEL) == name


@settings(max_examples=300, deadline=None)
@given(st.from_regex(r"[A-Za-z][A-Za-z0-9_]{0,40}", fullmatch=True),
       st.sampled_from([Abbreviation.INITIALISM_KEEP_LAST, Abbreviation.PER_WORD_PREFIX_3]),
       st.integers(min_value=1, max_value=30))
def test_abbreviation_shrinks(name, strategy, min_length):
    out, shortened = abbreviate(name, strategy, min_length)
    if shortened:
        assert len(out) < len(name)
    else:
        assert out == name


@settings(max_examples=300, deadline=None)
@given(st.from_regex(r"[a-z][A-Za-z]{0,20}", fullmatch=True),
       st.lists(st.from_regex(r"[a-z][a-z]{0,6}", fullmatch=True), max_size=3))
def test_expansion_idempotent(name, params):
    once = expand_method_name(name, params)
    assert expand_method_name(once, params) == once
