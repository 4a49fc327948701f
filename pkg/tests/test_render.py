"""Composition and renderers: slider/category semantics, ordering,
determinism, recoverability."""
import itertools
import json
import random

import pytest

from impid.model import Decoration, DecorationKind, RenderPlan, Span
from impid.profiles import CategorySetting, Profile
from impid.render import (
    ComposeError,
    StalePlanError,
    apply_replace_edits,
    compose,
    emit_stream,
    html_to_plain,
    parse_stream,
    recover_source,
    render_ansi,
    render_html,
    reverse_replace_edits,
    source_hash,
    strip_ansi,
)

SOURCE = "class T { synchronized void inc() { } }\n"
INC = SOURCE.index("inc")


def _glyph(cat="modifiers", text="🚦", prio=1, span=None, desc="has the synchronized modifier"):
    return Decoration(target=span or Span(INC, INC + 3), kind=DecorationKind.SUFFIX_GLYPH,
                      text=text, category=cat, priority=prio, description=desc,
                      identity="T#inc(0)")


def _replace(text="increment", cat="alias", span=None):
    return Decoration(target=span or Span(INC, INC + 3), kind=DecorationKind.REPLACE_NAME,
                      text=text, category=cat, description="alias of inc (T#inc(0))",
                      identity="T#inc(0)")


def _profile(slider=1, **cats):
    categories = {k.replace("_", "-"): CategorySetting(*v) for k, v in cats.items()}
    return Profile(slider=slider, categories={**Profile().categories, **categories})


def test_slider_zero_keeps_only_replace_names():
    plan = compose([], [_replace(), _glyph()], _profile(slider=0),
                   file="T.java", source=SOURCE)
    assert [d.kind for d in plan.decorations] == [DecorationKind.REPLACE_NAME]


def test_slider_threshold_by_category_priority():
    profile = _profile(slider=2, naming=(True, 1), history=(True, 3))
    plan = compose([], [_glyph(cat="naming", text="🤏", desc="single letter"),
                        _glyph(cat="history", text="✍", desc="renamed")],
                   profile, file="T.java", source=SOURCE)
    assert [d.category for d in plan.decorations] == ["naming"]


def test_disabled_category_removes_replace_names_too():
    profile = _profile(alias=(False, 1))
    plan = compose([], [_replace(), _glyph()], profile, file="T.java", source=SOURCE)
    assert [d.category for d in plan.decorations] == ["modifiers"]


def test_multi_glyph_order_priority_then_category_then_text():
    profile = _profile(slider=5, modifiers=(True, 2), history=(True, 3))
    glyphs = [_glyph(cat="history", text="✍", desc="renamed"),
              _glyph(cat="modifiers", text="🚦")]
    for perm in itertools.permutations(glyphs):
        plan = compose([], list(perm), profile, file="T.java", source=SOURCE)
        assert [d.text for d in plan.decorations] == ["🚦", "✍"]


def test_compose_rejects_conflicting_replace_names():
    with pytest.raises(ComposeError):
        compose([], [_replace("first"), _replace("second")], _profile(),
                file="T.java", source=SOURCE)


def test_compose_dedupes_identical_replace_names():
    plan = compose([], [_replace(), _replace()], _profile(), file="T.java", source=SOURCE)
    assert len(plan.decorations) == 1


def test_render_ansi_empty_plan_is_identity():
    plan = compose([], [], _profile(), file="T.java", source=SOURCE)
    assert render_ansi(SOURCE, plan) == SOURCE


def test_render_ansi_glyph_and_replace():
    plan = compose([], [_glyph(), _replace()], _profile(), file="T.java", source=SOURCE)
    out = render_ansi(SOURCE, plan)
    assert "\x1b[3mincrement\x1b[23m" in out
    assert "\x1b[2m🚦\x1b[22m" in out
    assert strip_ansi(out) == SOURCE.replace("inc()", "increment🚦()")


def test_render_rejects_stale_plan():
    plan = compose([], [], _profile(), file="T.java", source=SOURCE)
    with pytest.raises(StalePlanError):
        render_ansi(SOURCE + " ", plan)
    with pytest.raises(StalePlanError):
        render_html(SOURCE + " ", plan)


def test_render_html_empty_plan_escapes_only():
    src = "int a = b < c;\n"
    plan = compose([], [], _profile(), file="T.java", source=src)
    out = render_html(src, plan)
    assert out == '<pre class="impid">int a = b &lt; c;\n</pre>'


def test_render_html_titles_carry_descriptions():
    plan = compose([], [_glyph()], _profile(), file="T.java", source=SOURCE)
    out = render_html(SOURCE, plan)
    assert 'title="has the synchronized modifier"' in out
    assert 'cat-modifiers' in out


def test_render_html_alias_title_format():
    plan = compose([], [_replace()], _profile(), file="T.java", source=SOURCE)
    out = render_html(SOURCE, plan)
    assert 'title="alias of inc (T#inc(0))"' in out


def test_emit_stream_schema_and_empty():
    plan = compose([], [], _profile(), file="T.java", source=SOURCE)
    doc = json.loads(emit_stream(plan))
    assert doc["version"] == 1 and doc["file"] == "T.java"
    assert doc["sourceHash"] == source_hash(SOURCE)
    assert doc["decorations"] == []


def test_emit_stream_inline_hint_record():
    hint = Decoration(target=Span(10, 11), kind=DecorationKind.INLINE_HINT,
                      text="word:", category="hints", description="parameter 'word'",
                      identity="T#add(2)")
    plan = compose([], [hint], _profile(slider=3), file="T.java", source=SOURCE)
    doc = json.loads(emit_stream(plan))
    [rec] = doc["decorations"]
    assert rec["kind"] == "inline-hint" and rec["text"] == "word:"
    assert rec["id"] == "d0000"
    assert parse_stream(emit_stream(plan)) == plan


def test_stream_replace_edits_reverse_to_original():
    plan = compose([], [_replace()], _profile(), file="T.java", source=SOURCE)
    augmented = apply_replace_edits(SOURCE, plan)
    assert "increment" in augmented
    assert reverse_replace_edits(augmented, plan) == SOURCE


def test_recover_source_full_plan_ansi_and_html():
    decs = [_replace(), _glyph(),
            Decoration(target=Span(0, 5), kind=DecorationKind.INLINE_HINT,
                       text="kw:", category="hints", description="hint",
                       identity="T#inc(0)")]
    plan = compose([], decs, _profile(slider=4), file="T.java", source=SOURCE)
    ansi = render_ansi(SOURCE, plan)
    assert recover_source(strip_ansi(ansi), plan) == SOURCE
    html_out = render_html(SOURCE, plan)
    assert recover_source(html_to_plain(html_out), plan) == SOURCE


def _random_plan(rng, source):
    cats = ["alias", "naming", "modifiers", "history", "hints", "analysis"]
    decorations = []
    positions = sorted(rng.sample(range(len(source) - 4), rng.randint(0, 6)))
    for pos in positions:
        kind = rng.choice([DecorationKind.SUFFIX_GLYPH, DecorationKind.PREFIX_GLYPH,
                           DecorationKind.INLINE_HINT])
        decorations.append(Decoration(
            target=Span(pos, pos + rng.randint(1, 3)), kind=kind,
            text=rng.choice(["🚦", "✍", "x:", "🔢"]), category=rng.choice(cats),
            priority=rng.randint(1, 5), description="r", identity="T#inc(0)"))
    return decorations


def test_slider_monotonicity_randomized():
    rng = random.Random(5)
    source = "class T { void inc() { } }  // filler text to span positions\n"
    for _ in range(300):
        decorations = _random_plan(rng, source)
        categories = {c: CategorySetting(True, rng.randint(1, 5))
                      for c in ("alias", "naming", "modifiers", "history", "hints", "analysis")}
        for level in range(0, 6):
            lo = compose([], decorations, Profile(slider=level, categories=categories),
                         file="T.java", source=source)
            hi = compose([], decorations, Profile(slider=level + 1, categories=categories),
                         file="T.java", source=source)
            lo_set = {(d.target.start, d.text, d.category) for d in lo.decorations}
            hi_set = {(d.target.start, d.text, d.category) for d in hi.decorations}
            assert lo_set <= hi_set


def test_category_exactness_randomized():
    rng = random.Random(6)
    source = "class T { void inc() { } }  // filler text to span positions\n"
    all_cats = ("alias", "naming", "modifiers", "history", "hints", "analysis")
    for _ in range(300):
        decorations = _random_plan(rng, source)
        victim = rng.choice(all_cats)
        base_cats = {c: CategorySetting(True, 1) for c in all_cats}
        off_cats = dict(base_cats)
        off_cats[victim] = CategorySetting(False, 1)
        base = compose([], decorations, Profile(slider=9, categories=base_cats),
                       file="T.java", source=source)
        off = compose([], decorations, Profile(slider=9, categories=off_cats),
                      file="T.java", source=source)
        removed = [d for d in base.decorations if d.category == victim]
        kept = [d for d in base.decorations if d.category != victim]
        assert list(off.decorations) == kept or \
            {(d.target.start, d.text) for d in off.decorations} == \
            {(d.target.start, d.text) for d in kept}
        assert all(d.category != victim for d in off.decorations)
        assert len(base.decorations) == len(kept) + len(removed)
