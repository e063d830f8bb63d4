"""Lexer, parser, error reporting, and the canonical renderer."""

import random
from importlib import resources

import pytest

from possum.calculus import CertaintyInterval, ConflictPolicy, SourceConflictError, TNormFamily
from possum.errors import ParseError, ParseFailure
from possum.knowledge import Atom, lookup
from possum.dsl import (
    format_number,
    parse_evidence_text,
    parse_goal,
    parse_interval_text,
    parse_kb,
    parse_world,
    render_kb,
    render_world,
    tokenize,
)
from generators import dsl_kb

DATA = resources.files("possum").joinpath("data")


def _texts(tokens):
    return [t.text for t in tokens[:-1]]


class TestTokenizer:
    def test_family_label_is_one_token(self):
        assert _texts(tokenize("tnorm T1.5")) == ["tnorm", "T1.5"]

    def test_hyphens_and_digits_stay_inside_identifiers(self):
        assert _texts(tokenize("hhi-post-above-1800")) == ["hhi-post-above-1800"]

    def test_slash_separates_path_segments(self):
        assert _texts(tokenize("defense/anti-trust")) == ["defense", "/", "anti-trust"]

    def test_comments_run_to_end_of_line(self):
        toks = tokenize("alpha # beta gamma\ndelta")
        assert _texts(toks) == ["alpha", "delta"]
        assert toks[1].line == 2

    def test_positions_are_line_and_column(self):
        toks = tokenize("rule r {\n  if (a)\n}")
        by_text = {t.text: (t.line, t.column) for t in toks[:-1]}
        assert by_text["rule"] == (1, 1)
        assert by_text["r"] == (1, 6)
        assert by_text["if"] == (2, 3)
        assert by_text["a"] == (2, 7)

    def test_number_with_exponent(self):
        toks = tokenize("0.5e-3")
        assert toks[0].number == 0.5e-3

    def test_unexpected_character_reports_position(self):
        with pytest.raises(ParseError) as exc:
            tokenize("ok\n  %", "f.kb")
        assert (exc.value.line, exc.value.column) == (2, 3)
        assert exc.value.source_name == "f.kb"

    def test_bare_question_mark_rejected(self):
        with pytest.raises(ParseError):
            tokenize("?")


KB_FIXTURE = """
lexicon { likely = 0.75; }

taxonomy deals/big;

rule first path deals/big context (gate ?x) tnorm T2 suff likely nec 0.1 {
  if (a ?x)
     (b)
  then (c ?x)
}

case old-one path deals/big tnorm T3 suff 0.9 nec 0 {
  roles ?x
  context (climate)
  if (a ?x)
  then (c ?x)
}

precedent (c) from deals tnorm T1;
"""


class TestKbParsing:
    def test_fixture_parses_completely(self):
        kb = parse_kb(KB_FIXTURE, "fixture.kb")
        rule = kb.rules["first"]
        assert rule.sufficiency == 0.75
        assert rule.necessity == 0.1
        assert rule.family is TNormFamily.T2
        assert rule.rule_class == ("deals", "big")
        assert rule.context == (Atom("gate", ("?x",)),)
        assert rule.antecedents == (Atom("a", ("?x",)), Atom("b"))
        assert rule.consequent == Atom("c", ("?x",))
        case = kb.case_library.templates["old-one"]
        assert case.path == ("deals", "big")
        assert case.roles == ("?x",)
        assert case.context == (Atom("climate"),)
        link = kb.precedent_links["c"]
        assert link.path == ("deals",)
        assert link.family is TNormFamily.T1

    def test_lexicon_may_follow_its_uses(self):
        text = (
            "rule r tnorm T2 suff likely nec 0 { if (a) then (b) }\n"
            "lexicon { likely = 0.6; }\n"
        )
        kb = parse_kb(text)
        assert kb.rules["r"].sufficiency == 0.6

    def test_unknown_lexicon_label(self):
        text = "rule r tnorm T2 suff nonsense nec 0 { if (a) then (b) }"
        with pytest.raises(ParseError) as exc:
            parse_kb(text)
        assert "nonsense" in exc.value.message

    def test_unknown_family_position(self):
        text = "rule r1 tnorm T9 suff 0.5 nec 0 {\n  if (a)\n  then (b)\n}\n"
        with pytest.raises(ParseError) as exc:
            parse_kb(text, "bad.kb")
        err = exc.value
        assert (err.line, err.column) == (1, 15)
        assert "T9" in err.message
        assert str(err).startswith("bad.kb:1:15:")

    def test_out_of_range_strength_position(self):
        with pytest.raises(ParseError) as exc:
            parse_kb("lexicon { big = 1.5; }")
        assert (exc.value.line, exc.value.column) == (1, 17)
        assert "outside [0, 1]" in exc.value.message

    def test_duplicate_rule_identifier(self):
        text = (
            "rule r tnorm T2 suff 0.5 nec 0 { if (a) then (b) }\n"
            "rule r tnorm T3 suff 0.5 nec 0 { if (a) then (b) }\n"
        )
        with pytest.raises(ParseError) as exc:
            parse_kb(text)
        assert "declared twice" in exc.value.message
        assert exc.value.line == 2

    def test_case_under_undeclared_path(self):
        text = (
            "case c path nowhere tnorm T2 suff 0.5 nec 0 {\n"
            "  roles\n  if (a)\n  then (b)\n}\n"
        )
        with pytest.raises(ParseError) as exc:
            parse_kb(text)
        assert "undeclared path nowhere" in exc.value.message

    def test_recovery_collects_several_errors(self):
        text = (
            "rule broken tnorm T9 suff 0.9 nec 0 {\n"
            "  if (a)\n"
            "  then (b)\n"
            "}\n"
            "case floating path nowhere tnorm T2 suff 0.9 nec 0 {\n"
            "  roles\n"
            "  if (a)\n"
            "  then (b)\n"
            "}\n"
            "rule fine tnorm T2 suff 0.9 nec 0 { if (a) then (b) }\n"
        )
        with pytest.raises(ParseFailure) as exc:
            parse_kb(text, "multi.kb")
        errors = exc.value.errors
        assert len(errors) == 2
        assert errors[0].line == 1
        assert "T9" in errors[0].message
        assert errors[1].line == 5
        assert "nowhere" in errors[1].message

    def test_missing_brace_reports_expected_token(self):
        with pytest.raises(ParseError) as exc:
            parse_kb("rule r tnorm T2 suff 0.5 nec 0 \n if (a) then (b) }")
        assert "'{'" in exc.value.message


WORLD_FIXTURE = """
world sample {
  roles ?x = Mobil ?y = Marathon;
  fact (deal ?x ?y) [0.8, 1] @filings;
  fact (deal ?x ?y) [0.6, 0.9] @press;
  fact (background) [0.3, 0.7];
  askable market-share;
}
"""


class TestWorldParsing:
    def test_fixture_parses(self):
        world = parse_world(WORLD_FIXTURE)
        assert world.identifier == "sample"
        assert world.roles == {"?x": "Mobil", "?y": "Marathon"}
        deal = Atom("deal", ("Mobil", "Marathon"))
        assert world.facts[deal].sources() == ["filings", "press"]
        assert lookup(world, deal) == CertaintyInterval(0.8, 0.9)
        assert lookup(world, Atom("background")) == CertaintyInterval(0.3, 0.7)
        assert world.facts[Atom("background")].sources() == ["asserted"]
        assert world.askables == {"market-share"}

    def test_duplicate_role_binding(self):
        text = "world w {\n  roles ?x = A ?x = B;\n}"
        with pytest.raises(ParseError) as exc:
            parse_world(text)
        assert "bound twice" in exc.value.message

    def test_unbound_role_in_fact(self):
        text = "world w {\n  fact (p ?ghost) [0, 1];\n}"
        with pytest.raises(ParseError) as exc:
            parse_world(text)
        assert "?ghost" in exc.value.message

    def test_strict_conflict_surfaces_during_parse(self):
        text = (
            "world w {\n"
            "  fact (p) [0.9, 1] @one;\n"
            "  fact (p) [0, 0.2] @two;\n"
            "}"
        )
        with pytest.raises(SourceConflictError):
            parse_world(text)
        world = parse_world(text, policy=ConflictPolicy.LENIENT)
        assert lookup(world, Atom("p")) == CertaintyInterval(0.0, 1.0)
        assert world.diagnostics

    def test_inverted_interval_rejected(self):
        with pytest.raises(ParseError) as exc:
            parse_world("world w {\n  fact (p) [0.9, 0.2];\n}")
        assert "exceeds" in exc.value.message


class TestSmallParsers:
    def test_goal(self):
        atom, negated = parse_goal("(anti-trust-success Mobil Marathon)")
        assert atom == Atom("anti-trust-success", ("Mobil", "Marathon"))
        assert not negated

    def test_negated_goal(self):
        atom, negated = parse_goal("(not (merger-blocked ?x))")
        assert atom == Atom("merger-blocked", ("?x",))
        assert negated

    def test_goal_trailing_garbage(self):
        with pytest.raises(ParseError):
            parse_goal("(a) (b)")

    def test_interval(self):
        assert parse_interval_text("[0.25, 1]") == CertaintyInterval(0.25, 1.0)

    def test_evidence_with_source(self):
        atom, interval, source = parse_evidence_text("(p A) [0.5, 0.75] @lab")
        assert atom == Atom("p", ("A",))
        assert interval == CertaintyInterval(0.5, 0.75)
        assert source == "lab"

    def test_evidence_without_source(self):
        _, _, source = parse_evidence_text("(p) [0, 1]")
        assert source is None


class TestRenderer:
    def test_format_number(self):
        assert format_number(0.0) == "0"
        assert format_number(1.0) == "1"
        assert format_number(0.85) == "0.85"
        assert float(format_number(0.1 + 0.2)) == 0.1 + 0.2

    def test_fixture_round_trip(self):
        kb = parse_kb(KB_FIXTURE, "fixture.kb")
        assert parse_kb(render_kb(kb)) == kb

    def test_render_is_canonical(self):
        kb = parse_kb(KB_FIXTURE, "fixture.kb")
        text = render_kb(kb)
        assert render_kb(parse_kb(text)) == text
        assert "lexicon" not in text
        assert "0.75" in text

    def test_demo_kb_round_trip(self):
        kb = parse_kb(DATA.joinpath("demo.kb").read_text(), "demo.kb")
        assert parse_kb(render_kb(kb)) == kb

    def test_demo_world_round_trip(self):
        world = parse_world(DATA.joinpath("m1.world").read_text(), "m1.world")
        again = parse_world(render_world(world))
        assert again.identifier == world.identifier
        assert again.roles == world.roles
        assert again.askables == world.askables
        assert set(again.facts) == set(world.facts)
        for atom, fact in world.facts.items():
            assert again.facts[atom].evidence == fact.evidence
            assert again.facts[atom].effective == fact.effective

    def test_generated_kbs_round_trip(self):
        for seed in range(40):
            kb = dsl_kb(random.Random(seed))
            text = render_kb(kb)
            assert parse_kb(text, f"gen{seed}.kb") == kb, f"seed {seed}"
