import random

import pytest

from mwer.align import (
    CostConfig,
    NodeKind,
    ScoreTuple,
    StepKind,
    WildcardInHypothesis,
    align,
    align_chars,
    char_cost,
    expand_to_chars,
    flatten,
    levenshtein,
)
from mwer.annotation import Token, parse_annotation, tokenize

from oracles import (
    min_expansion_char_distance,
    min_expansion_word_distance,
    random_annotation_text,
    random_hypothesis,
    word_levenshtein,
)


def toks(text):
    return tokenize(text)


def kinds(alignment):
    return [s.kind for s in alignment.steps]


class TestLevenshtein:
    def test_hello_hey_is_3(self):
        assert levenshtein("hello", "hey") == 3

    def test_identity(self):
        assert levenshtein("x", "x") == 0

    def test_empty(self):
        assert levenshtein("", "abc") == 3
        assert levenshtein("abc", "") == 3

    def test_random_against_word_level(self):
        rng = random.Random(7)
        for _ in range(200):
            a = "".join(rng.choice("abc") for _ in range(rng.randint(0, 8)))
            b = "".join(rng.choice("abc") for _ in range(rng.randint(0, 8)))
            assert levenshtein(a, b) == word_levenshtein(list(a), list(b))


class TestCharCost:
    def test_replacement(self):
        assert char_cost(Token("hello"), Token("hey"), StepKind.REPLACEMENT) == 3

    def test_deletion_is_token_length(self):
        assert char_cost(Token("abc"), None, StepKind.DELETION) == 3

    def test_insertion_is_token_length(self):
        assert char_cost(None, Token("abcd"), StepKind.INSERTION) == 4

    def test_correct_is_zero(self):
        assert char_cost(Token("x"), Token("x"), StepKind.CORRECT) == 0


class TestFlatten:
    def test_single_token(self):
        flat = flatten(parse_annotation("hello"))
        assert [n.kind for n in flat.nodes] == [
            NodeKind.START, NodeKind.TOKEN, NodeKind.END,
        ]
        assert flat.successors[0] == {1}
        assert flat.successors[1] == {2}

    def test_optional_block_jump_edge(self):
        # {A|B} {C} D: the A->D edge exists because {C} is optional
        flat = flatten(parse_annotation("{A|B} {C} D"))
        by_text = {n.text: n.id for n in flat.token_nodes()}
        a, b, c, d = by_text["a"], by_text["b"], by_text["c"], by_text["d"]
        assert len(flat.token_nodes()) == 4
        assert flat.successors[0] == {a, b}
        assert flat.successors[a] == {c, d}
        assert flat.successors[b] == {c, d}
        assert flat.successors[c] == {d}
        assert flat.successors[d] == {flat.end_id}

    def test_wildcard_skip_edge(self):
        flat = flatten(parse_annotation("<*>"))
        wild = [n for n in flat.nodes if n.kind == NodeKind.WILDCARD][0]
        assert flat.successors[0] == {wild.id, flat.end_id}
        assert flat.successors[wild.id] == {flat.end_id}

    def test_consecutive_wildcards_merge(self):
        flat = flatten(parse_annotation("a <*> <*> b"))
        wilds = [n for n in flat.nodes if n.kind == NodeKind.WILDCARD]
        assert len(wilds) == 1

    def test_option_chains_do_not_cross(self):
        flat = flatten(parse_annotation("{a b|c d}"))
        by = {n.text: n for n in flat.token_nodes()}
        assert flat.successors[by["a"].id] == {by["b"].id}
        assert flat.successors[by["c"].id] == {by["d"].id}

    def test_every_node_on_a_start_end_path(self):
        flat = flatten(parse_annotation("{a|b c} <*> {d|} e"))
        reach_fwd = {0}
        for nid in range(len(flat.nodes)):
            if nid in reach_fwd:
                reach_fwd |= flat.successors[nid]
        assert reach_fwd == set(range(len(flat.nodes)))
        reach_back = {flat.end_id}
        for nid in reversed(range(len(flat.nodes))):
            if nid in reach_back:
                reach_back |= set(flat.predecessors[nid])
        assert reach_back == set(range(len(flat.nodes)))

    def test_membership(self):
        flat = flatten(parse_annotation("x {a|b}"))
        by = {n.text: n for n in flat.token_nodes()}
        assert by["x"].option_index is None
        assert by["a"].segment_index == by["b"].segment_index == 1
        assert {by["a"].option_index, by["b"].option_index} == {0, 1}


class TestScoreTuple:
    def test_lexicographic_order(self):
        assert ScoreTuple(0, 5, 9) < ScoreTuple(1, 9, 0)
        assert ScoreTuple(1, 5, 0) < ScoreTuple(1, 4, 0)  # more matches wins
        assert ScoreTuple(1, 4, 2) < ScoreTuple(1, 4, 3)

    def test_addition(self):
        assert ScoreTuple(1, 2, 3) + ScoreTuple(4, 5, 6) == ScoreTuple(5, 7, 9)


class TestAlign:
    def test_identity(self):
        flat = flatten(parse_annotation("a b c"))
        out = align(flat, toks("a b c"))
        assert kinds(out) == [StepKind.CORRECT] * 3
        assert out.score == ScoreTuple(0, 3, 0)

    def test_word_alignment_prefers_similar_words(self):
        # "multivariant" pairs with "multivariate", not with "though"
        flat = flatten(parse_annotation("multivariate though"))
        out = align(flat, toks("multivariant"))
        assert kinds(out) == [StepKind.REPLACEMENT, StepKind.DELETION]
        assert out.steps[0].ref_token.text == "multivariate"
        assert out.steps[0].hyp_token.text == "multivariant"
        assert out.steps[1].ref_token.text == "though"
        assert out.score.word_errors == 2

    def test_replacement_char_errors(self):
        flat = flatten(parse_annotation("hello"))
        out = align(flat, toks("hey"))
        assert out.score == ScoreTuple(1, 0, 3)

    def test_wildcard_absorbs_run(self):
        flat = flatten(parse_annotation("a <*> b"))
        out = align(flat, toks("a x y z b"))
        assert kinds(out) == [
            StepKind.CORRECT,
            StepKind.WILDCARD_ABSORBED,
            StepKind.WILDCARD_ABSORBED,
            StepKind.WILDCARD_ABSORBED,
            StepKind.CORRECT,
        ]
        assert out.score == ScoreTuple(0, 2, 0)

    def test_wildcard_matches_empty(self):
        flat = flatten(parse_annotation("a <*> b"))
        out = align(flat, toks("a b"))
        assert out.score.word_errors == 0

    def test_block_option_choice(self):
        flat = flatten(parse_annotation("{one|1}"))
        out = align(flat, toks("1"))
        assert kinds(out) == [StepKind.CORRECT]
        assert out.score == ScoreTuple(0, 1, 0)

    def test_empty_hypothesis_deletes_everything(self):
        flat = flatten(parse_annotation("a b c"))
        out = align(flat, [])
        assert kinds(out) == [StepKind.DELETION] * 3

    def test_optional_block_not_deleted_when_absent(self):
        flat = flatten(parse_annotation("{well|} , of course"))
        out = align(flat, toks("of course"))
        assert out.score.word_errors == 0

    def test_rejects_wildcard_in_hypothesis(self):
        flat = flatten(parse_annotation("a"))
        with pytest.raises(WildcardInHypothesis):
            align(flat, [Token("<*>")])

    def test_hyp_tokens_reproduced_in_order(self):
        flat = flatten(parse_annotation("{a|b c} d <*>"))
        hyp = toks("b x d q")
        out = align(flat, hyp)
        emitted = [s.hyp_token.text for s in out.steps if s.hyp_token]
        assert emitted == [t.text for t in hyp]

    def test_ref_path_respects_edges(self):
        flat = flatten(parse_annotation("{a|b c} d <*>"))
        out = align(flat, toks("b x d q"))
        path = out.ref_path
        assert path[0] == 0 and path[-1] == flat.end_id
        for u, v in zip(path, path[1:]):
            assert v in flat.successors[u]

    def test_word_errors_count_matches_step_kinds(self):
        flat = flatten(parse_annotation("{a|b c} d <*> e"))
        out = align(flat, toks("b q d z w"))
        bad = sum(
            1
            for s in out.steps
            if s.kind in (StepKind.REPLACEMENT, StepKind.INSERTION, StepKind.DELETION)
        )
        assert out.score.word_errors == bad

    def test_deterministic(self):
        flat = flatten(parse_annotation("{a|b} {c|} d"))
        hyp = toks("b d")
        first = align(flat, hyp)
        for _ in range(3):
            assert align(flat, hyp) == first

    def test_plain_matches_wagner_fischer(self):
        rng = random.Random(3)
        for _ in range(150):
            ref = [rng.choice("abcd") for _ in range(rng.randint(0, 8))]
            hyp = [rng.choice("abcd") for _ in range(rng.randint(0, 8))]
            if not ref:
                continue
            flat = flatten(parse_annotation(" ".join(ref)))
            got = align(flat, [Token(w) for w in hyp])
            assert got.score.word_errors == word_levenshtein(ref, hyp)

    def test_oracle_equivalence_randomized(self):
        rng = random.Random(42)
        for _ in range(400):
            text = random_annotation_text(rng)
            try:
                ann = parse_annotation(text)
            except ValueError:
                continue
            hyp = random_hypothesis(rng, ann)
            got = align(flatten(ann), [Token(w) for w in hyp])
            want = min_expansion_word_distance(ann, hyp)
            assert got.score.word_errors == want, (text, hyp)

    def test_correct_matches_maximized_among_optimal(self):
        # options "a b" and "c" both cost 1 word error against "a d",
        # but "a b" yields 2 correct matches and "c" only 1
        flat = flatten(parse_annotation("{a b|c} d"))
        out = align(flat, toks("a d"))
        assert out.score.word_errors == 1
        assert out.score.correct_matches == 2
        assert out.steps[0].kind == StepKind.CORRECT
        assert out.steps[0].ref_token.text == "a"

    def test_char_errors_break_ties(self):
        # equal word errors and correct matches; "abc" is one edit from
        # "abd" while "xyz" is three
        flat = flatten(parse_annotation("{abc|xyz}"))
        out = align(flat, toks("abd"))
        assert out.steps[0].ref_token.text == "abc"
        assert out.score == ScoreTuple(1, 0, 1)

    def test_disable_tie_breakers(self):
        flat = flatten(parse_annotation("multivariate though"))
        cfg = CostConfig(tie_breakers=())
        out = align(flat, toks("multivariant"), cfg)
        assert out.score.word_errors == 2

    def test_json_export_shape(self):
        flat = flatten(parse_annotation("a <*>"))
        data = align(flat, toks("a b")).to_json()
        assert set(data) == {"score", "steps"}
        assert set(data["score"]) == {"word_errors", "correct_matches", "char_errors"}
        for step in data["steps"]:
            assert set(step) == {"kind", "ref", "hyp", "ref_node"}


class TestWildcardProperties:
    def test_absorption_and_empty(self):
        rng = random.Random(11)
        for _ in range(200):
            prefix = [rng.choice("abcd") for _ in range(rng.randint(0, 4))]
            filler = [rng.choice("wxyz") for _ in range(rng.randint(0, 5))]
            suffix = [rng.choice("efgh") for _ in range(rng.randint(0, 4))]
            ref = " ".join(prefix) + " <*> " + " ".join(suffix)
            flat = flatten(parse_annotation(ref))
            full = align(flat, [Token(w) for w in prefix + filler + suffix])
            empty = align(flat, [Token(w) for w in prefix + suffix])
            assert full.score.word_errors == 0
            assert empty.score.word_errors == 0


class TestAlignChars:
    def test_identity(self):
        flat = flatten(parse_annotation("ab"))
        out = align_chars(flat, toks("ab"))
        assert kinds(out) == [StepKind.CORRECT] * 2
        assert out.score == ScoreTuple(0, 2, 0)

    def test_single_replacement(self):
        flat = flatten(parse_annotation("ab"))
        out = align_chars(flat, toks("ax"))
        assert sorted(kinds(out)) == sorted([StepKind.CORRECT, StepKind.REPLACEMENT])
        assert out.score.word_errors == 1

    def test_block_option_chars(self):
        flat = flatten(parse_annotation("{one|1}"))
        out = align_chars(flat, toks("one"))
        assert kinds(out) == [StepKind.CORRECT] * 3

    def test_word_boundaries_are_not_elements(self):
        flat = flatten(parse_annotation("a b"))
        out = align_chars(flat, toks("ab"))
        assert out.score.word_errors == 0

    def test_wildcard_absorbs_chars(self):
        flat = flatten(parse_annotation("a <*> b"))
        out = align_chars(flat, toks("a xyz b"))
        assert out.score.word_errors == 0

    def test_oracle_equivalence_randomized(self):
        rng = random.Random(13)
        for _ in range(200):
            text = random_annotation_text(rng, max_blocks=2, max_plain=2)
            try:
                ann = parse_annotation(text)
            except ValueError:
                continue
            hyp = random_hypothesis(rng, ann, max_tokens=6)
            got = align_chars(flatten(ann), [Token(w) for w in hyp])
            want = min_expansion_char_distance(ann, hyp)
            assert got.score.word_errors == want, (text, hyp)

    def test_expand_keeps_sentinels(self):
        flat = expand_to_chars(flatten(parse_annotation("ab {c|}")))
        assert flat.nodes[0].kind == NodeKind.START
        assert flat.nodes[-1].kind == NodeKind.END
        assert all(len(n.text) == 1 for n in flat.token_nodes())
