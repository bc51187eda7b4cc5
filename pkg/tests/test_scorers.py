import csv
import io
import itertools

import pytest
from hypothesis import given, settings, strategies as st

from corefloop.errors import ScoreLookupError, ValidationError
from corefloop.scorers import (
    CachedScorer,
    CombinedMatrixScorer,
    LambdaConfig,
    LemmaScorer,
    MatrixScorer,
    RandomScorer,
    ScoreMatrix,
    build_bert_sentence,
    build_scorer,
    combined_score,
    jaccard,
    lemma_score,
    load_score_matrix,
    random_score,
)
from corefloop.seeding import stable_uniform
from conftest import make_mention


class TestJaccard:
    def test_identity(self):
        assert jaccard({"replace"}, {"replace"}) == 1.0

    def test_disjoint(self):
        assert jaccard({"replace"}, {"take", "over"}) == 0.0

    def test_half_overlap(self):
        # |{b,c}| = 2, |{a,b,c,d}| = 4, enumerated by hand
        assert jaccard({"a", "b", "c"}, {"b", "c", "d"}) == 0.5

    def test_empty_conventions(self):
        assert jaccard(set(), set()) == 1.0
        assert jaccard({"x"}, set()) == 0.0
        assert jaccard(set(), {"x"}) == 0.0

    def test_deduplicates_lists(self):
        assert jaccard(["a", "a", "b"], ["a", "b", "b"]) == 1.0

    @given(
        st.sets(st.sampled_from("abcdefgh")),
        st.sets(st.sampled_from("abcdefgh")),
    )
    def test_symmetric_and_bounded(self, a, b):
        assert jaccard(a, b) == jaccard(b, a)
        assert 0.0 <= jaccard(a, b) <= 1.0


class TestLemmaScore:
    def test_self_similarity_is_one(self):
        m = make_mention("m1", trigger="replace", sentence="will replace Smith")
        for lam in (0.0, 0.3, 0.7, 1.0):
            assert lemma_score(m, m, LambdaConfig(lam)) == 1.0

    def test_lambda_one_uses_trigger_only(self):
        a = make_mention("a", trigger="replace", sentence="replace x y",
                         sentence_lemmas=("p", "q", "r"))
        b = make_mention("b", trigger="replace", sentence="replace u v",
                         sentence_lemmas=("s", "t", "u"))
        assert lemma_score(a, b, LambdaConfig(1.0)) == 1.0

    def test_weighted_blend_value(self):
        # JS(triggers) = 1.0; sentence sets {p,q} vs {p,q,r,s,t,u,v,w}
        # give 2 shared / 8 union = 0.25; 0.7*1.0 + 0.3*0.25 = 0.775
        a = make_mention("a", trigger="win", sentence="w1 w2",
                         sentence_lemmas=("p", "q"))
        b = make_mention("b", trigger="win",
                         sentence="w1 w2 w3 w4 w5 w6 w7 w8",
                         sentence_lemmas=("p", "q", "r", "s", "t", "u", "v", "w"))
        assert jaccard(a.sentence_lemma_set(), b.sentence_lemma_set()) == 0.25
        assert lemma_score(a, b, LambdaConfig(0.7)) == pytest.approx(0.775)

    def test_monotone_in_trigger_overlap(self):
        # candidates share the same sentence and same trigger-set size,
        # differing only in how many trigger lemmas match the target:
        # the blended score must be non-decreasing in that overlap
        cfg = LambdaConfig(0.7)
        target = make_mention("t", trigger="a b c d", sentence="a b c d x",
                              trigger_start=0)
        overlaps = ["p q r s", "a q r s", "a b r s", "a b c s", "a b c d"]
        scores = [
            lemma_score(
                target,
                make_mention(f"c{i}", trigger=trig, sentence="n o p q r",
                             trigger_start=0),
                cfg,
            )
            for i, trig in enumerate(overlaps)
        ]
        assert scores == sorted(scores)
        assert scores[0] < scores[-1]


class TestCombinedScore:
    def test_midpoint(self):
        assert combined_score(0.8, 0.4, LambdaConfig(0.5)) == pytest.approx(0.6)

    def test_lambda_zero_ignores_trigger(self):
        for trigger_side in (0.0, 0.42, 1.0):
            assert combined_score(trigger_side, 0.3, LambdaConfig(0.0)) == 0.3

    def test_derived_value(self):
        # 0.7 * 0.9 + 0.3 * 0.1 = 0.66 by hand
        assert combined_score(0.9, 0.1, LambdaConfig(0.7)) == pytest.approx(0.66)

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            combined_score(float("nan"), 0.5, LambdaConfig())
        with pytest.raises(ValueError):
            combined_score(0.5, float("inf"), LambdaConfig())

    @given(st.floats(0, 1), st.floats(0, 1))
    def test_linear_in_lambda(self, trig, ctx):
        # score(lam) = ctx + lam * (trig - ctx), checked at 0, 0.5, 1
        assert combined_score(trig, ctx, LambdaConfig(0.0)) == pytest.approx(ctx)
        assert combined_score(trig, ctx, LambdaConfig(0.5)) == pytest.approx(
            ctx + 0.5 * (trig - ctx)
        )
        assert combined_score(trig, ctx, LambdaConfig(1.0)) == pytest.approx(trig)

    def test_lambda_config_range(self):
        with pytest.raises(ValueError):
            LambdaConfig(1.5)
        with pytest.raises(ValueError):
            LambdaConfig(-0.1)
        assert LambdaConfig().lam == 0.7


class TestBertSentence:
    def test_single_token_trigger(self):
        m = make_mention("m1", trigger="replace", sentence="will replace Smith",
                         trigger_start=1)
        assert build_bert_sentence(m) == "replace [SEP] will replace Smith"

    def test_one_token_minimum(self):
        m = make_mention("m1", trigger="x", sentence="x")
        assert build_bert_sentence(m) == "x [SEP] x"

    def test_multi_token_trigger(self):
        m = make_mention(
            "m1", trigger="takes over", sentence="he takes over the show",
            trigger_start=1,
        )
        assert build_bert_sentence(m) == "takes over [SEP] he takes over the show"


class TestScoreMatrix:
    def test_csv_symmetric_lookup(self):
        mx = load_score_matrix("mention_id_a,mention_id_b,score\nm1,m2,0.9\n")
        a, b = make_mention("m1"), make_mention("m2")
        scorer = MatrixScorer(mx)
        assert scorer.score(a, b) == 0.9
        assert scorer.score(b, a) == 0.9

    def test_conflicting_duplicate_rejected(self):
        text = "mention_id_a,mention_id_b,score\nm1,m2,0.9\nm2,m1,0.8\n"
        with pytest.raises(ValidationError, match="conflicting"):
            load_score_matrix(text)

    def test_agreeing_duplicate_ok(self):
        text = "mention_id_a,mention_id_b,score\nm1,m2,0.9\nm2,m1,0.9\n"
        assert load_score_matrix(text).lookup("m1", "m2") == 0.9

    def test_jsonl_format(self):
        text = '{"a": "m1", "b": "m2", "score": 0.75}\n'
        assert load_score_matrix(text).lookup("m2", "m1") == 0.75

    def test_missing_pair_without_default(self):
        mx = load_score_matrix("mention_id_a,mention_id_b,score\nm1,m2,0.9\n")
        with pytest.raises(ScoreLookupError, match="m1.*m3"):
            mx.lookup("m1", "m3")

    def test_missing_pair_with_default(self):
        mx = load_score_matrix(
            "mention_id_a,mention_id_b,score\nm1,m2,0.9\n", default_score=0.1
        )
        assert mx.lookup("m1", "m3") == 0.1

    def test_bad_header(self):
        with pytest.raises(ValidationError, match="header"):
            load_score_matrix("a,b,c\nm1,m2,0.9\n")

    def test_non_finite_rejected(self):
        with pytest.raises(ValidationError, match="not finite"):
            load_score_matrix("mention_id_a,mention_id_b,score\nm1,m2,nan\n")

    def test_hundred_pairs_against_reparse_oracle(self):
        # independent oracle: re-read the file with the csv module
        ids = [f"m{i}" for i in range(15)]
        rows = ["mention_id_a,mention_id_b,score"]
        expected = {}
        count = 0
        for a, b in itertools.combinations(ids, 2):
            if count >= 100:
                break
            score = round(stable_uniform("fixture", a, b), 6)
            rows.append(f"{a},{b},{score}")
            expected[frozenset((a, b))] = score
            count += 1
        text = "\n".join(rows) + "\n"
        mx = load_score_matrix(text)

        reparsed = {}
        for row in csv.DictReader(io.StringIO(text)):
            reparsed[frozenset((row["mention_id_a"], row["mention_id_b"]))] = float(
                row["score"]
            )
        assert reparsed == expected
        for pair, score in reparsed.items():
            a, b = sorted(pair)
            assert mx.lookup(a, b) == score
            assert mx.lookup(b, a) == score


class TestRandomScore:
    def test_deterministic(self):
        a, b = make_mention("a"), make_mention("b")
        assert random_score(42, a, b) == random_score(42, a, b)

    def test_symmetric(self):
        a, b = make_mention("a"), make_mention("b")
        assert random_score(42, a, b) == random_score(42, b, a)

    def test_seed_changes_value(self):
        a, b = make_mention("a"), make_mention("b")
        assert random_score(1, a, b) != random_score(2, a, b)

    def test_mean_near_half(self):
        # Monte Carlo over 1e5 distinct pairs
        mentions = [make_mention(f"m{i}") for i in range(450)]
        total = 0.0
        n = 0
        for a, b in itertools.combinations(mentions, 2):
            total += random_score(7, a, b)
            n += 1
            if n >= 100_000:
                break
        assert n == 100_000
        assert abs(total / n - 0.5) < 0.01


def _mention_pairs():
    lemmas = st.lists(st.sampled_from(["run", "win", "buy", "sell", "talk"]),
                      min_size=1, max_size=3)
    ids = st.sampled_from([f"m{i}" for i in range(8)])

    def build(args):
        ida, idb, la, lb = args
        a = make_mention(ida, trigger=" ".join(la), sentence=" ".join(la + ["x"]))
        b = make_mention(idb, trigger=" ".join(lb), sentence=" ".join(lb + ["y"]))
        return a, b

    return st.tuples(ids, ids, lemmas, lemmas).map(build)


@pytest.mark.parametrize(
    "factory",
    [
        lambda: LemmaScorer(LambdaConfig(0.7)),
        lambda: RandomScorer(13),
        lambda: MatrixScorer(ScoreMatrix(default_score=0.4)),
        lambda: CombinedMatrixScorer(
            ScoreMatrix(default_score=0.2), ScoreMatrix(default_score=0.8)
        ),
        lambda: CachedScorer(LemmaScorer()),
    ],
    ids=["lemma", "random", "matrix", "combined", "cached"],
)
@settings(max_examples=40)
@given(pair=_mention_pairs())
def test_every_scorer_symmetric_and_deterministic(factory, pair):
    scorer = factory()
    a, b = pair
    first = scorer.score(a, b)
    assert scorer.score(b, a) == first
    assert scorer.score(a, b) == first


class TestBuildScorer:
    def test_lemma_default(self):
        scorer = build_scorer("lemma")
        assert scorer.name == "lemma"
        assert scorer.cfg.lam == 0.7

    def test_matrix_requires_one_file(self):
        with pytest.raises(ValidationError, match="exactly one"):
            build_scorer("matrix", matrix_paths=())

    def test_combined_requires_two_files(self):
        with pytest.raises(ValidationError, match="two score files"):
            build_scorer("combined", matrix_paths=("one.csv",))

    def test_lemma_rejects_matrix(self):
        with pytest.raises(ValidationError, match="takes no score matrix"):
            build_scorer("lemma", matrix_paths=("x.csv",))

    def test_unknown_name(self):
        with pytest.raises(ValidationError, match="unknown scorer"):
            build_scorer("bert")

    def test_matrix_from_file(self, tmp_path):
        path = tmp_path / "scores.csv"
        path.write_text("mention_id_a,mention_id_b,score\nm1,m2,0.9\n")
        scorer = build_scorer("matrix", matrix_paths=(str(path),))
        assert scorer.score(make_mention("m1"), make_mention("m2")) == 0.9
