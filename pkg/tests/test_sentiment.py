import random
from collections import Counter

import pytest

from tweetscope import sentiment
from tweetscope.errors import CoverageError, DataError
from util import clean_tweet


class TestLexiconScore:
    def test_no_hits_is_neutral_zero(self):
        sl = sentiment.lexicon_score("the quick brown fox", lexicon={"love": 0.8})
        assert sl.label == "neutral"
        assert sl.confidence == pytest.approx(1.0)
        assert sentiment.signed_score(sl) == pytest.approx(0.0)

    def test_single_full_valence_token(self):
        sl = sentiment.lexicon_score("love", lexicon={"love": 1.0})
        assert sl.label == "positive"
        assert sl.confidence == pytest.approx(1.0)

    def test_hand_computed_mixed_example(self):
        lex = {"love": 0.8, "great": 0.7, "scam": -0.9}
        sl = sentiment.lexicon_score("love great scam", lexicon=lex)
        # (0.8 + 0.7 - 0.9) / 3 = 0.2 > 0.15
        assert sl.label == "positive"
        assert sl.confidence == pytest.approx(0.2)

    def test_threshold_boundaries(self):
        assert sentiment.lexicon_score("ok", {"ok": 0.15}).label == "neutral"
        assert sentiment.lexicon_score("ok", {"ok": 0.16}).label == "positive"
        assert sentiment.lexicon_score("ok", {"ok": -0.16}).label == "negative"

    def test_distribution_coherent(self):
        for text, lex in (
            ("love it", {"love": 0.9}),
            ("scam alert", {"scam": -0.8}),
            ("nothing here", {"love": 0.8}),
        ):
            sl = sentiment.lexicon_score(text, lexicon=lex)
            probs = {"positive": sl.p_pos, "neutral": sl.p_neu, "negative": sl.p_neg}
            assert sum(probs.values()) == pytest.approx(1.0, abs=1e-9)
            assert max(probs, key=probs.get) == sl.label
            sl.validate()


class TestProviders:
    def test_precomputed_passthrough(self):
        sl = sentiment.SentimentLabel("positive", 0.91)
        provider = sentiment.PrecomputedSentiment({"a": sl})
        got = sentiment.score(provider, clean_tweet("a"))
        assert got.label == "positive" and got.confidence == 0.91

    def test_precomputed_missing_id(self):
        provider = sentiment.PrecomputedSentiment({})
        with pytest.raises(CoverageError):
            sentiment.score(provider, clean_tweet("a"))

    def test_scoring_is_pure(self):
        provider = sentiment.LexiconSentiment()
        t = clean_tweet("a", "I love this great project")
        assert sentiment.score(provider, t) == sentiment.score(provider, t)

    def test_csv_round_trip(self, tmp_path):
        labels = {
            "a": sentiment.lexicon_score("love", {"love": 0.8}),
            "b": sentiment.SentimentLabel("neutral", 0.5),
        }
        path = tmp_path / "labels.csv"
        sentiment.write_sentiment_csv(labels, path)
        loaded = sentiment.load_sentiment_csv(path).labels
        assert loaded["a"].label == labels["a"].label
        assert loaded["a"].p_pos == pytest.approx(labels["a"].p_pos)
        assert loaded["b"].p_pos is None

    def test_invalid_distribution_rejected(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("tweet_id,label,confidence,p_pos,p_neu,p_neg\na,positive,0.9,0.9,0.4,0.1\n")
        with pytest.raises(DataError):
            sentiment.load_sentiment_csv(path)


def _label(kind):
    return sentiment.SentimentLabel(kind, 1.0)


class TestTimeline:
    BIN = 3_600_000

    def test_all_positive_bin(self):
        tweets = [clean_tweet(f"t{i}", ts=100 + i) for i in range(4)]
        labels = {t.id: _label("positive") for t in tweets}
        tl = sentiment.timeline(tweets, labels, self.BIN, {"overall": None})["overall"]
        (b,) = tl.bins
        assert (b.ratio_pos, b.ratio_neu, b.ratio_neg) == (1.0, 0.0, 0.0)
        assert b.avg_sentiment == pytest.approx(1.0)

    def test_balanced_bin_averages_to_zero(self):
        tweets = [clean_tweet("a", ts=1), clean_tweet("b", ts=2)]
        labels = {"a": _label("positive"), "b": _label("negative")}
        tl = sentiment.timeline(tweets, labels, self.BIN, {"overall": None})["overall"]
        (b,) = tl.bins
        assert (b.ratio_pos, b.ratio_neu, b.ratio_neg) == (0.5, 0.0, 0.5)
        assert b.avg_sentiment == pytest.approx(0.0)

    def test_planted_per_bin_counts(self):
        rng = random.Random(21)
        tweets = []
        labels = {}
        planted = {}
        for i in range(1000):
            b = rng.randrange(12)
            kind = ("positive", "neutral", "negative")[rng.randrange(3)]
            ts = b * self.BIN + rng.randrange(self.BIN)
            t = clean_tweet(f"t{i}", ts=ts)
            tweets.append(t)
            labels[t.id] = _label(kind)
            key = (b * self.BIN, kind)
            planted[key] = planted.get(key, 0) + 1
        tl = sentiment.timeline(tweets, labels, self.BIN, {"overall": None})["overall"]
        assert sum(b.n for b in tl.bins) == 1000
        for b in tl.bins:
            if b.n == 0:
                assert b.ratio_pos is None
                continue
            for kind, ratio in (
                ("positive", b.ratio_pos), ("neutral", b.ratio_neu), ("negative", b.ratio_neg)
            ):
                assert round(ratio * b.n) == planted.get((b.start_ms, kind), 0)
            assert abs(b.ratio_pos + b.ratio_neu + b.ratio_neg - 1.0) <= 1e-9
            assert -1.0 <= b.avg_sentiment <= 1.0

    def test_scope_partition_conserves_counts(self):
        tweets = [clean_tweet(f"t{i}", ts=i * 1000) for i in range(30)]
        labels = {t.id: _label("neutral") for t in tweets}
        evens = {t.id for i, t in enumerate(tweets) if i % 2 == 0}
        odds = {t.id for i, t in enumerate(tweets) if i % 2 == 1}
        out = sentiment.timeline(tweets, labels, self.BIN, {"e": evens, "o": odds, "all": None})
        assert sum(b.n for b in out["e"].bins) == 15
        assert sum(b.n for b in out["o"].bins) == 15
        assert sum(b.n for b in out["all"].bins) == 30

    def test_scopes_share_the_corpus_time_axis(self):
        tweets = [clean_tweet("a", ts=10), clean_tweet("b", ts=10 + 5 * self.BIN)]
        labels = {"a": _label("neutral"), "b": _label("neutral")}
        scoped = sentiment.timeline(tweets, labels, self.BIN, {"only_b": {"b"}})["only_b"]
        assert len(scoped.bins) == 6
        assert scoped.bins[0].n == 0 and scoped.bins[0].ratio_pos is None
        assert scoped.bins[-1].n == 1

    def test_distribution_average_uses_signed_expectation(self):
        sl = sentiment.SentimentLabel("positive", 0.6, 0.6, 0.3, 0.1)
        tweets = [clean_tweet("a", ts=5)]
        tl = sentiment.timeline(tweets, {"a": sl}, self.BIN, {"overall": None})["overall"]
        assert tl.bins[0].avg_sentiment == pytest.approx(0.5)

    def test_missing_labels_rejected(self):
        with pytest.raises(CoverageError):
            sentiment.timeline([clean_tweet("a")], {}, self.BIN, {"overall": None})
