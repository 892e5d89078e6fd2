import io
import json
import random
from collections import Counter

import pytest

from tweetscope import ingest
from tweetscope.errors import ConfigError, DataError, ParseError
from util import clean_tweet, random_noisy_string, raw_tweet


def _jsonl(records):
    return io.StringIO("\n".join(json.dumps(r) for r in records) + "\n")


def _record(tid, **kw):
    rec = {
        "id": tid,
        "timestamp_ms": 1_667_952_000_000,
        "user.id": "u1",
        "full_text": "hello crypto",
        "quote_count": 0,
        "reply_count": 0,
        "retweet_count": 0,
        "favorite_count": 0,
    }
    rec.update(kw)
    return rec


class TestLoadTweets:
    def test_three_well_formed_lines(self):
        tweets, report = ingest.load_tweets(_jsonl([_record("a"), _record("b"), _record("c")]))
        assert [t.id for t in tweets] == ["a", "b", "c"]
        assert report.malformed == 0
        assert report.loaded == 3

    def test_missing_id_is_skipped_and_counted(self):
        rec = _record("x")
        del rec["id"]
        tweets, report = ingest.load_tweets(_jsonl([rec, _record("b")]))
        assert [t.id for t in tweets] == ["b"]
        assert report.malformed == 1
        assert report.malformed_lines[0][0] == 1

    def test_duplicate_ids_keep_first(self):
        first = _record("a", full_text="first")
        second = _record("a", full_text="second")
        tweets, report = ingest.load_tweets(_jsonl([first, second]))
        assert len(tweets) == 1
        assert tweets[0].full_text == "first"
        assert report.duplicates == 1

    def test_strict_mode_raises_with_line_number(self):
        rec = _record("x", timestamp_ms=-1)
        with pytest.raises(ParseError) as err:
            ingest.load_tweets(_jsonl([_record("a"), rec]), strict=True)
        assert err.value.line_no == 2

    def test_nested_and_dotted_layouts_are_equivalent(self):
        nested = {
            "id": "n1",
            "timestamp_ms": 5,
            "user": {"id": "u9", "friends_count": 3, "followers_count": 4},
            "full_text": "hi",
            "quoted_status": {"id": "q1", "user": {"id": "qu1"}},
        }
        tweets, _ = ingest.load_tweets(_jsonl([nested]))
        t = tweets[0]
        assert (t.user_id, t.user_friends_count, t.user_followers_count) == ("u9", 3, 4)
        assert (t.quoted_status_id, t.quoted_status_user_id) == ("q1", "qu1")

    def test_incomplete_reference_pair_kept_but_nulled(self):
        rec = _record("a", in_reply_to_status_id="t9")  # no user id half
        tweets, report = ingest.load_tweets(_jsonl([rec]))
        assert report.pair_violations == 1
        assert tweets[0].in_reply_to_status_id is None
        assert tweets[0].in_reply_to_user_id is None

    def test_unreadable_source_raises_data_error(self, tmp_path):
        with pytest.raises((DataError, OSError)):
            ingest.load_tweets(tmp_path / "nope.jsonl")

    def test_negative_count_is_malformed(self):
        tweets, report = ingest.load_tweets(_jsonl([_record("a", quote_count=-2)]))
        assert not tweets and report.malformed == 1


class TestKeywordFilter:
    def test_case_insensitive_token_match(self):
        kw = ingest.KeywordList(frozenset(["crypto"]))
        kept = ingest.filter_by_keywords([raw_tweet("a", "I love Crypto")], kw)
        assert [t.id for t in kept] == ["a"]

    def test_token_match_rejects_substrings(self):
        kw = ingest.KeywordList(frozenset(["crypto"]))
        kept = ingest.filter_by_keywords([raw_tweet("a", "cryptography talk")], kw)
        assert kept == []

    def test_substring_mode_accepts_substrings(self):
        kw = ingest.KeywordList(frozenset(["crypto"]))
        kept = ingest.filter_by_keywords(
            [raw_tweet("a", "cryptography talk")], kw, mode="substring"
        )
        assert [t.id for t in kept] == ["a"]

    def test_planted_forty_of_hundred(self):
        rng = random.Random(42)
        planted = set(rng.sample(range(100), 40))
        tweets = []
        for i in range(100):
            words = ["alpha", "beta", "gamma"]
            if i in planted:
                words.insert(rng.randrange(3), "blockchain")
            tweets.append(raw_tweet(f"t{i}", " ".join(words)))
        # independent scan: whitespace tokens, no engine code
        expected = {t.id for t in tweets if "blockchain" in t.full_text.split()}
        assert len(expected) == 40
        kept = ingest.filter_by_keywords(tweets, ingest.KeywordList(frozenset(["blockchain"])))
        assert {t.id for t in kept} == expected

    def test_monotone_in_keyword_set(self):
        tweets = [raw_tweet(f"t{i}", text) for i, text in enumerate(["a b", "b c", "c d", "x y"])]
        small = ingest.filter_by_keywords(tweets, ingest.KeywordList(frozenset(["b"])))
        large = ingest.filter_by_keywords(tweets, ingest.KeywordList(frozenset(["b", "d"])))
        assert {t.id for t in small} <= {t.id for t in large}

    def test_empty_keyword_list_rejected(self):
        with pytest.raises(ConfigError):
            ingest.KeywordList(frozenset())


class TestNormalize:
    def test_mention_and_url_replacement(self):
        assert ingest.normalize_text("@alice check https://t.co/xyz now") == "user check http now"

    def test_identity_on_plain_text(self):
        assert ingest.normalize_text("no mentions here") == "no mentions here"

    def test_whitespace_collapse_and_trim(self):
        assert ingest.normalize_text("  a \t b\n\nc ") == "a b c"

    def test_repeated_at_signs(self):
        assert ingest.normalize_text("@@alice hi") == "user hi"

    def test_idempotence_on_random_noise(self):
        rng = random.Random(7)
        for _ in range(2000):
            s = random_noisy_string(rng)
            once = ingest.normalize_text(s)
            assert ingest.normalize_text(once) == once

    def test_no_mentions_or_urls_survive(self):
        rng = random.Random(8)
        import re

        for _ in range(500):
            out = ingest.normalize_text(random_noisy_string(rng))
            assert not re.search(r"@\w", out)
            assert "http://" not in out and "https://" not in out


class TestSpamFilter:
    TEMPLATE = "uniswap is being exploited by this dude"

    def _templates(self):
        return ingest.SpamTemplateList([self.TEMPLATE])

    def test_paper_template_match(self):
        t = clean_tweet(
            "a", "Uniswap is being exploited by this dude. Why is nobody talking about this?"
        )
        kept, removed, report = ingest.filter_spam([t], self._templates())
        assert not kept and [x.id for x in removed] == ["a"]
        assert report[self.TEMPLATE] == 1

    def test_empty_template_list_keeps_all(self):
        tweets = [clean_tweet("a"), clean_tweet("b")]
        kept, removed, _ = ingest.filter_spam(tweets, ingest.SpamTemplateList([]))
        assert len(kept) == 2 and not removed

    def test_planted_eighty_of_thousand(self):
        rng = random.Random(1)
        planted = set(rng.sample(range(1000), 80))
        tweets = []
        for i in range(1000):
            if i in planted:
                text = f"so wild: {self.TEMPLATE} really weird {i}"
            else:
                text = f"ordinary chatter about markets {i}"
            tweets.append(clean_tweet(f"t{i}", text))
        kept, removed, report = ingest.filter_spam(tweets, self._templates())
        assert len(removed) == 80
        assert {t.id for t in removed} == {f"t{i}" for i in planted}
        assert report[self.TEMPLATE] == 80

    def test_partition_and_no_template_in_kept(self):
        tweets = [clean_tweet(f"t{i}", f"x {self.TEMPLATE}" if i % 3 == 0 else f"fine {i}") for i in range(30)]
        kept, removed, _ = ingest.filter_spam(tweets, self._templates())
        assert len(kept) + len(removed) == 30
        assert all(self.TEMPLATE not in t.norm_text.lower() for t in kept)

    def test_short_template_rejected(self):
        with pytest.raises(ConfigError):
            ingest.SpamTemplateList(["too short"])


class TestVolumeHistogram:
    BIN = 43_200_000  # 12 h

    def test_single_bin(self):
        tweets = [raw_tweet(f"t{i}", ts=1_000_000 + i) for i in range(4)]
        series = ingest.volume_histogram(tweets, self.BIN)
        assert len(series.bins) == 1
        assert series.bins[0][1] == 4

    def test_boundary_puts_tweets_in_two_bins(self):
        tweets = [raw_tweet("a", ts=self.BIN), raw_tweet("b", ts=2 * self.BIN)]
        series = ingest.volume_histogram(tweets, self.BIN)
        assert [c for _, c in series.bins] == [1, 1]

    def test_uniform_two_weeks(self):
        start = 1_667_952_000_000
        span = 14 * 24 * 3_600_000
        rng = random.Random(3)
        stamps = [start + rng.randrange(span) for _ in range(10_000)]
        tweets = [raw_tweet(f"t{i}", ts=ts) for i, ts in enumerate(stamps)]
        series = ingest.volume_histogram(tweets, self.BIN)
        assert len(series.bins) == 28
        assert series.total == 10_000
        # independent recount
        expected = Counter((ts // self.BIN) * self.BIN for ts in stamps)
        assert dict(series.bins) == dict(expected)

    def test_empty_corpus_flagged(self):
        series = ingest.volume_histogram([], self.BIN)
        assert series.is_empty

    def test_bins_contiguous(self):
        tweets = [raw_tweet("a", ts=10), raw_tweet("b", ts=10 + 5 * self.BIN)]
        series = ingest.volume_histogram(tweets, self.BIN)
        starts = [s for s, _ in series.bins]
        assert starts == list(range(0, 6 * self.BIN, self.BIN))
        assert series.total == 2
