"""Three-way sentiment labels with confidence, pluggable providers, and
per-scope sentiment time series.

The signed score of a label is +p_pos - p_neg when a distribution is
present, else +1/0/-1 by label; timeline averages use it, as do user-node
sentiment attributes in the graph module.
"""

import csv
import io
from dataclasses import dataclass
from typing import Optional

from tweetscope.errors import ConfigError, CoverageError, DataError
from tweetscope.lexicon import BUILTIN_LEXICON
from tweetscope.topics import tokenize

LABELS = ("positive", "neutral", "negative")
POSITIVE_THRESHOLD = 0.15
NEGATIVE_THRESHOLD = -0.15


@dataclass(slots=True)
class SentimentLabel:
    label: str
    confidence: float
    p_pos: Optional[float] = None
    p_neu: Optional[float] = None
    p_neg: Optional[float] = None

    @property
    def has_distribution(self):
        return self.p_pos is not None

    def validate(self):
        if self.label not in LABELS:
            raise DataError(f"unknown sentiment label: {self.label}")
        if not 0.0 <= self.confidence <= 1.0:
            raise DataError(f"confidence outside [0,1]: {self.confidence}")
        if self.has_distribution:
            probs = (self.p_pos, self.p_neu, self.p_neg)
            if any(p is None or p < 0 for p in probs):
                raise DataError("distribution components must all be present and >= 0")
            if abs(sum(probs) - 1.0) > 1e-6:
                raise DataError("distribution does not sum to 1")
        return self


@dataclass(slots=True)
class TimelineBin:
    start_ms: int
    n: int
    ratio_pos: Optional[float]
    ratio_neu: Optional[float]
    ratio_neg: Optional[float]
    avg_sentiment: Optional[float]


@dataclass
class SentimentTimeline:
    scope: str  # "overall" or "cluster:<id>"
    bin_width_ms: int
    bins: list


def signed_score(sl: SentimentLabel) -> float:
    if sl.has_distribution:
        return sl.p_pos - sl.p_neg
    return {"positive": 1.0, "neutral": 0.0, "negative": -1.0}[sl.label]


def _soften(label: str, confidence: float) -> tuple:
    """Distribution from (label, confidence): the labeled class gets
    (1+2c)/3, the other two (1-c)/3 each, keeping label == argmax."""
    major = (1.0 + 2.0 * confidence) / 3.0
    minor = (1.0 - confidence) / 3.0
    probs = {lab: minor for lab in LABELS}
    probs[label] = major
    return probs["positive"], probs["neutral"], probs["negative"]


def lexicon_score(text: str, lexicon: dict = None) -> SentimentLabel:
    """Deterministic lexicon scorer: mean valence of matched tokens,
    thresholded at +-0.15."""
    lexicon = BUILTIN_LEXICON if lexicon is None else lexicon
    hits = [lexicon[tok] for tok in tokenize(text) if tok in lexicon]
    s = sum(hits) / max(1, len(hits))
    if s > POSITIVE_THRESHOLD:
        label = "positive"
    elif s < NEGATIVE_THRESHOLD:
        label = "negative"
    else:
        label = "neutral"
    magnitude = min(1.0, abs(s))
    confidence = magnitude if label != "neutral" else 1.0 - magnitude
    p_pos, p_neu, p_neg = _soften(label, confidence)
    return SentimentLabel(label, confidence, p_pos, p_neu, p_neg)


class LexiconSentiment:
    """Fallback provider scoring normalized text with the built-in lexicon."""

    name = "lexicon"

    def __init__(self, lexicon: dict = None, use_raw_text: bool = False):
        self.lexicon = BUILTIN_LEXICON if lexicon is None else lexicon
        self.use_raw_text = use_raw_text

    def labels_for(self, tweets) -> dict:
        out = {}
        for t in tweets:
            text = t.full_text if self.use_raw_text else t.norm_text
            out[t.id] = lexicon_score(text, self.lexicon)
        return out


class PrecomputedSentiment:
    """Labels loaded from CSV; must cover every requested tweet id."""

    name = "precomputed"

    def __init__(self, labels: dict):
        self.labels = labels

    def labels_for(self, tweets) -> dict:
        missing = [t.id for t in tweets if t.id not in self.labels]
        if missing:
            shown = ", ".join(missing[:10])
            raise CoverageError(
                f"precomputed sentiment missing {len(missing)} ids: {shown}", missing
            )
        return {t.id: self.labels[t.id] for t in tweets}


def score(provider, tweet) -> SentimentLabel:
    """Label a single tweet through a provider."""
    return provider.labels_for([tweet])[tweet.id]


def score_corpus(provider, tweets) -> dict:
    return provider.labels_for(list(tweets))


def timeline(tweets, labels: dict, bin_width_ms: int, scopes: dict) -> dict:
    """Per-scope sentiment time series over the full input span.

    scopes maps scope name -> set of tweet ids (None means all tweets).
    Bins are aligned to the overall corpus start so every scope shares the
    same time axis; empty bins carry n=0 and null ratios.
    """
    if bin_width_ms <= 0:
        raise ConfigError("bin_width_ms must be > 0")
    tweets = list(tweets)
    missing = [t.id for t in tweets if t.id not in labels]
    if missing:
        raise CoverageError(f"labels missing for {len(missing)} tweets", missing)
    if not tweets:
        return {name: SentimentTimeline(name, bin_width_ms, []) for name in scopes}

    start = (min(t.timestamp_ms for t in tweets) // bin_width_ms) * bin_width_ms
    last = (max(t.timestamp_ms for t in tweets) // bin_width_ms) * bin_width_ms
    n_bins = (last - start) // bin_width_ms + 1

    out = {}
    for name, id_filter in scopes.items():
        counts = [[0, 0, 0] for _ in range(n_bins)]
        score_sums = [0.0] * n_bins
        for t in tweets:
            if id_filter is not None and t.id not in id_filter:
                continue
            b = (t.timestamp_ms - start) // bin_width_ms
            sl = labels[t.id]
            counts[b][LABELS.index(sl.label)] += 1
            score_sums[b] += signed_score(sl)
        bins = []
        for i in range(n_bins):
            n = sum(counts[i])
            if n == 0:
                bins.append(TimelineBin(start + i * bin_width_ms, 0, None, None, None, None))
            else:
                bins.append(
                    TimelineBin(
                        start + i * bin_width_ms,
                        n,
                        counts[i][0] / n,
                        counts[i][1] / n,
                        counts[i][2] / n,
                        score_sums[i] / n,
                    )
                )
        out[name] = SentimentTimeline(name, bin_width_ms, bins)
    return out


def load_sentiment_csv(path) -> PrecomputedSentiment:
    """CSV columns: tweet_id,label,confidence[,p_pos,p_neu,p_neg]."""
    labels = {}
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise DataError(f"empty sentiment file: {path}")
        for row_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) not in (3, 6):
                raise DataError(f"{path}:{row_no}: expected 3 or 6 columns")
            tweet_id, label, conf = row[0], row[1], float(row[2])
            if len(row) == 6 and row[3] != "":
                sl = SentimentLabel(label, conf, float(row[3]), float(row[4]), float(row[5]))
            else:
                sl = SentimentLabel(label, conf)
            labels[tweet_id] = sl.validate()
    return PrecomputedSentiment(labels)


def write_sentiment_csv(labels: dict, path, ids=None):
    ordered = ids if ids is not None else sorted(labels)
    with io.open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("tweet_id,label,confidence,p_pos,p_neu,p_neg\n")
        for tweet_id in ordered:
            sl = labels[tweet_id]
            if sl.has_distribution:
                fh.write(
                    f"{tweet_id},{sl.label},{sl.confidence!r},{sl.p_pos!r},{sl.p_neu!r},{sl.p_neg!r}\n"
                )
            else:
                fh.write(f"{tweet_id},{sl.label},{sl.confidence!r},,,\n")
    return path


def write_timeline_csv(tl: SentimentTimeline, path):
    def fmt(x):
        return "" if x is None else repr(x)

    with io.open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("bin_start_ms,n,ratio_pos,ratio_neu,ratio_neg,avg\n")
        for b in tl.bins:
            fh.write(
                f"{b.start_ms},{b.n},{fmt(b.ratio_pos)},{fmt(b.ratio_neu)},"
                f"{fmt(b.ratio_neg)},{fmt(b.avg_sentiment)}\n"
            )
    return path
