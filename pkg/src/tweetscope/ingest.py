"""Corpus ingestion: load, validate, keyword-filter, normalize, de-duplicate,
spam-filter, and volume-histogram line-delimited tweet records.

Input records are JSON objects, one per line. Nested fields may appear
either nested ({"user": {"id": ...}}) or flattened with dotted names
("user.id"); both are accepted.
"""

import io
import json
import re
from dataclasses import dataclass, field
from typing import Optional

from tweetscope.errors import ConfigError, DataError, ParseError
from tweetscope.topics import tokenize

_URL_RE = re.compile(r"https?://\S*")
_MENTION_RE = re.compile(r"@+\w+")
_WS_RE = re.compile(r"\s+")

MIN_TEMPLATE_LEN = 16
_MAX_RECORDED_BAD_LINES = 100


@dataclass(slots=True)
class RawTweet:
    id: str
    timestamp_ms: int
    user_id: str
    full_text: str
    quote_count: int = 0
    reply_count: int = 0
    retweet_count: int = 0
    favorite_count: int = 0
    user_friends_count: Optional[int] = None
    user_followers_count: Optional[int] = None
    quoted_status_id: Optional[str] = None
    quoted_status_user_id: Optional[str] = None
    in_reply_to_status_id: Optional[str] = None
    in_reply_to_user_id: Optional[str] = None
    is_retweet: bool = False


@dataclass(slots=True)
class CleanTweet(RawTweet):
    norm_text: str = ""
    tokens: list = field(default_factory=list)


@dataclass
class KeywordList:
    keywords: frozenset

    def __post_init__(self):
        if not self.keywords:
            raise ConfigError("keyword list is empty")


@dataclass
class SpamTemplateList:
    templates: list

    def __post_init__(self):
        for t in self.templates:
            if len(t) < MIN_TEMPLATE_LEN:
                raise ConfigError(
                    f"spam template shorter than {MIN_TEMPLATE_LEN} chars after "
                    f"normalization: {t!r}"
                )


@dataclass
class VolumeSeries:
    bin_width_ms: int
    bins: list  # ordered (bin_start_ms, count)

    @property
    def is_empty(self):
        return not self.bins

    @property
    def total(self):
        return sum(c for _, c in self.bins)


@dataclass
class LoadReport:
    total_lines: int = 0
    loaded: int = 0
    malformed: int = 0
    duplicates: int = 0
    pair_violations: int = 0
    malformed_lines: list = field(default_factory=list)  # (line_no, reason), capped

    def record_malformed(self, line_no, reason):
        self.malformed += 1
        if len(self.malformed_lines) < _MAX_RECORDED_BAD_LINES:
            self.malformed_lines.append((line_no, reason))


def normalize_text(text: str) -> str:
    """Replace URLs with 'http' and @-mentions with 'user', collapse
    whitespace, trim. Idempotent."""
    text = _URL_RE.sub("http", text)
    text = _MENTION_RE.sub("user", text)
    return _WS_RE.sub(" ", text).strip()


def _lookup(record, dotted):
    """Resolve a dotted field name against flattened or nested layouts."""
    if dotted in record:
        return record[dotted]
    head, _, rest = dotted.partition(".")
    if rest and isinstance(record.get(head), dict):
        return _lookup(record[head], rest)
    return None


def _opt_str(value):
    if value is None:
        return None
    s = str(value).strip()
    return s or None


def _count(record, name, default=0):
    value = _lookup(record, name)
    if value is None:
        return default
    n = int(value)
    if n < 0:
        raise ValueError(f"{name} is negative")
    return n


def _opt_count(record, name):
    value = _lookup(record, name)
    if value is None:
        return None
    n = int(value)
    if n < 0:
        raise ValueError(f"{name} is negative")
    return n


def parse_tweet(record: dict) -> tuple[RawTweet, int]:
    """Build a RawTweet from a decoded record.

    Returns (tweet, pair_violations). Raises ValueError/TypeError/KeyError
    on malformed records. A reference id without its companion user id (or
    vice versa) is a pair violation: the tweet is kept but the incomplete
    reference is dropped so it can never produce a graph edge.
    """
    tweet_id = _opt_str(record.get("id"))
    if not tweet_id:
        raise ValueError("missing id")
    ts = int(record["timestamp_ms"]) if _lookup(record, "timestamp_ms") is not None else 0
    if ts <= 0:
        raise ValueError("timestamp_ms must be > 0")
    user_id = _opt_str(_lookup(record, "user.id"))
    if not user_id:
        raise ValueError("missing user.id")
    full_text = _lookup(record, "full_text")
    if full_text is None:
        raise ValueError("missing full_text")

    quoted_id = _opt_str(_lookup(record, "quoted_status.id"))
    quoted_user = _opt_str(_lookup(record, "quoted_status.user.id"))
    reply_id = _opt_str(_lookup(record, "in_reply_to_status_id"))
    reply_user = _opt_str(_lookup(record, "in_reply_to_user_id"))

    violations = 0
    if (quoted_id is None) != (quoted_user is None):
        quoted_id = quoted_user = None
        violations += 1
    if (reply_id is None) != (reply_user is None):
        reply_id = reply_user = None
        violations += 1

    tweet = RawTweet(
        id=tweet_id,
        timestamp_ms=ts,
        user_id=user_id,
        full_text=str(full_text),
        quote_count=_count(record, "quote_count"),
        reply_count=_count(record, "reply_count"),
        retweet_count=_count(record, "retweet_count"),
        favorite_count=_count(record, "favorite_count"),
        user_friends_count=_opt_count(record, "user.friends_count"),
        user_followers_count=_opt_count(record, "user.followers_count"),
        quoted_status_id=quoted_id,
        quoted_status_user_id=quoted_user,
        in_reply_to_status_id=reply_id,
        in_reply_to_user_id=reply_user,
        is_retweet=bool(record.get("is_retweet", False)),
    )
    return tweet, violations


def load_tweets(source, strict=False):
    """Load line-delimited records from a path or text stream.

    Returns (tweets, report). Malformed lines are skipped and counted
    unless strict, in which case the first one raises ParseError with its
    line number. Duplicate ids keep the first occurrence.
    """
    if isinstance(source, (str, bytes)) or hasattr(source, "__fspath__"):
        stream = open(source, "r", encoding="utf-8")
        own = True
    else:
        stream = source
        own = False

    report = LoadReport()
    tweets = []
    seen = set()
    try:
        for line_no, line in enumerate(stream, start=1):
            if not line.strip():
                continue
            report.total_lines += 1
            try:
                record = json.loads(line)
                if not isinstance(record, dict):
                    raise ValueError("record is not an object")
                tweet, violations = parse_tweet(record)
            except (ValueError, TypeError, KeyError) as exc:
                if strict:
                    raise ParseError(f"line {line_no}: {exc}", line_no) from exc
                report.record_malformed(line_no, str(exc))
                continue
            if tweet.id in seen:
                report.duplicates += 1
                continue
            seen.add(tweet.id)
            report.pair_violations += violations
            tweets.append(tweet)
            report.loaded += 1
    except OSError as exc:
        raise DataError(f"unreadable source: {exc}") from exc
    finally:
        if own:
            stream.close()
    return tweets, report


def filter_by_keywords(tweets, kw: KeywordList, mode="token"):
    """Keep tweets whose full_text matches at least one keyword.

    mode="token": case-insensitive token match (tokenization identical to
    topics.tokenize), so "crypto" does not match "cryptography".
    mode="substring": plain lowercase substring containment.
    """
    if mode not in ("token", "substring"):
        raise ConfigError(f"unknown keyword match mode: {mode}")
    kept = []
    if mode == "token":
        for t in tweets:
            if not kw.keywords.isdisjoint(tokenize(t.full_text)):
                kept.append(t)
    else:
        for t in tweets:
            lower = t.full_text.lower()
            if any(k in lower for k in kw.keywords):
                kept.append(t)
    return kept


def clean(tweets) -> list:
    """Attach norm_text and tokens to each tweet."""
    out = []
    for t in tweets:
        norm = normalize_text(t.full_text)
        out.append(
            CleanTweet(
                id=t.id,
                timestamp_ms=t.timestamp_ms,
                user_id=t.user_id,
                full_text=t.full_text,
                quote_count=t.quote_count,
                reply_count=t.reply_count,
                retweet_count=t.retweet_count,
                favorite_count=t.favorite_count,
                user_friends_count=t.user_friends_count,
                user_followers_count=t.user_followers_count,
                quoted_status_id=t.quoted_status_id,
                quoted_status_user_id=t.quoted_status_user_id,
                in_reply_to_status_id=t.in_reply_to_status_id,
                in_reply_to_user_id=t.in_reply_to_user_id,
                is_retweet=t.is_retweet,
                norm_text=norm,
                tokens=tokenize(norm),
            )
        )
    return out


def filter_spam(tweets, templates: SpamTemplateList):
    """Split tweets into (kept, removed, per-template counts).

    A tweet is removed iff its normalized lowercase text contains any
    template as a substring. A tweet matching several templates counts
    against the first match in template order.
    """
    kept, removed = [], []
    counts = {t: 0 for t in templates.templates}
    for tweet in tweets:
        text = tweet.norm_text.lower()
        hit = None
        for template in templates.templates:
            if template in text:
                hit = template
                break
        if hit is None:
            kept.append(tweet)
        else:
            counts[hit] += 1
            removed.append(tweet)
    return kept, removed, counts


def volume_histogram(tweets, bin_width_ms: int) -> VolumeSeries:
    """Count tweets per contiguous time bin aligned to the corpus start."""
    if bin_width_ms <= 0:
        raise ConfigError("bin_width_ms must be > 0")
    if not tweets:
        return VolumeSeries(bin_width_ms, [])
    stamps = [t.timestamp_ms for t in tweets]
    start = (min(stamps) // bin_width_ms) * bin_width_ms
    last = (max(stamps) // bin_width_ms) * bin_width_ms
    n_bins = (last - start) // bin_width_ms + 1
    counts = [0] * n_bins
    for ts in stamps:
        counts[(ts - start) // bin_width_ms] += 1
    bins = [(start + i * bin_width_ms, counts[i]) for i in range(n_bins)]
    return VolumeSeries(bin_width_ms, bins)


def _read_list_file(path):
    entries = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            entries.append(line)
    return entries


def load_keyword_list(path) -> KeywordList:
    """One keyword per line; '#' comments allowed; lowercased, de-duplicated."""
    entries = [e.lower() for e in _read_list_file(path)]
    return KeywordList(frozenset(entries))


def load_spam_templates(path) -> SpamTemplateList:
    """One template per line; normalized and lowercased before matching."""
    entries = [normalize_text(e).lower() for e in _read_list_file(path)]
    return SpamTemplateList(entries)


def write_volume_csv(series: VolumeSeries, path):
    with io.open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("bin_start_ms,count\n")
        for start, count in series.bins:
            fh.write(f"{start},{count}\n")
