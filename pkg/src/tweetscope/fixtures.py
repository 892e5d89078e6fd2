"""Synthetic corpus generator for tests, benchmarks, and demos.

Produces a ~10,000-tweet corpus with known planted structure:

* six topic groups with disjoint vocabularies and one marker term per
  group (clustering / keyword-report ground truth),
* a flood of 800 copies of a known scam template (sanitization oracle),
* a six-user bot ring emitting exactly one reply per hour for 48 hours
  (linear cumulative curve, user-reply SCC),
* a five-user ring whose accounts carry all-zero friends/followers,
* an organic discussion tree with bursty reply timing,
* a 188-node / 187-edge reply tree (largest tweet-reply WCC by design),
* quote commentary, retweets, keyword-missing noise, malformed lines and
  duplicate ids to exercise ingestion accounting.

Ground truth lands in truth.json next to the corpus. Deterministic for a
fixed seed.
"""

import json
import random
from pathlib import Path

from tweetscope.lexicon import BUILTIN_LEXICON

SPAN_START_MS = 1_667_952_000_000  # 2022-11-09 00:00:00 UTC
SPAN_DAYS = 14
SPAN_MS = SPAN_DAYS * 24 * 3_600_000
DEFAULT_BIN_MS = 43_200_000  # 12 h

SPAM_TEXT = (
    "Uniswap is being exploited by this dude. Why is nobody talking about this? "
    "Act fast before it is patched http://drain.example/claim"
)
SPAM_TEMPLATE = "Uniswap is being exploited by this dude"

FILLER_WORDS = [
    "crypto", "bitcoin", "eth", "token", "market",
    "chain", "defi", "trading", "coin", "blockchain",
]

GROUPS = [
    ("pump-chatter", "pumpsignal", [
        "kucoin", "wallstreetbets", "breakout", "leverage", "volume", "candles",
        "futures", "margin", "shorts", "longs", "entries", "targets", "chart",
        "momentum", "orderbook", "whales", "spike", "rally", "ticker", "alert",
    ]),
    ("exchange-distrust", "cexwatch", [
        "exchange", "withdrawals", "reserves", "liquidity", "audit", "custody",
        "solvency", "cold", "wallets", "ftx", "binance", "redemptions",
        "balancesheet", "offline", "selfcustody", "ledgers", "outflows", "halted",
        "segregated", "receivership",
    ]),
    ("protocol-tech", "rollupnet", [
        "rollup", "zkproof", "layer2", "mainnet", "testnet", "validator",
        "staking", "consensus", "sharding", "gasfees", "contracts", "solidity",
        "evm", "bytecode", "oracles", "bridges", "interop", "fork", "upgrade",
        "devnet",
    ]),
    ("nft-collectors", "mintdrop", [
        "nft", "mint", "collection", "opensea", "metaverse", "avatars",
        "playtoearn", "guild", "quests", "marketplace", "royalties", "artists",
        "pixel", "gallery", "auction", "bidding", "rarity", "traits", "sweep",
        "whitelist",
    ]),
    ("mining-energy", "hashpower", [
        "mining", "miners", "asic", "hashrate", "difficulty", "halving",
        "blocks", "nodes", "electricity", "rigs", "gpu", "cooling",
        "datacenter", "kilowatt", "renewable", "grid", "solar", "throughput",
        "uptime", "firmware",
    ]),
    ("regulation-policy", "regdesk", [
        "regulation", "sec", "congress", "policy", "compliance", "kyc", "aml",
        "taxes", "treasury", "lawmakers", "hearing", "senate", "framework",
        "jurisdiction", "license", "enforcement", "guidance", "stablecoins",
        "cbdc", "sanctions",
    ]),
]

NOISE_VOCAB = [
    "weather", "sunshine", "recipes", "gardening", "football", "playlist",
    "museum", "poetry", "hiking", "cinema", "espresso", "sketching",
    "marathon", "aquarium", "origami", "jazz",
]

POSITIVE_SUFFIX = "love great"
NEGATIVE_SUFFIX = "scam awful"

N_GROUP_TWEETS = 1400  # per group
N_SPAM = 800
N_NOISE = 120
N_RETWEETS = 50
N_QUOTES = 150
N_MALFORMED = 30
N_DUPLICATES = 25

BOT_RING_USERS = 6
BOT_RING_HOURS = 48
ZERO_RING_USERS = 5
ZERO_RING_REPLIES = 40
ORGANIC_REPLIES = 59
FIG3_REPLIES = 187


def _check_vocab_is_sentiment_free():
    words = set(FILLER_WORDS) | set(NOISE_VOCAB)
    for _, marker, vocab in GROUPS:
        words.add(marker)
        words.update(vocab)
    clash = words & set(BUILTIN_LEXICON)
    if clash:
        raise AssertionError(f"fixture vocabulary collides with lexicon: {sorted(clash)}")


def _record(tweet_id, ts, user_id, text, friends, followers, rng, **extra):
    rec = {
        "id": tweet_id,
        "timestamp_ms": ts,
        "user.id": user_id,
        "full_text": text,
        "quote_count": rng.randint(0, 5),
        "reply_count": rng.randint(0, 5),
        "retweet_count": rng.randint(0, 8),
        "favorite_count": rng.randint(0, 20),
        "user.friends_count": friends,
        "user.followers_count": followers,
    }
    rec.update(extra)
    return rec


class _Corpus:
    def __init__(self, seed):
        self.rng = random.Random(seed)
        self.records = []
        self.truth_final = {}  # id -> {ts, label, group}
        self.next_id = 1

    def new_id(self):
        tweet_id = f"t{self.next_id:06d}"
        self.next_id += 1
        return tweet_id

    def label_suffix(self, label):
        if label == "positive":
            return " " + POSITIVE_SUFFIX
        if label == "negative":
            return " " + NEGATIVE_SUFFIX
        return ""

    def add(self, record, label, group=None):
        self.records.append(record)
        self.truth_final[record["id"]] = {
            "ts": record["timestamp_ms"],
            "label": label,
            "group": group,
        }


def _make_group_tweets(c: _Corpus):
    rng = c.rng
    user_pool = [f"ug{i:04d}" for i in range(3000)]
    for g, (name, marker, vocab) in enumerate(GROUPS):
        # per-group sentiment climate drifts across the fortnight
        base_pos = 0.15 + 0.1 * g / len(GROUPS)
        for _ in range(N_GROUP_TWEETS):
            ts = SPAN_START_MS + rng.randrange(SPAN_MS)
            day = (ts - SPAN_START_MS) / (24 * 3_600_000)
            p_pos = min(0.8, base_pos + (0.04 * g) * (day / SPAN_DAYS))
            p_neg = 0.25 if g % 2 == 0 else 0.35
            roll = rng.random()
            if roll < p_pos:
                label = "positive"
            elif roll < p_pos + p_neg:
                label = "negative"
            else:
                label = "neutral"
            words = rng.sample(vocab, rng.randint(6, 10)) + [marker] + rng.sample(FILLER_WORDS, 2)
            rng.shuffle(words)
            text = " ".join(words) + c.label_suffix(label)
            user = rng.choice(user_pool)
            rec = _record(
                c.new_id(), ts, user, text,
                friends=rng.randint(50, 2000), followers=rng.randint(10, 50000), rng=rng,
            )
            c.add(rec, label, group=g)


def _make_spam(c: _Corpus):
    rng = c.rng
    out = []
    for i in range(N_SPAM):
        ts = SPAN_START_MS + rng.randrange(SPAN_MS)
        rec = _record(
            c.new_id(), ts, f"us{i % 200:04d}", SPAM_TEXT,
            friends=rng.randint(0, 50), followers=rng.randint(0, 20), rng=rng,
        )
        c.records.append(rec)  # spam never reaches the final corpus: no truth entry
        out.append(rec["id"])
    return out


def _make_bot_ring(c: _Corpus):
    rng = c.rng
    users = [f"ub{i:02d}" for i in range(BOT_RING_USERS)]
    roots = {}
    base = SPAN_START_MS + 3 * 24 * 3_600_000
    for i, user in enumerate(users):
        rec = _record(
            c.new_id(), base - 3_600_000 * (BOT_RING_USERS - i), user,
            f"pumpsignal alert crypto token session {i}",
            friends=40 + i, followers=35 + i, rng=rng,
        )
        roots[user] = rec["id"]
        c.add(rec, "neutral")
    for hour in range(BOT_RING_HOURS):
        target_user = users[hour % BOT_RING_USERS]
        author = users[(hour + 1) % BOT_RING_USERS]
        ts = base + hour * 3_600_000
        rec = _record(
            c.new_id(), ts, author,
            f"crypto token alert follow entries {hour}",
            friends=40, followers=35, rng=rng,
            in_reply_to_status_id=roots[target_user],
            in_reply_to_user_id=target_user,
        )
        c.add(rec, "neutral")
    return users


def _make_zero_ring(c: _Corpus):
    rng = c.rng
    users = [f"uz{i:02d}" for i in range(ZERO_RING_USERS)]
    roots = {}
    base = SPAN_START_MS + 6 * 24 * 3_600_000
    for i, user in enumerate(users):
        rec = _record(
            c.new_id(), base - 600_000 * (ZERO_RING_USERS - i), user,
            f"mintdrop whitelist token chain {i}", friends=0, followers=0, rng=rng,
        )
        roots[user] = rec["id"]
        c.add(rec, "neutral")
    for j in range(ZERO_RING_REPLIES):
        target_user = users[j % ZERO_RING_USERS]
        author = users[(j + 1) % ZERO_RING_USERS]
        ts = base + j * 1_800_000 + rng.randrange(120_000)
        rec = _record(
            c.new_id(), ts, author,
            f"mintdrop quests token market {j}", friends=0, followers=0, rng=rng,
            in_reply_to_status_id=roots[target_user],
            in_reply_to_user_id=target_user,
        )
        c.add(rec, "neutral")
    return users


def _make_organic_tree(c: _Corpus):
    """Bursty human-style reply thread: three waves separated by quiet."""
    rng = c.rng
    users = [f"uo{i:02d}" for i in range(25)]
    base = SPAN_START_MS + 5 * 24 * 3_600_000
    bursts = [base, base + 2 * 24 * 3_600_000, base + 2 * 24 * 3_600_000 + 14 * 3_600_000]
    root_user = users[0]
    root = _record(
        c.new_id(), base - 3_600_000, root_user,
        "cexwatch withdrawals halted exchange crypto question" + c.label_suffix("negative"),
        friends=900, followers=4000, rng=rng,
    )
    c.add(root, "negative")
    tree = [(root["id"], root_user)]
    labels = ["negative", "neutral", "positive"]
    for j in range(ORGANIC_REPLIES):
        burst = bursts[min(j * len(bursts) // ORGANIC_REPLIES, len(bursts) - 1)]
        ts = burst + rng.randrange(2 * 3_600_000)
        target_id, target_user = tree[rng.randrange(len(tree))]
        author = users[rng.randrange(1, len(users))]
        label = labels[rng.randrange(3)]
        text = " ".join(rng.sample(GROUPS[1][2], 4) + ["crypto"]) + c.label_suffix(label)
        rec = _record(
            c.new_id(), ts, author, text,
            friends=rng.randint(100, 1500), followers=rng.randint(50, 9000), rng=rng,
            in_reply_to_status_id=target_id, in_reply_to_user_id=target_user,
        )
        c.add(rec, label)
        tree.append((rec["id"], author))
    return users, [tid for tid, _ in tree]


def _make_fig3_tree(c: _Corpus):
    """1 root + 187 replies: the corpus's largest tweet-reply WCC."""
    rng = c.rng
    base = SPAN_START_MS + 9 * 24 * 3_600_000
    root_user = "uf000"
    root = _record(
        c.new_id(), base, root_user,
        "cexwatch reserves exchange crypto thread",
        friends=2500, followers=90000, rng=rng,
    )
    c.add(root, "neutral")
    ids = [root["id"]]
    authors = {root["id"]: root_user}
    labels = ["positive", "neutral", "negative"]
    for j in range(FIG3_REPLIES):
        ts = base + (j + 1) * 600_000 + rng.randrange(300_000)
        target = ids[rng.randrange(len(ids))]
        author = f"uf{j + 1:03d}"
        label = labels[rng.randrange(3)]
        text = " ".join(rng.sample(FILLER_WORDS, 3)) + c.label_suffix(label)
        rec = _record(
            c.new_id(), ts, author, text,
            friends=rng.randint(10, 800), followers=rng.randint(5, 3000), rng=rng,
            in_reply_to_status_id=target, in_reply_to_user_id=authors[target],
        )
        c.add(rec, label)
        ids.append(rec["id"])
        authors[rec["id"]] = author
    return ids


def _make_quotes(c: _Corpus, group_ids):
    rng = c.rng
    author_of = {rec["id"]: rec["user.id"] for rec in c.records}
    for j in range(N_QUOTES):
        quoted_id = group_ids[rng.randrange(len(group_ids))]
        quoted_user = author_of[quoted_id]
        ts = max(SPAN_START_MS, c.truth_final[quoted_id]["ts"] + rng.randrange(3_600_000))
        label = ["positive", "neutral", "negative"][rng.randrange(3)]
        text = " ".join(rng.sample(FILLER_WORDS, 4)) + c.label_suffix(label)
        rec = _record(
            c.new_id(), ts, f"uq{j % 50:03d}", text,
            friends=rng.randint(20, 900), followers=rng.randint(5, 4000), rng=rng,
        )
        rec["quoted_status.id"] = quoted_id
        rec["quoted_status.user.id"] = quoted_user
        c.add(rec, label)


def _make_retweets(c: _Corpus, fig3_ids):
    rng = c.rng
    for j in range(N_RETWEETS):
        g = rng.randrange(len(GROUPS))
        _, marker, vocab = GROUPS[g]
        label = ["positive", "neutral", "negative"][rng.randrange(3)]
        text = " ".join(rng.sample(vocab, 5) + [marker, "crypto"]) + c.label_suffix(label)
        ts = SPAN_START_MS + rng.randrange(SPAN_MS)
        rec = _record(
            c.new_id(), ts, f"ur{j:03d}", text,
            friends=rng.randint(10, 400), followers=rng.randint(5, 1000), rng=rng,
            is_retweet=True,
        )
        if j < N_RETWEETS // 2:
            # reply references on retweets must never create graph edges
            target = fig3_ids[rng.randrange(len(fig3_ids))]
            rec["in_reply_to_status_id"] = target
            rec["in_reply_to_user_id"] = "uf000"
        c.add(rec, label)


def _make_noise(c: _Corpus):
    rng = c.rng
    for j in range(N_NOISE):
        ts = SPAN_START_MS + rng.randrange(SPAN_MS)
        text = " ".join(rng.sample(NOISE_VOCAB, 6))
        rec = _record(
            c.new_id(), ts, f"un{j:03d}", text,
            friends=rng.randint(10, 400), followers=rng.randint(5, 1000), rng=rng,
        )
        c.records.append(rec)  # dropped by keyword filter: no truth entry
    return N_NOISE


def make_fixture(out_dir, seed=20221109):
    """Generate the corpus, keyword/spam lists, pipeline config and ground
    truth into out_dir. Returns the truth dict."""
    _check_vocab_is_sentiment_free()
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    c = _Corpus(seed)

    _make_group_tweets(c)
    group_ids = [tid for tid, info in c.truth_final.items() if info["group"] is not None]
    spam_ids = _make_spam(c)
    bot_users = _make_bot_ring(c)
    zero_users = _make_zero_ring(c)
    organic_users, organic_tweets = _make_organic_tree(c)
    fig3_ids = _make_fig3_tree(c)
    _make_quotes(c, group_ids)
    _make_retweets(c, fig3_ids)
    _make_noise(c)

    rng = c.rng
    rng.shuffle(c.records)

    lines = [json.dumps(rec, sort_keys=True) for rec in c.records]
    # malformed lines: missing ids, bad timestamps, broken json
    for j in range(N_MALFORMED):
        kind = j % 3
        if kind == 0:
            lines.append(json.dumps({"timestamp_ms": SPAN_START_MS, "user.id": "ux", "full_text": "crypto"}))
        elif kind == 1:
            lines.append(json.dumps({"id": f"bad{j}", "timestamp_ms": -5, "user.id": "ux", "full_text": "crypto"}))
        else:
            lines.append('{"id": "broken-json", ')
    # duplicate ids: re-emit existing records verbatim
    for j in range(N_DUPLICATES):
        lines.append(json.dumps(c.records[j * 7 % len(c.records)], sort_keys=True))
    rng.shuffle(lines)

    (out / "tweets.jsonl").write_text("\n".join(lines) + "\n", encoding="utf-8")

    keywords = ["# fixture keyword list (representative, one term per line)"]
    keywords.extend(FILLER_WORDS)
    keywords.append("uniswap")
    for _, marker, vocab in GROUPS:
        keywords.append(marker)
        keywords.extend(vocab)
    (out / "keywords.txt").write_text("\n".join(keywords) + "\n", encoding="utf-8")

    (out / "spam_templates.txt").write_text(
        "# verified scam templates\n" + SPAM_TEMPLATE + "\n", encoding="utf-8"
    )

    truth = {
        "seed": seed,
        "span": {"start_ms": SPAN_START_MS, "span_ms": SPAN_MS, "bin_width_ms": DEFAULT_BIN_MS},
        "counts": {
            "raw": len(c.records),
            "noise": N_NOISE,
            "spam": N_SPAM,
            "keyword_kept": len(c.records) - N_NOISE,
            "final": len(c.records) - N_NOISE - N_SPAM,
            "malformed": N_MALFORMED,
            "duplicates": N_DUPLICATES,
        },
        "groups": [{"name": name, "marker": marker} for name, marker, _ in GROUPS],
        "spam_template": SPAM_TEMPLATE.lower(),
        "spam_ids": spam_ids,
        "bot_ring_users": bot_users,
        "zero_ring_users": zero_users,
        "organic_tree_users": organic_users,
        "organic_tree_tweets": organic_tweets,
        "fig3_tweets": fig3_ids,
        "final_tweets": c.truth_final,
    }
    (out / "truth.json").write_text(json.dumps(truth, indent=2, sort_keys=True), encoding="utf-8")

    config = {
        "tweets_path": str(out / "tweets.jsonl"),
        "keywords_path": str(out / "keywords.txt"),
        "spam_templates_path": str(out / "spam_templates.txt"),
        "embedding": {"provider": "hashed", "dim": 256, "seed": seed},
        "latent_dim": 32,
        "clustering": {"k": 6, "seed": 11, "tol": 1e-6, "max_iter": 300},
        "keyword_report_n": 10,
        "bin_width_ms": DEFAULT_BIN_MS,
        "out_dir": str(out / "artifacts"),
    }
    (out / "config.json").write_text(json.dumps(config, indent=2, sort_keys=True), encoding="utf-8")
    return truth
