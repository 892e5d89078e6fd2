"""Built-in valence lexicon for the fallback sentiment scorer.

Small by design: it exists so desk-scale runs are self-contained, not to
compete with trained sentiment models. Valences are in [-1, 1].
"""

BUILTIN_LEXICON = {
    # positive
    "love": 0.8,
    "loved": 0.8,
    "great": 0.7,
    "good": 0.5,
    "awesome": 0.9,
    "amazing": 0.9,
    "excellent": 0.9,
    "best": 0.8,
    "nice": 0.5,
    "happy": 0.7,
    "excited": 0.7,
    "bullish": 0.7,
    "win": 0.6,
    "winning": 0.6,
    "profit": 0.5,
    "gains": 0.5,
    "moon": 0.4,
    "congrats": 0.7,
    "congratulations": 0.7,
    "thanks": 0.5,
    "thank": 0.5,
    "trust": 0.4,
    "safe": 0.4,
    "secure": 0.4,
    "legit": 0.5,
    "solid": 0.4,
    "strong": 0.4,
    "promising": 0.5,
    "hope": 0.3,
    "opportunity": 0.3,
    "free": 0.2,
    "giveaway": 0.2,
    "massive": 0.3,
    "huge": 0.3,
    "announced": 0.2,
    "launch": 0.2,
    "partnership": 0.3,
    "adoption": 0.3,
    "支持": 0.5,
    # negative
    "scam": -0.9,
    "scammer": -0.9,
    "scammers": -0.9,
    "fraud": -0.9,
    "hack": -0.8,
    "hacked": -0.8,
    "hacker": -0.7,
    "exploit": -0.7,
    "exploited": -0.7,
    "phishing": -0.9,
    "rug": -0.7,
    "rugpull": -0.9,
    "dump": -0.5,
    "dumped": -0.5,
    "crash": -0.7,
    "bad": -0.5,
    "worst": -0.8,
    "terrible": -0.8,
    "awful": -0.8,
    "fear": -0.5,
    "afraid": -0.5,
    "angry": -0.6,
    "sad": -0.5,
    "loss": -0.5,
    "losses": -0.5,
    "lost": -0.5,
    "stolen": -0.8,
    "theft": -0.8,
    "bankrupt": -0.8,
    "bankruptcy": -0.8,
    "collapse": -0.7,
    "bearish": -0.6,
    "distrust": -0.6,
    "shady": -0.6,
    "fake": -0.6,
    "warning": -0.4,
    "danger": -0.6,
    "dangerous": -0.6,
    "risk": -0.3,
    "risky": -0.4,
    "broken": -0.5,
    "down": -0.3,
    "panic": -0.6,
    "liquidated": -0.6,
    "insolvent": -0.8,
}
