"""tweetscope: tweet-corpus analytics engine.

Sanitization, hashed/precomputed embeddings with linear-autoencoder
reduction, seeded K-means clustering, TF-IDF keyword reports, sentiment
timelines, reply/quote interaction graphs and bot-network signatures,
served through a CLI and a read-only HTTP API.
"""

__version__ = "0.1.0"
