"""Tiny deterministic 64-bit PRNG (splitmix64).

Used wherever reproducibility must survive library upgrades: k-means++
seeding and the seeded n-gram hash share this mixer. The generator is the
standard splitmix64 sequence: state advances by the golden-ratio constant
and each output is avalanche-mixed.
"""

MASK64 = 0xFFFFFFFFFFFFFFFF
_GOLDEN = 0x9E3779B97F4A7C15


def mix64(x: int) -> int:
    """splitmix64 finalizer: avalanche a 64-bit value."""
    x &= MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & MASK64
    return x ^ (x >> 31)


class SplitMix64:
    """Sequential splitmix64 stream seeded with an arbitrary integer."""

    def __init__(self, seed: int):
        self._state = seed & MASK64

    def next_uint64(self) -> int:
        self._state = (self._state + _GOLDEN) & MASK64
        return mix64(self._state)

    def uniform(self) -> float:
        # 53 high bits -> float64 in [0, 1)
        return (self.next_uint64() >> 11) * (1.0 / (1 << 53))

    def randrange(self, n: int) -> int:
        # modulo reduction; the tiny bias is irrelevant for seeding purposes
        if n <= 0:
            raise ValueError("randrange needs n > 0")
        return self.next_uint64() % n
