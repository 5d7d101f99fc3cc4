"""Portable SplitMix64 generator.

Every stochastic operation in the package draws from this generator so that
results are bit-identical on any platform and Python build. The algorithm is
Steele, Lea & Flood's SplitMix64: a 64-bit counter advanced by the golden
gamma ``0x9E3779B97F4A7C15`` and passed through a two-multiply finalizer.

Seed splitting: ``derive_seed(master, i, j, ...)`` folds each index into the
state with ``s = mix64(s + GAMMA * (index + 1))``. Streams derived from
different index tuples are statistically independent, and the value depends
only on the tuple, never on the order in which trials are scheduled.
"""

MASK64 = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15


def mix64(z: int) -> int:
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def derive_seed(master: int, *indices: int) -> int:
    s = master & MASK64
    for index in indices:
        s = mix64(s + GAMMA * (index + 1))
    return s


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + GAMMA) & MASK64
        return mix64(self.state)

    def random(self) -> float:
        """Uniform float in [0, 1) with 53 bits of precision."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def randbelow(self, n: int) -> int:
        if n <= 0:
            raise ValueError("n must be positive")
        # rejection sampling keeps the draw unbiased for any n
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            x = self.next_u64()
            if x < limit:
                return x % n

    def shuffle(self, items: list) -> None:
        for i in range(len(items) - 1, 0, -1):
            j = self.randbelow(i + 1)
            items[i], items[j] = items[j], items[i]

    def split(self, *indices: int) -> "SplitMix64":
        return SplitMix64(derive_seed(self.state, *indices))
