"""Seedable 64-bit generator shared by every random construction in the package.

SplitMix64 is used instead of numpy's generators so that streams are
reproducible bit-for-bit from a one-line algorithm description:

    state += 0x9E3779B97F4A7C15
    z = (state ^ (state >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
    out = z ^ (z >> 31)

(all arithmetic modulo 2**64).  Integer ranges use rejection sampling, so
they carry no modulo bias.
"""

MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15


class SplitMix64:
    def __init__(self, seed):
        self.state = int(seed) & MASK64

    def next_u64(self):
        self.state = (self.state + _GAMMA) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def random(self):
        """Uniform float in [0, 1) built from the top 53 bits."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def randint(self, lo, hi):
        """Uniform integer in the closed range [lo, hi]."""
        if hi < lo:
            raise ValueError(f"empty range [{lo}, {hi}]")
        span = hi - lo + 1
        limit = (1 << 64) - ((1 << 64) % span)
        while True:
            x = self.next_u64()
            if x < limit:
                return lo + x % span


def derive_seed(master, *keys):
    """Split a child seed off ``master`` by feeding each key through the mixer.

    ``derive_seed(s, a, b)`` is ``mix(mix(s + a) + b)`` where ``mix(x)`` is the
    first output of ``SplitMix64(x)``.
    """
    s = int(master) & MASK64
    for k in keys:
        s = SplitMix64((s + int(k)) & MASK64).next_u64()
    return s
