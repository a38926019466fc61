"""Deterministic pseudo-random number generation.

Random stimuli and equivalence-check vectors are drawn from xoshiro256**
seeded via splitmix64, so a single 64-bit seed reproduces identical bit
streams on any platform. Both algorithms follow the public reference
definitions (Blackman/Vigna) with 64-bit wrap-around arithmetic.
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1


def splitmix64_next(state: int) -> tuple[int, int]:
    """Advance a splitmix64 state; returns (new_state, output)."""
    state = (state + 0x9E3779B97F4A7C15) & _MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return state, z ^ (z >> 31)


def _rotl(x: int, k: int) -> int:
    return ((x << k) | (x >> (64 - k))) & _MASK64


class Xoshiro256StarStar:
    """xoshiro256** with the 256-bit state expanded from a 64-bit seed."""

    def __init__(self, seed: int):
        if not 0 <= seed <= _MASK64:
            raise ValueError("seed must fit in 64 bits")
        sm = seed
        state = []
        for _ in range(4):
            sm, word = splitmix64_next(sm)
            state.append(word)
        if not any(state):
            state[0] = 1  # all-zero state is invalid for xoshiro
        self._s = state

    def next64(self) -> int:
        s = self._s
        result = (_rotl((s[1] * 5) & _MASK64, 7) * 9) & _MASK64
        t = (s[1] << 17) & _MASK64
        s[2] ^= s[0]
        s[3] ^= s[1]
        s[1] ^= s[2]
        s[0] ^= s[3]
        s[2] ^= t
        s[3] = _rotl(s[3], 45)
        return result

    def bits(self, width: int) -> int:
        """Next `width` random bits, packed LSB-first from consecutive words.

        Bit i of the result is bit (i mod 64) of the (i div 64)-th word
        drawn for this call. Always consumes ceil(width / 64) words, even
        when width is 0 modulo 64, so consumers stay word-aligned.
        """
        if width <= 0:
            return 0
        value = 0
        for word_index in range((width + 63) // 64):
            value |= self.next64() << (64 * word_index)
        return value & ((1 << width) - 1)
