"""Counter-based random streams for reproducible trials.

Every trial of the experiment owns an independent uniform stream derived
from (master seed, cell key, trial index) with no sequential state shared
between trials, so any single trial can be replayed in isolation and trials
can be generated in any order or in parallel without affecting results.

The generator is Philox4x64 with 10 rounds. The Philox key is
(master_seed, cell_key) and the counter is (trial_index, block_index, 0, 0);
each encrypted block yields four 64-bit words, each mapped to a double in
[0, 1) via the usual 53-bit construction. The compiled kernel inlines the
same scheme and produces bit-identical streams.
"""

from __future__ import annotations

import struct

MASK64 = (1 << 64) - 1

# Philox4x64 round multipliers and Weyl key increments.
PHILOX_M0 = 0xD2E7470EE14C6C93
PHILOX_M1 = 0xCA5A826395121157
PHILOX_W0 = 0x9E3779B97F4A7C15
PHILOX_W1 = 0xBB67AE8584CAA73B

_INV_2_53 = 1.1102230246251565e-16  # 2**-53


def philox4x64(c0: int, c1: int, c2: int, c3: int, k0: int, k1: int):
    """Apply the 10-round Philox4x64 bijection to one counter block."""
    for _ in range(10):
        p0 = PHILOX_M0 * c0
        hi0, lo0 = (p0 >> 64) & MASK64, p0 & MASK64
        p1 = PHILOX_M1 * c2
        hi1, lo1 = (p1 >> 64) & MASK64, p1 & MASK64
        c0 = hi1 ^ c1 ^ k0
        c1 = lo1
        c2 = hi0 ^ c3 ^ k1
        c3 = lo0
        k0 = (k0 + PHILOX_W0) & MASK64
        k1 = (k1 + PHILOX_W1) & MASK64
    return c0, c1, c2, c3


def cell_key(n: int, deviation: float) -> int:
    """Stream key component separating (order, deviation) cells.

    Uses the exact bit pattern of the deviation so distinct cells never
    share streams, while the same cell always maps to the same key.
    """
    dbits = struct.unpack("<Q", struct.pack("<d", float(deviation)))[0]
    return (((n & 0xFF) << 56) ^ dbits) & MASK64


class TrialStream:
    """Uniform [0, 1) stream for a single trial.

    Draw order within a trial is fixed and documented in
    :mod:`pcmc.generator`; replaying a stream therefore reproduces a trial
    bit for bit.
    """

    __slots__ = ("_k0", "_k1", "_trial", "_block", "_buf", "_pos", "draws")

    def __init__(self, seed: int, key: int, trial: int):
        self._k0 = seed & MASK64
        self._k1 = key & MASK64
        self._trial = trial & MASK64
        self._block = 0
        self._buf = (0, 0, 0, 0)
        self._pos = 4
        self.draws = 0

    def next_uint64(self) -> int:
        if self._pos == 4:
            self._buf = philox4x64(self._trial, self._block, 0, 0, self._k0, self._k1)
            self._block += 1
            self._pos = 0
        x = self._buf[self._pos]
        self._pos += 1
        self.draws += 1
        return x

    def next_double(self) -> float:
        """Next uniform double in [0, 1)."""
        return (self.next_uint64() >> 11) * _INV_2_53
