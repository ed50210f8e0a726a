"""
Keystream cipher keyed by a KeyScalar.

The keystream is a 64-bit linear congruential generator (Knuth's MMIX
constants) whose top byte is emitted after each step:

    s0 = key.value as two's-complement unsigned 64-bit
    s  <- (s * 6364136223846793005 + 1442695040888963407) mod 2^64
    byte = s >> 56

Bytes are generated in blocks: the first block is filled by repeatedly
doubling its prefix with power-of-two jumps, later blocks move every lane
ahead by the block length at once with the composed affine map, so output
is bit-identical to stepping serially.
This is not a secure cipher.
"""
import logging
import statistics
import time
from typing import Iterable, List

import numpy as np

from src.models.records import KeyScalar, TimingSample

logger = logging.getLogger(__name__)

MASK_64BIT = (1 << 64) - 1
MULTIPLIER = 6364136223846793005
INCREMENT = 1442695040888963407
BLOCK = 4096


class KeystreamState:
    """Serial LCG state; all 2^64 states are valid."""

    def __init__(self, seed: int):
        self.s = seed & MASK_64BIT

    def next(self) -> int:
        self.s = (self.s * MULTIPLIER + INCREMENT) & MASK_64BIT
        return self.s

    def next_byte(self) -> int:
        return self.next() >> 56


def _compose(first, second):
    """Affine map applying `first` then `second`."""
    a1, c1 = first
    a2, c2 = second
    return (a2 * a1) & MASK_64BIT, (a2 * c1 + c2) & MASK_64BIT


def _doubling_jumps(count: int):
    """Jumps by 1, 2, 4, ... steps, up to `count` steps."""
    jumps = [(MULTIPLIER, INCREMENT)]
    while (1 << len(jumps)) <= count:
        jumps.append(_compose(jumps[-1], jumps[-1]))
    return jumps


DOUBLING = _doubling_jumps(BLOCK)
JUMP_MULTIPLIER, JUMP_INCREMENT = DOUBLING[-1]


def _first_block(seed: int, count: int) -> np.ndarray:
    """States s_1..s_count, doubling the filled prefix with one vector op per round."""
    lanes = np.array([KeystreamState(seed).next()], dtype=np.uint64)
    for a, c in DOUBLING:
        if len(lanes) >= count:
            break
        lanes = np.concatenate([lanes, lanes * np.uint64(a) + np.uint64(c)])
    return lanes[:count]


def keystream(key: KeyScalar, length: int) -> bytes:
    """Exactly `length` keystream bytes for the key."""
    if length <= 0:
        return b""
    first = min(length, BLOCK)
    lanes = _first_block(key.value, first)
    out = np.empty(length, dtype=np.uint8)
    out[:first] = (lanes >> np.uint64(56)).astype(np.uint8)
    a, c = np.uint64(JUMP_MULTIPLIER), np.uint64(JUMP_INCREMENT)
    pos = first
    while pos < length:
        lanes = lanes * a + c  # wraps mod 2^64
        take = min(BLOCK, length - pos)
        out[pos:pos + take] = (lanes[:take] >> np.uint64(56)).astype(np.uint8)
        pos += take
    return out.tobytes()


def xor_transform(data: bytes, key: KeyScalar) -> bytes:
    """XOR data with the keystream; applying it twice restores the input."""
    if not data:
        return b""
    stream = np.frombuffer(keystream(key, len(data)), dtype=np.uint8)
    return (np.frombuffer(bytes(data), dtype=np.uint8) ^ stream).tobytes()


def time_transform(key: KeyScalar, sizes: Iterable[int], repeats: int = 5, seed: int = 0) -> List[TimingSample]:
    """
    Median wall time of xor_transform for payloads of each size.

    Args:
        key: Key to transform with
        sizes: Payload sizes in bytes
        repeats: Runs per size; the median is reported
        seed: Seed for the random payloads

    Returns:
        One TimingSample per size, in the given order
    """
    rng = np.random.default_rng(seed)
    samples = []
    for size in sizes:
        payload = rng.integers(0, 256, size=size, dtype=np.uint8).tobytes()
        runs = []
        for _ in range(repeats):
            start = time.perf_counter()
            xor_transform(payload, key)
            runs.append(time.perf_counter() - start)
        samples.append(TimingSample(size_bytes=size, seconds=statistics.median(runs)))
        logger.info(f"Transformed {size} bytes in {samples[-1].seconds:.6f}s (median of {repeats})")
    return samples
