"""Counter-based Monte Carlo plumbing shared by the game and protocol harnesses.

Every batch experiment draws its randomness from a Philox counter stream keyed
by the run seed.  Trial i owns the fixed word window [i*W, (i+1)*W), where W,
the per-trial word budget, is a whole number of Philox blocks (4 x 64-bit
words).  Because the window depends only on (seed, trial index), results are
bit-identical no matter how trials are grouped into blocks or spread over
threads.
"""

from __future__ import annotations

import concurrent.futures
from typing import Callable, Sequence

import numpy as np

__all__ = [
    "PHILOX_BLOCK_WORDS",
    "trial_words",
    "bits_from_words",
    "floats_from_words",
    "TrialReader",
    "words_for",
    "run_blocks",
    "wilson_interval",
]

PHILOX_BLOCK_WORDS = 4
_KEY_MASK = (1 << 128) - 1
_Z_95 = 1.959963984540054


def round_up_words(words: int) -> int:
    """Smallest multiple of the Philox block size that is >= words."""
    return -(-words // PHILOX_BLOCK_WORDS) * PHILOX_BLOCK_WORDS


def trial_words(seed: int, words_per_trial: int, start: int, count: int) -> np.ndarray:
    """Raw 64-bit words for trials [start, start+count); row i is trial start+i.

    ``Philox.advance`` steps the counter in 4-word blocks, hence the budget
    must be a block multiple for windows to be seekable.
    """
    if words_per_trial <= 0 or words_per_trial % PHILOX_BLOCK_WORDS:
        raise ValueError("words_per_trial must be a positive multiple of 4")
    if start < 0 or count <= 0:
        raise ValueError("trial window must be non-empty and non-negative")
    gen = np.random.Philox(key=seed & _KEY_MASK)
    gen.advance(start * words_per_trial // PHILOX_BLOCK_WORDS)
    raw = gen.random_raw(count * words_per_trial)
    return raw.reshape(count, words_per_trial)


def bits_from_words(words: np.ndarray, nbits: int) -> np.ndarray:
    """Unpack (T, W) uint64 rows into (T, nbits) uint8 bits, MSB first."""
    t, w = words.shape
    if nbits > 64 * w:
        raise ValueError("not enough words for requested bits")
    shifts = np.arange(63, -1, -1, dtype=np.uint64)
    bits = ((words[:, :, None] >> shifts) & np.uint64(1)).astype(np.uint8)
    return bits.reshape(t, w * 64)[:, :nbits]


def floats_from_words(words: np.ndarray) -> np.ndarray:
    """Map uint64 words to float64 in [0, 1) using the top 53 bits."""
    return (words >> np.uint64(11)).astype(np.float64) * 2.0**-53


class TrialReader:
    """Carves a block of trial words into named fields, in declaration order.

    The same sequence of ``bits``/``floats`` calls must be made every time a
    kernel runs, so a field's position in the stream is a function of the
    layout alone.
    """

    def __init__(self, words: np.ndarray):
        self._words = words
        self._pos = 0

    @property
    def count(self) -> int:
        return self._words.shape[0]

    def _take(self, nwords: int) -> np.ndarray:
        if self._pos + nwords > self._words.shape[1]:
            raise ValueError("per-trial word budget exceeded")
        out = self._words[:, self._pos : self._pos + nwords]
        self._pos += nwords
        return out

    def bits(self, nbits: int) -> np.ndarray:
        return bits_from_words(self._take(-(-nbits // 64)), nbits)

    def floats(self, count: int) -> np.ndarray:
        return floats_from_words(self._take(count))


def words_for(bit_fields: Sequence[int] = (), float_fields: Sequence[int] = ()) -> int:
    """Word budget for a layout; each bit field occupies whole words."""
    total = sum(-(-b // 64) for b in bit_fields) + sum(float_fields)
    return round_up_words(max(total, 1))


def run_blocks(
    trials: int,
    words_per_trial: int,
    seed: int,
    kernel: Callable[[np.ndarray], np.ndarray],
    threads: int = 1,
    block: int = 1 << 14,
) -> np.ndarray:
    """Evaluate ``kernel`` over blocks of trial windows and sum its counters.

    ``kernel`` maps a (T, words_per_trial) uint64 array to an int64 counter
    vector.  Counters are integer sums accumulated in block order, so the
    total is independent of the thread count.
    """
    if trials <= 0:
        raise ValueError("trials must be positive")
    spans = [(s, min(block, trials - s)) for s in range(0, trials, block)]

    def one(span: tuple[int, int]) -> np.ndarray:
        start, count = span
        out = np.asarray(kernel(trial_words(seed, words_per_trial, start, count)))
        if out.dtype != np.int64:
            raise ValueError("kernel must return int64 counters")
        return out

    if threads <= 1 or len(spans) == 1:
        parts = [one(span) for span in spans]
    else:
        with concurrent.futures.ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(one, spans))
    total = np.zeros_like(parts[0])
    for part in parts:
        total += part
    return total


def wilson_interval(wins: int, trials: int, z: float = _Z_95) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion (default 95%)."""
    if trials <= 0:
        raise ValueError("trials must be positive")
    if not 0 <= wins <= trials:
        raise ValueError("wins must lie in [0, trials]")
    p = wins / trials
    denom = 1.0 + z * z / trials
    center = (p + z * z / (2.0 * trials)) / denom
    half = z * np.sqrt(p * (1.0 - p) / trials + z * z / (4.0 * trials * trials)) / denom
    low = 0.0 if wins == 0 else max(0.0, float(center - half))
    high = 1.0 if wins == trials else min(1.0, float(center + half))
    return low, high
