"""Binary linear codes: syndromes, coset-leader decoding, and syndrome-targeted correction.

Four code families cover everything the protocol stack needs:

* ``hamming74``          -- the [7,4,3] Hamming code (small-n protocol demos)
* ``repetition(b)``      -- the [b,1,b] repetition code
* ``block_repeat(b,k)``  -- k independent repetition blocks, a [bk,k,b] code whose
                            decoding stays per-block and therefore scales to the
                            key-distribution completeness experiment
* ``random_linear(N,K,seed)`` -- a random [N,K] code with enumerated distance

Coset-leader decoding uses the minimum-weight representative of each syndrome's
coset, ties broken toward the lexicographically smallest vector.  The explicit
leader table is only materialised for syndrome lengths <= 24 bits; repetition
and block-repeat codes decode through a closed form instead, so they work at
any size.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .gf2 import Gf2Matrix, Gf2Subspace, Gf2Vec, complement

__all__ = [
    "LinearCode",
    "make_code",
    "make_code_from_config",
    "code_to_json",
    "syndrome",
    "coset_leader",
    "correct",
    "align_correction",
    "min_weight_codeword",
    "syndrome_batch",
    "leader_batch",
    "align_batch",
]

#: Largest syndrome length for which an explicit leader table is built.
LEADER_TABLE_MAX_SYNDROME_BITS = 24

# Dense (2^s, N) lookup arrays for vectorised decoding stay below this.
_DENSE_TABLE_MAX_SYNDROME_BITS = 20

# Codeword enumeration guard: dimension cap and total-byte cap.
_ENUM_MAX_DIMENSION = 20
_ENUM_MAX_BYTES = 1 << 27


@dataclass(frozen=True)
class LinearCode:
    """An [N, K, d] binary linear code with parity-check and generator matrices.

    Immutable after construction; instances may be shared freely across
    threads.  ``kind`` records the family and its parameters, e.g.
    ``("block_repeat", 63, 30)``.
    """

    kind: tuple
    length: int
    dimension: int
    parity_check: Gf2Matrix
    generator: Gf2Matrix
    distance: int

    @property
    def syndrome_length(self) -> int:
        return self.length - self.dimension

    @property
    def block_params(self) -> tuple[int, int] | None:
        """(block length, block count) for repetition-structured codes, else None."""
        if self.kind[0] == "repetition":
            return self.kind[1], 1
        if self.kind[0] == "block_repeat":
            return self.kind[1], self.kind[2]
        return None

    def has_decoder(self) -> bool:
        """Whether coset-leader decoding is available for this code."""
        return (
            self.block_params is not None
            or self.syndrome_length <= LEADER_TABLE_MAX_SYNDROME_BITS
        )

    @cached_property
    def leader_table(self) -> dict[Gf2Vec, Gf2Vec]:
        """Map syndrome -> minimum-weight coset leader (lexicographic tie-break).

        Built lazily by scanning words in order of increasing weight; available
        only when the syndrome length is at most 24 bits.
        """
        s = self.syndrome_length
        if s > LEADER_TABLE_MAX_SYNDROME_BITS:
            raise ValueError(
                f"leader table needs syndrome length <= {LEADER_TABLE_MAX_SYNDROME_BITS}, got {s}"
            )
        h = self.parity_check.rows
        total = 1 << s
        place = 1 << np.arange(s - 1, -1, -1, dtype=np.int64)
        best: dict[int, np.ndarray] = {}
        found_weight: dict[int, int] = {}
        for w in range(self.length + 1):
            if len(best) == total:
                break
            for pos in itertools.combinations(range(self.length), w):
                v = np.zeros(self.length, dtype=np.uint8)
                v[list(pos)] = 1
                key = int(((h @ v) & 1) @ place) if s else 0
                if key not in best:
                    best[key] = v
                    found_weight[key] = w
                elif found_weight[key] == w and tuple(v) < tuple(best[key]):
                    best[key] = v
        if len(best) != total:
            raise AssertionError("parity-check matrix is not full row rank")
        return {
            Gf2Vec.from_int(key, s): Gf2Vec(v) for key, v in sorted(best.items())
        }

    @cached_property
    def _dense_leaders(self) -> np.ndarray:
        """(2^s, N) uint8 leader lookup for vectorised decoding of table codes."""
        s = self.syndrome_length
        if s > _DENSE_TABLE_MAX_SYNDROME_BITS:
            raise ValueError("dense leader lookup too large")
        arr = np.zeros((1 << s, self.length), dtype=np.uint8)
        for syn, leader in self.leader_table.items():
            arr[syn.to_int()] = leader.bits
        return arr

    def to_json(self) -> dict:
        return code_to_json(self)

    def __repr__(self) -> str:  # pragma: no cover
        tag = ",".join(str(p) for p in self.kind[1:])
        return (
            f"LinearCode({self.kind[0]}({tag}) "
            f"[{self.length},{self.dimension},{self.distance}])"
        )


def _min_nonzero_weight(gen: np.ndarray) -> int:
    """Minimum weight over all nonzero codewords, by full enumeration."""
    k, n = gen.shape
    if k > _ENUM_MAX_DIMENSION or (1 << k) * n > _ENUM_MAX_BYTES:
        raise ValueError("codeword enumeration too large (dimension must be <= 20)")
    words = np.zeros((1, n), dtype=np.uint8)
    for row in gen:
        words = np.concatenate([words, words ^ row], axis=0)
    weights = words.sum(axis=1)
    return int(weights[weights > 0].min())


def _repetition_parity_check(b: int) -> np.ndarray:
    """Rows x_i + x_{b-1} for i < b-1: the canonical parity check of [b,1,b]."""
    h = np.zeros((b - 1, b), dtype=np.uint8)
    h[np.arange(b - 1), np.arange(b - 1)] = 1
    h[:, b - 1] = 1
    return h


def make_code(kind: str, *params: int) -> LinearCode:
    """Construct one of the supported code families.

    make_code("hamming74")
    make_code("repetition", b)
    make_code("block_repeat", b, k)
    make_code("random_linear", N, K, seed)
    """
    if kind == "hamming74":
        if params:
            raise ValueError("hamming74 takes no parameters")
        # Column j is the 3-bit binary expansion of j+1: nonzero and distinct.
        cols = [[(j >> (2 - r)) & 1 for j in range(1, 8)] for r in range(3)]
        h = Gf2Matrix(np.array(cols, dtype=np.uint8))
        g = complement(Gf2Subspace(7, h)).basis
        code = LinearCode(("hamming74",), 7, 4, h, g, _min_nonzero_weight(g.rows))
        if code.distance != 3:
            raise AssertionError("hamming74 distance enumeration disagrees")
        return code
    if kind == "repetition":
        (b,) = params
        if b < 2:
            raise ValueError("repetition code needs block length >= 2")
        g = Gf2Matrix(np.ones((1, b), dtype=np.uint8))
        return LinearCode(
            ("repetition", b), b, 1, Gf2Matrix(_repetition_parity_check(b)), g, b
        )
    if kind == "block_repeat":
        b, k = params
        if b < 2 or k < 1:
            raise ValueError("block_repeat needs block length >= 2 and >= 1 blocks")
        n = b * k
        g = np.zeros((k, n), dtype=np.uint8)
        h = np.zeros((k * (b - 1), n), dtype=np.uint8)
        hb = _repetition_parity_check(b)
        for j in range(k):
            g[j, j * b : (j + 1) * b] = 1
            h[j * (b - 1) : (j + 1) * (b - 1), j * b : (j + 1) * b] = hb
        code = LinearCode(
            ("block_repeat", b, k), n, k, Gf2Matrix(h), Gf2Matrix(g), b
        )
        if k <= _ENUM_MAX_DIMENSION and (1 << k) * n <= _ENUM_MAX_BYTES:
            if _min_nonzero_weight(g) != b:
                raise AssertionError("block_repeat distance enumeration disagrees")
        return code
    if kind == "random_linear":
        n, k, seed = params
        if not 1 <= k < n:
            raise ValueError("random_linear needs 1 <= K < N")
        if k > _ENUM_MAX_DIMENSION:
            raise ValueError("random_linear dimension must be <= 20 (distance enumeration)")
        rng = np.random.default_rng(seed)
        while True:
            raw = Gf2Matrix(rng.integers(0, 2, size=(k, n), dtype=np.uint8))
            if raw.rank() == k:
                break
        span = Gf2Subspace(n, raw)
        g = span.basis
        h = complement(span).basis
        return LinearCode(
            ("random_linear", n, k, seed), n, k, h, g, _min_nonzero_weight(g.rows)
        )
    raise ValueError(f"unknown code kind {kind!r}")


def make_code_from_config(cfg: dict) -> LinearCode:
    """Build a code from a config mapping {"kind": ..., "params": [...]}."""
    extra = set(cfg) - {"kind", "params"}
    if extra:
        raise ValueError(f"unknown code config keys: {sorted(extra)}")
    return make_code(cfg["kind"], *cfg.get("params", ()))


def code_to_json(code: LinearCode) -> dict:
    return {
        "kind": code.kind[0],
        "params": list(code.kind[1:]),
        "length": code.length,
        "dimension": code.dimension,
        "distance": code.distance,
        "H": [code.parity_check.row(i).to_hex() for i in range(code.syndrome_length)],
        "G": [code.generator.row(i).to_hex() for i in range(code.dimension)],
    }


def syndrome(code: LinearCode, x: Gf2Vec) -> Gf2Vec:
    """H·x; zero exactly on codewords."""
    if x.n != code.length:
        raise ValueError(f"expected length {code.length}, got {x.n}")
    return code.parity_check.mulvec(x)


def _block_leader(block_params: tuple[int, int], syn_bits: np.ndarray) -> np.ndarray:
    """Closed-form per-block leaders for repetition-structured codes.

    Per block the syndrome sigma fixes the coset {(sigma, 0), (~sigma, 1)}; the
    leader is whichever is lighter, ties (even block length) going to the
    lexicographically smaller one, which is decided by sigma's first bit.
    """
    b, k = block_params
    sig = syn_bits.reshape(*syn_bits.shape[:-1], k, b - 1)
    w = sig.sum(axis=-1, dtype=np.int64)
    take_sigma = (2 * w < b) | ((2 * w == b) & (sig[..., 0] == 0))
    out = np.empty(sig.shape[:-1] + (b,), dtype=np.uint8)
    out[..., : b - 1] = np.where(take_sigma[..., None], sig, sig ^ 1)
    out[..., b - 1] = np.where(take_sigma, 0, 1).astype(np.uint8)
    return out.reshape(*syn_bits.shape[:-1], k * b)


def coset_leader(code: LinearCode, syn: Gf2Vec) -> Gf2Vec:
    """Minimum-weight vector with the given syndrome (lexicographic tie-break)."""
    if syn.n != code.syndrome_length:
        raise ValueError(
            f"expected syndrome length {code.syndrome_length}, got {syn.n}"
        )
    bp = code.block_params
    if bp is not None:
        return Gf2Vec(_block_leader(bp, syn.bits))
    if code.syndrome_length > LEADER_TABLE_MAX_SYNDROME_BITS:
        raise ValueError("no coset-leader decoder for this code")
    return code.leader_table[syn]


def correct(code: LinearCode, x: Gf2Vec) -> Gf2Vec:
    """Nearest codeword to x (syndrome decoding through the coset leader)."""
    return x + coset_leader(code, syndrome(code, x))


def align_correction(code: LinearCode, t_prime: Gf2Vec, target_syndrome: Gf2Vec) -> Gf2Vec:
    """Move t' onto the target syndrome by adding the leader of the syndrome gap.

    Returns tbar = t' + leader(syndrome(t') + target).  Always satisfies
    syndrome(tbar) = target, so tbar and any other string with that syndrome
    differ by a codeword; and whenever the target is the syndrome of a string
    within the packing radius of t', tbar recovers that string exactly.
    """
    if target_syndrome.n != code.syndrome_length:
        raise ValueError(
            f"expected syndrome length {code.syndrome_length}, got {target_syndrome.n}"
        )
    return t_prime + coset_leader(code, syndrome(code, t_prime) + target_syndrome)


def min_weight_codeword(code: LinearCode) -> Gf2Vec:
    """A nonzero codeword of minimum weight (deterministic choice).

    Block-structured codes return the last block set to ones (the
    lexicographically smallest minimum-weight codeword); other codes
    enumerate.
    """
    bp = code.block_params
    if bp is not None:
        b, _ = bp
        bits = np.zeros(code.length, dtype=np.uint8)
        bits[code.length - b :] = 1
        return Gf2Vec(bits)
    g = code.generator.rows
    words = np.zeros((1, code.length), dtype=np.uint8)
    for row in g:
        words = np.concatenate([words, words ^ row], axis=0)
    weights = words.sum(axis=1)
    candidates = words[weights == code.distance]
    order = np.lexsort(candidates.T[::-1])
    return Gf2Vec(candidates[order[0]])


# ---------------------------------------------------------------------------
# Vectorised forms used by the Monte Carlo protocol kernels.  Rows of `words`
# / `syns` / `targets` are independent trials.

def syndrome_batch(code: LinearCode, words: np.ndarray) -> np.ndarray:
    words = np.asarray(words, dtype=np.uint8)
    if words.shape[-1] != code.length:
        raise ValueError(f"expected row length {code.length}")
    bp = code.block_params
    if bp is not None:
        b, k = bp
        blk = words.reshape(*words.shape[:-1], k, b)
        sig = blk[..., : b - 1] ^ blk[..., b - 1 :]
        return sig.reshape(*words.shape[:-1], k * (b - 1))
    h = code.parity_check.rows
    # float matmul hits BLAS; exact for counts below 2^53
    prod = words.astype(np.float64) @ h.T.astype(np.float64)
    return (prod % 2).astype(np.uint8)


def leader_batch(code: LinearCode, syns: np.ndarray) -> np.ndarray:
    syns = np.asarray(syns, dtype=np.uint8)
    if syns.shape[-1] != code.syndrome_length:
        raise ValueError(f"expected syndrome row length {code.syndrome_length}")
    bp = code.block_params
    if bp is not None:
        return _block_leader(bp, syns)
    if code.syndrome_length > _DENSE_TABLE_MAX_SYNDROME_BITS:
        raise ValueError("no vectorised decoder for this code")
    place = 1 << np.arange(code.syndrome_length - 1, -1, -1, dtype=np.int64)
    return code._dense_leaders[syns @ place]


def align_batch(code: LinearCode, t_primes: np.ndarray, targets: np.ndarray) -> np.ndarray:
    """Row-wise align_correction."""
    gaps = syndrome_batch(code, t_primes) ^ np.asarray(targets, dtype=np.uint8)
    return np.asarray(t_primes, dtype=np.uint8) ^ leader_batch(code, gaps)
