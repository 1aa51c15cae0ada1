"""Linear algebra over GF(2): vectors, matrices, subspaces, and coset maps.

Everything in here is exact.  Vectors and matrices are immutable wrappers
around uint8 numpy arrays with entries in {0, 1}; addition is XOR.  Subspaces
are stored in canonical form (reduced row echelon basis with zero rows
dropped), so two subspaces are equal iff their stored bases are bit-identical.

The coset-representative map ``coset_rep(a, t)`` injects a label t of length
``n - dim(a)`` into the ambient space by placing its bits, in order, at the
non-pivot coordinates of a's canonical basis.  Distinct labels land in
distinct cosets of ``a``, and the map is linear.  For a register subspace
(one spanned by standard basis vectors) the non-pivot coordinates are exactly
the complementary coordinate positions in increasing order, so the label bits
are simply scattered into those slots.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

__all__ = [
    "Gf2Vec",
    "Gf2Matrix",
    "Gf2Subspace",
    "IndexSubset",
    "rref",
    "complement",
    "intersect",
    "coset_rep",
    "solve_coset_membership",
    "sample_subspace",
    "indicator",
    "hamming",
    "sample_subset",
]


def _as_bits(bits, n: int | None = None) -> np.ndarray:
    arr = np.asarray(bits, dtype=np.uint8) & 1
    if arr.ndim != 1:
        raise ValueError("expected a one-dimensional bit sequence")
    if n is not None and arr.shape[0] != n:
        raise ValueError(f"expected length {n}, got {arr.shape[0]}")
    arr = arr.copy()
    arr.flags.writeable = False
    return arr


class Gf2Vec:
    """An immutable bit vector.  ``+`` and ``^`` both mean XOR."""

    __slots__ = ("_bits",)

    def __init__(self, bits: Iterable[int]):
        object.__setattr__(self, "_bits", _as_bits(bits))

    # -- constructors -------------------------------------------------

    @classmethod
    def zeros(cls, n: int) -> "Gf2Vec":
        return cls(np.zeros(n, dtype=np.uint8))

    @classmethod
    def from_int(cls, value: int, n: int) -> "Gf2Vec":
        """Unpack an integer, most significant bit first (bit 0 of the
        vector is the most significant bit of the integer)."""
        if value < 0 or value >= (1 << n):
            raise ValueError(f"value {value} out of range for {n} bits")
        return cls([(value >> (n - 1 - i)) & 1 for i in range(n)])

    @classmethod
    def from_hex(cls, text: str, n: int) -> "Gf2Vec":
        return cls.from_int(int(text, 16), n)

    # -- views --------------------------------------------------------

    @property
    def n(self) -> int:
        return int(self._bits.shape[0])

    @property
    def bits(self) -> np.ndarray:
        """Read-only uint8 view of the underlying bits."""
        return self._bits

    def to_int(self) -> int:
        out = 0
        for b in self._bits:
            out = (out << 1) | int(b)
        return out

    def to_hex(self) -> str:
        """Hex string, most significant bit first, width ceil(n/4) digits."""
        width = max(1, (self.n + 3) // 4)
        return format(self.to_int(), f"0{width}x")

    def weight(self) -> int:
        return int(self._bits.sum())

    def restrict(self, subset: "IndexSubset") -> "Gf2Vec":
        if subset.n != self.n:
            raise ValueError("subset ambient size mismatch")
        return Gf2Vec(self._bits[list(subset.indices)])

    def concat(self, other: "Gf2Vec") -> "Gf2Vec":
        return Gf2Vec(np.concatenate([self._bits, other._bits]))

    # -- algebra ------------------------------------------------------

    def __add__(self, other: "Gf2Vec") -> "Gf2Vec":
        if other.n != self.n:
            raise ValueError("length mismatch")
        return Gf2Vec(self._bits ^ other._bits)

    __xor__ = __add__

    def dot(self, other: "Gf2Vec") -> int:
        if other.n != self.n:
            raise ValueError("length mismatch")
        return int(np.bitwise_and(self._bits, other._bits).sum() & 1)

    # -- protocol plumbing --------------------------------------------

    def __len__(self) -> int:
        return self.n

    def __getitem__(self, i: int) -> int:
        return int(self._bits[i])

    def __iter__(self) -> Iterator[int]:
        return iter(int(b) for b in self._bits)

    def __eq__(self, other) -> bool:
        return isinstance(other, Gf2Vec) and np.array_equal(self._bits, other._bits)

    def __hash__(self) -> int:
        return hash((self.n, self._bits.tobytes()))

    def __repr__(self) -> str:
        return f"Gf2Vec({''.join(str(int(b)) for b in self._bits)})"


class Gf2Matrix:
    """An immutable matrix over GF(2), stored row-major as uint8."""

    __slots__ = ("_rows",)

    def __init__(self, rows):
        arr = np.asarray(rows, dtype=np.uint8) & 1
        if arr.ndim != 2:
            raise ValueError("expected a two-dimensional bit array")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "_rows", arr)

    @property
    def shape(self) -> tuple[int, int]:
        return tuple(self._rows.shape)

    @property
    def rows(self) -> np.ndarray:
        return self._rows

    def row(self, i: int) -> Gf2Vec:
        return Gf2Vec(self._rows[i])

    def transpose(self) -> "Gf2Matrix":
        return Gf2Matrix(self._rows.T)

    def mulvec(self, v: Gf2Vec) -> Gf2Vec:
        if v.n != self.shape[1]:
            raise ValueError("dimension mismatch")
        return Gf2Vec((self._rows @ v.bits) & 1)

    def mulmat(self, other: "Gf2Matrix") -> "Gf2Matrix":
        if self.shape[1] != other.shape[0]:
            raise ValueError("dimension mismatch")
        return Gf2Matrix((self._rows.astype(np.uint32) @ other._rows) & 1)

    def rank(self) -> int:
        return len(rref(self)[1])

    def inverse(self) -> "Gf2Matrix":
        """Inverse of a square invertible matrix (Gauss-Jordan)."""
        r, c = self.shape
        if r != c:
            raise ValueError("matrix is not square")
        work = np.concatenate([self._rows.copy(), np.eye(r, dtype=np.uint8)], axis=1)
        row = 0
        for col in range(c):
            piv = None
            for i in range(row, r):
                if work[i, col]:
                    piv = i
                    break
            if piv is None:
                raise ValueError("matrix is singular")
            if piv != row:
                work[[row, piv]] = work[[piv, row]]
            for i in range(r):
                if i != row and work[i, col]:
                    work[i] ^= work[row]
            row += 1
        return Gf2Matrix(work[:, c:])

    def __eq__(self, other) -> bool:
        return isinstance(other, Gf2Matrix) and np.array_equal(self._rows, other._rows)

    def __hash__(self) -> int:
        return hash((self.shape, self._rows.tobytes()))

    def __repr__(self) -> str:
        body = ";".join("".join(str(int(b)) for b in row) for row in self._rows)
        return f"Gf2Matrix({body})"


def rref(m: Gf2Matrix) -> tuple[Gf2Matrix, tuple[int, ...]]:
    """Reduced row echelon form and the pivot column indices."""
    work = m.rows.copy()
    nrows, ncols = work.shape
    pivots: list[int] = []
    row = 0
    for col in range(ncols):
        if row == nrows:
            break
        piv = None
        for i in range(row, nrows):
            if work[i, col]:
                piv = i
                break
        if piv is None:
            continue
        if piv != row:
            work[[row, piv]] = work[[piv, row]]
        for i in range(nrows):
            if i != row and work[i, col]:
                work[i] ^= work[row]
        pivots.append(col)
        row += 1
    return Gf2Matrix(work), tuple(pivots)


@dataclass(frozen=True)
class IndexSubset:
    """A sorted subset of coordinate positions within an ambient length n."""

    n: int
    indices: tuple[int, ...]

    def __post_init__(self):
        idx = tuple(sorted(set(self.indices)))
        if idx and (idx[0] < 0 or idx[-1] >= self.n):
            raise ValueError("index out of range")
        object.__setattr__(self, "indices", idx)

    @property
    def size(self) -> int:
        return len(self.indices)

    def complement_indices(self) -> tuple[int, ...]:
        chosen = set(self.indices)
        return tuple(i for i in range(self.n) if i not in chosen)


class Gf2Subspace:
    """A linear subspace of GF(2)^n in canonical (RREF basis) form.

    The stored basis has no zero rows and its pivot columns are strictly
    increasing, so equality of subspaces is equality of stored bytes.
    """

    __slots__ = ("_n", "_basis", "_pivots")

    def __init__(self, n: int, generators: Sequence[Gf2Vec] | Gf2Matrix | None):
        if isinstance(generators, Gf2Matrix):
            mat = generators
        elif generators:
            mat = Gf2Matrix([g.bits for g in generators])
        else:
            mat = Gf2Matrix(np.zeros((1, n), dtype=np.uint8))
        if mat.shape[1] != n:
            raise ValueError("generator length does not match ambient dimension")
        reduced, pivots = rref(mat)
        basis = reduced.rows[: len(pivots)]
        object.__setattr__(self, "_n", n)
        object.__setattr__(self, "_basis", Gf2Matrix(basis.reshape(len(pivots), n)))
        object.__setattr__(self, "_pivots", pivots)

    # -- structure ----------------------------------------------------

    @property
    def n(self) -> int:
        return self._n

    @property
    def dim(self) -> int:
        return len(self._pivots)

    @property
    def basis(self) -> Gf2Matrix:
        return self._basis

    @property
    def pivots(self) -> tuple[int, ...]:
        return self._pivots

    @property
    def free_coords(self) -> tuple[int, ...]:
        piv = set(self._pivots)
        return tuple(i for i in range(self._n) if i not in piv)

    def contains(self, v: Gf2Vec) -> bool:
        if v.n != self._n:
            raise ValueError("ambient dimension mismatch")
        # Reduce v against the basis; membership iff it cancels to zero.
        residue = v.bits.copy()
        for r, col in zip(self._basis.rows, self._pivots):
            if residue[col]:
                residue ^= r
        return not residue.any()

    def vectors(self) -> Iterator[Gf2Vec]:
        """All 2^dim elements, ordered by coefficient integer."""
        rows = self._basis.rows
        k = self.dim
        for coeff in range(1 << k):
            v = np.zeros(self._n, dtype=np.uint8)
            for i in range(k):
                if (coeff >> (k - 1 - i)) & 1:
                    v ^= rows[i]
            yield Gf2Vec(v)

    def is_register(self) -> bool:
        """True iff the subspace is spanned by standard basis vectors."""
        return all(int(r.sum()) == 1 for r in self._basis.rows)

    # -- serialization ------------------------------------------------

    def to_json(self) -> dict:
        return {
            "n": self._n,
            "basis": [Gf2Vec(r).to_hex() for r in self._basis.rows],
        }

    @classmethod
    def from_json(cls, payload: dict) -> "Gf2Subspace":
        n = int(payload["n"])
        gens = [Gf2Vec.from_hex(h, n) for h in payload["basis"]]
        return cls(n, gens)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Gf2Subspace)
            and self._n == other._n
            and self._basis == other._basis
        )

    def __hash__(self) -> int:
        return hash((self._n, self._basis))

    def __repr__(self) -> str:
        rows = ["".join(str(int(b)) for b in r) for r in self._basis.rows]
        return f"Gf2Subspace(n={self._n}, basis=[{', '.join(rows)}])"


def complement(a: Gf2Subspace) -> Gf2Subspace:
    """The orthogonal complement under the standard bilinear form.

    Computed as the null space of the basis matrix, so
    ``complement(complement(a)) == a`` exactly.
    """
    n = a.n
    if a.dim == 0:
        return Gf2Subspace(n, [Gf2Vec(row) for row in np.eye(n, dtype=np.uint8)])
    basis = a.basis.rows
    pivots = a.pivots
    free = a.free_coords
    gens = []
    for f in free:
        v = np.zeros(n, dtype=np.uint8)
        v[f] = 1
        for r_idx, p in enumerate(pivots):
            v[p] = basis[r_idx, f]
        gens.append(Gf2Vec(v))
    if not gens:
        return Gf2Subspace(n, None)
    return Gf2Subspace(n, gens)


def intersect(a: Gf2Subspace, b: Gf2Subspace) -> Gf2Subspace:
    """Intersection of two subspaces; raises on ambient mismatch."""
    if a.n != b.n:
        raise ValueError("ambient dimension mismatch")
    # a ∩ b = (a⊥ + b⊥)⊥, exact over GF(2).
    joined = list(Gf2Vec(r) for r in complement(a).basis.rows if r.any())
    joined += list(Gf2Vec(r) for r in complement(b).basis.rows if r.any())
    return complement(Gf2Subspace(a.n, joined))


def coset_rep(a: Gf2Subspace, t: Gf2Vec) -> Gf2Vec:
    """Canonical representative of the coset labelled t, for t of length
    ``n - dim(a)``: label bits go to the non-pivot coordinates of a's
    canonical basis, zeros elsewhere."""
    free = a.free_coords
    if t.n != len(free):
        raise ValueError(f"label length {t.n} != {len(free)} free coordinates")
    v = np.zeros(a.n, dtype=np.uint8)
    v[list(free)] = t.bits
    return Gf2Vec(v)


def solve_coset_membership(a: Gf2Subspace, v: Gf2Vec) -> tuple[Gf2Vec, Gf2Vec]:
    """Decompose v = coset_rep(a, t) + u with u in a; returns (t, u)."""
    if v.n != a.n:
        raise ValueError("ambient dimension mismatch")
    coeffs = v.bits[list(a.pivots)]
    u = np.zeros(a.n, dtype=np.uint8)
    for c, row in zip(coeffs, a.basis.rows):
        if c:
            u ^= row
    rep = v.bits ^ u
    t = Gf2Vec(rep[list(a.free_coords)])
    return t, Gf2Vec(u)


def indicator(a: Gf2Subspace) -> Gf2Vec:
    """Indicator bit vector of a register subspace (1 where e_i ∈ a)."""
    if not a.is_register():
        raise ValueError("indicator is only defined for register subspaces")
    v = np.zeros(a.n, dtype=np.uint8)
    v[list(a.pivots)] = 1
    return Gf2Vec(v)


def sample_subspace(n: int, family: str, rng: np.random.Generator) -> Gf2Subspace:
    """Sample a dimension-n/2 subspace.

    family="register": uniform over subspaces spanned by n/2 standard basis
    vectors (uniform half-weight indicator).
    family="all": uniform over all dimension-n/2 subspaces, by drawing random
    n/2 x n matrices until one has full rank and taking its row space.  Each
    subspace has the same number of full-rank generator matrices, so the row
    space is uniform.
    """
    if n % 2:
        raise ValueError("ambient dimension must be even")
    half = n // 2
    if family == "register":
        support = rng.permutation(n)[:half]
        gens = []
        for i in sorted(support):
            v = np.zeros(n, dtype=np.uint8)
            v[i] = 1
            gens.append(Gf2Vec(v))
        return Gf2Subspace(n, gens)
    if family == "all":
        while True:
            mat = Gf2Matrix(rng.integers(0, 2, size=(half, n), dtype=np.uint8))
            if mat.rank() == half:
                return Gf2Subspace(n, mat)
    raise ValueError(f"unknown subspace family {family!r}")


def hamming(x: Gf2Vec, y: Gf2Vec) -> int:
    if x.n != y.n:
        raise ValueError("length mismatch")
    return int(np.count_nonzero(x.bits ^ y.bits))


def sample_subset(n: int, size: int, rng: np.random.Generator) -> IndexSubset:
    """Uniform subset of {0..n-1} of the given size."""
    if not 0 <= size <= n:
        raise ValueError("subset size out of range")
    chosen = rng.permutation(n)[:size]
    return IndexSubset(n, tuple(int(i) for i in chosen))
