"""Quantum simulation of coset states on two backends.

The dense statevector backend handles arbitrary half-dimension subspaces up
to 20 qubits.  The Wiesner backend stores a classical record (x, θ) — the
conjugate-coding form of a coset state for a register subspace — and works at
any size; it reproduces the exact measurement statistics for register
subspaces because those states are tensor products of single-qubit
computational/Hadamard states.

Basis-vector indexing is most-significant-bit first: qubit 0 corresponds to
the top bit of the amplitude index, matching Gf2Vec.to_int.

Measuring in the coset basis of a subspace ``a`` on the statevector backend
is done in three steps: relabel amplitude indices by the inverse of the
invertible map (t, w) ↦ coset_rep(a,t) + w·basis(a) (a pure index
permutation), apply Hadamards to the w block (a Walsh–Hadamard transform),
and sample.  The sampled high bits are t̂ directly; the low bits ŝ relate to
the phase label through the invertible matrix S = basis(a) · inj(a⊥), where
inj(a⊥) injects phase labels into ambient space, so t̂' = S⁻¹ŝ.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .gf2 import (
    Gf2Matrix,
    Gf2Subspace,
    Gf2Vec,
    complement,
    coset_rep,
    indicator,
    solve_coset_membership,
)

__all__ = [
    "STATEVECTOR_QUBIT_LIMIT",
    "CosetDescriptor",
    "StateVec",
    "WiesnerRecord",
    "QuantumReg",
    "AdversaryChannel",
    "append_ancilla",
    "apply_unitary",
    "measure_qubits",
    "assign_ownership",
    "prepare_coset_state",
    "measure_coset_basis",
    "measure_computational",
    "apply_pauli_noise",
    "apply_adversary",
    "coset_overlap",
    "dump_statevector",
]

STATEVECTOR_QUBIT_LIMIT = 20
_ATOL = 1e-10


@dataclass(frozen=True)
class CosetDescriptor:
    """Labels the coset state of subspace ``a`` with position label t and
    phase label t', each of length n/2."""

    a: Gf2Subspace
    t: Gf2Vec
    t_prime: Gf2Vec

    def __post_init__(self):
        n = self.a.n
        if self.a.dim * 2 != n:
            raise ValueError("subspace dimension must be half the ambient dimension")
        if self.t.n != n - self.a.dim:
            raise ValueError("position label length mismatch")
        if self.t_prime.n != self.a.dim:
            raise ValueError("phase label length mismatch")

    @property
    def n(self) -> int:
        return self.a.n


class StateVec:
    """Dense complex amplitudes over 2^n computational basis states."""

    __slots__ = ("n", "amps", "trace")

    def __init__(self, n: int, amps: np.ndarray, trace: float = 1.0):
        if n > STATEVECTOR_QUBIT_LIMIT:
            raise ValueError(f"statevector backend limited to {STATEVECTOR_QUBIT_LIMIT} qubits")
        amps = np.asarray(amps, dtype=np.complex128)
        if amps.shape != (1 << n,):
            raise ValueError("amplitude count must be 2^n")
        norm2 = float(np.vdot(amps, amps).real)
        if abs(norm2 - trace) > _ATOL:
            raise ValueError(f"squared norm {norm2} differs from recorded trace {trace}")
        self.n = n
        self.amps = amps
        self.trace = trace

    def copy(self) -> "StateVec":
        return StateVec(self.n, self.amps.copy(), self.trace)


@dataclass(frozen=True)
class WiesnerRecord:
    """Classical record of a conjugate-coding state: data bits x prepared in
    bases θ (0 = computational, 1 = Hadamard)."""

    x: Gf2Vec
    theta: Gf2Vec

    def __post_init__(self):
        if self.x.n != self.theta.n:
            raise ValueError("x and θ length mismatch")

    @property
    def n(self) -> int:
        return self.x.n


class QuantumReg:
    """A register: backend payload plus a per-qubit ownership map."""

    __slots__ = ("backend", "payload", "owner")

    def __init__(self, backend: str, payload, owner: Sequence[str]):
        if backend not in ("statevector", "wiesner"):
            raise ValueError(f"unknown backend {backend!r}")
        if backend == "statevector" and not isinstance(payload, StateVec):
            raise TypeError("statevector backend requires a StateVec payload")
        if backend == "wiesner" and not isinstance(payload, WiesnerRecord):
            raise TypeError("wiesner backend requires a WiesnerRecord payload")
        owner = tuple(owner)
        if len(owner) != payload.n:
            raise ValueError("ownership map must assign every qubit")
        self.backend = backend
        self.payload = payload
        self.owner = owner

    @property
    def n_qubits(self) -> int:
        return self.payload.n

    def qubits_of(self, party: str) -> tuple[int, ...]:
        return tuple(i for i, p in enumerate(self.owner) if p == party)

    def with_owner(self, party: str) -> "QuantumReg":
        return QuantumReg(self.backend, self.payload, (party,) * self.n_qubits)


# ------------------------------------------------------------------
# adversary channel primitives
# ------------------------------------------------------------------


def append_ancilla(k: int) -> tuple:
    return ("append", int(k))


def apply_unitary(matrix: np.ndarray, qubits: Sequence[int]) -> tuple:
    return ("unitary", np.asarray(matrix, dtype=np.complex128), tuple(qubits))


def measure_qubits(qubits: Sequence[int]) -> tuple:
    return ("measure", tuple(qubits))


def assign_ownership(qubits: Sequence[int], party: str) -> tuple:
    return ("assign", tuple(qubits), str(party))


@dataclass
class AdversaryChannel:
    """An ordered dilation: append ancillas, act unitarily, optionally
    measure, then hand every qubit to some party exactly once.

    Measurement outcomes land in ``log`` (reset on each application)."""

    actions: list
    log: list = field(default_factory=list)

    def __post_init__(self):
        for act in self.actions:
            if act[0] == "unitary":
                u = act[1]
                dim = u.shape[0]
                if u.shape != (dim, dim) or dim != (1 << len(act[2])):
                    raise ValueError("unitary dimension does not match qubit count")
                if not np.allclose(u @ u.conj().T, np.eye(dim), atol=_ATOL):
                    raise ValueError("matrix is not unitary within tolerance")
            elif act[0] not in ("append", "measure", "assign"):
                raise ValueError(f"unknown adversary action {act[0]!r}")


# ------------------------------------------------------------------
# bit/index helpers
# ------------------------------------------------------------------


def _bits_to_index(bits: np.ndarray) -> int:
    out = 0
    for b in bits:
        out = (out << 1) | int(b)
    return out


def _index_to_bits(idx: int, n: int) -> np.ndarray:
    return np.array([(idx >> (n - 1 - i)) & 1 for i in range(n)], dtype=np.uint8)


def _xor_dp(generators_low_to_high: list[int], nbits: int) -> np.ndarray:
    """perm[v] = XOR of generators chosen by the bits of v (int bit p of v
    selects generators_low_to_high[p])."""
    perm = np.zeros(1, dtype=np.int64)
    for p in range(nbits):
        perm = np.concatenate([perm, perm ^ generators_low_to_high[p]])
    return perm


def _fwht_axis0(mat: np.ndarray) -> np.ndarray:
    """Unnormalized Walsh–Hadamard transform along axis 0:
    out[s] = Σ_w (−1)^{popcount(s & w)} mat[w]."""
    m = mat.shape[0]
    out = mat.copy()
    h = 1
    while h < m:
        out = out.reshape(m // (2 * h), 2, h, -1)
        top = out[:, 0, :, :] + out[:, 1, :, :]
        bot = out[:, 0, :, :] - out[:, 1, :, :]
        out = np.stack([top, bot], axis=1).reshape(m, -1)
        h *= 2
    return out.reshape(mat.shape)


def _phase_inject(a: Gf2Subspace) -> Gf2Matrix:
    """Matrix (n × n/2) sending a phase label t' to its ambient
    representative t'_{a⊥} = coset_rep(a⊥, t')."""
    perp = complement(a)
    cols = []
    k = a.dim
    for j in range(k):
        lbl = Gf2Vec([1 if i == j else 0 for i in range(k)])
        cols.append(coset_rep(perp, lbl).bits)
    return Gf2Matrix(np.array(cols, dtype=np.uint8).T)


def _coset_change_of_basis(a: Gf2Subspace):
    """Returns (perm, s_inv) for the coset-basis measurement of ``a``:
    perm relabels every amplitude index v to (t, w) packed high/low, and
    s_inv maps sampled Hadamard-block labels back to phase labels."""
    n, k = a.n, a.dim
    free = a.free_coords
    # columns of M: first the label injection e_{free_j}, then the basis rows
    m_cols = np.zeros((n, n), dtype=np.uint8)
    for j, f in enumerate(free):
        m_cols[f, j] = 1
    m_cols[:, n - k:] = a.basis.rows.T
    m_inv = Gf2Matrix(m_cols).inverse()
    # generator for int bit position p: image of basis vector of qubit n−1−p
    gens = []
    for p in range(n):
        col = m_inv.rows[:, n - 1 - p]
        gens.append(_bits_to_index(col))
    perm = _xor_dp(gens, n)
    s_mat = a.basis.mulmat(_phase_inject(a))
    return perm, s_mat.inverse()


# ------------------------------------------------------------------
# preparation
# ------------------------------------------------------------------


def prepare_coset_state(
    d: CosetDescriptor, backend: str = "statevector", owner: str = "alice"
) -> QuantumReg:
    """Prepare |a_{t,t'}⟩ = 2^{-n/4} Σ_{u∈a} (−1)^{u·t'_{a⊥}} |u + t_a⟩."""
    n, k = d.n, d.a.dim
    if backend == "wiesner":
        if not d.a.is_register():
            raise ValueError("wiesner backend requires a register subspace")
        x = coset_rep(d.a, d.t) + Gf2Vec(_phase_inject(d.a).mulvec(d.t_prime).bits)
        rec = WiesnerRecord(x=x, theta=indicator(d.a))
        return QuantumReg("wiesner", rec, (owner,) * n)
    if backend != "statevector":
        raise ValueError(f"unknown backend {backend!r}")
    if n > STATEVECTOR_QUBIT_LIMIT:
        raise ValueError("ambient dimension exceeds statevector limit")
    t_a = coset_rep(d.a, d.t).bits
    tp_amb = _phase_inject(d.a).mulvec(d.t_prime).bits
    rows = d.a.basis.rows
    # enumerate u ∈ a by coefficient bits
    coeffs = ((np.arange(1 << k)[:, None] >> np.arange(k - 1, -1, -1)) & 1).astype(np.uint8)
    u_all = (coeffs @ rows) & 1
    phases = 1.0 - 2.0 * ((u_all @ tp_amb) & 1).astype(np.float64)
    weights = 1 << np.arange(n - 1, -1, -1, dtype=np.int64)
    idx = (u_all ^ t_a) @ weights
    amps = np.zeros(1 << n, dtype=np.complex128)
    amps[idx] = phases / np.sqrt(float(1 << k))
    return QuantumReg("statevector", StateVec(n, amps), (owner,) * n)


# ------------------------------------------------------------------
# measurement
# ------------------------------------------------------------------


def _moveaxis_front(amps: np.ndarray, n_total: int, targets: Sequence[int]) -> np.ndarray:
    """View of the state tensor with target qubit axes first, flattened to
    (2^|targets|, 2^rest)."""
    tensor = amps.reshape((2,) * n_total)
    rest = [i for i in range(n_total) if i not in targets]
    tensor = np.moveaxis(tensor, list(targets) + rest, range(n_total))
    return tensor.reshape(1 << len(targets), -1)


def measure_coset_basis(
    reg: QuantumReg, a: Gf2Subspace, rng: np.random.Generator,
    qubits: Sequence[int] | None = None,
) -> tuple[Gf2Vec, Gf2Vec]:
    """Measure n qubits in the coset basis of ``a``; Born-rule sampled.

    The measured register is consumed: no post-measurement state is exposed.
    When the register holds extra qubits (adversary ancillas), ``qubits``
    selects the n measured ones and the rest are traced out.
    """
    n, k = a.n, a.dim
    if k * 2 != n:
        raise ValueError("subspace dimension must be half the ambient dimension")
    if reg.backend == "wiesner":
        if not a.is_register():
            raise ValueError("wiesner backend requires a register subspace")
        rec: WiesnerRecord = reg.payload
        if rec.n != n:
            raise ValueError("register size mismatch")
        basis = indicator(a).bits
        matched = basis == rec.theta.bits
        outcome = np.where(matched, rec.x.bits, rng.integers(0, 2, size=n, dtype=np.uint8))
        v = Gf2Vec(outcome)
        t_hat, _ = solve_coset_membership(a, v)
        t_prime_hat = Gf2Vec(outcome[list(a.pivots)])
        return t_hat, t_prime_hat

    sv: StateVec = reg.payload
    targets = tuple(qubits) if qubits is not None else tuple(range(sv.n))
    if len(targets) != n:
        raise ValueError("measured qubit count must equal the ambient dimension")
    perm, s_inv = _coset_change_of_basis(a)
    block = _moveaxis_front(sv.amps, sv.n, targets)
    relabeled = np.empty_like(block)
    relabeled[perm] = block
    cube = relabeled.reshape(1 << (n - k), 1 << k, -1)  # [t, w, env]
    transformed = _fwht_axis0(
        np.ascontiguousarray(cube.transpose(1, 0, 2)).reshape(1 << k, -1)
    ).reshape(1 << k, 1 << (n - k), -1)  # [s, t, env], unnormalized
    joint = (np.abs(transformed) ** 2).sum(axis=2) / float(1 << k)
    flat = joint.T.reshape(-1)  # index = t·2^k + s
    if abs(float(flat.sum()) - sv.trace) > 1e-8:
        raise AssertionError("probability mass inconsistent with state trace")
    flat = np.clip(flat, 0.0, None)
    flat = flat / flat.sum()
    pick = int(rng.choice(flat.size, p=flat))
    t_hat = Gf2Vec(_index_to_bits(pick >> k, n - k))
    s_hat = Gf2Vec(_index_to_bits(pick & ((1 << k) - 1), k))
    t_prime_hat = s_inv.mulvec(s_hat)
    return t_hat, t_prime_hat


def measure_computational(
    reg: QuantumReg, rng: np.random.Generator, qubits: Sequence[int] | None = None
) -> tuple[Gf2Vec, QuantumReg]:
    """Computational-basis measurement of a qubit subset; returns the
    outcome and the collapsed register (measured qubits left in place)."""
    if reg.backend == "wiesner":
        rec: WiesnerRecord = reg.payload
        n = rec.n
        targets = tuple(qubits) if qubits is not None else tuple(range(n))
        theta = rec.theta.bits
        x = rec.x.bits.copy()
        out = np.empty(len(targets), dtype=np.uint8)
        for j, q in enumerate(targets):
            out[j] = x[q] if theta[q] == 0 else rng.integers(0, 2)
        new_x, new_theta = x.copy(), theta.copy()
        for j, q in enumerate(targets):
            new_x[q] = out[j]
            new_theta[q] = 0
        collapsed = QuantumReg(
            "wiesner", WiesnerRecord(Gf2Vec(new_x), Gf2Vec(new_theta)), reg.owner
        )
        return Gf2Vec(out), collapsed

    sv: StateVec = reg.payload
    n_total = sv.n
    targets = tuple(qubits) if qubits is not None else tuple(range(n_total))
    block = _moveaxis_front(sv.amps, n_total, targets)
    probs = (np.abs(block) ** 2).sum(axis=1)
    probs = np.clip(probs, 0.0, None)
    probs = probs / probs.sum()
    pick = int(rng.choice(probs.size, p=probs))
    out = _index_to_bits(pick, len(targets))
    # collapse: zero all other outcome slices, renormalize
    tensor = sv.amps.reshape((2,) * n_total).copy()
    idx = [slice(None)] * n_total
    for q, b in zip(targets, out):
        idx[q] = 1 - int(b)
        tensor[tuple(idx)] = 0.0
        idx[q] = slice(None)
    flat = tensor.reshape(-1)
    flat = flat / np.sqrt(float(np.vdot(flat, flat).real))
    return Gf2Vec(out), QuantumReg("statevector", StateVec(n_total, flat), reg.owner)


# ------------------------------------------------------------------
# noise and adversary channels
# ------------------------------------------------------------------


def apply_pauli_noise(
    reg: QuantumReg, delta_x: float, delta_z: float, rng: np.random.Generator
) -> QuantumReg:
    """Independently per qubit: apply X with prob δx and Z with prob δz
    (one sampled Pauli trajectory)."""
    if not (0.0 <= delta_x <= 1.0 and 0.0 <= delta_z <= 1.0):
        raise ValueError("noise probabilities must lie in [0, 1]")
    n = reg.n_qubits
    fx = rng.random(n) < delta_x
    fz = rng.random(n) < delta_z
    if reg.backend == "wiesner":
        rec: WiesnerRecord = reg.payload
        theta = rec.theta.bits.astype(bool)
        flips = np.where(theta, fz, fx)
        new_x = rec.x.bits ^ flips.astype(np.uint8)
        return QuantumReg("wiesner", WiesnerRecord(Gf2Vec(new_x), rec.theta), reg.owner)
    sv: StateVec = reg.payload
    amps = sv.amps
    weights = 1 << np.arange(n - 1, -1, -1, dtype=np.int64)
    xmask = int((fx * weights).sum())
    zmask = int((fz * weights).sum())
    if xmask:
        amps = amps[np.arange(amps.size) ^ xmask]
    if zmask:
        parity = np.zeros(amps.size, dtype=np.int64)
        idx = np.arange(amps.size) & zmask
        while idx.any():
            parity ^= idx & 1
            idx >>= 1
        amps = amps * (1.0 - 2.0 * parity)
    return QuantumReg("statevector", StateVec(n, amps, sv.trace), reg.owner)


def _apply_unitary_statevec(amps: np.ndarray, n_total: int, u: np.ndarray,
                            targets: Sequence[int]) -> np.ndarray:
    q = len(targets)
    tensor = amps.reshape((2,) * n_total)
    rest = [i for i in range(n_total) if i not in targets]
    tensor = np.moveaxis(tensor, list(targets) + rest, range(n_total))
    mat = tensor.reshape(1 << q, -1)
    mat = u @ mat
    tensor = mat.reshape((2,) * n_total)
    tensor = np.moveaxis(tensor, range(n_total), list(targets) + rest)
    return tensor.reshape(-1)


def apply_adversary(
    reg: QuantumReg, ch: AdversaryChannel, rng: np.random.Generator
) -> QuantumReg:
    """Run the channel's dilation. Every qubit must be assigned to a party
    exactly once across the channel's assign actions."""
    if reg.backend != "statevector":
        raise ValueError("adversary channels require the statevector backend")
    sv: StateVec = reg.payload
    amps = sv.amps
    n_total = sv.n
    ch.log = []
    assigned: dict[int, str] = {}
    for act in ch.actions:
        kind = act[0]
        if kind == "append":
            k = act[1]
            if n_total + k > STATEVECTOR_QUBIT_LIMIT:
                raise ValueError("ancillas exceed statevector qubit limit")
            grown = np.zeros(amps.size << k, dtype=np.complex128)
            # new qubits are appended at the bottom (least significant bits)
            grown[np.arange(amps.size) << k] = amps
            amps = grown
            n_total += k
        elif kind == "unitary":
            _, u, targets = act
            if any(t >= n_total for t in targets):
                raise ValueError("unitary target out of range")
            amps = _apply_unitary_statevec(amps, n_total, u, targets)
        elif kind == "measure":
            targets = act[1]
            tmp = QuantumReg("statevector", StateVec(n_total, amps), ("tmp",) * n_total)
            outcome, collapsed = measure_computational(tmp, rng, targets)
            ch.log.append((targets, outcome))
            amps = collapsed.payload.amps
        elif kind == "assign":
            _, targets, party = act
            for t in targets:
                if t in assigned:
                    raise ValueError(f"qubit {t} assigned twice")
                assigned[t] = party
    if set(assigned) != set(range(n_total)):
        raise ValueError("every qubit must be assigned exactly once")
    owner = tuple(assigned[i] for i in range(n_total))
    return QuantumReg("statevector", StateVec(n_total, amps, sv.trace), owner)


# ------------------------------------------------------------------
# overlaps and dumps
# ------------------------------------------------------------------


def coset_overlap(
    d: CosetDescriptor, b: Gf2Subspace, u: Gf2Vec, cross_check: bool = False
) -> float:
    """⟨a_{t,t'}| Π_{b+u_b} |a_{t,t'}⟩ = |(a + t_a) ∩ (b + u_b)| / 2^{n/2}.

    The two cosets either miss each other or meet in a coset of a∩b, so the
    value is |a∩b|/2^{n/2} when t_a + u_b ∈ a + b and 0 otherwise.
    """
    a = d.a
    n = a.n
    if b.n != n or b.dim * 2 != n:
        raise ValueError("subspace dimension mismatch")
    from .gf2 import intersect  # local import to keep module load light

    t_a = coset_rep(a, d.t)
    u_b = coset_rep(b, u)
    joined = Gf2Subspace(n, [Gf2Vec(r) for r in a.basis.rows] + [Gf2Vec(r) for r in b.basis.rows])
    if joined.contains(t_a + u_b):
        value = float(1 << intersect(a, b).dim) / float(1 << (n // 2))
    else:
        value = 0.0
    if cross_check:
        reg = prepare_coset_state(d)
        amps = reg.payload.amps
        mass = 0.0
        for w in b.vectors():
            mass += float(abs(amps[(w + u_b).to_int()]) ** 2)
        if abs(mass - value) > _ATOL:
            raise AssertionError(
                f"projector expectation {mass} disagrees with coset count {value}"
            )
    return value


def dump_statevector(reg: QuantumReg, path: str) -> None:
    """Debug dump: little-endian f64 (re, im) pairs in index order."""
    if reg.backend != "statevector":
        raise ValueError("only statevector registers can be dumped")
    amps = reg.payload.amps
    pairs = np.empty((amps.size, 2), dtype="<f8")
    pairs[:, 0] = amps.real
    pairs[:, 1] = amps.imag
    with open(path, "wb") as fh:
        fh.write(pairs.tobytes())
