"""Interactive protocol runners over simulated eavesdropped channels.

Four protocols share the plumbing here:

* interactive encryption (``run_qecm_id``): Alice one-time-pads a message
  with extracted key material, sends the pad and a coset state, and releases
  the extraction inputs only after the holder proves itself by returning the
  position label;
* uncloneable commitment (``run_urbc``): commit = base-commit the extraction
  inputs and park the committed string inside a coset state; check certifies
  the receiver holds the state; reveal opens everything under a syndrome and
  spot check;
* receiver-independent key distribution (``run_riqkd``): only Alice may
  abort; Bob's device answers challenges (position string, phase syndrome,
  spot bits) and both sides extract;
* the reference one-sided protocol (``run_tfkw``) with the
  intercept-and-substitute attack that motivates the receiver-independent
  design.

Every run returns an outcome dataclass carrying the full message transcript.
Classical messages are always eavesdropper-visible; an eavesdropper's quantum
side information comes only from how she split the state in transit.

The register (conjugate-coding) family runs on classical Wiesner records and
scales to thousands of qubits; the general subspace family uses the
statevector backend and is limited to small n.  Abort semantics: downstream
fields of an aborted run are ``None``, never zero-filled.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Union

import numpy as np

from .ecc import LinearCode, align_batch, min_weight_codeword, syndrome_batch
from .ext import ToeplitzExtractor, lhl_epsilon
from .gf2 import (
    Gf2Subspace,
    Gf2Vec,
    IndexSubset,
    sample_subspace,
    solve_coset_membership,
)
from .info import NEG_LG_COS_PI_8, DensityOp, protocol_bounds, trace_distance
from .mc import wilson_interval
from .qsim import (
    CosetDescriptor,
    measure_computational,
    measure_coset_basis,
    prepare_coset_state,
)

__all__ = [
    "Message",
    "Transcript",
    "CommitmentScheme",
    "base_commit",
    "base_verify",
    "PauliNoise",
    "QecmParams",
    "QecmOutcome",
    "run_qecm_id",
    "qecm_experiment",
    "UrbcParams",
    "UrbcOutcome",
    "run_urbc",
    "urbc_experiment",
    "urbc_hiding_exact",
    "QkdParams",
    "QkdOutcome",
    "KeepAndSubstitute",
    "InterceptResend",
    "SyndromeFault",
    "run_riqkd",
    "riqkd_experiment",
    "TfkwParams",
    "run_tfkw",
    "tfkw_experiment",
    "secrecy_probe",
    "trial_rng",
]

_MAX_SEED = 1 << 64


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    """The per-trial generator: Philox keyed by the (seed, trial) pair."""
    if not 0 <= seed < _MAX_SEED:
        raise ValueError("seed must fit in 64 bits")
    key = np.array([seed, trial], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


# ------------------------------------------------------------------
# transcripts
# ------------------------------------------------------------------


@dataclass(frozen=True)
class Message:
    """One protocol message; classical payloads are always Eve-visible."""

    idx: int
    sender: str
    receiver: str
    label: str
    payload: object
    quantum: bool = False
    eve_visible: bool = True


def _jsonable(value) -> object:
    if isinstance(value, Gf2Vec):
        return value.to_hex()
    if isinstance(value, IndexSubset):
        return list(value.indices)
    if isinstance(value, (tuple, list)):
        return [_jsonable(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, bytes):
        return value.hex()
    if isinstance(value, (str, int, bool)) or value is None:
        return value
    raise TypeError(f"cannot serialize payload of type {type(value).__name__}")


class Transcript:
    """Append-only ordered message log.

    Quantum registers are never copied into the log; a ``send_quantum`` entry
    records the ownership transfer by handle only and is invisible to Eve
    (her access to the state is whatever her channel kept)."""

    def __init__(self):
        self._messages: list[Message] = []

    def __len__(self) -> int:
        return len(self._messages)

    @property
    def messages(self) -> tuple[Message, ...]:
        return tuple(self._messages)

    def send(self, sender: str, receiver: str, label: str, payload) -> None:
        self._messages.append(
            Message(len(self._messages), sender, receiver, label, payload)
        )

    def send_quantum(self, sender: str, receiver: str, label: str, handle: str) -> None:
        self._messages.append(
            Message(len(self._messages), sender, receiver, label, handle,
                    quantum=True, eve_visible=False)
        )

    def value(self, label: str):
        """Payload of the unique message with this label."""
        hits = [m.payload for m in self._messages if m.label == label]
        if len(hits) != 1:
            raise KeyError(f"{len(hits)} messages labelled {label!r}")
        return hits[0]

    def has(self, label: str) -> bool:
        return any(m.label == label for m in self._messages)

    def eve_view(self) -> list[Message]:
        return [m for m in self._messages if m.eve_visible]

    def to_jsonl(self) -> str:
        lines = []
        for m in self._messages:
            row: dict = {"idx": m.idx, "from": m.sender, "to": m.receiver, "label": m.label}
            if m.quantum:
                row["qreg_id"] = m.payload
            elif isinstance(m.payload, Gf2Vec):
                row["payload_hex"] = m.payload.to_hex()
            else:
                row["payload_hex"] = json.dumps(
                    _jsonable(m.payload), sort_keys=True, separators=(",", ":")
                ).encode().hex()
            row["eve_visible"] = m.eve_visible
            lines.append(json.dumps(row, sort_keys=False, separators=(",", ":")))
        return "\n".join(lines)


# ------------------------------------------------------------------
# base commitment
# ------------------------------------------------------------------


@dataclass
class CommitmentScheme:
    """The assumed string-commitment primitive under the protocols.

    kind="ideal" is a trusted in-simulation functionality: tokens are opaque
    handles into a vault, so it is perfectly hiding and perfectly binding.
    kind="hash_based" commits via sha256(value || 32-byte nonce); its hiding
    and binding are the usual computational properties of the digest and are
    documented, not proven, here."""

    kind: str = "ideal"
    _vault: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in ("ideal", "hash_based"):
            raise ValueError(f"unknown commitment kind {self.kind!r}")


def base_commit(
    scheme: CommitmentScheme, value: bytes, rng: np.random.Generator
) -> tuple[str, bytes]:
    """Commit to a byte string; returns (token, opening)."""
    if not isinstance(value, bytes):
        raise ValueError("commit values are byte strings")
    if scheme.kind == "ideal":
        token = f"ideal:{len(scheme._vault)}"
        scheme._vault[token] = value
        return token, b""
    nonce = rng.bytes(32)
    token = hashlib.sha256(value + nonce).hexdigest()
    return token, nonce


def base_verify(scheme: CommitmentScheme, token: str, value: bytes, opening: bytes) -> bool:
    if not isinstance(value, bytes) or not isinstance(opening, bytes):
        raise ValueError("malformed opening")
    if scheme.kind == "ideal":
        if token not in scheme._vault:
            raise ValueError("unknown ideal commitment token")
        return scheme._vault[token] == value
    if len(opening) != 32:
        raise ValueError("malformed opening")
    return hashlib.sha256(value + opening).hexdigest() == token


def _pack_pair(r: Gf2Vec, h: Gf2Vec) -> bytes:
    return json.dumps([r.to_hex(), h.to_hex()]).encode()


# ------------------------------------------------------------------
# shared helpers
# ------------------------------------------------------------------


@dataclass(frozen=True)
class PauliNoise:
    """iid per-qubit flips: X with probability dx, Z with probability dz.

    On a conjugate-coding record an X flip changes the data bit only where
    the qubit is in the computational basis, a Z flip only where it is in the
    Hadamard basis."""

    dx: float = 0.0
    dz: float = 0.0

    def __post_init__(self):
        if not (0.0 <= self.dx <= 1.0 and 0.0 <= self.dz <= 1.0):
            raise ValueError("flip probabilities must lie in [0, 1]")

    def apply_bits(self, x: np.ndarray, theta: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        n = x.shape[0]
        xflip = (rng.random(n) < self.dx) & (theta == 0)
        zflip = (rng.random(n) < self.dz) & (theta == 1)
        return x ^ xflip.astype(np.uint8) ^ zflip.astype(np.uint8)


def _uniform_bits(rng: np.random.Generator, k: int) -> np.ndarray:
    return rng.integers(0, 2, size=k, dtype=np.uint8)


def _half_weight_indicator(rng: np.random.Generator, n: int) -> np.ndarray:
    theta = np.zeros(n, dtype=np.uint8)
    theta[rng.permutation(n)[: n // 2]] = 1
    return theta


def _syn(code: LinearCode, bits: np.ndarray) -> np.ndarray:
    return syndrome_batch(code, bits[None, :])[0]


def _align(code: LinearCode, t_prime: np.ndarray, target: np.ndarray) -> np.ndarray:
    return align_batch(code, t_prime[None, :], target[None, :])[0]


def _spot_indices(rng: np.random.Generator, half: int, size: int) -> np.ndarray:
    return np.sort(rng.permutation(half)[:size])


def _check_spot_size(eta: float, half: int) -> int:
    size = eta * half
    if abs(size - round(size)) > 1e-9:
        raise ValueError("eta times half the dimension must be an integer")
    size = int(round(size))
    if not 0 < size <= half:
        raise ValueError("spot-check size out of range")
    return size


def _uncloneable_eps(n: int, ell: int) -> float:
    """The slack term in the uncloneability bound: the larger of the
    extractor error at the minimum tolerable source entropy and the
    game-bound term carried by the half-dimension register."""
    kappa_min = NEG_LG_COS_PI_8 / 2.0 * n - 1.0 / (4.0 * math.log(2))
    eps_ext = lhl_epsilon(kappa_min, ell)
    return max(eps_ext, math.exp(0.25) * math.cos(math.pi / 8) ** (n / 2))


def _report_interval(report: dict, wins: int, trials: int, prefix: str = "") -> None:
    low, high = wilson_interval(wins, trials)
    report[prefix + "estimate"] = wins / trials
    report[prefix + "wilson_low"] = low
    report[prefix + "wilson_high"] = high


# ------------------------------------------------------------------
# interactive encryption
# ------------------------------------------------------------------


@dataclass(frozen=True)
class QecmParams:
    """Interactive-encryption configuration: n ambient qubits carry the coset
    state; messages are ell-bit strings padded by extractor output + h."""

    n: int
    ell: int
    family: str = "register"
    extractor: Optional[ToeplitzExtractor] = None

    def __post_init__(self):
        if self.n < 2 or self.n % 2:
            raise ValueError("ambient dimension must be even and >= 2")
        if self.ell < 1:
            raise ValueError("message length must be positive")
        if self.family not in ("register", "all"):
            raise ValueError(f"unknown subspace family {self.family!r}")
        if self.extractor is None:
            object.__setattr__(self, "extractor", ToeplitzExtractor(self.n // 2, self.ell))
        if self.extractor.n_in != self.n // 2 or self.extractor.ell != self.ell:
            raise ValueError("extractor shape must be (n/2 -> ell)")

    @property
    def half(self) -> int:
        return self.n // 2


@dataclass(frozen=True)
class QecmOutcome:
    """One interactive-encryption run: Alice's message m, Bob's decryption
    m_hat (None unless Alice accepted), Eve's guess m_check (None without an
    eavesdropper), the accept flag, and the transcript."""

    m: Gf2Vec
    m_hat: Optional[Gf2Vec]
    m_check: Optional[Gf2Vec]
    f: int
    transcript: Transcript


_QECM_EVE_KINDS = (None, "keep_all", "measure_computational")


def run_qecm_id(
    params: QecmParams,
    rng: np.random.Generator,
    *,
    eve: Optional[str] = None,
    message: Union[None, Gf2Vec, Callable] = None,
) -> QecmOutcome:
    """One full encrypt-then-interactively-decrypt run.

    eve=None: honest channel.  eve="keep_all": Eve keeps the whole state and
    forwards nothing, so honest Bob (holding no qubits) answers the challenge
    uniformly.  eve="measure_computational": Eve measures everything in the
    computational basis and forwards the classical string, which Bob uses to
    answer.  Eve guesses the message from her stash plus the classical
    transcript once the run ends.
    """
    if eve not in _QECM_EVE_KINDS:
        raise ValueError(f"unknown eavesdropper kind {eve!r}")
    ext = params.extractor
    tr = Transcript()

    # key generation
    backend = "wiesner" if params.family == "register" else "statevector"
    a = sample_subspace(params.n, params.family, rng)
    t = Gf2Vec(_uniform_bits(rng, params.half))
    tp = Gf2Vec(_uniform_bits(rng, params.half))
    r = Gf2Vec(_uniform_bits(rng, ext.seed_len))
    h = Gf2Vec(_uniform_bits(rng, params.ell))

    if message is None:
        m = Gf2Vec(_uniform_bits(rng, params.ell))
    elif callable(message):
        m = message(rng)
    else:
        m = message
    if m.n != params.ell:
        raise ValueError("message length mismatch")

    # encryption: pad + state
    m_bar = m + ext.extract(tp, r) + h
    tr.send("alice", "bob", "ciphertext_pad", m_bar)
    reg = prepare_coset_state(CosetDescriptor(a, t, tp), backend=backend)
    tr.send_quantum("alice", "bob", "coset_state", "qreg:0")

    # the channel: Eve may intercept the state here
    eve_classical: Optional[Gf2Vec] = None
    if eve == "measure_computational":
        v, reg = measure_computational(reg, rng)
        eve_classical = v
        tr.send("eve", "bob", "forwarded_string", v)

    # interactive decryption
    tr.send("alice", "bob", "subspace", a.to_json())
    t_hat: Gf2Vec
    tp_hat: Optional[Gf2Vec]
    if eve == "keep_all":
        # Bob never received anything quantum; he can only answer blindly
        t_hat = Gf2Vec(_uniform_bits(rng, params.half))
        tp_hat = Gf2Vec(_uniform_bits(rng, params.half))
    elif eve == "measure_computational":
        t_hat, u = solve_coset_membership(a, eve_classical)
        tp_hat = Gf2Vec(u.bits[list(a.pivots)])
    else:
        t_hat, tp_hat = measure_coset_basis(reg, a, rng)
    tr.send("bob", "alice", "position_response", t_hat)

    f = int(t_hat == t)
    tr.send("alice", "bob", "accept_flag", f)
    m_hat = None
    if f:
        tr.send("alice", "bob", "key_release", (r, h))
        m_hat = m_bar + ext.extract(tp_hat, r) + h

    # Eve's guess from her side information plus the classical transcript
    m_check = None
    if eve == "keep_all":
        if f:
            _, tp_eve = measure_coset_basis(reg, a, rng)
            m_check = m_bar + ext.extract(tp_eve, r) + h
        else:
            m_check = Gf2Vec(_uniform_bits(rng, params.ell))
    elif eve == "measure_computational":
        if f:
            _, u = solve_coset_membership(a, eve_classical)
            tp_eve = Gf2Vec(u.bits[list(a.pivots)])
            m_check = m_bar + ext.extract(tp_eve, r) + h
        else:
            m_check = Gf2Vec(_uniform_bits(rng, params.ell))
    return QecmOutcome(m, m_hat, m_check, f, tr)


def _register_subspaces(n: int):
    for support in itertools.combinations(range(n), n // 2):
        gens = []
        for i in support:
            v = np.zeros(n, dtype=np.uint8)
            v[i] = 1
            gens.append(Gf2Vec(v))
        yield Gf2Subspace(n, gens)


def _qecm_cipher_operator(params: QecmParams, m: Gf2Vec) -> np.ndarray:
    """Exact averaged ciphertext operator on the pad ⊗ state space."""
    ext = params.extractor
    n, ell, half = params.n, params.ell, params.half
    dim = 1 << (ell + n)
    rho = np.zeros((dim, dim), dtype=np.complex128)
    count = 0
    for a in _register_subspaces(n):
        for t_int, tp_int in itertools.product(range(1 << half), repeat=2):
            t = Gf2Vec.from_int(t_int, half)
            tp = Gf2Vec.from_int(tp_int, half)
            psi = prepare_coset_state(
                CosetDescriptor(a, t, tp), backend="statevector"
            ).payload.amps
            block = np.outer(psi, psi.conj())
            for r_int in range(1 << ext.seed_len):
                r = Gf2Vec.from_int(r_int, ext.seed_len)
                pad = ext.extract(tp, r)
                for h_int in range(1 << ell):
                    h = Gf2Vec.from_int(h_int, ell)
                    m_bar = (m + pad + h).to_int()
                    off = m_bar << n
                    rho[off : off + (1 << n), off : off + (1 << n)] += block
                    count += 1
    return rho / count


def qecm_experiment(
    kind: str,
    params: QecmParams,
    *,
    adversary: Optional[str] = "keep_all",
    trials: int = 1000,
    seed: int = 0,
    message_probs: Optional[Sequence[float]] = None,
) -> dict:
    """Security-game experiments for the interactive encryption scheme.

    kind="correctness": honest runs, count disagreements.
    kind="indistinguishable": exact trace distance between averaged
    ciphertext operators for the fixed message vs every other message
    (register family, n <= 6 and ell <= 2 enumeration).
    kind="uncloneable": Monte Carlo Pr[M = M_check and F = 1] against the
    trivial-guess term plus the closed-form slack.
    kind="uncloneable_indistinguishable": Monte Carlo distinguishing game on
    accepted runs.  ``message_probs`` optionally biases the message source
    (uncloneable kind only); the bound then uses the source's min-entropy.
    """
    report: dict = {"experiment": f"qecm_{kind}", "n": params.n, "ell": params.ell}
    n_messages = 1 << params.ell

    if kind == "indistinguishable":
        if params.family != "register":
            raise ValueError("exact enumeration covers the register family")
        if params.n > 6 or params.ell > 2:
            raise ValueError("enumeration too large")
        rho0 = _qecm_cipher_operator(params, Gf2Vec.zeros(params.ell))
        worst = 0.0
        for m_int in range(1, n_messages):
            rho1 = _qecm_cipher_operator(params, Gf2Vec.from_int(m_int, params.ell))
            worst = max(worst, trace_distance(DensityOp(rho0), DensityOp(rho1)))
        report["max_trace_distance"] = worst
        report["pass"] = worst <= 1e-9
        return report

    report["trials"] = trials
    report["seed"] = seed

    if kind == "correctness":
        disagreements = 0
        for i in range(trials):
            out = run_qecm_id(params, trial_rng(seed, i))
            if not (out.f == 1 and out.m_hat == out.m):
                disagreements += 1
        report["disagreements"] = disagreements
        report["disagreement_rate"] = disagreements / trials
        report["pass"] = disagreements == 0
        return report

    if kind == "uncloneable":
        if message_probs is not None:
            probs = np.asarray(message_probs, dtype=np.float64)
            if probs.shape != (n_messages,) or abs(probs.sum() - 1.0) > 1e-9:
                raise ValueError("message distribution must cover all messages")
            source = lambda rng: Gf2Vec.from_int(
                int(rng.choice(n_messages, p=probs)), params.ell
            )
            h_min = -math.log2(float(probs.max()))
        else:
            source = None
            h_min = float(params.ell)
        accepts = wins = 0
        for i in range(trials):
            out = run_qecm_id(params, trial_rng(seed, i), eve=adversary, message=source)
            accepts += out.f
            wins += int(out.f == 1 and out.m_check == out.m)
        eps2 = _uncloneable_eps(params.n, params.ell)
        report["adversary"] = adversary
        report["accepts"] = accepts
        report["accept_rate"] = accepts / trials
        report["wins"] = wins
        _report_interval(report, wins, trials)
        guess_scale = 2.0 ** (-h_min)
        report["min_entropy"] = h_min
        report["epsilon_slack"] = eps2
        report["bound"] = guess_scale * (accepts / trials) + n_messages * guess_scale * eps2
        sigma = math.sqrt(max(report["bound"] * (1 - min(report["bound"], 1.0)), 1e-12) / trials)
        report["pass"] = wins / trials <= report["bound"] + 3 * sigma
        return report

    if kind == "uncloneable_indistinguishable":
        m0 = Gf2Vec.zeros(params.ell)
        accepts = wins = 0
        for i in range(trials):
            rng = trial_rng(seed, i)
            y = int(rng.integers(0, 2))
            m1 = Gf2Vec(_uniform_bits(rng, params.ell))
            sent = m0 if y == 0 else m1
            out = run_qecm_id(params, rng, eve=adversary, message=sent)
            accepts += out.f
            if out.m_check is None or m1 == m0:
                y_guess = int(rng.integers(0, 2))
            elif out.m_check == m1:
                y_guess = 1
            elif out.m_check == m0:
                y_guess = 0
            else:
                y_guess = int(rng.integers(0, 2))
            wins += int(out.f == 1 and y_guess == y)
        eps3 = n_messages * _uncloneable_eps(params.n, params.ell)
        report["adversary"] = adversary
        report["accepts"] = accepts
        report["wins"] = wins
        _report_interval(report, wins, trials)
        report["advantage"] = wins / trials - accepts / (2.0 * trials)
        report["epsilon_bound"] = eps3
        sigma = math.sqrt(0.25 / trials)
        report["pass"] = report["advantage"] <= eps3 + 3 * sigma
        return report

    raise ValueError(f"unknown experiment kind {kind!r}")


# ------------------------------------------------------------------
# uncloneable commitment
# ------------------------------------------------------------------


@dataclass(frozen=True)
class UrbcParams:
    """Commitment configuration: the committed string is ell bits extracted
    from the phase label; the reveal is certified by a code syndrome plus an
    eta-fraction spot check."""

    n: int
    ell: int
    eta: float
    code: LinearCode
    extractor: Optional[ToeplitzExtractor] = None
    scheme: str = "ideal"

    def __post_init__(self):
        if self.n < 2 or self.n % 2:
            raise ValueError("ambient dimension must be even and >= 2")
        if self.code.length != self.n // 2:
            raise ValueError("code length must be n/2")
        if self.extractor is None:
            object.__setattr__(self, "extractor", ToeplitzExtractor(self.n // 2, self.ell))
        if self.extractor.n_in != self.n // 2 or self.extractor.ell != self.ell:
            raise ValueError("extractor shape must be (n/2 -> ell)")
        if self.scheme not in ("ideal", "hash_based"):
            raise ValueError(f"unknown commitment kind {self.scheme!r}")
        _check_spot_size(self.eta, self.n // 2)

    @property
    def half(self) -> int:
        return self.n // 2

    @property
    def spot_size(self) -> int:
        return _check_spot_size(self.eta, self.n // 2)


@dataclass(frozen=True)
class UrbcOutcome:
    """One commitment run: Alice's opened string y, Bob's computed string
    y_hat (None unless his reveal checks pass), the check flag g, the reveal
    flag f, and the transcript."""

    y: Gf2Vec
    y_hat: Optional[Gf2Vec]
    g: int
    f: int
    transcript: Transcript


def run_urbc(
    params: UrbcParams,
    rng: np.random.Generator,
    *,
    alice: str = "honest",
    family: str = "register",
) -> UrbcOutcome:
    """One commit / check / reveal interaction.

    alice="binding_attack": Alice plays commit and check honestly, then at
    reveal substitutes t'' = t' + (minimum-weight codeword), which preserves
    the syndrome, and hopes the spot check misses the support.  Her output y
    is the string she tried to open to.
    """
    if alice not in ("honest", "binding_attack"):
        raise ValueError(f"unknown Alice role {alice!r}")
    ext = params.extractor
    scheme = CommitmentScheme(params.scheme)
    tr = Transcript()
    backend = "wiesner" if family == "register" else "statevector"

    # commit
    a = sample_subspace(params.n, family, rng)
    t = Gf2Vec(_uniform_bits(rng, params.half))
    tp = Gf2Vec(_uniform_bits(rng, params.half))
    r = Gf2Vec(_uniform_bits(rng, ext.seed_len))
    h = Gf2Vec(_uniform_bits(rng, params.ell))
    token, opening = base_commit(scheme, _pack_pair(r, h), rng)
    tr.send("alice", "bob", "base_commitment", token)
    reg = prepare_coset_state(CosetDescriptor(a, t, tp), backend=backend)
    tr.send_quantum("alice", "bob", "coset_state", "qreg:0")

    # check
    tr.send("alice", "bob", "subspace", a.to_json())
    t_hat, tp_hat = measure_coset_basis(reg, a, rng)
    tr.send("bob", "alice", "position_response", t_hat)
    g = int(t_hat == t)
    tr.send("alice", "bob", "check_flag", g)

    # reveal
    spot = _spot_indices(rng, params.half, params.spot_size)
    j = IndexSubset(params.half, tuple(int(i) for i in spot))
    tr.send("bob", "alice", "spot_subset", j)
    reveal_tp = tp
    if alice == "binding_attack":
        reveal_tp = tp + min_weight_codeword(params.code)
    syn_sent = Gf2Vec(_syn(params.code, reveal_tp.bits))
    tr.send("alice", "bob", "syndrome", syn_sent)
    spot_sent = Gf2Vec(reveal_tp.bits[spot])
    tr.send("alice", "bob", "spot_bits", spot_sent)
    tr.send("alice", "bob", "opening", (token, r, h, opening))

    syn_ok = Gf2Vec(_syn(params.code, tp_hat.bits)) == syn_sent
    spot_ok = np.array_equal(tp_hat.bits[spot], spot_sent.bits)
    base_ok = base_verify(scheme, token, _pack_pair(r, h), opening)
    f = int(syn_ok and spot_ok and base_ok)
    tr.send("bob", "alice", "reveal_flag", f)

    y = ext.extract(reveal_tp, r) + h
    y_hat = ext.extract(tp_hat, r) + h if f else None
    return UrbcOutcome(y, y_hat, g, f, tr)


def urbc_hiding_exact(params: UrbcParams) -> float:
    """Exact distance between the joint (committed string, receiver view)
    state and (uniform string) ⊗ (view), for the ideal base commitment.

    The pre-reveal view is the coset state alone: the ideal token is an
    opaque handle carrying no information.  Register-family enumeration,
    n <= 6, ell <= 2.
    """
    if params.scheme != "ideal":
        raise ValueError("the exact probe models the ideal base commitment")
    if params.n > 6 or params.ell > 2:
        raise ValueError("enumeration too large")
    ext = params.extractor
    n, ell, half = params.n, params.ell, params.half
    dim_state = 1 << n
    n_y = 1 << ell
    joint = np.zeros((n_y * dim_state, n_y * dim_state), dtype=np.complex128)
    view = np.zeros((dim_state, dim_state), dtype=np.complex128)
    count = 0
    for a in _register_subspaces(n):
        for t_int, tp_int in itertools.product(range(1 << half), repeat=2):
            t = Gf2Vec.from_int(t_int, half)
            tp = Gf2Vec.from_int(tp_int, half)
            psi = prepare_coset_state(
                CosetDescriptor(a, t, tp), backend="statevector"
            ).payload.amps
            block = np.outer(psi, psi.conj())
            for r_int in range(1 << ext.seed_len):
                r = Gf2Vec.from_int(r_int, ext.seed_len)
                base = ext.extract(tp, r)
                for h_int in range(1 << ell):
                    y = (base + Gf2Vec.from_int(h_int, ell)).to_int()
                    off = y << n
                    joint[off : off + dim_state, off : off + dim_state] += block
                    view += block
                    count += 1
    joint /= count
    view /= count
    product = np.zeros_like(joint)
    for y in range(n_y):
        off = y << n
        product[off : off + dim_state, off : off + dim_state] = view / n_y
    return trace_distance(DensityOp(joint), DensityOp(product))


def urbc_experiment(
    kind: str,
    params: UrbcParams,
    *,
    trials: int = 1000,
    seed: int = 0,
) -> dict:
    """kind="correctness": honest runs must agree everywhere.
    kind="binding": the syndrome-preserving substitution attack; reports the
    acceptance rate, its hypergeometric closed form, and the reveal bound.
    kind="hiding": exact trace-distance probe (no trials)."""
    report: dict = {"experiment": f"urbc_{kind}", "n": params.n, "ell": params.ell}
    if kind == "hiding":
        dist = urbc_hiding_exact(params)
        report["trace_distance"] = dist
        report["pass"] = dist <= 1e-9
        return report

    report["trials"] = trials
    report["seed"] = seed
    if kind == "correctness":
        bad = 0
        for i in range(trials):
            out = run_urbc(params, trial_rng(seed, i))
            if not (out.g == 1 and out.f == 1 and out.y_hat == out.y):
                bad += 1
        report["disagreements"] = bad
        report["pass"] = bad == 0
        return report

    if kind == "binding":
        accepts = 0
        for i in range(trials):
            out = run_urbc(params, trial_rng(seed, i), alice="binding_attack")
            accepts += out.f
        half, js = params.half, params.spot_size
        w = int(min_weight_codeword(params.code).weight())
        report["accepts"] = accepts
        _report_interval(report, accepts, trials)
        report["analytic_rate"] = math.comb(half - w, js) / math.comb(half, js)
        report["binding_bound"] = (1.0 - 2.0 * params.code.distance / params.n) ** js
        sigma = math.sqrt(report["analytic_rate"] * (1 - report["analytic_rate"]) / trials)
        report["pass"] = (
            abs(accepts / trials - report["analytic_rate"]) <= 3 * sigma
            and accepts / trials <= report["binding_bound"] + 3 * sigma
        )
        return report

    raise ValueError(f"unknown experiment kind {kind!r}")


# ------------------------------------------------------------------
# receiver-independent key distribution
# ------------------------------------------------------------------


@dataclass(frozen=True)
class QkdParams:
    """Key-distribution configuration over the register family: code and
    extractor act on the n/2 phase bits; gamma tolerates position errors at
    parameter estimation; eta sizes the reconciliation spot check."""

    n: int
    ell: int
    gamma: float
    eta: float
    code: LinearCode
    extractor: Optional[ToeplitzExtractor] = None

    def __post_init__(self):
        if self.n < 2 or self.n % 2:
            raise ValueError("ambient dimension must be even and >= 2")
        if not 0.0 <= self.gamma <= 0.5:
            raise ValueError("gamma must lie in [0, 1/2]")
        if self.code.length != self.n // 2:
            raise ValueError("code length must be n/2")
        if not self.code.has_decoder():
            raise ValueError("the code must support coset-leader decoding")
        if self.extractor is None:
            object.__setattr__(self, "extractor", ToeplitzExtractor(self.n // 2, self.ell))
        if self.extractor.n_in != self.n // 2 or self.extractor.ell != self.ell:
            raise ValueError("extractor shape must be (n/2 -> ell)")
        _check_spot_size(self.eta, self.n // 2)

    @property
    def half(self) -> int:
        return self.n // 2

    @property
    def spot_size(self) -> int:
        return _check_spot_size(self.eta, self.n // 2)


@dataclass(frozen=True)
class QkdOutcome:
    """One key-distribution run: Alice's key k, the device's key k_hat (both
    None on abort), the accept flag, Eve's key guess (None without an
    eavesdropper), the observed parameter-estimation distance, the
    reconciliation mismatch count (None if aborted earlier), and the
    transcript."""

    k: Optional[Gf2Vec]
    k_hat: Optional[Gf2Vec]
    f: int
    eve_guess: Optional[Gf2Vec]
    est_distance: int
    recon_mismatches: Optional[int]
    transcript: Transcript


@dataclass(frozen=True)
class KeepAndSubstitute:
    """Eve keeps the whole state and forwards a fixed fake record."""

    x: Optional[Gf2Vec] = None  # None = all-zero data bits
    theta: Optional[Gf2Vec] = None  # None = all computational


@dataclass(frozen=True)
class InterceptResend:
    """Eve measures every qubit in a guessed basis and resends her outcome."""

    theta_hat: Optional[Gf2Vec] = None  # None = fresh uniform bases per run


@dataclass(frozen=True)
class SyndromeFault:
    """Device fault: the device's phase word is corrupted by a fixed codeword
    (so the reported syndrome is unchanged) before any of its responses."""

    codeword: Optional[Gf2Vec] = None  # None = minimum-weight codeword


EveKind = Union[None, KeepAndSubstitute, InterceptResend]


def run_riqkd(
    params: QkdParams,
    rng: np.random.Generator,
    *,
    noise: Optional[PauliNoise] = None,
    device: Union[str, SyndromeFault] = "honest",
    eve: EveKind = None,
) -> QkdOutcome:
    """One receiver-independent key-distribution run on the register family.

    The conjugate-coding record is tracked classically, so runs scale to
    thousands of qubits.  Only Alice aborts; the device answers every
    challenge.  Draw order is fixed (state, channel, device coins, spot
    subset, seed, Eve guess), making runs replayable from the generator.
    """
    ext = params.extractor
    half = params.half
    tr = Transcript()

    # state preparation: basis pattern + labels, as a conjugate-coding record
    theta = _half_weight_indicator(rng, params.n)
    free = np.flatnonzero(theta == 0)
    pivots = np.flatnonzero(theta == 1)
    t = _uniform_bits(rng, half)
    tp = _uniform_bits(rng, half)
    x = np.zeros(params.n, dtype=np.uint8)
    x[free] = t
    x[pivots] = tp
    tr.send_quantum("alice", "bob", "coset_state", "qreg:0")

    # the channel: Eve and/or noise act on the record in transit
    eve_record: Optional[tuple[np.ndarray, np.ndarray]] = None
    rec_theta, rec_x = theta, x
    if isinstance(eve, KeepAndSubstitute):
        eve_record = (theta.copy(), x.copy())
        rec_theta = (
            eve.theta.bits.copy() if eve.theta is not None else np.zeros(params.n, np.uint8)
        )
        rec_x = eve.x.bits.copy() if eve.x is not None else np.zeros(params.n, np.uint8)
        if rec_theta.shape != theta.shape or rec_x.shape != x.shape:
            raise ValueError("substitute record length must match the run")
    elif isinstance(eve, InterceptResend):
        hat = (
            eve.theta_hat.bits.copy()
            if eve.theta_hat is not None
            else _uniform_bits(rng, params.n)
        )
        if hat.shape != theta.shape:
            raise ValueError("basis-guess length must match the run")
        coins = _uniform_bits(rng, params.n)
        y = np.where(hat == theta, x, coins)
        eve_record = (hat, y)
        rec_theta, rec_x = hat, y
    elif eve is not None:
        raise ValueError(f"unknown eavesdropper kind {eve!r}")
    if noise is not None:
        rec_x = noise.apply_bits(rec_x, rec_theta, rng)

    # the device measures in the coset basis of a (bases = theta)
    dev_coins = _uniform_bits(rng, params.n)
    dev_read = np.where(rec_theta == theta, rec_x, dev_coins)
    t_hat = dev_read[free]
    tp_hat = dev_read[pivots]
    fault = isinstance(device, SyndromeFault)
    if not fault and device != "honest":
        raise ValueError(f"unknown device kind {device!r}")
    if fault:
        c = device.codeword if device.codeword is not None else min_weight_codeword(params.code)
        if c.n != half:
            raise ValueError("fault codeword length must be n/2")
        tp_hat = tp_hat ^ c.bits  # same syndrome, different word

    # parameter estimation
    tr.send("alice", "bob", "subspace", Gf2Vec(theta))
    tr.send("bob", "alice", "position_response", Gf2Vec(t_hat))
    est_distance = int((t_hat ^ t).sum())
    if est_distance > params.gamma * half:
        tr.send("alice", "bob", "estimate_flag", 0)
        return QkdOutcome(None, None, 0, None, est_distance, None, tr)
    tr.send("alice", "bob", "estimate_flag", 1)

    # error correction: the device reports its phase-word syndrome
    syn_hat = _syn(params.code, tp_hat)
    tr.send("bob", "alice", "syndrome_response", Gf2Vec(syn_hat))
    t_bar = _align(params.code, tp, syn_hat)

    # information reconciliation
    spot = _spot_indices(rng, half, params.spot_size)
    tr.send("alice", "bob", "spot_subset", IndexSubset(half, tuple(int(i) for i in spot)))
    spot_reply = tp_hat[spot]
    tr.send("bob", "alice", "spot_response", Gf2Vec(spot_reply))
    mismatches = int((spot_reply ^ t_bar[spot]).sum())
    if mismatches:
        tr.send("alice", "bob", "reconcile_flag", 0)
        return QkdOutcome(None, None, 0, None, est_distance, mismatches, tr)
    tr.send("alice", "bob", "reconcile_flag", 1)

    # privacy amplification
    r = Gf2Vec(_uniform_bits(rng, ext.seed_len))
    tr.send("alice", "bob", "extractor_seed", r)
    k = ext.extract(Gf2Vec(t_bar), r)
    k_hat = ext.extract(Gf2Vec(tp_hat), r)

    # Eve's guess from her records plus the classical transcript
    eve_guess = None
    if isinstance(eve, KeepAndSubstitute):
        # she holds the genuine record and heard the bases: her phase read is
        # exact, and she can run Alice's own correction on it
        _, ex = eve_record
        tp_eve = ex[pivots]
        eve_guess = ext.extract(Gf2Vec(_align(params.code, tp_eve, syn_hat)), r)
    elif isinstance(eve, InterceptResend):
        etheta, ex = eve_record
        eve_coins = _uniform_bits(rng, half)
        tp_eve = np.where(etheta[pivots] == 1, ex[pivots], eve_coins)
        eve_guess = ext.extract(Gf2Vec(_align(params.code, tp_eve, syn_hat)), r)
    return QkdOutcome(k, k_hat, 1, eve_guess, est_distance, mismatches, tr)


def riqkd_experiment(
    kind: str,
    params: QkdParams,
    *,
    trials: int = 1000,
    seed: int = 0,
    noise: Optional[PauliNoise] = None,
    fault: Optional[SyndromeFault] = None,
) -> dict:
    """kind="correctness": honest (optionally noisy) runs; counts aborts and
    accepted-key mismatches.  kind="completeness": abort rate against the
    closed-form completeness bound (requires noise).  kind="device_fault":
    Pr[K != K_hat and F = 1] under a syndrome-preserving fault, against the
    reveal bound."""
    report: dict = {
        "experiment": f"riqkd_{kind}",
        "n": params.n,
        "ell": params.ell,
        "gamma": params.gamma,
        "eta": params.eta,
        "code": list(params.code.kind),
        "trials": trials,
        "seed": seed,
    }
    if noise is not None:
        report["noise"] = {"dx": noise.dx, "dz": noise.dz}

    if kind in ("correctness", "completeness"):
        aborts = mismatched = 0
        for i in range(trials):
            out = run_riqkd(params, trial_rng(seed, i), noise=noise)
            if out.f == 0:
                aborts += 1
            elif out.k != out.k_hat:
                mismatched += 1
        report["aborts"] = aborts
        report["key_mismatches_accepted"] = mismatched
        _report_interval(report, aborts, trials, prefix="abort_")
        if kind == "completeness":
            if noise is None:
                raise ValueError("completeness needs a noise model")
            delta = max(noise.dx, noise.dz)
            bounds = protocol_bounds(
                params.n, d=params.code.distance, gamma=params.gamma, delta=delta
            )
            report["completeness_bound"] = bounds.values["completeness_bound"]
            report["pass"] = aborts / trials <= report["completeness_bound"]
        else:
            report["pass"] = aborts == 0 and mismatched == 0
        return report

    if kind == "device_fault":
        fault = fault if fault is not None else SyndromeFault()
        accepts = wrong_key = 0
        for i in range(trials):
            out = run_riqkd(params, trial_rng(seed, i), noise=noise, device=fault)
            accepts += out.f
            wrong_key += int(out.f == 1 and out.k != out.k_hat)
        report["accepts"] = accepts
        report["wrong_key_accepts"] = wrong_key
        _report_interval(report, wrong_key, trials)
        bound = (1.0 - 2.0 * params.code.distance / params.n) ** params.spot_size
        report["correctness_bound"] = bound
        sigma = math.sqrt(max(bound * (1 - bound), 1e-12) / trials)
        report["pass"] = wrong_key / trials <= bound + 3 * sigma
        return report

    raise ValueError(f"unknown experiment kind {kind!r}")


# ------------------------------------------------------------------
# the reference one-sided protocol and its breaking attack
# ------------------------------------------------------------------


@dataclass(frozen=True)
class TfkwParams:
    """Reference-protocol configuration: n conjugate-coded qubits, a
    check_size-bit spot sample with threshold gamma*n, and code + extractor
    over the remaining bits."""

    n: int
    gamma: float
    code: LinearCode
    extractor: Optional[ToeplitzExtractor] = None
    check_size: Optional[int] = None

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("need at least two qubits")
        if not 0.0 <= self.gamma <= 1.0:
            raise ValueError("gamma must lie in [0, 1]")
        if self.check_size is None:
            object.__setattr__(self, "check_size", self.n // 2)
        if not 0 < self.check_size < self.n:
            raise ValueError("check subset must be a proper nonempty subset")
        keep = self.n - self.check_size
        if self.code.length != keep:
            raise ValueError("code length must match the kept bits")
        if not self.code.has_decoder():
            raise ValueError("the code must support coset-leader decoding")
        if self.extractor is None:
            object.__setattr__(self, "extractor", ToeplitzExtractor(keep, 2))
        if self.extractor.n_in != keep:
            raise ValueError("extractor input must match the kept bits")


def run_tfkw(
    params: TfkwParams,
    rng: np.random.Generator,
    *,
    eve: Optional[str] = None,
    noise: Optional[PauliNoise] = None,
) -> QkdOutcome:
    """One run of the reference protocol, honestly or under the
    substitute-the-state attack.

    eve="substitute_zero": Eve keeps the conjugate-coded state and hands the
    device |0...0⟩.  Once the bases are announced she reads the kept state
    perfectly and, controlling the device, supplies its answers — so the spot
    check passes and she computes the device's key exactly.
    """
    if eve not in (None, "substitute_zero"):
        raise ValueError(f"unknown eavesdropper kind {eve!r}")
    ext = params.extractor
    tr = Transcript()

    x = _uniform_bits(rng, params.n)
    theta = _uniform_bits(rng, params.n)
    tr.send_quantum("alice", "bob", "wiesner_state", "qreg:0")

    rec_x = x
    if noise is not None:
        rec_x = noise.apply_bits(rec_x, theta, rng)

    # the receipt confirmation precedes the basis announcement: the device
    # commits to holding the state before it learns how to read it
    tr.send("bob", "alice", "receipt", 1)
    tr.send("alice", "bob", "basis_string", Gf2Vec(theta))
    if eve == "substitute_zero":
        # Eve kept the real state; with the bases public her read is exact,
        # and the device (hers) repeats it
        y = rec_x.copy()
    else:
        y = rec_x.copy()  # honest device measures in the announced bases

    check = np.sort(rng.permutation(params.n)[: params.check_size])
    keep = np.setdiff1d(np.arange(params.n), check)
    tr.send("alice", "bob", "spot_subset", IndexSubset(params.n, tuple(int(i) for i in check)))
    tr.send("alice", "bob", "spot_bits", Gf2Vec(x[check]))
    est_distance = int((x[check] ^ y[check]).sum())
    if est_distance > params.gamma * params.n:
        tr.send("bob", "alice", "estimate_flag", 0)
        return QkdOutcome(None, None, 0, None, est_distance, None, tr)
    tr.send("bob", "alice", "estimate_flag", 1)

    syn_keep = _syn(params.code, x[keep])
    tr.send("alice", "bob", "syndrome", Gf2Vec(syn_keep))
    r = Gf2Vec(_uniform_bits(rng, ext.seed_len))
    tr.send("alice", "bob", "extractor_seed", r)

    x_dev = _align(params.code, y[keep], syn_keep)
    k = ext.extract(Gf2Vec(x[keep]), r)
    k_hat = ext.extract(Gf2Vec(x_dev), r)

    eve_guess = None
    if eve == "substitute_zero":
        # her read equals y, and the correction procedure is public
        eve_guess = ext.extract(Gf2Vec(_align(params.code, y[keep], syn_keep)), r)
    return QkdOutcome(k, k_hat, 1, eve_guess, est_distance, 0, tr)


def tfkw_experiment(
    params: TfkwParams,
    *,
    eve: Optional[str] = None,
    trials: int = 100,
    seed: int = 0,
    noise: Optional[PauliNoise] = None,
) -> dict:
    """Counts aborts, Alice/device key agreement, and (under the attack)
    how often Eve's computed key equals the device's."""
    report: dict = {
        "experiment": "tfkw",
        "n": params.n,
        "gamma": params.gamma,
        "eve": eve,
        "trials": trials,
        "seed": seed,
    }
    aborts = key_match = eve_match = 0
    for i in range(trials):
        out = run_tfkw(params, trial_rng(seed, i), eve=eve, noise=noise)
        if out.f == 0:
            aborts += 1
            continue
        key_match += int(out.k == out.k_hat)
        if out.eve_guess is not None:
            eve_match += int(out.eve_guess == out.k_hat)
    report["aborts"] = aborts
    report["key_matches"] = key_match
    report["eve_matches_device"] = eve_match
    report["broken"] = aborts == 0 and eve_match == trials
    return report


# ------------------------------------------------------------------
# secrecy probe
# ------------------------------------------------------------------


def secrecy_probe(
    params: QkdParams,
    *,
    eve: EveKind = None,
    trials: int = 1000,
    seed: int = 0,
    noise: Optional[PauliNoise] = None,
    mode: str = "monte_carlo",
    kappa: Optional[float] = None,
) -> dict:
    """Estimate how well an eavesdropper guesses the final key.

    mode="monte_carlo": runs the protocol and reports Pr[guess and F=1]
    against the trivial term 2^-ell * Pr[F=1] plus the closed-form secrecy
    bound (computed at min-entropy ``kappa``, defaulting to the
    half-dimension uncertainty rate).  Without an eavesdropper the guess is
    a uniform baseline.

    mode="exact": noiseless, eavesdropper-free enumeration of the classical
    leakage (n <= 6, ell = 1): returns the exact trace distance between
    (key, Eve's view) and (uniform key) ⊗ (view).  At toy sizes the syndrome
    and spot bits can determine the key outright, so this reports a real and
    possibly large leak.
    """
    if mode == "exact":
        return _secrecy_exact(params)
    if mode != "monte_carlo":
        raise ValueError(f"unknown probe mode {mode!r}")
    report: dict = {
        "experiment": "secrecy_probe",
        "n": params.n,
        "ell": params.ell,
        "gamma": params.gamma,
        "eve": type(eve).__name__ if eve is not None else None,
        "trials": trials,
        "seed": seed,
    }
    accepts = hits = 0
    for i in range(trials):
        rng = trial_rng(seed, i)
        out = run_riqkd(params, rng, noise=noise, eve=eve)
        if out.f != 1:
            continue
        accepts += 1
        guess = out.eve_guess
        if guess is None:
            guess = Gf2Vec(_uniform_bits(rng, params.ell))
        hits += int(guess == out.k)
    report["accepts"] = accepts
    report["accept_rate"] = accepts / trials
    report["guess_and_accept"] = hits
    _report_interval(report, hits, trials, prefix="guess_")
    report["guess_rate_conditional"] = hits / accepts if accepts else None
    if kappa is None:
        kappa = NEG_LG_COS_PI_8 * params.n / 2.0
    bounds = protocol_bounds(
        params.n,
        d=params.code.distance,
        s=params.code.syndrome_length,
        eta=params.eta,
        gamma=params.gamma,
        kappa=kappa,
        ell=params.ell,
    )
    eps = bounds.values["secrecy_bound"]
    report["secrecy_bound"] = eps
    trivial = 2.0 ** (-params.ell) * (accepts / trials)
    report["trivial_term"] = trivial
    sigma = math.sqrt(max((trivial + eps) * (1 - min(trivial + eps, 1.0)), 1e-12) / trials)
    report["pass"] = hits / trials <= trivial + eps + 3 * sigma
    return report


def _secrecy_exact(params: QkdParams) -> dict:
    if params.n > 6 or params.ell != 1:
        raise ValueError("enumeration too large for exact mode")
    ext = params.extractor
    half = params.half
    js = params.spot_size
    probs: dict[tuple, float] = {}
    thetas = list(itertools.combinations(range(params.n), half))
    spots = list(itertools.combinations(range(half), js))
    seeds = list(range(1 << ext.seed_len))
    weight = 1.0 / (
        len(thetas) * (1 << half) * (1 << half) * len(spots) * len(seeds)
    )
    for support in thetas:
        for t_int in range(1 << half):
            for tp_int in range(1 << half):
                tp = Gf2Vec.from_int(tp_int, half)
                syn_bits = tuple(int(b) for b in _syn(params.code, tp.bits))
                for spot in spots:
                    spot_bits = tuple(int(tp.bits[i]) for i in spot)
                    for r_int in seeds:
                        r = Gf2Vec.from_int(r_int, ext.seed_len)
                        k = ext.extract(tp, r).to_int()
                        # noiseless and honest: t_hat = t, syndromes agree,
                        # the check passes; Eve's view is the classical flow
                        view = (support, t_int, syn_bits, spot, spot_bits, r_int)
                        key = (k, view)
                        probs[key] = probs.get(key, 0.0) + weight
    views: dict[tuple, float] = {}
    for (k, view), p in probs.items():
        views[view] = views.get(view, 0.0) + p
    dist = 0.0
    n_keys = 1 << params.ell
    for view, pv in views.items():
        for k in range(n_keys):
            dist += abs(probs.get((k, view), 0.0) - pv / n_keys)
    return {
        "experiment": "secrecy_exact",
        "n": params.n,
        "ell": params.ell,
        "trace_distance": 0.5 * dist,
    }
