"""Referee and strategy harness for the leaky monogamy-of-entanglement game.

One round: the referee samples a half-dimension subspace ``a`` and labels
(t, t'), hands the coset state to the adversary channel, which splits it
between Bob and Charlie.  Both then learn ``a``; Bob answers a position guess
t_B, and — after the referee forwards t_B to Charlie when the leak is on —
Charlie answers a phase guess t'_C.  The round is won iff d(t_B, t) <= m AND
d(t'_C, t') <= m' (m = m' = 0 is the exact game).

Two execution paths produce the same distribution for the built-in
strategies:

* a vectorised classical path for the register family, where every built-in
  reduces to bookkeeping over Wiesner records (basis bits, data bits, coins);
* a statevector path that actually prepares the state, runs the channel
  dilation and Born-rule measures party registers, for any family up to the
  simulator's qubit limit.

Strategies whose split is not a product across the Bob/Charlie cut must do
all their measuring inside the channel (the party registers are measured
independently, which samples the correct marginals only for product states
or for rules that read the channel log).  Every built-in obeys this.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .gf2 import Gf2Subspace, Gf2Vec, hamming, sample_subspace, solve_coset_membership
from .info import ball_volume
from .mc import TrialReader, run_blocks, wilson_interval, words_for
from .qsim import (
    AdversaryChannel,
    CosetDescriptor,
    QuantumReg,
    WiesnerRecord,
    append_ancilla,
    apply_adversary,
    apply_unitary,
    assign_ownership,
    measure_coset_basis,
    measure_qubits,
    prepare_coset_state,
)

__all__ = [
    "MoeParams",
    "GameResult",
    "PartyView",
    "Strategy",
    "builtin_strategy",
    "all_builtin_strategies",
    "analytic_win",
    "play_leaky",
    "BUILTIN_KINDS",
]

BUILTIN_KINDS = (
    "bob_all",
    "charlie_all",
    "mix",
    "measure_computational",
    "measure_wiesner",
    "keep_and_substitute",
    "leak_smuggle",
)

_HADAMARD = np.array([[1.0, 1.0], [1.0, -1.0]]) / math.sqrt(2.0)
_PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]])

_MAX_SEED = 1 << 64


@dataclass(frozen=True)
class MoeParams:
    """Game configuration: ambient dimension, subspace family, error radii
    (m for Bob's position guess, m' for Charlie's phase guess), and the
    Monte Carlo run length."""

    n: int
    family: str = "register"
    m: int = 0
    m_prime: int = 0
    trials: int = 10_000
    seed: int = 0

    def __post_init__(self):
        if self.n < 2 or self.n % 2:
            raise ValueError("ambient dimension must be even and >= 2")
        if self.family not in ("register", "all"):
            raise ValueError(f"unknown subspace family {self.family!r}")
        half = self.n // 2
        if not 0 <= self.m <= half:
            raise ValueError("position radius m must lie in [0, n/2]")
        if not 0 <= self.m_prime <= half:
            raise ValueError("phase radius m' must lie in [0, n/2]")
        if self.trials < 1:
            raise ValueError("trials must be positive")
        if not 0 <= self.seed < _MAX_SEED:
            raise ValueError("seed must fit in 64 bits")

    @property
    def half(self) -> int:
        return self.n // 2


@dataclass(frozen=True)
class GameResult:
    """Counts from one run plus the 95% Wilson interval on the win rate.

    ``bob_correct`` counts rounds with d(t_B, t) <= m; conditioned on those,
    ``wins`` additionally requires Charlie's guess inside its radius."""

    wins: int
    trials: int
    bob_correct: int
    estimate: float
    wilson_low: float
    wilson_high: float

    @classmethod
    def from_counts(cls, wins: int, bob_correct: int, trials: int) -> "GameResult":
        if not 0 <= wins <= bob_correct <= trials:
            raise ValueError("need 0 <= wins <= bob_correct <= trials")
        low, high = wilson_interval(wins, trials)
        return cls(wins, trials, bob_correct, wins / trials, low, high)

    def to_json(self) -> str:
        return json.dumps(
            {
                "wins": self.wins,
                "trials": self.trials,
                "bob_correct": self.bob_correct,
                "estimate": self.estimate,
                "wilson_low": self.wilson_low,
                "wilson_high": self.wilson_high,
            }
        )


@dataclass(frozen=True, eq=False)
class PartyView:
    """What one party holds when asked to answer: its qubits of the
    post-channel register and the channel's measurement log."""

    reg: QuantumReg
    qubits: tuple[int, ...]
    log: tuple

    def measure_coset(self, a: Gf2Subspace, rng: np.random.Generator) -> tuple[Gf2Vec, Gf2Vec]:
        """Measure this party's qubits in the coset basis of ``a``."""
        if len(self.qubits) != a.n:
            raise ValueError("party register size does not match the subspace")
        return measure_coset_basis(self.reg, a, rng, qubits=self.qubits)


# A register kernel builder maps (params, leak) to (words_per_trial, kernel);
# the kernel turns a (T, words) block into int64 [wins, bob_correct].
KernelBuilder = Callable[[MoeParams, bool], tuple[int, Callable[[np.ndarray], np.ndarray]]]


@dataclass(frozen=True, eq=False)
class Strategy:
    """A splitting channel plus the two answering rules.

    ``split(n, rng)`` builds the channel for one round; ``bob(a, view, rng)``
    returns the position guess; ``charlie(a, t_b, view, rng)`` returns the
    phase guess (t_b is None when the leak is off).  ``register_kernel``, when
    present, is the equivalent vectorised path for the register family."""

    name: str
    split: Callable[[int, np.random.Generator], AdversaryChannel]
    bob: Callable[[Gf2Subspace, "PartyView", np.random.Generator], Gf2Vec]
    charlie: Callable[[Gf2Subspace, Optional[Gf2Vec], "PartyView", np.random.Generator], Gf2Vec]
    register_kernel: Optional[KernelBuilder] = None
    kind: Optional[str] = None
    options: Optional[dict] = None

    def analytic(self, params: MoeParams) -> Optional[float]:
        """Closed-form win probability, when one is known for this strategy."""
        if self.kind is None:
            return None
        return analytic_win(self.kind, params, **(self.options or {}))


# ------------------------------------------------------------------
# shared helpers
# ------------------------------------------------------------------


def _uniform_guess(rng: np.random.Generator, k: int) -> Gf2Vec:
    return Gf2Vec(rng.integers(0, 2, size=k, dtype=np.uint8))


def _sample_theta(floats: np.ndarray) -> np.ndarray:
    """Exact-half-weight basis rows from iid uniforms: the n/2 largest draws
    of each row mark the Hadamard (pivot) positions."""
    n = floats.shape[1]
    order = np.argsort(floats, axis=1, kind="stable")
    theta = np.zeros(floats.shape, dtype=np.uint8)
    np.put_along_axis(theta, order[:, n // 2 :], np.uint8(1), axis=1)
    return theta


def _coord_order(theta: np.ndarray) -> np.ndarray:
    """Column indices with the free (θ=0) coordinates first, each group
    ascending — the order in which (t, t') bits populate the data word."""
    return np.argsort(theta, axis=1, kind="stable")


def _binom_tail_half(f: int, m: int) -> float:
    """Pr[Binomial(f, 1/2) <= m], exact rational arithmetic before division."""
    if m >= f:
        return 1.0
    total = sum(math.comb(f, k) for k in range(0, m + 1))
    return total / float(1 << f)


def _counters(win: np.ndarray, bob_ok: np.ndarray) -> np.ndarray:
    return np.array([int(win.sum()), int(bob_ok.sum())], dtype=np.int64)


# ------------------------------------------------------------------
# built-in strategies
# ------------------------------------------------------------------


def _assign_all(n: int, party: str) -> AdversaryChannel:
    return AdversaryChannel([assign_ownership(range(n), party)])


def _measure_coset_bob(a, view, rng):
    t_hat, _ = view.measure_coset(a, rng)
    return t_hat


def _uniform_bob(a, view, rng):
    return _uniform_guess(rng, a.dim)


def _uniform_charlie(a, t_b, view, rng):
    return _uniform_guess(rng, a.dim)


def _logged_outcome(view: PartyView) -> Gf2Vec:
    if not view.log:
        raise ValueError("strategy expected a measurement in the channel log")
    return view.log[0][1]


def _build_bob_all(params: MoeParams, leak: bool):
    half, m, mp = params.half, params.m, params.m_prime
    wpt = words_for(bit_fields=(half, half))

    def kernel(words):
        r = TrialReader(words)
        tp = r.bits(half)
        guess = r.bits(half)
        bob_ok = np.ones(r.count, dtype=bool)  # Bob measures his own state exactly
        win = (guess ^ tp).sum(axis=1) <= mp
        return _counters(win, bob_ok)

    return wpt, kernel


def _build_charlie_all(params: MoeParams, leak: bool):
    half, m = params.half, params.m
    wpt = words_for(bit_fields=(half, half))

    def kernel(words):
        r = TrialReader(words)
        t = r.bits(half)
        guess = r.bits(half)
        bob_ok = (guess ^ t).sum(axis=1) <= m
        return _counters(bob_ok, bob_ok)  # Charlie holds the state: exact

    return wpt, kernel


def _build_mix(q: float):
    def build(params: MoeParams, leak: bool):
        half, m, mp = params.half, params.m, params.m_prime
        wpt = words_for(bit_fields=(half, half, half), float_fields=(1,))

        def kernel(words):
            r = TrialReader(words)
            coin = r.floats(1)[:, 0] < q
            t = r.bits(half)
            tp = r.bits(half)
            guess = r.bits(half)
            bob_ok = np.where(coin, True, (guess ^ t).sum(axis=1) <= m)
            win = np.where(coin, (guess ^ tp).sum(axis=1) <= mp, bob_ok)
            return _counters(win, bob_ok)

        return wpt, kernel

    return build


def _build_measure_computational(params: MoeParams, leak: bool):
    half, mp = params.half, params.m_prime
    wpt = words_for(bit_fields=(half, half))

    def kernel(words):
        r = TrialReader(words)
        tp = r.bits(half)
        pivot_bits = r.bits(half)  # Hadamard qubits read computationally: coins
        bob_ok = np.ones(r.count, dtype=bool)  # free coordinates carry t exactly
        win = (pivot_bits ^ tp).sum(axis=1) <= mp
        return _counters(win, bob_ok)

    return wpt, kernel


def _build_measure_wiesner(theta_hat: Gf2Vec):
    def build(params: MoeParams, leak: bool):
        n, half, m, mp = params.n, params.half, params.m, params.m_prime
        if theta_hat.n != n:
            raise ValueError("basis-choice length must match the game")
        hat = theta_hat.bits[None, :]
        wpt = words_for(bit_fields=(half, half, n), float_fields=(n,))

        def kernel(words):
            r = TrialReader(words)
            t = r.bits(half)
            tp = r.bits(half)
            coins = r.bits(n)
            theta = _sample_theta(r.floats(n))
            order = _coord_order(theta)
            x = np.empty_like(theta)
            np.put_along_axis(x, order, np.concatenate([t, tp], axis=1), axis=1)
            v = np.where(theta == hat, x, coins)  # wrong-basis reads are coins
            t_b = np.take_along_axis(v, order[:, :half], axis=1)
            tp_c = np.take_along_axis(v, order[:, half:], axis=1)
            bob_ok = (t_b ^ t).sum(axis=1) <= m
            win = bob_ok & ((tp_c ^ tp).sum(axis=1) <= mp)
            return _counters(win, bob_ok)

        return wpt, kernel

    return build


def _build_keep_and_substitute(record: Optional[WiesnerRecord]):
    def build(params: MoeParams, leak: bool):
        n, half, m = params.n, params.half, params.m
        rec = record if record is not None else _zero_record(n)
        if rec.n != n:
            raise ValueError("substitute record length must match the game")
        rx = rec.x.bits[None, :]
        rtheta = rec.theta.bits[None, :]
        wpt = words_for(bit_fields=(half, n), float_fields=(n,))

        def kernel(words):
            r = TrialReader(words)
            t = r.bits(half)
            coins = r.bits(n)
            theta = _sample_theta(r.floats(n))
            order = _coord_order(theta)
            # Bob coset-measures the substitute: at each free coordinate he
            # sees the record's data bit when bases agree, a coin otherwise.
            v = np.where(rtheta == theta, np.broadcast_to(rx, theta.shape), coins)
            t_b = np.take_along_axis(v, order[:, :half], axis=1)
            bob_ok = (t_b ^ t).sum(axis=1) <= m
            return _counters(bob_ok, bob_ok)  # Charlie kept the state: exact

        return wpt, kernel

    return build


def _build_leak_smuggle(params: MoeParams, leak: bool):
    half, m, mp = params.half, params.m, params.m_prime
    wpt = words_for(bit_fields=(half, half, half))

    def kernel(words):
        r = TrialReader(words)
        t = r.bits(half)
        tp = r.bits(half)
        fallback = r.bits(half)
        # Bob answers his measured phase word as the position guess; with the
        # leak on, Charlie echoes it back as the phase guess.
        bob_ok = (tp ^ t).sum(axis=1) <= m
        charlie = tp if leak else fallback
        win = bob_ok & ((charlie ^ tp).sum(axis=1) <= mp)
        return _counters(win, bob_ok)

    return wpt, kernel


def _zero_record(n: int) -> WiesnerRecord:
    return WiesnerRecord(x=Gf2Vec.zeros(n), theta=Gf2Vec.zeros(n))


def _wiesner_split(theta_hat: Gf2Vec) -> Callable[[int, np.random.Generator], AdversaryChannel]:
    def split(n, rng):
        if theta_hat.n != n:
            raise ValueError("basis-choice length must match the game")
        actions = [
            apply_unitary(_HADAMARD, (i,))
            for i in range(n)
            if theta_hat.bits[i]
        ]
        actions.append(measure_qubits(range(n)))
        actions.append(assign_ownership(range(n), "bob"))
        return AdversaryChannel(actions)

    return split


def _substitute_split(record: Optional[WiesnerRecord]):
    def split(n, rng):
        rec = record if record is not None else _zero_record(n)
        if rec.n != n:
            raise ValueError("substitute record length must match the game")
        actions = [append_ancilla(n)]
        for i in range(n):
            if rec.x.bits[i]:
                actions.append(apply_unitary(_PAULI_X, (n + i,)))
        for i in range(n):
            if rec.theta.bits[i]:
                actions.append(apply_unitary(_HADAMARD, (n + i,)))
        actions.append(assign_ownership(range(n, 2 * n), "bob"))
        actions.append(assign_ownership(range(n), "charlie"))
        return AdversaryChannel(actions)

    return split


def builtin_strategy(
    kind: str,
    *,
    q: float = 0.5,
    theta_hat: Optional[Gf2Vec] = None,
    substitute: Optional[WiesnerRecord] = None,
) -> Strategy:
    """Construct one of the named built-in strategies.

    kinds: ``bob_all`` (Bob keeps everything), ``charlie_all``,
    ``mix`` (coin-weighted routing, weight ``q`` to Bob),
    ``measure_computational`` (measure now, both answer from the record),
    ``measure_wiesner`` (measure each qubit in the guessed basis
    ``theta_hat``), ``keep_and_substitute`` (Charlie keeps the state, Bob
    gets the fixed ``substitute`` fake), and ``leak_smuggle`` (Bob keeps
    everything and smuggles the phase word through his position answer for
    Charlie to echo).
    """
    if kind == "bob_all":
        return Strategy(
            name="bob_all",
            split=lambda n, rng: _assign_all(n, "bob"),
            bob=_measure_coset_bob,
            charlie=_uniform_charlie,
            register_kernel=_build_bob_all,
            kind=kind,
        )
    if kind == "charlie_all":
        def charlie_rule(a, t_b, view, rng):
            _, tp_hat = view.measure_coset(a, rng)
            return tp_hat

        return Strategy(
            name="charlie_all",
            split=lambda n, rng: _assign_all(n, "charlie"),
            bob=_uniform_bob,
            charlie=charlie_rule,
            register_kernel=_build_charlie_all,
            kind=kind,
        )
    if kind == "mix":
        if not 0.0 <= q <= 1.0:
            raise ValueError("mixing weight q must lie in [0, 1]")

        def split(n, rng):
            party = "bob" if rng.random() < q else "charlie"
            return _assign_all(n, party)

        def bob_rule(a, view, rng):
            if view.qubits:
                return _measure_coset_bob(a, view, rng)
            return _uniform_guess(rng, a.dim)

        def charlie_rule(a, t_b, view, rng):
            if view.qubits:
                _, tp_hat = view.measure_coset(a, rng)
                return tp_hat
            return _uniform_guess(rng, a.dim)

        return Strategy(
            name=f"mix(q={q:g})",
            split=split,
            bob=bob_rule,
            charlie=charlie_rule,
            register_kernel=_build_mix(q),
            kind=kind,
            options={"q": q},
        )
    if kind == "measure_computational":
        def split(n, rng):
            return AdversaryChannel(
                [measure_qubits(range(n)), assign_ownership(range(n), "bob")]
            )

        def bob_rule(a, view, rng):
            # the outcome is a coset element, so decoding recovers t exactly
            t_hat, _ = solve_coset_membership(a, _logged_outcome(view))
            return t_hat

        def charlie_rule(a, t_b, view, rng):
            _, u = solve_coset_membership(a, _logged_outcome(view))
            return Gf2Vec(u.bits[list(a.pivots)])

        return Strategy(
            name="measure_computational",
            split=split,
            bob=bob_rule,
            charlie=charlie_rule,
            register_kernel=_build_measure_computational,
            kind=kind,
        )
    if kind == "measure_wiesner":
        if theta_hat is None:
            raise ValueError("measure_wiesner needs a basis choice theta_hat")

        def bob_rule(a, view, rng):
            v = _logged_outcome(view)
            return Gf2Vec(v.bits[list(a.free_coords)])

        def charlie_rule(a, t_b, view, rng):
            v = _logged_outcome(view)
            return Gf2Vec(v.bits[list(a.pivots)])

        return Strategy(
            name=f"measure_wiesner(w={theta_hat.weight()})",
            split=_wiesner_split(theta_hat),
            bob=bob_rule,
            charlie=charlie_rule,
            register_kernel=_build_measure_wiesner(theta_hat),
            kind=kind,
            options={"theta_hat": theta_hat},
        )
    if kind == "keep_and_substitute":
        def bob_rule(a, view, rng):
            t_hat, _ = view.measure_coset(a, rng)
            return t_hat

        def charlie_rule(a, t_b, view, rng):
            _, tp_hat = view.measure_coset(a, rng)
            return tp_hat

        return Strategy(
            name="keep_and_substitute",
            split=_substitute_split(substitute),
            bob=bob_rule,
            charlie=charlie_rule,
            register_kernel=_build_keep_and_substitute(substitute),
            kind=kind,
            options={"substitute": substitute},
        )
    if kind == "leak_smuggle":
        def bob_rule(a, view, rng):
            _, tp_hat = view.measure_coset(a, rng)
            return tp_hat  # position answer doubles as a covert channel

        def charlie_rule(a, t_b, view, rng):
            if t_b is not None:
                return t_b
            return _uniform_guess(rng, a.dim)

        return Strategy(
            name="leak_smuggle",
            split=lambda n, rng: _assign_all(n, "bob"),
            bob=bob_rule,
            charlie=charlie_rule,
            register_kernel=_build_leak_smuggle,
            kind=kind,
        )
    raise ValueError(f"unknown built-in strategy {kind!r}")


def _alternating_basis(n: int) -> Gf2Vec:
    return Gf2Vec((np.arange(n) % 2 == 0).astype(np.uint8))


def all_builtin_strategies(n: int) -> list[Strategy]:
    """The canonical instance of every built-in kind for dimension n."""
    return [
        builtin_strategy("bob_all"),
        builtin_strategy("charlie_all"),
        builtin_strategy("mix", q=0.5),
        builtin_strategy("measure_computational"),
        builtin_strategy("measure_wiesner", theta_hat=_alternating_basis(n)),
        builtin_strategy("keep_and_substitute", substitute=_zero_record(n)),
        builtin_strategy("leak_smuggle"),
    ]


# ------------------------------------------------------------------
# closed forms
# ------------------------------------------------------------------


def _ball_fraction(half: int, radius: int) -> float:
    return ball_volume(half, radius) / float(1 << half)


def analytic_win(
    kind: str,
    params: MoeParams,
    *,
    q: float = 0.5,
    theta_hat: Optional[Gf2Vec] = None,
    substitute: Optional[WiesnerRecord] = None,
    leak: bool = True,
) -> Optional[float]:
    """Exact win probability of a built-in strategy, where known.

    Returns None when no closed form applies (currently only
    ``measure_wiesner`` outside the register family)."""
    half, m, mp = params.half, params.m, params.m_prime
    if kind == "bob_all":
        return _ball_fraction(half, mp)
    if kind == "charlie_all":
        return _ball_fraction(half, m)
    if kind == "mix":
        if not 0.0 <= q <= 1.0:
            raise ValueError("mixing weight q must lie in [0, 1]")
        return q * _ball_fraction(half, mp) + (1.0 - q) * _ball_fraction(half, m)
    if kind == "measure_computational":
        return _ball_fraction(half, mp)
    if kind == "keep_and_substitute":
        # the substitute's value never helps beyond chance: for every basis
        # overlap pattern Bob's extracted word is uniform against t
        return _ball_fraction(half, m)
    if kind == "leak_smuggle":
        if leak:
            return _ball_fraction(half, m)
        return _ball_fraction(half, m) * _ball_fraction(half, mp)
    if kind == "measure_wiesner":
        if params.family != "register":
            return None
        if theta_hat is None:
            raise ValueError("measure_wiesner needs a basis choice theta_hat")
        n = params.n
        if theta_hat.n != n:
            raise ValueError("basis-choice length must match the game")
        w = theta_hat.weight()
        total = 0.0
        denom = math.comb(n, half)
        for j in range(max(0, half - (n - w)), min(w, half) + 1):
            weight = math.comb(w, j) * math.comb(n - w, half - j) / denom
            # j pivots read in the right basis; the rest are coin flips
            total += weight * _binom_tail_half(w - j, m) * _binom_tail_half(half - j, mp)
        return total
    raise ValueError(f"unknown built-in strategy {kind!r}")


# ------------------------------------------------------------------
# referee
# ------------------------------------------------------------------


def play_leaky(
    params: MoeParams,
    strategy: Strategy,
    *,
    leak: bool = True,
    threads: int = 1,
    backend: str = "auto",
) -> GameResult:
    """Run the game ``params.trials`` times and tally wins.

    backend="wiesner" uses the strategy's vectorised register kernel (register
    family only; thread-count invariant).  backend="statevector" prepares and
    measures actual states, one trial at a time, with a per-trial Philox key
    (seed, trial); ``threads`` is ignored there.  "auto" picks the kernel
    when it exists.
    """
    if backend == "auto":
        backend = (
            "wiesner"
            if params.family == "register" and strategy.register_kernel is not None
            else "statevector"
        )
    if backend == "wiesner":
        if params.family != "register":
            raise ValueError("the vectorised path only covers the register family")
        if strategy.register_kernel is None:
            raise ValueError(f"strategy {strategy.name!r} has no register kernel")
        wpt, kernel = strategy.register_kernel(params, leak)
        wins, bob_ok = (int(c) for c in run_blocks(
            params.trials, wpt, params.seed, kernel, threads=threads
        ))
        return GameResult.from_counts(wins, bob_ok, params.trials)
    if backend != "statevector":
        raise ValueError(f"unknown backend {backend!r}")
    wins = 0
    bob_ok_count = 0
    for trial in range(params.trials):
        win, bob_ok = _statevector_round(params, strategy, leak, trial)
        wins += win
        bob_ok_count += bob_ok
    return GameResult.from_counts(wins, bob_ok_count, params.trials)


def _statevector_round(
    params: MoeParams, strategy: Strategy, leak: bool, trial: int
) -> tuple[int, int]:
    key = np.array([params.seed, trial], dtype=np.uint64)
    rng = np.random.Generator(np.random.Philox(key=key))
    a = sample_subspace(params.n, params.family, rng)
    t = _uniform_guess(rng, params.half)
    tp = _uniform_guess(rng, params.half)
    reg = prepare_coset_state(CosetDescriptor(a, t, tp), backend="statevector")
    channel = strategy.split(params.n, rng)
    reg = apply_adversary(reg, channel, rng)
    log = tuple(channel.log)
    bob_view = PartyView(reg, reg.qubits_of("bob"), log)
    t_b = strategy.bob(a, bob_view, rng)
    charlie_view = PartyView(reg, reg.qubits_of("charlie"), log)
    t_c = strategy.charlie(a, t_b if leak else None, charlie_view, rng)
    bob_ok = hamming(t_b, t) <= params.m
    win = bob_ok and hamming(t_c, tp) <= params.m_prime
    return int(win), int(bob_ok)
