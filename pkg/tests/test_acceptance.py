"""Acceptance gate: one test per stated criterion, at the stated sizes.

Each test computes its measurement, prints a single ``criterion NN: PASS/FAIL``
line with the observed value, and then asserts.  Run with ``-v`` to get the
per-criterion verdicts from the test names as well.
"""

import itertools
import math
import subprocess
import sys

import numpy as np
import pytest

from cosetmoe.ecc import make_code
from cosetmoe.ext import ToeplitzExtractor, lhl_epsilon
from cosetmoe.gf2 import Gf2Subspace, Gf2Vec, intersect, sample_subspace
from cosetmoe.info import (
    DensityOp,
    gamma_star,
    moe_bound,
    sequential_min_entropy_fixed,
    verify_combinatorial_bound,
)
from cosetmoe.moe import MoeParams, all_builtin_strategies, play_leaky
from cosetmoe.proto import (
    PauliNoise,
    QecmParams,
    QkdParams,
    TfkwParams,
    UrbcParams,
    qecm_experiment,
    riqkd_experiment,
    run_qecm_id,
    run_riqkd,
    tfkw_experiment,
    trial_rng,
    urbc_experiment,
    urbc_hiding_exact,
)
from cosetmoe.qsim import CosetDescriptor, coset_overlap, prepare_coset_state

SEED = 20260817


def _verdict(num: int, ok: bool, detail: str) -> None:
    print(f"criterion {num:02d}: {'PASS' if ok else 'FAIL'} — {detail}")
    assert ok, f"criterion {num:02d}: {detail}"


def _all_subspaces(n: int, k: int):
    """Every k-dimensional subspace of Z_2^n, canonicalized by its vector set."""
    seen = {}
    nonzero = range(1, 1 << n)
    for combo in itertools.combinations(nonzero, k):
        gens = [Gf2Vec.from_int(v, n) for v in combo]
        a = Gf2Subspace(n, gens)
        if a.dim != k:
            continue
        key = frozenset(v.to_int() for v in a.vectors())
        seen.setdefault(key, a)
    return list(seen.values())


def test_criterion_01_coset_basis_orthonormality():
    worst = 0.0
    n_checked = 0
    for n in (2, 4):
        half = n // 2
        subspaces = _all_subspaces(n, half)
        expected = {2: 3, 4: 35}[n]
        assert len(subspaces) == expected
        for a in subspaces:
            states = []
            for t_int in range(1 << half):
                for tp_int in range(1 << half):
                    d = CosetDescriptor(
                        a, Gf2Vec.from_int(t_int, half), Gf2Vec.from_int(tp_int, half)
                    )
                    states.append(prepare_coset_state(d).payload.amps)
            gram = np.array([[np.vdot(u, v) for v in states] for u in states])
            worst = max(worst, float(np.abs(gram - np.eye(1 << n)).max()))
            n_checked += 1
    _verdict(1, worst <= 1e-10,
             f"max Gram deviation {worst:.2e} over {n_checked} subspaces (n in {{2,4}})")


def _wiesner_product(x, theta):
    acc = np.array([1.0 + 0j])
    for xi, ti in zip(x, theta):
        if ti == 0:
            q = np.array([1.0, 0.0]) if xi == 0 else np.array([0.0, 1.0])
        else:
            q = np.array([1.0, 1.0 - 2.0 * xi]) / math.sqrt(2)
        acc = np.kron(acc, q.astype(np.complex128))
    return acc


def test_criterion_02_wiesner_equivalence():
    rng = np.random.default_rng(SEED)
    worst = 1.0
    for _ in range(50):
        a = sample_subspace(6, "register", rng)
        for t_int in range(8):
            for tp_int in range(8):
                d = CosetDescriptor(a, Gf2Vec.from_int(t_int, 3), Gf2Vec.from_int(tp_int, 3))
                sv = prepare_coset_state(d, "statevector").payload.amps
                rec = prepare_coset_state(d, "wiesner").payload
                overlap = abs(np.vdot(_wiesner_product(rec.x.bits, rec.theta.bits), sv))
                worst = min(worst, overlap)
    _verdict(2, abs(worst - 1.0) <= 1e-10,
             f"min |overlap| {worst:.12f} over 50 subspaces x 64 labels at n=6")


def test_criterion_03_combinatorial_bound_exact():
    ok = all(verify_combinatorial_bound(n) for n in range(2, 62, 2))
    _verdict(3, ok, "exact sum <= sqrt(e) cos(pi/8)^n for all even n <= 60")


def test_criterion_04_overlap_lemma():
    rng = np.random.default_rng(SEED + 1)
    worst_slack = -1.0
    for n in (4, 6):
        half = n // 2
        for _ in range(100):
            a = sample_subspace(n, "all", rng)
            b = sample_subspace(n, "all", rng)
            d = CosetDescriptor(
                a,
                Gf2Vec(rng.integers(0, 2, half, dtype=np.uint8)),
                Gf2Vec(rng.integers(0, 2, half, dtype=np.uint8)),
            )
            u = Gf2Vec(rng.integers(0, 2, half, dtype=np.uint8))
            value = coset_overlap(d, b, u, cross_check=(n == 4))
            cap = float(1 << intersect(a, b).dim) / float(1 << half)
            assert value <= cap + 1e-12
            worst_slack = max(worst_slack, value - cap)
    _verdict(4, worst_slack <= 1e-12,
             f"max (overlap - |a^b|/2^(n/2)) = {worst_slack:.2e} over 200 draws")


def test_criterion_05_moe_harness():
    # single-party strategies at n=4 sit exactly on 1/4
    details = []
    ok = True
    trials = 100_000
    sigma = math.sqrt(0.25 * 0.75 / trials)
    strategies = {s.kind: s for s in all_builtin_strategies(4)}
    for kind in ("bob_all", "charlie_all"):
        params = MoeParams(n=4, trials=trials, seed=SEED + 2)
        est = play_leaky(params, strategies[kind], threads=2).estimate
        ok &= abs(est - 0.25) <= 3 * sigma
        details.append(f"{kind}={est:.4f}")
    # no built-in beats the game bound at n in {4, 8, 12}
    for n in (4, 8, 12):
        bound = moe_bound(n)
        params = MoeParams(n=n, trials=20_000, seed=SEED + 3)
        bsig = math.sqrt(max(bound * (1 - min(bound, 1.0)), 1e-12) / params.trials)
        for strategy in all_builtin_strategies(n):
            est = play_leaky(params, strategy, threads=2).estimate
            ok &= est <= bound + 3 * bsig
    _verdict(5, ok, ", ".join(details) + " (+-3 sigma); all built-ins under the bound")


def test_criterion_06_qecm_honest_correctness():
    params = QecmParams(8, 2)
    bad = 0
    for i in range(10_000):
        out = run_qecm_id(params, trial_rng(SEED + 4, i))
        bad += int(not (out.f == 1 and out.m_hat == out.m))
    _verdict(6, bad == 0, f"{bad} disagreements in 10^4 honest runs at n=8")


def test_criterion_07_qecm_perfect_indistinguishability():
    rep = qecm_experiment("indistinguishable", QecmParams(4, 2))
    dist = rep["max_trace_distance"]
    _verdict(7, dist <= 1e-9,
             f"max trace distance {dist:.2e} over message pairs (n=4, ell=2)")


def test_criterion_08_eve_keeps_all_accept_rate():
    rep = qecm_experiment(
        "uncloneable", QecmParams(8, 2), adversary="keep_all",
        trials=100_000, seed=SEED + 5,
    )
    rate = rep["accept_rate"]
    sigma = math.sqrt(0.0625 * (1 - 0.0625) / 100_000)
    _verdict(8, abs(rate - 0.0625) <= 3 * sigma,
             f"Pr[F=1] = {rate:.5f} vs 0.0625 +- {3 * sigma:.5f}")


def test_criterion_09_urbc_binding_attack():
    params = UrbcParams(14, 2, 2.0 / 7.0, make_code("hamming74"))
    rep = urbc_experiment("binding", params, trials=100_000, seed=SEED + 6)
    rate = rep["estimate"]
    sigma = math.sqrt((6 / 21) * (1 - 6 / 21) / 100_000)
    ok = abs(rate - 6 / 21) <= 3 * sigma and rate <= 16 / 49
    _verdict(9, ok, f"acceptance {rate:.5f} vs 6/21 +- {3 * sigma:.5f}, <= 16/49")


def test_criterion_10_urbc_hiding_exact():
    dist = urbc_hiding_exact(UrbcParams(4, 2, 0.5, make_code("repetition", 2)))
    _verdict(10, dist <= 1e-9, f"trace distance {dist:.2e} (n=4, ell=2, ideal)")


def test_criterion_11_riqkd_honest():
    params = QkdParams(16, 2, 0.0, 0.25, make_code("repetition", 8))
    bad = 0
    for i in range(1000):
        out = run_riqkd(params, trial_rng(SEED + 7, i))
        bad += int(not (out.f == 1 and out.k == out.k_hat))
    _verdict(11, bad == 0, f"{bad} failures in 10^3 noiseless runs at n=16")


def test_criterion_12_riqkd_completeness():
    params = QkdParams(3780, 2, 0.03, 0.1, make_code("block_repeat", 63, 30))
    rep = riqkd_experiment(
        "completeness", params, trials=1000, seed=SEED + 8,
        noise=PauliNoise(dx=0.005, dz=0.005),
    )
    bound = rep["completeness_bound"]
    ok = rep["abort_estimate"] <= bound and abs(bound - 0.1422) < 2e-3
    _verdict(12, ok,
             f"abort rate {rep['abort_estimate']:.4f} <= bound {bound:.4f} (n=3780)")


def test_criterion_13_riqkd_device_fault_bound():
    params = QkdParams(14, 2, 0.0, 2.0 / 7.0, make_code("hamming74"))
    rep = riqkd_experiment("device_fault", params, trials=100_000, seed=SEED + 9)
    bound = rep["correctness_bound"]
    sigma = math.sqrt(bound * (1 - bound) / 100_000)
    ok = rep["estimate"] <= bound + 3 * sigma
    _verdict(13, ok,
             f"Pr[K!=K_hat and F=1] = {rep['estimate']:.5f} <= {bound:.5f} + 3 sigma")


def test_criterion_14_gamma_star_window():
    g = gamma_star()
    _verdict(14, 0.0150 <= g <= 0.0156, f"gamma* = {g:.6f}")


def test_criterion_15_tfkw_substitution_attack():
    params = TfkwParams(16, 0.0, make_code("repetition", 8))
    rep = tfkw_experiment(params, eve="substitute_zero", trials=100, seed=SEED + 10)
    ok = rep["aborts"] == 0 and rep["eve_matches_device"] == 100
    _verdict(15, ok,
             f"{rep['eve_matches_device']}/100 Eve-device key matches, "
             f"{rep['aborts']} aborts")


def test_criterion_16_extractor_guarantees():
    # exhaustive two-universality: collision probability of any distinct pair
    # equals Pr[T(s) c = 0] for c = x + y != 0
    worst = 0.0
    for n_in in range(2, 7):
        for ell in (1, 2):
            if ell > n_in:
                continue
            ext = ToeplitzExtractor(n_in, ell)
            n_seeds = 1 << ext.seed_len
            for c_int in range(1, 1 << n_in):
                c = Gf2Vec.from_int(c_int, n_in)
                hits = sum(
                    ext.extract(c, Gf2Vec.from_int(s, ext.seed_len)).to_int() == 0
                    for s in range(n_seeds)
                )
                worst = max(worst, hits / n_seeds - 2.0 ** -ell)
    two_universal_ok = worst <= 1e-12
    # flat five-bit source on eight bits, two extracted bits, full enumeration
    ext = ToeplitzExtractor(8, 2)
    support = np.array(
        [[int(b) for b in format(v, "08b")] for v in range(32)], dtype=np.uint8
    )
    n_seeds = 1 << ext.seed_len
    seeds = np.array(
        [[int(b) for b in format(s, f"0{ext.seed_len}b")] for s in range(n_seeds)],
        dtype=np.uint8,
    )
    xs = np.repeat(support, n_seeds, axis=0)
    ss = np.tile(seeds, (32, 1))
    outs = ext.extract_batch(xs, ss).reshape(32, n_seeds, 2)
    keys = outs[..., 0] * 2 + outs[..., 1]
    distance = 0.0
    for s in range(n_seeds):
        counts = np.bincount(keys[:, s], minlength=4) / 32.0
        distance += 0.5 * float(np.abs(counts - 0.25).sum()) / n_seeds
    eps = lhl_epsilon(5, 2)
    ok = two_universal_ok and distance <= eps
    _verdict(16, ok,
             f"collision slack {worst:.2e}; flat-source distance {distance:.5f} "
             f"<= {eps:.5f}")


def _random_onb_projectors(dim, rng):
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, _ = np.linalg.qr(z)
    return [np.outer(q[:, i], q[:, i].conj()) for i in range(dim)]


def _random_ccqq_state(rng):
    weights = rng.dirichlet(np.ones(4))
    mat = np.zeros((16, 16), dtype=np.complex128)
    tensor = mat.reshape(2, 2, 2, 2, 2, 2, 2, 2)
    for idx, (x, y) in enumerate(itertools.product(range(2), range(2))):
        z = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        block = z @ z.conj().T
        block *= weights[idx] / block.trace().real
        tensor[x, y, :, :, x, y, :, :] = block.reshape(2, 2, 2, 2)
    return DensityOp(mat)


def test_criterion_17_entropy_identities():
    rng = np.random.default_rng(SEED + 11)
    # (a) two-stage decomposition of the sequential guessing exponent
    worst_decomp = 0.0
    for _ in range(50):
        rho = _random_ccqq_state(rng)
        out = sequential_min_entropy_fixed(
            rho, (2, 2, 2, 2),
            _random_onb_projectors(2, rng), _random_onb_projectors(2, rng),
        )
        worst_decomp = max(
            worst_decomp, abs(out.value - (out.first_term + out.second_term))
        )
    # (b) shifted-ball averaging identity for measurement branches
    worst_swap = 0.0
    masks = [0, 1, 2]  # XOR masks of weight <= 1 on two bits
    for _ in range(5):
        blocks = []
        for _ in range(4):
            z = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
            b = z @ z.conj().T
            blocks.append(b / (4.0 * b.trace().real))
        povm = _random_onb_projectors(4, rng)
        roots = povm  # rank-one projectors are their own PSD square roots
        for y in range(4):
            lhs = np.zeros((4, 4), dtype=np.complex128)
            for x in range(4):
                if bin(x ^ y).count("1") <= 1:
                    lhs += roots[y] @ blocks[x] @ roots[y]
            avg = sum(blocks[y ^ u] for u in masks) / len(masks)
            rhs = len(masks) * (roots[y] @ avg @ roots[y])
            worst_swap = max(worst_swap, float(np.abs(lhs - rhs).max()))
    # (c) conditioning can only lower the guessing exponent
    worst_gap = 0.0
    for _ in range(100):
        probs = rng.random((3, 3, 3))
        probs /= probs.sum()
        y0 = int(rng.integers(0, 3))
        partial = sum(probs[:, y0, a].max() for a in range(3))
        full = sum(probs[:, y, a].max() for y in range(3) for a in range(3))
        worst_gap = max(worst_gap, (-math.log2(full)) - (-math.log2(partial)))
    ok = worst_decomp <= 1e-10 and worst_swap <= 1e-10 and worst_gap <= 1e-12
    _verdict(17, ok,
             f"decomposition gap {worst_decomp:.2e}, branch identity "
             f"{worst_swap:.2e}, conditioning slack {worst_gap:.2e}")


def test_criterion_18_selftest_determinism():
    outputs = []
    for threads in (1, 8):
        proc = subprocess.run(
            [sys.executable, "-m", "cosetmoe.cli", "selftest",
             "--seed", "202608", "--threads", str(threads)],
            capture_output=True, timeout=600,
        )
        assert proc.returncode == 0, proc.stderr.decode()
        outputs.append(proc.stdout)
    ok = outputs[0] == outputs[1] and len(outputs[0]) > 0
    _verdict(18, ok,
             f"selftest bytes identical across thread counts "
             f"({len(outputs[0])} bytes)")
