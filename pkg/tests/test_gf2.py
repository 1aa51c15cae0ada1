import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cosetmoe.gf2 import (
    Gf2Matrix,
    Gf2Subspace,
    Gf2Vec,
    IndexSubset,
    complement,
    coset_rep,
    hamming,
    indicator,
    intersect,
    rref,
    sample_subset,
    sample_subspace,
    solve_coset_membership,
)


def span(n, *rows):
    return Gf2Subspace(n, [Gf2Vec(r) for r in rows])


def e(i, n):
    v = np.zeros(n, dtype=np.uint8)
    v[i] = 1
    return Gf2Vec(v)


# ---------------------------------------------------------------- rref


def test_rref_duplicate_rows():
    red, piv = rref(Gf2Matrix([[1, 1], [1, 1]]))
    assert red.rows[0].tolist() == [1, 1]
    assert piv == (0,)


def test_rref_identity():
    red, piv = rref(Gf2Matrix(np.eye(5, dtype=np.uint8)))
    assert np.array_equal(red.rows, np.eye(5, dtype=np.uint8))
    assert piv == tuple(range(5))


def test_rref_hand_example():
    red, piv = rref(Gf2Matrix([[0, 1, 1], [1, 1, 0]]))
    assert red.rows[:2].tolist() == [[1, 0, 1], [0, 1, 1]]
    assert piv == (0, 1)


def test_rref_preserves_span():
    rng = np.random.default_rng(7)
    for _ in range(20):
        m = Gf2Matrix(rng.integers(0, 2, size=(3, 6), dtype=np.uint8))
        a = Gf2Subspace(6, m)
        b = Gf2Subspace(6, a.basis)
        assert a == b
        for row in m.rows:
            assert a.contains(Gf2Vec(row))


# ---------------------------------------------------------- complement


def test_complement_register():
    a = span(6, e(0, 6).bits, e(1, 6).bits, e(2, 6).bits)
    assert complement(a) == span(6, e(3, 6).bits, e(4, 6).bits, e(5, 6).bits)


def test_complement_self_dual_diagonal():
    a = span(2, [1, 1])
    assert complement(a) == a


def test_complement_dims_and_orthogonality():
    rng = np.random.default_rng(11)
    for _ in range(20):
        a = sample_subspace(6, "all", rng)
        b = complement(a)
        assert b.dim == 6 - a.dim
        for u in a.vectors():
            for v in b.vectors():
                assert u.dot(v) == 0


def test_complement_involution():
    rng = np.random.default_rng(13)
    for n, family in [(4, "register"), (6, "all"), (8, "all")]:
        for _ in range(25):
            a = sample_subspace(n, family, rng)
            assert complement(complement(a)) == a
            assert a.dim + complement(a).dim == n


def test_register_sum_with_complement_is_full_space():
    rng = np.random.default_rng(17)
    for _ in range(10):
        a = sample_subspace(6, "register", rng)
        b = complement(a)
        joined = Gf2Subspace(6, list(a.vectors()) + list(b.vectors()))
        assert joined.dim == 6
    # the diagonal line is its own complement, so a + a⊥ can be a proper
    # subspace for non-register a — keep this as a regression case
    a = span(2, [1, 1])
    joined = Gf2Subspace(2, list(a.vectors()) + list(complement(a).vectors()))
    assert joined.dim == 1


# ------------------------------------------------------------ intersect


def test_intersect_idempotent():
    rng = np.random.default_rng(19)
    a = sample_subspace(6, "all", rng)
    assert intersect(a, a) == a


def test_intersect_register_example():
    a = span(4, e(0, 4).bits, e(1, 4).bits)
    b = span(4, e(1, 4).bits, e(2, 4).bits)
    assert intersect(a, b) == span(4, e(1, 4).bits)


def test_intersect_matches_enumeration():
    rng = np.random.default_rng(23)
    for _ in range(10):
        a = sample_subspace(8, "all", rng)
        b = sample_subspace(8, "all", rng)
        cap = intersect(a, b)
        members = {v.to_int() for v in a.vectors()} & {v.to_int() for v in b.vectors()}
        assert {v.to_int() for v in cap.vectors()} == members


def test_intersect_ambient_mismatch():
    rng = np.random.default_rng(29)
    with pytest.raises(ValueError):
        intersect(sample_subspace(4, "all", rng), sample_subspace(6, "all", rng))


# ------------------------------------------------------------ coset_rep


def test_coset_rep_register_convention():
    # a⊥ spanned by the 2nd and 4th canonical vectors => a is the register
    # subspace on coordinates {0, 2}; the label bits land at coordinates 1, 3.
    a = span(4, e(0, 4).bits, e(2, 4).bits)
    assert complement(a) == span(4, e(1, 4).bits, e(3, 4).bits)
    assert coset_rep(a, Gf2Vec([1, 0])) == e(1, 4)
    assert coset_rep(a, Gf2Vec([0, 1])) == e(3, 4)


def test_coset_rep_zero():
    rng = np.random.default_rng(31)
    a = sample_subspace(6, "all", rng)
    assert coset_rep(a, Gf2Vec.zeros(6 - a.dim)) == Gf2Vec.zeros(6)


def test_coset_rep_distinct_cosets():
    rng = np.random.default_rng(37)
    a = sample_subspace(6, "all", rng)
    reps = [coset_rep(a, Gf2Vec.from_int(t, 3)) for t in range(8)]
    for i in range(8):
        for j in range(i + 1, 8):
            assert not a.contains(reps[i] + reps[j])


def test_coset_rep_linear():
    rng = np.random.default_rng(41)
    for _ in range(100):
        n = int(rng.choice([4, 6, 8]))
        a = sample_subspace(n, "all", rng)
        k = n - a.dim
        t1 = Gf2Vec(rng.integers(0, 2, size=k, dtype=np.uint8))
        t2 = Gf2Vec(rng.integers(0, 2, size=k, dtype=np.uint8))
        assert coset_rep(a, t1 + t2) == coset_rep(a, t1) + coset_rep(a, t2)


def test_coset_rep_length_check():
    rng = np.random.default_rng(43)
    a = sample_subspace(4, "register", rng)
    with pytest.raises(ValueError):
        coset_rep(a, Gf2Vec([1, 0, 1]))


# ------------------------------------------------------ sample_subspace


def test_sample_subspace_all_n2_uniform():
    rng = np.random.default_rng(47)
    counts = {}
    for _ in range(3000):
        a = sample_subspace(2, "all", rng)
        counts[a] = counts.get(a, 0) + 1
    assert len(counts) == 3
    sigma = np.sqrt(3000 * (1 / 3) * (2 / 3))
    for c in counts.values():
        assert abs(c - 1000) <= 3 * sigma


def test_sample_subspace_register_support():
    rng = np.random.default_rng(53)
    seen = {sample_subspace(4, "register", rng) for _ in range(500)}
    assert len(seen) == 6
    for a in seen:
        assert a.is_register() and a.dim == 2


def test_sample_subspace_deterministic():
    a = sample_subspace(8, "all", np.random.default_rng(99))
    b = sample_subspace(8, "all", np.random.default_rng(99))
    assert a == b


def test_sample_subspace_odd_n():
    with pytest.raises(ValueError):
        sample_subspace(5, "register", np.random.default_rng(1))


# -------------------------------------------------------- indicator etc.


def test_indicator_examples():
    a = span(4, e(0, 4).bits, e(2, 4).bits)
    assert indicator(a) == Gf2Vec([1, 0, 1, 0])
    full = Gf2Subspace(3, [e(i, 3) for i in range(3)])
    assert indicator(full) == Gf2Vec([1, 1, 1])


def test_indicator_complement_partition():
    rng = np.random.default_rng(59)
    for _ in range(10):
        a = sample_subspace(6, "register", rng)
        total = indicator(a) + indicator(complement(a))
        assert total == Gf2Vec([1] * 6)


def test_indicator_rejects_non_register():
    with pytest.raises(ValueError):
        indicator(span(2, [1, 1]))


def test_hamming():
    assert hamming(Gf2Vec([1, 0, 1]), Gf2Vec([1, 0, 1])) == 0
    assert hamming(Gf2Vec([1, 0, 1]), Gf2Vec([1, 1, 1])) == 1
    rng = np.random.default_rng(61)
    for _ in range(50):
        x = rng.integers(0, 2, size=10, dtype=np.uint8)
        y = rng.integers(0, 2, size=10, dtype=np.uint8)
        assert hamming(Gf2Vec(x), Gf2Vec(y)) == int(bin(
            int("".join(map(str, x ^ y)), 2) if (x ^ y).any() else 0
        ).count("1"))


def test_sample_subset_full_and_uniform():
    rng = np.random.default_rng(67)
    assert sample_subset(4, 4, rng).indices == (0, 1, 2, 3)
    counts = {}
    for _ in range(10_000):
        s = sample_subset(5, 2, rng)
        counts[s.indices] = counts.get(s.indices, 0) + 1
    assert len(counts) == 10
    sigma = np.sqrt(10_000 * 0.1 * 0.9)
    for c in counts.values():
        assert abs(c - 1000) <= 3 * sigma
    s1 = sample_subset(9, 3, np.random.default_rng(5))
    s2 = sample_subset(9, 3, np.random.default_rng(5))
    assert s1 == s2
    with pytest.raises(ValueError):
        sample_subset(3, 4, rng)


# ---------------------------------------------- solve_coset_membership


def test_solve_trivial_and_roundtrip():
    rng = np.random.default_rng(71)
    a = sample_subspace(6, "all", rng)
    t, u = solve_coset_membership(a, Gf2Vec.zeros(6))
    assert t == Gf2Vec.zeros(3) and u == Gf2Vec.zeros(6)
    lbl = Gf2Vec([1, 0, 1])
    t, u = solve_coset_membership(a, coset_rep(a, lbl))
    assert t == lbl and u == Gf2Vec.zeros(6)


def test_solve_reconstruction():
    rng = np.random.default_rng(73)
    for _ in range(50):
        a = sample_subspace(8, "all", rng)
        v = Gf2Vec(rng.integers(0, 2, size=8, dtype=np.uint8))
        t, u = solve_coset_membership(a, v)
        assert a.contains(u)
        assert coset_rep(a, t) + u == v


@pytest.mark.parametrize("n", [2, 4, 6, 8])
def test_solve_inverts_coset_rep_exhaustively(n):
    rng = np.random.default_rng(79 + n)
    for family in ("register", "all"):
        a = sample_subspace(n, family, rng)
        k = n - a.dim
        for val in range(1 << k):
            lbl = Gf2Vec.from_int(val, k)
            for u in a.vectors():
                t, res = solve_coset_membership(a, coset_rep(a, lbl) + u)
                assert t == lbl
                assert res == u


# ------------------------------------------------------- canonical form


def test_canonicalization_of_generating_sets():
    rng = np.random.default_rng(83)
    a = sample_subspace(8, "all", rng)
    vecs = list(a.vectors())
    reference = None
    for _ in range(100):
        # random generating set: random vectors from a until they span it
        gens = []
        while Gf2Subspace(8, gens or None).dim < a.dim:
            gens.append(vecs[rng.integers(0, len(vecs))])
        b = Gf2Subspace(8, gens)
        if reference is None:
            reference = b
        assert b == a
        assert b.basis.rows.tobytes() == reference.basis.rows.tobytes()


# -------------------------------------------------------- serialization


def test_subspace_json_roundtrip():
    rng = np.random.default_rng(89)
    for _ in range(10):
        a = sample_subspace(8, "all", rng)
        payload = a.to_json()
        assert payload["n"] == 8
        assert Gf2Subspace.from_json(payload) == a


def test_hex_is_msb_first():
    v = Gf2Vec([1, 0, 0, 0, 0, 0, 0, 1])
    assert v.to_hex() == "81"
    assert Gf2Vec.from_hex("81", 8) == v
    # width pads to ceil(n/4) nibbles
    assert Gf2Vec([0, 0, 0, 1, 1]).to_hex() == "03"
    assert Gf2Vec.from_hex("03", 5) == Gf2Vec([0, 0, 0, 1, 1])


# ------------------------------------------------------------ misc bits


def test_index_subset_basics():
    s = IndexSubset(6, (4, 1, 1))
    assert s.indices == (1, 4)
    assert s.complement_indices() == (0, 2, 3, 5)
    v = Gf2Vec([1, 0, 1, 1, 0, 1])
    assert v.restrict(s) == Gf2Vec([0, 0])
    with pytest.raises(ValueError):
        IndexSubset(3, (5,))


@given(st.integers(0, 255), st.integers(0, 255))
@settings(max_examples=50, deadline=None)
def test_vec_xor_group_laws(x, y):
    vx, vy = Gf2Vec.from_int(x, 8), Gf2Vec.from_int(y, 8)
    assert vx + vx == Gf2Vec.zeros(8)
    assert vx + vy == vy + vx
    assert (vx + vy).to_int() == x ^ y


@given(st.integers(0, 2**12 - 1))
@settings(max_examples=50, deadline=None)
def test_vec_int_roundtrip(x):
    assert Gf2Vec.from_int(x, 12).to_int() == x
    assert Gf2Vec.from_hex(Gf2Vec.from_int(x, 12).to_hex(), 12).to_int() == x


def test_matrix_inverse():
    rng = np.random.default_rng(97)
    found = 0
    while found < 10:
        m = Gf2Matrix(rng.integers(0, 2, size=(5, 5), dtype=np.uint8))
        if m.rank() < 5:
            continue
        found += 1
        inv = m.inverse()
        assert np.array_equal(
            m.mulmat(inv).rows, np.eye(5, dtype=np.uint8)
        )
    with pytest.raises(ValueError):
        Gf2Matrix([[1, 1], [1, 1]]).inverse()
