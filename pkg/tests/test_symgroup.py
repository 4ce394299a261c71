import itertools
from math import comb, factorial

import pytest

from kimura import config
from kimura.errors import CapExceeded, RangeError, SizeMismatch
from kimura.symgroup import (
    Partition,
    Permutation,
    Subset,
    character,
    enumerate_group,
    hook_dimension,
    partitions_of,
    shuffles,
    sign,
    young_subgroup,
)

P = Partition.of


def count_standard_tableaux(lam):
    """Brute force: remove a corner box in every possible way."""
    parts = list(lam.parts)
    if sum(parts) == 0:
        return 1
    total = 0
    for r in range(len(parts)):
        if parts[r] > (parts[r + 1] if r + 1 < len(parts) else 0):
            smaller = parts.copy()
            smaller[r] -= 1
            total += count_standard_tableaux(Partition(tuple(p for p in smaller if p)))
    return total


def brute_sign(images):
    return (-1) ** sum(1 for a, b in itertools.combinations(range(len(images)), 2) if images[a] > images[b])


def test_group_sizes():
    assert len(enumerate_group(3)) == 6
    assert len(enumerate_group(0)) == 1
    assert len(enumerate_group(5)) == 120
    G = enumerate_group(4)
    assert G[0].is_identity() and len(set(G)) == 24


def test_group_cap():
    with pytest.raises(CapExceeded):
        enumerate_group(9)
    with config.override(group_n=3), pytest.raises(CapExceeded):
        enumerate_group(4)


def test_sign_examples():
    assert sign(Permutation.identity(4)) == 1
    assert sign(Permutation.transposition(4, 1, 3)) == -1
    assert sign(Permutation.from_cycles(3, [[0, 1, 2]])) == 1


def test_sign_matches_inversion_count_and_is_multiplicative():
    G = enumerate_group(4)
    for s in G:
        assert s.sign() == brute_sign(s.images)
    for s, t in itertools.product(G, repeat=2):
        assert (s * t).sign() == s.sign() * t.sign()


def test_composition_convention():
    s = Permutation.from_cycles(3, [[0, 1]])
    t = Permutation.from_cycles(3, [[1, 2]])
    for j in range(3):
        assert (s * t)(j) == s(t(j))
    assert s * s.inverse() == Permutation.identity(3)


def test_permutation_validation():
    with pytest.raises(ValueError):
        Permutation((0, 0, 1))


def test_partitions():
    assert partitions_of(3) == [P(3), P(2, 1), P(1, 1, 1)]
    assert len(partitions_of(5)) == 7
    assert partitions_of(0) == [Partition(())]
    assert [len(partitions_of(n)) for n in range(1, 9)] == [1, 2, 3, 5, 7, 11, 15, 22]


def test_partition_validation():
    with pytest.raises(ValueError):
        Partition((1, 2))
    with pytest.raises(ValueError):
        Partition((2, 0))


def test_conjugate_and_class_size():
    assert P(3, 1).conjugate() == P(2, 1, 1)
    for n in range(1, 7):
        assert sum(l.class_size() for l in partitions_of(n)) == factorial(n)
        for lam in partitions_of(n):
            assert lam.conjugate().conjugate() == lam


def test_cycle_types_match_class_sizes():
    counts = {}
    for s in enumerate_group(5):
        counts[s.cycle_type()] = counts.get(s.cycle_type(), 0) + 1
    assert counts == {lam: lam.class_size() for lam in partitions_of(5)}


def test_hook_dimension_examples():
    assert hook_dimension(P(5)) == 1
    assert hook_dimension(P(1, 1, 1, 1)) == 1
    assert hook_dimension(P(2, 1)) == 2


def test_hook_dimension_counts_tableaux():
    for n in range(1, 8):
        for lam in partitions_of(n):
            assert hook_dimension(lam) == count_standard_tableaux(lam)


def test_sum_of_squares():
    for n in range(0, 9):
        assert sum(hook_dimension(l) ** 2 for l in partitions_of(n)) == factorial(n)


def test_character_examples():
    for mu in partitions_of(4):
        assert character(P(4), mu) == 1
        rep = next(s for s in enumerate_group(4) if s.cycle_type() == mu)
        assert character(P(1, 1, 1, 1), mu) == rep.sign()
    assert character(P(2, 1), P(1, 1, 1)) == 2
    with pytest.raises(SizeMismatch):
        character(P(2, 1), P(2))


def test_standard_character_is_fixed_points_minus_one():
    for n in range(2, 7):
        lam = Partition((n - 1, 1))
        for s in enumerate_group(n):
            fixed = sum(1 for j in range(n) if s(j) == j)
            assert character(lam, s.cycle_type()) == fixed - 1


def test_character_of_conjugate_twists_by_sign():
    for n in range(1, 7):
        for lam in partitions_of(n):
            for mu in partitions_of(n):
                sgn = (-1) ** (n - len(mu))
                assert character(lam.conjugate(), mu) == sgn * character(lam, mu)


def test_character_orthogonality():
    for n in range(1, 7):
        parts = partitions_of(n)
        for a in parts:
            for b in parts:
                s = sum(mu.class_size() * character(a, mu) * character(b, mu) for mu in parts)
                assert s == (factorial(n) if a == b else 0)


def test_shuffle_examples():
    (S, s), = shuffles(3, 0)
    assert S.members == () and s.is_identity()
    assert len(shuffles(3, 1)) == 3
    with pytest.raises(RangeError):
        shuffles(3, 4)


def test_shuffle_images():
    for S, s in shuffles(4, 2):
        # last i positions go to S, the first m-i to the complement, in order
        assert tuple(s(j) for j in range(2, 4)) == S.members
        assert tuple(s(j) for j in range(2)) == S.complement()


def test_shuffles_are_distinct_coset_representatives():
    for m in range(0, 6):
        for i in range(m + 1):
            reps = shuffles(m, i)
            H = set(young_subgroup(m, i))
            assert len(reps) == comb(m, i)
            assert len(H) == factorial(m - i) * factorial(i)
            for (_, a), (_, b) in itertools.combinations(reps, 2):
                assert b.inverse() * a not in H
            cosets = {frozenset(r * h for h in H) for _, r in reps}
            assert sum(len(c) for c in cosets) == factorial(m)


def test_subset():
    S = Subset((0, 2), 4)
    assert S.complement() == (1, 3)
    assert S.image(Permutation.from_cycles(4, [[0, 1]])).members == (1, 2)
    with pytest.raises(ValueError):
        Subset((2, 1), 4)
