from math import comb

import pytest

from generators import random_chain_map, random_complex
from kimura import config
from kimura.complexes import Complex, direct_sum, graded, homology, identity, image_subcomplex, shift
from kimura.errors import CapExceeded, DegreeMismatch, MixedParity
from kimura.group_algebra import (
    GroupAlgebraElement,
    antisymmetrizer,
    central_idempotent,
    multiply,
    symmetrizer,
)
from kimura.linalg import Matrix
from kimura.powers import (
    PowerContext,
    algebra_action,
    gamma_action,
    graded_power_dims,
    kimura_profile,
    parity_flip_check,
    schur_completeness,
    schur_power,
    sym_power,
    tensor_parity_check,
    wedge_power,
)
from kimura.symgroup import Partition, Permutation, enumerate_group

P = Partition.of


def cone_identity():
    return Complex({0: 1, 1: 1}, {1: Matrix.from_rows([[1]])})


# -- Γ


def test_gamma_identity():
    ctx = PowerContext(graded({0: 1, 1: 1}), 3)
    assert gamma_action(Permutation.identity(3), ctx) == identity(ctx.complex)


def test_gamma_on_even_space_is_a_permutation_matrix():
    ctx = PowerContext(graded({0: 2}), 3)
    for s in enumerate_group(3):
        G = gamma_action(s, ctx).block(0)
        rows = G.tolist()
        assert all(sorted(r) == [0] * 7 + [1] for r in rows)
        assert all(sorted(c) == [0] * 7 + [1] for c in G.T.tolist())


def test_gamma_on_odd_line_is_the_sign():
    ctx = PowerContext(graded({1: 1}), 4)
    for s in enumerate_group(4):
        assert gamma_action(s, ctx).block(4) == Matrix.from_rows([[s.sign()]])


def test_gamma_moves_factor_j_to_position_sigma_j():
    ctx = PowerContext(graded({0: 3}), 3)
    s = Permutation((1, 2, 0))
    basis = ctx.product.basis[0]
    G = gamma_action(s, ctx).block(0)
    for col, t in enumerate(basis):
        w = [None] * 3
        for j in range(3):
            w[s(j)] = t[j]
        assert G[ctx.product.index[tuple(w)], col] == 1


def test_gamma_is_a_chain_map():
    C = cone_identity()
    ctx = PowerContext(C, 3)
    for s in enumerate_group(3):
        gamma_action(s, ctx).verify()


def test_gamma_degree_mismatch():
    with pytest.raises(DegreeMismatch):
        gamma_action(Permutation.identity(2), PowerContext(graded({0: 1}), 3))


def test_algebra_action_examples():
    ctx = PowerContext(graded({0: 2}), 2)
    assert algebra_action(GroupAlgebraElement.one(2), ctx) == identity(ctx.complex)
    A = algebra_action(antisymmetrizer(2), ctx)
    assert A.block(0).rank() == 1 and A.is_idempotent()


def test_algebra_action_is_a_homomorphism(rng):
    for _ in range(8):
        C = random_complex(rng, 2, degrees=(0, 1))
        m = rng.randint(2, 3)
        G = enumerate_group(m)
        a = GroupAlgebraElement(m, {rng.choice(G): rng.randint(-3, 3) for _ in range(3)})
        b = GroupAlgebraElement(m, {rng.choice(G): rng.randint(-3, 3) for _ in range(3)})
        ctx = PowerContext(C, m)
        assert algebra_action(multiply(a, b), ctx) == algebra_action(a, ctx) @ algebra_action(b, ctx)


# -- powers


def test_wedge_examples():
    assert wedge_power(graded({0: 2}), 0) == graded({0: 1})
    assert wedge_power(graded({0: 2}), 3).is_zero()
    for n in range(1, 5):
        assert wedge_power(graded({1: 1}), n).dims == {n: 1}


def test_sym_examples():
    C = Complex({0: 1, 1: 1}, {1: Matrix.from_rows([[2]])})
    assert sym_power(C, 1).dims == C.dims
    assert sym_power(graded({1: 1}), 2).is_zero()
    assert sym_power(graded({0: 2}), 2).dims == {0: 3}


def test_schur_examples():
    C = graded({0: 2})
    assert schur_power(C, P(2, 1)).total_dim() == 4
    assert schur_power(C, P(3)).dims == sym_power(C, 3).dims
    assert schur_power(C, P(1, 1, 1)).dims == wedge_power(C, 3).dims


def test_schur_completeness(rng):
    for n in range(1, 5):
        C = random_complex(rng, 2 if n == 4 else 3, degrees=(0, 1))
        assert schur_completeness(C, n)


def test_power_caps():
    with pytest.raises(CapExceeded):
        wedge_power(graded({0: 2}), 6)
    with pytest.raises(CapExceeded):
        wedge_power(graded({0: 7}), 2)
    with config.override(power_m=2), pytest.raises(CapExceeded):
        sym_power(graded({0: 1}), 3)


def test_memory_guard():
    with config.override(max_bytes=1000), pytest.raises(CapExceeded):
        sym_power(graded({0: 3}), 3)


# -- dimension counts


@pytest.mark.parametrize("sign", ["+", "-"])
def test_orbit_count_matches_matrix_route(rng, sign):
    for _ in range(12):
        dims = random_complex(rng, 4, degrees=(0, 1, 2), exact_bias=0).dims
        n = rng.randint(0, 3)
        power = (wedge_power if sign == "+" else sym_power)(graded(dims), n)
        assert graded_power_dims(dims, n, sign) == power.dims


def test_orbit_count_binomials():
    assert graded_power_dims({0: 5}, 2, "+") == {0: comb(5, 2)}
    assert graded_power_dims({0: 5}, 2, "-") == {0: comb(6, 2)}
    assert graded_power_dims({1: 2}, 3, "+") == {3: comb(4, 3)}
    assert graded_power_dims({1: 2}, 3, "-") == {}


def test_power_homology_is_power_of_homology(rng):
    # over a field a complex is homotopy equivalent to its homology
    for _ in range(8):
        C = random_complex(rng, 4, degrees=(0, 1, 2))
        n = rng.randint(1, 3)
        for sign, fn in (("+", wedge_power), ("-", sym_power)):
            assert homology(fn(C, n)) == graded_power_dims(homology(C), n, sign)


# -- Kimura profile


def test_profile_examples():
    p = kimura_profile(graded({0: 2}))
    assert (p.even_dimension, p.odd_dimension, p.even_witness) == (2, 0, 3)
    p = kimura_profile(graded({1: 1}))
    assert (p.even_dimension, p.odd_dimension, p.odd_witness) == (0, 1, 2)
    p = kimura_profile(cone_identity())
    assert p.is_zero and p.verified
    p = kimura_profile(graded({0: 2, 1: 1}))
    assert (p.even_dimension, p.odd_dimension, p.verified) == (2, 1, True)


def test_profile_falls_back_to_orbit_count_beyond_caps():
    p = kimura_profile(graded({0: 7}))
    assert p.even_dimension == 7 and p.witness_method == "orbit-count" and p.verified


def test_dimension_is_additive(rng):
    for _ in range(10):
        C, D = random_complex(rng, 3), random_complex(rng, 3)
        a, b, s = kimura_profile(C), kimura_profile(D), kimura_profile(direct_sum(C, D))
        assert s.even_dimension == a.even_dimension + b.even_dimension
        assert s.odd_dimension == a.odd_dimension + b.odd_dimension


def test_even_odd_parts_do_not_depend_on_the_decomposition(rng):
    for _ in range(8):
        E = random_complex(rng, 2, degrees=(0, 2))
        O = random_complex(rng, 2, degrees=(1, 3))
        C = direct_sum(E, O)
        e = {k: Matrix.identity(C.dim(k)) if k % 2 == 0 else Matrix.zeros(C.dim(k), C.dim(k)) for k in C.degrees}
        from kimura.complexes import ChainMap

        P0 = ChainMap(C, C, e)
        g = random_chain_map(rng, C, C)
        while not g.is_isomorphism():
            g = random_chain_map(rng, C, C)
        P1 = g @ P0 @ g.inverse()
        Q1 = identity(C) - P1
        even1, odd1 = image_subcomplex(P1).complex, image_subcomplex(Q1).complex
        assert homology(even1) == homology(E) and homology(odd1) == homology(O)
        assert kimura_profile(even1).odd_dimension == 0
        assert kimura_profile(odd1).even_dimension == 0


# -- parity


def test_parity_flip_examples():
    v = parity_flip_check(graded({0: 2}), 2)
    assert v and v.details["wedge_of_shift_total"] == v.details["sym_total"] == 3
    v = parity_flip_check(graded({1: 1}), 2)
    assert v
    assert sym_power(shift(graded({1: 1})), 2).total_dim() == 1
    assert parity_flip_check(graded({0: 1, 1: 1}), 1)


def test_parity_flip_random(rng):
    for _ in range(6):
        assert parity_flip_check(random_complex(rng, 3), rng.randint(1, 3))


def test_tensor_parity():
    v = tensor_parity_check(graded({0: 2}), graded({0: 3}))
    assert v and v.details["got"] == "even" and v.details["dimension"] == 6
    v = tensor_parity_check(graded({1: 1}), graded({1: 1}))
    assert v and v.details["got"] == "even"
    assert tensor_parity_check(graded({0: 1}), graded({1: 2})).details["got"] == "odd"
    with pytest.raises(MixedParity):
        tensor_parity_check(graded({0: 1, 1: 1}), graded({0: 1}))


def test_central_idempotents_act_as_orthogonal_projectors():
    C = graded({0: 1, 1: 1})
    ctx = PowerContext(C, 3)
    acts = [algebra_action(central_idempotent(l), ctx) for l in (P(3), P(2, 1), P(1, 1, 1))]
    for a in acts:
        assert a.is_idempotent()
    total = acts[0] + acts[1] + acts[2]
    assert total == identity(ctx.complex)
    assert algebra_action(symmetrizer(3), ctx) == acts[0]
