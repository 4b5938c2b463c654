from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from oadiff import csp, reduction
from oadiff.arpa import NotAnArpa, make_pair, t_number
from oadiff.csp import all_equal, brute_force, evaluate, make_instance
from oadiff.designs import make_array, zerosum_oa
from oadiff.reduction import (average_certificate, enlarge_alphabet, map_back, pull_back,
                              reduce_and_solve, subinstance, y_partition)
from reference_arrays import ARPA_432, RELAXED_432


# ---------------------------------------------------------------- y(V, x, u)

def test_y_partition_examples():
    assert y_partition([[1], [2]], (0, 1), (1, 2), 3) == (1, 0)
    assert y_partition([[1, 3], [2]], (2, 0, 1), (0, 0), 3) == (2, 0, 1)
    assert y_partition([[1, 2, 3]], (2, 0, 1), (2,), 3) == (1, 2, 0)
    with pytest.raises(reduction.ShapeMismatch):
        y_partition([[1], [2]], (0, 1), (1,), 3)


# ---------------------------------------------------------------- certificates

def three_coloured_instance(seed, n=6, m=8):
    I = csp.gen_random(3, 2, n, m, seed, parts=3)
    return I, csp.planted_partition(n, 3)


@pytest.mark.parametrize("seed", range(6))
def test_zero_sum_certificate(seed):
    I, V = three_coloured_instance(seed)
    cert = average_certificate(I, V, zerosum_oa(3, 2), sample="all")
    assert cert == Fraction(1, 9)
    rep = brute_force(I)
    if rep.avd is not None:
        assert rep.avd >= cert


def test_shift_average_certificate():
    q = 3
    shifted = csp.shift_table(csp.zero_sum(2, q), (1, 0))
    I = make_instance(q, 3, [((1, 2), 1, csp.zero_sum(2, q)), ((2, 3), 2, shifted)])
    M = make_array(q, [(a,) for a in range(q)])
    assert average_certificate(I, [[1, 2, 3]], M, "Oq", sample="all") == Fraction(1, q)


def test_balanced_family_certificate():
    q = 3
    eq = csp.linear_equation([1, 2], 0, q)
    I = make_instance(q, 4, [((1, 3), 1, eq), ((2, 4), 1, eq), ((1, 4), 2, csp.linear_equation([1, 1], 1, q))])
    V = [[1, 2], [3, 4]]
    M = make_array(q, [(a, 0) for a in range(q)])
    assert average_certificate(I, V, M, "Iqt", t=1, sample="all") == Fraction(1, q)
    rep = brute_force(I)
    assert rep.avd >= Fraction(1, q)


def test_shift_invariant_family_certificate():
    I = csp.gen_random(3, 2, 6, 8, 2, kind="Eq", parts=3)
    M = make_array(3, [(0, 0, 0), (0, 1, 2), (0, 2, 1)])
    cert = average_certificate(I, csp.planted_partition(6, 3), M, "Eq", sample="all")
    assert cert == Fraction(1, 3)
    rep = brute_force(I)
    assert rep.avd is None or rep.avd >= cert


def test_certificate_failures():
    I, V = three_coloured_instance(0)
    with pytest.raises(reduction.NotAStrongColoring):
        average_certificate(I, [[1, 2, 3, 4, 5, 6]], zerosum_oa(3, 2))
    with pytest.raises(reduction.StructuralCheckFailed):
        average_certificate(I, V, make_array(3, [(0, 0, 0), (1, 1, 1), (2, 2, 2)]))
    with pytest.raises(reduction.ShapeMismatch):
        average_certificate(I, V, make_array(3, [(0, 0)]))
    with pytest.raises(reduction.StructuralCheckFailed):
        average_certificate(I, V, zerosum_oa(3, 2), "Eq")
    with pytest.raises(reduction.ShapeMismatch):
        average_certificate(I, V, zerosum_oa(3, 2), "Iqt")


# ---------------------------------------------------------------- subinstances

def test_subinstance_restricts_all_equal():
    I = make_instance(3, 2, [((1, 2), 1, all_equal(2, 3))])
    J = subinstance(I, (0, 2))
    assert J.q == 2 and J.constraints[0].table == all_equal(2, 2)


def test_full_subset_is_isomorphic():
    I = csp.gen_random(3, 2, 4, 5, 1, kind="rational")
    assert subinstance(I, (0, 1, 2)) == I


@given(st.integers(0, 10 ** 6), st.sampled_from([(0, 1), (0, 2), (1, 2), (2, 0)]), st.booleans())
@settings(max_examples=30, deadline=None)
def test_subinstance_value_identity(seed, T, permute):
    I = csp.gen_random(3, 2, 4, 5, seed, kind="rational")
    bij = [tuple(reversed(sorted(T))) if permute and j % 2 else tuple(sorted(T)) for j in range(I.n)]
    J = subinstance(I, T, bij)
    for z in product(range(2), repeat=I.n):
        assert evaluate(J, z) == evaluate(I, map_back(z, T, bij))
    sub, full = brute_force(J), brute_force(I)
    assert full.wor <= sub.wor and sub.opt <= full.opt


def test_subinstance_errors():
    I = make_instance(3, 2, [((1, 2), 1, all_equal(2, 3))])
    for T in [(0, 0), (0, 3), (1,)]:
        with pytest.raises(reduction.BadSubset):
            subinstance(I, T)
    with pytest.raises(reduction.BadSubset):
        subinstance(I, (0, 1), [(0, 1)])


# ---------------------------------------------------------------- reduction

def best_subinstance_opt(I, pair, p):
    return max(brute_force(subinstance(I, T)).opt for T in reduction.subsets_from_pair(pair, I.q, p))


@pytest.mark.parametrize("seed", range(10))
def test_reduce_three_to_two(seed):
    I = csp.gen_random(3, 2, 6, 9, seed, kind="rational")
    out = reduce_and_solve(I, 2, oracle=True)
    rep = brute_force(I)
    assert out.certified_ratio == Fraction(1, 4)
    assert evaluate(I, out.best_solution) == out.best_value
    if rep.opt != rep.wor:
        assert (out.best_value - rep.wor) / (rep.opt - rep.wor) >= Fraction(1, 4)
    assert rep.wor <= out.best_value <= rep.opt
    assert out.subinstances_solved <= 3


@pytest.mark.parametrize("seed", range(4))
def test_pair_bound_chain(seed):
    I = csp.gen_random(4, 2, 5, 8, seed, kind="rational")
    pair = make_pair(4, *ARPA_432)
    out = reduce_and_solve(I, 3, pair=pair, oracle=True)
    rep = brute_force(I)
    R, R_star = 6, 2
    chain = (R_star * rep.opt + (R - R_star) * rep.wor) / R
    assert out.chain_bound == chain
    assert best_subinstance_opt(I, pair, 3) >= chain
    assert out.pair_ratio == Fraction(1, 3)


@pytest.mark.parametrize("seed", range(3))
def test_reduce_four_to_three_arity_three(seed):
    I = csp.gen_random(4, 3, 5, 6, seed)
    out = reduce_and_solve(I, 3, oracle=True)
    assert out.certified_ratio == Fraction(2, t_number(4, 3) + 1) == Fraction(1, 8)
    if out.achieved_ratio is not None:
        assert out.achieved_ratio >= Fraction(1, 8)


def test_min_goal_reduction():
    I = csp.gen_random(3, 2, 5, 7, 3, kind="rational", goal="min")
    out = reduce_and_solve(I, 2, oracle=True)
    rep = brute_force(I)
    assert rep.opt <= out.best_value <= rep.wor
    assert out.achieved_ratio is None or out.achieved_ratio >= Fraction(1, 4)


def test_p_equals_q_returns_base_solution():
    I = csp.gen_random(3, 2, 4, 5, 0, kind="rational")
    out = reduce_and_solve(I, 3)
    rep = brute_force(I)
    assert out.best_value == rep.opt and out.certified_ratio == 1 and out.subinstances_solved == 1


@pytest.mark.parametrize("seed", range(3))
def test_relaxed_pipeline_on_shift_invariant_instances(seed):
    I = csp.gen_random(4, 2, 5, 8, seed, kind="Eq")
    pair = make_pair(4, *RELAXED_432)
    out = reduce_and_solve(I, 3, pair=pair, relaxed=True, oracle=True)
    assert out.certified_ratio == Fraction(1, 2)
    if out.achieved_ratio is not None:
        assert out.achieved_ratio >= Fraction(1, 2)


def test_relaxed_pipeline_rejects_general_tables():
    I = csp.gen_random(4, 2, 5, 8, 0, kind="rational")
    with pytest.raises(NotAnArpa):
        reduce_and_solve(I, 3, pair=make_pair(4, *RELAXED_432), relaxed=True)


def test_local_search_base_has_no_certificate():
    I = csp.gen_random(3, 2, 5, 6, 1)
    out = reduce_and_solve(I, 2, base="local_search")
    assert out.certified_ratio is None
    out = reduce_and_solve(I, 2, base="local_search", base_ratio=Fraction(1, 2))
    assert out.certified_ratio == Fraction(1, 8)


def test_reduction_errors():
    I = csp.gen_random(3, 3, 5, 4, 0)
    with pytest.raises(reduction.ArityExceedsP):
        reduce_and_solve(I, 2)
    J = csp.gen_random(3, 2, 5, 4, 0)
    with pytest.raises(NotAnArpa):
        reduce_and_solve(J, 2, pair=make_pair(3, [(0, 1, 2)], [(0, 1, 1)]))
    with pytest.raises(reduction.ReductionError):
        reduce_and_solve(J, 4)


# ---------------------------------------------------------------- enlargement

@pytest.mark.parametrize("seed", range(5))
def test_enlargement_preserves_extremes(seed):
    import random
    I = csp.gen_random(2, 2, 4, 5, seed, kind="rational")
    maps = reduction.random_surjections(random.Random(seed), 4, 3, 2)
    J = enlarge_alphabet(I, 3, maps)
    a, b = brute_force(I), brute_force(J)
    assert (a.opt, a.wor) == (b.opt, b.wor)
    for z in product(range(3), repeat=4):
        assert evaluate(J, z) == evaluate(I, pull_back(maps, z))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_average_over_all_surjections_keeps_mean(n):
    I = csp.gen_random(2, min(2, n), n, 1 if n < 3 else 3, n, kind="rational")
    pool = reduction.all_surjections(3, 2)
    assert len(pool) == 6
    total = Fraction(0)
    count = 0
    for maps in product(pool, repeat=n):
        total += enlarge_alphabet(I, 3, maps).mean()
        count += 1
    assert total / count == I.mean()


def test_enlargement_errors():
    I = csp.gen_random(2, 2, 3, 2, 0)
    with pytest.raises(reduction.NotSurjective):
        enlarge_alphabet(I, 3, [(0, 0, 0)] * 3)
    with pytest.raises(reduction.ReductionError):
        enlarge_alphabet(I, 2, [(0, 1)] * 3)
