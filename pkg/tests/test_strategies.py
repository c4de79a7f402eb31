"""Strategy trees, enumeration, truth oracle, common paths, semantic orbits."""

import random

import pytest

from qsymbreak.errors import CapExceededError, ValidationError
from qsymbreak.formulas import TRUE, And, Iff, Or, Var
from qsymbreak.groups import SignedPermutation
from qsymbreak.qdimacs import EXISTS, FORALL, Prefix, QbfInstance
from qsymbreak.strategies import (
    EXISTENTIAL,
    UNIVERSAL,
    Strategy,
    common_path,
    count_strategies,
    enumerate_strategies,
    qbf_truth,
    random_strategy,
    semantic_orbits,
    strategy_value,
)

import oracles

PREFIX_AE = Prefix.from_pairs([(FORALL, [1]), (EXISTS, [2])])
IFF_12 = QbfInstance(prefix=PREFIX_AE, clauses=((-1, 2), (1, -2)))

PREFIX_XYZ = Prefix.from_pairs([(FORALL, [1]), (EXISTS, [2, 3])])
INSTANCE_XYZ = QbfInstance(prefix=PREFIX_XYZ, clauses=((-2, 3), (2, -3)))
SWAP_YZ = SignedPermutation.from_dict({1: 1, 2: 3, 3: 2})
NEGATE_YZ = SignedPermutation.from_dict({1: 1, 2: -2, 3: -3})


def test_strategy_counts_for_two_level_prefix():
    assert count_strategies(PREFIX_AE, EXISTENTIAL) == 4
    assert count_strategies(PREFIX_AE, UNIVERSAL) == 2


def test_single_existential_variable_has_unique_universal_tree():
    prefix = Prefix.from_pairs([(EXISTS, [1])])
    assert count_strategies(prefix, UNIVERSAL) == 1
    assert count_strategies(prefix, EXISTENTIAL) == 2


def test_enumerate_the_four_existential_trees():
    got = list(enumerate_strategies(PREFIX_AE, EXISTENTIAL))
    labels = [(s.label(2, (False,)), s.label(2, (True,))) for s in got]
    assert labels == [(False, False), (False, True), (True, False), (True, True)]
    assert len(set(got)) == 4


def test_enumerate_single_variable_trees():
    prefix = Prefix.from_pairs([(EXISTS, [1])])
    got = list(enumerate_strategies(prefix, EXISTENTIAL))
    assert [s.paths for s in got] == [({1: False},), ({1: True},)]


def test_enumeration_length_matches_count():
    rng = random.Random(61)
    for _ in range(50):
        prefix = oracles.random_prefix(rng, rng.randint(1, 4))
        for role in (EXISTENTIAL, UNIVERSAL):
            count = count_strategies(prefix, role)
            assert sum(1 for _ in enumerate_strategies(prefix, role)) == count


def test_enumeration_cap_names_the_count():
    prefix = Prefix.from_pairs([(FORALL, list(range(1, 6))), (EXISTS, [6])])
    with pytest.raises(CapExceededError, match="4294967296"):
        list(enumerate_strategies(prefix, EXISTENTIAL, cap=2**20))


def test_copy_strategy_wins_iff_game():
    copy = Strategy.from_tables(
        PREFIX_AE, EXISTENTIAL, {2: {(False,): False, (True,): True}}
    )
    assert strategy_value(IFF_12, copy) is True


def test_constant_true_strategy_loses_iff_game():
    const = Strategy.from_tables(
        PREFIX_AE, EXISTENTIAL, {2: {(False,): True, (True,): True}}
    )
    assert strategy_value(IFF_12, const) is False


def test_strategy_value_accepts_formula_targets():
    copy = Strategy.from_tables(
        PREFIX_AE, EXISTENTIAL, {2: {(False,): False, (True,): True}}
    )
    assert strategy_value((PREFIX_AE, Iff(Var(1), Var(2))), copy) is True


def test_strategy_value_rejects_prefix_mismatch():
    other = Prefix.from_pairs([(FORALL, [1]), (EXISTS, [2, 3])])
    s = next(enumerate_strategies(other, EXISTENTIAL))
    with pytest.raises(ValidationError):
        strategy_value(IFF_12, s)


def test_conjunction_distributes_over_existential_value():
    rng = random.Random(1009)
    ids = [1, 2, 3]
    for _ in range(1000):
        prefix = oracles.random_prefix(rng, 3)
        phi = oracles.random_formula(rng, ids)
        psi = oracles.random_formula(rng, ids)
        s = random_strategy(prefix, EXISTENTIAL, rng)
        t = random_strategy(prefix, UNIVERSAL, rng)
        both = And((phi, psi))
        assert strategy_value((prefix, both), s) == (
            strategy_value((prefix, phi), s) and strategy_value((prefix, psi), s)
        )
        either = Or((phi, psi))
        assert strategy_value((prefix, either), t) == (
            strategy_value((prefix, phi), t) or strategy_value((prefix, psi), t)
        )


def test_truth_of_iff_games():
    assert qbf_truth(IFF_12) is True
    flipped = QbfInstance(
        prefix=Prefix.from_pairs([(EXISTS, [1]), (FORALL, [2])]),
        clauses=((-1, 2), (1, -2)),
    )
    assert qbf_truth(flipped) is False


def test_truth_of_empty_prefix_true_matrix():
    assert qbf_truth(QbfInstance(prefix=Prefix(), clauses=())) is True
    assert qbf_truth((Prefix(), TRUE)) is True


def test_truth_cap():
    prefix = Prefix.from_pairs([(EXISTS, list(range(1, 26)))])
    with pytest.raises(CapExceededError):
        qbf_truth(QbfInstance(prefix=prefix, clauses=((1,),)))


def test_truth_matches_unpruned_oracle():
    rng = random.Random(512)
    for _ in range(150):
        inst = oracles.random_instance(rng, rng.randint(1, 6), rng.randint(0, 8))
        assert qbf_truth(inst) == oracles.brute_qbf_truth(inst)


def test_common_path_forced_intersection():
    copy = Strategy.from_tables(
        PREFIX_AE, EXISTENTIAL, {2: {(False,): False, (True,): True}}
    )
    play_false = Strategy.from_tables(PREFIX_AE, UNIVERSAL, {1: {(): False}})
    assert common_path(copy, play_false) == {1: False, 2: False}


def test_common_path_single_existential():
    prefix = Prefix.from_pairs([(EXISTS, [1])])
    s = Strategy.from_tables(prefix, EXISTENTIAL, {1: {(): True}})
    t = next(enumerate_strategies(prefix, UNIVERSAL))
    assert common_path(s, t) == s.paths[0]


def test_common_path_is_a_path_of_both():
    rng = random.Random(8128)
    for _ in range(300):
        prefix = oracles.random_prefix(rng, rng.randint(1, 4))
        s = random_strategy(prefix, EXISTENTIAL, rng)
        t = random_strategy(prefix, UNIVERSAL, rng)
        sigma = common_path(s, t)
        assert sigma in s.paths
        assert sigma in t.paths


def test_common_path_argument_order_enforced():
    s = next(enumerate_strategies(PREFIX_AE, EXISTENTIAL))
    t = next(enumerate_strategies(PREFIX_AE, UNIVERSAL))
    with pytest.raises(ValidationError):
        common_path(t, s)


def test_example_orbits_split_by_equality_pattern():
    orbits = semantic_orbits(PREFIX_XYZ, [SWAP_YZ, NEGATE_YZ])
    assert len(orbits) == 4
    assert sorted(len(o) for o in orbits) == [4, 4, 4, 4]
    # each orbit is characterized by which branches pick equal values
    def signature(s):
        return (
            s.label(2, (False,)) == s.label(3, (False,)),
            s.label(2, (True,)) == s.label(3, (True,)),
        )

    for orbit in orbits:
        assert len({signature(s) for s in orbit}) == 1
    assert {signature(o[0]) for o in orbits} == {
        (True, True),
        (True, False),
        (False, True),
        (False, False),
    }


def test_identity_generators_give_singleton_orbits():
    identity = SignedPermutation.identity([1, 2])
    orbits = semantic_orbits(PREFIX_AE, [identity])
    assert len(orbits) == count_strategies(PREFIX_AE, EXISTENTIAL)
    assert all(len(o) == 1 for o in orbits)
    assert len(semantic_orbits(PREFIX_AE, [])) == 4


def test_orbit_sizes_sum_to_strategy_count():
    rng = random.Random(23)
    for _ in range(20):
        prefix = oracles.random_prefix(rng, rng.randint(1, 4))
        gens = [oracles.random_signed_perm(rng, prefix)]
        orbits = semantic_orbits(prefix, gens)
        assert sum(len(o) for o in orbits) == count_strategies(prefix, EXISTENTIAL)


def test_orbits_match_literal_pairwise_relation():
    # cross-check the fingerprint shortcut against the relation spelled out
    # directly: s ~ s' iff both path sets map into each other under the group
    from qsymbreak.groups import group_closure

    rng = random.Random(67)
    for _ in range(10):
        prefix = oracles.random_prefix(rng, rng.randint(1, 3))
        gens = [oracles.random_signed_perm(rng, prefix)]
        group = group_closure(gens)
        strategies = list(enumerate_strategies(prefix, EXISTENTIAL))
        paths = {s: {tuple(sorted(p.items())) for p in s.paths} for s in strategies}

        def maps_into(a, b):
            return all(
                any(
                    tuple(sorted(g.apply_to_assignment(dict(p)).items())) in paths[b]
                    for g in group
                )
                for p in paths[a]
            )

        orbits = semantic_orbits(prefix, gens)
        index = {}
        for k, orbit in enumerate(orbits):
            for s in orbit:
                index[s] = k
        for a in strategies:
            for b in strategies:
                related = maps_into(a, b) and maps_into(b, a)
                assert related == (index[a] == index[b])


def test_orbits_are_winning_homogeneous_on_symmetric_instances():
    rng = random.Random(4242)
    for _ in range(15):
        inst, g = oracles.planted_instance(rng, rng.randint(2, 4), rng.randint(1, 4))
        orbits = semantic_orbits(inst.prefix, [g])
        for orbit in orbits:
            values = {strategy_value(inst, s) for s in orbit}
            assert len(values) == 1


def test_mutual_consistency_of_strategy_truth():
    rng = random.Random(1717)
    for _ in range(30):
        inst = oracles.random_instance(rng, rng.randint(1, 4), rng.randint(0, 6))
        exists_win = any(
            strategy_value(inst, s)
            for s in enumerate_strategies(inst.prefix, EXISTENTIAL)
        )
        all_universal_true = all(
            strategy_value(inst, t)
            for t in enumerate_strategies(inst.prefix, UNIVERSAL)
        )
        assert exists_win == all_universal_true
        assert qbf_truth(inst) == exists_win
