"""Signed permutations, admissible maps, closure, orbits, cycle notation."""

import random

import pytest

from qsymbreak.errors import CapExceededError, ValidationError
from qsymbreak.formulas import Not, Var, Xor
from qsymbreak.groups import (
    AdmissibleMap,
    SignedPermutation,
    check_admissible,
    format_generator,
    format_generators,
    group_closure,
    is_syntactic_symmetry,
    orbit_of_assignment,
    parse_generator,
    parse_generators,
)
from qsymbreak.qdimacs import EXISTS, FORALL, Prefix, QbfInstance
from qsymbreak.strategies import qbf_truth

import oracles

# prefix of the two-block examples: forall x y exists a b (x=1 y=2 a=3 b=4)
PREFIX_AABB = Prefix.from_pairs([(FORALL, [1, 2]), (EXISTS, [3, 4])])

# matrix of (x <-> a) and (y <-> b) as CNF
MATRIX_AABB = ((-1, 3), (1, -3), (-2, 4), (2, -4))
INSTANCE_AABB = QbfInstance(prefix=PREFIX_AABB, clauses=MATRIX_AABB)

# Example instance: forall x exists y exists z . (y <-> z), x=1 y=2 z=3
PREFIX_XYZ = Prefix.from_pairs([(FORALL, [1]), (EXISTS, [2, 3])])
INSTANCE_XYZ = QbfInstance(prefix=PREFIX_XYZ, clauses=((-2, 3), (2, -3)))
SWAP_YZ = SignedPermutation.from_dict({1: 1, 2: 3, 3: 2})
NEGATE_YZ = SignedPermutation.from_dict({1: 1, 2: -2, 3: -3})


def test_admissible_flip_and_swap():
    f = SignedPermutation.from_dict({1: -1, 2: 2, 3: 4, 4: 3})
    assert check_admissible(f, PREFIX_AABB).ok


def test_cross_block_image_violates_condition_two():
    g = SignedPermutation.from_dict({1: 3, 2: 2, 3: 1, 4: 4})
    report = check_admissible(g, PREFIX_AABB)
    assert not report.ok
    assert {c for c, _ in report.violations} == {2}


def test_non_bijective_map_violates_condition_one():
    h = AdmissibleMap.from_dict({1: Var(1), 2: Not(Var(1)), 3: Var(3), 4: Var(4)})
    report = check_admissible(h, PREFIX_AABB)
    assert not report.ok
    assert {c for c, _ in report.violations} == {1}


def test_xor_map_is_admissible():
    g = AdmissibleMap.from_dict(
        {1: Var(1), 2: Xor(Var(1), Var(2)), 3: Var(3), 4: Xor(Var(3), Var(4))}
    )
    assert check_admissible(g, PREFIX_AABB).ok


def test_condition_one_cap():
    prefix = Prefix.from_pairs([(EXISTS, list(range(1, 18)))])
    g = AdmissibleMap.from_dict({v: Var(v) for v in range(1, 18)})
    with pytest.raises(CapExceededError):
        check_admissible(g, prefix)
    assert check_admissible(g, prefix, cap=17).ok


def test_domain_mismatch_raises():
    g = SignedPermutation.from_dict({1: 1})
    with pytest.raises(ValidationError):
        check_admissible(g, PREFIX_AABB)


def test_apply_to_assignment_identity():
    g = SignedPermutation.identity([1, 2, 3])
    sigma = {1: True, 2: False, 3: True}
    assert g.apply_to_assignment(sigma) == sigma


def test_apply_to_assignment_flip():
    g = SignedPermutation.from_dict({1: -1})
    assert g.apply_to_assignment({1: True}) == {1: False}


def test_apply_to_assignment_swap():
    g = SignedPermutation.from_dict({2: 3, 3: 2})
    assert g.apply_to_assignment({2: True, 3: False}) == {2: False, 3: True}


def test_pair_swap_is_syntactic_symmetry():
    f = SignedPermutation.from_dict({1: 2, 2: 1, 3: 4, 4: 3})
    assert is_syntactic_symmetry(f, INSTANCE_AABB)
    assert is_syntactic_symmetry(f, INSTANCE_AABB, use_truth_table=True)


def test_identity_is_always_a_symmetry():
    rng = random.Random(3)
    for _ in range(10):
        inst = oracles.random_instance(rng, 5, 6)
        identity = SignedPermutation.identity(inst.prefix.variables)
        assert is_syntactic_symmetry(identity, inst)


def test_sign_flip_on_unit_clause_is_not_a_symmetry():
    inst = QbfInstance(prefix=Prefix.from_pairs([(EXISTS, [1])]), clauses=((1,),))
    flip = SignedPermutation.from_dict({1: -1})
    assert not is_syntactic_symmetry(flip, inst)
    assert not is_syntactic_symmetry(flip, inst, use_truth_table=True)


def test_inadmissible_generator_rejected():
    g = SignedPermutation.from_dict({1: 3, 2: 2, 3: 1, 4: 4})
    with pytest.raises(ValidationError):
        is_syntactic_symmetry(g, INSTANCE_AABB)


def test_closure_of_identity():
    identity = SignedPermutation.identity([1, 2, 3])
    assert group_closure([identity]) == [identity]


def test_closure_of_swap_has_two_elements():
    closure = group_closure([SWAP_YZ])
    assert len(closure) == 2
    assert SignedPermutation.identity([1, 2, 3]) in closure


def test_closure_of_swap_and_negate_both():
    # the two generators commute and are involutions, so the closure is the
    # four-element group {id, swap, negate-both, negate-swap}
    closure = group_closure([SWAP_YZ, NEGATE_YZ])
    expected = {
        SignedPermutation.identity([1, 2, 3]),
        SWAP_YZ,
        NEGATE_YZ,
        SignedPermutation.from_dict({1: 1, 2: -3, 3: -2}),
    }
    assert set(closure) == expected


def test_closure_cap():
    # full symmetric group with flips on 4 variables has 4! * 2**4 elements
    gens = [
        SignedPermutation.from_dict({1: 2, 2: 3, 3: 4, 4: 1}),
        SignedPermutation.from_dict({1: 2, 2: 1, 3: 3, 4: 4}),
        SignedPermutation.from_dict({1: -1, 2: 2, 3: 3, 4: 4}),
    ]
    with pytest.raises(CapExceededError):
        group_closure(gens, cap=100)
    assert len(group_closure(gens, cap=1000)) == 384


def test_orbit_identity_group():
    sigma = {1: True, 2: False}
    orbit = orbit_of_assignment([SignedPermutation.identity([1, 2])], sigma)
    assert orbit == [sigma]
    assert orbit_of_assignment([], sigma) == [sigma]


def test_orbit_of_unequal_pair():
    # under {id, swap, negate-both, negate-swap} the orbit of y=T z=F (x
    # fixed) is the two assignments where y and z differ
    sigma = {1: False, 2: True, 3: False}
    orbit = orbit_of_assignment([SWAP_YZ, NEGATE_YZ], sigma)
    assert orbit == [
        {1: False, 2: False, 3: True},
        {1: False, 2: True, 3: False},
    ]


def test_orbit_sizes_divide_group_order():
    rng = random.Random(11)
    for _ in range(30):
        prefix = oracles.random_prefix(rng, rng.randint(2, 5))
        gens = [oracles.random_signed_perm(rng, prefix) for _ in range(2)]
        group = group_closure(gens, cap=5000)
        sigma = oracles.random_assignment(rng, list(prefix.variables))
        orbit = orbit_of_assignment(gens, sigma, cap=5000)
        assert len(group) % len(orbit) == 0


def test_truth_preserved_under_admissible_permutation():
    rng = random.Random(404)
    for _ in range(50):
        n = rng.randint(2, 8)
        inst = oracles.random_instance(rng, n, rng.randint(1, 2 * n))
        g = oracles.random_signed_perm(rng, inst.prefix)
        mapped = QbfInstance(prefix=inst.prefix, clauses=g.apply_to_clauses(inst.clauses))
        assert qbf_truth(inst) == qbf_truth(mapped)


def test_inverse_of_admissible_is_admissible():
    rng = random.Random(77)
    for _ in range(100):
        prefix = oracles.random_prefix(rng, rng.randint(1, 6))
        g = oracles.random_signed_perm(rng, prefix)
        assert check_admissible(g, prefix).ok
        assert check_admissible(g.inverse(), prefix).ok
        assert g.compose(g.inverse()).is_identity
        assert g.inverse().compose(g).is_identity


def test_assignment_action_is_a_homomorphism():
    rng = random.Random(13)
    for _ in range(100):
        prefix = oracles.random_prefix(rng, rng.randint(1, 6))
        g = oracles.random_signed_perm(rng, prefix)
        h = oracles.random_signed_perm(rng, prefix)
        sigma = oracles.random_assignment(rng, list(prefix.variables))
        composed = g.compose(h).apply_to_assignment(sigma)
        chained = h.apply_to_assignment(g.apply_to_assignment(sigma))
        assert composed == chained


def test_fast_path_implies_truth_table_path():
    rng = random.Random(2718)
    for _ in range(40):
        inst, g = oracles.planted_instance(rng, rng.randint(2, 6), rng.randint(1, 5))
        assert is_syntactic_symmetry(g, inst)
        assert is_syntactic_symmetry(g, inst, use_truth_table=True)


def test_format_swap_cycles():
    g = SignedPermutation.from_dict({1: 2, 2: 1, 3: 4, 4: 3})
    assert format_generator(g) == "(1 2)(3 4)"


def test_format_sign_flip():
    g = SignedPermutation.from_dict({5: -5})
    assert format_generator(g) == "(-5)"


def test_format_mixed_cycle():
    g = SignedPermutation.from_dict({1: 2, 2: -1})
    assert format_generator(g) == "(1 2 -1 -2)"


def test_format_identity():
    assert format_generator(SignedPermutation.identity([1, 2])) == "()"


def test_parse_round_trip():
    rng = random.Random(31)
    for _ in range(200):
        prefix = oracles.random_prefix(rng, rng.randint(1, 7))
        g = oracles.random_signed_perm(rng, prefix)
        assert parse_generator(format_generator(g), g.domain) == g


def test_parse_rejects_bad_input():
    with pytest.raises(ValidationError):
        parse_generator("(1 2", [1, 2])
    with pytest.raises(ValidationError):
        parse_generator("(0)", [1])
    with pytest.raises(ValidationError):
        parse_generator("(1 9)", [1, 2])
    with pytest.raises(ValidationError):
        parse_generator("(1 2)(1 3)", [1, 2, 3])


def test_generator_file_round_trip():
    gens = [
        SignedPermutation.from_dict({1: 2, 2: 1, 3: 3}),
        SignedPermutation.from_dict({1: 1, 2: -2, 3: -3}),
    ]
    text = format_generators(gens)
    assert parse_generators("c comment\n" + text + "\n# trailing\n", [1, 2, 3]) == gens


def test_compose_applies_right_then_left():
    g = SignedPermutation.from_dict({1: 2, 2: 1})
    h = SignedPermutation.from_dict({1: -1, 2: 2})
    # (g . h)(1) = g(h(1)) = g(-1) = -2
    assert g.compose(h).image(1) == -2
