import random
from fractions import Fraction

import pytest

from qwalk.cylinder import (
    ALL_ZEROS,
    AtMostKOnes,
    EventualPath,
    FinitePathSet,
    FinitelyManyOnes,
    InfinitelyManyOnes,
)
from qwalk.quadratic import (
    QMeasureTable,
    SetSystem,
    cardinality_squared_table,
    is_q_measure,
    is_quadratic_algebra,
    odd_count_system,
    parse_system_file,
    strongly_disjoint,
    three_type_system,
)


def brute_quadratic_oracle(system: SetSystem) -> bool:
    """Literal quantifier sweep over all member triples, repeats included."""
    members = set(system.members)
    if 0 not in members or system.universe_mask not in members:
        return False
    pool = sorted(members)
    for a in pool:
        for b in pool:
            if a & b:
                continue
            for c in pool:
                if c & (a | b):
                    continue
                if {a | b, a | c, b | c} <= members and (a | b | c) not in members:
                    return False
    return True


def brute_measure_oracle(system: SetSystem, table: QMeasureTable) -> bool:
    members = set(system.members)
    pool = sorted(members)
    for a in pool:
        for b in pool:
            if a & b:
                continue
            for c in pool:
                if c & (a | b):
                    continue
                if {a | b, a | c, b | c} <= members:
                    lhs = table[a | b | c]
                    rhs = (
                        table[a | b] + table[a | c] + table[b | c]
                        - table[a] - table[b] - table[c]
                    )
                    if lhs != rhs:
                        return False
    return True


# -- set systems ------------------------------------------------------------------


def test_set_system_dedup_and_validation():
    system = SetSystem(3, (0b101, 0b101, 0b010, 0))
    assert system.members == (0, 0b010, 0b101)
    assert system.indices_of(0b101) == (0, 2)
    with pytest.raises(ValueError):
        SetSystem(3, (0b1000,))
    with pytest.raises(ValueError):
        SetSystem(0, ())
    with pytest.raises(ValueError):
        SetSystem(25, ())


def test_from_index_lists():
    system = SetSystem.from_index_lists(4, [[0, 2], [], [1, 2, 3]])
    assert system.members == (0, 0b0101, 0b1110)
    with pytest.raises(ValueError):
        SetSystem.from_index_lists(2, [[3]])


def test_measure_table_validation():
    system = SetSystem(2, (0, 1, 3))
    with pytest.raises(ValueError):
        QMeasureTable(system, {0: Fraction(0), 1: Fraction(1)})  # domain mismatch
    with pytest.raises(ValueError):
        QMeasureTable(system, {0: Fraction(0), 1: Fraction(-1), 3: Fraction(1)})


# -- power sets -----------------------------------------------------------------------


@pytest.mark.parametrize("size", (1, 2, 3, 4))
def test_power_set_is_quadratic_algebra(size):
    system = SetSystem(size, tuple(range(1 << size)))
    ok, witness = is_quadratic_algebra(system)
    assert ok and witness is None
    assert brute_quadratic_oracle(system)
    additive = QMeasureTable(system, {m: Fraction(m.bit_count()) for m in system.members})
    ok, witness = is_q_measure(system, additive)
    assert ok and witness is None
    ok, witness = is_q_measure(system, cardinality_squared_table(system))
    assert ok and witness is None


def test_missing_empty_or_universe_fails():
    no_empty = SetSystem(2, (1, 2, 3))
    assert is_quadratic_algebra(no_empty) == (False, None)
    no_universe = SetSystem(2, (0, 1, 2))
    ok, _ = is_quadratic_algebra(no_universe)
    assert not ok


def test_explicit_closure_failure_triple():
    # three disjoint singletons with pairwise unions present but no triple union
    subsets = [[], [0], [1], [2], [0, 1], [0, 2], [1, 2], [0, 1, 2, 3]]
    system = SetSystem.from_index_lists(4, subsets)
    ok, witness = is_quadratic_algebra(system)
    assert not ok
    assert witness == (0b0001, 0b0010, 0b0100)
    assert not brute_quadratic_oracle(system)


def test_q_measure_requires_quadratic_algebra():
    system = SetSystem(2, (1, 2, 3))
    with pytest.raises(ValueError):
        is_q_measure(system, QMeasureTable(system, {1: Fraction(0), 2: Fraction(0), 3: Fraction(0)}))


def test_q_measure_nonzero_empty_detected():
    system = SetSystem(2, tuple(range(4)))
    table = QMeasureTable(
        system, {0: Fraction(1), 1: Fraction(1), 2: Fraction(1), 3: Fraction(1)}
    )
    ok, witness = is_q_measure(system, table)
    assert not ok and witness == (0, 0, 0)


def test_q_measure_counterexample_reported():
    system = SetSystem(3, tuple(range(8)))
    values = {m: Fraction(m.bit_count() ** 2) for m in system.members}
    values[0b111] = Fraction(100)  # break the identity at the top
    ok, witness = is_q_measure(system, QMeasureTable(system, values))
    assert not ok and witness == (1, 2, 4)


# -- the nine-element three-type system -------------------------------------------------


def test_three_type_membership_shape():
    system, table = three_type_system()
    assert system.universe_size == 9
    assert len(system.members) == 110
    sizes = sorted({m.bit_count() for m in system.members})
    assert sizes == [0, 3, 6, 9]
    groups = [(0, 1, 2), (3, 4, 5), (6, 7, 8)]
    for m in system.members:
        if m in (0, system.universe_mask):
            continue
        counts = sorted(
            sum(1 for e in group if m >> e & 1) for group in groups
        )
        assert counts in ([0, 1, 2], [1, 2, 3])


def test_three_type_is_quadratic_algebra():
    system, table = three_type_system()
    ok, witness = is_quadratic_algebra(system)
    assert ok and witness is None
    assert brute_quadratic_oracle(system)
    ok, witness = is_q_measure(system, table)
    assert ok and witness is None
    assert brute_measure_oracle(system, table)


def test_three_type_not_closed_under_disjoint_union():
    system, _ = three_type_system()
    members = set(system.members)
    a = SetSystem.from_index_lists(9, [[3, 0, 1]]).members[0]
    b = SetSystem.from_index_lists(9, [[4, 6, 7]]).members[0]
    assert a in members and b in members and a & b == 0
    assert (a | b) not in members  # counts become (2, 2, 2): not pairwise distinct


def test_three_type_nonadditivity_values():
    system, table = three_type_system()
    a = SetSystem.from_index_lists(9, [[3, 0, 1]]).members[0]  # counts (2,1,0)
    b = SetSystem.from_index_lists(9, [[4, 5, 6]]).members[0]  # counts (0,2,1)
    union = a | b
    assert union in set(system.members) and union.bit_count() == 6
    assert table[a] + table[b] == Fraction(1, 3)
    assert table[union] == Fraction(1, 2)
    assert table[a] + table[b] != table[union]


def test_three_type_without_universe_fails_with_triple():
    system, _ = three_type_system()
    pruned = SetSystem(
        system.universe_size,
        tuple(m for m in system.members if m != system.universe_mask),
    )
    ok, witness = is_quadratic_algebra(pruned)
    assert not ok and witness is not None
    a, b, c = witness
    assert a | b | c == system.universe_mask
    members = set(pruned.members)
    assert {a | b, a | c, b | c} <= members
    assert a & b == a & c == b & c == 0


# -- the odd-count system ---------------------------------------------------------------


def test_odd_count_membership():
    system = odd_count_system(3, 2)
    assert system.universe_size == 5
    assert len(system.members) == 20
    x_mask = 0b00111
    for m in system.members:
        xs = (m & x_mask).bit_count()
        assert xs == 0 or xs % 2 == 1
    assert system.has_empty() and system.has_universe()


def test_odd_count_is_quadratic_algebra():
    system = odd_count_system(3, 2)
    ok, witness = is_quadratic_algebra(system)
    assert ok and witness is None
    assert brute_quadratic_oracle(system)
    ok, witness = is_q_measure(system, cardinality_squared_table(system))
    assert ok and witness is None


def test_odd_count_larger_instance():
    system = odd_count_system(5, 3)
    ok, _ = is_quadratic_algebra(system)
    assert ok
    ok, _ = is_q_measure(system, cardinality_squared_table(system))
    assert ok


def test_odd_count_not_closed_under_disjoint_unions():
    system = odd_count_system(3, 2)
    members = set(system.members)
    x_mask = 0b00111
    witnessed = False
    for a in system.members:
        for b in system.members:
            if a and b and a & b == 0 and (a & x_mask) and (b & x_mask):
                assert ((a | b) & x_mask).bit_count() % 2 == 0
                if (a | b) not in members:
                    witnessed = True
    assert witnessed


def test_odd_count_validation():
    with pytest.raises(ValueError):
        odd_count_system(2, 2)
    with pytest.raises(ValueError):
        odd_count_system(3, -1)


# -- squared cardinality on random quadratic algebras -------------------------------------


def close_under_quadratic(universe: int, seeds: set[int]) -> SetSystem:
    members = set(seeds) | {0, (1 << universe) - 1}
    changed = True
    while changed:
        changed = False
        pool = sorted(members)
        for ai, a in enumerate(pool):
            for bi in range(ai + 1, len(pool)):
                b = pool[bi]
                if a & b or (a | b) not in members:
                    continue
                for ci in range(bi + 1, len(pool)):
                    c = pool[ci]
                    if c & (a | b):
                        continue
                    if (a | c) in members and (b | c) in members and (a | b | c) not in members:
                        members.add(a | b | c)
                        changed = True
    return SetSystem(universe, tuple(members))


def test_squared_cardinality_on_random_closures():
    rng = random.Random(2024)
    for _ in range(100):
        universe = rng.randint(2, 8)
        seeds = {rng.getrandbits(universe) for _ in range(rng.randint(1, 6))}
        system = close_under_quadratic(universe, seeds)
        ok, _ = is_quadratic_algebra(system)
        assert ok
        ok, _ = is_q_measure(system, cardinality_squared_table(system))
        assert ok


# -- file format -----------------------------------------------------------------------


def test_parse_system_file():
    text = "4\n\n0,1\n2\n0,1,2,3\n"
    system = parse_system_file(text)
    assert system.universe_size == 4
    assert system.members == (0, 0b0011, 0b0100, 0b1111)
    with pytest.raises(ValueError):
        parse_system_file("")
    with pytest.raises(ValueError):
        parse_system_file("2\n5\n")


def test_parse_round_trip_checks():
    subsets = [[], [0], [1], [0, 1]]
    text = "2\n" + "\n".join(",".join(map(str, s)) for s in subsets)
    system = parse_system_file(text)
    ok, _ = is_quadratic_algebra(system)
    assert ok


# -- strong disjointness ------------------------------------------------------------------


def test_strong_disjointness_immediate():
    a = FinitePathSet((ALL_ZEROS,))
    b = FinitePathSet((EventualPath((1,), 1),))
    verdict = strongly_disjoint(a, b, 10)
    assert verdict.witnessed and verdict.at_level == 1


def test_strong_disjointness_at_defining_level():
    a = FinitePathSet((EventualPath((0, 0), 0),))
    b = FinitePathSet((EventualPath((0, 1), 0),))
    verdict = strongly_disjoint(a, b, 10)
    assert verdict.witnessed and verdict.at_level == 2


def test_strong_disjointness_never_witnessed():
    finitely = FinitelyManyOnes()
    infinitely = InfinitelyManyOnes()
    for bound in (1, 8, 32):
        verdict = strongly_disjoint(finitely, infinitely, bound)
        assert not verdict.witnessed and verdict.at_level is None


def test_strong_disjointness_overlapping_hulls():
    # both events contain paths through the all-zeros prefix at every level
    a = AtMostKOnes(1)
    b = FinitePathSet((ALL_ZEROS,))
    verdict = strongly_disjoint(a, b, 12)
    assert not verdict.witnessed


def test_strong_disjointness_validation():
    with pytest.raises(ValueError):
        strongly_disjoint(FinitelyManyOnes(), FinitelyManyOnes(), 0)
