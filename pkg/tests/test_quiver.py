import pytest

from cyclab.errors import FrozenVertex, LoopAtVertex, NotMutable, TwoCycleAtVertex
from cyclab.quiver import (
    ExchangeMatrix,
    MultiQuiver,
    detect,
    drop_frozen_arrows,
    fz_mutate,
    is_isomorphic,
    matrix_mutate,
    to_exchange_matrix,
)


def ladder4():
    return MultiQuiver(
        [1, 2, 3, 4],
        (3, 4),
        {(1, 2): 2, (2, 3): 2, (3, 1): 1, (3, 4): 2, (4, 2): 1},
    )


def test_mult_and_exchangeable():
    q = ladder4()
    assert q.mult(1, 2) == 2 and q.mult(2, 1) == 0
    assert q.exchangeable() == (1, 2)


def test_json_round_trip():
    q = ladder4()
    assert MultiQuiver.from_json(q.to_json()) == q


def test_detect_flags_loops_and_live_two_cycles():
    q = MultiQuiver([1, 2], (), {(1, 1): 1, (1, 2): 1, (2, 1): 1})
    rep = detect(q)
    assert rep["loops"] == [1]
    assert rep["two_cycles"]
    # a 2-cycle between two frozen vertices is dormant
    frozen = MultiQuiver([1, 2], (1, 2), {(1, 2): 1, (2, 1): 1})
    assert detect(frozen)["two_cycles"] == []


def test_mutation_is_an_involution():
    q = ladder4()
    assert fz_mutate(fz_mutate(q, 1), 1) == q
    assert fz_mutate(fz_mutate(q, 2), 2) == q


def test_mutation_reverses_and_composes():
    # kronecker ladder: mutate at 1 reverses the double arrows at 1 and the
    # composite 3 => 1 => 2 cancels against nothing but stays via 2-cycle
    # cancellation with 2 -> 3 arrows
    q = MultiQuiver([1, 2, 3], (3,), {(1, 2): 2, (3, 1): 1})
    m = fz_mutate(q, 1)
    assert m.mult(2, 1) == 2 and m.mult(1, 3) == 1
    assert m.mult(3, 2) == 2  # composite through the mutated vertex


def test_mutation_cancels_two_cycles():
    q = MultiQuiver([1, 2, 3], (), {(1, 2): 1, (2, 3): 1, (3, 1): 1})
    m = fz_mutate(q, 2)
    # composite 1 -> 3 cancels against the existing 3 -> 1
    assert m.mult(1, 3) == 0 and m.mult(3, 1) == 0
    assert m.mult(2, 1) == 1 and m.mult(3, 2) == 1


def test_mutation_preserves_frozen_frozen_arrows():
    q = MultiQuiver([1, 2, 3], (2, 3), {(2, 1): 1, (1, 3): 1, (3, 2): 5})
    m = fz_mutate(q, 1)
    # no composite lands between two frozen vertices...
    assert m.mult(2, 3) == 0
    # ...and existing frozen-frozen arrows pass through untouched
    assert m.mult(3, 2) == 5


def test_mutation_guards():
    with pytest.raises(FrozenVertex):
        fz_mutate(ladder4(), 3)
    with pytest.raises(LoopAtVertex):
        fz_mutate(MultiQuiver([1], (), {(1, 1): 1}), 1)
    with pytest.raises(TwoCycleAtVertex):
        fz_mutate(MultiQuiver([1, 2], (), {(1, 2): 1, (2, 1): 1}), 1)


def test_exchange_matrix_skew_guard():
    with pytest.raises(ValueError):
        ExchangeMatrix([[0, 1], [1, 0]], 2)


def test_to_exchange_matrix_ladder():
    b = to_exchange_matrix(ladder4())
    assert b.n == 2
    assert b.labels == (1, 2, 3, 4)
    assert b.rows == ((0, 2), (-2, 0), (1, -2), (0, 1))


def test_to_exchange_matrix_ignores_frozen_frozen():
    q = ladder4()
    b = to_exchange_matrix(q)
    q2 = MultiQuiver(q.vertices, q.frozen, {**q.arrows, (3, 4): 7})
    assert to_exchange_matrix(q2) == b


def test_to_exchange_matrix_rejects_live_two_cycles():
    q = MultiQuiver([1, 2], (), {(1, 2): 1, (2, 1): 1})
    with pytest.raises(NotMutable):
        to_exchange_matrix(q)


def test_matrix_mutation_matches_quiver_mutation():
    q = ladder4()
    for k, col in ((1, 0), (2, 1)):
        assert to_exchange_matrix(fz_mutate(q, k)) == matrix_mutate(
            to_exchange_matrix(q), col
        )


def test_matrix_mutation_period_two():
    b = ExchangeMatrix([[0, 2], [-2, 0]], 2)
    assert matrix_mutate(matrix_mutate(b, 0), 0) == b


def test_is_isomorphic_respects_structure():
    a = MultiQuiver([1, 2], (), {(1, 2): 2})
    b = MultiQuiver([5, 7], (), {(7, 5): 2})
    assert is_isomorphic(a, b)
    c = MultiQuiver([1, 2], (2,), {(1, 2): 2})
    assert not is_isomorphic(a, c)
    d = MultiQuiver([1, 2], (), {(1, 2): 1})
    assert not is_isomorphic(a, d)


def test_drop_frozen_arrows():
    q = ladder4()
    bare = drop_frozen_arrows(q)
    assert bare.mult(3, 4) == 0
    assert bare.mult(3, 1) == 1 and bare.mult(4, 2) == 1
    assert bare.frozen == q.frozen
