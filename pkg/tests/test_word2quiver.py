import pytest

from cyclab.coxeter import NAMED_GRAPHS
from cyclab.errors import NotReduced
from cyclab.quiver import MultiQuiver, is_isomorphic
from cyclab.word2quiver import build_q, build_q_underline, last_occurrences


def graph(name):
    return NAMED_GRAPHS[name]()


def test_single_letter_word():
    q = build_q(graph("a2"), (1,))
    assert q.vertices == (1,)
    assert q.arrows == {}
    assert build_q(graph("a2"), (1,), freeze_last=True).frozen == frozenset({1})


def test_kronecker_ladder():
    # positions of 0,1,0,1 with the doubled edge: block arrows of weight 2
    # down the word, one arrow back per repeated letter
    q = build_q(graph("kronecker"), (0, 1, 0, 1), freeze_last=True)
    assert q.vertices == (1, 2, 3, 4)
    assert q.frozen == frozenset({3, 4})
    assert q.arrows == {(1, 2): 2, (2, 3): 2, (3, 4): 2, (3, 1): 1, (4, 2): 1}


def test_kronecker_three_letter():
    q = build_q(graph("kronecker"), (0, 1, 0), freeze_last=True)
    assert q.frozen == frozenset({2, 3})
    assert q.arrows == {(1, 2): 2, (2, 3): 2, (3, 1): 1}


def test_triangle_braid_word_is_a_cycle():
    # the edge {1,3} contributes nothing: both occurrences of letter 1 fall
    # into a single block of the restriction
    q = build_q(graph("triangle"), (1, 2, 1))
    assert q.arrows == {(1, 2): 1, (2, 3): 1, (3, 1): 1}


def test_default_is_unfrozen():
    q = build_q(graph("kronecker"), (0, 1, 0, 1))
    assert q.frozen == frozenset()
    assert q.exchangeable() == (1, 2, 3, 4)


def test_last_occurrences():
    assert last_occurrences((0, 1, 0, 1)) == frozenset({3, 4})
    assert last_occurrences((2, 1, 3, 2, 1)) == frozenset({3, 4, 5})
    assert last_occurrences(()) == frozenset()


def test_underline_drops_final_occurrences():
    q = build_q_underline(graph("kronecker"), (0, 1, 0, 1))
    assert q.vertices == (1, 2)
    assert q.arrows == {(1, 2): 2}
    assert q.frozen == frozenset()


def test_underline_of_short_word_is_empty():
    q = build_q_underline(graph("a2"), (1, 2))
    assert q.vertices == ()
    assert q.arrows == {}


def test_not_reduced_rejected():
    with pytest.raises(NotReduced):
        build_q(graph("a2"), (1, 1))
    with pytest.raises(NotReduced):
        build_q(graph("a2"), (1, 2, 1, 2))
    with pytest.raises(NotReduced):
        build_q_underline(graph("kronecker"), (0, 0))


def test_commuting_swap_gives_isomorphic_quiver():
    # letters 1 and 3 commute in a3; swapping them transposes two positions
    a3 = graph("a3")
    q1 = build_q(a3, (2, 1, 3, 2, 1))
    q2 = build_q(a3, (2, 3, 1, 2, 1))
    assert q1 != q2
    assert is_isomorphic(q1, q2) == {1: 1, 2: 3, 3: 2, 4: 4, 5: 5}
    f1 = build_q(a3, (2, 1, 3, 2, 1), freeze_last=True)
    f2 = build_q(a3, (2, 3, 1, 2, 1), freeze_last=True)
    assert f1.frozen != f2.frozen
    assert is_isomorphic(f1, f2) == {1: 1, 2: 3, 3: 2, 4: 4, 5: 5}


def test_result_is_a_plain_multiquiver():
    q = build_q(graph("a3"), (1, 2, 3))
    assert isinstance(q, MultiQuiver)
    assert MultiQuiver.from_json(q.to_json()) == q
