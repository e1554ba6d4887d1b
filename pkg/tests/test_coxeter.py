import pytest

from cyclab.coxeter import (
    NAMED_GRAPHS,
    CoxeterGraph,
    canonical_form,
    element_length,
    enumerate_group,
    is_reduced,
    kronecker_graph,
    longest_element,
    reduced_words,
    triangle_graph,
    words_of_length,
)
from cyclab.errors import CapExceeded, InfiniteParabolic, NotReduced


def test_graph_construction_rejects_bad_input():
    with pytest.raises(ValueError):
        CoxeterGraph((1, 1), [])
    with pytest.raises(ValueError):
        CoxeterGraph((1, 2), [(1, 1, 1)])
    with pytest.raises(ValueError):
        CoxeterGraph((1, 2), [(1, 3, 1)])


def test_graph_json_round_trip():
    g = triangle_graph()
    assert CoxeterGraph.from_json(g.to_json()) == g


def test_is_reduced_basics():
    g = NAMED_GRAPHS["a2"]()
    assert is_reduced(g, ())
    assert is_reduced(g, (1, 2, 1))
    assert not is_reduced(g, (1, 1))
    assert not is_reduced(g, (1, 2, 1, 2))  # braid relation makes it s2 s1


def test_triangle_words_clearly_reduced():
    g = triangle_graph()
    for w in ((1, 2, 1, 3, 2), (2, 1, 2, 3, 2), (2, 1, 3, 2, 3)):
        assert is_reduced(g, w)


def test_canonical_form_separates_elements():
    g = NAMED_GRAPHS["a2"]()
    assert canonical_form(g, (1, 2, 1)) == canonical_form(g, (2, 1, 2))
    assert canonical_form(g, (1, 2)) != canonical_form(g, (2, 1))


def test_element_length_descends():
    g = triangle_graph()
    assert element_length(g, ()) == 0
    assert element_length(g, (1, 2, 1, 3, 2)) == 5
    assert element_length(g, (1, 1)) == 0
    assert element_length(g, (1, 2, 2, 1)) == 0


def test_reduced_words_closure_of_triple_word():
    g = triangle_graph()
    words = reduced_words(g, (1, 2, 1, 3, 2))
    assert (2, 1, 2, 3, 2) in words
    assert (2, 1, 3, 2, 3) in words
    for w in words:
        assert is_reduced(g, w)
    with pytest.raises(NotReduced):
        reduced_words(g, (1, 1))


def test_kronecker_has_no_rewrites():
    # no commutation and no braid edge: each element has one reduced word
    g = kronecker_graph()
    assert reduced_words(g, (0, 1, 0)) == {(0, 1, 0)}


def test_words_of_length_counts():
    assert len(words_of_length(NAMED_GRAPHS["a2"](), 3)) == 2
    assert len(words_of_length(NAMED_GRAPHS["a2"](), 4)) == 0
    assert len(words_of_length(kronecker_graph(), 5)) == 2
    tri = triangle_graph()
    total = sum(len(words_of_length(tri, k)) for k in range(1, 7))
    assert total == 111


def test_words_of_length_cap():
    with pytest.raises(CapExceeded):
        words_of_length(triangle_graph(), 8, cap=10)


def test_longest_element_lengths():
    assert len(longest_element(NAMED_GRAPHS["a2"]())) == 3
    assert len(longest_element(NAMED_GRAPHS["a3"]())) == 6
    assert len(longest_element(NAMED_GRAPHS["a4"]())) == 10
    assert len(longest_element(NAMED_GRAPHS["d4"]())) == 12


def test_longest_element_is_reduced_and_maximal():
    g = NAMED_GRAPHS["a3"]()
    w0 = longest_element(g)
    assert is_reduced(g, w0)
    for i in g.vertices:
        assert not is_reduced(g, w0 + (i,))


def test_longest_element_of_parabolic():
    g = NAMED_GRAPHS["a3"]()
    assert len(longest_element(g, subset=(1, 3))) == 2


def test_infinite_parabolic_rejected():
    with pytest.raises(InfiniteParabolic):
        longest_element(triangle_graph())
    with pytest.raises(InfiniteParabolic):
        longest_element(kronecker_graph())


def test_enumerate_group_orders():
    assert len(enumerate_group(NAMED_GRAPHS["a2"](), 10)) == 6
    assert len(enumerate_group(NAMED_GRAPHS["a3"](), 30)) == 24
    with pytest.raises(CapExceeded):
        enumerate_group(triangle_graph(), 20)


def test_triangle_element_counts_by_length():
    # 1, 3, 6, 9, 12, 15 elements at lengths 0..5
    tri = triangle_graph()
    seen = {}
    for length in range(6):
        for w in words_of_length(tri, length):
            seen.setdefault(canonical_form(tri, w), length)
    by_length = {}
    for _, length in seen.items():
        by_length[length] = by_length.get(length, 0) + 1
    assert by_length == {0: 1, 1: 3, 2: 6, 3: 9, 4: 12, 5: 15}
