"""Quiver of a reduced word.

Positions of the word are the vertices (1-based ints). Arrows come from two
sources: each pair of consecutive occurrences of the same letter gets one
arrow from the later position back to the earlier, and for every graph edge
{i, j} the restriction of the word to letters i and j splits into maximal
blocks, with d_ij arrows from the last position of each block to the last
position of the following block. Optionally the final occurrence of every
letter is frozen.
"""

from .coxeter import is_reduced
from .errors import NotReduced
from .quiver import MultiQuiver


def _check(graph, word):
    word = tuple(word)
    if not is_reduced(graph, word):
        raise NotReduced(f"word {word} is not reduced")
    return word


def _arrow_pairs(graph, word):
    k = len(word)
    pairs = {}

    def add(s, t, m):
        pairs[(s, t)] = pairs.get((s, t), 0) + m

    # consecutive occurrences of one letter
    last_seen = {}
    for p in range(1, k + 1):
        letter = word[p - 1]
        if letter in last_seen:
            add(p, last_seen[letter], 1)
        last_seen[letter] = p

    # block arrows along each edge of the graph
    for a, b, d in graph.edges():
        sub = [p for p in range(1, k + 1) if word[p - 1] in (a, b)]
        blocks = []
        for p in sub:
            if blocks and word[p - 1] == word[blocks[-1][-1] - 1]:
                blocks[-1].append(p)
            else:
                blocks.append([p])
        for cur, nxt in zip(blocks, blocks[1:]):
            add(cur[-1], nxt[-1], d)
    return pairs


def last_occurrences(word):
    last = {}
    for p, letter in enumerate(word, 1):
        last[letter] = p
    return frozenset(last.values())


def build_q(graph, word, freeze_last=False):
    """Quiver on the positions of a reduced word."""
    word = _check(graph, word)
    frozen = last_occurrences(word) if freeze_last else frozenset()
    return MultiQuiver(
        range(1, len(word) + 1), frozen, _arrow_pairs(graph, word)
    )


def build_q_underline(graph, word):
    """Same quiver with the final occurrence of each letter deleted."""
    word = _check(graph, word)
    drop = last_occurrences(word)
    keep = [p for p in range(1, len(word) + 1) if p not in drop]
    arrows = {
        (s, t): m
        for (s, t), m in _arrow_pairs(graph, word).items()
        if s not in drop and t not in drop
    }
    return MultiQuiver(keep, frozenset(), arrows)
