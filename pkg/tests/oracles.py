"""Independent reference computations used only by the tests."""

from __future__ import annotations

import itertools

from cablejones.laurent import LaurentPoly

LOOP = LaurentPoly({2: -1, -2: -1})


def braid_closure_pd(word, strands):
    """Planar diagram of a braid closure, plus its writhe.

    ``word`` lists generators ``+i`` / ``-i`` (1-based). A positive generator
    sends the left strand over the right one. Each crossing is returned as a
    4-tuple of arc labels, counterclockwise from the incoming under-arc.
    """
    labels = list(range(strands))
    fresh = strands
    crossings = []
    for g in word:
        i = abs(g) - 1
        x, y = labels[i], labels[i + 1]
        x2, y2 = fresh, fresh + 1
        fresh += 2
        if g > 0:
            # under: SE -> NW; over: SW -> NE
            crossings.append((y, x2, y2, x))
        else:
            # under: SW -> NE; over: SE -> NW
            crossings.append((x, y, x2, y2))
        labels[i], labels[i + 1] = y2, x2
    # closing the braid identifies top arcs with bottom arcs
    ident = {labels[k]: k for k in range(strands)}
    crossings = [tuple(ident.get(a, a) for a in c) for c in crossings]
    writhe = sum(1 if g > 0 else -1 for g in word)
    return crossings, writhe


def _loops(pairs):
    parent = {}

    def find(a):
        parent.setdefault(a, a)
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for a, b in pairs:
        parent[find(a)] = find(b)
    return len({find(a) for a in parent})


def kauffman_bracket(crossings):
    """State sum ``sum_S A^(#A - #B) d^(loops - 1)``, ``d = -A^2 - A^-2``."""
    total = LaurentPoly()
    for state in itertools.product((0, 1), repeat=len(crossings)):
        pairs = []
        for (a, b, c, d), s in zip(crossings, state):
            pairs += [(a, b), (c, d)] if s == 0 else [(a, d), (b, c)]
        n_a = state.count(0)
        term = LaurentPoly.monomial(n_a - (len(state) - n_a))
        for _ in range(_loops(pairs) - 1):
            term = term * LOOP
        total = total + term
    return total


def normalized_bracket(word, strands):
    """``(-A^3)^(-writhe) <D>``: the writhe-normalized bracket, an isotopy invariant."""
    pd, w = braid_closure_pd(word, strands)
    sign = -1 if w % 2 else 1
    return kauffman_bracket(pd) * LaurentPoly.monomial(-3 * w, sign)
