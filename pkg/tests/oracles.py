"""Independent reference implementations used by the tests.

Nothing here imports the lattice code under test; partitions are handled as
plain sets of pairs.
"""

from itertools import product


def bell_triangle(n):
    """Bell numbers by the Aitken triangle."""
    row = [1]
    for _ in range(n - 1):
        nxt = [row[-1]]
        for x in row:
            nxt.append(nxt[-1] + x)
        row = nxt
    return row[-1]


def pairs_of_labels(labels):
    n = len(labels)
    return frozenset((x, y) for x in range(n) for y in range(n) if labels[x] == labels[y])


def transitive_hull(rel, n):
    rel = set(rel)
    changed = True
    while changed:
        changed = False
        for (a, b), (c, d) in product(list(rel), list(rel)):
            if b == c and (a, d) not in rel:
                rel.add((a, d))
                changed = True
    return frozenset(rel | {(x, x) for x in range(n)})


def join_pairs(p, q, n):
    return transitive_hull(p | q, n)


def count_quasiorders(n):
    """Reflexive relations equal to their own transitive hull, by Warshall."""
    off = [(i, j) for i in range(n) for j in range(n) if i != j]
    total = 0
    for bits in product((False, True), repeat=len(off)):
        rel = [[i == j for j in range(n)] for i in range(n)]
        for (i, j), b in zip(off, bits):
            rel[i][j] = b
        closed = [row[:] for row in rel]
        for k in range(n):
            for i in range(n):
                if closed[i][k]:
                    for j in range(n):
                        if closed[k][j]:
                            closed[i][j] = True
        total += closed == rel
    return total
