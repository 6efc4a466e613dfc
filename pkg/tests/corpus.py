"""Shared test fixtures: diagram corpora, naive reference implementations
used as independent oracles, and a permutation model of the symmetric group.
"""

import itertools
import random

from coxiso.canonical import canonical_form
from coxiso.classify import is_spherical
from coxiso.diagram import INFINITY, CoxeterMatrix

VERTEX_POOL = ("a", "b", "c", "d", "e", "f", "g", "h")


def diagram_from_labels(n, labels):
    """Build a rank-n diagram from labels listed pair-by-pair in
    itertools.combinations order."""
    verts = VERTEX_POOL[:n]
    mapping = {}
    for pair, m in zip(itertools.combinations(verts, 2), labels):
        mapping[pair] = m
    return CoxeterMatrix(verts, mapping)


def all_connected_diagrams(max_rank, label_choices):
    """Every connected diagram of rank <= max_rank with the given labels,
    deduplicated by canonical form; returns the canonical representatives."""
    seen = {}
    for n in range(1, max_rank + 1):
        pair_count = n * (n - 1) // 2
        for labels in itertools.product(label_choices, repeat=pair_count):
            matrix = diagram_from_labels(n, labels)
            if len(matrix.components()) != 1:
                continue
            canon, _ = canonical_form(matrix)
            if canon not in seen:
                seen[canon] = canon
    return list(seen.values())


def random_diagram(rng, rank, label_choices):
    labels = [rng.choice(label_choices) for _ in range(rank * (rank - 1) // 2)]
    return diagram_from_labels(rank, labels)


def random_connected_diagram(rng, rank, label_choices, attempts=200):
    for _ in range(attempts):
        matrix = random_diagram(rng, rank, label_choices)
        if len(matrix.components()) == 1:
            return matrix
    raise AssertionError("could not sample a connected diagram")


def random_permutation(rng, matrix, prefix="p"):
    names = [f"{prefix}{i}" for i in range(matrix.rank)]
    rng.shuffle(names)
    return dict(zip(matrix.vertices, names))


# -- naive reference implementations (definition-direct) -----------------


def naive_perp(matrix, J):
    return frozenset(
        k for k in matrix.vertices
        if k not in J and all(matrix.label(k, j) == 2 for j in J)
    )


def naive_admissible_pairs(matrix):
    """Every nontrivial admissible pair by brute force over all (J, K)
    subset pairs, checking AD1 and AD2 literally."""
    verts = matrix.vertices
    n = len(verts)
    out = set()
    for j_mask in range(1, 1 << n):
        J = frozenset(verts[i] for i in range(n) if j_mask >> i & 1)
        if not is_spherical(matrix, J):
            continue
        perp = naive_perp(matrix, J)
        rest = [v for v in verts if v not in J and v not in perp]
        for k_mask in range(1, 1 << len(rest)):
            K = frozenset(rest[i] for i in range(len(rest)) if k_mask >> i & 1)
            L = frozenset(rest) - K
            if not L:
                continue
            if all(matrix.label(k, l) == INFINITY for k in K for l in L):
                out.add((J, K))
    return out


def naive_graph_factors(matrix):
    verts = matrix.vertices
    n = len(verts)
    out = set()
    for mask in range(1, 1 << n):
        J = frozenset(verts[i] for i in range(n) if mask >> i & 1)
        if not is_spherical(matrix, J):
            continue
        if all(
            all(matrix.label(t, j) == 2 for j in J)
            or all(matrix.label(t, j) == INFINITY for j in J)
            for t in verts if t not in J
        ):
            out.add(J)
    return out


# -- permutation model of A_n = Sym(n+1) ----------------------------------


def perm_compose(p, q):
    """(p*q)(x) = p(q(x)) with permutations as tuples."""
    return tuple(p[q[i]] for i in range(len(p)))


def perm_order(p):
    identity = tuple(range(len(p)))
    power = p
    order = 1
    while power != identity:
        power = perm_compose(power, p)
        order += 1
    return order


def sym_transposition(n_points, i):
    """The adjacent transposition (i, i+1) on n_points points."""
    p = list(range(n_points))
    p[i], p[i + 1] = p[i + 1], p[i]
    return tuple(p)


def perm_from_word(n_points, word, generator_index):
    p = tuple(range(n_points))
    for v in word:
        p = perm_compose(p, sym_transposition(n_points, generator_index[v]))
    return p


def seeded_rng(seed):
    return random.Random(seed)
