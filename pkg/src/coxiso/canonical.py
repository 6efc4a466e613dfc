"""Canonical relabeling and label-preserving isomorphism for diagrams.

The canonical form is found by backtracking over vertex orderings, pruned by
iterated color refinement on the edge-labelled graph and by automorphisms
discovered along the way; the winner is the ordering whose adjacency encoding
is lexicographically least. Diagrams are small, so correctness beats
asymptotics here.
"""

from .diagram import INFINITY, CoxeterMatrix


def _label_key(m):
    # Sort finite labels before infinity.
    return (1, 0) if m == INFINITY else (0, m)


def _refine(matrix, colors):
    """Iterated color refinement; colors is a dict vertex -> int."""
    verts = matrix.vertices
    while True:
        signature = {}
        for v in verts:
            sig = sorted(
                (_label_key(matrix.label(v, u)), colors[u]) for u in verts if u != v
            )
            signature[v] = (colors[v], tuple(sig))
        ordered = sorted(set(signature.values()))
        ranks = {sig: i for i, sig in enumerate(ordered)}
        new_colors = {v: ranks[signature[v]] for v in verts}
        if new_colors == colors:
            return colors
        colors = new_colors


def _cells(matrix, colors):
    by_color = {}
    for v in matrix.vertices:
        by_color.setdefault(colors[v], []).append(v)
    return [sorted(by_color[c]) for c in sorted(by_color)]


def _encode(matrix, order):
    pos = {v: i for i, v in enumerate(order)}
    out = []
    for j in range(len(order)):
        for i in range(j):
            out.append(_label_key(matrix.label(order[i], order[j])))
    return tuple(out)


def _search(matrix):
    """All-orderings backtracking; returns the lexicographically least encoding
    together with its ordering."""
    n = matrix.rank
    verts = matrix.vertices
    best = {"encoding": None, "order": None}
    automorphisms = []

    def candidate_cell(colors, placed):
        remaining_cells = [
            [v for v in cell if v not in placed] for cell in _cells(matrix, colors)
        ]
        for cell in remaining_cells:
            if cell:
                return cell
        return None

    def recurse(colors, prefix):
        if len(prefix) == n:
            enc = _encode(matrix, prefix)
            if best["encoding"] is None or enc < best["encoding"]:
                best["encoding"] = enc
                best["order"] = tuple(prefix)
            elif enc == best["encoding"]:
                ref = best["order"]
                automorphisms.append({prefix[i]: ref[i] for i in range(n)})
            return
        placed = set(prefix)
        cell = candidate_cell(colors, placed)
        tried = []
        for v in cell:
            if _in_orbit_of_tried(v, tried, prefix):
                continue
            tried.append(v)
            # Individualize v, then refine.
            new_colors = dict(colors)
            new_colors[v] = -len(prefix) - 1
            new_colors = _refine(matrix, new_colors)
            recurse(new_colors, prefix + [v])

    def _in_orbit_of_tried(v, tried, prefix):
        if not tried:
            return False
        fixing = [g for g in automorphisms if all(g[p] == p for p in prefix)]
        if not fixing:
            return False
        orbit = set(tried)
        frontier = list(tried)
        while frontier:
            x = frontier.pop()
            for g in fixing:
                y = g[x]
                if y not in orbit:
                    orbit.add(y)
                    frontier.append(y)
                if v in orbit:
                    return True
        return v in orbit

    initial = _refine(matrix, {v: 0 for v in verts})
    recurse(initial, [])
    return best["order"]


def canonical_name(i, width):
    return f"v{i:0{width}d}"


def canonical_form(matrix):
    """A canonically relabeled copy of the diagram plus the witnessing
    bijection original -> canonical; permutation-invariant and idempotent."""
    n = matrix.rank
    if n == 0:
        return CoxeterMatrix(()), {}
    order = _search(matrix)
    width = max(2, len(str(n - 1)))
    iso = {v: canonical_name(i, width) for i, v in enumerate(order)}
    return matrix.relabel(iso), iso


def canonical_key(matrix):
    """Hashable canonical identity of the diagram (used for dedup)."""
    canon, _ = canonical_form(matrix)
    return canon


def is_label_preserving(matrix_a, matrix_b, mapping):
    """Check that mapping is a label-preserving bijection between the two
    diagrams, by exhaustive comparison."""
    if set(mapping) != set(matrix_a.vertices):
        return False
    if sorted(mapping.values()) != sorted(matrix_b.vertices):
        return False
    verts = matrix_a.vertices
    for i, u in enumerate(verts):
        for v in verts[i + 1 :]:
            if matrix_a.label(u, v) != matrix_b.label(mapping[u], mapping[v]):
                return False
    return True


def find_isomorphism(matrix_a, matrix_b):
    """Some label-preserving bijection between the diagrams, or None.

    The result is re-verified by direct label comparison before returning.
    """
    if matrix_a.rank != matrix_b.rank:
        return None
    if matrix_a.label_multiset() != matrix_b.label_multiset():
        return None
    canon_a, iso_a = canonical_form(matrix_a)
    canon_b, iso_b = canonical_form(matrix_b)
    if canon_a != canon_b:
        return None
    inverse_b = {c: v for v, c in iso_b.items()}
    mapping = {v: inverse_b[iso_a[v]] for v in matrix_a.vertices}
    if not is_label_preserving(matrix_a, matrix_b, mapping):
        raise AssertionError("canonical forms matched but mapping failed verification")
    return mapping
