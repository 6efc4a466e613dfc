"""Coxeter matrices/diagrams: construction, validation, parsing and basic
subdiagram operations.

A Coxeter matrix over a finite vertex set assigns to every unordered pair of
distinct vertices an order m >= 2 or infinity; the diagonal is implicitly 1.
Only labels >= 3 (or infinity) are stored -- an absent pair means label 2,
mirroring the usual diagram convention where edges exist exactly for m >= 3.
"""

import math
from collections import deque

INFINITY = math.inf

Label = "int | float"  # an integer >= 2, or INFINITY


class DiagramError(ValueError):
    """Invalid diagram data (construction or semantic validation)."""


class DiagramParseError(DiagramError):
    """Syntax or semantic error in a diagram file, with position info."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)


def _check_label(value):
    if value == INFINITY:
        return INFINITY
    if isinstance(value, bool) or not isinstance(value, int):
        raise DiagramError(f"label must be an integer >= 2 or infinity, got {value!r}")
    if value < 2:
        raise DiagramError(f"label must be >= 2, got {value}")
    return value


class CoxeterMatrix:
    """Immutable edge-labelled diagram over named vertices.

    Vertices are opaque strings, stored sorted (the normal form used for
    equality, hashing and serialization). Labels equal to 2 are dropped at
    construction; explicit labels must be >= 2 or INFINITY.
    """

    __slots__ = ("_vertices", "_index", "_labels", "_hash")

    def __init__(self, vertices, labels=None):
        verts = tuple(sorted(vertices))
        if len(set(verts)) != len(verts):
            raise DiagramError("duplicate vertex names")
        for v in verts:
            if not isinstance(v, str) or not v:
                raise DiagramError(f"vertex names must be non-empty strings, got {v!r}")
        index = {v: i for i, v in enumerate(verts)}
        stored = {}
        for pair, value in (labels or {}).items():
            u, v = pair
            if u not in index:
                raise DiagramError(f"unknown vertex {u!r} in label map")
            if v not in index:
                raise DiagramError(f"unknown vertex {v!r} in label map")
            if u == v:
                raise DiagramError(f"self-pair {u!r} in label map")
            value = _check_label(value)
            key = frozenset((u, v))
            if key in stored and stored[key] != value:
                raise DiagramError(f"conflicting labels for pair {u!r},{v!r}")
            if value != 2:
                stored[key] = value
        object.__setattr__(self, "_vertices", verts)
        object.__setattr__(self, "_index", index)
        object.__setattr__(self, "_labels", stored)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("CoxeterMatrix is immutable")

    @property
    def vertices(self):
        return self._vertices

    @property
    def rank(self):
        return len(self._vertices)

    def index(self, v):
        try:
            return self._index[v]
        except KeyError:
            raise DiagramError(f"unknown vertex {v!r}") from None

    def __contains__(self, v):
        return v in self._index

    def label(self, u, v):
        """The order m(u, v); 1 on the diagonal, 2 for unstored pairs."""
        if u not in self._index:
            raise DiagramError(f"unknown vertex {u!r}")
        if v not in self._index:
            raise DiagramError(f"unknown vertex {v!r}")
        if u == v:
            return 1
        return self._labels.get(frozenset((u, v)), 2)

    def edges(self):
        """Stored edges as (u, v, label) with u < v, sorted."""
        out = []
        for key, value in self._labels.items():
            u, v = sorted(key)
            out.append((u, v, value))
        out.sort()
        return out

    def check_subset(self, J):
        J = frozenset(J)
        for v in J:
            if v not in self._index:
                raise DiagramError(f"unknown vertex {v!r}")
        return J

    def subdiagram(self, J):
        """Restriction of the matrix to the vertex subset J."""
        J = self.check_subset(J)
        labels = {}
        for key, value in self._labels.items():
            if key <= J:
                u, v = key
                labels[(u, v)] = value
        return CoxeterMatrix(J, labels)

    def perp(self, J):
        """Vertices outside J whose label to every element of J is 2."""
        J = self.check_subset(J)
        out = set()
        for k in self._vertices:
            if k in J:
                continue
            if all(self.label(k, j) == 2 for j in J):
                out.add(k)
        return frozenset(out)

    def neighbors(self, v):
        """Vertices joined to v by a stored edge (label >= 3 or infinity)."""
        self.index(v)
        out = set()
        for key in self._labels:
            if v in key:
                out |= key
        out.discard(v)
        return out

    def components(self):
        """Connected components of the diagram, ordered by least vertex index."""
        seen = set()
        parts = []
        for start in self._vertices:
            if start in seen:
                continue
            comp = {start}
            queue = deque([start])
            while queue:
                x = queue.popleft()
                for y in self.neighbors(x):
                    if y not in comp:
                        comp.add(y)
                        queue.append(y)
            seen |= comp
            parts.append(frozenset(comp))
        return parts

    def relabel(self, mapping):
        """Copy with vertices renamed by the given bijection."""
        if set(mapping) != set(self._vertices):
            raise DiagramError("relabel mapping must cover exactly the vertex set")
        new_names = list(mapping.values())
        if len(set(new_names)) != len(new_names):
            raise DiagramError("relabel mapping is not injective")
        labels = {}
        for key, value in self._labels.items():
            u, v = key
            labels[(mapping[u], mapping[v])] = value
        return CoxeterMatrix(new_names, labels)

    def with_labels(self, changes):
        """Copy with the labels of the given pairs replaced (2 deletes)."""
        labels = {tuple(sorted(k)): v for k, v in self._labels.items()}
        for pair, value in changes.items():
            u, v = pair
            self.index(u), self.index(v)
            if u == v:
                raise DiagramError("cannot set a diagonal label")
            labels[tuple(sorted((u, v)))] = _check_label(value)
        return CoxeterMatrix(self._vertices, labels)

    def label_multiset(self):
        """Sorted labels over all unordered vertex pairs (2s included)."""
        n = self.rank
        stored = sorted(self._labels.values(), key=lambda m: (m == INFINITY, m))
        twos = n * (n - 1) // 2 - len(stored)
        return tuple([2] * twos + stored)

    def is_right_angled(self):
        return all(m == INFINITY for m in self._labels.values())

    def __eq__(self, other):
        if not isinstance(other, CoxeterMatrix):
            return NotImplemented
        return self._vertices == other._vertices and self._labels == other._labels

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self._vertices, frozenset(self._labels.items())))
            object.__setattr__(self, "_hash", h)
        return h

    def __repr__(self):
        edges = ", ".join(f"{u}-{v}:{'inf' if m == INFINITY else m}" for u, v, m in self.edges())
        return f"CoxeterMatrix({list(self._vertices)}; {edges})"


def parse_diagram(text):
    """Parse the line-oriented diagram format into a CoxeterMatrix.

    Format: optional '# comment' lines, one 'vertices <name>+' line, then
    zero or more 'edge <u> <v> <label>' lines where label is an integer >= 3
    or 'inf'. Unmentioned pairs get label 2.
    """
    vertices = None
    edges = {}
    seen_pairs = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        keyword = tokens[0]
        if keyword == "vertices":
            if vertices is not None:
                raise DiagramParseError("duplicate 'vertices' line", lineno, 1)
            names = tokens[1:]
            if not names:
                raise DiagramParseError("empty vertices line", lineno, len("vertices") + 1)
            dupes = {v for v in names if names.count(v) > 1}
            if dupes:
                raise DiagramParseError(f"duplicate vertex {sorted(dupes)[0]!r}", lineno, 1)
            vertices = names
        elif keyword == "edge":
            if vertices is None:
                raise DiagramParseError("'edge' before 'vertices' line", lineno, 1)
            if len(tokens) != 4:
                raise DiagramParseError("expected 'edge <u> <v> <label>'", lineno, 1)
            _, u, v, label_tok = tokens
            col = raw.index(label_tok, raw.index(v) + len(v)) + 1
            for name in (u, v):
                if name not in vertices:
                    raise DiagramParseError(f"unknown vertex {name!r} in edge", lineno, 1)
            if u == v:
                raise DiagramParseError(f"self-loop on vertex {u!r}", lineno, 1)
            if label_tok == "inf":
                label = INFINITY
            else:
                try:
                    label = int(label_tok)
                except ValueError:
                    raise DiagramParseError(f"bad label {label_tok!r}", lineno, col) from None
                if label < 3:
                    raise DiagramParseError(
                        f"explicit edge label must be >= 3 or 'inf', got {label}", lineno, col
                    )
            key = frozenset((u, v))
            if key in seen_pairs:
                raise DiagramParseError(f"duplicate edge {u} {v}", lineno, 1)
            seen_pairs.add(key)
            edges[(u, v)] = label
        else:
            raise DiagramParseError(f"unknown directive {keyword!r}", lineno, 1)
    if vertices is None:
        raise DiagramParseError("missing 'vertices' line", 1, 1)
    return CoxeterMatrix(vertices, edges)


def serialize_diagram(matrix):
    """Inverse of parse_diagram: normalized, deterministic text form."""
    if matrix.rank == 0:
        raise DiagramError("cannot serialize an empty diagram")
    lines = ["vertices " + " ".join(matrix.vertices)]
    for u, v, m in matrix.edges():
        lines.append(f"edge {u} {v} {'inf' if m == INFINITY else m}")
    return "\n".join(lines) + "\n"
