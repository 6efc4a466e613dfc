"""Recognition of spherical (finite-type) diagrams and the longest-element
diagram automorphism of each spherical type.

Recognition is table/shape-driven against the classified irreducible types
A_n, B_n (= C_n), D_n, E6-E8, F4, H3, H4 and I2(m); no positive-definiteness
testing. The opposition table is hardcoded and oracle-verified in the tests.
"""

import math
from dataclasses import dataclass

from .diagram import INFINITY, DiagramError


@dataclass(frozen=True)
class SphericalType:
    """One classified irreducible spherical type.

    family is one of A, BC, D, E6, E7, E8, F4, H3, H4, I2; rank-2 types with
    labels 3 and 4 are normalized into the A and BC families.
    """

    family: str
    rank: int
    parameter: int = 0  # the label m, only for I2

    def __str__(self):
        if self.family == "I2":
            return f"I2({self.parameter})"
        if self.family == "BC":
            return f"B{self.rank}"
        if self.family in ("A", "D"):
            return f"{self.family}{self.rank}"
        return self.family

    def group_order(self):
        f = self.family
        n = self.rank
        if f == "A":
            return math.factorial(n + 1)
        if f == "BC":
            return 2**n * math.factorial(n)
        if f == "D":
            return 2 ** (n - 1) * math.factorial(n)
        if f == "I2":
            return 2 * self.parameter
        return {"E6": 51840, "E7": 2903040, "E8": 696729600,
                "F4": 1152, "H3": 120, "H4": 14400}[f]


def _arm_lengths(matrix, J, branch):
    """Lengths of the simple chains leaving the unique degree-3 vertex."""
    arms = []
    for first in sorted(matrix.neighbors(branch) & J):
        length = 0
        prev, cur = branch, first
        while True:
            length += 1
            nxt = [u for u in matrix.neighbors(cur) & J if u != prev]
            if not nxt:
                break
            if len(nxt) > 1:
                return None
            prev, cur = cur, nxt[0]
        arms.append(length)
    return sorted(arms)


def _path_order(matrix, J):
    """Vertices of a path-shaped subdiagram in chain order, or None."""
    J = frozenset(J)
    degrees = {v: len(matrix.neighbors(v) & J) for v in J}
    ends = sorted(v for v, d in degrees.items() if d == 1)
    if len(ends) != 2 or any(d > 2 for d in degrees.values()):
        return None
    order = [ends[0]]
    prev = None
    while len(order) < len(J):
        nxt = [u for u in matrix.neighbors(order[-1]) & J if u != prev]
        if len(nxt) != 1:
            return None
        prev = order[-1]
        order.append(nxt[0])
    return order


def recognize_irreducible(matrix):
    """The classified spherical type of a connected diagram, or None."""
    comps = matrix.components()
    if len(comps) != 1:
        raise DiagramError("recognize_irreducible requires a connected diagram")
    n = matrix.rank
    verts = matrix.vertices
    if n == 1:
        return SphericalType("A", 1)
    labels = [m for _, _, m in matrix.edges()]
    if any(m == INFINITY for m in labels):
        return None
    if n == 2:
        m = labels[0]
        if m == 3:
            return SphericalType("A", 2)
        if m == 4:
            return SphericalType("BC", 2)
        return SphericalType("I2", 2, m)
    # Rank >= 3: every spherical irreducible diagram is a tree with at most
    # one branch vertex and at most one label > 3.
    if len(labels) != n - 1:
        return None
    big = sorted(m for m in labels if m > 3)
    degrees = {v: len(matrix.neighbors(v)) for v in verts}
    branches = [v for v, d in degrees.items() if d >= 3]
    if any(degrees[v] > 3 for v in verts) or len(branches) > 1:
        return None
    if not big:
        if not branches:
            return SphericalType("A", n)
        arms = _arm_lengths(matrix, frozenset(verts), branches[0])
        if arms is None:
            return None
        if arms == [1, 1, n - 3]:
            return SphericalType("D", n)
        if n in (6, 7, 8) and arms == [1, 2, n - 4]:
            return SphericalType({6: "E6", 7: "E7", 8: "E8"}[n], n)
        return None
    if branches or len(big) > 1:
        return None
    order = _path_order(matrix, verts)
    if order is None:
        return None
    chain = [matrix.label(order[i], order[i + 1]) for i in range(n - 1)]
    if chain[0] != big[0]:
        chain.reverse()
    if big[0] == 4:
        if chain[0] == 4:
            return SphericalType("BC", n)
        if n == 4 and chain == [3, 4, 3]:
            return SphericalType("F4", 4)
        return None
    if big[0] == 5 and chain[0] == 5:
        if n == 3:
            return SphericalType("H3", 3)
        if n == 4:
            return SphericalType("H4", 4)
    return None


def spherical_components(matrix, J):
    """Per-component recognized types of M_J, or None if any is not spherical."""
    sub = matrix.subdiagram(J)
    out = []
    for comp in sub.components():
        t = recognize_irreducible(sub.subdiagram(comp))
        if t is None:
            return None
        out.append((comp, t))
    return out


def is_spherical(matrix, J):
    """True iff every irreducible component of M_J is classified spherical."""
    return spherical_components(matrix, J) is not None


def spherical_order(matrix, J):
    """|W_J| for spherical J."""
    comps = spherical_components(matrix, J)
    if comps is None:
        raise DiagramError(f"subset {sorted(J)} is not spherical")
    order = 1
    for _, t in comps:
        order *= t.group_order()
    return order


def _component_opposition(matrix, comp, ctype):
    comp = frozenset(comp)
    identity = {v: v for v in comp}
    family = ctype.family
    if family == "A" and ctype.rank >= 2:
        order = _path_order(matrix, comp) if ctype.rank > 2 else sorted(comp)
        return {order[i]: order[-1 - i] for i in range(len(order))}
    if family == "I2" and ctype.parameter % 2 == 1:
        a, b = sorted(comp)
        return {a: b, b: a}
    if family == "D" and ctype.rank % 2 == 1:
        branch = next(v for v in comp if len(matrix.neighbors(v) & comp) == 3)
        tips = sorted(
            v
            for v in matrix.neighbors(branch) & comp
            if len(matrix.neighbors(v) & comp) == 1
        )
        perm = dict(identity)
        perm[tips[0]], perm[tips[1]] = tips[1], tips[0]
        return perm
    if family == "E6":
        branch = next(v for v in comp if len(matrix.neighbors(v) & comp) == 3)
        long_ends = [
            v
            for v in comp
            if len(matrix.neighbors(v) & comp) == 1 and branch not in matrix.neighbors(v)
        ]
        # Flip the two length-2 arms; the branch vertex, the short arm tip
        # and nothing else stay put.
        perm = dict(identity)
        for end in long_ends:
            mid = next(iter(matrix.neighbors(end) & comp))
            other_end = next(e for e in long_ends if e != end)
            other_mid = next(iter(matrix.neighbors(other_end) & comp))
            perm[end] = other_end
            perm[mid] = other_mid
        return perm
    return identity


def opposition_involution(matrix, J):
    """The permutation j -> rho_J j rho_J of a spherical subset, assembled per
    irreducible component from the fixed table."""
    comps = spherical_components(matrix, J)
    if comps is None:
        raise DiagramError(f"subset {sorted(J)} is not spherical")
    perm = {}
    for comp, ctype in comps:
        perm.update(_component_opposition(matrix, comp, ctype))
    return perm


def _induced_type_on_triple(matrix, triple):
    labels = sorted(
        (matrix.label(triple[0], triple[1]),
         matrix.label(triple[0], triple[2]),
         matrix.label(triple[1], triple[2])),
        key=lambda m: (m == INFINITY, m),
    )
    return tuple(labels)


def has_subdiagram_a3_c3_h3(matrix):
    """Cor. 18 precondition test: any 3-subset inducing A3, C3=B3 or H3."""
    verts = matrix.vertices
    n = len(verts)
    shapes = {(2, 3, 3), (2, 3, 4), (2, 3, 5)}
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                if _induced_type_on_triple(matrix, (verts[i], verts[j], verts[k])) in shapes:
                    return True
    return False


def has_subdiagram_c3_or_d4(matrix):
    """Precondition test for the finite-continuation formula: any induced
    C3 (= B3) 3-subset or D4 4-subset."""
    verts = matrix.vertices
    n = len(verts)
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                if _induced_type_on_triple(matrix, (verts[i], verts[j], verts[k])) == (2, 3, 4):
                    return True
    for quad_center in verts:
        tips = [
            v
            for v in verts
            if v != quad_center and matrix.label(quad_center, v) == 3
        ]
        if len(tips) < 3:
            continue
        m = len(tips)
        for a in range(m):
            for b in range(a + 1, m):
                for c in range(b + 1, m):
                    t = (tips[a], tips[b], tips[c])
                    if (
                        matrix.label(t[0], t[1]) == 2
                        and matrix.label(t[0], t[2]) == 2
                        and matrix.label(t[1], t[2]) == 2
                    ):
                        return True
    return False
