"""Exact geometric representation of a Coxeter system: the ground truth for
orders, longest elements, reflections and group enumeration.

The Gram form has B(a_i, a_j) = -cos(pi/m_ij) (exactly, in the cyclotomic
ring of the diagram) and B = -1 for infinite labels; each generator acts as
the reflection x -> x - 2B(a_i, x) a_i. All group-element matrices have
algebraic-integer entries, so the hot paths stay denominator-free.
"""

import math
from dataclasses import dataclass

from . import classify
from .cyclotomic import DEFAULT_RING_CAP, get_ring, modulus_for_labels
from .diagram import INFINITY, DiagramError


class OracleError(ValueError):
    """Precondition violation or verification failure in the oracle."""


class _Unknown:
    def __repr__(self):
        return "UNKNOWN"


UNKNOWN = _Unknown()


class GroupElement:
    """An exact matrix of the geometric representation, optionally with a
    generator word that evaluates to it."""

    __slots__ = ("rep", "matrix", "word", "_hash", "_root", "_is_involution")

    def __init__(self, rep, matrix, word=None):
        self.rep = rep
        self.matrix = matrix
        self.word = tuple(word) if word is not None else None
        self._hash = None
        self._root = -1
        self._is_involution = None

    def __eq__(self, other):
        if not isinstance(other, GroupElement):
            return NotImplemented
        return self.rep is other.rep and self.matrix == other.matrix

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.matrix)
        return self._hash

    def is_identity(self):
        return self.matrix == self.rep.identity.matrix

    def __mul__(self, other):
        return self.rep.multiply(self, other)

    def __repr__(self):
        w = " ".join(self.word) if self.word else "?"
        return f"GroupElement(word={w!r}, rank={len(self.matrix)})"


class GeometricRep:
    """Exact reflection representation of W(M) over the diagram's ring."""

    def __init__(self, matrix, ring_cap=DEFAULT_RING_CAP, allow_large_ring=False):
        self.diagram = matrix
        labels = [m for _, _, m in matrix.edges() if m != INFINITY]
        modulus = modulus_for_labels(labels, cap=ring_cap, allow_large=allow_large_ring)
        self.ring = get_ring(modulus)
        self.n = matrix.rank
        verts = matrix.vertices
        ring = self.ring
        half = [[None] * self.n for _ in range(self.n)]
        for i, u in enumerate(verts):
            for j, v in enumerate(verts):
                m = matrix.label(u, v)
                if i == j:
                    half[i][j] = ring.one
                elif m == INFINITY:
                    half[i][j] = ring.from_int(-1)
                else:
                    c = ring.two_cos(m)
                    half[i][j] = ring.make([-x for x in c.num], 2 * c.den)
        self.gram = tuple(tuple(row) for row in half)
        # generator i acts as I - e_i r_i with r_i[j] = 2 B(a_i, a_j)
        self._rows = []
        for i in range(self.n):
            row = []
            for j in range(self.n):
                b = self.gram[i][j]
                row.append(ring.make([2 * x for x in b.num], b.den))
            self._rows.append(tuple(row))
        ident = tuple(
            tuple(ring.one if i == j else ring.zero for j in range(self.n))
            for i in range(self.n)
        )
        self.identity = GroupElement(self, ident, ())
        self.generators = {}
        for i, v in enumerate(verts):
            mat = [list(r) for r in ident]
            for j in range(self.n):
                mat[i][j] = (ring.one if i == j else ring.zero) - self._rows[i][j]
            g = GroupElement(self, tuple(tuple(r) for r in mat), (v,))
            g._is_involution = True
            self.generators[v] = g
        self._rho_cache = {}
        self._torsion_exponent = None
        self._sanity_check()

    def _sanity_check(self):
        ring = self.ring
        verts = self.diagram.vertices
        # generators are involutions preserving B
        for i, v in enumerate(verts):
            g = self.generators[v]
            if self.multiply(g, g).matrix != self.identity.matrix:
                raise OracleError(f"generator {v} is not an involution")
            for a in range(self.n):
                for b in range(a, self.n):
                    ga = self._column(g.matrix, a)
                    gb = self._column(g.matrix, b)
                    if self.bilinear(ga, gb) != self.gram[a][b]:
                        raise OracleError(f"generator {v} does not preserve B")
        # finite braid relations hold with the exact order
        for i, u in enumerate(verts):
            for j in range(i + 1, self.n):
                v = verts[j]
                m = self.diagram.label(u, v)
                if m == INFINITY:
                    continue
                c = self.gram[i][j]
                order = _plane_rotation_order(c * c, ring.one, int(m) + 1)
                if order != m:
                    raise OracleError(
                        f"braid relation failed for {u},{v}: got order {order}, want {m}"
                    )

    # -- matrix helpers ------------------------------------------------

    def _column(self, matrix, j):
        return tuple(matrix[i][j] for i in range(self.n))

    def bilinear(self, x, y):
        total = self.ring.zero
        for a, xa in enumerate(x):
            if xa.is_zero():
                continue
            row = self.gram[a]
            for b, yb in enumerate(y):
                if not yb.is_zero():
                    total = total + xa * row[b] * yb
        return total

    def multiply(self, g, h):
        a, b = g.matrix, h.matrix
        n = self.n
        zero = self.ring.zero
        out = []
        for i in range(n):
            arow = a[i]
            row = []
            for j in range(n):
                total = zero
                for k in range(n):
                    aik = arow[k]
                    if not aik.is_zero():
                        bkj = b[k][j]
                        if not bkj.is_zero():
                            total = total + aik * bkj
                row.append(total)
            out.append(tuple(row))
        word = None
        if g.word is not None and h.word is not None:
            word = g.word + h.word
        return GroupElement(self, tuple(out), word)

    def right_multiply_generator(self, g, v):
        """g * s_v via the rank-one structure of the generator."""
        i = self.diagram.index(v)
        row = self._rows[i]
        n = self.n
        mat = []
        for a in range(n):
            ga = g.matrix[a]
            col = ga[i]
            if col.is_zero():
                mat.append(ga)
                continue
            new_row = list(ga)
            for b in range(n):
                rb = row[b]
                if not rb.is_zero():
                    new_row[b] = new_row[b] - col * rb
            mat.append(tuple(new_row))
        word = g.word + (v,) if g.word is not None else None
        return GroupElement(self, tuple(mat), word)

    def element(self, word):
        """Product of the generators named in the word; empty word -> identity."""
        g = self.identity
        for v in word:
            if v not in self.generators:
                raise DiagramError(f"unknown vertex {v!r}")
            g = self.right_multiply_generator(g, v)
        return g

    def power(self, g, k):
        result = self.identity
        base = GroupElement(self, g.matrix, None)
        while k:
            if k & 1:
                result = self.multiply(result, base)
            k >>= 1
            if k:
                base = self.multiply(base, base)
        return result

    def apply(self, g, vector):
        n = self.n
        out = []
        for i in range(n):
            total = self.ring.zero
            row = g.matrix[i]
            for j in range(n):
                rj = row[j]
                if not rj.is_zero() and not vector[j].is_zero():
                    total = total + rj * vector[j]
            out.append(total)
        return tuple(out)

    def basis_vector(self, v):
        i = self.diagram.index(v)
        return tuple(
            self.ring.one if j == i else self.ring.zero for j in range(self.n)
        )

    def torsion_exponent(self):
        """lcm of |W_J| over the spherical subsets J of the diagram; every
        finite-order element's order divides it (finite subgroups are
        conjugate into spherical parabolics)."""
        if self._torsion_exponent is None:
            verts = self.diagram.vertices
            value = 1
            for mask in range(1, 1 << len(verts)):
                J = frozenset(
                    verts[i] for i in range(len(verts)) if mask >> i & 1
                )
                if classify.is_spherical(self.diagram, J):
                    value = math.lcm(value, classify.spherical_order(self.diagram, J))
            self._torsion_exponent = value
        return self._torsion_exponent


def build_rep(matrix, ring_cap=DEFAULT_RING_CAP, allow_large_ring=False):
    return GeometricRep(matrix, ring_cap=ring_cap, allow_large_ring=allow_large_ring)


# -- reflections -------------------------------------------------------


def _is_involution(g):
    if g._is_involution is None:
        rep = g.rep
        g._is_involution = rep.multiply(g, g).matrix == rep.identity.matrix
    return g._is_involution


def _raw_root(g):
    """Unnormalized -1 eigenvector if rank(g - I) == 1, else None; cached."""
    if g._root != -1:
        return g._root
    rep = g.rep
    n = rep.n
    one = rep.ring.one
    diff = [
        [g.matrix[i][j] - (one if i == j else rep.ring.zero) for j in range(n)]
        for i in range(n)
    ]
    root = None
    pivot = None
    for j in range(n):
        col = tuple(diff[i][j] for i in range(n))
        if any(not c.is_zero() for c in col):
            root = col
            pivot = next(i for i in range(n) if not col[i].is_zero())
            first_col = j
            break
    if root is None:
        g._root = None  # identity
        return None
    for j in range(first_col + 1, n):
        col = tuple(diff[i][j] for i in range(n))
        factor = col[pivot]
        for i in range(n):
            if root[i] * factor != col[i] * root[pivot]:
                g._root = None  # rank >= 2
                return None
    g._root = root
    return root


def is_reflection(g):
    """True iff g is an involution whose fixed space has codimension 1."""
    return _raw_root(g) is not None and _is_involution(g)


def reflection_root(g):
    """The root of a reflection, scaled so its first nonzero coordinate is 1."""
    root = _raw_root(g)
    if root is None or not _is_involution(g):
        raise OracleError("element is not a reflection")
    lead = next(c for c in root if not c.is_zero())
    inv = lead.inverse()
    return tuple(c * inv for c in root)


def _plane_rotation_order(n_u, d_u, bound):
    """Order of a plane rotation with cos^2(theta) = n_u/d_u, via the exact
    Chebyshev trace recurrence t_{k+1} = mu t_k - t_{k-1}, mu = 4u - 2,
    integer-tracked as P_k = t_k * d_u^k. Returns the least k <= bound with
    t_k = 2, or None."""
    ring = n_u.ring
    a = 4 * n_u - 2 * d_u  # mu * d_u
    p_prev, p_cur = ring.two, a  # P_0, P_1
    d_pow = d_u
    d_sq = d_u * d_u
    for k in range(1, bound + 1):
        if p_cur == 2 * d_pow:
            return k
        p_prev, p_cur = p_cur, a * p_cur - d_sq * p_prev
        d_pow = d_pow * d_u
    return None


def order_of_product(rep, r, r2, bound=10000):
    """Order of r*r2 for two reflections: the standard dihedral criterion
    |B(root, root')| >= 1 certifies Infinite; otherwise the product rotation
    is iterated (on the invariant plane of the two roots) up to the bound."""
    for g in (r, r2):
        if not is_reflection(g):
            raise OracleError("order_of_product requires reflections")
    if r.matrix == r2.matrix:
        return 1
    delta = _raw_root(r)
    delta2 = _raw_root(r2)
    caa = rep.bilinear(delta, delta)
    cbb = rep.bilinear(delta2, delta2)
    cab = rep.bilinear(delta, delta2)
    if cab.is_zero():
        return 2
    n_u = cab * cab
    d_u = caa * cbb
    if (n_u - d_u).sign() >= 0:  # |cos| >= 1
        return INFINITY
    order = _plane_rotation_order(n_u, d_u, bound)
    return order if order is not None else UNKNOWN


def element_order(rep, g, bound=None):
    """Exact order of an arbitrary element: finite iff g^T = I for the
    diagram's torsion exponent T, then minimized over the divisors of T."""
    if g.is_identity():
        return 1
    t = rep.torsion_exponent()
    if not rep.power(g, t).is_identity():
        return INFINITY
    order = t
    for p in _prime_factors(t):
        while order % p == 0 and rep.power(g, order // p).is_identity():
            order //= p
    return order


def _prime_factors(n):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# -- longest elements and centers --------------------------------------


def _is_positive_vector(coords):
    """All coordinates >= 0 and at least one > 0 (exact signs)."""
    positive = False
    for c in coords:
        s = c.sign()
        if s < 0:
            return False
        if s > 0:
            positive = True
    return positive


def longest_element(rep, J):
    """rho_J for spherical J, built greedily: while some simple root of J is
    sent to a positive vector, ascend by that generator."""
    J = rep.diagram.check_subset(J)
    key = frozenset(J)
    cached = rep._rho_cache.get(key)
    if cached is not None:
        return cached
    if not classify.is_spherical(rep.diagram, J):
        raise OracleError(f"subset {sorted(J)} is not spherical")
    ordered = sorted(J)
    w = rep.identity
    while True:
        advanced = False
        for v in ordered:
            i = rep.diagram.index(v)
            column = rep._column(w.matrix, i)  # w(alpha_v)
            if _is_positive_vector(column):
                w = rep.right_multiply_generator(w, v)
                advanced = True
                break
        if not advanced:
            break
    rep._rho_cache[key] = w
    return w


def opposition_by_oracle(rep, J):
    """The permutation j -> rho_J j rho_J computed by honest conjugation;
    raises if some conjugate is not a generator of J."""
    rho = longest_element(rep, J)
    perm = {}
    for v in sorted(J):
        conj = rep.multiply(rep.multiply(rho, rep.generators[v]), rho)
        for u in sorted(J):
            if conj.matrix == rep.generators[u].matrix:
                perm[v] = u
                break
        else:
            raise OracleError(f"rho-conjugate of {v} is not a generator")
    return perm


def center_of_spherical(rep, J):
    """All central involutions of <J> for spherical J: products of rho_C over
    nonempty subsets of the irreducible components with central rho."""
    J = rep.diagram.check_subset(J)
    comps = classify.spherical_components(rep.diagram, J)
    if comps is None:
        raise OracleError(f"subset {sorted(J)} is not spherical")
    central = []
    for comp, _ in sorted(comps, key=lambda item: sorted(item[0])):
        perm = classify.opposition_involution(rep.diagram, comp)
        if all(perm[v] == v for v in comp):
            central.append(longest_element(rep, comp))
    out = []
    for mask in range(1, 1 << len(central)):
        g = rep.identity
        for i, rho in enumerate(central):
            if mask >> i & 1:
                g = rep.multiply(g, rho)
        out.append(g)
    return out


# -- enumeration --------------------------------------------------------


@dataclass
class EnumerationResult:
    elements: list
    truncated: bool

    def __len__(self):
        return len(self.elements)


def enumerate_group(rep, element_cap=2000):
    """BFS over generator multiplication with exact-matrix dedup until the
    group closes or the cap is exceeded (reported in-band)."""
    seen = {rep.identity.matrix: rep.identity}
    frontier = [rep.identity]
    verts = rep.diagram.vertices
    while frontier:
        next_frontier = []
        for g in frontier:
            for v in verts:
                h = rep.right_multiply_generator(g, v)
                if h.matrix not in seen:
                    if len(seen) >= element_cap:
                        return EnumerationResult(list(seen.values()), True)
                    seen[h.matrix] = h
                    next_frontier.append(h)
        frontier = next_frontier
    return EnumerationResult(list(seen.values()), False)


def ball_of_radius(rep, radius):
    """Distinct group elements with word length <= radius, in BFS order."""
    seen = {rep.identity.matrix: rep.identity}
    frontier = [rep.identity]
    verts = rep.diagram.vertices
    for _ in range(radius):
        next_frontier = []
        for g in frontier:
            for v in verts:
                h = rep.right_multiply_generator(g, v)
                if h.matrix not in seen:
                    seen[h.matrix] = h
                    next_frontier.append(h)
        frontier = next_frontier
    return list(seen.values())
