"""Finite continuations and the automorphism constructors: transvections,
local automorphisms of graph factors, angle-deformations, and the bounded
sharp-angled search. Every constructed map is verified by checking the
defining relations on exact matrices; nothing is accepted on faith.
"""

from collections import deque
from dataclasses import dataclass, field

from . import classify
from .diagram import INFINITY, DiagramError
from .geometry import (
    INFINITY as _INF,
    UNKNOWN,
    OracleError,
    is_reflection,
    order_of_product,
)


@dataclass(frozen=True)
class OddData:
    """odd(s), eodd(s) and the derived component data J_s, K_s."""

    odd: frozenset
    eodd: frozenset
    j_s: frozenset
    k_s: frozenset


def odd_data(matrix, s):
    """Trace the odd component of s, its finite-label closure, the component
    of the closure containing s, and the spherical components avoiding s."""
    matrix.index(s)
    odd = {s}
    queue = deque([s])
    while queue:
        x = queue.popleft()
        for y in matrix.vertices:
            if y in odd or y == x:
                continue
            m = matrix.label(x, y)
            if m != INFINITY and m % 2 == 1 and m >= 3:
                odd.add(y)
                queue.append(y)
    eodd = set(odd)
    for t in matrix.vertices:
        if t in eodd:
            continue
        if any(matrix.label(t, u) != INFINITY for u in odd):
            eodd.add(t)
    sub = matrix.subdiagram(eodd)
    j_s = frozenset()
    k_s = set()
    for comp in sub.components():
        if s in comp:
            j_s = comp
        elif classify.is_spherical(matrix, comp):
            k_s |= comp
    return OddData(frozenset(odd), frozenset(eodd), j_s, frozenset(k_s))


class FiniteContinuationUnavailable(DiagramError):
    """The closed formula needs a diagram without C3 or D4 subdiagrams."""


@dataclass(frozen=True)
class FiniteContinuation:
    """FC(s) described by a generator subset, with the branch taken and the
    reflection-rigid witness flag (K_s empty and J_s non-spherical)."""

    generators: frozenset
    spherical_branch: bool
    reflection_rigid: bool


def finite_continuation(matrix, s):
    if classify.has_subdiagram_c3_or_d4(matrix):
        raise FiniteContinuationUnavailable(
            "finite continuation formula unavailable: diagram has a C3 or D4 subdiagram"
        )
    data = odd_data(matrix, s)
    if classify.is_spherical(matrix, data.j_s):
        return FiniteContinuation(data.j_s | data.k_s, True, False)
    rigid = not data.k_s
    return FiniteContinuation(frozenset({s}) | data.k_s, False, rigid)


def graph_factors(matrix):
    """All spherical subsets J such that every outside vertex commutes with
    all of J or has infinite order against all of J."""
    verts = matrix.vertices
    n = len(verts)
    out = []
    for mask in range(1, 1 << n):
        J = frozenset(verts[i] for i in range(n) if mask >> i & 1)
        if not classify.is_spherical(matrix, J):
            continue
        ok = True
        for t in verts:
            if t in J:
                continue
            labels = {matrix.label(t, j) for j in J}
            if labels != {2} and labels != {INFINITY}:
                ok = False
                break
        if ok:
            out.append(J)
    out.sort(key=lambda J: (len(J), sorted(J)))
    return out


@dataclass(frozen=True)
class AutomorphismSpec:
    """Generator images plus the outcome of honest relation verification."""

    images: dict
    verified: bool
    failures: tuple = field(default=())


def verify_images(rep, images):
    """Check that every image is an involution and that every finite-label
    defining relation (including the commuting ones) holds on the images."""
    matrix = rep.diagram
    failures = []
    for v in matrix.vertices:
        if v not in images:
            failures.append(f"missing image for {v}")
    if failures:
        return AutomorphismSpec(dict(images), False, tuple(failures))
    for v in matrix.vertices:
        g = images[v]
        if not rep.multiply(g, g).is_identity():
            failures.append(f"image of {v} is not an involution")
    verts = matrix.vertices
    for i, u in enumerate(verts):
        for v in verts[i + 1 :]:
            m = matrix.label(u, v)
            if m == INFINITY:
                continue
            prod = rep.multiply(images[u], images[v])
            power = rep.power(prod, int(m))
            if not power.is_identity():
                failures.append(f"relation ({u}{v})^{int(m)} fails on images")
    return AutomorphismSpec(dict(images), not failures, tuple(failures))


def build_transvection(matrix, rep, s, z):
    """The involutory automorphism sending t -> t z for t in odd(s) and
    fixing the other generators, for z central in <K_s>."""
    from .geometry import center_of_spherical

    data = odd_data(matrix, s)
    if not z.is_identity():
        central = [] if not data.k_s else center_of_spherical(rep, data.k_s)
        if z.matrix not in {g.matrix for g in central}:
            raise OracleError(
                f"z is not a central involution of the spherical complement of odd({s})"
            )
    images = {}
    for v in matrix.vertices:
        if v in data.odd:
            images[v] = rep.multiply(rep.generators[v], z)
        else:
            images[v] = rep.generators[v]
    spec = verify_images(rep, images)
    failures = list(spec.failures)
    if not z.is_identity() and is_reflection(images[s]):
        failures.append(f"image of {s} is unexpectedly a reflection")
    return AutomorphismSpec(spec.images, not failures, tuple(failures))


def build_local_automorphism(matrix, rep, J, images):
    """Extension by the identity outside a graph factor J of a map given on J
    by elements of <J> (checked by word support)."""
    J = matrix.check_subset(J)
    if J not in graph_factors(matrix):
        raise OracleError(f"{sorted(J)} is not a graph factor")
    if set(images) != set(J):
        raise OracleError("images must be given exactly on the graph factor")
    for v, g in images.items():
        if g.word is None:
            raise OracleError(f"image of {v} needs a generator word for the support check")
        if not set(g.word) <= J:
            raise OracleError(f"image of {v} is not supported in the factor")
    full = {}
    for v in matrix.vertices:
        full[v] = images[v] if v in J else rep.generators[v]
    return verify_images(rep, full)


class AngleDeformationError(OracleError):
    """Hypotheses of the angle-deformation construction fail."""


def _finite_chain_set(matrix, start, Y):
    """Vertices of Y reachable from start through finite-label chains in Y."""
    reached = set()
    queue = deque(
        y for y in Y if matrix.label(start, y) != INFINITY
    )
    reached |= set(queue)
    while queue:
        x = queue.popleft()
        for y in Y:
            if y not in reached and matrix.label(x, y) != INFINITY:
                reached.add(y)
                queue.append(y)
    return frozenset(reached)


def build_angle_deformation(matrix, rep, s, t, x_word):
    """The reflection-preserving automorphism conjugating the t-side of a
    finite-label pair by a dihedral element x, defined when the two chain
    sets are disjoint."""
    m = matrix.label(s, t)
    if m == INFINITY or s == t:
        raise AngleDeformationError("angle-deformation needs a finite-label pair")
    if not set(x_word) <= {s, t}:
        raise AngleDeformationError("x must be a word in the pair")
    x = rep.element(x_word)
    x_inv = rep.element(tuple(reversed(x_word)))
    xtx = rep.multiply(rep.multiply(x, rep.generators[t]), x_inv)
    root = _reflection_root_checked(rep, xtx, (s, t))
    order = order_of_product(rep, rep.generators[s], xtx)
    if order != m:
        raise AngleDeformationError(
            f"<s, xtx^-1> is a proper subgroup: product order {order}, label {int(m)}"
        )
    pair = frozenset((s, t))
    Y = frozenset(matrix.vertices) - pair - matrix.perp(pair)
    y_s = _finite_chain_set(matrix, s, Y)
    y_t = _finite_chain_set(matrix, t, Y)
    if y_s & y_t:
        raise AngleDeformationError(
            f"chain sets intersect: {sorted(y_s & y_t)}"
        )
    images = {}
    moved = y_t | {t}
    for v in matrix.vertices:
        if v in moved:
            images[v] = rep.multiply(rep.multiply(x, rep.generators[v]), x_inv)
        else:
            images[v] = rep.generators[v]
    spec = verify_images(rep, images)
    failures = list(spec.failures)
    for v, g in images.items():
        if not is_reflection(g):
            failures.append(f"image of {v} is not a reflection")
    return AutomorphismSpec(spec.images, not failures, tuple(failures))


def _reflection_root_checked(rep, g, span_pair):
    from .geometry import reflection_root

    if not is_reflection(g):
        raise AngleDeformationError("conjugate of t is not a reflection")
    root = reflection_root(g)
    allowed = {rep.diagram.index(v) for v in span_pair}
    for i, c in enumerate(root):
        if i not in allowed and not c.is_zero():
            raise AngleDeformationError("conjugate root leaves the rank-2 span")
    return root


@dataclass(frozen=True)
class SharpAngledResult:
    kind: str  # "yes" | "no" | "unknown"
    witness: tuple = None
    vacuous: bool = False


def is_sharp_angled_pair(matrix, rep, r, r2, length_bound=8, order_bound=10000):
    """Bounded search for w with {w r w^-1, w r2 w^-1} inside the generator
    set. Pairs of infinite product order are vacuously sharp-angled; the only
    No-certificate is the product-order obstruction (no generator pair has
    the same order)."""
    from .geometry import ball_of_radius

    for g in (r, r2):
        if not is_reflection(g):
            raise OracleError("sharp-angled test requires reflections")
    order = order_of_product(rep, r, r2, bound=order_bound)
    if order == _INF:
        return SharpAngledResult("yes", witness=(), vacuous=True)
    if order is UNKNOWN:
        return SharpAngledResult("unknown")
    verts = matrix.vertices
    pair_orders = {
        matrix.label(u, v) for i, u in enumerate(verts) for v in verts[i + 1 :]
    }
    if order != 1 and order not in pair_orders:
        return SharpAngledResult("no")
    generator_matrices = {g.matrix for g in rep.generators.values()}
    for w in ball_of_radius(rep, length_bound):
        w_inv = rep.element(tuple(reversed(w.word)))
        c1 = rep.multiply(rep.multiply(w, r), w_inv)
        if c1.matrix not in generator_matrices:
            continue
        c2 = rep.multiply(rep.multiply(w, r2), w_inv)
        if c2.matrix in generator_matrices:
            return SharpAngledResult("yes", witness=w.word)
    return SharpAngledResult("unknown")
