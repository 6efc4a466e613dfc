"""The two elementary rewriting moves on diagrams: twists by admissible pairs
and pseudo-transposition reductions, with detection of all applicable moves
and oracle-backed label computation where the combinatorics alone cannot
decide.
"""

import re
from collections import deque
from dataclasses import dataclass, field

from . import classify
from .cyclotomic import DEFAULT_RING_CAP
from .diagram import INFINITY, CoxeterMatrix, DiagramError
from .geometry import (
    UNKNOWN,
    OracleError,
    build_rep,
    element_order,
    longest_element,
    order_of_product,
)

DEFAULT_RANK_CAP = 16


class MoveError(ValueError):
    """A move does not apply to the given diagram."""


@dataclass(frozen=True)
class AdmissiblePair:
    """An S-admissible pair (J, K) with the derived remainder L."""

    J: frozenset
    K: frozenset
    L: frozenset

    @property
    def nontrivial(self):
        return bool(self.K) and bool(self.L)

    def __str__(self):
        return (
            "twist J={%s} K={%s}" % (",".join(sorted(self.J)), ",".join(sorted(self.K)))
        )


@dataclass(frozen=True)
class PseudoTransposition:
    """A generator tau whose unique finite label is 2(2k+1) at t."""

    tau: str
    t: str
    k: int

    @property
    def n(self):
        return 2 * (2 * self.k + 1)

    def __str__(self):
        return f"pseudo-transposition tau={self.tau} t={self.t} n={self.n}"


@dataclass(frozen=True)
class MoveRecord:
    """One replayable rewriting step; vertex_map sends output vertices to the
    input vertices they came from (fresh reduction names map to tau)."""

    kind: str  # "twist" | "reduction"
    payload: object
    vertex_map: dict = field(default_factory=dict)
    u_name: str = None
    rho_name: str = None

    def to_line(self):
        if self.kind == "twist":
            p = self.payload
            return "twist J={%s} K={%s}" % (
                ",".join(sorted(p.J)),
                ",".join(sorted(p.K)),
            )
        return "reduce tau=%s -> u=%s rho=%s" % (
            self.payload.tau,
            self.u_name,
            self.rho_name,
        )

    def to_json(self):
        if self.kind == "twist":
            return {
                "kind": "twist",
                "J": sorted(self.payload.J),
                "K": sorted(self.payload.K),
            }
        return {
            "kind": "reduction",
            "tau": self.payload.tau,
            "t": self.payload.t,
            "k": self.payload.k,
            "u": self.u_name,
            "rho": self.rho_name,
        }


def _twist_record(pair, vertices):
    return MoveRecord("twist", pair, {v: v for v in vertices})


def _reduction_record(pt, vertices, u_name, rho_name):
    vmap = {v: v for v in vertices if v != pt.tau}
    vmap[u_name] = pt.tau
    vmap[rho_name] = pt.tau
    return MoveRecord("reduction", pt, vmap, u_name=u_name, rho_name=rho_name)


_TWIST_RE = re.compile(r"^twist J=\{([^}]*)\} K=\{([^}]*)\}$")
_REDUCE_RE = re.compile(r"^reduce tau=(\S+) -> u=(\S+) rho=(\S+)$")


def parse_move_line(line):
    """Parse the one-line move format into (kind, fields) for replay."""
    line = line.strip()
    m = _TWIST_RE.match(line)
    if m:
        J = frozenset(x for x in m.group(1).split(",") if x)
        K = frozenset(x for x in m.group(2).split(",") if x)
        return ("twist", J, K)
    m = _REDUCE_RE.match(line)
    if m:
        return ("reduction", m.group(1), m.group(2), m.group(3))
    raise MoveError(f"unparseable move line: {line!r}")


# -- admissible pairs ---------------------------------------------------


def validate_admissible_pair(matrix, J, K):
    J = matrix.check_subset(J)
    K = matrix.check_subset(K)
    if not J:
        raise MoveError("J must be nonempty")
    if not classify.is_spherical(matrix, J):
        raise MoveError(f"J={sorted(J)} is not spherical (AD1)")
    perp = matrix.perp(J)
    if K & (J | perp):
        raise MoveError("K meets J or its orthogonal complement (AD1)")
    L = frozenset(matrix.vertices) - J - perp - K
    for k in K:
        for l in L:
            if matrix.label(k, l) != INFINITY:
                raise MoveError(f"finite label between K vertex {k} and L vertex {l} (AD2)")
    return AdmissiblePair(J, K, L)


def _finite_label_components(matrix, subset):
    """Components of the subset under the relation label != infinity."""
    subset = set(subset)
    out = []
    while subset:
        start = min(subset)
        comp = {start}
        queue = deque([comp and start])
        while queue:
            x = queue.popleft()
            for y in list(subset):
                if y not in comp and matrix.label(x, y) != INFINITY:
                    comp.add(y)
                    queue.append(y)
        subset -= comp
        out.append(frozenset(comp))
    out.sort(key=sorted)
    return out


def admissible_pairs(matrix, rank_cap=DEFAULT_RANK_CAP, include_trivial=False):
    """All nontrivial admissible pairs: J over spherical subsets, K over
    unions of finite-label components of the rest (so AD2 holds exactly)."""
    n = matrix.rank
    if n > rank_cap:
        raise MoveError(
            f"rank {n} exceeds the enumeration cap {rank_cap}; raise rank_cap to proceed"
        )
    verts = matrix.vertices
    pairs = []
    subsets = sorted(
        (frozenset(verts[i] for i in range(n) if mask >> i & 1) for mask in range(1, 1 << n)),
        key=lambda J: (len(J), sorted(J)),
    )
    for J in subsets:
        if not classify.is_spherical(matrix, J):
            continue
        perp = matrix.perp(J)
        rest = frozenset(verts) - J - perp
        comps = _finite_label_components(matrix, rest)
        options = range(1 << len(comps)) if include_trivial else range(1, (1 << len(comps)) - 1)
        if include_trivial and not comps:
            options = range(1)
        for mask in options:
            K = frozenset().union(*(comps[i] for i in range(len(comps)) if mask >> i & 1)) if mask else frozenset()
            L = rest - K
            pair = AdmissiblePair(J, K, L)
            if pair.nontrivial or include_trivial:
                pairs.append(pair)
    return pairs


def apply_twist(matrix, pair, hybrid=False, rep=None, ring_cap=DEFAULT_RING_CAP,
                allow_large_ring=False, bound=10000):
    """Twist the diagram by the admissible pair: labels between J and L move
    through the opposition involution of J; everything else is unchanged
    (K-L labels are infinite by AD2 and stay so; --hybrid recomputes them
    with the oracle)."""
    pair = validate_admissible_pair(matrix, pair.J, pair.K)
    sigma = classify.opposition_involution(matrix, pair.J)
    changes = {}
    for j in pair.J:
        for l in pair.L:
            changes[(j, l)] = matrix.label(sigma[j], l)
    if hybrid and pair.K and pair.L:
        if rep is None:
            rep = build_rep(matrix, ring_cap=ring_cap, allow_large_ring=allow_large_ring)
        rho = longest_element(rep, pair.J)
        for k in pair.K:
            for l in pair.L:
                conj = rep.multiply(rep.multiply(rho, rep.generators[l]), rho)
                order = order_of_product(rep, rep.generators[k], conj, bound=bound)
                if order is UNKNOWN:
                    raise OracleError(
                        f"oracle could not decide the twisted order of ({k},{l})"
                    )
                changes[(k, l)] = order if order == INFINITY else int(order)
    out = matrix.with_labels(changes)
    return out, _twist_record(pair, matrix.vertices)


# -- pseudo-transpositions and reductions --------------------------------


def pseudo_transpositions(matrix):
    """All vertices satisfying PT1 and PT2, sorted by vertex name."""
    out = []
    for tau in matrix.vertices:
        witnesses = []
        ok = True
        for s in matrix.vertices:
            if s == tau:
                continue
            m = matrix.label(tau, s)
            if m == 2 or m == INFINITY:
                continue
            if m % 2 == 0 and (m // 2) % 2 == 1 and m >= 6:
                witnesses.append((s, (m // 2 - 1) // 2))
            else:
                ok = False
                break
        if not ok or len(witnesses) != 1:
            continue
        t, k = witnesses[0]
        if all(
            matrix.label(s, t) == 2
            for s in matrix.vertices
            if s not in (tau, t) and matrix.label(tau, s) == 2
        ):
            out.append(PseudoTransposition(tau, t, k))
    return out


def _fresh_name(base, taken):
    name = base
    counter = 2
    while name in taken:
        name = f"{base}{counter}"
        counter += 1
    return name


def apply_reduction(matrix, pt, rep=None, ring_cap=DEFAULT_RING_CAP,
                    allow_large_ring=False, bound=10000):
    """Replace tau by the two reflections tau t tau and (tau t)^(n/2); the
    forced labels follow the dihedral structure and PT2, and labels to the
    infinity-neighbors of tau are computed by the oracle, never guessed."""
    candidates = [p for p in pseudo_transpositions(matrix) if p.tau == pt.tau]
    if not candidates or candidates[0] != pt:
        raise MoveError(f"{pt} is not a pseudo-transposition of the diagram")
    tau, t = pt.tau, pt.t
    taken = set(matrix.vertices)
    u_name = _fresh_name(f"{tau}_u", taken)
    taken.add(u_name)
    rho_name = _fresh_name(f"{tau}_rho", taken)
    survivors = [v for v in matrix.vertices if v != tau]
    labels = {}
    for i, a in enumerate(survivors):
        for b in survivors[i + 1 :]:
            labels[(a, b)] = matrix.label(a, b)
    labels[(t, u_name)] = 2 * pt.k + 1
    labels[(t, rho_name)] = 2
    labels[(u_name, rho_name)] = 2
    infinity_neighbors = [
        s for s in survivors if s != t and matrix.label(tau, s) == INFINITY
    ]
    for s in survivors:
        if s == t or s in infinity_neighbors:
            continue
        labels[(s, u_name)] = 2
        labels[(s, rho_name)] = 2
    if infinity_neighbors:
        if rep is None:
            rep = build_rep(matrix, ring_cap=ring_cap, allow_large_ring=allow_large_ring)
        u_elt = rep.element((tau, t, tau))
        rho_elt = rep.element((tau, t) * (pt.n // 2))
        for s in infinity_neighbors:
            order_u = order_of_product(rep, rep.generators[s], u_elt, bound=bound)
            if order_u is UNKNOWN:
                raise OracleError(f"oracle could not decide the order of {s}*{tau}{t}{tau}")
            order_rho = element_order(rep, rep.multiply(rep.generators[s], rho_elt))
            labels[(s, u_name)] = order_u if order_u == INFINITY else int(order_u)
            labels[(s, rho_name)] = order_rho if order_rho == INFINITY else int(order_rho)
    out = CoxeterMatrix(survivors + [u_name, rho_name], labels)
    return out, _reduction_record(pt, matrix.vertices, u_name, rho_name)


def reduced_reduction(matrix, rep_opts=None):
    """Apply reductions (lexicographically least tau first) until none remain."""
    opts = rep_opts or {}
    trace = []
    current = matrix
    for _ in range(1000):
        pts = pseudo_transpositions(current)
        if not pts:
            return current, trace
        out, record = apply_reduction(current, pts[0], **opts)
        trace.append(record)
        current = out
    raise MoveError("reduction did not terminate within 1000 steps")


def replay_move(matrix, record, rep_opts=None):
    """Re-derive the output of a recorded move on the given diagram."""
    opts = rep_opts or {}
    if record.kind == "twist":
        out, _ = apply_twist(matrix, record.payload, **opts)
        return out
    out, new_record = apply_reduction(matrix, record.payload, **opts)
    if (new_record.u_name, new_record.rho_name) != (record.u_name, record.rho_name):
        raise MoveError("replayed reduction produced different fresh names")
    return out


# -- oracle soundness for twists -----------------------------------------


def twisted_reflection_set(matrix, pair, rep):
    """The generator matrices of the twisted set {J, J_perp, K, rho L rho}."""
    rho = longest_element(rep, pair.J)
    out = {}
    for v in matrix.vertices:
        if v in pair.L:
            out[v] = rep.multiply(rep.multiply(rho, rep.generators[v]), rho)
        else:
            out[v] = rep.generators[v]
    return out


def verify_twist_soundness(matrix, pair, rep=None, ring_cap=DEFAULT_RING_CAP,
                           allow_large_ring=False, bound=10000):
    """Lemma-6-style check: the combinatorial twist output must agree with
    order_of_product on the actual twisted reflection set, entry for entry.
    Returns the list of mismatches (empty means sound)."""
    if rep is None:
        rep = build_rep(matrix, ring_cap=ring_cap, allow_large_ring=allow_large_ring)
    out, _ = apply_twist(matrix, pair)
    elements = twisted_reflection_set(matrix, pair, rep)
    mismatches = []
    verts = matrix.vertices
    for i, u in enumerate(verts):
        for v in verts[i + 1 :]:
            expected = out.label(u, v)
            got = order_of_product(rep, elements[u], elements[v], bound=bound)
            if got is UNKNOWN or got != expected:
                mismatches.append((u, v, expected, got))
    return mismatches
