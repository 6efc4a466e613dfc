"""Twist-equivalence closure over diagrams and the end-to-end isomorphism
decision: reduce both inputs, search the twist classes bidirectionally with
canonical-form dedup, and emit a replay-verified certificate or a definite
refusal. Verdicts are unconditional exactly when a reduced side has no A3,
C3 or H3 subdiagram.
"""

import hashlib
import json
from dataclasses import dataclass, field

from . import classify
from .canonical import canonical_form, find_isomorphism, is_label_preserving
from .diagram import serialize_diagram
from .moves import (
    MoveError,
    admissible_pairs,
    apply_twist,
    reduced_reduction,
    replay_move,
    validate_admissible_pair,
)

DEFAULT_CLASS_CAP = 10000


@dataclass
class ClassMember:
    matrix: object
    canonical: object
    iso_to_canonical: dict
    parent_key: object = None
    move: object = None


@dataclass
class TwistClass:
    """BFS closure of a diagram under nontrivial twists, deduplicated by
    canonical form; tree edges record parent, move and canonical witness."""

    seeds: list
    members: dict  # canonical matrix -> ClassMember
    truncated: bool

    def matrices(self):
        return [m.matrix for m in self.members.values()]

    def __len__(self):
        return len(self.members)

    def path_to(self, key):
        """Moves from the seed to the member with the given canonical key."""
        moves = []
        while self.members[key].parent_key is not None:
            member = self.members[key]
            moves.append(member.move)
            key = member.parent_key
        moves.reverse()
        return moves

    def verify_replay(self, rep_opts=None):
        """Replay the tree edges for every member and compare exactly."""
        for key, member in self.members.items():
            current = self.seeds[0]
            for move in self.path_to(key):
                current = replay_move(current, move, rep_opts)
            if current != member.matrix:
                return False
            canon, _ = canonical_form(current)
            if canon != member.canonical:
                return False
        return True


def _expand(matrix, rank_cap, hybrid):
    for pair in admissible_pairs(matrix, rank_cap=rank_cap):
        out, record = apply_twist(matrix, pair, hybrid=hybrid)
        yield out, record


def twist_class(matrix, cap=DEFAULT_CLASS_CAP, rank_cap=16, hybrid=False):
    """BFS closure under apply_twist over all nontrivial admissible pairs."""
    canon, iso = canonical_form(matrix)
    members = {canon: ClassMember(matrix, canon, iso)}
    frontier = [canon]
    truncated = False
    while frontier and not truncated:
        next_frontier = []
        for key in frontier:
            source = members[key].matrix
            for out, record in _expand(source, rank_cap, hybrid):
                out_canon, out_iso = canonical_form(out)
                if out_canon in members:
                    continue
                if len(members) >= cap:
                    truncated = True
                    break
                members[out_canon] = ClassMember(out, out_canon, out_iso, key, record)
                next_frontier.append(out_canon)
            if truncated:
                break
        frontier = next_frontier
    return TwistClass([matrix], members, truncated)


@dataclass
class Certificate:
    """Replayable move sequence plus the final vertex bijection onto the
    target's reduced reduction."""

    moves: list
    final_iso: dict

    def to_json(self):
        return {
            "moves": [m.to_json() for m in self.moves],
            "final_iso": dict(sorted(self.final_iso.items())),
        }

    def to_lines(self):
        return [m.to_line() for m in self.moves]


def replay_certificate(source, certificate, rep_opts=None):
    """Apply the certificate's moves to the source diagram and return the
    final diagram relabeled along final_iso."""
    current = source
    for move in certificate.moves:
        current = replay_move(current, move, rep_opts)
    return current.relabel(certificate.final_iso)


@dataclass
class EquivalenceResult:
    status: str  # "equivalent" | "not_equivalent" | "unknown"
    certificate: Certificate = None
    reason: str = None


def twist_equivalent(matrix_a, matrix_b, cap=DEFAULT_CLASS_CAP, rank_cap=16, hybrid=False):
    """Decide twist-equivalence by bidirectional BFS on canonical forms,
    after fast rejection on rank and label multiset. Returns a certificate
    for the equivalent case; "unknown" only on truncation."""
    if matrix_a.rank != matrix_b.rank:
        return EquivalenceResult("not_equivalent", reason="ranks differ")
    if matrix_a.label_multiset() != matrix_b.label_multiset():
        return EquivalenceResult("not_equivalent", reason="label multisets differ")

    sides = []
    for seed in (matrix_a, matrix_b):
        canon, iso = canonical_form(seed)
        sides.append({
            "members": {canon: ClassMember(seed, canon, iso)},
            "frontier": [canon],
            "truncated": False,
        })

    def meeting_key():
        fwd, bwd = sides
        common = fwd["members"].keys() & bwd["members"].keys()
        return next(iter(common), None)

    key = meeting_key()
    while key is None:
        active = [s for s in sides if s["frontier"] and not s["truncated"]]
        if not active:
            break
        side = min(active, key=lambda s: len(s["frontier"]))
        next_frontier = []
        for member_key in side["frontier"]:
            source = side["members"][member_key].matrix
            for out, record in _expand(source, rank_cap, hybrid):
                out_canon, out_iso = canonical_form(out)
                if out_canon in side["members"]:
                    continue
                if len(side["members"]) >= cap:
                    side["truncated"] = True
                    break
                side["members"][out_canon] = ClassMember(
                    out, out_canon, out_iso, member_key, record
                )
                next_frontier.append(out_canon)
            if side["truncated"]:
                break
        side["frontier"] = next_frontier
        key = meeting_key()
        if key is None and any(
            not s["frontier"] and not s["truncated"] for s in sides
        ):
            # one side closed without meeting: the classes are disjoint
            return EquivalenceResult("not_equivalent", reason="twist classes are disjoint")

    if key is None:
        if any(s["truncated"] for s in sides):
            return EquivalenceResult(
                "unknown", reason=f"twist class truncated at cap {cap}"
            )
        return EquivalenceResult("not_equivalent", reason="twist classes are disjoint")

    fwd, bwd = sides
    fwd_tc = TwistClass([matrix_a], fwd["members"], fwd["truncated"])
    bwd_tc = TwistClass([matrix_b], bwd["members"], bwd["truncated"])
    moves = list(fwd_tc.path_to(key))
    current = fwd["members"][key].matrix
    # The meeting member seen from both sides, linked through canonical names.
    iso_fwd = fwd["members"][key].iso_to_canonical
    iso_bwd = bwd["members"][key].iso_to_canonical
    inv_bwd = {c: v for v, c in iso_bwd.items()}
    phi = {v: inv_bwd[iso_fwd[v]] for v in iso_fwd}
    phi_inv = {w: v for v, w in phi.items()}
    # Undo the backward path from the meeting point (twists are involutions),
    # with each pair translated through phi; phi stays an isomorphism at
    # every step, so it is the certificate's final bijection.
    for record in reversed(list(bwd_tc.path_to(key))):
        pair = record.payload
        translated = validate_admissible_pair(
            current,
            frozenset(phi_inv[x] for x in pair.J),
            frozenset(phi_inv[x] for x in pair.K),
        )
        current, rec = apply_twist(current, translated, hybrid=hybrid)
        moves.append(rec)
    if not is_label_preserving(current, matrix_b, phi):
        raise AssertionError("assembled certificate failed label verification")
    return EquivalenceResult("equivalent", Certificate(moves, phi))


def _apply_moves(matrix, moves):
    current = matrix
    for record in moves:
        current = replay_move(current, record)
    return current


@dataclass
class Verdict:
    """Outcome of the isomorphism decision, with the Cor.-18 scope flag and
    which reduced side satisfied its precondition."""

    answer: str  # isomorphic | not_isomorphic | conditionally_isomorphic |
    #              conditionally_not_isomorphic | inconclusive
    unconditional: bool
    certificate: Certificate = None
    reason: str = None
    precondition_first: bool = False
    precondition_second: bool = False
    source_reduction: list = field(default_factory=list)
    target_reduction: list = field(default_factory=list)

    @property
    def exit_code(self):
        if self.answer == "isomorphic":
            return 0
        if self.answer == "not_isomorphic":
            return 1
        return 2

    def to_json(self):
        return {
            "answer": self.answer,
            "unconditional": self.unconditional,
            "reason": self.reason,
            "certificate": self.certificate.to_json() if self.certificate else None,
            "precondition_a3_c3_h3_free": {
                "first": self.precondition_first,
                "second": self.precondition_second,
            },
        }


def cor18_precondition(matrix):
    """No subdiagram of type A3, C3 or H3."""
    return not classify.has_subdiagram_a3_c3_h3(matrix)


def decide_isomorphism(matrix_a, matrix_b, cap=DEFAULT_CLASS_CAP, rank_cap=16,
                       hybrid=False, rep_opts=None):
    """Reduce both diagrams, decide twist-equivalence of the reductions, and
    assemble a replay-verified certificate. The verdict is unconditional when
    a reduced side passes the A3/C3/H3-freeness precondition."""
    opts = rep_opts or {}
    reduced_a, trace_a = reduced_reduction(matrix_a, opts)
    reduced_b, trace_b = reduced_reduction(matrix_b, opts)
    pre_a = cor18_precondition(reduced_a)
    pre_b = cor18_precondition(reduced_b)
    unconditional = pre_a or pre_b
    result = twist_equivalent(reduced_a, reduced_b, cap=cap, rank_cap=rank_cap, hybrid=hybrid)
    if result.status == "unknown":
        return Verdict(
            "inconclusive", False, reason=result.reason,
            precondition_first=pre_a, precondition_second=pre_b,
            source_reduction=trace_a, target_reduction=trace_b,
        )
    if result.status == "not_equivalent":
        answer = "not_isomorphic" if unconditional else "conditionally_not_isomorphic"
        return Verdict(
            answer, unconditional, reason=result.reason,
            precondition_first=pre_a, precondition_second=pre_b,
            source_reduction=trace_a, target_reduction=trace_b,
        )
    certificate = Certificate(list(trace_a) + list(result.certificate.moves),
                              result.certificate.final_iso)
    replayed = replay_certificate(matrix_a, certificate, opts)
    if replayed != reduced_b:
        raise AssertionError("certificate replay did not reproduce the reduced target")
    answer = "isomorphic" if unconditional else "conditionally_isomorphic"
    return Verdict(
        answer, unconditional, certificate=certificate,
        precondition_first=pre_a, precondition_second=pre_b,
        source_reduction=trace_a, target_reduction=trace_b,
    )


# -- exports -------------------------------------------------------------


def diagram_digest(matrix):
    return hashlib.sha256(serialize_diagram(matrix).encode()).hexdigest()[:12]


def export_class_dot(tc):
    """DOT graph of the twist class: nodes carry the serialized-diagram hash,
    edges the move kind."""
    lines = ["graph twist_class {", '  node [shape=box fontname="monospace"];']
    names = {}
    for i, (key, member) in enumerate(sorted(
        tc.members.items(), key=lambda kv: serialize_diagram(kv[0])
    )):
        names[key] = f"m{i}"
        lines.append(f'  m{i} [label="{diagram_digest(member.canonical)}"];')
    for key, member in sorted(tc.members.items(), key=lambda kv: serialize_diagram(kv[0])):
        if member.parent_key is not None:
            lines.append(
                f'  {names[member.parent_key]} -- {names[key]} [label="{member.move.kind}"];'
            )
    lines.append("}")
    return "\n".join(lines) + "\n"


def verdict_to_json_text(verdict):
    return json.dumps(verdict.to_json(), indent=2, sort_keys=True) + "\n"
