"""Canonical forms and label-preserving isomorphism search."""

from corpus import random_diagram, random_permutation, seeded_rng
from coxiso.canonical import canonical_form, find_isomorphism, is_label_preserving
from coxiso.diagram import INFINITY, CoxeterMatrix, parse_diagram

INF = INFINITY

PATH = parse_diagram(
    "vertices s1 s2 s3 s4\nedge s1 s2 3\nedge s2 s3 3\nedge s3 s4 3\n"
    "edge s1 s3 inf\nedge s1 s4 inf\nedge s2 s4 inf\n"
)
STAR = parse_diagram(
    "vertices s1 s2 s3 s4\nedge s1 s2 3\nedge s2 s3 3\nedge s2 s4 3\n"
    "edge s1 s3 inf\nedge s1 s4 inf\nedge s3 s4 inf\n"
)


def test_single_vertex_canonical():
    m = CoxeterMatrix(["x"], {})
    canon, iso = canonical_form(m)
    assert canon.rank == 1
    assert iso == {"x": canon.vertices[0]}


def test_canonical_invariant_under_relabeling():
    rng = seeded_rng(3)
    for _ in range(120):
        m = random_diagram(rng, rng.randint(1, 6), (2, 3, 4, INF))
        pi = random_permutation(rng, m)
        canon_m, _ = canonical_form(m)
        canon_p, _ = canonical_form(m.relabel(pi))
        assert canon_m == canon_p


def test_canonical_idempotent():
    rng = seeded_rng(5)
    for _ in range(80):
        m = random_diagram(rng, rng.randint(1, 6), (2, 3, 5, INF))
        canon, _ = canonical_form(m)
        again, iso = canonical_form(canon)
        assert again == canon
        assert all(iso[v] == v for v in canon.vertices)


def test_canonical_iso_is_label_preserving():
    rng = seeded_rng(9)
    for _ in range(60):
        m = random_diagram(rng, rng.randint(1, 6), (2, 3, 4, 5, INF))
        canon, iso = canonical_form(m)
        assert is_label_preserving(m, canon, iso)


def test_path_and_star_not_isomorphic():
    canon_path, _ = canonical_form(PATH)
    canon_star, _ = canonical_form(STAR)
    assert canon_path != canon_star
    assert find_isomorphism(PATH, STAR) is None


def test_find_isomorphism_on_relabelings():
    rng = seeded_rng(17)
    for _ in range(60):
        m = random_diagram(rng, rng.randint(1, 6), (2, 3, 6, INF))
        pi = random_permutation(rng, m)
        image = m.relabel(pi)
        mapping = find_isomorphism(m, image)
        assert mapping is not None
        assert is_label_preserving(m, image, mapping)


def test_find_isomorphism_counterexamples():
    i23 = CoxeterMatrix(["a", "b"], {("a", "b"): 3})
    i24 = CoxeterMatrix(["a", "b"], {("a", "b"): 4})
    assert find_isomorphism(i23, i24) is None
    assert find_isomorphism(i23, CoxeterMatrix(["a", "b", "c"], {("a", "b"): 3})) is None


def test_iso_present_iff_canonical_copies_equal():
    rng = seeded_rng(23)
    for _ in range(60):
        m1 = random_diagram(rng, 4, (2, 3, INF))
        m2 = random_diagram(rng, 4, (2, 3, INF))
        same = canonical_form(m1)[0] == canonical_form(m2)[0]
        assert (find_isomorphism(m1, m2) is not None) == same


def test_highly_symmetric_diagrams_complete_quickly():
    # all-infinity complete graphs exercise the automorphism pruning
    for n in (5, 6, 7, 8):
        verts = [f"x{i}" for i in range(n)]
        labels = {
            (verts[i], verts[j]): INF for i in range(n) for j in range(i + 1, n)
        }
        m = CoxeterMatrix(verts, labels)
        canon, _ = canonical_form(m)
        assert canon.rank == n
