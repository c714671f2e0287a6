import itertools
import json
import random

import pytest

from torsionforge.complex import (ComplexError, GluingMap, IntegerMatrix, attach,
                                  attach_with_map, boundary_matrix, build_complex,
                                  complex_from_json, degree_profile, disjoint_union,
                                  euler_characteristic, pattern_complex, read_complex,
                                  relabel, suspension, write_complex)
from torsionforge.construct import building_block, telescope
from torsionforge.homology import GroupStructure, homology

P2_ONE_BASED = [[1, 2, 6], [1, 3, 6], [3, 5, 6], [2, 4, 6], [2, 3, 4],
            [1, 3, 4], [1, 4, 5], [1, 2, 5], [2, 3, 5]]


def tetra_boundary():
    return build_complex(itertools.combinations(range(4), 3), 4)


def closure_oracle(facets):
    faces = set()
    for f in facets:
        for k in range(1, len(f) + 1):
            faces.update(itertools.combinations(sorted(f), k))
    return faces


def random_small_complex(rng, n=7, d=2, p=0.35):
    tops = [f for f in itertools.combinations(range(n), d + 1) if rng.random() < p]
    extra = [f for f in itertools.combinations(range(n), d) if rng.random() < 0.3]
    return build_complex(tops + extra, n)


def test_single_simplex():
    X = build_complex([(0, 1, 2)], 3)
    assert X.f_vector == (3, 3, 1)
    assert X.dimension == 2


def test_isolated_vertices():
    X = build_complex([], 5)
    assert X.f_vector == (5,)
    assert X.dimension == 0


def test_empty_complex():
    X = build_complex([], 0)
    assert X.dimension == -1
    assert X.f_vector == ()


def test_block_from_listed_facets():
    X = build_complex([[v - 1 for v in f] for f in P2_ONE_BASED], 6)
    assert X.f_vector == (6, 15, 9)
    oracle = closure_oracle([[v - 1 for v in f] for f in P2_ONE_BASED])
    assert set(X.face_set) == oracle
    assert X == building_block(2).complex


def test_build_canonicalizes():
    X = build_complex([(2, 0, 1), (1, 2, 0)], 3)
    assert X.facets == ((0, 1, 2),)


@pytest.mark.parametrize("facets,n", [([(0, 3)], 3), ([(-1, 0)], 3), ([(0, 0, 1)], 3)])
def test_build_rejects(facets, n):
    with pytest.raises(ComplexError):
        build_complex(facets, n)


def test_degree_profile_tetrahedron():
    prof = degree_profile(tetra_boundary())
    assert prof.delta[(0, 1)] == 3
    assert prof.delta[(1, 2)] == 2
    assert prof.delta_max == 3


def test_degree_profile_block_bruteforce():
    X = building_block(2).complex
    tris = [set(f) for f in X.faces[2]]
    edges = X.faces[1]
    brute = {(0, 1): max(sum(1 for e in edges if v in e) for v in range(6)),
             (0, 2): max(sum(1 for t in tris if v in t) for v in range(6)),
             (1, 2): max(sum(1 for t in tris if set(e) <= t) for e in edges)}
    prof = degree_profile(X)
    assert prof.delta == brute
    assert prof.delta[(0, 1)] == 5 and prof.delta_max == 5


def test_telescope_degree_bound():
    for n in range(1, 7):
        assert degree_profile(telescope(2, n).complex).delta_max <= 10


def test_boundary_triangle():
    X = build_complex([(0, 1), (0, 2), (1, 2)], 3)
    M = boundary_matrix(X, 1)
    assert M.rows == M.cols == 3
    for col in M.columns():
        assert sorted(col.values()) == [-1, 1]
    assert homology(X, 1).free_rank == 1


def test_boundary_tetrahedron_rank():
    from sympy import Matrix
    M = boundary_matrix(tetra_boundary(), 2)
    assert (M.rows, M.cols) == (6, 4)
    assert Matrix(M.to_dense()).rank() == 3


def test_boundary_range():
    X = tetra_boundary()
    for i in (0, 3):
        with pytest.raises(ComplexError):
            boundary_matrix(X, i)


@pytest.mark.parametrize("X", [tetra_boundary(), building_block(2).complex,
                               building_block(3).complex, telescope(2, 3).complex])
def test_boundary_squared_zero(X):
    for i in range(1, X.dimension):
        assert (boundary_matrix(X, i) @ boundary_matrix(X, i + 1)).is_zero()


def test_integer_matrix_drops_zeros():
    M = IntegerMatrix(2, 2, {(0, 0): 0, (1, 1): 3})
    assert M.entries == {(1, 1): 3}
    with pytest.raises(IndexError):
        IntegerMatrix(1, 1, {(1, 0): 1})


def test_suspension_of_two_points():
    S = suspension(build_complex([], 2))
    assert S.f_vector == (4, 4)


def test_suspension_of_triangle_is_sphere():
    S = suspension(build_complex([(0, 1), (0, 2), (1, 2)], 3))
    assert euler_characteristic(S) == 2
    assert S.f_vector == (5, 9, 6)


def test_suspension_apexes_first():
    S = suspension(build_complex([(0, 1)], 2))
    assert set(S.facets) == {(0, 2, 3), (1, 2, 3)}


def test_suspension_shifts_homology():
    rng = random.Random(5)
    for _ in range(10):
        X = random_small_complex(rng)
        S = suspension(X)
        for i in (1, 2):
            assert homology(X, i) == homology(S, i + 1)


def test_disjoint_union():
    tri = build_complex([(0, 1), (0, 2), (1, 2)], 3)
    U = disjoint_union([tri, tri])
    assert homology(U, 1).free_rank == 2
    P = building_block(2).complex
    assert homology(disjoint_union([P, P]), 1) == GroupStructure(2)
    assert disjoint_union([]).num_vertices == 0


def test_disjoint_union_degree():
    A, B = tetra_boundary(), building_block(2).complex
    assert degree_profile(disjoint_union([A, B])).delta_max == max(
        degree_profile(A).delta_max, degree_profile(B).delta_max)


def test_attach_wedge():
    tri = build_complex([(0, 1), (0, 2), (1, 2)], 3)
    W = attach(tri, tri, GluingMap({0: 0}))
    assert W.num_vertices == 5
    assert homology(W, 1).free_rank == 2
    assert homology(W, 0).free_rank == 1


def test_attach_blocks_chain():
    P = building_block(2)
    a, b = P.marks
    X, where = attach_with_map(P.complex, P.complex, GluingMap(dict(zip(a, b))))
    assert X.num_vertices == 9
    assert homology(X, 1) == homology(P.complex, 1)
    assert degree_profile(X).delta_max <= 2 * degree_profile(P.complex).delta_max
    assert [where[v] for v in a] == list(b)


def test_attach_keeps_a_labels():
    P = building_block(2)
    a, b = P.marks
    X, where = attach_with_map(P.complex, P.complex, GluingMap(dict(zip(a, b))))
    assert set(P.complex.face_set) <= set(X.face_set)
    assert where == [3, 4, 5, 6, 7, 8]


def test_attach_rejects_non_induced():
    tri = build_complex([(0, 1, 2)], 3)
    hollow = build_complex([(0, 1), (0, 2), (1, 2)], 3)
    src = frozenset({(0,), (1,), (2,), (0, 1), (0, 2), (1, 2)})
    with pytest.raises(ComplexError):
        attach(hollow, tri, GluingMap({0: 0, 1: 1, 2: 2}, src))


def test_attach_rejects_bad_maps():
    tri = build_complex([(0, 1), (0, 2), (1, 2)], 3)
    path = build_complex([(0, 1), (1, 2)], 3)
    with pytest.raises(ComplexError):
        attach(tri, tri, GluingMap({0: 0, 1: 0}))
    with pytest.raises(ComplexError):
        attach(path, tri, GluingMap({0: 0, 1: 1, 2: 2}))


def test_euler_characteristic():
    for d in range(1, 5):
        X = build_complex(itertools.combinations(range(d + 2), d + 1), d + 2)
        assert euler_characteristic(X) == 1 + (-1) ** d
    assert euler_characteristic(building_block(2).complex) == 0


def test_pattern_complex_injective():
    X = building_block(2).complex
    Y = pattern_complex(X, [5, 3, 9, 0, 1, 7])
    assert Y.f_vector == X.f_vector


def test_pattern_complex_merges():
    X = build_complex([(0, 1, 2), (3, 4, 5)], 6)
    Y = pattern_complex(X, [0, 1, 2, 0, 1, 2])
    assert Y.facets == ((0, 1, 2),)
    with pytest.raises(ComplexError):
        pattern_complex(X, [0, 0, 1, 2, 3, 4])


def test_relabel_invariance():
    rng = random.Random(11)
    X = telescope(2, 2).complex
    base = [homology(X, i) for i in range(3)]
    for _ in range(5):
        perm = list(range(X.num_vertices))
        rng.shuffle(perm)
        Y = relabel(X, perm)
        assert [homology(Y, i) for i in range(3)] == base


def test_json_round_trip(tmp_path):
    X = telescope(3, 2).complex
    path = tmp_path / "x.json"
    write_complex(X, path)
    assert read_complex(path) == X
    data = json.loads(path.read_text())
    assert data["dimension"] == 3


@pytest.mark.parametrize("data", [
    {"num_vertices": 3, "dimension": 1},
    {"num_vertices": 3, "dimension": 1, "facets": [[1, 0]]},
    {"num_vertices": 3, "dimension": 2, "facets": [[0, 1]]},
    {"num_vertices": 3, "dimension": 1, "facets": [[0, 5]]},
    [1, 2],
])
def test_json_reader_rejects(data):
    with pytest.raises(ComplexError):
        complex_from_json(data)
