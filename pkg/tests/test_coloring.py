import itertools
import math
import random
from fractions import Fraction

import pytest

from torsionforge.coloring import (E_UPPER, Coloring, ReductionError, ReductionReport,
                                   ResamplingError, ceil_root, greedy_coloring, lll_coloring,
                                   lll_inequalities, lll_parameters, reduce,
                                   verify_pattern_coloring)
from torsionforge.complex import build_complex, pattern_complex
from torsionforge.construct import assemble_cyclic, constants, realize_group
from torsionforge.homology import GroupStructure, homology, torsion


def brute_verify(X, colors, r):
    """Pairwise multiset comparison, no hashing."""
    if any(colors[u] == colors[v] for u, v in X.faces_of_dim(1)):
        return False
    faces = X.faces_of_dim(r)
    for f, g in itertools.combinations(faces, 2):
        if sorted(colors[v] for v in f) == sorted(colors[v] for v in g):
            return False
    return True


def test_verifier_basic():
    X = assemble_cyclic(2, 5)
    assert verify_pattern_coloring(X, list(range(X.num_vertices)), 1)
    assert not verify_pattern_coloring(X, [0] * X.num_vertices, 1)


def test_verifier_matches_bruteforce():
    rng = random.Random(4)
    X = build_complex(itertools.combinations(range(6), 3), 6)
    for _ in range(200):
        colors = [rng.randrange(8) for _ in range(6)]
        assert verify_pattern_coloring(X, colors, 1) == brute_verify(X, colors, 1)


def test_greedy_on_simplex_boundary():
    for d in (2, 3, 4):
        X = build_complex(itertools.combinations(range(d + 2), d + 1), d + 2)
        col, rep = greedy_coloring(X)
        assert col.num_colors == d + 2
        assert pattern_complex(X, col.colors).f_vector == X.f_vector


def test_greedy_valid_and_dense():
    for d, m in [(2, 25), (3, 12345), (2, 10 ** 10)]:
        X = assemble_cyclic(d, m)
        col, rep = greedy_coloring(X)
        assert brute_verify(X, col.colors, d - 1)
        assert sorted(set(col.colors)) == list(range(col.num_colors))
        assert rep.output_vertices == col.num_colors < X.num_vertices


def test_greedy_random_complexes_preserve_torsion():
    rng = random.Random(12)
    for _ in range(15):
        tops = [f for f in itertools.combinations(range(8), 3) if rng.random() < 0.3]
        X = build_complex(tops, 8)
        if X.dimension < 2:
            continue
        col, _ = greedy_coloring(X)
        assert verify_pattern_coloring(X, col, 1)
        Y = pattern_complex(X, col.colors)
        assert torsion(X, 1) == torsion(Y, 1)


def test_greedy_deterministic():
    X = assemble_cyclic(3, 100)
    assert greedy_coloring(X)[0] == greedy_coloring(X)[0]


def test_lll_feasibility_numbers():
    first, second = lll_inequalities(2, 5, 1)
    assert first == E_UPPER * Fraction(10, 3 * 2 ** 5 * 5 ** 5) * (2 ** 4 * 5 ** 4 + 1)
    assert 3 * 2 ** 5 * 5 ** 5 == 300000 and 2 ** 4 * 5 ** 4 + 1 == 10001
    assert first <= 1 and second <= 1
    assert abs(float(first) - math.e * 10 / 300000 * 10001) < 1e-12


def test_lll_coloring_valid():
    X = assemble_cyclic(2, 1000)
    K = constants(2).K
    col, rep = lll_coloring(X, K, seed=5)
    assert verify_pattern_coloring(X, col, 1)
    params = lll_parameters(2, K, X.num_vertices)
    assert col.num_colors <= params.color_bound
    assert params.color_bound == 18 * K ** 8 * 2 ** 6 * ceil_root(X.num_vertices, 2)
    assert torsion(pattern_complex(X, col.colors), 1) == GroupStructure(0, (1000,))


def test_lll_deterministic_per_seed():
    X = assemble_cyclic(2, 77)
    a = lll_coloring(X, 300, seed=9)[0]
    assert a == lll_coloring(X, 300, seed=9)[0]


def test_lll_preconditions():
    X = assemble_cyclic(2, 6)
    with pytest.raises(ValueError):
        lll_coloring(X, 4, seed=0)
    with pytest.raises(ValueError):
        lll_coloring(X, 6, seed=0)


def test_lll_round_cap(monkeypatch):
    # One color per stage: disjoint edges with equal proper colors can never separate.
    import torsionforge.coloring as mod
    monkeypatch.setattr(mod, "lll_parameters",
                        lambda d, K, n: mod.LLLParameters(d, K, n, K, 1, 1))
    tris = [(3 * i, 3 * i + 1, 3 * i + 2) for i in range(4)]
    X = build_complex(tris, 12)
    with pytest.raises(ResamplingError):
        lll_coloring(X, 5, seed=1, max_rounds=20)


def test_ceil_root():
    assert ceil_root(1, 3) == 1
    assert ceil_root(8, 3) == 2
    assert ceil_root(9, 3) == 3
    assert ceil_root(10 ** 6, 2) == 1000
    assert ceil_root(10 ** 6 + 1, 2) == 1001


@pytest.mark.parametrize("method", ["greedy", "lll"])
def test_reduce_examples(method):
    Y, rep = reduce(assemble_cyclic(2, 25), method, seed=1)
    assert rep.torsion_before == rep.torsion_after == GroupStructure(0, (25,))
    assert rep.top_before.is_trivial() and rep.top_after.is_trivial()
    assert rep.output_vertices == Y.num_vertices == rep.upper_bound_vertices
    _, rep = reduce(realize_group(2, [4, 6]), method, seed=2)
    assert rep.torsion_after == GroupStructure(0, (2, 12))


def test_reduce_d3_greedy():
    _, rep = reduce(assemble_cyclic(3, 12345), "greedy")
    assert rep.torsion_after == GroupStructure(0, (12345,))


def test_reduce_keeps_top_homology():
    X = build_complex(itertools.combinations(range(5), 3), 5)
    Y, rep = reduce(X, "greedy")
    assert homology(Y, 2) == homology(X, 2)


def test_reduce_rejects():
    with pytest.raises(ValueError):
        reduce(build_complex([(0, 1)], 2))
    with pytest.raises(ValueError):
        reduce(assemble_cyclic(2, 3), "fancy")


def test_reduce_detects_bad_coloring(monkeypatch):
    import torsionforge.coloring as mod
    X = assemble_cyclic(2, 3)
    n = X.num_vertices
    monkeypatch.setattr(mod, "greedy_coloring",
                        lambda X: (Coloring((0,) * n, 1), ReductionReport(n, 1, 1, "greedy")))
    with pytest.raises(ReductionError):
        reduce(X, "greedy")


def test_report_json():
    _, rep = reduce(assemble_cyclic(2, 9), "greedy", seed=4)
    data = rep.to_json()
    assert data["torsion_after"] == {"free_rank": 0, "invariant_factors": ["9"]}
    assert data["method"] == "greedy" and data["seed"] == 4
