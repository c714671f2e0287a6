"""Example families: sum complexes and random complexes with full skeleton."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from math import comb

from .complex import SimplicialComplex, build_complex

SIZE_CAP = 10 ** 7


@dataclass(frozen=True)
class SumComplexSpec:
    """Vertices Z/n; top faces are the (|A|)-sets whose sum lies in A mod n."""

    n: int
    A: frozenset[int]

    def __init__(self, n: int, A):
        n = int(n)
        if n < 1:
            raise ValueError(f"modulus must be positive, got {n}")
        items = [int(a) for a in A]
        residues = frozenset(a % n for a in items)
        if len(residues) != len(items):
            raise ValueError(f"elements of A are not distinct mod {n}")
        if not 1 <= len(residues) <= n:
            raise ValueError("A must be a nonempty subset of Z/n")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "A", residues)

    @property
    def d(self) -> int:
        return len(self.A) - 1


def _check_size(n: int, k: int, cap: int) -> None:
    if comb(n, k) > cap:
        raise ValueError(f"C({n}, {k}) = {comb(n, k)} exceeds the size cap {cap}")


def sum_complex_top_faces(spec: SumComplexSpec, cap: int = SIZE_CAP) -> list[tuple[int, ...]]:
    n, d = spec.n, spec.d
    _check_size(n, d + 1, cap)
    A = spec.A
    return [f for f in itertools.combinations(range(n), d + 1) if sum(f) % n in A]


def sum_complex(spec: SumComplexSpec, cap: int = SIZE_CAP) -> SimplicialComplex:
    """Complete (d-1)-skeleton on Z/n plus the top faces selected by their sum."""
    n, d = spec.n, spec.d
    _check_size(n, d, cap)
    facets = list(itertools.combinations(range(n), d))
    facets.extend(sum_complex_top_faces(spec, cap))
    return build_complex(facets, n)


def count_sum_faces(spec: SumComplexSpec) -> int:
    """Number of top faces, counted by residue of the partial sums."""
    n, k = spec.n, spec.d + 1
    # ways[j][s]: j-subsets of the vertices seen so far with sum s mod n
    ways = [[0] * n for _ in range(k + 1)]
    ways[0][0] = 1
    for v in range(n):
        for j in range(min(k, v + 1), 0, -1):
            prev, cur = ways[j - 1], ways[j]
            for s in range(n):
                if prev[s]:
                    cur[(s + v) % n] += prev[s]
    return sum(ways[k][a] for a in spec.A)


def random_complex(n: int, d: int, num_top_faces: int, seed: int | None = None,
                   cap: int = SIZE_CAP) -> SimplicialComplex:
    """Complete (d-1)-skeleton on n vertices plus a uniform set of d-faces."""
    if n < 0 or d < 1:
        raise ValueError(f"need n >= 0 and d >= 1, got n={n}, d={d}")
    total = comb(n, d + 1)
    if not 0 <= num_top_faces <= total:
        raise ValueError(f"number of top faces must lie in 0..{total}, got {num_top_faces}")
    _check_size(n, d + 1, cap)
    rng = random.Random(seed)
    tops = list(itertools.combinations(range(n), d + 1))
    chosen = [tops[i] for i in sorted(rng.sample(range(total), num_top_faces))]
    return build_complex(list(itertools.combinations(range(n), d)) + chosen, n)


def random_complex_p(n: int, d: int, p: float, seed: int | None = None,
                     cap: int = SIZE_CAP) -> SimplicialComplex:
    """Each d-face kept with probability p; the count is drawn binomially."""
    import numpy as np

    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    rng = np.random.default_rng(seed)
    count = int(rng.binomial(comb(n, d + 1), p))
    sub_seed = int(rng.integers(2 ** 63))
    return random_complex(n, d, count, sub_seed, cap)
