"""Vertex colorings that shrink a complex without changing its torsion.

If a coloring is proper on the 1-skeleton and no two (d-1)-faces carry the
same multiset of colors, the quotient by the coloring (the pattern complex)
has the same torsion in degree d-1.  Two colorers are provided: a greedy one
that tries hard to reuse colors, and a three-stage random one with a
provable color bound, run as a resampling algorithm.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .complex import ComplexError, SimplicialComplex, degree_profile, pattern_complex
from .homology import GroupStructure, groups_isomorphic, homology, torsion

# A rational upper bound on e, so the feasibility checks stay exact.
E_UPPER = Fraction(27182818284590453, 10 ** 16)
DEFAULT_MAX_ROUNDS = 10 ** 6


class ReductionError(RuntimeError):
    """A coloring failed verification or changed the homology."""


class ResamplingError(RuntimeError):
    """The resampling colorer hit its round cap."""


@dataclass(frozen=True)
class Coloring:
    colors: tuple[int, ...]
    num_colors: int

    @classmethod
    def from_labels(cls, labels: Sequence) -> "Coloring":
        """Dense color ids, numbered by first appearance in sorted label order."""
        ids = {lab: i for i, lab in enumerate(sorted(set(labels)))}
        return cls(tuple(ids[lab] for lab in labels), len(ids))

    def to_json(self) -> dict:
        return {"colors": list(self.colors), "num_colors": self.num_colors}


@dataclass
class ReductionReport:
    """Outcome of a reduction.  Torsion fields are filled in by :func:`reduce`."""

    input_vertices: int
    output_vertices: int
    num_colors: int
    method: str
    seed: int | None = None
    torsion_before: GroupStructure | None = None
    torsion_after: GroupStructure | None = None
    top_before: GroupStructure | None = None
    top_after: GroupStructure | None = None
    rounds: dict = field(default_factory=dict)

    @property
    def upper_bound_vertices(self) -> int:
        return self.output_vertices

    def to_json(self) -> dict:
        def g(x):
            return None if x is None else x.to_json()
        return {
            "input_vertices": self.input_vertices,
            "output_vertices": self.output_vertices,
            "num_colors": self.num_colors,
            "method": self.method,
            "seed": self.seed,
            "torsion_before": g(self.torsion_before),
            "torsion_after": g(self.torsion_after),
            "top_before": g(self.top_before),
            "top_after": g(self.top_after),
            "upper_bound_vertices": self.upper_bound_vertices,
            "rounds": dict(self.rounds),
        }


def _pattern(face, colors) -> tuple:
    return tuple(sorted(colors[v] for v in face))


def verify_pattern_coloring(X: SimplicialComplex, c, r: int) -> bool:
    """True iff c is proper on edges and all r-faces have distinct patterns."""
    colors = c.colors if isinstance(c, Coloring) else c
    if len(colors) != X.num_vertices:
        return False
    for u, v in X.faces_of_dim(1):
        if colors[u] == colors[v]:
            return False
    seen = set()
    for f in X.faces_of_dim(r):
        p = _pattern(f, colors)
        if p in seen:
            return False
        seen.add(p)
    return True


def _stars(X: SimplicialComplex, r: int) -> list[list[tuple[int, ...]]]:
    star: list[list[tuple[int, ...]]] = [[] for _ in range(X.num_vertices)]
    for f in X.faces_of_dim(r):
        for v in f:
            star[v].append(f)
    return star


def greedy_coloring(X: SimplicialComplex) -> tuple[Coloring, ReductionReport]:
    """Color high-degree vertices first, each with the smallest safe color.

    Every (d-1)-face is keyed by its uncolored vertices together with the
    sorted colors of its colored ones.  Keys start out distinct and a color
    is safe only if the keys stay distinct, which at the end means distinct
    patterns.  A never-used color is always safe, so the loop cannot stall.
    """
    d = X.dimension
    if d < 2:
        raise ValueError(f"greedy coloring needs dimension >= 2, got {d}")
    r = d - 1
    n = X.num_vertices
    adj = X.adjacency
    star = _stars(X, r)
    colors: list[int | None] = [None] * n
    key_of = {f: (f, ()) for f in X.faces_of_dim(r)}
    owner = {k: f for f, k in key_of.items()}
    used = 0
    order = sorted(range(n), key=lambda v: (-len(adj[v]), v))
    for v in order:
        banned = {colors[u] for u in adj[v]}
        for c in range(used + 1):
            if c in banned:
                continue
            new = {}
            for f in star[v]:
                w, p = key_of[f]
                k = (tuple(u for u in w if u != v), tuple(sorted(p + (c,))))
                if k in owner:
                    break
                new[f] = k
            else:
                break
        for f, k in new.items():
            del owner[key_of[f]]
        for f, k in new.items():
            key_of[f] = k
            owner[k] = f
        colors[v] = c
        used = max(used, c + 1)
    col = Coloring(tuple(colors), used)
    return col, ReductionReport(n, used, used, "greedy")


def ceil_root(n: int, d: int) -> int:
    """Smallest integer r with r**d >= n."""
    if n <= 1:
        return max(n, 0)
    r = int(round(n ** (1.0 / d)))
    while r ** d < n:
        r += 1
    while r > 1 and (r - 1) ** d >= n:
        r -= 1
    return r


@dataclass(frozen=True)
class LLLParameters:
    d: int
    K: int
    n: int
    q1: int
    q2: int
    q3: int

    @property
    def color_bound(self) -> int:
        return self.q1 * self.q2 * self.q3


def lll_parameters(d: int, K: int, n: int) -> LLLParameters:
    return LLLParameters(d, K, n, K, 3 * d ** 5 * K ** 5, 6 * K * K * d * ceil_root(n, d))


def lll_inequalities(d: int, K: int, n: int) -> tuple[Fraction, Fraction]:
    """Left-hand sides of the two local-lemma conditions e*p*(t+1) <= 1.

    Intersecting pairs: p = dK / (3 d^5 K^5), t + 1 = d^4 K^4 + 1.
    Disjoint pairs: p = 1 / (6^d K^{2d} n), t + 1 = 2 K^2 n + 1.
    """
    if n < 1:
        raise ValueError("n must be positive")
    first = E_UPPER * Fraction(d * K, 3 * d ** 5 * K ** 5) * (d ** 4 * K ** 4 + 1)
    second = E_UPPER * Fraction(1, 6 ** d * K ** (2 * d) * n) * (2 * K * K * n + 1)
    return first, second


def lll_feasible(d: int, K: int, n: int) -> bool:
    a, b = lll_inequalities(d, K, n)
    return a <= 1 and b <= 1


def _proper_coloring(X: SimplicialComplex) -> list[int]:
    adj = X.adjacency
    colors = [0] * X.num_vertices
    for v in range(X.num_vertices):
        banned = {colors[u] for u in adj[v] if u < v}
        c = 0
        while c in banned:
            c += 1
        colors[v] = c
    return colors


def _resample(faces, label, stage, q, rng, intersecting, max_rounds, rounds_used):
    """Resample ``stage`` colors until the bad events of one kind are gone.

    Bad event: two faces that share a pattern under ``label`` and either meet
    (``intersecting``) or are disjoint.  Each round resamples every vertex of
    every bad pair.
    """
    rounds = 0
    while True:
        groups: dict[tuple, list] = {}
        for f in faces:
            groups.setdefault(tuple(sorted(label(v) for v in f)), []).append(f)
        hit: set[int] = set()
        for group in groups.values():
            if len(group) < 2:
                continue
            for i, f in enumerate(group):
                fs = set(f)
                for g in group[i + 1:]:
                    if bool(fs.intersection(g)) == intersecting:
                        hit.update(f)
                        hit.update(g)
        if not hit:
            return rounds
        if rounds_used + rounds >= max_rounds:
            raise ResamplingError(f"no valid coloring after {max_rounds} resampling rounds")
        rounds += 1
        for v in sorted(hit):
            stage[v] = rng.randrange(q)


def lll_coloring(X: SimplicialComplex, K: int, seed: int | None = None,
                 max_rounds: int = DEFAULT_MAX_ROUNDS) -> tuple[Coloring, ReductionReport]:
    """Three-stage coloring c = (c1, c2, c3) with at most K q2 q3 colors.

    c1 is a proper coloring with at most K colors.  c2 (q2 = 3 d^5 K^5
    colors) separates intersecting (d-1)-faces and c3 (q3 = 6 K^2 d
    ceil(n^(1/d)) colors) separates disjoint ones.  Both are drawn uniformly
    and bad pairs are resampled until none is left.
    """
    d = X.dimension
    if d < 2:
        raise ValueError(f"resampling coloring needs dimension >= 2, got {d}")
    if K < 5:
        raise ValueError(f"K must be at least 5, got {K}")
    delta = degree_profile(X).delta_max
    if delta > K - 1:
        raise ValueError(f"maximum degree {delta} exceeds K - 1 = {K - 1}")
    n = X.num_vertices
    params = lll_parameters(d, K, n)
    if not lll_feasible(d, K, n):
        raise ValueError(f"local lemma conditions fail for d={d}, K={K}, n={n}")
    rng = random.Random(seed)
    c1 = _proper_coloring(X)
    c2 = [rng.randrange(params.q2) for _ in range(n)]
    c3 = [rng.randrange(params.q3) for _ in range(n)]
    faces = X.faces_of_dim(d - 1)
    r2 = _resample(faces, lambda v: (c1[v], c2[v]), c2, params.q2, rng, True, max_rounds, 0)
    r3 = _resample(faces, lambda v: (c1[v], c2[v], c3[v]), c3, params.q3, rng, False,
                   max_rounds, r2)
    col = Coloring.from_labels([(c1[v], c2[v], c3[v]) for v in range(n)])
    report = ReductionReport(n, col.num_colors, col.num_colors, "lll", seed,
                             rounds={"stage2": r2, "stage3": r3})
    return col, report


def reduce(X: SimplicialComplex, method: str = "greedy", seed: int | None = None,
           K: int | None = None, max_rounds: int = DEFAULT_MAX_ROUNDS,
           verify: bool = True) -> tuple[SimplicialComplex, ReductionReport]:
    """Color X, take the pattern complex and certify that torsion survived.

    With ``verify`` the torsion in degree d-1 and the top homology are
    computed on both sides; any mismatch raises :class:`ReductionError`.
    """
    d = X.dimension
    if d < 2:
        raise ValueError(f"reduction needs dimension >= 2, got {d}")
    if method == "greedy":
        col, report = greedy_coloring(X)
    elif method == "lll":
        if K is None:
            K = max(5, degree_profile(X).delta_max + 1)
        col, report = lll_coloring(X, K, seed, max_rounds)
    else:
        raise ValueError(f"unknown reduction method {method!r}")
    report.seed = seed
    if not verify_pattern_coloring(X, col, d - 1):
        raise ReductionError(f"{method} coloring failed pattern verification")
    try:
        Y = pattern_complex(X, col.colors)
    except ComplexError as exc:
        raise ReductionError(str(exc)) from exc
    if verify:
        report.torsion_before = torsion(X, d - 1)
        report.torsion_after = torsion(Y, d - 1)
        if not groups_isomorphic(report.torsion_before, report.torsion_after):
            raise ReductionError(
                f"torsion changed: {report.torsion_before} -> {report.torsion_after}")
        report.top_before = homology(X, d)
        report.top_after = homology(Y, d)
        if report.top_before != report.top_after:
            raise ReductionError(
                f"top homology changed: {report.top_before} -> {report.top_after}")
    return Y, report
