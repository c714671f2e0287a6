"""Complexes with prescribed codimension-one torsion.

A cyclic group Z/m is realized by gluing two pieces:

* a telescope of building blocks P(d), each contributing the relation
  ``2 a = b`` between two marked simplex boundaries, so the marks of the
  telescope carry the classes 1, 2, 4, 8, ...;
* a sphere with k holes, whose hole boundaries sum to zero in homology.

Gluing hole i to the telescope mark 2^{n_i} kills 2^{n_1} + ... + 2^{n_k}.

Marks are vertex tuples listed in increasing label order.  Every mark built
here is coherent in that order, so its cycle is the alternating sum of its
codimension-one faces.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Mapping, Sequence

from .complex import (ComplexError, Face, GluingMap, SimplicialComplex,
                      attach_with_map, build_complex, degree_profile,
                      disjoint_union, suspension)


@dataclass(frozen=True)
class BinaryExpansion:
    m: int
    exponents: tuple[int, ...]

    @property
    def k(self) -> int:
        return len(self.exponents)


def binary_expansion(m: int) -> BinaryExpansion:
    m = int(m)
    if m <= 0:
        raise ValueError(f"binary expansion needs m >= 1, got {m}")
    exps = tuple(i for i in range(m.bit_length()) if m >> i & 1)
    return BinaryExpansion(m, exps)


@dataclass(frozen=True)
class MarkedComplex:
    """A complex with an ordered list of marked d-simplex boundaries.

    ``chain`` optionally holds a d-chain certificate (face -> coefficient)
    whose boundary is the documented combination of mark cycles.
    """

    complex: SimplicialComplex
    marks: tuple[tuple[int, ...], ...]
    chain: Mapping[Face, int] | None = field(default=None, compare=False)

    @property
    def d(self) -> int:
        return len(self.marks[0]) - 1 if self.marks else self.complex.dimension

    def sidecar(self, constants: "ConstructionConstants | None" = None) -> dict:
        out = {"marks": [list(z) for z in self.marks]}
        out["constants"] = constants.to_json() if constants else {}
        return out


def mark_cycle(mark: Sequence[int]) -> dict[Face, int]:
    """The (d-1)-cycle of a marked boundary: sum of (-1)^i [u minus u_i]."""
    u = tuple(sorted(mark))
    return {u[:i] + u[i + 1:]: (-1 if i & 1 else 1) for i in range(len(u))}


def check_mark(X: SimplicialComplex, mark: Sequence[int]) -> None:
    """Raise unless ``mark`` spans an induced d-simplex boundary of X."""
    u = tuple(sorted(mark))
    if len(u) < 2 or len(set(u)) != len(u):
        raise ComplexError(f"mark {tuple(mark)} needs at least two distinct vertices")
    if u in X:
        raise ComplexError(f"mark {u} is filled in")
    for i in range(len(u)):
        if u[:i] + u[i + 1:] not in X:
            raise ComplexError(f"mark {u} is missing the face {u[:i] + u[i + 1:]}")


def check_marks(mc: MarkedComplex, nonadjacent: bool = False) -> None:
    X = mc.complex
    seen: set[int] = set()
    for z in mc.marks:
        check_mark(X, z)
        if seen.intersection(z):
            raise ComplexError(f"mark {z} shares a vertex with an earlier mark")
        seen.update(z)
    if nonadjacent:
        owner = {v: i for i, z in enumerate(mc.marks) for v in z}
        for u, v in X.faces_of_dim(1):
            if u in owner and v in owner and owner[u] != owner[v]:
                raise ComplexError(f"marks {owner[u]} and {owner[v]} are joined by an edge")


def _simplex_boundary(vertices: Sequence[int]) -> list[Face]:
    u = tuple(vertices)
    return [u[:i] + u[i + 1:] for i in range(len(u))]


# Facets of the six-vertex block for d = 2.  Its two marks are the
# triangles 012 and 345, and the sum of all nine facets with the signs
# below has boundary 2*cycle(012) - cycle(345).
_P2_FACETS = ((0, 1, 5), (0, 2, 5), (2, 4, 5), (1, 3, 5), (1, 2, 3),
              (0, 2, 3), (0, 3, 4), (0, 1, 4), (1, 2, 4))


@lru_cache(maxsize=None)
def building_block(d: int) -> MarkedComplex:
    """P(d): a complex with marks (A, B) and H_{d-1} = <a, b | 2a = b>.

    P(d+1) is the suspension of P(d) with A coned off from the first apex
    and B from the second; the new marks are A joined to the second apex and
    B joined to the first.  The new B-mark then has the wrong orientation,
    which is repaired by swapping the labels of its two lowest vertices.
    """
    if d < 2:
        raise ValueError(f"building block needs d >= 2, got {d}")
    if d == 2:
        return MarkedComplex(build_complex(_P2_FACETS, 6), ((0, 1, 2), (3, 4, 5)))
    prev = building_block(d - 1)
    a, b = (tuple(v + 2 for v in z) for z in prev.marks)
    S = suspension(prev.complex)
    facets = list(S.facets) + [(0, *a), (1, *b)]
    A, B = (1, *a), (0, *b)
    b0 = B[1]
    swap = {0: b0, b0: 0}
    facets = [tuple(swap.get(v, v) for v in f) for f in facets]
    B = tuple(sorted(swap.get(v, v) for v in B))
    return MarkedComplex(build_complex(facets, S.num_vertices), (A, B))


@lru_cache(maxsize=64)
def telescope(d: int, n: int) -> MarkedComplex:
    """n building blocks chained B_i -> A_{i+1}; marks Z_0, ..., Z_n.

    Z_{i+1} is homologous to 2 Z_i.  With n = 0 the result is a bare
    d-simplex boundary carrying one mark.  Built by extending the telescope
    of length n - 1, so sweeping n reuses earlier work.
    """
    if d < 2 or n < 0:
        raise ValueError(f"telescope needs d >= 2 and n >= 0, got d={d}, n={n}")
    if n == 0:
        return MarkedComplex(build_complex(_simplex_boundary(range(d + 1)), d + 1),
                             (tuple(range(d + 1)),))
    P = building_block(d)
    if n == 1:
        return P
    prev = telescope(d, n - 1)
    a, b = P.marks
    X, where = attach_with_map(prev.complex, P.complex, GluingMap(dict(zip(a, prev.marks[-1]))))
    return MarkedComplex(X, prev.marks + (tuple(where[v] for v in b),))


def sphere_with_slots(d: int, k: int) -> MarkedComplex:
    """A d-sphere triangulation with k vertex-disjoint, nonadjacent special facets.

    Start from the boundary of a (d+1)-simplex, stellar-subdivide k facets in
    a row, then push every facet of the result d+1 times so that each one
    ends in a facet made of fresh vertices.  The first k fresh facets are the
    marks.  Degrees stay bounded independent of k.
    """
    if d < 1 or k < 1:
        raise ValueError(f"sphere needs d >= 1 and k >= 1, got d={d}, k={k}")
    facets = set(_simplex_boundary(range(d + 2)))
    nxt = d + 2

    def cone(face):
        nonlocal nxt
        facets.remove(face)
        w = nxt
        nxt += 1
        for sub in _simplex_boundary(face):
            facets.add(sub + (w,))
        return w

    for i in range(k):
        cone(tuple(range(i + 1, d + i + 2)))
    fresh = []
    for face in sorted(facets):
        cur = face
        for _ in range(d + 1):
            w = cone(cur)
            cur = cur[1:] + (w,)
        fresh.append(cur)
    return MarkedComplex(build_complex(facets, nxt), tuple(fresh[:k]))


def top_cycle(T: SimplicialComplex) -> dict[Face, int]:
    """A +-1 fundamental cycle of an orientable closed pseudomanifold.

    Signs spread across shared ridges so each ridge cancels.  Raises when a
    ridge does not lie in exactly two facets or the signs clash.
    """
    d = T.dimension
    if d < 1:
        raise ComplexError("top cycle needs dimension >= 1")
    tops = T.faces[d]
    ridges: dict[Face, list[tuple[Face, int]]] = {}
    for f in tops:
        for j in range(d + 1):
            ridges.setdefault(f[:j] + f[j + 1:], []).append((f, j))
    for r in T.faces[d - 1]:
        if len(ridges.get(r, ())) != 2:
            raise ComplexError(f"ridge {r} lies in {len(ridges.get(r, ()))} facets, not 2")
    x: dict[Face, int] = {}
    for start in tops:
        if start in x:
            continue
        x[start] = 1
        queue = deque([start])
        while queue:
            f = queue.popleft()
            for j in range(d + 1):
                (g1, j1), (g2, j2) = ridges[f[:j] + f[j + 1:]]
                g, jg = (g2, j2) if g1 == f else (g1, j1)
                want = -x[f] * (-1 if (j + jg) & 1 else 1)
                if g not in x:
                    x[g] = want
                    queue.append(g)
                elif x[g] != want:
                    raise ComplexError("complex is not orientable")
    return x


@lru_cache(maxsize=64)
def punctured_sphere(d: int, k: int) -> MarkedComplex:
    """A d-sphere with k special facets removed; hole boundaries sum to zero.

    The returned chain z satisfies boundary(z) = sum of the mark cycles.
    """
    if d < 2 or k < 1:
        raise ValueError(f"punctured sphere needs d >= 2 and k >= 1, got d={d}, k={k}")
    T = sphere_with_slots(d, 2 * k)
    x = top_cycle(T.complex)
    if sum(1 for z in T.marks if x[z] == -1) < k:
        x = {f: -a for f, a in x.items()}
    holes = [z for z in T.marks if x[z] == -1][:k]
    for z in holes:
        del x[z]
    drop = set(holes)
    Y = build_complex([f for f in T.complex.facets if f not in drop], T.complex.num_vertices)
    return MarkedComplex(Y, tuple(holes), x)


def assemble_cyclic_marked(d: int, m: int) -> MarkedComplex:
    """The complex for Z/m with the telescope marks kept for reference."""
    m = int(m)
    if m < 2:
        raise ValueError(f"cyclic order must be >= 2, got {m}")
    if d < 2:
        raise ValueError(f"dimension must be >= 2, got {d}")
    exps = binary_expansion(m).exponents
    Y1 = telescope(d, exps[-1])
    Y2 = punctured_sphere(d, len(exps))
    vmap = {}
    for hole, n in zip(Y2.marks, exps):
        vmap.update(zip(hole, Y1.marks[n]))
    X, _ = attach_with_map(Y1.complex, Y2.complex, GluingMap(vmap))
    return MarkedComplex(X, Y1.marks)


def assemble_cyclic(d: int, m: int) -> SimplicialComplex:
    """A d-complex whose (d-1)-st homology has torsion exactly Z/m."""
    return assemble_cyclic_marked(d, m).complex


def realize_group(d: int, cyclic_orders: Sequence[int]) -> SimplicialComplex:
    """Disjoint union of cyclic realizations; torsion is the direct sum."""
    orders = [int(q) for q in cyclic_orders]
    for q in orders:
        if q < 2:
            raise ValueError(f"cyclic order must be >= 2, got {q}")
    return disjoint_union([assemble_cyclic(d, q) for q in orders])


@dataclass(frozen=True)
class ConstructionConstants:
    d: int
    delta_P: int
    num_vertices_P: int
    L: int
    K: int
    C_d: float

    def vertex_bound(self, order: int) -> float:
        """K log2(order): the promised vertex bound for a group of this order."""
        return self.K * math.log2(order)

    def to_json(self) -> dict:
        return {"d": self.d, "delta_P": self.delta_P, "num_vertices_P": self.num_vertices_P,
                "L": self.L, "K": self.K, "C_d": self.C_d}


def sphere_constant(d: int) -> int:
    """Bounds both the degree of a punctured sphere and its vertices per hole."""
    return max((d + 1) ** 2 * (d * d + d + 2), d * d + d + 1 + (d + 2) ** 2)


@lru_cache(maxsize=None)
def constants(d: int) -> ConstructionConstants:
    if d < 2:
        raise ValueError(f"constants need d >= 2, got {d}")
    P = building_block(d)
    delta_P = degree_profile(P.complex).delta_max
    nv = P.complex.num_vertices
    L = sphere_constant(d)
    K = max(2 * delta_P + L + 1, 2 * nv + 4 * L)
    C_d = 18 * K ** (8 + 1 / d) * d ** 6 / math.log(2) ** (1 / d)
    return ConstructionConstants(d, delta_P, nv, L, K, C_d)
