"""Finite simplicial complexes with orientation induced by the vertex order.

A complex lives on the vertex set ``range(num_vertices)``.  Every face is a
strictly increasing tuple of vertex labels, and the orientation of a face is
the one given by listing its vertices in increasing order.  Nothing else about
orientation is stored; relabeling vertices is how orientations change.

>>> X = build_complex([(0, 1, 2)], 3)
>>> X.f_vector
(3, 3, 1)
>>> euler_characteristic(X)
1
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Mapping, Sequence

Face = tuple[int, ...]


class ComplexError(ValueError):
    """Raised for malformed complexes, gluing data, or complex files."""


@dataclass(frozen=True, eq=False)
class SimplicialComplex:
    """An immutable simplicial complex.

    ``faces[i]`` is the lexicographically sorted tuple of ``i``-dimensional
    faces.  Use :func:`build_complex` rather than calling this directly; the
    constructor trusts its input.
    """

    num_vertices: int
    faces: tuple[tuple[Face, ...], ...]

    @property
    def dimension(self) -> int:
        return len(self.faces) - 1

    @property
    def f_vector(self) -> tuple[int, ...]:
        return tuple(len(fs) for fs in self.faces)

    def faces_of_dim(self, i: int) -> tuple[Face, ...]:
        if 0 <= i < len(self.faces):
            return self.faces[i]
        return ()

    @cached_property
    def index(self) -> tuple[dict[Face, int], ...]:
        """Per-dimension map face -> position in ``faces[i]``."""
        return tuple({f: k for k, f in enumerate(fs)} for fs in self.faces)

    @cached_property
    def face_set(self) -> frozenset[Face]:
        return frozenset(f for fs in self.faces for f in fs)

    def __contains__(self, face) -> bool:
        return tuple(sorted(face)) in self.face_set

    @cached_property
    def facets(self) -> tuple[Face, ...]:
        """Maximal faces, ordered by dimension then lexicographically."""
        out = []
        for i, fs in enumerate(self.faces):
            covered = set()
            for g in self.faces_of_dim(i + 1):
                for k in range(len(g)):
                    covered.add(g[:k] + g[k + 1:])
            out.extend(f for f in fs if f not in covered)
        return tuple(out)

    @cached_property
    def adjacency(self) -> tuple[frozenset[int], ...]:
        nbrs: list[set[int]] = [set() for _ in range(self.num_vertices)]
        for u, v in self.faces_of_dim(1):
            nbrs[u].add(v)
            nbrs[v].add(u)
        return tuple(frozenset(s) for s in nbrs)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SimplicialComplex):
            return NotImplemented
        return self.num_vertices == other.num_vertices and self.faces == other.faces

    def __hash__(self) -> int:
        return hash((self.num_vertices, self.faces))

    def __repr__(self) -> str:
        return (f"SimplicialComplex(num_vertices={self.num_vertices}, "
                f"f_vector={self.f_vector})")

    def to_json(self) -> dict:
        return {
            "num_vertices": self.num_vertices,
            "dimension": self.dimension,
            "facets": [list(f) for f in self.facets],
        }


def _closure(facets: Iterable[Face]) -> tuple[tuple[Face, ...], ...]:
    by_dim: list[set[Face]] = []
    for f in facets:
        k = len(f)
        while len(by_dim) < k:
            by_dim.append(set())
        if f in by_dim[k - 1]:
            continue
        for size in range(1, k + 1):
            bucket = by_dim[size - 1]
            if size == k:
                bucket.add(f)
            else:
                bucket.update(combinations(f, size))
    return tuple(tuple(sorted(s)) for s in by_dim)


def build_complex(facets: Iterable[Sequence[int]], num_vertices: int) -> SimplicialComplex:
    """Close a list of facets downward into a complex on ``range(num_vertices)``.

    Every vertex label in ``range(num_vertices)`` is a 0-face, whether or not it
    appears in a facet.
    """
    if num_vertices < 0:
        raise ComplexError("num_vertices must be nonnegative")
    canon = []
    for f in facets:
        t = tuple(sorted(int(v) for v in f))
        if not t:
            continue
        if len(set(t)) != len(t):
            raise ComplexError(f"repeated vertex in face {tuple(f)}")
        if t[0] < 0 or t[-1] >= num_vertices:
            raise ComplexError(f"vertex out of range in face {tuple(f)}")
        canon.append(t)
    canon.extend((v,) for v in range(num_vertices))
    return SimplicialComplex(num_vertices, _closure(canon))


def relabel(X: SimplicialComplex, perm: Sequence[int]) -> SimplicialComplex:
    """Apply the vertex bijection ``v -> perm[v]``."""
    if sorted(perm) != list(range(X.num_vertices)):
        raise ComplexError("relabeling must be a permutation of the vertices")
    return build_complex([[perm[v] for v in f] for f in X.facets], X.num_vertices)


@dataclass(frozen=True)
class DegreeProfile:
    """``delta[(i, j)]``: max number of j-faces containing a single i-face."""

    delta: Mapping[tuple[int, int], int]
    delta_max: int


def degree_profile(X: SimplicialComplex) -> DegreeProfile:
    delta: dict[tuple[int, int], int] = {}
    for j in range(1, X.dimension + 1):
        counts: list[dict[Face, int]] = [dict() for _ in range(j)]
        for g in X.faces[j]:
            for i in range(j):
                c = counts[i]
                for sub in combinations(g, i + 1):
                    c[sub] = c.get(sub, 0) + 1
        for i in range(j):
            delta[(i, j)] = max(counts[i].values(), default=0)
    return DegreeProfile(delta, max(delta.values(), default=0))


def euler_characteristic(X: SimplicialComplex) -> int:
    return sum((-1) ** i * n for i, n in enumerate(X.f_vector))


@dataclass
class IntegerMatrix:
    """Sparse integer matrix; ``entries`` maps (row, col) to a nonzero int."""

    rows: int
    cols: int
    entries: dict[tuple[int, int], int] = field(default_factory=dict)

    def __post_init__(self):
        for (r, c), v in list(self.entries.items()):
            if not (0 <= r < self.rows and 0 <= c < self.cols):
                raise IndexError(f"entry ({r}, {c}) outside {self.rows}x{self.cols}")
            if v == 0:
                del self.entries[(r, c)]

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence[int]], ncols: int | None = None) -> "IntegerMatrix":
        m = len(rows)
        n = len(rows[0]) if rows else (ncols or 0)
        entries = {(i, j): int(v) for i, row in enumerate(rows) for j, v in enumerate(row) if v}
        return cls(m, n, entries)

    def to_dense(self) -> list[list[int]]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    def columns(self) -> list[dict[int, int]]:
        cols: list[dict[int, int]] = [dict() for _ in range(self.cols)]
        for (r, c), v in self.entries.items():
            cols[c][r] = v
        return cols

    def transpose(self) -> "IntegerMatrix":
        return IntegerMatrix(self.cols, self.rows, {(c, r): v for (r, c), v in self.entries.items()})

    def __matmul__(self, other: "IntegerMatrix") -> "IntegerMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        by_row: dict[int, list[tuple[int, int]]] = {}
        for (r, c), v in other.entries.items():
            by_row.setdefault(r, []).append((c, v))
        out: dict[tuple[int, int], int] = {}
        for (r, k), v in self.entries.items():
            for c, w in by_row.get(k, ()):
                out[(r, c)] = out.get((r, c), 0) + v * w
        return IntegerMatrix(self.rows, other.cols, out)

    def apply(self, vec: Mapping[int, int]) -> dict[int, int]:
        """Sparse matrix-vector product; vectors are dicts index -> value."""
        out: dict[int, int] = {}
        for (r, c), v in self.entries.items():
            x = vec.get(c)
            if x:
                out[r] = out.get(r, 0) + v * x
        return {r: v for r, v in out.items() if v}

    def is_zero(self) -> bool:
        return not self.entries


def boundary_matrix(X: SimplicialComplex, i: int) -> IntegerMatrix:
    """The i-th boundary map: rows are (i-1)-faces, columns are i-faces."""
    if not 1 <= i <= X.dimension:
        raise ComplexError(f"boundary index {i} outside 1..{X.dimension}")
    row_index = X.index[i - 1]
    entries = {}
    for c, f in enumerate(X.faces[i]):
        for k in range(i + 1):
            entries[(row_index[f[:k] + f[k + 1:]], c)] = -1 if k & 1 else 1
    return IntegerMatrix(len(X.faces[i - 1]), len(X.faces[i]), entries)


def chain_boundary(X: SimplicialComplex, i: int, chain: Mapping[Face, int]) -> dict[Face, int]:
    """Boundary of an i-chain given as {face: coefficient}."""
    out: dict[Face, int] = {}
    for f, a in chain.items():
        if len(f) != i + 1 or f not in X.index[i]:
            raise ComplexError(f"{f} is not an {i}-face")
        for k in range(i + 1):
            g = f[:k] + f[k + 1:]
            out[g] = out.get(g, 0) + (-a if k & 1 else a)
    return {g: a for g, a in out.items() if a}


def suspension(X: SimplicialComplex) -> SimplicialComplex:
    """Suspension with apexes 0 and 1 placed first; old vertex v becomes v + 2."""
    facets = []
    for f in X.facets:
        g = tuple(v + 2 for v in f)
        facets.append((0,) + g)
        facets.append((1,) + g)
    return build_complex(facets, X.num_vertices + 2)


def disjoint_union(complexes: Sequence[SimplicialComplex]) -> SimplicialComplex:
    facets = []
    offset = 0
    for X in complexes:
        facets.extend(tuple(v + offset for v in f) for f in X.facets)
        offset += X.num_vertices
    return build_complex(facets, offset)


def pattern_complex(X: SimplicialComplex, colors: Sequence[int]) -> SimplicialComplex:
    """Quotient of X by a proper vertex coloring.

    The vertices of the result are the used colors, relabeled to ``0..k-1`` in
    increasing color order; a color set is a face when some face of X carries
    exactly those colors.
    """
    if len(colors) != X.num_vertices:
        raise ComplexError("coloring must assign a color to every vertex")
    for u, v in X.faces_of_dim(1):
        if colors[u] == colors[v]:
            raise ComplexError(f"coloring is not proper on edge ({u}, {v})")
    used = sorted(set(colors))
    rank = {c: k for k, c in enumerate(used)}
    images = {tuple(sorted(rank[colors[v]] for v in f)) for f in X.facets}
    return build_complex(images, len(used))


@dataclass(frozen=True)
class GluingMap:
    """Identifies an induced subcomplex S2 of B with a subcomplex S1 of A.

    ``vertex_map`` sends vertices of B to vertices of A.  ``source`` lists the
    faces of S2; when omitted, S2 is the subcomplex of B induced on the keys of
    ``vertex_map``.
    """

    vertex_map: Mapping[int, int]
    source: frozenset[Face] | None = None


def _check_gluing(A: SimplicialComplex, B: SimplicialComplex, g: GluingMap) -> frozenset[Face]:
    vmap = g.vertex_map
    if len(set(vmap.values())) != len(vmap):
        raise ComplexError("gluing map is not injective")
    for b, a in vmap.items():
        if not 0 <= b < B.num_vertices:
            raise ComplexError(f"gluing source vertex {b} not in B")
        if not 0 <= a < A.num_vertices:
            raise ComplexError(f"gluing target vertex {a} not in A")
    keys = set(vmap)
    induced = frozenset(f for f in B.face_set if keys.issuperset(f))
    if g.source is None:
        source = induced
    else:
        source = frozenset(tuple(sorted(f)) for f in g.source)
        if not source <= B.face_set:
            raise ComplexError("gluing source contains faces not in B")
        if {v for f in source for v in f} != keys:
            raise ComplexError("gluing source vertices differ from the vertex map domain")
        if source != induced:
            raise ComplexError("gluing source is not an induced subcomplex of B")
    for f in source:
        if tuple(sorted(vmap[v] for v in f)) not in A.face_set:
            raise ComplexError(f"image of {f} is not a face of A")
    return source


def attach_with_map(A: SimplicialComplex, B: SimplicialComplex,
                    g: GluingMap) -> tuple[SimplicialComplex, list[int]]:
    """Glue B onto A along ``g``; also return where each B vertex went.

    A keeps its labels.  Vertices of B outside the glued subcomplex follow,
    in B's order.  The result is the pattern complex of the disjoint union
    under the coloring that merges each glued pair.
    """
    _check_gluing(A, B, g)
    vmap = g.vertex_map
    nA = A.num_vertices
    b_to_x = []
    nxt = nA
    for b in range(B.num_vertices):
        if b in vmap:
            b_to_x.append(vmap[b])
        else:
            b_to_x.append(nxt)
            nxt += 1
    # The pattern complex of A + B under this coloring is just the union of
    # A's facets and the recolored facets of B; skip building A + B itself.
    images = list(A.facets)
    images.extend(tuple(sorted(b_to_x[v] for v in f)) for f in B.facets)
    return build_complex(images, nxt), b_to_x


def attach(A: SimplicialComplex, B: SimplicialComplex, g: GluingMap) -> SimplicialComplex:
    return attach_with_map(A, B, g)[0]


def read_complex(path) -> SimplicialComplex:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ComplexError(f"malformed complex file: {exc}") from exc
    return complex_from_json(data)


def complex_from_json(data) -> SimplicialComplex:
    if not isinstance(data, dict) or not {"num_vertices", "dimension", "facets"} <= set(data):
        raise ComplexError("complex file needs num_vertices, dimension and facets")
    n, dim, facets = data["num_vertices"], data["dimension"], data["facets"]
    if not isinstance(n, int) or not isinstance(dim, int) or not isinstance(facets, list):
        raise ComplexError("bad field types in complex file")
    for f in facets:
        if not isinstance(f, list) or not f or not all(isinstance(v, int) for v in f):
            raise ComplexError(f"bad facet {f!r}")
        if any(a >= b for a, b in zip(f, f[1:])):
            raise ComplexError(f"facet {f} is not strictly increasing")
    X = build_complex(facets, n)
    if X.dimension != dim:
        raise ComplexError(f"declared dimension {dim} but facets give {X.dimension}")
    return X


def write_complex(X: SimplicialComplex, path) -> None:
    with open(path, "w") as fh:
        json.dump(X.to_json(), fh)
        fh.write("\n")
