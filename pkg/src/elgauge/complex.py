"""Simplicial complexes and their dual (triangle-dual) cell decompositions.

A dual cell ``c_sigma`` is addressed by the simplex ``sigma`` it is dual to
(a sorted vertex tuple).  ``dim c_sigma = n - dim sigma`` and
``c_sigma`` lies in the closure of ``c_tau`` exactly when ``tau`` is a face
of ``sigma``.  So the n-cells are the vertices, the 0-cells are the facets.
"""
from __future__ import annotations

import hashlib
import itertools
from collections import defaultdict, deque
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .abelian import AbHom, FGAbelianGroup, zeros

Simplex = Tuple[int, ...]
Cell = Tuple[int, ...]


class InvalidTriangulation(ValueError):
    pass


class PeriodTooSmall(ValueError):
    pass


class NotOriented(ValueError):
    pass


class FacetFileError(ValueError):
    pass


def perm_sign(seq: Sequence[int]) -> int:
    """Sign of the permutation sorting ``seq`` (entries distinct)."""
    s = list(seq)
    sign = 1
    for i in range(len(s)):
        for j in range(i + 1, len(s)):
            if s[i] > s[j]:
                sign = -sign
    return sign


# ---------------------------------------------------------------------------
# simplicial complexes
# ---------------------------------------------------------------------------

class SimplicialComplex:
    """Pure simplicial complex given by its facets.

    ``orientation`` (optional) maps each facet to +1/-1 relative to the
    sorted vertex order.
    """

    def __init__(self, n_vertices: int, facets: Iterable[Sequence[int]],
                 orientation: Optional[Dict[Simplex, int]] = None):
        fs = [tuple(sorted(int(v) for v in f)) for f in facets]
        seen = set()
        for f in fs:
            if f in seen:
                raise InvalidTriangulation(f"duplicate facet {f}")
            if len(set(f)) != len(f):
                raise InvalidTriangulation(f"degenerate facet {f}")
            for v in f:
                if not 0 <= v < n_vertices:
                    raise InvalidTriangulation(f"vertex id {v} out of range")
            seen.add(f)
        if not fs:
            raise InvalidTriangulation("empty facet list")
        self.n_vertices = int(n_vertices)
        self.facets: List[Simplex] = sorted(fs)
        self.orientation = dict(orientation) if orientation else None
        self._faces: Optional[List[List[Simplex]]] = None

    @property
    def dim(self) -> int:
        return max(len(f) for f in self.facets) - 1

    def is_pure(self) -> bool:
        return len({len(f) for f in self.facets}) == 1

    def faces(self, k: int) -> List[Simplex]:
        if self._faces is None:
            by_dim: List[set] = [set() for _ in range(self.dim + 1)]
            for f in self.facets:
                for r in range(1, len(f) + 1):
                    by_dim[r - 1].update(itertools.combinations(f, r))
            self._faces = [sorted(s) for s in by_dim]
        if k < 0 or k > self.dim:
            return []
        return self._faces[k]

    def all_faces(self) -> List[Simplex]:
        return [s for k in range(self.dim + 1) for s in self.faces(k)]

    def f_vector(self) -> List[int]:
        return [len(self.faces(k)) for k in range(self.dim + 1)]

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * c for k, c in enumerate(self.f_vector()))

    def with_orientation(self, orientation: Dict[Simplex, int]) -> "SimplicialComplex":
        return SimplicialComplex(self.n_vertices, self.facets, orientation)

    def reversed(self) -> "SimplicialComplex":
        if self.orientation is None:
            raise NotOriented("complex carries no orientation")
        return self.with_orientation({f: -s for f, s in self.orientation.items()})

    def oriented(self) -> "SimplicialComplex":
        """Copy carrying a compatible orientation (computed if absent)."""
        if self.orientation is not None:
            return self
        rep = validate_triangulation(self)
        if not rep.orientable:
            raise NotOriented("triangulation is not orientable")
        return self.with_orientation(rep.orientation)

    def content_hash(self) -> str:
        return hashlib.sha256(format_facets(self).encode()).hexdigest()[:16]

    def __eq__(self, other):
        return (isinstance(other, SimplicialComplex) and self.n_vertices == other.n_vertices
                and self.facets == other.facets)

    def __hash__(self):
        return hash((self.n_vertices, tuple(self.facets)))

    def __repr__(self):
        return f"SimplicialComplex(dim={self.dim}, vertices={self.n_vertices}, facets={len(self.facets)})"

    # chain complex of the triangulation itself
    def boundary_maps(self) -> List[AbHom]:
        """Oriented simplicial boundaries ``[d_1, ..., d_n]``."""
        out = []
        for k in range(1, self.dim + 1):
            rows = {s: i for i, s in enumerate(self.faces(k - 1))}
            cols = self.faces(k)
            M = zeros(len(rows), len(cols))
            for j, s in enumerate(cols):
                for i in range(len(s)):
                    M[rows[s[:i] + s[i + 1:]]][j] += (-1) ** i
            out.append(AbHom(FGAbelianGroup(len(cols)), FGAbelianGroup(len(rows)), M))
        return out

    def coboundary_matrix(self, k: int) -> List[List[int]]:
        """Matrix of delta: C^k -> C^{k+1} (rows: (k+1)-simplices)."""
        rows = self.faces(k + 1)
        cols = {s: j for j, s in enumerate(self.faces(k))}
        M = zeros(len(rows), len(cols))
        for i, s in enumerate(rows):
            for r in range(len(s)):
                M[i][cols[s[:r] + s[r + 1:]]] += (-1) ** r
        return M


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------

@dataclass
class ValidationReport:
    pure: bool
    pseudomanifold: bool
    connected: bool
    orientable: bool
    orientation: Optional[Dict[Simplex, int]] = None
    obstruction: Optional[List[Simplex]] = None   # facets along an orientation-reversing cycle
    messages: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.pure and self.pseudomanifold and self.connected and self.orientable

    def as_dict(self) -> dict:
        return {
            "pure": self.pure, "pseudomanifold": self.pseudomanifold,
            "connected": self.connected, "orientable": self.orientable,
            "ok": self.ok, "messages": list(self.messages),
            "obstruction": [list(f) for f in self.obstruction] if self.obstruction else None,
        }


def _ridges(K: SimplicialComplex) -> Dict[Simplex, List[Tuple[Simplex, int]]]:
    """ridge -> list of (facet, position of the removed vertex)."""
    out: Dict[Simplex, List[Tuple[Simplex, int]]] = defaultdict(list)
    for f in K.facets:
        for i in range(len(f)):
            out[f[:i] + f[i + 1:]].append((f, i))
    return out


def validate_triangulation(K: SimplicialComplex) -> ValidationReport:
    msgs: List[str] = []
    pure = K.is_pure()
    if not pure:
        msgs.append("facets have different dimensions")
    ridges = _ridges(K)
    bad = [r for r, fs in ridges.items() if len(fs) != 2]
    pseudo = pure and not bad
    if bad:
        msgs.append(f"{len(bad)} ridge(s) not shared by exactly two facets, e.g. {bad[0]}")

    # connectivity through codimension-one adjacency
    adj: Dict[Simplex, List[Tuple[Simplex, Simplex]]] = defaultdict(list)
    for r, fs in ridges.items():
        for (a, _), (b, _) in itertools.combinations(fs, 2):
            adj[a].append((b, r))
            adj[b].append((a, r))
    start = K.facets[0]
    seen = {start}
    dq = deque([start])
    while dq:
        f = dq.popleft()
        for g, _ in adj[f]:
            if g not in seen:
                seen.add(g)
                dq.append(g)
    connected = len(seen) == len(K.facets)
    if not connected:
        msgs.append("facets are not connected through shared ridges")

    orientable = False
    orient: Optional[Dict[Simplex, int]] = None
    obstruction = None
    if pseudo and connected:
        orient, obstruction = _orient(K, ridges)
        orientable = orient is not None
        if not orientable:
            msgs.append("no compatible orientation exists")
    return ValidationReport(pure, pseudo, connected, orientable, orient, obstruction, msgs)


def _orient(K, ridges):
    # induced sign of facet f on the ridge opposite position i: s_f * (-1)^i;
    # neighbours must induce opposite signs.
    sign: Dict[Simplex, int] = {K.facets[0]: 1}
    parent: Dict[Simplex, Optional[Simplex]] = {K.facets[0]: None}
    by_facet: Dict[Simplex, List[Tuple[int, Simplex, int]]] = defaultdict(list)
    for r, fs in ridges.items():
        (a, i), (b, j) = fs
        by_facet[a].append((i, b, j))
        by_facet[b].append((j, a, i))
    dq = deque([K.facets[0]])
    while dq:
        f = dq.popleft()
        for i, g, j in by_facet[f]:
            want = -sign[f] * (-1) ** i * (-1) ** j
            if g not in sign:
                sign[g] = want
                parent[g] = f
                dq.append(g)
            elif sign[g] != want:
                return None, _tree_cycle(parent, f, g)
    return sign, None


def _tree_cycle(parent, a, b) -> List[Simplex]:
    def path(x):
        out = []
        while x is not None:
            out.append(x)
            x = parent[x]
        return out
    pa, pb = path(a), path(b)
    common = set(pa) & set(pb)
    ia = next(k for k, x in enumerate(pa) if x in common)
    ib = next(k for k, x in enumerate(pb) if x in common)
    return pa[: ia + 1] + list(reversed(pb[:ib]))


# ---------------------------------------------------------------------------
# generators
# ---------------------------------------------------------------------------

def sphere_complex(n: int) -> SimplicialComplex:
    """Boundary of the (n+1)-simplex."""
    if n < 1:
        raise ValueError("sphere dimension must be >= 1")
    return SimplicialComplex(n + 2, itertools.combinations(range(n + 2), n + 1))


def epsilon_torus(n: int, m: int) -> SimplicialComplex:
    """Freudenthal (Kuhn) triangulation of the n-torus on an m^n vertex grid.

    Each unit cube is cut into n! simplices along monotone lattice paths.
    A period of 3 is the smallest giving a simplicial complex.
    """
    if n < 1:
        raise ValueError("torus dimension must be >= 1")
    if m < 3:
        raise PeriodTooSmall(f"period {m} too small (need m >= 3)")

    def vid(x):
        return sum((c % m) * m ** i for i, c in enumerate(x))

    facets = set()
    for base in itertools.product(range(m), repeat=n):
        for perm in itertools.permutations(range(n)):
            x = list(base)
            simplex = [vid(x)]
            for axis in perm:
                x[axis] += 1
                simplex.append(vid(x))
            facets.add(tuple(sorted(simplex)))
    return SimplicialComplex(m ** n, facets)


# ---------------------------------------------------------------------------
# dual cell complex
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OrientedTriple:
    sigma: Cell                       # the (n-2)-cell, i.e. a 2-simplex (a, b, c)
    n_cells: Tuple[Cell, Cell, Cell]  # (v1, v2, v3), 1-vertex simplices
    co_cells: Tuple[Cell, Cell, Cell] # tau_i = v_j cap v_k
    cyclic_class: int

    def permuted(self, perm: Sequence[int]) -> "OrientedTriple":
        """Relabel by a permutation of (1,2,3) in one-line notation:
        the new i-th n-cell is the old ``perm^-1(i)``-th one."""
        inv = [0, 0, 0]
        for i, j in enumerate(perm):
            inv[j - 1] = i
        v = tuple(self.n_cells[inv[i]] for i in range(3))
        t = tuple(self.co_cells[inv[i]] for i in range(3))
        return OrientedTriple(self.sigma, v, t, self.cyclic_class * perm_sign(perm))

    @property
    def vertices(self) -> Tuple[int, int, int]:
        return tuple(v[0] for v in self.n_cells)


class DualCellComplex:
    def __init__(self, K: SimplicialComplex):
        self.K = K
        self.n = K.dim
        self._index = {s: i for i, s in enumerate(K.all_faces())}
        self._cells_by_dim: List[List[Cell]] = [K.faces(self.n - k) for k in range(self.n + 1)]
        cof: Dict[Simplex, List[Simplex]] = defaultdict(list)
        for k in range(1, self.n + 1):
            for s in K.faces(k):
                for i in range(len(s)):
                    cof[s[:i] + s[i + 1:]].append(s)
        self._cofaces = {s: sorted(v) for s, v in cof.items()}
        self._facets_containing: Dict[Simplex, List[Simplex]] = defaultdict(list)
        for f in K.facets:
            for r in range(1, len(f) + 1):
                for s in itertools.combinations(f, r):
                    self._facets_containing[s].append(f)

    # basic queries --------------------------------------------------------
    def cells(self, k: int) -> List[Cell]:
        return self._cells_by_dim[k] if 0 <= k <= self.n else []

    def all_cells(self) -> List[Cell]:
        return [c for k in range(self.n + 1) for c in self.cells(k)]

    def cell_dim(self, c: Cell) -> int:
        return self.n - (len(c) - 1)

    def counts(self) -> List[int]:
        """Number of k-cells for k = 0..n."""
        return [len(self.cells(k)) for k in range(self.n + 1)]

    def cell_id(self, c: Cell) -> int:
        return self._index[c]

    def has_cell(self, c) -> bool:
        return tuple(c) in self._index

    def in_closure(self, small: Cell, big: Cell) -> bool:
        """``c_small`` contained in the closure of ``c_big``."""
        return set(big) <= set(small)

    def boundary_cells(self, c: Cell) -> List[Cell]:
        """(dim-1)-cells on the boundary of ``c``."""
        return self._cofaces.get(c, [])

    def incident_higher(self, c: Cell) -> List[Cell]:
        """(dim+1)-cells whose closure contains ``c``."""
        if len(c) == 1:
            return []
        return [c[:i] + c[i + 1:] for i in range(len(c))]

    def zero_cells_in_closure(self, c: Cell) -> List[Cell]:
        return self._facets_containing[c]

    def n_cells_around(self, c: Cell) -> List[Cell]:
        """n-cells whose closures intersect in ``closure(c)``."""
        return [(v,) for v in c]

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * c for k, c in enumerate(self.counts()))

    def edge_ends(self, e: Cell) -> Tuple[Cell, Cell]:
        """(start, end) 0-cells of the 1-cell ``e``.

        The 1-cell is oriented so that (e, direction) agrees with the
        manifold orientation: it points into the facet F whose ordering
        (e..., F - e) is positively oriented.
        """
        if self.cell_dim(e) != 1:
            raise ValueError(f"{e} is not a 1-cell")
        cache = self.__dict__.setdefault("_ends", {})
        if e in cache:
            return cache[e]
        o = self.K.orientation
        if o is None:
            raise NotOriented("complex carries no orientation")
        a, b = self._facets_containing[e]
        rest = tuple(v for v in a if v not in e)
        if o[a] * perm_sign(e + rest) > 0:
            a, b = b, a
        cache[e] = (a, b)
        return a, b

    def one_cells_in_closure(self, c: Cell) -> List[Cell]:
        n = self.n
        if self.cell_dim(c) < 1:
            return []
        if self.cell_dim(c) == 1:
            return [c]
        out = set()
        for f in self._facets_containing[c]:
            for i in range(len(f)):
                r = f[:i] + f[i + 1:]
                if set(c) <= set(r):
                    out.add(r)
        return sorted(out)

    def subcells(self, c: Cell, min_dim: int = 0) -> List[Cell]:
        """All cells in the closure of ``c`` (``c`` included) of dim >= min_dim."""
        out = set()
        for f in self._facets_containing[c]:
            rest = [v for v in f if v not in c]
            for r in range(len(rest) + 1):
                for extra in itertools.combinations(rest, r):
                    s = tuple(sorted(c + extra))
                    if self.cell_dim(s) >= min_dim:
                        out.add(s)
        return sorted(out, key=lambda s: (-len(s), s))

    def incidence(self, big: Cell, small: Cell) -> int:
        """Coefficient of ``small`` in the cellular boundary of ``big``."""
        if len(small) != len(big) + 1 or not set(big) <= set(small):
            return 0
        extra = next(v for v in small if v not in big)
        return (-1) ** small.index(extra)

    def content_hash(self) -> str:
        return self.K.content_hash()

    # chain complex --------------------------------------------------------
    def boundary_maps(self) -> List[AbHom]:
        """Cellular boundaries ``[d_1, ..., d_n]`` of the dual complex.

        Under the cell/simplex correspondence this is the simplicial
        coboundary; signs follow the sorted-vertex incidence numbers.
        """
        out = []
        for k in range(1, self.n + 1):
            # d_k : C_k -> C_{k-1}, k-cells are (n-k)-simplices
            M = self.K.coboundary_matrix(self.n - k)
            out.append(AbHom(FGAbelianGroup(len(self.cells(k))), FGAbelianGroup(len(self.cells(k - 1))), M))
        return out

    # orientation of 2-simplices -----------------------------------------
    def simplex_orientation(self, s: Simplex) -> int:
        """+1 when the sorted order of ``s`` agrees with the orientation
        induced from the manifold (paired with its dual cell)."""
        o = self.K.orientation
        if o is None:
            raise NotOriented("complex carries no orientation")
        f = self._facets_containing[s][0]
        rest = tuple(v for v in f if v not in s)
        return o[f] * perm_sign(s + rest)

    def triple(self, s: Simplex) -> OrientedTriple:
        if len(s) != 3:
            raise ValueError("triples live on 2-simplices")
        a, b, c = s
        return OrientedTriple(s, ((a,), (b,), (c,)), ((b, c), (a, c), (a, b)), self.simplex_orientation(s))


def dualize(K: SimplicialComplex) -> DualCellComplex:
    rep = validate_triangulation(K)
    if not (rep.pure and rep.pseudomanifold and rep.connected):
        raise InvalidTriangulation("; ".join(rep.messages))
    if K.orientation is None and rep.orientable:
        K = K.with_orientation(rep.orientation)
    return DualCellComplex(K)


def oriented_triples(C: DualCellComplex) -> List[OrientedTriple]:
    if C.K.orientation is None:
        raise NotOriented("complex carries no orientation")
    return [C.triple(s) for s in C.K.faces(2)]


def star_and_complement(C: DualCellComplex, cell: Cell) -> Tuple[List[Cell], List[Cell]]:
    cell = tuple(cell)
    if not C.has_cell(cell):
        raise KeyError(f"no cell {cell}")
    star, rest = [], []
    for c in C.all_cells():
        # closures meet iff the union of the two simplices is a simplex
        u = tuple(sorted(set(c) | set(cell)))
        (star if C.has_cell(u) else rest).append(c)
    return star, rest


# ---------------------------------------------------------------------------
# facet-list text format
# ---------------------------------------------------------------------------

def format_facets(K: SimplicialComplex) -> str:
    lines = [f"dim {K.dim}  vertices {K.n_vertices}"]
    lines += [" ".join(map(str, f)) for f in K.facets]
    return "\n".join(lines) + "\n"


def parse_facets(text: str) -> SimplicialComplex:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise FacetFileError("empty facet file")
    head = lines[0].split()
    if len(head) != 4 or head[0] != "dim" or head[2] != "vertices":
        raise FacetFileError("header must read 'dim <n>  vertices <V>'")
    try:
        n, nv = int(head[1]), int(head[3])
        facets = [tuple(int(x) for x in ln.split()) for ln in lines[1:]]
    except ValueError as e:
        raise FacetFileError(f"non-integer entry: {e}") from None
    seen = set()
    for f in facets:
        if len(f) != n + 1:
            raise FacetFileError(f"facet {f} does not have {n + 1} vertices")
        if any(not 0 <= v < nv for v in f):
            raise FacetFileError(f"facet {f} has out-of-range vertex id")
        key = tuple(sorted(f))
        if key in seen:
            raise FacetFileError(f"duplicate facet {f}")
        seen.add(key)
    try:
        return SimplicialComplex(nv, facets)
    except InvalidTriangulation as e:
        raise FacetFileError(str(e)) from None


def load_facets(path) -> SimplicialComplex:
    with open(path) as fh:
        return parse_facets(fh.read())


def save_facets(K: SimplicialComplex, path) -> None:
    with open(path, "w") as fh:
        fh.write(format_facets(K))
