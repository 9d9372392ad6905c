"""Finitely generated abelian groups and exact integer linear algebra.

Matrices are plain ``list[list[int]]`` (row major) so that entries are
arbitrary-precision Python ints.  A matrix with zero rows cannot carry its
column count, so every function that could meet one takes the shape
explicitly or reads it from the surrounding :class:`AbHom`.

Groups are presented in invariant-factor form ``Z^r + Z/d_1 + ... + Z/d_t``;
element coordinates list the free part first, then the torsion part.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, List, Optional, Sequence, Tuple

Matrix = List[List[int]]


class EmbeddingNotInjective(ValueError):
    pass


class NotAChainComplex(ValueError):
    pass


# ---------------------------------------------------------------------------
# matrix helpers
# ---------------------------------------------------------------------------

def identity(n: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def zeros(r: int, c: int) -> Matrix:
    return [[0] * c for _ in range(r)]


def matmul(A: Matrix, B: Matrix, inner: Optional[int] = None, cols: Optional[int] = None) -> Matrix:
    """Product ``A @ B``.  ``cols`` is needed when ``B`` has no rows."""
    if cols is None:
        cols = len(B[0]) if B else 0
    out = zeros(len(A), cols)
    for i, row in enumerate(A):
        o = out[i]
        for k, a in enumerate(row):
            if a:
                bk = B[k]
                for j in range(cols):
                    o[j] += a * bk[j]
    return out


def matvec(A: Matrix, v: Sequence[int]) -> List[int]:
    nz = [(j, x) for j, x in enumerate(v) if x]
    return [sum(row[j] * x for j, x in nz) for row in A]


def transpose(A: Matrix, cols: Optional[int] = None) -> Matrix:
    if cols is None:
        cols = len(A[0]) if A else 0
    return [[A[i][j] for i in range(len(A))] for j in range(cols)]


def columns(A: Matrix, ncols: int) -> List[List[int]]:
    return [[row[j] for row in A] for j in range(ncols)]


def from_columns(cols: Sequence[Sequence[int]], nrows: int) -> Matrix:
    return [[c[i] for c in cols] for i in range(nrows)]


def det(A: Matrix) -> int:
    """Exact determinant (Bareiss fraction-free elimination)."""
    n = len(A)
    if n == 0:
        return 1
    M = [list(r) for r in A]
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k] != 0:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------

@dataclass
class SNFResult:
    """``U @ A @ V == D`` with ``U``, ``V`` unimodular and ``D`` diagonal.

    ``Uinv`` is the inverse of ``U``, tracked during elimination.
    """
    U: Matrix
    D: Matrix
    V: Matrix
    rows: int
    cols: int
    Uinv: Optional[Matrix] = None

    @property
    def diagonal(self) -> List[int]:
        return [self.D[i][i] for i in range(min(self.rows, self.cols))]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)


def smith_normal_form(A: Matrix, ncols: Optional[int] = None) -> SNFResult:
    rows = len(A)
    cols = ncols if ncols is not None else (len(A[0]) if A else 0)
    D = [list(map(int, r)) for r in A]
    U = identity(rows)
    Ui = identity(rows)
    V = identity(cols)

    # row ops hit D and U (and the columns of Ui inversely); column ops hit D and V
    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]
        for r in Ui:
            r[i], r[j] = r[j], r[i]

    def swap_cols(i, j):
        for M in (D, V):
            for r in M:
                r[i], r[j] = r[j], r[i]

    def add_row(dst, src, q):  # row_dst += q * row_src
        if q:
            for M in (D, U):
                a, b = M[dst], M[src]
                for k in range(len(a)):
                    if b[k]:
                        a[k] += q * b[k]
            for r in Ui:
                if r[dst]:
                    r[src] -= q * r[dst]

    def add_col(dst, src, q):
        if q:
            for M in (D, V):
                for r in M:
                    if r[src]:
                        r[dst] += q * r[src]

    def neg_row(i):
        D[i] = [-x for x in D[i]]
        U[i] = [-x for x in U[i]]
        for r in Ui:
            r[i] = -r[i]

    def smallest(t):
        best = None
        for i in range(t, rows):
            Di = D[i]
            for j in range(t, cols):
                x = Di[j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        return best
        return best

    t = 0
    while t < min(rows, cols):
        best = smallest(t)
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            p = D[t][t]
            dirty = False
            for i in range(t + 1, rows):
                if D[i][t]:
                    add_row(i, t, -(D[i][t] // p))
                    if D[i][t]:
                        dirty = True
            for j in range(t + 1, cols):
                if D[t][j]:
                    add_col(j, t, -(D[t][j] // p))
                    if D[t][j]:
                        dirty = True
            if dirty:
                # a remainder survived: move the smallest one into the pivot
                best = None
                for i in range(t, rows):
                    x = D[i][t]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, "r")
                for j in range(t, cols):
                    x = D[t][j]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), j, "c")
                if best[2] == "r":
                    swap_rows(t, best[1])
                else:
                    swap_cols(t, best[1])
                continue
            # row and column clear; enforce divisibility on the remaining block
            bad = None
            if abs(p) != 1:
                for i in range(t + 1, rows):
                    for j in range(t + 1, cols):
                        if D[i][j] % p:
                            bad = i
                            break
                    if bad is not None:
                        break
            if bad is None:
                break
            add_row(t, bad, 1)
        if D[t][t] < 0:
            neg_row(t)
        t += 1
    return SNFResult(U, D, V, rows, cols, Ui)


def _inverse_unimodular(U: Matrix) -> Matrix:
    """Inverse of a unimodular integer matrix."""
    n = len(U)
    s = smith_normal_form(U, n)
    # Us U V = I  =>  U^{-1} = V Us
    return matmul(s.V, s.U, cols=n)


# ---------------------------------------------------------------------------
# groups, elements, homomorphisms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FGAbelianGroup:
    free_rank: int = 0
    torsion: Tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(int(d) for d in self.torsion))
        if self.free_rank < 0:
            raise ValueError("negative free rank")
        for k, d in enumerate(self.torsion):
            if d < 2:
                raise ValueError(f"torsion coefficient {d} < 2")
            if k and d % self.torsion[k - 1]:
                raise ValueError("torsion coefficients must form a divisibility chain")

    @classmethod
    def Z(cls, n: int = 1) -> "FGAbelianGroup":
        return cls(n, ())

    @classmethod
    def cyclic(cls, d: int) -> "FGAbelianGroup":
        if d == 0:
            return cls(1)
        if abs(d) == 1:
            return cls()
        return cls(0, (abs(d),))

    @classmethod
    def trivial(cls) -> "FGAbelianGroup":
        return cls()

    @property
    def ngens(self) -> int:
        return self.free_rank + len(self.torsion)

    @property
    def orders(self) -> Tuple[int, ...]:
        """Order of each generator, 0 for free ones."""
        return (0,) * self.free_rank + self.torsion

    def is_trivial(self) -> bool:
        return self.ngens == 0

    def relation_matrix(self) -> Matrix:
        """Columns d_i e_i for each torsion generator."""
        m = self.ngens
        rel = zeros(m, len(self.torsion))
        for k, d in enumerate(self.torsion):
            rel[self.free_rank + k][k] = d
        return rel

    def reduce(self, coords: Sequence[int]) -> Tuple[int, ...]:
        if len(coords) != self.ngens:
            raise ValueError(f"expected {self.ngens} coordinates, got {len(coords)}")
        return tuple(int(c) % o if o else int(c) for c, o in zip(coords, self.orders))

    def element(self, coords: Sequence[int]) -> "AbElement":
        return AbElement(self, self.reduce(coords))

    def zero(self) -> "AbElement":
        return AbElement(self, (0,) * self.ngens)

    def generator(self, i: int) -> "AbElement":
        c = [0] * self.ngens
        c[i] = 1
        return self.element(c)

    def direct_sum(self, other: "FGAbelianGroup") -> "FGAbelianGroup":
        rel = _block(self.relation_matrix(), other.relation_matrix(), self, other)
        return _from_relations(self.ngens + other.ngens,
                               columns(rel, len(self.torsion) + len(other.torsion)))[0]

    def __str__(self) -> str:
        parts = []
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        parts += [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) if parts else "0"


def _block(A: Matrix, B: Matrix, ga: FGAbelianGroup, gb: FGAbelianGroup) -> Matrix:
    ra, ca = ga.ngens, len(ga.torsion)
    rb, cb = gb.ngens, len(gb.torsion)
    M = zeros(ra + rb, ca + cb)
    for i in range(ra):
        for j in range(ca):
            M[i][j] = A[i][j]
    for i in range(rb):
        for j in range(cb):
            M[ra + i][ca + j] = B[i][j]
    return M


@dataclass(frozen=True)
class AbElement:
    group: FGAbelianGroup
    coordinates: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coordinates", self.group.reduce(self.coordinates))

    def __add__(self, other: "AbElement") -> "AbElement":
        self._check(other)
        return self.group.element([a + b for a, b in zip(self.coordinates, other.coordinates)])

    def __sub__(self, other: "AbElement") -> "AbElement":
        self._check(other)
        return self.group.element([a - b for a, b in zip(self.coordinates, other.coordinates)])

    def __neg__(self) -> "AbElement":
        return self.group.element([-a for a in self.coordinates])

    def __mul__(self, k: int) -> "AbElement":
        return self.group.element([k * a for a in self.coordinates])

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not any(self.coordinates)

    def _check(self, other):
        if other.group != self.group:
            raise ValueError("elements of different groups")

    def __repr__(self) -> str:
        return f"AbElement({self.group}, {list(self.coordinates)})"


@dataclass(frozen=True)
class AbHom:
    source: FGAbelianGroup
    target: FGAbelianGroup
    matrix: Tuple[Tuple[int, ...], ...] = field(default=())

    def __post_init__(self):
        m = tuple(tuple(int(x) for x in row) for row in self.matrix)
        if len(m) != self.target.ngens:
            raise ValueError("matrix row count must equal target generator count")
        for row in m:
            if len(row) != self.source.ngens:
                raise ValueError("matrix column count must equal source generator count")
        object.__setattr__(self, "matrix", m)
        # torsion generator of order d must land in d-torsion
        for j, d in enumerate(self.source.orders):
            if d:
                img = [d * m[i][j] for i in range(len(m))]
                if any(self.target.reduce(img)):
                    raise ValueError(f"column {j} does not respect torsion")

    @property
    def mat(self) -> Matrix:
        return [list(r) for r in self.matrix]

    def __call__(self, x: AbElement) -> AbElement:
        if x.group != self.source:
            raise ValueError("element not in source")
        return self.target.element(matvec(self.mat, x.coordinates))

    def compose(self, inner: "AbHom") -> "AbHom":
        """``self . inner``"""
        if inner.target != self.source:
            raise ValueError("incompatible homomorphisms")
        M = matmul(self.mat, inner.mat, cols=inner.source.ngens)
        M = [list(r) for r in M]
        for j in range(inner.source.ngens):
            col = self.target.reduce([M[i][j] for i in range(len(M))])
            for i in range(len(M)):
                M[i][j] = col[i]
        return AbHom(inner.source, self.target, M)

    def is_zero(self) -> bool:
        for j in range(self.source.ngens):
            if any(self.target.reduce([r[j] for r in self.matrix])):
                return False
        return True

    @classmethod
    def zero(cls, source: FGAbelianGroup, target: FGAbelianGroup) -> "AbHom":
        return cls(source, target, zeros(target.ngens, source.ngens))

    @classmethod
    def identity(cls, g: FGAbelianGroup) -> "AbHom":
        return cls(g, g, identity(g.ngens))


# ---------------------------------------------------------------------------
# lattices in Z^m
# ---------------------------------------------------------------------------

def _span_basis(gens: Sequence[Sequence[int]], m: int) -> List[List[int]]:
    """Z-basis of the sublattice of Z^m spanned by ``gens``."""
    if not gens:
        return []
    s = smith_normal_form(from_columns(gens, m), len(gens))
    return [[s.Uinv[i][k] * s.D[k][k] for i in range(m)] for k in range(s.rank)]


def _integer_nullspace(A: Matrix, ncols: int) -> List[List[int]]:
    s = smith_normal_form(A, ncols)
    return [[s.V[i][k] for i in range(ncols)] for k in range(s.rank, ncols)]


def _solve_many(basis: Sequence[Sequence[int]], vs: Sequence[Sequence[int]], m: int) -> List[List[int]]:
    """Coordinates of each v in ``vs`` w.r.t. an independent ``basis``."""
    l = len(basis)
    if l == 0:
        if any(any(v) for v in vs):
            raise ValueError("vector not in lattice")
        return [[] for _ in vs]
    s = smith_normal_form(from_columns(basis, m), l)
    out = []
    for v in vs:
        z = matvec(s.U, v)
        w = []
        for k in range(l):
            d = s.D[k][k]
            if d == 0 or z[k] % d:
                raise ValueError("vector not in lattice")
            w.append(z[k] // d)
        if any(z[l:]):
            raise ValueError("vector not in lattice")
        out.append(matvec(s.V, w))
    return out


def _solve_in_basis(basis: Sequence[Sequence[int]], v: Sequence[int], m: int) -> List[int]:
    return _solve_many(basis, [v], m)[0]


@dataclass
class _Subquotient:
    """L / N presented in invariant-factor form.

    ``basis`` spans L inside Z^m; ``coords(v)`` turns v in L into group
    coordinates and ``lifts[i]`` is a vector of L representing generator i.
    """
    group: FGAbelianGroup
    basis: List[List[int]]
    rows: List[List[int]]      # rows of U kept, as maps from L-coordinates
    lifts: List[List[int]]
    m: int

    def coords(self, v: Sequence[int]) -> Tuple[int, ...]:
        y = self.basis_coords(v)
        return self.group.reduce([sum(a * b for a, b in zip(r, y)) for r in self.rows])

    def basis_coords(self, v: Sequence[int]) -> List[int]:
        """Coordinates of v in ``basis``; ValueError if v is not in L."""
        l = len(self.basis)
        if l == 0:
            if any(v):
                raise ValueError("vector not in lattice")
            return []
        s = getattr(self, "_snf", None)
        if s is None:
            s = self._snf = smith_normal_form(from_columns(self.basis, self.m), l)
        z = matvec(s.U, v)
        w = []
        for k in range(l):
            d = s.D[k][k]
            if d == 0 or z[k] % d:
                raise ValueError("vector not in lattice")
            w.append(z[k] // d)
        if any(z[l:]):
            raise ValueError("vector not in lattice")
        return matvec(s.V, w)


def _subquotient(basis: List[List[int]], rel_gens: Sequence[Sequence[int]], m: int) -> _Subquotient:
    l = len(basis)
    R = from_columns(_solve_many(basis, rel_gens, m), l)
    s = smith_normal_form(R, len(rel_gens))
    diag = s.diagonal + [0] * (l - len(s.diagonal))
    order = [k for k in range(l) if diag[k] == 0] + [k for k in range(l) if diag[k] > 1]
    group = FGAbelianGroup(sum(1 for k in order if diag[k] == 0), tuple(diag[k] for k in order if diag[k] > 1))
    rows = [s.U[k] for k in order]
    lifts = []
    for k in order:
        y = [s.Uinv[i][k] for i in range(l)]
        lifts.append([sum(basis[c][i] * y[c] for c in range(l) if y[c]) for i in range(m)])
    return _Subquotient(group, basis, rows, lifts, m)


def _from_relations(m: int, rel_gens: Sequence[Sequence[int]]):
    sq = _subquotient([[1 if i == k else 0 for i in range(m)] for k in range(m)], rel_gens, m)
    return sq.group, sq.rows, sq


# ---------------------------------------------------------------------------
# kernel, image, quotient, homology
# ---------------------------------------------------------------------------

def _kernel_lattice(f: AbHom) -> List[List[int]]:
    """Basis of {x in Z^m : f(x) = 0 in target}; contains the source relations."""
    m, p = f.source.ngens, f.target.ngens
    RH = f.target.relation_matrix()
    q = len(f.target.torsion)
    big = [list(f.matrix[i]) + list(RH[i]) for i in range(p)]
    null = _integer_nullspace(big, m + q)
    if q == 0:
        return null
    return _span_basis([v[:m] for v in null], m)


def kernel(f: AbHom) -> Tuple[FGAbelianGroup, AbHom]:
    m = f.source.ngens
    L = _kernel_lattice(f)
    sq = _subquotient(L, columns(f.source.relation_matrix(), len(f.source.torsion)), m)
    emb = from_columns([f.source.reduce(v) for v in sq.lifts], m)
    return sq.group, AbHom(sq.group, f.source, emb)


def image(f: AbHom) -> Tuple[FGAbelianGroup, AbHom]:
    """Image of ``f`` with its inclusion into the target."""
    p = f.target.ngens
    gens = columns(f.mat, f.source.ngens) + columns(f.target.relation_matrix(), len(f.target.torsion))
    L = _span_basis(gens, p)
    sq = _subquotient(L, columns(f.target.relation_matrix(), len(f.target.torsion)), p)
    inc = from_columns([f.target.reduce(v) for v in sq.lifts], p)
    return sq.group, AbHom(sq.group, f.target, inc)


def is_injective(f: AbHom) -> bool:
    return kernel(f)[0].is_trivial()


def quotient(G: FGAbelianGroup, emb: AbHom) -> Tuple[FGAbelianGroup, AbHom]:
    if emb.target != G:
        raise ValueError("embedding must land in G")
    if not is_injective(emb):
        raise EmbeddingNotInjective("subgroup map is not injective")
    return cokernel(emb)


def cokernel(f: AbHom) -> Tuple[FGAbelianGroup, AbHom]:
    G = f.target
    m = G.ngens
    rel = columns(G.relation_matrix(), len(G.torsion)) + columns(f.mat, f.source.ngens)
    group, rows, _ = _from_relations(m, rel)
    return group, AbHom(G, group, [list(r) for r in rows] if rows else zeros(0, m))


def homology(boundaries: Sequence[AbHom]) -> List[FGAbelianGroup]:
    """``[H_0, ..., H_n]`` for ``boundaries = [d_1, ..., d_n]`` with d_k: C_k -> C_{k-1}."""
    if not boundaries:
        raise ValueError("need at least one boundary map")
    for k in range(len(boundaries) - 1):
        lo, hi = boundaries[k], boundaries[k + 1]
        if hi.target != lo.source:
            raise NotAChainComplex(f"degree mismatch between d_{k + 1} and d_{k + 2}")
        if not lo.compose(hi).is_zero():
            raise NotAChainComplex(f"d_{k + 1} . d_{k + 2} != 0")
    chains = [boundaries[0].target] + [d.source for d in boundaries]
    out = []
    for k, C in enumerate(chains):
        m = C.ngens
        if k == 0:
            L = [[1 if i == j else 0 for i in range(m)] for j in range(m)]
        else:
            L = _kernel_lattice(boundaries[k - 1])
        rel = columns(C.relation_matrix(), len(C.torsion))
        if k < len(boundaries):
            d = boundaries[k]
            rel += columns(d.mat, d.source.ngens)
        out.append(_subquotient(L, rel, m).group)
    return out


def homology_with_reps(boundaries: Sequence[AbHom], k: int) -> _Subquotient:
    """H_k together with coordinate map and cycle representatives."""
    chains = [boundaries[0].target] + [d.source for d in boundaries]
    C = chains[k]
    m = C.ngens
    L = ([[1 if i == j else 0 for i in range(m)] for j in range(m)] if k == 0
         else _kernel_lattice(boundaries[k - 1]))
    rel = columns(C.relation_matrix(), len(C.torsion))
    if k < len(boundaries):
        rel += columns(boundaries[k].mat, boundaries[k].source.ngens)
    return _subquotient(L, rel, m)


def free_hom(M: Matrix, ncols: int) -> AbHom:
    """Homomorphism Z^ncols -> Z^len(M)."""
    return AbHom(FGAbelianGroup(ncols), FGAbelianGroup(len(M)), M)


def solve_integer(A: Matrix, b: Sequence[int], ncols: int) -> Optional[List[int]]:
    """Some integer x with A x = b, or None."""
    s = smith_normal_form(A, ncols)
    z = matvec(s.U, b)
    y = [0] * ncols
    for k in range(len(z)):
        d = s.D[k][k] if k < min(s.rows, ncols) else 0
        if d == 0:
            if z[k]:
                return None
        else:
            if z[k] % d:
                return None
            y[k] = z[k] // d
    return matvec(s.V, y)


def minors_gcd(A: Matrix, r: int, ncols: Optional[int] = None) -> int:
    """gcd of all r x r minors (brute force)."""
    from itertools import combinations
    cols = ncols if ncols is not None else (len(A[0]) if A else 0)
    g = 0
    for rs in combinations(range(len(A)), r):
        for cs in combinations(range(cols), r):
            g = gcd(g, det([[A[i][j] for j in cs] for i in rs]))
    return g
