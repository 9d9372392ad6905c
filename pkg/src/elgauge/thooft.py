"""'t Hooft defects: Seifert chains, linking numbers, the central twist of
a lattice field, and the resulting gerbe data.

Cells of the defect locus L are (n-2)-cells (2-simplices); a Seifert
chain S0 is an integer (n-1)-chain (on 1-simplices) with dS0 = L in the
dual chain complex.  For adjacent n-cells v, w with tau = v cap w,

    Or(S, (v, w)) = sign(w - v) * S0[tau],

so that around an (n-2)-cell sigma = (a, b, c) the sum
Or(a,b) + Or(b,c) + Or(c,a) is the coefficient of sigma in dS0.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .abelian import homology_with_reps, solve_integer
from .complex import Cell, DualCellComplex
from .elgf import ExtendedField, _Labelled, defect_cochain
from .gauge import NotAdjacent, StandardLatticeField, clutch_value, _common

Chain = Dict[Cell, int]


class NotACycle(ValueError):
    pass


class NotNullHomologous(ValueError):
    pass


class WordMeetsDefect(ValueError):
    pass


class NotCentral(ValueError):
    pass


class SeifertMultiplicity(ValueError):
    pass


@dataclass(frozen=True)
class DefectLocus:
    """Oriented (n-2)-cells with integer signs.

    Signs are geometric: +1 means the orientation the manifold induces
    on the cell (for a surface, every 0-cell is positive).  In the dual
    chain basis the coefficient is sign * simplex_orientation(cell).
    """
    cells: Tuple[Tuple[Cell, int], ...]

    @classmethod
    def from_mapping(cls, d: Mapping[Sequence[int], int]) -> "DefectLocus":
        return cls(tuple(sorted((tuple(sorted(c)), int(s)) for c, s in d.items() if s)))

    def as_dict(self) -> Chain:
        return dict(self.cells)

    def support(self) -> List[Cell]:
        return [c for c, _ in self.cells]


def locus_chain(C: DualCellComplex, L: DefectLocus) -> Chain:
    return {c: s * C.simplex_orientation(c) for c, s in L.cells}


def locus_from_chain(C: DualCellComplex, chain: Mapping[Cell, int]) -> DefectLocus:
    return DefectLocus.from_mapping({c: x * C.simplex_orientation(c) for c, x in chain.items()})


def _dual_boundary_column(C: DualCellComplex, k: int, c: Cell) -> Chain:
    # cells of dim k-1 in the boundary of the k-cell c, with incidence
    return {b: C.incidence(c, b) for b in C.boundary_cells(c)}


def defect_boundary(C: DualCellComplex, L: DefectLocus) -> Chain:
    n = C.n
    out: Chain = {}
    if n - 2 == 0:
        return out
    for c, s in locus_chain(C, L).items():
        for b, i in _dual_boundary_column(C, n - 2, c).items():
            out[b] = out.get(b, 0) + s * i
    return {b: x for b, x in out.items() if x}


def check_locus(C: DualCellComplex, L: DefectLocus) -> None:
    for c, _ in L.cells:
        if not C.has_cell(c) or C.cell_dim(c) != C.n - 2:
            raise NotACycle(f"{c} is not an (n-2)-cell")
    if defect_boundary(C, L):
        raise NotACycle("defect locus has nonzero boundary")


@dataclass
class SeifertSurface:
    C: DualCellComplex
    L: DefectLocus
    S0: Chain
    side: str = "+"

    def support(self) -> List[Cell]:
        return sorted(self.S0)

    def as_dict(self) -> dict:
        return {"side": self.side, "chain": [[list(c), s] for c, s in sorted(self.S0.items())],
                "defect": [[list(c), s] for c, s in self.L.cells]}


def seifert_boundary(C: DualCellComplex, S0: Mapping[Cell, int]) -> Chain:
    out: Chain = {}
    for t, s in S0.items():
        for b, i in _dual_boundary_column(C, C.n - 1, t).items():
            out[b] = out.get(b, 0) + s * i
    return {b: x for b, x in out.items() if x}


def find_seifert(C: DualCellComplex, L: DefectLocus, side: str = "+") -> SeifertSurface:
    """Integer (n-1)-chain with boundary L and entries in {-1, 0, 1}.

    An SNF particular solution is pushed down in l1 norm by adding
    cycles (boundaries of n-cells, then homology representatives) while
    that strictly improves (l1, support) -- a deterministic descent.
    """
    if side not in ("+", "-"):
        raise ValueError("side must be '+' or '-'")
    check_locus(C, L)
    n = C.n
    faces = C.cells(n - 1)
    rows_cells = C.cells(n - 2)
    D = C.boundary_maps()[n - 2].matrix          # d_{n-1}: C_{n-1} -> C_{n-2}
    rix = {c: i for i, c in enumerate(rows_cells)}
    b = [0] * len(rows_cells)
    for c, s in locus_chain(C, L).items():
        b[rix[c]] += s
    x = solve_integer(D, b, len(faces))
    if x is None:
        raise NotNullHomologous("defect locus does not bound")
    gens: List[List[int]] = []
    if n >= 1:
        Dn = C.boundary_maps()[n - 1].matrix     # d_n : C_n -> C_{n-1}
        for j in range(len(C.cells(n))):
            gens.append([Dn[i][j] for i in range(len(faces))])
    gens.extend(homology_with_reps(C.boundary_maps(), n - 1).lifts)
    x = _descend(x, gens)
    if any(abs(v) > 1 for v in x):
        raise SeifertMultiplicity("could not reduce the Seifert chain to unit multiplicities")
    S0 = {faces[i]: v for i, v in enumerate(x) if v}
    return SeifertSurface(C, L, S0, side)


def _descend(x: List[int], gens: List[List[int]]) -> List[int]:
    def cost(v):
        return (sum(abs(a) for a in v), sum(1 for a in v if a))
    sparse = [[(i, a) for i, a in enumerate(g) if a] for g in gens]
    cur = cost(x)
    improved = True
    while improved:
        improved = False
        for g in sparse:
            for sgn in (1, -1):
                # cost change restricted to the support of g
                d1 = sum(abs(x[i] + sgn * a) - abs(x[i]) for i, a in g)
                if d1 > 0:
                    continue
                y = list(x)
                for i, a in g:
                    y[i] += sgn * a
                c = cost(y)
                if c < cur:
                    x, cur, improved = y, c, True
    return x


def or_invariant(S: SeifertSurface, v: Cell, w: Cell) -> int:
    tau = _common(S.C, v, w)
    c = S.S0.get(tau, 0)
    return c if tuple(v) < tuple(w) else -c


# ---------------------------------------------------------------------------
# crossing numbers of network edges
# ---------------------------------------------------------------------------

def _locus_zero_cells(S: SeifertSurface) -> set:
    C = S.C
    out = set()
    for c, _ in S.L.cells:
        out.update(C.zero_cells_in_closure(c))
    return out


def side_potential(S: SeifertSurface, p: Cell) -> Dict[Cell, int]:
    """Crossing count from the base point of 0-cell p to each n-cell
    around it (S is S0 pushed off to the chosen side, so p sits on the
    opposite side).  Off the defect the differences reproduce Or."""
    verts = [(x,) for x in p]
    v0 = verts[0]
    raw = {v: (0 if v == v0 else or_invariant(S, v0, v)) for v in verts}
    lo, hi = min(raw.values()), max(raw.values())
    shift = lo if S.side == "+" else hi
    return {v: x - shift for v, x in raw.items()}


def crossing_number(S: SeifertSurface, c: Cell, p: Cell, pot: Optional[Dict[Cell, int]] = None) -> int:
    """N(S, edge p -> c): the cell centre of c sits on the same side as
    the n-cell nearest p's side among the n-cells containing it."""
    pot = pot if pot is not None else side_potential(S, p)
    vals = [pot[(x,)] for x in c]
    return min(vals) if S.side == "+" else max(vals)


def linking_number(S: SeifertSurface, word: Sequence[Tuple[Tuple[Cell, Cell], int]]) -> int:
    bad = _locus_zero_cells(S)
    tot = 0
    for (c, p), sgn in word:
        c, p = tuple(c), tuple(p)
        if p in bad:
            raise WordMeetsDefect(f"edge from {p} starts on the defect locus")
        tot += sgn * crossing_number(S, c, p)
    return tot


# ---------------------------------------------------------------------------
# the twist
# ---------------------------------------------------------------------------

@dataclass
class GerbeData:
    C: DualCellComplex
    model: object
    g: object
    clutch: Dict[Tuple[Cell, Cell, Cell], object]     # (v, w, p) -> h'_{vw}(p)
    f: Dict[Cell, object]                              # (n-2)-cell -> f_{abc}
    exponent: Dict[Cell, int]                          # f = g^exponent
    locus: DefectLocus

    def summary(self) -> dict:
        m = self.model
        return {"defect_cells": [[list(c), e] for c, e in sorted(self.exponent.items())
                                 if e and not m.is_identity(self.f[c])],
                "g": m.encode(self.g), "n_clutch_values": len(self.clutch)}


def twist_field(F: StandardLatticeField, S: SeifertSurface, g) -> StandardLatticeField:
    """Multiply each network value by g^{N(S, edge)}."""
    m = F.model
    if not m.is_central(g):
        raise NotCentral(f"{m.encode(g)} is not central")
    vals = {}
    pots: Dict[Cell, Dict[Cell, int]] = {}
    for (c, p), x in F.values.items():
        if p not in pots:
            pots[p] = side_potential(S, p)
        k = crossing_number(S, c, p, pots[p])
        vals[(c, p)] = m.mul(m.power(g, k), x) if k else x
    return StandardLatticeField(F.network, m, vals)


def apply_thooft(E: _Labelled, L: DefectLocus, S: Optional[SeifertSurface], g) -> Tuple[_Labelled, GerbeData]:
    C, m = E.C, E.model
    if not m.is_central(g):
        raise NotCentral(f"{m.encode(g)} is not central")
    if S is None:
        S = find_seifert(C, L)
    base = twist_field(E.base, S, g)
    E2 = E.with_base(base)
    clutch = {}
    for tau in C.cells(C.n - 1):
        for v, w in (((tau[0],), (tau[1],)), ((tau[1],), (tau[0],))):
            o = or_invariant(S, v, w)
            for p in C.zero_cells_in_closure(tau):
                h = clutch_value(E.base, v, w, p)
                clutch[(v, w, p)] = m.mul(m.power(g, o), h) if o else h
    f, ex = {}, {}
    for s in C.cells(C.n - 2):
        a, b, c = (s[0],), (s[1],), (s[2],)
        e = or_invariant(S, a, b) + or_invariant(S, b, c) + or_invariant(S, c, a)
        ex[s] = e
        f[s] = m.power(g, e)
    return E2, GerbeData(C, m, g, clutch, f, ex, L)


@dataclass
class GerbeReport:
    ok: bool
    violations: List[dict] = field(default_factory=list)
    checked_cond1: int = 0
    checked_cond2: int = 0
    nontrivial_counts: Dict[int, int] = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {"ok": self.ok, "violations": self.violations, "checked_cond1": self.checked_cond1,
                "checked_cond2": self.checked_cond2,
                "nontrivial_counts": {str(k): v for k, v in sorted(self.nontrivial_counts.items())}}


def verify_gerbe(D: GerbeData, C: Optional[DualCellComplex] = None) -> GerbeReport:
    """First condition: the twisted triple product at every 0-cell of an
    (n-2)-cell equals f there, and f is trivial off L.  Second (n >= 3):
    on each (n-3)-cell (u, v, w, t), f_vwt f_uvt = f_uvw f_uwt."""
    C = C or D.C
    m = D.model
    viol = []
    n1 = n2 = 0
    Lc = locus_chain(C, D.locus)
    for s in C.cells(C.n - 2):
        a, b, c = (s[0],), (s[1],), (s[2],)
        if not m.eq(D.f[s], m.power(D.g, Lc.get(s, 0))):
            viol.append({"condition": 1, "cell": list(s), "reason": "f differs from g^L"})
        for p in C.zero_cells_in_closure(s):
            n1 += 1
            prod = m.prod([D.clutch[(a, b, p)], D.clutch[(b, c, p)], D.clutch[(c, a, p)]])
            if not m.eq(prod, D.f[s]):
                viol.append({"condition": 1, "cell": list(s), "at": list(p)})
    counts: Dict[int, int] = {}
    if C.n >= 3:
        for q in C.cells(C.n - 3):
            u, v, w, t = q
            n2 += 1
            lhs = m.mul(D.f[(v, w, t)], D.f[(u, v, t)])
            rhs = m.mul(D.f[(u, v, w)], D.f[(u, w, t)])
            k = sum(1 for x in ((v, w, t), (u, v, t), (u, v, w), (u, w, t)) if not m.is_identity(D.f[x]))
            counts[k] = counts.get(k, 0) + 1
            if not m.eq(lhs, rhs):
                viol.append({"condition": 2, "cell": list(q)})
    return GerbeReport(not viol, viol, n1, n2, counts)


def off_locus_cochains(E1: _Labelled, E2: _Labelled, L: DefectLocus) -> Tuple[Dict[Cell, int], Dict[Cell, int]]:
    """Defect cochains of two U(1) fields on the (n-2)-cells off L."""
    skip = set(L.support())
    return defect_cochain(E1, skip=skip), defect_cochain(E2, skip=skip)


# ---------------------------------------------------------------------------
# files
# ---------------------------------------------------------------------------

def parse_defect(text: str) -> DefectLocus:
    """Lines ``<sign> <vertex ids of the 2-simplex>``; '#' starts a comment."""
    d: Dict[Cell, int] = {}
    for ln, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            s = {"+": 1, "-": -1}.get(parts[0])
            s = int(parts[0]) if s is None else s
            cell = tuple(sorted(int(x) for x in parts[1:]))
        except ValueError:
            raise ValueError(f"line {ln}: expected '<sign> <vertex ids>'") from None
        if not cell:
            raise ValueError(f"line {ln}: missing cell")
        d[cell] = d.get(cell, 0) + s
    return DefectLocus.from_mapping(d)


def format_defect(L: DefectLocus) -> str:
    return "".join(f"{'+' if s > 0 else '-'}{'' if abs(s) == 1 else abs(s)} "
                   + " ".join(map(str, c)) + "\n" for c, s in L.cells)
