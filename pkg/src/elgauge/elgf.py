"""Extended lattice gauge fields: homotopy labels, deck groups, classification.

Label slots
-----------
Full field: a slot is ``((sigma, tau), rho)`` where ``c_sigma`` lies in the
closure of ``c_tau`` (sigma != tau) and ``rho`` is a cell of dimension
k >= 1 in the closure of ``c_sigma``; it carries an element of pi_k(G), the
class of the extension of g_{sigma tau} over ``rho`` relative to its
boundary.  Core field: ``((v, w), rho)`` with ``rho`` in the closure of the
shared (n-1)-cell of the n-cells v, w; it labels the clutching map h_{vw}.

Labels are torsor coordinates.  The zero label is the reference
extension built from the lifts of the network values to their
representatives in [0, 1): on a 1-cell the reference path of
``value(., c)`` rises linearly between those representatives, and
g_{sigma tau} = value(., sigma)^-1 value(., tau) inherits the pointwise
product.  The reference is consistent around every 2-cell, so all label
relations below are homogeneous.
"""
from __future__ import annotations

import random as _random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .abelian import (AbElement, AbHom, FGAbelianGroup, homology_with_reps, kernel, quotient,
                      zeros)
from .complex import Cell, DualCellComplex, oriented_triples
from .gauge import (CellularNetwork, StandardLatticeField, build_network, clutch_value,
                    field_from_dict, field_to_dict, random_field, trivial_field)
from .groups import (AnchoredEdgeClass, GroupModel, SU2Model, U1Model, canonical_arc,
                     principal, vertex_defect)

Slot = Tuple[Tuple[Cell, Cell], Cell]


class DimensionUnsupported(ValueError):
    pass


class NotInDeckGroup(ValueError):
    pass


class InvalidExtendedField(ValueError):
    pass


class SecondaryUndefined(ValueError):
    pass


class ComplexMismatch(ValueError):
    pass


# ---------------------------------------------------------------------------
# slot index sets and relations
# ---------------------------------------------------------------------------

@dataclass
class Relation:
    tag: str                    # theta | alpha | mu | beta | triple
    where: tuple                # address for reports
    coeffs: Dict[Slot, int]
    group: FGAbelianGroup


class LabelIndex:
    """Slots with nontrivial coefficient groups, plus the linear relations."""

    def __init__(self, C: DualCellComplex, model: GroupModel, which: str):
        if which not in ("full", "core"):
            raise ValueError("which must be 'full' or 'core'")
        if C.n > 4:
            raise DimensionUnsupported(f"dimension {C.n} > 4 is not supported")
        self.C, self.model, self.which = C, model, which
        n = C.n
        self.pi = {k: model.homotopy_group(k) for k in range(1, n + 1) if k <= 3}
        for k in range(4, n + 1):
            self.pi[k] = FGAbelianGroup()   # nothing above pi_3 is modelled; n <= 4 only reaches k = n
        slots: List[Slot] = []
        if which == "full":
            for sigma in C.all_cells():
                if C.cell_dim(sigma) < 1:
                    continue
                subs = [r for r in C.subcells(sigma, 1) if not self.group_of(r).is_trivial()]
                if not subs:
                    continue
                for tau in self._strict_supercells(sigma):
                    slots.extend(((sigma, tau), r) for r in subs)
        else:
            for tau in C.cells(n - 1):
                v, w = (tau[0],), (tau[1],)
                subs = [r for r in C.subcells(tau, 1) if not self.group_of(r).is_trivial()]
                for pair in ((v, w), (w, v)):
                    slots.extend((pair, r) for r in subs)
        self.slots = slots
        self.index = {s: i for i, s in enumerate(slots)}
        self._relations: Optional[List[Relation]] = None

    def group_of(self, rho: Cell) -> FGAbelianGroup:
        return self.pi[self.C.cell_dim(rho)]

    def _strict_supercells(self, sigma: Cell) -> List[Cell]:
        import itertools
        out = []
        for r in range(1, len(sigma)):
            out.extend(itertools.combinations(sigma, r))
        return sorted(out, key=lambda s: (len(s), s))

    @property
    def ambient(self) -> FGAbelianGroup:
        g = FGAbelianGroup()
        for s in self.slots:
            g = g.direct_sum(self.group_of(s[1])) if self.group_of(s[1]).torsion else \
                FGAbelianGroup(g.free_rank + self.group_of(s[1]).free_rank, g.torsion)
        return g

    def slot_offsets(self) -> List[int]:
        out, k = [], 0
        for s in self.slots:
            out.append(k)
            k += self.group_of(s[1]).ngens
        return out

    def relations(self) -> List[Relation]:
        if self._relations is None:
            self._relations = self._build_full() if self.which == "full" else self._build_core()
        return self._relations

    def _add(self, rels, tag, where, coeffs, group):
        coeffs = {s: c for s, c in coeffs.items() if c and s in self.index}
        if coeffs:
            rels.append(Relation(tag, where, coeffs, group))

    def _build_full(self) -> List[Relation]:
        C = self.C
        rels: List[Relation] = []
        seen_flags = sorted({s[0] for s in self.slots})
        subs_of = {}
        for (flag, r) in self.slots:
            subs_of.setdefault(flag, []).append(r)
        # multiplicative compatibility on chains a < b < c (closure order)
        for (a, c) in seen_flags:
            for b in self._strict_supercells(a):
                if b == c or not (set(c) < set(b)):
                    continue
                for r in subs_of[(a, c)]:
                    self._add(rels, "theta", (a, b, c, r),
                              {((a, c), r): 1, ((a, b), r): -1, ((b, c), r): -1}, self.group_of(r))
        # boundary constraint on subcells of dim >= 2
        for (a, c) in sorted({s[0] for s in self.slots} | self._flags_with_big_subcells()):
            for f in C.subcells(a, 2):
                k = C.cell_dim(f)
                g = self.pi.get(k - 1, FGAbelianGroup())
                if g.is_trivial():
                    continue
                coeffs = {((a, c), e): C.incidence(f, e) for e in C.boundary_cells(f)}
                self._add(rels, "alpha", (a, c, f), coeffs, g)
        return rels

    def _flags_with_big_subcells(self):
        C = self.C
        out = set()
        for sigma in C.all_cells():
            if C.cell_dim(sigma) >= 2:
                for tau in self._strict_supercells(sigma):
                    out.add((sigma, tau))
        return out

    def _build_core(self) -> List[Relation]:
        C = self.C
        rels: List[Relation] = []
        for ((v, w), r) in self.slots:
            if v < w:
                self._add(rels, "mu", (v, w, r), {((v, w), r): 1, ((w, v), r): 1}, self.group_of(r))
        # boundary relation on 2-subcells of each shared (n-1)-cell
        for tau in C.cells(C.n - 1):
            v, w = (tau[0],), (tau[1],)
            for pair in ((v, w), (w, v)):
                for f in C.subcells(tau, 2):
                    g = self.pi.get(C.cell_dim(f) - 1, FGAbelianGroup())
                    if g.is_trivial():
                        continue
                    coeffs = {(pair, e): C.incidence(f, e) for e in C.boundary_cells(f)}
                    self._add(rels, "beta", (pair, f), coeffs, g)
        # triple (V_G) condition on positive-dimensional subcells of (n-2)-cells
        if C.n >= 3:
            for s in C.cells(C.n - 2):
                a, b, c = (s[0],), (s[1],), (s[2],)
                for r in C.subcells(s, 1):
                    g = self.group_of(r)
                    if g.is_trivial():
                        continue
                    self._add(rels, "triple", (s, r),
                              {((a, b), r): 1, ((b, c), r): 1, ((c, a), r): 1}, g)
        return rels


_INDEX_CACHE: Dict[tuple, LabelIndex] = {}


def label_index(C: DualCellComplex, model: GroupModel, which: str) -> LabelIndex:
    key = (id(C), model.name, which)
    hit = _INDEX_CACHE.get(key)
    if hit is None or hit.C is not C:
        hit = LabelIndex(C, model, which)
        if len(_INDEX_CACHE) > 64:
            _INDEX_CACHE.clear()
        _INDEX_CACHE[key] = hit
    return hit


# ---------------------------------------------------------------------------
# fields
# ---------------------------------------------------------------------------

class _Labelled:
    which = "full"

    def __init__(self, base: StandardLatticeField, labels: Optional[Mapping[Slot, object]] = None):
        self.base = base
        self.idx = label_index(base.C, base.model, self.which)
        self.labels: Dict[Slot, AbElement] = {}
        for s, x in (labels or {}).items():
            s = _norm_slot(s)
            if s not in self.idx.index:
                g = self.idx.group_of(s[1]) if base.C.has_cell(s[1]) else None
                if g is not None and g.is_trivial() and _is_zero(x):
                    continue
                raise KeyError(f"not a label slot: {s}")
            g = self.idx.group_of(s[1])
            el = x if isinstance(x, AbElement) else g.element([x] if isinstance(x, int) else list(x))
            if not el.is_zero():
                self.labels[s] = el
            elif s in self.labels:
                del self.labels[s]

    @property
    def C(self) -> DualCellComplex:
        return self.base.C

    @property
    def model(self) -> GroupModel:
        return self.base.model

    def label(self, slot: Slot) -> AbElement:
        slot = _norm_slot(slot)
        if slot in self.labels:
            return self.labels[slot]
        return self.idx.group_of(slot[1]).zero()

    def label_int(self, slot: Slot) -> int:
        el = self.label(slot)
        return el.coordinates[0] if el.coordinates else 0

    def vector(self) -> List[int]:
        out = []
        for s in self.idx.slots:
            out.extend(self.label(s).coordinates)
        return out

    def with_labels(self, labels: Mapping[Slot, object]):
        return type(self)(self.base, labels)

    def with_base(self, base: StandardLatticeField):
        return type(self)(base, self.labels)


def _norm_slot(s) -> Slot:
    (a, b), r = s
    return ((tuple(a), tuple(b)), tuple(r))


def _is_zero(x) -> bool:
    if isinstance(x, AbElement):
        return x.is_zero()
    if isinstance(x, int):
        return x == 0
    return not any(x)


class ExtendedField(_Labelled):
    which = "full"

    def __repr__(self):
        return f"ExtendedField({self.model.name}, {len(self.labels)} nonzero labels)"


class CoreField(_Labelled):
    which = "core"

    def __repr__(self):
        return f"CoreField({self.model.name}, {len(self.labels)} nonzero labels)"


def zero_field(C: DualCellComplex, model: GroupModel) -> ExtendedField:
    return ExtendedField(trivial_field(build_network(C), model))


def canonical_field(C: DualCellComplex, model: GroupModel, k: int,
                    tau: Optional[Cell] = None, base: Optional[StandardLatticeField] = None) -> ExtendedField:
    """Zero labels except the top label k on the flag (tau < w), tau = v cap w, v < w.

    The clutching map h_{vw} then carries class k over tau and the field
    classifies to k (surfaces with U(1), 4-manifolds with SU(2)).
    """
    base = base or trivial_field(build_network(C), model)
    if tau is None:
        tau = C.cells(C.n - 1)[0]
    tau = tuple(tau)
    w = (tau[1],)
    idx = label_index(C, model, "full")
    slot = ((tau, w), tau)
    if slot not in idx.index:
        raise DimensionUnsupported(f"pi_{C.n - 1} of {model.name} is trivial; no top label to set")
    return ExtendedField(base, {slot: k})


def random_valid_field(C: DualCellComplex, model: GroupModel, seed: int = 0,
                       base: Optional[StandardLatticeField] = None, spread: int = 3) -> ExtendedField:
    """Random base values plus random labels satisfying every relation.

    For n = 2 every label vector is valid.  In higher dimension the pi_1
    labels are generated as g-coboundaries (phi_c(end) - phi_c(start)
    differences) so the relations hold by construction; top pi_3 labels
    at n = 4 are unconstrained.
    """
    rng = _random.Random(seed)
    net = build_network(C)
    base = base or random_field(net, model, seed)
    idx = label_index(C, model, "full")
    labels: Dict[Slot, int] = {}
    if C.n == 2 or all(C.cell_dim(s[1]) == C.n - 1 and C.n != 3 for s in idx.slots):
        for s in idx.slots:
            labels[s] = rng.randint(-spread, spread)
        return ExtendedField(base, labels)
    chi: Dict[Tuple[Cell, Cell], int] = {}

    def x(c, p):
        key = (c, p)
        if key not in chi:
            chi[key] = rng.randint(-spread, spread)
        return chi[key]
    for ((a, b), r) in idx.slots:
        d = C.cell_dim(r)
        if d == 1:
            st, en = C.edge_ends(r)
            labels[((a, b), r)] = (x(b, en) - x(b, st)) - (x(a, en) - x(a, st))
        elif d == C.n - 1 and idx.group_of(r).free_rank and not idx.pi[d - 1].ngens:
            labels[((a, b), r)] = rng.randint(-spread, spread)
    return ExtendedField(base, labels)


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------

@dataclass
class ExtendedReport:
    ok: bool
    violations: List[dict] = field(default_factory=list)

    def as_dict(self):
        return {"ok": self.ok, "violations": self.violations}


def _evaluate(rel: Relation, F: _Labelled) -> AbElement:
    tot = rel.group.zero()
    for s, c in rel.coeffs.items():
        tot = tot + F.label(s) * c
    return tot


def validate_extended(E: _Labelled) -> ExtendedReport:
    viol = []
    for rel in E.idx.relations():
        val = _evaluate(rel, E)
        if not val.is_zero():
            viol.append({"relation": rel.tag, "at": _jsonable(rel.where), "value": list(val.coordinates)})
    return ExtendedReport(not viol, viol)


def _jsonable(x):
    if isinstance(x, tuple):
        return [_jsonable(y) for y in x]
    return x


# ---------------------------------------------------------------------------
# deck groups and the torsor action
# ---------------------------------------------------------------------------

@dataclass
class DeckGroup:
    which: str
    ambient: FGAbelianGroup
    slots: List[Slot]
    relations: List[Relation]
    relation_hom: AbHom
    subgroup: FGAbelianGroup
    embedding: AbHom

    def contains(self, x: AbElement) -> bool:
        return self.relation_hom(x).is_zero()

    def to_ambient(self, d: AbElement) -> AbElement:
        if d.group == self.subgroup:
            return self.embedding(d)
        if d.group == self.ambient:
            if not self.contains(d):
                raise NotInDeckGroup("label shift violates the deck relations")
            return d
        raise NotInDeckGroup("element belongs to neither the deck group nor its ambient group")

    def random_element(self, rng: _random.Random, spread: int = 3) -> AbElement:
        return self.subgroup.element([rng.randint(-spread, spread) for _ in range(self.subgroup.ngens)])

    def summary(self) -> dict:
        tags: Dict[str, int] = {}
        for r in self.relations:
            tags[r.tag] = tags.get(r.tag, 0) + 1
        return {"which": self.which, "ambient": str(self.ambient), "subgroup": str(self.subgroup),
                "rank": self.subgroup.free_rank, "relations": tags}


def deck_group(C: DualCellComplex, model: GroupModel, which: str = "full") -> DeckGroup:
    idx = label_index(C, model, which)
    amb = idx.ambient
    rels = idx.relations()
    offs = idx.slot_offsets()
    # stack all relations into one homomorphism ambient -> (+) targets
    target = FGAbelianGroup()
    rows: List[List[int]] = []
    for rel in rels:
        block = zeros(rel.group.ngens, amb.ngens)
        for s, c in rel.coeffs.items():
            j0 = offs[idx.index[s]]
            for i in range(rel.group.ngens):
                block[i][j0 + i] += c
        rows.extend(block)
        target = FGAbelianGroup(target.free_rank + rel.group.free_rank, target.torsion) \
            if not rel.group.torsion else target.direct_sum(rel.group)
    hom = AbHom(amb, target, rows if rows else zeros(0, amb.ngens))
    if rows:
        K, emb = kernel(hom)
    else:
        K, emb = amb, AbHom.identity(amb)
    return DeckGroup(which, amb, idx.slots, rels, hom, K, emb)


def act(d: AbElement, E: _Labelled, deck: Optional[DeckGroup] = None) -> _Labelled:
    deck = deck or deck_group(E.C, E.model, E.which)
    if deck.slots != E.idx.slots:
        raise NotInDeckGroup("deck group does not match the field's label index")
    x = deck.to_ambient(d).coordinates
    offs = E.idx.slot_offsets()
    labels = dict(E.labels)
    for s, o in zip(E.idx.slots, offs):
        g = E.idx.group_of(s[1])
        shift = g.element(list(x[o:o + g.ngens]))
        labels[s] = E.label(s) + shift
    return E.with_labels(labels)


def ambient_element(deck: DeckGroup, labels: Mapping[Slot, int]) -> AbElement:
    idx_of = {s: i for i, s in enumerate(deck.slots)}
    v = [0] * deck.ambient.ngens
    for s, x in labels.items():
        v[idx_of[_norm_slot(s)]] = x
    return deck.ambient.element(v)


# ---------------------------------------------------------------------------
# core projection
# ---------------------------------------------------------------------------

def core_of(E: ExtendedField, check: bool = True) -> CoreField:
    if isinstance(E, CoreField):
        return E
    if check:
        rep = validate_extended(E)
        if not rep.ok:
            raise InvalidExtendedField(f"{len(rep.violations)} relation(s) violated, e.g. {rep.violations[0]}")
    C = E.C
    cidx = label_index(C, E.model, "core")
    labels = {}
    for ((v, w), r) in cidx.slots:
        tau = tuple(sorted(v + w))
        labels[((v, w), r)] = E.label(((tau, w), r)) - E.label(((tau, v), r))
    return CoreField(E.base, labels)


def clutch_class(F: _Labelled, v: Cell, w: Cell, e: Cell) -> AnchoredEdgeClass:
    """Anchored class of h_{vw} along the 1-cell e (U(1) only)."""
    core = core_of(F, check=False) if isinstance(F, ExtendedField) else F
    m = F.model
    st, en = F.C.edge_ends(e)
    a, b = clutch_value(F.base, v, w, st), clutch_value(F.base, v, w, en)
    disp = (_psi(F.base, w, en) - _psi(F.base, v, en)) - (_psi(F.base, w, st) - _psi(F.base, v, st))
    disp += core.label_int(((tuple(v), tuple(w)), e))
    lab = disp - canonical_arc(a, b)
    return AnchoredEdgeClass((e, st, en), a, b, m.pi1().element([int(lab)]))


def _psi(F: StandardLatticeField, c: Cell, p: Cell) -> Fraction:
    return principal(Fraction(F.value(p, c)))


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------

@dataclass
class BundleClass:
    n: int
    model: str
    primary: AbElement
    primary_total: Optional[int] = None
    secondary: Optional[AbElement] = None
    secondary_total: Optional[int] = None
    cochain: Optional[Dict[Cell, int]] = None

    def key(self):
        return (self.primary.coordinates,
                None if self.secondary is None else self.secondary.coordinates)

    def __eq__(self, other):
        return isinstance(other, BundleClass) and self.key() == other.key()

    def as_dict(self) -> dict:
        return {
            "n": self.n, "model": self.model,
            "primary_group": str(self.primary.group), "primary": list(self.primary.coordinates),
            "primary_total": self.primary_total,
            "secondary_group": None if self.secondary is None else str(self.secondary.group),
            "secondary": None if self.secondary is None else list(self.secondary.coordinates),
            "secondary_total": self.secondary_total,
        }

    def summary(self) -> str:
        if self.secondary is not None:
            return f"secondary {self.secondary_total}"
        if self.primary_total is not None:
            return f"primary {self.primary_total}"
        return f"primary {list(self.primary.coordinates)} in {self.primary.group}"


def _cohomology_data(C: DualCellComplex, degree: int):
    """Subquotient for H^degree(M) realised on dual (n - degree)-chains."""
    cache = C.__dict__.setdefault("_cohom", {})
    if degree not in cache:
        cache[degree] = homology_with_reps(C.boundary_maps(), C.n - degree)
    return cache[degree]


def _top_homology(C: DualCellComplex):
    cache = C.__dict__.setdefault("_cohom", {})
    if "H0K" not in cache:
        cache["H0K"] = homology_with_reps(C.K.boundary_maps(), 0)
    return cache["H0K"]


def lift_tables(F: _Labelled, anchor_shift: Optional[Mapping[Cell, int]] = None,
                only: Optional[Iterable[Cell]] = None, strict: bool = True):
    """For each shared (n-1)-cell tau = [v, w] (v < w): lifted values of
    h_{vw} at the 0-cells of its closure, as (start lift, displacement)
    pairs relative to the first 0-cell of tau."""
    core = core_of(F, check=False) if isinstance(F, ExtendedField) else F
    C, base = F.C, F.base
    memo: Dict[Tuple[Cell, Cell], Fraction] = {}

    def psi(c, p):
        if (c, p) not in memo:
            memo[(c, p)] = _psi(base, c, p)
        return memo[(c, p)]
    out = {}
    for tau in (C.cells(C.n - 1) if only is None else only):
        v, w = (tau[0],), (tau[1],)
        ps = C.zero_cells_in_closure(tau)
        root = ps[0]
        lam = {root: 0}
        edges = C.one_cells_in_closure(tau)
        adj: Dict[Cell, List[Tuple[Cell, int]]] = {}
        for e in edges:
            st, en = C.edge_ends(e)
            lab = core.label_int(((v, w), e))
            adj.setdefault(st, []).append((en, lab))
            adj.setdefault(en, []).append((st, -lab))
        stack = [root]
        while stack:
            p = stack.pop()
            for q, lab in adj.get(p, []):
                if q not in lam:
                    lam[q] = lam[p] + lab
                    stack.append(q)
                elif strict and lam[q] != lam[p] + lab:
                    raise InvalidExtendedField(f"clutching labels on {tau} are not path independent")
        shift = (anchor_shift or {}).get(tau, 0)
        r0 = psi(w, root) - psi(v, root)
        out[tau] = (root, r0 + shift, {p: (psi(w, p) - psi(v, p)) - r0 + lam[p] for p in ps})
    return out


def defect_cochain(F: _Labelled, skip: Iterable[Cell] = (), anchor_shift=None,
                   only: Optional[Iterable[Cell]] = None, strict: bool = True) -> Dict[Cell, int]:
    """U(1): the pi_1-valued 2-cochain sigma -> vertex defect at sigma.

    Each pair (x, y) of the sorted triple contributes the lift of h_{xy}
    along a path inside its shared (n-1)-cell from that cell's anchor
    to the first 0-cell of sigma; h_{yx} uses the negated lift.
    """
    C, m = F.C, F.model
    if only is not None:
        triples = [C.triple(tuple(s)) for s in only]
        taus = sorted({tuple(sorted(x + y)) for t in triples for x in t.n_cells for y in t.n_cells if x < y})
        tables = lift_tables(F, anchor_shift, taus, strict)
    else:
        triples = oriented_triples(C)
        tables = lift_tables(F, anchor_shift, strict=strict)
    skip = set(skip)
    hmemo: Dict[tuple, object] = {}

    def h(x, y, q):
        if (x, y, q) not in hmemo:
            hmemo[(x, y, q)] = clutch_value(F.base, x, y, q)
        return hmemo[(x, y, q)]
    out = {}
    for t in triples:
        s = t.sigma
        if s in skip:
            continue
        p = C.zero_cells_in_closure(s)[0]
        classes, starts = [], []
        a, b, c = t.n_cells
        for x, y in ((a, b), (b, c), (c, a)):
            tau = tuple(sorted(x + y))
            root, start, disp = tables[tau]
            hx, hp = h(x, y, root), h(x, y, p)
            d = disp[p]
            if x > y:
                start, d = -start, -d
            lab = d - canonical_arc(hx, hp)
            classes.append(AnchoredEdgeClass((tau, root, p), hx, hp, m.pi1().element([int(lab)])))
            starts.append(start)
        out[s] = vertex_defect(m, classes, starts).coordinates[0]
    return out


def secondary_cochain(F: _Labelled) -> Dict[Cell, int]:
    """pi_3-valued cochain on n-cells: v -> sum over tau in d(closure c_v)
    of [c_v : tau] times the top label of the clutching map h_{wv}
    (each tau counted at its smaller n-cell)."""
    core = core_of(F, check=False) if isinstance(F, ExtendedField) else F
    C = F.C
    out = {v: 0 for v in C.cells(C.n)}
    for tau in C.cells(C.n - 1):
        v, w = (tau[0],), (tau[1],)
        out[v] += C.incidence(v, tau) * core.label_int(((w, v), tau))
    return out


def _check_dim(C: DualCellComplex):
    if C.n not in (2, 3, 4):
        raise DimensionUnsupported(f"classification is implemented for n in {{2,3,4}}, not {C.n}")


def classify(F: _Labelled, secondary: Optional[bool] = None) -> BundleClass:
    C, m = F.C, F.model
    _check_dim(C)
    pi1 = m.pi1()
    if pi1.torsion or pi1.free_rank > 1:
        raise DimensionUnsupported("only pi_1 in {0, Z} is supported")
    want_secondary = secondary if secondary is not None else (C.n == 4 and pi1.is_trivial())
    if want_secondary and (C.n != 4 or not pi1.is_trivial()):
        raise SecondaryUndefined("the secondary class needs n = 4 and pi_1(G) = 0")
    if pi1.is_trivial():
        primary = FGAbelianGroup().zero()
        total = 0 if C.n == 2 else None
        coch = None
        # still enforce the V_G condition at every triple
        for t in oriented_triples(C):
            p = C.zero_cells_in_closure(t.sigma)[0]
            if not m.is_identity(m.prod([clutch_value(F.base, x, y, p) for x, y in
                                         ((t.n_cells[0], t.n_cells[1]), (t.n_cells[1], t.n_cells[2]),
                                          (t.n_cells[2], t.n_cells[0]))])):
                from .groups import NotInVG
                raise NotInVG(f"cocycle fails at {t.sigma}")
    else:
        coch = defect_cochain(F)
        sq = _cohomology_data(C, 2)
        faces = C.cells(C.n - 2)
        vec = [coch[s] for s in faces]
        try:
            primary = sq.group.element(sq.coords(vec))
        except ValueError:
            raise InvalidExtendedField("defect cochain is not a cocycle") from None
        total = None
        if C.n == 2:
            total = sum(C.simplex_orientation(s) * coch[s] for s in faces)
    sec = sec_total = None
    if want_secondary:
        sc = secondary_cochain(F)
        vec = [sc[v] for v in C.cells(C.n)]
        h0 = _top_homology(C)
        sec = h0.group.element(h0.coords(vec))
        sec_total = sum(vec)
    return BundleClass(C.n, m.name, primary, total, sec, sec_total, coch)


def cellularly_equivalent(E1: _Labelled, E2: _Labelled) -> bool:
    if E1.C.content_hash() != E2.C.content_hash() or E1.model != E2.model:
        raise ComplexMismatch("fields live on different complexes or groups")
    return classify(E1) == classify(E2)


@dataclass
class ClassKernel:
    deck: DeckGroup
    class_hom: AbHom
    K: FGAbelianGroup
    embedding: AbHom
    quotient: FGAbelianGroup
    projection: AbHom

    def summary(self) -> dict:
        return {"deck": str(self.deck.subgroup), "kernel": str(self.K), "quotient": str(self.quotient)}


def class_vector(b: BundleClass) -> List[int]:
    out = list(b.primary.coordinates)
    if b.secondary is not None:
        out += list(b.secondary.coordinates)
    return out


def class_group(C: DualCellComplex, model: GroupModel) -> FGAbelianGroup:
    _check_dim(C)
    pi1 = model.pi1()
    g = _cohomology_data(C, 2).group if not pi1.is_trivial() else FGAbelianGroup()
    if C.n == 4 and pi1.is_trivial():
        g = FGAbelianGroup(g.free_rank + _top_homology(C).group.free_rank, g.torsion)
    return g


def class_kernel(C: DualCellComplex, model: GroupModel, which: str = "full") -> ClassKernel:
    deck = deck_group(C, model, which)
    ref = zero_field(C, model)
    if which == "core":
        ref = core_of(ref)
    base_vec = class_vector(classify(ref))
    target = class_group(C, model)
    cols = []
    for i in range(deck.subgroup.ngens):
        d = deck.subgroup.generator(i)
        b = class_vector(classify(act(d, ref, deck)))
        cols.append([x - y for x, y in zip(b, base_vec)])
    M = [[cols[j][i] for j in range(len(cols))] for i in range(target.ngens)]
    hom = AbHom(deck.subgroup, target, M if M else zeros(0, deck.subgroup.ngens))
    K, emb = kernel(hom)
    Q, proj = quotient(deck.subgroup, emb)
    return ClassKernel(deck, hom, K, emb, Q, proj)


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def extended_to_dict(E: _Labelled) -> dict:
    d = field_to_dict(E.base)
    key = "labels" if E.which == "full" else "core_labels"
    d[key] = [{"flag": [list(s[0][0]), list(s[0][1])], "subcell": list(s[1]),
               "value": list(E.labels[s].coordinates)}
              for s in E.idx.slots if s in E.labels]
    return d


def extended_from_dict(d: dict, network: CellularNetwork) -> ExtendedField:
    base = field_from_dict(d, network)
    labels = {}
    for item in d.get("labels", []):
        labels[((tuple(item["flag"][0]), tuple(item["flag"][1])), tuple(item["subcell"]))] = list(item["value"])
    return ExtendedField(base, labels)
