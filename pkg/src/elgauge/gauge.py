"""Cellular networks and standard lattice gauge fields.

The network has one abstract edge for each pair (positive-dimensional
cell c, 0-cell p in the closure of c); think of it as a path from the
base point of p to the base point of c.  A standard lattice field assigns
a group element (a parallel transport) to every edge.
"""
from __future__ import annotations

import json
import random as _random
from dataclasses import dataclass
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

from .complex import Cell, DualCellComplex, OrientedTriple
from .groups import GroupModel, model_from_name

Edge = Tuple[Cell, Cell]   # (cell, 0-cell)


class InvalidFlag(ValueError):
    pass


class NotAdjacent(ValueError):
    pass


class FieldFormatError(ValueError):
    pass


class CellularNetwork:
    def __init__(self, C: DualCellComplex):
        self.C = C
        edges: List[Edge] = []
        for k in range(1, C.n + 1):
            for c in C.cells(k):
                ps = C.zero_cells_in_closure(c)
                assert len(set(ps)) == len(ps)
                edges.extend((c, p) for p in sorted(ps))
        self.edges = edges
        self._index = {e: i for i, e in enumerate(edges)}

    def __len__(self):
        return len(self.edges)

    def __contains__(self, e):
        return e in self._index

    def index(self, e: Edge) -> int:
        return self._index[e]


def build_network(C: DualCellComplex) -> CellularNetwork:
    return CellularNetwork(C)


@dataclass
class StandardLatticeField:
    network: CellularNetwork
    model: GroupModel
    values: Dict[Edge, object]

    def __post_init__(self):
        missing = [e for e in self.network.edges if e not in self.values]
        if missing:
            raise ValueError(f"{len(missing)} network edges have no value, e.g. {missing[0]}")

    @property
    def C(self) -> DualCellComplex:
        return self.network.C

    def value(self, p: Cell, c: Cell):
        """Transport along the edge from 0-cell p to cell c (identity if c = p)."""
        if c == p:
            return self.model.identity()
        try:
            return self.values[(c, p)]
        except KeyError:
            raise InvalidFlag(f"no network edge from {p} to {c}") from None

    def replace(self, values: Mapping[Edge, object]) -> "StandardLatticeField":
        v = dict(self.values)
        v.update(values)
        return StandardLatticeField(self.network, self.model, v)

    def equals(self, other: "StandardLatticeField") -> bool:
        return (self.network.edges == other.network.edges and all(
            self.model.eq(self.values[e], other.values[e]) for e in self.network.edges))


def trivial_field(network: CellularNetwork, model: GroupModel) -> StandardLatticeField:
    e = model.identity()
    return StandardLatticeField(network, model, {x: e for x in network.edges})


def random_field(network: CellularNetwork, model: GroupModel, seed: int = 0) -> StandardLatticeField:
    rng = _random.Random(seed)
    return StandardLatticeField(network, model, {e: model.random_element(rng) for e in network.edges})


# ---------------------------------------------------------------------------
# derived values
# ---------------------------------------------------------------------------

def glue_value(F: StandardLatticeField, sigma: Cell, tau: Cell, p: Cell):
    """g_{sigma tau}(p) = value(p -> sigma)^-1 value(p -> tau)."""
    C = F.C
    sigma, tau, p = tuple(sigma), tuple(tau), tuple(p)
    if not (C.has_cell(sigma) and C.has_cell(tau) and C.has_cell(p)):
        raise InvalidFlag("unknown cell")
    if not C.in_closure(sigma, tau):
        raise InvalidFlag(f"{sigma} is not in the closure of {tau}")
    if C.cell_dim(p) != 0 or not C.in_closure(p, sigma):
        raise InvalidFlag(f"{p} is not a 0-cell in the closure of {sigma}")
    m = F.model
    return m.mul(m.inv(F.value(p, sigma)), F.value(p, tau))


def _common(C: DualCellComplex, v: Cell, w: Cell) -> Cell:
    v, w = tuple(v), tuple(w)
    if len(v) != 1 or len(w) != 1 or v == w:
        raise NotAdjacent("clutching needs two distinct n-cells")
    tau = tuple(sorted(v + w))
    if not C.has_cell(tau):
        raise NotAdjacent(f"{v} and {w} do not meet in an (n-1)-cell")
    return tau


def clutch_value(F: StandardLatticeField, v: Cell, w: Cell, p: Cell):
    """h_{vw}(p) = g_{tau v}(p)^-1 g_{tau w}(p) with tau = v cap w."""
    tau = _common(F.C, v, w)
    m = F.model
    try:
        return m.mul(m.inv(glue_value(F, tau, v, p)), glue_value(F, tau, w, p))
    except InvalidFlag as e:
        raise NotAdjacent(str(e)) from None


def triple_values(F: StandardLatticeField, t: OrientedTriple, p: Cell) -> tuple:
    """(h_{v2 v3}, h_{v3 v1}, h_{v1 v2}) at p, i.e. the clutch on tau_i."""
    v1, v2, v3 = t.n_cells
    return (clutch_value(F, v2, v3, p), clutch_value(F, v3, v1, p), clutch_value(F, v1, v2, p))


def cocycle_product(F: StandardLatticeField, t: OrientedTriple, p: Cell):
    v1, v2, v3 = t.n_cells
    m = F.model
    return m.prod([clutch_value(F, v1, v2, p), clutch_value(F, v2, v3, p), clutch_value(F, v3, v1, p)])


# ---------------------------------------------------------------------------
# gauge transformations
# ---------------------------------------------------------------------------

GaugeAssignment = Dict[Cell, object]


def random_gauge(C: DualCellComplex, model: GroupModel, seed: int = 0) -> GaugeAssignment:
    rng = _random.Random(seed)
    return {c: model.random_element(rng) for c in C.all_cells()}


def apply_gauge(F: StandardLatticeField, g: Mapping[Cell, object]) -> StandardLatticeField:
    m = F.model
    vals = {(c, p): m.mul(m.mul(g[c], x), m.inv(g[p])) for (c, p), x in F.values.items()}
    return StandardLatticeField(F.network, m, vals)


# ---------------------------------------------------------------------------
# network words
# ---------------------------------------------------------------------------

Word = Sequence[Tuple[Edge, int]]


def evaluate_word(F: StandardLatticeField, word: Word):
    """Fold-multiply edge values (sign -1 uses the inverse)."""
    m = F.model
    out = m.identity()
    for e, s in word:
        x = F.values[tuple(e)]
        out = m.mul(out, x if s > 0 else m.inv(x))
    return out


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def field_to_dict(F: StandardLatticeField) -> dict:
    return {
        "complex_hash": F.C.content_hash(),
        "model": F.model.name,
        "edges": [{"cell": list(c), "vertex": list(p), "value": F.model.encode(F.values[(c, p)])}
                  for c, p in F.network.edges],
    }


def field_from_dict(d: dict, network: CellularNetwork) -> StandardLatticeField:
    try:
        if d["complex_hash"] != network.C.content_hash():
            raise FieldFormatError("field was written for a different complex")
        model = model_from_name(d["model"])
        vals = {}
        for item in d["edges"]:
            e = (tuple(item["cell"]), tuple(item["vertex"]))
            if e not in network:
                raise FieldFormatError(f"edge {e} is not in the network")
            vals[e] = model.decode(item["value"])
    except (KeyError, TypeError) as e:
        raise FieldFormatError(f"malformed field document: {e}") from None
    if len(vals) != len(network):
        raise FieldFormatError("field does not assign every network edge")
    return StandardLatticeField(network, model, vals)


def dumps(obj: dict) -> str:
    return json.dumps(obj, indent=1, sort_keys=True) + "\n"
