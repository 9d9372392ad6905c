"""Bistellar moves and transport of extended fields across them.

A k-move acts on an (n-k)-simplex ``sigma`` lying in exactly k+1 facets
whose link is the boundary of a k-simplex ``sigma'`` not yet in the
complex; the facets ``sigma * d(sigma')`` are replaced by
``sigma' * d(sigma)``.  For k = 0, ``sigma'`` is a fresh vertex; for
k = n the vertex ``sigma`` disappears and the larger vertex ids shift
down by one (an order-preserving relabelling, so sorted-vertex
conventions survive).

Dually, the cells that change are exactly those whose simplex contains
``sigma`` (old) or ``sigma'`` (new); everything else corresponds
one-to-one, which is what transport copies across.
"""
from __future__ import annotations

import random as _random
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .abelian import solve_integer
from .complex import (Cell, DualCellComplex, SimplicialComplex, dualize, perm_sign,
                      validate_triangulation)
from .elgf import (ExtendedField, InvalidExtendedField, classify, defect_cochain, label_index,
                   validate_extended)
from .gauge import StandardLatticeField, build_network

Simplex = Tuple[int, ...]


class MoveNotApplicable(ValueError):
    pass


class LocalSolveFailed(RuntimeError):
    pass


@dataclass(frozen=True)
class PachnerMove:
    k: int
    sigma: Simplex
    sigma_prime: Simplex     # for k = 0 this is (n_vertices,), the new vertex

    def script_line(self) -> str:
        return f"move {self.k} " + " ".join(map(str, self.sigma))

    @property
    def facets_removed(self) -> int:
        return self.k + 1


def _facets_around(K: SimplicialComplex, sigma: Simplex) -> List[Simplex]:
    ss = set(sigma)
    return [f for f in K.facets if ss <= set(f)]


def check_move(K: SimplicialComplex, k: int, sigma: Sequence[int]) -> PachnerMove:
    n = K.dim
    sigma = tuple(sorted(int(x) for x in sigma))
    if not 0 <= k <= n:
        raise MoveNotApplicable(f"move kind {k} outside 0..{n}")
    if len(sigma) != n - k + 1:
        raise MoveNotApplicable(f"a {k}-move acts on an {n - k}-simplex, got {sigma}")
    star = _facets_around(K, sigma)
    if not star:
        raise MoveNotApplicable(f"{sigma} is not a simplex of the complex")
    if len(star) != k + 1:
        raise MoveNotApplicable(f"{sigma} lies in {len(star)} facets, a {k}-move needs {k + 1}")
    if k == 0:
        return PachnerMove(0, sigma, (K.n_vertices,))
    link = tuple(sorted(set().union(*map(set, star)) - set(sigma)))
    if len(link) != k + 1:
        raise MoveNotApplicable(f"link of {sigma} is not the boundary of a {k}-simplex")
    # link is the boundary of link-simplex; it must not be present already
    if link in K.faces(k):
        raise MoveNotApplicable(f"{link} is already a simplex; the flip would be degenerate")
    return PachnerMove(k, sigma, link)


def applicable_moves(K: SimplicialComplex, kinds: Optional[Iterable[int]] = None) -> List[PachnerMove]:
    n = K.dim
    out = []
    for k in (range(n + 1) if kinds is None else kinds):
        for s in K.faces(n - k):
            try:
                out.append(check_move(K, k, s))
            except MoveNotApplicable:
                pass
    return out


def _relabel(move: PachnerMove):
    if move.k == 0 or len(move.sigma) != 1:
        return lambda x: x
    u = move.sigma[0]
    return lambda x: x if x < u else x - 1


def _map_cell(phi, s: Sequence[int]) -> Simplex:
    return tuple(sorted(phi(x) for x in s))


def apply_move(K: SimplicialComplex, move: PachnerMove) -> SimplicialComplex:
    mv = check_move(K, move.k, move.sigma)
    if mv != move:
        raise MoveNotApplicable(f"move does not match the complex: {move}")
    ss = set(move.sigma)
    kept = [f for f in K.facets if not ss <= set(f)]
    new = [tuple(sorted(move.sigma_prime + move.sigma[:i] + move.sigma[i + 1:]))
           for i in range(len(move.sigma))]
    nv = K.n_vertices + (1 if move.k == 0 else 0) - (1 if move.k == K.dim else 0)
    phi = _relabel(move)
    facets = [_map_cell(phi, f) for f in kept + new]
    K2 = SimplicialComplex(nv, facets)
    if K.orientation is None:
        return K2
    rep = validate_triangulation(K2)
    if not rep.orientable:
        raise MoveNotApplicable("result is not orientable")
    o = dict(rep.orientation)
    probe = kept[0]
    # phi is monotone so sorted order is preserved and signs carry over
    if o[_map_cell(phi, probe)] != K.orientation[probe]:
        o = {f: -x for f, x in o.items()}
    return K2.with_orientation(o)


def inverse_move(K_after: SimplicialComplex, move: PachnerMove) -> PachnerMove:
    """The move undoing ``move`` on the complex it produced."""
    phi = _relabel(move)
    if move.k == 0:
        return check_move(K_after, K_after.dim, move.sigma_prime)
    return check_move(K_after, K_after.dim - move.k, _map_cell(phi, move.sigma_prime))


# ---------------------------------------------------------------------------
# transport
# ---------------------------------------------------------------------------

@dataclass
class TransportReport:
    move: PachnerMove
    old_complex: SimplicialComplex
    new_complex: SimplicialComplex
    correspondence: Dict[Cell, Cell]
    copied_edges: int
    completed_edges: int
    copied_labels: int
    solved_slots: List[tuple]
    class_before: object
    class_after: object
    certified: bool
    method: str
    notes: List[str] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "move": self.move.script_line(),
            "old_facets": len(self.old_complex.facets), "new_facets": len(self.new_complex.facets),
            "correspondence_size": len(self.correspondence),
            "copied_edges": self.copied_edges, "completed_edges": self.completed_edges,
            "copied_labels": self.copied_labels,
            "solved_slots": [[list(s[0][0]), list(s[0][1]), list(s[1]), v] for s, v in self.solved_slots],
            "class_before": self.class_before.as_dict(), "class_after": self.class_after.as_dict(),
            "certified": self.certified, "method": self.method, "notes": self.notes,
        }


def _survives(s: Simplex, marker: Simplex) -> bool:
    return not set(marker) <= set(s)


def transport(E: ExtendedField, move: PachnerMove, before=None) -> Tuple[ExtendedField, TransportReport]:
    """Carry E across the move; ``before`` may pass a known classify(E)."""
    C = E.C
    K = C.K
    K2 = apply_move(K, move)
    C2 = dualize(K2)
    phi = _relabel(move)
    sp = _map_cell(phi, move.sigma_prime) if move.k else move.sigma_prime
    corr = {s: _map_cell(phi, s) for s in C.all_cells() if _survives(s, move.sigma)}
    back = {v: k for k, v in corr.items()}

    net2 = build_network(C2)
    m = E.model
    vals, copied = {}, 0
    for (c, p) in net2.edges:
        oc, op = back.get(c), back.get(p)
        if oc is not None and op is not None and (oc, op) in E.base.values:
            vals[(c, p)] = E.base.values[(oc, op)]
            copied += 1
        else:
            vals[(c, p)] = m.identity()
    base2 = StandardLatticeField(net2, m, vals)

    def old_facets_only(rho):
        return all(_survives(p, sp) for p in C2.zero_cells_in_closure(rho))

    idx2 = label_index(C2, m, "full")
    labels, unknown = {}, []
    for slot in idx2.slots:
        (a, b), rho = slot
        oa, ob, orho = back.get(a), back.get(b), back.get(rho)
        if None not in (oa, ob, orho) and old_facets_only(rho):
            labels[slot] = E.label(((oa, ob), orho))
        else:
            unknown.append(slot)
    n_copied = len(labels)
    before = before if before is not None else classify(E)
    E2 = ExtendedField(base2, labels)
    notes: List[str] = []
    pi1 = m.pi1()

    if not idx2.slots:
        method, solved, certified = "none", [], True
    elif C.n == 2:
        E2, solved, method = _fix_surface(E, E2, before, unknown, move, corr)
        certified = True
    elif pi1.is_trivial():
        E2, solved, method = _fix_total(E2, before, unknown, False)
        certified = True
    else:
        E2, solved = _solve_local(E, E2, unknown, corr, move.sigma)
        method, certified = "local-solve", True
    rep = validate_extended(E2)
    if not rep.ok:
        raise LocalSolveFailed(f"transported field violates {len(rep.violations)} relation(s)")
    after = classify(E2)
    if C.n == 2 or pi1.is_trivial():
        if (before.primary_total, before.secondary_total) != (after.primary_total, after.secondary_total):
            raise LocalSolveFailed("class not preserved")
    else:
        notes.append("class certified by agreement of the defect cochains off the star up to coboundary")
    report = TransportReport(move, K, K2, corr, copied, len(net2.edges) - copied, n_copied,
                             solved, before, after, certified, method, notes)
    return E2, report


def _near(K: SimplicialComplex, facets) -> List[Simplex]:
    """2-simplices sharing at least an edge with one of ``facets``."""
    fs = [set(f) for f in facets]
    return [t for t in K.faces(2) if any(len(f & set(t)) >= 2 for f in fs)]


def _fix_surface(E, E2, before, unknown, move, corr):
    """Restore the surface total.  Only defects next to the star can
    differ between E and E2, so compare those and fix the deficit on one
    reset top label (labels on a surface carry no relations)."""
    C, C2 = E.C, E2.C
    old_star = [f for f in C.K.facets if set(move.sigma) <= set(f)]
    marker = set(corr.values())
    new_star = [f for f in C2.K.facets if f not in marker]
    near_old, near_new = _near(C.K, old_star), _near(C2.K, new_star)
    c_old = defect_cochain(E, only=near_old)
    c_new = defect_cochain(E2, only=near_new)
    deficit = (sum(C.simplex_orientation(t) * c_old[t] for t in near_old)
               - sum(C2.simplex_orientation(t) * c_new[t] for t in near_new))
    if deficit == 0:
        return E2, [], "copy"
    tops = [s for s in unknown if C2.cell_dim(s[1]) == 1]
    for slot in tops:
        tau = slot[1]
        touched = [t for t in near_new if set(tau) <= set(t)]
        trial = E2.with_labels({**E2.labels, slot: E2.label_int(slot) + 1})
        c1 = defect_cochain(trial, only=touched)
        step = sum(C2.simplex_orientation(t) * (c1[t] - c_new[t]) for t in touched)
        if step in (1, -1):
            v = E2.label_int(slot) + deficit * step
            return E2.with_labels({**E2.labels, slot: v}), [(slot, v)], "total-fix"
    raise LocalSolveFailed("no reset slot moves the class total by one")


def _fix_total(E2: ExtendedField, before, unknown, surface: bool):
    """Surfaces, or the pi_3 total at n = 4: restore the integer total
    through a single reset slot whose unit vector moves it by +-1."""
    def total(b):
        return b.primary_total if surface else b.secondary_total
    now = classify(E2)
    deficit = (total(before) or 0) - (total(now) or 0)
    if deficit == 0:
        return E2, [], "copy"
    tops = [s for s in unknown if E2.C.cell_dim(s[1]) == E2.C.n - 1]
    for slot in tops:
        trial = E2.with_labels({**E2.labels, slot: E2.label_int(slot) + 1})
        step = (total(classify(trial)) or 0) - (total(now) or 0)
        if step in (1, -1):
            v = E2.label_int(slot) + deficit * step
            return E2.with_labels({**E2.labels, slot: v}), [(slot, v)], "total-fix"
    raise LocalSolveFailed("no reset slot moves the class total by one")


def _solve_local(E: ExtendedField, E2: ExtendedField, unknown, corr, sigma):
    """n >= 3, pi_1 = Z: choose the reset labels so that every relation
    holds and the defect cochain agrees with the old one off the star
    up to a coboundary there (restriction to the complement of a ball is
    injective on H^2 in dimension >= 3)."""
    C2 = E2.C
    K2 = C2.K
    idx2 = E2.idx
    unk = [s for s in unknown if s in idx2.index]
    col = {s: j for j, s in enumerate(unk)}
    # complement subcomplex: simplices not meeting the new star's removed part
    marker = set(corr.values())
    tri_out = [s for s in K2.faces(2) if s in marker]
    edges_out = [s for s in K2.faces(1) if s in marker]
    eidx = {e: j for j, e in enumerate(edges_out)}
    nu, nx = len(unk), len(edges_out)
    rows, rhs = [], []
    for rel in idx2.relations():
        if not any(s in col for s in rel.coeffs):
            continue
        row = [0] * (nu + nx)
        const = 0
        for s, c in rel.coeffs.items():
            if s in col:
                row[col[s]] += c
            else:
                const += c * E2.label_int(s)
        rows.append(row)
        rhs.append(-const)
    old = defect_cochain(E)
    back = {v: k for k, v in corr.items()}
    c0 = defect_cochain(E2, only=tri_out, strict=False)
    # sensitivity of the cochain to each unknown slot (affine in labels)
    sens: Dict[Cell, Dict[int, int]] = {}
    for s, j in col.items():
        (a, b), rho = s
        if len(a) != 2 or C2.cell_dim(rho) != 1:
            continue
        touched = [t for t in tri_out if set(a) <= set(t)]
        if not touched:
            continue
        trial = E2.with_labels({**E2.labels, s: E2.label_int(s) + 1})
        c1 = defect_cochain(trial, only=touched, strict=False)
        for t in touched:
            d = c1[t] - c0[t]
            if d:
                sens.setdefault(t, {})[j] = d
    for t in tri_out:
        row = [0] * (nu + nx)
        for j, d in sens.get(t, {}).items():
            row[j] += d
        for r in range(3):
            e = t[:r] + t[r + 1:]
            row[nu + eidx[e]] -= (-1) ** r
        rows.append(row)
        rhs.append(old[back[t]] - c0[t])
    x = solve_integer(rows, rhs, nu + nx) if rows else [0] * (nu + nx)
    if x is None:
        raise LocalSolveFailed("no local completion reproduces the class")
    labels = dict(E2.labels)
    solved = []
    for s, j in col.items():
        labels[s] = x[j]
        if x[j]:
            solved.append((s, x[j]))
    return E2.with_labels(labels), solved


# ---------------------------------------------------------------------------
# scripts and walks
# ---------------------------------------------------------------------------

def parse_moves(text: str) -> List[Tuple[int, Tuple[int, ...]]]:
    out = []
    for ln, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] != "move" or len(parts) < 3:
            raise ValueError(f"line {ln}: expected 'move <k> <vertex ids>'")
        try:
            out.append((int(parts[1]), tuple(int(x) for x in parts[2:])))
        except ValueError:
            raise ValueError(f"line {ln}: non-integer token") from None
    return out


def format_moves(moves: Iterable[PachnerMove]) -> str:
    return "".join(m.script_line() + "\n" for m in moves)


def replay(E: ExtendedField, script: Sequence[Tuple[int, Sequence[int]]]):
    reports = []
    for k, s in script:
        mv = check_move(E.C.K, k, s)
        E, r = transport(E, mv, reports[-1].class_after if reports else None)
        reports.append(r)
    return E, reports


def random_walk(E: ExtendedField, steps: int, seed: int = 0,
                kinds: Optional[Sequence[int]] = None, max_facets: Optional[int] = None):
    """Pick a move kind uniformly among those available, then a move of
    that kind uniformly; transport the field each step."""
    rng = _random.Random(seed)
    reports = []
    for _ in range(steps):
        moves = applicable_moves(E.C.K, kinds)
        if max_facets is not None:
            grow = [m for m in moves if len(E.C.K.facets) - 2 * m.k + E.C.n <= max_facets]
            moves = grow or moves
        by_kind: Dict[int, List[PachnerMove]] = {}
        for m in moves:
            by_kind.setdefault(m.k, []).append(m)
        k = rng.choice(sorted(by_kind))
        mv = rng.choice(by_kind[k])
        E, r = transport(E, mv, reports[-1].class_after if reports else None)
        reports.append(r)
    return E, reports
