"""Structure-group models and anchored homotopy classes.

Three models are provided: ``U1Model`` (exact rational angles),
``ZNModel`` (residues) and ``SU2Model`` (unit quaternions).  A model
bundles the group law with the homotopy groups pi_k(G, e) that label the
extension data of a lattice field.

An :class:`AnchoredEdgeClass` is a path in G between two endpoint values,
recorded as an element of pi_1(G) measuring how far it is from the
model's canonical interpolation.  For U(1) the canonical interpolation
from ``a`` to ``b`` is the arc of signed length in (-1/2, 1/2], so a path
has total lifted displacement ``arc(a, b) + label`` (in turns).
"""
from __future__ import annotations

import math
import random as _random
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Hashable, List, Optional, Sequence, Tuple

from .abelian import AbElement, FGAbelianGroup


class EdgeMismatch(ValueError):
    pass


class NotInVG(ValueError):
    pass


class UnknownModel(ValueError):
    pass


class GroupModel:
    """Interface.  Elements are plain immutable Python values."""

    name: str = "?"
    exact: bool = True

    def identity(self):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def eq(self, a, b) -> bool:
        return a == b

    def is_central(self, a) -> bool:
        raise NotImplementedError

    def center_generators(self) -> list:
        raise NotImplementedError

    def homotopy_group(self, k: int) -> FGAbelianGroup:
        raise NotImplementedError

    def random_element(self, rng: _random.Random):
        raise NotImplementedError

    def contains(self, a) -> bool:
        raise NotImplementedError

    def encode(self, a):
        raise NotImplementedError

    def decode(self, v):
        raise NotImplementedError

    # derived helpers
    def prod(self, xs: Sequence) -> Any:
        out = self.identity()
        for x in xs:
            out = self.mul(out, x)
        return out

    def power(self, a, k: int):
        base = a if k >= 0 else self.inv(a)
        out = self.identity()
        for _ in range(abs(k)):
            out = self.mul(out, base)
        return out

    def is_identity(self, a) -> bool:
        return self.eq(a, self.identity())

    def pi1(self) -> FGAbelianGroup:
        return self.homotopy_group(1)

    def __eq__(self, other):
        return isinstance(other, GroupModel) and self.name == other.name

    def __hash__(self):
        return hash(self.name)

    def __repr__(self):
        return f"<{type(self).__name__} {self.name}>"


# ---------------------------------------------------------------------------
# U(1)
# ---------------------------------------------------------------------------

def principal(x: Fraction) -> Fraction:
    """Representative in [0, 1)."""
    return x - math.floor(x)


def canonical_arc(a: Fraction, b: Fraction) -> Fraction:
    """Signed length in (-1/2, 1/2] of the short arc from a to b."""
    d = principal(Fraction(b) - Fraction(a))
    return d - 1 if d > Fraction(1, 2) else d


class U1Model(GroupModel):
    name = "u1"
    exact = True

    def __init__(self, max_denominator: int = 12):
        self.max_denominator = max_denominator

    def identity(self):
        return Fraction(0)

    def mul(self, a, b):
        return principal(Fraction(a) + Fraction(b))

    def inv(self, a):
        return principal(-Fraction(a))

    def is_central(self, a) -> bool:
        return True

    def center_generators(self) -> list:
        # the whole circle; a finite list cannot generate it
        return [Fraction(1, 2)]

    def homotopy_group(self, k: int) -> FGAbelianGroup:
        if k < 0:
            raise ValueError("k must be >= 0")
        return FGAbelianGroup(1) if k == 1 else FGAbelianGroup()

    def random_element(self, rng):
        q = rng.randint(1, self.max_denominator)
        return Fraction(rng.randrange(q), q)

    def contains(self, a) -> bool:
        return isinstance(a, Fraction) and 0 <= a < 1

    def encode(self, a):
        a = Fraction(a)
        return f"{a.numerator}/{a.denominator}"

    def decode(self, v):
        return principal(Fraction(v))


# ---------------------------------------------------------------------------
# Z/N
# ---------------------------------------------------------------------------

class ZNModel(GroupModel):
    exact = True

    def __init__(self, N: int):
        if N < 1:
            raise ValueError("N must be positive")
        self.N = int(N)
        self.name = f"zN:{self.N}"

    def identity(self):
        return 0

    def mul(self, a, b):
        return (a + b) % self.N

    def inv(self, a):
        return (-a) % self.N

    def is_central(self, a) -> bool:
        return True

    def center_generators(self) -> list:
        return [1 % self.N]

    def homotopy_group(self, k: int) -> FGAbelianGroup:
        if k < 0:
            raise ValueError("k must be >= 0")
        return FGAbelianGroup()

    def random_element(self, rng):
        return rng.randrange(self.N)

    def contains(self, a) -> bool:
        return isinstance(a, int) and 0 <= a < self.N

    def encode(self, a):
        return int(a)

    def decode(self, v):
        return int(v) % self.N


# ---------------------------------------------------------------------------
# SU(2) as unit quaternions (w, x, y, z)
# ---------------------------------------------------------------------------

def _qnorm(q):
    return math.sqrt(sum(c * c for c in q))


class SU2Model(GroupModel):
    name = "su2"
    exact = False
    tol = 1e-8

    def identity(self):
        return (1.0, 0.0, 0.0, 0.0)

    def mul(self, a, b):
        w1, x1, y1, z1 = a
        w2, x2, y2, z2 = b
        q = (w1 * w2 - x1 * x2 - y1 * y2 - z1 * z2,
             w1 * x2 + x1 * w2 + y1 * z2 - z1 * y2,
             w1 * y2 - x1 * z2 + y1 * w2 + z1 * x2,
             w1 * z2 + x1 * y2 - y1 * x2 + z1 * w2)
        n = _qnorm(q)
        if abs(n - 1.0) <= 1e-12:
            return tuple(q)
        return tuple(c / n for c in q)

    def inv(self, a):
        w, x, y, z = a
        return (w, -x, -y, -z)

    def eq(self, a, b) -> bool:
        return max(abs(p - q) for p, q in zip(a, b)) <= self.tol

    def is_central(self, a) -> bool:
        return self.eq(a, (1.0, 0.0, 0.0, 0.0)) or self.eq(a, (-1.0, 0.0, 0.0, 0.0))

    def center_generators(self) -> list:
        return [(-1.0, 0.0, 0.0, 0.0)]

    def homotopy_group(self, k: int) -> FGAbelianGroup:
        if k < 0:
            raise ValueError("k must be >= 0")
        if k <= 2:
            return FGAbelianGroup()
        if k == 3:
            return FGAbelianGroup(1)
        raise NotImplementedError("pi_k(SU(2)) for k >= 4 is not supported")

    def random_element(self, rng):
        q = [rng.gauss(0.0, 1.0) for _ in range(4)]
        n = _qnorm(q)
        if abs(n - 1.0) <= 1e-12:
            return tuple(q)
        return tuple(c / n for c in q)

    def contains(self, a) -> bool:
        return len(a) == 4 and abs(_qnorm(a) - 1.0) <= 1e-9

    def encode(self, a):
        return [float(c) for c in a]

    def decode(self, v):
        q = [float(c) for c in v]
        if len(q) != 4:
            raise ValueError("su2 element needs 4 components")
        n = _qnorm(q)
        if abs(n - 1.0) <= 1e-12:
            return tuple(q)
        return tuple(c / n for c in q)


def model_from_name(name: str) -> GroupModel:
    if name == "u1":
        return U1Model()
    if name == "su2":
        return SU2Model()
    if name.startswith("zN:"):
        try:
            return ZNModel(int(name[3:]))
        except ValueError:
            pass
    raise UnknownModel(f"unknown group model {name!r} (use u1, zN:<N>, su2)")


# ---------------------------------------------------------------------------
# anchored classes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AnchoredEdgeClass:
    edge: Hashable          # oriented edge key; start -> end
    g_start: Any
    g_end: Any
    label: AbElement        # in pi_1(G)


def make_class(model: GroupModel, edge, g_start, g_end, label: int = 0) -> AnchoredEdgeClass:
    pi1 = model.pi1()
    lab = pi1.element([label]) if pi1.ngens else pi1.zero()
    return AnchoredEdgeClass(edge, g_start, g_end, lab)


def displacement(c: AnchoredEdgeClass) -> Fraction:
    """U(1) only: lifted displacement of the path, in turns."""
    return canonical_arc(c.g_start, c.g_end) + c.label.coordinates[0]


def _u1_class(model, edge, a, b, total: Fraction) -> AnchoredEdgeClass:
    lab = total - canonical_arc(a, b)
    assert lab.denominator == 1, "displacement inconsistent with endpoints"
    return AnchoredEdgeClass(edge, a, b, model.pi1().element([int(lab)]))


def multiply_classes(model: GroupModel, a: AnchoredEdgeClass, b: AnchoredEdgeClass) -> AnchoredEdgeClass:
    """Pointwise product of the two paths."""
    if a.edge != b.edge:
        raise EdgeMismatch(f"{a.edge!r} != {b.edge!r}")
    gs, ge = model.mul(a.g_start, b.g_start), model.mul(a.g_end, b.g_end)
    if isinstance(model, U1Model):
        return _u1_class(model, a.edge, gs, ge, displacement(a) + displacement(b))
    return AnchoredEdgeClass(a.edge, gs, ge, a.label + b.label)


def reverse_class(model: GroupModel, c: AnchoredEdgeClass) -> AnchoredEdgeClass:
    """Class of the pointwise inverse path (h_wv from h_vw).

    The label is negated; for U(1) a half-turn canonical arc is its own
    inverse's canonical arc, so that case picks up a -1 correction.
    """
    gs, ge = model.inv(c.g_start), model.inv(c.g_end)
    if isinstance(model, U1Model):
        return _u1_class(model, c.edge, gs, ge, -displacement(c))
    return AnchoredEdgeClass(c.edge, gs, ge, -c.label)


def vertex_defect(model: GroupModel, triple: Sequence[AnchoredEdgeClass],
                  start_lifts: Optional[Sequence[Fraction]] = None) -> AbElement:
    """Universal-cover defect of three classes ending at a common vertex.

    The product of the end values must be the identity.  For U(1) each
    path is lifted to R starting from ``start_lifts[i]`` (default: the
    representative in [0,1) of its start value); the defect is the sum
    of the lifted end points, an integer number of turns.
    """
    if len(triple) != 3:
        raise ValueError("need exactly three classes")
    ends = model.prod([c.g_end for c in triple])
    if not model.is_identity(ends):
        raise NotInVG("end values do not multiply to the identity")
    pi1 = model.pi1()
    if not isinstance(model, U1Model):
        return pi1.zero()
    if start_lifts is None:
        start_lifts = [principal(Fraction(c.g_start)) for c in triple]
    total = Fraction(0)
    for c, s in zip(triple, start_lifts):
        s = Fraction(s)
        if principal(s) != principal(Fraction(c.g_start)):
            raise ValueError("start lift does not cover the start value")
        total += s + displacement(c)
    assert total.denominator == 1
    return pi1.element([int(total)])


# ---------------------------------------------------------------------------
# triadic S3 action
# ---------------------------------------------------------------------------

# permutations of {1,2,3} in one-line notation: p[i-1] = image of i
S3 = [(1, 2, 3), (2, 3, 1), (3, 1, 2), (2, 1, 3), (3, 2, 1), (1, 3, 2)]
CYCLE_123 = (2, 3, 1)
TRANS_12 = (2, 1, 3)


def perm_compose(p, q):
    """(p q)(i) = p(q(i))"""
    return tuple(p[q[i] - 1] for i in range(3))


def perm_inverse(p):
    out = [0, 0, 0]
    for i, j in enumerate(p):
        out[j - 1] = i + 1
    return tuple(out)


def _word(perm) -> List[Tuple[int, ...]]:
    """Express perm as a product of the generators (123) and (12)."""
    perm = tuple(perm)
    words = {(1, 2, 3): []}
    frontier = [(1, 2, 3)]
    while frontier:
        nxt = []
        for p in frontier:
            for g in (CYCLE_123, TRANS_12):
                q = perm_compose(g, p)
                if q not in words:
                    words[q] = [g] + words[p]
                    nxt.append(q)
        frontier = nxt
    if perm not in words:
        raise ValueError(f"not a permutation of (1,2,3): {perm}")
    return words[perm]


def triadic_act(model: GroupModel, perm, t: Sequence) -> tuple:
    """Left S3 action on triples: generated by
    (123).(g1,g2,g3) = (g3,g1,g2) and (12).(g1,g2,g3) = (g2^-1,g1^-1,g3^-1)."""
    g = tuple(t)
    for gen in reversed(_word(perm)):
        if gen == CYCLE_123:
            g = (g[2], g[0], g[1])
        else:
            g = (model.inv(g[1]), model.inv(g[0]), model.inv(g[2]))
    return g


def in_VG(model: GroupModel, t: Sequence) -> bool:
    return model.is_identity(model.prod(t))
