"""Tail-invariant measures on the path space of a stationary diagram.

Finite side: each distinguished class carries one ergodic probability
measure whose cylinder values are read off the class's extreme vector,
and every invariant probability measure is a unique convex combination
of those.  Infinite side: each non-distinguished class with a non-zero
block carries a sigma-finite measure, built from the Perron vector of
the block and extended to the rest of the diagram by an exact linear
solve; the extension value at a vertex is +inf exactly when some class
on an access chain down to the carrying class has Perron value at least
as large as the carrying one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .diagram import CylinderSet, StationaryDiagram, check_path, heights
from .errors import NotAperiodicError, NotInDomainError, ZeroBlockError
from .spectral import (DEFAULT_GAP, ComponentDecomposition, NumericValue,
                       aperiodicity_check, check_primitive, core_membership, decompose,
                       distinguished_classes, distinguished_eigenvector, nv_ge)


def _as_decomp(d, gap=DEFAULT_GAP) -> ComponentDecomposition:
    return d if isinstance(d, ComponentDecomposition) else decompose(d, gap)


@dataclass(frozen=True)
class ErgodicMeasure:
    decomp: ComponentDecomposition
    class_id: int
    lam: NumericValue
    xi: tuple
    support: frozenset[int]

    kind = "ergodic-finite"

    @property
    def diagram(self) -> StationaryDiagram:
        return self.decomp.diagram

    @property
    def is_exact(self):
        return self.lam.is_exact

    @property
    def full_support(self):
        return len(self.support) == len(self.decomp.classes)

    def value(self, level: int, vertex: int):
        """Measure of any level-n cylinder ending at the given vertex;
        depends on the path only through (level, vertex)."""
        x = self.xi[vertex]
        if self.is_exact:
            return x / self.lam.value ** (level - 1)
        return float(x) / self.lam.as_float ** (level - 1)


def enumerate_ergodic(d, gap: float = DEFAULT_GAP) -> list[ErgodicMeasure]:
    """All ergodic probability measures, one per distinguished class, in
    class index order.  Requires primitive blocks and aperiodicity."""
    decomp = _as_decomp(d, gap)
    verdict = aperiodicity_check(decomp)
    if not verdict:
        raise NotAperiodicError(verdict.reason or verdict.kind,
                                witness_class=verdict.witness_class)
    out = []
    for alpha in distinguished_classes(decomp):
        e = distinguished_eigenvector(decomp, alpha)
        out.append(ErgodicMeasure(decomp, alpha, e.lam, e.xi, e.support_classes))
    return out


def measure_of_cylinder(mu, c):
    """Value of the measure on a cylinder set (or the path defining it)."""
    path = c.path if isinstance(c, CylinderSet) else c
    check_path(mu.diagram, path)
    return mu.value(path.level, path.terminal)


@dataclass(frozen=True)
class InvariantMeasure:
    """Convex combination of the ergodic measures, one coefficient per
    distinguished class in class order."""

    measures: tuple[ErgodicMeasure, ...]
    coefficients: tuple

    kind = "finite-combination"

    def __post_init__(self):
        if len(self.measures) != len(self.coefficients):
            raise ValueError("one coefficient per ergodic measure")
        exact = all(not isinstance(c, float) for c in self.coefficients)
        total = sum(self.coefficients)
        if exact:
            if any(c < 0 for c in self.coefficients) or total != 1:
                raise ValueError("coefficients must be >= 0 and sum to 1")
        elif any(c < -DEFAULT_GAP for c in self.coefficients) or abs(total - 1) > DEFAULT_GAP:
            raise ValueError("coefficients must be >= 0 and sum to 1")

    @property
    def diagram(self) -> StationaryDiagram:
        return self.measures[0].diagram

    @property
    def is_exact(self):
        return (all(m.is_exact for m in self.measures)
                and all(not isinstance(c, float) for c in self.coefficients))

    def p_vector(self, n: int = 1) -> tuple:
        """p(n) = sum_i c_i lambda_i^(1-n) xi_i; satisfies A p(n+1) = p(n)."""
        size = self.diagram.n_vertices
        exact = self.is_exact
        out = [Fraction(0) if exact else 0.0] * size
        for c, m in zip(self.coefficients, self.measures):
            if c == 0:
                continue
            scale = (c / m.lam.value ** (n - 1) if exact
                     else float(c) / m.lam.as_float ** (n - 1))
            for v in range(size):
                out[v] += scale * (m.xi[v] if exact else float(m.xi[v]))
        return tuple(out)

    def value(self, level: int, vertex: int):
        return self.p_vector(level)[vertex]


def measure_from_point(d, p1, gap: float = DEFAULT_GAP) -> InvariantMeasure:
    """The unique invariant probability measure whose level-1 cylinder
    vector is p1.  p1 must be rational, weigh to 1 against the level-1
    heights (all ones), and lie in the cone of the extreme vectors."""
    decomp = _as_decomp(d, gap)
    measures = enumerate_ergodic(decomp, gap)
    p = [Fraction(x) if not isinstance(x, float) else x for x in p1]
    if any(isinstance(x, float) for x in p):
        raise TypeError("p1 must be exact rational")
    if sum(p) != 1:
        raise NotInDomainError("level-1 vector does not have total mass 1")
    verdict = core_membership(decomp, p, tol=gap)
    if verdict.kind != "in-core":
        raise NotInDomainError(f"level-1 vector is outside the measure cone "
                               f"({verdict.kind})")
    coeffs = tuple(c if not isinstance(c, float) else max(c, 0.0)
                   for c in verdict.coefficients)
    return InvariantMeasure(tuple(measures), coeffs)


def minimal_components(d, gap: float = DEFAULT_GAP) -> tuple[int, ...]:
    """Class ids of the minimal closed invariant path sets: exactly the
    classes nothing else has access to."""
    decomp = _as_decomp(d, gap)
    check_primitive(decomp)
    return decomp.initial_classes


def support_classes(mu: ErgodicMeasure):
    """(classes with positive cylinder measures, covers-everything flag)."""
    return tuple(sorted(mu.support)), mu.full_support


@dataclass(frozen=True)
class TailMeasure:
    """Sigma-finite measure carried by a non-distinguished class: cylinder
    values y_v lambda^(1-n) on the class, the solved extension elsewhere,
    +inf where some access chain carries an equal-or-larger Perron value,
    and 0 off the access set."""

    decomp: ComponentDecomposition
    class_id: int
    lam: NumericValue
    y: tuple
    atomic: bool
    base: tuple

    @property
    def kind(self):
        return "sigma-finite-atomic" if self.atomic else "sigma-finite"

    @property
    def diagram(self) -> StationaryDiagram:
        return self.decomp.diagram

    @property
    def is_exact(self):
        return self.lam.is_exact

    def value(self, level: int, vertex: int):
        s = self.base[vertex]
        if s == math.inf:
            return math.inf
        if self.is_exact:
            return s / self.lam.value ** (level - 1)
        return float(s) / self.lam.as_float ** (level - 1)


def tail_valuation(decomp: ComponentDecomposition, alpha: int, gap: float = DEFAULT_GAP):
    """(lam, y, base): Perron value of class alpha, its normalized Perron
    vector, and the per-vertex limit values of the extension.

    base[v] solves lam*s = A s with boundary y on the class, is +inf when a
    class beta != alpha with class(v) >= beta >= alpha has Perron value
    >= lam, and is 0 when v has no access to alpha.  Works for any class
    with a non-zero block; on a distinguished class the result is a
    positive multiple of the ergodic extreme vector.
    """
    cls = decomp.classes[alpha]
    if cls.is_zero:
        raise ZeroBlockError(f"class {alpha} has a zero block")
    lam = cls.rho
    exact = lam.is_exact
    total = sum(cls.perron)
    y = tuple(v / total for v in cls.perron) if exact else \
        tuple(float(v) / float(total) for v in cls.perron)

    k = len(decomp.classes)
    divergent = set()
    for g in range(k):
        if g == alpha or not decomp.access[g][alpha]:
            continue
        for b in range(k):
            if (b != alpha and decomp.access[g][b] and decomp.access[b][alpha]
                    and not decomp.classes[b].is_zero
                    and nv_ge(decomp.classes[b].rho, lam, gap)):
                divergent.add(g)
                break
    finite = [g for g in range(k)
              if g != alpha and decomp.access[g][alpha] and g not in divergent]

    n = len(decomp.a_matrix)
    a = decomp.a_matrix
    base = [Fraction(0) if exact else 0.0] * n
    for v, yv in zip(cls.vertices, y):
        base[v] = yv
    for g in divergent:
        for v in decomp.classes[g].vertices:
            base[v] = math.inf

    t_verts = [v for g in finite for v in decomp.classes[g].vertices]
    if t_verts:
        lam_s = lam.value if exact else lam.as_float
        lhs = [[(lam_s if i == j else 0) - (a[v][w] if exact else float(a[v][w]))
                for j, w in enumerate(t_verts)] for i, v in enumerate(t_verts)]
        if exact:
            lhs = [[Fraction(x) for x in row] for row in lhs]
        rhs = []
        for v in t_verts:
            acc = Fraction(0) if exact else 0.0
            for w, yw in zip(cls.vertices, y):
                acc += (a[v][w] * yw) if exact else float(a[v][w]) * yw
            rhs.append(acc)
        sol = linalg.solve_square(lhs, rhs)
        for v, s in zip(t_verts, sol):
            base[v] = s
    return lam, y, tuple(base)


def enumerate_infinite(d, gap: float = DEFAULT_GAP,
                       include_atomic: bool = True) -> list[TailMeasure]:
    """Sigma-finite measures, one per non-distinguished class with a
    non-zero block, in class index order.  Atomic ones (the class block
    is the 1x1 identity) can be filtered out."""
    decomp = _as_decomp(d, gap)
    verdict = aperiodicity_check(decomp)
    if not verdict:
        raise NotAperiodicError(verdict.reason or verdict.kind,
                                witness_class=verdict.witness_class)
    out = []
    for cls in decomp.classes:
        if cls.distinguished or cls.is_zero:
            continue
        atomic = cls.block == ((1,),)
        if atomic and not include_atomic:
            continue
        lam, y, base = tail_valuation(decomp, cls.index, gap)
        out.append(TailMeasure(decomp, cls.index, lam, y, atomic, base))
    return out


def tail_measure_of_cylinder(nu: TailMeasure, c):
    """Value in [0, +inf] of the sigma-finite measure on a cylinder."""
    path = c.path if isinstance(c, CylinderSet) else c
    check_path(nu.diagram, path)
    return nu.value(path.level, path.terminal)


def mass_proxy(decomp: ComponentDecomposition, alpha: int, n: int,
               gap: float = DEFAULT_GAP):
    """Mass of the level-n tail set staying in class alpha, computed with
    the full diagram's heights: sum over v in alpha of h_v(n) y_v
    lam^(1-n).  Diverges for non-distinguished alpha, converges to a
    positive constant for distinguished alpha."""
    cls = decomp.classes[alpha]
    if cls.is_zero:
        raise ZeroBlockError(f"class {alpha} has a zero block")
    h = heights(decomp.diagram, n).values
    total = sum(cls.perron)
    lam = cls.rho
    if lam.is_exact:
        return sum(h[v] * yv / total / lam.value ** (n - 1)
                   for v, yv in zip(cls.vertices, cls.perron))
    return sum(h[v] * float(yv) / float(total) / lam.as_float ** (n - 1)
               for v, yv in zip(cls.vertices, cls.perron))


def truncated_extension(decomp: ComponentDecomposition, alpha: int, m: int):
    """s_m(v) = lam^(-m) sum_{w in alpha} (A^m)_{v,w} y_w: the truncated
    series whose limit the exact solve computes.  Non-decreasing in m."""
    cls = decomp.classes[alpha]
    if cls.is_zero:
        raise ZeroBlockError(f"class {alpha} has a zero block")
    lam = cls.rho
    total = float(sum(cls.perron))
    y = {v: float(yv) / total for v, yv in zip(cls.vertices, cls.perron)}
    power = linalg.mat_pow([list(r) for r in decomp.a_matrix], m)
    scale = lam.as_float ** m
    return tuple(sum(power[v][w] * yw for w, yw in y.items()) / scale
                 for v in range(len(power)))


def borel_invariant(d, gap: float = DEFAULT_GAP) -> int:
    """Number of distinguished classes: the complete invariant for Borel
    isomorphism of the tail relation, and the count of ergodic
    probability measures."""
    decomp = _as_decomp(d, gap)
    verdict = aperiodicity_check(decomp)
    if not verdict:
        raise NotAperiodicError(verdict.reason or verdict.kind,
                                witness_class=verdict.witness_class)
    return len(distinguished_classes(decomp))
