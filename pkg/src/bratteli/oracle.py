"""Brute-force cross-checks for the formula-driven modules.

Everything here recomputes a quantity from first principles (path
enumeration, successor iteration, exact linear programming) so the
closed-form implementations have an independent witness at small sizes.
Oracles prefer exactness over speed; floats appear only in the orbit
simulation and when a measure itself carries approximate data.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .diagram import CylinderSet, PathWord, enumerate_paths, heights
from .errors import CapExceeded, EndpointMismatch, SizeRefused
from .measures import measure_of_cylinder
from .spectral import ComponentDecomposition
from .vershik import OrderedDiagram, successor

STEP_CAP = 10 ** 6


def _close(a, b, tol=1e-9):
    if isinstance(a, float) and math.isinf(a) or isinstance(b, float) and math.isinf(b):
        return a == b
    if not isinstance(a, float) and not isinstance(b, float):
        return a == b
    return abs(a - b) <= tol * (1 + max(abs(a), abs(b)))


@dataclass(frozen=True)
class InvarianceReport:
    """Outcome of the three stationarity checks for one measure."""

    n_max: int
    checks_run: int
    violations: tuple[str, ...]
    skipped: tuple[str, ...]

    @property
    def ok(self):
        return not self.violations


def verify_invariance(d, m, n_max: int, cap: int = STEP_CAP) -> InvarianceReport:
    """Check that m is tail invariant on d up to level n_max.

    (a) every enumerated path to the same level-n vertex gets the same
        mass, and a cylinder's mass equals the sum over its one-edge
        extensions; (b) the vertex mass vectors satisfy A p(n+1) = p(n);
    (c) total mass at each level is 1.  Infinite measures skip (c) and
    compare infinities positionally in (b).
    """
    a = linalg.transpose(d.incidence)
    n = d.n_vertices
    violations = []
    skipped = []
    checks = 0
    is_finite = not any(isinstance(m.value(1, v), float) and math.isinf(m.value(1, v))
                        for v in range(n))

    for lvl in range(1, n_max + 1):
        p_now = [m.value(lvl, v) for v in range(n)]
        p_next = [m.value(lvl + 1, v) for v in range(n)]

        # (a) constancy over paths and one-edge additivity
        for v in range(n):
            try:
                paths = enumerate_paths(d, v, lvl, cap)
            except CapExceeded:
                skipped.append(f"path enumeration at level {lvl} vertex {v} "
                               f"exceeds cap {cap}")
                continue
            for p in paths:
                checks += 1
                got = measure_of_cylinder(m, CylinderSet(p))
                if not _close(got, p_now[v]):
                    violations.append(
                        f"(a) path {p.vertices} mass {got} != vertex mass "
                        f"{p_now[v]} at level {lvl}")
            extension_mass = sum(d.incidence[w][v] * p_next[w] for w in range(n)
                                 if d.incidence[w][v])
            checks += 1
            if not _close(extension_mass, p_now[v]):
                violations.append(
                    f"(a) extensions of vertex {v} level {lvl} sum to "
                    f"{extension_mass}, cylinder mass is {p_now[v]}")

        # (b) stationarity of the mass vectors
        for v in range(n):
            checks += 1
            lhs = sum(a[v][w] * p_next[w] for w in range(n) if a[v][w])
            if not _close(lhs, p_now[v]):
                violations.append(
                    f"(b) (A p({lvl + 1}))[{v}] = {lhs} != p({lvl})[{v}] "
                    f"= {p_now[v]}")

        # (c) unit total mass, finite measures only
        if is_finite:
            checks += 1
            total = sum(h * p for h, p in zip(heights(d, lvl).values, p_now))
            if not _close(total, 1):
                violations.append(f"(c) total mass at level {lvl} is {total}")
        elif lvl == 1:
            skipped.append("(c) total mass skipped for an infinite measure")

    return InvarianceReport(n_max, checks, tuple(violations), tuple(skipped))


def brute_force_Q(od: OrderedDiagram, e: PathWord, e2: PathWord,
                  cap: int = STEP_CAP) -> int:
    """Rank difference e2 - e found by walking the successor map.

    Independent of path_rank: counts actual successor steps between the
    two paths, in whichever direction terminates.
    """
    if e.level != e2.level or e.terminal != e2.terminal:
        raise EndpointMismatch(
            f"paths end at level {e.level} vertex {e.terminal} vs "
            f"level {e2.level} vertex {e2.terminal}")
    tower = heights(od.base, e.level).values[e.terminal]
    if tower > cap:
        raise CapExceeded(f"tower of {tower} paths exceeds step cap",
                          required=tower, cap=cap)
    if e == e2:
        return 0
    cur, steps = e, 0
    while cur is not None and steps < tower:
        cur = successor(od, cur)
        steps += 1
        if cur == e2:
            return steps
    cur, steps = e2, 0
    while cur is not None and steps < tower:
        cur = successor(od, cur)
        steps += 1
        if cur == e:
            return -steps
    raise ArithmeticError("paths share a tower but neither reaches the other")


@dataclass(frozen=True)
class CoreOracleResult:
    feasible: bool
    k: int
    preimage: tuple | None
    certificate: tuple | None


def core_preimage_oracle(a_matrix, x, k: int) -> CoreOracleResult:
    """Exact feasibility of A^k y = x, y >= 0, by rational elimination.

    Small sizes only: refuses N > 12 or k > 2N rather than running an
    open-ended search.
    """
    if isinstance(a_matrix, ComponentDecomposition):
        a_matrix = a_matrix.a_matrix
    n = len(a_matrix)
    if n > 12:
        raise SizeRefused(f"oracle limited to 12 vertices, got {n}")
    if not 1 <= k <= 2 * n:
        raise SizeRefused(f"power {k} outside 1..{2 * n}")
    if len(x) != n:
        raise ValueError(f"vector has {len(x)} entries, expected {n}")
    ak = linalg.mat_pow([list(r) for r in a_matrix], k)
    ak = [[Fraction(v) for v in row] for row in ak]
    y, cert = linalg.lp_nonneg_solve(ak, [Fraction(v) for v in x])
    if y is not None:
        return CoreOracleResult(True, k, tuple(y), None)
    return CoreOracleResult(False, k, None, tuple(cert))


@dataclass(frozen=True)
class OrbitFrequency:
    visits: int
    steps: int
    exhausted: bool
    working_level: int

    @property
    def frequency(self) -> Fraction:
        return Fraction(self.visits, self.steps)


def empirical_orbit_frequency(od: OrderedDiagram, start: PathWord, steps: int,
                              target) -> OrbitFrequency:
    """Visit frequency of the successor orbit of start in the target
    cylinder.

    Works at a level at least four above the target so the orbit is long
    enough to average; the start path is extended minimally upward and
    counts as the first iterate.  Hitting the maximal path ends the walk
    early with a partial count.
    """
    if steps < 1:
        raise ValueError("need at least one step")
    if steps > STEP_CAP:
        raise CapExceeded(f"{steps} steps above the orbit cap",
                          required=steps, cap=STEP_CAP)
    t = target.path if isinstance(target, CylinderSet) else target
    working = max(start.level, t.level + 4)

    cur = start
    while cur.level < working:
        w = cur.terminal
        v = next(u for u in range(od.base.n_vertices) if od.base.incidence[u][w])
        cur = PathWord(cur.vertices + (v,), cur.indices + (0,))

    visits = 0
    taken = 0
    exhausted = False
    for _ in range(steps):
        taken += 1
        if cur.prefix(t.level) == t:
            visits += 1
        cur = successor(od, cur)
        if cur is None:
            exhausted = taken < steps
            break
    return OrbitFrequency(visits, taken, exhausted, working)


@dataclass(frozen=True)
class AsymptoticsReport:
    """Ratios (A^n)[i][j] / lam^n over a window, with a tail verdict."""

    alpha: int
    i: int
    j: int
    ratios: tuple
    verdict: str

    @property
    def converging_positive(self):
        return self.verdict == "Converging-positive"


def asymptotics_check(decomp: ComponentDecomposition, alpha: int, i: int, j: int,
                      n_range) -> AsymptoticsReport:
    """Classify the growth of (A^n)[i][j] against the class eigenvalue.

    Tail-ratio test: consecutive-ratio below 1 - 1/20 (or a zero tail)
    reads as Vanishing, anything flatter as Converging-positive.  The
    access hypotheses relating i, j and alpha are assumed, not checked.
    """
    ns = sorted(n_range)
    if len(ns) < 2:
        raise ValueError("need at least two sample points")
    lam = decomp.classes[alpha].rho
    exact = lam.is_exact
    ratios = []
    power = [list(r) for r in decomp.a_matrix]
    table = {}
    for n in range(1, ns[-1] + 1):
        if n > 1:
            power = linalg.mat_mul(power, decomp.a_matrix)
        if n in ns:
            table[n] = power[i][j]
    for n in ns:
        if exact:
            ratios.append(Fraction(table[n]) / lam.value ** n)
        else:
            ratios.append(table[n] / lam.as_float ** n)
    last, prev = ratios[-1], ratios[-2]
    if last == 0:
        verdict = "Vanishing"
    elif last / prev < Fraction(19, 20):
        verdict = "Vanishing"
    else:
        verdict = "Converging-positive"
    return AsymptoticsReport(alpha, i, j, tuple(ratios), verdict)
