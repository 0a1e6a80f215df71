"""Class structure and Perron data of the vertex-transition matrix.

All measure-theoretic questions about a stationary diagram reduce to the
matrix A = F^T: its strongly connected classes, the access order between
them, the spectral radius of each diagonal block, and the distinguished
classes (those whose Perron value strictly dominates every class having
access to them).  Distinguished classes carry the extreme rays of the
cone ``core(A) = intersection of A^k(R+^N)`` once every non-zero block
is primitive.

Numeric policy: a block's Perron value is reported exactly whenever it
is rational (it is then an integer root of the characteristic
polynomial, certified by a strictly positive rational eigenvector), and
as a float with a certified residual bound otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .diagram import StationaryDiagram, telescope, validate
from .errors import (AmbiguousComparison, NotDistinguishedError, PrimitivityError,
                     SizeRefused, ZeroBlockError)

DEFAULT_GAP = 1e-9


@dataclass(frozen=True)
class NumericValue:
    """Either an exact rational or a float with a certified residual bound
    on the eigen-equation it came from."""

    value: Fraction | float
    residual_bound: float | None = None

    @property
    def is_exact(self):
        return self.residual_bound is None

    @property
    def as_float(self):
        return float(self.value)

    @staticmethod
    def exact(x):
        return NumericValue(Fraction(x))

    @staticmethod
    def approx(x, residual_bound):
        return NumericValue(float(x), float(residual_bound))

    def render(self):
        if self.is_exact:
            v = self.value
            return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
        return f"{self.value:.17g}±{self.residual_bound:.1e}"

    def __str__(self):
        return self.render()


def nv_compare(a: NumericValue, b: NumericValue, gap: float = DEFAULT_GAP) -> int:
    """-1, 0 or +1; raises AmbiguousComparison when an approximate value
    is within ``gap`` of the other operand."""
    if a.is_exact and b.is_exact:
        return (a.value > b.value) - (a.value < b.value)
    fa, fb = a.as_float, b.as_float
    if abs(fa - fb) < gap:
        raise AmbiguousComparison(
            f"values {a.render()} and {b.render()} are within the gap {gap}")
    return 1 if fa > fb else -1


def nv_gt(a, b, gap=DEFAULT_GAP):
    return nv_compare(a, b, gap) > 0


def nv_ge(a, b, gap=DEFAULT_GAP):
    return nv_compare(a, b, gap) >= 0


def _power_perron(block):
    """Perron value and vector of an irreducible non-negative block by
    power iteration on block + I (the shift makes it primitive), with
    two-sided quotient bounds.  Returns (lam, vector, residual)."""
    n = len(block)
    shifted = [[float(x) + (1.0 if i == j else 0.0) for j, x in enumerate(row)]
               for i, row in enumerate(block)]
    v = [1.0 / n] * n
    lo, hi = 0.0, math.inf
    for _ in range(200000):
        w = [sum(r * x for r, x in zip(row, v)) for row in shifted]
        quotients = [wi / vi for wi, vi in zip(w, v)]
        lo, hi = min(quotients), max(quotients)
        s = sum(w)
        v = [wi / s for wi in w]
        if hi - lo <= 1e-14 * hi:
            break
    lam = 0.5 * (lo + hi) - 1.0
    av = [sum(r * x for r, x in zip(row, v)) for row in block]
    residual = max(abs(avi - lam * vi) for avi, vi in zip(av, v))
    return lam, v, residual


def perron_pair(block):
    """(NumericValue, eigenvector) for an irreducible non-negative integer
    block; exact rationals when the Perron value is rational, floats with
    a certified residual otherwise.  A zero block reports exactly 0."""
    n = len(block)
    if all(x == 0 for row in block for x in row):
        return NumericValue.exact(0), (Fraction(1),) * n
    poly = linalg.char_poly(block)
    tail = next(c for c in reversed(poly) if c != 0)
    for r in linalg.positive_divisors(tail):
        if linalg.poly_eval(poly, r) != 0:
            continue
        shifted = [[Fraction(x) - (r if i == j else 0) for j, x in enumerate(row)]
                   for i, row in enumerate(block)]
        for vec in linalg.kernel_basis(shifted):
            if all(x > 0 for x in vec):
                return NumericValue.exact(r), tuple(vec)
            if all(x < 0 for x in vec):
                return NumericValue.exact(r), tuple(-x for x in vec)
    lam, vec, residual = _power_perron(block)
    norm = max(sum(row) for row in block)
    if residual > 1e-12 * norm:
        raise ArithmeticError(f"power iteration residual {residual} above target")
    return NumericValue.approx(lam, residual), tuple(vec)


def spectral_radius(block) -> NumericValue:
    return perron_pair(block)[0]


def imprimitivity_index(block) -> int:
    """gcd of the cycle lengths of an irreducible non-zero block."""
    n = len(block)
    if all(x == 0 for row in block for x in row):
        raise ZeroBlockError("zero block has no cycles")
    level = [None] * n
    level[0] = 0
    queue = [0]
    while queue:
        u = queue.pop(0)
        for v in range(n):
            if block[u][v] > 0 and level[v] is None:
                level[v] = level[u] + 1
                queue.append(v)
    g = 0
    for u in range(n):
        for v in range(n):
            if block[u][v] > 0:
                g = math.gcd(g, level[u] + 1 - level[v])
    return abs(g)


def _sccs(adj):
    """Tarjan's algorithm, iterative; returns components as vertex lists."""
    n = len(adj)
    index = [None] * n
    low = [0] * n
    on_stack = [False] * n
    stack = []
    counter = 0
    out = []
    for root in range(n):
        if index[root] is not None:
            continue
        work = [(root, 0)]
        while work:
            v, pi = work[-1]
            if pi == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            advanced = False
            for i in range(pi, len(adj[v])):
                w = adj[v][i]
                if index[w] is None:
                    work[-1] = (v, i + 1)
                    work.append((w, 0))
                    advanced = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                out.append(sorted(comp))
    return out


@dataclass(frozen=True)
class ComponentClass:
    index: int
    vertices: tuple[int, ...]
    block: tuple[tuple[int, ...], ...]
    is_zero: bool
    rho: NumericValue
    imprimitivity: int | None
    distinguished: bool
    perron: tuple | None


@dataclass(frozen=True)
class ComponentDecomposition:
    diagram: StationaryDiagram
    a_matrix: tuple[tuple[int, ...], ...]
    classes: tuple[ComponentClass, ...]
    class_of: tuple[int, ...]
    access: tuple[tuple[bool, ...], ...]
    initial_classes: tuple[int, ...]
    final_classes: tuple[int, ...]
    fnf_permutation: tuple[int, ...]
    gap: float

    def accessors_of(self, alpha):
        """Classes beta != alpha having access to alpha."""
        return tuple(b for b in range(len(self.classes))
                     if b != alpha and self.access[b][alpha])

    def class_members(self, alpha):
        labels = self.diagram.effective_labels
        return tuple(labels[v] for v in self.classes[alpha].vertices)


def decompose(d: StationaryDiagram, gap: float = DEFAULT_GAP) -> ComponentDecomposition:
    """Class decomposition of A = F^T with access order, per-block Perron
    data and distinguished flags."""
    n = d.n_vertices
    a = [list(col) for col in zip(*d.incidence)]
    adj = [[j for j in range(n) if a[i][j] > 0] for i in range(n)]
    comps = sorted(_sccs(adj), key=min)
    class_of = [None] * n
    for ci, comp in enumerate(comps):
        for v in comp:
            class_of[v] = ci
    k = len(comps)

    direct = [[False] * k for _ in range(k)]
    for i in range(n):
        for j in adj[i]:
            direct[class_of[i]][class_of[j]] = True
    access = [[direct[b][c] or b == c for c in range(k)] for b in range(k)]
    for mid in range(k):  # transitive closure
        for b in range(k):
            if access[b][mid]:
                row_mid = access[mid]
                access[b] = [x or y for x, y in zip(access[b], row_mid)]

    blocks, zero_flags, rhos, perrons, periods = [], [], [], [], []
    for comp in comps:
        block = tuple(tuple(a[i][j] for j in comp) for i in comp)
        is_zero = all(x == 0 for row in block for x in row)
        rho, vec = perron_pair(block)
        blocks.append(block)
        zero_flags.append(is_zero)
        rhos.append(rho)
        perrons.append(None if is_zero else vec)
        periods.append(None if is_zero else imprimitivity_index(block))

    distinguished = []
    for alpha in range(k):
        if zero_flags[alpha]:
            distinguished.append(False)
            continue
        above = [b for b in range(k) if b != alpha and access[b][alpha]]
        distinguished.append(all(nv_gt(rhos[alpha], rhos[b], gap) for b in above))

    classes = tuple(ComponentClass(ci, tuple(comp), blocks[ci], zero_flags[ci],
                                   rhos[ci], periods[ci], distinguished[ci], perrons[ci])
                    for ci, comp in enumerate(comps))
    initial = tuple(alpha for alpha in range(k)
                    if not any(access[b][alpha] for b in range(k) if b != alpha))
    final = tuple(alpha for alpha in range(k)
                  if not any(access[alpha][b] for b in range(k) if b != alpha))

    # F[perm] is block-lower-triangular iff for every access beta -> alpha
    # the class beta is placed first, so list each class after all of its
    # accessors; initial classes come out first
    order = []
    remaining = set(range(k))
    while remaining:
        ready = sorted(c for c in remaining
                       if not any(access[b][c] for b in remaining if b != c))
        order.extend(ready)
        remaining -= set(ready)
    perm = tuple(v for c in order for v in comps[c])

    return ComponentDecomposition(
        diagram=d,
        a_matrix=tuple(tuple(row) for row in a),
        classes=classes,
        class_of=tuple(class_of),
        access=tuple(tuple(row) for row in access),
        initial_classes=initial,
        final_classes=final,
        fnf_permutation=perm,
        gap=gap,
    )


def distinguished_classes(decomp: ComponentDecomposition) -> tuple[int, ...]:
    return tuple(c.index for c in decomp.classes if c.distinguished)


def check_primitive(decomp: ComponentDecomposition):
    """Raise PrimitivityError unless every non-zero block is primitive."""
    q = 1
    for c in decomp.classes:
        if c.imprimitivity not in (None, 1):
            q = q * c.imprimitivity // math.gcd(q, c.imprimitivity)
    if q != 1:
        raise PrimitivityError(
            f"telescope by {q} first: some diagonal block is imprimitive", power=q)


def telescope_to_primitive(d: StationaryDiagram, gap: float = DEFAULT_GAP):
    """(telescoped diagram, q): smallest power q = lcm of the block
    imprimitivity indices, so every non-zero block of F**q is primitive."""
    decomp = decompose(d, gap)
    q = 1
    for c in decomp.classes:
        if c.imprimitivity is not None:
            q = q * c.imprimitivity // math.gcd(q, c.imprimitivity)
    return (d if q == 1 else telescope(d, q)), q


def positivity_power(d: StationaryDiagram, gap: float = DEFAULT_GAP):
    """Power q such that every non-zero diagonal block of F**q is strictly
    positive.  Computed on boolean patterns, so large entries cost nothing."""
    base, q = telescope_to_primitive(d, gap)
    decomp = decompose(base, gap)
    extra = 1
    for c in decomp.classes:
        if c.is_zero or len(c.vertices) == 0:
            continue
        pattern = [[1 if x > 0 else 0 for x in row] for row in c.block]
        m = 1
        current = pattern
        limit = (len(pattern) - 1) ** 2 + 2
        while any(x == 0 for row in current for x in row):
            current = [[1 if any(a and b for a, b in zip(row, col)) else 0
                        for col in zip(*pattern)] for row in current]
            m += 1
            if m > limit:
                raise PrimitivityError("block never becomes positive; not primitive")
        extra = extra * m // math.gcd(extra, m)
    return q * extra


@dataclass(frozen=True)
class Eigendata:
    alpha: int
    lam: NumericValue
    xi: tuple
    support_classes: frozenset[int]

    @property
    def is_exact(self):
        return self.lam.is_exact


def distinguished_eigenvector(decomp: ComponentDecomposition, alpha: int) -> Eigendata:
    """The extreme vector of the distinguished class alpha: A xi = lam xi,
    xi > 0 exactly on the vertices with access to alpha, normalized so the
    level-1 heights weigh it to 1 (all heights are 1 at level 1)."""
    cls = decomp.classes[alpha]
    if not cls.distinguished:
        raise NotDistinguishedError(f"class {alpha} is not distinguished")
    a = decomp.a_matrix
    n = len(a)
    support = frozenset(b for b in range(len(decomp.classes)) if decomp.access[b][alpha])
    lam = cls.rho
    exact = lam.is_exact

    xi = [Fraction(0) if exact else 0.0] * n
    block_vec = cls.perron if exact else [float(x) for x in cls.perron]
    for v, x in zip(cls.vertices, block_vec):
        xi[v] = x if exact else float(x)

    # solve class by class, each time against already-known classes below
    remaining = [b for b in sorted(support) if b != alpha]
    placed = {alpha}
    while remaining:
        ready = [b for b in remaining
                 if all((c in placed) or (c not in support)
                        for c in range(len(decomp.classes))
                        if c != b and decomp.access[b][c])]
        if not ready:
            raise AssertionError("access order is cyclic")
        for b in ready:
            verts = decomp.classes[b].vertices
            lam_s = lam.value if exact else lam.as_float
            lhs = [[(lam_s if i == j else 0) - (a[v][w] if exact else float(a[v][w]))
                    for j, w in enumerate(verts)] for i, v in enumerate(verts)]
            if exact:
                lhs = [[Fraction(x) for x in row] for row in lhs]
            rhs = []
            for v in verts:
                acc = Fraction(0) if exact else 0.0
                for j in range(n):
                    if decomp.class_of[j] != b and xi[j] != 0:
                        acc += (a[v][j] * xi[j]) if exact else float(a[v][j]) * xi[j]
                rhs.append(acc)
            sol = linalg.solve_square(lhs, rhs)
            for v, x in zip(verts, sol):
                xi[v] = x
            placed.add(b)
        remaining = [b for b in remaining if b not in placed]

    total = sum(xi)
    xi = [x / total for x in xi]
    support_vertices = {v for v in range(n) if decomp.class_of[v] in support}
    for v in range(n):
        inside = v in support_vertices
        if exact:
            assert (xi[v] > 0) == inside
        elif inside:
            assert xi[v] > 0
    return Eigendata(alpha, lam, tuple(xi), support)


@dataclass(frozen=True)
class CoreVerdict:
    kind: str  # "in-core" | "not-in-core" | "unknown"
    k: int | None = None
    coefficients: tuple | None = None


def _solve_cone_exact(vectors, x):
    """Solve sum c_i vectors[i] = x exactly; (coeffs, True) when solvable."""
    rows = [[vec[v] for vec in vectors] for v in range(len(x))]
    sol = linalg.solve_exact(rows, [Fraction(xx) for xx in x])
    if sol is None:
        return None
    # solve_exact zeroes free variables; verify, since the system is overdetermined
    for v in range(len(x)):
        if sum(vec[v] * c for vec, c in zip(vectors, sol)) != x[v]:
            return None
    return sol


def core_membership(decomp: ComponentDecomposition, x, k_max: int | None = None,
                    tol: float = DEFAULT_GAP) -> CoreVerdict:
    """Is x in the limit cone of A?  Fast path: decompose x over the
    distinguished extreme vectors.  Slow path (exact, N <= 12): first k
    with ``A^k y = x, y >= 0`` infeasible."""
    check_primitive(decomp)
    n = len(decomp.a_matrix)
    if any(isinstance(v, float) for v in x):
        raise TypeError("membership queries take exact rational vectors")
    x = [Fraction(v) for v in x]
    if len(x) != n:
        raise ValueError("vector length must match the vertex count")
    if k_max is None:
        k_max = 2 * n
    eig = [distinguished_eigenvector(decomp, alpha) for alpha in distinguished_classes(decomp)]

    if all(e.is_exact for e in eig):
        coeffs = _solve_cone_exact([e.xi for e in eig], x)
        if coeffs is not None and all(c >= 0 for c in coeffs):
            return CoreVerdict("in-core", coefficients=tuple(coeffs))
    else:
        cols = [[float(v) for v in e.xi] for e in eig]
        gram = [[sum(a * b for a, b in zip(ci, cj)) for cj in cols] for ci in cols]
        rhs = [sum(c * float(v) for c, v in zip(col, x)) for col in cols]
        try:
            coeffs = linalg.solve_square(gram, rhs)
        except ZeroDivisionError:
            coeffs = None
        if coeffs is not None:
            recon = [sum(c * col[v] for c, col in zip(coeffs, cols)) for v in range(n)]
            scale = 1.0 + max(abs(float(v)) for v in x)
            if (max(abs(r - float(v)) for r, v in zip(recon, x)) <= tol * scale
                    and all(c >= -tol for c in coeffs)):
                return CoreVerdict("in-core", coefficients=tuple(coeffs))

    if n > 12:
        return CoreVerdict("unknown")
    a = [list(row) for row in decomp.a_matrix]
    power = linalg.identity(n)
    for k in range(1, k_max + 1):
        power = linalg.mat_mul(power, a)
        y, _ = linalg.lp_nonneg_solve(power, x)
        if y is None:
            return CoreVerdict("not-in-core", k=k)
    return CoreVerdict("unknown")


@dataclass(frozen=True)
class AperiodicityResult:
    kind: str  # "aperiodic" | "not-aperiodic" | "invalid"
    witness_class: int | None = None
    reason: str | None = None

    def __bool__(self):
        return self.kind == "aperiodic"


def aperiodicity_check(decomp: ComponentDecomposition) -> AperiodicityResult:
    """Does every infinite path have an infinite tail class?

    Requires every non-zero block primitive.  Two checks: (i) every
    initial class has a non-zero block with Perron value > 1; (ii) every
    class whose block is the 1x1 identity is fed from some non-zero
    class above it.
    """
    bad = validate(decomp.diagram)
    if bad:
        return AperiodicityResult("invalid", reason="; ".join(x.message for x in bad))
    check_primitive(decomp)
    one = NumericValue.exact(1)
    for alpha in decomp.initial_classes:
        cls = decomp.classes[alpha]
        if cls.is_zero or not nv_gt(cls.rho, one, decomp.gap):
            return AperiodicityResult(
                "not-aperiodic", witness_class=alpha,
                reason=f"initial class {alpha} has Perron value {cls.rho.render()}")
    for cls in decomp.classes:
        if cls.block == ((1,),):
            feeders = [b for b in decomp.accessors_of(cls.index)
                       if not decomp.classes[b].is_zero]
            if not feeders:
                return AperiodicityResult(
                    "not-aperiodic", witness_class=cls.index,
                    reason=f"single-loop class {cls.index} receives no outside paths")
    return AperiodicityResult("aperiodic")
