"""Successor dynamics of an ordered stationary diagram.

An order assigns each vertex a word listing the sources of its incoming
edge bundle from smallest to largest.  That single piece of data yields
the minimal and maximal paths, the successor map on finite paths, and
the rank of a path inside its cylinder class.  Return times between the
two legs of a diamond (a pair of distinct equal-endpoint paths) form
integer sequences P_n obeying the characteristic-polynomial recurrence
of A; exact divisibility of those sequences decides which rational
rotation numbers can be eigenvalues, and the same machinery produces the
non-mixing lower bounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from . import linalg
from .diagram import PathWord, StationaryDiagram, check_path, telescope
from .errors import (EndpointMismatch, NotDistinguishedError, PrimitivityError,
                     ZeroMeasureCylinder)
from .spectral import (DEFAULT_GAP, ComponentDecomposition, decompose,
                       distinguished_eigenvector, positivity_power)


@dataclass(frozen=True)
class OrderedDiagram:
    base: StationaryDiagram
    order: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "order", tuple(tuple(w) for w in self.order))
        f = self.base.incidence
        n = self.base.n_vertices
        if len(self.order) != n:
            raise ValueError("need one order word per vertex")
        for v, word in enumerate(self.order):
            counts = [0] * n
            for s in word:
                if not 0 <= s < n:
                    raise ValueError(f"order word of vertex {v} mentions vertex {s}")
                counts[s] += 1
            if counts != list(f[v]):
                raise ValueError(
                    f"order word of vertex {v} does not match its incoming bundle")

    @property
    def n_vertices(self):
        return self.base.n_vertices

    @cached_property
    def _rank_tables(self):
        """Per vertex: letter -> bundle positions of its parallel edges,
        and position -> (letter, occurrence)."""
        by_letter, by_pos = [], []
        for word in self.order:
            pos_of = {}
            decode = []
            for pos, s in enumerate(word):
                pos_of.setdefault(s, []).append(pos)
                decode.append((s, len(pos_of[s]) - 1))
            by_letter.append({s: tuple(p) for s, p in pos_of.items()})
            by_pos.append(tuple(decode))
        return tuple(by_letter), tuple(by_pos)

    def bundle_rank(self, vertex, source, mult):
        """Bundle position of the mult-th parallel edge source -> vertex."""
        return self._rank_tables[0][vertex][source][mult]

    def edge_at(self, vertex, pos):
        """(source, mult) of the bundle position pos at vertex."""
        return self._rank_tables[1][vertex][pos]


def _extreme_path(od: OrderedDiagram, v: int, n: int, last: bool) -> PathWord:
    vertices = [v]
    mults = []
    for _ in range(n - 1):
        word = od.order[vertices[-1]]
        pos = len(word) - 1 if last else 0
        source, mult = od.edge_at(vertices[-1], pos)
        vertices.append(source)
        mults.append(mult)
    vertices.reverse()
    mults.reverse()
    return PathWord(tuple(vertices), tuple(mults))


def min_path(od: OrderedDiagram, v: int, n: int) -> PathWord:
    """The unique path to (v, n) all of whose edges are bundle-minimal."""
    return _extreme_path(od, v, n, last=False)


def max_path(od: OrderedDiagram, v: int, n: int) -> PathWord:
    return _extreme_path(od, v, n, last=True)


def is_maximal(od: OrderedDiagram, p: PathWord) -> bool:
    return all(od.bundle_rank(t, s, m) == len(od.order[t]) - 1
               for _, s, t, m in p.edges if s is not None)


def successor(od: OrderedDiagram, p: PathWord) -> PathWord | None:
    """Next path in the rank order of E(v_0, terminal); None when p is the
    maximal path (the expected terminal case, not a fault)."""
    check_path(od.base, p)
    for t in range(2, p.level + 1):
        target = p.vertices[t - 1]
        pos = od.bundle_rank(target, p.vertices[t - 2], p.indices[t - 2])
        if pos == len(od.order[target]) - 1:
            continue
        source, mult = od.edge_at(target, pos + 1)
        below = min_path(od, source, t - 1)
        return PathWord(below.vertices + p.vertices[t - 1:],
                        below.indices + (mult,) + p.indices[t - 1:])
    return None


def path_rank(od: OrderedDiagram, p: PathWord) -> int:
    """Position of p in the successor enumeration of E(v_0, terminal):
    each edge contributes the heights of everything below it in its
    bundle."""
    check_path(od.base, p)
    if p.level == 1:
        return 0
    h = _height_table(od.base, p.level - 1)
    total = 0
    for t in range(2, p.level + 1):
        target = p.vertices[t - 1]
        pos = od.bundle_rank(target, p.vertices[t - 2], p.indices[t - 2])
        word = od.order[target]
        total += sum(h[t - 1][word[q]] for q in range(pos))
    return total


def q_steps(od: OrderedDiagram, e: PathWord, e2: PathWord) -> int:
    """Signed number of successor steps from e to e2."""
    if e.level != e2.level or e.terminal != e2.terminal:
        raise EndpointMismatch("paths must share level and terminal vertex")
    return path_rank(od, e2) - path_rank(od, e)


def _height_table(d: StationaryDiagram, n_max: int):
    """h[n][v] for n = 1..n_max (index 0 unused)."""
    table = [None, [1] * d.n_vertices]
    for _ in range(n_max - 1):
        prev = table[-1]
        table.append([sum(f * hh for f, hh in zip(row, prev)) for row in d.incidence])
    return table


@dataclass(frozen=True)
class Leg:
    """A path between two levels, source first; mults index parallel
    edges, so a leg is placeable at any level."""

    vertices: tuple[int, ...]
    mults: tuple[int, ...]

    def __post_init__(self):
        if len(self.vertices) != len(self.mults) + 1 or not self.mults:
            raise ValueError("a leg needs k >= 1 edges")

    @property
    def length(self):
        return len(self.mults)

    @property
    def source(self):
        return self.vertices[0]

    @property
    def range(self):
        return self.vertices[-1]


@dataclass(frozen=True)
class Diamond:
    leg_a: Leg
    leg_b: Leg
    class_id: int | None = None

    def __post_init__(self):
        a, b = self.leg_a, self.leg_b
        if a.length != b.length:
            raise ValueError("legs must have equal length")
        if a.source != b.source or a.range != b.range:
            raise ValueError("legs must share both endpoints")
        if (a.vertices, a.mults) == (b.vertices, b.mults):
            raise ValueError("legs must be distinct")

    @property
    def length(self):
        return self.leg_a.length

    @property
    def vertices_visited(self):
        return frozenset(self.leg_a.vertices) | frozenset(self.leg_b.vertices)


def _leg_key(od, leg: Leg):
    ranks = tuple(od.bundle_rank(leg.vertices[t + 1], leg.vertices[t], m)
                  for t, m in enumerate(leg.mults))
    return (leg.vertices, ranks)


def make_diamond(od: OrderedDiagram, leg_a: Leg, leg_b: Leg,
                 class_id: int | None = None) -> Diamond:
    """Canonical form: lexicographically smaller leg first (by vertex
    sequence, then bundle ranks)."""
    if _leg_key(od, leg_b) < _leg_key(od, leg_a):
        leg_a, leg_b = leg_b, leg_a
    return Diamond(leg_a, leg_b, class_id)


def enumerate_diamonds(od: OrderedDiagram, decomp: ComponentDecomposition | None = None,
                       alpha: int | None = None, max_len: int = 2) -> list[Diamond]:
    """All diamonds of length <= max_len (<= 2), one per unordered leg
    pair.  With alpha set, every visited vertex must lie in that class.
    Length-2 pairs sharing their middle vertex are omitted: they split
    into two length-1 diamonds."""
    if max_len > 2:
        raise ValueError("only lengths 1 and 2 are enumerated")
    f = od.base.incidence
    if alpha is not None:
        if decomp is None:
            raise ValueError("class restriction needs the decomposition")
        scope = set(decomp.classes[alpha].vertices)
    else:
        scope = set(range(od.n_vertices))

    out = []
    for v in sorted(scope):
        for s in sorted(scope):
            for k1 in range(f[v][s]):
                for k2 in range(k1 + 1, f[v][s]):
                    out.append(make_diamond(od, Leg((s, v), (k1,)),
                                            Leg((s, v), (k2,)), alpha))
    if max_len < 2:
        return out
    for j in sorted(scope):                     # source
        for jp in sorted(scope):                # range
            mids = [i for i in sorted(scope) if f[i][j] > 0 and f[jp][i] > 0]
            for ai in range(len(mids)):
                for bi in range(ai + 1, len(mids)):
                    i, ip = mids[ai], mids[bi]
                    for k1 in range(f[i][j]):
                        for k2 in range(f[jp][i]):
                            for k3 in range(f[ip][j]):
                                for k4 in range(f[jp][ip]):
                                    out.append(make_diamond(
                                        od, Leg((j, i, jp), (k1, k2)),
                                        Leg((j, ip, jp), (k3, k4)), alpha))
    return out


def _leg_low(od, leg: Leg, h, n: int) -> int:
    """Rank of the minimal extension below a leg placed with its source
    at level n, counted within E(v_0, range) and relative to the part
    contributed by the leg itself."""
    total = 0
    for t, m in enumerate(leg.mults):
        target = leg.vertices[t + 1]
        pos = od.bundle_rank(target, leg.vertices[t], m)
        word = od.order[target]
        total += sum(h[n + t][word[q]] for q in range(pos))
    return total


def p_value(od: OrderedDiagram, diamond: Diamond, n: int) -> int:
    """Return time P_n: successor steps from the tower of leg_a to the
    tower of leg_b when the diamond's source sits at level n."""
    h = _height_table(od.base, n + diamond.length - 1)
    return _leg_low(od, diamond.leg_b, h, n) - _leg_low(od, diamond.leg_a, h, n)


@dataclass(frozen=True)
class PSequence:
    diamond: Diamond
    values: tuple[int, ...]
    coefficients: tuple[int, ...]

    def value(self, n: int) -> int:
        return self.values[n - 1]

    def extended(self, extra: int) -> "PSequence":
        """Continue by the characteristic recurrence
        P_{n+N} = d_1 P_{n+N-1} + ... + d_N P_n."""
        vals = list(self.values)
        d = self.coefficients
        for _ in range(extra):
            vals.append(sum(di * vals[-i - 1] for i, di in enumerate(d)))
        return PSequence(self.diamond, tuple(vals), d)


def recurrence_coefficients(d: StationaryDiagram) -> tuple[int, ...]:
    """d_1..d_N with det(zI - A) = z^N - d_1 z^(N-1) - ... - d_N."""
    poly = linalg.char_poly([list(row) for row in d.incidence])
    return tuple(-c for c in poly[1:])


def p_sequence(od: OrderedDiagram, diamond: Diamond, n_max: int) -> PSequence:
    h = _height_table(od.base, n_max + diamond.length - 1)
    values = tuple(_leg_low(od, diamond.leg_b, h, n) - _leg_low(od, diamond.leg_a, h, n)
                   for n in range(1, n_max + 1))
    return PSequence(diamond, values, recurrence_coefficients(od.base))


def _signature(od, diamond: Diamond):
    """P_n depends on the diamond only through per-step (target, rank,
    rank') triples; used to dedupe the eigenvalue checks."""
    sig = []
    for t in range(diamond.length):
        ta = diamond.leg_a.vertices[t + 1]
        tb = diamond.leg_b.vertices[t + 1]
        ra = od.bundle_rank(ta, diamond.leg_a.vertices[t], diamond.leg_a.mults[t])
        rb = od.bundle_rank(tb, diamond.leg_b.vertices[t], diamond.leg_b.mults[t])
        sig.append((ta, ra, tb, rb))
    return tuple(sig)


def _require_positive_blocks(decomp: ComponentDecomposition):
    for cls in decomp.classes:
        if not cls.is_zero and any(x == 0 for row in cls.block for x in row):
            q = positivity_power(decomp.diagram, decomp.gap)
            raise PrimitivityError(
                f"some diagonal block has zero entries; telescope by {q} first",
                power=q)


def default_window(d: StationaryDiagram) -> tuple[int, int]:
    """Window [N, 3N]: starting at N with length > 2N makes the exact
    divisibility test decisive for rational candidates, because the P
    sequences satisfy an order-N integer recurrence."""
    n = d.n_vertices
    return (n, 3 * n)


def is_decisive(d: StationaryDiagram, window) -> bool:
    n = d.n_vertices
    return window[0] >= n and window[1] - window[0] + 1 >= 2 * n


@dataclass(frozen=True)
class EigenvalueVerdict:
    passed: bool
    theta: Fraction
    window: tuple[int, int]
    decisive: bool
    fail_n: int | None = None
    fail_diamond: Diamond | None = None
    fail_vertex: int | None = None

    def __bool__(self):
        return self.passed


def _p_tables(od, decomp, alpha, window):
    """Unique P value rows over the window, one per diamond signature,
    paired with a representative diamond."""
    diamonds = enumerate_diamonds(od, decomp, alpha, max_len=2)
    n1, n2 = window
    h = _height_table(od.base, n2 + 2)
    rows = {}
    for dm in diamonds:
        sig = _signature(od, dm)
        if sig in rows:
            continue
        rows[sig] = (dm, tuple(
            _leg_low(od, dm.leg_b, h, n) - _leg_low(od, dm.leg_a, h, n)
            for n in range(n1, n2 + 1)))
    return list(rows.values())


def eigenvalue_check(od: OrderedDiagram, alpha: int, theta,
                     window: tuple[int, int] | None = None,
                     decomp: ComponentDecomposition | None = None,
                     gap: float = DEFAULT_GAP) -> EigenvalueVerdict:
    """Exact divisibility test: exp(2 pi i theta) can be an eigenvalue of
    the system of the distinguished class alpha iff theta * P_n is an
    integer for every diamond of length <= 2 inside the class, for all
    large n.  Requires strictly positive blocks (telescope first)."""
    if decomp is None:
        decomp = decompose(od.base, gap)
    _require_positive_blocks(decomp)
    if not decomp.classes[alpha].distinguished:
        raise NotDistinguishedError(f"class {alpha} is not distinguished")
    theta = Fraction(theta)
    if window is None:
        window = default_window(od.base)
    decisive = is_decisive(od.base, window)
    p, q = theta.numerator, theta.denominator
    if q == 1:
        return EigenvalueVerdict(True, theta, window, decisive)
    for dm, values in _p_tables(od, decomp, alpha, window):
        for offset, pn in enumerate(values):
            if (p * pn) % q != 0:
                return EigenvalueVerdict(False, theta, window, decisive,
                                         fail_n=window[0] + offset, fail_diamond=dm)
    return EigenvalueVerdict(True, theta, window, decisive)


def candidate_thetas(q_max: int) -> list[Fraction]:
    """0 and every reduced p/q in (0,1) with q <= q_max, ascending."""
    out = {Fraction(0)}
    for q in range(2, q_max + 1):
        for p in range(1, q):
            if math.gcd(p, q) == 1:
                out.add(Fraction(p, q))
    return sorted(out)


def eigenvalue_search(od: OrderedDiagram, alpha: int, q_max: int,
                      window: tuple[int, int] | None = None,
                      decomp: ComponentDecomposition | None = None,
                      gap: float = DEFAULT_GAP,
                      thetas=None) -> list[Fraction]:
    """All rational rotation numbers with denominator <= q_max passing the
    divisibility test.  [0] alone is weak-mixing evidence at q_max.

    thetas overrides the candidate list (used to partition a search
    across workers); results are always in candidate order.
    """
    if decomp is None:
        decomp = decompose(od.base, gap)
    _require_positive_blocks(decomp)
    if not decomp.classes[alpha].distinguished:
        raise NotDistinguishedError(f"class {alpha} is not distinguished")
    if window is None:
        window = default_window(od.base)
    tables = _p_tables(od, decomp, alpha, window)
    out = []
    for theta in (candidate_thetas(q_max) if thetas is None else thetas):
        theta = Fraction(theta)
        p, q = theta.numerator, theta.denominator
        if all((p * pn) % q == 0 for _, values in tables for pn in values):
            out.append(theta)
    return out


def rational_eigenvalue_sufficient(d, alpha: int, theta,
                                   window: tuple[int, int] | None = None,
                                   decomp: ComponentDecomposition | None = None,
                                   gap: float = DEFAULT_GAP) -> EigenvalueVerdict:
    """Sufficient condition not needing the order: theta * h_j^(n) integer
    for every vertex j of class alpha over the window."""
    base = d.base if isinstance(d, OrderedDiagram) else d
    if decomp is None:
        decomp = decompose(base, gap)
    _require_positive_blocks(decomp)
    theta = Fraction(theta)
    if window is None:
        window = default_window(base)
    decisive = is_decisive(base, window)
    verts = decomp.classes[alpha].vertices
    h = _height_table(base, window[1])
    p, q = theta.numerator, theta.denominator
    for n in range(window[0], window[1] + 1):
        for j in verts:
            if (p * h[n][j]) % q != 0:
                return EigenvalueVerdict(False, theta, window, decisive,
                                         fail_n=n, fail_vertex=j)
    return EigenvalueVerdict(True, theta, window, decisive)


@dataclass(frozen=True)
class NonmixingReport:
    alpha: int
    diamond: Diamond
    path: PathWord
    n_values: tuple[int, ...]
    ratios: tuple
    infimum: object
    order_constant: object

    @property
    def positive(self):
        return self.infimum > 0


def nonmixing_witness(od: OrderedDiagram, alpha: int, diamond: Diamond,
                      e: PathWord, n_range,
                      decomp: ComponentDecomposition | None = None,
                      gap: float = DEFAULT_GAP) -> NonmixingReport:
    """Overlap ratios r_n = mu([e; leg_a at level n+1]) / mu([e]): the
    measure of the part of [e] returning to itself after P_n steps.  A
    positive infimum over growing n rules out strong mixing.  The
    order_constant x_i / (x_range lam^k) gives the scale of the limit
    (and equals it when the cylinder ends in the diamond's range vertex
    and the class asymptotics are exact)."""
    if decomp is None:
        decomp = decompose(od.base, gap)
    check_path(od.base, e)
    eig = distinguished_eigenvector(decomp, alpha)
    xi, lam = eig.xi, eig.lam
    cls_vertices = set(decomp.classes[alpha].vertices)
    if not diamond.vertices_visited <= cls_vertices:
        raise ValueError("diamond must live inside the carrying class")
    i = e.terminal
    m = e.level
    if xi[i] == 0:
        raise ZeroMeasureCylinder(
            f"cylinder at vertex {i} has measure zero for class {alpha}")
    j = diamond.leg_a.source
    jp = diamond.leg_a.range
    k = diamond.length
    exact = eig.is_exact
    lam_v = lam.value if exact else lam.as_float
    a = [list(row) for row in decomp.a_matrix]

    n_values = tuple(n_range)
    ratios = []
    for n in n_values:
        if n < m:
            raise ValueError("witness levels must reach below the cylinder")
        paths_ij = linalg.mat_pow(a, n + 1 - m)[i][j]
        num = (xi[jp] if exact else float(xi[jp])) * paths_ij
        ratios.append(num / lam_v ** (n + k) / ((xi[i] if exact else float(xi[i]))
                                                / lam_v ** (m - 1)))
    order_constant = ((xi[i] / (xi[jp] * lam_v ** k)) if exact
                      else float(xi[i]) / (float(xi[jp]) * lam_v ** k))
    return NonmixingReport(alpha, diamond, e, n_values, tuple(ratios),
                           min(ratios), order_constant)


def telescope_ordered(od: OrderedDiagram, k: int) -> OrderedDiagram:
    """Order induced on the k-fold telescope: the bundle of a composite
    edge sorts by its top edge first, then recursively by the path
    below it."""
    if k < 1:
        raise ValueError("telescope power must be >= 1")
    words = od.order
    for _ in range(k - 1):
        words = tuple(tuple(letter for pos in range(len(od.order[v]))
                            for letter in words[od.order[v][pos]])
                      for v in range(od.n_vertices))
    return OrderedDiagram(telescope(od.base, k), words)
