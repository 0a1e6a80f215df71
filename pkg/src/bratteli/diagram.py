"""Stationary Bratteli diagrams: incidence data, heights, telescoping, paths.

A diagram is described by one non-negative integer matrix F that repeats
between all consecutive levels below the root.  Entry ``F[v][w]`` counts
the edges a level-(n+1) vertex ``v`` receives from the level-n vertex
``w``.  The root connects to every level-1 vertex by a single edge, so
the path count ("height") of every vertex at level 1 is 1 and the
vector of heights satisfies ``h(n+1) = F h(n)``.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import linalg
from .errors import CapExceeded, DimensionMismatch


@dataclass(frozen=True)
class StationaryDiagram:
    incidence: tuple[tuple[int, ...], ...]
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in row) for row in self.incidence)
        n = len(rows)
        if n == 0:
            raise DimensionMismatch("diagram needs at least one vertex")
        if any(len(row) != n for row in rows):
            raise DimensionMismatch("incidence matrix must be square")
        if any(x < 0 for row in rows for x in row):
            raise ValueError("incidence entries must be non-negative")
        object.__setattr__(self, "incidence", rows)
        if self.labels is not None:
            labels = tuple(str(s) for s in self.labels)
            if len(labels) != n:
                raise DimensionMismatch("labels must match the vertex count")
            if len(set(labels)) != n:
                raise ValueError("labels must be distinct")
            if any((not s) or any(c.isspace() for c in s) for s in labels):
                raise ValueError("labels must be non-empty and contain no whitespace")
            object.__setattr__(self, "labels", labels)

    @property
    def n_vertices(self):
        return len(self.incidence)

    @property
    def effective_labels(self):
        """Display names: explicit labels, else 1-based vertex numbers."""
        if self.labels is not None:
            return self.labels
        return tuple(str(i + 1) for i in range(self.n_vertices))

    def row_sum(self, v):
        return sum(self.incidence[v])

    def col_sum(self, w):
        return sum(row[w] for row in self.incidence)

    def vertex_named(self, name):
        try:
            return self.effective_labels.index(name)
        except ValueError:
            raise KeyError(f"no vertex named {name!r}") from None


@dataclass(frozen=True)
class Diagnostic:
    kind: str
    vertex: int
    message: str


def validate(d: StationaryDiagram) -> list[Diagnostic]:
    """Warning-level checks: every vertex needs incoming and outgoing edges."""
    out = []
    for v in range(d.n_vertices):
        if d.row_sum(v) == 0:
            out.append(Diagnostic("no-incoming", v,
                                  f"vertex {d.effective_labels[v]} has no incoming edges (empty row)"))
    for w in range(d.n_vertices):
        if d.col_sum(w) == 0:
            out.append(Diagnostic("no-outgoing", w,
                                  f"vertex {d.effective_labels[w]} has no outgoing edges (empty column)"))
    return out


@dataclass(frozen=True)
class HeightVector:
    level: int
    values: tuple[int, ...]


def heights(d: StationaryDiagram, n: int) -> HeightVector:
    """Path counts from the root to each vertex of level n (n >= 1)."""
    if n < 1:
        raise ValueError("levels are 1-based")
    h = [1] * d.n_vertices
    for _ in range(n - 1):
        h = linalg.mat_vec(d.incidence, h)
    return HeightVector(n, tuple(h))


def telescope(d: StationaryDiagram, k: int) -> StationaryDiagram:
    """Contract k consecutive levels into one: incidence becomes F**k."""
    if k < 1:
        raise ValueError("telescoping power must be >= 1")
    fk = linalg.mat_pow([list(r) for r in d.incidence], k)
    return StationaryDiagram(tuple(tuple(row) for row in fk), d.labels)


@dataclass(frozen=True)
class PathWord:
    """Finite path from the root: the vertex visited at each level 1..n
    plus, for each level >= 2, the 0-based index of the edge inside the
    parallel bundle from the previous vertex.  The root edge to the
    level-1 vertex is unique and therefore implicit."""

    vertices: tuple[int, ...]
    indices: tuple[int, ...] = ()

    def __post_init__(self):
        if not self.vertices:
            raise ValueError("a path has length at least 1")
        if len(self.indices) != len(self.vertices) - 1:
            raise DimensionMismatch("need one bundle index per level beyond the first")

    @property
    def level(self):
        return len(self.vertices)

    @property
    def terminal(self):
        return self.vertices[-1]

    @property
    def edges(self):
        """Edges as (level, source, target, bundle index); the level-1
        source is None for the root."""
        out = [(1, None, self.vertices[0], 0)]
        for i in range(1, len(self.vertices)):
            out.append((i + 1, self.vertices[i - 1], self.vertices[i], self.indices[i - 1]))
        return tuple(out)

    def prefix(self, n):
        return PathWord(self.vertices[:n], self.indices[:max(0, n - 1)])


def check_path(d: StationaryDiagram, p: PathWord):
    """Raise if p does not describe an actual path of the diagram."""
    n = d.n_vertices
    if any(not (0 <= v < n) for v in p.vertices):
        raise DimensionMismatch("path visits an unknown vertex")
    for i in range(1, len(p.vertices)):
        w, v = p.vertices[i - 1], p.vertices[i]
        bundle = d.incidence[v][w]
        j = p.indices[i - 1]
        if not (0 <= j < bundle):
            raise ValueError(
                f"no edge {j} from vertex {d.effective_labels[w]} to "
                f"{d.effective_labels[v]} (bundle size {bundle})")


@dataclass(frozen=True)
class CylinderSet:
    """All infinite paths extending a finite path."""

    path: PathWord

    @property
    def level(self):
        return self.path.level

    @property
    def terminal_vertex(self):
        return self.path.terminal


def enumerate_paths(d: StationaryDiagram, v: int, n: int, cap: int = 10 ** 6) -> list[PathWord]:
    """All paths from the root to vertex v at level n, in a fixed
    deterministic order (sources ascending, bundle indices ascending,
    most significant choice at the top level)."""
    total = heights(d, n).values[v]
    if total > cap:
        raise CapExceeded(f"{total} paths exceed the cap of {cap}", total, cap)

    def build(target, lvl):
        if lvl == 1:
            return [PathWord((target,))]
        out = []
        for w in range(d.n_vertices):
            bundle = d.incidence[target][w]
            if bundle == 0:
                continue
            for p in build(w, lvl - 1):
                for j in range(bundle):
                    out.append(PathWord(p.vertices + (target,), p.indices + (j,)))
        return out

    paths = build(v, n)
    assert len(paths) == total
    return paths
