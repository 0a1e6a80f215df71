"""Substitutions on a finite alphabet and their stationary diagrams.

A substitution's matrix counts letter occurrences in the rule words; its
transpose is the incidence matrix of an ordered stationary diagram whose
order word at each vertex is the rule word itself.  That identification
carries the whole measure theory over: ergodic measures of the
substitution system are enumerated on the diagram side, with the
substitution matrix in the role of the vertex-transition matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .diagram import StationaryDiagram
from .errors import CapExceeded, NotGrowingError
from .measures import ErgodicMeasure, TailMeasure, enumerate_ergodic, enumerate_infinite
from .spectral import (DEFAULT_GAP, ComponentDecomposition, NumericValue, decompose,
                       nv_gt, telescope_to_primitive)
from .vershik import OrderedDiagram, telescope_ordered

EXPAND_CAP = 10 ** 7


@dataclass(frozen=True)
class Substitution:
    alphabet: tuple[str, ...]
    rules: dict[str, str]

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        letters = set(self.alphabet)
        if not self.alphabet:
            raise ValueError("alphabet must be non-empty")
        if len(letters) != len(self.alphabet):
            raise ValueError("alphabet letters must be distinct")
        for a in self.alphabet:
            if len(a) != 1 or a.isspace():
                raise ValueError(f"letters must be single non-blank characters: {a!r}")
        if set(self.rules) != letters:
            raise ValueError("rules must cover exactly the alphabet")
        for a, word in self.rules.items():
            if not word:
                raise ValueError(f"rule for {a!r} is empty")
            if not set(word) <= letters:
                raise ValueError(f"rule for {a!r} uses letters outside the alphabet")

    @property
    def size(self):
        return len(self.alphabet)

    def index(self, letter: str) -> int:
        return self.alphabet.index(letter)

    def apply(self, word: str) -> str:
        return "".join(self.rules[a] for a in word)


def substitution_matrix(s: Substitution):
    """m[a][b] = number of occurrences of letter a in the rule word of b."""
    idx = {a: i for i, a in enumerate(s.alphabet)}
    n = s.size
    m = [[0] * n for _ in range(n)]
    for b in s.alphabet:
        col = idx[b]
        for a in s.rules[b]:
            m[idx[a]][col] += 1
    return tuple(tuple(row) for row in m)


def diagram_from_substitution(s: Substitution) -> OrderedDiagram:
    """Ordered diagram with incidence = matrix transpose and the rule
    words as order words; vertex labels are the letters."""
    m = substitution_matrix(s)
    idx = {a: i for i, a in enumerate(s.alphabet)}
    f = tuple(tuple(m[b][v] for b in range(s.size)) for v in range(s.size))
    base = StationaryDiagram(f, labels=s.alphabet)
    order = tuple(tuple(idx[a] for a in s.rules[v]) for v in s.alphabet)
    return OrderedDiagram(base, order)


def substitution_from_diagram(od: OrderedDiagram) -> Substitution:
    """The substitution read on the diagram: rule of each vertex label is
    its order word."""
    labels = od.base.effective_labels
    for lbl in labels:
        if len(lbl) != 1:
            raise ValueError("reading a substitution needs single-character labels")
    rules = {labels[v]: "".join(labels[s] for s in od.order[v])
             for v in range(od.n_vertices)}
    return Substitution(labels, rules)


@dataclass(frozen=True)
class GrowthReport:
    verdicts: dict[str, str]

    @property
    def growing(self):
        return all(v == "Growing" for v in self.verdicts.values())

    def bounded_letters(self):
        return tuple(a for a, v in self.verdicts.items() if v == "Bounded")


def growth_check(s: Substitution, gap: float = DEFAULT_GAP) -> GrowthReport:
    """Does the n-th image of each letter grow without bound?  Exact test
    on the class structure: the image lengths of letter a are unbounded
    iff some class with access to a's class has Perron value above 1, or
    two distinct chained unit-Perron classes sit above it."""
    decomp = decompose(diagram_from_substitution(s).base, gap)
    one = NumericValue.exact(1)
    k = len(decomp.classes)

    def rho_above_one(b):
        cls = decomp.classes[b]
        return not cls.is_zero and nv_gt(cls.rho, one, gap)

    def rho_is_one(b):
        cls = decomp.classes[b]
        return cls.rho.is_exact and cls.rho.value == 1

    verdicts = {}
    for v, letter in enumerate(s.alphabet):
        home = decomp.class_of[v]
        above = [b for b in range(k) if decomp.access[b][home]]
        growing = any(rho_above_one(b) for b in above)
        if not growing:
            growing = any(b != c and rho_is_one(b) and rho_is_one(c)
                          and decomp.access[b][c]
                          for b in above for c in above)
        verdicts[letter] = "Growing" if growing else "Bounded"
    return GrowthReport(verdicts)


def _image_length(s: Substitution, a: str, n: int) -> int:
    m = [list(r) for r in substitution_matrix(s)]
    col = s.index(a)
    power = linalg.mat_pow(m, n)
    return sum(power[i][col] for i in range(s.size))


def expand(s: Substitution, a: str, n: int, cap: int = EXPAND_CAP) -> str:
    """The word sigma^n(a); the length is checked against the cap before
    any expansion is materialized."""
    length = _image_length(s, a, n)
    if length > cap:
        raise CapExceeded(f"expansion has {length} letters", required=length, cap=cap)
    word = a
    seen = {word: 0}
    step = 0
    while step < n:
        word = s.apply(word)
        step += 1
        if word in seen:
            # bounded letters cycle; jump ahead by whole periods
            period = step - seen[word]
            remaining = (n - step) % period
            for _ in range(remaining):
                word = s.apply(word)
            return word
        seen[word] = step
    return word


def letter_frequencies(s: Substitution, a: str, n: int,
                       cap: int = EXPAND_CAP) -> tuple[Fraction, ...]:
    """Exact letter-count ratios of sigma^n(a), computed from matrix
    powers rather than the expanded word."""
    m = [list(r) for r in substitution_matrix(s)]
    col = s.index(a)
    power = linalg.mat_pow(m, n)
    counts = [power[i][col] for i in range(s.size)]
    total = sum(counts)
    if total > cap:
        raise CapExceeded(f"expansion has {total} letters", required=total, cap=cap)
    return tuple(Fraction(c, total) for c in counts)


@dataclass(frozen=True)
class SubstitutionMeasures:
    substitution: Substitution
    ordered: OrderedDiagram
    telescope_power: int
    decomp: ComponentDecomposition
    ergodic: tuple[ErgodicMeasure, ...]
    infinite: tuple[TailMeasure, ...]
    unique_ergodic: bool


def substitution_measures(s: Substitution, gap: float = DEFAULT_GAP) -> SubstitutionMeasures:
    """Full measure enumeration for the substitution system.  Requires
    every letter Growing; telescopes automatically (reporting the power)
    when a diagonal block is imprimitive; sigma-finite listing excludes
    the atomic single-loop classes."""
    growth = growth_check(s, gap)
    if not growth.growing:
        bad = growth.bounded_letters()[0]
        raise NotGrowingError(f"letter {bad!r} has bounded images", letter=bad)
    od = diagram_from_substitution(s)
    _, q = telescope_to_primitive(od.base, gap)
    if q > 1:
        od = telescope_ordered(od, q)
    decomp = decompose(od.base, gap)
    ergodic = tuple(enumerate_ergodic(decomp, gap))
    infinite = tuple(enumerate_infinite(decomp, gap, include_atomic=False))
    return SubstitutionMeasures(s, od, q, decomp, ergodic, infinite,
                                unique_ergodic=len(ergodic) == 1)
