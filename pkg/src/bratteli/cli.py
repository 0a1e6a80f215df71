"""Command line front end.

Subcommands parse structured-text documents, run the analyses, and print
deterministic reports: identical input and flags always give identical
bytes.  Exit codes: 0 success, 2 parse or usage error, 3 violated
precondition (not aperiodic, not growing, imprimitive with telescoping
disabled), 4 verification failure, 5 refused by a size cap.
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path

from .diagram import CylinderSet, PathWord, check_path, heights, telescope
from .documents import (measure_record, parse_coefficients, parse_diagram,
                        parse_measures, parse_substitution, render_scalar,
                        serialize_diagram, serialize_measures)
from .errors import (BratteliError, CapExceeded, NotAperiodicError,
                     NotInDomainError, ParseError, SizeRefused)
from .measures import (InvariantMeasure, borel_invariant, enumerate_ergodic,
                       enumerate_infinite, measure_of_cylinder)
from .oracle import brute_force_Q, verify_invariance
from .spectral import (aperiodicity_check, decompose, positivity_power,
                       telescope_to_primitive)
from .substitution import (diagram_from_substitution, expand, letter_frequencies,
                           substitution_matrix, substitution_measures)
from .vershik import (OrderedDiagram, candidate_thetas, default_window,
                      eigenvalue_search, is_decisive, min_path, successor,
                      telescope_ordered)

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_PRECONDITION = 3
EXIT_VERIFY = 4
EXIT_CAP = 5


def _plural(n: int, noun: str) -> str:
    return f"{n} {noun}" + ("" if n == 1 else "s")


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _load_diagram(args, want_positive: bool = False):
    """(diagram or ordered diagram, applied telescoping power)."""
    doc = parse_diagram(_read(args.diagram))
    ordered = isinstance(doc, OrderedDiagram)
    base = doc.base if ordered else doc
    spec = getattr(args, "telescope", "auto")
    if spec == "auto":
        if want_positive:
            q = positivity_power(base, args.tolerance)
        else:
            q = telescope_to_primitive(base, args.tolerance)[1]
    else:
        try:
            q = int(spec)
        except ValueError:
            raise ParseError(f"--telescope takes 'auto' or an integer, got {spec!r}")
        if q < 1:
            raise ParseError("--telescope power must be >= 1")
    if q == 1:
        return doc, 1
    return (telescope_ordered(doc, q) if ordered else telescope(base, q)), q


def _parse_path_spec(spec: str, diagram) -> PathWord:
    labels = diagram.effective_labels
    if "," in spec:
        raw = [t.strip() for t in spec.split(",")]
    elif any(c.isspace() for c in spec):
        raw = spec.split()
    elif all(len(x) == 1 for x in labels):
        raw = list(spec)
    else:
        raw = [spec]
    vertices, indices = [], []
    for i, token in enumerate(raw):
        name, dot, idx = token.partition(".")
        try:
            vertices.append(diagram.vertex_named(name))
        except KeyError:
            raise ParseError(f"unknown vertex {name!r} in path") from None
        if i == 0:
            if dot:
                raise ParseError("the root vertex of a path takes no edge index")
            continue
        try:
            indices.append(int(idx) if dot else 0)
        except ValueError:
            raise ParseError(f"bad edge index in path token {token!r}") from None
    p = PathWord(tuple(vertices), tuple(indices))
    try:
        check_path(diagram, p)
    except (ValueError, BratteliError) as e:
        raise ParseError(str(e)) from None
    return p


def _measure_line(i: int, m, labels) -> str:
    vec = " ".join(render_scalar(x) for x in (m.xi if hasattr(m, "xi") else m.base))
    parts = [f"measure {i}: class={m.class_id}",
             f"eigenvalue={m.lam.render()}", f"vector=({vec})"]
    if hasattr(m, "atomic"):
        parts.append(f"atomic={'yes' if m.atomic else 'no'}")
    else:
        if m.full_support:
            support = "full"
        else:
            vs = sorted(v for c in m.support for v in m.decomp.classes[c].vertices)
            support = ",".join(labels[v] for v in vs)
        parts.append(f"support={support}")
    return " ".join(parts)


def cmd_analyze(args) -> int:
    doc, q = _load_diagram(args)
    base = doc.base if isinstance(doc, OrderedDiagram) else doc
    decomp = decompose(base, args.tolerance)
    verdict = aperiodicity_check(decomp)
    if not verdict:
        raise NotAperiodicError(f"not aperiodic: {verdict.reason}",
                                witness_class=verdict.witness_class)
    labels = base.effective_labels
    out = [f"vertices: {base.n_vertices}"]
    if base.labels is not None:
        out.append("labels: " + " ".join(base.labels))
    if q > 1:
        out.append(f"telescope power: {q}")
    out.append(f"classes: {len(decomp.classes)}")
    for c in decomp.classes:
        members = ",".join(labels[v] for v in c.vertices)
        rho = c.rho.render()
        flag = "yes" if c.distinguished else "no"
        out.append(f"class {c.index}: members={members} rho={rho} "
                   f"distinguished={flag}")
    edges = [f"{b}->{a}" for b in range(len(decomp.classes))
             for a in range(len(decomp.classes))
             if b != a and decomp.access[b][a]]
    out.append("access: " + (" ".join(edges) if edges else "none"))
    out.append("aperiodic: yes")
    out.append("minimal components: " + " ".join(
        "{" + ",".join(decomp.class_members(alpha)) + "}"
        for alpha in decomp.initial_classes))

    ergodic = enumerate_ergodic(decomp, args.tolerance)
    infinite = enumerate_infinite(decomp, args.tolerance)
    if args.report:
        sys.stdout.write(serialize_measures(list(ergodic) + list(infinite)))
        return EXIT_OK
    out.append(f"ergodic measures: {len(ergodic)}")
    out.extend(_measure_line(i, m, labels) for i, m in enumerate(ergodic, 1))
    out.append(f"sigma-finite measures: {len(infinite)}")
    out.extend(_measure_line(i, m, labels) for i, m in enumerate(infinite, 1))
    out.append(f"borel invariant: {borel_invariant(decomp, args.tolerance)}")
    out.append(f"summary: {_plural(len(ergodic), 'ergodic probability measure')}; "
               f"{_plural(len(infinite), 'sigma-finite measure')}")
    print("\n".join(out))
    return EXIT_OK


def _select_measure(args, base, gap):
    decomp = decompose(base, gap)
    ergodic = enumerate_ergodic(decomp, gap)
    try:
        class_id = int(args.measure)
    except ValueError:
        coeffs = parse_coefficients(_read(args.measure))
        return InvariantMeasure(tuple(ergodic), coeffs)
    for m in ergodic:
        if m.class_id == class_id:
            return m
    for m in enumerate_infinite(decomp, gap):
        if m.class_id == class_id:
            return m
    raise NotInDomainError(
        f"class {class_id} carries no ergodic or sigma-finite measure")


def cmd_cylinder(args) -> int:
    doc, _ = _load_diagram(args)
    base = doc.base if isinstance(doc, OrderedDiagram) else doc
    m = _select_measure(args, base, args.tolerance)
    level = 1
    if args.path is not None:
        p = _parse_path_spec(args.path, base)
        level = p.level
        print(render_scalar(measure_of_cylinder(m, CylinderSet(p))))
    if args.check_total:
        h = heights(base, level).values
        total = sum(hv * m.value(level, v) for v, hv in enumerate(h))
        print(render_scalar(total))
    if args.path is None and not args.check_total:
        raise ParseError("give --path and/or --check-total")
    return EXIT_OK


def _search_chunk(payload):
    od, alpha, window, gap, chunk = payload
    return eigenvalue_search(od, alpha, 0, window, gap=gap, thetas=chunk)


def cmd_eigenvalues(args) -> int:
    doc, q = _load_diagram(args, want_positive=True)
    if not isinstance(doc, OrderedDiagram):
        raise ParseError("eigenvalue analysis needs an ordered diagram "
                         "(document with an order: section)")
    od = doc
    decomp = decompose(od.base, args.tolerance)
    if args.klass is not None:
        alpha = args.klass
    else:
        candidates = [c for c in decomp.classes if c.distinguished]
        if not candidates:
            raise NotAperiodicError("no distinguished class to analyze")
        alpha = max(candidates, key=lambda c: (c.rho.as_float, -c.index)).index
    if args.window is not None:
        a, sep, b = args.window.partition(":")
        try:
            window = (int(a), int(b))
        except ValueError:
            raise ParseError(f"--window takes a:b, got {args.window!r}")
        if window[0] < 1 or window[1] < window[0]:
            raise ParseError("--window needs 1 <= a <= b")
    else:
        window = default_window(od.base)

    thetas = candidate_thetas(args.qmax)
    if args.jobs > 1:
        chunks = [thetas[i::args.jobs] for i in range(args.jobs)]
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            parts = pool.map(_search_chunk,
                             [(od, alpha, window, args.tolerance, c)
                              for c in chunks])
        passing = sorted(x for part in parts for x in part)
    else:
        passing = eigenvalue_search(od, alpha, args.qmax, window, decomp,
                                    args.tolerance)

    out = []
    if q > 1:
        out.append(f"telescope power: {q}")
    out.append(f"class: {alpha}")
    out.append("members: " + ",".join(decomp.class_members(alpha)))
    out.append(f"window: {window[0]}..{window[1]}")
    out.append(f"decisive: {'yes' if is_decisive(od.base, window) else 'no'}")
    out.append(f"qmax: {args.qmax}")
    out.append(f"candidates: {len(thetas)}")
    out.append("pass: " + " ".join(render_scalar(t) for t in passing))
    if passing == [Fraction(0)]:
        out.append("verdict: weak-mixing evidence: only theta=0")
    else:
        out.append(f"verdict: {_plural(len(passing) - 1, 'nontrivial rational eigenvalue candidate')}")
    print("\n".join(out))
    return EXIT_OK


def cmd_subst(args) -> int:
    s = parse_substitution(_read(args.substitution))
    if args.action == "matrix":
        m = substitution_matrix(s)
        print("letters: " + " ".join(s.alphabet))
        print("\n".join(" ".join(str(x) for x in row) for row in m))
    elif args.action == "diagram":
        sys.stdout.write(serialize_diagram(diagram_from_substitution(s)))
    elif args.action == "expand":
        letter = args.letter or s.alphabet[0]
        print(expand(s, letter, args.steps, args.cap))
    elif args.action == "freqs":
        letter = args.letter or s.alphabet[0]
        freqs = letter_frequencies(s, letter, args.steps, args.cap)
        for a, fr in zip(s.alphabet, freqs):
            print(f"{a}: {render_scalar(fr)}")
    else:
        result = substitution_measures(s, args.tolerance)
        labels = result.ordered.base.effective_labels
        out = []
        if result.telescope_power > 1:
            out.append(f"telescope power: {result.telescope_power}")
        out.append(f"ergodic measures: {len(result.ergodic)}")
        out.extend(_measure_line(i, m, labels)
                   for i, m in enumerate(result.ergodic, 1))
        out.append(f"sigma-finite measures: {len(result.infinite)}")
        out.extend(_measure_line(i, m, labels)
                   for i, m in enumerate(result.infinite, 1))
        out.append(f"uniquely ergodic: {'yes' if result.unique_ergodic else 'no'}")
        out.append(f"summary: {_plural(len(result.ergodic), 'ergodic probability measure')}; "
                   f"{_plural(len(result.infinite), 'sigma-finite measure')}")
        print("\n".join(out))
    return EXIT_OK


def cmd_verify(args) -> int:
    doc, _ = _load_diagram(args)
    ordered = isinstance(doc, OrderedDiagram)
    base = doc.base if ordered else doc
    decomp = decompose(base, args.tolerance)
    labels = base.effective_labels
    ergodic = enumerate_ergodic(decomp, args.tolerance)
    infinite = enumerate_infinite(decomp, args.tolerance)
    violations = 0
    out = []

    for name, group in (("ergodic", ergodic), ("sigma-finite", infinite)):
        for i, m in enumerate(group, 1):
            report = verify_invariance(base, m, args.depth)
            status = "ok" if report.ok else "FAIL"
            out.append(f"{name} measure {i} (class {m.class_id}): {status} "
                       f"({report.checks_run} checks)")
            out.extend(f"  violation: {v}" for v in report.violations)
            out.extend(f"  skipped: {s}" for s in report.skipped)
            violations += len(report.violations)

    if ordered:
        for v in range(base.n_vertices):
            lvl = args.depth
            expected = heights(base, lvl).values[v]
            while expected > 10 ** 4 and lvl > 1:
                lvl -= 1
                expected = heights(base, lvl).values[v]
            cur = min_path(doc, v, lvl)
            count = 1
            last = cur
            while True:
                nxt = successor(doc, last)
                if nxt is None:
                    break
                count += 1
                last = nxt
            span = brute_force_Q(doc, min_path(doc, v, lvl), last)
            ok = count == expected and span == expected - 1
            if not ok:
                violations += 1
            out.append(f"tower {labels[v]} level {lvl}: "
                       f"{'ok' if ok else 'FAIL'} ({count} paths)")

    if args.measures is not None:
        stated = parse_measures(_read(args.measures))
        computed = [measure_record(m) for m in list(ergodic) + list(infinite)]
        if len(stated) != len(computed):
            violations += 1
            out.append(f"measure file: FAIL (lists {len(stated)} measures, "
                       f"diagram has {len(computed)})")
        else:
            file_bad = 0
            for i, (got, want) in enumerate(zip(stated, computed), 1):
                if got != want:
                    file_bad += 1
                    out.append(f"measure file entry {i}: FAIL (differs from "
                               f"computed {want.type} measure of class {want.class_id})")
            if file_bad == 0:
                out.append(f"measure file: ok ({len(stated)} measures match)")
            violations += file_bad

    out.append("result: " + ("ok" if violations == 0
                             else f"{_plural(violations, 'violation')}"))
    print("\n".join(out))
    return EXIT_OK if violations == 0 else EXIT_VERIFY


def cmd_export_dot(args) -> int:
    doc = parse_diagram(_read(args.diagram))
    base = doc.base if isinstance(doc, OrderedDiagram) else doc
    labels = base.effective_labels
    out = []
    if args.graph == "levels":
        out.append("digraph levels {")
        out.append("  rankdir=BT;")
        for n in (1, 2):
            for v in range(base.n_vertices):
                out.append(f'  "{n}:{labels[v]}";')
        for v in range(base.n_vertices):
            for w in range(base.n_vertices):
                k = base.incidence[v][w]
                if k == 0:
                    continue
                tag = f' [label="{k}"]' if k > 1 else ""
                out.append(f'  "1:{labels[w]}" -> "2:{labels[v]}"{tag};')
        out.append("}")
    else:
        decomp = decompose(base, args.tolerance)
        names = ["{" + ",".join(decomp.class_members(c.index)) + "}"
                 for c in decomp.classes]
        out.append("digraph reduced {")
        for c in decomp.classes:
            out.append(f'  "{names[c.index]}" '
                       f'[label="{names[c.index]} rho={c.rho.render()}"];')
        k = len(decomp.classes)
        direct = set()
        for v in range(base.n_vertices):
            for w in range(base.n_vertices):
                if base.incidence[v][w] > 0 and decomp.class_of[v] != decomp.class_of[w]:
                    direct.add((decomp.class_of[v], decomp.class_of[w]))
        for b in range(k):
            for a in range(k):
                if (b, a) in direct:
                    out.append(f'  "{names[b]}" -> "{names[a]}";')
        out.append("}")
    print("\n".join(out))
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bratteli",
        description="Analyze stationary Bratteli diagrams: invariant measures, "
                    "spectral structure, Vershik dynamics, substitutions.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, telescope=True):
        p.add_argument("--tolerance", type=float, default=1e-9,
                       help="numeric gap for eigenvalue comparisons")
        if telescope:
            p.add_argument("--telescope", default="auto", metavar="auto|K",
                           help="level contraction: auto picks the smallest "
                                "adequate power, an integer forces one")

    p = sub.add_parser("analyze", help="classes, measures, and the summary table")
    p.add_argument("diagram")
    p.add_argument("--report", action="store_true",
                   help="emit the machine-readable measure report instead")
    common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("cylinder", help="measure of a cylinder set")
    p.add_argument("diagram")
    p.add_argument("--measure", required=True, metavar="CLASS|COEFF_FILE",
                   help="class id of an ergodic or sigma-finite measure, or "
                        "a barycentric coefficients file")
    p.add_argument("--path", metavar="SPEC",
                   help="path word, e.g. 'ab' or '2.1,2.0' (vertex.edge-index)")
    p.add_argument("--check-total", action="store_true",
                   help="print the total mass at the path's level")
    common(p)
    p.set_defaults(func=cmd_cylinder)

    p = sub.add_parser("eigenvalues", help="rational eigenvalue search")
    p.add_argument("diagram")
    p.add_argument("--class", dest="klass", type=int, default=None,
                   help="class id (default: distinguished class of largest rho)")
    p.add_argument("--qmax", type=int, default=64)
    p.add_argument("--window", metavar="A:B", default=None,
                   help="levels to test (default N:3N)")
    p.add_argument("--jobs", type=int, default=1,
                   help="parallel workers for the candidate scan")
    common(p)
    p.set_defaults(func=cmd_eigenvalues)

    p = sub.add_parser("subst", help="substitution utilities")
    p.add_argument("action",
                   choices=["matrix", "diagram", "expand", "freqs", "measures"])
    p.add_argument("substitution")
    p.add_argument("--letter", default=None)
    p.add_argument("--steps", type=int, default=1)
    p.add_argument("--cap", type=int, default=10 ** 7)
    common(p, telescope=False)
    p.set_defaults(func=cmd_subst)

    p = sub.add_parser("verify", help="run the brute-force oracle suite")
    p.add_argument("diagram")
    p.add_argument("--depth", type=int, default=5)
    p.add_argument("--measures", default=None,
                   help="measure report file to check against the diagram")
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("export-dot", help="DOT graph of the diagram")
    p.add_argument("diagram")
    p.add_argument("--graph", choices=["levels", "reduced"], default="reduced")
    common(p, telescope=False)
    p.set_defaults(func=cmd_export_dot)

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except (CapExceeded, SizeRefused) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CAP
    except BratteliError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
