"""Command-line interface: ``nilpo analyze | generate | classify``.

Algebra files are JSON::

    {"schema_version": "1", "dim": 3, "basis": ["e1", "e2", "e3"],
     "brackets": [{"i": 1, "j": 2, "out": [{"k": 3, "c": "1"}]}]}

Exit codes: 0 success, 1 bad input, 2 internal consistency failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import re
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Sequence

from nilpo.cohomology import DecompositionMismatch, betti, e_infty_dim, e_infty_table, engine
from nilpo.constructors import Graph, abelian, example_six_dim, free_nilpotent, graph_algebra, heisenberg
from nilpo.exactlin import format_rational
from nilpo.liealg import InvalidAlgebra, LieAlgebra, NotNilpotent, lower_central_series, trivial_extension, validate
from nilpo.rootsys import MIN_RANK, InternalExpansionFailure, nilradical
from nilpo.symplectic import DEFAULT_SAMPLES, SymplecticVerdict, decide

SCHEMA_VERSION = "1"
EXIT_OK, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2

RANK_CAPS = {"A": 5, "B": 4, "C": 4, "D": 5}
# C_2 is isomorphic to B_2 and is left out of the default table
DEFAULT_CELLS = (
    [("A", r) for r in range(1, 6)]
    + [("B", r) for r in range(2, 5)]
    + [("C", r) for r in range(3, 5)]
    + [("D", r) for r in range(4, 6)]
)
CLASSIFY_CHECK_DEGREE = 3

_RATIONAL = re.compile(r"-?\d+(/\d+)?")


class InputError(ValueError):
    """Malformed or invalid user input (exit code 1)."""


class InternalError(RuntimeError):
    """An internal consistency check failed (exit code 2)."""


# ---------------------------------------------------------------------------
# algebra files
# ---------------------------------------------------------------------------


def _expect_keys(obj: Any, keys: Sequence[str], where: str) -> None:
    if not isinstance(obj, dict):
        raise InputError(f"{where}: expected a JSON object")
    unknown = sorted(set(obj) - set(keys))
    if unknown:
        raise InputError(f"{where}: unknown field(s) {', '.join(unknown)}")
    missing = [k for k in keys if k not in obj]
    if missing:
        raise InputError(f"{where}: missing field(s) {', '.join(missing)}")


def _int_field(obj: dict, key: str, where: str) -> int:
    v = obj[key]
    if not isinstance(v, int) or isinstance(v, bool):
        raise InputError(f"{where}.{key}: expected an integer, got {v!r}")
    return v


def _parse_coefficient(text: Any, where: str) -> Fraction:
    if not isinstance(text, str) or not _RATIONAL.fullmatch(text):
        raise InputError(f"{where}: coefficient must be a string 'p/q' or an integer string, got {text!r}")
    value = Fraction(text)
    if format_rational(value) != text:
        raise InputError(f"{where}: coefficient {text!r} is not in lowest terms (write {format_rational(value)!r})")
    if not value:
        raise InputError(f"{where}: zero coefficients must be omitted")
    return value


def algebra_from_json(doc: Any) -> LieAlgebra:
    """Parse an AlgebraFile document; raises InputError with a located message."""
    _expect_keys(doc, ("schema_version", "dim", "basis", "brackets"), "algebra")
    if doc["schema_version"] != SCHEMA_VERSION:
        raise InputError(f"algebra.schema_version: expected {SCHEMA_VERSION!r}, got {doc['schema_version']!r}")
    dim = _int_field(doc, "dim", "algebra")
    if dim < 1:
        raise InputError("algebra.dim: must be at least 1")
    basis = doc["basis"]
    if not isinstance(basis, list) or not all(isinstance(b, str) for b in basis):
        raise InputError("algebra.basis: expected a list of strings")
    if len(basis) != dim:
        raise InputError(f"algebra.basis: {len(basis)} labels for dimension {dim}")
    if len(set(basis)) != len(basis):
        raise InputError("algebra.basis: labels must be distinct")
    if not isinstance(doc["brackets"], list):
        raise InputError("algebra.brackets: expected a list")
    brackets: dict[tuple[int, int], dict[int, Fraction]] = {}
    for n, entry in enumerate(doc["brackets"]):
        where = f"algebra.brackets[{n}]"
        _expect_keys(entry, ("i", "j", "out"), where)
        i, j = _int_field(entry, "i", where), _int_field(entry, "j", where)
        if not (1 <= i < j <= dim):
            raise InputError(f"{where}: need 1 <= i < j <= {dim}, got i={i}, j={j}")
        if (i, j) in brackets:
            raise InputError(f"{where}: duplicate bracket [e{i}, e{j}]")
        if not isinstance(entry["out"], list) or not entry["out"]:
            raise InputError(f"{where}.out: expected a non-empty list")
        vec: dict[int, Fraction] = {}
        for t, term in enumerate(entry["out"]):
            tw = f"{where}.out[{t}]"
            _expect_keys(term, ("k", "c"), tw)
            k = _int_field(term, "k", tw)
            if not 1 <= k <= dim:
                raise InputError(f"{tw}.k: index {k} outside 1..{dim}")
            if k in vec:
                raise InputError(f"{tw}.k: duplicate output index {k}")
            vec[k] = _parse_coefficient(term["c"], f"{tw}.c")
        brackets[(i, j)] = vec
    try:
        return LieAlgebra(dim, tuple(basis), brackets)
    except InvalidAlgebra as exc:
        raise InputError(str(exc)) from exc


def algebra_to_json(a: LieAlgebra) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "dim": a.dim,
        "basis": list(a.basis_labels),
        "brackets": [
            {"i": i, "j": j, "out": [{"k": k, "c": format_rational(c)} for k, c in sorted(out.items())]}
            for (i, j), out in sorted(a.brackets.items())
        ],
    }


def dumps_algebra(a: LieAlgebra) -> str:
    return json.dumps(algebra_to_json(a), indent=2, ensure_ascii=False) + "\n"


def loads_algebra(text: str) -> LieAlgebra:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc}") from exc
    return algebra_from_json(doc)


def load_valid_algebra(path: str) -> LieAlgebra:
    """Read, parse and validate (Jacobi, nilpotency) an algebra file."""
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    a = loads_algebra(text)
    bad = validate(a)
    if bad:
        raise InputError(f"{path}: {bad[0]}" + (f" (and {len(bad) - 1} more)" if len(bad) > 1 else ""))
    try:
        lower_central_series(a)
    except NotNilpotent as exc:
        raise InputError(f"{path}: not nilpotent: {exc}") from exc
    return a


# ---------------------------------------------------------------------------
# analyze
# ---------------------------------------------------------------------------


def verdict_to_json(v: SymplecticVerdict) -> dict:
    out: dict[str, Any] = {"status": v.status, "label": v.label}
    if v.reason is not None:
        out["reason"] = v.reason
    if v.witness is not None:
        out["witness"] = [{"i": i, "j": j, "c": format_rational(c)} for (i, j), c in sorted(v.witness.terms.items())]
    if v.status == "inconclusive":
        out["samples"] = v.samples
        out["degree_bound"] = v.degree_bound
        out["sample_space_size"] = v.sample_space_size
        out["failure_bound"] = format_rational(v.failure_bound)
        out["failure_bound_log10"] = round(_log10(v.failure_bound), 3)
    return out


def _log10(x: Fraction) -> float:
    return math.log10(x.numerator) - math.log10(x.denominator)


@dataclass
class AnalysisReport:
    dim: int
    k: int
    series_dims: tuple[int, ...]
    center_dim: int
    betti: tuple[int, ...]
    e_table: dict[tuple[int, int], int]
    e02: int
    obstruction: bool
    verdict: SymplecticVerdict
    seed: int
    samples: int
    seconds: float

    def to_json(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "algebra": {
                "dim": self.dim,
                "nilpotency_index": self.k,
                "lower_central_series_dims": list(self.series_dims),
                "center_dim": self.center_dim,
            },
            "betti": list(self.betti),
            "e_infty": [{"p": p, "q": q, "dim": v} for (p, q), v in sorted(self.e_table.items())],
            "e_infty_0_2": self.e02,
            "obstruction_vanishes": self.obstruction,
            "verdict": verdict_to_json(self.verdict),
            "seed": self.seed,
            "samples": self.samples,
            "timing_seconds": round(self.seconds, 3),
        }

    def to_text(self) -> str:
        lines = [
            f"dimension            {self.dim}",
            f"nilpotency index k   {self.k}",
            f"lower central series {' > '.join(map(str, self.series_dims))}",
            f"center dimension     {self.center_dim}",
            f"Betti numbers        {' '.join(map(str, self.betti))}",
            f"dim E_inf^(0,2)      {self.e02}",
            f"obstruction vanishes {'yes' if self.obstruction else 'no'}",
            f"verdict              {self.verdict.label}",
        ]
        v = self.verdict
        if v.witness is not None:
            lines.append(f"witness              {v.witness}")
        if v.status == "inconclusive":
            lines.append(
                f"                     no witness in {v.samples} samples; "
                f"miss probability <= ({v.degree_bound}/{v.sample_space_size})^{v.samples} "
                f"~ 10^{_log10(v.failure_bound):.1f}"
            )
        if self.e_table:
            lines.append("E_inf^(p,q) by total degree i (columns p = 0..k-1):")
            top = max(p + q for p, q in self.e_table)
            for i in range(top + 1):
                row = [self.e_table.get((p, i - p), 0) for p in range(self.k)]
                lines.append(f"  i={i:<3} " + " ".join(f"{x:>5}" for x in row) + f"   | b_{i} = {self.betti[i]}")
        lines.append(f"seed {self.seed}, samples {self.samples}, {self.seconds:.2f} s")
        return "\n".join(lines)


def _check_degrees(a: LieAlgebra, top: int) -> None:
    eng = engine(a)
    for i in range(min(top, a.dim) + 1):
        total = sum(eng.e_infty_dim(p, i - p) for p in range(eng.k))
        b = betti(a, i)
        if total != b:
            raise DecompositionMismatch(f"degree {i}: E_inf terms sum to {total}, Betti number is {b}")


def analyze(a: LieAlgebra, seed: int = 42, samples: int = DEFAULT_SAMPLES, e_table: bool = False) -> AnalysisReport:
    start = time.perf_counter()
    series = lower_central_series(a)
    bettis = tuple(betti(a, i) for i in range(a.dim + 1))
    table: dict[tuple[int, int], int] = {}
    if e_table:
        table = dict(e_infty_table(a).dims)
    else:
        _check_degrees(a, 2)
    e02 = e_infty_dim(a, 0, 2)
    verdict = decide(a, seed=seed, samples=samples)
    return AnalysisReport(
        dim=a.dim,
        k=series.nilpotency_index,
        series_dims=series.dims,
        center_dim=series.center.dim,
        betti=bettis,
        e_table=table,
        e02=e02,
        obstruction=e02 == 0,
        verdict=verdict,
        seed=seed,
        samples=samples,
        seconds=time.perf_counter() - start,
    )


# ---------------------------------------------------------------------------
# classify
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ClassifyRow:
    family: str
    rank: int
    dim: int
    k: int
    e02: int
    s: int
    verdict: str

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "rank": self.rank,
            "dim": self.dim,
            "k": self.k,
            "e_infty_0_2": self.e02,
            "extension_s": self.s,
            "verdict": self.verdict,
        }


def classify_cell(cell: tuple[str, int], seed: int = 42, samples: int = DEFAULT_SAMPLES) -> ClassifyRow:
    family, rank = cell
    g = nilradical(family, rank)
    a = g.algebra
    _check_degrees(a, CLASSIFY_CHECK_DEGREE)
    s = a.dim % 2
    verdict = decide(trivial_extension(a, s), seed=seed, samples=samples)
    return ClassifyRow(family, rank, a.dim, g.k, e_infty_dim(a, 0, 2), s, verdict.label)


def _cell_task(args: tuple) -> ClassifyRow:
    return classify_cell(*args)


def classify(cells: Sequence[tuple[str, int]], seed: int = 42, samples: int = DEFAULT_SAMPLES, threads: int = 1) -> list[ClassifyRow]:
    tasks = [(cell, seed, samples) for cell in cells]
    if threads > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(_cell_task, tasks))
    return [_cell_task(t) for t in tasks]


def format_classify(rows: Sequence[ClassifyRow]) -> str:
    lines = [f"{'type':<5} {'dim':>4} {'k':>3} {'E02':>4} {'s':>2}  verdict of R^s + n"]
    for r in rows:
        lines.append(f"{r.family}{r.rank:<4} {r.dim:>4} {r.k:>3} {r.e02:>4} {r.s:>2}  {r.verdict}")
    return "\n".join(lines) + "\n"


def parse_cells(specs: Sequence[str]) -> list[tuple[str, int]]:
    """``["A:1-5", "D:4"]`` -> cells, checked against the rank caps."""
    cells = []
    for spec in specs:
        m = re.fullmatch(r"([A-Da-d]):(\d+)(?:-(\d+))?", spec.strip())
        if not m:
            raise InputError(f"bad cell range {spec!r}; expected FAMILY:LO-HI, e.g. A:1-5")
        fam = m.group(1).upper()
        lo = int(m.group(2))
        hi = int(m.group(3) or lo)
        if lo > hi:
            raise InputError(f"bad cell range {spec!r}: {lo} > {hi}")
        if lo < MIN_RANK[fam]:
            raise InputError(f"{fam}_n needs n >= {MIN_RANK[fam]}")
        if hi > RANK_CAPS[fam]:
            raise InputError(f"{fam}_{hi} is above the supported cap {fam}_{RANK_CAPS[fam]}")
        for r in range(lo, hi + 1):
            if (fam, r) not in cells:
                cells.append((fam, r))
    return cells


# ---------------------------------------------------------------------------
# generate
# ---------------------------------------------------------------------------


def _parse_graph(text: str, vertices: int | None) -> Graph:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"--edges: invalid JSON: {exc}") from exc
    if not isinstance(raw, list) or not all(
        isinstance(e, list) and len(e) == 2 and all(isinstance(x, int) and not isinstance(x, bool) for x in e)
        for e in raw
    ):
        raise InputError("--edges: expected a JSON list of [u, v] integer pairs")
    n = vertices if vertices is not None else max((max(e) for e in raw), default=0)
    try:
        return Graph.from_edges(n, [tuple(e) for e in raw])
    except ValueError as exc:
        raise InputError(f"--edges: {exc}") from exc


def generate(args: argparse.Namespace) -> LieAlgebra:
    kind = args.kind
    try:
        if kind == "abelian":
            return abelian(_need(args.dim, "--dim"))
        if kind == "heisenberg":
            return heisenberg(_need(args.dim, "--dim"))
        if kind == "free":
            return free_nilpotent(_need(args.gens, "--gens"), _need(args.cls, "--class"))
        if kind == "graph":
            return graph_algebra(_parse_graph(_need(args.edges, "--edges"), args.vertices))
        if kind == "nilradical":
            return nilradical(_need(args.family, "--family"), _need(args.rank, "--rank")).algebra
        if kind == "example6":
            return example_six_dim()[0]
    except InputError:
        raise
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    raise InputError(f"unknown kind {kind!r}")


def _need(value: Any, flag: str) -> Any:
    if value is None:
        raise InputError(f"{flag} is required for this kind")
    return value


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def _threads() -> int:
    raw = os.environ.get("NILPO_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError as exc:
        raise InputError(f"NILPO_THREADS must be a positive integer, got {raw!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nilpo", description="Cohomology and symplectic structures of nilpotent Lie algebras.")
    sub = parser.add_subparsers(dest="command", required=True)

    an = sub.add_parser("analyze", help="report cohomology and a symplectic verdict for an algebra file")
    an.add_argument("path")
    an.add_argument("--seed", type=int, default=42)
    an.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    an.add_argument("--json", action="store_true", help="emit a JSON report")
    an.add_argument("--e-table", action="store_true", help="compute the full E_inf table")

    gen = sub.add_parser("generate", help="write an algebra file to stdout")
    gen.add_argument("kind", choices=["abelian", "heisenberg", "free", "graph", "nilradical", "example6"])
    gen.add_argument("--dim", type=int)
    gen.add_argument("--gens", type=int)
    gen.add_argument("--class", dest="cls", type=int)
    gen.add_argument("--edges", help='JSON edge list, e.g. "[[1,2],[2,3]]"')
    gen.add_argument("--vertices", type=int, help="vertex count (default: largest vertex in --edges)")
    gen.add_argument("--family", choices=["A", "B", "C", "D"])
    gen.add_argument("--rank", type=int)

    cl = sub.add_parser("classify", help="obstruction and verdict table for root-system nilradicals")
    cl.add_argument("--cells", action="append", metavar="FAMILY:LO-HI", help="e.g. A:1-5 (repeatable; default: the standard table)")
    cl.add_argument("--seed", type=int, default=42)
    cl.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    cl.add_argument("--json", action="store_true")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if getattr(args, "samples", 1) < 1:
            raise InputError("--samples must be positive")
        if args.command == "generate":
            sys.stdout.write(dumps_algebra(generate(args)))
        elif args.command == "analyze":
            a = load_valid_algebra(args.path)
            report = analyze(a, seed=args.seed, samples=args.samples, e_table=args.e_table)
            if args.json:
                sys.stdout.write(json.dumps(report.to_json(), indent=2) + "\n")
            else:
                sys.stdout.write(report.to_text() + "\n")
        else:
            cells = parse_cells(args.cells) if args.cells else list(DEFAULT_CELLS)
            rows = classify(cells, seed=args.seed, samples=args.samples, threads=_threads())
            if args.json:
                sys.stdout.write(json.dumps({"schema_version": SCHEMA_VERSION, "rows": [r.to_json() for r in rows]}, indent=2) + "\n")
            else:
                sys.stdout.write(format_classify(rows))
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (DecompositionMismatch, InternalExpansionFailure, InternalError) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
