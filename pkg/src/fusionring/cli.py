"""Batch command-line interface.

Subcommands: validate, complete, fuse, table, qdim, glob, lattice, regress.
Exit status: 0 success, 1 validation or fixture failure, 2 parse error,
3 underdetermined or inconsistent completion, 4 usage error.

File arguments accept a path, "-" for stdin, or an @alias into the shipped
dataset: @s4 (partial datum), @s4_branching, @s4_fixtures.  Output is
deterministic: identical inputs yield byte-identical reports.
"""

from __future__ import annotations

import argparse
import sys

from . import s4_dataset
from .branching import (InconsistentSystemError, ParentBranching,
                        UnderdeterminedError, complete, eigen_complete)
from .cyclo import embed, format_exact
from .lattice import LatticeSpec, lattice_datum_file
from .mdf import (DatumFile, DuplicateEntryError, IndexRangeError, ParseError,
                  expr_to_text, parse_file, serialize)
from .modular_data import (MissingEntryError, ModularDatum, datum_from_file,
                           datum_to_file, glob, qdim, validate)
from .verlinde import (NegativeResultError, NonIntegerResultError,
                       compare_fixtures, format_formal_sum, fusion_tensor,
                       tensor_to_triples, triples_to_fixtures)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_PARSE = 2
EXIT_COMPLETION = 3
EXIT_USAGE = 4

_ALIASES = {
    "@s4": "s4_partial.mdf",
    "@s4_branching": "s4_branching.mdf",
    "@s4_fixtures": "s4_fixtures.mdf",
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _read_text(spec: str) -> str:
    if spec == "-":
        return sys.stdin.read()
    if spec in _ALIASES:
        return s4_dataset.data_path(_ALIASES[spec]).read_text()
    with open(spec, "r", encoding="utf-8") as handle:
        return handle.read()


def _load_datum(spec: str) -> tuple[ModularDatum, DatumFile]:
    df = parse_file(_read_text(spec))
    return datum_from_file(df), df


def _load_parents(specs: str) -> list[ParentBranching]:
    parents = []
    for part in specs.split(","):
        df = parse_file(_read_text(part.strip()))
        parents.extend(ParentBranching.from_section(sec) for sec in df.branchings)
    return parents


def _float_text(value) -> str:
    z = embed(value)
    if abs(z.imag) < 1e-10:
        return f"{z.real:.10f}"
    return f"{z.real:.10f}{z.imag:+.10f}i"


def _computable_indices(datum: ModularDatum) -> list[int]:
    dual = datum.dual_permutation()
    out = []
    for i in range(datum.size):
        if all(datum.known(i, s) for s in range(datum.size)) and \
                all(datum.known(s, dual[i]) for s in range(datum.size)):
            out.append(i)
    return out


def cmd_validate(args) -> int:
    datum, _ = _load_datum(args.file)
    report = validate(datum)
    print(report.to_json() if args.json else report.to_text())
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_complete(args) -> int:
    datum, df = _load_datum(args.file)
    if not args.parents:
        if datum.unknown_positions():
            print("error: unknown entries present and no parents given "
                  "(underdetermined)", file=sys.stderr)
            return EXIT_COMPLETION
        parents = []
        result_datum = datum
    else:
        parents = _load_parents(args.parents)
        result = complete(datum, parents)
        result_datum = result.datum
        print(f"# solved {len(result.solved)} unknown entries; "
              f"{result.checks_passed} relations verified", file=sys.stderr)
    if args.cross_check == "eigen":
        fixtures_text = _read_text(args.fixtures or "@s4_fixtures")
        fixtures = parse_file(fixtures_text).fixtures
        eigen = eigen_complete(datum, fixtures)
        bad = [(pos, value) for pos, value in sorted(eigen.items())
               if result_datum.entry(*pos) != value]
        if bad:
            for (r, c), value in bad:
                print(f"# eigen route disagrees at S[{r},{c}]: {format_exact(value)}",
                      file=sys.stderr)
            return EXIT_COMPLETION
        print(f"# eigen cross-check: {len(eigen)} entries agree", file=sys.stderr)
    scale_text = expr_to_text(df.scale_expr) if df.scale_expr is not None else None
    out = serialize(datum_to_file(result_datum, scale_expr_text=scale_text))
    if args.output and args.output != "-":
        with open(args.output, "w", encoding="utf-8") as handle:
            handle.write(out)
    else:
        sys.stdout.write(out)
    return EXIT_OK


def cmd_fuse(args) -> int:
    datum, _ = _load_datum(args.file)
    indices = _computable_indices(datum)
    if args.i not in indices or args.j not in indices:
        print(f"error: rows {args.i}, {args.j} are not fully known", file=sys.stderr)
        return EXIT_FAIL
    tensor = fusion_tensor(datum, indices=indices, jobs=args.jobs)
    print(format_formal_sum(tensor.product(args.i, args.j)))
    return EXIT_OK


def cmd_table(args) -> int:
    datum, _ = _load_datum(args.file)
    indices = _computable_indices(datum)
    tensor = fusion_tensor(datum, indices=indices, jobs=args.jobs)
    sys.stdout.write(tensor_to_triples(tensor))
    return EXIT_OK


def cmd_qdim(args) -> int:
    datum, _ = _load_datum(args.file)
    for i in range(datum.size):
        value = qdim(datum, i)
        print(f"{i} {datum.labels[i].name} {format_exact(value)} {_float_text(value)}")
    return EXIT_OK


def cmd_glob(args) -> int:
    datum, _ = _load_datum(args.file)
    value = glob(datum)
    print(f"{format_exact(value)} = {_float_text(value)}")
    return EXIT_OK


def cmd_lattice(args) -> int:
    sys.stdout.write(serialize(lattice_datum_file(LatticeSpec(args.k))))
    return EXIT_OK


def cmd_regress(args) -> int:
    datum, _ = _load_datum(args.file)
    fixtures_text = _read_text(args.fixtures)
    stripped = next((line for line in fixtures_text.splitlines()
                     if line.split("#", 1)[0].strip()), "")
    if stripped.startswith("["):
        fixtures = parse_file(fixtures_text).fixtures
    else:
        fixtures = triples_to_fixtures(fixtures_text)
    indices = _computable_indices(datum)
    tensor = fusion_tensor(datum, indices=indices, jobs=args.jobs)
    hard = [fx for fx in fixtures if not fx.soft]
    soft = [fx for fx in fixtures if fx.soft]
    hard_disc = compare_fixtures(tensor, hard)
    soft_disc = compare_fixtures(tensor, soft)
    names = [lab.name for lab in datum.labels]
    if args.json:
        import json

        payload = {
            "hard_checked": len(hard), "soft_checked": len(soft),
            "hard_discrepancies": [
                {"left": d.left, "right": d.right, "citation": d.citation,
                 "expected": d.expected, "computed": d.computed}
                for d in hard_disc],
            "soft_discrepancies": [
                {"left": d.left, "right": d.right, "citation": d.citation,
                 "expected": d.expected, "computed": d.computed}
                for d in soft_disc],
        }
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(f"hard fixtures checked: {len(hard)}, discrepancies: {len(hard_disc)}")
        for d in hard_disc:
            print("  " + d.to_text(names))
        print(f"soft fixtures checked: {len(soft)}, discrepancies: {len(soft_disc)}")
        for d in soft_disc:
            print("  " + d.to_text(names))
    failed = bool(hard_disc) or (args.soft_fixtures and bool(soft_disc))
    return EXIT_FAIL if failed else EXIT_OK


def _build_parser() -> _Parser:
    parser = _Parser(prog="fusionring", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(func=func)
        return p

    p = add("validate", cmd_validate, "structural checks on a datum file")
    p.add_argument("file")
    p.add_argument("--json", action="store_true")

    p = add("complete", cmd_complete, "solve the unknown S entries from branching data")
    p.add_argument("file")
    p.add_argument("--parents", help="comma-separated branching files")
    p.add_argument("--cross-check", choices=["eigen"], dest="cross_check")
    p.add_argument("--fixtures", help="fixture file for the eigen cross-check")
    p.add_argument("-o", "--output", help="write the completed datum here")

    p = add("fuse", cmd_fuse, "fusion product of two irreducibles")
    p.add_argument("file")
    p.add_argument("i", type=int)
    p.add_argument("j", type=int)
    p.add_argument("--jobs", type=int, default=1)

    p = add("table", cmd_table, 'full tensor as sorted "i j k N" triples')
    p.add_argument("file")
    p.add_argument("--jobs", type=int, default=1)

    p = add("qdim", cmd_qdim, "quantum dimensions, exact and floating")
    p.add_argument("file")

    p = add("glob", cmd_glob, "global dimension")
    p.add_argument("file")

    p = add("lattice", cmd_lattice, "emit the datum of a rank-1 lattice of norm 2k")
    p.add_argument("--k", type=int, required=True)

    p = add("regress", cmd_regress, "compare the computed tensor against fixtures")
    p.add_argument("file")
    p.add_argument("fixtures")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--json", action="store_true")
    p.add_argument("--soft-fixtures", action="store_true", dest="soft_fixtures",
                   help="let soft-fixture mismatches fail the run")

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, DuplicateEntryError, IndexRangeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (UnderdeterminedError, InconsistentSystemError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_COMPLETION
    except (MissingEntryError, NonIntegerResultError, NegativeResultError,
            s4_dataset.QdimMismatchError, ZeroDivisionError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
