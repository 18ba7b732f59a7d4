"""Command-line front end: search, build, classify, equiv.

Exit codes: 0 = success (including empty search results and negative
equivalence verdicts), 2 = validation failure, 1 = usage error.  Search
output is JSON lines so long runs can be piped and truncated; identical
commands with identical seeds produce byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import backend
from .construct import (
    SpecValidationError,
    StabilizerSpec,
    StandardFormError,
    bandyopadhyay_check,
    build_stabilizer,
    cyclicity_check,
    generators,
    search_specs,
)
from .entangle import entanglement_vector
from .equiv import equivalence_map
from .pauli import mub_from_generators, verify_mub

DEFAULT_TOL = 1e-10
DEFAULT_NUMERIC_CAP = 5


class _Parser(argparse.ArgumentParser):
    """argparse variant that exits 1 (not 2) on usage errors."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _build_parser() -> _Parser:
    parser = _Parser(prog="mubforge", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p_search = sub.add_parser("search", help="search for stabilizer specifications")
    p_search.add_argument("--m", type=int, required=True, help="number of qubits (1..16)")
    p_search.add_argument("--kind", required=True, choices=["field", "group", "semigroup"])
    p_search.add_argument("--count", type=int, default=1, help="maximum number of specs")
    p_search.add_argument(
        "--exhaustive", action="store_true", help="scan the whole candidate space in order"
    )
    p_search.add_argument("--seed", type=int, help="RNG seed (required unless --exhaustive)")
    p_search.add_argument("--out", type=Path, help="write JSON lines here instead of stdout")

    p_build = sub.add_parser("build", help="run the full pipeline on one spec file")
    p_build.add_argument("spec", type=Path)
    p_build.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p_build.add_argument(
        "--numeric-cap",
        type=int,
        default=DEFAULT_NUMERIC_CAP,
        help="skip numeric MUB verification above this qubit count",
    )
    p_build.add_argument("--out", type=Path)

    p_classify = sub.add_parser("classify", help="entanglement vectors of spec files")
    p_classify.add_argument("specs", type=Path, nargs="+")
    p_classify.add_argument("--out", type=Path)

    p_equiv = sub.add_parser("equiv", help="attempt an explicit equivalence map")
    p_equiv.add_argument("spec_a", type=Path)
    p_equiv.add_argument("spec_b", type=Path)
    p_equiv.add_argument("--out", type=Path)

    return parser


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text, encoding="utf-8")


def _load_spec(path: Path) -> StabilizerSpec:
    return StabilizerSpec.from_json(path.read_text(encoding="utf-8"))


def _cmd_search(args) -> int:
    if not 1 <= args.m <= 16:
        print("mubforge search: error: --m must be in 1..16", file=sys.stderr)
        return 1
    if args.exhaustive:
        mode, seed = "exhaustive", None
    else:
        if args.seed is None:
            print(
                "mubforge search: error: --seed is required in random mode "
                "(or pass --exhaustive)",
                file=sys.stderr,
            )
            return 1
        mode, seed = "random", args.seed
    lines = []
    try:
        for spec in search_specs(args.m, args.kind, args.count, mode, seed):
            lines.append(spec.to_json())
    except ValueError as exc:
        print(f"mubforge search: error: {exc}", file=sys.stderr)
        return 1
    _emit("".join(line + "\n" for line in lines), args.out)
    if not lines:
        hints = {
            "field": "no symmetric matrix with an admissible characteristic polynomial",
            "group": "no non-polynomial symmetrizer exists or was found",
            "semigroup": "no non-polynomial symmetrizer or no admissible addend exists",
        }
        print(
            f"warning: search produced no {args.kind} spec at m={args.m}: {hints[args.kind]}",
            file=sys.stderr,
        )
    return 0


def _cmd_build(args) -> int:
    try:
        spec = _load_spec(args.spec)
    except (OSError, ValueError, KeyError) as exc:
        print(f"mubforge build: cannot read spec: {exc}", file=sys.stderr)
        return 2
    timings: dict[str, float] = {}
    try:
        t0 = time.perf_counter()
        spec.validate()
        timings["validate"] = time.perf_counter() - t0

        t0 = time.perf_counter()
        C = build_stabilizer(spec)
        cyclic_ok = cyclicity_check(C, spec.d)
        timings["cyclicity"] = time.perf_counter() - t0

        t0 = time.perf_counter()
        gens = generators(spec)
        bandy_ok = bandyopadhyay_check(gens)
        timings["classes"] = time.perf_counter() - t0

        t0 = time.perf_counter()
        ent = entanglement_vector(gens)
        timings["entanglement"] = time.perf_counter() - t0
    except (SpecValidationError, StandardFormError) as exc:
        print(f"mubforge build: invalid spec: {exc}", file=sys.stderr)
        return 2

    report = {
        "spec": spec.to_json_dict(),
        "cyclic_ok": cyclic_ok,
        "bandyopadhyay_ok": bandy_ok,
        "entanglement": ent.to_json_dict(),
    }
    numeric_ok = True
    if not (cyclic_ok and bandy_ok):
        report["mub_verification"] = "skipped (symbolic checks failed)"
    elif spec.m <= args.numeric_cap:
        t0 = time.perf_counter()
        bases = mub_from_generators(gens)
        result = verify_mub(bases, args.tol)
        timings["numeric"] = time.perf_counter() - t0
        report["mub_verification"] = "passed" if result.passed else "failed"
        report["mub_max_deviation"] = result.max_deviation
        numeric_ok = result.passed
    else:
        report["mub_verification"] = f"skipped (m > {args.numeric_cap})"
    report["timings"] = timings
    _emit(json.dumps(report, indent=2) + "\n", args.out)
    if cyclic_ok and bandy_ok and numeric_ok:
        return 0
    print("mubforge build: one or more checks failed", file=sys.stderr)
    return 2


def _cmd_classify(args) -> int:
    rows = []
    failed = False
    for path in args.specs:
        try:
            spec = _load_spec(path)
            spec.validate()
            ent = entanglement_vector(generators(spec))
            counts = "(" + ",".join(str(c) for c in ent.counts) + ")"
            rows.append((str(path), spec.kind, str(spec.m), counts))
        except (OSError, ValueError, KeyError) as exc:
            failed = True
            print(f"mubforge classify: {path}: {exc}", file=sys.stderr)
            rows.append((str(path), "-", "-", "error"))
    widths = [max(len(r[i]) for r in rows + [("file", "kind", "m", "counts")]) for i in range(4)]
    header = ("file", "kind", "m", "counts")
    lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths))]
    lines += ["  ".join(c.ljust(w) for c, w in zip(row, widths)) for row in rows]
    _emit("".join(line.rstrip() + "\n" for line in lines), args.out)
    return 2 if failed else 0


def _cmd_equiv(args) -> int:
    try:
        spec_a = _load_spec(args.spec_a)
        spec_b = _load_spec(args.spec_b)
        spec_a.validate()
        spec_b.validate()
        if spec_a.m != spec_b.m:
            raise SpecValidationError("m-mismatch", "specs have different qubit counts")
    except (OSError, ValueError, KeyError) as exc:
        print(f"mubforge equiv: {exc}", file=sys.stderr)
        return 2
    try:
        f, reason = equivalence_map(spec_a, spec_b)
    except ValueError as exc:
        verdict = {"equivalent": False, "not_expressible": True, "reason": str(exc)}
        _emit(json.dumps(verdict, indent=2) + "\n", args.out)
        return 0
    verdict = {"equivalent": f is not None, "reason": reason}
    if f is not None:
        verdict["f"] = f.matrix.to_lists()
    _emit(json.dumps(verdict, indent=2) + "\n", args.out)
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    handlers = {
        "search": _cmd_search,
        "build": _cmd_build,
        "classify": _cmd_classify,
        "equiv": _cmd_equiv,
    }
    return handlers[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
