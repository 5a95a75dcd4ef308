"""Command-line entry point ``quottangent``.

Exit codes: 0 success, 1 failed check or reproduction, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from .deform import SupportCollision, flatness_probe, specialize
from .enumeration import monomial_ideals, monomial_submodules, submodule_generators
from .grammar import Document, ParseError, default_names, format_vector, parse_document
from .groebner import InfiniteColength, buchberger, module_kernel
from .pipeline import (DEFAULT_SEED, SearchConfig, default_workers, document_family,
                       kernel_from_document, repro_all, repro_csv, report_emit, search,
                       REPRO_CASES)
from .poly import Ring
from .quotient import (ChainError, IrrationalSupport, NestedChain, NotHomogeneous,
                       graded_tangent, nested_graded_tangent, nested_tangent_dimension,
                       nested_tnt_check, support, tangent_dimension, tnt_check)
from .scalars import parse_field


class UsageError(Exception):
    pass


def _dump(obj) -> None:
    print(json.dumps(obj, separators=(",", ":")))


def _read(path: str) -> Document:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(str(exc)) from None
    return parse_document(text)


def _convert(vecs, field):
    if field is None:
        return vecs
    return [v.change_field(field) for v in vecs]


def _module(doc: Document, block: str | None, at: str | None, field=None):
    """The submodule described by a document: an explicit block, the kernel
    of ``targets`` modulo ``I``, or the fiber of ``family`` at t = ``at``."""
    if block is None:
        if "targets" in doc.blocks and "I" in doc.blocks:
            return kernel_from_document(doc) if field is None else \
                _kernel_over(doc, field)
        for name in ("gens", "family"):
            if name in doc.blocks:
                block = name
                break
        else:
            block = next(iter(doc.blocks), None)
            if block is None:
                raise UsageError("document has no generator blocks")
    if block not in doc.blocks:
        raise UsageError(f"document has no block {block!r}")
    gens = doc.blocks[block]
    if not gens:
        raise UsageError(f"block {block!r} is empty")
    if doc.ring.param:
        if at is None:
            raise UsageError(f"the document has parameter {doc.ring.param}; pass --at VALUE")
        fam = document_family(doc, block)
        gens = [g.substitute(fam.nvars, Fraction(at)) for g in fam.gens]
    elif at is not None:
        raise UsageError("--at given but the document has no parameter")
    return buchberger(_convert(gens, field))


def _kernel_over(doc: Document, field):
    GI = buchberger(_convert(doc.block("I"), field))
    return module_kernel(_convert(doc.block("targets"), field), GI)


def _field(args):
    return parse_field(args.field) if getattr(args, "field", None) else None


def _chain(doc: Document, spec: str | None, field):
    names = spec.split(",") if spec else list(doc.blocks)
    levels = []
    for name in names:
        if name not in doc.blocks:
            raise UsageError(f"document has no block {name!r}")
        levels.append(buchberger(_convert(doc.blocks[name], field)))
    return NestedChain(levels)


# ---------------------------------------------------------------------------
# subcommands


def cmd_tangent(args) -> int:
    U = _module(_read(args.file), args.block, args.at, _field(args))
    rep = tangent_dimension(U, args.presentation, graded=args.graded)
    print(rep.to_json())
    return 0


def cmd_graded(args) -> int:
    U = _module(_read(args.file), args.block, args.at, _field(args))
    gr = graded_tangent(U)
    _dump({"graded": {str(k): v for k, v in sorted(gr.dims.items())}, "total": gr.total})
    return 0


def cmd_tnt(args) -> int:
    doc = _read(args.file)
    if args.chain:
        rep = nested_tnt_check(_chain(doc, args.chain, _field(args)))
    else:
        rep = tnt_check(_module(doc, args.block, args.at, _field(args)))
    _dump(rep.to_dict())
    return 0


def cmd_nested(args) -> int:
    chain = _chain(_read(args.file), args.chain, _field(args))
    out = {"levels": [G.colength() for G in chain.levels],
           "nested_tangent_dim": nested_tangent_dimension(chain)}
    if args.graded:
        gr = nested_graded_tangent(chain)
        out["graded"] = {str(k): v for k, v in sorted(gr.dims.items())}
    _dump(out)
    return 0


def cmd_enumerate(args) -> int:
    if args.r == 1:
        items = ((st,) for st in monomial_ideals(args.n, args.d, args.strongly_stable))
    else:
        items = monomial_submodules(args.n, args.r, args.d, args.strongly_stable)
    if args.count_only:
        print(sum(1 for _ in items))
        return 0
    ring = Ring(default_names(args.n), args.r)
    for stairs in items:
        gens = [format_vector(g, ring) for g in submodule_generators(stairs)]
        print(json.dumps(gens) if args.format == "json" else ", ".join(gens))
    return 0


def cmd_search(args) -> int:
    config = SearchConfig(
        r=args.r, d=args.d, n=args.n, field=args.field or "QQ", seed=args.seed,
        max_b=args.max_b, max_s=args.max_s, max_candidates=args.max_candidates,
        strongly_stable=not args.exhaustive, workers=args.workers,
        output=args.output, confirm_qq=args.confirm_qq, time_budget=args.budget)
    try:
        config.validate()
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    hits = 0

    def counted(stream):
        nonlocal hits
        for rec in stream:
            hits += rec["counterexample"]
            yield rec

    if args.output:
        n = report_emit(counted(search(config)), args.output + ".jsonl", args.output + ".csv")
    else:
        n = 0
        for rec in counted(search(config)):
            print(json.dumps(rec, separators=(",", ":")))
            n += 1
    print(f"{n} records, {hits} counterexamples", file=sys.stderr)
    return 0


def cmd_family(args) -> int:
    doc = _read(args.file)
    if not doc.ring.param:
        raise UsageError("a family needs a 'param' in the header")
    fam = document_family(doc, args.block, args.base)
    samples = [Fraction(s) for s in args.samples.split(",")]
    fibers = [specialize(fam, c) for c in samples]
    out = {"samples": [str(c) for c in samples],
           "colengths": [G.colength() for G in fibers],
           "declared_colength": fam.colength,
           "flat": flatness_probe(fam, samples)}
    if args.tangent:
        out["tangent_dims"] = [tangent_dimension(G).tangent_dim for G in fibers]
    _dump(out)
    return 0 if out["flat"] else 1


def cmd_support(args) -> int:
    U = _module(_read(args.file), args.block, args.at)
    pts = support(U)
    _dump([{"point": [str(c) for c in p], "length": l} for p, l in pts])
    return 0


def cmd_repro(args) -> int:
    if args.all:
        names = list(REPRO_CASES)
    elif args.names:
        names = args.names
        unknown = [n for n in names if n not in REPRO_CASES]
        if unknown:
            raise UsageError(f"unknown case(s) {', '.join(unknown)}; known: {', '.join(REPRO_CASES)}")
    else:
        raise UsageError("name a case or pass --all")
    results = repro_all(names)
    table = repro_csv(results)
    if args.csv:
        with open(args.csv, "w", encoding="utf-8", newline="") as fh:
            fh.write(table)
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'}  {r.name}  {r.runtime:.2f}s  {r.summary()}")
    return 0 if all(r.passed for r in results) else 1


# ---------------------------------------------------------------------------


def _input_options(p, block=True):
    p.add_argument("file")
    if block:
        p.add_argument("--block", help="generator block (default: gens, family or kernel data)")
        p.add_argument("--at", help="parameter value for a family document")
    p.add_argument("--field", help="QQ (default) or fp:<prime>")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="quottangent",
                                 description="Tangent spaces to Quot and nested Hilbert schemes.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("tangent", help="dimension of Hom(U, R^r/U)")
    _input_options(p)
    p.add_argument("--presentation", choices=("minimal", "groebner"), default="minimal")
    p.add_argument("--graded", action="store_true")
    p.set_defaults(func=cmd_tangent)

    p = sub.add_parser("graded", help="weight decomposition of the tangent space")
    _input_options(p)
    p.set_defaults(func=cmd_graded)

    p = sub.add_parser("tnt", help="trivial negative tangents check")
    _input_options(p)
    p.add_argument("--chain", help="comma-separated blocks forming a nested chain")
    p.set_defaults(func=cmd_tnt)

    p = sub.add_parser("nested-tangent", help="tangent space to a nested Hilbert scheme")
    _input_options(p, block=False)
    p.add_argument("--chain", help="comma-separated blocks, largest ideal first "
                                   "(default: all blocks in file order)")
    p.add_argument("--graded", action="store_true")
    p.set_defaults(func=cmd_nested)

    p = sub.add_parser("enumerate", help="monomial ideals or submodules of given colength")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--r", type=int, default=1)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--strongly-stable", action="store_true")
    p.add_argument("--count-only", action="store_true")
    p.add_argument("--format", choices=("grammar", "json"), default="grammar")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("search", help="socle-supported deformation search for parity failures")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--max-b", type=int, default=4)
    p.add_argument("--max-s", type=int, default=3)
    p.add_argument("--max-candidates", type=int, default=200)
    p.add_argument("--exhaustive", action="store_true",
                   help="all monomial charts instead of strongly stable representatives")
    p.add_argument("--workers", type=int, default=default_workers())
    p.add_argument("--output", help="write OUTPUT.jsonl and OUTPUT.csv instead of stdout")
    p.add_argument("--field", help="QQ (default) or fp:<prime>")
    p.add_argument("--confirm-qq", action="store_true",
                   help="recheck prime-field counterexamples over QQ")
    p.add_argument("--budget", type=float, help="wall-clock budget in seconds")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("family", help="flatness probe of a one-parameter family")
    p.add_argument("file")
    p.add_argument("--block", default="family")
    p.add_argument("--base", help="block with the expected special fiber")
    p.add_argument("--samples", default="0,1,2,5")
    p.add_argument("--tangent", action="store_true", help="also report fiber tangent dimensions")
    p.set_defaults(func=cmd_family)

    p = sub.add_parser("support", help="support points and local lengths (QQ)")
    p.add_argument("file")
    p.add_argument("--block")
    p.add_argument("--at")
    p.set_defaults(func=cmd_support)

    p = sub.add_parser("repro", help="reproduce the registered cases")
    p.add_argument("names", nargs="*")
    p.add_argument("--all", action="store_true")
    p.add_argument("--csv", help="write the pass/fail table as CSV")
    p.set_defaults(func=cmd_repro)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ParseError, ChainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (InfiniteColength, NotHomogeneous, SupportCollision) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except IrrationalSupport as exc:
        print(f"error [{exc.code}]: {exc}", file=sys.stderr)
        return 1
    except BrokenPipeError:
        # output consumer went away (e.g. piped into head)
        sys.stdout = open(os.devnull, "w")
        return 0


if __name__ == "__main__":
    sys.exit(main())
