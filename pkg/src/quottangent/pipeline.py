"""Counterexample search, reproduction registry and report files.

The search walks the monomial submodules of R^r (R = k[x, y, z]) of
colength d.  For each chart it lists admissible pairs (B, S), draws the
coefficients γ from a PRNG seeded by ``seed:chart:candidate``, builds the
socle-supported family and computes the tangent space of the fiber at t = 1.
A parity violation is reported only if the fiber at t = 2 has the same
colength and tangent dimension.
"""

from __future__ import annotations

import csv
import io
import json
import os
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from importlib import resources
from typing import Callable, Iterable, Iterator, Sequence

from .deform import (DeformationCandidate, SupportCollision, add_disjoint_point,
                     admissible_pairs, build_family, flatness_probe, increase_rank,
                     ParametricFamily, perturbation_family, specialize)
from .enumeration import monomial_submodules, submodule_basis
from .grammar import Document, format_header, format_term, format_vector, parse_document
from .groebner import GroebnerBasis, buchberger, module_kernel
from .poly import ModuleVector, Ring
from .quotient import (NestedChain, graded_tangent, nested_tangent_dimension, nested_tnt_check,
                       support, tangent_dimension, tnt_check)
from .scalars import QQ, PrimeField, parse_field

DEFAULT_SEED = 20240601
WORKERS_ENV = "QUOTTANGENT_WORKERS"
VARIABLES = ("x", "y", "z")


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


# ---------------------------------------------------------------------------
# search


@dataclass
class SearchConfig:
    r: int
    d: int
    n: int = 3
    field: str = "QQ"
    seed: int = DEFAULT_SEED
    max_b: int = 4
    max_s: int = 3
    max_candidates: int = 200
    strongly_stable: bool = True
    workers: int = dc_field(default_factory=default_workers)
    output: str | None = None
    confirm_qq: bool = False
    time_budget: float | None = None

    def validate(self) -> None:
        if self.n != 3:
            raise ValueError("the parity search runs in three variables (n = 3)")
        if self.r < 1 or self.d < 0:
            raise ValueError("need r >= 1 and d >= 0")
        if self.max_b < 1 or self.max_s < 1 or self.max_candidates < 0:
            raise ValueError("caps must be positive")
        if self.workers < 1:
            raise ValueError("need at least one worker")
        parse_field(self.field)

    @property
    def ring(self) -> Ring:
        return Ring(VARIABLES, self.r, parse_field(self.field))


GAMMA_VALUES = (-3, -2, -1, 1, 2, 3)


def _draw(U, B, S, seed, chart, cand, draw):
    rng = random.Random(f"{seed}:{chart}:{cand}:{draw}")
    return DeformationCandidate.random(U, B, S, rng, GAMMA_VALUES)


def _fiber(c: DeformationCandidate, value):
    fam = build_family(c)
    G = specialize(fam, value)
    return fam, G


def _evaluate(U, cand: DeformationCandidate, value=1):
    fam, G = _fiber(cand, value)
    gens = [g.substitute(fam.nvars, value) for g in fam.gens]
    if G.colength() != fam.colength:
        return gens, G.colength(), None
    return gens, G.colength(), tangent_dimension(G, "groebner").tangent_dim


def _names(ring: Ring):
    return ring.variables


def _record(config: SearchConfig, chart: int, k: int, U, B, S) -> dict:
    ring = config.ring
    names = _names(ring)
    r, d = config.r, config.d
    cand = _draw(U, B, S, config.seed, chart, k, 0)
    gens, col, dim = _evaluate(U, cand)
    rec = {
        "chart": chart,
        "candidate": k,
        "seed": config.seed,
        "ring": format_header(ring),
        "chart_generators": [format_vector(g, ring) for g in U.gens],
        "B": [format_term(b, names, r) for b in B],
        "S": [format_term(s, names, r) for s in S],
        "gamma": [[format_term(b, names, r), format_term(s, names, r), int(_as_int(v))]
                  for (b, s), v in cand.gamma.items()],
        "generators": [format_vector(g, ring) for g in gens],
        "colength": col,
        "tangent_dim": dim,
        "parity_expected": r * d % 2,
        "parity_ok": None if dim is None else dim % 2 == r * d % 2,
        "check_colength": None,
        "check_tangent_dim": None,
        "second_draw_tangent_dim": None,
        "qq_tangent_dim": None,
        "status": "OK",
        "counterexample": False,
    }
    if dim is None:
        rec["status"] = "NOT_FLAT"
        return rec
    if rec["parity_ok"]:
        return rec
    _, col2, dim2 = _evaluate(U, cand, 2)
    rec["check_colength"], rec["check_tangent_dim"] = col2, dim2
    second = _draw(U, B, S, config.seed, chart, k, 1)
    rec["second_draw_tangent_dim"] = _evaluate(U, second)[2]
    if col2 != col or dim2 != dim:
        rec["status"] = "NON_GENERIC"
        return rec
    if isinstance(U.field, PrimeField):
        if not config.confirm_qq:
            rec["status"] = "UNCONFIRMED"
            return rec
        Uq = buchberger([_lift_qq(g) for g in U.gens])
        cq = DeformationCandidate(Uq, B, S, {key: QQ(_as_int(v)) for key, v in cand.gamma.items()})
        qdim = _evaluate(Uq, cq)[2]
        rec["qq_tangent_dim"] = qdim
        if qdim != dim:
            rec["status"] = "UNCONFIRMED"
            return rec
    rec["status"] = "COUNTEREXAMPLE"
    rec["counterexample"] = True
    return rec


def _as_int(v) -> int:
    if hasattr(v, "v"):
        p = v.p
        return v.v if v.v <= p // 2 else v.v - p
    return int(v)


def _lift_qq(g: ModuleVector) -> ModuleVector:
    return ModuleVector({t: QQ(_as_int(c)) for t, c in g.terms.items()}, g.rank, g.nvars, QQ)


def _chart_records(args) -> list[dict]:
    config, chart, stairs, deadline = args
    field = parse_field(config.field)
    U = submodule_basis(stairs, field)
    out = []
    if config.max_candidates == 0:
        return out
    pairs = admissible_pairs(U, config.max_b, config.max_s)
    for k, (B, S) in enumerate(pairs):
        if k >= config.max_candidates:
            break
        if deadline is not None and time.time() > deadline:
            break
        out.append(_record(config, chart, k, U, B, S))
    return out


def search(config: SearchConfig) -> Iterator[dict]:
    """Records ordered by (chart, candidate), independent of worker count."""
    config.validate()
    deadline = None if config.time_budget is None else time.time() + config.time_budget
    charts = monomial_submodules(config.n, config.r, config.d, config.strongly_stable)
    jobs = ((config, i, stairs, deadline) for i, stairs in enumerate(charts))
    if config.workers == 1:
        for job in jobs:
            yield from _chart_records(job)
        return
    with ProcessPoolExecutor(config.workers) as pool:
        # map preserves the submission order, which is the chart order
        for recs in pool.map(_chart_records, jobs, chunksize=1):
            yield from recs


def reverify(record: dict) -> bool:
    """Recompute the tangent dimension from the serialized generator list."""
    text = record["ring"] + "\n" + "\n".join(record["generators"]) + "\n"
    doc = parse_document(text)
    G = buchberger(doc.block())
    rep = tangent_dimension(G)
    return rep.colength == record["colength"] and rep.tangent_dim == record["tangent_dim"]


# ---------------------------------------------------------------------------
# report files

CSV_FIELDS = ("chart", "candidate", "B_size", "S_size", "colength", "tangent_dim",
              "parity_ok", "status", "counterexample")


def _csv_row(rec: dict) -> list:
    return [rec["chart"], rec["candidate"], len(rec["B"]), len(rec["S"]), rec["colength"],
            rec["tangent_dim"], rec["parity_ok"], rec["status"], rec["counterexample"]]


def report_emit(records: Iterable[dict], jsonl_path, csv_path) -> int:
    """Write one JSON line per record and a CSV summary; return the count."""
    n = 0
    with open(jsonl_path, "w", encoding="utf-8", newline="\n") as jf, \
            open(csv_path, "w", encoding="utf-8", newline="") as cf:
        writer = csv.writer(cf, lineterminator="\n")
        writer.writerow(CSV_FIELDS)
        for rec in records:
            jf.write(json.dumps(rec, separators=(",", ":")) + "\n")
            writer.writerow(_csv_row(rec))
            n += 1
    return n


# ---------------------------------------------------------------------------
# fixtures and reproduction cases


def fixture_names() -> list[str]:
    root = resources.files("quottangent") / "fixtures"
    return sorted(p.name[:-4] for p in root.iterdir() if p.name.endswith(".txt"))


def fixture_text(name: str) -> str:
    path = resources.files("quottangent") / "fixtures" / f"{name}.txt"
    if not path.is_file():
        raise KeyError(f"no fixture named {name!r}")
    return path.read_text(encoding="utf-8")


def load_fixture(name: str) -> Document:
    return parse_document(fixture_text(name))


def document_family(doc: Document, block: str = "family", base: str | None = None) -> ParametricFamily:
    """A one-parameter family read from a block written over the ring with
    its parameter; the parameter is the last variable.  The declared
    colength is that of the fiber at t = 0 (or of ``base`` when given)."""
    gens = doc.block(block)
    fam = ParametricFamily(gens, None, 0)
    if base:
        G0 = buchberger([g.drop_last_variables(1) for g in doc.block(base)])
    else:
        G0 = specialize(fam, 0)
    return ParametricFamily(gens, G0, G0.colength())


def kernel_from_document(doc: Document) -> GroebnerBasis:
    GI = buchberger(doc.block("I"))
    return module_kernel(doc.block("targets"), GI)


def _thm_main(doc: Document) -> dict:
    fam = document_family(doc)
    M = specialize(fam, 1)
    rep = tangent_dimension(M)
    return {"flat": flatness_probe(fam), "colength": rep.colength,
            "tangent_dim": rep.tangent_dim, "parity_ok": rep.parity_ok}


def thm_main_module():
    return specialize(document_family(load_fixture("thm-main-quot28")), 1)


def _kernel_case(doc: Document) -> dict:
    K = kernel_from_document(doc)
    rep = tangent_dimension(K)
    out = {"colength": rep.colength, "tangent_dim": rep.tangent_dim,
           "parity_ok": rep.parity_ok}
    if "K" in doc.blocks:
        out["matches_listed"] = K == buchberger(doc.block("K"))
    return out


def _hilb12(doc: Document) -> dict:
    rep = tangent_dimension(buchberger(doc.block("I")))
    return {"colength": rep.colength, "tangent_dim": rep.tangent_dim,
            "excess": rep.tangent_dim - 3 * rep.colength}


def _nested(doc: Document) -> dict:
    m, I = buchberger(doc.block("m")), buchberger(doc.block("I"))
    rep = tangent_dimension(I)
    literal = buchberger(doc.block("literal"))
    return {"colength": rep.colength, "tangent_dim": rep.tangent_dim,
            "nested_tangent_dim": nested_tangent_dimension(NestedChain([m, I])),
            "has_tnt": tnt_check(I).has_tnt,
            "nested_has_tnt": nested_tnt_check(NestedChain([m, I])).has_tnt,
            "literal_finite": literal.is_finite()}


def _tnt_family(doc: Document) -> dict:
    I = buchberger(doc.block("I"))
    rep = tangent_dimension(I)
    gr = graded_tangent(I)
    tnt = tnt_check(I)
    return {"colength": rep.colength, "syzygies": rep.syzygies,
            "weight_minus_one": gr[-1],
            "weight_below_minus_one": sum(v for k, v in gr.dims.items() if k <= -2),
            "has_tnt": tnt.has_tnt, "tangent_dim": rep.tangent_dim}


def _jjks(doc: Document) -> dict:
    fam = document_family(doc, base="base")
    samples = (0, 1, 2, 5)
    cols = [specialize(fam, c).colength() for c in samples]
    pts = support(specialize(fam, 1))
    return {"colengths": cols, "base_matches": specialize(fam, 0) == fam.base,
            "points": len(pts), "lengths": sorted((l for _, l in pts), reverse=True)}


def _increase_rank(doc: Document) -> dict:
    M = specialize(document_family(doc), 1)
    rep = tangent_dimension(increase_rank(M))
    return {"rank": rep.rank, "colength": rep.colength, "tangent_dim": rep.tangent_dim}


def _add_point(doc: Document) -> dict:
    M = specialize(document_family(doc), 1)
    rep = tangent_dimension(add_disjoint_point(M, (1, 1, 1)))
    try:
        add_disjoint_point(M, (0, 0, 0))
        collision = False
    except SupportCollision:
        collision = True
    return {"colength": rep.colength, "tangent_dim": rep.tangent_dim,
            "origin_collision": collision}


GENERIC_SEEDS = (0, 1, 2)


def generic_perturbation(doc: Document, seed: int) -> ParametricFamily:
    """y^3 + t·Σ b_i m_i with random rational b_i drawn from ``seed``."""
    J = doc.block("J")
    rng = random.Random(seed)
    change = ModuleVector.zero(1, J[0].nvars, QQ)
    for m in doc.block("perturb"):
        change = change + m.scale(Fraction(rng.choice((-1, 1)) * rng.randint(1, 9),
                                           rng.randint(1, 9)))
    idx = next(i for i, g in enumerate(J) if g.lead_term()[1] == (0, 3, 0))
    return perturbation_family(buchberger(J), J, {idx: change})


def _generic(doc: Document) -> dict:
    cols, dims = [], []
    for seed in GENERIC_SEEDS:
        G = specialize(generic_perturbation(doc, seed), 1)
        cols.append(G.colength())
        dims.append(tangent_dimension(G).tangent_dim)
    # the tangent dimensions are recorded, not asserted
    return {"colengths": cols, "recorded_tangent_dims": dims}


@dataclass
class ReproCase:
    name: str
    fixture: str
    run: Callable[[Document], dict]
    expected: dict
    budget: float

    def execute(self) -> "ReproResult":
        t0 = time.perf_counter()
        try:
            actual = self.run(load_fixture(self.fixture))
            error = None
        except Exception as exc:  # reported as a failed case
            actual, error = {}, f"{type(exc).__name__}: {exc}"
        elapsed = time.perf_counter() - t0
        mismatches = [k for k, v in self.expected.items() if actual.get(k) != v]
        return ReproResult(self.name, error is None and not mismatches, elapsed,
                           self.expected, actual, mismatches, error)


@dataclass
class ReproResult:
    name: str
    passed: bool
    runtime: float
    expected: dict
    actual: dict
    mismatches: list
    error: str | None = None

    def summary(self) -> str:
        if self.error:
            return self.error
        if self.mismatches:
            return "; ".join(f"{k}: expected {self.expected[k]!r}, got {self.actual.get(k)!r}"
                             for k in self.mismatches)
        return ", ".join(f"{k}={v}" for k, v in self.actual.items())


REPRO_CASES: dict[str, ReproCase] = {c.name: c for c in (
    ReproCase("thm-main-quot28", "thm-main-quot28", _thm_main,
              {"flat": True, "colength": 8, "tangent_dim": 37, "parity_ok": False}, 10),
    ReproCase("binomial-kernel-quot28", "binomial-kernel-quot28", _kernel_case,
              {"colength": 8, "tangent_dim": 39, "matches_listed": True}, 10),
    ReproCase("binomial-m1-quot310", "binomial-m1-quot310", _kernel_case,
              {"colength": 10, "tangent_dim": 69}, 30),
    ReproCase("binomial-m2-quot311", "binomial-m2-quot311", _kernel_case,
              {"colength": 11, "tangent_dim": 70}, 30),
    ReproCase("smoothable-quotient-quot313", "smoothable-quotient-quot313", _kernel_case,
              {"colength": 13, "tangent_dim": 86}, 60),
    ReproCase("binomial-ideal-hilb12", "binomial-ideal-hilb12", _hilb12,
              {"colength": 12, "tangent_dim": 45, "excess": 9}, 10),
    ReproCase("nested-18-a4", "nested-18-a4", _nested,
              {"colength": 8, "tangent_dim": 25, "nested_tangent_dim": 29,
               "has_tnt": True, "nested_has_tnt": False, "literal_finite": False}, 10),
    ReproCase("tnt-family-n2", "tnt-family-n2", _tnt_family,
              {"colength": 8, "syzygies": 8, "weight_minus_one": 4,
               "weight_below_minus_one": 0, "has_tnt": True}, 30),
    ReproCase("tnt-family-n3", "tnt-family-n3", _tnt_family,
              {"colength": 26, "syzygies": 12, "weight_minus_one": 6,
               "weight_below_minus_one": 0, "has_tnt": True}, 120),
    ReproCase("jjks-family", "smoothable-family-hilb24", _jjks,
              {"colengths": [24, 24, 24, 24], "base_matches": True, "points": 3,
               "lengths": [10, 8, 6]}, 60),
    ReproCase("thm-main-increase-rank", "thm-main-quot28", _increase_rank,
              {"rank": 3, "colength": 8, "tangent_dim": 45}, 30),
    ReproCase("thm-main-add-point", "thm-main-quot28", _add_point,
              {"colength": 9, "tangent_dim": 41, "origin_collision": True}, 30),
    ReproCase("generic-hilb12", "generic-hilb12", _generic,
              {"colengths": [12] * len(GENERIC_SEEDS)}, 30),
)}


def repro(name: str) -> ReproResult:
    try:
        case = REPRO_CASES[name]
    except KeyError:
        raise KeyError(f"unknown case {name!r}; known: {', '.join(REPRO_CASES)}") from None
    return case.execute()


def repro_all(names: Sequence[str] | None = None) -> list[ReproResult]:
    return [repro(n) for n in (names or list(REPRO_CASES))]


def repro_csv(results: Sequence[ReproResult]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("case", "status", "runtime_s", "details"))
    for r in results:
        w.writerow((r.name, "PASS" if r.passed else "FAIL", f"{r.runtime:.3f}", r.summary()))
    return buf.getvalue()
