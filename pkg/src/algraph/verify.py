"""Verification suites tying the analyses together, plus the enumeration
harness over all small idempotent algebras of a fixed signature.

Each suite checks one structural claim on one algebra and returns a
VerificationReport; a failing report always carries a replayable
counterexample (the serialized algebra plus the offending pair or edge).

The gate for "no degenerate divisor" used by every suite is the exact
divisor test (omits_type1); the direct 4-ary term search is cross-checked
against it separately because its closure may exceed any practical budget
on algebras that admit type 1.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .congruence import all_tolerances, is_class_subuniverse, tolerance_classes
from .core import Algebra, AlgebraError, OpTable, UNKNOWN, serialize_algebra
from .edges import (
    MAJORITY,
    SEMILATTICE,
    STRICT_AFFINE,
    STRICT_MAJORITY,
    AFFINE,
    EdgeGraph,
    edge_graph,
    graph_connected,
    all_subuniverses,
    omits_type1,
)
from .congruence import link_tolerance
from .connectivity import verify_as_connectivity
from .core import subalgebra_induced
from .reduct import build_reduct, thick_edge_subset, verify_reduct_claims
from .subpower import ClosureBudget, DEFAULT_BUDGET, generate_subuniverse
from .thin import (
    SynthesisError,
    UnifiedOps,
    all_thin_edges,
    check_identities,
    enforce_identities,
    find_thin_affine,
    find_thin_majority,
    good_f,
    synth_unified,
    unified_conditions,
    verify_thick_thin,
)

THEOREMS = (
    "connectedness",
    "uniform",
    "identities",
    "good-op",
    "thin",
    "as-connectivity",
    "reduct",
    "tolerance-classes",
)


@dataclass
class VerificationReport:
    theorem: str
    status: str  # pass | fail | unknown | skipped
    detail: dict = field(default_factory=dict)
    seconds: float = 0.0

    def to_json(self) -> dict:
        return {
            "theorem": self.theorem,
            "status": self.status,
            "detail": self.detail,
            "seconds": round(self.seconds, 3),
        }


class Analysis:
    """Lazily computed shared state for one algebra's suites."""

    def __init__(self, alg: Algebra, budget: ClosureBudget = DEFAULT_BUDGET):
        self.alg = alg
        self.budget = budget
        self._graph: EdgeGraph | None = None
        self._unified: UnifiedOps | None = None
        self._fprime: OpTable | None = None
        self._thin: list | None = None
        self._taylor: bool | None = None

    def taylor(self) -> bool:
        if self._taylor is None:
            self._taylor = omits_type1(self.alg)
        return self._taylor

    def graph(self) -> EdgeGraph:
        if self._graph is None:
            self._graph = edge_graph(self.alg, self.budget)
        return self._graph

    def unified(self) -> UnifiedOps:
        if self._unified is None:
            ops = synth_unified(self.alg, self.graph().edge_list(), self.budget)
            self._unified = enforce_identities(ops, self.alg)
        return self._unified

    def fprime(self) -> OpTable:
        if self._fprime is None:
            self._fprime = good_f(self.alg, self.unified(), self.budget)
        return self._fprime

    def thin(self) -> list:
        if self._thin is None:
            infos = dict(self.graph().edges)
            self._thin = all_thin_edges(
                self.alg, self.unified(), self.fprime(), self.budget, infos=infos
            )
        return self._thin


def _skip_if_type1(ana: Analysis, theorem: str) -> VerificationReport | None:
    if not ana.taylor():
        return VerificationReport(theorem, "skipped", {"reason": "algebra admits type 1"})
    return None


def check_connectedness(ana: Analysis) -> VerificationReport:
    """Edge-graph connectivity for the algebra and every induced subalgebra."""
    t0 = time.time()
    skip = _skip_if_type1(ana, "connectedness")
    if skip:
        return skip
    alg = ana.alg
    for carrier in all_subuniverses(alg, min_size=1):
        sub, _ = subalgebra_induced(alg, carrier)
        g = edge_graph(sub, ana.budget)
        if g.has_unknown():
            return VerificationReport(
                "connectedness", "unknown", {"carrier": list(carrier)}, time.time() - t0
            )
        if not g.connected():
            return VerificationReport(
                "connectedness",
                "fail",
                {"carrier": list(carrier), "algebra": serialize_algebra(alg)},
                time.time() - t0,
            )
    return VerificationReport("connectedness", "pass", {}, time.time() - t0)


def check_uniform(ana: Analysis) -> VerificationReport:
    """Unified f, g, h meeting the whole per-edge condition matrix."""
    t0 = time.time()
    skip = _skip_if_type1(ana, "uniform")
    if skip:
        return skip
    try:
        ops = ana.unified()
    except SynthesisError as ex:
        return VerificationReport(
            "uniform",
            "fail",
            {"error": str(ex), "algebra": serialize_algebra(ana.alg)},
            time.time() - t0,
        )
    ok, matrix, first_fail = unified_conditions(ana.alg, ops.edges, ops.f, ops.g, ops.h)
    detail = {"conditions": {f"{k[0]}:{k[1]}": v for k, v in sorted(matrix.items())}}
    if not ok:
        detail["first_failure"] = list(first_fail[0]) + [first_fail[1]]
        detail["algebra"] = serialize_algebra(ana.alg)
        return VerificationReport("uniform", "fail", detail, time.time() - t0)
    return VerificationReport("uniform", "pass", detail, time.time() - t0)


def check_identities_suite(ana: Analysis) -> VerificationReport:
    """Absorption identities of f, g, h hold for all arguments."""
    t0 = time.time()
    skip = _skip_if_type1(ana, "identities")
    if skip:
        return skip
    try:
        ops = ana.unified()
    except SynthesisError as ex:
        return VerificationReport(
            "identities", "fail", {"error": str(ex)}, time.time() - t0
        )
    if check_identities(ops):
        return VerificationReport("identities", "pass", {}, time.time() - t0)
    return VerificationReport(
        "identities", "fail", {"algebra": serialize_algebra(ana.alg)}, time.time() - t0
    )


def check_good_op(ana: Analysis) -> VerificationReport:
    """f(a,b) = a or (a, f(a,b)) is a thin semilattice edge, for all a,b."""
    t0 = time.time()
    skip = _skip_if_type1(ana, "good-op")
    if skip:
        return skip
    try:
        fp = ana.fprime()
    except SynthesisError as ex:
        return VerificationReport(
            "good-op",
            "fail",
            {"error": str(ex), "algebra": serialize_algebra(ana.alg)},
            time.time() - t0,
        )
    t = fp.table()
    for a in range(ana.alg.size):
        for b in range(ana.alg.size):
            c = int(t[a, b])
            if c != a and not (t[a, c] == c and t[c, a] == c):
                return VerificationReport(
                    "good-op",
                    "fail",
                    {"pair": [a, b], "algebra": serialize_algebra(ana.alg)},
                    time.time() - t0,
                )
    return VerificationReport("good-op", "pass", {}, time.time() - t0)


def check_thin(ana: Analysis) -> VerificationReport:
    """Thin counterparts for strict majority and affine edges, the
    thick-to-thin property for semilattice edges, and connectivity of the
    graph without non-trivially witnessed semilattice edges."""
    t0 = time.time()
    skip = _skip_if_type1(ana, "thin")
    if skip:
        return skip
    alg = ana.alg
    try:
        ops = ana.unified()
        fp = ana.fprime()
    except SynthesisError as ex:
        return VerificationReport("thin", "fail", {"error": str(ex)}, time.time() - t0)
    failures = []
    unknown = False
    from .edges import classify_pair

    for e in ana.graph().edge_list():
        for (x, y) in ((e.a, e.b), (e.b, e.a)):
            info = e if (x, y) == (e.a, e.b) else classify_pair(alg, x, y, ana.budget)
            if info.strict == STRICT_MAJORITY:
                try:
                    res = find_thin_majority(alg, info, ops, ana.budget)
                except Exception as ex:
                    failures.append({"edge": [x, y], "claim": "thin-majority", "error": str(ex)})
                    continue
                if res is UNKNOWN:
                    unknown = True
            if AFFINE in info.types and info.strict == STRICT_AFFINE:
                try:
                    res = find_thin_affine(alg, info, ops, ana.budget)
                except Exception as ex:
                    failures.append({"edge": [x, y], "claim": "thin-affine", "error": str(ex)})
                    continue
                if res is UNKNOWN:
                    unknown = True
    for fail in verify_thick_thin(alg, ana.graph().edge_list(), fp):
        failures.append({"edge": list(fail[0]), "claim": "thick-to-thin", "error": fail[1]})
    # dropping semilattice edges with nontrivial witness keeps the graph connected
    if alg.size > 1:
        from .congruence import _UnionFind

        uf = _UnionFind(alg.size)
        for e in ana.graph().edge_list():
            types = set(e.types)
            if SEMILATTICE in types and not e.theta[SEMILATTICE].is_equality():
                types.discard(SEMILATTICE)
            if types:
                uf.union(e.a, e.b)
        root = uf.find(0)
        if not all(uf.find(x) == root for x in range(alg.size)):
            failures.append({"claim": "trimmed-graph-connectivity", "error": "disconnected"})
    if failures:
        return VerificationReport(
            "thin",
            "fail",
            {"failures": failures, "algebra": serialize_algebra(alg)},
            time.time() - t0,
        )
    if unknown:
        return VerificationReport("thin", "unknown", {}, time.time() - t0)
    return VerificationReport("thin", "pass", {}, time.time() - t0)


def check_as_connectivity(ana: Analysis) -> VerificationReport:
    """All ordered pairs of maximal elements joined by thin-edge paths."""
    t0 = time.time()
    skip = _skip_if_type1(ana, "as-connectivity")
    if skip:
        return skip
    try:
        rep = verify_as_connectivity(ana.alg, ana.thin())
    except SynthesisError as ex:
        return VerificationReport(
            "as-connectivity", "fail", {"error": str(ex)}, time.time() - t0
        )
    detail = {"maximal": rep["maximal"], "failures": rep["failures"]}
    if rep["failures"]:
        detail["algebra"] = serialize_algebra(ana.alg)
    return VerificationReport(
        "as-connectivity",
        "pass" if rep["status"] == "pass" else "fail",
        detail,
        time.time() - t0,
    )


def check_reduct(ana: Analysis, edge_pair=None) -> VerificationReport:
    """Reduct claims for qualifying edges (or one chosen pair)."""
    t0 = time.time()
    skip = _skip_if_type1(ana, "reduct")
    if skip:
        return skip
    alg = ana.alg
    graph = ana.graph()
    edges = []
    for e in graph.edge_list():
        if SEMILATTICE in e.types or e.strict == STRICT_MAJORITY:
            if edge_pair is None or (e.a, e.b) == tuple(sorted(edge_pair)):
                edges.append(e)
    if not edges:
        return VerificationReport(
            "reduct", "skipped", {"reason": "no qualifying edge"}, time.time() - t0
        )
    results = []
    worst = "pass"
    for e in edges:
        subset = thick_edge_subset(alg, e)
        red = build_reduct(alg, subset, ana.budget)
        rep = verify_reduct_claims(alg, red, ana.budget, base_graph=graph)
        rep["edge"] = [e.a, e.b]
        rep["ops"] = len(red.algebra.ops)
        results.append(rep)
        statuses = {rep["omits_type1"], rep["s_connectivity"], rep["sm_connectivity"]}
        if "fail" in statuses:
            worst = "fail"
        elif "unknown" in statuses and worst != "fail":
            worst = "unknown"
    detail = {"edges": results}
    if worst == "fail":
        detail["algebra"] = serialize_algebra(alg)
    return VerificationReport("reduct", worst, detail, time.time() - t0)


def check_tolerance_classes(ana: Analysis) -> VerificationReport:
    """Classes of every tolerance are subuniverses; link tolerances of
    pair-generated subdirect binary relations are compatible."""
    t0 = time.time()
    alg = ana.alg
    failures = []
    for t in all_tolerances(alg):
        for cls in tolerance_classes(t):
            if not is_class_subuniverse(alg, cls):
                failures.append({"claim": "class-subuniverse", "class": cls})
    for a in range(alg.size):
        for b in range(alg.size):
            if a == b:
                continue
            rel = generate_subuniverse(alg, 2, [(a, b), (b, a)], ana.budget, derivations=False)
            if not rel.is_complete():
                continue
            rows = rel.rows
            for i in range(2):
                if len(set(int(v) for v in rows[:, i])) != alg.size:
                    continue
                try:
                    link_tolerance(alg, rel, i)
                except Exception as ex:
                    failures.append(
                        {"claim": "link-tolerance", "pair": [a, b], "coord": i, "error": str(ex)}
                    )
    if failures:
        return VerificationReport(
            "tolerance-classes",
            "fail",
            {"failures": failures, "algebra": serialize_algebra(alg)},
            time.time() - t0,
        )
    return VerificationReport("tolerance-classes", "pass", {}, time.time() - t0)


_SUITES = {
    "connectedness": check_connectedness,
    "uniform": check_uniform,
    "identities": check_identities_suite,
    "good-op": check_good_op,
    "thin": check_thin,
    "as-connectivity": check_as_connectivity,
    "reduct": check_reduct,
    "tolerance-classes": check_tolerance_classes,
}


def run_suite(alg: Algebra, which="all", budget: ClosureBudget = DEFAULT_BUDGET) -> list[VerificationReport]:
    """Run theorem suites sharing one analysis.

    ``which`` is a suite name, "all", or a sequence of names.
    """
    if which == "all":
        names = THEOREMS
    elif isinstance(which, str):
        names = (which,)
    else:
        names = tuple(which)
    for name in names:
        if name not in _SUITES:
            raise AlgebraError(f"unknown theorem suite {name!r}; known: {THEOREMS}")
    ana = Analysis(alg, budget)
    return [_SUITES[name](ana) for name in names]


# ---------------------------------------------------------------------------
# Enumeration of small idempotent algebras


SIGNATURES = {
    "binary": ((2,),),
    "ternary": ((3,),),
    "binary+ternary": ((2, 3),),
}


def _free_cells(size: int, arity: int) -> list[int]:
    """Flat indices of the off-diagonal table cells, in table order."""
    out = []
    for idx in range(size**arity):
        rest, digits = idx, []
        for _ in range(arity):
            digits.append(rest % size)
            rest //= size
        if len(set(digits)) > 1:
            out.append(idx)
    return out


def count_idempotent_algebras(size: int, signature: str) -> int:
    arities = SIGNATURES[signature][0]
    total = 1
    for ar in arities:
        total *= size ** len(_free_cells(size, ar))
    return total


def idempotent_algebra(size: int, signature: str, index: int) -> Algebra:
    """The index-th idempotent algebra, lexicographic on free table cells."""
    if signature not in SIGNATURES:
        raise AlgebraError(f"unknown signature {signature!r}; known: {sorted(SIGNATURES)}")
    if size not in (2, 3):
        raise AlgebraError("enumeration supports sizes 2 and 3")
    arities = SIGNATURES[signature][0]
    total = count_idempotent_algebras(size, signature)
    if not 0 <= index < total:
        raise AlgebraError(f"index {index} out of range [0, {total})")
    ops = []
    names = {2: "f", 3: "g"}
    rest = index
    chunks = []
    for ar in reversed(arities):
        cells = _free_cells(size, ar)
        block = size ** len(cells)
        chunks.append((ar, cells, rest % block))
        rest //= block
    for ar, cells, code in reversed(chunks):
        vals = [0] * (size**ar)
        for idx in range(size**ar):
            r, digits = idx, []
            for _ in range(ar):
                digits.append(r % size)
                r //= size
            if len(set(digits)) == 1:
                vals[idx] = digits[0]
        for cell in reversed(cells):
            vals[cell] = code % size
            code //= size
        ops.append(OpTable(names[ar], ar, size, vals))
    return Algebra(f"{signature[0]}{size}_{index}", size, ops)


def iter_idempotent_algebras(size: int, signature: str, limit: int | None = None) -> Iterator[Algebra]:
    total = count_idempotent_algebras(size, signature)
    stop = total if limit is None else min(limit, total)
    for i in range(stop):
        yield idempotent_algebra(size, signature, i)


def _verify_one(args):
    size, signature, index, which, budget = args
    alg = idempotent_algebra(size, signature, index)
    if not omits_type1(alg):
        return index, "type1", []
    if isinstance(which, list):
        which = tuple(which)
    reports = run_suite(alg, which, budget)
    return index, "taylor", [r.to_json() for r in reports]


def enumerate_and_verify(
    size: int,
    signature: str,
    which: str = "all",
    limit: int | None = None,
    budget: ClosureBudget = DEFAULT_BUDGET,
    parallel: int = 1,
    progress=None,
) -> dict:
    """Run a theorem suite over every enumerated algebra without a type-1
    divisor; aggregates counts and collects failing algebras."""
    total = count_idempotent_algebras(size, signature)
    stop = total if limit is None else min(limit, total)
    jobs = ((size, signature, i, which, budget) for i in range(stop))
    counts = {"algebras": stop, "taylor": 0, "pass": 0, "fail": 0, "unknown": 0, "skipped": 0}
    failures = []
    unknowns = []

    def consume(result):
        index, kind, reports = result
        if kind == "type1":
            return
        counts["taylor"] += 1
        worst = "pass"
        for rep in reports:
            if rep["status"] == "fail":
                worst = "fail"
            elif rep["status"] == "unknown" and worst != "fail":
                worst = "unknown"
            elif rep["status"] == "skipped" and worst == "pass":
                worst = "skipped" if worst == "pass" else worst
        counts[worst] += 1
        if worst == "fail":
            failures.append({"index": index, "reports": reports})
        elif worst == "unknown":
            unknowns.append({"index": index, "reports": reports})
        if progress is not None:
            progress(index, worst)

    if parallel > 1:
        import multiprocessing as mp

        with mp.Pool(parallel) as pool:
            for result in pool.imap(_verify_one, jobs, chunksize=8):
                consume(result)
    else:
        for job in jobs:
            consume(_verify_one(job))
    return {
        "size": size,
        "signature": signature,
        "theorem": which,
        "counts": counts,
        "failures": failures,
        "unknowns": unknowns,
    }
