"""Acceptance criteria, one test per criterion, one printed line each.

The enumeration sweeps are shared session-wide: every idempotent
three-element single-binary-operation algebra (729 tables) plus the
two-element populations, gated by the exact no-type-1-divisor test and
run through all structural suites.  Everything is exact arithmetic; the
expectation everywhere is zero failures and zero unknowns.
"""

import random

import pytest

from algraph.core import Algebra, OpTable, UNKNOWN
from algraph.edges import (
    AFFINE,
    MAJORITY,
    SEMILATTICE,
    STRICT_MAJORITY,
    classify_pair,
    edge_graph,
    has_siggers_term,
    omits_type1,
)
from algraph.reduct import build_reduct, thick_edge_subset, verify_reduct_claims
from algraph.subpower import ClosureBudget, generate_subuniverse, term_slice
from algraph.thin import witness_majority_triple, witness_mixed
from algraph.verify import Analysis, enumerate_and_verify, iter_idempotent_algebras
from oracles import (
    brute_term_tables,
    naive_close,
    table_is_majority_on,
    table_is_semilattice_on,
)

MAIN_SUITES = (
    "connectedness",
    "uniform",
    "identities",
    "good-op",
    "thin",
    "as-connectivity",
    "tolerance-classes",
)


@pytest.fixture(scope="session")
def sweep3():
    return enumerate_and_verify(3, "binary", MAIN_SUITES)


@pytest.fixture(scope="session")
def sweep2():
    return enumerate_and_verify(2, "binary", MAIN_SUITES)


@pytest.fixture(scope="session")
def sweep2t():
    return enumerate_and_verify(2, "ternary", MAIN_SUITES)


def _suite_clean(*sweeps, suites):
    """No failure or unknown in the given suites across the sweeps."""
    bad = []
    for agg in sweeps:
        for entry in agg["failures"] + agg["unknowns"]:
            for rep in entry["reports"]:
                if rep["theorem"] in suites and rep["status"] in ("fail", "unknown"):
                    bad.append((agg["size"], agg["signature"], entry["index"], rep))
    return bad


def _line(num, ok, text):
    print(f"ACCEPTANCE {num}: {'PASS' if ok else 'FAIL'} - {text}")


def test_criterion_1_connectedness(sweep3, sweep2):
    """Edge-graph connectivity, hereditarily, on every enumerated algebra
    without a type-1 divisor."""
    assert sweep3["counts"]["algebras"] == 729
    assert sweep3["counts"]["taylor"] == 331
    assert sweep2["counts"] == {
        "algebras": 4, "taylor": 2, "pass": 2, "fail": 0, "unknown": 0, "skipped": 0,
    }
    bad = _suite_clean(sweep3, sweep2, suites={"connectedness"})
    _line(1, not bad, f"connectivity on {sweep3['counts']['taylor']}+2 algebras, failures={len(bad)}")
    assert not bad
    assert sweep3["counts"]["fail"] == 0 and sweep3["counts"]["unknown"] == 0


def test_criterion_2_fixture_classification(algs):
    """Fixture classification against the exhaustive term-slice oracle."""
    ok = True

    # oracle: the 2-element fixtures, via brute-force slices
    for name, expect_sl, expect_mj in (("S2", True, False), ("M2", False, True), ("A2", False, False)):
        alg = algs[name]
        slice2 = brute_term_tables(alg, 2)
        slice3 = brute_term_tables(alg, 3)
        has_sl = any(table_is_semilattice_on(t, 2, 0, 1) for t in slice2)
        has_mj = any(table_is_majority_on(t, 2, 0, 1) for t in slice3)
        assert has_sl == expect_sl and has_mj == expect_mj
    # A2: x+y+z is a term, so the affine type is the oracle expectation
    assert tuple([0, 1, 1, 0, 1, 0, 0, 1]) in brute_term_tables(algs["A2"], 3)

    assert classify_pair(algs["S2"], 0, 1).strict == "strictly-semilattice"
    assert classify_pair(algs["M2"], 0, 1).strict == "strictly-majority"
    assert classify_pair(algs["A2"], 0, 1).strict == "strictly-affine"
    assert classify_pair(algs["Z3A"], 0, 1).strict == "strictly-affine"
    g = edge_graph(algs["RPS"])
    assert len(g.edge_list()) == 3
    assert all(e.types == {SEMILATTICE} for e in g.edge_list())
    assert has_siggers_term(algs["P2"]) is False
    assert not edge_graph(algs["P2"]).connected()
    _line(2, ok, "fixture classification matches the term-slice oracle")


def test_criterion_3_unified_operations(sweep3, sweep2, sweep2t):
    bad = _suite_clean(sweep3, sweep2, sweep2t, suites={"uniform", "identities"})
    _line(3, not bad, f"unified f,g,h with identities on all enumerated algebras, failures={len(bad)}")
    assert not bad


def test_criterion_4_good_operation(sweep3, sweep2, sweep2t):
    bad = _suite_clean(sweep3, sweep2, sweep2t, suites={"good-op"})
    _line(4, not bad, f"improved binary operation condition, failures={len(bad)}")
    assert not bad


def test_criterion_5_thin_counterparts(sweep3, sweep2, sweep2t):
    bad = _suite_clean(sweep3, sweep2, sweep2t, suites={"thin"})
    _line(5, not bad, f"thin counterparts and thick-to-thin property, failures={len(bad)}")
    assert not bad


def test_criterion_6_as_connectivity(sweep3, sweep2, sweep2t):
    bad = _suite_clean(sweep3, sweep2, sweep2t, suites={"as-connectivity"})
    _line(6, not bad, f"maximal elements pairwise connected by thin paths, failures={len(bad)}")
    assert not bad


def test_criterion_7_reducts():
    """At least 20 enumerated (algebra, qualifying edge) pairs whose reduct
    keeps type omission and s-/sm-connectivity.

    Sampling rule (deterministic): walk the enumeration order and keep the
    pairs whose binary+ternary slices complete within the sampling budget
    with at most 400 operations; the first 20+ such pairs are verified.
    """
    budget = ClosureBudget(max_elements=1500, max_work=2_000_000)
    verified = []
    failures = []
    unknowns = []
    for alg in iter_idempotent_algebras(3, "binary"):
        if len(verified) >= 20:
            break
        if not omits_type1(alg):
            continue
        ana = Analysis(alg, budget)
        qual = [
            e
            for e in ana.graph().edge_list()
            if SEMILATTICE in e.types or e.strict == STRICT_MAJORITY
        ]
        if not qual:
            continue
        s2 = term_slice(alg, 2, budget)
        s3 = term_slice(alg, 3, budget)
        if s2[1] != "complete" or s3[1] != "complete" or len(s2[0]) + len(s3[0]) > 400:
            continue
        for e in qual:
            if len(verified) >= 20:
                break
            subset = thick_edge_subset(alg, e)
            red = build_reduct(alg, subset, budget, slices=(s2, s3))
            rep = verify_reduct_claims(alg, red, budget, base_graph=ana.graph())
            statuses = {rep["omits_type1"], rep["s_connectivity"], rep["sm_connectivity"]}
            if "fail" in statuses:
                failures.append((alg.name, (e.a, e.b), rep))
            elif "unknown" in statuses:
                unknowns.append((alg.name, (e.a, e.b), rep))
            else:
                verified.append((alg.name, (e.a, e.b)))
    ok = len(verified) >= 20 and not failures and not unknowns
    _line(7, ok, f"{len(verified)} reduct pairs verified, failures={len(failures)}, unknowns={len(unknowns)}")
    assert len(verified) >= 20
    assert not failures and not unknowns


def test_criterion_8_cross_product_witnesses(ternary_pipelines):
    """Witness terms across same-signature thin edges: all combinations
    drawn from the fixture family succeed and verify exactly."""
    thin = {name: p.thin for name, p in ternary_pipelines.items()}
    maj = [t for t in thin["M2t"] if t.kind == MAJORITY]
    aff = [t for t in thin["A2t"] + thin["Z3At"] if t.kind == AFFINE]
    sls = [t for t in thin["S2t"] if t.kind == SEMILATTICE]
    assert len(maj) == 2 and len(aff) == 8 and len(sls) == 1
    count = 0
    for e1 in maj:
        for e2 in maj:
            for e3 in maj:
                assert witness_majority_triple(e1, e2, e3) is not UNKNOWN
                count += 1
    for m in maj:
        for s in sls:
            assert witness_mixed("majority-semilattice", m, s) is not UNKNOWN
            count += 1
    for a1 in aff:
        for a2 in aff:
            assert witness_mixed("affine-affine", a1, a2) is not UNKNOWN
            count += 1
    for a1 in aff:
        for s in sls:
            assert witness_mixed("affine-semilattice", a1, s) is not UNKNOWN
            count += 1
    for a1 in aff:
        for m in maj:
            assert witness_mixed("affine-majority", a1, m) is not UNKNOWN
            count += 1
    _line(8, True, f"{count} cross-product witness searches succeeded and verified")


def test_criterion_9_engine_oracle(sweep3, sweep2, sweep2t):
    """Closure engine equals the naive fixpoint oracle on 200 randomized
    instances; tolerance classes and link tolerances behave on every
    enumerated algebra."""
    rng = random.Random(987654321)
    for _ in range(200):
        n = rng.randint(2, 3)
        k = rng.randint(1, 3)
        ops = []
        for i in range(rng.randint(1, 2)):
            ar = rng.randint(1, 3)
            vals = [rng.randrange(n) for _ in range(n**ar)]
            for x in range(n):
                idx = 0
                for _ in range(ar):
                    idx = idx * n + x
                vals[idx] = x
            ops.append(OpTable(f"f{i}", ar, n, vals))
        alg = Algebra("rnd", n, ops)
        gens = [tuple(rng.randrange(n) for _ in range(k)) for _ in range(rng.randint(1, 3))]
        su = generate_subuniverse(alg, k, gens)
        assert su.status == "complete"
        assert su.as_set() == naive_close(alg, k, gens)
    bad = _suite_clean(sweep3, sweep2, sweep2t, suites={"tolerance-classes"})
    _line(9, not bad, f"engine oracle equivalence on 200 instances; tolerance lemmas failures={len(bad)}")
    assert not bad
