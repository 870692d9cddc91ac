import pytest

from algraph.core import UNKNOWN, Algebra, AlgebraError, OpTable, evaluate_term, term_table
from algraph.edges import (
    AFFINE,
    MAJORITY,
    SEMILATTICE,
    affine_certificates,
    affine_quotient_certificate,
    classify_pair,
    edge_graph,
    graph_connected,
    graph_connected_hereditary,
    has_siggers_term,
    is_strictly_simple,
    is_tolerance_free,
    majority_witness,
    maltsev_tables,
    omits_type1,
    semilattice_witness,
    type1_divisor,
    verify_simple_case4,
)
from algraph.subpower import ClosureBudget
from algraph.verify import idempotent_algebra, iter_idempotent_algebras


def test_semilattice_witness(algs):
    s2 = algs["S2"]
    t = semilattice_witness(s2, 0, 1)
    assert t is not None
    table = term_table(s2, t, 2)
    assert table(0, 1) == 1 and table(1, 0) == 1
    assert semilattice_witness(algs["M2"], 0, 1) is None
    assert semilattice_witness(algs["A2"], 0, 1) is None


def test_majority_witness(algs):
    t = majority_witness(algs["M2"], 0, 1)
    table = term_table(algs["M2"], t, 3)
    for a, b in ((0, 1), (1, 0)):
        assert table(a, b, b) == b and table(b, a, b) == b and table(b, b, a) == b
    assert majority_witness(algs["S2"], 0, 1) is None
    assert majority_witness(algs["Z3A"], 0, 1) is None


def test_affine_certificates(algs):
    cert = affine_quotient_certificate(algs["Z3A"])
    assert cert is not None
    assert list(cert.maltsev.values) == list(algs["Z3A"].ops[0].values)
    mal = term_table(algs["Z3A"], cert.term, 3)
    assert list(mal.values) == list(cert.maltsev.values)

    cert2 = affine_quotient_certificate(algs["A2"])
    assert cert2 is not None and cert2.maltsev(1, 0, 0) == 1

    assert affine_quotient_certificate(algs["S2"]) is None
    assert affine_quotient_certificate(algs["M2"]) is None


def test_maltsev_tables_counts():
    assert len(maltsev_tables(2)) == 1
    assert len(maltsev_tables(3)) == 1
    # order 4: three labelings of the cyclic group, one of the 2x2 group
    assert len(maltsev_tables(4)) == 4


def test_classify_fixture_pairs(algs):
    e = classify_pair(algs["S2"], 0, 1)
    assert e.types == {SEMILATTICE} and e.strict == "strictly-semilattice"
    assert e.theta[SEMILATTICE].is_equality()
    assert e.semilattice_orientations == {"ab"}

    e = classify_pair(algs["M2"], 0, 1)
    assert e.types == {MAJORITY} and e.strict == "strictly-majority"

    for name in ("A2", "Z3A"):
        e = classify_pair(algs[name], 0, 1)
        assert e.types == {AFFINE} and e.strict == "strictly-affine"

    e = classify_pair(algs["P2"], 0, 1)
    assert e.types == frozenset() and e.strict is None and not e.is_edge()


def test_classification_symmetric(algs):
    for name in ("S2", "M2", "A2", "RPS", "Z3A", "S3chain"):
        alg = algs[name]
        for a in range(alg.size):
            for b in range(a + 1, alg.size):
                assert classify_pair(alg, a, b).types == classify_pair(alg, b, a).types


def test_theta_minimality(algs):
    """No strictly finer congruence of Sg{a,b} witnesses the same type."""
    from algraph.congruence import all_congruences
    from algraph.core import quotient_algebra

    alg = algs["S3chain"]
    e = classify_pair(alg, 0, 2)
    theta = e.theta[SEMILATTICE]
    assert theta.is_equality()  # 0,2 generate {0,2} and the equality witnesses

    for name in ("S2", "M2", "A2", "Z3A", "RPS", "S3chain"):
        a = algs[name]
        for x in range(a.size):
            for y in range(x + 1, a.size):
                e = classify_pair(a, x, y)
                for kind, theta in e.theta.items():
                    for finer in all_congruences(e.sub):
                        if finer == theta or not finer.refines(theta):
                            continue
                        if finer.same(e.a_loc, e.b_loc):
                            continue
                        Q, bmap = quotient_algebra(e.sub, finer)
                        ab, bb = bmap[e.a_loc], bmap[e.b_loc]
                        if kind == SEMILATTICE:
                            assert (
                                semilattice_witness(Q, ab, bb) is None
                                and semilattice_witness(Q, bb, ab) is None
                            )
                        elif kind == MAJORITY:
                            assert majority_witness(Q, ab, bb) is None
                        else:
                            certs, _ = affine_certificates(Q)
                            assert not certs


def test_edge_graph_fixtures(algs, pipelines):
    g = pipelines["RPS"].graph
    assert len(g.edge_list()) == 3
    assert all(e.types == {SEMILATTICE} for e in g.edge_list())
    assert g.connected()

    g2 = edge_graph(algs["P2"])
    assert not g2.edge_list()
    assert not g2.connected()


def test_graph_connected_hereditary(algs):
    ok, _ = graph_connected_hereditary(algs["S3chain"])
    assert ok
    ok, carrier = graph_connected_hereditary(algs["P2"])
    assert not ok and carrier == (0, 1)
    one = Algebra("one", 1, [OpTable("f", 1, 1, [0])])
    assert graph_connected(one)


def test_siggers_fixtures(algs):
    assert has_siggers_term(algs["S2"]) is True
    assert has_siggers_term(algs["Z3A"]) is True
    assert has_siggers_term(algs["P2"]) is False
    assert omits_type1(algs["P2"]) is False
    assert type1_divisor(algs["P2"]) is not None
    assert omits_type1(algs["RPS"]) is True


def test_siggers_agrees_with_divisor_test():
    """The direct 4-ary term search never contradicts the divisor test.

    A modest budget keeps the runtime down; UNKNOWN results are allowed,
    definite ones must agree.
    """
    budget = ClosureBudget(max_elements=30_000, max_work=2_000_000)
    for alg in iter_idempotent_algebras(2, "binary"):
        assert has_siggers_term(alg, budget) is omits_type1(alg)
    checked = 0
    for idx in range(0, 729, 13):
        alg = idempotent_algebra(3, "binary", idx)
        res = has_siggers_term(alg, budget)
        if res is not UNKNOWN:
            assert res is omits_type1(alg), f"disagreement at index {idx}"
            checked += 1
    assert checked >= 20


def test_strictly_simple_and_tolerance_free(algs):
    assert is_strictly_simple(algs["Z3A"])
    assert is_strictly_simple(algs["S2"])
    assert not is_strictly_simple(algs["S3chain"])
    assert not is_strictly_simple(algs["RPS"])  # 2-element subalgebras
    assert is_tolerance_free(algs["Z3A"])
    assert not is_tolerance_free(algs["S3chain"])


def test_verify_simple_case4(algs):
    rep = verify_simple_case4(algs["M2"], 0, 1)
    assert rep["status"] == "pass" and rep["disjunct"] == "witness"
    rep = verify_simple_case4(algs["RPS"], 0, 1)
    assert rep["status"] == "pass" and rep["disjunct"] == "hypergraph"
    rep = verify_simple_case4(algs["S3chain"], 0, 1)
    assert rep["status"] == "skipped"
    rep = verify_simple_case4(algs["Z3A"], 0, 1)
    assert rep["status"] == "skipped"  # affine certificate present


def test_negative_control_coherent(algs):
    p2 = algs["P2"]
    assert has_siggers_term(p2) is False
    assert not graph_connected(p2)


def test_classify_rejects_equal_elements(algs):
    with pytest.raises(AlgebraError):
        classify_pair(algs["S2"], 1, 1)
