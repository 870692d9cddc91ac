import numpy as np
import pytest

from algraph.core import Algebra, AlgebraError, OpTable, UNKNOWN, VerificationError, projection
from algraph.edges import AFFINE, MAJORITY, SEMILATTICE
from algraph.thin import (
    ThinEdge,
    UnifiedOps,
    all_thin_edges,
    check_identities,
    enforce_identities,
    find_thin_affine,
    find_thin_majority,
    good_f,
    is_thin_affine,
    is_thin_majority,
    synth_unified,
    thin_semilattice_edges,
    unified_conditions,
    verify_thick_thin,
    witness_majority_triple,
    witness_mixed,
)


def table(vals, arity, size, name="f"):
    return OpTable(name, arity, size, vals)


def test_synth_s2(pipelines):
    p = pipelines["S2"]
    assert list(p.ops.f.values) == [0, 1, 1, 1]
    assert list(p.ops.g.values) == [0, 1, 1, 1, 1, 1, 1, 1]  # x or y or z
    assert list(p.ops.h.values) == [0, 1, 1, 1, 1, 1, 1, 1]


def test_synth_m2(pipelines):
    p = pipelines["M2"]
    assert list(p.ops.f.values) == [0, 0, 1, 1]  # first projection
    assert list(p.ops.g.values) == [0, 0, 0, 1, 0, 1, 1, 1]  # median
    assert list(p.ops.h.values) == [0, 0, 0, 0, 1, 1, 1, 1]  # first projection


def test_synth_a2_z3a(pipelines):
    p = pipelines["A2"]
    assert list(p.ops.f.values) == [0, 0, 1, 1]
    assert list(p.ops.g.values) == [0, 0, 0, 0, 1, 1, 1, 1]
    assert list(p.ops.h.values) == [0, 1, 1, 0, 1, 0, 0, 1]  # x+y+z mod 2
    z = pipelines["Z3A"]
    assert list(z.ops.h.values) == [(x - y + z) % 3 for x in range(3) for y in range(3) for z in range(3)]


def test_condition_matrix_recorded(pipelines):
    p = pipelines["RPS"]
    ok, matrix, first = unified_conditions(p.alg, p.edges, p.ops.f, p.ops.g, p.ops.h)
    assert ok and first is None
    assert all(matrix.values())
    assert len(matrix) == 3 * len(p.edges)


def test_enforce_identities_noop_when_already_good(pipelines):
    for name in ("S2", "A2", "M2"):
        p = pipelines[name]
        again = enforce_identities(p.ops, p.alg)
        assert np.array_equal(again.f.values, p.ops.f.values)
        assert np.array_equal(again.h.values, p.ops.h.values)
        assert check_identities(again)


def test_enforce_identities_period_two():
    # f(0,-) swaps 1 and 2: iterating the squared map restores absorption
    vals = [0, 2, 1, 1, 1, 1, 2, 2, 2]
    f = table(vals, 2, 3)
    alg = Algebra("period2", 3, [f])
    ops = UnifiedOps(f=f, g=projection(3, 3, 0), h=projection(3, 3, 0), edges=(), provenance={})
    assert not check_identities(ops)
    fixed = enforce_identities(ops, alg)
    assert check_identities(fixed)
    t = fixed.f.table()
    x, y = np.indices((3, 3))
    assert np.array_equal(t[x, t[x, y]], t[x, y])


def test_good_f_examples(pipelines):
    assert list(pipelines["S2"].fprime.values) == [0, 1, 1, 1]
    assert list(pipelines["M2"].fprime.values) == [0, 0, 1, 1]  # vacuously good
    rps = pipelines["RPS"]
    t = rps.fprime.table()
    for a in range(3):
        for b in range(3):
            c = t[a, b]
            assert c == a or (t[a, c] == c and t[c, a] == c)


def test_thin_semilattice_edges(pipelines):
    assert [(t.src, t.dst) for t in thin_semilattice_edges(pipelines["S2"].alg, pipelines["S2"].fprime)] == [(0, 1)]
    assert thin_semilattice_edges(pipelines["M2"].alg, pipelines["M2"].fprime) == []
    rps = pipelines["RPS"]
    assert {(t.src, t.dst) for t in thin_semilattice_edges(rps.alg, rps.fprime)} == {(0, 1), (1, 2), (2, 0)}


def test_find_thin_majority(pipelines):
    p = pipelines["M2"]
    e = p.graph.edge(0, 1)
    thin = find_thin_majority(p.alg, e, p.ops)
    assert isinstance(thin, ThinEdge)
    assert (thin.src, thin.dst) == (0, 1)
    assert thin.witness(0, 1, 1) == 1 and thin.witness(1, 0, 1) == 1 and thin.witness(1, 1, 0) == 1
    # symmetric orientation
    rev = is_thin_majority(p.alg, 1, 0, p.ops)
    assert isinstance(rev, ThinEdge)
    # non-majority edge: absent by contract
    a2 = pipelines["A2"]
    assert find_thin_majority(a2.alg, a2.graph.edge(0, 1), a2.ops) is None


def test_find_thin_affine(pipelines):
    a2 = pipelines["A2"]
    thin = find_thin_affine(a2.alg, a2.graph.edge(0, 1), a2.ops)
    assert isinstance(thin, ThinEdge)
    assert thin.witness(1, 0, 0) == 1 and thin.witness(0, 0, 1) == 1
    z3 = pipelines["Z3A"]
    thin3 = find_thin_affine(z3.alg, z3.graph.edge(0, 1), z3.ops)
    assert isinstance(thin3, ThinEdge)
    assert thin3.witness(1, 0, 0) == 1 and thin3.witness(0, 0, 1) == 1
    s2 = pipelines["S2"]
    assert find_thin_affine(s2.alg, s2.graph.edge(0, 1), s2.ops) is None


def test_all_thin_edges_fixtures(pipelines):
    m2 = pipelines["M2"]
    assert {(t.kind, t.src, t.dst) for t in m2.thin} == {(MAJORITY, 0, 1), (MAJORITY, 1, 0)}
    a2 = pipelines["A2"]
    assert {(t.kind, t.src, t.dst) for t in a2.thin} == {(AFFINE, 0, 1), (AFFINE, 1, 0)}
    z3 = pipelines["Z3A"]
    assert {(t.src, t.dst) for t in z3.thin} == {(a, b) for a in range(3) for b in range(3) if a != b}


def test_witness_majority_triple(ternary_pipelines):
    m2 = ternary_pipelines["M2t"]
    arcs = {(t.src, t.dst): t for t in m2.thin if t.kind == MAJORITY}
    t = witness_majority_triple(arcs[(0, 1)], arcs[(0, 1)], arcs[(0, 1)])
    assert t is not UNKNOWN
    t2 = witness_majority_triple(arcs[(0, 1)], arcs[(1, 0)], arcs[(0, 1)])
    assert t2 is not UNKNOWN
    with pytest.raises(AlgebraError, match="majority"):
        a2 = ternary_pipelines["A2t"]
        aff = [x for x in a2.thin if x.kind == AFFINE][0]
        witness_majority_triple(aff, arcs[(0, 1)], arcs[(0, 1)])


def test_witness_mixed_kinds(ternary_pipelines):
    m2 = ternary_pipelines["M2t"]
    a2 = ternary_pipelines["A2t"]
    s2 = ternary_pipelines["S2t"]
    z3 = ternary_pipelines["Z3At"]
    maj = [t for t in m2.thin if t.kind == MAJORITY and (t.src, t.dst) == (0, 1)][0]
    aff = [t for t in a2.thin if t.kind == AFFINE and (t.src, t.dst) == (0, 1)][0]
    aff3 = [t for t in z3.thin if t.kind == AFFINE and (t.src, t.dst) == (0, 1)][0]
    sl = [t for t in s2.thin if t.kind == SEMILATTICE][0]

    assert witness_mixed("majority-semilattice", maj, sl) is not UNKNOWN
    assert witness_mixed("affine-affine", aff, aff3) is not UNKNOWN
    assert witness_mixed("affine-semilattice", aff, sl) is not UNKNOWN
    assert witness_mixed("affine-majority", aff3, maj) is not UNKNOWN
    with pytest.raises(AlgebraError, match="kinds"):
        witness_mixed("affine-majority", maj, aff)
    with pytest.raises(AlgebraError, match="unknown mixed witness kind"):
        witness_mixed("semilattice-semilattice", sl, sl)
    with pytest.raises(AlgebraError, match="identical signatures"):
        s2bin = pipelines_unused = None
        from algraph.fixtures import S2
        from algraph.edges import edge_graph
        from algraph.thin import enforce_identities as ei, synth_unified as su, good_f as gf
        alg = S2()
        g = edge_graph(alg)
        ops = ei(su(alg, g.edge_list()), alg)
        fp = gf(alg, ops)
        sl_bin = thin_semilattice_edges(alg, fp)[0]
        witness_mixed("majority-semilattice", maj, sl_bin)


def test_verify_thick_thin(pipelines):
    for name in ("S2", "RPS", "S3chain"):
        p = pipelines[name]
        assert verify_thick_thin(p.alg, p.edges, p.fprime) == []


def test_witness_tables_reevaluate_exactly(pipelines):
    for name in ("M2", "A2", "Z3A"):
        p = pipelines[name]
        for t in p.thin:
            if t.witness is None:
                continue
            if t.kind == MAJORITY:
                b, a = t.dst, t.src
                assert t.witness(a, b, b) == b
                assert t.witness(b, a, b) == b
                assert t.witness(b, b, a) == b
            if t.kind == AFFINE:
                b, a = t.dst, t.src
                assert t.witness(b, a, a) == b
                assert t.witness(a, a, b) == b
