import random

import numpy as np
import pytest

from algraph.core import UNKNOWN, Algebra, AlgebraError, OpTable, Var, evaluate_term_columns
from algraph.subpower import (
    ClosureBudget,
    extract_term,
    generate_subuniverse,
    member_with_witness,
    term_slice,
)
from oracles import brute_term_tables, naive_close


def test_s2_square_closure(algs):
    su = generate_subuniverse(algs["S2"], 2, [(0, 1), (1, 0)])
    assert su.as_set() == {(0, 1), (1, 0), (1, 1)}
    assert su.status == "complete"


def test_constant_generator_stays_alone(algs):
    for alg in algs.values():
        su = generate_subuniverse(alg, 3, [(1, 1, 1)])
        assert su.as_set() == {(1, 1, 1)}


def test_z3a_pair_generates_all(algs):
    su = generate_subuniverse(algs["Z3A"], 1, [(0,), (1,)])
    assert su.as_set() == {(0,), (1,), (2,)}


def test_membership_three_valued(algs):
    su = generate_subuniverse(algs["S2"], 2, [(0, 1), (1, 0)])
    found, idx = member_with_witness(su, (1, 1))
    assert found is True and su.element(idx) == (1, 1)
    found, idx = member_with_witness(su, (0, 0))
    assert found is False and idx is None
    capped = generate_subuniverse(
        algs["Z3A"], 1, [(0,), (1,)], ClosureBudget(max_elements=2)
    )
    assert capped.status == "capped"
    found, _ = member_with_witness(capped, (2,))
    assert found is UNKNOWN
    with pytest.raises(AlgebraError, match="length"):
        member_with_witness(su, (1, 1, 1))


def test_extract_term_generator_is_variable(algs):
    su = generate_subuniverse(algs["S2"], 2, [(0, 1), (1, 0)])
    assert extract_term(su, 0) == Var(0)
    assert extract_term(su, 1) == Var(1)


def test_extract_term_reevaluates(algs):
    for name in ("S2", "RPS", "Z3A", "S3chain"):
        alg = algs[name]
        su = generate_subuniverse(alg, 2, [(0, 1), (1, 0)])
        cols = np.asarray(su.generators, dtype=np.uint8)
        for i in range(len(su)):
            term = extract_term(su, i)
            got = evaluate_term_columns(alg, term, cols)
            assert tuple(int(v) for v in got) == su.element(i)


def test_term_slice_oracles(algs):
    tables, status = term_slice(algs["M2"], 2)
    assert status == "complete"
    assert {tuple(int(v) for v in t.values) for t in tables} == brute_term_tables(algs["M2"], 2)
    assert len(tables) == 2  # projections only

    tables, _ = term_slice(algs["S2"], 2)
    assert {tuple(int(v) for v in t.values) for t in tables} == {
        (0, 0, 1, 1),
        (0, 1, 0, 1),
        (0, 1, 1, 1),
    }

    tables, _ = term_slice(algs["A2"], 3)
    assert len(tables) == 4  # x, y, z and x+y+z
    assert {tuple(int(v) for v in t.values) for t in tables} == brute_term_tables(algs["A2"], 3)


def test_term_slice_guard(algs):
    with pytest.raises(AlgebraError, match="k in"):
        term_slice(algs["S2"], 4)


def test_determinism(algs):
    a = generate_subuniverse(algs["RPS"], 2, [(0, 1), (1, 0), (2, 2)])
    b = generate_subuniverse(algs["RPS"], 2, [(0, 1), (1, 0), (2, 2)])
    assert list(a.elements()) == list(b.elements())
    assert a.derivations == b.derivations


def test_monotone_in_generators(algs):
    alg = algs["S3chain"]
    small = generate_subuniverse(alg, 2, [(0, 1)])
    big = generate_subuniverse(alg, 2, [(0, 1), (2, 0)])
    assert small.as_set() <= big.as_set()


def test_oracle_equivalence_randomized():
    rng = random.Random(20240817)
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
        gens = [
            tuple(rng.randrange(n) for _ in range(k))
            for _ in range(rng.randint(1, 3))
        ]
        su = generate_subuniverse(alg, k, gens)
        assert su.status == "complete"
        assert su.as_set() == naive_close(alg, k, gens)


def test_budget_validation():
    with pytest.raises(AlgebraError):
        ClosureBudget(max_elements=0)
    with pytest.raises(AlgebraError):
        ClosureBudget(max_rounds=0)
