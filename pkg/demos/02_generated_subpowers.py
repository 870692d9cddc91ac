#!/usr/bin/env python3
# Generated subuniverses of powers A^k: the closure engine.
#
# Everything else in the package reduces to questions about subsets of
# A^k generated by a few tuples: membership answers "is there a term with
# this behavior", and the recorded derivations turn membership into an
# explicit witness term.

from algraph import (
    ClosureBudget,
    UNKNOWN,
    extract_term,
    generate_subuniverse,
    member_with_witness,
    term_slice,
)
from algraph.fixtures import A2, M2, S2, Z3A

s2 = S2()

# Closure of {(0,1),(1,0)} inside S2^2: the join adds (1,1).
su = generate_subuniverse(s2, 2, [(0, 1), (1, 0)])
print("closure:", sorted(su.as_set()), su.status)

# Membership comes with a witness derivation; extract it as a term.
found, idx = member_with_witness(su, (1, 1))
term = extract_term(su, idx)
print("witness for (1,1):", term)        # (join x0 x1)

# (0,0) is definitively absent because the closure is complete.
print("(0,0) present?", member_with_witness(su, (0, 0))[0])

# Budgets cap the closure; absence then degrades to UNKNOWN, not False.
capped = generate_subuniverse(Z3A(), 1, [(0,), (1,)], ClosureBudget(max_elements=2))
print("capped status:", capped.status)
print("(2,) under cap:", member_with_witness(capped, (2,))[0])   # UNKNOWN

# Term slices: every k-ary term operation, computed as one closure in
# A^(n^k) generated by the projection columns.
tables, status = term_slice(M2(), 2)
print("binary terms of the majority algebra:", len(tables), status)   # 2 projections
tables, _ = term_slice(S2(), 2)
print("binary terms of the semilattice:", [list(map(int, t.values)) for t in tables])
tables, _ = term_slice(A2(), 3)
print("ternary terms of the minority algebra:", len(tables))          # x, y, z, x+y+z
