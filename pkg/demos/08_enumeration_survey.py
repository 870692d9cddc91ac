#!/usr/bin/env python3
# Surveying every small idempotent algebra of a fixed signature.
#
# The diagonal of an idempotent table is forced, so a signature with one
# binary operation has n^(n^2 - n) tables: 4 at size 2, 729 at size 3.
# Each algebra without an all-projections divisor goes through the
# structural suites; the expectation is zero failures everywhere.
#
# The full size-3 run takes a minute or two; this survey keeps it short
# with --limit-style slicing (edit RANGE to sweep everything).

import time

from algraph import enumerate_and_verify, idempotent_algebra, omits_type1, run_suite

# The size-2 binary landscape is tiny: two projections (degenerate) and
# the two semilattices (meet-like and join-like).
agg = enumerate_and_verify(2, "binary", ("connectedness", "uniform", "thin"))
print("size 2, one binary op:", agg["counts"])

# A slice of the size-3 landscape.
RANGE = 120
suites = ("connectedness", "uniform", "identities", "good-op", "thin", "as-connectivity")
t0 = time.time()
agg = enumerate_and_verify(3, "binary", suites, limit=RANGE)
print(f"size 3, first {RANGE} tables:", agg["counts"], f"({time.time()-t0:.1f}s)")

# Individual algebras are addressable by their enumeration index.
alg = idempotent_algebra(3, "binary", 17)
print(alg.name, "omits type 1:", omits_type1(alg))
for rep in run_suite(alg, ("connectedness", "as-connectivity")):
    print("  ", rep.theorem, rep.status)

# The 4-ary term search and the divisor test decide the same property;
# the divisor test is the fast gate, the search provides the witness view.
from algraph import has_siggers_term

alg_yes = idempotent_algebra(3, "binary", 0)
print(alg_yes.name, "search:", has_siggers_term(alg_yes), "divisor gate:", omits_type1(alg_yes))
