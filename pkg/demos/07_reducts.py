#!/usr/bin/env python3
# Keeping a thick edge as a subalgebra: reducts from preserving operations.
#
# The union of the two blocks of an edge's minimal witnessing congruence
# is generally not closed under the basic operations.  Restricting to the
# binary and ternary term operations that do preserve it yields a reduct
# that still has no degenerate (all-projections) divisor, and the
# semilattice / semilattice+strict-majority connectivity of the edge graph
# survives the restriction.

import itertools

from algraph import (
    build_reduct,
    edge_graph,
    generate_subuniverse,
    omits_type1,
    thick_edge_subset,
    verify_reduct_claims,
)
from algraph.fixtures import RPS, S3chain

s3 = S3chain()
graph = edge_graph(s3)
edge = graph.edge(0, 1)
subset = thick_edge_subset(s3, edge)
print("thick edge subset:", subset.elements)

red = build_reduct(s3, subset)
print("reduct operations:", [f"{op.name}/{op.arity}" for op in red.algebra.ops])

# Every reduct operation maps the subset into itself.
for op in red.algebra.ops:
    vals = {op(*args) for args in __import__("itertools").product(subset.elements, repeat=op.arity)}
    assert vals <= set(subset.elements)

print("claims:", verify_reduct_claims(s3, red, base_graph=graph))

# Subuniverse generation can only shrink in the reduct.
rps = RPS()
g2 = edge_graph(rps)
red2 = build_reduct(rps, thick_edge_subset(rps, g2.edge(0, 1)))
for gens in ([(0,), (1,)], [(0,), (2,)]):
    old = generate_subuniverse(rps, 1, gens).as_set()
    new = generate_subuniverse(red2.algebra, 1, gens).as_set()
    print(f"Sg{gens} base={sorted(old)} reduct={sorted(new)}")
    assert new <= old

print("reduct of RPS still omits type 1:", omits_type1(red2.algebra))
