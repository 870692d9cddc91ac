#!/usr/bin/env python3
# Finite idempotent algebras as operation tables.
#
# An algebra is a universe {0..n-1} plus a list of finitary operations,
# each stored as a flat value array in row-major order with the leftmost
# argument most significant.  Idempotency (f(x,..,x) = x) is enforced at
# construction; everything downstream depends on it.

from algraph import (
    App,
    Var,
    evaluate_term,
    parse_algebra,
    product_algebra,
    quotient_algebra,
    serialize_algebra,
    subalgebra_induced,
)
from algraph.congruence import Partition
from algraph.fixtures import RPS, S2, S3chain, Z3A

# The .alg text format: name, size, then one table per operation.
text = """
# the two-element join semilattice
algebra S2
size 2
op join 2
0 1 1 1
"""
s2 = parse_algebra(text)
print(s2)                      # Algebra('S2', size=2, ops=[join/2])
print(s2.op("join")(0, 1))     # 1

# Serialization round-trips byte-identically.
assert parse_algebra(serialize_algebra(s2)).signature() == s2.signature()

# Terms are variables and applications; evaluation is structural.
t = App("join", (Var(0), App("join", (Var(0), Var(1)))))
print(t, "=", evaluate_term(s2, t, {0: 0, 1: 1}))   # (join x0 (join x0 x1)) = 1

# Idempotency makes every term idempotent too.
assert all(evaluate_term(s2, t, {0: c, 1: c}) == c for c in range(2))

# Subalgebras: rock-paper-scissors restricted to {0,1} is a semilattice.
rps = RPS()
sub, carrier = subalgebra_induced(rps, {0, 1})
print("RPS on {0,1}:", list(sub.ops[0].values))     # [0, 1, 1, 1]

# Quotients: the 3-chain modulo {{0,1},{2}} collapses to S2.
s3 = S3chain()
theta = Partition.from_blocks(3, [[0, 1], [2]])
q, block_map = quotient_algebra(s3, theta)
print("chain / {{0,1},{2}}:", list(map(int, q.ops[0].values)), "blocks:", block_map)

# Products act coordinatewise; the universe is mixed-radix encoded.
p = product_algebra([s2, s2])
print("S2 x S2 size:", p.size, " (0,1) v (1,0) ->", p.ops[0](1, 2))  # 3 = (1,1)

# The affine fixture: x - y + z mod 3 is the only basic operation.
z3 = Z3A()
print("Z3A mal(0,1,2) =", z3.op("mal")(0, 1, 2))    # 1
