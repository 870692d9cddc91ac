"""Independent brute-force oracles for the test suite.

Everything here is deliberately written with plain Python sets and loops,
sharing no code path with the package's closure engine, so that agreement
between the two is meaningful.
"""

import itertools


def naive_close(alg, k, gens):
    """Fixpoint closure of tuples under all operations, as a set."""
    cur = {tuple(g) for g in gens}
    changed = True
    while changed:
        changed = False
        new = set()
        for op in alg.ops:
            for args in itertools.product(sorted(cur), repeat=op.arity):
                val = tuple(op(*[a[j] for a in args]) for j in range(k))
                if val not in cur:
                    new.add(val)
        if new:
            cur |= new
            changed = True
    return cur


def brute_term_tables(alg, k):
    """All k-ary term operations as value tuples, by composing tables.

    Starts from the projections and repeatedly substitutes known tables
    into every basic operation until nothing new appears.
    """
    n = alg.size
    args = list(itertools.product(range(n), repeat=k))
    tables = set()
    for j in range(k):
        tables.add(tuple(a[j] for a in args))
    changed = True
    while changed:
        changed = False
        for op in alg.ops:
            for combo in itertools.product(sorted(tables), repeat=op.arity):
                new = tuple(
                    op(*[combo[i][pos] for i in range(op.arity)])
                    for pos in range(len(args))
                )
                if new not in tables:
                    tables.add(new)
                    changed = True
    return tables


def _partitions(n):
    """All partitions of {0..n-1} as lists of sorted blocks."""
    if n == 0:
        return [[]]
    out = []

    def rec(i, blocks):
        if i == n:
            out.append([sorted(b) for b in blocks])
            return
        for b in blocks:
            b.append(i)
            rec(i + 1, blocks)
            b.pop()
        blocks.append([i])
        rec(i + 1, blocks)
        blocks.pop()

    rec(1, [[0]])
    return out


def brute_congruences(alg):
    """All congruences by filtering every partition with the direct
    definition: blockwise-equal argument tuples have blockwise-equal values."""
    n = alg.size
    out = []
    for blocks in _partitions(n):
        bid = {}
        for b in blocks:
            for x in b:
                bid[x] = min(b)
        ok = True
        for op in alg.ops:
            for a1 in itertools.product(range(n), repeat=op.arity):
                for a2 in itertools.product(range(n), repeat=op.arity):
                    if all(bid[x] == bid[y] for x, y in zip(a1, a2)):
                        if bid[op(*a1)] != bid[op(*a2)]:
                            ok = False
                            break
                if not ok:
                    break
            if not ok:
                break
        if ok:
            out.append(frozenset(frozenset(b) for b in blocks))
    return set(out)


def table_is_semilattice_on(table2, n, a, b):
    """Is the binary value-tuple a semilattice operation on {a, b}?"""
    def at(x, y):
        return table2[x * n + y]

    return (
        at(a, b) == at(b, a)
        and at(a, b) in (a, b)
        and at(a, a) == a
        and at(b, b) == b
    )


def table_is_majority_on(table3, n, a, b):
    def at(x, y, z):
        return table3[(x * n + y) * n + z]

    for x, y in ((a, b), (b, a)):
        if not (at(x, x, y) == x and at(x, y, x) == x and at(y, x, x) == x):
            return False
    return True
