"""Unified witness operations and thin (directed) edges.

``synth_unified`` produces a single binary f and ternary g, h behaving
correctly on every strict edge at once: f is semilattice on semilattice
edges and the first projection on the others; g is majority on majority
edges, first projection on affine ones and x(yz) on semilattice ones;
h is affine on affine quotients, first projection on majority edges and
x(yz) on semilattice ones.  The constructive merge recurrences are tried
first; whenever a merge step's assumptions fail the search falls back to
filtering the (capped) binary/ternary term slices against the same
per-edge condition matrix, which is the actual contract.

Thin edges refine thick ones to ordered pairs of elements with witness
operations acting on the elements themselves: a <= b when f(a,b)=f(b,a)=b;
majority and affine thin edges additionally require the generated-subalgebra
conditions and an explicit witness found by subpower membership.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import (
    UNKNOWN,
    Algebra,
    AlgebraError,
    OpTable,
    TermExpr,
    VerificationError,
    product_algebra,
    product_encode,
    term_table,
)
from .edges import (
    AFFINE,
    EDGE_TYPES,
    MAJORITY,
    SEMILATTICE,
    STRICT_AFFINE,
    STRICT_MAJORITY,
    STRICT_SEMILATTICE,
    EdgeInfo,
    classify_pair,
)
from .subpower import (
    ClosureBudget,
    DEFAULT_BUDGET,
    extract_term,
    generate_subuniverse,
    member_with_witness,
    term_slice,
)


class SynthesisError(VerificationError):
    """No operation met the per-edge condition matrix within the budget."""


@dataclass(frozen=True)
class UnifiedOps:
    """The unified f, g, h with the edges they were verified against."""

    f: OpTable
    g: OpTable
    h: OpTable
    edges: tuple[EdgeInfo, ...]
    provenance: dict

    def strict_edges(self, label: str) -> list[EdgeInfo]:
        return [e for e in self.edges if e.strict == label]


@dataclass(frozen=True)
class ThinEdge:
    """Directed edge with element-level witnesses."""

    alg: Algebra
    kind: str  # semilattice | majority | affine
    src: int
    dst: int
    witness: OpTable | None
    witness_term: TermExpr | None
    theta_blocks: tuple[tuple[int, ...], ...] | None


# ---------------------------------------------------------------------------
# Per-edge condition matrix


def _blocks(e: EdgeInfo, kind: str) -> tuple[list[int], list[int]]:
    return e.block_of(kind, e.a), e.block_of(kind, e.b)


def _values(table: OpTable, *argsets: Sequence[int]) -> set[int]:
    out = set()
    for args in np.stack(np.meshgrid(*[np.asarray(s) for s in argsets], indexing="ij")).reshape(len(argsets), -1).T:
        out.add(table(*[int(v) for v in args]))
    return out


def cond_f_semilattice(f: OpTable, e: EdgeInfo) -> bool:
    """f collapses the two theta blocks commutatively into one of them."""
    ablk, bblk = _blocks(e, SEMILATTICE)
    vals = _values(f, ablk, bblk) | _values(f, bblk, ablk)
    return vals <= set(ablk) or vals <= set(bblk)


def _cond_proj1(table: OpTable, ablk: list[int], bblk: list[int]) -> bool:
    """table acts as the first projection on the two-block quotient set."""
    sa, sb = set(ablk), set(bblk)
    arity = table.arity
    for first, target in ((ablk, sa), (bblk, sb)):
        rest = [ablk + bblk] * (arity - 1)
        if not _values(table, first, *rest) <= target:
            return False
    return True


def cond_f_proj1(f: OpTable, e: EdgeInfo) -> bool:
    kind = MAJORITY if e.strict == STRICT_MAJORITY else AFFINE
    ablk, bblk = _blocks(e, kind)
    return _cond_proj1(f, ablk, bblk)


def cond_g_majority(g: OpTable, e: EdgeInfo) -> bool:
    ablk, bblk = _blocks(e, MAJORITY)
    for one, two in ((ablk, bblk), (bblk, ablk)):
        target = set(two)
        if not _values(g, one, two, two) <= target:
            return False
        if not _values(g, two, one, two) <= target:
            return False
        if not _values(g, two, two, one) <= target:
            return False
    return True


def cond_proj1_on(table: OpTable, e: EdgeInfo, kind: str) -> bool:
    ablk, bblk = _blocks(e, kind)
    return _cond_proj1(table, ablk, bblk)


def _f_two_block_action(f: OpTable, ablk: list[int], bblk: list[int]):
    """f's action on the two-block set as a 2x2 block table, or None."""
    act = {}
    for x_set, xb in ((ablk, 0), (bblk, 1)):
        for y_set, yb in ((ablk, 0), (bblk, 1)):
            vals = _values(f, x_set, y_set)
            if vals <= set(ablk):
                act[(xb, yb)] = 0
            elif vals <= set(bblk):
                act[(xb, yb)] = 1
            else:
                return None
    return act


def cond_sl_composition(table: OpTable, f: OpTable, e: EdgeInfo) -> bool:
    """Ternary table equals x(yz) under f on the two-block quotient set."""
    ablk, bblk = _blocks(e, SEMILATTICE)
    act = _f_two_block_action(f, ablk, bblk)
    if act is None:
        return False
    blocks = (ablk, bblk)
    for xb in (0, 1):
        for yb in (0, 1):
            for zb in (0, 1):
                want = act[(xb, act[(yb, zb)])]
                vals = _values(table, blocks[xb], blocks[yb], blocks[zb])
                if not vals <= set(blocks[want]):
                    return False
    return True


def cond_h_affine(h: OpTable, e: EdgeInfo) -> bool:
    """h acts on the whole quotient as x-y+z of some certified group."""
    theta = e.theta[AFFINE]
    carrier = e.carrier
    loc = {x: i for i, x in enumerate(carrier)}
    reps = sorted(set(theta.block_id))
    qlab = {r: i for i, r in enumerate(reps)}
    bm = [qlab[theta.block_id[i]] for i in range(len(carrier))]
    q = len(reps)
    for cert in e.affine_certs:
        m = cert.maltsev
        ok = True
        for x in carrier:
            for y in carrier:
                for z in carrier:
                    v = h(x, y, z)
                    if v not in loc:
                        return False
                    if bm[loc[v]] != m(bm[loc[x]], bm[loc[y]], bm[loc[z]]):
                        ok = False
                        break
                if not ok:
                    break
            if not ok:
                break
        if ok:
            return True
    return False


_COND_NAMES = {
    (STRICT_SEMILATTICE, "f"): "f-semilattice",
    (STRICT_MAJORITY, "f"): "f-proj1",
    (STRICT_AFFINE, "f"): "f-proj1",
    (STRICT_SEMILATTICE, "g"): "g-sl-composition",
    (STRICT_MAJORITY, "g"): "g-majority",
    (STRICT_AFFINE, "g"): "g-proj1",
    (STRICT_SEMILATTICE, "h"): "h-sl-composition",
    (STRICT_MAJORITY, "h"): "h-proj1",
    (STRICT_AFFINE, "h"): "h-affine",
}


def _check_one(which: str, table: OpTable, f: OpTable | None, e: EdgeInfo) -> bool:
    if which == "f":
        if e.strict == STRICT_SEMILATTICE:
            return cond_f_semilattice(table, e)
        return cond_f_proj1(table, e)
    if which == "g":
        if e.strict == STRICT_SEMILATTICE:
            return cond_sl_composition(table, f, e)
        if e.strict == STRICT_MAJORITY:
            return cond_g_majority(table, e)
        return cond_proj1_on(table, e, AFFINE)
    if which == "h":
        if e.strict == STRICT_SEMILATTICE:
            return cond_sl_composition(table, f, e)
        if e.strict == STRICT_MAJORITY:
            return cond_proj1_on(table, e, MAJORITY)
        return cond_h_affine(table, e)
    raise AlgebraError(f"unknown condition family {which}")


def unified_conditions(alg: Algebra, edges: Sequence[EdgeInfo], f: OpTable, g: OpTable, h: OpTable):
    """Evaluate the whole condition matrix; returns (all_ok, matrix, first_failure)."""
    matrix = {}
    first_fail = None
    ok = True
    for e in edges:
        if e.strict is None:
            continue
        for which, table in (("f", f), ("g", g), ("h", h)):
            name = _COND_NAMES[(e.strict, which)]
            res = _check_one(which, table, f, e)
            matrix[((e.a, e.b), name)] = res
            if not res and first_fail is None:
                first_fail = ((e.a, e.b), name)
                ok = False
            ok = ok and res
    return ok, matrix, first_fail


# ---------------------------------------------------------------------------
# Table combinators used by the constructive merges


def compose_fold_f(outer: OpTable, inner: OpTable) -> OpTable:
    """x,y -> outer(inner(x,y), inner(y,x))."""
    n = outer.size
    t_in = inner.table()
    t_out = outer.table()
    vals = t_out[t_in, t_in.T]
    return OpTable("f", 2, n, vals.reshape(-1))


def binary_apply(f: OpTable, left: np.ndarray, right: np.ndarray) -> np.ndarray:
    return f.table()[left, right]


def projectionized(f: OpTable) -> OpTable:
    """x,y -> f(f(x,y), x)."""
    t = f.table()
    n = f.size
    x = np.arange(n)[:, None].repeat(n, axis=1)
    vals = t[t, x]
    return OpTable("f", 2, n, vals.reshape(-1))


def g_from_f(f: OpTable) -> OpTable:
    """x,y,z -> f(x, f(y,z)) as a ternary table."""
    n = f.size
    t = f.table()
    x, y, z = np.indices((n, n, n))
    vals = t[x, t[y, z]]
    return OpTable("g", 3, n, vals.reshape(-1))


def ternary_compose_outer(p: OpTable, gj: OpTable, gprev: OpTable) -> OpTable:
    """x,y,z -> p(gj(x,y,z), gprev(x,y,z))."""
    n = p.size
    a = gj.table()
    b = gprev.table()
    vals = p.table()[a, b]
    return OpTable("g", 3, n, vals.reshape(-1))


def permuted_ternary(g: OpTable, perm: tuple[int, int, int]) -> OpTable:
    cube = g.table()
    vals = np.transpose(cube, perm)
    return OpTable(g.name, 3, g.size, np.ascontiguousarray(vals).reshape(-1))


def g_doubleprime(g: OpTable) -> OpTable:
    """x,y,z -> g(x, g(y,x,y), g(z,z,x))."""
    n = g.size
    c = g.table()
    x, y, z = np.indices((n, n, n))
    vals = c[x, c[y, x, y], c[z, z, x]]
    return OpTable("g", 3, n, vals.reshape(-1))


def compose_with_f_sym(table: OpTable, f: OpTable) -> OpTable:
    """x,y,z -> table(f(x,f(y,z)), f(y,f(z,x)), f(z,f(x,y)))."""
    n = table.size
    tf = f.table()
    x, y, z = np.indices((n, n, n))
    u = tf[x, tf[y, z]]
    v = tf[y, tf[z, x]]
    w = tf[z, tf[x, y]]
    vals = table.table()[u, v, w]
    return OpTable(table.name, 3, n, vals.reshape(-1))


def hbar_from_g(h: OpTable, g: OpTable) -> OpTable:
    """x,y,z -> p(h(x,y,z), x) with p(x,y) = g(x,y,y)."""
    n = h.size
    gt = g.table()
    x = np.indices((n, n, n))[0]
    ht = h.table()
    vals = gt[ht, x, x]
    return OpTable("h", 3, n, vals.reshape(-1))


# ---------------------------------------------------------------------------
# Synthesis


def _proj_table(n: int, arity: int) -> OpTable:
    from .core import projection

    return projection(n, arity, 0, "p0")


def _witness_tables(alg: Algebra, edges, kind: str, arity: int) -> list[OpTable]:
    out = []
    seen = set()
    for e in edges:
        term = e.witnesses.get(kind)
        if term is None:
            continue
        t = term_table(alg, term, arity, name=kind[0])
        if t.key() not in seen:
            seen.add(t.key())
            out.append(t)
    return out


def _first_passing(candidates, check) -> OpTable | None:
    for t in candidates:
        if check(t):
            return t
    return None


def _synth_f(alg: Algebra, edges, budget: ClosureBudget):
    s_edges = [e for e in edges if e.strict == STRICT_SEMILATTICE]
    other = [e for e in edges if e.strict in (STRICT_MAJORITY, STRICT_AFFINE)]

    def check(t: OpTable) -> bool:
        return all(cond_f_semilattice(t, e) for e in s_edges) and all(
            cond_f_proj1(t, e) for e in other
        )

    candidates: list[OpTable] = []
    if not s_edges:
        candidates.append(_proj_table(alg.size, 2))
    wits = _witness_tables(alg, s_edges, SEMILATTICE, 2)
    candidates.extend(wits)
    # constructive merge: fold remaining witnesses over the current candidate
    if wits:
        cur = wits[0]
        for e in s_edges:
            if cond_f_semilattice(cur, e):
                continue
            wt = term_table(alg, e.witnesses[SEMILATTICE], 2)
            cur = compose_fold_f(wt, cur)
        candidates.append(cur)
        candidates.append(projectionized(cur))
    candidates.extend(projectionized(w) for w in wits)
    found = _first_passing(candidates, check)
    capped = False
    if found is None:
        tables, status = term_slice(alg, 2, budget)
        capped = status != "complete"
        found = _first_passing(tables, check)
    return found, check, capped


def _synth_g(alg: Algebra, edges, f: OpTable, budget: ClosureBudget):
    m_edges = [e for e in edges if e.strict == STRICT_MAJORITY]

    def check(t: OpTable) -> bool:
        return all(_check_one("g", t, f, e) for e in edges if e.strict)

    candidates: list[OpTable] = [g_from_f(f)]
    wits = _witness_tables(alg, m_edges, MAJORITY, 3)
    candidates.extend(wits)
    if wits:
        cur = wits[0]
        for e in m_edges:
            if cond_g_majority(cur, e):
                continue
            # permute arguments of cur so that (x,y,y) acts as first projection
            # on this edge, then merge with the edge's own witness
            ablk, bblk = _blocks(e, MAJORITY)
            p = None
            for perm in ((0, 1, 2), (1, 0, 2), (2, 1, 0), (1, 2, 0), (2, 0, 1), (0, 2, 1)):
                gp = permuted_ternary(cur, perm)
                pt = OpTable("p", 2, alg.size, gp.table()[
                    np.indices((alg.size, alg.size))[0],
                    np.indices((alg.size, alg.size))[1],
                    np.indices((alg.size, alg.size))[1],
                ].reshape(-1))
                if _cond_proj1(pt, ablk, bblk):
                    p = pt
                    break
            if p is None:
                continue
            wt = term_table(alg, e.witnesses[MAJORITY], 3)
            cur = ternary_compose_outer(p, wt, cur)
        candidates.append(cur)
        candidates.append(g_doubleprime(cur))
        candidates.append(compose_with_f_sym(g_doubleprime(cur), f))
        candidates.append(compose_with_f_sym(cur, f))
    candidates.extend(compose_with_f_sym(w, f) for w in wits)
    found = _first_passing(candidates, check)
    capped = False
    if found is None:
        tables, status = term_slice(alg, 3, budget)
        capped = status != "complete"
        found = _first_passing(tables, check)
    return found, check, capped


def _synth_h(alg: Algebra, edges, f: OpTable, g: OpTable, budget: ClosureBudget):
    a_edges = [e for e in edges if e.strict == STRICT_AFFINE]

    def check(t: OpTable) -> bool:
        return all(_check_one("h", t, f, e) for e in edges if e.strict)

    candidates: list[OpTable] = [g_from_f(f)]
    wits = _witness_tables(alg, a_edges, AFFINE, 3)
    candidates.extend(wits)
    for w in wits:
        candidates.append(hbar_from_g(w, g))
        candidates.append(compose_with_f_sym(hbar_from_g(w, g), f))
        candidates.append(compose_with_f_sym(w, f))
    found = _first_passing(candidates, check)
    capped = False
    if found is None:
        tables, status = term_slice(alg, 3, budget)
        capped = status != "complete"
        found = _first_passing(tables, check)
    return found, check, capped


def synth_unified(alg: Algebra, edges: Sequence[EdgeInfo], budget: ClosureBudget = DEFAULT_BUDGET) -> UnifiedOps:
    """Find f, g, h meeting the full condition matrix on the given edges.

    Constructive merges over the per-edge witnesses are tried before an
    exhaustive filter of the binary/ternary term slices.  Raises
    SynthesisError naming the first failing edge and condition when the
    matrix cannot be satisfied within the budget.
    """
    edges = tuple(e for e in edges if e.is_edge())
    f, f_check, f_capped = _synth_f(alg, edges, budget)
    if f is None:
        detail = _name_first_failure(alg, edges, "f", None)
        raise SynthesisError(
            f"no binary term operation satisfies the f-conditions"
            f"{' (slice capped)' if f_capped else ''}; first failure: {detail}"
        )
    g, g_check, g_capped = _synth_g(alg, edges, f, budget)
    if g is None:
        detail = _name_first_failure(alg, edges, "g", f)
        raise SynthesisError(
            f"no ternary term operation satisfies the g-conditions"
            f"{' (slice capped)' if g_capped else ''}; first failure: {detail}"
        )
    h, h_check, h_capped = _synth_h(alg, edges, f, g, budget)
    if h is None:
        detail = _name_first_failure(alg, edges, "h", f)
        raise SynthesisError(
            f"no ternary term operation satisfies the h-conditions"
            f"{' (slice capped)' if h_capped else ''}; first failure: {detail}"
        )
    ok, matrix, first_fail = unified_conditions(alg, edges, f, g, h)
    if not ok:
        raise SynthesisError(f"condition matrix failed after synthesis at {first_fail}")
    return UnifiedOps(
        f=f.renamed("f"), g=g.renamed("g"), h=h.renamed("h"), edges=edges, provenance=matrix
    )


def _name_first_failure(alg, edges, which, f):
    for e in edges:
        if e.strict is None:
            continue
        name = _COND_NAMES.get((e.strict, which))
        if name is not None:
            return ((e.a, e.b), name)
    return None


# ---------------------------------------------------------------------------
# Identity enforcement (iterate to idempotent unary power)


def _unary_idempotent_exponent(maps: np.ndarray) -> int:
    """Least N with t^N idempotent for every row map t of ``maps`` (n x n)."""
    n = maps.shape[1]

    def tail_and_period(row) -> tuple[int, int]:
        # functional graph of a single map on n points
        powers = [np.arange(n, dtype=np.uint8)]
        seen = {powers[0].tobytes(): 0}
        cur = powers[0]
        while True:
            cur = row[cur]
            key = cur.tobytes()
            if key in seen:
                mu = seen[key]
                lam = len(powers) - mu
                return mu, lam
            seen[key] = len(powers)
            powers.append(cur)

    mus, lams = [], []
    for row in maps:
        mu, lam = tail_and_period(row)
        mus.append(max(mu, 1))
        lams.append(lam)
    period = math.lcm(*lams) if lams else 1
    need = max(mus)
    steps = period * ((need + period - 1) // period)
    return max(steps, period)


def _iterate_map(row: np.ndarray, times: int) -> np.ndarray:
    out = np.arange(len(row), dtype=row.dtype)
    for _ in range(times):
        out = row[out]
    return out


def enforce_identities(ops: UnifiedOps, alg: Algebra) -> UnifiedOps:
    """Replace f, g, h by iterates satisfying the absorption identities

        f(x, f(x,y)) = f(x,y)
        g(x, g(x,y,y), g(x,y,y)) = g(x,y,y)
        h(h(x,y,y), y, y) = h(x,y,y)

    for all x, y, re-verifying the edge condition matrix afterwards.
    The iterate count is the least common multiple of the per-element
    periods of the associated unary maps.
    """
    n = alg.size

    ft = ops.f.table()
    nf = _unary_idempotent_exponent(ft)
    f_new_rows = np.stack([_iterate_map(ft[x], nf) for x in range(n)])
    f_new = OpTable("f", 2, n, f_new_rows.reshape(-1))

    gt = ops.g.table()
    g_maps = np.stack([gt[x][np.arange(n), np.arange(n)] for x in range(n)])
    ng = _unary_idempotent_exponent(g_maps)
    g_vals = gt.copy()
    for x in range(n):
        for _ in range(ng - 1):
            g_vals[x] = g_maps[x][g_vals[x]]
    g_new = OpTable("g", 3, n, g_vals.reshape(-1))

    ht = ops.h.table()
    h_maps = np.stack([ht[:, y, y] for y in range(n)])
    nh = _unary_idempotent_exponent(h_maps)
    h_vals = np.empty_like(ht)
    for y in range(n):
        spow = _iterate_map(h_maps[y], nh - 1)
        h_vals[:, y, :] = ht[spow, y, :]
    h_new = OpTable("h", 3, n, h_vals.reshape(-1))

    _assert_identities(f_new, g_new, h_new)
    ok, matrix, first_fail = unified_conditions(alg, ops.edges, f_new, g_new, h_new)
    if not ok:
        raise VerificationError(
            f"edge conditions broken by identity enforcement at {first_fail}"
        )
    return UnifiedOps(f=f_new, g=g_new, h=h_new, edges=ops.edges, provenance=matrix)


def _assert_identities(f: OpTable, g: OpTable, h: OpTable) -> None:
    n = f.size
    ft, gt, htb = f.table(), g.table(), h.table()
    x, y = np.indices((n, n))
    if not np.array_equal(ft[x, ft[x, y]], ft[x, y]):
        raise VerificationError("identity f(x,f(x,y)) = f(x,y) does not hold")
    gxyy = gt[x, y, y]
    if not np.array_equal(gt[x, gxyy, gxyy], gxyy):
        raise VerificationError("identity g(x,g(x,y,y),g(x,y,y)) = g(x,y,y) does not hold")
    hxyy = htb[x, y, y]
    if not np.array_equal(htb[hxyy, y, y], hxyy):
        raise VerificationError("identity h(h(x,y,y),y,y) = h(x,y,y) does not hold")


def check_identities(ops: UnifiedOps) -> bool:
    try:
        _assert_identities(ops.f, ops.g, ops.h)
        return True
    except VerificationError:
        return False


# ---------------------------------------------------------------------------
# The good binary operation


def good_f(alg: Algebra, ops: UnifiedOps, budget: ClosureBudget = DEFAULT_BUDGET) -> OpTable:
    """Improve f so that f(a,b) = a or (a, f(a,b)) is a thin semilattice edge.

    Iterates x,y -> f(x, f(f_i(x,y), x)) until the condition verifies,
    keeping the semilattice behavior on every thick edge; if the iteration
    does not stabilize, the binary term slice is searched instead.
    """
    s_edges = ops.strict_edges(STRICT_SEMILATTICE)
    others = [e for e in ops.edges if e.strict in (STRICT_MAJORITY, STRICT_AFFINE)]

    def good(table: OpTable) -> bool:
        t = table.table()
        for a in range(alg.size):
            for b in range(alg.size):
                c = t[a, b]
                if c == a:
                    continue
                if t[a, c] != c or t[c, a] != c:
                    return False
        return True

    def keeps_matrix(table: OpTable) -> bool:
        return all(cond_f_semilattice(table, e) for e in s_edges) and all(
            cond_f_proj1(table, e) for e in others
        )

    def idempotent_rows(table: OpTable) -> bool:
        t = table.table()
        x, y = np.indices((alg.size, alg.size))
        return bool(np.array_equal(t[x, t[x, y]], t[x, y]))

    cur = ops.f
    f0 = ops.f.table()
    for _ in range(alg.size * alg.size + 2):
        if good(cur) and keeps_matrix(cur) and idempotent_rows(cur):
            return cur.renamed("f'")
        t = cur.table()
        x = np.indices((alg.size, alg.size))[0]
        vals = f0[x, f0[t, x]]
        nxt = OpTable("f'", 2, alg.size, vals.reshape(-1))
        if np.array_equal(nxt.values, cur.values):
            break
        cur = nxt
    if good(cur) and keeps_matrix(cur) and idempotent_rows(cur):
        return cur.renamed("f'")
    tables, status = term_slice(alg, 2, budget)
    for t in tables:
        if good(t) and keeps_matrix(t) and idempotent_rows(t):
            return t.renamed("f'")
    raise SynthesisError(
        "no binary term operation is good for thin semilattice edges"
        + (" (slice capped)" if status != "complete" else "")
    )


# ---------------------------------------------------------------------------
# Thin edges


def thin_semilattice_edges(alg: Algebra, fprime: OpTable) -> list[ThinEdge]:
    """All ordered pairs a -> b with f'(a,b) = f'(b,a) = b."""
    out = []
    t = fprime.table()
    for a in range(alg.size):
        for b in range(alg.size):
            if a != b and t[a, b] == b and t[b, a] == b:
                out.append(
                    ThinEdge(alg, SEMILATTICE, a, b, None, None, None)
                )
    return out


def _theta_blocks_tuple(e: EdgeInfo, kind: str) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(b) for b in e.theta_blocks(kind))


def is_thin_majority(
    alg: Algebra,
    a: int,
    b: int,
    ops: UnifiedOps,
    budget: ClosureBudget = DEFAULT_BUDGET,
    info: EdgeInfo | None = None,
):
    """ThinEdge if (a, b) is a thin majority edge, None if not, UNKNOWN if capped.

    Conditions: (a) the pair is a majority edge with minimal witnessing
    congruence theta; (b) every c in b's theta-block satisfies
    b in Sg{a, c}; (c) g(a,b,b) = b for the unified g; (d) a ternary term
    g' with g'(a,b,b) = g'(b,a,b) = g'(b,b,a) = b, found by membership.
    """
    e = info if info is not None else classify_pair(alg, a, b, budget)
    if MAJORITY not in e.types:
        return UNKNOWN if MAJORITY in e.unknown_types else None
    if ops.g(a, b, b) != b:
        return None
    theta_b = set(e.block_of(MAJORITY, b))
    for c in sorted(theta_b):
        su = generate_subuniverse(alg, 1, [(a,), (c,)], budget=budget, derivations=False, target=(b,))
        found, _ = member_with_witness(su, (b,))
        if found is UNKNOWN:
            return UNKNOWN
        if found is False:
            return None
    target = (b, b, b)
    su = generate_subuniverse(
        alg, 3, [(a, b, b), (b, a, b), (b, b, a)], budget=budget, target=target
    )
    found, idx = member_with_witness(su, target)
    if found is UNKNOWN:
        return UNKNOWN
    if found is False:
        return None
    term = extract_term(su, idx)
    table = term_table(alg, term, 3, name="g'")
    if not (table(a, b, b) == b and table(b, a, b) == b and table(b, b, a) == b):
        raise VerificationError("majority thin-edge witness fails its defining equalities")
    return ThinEdge(alg, MAJORITY, a, b, table, term, _theta_blocks_tuple(e, MAJORITY))


def is_thin_affine(
    alg: Algebra,
    a: int,
    b: int,
    ops: UnifiedOps,
    budget: ClosureBudget = DEFAULT_BUDGET,
    info: EdgeInfo | None = None,
):
    """ThinEdge if (a, b) is a thin affine edge, None/UNKNOWN otherwise.

    Conditions mirror the majority case with h: (c) h(b,a,a) = b and
    (d) a ternary h' with h'(b,a,a) = h'(a,a,b) = b, found as membership of
    (b,b) in the subpower generated by (b,a), (a,a), (a,b).
    """
    e = info if info is not None else classify_pair(alg, a, b, budget)
    if AFFINE not in e.types:
        return UNKNOWN if AFFINE in e.unknown_types else None
    if ops.h(b, a, a) != b:
        return None
    theta_b = set(e.block_of(AFFINE, b))
    for c in sorted(theta_b):
        su = generate_subuniverse(alg, 1, [(a,), (c,)], budget=budget, derivations=False, target=(b,))
        found, _ = member_with_witness(su, (b,))
        if found is UNKNOWN:
            return UNKNOWN
        if found is False:
            return None
    target = (b, b)
    su = generate_subuniverse(
        alg, 2, [(b, a), (a, a), (a, b)], budget=budget, target=target
    )
    found, idx = member_with_witness(su, target)
    if found is UNKNOWN:
        return UNKNOWN
    if found is False:
        return None
    term = extract_term(su, idx)
    table = term_table(alg, term, 3, name="h'")
    if not (table(b, a, a) == b and table(a, a, b) == b):
        raise VerificationError("affine thin-edge witness fails its defining equalities")
    return ThinEdge(alg, AFFINE, a, b, table, term, _theta_blocks_tuple(e, AFFINE))


def find_thin_majority(
    alg: Algebra, edge: EdgeInfo, ops: UnifiedOps, budget: ClosureBudget = DEFAULT_BUDGET
):
    """Search b' in b's theta-block with (a, b') a thin majority edge.

    Candidates are tried in increasing element order.  For a strict
    majority edge a failure contradicts the thin-counterpart guarantee and
    raises; for non-strict majority edges the result may be absent.
    """
    if MAJORITY not in edge.types:
        return None
    for bprime in sorted(edge.block_of(MAJORITY, edge.b)):
        if bprime == edge.a:
            continue
        res = is_thin_majority(alg, edge.a, bprime, ops, budget)
        if isinstance(res, ThinEdge):
            return res
        if res is UNKNOWN:
            return UNKNOWN
    if edge.strict == STRICT_MAJORITY:
        raise VerificationError(
            f"strict majority edge ({edge.a},{edge.b}) has no thin counterpart"
        )
    return None


def find_thin_affine(
    alg: Algebra, edge: EdgeInfo, ops: UnifiedOps, budget: ClosureBudget = DEFAULT_BUDGET
):
    """Search b' in b's theta-block with (a, b') a thin affine edge."""
    if AFFINE not in edge.types:
        return None
    for bprime in sorted(edge.block_of(AFFINE, edge.b)):
        if bprime == edge.a:
            continue
        res = is_thin_affine(alg, edge.a, bprime, ops, budget)
        if isinstance(res, ThinEdge):
            return res
        if res is UNKNOWN:
            return UNKNOWN
    if edge.strict == STRICT_AFFINE:
        raise VerificationError(
            f"strict affine edge ({edge.a},{edge.b}) has no thin counterpart"
        )
    return None


def all_thin_edges(
    alg: Algebra,
    ops: UnifiedOps,
    fprime: OpTable,
    budget: ClosureBudget = DEFAULT_BUDGET,
    infos: dict | None = None,
) -> list[ThinEdge]:
    """Every thin edge of every kind, over all ordered pairs."""
    out = thin_semilattice_edges(alg, fprime)
    cache = infos if infos is not None else {}
    for a in range(alg.size):
        for b in range(alg.size):
            if a == b:
                continue
            key = (min(a, b), max(a, b))
            if key not in cache:
                cache[key] = classify_pair(alg, key[0], key[1], budget)
            info = cache[key]
            mj = is_thin_majority(alg, a, b, ops, budget, info=info)
            if isinstance(mj, ThinEdge):
                out.append(mj)
            af = is_thin_affine(alg, a, b, ops, budget, info=info)
            if isinstance(af, ThinEdge):
                out.append(af)
    return out


# ---------------------------------------------------------------------------
# Cross-algebra witnesses


def _product_membership_term(
    algs: list[Algebra], gens: list[tuple[int, ...]], target: tuple[int, ...], budget: ClosureBudget
):
    """Membership of a target tuple in the product subalgebra generated by
    the given tuples; returns the witness term or raises."""
    sig = algs[0].signature()
    for a in algs[1:]:
        if a.signature() != sig:
            raise AlgebraError("cross-algebra witnesses need identical signatures")
    prod = product_algebra(algs)
    sizes = [a.size for a in algs]
    enc_gens = [(product_encode(sizes, g),) for g in gens]
    enc_target = (product_encode(sizes, target),)
    su = generate_subuniverse(prod, 1, enc_gens, budget=budget, target=enc_target)
    found, idx = member_with_witness(su, enc_target)
    if found is UNKNOWN:
        return UNKNOWN
    if found is False:
        return None
    return extract_term(su, idx)


def witness_majority_triple(
    e1: ThinEdge, e2: ThinEdge, e3: ThinEdge, budget: ClosureBudget = DEFAULT_BUDGET
) -> TermExpr:
    """Term g' with g'(a1,b1,b1)=b1, g'(b2,a2,b2)=b2, g'(b3,b3,a3)=b3 for
    three thin majority edges over same-signature algebras."""
    for e in (e1, e2, e3):
        if e.kind != MAJORITY:
            raise AlgebraError("witness_majority_triple needs thin majority edges")
    algs = [e1.alg, e2.alg, e3.alg]
    a1, b1 = e1.src, e1.dst
    a2, b2 = e2.src, e2.dst
    a3, b3 = e3.src, e3.dst
    term = _product_membership_term(
        algs,
        [(a1, b2, b3), (b1, a2, b3), (b1, b2, a3)],
        (b1, b2, b3),
        budget,
    )
    if term is UNKNOWN:
        return UNKNOWN
    if term is None:
        raise VerificationError("majority triple witness does not exist; claim violated")
    t1 = term_table(algs[0], term, 3)
    t2 = term_table(algs[1], term, 3)
    t3 = term_table(algs[2], term, 3)
    if not (t1(a1, b1, b1) == b1 and t2(b2, a2, b2) == b2 and t3(b3, b3, a3) == b3):
        raise VerificationError("majority triple witness fails its equalities")
    return term


MIXED_KINDS = {
    "majority-semilattice": (MAJORITY, SEMILATTICE),
    "affine-affine": (AFFINE, AFFINE),
    "affine-semilattice": (AFFINE, SEMILATTICE),
    "affine-majority": (AFFINE, MAJORITY),
}


def witness_mixed(kind: str, e1: ThinEdge, e2: ThinEdge, budget: ClosureBudget = DEFAULT_BUDGET):
    """Two-algebra witness terms for mixed thin-edge pairs.

    majority-semilattice: t(a,b)=b and t(d,c)=d
    affine-affine:        h'(b,a,a)=b and h'(c,c,d)=d
    affine-semilattice:   r(b,a)=b and r(c,d)=d
    affine-majority:      t(b,a)=b and t(c,d)=d
    """
    if kind not in MIXED_KINDS:
        raise AlgebraError(f"unknown mixed witness kind {kind!r}")
    want1, want2 = MIXED_KINDS[kind]
    if e1.kind != want1 or e2.kind != want2:
        raise AlgebraError(
            f"{kind} needs edges of kinds ({want1}, {want2}), got ({e1.kind}, {e2.kind})"
        )
    a, b = e1.src, e1.dst
    c, d = e2.src, e2.dst
    algs = [e1.alg, e2.alg]
    if kind == "majority-semilattice":
        gens = [(a, d), (b, c)]
        target = (b, d)
        arity = 2
        checks = [(0, (a, b), b), (1, (d, c), d)]
    elif kind == "affine-affine":
        gens = [(b, c), (a, c), (a, d)]
        target = (b, d)
        arity = 3
        checks = [(0, (b, a, a), b), (1, (c, c, d), d)]
    elif kind == "affine-semilattice":
        gens = [(b, c), (a, d)]
        target = (b, d)
        arity = 2
        checks = [(0, (b, a), b), (1, (c, d), d)]
    else:  # affine-majority
        gens = [(b, c), (a, d)]
        target = (b, d)
        arity = 2
        checks = [(0, (b, a), b), (1, (c, d), d)]
    term = _product_membership_term(algs, gens, target, budget)
    if term is UNKNOWN:
        return UNKNOWN
    if term is None:
        raise VerificationError(f"{kind} witness does not exist; claim violated")
    for alg_i, args, want in checks:
        t = term_table(algs[alg_i], term, arity)
        if t(*args) != want:
            raise VerificationError(f"{kind} witness fails t{args} = {want}")
    return term


# ---------------------------------------------------------------------------
# Thick edges refine to thin ones


def verify_thick_thin(alg: Algebra, edges: Sequence[EdgeInfo], fprime: OpTable):
    """For every thick semilattice edge and every c in the source block,
    some d in the target block gives a thin edge c <= d.  Returns failures."""
    t = fprime.table()
    failures = []
    for e in edges:
        if SEMILATTICE not in e.types:
            continue
        ablk, bblk = _blocks(e, SEMILATTICE)
        act = _f_two_block_action(fprime, ablk, bblk)
        if act is None or act[(0, 1)] != act[(1, 0)]:
            failures.append(((e.a, e.b), "f' not semilattice on the thick edge"))
            continue
        target_is_b = act[(0, 1)] == 1
        src, dst = (ablk, bblk) if target_is_b else (bblk, ablk)
        for c in src:
            if not any(t[c, d] == d and t[d, c] == d for d in dst):
                failures.append(((e.a, e.b), f"no thin edge from {c} into the target block"))
    return failures
