"""Exact and bounded treewidth computation with tree-decomposition certificates.

The exact route is dynamic programming over vertex subsets on elimination
orderings (state: eliminated subset S, value: minimal over orderings of S of
the maximum back-degree), run per biconnected block after a simplification
pass (degree-0/1 removal, guarded degree-2 suppression, parallel-edge
collapse).  The bounded route sandwiches the treewidth between combinatorial
lower bounds (degeneracy, minor-min-width) and greedy elimination upper
bounds, refined by branch and bound over elimination prefixes until a budget
runs out.  Every result carries a tree decomposition witnessing its upper
bound, rebuilt for the original input graph.
"""

import itertools
import json
import time
from dataclasses import dataclass, field

from .graphs import GraphError, UGraph


class SizeLimitError(GraphError):
    """Raised when an exact computation would exceed its configured size limit."""


# ----------------------------------------------------------------------
# tree decompositions


@dataclass
class TreeDecomposition:
    """Bags plus a tree on bag indices; width = max bag size - 1."""

    bags: list
    tree: list

    def __post_init__(self):
        self.bags = [frozenset(b) for b in self.bags]
        self.tree = [tuple(sorted(e)) for e in self.tree]

    @property
    def width(self):
        if not self.bags:
            return -1
        return max(len(b) for b in self.bags) - 1

    def validate_detail(self, g):
        """Check (tw1) vertex cover, (tw2) edge cover, (tw3) running intersection.

        Returns (ok, message); on failure the message names the first violated
        property and a witness.
        """
        nb = len(self.bags)
        if nb == 0:
            if g.n == 0:
                return True, "ok"
            return False, "tw1 violated: no bags but graph has vertices"
        for i, j in self.tree:
            if not (0 <= i < nb and 0 <= j < nb):
                return False, "bag tree names unknown bag (%d,%d)" % (i, j)
        if len(self.tree) != nb - 1 or not self._tree_connected():
            return False, "bag graph is not a tree"
        covered = set().union(*self.bags)
        if covered != g.vertices:
            missing = g.vertices - covered
            extra = covered - g.vertices
            return False, "tw1 violated: missing=%s extra=%s" % (sorted(missing), sorted(extra))
        for u, v in g.edge_set():
            if not any(u in b and v in b for b in self.bags):
                return False, "tw2 violated: edge (%r, %r) in no bag" % (u, v)
        adj = {i: set() for i in range(nb)}
        for i, j in self.tree:
            adj[i].add(j)
            adj[j].add(i)
        for v in g.vertices:
            holders = [i for i, b in enumerate(self.bags) if v in b]
            seen = {holders[0]}
            stack = [holders[0]]
            hset = set(holders)
            while stack:
                i = stack.pop()
                for j in adj[i]:
                    if j in hset and j not in seen:
                        seen.add(j)
                        stack.append(j)
            if len(seen) != len(holders):
                return False, "tw3 violated: bags of %r are disconnected" % (v,)
        return True, "ok"

    def _tree_connected(self):
        nb = len(self.bags)
        if nb == 1:
            return True
        adj = {i: set() for i in range(nb)}
        for i, j in self.tree:
            adj[i].add(j)
            adj[j].add(i)
        seen = {0}
        stack = [0]
        while stack:
            i = stack.pop()
            for j in adj[i]:
                if j not in seen:
                    seen.add(j)
                    stack.append(j)
        return len(seen) == nb

    def validate(self, g):
        return self.validate_detail(g)[0]

    def make_small(self):
        """Contract bags that are subsets of a neighbour until none remain."""
        bags = [set(b) for b in self.bags]
        adj = {i: set() for i in range(len(bags))}
        for i, j in self.tree:
            adj[i].add(j)
            adj[j].add(i)
        alive = set(range(len(bags)))
        changed = True
        while changed:
            changed = False
            for i in sorted(alive):
                for j in sorted(adj[i]):
                    if bags[i] <= bags[j]:
                        for k in adj[i] - {j}:
                            adj[k].discard(i)
                            adj[k].add(j)
                            adj[j].add(k)
                        adj[j].discard(i)
                        adj[i] = set()
                        alive.discard(i)
                        changed = True
                        break
                if changed:
                    break
        order = sorted(alive)
        renum = {old: new for new, old in enumerate(order)}
        new_bags = [frozenset(bags[i]) for i in order]
        new_tree = sorted({tuple(sorted((renum[i], renum[j]))) for i in alive for j in adj[i]})
        return TreeDecomposition(new_bags, new_tree)

    def to_json(self):
        return json.dumps(
            {"bags": [sorted(b) for b in self.bags], "tree": [list(e) for e in self.tree], "width": self.width},
            indent=2,
        )

    @classmethod
    def from_json(cls, text):
        obj = json.loads(text)
        return cls(obj["bags"], [tuple(e) for e in obj["tree"]])


@dataclass
class TwResult:
    lower: int
    upper: int
    exact: bool
    decomposition: TreeDecomposition = field(repr=False, default=None)

    @property
    def width(self):
        return self.upper


# ----------------------------------------------------------------------
# simplification with replay bookkeeping


def _simple_adj(g):
    return {v: set(g.neighbors(v)) for v in g.vertices}


def _is_unique_triangle_adj(adj):
    n = len(adj)
    if n == 0:
        return False
    m = sum(len(s) for s in adj.values()) // 2
    comps = _component_count(adj)
    if m - n + comps != 1:
        return False
    deg = {v: len(adj[v]) for v in adj}
    queue = [v for v, d in deg.items() if d <= 1]
    alive = set(adj)
    while queue:
        v = queue.pop()
        if v not in alive:
            continue
        alive.discard(v)
        for w in adj[v]:
            if w in alive:
                deg[w] -= 1
                if deg[w] <= 1:
                    queue.append(w)
    cycle = {v for v in alive if deg[v] >= 2}
    if len(cycle) != 3:
        return False
    return any(len(adj[v]) == 2 for v in cycle)


def _component_count(adj):
    seen = set()
    count = 0
    for s in adj:
        if s in seen:
            continue
        count += 1
        stack = [s]
        seen.add(s)
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
    return count


def _reduce(adj):
    """Strip degree-0/1 vertices and suppress degree-2 vertices in place.

    Suppression is skipped while the current graph is a unique triangle graph
    (the one case where it is not treewidth-safe).  Returns the replay steps
    in the order they were applied.
    """
    steps = []
    changed = True
    while changed:
        changed = False
        # degree <= 1 to fixpoint first, so trees dissolve without series steps
        low = [v for v in adj if len(adj[v]) <= 1]
        while low:
            v = low.pop()
            if v not in adj or len(adj[v]) > 1:
                continue
            if len(adj[v]) == 0:
                steps.append(("isolated", v))
                del adj[v]
            else:
                u = next(iter(adj[v]))
                steps.append(("pendant", v, u))
                adj[u].discard(v)
                del adj[v]
                if len(adj[u]) <= 1:
                    low.append(u)
            changed = True
        for v in sorted(adj):
            if len(adj[v]) == 2 and not _is_unique_triangle_adj(adj):
                a, b = sorted(adj[v])
                steps.append(("series", v, a, b))
                adj[a].discard(v)
                adj[b].discard(v)
                del adj[v]
                adj[a].add(b)
                adj[b].add(a)
                changed = True
                break
    return steps


def _replay(bags, tree, steps):
    """Re-add reduced vertices to a decomposition, last removed first."""
    def find_bag(need):
        for i, b in enumerate(bags):
            if need <= b:
                return i
        raise AssertionError("replay found no bag containing %r" % (need,))

    for step in reversed(steps):
        kind = step[0]
        if kind == "isolated":
            v = step[1]
            bags.append(frozenset([v]))
            if len(bags) > 1:
                tree.append((0, len(bags) - 1))
        elif kind == "pendant":
            _, v, u = step
            i = find_bag({u})
            bags.append(frozenset([u, v]))
            tree.append((i, len(bags) - 1))
        else:
            _, v, a, b = step
            i = find_bag({a, b})
            bags.append(frozenset([a, v, b]))
            tree.append((i, len(bags) - 1))
    return bags, tree


# ----------------------------------------------------------------------
# elimination orders -> decompositions


def _decomposition_from_order(adj, order):
    """Standard construction: bag of v is {v} + its not-yet-eliminated fill neighbours."""
    work = {v: set(ns) for v, ns in adj.items()}
    pos = {v: i for i, v in enumerate(order)}
    raw_bags = {}
    for v in order:
        nb = work[v]
        raw_bags[v] = frozenset({v} | nb)
        for a in nb:
            work[a].discard(v)
        for a, b in itertools.combinations(nb, 2):
            work[a].add(b)
            work[b].add(a)
        del work[v]
    bags = []
    tree = []
    index = {}
    for v in reversed(order):
        index[v] = len(bags)
        bags.append(raw_bags[v])
    for v in order:
        later = [u for u in raw_bags[v] if u != v]
        if later:
            parent = min(later, key=lambda u: pos[u])
            tree.append((index[v], index[parent]))
        elif index[v] != index[order[-1]]:
            tree.append((index[v], index[order[-1]]))
    return bags, tree


def _width_of_order(adj, order):
    work = {v: set(ns) for v, ns in adj.items()}
    width = 0
    for v in order:
        nb = work[v]
        width = max(width, len(nb))
        for a in nb:
            work[a].discard(v)
        for a, b in itertools.combinations(nb, 2):
            work[a].add(b)
            work[b].add(a)
        del work[v]
    return width


def _min_fill_order(adj):
    work = {v: set(ns) for v, ns in adj.items()}
    order = []
    while work:
        best = None
        for v in sorted(work):
            nb = work[v]
            fill = sum(1 for a, b in itertools.combinations(sorted(nb), 2) if b not in work[a])
            if best is None or fill < best[0]:
                best = (fill, v)
        v = best[1]
        nb = work[v]
        for a in nb:
            work[a].discard(v)
        for a, b in itertools.combinations(nb, 2):
            work[a].add(b)
            work[b].add(a)
        del work[v]
        order.append(v)
    return order


def _min_degree_order(adj):
    work = {v: set(ns) for v, ns in adj.items()}
    order = []
    while work:
        v = min(sorted(work), key=lambda u: len(work[u]))
        nb = work[v]
        for a in nb:
            work[a].discard(v)
        for a, b in itertools.combinations(nb, 2):
            work[a].add(b)
            work[b].add(a)
        del work[v]
        order.append(v)
    return order


# ----------------------------------------------------------------------
# lower bounds


def _degeneracy(adj):
    work = {v: set(ns) for v, ns in adj.items()}
    best = 0
    while work:
        v = min(sorted(work), key=lambda u: len(work[u]))
        best = max(best, len(work[v]))
        for w in work[v]:
            work[w].discard(v)
        del work[v]
    return best


def _minor_min_width(adj):
    """MMD+: repeatedly contract a min-degree vertex into its least-shared neighbour."""
    work = {v: set(ns) for v, ns in adj.items()}
    best = 0
    while work:
        v = min(sorted(work), key=lambda u: len(work[u]))
        d = len(work[v])
        best = max(best, d)
        if d == 0:
            del work[v]
            continue
        u = min(sorted(work[v]), key=lambda w: len(work[v] & work[w]))
        for w in work[v]:
            work[w].discard(v)
            if w != u:
                work[u].add(w)
                work[w].add(u)
        del work[v]
    return best


def _lower_bound(adj):
    if not adj:
        return -1
    return max(_degeneracy(adj), _minor_min_width(adj))


# ----------------------------------------------------------------------
# exact subset DP


def _dp_exact(adj, ub):
    """Exact treewidth of the graph given as dict-of-sets, pruned against ub.

    Returns (width, elimination order).  If no ordering beats ub the answer
    is ub itself (the caller's heuristic order witnesses it) and the order
    returned is None.
    """
    verts = sorted(adj)
    n = len(verts)
    idx = {v: i for i, v in enumerate(verts)}
    masks = [0] * n
    for v in adj:
        for w in adj[v]:
            masks[idx[v]] |= 1 << idx[w]
    full = (1 << n) - 1

    def back_degree(done, i):
        # neighbours of i outside done, plus vertices reachable through done
        out = masks[i] & ~done
        inside = masks[i] & done
        seen = inside
        while inside:
            nxt = 0
            m = inside
            while m:
                b = m & -m
                m ^= b
                nxt |= masks[b.bit_length() - 1]
            out |= nxt & ~done
            inside = nxt & done & ~seen
            seen |= inside
        out &= ~(1 << i)
        return bin(out).count("1")

    cur = {0: -1}
    parent = {}
    for _layer in range(n):
        nxt = {}
        for done, val in cur.items():
            rem = full & ~done
            m = rem
            while m:
                b = m & -m
                m ^= b
                i = b.bit_length() - 1
                w = back_degree(done, i)
                nv = val if val > w else w
                if nv >= ub:
                    continue
                t = done | b
                old = nxt.get(t)
                if old is None or nv < old:
                    nxt[t] = nv
                    parent[t] = (done, i)
        cur = nxt
        if not cur:
            break
    if full not in cur:
        return ub, None
    width = cur[full]
    order_idx = []
    s = full
    while s:
        prev, i = parent[s]
        order_idx.append(i)
        s = prev
    order_idx.reverse()
    return width, [verts[i] for i in order_idx]


# ----------------------------------------------------------------------
# block handling and assembly


def _blocks_of(adj):
    g = UGraph(vertices=adj, edges=[(u, v) for u in adj for v in adj[u] if u < v])
    return [{v: set(b.neighbors(v)) for v in b.vertices} for b in g.biconnected_components()]


def _assemble_blocks(block_decs):
    """Glue block decompositions along shared cut vertices into one bag tree."""
    if not block_decs:
        return [], []
    vert_blocks = {}
    for bi, (bags, _tree) in enumerate(block_decs):
        for b in bags:
            for v in b:
                vert_blocks.setdefault(v, set()).add(bi)
    placed = set()
    bags_all = []
    tree_all = []
    anchor = {}

    def place(bi, connect_vertex):
        off = len(bags_all)
        bags, tree = block_decs[bi]
        bags_all.extend(bags)
        tree_all.extend((i + off, j + off) for i, j in tree)
        if connect_vertex is not None:
            local = next(i for i, b in enumerate(bags) if connect_vertex in b)
            tree_all.append((anchor[connect_vertex], local + off))
        elif off > 0:
            tree_all.append((0, off))
        for i, b in enumerate(bags):
            for v in b:
                if v not in anchor:
                    anchor[v] = i + off
        placed.add(bi)

    for start in range(len(block_decs)):
        if start in placed:
            continue
        place(start, None)
        queue = [start]
        while queue:
            bi = queue.pop()
            for v in {x for b in block_decs[bi][0] for x in b}:
                for bj in sorted(vert_blocks[v]):
                    if bj not in placed:
                        place(bj, v)
                        queue.append(bj)
    return bags_all, tree_all


def _exact_core(adj, limit):
    """Exact decomposition of an already-reduced graph, block by block."""
    if not adj:
        return [], []
    block_decs = []
    for block in _blocks_of(adj):
        n = len(block)
        if n > limit:
            raise SizeLimitError(
                "block with %d vertices exceeds exact limit %d; use bounded_treewidth" % (n, limit)
            )
        ub_order = min(
            (_min_fill_order(block), _min_degree_order(block)),
            key=lambda o: _width_of_order(block, o),
        )
        ub = _width_of_order(block, ub_order)
        lb = _lower_bound(block)
        if lb < ub:
            width, order = _dp_exact(block, ub)
            if order is not None:
                ub_order = order
        block_decs.append(_decomposition_from_order(block, ub_order))
    return _assemble_blocks(block_decs)


def exact_treewidth(g, limit=24):
    """Exact treewidth of a UGraph with a certifying decomposition.

    Raises SizeLimitError when a reduced biconnected block is larger than
    the configured limit.
    """
    adj = _simple_adj(g)
    steps = _reduce(adj)
    bags, tree = _exact_core(adj, limit)
    bags, tree = _replay(list(bags), list(tree), steps)
    dec = TreeDecomposition(bags, tree)
    ok, msg = dec.validate_detail(g)
    if not ok:
        raise AssertionError("internal: invalid decomposition: %s" % msg)
    w = dec.width
    return TwResult(lower=w, upper=w, exact=True, decomposition=dec)


def brute_force_oracle(g, limit=10):
    """Minimum over all elimination orderings of the maximum degree at elimination.

    Test oracle: explicit graph surgery with a best-so-far cut, no subset
    memoisation, independent of the DP route.
    """
    if g.n > limit:
        raise SizeLimitError("oracle limited to %d vertices" % limit)
    adj = _simple_adj(g)
    if not adj:
        return -1
    best = [len(adj) - 1]

    def rec(work, cur):
        if not work:
            best[0] = min(best[0], cur)
            return
        if cur >= best[0]:
            return
        for v in sorted(work):
            d = len(work[v])
            if max(cur, d) >= best[0]:
                continue
            nb = work[v]
            added = []
            for a, b in itertools.combinations(sorted(nb), 2):
                if b not in work[a]:
                    work[a].add(b)
                    work[b].add(a)
                    added.append((a, b))
            for a in nb:
                work[a].discard(v)
            saved = work.pop(v)
            rec(work, max(cur, d))
            work[v] = saved
            for a in saved:
                work[a].add(v)
            for a, b in added:
                work[a].discard(b)
                work[b].discard(a)

    rec(adj, 0)
    return best[0]


# ----------------------------------------------------------------------
# branch and bound refinement


class _Budget:
    def __init__(self, seconds=None, nodes=None):
        self.deadline = None if seconds is None else time.monotonic() + seconds
        self.nodes_left = nodes
        self.exhausted = False

    def tick(self):
        if self.exhausted:
            return False
        if self.nodes_left is not None:
            self.nodes_left -= 1
            if self.nodes_left < 0:
                self.exhausted = True
                return False
        if self.deadline is not None and time.monotonic() > self.deadline:
            self.exhausted = True
            return False
        return True


def _branch_and_bound(adj, ub, lb, budget):
    """Refine the upper bound by DFS over elimination prefixes.

    Returns (best_width, best_order_or_None, completed).  Simplicial vertices
    are eliminated greedily (always safe); ties break on the lowest id so runs
    are deterministic.
    """
    best = [ub, None]
    verts = sorted(adj)

    def is_simplicial(work, v):
        nb = sorted(work[v])
        return all(b in work[a] for a, b in itertools.combinations(nb, 2))

    def rec(work, cur, prefix):
        if not budget.tick():
            return
        if cur >= best[0]:
            return
        if not work:
            best[0] = cur
            best[1] = list(prefix)
            return
        if max(cur, _minor_min_width(work)) >= best[0]:
            return
        simp = next((v for v in sorted(work) if is_simplicial(work, v)), None)
        if simp is not None:
            # eliminating a simplicial vertex first is always optimal
            if max(cur, len(work[simp])) >= best[0]:
                return
            cand = [simp]
        else:
            cand = sorted(work, key=lambda u: (len(work[u]), u))
        for v in cand:
            d = len(work[v])
            if max(cur, d) >= best[0]:
                continue
            nb = work[v]
            added = []
            for a, b in itertools.combinations(sorted(nb), 2):
                if b not in work[a]:
                    work[a].add(b)
                    work[b].add(a)
                    added.append((a, b))
            for a in nb:
                work[a].discard(v)
            saved = work.pop(v)
            prefix.append(v)
            rec(work, max(cur, d), prefix)
            prefix.pop()
            work[v] = saved
            for a in saved:
                work[a].add(v)
            for a, b in added:
                work[a].discard(b)
                work[b].discard(a)
            if budget.exhausted:
                return

    work = {v: set(ns) for v, ns in adj.items()}
    if lb < ub:
        rec(work, 0, [])
    return best[0], best[1], not budget.exhausted


def bounded_treewidth(g, budget_seconds=5.0, max_nodes=None, hint=None, lower_bound_hint=0):
    """Lower/upper treewidth sandwich for graphs beyond the exact limit.

    hint: an optional candidate TreeDecomposition for g; it is validated and,
    if its width beats the heuristics, adopted as the upper bound witness.
    lower_bound_hint: a caller-supplied lower bound from external reasoning
    (e.g. incompatibility of the trees behind a display graph).
    """
    adj = _simple_adj(g)
    steps = _reduce(adj)
    budget = _Budget(seconds=budget_seconds, nodes=max_nodes)

    lower = -1 if g.n == 0 else 0
    if g.m >= 1:
        lower = 1
    if any(s[0] == "series" for s in steps):
        # a series step only fires when the minimum degree is 2, i.e. on a cycle
        lower = 2
    block_decs = []
    for block in sorted(_blocks_of(adj), key=len):
        ub_order = min(
            (_min_fill_order(block), _min_degree_order(block)),
            key=lambda o: _width_of_order(block, o),
        )
        ub = _width_of_order(block, ub_order)
        lb = _lower_bound(block)
        if lb < ub:
            w, order, done = _branch_and_bound(block, ub, lb, budget)
            if order is not None:
                ub_order, ub = order, w
            if done:
                lb = ub
        lower = max(lower, lb)
        block_decs.append(_decomposition_from_order(block, ub_order))

    bags, tree = _assemble_blocks(block_decs)
    bags, tree = _replay(list(bags), list(tree), steps)
    dec = TreeDecomposition(bags, tree)
    ok, msg = dec.validate_detail(g)
    if not ok:
        raise AssertionError("internal: invalid decomposition: %s" % msg)
    upper = dec.width
    if hint is not None and hint.validate(g) and hint.width < upper:
        dec = hint
        upper = hint.width
    lower = max(lower, lower_bound_hint)
    lower = min(lower, upper)
    return TwResult(lower=lower, upper=upper, exact=lower == upper, decomposition=dec)


# ----------------------------------------------------------------------
# small-k recognizers


def treewidth_at_most(g, k):
    """Reduction-rule recognizers for treewidth at most 1, 2, or 3."""
    if k not in (1, 2, 3):
        raise GraphError("k must be 1, 2 or 3")
    if k == 1:
        if any(g.multiplicity(u, v) > 1 for u, v in g.edge_set()):
            return False
        return g.is_forest()
    adj = _simple_adj(g)
    if k == 2:
        return _reduce_deg2(adj)
    return _reduce_partial3(adj)


def _reduce_deg2(adj):
    queue = list(adj)
    while queue:
        v = queue.pop()
        if v not in adj:
            continue
        d = len(adj[v])
        if d <= 1:
            for w in adj[v]:
                adj[w].discard(v)
                queue.append(w)
            del adj[v]
        elif d == 2:
            a, b = adj[v]
            adj[a].discard(v)
            adj[b].discard(v)
            del adj[v]
            adj[a].add(b)
            adj[b].add(a)
            queue.extend((a, b))
    return not adj


def _reduce_partial3(adj):
    """Confluent degree-<=3 reductions for partial 3-trees.

    Rules: isolated/pendant removal, series (degree 2), triangle (degree-3
    vertex with two adjacent neighbours), buddy (two degree-3 vertices with
    identical neighbourhoods), cube (a degree-3 hub whose three degree-3
    neighbours pairwise share one distinct outer neighbour).  The graph has
    treewidth at most 3 iff the rules reduce it to nothing.
    """
    def clique(vs):
        for a, b in itertools.combinations(sorted(vs), 2):
            adj[a].add(b)
            adj[b].add(a)

    def remove(v):
        for w in adj[v]:
            adj[w].discard(v)
        del adj[v]

    changed = True
    while adj and changed:
        changed = False
        for v in sorted(adj):
            d = len(adj[v])
            if d <= 1:
                remove(v)
                changed = True
                break
            if d == 2:
                nb = list(adj[v])
                remove(v)
                clique(nb)
                changed = True
                break
            if d == 3:
                nb = sorted(adj[v])
                if any(b in adj[a] for a, b in itertools.combinations(nb, 2)):
                    remove(v)
                    clique(nb)
                    changed = True
                    break
        if changed:
            continue
        # buddy: identical degree-3 neighbourhoods
        deg3 = [v for v in sorted(adj) if len(adj[v]) == 3]
        by_nb = {}
        for v in deg3:
            by_nb.setdefault(frozenset(adj[v]), []).append(v)
        for nb, group in sorted(by_nb.items(), key=lambda kv: kv[1]):
            if len(group) >= 2:
                remove(group[0])
                remove(group[1])
                clique(nb)
                changed = True
                break
        if changed:
            continue
        # cube: hub u with N(u) = {v1,v2,v3}, all degree 3, outer pairs
        # {a,b}, {a,c}, {b,c} with a,b,c distinct and outside the configuration
        for u in sorted(adj):
            if len(adj[u]) != 3:
                continue
            v1, v2, v3 = sorted(adj[u])
            if any(len(adj[x]) != 3 for x in (v1, v2, v3)):
                continue
            outer = [adj[x] - {u} for x in (v1, v2, v3)]
            if any(len(o) != 2 for o in outer):
                continue
            shared = [outer[0] & outer[1], outer[0] & outer[2], outer[1] & outer[2]]
            if any(len(s) != 1 for s in shared):
                continue
            abc = {next(iter(s)) for s in shared}
            if len(abc) != 3 or abc & {u, v1, v2, v3}:
                continue
            for x in (u, v1, v2, v3):
                remove(x)
            clique(abc)
            changed = True
            break
    return not adj
