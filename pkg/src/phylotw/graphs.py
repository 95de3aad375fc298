"""Undirected multigraphs with stable vertex ids, minor operations and connectivity queries.

Every structure in this package (trees, networks, display graphs, decompositions)
sits on top of UGraph.  Operations are pure: they return new graphs and never
mutate their input, so reduction pipelines can keep before/after snapshots.
"""

import itertools
import json
from collections import Counter, deque


class GraphError(ValueError):
    """Raised for structurally invalid graph operations (unknown edge, bad degree, ...)."""


def edge_key(u, v):
    """Normalized representation of an undirected edge."""
    if u == v:
        raise GraphError("self-loops are not allowed")
    return (u, v) if u < v else (v, u)


class UGraph:
    """Undirected multigraph: no self-loops, parallel edges allowed, optional taxon labels.

    Vertex ids are opaque integers and are never reused within one graph's
    lifetime (fresh ids come from an internal counter carried across copies).
    Labels are injective: no two vertices share a taxon label.
    """

    __slots__ = ("_adj", "_labels", "_next_id")

    def __init__(self, vertices=(), edges=(), labels=None):
        self._adj = {}
        self._labels = {}
        self._next_id = 0
        for v in vertices:
            self._mut_add_vertex(v)
        for u, v in edges:
            self._mut_add_edge(u, v)
        if labels:
            for v, lab in labels.items():
                self._mut_set_label(v, lab)

    # ------------------------------------------------------------------
    # internal mutators (only used on graphs not yet shared)

    def _mut_add_vertex(self, v=None):
        if v is None:
            v = self._next_id
        if v in self._adj:
            raise GraphError("vertex %r already present" % (v,))
        self._adj[v] = Counter()
        self._next_id = max(self._next_id, v + 1)
        return v

    def _mut_add_edge(self, u, v):
        edge_key(u, v)
        for w in (u, v):
            if w not in self._adj:
                raise GraphError("vertex %r not present" % (w,))
        self._adj[u][v] += 1
        self._adj[v][u] += 1

    def _mut_delete_edge(self, u, v):
        if self._adj.get(u, Counter())[v] < 1:
            raise GraphError("edge not present: %r" % ((u, v),))
        self._adj[u][v] -= 1
        self._adj[v][u] -= 1
        if self._adj[u][v] == 0:
            del self._adj[u][v]
            del self._adj[v][u]

    def _mut_delete_vertex(self, v):
        if v not in self._adj:
            raise GraphError("vertex %r not present" % (v,))
        for w in list(self._adj[v]):
            del self._adj[w][v]
        del self._adj[v]
        self._labels.pop(v, None)

    def _mut_set_label(self, v, lab):
        if v not in self._adj:
            raise GraphError("vertex %r not present" % (v,))
        if lab is not None and lab in self._labels.values():
            other = self.vertex_of_label(lab)
            if other != v:
                raise GraphError("label %r already used" % (lab,))
        if lab is None:
            self._labels.pop(v, None)
        else:
            self._labels[v] = lab

    def _clone(self):
        g = UGraph()
        g._adj = {v: nbrs.copy() for v, nbrs in self._adj.items()}
        g._labels = dict(self._labels)
        g._next_id = self._next_id
        return g

    # ------------------------------------------------------------------
    # basic accessors

    @property
    def vertices(self):
        return set(self._adj)

    def __contains__(self, v):
        return v in self._adj

    def __len__(self):
        return len(self._adj)

    @property
    def n(self):
        return len(self._adj)

    @property
    def m(self):
        return sum(sum(c.values()) for c in self._adj.values()) // 2

    def edges(self):
        """All edges as (u, v) with u < v, parallel edges repeated."""
        out = []
        for v, nbrs in self._adj.items():
            for w, mult in nbrs.items():
                if v < w:
                    out.extend([(v, w)] * mult)
        out.sort()
        return out

    def edge_set(self):
        """Distinct edges (multiplicity ignored)."""
        return {(v, w) for v, nbrs in self._adj.items() for w in nbrs if v < w}

    def degree(self, v):
        return sum(self._adj[v].values())

    def neighbors(self, v):
        return set(self._adj[v])

    def multiplicity(self, u, v):
        return self._adj.get(u, Counter())[v]

    def has_edge(self, u, v):
        return self.multiplicity(u, v) > 0

    def label(self, v):
        return self._labels.get(v)

    @property
    def labels(self):
        return dict(self._labels)

    def labelled_vertices(self):
        return set(self._labels)

    def vertex_of_label(self, lab):
        for v, l in self._labels.items():
            if l == lab:
                return v
        raise GraphError("no vertex labelled %r" % (lab,))

    def taxa(self):
        return set(self._labels.values())

    def __eq__(self, other):
        if not isinstance(other, UGraph):
            return NotImplemented
        return self._adj == other._adj and self._labels == other._labels

    def __hash__(self):
        raise TypeError("UGraph is not hashable; use canonical_key()")

    def __repr__(self):
        return "UGraph(n=%d, m=%d, taxa=%d)" % (self.n, self.m, len(self._labels))

    # ------------------------------------------------------------------
    # pure construction / minor operations

    def add_vertex(self, label=None):
        """Return (graph with one fresh vertex, its id)."""
        g = self._clone()
        v = g._mut_add_vertex()
        if label is not None:
            g._mut_set_label(v, label)
        return g, v

    def add_edge(self, u, v):
        g = self._clone()
        g._mut_add_edge(u, v)
        return g

    def delete_edge(self, e):
        """Remove one occurrence of e; vertices are kept."""
        u, v = e
        g = self._clone()
        g._mut_delete_edge(u, v)
        return g

    def delete_vertices(self, vs):
        g = self._clone()
        for v in vs:
            g._mut_delete_vertex(v)
        return g

    def contract_edge(self, e):
        """Identify the endpoints of e; self-loops vanish, parallel edges remain.

        If exactly one endpoint carries a taxon label the merged vertex keeps
        it; contracting two labelled vertices is an error (taxa are never
        merged).  The surviving id is the labelled endpoint, else min(u, v).
        """
        u, v = e
        if not self.has_edge(u, v):
            raise GraphError("edge not present: %r" % (e,))
        lu, lv = self.label(u), self.label(v)
        if lu is not None and lv is not None:
            raise GraphError("cannot contract two labelled vertices")
        keep, gone = (u, v) if lu is not None else (v, u) if lv is not None else (min(u, v), max(u, v))
        g = self._clone()
        for w, mult in list(g._adj[gone].items()):
            if w != keep:
                g._adj[keep][w] += mult
                g._adj[w][keep] += mult
        g._mut_delete_vertex(gone)
        return g

    def subdivide_edge(self, e):
        """Replace e by a path through a fresh degree-2 vertex; returns (graph, new vertex)."""
        u, v = e
        if not self.has_edge(u, v):
            raise GraphError("edge not present: %r" % (e,))
        g = self._clone()
        g._mut_delete_edge(u, v)
        w = g._mut_add_vertex()
        g._mut_add_edge(u, w)
        g._mut_add_edge(w, v)
        return g, w

    def suppress_degree2(self, v):
        """Remove a degree-2 vertex and join its neighbours by a new edge."""
        if v not in self._adj:
            raise GraphError("vertex %r not present" % (v,))
        if self.degree(v) != 2:
            raise GraphError("vertex %r has degree %d, need 2" % (v, self.degree(v)))
        nbrs = []
        for w, mult in self._adj[v].items():
            nbrs.extend([w] * mult)
        a, b = nbrs
        if a == b:
            raise GraphError("degree-2 vertex %r has parallel edges; simplify first" % (v,))
        g = self._clone()
        g._mut_delete_vertex(v)
        g._mut_add_edge(a, b)
        return g

    def simplify(self):
        """Collapse parallel edges to single edges (treewidth-neutral)."""
        g = self._clone()
        for v in g._adj:
            for w in g._adj[v]:
                g._adj[v][w] = 1
        return g

    def set_label(self, v, lab):
        g = self._clone()
        g._mut_set_label(v, lab)
        return g

    def relabel_taxa(self, mapping):
        """Rename taxon labels via mapping (labels not in the mapping are kept)."""
        g = self._clone()
        new = {}
        for v, lab in g._labels.items():
            new[v] = mapping.get(lab, lab)
        if len(set(new.values())) != len(new):
            raise GraphError("relabelling would duplicate a taxon label")
        g._labels = new
        return g

    def induced(self, vs):
        """Induced sub-multigraph on the vertex set vs (labels kept)."""
        vs = set(vs)
        unknown = vs - set(self._adj)
        if unknown:
            raise GraphError("vertices not present: %r" % (sorted(unknown),))
        g = UGraph()
        for v in vs:
            g._mut_add_vertex(v)
        for v in vs:
            for w, mult in self._adj[v].items():
                if w in vs and v < w:
                    for _ in range(mult):
                        g._mut_add_edge(v, w)
        for v in vs:
            if v in self._labels:
                g._mut_set_label(v, self._labels[v])
        g._next_id = self._next_id
        return g

    def copy_with_fresh_ids(self, start):
        """Copy with vertex ids shifted to start, start+1, ...; returns (graph, old->new map)."""
        order = sorted(self._adj)
        mapping = {v: start + i for i, v in enumerate(order)}
        g = UGraph()
        for v in order:
            g._mut_add_vertex(mapping[v])
        for u, v in self.edges():
            g._mut_add_edge(mapping[u], mapping[v])
        for v, lab in self._labels.items():
            g._mut_set_label(mapping[v], lab)
        return g, mapping

    # ------------------------------------------------------------------
    # connectivity

    def connected_components(self):
        """List of vertex sets; isolated vertices are singleton components."""
        seen = set()
        comps = []
        for s in self._adj:
            if s in seen:
                continue
            comp = {s}
            queue = deque([s])
            while queue:
                v = queue.popleft()
                for w in self._adj[v]:
                    if w not in comp:
                        comp.add(w)
                        queue.append(w)
            seen |= comp
            comps.append(frozenset(comp))
        return comps

    def is_connected(self):
        """Empty graph counts as connected (vacuously: zero components)."""
        return len(self.connected_components()) <= 1

    def component_of(self, v):
        comp = {v}
        queue = deque([v])
        while queue:
            x = queue.popleft()
            for w in self._adj[x]:
                if w not in comp:
                    comp.add(w)
                    queue.append(w)
        return frozenset(comp)

    def is_separator(self, s):
        """True iff deleting the vertex set s strictly increases the component count."""
        s = set(s)
        unknown = s - set(self._adj)
        if unknown:
            raise GraphError("vertices not present: %r" % (sorted(unknown),))
        before = len(self.connected_components())
        rest = set(self._adj) - s
        after = len(self.induced(rest).connected_components())
        return after > before

    def is_forest(self):
        if any(m > 1 for c in self._adj.values() for m in c.values()):
            return False
        return self.m == self.n - len(self.connected_components())

    def is_tree(self):
        return self.is_forest() and self.is_connected() and self.n > 0

    def is_unique_triangle_graph(self):
        """Exactly one cycle, that cycle a triangle, with a degree-2 vertex on it."""
        comps = len(self.connected_components())
        if self.m - self.n + comps != 1:
            return False
        # strip degree <= 1 vertices; what survives is the unique cycle
        deg = {v: self.degree(v) for v in self._adj}
        queue = deque(v for v, d in deg.items() if d <= 1)
        alive = set(self._adj)
        while queue:
            v = queue.popleft()
            if v not in alive:
                continue
            alive.discard(v)
            for w, mult in self._adj[v].items():
                if w in alive:
                    deg[w] -= mult
                    if deg[w] <= 1:
                        queue.append(w)
        cycle = {v for v in alive if deg[v] >= 2}
        if len(cycle) != 3:
            return False
        return any(self.degree(v) == 2 for v in cycle)

    # ------------------------------------------------------------------
    # biconnected components (blocks)

    def biconnected_components(self):
        """Block decomposition as a list of UGraphs; bridges are their own blocks.

        Parallel edges keep their multiplicity inside the block that contains
        their endpoints (a doubled edge is a 2-cycle, hence its own block).
        """
        blocks = []
        index = {}
        low = {}
        counter = itertools.count()

        for root in sorted(self._adj):
            if root in index:
                continue
            index[root] = low[root] = next(counter)
            stack = [(root, None, iter(sorted(self._adj[root])))]
            edge_stack = []
            while stack:
                v, parent, it = stack[-1]
                advanced = False
                for w in it:
                    if w == parent:
                        continue
                    if w not in index:
                        index[w] = low[w] = next(counter)
                        edge_stack.append((v, w))
                        stack.append((w, v, iter(sorted(self._adj[w]))))
                        advanced = True
                        break
                    if index[w] < index[v]:
                        edge_stack.append((v, w))
                        low[v] = min(low[v], index[w])
                if advanced:
                    continue
                stack.pop()
                if stack:
                    u = stack[-1][0]
                    low[u] = min(low[u], low[v])
                    if low[v] >= index[u]:
                        comp_edges = set()
                        while edge_stack:
                            e = edge_stack.pop()
                            comp_edges.add(edge_key(*e))
                            if e == (u, v):
                                break
                        verts = {x for e in comp_edges for x in e}
                        blocks.append(self._block_subgraph(verts, comp_edges))
        return blocks

    def _block_subgraph(self, verts, simple_edges):
        g = UGraph()
        for v in sorted(verts):
            g._mut_add_vertex(v)
        for u, v in sorted(simple_edges):
            for _ in range(self.multiplicity(u, v)):
                g._mut_add_edge(u, v)
        for v in verts:
            if v in self._labels:
                g._mut_set_label(v, self._labels[v])
        g._next_id = self._next_id
        return g

    # ------------------------------------------------------------------
    # isomorphism

    def _wl_colors(self):
        color = {v: (self.degree(v),) for v in self._adj}
        for _ in range(self.n):
            new = {}
            for v in self._adj:
                sig = sorted((color[w], m) for w, m in self._adj[v].items())
                new[v] = (color[v], tuple(sig))
            # compress
            ranks = {c: i for i, c in enumerate(sorted(set(new.values())))}
            new = {v: (ranks[c],) for v, c in new.items()}
            if len(set(new.values())) == len(set(color.values())):
                color = new
                break
            color = new
        return {v: c[0] for v, c in color.items()}

    def canonical_key(self, max_n=8):
        """Canonical form of an unlabelled multigraph; exhaustive over WL-class permutations.

        Exponential in the worst case, so restricted to small graphs.
        """
        if self.n > max_n:
            raise GraphError("canonical_key limited to %d vertices" % max_n)
        colors = self._wl_colors()
        groups = {}
        for v, c in colors.items():
            groups.setdefault(c, []).append(v)
        class_list = [sorted(groups[c]) for c in sorted(groups)]
        class_sizes = tuple(len(c) for c in class_list)
        best = None
        for perm_parts in itertools.product(*(itertools.permutations(c) for c in class_list)):
            order = [v for part in perm_parts for v in part]
            pos = {v: i for i, v in enumerate(order)}
            key = tuple(sorted(edge_key(pos[u], pos[v]) for u, v in self.edges()))
            if best is None or key < best:
                best = key
        return (self.n, class_sizes, best)

    def is_isomorphic(self, other, labelled=True):
        """Backtracking isomorphism test with WL-colour pruning.

        With labelled=True the bijection must preserve taxon labels.
        """
        if self.n != other.n or self.m != other.m:
            return False
        if sorted(self.taxa()) != sorted(other.taxa()) and labelled:
            return False
        c1, c2 = self._wl_colors(), other._wl_colors()
        # recolour so the colour histograms are comparable
        def sig(g, col):
            return sorted(Counter(col.values()).items())
        if sig(self, c1) != sig(other, c2):
            return False
        mapping = {}
        if labelled:
            lab2 = {l: v for v, l in other._labels.items()}
            for v, l in self._labels.items():
                mapping[v] = lab2[l]
        used = set(mapping.values())
        free = [v for v in sorted(self._adj) if v not in mapping]
        free.sort(key=lambda v: -self.degree(v))

        def consistent(v, w):
            if c1[v] != c2[w]:
                return False
            if labelled and self.label(v) != other.label(w):
                return False
            for x, mult in self._adj[v].items():
                if x in mapping and other.multiplicity(w, mapping[x]) != mult:
                    return False
            return True

        def extend(i):
            if i == len(free):
                return all(
                    other.multiplicity(mapping[u], mapping[v]) == mult
                    for u in self._adj for v, mult in self._adj[u].items()
                )
            v = free[i]
            for w in other._adj:
                if w in used:
                    continue
                if consistent(v, w):
                    mapping[v] = w
                    used.add(w)
                    if extend(i + 1):
                        return True
                    del mapping[v]
                    used.discard(w)
            return False

        for v, w in mapping.items():
            if c1[v] != c2[w]:
                return False
        return extend(0)

    # ------------------------------------------------------------------
    # serialization

    def to_json(self):
        obj = {
            "vertices": [
                {"id": v, "label": self._labels.get(v)} for v in sorted(self._adj)
            ],
            "edges": [[u, v] for u, v in self.edges()],
        }
        return json.dumps(obj, indent=2)

    @classmethod
    def from_json(cls, text):
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise GraphError("invalid JSON: %s" % exc) from None
        if not isinstance(obj, dict) or "vertices" not in obj or "edges" not in obj:
            raise GraphError("graph JSON needs 'vertices' and 'edges'")
        g = cls()
        for rec in obj["vertices"]:
            g._mut_add_vertex(int(rec["id"]))
        for rec in obj["vertices"]:
            if rec.get("label") is not None:
                g._mut_set_label(int(rec["id"]), str(rec["label"]))
        for u, v in obj["edges"]:
            g._mut_add_edge(int(u), int(v))
        return g

    def to_dot(self, side_of=None):
        """DOT export: taxa as boxes, side provenance (when given) as colours."""
        palette = {"first": "crimson", "second": "steelblue", "shared-taxon": "black"}
        lines = ["graph G {"]
        for v in sorted(self._adj):
            attrs = []
            if v in self._labels:
                attrs.append('label="%s"' % self._labels[v])
                attrs.append("shape=box")
            else:
                attrs.append('label=""')
                attrs.append("shape=point")
            if side_of and v in side_of:
                attrs.append("color=%s" % palette.get(side_of[v], "black"))
            lines.append("  %d [%s];" % (v, ", ".join(attrs)))
        for u, v in self.edges():
            attr = ""
            if side_of:
                su, sv = side_of.get(u), side_of.get(v)
                side = su if su == sv else (su if sv == "shared-taxon" else sv if su == "shared-taxon" else None)
                if side in palette:
                    attr = " [color=%s]" % palette[side]
            lines.append("  %d -- %d%s;" % (u, v, attr))
        lines.append("}")
        return "\n".join(lines)
