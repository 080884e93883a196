#
#   Stable graphs: flag set + vertex partition + involution, per-vertex
#   genus labels and numbered legs; contraction, genus bookkeeping, and
#   brute-force enumeration of isomorphism classes at small sizes.
#

import itertools


class StableGraph:
    """A connected graph given by flags, a vertex partition, and an
    involution whose 2-cycles are edges and fixed points are legs."""

    def __init__(self, vertices, involution, genus, legs):
        self.vertices = [sorted(v) for v in vertices]
        self.involution = dict(involution)
        self.genus = dict(genus)
        self.legs = dict(legs)
        self.flags = sorted(f for v in self.vertices for f in v)

    # -- basic structure ------------------------------------------------

    def vertex_of(self, flag):
        for i, v in enumerate(self.vertices):
            if flag in v:
                return i
        raise KeyError(flag)

    def edges(self):
        """Sorted list of edges as flag pairs (f, sigma(f)) with f < sigma(f)."""
        out = []
        for f, g in self.involution.items():
            if f < g:
                out.append((f, g))
        return sorted(out)

    def leg_flags(self):
        return sorted(f for f, g in self.involution.items() if f == g)

    def n_legs(self):
        return len(self.leg_flags())

    def valence(self, v_index):
        return len(self.vertices[v_index])

    # -- invariants -----------------------------------------------------

    def validate(self):
        """Check all structural invariants; returns (bool, violations)."""
        bad = []
        flags = self.flags
        if len(set(flags)) != len(flags):
            bad.append("vertex blocks overlap")
        if set(self.involution) != set(flags):
            bad.append("involution domain is not the flag set")
        else:
            for f, g in self.involution.items():
                if self.involution.get(g) != f:
                    bad.append("involution not self-inverse at %r" % (f,))
                    break
        legs = self.leg_flags()
        if set(self.legs) != set(legs):
            bad.append("leg labels do not match the fixed flags")
        elif self.legs and sorted(self.legs.values()) != list(range(1, len(legs) + 1)):
            bad.append("leg labels are not a bijection onto 1..n")
        if set(self.genus) != set(range(len(self.vertices))):
            bad.append("genus map domain mismatch")
        else:
            for i in range(len(self.vertices)):
                g = self.genus[i]
                if g < 0:
                    bad.append("negative genus at vertex %d" % i)
                if 2 * g + self.valence(i) - 2 <= 0:
                    bad.append("unstable vertex %d" % i)
        if not self._connected():
            bad.append("graph not connected")
        return (not bad), bad

    def _connected(self):
        if not self.vertices:
            return False
        adj = {i: set() for i in range(len(self.vertices))}
        for f, g in self.edges():
            a, b = self.vertex_of(f), self.vertex_of(g)
            adj[a].add(b)
            adj[b].add(a)
        seen = {0}
        todo = [0]
        while todo:
            for w in adj[todo.pop()]:
                if w not in seen:
                    seen.add(w)
                    todo.append(w)
        return len(seen) == len(self.vertices)

    def total_genus(self):
        """Sum of vertex genera plus the first Betti number."""
        ok, bad = self.validate()
        if not ok:
            raise ValueError("invalid graph: %s" % "; ".join(bad))
        b1 = len(self.edges()) - len(self.vertices) + 1
        return sum(self.genus.values()) + b1

    def edge_count_identity(self):
        """|Edge| = b(G) - 1 + sum_v (1 - b(v))."""
        return len(self.edges()) == self.total_genus() - 1 + sum(
            1 - self.genus[i] for i in range(len(self.vertices)))

    # -- summary and isomorphism -----------------------------------------

    def _summary(self, perm):
        """Isomorphism-complete summary after relabeling vertex i -> perm[i]:
        per-vertex (genus, leg labels, loop count) plus the inter-vertex
        edge multiset.  Flags carry no structure beyond vertex membership."""
        vdata = [None] * len(self.vertices)
        for i in range(len(self.vertices)):
            labels = tuple(sorted(self.legs[f] for f in self.vertices[i]
                                  if self.involution[f] == f))
            vdata[perm[i]] = (self.genus[i], labels)
        loops = [0] * len(self.vertices)
        inter = []
        for f, g in self.edges():
            a, b = perm[self.vertex_of(f)], perm[self.vertex_of(g)]
            if a == b:
                loops[a] += 1
            else:
                inter.append((min(a, b), max(a, b)))
        return (tuple((vd[0], vd[1], loops[i]) for i, vd in enumerate(vdata)),
                tuple(sorted(inter)))

    def canonical_summary(self):
        k = len(self.vertices)
        return min(self._summary(p) for p in itertools.permutations(range(k)))

    # -- contraction ------------------------------------------------------

    def contract(self, contracted):
        """Collapse the given edges; merging along a non-loop edge unites the
        two vertices (genera add), collapsing a loop raises genus by one."""
        contracted = [tuple(sorted(e)) for e in contracted]
        edge_set = set(self.edges())
        for e in contracted:
            if e not in edge_set:
                raise ValueError("not an edge: %r" % (e,))
        parent = list(range(len(self.vertices)))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        genus_bump = {}
        for f, g in contracted:
            a, b = find(self.vertex_of(f)), find(self.vertex_of(g))
            if a == b:
                genus_bump[a] = genus_bump.get(a, 0) + 1
            else:
                parent[max(a, b)] = min(a, b)
        roots = sorted({find(i) for i in range(len(self.vertices))})
        new_index = {r: k for k, r in enumerate(roots)}
        removed = {f for e in contracted for f in e}
        new_vertices = [[] for _ in roots]
        new_genus = {k: 0 for k in range(len(roots))}
        for i in range(len(self.vertices)):
            k = new_index[find(i)]
            new_vertices[k].extend(f for f in self.vertices[i] if f not in removed)
            new_genus[k] += self.genus[i]
        for r, bump in genus_bump.items():
            new_genus[new_index[find(r)]] += bump
        new_inv = {f: g for f, g in self.involution.items()
                   if f not in removed and g not in removed}
        target = StableGraph(new_vertices, new_inv, new_genus, dict(self.legs))
        return Contraction(self, contracted, target)

    # -- serialization ----------------------------------------------------

    def to_json(self):
        return {
            "flags": list(self.flags),
            "vertices": [list(v) for v in self.vertices],
            "involution": sorted([f, g] for f, g in self.edges()),
            "genus": {str(i): self.genus[i] for i in sorted(self.genus)},
            "legs": {str(f): self.legs[f] for f in sorted(self.legs)},
        }

    @staticmethod
    def from_json(data):
        inv = {}
        for f, g in data["involution"]:
            inv[f] = g
            inv[g] = f
        for f in data["flags"]:
            inv.setdefault(f, f)
        return StableGraph(data["vertices"], inv,
                           {int(k): v for k, v in data["genus"].items()},
                           {int(k): v for k, v in data["legs"].items()})

    def __repr__(self):
        return "StableGraph(V=%d, E=%d, legs=%d, b=%s)" % (
            len(self.vertices), len(self.edges()), self.n_legs(),
            self.total_genus() if self.validate()[0] else "?")


class Contraction:
    """An edge contraction with its source and target graphs."""

    def __init__(self, source, contracted_edges, target):
        self.source = source
        self.contracted_edges = list(contracted_edges)
        self.target = target


def validate(g):
    return g.validate()


def total_genus(g):
    return g.total_genus()


def contract(g, edges):
    return g.contract(edges)


def edge_count_identity(g):
    return g.edge_count_identity()


def are_isomorphic(g1, g2):
    """Leg-label-preserving isomorphism (flags carry no extra structure)."""
    if len(g1.flags) > 16 or len(g2.flags) > 16:
        raise ValueError("size bound exceeded")
    if len(g1.vertices) != len(g2.vertices) or len(g1.flags) != len(g2.flags):
        return False
    return g1.canonical_summary() == g2.canonical_summary()


def star(n, b, loops=0):
    """The one-vertex graph with n numbered legs, genus b, and the given
    number of loops."""
    flags = list(range(n + 2 * loops))
    inv = {f: f for f in range(n)}
    for i in range(loops):
        a, c = n + 2 * i, n + 2 * i + 1
        inv[a] = c
        inv[c] = a
    legs = {f: f + 1 for f in range(n)}
    return StableGraph([flags], inv, {0: b}, legs)


def _build_graph(v_count, inter_edges, loop_counts, genera, leg_vertex, n):
    flags_at = [[] for _ in range(v_count)]
    inv = {}
    legs = {}
    nxt = [0]

    def fresh(v):
        f = nxt[0]
        nxt[0] += 1
        flags_at[v].append(f)
        return f

    for label in range(1, n + 1):
        f = fresh(leg_vertex[label - 1])
        inv[f] = f
        legs[f] = label
    for a, b in inter_edges:
        f, g = fresh(a), fresh(b)
        inv[f] = g
        inv[g] = f
    for v in range(v_count):
        for _ in range(loop_counts[v]):
            f, g = fresh(v), fresh(v)
            inv[f] = g
            inv[g] = f
    return StableGraph(flags_at, inv, dict(enumerate(genera)), legs)


def enumerate_iso_classes(n, b, max_flags=16):
    """All leg-labeled isomorphism classes with n legs and total genus b,
    restricted to graphs with at most max_flags flags."""
    if 2 * b + n - 2 <= 0:
        raise ValueError("unstable (n, b)")
    if max_flags > 16:
        raise ValueError("max_flags bound is 16")
    out = []
    seen = set()
    max_edges = (max_flags - n) // 2
    # stability bounds: summing 2b(v) + n(v) - 2 >= 1 over vertices gives
    # V <= 2b + n - 2, and E = b1 + V - 1 <= b + V - 1
    max_vertices = min(max_edges + 1, max(2 * b + n - 2, 1))
    for v_count in range(1, max_vertices + 1):
        for e_count in range(v_count - 1, min(max_edges, b + v_count - 1) + 1):
            b1 = e_count - v_count + 1
            g_total = b - b1
            if g_total < 0:
                continue
            pairs = [(a, c) for a in range(v_count) for c in range(a, v_count)]
            for edge_multi in itertools.combinations_with_replacement(pairs, e_count):
                loop_counts = [0] * v_count
                inter = []
                for a, c in edge_multi:
                    if a == c:
                        loop_counts[a] += 1
                    else:
                        inter.append((a, c))
                for genera in _compositions(g_total, v_count):
                    for leg_vertex in itertools.product(range(v_count), repeat=n):
                        g = _build_graph(v_count, inter, loop_counts, genera,
                                         leg_vertex, n)
                        ok, _ = g.validate()
                        if not ok:
                            continue
                        key = g.canonical_summary()
                        if key in seen:
                            continue
                        seen.add(key)
                        out.append(g)
    out.sort(key=lambda g: g.canonical_summary())
    return out


def _compositions(total, parts):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest
