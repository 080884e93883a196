#
#   Tropical Morse trees and graphs on the circle R/dZ: combinatorial
#   ribbon types, the exact constraint linear system, validity checks,
#   rigid-solution extraction with area and sign, and degeneration
#   analysis of one-dimensional solution families.
#

import itertools
from fractions import Fraction
from math import isqrt

from .base_geometry import CirclePoint, IntersectionPoint
from .exactlinalg import LinExpr, eliminate, determinant


def sqrt_upper(x):
    """A rational upper bound for sqrt(x), x a nonnegative Fraction."""
    x = Fraction(x)
    assert x >= 0
    return Fraction(isqrt(x.numerator * x.denominator) + 1, x.denominator)


def _sign(x):
    return (x > 0) - (x < 0)


class TypeRejected(Exception):
    """Internal: a candidate ribbon structure fails a labeling filter."""


class RibbonType:
    """A trivalent ribbon graph with numbered legs carrying intersection
    points, boundary faces matched to the cycle structure sigma, strand
    Lagrangians along every edge side, and the induced edge labels.

    Half-edges are integers; at_vertex lists each vertex's half-edges in
    counterclockwise cyclic order; pairing matches the two halves of each
    internal edge; leg_slot maps leg half-edges to slot numbers.
    """

    def __init__(self, at_vertex, pairing, leg_slot, points, sigma=None,
                 winding=0):
        self.at_vertex = [list(v) for v in at_vertex]
        self.pairing = dict(pairing)
        self.leg_slot = dict(leg_slot)
        self.points = dict(points)
        self.winding = int(winding)
        self.vertex_of = {}
        for i, v in enumerate(self.at_vertex):
            for h in v:
                self.vertex_of[h] = i
        self.V = len(self.at_vertex)
        self.legs = {s: h for h, s in self.leg_slot.items()}
        self.slots = sorted(self.legs)
        self.n = len(self.slots)
        self.edges = sorted((h, p) for h, p in self.pairing.items() if h < p)
        self.E = len(self.edges)
        self.b1 = self.E - self.V + 1
        self.d = next(iter(self.points.values())).base.d
        # leg labels and offset differences
        self.n_leg = {s: p.slope_drop() for s, p in self.points.items()}
        self.off_leg = {s: p.source.offset - p.target.offset
                        for s, p in self.points.items()}
        self._build_faces_and_strands(sigma)
        self.marked = mark_edges(self)
        self.code = self._canonical_code()

    # -- cyclic structure -------------------------------------------------

    def cyclic_next(self, h):
        v = self.at_vertex[self.vertex_of[h]]
        return v[(v.index(h) + 1) % len(v)]

    def _walk_next(self, h):
        """Face-walk successor of half-edge h."""
        if h in self.leg_slot:
            return self.cyclic_next(h)
        return self.cyclic_next(self.pairing[h])

    def _build_faces_and_strands(self, sigma):
        halves = sorted(self.vertex_of)
        seen = set()
        faces = []
        for h0 in halves:
            if h0 in seen:
                continue
            face = []
            h = h0
            while True:
                face.append(h)
                seen.add(h)
                h = self._walk_next(h)
                if h == h0:
                    break
            faces.append(face)
        self.faces = faces
        face_slots = [[self.leg_slot[h] for h in f if h in self.leg_slot]
                      for f in faces]
        if any(not fs for fs in face_slots):
            raise TypeRejected("face without legs")
        if sigma is None:
            sigma = [tuple(fs) for fs in face_slots]
        self.b = len(sigma) - 1
        if len(faces) != self.b + 1:
            raise TypeRejected("face count %d != %d" % (len(faces), self.b + 1))
        # match each face to a sigma cycle up to rotation
        assignment = {}
        used = set()
        for fi, fs in enumerate(face_slots):
            hit = None
            for ci, cyc in enumerate(sigma):
                if ci in used or len(cyc) != len(fs):
                    continue
                for r in range(len(fs)):
                    if tuple(fs[r:] + fs[:r]) == tuple(cyc):
                        hit = ci
                        break
                if hit is not None:
                    break
            if hit is None:
                raise TypeRejected("face %r matches no cycle" % (fs,))
            used.add(hit)
            assignment[fi] = hit
        self.sigma = [tuple(c) for c in sigma]
        # strand Lagrangians: walk each face starting right after a bounce
        strand = {}
        for face in faces:
            start = next(i for i, h in enumerate(face) if h in self.leg_slot)
            items = face[start:] + face[:start]
            cur = self.points[self.leg_slot[items[0]]].target
            for h in items[1:] + items[:1]:
                if h in self.leg_slot:
                    p = self.points[self.leg_slot[h]]
                    if p.source != cur:
                        raise TypeRejected("chain mismatch at slot %d"
                                           % self.leg_slot[h])
                    cur = p.target
                else:
                    strand[h] = cur
        self.strand = strand
        self.n_edge = {}
        self.off_edge = {}
        for ei, (h1, h2) in enumerate(self.edges):
            self.n_edge[ei] = strand[h1].n - strand[h2].n
            self.off_edge[ei] = strand[h2].offset - strand[h1].offset

    def edge_index(self, e):
        return self.edges.index(e)

    def _canonical_code(self):
        start = self.legs[min(self.slots)]
        v0 = self.vertex_of[start]
        vnum = {v0: 0}
        entry = {v0: start}
        queue = [v0]
        tokens = []

        def rotated(v):
            flags = self.at_vertex[v]
            i = flags.index(entry[v])
            return flags[i:] + flags[:i]

        while queue:
            v = queue.pop(0)
            for f in rotated(v):
                if f in self.leg_slot:
                    tokens.append(("L", self.leg_slot[f]))
                else:
                    p = self.pairing[f]
                    pv = self.vertex_of[p]
                    if pv not in vnum:
                        vnum[pv] = len(vnum)
                        entry[pv] = p
                        queue.append(pv)
                    tokens.append(("E", vnum[pv], rotated(pv).index(p)))
        return tuple(tokens)

    def to_json(self):
        return {
            "at_vertex": [list(v) for v in self.at_vertex],
            "pairing": sorted([h, p] for h, p in self.pairing.items() if h < p),
            "legs": {str(s): h for s, h in self.legs.items()},
            "sigma": [list(c) for c in self.sigma],
            "winding": self.winding,
            "labels": {"legs": {str(s): self.n_leg[s] for s in self.slots},
                       "edges": [self.n_edge[ei] for ei in range(self.E)]},
        }

    def __repr__(self):
        return "RibbonType(n=%d, b=%d, V=%d, W=%d)" % (
            self.n, self.b, self.V, self.winding)


def mark_edges(t):
    """Marked edges: one per independent cycle (the non-tree edges of a
    deterministic spanning tree)."""
    seen = {0}
    tree = set()
    changed = True
    while changed:
        changed = False
        for ei, (h1, h2) in enumerate(t.edges):
            if ei in tree:
                continue
            a, b = t.vertex_of[h1], t.vertex_of[h2]
            if (a in seen) != (b in seen):
                tree.add(ei)
                seen.update((a, b))
                changed = True
    return [ei for ei in range(t.E) if ei not in tree]


class ConstraintSystem:
    """The exact linear system of a ribbon type in the block layout
    columns = {phi(v)} + {phi(p) for one distinguished leg} + {v_e(0)},
    rows = one balancing condition per vertex + one Lagrangian condition
    per marked edge."""

    def __init__(self, matrix, distinguished_slot, t):
        self.matrix = matrix
        self.distinguished_slot = distinguished_slot
        self.type = t

    @property
    def B(self):
        """The square tail block (phi(p) and seed columns)."""
        return [row[self.type.V:] for row in self.matrix]

    def det_B(self):
        return determinant(self.B)


def build_system(t, distinguished_slot=None):
    """Assemble the constraint matrix of a ribbon type."""
    if distinguished_slot is None:
        distinguished_slot = min(s for s in t.slots if t.n_leg[s] != 0)
    V, E = t.V, t.E
    ncols = V + 1 + E
    col_p = V
    rows = []
    for u in range(V):
        row = [Fraction(0)] * ncols
        for h in t.at_vertex[u]:
            if h in t.leg_slot:
                s = t.leg_slot[h]
                if t.n_leg[s] == 0:
                    continue
                row[u] += t.n_leg[s]
                if s == distinguished_slot:
                    row[col_p] -= t.n_leg[s]
        for ei, (h1, h2) in enumerate(t.edges):
            tail, head = t.vertex_of[h1], t.vertex_of[h2]
            if head == u:
                row[V + 1 + ei] += 1
                row[u] += t.n_edge[ei]
                row[tail] -= t.n_edge[ei]
            if tail == u:
                row[V + 1 + ei] -= 1
        rows.append(row)
    for ei in t.marked:
        row = [Fraction(0)] * ncols
        h1, _ = t.edges[ei]
        row[V + 1 + ei] += 1
        row[t.vertex_of[h1]] -= t.n_edge[ei]
        rows.append(row)
    return ConstraintSystem(rows, distinguished_slot, t)


class SolveResult:
    """Symbolic solution of a ribbon type's constraint system.

    Unknowns are the vertex images phi(v) and the edge seeds v_e(0);
    right-hand sides carry one integer lift symbol ("k", slot) per pinned
    or nonzero-label leg and one ("kappa", edge) symbol per marked edge.
    """

    def __init__(self, t, lin, unknowns, k_syms, kappa_syms):
        self.type = t
        self.lin = lin
        self.unknowns = unknowns
        self.k_syms = k_syms
        self.kappa_syms = kappa_syms

    @property
    def dimension(self):
        return self.lin.dimension


def solve(t):
    """Build and eliminate the exact system with symbolic lattice branches."""
    V, E, d = t.V, t.E, t.d
    unknowns = [("phi", v) for v in range(V)] + [("seed", ei) for ei in range(E)]
    col = {u: i for i, u in enumerate(unknowns)}
    rows = []
    rhs = []
    k_syms = []
    for s in t.slots:
        p = t.points[s]
        if t.n_leg[s] != 0 or p.degree == 1:
            k_syms.append(("k", s))
    kset = set(k_syms)

    def p_expr(s):
        base = 0 if t.n_leg[s] == 0 else t.points[s].base.value
        return LinExpr(base) + LinExpr.sym(("k", s), d)

    # balancing at every vertex
    for u in range(V):
        row = [Fraction(0)] * len(unknowns)
        r = LinExpr(0)
        for h in t.at_vertex[u]:
            if h in t.leg_slot:
                s = t.leg_slot[h]
                if t.n_leg[s] == 0:
                    continue
                row[col[("phi", u)]] += t.n_leg[s]
                r = r + t.n_leg[s] * p_expr(s)
        for ei, (h1, h2) in enumerate(t.edges):
            tail, head = t.vertex_of[h1], t.vertex_of[h2]
            W = t.winding if ei in t.marked else 0
            if head == u:
                row[col[("seed", ei)]] += 1
                row[col[("phi", u)]] += t.n_edge[ei]
                row[col[("phi", tail)]] -= t.n_edge[ei]
                r = r - LinExpr(t.n_edge[ei] * d * W)
            if tail == u:
                row[col[("seed", ei)]] -= 1
        rows.append(row)
        rhs.append(r)
    # pins for degree-1 legs
    for s in t.slots:
        if t.points[s].degree == 1:
            u = t.vertex_of[t.legs[s]]
            row = [Fraction(0)] * len(unknowns)
            row[col[("phi", u)]] += 1
            rows.append(row)
            rhs.append(p_expr(s))
    # Lagrangian condition on marked edges
    kappa_syms = []
    for ei in t.marked:
        h1, _ = t.edges[ei]
        row = [Fraction(0)] * len(unknowns)
        row[col[("seed", ei)]] += 1
        row[col[("phi", t.vertex_of[h1])]] -= t.n_edge[ei]
        rows.append(row)
        rhs.append(LinExpr(t.off_edge[ei]) + LinExpr.sym(("kappa", ei)))
        kappa_syms.append(("kappa", ei))
    lin = eliminate(rows, rhs)
    return SolveResult(t, lin, unknowns, [s for s in k_syms if s in kset],
                       kappa_syms)


class TMGSolution:
    """A numeric (exact rational) tropical Morse graph solution."""

    def __init__(self, rtype, phi, seeds, p_lift, branch=None, free=None):
        self.type = rtype
        self.phi = list(phi)
        self.seeds = dict(seeds)
        self.p_lift = dict(p_lift)
        self.branch = dict(branch or {})
        self.free = dict(free or {})

    def dphi_lift(self, ei):
        t = self.type
        h1, h2 = t.edges[ei]
        W = t.winding if ei in t.marked else 0
        return (self.phi[t.vertex_of[h2]] - self.phi[t.vertex_of[h1]]
                + t.d * W)

    def edge_values(self, ei):
        v0 = self.seeds[ei]
        return v0, v0 + self.type.n_edge[ei] * self.dphi_lift(ei)

    def to_json(self):
        return {
            "type": self.type.to_json(),
            "phi": {str(v): str(x) for v, x in enumerate(self.phi)},
            "seeds": {str(ei): str(x) for ei, x in sorted(self.seeds.items())},
        }


def instantiate(sr, branch, free=None):
    """Evaluate a SolveResult at an integer branch and free-parameter
    assignment, producing a TMGSolution."""
    free = dict(free or {})
    assign = dict(branch)
    for c in sr.lin.free_cols:
        assign[("_free", c)] = free.get(("_free", c), 0)
    t = sr.type
    vals = [x.evaluate(assign) for x in sr.lin.x]
    phi = vals[:t.V]
    seeds = {ei: vals[t.V + ei] for ei in range(t.E)}
    p_lift = {}
    for s in t.slots:
        if ("k", s) in branch:
            base = 0 if t.n_leg[s] == 0 else t.points[s].base.value
            p_lift[s] = base + t.d * branch[("k", s)]
        else:
            p_lift[s] = None
    return TMGSolution(t, phi, seeds, p_lift, branch, free)


def validate(sol):
    """Exact validity of a solution: edge direction and non-collapse,
    pin consistency, and the fiber lattice condition on every edge."""
    t = sol.type
    bad = []
    for ei in range(t.E):
        v0, v1 = sol.edge_values(ei)
        dphi = sol.dphi_lift(ei)
        ne = t.n_edge[ei]
        if dphi == 0:
            bad.append("edge %d collapsed" % ei)
            continue
        if ne != 0:
            if v0 == 0 or v1 == 0 or not (_sign(v0) == _sign(v1) == _sign(dphi)):
                bad.append("edge %d direction" % ei)
        else:
            if v0 == 0 or _sign(v0) != _sign(dphi):
                bad.append("edge %d (flat) direction" % ei)
        h1, _ = t.edges[ei]
        lag = v0 - ne * sol.phi[t.vertex_of[h1]] - t.off_edge[ei]
        if lag.denominator != 1:
            bad.append("edge %d fiber lattice condition" % ei)
    for s in t.slots:
        p = t.points[s]
        u = t.vertex_of[t.legs[s]]
        if p.degree == 1 and sol.p_lift[s] is not None:
            if sol.phi[u] != sol.p_lift[s]:
                bad.append("slot %d pin" % s)
    if not bad:
        # output identity: the weighted leg positions balance mod d
        tot = sum(t.n_leg[s] * sol.p_lift[s] for s in t.slots
                  if t.n_leg[s] != 0)
        if (Fraction(tot) / t.d).denominator != 1:
            bad.append("weighted leg positions not balanced mod d")
    return (not bad), bad


def surface_area(sol):
    """Exact area of the thickened solution: trapezoids over edges plus
    triangles over the non-collapsed legs."""
    t = sol.type
    area = Fraction(0)
    for ei in range(t.E):
        v0, v1 = sol.edge_values(ei)
        area += abs(sol.dphi_lift(ei)) * (abs(v0) + abs(v1)) / 2
    for s in t.slots:
        if t.n_leg[s] == 0 or sol.p_lift[s] is None:
            continue
        u = t.vertex_of[t.legs[s]]
        area += abs(t.n_leg[s]) * (sol.phi[u] - sol.p_lift[s]) ** 2 / 2
    return area


def corner_local_sign(sol, s):
    """Local sign of the degree-1 corner at slot s: +1 iff the boundary
    walk leaving the corner first moves in the increasing base direction."""
    t = sol.type
    h = t.legs[s]
    x = t._walk_next(h)
    while x != h:
        if x in t.leg_slot:
            s2 = t.leg_slot[x]
            u = t.vertex_of[x]
            if sol.p_lift[s2] is not None:
                disp = sol.p_lift[s2] - sol.phi[u]
                if disp != 0:
                    return _sign(disp)
        else:
            ei = t.edge_index(tuple(sorted((x, t.pairing[x]))))
            disp = sol.dphi_lift(ei)
            if x != t.edges[ei][0]:
                disp = -disp
            if disp != 0:
                return _sign(disp)
        x = t._walk_next(x)
    return 1


def _boundary_arcs(sol):
    """The boundary arcs between consecutive corners: for every corner
    slot s, the lifted base interval travelled to the next corner of its
    face, together with the strand Lagrangian carrying the arc.

    Walking a face accumulates the lifted edge displacements, so arcs
    remain well-defined across the deck-shift jump of a wound marked
    edge.  Returns a list of (slot, strand, lift_start, lift_end).
    """
    t = sol.type
    out = []
    for face in t.faces:
        for i, h in enumerate(face):
            if h not in t.leg_slot:
                continue
            s = t.leg_slot[h]
            start = sol.p_lift[s]
            if start is None:
                start = sol.phi[t.vertex_of[h]]
            # walk to the next leg, accumulating the frame shift
            shift = Fraction(0)
            j = i
            while True:
                x = face[(j + 1) % len(face)]
                j += 1
                if x in t.leg_slot:
                    s2 = t.leg_slot[x]
                    end = sol.p_lift[s2]
                    if end is None:
                        end = sol.phi[t.vertex_of[x]]
                    out.append((s, t.points[s].target, start, end + shift))
                    break
                # the walk re-enters the neighbouring vertex through the
                # paired half-edge; record the lift jump it carries
                ei = t.edge_index(tuple(sorted((x, t.pairing[x]))))
                dphi = sol.dphi_lift(ei)
                if x != t.edges[ei][0]:
                    dphi = -dphi
                a = sol.phi[t.vertex_of[x]]
                b = sol.phi[t.vertex_of[t.pairing[x]]]
                shift += dphi - (b - a)
    return out


def _marked_fiber_crossings(strand, lo, hi, d):
    """Lattice fibers y in d*Z strictly between the lifted arc endpoints,
    counted only on slope-zero strands."""
    if strand.n != 0:
        return 0
    lo, hi = (lo, hi) if lo <= hi else (hi, lo)
    count = 0
    k = (lo / d).__floor__() + 1
    while k * d < hi:
        if k * d > lo:
            count += 1
        k += 1
    return count


def boundary_slot_order(sol):
    """Corner slots in the cyclic order of the boundary walk, one cycle
    per face of the ribbon type."""
    t = sol.type
    return [[t.leg_slot[h] for h in face if h in t.leg_slot]
            for face in t.faces]


def surface_sign(sol):
    """Parity of the marked-fiber crossings of the boundary.

    Every boundary arc lying on a slope-zero Lagrangian contributes -1
    per marked fiber y in d*Z that it crosses; corners and arcs on
    sloped Lagrangians contribute nothing.  The crossing count only
    depends on the lifted arc endpoints, so it is insensitive to the
    backtracking of the boundary walk along the tree.
    """
    t = sol.type
    sign = 1
    for _s, strand, lo, hi in _boundary_arcs(sol):
        if _marked_fiber_crossings(strand, lo, hi, t.d) % 2:
            sign = -sign
    return sign


# -- enumeration of combinatorial types -----------------------------------


class _Graph:
    """Mutable abstract trivalent graph used during enumeration: each
    vertex is a list of items ("leg", slot) or ("edge", eid)."""

    def __init__(self):
        self.vertices = []
        self.ends = {}
        self.next_eid = 0

    def copy(self):
        g = _Graph()
        g.vertices = [list(v) for v in self.vertices]
        g.ends = {e: list(p) for e, p in self.ends.items()}
        g.next_eid = self.next_eid
        return g

    def add_edge(self, u, v):
        eid = self.next_eid
        self.next_eid += 1
        self.ends[eid] = [u, v]
        self.vertices[u].append(("edge", eid))
        self.vertices[v].append(("edge", eid))
        return eid

    def arcs(self):
        """All subdividable positions: legs and internal edges."""
        out = []
        for u, items in enumerate(self.vertices):
            for it in items:
                if it[0] == "leg":
                    out.append(("leg", u, it[1]))
        for eid in sorted(self.ends):
            out.append(("edge", eid))
        return out

    def subdivide(self, arc):
        """Split the arc with a new vertex; returns its index (the new
        vertex has one open slot)."""
        w = len(self.vertices)
        self.vertices.append([])
        if arc[0] == "leg":
            _, u, slot = arc
            self.vertices[u].remove(("leg", slot))
            eid = self.next_eid
            self.next_eid += 1
            self.ends[eid] = [u, w]
            self.vertices[u].append(("edge", eid))
            self.vertices[w].append(("edge", eid))
            self.vertices[w].append(("leg", slot))
        else:
            _, eid = arc
            u, v = self.ends[eid]
            self.ends[eid] = [u, w]
            self.vertices[v].remove(("edge", eid))
            eid2 = self.next_eid
            self.next_eid += 1
            self.ends[eid2] = [w, v]
            self.vertices[w].append(("edge", eid))
            self.vertices[w].append(("edge", eid2))
            self.vertices[v].append(("edge", eid2))
        return w


def _trivalent_trees(slots):
    """All trivalent trees on the given leg slots, by leaf insertion."""
    base = _Graph()
    base.vertices.append([("leg", slots[0]), ("leg", slots[1]),
                          ("leg", slots[2])])
    trees = [base]
    for s in slots[3:]:
        nxt = []
        for g in trees:
            for arc in g.arcs():
                g2 = g.copy()
                w = g2.subdivide(arc)
                g2.vertices[w].append(("leg", s))
                nxt.append(g2)
        trees = nxt
    return trees


def _abstract_graphs(n, b):
    """Abstract trivalent graphs with n numbered legs and first Betti
    number b in {0, 1}."""
    slots = list(range(1, n + 1))
    if b == 0:
        if n < 3:
            return []
        return _trivalent_trees(slots)
    out = []
    if n == 1:
        g = _Graph()
        g.vertices.append([("leg", 1)])
        eid = g.next_eid
        g.next_eid += 1
        g.ends[eid] = [0, 0]
        g.vertices[0].append(("edge", eid))
        g.vertices[0].append(("edge", eid))
        out.append(g)
        return out
    if n == 2:
        g = _Graph()  # two vertices joined by a double edge, one leg each
        g.vertices.append([("leg", 1)])
        g.vertices.append([("leg", 2)])
        g.add_edge(0, 1)
        g.add_edge(0, 1)
        out.append(g)
        g = _Graph()  # both legs on one vertex, pendant vertex with a loop
        g.vertices.append([("leg", 1), ("leg", 2)])
        g.vertices.append([])
        g.add_edge(0, 1)
        eid = g.next_eid
        g.next_eid += 1
        g.ends[eid] = [1, 1]
        g.vertices[1].append(("edge", eid))
        g.vertices[1].append(("edge", eid))
        out.append(g)
        return out
    for tree in _trivalent_trees(slots):
        arcs = tree.arcs()
        # connect two subdivision points by a new edge
        for i in range(len(arcs)):
            for j in range(i, len(arcs)):
                g = tree.copy()
                w1 = g.subdivide(arcs[i])
                arc_j = arcs[j]
                if i == j:
                    # second point on the same arc: subdivide the piece
                    if arcs[i][0] == "leg":
                        arc_j = ("leg", w1, arcs[i][2])
                    else:
                        arc_j = arcs[i]
                w2 = g.subdivide(arc_j)
                g.add_edge(w1, w2)
                out.append(g)
        # pendant loop vertex off one subdivision point
        for arc in arcs:
            g = tree.copy()
            w = g.subdivide(arc)
            z = len(g.vertices)
            g.vertices.append([])
            g.add_edge(w, z)
            eid = g.next_eid
            g.next_eid += 1
            g.ends[eid] = [z, z]
            g.vertices[z].append(("edge", eid))
            g.vertices[z].append(("edge", eid))
            out.append(g)
    return out


def _to_half_edges(g):
    """Turn an abstract graph into (at_vertex, pairing, leg_slot) with
    the vertex item order as the cyclic order."""
    at_vertex = []
    pairing = {}
    leg_slot = {}
    open_end = {}
    h = 0
    for items in g.vertices:
        flags = []
        for it in items:
            if it[0] == "leg":
                leg_slot[h] = it[1]
            else:
                eid = it[1]
                if eid in open_end:
                    pairing[h] = open_end[eid]
                    pairing[open_end[eid]] = h
                    del open_end[eid]
                else:
                    open_end[eid] = h
            flags.append(h)
            h += 1
        at_vertex.append(flags)
    assert not open_end
    return at_vertex, pairing, leg_slot


def enumerate_types(points, b, sigma=None, Q=Fraction(4)):
    """All labeled ribbon types on the given intersection points.

    points: list of IntersectionPoint in slot order 1..n; sigma: list of
    slot cycles (default one full cycle); b in {0, 1}; winding variants
    within the Q-derived window are emitted for b = 1.
    """
    n = len(points)
    if not 2 * b + n - 2 > 0:
        raise ValueError("unstable (n, b) = (%d, %d)" % (n, b))
    if b not in (0, 1):
        raise ValueError("only b in {0, 1} is supported")
    if sigma is None:
        sigma = [tuple(range(1, n + 1))]
    sigma = [tuple(c) for c in sigma]
    if len(sigma) != b + 1:
        raise ValueError("sigma must have b+1 cycles")
    pts = {i + 1: p for i, p in enumerate(points)}
    if all(p.slope_drop() == 0 for p in points):
        return []
    d = points[0].base.d
    Q = Fraction(Q)
    out = []
    seen = set()
    for g in _abstract_graphs(n, b):
        at_vertex, pairing, leg_slot = _to_half_edges(g)
        V = len(at_vertex)
        for flips in itertools.product((False, True), repeat=V):
            av = [list(reversed(v)) if f else list(v)
                  for v, f in zip(at_vertex, flips)]
            try:
                t = RibbonType(av, pairing, leg_slot, pts, sigma, 0)
            except TypeRejected:
                continue
            if t.code in seen:
                continue
            seen.add(t.code)
            if b == 0:
                out.append(t)
                continue
            # winding variants on the marked edge: the lifted cycle travel
            # d*|W| is at most the sum of the cycle edges' spreads
            cyc = _cycle_vertices(t)
            wmax = 0
            for ei in range(t.E):
                h1, h2 = t.edges[ei]
                if t.vertex_of[h1] in cyc and t.vertex_of[h2] in cyc:
                    wmax += _edge_spread(t, ei, Q)
            wmax = int(wmax / d) + 1
            for W in range(-wmax, wmax + 1):
                out.append(RibbonType(av, pairing, leg_slot, pts, sigma, W))
    out.sort(key=lambda t: (t.code, t.winding))
    return out


def _edge_spread(t, ei, Q):
    """Upper bound for |base displacement| along edge ei at area <= Q."""
    ne = t.n_edge[ei]
    if ne != 0:
        return sqrt_upper(2 * Q / abs(ne))
    off = t.off_edge[ei] % 1
    delta = Fraction(1) if off == 0 else min(off, 1 - off)
    return Q / delta


def expected_dimension(points, b):
    n = len(points)
    return n - 2 + 2 * b - sum(p.degree for p in points)


# -- branch enumeration ----------------------------------------------------


def _branch_assignments(sr, Q):
    """Integer lattice-branch assignments compatible with the eliminated
    system's constraints and the area-cutoff windows."""
    t = sr.type
    d = t.d
    pinned = [s for s in t.slots if t.points[s].degree == 1]
    if not pinned:
        return
    anchor = min(pinned)
    anchor_base = 0 if t.n_leg[anchor] == 0 else t.points[anchor].base.value
    # every vertex is reachable from the anchor's (pinned) vertex through
    # spanning-tree edges, so unmarked edges alone bound the base spread
    spread = sum(_edge_spread(t, ei, Q) for ei in range(t.E)
                 if ei not in t.marked)
    windows = {}
    for sym in sr.k_syms:
        s = sym[1]
        if s == anchor:
            continue
        base = 0 if t.n_leg[s] == 0 else t.points[s].base.value
        reach = spread
        if t.n_leg[s] != 0:
            reach += sqrt_upper(2 * Q / abs(t.n_leg[s]))
        lo = anchor_base - reach - base
        hi = anchor_base + reach - base
        windows[sym] = (int(lo / d) - 1, int(hi / d) + 1)
    vmax = sum(abs(t.n_leg[s]) * sqrt_upper(2 * Q / abs(t.n_leg[s]))
               for s in t.slots if t.n_leg[s] != 0)
    vmax += sum(abs(t.n_edge[ei]) * _edge_spread(t, ei, Q)
                for ei in range(t.E))
    for sym in sr.kappa_syms:
        ei = sym[1]
        h1, _ = t.edges[ei]
        phimax = abs(anchor_base) + spread
        bound = vmax + abs(t.n_edge[ei]) * phimax + abs(t.off_edge[ei]) + 2
        windows[sym] = (int(-bound) - 1, int(bound) + 1)
    syms = [s for s in sr.k_syms if s != ("k", anchor)] + list(sr.kappa_syms)
    # eliminate the constraints over the branch symbols
    cons = [c.substitute({("k", anchor): 0}) for c in sr.lin.constraints]
    cons = [c for c in cons if not (c.is_constant() and c.const == 0)]
    if any(c.is_constant() for c in cons):
        return
    rows = [[c.coeff(s) for s in syms] for c in cons]
    rhs = [LinExpr(-c.const) for c in cons]
    if rows:
        red = eliminate(rows, rhs)
        if any(not (c.is_constant() and c.const == 0) for c in red.constraints):
            return
        free_idx = red.free_cols
    else:
        red = None
        free_idx = list(range(len(syms)))
    ranges = []
    for i in free_idx:
        lo, hi = windows[syms[i]]
        ranges.append(range(lo, hi + 1))
    for combo in itertools.product(*ranges):
        assign = {("k", anchor): 0}
        fvals = {("_free", c): v for c, v in zip(free_idx, combo)}
        ok = True
        for i, sym in enumerate(syms):
            if red is None:
                val = Fraction(fvals[("_free", i)])
            else:
                val = red.x[i].evaluate(fvals)
            if val.denominator != 1:
                ok = False
                break
            val = int(val)
            lo, hi = windows[sym]
            if not lo <= val <= hi:
                ok = False
                break
            assign[sym] = val
        if ok:
            yield assign


def rigid_solutions(points, b, sigma=None, Q=Fraction(4)):
    """All validated rigid solutions with area < Q, with area and sign."""
    if expected_dimension(points, b) != 0:
        raise ValueError("expected dimension is nonzero")
    Q = Fraction(Q)
    out = []
    for t in enumerate_types(points, b, sigma, Q):
        sr = solve(t)
        if sr.dimension != 0:
            continue
        for branch in _branch_assignments(sr, Q):
            sol = instantiate(sr, branch)
            ok, _ = validate(sol)
            if not ok:
                continue
            area = surface_area(sol)
            if area >= Q:
                continue
            out.append((sol, area, surface_sign(sol)))
    out.sort(key=lambda r: (r[0].type.code, r[0].type.winding,
                            sorted(r[0].branch.items()), r[1]))
    return out


# -- one-dimensional families and degenerations -----------------------------


class FamilyCell:
    """A maximal open interval of a one-parameter solution family inside
    a fixed ribbon type and lattice branch."""

    def __init__(self, sr, branch, free_sym, lo, hi, lo_event, hi_event):
        self.sr = sr
        self.branch = branch
        self.free_sym = free_sym
        self.lo = lo
        self.hi = hi
        self.lo_event = lo_event
        self.hi_event = hi_event

    def at(self, nu):
        return instantiate(self.sr, self.branch, {self.free_sym: nu})

    def midpoint(self):
        return (self.lo + self.hi) / 2


class EndpointRecord:
    """A degeneration endpoint of a family: the pinched edge, the limit
    pieces with their new corner points, area, sign data."""

    def __init__(self, nu, edge_index, pieces, new_corners, area, sign,
                 new_deg1_local_sign):
        self.nu = nu
        self.edge_index = edge_index
        self.pieces = pieces
        self.new_corners = new_corners
        self.area = area
        self.sign = sign
        self.new_deg1_local_sign = new_deg1_local_sign


def _edge_exprs(sr):
    """Per-edge (v0, v1, dphi) as expressions over the branch symbols and
    the free parameter, computed once per type."""
    t = sr.type
    x = sr.lin.x
    data = []
    for ei, (h1, h2) in enumerate(t.edges):
        W = t.winding if ei in t.marked else 0
        tail, head = t.vertex_of[h1], t.vertex_of[h2]
        dphi = x[head] - x[tail] + LinExpr(t.d * W)
        v0 = x[t.V + ei]
        v1 = v0 + t.n_edge[ei] * dphi
        data.append((v0, v1, dphi))
    return data


def _affine_split(expr, branch, free_sym):
    """Evaluate branch symbols, keeping the free parameter: value c + a*nu."""
    c = expr.const
    a = Fraction(0)
    for k, v in expr.coeffs.items():
        if k == free_sym:
            a = v
        else:
            c += v * branch[k]
    return c, a


def _edges_valid_at(t, data, nu):
    """Edge direction checks at parameter nu from affine (c, a) pairs; a
    cheap necessary condition for validity."""
    for ei, ((c0, a0), (c1, a1), (cd, ad)) in enumerate(data):
        dphi = cd + ad * nu
        if dphi == 0:
            return False
        v0 = c0 + a0 * nu
        s = _sign(dphi)
        if t.n_edge[ei] != 0:
            v1 = c1 + a1 * nu
            if v0 == 0 or v1 == 0 or _sign(v0) != s or _sign(v1) != s:
                return False
        else:
            if v0 == 0 or _sign(v0) != s:
                return False
    return True


def one_dim_cells(points, b, sigma=None, Q=Fraction(4)):
    """All maximal valid parameter intervals of one-dimensional families
    reaching area < Q, over every type and lattice branch."""
    if expected_dimension(points, b) != 1:
        raise ValueError("expected dimension is not one")
    Q = Fraction(Q)
    cells = []
    for t in enumerate_types(points, b, sigma, Q):
        sr = solve(t)
        if sr.dimension != 1:
            continue
        free_sym = ("_free", sr.lin.free_cols[0])
        exprs = _edge_exprs(sr)
        for branch in _branch_assignments(sr, Q):
            data = [tuple(_affine_split(e, branch, free_sym) for e in tri)
                    for tri in exprs]
            events = []
            for ei, ((c0, a0), (c1, a1), (cd, ad)) in enumerate(data):
                for kind, c, a in (("pinch0", c0, a0), ("pinch1", c1, a1),
                                   ("wall", cd, ad)):
                    if a != 0:
                        events.append((-c / a, kind, ei))
            if not events:
                if _edges_valid_at(t, data, Fraction(0)):
                    sol = instantiate(sr, branch, {free_sym: Fraction(0)})
                    ok, _ = validate(sol)
                    if ok and surface_area(sol) < Q:
                        raise RuntimeError("unbounded valid family (no events)")
                continue
            values = sorted(set(r for r, _, _ in events))
            for lo, hi in zip(values[:-1], values[1:]):
                mid = (lo + hi) / 2
                if not _edges_valid_at(t, data, mid):
                    continue
                sol = instantiate(sr, branch, {free_sym: mid})
                ok, _ = validate(sol)
                if not ok:
                    continue
                lo_ev = min((e for e in events if e[0] == lo),
                            key=lambda e: (e[1], e[2]))
                hi_ev = min((e for e in events if e[0] == hi),
                            key=lambda e: (e[1], e[2]))
                cells.append(FamilyCell(sr, branch, free_sym, lo, hi,
                                        lo_ev, hi_ev))
            # guard against unbounded valid ends
            for nu, side in ((values[0] - 1, "below"), (values[-1] + 1, "above")):
                if not _edges_valid_at(t, data, nu):
                    continue
                sol = instantiate(sr, branch, {free_sym: nu})
                ok, _ = validate(sol)
                if ok and surface_area(sol) < Q:
                    raise RuntimeError("unbounded valid family end (%s)" % side)
    return cells


def _cycle_vertices(t):
    """Vertices lying on cycles (nonempty only for b1 >= 1)."""
    deg = {u: 0 for u in range(t.V)}
    alive_edges = set(range(t.E))
    alive = set(range(t.V))
    changed = True
    while changed:
        changed = False
        for u in list(alive):
            inc = [ei for ei in alive_edges
                   if u in (t.vertex_of[t.edges[ei][0]],
                            t.vertex_of[t.edges[ei][1]])]
            if len(inc) <= 1:
                alive.discard(u)
                for ei in inc:
                    alive_edges.discard(ei)
                changed = True
    return alive


def cut_edge(sol, ei):
    """Cut the (pinching) internal edge ei, replacing it by two new legs
    whose corners sit at the pinch point; returns the resulting pieces as
    (RibbonType, TMGSolution) pairs and the two new corner points."""
    t = sol.type
    h1, h2 = t.edges[ei]
    ne = t.n_edge[ei]
    if ne == 0:
        raise ValueError("flat edges do not pinch")
    v0, _ = sol.edge_values(ei)
    tail, head = t.vertex_of[h1], t.vertex_of[h2]
    surviving = [e2 for e2 in range(t.E) if e2 != ei]
    # rebuild consistent vertex lifts by propagating the original lifted
    # edge displacements across the surviving edges (a surviving marked
    # edge then carries its winding shift inside the lifts themselves)
    new_phi = {}
    adj = {u: [] for u in range(t.V)}
    for e2 in surviving:
        a2, b2 = t.edges[e2]
        ta, hb = t.vertex_of[a2], t.vertex_of[b2]
        dphi = sol.dphi_lift(e2)
        adj[ta].append((hb, dphi))
        adj[hb].append((ta, -dphi))
    for u in range(t.V):
        if u in new_phi:
            continue
        new_phi[u] = sol.phi[u]
        todo = [u]
        while todo:
            a2 = todo.pop()
            for b2, dphi in adj[a2]:
                if b2 not in new_phi:
                    new_phi[b2] = new_phi[a2] + dphi
                    todo.append(b2)
    for e2 in surviving:
        a2, b2 = t.edges[e2]
        ta, hb = t.vertex_of[a2], t.vertex_of[b2]
        if new_phi[hb] - new_phi[ta] != sol.dphi_lift(e2):
            raise RuntimeError("pinch leaves an inconsistent cycle lift")
    phi_star = new_phi[tail] - Fraction(v0, ne)
    # lift jump across the pinched edge converts the pinch point between
    # the tail-side and head-side lift frames
    jump = sol.dphi_lift(ei) - (new_phi[head] - new_phi[tail])
    base = CirclePoint(phi_star, t.d)
    Li = t.strand[h2]
    Lj = t.strand[h1]
    slot_t = max(t.slots) + 1
    slot_h = max(t.slots) + 2
    pt_tail = IntersectionPoint(base, Lj, Li, 1 if Li.n < Lj.n else 0)
    pt_head = IntersectionPoint(base, Li, Lj, 1 if Lj.n < Li.n else 0)
    new_pairing = {h: p for h, p in t.pairing.items()
                   if h not in (h1, h2)}
    new_leg_slot = dict(t.leg_slot)
    new_leg_slot[h1] = slot_t
    new_leg_slot[h2] = slot_h
    new_points = dict(t.points)
    new_points[slot_t] = pt_tail
    new_points[slot_h] = pt_head
    new_p_lift = {slot_t: phi_star, slot_h: phi_star - jump}
    # split into connected components
    comp = list(range(t.V))

    def find(i):
        while comp[i] != i:
            comp[i] = comp[comp[i]]
            i = comp[i]
        return i

    for h, p in new_pairing.items():
        a, b2 = find(t.vertex_of[h]), find(t.vertex_of[p])
        if a != b2:
            comp[max(a, b2)] = min(a, b2)
    groups = {}
    for u in range(t.V):
        groups.setdefault(find(u), []).append(u)
    pieces = []
    for root in sorted(groups):
        vs = groups[root]
        vset = set(vs)
        av = [t.at_vertex[u] for u in vs]
        pr = {h: p for h, p in new_pairing.items()
              if t.vertex_of[h] in vset}
        ls = {h: s for h, s in new_leg_slot.items()
              if t.vertex_of[h] in vset}
        pts = {s: new_points[s] for s in ls.values()}
        pt = RibbonType(av, pr, ls, pts, None, 0)
        phi = [new_phi[u] for u in vs]
        seeds = {}
        for nei, (a, b2) in enumerate(pt.edges):
            old = t.edge_index(tuple(sorted((a, t.pairing[a]))))
            seeds[nei] = sol.seeds[old]
        pl = {}
        for s in pt.slots:
            if s in new_p_lift:
                pl[s] = new_p_lift[s]
            else:
                u = t.vertex_of[t.legs[s]]
                pl[s] = sol.p_lift[s] + (new_phi[u] - sol.phi[u])
        pieces.append((pt, TMGSolution(pt, phi, seeds, pl)))
    return pieces, (pt_tail, pt_head), (slot_t, slot_h)


def endpoint_record(cell, side, cap=None):
    """Resolve a pinch event at one end of a family cell into an
    EndpointRecord (pieces, new corners, limit area, limit sign data).
    Endpoints whose limit area reaches the cap are skipped (None)."""
    nu, kind, ei = cell.lo_event if side == "lo" else cell.hi_event
    if kind == "wall":
        return None
    t = cell.sr.type
    if t.b1 >= 1:
        # the varying vertex must lie on the cycle
        cyc = _cycle_vertices(t)
        x = cell.sr.lin.x
        moving = [u for u in range(t.V)
                  if x[u].coeff(cell.free_sym) != 0]
        if moving and not any(u in cyc for u in moving):
            raise RuntimeError("family varies a vertex off the cycle")
    sol = cell.at(nu)
    # the pinched trapezoid converges to the new corner triangle, so the
    # uncut limit area already equals the pieces' total
    if cap is not None and surface_area(sol) >= cap:
        return None
    pieces, corners, _ = cut_edge(sol, ei)
    area = Fraction(0)
    sign = 1
    for pt, psol in pieces:
        ok, why = validate(psol)
        if not ok:
            raise RuntimeError("invalid limit piece: %s" % "; ".join(why))
        area += surface_area(psol)
        sign *= surface_sign(psol)
    deg1 = corners[0] if corners[0].degree == 1 else corners[1]
    local = 1
    for pt, psol in pieces:
        for s in pt.slots:
            if pt.points[s] == deg1:
                local = corner_local_sign(psol, s)
    return EndpointRecord(nu, ei, pieces, corners, area, sign, local)


def walk_family(cell_pool, cap=None):
    """Group family cells into components across walls (matched by the
    exact degenerate configuration) and resolve endpoint records; pinch
    endpoints with limit area >= cap are dropped.

    Returns a list of components: {cells, endpoints, walls}.
    """
    def wall_signature(cell, side):
        # gauge-invariant record of the limit configuration on the circle:
        # vertex lifts are only defined up to deck shifts that differ
        # between ribbon types, and edge velocities flip with orientation
        nu, kind, ei = cell.lo_event if side == "lo" else cell.hi_event
        sol = cell.at(nu)
        t = cell.sr.type
        dd = t.d
        legs = []
        for s in t.slots:
            u = t.vertex_of[t.legs[s]]
            pl = sol.p_lift[s]
            legs.append((s, None if pl is None else pl % dd,
                         sol.phi[u] % dd))
        edges = []
        for e2 in range(t.E):
            dphi = sol.dphi_lift(e2)
            if dphi == 0:
                # the contracted edge is invisible in the limit figure and
                # its velocity depends on the resolution side
                continue
            v0, v1 = sol.edge_values(e2)
            a = sol.phi[t.vertex_of[t.edges[e2][0]]]
            b2 = a + dphi
            fwd = (a % dd, b2 % dd, dphi, v0, v1)
            bwd = (b2 % dd, a % dd, -dphi, -v1, -v0)
            edges.append(min(fwd, bwd))
        return (tuple(sorted(legs, key=repr)), tuple(sorted(edges)))

    open_walls = {}
    comp_of = {}
    comps = []
    for ci, cell in enumerate(cell_pool):
        comp_of[ci] = ci
        comps.append({ci})

    def union(a, b):
        ra, rb = comp_of[a], comp_of[b]
        if ra == rb:
            return
        comps[ra] |= comps[rb]
        for x in comps[rb]:
            comp_of[x] = ra
        comps[rb] = set()

    for ci, cell in enumerate(cell_pool):
        for side in ("lo", "hi"):
            ev = cell.lo_event if side == "lo" else cell.hi_event
            if ev is None or ev[1] != "wall":
                continue
            sig = wall_signature(cell, side)
            if sig in open_walls:
                union(ci, open_walls.pop(sig))
            else:
                open_walls[sig] = ci
    out = []
    for group in comps:
        if not group:
            continue
        cells = [cell_pool[i] for i in sorted(group)]
        endpoints = []
        walls = []
        for cell in cells:
            for side in ("lo", "hi"):
                ev = cell.lo_event if side == "lo" else cell.hi_event
                if ev is None:
                    continue
                if ev[1] == "wall":
                    walls.append(ev)
                else:
                    rec = endpoint_record(cell, side, cap)
                    if rec is not None:
                        endpoints.append(rec)
        out.append({"cells": cells, "endpoints": endpoints, "walls": walls})
    return out
