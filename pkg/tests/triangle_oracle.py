#
#   Independent oracle for arity-3 product coefficients: enumerate lifted
#   triangles in the universal cover of the torus, compute Euclidean
#   (shoelace) areas, and read corner signs off the counterclockwise
#   boundary orientation.  No tree combinatorics is used.
#

from fractions import Fraction
from itertools import count


def _line_intersection(n1, c1, n2, c2):
    """Intersection of h = -n1*y + c1 and h = -n2*y + c2."""
    y = Fraction(c2 - c1, n2 - n1)
    return (y, -n1 * y + c1)


def _shoelace(a, b, c):
    return Fraction(
        (b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]), 2)


def triangle_counts(lagrangians, Q):
    """Signed triangle counts for the cyclic chain (L0, L1, L2).

    Returns {(base1, base2, base3): {area: coefficient}} with base_i the
    projected corner of Hom(L_{i-1}, L_i) (indices mod 3), keeping only
    triangles of Euclidean area in (0, Q) whose counterclockwise boundary
    traverses the chain in cyclic order.
    """
    L = list(lagrangians)
    assert len(L) == 3
    d = L[0].d
    n = [l.n for l in L]
    assert len(set(n)) == 3, "slopes must be distinct"
    Q = Fraction(Q)
    out = {}
    # lifts of L_i: h = -n_i*y + offset_i + j_i; deck transformations act
    # by j_i -> j_i + n_i*a*d + b, so fix j_0 = 0 and take j_1 modulo
    # (n_1 - n_0)*d
    m1 = abs((n[1] - n[0]) * d)
    for j1 in range(m1):
        for j2 in _integer_spiral():
            c = [L[0].offset, L[1].offset + j1, L[2].offset + j2]
            v01 = _line_intersection(n[0], c[0], n[1], c[1])
            v12 = _line_intersection(n[1], c[1], n[2], c[2])
            v20 = _line_intersection(n[2], c[2], n[0], c[0])
            area = _shoelace(v01, v12, v20)
            if area == 0:
                continue
            if abs(area) >= Q:
                # the area is quadratic in j2; once both spiral arms have
                # left the window nothing more can contribute
                if _both_arms_out(L, n, j1, j2, Q):
                    break
                continue
            # counterclockwise corner order must realize the cyclic chain
            # Hom(L0,L1), Hom(L1,L2), Hom(L2,L0): with positive shoelace
            # the listed order (v01, v12, v20) is already counterclockwise
            if area < 0:
                continue
            corners = (v01, v12, v20)
            sign = 1
            for k in range(3):
                tgt = L[(k + 1) % 3]
                # the boundary edge from corner k to corner k+1 lies on
                # tgt; an edge on a slope-zero Lagrangian contributes -1
                # per marked fiber y in d*Z it crosses
                if tgt.n == 0:
                    lo, hi = sorted((corners[k][0], corners[(k + 1) % 3][0]))
                    m = 0
                    j = (lo / d).__floor__() + 1
                    while j * d < hi:
                        if j * d > lo:
                            m += 1
                        j += 1
                    if m % 2:
                        sign = -sign
            key = tuple(y % d for (y, _h) in corners)
            bucket = out.setdefault(key, {})
            bucket[area] = bucket.get(area, 0) + sign
    for key in list(out):
        out[key] = {a: c for a, c in out[key].items() if c != 0}
        if not out[key]:
            del out[key]
    return out


def _integer_spiral():
    yield 0
    for k in count(1):
        yield k
        yield -k


def _both_arms_out(L, n, j1, j2, Q):
    """True when both j2-spiral arms at |j2| and beyond give area >= Q."""
    for probe in (abs(j2), -abs(j2)):
        c = [L[0].offset, L[1].offset + j1, L[2].offset + probe]
        v01 = _line_intersection(n[0], c[0], n[1], c[1])
        v12 = _line_intersection(n[1], c[1], n[2], c[2])
        v20 = _line_intersection(n[2], c[2], n[0], c[0])
        if abs(_shoelace(v01, v12, v20)) < Q:
            return False
    return abs(j2) > 4 * (1 + int(Q)) * max(abs(x) for x in n + [1])
