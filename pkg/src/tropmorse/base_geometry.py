#
#   Exact model of the circle R/dZ, linear Lagrangian sections, and
#   their intersection points.
#

from fractions import Fraction

Rational = Fraction


class CirclePoint:
    """A point of R/dZ with exact rational coordinate."""

    def __init__(self, value, d):
        d = int(d)
        assert d >= 1
        self.d = d
        self.value = Fraction(value) % d

    def lift(self, k=0):
        """The real lift value + k*d."""
        return self.value + k * self.d

    def __eq__(self, other):
        return isinstance(other, CirclePoint) and self.d == other.d and self.value == other.value

    def __hash__(self):
        return hash((self.value, self.d))

    def __repr__(self):
        return "CirclePoint(%s, d=%d)" % (self.value, self.d)


def arc_distance(p, q):
    """Length of the shorter arc between two circle points."""
    assert p.d == q.d
    gap = abs(p.value - q.value)
    return min(gap, p.d - gap)


class Lagrangian:
    """The section y -> (y, -n*y + offset) of the torus bundle over R/dZ."""

    def __init__(self, n, offset=0, d=1):
        self.n = int(n)
        self.offset = Fraction(offset)
        self.d = int(d)
        assert self.d >= 1

    def height(self, y):
        """Fiber coordinate of the section over y (as a real lift)."""
        return -self.n * Fraction(y) + self.offset

    def __eq__(self, other):
        return (isinstance(other, Lagrangian) and (self.n, self.offset, self.d) ==
                (other.n, other.offset, other.d))

    def __hash__(self):
        return hash((self.n, self.offset, self.d))

    def __repr__(self):
        return "Lagrangian(n=%d, offset=%s, d=%d)" % (self.n, self.offset, self.d)


class IntersectionPoint:
    """A generator of Hom(source, target): a base point with a degree."""

    def __init__(self, base, source, target, degree):
        assert degree in (0, 1)
        self.base = base
        self.source = source
        self.target = target
        self.degree = degree

    def dual(self):
        """The matching generator of Hom(target, source) at the same base."""
        if self.source == self.target:
            return IntersectionPoint(self.base, self.source, self.target, 1 - self.degree)
        return IntersectionPoint(self.base, self.target, self.source, 1 - self.degree)

    def slope_drop(self):
        """The leg label target.n - source.n."""
        return self.target.n - self.source.n

    def key(self):
        return (self.base.value, self.source.n, self.source.offset,
                self.target.n, self.target.offset, self.degree)

    def __eq__(self, other):
        return isinstance(other, IntersectionPoint) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return "IntersectionPoint(%s, L%d->L%d, deg %d)" % (
            self.base.value, self.source.n, self.target.n, self.degree)


def intersection_points(L1, L2):
    """All generators of Hom(L1, L2), sorted by base coordinate.

    For equal slopes the single designated basepoint generator at 0 is
    returned (degree pair handled by the avatar convention downstream).
    """
    assert L1.d == L2.d
    d = L1.d
    if L1.n == L2.n:
        return [IntersectionPoint(CirclePoint(0, d), L1, L2, 0)]
    # Solve -n1*y + v1 = -n2*y + v2 mod Z  =>  (n2 - n1)*y = v2 - v1 + k.
    dn = L2.n - L1.n
    degree = 1 if L2.n < L1.n else 0
    points = set()
    for k in range(d * abs(dn) + 1):
        for sk in (k, -k):
            y = Fraction(L2.offset - L1.offset + sk, dn) % d
            points.add(y)
    pts = sorted(points)
    assert len(pts) == d * abs(dn)
    return [IntersectionPoint(CirclePoint(y, d), L1, L2, degree) for y in pts]


def self_hom_generators(L):
    """The two basepoint generators of Hom(L, L), degrees 0 and 1."""
    base = CirclePoint(0, L.d)
    return [IntersectionPoint(base, L, L, 0), IntersectionPoint(base, L, L, 1)]


def hom_generators(L1, L2):
    """Generators of Hom(L1, L2) including both self-Hom avatars."""
    if L1.n == L2.n and L1.offset == L2.offset:
        return self_hom_generators(L1)
    return intersection_points(L1, L2)


def _projected_bases(lagrangians):
    """Distinct bases of all pairwise intersections, slopes only."""
    bases = set()
    ls = list(lagrangians)
    for i in range(len(ls)):
        for j in range(len(ls)):
            if i != j and ls[i].n != ls[j].n:
                for p in intersection_points(ls[i], ls[j]):
                    bases.add(p.base)
    return sorted(bases, key=lambda b: b.value)


def _min_arc_gap(bases, d):
    if len(bases) < 2:
        return Fraction(d)
    return min(arc_distance(p, q) for i, p in enumerate(bases) for q in bases[i + 1:])


def is_transversal(lagrangians):
    """Check the perturbation inequality for a sequence of Lagrangians.

    True iff offsets strictly increase and every difference of consecutive
    offset gaps is smaller than half the minimal arc distance between
    distinct projected intersection bases.  Returns (bool, diagnostic).
    """
    ls = list(lagrangians)
    if len(ls) < 2:
        raise ValueError("transversality is undefined for fewer than 2 Lagrangians")
    d = ls[0].d
    assert all(L.d == d for L in ls)
    for i in range(len(ls) - 1):
        if not ls[i].offset < ls[i + 1].offset:
            return False, "offsets not increasing at pair (%d, %d)" % (i, i + 1)
    gaps = [ls[i + 1].offset - ls[i].offset for i in range(len(ls) - 1)]
    bound = Fraction(_min_arc_gap(_projected_bases(ls), d), 2)
    for i in range(len(gaps)):
        for j in range(len(gaps)):
            if abs(abs(gaps[i]) - abs(gaps[j])) >= bound:
                return False, "gap difference at pair (%d, %d) exceeds bound %s" % (i, j, bound)
    return True, "ok"


def auto_perturb(slopes, d):
    """Deterministic transversal offsets i*eps for the given slopes."""
    assert len(slopes) > 0
    k = len(slopes)
    plain = [Lagrangian(n, 0, d) for n in slopes]
    gap = _min_arc_gap(_projected_bases(plain), d)
    eps = Fraction(gap, 4 * k)
    out = [Lagrangian(n, i * eps, d) for i, n in enumerate(slopes)]
    if k >= 2:
        ok, why = is_transversal(out)
        assert ok, why
    return out
