#
#   Exact rational linear algebra: affine symbolic expressions, Gaussian
#   elimination with symbolic right-hand sides, determinants.
#

from fractions import Fraction


class LinExpr:
    """Affine expression c0 + sum coeff_s * symbol_s with rational coeffs."""

    def __init__(self, const=0, coeffs=None):
        self.const = Fraction(const)
        self.coeffs = {}
        if coeffs:
            for k, v in coeffs.items():
                v = Fraction(v)
                if v != 0:
                    self.coeffs[k] = v

    @staticmethod
    def sym(name, scale=1):
        return LinExpr(0, {name: Fraction(scale)})

    def __add__(self, other):
        other = other if isinstance(other, LinExpr) else LinExpr(other)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, Fraction(0)) + v
        return LinExpr(self.const + other.const, out)

    def __radd__(self, other):
        return self.__add__(other)

    def __neg__(self):
        return LinExpr(-self.const, {k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other):
        other = other if isinstance(other, LinExpr) else LinExpr(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, scalar):
        scalar = Fraction(scalar)
        return LinExpr(self.const * scalar, {k: v * scalar for k, v in self.coeffs.items()})

    __rmul__ = __mul__

    def is_constant(self):
        return not self.coeffs

    def coeff(self, name):
        return self.coeffs.get(name, Fraction(0))

    def evaluate(self, assignment):
        val = self.const
        for k, v in self.coeffs.items():
            val += v * Fraction(assignment[k])
        return val

    def substitute(self, assignment):
        """Partially substitute; symbols absent from assignment stay symbolic."""
        out = LinExpr(self.const)
        for k, v in self.coeffs.items():
            if k in assignment:
                out = out + v * Fraction(assignment[k])
            else:
                out = out + LinExpr.sym(k, v)
        return out

    def __eq__(self, other):
        other = other if isinstance(other, LinExpr) else LinExpr(other)
        return self.const == other.const and self.coeffs == other.coeffs

    def __repr__(self):
        parts = [str(self.const)]
        for k in sorted(self.coeffs, key=str):
            parts.append("%s*%s" % (self.coeffs[k], k))
        return " + ".join(parts)


class LinearSolution:
    """Result of eliminating A x = rhs with symbolic rhs.

    x[j] is a LinExpr over rhs symbols plus ("_free", j) symbols for the
    free columns; constraints is a list of LinExpr that must vanish.
    """

    def __init__(self, x, free_cols, constraints):
        self.x = x
        self.free_cols = free_cols
        self.constraints = constraints

    @property
    def dimension(self):
        return len(self.free_cols)


def eliminate(rows, rhs):
    """Gaussian elimination of rational rows with LinExpr right-hand sides."""
    m = len(rows)
    n = len(rows[0]) if m else 0
    a = [[Fraction(x) for x in r] for r in rows]
    b = [r if isinstance(r, LinExpr) else LinExpr(r) for r in rhs]
    assert len(b) == m
    pivots = []
    r = 0
    for c in range(n):
        piv = None
        for i in range(r, m):
            if a[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        b[r], b[piv] = b[piv], b[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        b[r] = b[r] * inv
        for i in range(m):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
                b[i] = b[i] - b[r] * f
        pivots.append(c)
        r += 1
        if r == m:
            break
    constraints = [b[i] for i in range(r, m) if not (b[i].is_constant() and b[i].const == 0)]
    free_cols = [c for c in range(n) if c not in pivots]
    x = [None] * n
    for c in free_cols:
        x[c] = LinExpr.sym(("_free", c))
    for i, c in enumerate(pivots):
        expr = b[i]
        for fc in free_cols:
            if a[i][fc] != 0:
                expr = expr - LinExpr.sym(("_free", fc), a[i][fc])
        x[c] = expr
    return LinearSolution(x, free_cols, constraints)


def determinant(rows):
    """Exact determinant of a square rational matrix."""
    a = [[Fraction(x) for x in r] for r in rows]
    n = len(a)
    assert all(len(r) == n for r in a)
    det = Fraction(1)
    for c in range(n):
        piv = None
        for i in range(c, n):
            if a[i][c] != 0:
                piv = i
                break
        if piv is None:
            return Fraction(0)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        det *= a[c][c]
        inv = 1 / a[c][c]
        for i in range(c + 1, n):
            if a[i][c] != 0:
                f = a[i][c] * inv
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return det


def matrix_rank(rows):
    if not rows:
        return 0
    sol = eliminate(rows, [LinExpr(0)] * len(rows))
    return len(rows[0]) - len(sol.free_cols)
