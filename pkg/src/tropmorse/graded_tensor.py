#
#   Graded tensors over truncated q-series, the degree-1 antisymmetric
#   pairing, and the Koszul-signed contraction maps (edge insertion and
#   loop self-contraction).
#

from fractions import Fraction


class NovikovSeries:
    """Finite q-series with rational exponents, truncated at cutoff Q."""

    def __init__(self, terms=None, cutoff=None):
        assert cutoff is not None
        self.cutoff = Fraction(cutoff)
        self.terms = {}
        if terms:
            for e, c in terms.items():
                e = Fraction(e)
                c = int(c)
                assert e >= 0
                if c != 0 and e < self.cutoff:
                    self.terms[e] = self.terms.get(e, 0) + c
            self.terms = {e: c for e, c in self.terms.items() if c != 0}

    @staticmethod
    def zero(cutoff):
        return NovikovSeries({}, cutoff)

    @staticmethod
    def monomial(exponent, coeff, cutoff):
        return NovikovSeries({Fraction(exponent): coeff}, cutoff)

    def is_zero(self):
        return not self.terms

    def __add__(self, other):
        assert self.cutoff == other.cutoff, "cutoff mismatch"
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return NovikovSeries(out, self.cutoff)

    def __neg__(self):
        return NovikovSeries({e: -c for e, c in self.terms.items()}, self.cutoff)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return NovikovSeries({e: c * other for e, c in self.terms.items()}, self.cutoff)
        assert self.cutoff == other.cutoff, "cutoff mismatch"
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = e1 + e2
                if e < self.cutoff:
                    out[e] = out.get(e, 0) + c1 * c2
        return NovikovSeries(out, self.cutoff)

    __rmul__ = __mul__

    def __eq__(self, other):
        return (isinstance(other, NovikovSeries) and self.cutoff == other.cutoff
                and self.terms == other.terms)

    def to_json(self):
        return [{"exp": str(e), "coeff": c} for e, c in sorted(self.terms.items())]

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join("%d*q^(%s)" % (c, e) for e, c in sorted(self.terms.items()))


def series_add(a, b):
    return a + b


def series_mul(a, b):
    return a * b


class GradedGenerator:
    """An abstract basis symbol with a degree."""

    def __init__(self, label, degree):
        self.label = label
        self.degree = degree

    def __eq__(self, other):
        return (isinstance(other, GradedGenerator) and self.label == other.label
                and self.degree == other.degree)

    def __hash__(self):
        return hash((self.label, self.degree))

    def __repr__(self):
        return "G(%s|%d)" % (self.label, self.degree)


class PairingB:
    """Degree-1 pairing: B(p, q) = (-1)^deg(p) iff q is p's dual, else 0."""

    def __init__(self, dual_map=None):
        self.dual_map = dual_map

    def dual(self, p):
        if self.dual_map is not None:
            return self.dual_map.get(p)
        return p.dual()

    def value(self, p, q):
        d = self.dual(p)
        if d is not None and d == q:
            return (-1) ** p.degree
        return 0


def koszul_sign_oracle(degrees, perm):
    """Sign for reordering graded symbols so position k holds old index perm[k].

    Realized as adjacent transpositions; each swap of symbols with degrees
    a, b contributes (-1)^(a*b).
    """
    order = list(perm)
    degs = list(degrees)
    assert sorted(order) == list(range(len(degs)))
    sign = 1
    arr = order[:]
    for i in range(len(arr)):
        j = arr.index(i)
        while j > i:
            if degs[arr[j]] % 2 and degs[arr[j - 1]] % 2:
                sign = -sign
            arr[j], arr[j - 1] = arr[j - 1], arr[j]
            j -= 1
    return sign


class Tensor:
    """Arity-n tensor with per-slot bases and q-series coefficients.

    Every stored tuple t satisfies n - sum(deg t_i) = declared_degree.
    """

    def __init__(self, slot_bases, declared_degree, cutoff, coefficients=None, slot_names=None):
        self.slot_bases = [list(b) for b in slot_bases]
        self.arity = len(self.slot_bases)
        self.declared_degree = declared_degree
        self.cutoff = Fraction(cutoff)
        self.slot_names = list(slot_names) if slot_names else list(range(1, self.arity + 1))
        self.coefficients = {}
        if coefficients:
            for t, s in coefficients.items():
                self.set_coefficient(t, s)

    def tuple_degree(self, t):
        return self.arity - sum(g.degree for g in t)

    def set_coefficient(self, t, series):
        t = tuple(t)
        assert len(t) == self.arity
        assert self.tuple_degree(t) == self.declared_degree, \
            "tuple %r has degree %d, declared %d" % (t, self.tuple_degree(t), self.declared_degree)
        if series.is_zero():
            self.coefficients.pop(t, None)
        else:
            self.coefficients[t] = series

    def add_term(self, t, series):
        t = tuple(t)
        cur = self.coefficients.get(t, NovikovSeries.zero(self.cutoff))
        self.set_coefficient(t, cur + series)

    def is_zero(self):
        return all(s.is_zero() for s in self.coefficients.values())

    def __add__(self, other):
        assert self.arity == other.arity and self.declared_degree == other.declared_degree
        out = Tensor(self.slot_bases, self.declared_degree, self.cutoff,
                     slot_names=self.slot_names)
        for t, s in self.coefficients.items():
            out.add_term(t, s)
        for t, s in other.coefficients.items():
            out.add_term(t, s)
        return out

    def __sub__(self, other):
        return self + (-1) * other

    def __mul__(self, scalar):
        out = Tensor(self.slot_bases, self.declared_degree, self.cutoff,
                     slot_names=self.slot_names)
        for t, s in self.coefficients.items():
            out.add_term(t, s * scalar)
        return out

    __rmul__ = __mul__

    def permute_slots(self, perm, slot_names=None):
        """New tensor whose slot k is old slot perm[k], with Koszul signs."""
        bases = [self.slot_bases[i] for i in perm]
        names = slot_names if slot_names else [self.slot_names[i] for i in perm]
        out = Tensor(bases, self.declared_degree, self.cutoff, slot_names=names)
        for t, s in self.coefficients.items():
            sign = koszul_sign_oracle([g.degree for g in t], perm)
            out.add_term(tuple(t[i] for i in perm), s * sign)
        return out

    def to_json(self):
        rows = []
        for t in sorted(self.coefficients, key=lambda t: tuple(repr(g) for g in t)):
            rows.append({"tuple": [repr(g) for g in t],
                         "series": self.coefficients[t].to_json()})
        return rows

    def __repr__(self):
        return "Tensor(arity=%d, deg=%d, %d terms)" % (
            self.arity, self.declared_degree, len(self.coefficients))


def tensor_degree(v):
    for t in v.coefficients:
        if v.tuple_degree(t) != v.declared_degree:
            raise ValueError("inconsistent tuple %r" % (t,))
    return v.declared_degree


def _pair_sign_exponent(vdegs, wdegs, alpha, beta):
    """Reordering exponent for inserting v into w at slot beta, removing v's
    slot alpha (1-based slots):
      |v_f| sum_{i>alpha} |v_i|  +  sum_{j<beta} |w_j| (|w| - |w_j|)
      + |B| (|v| - |v_f|)  +  sum_{l<beta} |w_l| (|v| + |w| - |v_f| - |w_f'| - |w_l|)
    with tensor degrees |v| = n - sum deg, |B| = 1.
    """
    n1, n2 = len(vdegs), len(wdegs)
    vf = vdegs[alpha - 1]
    wf = wdegs[beta - 1]
    tv = n1 - sum(vdegs)
    tw = n2 - sum(wdegs)
    e = vf * sum(vdegs[alpha:])
    e += sum(wdegs[j] * (tw - wdegs[j]) for j in range(beta - 1))
    e += 1 * (tv - vf)
    e += sum(wdegs[l] * (tv + tw - vf - wf - wdegs[l]) for l in range(beta - 1))
    return e


def contract_pair(v, w, alpha, beta, B):
    """Operadic insertion of v into w, pairing v's slot alpha with w's slot
    beta through B (slots 1-based).  Output slots:
    w_1..w_{beta-1}, v_1..(no alpha)..v_n1, w_{beta+1}..w_n2.
    """
    assert 1 <= alpha <= v.arity and 1 <= beta <= w.arity
    assert v.cutoff == w.cutoff
    out_bases = (w.slot_bases[:beta - 1]
                 + v.slot_bases[:alpha - 1] + v.slot_bases[alpha:]
                 + w.slot_bases[beta:])
    out_names = (w.slot_names[:beta - 1]
                 + v.slot_names[:alpha - 1] + v.slot_names[alpha:]
                 + w.slot_names[beta:])
    out_degree = v.declared_degree + w.declared_degree - 1
    out = Tensor(out_bases, out_degree, v.cutoff, slot_names=out_names)
    for tv, sv in v.coefficients.items():
        pf = tv[alpha - 1]
        dual = B.dual(pf)
        if dual is None:
            continue
        for tw, sw in w.coefficients.items():
            if tw[beta - 1] != dual:
                continue
            bval = B.value(pf, tw[beta - 1])
            eps = _pair_sign_exponent([g.degree for g in tv], [g.degree for g in tw],
                                      alpha, beta)
            sign = bval * (-1 if eps % 2 else 1)
            tout = (tw[:beta - 1] + tv[:alpha - 1] + tv[alpha:] + tw[beta:])
            out.add_term(tout, (sv * sw) * sign)
    return out


def _loop_sign_exponent(degs, alpha, beta):
    """Self-contraction exponent (1-based slots alpha < beta):
      |v_f| sum_{alpha<i<beta} |v_i|  +  |B| ((sum_{j<beta} |v_j|) - |v_f|).
    """
    vf = degs[alpha - 1]
    e = vf * sum(degs[alpha:beta - 1])
    e += 1 * (sum(degs[:beta - 1]) - vf)
    return e


def contract_loop(v, alpha, beta, B):
    """Self-contraction of slots alpha < beta (1-based); removes both."""
    if alpha == beta:
        raise ValueError("loop contraction needs distinct slots")
    assert 1 <= alpha < beta <= v.arity
    keep = [i for i in range(v.arity) if i not in (alpha - 1, beta - 1)]
    out = Tensor([v.slot_bases[i] for i in keep], v.declared_degree - 1, v.cutoff,
                 slot_names=[v.slot_names[i] for i in keep])
    for t, s in v.coefficients.items():
        pf = t[alpha - 1]
        bval = B.value(pf, t[beta - 1])
        if bval == 0:
            continue
        eps = _loop_sign_exponent([g.degree for g in t], alpha, beta)
        sign = bval * (-1 if eps % 2 else 1)
        out.add_term(tuple(t[i] for i in keep), s * sign)
    return out
