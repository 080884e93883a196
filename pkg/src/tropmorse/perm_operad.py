#
#   The operad of permutations with a t-grading: generators sigma t^g graded
#   by b = 2g + i - 1, edge and loop contractions through the auxiliary
#   letters f, f', and preimage enumeration for the transform differential.
#

import itertools

F = "f"
FP = "f'"


def _letter_key(x):
    return (0, x, "") if isinstance(x, int) else (1, 0, x)


class Permutation:
    """A permutation stored as a mapping over a finite letter set."""

    def __init__(self, mapping):
        self.map = dict(mapping)
        assert sorted(self.map, key=_letter_key) == sorted(self.map.values(), key=_letter_key)

    @staticmethod
    def identity(letters):
        return Permutation({x: x for x in letters})

    @staticmethod
    def from_cycles(cycles, letters=None):
        mapping = {}
        for cyc in cycles:
            for i, x in enumerate(cyc):
                assert x not in mapping, "repeated letter %r" % (x,)
                mapping[x] = cyc[(i + 1) % len(cyc)]
        if letters:
            for x in letters:
                mapping.setdefault(x, x)
        return Permutation(mapping)

    @property
    def letters(self):
        return set(self.map)

    def __call__(self, x):
        return self.map[x]

    def cycles(self):
        """Cycle decomposition; cycles start at their minimal letter and are
        sorted by that letter (fixed points included)."""
        seen = set()
        out = []
        for start in sorted(self.map, key=_letter_key):
            if start in seen:
                continue
            cyc = [start]
            seen.add(start)
            x = self.map[start]
            while x != start:
                cyc.append(x)
                seen.add(x)
                x = self.map[x]
            out.append(tuple(cyc))
        return out

    def compose(self, other):
        """self after other (rightmost factor applied first)."""
        letters = self.letters | other.letters
        def app(p, x):
            return p.map.get(x, x)
        return Permutation({x: app(self, app(other, x)) for x in letters})

    def restrict_delete(self, remove):
        """Delete the given letters from the cycle decomposition (splicing)."""
        remove = set(remove)
        out = {}
        for x in self.map:
            if x in remove:
                continue
            y = self.map[x]
            while y in remove:
                y = self.map[y]
            out[x] = y
        return Permutation(out)

    def cycle_string(self):
        return "".join("(" + " ".join(str(x) for x in c) + ")" for c in self.cycles())

    def __eq__(self, other):
        return isinstance(other, Permutation) and self.map == other.map

    def __hash__(self):
        return hash(frozenset(self.map.items()))

    def __repr__(self):
        return "Permutation[%s]" % self.cycle_string()


def parse_cycles(text, letters=None):
    """Parse cycle notation like "(1 2 f)(3)" (letters: ints, f, f')."""
    cycles = []
    depth = 0
    cur = []
    tok = ""
    for ch in text:
        if ch == "(":
            assert depth == 0
            depth = 1
            cur = []
            tok = ""
        elif ch == ")":
            if tok:
                cur.append(tok)
                tok = ""
            cycles.append([int(t) if t.isdigit() else t for t in cur])
            depth = 0
        elif ch in " ,":
            if tok:
                cur.append(tok)
                tok = ""
        else:
            assert depth == 1, "letter outside parentheses"
            tok += ch
    assert depth == 0
    return Permutation.from_cycles(cycles, letters)


class STGenerator:
    """A permutation with a t-power g, graded by b = 2g + i - 1."""

    def __init__(self, perm, g=0):
        if isinstance(perm, str):
            perm = parse_cycles(perm)
        self.perm = perm
        self.g = int(g)
        assert self.g >= 0
        assert self.b >= 0, "negative grading"

    @property
    def n(self):
        return len(self.perm.letters)

    @property
    def i_sigma(self):
        return len(self.perm.cycles())

    @property
    def b(self):
        return 2 * self.g + self.i_sigma - 1

    def is_stable(self):
        return 2 * self.b + self.n - 2 > 0

    def key(self):
        return (tuple(sorted(self.perm.map.items(), key=lambda kv: _letter_key(kv[0]))), self.g)

    def __eq__(self, other):
        return isinstance(other, STGenerator) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return "%st^%d" % (self.perm.cycle_string(), self.g)


def generators(n, b):
    """All sigma t^g on letters 1..n with 2g + i_sigma - 1 = b."""
    if not 2 * b + n - 2 > 0:
        raise ValueError("unstable (n, b) = (%d, %d)" % (n, b))
    letters = list(range(1, n + 1))
    out = []
    for images in itertools.permutations(letters):
        perm = Permutation(dict(zip(letters, images)))
        i = len(perm.cycles())
        twice_g = b + 1 - i
        if twice_g >= 0 and twice_g % 2 == 0:
            out.append(STGenerator(perm, twice_g // 2))
    out.sort(key=lambda a: a.key())
    return out


def pi_ff(perm):
    """Delete the letters f and f' from the cycle decomposition."""
    if F not in perm.letters or FP not in perm.letters:
        raise ValueError("pi_ff needs both f and f'")
    return perm.restrict_delete({F, FP})


def compose_edge(a, b):
    """Edge contraction pi_ff'(sigma tau (ff')) t^{g+g'}."""
    sa = a.perm.letters
    sb = b.perm.letters
    if (sa - {F}) & (sb - {FP}):
        raise ValueError("overlapping ground sets")
    if F not in sa or FP not in sb:
        raise ValueError("first factor needs f, second needs f'")
    if a.perm(F) == F and b.perm(FP) == FP:
        # the spliced cycle (i_1..i_k f j_1..j_l f') would be empty: the
        # glued boundary circle carries no letters, so the deletion map
        # is undefined on this input
        raise ValueError("auxiliary letters bound an unmarked circle")
    swap = Permutation.from_cycles([[F, FP]])
    prod = a.perm.compose(b.perm).compose(swap)
    out = STGenerator(pi_ff(prod), a.g + b.g)
    assert out.b == a.b + b.b, "edge contraction must add gradings"
    return out


def compose_loop(a):
    """Loop contraction pi_ff'(sigma (ff')); output grading b+1, with the
    t-power solved from the grading (t^{g+1} when two cycles merge, t^g when
    one cycle splits)."""
    if F not in a.perm.letters or FP not in a.perm.letters:
        raise ValueError("loop contraction needs f and f'")
    swap = Permutation.from_cycles([[F, FP]])
    perm = pi_ff(a.perm.compose(swap))
    b_out = a.b + 1
    i_out = len(perm.cycles())
    twice_g = b_out + 1 - i_out
    if twice_g < 0 or twice_g % 2 != 0:
        raise ValueError("inconsistent loop contraction input")
    return STGenerator(perm, twice_g // 2)


def _swap_ff(gen):
    m = {}
    for x, y in gen.perm.map.items():
        xx = {F: FP, FP: F}.get(x, x)
        yy = {F: FP, FP: F}.get(y, y)
        m[xx] = yy
    return STGenerator(Permutation(m), gen.g)


def block_rotation_sign(blocks, target):
    """Orientation of an interleaving relative to the canonical writing.

    Each block is the letter sequence of one target cycle read from the
    interleaved word; the sign is the product over blocks of the parity
    of the cyclic rotation relating the block to the cycle written from
    its minimal letter: a rotation by r of a length-k block contributes
    (-1)^(r*(k-1)).
    """
    canon = {frozenset(c): list(c) for c in target.perm.cycles()}
    sign = 1
    for seq in blocks:
        cyc = canon.get(frozenset(seq))
        if cyc is None or len(cyc) != len(seq):
            raise ValueError("block %r is not a target cycle" % (seq,))
        r = cyc.index(seq[0])
        if [cyc[(r + i) % len(cyc)] for i in range(len(cyc))] != list(seq):
            raise ValueError("block %r is not a rotation of %r" % (seq, cyc))
        if (r * (len(cyc) - 1)) % 2:
            sign = -sign
    return sign


def loop_preimage_sign(gen, target):
    """Orientation sign of a loop-contraction preimage: the product of
    the rotation parities of the two blocks read after f and f' in the
    interleaved cycle.  Invariant under relabeling f <-> f'."""
    swap = Permutation.from_cycles([[F, FP]])
    prod = gen.perm.compose(swap)
    blocks = []
    for cyc in prod.cycles():
        aux = [x for x in cyc if x in (F, FP)]
        if len(aux) != 1:
            raise ValueError("preimage does not split into two marked cycles")
        i = cyc.index(aux[0])
        blocks.append([cyc[(i + j) % len(cyc)] for j in range(1, len(cyc))])
    if len(blocks) != 2:
        raise ValueError("expected exactly two marked cycles")
    return block_rotation_sign(blocks, target)


def feynman_preimages(target, shape):
    """Preimages of the transform differential.

    shape ("loop",): generators on the target letters plus f, f' whose loop
    contraction is target, one representative per f <-> f' relabeling class.
    shape ("edge", part, b1, b2): pairs (a, b) with a on part|{f}, b on the
    complement|{f'}, gradings b1, b2, whose edge contraction is target.
    """
    letters = sorted(target.perm.letters, key=_letter_key)
    if shape[0] == "loop":
        ground = letters + [F, FP]
        found = []
        seen = set()
        for images in itertools.permutations(ground):
            perm = Permutation(dict(zip(ground, images)))
            i = len(perm.cycles())
            twice_g = target.b - 1 + 1 - i
            if twice_g < 0 or twice_g % 2 != 0:
                continue
            cand = STGenerator(perm, twice_g // 2)
            if not cand.is_stable():
                continue
            try:
                if compose_loop(cand) == target:
                    if cand.key() in seen:
                        continue
                    seen.add(cand.key())
                    seen.add(_swap_ff(cand).key())
                    found.append(cand)
            except ValueError:
                continue
        return found
    if shape[0] == "edge":
        _, part, b1, b2 = shape
        part = sorted(set(part), key=_letter_key)
        rest = [x for x in letters if x not in part]
        g1 = list(part) + [F]
        g2 = list(rest) + [FP]
        found = []
        for im1 in itertools.permutations(g1):
            p1 = Permutation(dict(zip(g1, im1)))
            t1 = b1 + 1 - len(p1.cycles())
            if t1 < 0 or t1 % 2:
                continue
            a = STGenerator(p1, t1 // 2)
            if not a.is_stable():
                continue
            for im2 in itertools.permutations(g2):
                p2 = Permutation(dict(zip(g2, im2)))
                t2 = b2 + 1 - len(p2.cycles())
                if t2 < 0 or t2 % 2:
                    continue
                bb = STGenerator(p2, t2 // 2)
                if not bb.is_stable():
                    continue
                if compose_edge(a, bb) == target:
                    found.append((a, bb))
        return found
    raise ValueError("unknown shape %r" % (shape,))


def generator_degree(a):
    """Cohomological degree n + b."""
    return a.n + a.b
