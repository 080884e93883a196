import pytest

from tropmorse import (F, FP, Permutation, STGenerator, block_rotation_sign,
                       compose_edge, compose_loop, feynman_preimages,
                       generator_degree, generators, loop_preimage_sign,
                       parse_cycles, pi_ff)


def test_parse_cycles_roundtrip():
    p = parse_cycles("(1 2 f)(3)")
    assert p(1) == 2 and p(2) == F and p(F) == 1 and p(3) == 3
    assert p.cycle_string() == "(1 2 f)(3)"


def test_parse_cycles_rejects_garbage():
    with pytest.raises(AssertionError):
        parse_cycles("1 2 3")
    with pytest.raises(AssertionError):
        parse_cycles("(1 2)(2 3)")


def test_generators_small_cases():
    gens = generators(3, 0)
    # b = 0 forces a single cycle and t^0: the two 3-cycles
    assert len(gens) == 2
    assert all(g.g == 0 and g.i_sigma == 1 for g in gens)
    gens = generators(2, 1)
    keys = {repr(g) for g in gens}
    assert keys == {"(1)(2)t^0", "(1 2)t^1"}
    with pytest.raises(ValueError):
        generators(1, 0)


def test_generator_degree_is_n_plus_b():
    for n, b in ((3, 0), (2, 1), (3, 1)):
        for g in generators(n, b):
            assert generator_degree(g) == n + b


def test_grading_formula():
    a = STGenerator(parse_cycles("(1 2)(3)"), 1)
    assert a.b == 2 * 1 + 2 - 1 == 3
    with pytest.raises(AssertionError):
        STGenerator(parse_cycles("(1)(2)"), -1)


def test_pi_ff_splices_cycles():
    p = parse_cycles("(1 f 2)(3 f')")
    assert pi_ff(p).cycle_string() == "(1 2)(3)"
    with pytest.raises(ValueError):
        pi_ff(parse_cycles("(1 f)"))


def test_compose_edge_splices_through_aux_letters():
    a = STGenerator(parse_cycles("(1 f)"), 0)
    b = STGenerator(parse_cycles("(2 f')"), 0)
    out = compose_edge(a, b)
    assert out.perm.cycle_string() == "(1 2)"
    assert out.b == a.b + b.b == 0
    assert out.g == 0


def test_compose_edge_rejects_overlap_and_missing_aux():
    a = STGenerator(parse_cycles("(1 f)"), 0)
    with pytest.raises(ValueError):
        compose_edge(a, STGenerator(parse_cycles("(1 f')"), 0))
    with pytest.raises(ValueError):
        compose_edge(a, STGenerator(parse_cycles("(2 3)"), 1))


def test_compose_edge_rejects_unmarked_circle():
    # both auxiliary letters fixed: the glued circle carries no letters
    a = STGenerator(parse_cycles("(1)(f)"), 1)
    b = STGenerator(parse_cycles("(2)(f')"), 1)
    with pytest.raises(ValueError):
        compose_edge(a, b)


def test_compose_loop_increments_grading():
    gen = STGenerator(parse_cycles("(1 f 2 f')"), 0)
    out = compose_loop(gen)
    assert out.b == gen.b + 1
    assert out.perm.letters == {1, 2}


def test_loop_preimage_sign_invariant_under_aux_relabel():
    target = STGenerator(Permutation.from_cycles([(1, 2), (3,)]), 0)
    pres = feynman_preimages(target, ("loop",))
    assert len(pres) == 2
    for gen in pres:
        swapped = {F: FP, FP: F}
        m = {swapped.get(x, x): swapped.get(y, y)
             for x, y in gen.perm.map.items()}
        twin = STGenerator(Permutation(m), gen.g)
        assert (loop_preimage_sign(gen, target)
                == loop_preimage_sign(twin, target))


def test_block_rotation_sign():
    target = STGenerator(Permutation.from_cycles([(1, 2, 3)]), 0)
    # rotation by 0 of a 3-cycle: +1; rotation by 1 of length 3: (-1)^2 = +1
    assert block_rotation_sign([(1, 2, 3)], target) == 1
    assert block_rotation_sign([(2, 3, 1)], target) == 1
    target2 = STGenerator(Permutation.from_cycles([(1, 2)]), 0)
    # rotation by 1 of length 2: (-1)^1 = -1
    assert block_rotation_sign([(2, 1)], target2) == -1
    with pytest.raises(ValueError):
        block_rotation_sign([(1, 3)], target)


def test_edge_preimages_recompose():
    target = STGenerator(Permutation.from_cycles([(1, 2), (3,)]), 0)
    found = 0
    for part in ((1,), (2,), (3,), (1, 2), (1, 3), (2, 3)):
        for b1 in (0, 1):
            pres = feynman_preimages(
                target, ("edge", part, b1, target.b - b1))
            for a, b in pres:
                assert compose_edge(a, b) == target
                assert a.perm.letters == set(part) | {F}
                found += 1
    assert found > 0
