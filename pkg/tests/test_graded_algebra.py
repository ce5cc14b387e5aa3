import random
from fractions import Fraction

import pytest

from kmflag.errors import CapBoundaryGenerator, DegreeCapExceeded, DegreeMismatch, ZeroForm
from kmflag.graded_algebra import (
    CyclicPiece,
    GradedModuleRep,
    ModuleAmbient,
    SPoly,
    debug_dump,
    degree_basis,
    divide_by_linear,
    image_module,
    minimal_generators,
    reduce_mod_linear,
)


def x(i, n=2):
    return SPoly.variable(n, i)


def test_spoly_basics():
    p = x(0) * x(0) + 2 * x(1)
    assert not p.is_homogeneous()
    assert (x(0) * x(1)).s_degree() == 4
    assert (p - p).is_zero()
    assert SPoly.linear((1, -1)) == x(0) - x(1)


def test_reduce_mod_linear_contract():
    alpha = x(0) - x(1)
    assert reduce_mod_linear(alpha, alpha).is_zero()
    assert reduce_mod_linear(x(0) * x(0) + x(0) * x(1), x(0)).is_zero()
    assert reduce_mod_linear(x(0) * x(1), alpha) == x(1) * x(1)
    with pytest.raises(ZeroForm):
        reduce_mod_linear(x(0), SPoly.zero(2))
    with pytest.raises(ZeroForm):
        reduce_mod_linear(x(0), x(0) * x(1))


def test_reduction_is_congruent_mod_alpha():
    rng = random.Random(3)
    for _ in range(20):
        terms = {
            (rng.randint(0, 3), rng.randint(0, 3)): Fraction(rng.randint(-4, 4))
            for _ in range(4)
        }
        p = SPoly(2, terms)
        alpha = SPoly.linear((rng.randint(1, 3), rng.randint(-3, 3)))
        red = reduce_mod_linear(p, alpha)
        quot, rem = divide_by_linear(p - red, alpha)
        assert rem.is_zero()
        assert quot * alpha + red == p


def test_degree_basis_dimensions():
    free = ModuleAmbient(2, [CyclicPiece(0)])
    unit = (SPoly.constant(2, 1),)
    m = GradedModuleRep(free, (unit,), 10)
    assert len(degree_basis(m, 0)) == 1
    assert len(degree_basis(m, 2)) == 2
    quot = ModuleAmbient(2, [CyclicPiece(0, (1, 0))])
    mq = GradedModuleRep(quot, ((SPoly.constant(2, 1),),), 10)
    assert len(degree_basis(mq, 2)) == 1
    with pytest.raises(DegreeCapExceeded):
        degree_basis(m, 12)


def test_minimal_generators_contract_examples():
    free = ModuleAmbient(2, [CyclicPiece(0)])
    unit = (SPoly.constant(2, 1),)
    assert minimal_generators(GradedModuleRep(free, (unit,), 10))[0] == (0,)

    mixed = ModuleAmbient(2, [CyclicPiece(0), CyclicPiece(0, (1, 0))])
    g1 = (x(0), SPoly.zero(2))
    g2 = (SPoly.zero(2), SPoly.constant(2, 1))
    degs, reps = minimal_generators(GradedModuleRep(mixed, (g1, g2), 10))
    assert sorted(degs) == [0, 2]
    assert len(reps) == 2

    inside = GradedModuleRep(free, ((x(0),), (x(1),)), 10)
    assert minimal_generators(inside)[0] == (2, 2)


def test_minimal_generators_cap_guard():
    free = ModuleAmbient(2, [CyclicPiece(0)])
    with pytest.raises(CapBoundaryGenerator):
        minimal_generators(GradedModuleRep(free, ((x(0),),), 2))


def test_rank_nullity_cross_check():
    # dim (M/S+M)_d == dim M_d - dim (S+ M)_d, both sides recomputed
    mixed = ModuleAmbient(2, [CyclicPiece(0), CyclicPiece(2, (1, -1))])
    gens = ((x(0), SPoly.constant(2, 1)), (x(0) * x(1), SPoly.zero(2)))
    module = GradedModuleRep(mixed, gens, 12)
    degs, _ = minimal_generators(module)
    for d in range(0, 12, 2):
        m_d = len(degree_basis(module, d))
        lower = GradedModuleRep(
            mixed,
            tuple(
                tuple(SPoly.variable(2, var) * c for c in g)
                for g in gens
                for var in range(2)
            ),
            12,
        )
        # (S+ M)_d equals the degree-d slice of the module generated by x_k g
        splus_d = len(degree_basis(lower, d))
        assert degs.count(d) == m_d - splus_d


def _random_module(rng):
    pieces = []
    for _ in range(rng.randint(1, 3)):
        shift = 2 * rng.randint(0, 2)
        if rng.random() < 0.5:
            pieces.append(CyclicPiece(shift))
        else:
            coords = (rng.randint(1, 2), rng.randint(-2, 2))
            pieces.append(CyclicPiece(shift, coords))
    amb = ModuleAmbient(2, pieces)
    gens = []
    for _ in range(rng.randint(1, 3)):
        d = 2 * rng.randint(0, 2)
        comp = []
        for piece in pieces:
            k2 = d - piece.shift
            if k2 < 0 or k2 % 2:
                comp.append(SPoly.zero(2))
                continue
            terms = {}
            for mono in amb.ring.monomials(k2 // 2):
                if rng.random() < 0.6:
                    terms[mono] = Fraction(rng.randint(-2, 2))
            comp.append(SPoly(2, terms))
        gens.append(tuple(comp))
    return amb, tuple(gens)


def _respan(amb, gens, rng):
    """A different generating set of the same submodule: unimodular integer
    combinations plus redundant multiples."""
    k = len(gens)
    new = []
    for i in range(k):
        comp = [SPoly.zero(2) for _ in amb.pieces]
        di = amb.element_degree(gens[i])
        for j in range(k):
            if amb.element_degree(gens[j]) != di or (i != j and rng.random() < 0.5):
                continue
            c = 1 if i == j else rng.randint(-2, 2)
            comp = [a + c * b for a, b in zip(comp, gens[j])]
        new.append(tuple(comp))
    for g in gens:
        if rng.random() < 0.5:
            var = rng.randint(0, 1)
            new.append(tuple(SPoly.variable(2, var) * c for c in g))
    return tuple(new)


def test_minimal_generators_presentation_independence():
    rng = random.Random(20240813)
    done = 0
    while done < 50:
        amb, gens = _random_module(rng)
        module = GradedModuleRep(amb, gens, 12)
        try:
            degs, _ = minimal_generators(module)
        except CapBoundaryGenerator:
            continue
        other = GradedModuleRep(amb, _respan(amb, gens, rng), 12)
        degs2, _ = minimal_generators(other)
        assert degs == degs2
        done += 1


def test_debug_dump_round_trips_to_json():
    import json

    mixed = ModuleAmbient(2, [CyclicPiece(0), CyclicPiece(2, (1, -1))])
    gens = ((x(0), SPoly.constant(2, 1)),)
    doc = debug_dump(GradedModuleRep(mixed, gens, 8))
    text = json.dumps(doc)
    back = json.loads(text)
    assert back["pieces"][1]["annihilator"] == [1, -1]
    assert back["generators"][0][0] == [[[1, 0], "1"]]


def test_image_module_contract():
    free2 = ModuleAmbient(2, [CyclicPiece(0), CyclicPiece(0)])
    g = ((SPoly.constant(2, 1), SPoly.zero(2)),)
    m = GradedModuleRep(free2, g, 8)
    same = image_module(m, g, free2)
    for d in (0, 2, 4):
        assert len(degree_basis(same, d)) == len(degree_basis(m, d))
    zero = image_module(m, ((SPoly.zero(2), SPoly.zero(2)),), free2)
    assert minimal_generators(zero) == ((), [])
    with pytest.raises(DegreeMismatch):
        image_module(m, ((x(0), SPoly.zero(2)),), free2)
