import random

import pytest

from kmflag.bmp import (
    compute_bmp,
    default_degree_cap,
    stalk_poincare,
    verify_against_inverse_kl,
)
from kmflag.errors import BaseNotVertex, CapBoundaryGenerator, IntervalNotContained
from kmflag.kl import KLTable, QPoly
from kmflag.moment_graph import build_moment_graph, sections
from kmflag.root_datum import validate_cartan
from kmflag.weyl import (
    bruhat_leq,
    enumerate_ideal,
    format_word,
    from_word,
    identity,
)


def test_a1_stalks(a1):
    ideal = enumerate_ideal(a1, 1)
    graph = build_moment_graph(a1, ideal)
    sheaf = compute_bmp(graph, identity(a1))
    assert all(degs == (0,) for degs in sheaf.stalks.values())
    assert stalk_poincare(sheaf, ideal.elements[1]) == QPoly((1,))


def test_base_stalk_and_support(a2, a2_graph):
    s1 = from_word(a2, [0])
    sheaf = compute_bmp(a2_graph, s1)
    for v in a2_graph.vertices:
        if not bruhat_leq(s1, v):
            assert sheaf.stalks[v] == ()
        else:
            assert sheaf.stalks[v] != ()
    assert sheaf.stalks[s1] == (0,)


def test_a2_base_identity_all_rank_one(a2, a2_graph):
    sheaf = compute_bmp(a2_graph, identity(a2))
    assert all(degs == (0,) for degs in sheaf.stalks.values())


def test_base_not_vertex(a2, a2_graph):
    other = validate_cartan([[2]])
    with pytest.raises(BaseNotVertex):
        compute_bmp(a2_graph, identity(other))


def test_poincare_reads_degrees():
    class Dummy:
        stalks = {"w": (0, 2, 2)}

    assert stalk_poincare(Dummy(), "w") == QPoly((1, 2))


def test_a3_nontrivial_stalk(a3, a3_graph, a3_table):
    base = from_word(a3, [1])
    target = from_word(a3, [1, 0, 2, 1])
    sheaf = compute_bmp(a3_graph, base)
    assert stalk_poincare(sheaf, target) == QPoly((1, 1))
    assert stalk_poincare(sheaf, target) == a3_table.inverse_kl(base, target)


@pytest.mark.parametrize("fixture", ["a2_graph", "b2_graph", "affine_a1_graph"])
def test_verify_against_inverse_kl_small(fixture, request):
    graph = request.getfixturevalue(fixture)
    table = KLTable(graph.ideal)
    for base in graph.vertices:
        report = verify_against_inverse_kl(graph, base, table)
        assert report.all_match, format_word(base)
        assert report.entries[0].stalk == QPoly((1,))


def test_verify_interval_not_contained(a2, a2_graph):
    small_table = KLTable(enumerate_ideal(a2, 1))
    with pytest.raises(IntervalNotContained):
        verify_against_inverse_kl(a2_graph, identity(a2), small_table)


def test_linear_extension_independence(b2_graph, affine_a1_graph):
    rng = random.Random(20240814)
    for graph in (b2_graph, affine_a1_graph):
        for base in graph.vertices[:4]:
            reference = compute_bmp(graph, base)
            support = [v for v in graph.vertices if bruhat_leq(base, v)]
            for _ in range(3):
                by_length = {}
                for v in support:
                    by_length.setdefault(v.length(), []).append(v)
                shuffled = []
                for length in sorted(by_length):
                    block = by_length[length]
                    rng.shuffle(block)
                    shuffled.extend(block)
                again = compute_bmp(graph, base, order=shuffled)
                assert again.stalks == reference.stalks


def test_order_validation(a2, a2_graph):
    e = identity(a2)
    support = [v for v in a2_graph.vertices]
    with pytest.raises(ValueError):
        compute_bmp(a2_graph, e, order=list(reversed(support)))
    with pytest.raises(ValueError):
        compute_bmp(a2_graph, e, order=support[:-1])


def test_strict_mode_agrees(a2_graph, b2_graph, b2, b2_group, affine_a1):
    small_affine = enumerate_ideal(affine_a1, 4)
    affine_graph = build_moment_graph(affine_a1, small_affine)
    b2_dual = build_moment_graph(b2, b2_group, dual=True)
    for graph in (a2_graph, b2_graph, b2_dual, affine_graph):
        for base in graph.vertices:
            fast = compute_bmp(graph, base)
            slow = compute_bmp(graph, base, strict=True)
            assert fast.stalks == slow.stalks, format_word(base)


def test_dual_graph_same_ranks(a2, a2_graph, b2, b2_group, b2_graph):
    duals = [
        (a2_graph, build_moment_graph(a2, a2_graph.ideal, dual=True)),
        (b2_graph, build_moment_graph(b2, b2_group, dual=True)),
    ]
    for primal, dual in duals:
        for base in primal.vertices:
            assert compute_bmp(primal, base).stalks == compute_bmp(dual, base).stalks


def test_cap_boundary_guard(a3, a3_graph):
    base = from_word(a3, [1])
    # the nontrivial degree-2 generator appears at cap-2 when cap = 4
    with pytest.raises(CapBoundaryGenerator):
        compute_bmp(a3_graph, base, degree_cap=4)


def test_larger_cap_same_stalks(a3, a3_graph):
    base = from_word(a3, [1])
    default = compute_bmp(a3_graph, base)
    bigger = compute_bmp(a3_graph, base, degree_cap=default.degree_cap + 4)
    assert bigger.stalks == default.stalks


def test_default_cap_formula(a3_graph, a2_graph):
    e = identity(a3_graph.datum)
    assert default_degree_cap(a3_graph, e) == 2 * 6 + 4
    w0 = max(a2_graph.vertices, key=lambda v: v.length())
    assert default_degree_cap(a2_graph, w0) == 4


def test_sheaf_restrictions_are_surjective(a2, a2_graph):
    # property (3) of the canonical sheaf: sections over the whole ideal
    # surject onto sections over any smaller downward-closed subset
    from kmflag._linalg import RowSpan

    base = identity(a2)
    sheaf = compute_bmp(a2_graph, base).sheaf
    opens = [
        [v for v in a2_graph.vertices if v.length() <= bound] for bound in (0, 1, 2)
    ]
    full = sections(sheaf, max_degree=4)
    for subset in opens:
        sub = sections(sheaf, subset=subset, max_degree=4)
        ambients = {v: sheaf.vertex_ambient(v) for v in subset}
        for d in (0, 2, 4):
            width = sum(ambients[v].dim(d) for v in subset)
            restricted = RowSpan(width)
            for sec in full[d]:
                vec = []
                for v in subset:
                    vec.extend(ambients[v].flatten(sec[v], d))
                restricted.add(vec)
            assert restricted.dim == len(sub[d])


def test_sheaf_sections_surject_onto_stalks(a2, a2_graph):
    # property (4) of the canonical sheaf: global sections surject onto
    # every stalk in each degree
    from kmflag._linalg import RowSpan

    base = identity(a2)
    result = compute_bmp(a2_graph, base)
    sheaf = result.sheaf
    secs = sections(sheaf, max_degree=4)
    for w in a2_graph.vertices:
        amb = sheaf.vertex_ambient(w)
        for d in (0, 2, 4):
            dim = amb.dim(d)
            if dim == 0:
                continue
            span = RowSpan(dim)
            for sec in secs[d]:
                span.add(amb.flatten(sec[w], d))
            assert span.dim == dim, (format_word(w), d)
