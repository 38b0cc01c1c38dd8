import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from homw1.charclass import (
    CoverError,
    DoubleCover,
    build_double_cover,
    chromatic_lower_bound,
    hom_double_cover,
    make_test_graph,
    w1_cocycle,
    w1_height,
    w1_power,
    w1_power_vanishes,
    w1_report,
)
from homw1.gf2alg import Cochain, is_coboundary
from homw1.graphs import GraphError, GuardExceeded, chromatic_number, complete, cycle, find_coloring, kneser, mycielski
from homw1.posets import ComplexInvolution, SimplicialComplex
from homw1.products import sphere_complex

from conftest import random_graph
from test_posets import cycle_complex, rotation


def gf2_rank(m):
    """Dense Gaussian elimination on a 0/1 numpy matrix."""
    m = m.copy() % 2
    rank = 0
    rows, cols = m.shape
    for j in range(cols):
        hits = np.flatnonzero(m[rank:, j]) + rank
        if not hits.size:
            continue
        m[[rank, hits[0]]] = m[[hits[0], rank]]
        below = np.flatnonzero(m[:, j])
        below = below[below != rank]
        m[below] ^= m[rank]
        rank += 1
        if rank == rows:
            break
    return rank


def oracle_height(total, perm):
    """w1-height recomputed from scratch: orbit quotient, lifted-edge cocycle, dense ranks."""
    reps = sorted({min(v, perm[v]) for v in range(total.vertex_count)})
    where = {v: i for i, v in enumerate(reps)}
    proj = [where[min(v, perm[v])] for v in range(total.vertex_count)]
    levels = []
    for level in total.simplices:
        levels.append(sorted({tuple(sorted(proj[v] for v in s)) for s in level}))
    index = [{s: i for i, s in enumerate(level)} for level in levels]
    if len(levels) == 1:
        return 0
    edges_total = set(total.simplices_of(1))
    w = np.array([tuple(sorted((reps[a], reps[b]))) not in edges_total for a, b in levels[1]], dtype=np.uint8)

    def delta(k):
        m = np.zeros((len(levels[k + 1]), len(levels[k])), dtype=np.uint8)
        for i, s in enumerate(levels[k + 1]):
            for f in itertools.combinations(s, k + 1):
                m[i, index[k][f]] ^= 1
        return m

    power = np.ones(len(levels[0]), dtype=np.uint8)
    height = 0
    for n in range(1, len(levels)):
        nxt = np.zeros(len(levels[n]), dtype=np.uint8)
        for i, s in enumerate(levels[n]):
            nxt[i] = power[index[n - 1][s[:-1]]] & w[index[1][s[-2:]]]
        power = nxt
        d = delta(n - 1)
        if gf2_rank(np.column_stack([d, power])) == gf2_rank(d):
            break
        height = n
    return height


def test_make_test_graph():
    assert make_test_graph("k2") == complete(2)
    assert make_test_graph("c:5") == cycle(5)
    assert make_test_graph(3) == cycle(3)
    for bad in ("c:4", "c:1", "k3", 6):
        with pytest.raises(GraphError):
            make_test_graph(bad)


@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_sphere_height_is_its_dimension(n):
    c, t = sphere_complex(n)
    dc = build_double_cover(c, t)
    assert dc.subdivisions == 0
    assert w1_height(dc) == n == oracle_height(c, t.perm)
    assert [w1_power_vanishes(dc, k) for k in range(n + 2)] == [False] * (n + 1) + [True]


def test_hexagon_cover_of_triangle():
    dc = build_double_cover(cycle_complex(6), rotation(6, 3))
    w = w1_cocycle(dc)
    assert len(w.support()) % 2 == 1
    assert w1_height(dc) == 1


def test_square_cover_subdivides_once():
    dc = build_double_cover(cycle_complex(4), rotation(4, 2))
    assert dc.subdivisions == 1
    assert dc.quotient.f_vector() == [4, 4]
    assert w1_height(dc) == 1


def test_cover_error_after_subdivision_budget():
    with pytest.raises(CoverError):
        build_double_cover(cycle_complex(4), rotation(4, 2), max_subdivisions=0)


def test_trivial_cover_has_zero_class():
    # two disjoint triangles swapped: the quotient is one triangle, the cover is trivial
    c = SimplicialComplex.from_facets(list(range(6)), [(0, 1, 2), (3, 4, 5)])
    dc = build_double_cover(c, ComplexInvolution((3, 4, 5, 0, 1, 2)))
    assert dc.quotient.f_vector() == [3, 3, 1]
    assert is_coboundary(dc.quotient_chains, w1_cocycle(dc))
    assert w1_height(dc) == 0
    assert w1_power_vanishes(dc, 1) and not w1_power_vanishes(dc, 0)


def test_empty_space():
    dc = DoubleCover(SimplicialComplex((), ()), ComplexInvolution(()), SimplicialComplex((), ()), (), ())
    assert w1_height(dc) == -1
    assert w1_power_vanishes(dc, 0)


def _covers():
    out = [build_double_cover(*sphere_complex(2))]
    for test, target in [(complete(2), complete(4)), (cycle(5), complete(4)), (complete(2), kneser(5, 2))]:
        out.append(hom_double_cover(test, target))
    return out


@pytest.fixture(scope="module")
def covers():
    return _covers()


def test_representative_choice_changes_w1_by_a_coboundary(covers):
    rng = random.Random(11)
    for dc in covers:
        base = w1_cocycle(dc)
        for _ in range(3):
            reps = [v if rng.random() < 0.5 else dc.involution(v) for v in dc.representatives]
            other = dc.with_representatives(reps)
            assert is_coboundary(dc.quotient_chains, base + w1_cocycle(other))
            assert w1_height(other) == w1_height(dc)


def test_bad_representatives_rejected(covers):
    dc = covers[0]
    with pytest.raises(ValueError):
        dc.with_representatives(dc.representatives[:-1])


def test_height_independent_of_vertex_order(covers):
    rng = random.Random(5)
    for dc in covers:
        for _ in range(3):
            order = list(range(dc.quotient.vertex_count))
            rng.shuffle(order)
            assert w1_height(dc, order) == w1_height(dc)
            for n in range(1, 4):
                assert w1_power_vanishes(dc, n, order) == w1_power_vanishes(dc, n)


def test_power_verdicts_are_monotone(covers):
    for dc in covers:
        verdicts = [w1_power_vanishes(dc, n) for n in range(dc.quotient.dimension + 2)]
        first = verdicts.index(True)
        assert all(verdicts[first:])
        assert first == w1_height(dc) + 1
        report = w1_report(dc)
        assert report.powers == {n: n > report.height for n in range(report.height + 2)}


def test_power_zero_is_unit(covers):
    dc = covers[0]
    assert w1_power(dc, 0) == Cochain.unit(dc.quotient)
    assert w1_power(dc, 1) == w1_cocycle(dc)


@pytest.mark.parametrize(
    "test,target,height",
    [(complete(2), complete(3), 1), (complete(2), complete(4), 2), (cycle(5), complete(3), 0), (cycle(5), complete(4), 1), (cycle(3), complete(4), 1)],
)
def test_hom_heights_match_oracle(test, target, height):
    dc = hom_double_cover(test, target)
    assert w1_height(dc) == height == oracle_height(dc.total, dc.involution.perm)


def test_named_bounds_match_oracle(named_graphs):
    expected = {"K4": 4, "C5": 3, "petersen": 3, "grotzsch": 4}
    for name, g in named_graphs.items():
        cert = chromatic_lower_bound(g, "k2")
        dc = hom_double_cover(complete(2), g)
        assert cert.bound == oracle_height(dc.total, dc.involution.perm) + 2 == expected[name]
        assert cert.bound <= chromatic_number(g)


def test_odd_cycle_test_graph_bounds():
    assert chromatic_lower_bound(complete(4), "c:3").bound == 4
    assert chromatic_lower_bound(complete(5), "c:3").bound == 5
    # no odd-cycle homomorphisms into C_5 from a triangle: empty Hom
    cert = chromatic_lower_bound(cycle(5), "c:3")
    assert (cert.bound, cert.reason, cert.height) == (2, "empty-hom", -1)


def test_edgeless_graphs():
    from homw1.graphs import Graph

    assert chromatic_lower_bound(Graph.from_edges(4, []), "k2").bound == 1
    assert chromatic_lower_bound(Graph.from_edges(0, []), "k2").bound == 0


def test_simplex_guard():
    with pytest.raises(GuardExceeded):
        chromatic_lower_bound(complete(5), "k2", simplex_guard=100)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 100_000))
def test_bound_never_exceeds_chromatic_number(seed):
    g = random_graph(random.Random(seed), 7)
    chi = chromatic_number(g)
    for test in ("k2", "c:3"):
        assert chromatic_lower_bound(g, test).bound <= chi


def test_height_bounded_by_colourings():
    # a colouring with m colours gives Hom(K_2, G) -> Hom(K_2, K_m), so the height is at most m - 2
    rng = random.Random(3)
    for _ in range(10):
        g = random_graph(rng, 7, 0.5)
        if not g.edge_count:
            continue
        m = chromatic_number(g)
        assert find_coloring(g, m) is not None
        assert w1_height(hom_double_cover(complete(2), g)) <= m - 2
