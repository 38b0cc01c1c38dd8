import itertools
import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from homw1.posets import (
    ComplexError,
    ComplexInvolution,
    InvolutionNotFree,
    Poset,
    PosetError,
    QuotientNotSimplicial,
    SimplicialComplex,
    barycentric_subdivide,
    complex_from_dict,
    complex_to_dict,
    face_poset,
    interval_poset,
    order_complex,
    poset_isomorphic,
    quotient_by_involution,
    read_complex,
    subdivide_with_involution,
    write_complex,
)


def cycle_complex(n):
    return SimplicialComplex.from_facets(list(range(n)), [(i, (i + 1) % n) for i in range(n)])


def rotation(n, k):
    return ComplexInvolution(tuple((v + k) % n for v in range(n)))


def brute_chains(p):
    """All chains of p grouped by size, by checking every subset."""
    n = len(p)
    out = []
    for size in range(1, n + 1):
        level = [
            s for s in itertools.combinations(range(n), size)
            if all(p.comparable(a, b) for a, b in itertools.combinations(s, 2))
        ]
        if not level:
            break
        out.append(level)
    return out


def subset_poset(m, proper=True):
    masks = [x for x in range(1, 1 << m) if not (proper and x == (1 << m) - 1)]
    return Poset.from_leq(masks, lambda a, b: a & b == a)


@st.composite
def random_posets(draw, max_size=7):
    n = draw(st.integers(1, max_size))
    # relation from a random DAG on 0..n-1 (edges go upward), then transitive closure
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    up = [1 << i for i in range(n)]
    for i, j in chosen:
        up[i] |= 1 << j
    for i in reversed(range(n)):
        m = up[i]
        for j in range(i + 1, n):
            if m >> j & 1:
                m |= up[j]
        up[i] = m
    return Poset(up)


@st.composite
def random_complexes(draw, max_vertices=7, max_dim=3):
    n = draw(st.integers(1, max_vertices))
    facets = draw(
        st.lists(
            st.lists(st.integers(0, n - 1), min_size=1, max_size=max_dim + 1, unique=True),
            max_size=8,
        )
    )
    return SimplicialComplex.from_facets(list(range(n)), facets)


def test_poset_validation():
    with pytest.raises(PosetError):
        Poset([0b10, 0b10])  # not reflexive
    with pytest.raises(PosetError):
        Poset([0b11, 0b11])  # not antisymmetric
    with pytest.raises(PosetError):
        Poset([0b011, 0b110, 0b100])  # not transitive


def test_chain_and_antichain():
    c = Poset.chain(4)
    assert c.minimal_elements() == [0] and c.maximal_elements() == [3]
    assert list(c.maximal_chains()) == [(0, 1, 2, 3)]
    a = Poset.antichain(3)
    assert order_complex(a).f_vector() == [3]


def test_boolean_lattice_chains():
    p = subset_poset(3, proper=False)
    assert len(list(p.maximal_chains())) == 6
    assert p.heights[len(p) - 1] == 2


@settings(max_examples=60, deadline=None)
@given(random_posets())
def test_order_complex_matches_brute_force(p):
    c = order_complex(p)
    assert [list(level) for level in c.simplices] == brute_chains(p)
    c.validate()


@settings(max_examples=40, deadline=None)
@given(random_posets())
def test_maximal_chains_are_maximal_simplices(p):
    c = order_complex(p)
    chains = set(p.maximal_chains())
    facets = {
        s for level in c.simplices for s in level
        if not any(set(s) < set(t) for t in c.simplices_of(len(s)))
    }
    assert chains == facets


def test_interval_poset_of_three_chain():
    ip = interval_poset(Poset.chain(3))
    assert len(ip) == 6
    assert order_complex(ip).f_vector() == [6, 9, 4]


def test_face_poset_and_subdivision():
    tri = SimplicialComplex.from_facets([0, 1, 2], [(0, 1, 2)])
    fp = face_poset(tri)
    assert len(fp) == 7
    sd = barycentric_subdivide(tri)
    assert sd.f_vector() == [7, 12, 6]
    assert sd.euler_characteristic() == 1


@settings(max_examples=40, deadline=None)
@given(random_complexes())
def test_subdivision_preserves_euler_characteristic(c):
    sd = barycentric_subdivide(c)
    assert sd.euler_characteristic() == c.euler_characteristic()
    assert sd.dimension == c.dimension
    # top simplices multiply by (d+1)!
    d = c.dimension
    assert sd.count(d) == c.count(d) * len(list(itertools.permutations(range(d + 1))))


def test_from_facets_rejects_bad_input():
    with pytest.raises(ComplexError):
        SimplicialComplex((0, 1), (((0,), (1,)), ((0, 2),))).validate()
    with pytest.raises(ComplexError):
        SimplicialComplex((0, 1, 2), (((0,), (1,), (2,)), ((0, 1), (1, 2)), ((0, 1, 2),))).validate()


def test_complex_membership():
    c = cycle_complex(4)
    assert (0, 1) in c and (1, 3) not in c and (5,) not in c
    assert c.simplices_of(1) == ((0, 1), (0, 3), (1, 2), (2, 3))
    assert c.rank_of((2, 3)) == 3
    assert c.full_subcomplex({0, 1, 2})[1] == [(0, 1), (1, 2)]


def test_involution_validation():
    c = cycle_complex(6)
    rotation(6, 3).validate(c)
    with pytest.raises(ComplexError):
        ComplexInvolution((1, 2, 0, 3, 4, 5)).validate(c)
    with pytest.raises(ComplexError):
        ComplexInvolution((0, 2, 1, 3, 4, 5)).validate(c)


def test_hexagon_quotient_is_triangle():
    q = quotient_by_involution(cycle_complex(6), rotation(6, 3))
    assert q.complex.f_vector() == [3, 3]
    assert q.projection == (0, 1, 2, 0, 1, 2)
    assert q.representatives == (0, 1, 2)


def test_square_quotient_needs_subdivision():
    c, t = cycle_complex(4), rotation(4, 2)
    with pytest.raises(QuotientNotSimplicial):
        quotient_by_involution(c, t)
    sub, st_ = subdivide_with_involution(c, t)
    assert sub.f_vector() == [8, 8]
    q = quotient_by_involution(sub, st_)
    assert q.complex.f_vector() == [4, 4]


def test_orbit_pair_in_a_simplex():
    c = SimplicialComplex.from_facets([0, 1], [(0, 1)])
    with pytest.raises(QuotientNotSimplicial):
        quotient_by_involution(c, ComplexInvolution((1, 0)))


def test_fixed_vertex_rejected():
    c = SimplicialComplex.from_facets([0, 1, 2], [(0,), (1,), (2,)])
    with pytest.raises(InvolutionNotFree):
        quotient_by_involution(c, ComplexInvolution((1, 0, 2)))


@settings(max_examples=40, deadline=None)
@given(random_posets(6), st.randoms(use_true_random=False))
def test_isomorphism_found_for_relabelings(p, rnd):
    perm = list(range(len(p)))
    rnd.shuffle(perm)
    inv = {perm[i]: i for i in range(len(p))}
    up = [0] * len(p)
    for i in range(len(p)):
        up[perm[i]] = sum(1 << perm[j] for j in range(len(p)) if p.leq(i, j))
    q = Poset(up)
    ok, witness = poset_isomorphic(p, q)
    assert ok
    assert all(p.leq(i, j) == q.leq(witness[i], witness[j]) for i in range(len(p)) for j in range(len(p)))
    assert inv  # relabeling was a bijection


def test_non_isomorphic_posets():
    assert poset_isomorphic(Poset.chain(3), Poset.antichain(3)) == (False, None)
    # same invariants up to size, different shape: "N" versus a 4-crown-free zigzag
    n_shape = Poset.from_leq(range(4), lambda a, b: a == b or (a, b) in {(0, 2), (1, 2), (1, 3)})
    v_shape = Poset.from_leq(range(4), lambda a, b: a == b or (a, b) in {(0, 2), (0, 3), (1, 3)})
    assert poset_isomorphic(n_shape, v_shape)[0]
    w_shape = Poset.from_leq(range(4), lambda a, b: a == b or (a, b) in {(0, 2), (0, 3), (1, 2)})
    assert poset_isomorphic(n_shape, w_shape)[0]
    y_shape = Poset.from_leq(range(4), lambda a, b: a == b or (a, b) in {(0, 1), (0, 2), (0, 3)})
    assert not poset_isomorphic(n_shape, y_shape)[0]


def test_json_round_trip(tmp_path):
    c = barycentric_subdivide(cycle_complex(4))
    c2, t2 = subdivide_with_involution(cycle_complex(4), rotation(4, 2))
    doc = complex_to_dict(c2, t2)
    assert doc["format"] == "homw1-complex"
    back, t = complex_from_dict(json.loads(json.dumps(doc)))
    assert back.simplices == c2.simplices and back.labels == c2.labels and t == t2
    path = tmp_path / "c.json"
    write_complex(path, c)
    back, t = read_complex(path)
    assert back.simplices == c.simplices and back.labels == c.labels and t is None


def test_json_rejects_garbage():
    with pytest.raises(ComplexError):
        complex_from_dict({"format": "something-else"})
