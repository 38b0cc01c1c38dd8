"""Multihomomorphism posets ``Hom(G, H)`` and the map to a product of spheres.

A multihomomorphism assigns a nonempty set of target vertices to every
source vertex so that every selection across an edge of ``G`` is an edge of
``H``.  Sets are bitmasks over ``V(H)``; an element of the poset is a tuple
of masks indexed by source vertex.  Ordering is pointwise inclusion, and the
order complex of this poset is the barycentric subdivision of the Hom
complex.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from fractions import Fraction
from typing import Sequence

from .graphs import Graph, GraphAutomorphism, GraphError, GuardExceeded, complete, cycle, flip_automorphism
from .posets import Poset, order_complex, SimplicialComplex, ComplexInvolution

DEFAULT_ELEMENT_GUARD = 200_000

Multihom = tuple  # tuple[int, ...]: one bitmask of target vertices per source vertex


def mask_to_set(mask: int) -> tuple[int, ...]:
    return tuple(i for i in range(mask.bit_length()) if mask >> i & 1)


def set_to_mask(values) -> int:
    mask = 0
    for v in values:
        mask |= 1 << v
    return mask


def _submasks(mask: int):
    """Nonempty submasks of ``mask`` in increasing numeric order."""
    subs = []
    sub = mask
    while sub:
        subs.append(sub)
        sub = (sub - 1) & mask
    return reversed(subs)


@dataclass(frozen=True, eq=False)
class HomPoset:
    source: Graph
    target: Graph
    elements: tuple  # tuple[Multihom, ...], sorted by (total size, masks)
    poset: Poset = field(repr=False)

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def is_empty(self) -> bool:
        return not self.elements

    def index_of(self, phi: Multihom) -> int:
        return self._index[tuple(phi)]

    @cached_property
    def _index(self) -> dict:
        return {phi: i for i, phi in enumerate(self.elements)}

    def as_sets(self, i: int) -> tuple[tuple[int, ...], ...]:
        return tuple(mask_to_set(m) for m in self.elements[i])

    def minimal_elements(self) -> list[int]:
        return self.poset.minimal_elements()

    def order_complex(self, limit: int | None = None) -> SimplicialComplex:
        return order_complex(self.poset, limit)


def enumerate_multihoms(g: Graph, h: Graph, guard: int = DEFAULT_ELEMENT_GUARD) -> list[Multihom]:
    """All multihomomorphisms ``g -> h`` by backtracking in vertex order."""
    if g.vertex_count == 0:
        return [()]
    hmasks = h.neighbor_masks
    full = (1 << h.vertex_count) - 1
    earlier = [[u for u in g.neighbors(v) if u < v] for v in range(g.vertex_count)]
    # common[S]: vertices of h adjacent to every vertex of S
    common = [full] * (1 << h.vertex_count)
    for s in range(1, 1 << h.vertex_count):
        low = (s & -s).bit_length() - 1
        common[s] = common[s & (s - 1)] & hmasks[low]
    found: list[Multihom] = []
    current = [0] * g.vertex_count

    def extend(v: int) -> None:
        if v == g.vertex_count:
            found.append(tuple(current))
            if len(found) > guard:
                raise GuardExceeded(f"Hom({g.name or 'G'}, {h.name or 'H'}) has more than {guard} elements")
            return
        allowed = full
        for u in earlier[v]:
            allowed &= common[current[u]]
        for sub in _submasks(allowed):
            current[v] = sub
            extend(v + 1)

    extend(0)
    return found


def hom_poset(g: Graph, h: Graph, guard: int = DEFAULT_ELEMENT_GUARD) -> HomPoset:
    """The multihomomorphism poset ``Hom(g, h)`` with canonical element order.

    Elements are sorted by total number of colours, then by their masks, so
    the element order is a linear extension of the partial order.
    """
    elements = enumerate_multihoms(g, h, guard)
    elements.sort(key=lambda phi: (sum(m.bit_count() for m in phi), phi))
    return HomPoset(g, h, tuple(elements), _inclusion_poset(elements, g.vertex_count, h.vertex_count))


def _inclusion_poset(elements: Sequence[Multihom], slots: int, width: int) -> Poset:
    """Pointwise inclusion order via per-slot superset transforms."""
    size = 1 << width
    above_by_slot = []
    for v in range(slots):
        bucket = [0] * size
        for i, phi in enumerate(elements):
            bucket[phi[v]] |= 1 << i
        # bucket[S] := OR of bucket[T] over T ⊇ S
        for bit in range(width):
            step = 1 << bit
            for s in range(size):
                if not s & step:
                    bucket[s] |= bucket[s | step]
        above_by_slot.append(bucket)
    everything = (1 << len(elements)) - 1
    up = []
    for phi in elements:
        mask = everything
        for v in range(slots):
            mask &= above_by_slot[v][phi[v]]
        up.append(mask)
    labels = [tuple(mask_to_set(m) for m in phi) for phi in elements]
    return Poset(up, labels, validate=False)


def induced_involution(hp: HomPoset, a: GraphAutomorphism) -> tuple[int, ...]:
    """Element permutation ``phi -> phi ∘ a`` induced by an involutive automorphism of the source."""
    if a.graph.vertex_count != hp.source.vertex_count or a.graph.edges != hp.source.edges:
        raise GraphError("automorphism is not an automorphism of the source graph")
    if any(a.perm[a.perm[v]] != v for v in range(len(a.perm))):
        raise GraphError("automorphism is not involutive")
    return tuple(hp.index_of(tuple(phi[a.perm[v]] for v in range(len(phi)))) for phi in hp.elements)


def complex_involution(hp: HomPoset, a: GraphAutomorphism) -> ComplexInvolution:
    return ComplexInvolution(induced_involution(hp, a))


@dataclass(frozen=True)
class FreenessReport:
    free: bool
    fixed_element: int | None = None
    comparable_pair: tuple[int, int] | None = None

    def as_dict(self) -> dict:
        return {
            "free": self.free,
            "fixed_element": self.fixed_element,
            "comparable_pair": list(self.comparable_pair) if self.comparable_pair else None,
        }


def check_freeness(hp: HomPoset, t: Sequence[int]) -> FreenessReport:
    """No element fixed and no element comparable to its image.

    Together these mean the induced involution on the order complex moves
    every simplex off itself.
    """
    for i, j in enumerate(t):
        if i == j:
            return FreenessReport(False, fixed_element=i)
    for i, j in enumerate(t):
        if hp.poset.comparable(i, j):
            return FreenessReport(False, comparable_pair=(i, j))
    return FreenessReport(True)


def odd_cycle_hom(r: int, n: int, guard: int = DEFAULT_ELEMENT_GUARD) -> tuple[HomPoset, tuple[int, ...]]:
    """``Hom(C_{2r+1}, K_{n+2})`` together with the flip involution on elements."""
    if r < 1 or n < 0:
        raise ValueError(f"need r >= 1 and n >= 0, got r={r}, n={n}")
    g = cycle(2 * r + 1)
    hp = hom_poset(g, complete(n + 2), guard)
    return hp, induced_involution(hp, flip_automorphism(g))


# -- the map to (S^n)^{2r} ----------------------------------------------------


def sphere_vector(mask: int, colours: int) -> tuple[Fraction, ...]:
    """Rational point ``chi_A - |A|/colours`` standing for the subset ``A``.

    Complementary subsets go to negatives of each other.
    """
    size = mask.bit_count()
    return tuple(Fraction(int(mask >> i & 1)) - Fraction(size, colours) for i in range(colours))


def _affine(terms: Sequence[tuple[Fraction, Sequence[Fraction]]], colours: int) -> tuple[Fraction, ...]:
    out = [Fraction(0)] * colours
    for weight, vec in terms:
        for i, x in enumerate(vec):
            out[i] += weight * x
    return tuple(out)


def f_point(chain: Sequence[Multihom], weights: Sequence[Fraction], r: int, n: int) -> list[tuple[Fraction, ...]]:
    """Image of the point ``sum_j weights[j] * chain[j]`` under ``f = (f_0, ..., f_{2r-1})``.

    Coordinate ``i > 0`` interpolates the points of ``phi_j(v_i)``;
    coordinate 0 interpolates the midpoints of ``phi_j(v_0)`` and the
    complement of ``phi_j(v_{2r})``.
    """
    colours = n + 2
    full = (1 << colours) - 1
    half = Fraction(1, 2)
    coords = []
    terms0 = []
    for w, phi in zip(weights, chain):
        terms0.append((w * half, sphere_vector(phi[0], colours)))
        terms0.append((w * half, sphere_vector(full & ~phi[2 * r], colours)))
    coords.append(_affine(terms0, colours))
    for i in range(1, 2 * r):
        coords.append(_affine([(w, sphere_vector(phi[i], colours)) for w, phi in zip(weights, chain)], colours))
    return coords


def f_vertex_map(phi: Multihom, r: int, n: int) -> list[tuple[Fraction, ...]]:
    """``f`` evaluated at a single poset element."""
    return f_point([tuple(phi)], [Fraction(1)], r, n)


def positively_proportional(x: Sequence[Fraction], y: Sequence[Fraction]) -> bool:
    """Same point of the sphere: ``y = c x`` for some ``c > 0`` (both nonzero)."""
    if not any(x) or not any(y):
        return False
    k = next(i for i, a in enumerate(x) if a)
    c = y[k] / x[k]
    return c > 0 and all(b == c * a for a, b in zip(x, y))


def negate(x: Sequence[Fraction]) -> tuple[Fraction, ...]:
    return tuple(-a for a in x)


# -- combinatorial lemma check ------------------------------------------------


@dataclass
class LemmaReport:
    r: int
    n: int
    elements: int
    chains_checked: int = 0
    passed: bool = True
    counterexample: dict | None = None

    def as_dict(self) -> dict:
        return {
            "r": self.r,
            "n": self.n,
            "elements": self.elements,
            "chains_checked": self.chains_checked,
            "passed": self.passed,
            "counterexample": self.counterexample,
        }


def verify_f_lemmas(r: int, n: int, guard: int = DEFAULT_ELEMENT_GUARD) -> LemmaReport:
    """Check the carrier conditions behind ``f_i(y) != f_{i+1}(y)`` on every maximal chain.

    (a) for ``0 < i < 2r-1``, the chains ``phi_j(v_i)`` and ``phi_j(v_{i+1})``
    share no subset; (b) the vertex set of the carrier of ``f_1`` differs
    from that of ``f_0``, whose carrier is the chain
    ``phi_0(v_0) ⊂ ... ⊂ phi_s(v_0) ⊂ ∁phi_s(v_2r) ⊂ ... ⊂ ∁phi_0(v_2r)``;
    the bottom subsets ``phi_0(v_1)`` and ``phi_0(v_0)`` are also checked to
    be disjoint.
    """
    hp, _ = odd_cycle_hom(r, n, guard)
    full = (1 << (n + 2)) - 1
    report = LemmaReport(r, n, len(hp))
    last = 2 * r

    for chain_idx in hp.poset.maximal_chains():
        chain = [hp.elements[k] for k in chain_idx]
        report.chains_checked += 1
        for i in range(1, 2 * r - 1):
            left = {phi[i] for phi in chain}
            right = {phi[i + 1] for phi in chain}
            if left & right:
                report.passed = False
                report.counterexample = {
                    "lemma": "consecutive",
                    "i": i,
                    "chain": [hp.as_sets(k) for k in chain_idx],
                }
                return report
        carrier1 = {phi[1] for phi in chain}
        carrier0 = {phi[0] for phi in chain} | {full & ~phi[last] for phi in chain}
        if carrier1 == carrier0 or chain[0][1] & chain[0][0]:
            report.passed = False
            report.counterexample = {"lemma": "first", "chain": [hp.as_sets(k) for k in chain_idx]}
            return report
    return report


def check_f_equivariance(r: int, n: int, guard: int = DEFAULT_ELEMENT_GUARD) -> dict:
    """Exact checks of ``f(tau phi) = tau f(phi)`` and ``f(phi) ∉ A`` on every element."""
    hp, tau = odd_cycle_hom(r, n, guard)
    failures = []
    for k, phi in enumerate(hp.elements):
        fx = f_vertex_map(phi, r, n)
        ftx = f_vertex_map(hp.elements[tau[k]], r, n)
        expected = [negate(fx[0])] + [fx[2 * r - i] for i in range(1, 2 * r)]
        if ftx != expected:
            failures.append({"element": hp.as_sets(k), "check": "equivariance"})
            continue
        if any(not any(x) for x in fx):
            failures.append({"element": hp.as_sets(k), "check": "nonzero"})
            continue
        for i in range(2 * r - 1):
            if positively_proportional(fx[i], fx[i + 1]):
                failures.append({"element": hp.as_sets(k), "check": f"x_{i} = x_{i + 1}"})
        if positively_proportional(fx[2 * r - 1], negate(fx[0])):
            failures.append({"element": hp.as_sets(k), "check": f"x_{2 * r - 1} = -x_0"})
    return {"r": r, "n": n, "elements": len(hp), "passed": not failures, "failures": failures[:5]}
