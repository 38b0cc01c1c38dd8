"""Double covers, the class w1 as an explicit cocycle, cup powers and colouring bounds.

The double cover ``X -> X/Z_2`` of a free simplicial involution is realized
as an honest simplicial quotient.  w1 is the sheet-swap cocycle: pick one
lift (representative) of every quotient vertex and mark each quotient edge
whose lift starting at one representative does not end at the other.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

from .gf2alg import Cochain, GF2ChainComplex, betti, cup_product, is_coboundary
from .graphs import Graph, GraphError, complete, cycle, edge_swap, flip_automorphism
from .homcomplex import DEFAULT_ELEMENT_GUARD, check_freeness, hom_poset, induced_involution
from .posets import (
    ComplexInvolution,
    QuotientNotSimplicial,
    SimplicialComplex,
    quotient_by_involution,
    subdivide_with_involution,
)

MAX_SUBDIVISIONS = 2
DEFAULT_SIMPLEX_GUARD = 2_000_000


class CoverError(RuntimeError):
    """The quotient stayed non-simplicial after the allowed subdivisions."""


@dataclass(frozen=True, eq=False)
class DoubleCover:
    total: SimplicialComplex
    involution: ComplexInvolution
    quotient: SimplicialComplex
    projection: tuple[int, ...]
    representatives: tuple[int, ...]
    subdivisions: int = 0

    @cached_property
    def quotient_chains(self) -> GF2ChainComplex:
        return GF2ChainComplex(self.quotient)

    @property
    def is_empty(self) -> bool:
        return self.total.vertex_count == 0

    def with_representatives(self, representatives: Sequence[int]) -> "DoubleCover":
        reps = tuple(representatives)
        if len(reps) != self.quotient.vertex_count or any(
            self.projection[v] != k for k, v in enumerate(reps)
        ):
            raise ValueError("representatives must pick one lift of each quotient vertex, in order")
        return DoubleCover(self.total, self.involution, self.quotient, self.projection, reps, self.subdivisions)


def build_double_cover(
    c: SimplicialComplex, t: ComplexInvolution, max_subdivisions: int = MAX_SUBDIVISIONS
) -> DoubleCover:
    """Quotient ``c`` by ``t``, subdividing (with ``t``) when the quotient is not simplicial."""
    subdivisions = 0
    while True:
        try:
            q = quotient_by_involution(c, t)
        except QuotientNotSimplicial as exc:
            if subdivisions >= max_subdivisions:
                raise CoverError(
                    f"quotient still not simplicial after {subdivisions} subdivisions "
                    f"(f-vector {c.f_vector()}): {exc}"
                ) from exc
            c, t = subdivide_with_involution(c, t)
            subdivisions += 1
            continue
        return DoubleCover(c, t, q.complex, q.projection, q.representatives, subdivisions)


def w1_cocycle(dc: DoubleCover) -> Cochain:
    """Sheet-swap 1-cocycle on the quotient for the chosen representatives."""
    reps = dc.representatives
    total = dc.total
    bits = 0
    for j, (a, b) in enumerate(dc.quotient.simplices_of(1)):
        ra, rb = reps[a], reps[b]
        if (min(ra, rb), max(ra, rb)) not in total:
            bits |= 1 << j
    return Cochain(1, bits, dc.quotient.count(1))


def w1_power(dc: DoubleCover, n: int, vertex_order: Sequence[int] | None = None) -> Cochain:
    """The n-fold cup power of the w1 cocycle (the unit cochain for n = 0)."""
    power = Cochain.unit(dc.quotient)
    if n == 0:
        return power
    w = w1_cocycle(dc)
    power = w
    for _ in range(n - 1):
        if power.is_zero():
            return Cochain.zero(dc.quotient, power.dim + 1)
        power = cup_product(dc.quotient, power, w, vertex_order)
    return power


def w1_power_vanishes(dc: DoubleCover, n: int, vertex_order: Sequence[int] | None = None) -> bool:
    """Whether ``w1^n`` is zero in ``H^n(X/Z_2; Z_2)``.

    For ``n = 0`` this is whether the quotient (equivalently the space) is empty.
    """
    if n == 0:
        return dc.quotient.vertex_count == 0
    if dc.quotient.count(n) == 0:
        return True
    return is_coboundary(dc.quotient_chains, w1_power(dc, n, vertex_order))


def w1_height(dc: DoubleCover, vertex_order: Sequence[int] | None = None) -> int:
    """Largest ``n`` with ``w1^n != 0``; -1 for the empty space."""
    if dc.is_empty:
        return -1
    w = w1_cocycle(dc)
    power = Cochain.unit(dc.quotient)
    height = 0
    for n in range(1, dc.quotient.dimension + 1):
        power = cup_product(dc.quotient, power, w, vertex_order)
        if power.is_zero() or is_coboundary(dc.quotient_chains, power):
            break
        height = n
    return height


@dataclass
class W1Report:
    height: int
    powers: dict[int, bool]
    quotient_betti: list[int]
    subdivisions: int
    vertex_order: str = "lex"

    def as_dict(self) -> dict:
        return {
            "height": self.height,
            "powers": {str(n): v for n, v in sorted(self.powers.items())},
            "quotient_betti": list(self.quotient_betti),
            "subdivisions": self.subdivisions,
            "vertex_order": self.vertex_order,
        }


def w1_report(
    dc: DoubleCover, vertex_order: Sequence[int] | None = None, order_name: str | None = None
) -> W1Report:
    """Height plus the vanishing verdict for every power ``0..height+1``."""
    height = w1_height(dc, vertex_order)
    powers = {n: n > height for n in range(0, height + 2)}
    for n, vanishes in powers.items():
        if vanishes:
            assert all(powers[m] for m in range(n, height + 2)), "w1 power verdicts not monotone"
    name = order_name or ("lex" if vertex_order is None else "custom")
    return W1Report(height, powers, betti(dc.quotient_chains), dc.subdivisions, name)


# -- Hom complexes ------------------------------------------------------------


def make_test_graph(test: str | int) -> Graph:
    """``"k2"`` gives K_2; an odd integer ``s`` (or ``"c:s"``) gives cycle(s)."""
    if test in ("k2", "K2"):
        return complete(2)
    if isinstance(test, str):
        if not test.startswith("c:"):
            raise GraphError(f"unknown test graph {test!r}; expected 'k2' or 'c:<odd>'")
        test = int(test[2:])
    if test < 3 or test % 2 == 0:
        raise GraphError(f"test cycle length must be odd and >= 3, got {test}")
    return cycle(test)


def hom_double_cover(
    test: Graph,
    target: Graph,
    guard: int = DEFAULT_ELEMENT_GUARD,
    simplex_guard: int = DEFAULT_SIMPLEX_GUARD,
) -> DoubleCover:
    """Double cover of the order complex of ``Hom(test, target)`` under the edge flip of ``test``."""
    a = edge_swap(test) if test.vertex_count == 2 else flip_automorphism(test)
    hp = hom_poset(test, target, guard)
    tau = induced_involution(hp, a)
    report = check_freeness(hp, tau)
    if not report.free:
        raise AssertionError(f"induced involution is not free: {report}")
    c = hp.order_complex(simplex_guard)
    return build_double_cover(c, ComplexInvolution(tau))


@dataclass
class BoundCertificate:
    graph: str
    test: str
    bound: int
    height: int | None
    quotient_betti: list[int] = field(default_factory=list)
    reason: str = "w1-height"

    def as_dict(self) -> dict:
        return {
            "graph": self.graph,
            "test": self.test,
            "bound": self.bound,
            "height": self.height,
            "quotient_betti": list(self.quotient_betti),
            "reason": self.reason,
        }


def chromatic_lower_bound(
    g: Graph,
    test: str | int = "k2",
    guard: int = DEFAULT_ELEMENT_GUARD,
    simplex_guard: int = DEFAULT_SIMPLEX_GUARD,
) -> BoundCertificate:
    """Lower bound on the chromatic number of ``g`` from the w1-height of a Hom complex.

    With ``h`` the height of ``Hom(K_2, g)`` the bound is ``h + 2``; with an
    odd cycle ``C_{2r+1}`` as test graph it is ``h + 3``.
    """
    tg = make_test_graph(test)
    label = "k2" if tg.vertex_count == 2 else f"c:{tg.vertex_count}"
    name = g.name or repr(g)
    if g.edge_count == 0:
        return BoundCertificate(name, label, min(1, g.vertex_count), None, [], "edgeless")
    dc = hom_double_cover(tg, g, guard, simplex_guard)
    if dc.is_empty:
        return BoundCertificate(name, label, 2, -1, [], "empty-hom")
    h = w1_height(dc)
    offset = 2 if tg.vertex_count == 2 else 3
    return BoundCertificate(name, label, h + offset, h, betti(dc.quotient_chains))
