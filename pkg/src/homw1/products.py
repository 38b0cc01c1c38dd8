"""Triangulated products of spheres ``(S^n)^{2r}`` with the involution
``(x_0, x_1, ..., x_{2r-1}) -> (-x_0, x_{2r-1}, ..., x_1)``.

Each sphere is ``bsd(∂Δ^{n+1})`` with complementation as antipodal map.  The
product is triangulated as the order complex of the product of face posets;
the involution permutes factors and complements the first one, which is an
automorphism of that product poset and hence simplicial.  The diagonal
``{x_i = x_{i+1}}`` and antidiagonal ``{x_{2r-1} = -x_0}`` are full
subcomplexes spanned by cells with ``σ_i = σ_{i+1}`` resp. ``σ_{2r-1} = ∁σ_0``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from math import comb

from .charclass import DoubleCover, build_double_cover
from .gf2alg import GF2ChainComplex, betti, is_boundary, pushforward_cycle
from .graphs import GuardExceeded
from .posets import ComplexInvolution, Poset, SimplicialComplex, face_poset, order_complex

# (r, n) -> rough simplex count of the triangulation
SUPPORTED = {(1, 1): 1_000, (1, 2): 200_000, (2, 1): 2_500_000}


def sphere_complex(n: int) -> tuple[SimplicialComplex, ComplexInvolution]:
    """``bsd(∂Δ^{n+1})`` on the proper nonempty subsets of ``{0..n+1}``, with complementation.

    Vertex labels are the subsets as sorted tuples; vertex 0 is ``(0,)``.
    """
    if n < 0:
        raise ValueError(f"sphere dimension must be >= 0, got {n}")
    full = (1 << (n + 2)) - 1
    masks = sorted(range(1, full), key=lambda m: (m.bit_count(), m))
    where = {m: i for i, m in enumerate(masks)}
    up = [sum(1 << where[b] for b in masks if a & b == a) for a in masks]
    labels = [tuple(i for i in range(n + 2) if m >> i & 1) for m in masks]
    c = order_complex(Poset(up, labels, validate=False))
    return c, ComplexInvolution(tuple(where[full ^ m] for m in masks))


def _kron(x: int, y: int, width: int) -> int:
    out = 0
    while x:
        low = x & -x
        out |= y << ((low.bit_length() - 1) * width)
        x ^= low
    return out


def kunneth_betti(r: int, n: int) -> list[int]:
    """Mod-2 Betti numbers of ``(S^n)^{2r}``."""
    k = 2 * r
    if n == 0:
        return [2**k]
    return [comb(k, j // n) if j % n == 0 else 0 for j in range(k * n + 1)]


@dataclass(frozen=True, eq=False)
class XBuild:
    r: int
    n: int
    sphere: SimplicialComplex
    factor: Poset  # face poset of the sphere complex
    factor_complement: tuple[int, ...]
    cells: tuple  # cells[k] = (σ_0, ..., σ_{2r-1}) as indices into ``factor``
    poset: Poset
    triangulation: SimplicialComplex
    involution: ComplexInvolution

    @property
    def top_dimension(self) -> int:
        return 2 * self.r * self.n

    @property
    def cycle_dimension(self) -> int:
        return (2 * self.r - 1) * self.n

    @cached_property
    def chains(self) -> GF2ChainComplex:
        return GF2ChainComplex(self.triangulation)

    @cached_property
    def base_cell(self) -> int:
        """Index in ``factor`` of the 0-simplex labeled ``{0}``."""
        return self.factor.labels.index((0,))


def build_X(r: int, n: int) -> XBuild:
    """Triangulated ``(S^n)^{2r}`` with the free involution; refuses unsupported sizes."""
    if (r, n) not in SUPPORTED:
        raise GuardExceeded(f"product ({r},{n}) not supported; supported sizes: {sorted(SUPPORTED)}")
    sphere, antipode = sphere_complex(n)
    factor = face_poset(sphere)
    where = {s: i for i, s in enumerate(factor.labels)}
    complement = tuple(where[antipode.image(s)] for s in factor.labels)
    m = len(factor)
    k = 2 * r
    cells = tuple(itertools.product(range(m), repeat=k))

    # up-set of a cell: Kronecker product of the factor up-sets (σ_0 most significant)
    suffix_up: dict[tuple, int] = {(): 1}
    for length in range(1, k + 1):
        width = m ** (length - 1)
        for suffix in itertools.product(range(m), repeat=length):
            suffix_up[suffix] = _kron(factor.up[suffix[0]], suffix_up[suffix[1:]], width)
    up = [suffix_up[cell] for cell in cells]
    del suffix_up
    poset = Poset(up, cells, validate=False)
    triangulation = order_complex(poset)

    def index(cell: tuple[int, ...]) -> int:
        out = 0
        for a in cell:
            out = out * m + a
        return out

    tau = tuple(index((complement[c[0]],) + tuple(reversed(c[1:]))) for c in cells)
    return XBuild(r, n, sphere, factor, complement, cells, poset, triangulation, ComplexInvolution(tau))


def _spanned_top(xb: XBuild, keep) -> int:
    """Sum of the (2r-1)n-simplices whose vertices all satisfy ``keep``."""
    d = xb.cycle_dimension
    cells = xb.cells
    good = [keep(c) for c in cells]
    bits = 0
    for j, s in enumerate(xb.triangulation.simplices_of(d)):
        if all(good[v] for v in s):
            bits |= 1 << j
    return bits


def named_cycle(xb: XBuild, label: str) -> int:
    """Cycle for ``c_i``, ``diag_i`` or ``antidiag`` as a bitset over the (2r-1)n-simplices."""
    k = 2 * xb.r
    kind, _, idx = label.partition("_")
    if kind == "c":
        i = int(idx)
        if not 0 <= i < k:
            raise ValueError(f"c_i needs 0 <= i < {k}, got {label}")
        base = xb.base_cell
        return _spanned_top(xb, lambda cell: cell[i] == base)
    if kind == "diag":
        i = int(idx)
        if not 0 <= i < k - 1:
            raise ValueError(f"diag_i needs 0 <= i < {k - 1}, got {label}")
        return _spanned_top(xb, lambda cell: cell[i] == cell[i + 1])
    if label == "antidiag":
        comp = xb.factor_complement
        return _spanned_top(xb, lambda cell: cell[k - 1] == comp[cell[0]])
    raise ValueError(f"unknown cycle label {label!r}")


def named_cycles(xb: XBuild) -> dict[str, int]:
    k = 2 * xb.r
    labels = [f"c_{i}" for i in range(k)] + [f"diag_{i}" for i in range(k - 1)] + ["antidiag"]
    return {label: named_cycle(xb, label) for label in labels}


def _independent(cc: GF2ChainComplex, k: int, cycles: list[int]) -> bool:
    table = cc.image_table(k).copy()
    return all(table.add(z) for z in cycles)


def verify_section3(r: int, n: int, xb: XBuild | None = None) -> dict:
    """Check the homology lemmas behind ``w1^n(X ∖ A) = 0`` on a triangulated ``(S^n)^{2r}``.

    (a) ``c_i + c_{i+1} + diag_i`` and ``c_0 + c_{2r-1} + antidiag`` bound in X;
    (b) the image of ``c_r`` in the quotient bounds;
    (c) the image of ``c_0`` is homologous to the image of ``diag_0 + ... + diag_{r-1}``,
    a cycle carried by the diagonal subcomplexes.
    """
    xb = xb or build_X(r, n)
    d = xb.cycle_dimension
    cc = xb.chains
    cycles = named_cycles(xb)
    checks: list[dict] = []

    def record(name: str, passed: bool) -> None:
        checks.append({"check": name, "passed": bool(passed)})

    tri_betti = betti(cc)
    record("triangulation betti matches Kunneth", tri_betti == kunneth_betti(r, n))
    for label, z in cycles.items():
        record(f"{label} is a cycle", cc.boundary_of(d, z) == 0 if d else True)
    record("c_i independent in homology", _independent(cc, d, [cycles[f"c_{i}"] for i in range(2 * r)]))
    for i in range(2 * r - 1):
        z = cycles[f"c_{i}"] ^ cycles[f"c_{i + 1}"] ^ cycles[f"diag_{i}"]
        record(f"c_{i} + c_{i + 1} + diag_{i} bounds", is_boundary(cc, d, z))
    z = cycles["c_0"] ^ cycles[f"c_{2 * r - 1}"] ^ cycles["antidiag"]
    record(f"c_0 + c_{2 * r - 1} + antidiag bounds", is_boundary(cc, d, z))

    dc = build_double_cover(xb.triangulation, xb.involution)
    qcc = dc.quotient_chains
    counts_halved = all(
        dc.total.count(k) == 2 * dc.quotient.count(k) for k in range(dc.total.dimension + 1)
    )
    record("quotient is a 2-to-1 image in every dimension", counts_halved)

    def push(z: int) -> int:
        return pushforward_cycle(dc.total, dc.quotient, dc.projection, d, z)

    record(f"pi_*(c_{r}) bounds", is_boundary(qcc, d, push(cycles[f"c_{r}"])))
    record("pi_*(c_0) does not bound", not is_boundary(qcc, d, push(cycles["c_0"])))
    telescoped = push(cycles["c_0"])
    for i in range(r):
        telescoped ^= push(cycles[f"diag_{i}"])
    record("pi_*(c_0) is homologous to a cycle on the diagonals", is_boundary(qcc, d, telescoped))

    return {
        "r": r,
        "n": n,
        "cycle_dimension": d,
        "triangulation_f_vector": xb.triangulation.f_vector(),
        "triangulation_betti": tri_betti,
        "quotient_betti": betti(qcc),
        "subdivisions": dc.subdivisions,
        "checks": checks,
        "passed": all(c["passed"] for c in checks),
    }


def x_double_cover(xb: XBuild) -> DoubleCover:
    return build_double_cover(xb.triangulation, xb.involution)
