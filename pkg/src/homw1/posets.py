"""Finite posets, order complexes, subdivisions and quotients by free involutions.

A :class:`Poset` stores full comparability as one bitmask per element
(``up[i]`` has bit ``j`` set iff ``i <= j``), which keeps chain
enumeration to a few integer operations per step.  Simplices of a
:class:`SimplicialComplex` are strictly increasing vertex tuples, grouped by
dimension and kept in lexicographic order, so ``(dimension, rank)`` is a
stable address for every simplex.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Any, Callable, Hashable, Iterator, Sequence

from .graphs import GuardExceeded

COMPLEX_FORMAT = "homw1-complex"
COMPLEX_FORMAT_VERSION = 1


class PosetError(ValueError):
    """The relation handed to :class:`Poset` is not a partial order."""


class ComplexError(ValueError):
    """Malformed simplicial complex or involution."""


class QuotientError(ValueError):
    code = "quotient_error"


class InvolutionNotFree(QuotientError):
    code = "not_free"


class QuotientNotSimplicial(QuotientError):
    code = "not_simplicial"


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


# -- posets -------------------------------------------------------------------


class Poset:
    """Finite poset on elements ``0..n-1`` given by up-set bitmasks."""

    def __init__(self, up: Sequence[int], labels: Sequence[Hashable] | None = None, validate: bool = True):
        self.up = tuple(up)
        n = len(self.up)
        self.labels = tuple(labels) if labels is not None else tuple(range(n))
        if len(self.labels) != n:
            raise PosetError(f"{len(self.labels)} labels for {n} elements")
        if validate:
            self._validate()

    @classmethod
    def from_leq(cls, labels: Sequence[Hashable], leq: Callable[[Any, Any], bool]) -> "Poset":
        labels = list(labels)
        up = []
        for a in labels:
            mask = 0
            for j, b in enumerate(labels):
                if leq(a, b):
                    mask |= 1 << j
            up.append(mask)
        return cls(up, labels)

    @classmethod
    def chain(cls, k: int) -> "Poset":
        return cls([((1 << k) - 1) & ~((1 << i) - 1) for i in range(k)])

    @classmethod
    def antichain(cls, k: int) -> "Poset":
        return cls([1 << i for i in range(k)])

    def _validate(self) -> None:
        n = len(self.up)
        for i, mask in enumerate(self.up):
            if not mask >> i & 1:
                raise PosetError(f"relation not reflexive at element {i}")
            if mask >> n:
                raise PosetError(f"up-set of element {i} mentions elements beyond {n - 1}")
            for j in _bits(mask & ~(1 << i)):
                if self.up[j] >> i & 1:
                    raise PosetError(f"relation not antisymmetric: {i} <= {j} <= {i}")
                if self.up[j] & ~mask:
                    raise PosetError(f"relation not transitive through {i} <= {j}")

    def __len__(self) -> int:
        return len(self.up)

    def __repr__(self) -> str:
        return f"<Poset: {len(self)} elements>"

    def leq(self, i: int, j: int) -> bool:
        return bool(self.up[i] >> j & 1)

    def comparable(self, i: int, j: int) -> bool:
        return self.leq(i, j) or self.leq(j, i)

    @cached_property
    def down(self) -> tuple[int, ...]:
        down = [0] * len(self.up)
        for i, mask in enumerate(self.up):
            for j in _bits(mask):
                down[j] |= 1 << i
        return tuple(down)

    @cached_property
    def comparability(self) -> tuple[int, ...]:
        """Strict comparability masks (an element is not marked against itself)."""
        return tuple((u | d) & ~(1 << i) for i, (u, d) in enumerate(zip(self.up, self.down)))

    @cached_property
    def covers(self) -> tuple[int, ...]:
        """``covers[i]``: elements ``j`` with ``i < j`` and nothing strictly between."""
        out = []
        for i, mask in enumerate(self.up):
            strict = mask & ~(1 << i)
            above = 0
            for j in _bits(strict):
                above |= self.up[j] & ~(1 << j)
            out.append(strict & ~above)
        return tuple(out)

    def minimal_elements(self) -> list[int]:
        return [i for i, d in enumerate(self.down) if d == 1 << i]

    def maximal_elements(self) -> list[int]:
        return [i for i, u in enumerate(self.up) if u == 1 << i]

    @cached_property
    def heights(self) -> tuple[int, ...]:
        """Length of the longest chain ending at each element (minimal elements: 0)."""
        order = sorted(range(len(self)), key=lambda i: self.down[i].bit_count())
        height = [0] * len(self)
        for i in order:
            for j in _bits(self.down[i] & ~(1 << i)):
                height[i] = max(height[i], height[j] + 1)
        return tuple(height)

    def maximal_chains(self) -> Iterator[tuple[int, ...]]:
        """Maximal chains, each listed bottom to top."""
        covers = self.covers

        def walk(chain: list[int]) -> Iterator[tuple[int, ...]]:
            nxt = covers[chain[-1]]
            if not nxt:
                yield tuple(chain)
                return
            for j in _bits(nxt):
                chain.append(j)
                yield from walk(chain)
                chain.pop()

        for m in self.minimal_elements():
            yield from walk([m])

    def subposet(self, elements: Sequence[int]) -> "Poset":
        index = {e: k for k, e in enumerate(elements)}
        up = []
        for e in elements:
            mask = 0
            for j in _bits(self.up[e]):
                if j in index:
                    mask |= 1 << index[j]
            up.append(mask)
        return Poset(up, [self.labels[e] for e in elements], validate=False)


# -- simplicial complexes -----------------------------------------------------


@dataclass(frozen=True, eq=False)
class SimplicialComplex:
    """Abstract simplicial complex with labeled vertices.

    ``simplices[k]`` lists the k-simplices as strictly increasing tuples of
    vertex indices, in lexicographic order.  ``simplices[0]`` is
    ``((0,), (1,), ...)``.
    """

    labels: tuple
    simplices: tuple = field(default_factory=tuple)

    @classmethod
    def from_facets(cls, labels: Sequence[Hashable], facets: Sequence[Sequence[int]]) -> "SimplicialComplex":
        by_dim: dict[int, set[tuple[int, ...]]] = {}
        for facet in facets:
            facet = tuple(sorted(set(facet)))
            for k in range(1, len(facet) + 1):
                by_dim.setdefault(k - 1, set()).update(itertools.combinations(facet, k))
        by_dim.setdefault(0, set()).update((v,) for v in range(len(labels)))
        top = max(by_dim) if by_dim else -1
        simplices = tuple(tuple(sorted(by_dim.get(k, ()))) for k in range(top + 1))
        if not labels:
            simplices = ()
        c = cls(tuple(labels), simplices)
        c.validate()
        return c

    @property
    def dimension(self) -> int:
        return len(self.simplices) - 1

    @property
    def vertex_count(self) -> int:
        return len(self.labels)

    def f_vector(self) -> list[int]:
        return [len(s) for s in self.simplices]

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * len(s) for k, s in enumerate(self.simplices))

    def count(self, k: int) -> int:
        return len(self.simplices[k]) if 0 <= k < len(self.simplices) else 0

    def simplices_of(self, k: int) -> tuple:
        return self.simplices[k] if 0 <= k < len(self.simplices) else ()

    @cached_property
    def index(self) -> tuple[dict, ...]:
        """Per dimension, simplex tuple -> rank."""
        return tuple({s: r for r, s in enumerate(level)} for level in self.simplices)

    def rank_of(self, simplex: Sequence[int]) -> int:
        s = tuple(simplex)
        return self.index[len(s) - 1][s]

    def __contains__(self, simplex) -> bool:
        s = tuple(simplex)
        return 0 < len(s) <= len(self.index) and s in self.index[len(s) - 1]

    def validate(self) -> None:
        n = self.vertex_count
        if n == 0:
            if self.simplices:
                raise ComplexError("complex without vertices has simplices")
            return
        if tuple(self.simplices[0]) != tuple((v,) for v in range(n)):
            raise ComplexError("0-simplices must be (0,), (1,), ... one per label")
        for k, level in enumerate(self.simplices):
            if not level:
                raise ComplexError(f"empty simplex list in dimension {k}")
            if list(level) != sorted(set(level)):
                raise ComplexError(f"{k}-simplices not sorted or not unique")
            for s in level:
                if len(s) != k + 1 or any(a >= b for a, b in zip(s, s[1:])) or s[-1] >= n or s[0] < 0:
                    raise ComplexError(f"bad {k}-simplex {s}")
                if k:
                    for face in itertools.combinations(s, k):
                        if face not in self.index[k - 1]:
                            raise ComplexError(f"face {face} of {s} missing")

    def full_subcomplex(self, vertices: Sequence[int] | set[int]) -> list[list[tuple[int, ...]]]:
        """Simplices (in this complex's indexing) spanned by ``vertices``, per dimension."""
        keep = set(vertices)
        return [[s for s in level if all(v in keep for v in s)] for level in self.simplices]

    def __repr__(self) -> str:
        return f"<SimplicialComplex: f-vector {self.f_vector()}>"


@dataclass(frozen=True)
class ComplexInvolution:
    """A simplicial, self-inverse vertex permutation of a complex."""

    perm: tuple[int, ...]

    def __call__(self, v: int) -> int:
        return self.perm[v]

    def image(self, simplex: Sequence[int]) -> tuple[int, ...]:
        return tuple(sorted(self.perm[v] for v in simplex))

    def validate(self, c: SimplicialComplex) -> None:
        if sorted(self.perm) != list(range(c.vertex_count)):
            raise ComplexError("involution is not a permutation of the vertices")
        if any(self.perm[self.perm[v]] != v for v in range(c.vertex_count)):
            raise ComplexError("involution does not square to the identity")
        for level in c.simplices[1:]:
            for s in level:
                if self.image(s) not in c:
                    raise ComplexError(f"involution maps simplex {s} outside the complex")


def order_complex(p: Poset, limit: int | None = None) -> SimplicialComplex:
    """Simplicial complex of chains of ``p``; vertex ``i`` is element ``i``.

    With ``limit`` set, enumeration stops with :class:`GuardExceeded` once
    more than ``limit`` simplices have been produced.
    """
    n = len(p)
    if n == 0:
        return SimplicialComplex((), ())
    comp = p.comparability
    levels: list[list[tuple[int, ...]]] = []
    produced = [0]

    def extend(chain: list[int], candidates: int) -> None:
        if limit is not None:
            produced[0] += 1
            if produced[0] > limit:
                raise GuardExceeded(f"order complex has more than {limit} simplices")
        depth = len(chain)
        if depth > len(levels):
            levels.append([])
        levels[depth - 1].append(tuple(chain))
        while candidates:
            low = candidates & -candidates
            j = low.bit_length() - 1
            candidates ^= low
            chain.append(j)
            extend(chain, candidates & comp[j])
            chain.pop()

    for i in range(n):
        extend([i], comp[i] & ~((2 << i) - 1))
    return SimplicialComplex(tuple(p.labels), tuple(tuple(level) for level in levels))


def face_poset(c: SimplicialComplex) -> Poset:
    """Nonempty simplices of ``c`` ordered by inclusion (dimension-major order)."""
    offsets = list(itertools.accumulate((len(level) for level in c.simplices), initial=0))
    up = [0] * offsets[-1]
    for k in range(c.dimension, -1, -1):
        base = offsets[k]
        for r in range(len(c.simplices[k])):
            up[base + r] |= 1 << (base + r)
        if k == 0:
            continue
        lower = c.index[k - 1]
        for r, s in enumerate(c.simplices[k]):
            mask = up[base + r]
            for face in itertools.combinations(s, k):
                up[offsets[k - 1] + lower[face]] |= mask
    labels = [s for level in c.simplices for s in level]
    return Poset(up, labels, validate=False)


def barycentric_subdivide(c: SimplicialComplex) -> SimplicialComplex:
    """``order_complex(face_poset(c))``; vertex labels are the simplices of ``c``."""
    return order_complex(face_poset(c))


def subdivide_with_involution(
    c: SimplicialComplex, t: ComplexInvolution
) -> tuple[SimplicialComplex, ComplexInvolution]:
    """Barycentric subdivision together with the induced involution."""
    sub = barycentric_subdivide(c)
    where = {s: i for i, s in enumerate(sub.labels)}
    return sub, ComplexInvolution(tuple(where[t.image(s)] for s in sub.labels))


def interval_poset(p: Poset) -> Poset:
    """Pairs ``(a, b)`` with ``a <= b``; ``(a,b) <= (a',b')`` iff ``a <= a'`` and ``b >= b'``.

    Labels are index pairs into ``p``.
    """
    pairs = [(a, b) for a in range(len(p)) for b in _bits(p.up[a])]
    index = {pair: k for k, pair in enumerate(pairs)}
    up = []
    for a, b in pairs:
        mask = 0
        for a2 in _bits(p.up[a]):
            for b2 in _bits(p.down[b] & p.up[a2]):
                mask |= 1 << index[(a2, b2)]
        up.append(mask)
    return Poset(up, pairs, validate=False)


def _iso_invariants(p: Poset) -> list[tuple[int, int, int, int, int]]:
    return [
        (
            p.up[i].bit_count(),
            p.down[i].bit_count(),
            p.heights[i],
            p.covers[i].bit_count(),
            sum(1 for j in range(len(p)) if p.covers[j] >> i & 1),
        )
        for i in range(len(p))
    ]


def poset_isomorphic(p: Poset, q: Poset, guard: int = 2000) -> tuple[bool, tuple[int, ...] | None]:
    """Decide order isomorphism by backtracking; returns ``(found, witness)``.

    ``witness[i]`` is the image of element ``i`` of ``p``.
    """
    if max(len(p), len(q)) > guard:
        raise GuardExceeded(f"poset_isomorphic guard: {max(len(p), len(q))} elements > {guard}")
    if len(p) != len(q):
        return False, None
    inv_p, inv_q = _iso_invariants(p), _iso_invariants(q)
    if sorted(inv_p) != sorted(inv_q):
        return False, None
    n = len(p)
    # visit elements so that each one is comparable to an earlier one where possible
    order: list[int] = []
    seen: set[int] = set()
    for start in sorted(range(n), key=lambda i: (inv_p[i][2], i)):
        if start in seen:
            continue
        seen.add(start)
        queue = [start]
        while queue:
            u = queue.pop(0)
            order.append(u)
            for w in _bits(p.comparability[u]):
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
    by_invariant: dict[tuple, list[int]] = {}
    for j, inv in enumerate(inv_q):
        by_invariant.setdefault(inv, []).append(j)

    image = [-1] * n
    used = 0

    def consistent(i: int, j: int) -> bool:
        for k in order:
            fk = image[k]
            if fk < 0:
                break
            if p.leq(i, k) != q.leq(j, fk) or p.leq(k, i) != q.leq(fk, j):
                return False
        return True

    def search(depth: int) -> bool:
        nonlocal used
        if depth == n:
            return True
        i = order[depth]
        for j in by_invariant[inv_p[i]]:
            if used >> j & 1 or not consistent(i, j):
                continue
            image[i] = j
            used |= 1 << j
            if search(depth + 1):
                return True
            image[i] = -1
            used &= ~(1 << j)
        return False

    if not search(0):
        return False, None
    witness = tuple(image)
    for a in range(n):
        for b in range(n):
            if p.leq(a, b) != q.leq(witness[a], witness[b]):
                raise AssertionError("isomorphism witness failed validation")
    return True, witness


@dataclass(frozen=True)
class Quotient:
    complex: SimplicialComplex
    projection: tuple[int, ...]
    representatives: tuple[int, ...]


def quotient_by_involution(c: SimplicialComplex, t: ComplexInvolution) -> Quotient:
    """Quotient of ``c`` by a free simplicial involution.

    Quotient vertices are orbits, numbered by their smaller member, which is
    also the default representative.  Raises :class:`InvolutionNotFree` for a
    fixed vertex and :class:`QuotientNotSimplicial` when the orbit images of
    simplices are not a simplicial complex that ``c`` double covers.
    """
    n = c.vertex_count
    if len(t.perm) != n:
        raise ComplexError("involution size does not match the complex")
    fixed = [v for v in range(n) if t.perm[v] == v]
    if fixed:
        raise InvolutionNotFree(f"involution not free: vertex {fixed[0]} is fixed")
    reps = tuple(v for v in range(n) if v < t.perm[v])
    orbit = {v: k for k, v in enumerate(reps)}
    projection = tuple(orbit[min(v, t.perm[v])] for v in range(n))
    levels = []
    for level in c.simplices:
        images: dict[tuple[int, ...], tuple[int, ...]] = {}
        for s in level:
            img = tuple(sorted(projection[v] for v in s))
            if len(set(img)) < len(img):
                raise QuotientNotSimplicial(
                    f"quotient not simplicial; subdivide first: simplex {s} contains an orbit pair"
                )
            other = images.setdefault(img, s)
            if other is not s and other != t.image(s):
                raise QuotientNotSimplicial(
                    f"quotient not simplicial; subdivide first: simplices {other} and {s} share image {img}"
                )
        levels.append(tuple(sorted(images)))
    quotient = SimplicialComplex(tuple(c.labels[v] for v in reps), tuple(levels))
    return Quotient(quotient, projection, reps)


# -- files --------------------------------------------------------------------


def label_to_json(label: Any) -> Any:
    if isinstance(label, (frozenset, set)):
        return sorted(label_to_json(x) for x in label)
    if isinstance(label, (tuple, list)):
        return [label_to_json(x) for x in label]
    return label


def label_from_json(value: Any) -> Any:
    if isinstance(value, list):
        return tuple(label_from_json(x) for x in value)
    return value


def complex_to_dict(c: SimplicialComplex, t: ComplexInvolution | None = None) -> dict:
    doc: dict[str, Any] = {
        "format": COMPLEX_FORMAT,
        "version": COMPLEX_FORMAT_VERSION,
        "labels": [label_to_json(x) for x in c.labels],
        "simplices": {str(k): [list(s) for s in level] for k, level in enumerate(c.simplices)},
    }
    if t is not None:
        doc["involution"] = involution_to_dict(t)
    return doc


def involution_to_dict(t: ComplexInvolution) -> dict:
    return {"perm": list(t.perm)}


def complex_from_dict(doc: dict) -> tuple[SimplicialComplex, ComplexInvolution | None]:
    version = doc.get("version", COMPLEX_FORMAT_VERSION)
    if version != COMPLEX_FORMAT_VERSION:
        raise ComplexError(f"unsupported complex file version {version}")
    try:
        labels = tuple(label_from_json(x) for x in doc["labels"])
        raw = doc["simplices"]
        dims = sorted(int(k) for k in raw)
    except (KeyError, TypeError, ValueError) as exc:
        raise ComplexError(f"malformed complex document: {exc}") from None
    if dims != list(range(len(dims))):
        raise ComplexError(f"simplex dimensions must be 0..k without gaps, got {dims}")
    simplices = tuple(tuple(tuple(s) for s in raw[str(k)]) for k in dims)
    c = SimplicialComplex(labels, simplices)
    c.validate()
    t = None
    if "involution" in doc:
        t = ComplexInvolution(tuple(doc["involution"]["perm"]))
        t.validate(c)
    return c, t


def write_complex(path: str | Path, c: SimplicialComplex, t: ComplexInvolution | None = None) -> None:
    Path(path).write_text(json.dumps(complex_to_dict(c, t), sort_keys=True) + "\n")


def read_complex(path: str | Path) -> tuple[SimplicialComplex, ComplexInvolution | None]:
    return complex_from_dict(json.loads(Path(path).read_text()))
