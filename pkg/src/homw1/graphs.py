"""Simple graphs, standard generators and brute-force homomorphism oracles.

Vertices are dense integer indices ``0 .. vertex_count - 1``.  The cycle
generator labels ``cycle(s)`` so that vertex ``i`` is adjacent to
``i - 1`` and ``i + 1`` modulo ``s``; the flip automorphism relies on that.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence


class GraphError(ValueError):
    """Invalid graph construction parameters or malformed graph input."""


class GuardExceeded(RuntimeError):
    """A brute-force computation refused to run because of its size guard."""


@dataclass(frozen=True)
class Graph:
    vertex_count: int
    edges: frozenset = field(default_factory=frozenset)
    name: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        if self.vertex_count < 0:
            raise GraphError(f"negative vertex count {self.vertex_count}")
        normalized = set()
        for edge in self.edges:
            u, v = edge
            if u == v:
                raise GraphError(f"loop at vertex {u}")
            if not (0 <= u < self.vertex_count and 0 <= v < self.vertex_count):
                raise GraphError(f"edge {edge} has an endpoint outside 0..{self.vertex_count - 1}")
            normalized.add((min(u, v), max(u, v)))
        object.__setattr__(self, "edges", frozenset(normalized))

    @classmethod
    def from_edges(cls, vertex_count: int, edges: Iterable[Sequence[int]], name: str = "") -> "Graph":
        return cls(vertex_count, frozenset(tuple(e) for e in edges), name)

    @cached_property
    def neighbor_masks(self) -> tuple[int, ...]:
        """Adjacency as one bitmask per vertex."""
        masks = [0] * self.vertex_count
        for u, v in self.edges:
            masks[u] |= 1 << v
            masks[v] |= 1 << u
        return tuple(masks)

    def neighbors(self, v: int) -> list[int]:
        mask = self.neighbor_masks[v]
        return [u for u in range(self.vertex_count) if mask >> u & 1]

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edges

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def is_bipartite(self) -> bool:
        side = [-1] * self.vertex_count
        for start in range(self.vertex_count):
            if side[start] >= 0:
                continue
            side[start] = 0
            stack = [start]
            while stack:
                u = stack.pop()
                for w in self.neighbors(u):
                    if side[w] < 0:
                        side[w] = 1 - side[u]
                        stack.append(w)
                    elif side[w] == side[u]:
                        return False
        return True

    def __repr__(self) -> str:
        label = self.name or "Graph"
        return f"<{label}: {self.vertex_count} vertices, {self.edge_count} edges>"


@dataclass(frozen=True)
class GraphAutomorphism:
    """A vertex permutation preserving the edge set of ``graph``."""

    graph: Graph
    perm: tuple[int, ...]
    involutive: bool = False

    def __post_init__(self) -> None:
        n = self.graph.vertex_count
        if sorted(self.perm) != list(range(n)):
            raise GraphError(f"{self.perm} is not a permutation of 0..{n - 1}")
        for u, v in self.graph.edges:
            if not self.graph.has_edge(self.perm[u], self.perm[v]):
                raise GraphError(f"edge {(u, v)} is not mapped to an edge")
        if self.involutive and any(self.perm[self.perm[i]] != i for i in range(n)):
            raise GraphError("automorphism flagged involutive does not square to the identity")

    def __call__(self, v: int) -> int:
        return self.perm[v]


# -- generators ---------------------------------------------------------------


def complete(m: int) -> Graph:
    if m < 1:
        raise GraphError(f"complete graph needs m >= 1, got {m}")
    return Graph.from_edges(m, itertools.combinations(range(m), 2), f"complete:{m}")


def cycle(s: int) -> Graph:
    if s < 3:
        raise GraphError(f"cycle needs s >= 3, got {s}")
    return Graph.from_edges(s, ((i, (i + 1) % s) for i in range(s)), f"cycle:{s}")


def path(s: int) -> Graph:
    """Path on ``s`` vertices ``0 - 1 - ... - (s-1)``."""
    if s < 1:
        raise GraphError(f"path needs s >= 1 vertices, got {s}")
    return Graph.from_edges(s, ((i, i + 1) for i in range(s - 1)), f"path:{s}")


def kneser(n: int, k: int) -> Graph:
    if k < 1 or n < 2 * k:
        raise GraphError(f"kneser graph needs n >= 2k >= 2, got n={n}, k={k}")
    subsets = list(itertools.combinations(range(n), k))
    edges = [
        (i, j)
        for i, j in itertools.combinations(range(len(subsets)), 2)
        if not set(subsets[i]) & set(subsets[j])
    ]
    return Graph.from_edges(len(subsets), edges, f"kneser:{n}:{k}")


def mycielski(g: Graph) -> Graph:
    """Mycielskian: copies ``u_i`` of each vertex plus an apex ``w``.

    Vertices ``0..n-1`` are the originals, ``n..2n-1`` the shadows and
    ``2n`` the apex.
    """
    n = g.vertex_count
    edges = list(g.edges)
    for u, v in g.edges:
        edges.append((u, n + v))
        edges.append((v, n + u))
    edges.extend((n + i, 2 * n) for i in range(n))
    return Graph.from_edges(2 * n + 1, edges, f"mycielski:{g.name}" if g.name else "")


def _parse_int(token: str, spec: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise GraphError(f"expected an integer in graph spec {spec!r}, got {token!r}") from None


def generate(spec: str) -> Graph:
    """Build a graph from a spec string such as ``"kneser:5:2"``.

    Accepted forms: ``complete:m``, ``cycle:s``, ``path:s``, ``kneser:n:k``
    and ``mycielski:<inner spec>``.
    """
    kind, _, rest = spec.strip().partition(":")
    args = rest.split(":") if rest else []
    if kind == "mycielski":
        if not rest:
            raise GraphError(f"mycielski needs an inner graph spec: {spec!r}")
        return mycielski(generate(rest))
    builders = {"complete": (complete, 1), "cycle": (cycle, 1), "path": (path, 1), "kneser": (kneser, 2)}
    if kind not in builders:
        raise GraphError(f"unknown graph kind {kind!r} in spec {spec!r}")
    builder, arity = builders[kind]
    if len(args) != arity:
        raise GraphError(f"{kind} takes {arity} parameter(s), got {len(args)} in {spec!r}")
    g = builder(*(_parse_int(a, spec) for a in args))
    return Graph(g.vertex_count, g.edges, spec.strip())


# -- automorphisms ------------------------------------------------------------


def flip_automorphism(g: Graph) -> GraphAutomorphism:
    """The involution ``v_i -> v_{2r-i}`` of an odd cycle ``cycle(2r+1)``.

    It flips the edge ``{v_0, v_2r}`` and fixes only ``v_r``.
    """
    s = g.vertex_count
    if s < 3 or s % 2 == 0:
        raise GraphError(f"flip automorphism needs an odd cycle, got {s} vertices")
    if g.edges != cycle(s).edges:
        raise GraphError("flip automorphism needs the standard labeling of cycle(2r+1)")
    return GraphAutomorphism(g, tuple((s - 1 - i) for i in range(s)), involutive=True)


def edge_swap(g: Graph) -> GraphAutomorphism:
    """The nontrivial automorphism of ``complete(2)``."""
    if g.vertex_count != 2 or g.edge_count != 1:
        raise GraphError("edge swap is defined on complete(2) only")
    return GraphAutomorphism(g, (1, 0), involutive=True)


def identity_automorphism(g: Graph) -> GraphAutomorphism:
    return GraphAutomorphism(g, tuple(range(g.vertex_count)), involutive=True)


# -- brute-force oracles ------------------------------------------------------


def _search_order(g: Graph) -> list[int]:
    """Vertex order where each vertex after the first of its component has an
    earlier neighbor when possible (BFS, highest degree first)."""
    seen: set[int] = set()
    order: list[int] = []
    for start in sorted(range(g.vertex_count), key=lambda v: -len(g.neighbors(v))):
        if start in seen:
            continue
        seen.add(start)
        queue = [start]
        while queue:
            u = queue.pop(0)
            order.append(u)
            for w in g.neighbors(u):
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
    return order


def _homomorphisms(g: Graph, h: Graph):
    order = _search_order(g)
    position = {v: i for i, v in enumerate(order)}
    earlier = [[w for w in g.neighbors(v) if position[w] < position[v]] for v in order]
    hmasks = h.neighbor_masks
    full = (1 << h.vertex_count) - 1
    assignment = [0] * g.vertex_count

    def extend(depth: int):
        if depth == len(order):
            yield tuple(assignment)
            return
        v = order[depth]
        allowed = full
        for w in earlier[depth]:
            allowed &= hmasks[assignment[w]]
        while allowed:
            low = allowed & -allowed
            assignment[v] = low.bit_length() - 1
            yield from extend(depth + 1)
            allowed ^= low

    yield from extend(0)


def count_homomorphisms(g: Graph, h: Graph) -> int:
    """Exact number of graph homomorphisms ``g -> h`` (backtracking)."""
    return sum(1 for _ in _homomorphisms(g, h))


def find_homomorphism(g: Graph, h: Graph) -> tuple[int, ...] | None:
    for hom in _homomorphisms(g, h):
        return hom
    return None


def find_coloring(g: Graph, m: int) -> tuple[int, ...] | None:
    """An ``m``-coloring of ``g`` as a homomorphism to ``complete(m)``, or None."""
    if g.vertex_count == 0:
        return ()
    if m < 1:
        return None
    return find_homomorphism(g, complete(m))


def chromatic_number(g: Graph, guard: int = 12) -> int:
    """Least ``m`` with a homomorphism ``g -> complete(m)``; 0 for the empty graph.

    Refuses (``GuardExceeded``) when ``g`` has more than ``guard`` vertices.
    """
    if g.vertex_count > guard:
        raise GuardExceeded(f"chromatic_number guard: {g.vertex_count} vertices > {guard}")
    if g.vertex_count == 0:
        return 0
    for m in range(1, g.vertex_count + 1):
        if find_coloring(g, m) is not None:
            return m
    raise AssertionError("unreachable: every graph is vertex_count-colorable")


# -- graph files --------------------------------------------------------------


def read_graph_file(path: str | Path) -> Graph:
    """Parse ``p <vertex_count>`` followed by one ``u v`` edge per line."""
    vertex_count = None
    edges = []
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if tokens[0] == "p":
            if vertex_count is not None or len(tokens) != 2:
                raise GraphError(f"{path}:{lineno}: bad header {raw!r}")
            vertex_count = _parse_int(tokens[1], raw)
        elif len(tokens) == 2:
            if vertex_count is None:
                raise GraphError(f"{path}:{lineno}: edge before 'p <vertex_count>' header")
            edges.append((_parse_int(tokens[0], raw), _parse_int(tokens[1], raw)))
        else:
            raise GraphError(f"{path}:{lineno}: cannot parse {raw!r}")
    if vertex_count is None:
        raise GraphError(f"{path}: missing 'p <vertex_count>' header")
    return Graph.from_edges(vertex_count, edges, Path(path).name)


def write_graph_file(g: Graph, path: str | Path) -> None:
    lines = [f"p {g.vertex_count}"] + [f"{u} {v}" for u, v in g.sorted_edges()]
    Path(path).write_text("\n".join(lines) + "\n")


def load_graph(spec_or_path: str) -> Graph:
    """Graph from a spec string, or from a file when the argument names one."""
    p = Path(spec_or_path)
    if p.is_file():
        return read_graph_file(p)
    return generate(spec_or_path)
