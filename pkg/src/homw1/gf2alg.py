"""Linear algebra over GF(2) for simplicial chains and cochains.

Vectors are Python ints used as bitsets: bit ``i`` is the coefficient of
basis element ``i``.  XOR is addition, and elimination pivots on the highest
set bit of each column, processing columns in index order (the same
left-to-right scheme used for persistence reductions).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .posets import SimplicialComplex


class NotACycle(ValueError):
    pass


class NonSimplicialMap(ValueError):
    def __init__(self, message: str, simplex: tuple[int, ...]):
        super().__init__(message)
        self.simplex = simplex


def to_bits(indices: Iterable[int]) -> int:
    out = 0
    for i in indices:
        out ^= 1 << i
    return out


def from_bits(bits: int) -> list[int]:
    out = []
    while bits:
        low = bits & -bits
        out.append(low.bit_length() - 1)
        bits ^= low
    return out


class PivotTable:
    """Column echelon form over bit-packed int columns.

    Every stored column has a distinct highest set bit (its pivot row).
    """

    def __init__(self, columns: Iterable = ()):
        self.pivots: dict[int, int] = {}
        for col in columns:
            self.add(col)

    def reduce(self, vec: int) -> int:
        pivots = self.pivots
        while vec:
            top = vec.bit_length() - 1
            col = pivots.get(top)
            if col is None:
                return vec
            vec ^= col
        return 0

    def add(self, col) -> bool:
        """Insert a column (bitset or index iterable); False when already in the span."""
        vec = self.reduce(col if isinstance(col, int) else to_bits(col))
        if vec:
            self.pivots[vec.bit_length() - 1] = vec
            return True
        return False

    def contains(self, bits: int) -> bool:
        return self.reduce(bits) == 0

    def copy(self) -> "PivotTable":
        other = PivotTable()
        other.pivots = dict(self.pivots)
        return other

    @property
    def rank(self) -> int:
        return len(self.pivots)


class SparsePivotTable:
    """Column echelon form over columns stored as sets of row indices.

    Used when rows are too many for dense bit-packed columns.
    """

    def __init__(self, columns: Iterable = ()):
        self.pivots: dict[int, set[int]] = {}
        for col in columns:
            self.add(col)

    def _reduce_set(self, vec: set[int]) -> set[int]:
        pivots = self.pivots
        while vec:
            col = pivots.get(max(vec))
            if col is None:
                return vec
            vec ^= col
        return vec

    def add(self, col) -> bool:
        vec = set(from_bits(col)) if isinstance(col, int) else set(col)
        vec = self._reduce_set(vec)
        if vec:
            self.pivots[max(vec)] = vec
            return True
        return False

    def contains(self, bits: int) -> bool:
        return not self._reduce_set(set(from_bits(bits)))

    def copy(self) -> "SparsePivotTable":
        other = SparsePivotTable()
        other.pivots = dict(self.pivots)
        return other

    @property
    def rank(self) -> int:
        return len(self.pivots)


# rows above this use SparsePivotTable
BITSET_ROW_LIMIT = 1 << 14


def pivot_table(row_count: int, columns: Iterable = ()):
    table = PivotTable() if row_count <= BITSET_ROW_LIMIT else SparsePivotTable()
    for col in columns:
        table.add(col)
    return table


def bits_to_array(bits: int, length: int) -> np.ndarray:
    raw = np.frombuffer(bits.to_bytes((length + 7) // 8, "little"), dtype=np.uint8)
    return np.unpackbits(raw, bitorder="little")[:length].astype(bool)


def array_to_bits(arr: np.ndarray) -> int:
    return int.from_bytes(np.packbits(np.asarray(arr, dtype=bool), bitorder="little").tobytes(), "little")


def dense_rank(columns: Sequence[int], row_count: int) -> int:
    """Rank by dense elimination on packed 64-bit words (numpy)."""
    if not columns or row_count == 0:
        return 0
    words = (row_count + 63) // 64
    m = np.zeros((len(columns), words), dtype=np.uint64)
    for j, col in enumerate(columns):
        for w in range(words):
            m[j, w] = (col >> (64 * w)) & 0xFFFFFFFFFFFFFFFF
    rank = 0
    for bit in range(row_count):
        w, b = divmod(bit, 64)
        mask = np.uint64(1) << np.uint64(b)
        hits = np.nonzero(m[rank:, w] & mask)[0]
        if hits.size == 0:
            continue
        pivot = rank + hits[0]
        if pivot != rank:
            m[[rank, pivot]] = m[[pivot, rank]]
        below = rank + 1 + np.nonzero(m[rank + 1 :, w] & mask)[0]
        m[below] ^= m[rank]
        rank += 1
        if rank == len(columns):
            break
    return rank


@dataclass(frozen=True)
class GF2Matrix:
    """Sparse matrix over GF(2) stored by columns of sorted row indices."""

    row_count: int
    col_count: int
    columns: tuple = field(repr=False)

    def __post_init__(self) -> None:
        if len(self.columns) != self.col_count:
            raise ValueError(f"{len(self.columns)} columns given for col_count={self.col_count}")
        for col in self.columns:
            if any(a >= b for a, b in zip(col, col[1:])) or (col and (col[0] < 0 or col[-1] >= self.row_count)):
                raise ValueError(f"column {col} not strictly increasing within 0..{self.row_count - 1}")

    @classmethod
    def from_bit_columns(cls, row_count: int, columns: Sequence[int]) -> "GF2Matrix":
        return cls(row_count, len(columns), tuple(tuple(from_bits(c)) for c in columns))

    def bit_columns(self) -> list[int]:
        return [to_bits(col) for col in self.columns]

    def transpose_bit_columns(self) -> list[int]:
        """Rows of this matrix as bitsets over column indices."""
        rows = [0] * self.row_count
        for j, col in enumerate(self.columns):
            bit = 1 << j
            for i in col:
                rows[i] |= bit
        return rows

    def transpose(self) -> "GF2Matrix":
        return GF2Matrix.from_bit_columns(self.col_count, self.transpose_bit_columns())

    def apply(self, vec: int) -> int:
        out = 0
        for j in from_bits(vec):
            out ^= to_bits(self.columns[j])
        return out

    def rank(self, method: str = "sparse") -> int:
        if method == "sparse":
            return pivot_table(self.row_count, self.columns).rank
        if method == "dense":
            return dense_rank(self.bit_columns(), self.row_count)
        raise ValueError(f"unknown rank method {method!r}")

    def dump(self) -> str:
        """Debug text: ``rows cols`` header, then one line of set-bit indices per column."""
        lines = [f"{self.row_count} {self.col_count}"]
        lines.extend(" ".join(map(str, col)) for col in self.columns)
        return "\n".join(lines) + "\n"

    @classmethod
    def parse_dump(cls, text: str) -> "GF2Matrix":
        lines = text.splitlines()
        rows, cols = map(int, lines[0].split())
        body = lines[1 : 1 + cols] + [""] * (cols - len(lines[1:]))
        return cls(rows, cols, tuple(tuple(map(int, line.split())) for line in body))


@dataclass(frozen=True)
class Cochain:
    """A ``dim``-cochain as a bitset over the ``dim``-simplices."""

    dim: int
    bits: int
    length: int

    def __post_init__(self) -> None:
        if self.bits < 0 or self.bits >> self.length:
            raise ValueError(f"cochain bits exceed length {self.length}")

    def __add__(self, other: "Cochain") -> "Cochain":
        if (self.dim, self.length) != (other.dim, other.length):
            raise ValueError("adding cochains of different shape")
        return Cochain(self.dim, self.bits ^ other.bits, self.length)

    def __getitem__(self, i: int) -> int:
        return self.bits >> i & 1

    def is_zero(self) -> bool:
        return self.bits == 0

    def support(self) -> list[int]:
        return from_bits(self.bits)

    @classmethod
    def zero(cls, c: SimplicialComplex, dim: int) -> "Cochain":
        return cls(dim, 0, c.count(dim))

    @classmethod
    def unit(cls, c: SimplicialComplex) -> "Cochain":
        """The 0-cochain that is 1 on every vertex."""
        return cls(0, (1 << c.count(0)) - 1, c.count(0))


class GF2ChainComplex:
    """Mod-2 simplicial chain complex of a :class:`SimplicialComplex`.

    ``faces(k)`` holds, for each k-simplex, the ranks of its (k-1)-faces in
    increasing order; ``boundary(k)`` exposes the same data as a
    :class:`GF2Matrix`.  Echelon forms of boundary and coboundary operators
    are computed on demand and cached, with clearing between dimensions.
    """

    def __init__(self, c: SimplicialComplex):
        self.complex = c
        self.counts = c.f_vector()
        self._faces: dict[int, np.ndarray] = {}
        self._image_tables: dict[int, object] = {}
        self._coimage_tables: dict[int, object] = {}

    @property
    def dimension(self) -> int:
        return len(self.counts) - 1

    def count(self, k: int) -> int:
        return self.counts[k] if 0 <= k < len(self.counts) else 0

    def faces(self, k: int) -> np.ndarray:
        if k < 1:
            raise ValueError("faces are defined for k >= 1")
        if k not in self._faces:
            n = self.count(k)
            if n == 0:
                return np.zeros((0, k + 1), dtype=np.int64)
            lower = self.complex.index[k - 1]
            flat = [lower[f] for s in self.complex.simplices[k] for f in itertools.combinations(s, k)]
            self._faces[k] = np.asarray(flat, dtype=np.int64).reshape(n, k + 1)
        return self._faces[k]

    def boundary(self, k: int) -> GF2Matrix:
        cols = tuple(tuple(row) for row in self.faces(k).tolist()) if k >= 1 else ((),) * self.count(k)
        return GF2Matrix(self.count(k - 1), self.count(k), cols)

    def cofaces(self, k: int) -> list[list[int]]:
        """For each k-simplex, the ranks of the (k+1)-simplices containing it."""
        out: list[list[int]] = [[] for _ in range(self.count(k))]
        if k + 1 > self.dimension:
            return out
        for j, row in enumerate(self.faces(k + 1).tolist()):
            for i in row:
                out[i].append(j)
        return out

    def boundary_of(self, k: int, chain: int) -> int:
        if k < 1 or not chain:
            return 0
        selected = np.flatnonzero(bits_to_array(chain, self.count(k)))
        parity = np.bincount(self.faces(k)[selected].ravel(), minlength=self.count(k - 1)) & 1
        return array_to_bits(parity)

    def coboundary(self, alpha: Cochain) -> Cochain:
        k = alpha.dim
        n_up = self.count(k + 1)
        if n_up == 0 or not alpha.bits:
            return Cochain(k + 1, 0, n_up)
        values = bits_to_array(alpha.bits, self.count(k))
        parity = values[self.faces(k + 1)].sum(axis=1) & 1
        return Cochain(k + 1, array_to_bits(parity), n_up)

    def image_table(self, k: int):
        """Echelon form of ``im(d_{k+1}) ⊆ C_k``.

        Columns of ``d_{k+1}`` whose index is a pivot row of ``d_{k+2}``
        reduce to zero and are skipped.
        """
        if k not in self._image_tables:
            cleared = self.image_table(k + 1).pivots if k + 2 <= self.dimension else {}
            table = pivot_table(self.count(k))
            for j, row in enumerate(self.faces(k + 1).tolist()):
                if j not in cleared:
                    table.add(row)
            self._image_tables[k] = table
        return self._image_tables[k]

    def coimage_table(self, k: int):
        """Echelon form of ``im(delta_{k-1}) ⊆ C^k``, cleared by ``delta_{k-2}``."""
        if k not in self._coimage_tables:
            cleared = self.coimage_table(k - 1).pivots if k >= 2 else {}
            table = pivot_table(self.count(k))
            if k >= 1:
                for j, col in enumerate(self.cofaces(k - 1)):
                    if j not in cleared and col:
                        table.add(col)
            self._coimage_tables[k] = table
        return self._coimage_tables[k]

    def boundary_rank(self, k: int) -> int:
        if k < 1 or k > self.dimension:
            return 0
        return self.image_table(k - 1).rank

    def verify(self) -> None:
        """Raise unless ``d_k d_{k+1} = 0`` for every k."""
        for k in range(1, self.dimension):
            upper = self.faces(k + 1)
            if not len(upper):
                continue
            second = np.sort(self.faces(k)[upper].reshape(len(upper), -1), axis=1)
            bad = np.flatnonzero((second[:, 0::2] != second[:, 1::2]).any(axis=1))
            if bad.size:
                raise AssertionError(f"d{k} d{k + 1} != 0 on {k + 1}-simplex {int(bad[0])}")


def boundary_matrices(c: SimplicialComplex) -> GF2ChainComplex:
    return GF2ChainComplex(c)


def betti(cc: GF2ChainComplex) -> list[int]:
    """Mod-2 Betti numbers ``b_0 .. b_dim``."""
    ranks = [cc.boundary_rank(k) for k in range(cc.dimension + 2)]
    return [cc.count(k) - ranks[k] - ranks[k + 1] for k in range(cc.dimension + 1)]


def _as_bits(z) -> int:
    if isinstance(z, int):
        return z
    if isinstance(z, Cochain):
        return z.bits
    return to_bits(z)


def is_boundary(cc: GF2ChainComplex, k: int, z) -> bool:
    """Whether the k-cycle ``z`` (bitset or index list) lies in ``im d_{k+1}``."""
    bits = _as_bits(z)
    if k >= 1 and cc.boundary_of(k, bits):
        raise NotACycle(f"chain is not a {k}-cycle")
    if not bits:
        return True
    if k >= cc.dimension:
        return False
    return cc.image_table(k).contains(bits)


def is_coboundary(cc: GF2ChainComplex, alpha: Cochain) -> bool:
    """Whether the cocycle ``alpha`` lies in ``im delta_{k-1}``."""
    if not cc.coboundary(alpha).is_zero():
        raise NotACycle(f"cochain is not a {alpha.dim}-cocycle")
    if alpha.is_zero():
        return True
    if alpha.dim == 0:
        return False
    return cc.coimage_table(alpha.dim).contains(alpha.bits)


def cup_product(
    c: SimplicialComplex, alpha: Cochain, beta: Cochain, vertex_order: Sequence[int] | None = None
) -> Cochain:
    """Front-face / back-face cup product.

    Each simplex is read with its vertices sorted by ``vertex_order``
    (``vertex_order[v]`` is the position of vertex ``v``; default: index
    order).
    """
    p, q = alpha.dim, beta.dim
    dim = p + q
    level = c.simplices_of(dim)
    if not level or alpha.is_zero() or beta.is_zero():
        return Cochain(dim, 0, len(level))
    front_index = c.index[p]
    back_index = c.index[q]
    a, b = alpha.bits, beta.bits
    out = 0
    for j, s in enumerate(level):
        if vertex_order is not None:
            s = sorted(s, key=vertex_order.__getitem__)
            front, back = tuple(sorted(s[: p + 1])), tuple(sorted(s[p:]))
        else:
            front, back = s[: p + 1], s[p:]
        if a >> front_index[front] & 1 and b >> back_index[back] & 1:
            out |= 1 << j
    return Cochain(dim, out, len(level))


def pushforward_cycle(
    source: SimplicialComplex, target: SimplicialComplex, vertex_map: Sequence[int], k: int, z
) -> int:
    """Image of a k-chain under a simplicial vertex map; degenerate simplices go to 0."""
    bits = _as_bits(z)
    src = source.simplices_of(k)
    index = target.index[k] if k < len(target.index) else {}
    out = 0
    for j in from_bits(bits):
        image = tuple(sorted({vertex_map[v] for v in src[j]}))
        if len(image) < k + 1:
            if image not in target:
                raise NonSimplicialMap(f"simplex {src[j]} maps to non-simplex {image}", src[j])
            continue
        rank = index.get(image)
        if rank is None:
            raise NonSimplicialMap(f"simplex {src[j]} maps to non-simplex {image}", src[j])
        out ^= 1 << rank
    return out


def fundamental_cycle(c: SimplicialComplex, simplices: Iterable[Sequence[int]], k: int) -> int:
    """Sum of the given k-simplices of ``c`` as a bitset."""
    index = c.index[k]
    return to_bits(index[tuple(s)] for s in simplices)
