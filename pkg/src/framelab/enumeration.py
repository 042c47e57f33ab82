"""Enumeration of lines, subspaces, and splittings.

Lines (rank-1 summands) are stored by their unique canonical primitive
representative: the first nonzero coordinate is a canonical associate, so
equality of lines is equality of representatives.  Over infinite rings the
enumeration is truncated by a bound on the norm of every coordinate of the
canonical representative; norms are unit-invariant, so the truncated vertex
set does not depend on the choice of representative.

Subspaces of F_p^n are stored by their reduced row echelon basis, the unique
canonical basis, with plain integer entries mod p.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterator, Optional, Sequence

from .linalg import is_primitive
from .rings import RingElem, RingId


@dataclass(frozen=True)
class NormBound:
    """Truncation parameter: max coordinate norm of a line's representative."""

    value: int

    def __post_init__(self):
        if self.value < 1:
            raise ValueError("norm bound must be at least 1")


@dataclass(frozen=True)
class Line:
    """A rank-1 summand of R^n, held by its canonical primitive representative."""

    ring: RingId
    ambient_rank: int
    rep: tuple[RingElem, ...]

    @staticmethod
    def from_vector(vec: Sequence[RingElem]) -> "Line":
        vec = tuple(vec)
        if not vec:
            raise ValueError("empty vector")
        ring = vec[0].ring
        if not is_primitive(vec):
            raise ValueError(f"{vec} is not primitive")
        lead = next(x for x in vec if not x.is_zero())
        u = ring.canonical_unit(lead)
        return Line(ring, len(vec), tuple(u * x for x in vec))

    def key(self):
        return tuple(x.key() for x in self.rep)

    def __repr__(self) -> str:
        return "span(" + ", ".join(map(repr, self.rep)) + ")"


def standard_line(ring: RingId, n: int, i: int) -> Line:
    """The line spanned by the i-th standard basis vector (0-based)."""
    rep = tuple(ring.one() if j == i else ring.zero() for j in range(n))
    return Line(ring, n, rep)


def elements_of_norm_at_most(ring: RingId, bound: int) -> list[RingElem]:
    """All ring elements of norm <= bound, in a fixed order."""
    if ring.kind == "F":
        return [ring.elem(a) for a in range(ring.p)]
    out = []
    if ring.kind == "Z":
        out = [ring.elem(a) for a in range(-bound, bound + 1)]
    else:
        box = math.isqrt(bound) if ring.kind == "Z[i]" else math.isqrt(4 * bound // 3) + 1
        for a in range(-box, box + 1):
            for b in range(-box, box + 1):
                x = ring.elem(a, b)
                if x.norm() <= bound:
                    out.append(x)
    out.sort(key=lambda x: x.key())
    return out


def enumerate_lines(ring: RingId, n: int, bound: Optional[NormBound] = None) -> list[Line]:
    """All lines in R^n, truncated by `bound` when the ring is infinite."""
    if n < 1:
        return []
    if ring.is_finite:
        return _field_lines(ring, n)
    if bound is None:
        raise ValueError("a norm bound is required for an infinite ring")
    coords = elements_of_norm_at_most(ring, bound.value)
    seen: dict[tuple, Line] = {}
    for vec in product(coords, repeat=n):
        if all(x.is_zero() for x in vec):
            continue
        if not is_primitive(vec):
            continue
        line = Line.from_vector(vec)
        seen[line.key()] = line
    return [seen[k] for k in sorted(seen)]


def _field_lines(field: RingId, n: int) -> list[Line]:
    # Representatives with first nonzero coordinate 1, generated directly.
    p = field.p
    out = []
    for pivot in range(n):
        tail = n - pivot - 1
        for rest in product(range(p), repeat=tail):
            rep = (field.zero(),) * pivot + (field.one(),) + tuple(field.elem(v) for v in rest)
            out.append(Line(field, n, rep))
    out.sort(key=Line.key)
    return out


# -- subspaces over prime fields -----------------------------------------------


def _rref(field_p: int, rows: Sequence[Sequence[int]]) -> tuple[tuple[int, ...], ...]:
    """Reduced row echelon form over F_p; zero rows dropped."""
    p = field_p
    mat = [list(r) for r in rows]
    m = len(mat)
    n = len(mat[0]) if m else 0
    lead = 0
    for col in range(n):
        piv = next((i for i in range(lead, m) if mat[i][col] % p), None)
        if piv is None:
            continue
        mat[lead], mat[piv] = mat[piv], mat[lead]
        inv = pow(mat[lead][col], p - 2, p)
        mat[lead] = [(x * inv) % p for x in mat[lead]]
        for i in range(m):
            if i != lead and mat[i][col] % p:
                c = mat[i][col]
                mat[i] = [(x - c * y) % p for x, y in zip(mat[i], mat[lead])]
        lead += 1
        if lead == m:
            break
    return tuple(tuple(r) for r in mat[:lead] if any(r))


def _rank(field_p: int, rows: Sequence[Sequence[int]]) -> int:
    return len(_rref(field_p, rows)) if rows else 0


@dataclass(frozen=True)
class Subspace:
    """A subspace of F_p^n, held by its reduced row echelon basis."""

    field: RingId
    ambient_rank: int
    basis: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if not self.field.is_finite:
            raise ValueError("subspaces are supported over prime fields only")

    @staticmethod
    def from_vectors(field: RingId, n: int, rows: Sequence[Sequence[int]]) -> "Subspace":
        rows = [r for r in rows if any(v % field.p for v in r)]
        if not rows:
            return Subspace(field, n, ())
        return Subspace(field, n, _rref(field.p, rows))

    @property
    def rank(self) -> int:
        return len(self.basis)

    def contains_vector(self, vec: Sequence[int]) -> bool:
        if not any(v % self.field.p for v in vec):
            return True
        return _rank(self.field.p, list(self.basis) + [list(vec)]) == self.rank

    def contains(self, other: "Subspace") -> bool:
        return all(self.contains_vector(r) for r in other.basis)

    def sum(self, other: "Subspace") -> "Subspace":
        return Subspace.from_vectors(self.field, self.ambient_rank,
                                     list(self.basis) + list(other.basis))

    def meets_trivially(self, other: "Subspace") -> bool:
        return self.sum(other).rank == self.rank + other.rank

    def transform(self, mat_rows: Sequence[Sequence[int]]) -> "Subspace":
        """Image under the matrix acting on column vectors."""
        p = self.field.p
        n = self.ambient_rank
        new_rows = []
        for r in self.basis:
            new_rows.append([sum(mat_rows[i][k] * r[k] for k in range(n)) % p for i in range(n)])
        return Subspace.from_vectors(self.field, n, new_rows)

    def vectors(self) -> Iterator[tuple[int, ...]]:
        """All vectors of the subspace, including zero."""
        p = self.field.p
        n = self.ambient_rank
        for coeffs in product(range(p), repeat=self.rank):
            yield tuple(sum(c * row[j] for c, row in zip(coeffs, self.basis)) % p
                        for j in range(n))

    def lines(self) -> list[Line]:
        out = []
        for v in self.vectors():
            if any(v):
                lead = next(x for x in v if x)
                inv = pow(lead, self.field.p - 2, self.field.p)
                if all((x * inv) % self.field.p == x for x in v):  # already normalized
                    out.append(Line(self.field, self.ambient_rank,
                                    tuple(self.field.elem(x) for x in v)))
        out.sort(key=Line.key)
        return out

    def key(self):
        return (self.rank, self.basis)

    def __repr__(self) -> str:
        return f"Sub{list(map(list, self.basis))}"


def line_to_subspace(line: Line) -> Subspace:
    return Subspace.from_vectors(line.ring, line.ambient_rank, [[x.a for x in line.rep]])


def subspace_span_of_lines(field: RingId, n: int, lines: Sequence[Line]) -> Subspace:
    return Subspace.from_vectors(field, n, [[x.a for x in ln.rep] for ln in lines])


def enumerate_subspaces(field: RingId, n: int, rank: int) -> list[Subspace]:
    """All rank-r subspaces of F_p^n, one reduced echelon basis each."""
    if not field.is_finite:
        raise ValueError("subspace enumeration needs a prime field")
    if not 0 <= rank <= n:
        raise ValueError("rank out of range")
    if rank == 0:
        return [Subspace(field, n, ())]
    p = field.p
    out = []
    for pivots in combinations(range(n), rank):
        free = [(i, c) for i in range(rank) for c in range(pivots[i] + 1, n) if c not in pivots]
        for vals in product(range(p), repeat=len(free)):
            rows = [[0] * n for _ in range(rank)]
            for i, pc in enumerate(pivots):
                rows[i][pc] = 1
            for (i, c), v in zip(free, vals):
                rows[i][c] = v
            out.append(Subspace(field, n, tuple(tuple(r) for r in rows)))
    out.sort(key=Subspace.key)
    return out


def enumerate_splittings(field: RingId, n: int) -> list[tuple[Subspace, Subspace]]:
    """Ordered pairs (V0, V1) of complementary proper nonzero subspaces."""
    if not field.is_finite:
        raise ValueError("splitting enumeration needs a prime field")
    out = []
    by_rank = {r: enumerate_subspaces(field, n, r) for r in range(1, n)}
    for r in range(1, n):
        for v0 in by_rank[r]:
            for v1 in by_rank[n - r]:
                if v0.meets_trivially(v1):
                    out.append((v0, v1))
    out.sort(key=lambda pair: (pair[0].key(), pair[1].key()))
    return out


def lines_to_json(lines: Sequence[Line]) -> list:
    from .rings import elem_to_json
    return [[elem_to_json(x) for x in ln.rep] for ln in lines]


def subspaces_to_json(subs: Sequence[Subspace]) -> list:
    from .rings import elem_to_json
    out = []
    for s in subs:
        out.append([[elem_to_json(s.field.elem(v)) for v in row] for row in s.basis])
    return out
