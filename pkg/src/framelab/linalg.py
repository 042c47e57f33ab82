"""Exact dense matrices and Smith normal form over the supported rings.

The Smith normal form routine is the computational substrate for everything
else: homology, primitivity and frame tests, complements, and solving linear
systems over a Euclidean domain.  Pivots are chosen by minimal norm with a
fixed row-major scan on ties, so results are deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .rings import RingElem, RingId

Vector = tuple[RingElem, ...]


@dataclass(frozen=True)
class ExactMatrix:
    """Immutable dense matrix with entries in one ring, stored row-major."""

    ring: RingId
    rows: int
    cols: int
    entries: tuple[RingElem, ...]

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ValueError("entry count does not match shape")
        for e in self.entries:
            if e.ring != self.ring:
                raise ValueError("mixed rings in matrix")

    # -- constructors ----------------------------------------------------------

    @staticmethod
    def from_rows(ring: RingId, rows: Sequence[Sequence[RingElem]]) -> "ExactMatrix":
        r = len(rows)
        c = len(rows[0]) if r else 0
        if any(len(row) != c for row in rows):
            raise ValueError("ragged rows")
        return ExactMatrix(ring, r, c, tuple(e for row in rows for e in row))

    @staticmethod
    def from_int_rows(ring: RingId, rows: Sequence[Sequence[int]], cols: int | None = None) -> "ExactMatrix":
        r = len(rows)
        c = len(rows[0]) if r else (cols or 0)
        return ExactMatrix(ring, r, c, tuple(ring.elem(v) for row in rows for v in row))

    @staticmethod
    def identity(ring: RingId, n: int) -> "ExactMatrix":
        one, zero = ring.one(), ring.zero()
        return ExactMatrix(ring, n, n, tuple(one if i == j else zero for i in range(n) for j in range(n)))

    @staticmethod
    def zeros(ring: RingId, rows: int, cols: int) -> "ExactMatrix":
        return ExactMatrix(ring, rows, cols, (ring.zero(),) * (rows * cols))

    # -- access ----------------------------------------------------------------

    def get(self, i: int, j: int) -> RingElem:
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> Vector:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def col(self, j: int) -> Vector:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def row_list(self) -> list[list[RingElem]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def int_rows(self) -> list[list[int]]:
        """Integer entries; only meaningful over Z."""
        if self.ring.kind not in ("Z", "F"):
            raise ValueError("int_rows needs an integer-valued ring")
        return [[e.a for e in self.row(i)] for i in range(self.rows)]

    # -- arithmetic --------------------------------------------------------------

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.ring != other.ring or self.cols != other.rows:
            raise ValueError("shape or ring mismatch in product")
        ring = self.ring
        out = []
        for i in range(self.rows):
            ri = self.row(i)
            for j in range(other.cols):
                acc = ring.zero()
                for k in range(self.cols):
                    acc = acc + ri[k] * other.get(k, j)
                out.append(acc)
        return ExactMatrix(ring, self.rows, other.cols, tuple(out))

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.ring != other.ring or (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape or ring mismatch in sum")
        return ExactMatrix(self.ring, self.rows, self.cols,
                           tuple(x + y for x, y in zip(self.entries, other.entries)))

    def __neg__(self) -> "ExactMatrix":
        return ExactMatrix(self.ring, self.rows, self.cols, tuple(-x for x in self.entries))

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix(self.ring, self.cols, self.rows,
                           tuple(self.get(i, j) for j in range(self.cols) for i in range(self.rows)))

    def apply(self, v: Sequence[RingElem]) -> Vector:
        """Matrix times column vector."""
        if len(v) != self.cols:
            raise ValueError("vector length mismatch")
        ring = self.ring
        out = []
        for i in range(self.rows):
            acc = ring.zero()
            ri = self.row(i)
            for k in range(self.cols):
                acc = acc + ri[k] * v[k]
            out.append(acc)
        return tuple(out)

    def det(self) -> RingElem:
        """Determinant by cofactor expansion; intended for small matrices."""
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        if n == 0:
            return self.ring.one()
        rows = self.row_list()

        def rec(rws: list[list[RingElem]]) -> RingElem:
            k = len(rws)
            if k == 1:
                return rws[0][0]
            if k == 2:
                return rws[0][0] * rws[1][1] - rws[0][1] * rws[1][0]
            acc = self.ring.zero()
            for j, piv in enumerate(rws[0]):
                if piv.is_zero():
                    continue
                minor = [[row[c] for c in range(k) if c != j] for row in rws[1:]]
                term = piv * rec(minor)
                acc = acc + term if j % 2 == 0 else acc - term
            return acc

        return rec(rows)

    def is_identity(self) -> bool:
        if self.rows != self.cols:
            return False
        return all(self.get(i, j) == (self.ring.one() if i == j else self.ring.zero())
                   for i in range(self.rows) for j in range(self.cols))

    def to_json(self) -> list:
        from .rings import elem_to_json
        return [[elem_to_json(e) for e in self.row(i)] for i in range(self.rows)]


@dataclass(frozen=True)
class SmithForm:
    """Diagonalization U @ A @ V = D with unimodular transforms.

    Diagonal entries are canonical associates satisfying d1 | d2 | ... ;
    invariant_factors lists the nonzero ones.  u_inv and v_inv are the exact
    inverses of U and V, tracked during elimination.
    """

    D: ExactMatrix
    U: ExactMatrix
    V: ExactMatrix
    u_inv: ExactMatrix
    v_inv: ExactMatrix
    invariant_factors: tuple[RingElem, ...]

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)


def smith_normal_form(A: ExactMatrix) -> SmithForm:
    ring = A.ring
    m, n = A.rows, A.cols
    M = A.row_list()
    U = ExactMatrix.identity(ring, m).row_list()
    Uinv = ExactMatrix.identity(ring, m).row_list()
    V = ExactMatrix.identity(ring, n).row_list()
    Vinv = ExactMatrix.identity(ring, n).row_list()

    def row_swap(i, j):
        M[i], M[j] = M[j], M[i]
        U[i], U[j] = U[j], U[i]
        for r in Uinv:  # column swap on the inverse
            r[i], r[j] = r[j], r[i]

    def row_scale(i, u):
        uinv = ring.inverse_unit(u)
        M[i] = [u * x for x in M[i]]
        U[i] = [u * x for x in U[i]]
        for r in Uinv:
            r[i] = r[i] * uinv

    def row_addmul(i, j, c):
        # row i += c * row j
        M[i] = [x + c * y for x, y in zip(M[i], M[j])]
        U[i] = [x + c * y for x, y in zip(U[i], U[j])]
        for r in Uinv:  # column j -= c * column i on the inverse
            r[j] = r[j] - r[i] * c

    def col_swap(i, j):
        for r in M:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]
        Vinv[i], Vinv[j] = Vinv[j], Vinv[i]

    def col_scale(j, u):
        uinv = ring.inverse_unit(u)
        for r in M:
            r[j] = r[j] * u
        for r in V:
            r[j] = r[j] * u
        Vinv[j] = [uinv * x for x in Vinv[j]]

    def col_addmul(j, k, c):
        # column j += c * column k
        for r in M:
            r[j] = r[j] + c * r[k]
        for r in V:
            r[j] = r[j] + c * r[k]
        Vinv[k] = [x - c * y for x, y in zip(Vinv[k], Vinv[j])]

    def find_pivot(s):
        best = None
        best_norm = 0
        for i in range(s, m):
            for j in range(s, n):
                if not M[i][j].is_zero():
                    nm = M[i][j].norm()
                    if best is None or nm < best_norm:
                        best, best_norm = (i, j), nm
        return best

    steps = min(m, n)
    for s in range(steps):
        while True:
            piv = find_pivot(s)
            if piv is None:
                break
            if piv[0] != s:
                row_swap(s, piv[0])
            if piv[1] != s:
                col_swap(s, piv[1])
            # clear the edging by Euclidean division
            for i in range(s + 1, m):
                if not M[i][s].is_zero():
                    q, _ = ring.euclid_div(M[i][s], M[s][s])
                    if not q.is_zero():
                        row_addmul(i, s, -q)
            for j in range(s + 1, n):
                if not M[s][j].is_zero():
                    q, _ = ring.euclid_div(M[s][j], M[s][s])
                    if not q.is_zero():
                        col_addmul(j, s, -q)
            if any(not M[i][s].is_zero() for i in range(s + 1, m)):
                continue  # a smaller-norm remainder appeared; re-pivot
            if any(not M[s][j].is_zero() for j in range(s + 1, n)):
                continue
            # enforce divisibility of the remaining block by the pivot
            culprit = None
            for i in range(s + 1, m):
                for j in range(s + 1, n):
                    if not ring.divides(M[s][s], M[i][j]):
                        culprit = i
                        break
                if culprit is not None:
                    break
            if culprit is None:
                break
            row_addmul(s, culprit, ring.one())
        if not M[s][s].is_zero() and not ring.is_canonical(M[s][s]):
            row_scale(s, ring.canonical_unit(M[s][s]))

    factors = tuple(M[s][s] for s in range(steps) if not M[s][s].is_zero())
    wrap = lambda rows, r, c: ExactMatrix(ring, r, c, tuple(x for row in rows for x in row))
    return SmithForm(
        D=wrap(M, m, n),
        U=wrap(U, m, m),
        V=wrap(V, n, n),
        u_inv=wrap(Uinv, m, m),
        v_inv=wrap(Vinv, n, n),
        invariant_factors=factors,
    )


# -- frames, primitivity, complements -------------------------------------------


def _matrix_of_vectors(vectors: Sequence[Sequence[RingElem]]) -> ExactMatrix:
    if not vectors:
        raise ValueError("no vectors given")
    ring = vectors[0][0].ring
    n = len(vectors[0])
    if any(len(v) != n for v in vectors):
        raise ValueError("mismatched vector dimensions")
    return ExactMatrix.from_rows(ring, [list(v) for v in vectors])


def is_primitive(v: Sequence[RingElem]) -> bool:
    """True if the gcd of the coordinates is a unit (span is a summand)."""
    if all(x.is_zero() for x in v):
        raise ValueError("zero vector")
    ring = v[0].ring
    g = None
    for x in v:
        if x.is_zero():
            continue
        g = x if g is None else ring.gcd(g, x)
        if g.is_unit():
            return True
    return g.is_unit()


def is_partial_frame(vectors: Sequence[Sequence[RingElem]]) -> bool:
    """True if the spanned lines extend to a direct-sum decomposition of R^n.

    Equivalent to all invariant factors of the stacked matrix being units,
    with one factor per vector.  More vectors than the ambient rank can never
    form a partial frame.
    """
    if not vectors:
        return True
    A = _matrix_of_vectors(vectors)
    if A.rows > A.cols:
        return False
    sf = smith_normal_form(A)
    return sf.rank == A.rows and all(f.is_unit() for f in sf.invariant_factors)


def complement(vectors: Sequence[Sequence[RingElem]]) -> list[Vector]:
    """Rows completing a partial frame to a basis of R^n, from SNF transforms."""
    A = _matrix_of_vectors(vectors)
    sf = smith_normal_form(A)
    if sf.rank != A.rows or not all(f.is_unit() for f in sf.invariant_factors):
        raise ValueError("input is not a partial frame")
    # A = U^-1 [I 0] V^-1 after scaling, so the trailing rows of V^-1 complete
    # the row space of A to all of R^n.
    return [sf.v_inv.row(i) for i in range(A.rows, A.cols)]


def solve_linear(A: ExactMatrix, b: Sequence[RingElem]) -> Optional[Vector]:
    """One exact solution x of A x = b over the ring, or None."""
    if len(b) != A.rows:
        raise ValueError("dimension mismatch")
    sf = smith_normal_form(A)
    c = sf.U.apply(b)
    ring = A.ring
    y = [ring.zero()] * A.cols
    for i in range(A.rows):
        d = sf.D.get(i, i) if i < min(A.rows, A.cols) else ring.zero()
        if not d.is_zero():
            q, r = ring.euclid_div(c[i], d)
            if not r.is_zero():
                return None
            y[i] = q
        elif not c[i].is_zero():
            return None
    return sf.V.apply(y)


def mat_vec(mat: Sequence[Sequence[int]], v: Sequence[int]) -> list[int]:
    """Integer matrix times integer vector (plain lists)."""
    return [sum(r[k] * v[k] for k in range(len(v))) for r in mat]
