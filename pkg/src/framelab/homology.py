"""Reduced simplicial homology via Smith normal form, and derived verdicts.

All boundary matrices have integer entries, so a single integer Smith normal
form per degree serves every coefficient ring:

    Z       betti from ranks, torsion from nonunit invariant factors
    Q       betti from ranks
    F_p     ranks count invariant factors not divisible by p
    Z[1/2]  the Z result with the 2-part of each torsion factor removed

Reduced conventions throughout: the augmentation map is part of the chain
complex, so the empty complex has a single homology class in degree -1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .complexes import Poset, SimplicialComplex, check_monotone, poset_above, poset_fiber_le
from .linalg import ExactMatrix, SmithForm, smith_normal_form
from .rings import CoeffRing, RingId, Z, odd_part

# Boundary matrices wider than this are refused rather than densified.
MAX_BOUNDARY_COLS = 2000

_ZRING = RingId.integers()


class SizeGuardError(RuntimeError):
    """Raised when a computation exceeds the desk-scale limits."""


@dataclass
class HomologyResult:
    """Betti numbers and torsion per degree, for one coefficient ring."""

    coeff: CoeffRing
    degrees: dict[int, tuple[int, tuple[int, ...]]]

    def betti(self, d: int) -> int:
        return self.degrees.get(d, (0, ()))[0]

    def torsion(self, d: int) -> tuple[int, ...]:
        return self.degrees.get(d, (0, ()))[1]

    def is_trivial(self, d: int) -> bool:
        return self.betti(d) == 0 and not self.torsion(d)

    def to_json(self) -> dict:
        return {
            "coeff": self.coeff.name,
            "degrees": [
                {"d": d, "betti": b, "torsion": [str(t) for t in tors]}
                for d, (b, tors) in sorted(self.degrees.items())
            ],
        }


def boundary_matrix(K: SimplicialComplex, d: int) -> ExactMatrix:
    """The boundary map C_d -> C_{d-1}; d = 0 gives the augmentation row."""
    n_d = K.n_simplices(d)
    if n_d > MAX_BOUNDARY_COLS:
        raise SizeGuardError(f"boundary in degree {d} has {n_d} columns (limit {MAX_BOUNDARY_COLS})")
    if d == 0:
        return ExactMatrix.from_int_rows(_ZRING, [[1] * n_d], cols=n_d)
    rows = K.simplices.get(d - 1, [])
    row_index = {s: i for i, s in enumerate(rows)}
    cols = K.simplices.get(d, [])
    entries = [[0] * len(cols) for _ in range(len(rows))]  # sparse fill, dense store
    for j, s in enumerate(cols):
        for drop in range(d + 1):
            face = s[:drop] + s[drop + 1:]
            entries[row_index[face]][j] = -1 if drop % 2 else 1
    return ExactMatrix.from_int_rows(_ZRING, entries, cols=len(cols))


@dataclass
class ChainComplex:
    """Reduced chain complex of a simplicial complex over a coefficient ring."""

    coeff: CoeffRing
    boundaries: list[ExactMatrix]  # index d: map C_d -> C_{d-1}, d = 0 is augmentation

    def __post_init__(self):
        for d in range(1, len(self.boundaries)):
            prod = self.boundaries[d - 1] @ self.boundaries[d]
            if any(not e.is_zero() for e in prod.entries):
                raise ValueError(f"boundary composition nonzero in degree {d}")


def chain_complex(K: SimplicialComplex, coeff: CoeffRing = Z) -> ChainComplex:
    return ChainComplex(coeff, [boundary_matrix(K, d) for d in range(K.dim() + 1)])


def _snf_of_boundary(K: SimplicialComplex, d: int) -> SmithForm:
    cached = K._snf_cache.get(d)
    if cached is None:
        cached = smith_normal_form(boundary_matrix(K, d))
        K._snf_cache[d] = cached
    return cached


def _rank_over(sf: SmithForm, coeff: CoeffRing) -> int:
    if coeff.kind == "F":
        return sum(1 for f in sf.invariant_factors if f.a % coeff.p != 0)
    return sf.rank


def reduced_homology(K: SimplicialComplex, coeff: CoeffRing = Z) -> HomologyResult:
    """Reduced homology in all degrees -1 .. dim K."""
    dim = K.dim()
    out: dict[int, tuple[int, tuple[int, ...]]] = {}
    for d in range(-1, dim + 1):
        n_d = 1 if d == -1 else K.n_simplices(d)
        rank_d = _rank_over(_snf_of_boundary(K, d), coeff) if d >= 0 else 0
        rank_up = _rank_over(_snf_of_boundary(K, d + 1), coeff) if d + 1 <= dim else 0
        betti = n_d - rank_d - rank_up
        torsion: tuple[int, ...] = ()
        if coeff.kind in ("Z", "ZHalf") and d + 1 <= dim:
            factors = [f.a for f in _snf_of_boundary(K, d + 1).invariant_factors]
            if coeff.kind == "ZHalf":
                factors = [odd_part(f) for f in factors]
            torsion = tuple(sorted(f for f in factors if f > 1))
        out[d] = (betti, torsion)
    return HomologyResult(coeff, out)


def is_spherical(K: SimplicialComplex, d: int) -> bool:
    """dim K = d and trivial reduced integral homology strictly below d."""
    if K.dim() != d:
        return False
    hom = reduced_homology(K, Z)
    return all(hom.is_trivial(i) for i in range(-1, d))


def is_cohen_macaulay(K: SimplicialComplex, d: int) -> bool:
    """d-spherical with the link of every k-simplex (d-k-1)-spherical."""
    if not is_spherical(K, d):
        return False
    for s in K.all_simplices():
        k = len(s) - 1
        if not is_spherical(K.link(s), d - k - 1):
            return False
    return True


# -- cycles ---------------------------------------------------------------------


@dataclass(frozen=True)
class CycleChain:
    """A cycle in fixed degree, as a sparse integer combination of simplices."""

    degree: int
    coeffs: tuple[tuple[int, int], ...]  # (simplex index, coefficient), sorted

    @staticmethod
    def from_dict(degree: int, data: dict[int, int]) -> "CycleChain":
        return CycleChain(degree, tuple(sorted((i, c) for i, c in data.items() if c)))

    def as_vector(self, length: int) -> list[int]:
        v = [0] * length
        for i, c in self.coeffs:
            v[i] = c
        return v

    def scaled(self, a: int) -> "CycleChain":
        return CycleChain(self.degree, tuple((i, a * c) for i, c in self.coeffs))

    def __add__(self, other: "CycleChain") -> "CycleChain":
        if self.degree != other.degree:
            raise ValueError("degree mismatch")
        data: dict[int, int] = dict(self.coeffs)
        for i, c in other.coeffs:
            data[i] = data.get(i, 0) + c
        return CycleChain.from_dict(self.degree, data)

    def is_zero(self) -> bool:
        return not self.coeffs


def boundary_of_chain(K: SimplicialComplex, chain: CycleChain) -> dict[int, int]:
    """Image of the chain under the boundary map, as a sparse dict."""
    d = chain.degree
    if d == 0:
        total = sum(c for _, c in chain.coeffs)
        return {0: total} if total else {}
    faces = {s: i for i, s in enumerate(K.simplices.get(d - 1, []))}
    out: dict[int, int] = {}
    cols = K.simplices[d]
    for j, c in chain.coeffs:
        s = cols[j]
        for drop in range(d + 1):
            face = s[:drop] + s[drop + 1:]
            sign = -1 if drop % 2 else 1
            idx = faces[face]
            out[idx] = out.get(idx, 0) + sign * c
    return {i: v for i, v in out.items() if v}


def is_cycle(K: SimplicialComplex, chain: CycleChain) -> bool:
    return not boundary_of_chain(K, chain)


def top_cycle_basis(K: SimplicialComplex) -> list[CycleChain]:
    """A lattice basis of the top-degree cycles ker(boundary)."""
    d = K.dim()
    if d < 0:
        return []
    sf = _snf_of_boundary(K, d)
    n = K.n_simplices(d)
    out = []
    for j in range(sf.rank, n):
        col = sf.V.col(j)
        out.append(CycleChain.from_dict(d, {i: col[i].a for i in range(n)}))
    return out


def cycle_coordinates(K: SimplicialComplex, chain: CycleChain) -> list[int]:
    """Coordinates of a top cycle in the top_cycle_basis lattice."""
    d = K.dim()
    if chain.degree != d:
        raise ValueError("not a top-degree chain")
    sf = _snf_of_boundary(K, d)
    vec = [_ZRING.elem(v) for v in chain.as_vector(K.n_simplices(d))]
    y = sf.v_inv.apply(vec)
    if any(not y[i].is_zero() for i in range(sf.rank)):
        raise ValueError("chain is not a cycle")
    return [y[i].a for i in range(sf.rank, len(y))]


def class_in_span(K: SimplicialComplex, c: CycleChain,
                  gens: Sequence[CycleChain], coeff: CoeffRing = Z) -> bool:
    """Whether [c] lies in the span of [gens] in homology over coeff.

    Solves c = sum a_i g_i + boundary exactly: over Z by divisibility in the
    Smith form, over a field by a rank comparison, over Z[1/2] by odd-part
    divisibility.
    """
    d = c.degree
    for g in gens:
        if g.degree != d:
            raise ValueError("degree mismatch among generators")
    for ch in (c, *gens):
        if not is_cycle(K, ch):
            raise ValueError("inputs must be cycles")
    n = K.n_simplices(d)
    cols = [g.as_vector(n) for g in gens]
    upper = boundary_matrix(K, d + 1) if d + 1 <= K.dim() else None
    if upper is not None:
        for j in range(upper.cols):
            cols.append([e.a for e in upper.col(j)])
    rows = [[col[i] for col in cols] for i in range(n)] if cols else [[] for _ in range(n)]
    M = ExactMatrix.from_int_rows(_ZRING, rows, cols=len(cols))
    sf = smith_normal_form(M)
    return _snf_membership(sf, c.as_vector(n), coeff)


def _snf_membership(sf: SmithForm, target: Sequence[int], coeff: CoeffRing) -> bool:
    rhs = sf.U.apply([_ZRING.elem(v) for v in target])
    k = min(sf.D.rows, sf.D.cols)
    for i in range(sf.D.rows):
        d = sf.D.get(i, i).a if i < k else 0
        r = rhs[i].a
        if d == 0:
            if coeff.kind == "F":
                if r % coeff.p != 0:
                    return False
            elif r != 0:
                return False
        else:
            if coeff.kind == "Z" and r % d != 0:
                return False
            if coeff.kind == "ZHalf" and r % odd_part(d) != 0:
                return False
            if coeff.kind == "F":
                # d y = r mod p is solvable unless p | d and p does not divide r
                if d % coeff.p == 0 and r % coeff.p != 0:
                    return False
            # over Q always solvable when d != 0
    return True


def spans_top_homology(K: SimplicialComplex, gens: Sequence[CycleChain],
                       coeff: CoeffRing = Z) -> bool:
    """Whether the generators span the full top homology over coeff."""
    basis = top_cycle_basis(K)
    if not basis:
        return True
    d = K.dim()
    n = K.n_simplices(d)
    cols = [g.as_vector(n) for g in gens]
    upper = boundary_matrix(K, d + 1) if d + 1 <= K.dim() else None
    if upper is not None:
        for j in range(upper.cols):
            cols.append([e.a for e in upper.col(j)])
    rows = [[col[i] for col in cols] for i in range(n)]
    sf = smith_normal_form(ExactMatrix.from_int_rows(_ZRING, rows, cols=len(cols)))
    return all(_snf_membership(sf, b.as_vector(n), coeff) for b in basis)


# -- the nerve filtration rank identity -----------------------------------------------


@dataclass
class NerveIdentityReport:
    """Hypothesis checks and both sides of the filtration rank identity."""

    n: int
    target_spherical: bool
    fibers_spherical: dict[int, bool]
    upsets_spherical: dict[int, bool]
    lhs: int
    rhs_target: int
    rhs_terms: dict[int, int]
    hypotheses_hold: bool = field(init=False)
    identity_checked: bool = field(init=False)
    holds: bool = field(init=False)

    def __post_init__(self):
        self.hypotheses_hold = (self.target_spherical
                                and all(self.fibers_spherical.values())
                                and all(self.upsets_spherical.values()))
        self.identity_checked = self.hypotheses_hold
        rhs = self.rhs_target + sum(self.rhs_terms.values())
        self.holds = self.hypotheses_hold and self.lhs == rhs

    def rhs(self) -> int:
        return self.rhs_target + sum(self.rhs_terms.values())

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "target_spherical": self.target_spherical,
            "fibers_spherical": self.fibers_spherical,
            "upsets_spherical": self.upsets_spherical,
            "lhs": self.lhs,
            "rhs": self.rhs(),
            "rhs_target": self.rhs_target,
            "rhs_terms": self.rhs_terms,
            "hypotheses_hold": self.hypotheses_hold,
            "holds": self.holds,
        }


def nerve_rank_identity(X: Poset, Y: Poset, f: Sequence[int], t: Sequence[int],
                        coeff: CoeffRing) -> NerveIdentityReport:
    """Check the filtration identity for a poset map f: X -> Y over a field.

    With n the spherical dimension of Y, q(y) = n - t(y), the identity reads

        dim H~_n(X) = dim H~_n(Y) + sum_y dim H~_{n-q-1}(Y_{>y}) * dim H~_q(X_{f<=y})

    Hypotheses (Y n-spherical, each fiber (n-t(y))-spherical, each strict
    upset (t(y)-1)-spherical) are verified first; if any fails the identity
    is reported but not asserted.
    """
    if coeff.kind not in ("Q", "F"):
        raise ValueError("the rank identity is checked over field coefficients")
    bad = check_monotone(X, Y, f)
    if bad is not None:
        raise ValueError(f"map is not monotone at pair {bad}")
    ocY = Y.order_complex()
    n = ocY.dim()
    target_spherical = is_spherical(ocY, n)
    fibers_ok: dict[int, bool] = {}
    upsets_ok: dict[int, bool] = {}
    terms: dict[int, int] = {}
    for y in range(len(Y.elements)):
        q = n - t[y]
        fib = poset_fiber_le(X, Y, f, y).order_complex()
        ups = poset_above(Y, y).order_complex()
        fibers_ok[y] = is_spherical(fib, q)
        upsets_ok[y] = is_spherical(ups, t[y] - 1)
        hf = reduced_homology(fib, coeff)
        hu = reduced_homology(ups, coeff)
        terms[y] = hu.betti(n - q - 1) * hf.betti(q)
    lhs = reduced_homology(X.order_complex(), coeff).betti(n)
    rhs_target = reduced_homology(ocY, coeff).betti(n)
    return NerveIdentityReport(
        n=n,
        target_spherical=target_spherical,
        fibers_spherical=fibers_ok,
        upsets_spherical=upsets_ok,
        lhs=lhs,
        rhs_target=rhs_target,
        rhs_terms=terms,
    )
