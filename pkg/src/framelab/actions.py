"""Group actions on complexes, sphere classes, coinvariants, and witnesses.

Matrices act on column vectors.  A group element permutes the vertices of a
complex (lines, subspaces, or splitting pairs); the induced chain map keeps
track of orientation signs.  Over truncated complexes an action that maps a
vertex outside the complex raises TruncationEscapeError naming the vertex;
sign witnesses therefore act only on the support of the class they move.

Coinvariants of the top homology module are presented as the cokernel of the
boundary from one degree up together with (g - 1) applied to a cycle basis,
for g running over a generating set; the identity
(gh - 1)m = (g - 1)(hm) + (h - 1)m makes generators sufficient.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations, product
from typing import Iterable, Optional, Sequence

from .complexes import Poset, SimplicialComplex, splitting_poset
from .enumeration import Line, Subspace
from .homology import (CycleChain, boundary_matrix, class_in_span, cycle_coordinates,
                       is_cycle, top_cycle_basis)
from .linalg import ExactMatrix, complement, smith_normal_form, solve_linear
from .rings import RingElem, RingId

_ZRING = RingId.integers()


class TruncationEscapeError(ValueError):
    """The action moves a vertex outside the (truncated) complex."""

    def __init__(self, vertex):
        self.vertex = vertex
        super().__init__(f"action escapes the complex at vertex {vertex!r}")


@dataclass(frozen=True)
class GroupGenSet:
    """Generators of a subgroup of GL(R^(m+n)) fixing the first m basis vectors."""

    ambient_rank: int
    fix_rank: int
    generators: tuple[ExactMatrix, ...]

    def __post_init__(self):
        for g in self.generators:
            if g.rows != self.ambient_rank or g.cols != self.ambient_rank:
                raise ValueError("generator has wrong shape")
            sf = smith_normal_form(g)
            if sf.rank != g.rows or not all(f.is_unit() for f in sf.invariant_factors):
                raise ValueError("generator is not invertible")
            for j in range(self.fix_rank):
                col = g.col(j)
                for i in range(self.ambient_rank):
                    want = g.ring.one() if i == j else g.ring.zero()
                    if col[i] != want:
                        raise ValueError("generator does not fix the prescribed block")

    @property
    def label(self) -> str:
        return f"GL_fix({self.fix_rank},{self.ambient_rank - self.fix_rank})"


def _primitive_root(p: int) -> int:
    for g in range(2, p):
        seen, x = set(), 1
        for _ in range(p - 1):
            x = x * g % p
            seen.add(x)
        if len(seen) == p - 1:
            return g
    return 1


def gl_generators(field: RingId, n: int) -> GroupGenSet:
    """Elementary matrices plus one diagonal unit generate GL_n(F_p)."""
    return gl_fix_generators(field, 0, n)


def gl_fix_generators(field: RingId, m: int, n: int) -> GroupGenSet:
    """Generators of the subgroup of GL(F_p^(m+n)) fixing the first m
    standard vectors pointwise: block GL_n generators in the lower-right
    corner plus single-entry translations into the fixed block."""
    if not field.is_finite:
        raise ValueError("generator sets are provided for prime fields")
    N = m + n
    gens: list[ExactMatrix] = []

    def elementary(i: int, j: int) -> ExactMatrix:
        rows = [[1 if a == b else 0 for b in range(N)] for a in range(N)]
        rows[i][j] = 1
        return ExactMatrix.from_int_rows(field, rows)

    for i in range(m, N):
        for j in range(m, N):
            if i != j:
                gens.append(elementary(i, j))
    if field.p > 2 and n >= 1:
        rows = [[1 if a == b else 0 for b in range(N)] for a in range(N)]
        rows[m][m] = _primitive_root(field.p)
        gens.append(ExactMatrix.from_int_rows(field, rows))
    for i in range(m):
        for j in range(m, N):
            gens.append(elementary(i, j))
    return GroupGenSet(N, m, tuple(gens))


def swap_block_matrix(ring: RingId, n: int, m: int) -> ExactMatrix:
    """The block matrix [[0, id_n], [id_m, 0]] of size (n+m)."""
    N = n + m
    rows = [[0] * N for _ in range(N)]
    for i in range(n):
        rows[i][m + i] = 1
    for i in range(m):
        rows[n + i][i] = 1
    return ExactMatrix.from_int_rows(ring, rows)


# -- vertex transport and induced chain maps ----------------------------------------


def transport_vertex(g: ExactMatrix, label):
    if isinstance(label, Line):
        image = g.apply(label.rep)
        return Line.from_vector(image)
    if isinstance(label, Subspace):
        return label.transform(g.int_rows())
    if isinstance(label, tuple):
        return tuple(transport_vertex(g, x) for x in label)
    raise TypeError(f"cannot act on vertex {label!r}")


def act_on_complex(g: ExactMatrix, K: SimplicialComplex) -> list[int]:
    """The vertex permutation induced by g; errors if the action escapes."""
    perm = []
    for v in K.vertices:
        image = transport_vertex(g, v)
        if not K.has_vertex(image):
            raise TruncationEscapeError(image)
        perm.append(K.vertex_index(image))
    if len(set(perm)) != len(perm):
        raise TruncationEscapeError("non-injective vertex image")
    for s in K.all_simplices():
        if not K.has_simplex(tuple(sorted(perm[i] for i in s))):
            raise TruncationEscapeError(tuple(K.vertices[perm[i]] for i in s))
    return perm


def _sort_sign(seq: Sequence[int]) -> tuple[tuple[int, ...], int]:
    """Sorted tuple and the sign of the sorting permutation; 0 on repeats."""
    arr = list(seq)
    if len(set(arr)) != len(arr):
        return tuple(sorted(arr)), 0
    inv = sum(1 for a, b in combinations(arr, 2) if a > b)
    return tuple(sorted(arr)), (-1) ** inv


def act_on_chain(K: SimplicialComplex, perm: Sequence[int], chain: CycleChain) -> CycleChain:
    """Push a chain along a vertex permutation, tracking orientation signs."""
    d = chain.degree
    simps = K.simplices.get(d, [])
    index = {s: i for i, s in enumerate(simps)}
    out: dict[int, int] = {}
    for j, c in chain.coeffs:
        image, sign = _sort_sign([perm[v] for v in simps[j]])
        if sign == 0 or image not in index:
            raise TruncationEscapeError(image)
        idx = index[image]
        out[idx] = out.get(idx, 0) + sign * c
    return CycleChain.from_dict(d, out)


def act_on_chain_support(g: ExactMatrix, K: SimplicialComplex, chain: CycleChain) -> CycleChain:
    """Like act_on_chain but only requires the support to stay inside K."""
    d = chain.degree
    simps = K.simplices.get(d, [])
    index = {s: i for i, s in enumerate(simps)}
    out: dict[int, int] = {}
    for j, c in chain.coeffs:
        imgs = []
        for v in simps[j]:
            image = transport_vertex(g, K.vertices[v])
            if not K.has_vertex(image):
                raise TruncationEscapeError(image)
            imgs.append(K.vertex_index(image))
        image, sign = _sort_sign(imgs)
        if sign == 0 or image not in index:
            raise TruncationEscapeError(image)
        out[index[image]] = out.get(index[image], 0) + sign * c
    return CycleChain.from_dict(d, out)


# -- sphere classes --------------------------------------------------------------------


@dataclass(frozen=True)
class SphereClassSpec:
    """An ordered join of vertex blocks encoding a sphere inside a complex.

    Each block lists p+1 vertices and contributes the boundary of a
    p-simplex; the join of the blocks is a sphere of dimension
    (sum of p's) - 1, oriented by the listed order.
    """

    blocks: tuple[tuple, ...]

    def dedup_key(self):
        return frozenset(frozenset(SimplicialComplex._vkey(v) for v in blk) for blk in self.blocks)

    def degree(self) -> int:
        return sum(len(b) - 1 for b in self.blocks) - 1


def sphere_class(K: SimplicialComplex, spec: SphereClassSpec) -> CycleChain:
    """The fundamental cycle of the join sphere described by spec.

    Requires every set obtained by omitting one vertex from each block to be
    a simplex of K.  (Sets containing a full block may or may not be
    simplices; they are simply not part of the sphere.)
    """
    blocks_idx = []
    seen = set()
    for blk in spec.blocks:
        idxs = []
        for v in blk:
            if not K.has_vertex(v):
                raise ValueError(f"vertex {v!r} is not in the complex")
            i = K.vertex_index(v)
            if i in seen:
                raise ValueError(f"vertex {v!r} appears twice")
            seen.add(i)
            idxs.append(i)
        blocks_idx.append(idxs)
    d = spec.degree()
    simp_index = {s: i for i, s in enumerate(K.simplices.get(d, []))}
    data: dict[int, int] = {}
    for omits in product(*[range(len(b)) for b in blocks_idx]):
        support = []
        sign = 1
        for blk, omit in zip(blocks_idx, omits):
            support.extend(blk[:omit] + blk[omit + 1:])
            sign *= (-1) ** omit
        image, shuffle = _sort_sign(support)
        if shuffle == 0 or image not in simp_index:
            raise ValueError(f"join condition fails: {image} is not a simplex")
        idx = simp_index[image]
        data[idx] = data.get(idx, 0) + sign * shuffle
    chain = CycleChain.from_dict(d, data)
    assert is_cycle(K, chain), "sphere class is not a cycle"
    return chain


def generating_family(K: SimplicialComplex) -> list[SphereClassSpec]:
    """All join-sphere generators of the top homology of a frame complex
    over a prime field: blocks (v, v', v+v') on paired frame members and
    (v, v + earlier-member-or-fixed-line) on the rest, over all frames.
    Deduplicated up to within-block order.
    """
    meta = K.meta
    ring = RingId.from_name(meta["ring"])
    if not ring.is_finite:
        raise ValueError("the generating family is enumerated over prime fields")
    n, m = meta["n"], meta["m"]
    N = n + m
    units = ring.units()
    fixed_reps = [tuple(ring.one() if j == i else ring.zero() for j in range(N))
                  for i in range(m)]

    def frame_ok(lines: Sequence[Line]) -> bool:
        from .linalg import is_partial_frame
        return is_partial_frame([list(r) for r in fixed_reps] + [list(l.rep) for l in lines])

    def sum_line(a: Sequence[RingElem], b: Sequence[RingElem], u: RingElem) -> Line:
        return Line.from_vector(tuple(x + u * y for x, y in zip(a, b)))

    specs: dict = {}
    verts = K.vertices
    for subset in combinations(range(len(verts)), n):
        if not frame_ok([verts[i] for i in subset]):
            continue
        for order in permutations(subset):
            frame = [verts[i] for i in order]
            for d in range(n // 2 + 1):
                rest = range(2 * d, n)  # 0-based indices of unpaired members
                pair_opts: list[list[Line]] = []
                feasible = True
                for j in rest:
                    opts: dict = {}
                    for i in range(j):
                        for u in units:
                            ln = sum_line(frame[j].rep, frame[i].rep, u)
                            opts[ln.key()] = ln
                    for i in range(m):
                        for u in units:
                            ln = sum_line(frame[j].rep, fixed_reps[i], u)
                            opts[ln.key()] = ln
                    if not opts:
                        feasible = False
                        break
                    pair_opts.append([opts[k] for k in sorted(opts)])
                if not feasible:
                    continue
                triple_opts: list[list[Line]] = []
                for i in range(d):
                    opts = {}
                    for u in units:
                        ln = sum_line(frame[2 * i].rep, frame[2 * i + 1].rep, u)
                        opts[ln.key()] = ln
                    triple_opts.append([opts[k] for k in sorted(opts)])
                for choice in product(*(triple_opts + pair_opts)):
                    ws = choice[:d]
                    us = choice[d:]
                    blocks = []
                    ok = True
                    for i in range(d):
                        blk = (frame[2 * i], frame[2 * i + 1], ws[i])
                        if len({SimplicialComplex._vkey(v) for v in blk}) != 3:
                            ok = False
                            break
                        blocks.append(blk)
                    if ok:
                        for j, u_line in zip(rest, us):
                            blk = (frame[j], u_line)
                            if SimplicialComplex._vkey(frame[j]) == u_line.key():
                                ok = False
                                break
                            blocks.append(blk)
                    if not ok:
                        continue
                    all_keys = [SimplicialComplex._vkey(v) for blk in blocks for v in blk]
                    if len(set(all_keys)) != len(all_keys):
                        continue
                    spec = SphereClassSpec(tuple(tuple(b) for b in blocks))
                    specs.setdefault(spec.dedup_key(), spec)
    return [specs[k] for k in sorted(specs, key=lambda fs: sorted(sorted(b) for b in fs))]


# -- coinvariants ----------------------------------------------------------------------


def _is_power_of_two(x: int) -> bool:
    return x >= 1 and (x & (x - 1)) == 0


@dataclass
class CoinvariantsReport:
    """Presentation of the coinvariants of a top homology module."""

    complex_ref: str
    group: str
    module_rank: int
    relation_rows: int
    relation_cols: int
    invariant_factors: tuple[int, ...]  # nonunit torsion factors, then a 0 per free rank
    vanishes_over_ZHalf: bool

    @property
    def is_zero(self) -> bool:
        return not self.invariant_factors

    def to_json(self) -> dict:
        return {
            "complex_ref": self.complex_ref,
            "group": self.group,
            "module_rank": self.module_rank,
            "relation_matrix": [self.relation_rows, self.relation_cols],
            "invariant_factors": [str(f) for f in self.invariant_factors],
            "vanishes_over_ZHalf": self.vanishes_over_ZHalf,
        }


def coinvariants(K: SimplicialComplex, G: GroupGenSet,
                 complex_ref: str = "") -> CoinvariantsReport:
    """Coinvariants of the top homology of K under the group generated by G."""
    d = K.dim()
    basis = top_cycle_basis(K)
    t = len(basis)
    columns: list[list[int]] = []
    upper = boundary_matrix(K, d + 1) if d + 1 <= K.dim() else None
    if upper is not None:
        for j in range(upper.cols):
            col = CycleChain.from_dict(d, {i: e.a for i, e in enumerate(upper.col(j))})
            columns.append(cycle_coordinates(K, col))
    for g in G.generators:
        perm = act_on_complex(g, K)
        for z in basis:
            moved = act_on_chain(K, perm, z)
            diff = moved + z.scaled(-1)
            columns.append(cycle_coordinates(K, diff))
    rows = [[col[i] for col in columns] for i in range(t)]
    R = ExactMatrix.from_int_rows(_ZRING, rows, cols=len(columns))
    sf = smith_normal_form(R)
    torsion = sorted(f.a for f in sf.invariant_factors if f.a > 1)
    free = t - sf.rank
    factors = tuple(torsion) + (0,) * free
    vanishes = free == 0 and all(_is_power_of_two(f) for f in torsion)
    return CoinvariantsReport(
        complex_ref=complex_ref,
        group=G.label,
        module_rank=t,
        relation_rows=t,
        relation_cols=len(columns),
        invariant_factors=factors,
        vanishes_over_ZHalf=vanishes,
    )


# -- sign witnesses ---------------------------------------------------------------------


def _negates_class(K: SimplicialComplex, g: ExactMatrix, chain: CycleChain) -> bool:
    """g . c = -c exactly, or failing that, homologous to -c."""
    moved = act_on_chain_support(g, K, chain)
    if moved + chain == CycleChain(chain.degree, ()):
        return True
    diff = moved + chain  # must be a boundary for g.c ~ -c
    d = chain.degree
    if d + 1 > K.dim():
        return False
    upper = boundary_matrix(K, d + 1)
    target = diff.as_vector(K.n_simplices(d))
    return solve_linear(upper, [_ZRING.elem(v) for v in target]) is not None


def witness_internal_swap(ring: RingId, bound=None) -> bool:
    """Top generator of the rank-2 frame complex built on the standard frame
    with the added line e1+e2; the basis swap negates the class exactly."""
    from .complexes import build_frame_complex
    from .enumeration import NormBound, standard_line
    if not ring.is_finite and bound is None:
        bound = NormBound(1)
    K = build_frame_complex(ring, 2, 0, bound)
    e1, e2 = standard_line(ring, 2, 0), standard_line(ring, 2, 1)
    w = Line.from_vector((ring.one(), ring.one()))
    c = sphere_class(K, SphereClassSpec(((e1, e2, w),)))
    g = swap_block_matrix(ring, 1, 1)
    return _negates_class(K, g, c)


def witness_external_u(ring: RingId, bound=None) -> bool:
    """Rank-1 relative complex: the pair class (e2, e1+e2) with the reflection
    g(v) = -v - e1 fixing e1; g swaps the pair and negates the class."""
    from .complexes import build_frame_complex
    from .enumeration import NormBound, standard_line
    if not ring.is_finite and bound is None:
        bound = NormBound(1)
    K = build_frame_complex(ring, 1, 1, bound)
    v1 = standard_line(ring, 2, 1)
    u1 = Line.from_vector((ring.one(), ring.one()))
    c = sphere_class(K, SphereClassSpec(((v1, u1),)))
    g = ExactMatrix.from_int_rows(ring, [[1, -1], [0, -1]])
    return _negates_class(K, g, c)


def witness_bpid(r: int, bound=None, ring: Optional[RingId] = None) -> bool:
    """The pair class (e2, v_r) with v_r = span(r*e1 + e2), moved by
    [[1, -r], [0, -1]]: the swap negates the class exactly."""
    from .complexes import build_frame_complex
    from .enumeration import NormBound, standard_line
    ring = ring or RingId.integers()
    if bound is None:
        bound = NormBound(max(abs(r), 1))
    K = build_frame_complex(ring, 1, 1, bound)
    e2 = standard_line(ring, 2, 1)
    g = ExactMatrix.from_int_rows(ring, [[1, -r], [0, -1]])
    if r == 0:
        # v_0 coincides with e2, so the class [v_0] - [e2] is the zero chain
        # and the sign identity holds on the nose.
        return _negates_class(K, g, CycleChain(0, ()))
    vr = Line.from_vector((ring.elem(r), ring.one()))
    c = sphere_class(K, SphereClassSpec(((e2, vr),)))
    return _negates_class(K, g, c)


def sign_witness(case: str, **params) -> bool:
    if case == "internal_swap":
        return witness_internal_swap(params.get("ring", RingId.integers()), params.get("bound"))
    if case == "last_block_swap":
        return witness_external_u(params.get("ring", RingId.integers()), params.get("bound"))
    if case == "bpid":
        return witness_bpid(params["r"], params.get("bound"), params.get("ring"))
    raise ValueError(f"unknown witness case {case!r}")


# -- the cutting-down isomorphism ---------------------------------------------------------


def complement_containing(field: RingId, W: Subspace, V: Subspace) -> Subspace:
    """A complement of W in the ambient space containing V."""
    n = W.ambient_rank
    rows = [[field.elem(x) for x in r] for r in list(W.basis) + list(V.basis)]
    extra = complement(rows)
    v_rows = [list(r) for r in V.basis]
    return Subspace.from_vectors(field, n, v_rows + [[e.a for e in row] for row in extra])


def subspace_intersection(A: Subspace, B: Subspace) -> Subspace:
    common = [v for v in A.vectors() if any(v) and B.contains_vector(v)]
    return Subspace.from_vectors(A.field, A.ambient_rank, common)


def cutting_down_iso(field: RingId, n: int, V: Subspace, W: Subspace) -> bool:
    """Verify, element by element, the order isomorphism between splittings
    of the ambient space pinched between V and W, and splittings of a
    complement C of W containing V:  (A, B) <-> (A, B meet C).
    """
    if not V.meets_trivially(W):
        raise ValueError("V and W must intersect trivially")
    VW = V.sum(W)
    if VW.rank >= n:
        raise ValueError("V + W must be a proper summand")
    C = complement_containing(field, W, V)
    assert C.contains(V) and C.meets_trivially(W) and C.rank + W.rank == n

    X1 = splitting_poset(field, n, inside=V, containing=W)

    # splittings of C with first part inside V
    from .enumeration import enumerate_subspaces
    subs = [s for r in range(1, C.rank) for s in enumerate_subspaces(field, n, r) if C.contains(s)]
    elems = []
    for A in subs:
        if not V.contains(A):
            continue
        for B in subs:
            if A.rank + B.rank == C.rank and A.meets_trivially(B):
                elems.append((A, B))
    X2 = Poset.from_leq(elems, lambda a, b: a != b and b[0].contains(a[0]) and a[1].contains(b[1]))

    def fwd(pair):
        A, B = pair
        return (A, subspace_intersection(B, C))

    def bwd(pair):
        A, B = pair
        return (A, B.sum(W))

    idx2 = {tuple(map(Subspace.key, e)): i for i, e in enumerate(X2.elements)}
    idx1 = {tuple(map(Subspace.key, e)): i for i, e in enumerate(X1.elements)}
    fmap, bmap = [], []
    for e in X1.elements:
        img = fwd(e)
        key = tuple(map(Subspace.key, img))
        if key not in idx2:
            return False
        fmap.append(idx2[key])
    for e in X2.elements:
        img = bwd(e)
        key = tuple(map(Subspace.key, img))
        if key not in idx1:
            return False
        bmap.append(idx1[key])
    if any(bmap[fmap[i]] != i for i in range(len(X1.elements))):
        return False
    if any(fmap[bmap[i]] != i for i in range(len(X2.elements))):
        return False
    for i in range(len(X1.elements)):
        for j in range(len(X1.elements)):
            if X1.less(i, j) != X2.less(fmap[i], fmap[j]):
                return False
    return True
