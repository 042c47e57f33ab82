"""Simplicial complexes and posets: frame complexes, buildings, splittings.

Complexes are finite, vertex-indexed, and closed under faces; simplices are
stored per dimension as sorted tuples of strictly increasing vertex indices.
Vertices may be Line objects, Subspace objects, splitting pairs, or plain
hashable labels (for abstract test complexes).

Augmented frame complexes carry per-simplex tags recording whether a simplex
is a plain frame or admits an additive relation, together with exact
witnesses.  All witnesses are recorded; no uniqueness is assumed.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Iterable, Optional, Sequence

from .enumeration import Line, NormBound, Subspace, enumerate_lines, enumerate_splittings, \
    enumerate_subspaces, standard_line
from .linalg import ExactMatrix, is_partial_frame, solve_linear
from .rings import RingElem, RingId

Simplex = tuple[int, ...]


@dataclass(frozen=True)
class AdditiveTag:
    """Classification of a simplex: a frame, or an additive relation witness.

    For kind "internal", vertices i, j, k of the simplex satisfy
    rep(i) = rep(j) + rep(k) after unit rescaling.  For kind "external",
    rep(i) = e_k + rep(j) after rescaling, where e_k is the k-th fixed
    standard line (0-based).  Frames carry no witness.
    """

    kind: str  # "frame" | "internal" | "external"
    i: Optional[int] = None
    j: Optional[int] = None
    k: Optional[int] = None

    def __post_init__(self):
        if self.kind not in ("frame", "internal", "external"):
            raise ValueError(f"unknown tag kind {self.kind!r}")


class SimplicialComplex:
    """A finite simplicial complex with indexed vertices."""

    def __init__(self, vertices: Sequence, simplices: dict[int, list[Simplex]],
                 tags: Optional[dict[Simplex, tuple[AdditiveTag, ...]]] = None,
                 meta: Optional[dict] = None):
        self.vertices = list(vertices)
        self.simplices = {d: sorted(set(simplices.get(d, []))) for d in simplices}
        self.simplices = {d: s for d, s in sorted(self.simplices.items()) if s}
        self.tags = dict(tags or {})
        self.meta = dict(meta or {})
        self._index = {self._vkey(v): i for i, v in enumerate(self.vertices)}
        self._sets = {d: set(s) for d, s in self.simplices.items()}
        self._snf_cache: dict[int, object] = {}
        self._validate()

    @staticmethod
    def _vkey(v):
        return v.key() if hasattr(v, "key") else v

    def _validate(self) -> None:
        if len(self._index) != len(self.vertices):
            raise ValueError("duplicate vertices")
        n = len(self.vertices)
        for d, simps in self.simplices.items():
            for s in simps:
                if len(s) != d + 1 or any(not 0 <= i < n for i in s):
                    raise ValueError(f"bad simplex {s} in dimension {d}")
                if any(s[i] >= s[i + 1] for i in range(d)):
                    raise ValueError(f"simplex {s} is not strictly increasing")
                if d > 0:
                    for face in combinations(s, d):
                        if face not in self._sets.get(d - 1, ()):
                            raise ValueError(f"missing face {face} of {s}")
        if self.vertices and 0 not in self.simplices and any(self.simplices):
            raise ValueError("positive-dimensional simplices without vertices")

    # -- constructors ------------------------------------------------------------

    @staticmethod
    def from_maximal(vertices: Sequence, maximal: Iterable[Sequence[int]],
                     meta: Optional[dict] = None) -> "SimplicialComplex":
        """Close the given simplices (as vertex-index tuples) under faces."""
        by_dim: dict[int, set[Simplex]] = {}
        if vertices:
            by_dim[0] = {(i,) for i in range(len(vertices))}
        for s in maximal:
            s = tuple(sorted(s))
            if len(set(s)) != len(s):
                raise ValueError(f"repeated vertex in simplex {s}")
            for k in range(1, len(s) + 1):
                by_dim.setdefault(k - 1, set()).update(combinations(s, k))
        return SimplicialComplex(vertices, {d: sorted(v) for d, v in by_dim.items()}, meta=meta)

    # -- queries -------------------------------------------------------------------

    def dim(self) -> int:
        return max(self.simplices) if self.simplices else -1

    def n_simplices(self, d: int) -> int:
        return len(self.simplices.get(d, []))

    def has_simplex(self, s: Sequence[int]) -> bool:
        s = tuple(sorted(s))
        return s in self._sets.get(len(s) - 1, ())

    def vertex_index(self, v) -> int:
        return self._index[self._vkey(v)]

    def has_vertex(self, v) -> bool:
        return self._vkey(v) in self._index

    def all_simplices(self) -> Iterable[Simplex]:
        for d in sorted(self.simplices):
            yield from self.simplices[d]

    def f_vector(self) -> list[int]:
        return [self.n_simplices(d) for d in range(self.dim() + 1)]

    def euler_characteristic_reduced(self) -> int:
        chi = -1
        for d in range(self.dim() + 1):
            chi += (-1) ** d * self.n_simplices(d)
        return chi

    def index_of_simplex(self, d: int, s: Simplex) -> int:
        return self.simplices[d].index(s)

    # -- derived complexes ------------------------------------------------------------

    def link(self, simplex: Sequence[int]) -> "SimplicialComplex":
        """The link of a simplex, with vertex indices re-based."""
        s = tuple(sorted(simplex))
        if not self.has_simplex(s):
            raise ValueError(f"{s} is not a simplex")
        sset = set(s)
        verts = [i for i in range(len(self.vertices))
                 if i not in sset and self.has_simplex(tuple(sorted(s + (i,))))]
        old_to_new = {v: i for i, v in enumerate(verts)}
        by_dim: dict[int, list[Simplex]] = {0: [(i,) for i in range(len(verts))]} if verts else {}
        for d, simps in self.simplices.items():
            for t in simps:
                if sset & set(t):
                    continue
                if all(v in old_to_new for v in t) and self.has_simplex(tuple(sorted(s + t))):
                    by_dim.setdefault(d, []).append(tuple(old_to_new[v] for v in t))
        return SimplicialComplex([self.vertices[v] for v in verts], by_dim,
                                 meta={"link_of": s, **{k: v for k, v in self.meta.items()
                                                        if k in ("ring", "truncated")}})

    def face_poset(self) -> "Poset":
        """Poset of simplices ordered by inclusion."""
        elements = list(self.all_simplices())
        return Poset.from_leq(elements, lambda a, b: set(a) <= set(b))

    def to_json(self) -> dict:
        from .rings import elem_to_json
        verts = []
        for v in self.vertices:
            if isinstance(v, Line):
                verts.append([elem_to_json(x) for x in v.rep])
            else:
                verts.append(v)
        tags = {}
        for s, tgs in sorted(self.tags.items()):
            tags[",".join(map(str, s))] = [
                {"kind": t.kind, "witness": None if t.i is None else [t.i, t.j, t.k]}
                for t in tgs
            ]
        out = {
            "type": "complex",
            "vertices": verts,
            "simplices": {str(d): [list(s) for s in simps] for d, simps in self.simplices.items()},
            "tags": tags,
        }
        for k in ("ring", "n", "m", "bound", "truncated"):
            if k in self.meta:
                out[k] = self.meta[k]
        return out


class Poset:
    """A finite poset: indexed elements plus the strict order relation."""

    def __init__(self, elements: Sequence, less: Iterable[tuple[int, int]]):
        self.elements = list(elements)
        self.less_than = frozenset(less)
        self._check()

    def _check(self) -> None:
        n = len(self.elements)
        for (i, j) in self.less_than:
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError("relation index out of range")
            if i == j:
                raise ValueError(f"reflexive relation at {i}")
        for (i, j) in self.less_than:
            for (k, l) in self.less_than:
                if j == k and (i, l) not in self.less_than:
                    raise ValueError(f"relation not transitive at {(i, j)}, {(k, l)}")

    @staticmethod
    def from_leq(elements: Sequence, leq: Callable) -> "Poset":
        rel = set()
        for i, a in enumerate(elements):
            for j, b in enumerate(elements):
                if i != j and leq(a, b):
                    rel.add((i, j))
        return Poset(elements, rel)

    def __len__(self) -> int:
        return len(self.elements)

    def less(self, i: int, j: int) -> bool:
        return (i, j) in self.less_than

    def leq(self, i: int, j: int) -> bool:
        return i == j or (i, j) in self.less_than

    def covers(self) -> list[tuple[int, int]]:
        """Covering relations: i < j with nothing strictly between."""
        out = []
        for (i, j) in self.less_than:
            if not any(self.less(i, k) and self.less(k, j) for k in range(len(self.elements))):
                out.append((i, j))
        return sorted(out)

    def opposite(self) -> "Poset":
        return Poset(self.elements, {(j, i) for (i, j) in self.less_than})

    def induced(self, indices: Sequence[int]) -> "Poset":
        idx = list(indices)
        pos = {v: i for i, v in enumerate(idx)}
        rel = {(pos[i], pos[j]) for (i, j) in self.less_than if i in pos and j in pos}
        return Poset([self.elements[i] for i in idx], rel)

    def above(self, i: int) -> "Poset":
        return self.induced([j for j in range(len(self.elements)) if self.less(i, j)])

    def below(self, i: int) -> "Poset":
        return self.induced([j for j in range(len(self.elements)) if self.less(j, i)])

    def order_complex(self) -> SimplicialComplex:
        """The nerve: vertices are elements, simplices are chains."""
        n = len(self.elements)
        above = {i: sorted(j for j in range(n) if self.less(i, j)) for i in range(n)}
        by_dim: dict[int, list[Simplex]] = {}
        if n:
            by_dim[0] = [(i,) for i in range(n)]
        frontier = [(i,) for i in range(n)]
        d = 0
        while frontier:
            nxt = []
            for chain in frontier:
                for j in above[chain[-1]]:
                    nxt.append(chain + (j,))
            if nxt:
                d += 1
                by_dim[d] = nxt
            frontier = nxt
        return SimplicialComplex(self.elements, by_dim, meta={"order_complex": True})

    def to_json(self) -> dict:
        from .rings import elem_to_json
        elems = []
        for e in self.elements:
            if isinstance(e, Subspace):
                elems.append({"basis": [list(r) for r in e.basis]})
            elif isinstance(e, tuple) and len(e) == 2 and isinstance(e[0], Subspace):
                elems.append({"pair": [{"basis": [list(r) for r in s.basis]} for s in e]})
            elif isinstance(e, Line):
                elems.append([elem_to_json(x) for x in e.rep])
            else:
                elems.append(list(e) if isinstance(e, tuple) else e)
        return {"type": "poset", "elements": elems, "relations": sorted(self.less_than)}


def check_monotone(X: Poset, Y: Poset, f: Sequence[int]) -> Optional[tuple[int, int]]:
    """None if f is a poset map; otherwise a witness pair (i, j) with i < j."""
    for (i, j) in X.less_than:
        if not Y.leq(f[i], f[j]):
            return (i, j)
    return None


def poset_fiber_le(X: Poset, Y: Poset, f: Sequence[int], y: int) -> Poset:
    """The sub-poset {x : f(x) <= y} of X."""
    bad = check_monotone(X, Y, f)
    if bad is not None:
        raise ValueError(f"map is not monotone at pair {bad}")
    return X.induced([i for i in range(len(X.elements)) if Y.leq(f[i], y)])


def poset_above(P: Poset, y: int) -> Poset:
    return P.above(y)


# -- frame complexes -------------------------------------------------------------


def _frame_test(fixed_reps: list, lines: Sequence[Line]) -> bool:
    rows = fixed_reps + [list(ln.rep) for ln in lines]
    return is_partial_frame(rows)


def _grow_complex(vertices: Sequence[Line], fixed_reps: list, max_size: int,
                  member: Callable[[list], bool]) -> dict[int, list[Simplex]]:
    """Grow simplices dimension by dimension; membership must be face-closed."""
    by_dim: dict[int, list[Simplex]] = {}
    if vertices:
        by_dim[0] = [(i,) for i in range(len(vertices))]
    frontier = by_dim.get(0, [])
    size = 1
    while frontier and size < max_size:
        nxt = []
        for s in frontier:
            for v in range(s[-1] + 1, len(vertices)):
                cand = s + (v,)
                if member([vertices[i] for i in cand]):
                    nxt.append(cand)
        if nxt:
            by_dim[size] = nxt
        frontier = nxt
        size += 1
    return by_dim


def build_frame_complex(ring: RingId, n: int, m: int = 0,
                        bound: Optional[NormBound] = None) -> SimplicialComplex:
    """The complex of partial frames in R^(n+m), linked at the first m
    standard lines: vertices are lines v with {e_1..e_m, v} a partial frame,
    and simplices are the sets extending the fixed lines to a partial frame.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    N = n + m
    if not ring.is_finite and bound is None and n >= 1:
        raise ValueError("a norm bound is required for an infinite ring")
    fixed = [standard_line(ring, N, i) for i in range(m)]
    fixed_reps = [list(l.rep) for l in fixed]
    fixed_keys = {l.key() for l in fixed}
    verts = []
    if n >= 1:
        for ln in enumerate_lines(ring, N, bound):
            if ln.key() in fixed_keys:
                continue
            if _frame_test(fixed_reps, [ln]):
                verts.append(ln)
    by_dim = _grow_complex(verts, fixed_reps, n,
                           lambda lines: _frame_test(fixed_reps, lines))
    meta = {"ring": ring.name, "n": n, "m": m, "kind": "B",
            "bound": bound.value if bound else None,
            "truncated": not ring.is_finite}
    return SimplicialComplex(verts, by_dim, meta=meta)


def _additive_witnesses(ring: RingId, fixed_reps: list, lines: Sequence[Line]) -> list[AdditiveTag]:
    """All additive-relation witnesses on {fixed lines} + {lines}.

    A witness needs: removing one member leaves a partial frame, and the
    removed member is a unit combination of two of the remaining members.
    """
    members: list[tuple[Optional[int], Optional[int], list]] = []
    for k, rep in enumerate(fixed_reps):
        members.append((None, k, rep))  # (line index, fixed index, rep)
    for idx, ln in enumerate(lines):
        members.append((idx, None, list(ln.rep)))
    out = []
    total = len(members)
    for xi in range(total):
        rest = [members[t] for t in range(total) if t != xi]
        if not is_partial_frame([r for (_, _, r) in rest]):
            continue
        x_line, x_fixed, x_rep = members[xi]
        for (ya, yb) in combinations(range(len(rest)), 2):
            y_line, y_fixed, y_rep = rest[ya]
            z_line, z_fixed, z_rep = rest[yb]
            A = ExactMatrix.from_rows(ring, [list(p) for p in zip(y_rep, z_rep)])
            sol = solve_linear(A, x_rep)
            if sol is None or not (sol[0].is_unit() and sol[1].is_unit()):
                continue
            if x_fixed is not None:
                # e_k = c1*y + c2*z forces both y, z off the fixed block; the
                # relation rearranges to an external one on y.
                if y_line is None or z_line is None:
                    raise AssertionError("fixed lines are not independent")
                out.append(AdditiveTag("external", i=y_line, j=z_line, k=x_fixed))
            elif y_fixed is not None:
                out.append(AdditiveTag("external", i=x_line, j=z_line, k=y_fixed))
            elif z_fixed is not None:
                out.append(AdditiveTag("external", i=x_line, j=y_line, k=z_fixed))
            else:
                out.append(AdditiveTag("internal", i=x_line, j=y_line, k=z_line))
    return out


def build_augmented_complex(ring: RingId, n: int, m: int = 0,
                            bound: Optional[NormBound] = None) -> SimplicialComplex:
    """The augmented variant: partial frames plus simplices carrying an
    additive relation, each tagged with exact witnesses.  For m > 0, vertices
    whose representative lies in the fixed block are excluded.
    """
    B = build_frame_complex(ring, n, m, bound)
    N = n + m
    fixed_reps = [list(standard_line(ring, N, i).rep) for i in range(m)]
    verts = list(B.vertices)

    tag_store: dict[Simplex, tuple[AdditiveTag, ...]] = {}

    def member(lines: list) -> bool:
        if _frame_test(fixed_reps, lines):
            return True
        return bool(_additive_witnesses(ring, fixed_reps, lines))

    by_dim = _grow_complex(verts, fixed_reps, n + 1, member)
    for d, simps in by_dim.items():
        for s in simps:
            lines = [verts[i] for i in s]
            wits = _additive_witnesses(ring, fixed_reps, lines)
            if _frame_test(fixed_reps, lines):
                # Frames and additive simplices are disjoint classes.
                assert not wits, f"frame simplex {s} admits an additive relation"
                tag_store[s] = (AdditiveTag("frame"),)
            else:
                # Translate within-simplex line positions to vertex indices;
                # external k stays a fixed-block position.
                translated = [
                    AdditiveTag(w.kind, i=s[w.i], j=s[w.j],
                                k=s[w.k] if w.kind == "internal" else w.k)
                    for w in wits]
                tag_store[s] = tuple(dict.fromkeys(translated))
    meta = {"ring": ring.name, "n": n, "m": m, "kind": "BA",
            "bound": bound.value if bound else None,
            "truncated": not ring.is_finite}
    return SimplicialComplex(verts, by_dim, tags=tag_store, meta=meta)


def frame_part(K: SimplicialComplex) -> SimplicialComplex:
    """The sub-complex of frame-tagged simplices of an augmented complex."""
    by_dim: dict[int, list[Simplex]] = {}
    for s, tags in K.tags.items():
        if any(t.kind == "frame" for t in tags):
            by_dim.setdefault(len(s) - 1, []).append(s)
    meta = dict(K.meta)
    meta["kind"] = "B"
    return SimplicialComplex(K.vertices, by_dim, meta=meta)


# -- buildings and splitting posets ------------------------------------------------


def tits_building(field: RingId, n: int) -> Poset:
    """Proper nontrivial subspaces of F_p^n ordered by inclusion."""
    elems = []
    for r in range(1, n):
        elems.extend(enumerate_subspaces(field, n, r))
    return Poset.from_leq(elems, lambda a, b: a.rank < b.rank and b.contains(a))


def relative_tits_building(field: RingId, n_total: int, w: int) -> Poset:
    """Subspaces meeting the span W of the first w basis vectors trivially."""
    if not 1 <= w:
        raise ValueError("w must be at least 1")
    W = Subspace.from_vectors(field, n_total,
                              [[1 if j == i else 0 for j in range(n_total)] for i in range(w)])
    elems = []
    for r in range(1, n_total):
        for V in enumerate_subspaces(field, n_total, r):
            if V.meets_trivially(W):
                elems.append(V)
    return Poset.from_leq(elems, lambda a, b: a.rank < b.rank and b.contains(a))


def splitting_poset(field: RingId, n: int, *, inside: Optional[Subspace] = None,
                    containing: Optional[Subspace] = None) -> Poset:
    """Splittings (V0, V1) with V0 + V1 = F_p^n a direct sum, ordered by
    refinement: (V0, V1) <= (V0', V1') when V0 <= V0' and V1' <= V1.

    Optional constraints: V0 contained in `inside`, and `containing`
    contained in V1.
    """
    for c in (inside, containing):
        if c is not None and c.ambient_rank != n:
            raise ValueError("constraint does not live in the ambient space")
    elems = []
    for (v0, v1) in enumerate_splittings(field, n):
        if inside is not None and not inside.contains(v0):
            continue
        if containing is not None and not v1.contains(containing):
            continue
        elems.append((v0, v1))

    def leq(a, b):
        return a != b and b[0].contains(a[0]) and a[1].contains(b[1])

    return Poset.from_leq(elems, leq)
