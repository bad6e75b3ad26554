"""Support tau-tilting machinery: projectives, tau, pairs, mutation, exploration.

Pairs are mutated through completions of almost-complete data: deleting one
element leaves data whose exactly two completions are the Gen-minimal pair
(computed by a cokernel of a minimal left approximation of the free module)
and the maximal one (computed as the dual of the minimal completion over the
opposite algebra, using the transpose).  Both branches share the same
approximation code, so mutation at a module summand and at an excluded vertex
are the one algorithm.

Node identity in the exchange graph is the g-vector matrix with columns
sorted lexicographically; no isomorphism testing happens across nodes.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dataclass_field
from typing import Dict, Iterable, List, Sequence

from .algebra import BoundAlgebra, opposite_algebra, restrict_algebra
from .endo import EndoStructure, decompose, is_isomorphic, in_fac, radical_coords
from .errors import Incomplete, NotMutable
from .linalg import Matrix, int_det
from .quiver import Path
from .reps import (Morphism, Representation, cokernel_rep, direct_sum,
                   direct_sum_with_maps, extend_rep, hom_basis, kernel_rep,
                   radical, restrict_rep, zero_rep)

_DEFAULT_SEED = 0


# -- projectives and injectives -------------------------------------------------

def _paths_by_target(algebra: BoundAlgebra, v: str) -> dict:
    per_vertex = {w: [] for w in algebra.quiver.vertices}
    for i, p in algebra.basis_paths_from(v):
        per_vertex[p.target].append(p)
    return per_vertex


def projective_rep(algebra: BoundAlgebra, v: str) -> Representation:
    """P(v): at vertex j the span of basis paths v -> j, arrows extending paths."""
    cached = algebra._proj_cache.get(v)
    if cached is not None:
        return cached[0]
    per_vertex = _paths_by_target(algebra, v)
    local = {w: {p.key: k for k, p in enumerate(ps)} for w, ps in per_vertex.items()}
    dims = {w: len(ps) for w, ps in per_vertex.items()}
    field = algebra.field
    mats = {}
    for a in algebra.quiver.arrows:
        rows, cols = dims[a.target], dims[a.source]
        m = Matrix.zero(field, rows, cols)
        for col, p in enumerate(per_vertex[a.source]):
            extended = Path(p.source, p.arrows + (a.name,), a.target)
            for pos, coeff in algebra.path_normal_form(extended).items():
                bp = algebra.basis[pos]
                m.data[local[a.target][bp.key] * cols + col] = coeff
        mats[a.name] = m
    rep = Representation(algebra, dims, mats)
    algebra._proj_cache[v] = (rep, per_vertex)
    return rep


def projective_basis_paths(algebra: BoundAlgebra, v: str) -> dict:
    projective_rep(algebra, v)
    return algebra._proj_cache[v][1]


def injective_rep(algebra: BoundAlgebra, v: str) -> Representation:
    """I(v): at vertex j the dual of the span of basis paths j -> v."""
    cached = algebra._inj_cache.get(v)
    if cached is not None:
        return cached
    q = algebra.quiver
    per_vertex = {w: [p for _, p in algebra.basis_paths_between(w, v)] for w in q.vertices}
    local = {w: {p.key: k for k, p in enumerate(ps)} for w, ps in per_vertex.items()}
    dims = {w: len(ps) for w, ps in per_vertex.items()}
    field = algebra.field
    mats = {}
    for a in q.arrows:
        rows, cols = dims[a.target], dims[a.source]
        m = Matrix.zero(field, rows, cols)
        # entry[q_row, p_col] = coefficient of p in (a . q), q a path t(a) -> v
        for row, qq in enumerate(per_vertex[a.target]):
            prefixed = Path(a.source, (a.name,) + qq.arrows, v)
            for pos, coeff in algebra.path_normal_form(prefixed).items():
                bp = algebra.basis[pos]
                col = local[a.source].get(bp.key)
                if col is not None:
                    m.data[row * cols + col] = coeff
        mats[a.name] = m
    rep = Representation(algebra, dims, mats)
    algebra._inj_cache[v] = rep
    return rep


def projective_morphism(algebra: BoundAlgebra, src: str, tgt: str, element) -> Morphism:
    """The morphism P(src) -> P(tgt) sending the generator to ``element``.

    ``element`` is an AlgebraElement supported on paths tgt -> src.
    """
    p_src = projective_rep(algebra, src)
    p_tgt = projective_rep(algebra, tgt)
    src_paths = projective_basis_paths(algebra, src)
    tgt_paths = projective_basis_paths(algebra, tgt)
    tgt_local = {w: {p.key: k for k, p in enumerate(ps)} for w, ps in tgt_paths.items()}
    field = algebra.field
    mats = {}
    coeffs = element.coeffs
    for w in algebra.quiver.vertices:
        rows, cols = p_tgt.dims[w], p_src.dims[w]
        m = Matrix.zero(field, rows, cols)
        for col, p in enumerate(src_paths[w]):
            # image of basis path p (src -> w) is element * p
            for i, c in enumerate(coeffs):
                if not c:
                    continue
                u = algebra.basis[i]
                if u.target != p.source:
                    continue
                for pos, c2 in algebra.path_normal_form(u.concat(p)).items():
                    bp = algebra.basis[pos]
                    row = tgt_local[w].get(bp.key)
                    if row is not None:
                        m.data[row * cols + col] = field.add(
                            m.data[row * cols + col], field.mul(c, c2))
        mats[w] = m
    return Morphism(p_src, p_tgt, mats)


def free_rep(algebra: BoundAlgebra) -> Representation:
    return direct_sum([projective_rep(algebra, v) for v in algebra.quiver.vertices])


# -- covers and presentations ------------------------------------------------------

@dataclass
class ProjectivePresentation:
    """Minimal presentation P1 -> P0 -> M -> 0 with labeled vertex multisets."""

    p1_vertices: tuple
    p0_vertices: tuple
    p1_rep: Representation
    p0_rep: Representation
    map: Morphism
    module: Representation


def projective_cover(m: Representation):
    """(vertex multiset, P, epi P -> M); P covers the top of M."""
    alg = m.algebra
    field = alg.field
    if m.is_zero():
        z = zero_rep(alg)
        return (), z, Morphism(z, m, {})
    _, rad_incl = radical(m)
    verts: List[str] = []
    generators: List[tuple] = []
    from .linalg import complete_to_basis

    for v in alg.quiver.vertices:
        for j in complete_to_basis(rad_incl.mats[v]):
            verts.append(v)
            generators.append((v, j))
    summands = [projective_rep(alg, v) for v in verts]
    total, _, _ = direct_sum_with_maps(summands)
    mats = {}
    for w in alg.quiver.vertices:
        cols = []
        for (v, j), summand in zip(generators, summands):
            paths = projective_basis_paths(alg, v)[w]
            for p in paths:
                col = m.evaluate_path(p).column(j)
                cols.append(col)
        if cols:
            mats[w] = Matrix.from_columns(field, cols)
        else:
            mats[w] = Matrix.zero(field, m.dims[w], 0)
    epi = Morphism(total, m, mats)
    return tuple(verts), total, epi


def min_projective_presentation(m: Representation) -> ProjectivePresentation:
    """Minimal presentation: cover of M, then cover of the kernel."""
    if m.is_zero():
        raise ValueError("the zero representation has no minimal presentation")
    p0_verts, p0, epi = projective_cover(m)
    kernel, incl = kernel_rep(epi)
    if kernel.is_zero():
        p1 = zero_rep(m.algebra)
        return ProjectivePresentation((), p0_verts, p1, p0,
                                      Morphism(p1, p0, {}), m)
    p1_verts, p1, eta = projective_cover(kernel)
    return ProjectivePresentation(p1_verts, p0_verts, p1, p0,
                                  incl.compose(eta), m)


_G_CACHE: dict = {}


def g_vector(m: Representation) -> tuple:
    """[P0] - [P1] of the minimal presentation, over the vertex order."""
    key = id(m)
    hit = _G_CACHE.get(key)
    if hit is not None and hit[0] is m:
        return hit[1]
    pres = min_projective_presentation(m)
    counts = {v: 0 for v in m.algebra.quiver.vertices}
    for v in pres.p0_vertices:
        counts[v] += 1
    for v in pres.p1_vertices:
        counts[v] -= 1
    g = tuple(counts[v] for v in m.algebra.quiver.vertices)
    _G_CACHE[key] = (m, g)
    return g


# -- Nakayama functor and tau ----------------------------------------------------------

def _presentation_blocks(pres: ProjectivePresentation):
    """Component elements x[s][r] in e_{w_s} A e_{v_r} of the presentation map."""
    alg = pres.module.algebra
    blocks = []
    p1_offsets = _sum_offsets(alg, [projective_rep(alg, v) for v in pres.p1_vertices])
    p0_offsets = _sum_offsets(alg, [projective_rep(alg, v) for v in pres.p0_vertices])
    for s, w in enumerate(pres.p0_vertices):
        row = []
        for r, v in enumerate(pres.p1_vertices):
            # value of the (s, r) component on the generator of P(v):
            # the generator sits at vertex v, local slot = offset of copy r
            gen_slot = p1_offsets[r][v]  # + 0: trivial path is first
            coeffs = {}
            tgt_paths = projective_basis_paths(alg, w)[v]
            col = pres.map.mats[v].column(gen_slot)
            base = p0_offsets[s][v]
            for k, p in enumerate(tgt_paths):
                c = col[base + k]
                if c:
                    coeffs[p] = c
            row.append(coeffs)
        blocks.append(row)
    return blocks


def _sum_offsets(algebra: BoundAlgebra, summands: Sequence[Representation]):
    """Per-summand, per-vertex starting offsets inside the direct sum."""
    offsets = []
    run = {v: 0 for v in algebra.quiver.vertices}
    for s in summands:
        offsets.append(dict(run))
        for v in algebra.quiver.vertices:
            run[v] += s.dims[v]
    return offsets


def nu_of_presentation(pres: ProjectivePresentation) -> Morphism:
    """The Nakayama functor applied to the presentation map: nu P1 -> nu P0.

    nu P(v) = I(v); on a morphism given by x in e_w A e_v the image is the
    transpose of right multiplication by x.
    """
    alg = pres.module.algebra
    field = alg.field
    i1_list = [injective_rep(alg, v) for v in pres.p1_vertices]
    i0_list = [injective_rep(alg, v) for v in pres.p0_vertices]
    i1 = direct_sum(i1_list) if i1_list else zero_rep(alg)
    i0 = direct_sum(i0_list) if i0_list else zero_rep(alg)
    i1_offsets = _sum_offsets(alg, i1_list)
    i0_offsets = _sum_offsets(alg, i0_list)
    blocks = _presentation_blocks(pres)
    mats = {}
    for j in alg.quiver.vertices:
        m = Matrix.zero(field, i0.dims[j], i1.dims[j])
        for s, w in enumerate(pres.p0_vertices):
            into_w = [p for _, p in alg.basis_paths_between(j, w)]
            w_local = {p.key: k for k, p in enumerate(into_w)}
            for r, v in enumerate(pres.p1_vertices):
                x = blocks[s][r]
                if not x:
                    continue
                into_v = [p for _, p in alg.basis_paths_between(j, v)]
                # right multiplication q -> q * x, then transpose
                for qi, q in enumerate(into_w):
                    row_base = i0_offsets[s][j] + qi
                    for u, c in x.items():
                        for pos, c2 in alg.path_normal_form(q.concat(u)).items():
                            bp = alg.basis[pos]
                            loc = None
                            for pk, pp in enumerate(into_v):
                                if pp.key == bp.key:
                                    loc = pk
                                    break
                            if loc is None:
                                continue
                            colj = i1_offsets[r][j] + loc
                            m.data[row_base * i1.dims[j] + colj] = field.add(
                                m.data[row_base * i1.dims[j] + colj],
                                field.mul(c, c2))
        mats[j] = m
    return Morphism(i1, i0, mats)


def tau(m: Representation) -> Representation:
    """The Auslander-Reiten translate: kernel of nu applied to a minimal presentation."""
    if m.is_zero():
        return zero_rep(m.algebra)
    pres = min_projective_presentation(m)
    if not pres.p1_vertices:
        return zero_rep(m.algebra)
    nu_d = nu_of_presentation(pres)
    return kernel_rep(nu_d)[0]


def is_tau_rigid(m: Representation) -> bool:
    if m.is_zero():
        return True
    t = tau(m)
    if t.is_zero():
        return True
    return len(hom_basis(m, t)) == 0


# -- support tau-tilting pairs -------------------------------------------------------

class SttPair:
    """A basic tau-rigid pair with full element count, keyed by its g-matrix."""

    __slots__ = ("algebra", "summands", "excluded", "g_columns", "key", "_module")

    def __init__(self, algebra: BoundAlgebra, summands: Sequence[Representation],
                 excluded: Iterable[str]):
        self.algebra = algebra
        cols = []
        for s in summands:
            cols.append((g_vector(s), s))
        cols.sort(key=lambda t: t[0])
        self.summands = tuple(s for _, s in cols)
        self.excluded = frozenset(excluded)
        n = len(algebra.quiver.vertices)
        g_cols = [g for g, _ in cols]
        for v in sorted(self.excluded):
            i = algebra.quiver.vertex_index[v]
            g_cols.append(tuple(-1 if j == i else 0 for j in range(n)))
        self.g_columns = tuple(sorted(g_cols))
        self.key = self.g_columns
        self._module = None

    def elements(self) -> list:
        """Mutable positions: summands first, then excluded vertices (sorted)."""
        return list(self.summands) + sorted(self.excluded)

    def module(self) -> Representation:
        if self._module is None:
            self._module = (direct_sum(self.summands) if self.summands
                            else zero_rep(self.algebra))
        return self._module

    @property
    def size(self) -> int:
        return len(self.summands) + len(self.excluded)

    def support(self) -> frozenset:
        return frozenset(self.algebra.quiver.vertices) - self.excluded

    def g_matrix_rows(self) -> list:
        """g-columns as a square integer matrix (rows = vertex coordinates)."""
        return [[col[i] for col in self.g_columns]
                for i in range(len(self.algebra.quiver.vertices))]

    def __repr__(self):
        return f"SttPair({len(self.summands)} summands, excluded={sorted(self.excluded)})"


def pair_free(algebra: BoundAlgebra) -> SttPair:
    return SttPair(algebra, [projective_rep(algebra, v) for v in algebra.quiver.vertices], [])


def pair_zero(algebra: BoundAlgebra) -> SttPair:
    return SttPair(algebra, [], algebra.quiver.vertices)


def is_stt_pair(module, support, seed=_DEFAULT_SEED) -> bool:
    """Validity of a support tau-tilting pair given the module part and support.

    ``module`` may be a representation (decomposed internally) or a list of
    indecomposable summands.
    """
    if isinstance(module, Representation):
        summands = decompose(module, seed=seed) if not module.is_zero() else []
        algebra = module.algebra
    else:
        summands = list(module)
        if not summands:
            raise ValueError("pass a Representation for the zero module")
        algebra = summands[0].algebra
    support = frozenset(support)
    excluded = frozenset(algebra.quiver.vertices) - support
    total = direct_sum(summands) if summands else zero_rep(algebra)
    if total.support() != support:
        return False
    if len(summands) + len(excluded) != len(algebra.quiver.vertices):
        return False
    for i in range(len(summands)):
        for j in range(i + 1, len(summands)):
            if is_isomorphic(summands[i], summands[j], seed=seed):
                return False
    return is_tau_rigid(total)


# -- minimal left approximations ------------------------------------------------------

_RAD_END_CACHE: dict = {}


def _rad_end_morphisms(n: Representation, seed=_DEFAULT_SEED) -> list:
    key = id(n)
    hit = _RAD_END_CACHE.get(key)
    if hit is not None and hit[0] is n:
        return hit[1]
    basis = hom_basis(n, n)
    if len(basis) <= 1:
        out = []
    else:
        endo = EndoStructure(n, basis)
        out = [endo.element(c) for c in radical_coords(endo)]
    _RAD_END_CACHE[key] = (n, out)
    return out


def minimal_left_approximation(x: Representation, classes: Sequence[Representation],
                               seed=_DEFAULT_SEED):
    """Minimal left add(N)-approximation of x, N = direct sum of ``classes``.

    ``classes`` must be pairwise non-isomorphic indecomposables.  Returns a
    morphism x -> Z with Z a sum of copies of the classes; multiplicities are
    the dimensions of Hom(x, N_j) modulo maps factoring through the radical
    of add(N).
    """
    alg = x.algebra
    field = alg.field
    homs = [hom_basis(x, nj) for nj in classes]
    chosen: List[tuple] = []
    for j, nj in enumerate(classes):
        hj = homs[j]
        if not hj:
            continue
        rad_rows = []
        for i, ni in enumerate(classes):
            hi = homs[i]
            if not hi:
                continue
            rad_ij = (_rad_end_morphisms(nj, seed) if i == j
                      else hom_basis(ni, nj))
            for r in rad_ij:
                for g in hi:
                    rad_rows.append(list(r.compose(g).flatten()))
        picked = []
        if rad_rows:
            rank = Matrix.from_rows(field, rad_rows).rank()
        else:
            rank = 0
        rows = rad_rows
        for g in hj:
            cand = rows + [list(g.flatten())]
            new_rank = Matrix.from_rows(field, cand).rank()
            if new_rank > rank:
                picked.append(g)
                rows = cand
                rank = new_rank
        chosen.extend((j, g) for g in picked)
    if not chosen:
        z = zero_rep(alg)
        return Morphism(x, z, {})
    parts = [classes[j] for j, _ in chosen]
    z = direct_sum(parts)
    mats = {}
    for v in alg.quiver.vertices:
        blocks = [g.mats[v] for _, g in chosen]
        mats[v] = Matrix.vstack(blocks) if blocks else Matrix.zero(field, 0, x.dims[v])
    return Morphism(x, z, mats)


# -- completions and mutation ------------------------------------------------------------

def _dedupe_summands(summands: Sequence[Representation], seed=_DEFAULT_SEED) -> list:
    out: List[Representation] = []
    for s in summands:
        if s.is_zero():
            continue
        if not any(s.dim_vector() == t.dim_vector() and is_isomorphic(s, t, seed=seed)
                   for t in out):
            out.append(s)
    return out


def cobongartz_completion(algebra: BoundAlgebra, summands: Sequence[Representation],
                          seed=_DEFAULT_SEED):
    """The Gen-minimal completion of almost data over ``algebra``.

    Returns (summand list, excluded vertex set).  The module part is the old
    one plus the indecomposable parts of the cokernel of a minimal left
    approximation of the free module.
    """
    f = minimal_left_approximation(free_rep(algebra), list(summands), seed=seed)
    coker, _ = cokernel_rep(f)
    parts = decompose(coker, seed=seed) if not coker.is_zero() else []
    all_summands = _dedupe_summands(list(summands) + parts, seed=seed)
    support = set()
    for s in all_summands:
        support |= s.support()
    excluded = {v for v in algebra.quiver.vertices if v not in support}
    return all_summands, excluded


def _match_projective(algebra: BoundAlgebra, m: Representation, seed=_DEFAULT_SEED):
    for v in algebra.quiver.vertices:
        p = projective_rep(algebra, v)
        if m.dim_vector() == p.dim_vector() and is_isomorphic(m, p, seed=seed):
            return v
    return None


def transpose_rep(m: Representation, seed=_DEFAULT_SEED) -> Representation:
    """The transpose over the opposite algebra, from a minimal presentation."""
    alg = m.algebra
    a_op = opposite_algebra(alg)
    pres = min_projective_presentation(m)
    if not pres.p1_vertices:
        return zero_rep(a_op)
    blocks = _presentation_blocks(pres)

    def op_element(coeffs: dict):
        total = a_op.zero_element()
        for p, c in coeffs.items():
            rev = Path(p.target, tuple(reversed(p.arrows)), p.source)
            total = total + a_op.element_from_path(rev).scale(c)
        return total

    src_list = [projective_rep(a_op, w) for w in pres.p0_vertices]
    tgt_list = [projective_rep(a_op, v) for v in pres.p1_vertices]
    src = direct_sum(src_list) if src_list else zero_rep(a_op)
    tgt = direct_sum(tgt_list)
    src_off = _sum_offsets(a_op, src_list)
    tgt_off = _sum_offsets(a_op, tgt_list)
    field = a_op.field
    mats = {}
    for j in a_op.quiver.vertices:
        big = Matrix.zero(field, tgt.dims[j], src.dims[j])
        for r, v in enumerate(pres.p1_vertices):
            for s, w in enumerate(pres.p0_vertices):
                x = blocks[s][r]
                if not x:
                    continue
                comp = projective_morphism(a_op, w, v, op_element(x))
                block = comp.mats[j]
                for bi in range(block.rows):
                    for bj in range(block.cols):
                        val = block[bi, bj]
                        if val:
                            big.data[(tgt_off[r][j] + bi) * src.dims[j]
                                     + src_off[s][j] + bj] = val
        mats[j] = big
    dual_map = Morphism(src, tgt, mats)
    coker, _ = cokernel_rep(dual_map)
    return coker


def _dagger(algebra: BoundAlgebra, summands: Sequence[Representation],
            excluded_partial: Iterable[str], seed=_DEFAULT_SEED):
    """The pair-level duality into the opposite algebra.

    Nonprojective summands transpose; projective summands P(w) become the
    excluded vertex w; excluded vertices v become the opposite projectives
    P_op(v).  Applying it twice is the identity up to isomorphism.
    """
    a_op = opposite_algebra(algebra)
    op_summands = []
    op_excluded = set()
    for s in summands:
        v = _match_projective(algebra, s, seed=seed)
        if v is not None:
            op_excluded.add(v)
        else:
            parts = decompose(transpose_rep(s, seed=seed), seed=seed)
            if len(parts) != 1:
                raise NotMutable("transpose of an indecomposable failed to stay indecomposable")
            op_summands.append(parts[0])
    for v in excluded_partial:
        op_summands.append(projective_rep(a_op, v))
    return a_op, op_summands, op_excluded


def bongartz_completion(algebra: BoundAlgebra, summands: Sequence[Representation],
                        seed=_DEFAULT_SEED):
    """The Gen-maximal completion, via the duality and the minimal one."""
    a_op, op_summands, op_excluded = _dagger(algebra, summands, set(), seed=seed)
    keep = [v for v in a_op.quiver.vertices if v not in op_excluded]
    a_op_v = restrict_algebra(a_op, keep)
    op_inner = [restrict_rep(s, a_op_v) for s in op_summands]
    inner_summands, inner_excluded = cobongartz_completion(a_op_v, op_inner, seed=seed)
    total_summands = [extend_rep(s, a_op) for s in inner_summands]
    total_excluded = set(inner_excluded) | op_excluded
    back_alg, back_summands, back_excluded = _dagger(a_op, total_summands,
                                                     total_excluded, seed=seed)
    assert back_alg is algebra
    return back_summands, back_excluded


def mutate(pair: SttPair, position: int, seed=_DEFAULT_SEED) -> SttPair:
    """Exchange one element of the pair for the unique other completion."""
    alg = pair.algebra
    elements = pair.elements()
    if not 0 <= position < len(elements):
        raise NotMutable(f"position {position} out of range")
    removed = elements[position]
    if isinstance(removed, Representation):
        kept = [s for s in pair.summands if s is not removed]
        excluded_rest = set(pair.excluded)
    else:
        kept = list(pair.summands)
        excluded_rest = set(pair.excluded) - {removed}
    keep_vertices = [v for v in alg.quiver.vertices if v not in excluded_rest]
    a_v = restrict_algebra(alg, keep_vertices)
    kept_v = [restrict_rep(s, a_v) for s in kept]
    s1, e1 = cobongartz_completion(a_v, kept_v, seed=seed)
    cand = SttPair(alg, [extend_rep(s, alg) for s in s1], set(e1) | excluded_rest)
    if cand.key != pair.key:
        return cand
    s2, e2 = bongartz_completion(a_v, kept_v, seed=seed)
    result = SttPair(alg, [extend_rep(s, alg) for s in s2], set(e2) | excluded_rest)
    if result.key == pair.key:
        raise NotMutable("both completions matched the original pair")
    return result


# -- exchange graph ---------------------------------------------------------------------

@dataclass
class ExchangeGraph:
    """Mutation closure of the free pair, with poset data when complete."""

    algebra: BoundAlgebra
    nodes: Dict[tuple, SttPair]
    neighbors: Dict[tuple, tuple]
    complete: bool
    cap: int
    hasse: list = dataclass_field(default_factory=list)  # (upper key, lower key)

    @property
    def node_count(self) -> int:
        return len(self.nodes)

    def sorted_keys(self) -> list:
        return sorted(self.nodes)

    def is_regular(self) -> bool:
        n = len(self.algebra.quiver.vertices)
        return all(len(v) == n for v in self.neighbors.values())

    def maximal_keys(self) -> list:
        lowers = {l for _, l in self.hasse}
        return [k for k in self.nodes if k not in lowers]

    def minimal_keys(self) -> list:
        uppers = {u for u, _ in self.hasse}
        return [k for k in self.nodes if k not in uppers]

    def g_determinants(self) -> list:
        return [int_det(self.nodes[k].g_matrix_rows()) for k in self.sorted_keys()]

    def to_dot(self) -> str:
        keys = self.sorted_keys()
        ids = {k: f"n{i}" for i, k in enumerate(keys)}
        lines = ["digraph exchange {", "  rankdir=TB;", "  node [shape=box];"]
        for k in keys:
            label = ";".join(",".join(str(x) for x in col) for col in k)
            lines.append(f'  {ids[k]} [label="{label}"];')
        for upper, lower in sorted(self.hasse):
            lines.append(f"  {ids[upper]} -> {ids[lower]};")
        lines.append("}")
        return "\n".join(lines) + "\n"

    def report_dict(self) -> dict:
        keys = self.sorted_keys()
        ids = {k: i for i, k in enumerate(keys)}
        nodes = []
        for k in keys:
            pair = self.nodes[k]
            nodes.append({
                "id": ids[k],
                "g_matrix": [list(col) for col in k],
                "support": sorted(pair.support()),
                "summands": len(pair.summands),
            })
        return {
            "node_count": len(keys),
            "complete": self.complete,
            "cap": self.cap,
            "nodes": nodes,
            "hasse_edges": sorted((ids[u], ids[l]) for u, l in self.hasse),
        }


def explore(algebra: BoundAlgebra, cap: int = 10000, seed=_DEFAULT_SEED,
            validate: bool = False) -> ExchangeGraph:
    """Breadth-first mutation closure from the free pair.

    When the closure terminates within ``cap`` nodes the graph is complete
    and the Hasse orientation is computed by Fac-inclusion on module parts;
    otherwise the completeness flag stays off (a verdict, not an error).
    """
    if cap < 1:
        raise ValueError("cap must be >= 1")
    root = pair_free(algebra)
    nodes = {root.key: root}
    neighbors: Dict[tuple, tuple] = {}
    queue = [root.key]
    complete = True
    qi = 0
    while qi < len(queue):
        key = queue[qi]
        qi += 1
        pair = nodes[key]
        outs = []
        for position in range(pair.size):
            new_pair = mutate(pair, position, seed=seed)
            if validate and not is_stt_pair(list(new_pair.summands) or new_pair.module(),
                                            new_pair.support(), seed=seed):
                raise NotMutable("exploration produced an invalid pair")
            if new_pair.key not in nodes:
                if len(nodes) >= cap:
                    complete = False
                    outs.append(new_pair.key)
                    continue
                nodes[new_pair.key] = new_pair
                queue.append(new_pair.key)
            outs.append(new_pair.key)
        neighbors[key] = tuple(outs)
        if not complete:
            break
    graph = ExchangeGraph(algebra, nodes, neighbors, complete, cap)
    if complete:
        hasse = set()
        for key, outs in neighbors.items():
            for other in outs:
                if (key, other) in hasse or (other, key) in hasse:
                    continue
                mu = nodes[key].module()
                mo = nodes[other].module()
                if in_fac(mu, mo):
                    hasse.add((key, other))
                else:
                    hasse.add((other, key))
        graph.hasse = sorted(hasse)
    return graph


def poset_isomorphic(g1: ExchangeGraph, g2: ExchangeGraph):
    """Exact poset isomorphism of two completed exchange graphs.

    Compares counts and degree profiles, then runs a backtracking search on
    the Hasse diagrams.  Returns (verdict, witness mapping or None).
    """
    if not (g1.complete and g2.complete):
        raise Incomplete("poset comparison requires completed explorations")
    if g1.node_count != g2.node_count or len(g1.hasse) != len(g2.hasse):
        return False, None
    import networkx as nx

    d1, d2 = nx.DiGraph(), nx.DiGraph()
    d1.add_nodes_from(g1.nodes)
    d2.add_nodes_from(g2.nodes)
    d1.add_edges_from(g1.hasse)
    d2.add_edges_from(g2.hasse)

    def profile(d):
        return sorted((d.in_degree(n), d.out_degree(n)) for n in d.nodes)

    if profile(d1) != profile(d2):
        return False, None
    matcher = nx.algorithms.isomorphism.DiGraphMatcher(d1, d2)
    if matcher.is_isomorphic():
        return True, dict(matcher.mapping)
    return False, None
