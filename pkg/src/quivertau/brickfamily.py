"""Parametric brick families certifying tau-tilting infiniteness of tensor products.

Given two indecomposable symmetric non-local factors, a shortest nonzero
non-loop cycle is chosen in each ordinary quiver (lengths n <= m after an
orientation swap).  A minimal quotient U of the projective at the first
cycle vertex of the long-cycle factor, with the simple at position m-n+2
occurring exactly once, is extended by a staircase of one-dimensional spaces
and a single scalar entry into a one-parameter family of representations of
the tensor algebra.  Each member is checked to be a brick and members with
different parameters are checked pairwise non-isomorphic; together with the
standard brick criterion this certifies tau-tilting infiniteness.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dataclass_field
from typing import Dict, List, Sequence

from .algebra import (BoundAlgebra, find_minimal_nonzero_cycle, is_symmetric)
from .endo import (brick_criterion_socle, indecomposability, is_brick,
                   is_isomorphic)
from .errors import NoCycle, NotFound, RelationViolation, Undecided
from .linalg import Matrix
from .quiver import Cycle
from .reps import (Representation, change_basis, check_relations, quotient_rep,
                   radical, socle, sub_representation, top)
from .tautilt import projective_rep
from .tensor import (horizontal_arrow, tensor_product_algebra, tensor_vertex,
                     vertical_arrow)

_DEFAULT_SEED = 0


# -- minimal quotients of projectives --------------------------------------------

def _closure_spans(p: Representation, seeds: Sequence[tuple]) -> Dict[str, Matrix]:
    """Span of the submodule generated by (vertex, coordinate vector) seeds."""
    alg = p.algebra
    field = alg.field
    ech: Dict[str, dict] = {v: {} for v in alg.quiver.vertices}

    def insert(v, vec):
        vec = {i: c for i, c in enumerate(vec) if c}
        ech_v = ech[v]
        while vec:
            mkey = max(vec)
            c = vec.pop(mkey)
            if not c:
                continue
            row = ech_v.get(mkey)
            if row is None:
                inv = field.inv(c)
                residual = dict(vec)
                residual[mkey] = c
                ech_v[mkey] = {k2: field.mul(inv, c2) for k2, c2 in residual.items()}
                return True
            for k2, c2 in row.items():
                if k2 == mkey:
                    continue
                nv = field.sub(vec.get(k2, field.zero), field.mul(c, c2))
                if nv:
                    vec[k2] = nv
                elif k2 in vec:
                    del vec[k2]
        return False

    frontier = []
    for v, vec in seeds:
        if insert(v, vec):
            frontier.append((v, vec))
    while frontier:
        v, vec = frontier.pop()
        for a in alg.quiver.out_arrows[v]:
            img = p.mats[a.name].apply(tuple(vec))
            if any(img) and insert(a.target, img):
                frontier.append((a.target, img))
    spans = {}
    for v in alg.quiver.vertices:
        cols = []
        for mkey in sorted(ech[v]):
            col = [field.zero] * p.dims[v]
            for k, c in ech[v][mkey].items():
                col[k] = c
            cols.append(tuple(col))
        spans[v] = (Matrix.from_columns(field, cols) if cols
                    else Matrix.zero(field, p.dims[v], 0))
    return spans


def _monomial_seeds(p: Representation, base_vertex: str) -> list:
    """One seed per nontrivial canonical basis path coordinate of P(base)."""
    alg = p.algebra
    from .tautilt import projective_basis_paths

    per_vertex = projective_basis_paths(alg, base_vertex)
    seeds = []
    for v in alg.quiver.vertices:
        for k, path in enumerate(per_vertex[v]):
            if path.is_trivial:
                continue
            vec = [alg.field.zero] * p.dims[v]
            vec[k] = alg.field.one
            seeds.append((v, tuple(vec), path))
    # deeper generators first so the greedy sweep reaches small quotients fast
    seeds.sort(key=lambda t: (-t[2].length, t[2].key))
    return [(v, vec) for v, vec, _ in seeds]


def minimal_quotient_with_single_factor(algebra: BoundAlgebra, cycle: Cycle,
                                        target_position: int):
    """Minimal quotient U of P(cycle vertex 1) with one copy of the target simple.

    The target simple sits at the cycle vertex of ``target_position``.  The
    search maximizes the killed submodule over submodules generated by
    canonical path coordinates; for projectives of dimension at most 14 the
    subset search is exhaustive, beyond that a greedy sweep runs and the
    minimality status is reported as uncertified.  The postconditions that
    the proof actually needs, namely that the target simple is the socle and
    occurs exactly once while the top stays simple, are asserted either way.

    Returns ``(U, l, minimality)`` where the basis of U at the first cycle
    vertex puts the image of the projective generator first and ``l`` is the
    dimension there.
    """
    base = cycle.vertex_at(1)
    target = cycle.vertex_at(target_position)
    p = projective_rep(algebra, base)
    d_t = p.dims[target]
    if d_t < 1:
        raise NotFound(
            f"the simple at {target} is not a factor of the projective at {base}")
    seeds = _monomial_seeds(p, base)

    def admissible(chosen):
        spans = _closure_spans(p, chosen)
        if spans[target].cols != d_t - 1:
            return None
        return spans

    best_spans = None
    best_dim = -1
    empty = admissible([])
    if empty is not None:
        best_spans, best_dim = empty, 0
    if p.total_dim <= 14 and len(seeds) <= 16:
        minimality = "exhaustive-monomial"
        for r in range(1, len(seeds) + 1):
            for combo in itertools.combinations(seeds, r):
                spans = admissible(list(combo))
                if spans is not None:
                    dim = sum(mm.cols for mm in spans.values())
                    if dim > best_dim:
                        best_dim = dim
                        best_spans = spans
    else:
        minimality = "greedy-uncertified"
        chosen: List[tuple] = []
        changed = True
        while changed:
            changed = False
            for s in seeds:
                if s in chosen:
                    continue
                spans = admissible(chosen + [s])
                if spans is not None:
                    dim = sum(mm.cols for mm in spans.values())
                    if dim > best_dim:
                        chosen.append(s)
                        best_spans = spans
                        best_dim = dim
                        changed = True
    if best_spans is None:
        raise NotFound(
            f"no monomial submodule leaves exactly one copy of the simple at {target}")

    u, pr = quotient_rep(p, best_spans)
    soc_u, _ = socle(u)
    top_u, _ = top(u)
    if composition_dims(soc_u) != {target: 1}:
        raise NotFound(
            f"quotient socle is {composition_dims(soc_u)}, expected the simple at {target}")
    if composition_dims(top_u) != {base: 1}:
        raise NotFound("quotient lost its simple top")
    if u.dims[target] != 1:
        raise NotFound("target multiplicity is not one")

    # reorder the basis at the base vertex: generator image first, then rad U
    field = algebra.field
    gen = [field.zero] * p.dims[base]
    gen[0] = field.one  # the trivial path is the first canonical basis path
    gen_image = pr.mats[base].apply(tuple(gen))
    _, rad_incl = radical(u)
    cols = [gen_image]
    for j in range(rad_incl.mats[base].cols):
        cols.append(rad_incl.mats[base].column(j))
    t_mat = Matrix.from_columns(field, cols)
    if t_mat.rows != t_mat.cols or t_mat.rank() != u.dims[base]:
        raise NotFound("generator image does not complement the radical at the base vertex")
    u2, _ = change_basis(u, {base: t_mat})
    return u2, u2.dims[base], minimality


def composition_dims(m: Representation) -> dict:
    return {v: d for v, d in m.dims.items() if d}


# -- the family ---------------------------------------------------------------------

@dataclass
class FamilySpec:
    """Everything needed to build one family member for a parameter value."""

    tensor: BoundAlgebra
    first: BoundAlgebra            # factor carrying the short cycle
    second: BoundAlgebra           # factor carrying the long cycle
    cycle_first: Cycle             # length n
    cycle_second: Cycle            # length m (n <= m)
    swapped: bool                  # True when the input order (A, B) was exchanged
    quotient: Representation       # U over `second`, generator-first at cycle vertex 1
    quotient_dim_at_one: int       # l
    minimality: str

    @property
    def n(self) -> int:
        return self.cycle_first.length

    @property
    def m(self) -> int:
        return self.cycle_second.length

    def product_vertex(self, x_vertex: str, y_vertex: str) -> str:
        if self.swapped:
            return tensor_vertex(y_vertex, x_vertex)
        return tensor_vertex(x_vertex, y_vertex)

    def x_arrow(self, arrow_name: str, y_vertex: str) -> str:
        if self.swapped:
            return vertical_arrow(y_vertex, arrow_name)
        return horizontal_arrow(arrow_name, y_vertex)

    def y_arrow(self, x_vertex: str, arrow_name: str) -> str:
        if self.swapped:
            return horizontal_arrow(arrow_name, x_vertex)
        return vertical_arrow(x_vertex, arrow_name)


def plan_family(tensor: BoundAlgebra, first: BoundAlgebra, second: BoundAlgebra,
                cycle_first: Cycle, cycle_second: Cycle, swapped: bool) -> FamilySpec:
    n, m = cycle_first.length, cycle_second.length
    if n > m:
        raise ValueError("the first cycle must not be longer than the second")
    u, l, minimality = minimal_quotient_with_single_factor(second, cycle_second, m - n + 2)
    return FamilySpec(tensor, first, second, cycle_first, cycle_second,
                      swapped, u, l, minimality)


def build_family_member(spec: FamilySpec, lam) -> Representation:
    """One family member: the simple-tensor-U row plus the scalar staircase.

    The representation is the row of U at the first cycle vertex of the short
    factor, one-dimensional spaces along the staircase, identity maps on the
    staircase arrows and the 1 x l row [lam, 0, ..., 0] on the returning
    cycle arrow; everything else is zero.  Relation checking is re-run and a
    failure raises RelationViolation (a construction bug, never expected).
    """
    t_alg = spec.tensor
    field = t_alg.field
    lam = field(lam)
    if not lam:
        raise ValueError("the family parameter must be nonzero")
    n, m = spec.n, spec.m
    cx, cy = spec.cycle_first, spec.cycle_second
    u = spec.quotient
    x1 = cx.vertex_at(1)

    dims: Dict[str, int] = {}
    mats: Dict[str, Matrix] = {}
    for w in spec.second.quiver.vertices:
        dims[spec.product_vertex(x1, w)] = u.dims[w]
    for a in spec.second.quiver.arrows:
        mats[spec.y_arrow(x1, a.name)] = u.mats[a.name]
    for i in range(n - 1):
        va = spec.product_vertex(cx.vertex_at(n - i), cy.vertex_at(m - n + 2 + i))
        vb = spec.product_vertex(cx.vertex_at(n - i), cy.vertex_at(m - n + 3 + i))
        dims[va] = 1
        dims[vb] = 1
    one = Matrix.identity(field, 1)
    for i in range(n - 1):
        h = spec.x_arrow(cx.arrow_at(n - i), cy.vertex_at(m - n + 2 + i))
        v = spec.y_arrow(cx.vertex_at(n - i), cy.arrow_at(m - n + 2 + i))
        mats[h] = one
        mats[v] = one
    lam_row = Matrix.zero(field, 1, spec.quotient_dim_at_one)
    lam_row.data[0] = lam
    mats[spec.x_arrow(cx.arrow_at(1), cy.vertex_at(1))] = lam_row

    member = Representation(t_alg, dims, mats)
    if not check_relations(member):
        raise RelationViolation("family member violates the tensor relations")
    if member.total_dim != u.total_dim + 2 * (n - 1):
        raise RelationViolation("family member has an unexpected dimension")
    return member


def expected_socle_vertices(spec: FamilySpec) -> dict:
    """The predicted socle: one simple at (n-i, m-n+3+i) for -1 <= i <= n-2."""
    out: Dict[str, int] = {}
    for i in range(-1, spec.n - 1):
        v = spec.product_vertex(spec.cycle_first.vertex_at(spec.n - i),
                                spec.cycle_second.vertex_at(spec.m - spec.n + 3 + i))
        out[v] = out.get(v, 0) + 1
    return out


# -- certificates -----------------------------------------------------------------------

@dataclass
class Certificate:
    """Outcome of a tau-tilting infiniteness check with its evidence."""

    verdict: str                   # "tau-tilting-infinite" | "inconclusive"
    algebra: str
    field: str
    seed: int
    evidence: dict
    warnings: list = dataclass_field(default_factory=list)
    log: list = dataclass_field(default_factory=list)
    members: list = dataclass_field(default_factory=list)  # [(lam, Representation)]

    def report_dict(self) -> dict:
        return {
            "algebra": self.algebra,
            "field": self.field,
            "seed": self.seed,
            "verdict": self.verdict,
            "warnings": list(self.warnings),
            "evidence": self.evidence,
            "log": list(self.log),
        }


def verify_family(spec: FamilySpec, lambdas: Sequence, seed=_DEFAULT_SEED) -> Certificate:
    """Build and check one member per parameter; certify pairwise distinctness.

    Each member must satisfy the relations, be indecomposable, pass the
    socle-based brick criterion and have a one-dimensional endomorphism
    space; every pair with distinct parameters must be non-isomorphic.  Any
    failed check downgrades the verdict to inconclusive and names the check.
    """
    field = spec.tensor.field
    lams = [field(x) for x in lambdas]
    if len(lams) < 2:
        raise ValueError("at least two parameter values are required")
    if len(set(lams)) != len(lams):
        raise ValueError("parameter values must be pairwise distinct")
    if any(not x for x in lams):
        raise ValueError("parameter values must be nonzero")

    log: List[str] = []
    member_reports = []
    members = []
    all_ok = True
    failing = None
    for lam in lams:
        member = build_family_member(spec, lam)
        members.append((lam, member))
        rel_ok = check_relations(member)
        ind = indecomposability(member, seed=seed)
        socle_ok = brick_criterion_socle(member, seed=seed) if ind.indecomposable else False
        brick_ok = is_brick(member)
        checks = {
            "relations": rel_ok,
            "indecomposable": ind.indecomposable,
            "socle_criterion": socle_ok,
            "brick": brick_ok,
            "end_dim": ind.end_dim,
        }
        member_reports.append({"lambda": field.to_str(lam), **checks})
        for name in ("relations", "indecomposable", "socle_criterion", "brick"):
            if not checks[name] and all_ok:
                all_ok = False
                failing = f"{name} failed at lambda={field.to_str(lam)}"
        log.append(f"lambda={field.to_str(lam)}: dims={member.dim_vector()}")

    pairwise = []
    for i in range(len(lams)):
        for j in range(i + 1, len(lams)):
            iso = is_isomorphic(members[i][1], members[j][1], seed=seed)
            pairwise.append({
                "lambda_pair": [field.to_str(lams[i]), field.to_str(lams[j])],
                "isomorphic": iso,
            })
            if iso and all_ok:
                all_ok = False
                failing = (f"members at lambda={field.to_str(lams[i])} and "
                           f"lambda={field.to_str(lams[j])} are isomorphic")

    evidence = {
        "kind": "brick-family",
        "cycle_lengths": [spec.n, spec.m],
        "cycle_first": list(spec.cycle_first.arrows),
        "cycle_second": list(spec.cycle_second.arrows),
        "factors_swapped": spec.swapped,
        "quotient_dim_vector": list(spec.quotient.dim_vector()),
        "quotient_minimality": spec.minimality,
        "members": member_reports,
        "pairwise": pairwise,
    }
    if not all_ok:
        evidence["failure"] = failing
    verdict = "tau-tilting-infinite" if all_ok else "inconclusive"
    return Certificate(verdict, spec.tensor.name or "tensor product", repr(field),
                       seed, evidence, log=log, members=members)


def default_lambdas(field) -> list:
    if field.is_rational:
        return [field(1), field(2), field(3)]
    return [field(x) for x in range(1, min(3, field.p - 1) + 1)]


def certify_tensor(a: BoundAlgebra, b: BoundAlgebra, lambdas=None,
                   seed=_DEFAULT_SEED) -> Certificate:
    """Full pipeline: hypotheses, shortcut, cycles, family, verification.

    Hypothesis violations (disconnected, non-symmetric, local factors) are
    warnings, not errors.  A non-loop multiple arrow in either factor gives
    an immediate positive verdict.  A factor without a usable cycle makes
    the verdict inconclusive with the reason reported in-band.
    """
    field = a.field
    tensor = tensor_product_algebra(a, b)
    label = tensor.name or "tensor product"
    warnings: List[str] = []
    for tag, alg in (("first", a), ("second", b)):
        if not alg.quiver.is_connected():
            warnings.append(f"{tag} factor is not connected")
        if len(alg.quiver.vertices) < 2 and not alg.quiver.arrows:
            warnings.append(f"{tag} factor is semisimple local")
        elif len(alg.quiver.vertices) < 2:
            warnings.append(f"{tag} factor is local")
        try:
            if not is_symmetric(alg, seed=seed):
                warnings.append(f"{tag} factor is not symmetric")
        except Undecided as exc:
            warnings.append(f"{tag} factor symmetry undecided: {exc}")

    for tag, alg in (("first", a), ("second", b)):
        if alg.quiver.has_multiple_arrow():
            q = alg.quiver
            seen = {}
            witness = None
            for ar in q.arrows:
                if ar.is_loop:
                    continue
                key = (ar.source, ar.target)
                if key in seen:
                    witness = [seen[key], ar.name]
                    break
                seen[key] = ar.name
            evidence = {
                "kind": "multiple-arrow",
                "factor": tag,
                "arrows": witness,
            }
            return Certificate("tau-tilting-infinite", label, repr(field), seed,
                               evidence, warnings=warnings,
                               log=[f"multiple arrow in the {tag} factor"])

    cycle_a = find_minimal_nonzero_cycle(a)
    cycle_b = find_minimal_nonzero_cycle(b)
    if cycle_a is None or cycle_b is None:
        which = "first" if cycle_a is None else "second"
        warnings.append(f"{which} factor has no nonzero non-loop cycle")
        evidence = {"kind": "no-cycle", "factor": which}
        return Certificate("inconclusive", label, repr(field), seed, evidence,
                           warnings=warnings,
                           log=["hypotheses of the brick construction are violated"])

    if cycle_a.length <= cycle_b.length:
        first, second, cyc1, cyc2, swapped = a, b, cycle_a, cycle_b, False
    else:
        first, second, cyc1, cyc2, swapped = b, a, cycle_b, cycle_a, True

    if lambdas is None:
        lambdas = default_lambdas(field)
    if len(lambdas) < 2:
        evidence = {
            "kind": "brick-family",
            "failure": "fewer than two usable parameter values over this field",
        }
        cert = Certificate("inconclusive", label, repr(field), seed, evidence,
                           warnings=warnings,
                           log=["need at least two distinct nonzero parameters"])
        return cert

    try:
        spec = plan_family(tensor, first, second, cyc1, cyc2, swapped)
    except NotFound as exc:
        evidence = {"kind": "brick-family", "failure": str(exc)}
        return Certificate("inconclusive", label, repr(field), seed, evidence,
                           warnings=warnings, log=[str(exc)])

    cert = verify_family(spec, lambdas, seed=seed)
    cert.warnings = warnings + cert.warnings
    if not field.is_rational:
        cert.log.append(
            f"finite field: {field.p - 1} distinct members exist over GF({field.p}); "
            "the family is infinite over any infinite field extension")
    return cert
