"""Finite-dimensional representations of a bound quiver algebra.

A representation assigns a dimension to every vertex and a matrix of shape
dim(target) x dim(source) to every arrow.  Path evaluation follows the global
left-to-right convention: the path a1.a2 acts as the matrix product
phi(a2) * phi(a1).
"""

from __future__ import annotations

from typing import Dict, Iterable, Sequence

from .algebra import BoundAlgebra
from .errors import ShapeMismatch
from .linalg import Matrix, complete_to_basis, solve_matrix
from .quiver import Path


class Representation:
    """Vertex dimensions plus one exact matrix per arrow."""

    __slots__ = ("algebra", "dims", "mats")

    def __init__(self, algebra: BoundAlgebra, dims: Dict[str, int],
                 mats: Dict[str, Matrix] | None = None):
        q = algebra.quiver
        self.algebra = algebra
        self.dims = {v: int(dims.get(v, 0)) for v in q.vertices}
        for v, d in self.dims.items():
            if d < 0:
                raise ShapeMismatch(f"negative dimension at vertex {v}")
        self.mats = {}
        mats = mats or {}
        for a in q.arrows:
            m = mats.get(a.name)
            rows, cols = self.dims[a.target], self.dims[a.source]
            if m is None:
                m = Matrix.zero(algebra.field, rows, cols)
            elif m.rows != rows or m.cols != cols:
                raise ShapeMismatch(
                    f"arrow {a.name}: matrix is {m.rows}x{m.cols}, expected {rows}x{cols}"
                )
            self.mats[a.name] = m

    # -- basic queries ------------------------------------------------------

    @property
    def total_dim(self) -> int:
        return sum(self.dims.values())

    def dim_vector(self) -> tuple:
        return tuple(self.dims[v] for v in self.algebra.quiver.vertices)

    def support(self) -> frozenset:
        return frozenset(v for v, d in self.dims.items() if d > 0)

    def is_zero(self) -> bool:
        return self.total_dim == 0

    def evaluate_path(self, path: Path) -> Matrix:
        """Matrix of a path: identity for trivial paths, reversed product else."""
        if path.is_trivial:
            return Matrix.identity(self.algebra.field, self.dims[path.source])
        out = None
        for name in path.arrows:
            m = self.mats[name]
            out = m if out is None else m * out
        return out

    def __eq__(self, other):
        return (isinstance(other, Representation)
                and self.algebra is other.algebra
                and self.dims == other.dims
                and self.mats == other.mats)

    def __hash__(self):
        return hash((id(self.algebra), tuple(sorted(self.dims.items()))))

    def __repr__(self):
        return f"Representation(dim={self.dim_vector()})"


def zero_rep(algebra: BoundAlgebra) -> Representation:
    return Representation(algebra, {})


def simple_rep(algebra: BoundAlgebra, vertex: str) -> Representation:
    """The simple at ``vertex``: one-dimensional there, zero elsewhere."""
    if vertex not in algebra.quiver.vertex_index:
        raise ValueError(f"unknown vertex {vertex}")
    return Representation(algebra, {vertex: 1})


def check_relations(rep: Representation) -> bool:
    """True iff every defining relation evaluates to the zero matrix."""
    f = rep.algebra.field
    for r in rep.algebra.relations:
        rows = rep.dims[r.target]
        cols = rep.dims[r.source]
        if rows == 0 or cols == 0:
            continue
        total = Matrix.zero(f, rows, cols)
        for c, p in r.terms:
            total = total + rep.evaluate_path(p).scale(c)
        if not total.is_zero():
            return False
    return True


class Morphism:
    """A vertex-indexed matrix family intertwining the arrow actions."""

    __slots__ = ("source", "target", "mats")

    def __init__(self, source: Representation, target: Representation,
                 mats: Dict[str, Matrix]):
        self.source = source
        self.target = target
        self.mats = {}
        for v in source.algebra.quiver.vertices:
            m = mats.get(v)
            rows, cols = target.dims[v], source.dims[v]
            if m is None:
                m = Matrix.zero(source.algebra.field, rows, cols)
            elif m.rows != rows or m.cols != cols:
                raise ShapeMismatch(f"vertex {v}: block is {m.rows}x{m.cols}, "
                                    f"expected {rows}x{cols}")
            self.mats[v] = m

    def compose(self, other: "Morphism") -> "Morphism":
        """self after other."""
        if other.target is not self.source:
            raise ShapeMismatch("morphisms do not compose")
        return Morphism(other.source, self.target,
                        {v: self.mats[v] * other.mats[v] for v in self.mats})

    def __add__(self, other: "Morphism") -> "Morphism":
        return Morphism(self.source, self.target,
                        {v: self.mats[v] + other.mats[v] for v in self.mats})

    def __sub__(self, other: "Morphism") -> "Morphism":
        return Morphism(self.source, self.target,
                        {v: self.mats[v] - other.mats[v] for v in self.mats})

    def scale(self, c) -> "Morphism":
        return Morphism(self.source, self.target,
                        {v: self.mats[v].scale(c) for v in self.mats})

    def is_zero(self) -> bool:
        return all(m.is_zero() for m in self.mats.values())

    def flatten(self) -> tuple:
        """All entries in vertex order; coordinates for spaces of morphisms."""
        out = []
        for v in self.source.algebra.quiver.vertices:
            out.extend(self.mats[v].data)
        return tuple(out)

    def is_valid(self) -> bool:
        for a in self.source.algebra.quiver.arrows:
            lhs = self.mats[a.target] * self.source.mats[a.name]
            rhs = self.target.mats[a.name] * self.mats[a.source]
            if lhs != rhs:
                return False
        return True

    def __repr__(self):
        return f"Morphism({self.source!r} -> {self.target!r})"


def identity_morphism(m: Representation) -> Morphism:
    f = m.algebra.field
    return Morphism(m, m, {v: Matrix.identity(f, m.dims[v]) for v in m.dims})


def morphism_from_flat(source: Representation, target: Representation,
                       flat: Sequence) -> Morphism:
    mats = {}
    pos = 0
    f = source.algebra.field
    for v in source.algebra.quiver.vertices:
        rows, cols = target.dims[v], source.dims[v]
        n = rows * cols
        mats[v] = Matrix(f, rows, cols, list(flat[pos:pos + n]))
        pos += n
    return Morphism(source, target, mats)


def hom_basis(m: Representation, n: Representation) -> list:
    """Basis of Hom(m, n): kernel of the intertwining linear system.

    Unknowns are all entries of all vertex blocks; one block equation per
    arrow.  The basis order is the deterministic kernel order.
    """
    if m.algebra is not n.algebra:
        raise ValueError("representations over different algebras")
    q = m.algebra.quiver
    field = m.algebra.field
    offsets = {}
    pos = 0
    for v in q.vertices:
        offsets[v] = pos
        pos += n.dims[v] * m.dims[v]
    nvars = pos
    if nvars == 0:
        return []
    rows = []
    zero = field.zero
    for a in q.arrows:
        s, t = a.source, a.target
        phi_m = m.mats[a.name]   # m.dims[t] x m.dims[s]
        phi_n = n.mats[a.name]   # n.dims[t] x n.dims[s]
        dmt, dms = m.dims[t], m.dims[s]
        dnt, dns = n.dims[t], n.dims[s]
        if dnt * dms == 0:
            continue
        # equation block: f_t * phi_m - phi_n * f_s = 0, entry (i, k)
        for i in range(dnt):
            for k in range(dms):
                row = [zero] * nvars
                base_t = offsets[t]
                for j in range(dmt):
                    c = phi_m[j, k]
                    if c:
                        row[base_t + i * dmt + j] = field.add(row[base_t + i * dmt + j], c)
                base_s = offsets[s]
                for j in range(dns):
                    c = phi_n[i, j]
                    if c:
                        row[base_s + j * dms + k] = field.sub(row[base_s + j * dms + k], c)
                if any(row):
                    rows.append(row)
    if not rows:
        kernel = [tuple(field.one if i == j else zero for i in range(nvars))
                  for j in range(nvars)]
    else:
        kernel = Matrix.from_rows(field, rows).kernel_basis()
    return [morphism_from_flat(m, n, vec) for vec in kernel]


def hom_dim(m: Representation, n: Representation) -> int:
    return len(hom_basis(m, n))


# -- sub/quotient machinery ---------------------------------------------------

def sub_representation(m: Representation, subspaces: Dict[str, Matrix]):
    """Subrepresentation spanned by the given independent columns per vertex.

    Returns ``(sub, inclusion)``.  The span must be arrow-invariant; a
    failure to express an image in the subspace raises ``ShapeMismatch``.
    """
    alg = m.algebra
    field = alg.field
    bases = {}
    for v in alg.quiver.vertices:
        b = subspaces.get(v)
        if b is None:
            b = Matrix.zero(field, m.dims[v], 0)
        bases[v] = b
    dims = {v: bases[v].cols for v in bases}
    mats = {}
    for a in alg.quiver.arrows:
        bs, bt = bases[a.source], bases[a.target]
        if bs.cols == 0 or bt.cols == 0:
            mats[a.name] = Matrix.zero(field, bt.cols, bs.cols)
            continue
        mapped = m.mats[a.name] * bs
        sol = solve_matrix(bt, mapped)
        if sol is None:
            raise ShapeMismatch(f"subspace not invariant under arrow {a.name}")
        mats[a.name] = sol
    sub = Representation(alg, dims, mats)
    incl = Morphism(sub, m, {v: bases[v] for v in bases})
    return sub, incl


def quotient_rep(m: Representation, subspaces: Dict[str, Matrix]):
    """Quotient by an invariant subspace; returns ``(quotient, projection)``."""
    alg = m.algebra
    field = alg.field
    proj = {}
    section = {}
    for v in alg.quiver.vertices:
        d = m.dims[v]
        b = subspaces.get(v)
        if b is None:
            b = Matrix.zero(field, d, 0)
        comp = complete_to_basis(b)
        k = b.cols
        t_cols = b.columns() + [
            tuple(field.one if i == j else field.zero for i in range(d)) for j in comp
        ]
        if d:
            t = Matrix.from_columns(field, t_cols)
            t_inv = invert(t)
            pr = Matrix(field, d - k, d, t_inv.data[k * d:])
        else:
            pr = Matrix.zero(field, 0, 0)
        proj[v] = pr
        sec_cols = [tuple(field.one if i == j else field.zero for i in range(d)) for j in comp]
        section[v] = (Matrix.from_columns(field, sec_cols)
                      if sec_cols else Matrix.zero(field, d, 0))
    dims = {v: proj[v].rows for v in proj}
    mats = {}
    for a in alg.quiver.arrows:
        mats[a.name] = proj[a.target] * m.mats[a.name] * section[a.source]
    quot = Representation(alg, dims, mats)
    pr_morph = Morphism(m, quot, proj)
    return quot, pr_morph


def invert(m: Matrix) -> Matrix:
    if m.rows != m.cols:
        raise ShapeMismatch("only square matrices invert")
    aug = Matrix.hstack([m, Matrix.identity(m.field, m.rows)])
    r, rank, _ = aug.rref()
    if rank < m.rows:
        raise ShapeMismatch("singular matrix")
    return Matrix(m.field, m.rows, m.rows,
                  [r[i, j + m.cols] for i in range(m.rows) for j in range(m.rows)])


def image_subspaces(f: Morphism) -> Dict[str, Matrix]:
    """Deterministic column-space basis of a morphism, per vertex."""
    out = {}
    for v, m in f.mats.items():
        pivots = m.column_space_pivots()
        out[v] = m.submatrix_columns(pivots)
    return out


def kernel_subspaces(f: Morphism) -> Dict[str, Matrix]:
    out = {}
    field = f.source.algebra.field
    for v, m in f.mats.items():
        vecs = m.kernel_basis()
        out[v] = (Matrix.from_columns(field, vecs) if vecs
                  else Matrix.zero(field, m.cols, 0))
    return out


def kernel_rep(f: Morphism):
    return sub_representation(f.source, kernel_subspaces(f))


def image_rep(f: Morphism):
    return sub_representation(f.target, image_subspaces(f))


def cokernel_rep(f: Morphism):
    return quotient_rep(f.target, image_subspaces(f))


# -- socle, radical, top -----------------------------------------------------------

def socle(m: Representation):
    """Largest semisimple subrepresentation: the annihilator of the arrow ideal.

    At each vertex this is the joint kernel of all outgoing arrow matrices
    (loops included).  Returns ``(socle, inclusion)``.
    """
    alg = m.algebra
    field = alg.field
    spaces = {}
    for v in alg.quiver.vertices:
        outgoing = [m.mats[a.name] for a in alg.quiver.out_arrows[v]
                    if m.dims[a.target] > 0]
        d = m.dims[v]
        if not outgoing or d == 0:
            spaces[v] = Matrix.identity(field, d)
            continue
        stacked = Matrix.vstack(outgoing)
        vecs = stacked.kernel_basis()
        spaces[v] = (Matrix.from_columns(field, vecs) if vecs
                     else Matrix.zero(field, d, 0))
    return sub_representation(m, spaces)


def radical(m: Representation):
    """The subrepresentation rad(A) . M: images of all incoming arrows."""
    alg = m.algebra
    field = alg.field
    spaces = {}
    for v in alg.quiver.vertices:
        incoming = [m.mats[a.name] for a in alg.quiver.in_arrows[v]
                    if m.dims[a.source] > 0]
        d = m.dims[v]
        if not incoming or d == 0:
            spaces[v] = Matrix.zero(field, d, 0)
            continue
        stacked = Matrix.hstack(incoming)
        pivots = stacked.column_space_pivots()
        spaces[v] = stacked.submatrix_columns(pivots)
    return sub_representation(m, spaces)


def top(m: Representation):
    """The largest semisimple quotient M / rad M, with its projection."""
    _, incl = radical(m)
    return quotient_rep(m, {v: incl.mats[v] for v in incl.mats})


def composition_factors(m: Representation) -> dict:
    """Multiset of simple factors: multiplicity at v equals dim M_v."""
    return {v: d for v, d in m.dims.items() if d > 0}


# -- direct sums --------------------------------------------------------------------

def direct_sum(reps: Sequence[Representation]) -> Representation:
    return direct_sum_with_maps(reps)[0]


def direct_sum_with_maps(reps: Sequence[Representation]):
    """Block-diagonal sum plus the canonical inclusions and projections."""
    if not reps:
        raise ValueError("direct sum of an empty list needs an algebra; use zero_rep")
    alg = reps[0].algebra
    for r in reps:
        if r.algebra is not alg:
            raise ValueError("summands over different algebras")
    field = alg.field
    dims = {v: sum(r.dims[v] for r in reps) for v in alg.quiver.vertices}
    mats = {}
    for a in alg.quiver.arrows:
        rows, cols = dims[a.target], dims[a.source]
        m = Matrix.zero(field, rows, cols)
        ro = co = 0
        for r in reps:
            block = r.mats[a.name]
            for i in range(block.rows):
                for j in range(block.cols):
                    val = block[i, j]
                    if val:
                        m.data[(ro + i) * cols + (co + j)] = val
            ro += r.dims[a.target]
            co += r.dims[a.source]
        mats[a.name] = m
    total = Representation(alg, dims, mats)
    incls, projs = [], []
    offset = {v: 0 for v in alg.quiver.vertices}
    for r in reps:
        imats, pmats = {}, {}
        for v in alg.quiver.vertices:
            inc = Matrix.zero(field, dims[v], r.dims[v])
            prj = Matrix.zero(field, r.dims[v], dims[v])
            for j in range(r.dims[v]):
                inc.data[(offset[v] + j) * r.dims[v] + j] = field.one
                prj.data[j * dims[v] + offset[v] + j] = field.one
            imats[v] = inc
            pmats[v] = prj
        incls.append(Morphism(r, total, imats))
        projs.append(Morphism(total, r, pmats))
        for v in alg.quiver.vertices:
            offset[v] += r.dims[v]
    return total, incls, projs


def change_basis(m: Representation, transforms: Dict[str, Matrix]):
    """Conjugate by invertible vertex transforms; returns (rep, iso old->new).

    ``transforms[v]`` expresses the new basis vectors as columns in the old
    coordinates.
    """
    alg = m.algebra
    t = {}
    t_inv = {}
    for v in alg.quiver.vertices:
        tv = transforms.get(v)
        if tv is None:
            tv = Matrix.identity(alg.field, m.dims[v])
        t[v] = tv
        t_inv[v] = invert(tv)
    mats = {a.name: t_inv[a.target] * m.mats[a.name] * t[a.source]
            for a in alg.quiver.arrows}
    new = Representation(alg, dict(m.dims), mats)
    iso = Morphism(m, new, t_inv)
    return new, iso


def restrict_rep(m: Representation, sub_algebra: BoundAlgebra) -> Representation:
    """View a representation supported inside a vertex subset over the quotient."""
    keep = set(sub_algebra.quiver.vertices)
    for v, d in m.dims.items():
        if d and v not in keep:
            raise ValueError(f"support leaks outside the restricted algebra at {v}")
    dims = {v: m.dims[v] for v in sub_algebra.quiver.vertices}
    mats = {a.name: m.mats[a.name] for a in sub_algebra.quiver.arrows}
    return Representation(sub_algebra, dims, mats)


def extend_rep(m: Representation, algebra: BoundAlgebra) -> Representation:
    """Extend by zero from a vertex-subset quotient back to the full algebra."""
    dims = {v: m.dims.get(v, 0) for v in algebra.quiver.vertices}
    mats = {}
    for a in algebra.quiver.arrows:
        if a.name in m.mats:
            mats[a.name] = m.mats[a.name]
    return Representation(algebra, dims, mats)
