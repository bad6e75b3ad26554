"""Bound quiver algebras kQ/I with an explicit nilpotency bound.

The path basis is found degree by degree: all paths up to the bound are
enumerated, the relation generators are closed under pre- and
post-composition by paths, and the resulting span is echelonized (sparse,
longest paths eliminated first).  Membership in the ideal is decided against
that span rather than by Groebner machinery, which is plenty at the scales
this toolkit targets but grows exponentially with the bound.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import NotAdmissible, Undecided
from .linalg import FieldSpec, Matrix
from .quiver import Cycle, Path, Quiver, Relation


# -- sparse echelon helpers (coordinates are path indices, largest first) ----

def _reduce_vec(vec: dict, ech: dict, field) -> dict:
    """Fully reduce ``vec`` against the echelon; returns the normal form."""
    vec = dict(vec)
    out = {}
    sub, mul, zero = field.sub, field.mul, field.zero
    while vec:
        m = max(vec)
        c = vec.pop(m)
        if not c:
            continue
        e = ech.get(m)
        if e is None:
            out[m] = c
            continue
        for k, cv in e.items():
            if k == m:
                continue
            nv = sub(vec.get(k, zero), mul(c, cv))
            if nv:
                vec[k] = nv
            elif k in vec:
                del vec[k]
    return out


def _ech_insert(ech: dict, vec: dict, field):
    r = _reduce_vec(vec, ech, field)
    if not r:
        return None
    m = max(r)
    inv = field.inv(r[m])
    ech[m] = {k: field.mul(v, inv) for k, v in r.items()}
    return m


class BoundAlgebra:
    """A finite-dimensional algebra presented by a bound quiver.

    Immutable after construction (internal caches aside); queries are pure.
    """

    def __init__(self, quiver: Quiver, relations, field: FieldSpec, bound: int,
                 basis, index, echelon, name=None):
        self.quiver = quiver
        self.relations = tuple(relations)
        self.field = field
        self.bound = bound
        self.basis = tuple(basis)          # Paths, sorted by (length, enumeration order)
        self.name = name
        self._index = index                # path key -> global path index
        self._ech = echelon                # final ideal echelon over path indices
        self._basis_pos = {}               # global path index -> basis position
        for pos, p in enumerate(self.basis):
            self._basis_pos[index[p.key]] = pos
        self._nf_cache = {}
        self._prod_cache = {}
        self._from_cache = {}
        self._op = None
        self._restrictions = {}
        self._proj_cache = {}
        self._inj_cache = {}

    # -- basic data -----------------------------------------------------------

    @property
    def dim(self) -> int:
        return len(self.basis)

    def basis_paths_from(self, v: str):
        """(basis position, path) pairs for basis paths with source ``v``."""
        key = ("from", v)
        if key not in self._from_cache:
            self._from_cache[key] = tuple(
                (i, p) for i, p in enumerate(self.basis) if p.source == v
            )
        return self._from_cache[key]

    def basis_paths_into(self, v: str):
        key = ("into", v)
        if key not in self._from_cache:
            self._from_cache[key] = tuple(
                (i, p) for i, p in enumerate(self.basis) if p.target == v
            )
        return self._from_cache[key]

    def basis_paths_between(self, v: str, w: str):
        key = ("between", v, w)
        if key not in self._from_cache:
            self._from_cache[key] = tuple(
                (i, p) for i, p in enumerate(self.basis)
                if p.source == v and p.target == w
            )
        return self._from_cache[key]

    def dimension_pairs(self) -> dict:
        """dim e_v A e_w for every vertex pair, from the path basis."""
        out = {}
        for p in self.basis:
            key = (p.source, p.target)
            out[key] = out.get(key, 0) + 1
        return out

    # -- reduction and products -------------------------------------------------

    def path_normal_form(self, path: Path) -> dict:
        """Coordinates of a path in the basis, as {basis position: coeff}."""
        if path.length >= self.bound:
            return {}
        key = path.key
        cached = self._nf_cache.get(key)
        if cached is not None:
            return cached
        idx = self._index.get(key)
        if idx is None:
            raise ValueError(f"path {path} does not belong to this algebra's quiver")
        red = _reduce_vec({idx: self.field.one}, self._ech, self.field)
        nf = {self._basis_pos[i]: c for i, c in red.items()}
        self._nf_cache[key] = nf
        return nf

    def path_is_zero(self, path: Path) -> bool:
        if path.length >= self.bound:
            return True
        return not self.path_normal_form(path)

    def product_basis(self, i: int, j: int) -> dict:
        """Structure constants: basis[i] * basis[j] as {basis position: coeff}."""
        key = (i, j)
        cached = self._prod_cache.get(key)
        if cached is not None:
            return cached
        p, q = self.basis[i], self.basis[j]
        if p.target != q.source or p.length + q.length >= self.bound:
            out = {}
        else:
            out = self.path_normal_form(p.concat(q))
        self._prod_cache[key] = out
        return out

    def multiplication_table(self) -> dict:
        """Materialized structure constant table {(i, j): {k: coeff}}."""
        d = self.dim
        return {(i, j): self.product_basis(i, j) for i in range(d) for j in range(d)}

    # -- elements ----------------------------------------------------------------

    def zero_element(self) -> "AlgebraElement":
        return AlgebraElement(self, (self.field.zero,) * self.dim)

    def basis_element(self, i: int) -> "AlgebraElement":
        coeffs = [self.field.zero] * self.dim
        coeffs[i] = self.field.one
        return AlgebraElement(self, tuple(coeffs))

    def element_from_path(self, path: Path) -> "AlgebraElement":
        coeffs = [self.field.zero] * self.dim
        for k, c in self.path_normal_form(path).items():
            coeffs[k] = c
        return AlgebraElement(self, tuple(coeffs))

    def one(self) -> "AlgebraElement":
        coeffs = [self.field.zero] * self.dim
        for i, p in enumerate(self.basis):
            if p.is_trivial:
                coeffs[i] = self.field.one
        return AlgebraElement(self, tuple(coeffs))

    def idempotent(self, v: str) -> "AlgebraElement":
        return self.element_from_path(self.quiver.trivial_path(v))

    # -- identity ------------------------------------------------------------------

    def _signature(self):
        rels = []
        for r in self.relations:
            rels.append(tuple(sorted(((p.key, c) for c, p in r.terms))))
        return (self.quiver.vertices, self.quiver.arrows, self.field,
                self.bound, tuple(sorted(rels)))

    def __eq__(self, other):
        return isinstance(other, BoundAlgebra) and self._signature() == other._signature()

    def __hash__(self):
        return hash(self._signature())

    def __repr__(self):
        label = self.name or "algebra"
        return f"BoundAlgebra({label}, dim={self.dim}, over {self.field})"


class AlgebraElement:
    """An element of a bound quiver algebra in path-basis coordinates."""

    __slots__ = ("algebra", "coeffs")

    def __init__(self, algebra: BoundAlgebra, coeffs: tuple):
        self.algebra = algebra
        self.coeffs = coeffs

    def __add__(self, other):
        f = self.algebra.field
        return AlgebraElement(self.algebra,
                              tuple(f.add(a, b) for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        f = self.algebra.field
        return AlgebraElement(self.algebra,
                              tuple(f.sub(a, b) for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        f = self.algebra.field
        return AlgebraElement(self.algebra, tuple(f.neg(a) for a in self.coeffs))

    def scale(self, c):
        f = self.algebra.field
        c = f(c)
        return AlgebraElement(self.algebra, tuple(f.mul(c, a) for a in self.coeffs))

    def __mul__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return multiply(self, other)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __eq__(self, other):
        return (isinstance(other, AlgebraElement)
                and self.algebra is other.algebra and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        terms = [f"{c}*{self.algebra.basis[i]}" for i, c in enumerate(self.coeffs) if c]
        return " + ".join(terms) if terms else "0"


def multiply(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    """Product in the path basis via structure constants."""
    if a.algebra is not b.algebra:
        raise ValueError("elements of different algebras")
    alg = a.algebra
    f = alg.field
    out = [f.zero] * alg.dim
    for i, ca in enumerate(a.coeffs):
        if not ca:
            continue
        for j, cb in enumerate(b.coeffs):
            if not cb:
                continue
            cab = f.mul(ca, cb)
            for k, c in alg.product_basis(i, j).items():
                out[k] = f.add(out[k], f.mul(cab, c))
    return AlgebraElement(alg, tuple(out))


# -- construction ------------------------------------------------------------------

def build_algebra(quiver: Quiver, relations: Iterable[Relation], field: FieldSpec,
                  bound: int, name=None) -> BoundAlgebra:
    """Compute the path basis of kQ/I inside the stated nilpotency bound.

    Raises :class:`NotAdmissible` when some path of length ``bound`` is not in
    the ideal span, i.e. the algebra is not visibly finite within the bound.
    """
    if bound < 1:
        raise ValueError("bound must be >= 1")
    relations = tuple(relations)
    for r in relations:
        if r.min_length < 2:
            raise ValueError(f"relation {r} has a term of length < 2; the ideal "
                             "must sit inside the square of the arrow ideal")
        for _, p in r.terms:
            quiver.path(p.arrows, source=p.source)  # validates membership

    paths = []
    index = {}
    by_len = []
    level = [quiver.trivial_path(v) for v in quiver.vertices]
    for length in range(bound + 1):
        if length:
            nxt = []
            for p in by_len[length - 1]:
                for a in quiver.out_arrows[p.target]:
                    nxt.append(Path(p.source, p.arrows + (a.name,), a.target))
            level = nxt
        by_len.append(level)
        for p in level:
            index[p.key] = len(paths)
            paths.append(p)

    ends_at = {v: [] for v in quiver.vertices}
    starts_at = {v: [] for v in quiver.vertices}
    for p in paths:
        ends_at[p.target].append(p)
        starts_at[p.source].append(p)

    def closures(length_cap_key):
        """Yield closure vectors u*r*v; the cap is on max or min term length."""
        for r in relations:
            cap = bound - (r.max_length if length_cap_key == "max" else r.min_length)
            for u in ends_at[r.source]:
                lu = u.length
                if lu > cap:
                    continue
                for v in starts_at[r.target]:
                    if lu + v.length > cap:
                        continue
                    vec = {}
                    for c, p in r.terms:
                        total = lu + p.length + v.length
                        if total > bound:
                            continue  # dies in the bound-truncation (pass 2 only)
                        idx = index[(u.source, u.arrows + p.arrows + v.arrows)]
                        nv = field.add(vec.get(idx, field.zero), c)
                        if nv:
                            vec[idx] = nv
                        elif idx in vec:
                            del vec[idx]
                    if vec:
                        yield vec

    # pass 1: products whose every term stays within the bound; this span is
    # honestly inside the ideal, so it can certify that length-N paths vanish.
    ech = {}
    for vec in closures("max"):
        _ech_insert(ech, vec, field)
    one = field.one
    for p in by_len[bound]:
        if _reduce_vec({index[p.key]: one}, ech, field):
            raise NotAdmissible(p, bound)

    # pass 2: with J^bound inside the ideal established, truncation past the
    # bound is exact; rebuild the span including truncated products.
    ech = {}
    for vec in closures("min"):
        _ech_insert(ech, vec, field)

    basis = [p for p in paths if p.length < bound and index[p.key] not in ech]
    return BoundAlgebra(quiver, relations, field, bound, basis, index, ech, name=name)


# -- structural operations ----------------------------------------------------------

def has_multiple_arrow(quiver: Quiver) -> bool:
    return quiver.has_multiple_arrow()


def is_connected(quiver: Quiver) -> bool:
    return quiver.is_connected()


def find_minimal_nonzero_cycle(algebra: BoundAlgebra) -> Cycle | None:
    """Shortest vertex-simple non-loop cycle with nonzero composite.

    Ties are broken lexicographically by (base vertex id, arrow id sequence);
    loops are never part of a candidate since revisits are forbidden.
    """
    q = algebra.quiver
    max_len = min(len(q.vertices), algebra.bound - 1)

    def extend(base, current, arrows_so_far, visited, length):
        for a in sorted(q.out_arrows[current], key=lambda a: a.name):
            if len(arrows_so_far) + 1 == length:
                if a.target == base:
                    yield arrows_so_far + (a.name,)
            elif a.target != base and a.target not in visited:
                yield from extend(base, a.target, arrows_so_far + (a.name,),
                                  visited | {a.target}, length)

    for length in range(2, max_len + 1):
        for base in sorted(q.vertices):
            for arrow_names in extend(base, base, (), {base}, length):
                path = q.path(arrow_names)
                if not algebra.path_is_zero(path):
                    verts = q.path_vertices(path)[:-1]
                    return Cycle(tuple(arrow_names), tuple(verts))
    return None


def opposite_algebra(algebra: BoundAlgebra) -> BoundAlgebra:
    """The opposite algebra: arrows reversed, relation paths reversed."""
    if algebra._op is not None:
        return algebra._op
    q = algebra.quiver
    op_quiver = Quiver(q.vertices, [(a.name, a.target, a.source) for a in q.arrows])
    op_rels = []
    for r in algebra.relations:
        op_rels.append(Relation(
            (c, Path(p.target, tuple(reversed(p.arrows)), p.source)) for c, p in r.terms
        ))
    op = build_algebra(op_quiver, op_rels, algebra.field, algebra.bound,
                       name=f"({algebra.name})^op" if algebra.name else None)
    algebra._op = op
    op._op = algebra
    return op


def restrict_algebra(algebra: BoundAlgebra, keep: Iterable[str]) -> BoundAlgebra:
    """Quotient by the idempotents outside ``keep`` (kill those vertices)."""
    keep = frozenset(keep)
    cached = algebra._restrictions.get(keep)
    if cached is not None:
        return cached
    q = algebra.quiver
    vertices = [v for v in q.vertices if v in keep]
    arrows = [(a.name, a.source, a.target) for a in q.arrows
              if a.source in keep and a.target in keep]
    sub = Quiver(vertices, arrows)
    rels = []
    for r in algebra.relations:
        terms = [(c, p) for c, p in r.terms
                 if all(v in keep for v in q.path_vertices(p))]
        if terms:
            rels.append(Relation(terms))
    out = build_algebra(sub, rels, algebra.field, algebra.bound)
    algebra._restrictions[keep] = out
    return out


# -- symmetry test ---------------------------------------------------------------

def _functional_space(algebra: BoundAlgebra):
    """Basis of linear functionals vanishing on all commutators ab - ba."""
    d = algebra.dim
    field = algebra.field
    ech = {}
    for i in range(d):
        for j in range(i + 1, d):
            pij = algebra.product_basis(i, j)
            pji = algebra.product_basis(j, i)
            vec = dict(pij)
            for k, c in pji.items():
                nv = field.sub(vec.get(k, field.zero), c)
                if nv:
                    vec[k] = nv
                elif k in vec:
                    del vec[k]
            if vec:
                _ech_insert(ech, vec, field)
    rows = []
    for pivot, v in sorted(ech.items()):
        row = [field.zero] * d
        for k, c in v.items():
            row[k] = c
        rows.append(row)
    if not rows:
        return [tuple(Matrix.identity(field, d).row(i)) for i in range(d)]
    return Matrix.from_rows(field, rows).kernel_basis()


def _gram_matrix(algebra: BoundAlgebra, functional) -> Matrix:
    d = algebra.dim
    field = algebra.field
    g = Matrix.zero(field, d, d)
    for i in range(d):
        for j in range(d):
            s = field.zero
            for k, c in algebra.product_basis(i, j).items():
                w = functional[k]
                if w:
                    s = field.add(s, field.mul(w, c))
            g.data[i * d + j] = s
    return g


def is_symmetric(algebra: BoundAlgebra, seed: int = 0, sample_budget: int = 40,
                 symbolic_dim_limit: int = 24, exhaustive_budget: int = 50000) -> bool:
    """Whether the algebra carries a nondegenerate symmetric associative form.

    Looks for a functional vanishing on commutators whose induced bilinear
    form (a, b) -> f(ab) is nondegenerate.  Deterministic witnesses are tried
    first; over the rationals a symbolic determinant settles the question for
    small dimensions, over a prime field the functional space is exhausted
    when small.  Raises :class:`Undecided` past those budgets.
    """
    functionals = _functional_space(algebra)
    s = len(functionals)
    d = algebra.dim
    field = algebra.field
    if s == 0:
        return False

    grams = [_gram_matrix(algebra, w) for w in functionals]

    def combined(coeffs) -> Matrix:
        total = Matrix.zero(field, d, d)
        for c, g in zip(coeffs, grams):
            if c:
                total = total + g.scale(c)
        return total

    rng = random.Random(seed)
    candidates = [tuple([field.one] * s)]
    for t in range(s):
        unit = [field.zero] * s
        unit[t] = field.one
        candidates.append(tuple(unit))
    for _ in range(sample_budget):
        candidates.append(tuple(field(rng.randrange(1, 4 * d + 4)) for _ in range(s)))
    seen = set()
    for coeffs in candidates:
        if coeffs in seen or not any(coeffs):
            continue
        seen.add(coeffs)
        if combined(coeffs).rank() == d:
            return True

    if field.is_rational:
        if d <= symbolic_dim_limit:
            import sympy

            ts = sympy.symbols(f"t0:{s}")
            entries = []
            for i in range(d):
                for j in range(d):
                    e = 0
                    for t in range(s):
                        c = grams[t][i, j]
                        if c:
                            e = e + sympy.Rational(c.numerator, c.denominator) * ts[t]
                    entries.append(e)
            det = sympy.Matrix(d, d, entries).det(method="berkowitz")
            return sympy.simplify(det) != 0
        raise Undecided(
            f"symmetry of a {d}-dimensional rational algebra exceeds the symbolic budget"
        )

    p = field.p
    if p is not None and p ** s <= exhaustive_budget:
        import itertools

        for coeffs in itertools.product(range(p), repeat=s):
            if not any(coeffs):
                continue
            if combined(coeffs).rank() == d:
                return True
        return False
    raise Undecided(
        f"symmetry over GF({p}) with a {s}-dimensional functional space exceeds the sample budget"
    )
