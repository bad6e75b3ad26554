"""Tensor products of bound quiver algebras.

The product quiver has vertex set (Q_A)_0 x (Q_B)_0; its arrows are the
horizontal lifts (one per A-arrow and B-vertex) and vertical lifts (one per
A-vertex and B-arrow).  The defining relations are the lifted relations of
both factors plus one commutativity square per arrow pair.  Identifier pairs
are rendered as "(a,b)" so downstream fixtures stay stable.
"""

from __future__ import annotations

from .algebra import BoundAlgebra, build_algebra
from .errors import FieldMismatch
from .quiver import Path, Quiver, Relation


def tensor_vertex(a: str, b: str) -> str:
    return f"({a},{b})"


def horizontal_arrow(alpha: str, b: str) -> str:
    return f"({alpha},{b})"


def vertical_arrow(a: str, beta: str) -> str:
    return f"({a},{beta})"


def lift_path_horizontal(p: Path, b_vertex: str) -> Path:
    """Lift an A-path arrow by arrow at a fixed B-vertex column."""
    return Path(
        tensor_vertex(p.source, b_vertex),
        tuple(horizontal_arrow(a, b_vertex) for a in p.arrows),
        tensor_vertex(p.target, b_vertex),
    )


def lift_path_vertical(p: Path, a_vertex: str) -> Path:
    """Lift a B-path arrow by arrow at a fixed A-vertex row."""
    return Path(
        tensor_vertex(a_vertex, p.source),
        tuple(vertical_arrow(a_vertex, b) for b in p.arrows),
        tensor_vertex(a_vertex, p.target),
    )


def tensor_quiver(qa: Quiver, qb: Quiver) -> Quiver:
    vertices = [tensor_vertex(a, b) for a in qa.vertices for b in qb.vertices]
    arrows = []
    for alpha in qa.arrows:
        for b in qb.vertices:
            arrows.append((horizontal_arrow(alpha.name, b),
                           tensor_vertex(alpha.source, b),
                           tensor_vertex(alpha.target, b)))
    for a in qa.vertices:
        for beta in qb.arrows:
            arrows.append((vertical_arrow(a, beta.name),
                           tensor_vertex(a, beta.source),
                           tensor_vertex(a, beta.target)))
    return Quiver(vertices, arrows)


def commutativity_relations(qa: Quiver, qb: Quiver) -> list:
    """One generator (alpha,s(beta))(t(alpha),beta) - (s(alpha),beta)(alpha,t(beta)) per arrow pair."""
    rels = []
    for alpha in qa.arrows:
        for beta in qb.arrows:
            first = Path(
                tensor_vertex(alpha.source, beta.source),
                (horizontal_arrow(alpha.name, beta.source),
                 vertical_arrow(alpha.target, beta.name)),
                tensor_vertex(alpha.target, beta.target),
            )
            second = Path(
                tensor_vertex(alpha.source, beta.source),
                (vertical_arrow(alpha.source, beta.name),
                 horizontal_arrow(alpha.name, beta.target)),
                tensor_vertex(alpha.target, beta.target),
            )
            rels.append(Relation([(1, first), (-1, second)]))
    return rels


def tensor_product_algebra(a: BoundAlgebra, b: BoundAlgebra, name=None) -> BoundAlgebra:
    """The bound quiver presentation of A (x) B.

    Relations: every generator of the first factor's ideal lifted at every
    vertex of the second, the symmetric lifts, and all commutativity squares.
    The nilpotency bound is the sum of the factors' bounds.
    """
    if a.field != b.field:
        raise FieldMismatch(f"cannot tensor over {a.field} and {b.field}")
    q = tensor_quiver(a.quiver, b.quiver)
    field = a.field
    rels = []
    for r in a.relations:
        for bv in b.quiver.vertices:
            rels.append(Relation((c, lift_path_horizontal(p, bv)) for c, p in r.terms))
    for r in b.relations:
        for av in a.quiver.vertices:
            rels.append(Relation((c, lift_path_vertical(p, av)) for c, p in r.terms))
    rels.extend(commutativity_relations(a.quiver, b.quiver))
    if name is None and a.name and b.name:
        name = f"{a.name}(x){b.name}"
    rels = [Relation((field(c), p) for c, p in r.terms) for r in rels]
    return build_algebra(q, rels, field, a.bound + b.bound, name=name)
