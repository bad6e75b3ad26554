"""File formats: .alg algebra presentations and .rep representations.

An .alg file is line oriented:

    # comment
    field Q              (or: field GF(5))
    bound 3
    vertex 1
    vertex 2
    arrow a1: 1 -> 2
    arrow a2: 2 -> 1
    relation a1.a2.a1
    relation 2 * a1.a2 - a2.a1    (terms need not be monic)
    zero-paths-of-length 3        (shorthand: every path of that length)

Relation paths are written left to right with '.' separators, matching the
composition convention.  Unknown identifiers are parse errors carrying line
numbers.  A .rep file lists the dimension vector and one matrix per arrow
with entries as exact rationals or residues:

    rep
    vertex 1 dim 2
    map a1 = [1, 0; 1/2, 1]
"""

from __future__ import annotations

from .algebra import BoundAlgebra, build_algebra
from .errors import ParseError
from .linalg import GF, QQ, FieldSpec, Matrix
from .quiver import Quiver, Relation
from .reps import Representation


_BAD_ID_CHARS = set("+-*. \t")


def _check_id(tok: str, what: str, filename, lineno):
    """Ids may not contain operators used by the relation syntax."""
    if not tok or any(ch in _BAD_ID_CHARS for ch in tok):
        raise ParseError(f"bad {what} id {tok!r}", filename, lineno)


def parse_field(token: str):
    token = token.strip()
    if token in ("Q", "QQ"):
        return QQ
    if token.startswith("GF(") and token.endswith(")"):
        return GF(int(token[3:-1]))
    raise ValueError(f"unknown field {token!r} (expected Q or GF(p))")


def format_field(field: FieldSpec) -> str:
    return "Q" if field.is_rational else f"GF({field.p})"


def _all_paths_of_length(quiver: Quiver, length: int):
    level = [(v, ()) for v in quiver.vertices]
    for _ in range(length):
        nxt = []
        for src, arrows in level:
            cur = src if not arrows else quiver.arrow_map[arrows[-1]].target
            for a in quiver.out_arrows[cur]:
                nxt.append((src, arrows + (a.name,)))
        level = nxt
    return [quiver.path(arrows, source=src) for src, arrows in level]


def _parse_relation_terms(quiver: Quiver, rhs: str, field, filename, lineno):
    """Parse 'c1 * p1 + p2 - c3 * p3' into (coeff, Path) terms."""
    text = rhs.replace("-", "+-").replace("++-", "+-")
    chunks = [c.strip() for c in text.split("+") if c.strip()]
    if not chunks:
        raise ParseError("empty relation", filename, lineno)
    terms = []
    for chunk in chunks:
        sign = 1
        if chunk.startswith("-"):
            sign = -1
            chunk = chunk[1:].strip()
        if "*" in chunk:
            coeff_text, path_text = chunk.split("*", 1)
            try:
                coeff = field.parse(coeff_text.strip())
            except (ValueError, ZeroDivisionError) as exc:
                raise ParseError(f"bad coefficient {coeff_text.strip()!r}: {exc}",
                                 filename, lineno)
        else:
            coeff, path_text = field.one, chunk
        names = [n.strip() for n in path_text.strip().split(".") if n.strip()]
        if not names:
            raise ParseError("relation term without a path", filename, lineno)
        for n in names:
            if n not in quiver.arrow_map:
                raise ParseError(f"unknown arrow {n!r}", filename, lineno)
        try:
            path = quiver.path(names)
        except ValueError as exc:
            raise ParseError(str(exc), filename, lineno)
        coeff = field.mul(field(sign), coeff)
        terms.append((coeff, path))
    return terms


def parse_algebra(text: str, filename: str = "<input>",
                  field_override: FieldSpec | None = None,
                  name: str | None = None) -> BoundAlgebra:
    field = None
    bound = None
    vertices = []
    arrows = []
    relation_lines = []   # (lineno, rhs)
    zero_lengths = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        rest = rest.strip()
        if head == "field":
            try:
                field = parse_field(rest)
            except ValueError as exc:
                raise ParseError(str(exc), filename, lineno)
        elif head == "bound":
            try:
                bound = int(rest)
            except ValueError:
                raise ParseError(f"bad bound {rest!r}", filename, lineno)
        elif head == "vertex":
            _check_id(rest, "vertex", filename, lineno)
            vertices.append(rest)
        elif head == "arrow":
            if ":" not in rest:
                raise ParseError("arrow syntax is 'arrow id: src -> tgt'",
                                 filename, lineno)
            arrow_name, spec = rest.split(":", 1)
            if "->" not in spec:
                raise ParseError("arrow syntax is 'arrow id: src -> tgt'",
                                 filename, lineno)
            src, tgt = spec.split("->", 1)
            _check_id(arrow_name.strip(), "arrow", filename, lineno)
            arrows.append((arrow_name.strip(), src.strip(), tgt.strip(), lineno))
        elif head == "relation":
            relation_lines.append((lineno, rest))
        elif head == "zero-paths-of-length":
            try:
                zero_lengths.append(int(rest))
            except ValueError:
                raise ParseError(f"bad length {rest!r}", filename, lineno)
        else:
            raise ParseError(f"unknown directive {head!r}", filename, lineno)
    if field_override is not None:
        field = field_override
    if field is None:
        raise ParseError("missing 'field' line", filename)
    if bound is None:
        raise ParseError("missing 'bound' line", filename)
    if not vertices:
        raise ParseError("no vertices declared", filename)
    vset = set(vertices)
    for arrow_name, src, tgt, lineno in arrows:
        if src not in vset:
            raise ParseError(f"unknown vertex {src!r}", filename, lineno)
        if tgt not in vset:
            raise ParseError(f"unknown vertex {tgt!r}", filename, lineno)
    try:
        quiver = Quiver(vertices, [(a, s, t) for a, s, t, _ in arrows])
    except ValueError as exc:
        raise ParseError(str(exc), filename)
    relations = []
    for lineno, rhs in relation_lines:
        terms = _parse_relation_terms(quiver, rhs, field, filename, lineno)
        try:
            relations.append(Relation(terms))
        except ValueError as exc:
            raise ParseError(str(exc), filename, lineno)
    for length in zero_lengths:
        for p in _all_paths_of_length(quiver, length):
            relations.append(Relation([(field.one, p)]))
    try:
        return build_algebra(quiver, relations, field, bound, name=name)
    except ValueError as exc:
        raise ParseError(str(exc), filename)


def parse_algebra_file(path, field_override=None) -> BoundAlgebra:
    import os

    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    label = os.path.basename(str(path))
    name = label[:-4] if label.endswith(".alg") else label
    return parse_algebra(text, filename=label, field_override=field_override, name=name)


def serialize_algebra(algebra: BoundAlgebra) -> str:
    """Canonical text form; shorthand relations are written out explicitly."""
    lines = [f"field {format_field(algebra.field)}", f"bound {algebra.bound}"]
    for v in algebra.quiver.vertices:
        lines.append(f"vertex {v}")
    for a in algebra.quiver.arrows:
        lines.append(f"arrow {a.name}: {a.source} -> {a.target}")
    rels = []
    for r in algebra.relations:
        terms = sorted(r.terms, key=lambda t: t[1].key)
        parts = []
        for i, (c, p) in enumerate(terms):
            body = ".".join(p.arrows)
            coeff = algebra.field.to_str(c)
            neg = coeff.startswith("-")
            mag = coeff[1:] if neg else coeff
            piece = body if mag == "1" else f"{mag} * {body}"
            if i == 0:
                parts.append(f"-{piece}" if neg else piece)
            else:
                parts.append(f"- {piece}" if neg else f"+ {piece}")
        rels.append("relation " + " ".join(parts))
    lines.extend(sorted(rels))
    return "\n".join(lines) + "\n"


def serialize_rep(rep: Representation) -> str:
    lines = ["rep"]
    field = rep.algebra.field
    for v in rep.algebra.quiver.vertices:
        lines.append(f"vertex {v} dim {rep.dims[v]}")
    for a in rep.algebra.quiver.arrows:
        m = rep.mats[a.name]
        if m.rows == 0 or m.cols == 0:
            continue
        rows = "; ".join(", ".join(field.to_str(x) for x in m.row(i))
                         for i in range(m.rows))
        lines.append(f"map {a.name} = [{rows}]")
    return "\n".join(lines) + "\n"


def parse_rep(text: str, algebra: BoundAlgebra, filename: str = "<input>") -> Representation:
    dims = {}
    raw_maps = {}
    field = algebra.field
    seen_header = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line == "rep":
            seen_header = True
            continue
        head, _, rest = line.partition(" ")
        rest = rest.strip()
        if head == "vertex":
            parts = rest.split()
            if len(parts) != 3 or parts[1] != "dim":
                raise ParseError("vertex syntax is 'vertex v dim d'", filename, lineno)
            if parts[0] not in algebra.quiver.vertex_index:
                raise ParseError(f"unknown vertex {parts[0]!r}", filename, lineno)
            try:
                dims[parts[0]] = int(parts[2])
            except ValueError:
                raise ParseError(f"bad dimension {parts[2]!r}", filename, lineno)
        elif head == "map":
            if "=" not in rest:
                raise ParseError("map syntax is 'map a = [r; r; ...]'", filename, lineno)
            arrow_name, body = rest.split("=", 1)
            arrow_name = arrow_name.strip()
            if arrow_name not in algebra.quiver.arrow_map:
                raise ParseError(f"unknown arrow {arrow_name!r}", filename, lineno)
            body = body.strip()
            if not (body.startswith("[") and body.endswith("]")):
                raise ParseError("matrix must be bracketed", filename, lineno)
            rows = []
            inner = body[1:-1].strip()
            if inner:
                for row_text in inner.split(";"):
                    entries = []
                    for cell in row_text.split(","):
                        cell = cell.strip()
                        if not cell:
                            raise ParseError("empty matrix entry", filename, lineno)
                        try:
                            entries.append(field.parse(cell))
                        except (ValueError, ZeroDivisionError) as exc:
                            raise ParseError(f"bad entry {cell!r}: {exc}",
                                             filename, lineno)
                    rows.append(entries)
            raw_maps[arrow_name] = (rows, lineno)
        else:
            raise ParseError(f"unknown directive {head!r}", filename, lineno)
    if not seen_header:
        raise ParseError("missing 'rep' header", filename)
    mats = {}
    for a in algebra.quiver.arrows:
        if a.name not in raw_maps:
            continue
        rows, lineno = raw_maps[a.name]
        want_rows = dims.get(a.target, 0)
        want_cols = dims.get(a.source, 0)
        if len(rows) != want_rows or any(len(r) != want_cols for r in rows):
            raise ParseError(
                f"map {a.name} must be {want_rows}x{want_cols}", filename, lineno)
        mats[a.name] = Matrix.from_rows(field, rows) if rows else None
    mats = {k: v for k, v in mats.items() if v is not None}
    return Representation(algebra, dims, mats)


def parse_rep_file(path, algebra: BoundAlgebra) -> Representation:
    import os

    with open(path, "r", encoding="utf-8") as fh:
        return parse_rep(fh.read(), algebra, filename=os.path.basename(str(path)))
