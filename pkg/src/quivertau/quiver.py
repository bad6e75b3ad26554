"""Quivers, paths, relations and cycles.

Composition convention, fixed globally: paths are written left to right, so
the cycle 1 -> 2 -> ... -> n -> 1 is the single path a_1 a_2 ... a_n.  A path
acting on a representation multiplies matrices in reverse order (see reps).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import ParseError


@dataclass(frozen=True)
class Arrow:
    name: str
    source: str
    target: str

    @property
    def is_loop(self) -> bool:
        return self.source == self.target


class Quiver:
    """A finite directed graph with named vertices and arrows.

    Vertex and arrow order is the declaration order; everything downstream
    (path bases, reports) inherits it, which keeps outputs reproducible.
    """

    def __init__(self, vertices: Sequence[str], arrows: Iterable[tuple]):
        self.vertices = tuple(str(v) for v in vertices)
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("duplicate vertex ids")
        vset = set(self.vertices)
        built = []
        for name, src, tgt in arrows:
            name, src, tgt = str(name), str(src), str(tgt)
            if src not in vset or tgt not in vset:
                raise ValueError(f"arrow {name}: undeclared endpoint {src}->{tgt}")
            built.append(Arrow(name, src, tgt))
        self.arrows = tuple(built)
        self.arrow_map = {a.name: a for a in self.arrows}
        if len(self.arrow_map) != len(self.arrows):
            raise ValueError("duplicate arrow ids")
        if vset & set(self.arrow_map):
            raise ValueError("vertex and arrow ids must be disjoint")
        self.out_arrows = {v: tuple(a for a in self.arrows if a.source == v) for v in self.vertices}
        self.in_arrows = {v: tuple(a for a in self.arrows if a.target == v) for v in self.vertices}
        self.vertex_index = {v: i for i, v in enumerate(self.vertices)}

    def __eq__(self, other):
        return (
            isinstance(other, Quiver)
            and self.vertices == other.vertices
            and self.arrows == other.arrows
        )

    def __hash__(self):
        return hash((self.vertices, self.arrows))

    def __repr__(self):
        return f"Quiver({len(self.vertices)} vertices, {len(self.arrows)} arrows)"

    # -- paths ---------------------------------------------------------------

    def trivial_path(self, v: str) -> "Path":
        if v not in self.vertex_index:
            raise ValueError(f"unknown vertex {v}")
        return Path(v, (), v)

    def path(self, arrow_names: Sequence[str], source: str | None = None) -> "Path":
        """Build a path from consecutive arrow names, checking composability."""
        if not arrow_names:
            if source is None:
                raise ValueError("trivial path needs an explicit source")
            return self.trivial_path(source)
        arrows = []
        for name in arrow_names:
            a = self.arrow_map.get(name)
            if a is None:
                raise ValueError(f"unknown arrow {name}")
            arrows.append(a)
        for a, b in zip(arrows, arrows[1:]):
            if a.target != b.source:
                raise ValueError(f"arrows {a.name} and {b.name} do not compose")
        if source is not None and source != arrows[0].source:
            raise ValueError("declared source does not match first arrow")
        return Path(arrows[0].source, tuple(a.name for a in arrows), arrows[-1].target)

    def path_vertices(self, p: "Path") -> tuple:
        """Vertices visited by ``p`` in order (length + 1 entries)."""
        verts = [p.source]
        for name in p.arrows:
            verts.append(self.arrow_map[name].target)
        return tuple(verts)

    # -- structural predicates -------------------------------------------------

    def has_multiple_arrow(self) -> bool:
        """True iff two distinct non-loop arrows share source and target."""
        seen = set()
        for a in self.arrows:
            if a.is_loop:
                continue
            key = (a.source, a.target)
            if key in seen:
                return True
            seen.add(key)
        return False

    def is_connected(self) -> bool:
        """Connectivity of the underlying undirected graph."""
        if len(self.vertices) <= 1:
            return True
        adj = {v: set() for v in self.vertices}
        for a in self.arrows:
            adj[a.source].add(a.target)
            adj[a.target].add(a.source)
        seen = {self.vertices[0]}
        stack = [self.vertices[0]]
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(self.vertices)


@dataclass(frozen=True)
class Path:
    """A directed path: source vertex plus an ordered arrow-name sequence.

    The empty arrow sequence is the trivial path e_v at ``source``.
    """

    source: str
    arrows: tuple
    target: str

    @property
    def length(self) -> int:
        return len(self.arrows)

    @property
    def is_trivial(self) -> bool:
        return not self.arrows

    @property
    def key(self) -> tuple:
        return (self.source, self.arrows)

    def concat(self, other: "Path") -> "Path":
        if self.target != other.source:
            raise ValueError("paths do not compose")
        return Path(self.source, self.arrows + other.arrows, other.target)

    def __repr__(self):
        if self.is_trivial:
            return f"e_{self.source}"
        return ".".join(self.arrows)


class Relation:
    """A linear combination of parallel paths (same source, same target)."""

    def __init__(self, terms: Iterable[tuple]):
        cleaned = tuple((c, p) for c, p in terms if c)
        if not cleaned:
            raise ValueError("relation needs at least one nonzero term")
        src = cleaned[0][1].source
        tgt = cleaned[0][1].target
        for _, p in cleaned:
            if p.source != src or p.target != tgt:
                raise ValueError("relation terms must be parallel paths")
        self.terms = cleaned
        self.source = src
        self.target = tgt

    @property
    def max_length(self) -> int:
        return max(p.length for _, p in self.terms)

    @property
    def min_length(self) -> int:
        return min(p.length for _, p in self.terms)

    def __repr__(self):
        return " + ".join(f"{c}*{p}" for c, p in self.terms)


@dataclass(frozen=True)
class Cycle:
    """A vertex-simple oriented cycle of length >= 2 (never a single loop).

    ``vertices[i]`` is the source of ``arrows[i]``; positions are 1-based in
    the toolkit's cycle arithmetic, so position i corresponds to
    ``vertices[i-1]``.
    """

    arrows: tuple
    vertices: tuple

    @property
    def length(self) -> int:
        return len(self.arrows)

    @property
    def base(self) -> str:
        return self.vertices[0]

    def vertex_at(self, position: int) -> str:
        """Quiver vertex at a 1-based cycle position (taken mod length)."""
        return self.vertices[(position - 1) % len(self.vertices)]

    def arrow_at(self, position: int) -> str:
        return self.arrows[(position - 1) % len(self.arrows)]


def parse_vertex_token(tok: str) -> str:
    tok = tok.strip()
    if not tok or any(ch.isspace() for ch in tok):
        raise ParseError(f"bad vertex token {tok!r}")
    return tok
