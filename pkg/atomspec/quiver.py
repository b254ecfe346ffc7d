"""
Finite quivers, paths and the textual quiver DSL.

Paths are stored source-to-target; `Path.render` gives the composite
notation a_n*...*a_1 used by the DSL.
"""
import re
from dataclasses import dataclass, field
from typing import Iterator, NamedTuple

import networkx as nx

from .errors import CompositionError, ParseError, UsageError
from .rings import BaseRing, parse_ring

TOKEN_RE = re.compile(
    r"""
    (?P<comment>\#[^\n]*)
    |(?P<newline>\n)
    |(?P<space>[ \t\r]+)
    |(?P<arrow>->)
    |(?P<word>[A-Za-z0-9_]+)
    |(?P<symbol>[;:,+\-*^/])
    """,
    re.VERBOSE,
)
ARROW_NAME_RE = re.compile(r"^[A-Za-z_]")
KEYWORDS = ("vertices", "arrows", "relations", "ring")


@dataclass(frozen=True)
class Arrow:
    name: str
    source: str
    target: str


@dataclass(frozen=True)
class Path:
    source: str
    target: str
    arrows: tuple[str, ...] = ()

    @classmethod
    def trivial(cls, vertex: str) -> "Path":
        return cls(vertex, vertex, ())

    @property
    def length(self) -> int:
        return len(self.arrows)

    @property
    def is_trivial(self) -> bool:
        return not self.arrows

    def render(self) -> str:
        if self.is_trivial:
            return f"e_{self.source}"
        factors = []
        for name in reversed(self.arrows):
            if factors and factors[-1][0] == name:
                factors[-1][1] += 1
            else:
                factors.append([name, 1])
        return "*".join(name if power == 1 else f"{name}^{power}" for name, power in factors)

    def __str__(self) -> str:
        return self.render()


def compose(p: Path, q: Path) -> Path:
    """The composite pq: first q, then p."""
    if q.target != p.source:
        raise CompositionError(f"cannot compose {p} after {q}: {q.target} != {p.source}")
    return Path(q.source, p.target, q.arrows + p.arrows)


@dataclass(frozen=True)
class Quiver:
    vertices: tuple[str, ...]
    arrows: tuple[Arrow, ...] = ()
    _arrow_index: dict = field(init=False, repr=False, compare=False)
    _vertex_index: dict = field(init=False, repr=False, compare=False)
    _outgoing: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        vertices = tuple(sorted(self.vertices))
        if len(set(vertices)) != len(vertices):
            raise UsageError("vertex identifiers must be distinct")
        names = [a.name for a in self.arrows]
        if len(set(names)) != len(names):
            raise UsageError("arrow identifiers must be distinct")
        known = set(vertices)
        for a in self.arrows:
            if a.source not in known or a.target not in known:
                raise UsageError(f"arrow {a.name} has an endpoint outside the vertex set")
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "arrows", tuple(self.arrows))
        object.__setattr__(self, "_arrow_index", {a.name: k for k, a in enumerate(self.arrows)})
        object.__setattr__(self, "_vertex_index", {v: k for k, v in enumerate(vertices)})
        outgoing = {v: [] for v in vertices}
        for a in self.arrows:
            outgoing[a.source].append(a)
        object.__setattr__(self, "_outgoing", {v: tuple(out) for v, out in outgoing.items()})

    def arrow(self, name: str) -> Arrow:
        try:
            return self.arrows[self._arrow_index[name]]
        except KeyError:
            raise UsageError(f"unknown arrow {name!r}") from None

    def has_arrow(self, name: str) -> bool:
        return name in self._arrow_index

    def has_vertex(self, vertex: str) -> bool:
        return vertex in self._vertex_index

    def arrows_from(self, vertex: str) -> tuple[Arrow, ...]:
        return self._outgoing[vertex]

    def arrow_path(self, name: str) -> Path:
        a = self.arrow(name)
        return Path(a.source, a.target, (name,))

    def path(self, arrows) -> Path:
        """Build a path from arrow names listed source-to-target."""
        arrows = tuple(arrows)
        if not arrows:
            raise UsageError("a trivial path needs its vertex; use Path.trivial")
        chain = [self.arrow(name) for name in arrows]
        for first, second in zip(chain, chain[1:]):
            if first.target != second.source:
                raise CompositionError(f"arrows {first.name} and {second.name} are not composable")
        return Path(chain[0].source, chain[-1].target, arrows)

    def vertices_along(self, path: Path) -> tuple[str, ...]:
        return (path.source,) + tuple(self.arrow(name).target for name in path.arrows)

    def path_key(self, path: Path) -> tuple:
        # length-lexicographic with arrows in declaration order
        return (
            path.length,
            tuple(self._arrow_index[name] for name in path.arrows),
            self._vertex_index[path.source],
        )

    def graph(self) -> nx.MultiDiGraph:
        graph = nx.MultiDiGraph()
        graph.add_nodes_from(self.vertices)
        for a in self.arrows:
            graph.add_edge(a.source, a.target, key=a.name)
        return graph


def _extend(quiver: Quiver, layer: list[Path]) -> list[Path]:
    longer = [
        Path(p.source, a.target, p.arrows + (a.name,))
        for p in layer
        for a in quiver.arrows_from(p.target)
    ]
    return sorted(longer, key=lambda p: p.arrows)


def enumerate_paths(quiver: Quiver, max_len: int) -> list[Path]:
    if max_len < 0:
        raise UsageError("max_len must be non-negative")
    layer = [Path.trivial(v) for v in quiver.vertices]
    paths = list(layer)
    for _ in range(max_len):
        layer = _extend(quiver, layer)
        if not layer:
            break
        paths.extend(layer)
    return paths


def paths_of_length(quiver: Quiver, length: int) -> list[Path]:
    if length < 0:
        raise UsageError("length must be non-negative")
    layer = [Path.trivial(v) for v in quiver.vertices]
    for _ in range(length):
        layer = _extend(quiver, layer)
        if not layer:
            break
    return layer


def is_acyclic(quiver: Quiver) -> bool:
    # networkx treats self-loops as cycles
    return nx.is_directed_acyclic_graph(quiver.graph())


class Token(NamedTuple):
    kind: str
    text: str
    line: int
    column: int
    start: int
    end: int


def tokenize(text: str, line: int = 1, column: int = 1) -> Iterator[Token]:
    pos = 0
    while pos < len(text):
        match = TOKEN_RE.match(text, pos)
        if not match:
            raise ParseError(f"unexpected character {text[pos]!r}", line, column)
        kind = match.lastgroup
        value = match.group()
        if kind == "newline":
            line, column = line + 1, 1
        else:
            if kind not in ("space", "comment"):
                yield Token(kind, value, line, column, match.start(), match.end())
            column += len(value)
        pos = match.end()


class RelationSource(NamedTuple):
    text: str
    line: int
    column: int


class QuiverSource(NamedTuple):
    quiver: Quiver
    relations: tuple[RelationSource, ...]
    ring: BaseRing


def _statements(tokens: list[Token]) -> Iterator[tuple[Token, list[Token]]]:
    k = 0
    while k < len(tokens):
        head = tokens[k]
        body = []
        k += 1
        while k < len(tokens) and tokens[k].text != ";":
            body.append(tokens[k])
            k += 1
        if k == len(tokens):
            raise ParseError(f"statement {head.text!r} is missing its ';'", head.line, head.column)
        k += 1
        yield head, body


def _split_commas(body: list[Token], head: Token) -> list[list[Token]]:
    parts = [[]]
    for token in body:
        if token.text == ",":
            parts.append([])
        else:
            parts[-1].append(token)
    for part in parts:
        if not part:
            raise ParseError(f"empty item in {head.text!r} statement", head.line, head.column)
    return parts


def parse_quiver(text: str) -> QuiverSource:
    vertices: dict[str, Token] = {}
    arrows: list[tuple[Arrow, Token, Token]] = []
    arrow_names: set[str] = set()
    relations: list[RelationSource] = []
    ring: BaseRing | None = None

    for head, body in _statements(list(tokenize(text))):
        match head.text:
            case "vertices":
                if not body:
                    raise ParseError("'vertices' needs at least one identifier", head.line, head.column)
                for token in body:
                    if token.kind != "word":
                        raise ParseError(f"expected a vertex identifier, got {token.text!r}", token.line, token.column)
                    if token.text in vertices:
                        raise ParseError(f"duplicate vertex {token.text!r}", token.line, token.column)
                    vertices[token.text] = token
            case "arrows":
                for part in _split_commas(body, head):
                    shape = [t.kind if t.kind in ("word", "arrow") else t.text for t in part]
                    if shape != ["word", ":", "word", "arrow", "word"]:
                        raise ParseError("expected 'name: source -> target'", part[0].line, part[0].column)
                    name, _, source, _, target = part
                    if not ARROW_NAME_RE.match(name.text):
                        raise ParseError(f"arrow identifier {name.text!r} must start with a letter", name.line, name.column)
                    if name.text in arrow_names:
                        raise ParseError(f"duplicate arrow {name.text!r}", name.line, name.column)
                    arrow_names.add(name.text)
                    arrows.append((Arrow(name.text, source.text, target.text), source, target))
            case "relations":
                for part in _split_commas(body, head):
                    first, last = part[0], part[-1]
                    relations.append(RelationSource(text[first.start:last.end], first.line, first.column))
            case "ring":
                if ring is not None:
                    raise ParseError("duplicate 'ring' statement", head.line, head.column)
                descriptor = "".join(t.text for t in body)
                try:
                    ring = parse_ring(descriptor)
                except UsageError as exc:
                    raise ParseError(str(exc), head.line, head.column) from None
            case _:
                raise ParseError(f"unknown statement {head.text!r}", head.line, head.column)

    for arrow, source, target in arrows:
        for endpoint in (source, target):
            if endpoint.text not in vertices:
                raise ParseError(f"arrow {arrow.name!r} uses unknown vertex {endpoint.text!r}", endpoint.line, endpoint.column)
    if ring is None:
        raise ParseError("missing 'ring' statement")
    quiver = Quiver(tuple(vertices), tuple(arrow for arrow, _, _ in arrows))
    return QuiverSource(quiver, tuple(relations), ring)


def render_source(quiver: Quiver, relations, ring: BaseRing) -> str:
    lines = []
    if quiver.vertices:
        lines.append("vertices " + " ".join(quiver.vertices) + ";")
    if quiver.arrows:
        lines.append("arrows " + ", ".join(f"{a.name}: {a.source} -> {a.target}" for a in quiver.arrows) + ";")
    texts = [getattr(r, "text", r) for r in relations]
    if texts:
        lines.append("relations " + ", ".join(texts) + ";")
    lines.append(f"ring {ring.name};")
    return "\n".join(lines) + "\n"


def subspace_quiver(n: int) -> Quiver:
    """Sigma_n: arrows a_k from k to n for k < n."""
    if n < 2:
        raise UsageError("the subspace quiver needs n >= 2")
    vertices = tuple(str(k) for k in range(1, n + 1))
    return Quiver(vertices, tuple(Arrow(f"a{k}", str(k), str(n)) for k in range(1, n)))


def loop_quiver(n: int) -> Quiver:
    if n < 1:
        raise UsageError("need at least one loop")
    if n == 1:
        return Quiver(("1",), (Arrow("X", "1", "1"),))
    return Quiver(("1",), tuple(Arrow(f"x{k}", "1", "1") for k in range(1, n + 1)))


def chain_quiver(n: int) -> Quiver:
    """A_n: d_k from k to k+1."""
    if n < 1:
        raise UsageError("the chain needs n >= 1")
    vertices = tuple(str(k) for k in range(1, n + 1))
    return Quiver(vertices, tuple(Arrow(f"d{k}", str(k), str(k + 1)) for k in range(1, n)))


def kronecker_quiver(names=("a", "b"), source: str = "1", target: str = "2") -> Quiver:
    return Quiver((source, target), tuple(Arrow(name, source, target) for name in names))
