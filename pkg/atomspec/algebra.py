"""
Path-algebra elements, relations and the relation expression parser.
"""
from dataclasses import dataclass
from typing import Iterable, NamedTuple

from .errors import ParseError, UsageError
from .quiver import Path, Quiver, RelationSource, compose, parse_quiver, paths_of_length, tokenize
from .rings import BaseRing


@dataclass(frozen=True)
class AlgebraElement:
    quiver: Quiver
    ring: BaseRing
    terms: tuple[tuple[Path, int], ...] = ()

    @classmethod
    def from_terms(cls, quiver: Quiver, ring: BaseRing, items: Iterable[tuple[Path, int]]) -> "AlgebraElement":
        coeffs: dict[Path, int] = {}
        for path, c in items:
            coeffs[path] = ring.add(coeffs.get(path, 0), c)
        kept = [(path, c) for path, c in coeffs.items() if not ring.is_zero(c)]
        kept.sort(key=lambda item: quiver.path_key(item[0]))
        return cls(quiver, ring, tuple(kept))

    @classmethod
    def zero(cls, quiver: Quiver, ring: BaseRing) -> "AlgebraElement":
        return cls(quiver, ring, ())

    @classmethod
    def unit(cls, quiver: Quiver, ring: BaseRing) -> "AlgebraElement":
        return cls.from_terms(quiver, ring, ((Path.trivial(v), 1) for v in quiver.vertices))

    @classmethod
    def of_path(cls, quiver: Quiver, ring: BaseRing, path: Path, coeff: int = 1) -> "AlgebraElement":
        return cls.from_terms(quiver, ring, [(path, coeff)])

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def support(self) -> tuple[Path, ...]:
        return tuple(path for path, _ in self.terms)

    @property
    def degree(self) -> int:
        return max((path.length for path in self.support), default=-1)

    def coefficient(self, path: Path) -> int:
        for candidate, c in self.terms:
            if candidate == path:
                return c
        return 0

    def leading(self) -> tuple[Path, int]:
        if not self.terms:
            raise UsageError("the zero element has no leading term")
        return self.terms[-1]

    def _check(self, other: "AlgebraElement"):
        if self.ring != other.ring or (self.quiver is not other.quiver and self.quiver != other.quiver):
            raise UsageError("elements live in different path algebras")

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        self._check(other)
        return AlgebraElement.from_terms(self.quiver, self.ring, self.terms + other.terms)

    def __neg__(self) -> "AlgebraElement":
        return self.scale(-1)

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        return self + (-other)

    def scale(self, c: int) -> "AlgebraElement":
        return AlgebraElement.from_terms(self.quiver, self.ring, ((p, self.ring.mul(c, d)) for p, d in self.terms))

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        self._check(other)
        products = [
            (compose(p, q), self.ring.mul(c, d))
            for p, c in self.terms
            for q, d in other.terms
            if q.target == p.source
        ]
        return AlgebraElement.from_terms(self.quiver, self.ring, products)

    def __rmul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        return NotImplemented

    def blocks(self) -> dict[tuple[str, str], "AlgebraElement"]:
        """Split into e_j x e_i components keyed by (source i, target j)."""
        grouped: dict[tuple[str, str], list] = {}
        for path, c in self.terms:
            grouped.setdefault((path.source, path.target), []).append((path, c))
        return {
            key: AlgebraElement(self.quiver, self.ring, tuple(items))
            for key, items in sorted(grouped.items())
        }

    def render(self) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for path, c in reversed(self.terms):
            if self.ring.modulus is None and c < 0:
                sign, c = "-", -c
            else:
                sign = "+"
            body = path.render() if c == 1 else f"{c}*{path.render()}"
            pieces.append((sign, body))
        first_sign, first = pieces[0]
        text = ("-" if first_sign == "-" else "") + first
        return text + "".join(f" {sign} {body}" for sign, body in pieces[1:])

    def __str__(self) -> str:
        return self.render()


@dataclass(frozen=True)
class Relation:
    element: AlgebraElement
    text: str = ""
    line: int | None = None
    column: int | None = None

    def __post_init__(self):
        ends = {(p.source, p.target) for p in self.element.support}
        if len(ends) > 1:
            raise UsageError(f"relation {self.describe()} is not a combination of parallel paths")
        if not self.text:
            object.__setattr__(self, "text", self.element.render())

    @property
    def is_zero(self) -> bool:
        return self.element.is_zero

    @property
    def is_monomial(self) -> bool:
        terms = self.element.terms
        return len(terms) == 1 and self.element.ring.is_unit(terms[0][1])

    @property
    def span(self) -> str:
        if self.line is None:
            return ""
        return f"line {self.line}, column {self.column}"

    def describe(self) -> str:
        where = f" ({self.span})" if self.span else ""
        return f"'{self.text or self.element.render()}'{where}"


def is_admissible(relation: Relation) -> bool:
    return all(not path.is_trivial for path in relation.element.support)


def _factor(token, quiver: Quiver) -> Path:
    if quiver.has_arrow(token.text):
        return quiver.arrow_path(token.text)
    if token.text.startswith("e_") and quiver.has_vertex(token.text[2:]):
        return Path.trivial(token.text[2:])
    raise ParseError(f"unknown arrow {token.text!r}", token.line, token.column)


def _term(tokens, quiver: Quiver, ring: BaseRing, sign: int) -> list[tuple[Path, int]]:
    coeff = sign
    factors: list[Path] = []
    k = 0
    while k < len(tokens):
        token = tokens[k]
        if token.kind != "word":
            raise ParseError(f"unexpected {token.text!r}", token.line, token.column)
        power = 1
        if k + 1 < len(tokens) and tokens[k + 1].text == "^":
            if k + 2 >= len(tokens) or not tokens[k + 2].text.isdigit() or int(tokens[k + 2].text) < 1:
                raise ParseError("'^' needs a positive integer exponent", token.line, token.column)
            power = int(tokens[k + 2].text)
            k += 2
        if token.text.isdigit():
            coeff *= int(token.text) ** power
        else:
            factors.extend([_factor(token, quiver)] * power)
        k += 1
        if k < len(tokens):
            if tokens[k].text != "*":
                raise ParseError(f"expected '*', got {tokens[k].text!r}", tokens[k].line, tokens[k].column)
            k += 1
            if k == len(tokens):
                raise ParseError("dangling '*'", tokens[k - 1].line, tokens[k - 1].column)
    if not factors:
        return [(Path.trivial(v), coeff) for v in quiver.vertices]
    path = factors[-1]
    for factor in reversed(factors[:-1]):
        if path.target != factor.source:
            first = tokens[0]
            raise ParseError(f"paths in term are not composable ({factor} after {path})", first.line, first.column)
        path = compose(factor, path)
    return [(path, ring.canon(coeff))]


def parse_element(text: str, quiver: Quiver, ring: BaseRing, line: int = 1, column: int = 1) -> AlgebraElement:
    """Parse a linear combination of paths; products read a_n * ... * a_1."""
    tokens = list(tokenize(text, line, column))
    if not tokens:
        raise ParseError("empty expression", line, column)
    items: list[tuple[Path, int]] = []
    sign, current = 1, []
    for token in tokens:
        if token.text in ("+", "-"):
            if current:
                items.extend(_term(current, quiver, ring, sign))
                sign, current = 1, []
            sign *= -1 if token.text == "-" else 1
        else:
            current.append(token)
    if not current:
        last = tokens[-1]
        raise ParseError("expression ends with an operator", last.line, last.column)
    items.extend(_term(current, quiver, ring, sign))
    return AlgebraElement.from_terms(quiver, ring, items)


def parse_relation(source: RelationSource, quiver: Quiver, ring: BaseRing) -> Relation:
    element = parse_element(source.text, quiver, ring, source.line, source.column)
    ends = {(p.source, p.target) for p in element.support}
    if len(ends) > 1:
        raise ParseError(f"relation '{source.text}' mixes paths with different endpoints", source.line, source.column)
    return Relation(element, source.text, source.line, source.column)


class BoundQuiver(NamedTuple):
    quiver: Quiver
    relations: tuple[Relation, ...]
    ring: BaseRing


def load_bound_quiver(text: str) -> BoundQuiver:
    quiver, fragments, ring = parse_quiver(text)
    relations = tuple(parse_relation(fragment, quiver, ring) for fragment in fragments)
    return BoundQuiver(quiver, relations, ring)


def path_element(quiver: Quiver, ring: BaseRing, arrows, coeff: int = 1) -> AlgebraElement:
    return AlgebraElement.of_path(quiver, ring, quiver.path(arrows), coeff)


def path_relations(quiver: Quiver, ring: BaseRing, length: int) -> tuple[Relation, ...]:
    """All paths of the given length as monomial relations; they generate the length-th arrow ideal power."""
    return tuple(
        Relation(AlgebraElement.of_path(quiver, ring, path))
        for path in paths_of_length(quiver, length)
        if path.length == length
    )


def square_zero_relations(quiver: Quiver, ring: BaseRing) -> tuple[Relation, ...]:
    return path_relations(quiver, ring, 2)
