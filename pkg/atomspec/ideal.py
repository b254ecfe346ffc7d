"""
Two-sided ideals of a path algebra: membership, arrow-ideal powers and
the right-rootedness decision.

Monomial generator sets are decided exactly by factor containment. General
generator sets over a prime field go through a rewriting basis completed up
to a degree bound; overlap and inclusion ambiguities are resolved in degree
order so that the basis is complete degree by degree.
"""
import heapq
import itertools
import logging
from dataclasses import dataclass, field
from typing import Iterable, Iterator

import networkx as nx

from .algebra import AlgebraElement, Relation, is_admissible
from .const import DEFAULT_DEGREE_BOUND, DEFAULT_M_MAX, GUARD_RULES
from .errors import CapabilityError, NonAdmissibleRelationError, ResourceError, UsageError
from .models import Membership, Verdict
from .quiver import Path, Quiver, is_acyclic, paths_of_length
from .rings import BaseRing

logger = logging.getLogger(__name__)

Terms = dict[Path, int]


def occurrences(quiver: Quiver, path: Path, factor: Path) -> Iterator[tuple[tuple, tuple]]:
    """Yield (before, after) arrow splits where `factor` sits inside `path`."""
    if factor.is_trivial:
        for k, vertex in enumerate(quiver.vertices_along(path)):
            if vertex == factor.source:
                yield path.arrows[:k], path.arrows[k:]
        return
    n = factor.length
    for k in range(path.length - n + 1):
        if path.arrows[k:k + n] == factor.arrows:
            yield path.arrows[:k], path.arrows[k + n:]


def contains_factor(quiver: Quiver, path: Path, factor: Path) -> bool:
    return next(occurrences(quiver, path, factor), None) is not None


def splice(quiver: Quiver, before: tuple, middle: Path, after: tuple) -> Path:
    source = quiver.arrow(before[0]).source if before else middle.source
    target = quiver.arrow(after[-1]).target if after else middle.target
    return Path(source, target, before + middle.arrows + after)


def _is_homogeneous(element: AlgebraElement) -> bool:
    return len({path.length for path in element.support}) <= 1


@dataclass(frozen=True)
class MonomialEngine:
    quiver: Quiver
    factors: tuple[Path, ...]

    def membership(self, x: AlgebraElement) -> Membership:
        for path in x.support:
            if not any(contains_factor(self.quiver, path, f) for f in self.factors):
                return Membership.NOT_IN
        return Membership.IN

    def describe(self) -> list[str]:
        return [f"monomial {f.render()}" for f in self.factors]


@dataclass(frozen=True)
class Rule:
    """lead == sum(tail) modulo the ideal, every tail path below lead."""
    lead: Path
    tail: tuple[tuple[Path, int], ...]


@dataclass
class RewritingBasis:
    quiver: Quiver
    ring: BaseRing
    degree_bound: int
    homogeneous: bool
    rules: list[Rule] = field(default_factory=list)
    complete: bool = False

    @property
    def certified_degree(self) -> float:
        if self.complete:
            return float("inf")
        return self.degree_bound if self.homogeneous else -1

    @classmethod
    def completed(cls, quiver: Quiver, ring: BaseRing, elements: Iterable[AlgebraElement], degree_bound: int) -> "RewritingBasis":
        elements = [e for e in elements if not e.is_zero]
        basis = cls(quiver, ring, degree_bound, all(_is_homogeneous(e) for e in elements))
        counter = itertools.count()
        queue: list = []
        for element in elements:
            heapq.heappush(queue, (element.degree, next(counter), True, dict(element.terms)))

        pending = 0
        while queue:
            degree, _, generator, terms = heapq.heappop(queue)
            if not generator and degree > degree_bound:
                pending += 1
                continue
            reduced = basis.reduce(terms)
            if not reduced:
                continue
            rule = basis._add(reduced)
            if len(basis.rules) > GUARD_RULES:
                raise ResourceError(
                    f"rewriting basis grew to {len(basis.rules)} rules, above the limit {GUARD_RULES}"
                )
            for word_degree, s_terms in basis._ambiguities(rule):
                heapq.heappush(queue, (word_degree, next(counter), False, s_terms))

        basis.complete = pending == 0
        logger.debug(
            "rewriting basis: %d rules, degree bound %d, %d ambiguities left open",
            len(basis.rules), degree_bound, pending,
        )
        return basis

    def _match(self, path: Path):
        for rule in self.rules:
            for before, after in occurrences(self.quiver, path, rule.lead):
                return rule, before, after
        return None

    def reduce(self, terms: Terms) -> Terms:
        ring, key = self.ring, self.quiver.path_key
        terms = dict(terms)
        normal: Terms = {}
        while terms:
            path = max(terms, key=key)
            c = terms.pop(path)
            hit = self._match(path)
            if hit is None:
                normal[path] = c
                continue
            rule, before, after = hit
            for tail_path, d in rule.tail:
                q = splice(self.quiver, before, tail_path, after)
                value = ring.add(terms.get(q, 0), ring.mul(c, d))
                if ring.is_zero(value):
                    terms.pop(q, None)
                else:
                    terms[q] = value
        return normal

    def _add(self, reduced: Terms) -> Rule:
        ring, key = self.ring, self.quiver.path_key
        lead = max(reduced, key=key)
        inverse = ring.inverse(reduced[lead])
        tail = sorted(
            ((p, ring.neg(ring.mul(inverse, d))) for p, d in reduced.items() if p != lead),
            key=lambda item: key(item[0]),
        )
        rule = Rule(lead, tuple(tail))
        self.rules.append(rule)
        return rule

    def _spliced(self, rule: Rule, before: tuple, after: tuple) -> Terms:
        return {splice(self.quiver, before, p, after): d for p, d in rule.tail}

    def _difference(self, x: Terms, y: Terms) -> Terms:
        out = dict(x)
        for p, d in y.items():
            value = self.ring.sub(out.get(p, 0), d)
            if self.ring.is_zero(value):
                out.pop(p, None)
            else:
                out[p] = value
        return out

    def _ambiguities(self, new: Rule) -> Iterator[tuple[int, Terms]]:
        for old in list(self.rules):
            pairs = [(new, old), (old, new)] if old is not new else [(new, new)]
            for first, second in pairs:
                if first is not second:
                    # inclusion: second.lead sits inside first.lead
                    for before, after in occurrences(self.quiver, first.lead, second.lead):
                        yield first.lead.length, self._difference(
                            self._spliced(first, (), ()), self._spliced(second, before, after)
                        )
                a, b = first.lead.arrows, second.lead.arrows
                for k in range(1, min(len(a), len(b))):
                    if a[-k:] == b[:k]:
                        yield len(a) + len(b) - k, self._difference(
                            self._spliced(first, (), b[k:]), self._spliced(second, a[:-k], ())
                        )

    def membership(self, x: AlgebraElement) -> Membership:
        if not self.reduce(dict(x.terms)):
            return Membership.IN
        if x.degree <= self.certified_degree:
            return Membership.NOT_IN
        return Membership.INCONCLUSIVE

    def describe(self) -> list[str]:
        lines = []
        for rule in self.rules:
            tail = AlgebraElement.from_terms(self.quiver, self.ring, rule.tail)
            lines.append(f"rule {rule.lead.render()} -> {tail.render()}")
        return lines


@dataclass(frozen=True)
class IdealHandle:
    quiver: Quiver
    ring: BaseRing
    generators: tuple[Relation, ...]
    degree_bound: int = DEFAULT_DEGREE_BOUND
    engine: MonomialEngine | RewritingBasis | None = field(default=None, compare=False, repr=False)

    @classmethod
    def build(
        cls,
        quiver: Quiver,
        ring: BaseRing,
        relations: Iterable[Relation],
        degree_bound: int = DEFAULT_DEGREE_BOUND,
    ) -> "IdealHandle":
        if degree_bound < 1:
            raise UsageError("degree bound must be positive")
        relations = tuple(r for r in relations if not r.is_zero)
        for relation in relations:
            if relation.element.ring != ring or relation.element.quiver != quiver:
                raise UsageError(f"relation {relation.describe()} lives in a different path algebra")
        if all(r.is_monomial for r in relations):
            engine = MonomialEngine(quiver, tuple(r.element.terms[0][0] for r in relations))
        elif ring.is_field:
            engine = RewritingBasis.completed(quiver, ring, (r.element for r in relations), degree_bound)
        else:
            raise CapabilityError(
                f"ideal membership over {ring} is supported only for monomial relations"
            )
        return cls(quiver, ring, relations, degree_bound, engine)

    @classmethod
    def arrow_ideal(cls, quiver: Quiver, ring: BaseRing) -> "IdealHandle":
        relations = tuple(
            Relation(AlgebraElement.of_path(quiver, ring, quiver.arrow_path(a.name)))
            for a in quiver.arrows
        )
        return cls.build(quiver, ring, relations)

    @property
    def is_monomial(self) -> bool:
        return isinstance(self.engine, MonomialEngine)

    def _engine_for(self, degree: int):
        engine = self.engine
        if isinstance(engine, RewritingBasis) and degree > max(engine.certified_degree, self.degree_bound):
            # a fresh basis for this degree; the handle itself stays as built
            engine = RewritingBasis.completed(
                self.quiver, self.ring, (r.element for r in self.generators), degree
            )
        return engine

    def membership(self, x: AlgebraElement) -> Membership:
        if x.ring != self.ring or x.quiver != self.quiver:
            raise UsageError("element and ideal live in different path algebras")
        if x.is_zero:
            return Membership.IN
        engine = self._engine_for(x.degree)
        answers = {engine.membership(block) for block in x.blocks().values()}
        if Membership.NOT_IN in answers:
            return Membership.NOT_IN
        if Membership.INCONCLUSIVE in answers:
            return Membership.INCONCLUSIVE
        return Membership.IN

    def __contains__(self, x: AlgebraElement) -> bool:
        return self.membership(x) is Membership.IN

    def describe(self) -> list[str]:
        return self.engine.describe()


def arrow_power_contained(ideal: IdealHandle, m: int) -> Verdict:
    if m < 1:
        raise UsageError("m must be at least 1")
    answers = {
        ideal.membership(AlgebraElement.of_path(ideal.quiver, ideal.ring, path))
        for path in paths_of_length(ideal.quiver, m)
    }
    if Membership.NOT_IN in answers:
        return Verdict.NO
    if Membership.INCONCLUSIVE in answers:
        return Verdict.INCONCLUSIVE
    return Verdict.YES


def walk_automaton(quiver: Quiver, factors: Iterable[tuple[str, ...]]) -> nx.DiGraph:
    """States are (vertex, longest suffix of the walk that is a proper prefix of a factor)."""
    factors = set(factors)
    prefixes = {()} | {f[:k] for f in factors for k in range(len(f))}
    graph = nx.DiGraph()
    frontier = [(v, ()) for v in quiver.vertices]
    graph.add_nodes_from(frontier)
    while frontier:
        state = frontier.pop()
        vertex, suffix = state
        for arrow in quiver.arrows_from(vertex):
            word = suffix + (arrow.name,)
            if any(word[k:] in factors for k in range(len(word))):
                continue
            longest = next(word[k:] for k in range(len(word) + 1) if word[k:] in prefixes)
            target = (arrow.target, longest)
            if target not in graph:
                frontier.append(target)
            graph.add_edge(state, target, arrow=arrow.name)
    return graph


def is_right_rooted(
    quiver: Quiver,
    relations: Iterable[Relation],
    degree_bound: int = DEFAULT_DEGREE_BOUND,
    m_max: int = DEFAULT_M_MAX,
) -> Verdict:
    relations = tuple(relations)
    for relation in relations:
        if not is_admissible(relation):
            raise NonAdmissibleRelationError(relation)
    relations = tuple(r for r in relations if not r.is_zero)
    if not relations:
        return Verdict.YES if is_acyclic(quiver) else Verdict.NO

    ring = relations[0].element.ring
    ideal = IdealHandle.build(quiver, ring, relations, max(degree_bound, m_max))
    if ideal.is_monomial:
        automaton = walk_automaton(quiver, (f.arrows for f in ideal.engine.factors))
        return Verdict.YES if nx.is_directed_acyclic_graph(automaton) else Verdict.NO

    for m in range(1, m_max + 1):
        if arrow_power_contained(ideal, m) is Verdict.YES:
            logger.info("arrow ideal power %d lies in the relation ideal", m)
            return Verdict.YES
    return Verdict.INCONCLUSIVE
