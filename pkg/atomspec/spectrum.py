"""
Atom spectra of bound quiver algebras.

Points are pairs (vertex, prime). Copies of the base spectrum sit side by
side with no comparabilities between different vertices; the open sets are
those whose slice in every copy is specialization-closed.
"""
import json
import logging
import re
from dataclasses import dataclass, field
from functools import partial
from itertools import combinations, product
from typing import Callable, Iterable, Mapping

import networkx as nx
import numpy as np
import pandas as pd

from .algebra import AlgebraElement, Relation, is_admissible, path_relations
from .const import (
    DEFAULT_DEGREE_BOUND,
    DEFAULT_M_MAX,
    DEFAULT_PRIME_SAMPLE,
    EMBEDDING_NOTE,
    GUARD_SPAN_PATHS,
    MAX_TOPOLOGY_SAMPLE,
    OPEN_BASIS_NOTE,
)
from .errors import CapabilityError, NonAdmissibleRelationError, ResourceError, UsageError
from .ideal import is_right_rooted
from .linalg import as_matrix, rank
from .models import Status, Verdict
from .quiver import Arrow, Path, Quiver, enumerate_paths, subspace_quiver
from .rings import (
    BaseRing,
    PrimePoint,
    SpecSubset,
    SpectrumModel,
    is_open,
    specialization_order,
    spectrum_of,
)

logger = logging.getLogger(__name__)

PRESENTATION_RE = re.compile(r"^(?P<kind>subspace|free)\((?P<args>\d+(?:\s*,\s*\d+)?)\)$")


@dataclass(frozen=True)
class AtomPoint:
    vertex: str
    prime: PrimePoint

    @property
    def node_id(self) -> str:
        return f"v{self.vertex}_p{self.prime.token}"

    def __str__(self) -> str:
        return f"({self.vertex},{self.prime.label})"


@dataclass(frozen=True)
class SpectrumCopy:
    vertex: str
    model: SpectrumModel


@dataclass(frozen=True)
class AtomSpectrum:
    ring: str
    copies: tuple[SpectrumCopy, ...]
    status: Status
    labeler: Callable[[AtomPoint], str] = field(compare=False, repr=False)
    quiver: Quiver | None = field(default=None, compare=False, repr=False)
    relations: tuple[Relation, ...] = field(default=(), compare=False, repr=False)
    rootedness: Verdict = field(default=Verdict.YES, compare=False)

    @property
    def vertices(self) -> tuple[str, ...]:
        return tuple(c.vertex for c in self.copies)

    def model(self, vertex: str) -> SpectrumModel:
        for c in self.copies:
            if c.vertex == vertex:
                return c.model
        raise UsageError(f"{vertex!r} is not a vertex of this spectrum")

    def points(self, primes: Iterable[int] = DEFAULT_PRIME_SAMPLE) -> tuple[AtomPoint, ...]:
        primes = tuple(primes)
        return tuple(
            AtomPoint(c.vertex, prime)
            for c in self.copies
            for prime in c.model.sample(primes)
        )

    def contains(self, point: AtomPoint) -> bool:
        return point.vertex in self.vertices and self.model(point.vertex).contains(point.prime)

    def leq(self, x: AtomPoint, y: AtomPoint) -> bool:
        for point in (x, y):
            if not self.contains(point):
                raise UsageError(f"{point} is not a point of this spectrum")
        return x.vertex == y.vertex and self.model(x.vertex).leq(x.prime, y.prime)

    def label(self, point: AtomPoint) -> str:
        return self.labeler(point)

    def point_count(self) -> int | None:
        """Number of atoms, or None when a copy is infinite."""
        if any(c.model.is_symbolic for c in self.copies):
            return None
        return sum(len(c.model.points) for c in self.copies)


def _quiver_label(ring: BaseRing, point: AtomPoint) -> str:
    return f"<{ring.name}Q/{point.prime.label}~({point.vertex})>"


def atom_spectrum(
    quiver: Quiver,
    relations: Iterable[Relation],
    ring: BaseRing,
    degree_bound: int = DEFAULT_DEGREE_BOUND,
    m_max: int = DEFAULT_M_MAX,
) -> AtomSpectrum:
    relations = tuple(relations)
    for relation in relations:
        if not is_admissible(relation):
            raise NonAdmissibleRelationError(relation)
    try:
        verdict = is_right_rooted(quiver, relations, degree_bound, m_max)
    except CapabilityError as exc:
        logger.warning("right-rootedness undecided: %s", exc)
        verdict = Verdict.INCONCLUSIVE
    status = Status.COMPLETE if verdict is Verdict.YES else Status.EMBEDDING_ONLY
    if status is Status.EMBEDDING_ONLY:
        logger.warning(
            "right-rootedness of a quiver with %d vertices and %d arrows is %s; only the embedded atoms are listed",
            len(quiver.vertices), len(quiver.arrows), verdict.value,
        )
    model = spectrum_of(ring)
    return AtomSpectrum(
        ring=ring.name,
        copies=tuple(SpectrumCopy(v, model) for v in quiver.vertices),
        status=status,
        labeler=partial(_quiver_label, ring),
        quiver=quiver,
        relations=relations,
        rootedness=verdict,
    )


@dataclass(frozen=True)
class ComonoformIdeal:
    vertex: str
    prime: PrimePoint
    quiver: Quiver
    ring: BaseRing
    generators: tuple[AlgebraElement, ...]

    def contains(self, xi: AlgebraElement) -> bool:
        return self.prime.contains(self.ring, xi.coefficient(Path.trivial(self.vertex)))

    @property
    def label(self) -> str:
        return f"{self.ring.name}Q/{self.prime.label}~({self.vertex})"

    def render(self) -> list[str]:
        return [g.render() for g in self.generators]


def comonoform_ideal(quiver: Quiver, ring: BaseRing, vertex: str, prime: PrimePoint) -> ComonoformIdeal:
    if not quiver.has_vertex(vertex):
        raise UsageError(f"{vertex!r} is not a vertex of the quiver")
    if not spectrum_of(ring).contains(prime):
        raise UsageError(f"{prime} is not a prime of {ring}")
    generators = [
        AlgebraElement.of_path(quiver, ring, Path.trivial(v)) for v in quiver.vertices if v != vertex
    ]
    generators += [AlgebraElement.of_path(quiver, ring, quiver.arrow_path(a.name)) for a in quiver.arrows]
    generators += [
        AlgebraElement.of_path(quiver, ring, Path.trivial(vertex), c) for c in prime.generators()
    ]
    return ComonoformIdeal(vertex, prime, quiver, ring, tuple(generators))


def verify_ideal_generators(ideal: ComonoformIdeal, deg_bound: int) -> bool:
    """Compare the span of all a*g*b up to deg_bound with the coefficient predicate."""
    ring = ideal.ring
    if not (ring.is_field and ring.is_finite):
        raise CapabilityError(f"generator verification needs a prime field, not {ring}")
    paths = enumerate_paths(ideal.quiver, deg_bound)
    if len(paths) > GUARD_SPAN_PATHS:
        raise ResourceError(f"{len(paths)} paths up to degree {deg_bound} exceed the limit {GUARD_SPAN_PATHS}")
    index = {path: k for k, path in enumerate(paths)}
    elements = [AlgebraElement.of_path(ideal.quiver, ring, path) for path in paths]

    rows = {}
    for g in ideal.generators:
        for alpha in elements:
            left = alpha * g
            if left.is_zero:
                continue
            for beta in elements:
                product_ = left * beta
                if product_.is_zero or product_.degree > deg_bound:
                    continue
                row = [0] * len(paths)
                for path, c in product_.terms:
                    row[index[path]] = c
                rows[tuple(row)] = None

    p = ring.modulus
    vectors = as_matrix(list(rows) or [[0] * len(paths)], len(paths), p)
    trivial = index[Path.trivial(ideal.vertex)]
    # over a field the predicate set is the hyperplane with zero e_i coefficient
    if np.any(vectors[:, trivial] % p):
        return False
    return rank(vectors, p) == len(paths) - 1


def separating_element(first: ComonoformIdeal, second: ComonoformIdeal) -> AlgebraElement | None:
    """An element lying in exactly one of the two ideals, or None when they coincide."""
    quiver, ring = first.quiver, first.ring
    if (first.vertex, first.prime) == (second.vertex, second.prime):
        return None
    if first.vertex != second.vertex:
        return AlgebraElement.of_path(quiver, ring, Path.trivial(first.vertex))
    for a, b in ((first, second), (second, first)):
        for c in a.prime.generators():
            if not b.prime.contains(ring, c):
                return AlgebraElement.of_path(quiver, ring, Path.trivial(first.vertex), c)
    return None


def order_pairs(spectrum: AtomSpectrum, sample: Iterable[AtomPoint]) -> frozenset[tuple[AtomPoint, AtomPoint]]:
    sample = tuple(sample)
    return frozenset((x, y) for x in sample for y in sample if spectrum.leq(x, y))


def is_open_atoms(spectrum: AtomSpectrum, subset: Mapping[str, SpecSubset]) -> bool:
    unknown = set(subset) - set(spectrum.vertices)
    if unknown:
        raise UsageError(f"unknown vertices {sorted(unknown)}")
    return all(
        is_open(subset.get(c.vertex, SpecSubset.empty()), c.model) for c in spectrum.copies
    )


def open_traces(spectrum: AtomSpectrum, sample: Iterable[AtomPoint]) -> list[frozenset[AtomPoint]]:
    """Traces on `sample` of every open set, built copy by copy."""
    sample = tuple(sample)
    per_copy = []
    for c in spectrum.copies:
        points = tuple(x.prime for x in sample if x.vertex == c.vertex)
        if len(points) > MAX_TOPOLOGY_SAMPLE:
            raise ResourceError(f"sample of {len(points)} points exceeds the limit {MAX_TOPOLOGY_SAMPLE}")
        traces = {
            frozenset(chosen)
            for size in range(len(points) + 1)
            for chosen in combinations(points, size)
            if is_open(SpecSubset.of(chosen), c.model)
        }
        traces.add(frozenset(points))
        per_copy.append([frozenset(AtomPoint(c.vertex, q) for q in t) for t in traces])
    return [frozenset().union(*choice) for choice in product(*per_copy)]


def specialization_order_of(spectrum: AtomSpectrum, sample: Iterable[AtomPoint]) -> frozenset:
    sample = tuple(sample)
    return specialization_order(sample, open_traces(spectrum, sample))


def emit(spectrum: AtomSpectrum, fmt: str, primes: Iterable[int] = DEFAULT_PRIME_SAMPLE) -> str:
    points = spectrum.points(primes)
    strict = sorted(
        (i, j)
        for i, x in enumerate(points)
        for j, y in enumerate(points)
        if i != j and spectrum.leq(x, y)
    )
    match fmt:
        case "json":
            payload = {
                "status": spectrum.status.value,
                "ring": spectrum.ring,
                "points": [
                    {"vertex": x.vertex, "prime": x.prime.to_json(), "label": spectrum.label(x)}
                    for x in points
                ],
                "order": [list(pair) for pair in strict],
                "open_basis_note": OPEN_BASIS_NOTE,
            }
            if spectrum.status is Status.EMBEDDING_ONLY:
                payload["embedding_note"] = EMBEDDING_NOTE
            return json.dumps(payload, indent=2) + "\n"
        case "dot":
            graph = nx.DiGraph()
            graph.add_nodes_from(range(len(points)))
            graph.add_edges_from(strict)
            hasse = nx.transitive_reduction(graph)
            lines = ["digraph atom_spectrum {"]
            for x in points:
                lines.append(f'  "{x.node_id}" [label="{spectrum.label(x)}"];')
            for i, j in sorted(hasse.edges()):
                lines.append(f'  "{points[i].node_id}" -> "{points[j].node_id}";')
            lines.append("}")
            return "\n".join(lines) + "\n"
        case "text":
            table = pd.DataFrame(
                {
                    "vertex": [x.vertex for x in points],
                    "prime": [x.prime.label for x in points],
                    "label": [spectrum.label(x) for x in points],
                }
            )
            header = f"status: {spectrum.status.value}\nring: {spectrum.ring}\n"
            if spectrum.status is Status.EMBEDDING_ONLY:
                header += f"note: {EMBEDDING_NOTE}\n"
            return header + table.to_string(index=False) + "\n"
        case _:
            raise UsageError(f"unknown format {fmt!r}")


@dataclass(frozen=True)
class PresentationReport:
    name: str
    algebra: str
    spectrum: AtomSpectrum
    atom_labels: tuple[str, ...]
    matrix_ideal: pd.DataFrame | None = field(default=None, compare=False)
    notes: tuple[str, ...] = ()

    def render(self) -> str:
        lines = [f"presentation: {self.name}", f"algebra: {self.algebra}", "atoms:"]
        lines += [f"  {label}" for label in self.atom_labels]
        if self.matrix_ideal is not None:
            lines.append("matrix ideal:")
            lines.append(self.matrix_ideal.to_string())
        lines += list(self.notes)
        return "\n".join(lines) + "\n"


def _default_prime(ring: BaseRing, prime: PrimePoint | None) -> PrimePoint:
    model = spectrum_of(ring)
    if prime is None:
        return model.sample()[0]
    if not model.contains(prime):
        raise UsageError(f"{prime} is not a prime of {ring}")
    return prime


def matrix_ideal(n: int, ring: BaseRing, vertex: int, prime: PrimePoint) -> pd.DataFrame:
    """Entries of the ideal of L_n(k) matching the comonoform ideal at `vertex`."""
    labels = [str(k) for k in range(1, n + 1)]
    cells = [
        [
            prime.label if (r == c == vertex) else ring.name if (r == n or r == c) else "0"
            for c in range(1, n + 1)
        ]
        for r in range(1, n + 1)
    ]
    return pd.DataFrame(cells, index=labels, columns=labels)


def subspace_presentation(n: int, ring: BaseRing, vertex: int = 1, prime: PrimePoint | None = None) -> PresentationReport:
    if n < 2:
        raise UsageError("subspace(n) needs n >= 2")
    if not 1 <= vertex <= n:
        raise UsageError(f"vertex must lie in 1..{n}")
    prime = _default_prime(ring, prime)
    spectrum = atom_spectrum(subspace_quiver(n), (), ring)
    labels = tuple(
        f"<L{n}({ring.name})/pbar({point.vertex}) at {point.prime.label}>"
        for point in spectrum.points()
    )
    return PresentationReport(
        name=f"subspace({n})",
        algebra=f"L{n}({ring.name}): lower triangular {n}x{n} matrices, zero off the diagonal except the last row",
        spectrum=spectrum,
        atom_labels=labels,
        matrix_ideal=matrix_ideal(n, ring, vertex, prime),
    )


def free_presentation(n: int, m: int, ring: BaseRing, prime: PrimePoint | None = None) -> PresentationReport:
    if n < 1 or m < 1:
        raise UsageError("free(n,m) needs n >= 1 and m >= 1")
    prime = _default_prime(ring, prime)
    names = tuple(f"x{k}" for k in range(1, n + 1))
    quiver = Quiver(("1",), tuple(Arrow(name, "1", "1") for name in names))
    spectrum = atom_spectrum(quiver, path_relations(quiver, ring, m), ring)
    variables = ",".join(names)

    def quotient(point: PrimePoint) -> str:
        return f"<{ring.name}>" if point.tag != "prime" or ring.modulus == point.p else f"<{ring.name}/{point.label}>"

    return PresentationReport(
        name=f"free({n},{m})",
        algebra=f"{ring.name}<{variables}>/({variables})^{m}",
        spectrum=spectrum,
        atom_labels=tuple(quotient(point.prime) for point in spectrum.points()),
        notes=(f"at {prime.label}: label {quotient(prime)}, every variable acts as zero",),
    )


def parse_presentation_name(text: str) -> tuple[str, tuple[int, ...]]:
    match = PRESENTATION_RE.match(text.replace(" ", ""))
    if not match:
        raise UsageError(f"unknown presentation {text!r}; expected subspace(n) or free(n,m)")
    kind = match.group("kind")
    args = tuple(int(a) for a in match.group("args").split(","))
    if kind == "subspace" and len(args) != 1 or kind == "free" and len(args) != 2:
        raise UsageError(f"wrong number of arguments in {text!r}")
    return kind, args


def special_presentation(text: str, ring: BaseRing, vertex: int = 1, prime: PrimePoint | None = None) -> PresentationReport:
    kind, args = parse_presentation_name(text)
    if kind == "subspace":
        return subspace_presentation(args[0], ring, vertex, prime)
    return free_presentation(args[0], args[1], ring, prime)
