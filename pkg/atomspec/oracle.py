"""
Brute-force layer over a prime field F_p.

Finite representations are enumerated exhaustively and monoformness, atom
equivalence and atom supports are decided straight from their definitions:
subrepresentations are enumerated as arrow-stable tuples of subspaces and
isomorphisms are searched for inside the intertwiner space.
"""
import logging
import math
from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterable, Iterator, Mapping

import numpy as np
from sympy import isprime

from .algebra import Relation, is_admissible
from .const import DEFAULT_DEGREE_BOUND, DEFAULT_M_MAX, MAX_ORACLE_PRIME
from .errors import CapabilityError, NonAdmissibleRelationError, ResourceError, UsageError
from .ideal import is_right_rooted
from .linalg import (
    DTYPE,
    complement_columns,
    count_subspaces,
    enumerate_subspaces,
    image_basis,
    matrix_key,
    nullspace,
    rank,
    reduce_mod,
    subspace_contains,
)
from .models import CheckResult, OracleLimits, VerificationReport, Verdict
from .quiver import Path, Quiver

logger = logging.getLogger(__name__)


def _frozen(matrix) -> np.ndarray:
    matrix = np.array(matrix, dtype=DTYPE)
    matrix.setflags(write=False)
    return matrix


def _pivots(basis: np.ndarray) -> list[int]:
    return [int(np.flatnonzero(row)[0]) for row in basis]


@dataclass(frozen=True, eq=False)
class FiniteRep:
    """dims follow quiver.vertices and mats follow quiver.arrows; X(a) is dim(target) x dim(source)."""
    quiver: Quiver
    p: int
    dims: tuple[int, ...]
    mats: tuple[np.ndarray, ...]

    @classmethod
    def build(cls, quiver: Quiver, p: int, dims: Mapping[str, int], mats: Mapping[str, object] | None = None) -> "FiniteRep":
        mats = dict(mats or {})
        unknown = (set(dims) - set(quiver.vertices)) | (set(mats) - {a.name for a in quiver.arrows})
        if unknown:
            raise UsageError(f"unknown vertices or arrows {sorted(unknown)}")
        dim_tuple = tuple(int(dims.get(v, 0)) for v in quiver.vertices)
        if any(d < 0 for d in dim_tuple):
            raise UsageError("dimensions must be non-negative")
        by_vertex = dict(zip(quiver.vertices, dim_tuple))
        matrices = []
        for a in quiver.arrows:
            shape = (by_vertex[a.target], by_vertex[a.source])
            if a.name in mats:
                m = np.array(mats[a.name], dtype=DTYPE).reshape(shape) if 0 in shape else np.array(mats[a.name], dtype=DTYPE)
                if m.shape != shape:
                    raise UsageError(f"matrix for {a.name} has shape {m.shape}, expected {shape}")
            else:
                m = np.zeros(shape, dtype=DTYPE)
            matrices.append(_frozen(m % p))
        return cls(quiver, p, dim_tuple, tuple(matrices))

    def dim(self, vertex: str) -> int:
        return self.dims[self.quiver.vertices.index(vertex)]

    def mat(self, arrow: str) -> np.ndarray:
        return self.mats[self.quiver.arrows.index(self.quiver.arrow(arrow))]

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    @property
    def is_zero(self) -> bool:
        return self.total_dim == 0

    @property
    def dimension_vector(self) -> dict[str, int]:
        return dict(zip(self.quiver.vertices, self.dims))

    def key(self) -> tuple:
        return (self.p, self.dims, tuple(matrix_key(m) for m in self.mats))

    def to_json(self) -> dict:
        return {
            "dims": self.dimension_vector,
            "mats": {a.name: m.tolist() for a, m in zip(self.quiver.arrows, self.mats)},
        }


def path_matrix(rep: FiniteRep, path: Path) -> np.ndarray:
    matrix = np.eye(rep.dim(path.source), dtype=DTYPE)
    for name in path.arrows:
        matrix = (rep.mat(name) @ matrix) % rep.p
    return matrix


def relation_matrix(rep: FiniteRep, relation: Relation) -> np.ndarray | None:
    terms = relation.element.terms
    if not terms:
        return None
    first = terms[0][0]
    total = np.zeros((rep.dim(first.target), rep.dim(first.source)), dtype=DTYPE)
    for path, c in terms:
        total = (total + (c % rep.p) * path_matrix(rep, path)) % rep.p
    return total


def check_relations(rep: FiniteRep, relations: Iterable[Relation]) -> bool:
    for relation in relations:
        if relation.element.quiver != rep.quiver:
            raise UsageError(f"relation {relation.describe()} belongs to another quiver")
        matrix = relation_matrix(rep, relation)
        if matrix is not None and np.any(matrix):
            return False
    return True


@dataclass(frozen=True, eq=False)
class SubRep:
    parent: FiniteRep
    spaces: tuple[np.ndarray, ...]

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(s.shape[0] for s in self.spaces)

    @property
    def is_zero(self) -> bool:
        return not any(self.dims)

    def key(self) -> tuple:
        return tuple(matrix_key(s) for s in self.spaces)

    def contains(self, other: "SubRep") -> bool:
        return all(subspace_contains(big, small, self.parent.p) for big, small in zip(self.spaces, other.spaces))


def _stable(rep: FiniteRep, spaces: list[np.ndarray], upto: int) -> bool:
    index = {v: k for k, v in enumerate(rep.quiver.vertices)}
    for a, m in zip(rep.quiver.arrows, rep.mats):
        s, t = index[a.source], index[a.target]
        if s > upto or t > upto:
            continue
        if not subspace_contains(spaces[t], image_basis(m, spaces[s], rep.p), rep.p):
            return False
    return True


def submodules(rep: FiniteRep, limit: int | None = None) -> list[SubRep]:
    limit = OracleLimits().submodules if limit is None else limit
    count = math.prod(count_subspaces(d, rep.p) for d in rep.dims)
    if count > limit:
        raise ResourceError(f"{count} subspace tuples to examine exceed the submodule limit {limit}")
    choices = {d: list(enumerate_subspaces(d, rep.p)) for d in set(rep.dims)}
    found: list[SubRep] = []

    def extend(spaces: list[np.ndarray]):
        k = len(spaces)
        if k == len(rep.dims):
            found.append(SubRep(rep, tuple(_frozen(s) for s in spaces)))
            return
        for basis in choices[rep.dims[k]]:
            spaces.append(basis)
            if _stable(rep, spaces, k):
                extend(spaces)
            spaces.pop()

    extend([])
    return found


def restrict(sub: SubRep) -> FiniteRep:
    """The submodule as a representation in the coordinates of its echelon bases."""
    rep = sub.parent
    index = {v: k for k, v in enumerate(rep.quiver.vertices)}
    mats = {}
    for a, m in zip(rep.quiver.arrows, rep.mats):
        source, target = sub.spaces[index[a.source]], sub.spaces[index[a.target]]
        images = (source @ m.T) % rep.p
        mats[a.name] = images[:, _pivots(target)].T if target.shape[0] else np.zeros((0, source.shape[0]), dtype=DTYPE)
    dims = dict(zip(rep.quiver.vertices, sub.dims))
    return FiniteRep.build(rep.quiver, rep.p, dims, mats)


def quotient(rep: FiniteRep, sub: SubRep) -> FiniteRep:
    index = {v: k for k, v in enumerate(rep.quiver.vertices)}
    kept = [complement_columns(_pivots(s), d) for s, d in zip(sub.spaces, rep.dims)]
    mats = {}
    for a, m in zip(rep.quiver.arrows, rep.mats):
        s, t = index[a.source], index[a.target]
        target_pivots = _pivots(sub.spaces[t])
        columns = []
        for f in kept[s]:
            image = reduce_mod(m[:, f], sub.spaces[t], target_pivots, rep.p)
            columns.append(image[kept[t]])
        mats[a.name] = np.array(columns, dtype=DTYPE).reshape(len(kept[s]), len(kept[t])).T
    dims = {v: len(c) for v, c in zip(rep.quiver.vertices, kept)}
    return FiniteRep.build(rep.quiver, rep.p, dims, mats)


def hom_basis(x: FiniteRep, y: FiniteRep) -> list[tuple[np.ndarray, ...]]:
    """Basis of intertwiners T with T_t X(a) = Y(a) T_s for every arrow a: s -> t."""
    if x.quiver != y.quiver or x.p != y.p:
        raise UsageError("representations of different quivers or fields")
    p = x.p
    offsets, n = [], 0
    for dx, dy in zip(x.dims, y.dims):
        offsets.append(n)
        n += dx * dy
    index = {v: k for k, v in enumerate(x.quiver.vertices)}
    blocks = []
    for a, xa, ya in zip(x.quiver.arrows, x.mats, y.mats):
        s, t = index[a.source], index[a.target]
        rows = y.dims[t] * x.dims[s]
        if rows == 0:
            continue
        block = np.zeros((rows, n), dtype=DTYPE)
        block[:, offsets[t]:offsets[t] + y.dims[t] * x.dims[t]] += np.kron(np.eye(y.dims[t], dtype=DTYPE), xa.T)
        block[:, offsets[s]:offsets[s] + y.dims[s] * x.dims[s]] -= np.kron(ya, np.eye(x.dims[s], dtype=DTYPE))
        blocks.append(block % p)
    system = np.vstack(blocks) if blocks else np.zeros((0, n), dtype=DTYPE)
    basis = nullspace(system, p)
    return [
        tuple(
            row[offsets[k]:offsets[k] + dx * dy].reshape(dy, dx)
            for k, (dx, dy) in enumerate(zip(x.dims, y.dims))
        )
        for row in basis
    ]


def homomorphisms(x: FiniteRep, y: FiniteRep, limit: int | None = None) -> Iterator[tuple[np.ndarray, ...]]:
    limit = OracleLimits().hom if limit is None else limit
    basis = hom_basis(x, y)
    size = x.p ** len(basis)
    if size > limit:
        raise ResourceError(f"Hom space of size {size} exceeds the limit {limit}")
    zero = tuple(np.zeros((dy, dx), dtype=DTYPE) for dx, dy in zip(x.dims, y.dims))
    for coeffs in product(range(x.p), repeat=len(basis)):
        maps = zero
        for c, element in zip(coeffs, basis):
            if c:
                maps = tuple((m + c * e) % x.p for m, e in zip(maps, element))
        yield maps


def isomorphic(x: FiniteRep, y: FiniteRep, limit: int | None = None) -> bool:
    if x.dims != y.dims:
        return False
    if x.is_zero:
        return True
    return any(
        all(rank(t, x.p) == d for t, d in zip(maps, x.dims) if d)
        for maps in homomorphisms(x, y, limit)
    )


def simple_submodules(rep: FiniteRep, limits: OracleLimits | None = None) -> list[FiniteRep]:
    limits = limits or OracleLimits()
    nonzero = [s for s in submodules(rep, limits.submodules) if not s.is_zero]
    minimal = [
        s for s in nonzero
        if not any(t is not s and sum(t.dims) < sum(s.dims) and s.contains(t) for t in nonzero)
    ]
    return [restrict(s) for s in minimal]


def common_nonzero_subobject(h: FiniteRep, h2: FiniteRep, limits: OracleLimits | None = None) -> bool:
    """A nonzero common subobject exists iff the two share a simple submodule."""
    limits = limits or OracleLimits()
    if h.is_zero or h2.is_zero:
        return False
    others = simple_submodules(h2, limits)
    return any(
        isomorphic(s, t, limits.hom)
        for s in simple_submodules(h, limits)
        for t in others
    )


def is_monoform(h: FiniteRep, limits: OracleLimits | None = None) -> bool:
    limits = limits or OracleLimits()
    if h.is_zero:
        return False
    for sub in submodules(h, limits.submodules):
        if sub.is_zero:
            continue
        if common_nonzero_subobject(h, quotient(h, sub), limits):
            return False
    return True


def atom_equivalent(h: FiniteRep, h2: FiniteRep, limits: OracleLimits | None = None) -> bool:
    limits = limits or OracleLimits()
    for rep in (h, h2):
        if not is_monoform(rep, limits):
            raise UsageError("atom equivalence is defined on monoform representations only")
    return common_nonzero_subobject(h, h2, limits)


def monoform_subquotients(m: FiniteRep, limits: OracleLimits | None = None) -> list[FiniteRep]:
    limits = limits or OracleLimits()
    found: dict[tuple, FiniteRep] = {}
    for lower in submodules(m, limits.submodules):
        top = quotient(m, lower)
        for sub in submodules(top, limits.submodules):
            if sub.is_zero:
                continue
            candidate = restrict(sub)
            if candidate.key() not in found and is_monoform(candidate, limits):
                found[candidate.key()] = candidate
    return list(found.values())


def asupp(m: FiniteRep, reps: Iterable[FiniteRep], limits: OracleLimits | None = None) -> list[FiniteRep]:
    limits = limits or OracleLimits()
    pieces = monoform_subquotients(m, limits)
    return [
        rep for rep in reps
        if any(common_nonzero_subobject(rep, piece, limits) for piece in pieces)
    ]


def stalk(quiver: Quiver, p: int, vertex: str, dim: int = 1) -> FiniteRep:
    if not quiver.has_vertex(vertex):
        raise UsageError(f"{vertex!r} is not a vertex of the quiver")
    return FiniteRep.build(quiver, p, {vertex: dim})


def k_i(rep: FiniteRep, vertex: str) -> np.ndarray:
    """Echelon basis of the intersection of kernels of the arrows leaving `vertex`."""
    d = rep.dim(vertex)
    outgoing = [rep.mat(a.name) for a in rep.quiver.arrows_from(vertex)]
    stacked = np.vstack(outgoing) if outgoing else np.zeros((0, d), dtype=DTYPE)
    return nullspace(stacked.reshape(stacked.shape[0], d), rep.p)


def direct_sum(x: FiniteRep, y: FiniteRep) -> FiniteRep:
    if x.quiver != y.quiver or x.p != y.p:
        raise UsageError("representations of different quivers or fields")
    dims = {v: dx + dy for v, dx, dy in zip(x.quiver.vertices, x.dims, y.dims)}
    mats = {}
    for a, mx, my in zip(x.quiver.arrows, x.mats, y.mats):
        block = np.zeros((mx.shape[0] + my.shape[0], mx.shape[1] + my.shape[1]), dtype=DTYPE)
        block[:mx.shape[0], :mx.shape[1]] = mx
        block[mx.shape[0]:, mx.shape[1]:] = my
        mats[a.name] = block
    return FiniteRep.build(x.quiver, x.p, dims, mats)


def dimension_vectors(quiver: Quiver, dim_bound: int) -> list[tuple[int, ...]]:
    vectors = [
        dims
        for dims in product(range(dim_bound + 1), repeat=len(quiver.vertices))
        if sum(dims) <= dim_bound
    ]
    return sorted(vectors, key=lambda dims: (sum(dims), dims))


def enumerate_reps(
    quiver: Quiver,
    relations: Iterable[Relation],
    p: int,
    dim_bound: int,
    limits: OracleLimits | None = None,
) -> Iterator[FiniteRep]:
    limits = limits or OracleLimits()
    relations = tuple(relations)
    index = {v: k for k, v in enumerate(quiver.vertices)}
    vectors = dimension_vectors(quiver, dim_bound)
    entries = {
        dims: sum(dims[index[a.target]] * dims[index[a.source]] for a in quiver.arrows)
        for dims in vectors
    }
    total = sum(p ** n for n in entries.values())
    if total > limits.tuples:
        raise ResourceError(f"{total} matrix tuples exceed the limit {limits.tuples}")
    for dims in vectors:
        shapes = [(dims[index[a.target]], dims[index[a.source]]) for a in quiver.arrows]
        for flat in product(range(p), repeat=entries[dims]):
            mats, k = {}, 0
            for a, (rows, cols) in zip(quiver.arrows, shapes):
                mats[a.name] = np.array(flat[k:k + rows * cols], dtype=DTYPE).reshape(rows, cols)
                k += rows * cols
            rep = FiniteRep.build(quiver, p, dict(zip(quiver.vertices, dims)), mats)
            if check_relations(rep, relations):
                yield rep


def atom_classes(reps: Iterable[FiniteRep], limits: OracleLimits | None = None) -> list[list[FiniteRep]]:
    """Group monoform representations by atom equivalence."""
    classes: list[list[FiniteRep]] = []
    for rep in reps:
        for members in classes:
            if common_nonzero_subobject(members[0], rep, limits):
                members.append(rep)
                break
        else:
            classes.append([rep])
    return classes


def verify_theorem_a(
    quiver: Quiver,
    relations: Iterable[Relation],
    p: int,
    dim_bound: int,
    limits: OracleLimits | None = None,
    degree_bound: int = DEFAULT_DEGREE_BOUND,
    m_max: int = DEFAULT_M_MAX,
) -> VerificationReport:
    limits = limits or OracleLimits()
    if not isprime(p):
        raise UsageError(f"the oracle works over a prime field; {p} is not prime")
    if p > MAX_ORACLE_PRIME:
        raise ResourceError(f"prime {p} exceeds the oracle limit {MAX_ORACLE_PRIME}")
    relations = tuple(relations)
    for relation in relations:
        if not is_admissible(relation):
            raise NonAdmissibleRelationError(relation)
    try:
        rooted = is_right_rooted(quiver, relations, degree_bound, m_max)
    except CapabilityError as exc:
        logger.warning("right-rootedness undecided: %s", exc)
        rooted = Verdict.INCONCLUSIVE

    stalks = {v: stalk(quiver, p, v) for v in quiver.vertices}
    clashing = [
        [u, v]
        for u, v in combinations(quiver.vertices, 2)
        if atom_equivalent(stalks[u], stalks[v], limits)
    ]
    checks = [CheckResult("stalks_pairwise_inequivalent", not clashing, clashing)]

    reps = list(enumerate_reps(quiver, relations, p, dim_bound, limits))
    nonzero = [x for x in reps if not x.is_zero]
    monoform = [x for x in nonzero if is_monoform(x, limits)]
    matches = {
        x.key(): [v for v in quiver.vertices if common_nonzero_subobject(x, stalks[v], limits)]
        for x in monoform
    }

    # kernel detection and the stalk classification are claimed for right rooted quivers only
    if rooted is Verdict.YES:
        blind = [x.to_json() for x in nonzero if not any(k_i(x, v).shape[0] for v in quiver.vertices)]
        checks.append(CheckResult("kernel_functors_detect_nonzero", not blind, blind))
        mismatched = [
            {"rep": x.to_json(), "equivalent_stalks": matches[x.key()]}
            for x in monoform
            if len(matches[x.key()]) != 1
        ]
        checks.append(CheckResult("monoform_matches_one_stalk", not mismatched, mismatched))
    else:
        witnesses = [
            {
                "rep": x.to_json(),
                "kernel_dims": {v: int(k_i(x, v).shape[0]) for v in quiver.vertices},
            }
            for x in monoform
            if not matches[x.key()]
        ]
        checks.append(CheckResult("non_surjectivity_witnesses", bool(witnesses), witnesses))

    counts = {
        "representations": len(reps),
        "nonzero": len(nonzero),
        "monoform": len(monoform),
        "atoms": len(atom_classes(monoform, limits)),
        "stalks": len(stalks),
    }
    logger.info("oracle over F%d up to total dimension %d: %s", p, dim_bound, counts)
    return VerificationReport(rooted, checks, counts)
