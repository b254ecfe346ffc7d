"""
Triangular matrix rings T = [[A, 0], [M, B]] and their comma-category modules.

A T-module is a triple (X, Y, theta) with theta: M (x)_A X -> Y. Over a prime
field with M = F_p^r such a triple is the same thing as a representation of
the Kronecker quiver with r arrows A -> B (one arrow per basis vector of M),
which lets the finite oracle handle subobjects, quotients and morphisms.
"""
import logging
import re
from dataclasses import dataclass
from functools import partial
from itertools import product
from typing import Iterator, Mapping

import numpy as np
from sympy import isprime

from .errors import CapabilityError, UsageError
from .linalg import DTYPE, all_matrices, complement_columns, image_basis, matrix_key, nullspace, rank, reduce_mod
from .models import CheckResult, OracleLimits, Status, Verdict, VerificationReport
from .oracle import FiniteRep, SubRep, common_nonzero_subobject, homomorphisms, quotient, restrict
from .quiver import Quiver, kronecker_quiver
from .rings import BaseRing, spectrum_of
from .spectrum import AtomPoint, AtomSpectrum, SpectrumCopy

logger = logging.getLogger(__name__)

GROUP_RE = re.compile(r"^(?:F(?P<p>\d+)(?:\^(?P<r>\d+))?|Z/(?P<m>\d+))$")


def _pivots(basis: np.ndarray) -> list[int]:
    return [int(np.flatnonzero(row)[0]) for row in basis]


@dataclass(frozen=True)
class Bimodule:
    """Finite abelian group F_p^r or Z/m; ring actions are the canonical integer ones."""
    exponent: int
    rank: int = 1
    elementary: bool = True

    def __post_init__(self):
        if self.exponent < 2 or self.rank < 1:
            raise UsageError("the bimodule must be a nonzero finite group")
        if self.elementary and not isprime(self.exponent):
            raise UsageError(f"F{self.exponent}^{self.rank} needs a prime exponent")

    @property
    def name(self) -> str:
        if self.elementary:
            return f"F{self.exponent}" if self.rank == 1 else f"F{self.exponent}^{self.rank}"
        return f"Z/{self.exponent}"

    @property
    def order(self) -> int:
        return self.exponent ** self.rank

    def elements(self) -> Iterator[tuple[int, ...]]:
        return product(range(self.exponent), repeat=self.rank)

    def act(self, scalar: int, element) -> tuple[int, ...]:
        element = (element,) if isinstance(element, int) else tuple(element)
        if len(element) != self.rank:
            raise UsageError(f"{element} is not an element of {self.name}")
        return tuple((scalar * g) % self.exponent for g in element)

    def annihilated_by(self, ring: BaseRing) -> bool:
        return ring.characteristic % self.exponent == 0


def parse_group(text: str) -> Bimodule:
    match = GROUP_RE.match(text.replace(" ", ""))
    if not match:
        raise UsageError(f"unknown group {text!r}; expected F<p>^<r> or Z/<m>")
    if match.group("m"):
        m = int(match.group("m"))
        prime = m >= 2 and isprime(m)
        return Bimodule(m, 1, elementary=prime)
    return Bimodule(int(match.group("p")), int(match.group("r") or 1))


def load_bimodule(payload: Mapping) -> Bimodule:
    """Read {"group": ..., "left_action": [[b, g, b*g], ...], "right_action": [[a, g, g*a], ...]}."""
    if "group" not in payload:
        raise UsageError("bimodule descriptor needs a 'group' entry")
    module = parse_group(str(payload["group"]))
    for side in ("left_action", "right_action"):
        for entry in payload.get(side, []):
            if len(entry) != 3:
                raise UsageError(f"{side} entries are [scalar, element, result], got {entry}")
            scalar, element, result = entry
            expected = module.act(int(scalar), element)
            given = module.act(1, result)
            if given != expected:
                raise UsageError(f"{side} sends {element} to {result} under {scalar}; the group forces {list(expected)}")
    return module


@dataclass(frozen=True)
class TriangularRing:
    a: BaseRing
    b: BaseRing
    m: Bimodule

    def __post_init__(self):
        for side, ring in (("A", self.a), ("B", self.b)):
            if not self.m.annihilated_by(ring):
                raise UsageError(f"{self.m.name} is not a module over {side} = {ring}")

    @property
    def name(self) -> str:
        return f"T({self.a.name},{self.b.name},{self.m.name})"

    @property
    def field_prime(self) -> int:
        """p when A = B = F_p and M = F_p^r; comma objects are only built in that case."""
        a, b = self.a, self.b
        if a.is_field and b.is_field and a.characteristic == b.characteristic == self.m.exponent and self.m.elementary:
            return a.characteristic
        raise CapabilityError(f"comma objects need A = B = F_p and M = F_p^r, not {self.name}")

    @property
    def quiver(self) -> Quiver:
        return kronecker_quiver(tuple(f"m{k}" for k in range(1, self.m.rank + 1)), "A", "B")


@dataclass(frozen=True, eq=False)
class CommaObject:
    ring: TriangularRing
    dim_x: int
    dim_y: int
    theta: np.ndarray

    def __post_init__(self):
        p = self.ring.field_prime
        theta = np.array(self.theta, dtype=DTYPE).reshape(self.ring.m.rank, self.dim_y, self.dim_x) % p
        theta.setflags(write=False)
        object.__setattr__(self, "theta", theta)

    @classmethod
    def from_table(cls, ring: TriangularRing, dim_x: int, dim_y: int, table: Mapping) -> "CommaObject":
        """Build from theta(m, x) for every m in M and x in X, checking additivity and balance."""
        p = ring.field_prime
        xs = list(product(range(p), repeat=dim_x))
        ms = list(ring.m.elements())

        def value(m, x) -> np.ndarray:
            try:
                return np.array(table[(tuple(m), tuple(x))], dtype=DTYPE).reshape(dim_y) % p
            except KeyError:
                raise UsageError(f"theta table misses the entry for ({m}, {x})") from None

        for m1, m2 in product(ms, repeat=2):
            for x in xs:
                m12 = tuple((u + v) % p for u, v in zip(m1, m2))
                if np.any((value(m12, x) - value(m1, x) - value(m2, x)) % p):
                    raise UsageError("theta is not additive in the bimodule argument")
        for m in ms:
            for x1, x2 in product(xs, repeat=2):
                x12 = tuple((u + v) % p for u, v in zip(x1, x2))
                if np.any((value(m, x12) - value(m, x1) - value(m, x2)) % p):
                    raise UsageError("theta is not additive in the module argument")
            for c in range(p):
                for x in xs:
                    left = value(ring.m.act(c, m), x)
                    if np.any((left - value(m, tuple(c * u % p for u in x))) % p):
                        raise UsageError("theta is not balanced over A")
                    if np.any((left - c * value(m, x)) % p):
                        raise UsageError("theta is not B-linear")

        theta = np.zeros((ring.m.rank, dim_y, dim_x), dtype=DTYPE)
        for k in range(ring.m.rank):
            basis_m = tuple(int(j == k) for j in range(ring.m.rank))
            for i in range(dim_x):
                theta[k, :, i] = value(basis_m, tuple(int(j == i) for j in range(dim_x)))
        return cls(ring, dim_x, dim_y, theta)

    def table(self) -> dict:
        p = self.ring.field_prime
        out = {}
        for m in self.ring.m.elements():
            for x in product(range(p), repeat=self.dim_x):
                y = sum(c * (self.theta[k] @ np.array(x, dtype=DTYPE)) for k, c in enumerate(m))
                out[(tuple(m), tuple(x))] = tuple(int(v) for v in np.reshape(y, self.dim_y) % p)
        return out

    def as_representation(self) -> FiniteRep:
        quiver = self.ring.quiver
        mats = {a.name: self.theta[k] for k, a in enumerate(quiver.arrows)}
        return FiniteRep.build(quiver, self.ring.field_prime, {"A": self.dim_x, "B": self.dim_y}, mats)

    @classmethod
    def from_representation(cls, ring: TriangularRing, rep: FiniteRep) -> "CommaObject":
        if rep.quiver != ring.quiver or rep.p != ring.field_prime:
            raise UsageError("representation does not belong to this triangular ring")
        dx, dy = rep.dim("A"), rep.dim("B")
        theta = np.array([m for m in rep.mats], dtype=DTYPE).reshape(ring.m.rank, dy, dx)
        return cls(ring, dx, dy, theta)

    @property
    def is_zero(self) -> bool:
        return self.dim_x == 0 and self.dim_y == 0

    def key(self) -> tuple:
        return (self.dim_x, self.dim_y, matrix_key(self.theta.reshape(-1, max(self.dim_x, 1))))


@dataclass(frozen=True, eq=False)
class CommaMorphism:
    """alpha: X -> X' and beta: Y -> Y' with beta theta_k = theta'_k alpha."""
    source: CommaObject
    target: CommaObject
    alpha: np.ndarray
    beta: np.ndarray

    def __post_init__(self):
        p = self.source.ring.field_prime
        alpha = np.array(self.alpha, dtype=DTYPE).reshape(self.target.dim_x, self.source.dim_x) % p
        beta = np.array(self.beta, dtype=DTYPE).reshape(self.target.dim_y, self.source.dim_y) % p
        for k in range(self.source.ring.m.rank):
            if np.any((beta @ self.source.theta[k] - self.target.theta[k] @ alpha) % p):
                raise UsageError("the square does not commute; not a morphism of comma objects")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)

    def then(self, other: "CommaMorphism") -> "CommaMorphism":
        """other after self."""
        p = self.source.ring.field_prime
        return CommaMorphism(self.source, other.target, (other.alpha @ self.alpha) % p, (other.beta @ self.beta) % p)

    @property
    def is_zero(self) -> bool:
        return not (np.any(self.alpha) or np.any(self.beta))

    @property
    def is_mono(self) -> bool:
        p = self.source.ring.field_prime
        return rank(self.alpha, p) == self.source.dim_x and rank(self.beta, p) == self.source.dim_y

    @classmethod
    def identity(cls, obj: CommaObject) -> "CommaMorphism":
        return cls(obj, obj, np.eye(obj.dim_x, dtype=DTYPE), np.eye(obj.dim_y, dtype=DTYPE))

    @classmethod
    def zero(cls, source: CommaObject, target: CommaObject) -> "CommaMorphism":
        return cls(source, target, np.zeros((target.dim_x, source.dim_x)), np.zeros((target.dim_y, source.dim_y)))


def _empty_theta(ring: TriangularRing, dim_x: int, dim_y: int) -> np.ndarray:
    return np.zeros((ring.m.rank, dim_y, dim_x), dtype=DTYPE)


def stalk_a(ring: TriangularRing, dim_x: int) -> CommaObject:
    return CommaObject(ring, dim_x, 0, _empty_theta(ring, dim_x, 0))


def stalk_b(ring: TriangularRing, dim_y: int) -> CommaObject:
    return CommaObject(ring, 0, dim_y, _empty_theta(ring, 0, dim_y))


def k_a(obj: CommaObject) -> np.ndarray:
    """Echelon basis of {x in X : theta(m, x) = 0 for all m}."""
    stacked = obj.theta.reshape(obj.ring.m.rank * obj.dim_y, obj.dim_x)
    return nullspace(stacked, obj.ring.field_prime)


def k_b(obj: CommaObject) -> np.ndarray:
    return np.eye(obj.dim_y, dtype=DTYPE)


def counit_a(obj: CommaObject) -> CommaMorphism:
    basis = k_a(obj)
    return CommaMorphism(stalk_a(obj.ring, basis.shape[0]), obj, basis.T, np.zeros((obj.dim_y, 0)))


def counit_b(obj: CommaObject) -> CommaMorphism:
    return CommaMorphism(stalk_b(obj.ring, obj.dim_y), obj, np.zeros((obj.dim_x, 0)), np.eye(obj.dim_y, dtype=DTYPE))


def _projection(basis: np.ndarray, dim: int, p: int) -> np.ndarray:
    pivots = _pivots(basis)
    kept = complement_columns(pivots, dim)
    columns = [reduce_mod(np.eye(dim, dtype=DTYPE)[j], basis, pivots, p)[kept] for j in range(dim)]
    return np.array(columns, dtype=DTYPE).reshape(dim, len(kept)).T


def comma_kernel(morphism: CommaMorphism) -> tuple[CommaObject, CommaMorphism]:
    source = morphism.source
    p = source.ring.field_prime
    spaces = (nullspace(morphism.alpha, p), nullspace(morphism.beta, p))
    kernel = CommaObject.from_representation(source.ring, restrict(SubRep(source.as_representation(), spaces)))
    inclusion = CommaMorphism(kernel, source, spaces[0].T, spaces[1].T)
    return kernel, inclusion


def comma_cokernel(morphism: CommaMorphism) -> tuple[CommaObject, CommaMorphism]:
    target = morphism.target
    p = target.ring.field_prime
    spaces = (
        image_basis(morphism.alpha, np.eye(morphism.source.dim_x, dtype=DTYPE), p),
        image_basis(morphism.beta, np.eye(morphism.source.dim_y, dtype=DTYPE), p),
    )
    cokernel = CommaObject.from_representation(target.ring, quotient(target.as_representation(), SubRep(target.as_representation(), spaces)))
    projection = CommaMorphism(
        target, cokernel, _projection(spaces[0], target.dim_x, p), _projection(spaces[1], target.dim_y, p)
    )
    return cokernel, projection


def comma_homs(source: CommaObject, target: CommaObject, limit: int | None = None) -> list[CommaMorphism]:
    return [
        CommaMorphism(source, target, maps[0], maps[1])
        for maps in homomorphisms(source.as_representation(), target.as_representation(), limit)
    ]


def enumerate_comma_objects(ring: TriangularRing, max_order: int = 4) -> Iterator[CommaObject]:
    """All (X, Y, theta) with |X|, |Y| <= max_order, one per raw theta table."""
    p = ring.field_prime
    dims = [d for d in range(max_order + 1) if p ** d <= max_order]
    for dx, dy in product(dims, repeat=2):
        for flat in all_matrices(ring.m.rank * dy, dx, p):
            yield CommaObject(ring, dx, dy, flat)


def verify_theorem_b(ring: TriangularRing, max_order: int = 4, limits: OracleLimits | None = None) -> VerificationReport:
    limits = limits or OracleLimits()
    objects = list(enumerate_comma_objects(ring, max_order))
    shared = common_nonzero_subobject(
        stalk_a(ring, 1).as_representation(), stalk_b(ring, 1).as_representation(), limits
    )
    undetected = [
        {"dims": [z.dim_x, z.dim_y]}
        for z in objects
        if not z.is_zero and k_a(z).shape[0] == 0 and k_b(z).shape[0] == 0
    ]
    not_mono = [
        {"dims": [z.dim_x, z.dim_y], "counit": side}
        for z in objects
        for side, counit in (("A", counit_a), ("B", counit_b))
        if not counit(z).is_mono
    ]
    checks = [
        CheckResult("stalks_share_only_zero", not shared, []),
        CheckResult("kernel_functors_detect_nonzero", not undetected, undetected),
        CheckResult("counits_are_mono", not not_mono, not_mono),
    ]
    counts = {"objects": len(objects), "nonzero": sum(not z.is_zero for z in objects)}
    logger.info("comma objects of %s up to order %d: %s", ring.name, max_order, counts)
    return VerificationReport(Verdict.YES, checks, counts)


def _triangular_label(a: BaseRing, b: BaseRing, point: AtomPoint) -> str:
    if point.vertex == "A":
        return f"<T/[[{point.prime.label},0],[M,{b.name}]]>"
    return f"<T/[[{a.name},0],[M,{point.prime.label}]]>"


def triangular_spectrum(a: BaseRing, b: BaseRing, m: Bimodule) -> AtomSpectrum:
    ring = TriangularRing(a, b, m)
    return AtomSpectrum(
        ring=ring.name,
        copies=(SpectrumCopy("A", spectrum_of(a)), SpectrumCopy("B", spectrum_of(b))),
        status=Status.COMPLETE,
        labeler=partial(_triangular_label, a, b),
    )
