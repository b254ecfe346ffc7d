"""
Base rings (prime fields, Z, Z/n) and their prime spectra.

Opens of a spectrum are the specialization-closed (upward closed) subsets;
Spec Z is kept symbolic so that no fake finiteness is introduced.
"""
import math
import re
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations
from typing import Callable, Iterable, Literal

from sympy import factorint, isprime

from .const import DEFAULT_PRIME_SAMPLE, MAX_TOPOLOGY_SAMPLE
from .errors import ResourceError, UsageError

RING_RE = re.compile(r"^(?:F(?P<field>\d+)|Z(?:/(?P<mod>\d+))?)$")


class RingKind(str, Enum):
    PRIME_FIELD = "prime_field"
    INTEGERS = "integers"
    INTEGERS_MOD = "integers_mod"


@dataclass(frozen=True)
class BaseRing:
    kind: RingKind
    modulus: int | None = None
    factorization: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        match self.kind:
            case RingKind.PRIME_FIELD:
                if self.modulus is None or not isprime(self.modulus):
                    raise UsageError(f"F{self.modulus} is not a prime field")
            case RingKind.INTEGERS:
                if self.modulus is not None:
                    raise UsageError("the integer ring carries no modulus")
            case RingKind.INTEGERS_MOD:
                if self.modulus is None or self.modulus < 2:
                    raise UsageError("Z/n needs n >= 2")
                if math.prod(p**e for p, e in self.factorization) != self.modulus:
                    raise UsageError(f"factorization does not multiply to {self.modulus}")

    @classmethod
    def prime_field(cls, p: int) -> "BaseRing":
        return cls(RingKind.PRIME_FIELD, int(p))

    @classmethod
    def integers(cls) -> "BaseRing":
        return cls(RingKind.INTEGERS)

    @classmethod
    def integers_mod(cls, n: int) -> "BaseRing":
        n = int(n)
        if n < 2:
            raise UsageError("Z/n needs n >= 2")
        return cls(RingKind.INTEGERS_MOD, n, tuple(sorted(factorint(n).items())))

    @property
    def name(self) -> str:
        match self.kind:
            case RingKind.PRIME_FIELD:
                return f"F{self.modulus}"
            case RingKind.INTEGERS:
                return "Z"
            case _:
                return f"Z/{self.modulus}"

    def __str__(self) -> str:
        return self.name

    @property
    def is_finite(self) -> bool:
        return self.modulus is not None

    @property
    def is_field(self) -> bool:
        return self.kind is RingKind.PRIME_FIELD or (
            self.kind is RingKind.INTEGERS_MOD and len(self.factorization) == 1
            and self.factorization[0][1] == 1
        )

    @property
    def characteristic(self) -> int:
        return self.modulus or 0

    @property
    def prime_divisors(self) -> tuple[int, ...]:
        if self.kind is RingKind.PRIME_FIELD:
            return (self.modulus,)
        return tuple(p for p, _ in self.factorization)

    def canon(self, x: int) -> int:
        return int(x) % self.modulus if self.modulus else int(x)

    def add(self, x: int, y: int) -> int:
        return self.canon(x + y)

    def neg(self, x: int) -> int:
        return self.canon(-x)

    def sub(self, x: int, y: int) -> int:
        return self.canon(x - y)

    def mul(self, x: int, y: int) -> int:
        return self.canon(x * y)

    def is_zero(self, x: int) -> bool:
        return self.canon(x) == 0

    def is_unit(self, x: int) -> bool:
        x = self.canon(x)
        if self.modulus is None:
            return x in (1, -1)
        return math.gcd(x, self.modulus) == 1

    def inverse(self, x: int) -> int:
        if not self.is_unit(x):
            raise UsageError(f"{x} is not invertible in {self.name}")
        if self.modulus is None:
            return self.canon(x)
        return pow(self.canon(x), -1, self.modulus)

    def elements(self) -> range:
        if self.modulus is None:
            raise UsageError("Z has no finite element list")
        return range(self.modulus)


def parse_ring(text: str) -> BaseRing:
    match = RING_RE.match(text.strip())
    if not match:
        raise UsageError(f"unknown ring descriptor {text!r}; expected Fp, Z or Z/n")
    if match.group("field"):
        return BaseRing.prime_field(int(match.group("field")))
    if match.group("mod"):
        return BaseRing.integers_mod(int(match.group("mod")))
    return BaseRing.integers()


@dataclass(frozen=True)
class PrimePoint:
    tag: Literal["zero", "prime", "unique"]
    p: int | None = None

    @classmethod
    def zero(cls) -> "PrimePoint":
        return cls("zero")

    @classmethod
    def unique(cls) -> "PrimePoint":
        return cls("unique")

    @classmethod
    def prime(cls, p: int) -> "PrimePoint":
        return cls("prime", int(p))

    @property
    def sort_key(self) -> tuple[int, int]:
        return (1, self.p) if self.tag == "prime" else (0, 0)

    @property
    def label(self) -> str:
        return f"({self.p})" if self.tag == "prime" else "(0)"

    @property
    def token(self) -> str:
        return str(self.p) if self.tag == "prime" else "0"

    def __str__(self) -> str:
        return self.label

    def to_json(self) -> dict:
        if self.tag == "prime":
            return {"tag": "prime", "p": self.p}
        return {"tag": self.tag}

    def generators(self) -> tuple[int, ...]:
        return (self.p,) if self.tag == "prime" else ()

    def contains(self, ring: BaseRing, c: int) -> bool:
        if self.tag == "prime":
            return ring.canon(c) % self.p == 0
        return ring.is_zero(c)


def parse_prime(text: str, ring: BaseRing) -> PrimePoint:
    """Read a prime of `ring` from its generator, "0" meaning the zero ideal."""
    text = text.strip().strip("()")
    if not text.isdigit():
        raise UsageError(f"prime must be given by an integer generator, got {text!r}")
    value = int(text)
    if value == 0:
        point = PrimePoint.unique() if ring.kind is RingKind.PRIME_FIELD else PrimePoint.zero()
    else:
        point = PrimePoint.prime(value)
    if not spectrum_of(ring).contains(point):
        raise UsageError(f"{point} is not a prime ideal of {ring}")
    return point


@dataclass(frozen=True)
class SpectrumModel:
    ring: BaseRing
    finite_points: tuple[PrimePoint, ...] | None = None

    @property
    def is_symbolic(self) -> bool:
        return self.finite_points is None

    @property
    def points(self) -> tuple[PrimePoint, ...]:
        if self.finite_points is None:
            raise UsageError("Spec Z is infinite; take a sample instead")
        return self.finite_points

    def contains(self, point: PrimePoint) -> bool:
        if self.finite_points is not None:
            return point in self.finite_points
        return point.tag == "zero" or (point.tag == "prime" and isprime(point.p))

    def leq(self, x: PrimePoint, y: PrimePoint) -> bool:
        for point in (x, y):
            if not self.contains(point):
                raise UsageError(f"{point} is not a point of Spec {self.ring}")
        return x == y or x.tag == "zero"

    def sample(self, primes: Iterable[int] = DEFAULT_PRIME_SAMPLE) -> tuple[PrimePoint, ...]:
        if self.finite_points is not None:
            return self.finite_points
        chosen = sorted(set(int(p) for p in primes))
        bad = [p for p in chosen if not isprime(p)]
        if bad:
            raise UsageError(f"prime sample contains non-primes {bad}")
        return (PrimePoint.zero(),) + tuple(PrimePoint.prime(p) for p in chosen)


def spectrum_of(ring: BaseRing) -> SpectrumModel:
    match ring.kind:
        case RingKind.PRIME_FIELD:
            return SpectrumModel(ring, (PrimePoint.unique(),))
        case RingKind.INTEGERS_MOD:
            return SpectrumModel(ring, tuple(PrimePoint.prime(p) for p in ring.prime_divisors))
        case _:
            return SpectrumModel(ring, None)


@dataclass(frozen=True)
class SpecSubset:
    points: frozenset[PrimePoint] = field(default_factory=frozenset)
    everything: bool = False

    @classmethod
    def of(cls, points: Iterable[PrimePoint]) -> "SpecSubset":
        return cls(frozenset(points))

    @classmethod
    def whole(cls) -> "SpecSubset":
        return cls(frozenset(), True)

    @classmethod
    def empty(cls) -> "SpecSubset":
        return cls()

    @classmethod
    def finite_primes(cls, primes: Iterable[int]) -> "SpecSubset":
        return cls(frozenset(PrimePoint.prime(p) for p in primes))

    def contains(self, point: PrimePoint) -> bool:
        return self.everything or point in self.points

    def __contains__(self, point: PrimePoint) -> bool:
        return self.contains(point)

    def union(self, other: "SpecSubset") -> "SpecSubset":
        if self.everything or other.everything:
            return SpecSubset.whole()
        return SpecSubset(self.points | other.points)

    def intersection(self, other: "SpecSubset") -> "SpecSubset":
        if self.everything:
            return other
        if other.everything:
            return self
        return SpecSubset(self.points & other.points)


def is_open(subset: SpecSubset, model: SpectrumModel) -> bool:
    if subset.everything:
        return True
    for point in subset.points:
        if not model.contains(point):
            raise UsageError(f"{point} is not a point of Spec {model.ring}")
    if model.is_symbolic:
        # a finite set holding (0) misses infinitely many primes above it
        return PrimePoint.zero() not in subset.points
    return all(
        y in subset.points
        for x in subset.points
        for y in model.points
        if model.leq(x, y)
    )


def specialization_order(points, opens) -> frozenset:
    """x <= y iff every open set containing x also contains y."""
    points = tuple(points)
    opens = [frozenset(u) for u in opens]
    return frozenset(
        (x, y)
        for x in points
        for y in points
        if all(y in u for u in opens if x in u)
    )


def specialization_order_from_topology(
    model: SpectrumModel,
    sample: Iterable[PrimePoint],
    opens: Callable[[SpecSubset, SpectrumModel], bool] = is_open,
) -> frozenset[tuple[PrimePoint, PrimePoint]]:
    sample = tuple(sample)
    if len(sample) > MAX_TOPOLOGY_SAMPLE:
        raise ResourceError(
            f"sample of {len(sample)} points exceeds the limit {MAX_TOPOLOGY_SAMPLE}"
        )
    traces = [
        frozenset(chosen)
        for size in range(len(sample) + 1)
        for chosen in combinations(sample, size)
        if opens(SpecSubset.of(chosen), model)
    ]
    # the whole space is open and its trace is the full sample
    traces.append(frozenset(sample))
    return specialization_order(sample, traces)
