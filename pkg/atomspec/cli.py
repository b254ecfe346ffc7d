"""
Command-line stages: read the input, analyze it, write the artifact.
"""
import argparse
import json
import logging
import sys
from dataclasses import dataclass

from .algebra import BoundQuiver, is_admissible, load_bound_quiver
from .const import (
    COMMANDS,
    DEFAULT_DEGREE_BOUND,
    DEFAULT_DIM_BOUND,
    DEFAULT_FORMATS,
    DEFAULT_M_MAX,
    DEFAULT_PRIME_SAMPLE,
    EXIT_OK,
    FORMATS,
    GUARD_HOM,
    GUARD_SUBMODULES,
    GUARD_TUPLES,
)
from .errors import AtomSpecError, CapabilityError, NonAdmissibleRelationError, UsageError
from .ideal import IdealHandle, is_right_rooted
from .models import OracleLimits
from .oracle import verify_theorem_a
from .rings import parse_prime, parse_ring
from .spectrum import atom_spectrum, comonoform_ideal, emit, special_presentation
from .triangular import Bimodule, load_bimodule, triangular_spectrum
from .utils import load_json, read_source, render_table, write_artifact

logger = logging.getLogger(__name__)

SUPPORTED_FORMATS = {
    "check": ("text", "json"),
    "spectrum": ("json", "dot", "text"),
    "ideal": ("text", "json"),
    "verify": ("json", "text"),
    "triangular": ("json", "dot", "text"),
}


def parse_primes(text: str) -> tuple[int, ...]:
    try:
        primes = tuple(int(p) for p in text.split(",") if p.strip())
    except ValueError:
        raise UsageError(f"--primes expects a comma separated list of integers, got {text!r}") from None
    return primes


@dataclass(frozen=True)
class RunConfig:
    command: str
    input: str | None = None
    fmt: str | None = None
    degree_bound: int = DEFAULT_DEGREE_BOUND
    m_max: int = DEFAULT_M_MAX
    dim_bound: int = DEFAULT_DIM_BOUND
    primes: tuple[int, ...] = DEFAULT_PRIME_SAMPLE
    guard_submodules: int = GUARD_SUBMODULES
    guard_hom: int = GUARD_HOM
    guard_tuples: int = GUARD_TUPLES
    out: str | None = None
    vertex: str | None = None
    prime: str | None = None
    ring: str = "F2"
    ring_a: str = "F2"
    ring_b: str = "F2"
    presentation: str | None = None

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}; expected one of {', '.join(COMMANDS)}")
        if self.fmt is None:
            object.__setattr__(self, "fmt", DEFAULT_FORMATS[self.command])
        if self.fmt not in FORMATS or self.fmt not in SUPPORTED_FORMATS[self.command]:
            raise UsageError(f"format {self.fmt!r} is not available for {self.command}")
        for name in ("degree_bound", "m_max", "dim_bound", "guard_submodules", "guard_hom", "guard_tuples"):
            if getattr(self, name) < 1:
                raise UsageError(f"{name.replace('_', '-')} must be positive")
        if not self.primes or any(p < 2 for p in self.primes):
            raise UsageError("the prime sample must list primes")
        if self.input is None and not (self.command == "spectrum" and self.presentation):
            raise UsageError(f"{self.command} needs an input file")

    @property
    def limits(self) -> OracleLimits:
        return OracleLimits(self.guard_submodules, self.guard_hom, self.guard_tuples)

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        return cls(
            command=args.command,
            input=args.input,
            fmt=args.format,
            degree_bound=args.degree_bound,
            m_max=args.mmax,
            dim_bound=args.dim_bound,
            primes=parse_primes(args.primes),
            guard_submodules=args.guard_submodules,
            guard_hom=args.guard_hom,
            guard_tuples=args.guard_tuples,
            out=args.out,
            vertex=args.vertex,
            prime=args.prime,
            ring=args.ring,
            ring_a=args.ring_a,
            ring_b=args.ring_b,
            presentation=args.presentation,
        )


class SourceExtractor:
    def __init__(self, cfg: RunConfig):
        self.cfg = cfg

    def extract(self) -> BoundQuiver | Bimodule | None:
        if self.cfg.input is None:
            return None
        if self.cfg.command == "triangular":
            return load_bimodule(load_json(self.cfg.input))
        return load_bound_quiver(read_source(self.cfg.input))

    def __call__(self) -> BoundQuiver | Bimodule | None:
        return self.extract()


class Analyzer:
    def __init__(self, cfg: RunConfig):
        self.cfg = cfg

    def _check(self, source: BoundQuiver) -> str:
        rows = [
            {
                "relation": r.text,
                "span": r.span,
                "admissible": "yes" if is_admissible(r) else "no",
            }
            for r in source.relations
        ]
        for relation in source.relations:
            if not is_admissible(relation):
                raise NonAdmissibleRelationError(relation)
        verdict = is_right_rooted(source.quiver, source.relations, self.cfg.degree_bound, self.cfg.m_max)
        if self.cfg.fmt == "json":
            payload = {"relations": rows, "right_rooted": verdict.value}
            return json.dumps(payload, indent=2) + "\n"
        table = render_table(rows, ["relation", "span", "admissible"])
        return table + f"right rooted: {verdict.value}\n"

    def _spectrum(self, source: BoundQuiver | None) -> str:
        cfg = self.cfg
        if cfg.presentation:
            ring = parse_ring(cfg.ring)
            prime = parse_prime(cfg.prime, ring) if cfg.prime else None
            if cfg.vertex and not cfg.vertex.isdigit():
                raise UsageError(f"presentation vertices are numbered, got {cfg.vertex!r}")
            vertex = int(cfg.vertex) if cfg.vertex else 1
            return special_presentation(cfg.presentation, ring, vertex, prime).render()
        spectrum = atom_spectrum(source.quiver, source.relations, source.ring, cfg.degree_bound, cfg.m_max)
        return emit(spectrum, cfg.fmt, cfg.primes)

    def _ideal(self, source: BoundQuiver) -> str:
        cfg = self.cfg
        if cfg.vertex is None or cfg.prime is None:
            raise UsageError("ideal needs --vertex and --prime")
        ideal = comonoform_ideal(source.quiver, source.ring, cfg.vertex, parse_prime(cfg.prime, source.ring))
        if cfg.fmt == "json":
            payload = {
                "vertex": ideal.vertex,
                "prime": ideal.prime.to_json(),
                "label": ideal.label,
                "generators": ideal.render(),
            }
            return json.dumps(payload, indent=2) + "\n"
        lines = [f"comonoform ideal {ideal.label}", "generators:"]
        lines += [f"  {g}" for g in ideal.render()]
        try:
            relation_ideal = IdealHandle.build(source.quiver, source.ring, source.relations, cfg.degree_bound)
            described = relation_ideal.describe()
            if described:
                lines += ["relation ideal:"] + [f"  {line}" for line in described]
        except CapabilityError as e:
            logger.warning("relation ideal not listed: %s", e)
        return "\n".join(lines) + "\n"

    def _verify(self, source: BoundQuiver) -> str:
        cfg = self.cfg
        ring = source.ring
        if ring.is_field:
            p = ring.characteristic
        elif cfg.prime and cfg.prime.isdigit():
            p = int(cfg.prime)
        else:
            raise CapabilityError(f"the oracle runs over a prime field; pass --prime for {ring}")
        report = verify_theorem_a(
            source.quiver, source.relations, p, cfg.dim_bound, cfg.limits, cfg.degree_bound, cfg.m_max
        )
        if cfg.fmt == "json":
            return report.render() + "\n"
        rows = [
            {"check": c.name, "pass": c.passed, "witnesses": len(c.witnesses)}
            for c in report.checks
        ]
        counts = "\n".join(f"{k}: {v}" for k, v in report.counts.items())
        return render_table(rows, ["check", "pass", "witnesses"]) + f"right rooted: {report.right_rooted.value}\n" + counts + "\n"

    def _triangular(self, module: Bimodule) -> str:
        spectrum = triangular_spectrum(parse_ring(self.cfg.ring_a), parse_ring(self.cfg.ring_b), module)
        return emit(spectrum, self.cfg.fmt, self.cfg.primes)

    def analyze(self, source) -> str:
        match self.cfg.command:
            case "check":
                return self._check(source)
            case "spectrum":
                return self._spectrum(source)
            case "ideal":
                return self._ideal(source)
            case "verify":
                return self._verify(source)
            case "triangular":
                return self._triangular(source)
            case _other:
                raise UsageError(f"Command {_other} not recognized.")

    def __call__(self, source) -> str:
        return self.analyze(source)


class ArtifactLoader:
    def __init__(self, cfg: RunConfig):
        self.cfg = cfg

    def load(self, artifact: str) -> None:
        write_artifact(artifact, self.cfg.out, sys.stdout)

    def __call__(self, artifact: str) -> None:
        self.load(artifact)


def run(cfg: RunConfig) -> int:
    # Initialise stages
    extractor = SourceExtractor(cfg)
    analyzer = Analyzer(cfg)
    loader = ArtifactLoader(cfg)

    # Run stages
    try:
        source = extractor()
        artifact = analyzer(source)
        loader(artifact)
    except AtomSpecError as e:
        logger.error("%s", e)
        return e.exit_code
    logger.info("%s finished", cfg.command)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="atomspec", description="Atom spectra of bound quiver algebras")
    parser.add_argument("command", choices=COMMANDS, help="What to compute")
    parser.add_argument("input", nargs="?", help="Quiver DSL file, or bimodule JSON for triangular")
    parser.add_argument("--format", choices=FORMATS, default=None, help="Output format")
    parser.add_argument("--degree-bound", type=int, default=DEFAULT_DEGREE_BOUND, help="Rewriting basis degree cutoff")
    parser.add_argument("--mmax", type=int, default=DEFAULT_M_MAX, help="Largest arrow ideal power tried")
    parser.add_argument("--dim-bound", type=int, default=DEFAULT_DIM_BOUND, help="Oracle total dimension bound")
    parser.add_argument("--primes", default=",".join(map(str, DEFAULT_PRIME_SAMPLE)), help="Prime sample for Spec Z")
    parser.add_argument("--guard-submodules", type=int, default=GUARD_SUBMODULES)
    parser.add_argument("--guard-hom", type=int, default=GUARD_HOM)
    parser.add_argument("--guard-tuples", type=int, default=GUARD_TUPLES)
    parser.add_argument("--out", default=None, help="Write the artifact here instead of stdout")
    parser.add_argument("--vertex", default=None, help="Vertex for ideal and presentations")
    parser.add_argument("--prime", default=None, help="Prime generator, 0 for the zero ideal")
    parser.add_argument("--ring", default="F2", help="Base ring for --presentation")
    parser.add_argument("--ring-a", default="F2", help="Ring A of the triangular ring")
    parser.add_argument("--ring-b", default="F2", help="Ring B of the triangular ring")
    parser.add_argument("--presentation", default=None, help="subspace(n) or free(n,m)")
    parser.add_argument("-v", "--verbose", action="store_true", help="Log progress")
    return parser
