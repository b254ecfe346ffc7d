"""
Unit tests for the quiver, ring and path-algebra building blocks.
Tests the basic functionality of each component in isolation.
"""
import numpy as np
import pytest

from atomspec.algebra import (
    AlgebraElement,
    Relation,
    is_admissible,
    load_bound_quiver,
    parse_element,
    path_element,
    path_relations,
)
from atomspec.errors import CompositionError, ParseError, UsageError
from atomspec.quiver import (
    Arrow,
    Path,
    Quiver,
    chain_quiver,
    compose,
    enumerate_paths,
    is_acyclic,
    kronecker_quiver,
    loop_quiver,
    parse_quiver,
    paths_of_length,
    render_source,
    subspace_quiver,
)
from atomspec.rings import (
    BaseRing,
    PrimePoint,
    SpecSubset,
    is_open,
    parse_prime,
    parse_ring,
    specialization_order_from_topology,
    spectrum_of,
)

KRONECKER_SOURCE = """\
vertices 1 2;
arrows a: 1 -> 2, b: 1 -> 2;
relations a - b;
ring F2;
"""


@pytest.fixture
def f2():
    return BaseRing.prime_field(2)


@pytest.fixture
def jordan():
    return loop_quiver(1)


class TestQuiver:
    """Unit tests for quivers and paths"""

    def test_vertices_are_sorted(self):
        """Test that vertices are kept in a canonical order"""
        quiver = Quiver(("2", "1"), (Arrow("a", "1", "2"),))
        assert quiver.vertices == ("1", "2")

    def test_duplicate_arrow_rejected(self):
        """Test that arrow names must be distinct"""
        with pytest.raises(UsageError):
            Quiver(("1",), (Arrow("x", "1", "1"), Arrow("x", "1", "1")))

    def test_arrow_endpoint_outside_vertices(self):
        """Test that arrows must join known vertices"""
        with pytest.raises(UsageError):
            Quiver(("1",), (Arrow("a", "1", "2"),))

    def test_path_render_collapses_powers(self, jordan):
        """Test composite notation with repeated arrows"""
        assert jordan.path(["X", "X", "X"]).render() == "X^3"
        assert Path.trivial("1").render() == "e_1"

    def test_path_render_reverses_arrows(self):
        """Test that a_n*...*a_1 lists the last arrow first"""
        chain = chain_quiver(3)
        assert chain.path(["d1", "d2"]).render() == "d2*d1"

    def test_compose(self):
        """Test composition pq means first q, then p"""
        chain = chain_quiver(3)
        p, q = chain.arrow_path("d2"), chain.arrow_path("d1")
        assert compose(p, q) == Path("1", "3", ("d1", "d2"))

    def test_compose_rejects_mismatch(self):
        """Test that non-composable paths raise"""
        chain = chain_quiver(3)
        with pytest.raises(CompositionError):
            compose(chain.arrow_path("d1"), chain.arrow_path("d2"))

    def test_path_rejects_gap(self):
        """Test building a path from non-composable arrows"""
        with pytest.raises(CompositionError):
            kronecker_quiver().path(["a", "b"])

    def test_vertices_along(self):
        """Test the vertices visited by a path"""
        chain = chain_quiver(4)
        assert chain.vertices_along(chain.path(["d1", "d2", "d3"])) == ("1", "2", "3", "4")

    @pytest.mark.parametrize(
        "quiver",
        [loop_quiver(2), chain_quiver(4), kronecker_quiver(), subspace_quiver(3)],
        ids=["two_loops", "chain", "kronecker", "sigma3"],
    )
    def test_composition_is_associative(self, quiver):
        """Test (pq)r == p(qr) on every composable triple of short paths"""
        paths = enumerate_paths(quiver, 2)
        for p in paths:
            for q in paths:
                if q.target != p.source:
                    continue
                for r in paths:
                    if r.target == q.source:
                        assert compose(compose(p, q), r) == compose(p, compose(q, r))

    @pytest.mark.parametrize(
        "quiver",
        [loop_quiver(2), chain_quiver(3), kronecker_quiver(), subspace_quiver(3)],
        ids=["two_loops", "chain", "kronecker", "sigma3"],
    )
    def test_enumeration_is_truncation_stable(self, quiver):
        """Test that paths up to m, cut at m - 1, are the paths up to m - 1"""
        for m in range(1, 5):
            shorter = [p for p in enumerate_paths(quiver, m) if p.length <= m - 1]
            assert shorter == enumerate_paths(quiver, m - 1)

    def test_enumerate_paths(self):
        """Test path enumeration up to a length"""
        assert len(enumerate_paths(subspace_quiver(2), 3)) == 3
        assert len(enumerate_paths(loop_quiver(2), 2)) == 1 + 2 + 4

    def test_paths_of_length(self):
        """Test paths of an exact length"""
        assert len(paths_of_length(loop_quiver(2), 3)) == 8
        assert paths_of_length(chain_quiver(3), 3) == []

    def test_acyclicity(self, jordan):
        """Test cycle detection on the underlying graph"""
        assert is_acyclic(subspace_quiver(4))
        assert is_acyclic(kronecker_quiver())
        assert not is_acyclic(jordan)

    def test_builders(self):
        """Test the named quiver builders"""
        assert [a.name for a in subspace_quiver(3).arrows] == ["a1", "a2"]
        assert [a.name for a in loop_quiver(3).arrows] == ["x1", "x2", "x3"]
        assert chain_quiver(3).arrow("d2") == Arrow("d2", "2", "3")
        with pytest.raises(UsageError):
            subspace_quiver(1)


class TestQuiverParser:
    """Unit tests for the quiver DSL"""

    def test_parse_quiver(self):
        """Test a complete DSL document"""
        quiver, relations, ring = parse_quiver(KRONECKER_SOURCE)
        assert quiver.vertices == ("1", "2")
        assert [a.name for a in quiver.arrows] == ["a", "b"]
        assert ring.name == "F2"
        assert relations[0].text == "a - b"
        assert (relations[0].line, relations[0].column) == (3, 11)

    def test_comments_are_ignored(self):
        """Test that '#' comments are skipped"""
        quiver, relations, _ = parse_quiver("# Jordan quiver\nvertices 1;\narrows X: 1 -> 1; # loop\nring Z;\n")
        assert quiver.has_arrow("X")
        assert relations == ()

    def test_render_source_roundtrip(self):
        """Test parse, render and parse again"""
        quiver, relations, ring = parse_quiver(KRONECKER_SOURCE)
        again = parse_quiver(render_source(quiver, relations, ring))
        assert again.quiver == quiver
        assert [r.text for r in again.relations] == ["a - b"]
        assert again.ring == ring

    def test_unknown_vertex(self):
        """Test that arrows must reference declared vertices"""
        with pytest.raises(ParseError) as info:
            parse_quiver("vertices 1;\narrows a: 1 -> 2;\nring F2;\n")
        assert (info.value.line, info.value.column) == (2, 16)


class TestRings:
    """Unit tests for base rings"""

    def test_parse_ring(self):
        """Test ring descriptors"""
        assert parse_ring("F2") == BaseRing.prime_field(2)
        assert parse_ring("Z").characteristic == 0
        assert parse_ring("Z/12").prime_divisors == (2, 3)

    def test_field_detection(self):
        """Test which rings count as fields"""
        assert parse_ring("F3").is_field
        assert parse_ring("Z/5").is_field
        assert not parse_ring("Z/4").is_field
        assert not parse_ring("Z").is_field

    def test_bad_descriptors(self):
        """Test that unknown or composite fields are rejected"""
        for text in ("F4", "Q", "Z/1"):
            with pytest.raises(UsageError):
                parse_ring(text)

    def test_arithmetic(self):
        """Test modular arithmetic helpers"""
        ring = parse_ring("Z/12")
        assert ring.add(7, 8) == 3
        assert ring.inverse(5) == 5
        assert not ring.is_unit(4)
        with pytest.raises(UsageError):
            ring.inverse(2)

    def test_spectrum_points(self):
        """Test the prime spectra of supported rings"""
        assert spectrum_of(parse_ring("F2")).points == (PrimePoint.unique(),)
        assert spectrum_of(parse_ring("Z/12")).points == (PrimePoint.prime(2), PrimePoint.prime(3))
        assert spectrum_of(parse_ring("Z/8")).points == (PrimePoint.prime(2),)
        assert spectrum_of(parse_ring("Z")).is_symbolic

    def test_symbolic_spec_z(self):
        """Test membership and order in Spec Z"""
        model = spectrum_of(parse_ring("Z"))
        assert model.contains(PrimePoint.prime(7))
        assert not model.contains(PrimePoint.prime(9))
        assert model.leq(PrimePoint.zero(), PrimePoint.prime(3))
        assert not model.leq(PrimePoint.prime(3), PrimePoint.zero())
        with pytest.raises(UsageError):
            _ = model.points

    def test_sample(self):
        """Test sampling Spec Z at chosen primes"""
        sample = spectrum_of(parse_ring("Z")).sample((5, 2, 3))
        assert [p.label for p in sample] == ["(0)", "(2)", "(3)", "(5)"]

    def test_parse_prime(self):
        """Test reading primes from their generators"""
        assert parse_prime("0", parse_ring("Z")) == PrimePoint.zero()
        assert parse_prime("0", parse_ring("F2")) == PrimePoint.unique()
        assert parse_prime("(3)", parse_ring("Z/12")) == PrimePoint.prime(3)
        with pytest.raises(UsageError):
            parse_prime("4", parse_ring("Z"))


class TestSpecTopology:
    """Unit tests for specialization-closed opens"""

    def test_opens_of_spec_z(self):
        """Test open subsets of the symbolic Spec Z"""
        model = spectrum_of(parse_ring("Z"))
        assert is_open(SpecSubset.finite_primes([2, 3]), model)
        assert not is_open(SpecSubset.of([PrimePoint.zero()]), model)
        assert is_open(SpecSubset.whole(), model)
        assert is_open(SpecSubset.empty(), model)

    def test_subset_lattice(self):
        """Test union and intersection of subsets"""
        left = SpecSubset.finite_primes([2, 3])
        right = SpecSubset.finite_primes([3, 5])
        assert left.union(right) == SpecSubset.finite_primes([2, 3, 5])
        assert left.intersection(right) == SpecSubset.finite_primes([3])
        assert SpecSubset.whole().intersection(left) == left

    def test_order_from_topology(self):
        """Test that opens recover the specialization order"""
        model = spectrum_of(parse_ring("Z"))
        sample = model.sample((2, 3))
        expected = {(x, y) for x in sample for y in sample if model.leq(x, y)}
        assert specialization_order_from_topology(model, sample) == expected


class TestPathAlgebra:
    """Unit tests for path-algebra elements"""

    def test_parse_element(self, jordan, f2):
        """Test linear combinations with powers"""
        x = parse_element("X^2 + X", jordan, f2)
        assert x.degree == 2
        assert x.render() == "X^2 + X"

    def test_signs_over_z(self):
        """Test coefficient rendering over the integers"""
        x = parse_element("a - b", kronecker_quiver(), parse_ring("Z"))
        assert x.render() == "-b + a"

    def test_signs_over_f3(self):
        """Test coefficients reduce modulo p"""
        x = parse_element("a - b", kronecker_quiver(), parse_ring("F3"))
        assert x.render() == "2*b + a"

    def test_bare_integer_is_unit_multiple(self, jordan):
        """Test that a bare integer means that multiple of the unit"""
        x = parse_element("2", jordan, parse_ring("Z"))
        assert x.terms == ((Path.trivial("1"), 2),)

    def test_trivial_path_token(self, f2):
        """Test the e_v token"""
        x = parse_element("e_2", subspace_quiver(2), f2)
        assert x.support == (Path.trivial("2"),)

    def test_product(self, f2):
        """Test multiplication follows composition"""
        chain = chain_quiver(3)
        d1, d2 = path_element(chain, f2, ["d1"]), path_element(chain, f2, ["d2"])
        assert (d2 * d1).support == (chain.path(["d1", "d2"]),)
        assert (d1 * d2).is_zero

    def test_unit_is_neutral(self, f2):
        """Test the unit sum of trivial paths"""
        chain = chain_quiver(3)
        d1 = path_element(chain, f2, ["d1"])
        one = AlgebraElement.unit(chain, f2)
        assert one * d1 == d1
        assert d1 * one == d1

    @pytest.mark.parametrize(
        "quiver",
        [loop_quiver(2), chain_quiver(3), kronecker_quiver()],
        ids=["two_loops", "chain", "kronecker"],
    )
    def test_ring_laws(self, quiver):
        """Test associativity, distributivity and the unit on random elements over F3"""
        ring = parse_ring("F3")
        paths = enumerate_paths(quiver, 3)
        rng = np.random.default_rng(7)

        def sample():
            size = int(rng.integers(1, min(4, len(paths)) + 1))
            picks = rng.choice(len(paths), size=size, replace=False)
            return AlgebraElement.from_terms(quiver, ring, [(paths[k], int(rng.integers(1, 3))) for k in picks])

        one = AlgebraElement.unit(quiver, ring)
        for _ in range(25):
            x, y, z = sample(), sample(), sample()
            assert (x * y) * z == x * (y * z)
            assert x * (y + z) == x * y + x * z
            assert (x + y) * z == x * z + y * z
            assert one * x == x == x * one

    def test_cancellation(self, jordan, f2):
        """Test that x + x vanishes over F2"""
        x = parse_element("X", jordan, f2)
        assert (x + x).is_zero
        assert (3 * x) == x

    def test_mixed_algebras_rejected(self, jordan, f2):
        """Test adding elements of different algebras"""
        with pytest.raises(UsageError):
            parse_element("X", jordan, f2) + parse_element("X", jordan, parse_ring("F3"))

    def test_blocks(self, f2):
        """Test splitting an element by endpoints"""
        x = parse_element("e_1 + a1", subspace_quiver(2), f2)
        assert sorted(x.blocks()) == [("1", "1"), ("1", "2")]

    def test_non_composable_term(self):
        """Test that a product of non-composable arrows is a parse error"""
        with pytest.raises(ParseError):
            parse_element("a*b", kronecker_quiver(), parse_ring("F2"))


class TestRelations:
    """Unit tests for relations and admissibility"""

    def test_admissibility(self, jordan):
        """Test the trivial-path coefficient criterion"""
        ring = parse_ring("Z")
        assert is_admissible(Relation(parse_element("X^3", jordan, ring)))
        assert not is_admissible(Relation(parse_element("2", jordan, ring)))

    def test_parallel_paths_required(self, f2):
        """Test that relations combine parallel paths only"""
        chain = chain_quiver(3)
        with pytest.raises(UsageError):
            Relation(parse_element("d1 + d2", chain, f2))

    def test_mixed_endpoints_parse_error(self):
        """Test that the DSL rejects mixed endpoints with a position"""
        with pytest.raises(ParseError):
            load_bound_quiver("vertices 1 2 3;\narrows d1: 1 -> 2, d2: 2 -> 3;\nrelations d1 + d2;\nring F2;\n")

    def test_relation_keeps_source_span(self):
        """Test that parsed relations remember where they came from"""
        bound = load_bound_quiver(KRONECKER_SOURCE)
        relation = bound.relations[0]
        assert relation.span == "line 3, column 11"
        assert relation.describe() == "'a - b' (line 3, column 11)"

    def test_path_relations(self, f2):
        """Test the monomial generators of an arrow-ideal power"""
        relations = path_relations(loop_quiver(2), f2, 2)
        assert len(relations) == 4
        assert all(r.is_monomial for r in relations)
