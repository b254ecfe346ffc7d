"""
Mock tests for the atomspec stages.
Tests stage wiring and diagnostics using mock objects in place of the heavy computations.
"""
import logging
from unittest.mock import ANY, patch

import pytest

from atomspec.cli import Analyzer, ArtifactLoader, RunConfig, SourceExtractor, run
from atomspec.const import EXIT_OK, EXIT_RESOURCE
from atomspec.errors import CapabilityError, ResourceError
from atomspec.ideal import is_right_rooted
from atomspec.models import OracleLimits, Status, Verdict, VerificationReport
from atomspec.quiver import kronecker_quiver, loop_quiver
from atomspec.algebra import BoundQuiver, Relation, parse_element
from atomspec.rings import parse_ring
from atomspec.spectrum import atom_spectrum
from atomspec.triangular import Bimodule


@pytest.fixture
def cfg():
    return RunConfig(command="spectrum", input="quiver.q")


class TestStageWiring:
    """Tests for the extract, analyze and load stages"""

    def test_stages_run_in_order(self, cfg):
        """Test that each stage receives the previous stage's output"""
        with patch.object(SourceExtractor, "extract") as extract, \
             patch.object(Analyzer, "analyze", return_value="artifact\n") as analyze, \
             patch("atomspec.cli.write_artifact") as write:
            assert run(cfg) == EXIT_OK
        extract.assert_called_once_with()
        analyze.assert_called_once_with(extract.return_value)
        write.assert_called_once_with("artifact\n", None, ANY)

    def test_failure_skips_loading(self, cfg):
        """Test that a failing analysis writes nothing and returns its exit code"""
        with patch.object(SourceExtractor, "extract"), \
             patch.object(Analyzer, "analyze", side_effect=ResourceError("too many")), \
             patch.object(ArtifactLoader, "load") as load:
            assert run(cfg) == EXIT_RESOURCE
        load.assert_not_called()

    def test_failure_is_logged(self, cfg, caplog):
        """Test that errors go to the log"""
        with patch.object(SourceExtractor, "extract", side_effect=ResourceError("too many")):
            with caplog.at_level(logging.ERROR):
                run(cfg)
        assert "too many" in caplog.text

    def test_triangular_reads_json(self):
        """Test that the triangular command loads a bimodule"""
        extractor = SourceExtractor(RunConfig(command="triangular", input="m.json"))
        with patch("atomspec.cli.load_json", return_value={"group": "F2"}) as loader:
            assert extractor() == Bimodule(2)
        loader.assert_called_once_with("m.json")

    def test_verify_passes_guards(self):
        """Test that the guard flags reach the oracle"""
        cfg = RunConfig(command="verify", input="q.q", guard_submodules=10, guard_hom=20, guard_tuples=30)
        source = BoundQuiver(loop_quiver(1), (), parse_ring("F2"))
        report = VerificationReport(Verdict.YES)
        with patch("atomspec.cli.verify_theorem_a", return_value=report) as oracle:
            Analyzer(cfg)(source)
        assert oracle.call_args.args[3] == cfg.dim_bound
        assert oracle.call_args.args[4] == OracleLimits(10, 20, 30)


class TestDiagnostics:
    """Tests for warnings emitted during spectrum assembly"""

    def test_inconclusive_rootedness_warns(self, caplog):
        """Test the warning for an undecided quiver"""
        quiver = loop_quiver(1)
        with patch("atomspec.spectrum.is_right_rooted", return_value=Verdict.INCONCLUSIVE):
            with caplog.at_level(logging.WARNING):
                spectrum = atom_spectrum(quiver, (), parse_ring("F2"))
        assert spectrum.status is Status.EMBEDDING_ONLY
        assert "1 vertices and 1 arrows is Inconclusive" in caplog.text

    def test_capability_error_is_downgraded(self, caplog):
        """Test that an unsupported ideal leaves the spectrum embedding-only"""
        quiver = loop_quiver(1)
        with patch("atomspec.spectrum.is_right_rooted", side_effect=CapabilityError("no rewriting over Z")):
            with caplog.at_level(logging.WARNING):
                spectrum = atom_spectrum(quiver, (), parse_ring("Z"))
        assert spectrum.rootedness is Verdict.INCONCLUSIVE
        assert "no rewriting over Z" in caplog.text

    def test_complete_spectrum_is_quiet(self, caplog):
        """Test that a right rooted quiver logs no warning"""
        with caplog.at_level(logging.WARNING):
            atom_spectrum(kronecker_quiver(), (), parse_ring("F2"))
        assert caplog.records == []

    def test_arrow_power_is_reported(self, caplog):
        """Test the info message naming the arrow ideal power"""
        f2 = parse_ring("F2")
        quiver = kronecker_quiver()
        relation = Relation(parse_element("a - b", quiver, f2))
        with caplog.at_level(logging.INFO, logger="atomspec.ideal"):
            assert is_right_rooted(quiver, (relation,)) is Verdict.YES
        assert "arrow ideal power 2" in caplog.text
