"""Tests for the exhaustive law suite over small registries."""

import sys
from pathlib import Path

import pytest

# Add the repository root to Python path for absolute imports
sys.path.insert(0, str(Path(__file__).resolve().parents[3]))

from src.core.errors import InputError
from src.oracle.laws import exhaustive_law_suite, law_registry, law_table, parse_mult_set
from src.symbolic.classes import LabelKind
from src.symbolic.scalars import ExtScalar

DIVIDING_LAW = "scalar-distributes-over-dividing-inf"
TRUNCATION_LAWS = (
    "minus-delta-leq_s-minus-nabla",
    "minus-nabla-equals-delta-iff-infinite-levels-disjoint",
)


def by_name(report):
    return {r.law: r for r in report.laws}


@pytest.mark.unit
class TestSetup:

    def test_law_registry(self):
        view = law_registry(3)
        assert [label.id for label in view.labels] == ["P1", "F2", "S3"]
        assert [label.kind for label in view.labels] == [
            LabelKind.ATOM, LabelKind.FRACTAL, LabelKind.SEMIPRIME_II1
        ]
        assert law_registry(0).labels == ()
        with pytest.raises(InputError):
            law_registry(4)

    def test_parse_mult_set(self):
        assert parse_mult_set(["aleph0", "1", "0", "1"]) == [
            ExtScalar.of(0), ExtScalar.of(1), ExtScalar.of("aleph0")
        ]
        with pytest.raises(InputError):
            parse_mult_set(["5"])


@pytest.mark.unit
class TestSuite:

    def test_single_atom(self):
        report = exhaustive_law_suite(1, ["0", "1", "2", "aleph0"])
        assert report.unexpected_failures() == []
        assert all(not r.failures for r in report.laws)
        assert by_name(report)["cancellation"].cases > 0

    def test_dividing_infimum_counterexample(self):
        report = exhaustive_law_suite(3, ["0", "1", "1/2", "aleph0"])
        assert report.unexpected_failures() == []
        dividing = by_name(report)[DIVIDING_LAW]
        assert dividing.expected_failure
        assert dividing.failures

    @pytest.mark.parametrize("size", [1, 2, 3])
    def test_truncated_differences(self, size):
        report = exhaustive_law_suite(size, ["0", "1", "aleph0", "aleph1"])
        results = by_name(report)
        for name in TRUNCATION_LAWS:
            assert results[name].cases > 0
            assert results[name].failures == []
            assert not results[name].expected_failure

    def test_table(self):
        report = exhaustive_law_suite(1, ["0", "1"])
        assert law_table(report).row_count == len(report.laws)


@pytest.mark.slow
def test_default_suite():
    report = exhaustive_law_suite()
    assert report.unexpected_failures() == []
    assert report.registry_size == 3
