"""Chart rendering: determinism and input validation."""

import xml.etree.ElementTree as ET

import pytest

from shoulderscore import ValidationError, edc_curve, error_histogram, oracle_curve
from shoulderscore.charts import edc_chart, histogram_chart, scatter_chart
from shoulderscore.metrics import ScoredSample

PAIRS = [(0.1, 0.15), (0.5, 0.45), (0.8, 0.9), (1.0, 0.95), (0.3, 0.3)]
SAMPLES = [ScoredSample(f"s{i}", x, y) for i, (x, y) in enumerate(PAIRS)]


def is_svg(data: bytes) -> bool:
    root = ET.fromstring(data)
    return root.tag.endswith("svg")


class TestScatterChart:
    def test_renders_valid_svg(self):
        data = scatter_chart(PAIRS)
        assert is_svg(data)
        assert b"identity" in data
        assert b"manual label" in data

    def test_byte_determinism(self):
        assert scatter_chart(PAIRS) == scatter_chart(PAIRS)

    def test_empty_input_rejected(self):
        with pytest.raises(ValidationError):
            scatter_chart([])

    def test_no_date_stamp(self):
        # two renders in different moments must still be identical, so no
        # creation timestamp may survive in the metadata
        assert b"<dc:date>" not in scatter_chart(PAIRS)


class TestHistogramChart:
    def test_renders_valid_svg(self):
        data = histogram_chart(error_histogram(PAIRS))
        assert is_svg(data)

    def test_byte_determinism(self):
        hist = error_histogram(PAIRS, bin_width=0.1)
        assert histogram_chart(hist) == histogram_chart(hist)

    def test_empty_histogram_rejected(self):
        with pytest.raises(ValidationError):
            histogram_chart(error_histogram([], bin_width=0.1))


class TestEdcChart:
    def test_renders_both_series(self):
        emp = edc_curve(SAMPLES, tau=0.8)
        orc = oracle_curve(SAMPLES, tau=0.8)
        data = edc_chart(emp.points, orc.points)
        assert is_svg(data)
        assert b"quality-ordered discard" in data
        assert b"oracle" in data

    def test_oracle_optional(self):
        emp = edc_curve(SAMPLES, tau=0.8)
        data = edc_chart(emp.points)
        assert is_svg(data)
        assert b"oracle" not in data

    def test_byte_determinism(self):
        emp = edc_curve(SAMPLES, tau=0.8)
        orc = oracle_curve(SAMPLES, tau=0.8)
        assert edc_chart(emp.points, orc.points) == edc_chart(emp.points, orc.points)

    def test_empty_curve_rejected(self):
        with pytest.raises(ValidationError):
            edc_chart([])
