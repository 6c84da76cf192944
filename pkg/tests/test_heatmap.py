"""Normalization, banding boundaries, and deterministic emission."""

import random

import pytest

from cdsm import (
    Band,
    EmptyInputError,
    LayoutError,
    band_for,
    emit_heatmap,
    heatmap_svg,
    normalize_scores,
)
from cdsm.heatmap import BAND_FILL, auto_grid, parse_grid


class TestBanding:
    def test_boundaries(self):
        assert band_for(50.0) is Band.GREEN
        assert band_for(50.0001) is Band.ORANGE
        assert band_for(75.0) is Band.ORANGE
        assert band_for(75.0001) is Band.RED

    def test_extremes(self):
        assert band_for(0.0) is Band.GREEN
        assert band_for(100.0) is Band.RED


class TestNormalizeScores:
    def test_three_point_spread(self):
        scores = normalize_scores([("T1", 10.0), ("T2", 30.0), ("T3", 50.0)])
        assert [s.normalized for s in scores] == [0.0, 50.0, 100.0]
        assert [s.band for s in scores] == [Band.GREEN, Band.GREEN, Band.RED]

    def test_single_score_degenerates_to_green_zero(self):
        scores = normalize_scores([("T1", 42.0)])
        assert scores[0].normalized == 0.0
        assert scores[0].band is Band.GREEN

    def test_all_equal_scores_degenerate_to_zero(self):
        scores = normalize_scores([("T1", 5.0), ("T2", 5.0), ("T3", 5.0)])
        assert all(s.normalized == 0.0 for s in scores)
        assert all(s.band is Band.GREEN for s in scores)

    def test_empty_input_rejected(self):
        with pytest.raises(EmptyInputError):
            normalize_scores([])

    def test_extremes_map_to_0_and_100(self):
        rng = random.Random(9)
        for _ in range(30):
            pairs = [(f"T{k}", rng.uniform(0, 90)) for k in range(rng.randint(2, 12))]
            values = [v for _, v in pairs]
            if max(values) == min(values):
                continue
            scores = normalize_scores(pairs)
            by_value = sorted(scores, key=lambda s: s.d_e)
            assert by_value[0].normalized == 0.0
            assert by_value[-1].normalized == 100.0
            assert all(0.0 <= s.normalized <= 100.0 for s in scores)

    def test_affine_invariance(self):
        # adding a constant or positively scaling d_e leaves normalization unchanged
        rng = random.Random(10)
        pairs = [(f"T{k}", rng.uniform(1, 50)) for k in range(8)]
        base = normalize_scores(pairs)
        shift = rng.uniform(0.5, 20)
        scale = rng.uniform(0.1, 9)
        shifted = normalize_scores([(t, v + shift) for t, v in pairs])
        scaled = normalize_scores([(t, v * scale) for t, v in pairs])
        for a, b, c in zip(base, shifted, scaled):
            assert b.normalized == pytest.approx(a.normalized, abs=1e-9)
            assert c.normalized == pytest.approx(a.normalized, abs=1e-9)
            assert a.band is b.band is c.band

    def test_input_order_preserved(self):
        scores = normalize_scores([("Z", 1.0), ("A", 2.0)])
        assert [s.ttp for s in scores] == ["Z", "A"]


class TestEmission:
    def test_thirty_scores_six_by_five(self):
        pairs = [(f"T{1000 + k}", float(k)) for k in range(30)]
        document = emit_heatmap(normalize_scores(pairs), rows=6, cols=5)
        assert len(document.table["scores"]) == 30
        assert document.svg.count("<rect") == 31  # 30 tiles + background
        for entry in document.table["scores"]:
            fill = BAND_FILL[Band(entry["band"])]
            assert fill in document.svg

    def test_single_green_tile(self):
        document = emit_heatmap(normalize_scores([("T1059", 42.0)]), rows=1, cols=1)
        assert document.table["scores"][0]["band"] == "green"
        assert document.svg.count(BAND_FILL[Band.GREEN]) == 1

    def test_byte_determinism(self):
        pairs = [("T1", 3.5), ("T2", 9.25), ("T3", 50.0)]
        a = emit_heatmap(normalize_scores(pairs), 3, 1)
        b = emit_heatmap(normalize_scores(pairs), 3, 1)
        assert a.table_bytes() == b.table_bytes()
        assert a.svg == b.svg

    def test_tile_colours_match_bands(self):
        scores = normalize_scores([("LOW", 0.0), ("MID", 60.0), ("TOP", 100.0)])
        svg = heatmap_svg(scores, 1, 3)
        assert svg.index(BAND_FILL[Band.GREEN]) < svg.index(BAND_FILL[Band.ORANGE])
        assert svg.index(BAND_FILL[Band.ORANGE]) < svg.index(BAND_FILL[Band.RED])

    def test_grid_too_small_rejected(self):
        scores = normalize_scores([("T1", 1.0), ("T2", 2.0), ("T3", 3.0)])
        with pytest.raises(LayoutError):
            emit_heatmap(scores, rows=1, cols=2)

    def test_empty_scores_rejected(self):
        with pytest.raises(EmptyInputError):
            emit_heatmap([], 1, 1)

    def test_ttp_labels_escaped(self):
        scores = normalize_scores([("T1&<x>", 1.0)])
        svg = heatmap_svg(scores, 1, 1)
        assert "T1&amp;&lt;x&gt;" in svg


class TestGridHelpers:
    def test_parse_grid(self):
        assert parse_grid("6x5") == (6, 5)
        assert parse_grid("1X3") == (1, 3)

    @pytest.mark.parametrize("bad", ["6", "0x3", "ax2", "2x", "3x-1"])
    def test_parse_grid_rejects(self, bad):
        with pytest.raises(LayoutError):
            parse_grid(bad)

    def test_auto_grid_fits(self):
        for count in range(1, 40):
            rows, cols = auto_grid(count)
            assert rows * cols >= count
