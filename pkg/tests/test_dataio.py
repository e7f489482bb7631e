import random

import pytest

from igei import dataio
from igei.dataio import (
    load_demo_expected,
    load_index_spec,
    load_observations,
    load_score_table,
    save_observations,
    validate_dataset,
)
from igei.errors import DataError, SpecError
from igei.metrics import MetricKind, score_standard
from igei.model import ObservationRecord
from igei.penalized import Polarity

GOOD_FILE = """territory,indicator,period,kind,x_w,x_m,x_a,value
North,G1,2023,standard,0.4,0.6,0.5,
South,G1,2023,standard,0.3,0.5,0.4,
North,G2,2023,share,,,,0.35
"""


def write(tmp_path, text, name="obs.csv"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


class TestLoadObservations:
    def test_three_rows(self, tmp_path):
        records = load_observations(write(tmp_path, GOOD_FILE))
        assert len(records) == 3
        assert [r.territory for r in records] == ["North", "South", "North"]
        assert records[0].x_w == 0.4 and records[0].value is None
        assert records[2].kind is MetricKind.SHARE and records[2].value == 0.35

    def test_share_bound_names_row(self, tmp_path):
        text = GOOD_FILE + "South,G2,2023,share,,,,1.2\n"
        with pytest.raises(DataError, match=r"row 5.*1\.2.*\[0, 1\]"):
            load_observations(write(tmp_path, text))

    def test_demo_dataset_scores_to_published_column(self):
        records = load_observations(dataio.bundled_path("demo_countries.csv"))
        assert len(records) == 5
        expected = load_demo_expected()
        x_ref = max(r.x_a for r in records)
        for rec in records:
            got = score_standard(rec.x_w, rec.x_m, rec.x_a, x_ref)
            assert got == pytest.approx(expected[rec.territory][1], abs=0.005)

    def test_duplicate_key_rejected(self, tmp_path):
        text = GOOD_FILE + "North,G1,2023,standard,0.1,0.2,0.15,\n"
        with pytest.raises(DataError, match="duplicate"):
            load_observations(write(tmp_path, text))

    def test_malformed_number_names_row(self, tmp_path):
        text = GOOD_FILE.replace("0.3,0.5,0.4", "0.3,abc,0.4")
        with pytest.raises(DataError, match="row 3"):
            load_observations(write(tmp_path, text))

    def test_bad_header_rejected(self, tmp_path):
        with pytest.raises(DataError, match="header"):
            load_observations(write(tmp_path, "a,b,c\n1,2,3\n"))

    def test_empty_file_rejected(self, tmp_path):
        with pytest.raises(DataError, match="empty"):
            load_observations(write(tmp_path, "# nothing here\n"))

    def test_unknown_kind_rejected(self, tmp_path):
        text = GOOD_FILE.replace("share", "fraction")
        with pytest.raises(DataError, match="fraction"):
            load_observations(write(tmp_path, text))

    def test_standard_with_value_rejected(self, tmp_path):
        text = GOOD_FILE.replace("0.4,0.6,0.5,", "0.4,0.6,0.5,0.7")
        with pytest.raises(DataError, match="no single value"):
            load_observations(write(tmp_path, text))

    def test_share_with_levels_rejected(self, tmp_path):
        text = GOOD_FILE.replace(",,,,0.35", ",0.2,,,0.35")
        with pytest.raises(DataError, match="only the value column"):
            load_observations(write(tmp_path, text))

    def test_nonpositive_ratio_rejected(self, tmp_path):
        text = GOOD_FILE + "South,G3,2023,ratio,,,,0\n"
        with pytest.raises(DataError, match="positive"):
            load_observations(write(tmp_path, text))

    def test_negative_level_rejected(self, tmp_path):
        text = GOOD_FILE.replace("0.3,0.5,0.4", "-0.3,0.5,0.4")
        with pytest.raises(DataError, match="non-negative"):
            load_observations(write(tmp_path, text))

    def test_round_trip(self, tmp_path):
        records = load_observations(write(tmp_path, GOOD_FILE))
        out = tmp_path / "copy.csv"
        save_observations(records, out)
        assert load_observations(out) == records

    def test_decimal_comma_flag(self, tmp_path):
        text = (
            "territory;indicator;period;kind;x_w;x_m;x_a;value\n"
            "North;G1;2023;standard;0,4;0,6;0,5;\n"
        )
        records = load_observations(write(tmp_path, text), decimal_comma=True)
        assert records[0].x_w == 0.4
        with pytest.raises(DataError):
            load_observations(write(tmp_path, text, name="c2.csv"))


class TestLoadIndexSpec:
    def test_bundled_tree_shape(self, default_spec):
        specs, tree = default_spec
        assert len(tree.leaf_ids()) == 20
        assert len(tree.domains) == 6
        subdomain_count = sum(len(d.subdomains) for d in tree.domains)
        assert subdomain_count == 10
        sizes = [
            tuple(len(s.indicators) for s in d.subdomains) for d in tree.domains
        ]
        assert sizes == [(1, 2), (2,), (2, 1), (2, 2), (2,), (3, 3)]

    def test_bundled_corrections(self, default_spec):
        specs, _ = default_spec
        assert specs["G3"].correction.kind == "external"
        assert specs["G3"].correction.indicator == "G1"
        assert specs["G3"].correction.field == "total"
        assert specs["G8"].correction.indicator == "G6"
        assert specs["G9"].correction.field == "women"
        assert specs["G10"].metric is MetricKind.CAPPED
        assert specs["G10"].correction.kind == "none"
        for gid in ("G2", "G18", "G19"):
            assert specs[gid].polarity is Polarity.NEGATIVE
        for gid in ("G13", "G14"):
            assert specs[gid].metric is MetricKind.SHARE
            assert specs[gid].correction.kind == "none"

    def test_placement_derived_from_tree(self, default_spec):
        specs, _ = default_spec
        assert (specs["G1"].domain, specs["G1"].subdomain) == ("work", "participation")
        assert specs["G4"].subdomain == "economy"  # implicit sub-domain

    def test_minimal_spec(self):
        specs, tree = load_index_spec(dataio.bundled_path("demo_tree.yaml"))
        assert tree.leaf_ids() == ("G1",)
        assert len(tree.domains) == 1

    def test_dangling_external_reference(self, tmp_path):
        text = """
tree:
  - domain: d
    indicators: [A]
indicators:
  A: {metric: share, correction: {indicator: MISSING, field: total}}
"""
        with pytest.raises(SpecError, match="MISSING"):
            load_index_spec(write(tmp_path, text, name="spec.yaml"))

    def test_duplicate_leaf(self, tmp_path):
        text = """
tree:
  - domain: d1
    indicators: [A]
  - domain: d2
    indicators: [A]
indicators:
  A: {metric: capped}
"""
        with pytest.raises(SpecError, match="more than once"):
            load_index_spec(write(tmp_path, text, name="spec.yaml"))

    def test_domain_count_mismatch(self, tmp_path):
        text = """
domain_count: 3
tree:
  - domain: d
    indicators: [A]
indicators:
  A: {metric: capped}
"""
        with pytest.raises(SpecError, match="declares 3 domains"):
            load_index_spec(write(tmp_path, text, name="spec.yaml"))

    def test_leaf_without_definition(self, tmp_path):
        text = """
tree:
  - domain: d
    indicators: [A, B]
indicators:
  A: {metric: capped}
"""
        with pytest.raises(SpecError, match="B"):
            load_index_spec(write(tmp_path, text, name="spec.yaml"))

    def test_negative_polarity_requires_standard(self, tmp_path):
        text = """
tree:
  - domain: d
    indicators: [A]
indicators:
  A: {metric: share, polarity: negative}
"""
        with pytest.raises(SpecError, match="negative polarity"):
            load_index_spec(write(tmp_path, text, name="spec.yaml"))


class TestValidateDataset:
    @pytest.fixture()
    def demo(self):
        specs, _ = load_index_spec(dataio.bundled_path("demo_tree.yaml"))
        records = load_observations(dataio.bundled_path("demo_countries.csv"))
        return specs, records

    def test_clean_dataset_has_no_findings(self, demo):
        specs, records = demo
        report = validate_dataset(records, specs)
        assert report.ok
        assert report.findings == ()

    def test_negative_level_finding(self, demo):
        specs, records = demo
        bad = records + [
            ObservationRecord("F", "G1", 2023, MetricKind.STANDARD, 0.2, -0.1, 0.1)
        ]
        report = validate_dataset(bad, specs)
        assert not report.ok
        assert any(f.code == "out-of-range" for f in report.errors)

    def test_missing_pair_finding(self, demo):
        specs, records = demo
        report = validate_dataset(records[:-1], specs, scope=["A", "B", "C", "D", "E"])
        missing = [f for f in report.errors if f.code == "missing-pair"]
        assert [(f.territory, f.indicator) for f in missing] == [("E", "G1")]

    def test_shape_mismatch_finding(self, demo):
        specs, records = demo
        bad = records + [
            ObservationRecord("F", "G1", 2023, MetricKind.SHARE, value=0.5)
        ]
        report = validate_dataset(bad, specs)
        assert any(f.code == "shape-mismatch" for f in report.errors)

    def test_degenerate_pair_finding(self, demo):
        specs, records = demo
        bad = records + [
            ObservationRecord("F", "G1", 2023, MetricKind.STANDARD, 0.0, 0.0, 0.1)
        ]
        report = validate_dataset(bad, specs)
        assert any(f.code == "degenerate" for f in report.errors)

    def test_missing_total_finding(self, demo):
        specs, records = demo
        bad = records + [
            ObservationRecord("F", "G1", 2023, MetricKind.STANDARD, 0.2, 0.3, None)
        ]
        report = validate_dataset(bad, specs)
        assert any(f.code == "missing-total" for f in report.errors)

    def test_negative_polarity_rate_bound(self):
        from igei.model import Correction, IndicatorSpec

        spec = IndicatorSpec(
            id="N", label="N", domain="d", subdomain="s",
            metric=MetricKind.STANDARD, polarity=Polarity.NEGATIVE,
            correction=Correction("own_average"),
        )
        rec = ObservationRecord("X", "N", 2023, MetricKind.STANDARD, 0.5, 1.2, 0.8)
        report = validate_dataset([rec], {"N": spec})
        assert any("exceeds 1" in f.message for f in report.errors)

    def test_unknown_indicator_warning(self, demo):
        specs, records = demo
        extra = records + [
            ObservationRecord("A", "G99", 2023, MetricKind.CAPPED, value=0.5)
        ]
        report = validate_dataset(extra, specs)
        assert report.ok
        assert any(f.code == "unknown-indicator" for f in report.warnings)

    def test_duplicate_finding(self, demo):
        specs, records = demo
        report = validate_dataset(records + [records[0]], specs)
        assert any(f.code == "duplicate" for f in report.errors)

    def test_findings_are_order_independent(self, demo):
        specs, records = demo
        bad = records + [
            ObservationRecord("F", "G1", 2023, MetricKind.STANDARD, 0.0, 0.0, 0.1),
            ObservationRecord("G", "G1", 2023, MetricKind.SHARE, value=0.5),
        ]
        shuffled = bad[:]
        random.Random(7).shuffle(shuffled)
        assert validate_dataset(bad, specs) == validate_dataset(shuffled, specs)


class TestScoreTable:
    def test_bundled_table(self, indicator_table):
        assert len(indicator_table.territories) == 23
        assert indicator_table.indicators == tuple(f"G{k}" for k in range(1, 21))
        assert indicator_table.scores[
            ("Provincia Autonoma di Trento", "G13")
        ] == pytest.approx(76.923)

    def test_row_and_column(self, indicator_table):
        row = indicator_table.row("Basilicata")
        assert len(row) == 20
        col = indicator_table.column("G10")
        assert len(col) == 23

    def test_out_of_range_score_rejected(self, tmp_path):
        text = "territory,G1\nX,101\n"
        with pytest.raises(DataError, match="outside"):
            load_score_table(write(tmp_path, text))

    def test_missing_cell_rejected(self, tmp_path):
        text = "territory,G1,G2\nX,50,\n"
        with pytest.raises(DataError, match="missing score"):
            load_score_table(write(tmp_path, text))

    def test_duplicate_territory_rejected(self, tmp_path):
        text = "territory,G1\nX,50\nX,60\n"
        with pytest.raises(DataError, match="duplicate territory"):
            load_score_table(write(tmp_path, text))
