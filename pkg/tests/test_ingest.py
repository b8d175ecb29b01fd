import io
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from complykit.fairness import PRIVILEGED, UNPRIVILEGED
from complykit.ingest import (
    Dataset,
    IngestError,
    RunManifest,
    bind_groups,
    composition_audit,
    read_dataset,
    read_manifest,
    read_predictions,
    write_dataset,
)
from complykit.intervals import Interval
from complykit.policy import parse_policy
from conftest import SCENARIO1_POLICY

# the twenty genders behind the generated CEO name list: 3 female, 17 male
CEO_NAME_GENDERS = ["Female"] * 3 + ["Male"] * 17
WORLD_FEMALE_SHARE_2023 = 0.4975


class TestReadDataset:
    def test_header_only(self):
        ds = read_dataset(io.StringIO("a,b\n"))
        assert ds.columns == ("a", "b")
        assert ds.rows == ()

    def test_quoting(self):
        ds = read_dataset(io.StringIO('a,b\n"x,1",2\n'))
        assert ds.rows == (("x,1", "2"),)

    def test_doubled_quote_escape(self):
        ds = read_dataset(io.StringIO('a\n"say ""hi"""\n'))
        assert ds.rows == (('say "hi"',),)

    def test_ragged_row_named(self):
        with pytest.raises(IngestError, match="row 2"):
            read_dataset(io.StringIO("a,b\n1\n"))

    def test_missing_header(self):
        with pytest.raises(IngestError, match="header"):
            read_dataset(io.StringIO(""))

    def test_invalid_utf8_file(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_bytes(b"a,b\n\xff\xfe,2\n")
        with pytest.raises(IngestError, match="UTF-8"):
            read_dataset(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(IngestError):
            read_dataset(tmp_path / "nope.csv")

    @given(st.lists(
        st.lists(st.text(alphabet='ab,"\n x', max_size=6), min_size=2,
                 max_size=2),
        max_size=8))
    def test_round_trip_lossless(self, rows):
        ds = Dataset(("c1", "c2"), tuple(tuple(r) for r in rows))
        buf = io.StringIO()
        write_dataset(ds, buf)
        back = read_dataset(io.StringIO(buf.getvalue()))
        assert back.rows == ds.rows


class TestBindGroups:
    def setup_method(self):
        self.policy = parse_policy(SCENARIO1_POLICY)

    @staticmethod
    def _dataset(rows):
        return Dataset(("sex", "occupation"), tuple(rows))

    def test_adult_style_counts(self):
        rows = ([("Male", "Exec-managerial")] * 4
                + [("Male", "Other")] * 6
                + [("Female", "Exec-managerial")] * 2
                + [("Female", "Other")] * 3)
        bound = bind_groups(self._dataset(rows), self.policy)
        assert bound.favorable_privileged == 4
        assert bound.total_privileged == 10
        assert bound.favorable_unprivileged == 2
        assert bound.total_unprivileged == 5
        assert bound.excluded == 0

    def test_third_value_excluded_and_counted(self):
        rows = [("Male", "Other"), ("Female", "Other"), ("Unknown", "Other")]
        bound = bind_groups(self._dataset(rows), self.policy)
        assert bound.excluded == 1
        assert bound.total_privileged + bound.total_unprivileged \
            + bound.excluded == 3

    def test_missing_outcome_column(self):
        ds = Dataset(("sex",), (("Male",),))
        with pytest.raises(IngestError, match="occupation"):
            bind_groups(ds, self.policy)

    def test_both_groups_empty(self):
        ds = self._dataset([("Unknown", "Other")])
        with pytest.raises(IngestError, match="empty"):
            bind_groups(ds, self.policy)


class TestReadPredictions:
    def test_quadrants(self):
        csv_text = ("group,predicted,actual\n"
                    "privileged,1,1\nprivileged,1,0\n"
                    "privileged,0,1\nprivileged,0,0\n"
                    "unprivileged,1,1\n")
        gp = read_predictions(io.StringIO(csv_text))
        from complykit.fairness import confusion
        c = confusion(gp.by_group(PRIVILEGED))
        assert (c.tp, c.fp, c.fn, c.tn) == (1, 1, 1, 1)
        assert len(gp.by_group(UNPRIVILEGED)) == 1

    def test_custom_group_labels(self):
        csv_text = "group,predicted,actual\nMale,1,1\nFemale,0,0\n"
        gp = read_predictions(io.StringIO(csv_text),
                              privileged_label="Male",
                              unprivileged_label="Female")
        assert len(gp.by_group(PRIVILEGED)) == 1

    def test_score_out_of_range(self):
        csv_text = "group,predicted,actual,score\nprivileged,1,1,1.2\n"
        with pytest.raises(IngestError, match="score"):
            read_predictions(io.StringIO(csv_text))

    def test_missing_actual_column(self):
        with pytest.raises(IngestError, match="actual"):
            read_predictions(io.StringIO("group,predicted\nprivileged,1\n"))

    def test_nonbinary_label(self):
        csv_text = "group,predicted,actual\nprivileged,2,1\n"
        with pytest.raises(IngestError, match="row 2"):
            read_predictions(io.StringIO(csv_text))

    def test_unknown_group(self):
        csv_text = "group,predicted,actual\nmystery,1,1\n"
        with pytest.raises(IngestError, match="mystery"):
            read_predictions(io.StringIO(csv_text))


class TestManifest:
    def test_full_manifest(self, tmp_path):
        path = tmp_path / "run.manifest"
        path.write_text(
            "# scenario 3 run\n"
            "dataset_source=https://archive.ics.uci.edu/dataset/2/adult\n"
            "model_id=google/gemma-2-2b-it\n"
            "declared_use=recruitment\n"
            "synthetic=true\n")
        m = read_manifest(path)
        assert m == RunManifest(
            dataset_source="https://archive.ics.uci.edu/dataset/2/adult",
            model_id="google/gemma-2-2b-it",
            declared_use="recruitment",
            synthetic=True)

    def test_unknown_key(self, tmp_path):
        path = tmp_path / "run.manifest"
        path.write_text("surprise=1\n")
        with pytest.raises(IngestError, match="unknown key"):
            read_manifest(path)

    def test_bad_synthetic(self, tmp_path):
        path = tmp_path / "run.manifest"
        path.write_text("synthetic=maybe\n")
        with pytest.raises(IngestError, match="synthetic"):
            read_manifest(path)


class TestCompositionAudit:
    def test_generated_name_list(self):
        audit = composition_audit(CEO_NAME_GENDERS, "Female",
                                  WORLD_FEMALE_SHARE_2023,
                                  Interval(-0.05, 0.05))
        assert audit.shares["Female"] == 0.15
        assert audit.deviation == pytest.approx(-0.3475, abs=1e-12)
        assert not audit.within_range

    def test_balanced_labels_comply(self):
        audit = composition_audit(["F", "M"] * 10, "F", 0.5,
                                  Interval(-0.05, 0.05))
        assert audit.deviation == 0
        assert audit.within_range

    def test_direct_proportion(self):
        labels = ["F"] * 16 + ["M"] * 84
        audit = composition_audit(labels, "F", 0.4975, Interval(-0.05, 0.05))
        exact = Fraction(16, 100) - Fraction(4975, 10000)
        assert audit.deviation == pytest.approx(float(exact), abs=1e-12)
        assert audit.deviation == pytest.approx(-0.3375, abs=1e-12)

    def test_shares_sum_to_one(self):
        labels = ["a"] * 3 + ["b"] * 5 + ["c"] * 9
        audit = composition_audit(labels, "a", 0.3, Interval(-1, 1))
        assert sum(audit.shares.values()) == pytest.approx(1.0, abs=1e-12)

    def test_empty_labels(self):
        with pytest.raises(IngestError):
            composition_audit([], "F", 0.5, Interval(-1, 1))
