import io
import json
import random

import pytest

from corefloop.metrics import comparisons, export_curves, load_curves, recall
from corefloop.simulator import CurvePoint, TargetRecord


def _record(hit_rank, presented, had):
    return TargetRecord(
        target_id="t",
        presented_count=presented,
        hit_rank=hit_rank,
        had_coreferent_in_store=had,
        comparisons=hit_rank if hit_rank is not None else presented,
    )


class TestRecall:
    def test_nine_of_ten(self):
        records = [_record(1, 3, True) for _ in range(9)] + [_record(None, 3, True)]
        assert recall(records) == 0.9

    def test_vacuous_is_one(self):
        assert recall([]) == 1.0
        assert recall([_record(None, 0, False)]) == 1.0

    def test_matches_independent_recount(self):
        rng = random.Random(8)
        records = []
        for _ in range(100):
            had = rng.random() < 0.7
            hit = rng.randint(1, 4) if had and rng.random() < 0.6 else None
            records.append(_record(hit, 5, had))
        eligible = sum(1 for r in records if r.had_coreferent_in_store)
        hits = sum(
            1 for r in records if r.had_coreferent_in_store and r.hit_rank
        )
        assert recall(records) == hits / eligible
        assert 0.0 <= recall(records) <= 1.0


class TestComparisons:
    def test_single_hit_at_rank_two(self):
        assert comparisons([_record(2, 3, True)]) == 2

    def test_empty(self):
        assert comparisons([]) == 0

    def test_hand_sum(self):
        records = [_record(2, 3, True), _record(None, 4, True), _record(1, 2, True)]
        assert comparisons(records) == 7


class TestExport:
    def test_single_point_csv(self):
        buf = io.StringIO()
        export_curves([CurvePoint(3.0, 1.0, 42.0, 1)], "csv", buf)
        assert buf.getvalue() == (
            "k,recall,comparisons,replicates\n3.0,1.000000,42.000000,1\n"
        )

    def test_empty_csv_is_header_only(self):
        buf = io.StringIO()
        export_curves([], "csv", buf)
        assert buf.getvalue() == "k,recall,comparisons,replicates\n"

    def test_rows_sorted_by_k(self):
        buf = io.StringIO()
        points = [CurvePoint(5.0, 0.5, 10.0, 1), CurvePoint(2.0, 0.25, 4.0, 1)]
        export_curves(points, "csv", buf)
        lines = buf.getvalue().splitlines()
        assert lines[1].startswith("2.0,") and lines[2].startswith("5.0,")

    def test_csv_round_trip_37_points(self):
        rng = random.Random(5)
        points = [
            CurvePoint(
                k=2.0 + 0.5 * i,
                recall=round(rng.random(), 6),
                comparisons=round(rng.uniform(0, 500), 6),
                replicates=rng.randint(1, 5),
            )
            for i in range(37)
        ]
        buf = io.StringIO()
        export_curves(points, "csv", buf)
        assert load_curves(io.StringIO(buf.getvalue()), "csv") == points

    def test_json_round_trip(self):
        points = [CurvePoint(2.0, 0.123456, 17.25, 3), CurvePoint(2.5, 1.0, 20.0, 3)]
        buf = io.StringIO()
        export_curves(points, "json", buf)
        parsed = json.loads(buf.getvalue())
        assert parsed[0]["k"] == 2.0
        assert load_curves(io.StringIO(buf.getvalue()), "json") == points

    def test_file_destination(self, tmp_path):
        path = tmp_path / "curves.csv"
        export_curves([CurvePoint(2.0, 1.0, 3.0, 1)], "csv", str(path))
        assert load_curves(str(path), "csv") == [CurvePoint(2.0, 1.0, 3.0, 1)]

    def test_unknown_format(self):
        with pytest.raises(ValueError, match="format"):
            export_curves([], "xml", io.StringIO())
