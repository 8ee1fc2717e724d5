# -*- coding: utf-8 -*-


def check_rows(report):

    rows = {row["steer_deg"]: row for row in report.data.dict_data["rows"]}
    assert rows[90.0]["status"] == "skipped"
    for steer in (40.0, 60.0, 120.0, 140.0):
        assert rows[steer]["status"] == "ok"
