# -*- coding: utf-8 -*-
import pytest


def check_equal_ripple(metrics):

    data = metrics.data.dict_data
    assert data["peak_deg"] == pytest.approx(90.0, abs=0.05)
    assert data["sll_db"] == pytest.approx(-30.0, abs=0.5)


def check_weights(excitation):

    data = excitation.data.dict_data
    assert len(data["weights_re"]) == 16
    assert sum(data["weights_re"]) == pytest.approx(1.0)
