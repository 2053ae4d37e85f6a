"""Crisp two-threshold baseline and its crossover-derived thresholds."""

import pytest

from aeromap.fuzzy.config import default_config
from aeromap.fuzzy.crisp import crisp_classify, crossover_thresholds

LOW_FRAME = {"voc": 100.0, "co2": 400.0, "smoke": 20.0,
             "temperature": 10.0, "humidity": 20.0}


@pytest.fixture(scope="module")
def thresholds():
    return crossover_thresholds(default_config())


def test_crossovers_match_hand_computation(thresholds):
    # symmetric partitions cross at the 0.5-degree points
    assert thresholds["co2"] == pytest.approx((800.0, 1200.0), abs=0.01)
    assert thresholds["voc"] == pytest.approx((440.0, 1430.0), abs=0.01)
    assert thresholds["smoke"] == pytest.approx((100.0, 200.0), abs=0.01)
    # asymmetric temperature terms cross away from the 0.5 points:
    # (22-x)/4 = (x-18)/6 -> 20.4 and (30-x)/6 = (x-26)/4 -> 27.6
    assert thresholds["temperature"] == pytest.approx((20.4, 27.6), abs=0.01)
    assert thresholds["humidity"] == pytest.approx((110 / 3, 190 / 3), abs=0.01)


def test_all_below_first_thresholds_is_good(thresholds):
    assert crisp_classify(LOW_FRAME, thresholds) == "Good"


def test_one_variable_poor_dominates(thresholds):
    frame = dict(LOW_FRAME, smoke=500.0)
    assert crisp_classify(frame, thresholds) == "Poor"


def test_one_variable_moderate(thresholds):
    frame = dict(LOW_FRAME, co2=1000.0)
    assert crisp_classify(frame, thresholds) == "Moderate"


def test_threshold_boundaries_inclusive_upward(thresholds):
    t1, t2 = thresholds["co2"]
    assert crisp_classify(dict(LOW_FRAME, co2=t1), thresholds) == "Moderate"
    assert crisp_classify(dict(LOW_FRAME, co2=t2), thresholds) == "Poor"
