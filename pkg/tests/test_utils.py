import json
import math

from utils import JSONUtils, NumericUtils


def test_dumps_writes_null_for_non_finite_values():
    document = JSONUtils.envelope("audit_report", {
        "lhs": float("nan"),
        "rhs": [1.5, float("inf"), -math.inf],
        "nested": {"value": 2.0},
    })
    text = JSONUtils.dumps(document)
    assert "NaN" not in text and "Infinity" not in text
    data = json.loads(text)["data"]
    assert data["lhs"] is None
    assert data["rhs"] == [1.5, None, None]
    assert data["nested"] == {"value": 2.0}


def test_dumps_is_deterministic():
    document = {"b": 1, "a": [0.1, 0.2]}
    assert JSONUtils.dumps(document) == JSONUtils.dumps(dict(reversed(list(document.items()))))


def test_format_float_round_trips():
    value = 0.1 + 0.2
    assert float(JSONUtils.format_float(value)) == value
    assert JSONUtils.format_float(3) == "3"
    assert JSONUtils.format_float(None) == "None"


def test_exact_sum_is_order_independent():
    values = [1e16, 1.0, -1e16, 1e-3]
    assert NumericUtils.exact_sum(values) == NumericUtils.exact_sum(reversed(values))
