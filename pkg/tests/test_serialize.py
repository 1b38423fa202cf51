import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from coverlaw import hilbert as hb
from coverlaw import instruments as ins
from coverlaw import serialize as ser
from coverlaw.cli import DATA


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2 ** 63 - 1), st.integers(2, 5))
def test_round_trip(seed, d):
    rng = np.random.default_rng(seed)
    I = ins.random_instrument(d, rng)
    s = hb.random_state(d, False, rng)
    I2 = ser.instrument_from_json(json.loads(json.dumps(ser.instrument_to_json(I))))
    s2 = ser.state_from_json(json.loads(json.dumps(ser.state_to_json(s))))
    for P, Q in zip(I.outcomes, I2.outcomes):
        np.testing.assert_array_equal(P.matrix, Q.matrix)
    np.testing.assert_array_equal(s.matrix, s2.matrix)
    assert I2.label == I.label


def test_matrix_errors_name_field():
    with pytest.raises(ser.FormatError) as exc:
        ser.matrix_from_json([[[1, 0]], [[0, 0], [1, 0]]], "outcomes[1]")
    assert "outcomes[1]" in str(exc.value)


def test_state_forms():
    assert ser.state_from_json("singlet").is_pure
    s = ser.state_from_json({"vector": [[1, 0], [0, 0]]})
    np.testing.assert_allclose(s.matrix, np.diag([1, 0]))
    with pytest.raises(ser.FormatError):
        ser.state_from_json({"vector": [[2, 0], [0, 0]]})
    with pytest.raises(ser.FormatError):
        ser.state_from_json(3)


def test_load_json_reports_line(tmp_path):
    f = tmp_path / "x.json"
    f.write_text('{\n  "a": 1,\n  oops\n}')
    with pytest.raises(ser.FormatError) as exc:
        ser.load_json(f)
    assert "x.json:3:" in str(exc.value)


def test_bundled_scenario():
    sc = ser.scenario_from_json(ser.load_json(DATA / "scenarios" / "singlet_two_arm.json"))
    assert sc.state.dim == 4 and len(sc.frames) == 3


def test_scenario_dim_mismatch():
    obj = ser.load_json(DATA / "scenarios" / "singlet_two_arm.json")
    obj["dim"] = 2
    with pytest.raises(ser.FormatError) as exc:
        ser.scenario_from_json(obj)
    assert "regions.I" in str(exc.value)
