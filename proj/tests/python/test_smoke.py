import json
import math
import pathlib

import pytest

import qsobp

DATA = pathlib.Path(__file__).resolve().parents[2] / "data"


def test_two_type_operator_matches_reduced_map():
    op = qsobp.two_type_operator(0.4, 0.5)
    x, y = qsobp.apply(op, [0.3, 0.7], [0.2, 0.8])
    rx, ry = qsobp.w_step(0.4, 0.5, 0.3, 0.2)
    assert math.isclose(x[0], rx, abs_tol=1e-15)
    assert math.isclose(y[0], ry, abs_tol=1e-15)
    assert math.isclose(sum(x), 1.0) and math.isclose(sum(y), 1.0)


def test_two_type_limit_on_invariant_line():
    a, b, x, y = 0.6, 0.3, 0.4, 0.9
    lx, ly = qsobp.predict_limit_w(a, b, x, y)
    c = qsobp.invariant_line_c(a, b, x, y)
    assert a * c > 1
    assert lx == pytest.approx(1.0)
    assert ly == pytest.approx((a * c - 1) * (1 - b) / a)
    res = qsobp.iterate(qsobp.two_type_operator(a, b), [x, 1 - x], [y, 1 - y])
    assert res["converged"]
    assert res["last"][0][0] == pytest.approx(lx, abs=1e-6)


def test_connected_construction_is_identity():
    doc = (DATA / "connected.json").read_text()
    op = qsobp.construct(doc)
    assert (op.n, op.nu) == (4, 4)
    assert qsobp.is_identity(op)
    assert qsobp.Operator.from_json(op.to_json()) == op


def test_bad_state_raises():
    op = qsobp.two_type_operator(0.4, 0.5)
    with pytest.raises(qsobp.Error):
        qsobp.apply(op, [0.5, 0.6], [0.5, 0.5])


def test_t_map_fixed_point():
    fixed, spurious, disc = qsobp.fixed_points_t(0.75, 0.5, 0.5)
    assert fixed == pytest.approx(0.5)
    assert spurious == pytest.approx(1.5)
    assert qsobp.t_step(0.75, 0.5, 0.5, fixed) == pytest.approx(fixed, abs=1e-14)
    assert qsobp.fixed_points_t(0.5, 0.4, 0.6)[1] is None


def test_four_type_step_keeps_mass():
    p = [0.3, 0.6, 0.4, 0.2, 0.45, 0.6]
    x, y = qsobp.v4_step(p, [0.2, 0.25, 0.3, 0.25], [0.3, 0.3, 0.2, 0.2])
    assert math.isclose(sum(x), 1.0) and math.isclose(sum(y), 1.0)


def test_quadratic_roots_inside():
    assert qsobp.classify_quadratic(0.0, 0.25) == ("both_inside", "inside")


def test_cli_construct(tmp_path):
    target = tmp_path / "op.json"
    code, out, err = qsobp.run_cli(
        ["construct", "--input", str(DATA / "three_vertex.json"), "-o", str(target)]
    )
    assert code == 0, err
    assert "n=4" in out
    assert json.loads(target.read_text())["nu"] == 4
    code, _, _ = qsobp.run_cli(
        ["construct", "--input", str(DATA / "missing.json"), "-o", str(target)]
    )
    assert code == 3
