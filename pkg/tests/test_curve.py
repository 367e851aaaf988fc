import math

import numpy as np
import pytest

from galmann.curve import (AdmissibilityError, CurveSpec, check_admissible, read_curve_csv,
                           reparametrize_to_arclength, sample_from_data, sample_positions,
                           transform_spec)
from galmann.expr import eval_jet3, parse_expression
from galmann.frenet import frenet_apparatus
from galmann.galilean import Similarity, galilean_norm, random_isometry


def spec(text, t0, t1):
    return CurveSpec.parse(text, t0, t1)


@pytest.mark.parametrize("text, t0, t1, ok, t_bad", [
    ("t;t^2;t^3", 0, 1, True, None),
    ("t^2;t;0", -1, 1, False, 0.0),
    ("exp(t)-1;t;0", 0, 1, True, None),
    ("-t;t;0", 0, 1, True, None),
    ("t^3;t;0", -1, 1, False, 0.0),
])
def test_check_admissible(text, t0, t1, ok, t_bad):
    res = check_admissible(spec(text, t0, t1), 101)
    assert res.ok is ok
    assert res.t == t_bad


def test_sign_change_is_reported_at_first_offending_probe():
    res = check_admissible(spec("t^2-t;t;0", 0, 1), 11)  # x' = 2t - 1 flips at 0.5
    assert not res.ok and res.t == 0.5


def test_reparametrize_rejects_inadmissible_curves():
    with pytest.raises(AdmissibilityError) as exc:
        reparametrize_to_arclength(spec("t^2;t;0", -1, 1))
    assert exc.value.t == 0.0
    with pytest.raises(ValueError):
        reparametrize_to_arclength(spec("t;t;0", 0, 1), 7)


def test_linear_speed_two():
    # (2t, t, 0): t = s/2, so alpha(s) = (s, s/2, 0)
    c = reparametrize_to_arclength(spec("2*t;t;0", 0, 1), 101)
    assert c.s[0] == 0 and c.s[-1] == 2
    np.testing.assert_allclose(c.y.c[0], c.s / 2, atol=1e-15)
    np.testing.assert_allclose(c.y.c[1], 0.5, atol=1e-15)
    np.testing.assert_allclose(c.y.c[2], 0.0, atol=1e-15)


def test_reversed_orientation():
    c = reparametrize_to_arclength(spec("-2*t;t;0", 0, 1), 101)
    assert c.meta["orientation"] == -1
    np.testing.assert_allclose(c.s, np.linspace(0, 2, 101))
    np.testing.assert_allclose(c.y.c[0], c.s / 2, atol=1e-15)


def test_exponential_inversion_against_closed_form():
    # (e^t - 1, t, 0): t = log(1 + s); y^(k) = (-1)^(k+1) (k-1)! / (1+s)^k
    c = reparametrize_to_arclength(spec("exp(t)-1;t;0", 0, 1), 201)
    s = c.s
    np.testing.assert_allclose(c.s[-1], math.e - 1, rtol=1e-15)
    np.testing.assert_allclose(c.y.c[0], np.log1p(s), atol=1e-14)
    derivs = c.y.derivatives()
    for k in range(1, 6):
        want = (-1) ** (k + 1) * math.factorial(k - 1) / (1 + s) ** k
        np.testing.assert_allclose(derivs[k], want, rtol=1e-11)


def test_canonical_curve_round_trip_is_exact():
    c = reparametrize_to_arclength(spec("t;t^2/2;sin(t)", 0, 2), 101)
    np.testing.assert_array_equal(c.t, c.s)
    direct_y = eval_jet3(parse_expression("t^2/2"), c.t)
    direct_z = eval_jet3(parse_expression("sin(t)"), c.t)
    ys, zs = c.jets[1], c.jets[2]
    for got, want in zip(ys.as_tuple() + zs.as_tuple(), direct_y.as_tuple() + direct_z.as_tuple()):
        np.testing.assert_array_equal(np.broadcast_to(got, c.s.shape),
                                      np.broadcast_to(want, c.s.shape))


@pytest.mark.parametrize("text, t0, t1", [
    ("t+0.3*sin(t);cos(t);t^2", 0, 6),
    ("exp(t)-1;t;0", 0, 2),
    ("-t^3-t;t;t^2", -1, 2),
    ("sinh(t);cosh(t);t", -2, 2),
])
def test_inversion_accuracy(text, t0, t1):
    sp_ = spec(text, t0, t1)
    c = reparametrize_to_arclength(sp_)
    x = sp_.fx.value(c.t)
    resid = c.meta["orientation"] * (x - sp_.fx.value(t0)) - c.s
    assert np.max(np.abs(resid)) <= 1e-12


def test_tangent_has_unit_galilean_norm():
    c = reparametrize_to_arclength(spec("t+0.3*sin(t);cos(t);t^2", 0, 6))
    T = c.derivative(1)
    assert all(galilean_norm(v) == 1.0 for v in T)
    np.testing.assert_array_equal(c.pos[:, 0], c.s)


def test_sample_positions():
    c = reparametrize_to_arclength(spec("t;t^2;t^3", 0, 1), 11)
    np.testing.assert_array_equal(sample_positions(c), c.pos)
    np.testing.assert_array_equal(sample_positions(c, Similarity()), c.pos)
    moved = sample_positions(c, Similarity(a11=1, a21=2, a31=3))
    np.testing.assert_allclose(moved, c.pos + [1, 2, 3], atol=1e-15)
    # phi = pi negates the fibre, shear adds a22 x and a32 x
    m = Similarity(a21=0.5, a22=2.0, a32=-1.0, phi=math.pi)
    moved = sample_positions(c, m)
    x, y, z = c.pos.T
    np.testing.assert_allclose(moved[:, 1], 0.5 + 2 * x - y, atol=1e-15)
    np.testing.assert_allclose(moved[:, 2], -x - z, atol=1e-15)


def test_transform_spec_moves_points_by_the_similarity():
    base = spec("t+0.1*t^3;sin(t);t^2", -1, 1)
    m = random_isometry(4)
    moved = transform_spec(base, m)
    ts = np.linspace(-1, 1, 9)
    pts = np.column_stack([base.fx.value(ts), base.fy.value(ts), base.fz.value(ts)])
    got = np.column_stack([moved.fx.value(ts), moved.fy.value(ts), moved.fz.value(ts)])
    np.testing.assert_allclose(got, m.apply_array(pts), atol=1e-14)


def _write_csv(path, t, x, y, z):
    with open(path, "w") as fh:
        fh.write("t,x,y,z\n")
        for row in zip(t, x, y, z):
            fh.write(",".join(repr(float(v)) for v in row) + "\n")


def test_csv_ingestion_recovers_helix(tmp_path):
    t = np.linspace(0, 3, 301)
    path = tmp_path / "helix.csv"
    _write_csv(path, t, 2 * t, -np.cos(t), -np.sin(t))
    c = sample_from_data(*read_curve_csv(path), n_samples=201)
    assert not c.exact
    fd = frenet_apparatus(c)
    # x = 2t so s = 2t: y = -cos(s/2), kappa = 1/4, tau = 1/2
    np.testing.assert_allclose(c.y.c[0], -np.cos(c.s / 2), atol=1e-10)
    np.testing.assert_allclose(fd.kappa, 0.25, atol=1e-4)
    np.testing.assert_allclose(fd.tau, 0.5, atol=1e-4)


def test_csv_ingestion_errors(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("t,x,y\n0,0,0\n")
    with pytest.raises(ValueError):
        read_curve_csv(bad)
    flat = tmp_path / "flat.csv"
    t = np.linspace(-1, 1, 21)
    _write_csv(flat, t, t**2, t, 0 * t)
    with pytest.raises(AdmissibilityError):
        sample_from_data(*read_curve_csv(flat))
