import math

import pytest

import finsler


def test_disk_holomorphic_curvature():
    m = finsler.builtin("poincare_ball", 1)
    assert m.holomorphic_curvature([0.3 + 0.1j], [1.0]) == pytest.approx(-4.0, abs=1e-8)


def test_lp_finsler_value():
    m = finsler.builtin("lp_finsler", 2, {"p": 4.0})
    assert m.G([0, 0], [1, 1]) == pytest.approx(math.sqrt(2.0))


def test_euclidean_classification():
    c = finsler.classify(finsler.builtin("euclidean", 2))
    assert c["hermitian"] and c["strongly_kahler"]


def test_dsl_matches_builtin_levi():
    d = finsler.dsl("abs2(v1)/(1-abs2(z1))^2", 1)
    b = finsler.builtin("poincare_ball", 1)
    assert abs(d.levi([0.5], [1])[0, 0] - b.levi([0.5], [1])[0, 0]) < 1e-12


def test_disk_exp_map_is_tanh():
    m = finsler.builtin("poincare_ball", 1)
    end = finsler.exp_map(m, [0], [1.0])
    assert abs(end[0] - math.tanh(1.0)) < 1e-6


def test_geodesic_report():
    path = finsler.geodesic(finsler.builtin("euclidean", 1), [0], [1 + 1j], 2.0)
    assert path["kind"] == "geodesic"
    assert path["samples"][-1]["sigma"][0] == pytest.approx([2.0, 2.0], abs=1e-10)


def test_errors_are_raised():
    with pytest.raises(finsler.FinslerError):
        finsler.builtin("poincare_ball", 1).G([2.0], [1.0])
    with pytest.raises(finsler.FinslerError):
        finsler.dsl("abs2(v1", 1)


def test_verify_quick():
    r = finsler.verify(finsler.builtin("euclidean", 1), count=5, variations=False)
    assert r["passed"]
