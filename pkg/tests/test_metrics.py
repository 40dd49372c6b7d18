import math

import numpy as np
import pytest

from sphereadvect.exceptions import DomainError
from sphereadvect.metrics import (
    ErrorReport,
    convergence_order,
    error_l1,
    error_l2,
    find_jumps,
    mask_bands,
    masked_error,
    transition_width,
    z_above,
)
from sphereadvect.solver import CylindricalIC, TwoPlaneIC, g_kinks


def test_identical_is_zero(rng):
    a = rng.normal(size=(20, 3))
    assert error_l1(a, a) == 0.0
    assert error_l2(a, a) == 0.0


def test_constant_offset():
    a = np.zeros((50, 3))
    b = a + [1e-3, 0, 0]
    assert error_l1(a, b) == pytest.approx(1e-3, rel=1e-12)
    assert error_l2(a, b) == pytest.approx(1e-3, rel=1e-12)


def test_resummation_oracle(rng):
    a, b = rng.normal(size=(2, 37, 3))
    ds = 1 / 37
    e1 = sum(abs(a[i, k] - b[i, k]) for i in range(37) for k in range(3)) * ds
    e2 = math.sqrt(sum((a[i, k] - b[i, k]) ** 2 for i in range(37) for k in range(3)) * ds)
    assert error_l1(a, b) == pytest.approx(e1, rel=1e-13)
    assert error_l2(a, b) == pytest.approx(e2, rel=1e-13)


def test_norm_properties(rng):
    for _ in range(50):
        a, b, c = rng.normal(size=(3, 16, 3))
        assert error_l1(a, b) == pytest.approx(error_l1(b, a))
        assert error_l1(a, c) <= error_l1(a, b) + error_l1(b, c) + 1e-15
        # on a unit-length domain the L2 error bounds the per-component mean
        assert error_l1(a, b) / math.sqrt(3) <= error_l2(a, b) * math.sqrt(3) + 1e-15


def test_mesh_mismatch():
    with pytest.raises(ValueError):
        error_l1(np.zeros((4, 3)), np.zeros((5, 3)))


def test_masked_all_equals_l1(rng):
    a, b = rng.normal(size=(2, 30, 3))
    assert masked_error(a, b, np.ones(30, bool)) == pytest.approx(error_l1(a, b))
    assert masked_error(a, b, np.ones(30, bool), norm="l2") == pytest.approx(error_l2(a, b))


def test_masked_empty_raises():
    a = np.zeros((10, 3))
    with pytest.raises(DomainError):
        masked_error(a, a, np.zeros(10, bool))
    with pytest.raises(DomainError):
        masked_error(a, a)  # every z is 0, below the default threshold


def test_kinks_mask_has_four_bands():
    exact = CylindricalIC(g_kinks).sample(256).points
    assert mask_bands(z_above(0.5)(exact)) == 4


def test_mask_bands_periodic():
    assert mask_bands([True, False, True]) == 1
    assert mask_bands([True, True]) == 1
    assert mask_bands([False, True, False, True]) == 2


@pytest.mark.parametrize("p", [2, 4])
def test_order_of_power_law(p):
    rows = [(n, 3.0 / n**p) for n in (64, 128, 256, 512)]
    est = convergence_order(rows)
    assert est.slope == pytest.approx(p, abs=1e-12)
    assert all(o == pytest.approx(p, abs=1e-12) for o in est.orders)


def test_order_scale_invariant():
    rows = [(n, n**-2.5 * (1 + 0.1 * (n % 3))) for n in (32, 64, 128)]
    scaled = [(n, 1e5 * e) for n, e in rows]
    assert convergence_order(rows).slope == pytest.approx(convergence_order(scaled).slope)


def test_zero_rows_excluded():
    est = convergence_order([(64, 1e-3), (128, 2.5e-4), (256, 0.0)])
    assert est.excluded == [256]
    assert est.orders[0] == pytest.approx(2)
    assert est.orders[1] is None
    assert est.slope == pytest.approx(2)
    assert convergence_order([(64, 1e-16), (128, 0.0)]).slope is None


def test_csv_format():
    rep = ErrorReport([128, 64], [2.5e-4, 1e-3], [5e-4, 2e-3])
    lines = rep.to_csv(6).splitlines()
    assert lines[0] == "N,E1,order1,E2,order2"
    assert lines[1] == "64,0.001,,0.002,"
    assert lines[2] == "128,0.00025,2,0.0005,2"


def test_jumps_of_two_plane_curve():
    exact = TwoPlaneIC().sample(512).points
    np.testing.assert_array_equal(find_jumps(exact), [255, 511])


def test_transition_width_single_bad_node():
    exact = TwoPlaneIC().sample(512).points
    assert transition_width(exact, exact) == [0, 0]
    bad = exact.copy()
    bad[256] = exact[255]
    assert transition_width(bad, exact) == [1, 0]


def test_transition_width_needs_jump():
    smooth = CylindricalIC(g_kinks).sample(64).points
    with pytest.raises(DomainError):
        transition_width(smooth, smooth)
