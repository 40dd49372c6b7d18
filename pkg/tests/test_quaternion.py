import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_unit
from sphereadvect.exceptions import DomainError
from sphereadvect.quaternion import (
    Quaternion,
    exp_map,
    hamilton_product,
    inverse,
    log_map,
    power_map,
    rotate,
)

I = Quaternion(0, (1, 0, 0))
J = Quaternion(0, (0, 1, 0))
K = Quaternion(0, (0, 0, 1))
ONE = Quaternion.identity()

finite = st.floats(-10, 10, allow_nan=False)
quats = st.builds(lambda a, b, c, d: Quaternion(a, (b, c, d)), finite, finite, finite, finite)


def unit_quats(rng, n):
    return [Quaternion.from_array(q) for q in rng.normal(size=(n, 4))]


def close(q1, q2, tol=1e-12):
    return np.allclose(q1.as_array(), q2.as_array(), atol=tol, rtol=0)


def test_basis_products():
    assert close(I * J, K)
    assert close(J * K, I)
    assert close(K * I, J)
    assert close(I * I, Quaternion(-1, (0, 0, 0)))
    assert close(I * J * K, Quaternion(-1, (0, 0, 0)))


def test_noncommutative():
    assert close(I * J, K)
    assert close(J * I, -1 * K)


@given(quats)
def test_identity_element(q):
    assert close(ONE * q, q, 0)
    assert close(q * ONE, q, 0)


def test_norm_multiplicative(rng):
    for _ in range(1000):
        q1, q2 = (Quaternion.from_array(rng.normal(size=4) * 3) for _ in range(2))
        assert hamilton_product(q1, q2).norm() == pytest.approx(q1.norm() * q2.norm(), rel=1e-12)


def test_inverse_examples():
    q = Quaternion(math.cos(0.3), (0, 0, math.sin(0.3)))
    assert close(inverse(q), Quaternion(math.cos(0.3), (0, 0, -math.sin(0.3))))
    assert close(inverse(Quaternion(2, (0, 0, 0))), Quaternion(0.5, (0, 0, 0)))
    with pytest.raises(DomainError):
        inverse(Quaternion(0, (0, 0, 0)))


@given(quats.filter(lambda q: q.norm() > 1e-3))
def test_inverse_is_two_sided(q):
    assert close(q * inverse(q), ONE, 1e-12)
    assert close(inverse(q) * q, ONE, 1e-12)


def test_exp_examples():
    assert close(exp_map(Quaternion(0, (0, 0, 0))), ONE, 0)
    assert close(exp_map(Quaternion(0, (math.pi, 0, 0))), Quaternion(-1, (0, 0, 0)))


def test_exp_small_angle_is_continuous():
    tiny = exp_map(Quaternion(0.5, (1e-12, 0, 0)))
    assert close(tiny, Quaternion(math.exp(0.5), (math.exp(0.5) * 1e-12, 0, 0)), 1e-15)


def test_log_examples():
    assert close(log_map(ONE), Quaternion(0, (0, 0, 0)), 0)
    assert close(log_map(K), Quaternion(0, (0, 0, math.pi / 2)))
    assert close(log_map(Quaternion(3, (0, 0, 0))), Quaternion(math.log(3), (0, 0, 0)))
    with pytest.raises(DomainError):
        log_map(Quaternion(0, (0, 0, 0)))
    with pytest.raises(DomainError):
        log_map(Quaternion(-1, (0, 0, 0)))


def test_log_exp_round_trip(rng):
    for _ in range(500):
        u = random_unit(rng) * rng.uniform(1e-6, math.pi - 1e-3)
        q = Quaternion(rng.uniform(-2, 2), u)
        assert close(log_map(exp_map(q)), q, 1e-10)


def test_exp_log_round_trip(rng):
    for q in unit_quats(rng, 500):
        q = q.normalized()
        if q.a <= -1 + 1e-6:
            continue
        assert close(exp_map(log_map(q)), q, 1e-10)


def test_power_examples(rng):
    for q in unit_quats(rng, 20):
        assert close(power_map(q, 0), ONE, 1e-15)
        assert close(power_map(q, 1), q, 1e-12)
    q = Quaternion(math.cos(math.pi / 4), (0, 0, math.sin(math.pi / 4)))
    assert close(power_map(q, 2), K, 1e-12)


def test_power_compositions(rng):
    for q in unit_quats(rng, 300):
        q = q.normalized()
        assert close(power_map(power_map(q, 0.5), 2), q, 1e-10)
        s, t = rng.uniform(-2, 2, size=2)
        assert close(power_map(q, s + t), power_map(q, s) * power_map(q, t), 1e-10)


def _matrix(axis, angle):
    # independent oracle: Rodrigues rotation matrix
    x, y, z = axis / np.linalg.norm(axis)
    k = np.array([[0, -z, y], [z, 0, -x], [-y, x, 0]])
    return np.eye(3) + math.sin(angle) * k + (1 - math.cos(angle)) * k @ k


def test_rotate_examples():
    r = Quaternion.rotation((0, 0, 1), math.pi / 2)
    np.testing.assert_allclose(rotate((1, 0, 0), r), (0, 1, 0), atol=1e-12)
    p = np.array([0.6, 0.0, 0.8])
    np.testing.assert_array_equal(rotate(p, ONE), p)


def test_rotate_matches_matrix(rng):
    for _ in range(200):
        p = random_unit(rng)
        axis = rng.normal(size=3)
        angle = rng.uniform(-2 * math.pi, 2 * math.pi)
        out = rotate(p, Quaternion.rotation(axis, angle))
        np.testing.assert_allclose(out, _matrix(axis, angle) @ p, atol=1e-12)
        assert abs(np.linalg.norm(out) - 1) < 1e-12


def test_rotate_matches_rodrigues_for_perpendicular_axis(rng):
    for _ in range(100):
        p = random_unit(rng)
        a = np.cross(p, random_unit(rng))
        a /= np.linalg.norm(a)
        theta = rng.uniform(0, math.pi)
        rodrigues = math.cos(theta) * p + math.sin(theta) * np.cross(a, p)
        np.testing.assert_allclose(rotate(p, Quaternion.rotation(a, theta)), rodrigues, atol=1e-12)


def test_rotate_preserves_inner_products(rng):
    for _ in range(200):
        p1, p2 = random_unit(rng), random_unit(rng)
        r = Quaternion.rotation(rng.normal(size=3), rng.uniform(0, 2 * math.pi))
        assert rotate(p1, r) @ rotate(p2, r) == pytest.approx(p1 @ p2, abs=1e-12)


def test_rotate_rejects_non_unit():
    with pytest.raises(DomainError):
        rotate((1, 0, 0), Quaternion(2, (0, 0, 0)))


def test_non_finite_rejected():
    with pytest.raises(ValueError):
        Quaternion(float("nan"), (0, 0, 0))


@settings(max_examples=200)
@given(quats, quats)
def test_product_formula_against_components(q1, q2):
    # expanded component form of the Hamilton product with ij = k
    a1, b1, c1, d1 = q1.as_array()
    a2, b2, c2, d2 = q2.as_array()
    expect = [
        a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
        a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
        a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
        a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
    ]
    np.testing.assert_allclose((q1 * q2).as_array(), expect, atol=1e-12)
