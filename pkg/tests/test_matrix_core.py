import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import cgauss
from ncx.errors import DomainError
from ncx.matrix_core import (adjoint, factor_unit_ball, hoelder_gap, random_unitary,
                             schatten_norm, sqrt_psd, svd, trace)

seeds = st.integers(0, 2 ** 32 - 1)
dims = st.integers(1, 8)


@pytest.mark.parametrize("a, expected", [
    (np.eye(2), [1, 1]),
    (np.diag([3.0, 4.0]), [4, 3]),
    ([[0, 2], [0, 0]], [2, 0]),
])
def test_svd_examples(a, expected):
    trip = svd(a)
    np.testing.assert_allclose(trip.singulars, expected, atol=1e-14)


@given(seeds, dims)
def test_svd_reconstructs(seed, d):
    a = cgauss(np.random.default_rng(seed), d, d)
    u, s, v = svd(a)
    assert np.all(np.diff(s) <= 0)
    np.testing.assert_allclose((u * s) @ adjoint(v), a, atol=1e-10 * (1 + s[0]))
    np.testing.assert_allclose(adjoint(u) @ u, np.eye(d), atol=1e-10)
    np.testing.assert_allclose(adjoint(v) @ v, np.eye(d), atol=1e-10)


def test_schatten_examples():
    assert schatten_norm(np.eye(2), 1) == pytest.approx(2)
    assert schatten_norm(np.diag([3.0, 4.0]), 1) == pytest.approx(7)
    a = np.array([[1.0, 1.0], [1.0, 1.0]])
    frob = np.sqrt(sum(abs(x) ** 2 for row in a for x in row))
    assert frob == 2.0
    assert schatten_norm(a, 2) == pytest.approx(frob, abs=1e-14)


def test_schatten_rejects_bad_index():
    with pytest.raises(DomainError):
        schatten_norm(np.eye(2), 0)
    with pytest.raises(DomainError):
        schatten_norm(np.eye(2), -1.5)


@pytest.mark.parametrize("a, expected", [(np.eye(3), 3), ([[0, 1], [0, 0]], 0), ([[1, 2], [3, 4]], 5)])
def test_trace(a, expected):
    assert trace(a) == expected


def test_sqrt_psd_examples():
    np.testing.assert_allclose(sqrt_psd(np.diag([4.0, 9.0])), np.diag([2.0, 3.0]), atol=1e-14)
    np.testing.assert_allclose(sqrt_psd(np.zeros((2, 2))), np.zeros((2, 2)))
    # eigenvalues 3, 1 on (1,1)/sqrt2, (1,-1)/sqrt2
    r3 = np.sqrt(3.0)
    expected = np.array([[r3 + 1, r3 - 1], [r3 - 1, r3 + 1]]) / 2
    np.testing.assert_allclose(sqrt_psd([[2, 1], [1, 2]]), expected, atol=1e-14)


def test_sqrt_psd_domain():
    with pytest.raises(DomainError):
        sqrt_psd([[0, 1], [0, 0]])
    with pytest.raises(DomainError):
        sqrt_psd(np.diag([1.0, -1.0]))
    # tiny negative eigenvalues are clamped
    out = sqrt_psd(np.diag([1.0, -1e-13]))
    np.testing.assert_allclose(out, np.diag([1.0, 0.0]))


@given(seeds, dims)
def test_sqrt_psd_squares_back(seed, d):
    z = cgauss(np.random.default_rng(seed), d, d)
    a = adjoint(z) @ z
    r = sqrt_psd(a)
    assert np.linalg.eigvalsh(r).min() >= -1e-12
    np.testing.assert_allclose(r @ r, a, atol=1e-8 * (1 + np.linalg.norm(a, 2)))


def test_factor_unit_ball_examples():
    b, c = factor_unit_ball(np.diag([4.0, 0.0]))
    np.testing.assert_allclose(np.abs(b), np.diag([2.0, 0.0]), atol=1e-14)
    np.testing.assert_allclose(adjoint(b) @ c, np.diag([4.0, 0.0]), atol=1e-14)
    b, c = factor_unit_ball(np.zeros((2, 2)))
    assert not b.any() and not c.any()
    a = np.array([[0, 1], [0, 0]])
    b, c = factor_unit_ball(a)
    np.testing.assert_allclose(adjoint(b) @ c, a, atol=1e-14)
    assert schatten_norm(b, 2) ** 2 == pytest.approx(1)


@given(seeds, dims)
def test_factor_round_trip(seed, d):
    a = cgauss(np.random.default_rng(seed), d, d)
    b, c = factor_unit_ball(a)
    np.testing.assert_allclose(adjoint(b) @ c, a, atol=1e-10 * (1 + np.abs(a).max()))
    n1 = schatten_norm(a, 1)
    assert schatten_norm(b, 2) ** 2 == pytest.approx(n1, rel=1e-8)
    assert schatten_norm(c, 2) ** 2 == pytest.approx(n1, rel=1e-8)


def test_hoelder_examples():
    assert hoelder_gap(np.eye(2), np.eye(2), 2, 2) == pytest.approx(0, abs=1e-14)
    a, b = np.diag([1.0, 0.0]), np.diag([0.0, 1.0])
    for p, q in [(1, 1), (2, 2), (3, 1.5)]:
        assert hoelder_gap(a, b, p, q) == pytest.approx(1.0)
    with pytest.raises(DomainError):
        hoelder_gap(a, b, 0, 1)


@given(seeds, dims)
def test_s1_is_trace_of_modulus(seed, d):
    a = cgauss(np.random.default_rng(seed), d, d)
    assert schatten_norm(a, 1) == pytest.approx(trace(sqrt_psd(adjoint(a) @ a)).real, abs=1e-8)


@given(seeds, dims, st.sampled_from([0.5, 1, 2, 3, np.inf]))
def test_unitary_invariance(seed, d, p):
    rng = np.random.default_rng(seed)
    a = cgauss(rng, d, d)
    u, v = random_unitary(d, rng), random_unitary(d, rng)
    assert schatten_norm(u @ a @ v, p) == pytest.approx(schatten_norm(a, p), rel=1e-8)


@given(seeds, dims, st.sampled_from([1, 1.5, 2, 4]))
def test_triangle_inequality(seed, d, p):
    rng = np.random.default_rng(seed)
    a, b = cgauss(rng, d, d), cgauss(rng, d, d)
    assert schatten_norm(a + b, p) <= schatten_norm(a, p) + schatten_norm(b, p) + 1e-10


@pytest.mark.parametrize("p, q", [(2, 2), (2, 1), (4, 4 / 3), (2, 2 / 3), (1, 1)])
def test_hoelder_fuzz(p, q):
    rng = np.random.default_rng(int(1000 * p + q))
    for _ in range(1000):
        d = int(rng.integers(1, 5))
        a, b = cgauss(rng, d, d), cgauss(rng, d, d)
        scale = 1 + schatten_norm(a, p) * schatten_norm(b, q)
        assert hoelder_gap(a, b, p, q) >= -1e-10 * scale
