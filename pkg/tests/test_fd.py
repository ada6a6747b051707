import numpy as np

from transhilb import fd


def f(x):
    return np.array([x[0] ** 3 * x[1], np.exp(x[1])])


def test_jacobian_of_polynomial_map():
    x = np.array([0.5 + 1j, -0.3 + 0.2j])
    exact = np.array([[3 * x[0] ** 2 * x[1], x[0] ** 3], [0, np.exp(x[1])]])
    np.testing.assert_allclose(fd.jacobian(f, x), exact, atol=1e-10)
    np.testing.assert_allclose(fd.jacobian(f, x, 1e-4, absolute=True), exact, atol=1e-10)


def test_fourth_order_on_quartic():
    # the five-point stencil is exact for polynomials up to degree four
    g = lambda x: np.array([x[0] ** 4])
    x = np.array([2.0 + 0j])
    np.testing.assert_allclose(fd.jacobian(g, x, 1e-2), [[32.0]], rtol=1e-12)


def test_gradient_and_directional():
    x = np.array([1.0 + 0j, 2.0 + 0j])
    np.testing.assert_allclose(fd.gradient(lambda y: y[0] * y[1] ** 2, x), [4, 4], atol=1e-9)
    v = np.array([1.0, -1j])
    np.testing.assert_allclose(fd.directional(f, x, v), fd.jacobian(f, x) @ v, atol=1e-9)


def test_holomorphy_defect():
    x = np.array([0.3 + 0.4j, 0.1j])
    assert fd.holomorphy_defect(f, x) < 1e-8
    assert fd.holomorphy_defect(lambda y: np.conj(y), x) > 1.0
