import numpy as np
import pytest

from oracles import geometric_budget, jacobi_eigenvalues, singular_values_via_gram


def test_jacobi_on_known_symmetric():
    a = np.array([[2.0, 1.0], [1.0, 2.0]])
    np.testing.assert_allclose(jacobi_eigenvalues(a), [3.0, 1.0], rtol=1e-15)


def test_jacobi_diagonal_is_fixed_point():
    np.testing.assert_array_equal(jacobi_eigenvalues(np.diag([1.0, 5.0, 3.0])), [5.0, 3.0, 1.0])


def test_gram_route_on_diagonal():
    np.testing.assert_allclose(singular_values_via_gram(np.diag([3.0, -2.0, 1.0])), [3, 2, 1])


@pytest.mark.parametrize("ratio,n,tau,expected", [(0.9, 576, 0.99, 22), (0.5, 4, 0.75, 1), (0.5, 4, 0.76, 2)])
def test_geometric_budget(ratio, n, tau, expected):
    assert geometric_budget(ratio, n, tau) == expected
