import numpy as np
import pytest

from formadvect.polybasis import (
    Basis1D,
    InvalidOrderError,
    gauss_lobatto_nodes,
    gauss_lobatto_rule,
    gauss_nodes,
    gauss_rule,
    legendre,
)

ORDERS = list(range(1, 13))


def test_gauss_lobatto_small_orders():
    assert np.array_equal(gauss_lobatto_nodes(1), [-1.0, 1.0])
    assert np.array_equal(gauss_lobatto_nodes(2), [-1.0, 0.0, 1.0])
    # p=3 interior nodes are the roots of L_3' = (15 xi^2 - 3)/2
    nodes = gauss_lobatto_nodes(3)
    a = np.sqrt(0.2)
    assert np.allclose(nodes, [-1.0, -a, a, 1.0], atol=1e-15)


def test_gauss_small_orders():
    assert np.array_equal(gauss_nodes(1), [0.0])
    assert np.allclose(gauss_nodes(2), [-1 / np.sqrt(3), 1 / np.sqrt(3)], atol=1e-15)
    c = np.sqrt(0.6)
    assert np.allclose(gauss_nodes(3), [-c, 0.0, c], atol=1e-15)


def test_invalid_orders_rejected():
    for fn in (gauss_nodes, gauss_lobatto_nodes, gauss_rule, gauss_lobatto_rule):
        with pytest.raises(InvalidOrderError):
            fn(0)


def test_gauss_nodes_match_numpy_reference():
    for p in ORDERS:
        ref = np.polynomial.legendre.leggauss(p)[0]
        assert np.allclose(gauss_nodes(p), ref, atol=1e-14)


@pytest.mark.parametrize("rule_fn", [gauss_rule, gauss_lobatto_rule])
def test_quadrature_invariants(rule_fn):
    for p in ORDERS:
        rule = rule_fn(p)
        x, w = rule.nodes, rule.weights
        assert np.all(np.diff(x) > 0)
        assert np.allclose(x, -x[::-1], atol=1e-14)
        assert np.all(w > 0)
        assert abs(w.sum() - 2.0) < 1e-14
        # exact for monomials up to degree 2p-1
        for m in range(rule.exactness + 1):
            exact = 2.0 / (m + 1) if m % 2 == 0 else 0.0
            assert abs(np.dot(w, x**m) - exact) < 1e-13, (p, m)


def test_lagrange_delta_and_partition_of_unity():
    rng = np.random.default_rng(7)
    for p in ORDERS:
        b = Basis1D(p)
        vals = b.lagrange_all(b.nodes)
        assert np.max(np.abs(vals - np.eye(p + 1))) < 1e-13
        pts = rng.uniform(-1, 1, 17)
        assert np.max(np.abs(b.lagrange_all(pts).sum(axis=0) - 1.0)) < 1e-13


def test_edge_delta_property():
    # int over cell j of e_i equals delta_ij, by Gauss quadrature >= 2p
    for p in ORDERS:
        b = Basis1D(p)
        q = gauss_rule(p + 2)
        got = np.zeros((p, p))
        for j in range(1, p + 1):
            lo, hi = b.nodes[j - 1], b.nodes[j]
            pts = 0.5 * (lo + hi) + 0.5 * (hi - lo) * q.nodes
            got[:, j - 1] = 0.5 * (hi - lo) * (b.edge_all(pts) @ q.weights)
        assert np.max(np.abs(got - np.eye(p))) < 1e-12


def test_lagrange_point_values():
    b = Basis1D(2)
    assert b.lagrange_eval(1, 0.0) == 1.0
    assert b.lagrange_eval(0, 1.0) == 0.0
    # l_1 = 1 - xi^2 for p=2
    assert abs(b.lagrange_eval(1, 0.5) - 0.75) < 1e-14


def test_lagrange_derivative_values():
    b1 = Basis1D(1)
    for xi in (-0.7, 0.0, 0.3, 1.0):
        assert abs(b1.lagrange_deriv(1, xi) - 0.5) < 1e-14
    b2 = Basis1D(2)
    assert abs(b2.lagrange_deriv(1, 0.0)) < 1e-13  # l_1' = -2 xi


def test_derivative_sum_is_zero():
    rng = np.random.default_rng(3)
    for p in ORDERS:
        b = Basis1D(p)
        pts = rng.uniform(-1, 1, 11)
        assert np.max(np.abs(b.deriv_all(pts).sum(axis=0))) < 1e-12


def test_derivative_matches_finite_differences():
    rng = np.random.default_rng(11)
    h = 1e-6
    for p in (1, 3, 6, 10):
        b = Basis1D(p)
        pts = rng.uniform(-0.99, 0.99, 20)
        fd = (b.lagrange_all(pts + h) - b.lagrange_all(pts - h)) / (2 * h)
        assert np.max(np.abs(b.deriv_all(pts) - fd)) < 1e-6


def test_edge_point_values():
    b1 = Basis1D(1)
    for xi in (-1.0, -0.2, 0.8):
        assert abs(b1.edge_eval(1, xi) - 0.5) < 1e-14
    b2 = Basis1D(2)
    # e_1 = -l_0' with l_0 = xi (xi - 1) / 2, so e_1(0) = 1/2
    assert abs(b2.edge_eval(1, 0.0) - 0.5) < 1e-13
    # int over first cell of e_2 vanishes
    q = gauss_rule(6)
    lo, hi = b2.nodes[0], b2.nodes[1]
    pts = 0.5 * (lo + hi) + 0.5 * (hi - lo) * q.nodes
    val = 0.5 * (hi - lo) * np.dot(q.weights, b2.edge_all(pts)[1])
    assert abs(val) < 1e-13


def test_telescoping_identity():
    # l_i' = e_i - e_{i+1} with e_0 = e_{p+1} = 0
    rng = np.random.default_rng(5)
    for p in ORDERS:
        b = Basis1D(p)
        pts = rng.uniform(-1, 1, 9)
        dl = b.deriv_all(pts)
        e = b.edge_all(pts)
        padded = np.vstack([np.zeros(pts.size), e, np.zeros(pts.size)])
        assert np.max(np.abs(dl - (padded[:-1] - padded[1:]))) < 1e-12


def test_index_bounds():
    b = Basis1D(3)
    with pytest.raises(IndexError):
        b.lagrange_eval(4, 0.0)
    with pytest.raises(IndexError):
        b.edge_eval(0, 0.0)
    with pytest.raises(IndexError):
        b.edge_eval(4, 0.0)


def test_legendre_endpoint_derivative():
    for n in (2, 5, 9):
        _, dl = legendre(n, np.array([-1.0, 1.0]))
        expect = n * (n + 1) / 2.0
        assert abs(dl[1] - expect) < 1e-12
        assert abs(dl[0] - (-1) ** (n + 1) * expect) < 1e-12
