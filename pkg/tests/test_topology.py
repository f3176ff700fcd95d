import numpy as np
import pytest
import scipy.sparse as sp

from formadvect.topology import (
    CellComplex1D,
    CellComplex2D,
    IncidenceMatrix,
    apply_incidence,
    incidence_1_0,
    incidence_2_1,
)

MESH_MATRIX = [
    (1, 1, 1, False, False),
    (1, 1, 4, True, True),
    (2, 2, 2, True, True),
    (3, 2, 3, True, False),
    (2, 3, 5, False, True),
    (4, 4, 3, True, True),
]


def test_incidence_values_validated():
    bad = sp.coo_matrix(np.array([[2, 0], [0, 1]]))
    with pytest.raises(ValueError):
        IncidenceMatrix(bad)


def test_incidence_1_0_small():
    assert np.array_equal(incidence_1_0(1).toarray(), [[-1, 1]])
    assert np.array_equal(incidence_1_0(2).toarray(), [[-1, 1, 0], [0, -1, 1]])


def test_incidence_1_0_constant_cochain():
    E = incidence_1_0(5)
    assert np.array_equal(E.apply(3.0 * np.ones(6)), np.zeros(5))


def test_apply_incidence_pairwise_differences():
    E = incidence_1_0(2)
    assert np.array_equal(apply_incidence(E, np.array([1.0, 2.0, 4.0])), [1.0, 2.0])
    with pytest.raises(ValueError):
        E.apply(np.ones(4))


def test_single_element_e21_row():
    cx = CellComplex2D(1, 1, 1, False, False)
    # edge ordering: bottom, top (x-family) then left, right (y-family)
    assert np.array_equal(cx.E21.toarray(), [[1, -1, -1, 1]])


def test_local_cell_counts():
    for nx, ny, p, px, py in MESH_MATRIX:
        cx = CellComplex2D(nx, ny, p, px, py)
        assert cx.node_map.shape[1] == (p + 1) ** 2
        assert cx.edge_map.shape[1] == 2 * p * (p + 1)
        assert cx.face_map.shape[1] == p * p
        assert cx.n_faces == nx * ny * p * p


def test_periodic_global_counts():
    cx = CellComplex2D(4, 4, 3, True, True)
    n = 4 * 3
    assert cx.n_nodes == n * n
    assert cx.n_edges == 2 * n * n
    assert cx.n_faces == n * n


def test_d_after_d_is_zero_exactly():
    for nx, ny, p, px, py in MESH_MATRIX:
        cx = CellComplex2D(nx, ny, p, px, py)
        dd = incidence_2_1(cx).compose(cx.E10)
        assert dd.nnz == 0, (nx, ny, p, px, py)


def test_incidence_entries_are_unit():
    for nx, ny, p, px, py in MESH_MATRIX:
        cx = CellComplex2D(nx, ny, p, px, py)
        for E in (cx.E10, cx.E21):
            assert np.all(np.isin(E.mat.data, (-1, 1)))


def test_periodic_column_sums_vanish():
    # every edge of a fully periodic mesh bounds exactly two faces with
    # opposite signs, the discrete backbone of global conservation
    for nx, ny, p in [(2, 2, 1), (2, 2, 3), (4, 4, 2)]:
        cx = CellComplex2D(nx, ny, p, True, True)
        colsum = np.asarray(cx.E21.mat.sum(axis=0)).ravel()
        assert np.all(colsum == 0)


def test_global_conservation_of_applied_incidence():
    rng = np.random.default_rng(0)
    cx = CellComplex2D(3, 3, 4, True, True)
    sigma = rng.standard_normal(cx.n_edges)
    total = np.sum(cx.E21.apply(sigma))
    assert abs(total) < 1e-12 * np.abs(sigma).sum()


def test_one_dimensional_complex():
    cx = CellComplex1D(4, 3, periodic=True)
    assert cx.n_nodes == 12 and cx.n_edges == 12
    colsum = np.asarray(cx.E10.mat.sum(axis=0)).ravel()
    assert np.all(colsum == 0)
    open_cx = CellComplex1D(4, 3, periodic=False)
    assert open_cx.n_nodes == 13 and open_cx.n_edges == 12
    # constant nodal cochain has zero derivative
    assert np.array_equal(open_cx.E10.apply(np.ones(13)), np.zeros(12))


def test_edge_families_grouped():
    cx = CellComplex2D(2, 2, 2, True, True)
    # x-family ids all precede y-family ids in every element's map
    p = 2
    for el in range(4):
        xfam = cx.edge_map[el][: p * (p + 1)]
        yfam = cx.edge_map[el][p * (p + 1):]
        assert xfam.max() < cx.n_x_edges
        assert yfam.min() >= cx.n_x_edges


def test_interior_edges_shared_by_two_faces_with_opposite_signs():
    # non-periodic mesh: boundary edges bound one face, interior edges
    # exactly two with opposite orientation signs
    cx = CellComplex2D(3, 2, 2, False, False)
    E = cx.E21.mat.tocsc()
    for j in range(cx.n_edges):
        col = E.getcol(j)
        assert col.nnz in (1, 2)
        if col.nnz == 2:
            assert col.sum() == 0
