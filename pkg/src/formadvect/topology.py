"""Metric-free combinatorial structure.

Cell complexes for interval and tensor-product quadrilateral meshes and
their incidence matrices, which realize the exterior derivative on
cochains with integer {-1, 0, +1} entries.  Orientation convention: 1D
cells point in +xi, x-edges point in +x, y-edges in +y, faces are
counter-clockwise.  Global numbering is first-touch in lexicographic
element order (element_y, element_x, local_y, local_x), with all x-family
edges numbered before y-family edges.
"""
from __future__ import annotations

import numpy as np
import scipy.sparse as sp

__all__ = [
    "IncidenceMatrix",
    "CellComplex1D",
    "CellComplex2D",
    "incidence_1_0",
    "incidence_2_1",
    "apply_incidence",
]


class IncidenceMatrix:
    """Sparse integer matrix with entries in {-1, +1} at stored positions."""

    def __init__(self, mat: sp.spmatrix):
        mat = sp.csr_matrix(mat, dtype=np.int64)
        mat.eliminate_zeros()
        if mat.nnz and not np.all(np.isin(mat.data, (-1, 1))):
            raise ValueError("incidence entries must be -1 or +1")
        self.mat = mat

    @property
    def shape(self):
        return self.mat.shape

    def apply(self, cochain: np.ndarray) -> np.ndarray:
        cochain = np.asarray(cochain)
        if cochain.shape[0] != self.mat.shape[1]:
            raise ValueError(
                f"cochain length {cochain.shape[0]} != cell count {self.mat.shape[1]}"
            )
        return self.mat @ cochain

    def compose(self, other: "IncidenceMatrix") -> sp.csr_matrix:
        """Integer product self @ other (used for d o d = 0 checks)."""
        return (self.mat @ other.mat).tocsr()

    def toarray(self) -> np.ndarray:
        return self.mat.toarray()


def incidence_1_0(p: int) -> IncidenceMatrix:
    """Reference-line edge-to-node incidence: row j is (alpha_j - alpha_{j-1})."""
    if p < 1:
        raise ValueError(f"order must be >= 1, got {p}")
    rows = np.repeat(np.arange(p), 2)
    cols = np.empty(2 * p, dtype=np.int64)
    cols[0::2] = np.arange(p)
    cols[1::2] = np.arange(1, p + 1)
    data = np.tile([-1, 1], p)
    return IncidenceMatrix(sp.coo_matrix((data, (rows, cols)), shape=(p, p + 1)))


def apply_incidence(E: IncidenceMatrix, cochain: np.ndarray) -> np.ndarray:
    """Exact integer-weighted application of d to a cochain."""
    return E.apply(cochain)


class _Numbering:
    """First-touch id assignment for canonical fine-grid keys."""

    def __init__(self):
        self.ids: dict[tuple, int] = {}

    def get(self, key) -> int:
        idx = self.ids.get(key)
        if idx is None:
            idx = len(self.ids)
            self.ids[key] = idx
        return idx

    def __len__(self):
        return len(self.ids)


class CellComplex1D:
    """Nodes and edges of an n-element interval mesh of order p."""

    def __init__(self, n: int, p: int, periodic: bool):
        self.n, self.p, self.periodic = n, p, periodic
        nx = n * p  # fine cells
        nodes = _Numbering()
        edges = _Numbering()
        self.node_map = np.empty((n, p + 1), dtype=np.int64)
        self.edge_map = np.empty((n, p), dtype=np.int64)
        for e in range(n):
            for i in range(p + 1):
                g = e * p + i
                if periodic:
                    g %= nx
                self.node_map[e, i] = nodes.get(g)
            for j in range(1, p + 1):
                self.edge_map[e, j - 1] = edges.get(e * p + j - 1)
        self.n_nodes = len(nodes)
        self.n_edges = len(edges)
        node_of = {g: i for g, i in nodes.ids.items()}
        rows, cols, data = [], [], []
        for g in range(nx):
            right = (g + 1) % nx if periodic else g + 1
            rows += [g, g]
            cols += [node_of[g], node_of[right]]
            data += [-1, 1]
        self.E10 = IncidenceMatrix(
            sp.coo_matrix((data, (rows, cols)), shape=(self.n_edges, self.n_nodes))
        )

    def cell_count(self, k: int) -> int:
        return (self.n_nodes, self.n_edges)[k]


class CellComplex2D:
    """Local-to-global numbering and incidence matrices of an nx x ny mesh.

    Per element the local layout is: nodes (p+1)^2 by (ly, lx); edges
    x-family p(p+1) by (ly, lx) then y-family (p+1)p by (ly, lx);
    faces p^2 by (ly, lx).  Periodic directions identify boundary cells.
    """

    def __init__(self, nx: int, ny: int, p: int, periodic_x: bool, periodic_y: bool):
        self.nx, self.ny, self.p = nx, ny, p
        self.periodic_x, self.periodic_y = periodic_x, periodic_y
        self.n_elements = nx * ny
        Nx, Ny = nx * p, ny * p  # fine cells per direction

        def wrapx(i, count):
            return i % count if periodic_x else i

        def wrapy(j, count):
            return j % count if periodic_y else j

        nodes = _Numbering()
        xedges = _Numbering()
        yedges = _Numbering()
        faces = _Numbering()
        n_el = self.n_elements
        self.node_map = np.empty((n_el, (p + 1) ** 2), dtype=np.int64)
        self.edge_map = np.empty((n_el, 2 * p * (p + 1)), dtype=np.int64)
        self.face_map = np.empty((n_el, p * p), dtype=np.int64)

        for ey in range(ny):
            for ex in range(nx):
                el = ey * nx + ex
                k = 0
                for ly in range(p + 1):
                    for lx in range(p + 1):
                        key = (wrapx(ex * p + lx, Nx), wrapy(ey * p + ly, Ny))
                        self.node_map[el, k] = nodes.get(key)
                        k += 1
                k = 0
                for ly in range(p + 1):  # x-family: fine cell in x, node row in y
                    for lx in range(1, p + 1):
                        key = (ex * p + lx - 1, wrapy(ey * p + ly, Ny))
                        self.edge_map[el, k] = xedges.get(key)
                        k += 1
                k = 0
                for ly in range(1, p + 1):
                    for lx in range(1, p + 1):
                        self.face_map[el, k] = faces.get((ex * p + lx - 1, ey * p + ly - 1))
                        k += 1

        # second pass for y-family so every y-edge id comes after all x-edge ids
        self.n_x_edges = len(xedges)
        for ey in range(ny):
            for ex in range(nx):
                el = ey * nx + ex
                k = p * (p + 1)
                for ly in range(1, p + 1):
                    for lx in range(p + 1):
                        key = (wrapx(ex * p + lx, Nx), ey * p + ly - 1)
                        self.edge_map[el, k] = self.n_x_edges + yedges.get(key)
                        k += 1

        self.n_nodes = len(nodes)
        self.n_edges = self.n_x_edges + len(yedges)
        self.n_faces = len(faces)

        node_id = nodes.ids
        xedge_id = xedges.ids
        yedge_id = {k: v + self.n_x_edges for k, v in yedges.ids.items()}

        rows, cols, data = [], [], []
        for (i, j), r in xedge_id.items():  # d(0-form): node differences along +x
            rows += [r, r]
            cols += [node_id[(i, j)], node_id[(wrapx(i + 1, Nx), j)]]
            data += [-1, 1]
        for (i, j), r in yedge_id.items():
            rows += [r, r]
            cols += [node_id[(i, j)], node_id[(i, wrapy(j + 1, Ny))]]
            data += [-1, 1]
        self.E10 = IncidenceMatrix(
            sp.coo_matrix((data, (rows, cols)), shape=(self.n_edges, self.n_nodes))
        )

        rows, cols, data = [], [], []
        for (i, j), r in faces.ids.items():  # counter-clockwise boundary
            bottom = xedge_id[(i, j)]
            top = xedge_id[(i, wrapy(j + 1, Ny))]
            left = yedge_id[(i, j)]
            right = yedge_id[(wrapx(i + 1, Nx), j)]
            rows += [r, r, r, r]
            cols += [bottom, top, left, right]
            data += [1, -1, -1, 1]
        self.E21 = IncidenceMatrix(
            sp.coo_matrix((data, (rows, cols)), shape=(self.n_faces, self.n_edges))
        )

    def cell_count(self, k: int) -> int:
        return (self.n_nodes, self.n_edges, self.n_faces)[k]


def incidence_2_1(complex2d: CellComplex2D) -> IncidenceMatrix:
    """Face-to-edge incidence of an assembled 2D complex."""
    return complex2d.E21
