"""Metric (Galerkin) operators.

Mass matrices for each form degree and the wedge matrix pairing the
velocity 1-form with test functions one degree down.  Solving
M sigma = W rho realizes the discrete interior product as the L2 adjoint
of wedging with the velocity.  Assembly is element-local quadrature with
a Gauss rule of p+2 points per direction, scattered to the global
numbering with periodic identification.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .forms import DiscreteForm
from .mesh import Mesh1D, pullback_weights
from .polybasis import gauss_rule

__all__ = [
    "VelocityField",
    "MassMatrix",
    "WedgeMatrix",
    "mass_matrix",
    "wedge_matrix",
    "interior_product",
    "matrix_dump",
]


@dataclass(frozen=True)
class VelocityField:
    """Prescribed velocity; components are callables on physical coords.

    Must be uniformly Lipschitz on the domain (documented requirement,
    not checked).  vy is None for 1D meshes.
    """

    vx: Callable
    vy: Callable | None = None
    steady: bool = True

    def negated(self) -> "VelocityField":
        vx, vy = self.vx, self.vy
        return VelocityField(
            lambda *a: -vx(*a),
            (lambda *a: -vy(*a)) if vy is not None else None,
            self.steady,
        )


class MassMatrix:
    """Global sparse symmetric positive-definite Gram matrix M^k."""

    def __init__(self, degree: int, mat: sp.csr_matrix, mesh):
        self.degree = degree
        self.mat = mat
        self.mesh = mesh
        self._factor = None

    def solve(self, b: np.ndarray) -> np.ndarray:
        """Direct sparse solve, factorized once and reused."""
        if self._factor is None:
            self._factor = spla.splu(self.mat.tocsc())
        return self._factor.solve(b)


@dataclass
class WedgeMatrix:
    """W[j, i] = <eps_i^(k), nu ^ eps_j^(k-1)>; rows test (k-1)-forms."""

    degree: int  # k of the column basis
    mat: sp.csr_matrix
    velocity: VelocityField


class _BasisTables:
    """Element-local tensor basis values at a tensor quadrature grid."""

    _cache: dict = {}

    def __new__(cls, basis, nq: int):
        key = (basis.p, nq)
        hit = cls._cache.get(key)
        if hit is not None:
            return hit
        self = super().__new__(cls)
        p = basis.p
        rule = gauss_rule(nq)
        L = basis.lagrange_all(rule.nodes)  # (p+1, nq)
        E = basis.edge_all(rule.nodes)  # (p, nq)
        self.rule = rule
        self.w2 = (rule.weights[:, None] * rule.weights[None, :]).ravel()
        # row layouts match the cell complex: nodes (ly,lx); x-edges then
        # y-edges; faces (ly,lx).  Quadrature axis is (qy, qx) flattened.
        self.psi0 = np.einsum("bq,ar->baqr", L, L).reshape((p + 1) ** 2, nq * nq)
        self.psix = np.einsum("bq,ar->baqr", L, E).reshape((p + 1) * p, nq * nq)
        self.psiy = np.einsum("bq,ar->baqr", E, L).reshape(p * (p + 1), nq * nq)
        self.psi2 = np.einsum("bq,ar->baqr", E, E).reshape(p * p, nq * nq)
        cls._cache[key] = self
        return self


def _assemble(triplets, shape) -> sp.csr_matrix:
    rows = np.concatenate([t[0] for t in triplets])
    cols = np.concatenate([t[1] for t in triplets])
    data = np.concatenate([t[2] for t in triplets])
    return sp.coo_matrix((data, (rows, cols)), shape=shape).tocsr()


def _scatter(local: np.ndarray, row_ids: np.ndarray, col_ids: np.ndarray):
    r = np.repeat(row_ids, col_ids.size)
    c = np.tile(col_ids, row_ids.size)
    return r, c, local.ravel()


def mass_matrix(mesh, k: int) -> MassMatrix:
    """Assemble the global mass matrix of degree-k basis forms."""
    if mesh.dim == 1:
        return _mass_matrix_1d(mesh, k)
    if k not in (0, 1, 2):
        raise ValueError(f"unsupported degree {k}")
    cx = mesh.complex
    tab = _BasisTables(mesh.basis, mesh.p + 2)
    n = cx.cell_count(k)
    trips = []
    for el in range(mesh.n_elements):
        geom = pullback_weights(mesh, el, tab.rule)
        det = geom.det.ravel()
        if k == 0:
            loc = (tab.psi0 * (tab.w2 * det)) @ tab.psi0.T
            ids = cx.node_map[el]
        elif k == 2:
            loc = (tab.psi2 * (tab.w2 / det)) @ tab.psi2.T
            ids = cx.face_map[el]
        else:
            g11 = geom.g11.ravel() * tab.w2
            g12 = geom.g12.ravel() * tab.w2
            g22 = geom.g22.ravel() * tab.w2
            mxx = (tab.psix * g11) @ tab.psix.T
            mxy = (tab.psix * g12) @ tab.psiy.T
            myy = (tab.psiy * g22) @ tab.psiy.T
            loc = np.block([[mxx, mxy], [mxy.T, myy]])
            ids = cx.edge_map[el]
        loc = 0.5 * (loc + loc.T)  # enforce exact symmetry
        trips.append(_scatter(loc, ids, ids))
    return MassMatrix(k, _assemble(trips, (n, n)), mesh)


def _mass_matrix_1d(mesh: Mesh1D, k: int) -> MassMatrix:
    if k not in (0, 1):
        raise ValueError(f"unsupported degree {k} on a 1D mesh")
    cx = mesh.complex
    rule = gauss_rule(mesh.p + 2)
    L = mesh.basis.lagrange_all(rule.nodes)
    E = mesh.basis.edge_all(rule.nodes)
    jac = mesh.jac(0)
    if k == 0:
        loc = (L * (rule.weights * jac)) @ L.T
        maps = cx.node_map
    else:
        loc = (E * (rule.weights / jac)) @ E.T
        maps = cx.edge_map
    loc = 0.5 * (loc + loc.T)
    n = cx.cell_count(k)
    trips = [_scatter(loc, maps[el], maps[el]) for el in range(mesh.n_elements)]
    return MassMatrix(k, _assemble(trips, (n, n)), mesh)


def wedge_matrix(mesh, velocity: VelocityField, k: int) -> WedgeMatrix:
    """Assemble W[j, i] = <eps_i^(k), v-flat ^ eps_j^(k-1)>.

    k = 2 pairs 2-form trial functions with 1-form tests (2D meshes);
    k = 1 pairs 1-form trials with 0-form tests (1D meshes).  The
    interior product of 0-forms vanishes identically, so k = 0 is
    rejected.
    """
    if k == 0:
        raise ValueError("interior product of a 0-form vanishes; k must be >= 1")
    if mesh.dim == 1:
        if k != 1:
            raise ValueError("1D meshes support k = 1 only")
        return _wedge_matrix_1d(mesh, velocity)
    if k != 2:
        raise ValueError("2D advection pairs 2-forms with 1-form tests (k = 2)")
    cx = mesh.complex
    tab = _BasisTables(mesh.basis, mesh.p + 2)
    trips = []
    for el in range(mesh.n_elements):
        geom = pullback_weights(mesh, el, tab.rule)
        vx = velocity.vx(geom.x, geom.y)
        vy = velocity.vy(geom.x, geom.y)
        det = geom.det
        # nu ^ (lambda dx) = -v_y lambda dxdy, nu ^ (lambda dy) = +v_x lambda dxdy
        # pushed through the map: the det J of the inner product cancels
        fx = (-(vx * geom.jxy + vy * geom.jyy) / det).ravel() * tab.w2
        fy = ((vx * geom.jxx + vy * geom.jyx) / det).ravel() * tab.w2
        wx = (tab.psix * fx) @ tab.psi2.T
        wy = (tab.psiy * fy) @ tab.psi2.T
        loc = np.vstack([wx, wy])
        trips.append(_scatter(loc, cx.edge_map[el], cx.face_map[el]))
    mat = _assemble(trips, (cx.n_edges, cx.n_faces))
    return WedgeMatrix(2, mat, velocity)


def _wedge_matrix_1d(mesh: Mesh1D, velocity: VelocityField) -> WedgeMatrix:
    cx = mesh.complex
    rule = gauss_rule(mesh.p + 2)
    L = mesh.basis.lagrange_all(rule.nodes)
    E = mesh.basis.edge_all(rule.nodes)
    trips = []
    for el in range(mesh.n_elements):
        v = velocity.vx(mesh.xy(el, rule.nodes))
        loc = (L * (rule.weights * v)) @ E.T  # metric factors cancel in 1D
        trips.append(_scatter(loc, cx.node_map[el], cx.edge_map[el]))
    mat = _assemble(trips, (cx.n_nodes, cx.n_edges))
    return WedgeMatrix(1, mat, velocity)


def interior_product(rho: DiscreteForm, M: MassMatrix, W: WedgeMatrix) -> DiscreteForm:
    """L2-optimal contraction: solve M sigma = W rho."""
    if rho.degree != W.degree:
        raise ValueError("form degree does not match the wedge matrix")
    if M.degree != rho.degree - 1:
        raise ValueError("mass matrix must be one degree below rho")
    sigma = M.solve(W.mat @ rho.coeffs)
    return DiscreteForm(rho.degree - 1, rho.mesh, sigma)


def matrix_dump(mat, path):
    """Coordinate-format text dump (row col value) for debugging."""
    coo = sp.coo_matrix(getattr(mat, "mat", mat))
    with open(path, "w") as f:
        f.write(f"# rows={coo.shape[0]} cols={coo.shape[1]} nnz={coo.nnz}\n")
        for r, c, v in zip(coo.row, coo.col, coo.data):
            f.write(f"{r} {c} {v!r}\n")
