"""Physical geometry: reference-to-physical element maps and meshes.

Affine rectangles and an analytic sinusoidal interior distortion, both
with exact Jacobians.  The distortion vanishes on the domain boundary
lattice so periodic identification survives.  Metric factors for 0-, 1-
and 2-form inner products are evaluated at arbitrary reference points.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .polybasis import Basis1D, gauss_rule
from .topology import CellComplex1D, CellComplex2D

__all__ = [
    "ElementMap",
    "Mesh1D",
    "Mesh2D",
    "ElementGeometry",
    "build_interval",
    "build_uniform",
    "build_distorted",
    "pullback_weights",
    "mesh_summary_csv",
]

TWO_PI = 2.0 * np.pi


class InvalidDistortionError(ValueError):
    """Distortion amplitude produces a non-positive Jacobian."""


class ElementMap:
    """Map from the reference square [-1,1]^2 to one physical quadrilateral.

    kind is "affine" or "analytic_distortion".  The distorted map composes
    the affine rectangle map with

        x = xh + a * Lx * sin(2 pi u) sin(2 pi v)
        y = yh + a * Ly * sin(2 pi u) sin(2 pi v)

    where (u, v) are domain-normalized coordinates of the affine image
    (xh, yh).  Jacobians are analytic in both cases.
    """

    def __init__(self, x0, y0, hx, hy, domain=None, amplitude=0.0):
        self.x0, self.y0, self.hx, self.hy = x0, y0, hx, hy
        self.amplitude = amplitude
        self.domain = domain
        self.kind = "analytic_distortion" if amplitude else "affine"

    def _affine(self, xi, eta):
        return self.x0 + 0.5 * self.hx * (xi + 1.0), self.y0 + 0.5 * self.hy * (eta + 1.0)

    def xy(self, xi, eta):
        xh, yh = self._affine(np.asarray(xi, float), np.asarray(eta, float))
        if not self.amplitude:
            return xh, yh
        ax0, ax1, ay0, ay1 = self.domain
        lx, ly = ax1 - ax0, ay1 - ay0
        s = np.sin(TWO_PI * (xh - ax0) / lx) * np.sin(TWO_PI * (yh - ay0) / ly)
        a = self.amplitude
        return xh + a * lx * s, yh + a * ly * s

    def jacobian(self, xi, eta):
        """Entries (x_xi, x_eta, y_xi, y_eta) at reference points."""
        xi = np.asarray(xi, float)
        eta = np.asarray(eta, float)
        shape = np.broadcast(xi, eta).shape
        jxx = np.full(shape, 0.5 * self.hx)  # dx/dxi
        jxy = np.zeros(shape)
        jyx = np.zeros(shape)
        jyy = np.full(shape, 0.5 * self.hy)
        if not self.amplitude:
            return jxx, jxy, jyx, jyy
        xh, yh = self._affine(xi, eta)
        ax0, ax1, ay0, ay1 = self.domain
        lx, ly = ax1 - ax0, ay1 - ay0
        u, v = (xh - ax0) / lx, (yh - ay0) / ly
        a = self.amplitude
        su = TWO_PI * np.cos(TWO_PI * u) * np.sin(TWO_PI * v)  # d s / d u
        sv = TWO_PI * np.sin(TWO_PI * u) * np.cos(TWO_PI * v)
        # d(x,y)/d(xh,yh), then chain through the affine map
        dxdxh = 1.0 + a * su
        dxdyh = a * lx * sv / ly
        dydxh = a * ly * su / lx
        dydyh = 1.0 + a * sv
        return (
            dxdxh * jxx,
            dxdyh * jyy,
            dydxh * jxx,
            dydyh * jyy,
        )

    def det_j(self, xi, eta):
        jxx, jxy, jyx, jyy = self.jacobian(xi, eta)
        return jxx * jyy - jxy * jyx


@dataclass
class ElementGeometry:
    """Metric data of one element at a tensor grid of reference points.

    Arrays are indexed [iy, ix] over the grid.  g11/g12/g22 are the
    1-form metric J^{-1} J^{-T} det J; det is the 0-form weight and
    1/det the 2-form weight.
    """

    x: np.ndarray
    y: np.ndarray
    jxx: np.ndarray
    jxy: np.ndarray
    jyx: np.ndarray
    jyy: np.ndarray
    det: np.ndarray
    g11: np.ndarray
    g12: np.ndarray
    g22: np.ndarray


class Mesh2D:
    """Tensor-product quadrilateral mesh with per-element maps."""

    dim = 2

    def __init__(self, nx, ny, p, domain, periodic_x, periodic_y, maps):
        self.nx, self.ny, self.p = nx, ny, p
        self.domain = domain
        self.periodic_x, self.periodic_y = periodic_x, periodic_y
        self.maps = maps
        self.complex = CellComplex2D(nx, ny, p, periodic_x, periodic_y)
        self.basis = Basis1D(p)
        self.n_elements = nx * ny

    @property
    def is_affine(self) -> bool:
        return all(m.kind == "affine" for m in self.maps)

    @property
    def uniform(self) -> bool:
        """All element maps identical up to translation (affine tiling)."""
        return self.is_affine

    def top_degree(self) -> int:
        return 2

    def check_interfaces(self, tol=1e-12) -> float:
        """Max mismatch of adjacent maps at p+1 shared-edge sample points."""
        t = np.linspace(-1.0, 1.0, self.p + 1)
        worst = 0.0
        for ey in range(self.ny):
            for ex in range(self.nx):
                el = ey * self.nx + ex
                if ex + 1 < self.nx or self.periodic_x:
                    nbr = ey * self.nx + (ex + 1) % self.nx
                    xa, ya = self.maps[el].xy(np.ones_like(t), t)
                    xb, yb = self.maps[nbr].xy(-np.ones_like(t), t)
                    dx = np.abs(xa - xb)
                    if ex + 1 == self.nx:  # wrapped pair differs by the period
                        dx = np.abs(dx - (self.domain[1] - self.domain[0]))
                    worst = max(worst, dx.max(), np.abs(ya - yb).max())
                if ey + 1 < self.ny or self.periodic_y:
                    nbr = ((ey + 1) % self.ny) * self.nx + ex
                    xa, ya = self.maps[el].xy(t, np.ones_like(t))
                    xb, yb = self.maps[nbr].xy(t, -np.ones_like(t))
                    dy = np.abs(ya - yb)
                    if ey + 1 == self.ny:
                        dy = np.abs(dy - (self.domain[3] - self.domain[2]))
                    worst = max(worst, np.abs(xa - xb).max(), dy.max())
        if worst > tol:
            raise ValueError(f"element interfaces disagree by {worst:.3e}")
        return worst


class Mesh1D:
    """Interval mesh of affine elements, optionally periodic."""

    dim = 1

    def __init__(self, n, p, domain, periodic):
        self.n = self.nx = n
        self.p = p
        self.domain = domain
        self.periodic = periodic
        h = (domain[1] - domain[0]) / n
        self.h = h
        self.lefts = domain[0] + h * np.arange(n)
        self.complex = CellComplex1D(n, p, periodic)
        self.basis = Basis1D(p)
        self.n_elements = n

    def top_degree(self) -> int:
        return 1

    def xy(self, el, xi):
        return self.lefts[el] + 0.5 * self.h * (np.asarray(xi, float) + 1.0)

    def jac(self, el) -> float:
        return 0.5 * self.h


def build_interval(n: int, domain, periodic: bool, p: int) -> Mesh1D:
    if n < 1:
        raise ValueError("need at least one element")
    if domain[1] <= domain[0]:
        raise ValueError("empty domain")
    return Mesh1D(n, p, tuple(domain), periodic)


def build_uniform(nx, ny, domain, periodic_x, periodic_y, p) -> Mesh2D:
    """Affine elements tiling the rectangle domain = (x0, x1, y0, y1)."""
    if nx < 1 or ny < 1:
        raise ValueError("need at least one element per direction")
    x0, x1, y0, y1 = domain
    if x1 <= x0 or y1 <= y0:
        raise ValueError("empty domain")
    hx, hy = (x1 - x0) / nx, (y1 - y0) / ny
    maps = [
        ElementMap(x0 + ex * hx, y0 + ey * hy, hx, hy)
        for ey in range(ny)
        for ex in range(nx)
    ]
    return Mesh2D(nx, ny, p, tuple(domain), periodic_x, periodic_y, maps)


def build_distorted(
    nx, ny, p, amplitude, domain=(0.0, 1.0, 0.0, 1.0),
    periodic_x=True, periodic_y=True,
) -> Mesh2D:
    """Uniform mesh warped by the boundary-fixed sinusoidal distortion."""
    if nx < 1 or ny < 1:
        raise ValueError("need at least one element per direction")
    x0, x1, y0, y1 = domain
    hx, hy = (x1 - x0) / nx, (y1 - y0) / ny
    maps = [
        ElementMap(x0 + ex * hx, y0 + ey * hy, hx, hy, tuple(domain), amplitude)
        for ey in range(ny)
        for ex in range(nx)
    ]
    mesh = Mesh2D(nx, ny, p, tuple(domain), periodic_x, periodic_y, maps)
    if amplitude:
        q = gauss_rule(p + 2).nodes
        e, n = np.meshgrid(q, q, indexing="ij")
        for m in maps:
            if np.min(m.det_j(n, e)) <= 0.0:
                raise InvalidDistortionError(
                    f"amplitude {amplitude} gives det J <= 0"
                )
    return mesh


def pullback_weights(mesh: Mesh2D, element: int, quad) -> ElementGeometry:
    """Metric factors of one element at the tensor grid of a 1D rule.

    quad may be a QuadratureRule or a plain array of reference points.
    Returned arrays are indexed [iy, ix].
    """
    pts = getattr(quad, "nodes", quad)
    eta, xi = np.meshgrid(pts, pts, indexing="ij")
    m = mesh.maps[element]
    x, y = m.xy(xi, eta)
    jxx, jxy, jyx, jyy = m.jacobian(xi, eta)
    det = jxx * jyy - jxy * jyx
    if np.any(det <= 0.0):
        raise ValueError(f"singular or inverted Jacobian in element {element}")
    g11 = (jxy * jxy + jyy * jyy) / det
    g12 = -(jxx * jxy + jyx * jyy) / det
    g22 = (jxx * jxx + jyx * jyx) / det
    return ElementGeometry(x, y, jxx, jxy, jyx, jyy, det, g11, g12, g22)


def mesh_summary_csv(mesh: Mesh2D, path):
    """Element corner coordinates and counts, for external tooling."""
    lines = ["# schema=mesh_summary v1"]
    lines.append(f"# nx={mesh.nx} ny={mesh.ny} p={mesh.p} "
                 f"nodes={mesh.complex.n_nodes} edges={mesh.complex.n_edges} "
                 f"faces={mesh.complex.n_faces}")
    lines.append("element,x00,y00,x10,y10,x01,y01,x11,y11")
    corners = [(-1.0, -1.0), (1.0, -1.0), (-1.0, 1.0), (1.0, 1.0)]
    for el, m in enumerate(mesh.maps):
        vals = []
        for xi, eta in corners:
            x, y = m.xy(xi, eta)
            vals += [float(x), float(y)]
        lines.append(",".join([str(el)] + [repr(v) for v in vals]))
    with open(path, "w") as f:
        f.write("\n".join(lines) + "\n")
