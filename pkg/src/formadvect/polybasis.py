"""One-dimensional spectral building blocks.

Legendre-based quadrature rules (Gauss and Gauss-Lobatto), the Lagrange
nodal basis on Gauss-Lobatto points, and the derived edge basis whose
members integrate to one over exactly one inter-node cell.  Everything
lives on the reference interval [-1, 1].
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "InvalidOrderError",
    "QuadratureRule",
    "Basis1D",
    "legendre",
    "gauss_lobatto_nodes",
    "gauss_nodes",
    "gauss_rule",
    "gauss_lobatto_rule",
]

_NEWTON_TOL = 1e-15
_NEWTON_MAXIT = 100


class InvalidOrderError(ValueError):
    """Polynomial order outside the supported range."""


def legendre(n: int, x):
    """Evaluate the Legendre polynomial L_n and its derivative at x.

    Three-term recurrence for the values; the derivative comes from
    (1 - x^2) L_n' = n (L_{n-1} - x L_n), with the endpoint limit
    L_n'(+-1) = (+-1)^{n+1} n(n+1)/2.
    """
    x = np.asarray(x, dtype=float)
    if n == 0:
        return np.ones_like(x), np.zeros_like(x)
    lm1 = np.ones_like(x)
    l = x.copy()
    for k in range(2, n + 1):
        lm1, l = l, ((2 * k - 1) * x * l - (k - 1) * lm1) / k
    dl = np.empty_like(x)
    interior = np.abs(x) < 1.0
    dl[interior] = n * (lm1[interior] - x[interior] * l[interior]) / (1.0 - x[interior] ** 2)
    at_end = ~interior
    if np.any(at_end):
        dl[at_end] = np.sign(x[at_end]) ** (n + 1) * n * (n + 1) / 2.0
    return l, dl


def _bisect(f, lo: float, hi: float) -> float:
    """Plain bisection; fallback when Newton stalls (needs a sign change)."""
    flo = f(lo)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0.0 or hi - lo < _NEWTON_TOL:
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _symmetrize(x: np.ndarray) -> np.ndarray:
    return 0.5 * (x - x[::-1])


def gauss_lobatto_nodes(p: int) -> np.ndarray:
    """The p+1 Gauss-Lobatto nodes: roots of (1 - x^2) L_p', ascending.

    Newton iteration from Chebyshev-Lobatto guesses; the ODE identity
    d/dx[(1-x^2)L_p'] = -p(p+1)L_p gives the Newton step in closed form.
    Bisection on Chebyshev-midpoint brackets backs up the rare stall.
    """
    if p < 1:
        raise InvalidOrderError(f"order must be >= 1, got {p}")
    if p == 1:
        return np.array([-1.0, 1.0])
    cheb = -np.cos(np.pi * np.arange(p + 1) / p)
    x = cheb[1:-1].copy()
    converged = False
    for _ in range(_NEWTON_MAXIT):
        lp, dlp = legendre(p, x)
        dx = (1.0 - x * x) * dlp / (p * (p + 1) * lp)
        x += dx
        if np.max(np.abs(dx)) < _NEWTON_TOL:
            converged = True
            break
    if not converged:
        f = lambda t: (1.0 - t * t) * legendre(p, t)[1]
        for i in range(p - 1):
            lo = 0.5 * (cheb[i] + cheb[i + 1])
            hi = 0.5 * (cheb[i + 1] + cheb[i + 2])
            x[i] = _bisect(f, lo, hi)
    nodes = np.empty(p + 1)
    nodes[0], nodes[-1] = -1.0, 1.0
    nodes[1:-1] = _symmetrize(x)
    return nodes


def gauss_nodes(p: int) -> np.ndarray:
    """The p Gauss nodes: roots of L_p, ascending and symmetric."""
    if p < 1:
        raise InvalidOrderError(f"order must be >= 1, got {p}")
    if p == 1:
        return np.zeros(1)
    i = np.arange(p)
    x = -np.cos(np.pi * (i + 0.75) / (p + 0.5))
    converged = False
    for _ in range(_NEWTON_MAXIT):
        lp, dlp = legendre(p, x)
        dx = -lp / dlp
        x += dx
        if np.max(np.abs(dx)) < _NEWTON_TOL:
            converged = True
            break
    if not converged:
        f = lambda t: legendre(p, t)[0]
        for k in range(p):
            lo = -np.cos(np.pi * (k + 0.25) / (p + 0.5))
            hi = -np.cos(np.pi * (k + 1.25) / (p + 0.5))
            x[k] = _bisect(f, max(lo, -1.0), min(hi, 1.0))
    return _symmetrize(x)


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and weights on [-1, 1] with the rule's polynomial exactness."""

    kind: str  # "gauss" | "gauss_lobatto"
    p: int
    nodes: np.ndarray
    weights: np.ndarray

    @property
    def exactness(self) -> int:
        return 2 * self.p - 1

    def integrate(self, values: np.ndarray) -> float:
        return float(np.dot(self.weights, values))


def gauss_rule(p: int) -> QuadratureRule:
    """Gauss rule with p nodes, exact for polynomials of degree 2p-1."""
    x = gauss_nodes(p)
    _, dl = legendre(p, x)
    w = 2.0 / ((1.0 - x * x) * dl * dl)
    return QuadratureRule("gauss", p, x, w)


def gauss_lobatto_rule(p: int) -> QuadratureRule:
    """Gauss-Lobatto rule with p+1 nodes, exact for degree 2p-1."""
    x = gauss_lobatto_nodes(p)
    lp, _ = legendre(p, x)
    w = 2.0 / (p * (p + 1) * lp * lp)
    return QuadratureRule("gauss_lobatto", p, x, w)


class Basis1D:
    """Lagrange basis on the p+1 Gauss-Lobatto nodes plus its edge companion.

    The nodal functions l_i satisfy l_i(xi_j) = delta_ij; the edge
    functions e_i = -(l_0' + ... + l_{i-1}') satisfy
    int_{xi_{j-1}}^{xi_j} e_i = delta_ij for i, j in 1..p.  Nodal
    evaluation uses the second barycentric form for stability at high
    order; by construction l_i' = e_i - e_{i+1} with e_0 = e_{p+1} = 0.
    """

    def __init__(self, p: int):
        if p < 1:
            raise InvalidOrderError(f"order must be >= 1, got {p}")
        self.p = p
        self.nodes = gauss_lobatto_nodes(p)
        diff = self.nodes[:, None] - self.nodes[None, :]
        np.fill_diagonal(diff, 1.0)
        self.bary = 1.0 / diff.prod(axis=1)

    # -- tabulation ----------------------------------------------------
    def lagrange_all(self, x) -> np.ndarray:
        """Values l_i(x): shape (p+1, len(x))."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        d = x[None, :] - self.nodes[:, None]
        exact = d == 0.0
        d_safe = np.where(exact, 1.0, d)
        terms = self.bary[:, None] / d_safe
        vals = terms / terms.sum(axis=0)
        hit = exact.any(axis=0)
        if np.any(hit):
            vals[:, hit] = exact[:, hit].astype(float)
        return vals

    def deriv_all(self, x) -> np.ndarray:
        """Derivatives l_i'(x): shape (p+1, len(x)).

        Product-rule expansion, O(p^2) per point; only used to build
        tables at quadrature/sample points, never in inner loops.
        """
        x = np.atleast_1d(np.asarray(x, dtype=float))
        n = self.p + 1
        out = np.zeros((n, x.size))
        for i in range(n):
            for m in range(n):
                if m == i:
                    continue
                term = np.full(x.size, 1.0 / (self.nodes[i] - self.nodes[m]))
                for j in range(n):
                    if j == i or j == m:
                        continue
                    term *= (x - self.nodes[j]) / (self.nodes[i] - self.nodes[j])
                out[i] += term
        return out

    def edge_all(self, x) -> np.ndarray:
        """Edge values e_i(x) for i = 1..p: shape (p, len(x))."""
        return -np.cumsum(self.deriv_all(x)[:-1], axis=0)

    # -- single-function access ------------------------------------------
    def lagrange_eval(self, i: int, x) -> float | np.ndarray:
        self._check_node_index(i)
        out = self.lagrange_all(x)[i]
        return out.item() if out.size == 1 else out

    def lagrange_deriv(self, i: int, x) -> float | np.ndarray:
        self._check_node_index(i)
        out = self.deriv_all(x)[i]
        return out.item() if out.size == 1 else out

    def edge_eval(self, i: int, x) -> float | np.ndarray:
        if not 1 <= i <= self.p:
            raise IndexError(f"edge index must be in 1..{self.p}, got {i}")
        out = self.edge_all(x)[i - 1]
        return out.item() if out.size == 1 else out

    def _check_node_index(self, i: int):
        if not 0 <= i <= self.p:
            raise IndexError(f"node index must be in 0..{self.p}, got {i}")
