"""Staggered Gauss-collocation time integration.

One slab of width dt carries the trajectory unknowns at Gauss-Lobatto
time levels and the derivative/flux unknowns at the interior Gauss
levels; requiring the degree-p_t interpolant to satisfy the ODE at the
Gauss levels yields an implicit, symmetric, symplectic scheme of order
2 p_t (p_t = 1 is the implicit midpoint rule).

Two equivalent linear-slab solvers are provided: a direct dense solve of
the coupled (p_t N) x (p_t N) system, and a factor-once path that
decouples the slab into p_t complex shifted systems via the eigenvalues
of the collocation matrix.  The second is used for repeated stepping.
"""
from __future__ import annotations

import numpy as np
import scipy.linalg as sla

from .polybasis import Basis1D, gauss_rule

__all__ = [
    "TimeBasis",
    "build_time_basis",
    "slab_solve_linear",
    "slab_solve_nonlinear",
    "GaussCollocationStepper",
    "advance",
]

_NEWTON_TOL = 1e-12
_NEWTON_MAXIT = 50


class _SafeFactor:
    """Dense factorization with a verified residual and QR fallback.

    Partial-pivoting LU can suffer catastrophic element growth on the
    banded-plus-wraparound matrices periodic advection produces; a probe
    solve detects that and switches to a growth-free QR factorization.
    """

    _PROBE_TOL = 1e-9

    def __init__(self, M: np.ndarray):
        self.n = M.shape[0]
        scale = np.linalg.norm(M, np.inf)
        rng = np.random.default_rng(12345)
        probe = rng.standard_normal(self.n)
        self._qr = None
        try:
            self._lu = sla.lu_factor(M)
            z = sla.lu_solve(self._lu, probe.astype(M.dtype))
            resid = np.linalg.norm(M @ z - probe)
            ok = resid <= self._PROBE_TOL * scale * max(1.0, np.linalg.norm(z))
        except np.linalg.LinAlgError:
            ok = False
        if not ok:
            self._lu = None
            self._qr = sla.qr(M)

    def solve(self, b: np.ndarray) -> np.ndarray:
        if self._lu is not None:
            return sla.lu_solve(self._lu, b)
        q, r = self._qr
        return sla.solve_triangular(r, q.conj().T @ b)


class TimeBasis:
    """Node locations and basis tables of one time slab [0, dt].

    lag[q, k] = l_k at Gauss level q; edge[q, k-1] = e_k there (already
    carrying the 2/dt chain-rule factor); deriv[q, k] = l_k' obtained by
    telescoping the edge table, so the difference form of the update and
    the derivative form are the same numbers by construction.
    """

    def __init__(self, p_t: int, dt: float):
        if p_t < 1:
            raise ValueError(f"time order must be >= 1, got {p_t}")
        if dt <= 0:
            raise ValueError(f"time step must be positive, got {dt}")
        self.p_t, self.dt = p_t, dt
        basis = Basis1D(p_t)
        ref_gauss = gauss_rule(p_t)
        self.gll_nodes = 0.5 * dt * (basis.nodes + 1.0)
        self.gauss_nodes = 0.5 * dt * (ref_gauss.nodes + 1.0)
        self.gauss_weights = ref_gauss.weights  # reference weights, sum 2
        self.lag = basis.lagrange_all(ref_gauss.nodes).T  # (p_t, p_t+1)
        self.edge = basis.edge_all(ref_gauss.nodes).T * (2.0 / dt)  # (p_t, p_t)
        deriv = np.zeros((p_t, p_t + 1))
        deriv[:, 0] = -self.edge[:, 0]
        deriv[:, 1:p_t] = self.edge[:, : p_t - 1] - self.edge[:, 1:]
        deriv[:, p_t] = self.edge[:, p_t - 1]
        self.deriv = deriv


def build_time_basis(p_t: int, dt: float) -> TimeBasis:
    return TimeBasis(p_t, dt)


def _as_matrix(A):
    A = np.asarray(A, dtype=float)
    if A.ndim == 0:
        return A.reshape(1, 1)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("A must be square")
    return A


def slab_solve_linear(A, y0, basis: TimeBasis) -> np.ndarray:
    """States y^1..y^{p_t} of one slab of y' = A y, by direct dense solve.

    Builds the coupled collocation system in the increments
    d^k = y^k - y^0, for which the right-hand side is simply A y0.
    Returns an array of shape (p_t, N).
    """
    A = _as_matrix(A)
    y0 = np.atleast_1d(np.asarray(y0, dtype=float))
    n, p_t = y0.size, basis.p_t
    T = basis.deriv[:, 1:]  # (p_t, p_t)
    L = basis.lag[:, 1:]
    S = np.kron(T, np.eye(n)) - np.kron(L, A)
    rhs = np.tile(A @ y0, p_t)
    delta = _SafeFactor(S).solve(rhs).reshape(p_t, n)
    return y0[None, :] + delta


def slab_solve_nonlinear(h, y0, basis: TimeBasis, jac=None) -> np.ndarray:
    """One slab of y' = h(y, t) by Newton iteration on the collocation system.

    Fallback for time-dependent or nonlinear right-hand sides; jac is an
    optional callable (y, t) -> dh/dy, replaced by finite differences
    when absent.  Tolerance 1e-12 on the residual, at most 50 iterations.
    """
    y0 = np.atleast_1d(np.asarray(y0, dtype=float))
    n, p_t = y0.size, basis.p_t
    T = basis.deriv[:, 1:]
    L = basis.lag[:, 1:]
    t_q = basis.gauss_nodes

    if jac is None:
        def jac(y, t, _h=h):
            eps = 1e-7
            base = np.atleast_1d(_h(y, t))
            J = np.empty((n, n))
            for i in range(n):
                yp = y.copy()
                yp[i] += eps
                J[:, i] = (np.atleast_1d(_h(yp, t)) - base) / eps
            return J

    delta = np.zeros((p_t, n))
    for _ in range(_NEWTON_MAXIT):
        vals = y0[None, :] + basis.lag[:, 1:] @ delta  # y at Gauss levels
        rhs = np.stack([np.atleast_1d(h(vals[q], t_q[q])) for q in range(p_t)])
        res = (T @ delta - rhs).ravel()
        if np.max(np.abs(res)) < _NEWTON_TOL:
            break
        S = np.kron(T, np.eye(n))
        for q in range(p_t):
            Jq = np.atleast_2d(jac(vals[q], t_q[q]))
            for k in range(p_t):
                S[q * n:(q + 1) * n, k * n:(k + 1) * n] -= L[q, k] * Jq
        delta -= np.linalg.solve(S, res).reshape(p_t, n)
    return y0[None, :] + delta


class GaussCollocationStepper:
    """Factor-once slab solver for steady linear systems y' = A y.

    The collocation system (T x I - L x A) d = 1 x (A y0) is decoupled
    through the eigenvalues of G = L^{-1} T into p_t complex shifted
    solves (gamma I - A) z = A y0; conjugate eigenvalues share one
    factorization.  Stepping cost after setup is one complex triangular
    solve per eigenvalue pair.
    """

    def __init__(self, A, basis: TimeBasis):
        self.A = _as_matrix(A)
        self.basis = basis
        self.n = self.A.shape[0]
        p_t = basis.p_t
        T = basis.deriv[:, 1:]
        L = basis.lag[:, 1:]
        G = np.linalg.solve(L, T)
        gamma, V = np.linalg.eig(G)
        self.gamma = gamma
        self.V = V
        self.c = np.linalg.solve(V, np.linalg.solve(L, np.ones(p_t)))
        # one LU per conjugate pair; the partner's solution is the
        # conjugate of the owner's because the right-hand sides are real
        self._lu = {}
        self._partner = np.empty(p_t, dtype=int)
        keys: dict[tuple, int] = {}
        for j, g in enumerate(gamma):
            key = (g.real, abs(g.imag))
            if key in keys:
                self._partner[j] = keys[key]
            else:
                keys[key] = j
                self._partner[j] = j
                M = g * np.eye(self.n, dtype=complex) - self.A
                self._lu[j] = _SafeFactor(M)

    def _shifted_solves(self, r: np.ndarray) -> np.ndarray:
        """Solve (gamma_j I - A) s_j = r for all j; r must be real."""
        p_t = self.basis.p_t
        s = np.empty((p_t,) + r.shape, dtype=complex)
        for j in range(p_t):
            owner = self._partner[j]
            if owner == j:
                s[j] = self._lu[j].solve(r.astype(complex))
            else:
                s[j] = np.conj(s[owner])
        return s

    def deltas(self, y0: np.ndarray) -> np.ndarray:
        """Increments d^k = y^k - y^0 of one slab: shape (p_t, N)."""
        r = self.A @ y0
        s = self._shifted_solves(r)
        z = self.c[:, None] * s
        return np.real(np.tensordot(self.V, z, axes=(1, 0)))

    def step_states(self, y0: np.ndarray) -> np.ndarray:
        """All Gauss-Lobatto level states y^1..y^{p_t} of one slab."""
        return y0[None, :] + self.deltas(y0)

    def collocation_values(self, y0: np.ndarray, deltas: np.ndarray) -> np.ndarray:
        """Trajectory values at the Gauss levels: shape (p_t, N)."""
        return y0[None, :] + self.basis.lag[:, 1:] @ deltas

    def delta_maps(self) -> list[np.ndarray]:
        """Dense matrices X^k with d^k = X^k y0 (for one-step flux maps)."""
        s = self._shifted_solves(self.A)
        z = self.c[:, None, None] * s
        X = np.real(np.tensordot(self.V, z, axes=(1, 0)))
        return [X[k] for k in range(self.basis.p_t)]


def advance(A, y0, dt: float, n_steps: int, p_t: int, callback=None):
    """Repeated slab solves of y' = A y with the factor-once stepper.

    callback(step, t, y) is invoked after every completed slab.  Returns
    the final state.
    """
    y = np.atleast_1d(np.asarray(y0, dtype=float)).copy()
    if n_steps == 0:
        return y
    basis = build_time_basis(p_t, dt)
    stepper = GaussCollocationStepper(A, basis)
    for step in range(1, n_steps + 1):
        y = y + stepper.deltas(y)[-1]
        if callback is not None:
            callback(step, step * dt, y)
    return y
