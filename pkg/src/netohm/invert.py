"""
Regularized Gauss-Newton reconstruction.

Solves ``R(x) = 0`` for the stacked system of :mod:`netohm.linearize` with

    x_{k+1} = x_k + t_k p_k,   (DR^T DR + alpha^2 I) p_k = -DR^T R,

where the step length ``t_k`` comes from Armijo backtracking on the merit
``0.5 * ||R||^2``. Iteration stops when the merit gradient ``DR^T R`` is small.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import LineSearchError, SingularOperatorError
from .forward import PowerData, ProblemSpec, Variant, solve_states
from .linearize import jacobian_matrix, n_params, pack, residual, unpack


@dataclass
class GNConfig:
    """Solver settings.

    alpha=None picks ``1e-8`` for noiseless data and ``1e-2 * s_max(DR_0)``
    otherwise (see :func:`gauss_newton`'s `noisy` flag). gtol=None means
    ``1e-9 * (1 + ||R_0||)``.
    """

    alpha: float | None = None
    max_iter: int = 100
    gtol: float | None = None
    c: float = 1e-4
    rho: float = 0.5
    max_backtracks: int = 30
    initial_gamma: np.ndarray | None = None
    q_range: tuple = (0.0, 2.0)
    log_param: bool = False

    def __post_init__(self):
        if self.alpha is not None and self.alpha < 0:
            raise ValueError("alpha must be >= 0")
        if not 0 < self.rho < 1:
            raise ValueError("rho must be in (0, 1)")
        if not 0 < self.c < 1:
            raise ValueError("c must be in (0, 1)")


@dataclass
class GNResult:
    gamma: np.ndarray
    states: object
    merit: list
    grad_norm: list
    reason: str
    iterations: int
    alpha: float
    relative_error: float | None = None
    step_lengths: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "gamma": [float(g) for g in self.gamma],
            "termination": self.reason,
            "iterations": self.iterations,
            "alpha": self.alpha,
            "relative_error": self.relative_error,
            "history": [
                {"iteration": k, "merit": float(m), "grad_norm": float(g)}
                for k, (m, g) in enumerate(zip(self.merit, self.grad_norm))
            ],
        }


@dataclass
class ArmijoResult:
    x: np.ndarray
    t: float
    merit: float
    accepted: bool
    backtracks: int


def armijo_search(x, step, merit: Callable, merit0: float | None = None, grad=None,
                  c: float = 1e-4, rho: float = 0.5, max_backtracks: int = 30) -> ArmijoResult:
    """Backtracking on ``t in {1, rho, rho^2, ...}``.

    Accepts the first t with ``merit(x + t step) <= merit(x) - c t |<grad, step>|``.
    `grad` is the merit gradient at x; when omitted only simple decrease
    is required.
    """
    x = np.asarray(x, dtype=float)
    step = np.asarray(step, dtype=float)
    m0 = merit(x) if merit0 is None else merit0
    if not np.isfinite(m0):
        raise LineSearchError("non-finite merit at the current point")
    slope = 0.0 if grad is None else abs(float(np.dot(grad, step)))
    t = 1.0
    for k in range(max_backtracks + 1):
        xt = x + t * step
        mt = merit(xt)
        if np.isfinite(mt) and mt <= m0 - c * t * slope:
            return ArmijoResult(xt, t, float(mt), True, k)
        t *= rho
    return ArmijoResult(x, 0.0, float(m0), False, max_backtracks)


def add_noise(data: PowerData, level: float, seed) -> PowerData:
    """``H + level * max(H) * Z`` per experiment block, Z standard normal.

    The maximum is taken over each experiment's block separately.
    """
    if level < 0:
        raise ValueError("noise level must be >= 0")
    if level == 0:
        return data
    rng = np.random.default_rng(seed)

    def noisy(blocks):
        return tuple(h + level * np.max(np.abs(h)) * rng.standard_normal(h.shape) for h in blocks)

    H = noisy(data.H)
    H1 = noisy(data.H1) if data.H1 is not None else None
    return PowerData(data.variant, H, H1, data.omega1)


def initial_gamma(spec: ProblemSpec, config: GNConfig) -> np.ndarray:
    if config.initial_gamma is not None:
        return np.asarray(config.initial_gamma, dtype=float).copy()
    p = n_params(spec)
    if spec.variant.conductivity:
        return np.ones(p)
    lo, hi = config.q_range
    return np.full(p, 0.5 * (lo + hi))


def relative_error(estimate, truth) -> float:
    truth = np.asarray(truth, dtype=float)
    return float(np.linalg.norm(np.asarray(estimate) - truth) / np.linalg.norm(truth))


def gauss_newton(spec: ProblemSpec, data: PowerData, config: GNConfig | None = None,
                 truth=None, noisy: bool = False) -> GNResult:
    """Recover the parameter of `spec` from `data`.

    Only the known parts of `spec` are read (network, boundary data,
    frequency, known sigma for Schrodinger variants). States start from
    forward solves at the initial parameter.

    With ``config.log_param`` the conductivity is iterated as log(sigma)
    (conductivity variants only; not part of the plain method).
    """
    config = config or GNConfig()
    gamma0 = initial_gamma(spec, config)
    states0 = solve_states(spec.with_gamma(gamma0))
    x = pack(spec, states0, gamma=gamma0)
    p = n_params(spec)

    log = config.log_param and spec.variant.conductivity
    if log:
        if np.any(gamma0 <= 0):
            raise ValueError("log parameterization needs a positive initial guess")
        F = spec.net.n_edges
        pos = slice(0, F)
        x[pos] = np.log(x[pos])

    def to_phys(z):
        if not log:
            return z
        z = z.copy()
        z[pos] = np.exp(z[pos])
        return z

    def R(z):
        return residual(spec, to_phys(z), data)

    def DR(z):
        y = to_phys(z)
        g, st = unpack(spec, y)
        J = jacobian_matrix(spec.with_gamma(g), st, "real")
        if log:
            J = J.copy()
            J[:, pos] *= y[pos]
        return J

    def merit(z):
        r = R(z)
        return 0.5 * float(r @ r)

    r = R(x)
    J = DR(x)
    if config.alpha is not None:
        alpha = float(config.alpha)
    elif noisy:
        alpha = 1e-2 * float(np.linalg.norm(J, 2))
    else:
        alpha = 1e-8
    gtol = config.gtol if config.gtol is not None else 1e-9 * (1.0 + float(np.linalg.norm(r)))

    merits, gnorms, steps = [], [], []
    reason = "max-iter"
    k = 0
    n = len(x)
    while True:
        m = 0.5 * float(r @ r)
        g = J.T @ r
        merits.append(m)
        gnorms.append(float(np.linalg.norm(g)))
        if gnorms[-1] <= gtol:
            reason = "gradient-tol"
            break
        if k >= config.max_iter:
            break
        H = J.T @ J
        H[np.diag_indices(n)] += alpha**2
        try:
            step = np.linalg.solve(H, -g)
        except np.linalg.LinAlgError as exc:
            s = np.linalg.svd(J, compute_uv=False)
            raise SingularOperatorError(
                "damped normal matrix is singular", float(s[-1]) ** 2 + alpha**2, float(s[0]) ** 2 + alpha**2
            ) from exc
        ls = armijo_search(x, step, merit, m, g, config.c, config.rho, config.max_backtracks)
        if not ls.accepted:
            reason = "line-search-failure"
            break
        x = ls.x
        steps.append(ls.t)
        r = R(x)
        J = DR(x)
        k += 1

    gamma, states = unpack(spec, to_phys(x))
    err = None if truth is None else relative_error(gamma, truth)
    return GNResult(gamma.copy(), states, merits, gnorms, reason, k, alpha, err, steps)
