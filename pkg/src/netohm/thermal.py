"""
Thermal (Johnson-Nyquist) noise in resistor networks.

Each resistor carries an independent zero-mean Gaussian current with
variance ``(kappa/pi) * T(e) * sigma(e)``. With every boundary node grounded,
the noise drives boundary currents ``g = G J`` where
``G = (L)_BI (L)_II^-1 R_I grad^T``. Heating one resistor at a time by dT
and differencing the boundary covariances against the background run
recovers ``sigma * |grad R_I^T R_I u|^2`` for any boundary voltage f.

Random streams are counter-based (Philox): realization chunk ``c`` of
experiment ``k`` always draws from the stream keyed by
``(master_seed, k, c)``, so serial and threaded runs agree bit for bit.
Experiment 0 is the background run, experiment ``e + 1`` heats edge ``e``.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .network import Network, blocks, dirichlet_solve, gradient, laplacian, solve_interior

CHUNK = 4096


@dataclass(frozen=True)
class ThermalConfig:
    """Temperatures in kelvin; `kappa` defaults to pi so that kappa/pi = 1."""

    t0: float = 1.0
    dt: float = 100.0
    kappa: float = np.pi
    realizations: int = 10_000
    seed: int = 0
    distribution: str = "gaussian"

    def __post_init__(self):
        if not self.t0 > 0:
            raise ValueError("background temperature must be positive")
        if self.dt == 0:
            raise ValueError("heating increment must be non-zero")
        if self.realizations < 1:
            raise ValueError("need at least one realization")
        if self.distribution != "gaussian":
            raise ValueError("only gaussian noise is implemented")


@dataclass
class CovarianceSet:
    """Background covariance and one heated covariance per edge."""

    baseline: np.ndarray
    heated: np.ndarray
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        B = self.baseline.shape[0]
        if self.baseline.shape != (B, B) or self.heated.ndim != 3 or self.heated.shape[1:] != (B, B):
            raise ValueError("covariances have inconsistent shapes")


def response_matrix(net: Network, sigma) -> np.ndarray:
    """``G`` (|B| x |E|) mapping edge noise currents to boundary currents."""
    L = laplacian(net, np.asarray(sigma, dtype=float))
    _, L_bi, _, L_ii = blocks(net, L)
    DIt = net.grad_matrix[:, net.interior].T
    return L_bi @ solve_interior(L_ii, DIt, "[L_sigma]_II")


def sample_noise_currents(net: Network, sigma, T, rng, kappa: float = np.pi, size: int | None = None):
    """Draw noise currents; returns shape ``(n_edges,)`` or ``(size, n_edges)``.

    `rng` is a ``numpy.random.Generator`` or an integer seed.
    """
    sigma = np.asarray(sigma, dtype=float)
    T = np.broadcast_to(np.asarray(T, dtype=float), sigma.shape)
    if np.any(sigma <= 0) or np.any(T <= 0):
        raise ValueError("temperatures and conductivities must be positive")
    if not isinstance(rng, np.random.Generator):
        rng = np.random.Generator(np.random.Philox(rng))
    std = np.sqrt(kappa / np.pi * T * sigma)
    shape = (net.n_edges,) if size is None else (size, net.n_edges)
    return rng.standard_normal(shape) * std


def boundary_response(net: Network, sigma, J) -> np.ndarray:
    """Boundary currents of the grounded network driven by noise `J`.

    `J` may be a single edge field or a stack of them (rows).
    """
    return np.asarray(J) @ response_matrix(net, sigma).T


def covariance_analytic(net: Network, sigma, T, kappa: float = np.pi) -> np.ndarray:
    """Exact boundary-current covariance ``(kappa/pi) G diag(T sigma) G^T``.

    ``T = 0`` is accepted here and gives the zero matrix.
    """
    sigma = np.asarray(sigma, dtype=float)
    G = response_matrix(net, sigma)
    w = kappa / np.pi * np.broadcast_to(np.asarray(T, dtype=float), sigma.shape) * sigma
    C = (G * w) @ G.T
    return 0.5 * (C + C.T)


def _temperatures(net: Network, cfg: ThermalConfig, k: int) -> np.ndarray:
    T = np.full(net.n_edges, float(cfg.t0))
    if k > 0:
        T[k - 1] += cfg.dt
    return T


def stream(seed: int, experiment: int, chunk: int) -> np.random.Generator:
    ss = np.random.SeedSequence(seed, spawn_key=(experiment, chunk))
    return np.random.Generator(np.random.Philox(ss))


def _empirical_one(G, sigma, T, cfg: ThermalConfig, k: int) -> np.ndarray:
    """Sample covariance (known zero mean) of one experiment, fixed-order reduction."""
    std = np.sqrt(cfg.kappa / np.pi * T * sigma)
    Gs = G * std
    M = cfg.realizations
    acc = np.zeros((G.shape[0], G.shape[0]))
    for c, start in enumerate(range(0, M, CHUNK)):
        m = min(CHUNK, M - start)
        Z = stream(cfg.seed, k, c).standard_normal((m, G.shape[1]))
        g = Z @ Gs.T
        acc += g.T @ g
    C = acc / M
    return 0.5 * (C + C.T)


def _workers() -> int:
    n = int(os.environ.get("NETOHM_THREADS", "0") or 0)
    return n if n > 0 else (os.cpu_count() or 1)


def covariance_set(net: Network, sigma, cfg: ThermalConfig, mode: str = "analytic", threads: int | None = None):
    """Background plus per-edge heated covariances, exact or Monte Carlo."""
    sigma = np.asarray(sigma, dtype=float)
    n_exp = net.n_edges + 1
    if mode == "analytic":
        G = response_matrix(net, sigma)
        base = cfg.kappa / np.pi * cfg.t0 * (G * sigma) @ G.T
        base = 0.5 * (base + base.T)
        # heating edge e adds a rank-one term (kappa/pi) dT sigma_e G_e G_e^T
        rank1 = np.einsum("be,ce->ebc", G, G) * (cfg.kappa / np.pi * cfg.dt * sigma)[:, None, None]
        return CovarianceSet(base, base[None] + rank1, {"mode": "analytic"})
    if mode not in ("mc", "empirical"):
        raise ValueError("mode must be 'analytic' or 'mc'")
    if np.any(sigma <= 0):
        raise ValueError("conductivities must be positive")
    G = response_matrix(net, sigma)
    Ts = [_temperatures(net, cfg, k) for k in range(n_exp)]
    if np.any(np.asarray(Ts) <= 0):
        raise ValueError("temperatures must be positive")
    work = lambda k: _empirical_one(G, sigma, Ts[k], cfg, k)
    threads = _workers() if threads is None else threads
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            covs = list(pool.map(work, range(n_exp)))
    else:
        covs = [work(k) for k in range(n_exp)]
    prov = {"mode": "empirical", "realizations": cfg.realizations, "seed": cfg.seed,
            "distribution": cfg.distribution, "stream": "philox/seedsequence(seed, experiment, chunk)",
            "chunk": CHUNK}
    return CovarianceSet(covs[0], np.stack(covs[1:]), prov)


def power_from_thermal(covs: CovarianceSet, f, dt: float, kappa: float = np.pi) -> np.ndarray:
    """Per-edge ``f^T (C_e - C_0) f / ((kappa/pi) dT)``.

    This estimates ``sigma * |grad R_I^T R_I u|^2``. It equals the dissipated
    power only on edges joining two interior nodes; edges joining two
    boundary nodes give zero.
    """
    if dt == 0:
        raise ValueError("heating increment must be non-zero")
    if covs.heated is None or covs.baseline is None or not np.all(np.isfinite(covs.heated)):
        raise ValueError("incomplete covariance set")
    f = np.asarray(f, dtype=float)
    diff = covs.heated - covs.baseline[None]
    return np.einsum("b,ebc,c->e", f, diff, f) / (kappa / np.pi * dt)


def interior_restricted_power(net: Network, sigma, u) -> np.ndarray:
    """``sigma * |grad R_I^T R_I u|^2``: u with its boundary values zeroed."""
    v = np.array(u, dtype=float)
    v[net.boundary] = 0.0
    return np.asarray(sigma) * gradient(net, v) ** 2


@dataclass
class ThermalReport:
    covariances: CovarianceSet
    estimate: np.ndarray
    true_power: np.ndarray
    restricted_power: np.ndarray
    interior_edges: np.ndarray
    errors: dict

    def to_dict(self, net: Network) -> dict:
        return {
            "mode": self.covariances.provenance.get("mode"),
            "provenance": self.covariances.provenance,
            "edges": [
                {
                    "id": int(net.edge_ids[k]),
                    "tail": int(net.ids[net.edges[k, 0]]),
                    "head": int(net.ids[net.edges[k, 1]]),
                    "interior": bool(self.interior_edges[k]),
                    "estimate": float(self.estimate[k]),
                    "true_power": float(self.true_power[k]),
                    "restricted_power": float(self.restricted_power[k]),
                }
                for k in range(net.n_edges)
            ],
            "relative_error": self.errors,
        }


def _rel(a, b):
    nb = np.linalg.norm(b)
    return float(np.linalg.norm(a - b) / nb) if nb > 0 else float(np.linalg.norm(a - b))


def run_thermal_experiment(net: Network, sigma, f, cfg: ThermalConfig, mode: str = "analytic",
                           threads: int | None = None) -> ThermalReport:
    """Background + |E| heated runs, then the power estimate and its errors.

    Two error conventions are reported: ``interior_edges`` compares against
    the true dissipated power on interior-interior edges only, and
    ``all_edges`` compares against ``sigma |grad R_I^T R_I u|^2`` on every edge.
    """
    sigma = np.asarray(sigma, dtype=float)
    covs = covariance_set(net, sigma, cfg, mode, threads)
    est = power_from_thermal(covs, f, cfg.dt, cfg.kappa)
    u = dirichlet_solve(net, sigma, np.asarray(f, dtype=float))
    true = sigma * gradient(net, u) ** 2
    restricted = interior_restricted_power(net, sigma, u)
    inner = net.interior_edge_mask()
    errors = {
        "interior_edges": _rel(est[inner], true[inner]),
        "all_edges": _rel(est, restricted),
    }
    return ThermalReport(covs, est, true, restricted, inner, errors)
