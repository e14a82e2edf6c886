"""
Dissipated-power forward maps.

Four problem variants are supported:

* ``real_conductivity``: unknown sigma on edges, data ``sigma * |grad u|^2``.
* ``two_freq_conductivity``: unknown ``(sigma', sigma'')``, admittance
  ``sigma' + j*omega*sigma''``; data ``sigma' * |grad u|^2`` at omega_0 = 0 and omega_1.
* ``real_schrodinger``: known sigma, unknown potential q on interior nodes,
  data ``q * |u_I|^2``.
* ``two_freq_schrodinger``: known sigma, unknown ``(q', q'')``, data
  ``q' * |u_I|^2`` at omega_0 = 0 and omega_1.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import SingularOperatorError
from .network import Network, dirichlet_solve, gradient, schrodinger_solve


class Variant(str, enum.Enum):
    REAL_CONDUCTIVITY = "real_conductivity"
    TWO_FREQ_CONDUCTIVITY = "two_freq_conductivity"
    REAL_SCHRODINGER = "real_schrodinger"
    TWO_FREQ_SCHRODINGER = "two_freq_schrodinger"

    @property
    def two_frequency(self) -> bool:
        return self in (Variant.TWO_FREQ_CONDUCTIVITY, Variant.TWO_FREQ_SCHRODINGER)

    @property
    def conductivity(self) -> bool:
        return self in (Variant.REAL_CONDUCTIVITY, Variant.TWO_FREQ_CONDUCTIVITY)


def _tuple_of(arrs, dtype):
    return tuple(np.asarray(a, dtype=dtype) for a in arrs)


@dataclass(frozen=True, eq=False)
class ProblemSpec:
    """One inverse problem instance: network, parameter, boundary conditions.

    For conductivity variants `sigma` is the unknown (its real part sigma' in
    the two-frequency case, with `sigma_imag` = sigma''). For Schrodinger
    variants `sigma` is the known conductivity and `q` (plus `q_imag`) the
    unknown potential. `f` holds the real boundary data (f_0 in two-frequency
    variants) and `f1` the complex omega_1 data.
    """

    variant: Variant
    net: Network
    sigma: np.ndarray
    f: tuple
    sigma_imag: np.ndarray | None = None
    q: np.ndarray | None = None
    q_imag: np.ndarray | None = None
    omega1: float | None = None
    f1: tuple | None = None

    def __post_init__(self):
        v = Variant(self.variant)
        object.__setattr__(self, "variant", v)
        net = self.net
        object.__setattr__(self, "sigma", np.asarray(self.sigma, dtype=float))
        if self.sigma.shape != (net.n_edges,):
            raise ValueError("sigma must be an edge field")
        if not np.all(self.sigma > 0):
            raise ValueError("conductivity (real part) must be positive")
        f = _tuple_of(self.f, float)
        if len(f) < 1:
            raise ValueError("need at least one experiment")
        if any(x.shape != (net.n_boundary,) for x in f):
            raise ValueError("boundary data must have one value per boundary node")
        object.__setattr__(self, "f", f)

        if v.two_frequency:
            if self.omega1 is None:
                raise ValueError("two-frequency variants need omega1")
            f1 = f if self.f1 is None else self.f1
            f1 = _tuple_of(f1, complex)
            if len(f1) != len(f) or any(x.shape != (net.n_boundary,) for x in f1):
                raise ValueError("f1 must match f experiment-for-experiment")
            object.__setattr__(self, "f1", f1)
        if v is Variant.TWO_FREQ_CONDUCTIVITY:
            if self.sigma_imag is None:
                raise ValueError("two_freq_conductivity needs sigma_imag")
            object.__setattr__(self, "sigma_imag", np.asarray(self.sigma_imag, dtype=float))
            if self.sigma_imag.shape != (net.n_edges,):
                raise ValueError("sigma_imag must be an edge field")
        if not v.conductivity:
            if self.q is None:
                raise ValueError("Schrodinger variants need q")
            object.__setattr__(self, "q", np.asarray(self.q, dtype=float))
            if self.q.shape != (net.n_interior,):
                raise ValueError("q must be an interior field")
        if v is Variant.TWO_FREQ_SCHRODINGER:
            if self.q_imag is None:
                raise ValueError("two_freq_schrodinger needs q_imag")
            object.__setattr__(self, "q_imag", np.asarray(self.q_imag, dtype=float))
            if self.q_imag.shape != (net.n_interior,):
                raise ValueError("q_imag must be an interior field")

    @property
    def n_experiments(self) -> int:
        return len(self.f)

    @property
    def gamma(self) -> np.ndarray:
        """The unknown parameter, real-stacked."""
        v = self.variant
        if v is Variant.REAL_CONDUCTIVITY:
            return self.sigma.copy()
        if v is Variant.TWO_FREQ_CONDUCTIVITY:
            return np.concatenate([self.sigma, self.sigma_imag])
        if v is Variant.REAL_SCHRODINGER:
            return self.q.copy()
        return np.concatenate([self.q, self.q_imag])

    def with_gamma(self, gamma) -> "ProblemSpec":
        """Same experiment set-up with a different unknown parameter.

        Conductivity positivity is not enforced here, since iterates of a
        reconstruction may leave the physical range.
        """
        gamma = np.asarray(gamma, dtype=float)
        v = self.variant
        kw = dict(self.__dict__)
        if v is Variant.REAL_CONDUCTIVITY:
            kw["sigma"] = gamma
        elif v is Variant.TWO_FREQ_CONDUCTIVITY:
            m = self.net.n_edges
            kw["sigma"], kw["sigma_imag"] = gamma[:m], gamma[m:]
        elif v is Variant.REAL_SCHRODINGER:
            kw["q"] = gamma
        else:
            k = self.net.n_interior
            kw["q"], kw["q_imag"] = gamma[:k], gamma[k:]
        new = object.__new__(ProblemSpec)
        for key, val in kw.items():
            object.__setattr__(new, key, val)
        return new

    @property
    def admittance1(self) -> np.ndarray:
        """``sigma' + j omega_1 sigma''`` (two-frequency conductivity only)."""
        return self.sigma + 1j * self.omega1 * self.sigma_imag

    @property
    def potential1(self) -> np.ndarray:
        """``q' + j omega_1 q''`` (two-frequency Schrodinger only)."""
        return self.q + 1j * self.omega1 * self.q_imag


@dataclass(frozen=True, eq=False)
class PowerData:
    """Internal functionals, one array per experiment.

    `H` is the only block for real variants and the omega_0 block for
    two-frequency variants; `H1` is the omega_1 block.
    """

    variant: Variant
    H: tuple
    H1: tuple | None = None
    omega1: float | None = None

    @property
    def n_experiments(self) -> int:
        return len(self.H)

    def blocks(self):
        """Experiments in serialization order (omega_0 block, then omega_1)."""
        return list(self.H) + (list(self.H1) if self.H1 is not None else [])

    def flat(self) -> np.ndarray:
        return np.concatenate(self.blocks())


@dataclass(frozen=True, eq=False)
class States:
    """Solved voltages: `u` (real, or omega_0) and `u1` (complex omega_1)."""

    u: tuple
    u1: tuple | None = None


def power_conductivity(sigma, net: Network, u) -> np.ndarray:
    """``sigma * |grad u|^2`` per edge; `u` may be complex."""
    sigma = np.asarray(sigma, dtype=float)
    g = gradient(net, u)
    if sigma.shape != g.shape:
        raise ValueError("sigma must be an edge field")
    return sigma * np.abs(g) ** 2


def power_schrodinger(q, net: Network, u) -> np.ndarray:
    """``q * |u_I|^2`` per interior node. Negative q gives negative entries."""
    q = np.asarray(q, dtype=float)
    u = np.asarray(u)
    if u.shape != (net.n_nodes,):
        raise ValueError("u must be a full vertex field")
    if q.shape != (net.n_interior,):
        raise ValueError("q must be an interior field")
    return q * np.abs(u[net.interior]) ** 2


def solve_states(spec: ProblemSpec) -> States:
    """Solve every experiment's state equation(s) for the spec's parameter."""
    v, net = spec.variant, spec.net
    us, u1s = [], []
    for j in range(spec.n_experiments):
        try:
            if v.conductivity:
                us.append(dirichlet_solve(net, spec.sigma, spec.f[j]))
            else:
                us.append(schrodinger_solve(net, spec.sigma, spec.q, spec.f[j]))
        except SingularOperatorError as exc:
            raise exc.tagged(experiment=j, frequency="omega0" if v.two_frequency else None) from exc
        if not v.two_frequency:
            continue
        try:
            if v is Variant.TWO_FREQ_CONDUCTIVITY:
                u1s.append(dirichlet_solve(net, spec.admittance1, spec.f1[j]))
            else:
                u1s.append(schrodinger_solve(net, spec.sigma, spec.potential1, spec.f1[j]))
        except SingularOperatorError as exc:
            raise exc.tagged(experiment=j, frequency="omega1") from exc
    return States(tuple(us), tuple(u1s) if v.two_frequency else None)


def evaluate_functional(spec: ProblemSpec, states: States) -> PowerData:
    v, net = spec.variant, spec.net
    if v.conductivity:
        H = tuple(power_conductivity(spec.sigma, net, u) for u in states.u)
        H1 = None
        if v.two_frequency:
            H1 = tuple(power_conductivity(spec.sigma, net, u) for u in states.u1)
    else:
        H = tuple(power_schrodinger(spec.q, net, u) for u in states.u)
        H1 = None
        if v.two_frequency:
            H1 = tuple(power_schrodinger(spec.q, net, u) for u in states.u1)
    return PowerData(v, H, H1, spec.omega1 if v.two_frequency else None)


def forward_dataset(spec: ProblemSpec) -> tuple[PowerData, States]:
    """Solve all experiments and evaluate the variant's internal functional.

    The returned states are the reference states used by every downstream
    linearization.
    """
    states = solve_states(spec)
    return evaluate_functional(spec, states), states


def data_labels(spec: ProblemSpec) -> list[int]:
    """Row labels for CSV export: edge ids or interior node ids."""
    net = spec.net
    if spec.variant.conductivity:
        return [int(e) for e in net.edge_ids]
    return [int(net.ids[k]) for k in net.interior]
