"""
Linearized systems and local-uniqueness certificates.

The unknowns are the parameter gamma and every experiment's state, stacked
as ``x = (gamma, state_1, ..., state_N)``. Each experiment contributes rows
in the order (functional rows, boundary rows, interior-balance rows); in
two-frequency variants each group holds an omega_0 block followed by the
omega_1 block(s). Residual rows are written as (model - data).

Two-frequency problems have two parameterizations of the omega_1 state:

``"real"``
    state ``(u0, Re u1, Im u1)``, interior rows ``(L0, Re L1, Im L1)``.
    This is what :func:`residual` and the Gauss-Newton solver use.
``"complex"``
    state ``(u0, u1, conj u1)`` with ``conj u1`` treated as an independent
    complex unknown, interior rows ``(L0, L1, conj L1)``. Ranks are then
    computed over the complex field.

Both forms have the same rank; they differ by invertible row/column maps.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .forward import PowerData, ProblemSpec, States, Variant, solve_states, evaluate_functional
from .network import (
    SUPPORT_RTOL,
    Network,
    blocks,
    gradient,
    is_numerically_singular,
    laplacian,
    smallest_singular_value,
    solve_interior,
    support,
)

FORMS = ("real", "complex")


# -- layout -----------------------------------------------------------------


def n_functional(spec: ProblemSpec) -> int:
    return spec.net.n_edges if spec.variant.conductivity else spec.net.n_interior


def n_params(spec: ProblemSpec) -> int:
    k = n_functional(spec)
    return 2 * k if spec.variant.two_frequency else k


def state_size(spec: ProblemSpec) -> int:
    n = spec.net.n_nodes
    return 3 * n if spec.variant.two_frequency else n


def rows_per_experiment(spec: ProblemSpec) -> int:
    F, n = n_functional(spec), spec.net.n_nodes
    return 2 * F + 3 * n if spec.variant.two_frequency else F + n


def layout(spec: ProblemSpec, form: str = "real") -> dict:
    """Offsets of every column and row block, as plain data."""
    v, net = spec.variant, spec.net
    F, nb, ni, n = n_functional(spec), net.n_boundary, net.n_interior, net.n_nodes
    p = n_params(spec)
    if v.conductivity:
        pnames = ["sigma"] if not v.two_frequency else ["sigma_real", "sigma_imag"]
    else:
        pnames = ["q"] if not v.two_frequency else ["q_real", "q_imag"]
    pblocks = {name: [k * F, (k + 1) * F] for k, name in enumerate(pnames)}
    if v.two_frequency:
        snames = ["u0", "re_u1", "im_u1"] if form == "real" else ["u0", "u1", "conj_u1"]
        rnames = [("H0", F), ("H1", F)]
        rnames += [(f"boundary_{s}", nb) for s in snames]
        rnames += [(r, ni) for r in (["L0", "re_L1", "im_L1"] if form == "real" else ["L0", "L1", "conj_L1"])]
    else:
        snames = ["u"]
        rnames = [("H", F), ("boundary_u", nb), ("interior", ni)]
    rows, off = {}, 0
    for name, size in rnames:
        rows[name] = [off, off + size]
        off += size
    return {
        "variant": v.value,
        "form": form if v.two_frequency else "real",
        "n_experiments": spec.n_experiments,
        "param_blocks": pblocks,
        "state_blocks": {s: [k * n, (k + 1) * n] for k, s in enumerate(snames)},
        "state_offsets": [p + j * state_size(spec) for j in range(spec.n_experiments)],
        "rows_per_experiment": rows_per_experiment(spec),
        "row_blocks": rows,
        "residual_sign": "model - data",
    }


def pack(spec: ProblemSpec, states: States, gamma=None, form: str = "real") -> np.ndarray:
    """Stack ``(gamma, states)`` into one unknown vector."""
    gamma = spec.gamma if gamma is None else np.asarray(gamma, dtype=float)
    _check_states(spec, states)
    parts = [gamma.astype(complex) if form == "complex" else gamma]
    for j in range(spec.n_experiments):
        if not spec.variant.two_frequency:
            parts.append(np.real(states.u[j]))
            continue
        u0, u1 = np.real(states.u[j]), states.u1[j]
        if form == "complex":
            parts += [u0.astype(complex), u1, np.conj(u1)]
        else:
            parts += [u0, u1.real, u1.imag]
    return np.concatenate(parts)


def unpack(spec: ProblemSpec, x) -> tuple[np.ndarray, States]:
    """Inverse of :func:`pack` for the real form."""
    x = np.asarray(x)
    p, s, n = n_params(spec), state_size(spec), spec.net.n_nodes
    if x.shape != (p + spec.n_experiments * s,):
        raise ValueError("unknown vector does not match the layout")
    gamma = x[:p]
    us, u1s = [], []
    for j in range(spec.n_experiments):
        blk = x[p + j * s: p + (j + 1) * s]
        if spec.variant.two_frequency:
            us.append(blk[:n])
            u1s.append(blk[n:2 * n] + 1j * blk[2 * n:])
        else:
            us.append(blk)
    return gamma, States(tuple(us), tuple(u1s) if spec.variant.two_frequency else None)


def _check_states(spec: ProblemSpec, states: States):
    n = spec.net.n_nodes
    if len(states.u) != spec.n_experiments or any(np.shape(u) != (n,) for u in states.u):
        raise ValueError("states do not match the spec's experiments")
    if spec.variant.two_frequency:
        if states.u1 is None or len(states.u1) != spec.n_experiments:
            raise ValueError("two-frequency spec needs omega_1 states")
        if any(np.shape(u) != (n,) for u in states.u1):
            raise ValueError("states do not match the spec's experiments")


def _split_params(spec: ProblemSpec, gamma):
    F = n_functional(spec)
    if spec.variant.two_frequency:
        return gamma[:F], gamma[F:]
    return gamma, None


# -- residual ---------------------------------------------------------------


def residual(spec: ProblemSpec, x, data: PowerData) -> np.ndarray:
    """Stacked ``(model - data)`` residual in the real parameterization.

    Only the known parts of `spec` are used (network, boundary data,
    frequency, and sigma for Schrodinger variants); the parameter comes
    from `x`.
    """
    if data.variant is not spec.variant or data.n_experiments != spec.n_experiments:
        raise ValueError("data do not match the spec's variant / experiments")
    gamma, st = unpack(spec, x)
    net, v = spec.net, spec.variant
    D = net.grad_matrix
    b, i = net.boundary, net.interior
    DI = D[:, i]
    g1, g2 = _split_params(spec, gamma)
    out = []
    for j in range(spec.n_experiments):
        u0 = np.real(st.u[j])
        if v is Variant.REAL_CONDUCTIVITY:
            g = D @ u0
            out += [g1 * g**2 - data.H[j], u0[b] - spec.f[j], DI.T @ (g1 * g)]
        elif v is Variant.REAL_SCHRODINGER:
            L = laplacian(net, spec.sigma)
            ui = u0[i]
            out += [g1 * ui**2 - data.H[j], u0[b] - spec.f[j], (L @ u0)[i] + g1 * ui]
        else:
            a, c = st.u1[j].real, st.u1[j].imag
            w = spec.omega1
            f1 = spec.f1[j]
            if v is Variant.TWO_FREQ_CONDUCTIVITY:
                g0, ga, gc = D @ u0, D @ a, D @ c
                out += [
                    g1 * g0**2 - data.H[j],
                    g1 * (ga**2 + gc**2) - data.H1[j],
                    u0[b] - spec.f[j], a[b] - f1.real, c[b] - f1.imag,
                    DI.T @ (g1 * g0),
                    DI.T @ (g1 * ga - w * g2 * gc),
                    DI.T @ (g1 * gc + w * g2 * ga),
                ]
            else:
                L = laplacian(net, spec.sigma)
                u0i, ai, ci = u0[i], a[i], c[i]
                out += [
                    g1 * u0i**2 - data.H[j],
                    g1 * (ai**2 + ci**2) - data.H1[j],
                    u0[b] - spec.f[j], a[b] - f1.real, c[b] - f1.imag,
                    (L @ u0)[i] + g1 * u0i,
                    (L @ a)[i] + g1 * ai - w * g2 * ci,
                    (L @ c)[i] + g1 * ci + w * g2 * ai,
                ]
    return np.concatenate(out)


def residual_complex_pair(spec: ProblemSpec, x, data: PowerData) -> np.ndarray:
    """Residual with ``conj u1`` as an independent unknown (complex form).

    The map is polynomial in every unknown, so it is holomorphic and can be
    differentiated by ordinary finite differences along real directions.
    """
    if not spec.variant.two_frequency:
        return residual(spec, np.real(x), data)
    x = np.asarray(x, dtype=complex)
    net, v, w = spec.net, spec.variant, spec.omega1
    D = net.grad_matrix
    b, i = net.boundary, net.interior
    DI = D[:, i]
    p, s, n = n_params(spec), state_size(spec), net.n_nodes
    g1, g2 = _split_params(spec, x[:p])
    out = []
    for j in range(spec.n_experiments):
        blk = x[p + j * s: p + (j + 1) * s]
        u0, u1, uc = blk[:n], blk[n:2 * n], blk[2 * n:]
        f1 = spec.f1[j]
        if v is Variant.TWO_FREQ_CONDUCTIVITY:
            d0, d1, dc = D @ u0, D @ u1, D @ uc
            out += [
                g1 * d0**2 - data.H[j],
                g1 * d1 * dc - data.H1[j],
                u0[b] - spec.f[j], u1[b] - f1, uc[b] - np.conj(f1),
                DI.T @ (g1 * d0),
                DI.T @ ((g1 + 1j * w * g2) * d1),
                DI.T @ ((g1 - 1j * w * g2) * dc),
            ]
        else:
            L = laplacian(net, spec.sigma)
            out += [
                g1 * u0[i]**2 - data.H[j],
                g1 * u1[i] * uc[i] - data.H1[j],
                u0[b] - spec.f[j], u1[b] - f1, uc[b] - np.conj(f1),
                (L @ u0)[i] + g1 * u0[i],
                (L @ u1)[i] + (g1 + 1j * w * g2) * u1[i],
                (L @ uc)[i] + (g1 - 1j * w * g2) * uc[i],
            ]
    return np.concatenate(out)


# -- Jacobian ---------------------------------------------------------------


@dataclass
class JacobianReport:
    variant: Variant
    shape: tuple
    form: str
    singular_values: np.ndarray
    rank: int
    cond: float
    layout: dict = field(repr=False)

    @property
    def full_column_rank(self) -> bool:
        return self.rank == self.shape[1]

    def to_dict(self) -> dict:
        return {
            "variant": self.variant.value,
            "rows": self.shape[0],
            "cols": self.shape[1],
            "form": self.form,
            "rank": self.rank,
            "cond": _json_float(self.cond),
            "full_column_rank": self.full_column_rank,
            "singular_values": [float(s) for s in self.singular_values],
            "layout": self.layout,
        }


def _json_float(x):
    return float(x) if np.isfinite(x) else "inf"


def _experiment_blocks(spec, u0, u1, form):
    """(parameter columns, state columns) of one experiment's rows."""
    net, v = spec.net, spec.variant
    D = net.grad_matrix
    n, b, i = net.n_nodes, net.boundary, net.interior
    I_n = np.eye(n)
    PB, PI = I_n[b], I_n[i]
    DI = D[:, i]
    nb, ni = len(b), len(i)
    gam, _ = _split_params(spec, spec.gamma)

    if v is Variant.REAL_CONDUCTIVITY:
        g = D @ u0
        E = net.n_edges
        G = np.vstack([np.diag(g**2), np.zeros((nb, E)), DI.T * g])
        S = np.vstack([(2 * gam * g)[:, None] * D, PB, laplacian(net, gam)[i]])
        return G, S

    if v is Variant.REAL_SCHRODINGER:
        ui = u0[i]
        L = laplacian(net, spec.sigma)
        G = np.vstack([np.diag(ui**2), np.zeros((nb, ni)), np.diag(ui)])
        S = np.vstack([(2 * gam * ui)[:, None] * PI, PB, L[i] + gam[:, None] * PI])
        return G, S

    w = spec.omega1
    cplx = form == "complex"
    dt = complex if cplx else float
    F = n_functional(spec)
    Z = lambda r, c: np.zeros((r, c), dtype=dt)
    G = Z(rows_per_experiment(spec), 2 * F)
    S = Z(rows_per_experiment(spec), 3 * n)
    r_h0, r_h1 = slice(0, F), slice(F, 2 * F)
    r_b = [slice(2 * F + k * nb, 2 * F + (k + 1) * nb) for k in range(3)]
    o = 2 * F + 3 * nb
    r_i = [slice(o + k * ni, o + (k + 1) * ni) for k in range(3)]
    c_p1, c_p2 = slice(0, F), slice(F, 2 * F)
    c_s = [slice(k * n, (k + 1) * n) for k in range(3)]
    for k in range(3):
        S[r_b[k], c_s[k]] = PB

    if v is Variant.TWO_FREQ_CONDUCTIVITY:
        sp, spp = spec.sigma, spec.sigma_imag
        g0 = D @ u0
        G[r_h0, c_p1] = np.diag(g0**2)
        S[r_h0, c_s[0]] = (2 * sp * g0)[:, None] * D
        G[r_i[0], c_p1] = DI.T * g0
        S[r_i[0], c_s[0]] = laplacian(net, sp)[i]
        if cplx:
            g1, gc = D @ u1, D @ np.conj(u1)
            G[r_h1, c_p1] = np.diag(g1 * gc)
            S[r_h1, c_s[1]] = (sp * gc)[:, None] * D
            S[r_h1, c_s[2]] = (sp * g1)[:, None] * D
            G[r_i[1], c_p1] = DI.T * g1
            G[r_i[1], c_p2] = 1j * w * (DI.T * g1)
            S[r_i[1], c_s[1]] = laplacian(net, sp + 1j * w * spp)[i]
            G[r_i[2], c_p1] = DI.T * gc
            G[r_i[2], c_p2] = -1j * w * (DI.T * gc)
            S[r_i[2], c_s[2]] = laplacian(net, sp - 1j * w * spp)[i]
        else:
            ga, gb = D @ u1.real, D @ u1.imag
            Lp, Lpp = laplacian(net, sp)[i], laplacian(net, spp)[i]
            G[r_h1, c_p1] = np.diag(ga**2 + gb**2)
            S[r_h1, c_s[1]] = (2 * sp * ga)[:, None] * D
            S[r_h1, c_s[2]] = (2 * sp * gb)[:, None] * D
            G[r_i[1], c_p1] = DI.T * ga
            G[r_i[1], c_p2] = -w * (DI.T * gb)
            S[r_i[1], c_s[1]] = Lp
            S[r_i[1], c_s[2]] = -w * Lpp
            G[r_i[2], c_p1] = DI.T * gb
            G[r_i[2], c_p2] = w * (DI.T * ga)
            S[r_i[2], c_s[1]] = w * Lpp
            S[r_i[2], c_s[2]] = Lp
        return G, S

    # two-frequency Schrodinger
    qp, qpp = spec.q, spec.q_imag
    L = laplacian(net, spec.sigma)[i]
    u0i = u0[i]
    G[r_h0, c_p1] = np.diag(u0i**2)
    S[r_h0, c_s[0]] = (2 * qp * u0i)[:, None] * PI
    G[r_i[0], c_p1] = np.diag(u0i)
    S[r_i[0], c_s[0]] = L + qp[:, None] * PI
    if cplx:
        u1i, uci = u1[i], np.conj(u1[i])
        G[r_h1, c_p1] = np.diag(u1i * uci)
        S[r_h1, c_s[1]] = (qp * uci)[:, None] * PI
        S[r_h1, c_s[2]] = (qp * u1i)[:, None] * PI
        G[r_i[1], c_p1] = np.diag(u1i)
        G[r_i[1], c_p2] = 1j * w * np.diag(u1i)
        S[r_i[1], c_s[1]] = L + (qp + 1j * w * qpp)[:, None] * PI
        G[r_i[2], c_p1] = np.diag(uci)
        G[r_i[2], c_p2] = -1j * w * np.diag(uci)
        S[r_i[2], c_s[2]] = L + (qp - 1j * w * qpp)[:, None] * PI
    else:
        ai, bi = u1.real[i], u1.imag[i]
        G[r_h1, c_p1] = np.diag(ai**2 + bi**2)
        S[r_h1, c_s[1]] = (2 * qp * ai)[:, None] * PI
        S[r_h1, c_s[2]] = (2 * qp * bi)[:, None] * PI
        G[r_i[1], c_p1] = np.diag(ai)
        G[r_i[1], c_p2] = -w * np.diag(bi)
        S[r_i[1], c_s[1]] = L + qp[:, None] * PI
        S[r_i[1], c_s[2]] = -w * qpp[:, None] * PI
        G[r_i[2], c_p1] = np.diag(bi)
        G[r_i[2], c_p2] = w * np.diag(ai)
        S[r_i[2], c_s[1]] = w * qpp[:, None] * PI
        S[r_i[2], c_s[2]] = L + qp[:, None] * PI
    return G, S


def jacobian_matrix(spec: ProblemSpec, states: States, form: str = "real") -> np.ndarray:
    """The Jacobian of the stacked system at ``(spec.gamma, states)``."""
    if form not in FORMS:
        raise ValueError(f"form must be one of {FORMS}")
    _check_states(spec, states)
    if not spec.variant.two_frequency:
        form = "real"
    N, p, s, r = spec.n_experiments, n_params(spec), state_size(spec), rows_per_experiment(spec)
    dt = complex if form == "complex" else float
    A = np.zeros((N * r, p + N * s), dtype=dt)
    for j in range(N):
        u1 = states.u1[j] if spec.variant.two_frequency else None
        G, S = _experiment_blocks(spec, np.real(states.u[j]), u1, form)
        A[j * r:(j + 1) * r, :p] = G
        A[j * r:(j + 1) * r, p + j * s:p + (j + 1) * s] = S
    return A


def assemble_jacobian(spec: ProblemSpec, states: States, form: str | None = None, tau_rank: float = 1.0):
    """Jacobian plus SVD diagnostics.

    `form` defaults to ``"complex"`` for two-frequency variants and
    ``"real"`` otherwise.
    """
    if form is None:
        form = "complex" if spec.variant.two_frequency else "real"
    A = jacobian_matrix(spec, states, form)
    rank, cond, s = rank_and_cond(A, tau_rank)
    used = form if spec.variant.two_frequency else "real"
    return A, JacobianReport(spec.variant, A.shape, used, s, rank, cond, layout(spec, used))


def rank_and_cond(M, tau_rank: float = 1.0) -> tuple[int, float, np.ndarray]:
    """Numerical rank and condition number from the singular values.

    Rank counts ``s_i > tau_rank * max(rows, cols) * eps * s_max``. The
    condition number is ``s_max / s_min`` over all ``min(rows, cols)``
    singular values, so rank-deficient matrices report huge values.
    """
    M = np.asarray(M)
    if M.size == 0:
        raise ValueError("empty matrix")
    s = np.linalg.svd(M, compute_uv=False)
    if s[0] == 0.0:
        return 0, np.inf, s
    tol = tau_rank * max(M.shape) * np.finfo(float).eps * s[0]
    rank = int(np.sum(s > tol))
    cond = float(s[0] / s[-1]) if s[-1] > 0 else np.inf
    return rank, cond, s


def matrix_rank(M) -> int:
    return rank_and_cond(M)[0]


def fd_jacobian(spec: ProblemSpec, states: States, h: float = 1e-6, form: str = "real") -> np.ndarray:
    """Central-difference Jacobian of the stacked residual.

    Independent of :func:`jacobian_matrix`; used to check it. The data
    offset does not affect derivatives, so the reference data are used.
    """
    if h <= 0:
        raise ValueError("h must be positive")
    data = evaluate_functional(spec, states)
    if form == "complex" and spec.variant.two_frequency:
        x0 = pack(spec, states, form="complex")
        fun = lambda x: residual_complex_pair(spec, x, data)
        dt = complex
    else:
        x0 = pack(spec, states)
        fun = lambda x: residual(spec, x, data)
        dt = float
    r0 = fun(x0)
    J = np.zeros((len(r0), len(x0)), dtype=dt)
    for k in range(len(x0)):
        e = np.zeros(len(x0), dtype=dt)
        e[k] = h
        J[:, k] = (fun(x0 + e) - fun(x0 - e)) / (2 * h)
    return J


# -- certificates -----------------------------------------------------------


@dataclass
class Assumption:
    name: str
    passed: bool
    detail: dict

    def to_dict(self):
        return {"name": self.name, "passed": self.passed, **self.detail}


@dataclass
class Certificate:
    """Outcome of a sufficient condition for injectivity of the linearization.

    A failed certificate does not imply non-uniqueness.
    """

    theorem: str
    assumptions: list

    @property
    def passed(self) -> bool:
        return all(a.passed for a in self.assumptions)

    def failed(self) -> list[str]:
        return [a.name for a in self.assumptions if not a.passed]

    def __getitem__(self, name) -> Assumption:
        for a in self.assumptions:
            if a.name == name:
                return a
        raise KeyError(name)

    def to_dict(self):
        return {
            "theorem": self.theorem,
            "verdict": "pass" if self.passed else "fail",
            "failed": self.failed(),
            "assumptions": [a.to_dict() for a in self.assumptions],
        }


def sign_field(net: Network, u, variant: Variant, tau: float = SUPPORT_RTOL) -> np.ndarray:
    """``1 - 2 * indicator(support)`` of grad u (conductivity) or u_I (Schrodinger)."""
    variant = Variant(variant)
    x = gradient(net, u) if variant.conductivity else np.asarray(u)[net.interior]
    s = np.ones(len(x))
    s[support(x, tau)] = -1.0
    return s


def _invertibility(M):
    if M.size == 0:
        return True, {"smallest_singular_value": None}
    smin, smax = smallest_singular_value(M)
    ok = not is_numerically_singular(M)
    return ok, {"smallest_singular_value": smin, "relative_margin": smin / smax if smax else 0.0}


def certify_real_conductivity(spec: ProblemSpec, states: States, tau: float = SUPPORT_RTOL) -> Certificate:
    """Support cover, base interior operator, sign-weighted interior operators.

    For the two-frequency variant this checks the omega_0 block with sigma'.
    """
    net, sigma = spec.net, spec.sigma
    covered = np.zeros(net.n_edges, dtype=bool)
    margins = []
    ok3 = True
    for u in states.u:
        u = np.real(u)
        covered[support(gradient(net, u), tau)] = True
        s = sign_field(net, u, Variant.REAL_CONDUCTIVITY, tau)
        ok, det = _invertibility(blocks(net, laplacian(net, s * sigma))[3])
        ok3 &= ok
        margins.append(det["smallest_singular_value"])
    uncovered = [int(net.edge_ids[k]) for k in np.flatnonzero(~covered)]
    ok2, det2 = _invertibility(blocks(net, laplacian(net, sigma))[3])
    return Certificate("real_conductivity", [
        Assumption("i", not uncovered, {"check": "supports of grad u^(j) cover the edges",
                                        "uncovered_edges": uncovered}),
        Assumption("ii", ok2, {"check": "[L_sigma]_II invertible", **det2}),
        Assumption("iii", ok3, {"check": "[L_{s^(j) sigma}]_II invertible",
                                "margin": min(margins), "smallest_singular_values": margins}),
    ])


def certify_real_schrodinger(spec: ProblemSpec, states: States, tau: float = SUPPORT_RTOL) -> Certificate:
    net = spec.net
    L_ii = blocks(net, laplacian(net, spec.sigma))[3]
    q = spec.q
    covered = np.zeros(net.n_interior, dtype=bool)
    margins = []
    ok3 = True
    for u in states.u:
        u = np.real(u)
        covered[support(u[net.interior], tau)] = True
        s = sign_field(net, u, Variant.REAL_SCHRODINGER, tau)
        ok, det = _invertibility(L_ii + np.diag(s * q))
        ok3 &= ok
        margins.append(det["smallest_singular_value"])
    uncovered = [int(net.ids[net.interior[k]]) for k in np.flatnonzero(~covered)]
    ok2, det2 = _invertibility(L_ii + np.diag(q))
    return Certificate("real_schrodinger", [
        Assumption("i", not uncovered, {"check": "supports of u_I^(j) cover the interior",
                                        "uncovered_nodes": uncovered}),
        Assumption("ii", ok2, {"check": "[L_sigma]_II + diag(q) invertible", **det2}),
        Assumption("iii", ok3, {"check": "[L_sigma]_II + diag(s^(j) q) invertible",
                                "margin": min(margins), "smallest_singular_values": margins}),
    ])


def build_A_matrices(spec: ProblemSpec, states: States) -> list[np.ndarray]:
    """Per-experiment |E| x |E| matrices whose real parts certify sigma''.

    ``A = -j diag(conj grad u1) grad_I K^-1 grad_I^T diag(grad u1)`` with
    ``K = [L_{sigma' + j omega_1 sigma''}]_II``.
    """
    if spec.variant is not Variant.TWO_FREQ_CONDUCTIVITY:
        raise ValueError("A matrices are defined for two_freq_conductivity")
    net = spec.net
    DI = net.grad_matrix[:, net.interior]
    K = blocks(net, laplacian(net, spec.admittance1))[3]
    out = []
    for u1 in states.u1:
        g1 = gradient(net, u1)
        X = solve_interior(K, DI.T * g1, "[L_{sigma'+j omega sigma''}]_II")
        out.append(-1j * (np.conj(g1)[:, None] * (DI @ X)))
    return out


def build_B_matrices(spec: ProblemSpec, states: States) -> list[np.ndarray]:
    """Per-experiment |I| x |I| matrices whose real parts certify q''.

    ``B = -j diag(conj u1_I) K^-1 diag(u1_I)`` with ``K = [L_sigma]_II + diag(q(omega_1))``.
    """
    if spec.variant is not Variant.TWO_FREQ_SCHRODINGER:
        raise ValueError("B matrices are defined for two_freq_schrodinger")
    net = spec.net
    K = blocks(net, laplacian(net, spec.sigma))[3] + np.diag(spec.potential1)
    out = []
    for u1 in states.u1:
        ui = u1[net.interior]
        X = solve_interior(K, np.diag(ui), "[L_sigma]_II + diag(q(omega_1))")
        out.append(-1j * (np.conj(ui)[:, None] * X))
    return out


def _stack_rank_assumption(mats, required, label):
    stack = np.vstack(mats)
    rank_c = matrix_rank(stack) if np.any(stack) else 0
    re = stack.real
    rank_r = matrix_rank(re) if np.any(re) else 0
    return Assumption("rank", rank_r == required, {
        "check": f"Re[{label}^(1); ...; {label}^(N)] has full column rank",
        f"rank_{label}": rank_c,
        f"rank_re_{label}": rank_r,
        "required_rank": required,
    })


def certify_two_freq_conductivity(spec: ProblemSpec, states: States, tau: float = SUPPORT_RTOL) -> Certificate:
    """Real-conductivity certificate at omega_0, then full rank of Re[A-stack]."""
    if spec.variant is not Variant.TWO_FREQ_CONDUCTIVITY:
        raise ValueError("expected a two_freq_conductivity spec")
    base = certify_real_conductivity(spec, states, tau)
    prereq = Assumption("real_conductivity", base.passed, {"certificate": base.to_dict()})
    try:
        mats = build_A_matrices(spec, states)
    except ArithmeticError as exc:
        return Certificate("two_freq_conductivity", [prereq, Assumption("rank", False, {"error": str(exc)})])
    return Certificate("two_freq_conductivity", [prereq, _stack_rank_assumption(mats, spec.net.n_edges, "A")])


def certify_two_freq_schrodinger(spec: ProblemSpec, states: States, tau: float = SUPPORT_RTOL) -> Certificate:
    """Real-Schrodinger certificate at omega_0, well-posedness at both
    frequencies, non-vanishing q', then full rank of Re[B-stack]."""
    if spec.variant is not Variant.TWO_FREQ_SCHRODINGER:
        raise ValueError("expected a two_freq_schrodinger spec")
    net = spec.net
    base = certify_real_schrodinger(spec, states, tau)
    L_ii = blocks(net, laplacian(net, spec.sigma))[3]
    ok0, det0 = _invertibility(L_ii + np.diag(spec.q))
    ok1, det1 = _invertibility(L_ii + np.diag(spec.potential1))
    zero_q = [int(net.ids[net.interior[k]]) for k in np.flatnonzero(spec.q == 0)]
    items = [
        Assumption("i", base.passed, {"check": "real Schrodinger certificate at omega_0",
                                      "certificate": base.to_dict()}),
        Assumption("ii", ok0 and ok1, {"check": "Dirichlet problems well posed at omega_0 and omega_1",
                                       "omega0": det0, "omega1": det1}),
        Assumption("iii", not zero_q, {"check": "|q'| > 0", "zero_nodes": zero_q}),
    ]
    if ok1:
        items.append(_stack_rank_assumption(build_B_matrices(spec, states), net.n_interior, "B"))
    else:
        items.append(Assumption("rank", False, {"error": "omega_1 operator singular"}))
    return Certificate("two_freq_schrodinger", items)


def certify(spec: ProblemSpec, states: States | None = None, tau: float = SUPPORT_RTOL) -> Certificate:
    """Dispatch to the certificate for the spec's variant."""
    if states is None:
        states = solve_states(spec)
    return {
        Variant.REAL_CONDUCTIVITY: certify_real_conductivity,
        Variant.TWO_FREQ_CONDUCTIVITY: certify_two_freq_conductivity,
        Variant.REAL_SCHRODINGER: certify_real_schrodinger,
        Variant.TWO_FREQ_SCHRODINGER: certify_two_freq_schrodinger,
    }[spec.variant](spec, states, tau)
