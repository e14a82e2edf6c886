"""
``netohm`` command line.

JSON reports go to stdout, diagnostics to stderr. Exit codes: 0 success,
1 validation error, 2 numerical failure, 3 I/O error.

Examples::

    netohm gen --example g1 | netohm solve --f 1,0,0
    netohm certify --example g2 --mu 1.0 --variant real_conductivity --bc paper
    netohm jacobian --example g3 --variant two_freq_conductivity --N 3
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

import numpy as np

from . import generators as gen
from . import io as nio
from .errors import LineSearchError, NetworkError, SingularOperatorError
from .forward import ProblemSpec, Variant, data_labels, forward_dataset, solve_states, PowerData
from .invert import GNConfig, add_noise, gauss_newton
from .linearize import assemble_jacobian, certify
from .network import dirichlet_solve, schrodinger_solve
from .thermal import ThermalConfig, run_thermal_experiment

EXIT_OK, EXIT_VALIDATION, EXIT_NUMERICAL, EXIT_IO = 0, 1, 2, 3
EXAMPLES = ("g1", "g2", "g3", "g3eps", "grid", "figdet", "path")


class UsageError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_VALIDATION, f"{self.prog}: error: {message}\n")


# -- inputs -----------------------------------------------------------------


class Source:
    """A network with its parameters and, for examples, standard boundary data."""

    def __init__(self, nf: nio.NetworkFile, paper_bc=None, name=None):
        self.nf = nf
        self.paper_bc = paper_bc
        self.name = name

    @property
    def net(self):
        return self.nf.net


def example_source(args) -> Source:
    name = args.example
    if name == "g1":
        net, s = gen.g1()
        return Source(nio.NetworkFile(net, s), gen.g1_bc, name)
    if name == "g2":
        net, s = gen.g2(args.mu)
        return Source(nio.NetworkFile(net, s), gen.g2_bc, name)
    if name == "g3":
        net, sp, spp = gen.g3()
        n = args.N or 1
        return Source(nio.NetworkFile(net, sp, spp), lambda: gen.g3_bc(n), name)
    if name == "g3eps":
        net, s = gen.g3_eps(args.eps)
        return Source(nio.NetworkFile(net, s), gen.g3_eps_bc, name)
    if name == "grid":
        net = gen.grid_network(args.n or 10)
        return Source(nio.NetworkFile(net, gen.smooth_conductivity(net)), lambda: gen.grid_bc(net), name)
    if name == "figdet":
        net = gen.fig_det_grid(args.n or 4)
        return Source(nio.NetworkFile(net, np.ones(net.n_edges)), lambda: [gen.fig_det_bc(net)], name)
    if name == "path":
        net, s = gen.path_network(args.n or 2)
        return Source(nio.NetworkFile(net, s), lambda: [np.array([1.0, 0.0])], name)
    raise UsageError(f"unknown example {name!r}")


def load_source(args) -> Source:
    if getattr(args, "example", None):
        return example_source(args)
    path = getattr(args, "net", None)
    if path is None or path == "-":
        return Source(nio.loads_network(sys.stdin.read()))
    return Source(nio.load_network(path))


def parse_vectors(text: str) -> list[np.ndarray]:
    """``"1,0,0"`` or ``"1,0,0;0,1,0"`` -> list of arrays."""
    try:
        return [np.array([float(v) for v in part.split(",")]) for part in text.split(";") if part.strip()]
    except ValueError as exc:
        raise UsageError(f"cannot parse vector list {text!r}") from exc


def boundary_conditions(args, src: Source) -> list[np.ndarray]:
    if getattr(args, "f_file", None):
        with open(args.f_file) as fh:
            return [np.asarray(v, dtype=float) for v in json.load(fh)]
    if getattr(args, "f", None):
        return parse_vectors(args.f)
    if src.paper_bc is not None and getattr(args, "bc", "paper") in (None, "paper"):
        bcs = src.paper_bc()
        if getattr(args, "N", None):
            bcs = bcs[: args.N]
        return bcs
    raise UsageError("no boundary conditions: pass --f, --f-file, or --bc paper with an example")


def _field(text, n, what):
    vals = [float(v) for v in text.split(",")]
    if len(vals) == 1:
        return np.full(n, vals[0])
    if len(vals) != n:
        raise UsageError(f"{what} needs 1 or {n} values")
    return np.asarray(vals)


def build_spec(args, src: Source) -> ProblemSpec:
    net, nf = src.net, src.nf
    variant = Variant(args.variant)
    f = boundary_conditions(args, src)
    kw = {}
    if variant.two_frequency:
        kw["omega1"] = args.omega1
        if getattr(args, "f1", None):
            kw["f1"] = parse_vectors(args.f1)
    if variant is Variant.TWO_FREQ_CONDUCTIVITY:
        sim = nf.sigma_imag
        if getattr(args, "sigma_imag", None):
            sim = _field(args.sigma_imag, net.n_edges, "--sigma-imag")
        if sim is None:
            raise UsageError("two_freq_conductivity needs sigma_im in the network file or --sigma-imag")
        kw["sigma_imag"] = sim
    if not variant.conductivity:
        q = nf.q if not getattr(args, "q", None) else _field(args.q, net.n_interior, "--q")
        if q is None:
            raise UsageError("Schrodinger variants need q_re in the network file or --q")
        kw["q"] = q
    if variant is Variant.TWO_FREQ_SCHRODINGER:
        qi = nf.q_imag if not getattr(args, "q_imag", None) else _field(args.q_imag, net.n_interior, "--q-imag")
        if qi is None:
            raise UsageError("two_freq_schrodinger needs q_im in the network file or --q-imag")
        kw["q_imag"] = qi
    return ProblemSpec(variant, net, nf.sigma, f, **kw)


# -- commands ---------------------------------------------------------------


def cmd_gen(args):
    src = example_source(args)
    text = nio.dumps_network(src.net, src.nf.sigma, src.nf.sigma_imag, src.nf.q, src.nf.q_imag)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
        return {"written": args.out}
    return text


def _vertex_report(net, u):
    u = np.asarray(u)
    out = []
    for k, nid in enumerate(net.ids.tolist()):
        item = {"id": int(nid), "boundary": bool(net.boundary_mask[k]), "re": float(u[k].real)}
        if np.iscomplexobj(u):
            item["im"] = float(u[k].imag)
        out.append(item)
    return out


def cmd_solve(args):
    src = load_source(args)
    net, nf = src.net, src.nf
    fs = boundary_conditions(args, src)
    w = nf.sigma.astype(complex) if args.omega else nf.sigma
    if args.omega and nf.sigma_imag is not None:
        w = nf.sigma + 1j * args.omega * nf.sigma_imag
    q = None
    if args.q:
        q = _field(args.q, net.n_interior, "--q")
    elif nf.q is not None:
        q = nf.q
    if q is not None and args.omega and nf.q_imag is not None:
        q = q + 1j * args.omega * nf.q_imag
    sols = []
    for f in fs:
        u = dirichlet_solve(net, w, f) if q is None else schrodinger_solve(net, w, q, f)
        sols.append({"u": _vertex_report(net, u), "by_id": {str(int(i)): float(np.real(v)) for i, v in zip(net.ids, u)}})
    return {"format": "netohm-solution/1", "experiments": sols}


def cmd_power(args):
    src = load_source(args)
    spec = build_spec(args, src)
    data, _ = forward_dataset(spec)
    if args.format == "csv":
        return nio.measurements_csv(data, data_labels(spec))
    return nio.measurements_to_dict(spec, data)


def _dump_matrix(path, M):
    with open(path, "w") as fh:
        fh.write(nio.matrix_csv(M))


def cmd_jacobian(args):
    src = load_source(args)
    spec = build_spec(args, src)
    states = solve_states(spec)
    A, report = assemble_jacobian(spec, states, form=args.form)
    if args.matrix_out:
        _dump_matrix(args.matrix_out, A)
    out = report.to_dict()
    if not args.singular_values:
        out.pop("singular_values")
    return out


def cmd_certify(args):
    src = load_source(args)
    spec = build_spec(args, src)
    cert = certify(spec, solve_states(spec))
    out = cert.to_dict()
    if args.with_jacobian:
        form = "complex" if spec.variant.two_frequency else "real"
        _, rep = assemble_jacobian(spec, solve_states(spec), form)
        out["jacobian"] = {"rows": rep.shape[0], "cols": rep.shape[1], "rank": rep.rank,
                           "full_column_rank": rep.full_column_rank}
    return out


def cmd_thermal(args):
    src = load_source(args)
    if args.mode == "mc" and args.seed is None:
        raise UsageError("--mode mc requires an explicit --seed")
    fs = boundary_conditions(args, src)
    cfg = ThermalConfig(t0=args.t0, dt=args.dt, kappa=args.kappa, realizations=args.realizations,
                        seed=args.seed if args.seed is not None else 0)
    rep = run_thermal_experiment(src.net, src.nf.sigma, fs[0], cfg, mode=args.mode)
    if args.cov_out:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["experiment", "row", "col", "value"])
        covs = rep.covariances
        for k, C in enumerate([covs.baseline] + list(covs.heated)):
            for r in range(C.shape[0]):
                for c in range(C.shape[1]):
                    w.writerow([k, r, c, repr(float(C[r, c]))])
        with open(args.cov_out, "w") as fh:
            fh.write(buf.getvalue())
    return rep.to_dict(src.net)


def cmd_reconstruct(args):
    src = load_source(args)
    m = nio.load_measurements(args.data)
    variant = Variant(args.variant or m.variant)
    if variant.value != m.variant:
        raise UsageError(f"data file holds {m.variant!r}, not {variant.value!r}")
    if args.noise and args.seed is None:
        raise UsageError("--noise requires an explicit --seed")
    net, nf = src.net, src.nf
    kw = {}
    if variant.two_frequency:
        kw["omega1"] = m.omega1
        kw["f1"] = m.f1
    # placeholder unknowns; the solver only reads the known parts of the problem
    if variant is Variant.TWO_FREQ_CONDUCTIVITY:
        kw["sigma_imag"] = np.zeros(net.n_edges)
    if not variant.conductivity:
        kw["q"] = np.zeros(net.n_interior)
    if variant is Variant.TWO_FREQ_SCHRODINGER:
        kw["q_imag"] = np.zeros(net.n_interior)
    sigma = nf.sigma if not variant.conductivity else np.ones(net.n_edges)
    spec = ProblemSpec(variant, net, sigma, m.f, **kw)
    data = PowerData(variant, tuple(m.H), tuple(m.H1) if m.H1 is not None else None, m.omega1)
    if args.noise:
        data = add_noise(data, args.noise, args.seed)
    truth = nio.load_parameters(args.truth) if args.truth else None
    cfg = GNConfig(alpha=args.alpha, max_iter=args.max_iter, log_param=args.log_param)
    res = gauss_newton(spec, data, cfg, truth=truth, noisy=bool(args.noise))
    if args.history_out:
        with open(args.history_out, "w") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["iteration", "merit", "grad_norm"])
            for k, (mm, g) in enumerate(zip(res.merit, res.grad_norm)):
                w.writerow([k, repr(mm), repr(g)])
    if args.table_out:
        labels = data_labels(spec)
        if variant.two_frequency:
            labels = [f"{l}:re" for l in labels] + [f"{l}:im" for l in labels]
        with open(args.table_out, "w") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["id", "true", "recovered"])
            for k, lab in enumerate(labels):
                t = "" if truth is None else repr(float(truth[k]))
                w.writerow([lab, t, repr(float(res.gamma[k]))])
    return res.to_dict()


# -- parser -----------------------------------------------------------------


def _net_args(p, variant=False):
    p.add_argument("--net", help="network file (netohm/1); '-' or omitted reads stdin")
    p.add_argument("--example", choices=EXAMPLES, help="use a built-in example network")
    p.add_argument("--mu", type=float, default=1.0, help="g2 horizontal conductivity")
    p.add_argument("--eps", type=float, default=1e-2, help="g3eps perturbation")
    p.add_argument("--n", type=int, default=None, help="grid size / path interior count")
    p.add_argument("--N", type=int, default=None, help="number of experiments for --bc paper")
    if variant:
        p.add_argument("--variant", choices=[v.value for v in Variant], default="real_conductivity")
        p.add_argument("--omega1", type=float, default=1.0)
        p.add_argument("--sigma-imag", dest="sigma_imag")
        p.add_argument("--q")
        p.add_argument("--q-imag", dest="q_imag")
        p.add_argument("--f1", help="omega_1 boundary data (default: same as --f)")


def _bc_args(p):
    p.add_argument("--f", help="boundary voltages, e.g. 1,0,0 or 1,0,0;0,1,0")
    p.add_argument("--f-file", dest="f_file", help="JSON list of boundary vectors")
    p.add_argument("--bc", choices=["paper"], default=None, help="the example's standard boundary data")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="netohm", description=__doc__.split("\n\n")[0].strip())
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("gen", help="write an example network")
    p.add_argument("--example", choices=EXAMPLES, required=True)
    p.add_argument("--mu", type=float, default=1.0)
    p.add_argument("--eps", type=float, default=1e-2)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--N", type=int, default=None)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("solve", help="Dirichlet / Schrodinger forward solve")
    _net_args(p)
    _bc_args(p)
    p.add_argument("--q")
    p.add_argument("--omega", type=float, default=0.0)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("power", help="dissipated-power measurements")
    _net_args(p, variant=True)
    _bc_args(p)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.set_defaults(func=cmd_power)

    p = sub.add_parser("jacobian", help="assemble the linearized system and report rank/cond")
    _net_args(p, variant=True)
    _bc_args(p)
    p.add_argument("--form", choices=["real", "complex"], default=None)
    p.add_argument("--matrix-out", dest="matrix_out")
    p.add_argument("--singular-values", action="store_true")
    p.set_defaults(func=cmd_jacobian)

    p = sub.add_parser("certify", help="local-uniqueness certificate")
    _net_args(p, variant=True)
    _bc_args(p)
    p.add_argument("--with-jacobian", action="store_true")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("thermal", help="power from thermal-noise covariances")
    _net_args(p)
    _bc_args(p)
    p.add_argument("--mode", choices=["analytic", "mc"], default="analytic")
    p.add_argument("--realizations", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--t0", type=float, default=1.0)
    p.add_argument("--dt", type=float, default=100.0)
    p.add_argument("--kappa", type=float, default=float(np.pi))
    p.add_argument("--cov-out", dest="cov_out")
    p.set_defaults(func=cmd_thermal)

    p = sub.add_parser("reconstruct", help="Gauss-Newton reconstruction from a measurement file")
    _net_args(p)
    p.add_argument("--data", required=True)
    p.add_argument("--variant", choices=[v.value for v in Variant], default=None)
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--max-iter", dest="max_iter", type=int, default=100)
    p.add_argument("--noise", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--truth")
    p.add_argument("--log-param", dest="log_param", action="store_true",
                   help="iterate on log(sigma); an extension, off by default")
    p.add_argument("--history-out", dest="history_out")
    p.add_argument("--table-out", dest="table_out")
    p.set_defaults(func=cmd_reconstruct)
    return ap


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_VALIDATION
    try:
        out = args.func(args)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"netohm: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (SingularOperatorError, LineSearchError, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"netohm: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (NetworkError, UsageError, ValueError, KeyError) as exc:
        print(f"netohm: invalid input: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    sys.stdout.write(out if isinstance(out, str) else json.dumps(out, indent=2) + "\n")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
