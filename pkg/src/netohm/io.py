"""
JSON and CSV file formats.

Network files (``netohm/1``)::

    {"format": "netohm/1",
     "nodes": [{"id": 1, "boundary": true, "x": 0.0, "y": 1.0}, ...],
     "edges": [{"id": 0, "tail": 1, "head": 4, "sigma_re": 1.0, "sigma_im": 0.0}, ...]}

``x``, ``y`` and ``sigma_im`` are optional. ``sigma_im`` holds the coefficient
of ``j*omega`` (the admittance at frequency omega is
``sigma_re + 1j*omega*sigma_im``). Interior nodes may carry optional
``q_re`` / ``q_im`` Schrodinger potential values with the same convention.

Measurement files (``netohm-data/1``) hold boundary conditions and internal
functionals for each experiment; see :func:`measurements_to_dict`.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass

import numpy as np

from .errors import NetworkError
from .network import Network, build_network

NETWORK_FORMAT = "netohm/1"
DATA_FORMAT = "netohm-data/1"
PARAM_FORMAT = "netohm-param/1"


@dataclass
class NetworkFile:
    """A network plus whatever edge/node parameters its file carried."""

    net: Network
    sigma: np.ndarray
    sigma_imag: np.ndarray | None = None
    q: np.ndarray | None = None
    q_imag: np.ndarray | None = None


def network_to_dict(net: Network, sigma=None, sigma_imag=None, q=None, q_imag=None) -> dict:
    nodes = []
    interior_pos = {k: p for p, k in enumerate(net.interior.tolist())}
    for k, nid in enumerate(net.ids.tolist()):
        node = {"id": int(nid), "boundary": bool(net.boundary_mask[k])}
        if net.coords is not None:
            node["x"] = float(net.coords[k, 0])
            node["y"] = float(net.coords[k, 1])
        if k in interior_pos:
            if q is not None:
                node["q_re"] = float(q[interior_pos[k]])
            if q_imag is not None:
                node["q_im"] = float(q_imag[interior_pos[k]])
        nodes.append(node)
    sigma = np.ones(net.n_edges) if sigma is None else np.asarray(sigma, dtype=float)
    edges = []
    for k, (t, h) in enumerate(net.edges.tolist()):
        e = {
            "id": int(net.edge_ids[k]),
            "tail": int(net.ids[t]),
            "head": int(net.ids[h]),
            "sigma_re": float(sigma[k]),
        }
        if sigma_imag is not None:
            e["sigma_im"] = float(sigma_imag[k])
        edges.append(e)
    return {"format": NETWORK_FORMAT, "nodes": nodes, "edges": edges}


def dumps_network(net: Network, sigma=None, sigma_imag=None, q=None, q_imag=None) -> str:
    """Canonical serialization: sorted ids, fixed key order, two-space indent."""
    return json.dumps(network_to_dict(net, sigma, sigma_imag, q, q_imag), indent=2) + "\n"


def network_from_dict(doc: dict) -> NetworkFile:
    if doc.get("format") != NETWORK_FORMAT:
        raise NetworkError(f"expected format {NETWORK_FORMAT!r}, got {doc.get('format')!r}")
    try:
        nodes = doc["nodes"]
        edges = doc["edges"]
        ids = [int(n["id"]) for n in nodes]
        flags = [bool(n["boundary"]) for n in nodes]
        has_xy = all("x" in n and "y" in n for n in nodes)
        coords = [(float(n["x"]), float(n["y"])) for n in nodes] if has_xy else None
        eids = [int(e["id"]) for e in edges]
        pairs = [(int(e["tail"]), int(e["head"])) for e in edges]
    except (KeyError, TypeError) as exc:
        raise NetworkError(f"malformed network document: {exc!r}") from exc
    net = build_network(ids, flags, pairs, coords=coords, edge_ids=eids)

    by_eid = {int(e["id"]): e for e in edges}
    ordered = [by_eid[int(k)] for k in net.edge_ids.tolist()]
    sigma = np.array([float(e.get("sigma_re", 1.0)) for e in ordered])
    sigma_imag = None
    if any("sigma_im" in e for e in ordered):
        sigma_imag = np.array([float(e.get("sigma_im", 0.0)) for e in ordered])

    by_id = {int(n["id"]): n for n in nodes}
    inner = [by_id[int(net.ids[k])] for k in net.interior.tolist()]
    q = q_imag = None
    if any("q_re" in n for n in inner):
        q = np.array([float(n.get("q_re", 0.0)) for n in inner])
    if any("q_im" in n for n in inner):
        q_imag = np.array([float(n.get("q_im", 0.0)) for n in inner])
    return NetworkFile(net, sigma, sigma_imag, q, q_imag)


def loads_network(text: str) -> NetworkFile:
    return network_from_dict(json.loads(text))


def load_network(path) -> NetworkFile:
    with open(path) as fh:
        return loads_network(fh.read())


def save_network(path, net: Network, sigma=None, sigma_imag=None, q=None, q_imag=None):
    with open(path, "w") as fh:
        fh.write(dumps_network(net, sigma, sigma_imag, q, q_imag))


# -- measurements -----------------------------------------------------------


def measurements_to_dict(spec, data) -> dict:
    """Measurement document for a :class:`~netohm.forward.ProblemSpec` and its data.

    Real variants store ``f`` and ``H`` per experiment. Two-frequency
    variants also store ``f1`` (``{"re": [...], "im": [...]}``) and the
    omega_1 block ``H1``; ``H`` is then the omega_0 block.
    """
    net = spec.net
    exps = []
    for j in range(spec.n_experiments):
        ex = {"f": [float(v) for v in np.real(spec.f[j])], "H": [float(v) for v in data.H[j]]}
        if data.H1 is not None:
            f1 = np.asarray(spec.f1[j], dtype=complex)
            ex["f1"] = {"re": f1.real.tolist(), "im": f1.imag.tolist()}
            ex["H1"] = [float(v) for v in data.H1[j]]
        exps.append(ex)
    return {
        "format": DATA_FORMAT,
        "variant": spec.variant.value,
        "omega1": None if spec.omega1 is None else float(spec.omega1),
        "boundary_ids": [int(net.ids[k]) for k in net.boundary],
        "experiments": exps,
    }


def dumps_measurements(spec, data) -> str:
    return json.dumps(measurements_to_dict(spec, data), indent=2) + "\n"


@dataclass
class MeasurementFile:
    variant: str
    omega1: float | None
    f: list
    H: list
    f1: list | None
    H1: list | None


def measurements_from_dict(doc: dict) -> MeasurementFile:
    if doc.get("format") != DATA_FORMAT:
        raise ValueError(f"expected format {DATA_FORMAT!r}, got {doc.get('format')!r}")
    exps = doc["experiments"]
    f = [np.asarray(e["f"], dtype=float) for e in exps]
    H = [np.asarray(e["H"], dtype=float) for e in exps]
    f1 = H1 = None
    if exps and "H1" in exps[0]:
        f1 = [np.asarray(e["f1"]["re"]) + 1j * np.asarray(e["f1"]["im"]) for e in exps]
        H1 = [np.asarray(e["H1"], dtype=float) for e in exps]
    return MeasurementFile(doc["variant"], doc.get("omega1"), f, H, f1, H1)


def load_measurements(path) -> MeasurementFile:
    with open(path) as fh:
        return measurements_from_dict(json.load(fh))


def measurements_csv(data, labels) -> str:
    """One row per edge (or interior node), one column per experiment/block."""
    cols, names = [], []
    for j, h in enumerate(data.H):
        cols.append(h)
        names.append(f"H{j + 1}" if data.H1 is None else f"H0_{j + 1}")
    if data.H1 is not None:
        for j, h in enumerate(data.H1):
            cols.append(h)
            names.append(f"H1_{j + 1}")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["id"] + names)
    for r, lab in enumerate(labels):
        w.writerow([lab] + [repr(float(c[r])) for c in cols])
    return buf.getvalue()


def matrix_csv(M: np.ndarray) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if np.iscomplexobj(M):
        for row in M:
            w.writerow([repr(complex(v)) for v in row])
    else:
        for row in M:
            w.writerow([repr(float(v)) for v in row])
    return buf.getvalue()


def load_parameters(path) -> np.ndarray:
    """Read ``{"format": "netohm-param/1", "gamma": [...]}`` or a network file's sigma."""
    with open(path) as fh:
        doc = json.load(fh)
    if doc.get("format") == PARAM_FORMAT:
        return np.asarray(doc["gamma"], dtype=float)
    nf = network_from_dict(doc)
    return nf.sigma if nf.sigma_imag is None else np.concatenate([nf.sigma, nf.sigma_imag])
