import json

import numpy as np
import pytest
from hypothesis import given

from conftest import random_network, seeds
from netohm import generators as gen
from netohm import io as nio
from netohm.errors import NetworkError
from netohm.forward import ProblemSpec, forward_dataset


@given(seeds)
def test_network_round_trip_bytes(seed):
    net, rng = random_network(seed)
    sigma = rng.uniform(0.5, 2, net.n_edges)
    text = nio.dumps_network(net, sigma)
    nf = nio.loads_network(text)
    assert nf.net.same_as(net)
    np.testing.assert_array_equal(nf.sigma, sigma)
    assert nio.dumps_network(nf.net, nf.sigma) == text


def test_round_trip_with_all_parameters():
    net, sp, spp = gen.g3()
    q, qi = np.array([0.5, 1.5]), np.array([0.1, -0.2])
    text = nio.dumps_network(net, sp, spp, q, qi)
    nf = nio.loads_network(text)
    np.testing.assert_array_equal(nf.sigma_imag, spp)
    np.testing.assert_array_equal(nf.q, q)
    np.testing.assert_array_equal(nf.q_imag, qi)
    assert nio.dumps_network(nf.net, nf.sigma, nf.sigma_imag, nf.q, nf.q_imag) == text


def test_node_order_in_file_does_not_matter():
    net, sigma = gen.g2(2.0)
    doc = nio.network_to_dict(net, sigma)
    doc["nodes"] = doc["nodes"][::-1]
    doc["edges"] = doc["edges"][::-1]
    nf = nio.network_from_dict(doc)
    assert nf.net.same_as(net)
    np.testing.assert_array_equal(nf.sigma, sigma)


def test_bad_documents():
    with pytest.raises(NetworkError):
        nio.network_from_dict({"format": "other"})
    with pytest.raises(NetworkError):
        nio.network_from_dict({"format": "netohm/1", "nodes": [{"id": 1}], "edges": []})
    doc = nio.network_to_dict(*gen.g1())
    doc["edges"].append({"id": 9, "tail": 4, "head": 4, "sigma_re": 1.0})
    with pytest.raises(NetworkError):
        nio.network_from_dict(doc)


def test_measurement_round_trip(tmp_path):
    net, sp, spp = gen.g3()
    spec = ProblemSpec("two_freq_conductivity", net, sp, gen.g3_bc(2), sigma_imag=spp, omega1=1.0)
    data, _ = forward_dataset(spec)
    path = tmp_path / "d.json"
    path.write_text(nio.dumps_measurements(spec, data))
    m = nio.load_measurements(path)
    assert m.variant == "two_freq_conductivity" and m.omega1 == 1.0
    for a, b in zip(m.H + m.H1, data.blocks()):
        np.testing.assert_array_equal(a, b)
    np.testing.assert_array_equal(m.f1[1], spec.f1[1])


def test_csv_exports():
    net, sigma = gen.g1()
    spec = ProblemSpec("real_conductivity", net, sigma, gen.g1_bc())
    data, _ = forward_dataset(spec)
    lines = nio.measurements_csv(data, [0, 1, 2]).splitlines()
    assert lines[0] == "id,H1" and len(lines) == 4
    assert float(lines[1].split(",")[1]) == pytest.approx(4 / 9)
    rows = nio.matrix_csv(np.eye(2)).splitlines()
    assert rows == ["1.0,0.0", "0.0,1.0"]


def test_parameter_file(tmp_path):
    p = tmp_path / "p.json"
    p.write_text(json.dumps({"format": "netohm-param/1", "gamma": [1, 2]}))
    np.testing.assert_array_equal(nio.load_parameters(p), [1.0, 2.0])
    net, sigma = gen.g2(2.0)
    nio.save_network(tmp_path / "n.json", net, sigma)
    np.testing.assert_array_equal(nio.load_parameters(tmp_path / "n.json"), sigma)
