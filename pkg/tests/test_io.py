import json

import numpy as np
import pytest

from hexlogit.errors import DataError
from hexlogit.hexad import fit
from hexlogit.io import (
    OutputError,
    dumps,
    parse_network_csv,
    read_qq_csv,
    read_result_json,
    write_network_csv,
    write_qq_csv,
    write_qq_svg,
    write_result_json,
)
from hexlogit.simulation import SimulationConfig, qq_points, run_monte_carlo, simulate_network


def write(tmp_path, text, name="net.csv"):
    p = tmp_path / name
    p.write_text(text)
    return p


def test_three_link_file(tmp_path):
    p = write(tmp_path, "i,j,k,y,x1\n1,2,1,1,0.5\n2,1,2,1,-0.25\n3,4,1,1,1.0\n")
    net = parse_network_csv(p, n=4)
    assert net.n == 4 and net.n_links == 3 and net.p == 1
    assert (3, 4, 1) in net
    assert parse_network_csv(p).n == 4


def test_compact_file(tmp_path):
    net = parse_network_csv(write(tmp_path, "i,j,k\n1,2,1\n2,1,2\n"))
    assert net.n_links == 2 and net.n == 2 and not net.has_covariates


def test_dyadic_file(tmp_path):
    net = parse_network_csv(write(tmp_path, "i,j,y,x1,x2\n1,1,1,0.1,0.2\n1,2,0,0.3,0.4\n2,2,1,0,0\n"))
    assert net.n3 == 1 and net.n_links == 2 and net.p == 2


def test_empty_data_section(tmp_path):
    net = parse_network_csv(write(tmp_path, "i,j,k,y,x1\n"), n=3)
    assert net.n_links == 0


@pytest.mark.parametrize("body, line", [
    ("i,j,k,y,x1\n1,1,1,2,0.1\n", 2),
    ("i,j,k,y,x1\n1,1,1,1,0.1\n1,1,1,0,0.2\n", 3),
    ("i,j,k,y,x1\n1,1,1,1\n", 2),
    ("i,j,k,y,x1\n1,1,1,1,abc\n", 2),
    ("i,j,k,y,x1\n0,1,1,1,0.1\n", 2),
    ("i,j,k,y,x1\n1,1,1,1,0.1\n# note\n\n1,a,1,1,0.1\n", 5),
    ("a,b,c\n", 1),
])
def test_malformed_rows(tmp_path, body, line):
    with pytest.raises(DataError, match=f"line {line}"):
        parse_network_csv(write(tmp_path, body))


def test_n_too_small(tmp_path):
    with pytest.raises(DataError):
        parse_network_csv(write(tmp_path, "i,j,k,y\n3,1,1,1\n"), n=2)


def test_network_round_trip(tmp_path):
    net, _ = simulate_network(SimulationConfig(n=5, seed=1), 0)
    write_network_csv(net, tmp_path / "a.csv")
    back = parse_network_csv(tmp_path / "a.csv")
    assert np.array_equal(back.edges, net.edges)
    assert np.array_equal(back.covariate_cube, net.covariate_cube)


def test_missing_covariates_surface_on_fit(tmp_path):
    body = "i,j,k,y,x1\n1,1,1,1,0\n1,2,2,1,0\n2,1,2,1,0\n2,2,1,1,0\n"
    with pytest.raises(DataError, match="missing"):
        fit(parse_network_csv(write(tmp_path, body)))


def test_result_round_trip_is_exact(tmp_path):
    net, _ = simulate_network(SimulationConfig(n=8, beta0=(1.0, 0.5), seed=3), 0)
    res = fit(net)
    write_result_json(res, tmp_path / "r.json")
    back = read_result_json(tmp_path / "r.json")
    assert np.array_equal(back.beta_hat, res.beta_hat)
    assert np.array_equal(back.vcov, res.vcov)
    assert np.array_equal(back.se, res.se)
    assert back.loglik == res.loglik and back.n_informative == res.n_informative
    data = json.loads((tmp_path / "r.json").read_text())
    assert list(data)[:4] == ["schema", "kind", "beta_hat", "vcov"]
    assert "timing" not in data and {"ci95", "wald_p", "se", "vcov"} <= set(data)


def test_summary_json_columns(tmp_path):
    s, _ = run_monte_carlo(SimulationConfig(n=8, replications=5, seed=2))
    write_result_json(s, tmp_path / "s.json")
    data = json.loads((tmp_path / "s.json").read_text())
    for key in ("mean_beta", "sd_beta", "mean_se", "rmse", "se_ratio", "c90", "c95", "power", "n_failed"):
        assert key in data


def test_json_is_strict_and_stable():
    text = dumps({"b": float("nan"), "a": np.array([1.0, np.inf]), "c": np.float64(0.1)})
    assert json.loads(text) == {"b": None, "a": [1.0, None], "c": 0.1}
    assert text.index('"b"') < text.index('"a"')


def test_unwritable_path(tmp_path):
    s, _ = run_monte_carlo(SimulationConfig(n=8, replications=2, seed=2))
    with pytest.raises(OutputError):
        write_result_json(s, tmp_path / "missing" / "dir" / "s.json")


def test_qq_files(tmp_path):
    pts = qq_points(np.random.default_rng(0).normal(size=30))
    write_qq_csv(pts, tmp_path / "q.csv")
    assert np.array_equal(read_qq_csv(tmp_path / "q.csv"), pts)
    write_qq_svg(pts, tmp_path / "q.svg")
    svg = (tmp_path / "q.svg").read_text()
    assert svg.startswith("<svg") and svg.count("<circle") == 30 and "<line" in svg
