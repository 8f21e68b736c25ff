import fractions
import os
import subprocess

import pytest

import rttlab


def complete(n):
    return rttlab.Graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def test_graph_roundtrip():
    k4 = complete(4)
    assert k4.order == 4
    assert k4.edge_count == 6
    assert k4.to_graph6() == "C~"
    assert rttlab.Graph.from_graph6("C~") == k4
    assert rttlab.Graph.from_edge_list(k4.to_edge_list()) == k4
    with pytest.raises(ValueError):
        rttlab.Graph.from_graph6("C")


def test_file_roundtrip(tmp_path):
    g, _ = rttlab.generate("g0:n=10,eta=3/10")
    path = str(tmp_path / "g.g6")
    rttlab.write_graph(path, g)
    assert rttlab.read_graph(path) == g
    assert g.min_degree() == 3


def test_tiling_on_disjoint_cliques():
    g, records = rttlab.generate("cliques:sizes=8+8")
    assert records[0]["verified"]
    k3 = rttlab.Pattern("K3")
    solved = rttlab.max_tiling(g, k3)
    assert solved["optimal"]
    assert len(solved["uncovered"]) == 4
    assert rttlab.has_factor(g, k3) == "no"
    gap = rttlab.quasiperfect_gap(g, k3, fractions.Fraction(2, 5))
    assert gap["allowance"] == 4
    assert gap["quasiperfect"] == "yes"


def test_independence():
    g, _ = rttlab.generate("cliques:sizes=8+8")
    assert rttlab.alpha_r(g, 2)["value"] == 2
    hole = rttlab.alpha_star_r(g, 2)
    assert hole["value"] == 8
    assert hole["exact"]


def test_blocker_has_no_triangle_factor():
    g, records = rttlab.generate("blocker:n=18,d=4,seed=2")
    assert records[0]["metrics"]["cross_triangles"] == "0"
    assert rttlab.has_factor(g, rttlab.Pattern("K3")) == "no"


def test_spectrum_and_templates():
    spec = rttlab.second_eigenvalue(complete(6))
    assert abs(spec["lambda"] - 1.0) < 1e-6
    t = rttlab.montgomery_template(3, "1/2", seed=4)
    assert t["verified"] and t["exhaustive"]
    assert t["subsets_checked"] == 10


def test_absorption_and_partition():
    k3 = rttlab.Pattern("K3")
    k9 = complete(9)
    assert rttlab.verify_absorber(k9, k3, [0, 1, 2], [3, 4, 5]) == "yes"
    with pytest.raises(ValueError):
        rttlab.verify_absorber(k9, k3, [0, 1], [3, 4, 5])
    assert len(rttlab.connectors(complete(12), k3, 0, 1, target=10)) == 5
    a = rttlab.build_absorbing_set(complete(30), k3, gamma="4/5", seed=7)
    assert len(a["vertices"]) == 21
    two, _ = rttlab.generate("cliques:sizes=9+9")
    assert len(rttlab.partition(two, k3, "1/10")["parts"]) == 2
    assert len(rttlab.partition(complete(18), k3, "1/10")["parts"]) == 1


def test_experiment(tmp_path):
    rows = rttlab.run_experiment(
        "construction = blocker:n={n},d=4,seed=1\nsweep.n = 12,18\nmeasure_alpha = false\n",
        str(tmp_path / "rows.csv"),
    )
    assert [r["factor"] for r in rows] == ["no", "no"]
    assert (tmp_path / "rows.csv").exists()


def test_cli_exit_codes(tmp_path):
    cli = os.environ.get("RTT_CLI")
    if not cli:
        pytest.skip("RTT_CLI not set")
    run = lambda *args: subprocess.run([cli, *args], capture_output=True, text=True)
    assert run("generate", "g0:n=10,eta=3/10").returncode == 0
    assert run("nonsense").returncode == 1
    assert run("verify-absorber", "cliques:sizes=9", "--s", "0,1,2", "--a", "3,4,5").returncode == 0
    assert run("verify-absorber", "cliques:sizes=3+3", "--s", "0,1,3", "--a", "2,4,5").returncode == 2
    assert run("solve", "cliquefree:n=40,r=3,alpha=1,seed=2", "--budget", "50").returncode == 3
    csv = tmp_path / "empty.csv"
    csv.write_text("")
    assert run("report", str(csv)).returncode == 0
