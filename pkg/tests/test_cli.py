import json
import math

import pytest

from renewal_dst import q_cdf, tv_to_limit
from renewal_dst.cli import main


def run(tmp_path, *argv):
    out = tmp_path / "out.txt"
    code = main([*argv, "--out", str(out)])
    return code, out.read_bytes() if out.exists() else b""


def test_limit_law_table(tmp_path):
    code, data = run(tmp_path, "limit-law", "--eta", "0")
    assert code == 0
    lines = data.decode().strip().split("\n")
    assert lines[0].startswith("# command=limit-law")
    assert "seed=20070201" in lines[0]
    assert lines[1] == "x,cdf,pmf,tail"
    body = [line.split(",") for line in lines[2:]]
    assert len(body) == 16
    cdfs = [float(r[1]) for r in body]
    assert all(b >= a for a, b in zip(cdfs, cdfs[1:]))


def test_limit_law_eta_translate(tmp_path):
    _, d0 = run(tmp_path, "limit-law", "--eta", "0", "--n-grid", "-3:12:1")
    _, d1 = run(tmp_path, "limit-law", "--eta", "1", "--n-grid", "-2:13:1")
    rows0 = [line.split(",") for line in d0.decode().strip().split("\n")[2:]]
    rows1 = [line.split(",") for line in d1.decode().strip().split("\n")[2:]]
    for r0, r1 in zip(rows0, rows1):
        assert int(r1[0]) == int(r0[0]) + 1
        assert r1[1:] == r0[1:]


def test_limit_law_json_schema(tmp_path):
    code, data = run(tmp_path, "limit-law", "--format", "json")
    assert code == 0
    obj = json.loads(data)
    assert set(obj) == {"meta", "rows"}
    assert obj["meta"]["seed"] == 20070201
    assert all(set(r) == {"x", "cdf", "pmf", "tail"} for r in obj["rows"])
    r0 = obj["rows"][0]
    assert r0["cdf"] == q_cdf(0.0, r0["x"])


def test_limit_law_bad_eta(tmp_path):
    code, _ = run(tmp_path, "limit-law", "--eta", "1.5")
    assert code == 2


def test_depth_dist_table_and_trailer(tmp_path):
    code, data = run(tmp_path, "depth-dist", "--n", "1024")
    assert code == 0
    lines = data.decode().strip().split("\n")
    assert lines[1] == "j,exact_pmf,q_pmf,abs_diff"
    body = [line.split(",") for line in lines[2:] if not line.startswith("tv")]
    exact_sum = math.fsum(float(r[1]) for r in body)
    q_sum = math.fsum(float(r[2]) for r in body)
    assert exact_sum == pytest.approx(1.0, abs=1e-10)
    assert q_sum == pytest.approx(1.0, abs=1e-10)
    trailer = [line for line in lines if line.startswith("tv")]
    assert len(trailer) == 1
    assert float(trailer[0].split(",")[3]) == tv_to_limit(1024)[0]


def test_depth_dist_point_mass(tmp_path):
    code, data = run(tmp_path, "depth-dist", "--n", "1", "--format", "json")
    assert code == 0
    obj = json.loads(data)
    ones = [r for r in obj["rows"] if r["exact_pmf"] == 1.0]
    assert len(ones) == 1 and ones[0]["j"] == 1
    assert obj["tv"] == tv_to_limit(1)[0]


def test_depth_dist_usage_errors(tmp_path):
    assert run(tmp_path, "depth-dist")[0] == 2
    assert run(tmp_path, "depth-dist", "--n", "0")[0] == 2
    assert run(tmp_path, "depth-dist", "--n", str(2 ** 23))[0] == 2


def test_dst_demo_builtin(tmp_path):
    code, data = run(tmp_path, "dst-demo", "--probe", "011100")
    assert code == 0
    lines = data.decode().strip().split("\n")
    rows = [line.split(",") for line in lines[2:]]
    depths = [int(r[1]) for r in rows[:10]]
    assert depths == [0, 1, 1, 2, 2, 3, 3, 2, 3, 3]
    probe = rows[10]
    assert probe[0] == "probe:011100"
    assert (int(probe[1]), probe[2], probe[3]) == (4, "x_6", "right")


def test_dst_demo_corpus_file(tmp_path):
    corpus = tmp_path / "corpus.txt"
    corpus.write_text("a 0\nb 1\n")
    code, data = run(tmp_path, "dst-demo", "--corpus", str(corpus))
    assert code == 0
    assert len(data.decode().strip().split("\n")) == 4


def test_dst_demo_empty_corpus(tmp_path):
    corpus = tmp_path / "empty.txt"
    corpus.write_text("")
    code, data = run(tmp_path, "dst-demo", "--corpus", str(corpus))
    assert code == 0
    assert len(data.decode().strip().split("\n")) == 2  # meta + header only


def test_dst_demo_parse_error_exit_2(tmp_path):
    corpus = tmp_path / "bad.txt"
    corpus.write_text("a 01\nnot-a-record\n")
    code, _ = run(tmp_path, "dst-demo", "--corpus", str(corpus))
    assert code == 2


def test_dst_demo_insufficient_bits_exit_3(tmp_path):
    corpus = tmp_path / "deep.txt"
    corpus.write_text("\n".join(f"k{i} 11" for i in range(4)))
    code, _ = run(tmp_path, "dst-demo", "--corpus", str(corpus))
    assert code == 3


def test_dst_demo_bad_probe(tmp_path):
    assert run(tmp_path, "dst-demo", "--probe", "21")[0] == 2


def test_simulate_dyadic_matches_exact_trailer(tmp_path):
    code, data = run(tmp_path, "simulate", "--n-grid", "1024:1024:1",
                     "--samples", "20000")
    assert code == 0
    row = data.decode().strip().split("\n")[-1].split(",")
    assert abs(float(row[3]) - tv_to_limit(1024)[0]) <= 0.05


def test_simulate_general_alpha(tmp_path):
    code, data = run(tmp_path, "simulate", "--alpha", "3.0",
                     "--n-grid", "9:81:x3", "--samples", "4000")
    assert code == 0
    rows = [line.split(",") for line in data.decode().strip().split("\n")[2:]]
    assert len(rows) == 3
    assert all(0.0 <= float(r[3]) <= 1.0 for r in rows)


def test_simulate_usage_errors(tmp_path):
    assert run(tmp_path, "simulate", "--samples", "0")[0] == 2
    assert run(tmp_path, "simulate", "--alpha", "1.0")[0] == 2
    assert run(tmp_path, "simulate", "--n-grid", "64:16:x4")[0] == 2


def test_converge_tv_small_grid(tmp_path):
    code, data = run(tmp_path, "converge", "--kind", "tv",
                     "--n-grid", "16:4096:x4")
    assert code == 0
    lines = data.decode().strip().split("\n")
    assert lines[1] == "n,eta,kind,value,trunc_bound,ms"
    vals = [float(line.split(",")[3]) for line in lines[2:]]
    assert all(b < a for a, b in zip(vals, vals[1:]))
    assert all(line.split(",")[5] == "0" for line in lines[2:])


def test_converge_ks_small_grid(tmp_path):
    code, _ = run(tmp_path, "converge", "--kind", "ks", "--n-grid", "4:10:1")
    assert code == 0


def test_converge_grid_errors(tmp_path):
    assert run(tmp_path, "converge", "--n-grid", "64:16:1")[0] == 2
    assert run(tmp_path, "converge", "--n-grid", "16:64")[0] == 2
    assert run(tmp_path, "converge", "--kind", "ks", "--n-grid", "4:40:1")[0] == 2


def test_unknown_command_exits_2(tmp_path):
    assert main(["frobnicate"]) == 2


@pytest.mark.parametrize("argv", [
    ("limit-law", "--eta", "0.5"),
    ("limit-law", "--eta", "0.25", "--format", "json"),
    ("depth-dist", "--n", "300"),
    ("dst-demo", "--probe", "011100", "--format", "json"),
    ("simulate", "--n-grid", "16:256:x4", "--samples", "3000"),
    ("simulate", "--alpha", "2.7", "--n-grid", "16:64:x2", "--samples", "2000"),
    ("converge", "--kind", "ks", "--n-grid", "4:8:1", "--format", "json"),
    ("converge", "--kind", "tv", "--n-grid", "16:1024:x4"),
])
def test_byte_identical_reruns(tmp_path, argv):
    _, first = run(tmp_path, *argv)
    _, second = run(tmp_path, *argv)
    assert first == second and first
