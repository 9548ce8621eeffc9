import json

import numpy as np
import pytest

from pcmtradeoff.cli import main


@pytest.fixture
def workload(tmp_path):
    path = tmp_path / "w.json"
    assert main(["gen", "--topology", "feedforward:12,8,4", "--density", "0.4", "--seed", "3", "--out", str(path)]) == 0
    return path


@pytest.fixture
def hw_json(tmp_path):
    path = tmp_path / "hw.json"
    path.write_text(json.dumps({"rows": 12, "cols": 12, "tiles": 3, "pso": {"particles": 6, "epochs": 2, "iters": 5}}))
    return path


def test_gen_writes_workload(workload):
    data = json.loads(workload.read_text())
    assert data["neurons"] == 24
    assert len(data["synapses"]) == round(0.4 * 96) + round(0.4 * 32)


def test_currentmap(tmp_path, hw_json):
    out = tmp_path / "map.csv"
    assert main(["currentmap", "--hw", str(hw_json), "--out", str(out), "--png", str(tmp_path / "m.png")]) == 0
    cmap = np.loadtxt(out, delimiter=",")
    assert cmap.shape == (12, 12)
    assert cmap[11, 0] == cmap.max() and cmap[0, 11] == cmap.min()
    assert (tmp_path / "m.png").exists()


def test_explore_and_report(tmp_path, workload, hw_json):
    out = tmp_path / "run"
    args = ["explore", "--workload", str(workload), "--hw", str(hw_json), "--fitness", "time,lifetime",
            "--policy", "row_major,lifetime_first", "--seed", "5", "--no-figures", "--out", str(out)]
    assert main(args) == 0
    for name in ("archive.csv", "pareto.csv", "summary.json", "currentmap.csv", "clusters.json"):
        assert (out / name).exists()
    summary = json.loads((out / "summary.json").read_text())
    assert set(summary["best_per_fitness"]) == {"time", "lifetime"}
    body = (out / "archive.csv").read_text().splitlines()
    assert body[1].startswith("mapping_id,")
    # config gives 6 particles x (1 + 2 epochs x 5 steps) evaluations per run at most
    assert len(body) - 2 <= 4 * 6 * 11
    # flags beat config
    out2 = tmp_path / "run2"
    assert main(args[:-1] + [str(out2), "--particles", "3"]) == 0
    assert len((out2 / "archive.csv").read_text().splitlines()) - 2 <= 4 * 3 * 11

    rep = tmp_path / "rep"
    assert main(["report", "--archive", str(out / "archive.csv"), "--hw", str(hw_json), "--out", str(rep)]) == 0
    assert (rep / "archive.csv").read_text().splitlines()[1:] == body[1:]
    assert (rep / "tradeoff.png").exists()


def test_errors_exit_nonzero(tmp_path, capsys, hw_json):
    assert main(["explore", "--workload", str(tmp_path / "missing.json"), "--out", str(tmp_path / "o")]) == 1
    err = capsys.readouterr().err.strip()
    assert err.startswith("pcmtradeoff explore: error:") and "\n" not in err
    assert main(["gen", "--topology", "blob:3", "--out", str(tmp_path / "x.json")]) == 1
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"pso": {"warp": 9}}))
    wl = tmp_path / "w.json"
    wl.write_text('{"neurons": 2, "synapses": [{"pre": 0, "post": 1, "weight": 1, "spikes": 2}]}')
    assert main(["explore", "--workload", str(wl), "--hw", str(bad), "--out", str(tmp_path / "o")]) == 1
    with pytest.raises(SystemExit):
        main(["explore", "--workload", str(wl), "--fitness", "accuracy", "--out", str(tmp_path / "o")])
