import csv
import json

import pytest

from lerwlab.cli import SCHEMA, ExperimentManifest, main, run, validate


def test_validate_examples():
    assert validate(ExperimentManifest("mk", {"m": 10, "n": 10, "N": 20}))
    assert validate(ExperimentManifest("es", {"n": 0})) == []
    assert validate(ExperimentManifest("es", {"n": 4}, trials=0))
    assert validate(ExperimentManifest("nonsense"))
    assert validate(ExperimentManifest("es-mn", {"m": 8, "n": 4}))
    assert validate(ExperimentManifest("tails", {"lambda_grid": [0.5, 1]}))
    assert validate(ExperimentManifest("growth", {"n": [8, 16]}))
    assert validate(ExperimentManifest("mu-convergence", {"m": 3}))
    assert validate(ExperimentManifest("separation", {"n": [4]}))


def test_invalid_manifest_exit_status(tmp_path, capsys):
    assert main(["mk", "--m", "10", "--n", "10", "--N", "20", "--out", str(tmp_path)]) == 2
    assert "sqrt(2)" in capsys.readouterr().err
    with pytest.raises(ValueError):
        run(ExperimentManifest("es", {"n": 4}, trials=0, out=str(tmp_path)))


def test_oracle_check_summary(tmp_path):
    out = tmp_path / "o"
    assert main(["oracle-check", "--n", "1", "--seed", "3", "--out", str(out)]) == 0
    s = json.loads((out / "summary.json").read_text())
    assert s["schema"] == SCHEMA and s["passed"] and s["seed"] == 3
    names = {e["name"] for e in s["estimates"]}
    assert "tv_mc_vs_exact" in names
    for e in s["estimates"]:
        assert e["se"] == "exact" or isinstance(e["se"], float)
    assert not (out / "plot.svg").exists()


def test_es_zero_is_exact(tmp_path):
    assert main(["es", "--n", "0", "--trials", "10", "--out", str(tmp_path)]) == 0
    rows = list(csv.DictReader(open(tmp_path / "results.csv")))
    assert rows == [{"name": "Es", "value": "1.0", "se": "exact", "trials": "0", "extra": "n=0"}]


def test_failing_assertion_named(tmp_path):
    status = main(["moments", "--n", "8", "--trials", "2000", "--k", "3", "--out", str(tmp_path)])
    s = json.loads((tmp_path / "summary.json").read_text())
    assert status == 0 and s["failed"] == []
    m = ExperimentManifest("wilson", {"n": 2}, trials=300, seed=1, out=str(tmp_path / "w"))
    assert run(m) == 1
    s = json.loads((tmp_path / "w" / "summary.json").read_text())
    assert s["failed"] == ["branch law TV < 0.02"]


def test_growth_plot(tmp_path):
    main(["growth", "--n", "8,16,32", "--trials", "2000", "--out", str(tmp_path)])
    svg = (tmp_path / "plot.svg").read_text()
    assert svg.startswith("<svg") and "slope" in svg and svg.count("<circle") == 3


def test_manifest_file_and_flag_override(tmp_path):
    man = ExperimentManifest("es", {"n": [1, 2]}, trials=5000, seed=4, out=str(tmp_path / "a"))
    path = tmp_path / "m.json"
    path.write_text(man.to_json())
    assert ExperimentManifest.from_json(path.read_text()) == man
    main(["es", "--manifest", str(path)])
    main(["es", "--manifest", str(path), "--n", "3", "--out", str(tmp_path / "b")])
    a = list(csv.DictReader(open(tmp_path / "a" / "results.csv")))
    b = list(csv.DictReader(open(tmp_path / "b" / "results.csv")))
    assert [r["extra"] for r in a] == ["n=1", "n=2"] and [r["extra"] for r in b] == ["n=3"]
    assert main(["tails", "--manifest", str(path)]) == 2


@pytest.mark.parametrize("kind,args", [
    ("es", ["--n", "2,4,8"]),
    ("moments", ["--n", "8"]),
    ("tails", ["--n", "8", "--lambda-grid", "1,1.5,2,3"]),
    ("wilson", ["--n", "2"]),
    ("mk", ["--m", "1", "--n", "2", "--N", "5"]),
])
def test_byte_identical_across_workers(tmp_path, kind, args):
    base = [kind, *args, "--trials", "9000", "--seed", "11"]
    main(base + ["--workers", "1", "--out", str(tmp_path / "w1")])
    main(base + ["--workers", "2", "--out", str(tmp_path / "w2")])
    main(base + ["--workers", "1", "--out", str(tmp_path / "again")])
    one = (tmp_path / "w1" / "results.csv").read_bytes()
    assert one == (tmp_path / "w2" / "results.csv").read_bytes()
    assert one == (tmp_path / "again" / "results.csv").read_bytes()


def test_every_kind_validates_with_defaults():
    for kind in ("oracle-check", "es", "es-mn", "hat-es", "moments", "tails", "growth", "separation",
                 "mu-convergence", "mk", "wilson", "green-checks"):
        assert validate(ExperimentManifest(kind)) == [], kind
