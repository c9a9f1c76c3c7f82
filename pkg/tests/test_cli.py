import json

import pytest

from odometer_rqa import __version__
from odometer_rqa.cli import RunConfig, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_integral_inf_example(capsys):
    code, out, _ = run(capsys, "integral", "--alpha", "1/3", "--ell", "inf", "--eps", "1-a^2", "--tol", "0.01")
    assert code == 0
    data = json.loads(out)
    assert abs(float(data["value"]["decimal"]) - 0.5) <= 0.01
    assert data["value"]["exact"] == "129/256"
    assert data["k_used"] == 9 and data["version"] == __version__
    assert data["config"]["eps"] == "1 - a^2"


def test_integral_det_and_exact_level(capsys):
    _, out, _ = run(capsys, "integral", "--alpha", "1/3", "--eps", "1-a+a^2", "--det")
    assert abs(float(json.loads(out)["value"]["decimal"]) - 4 / 7) <= 0.01
    _, out, _ = run(capsys, "integral", "--alpha", "1/3", "--eps", "a", "--k", "8")
    data = json.loads(out)
    assert data["value"]["exact"] == "1/2" and data["error_radius"]["exact"] == "0"


def test_domain_error_exit_code(capsys):
    code, _, err = run(capsys, "integral", "--alpha", "3/5", "--eps", "a")
    assert code == 2 and "alpha must lie in (0, 1/2)" in err
    code, _, err = run(capsys, "integral", "--alpha", "1/3", "--eps", "sin(a)")
    assert code == 2


def test_unreachable_tolerance_exit_code(capsys):
    code, _, err = run(capsys, "integral", "--alpha", "1/3", "--eps", "a^20", "--tol", "1e-9")
    assert code == 3 and "best radius" in err


def test_bad_subcommand_exits_2():
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


def test_verify_all_pass(capsys):
    code, out, _ = run(capsys, "verify", "--k", "8", "--alpha", "1/3", "--eps", "a")
    assert code == 0 and json.loads(out)["all_hold"]


def test_orbit_csv(tmp_path, capsys):
    path = tmp_path / "orbit.csv"
    assert main(["orbit", "--alpha", "1/3", "--n", "4", "--out", str(path)]) == 0
    lines = path.read_text().splitlines()
    assert lines[0].startswith(f"# odometer-rqa {__version__} ")
    assert lines[1] == "iter,x,x_exact"
    assert lines[3] == "1,0.6666666666666666,2/3"
    cfg = RunConfig.from_canonical(lines[0].split(" ", 3)[3])
    assert cfg.subcommand == "orbit" and cfg.options["alpha"] == "1/3"


def test_matrix_outputs(tmp_path, capsys):
    pbm, js = tmp_path / "m.pbm", tmp_path / "m.json"
    code, out, _ = run(capsys, "matrix", "--alpha", "1/3", "--k", "4", "--eps", "a", "--pbm", str(pbm), "--json", str(js))
    assert code == 0
    assert pbm.read_bytes().startswith(b"P4\n# odometer-rqa")
    header, body = js.read_text().splitlines()
    assert header.startswith("# odometer-rqa") and json.loads(body)["ones_count"] == 128
    assert json.loads(out)["ones_count"] == 128


def test_outputs_are_reproducible(tmp_path, capsys):
    paths = []
    for i in range(2):
        csv = tmp_path / f"p{i}.csv"
        svg = tmp_path / f"p{i}.svg"
        main(["profile", "--alpha", "2/5", "--points", "32", "--tol", "0.02", "--csv", str(csv), "--svg", str(svg)])
        paths.append((csv.read_bytes(), svg.read_bytes()))
    capsys.readouterr()
    assert paths[0] == paths[1]
    assert paths[0][0].splitlines()[1] == b"eps,det,err,flag"


def test_extremes_and_bench(capsys):
    code, out, _ = run(capsys, "extremes", "--alpha", "1/5", "--tol", "0.01")
    data = json.loads(out)
    assert code == 0 and abs(float(data["utdet"]["value"]["decimal"]) - 8 / 15) <= 0.01
    code, out, _ = run(capsys, "bench", "--k-min", "6", "--k-max", "8")
    data = json.loads(out)
    assert code == 0 and data["all_agree"] and all(r["agree"] for r in data["rows"])


def test_bench_refuses_naive_beyond_cap(capsys):
    code, out, _ = run(capsys, "bench", "--k-min", "20", "--k-max", "20", "--eps", "a^2")
    row = json.loads(out)["rows"][0]
    assert code == 0 and row["naive"].startswith("refused") and row["row_one_count"] == row["fast_count"]


def test_scan_alpha_upper_end(capsys):
    code, out, _ = run(capsys, "scan-alpha", "--target", "8/15", "--tol", "0.01")
    data = json.loads(out)
    assert code == 0 and data["alpha"]["exact"] == "1/3"
    assert abs(float(data["utdet"]["value"]["decimal"]) - 8 / 15) <= 0.01
