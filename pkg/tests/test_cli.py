import csv
import io
import json
import math
import subprocess
import sys

import pytest

from entropic_packet.cli import (
    CONFIG_ENV,
    SweepSpec,
    UsageError,
    load_config_file,
    main,
    render_sweep,
)
from entropic_packet.entropy import ENTROPY_BOUND
from entropic_packet.errors import DomainError

HEADER = "alpha,s_x,s_p,u_total,gap"
STARVED = "max_levels=3\nmax_subdivisions=4\nrel_tol=1e-14\n"
LOOSE = "max_levels=3\nmax_subdivisions=4\nrel_tol=1e-2\nabs_tol=1e-2\n"


@pytest.fixture
def starved(tmp_path):
    path = tmp_path / "starved.cfg"
    path.write_text(STARVED)
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def parse_compute(text):
    fields = {}
    for line in text.splitlines():
        key, _, value = line.rpartition("  ")
        fields[key.strip()] = value.strip()
    return fields


@pytest.fixture(scope="module")
def default_sweep():
    buf = io.StringIO()
    old = sys.stdout
    sys.stdout = buf
    try:
        code = main(["sweep", "--jobs", "4"])
    finally:
        sys.stdout = old
    return code, buf.getvalue()


class TestCompute:
    def test_alpha_two(self, capsys):
        code, out, _ = run(capsys, "compute", "--alpha", "2")
        assert code == 0
        fields = parse_compute(out)
        assert float(fields["U"]) == pytest.approx(2.2242, abs=1e-4)
        assert float(fields["gap"]) == pytest.approx(0.0795, abs=1e-4)
        assert float(fields["bound 1+ln(pi)"]) == pytest.approx(ENTROPY_BOUND, abs=1e-5)
        assert fields["<X^2>"] == "1"
        assert fields["<P^2>"] == "0.5"

    def test_six_significant_digits(self, capsys):
        _, out, _ = run(capsys, "compute", "--alpha", "2")
        assert parse_compute(out)["S_x"] == "1.22417"

    def test_cauchy_divergent(self, capsys):
        code, out, _ = run(capsys, "compute", "--alpha", "1")
        assert code == 0
        fields = parse_compute(out)
        assert fields["<X^2>"] == "divergent"
        assert fields["dX*dP"] == "divergent"
        assert math.isfinite(float(fields["U"]))

    @pytest.mark.parametrize("alpha", ["0.4", "0.5", "-1"])
    def test_not_normalizable(self, capsys, alpha):
        code, _, err = run(capsys, "compute", "--alpha", alpha)
        assert code == 2
        assert "alpha must exceed 1/2" in err

    def test_near_edge_warning_line(self, capsys):
        code, out, _ = run(capsys, "compute", "--alpha", "0.53")
        assert code == 0
        assert "relaxed" in parse_compute(out)["warning"]

    def test_non_convergence(self, capsys, starved):
        code, _, err = run(capsys, "compute", "--alpha", "2", "--config", starved)
        assert code == 3
        assert "non-convergence" in err

    def test_missing_alpha_is_usage_error(self, capsys):
        with pytest.raises(SystemExit) as info:
            main(["compute"])
        assert info.value.code == 2


class TestSweep:
    def test_default_grid(self, default_sweep):
        code, text = default_sweep
        assert code == 0
        lines = text.splitlines()
        assert lines[0] == HEADER
        rows = list(csv.DictReader(io.StringIO(text)))
        assert len(rows) == 95
        alphas = [float(r["alpha"]) for r in rows]
        assert alphas[0] == 0.6 and alphas[-1] == 10.0
        assert all(b > a for a, b in zip(alphas, alphas[1:]))
        u = [float(r["u_total"]) for r in rows]
        assert all(b < a for a, b in zip(u, u[1:]))
        assert all(float(r["gap"]) >= 0 for r in rows)

    def test_twelve_significant_digits(self, default_sweep):
        row = next(csv.DictReader(io.StringIO(default_sweep[1])))
        digits = row["s_x"].lstrip("-").replace(".", "").lstrip("0")
        assert len(digits) <= 12
        assert float(row["s_x"]) == pytest.approx(7.75672517250, abs=1e-10)

    def test_single_point_matches_compute(self, capsys):
        code, out, _ = run(capsys, "sweep", "--alpha-min", "2", "--alpha-max", "2", "--step", "1")
        assert code == 0
        rows = list(csv.DictReader(io.StringIO(out)))
        assert len(rows) == 1
        _, computed, _ = run(capsys, "compute", "--alpha", "2")
        fields = parse_compute(computed)
        assert float(rows[0]["u_total"]) == pytest.approx(float(fields["U"]), rel=1e-5)
        assert float(rows[0]["s_p"]) == pytest.approx(1.0, abs=1e-9)

    def test_json_mirrors_csv(self, capsys):
        argv = ["sweep", "--alpha-min", "1", "--alpha-max", "2", "--step", "0.5"]
        _, csv_text, _ = run(capsys, *argv)
        _, json_text, _ = run(capsys, *argv, "--format", "json")
        records = json.loads(json_text)
        assert [list(r) for r in records] == [HEADER.split(",")] * 3
        rows = list(csv.DictReader(io.StringIO(csv_text)))
        for record, row in zip(records, rows):
            assert all(record[k] == float(row[k]) for k in row)

    def test_deterministic_bytes(self, capsys):
        argv = ["sweep", "--alpha-min", "0.7", "--alpha-max", "3", "--step", "0.25"]
        first = run(capsys, *argv)[1]
        second = run(capsys, *argv)[1]
        parallel = run(capsys, *argv, "--jobs", "3")[1]
        assert first.encode() == second.encode() == parallel.encode()

    def test_out_file(self, capsys, tmp_path):
        target = tmp_path / "sweep.csv"
        code, out, _ = run(capsys, "sweep", "--alpha-min", "2", "--alpha-max", "3", "--step", "0.5", "--out", str(target))
        assert code == 0 and out == ""
        assert target.read_text().splitlines()[0] == HEADER
        assert [p.name for p in tmp_path.iterdir()] == ["sweep.csv"]

    def test_no_partial_file_on_failure(self, capsys, tmp_path):
        target = tmp_path / "out" / "sweep.csv"
        target.parent.mkdir()
        cfg = tmp_path / "starved.cfg"
        cfg.write_text(STARVED)
        code, _, _ = run(
            capsys, "sweep", "--alpha-min", "1", "--alpha-max", "2", "--step", "0.5",
            "--out", str(target), "--config", str(cfg),
        )
        assert code == 3
        assert list(target.parent.iterdir()) == []

    @pytest.mark.parametrize("argv, code", [
        (["--alpha-min", "0.4"], 2),
        (["--alpha-min", "3", "--alpha-max", "2"], 2),
        (["--step", "0"], 2),
        (["--step", "1e-9"], 2),
    ])
    def test_bad_specs(self, capsys, argv, code):
        assert run(capsys, "sweep", *argv)[0] == code


class TestSweepSpec:
    def test_grid_is_rounded(self):
        assert SweepSpec(0.6, 1.0, 0.1).grid() == [0.6, 0.7, 0.8, 0.9, 1.0]

    def test_domain(self):
        with pytest.raises(DomainError):
            SweepSpec(0.5, 1.0, 0.1)

    def test_point_limit(self):
        with pytest.raises(UsageError):
            SweepSpec(0.6, 2e6, 1.0)

    def test_render_empty_csv(self):
        assert render_sweep([], "csv") == HEADER + "\n"


class TestVerify:
    def test_defaults_pass(self, capsys):
        code, out, _ = run(capsys, "verify")
        assert code == 0
        assert out.count("all_pass = True") == 6
        assert "FAIL" not in out

    def test_cauchy_fourier_entries(self, capsys):
        code, out, _ = run(capsys, "verify", "--alpha", "1")
        assert code == 0
        assert "fourier_p=0.5" in out and "fourier_p=5" in out

    def test_json(self, capsys):
        code, out, _ = run(capsys, "verify", "--alpha", "2", "--alpha", "3", "--format", "json")
        assert code == 0
        reports = json.loads(out)
        assert [r["alpha"] for r in reports] == [2.0, 3.0]
        entry = reports[0]["entries"][0]
        assert set(entry) == {"name", "reference", "oracle", "abs_diff", "tolerance", "pass"}

    def test_bad_alpha(self, capsys):
        assert run(capsys, "verify", "--alpha", "0.3")[0] == 2

    def test_failure_exit_code(self, capsys, starved):
        code, out, _ = run(capsys, "verify", "--alpha", "2", "--config", starved)
        assert code == 1
        assert "FAIL" in out


class TestConfig:
    def test_file_parsing(self, tmp_path):
        path = tmp_path / "q.cfg"
        path.write_text("# tolerances\nrel_tol = 1e-9\n\nmax-levels=10  # fewer halvings\n")
        assert load_config_file(path) == {"rel_tol": 1e-9, "max_levels": 10}

    @pytest.mark.parametrize("body", ["bogus=1\n", "rel_tol\n", "max_levels=ten\n"])
    def test_file_errors(self, capsys, tmp_path, body):
        path = tmp_path / "q.cfg"
        path.write_text(body)
        assert run(capsys, "compute", "--alpha", "2", "--config", str(path))[0] == 2

    def test_invalid_tolerance(self, capsys):
        assert run(capsys, "compute", "--alpha", "2", "--rel-tol", "-1")[0] == 2

    def test_env_file_applies(self, capsys, starved, monkeypatch):
        monkeypatch.setenv(CONFIG_ENV, starved)
        assert run(capsys, "compute", "--alpha", "2")[0] == 3

    def test_flag_overrides_file(self, capsys, tmp_path, monkeypatch):
        path = tmp_path / "loose.cfg"
        path.write_text(LOOSE)
        monkeypatch.setenv(CONFIG_ENV, str(path))
        assert run(capsys, "compute", "--alpha", "2")[0] == 0
        assert run(capsys, "compute", "--alpha", "2", "--rel-tol", "1e-14", "--abs-tol", "1e-14")[0] == 3

    def test_explicit_config_beats_env(self, capsys, tmp_path, starved, monkeypatch):
        good = tmp_path / "good.cfg"
        good.write_text("rel_tol=1e-10\n")
        monkeypatch.setenv(CONFIG_ENV, starved)
        assert run(capsys, "compute", "--alpha", "2", "--config", str(good))[0] == 0


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "entropic_packet", "compute", "--alpha", "0.4"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 2
    assert proc.stderr.startswith("entropic-packet:")
