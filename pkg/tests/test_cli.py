import pytest

from randomfacet import cli, dumps_instance, loads_instance, validate_instance


@pytest.fixture()
def errata_file(errata, tmp_path):
    path = tmp_path / "errata.instance"
    path.write_text(dumps_instance(errata))
    return str(path)


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestSolve:
    def test_errata_solution(self, capsys, errata_file):
        code, out, _ = run_cli(capsys, "solve", errata_file)
        assert code == 0
        assert out == "x x0 0\ny y0 0\nz z0 0\n"

    def test_single_edge_instance(self, capsys, tmp_path):
        path = tmp_path / "one.instance"
        path.write_text("target t\nedge 0 v t 5\n")
        code, out, _ = run_cli(capsys, "solve", str(path))
        assert code == 0
        assert out == "v v0 5\n"

    def test_restricted_facets(self, capsys, errata_file):
        code, out, _ = run_cli(capsys, "solve", errata_file, "--facets", "x0,y1,z0,z1")
        assert code == 0
        assert "y y1 2" in out

    def test_negative_cycle_exits_2(self, capsys, tmp_path):
        path = tmp_path / "bad.instance"
        path.write_text("target t\nedge 0 v v -1\nedge 1 v t 0\n")
        code, _, err = run_cli(capsys, "solve", str(path))
        assert code == 2
        assert "negative-cost cycle" in err


class TestExact:
    def test_rf_from_001(self, capsys, errata_file):
        code, out, _ = run_cli(capsys, "exact", errata_file, "--rule", "rf", "--tree", "x0,y0,z1")
        assert (code, out) == (0, "7/3\n")

    def test_rfstar_from_111(self, capsys, errata_file):
        code, out, _ = run_cli(capsys, "exact", errata_file, "--rule", "rfstar", "--tree", "x1,y1,z1")
        assert (code, out) == (0, "43/12\n")

    def test_numeric_ids_accepted(self, capsys, errata_file):
        code, out, _ = run_cli(capsys, "exact", errata_file, "--rule", "rf", "--tree", "0,2,5")
        assert (code, out) == (0, "7/3\n")

    def test_tree_equals_facets_prints_zero(self, capsys, errata_file):
        code, out, _ = run_cli(
            capsys, "exact", errata_file, "--rule", "rf", "--tree", "x0,y0,z1",
            "--facets", "x0,y0,z1",
        )
        assert (code, out) == (0, "0/1\n")

    def test_enum_bound_override(self, capsys, errata_file, monkeypatch):
        monkeypatch.setenv("RANDOMFACET_ENUM_BOUND", "3")
        code, _, err = run_cli(capsys, "exact", errata_file, "--rule", "rfstar", "--tree", "x0,y0,z1")
        assert code == 2
        assert "enumeration bound" in err

    def test_unknown_edge_name(self, capsys, errata_file):
        code, _, err = run_cli(capsys, "exact", errata_file, "--rule", "rf", "--tree", "q7")
        assert code == 2
        assert "unknown edge" in err

    def test_non_generic_instance_exits_2(self, capsys, tmp_path):
        path = tmp_path / "tied.instance"
        path.write_text("target t\nedge 0 v t 9\nedge 1 v t 3\nedge 2 v t 3\n")
        code, _, err = run_cli(capsys, "exact", str(path), "--rule", "rf", "--tree", "1")
        assert code == 2
        assert "optimal tree" in err


class TestSimulate:
    def test_reference_tolerance(self, capsys, errata_file):
        code, out, _ = run_cli(
            capsys, "simulate", errata_file, "--rule", "rf", "--tree", "x0,y0,z1",
            "--trials", "2000", "--seed", "7",
        )
        assert code == 0
        mean = float(out.split()[0].split("=")[1])
        assert abs(mean - 7 / 3) < 0.1

    def test_zero_trials_exit_2(self, capsys, errata_file):
        code, _, err = run_cli(
            capsys, "simulate", errata_file, "--rule", "rf", "--tree", "x0,y0,z1",
            "--trials", "0", "--seed", "1",
        )
        assert code == 2
        assert "trial" in err

    def test_same_seed_same_line(self, capsys, errata_file):
        args = ("simulate", errata_file, "--rule", "rfstar", "--tree", "x0,y0,z1",
                "--trials", "300", "--seed", "12")
        _, first, _ = run_cli(capsys, *args)
        _, second, _ = run_cli(capsys, *args)
        assert first == second
        assert first.startswith("mean=") and "trials=300 seed=12" in first


class TestComptree:
    def test_text_contains_the_five_eighths_annotation(self, capsys, errata_file):
        code, out, _ = run_cli(
            capsys, "comptree", errata_file, "--rule", "rfstar", "--tree", "x0,y0,z1",
        )
        assert code == 0
        assert "5/8" in out

    def test_dot_format(self, capsys, errata_file):
        code, out, _ = run_cli(
            capsys, "comptree", errata_file, "--rule", "rf", "--tree", "x0,y0,z1",
            "--format", "dot",
        )
        assert code == 0
        assert out.startswith("digraph comptree {")
        assert "1/3" in out

    def test_tree_equals_facets_single_leaf(self, capsys, errata_file):
        code, out, _ = run_cli(
            capsys, "comptree", errata_file, "--rule", "rf", "--tree", "x0,y0,z1",
            "--facets", "x0,y0,z1",
        )
        assert code == 0
        lines = [l for l in out.splitlines() if not l.startswith("#")]
        assert len(lines) == 2  # root plus one leaf
        assert lines[1].split()[2:] == ["leaf", "-", "1/1", "0"]


class TestPerms:
    def test_count_150(self, capsys):
        code, out, _ = run_cli(
            capsys, "perms", "count", "--elements", "6", "--given", "z0<x1,z0<y1,y0<x1",
        )
        assert (code, out) == (0, "150\n")

    def test_cond_two_thirds(self, capsys):
        code, out, _ = run_cli(
            capsys, "perms", "cond", "--elements", "3", "--given", "2<3", "--query", "1<3",
        )
        assert (code, out) == (0, "2/3\n")

    def test_count_unconstrained(self, capsys):
        code, out, _ = run_cli(capsys, "perms", "count", "--elements", "3")
        assert (code, out) == (0, "6\n")


class TestVerifyErrata:
    def test_fresh_checkout_passes(self, capsys):
        code, out, _ = run_cli(capsys, "verify-errata")
        assert code == 0
        lines = [l for l in out.splitlines() if l.startswith("CHECK ")]
        assert len(lines) >= 12
        assert all(l.endswith(" PASS") for l in lines)

    def test_perturbed_fixture_fails(self, capsys, errata, monkeypatch):
        text = dumps_instance(errata).replace("edge 1 x z 1", "edge 1 x z 2")
        bad = validate_instance(loads_instance(text))
        monkeypatch.setattr(cli, "_load_errata", lambda: bad)
        code, out, _ = run_cli(capsys, "verify-errata")
        assert code == 1
        assert " FAIL" in out

    def test_missing_fixture_falls_back_to_derivation(self, capsys, errata, monkeypatch):
        def missing():
            raise FileNotFoundError("gone")

        derived = []

        def fake_derive():
            derived.append(True)
            return errata

        monkeypatch.setattr(cli, "_load_errata", missing)
        monkeypatch.setattr(cli, "_derive_errata", fake_derive)
        code, out, _ = run_cli(capsys, "verify-errata")
        assert code == 0
        assert derived == [True]
        assert "deriving" in out


class TestEntryPoint:
    def test_console_script_runs(self):
        import subprocess
        import sys

        proc = subprocess.run(
            [sys.executable, "-m", "randomfacet.cli"],
            capture_output=True,
            text=True,
        )
        # bare invocation is a usage error
        assert proc.returncode == 2
