import json

from quotcoh.cli import main


def run(capsys, *argv):
    status = main(list(argv))
    captured = capsys.readouterr()
    return status, captured.out, captured.err


class TestToricCommand:
    def test_5_2(self, capsys):
        status, out, _ = run(capsys, "toric", "--p", "5", "--weights", "1,2")
        assert status == 0
        data = json.loads(out)
        assert data["chain"] == [-3, -2]
        assert data["det"] == 5
        assert data["regular"] is True
        assert len(data["rays_added"]) == 2

    def test_three_dimensional(self, capsys):
        status, out, _ = run(capsys, "toric", "--p", "3", "--weights", "1,1,2")
        assert status == 0
        data = json.loads(out)
        assert data["regular"] is True
        assert "chain" not in data

    def test_bad_weights(self, capsys):
        status, _, err = run(capsys, "toric", "--p", "4", "--weights", "1,1")
        assert status == 2
        assert "error" in json.loads(err)


class TestProfileCommand:
    def test_round_trip(self, capsys, tmp_path):
        path = tmp_path / "in.json"
        path.write_text(json.dumps({"p": 5, "action": [[1, 0], [0, 1]]}))
        status, out, _ = run(capsys, "profile", "--input", str(path))
        assert status == 0
        assert json.loads(out)["counts"] == {"1": 2}

    def test_rejects_non_order_p(self, capsys, tmp_path):
        path = tmp_path / "in.json"
        path.write_text(json.dumps({"p": 5, "action": [[2]]}))
        status, _, err = run(capsys, "profile", "--input", str(path))
        assert status == 2


class TestLatticeCommand:
    def test_hyperbolic_plane(self, capsys, tmp_path):
        path = tmp_path / "u.json"
        path.write_text(json.dumps({"gram": [[0, 1], [1, 0]]}))
        status, out, _ = run(capsys, "lattice", "--input", str(path))
        data = json.loads(out)
        assert status == 0
        assert data["discriminant"] == 1
        assert data["signature"] == [1, 1]
        assert data["discriminant_group"] == []


class TestQuotientCommand:
    def test_pushforward_trivial(self, capsys, tmp_path):
        path = tmp_path / "gl.json"
        path.write_text(
            json.dumps(
                {
                    "p": 5,
                    "gram": [[0, 1], [1, 0]],
                    "action": [[1, 0], [0, 1]],
                    "allow_trivial": True,
                }
            )
        )
        status, out, _ = run(capsys, "quotient", "pushforward", "--input", str(path))
        assert status == 0
        assert json.loads(out)["gram"] == [[0, 5], [5, 0]]

    def test_report(self, capsys, tmp_path):
        inv = {
            "p": 5,
            "n": 2,
            "eta": 4,
            "degrees": [
                {"k": 0, "rank": 1, "l_plus": 1},
                {"k": 1, "rank": 0},
                {"k": 2, "rank": 22, "l_plus": 2, "l_pf": 4},
                {"k": 3, "rank": 0},
                {"k": 4, "rank": 1, "l_plus": 1},
            ],
        }
        path = tmp_path / "inv.json"
        path.write_text(json.dumps(inv))
        status, out, _ = run(capsys, "quotient", "report", "--input", str(path))
        assert status == 0
        data = json.loads(out)
        assert data["degenerate"] is True
        assert data["odd_torsion_pairs"] == {"1": 2}


class TestHilbertCommand:
    def test_p7_m2(self, capsys):
        status, out, _ = run(capsys, "hilbert", "--p", "7", "--m", "2")
        assert status == 0
        data = json.loads(out)
        assert data["eta"] == 9
        assert data["t3_plus_t7"] == 7
        assert data["t5"] == 3

    def test_deterministic_output(self, capsys):
        _, out1, _ = run(capsys, "hilbert", "--p", "5", "--m", "2")
        _, out2, _ = run(capsys, "hilbert", "--p", "5", "--m", "2")
        assert out1 == out2

    def test_out_of_range(self, capsys):
        status, _, err = run(capsys, "hilbert", "--p", "5", "--m", "9")
        assert status == 2

    def test_conjectural_split_is_opt_in(self, capsys):
        _, out_plain, _ = run(capsys, "hilbert", "--p", "5", "--m", "2")
        assert json.loads(out_plain)["report"]["conjectural_odd_torsion"] is None
        _, out_flagged, _ = run(capsys, "hilbert", "--p", "5", "--m", "2", "--conjectural-split")
        split = json.loads(out_flagged)["report"]["conjectural_odd_torsion"]
        assert split == {"3": 1, "5": 4, "7": 10}


class TestK3Command:
    def test_symplectic_row(self, capsys):
        status, out, _ = run(capsys, "k3", "--p", "7", "--kind", "symplectic")
        assert status == 0
        data = json.loads(out)
        assert data["singular_points"] == 3
        assert data["rank"] == 4

    def test_unknown_row(self, capsys):
        status, _, _ = run(capsys, "k3", "--p", "13")
        assert status == 2


class TestTablesCommand:
    def test_all_tables_match_golden(self, capsys):
        status, out, _ = run(capsys, "tables", "--which", "all")
        assert status == 0
        data = json.loads(out)
        assert data["all_match"] is True
        assert set(data["tables"]) == {
            "k3-symplectic", "k3-nonsymplectic", "torsion2", "betti", "bb",
        }

    def test_single_table(self, capsys):
        status, out, _ = run(capsys, "tables", "--which", "betti")
        assert status == 0
        assert json.loads(out)["tables"]["betti"]["match"] is True

    def test_text_format(self, capsys):
        status, out, _ = run(capsys, "tables", "--which", "betti", "--format", "text")
        assert status == 0
        assert "all tables match" in out

    def test_output_file(self, capsys, tmp_path):
        path = tmp_path / "out.json"
        status, out, _ = run(capsys, "tables", "--which", "betti", "--output", str(path))
        assert status == 0
        assert out == ""
        assert json.loads(path.read_text())["all_match"] is True


class TestProcessLevel:
    def test_byte_identical_across_processes(self):
        import subprocess
        import sys

        cmd = [sys.executable, "-m", "quotcoh.cli", "toric", "--p", "7", "--weights", "1,3"]
        first = subprocess.run(cmd, capture_output=True, check=True)
        second = subprocess.run(cmd, capture_output=True, check=True)
        assert first.stdout == second.stdout
        assert json.loads(first.stdout)["det"] == 7


class TestSelftestCommand:
    def test_small_rounds(self, capsys):
        status, out, _ = run(capsys, "selftest", "--seed", "3", "--rounds", "5")
        assert status == 0
        data = json.loads(out)
        assert data["all_passed"] is True

    def test_seeded_determinism(self, capsys):
        _, out1, _ = run(capsys, "selftest", "--seed", "1", "--rounds", "4")
        _, out2, _ = run(capsys, "selftest", "--seed", "1", "--rounds", "4")
        assert out1 == out2
