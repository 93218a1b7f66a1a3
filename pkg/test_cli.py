#!/usr/bin/env python3
"""
Tests for the ComplexTrees command line.
"""

import json
import math

import pytest
from typer.testing import CliRunner

from cli.main import app, run
from cli.utils import format_complex, parse_complex, parse_resolution
from complextrees.errors import InputError

runner = CliRunner()


def invoke(*args):
    result = runner.invoke(app, list(args))
    return result, result.stdout.strip().splitlines()


class TestParsing:
    @pytest.mark.parametrize(
        "text, value",
        [
            ("1.5", 1.5),
            ("0+0.5i", 0.5j),
            ("-i/2", -0.5j),
            ("i/2", 0.5j),
            ("(-1+1i)/4", complex(-0.25, 0.25)),
            ("0.3-0.2j", complex(0.3, -0.2)),
        ],
    )
    def test_complex(self, text, value):
        assert parse_complex(text) == pytest.approx(value)

    def test_bad_complex(self):
        with pytest.raises(InputError):
            parse_complex("one")
        with pytest.raises(InputError):
            parse_complex("1/0")

    def test_format(self):
        assert format_complex(1.5 + 0.5j) == "1.5+0.5i"
        assert format_complex(complex(0.0, -0.25)) == "0-0.25i"

    def test_resolution(self):
        assert parse_resolution("64x48") == (64, 48)
        with pytest.raises(InputError):
            parse_resolution("64")


class TestCommands:
    def test_tip(self):
        result, lines = invoke("tip", "--alphabet", "i/2,1/2,-i/2", "--word", "21~2")
        assert result.exit_code == 0
        assert lines == ["1.5+0.5i"]

    def test_tip_with_partial_sum(self):
        result, lines = invoke("tip", "--alphabet", "0.5,-0.5", "--word", "~1", "--terms", "60")
        assert result.exit_code == 0
        assert lines[0] == "2+0i"
        assert lines[1].startswith("partial sum (60 terms): 2")

    def test_tip_on_family(self):
        result, lines = invoke("tip", "--preset", "ternary-up", "--z", "(-1+2.6457513110645906i)/4", "--word", "11~2")
        assert result.exit_code == 0
        value = parse_complex(lines[0])
        assert abs(value) < 1e-12

    def test_dim(self):
        result, lines = invoke("dim", "--preset", "ternary-up", "--z", "0+0.5i")
        assert result.exit_code == 0
        assert float(lines[0].split("=")[1]) == pytest.approx(math.log(3) / math.log(2), abs=1e-9)
        assert lines[1] == "M2: false"

    def test_dim_on_ray(self):
        result, lines = invoke("dim", "--preset", "plusminus", "--ray", "1.0", "--alpha", "2")
        assert result.exit_code == 0
        assert float(lines[0].split(":")[1]) == pytest.approx(1 / math.sqrt(2), abs=1e-9)

    def test_pcf(self):
        result, lines = invoke("pcf", "--preset", "ternary-up")
        assert result.exit_code == 0
        words = set(lines[0].strip("{}").split(", "))
        assert words == {"~2", "1~2", "3~2"}
        assert lines[1] == "p.c.f.: true (cardinality 3)"

    def test_pcf_with_large_letters(self):
        result, lines = invoke("pcf", "--preset", "ternary-up", "--z", "0.95", "--expect", "false")
        assert result.exit_code == 0
        assert lines[1] == "p.c.f.: false (cardinality 3)"

    def test_pcf_with_small_letters(self):
        result, lines = invoke("pcf", "--preset", "ternary-up", "--z", "0+0.5i", "--expect", "true")
        assert result.exit_code == 0
        assert lines[1] == "p.c.f.: true (cardinality 3)"

    def test_verify_family(self):
        result, lines = invoke("verify-family", "--preset", "ternary-up", "--samples", "20", "--expect", "identity")
        assert result.exit_code == 0
        assert lines[-1] == "identity: true"

    def test_check_writes_certificate(self, tmp_path):
        out = tmp_path / "cert.json"
        result, lines = invoke("check", "--alphabet", "0.1,-0.1", "--out", str(out), "--expect", "Disconnected")
        assert result.exit_code == 0
        assert lines[0].startswith("Disconnected (level 1)")
        assert json.loads(out.read_text())["partition"] == [[1], [2]]

    def test_check_connected_from_relations(self):
        result, lines = invoke("check", "--preset", "ternary-up", "--z", "0+0.5i", "--expect", "connected")
        assert result.exit_code == 0
        assert lines[0].startswith("Connected")

    def test_check_escape(self):
        result, lines = invoke("check", "--alphabet", "0.1,-0.1", "--mode", "escape", "--expect", "Excluded")
        assert result.exit_code == 0

    def test_overlap_pair(self):
        result, lines = invoke(
            "overlap", "--reference", "rauzy-binary", "--u", "1112", "--v", "2112", "--expect", "true"
        )
        assert result.exit_code == 0
        assert "exact overlap: false" in lines
        assert "children overlap: true" in lines

    def test_overlap_localization(self):
        result, lines = invoke("overlap", "--alphabet", "i/2,1/2,-i/2", "--pair", "1,3", "--level", "6")
        assert result.exit_code == 0
        assert lines[0] == "0 intersecting disk pairs at level 6"
        assert lines[-1] == "disjoint: true"

    def test_tree_image(self, tmp_path):
        out = tmp_path / "tree.ppm"
        result, _ = invoke(
            "tree", "--alphabet", "i/2,1/2,-i/2", "--depth", "3", "--res", "32x24", "--out", str(out)
        )
        assert result.exit_code == 0
        data = out.read_bytes()
        assert data.startswith(b"P6\n32 24\n255\n")
        assert len(data) == len(b"P6\n32 24\n255\n") + 32 * 24 * 3

    def test_tipset_image(self, tmp_path):
        out = tmp_path / "tips.ppm"
        result, _ = invoke("tipset", "--reference", "sierpinski", "--depth", "5", "--res", "16x16", "--out", str(out))
        assert result.exit_code == 0
        assert out.read_bytes().startswith(b"P6\n16 16\n255\n")

    def test_mcloud_csv(self, tmp_path):
        out = tmp_path / "cloud.csv"
        result, lines = invoke("mcloud", "--preset", "plusminus", "--level", "3", "--out", str(out))
        assert result.exit_code == 0
        assert lines[0].endswith(str(out))
        assert out.read_text().splitlines()[0] == "re,im,degree,residual,provenance"

    def test_m0cloud_json(self, tmp_path):
        out = tmp_path / "m0.json"
        result, _ = invoke("m0cloud", "--preset", "ternary-up", "--order", "2", "--tails", "2", "--out", str(out))
        assert result.exit_code == 0
        data = json.loads(out.read_text())
        assert any(abs(complex(p["re"], p["im"]) - complex(-1, math.sqrt(7)) / 4) < 1e-8 for p in data["points"])

    def test_scan_is_deterministic(self, tmp_path):
        paths = []
        for workers in ("1", "3"):
            out = tmp_path / f"scan{workers}.ppm"
            result, _ = invoke(
                "scan", "--preset", "ternary-up", "--tests", "m2,m0", "--res", "48x48",
                "--workers", workers, "--out", str(out),
            )
            assert result.exit_code == 0
            paths.append(out)
        assert paths[0].read_bytes() == paths[1].read_bytes()

    def test_presets(self):
        result = runner.invoke(app, ["presets"])
        assert result.exit_code == 0
        assert "Family presets" in result.stdout


class TestExitCodes:
    def test_success(self):
        assert run(["dim", "--alphabet", "0.5,0.5i"]) == 0

    def test_invalid_alphabet(self):
        assert run(["tip", "--alphabet", "2,0.5", "--word", "1"]) == 1

    def test_missing_source(self):
        assert run(["dim"]) == 1

    def test_two_sources(self):
        assert run(["dim", "--alphabet", "0.5,0.5i", "--preset", "plusminus"]) == 1

    def test_missing_required_option(self):
        assert run(["tip", "--alphabet", "0.5,0.5i"]) == 1

    def test_domain_violation(self):
        assert run(["dim", "--preset", "ternary-up", "--z", "0.1"]) == 1

    def test_failed_expectation(self):
        assert run(["check", "--alphabet", "0.1,-0.1", "--expect", "Connected"]) == 2

    def test_config_file(self, tmp_path, capsys):
        path = tmp_path / "run.json"
        path.write_text(json.dumps({"alphabet": "0.5,0.5i"}))
        assert run(["--config", str(path), "dim"]) == 0
        line = capsys.readouterr().out.strip().splitlines()[0]
        assert float(line.split("=")[1]) == pytest.approx(1.0, abs=1e-9)

    def test_unwritable_certificate(self, tmp_path):
        (tmp_path / "blocker").write_text("")
        out = tmp_path / "blocker" / "cert.json"
        assert run(["check", "--alphabet", "0.1,-0.1", "--out", str(out)]) == 1

    def test_bad_config_file(self, tmp_path):
        path = tmp_path / "run.json"
        path.write_text("[1, 2]")
        assert run(["--config", str(path), "dim"]) == 1
