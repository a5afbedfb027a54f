import importlib.resources
import json

import pytest
from click.testing import CliRunner

from nearwave.cli import main


def data_path(name):
    return str(importlib.resources.files("nearwave") / "data" / name)


TLI = data_path("c70_tli_velocity_sweep.cfg")
KDTLI = data_path("pfns8_kdtli_power_sweep.cfg")
OTIMA = data_path("otima_gold_clusters.cfg")

BROKEN = """\
name = broken
species = nobodium
grating1.type = material
grating1.period = 991
grating2.type = material
"""

DECOHERE = """\
name = gas_sweep
species = C70
mode = spatial
separation = 0.22 m
grating1.type = material
grating1.period = 991 nm
grating1.open_fraction = 0.475
grating2.type = material
grating2.period = 991 nm
grating2.open_fraction = 0.475
grating3.type = material
grating3.period = 991 nm
grating3.open_fraction = 0.475
beam.velocity = 100 m/s
gas.mass = 28 amu
gas.temperature = 300 K
gas.cross_section = 1e-17 m^2
sweep.parameter = gas.pressure
sweep.start = 1e-9 mbar
sweep.stop = 2e-7 mbar
sweep.points = 4
"""

DEFLECT = """\
name = stark
species = C70
mode = spatial
separation = 0.22 m
grating1.type = material
grating1.period = 991 nm
grating1.open_fraction = 0.475
grating2.type = material
grating2.period = 991 nm
grating2.open_fraction = 0.475
beam.velocity = 100 m/s
deflect.geometry_constant = 1.0
deflect.grad_e_squared = 1e13 V^2/m^3
"""


@pytest.fixture
def runner():
    return CliRunner()


def invoke(runner, *args):
    return runner.invoke(main, list(args), catch_exceptions=False)


def test_validate_ok(runner):
    result = invoke(runner, "validate", TLI)
    assert result.exit_code == 0
    lines = result.output.strip().splitlines()
    assert lines[0] == "scenario,status,seed"
    assert lines[1].startswith("c70_tli_velocity_sweep,ok,")


def test_validate_broken_exits_2(runner, tmp_path):
    path = tmp_path / "broken.cfg"
    path.write_text(BROKEN)
    result = invoke(runner, "validate", str(path))
    assert result.exit_code == 2


def test_missing_file_exits_3(runner, tmp_path):
    result = invoke(runner, "validate", str(tmp_path / "nope.cfg"))
    assert result.exit_code == 3


def test_unwritable_output_exits_3(runner, tmp_path):
    result = invoke(runner, "validate", TLI,
                    "--out", str(tmp_path / "no" / "such" / "dir" / "x.csv"))
    assert result.exit_code == 3


def test_visibility_csv_json_agree(runner):
    csv_res = invoke(runner, "visibility", KDTLI, "--velocities", "4")
    json_res = invoke(runner, "visibility", KDTLI, "--velocities", "4",
                      "--format", "json")
    assert csv_res.exit_code == 0 and json_res.exit_code == 0
    header, row = csv_res.output.strip().splitlines()
    csv_vals = dict(zip(header.split(","), row.split(",")))
    json_vals = json.loads(json_res.output)[0]
    for key in ("quantum_visibility", "classical_visibility"):
        assert float(csv_vals[key]) == pytest.approx(json_vals[key],
                                                     abs=1e-12)
    # the bundled sweep scenario starts at zero laser power, where the
    # phase grating is absent and the fringe vanishes
    assert 0.0 <= float(csv_vals["quantum_visibility"]) <= 1.0


def test_outputs_byte_stable(runner, tmp_path):
    out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
    for out in (out1, out2):
        result = invoke(runner, "visibility", TLI, "--velocities", "4",
                        "--out", str(out))
        assert result.exit_code == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_velocity_sweep_curve_family(runner, tmp_path):
    out = tmp_path / "sweep.csv"
    result = invoke(runner, "velocity-sweep", TLI, "--velocities", "2",
                    "--out", str(out))
    assert result.exit_code == 0
    lines = out.read_text().strip().splitlines()
    header = lines[0].split(",")
    assert header == ["velocity_m_per_s", "quantum_vdw_visibility",
                      "quantum_cp_visibility", "quantum_ideal_visibility",
                      "classical_visibility"]
    assert len(lines) == 1 + 57
    first = [float(v) for v in lines[1].split(",")]
    assert first[0] == pytest.approx(80.0)
    assert all(0.0 <= v <= 1.0 for v in first[1:])


def test_sweep_commands_require_matching_sweep(runner):
    # the TLI scenario sweeps velocity, not power
    result = invoke(runner, "power-sweep", TLI)
    assert result.exit_code == 2
    result = invoke(runner, "velocity-sweep", KDTLI)
    assert result.exit_code == 2


def test_power_sweep_runs(runner, tmp_path):
    out = tmp_path / "power.csv"
    result = invoke(runner, "power-sweep", KDTLI, "--velocities", "1",
                    "--out", str(out))
    assert result.exit_code == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "power_w,quantum_visibility,classical_visibility"
    assert len(lines) == 1 + 90


def test_carpet_matrix_shape(runner):
    result = invoke(runner, "carpet", TLI, "--z-points", "5",
                    "--x-points", "16", "--format", "json")
    assert result.exit_code == 0
    payload = json.loads(result.output)
    assert len(payload["rows"]) == 5
    assert len(payload["rows"][0]["values"]) == 16
    assert payload["rows"][0]["z_over_talbot_length"] == 0.0


def test_decohere_monotone_in_pressure(runner, tmp_path):
    path = tmp_path / "gas.cfg"
    path.write_text(DECOHERE)
    result = invoke(runner, "decohere", str(path), "--velocities", "1")
    assert result.exit_code == 0
    lines = result.output.strip().splitlines()
    vis = [float(line.split(",")[1]) for line in lines[1:]]
    assert len(vis) == 4
    assert all(a > b for a, b in zip(vis, vis[1:]))


def test_decohere_missing_gas_keys(runner, tmp_path):
    text = DECOHERE.replace("gas.mass = 28 amu\n", "")
    path = tmp_path / "gas.cfg"
    path.write_text(text)
    result = invoke(runner, "decohere", str(path))
    assert result.exit_code == 2


def test_otima_map(runner):
    result = invoke(runner, "otima-map", OTIMA, "--ratio-points", "5",
                    "--n0-points", "2", "--format", "json")
    assert result.exit_code == 0
    payload = json.loads(result.output)
    ratios = [row["delay_over_talbot_time"] for row in payload["rows"]]
    center = payload["rows"][2]["values"]
    edge = payload["rows"][0]["values"]
    assert ratios[2] == pytest.approx(1.0)
    assert all(c > e for c, e in zip(center, edge))


def test_otima_map_wrong_mode(runner):
    result = invoke(runner, "otima-map", TLI)
    assert result.exit_code == 2


def test_deflect(runner, tmp_path):
    path = tmp_path / "stark.cfg"
    path.write_text(DEFLECT)
    result = invoke(runner, "deflect", str(path))
    assert result.exit_code == 0
    header, row = result.output.strip().splitlines()
    vals = dict(zip(header.split(","), row.split(",")))
    # C70 alpha volume 102e-30 m^3: 102/100 of the 3.99e-6 m reference
    assert float(vals["stark_shift_m"]) == pytest.approx(
        1.02 * 3.988413840978835e-6, rel=1e-6)
    missing = tmp_path / "nofield.cfg"
    missing.write_text(DEFLECT.replace(
        "deflect.geometry_constant = 1.0\n", ""))
    assert invoke(runner, "deflect", str(missing)).exit_code == 2


def test_csl_map(runner):
    result = invoke(runner, "csl-map", OTIMA, "--lambda-points", "2",
                    "--rc-points", "2", "--rc-min", "1e-7", "--rc-max", "2e-7",
                    "--format", "json")
    assert result.exit_code == 0
    payload = json.loads(result.output)
    masses = payload["rows"][0]["values"]
    assert all(1e5 < m < 1e10 for m in masses)
    # higher rate row excludes lighter clusters
    assert payload["rows"][1]["values"][0] < masses[0]
