"""Command-line behavior: golden outputs, schemas, exit codes."""

import json
import math
from fractions import Fraction

import pytest

from bosegas import __version__
from bosegas.cli import TABLE_HEADER, main
from bosegas.moments import MomentRequest, asymptotic_ratio, moment_partition_sum
from bosegas.spectral import GapReport

MOMENT_N1_GOLDEN = (
    "term,value_mantissa,value_logscale,value_decimal,tail_bound,step_estimate\n"
    "1,0.56418958354775628,-0.94314718055994529,0.21969564473386119,"
    "1.6678055129630822e-22,3.7025550979012784e-20\n"
    "total,0.56418958354775628,-0.94314718055994529,0.21969564473386119,"
    "1.6678055129630848e-22,3.7025550979012784e-20\n"
)

TABLE_N1_GOLDEN = (
    "t,moment_mantissa,moment_logscale,leading_mantissa,leading_logscale,ratio,ratio_err\n"
    "1,0.79788456080286552,-0.69314718055994529,0.5,-0.22579135264472738,"
    "1.0000000000000002,1.6678055129630852e-22\n"
    "2,0.56418958354775628,-0.69314718055994529,0.5,-0.57236494292470008,"
    "1,1.6678055129630848e-22\n"
)


def run(capsys, argv):
    rc = main(argv)
    return rc, capsys.readouterr().out


def test_moment_csv_golden_bytes(capsys):
    rc, out = run(capsys, ["moment", "--t", "2.0", "--x", "1.0"])
    assert rc == 0
    assert out == MOMENT_N1_GOLDEN
    assert "\r" not in out and out.endswith("\n")


def test_table_csv_golden_bytes(capsys):
    rc, out = run(capsys, ["asymptotic-table", "--n", "1", "--t-list", "1.0", "2.0"])
    assert rc == 0
    assert out == TABLE_N1_GOLDEN
    assert out.splitlines()[0] == TABLE_HEADER


def test_moment_json_schema(capsys):
    rc, out = run(capsys, ["moment", "--t", "1.0", "--x", "0.0", "0.5",
                           "--format", "json"])
    assert rc == 0
    doc = json.loads(out)
    assert set(doc) == {"inputs", "results", "errors", "version", "seed"}
    assert doc["version"] == __version__
    assert doc["seed"] is None
    assert doc["inputs"]["t"] == 1.0 and doc["inputs"]["x"] == [0.0, 0.5]
    assert [term["partition"] for term in doc["results"]["terms"]] == ["2", "1+1"]
    api = moment_partition_sum(MomentRequest(1.0, (0.0, 0.5)))
    assert doc["results"]["total"]["mantissa_re"] == api.value.mantissa.real
    assert doc["results"]["total"]["log_scale"] == api.value.log_scale
    assert doc["results"]["total"]["decimal"] == pytest.approx(
        api.value.to_complex().real, rel=1e-15
    )


def test_table_json_matches_api(capsys):
    rc, out = run(capsys, ["asymptotic-table", "--n", "2", "--t-list", "4.0",
                           "--x-power", "0.5", "--format", "json"])
    assert rc == 0
    doc = json.loads(out)
    row = doc["results"][0]
    api = asymptotic_ratio(MomentRequest(4.0, (0.0, 4.0 ** 0.5)))
    assert row["ratio"] == api.ratio
    assert row["moment"]["log_scale"] == api.moment.value.log_scale


def test_csv_floats_have_17_significant_digits(capsys):
    _, out = run(capsys, ["moment", "--t", "2.0", "--x", "1.0"])
    val = out.splitlines()[1].split(",")[1]
    assert val == "0.56418958354775628"
    assert float(val) == 1.0 / math.sqrt(math.pi)  # 17 digits round-trip exactly


def test_moment_routes_agree_through_cli(capsys):
    _, csv_a = run(capsys, ["moment", "--t", "1.0", "--x", "0.0", "0.5"])
    _, csv_b = run(capsys, ["moment", "--t", "1.0", "--x", "0.0", "0.5",
                            "--route", "nested"])
    total_a = float(csv_a.splitlines()[-1].split(",")[3])
    total_b = float(csv_b.splitlines()[-1].split(",")[3])
    assert total_a == pytest.approx(total_b, rel=1e-10)


def test_large_scale_moment_omits_decimal_column(capsys):
    # n=3 at t=80: log value ~ L_3 * 80 = 80*... well beyond double range
    rc, out = run(capsys, ["moment", "--t", "800.0", "--x", "0.0", "0.0", "0.0"])
    assert rc == 0
    last = out.splitlines()[-1].split(",")
    assert last[0] == "total" and last[3] == ""  # no decimal form
    assert float(last[2]) > 700.0  # log scale carries the size


def test_verify_single_suite_passes(capsys):
    rc, out = run(capsys, ["verify", "--suite", "determinant"])
    assert rc == 0
    lines = out.splitlines()
    assert lines[0].startswith("PASS determinant:")
    assert lines[-1] == "OK: 1/1 checks passed"


def test_verify_reports_failure_with_exit_1(capsys, monkeypatch):
    import bosegas.cli as cli

    broken = GapReport(n=2, margins=((None, Fraction(-1)),), all_positive=False,
                       min_margin=Fraction(-1))
    monkeypatch.setattr(cli, "verify_gap", lambda n: broken)
    rc, out = run(capsys, ["verify", "--suite", "gap"])
    assert rc == 1
    assert "FAIL gap n=2" in out
    assert out.splitlines()[-1].startswith("FAILED")


def test_exit_code_3_for_oversize_requests(capsys):
    assert main(["moment", "--t", "1.0", "--n", "5"]) == 3
    assert main(["moment", "--t", "1.0", "--n", "5", "--route", "nested"]) == 3
    capsys.readouterr()


@pytest.mark.parametrize("argv", [
    ["moment", "--t", "1.0"],                                  # neither --n nor --x
    ["moment", "--t", "1.0", "--n", "3", "--x", "0.0"],        # disagree
    ["moment", "--t", "1.0", "--x", "0.0", "--route", "nested", "--theta", "0.5"],
    ["asymptotic-table", "--n", "2", "--t-list", "5", "--x-power", "1.0"],
    ["verify", "--suite", "mc", "--strict"],
    ["verify", "--suite", "nonsense"],
    ["moment"],                                                # missing --t
])
def test_usage_errors_exit_2(capsys, argv):
    with pytest.raises(SystemExit) as err:
        main(argv)
    assert err.value.code == 2
    capsys.readouterr()


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as err:
        main(["--version"])
    assert err.value.code == 0
    assert __version__ in capsys.readouterr().out
