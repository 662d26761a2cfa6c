"""Rendering tests, including the secondary acceptance criterion."""

import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from spikeplots.cli import main
from spikeplots.render import ENS_HEADER, PlotSpec, SchemaError, load_rows, render

REPO_ROOT = Path(__file__).resolve().parents[2]
TREND_CSV = REPO_ROOT / "tests" / "data" / "figure1_trend.csv"


def _png(path):
    return path.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_criterion_11_figure1_render(tmp_path):
    """ENS-vs-n CSV from the primary acceptance suite renders with overlay."""
    assert TREND_CSV.exists(), "primary acceptance suite must have produced the trend CSV"
    out = tmp_path / "fig1.png"
    spec = PlotSpec("ens_vs_n", str(TREND_CSV), str(out), log_x=True, overlay_C=0.001)
    render(spec)
    ok = out.exists() and _png(out)
    print(f"[criterion 11] {'PASS' if ok else 'FAIL'} — log-x ENS-vs-n figure with scaled-bound overlay")
    assert ok


def test_schema_mismatch_rejected_with_diff(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("n,estimate\n100,0.2\n")
    with pytest.raises(SchemaError) as exc:
        load_rows(bad, "ens_vs_n")
    msg = str(exc.value)
    assert "expected:" in msg and "found:" in msg
    assert "missing columns" in msg


def test_cli_schema_mismatch_exit_code(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("n,estimate\n100,0.2\n")
    spec_file = tmp_path / "spec.json"
    spec_file.write_text(json.dumps(
        {"kind": "ens_vs_n", "csv": str(bad), "out": str(tmp_path / "x.png")}
    ))
    res = CliRunner().invoke(main, ["render", "--spec", str(spec_file)])
    assert res.exit_code == 2
    assert "expected:" in res.output and "found:" in res.output


def test_empty_csv_renders_blank_axes(tmp_path):
    empty = tmp_path / "empty.csv"
    empty.write_text(",".join(ENS_HEADER) + "\n")
    out = tmp_path / "blank.png"
    with pytest.warns(UserWarning, match="no data rows"):
        render(PlotSpec("ens_vs_n", str(empty), str(out)))
    assert _png(out)


def test_degree_profile_dictator_single_bar(tmp_path):
    # dictator spectrum export for n=4: all mass on bitmask 1 (degree 1)
    csv_path = tmp_path / "spec.csv"
    lines = ["bitmask,degree,coefficient"]
    for mask in range(16):
        coeff = 1.0 if mask == 1 else 0.0
        lines.append(f"{mask},{bin(mask).count('1')},{coeff}")
    csv_path.write_text("\n".join(lines) + "\n")
    out = tmp_path / "profile.png"
    render(PlotSpec("degree_profile", str(csv_path), str(out), log_x=False))
    assert _png(out)
    # the computed weights themselves: single unit bar at degree 1
    rows = load_rows(csv_path, "degree_profile")
    weights = {}
    for row in rows:
        weights[int(row["degree"])] = weights.get(int(row["degree"]), 0.0) + float(row["coefficient"]) ** 2
    assert weights[1] == 1.0 and sum(weights.values()) == 1.0


def test_render_is_deterministic(tmp_path):
    outs = []
    for name in ("a.png", "b.png"):
        out = tmp_path / name
        render(PlotSpec("ens_vs_n", str(TREND_CSV), str(out), overlay_C=0.001))
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]


def test_cli_render_ok(tmp_path):
    spec_file = tmp_path / "spec.json"
    out = tmp_path / "cli.png"
    spec_file.write_text(json.dumps(
        {"kind": "ens_vs_n", "csv": str(TREND_CSV), "out": str(out), "overlay_C": 0.001}
    ))
    res = CliRunner().invoke(main, ["render", "--spec", str(spec_file)])
    assert res.exit_code == 0, res.output
    assert _png(out)


def test_spec_rejects_unknown_kind_and_fields(tmp_path):
    with pytest.raises(ValueError):
        PlotSpec("volcano", "x.csv", "y.png")
    spec_file = tmp_path / "spec.json"
    spec_file.write_text(json.dumps({"kind": "ens_vs_n", "csv": "x", "out": "y", "wat": 1}))
    with pytest.raises(ValueError):
        PlotSpec.from_json(spec_file)


def test_nh_and_bound_kinds_render(tmp_path):
    nh = tmp_path / "nh.csv"
    nh.write_text(
        "kind,n,L,T,theta,beta,alphabet,draws,h,expected_count,seed\n"
        + "".join(f"nh_profile,8,1,10,0.5,1,signed,5,{h},{h * 1.5},0\n" for h in range(9))
    )
    out = tmp_path / "nh.png"
    render(PlotSpec("nh_profile", str(nh), str(out), log_x=False))
    assert _png(out)

    bounds_csv = tmp_path / "bounds.csv"
    bounds_csv.write_text(
        "kind,bound,n,L,T,theta,nu,t,C,c,value\n"
        "bound_table,thm1,100,1,10,0.5,0.1,10,1,1,47.4\n"
        "bound_table,thm1,1000,1,10,0.5,0.0316,10,1,1,26.7\n"
        "bound_table,thm2,100,5,10,0.5,0.1,0,1,1,48000.0\n"
    )
    out2 = tmp_path / "bounds.png"
    render(PlotSpec("bound_overlay", str(bounds_csv), str(out2)))
    assert _png(out2)
