import math

import pytest

import routerq


def test_version():
    assert routerq.__version__


def test_ge_tau_values():
    assert routerq.ge_tau(routerq.GEParams(1.0, 1.0)) == pytest.approx(1.0)
    assert routerq.ge_tau(routerq.GEParams(17e5, 4.0)) == pytest.approx(0.4)
    assert routerq.ge_tau(routerq.GEParams(5e5, 10.0)) == pytest.approx(2 / 11)
    with pytest.raises(ValueError):
        routerq.ge_tau(routerq.GEParams(1.0, 0.5))


def test_ge_sampler_moments():
    params = routerq.GEParams(17e5, 4.0)
    xs = routerq.ge_samples(params, seed=1, n=200_000)
    mean = sum(xs) / len(xs)
    var = sum(x * x for x in xs) / len(xs) - mean * mean
    assert mean == pytest.approx(1 / 17e5, rel=0.02)
    assert var / mean**2 == pytest.approx(4.0, rel=0.06)
    zero_frac = sum(1 for x in xs if x == 0.0) / len(xs)
    assert abs(zero_frac - 0.6) < 0.02


def test_seeded_streams_reproduce():
    params = routerq.GEParams(2.0, 4.0)
    assert routerq.ge_samples(params, 7, 1000) == routerq.ge_samples(params, 7, 1000)
    assert routerq.ge_samples(params, 7, 1000) != routerq.ge_samples(params, 8, 1000)


def test_mm1n_worked_example():
    r = routerq.mm1n_solve(1.0, 2.0, 2)
    assert r.probabilities == pytest.approx([4 / 7, 2 / 7, 1 / 7])
    assert r.blocking == pytest.approx(1 / 7)
    assert r.mean_in_system == pytest.approx(4 / 7)


def test_mmcn_reduction_and_erlang():
    a = routerq.mmcn_solve(0.85, 1.0, 1, 50)
    b = routerq.mm1n_solve(0.85, 1.0, 50)
    assert a.mean_in_system == pytest.approx(b.mean_in_system, rel=1e-10)
    r = routerq.mmcn_solve(2.8, 1.0, 4, 4)
    assert r.blocking == pytest.approx(routerq.erlang_b(4, 2.8), rel=1e-9)


def test_builtin_scenarios_shape():
    specs = routerq.builtin_scenarios()
    assert [s.name for s in specs] == ["A", "B", "C", "D"]
    for spec in specs:
        assert spec.capacity == 50
        assert spec.replications == 20
        assert len(spec.lambda1_sweep) == 10


def test_parse_config_and_canonical():
    spec = routerq.parse_config("scenario = A\n")
    assert routerq.canonical_config(spec) == routerq.canonical_config(
        routerq.builtin_scenario("A")
    )
    with pytest.raises(ValueError):
        routerq.parse_config("scenario = custom\nscv_a1 = 0.3\n")


def tiny_spec():
    return routerq.parse_config(
        "scenario = custom\n"
        "name = smoke\n"
        "lambda1_sweep = 4e5:8e5:4e5\n"
        "disciplines = FCFS, HOL\n"
        "replications = 2\n"
        "arrivals = 3000\n"
    )


def test_run_scenario_deterministic():
    spec = tiny_spec()
    a = routerq.run_scenario(spec, 7, 2)
    b = routerq.run_scenario(spec, 7, 1)
    assert routerq.csv_string(a) == routerq.csv_string(b)
    c = routerq.run_scenario(spec, 8, 2)
    assert routerq.csv_string(a) != routerq.csv_string(c)


def test_report_rows_structure():
    report = routerq.run_scenario(tiny_spec(), 3, 2)
    rows = report.rows()
    # 2 arms x 2 sweep points x 3 classes x 4 metrics
    assert len(rows) == 48
    classes = {r.klass for r in rows}
    metrics = {r.metric for r in rows}
    assert classes == {"VT", "FF", "total"}
    assert metrics == {"W", "MQL", "PL", "UTIL"}
    for r in rows:
        assert r.lo <= r.mean <= r.hi or math.isclose(r.lo, r.mean)
        if r.metric in ("PL", "UTIL"):
            assert 0.0 <= r.mean <= 1.0


def test_chart_and_csv_emission(tmp_path):
    report = routerq.run_scenario(tiny_spec(), 3, 2)
    csv_path = tmp_path / "results.csv"
    routerq.emit_csv(report, str(csv_path))
    text = csv_path.read_text()
    assert text.startswith("scenario,arm,lambda1,class,metric,mean,ci95_lo,ci95_hi,replications")
    svg_path = tmp_path / "w.svg"
    routerq.emit_chart(report, "W", str(svg_path))
    assert svg_path.read_text().startswith("<?xml")
