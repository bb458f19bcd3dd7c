"""Compiled and pure-Python loop backends must agree bit for bit."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from simiss import _core
from simiss._core_py import _cum_sunlit
from simiss.battery import BatteryConfig
from simiss.controller import ControllerConfig
from simiss.engine import SimConfig, run
from simiss.powerplant import GenerationConfig, GenerationSchedule, OrbitConfig
from simiss.powerplant import cumulative_sunlit_min

from conftest import make_config

needs_cython = pytest.mark.skipif(
    "cython" not in _core.available_backends(),
    reason="compiled backend not built")

ARRAY_FIELDS = ("t_min", "phase", "scale", "available_kw", "delivered_kw",
                "curtailed_kw", "pv_voltage_v", "pv_current_a", "tier",
                "masks", "load_kw", "channel_kw", "batt_flow_kw",
                "soc_percent", "unserved_kw")


def assert_traces_identical(trace_a, trace_b):
    for name in ARRAY_FIELDS:
        a, b = getattr(trace_a, name), getattr(trace_b, name)
        assert a.dtype == b.dtype
        assert np.array_equal(a, b), f"column {name} differs between backends"


def test_python_backend_always_available():
    assert "python" in _core.available_backends()
    assert _core.get_backend("python") is not None


def test_unknown_backend_rejected():
    with pytest.raises(ValueError):
        _core.get_backend("fortran")


@needs_cython
@pytest.mark.parametrize("scenario, on", [
    ("ideal", False), ("catastrophic", False),
    ("catastrophic", True), ("breaking-point", True),
])
def test_backends_agree_on_builtin_scenarios(scenario, on):
    cfg = make_config(scenario, controller_on=on)
    trace_cy, summary_cy = run(cfg, backend="cython")
    trace_py, summary_py = run(cfg, backend="python")
    assert_traces_identical(trace_cy, trace_py)
    assert summary_cy == summary_py


@st.composite
def sim_configs(draw):
    period = draw(st.floats(min_value=5.0, max_value=300.0))
    fraction = draw(st.floats(min_value=0.05, max_value=0.95))
    capacity = draw(st.floats(min_value=5.0, max_value=2000.0))
    soc0 = draw(st.floats(min_value=0.0, max_value=100.0))
    low = draw(st.floats(min_value=1.0, max_value=98.0))
    high = draw(st.floats(min_value=low + 0.5, max_value=100.0))
    plateau = draw(st.floats(min_value=1.0, max_value=400.0))
    dt = draw(st.sampled_from([0.25, 0.5, 1.0, 2.5, 7.0]))
    duration = draw(st.floats(min_value=4 * dt, max_value=600.0))
    n_drops = draw(st.integers(min_value=0, max_value=4))
    starts, scales = [0.0], [draw(st.floats(min_value=0.0, max_value=1.0))]
    for k in range(n_drops):
        starts.append(starts[-1] + draw(st.floats(min_value=1.0, max_value=200.0)))
        scales.append(draw(st.floats(min_value=0.0, max_value=1.0)))
    schedule = GenerationSchedule(tuple(zip(starts, scales)))
    max_charge = draw(st.one_of(st.none(), st.floats(min_value=0.5, max_value=300.0)))
    max_discharge = draw(st.one_of(st.none(), st.floats(min_value=0.5, max_value=300.0)))
    enabled = draw(st.booleans())
    return SimConfig(
        orbit=OrbitConfig(period_min=period, insolation_fraction=fraction),
        gen=GenerationConfig(insolation_power_kw=plateau),
        battery=BatteryConfig(capacity_kwh=capacity, initial_soc=soc0,
                              max_charge_kw=max_charge,
                              max_discharge_kw=max_discharge),
        controller=ControllerConfig(low_threshold=low, high_threshold=high,
                                    enabled=enabled),
        schedule=schedule, duration_min=duration, dt_min=dt)


@needs_cython
@settings(max_examples=60, deadline=None)
@given(sim_configs())
def test_backends_agree_on_random_configs(cfg):
    trace_cy, _ = run(cfg, backend="cython")
    trace_py, _ = run(cfg, backend="python")
    assert_traces_identical(trace_cy, trace_py)


@given(st.floats(min_value=0.0, max_value=1e5, allow_nan=False),
       st.floats(min_value=1.0, max_value=300.0, allow_nan=False),
       st.floats(min_value=0.05, max_value=0.95, allow_nan=False))
def test_sunlit_accumulator_implementations_agree(t, period, fraction):
    sunlit = fraction * period
    assert cumulative_sunlit_min(t, period, sunlit) == _cum_sunlit(t, period, sunlit)


@needs_cython
def test_default_backend_prefers_compiled(monkeypatch):
    monkeypatch.delenv("SIMISS_BACKEND", raising=False)
    assert _core.default_backend() == "cython"
    monkeypatch.setenv("SIMISS_BACKEND", "python")
    assert _core.default_backend() == "python"
    monkeypatch.setenv("SIMISS_BACKEND", "cobol")
    with pytest.raises(ValueError):
        _core.default_backend()


@needs_cython
def test_backend_benchmark_smoke():
    # the comparison script exercises both loops on a short horizon
    import importlib.util
    from pathlib import Path

    bench = Path(__file__).resolve().parents[1] / "benchmarks" / "bench_backends.py"
    spec = importlib.util.spec_from_file_location("bench_backends", bench)
    mod = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(mod)
    results = mod.benchmark(duration_min=200.0, dt_min=1.0, repeats=1)
    assert {r.backend for r in results} == set(_core.available_backends())
    assert all(r.seconds > 0 and math.isfinite(r.seconds) for r in results)
