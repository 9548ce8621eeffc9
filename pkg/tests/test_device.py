import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pcmtradeoff.device import (
    CellCoordinate,
    CrossbarGeometry,
    DevicePhysicsParams,
    UnprogrammableCellError,
    cell_endurance,
    cell_profile,
    crystalline_fraction,
    current_map,
    path_length,
    profile_grid,
    programming_current,
    programming_latency,
    self_heating_temperature,
)

GEOM = CrossbarGeometry()
PHYS = DevicePhysicsParams()


@pytest.mark.parametrize(
    "rows,cols,row,col,expected",
    [(128, 128, 127, 0, 0), (128, 128, 0, 127, 254), (4, 4, 1, 2, 4)],
)
def test_path_length(rows, cols, row, col, expected):
    assert path_length(CrossbarGeometry(rows, cols), CellCoordinate(row, col)) == expected


def test_path_length_out_of_range():
    with pytest.raises(IndexError):
        path_length(CrossbarGeometry(4, 4), CellCoordinate(4, 0))
    with pytest.raises(IndexError):
        programming_current(CrossbarGeometry(4, 4), CellCoordinate(0, -1))


def test_programming_current_values():
    assert programming_current(GEOM, CellCoordinate(127, 0)) == pytest.approx(100e-6, rel=1e-12)
    # 1.0 / (10000 + 254 * 25), evaluated with mpmath
    assert programming_current(GEOM, CellCoordinate(0, 127)) == pytest.approx(61.162079510703e-6, rel=1e-12)


def test_no_parasitics_gives_uniform_current():
    g = CrossbarGeometry(8, 8, r_wire=0.0)
    assert programming_current(g, CellCoordinate(0, 7)) == programming_current(g, CellCoordinate(7, 0))
    cmap = current_map(g)
    assert np.all(cmap == cmap[0, 0])


def test_self_heating():
    assert self_heating_temperature(100e-6, PHYS) == pytest.approx(900.0, rel=1e-12)
    assert self_heating_temperature(0.0, PHYS) == 0.0
    assert self_heating_temperature(2e-5, PHYS) == pytest.approx(4 * self_heating_temperature(1e-5, PHYS))
    with pytest.raises(ValueError):
        self_heating_temperature(-1e-6, PHYS)


def test_crystalline_fraction():
    p = DevicePhysicsParams(alpha=1e7, t_melt=888.0, t_ambient=300.0)
    assert crystalline_fraction(900.0, 0.0, p) == 1.0
    # exp(-1e7 * 600/888 * 3.4e-7) from mpmath
    assert crystalline_fraction(900.0, 3.4e-7, p) == pytest.approx(0.100530180076284, rel=1e-12)
    assert crystalline_fraction(300.0, 1.0, p) == 1.0
    assert crystalline_fraction(250.0, 1.0, p) == 1.0
    with pytest.raises(ValueError):
        crystalline_fraction(900.0, -1.0, p)


def test_programming_latency():
    p = DevicePhysicsParams(vc_target=0.1005)
    assert programming_latency(900.0, p) == pytest.approx(3.40044437619485e-7, rel=1e-12)
    assert programming_latency(1e12, p) < 1e-15
    with pytest.raises(UnprogrammableCellError):
        programming_latency(300.0, p)


def test_endurance():
    # exp(14500/900) = 9.9304e6 (mpmath)
    assert cell_endurance(900.0, PHYS) == pytest.approx(9930397.953615235, rel=1e-12)
    assert cell_endurance(1e12, PHYS) == pytest.approx(1.0, abs=1e-7)
    assert cell_endurance(450.0, PHYS) == pytest.approx(cell_endurance(900.0, PHYS) ** 2, rel=1e-12)


def test_defaults_land_on_calibration_targets():
    hottest = cell_profile(GEOM, PHYS, CellCoordinate(127, 0))
    assert hottest.t_sh == pytest.approx(900.0)
    assert 5e6 < hottest.endurance < 2e7
    assert hottest.prog_latency == pytest.approx(3.4078e-7, rel=1e-4)


def test_corner_profiles():
    grid = profile_grid(GEOM, PHYS)
    bl = cell_profile(GEOM, PHYS, CellCoordinate(127, 0))
    tr = cell_profile(GEOM, PHYS, CellCoordinate(0, 127))
    assert bl.i_prog == grid.i_prog.max() and tr.i_prog == grid.i_prog.min()
    assert bl.prog_latency == grid.prog_latency.min() and tr.prog_latency == grid.prog_latency.max()
    assert bl.endurance == grid.endurance.min() and tr.endurance == grid.endurance.max()


def test_single_cell_crossbar():
    g = CrossbarGeometry(1, 1)
    prof = cell_profile(g, PHYS, CellCoordinate(0, 0))
    grid = profile_grid(g, PHYS)
    assert grid.shape == (1, 1)
    assert grid[CellCoordinate(0, 0)] == prof


def test_unprogrammable_cell_propagates():
    cold = CrossbarGeometry(4, 4, r_wire=5000.0)
    with pytest.raises(UnprogrammableCellError):
        cell_profile(cold, PHYS, CellCoordinate(0, 3))
    with pytest.raises(UnprogrammableCellError):
        profile_grid(cold, PHYS)


def test_current_map_2x2():
    g = CrossbarGeometry(2, 2)
    i = [1.0 / (1e4 + l * 25.0) for l in range(3)]
    np.testing.assert_allclose(current_map(g), [[i[1], i[2]], [i[0], i[1]]], rtol=1e-15)


def test_current_map_extremes_and_antidiagonals():
    cmap = current_map(GEOM)
    assert np.unravel_index(np.argmax(cmap), cmap.shape) == (127, 0)
    assert np.unravel_index(np.argmin(cmap), cmap.shape) == (0, 127)
    assert np.sum(cmap == cmap.max()) == 1 and np.sum(cmap == cmap.min()) == 1
    # equal path length <=> equal current, bit for bit
    r, c = np.indices(cmap.shape)
    key = c - r
    for k in (-127, -40, 0, 17, 127):
        vals = cmap[key == k]
        assert np.all(vals == vals[0])


def test_default_grid_all_finite_positive():
    grid = profile_grid(GEOM, PHYS)
    for arr in (grid.i_prog, grid.t_sh, grid.prog_latency, grid.endurance):
        assert np.all(np.isfinite(arr)) and np.all(arr > 0)


def test_parameter_validation():
    with pytest.raises(ValueError):
        DevicePhysicsParams(t_melt=200.0, t_ambient=300.0)
    with pytest.raises(ValueError):
        DevicePhysicsParams(vc_target=1.0)
    with pytest.raises(ValueError):
        CrossbarGeometry(0, 4)
    with pytest.raises(ValueError):
        CrossbarGeometry(4, 4, r_wire=-1.0)


def test_ordering_over_all_cell_pairs():
    g = CrossbarGeometry(6, 5)
    grid = profile_grid(g, PHYS)
    lengths = [path_length(g, CellCoordinate(r, c)) for r in range(6) for c in range(5)]
    flat = [grid[CellCoordinate(r, c)] for r in range(6) for c in range(5)]
    for la, a in zip(lengths, flat):
        for lb, b in zip(lengths, flat):
            if la < lb:
                assert a.i_prog > b.i_prog and a.t_sh > b.t_sh
                assert a.prog_latency < b.prog_latency and a.endurance < b.endurance


@settings(max_examples=200, deadline=None)
@given(st.floats(min_value=math.log(301.0), max_value=math.log(8880.0)))
def test_jma_round_trip(log_t):
    t = math.exp(log_t)
    lat = programming_latency(t, PHYS)
    assert crystalline_fraction(t, lat, PHYS) == pytest.approx(PHYS.vc_target, rel=1e-9)


@given(
    st.floats(min_value=1e-6, max_value=1e-3),
    st.floats(min_value=1e-6, max_value=1e-3),
)
def test_monotone_in_current(i1, i2):
    if i1 == i2:
        return
    lo, hi = sorted((i1, i2))
    t_lo, t_hi = self_heating_temperature(lo, PHYS), self_heating_temperature(hi, PHYS)
    if t_lo <= PHYS.t_ambient or t_lo == t_hi:
        return
    assert cell_endurance(t_hi, PHYS) <= cell_endurance(t_lo, PHYS)
    assert programming_latency(t_hi, PHYS) < programming_latency(t_lo, PHYS)
