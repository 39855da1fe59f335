import numpy as np
import pytest

from qtopo.errors import NumericsError
from qtopo.fdfd import (
    EmitterLayout,
    FdfdFactorization,
    K0_DEFAULT,
    PermittivityGrid,
    centered_layout,
    default_grid,
    read_map,
    write_map,
)
from qtopo.greens import freespace_green_2d

# Shared small grid keeps the suite fast; the full-size oracle check
# lives in the acceptance suite.
SMALL = dict(size_x=4.0, size_z=5.0)


@pytest.fixture(scope="module")
def vacuum_solution():
    grid = default_grid(**SMALL)
    fact = FdfdFactorization(grid, K0_DEFAULT)
    src = (grid.nx // 2, grid.nz // 2)
    return grid, src, fact.solve_point(src)


def test_freespace_oracle_small_grid(vacuum_solution):
    grid, src, sol = vacuum_solution
    errs = []
    for ang in (0.0, 45.0, 90.0):
        a = np.radians(ang)
        for rho in (0.5, 1.0, 1.5):
            di = int(round(rho * np.cos(a) / grid.h))
            dj = int(round(rho * np.sin(a) / grid.h))
            cell = (src[0] + di, src[1] + dj)
            rho_exact = np.hypot(di, dj) * grid.h
            ref = freespace_green_2d(K0_DEFAULT, rho_exact)
            errs.append(abs(sol.field[cell] - ref) / abs(ref))
    assert max(errs) < 0.02


def test_vacuum_self_rate(vacuum_solution):
    grid, src, sol = vacuum_solution
    assert sol.field[src].imag == pytest.approx(0.25, rel=0.01)


def test_reciprocity(vacuum_solution):
    grid, _, _ = vacuum_solution
    layout = centered_layout(grid, 1.0)
    fact = FdfdFactorization(grid, K0_DEFAULT)
    f0 = fact.solve_point(layout.positions[0])
    f1 = fact.solve_point(layout.positions[1])
    g01 = f1.field[layout.positions[0]]
    g10 = f0.field[layout.positions[1]]
    assert abs(g01 - g10) / abs(g01) < 1e-8


def test_reciprocity_structured_map():
    grid = default_grid(**SMALL)
    rng = np.random.default_rng(4)
    interior = grid.interior_mask()
    bump = rng.uniform(0.0, 2.0, size=grid.eps.shape)
    grid.eps[interior] += bump[interior]
    layout = centered_layout(grid, 1.0)
    fact = FdfdFactorization(grid, K0_DEFAULT)
    f0 = fact.solve_point(layout.positions[0])
    f1 = fact.solve_point(layout.positions[1])
    g01 = f1.field[layout.positions[0]]
    g10 = f0.field[layout.positions[1]]
    assert abs(g01 - g10) / abs(g01) < 1e-8


def test_solver_residual_reported(vacuum_solution):
    grid, src, sol = vacuum_solution
    assert np.all(np.isfinite(sol.field))


def test_grid_validation():
    with pytest.raises(ValueError, match="pml_cells"):
        PermittivityGrid(nx=64, nz=64, h=0.025, eps=np.ones((64, 64)), pml_cells=4).validate()
    g = default_grid(**SMALL)
    g.eps[20, 20] = 0.5
    with pytest.raises(ValueError, match="eps must lie"):
        g.validate()
    g = default_grid(**SMALL)
    g.eps[20, 20] = 100.0
    with pytest.raises(ValueError, match="eps must lie"):
        g.validate()


def test_layout_validation():
    grid = default_grid(**SMALL)
    ix = grid.nx // 2
    with pytest.raises(ValueError, match="ordered"):
        EmitterLayout([(ix, 120), (ix, 100)]).validate(grid)
    with pytest.raises(ValueError, match="lambda/2"):
        EmitterLayout([(ix, 100), (ix, 110)]).validate(grid)
    with pytest.raises(ValueError, match="boundary"):
        EmitterLayout([(ix, 2), (ix, 100)]).validate(grid)
    with pytest.raises(ValueError, match="x line"):
        EmitterLayout([(ix, 80), (ix + 3, 130)]).validate(grid)


def test_map_roundtrip_csv(tmp_path):
    grid = default_grid(**SMALL)
    rng = np.random.default_rng(0)
    grid.eps += rng.uniform(0.0, 1.0, grid.eps.shape)
    grid.eps = np.clip(grid.eps, 1.0, grid.eps_max)
    path = tmp_path / "map.csv"
    write_map(path, grid)
    back = read_map(path)
    assert back.nx == grid.nx and back.nz == grid.nz
    assert back.h == grid.h and back.pml_cells == grid.pml_cells
    assert np.array_equal(back.eps, grid.eps)  # bit-exact


def test_map_roundtrip_binary(tmp_path):
    grid = default_grid(**SMALL)
    rng = np.random.default_rng(1)
    grid.eps += rng.uniform(0.0, 1.0, grid.eps.shape)
    grid.eps = np.clip(grid.eps, 1.0, grid.eps_max)
    path = tmp_path / "map.bin"
    write_map(path, grid)
    back = read_map(path)
    assert np.array_equal(back.eps, grid.eps)
    assert back.h == grid.h
