"""2-D scalar finite-difference frequency-domain Helmholtz solver.

Discretises (Lap + k0^2 eps(r)) u = -delta(r - r_s)/h^2 on a uniform
nx-by-nz cell grid (5-point stencil) with complex-stretched-coordinate
PML along every edge.  Each equation is multiplied by the local stretch
product s_x s_z, which makes the assembled matrix complex-symmetric, so
discrete Lorentz reciprocity holds to solver precision.

Lengths are in units of the design wavelength (lambda = 1, laser
wavenumber k0 = 2 pi).  Grid axes: index i runs along x (rows of `eps`),
index j along z (columns); emitters sit on the central x line.
"""

from dataclasses import dataclass, field, replace

import numpy as np
import scipy.sparse
import scipy.sparse.linalg

from .errors import NumericsError

__all__ = [
    "PermittivityGrid",
    "EmitterLayout",
    "FieldSolution",
    "FdfdFactorization",
    "fdfd_solve",
    "default_grid",
    "write_map",
    "read_map",
    "K0_DEFAULT",
]

K0_DEFAULT = 2.0 * np.pi

# Hard ceiling matching typical semiconductor permittivities in the
# visible; configs must opt in explicitly to exceed it.
EPS_MAX_THRESHOLD = 9.0


@dataclass
class PermittivityGrid:
    """Real dielectric map on the full grid, PML band included.

    `eps` has shape (nx, nz); the outer `pml_cells`-wide band is the
    absorbing border and is never part of the design region.
    """

    nx: int
    nz: int
    h: float
    eps: np.ndarray
    eps_max: float = EPS_MAX_THRESHOLD
    pml_cells: int = 12
    pml_strength: float = 10.0

    def __post_init__(self):
        self.eps = np.asarray(self.eps, dtype=float)

    def validate(self) -> None:
        if self.eps.shape != (self.nx, self.nz):
            raise ValueError(
                f"eps shape {self.eps.shape} != grid ({self.nx}, {self.nz})"
            )
        if self.h <= 0.0:
            raise ValueError("cell size h must be > 0")
        if self.pml_cells < 8:
            raise ValueError("pml_cells must be >= 8")
        if 2 * self.pml_cells >= min(self.nx, self.nz):
            raise ValueError("PML bands overlap: grid too small")
        if np.min(self.eps) < 1.0 - 1e-12 or np.max(self.eps) > self.eps_max + 1e-12:
            raise ValueError(
                f"eps must lie in [1, eps_max={self.eps_max}]; "
                f"found [{np.min(self.eps):g}, {np.max(self.eps):g}]"
            )

    def interior_mask(self) -> np.ndarray:
        """Boolean (nx, nz) mask of non-PML cells."""
        m = np.zeros((self.nx, self.nz), dtype=bool)
        p = self.pml_cells
        m[p : self.nx - p, p : self.nz - p] = True
        return m

    def copy(self) -> "PermittivityGrid":
        return replace(self, eps=self.eps.copy())


def default_grid(
    size_x: float = 8.0,
    size_z: float = 12.0,
    h: float = 1.0 / 40.0,
    pml_cells: int = 12,
    pml_strength: float = 10.0,
    eps_max: float = EPS_MAX_THRESHOLD,
) -> PermittivityGrid:
    """Vacuum grid of physical size size_x-by-size_z plus the PML band."""
    nx = int(round(size_x / h)) + 2 * pml_cells
    nz = int(round(size_z / h)) + 2 * pml_cells
    return PermittivityGrid(
        nx=nx,
        nz=nz,
        h=h,
        eps=np.ones((nx, nz)),
        eps_max=eps_max,
        pml_cells=pml_cells,
        pml_strength=pml_strength,
    )


@dataclass
class EmitterLayout:
    """Emitter cells on the central x line, ordered along z."""

    positions: list[tuple[int, int]]
    laser_frequency: float = K0_DEFAULT

    def validate(self, grid: PermittivityGrid) -> None:
        if not self.positions:
            raise ValueError("layout needs at least one emitter")
        margin = grid.pml_cells + 4
        xs = {p[0] for p in self.positions}
        if len(xs) != 1:
            raise ValueError("emitters must share the same x line (z axis)")
        zs = [p[1] for p in self.positions]
        if any(z2 <= z1 for z1, z2 in zip(zs, zs[1:])):
            raise ValueError("emitter positions must be strictly ordered along z")
        min_sep = 0.5 / grid.h  # lambda/2 in cells
        if any(z2 - z1 < min_sep for z1, z2 in zip(zs, zs[1:])):
            raise ValueError(
                "emitter separation below lambda/2 (diffraction-limited bound)"
            )
        for ix, iz in self.positions:
            if not (margin <= ix < grid.nx - margin) or not (
                margin <= iz < grid.nz - margin
            ):
                raise ValueError(
                    f"emitter at ({ix}, {iz}) is within {margin} cells of a boundary"
                )

    @property
    def n_emitters(self) -> int:
        return len(self.positions)


def centered_layout(
    grid: PermittivityGrid, separations: float | list[float], k0: float = K0_DEFAULT
) -> EmitterLayout:
    """Layout of 2 or 3 emitters centred on the grid.

    A single separation d places two emitters d apart; a list of gaps
    places len(gaps)+1 emitters.
    """
    gaps = (
        [float(separations)] if np.isscalar(separations) else list(separations)
    )
    ix = grid.nx // 2
    z_center = grid.nz // 2
    total = sum(gaps) / grid.h
    z0 = z_center - total / 2.0
    zs = [int(round(z0))]
    for gp in gaps:
        zs.append(int(round(zs[-1] + gp / grid.h)))
    layout = EmitterLayout(positions=[(ix, z) for z in zs], laser_frequency=k0)
    layout.validate(grid)
    return layout


@dataclass
class FieldSolution:
    """Total field of a unit point source; `field` is (nx, nz)."""

    field: np.ndarray
    source_cell: tuple[int, int]
    source_index: int = -1


def _stretch(n: int, pml: int, strength: float, k0: float, half: bool) -> np.ndarray:
    """Complex stretch factors s = 1 + i sigma/k0 along one axis.

    `half=True` evaluates at cell faces (offset +1/2), else at centres.
    The conductivity profile is polynomial of order 3 in the PML depth.
    """
    xi = np.arange(n, dtype=float) + (0.5 if half else 0.0)
    depth_left = np.clip((pml - xi) / pml, 0.0, None)
    depth_right = np.clip((xi - (n - 1 - pml)) / pml, 0.0, None)
    sigma = strength * (depth_left**3 + depth_right**3)
    return 1.0 + 1j * sigma


def _assemble(grid: PermittivityGrid, k0: float) -> scipy.sparse.csc_matrix:
    nx, nz, h = grid.nx, grid.nz, grid.h
    p, st = grid.pml_cells, grid.pml_strength
    sx = _stretch(nx, p, st, k0, half=False)
    sxh = _stretch(nx, p, st, k0, half=True)  # faces i+1/2
    sz = _stretch(nz, p, st, k0, half=False)
    szh = _stretch(nz, p, st, k0, half=True)

    inv_h2 = 1.0 / (h * h)
    # Face couplings, multiplied through by s_x s_z to symmetrise.
    cx = np.zeros((nx - 1, nz), dtype=complex)  # between (i, j) and (i+1, j)
    cx[:, :] = (inv_h2 / sxh[:-1])[:, None] * sz[None, :]
    cz = np.zeros((nx, nz - 1), dtype=complex)  # between (i, j) and (i, j+1)
    cz[:, :] = sx[:, None] * (inv_h2 / szh[:-1])[None, :]

    diag = (sx[:, None] * sz[None, :]) * (k0 * k0) * grid.eps
    diag = diag.astype(complex)
    diag[:-1, :] -= cx
    diag[1:, :] -= cx
    diag[:, :-1] -= cz
    diag[:, 1:] -= cz

    n = nx * nz
    idx = np.arange(n).reshape(nx, nz)
    rows = [idx.ravel(), idx[:-1, :].ravel(), idx[1:, :].ravel(),
            idx[:, :-1].ravel(), idx[:, 1:].ravel()]
    cols = [idx.ravel(), idx[1:, :].ravel(), idx[:-1, :].ravel(),
            idx[:, 1:].ravel(), idx[:, :-1].ravel()]
    data = [diag.ravel(), cx.ravel(), cx.ravel(), cz.ravel(), cz.ravel()]
    a = scipy.sparse.coo_matrix(
        (np.concatenate(data), (np.concatenate(rows), np.concatenate(cols))),
        shape=(n, n),
    )
    return a.tocsc()


class FdfdFactorization:
    """Sparse LU of the Helmholtz system for one permittivity map.

    Immutable after construction; the factorisation is shared across all
    right-hand sides (one per emitter) of a design iteration.
    """

    def __init__(self, grid: PermittivityGrid, k0: float = K0_DEFAULT):
        grid.validate()
        self.grid = grid.copy()
        self.k0 = k0
        self._matrix = _assemble(self.grid, k0)
        self._lu = scipy.sparse.linalg.splu(self._matrix)

    def solve_point(self, cell: tuple[int, int], source_index: int = -1) -> FieldSolution:
        """Field of a unit point source (-delta/h^2 on the RHS) at `cell`."""
        nx, nz = self.grid.nx, self.grid.nz
        ix, iz = cell
        if not (0 <= ix < nx and 0 <= iz < nz):
            raise ValueError(f"source cell {cell} outside grid")
        b = np.zeros(nx * nz, dtype=complex)
        b[ix * nz + iz] = -1.0 / (self.grid.h * self.grid.h)
        u = self._lu.solve(b)
        if not np.all(np.isfinite(u)):
            raise NumericsError("sparse solve produced non-finite field")
        residual = np.linalg.norm(self._matrix @ u - b) / np.linalg.norm(b)
        if residual > 1e-8:
            raise NumericsError(
                f"sparse solve residual {residual:.3e} exceeds 1e-8"
            )
        return FieldSolution(
            field=u.reshape(nx, nz), source_cell=(ix, iz), source_index=source_index
        )

    def solve_all(self, layout: EmitterLayout) -> list[FieldSolution]:
        layout.validate(self.grid)
        return [
            self.solve_point(cell, source_index=i)
            for i, cell in enumerate(layout.positions)
        ]


def fdfd_solve(
    grid: PermittivityGrid,
    layout: EmitterLayout,
    source: int,
    k0: float | None = None,
) -> FieldSolution:
    """One-shot solve for emitter `source` of `layout` (factorises anew;
    use `FdfdFactorization` to share the factorisation across sources)."""
    layout.validate(grid)
    fact = FdfdFactorization(grid, k0 if k0 is not None else layout.laser_frequency)
    return fact.solve_point(layout.positions[source], source_index=source)


def write_map(path, grid: PermittivityGrid) -> None:
    """Write a permittivity map; `.csv` suffix selects the text form,
    anything else the binary form (text header + little-endian float64).

    Both forms round-trip bit-exactly.
    """
    header = f"{grid.nx} {grid.nz} {grid.h!r} {grid.pml_cells}"
    path = str(path)
    if path.endswith(".csv"):
        with open(path, "w", newline="\n") as fh:
            fh.write(header + "\n")
            for row in grid.eps:
                fh.write(",".join(repr(v) for v in row) + "\n")
    else:
        with open(path, "wb") as fh:
            fh.write((header + "\n").encode("ascii"))
            fh.write(grid.eps.astype("<f8").tobytes(order="C"))


def read_map(
    path,
    eps_max: float = EPS_MAX_THRESHOLD,
    pml_strength: float = 10.0,
) -> PermittivityGrid:
    """Read a map written by `write_map` (format chosen by suffix)."""
    path = str(path)
    if path.endswith(".csv"):
        with open(path, "r") as fh:
            head = fh.readline().split()
            nx, nz, h, pml = int(head[0]), int(head[1]), float(head[2]), int(head[3])
            eps = np.array(
                [[float(v) for v in fh.readline().split(",")] for _ in range(nx)]
            )
    else:
        with open(path, "rb") as fh:
            head = fh.readline().decode("ascii").split()
            nx, nz, h, pml = int(head[0]), int(head[1]), float(head[2]), int(head[3])
            eps = np.frombuffer(fh.read(nx * nz * 8), dtype="<f8").reshape(nx, nz)
    return PermittivityGrid(
        nx=nx,
        nz=nz,
        h=h,
        eps=eps.copy(),
        eps_max=eps_max,
        pml_cells=pml,
        pml_strength=pml_strength,
    )
