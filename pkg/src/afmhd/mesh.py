"""Grid geometry, degree-of-freedom storage, and ghost padding.

The solver carries two kinds of degrees of freedom on a uniform Cartesian
grid of nx x ny cells:

* ``avg``: conserved cell averages, shape (8, nx, ny);
* shared point values in the reformulated variables at

  - x-edge midpoints ``ex``  (8, nx+1, ny)   at (x0 + a dx,        yc_j),
  - y-edge midpoints ``ey``  (8, nx, ny+1)   at (xc_i,             y0 + b dy),
  - vertices         ``vx``  (8, nx+1, ny+1) at (x0 + a dx,  y0 + b dy),

with xc_i = x0 + (i + 1/2) dx, yc_j = y0 + (j + 1/2) dy.  Point values are
single-valued: one storage slot per geometric point, shared by the adjacent
cells.

Ghost padding materializes exactly one ring of cells (averages plus that
ring's point values) per update pass.  In padded arrays every index is
shifted by +1: padded cell I holds interior cell I-1, padded point level a
holds interior level a-1.

Trace slots: the 8 one-sided values a cell owns at its interfaces are named
by compass position relative to the cell (SW, S, SE, W, E, NW, N, NE), in
that index order; `gather_traces` assembles them from the padded point
arrays.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .state import NCOMP, GasParams, to_reform

__all__ = [
    "SW", "S", "SE", "W", "E", "NW", "N", "NE",
    "VERTEX_SLOTS", "EDGE_SLOTS", "SLOT_NAMES",
    "Inflow", "Mesh", "DofField", "PaddedField", "combine",
    "ghost_view", "gather_traces", "simpson_edge_average",
]

# Trace-slot indices (compass position of the interface relative to the cell)
SW, S, SE, W, E, NW, N, NE = range(8)
VERTEX_SLOTS = (SW, SE, NW, NE)
EDGE_SLOTS = (S, W, E, N)
SLOT_NAMES = ("SW", "S", "SE", "W", "E", "NW", "N", "NE")

_SIDES = ("left", "right", "bottom", "top")


@dataclass(frozen=True)
class Inflow:
    """Prescribed-state boundary.  ``window(x, y)`` limits where the state is
    imposed (boolean mask over ghost DoF coordinates); outside the window the
    side behaves like outflow.  ``window=None`` imposes it everywhere."""

    u_in: np.ndarray
    window: Optional[Callable[[np.ndarray, np.ndarray], np.ndarray]] = None


@dataclass(frozen=True)
class Mesh:
    nx: int
    ny: int
    x0: float
    y0: float
    dx: float
    dy: float
    bc: dict = field(default_factory=lambda: {s: "periodic" for s in _SIDES})

    def __post_init__(self) -> None:
        if self.nx < 3 or self.ny < 3:
            raise ValueError("mesh must be at least 3x3 (stencil reach)")
        if not (self.dx > 0.0 and self.dy > 0.0):
            raise ValueError("cell widths must be positive")
        if set(self.bc) != set(_SIDES):
            raise ValueError(f"bc must have exactly the keys {_SIDES}")
        for side, tag in self.bc.items():
            if isinstance(tag, Inflow):
                continue
            if tag not in ("periodic", "outflow"):
                raise ValueError(f"unknown bc {tag!r} on {side}; inflow "
                                 "sides need an Inflow(...) with its state")
        for a, b in (("left", "right"), ("bottom", "top")):
            if ("periodic" in (self.bc[a], self.bc[b])
                    and self.bc[a] != self.bc[b]):
                raise ValueError(f"periodic bc must pair {a} with {b}")

    @classmethod
    def from_extent(cls, nx, ny, x0, x1, y0, y1, bc=None) -> "Mesh":
        kw = {} if bc is None else {"bc": dict(bc)}
        return cls(nx, ny, x0, y0, (x1 - x0) / nx, (y1 - y0) / ny, **kw)

    # -- DoF coordinates ----------------------------------------------------
    def xc(self, pad: int = 0) -> np.ndarray:
        return self.x0 + (np.arange(-pad, self.nx + pad) + 0.5) * self.dx

    def yc(self, pad: int = 0) -> np.ndarray:
        return self.y0 + (np.arange(-pad, self.ny + pad) + 0.5) * self.dy

    def xlev(self, pad: int = 0) -> np.ndarray:
        return self.x0 + np.arange(-pad, self.nx + 1 + pad) * self.dx

    def ylev(self, pad: int = 0) -> np.ndarray:
        return self.y0 + np.arange(-pad, self.ny + 1 + pad) * self.dy


@dataclass
class DofField:
    """Interior degrees of freedom: conserved averages + reform point values."""

    avg: np.ndarray
    ex: np.ndarray
    ey: np.ndarray
    vx: np.ndarray

    @classmethod
    def zeros(cls, mesh: Mesh) -> "DofField":
        nx, ny = mesh.nx, mesh.ny
        return cls(np.zeros((NCOMP, nx, ny)), np.zeros((NCOMP, nx + 1, ny)),
                   np.zeros((NCOMP, nx, ny + 1)),
                   np.zeros((NCOMP, nx + 1, ny + 1)))

    def check_shapes(self, mesh: Mesh) -> None:
        nx, ny = mesh.nx, mesh.ny
        want = {"avg": (NCOMP, nx, ny), "ex": (NCOMP, nx + 1, ny),
                "ey": (NCOMP, nx, ny + 1), "vx": (NCOMP, nx + 1, ny + 1)}
        for name, shape in want.items():
            got = getattr(self, name).shape
            if got != shape:
                raise ValueError(f"{name} has shape {got}, expected {shape}")

    def copy(self) -> "DofField":
        return DofField(self.avg.copy(), self.ex.copy(), self.ey.copy(),
                        self.vx.copy())

    def arrays(self):
        return (self.avg, self.ex, self.ey, self.vx)


def combine(ca: float, a: DofField, cb: float, b: DofField) -> DofField:
    """ca*a + cb*b, elementwise over all four DoF arrays."""
    return DofField(*(ca * x + cb * y for x, y in zip(a.arrays(), b.arrays())))


@dataclass
class PaddedField:
    """One-ghost-ring extension; fresh storage, never aliasing the interior.

    Shapes: avg (8, nx+2, ny+2); ex (8, nx+3, ny+2); ey (8, nx+2, ny+3);
    vx (8, nx+3, ny+3).
    """

    avg: np.ndarray
    ex: np.ndarray
    ey: np.ndarray
    vx: np.ndarray


# ---------------------------------------------------------------------------
# ghost filling
# ---------------------------------------------------------------------------

def _fill_axis(arr, axis, lo_kind, hi_kind, nodal, coords):
    """Fill the two ghost slices of one padded array along one axis.

    nodal: whether the DoF sits on grid levels along this axis (True for
    ex/vx along x etc.) -- it changes the periodic wrap distance by one.
    coords: (x, y) 1-D coordinate arrays of the full padded grid of this
    DoF kind, used only by inflow windows.
    """
    n = arr.shape[1 + axis] - (3 if nodal else 2)  # interior cell count

    def sl(i):
        idx = [slice(None)] * arr.ndim
        idx[1 + axis] = i
        return tuple(idx)

    last = arr.shape[1 + axis] - 1
    for side, kind in ((0, lo_kind), (1, hi_kind)):
        ghost = sl(0) if side == 0 else sl(last)
        if kind == "periodic":
            # one period = n cells; nodal arrays store n+1 levels, so the
            # wrap distance is n either way
            src = sl(n) if side == 0 else sl(last - n)
            arr[ghost] = arr[src]
        else:
            near = sl(1) if side == 0 else sl(last - 1)
            arr[ghost] = arr[near]
            if isinstance(kind, Inflow):
                _apply_inflow(arr, ghost, kind, axis, side, coords)


def _apply_inflow(arr, ghost, inflow, axis, side, coords):
    x, y = coords
    gx = np.empty(arr[ghost].shape[1:])
    gy = np.empty_like(gx)
    if axis == 0:
        gx[...] = x[0 if side == 0 else -1]
        gy[...] = y
    else:
        gy[...] = y[0 if side == 0 else -1]
        gx[...] = x
    mask = (np.ones(gx.shape, dtype=bool) if inflow.window is None
            else np.asarray(inflow.window(gx, gy), dtype=bool))
    arr[ghost][:, mask] = inflow.u_in[:, np.newaxis]


def ghost_view(fieldset: DofField, mesh: Mesh, params: GasParams) -> PaddedField:
    """Materialize the one-ring padded copies of all four DoF arrays.

    x sides are filled first, then y sides (so corner ghosts follow the
    y-side rule); inflow windows are evaluated at each ghost DoF's own
    coordinates, and inflow point values receive the reform image of the
    prescribed conserved state.
    """
    fieldset.check_shapes(mesh)
    nx, ny = mesh.nx, mesh.ny
    pads = {
        "avg": np.empty((NCOMP, nx + 2, ny + 2)),
        "ex": np.empty((NCOMP, nx + 3, ny + 2)),
        "ey": np.empty((NCOMP, nx + 2, ny + 3)),
        "vx": np.empty((NCOMP, nx + 3, ny + 3)),
    }
    pads["avg"][:, 1:-1, 1:-1] = fieldset.avg
    pads["ex"][:, 1:-1, 1:-1] = fieldset.ex
    pads["ey"][:, 1:-1, 1:-1] = fieldset.ey
    pads["vx"][:, 1:-1, 1:-1] = fieldset.vx

    bc = {s: mesh.bc[s] for s in _SIDES}
    w_in = {}
    for side, tag in bc.items():
        if isinstance(tag, Inflow):
            w_in[side] = Inflow(to_reform(tag.u_in.reshape(NCOMP, 1),
                                          params)[:, 0], tag.window)

    coords = {
        "avg": (mesh.xc(1), mesh.yc(1)),
        "ex": (mesh.xlev(1), mesh.yc(1)),
        "ey": (mesh.xc(1), mesh.ylev(1)),
        "vx": (mesh.xlev(1), mesh.ylev(1)),
    }
    nodal_x = {"avg": False, "ex": True, "ey": False, "vx": True}
    nodal_y = {"avg": False, "ex": False, "ey": True, "vx": True}

    for name, arr in pads.items():
        reform = name != "avg"
        lo = w_in.get("left", bc["left"]) if reform else bc["left"]
        hi = w_in.get("right", bc["right"]) if reform else bc["right"]
        _fill_axis(arr, 0, lo, hi, nodal_x[name], coords[name])
        lo = w_in.get("bottom", bc["bottom"]) if reform else bc["bottom"]
        hi = w_in.get("top", bc["top"]) if reform else bc["top"]
        _fill_axis(arr, 1, lo, hi, nodal_y[name], coords[name])
    return PaddedField(**pads)


# ---------------------------------------------------------------------------
# trace gathering and Simpson averaging
# ---------------------------------------------------------------------------

def gather_traces(p: PaddedField) -> np.ndarray:
    """Per-cell one-sided point values over the padded cell grid.

    Returns a fresh array of shape (8 slots, 8 comps, nx+2, ny+2): cell
    (I, J) sees its SW vertex in slot SW, its south edge midpoint in slot S,
    and so on.  Copies, so downstream per-cell modifications stay local.
    """
    t = np.empty((8,) + p.avg.shape)
    t[SW] = p.vx[:, :-1, :-1]
    t[SE] = p.vx[:, 1:, :-1]
    t[NW] = p.vx[:, :-1, 1:]
    t[NE] = p.vx[:, 1:, 1:]
    t[W] = p.ex[:, :-1, :]
    t[E] = p.ex[:, 1:, :]
    t[S] = p.ey[:, :, :-1]
    t[N] = p.ey[:, :, 1:]
    return t


def simpson_edge_average(a: np.ndarray, b: np.ndarray, c: np.ndarray):
    """(a + 4b + c) / 6 along one edge (endpoints a, c; midpoint b)."""
    return (a + 4.0 * b + c) / 6.0
