"""Grid / DoF-storage / ghost-padding tests."""

from fractions import Fraction

import numpy as np
import pytest

from afmhd.mesh import (
    E, EDGE_SLOTS, N, NE, NW, S, SE, SW, VERTEX_SLOTS, W,
    DofField, Inflow, Mesh, combine, gather_traces, ghost_view,
    simpson_edge_average,
)
from afmhd.state import NCOMP, GasParams, prim_to_conserved, to_reform

G = GasParams()


def mk_mesh(nx=5, ny=4, bc=None):
    return Mesh.from_extent(nx, ny, 0.0, 1.0, 0.0, 1.0, bc=bc)


def mk_field(mesh, rng=None):
    f = DofField.zeros(mesh)
    rng = rng or np.random.default_rng(0)
    for a in f.arrays():
        a[...] = rng.normal(size=a.shape)
    return f


# ---------------------------------------------------------------------------
# mesh basics
# ---------------------------------------------------------------------------

def test_mesh_validation():
    with pytest.raises(ValueError):
        Mesh(2, 4, 0, 0, 0.1, 0.1)
    with pytest.raises(ValueError):
        Mesh(4, 4, 0, 0, -0.1, 0.1)
    with pytest.raises(ValueError):
        mk_mesh(bc={"left": "periodic", "right": "outflow",
                    "bottom": "periodic", "top": "periodic"})
    with pytest.raises(ValueError):
        mk_mesh(bc={"left": "inflow", "right": "outflow",
                    "bottom": "outflow", "top": "outflow"})


def test_cell_centers():
    m = mk_mesh(5, 4)
    assert np.allclose(m.xc(), (np.arange(5) + 0.5) / 5)
    assert np.allclose(m.ylev(), np.arange(5) / 4)
    assert np.allclose(m.xc(1), (np.arange(-1, 6) + 0.5) / 5)


def test_dof_shapes():
    m = mk_mesh(5, 4)
    f = DofField.zeros(m)
    assert f.avg.shape == (NCOMP, 5, 4)
    assert f.ex.shape == (NCOMP, 6, 4)
    assert f.ey.shape == (NCOMP, 5, 5)
    assert f.vx.shape == (NCOMP, 6, 5)
    f.check_shapes(m)
    with pytest.raises(ValueError):
        bad = DofField(f.avg, f.ex[:, :-1], f.ey, f.vx)
        bad.check_shapes(m)


def test_combine():
    m = mk_mesh()
    a, b = mk_field(m), mk_field(m, np.random.default_rng(5))
    c = combine(0.25, a, 0.75, b)
    assert np.allclose(c.avg, 0.25 * a.avg + 0.75 * b.avg)
    assert np.allclose(c.vx, 0.25 * a.vx + 0.75 * b.vx)


# ---------------------------------------------------------------------------
# simpson averaging
# ---------------------------------------------------------------------------

def test_simpson_trivial():
    u = np.arange(8.0)
    assert np.all(simpson_edge_average(u, u, u) == u)
    z = np.zeros(8)
    o = np.ones(8)
    assert np.allclose(simpson_edge_average(z, o, z), 4.0 / 6.0)


def test_simpson_matches_fraction_oracle():
    rng = np.random.default_rng(2)
    a, b, c = rng.integers(-50, 50, (3, 8)).astype(float)
    got = simpson_edge_average(a, b, c)
    want = [Fraction(int(ai) + 4 * int(bi) + int(ci), 6)
            for ai, bi, ci in zip(a, b, c)]
    assert np.allclose(got, [float(w) for w in want], rtol=1e-15)


def test_simpson_affine_invariance():
    rng = np.random.default_rng(3)
    a, b, c, k = rng.normal(size=(4, 8))
    lhs = simpson_edge_average(a + k, b + k, c + k)
    rhs = simpson_edge_average(a, b, c) + k
    assert np.allclose(lhs, rhs, rtol=1e-14, atol=1e-15)


# ---------------------------------------------------------------------------
# trace gathering
# ---------------------------------------------------------------------------

def test_traces_share_points_between_neighbors():
    m = mk_mesh()
    p = ghost_view(mk_field(m), m, G)
    t = gather_traces(p)
    # x-neighbors: my E slot is the neighbor's W slot, and the shared
    # vertices match across the interface
    assert np.array_equal(t[E][:, :-1, :], t[W][:, 1:, :])
    assert np.array_equal(t[NE][:, :-1, :], t[NW][:, 1:, :])
    assert np.array_equal(t[SE][:, :-1, :], t[SW][:, 1:, :])
    # y-neighbors
    assert np.array_equal(t[N][:, :, :-1], t[S][:, :, 1:])
    assert np.array_equal(t[NE][:, :, :-1], t[SE][:, :, 1:])
    assert np.array_equal(t[NW][:, :, :-1], t[SW][:, :, 1:])
    # the slot partition is (4 vertices, 4 edges)
    assert sorted(VERTEX_SLOTS + EDGE_SLOTS) == list(range(8))


def test_traces_address_stored_values():
    m = mk_mesh(4, 3)
    f = mk_field(m)
    p = ghost_view(f, m, G)
    t = gather_traces(p)
    # interior cell (i, j) = padded cell (i+1, j+1)
    i, j = 2, 1
    assert np.array_equal(t[SW][:, i + 1, j + 1], f.vx[:, i, j])
    assert np.array_equal(t[NE][:, i + 1, j + 1], f.vx[:, i + 1, j + 1])
    assert np.array_equal(t[S][:, i + 1, j + 1], f.ey[:, i, j])
    assert np.array_equal(t[N][:, i + 1, j + 1], f.ey[:, i, j + 1])
    assert np.array_equal(t[W][:, i + 1, j + 1], f.ex[:, i, j])
    assert np.array_equal(t[E][:, i + 1, j + 1], f.ex[:, i + 1, j])


# ---------------------------------------------------------------------------
# ghost filling
# ---------------------------------------------------------------------------

def test_periodic_wrap_all_arrays():
    m = mk_mesh(5, 4)
    f = mk_field(m)
    p = ghost_view(f, m, G)
    nx, ny = 5, 4
    # averages: ghost column 0 is interior column nx-1
    assert np.array_equal(p.avg[:, 0, 1:-1], f.avg[:, nx - 1, :])
    assert np.array_equal(p.avg[:, nx + 1, 1:-1], f.avg[:, 0, :])
    # edge-x points: ghost level -1 is interior level nx-1
    assert np.array_equal(p.ex[:, 0, 1:-1], f.ex[:, nx - 1, :])
    assert np.array_equal(p.ex[:, nx + 2, 1:-1], f.ex[:, 1, :])
    # vertices wrap in both directions, including the diagonal corner
    assert np.array_equal(p.vx[:, 0, 1:-1], f.vx[:, nx - 1, :])
    assert np.array_equal(p.vx[:, 1:-1, 0], f.vx[:, :, ny - 1])
    assert np.array_equal(p.vx[:, 0, 0], f.vx[:, nx - 1, ny - 1])
    # ey wraps like a cell array in x
    assert np.array_equal(p.ey[:, 0, 1:-1], f.ey[:, nx - 1, :])


def test_periodic_ghost_matches_spec_example():
    # ex value at padded level nx+1 equals interior level 1
    m = mk_mesh(5, 4)
    f = mk_field(m)
    p = ghost_view(f, m, G)
    assert np.array_equal(p.ex[:, 5 + 2, 1:-1], f.ex[:, 1, :])


def test_outflow_copies_nearest():
    bc = {s: "outflow" for s in ("left", "right", "bottom", "top")}
    m = mk_mesh(5, 4, bc=bc)
    f = mk_field(m)
    p = ghost_view(f, m, G)
    assert np.array_equal(p.avg[:, 0, 1:-1], f.avg[:, 0, :])
    assert np.array_equal(p.avg[:, -1, 1:-1], f.avg[:, -1, :])
    assert np.array_equal(p.ex[:, 0, 1:-1], f.ex[:, 0, :])
    assert np.array_equal(p.vx[:, 0, 1:-1], f.vx[:, 0, :])
    assert np.array_equal(p.ey[:, 1:-1, 0], f.ey[:, :, 0])
    # corner average comes from the y pass applied to the x-filled column
    assert np.array_equal(p.avg[:, 0, 0], f.avg[:, 0, 0])


def test_inflow_window_fills_prescribed_state():
    u_in = prim_to_conserved(1.4, (0.0, 800.0, 0.0), (0.0, 2.0, 0.0), 1.0, G)
    w_in = to_reform(u_in.reshape(NCOMP, 1), G)[:, 0]
    bc = {"left": "outflow", "right": "outflow",
          "bottom": Inflow(u_in, window=lambda x, y: np.abs(x - 0.5) < 0.21),
          "top": "outflow"}
    m = mk_mesh(5, 4, bc=bc)
    f = mk_field(m)
    p = ghost_view(f, m, G)
    xc = m.xc(1)
    inside = np.abs(xc - 0.5) < 0.21
    # averages: conserved inflow state inside the window, outflow copy outside
    assert np.allclose(p.avg[:, inside, 0], u_in[:, None])
    assert np.array_equal(p.avg[:, 1:-1, 0][:, ~inside[1:-1]],
                          f.avg[:, ~inside[1:-1], 0])
    # point values: reform image of the inflow state, at the point's own x
    xlev = m.xlev(1)
    vin = np.abs(xlev - 0.5) < 0.21
    assert np.allclose(p.vx[:, vin, 0], w_in[:, None])
    assert np.allclose(p.ey[:, inside, 0], w_in[:, None])


def test_ghost_view_returns_copies():
    m = mk_mesh()
    f = mk_field(m)
    p = ghost_view(f, m, G)
    p.avg[:, 1, 1] = 99.0
    assert not np.any(f.avg[:, 0, 0] == 99.0)
