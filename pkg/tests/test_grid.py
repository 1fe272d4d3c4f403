import numpy as np
import pytest

from chtsim.grid import Grid, integrate, linf_norm, lp_norm, read_snapshot, write_snapshot


def unit_square(n=32):
    return Grid(extents=(1.0, 1.0), cells=(n, n))


def test_constant_integrals():
    g = unit_square(17)
    assert integrate(g.new_field(2.0), g) == pytest.approx(2.0, rel=1e-14)
    assert integrate(g.new_field(0.0), g) == 0.0


def test_cosine_integral_vanishes_by_symmetry():
    g = Grid(extents=(1.0,), cells=(64,))
    (x,) = g.meshgrid()
    f = np.cos(np.pi * x)
    assert abs(integrate(f, g)) < 1e-12


def test_integrate_linear():
    g = unit_square(13)
    rng = np.random.default_rng(3)
    f1 = rng.normal(size=g.shape)
    f2 = rng.normal(size=g.shape)
    a, b = 1.7, -0.4
    lhs = integrate(a * f1 + b * f2, g)
    rhs = a * integrate(f1, g) + b * integrate(f2, g)
    assert lhs == pytest.approx(rhs, abs=1e-13)


def test_integrate_shape_mismatch():
    g = unit_square(8)
    with pytest.raises(ValueError):
        integrate(np.zeros((4, 4)), g)


def test_lp_norm_constants_and_linear_profile():
    g = unit_square(10)
    assert lp_norm(g.new_field(3.0), 2.0, g) == pytest.approx(3.0, rel=1e-14)
    assert lp_norm(g.new_field(0.0), 5.0, g) == 0.0
    g1 = Grid(extents=(1.0,), cells=(128,))
    (x,) = g1.meshgrid()
    assert lp_norm(x, 1.0, g1) == pytest.approx(0.5, abs=1e-6)


def test_lp_norm_requires_p_ge_1():
    g = unit_square(4)
    with pytest.raises(ValueError):
        lp_norm(g.new_field(1.0), 0.5, g)


def test_lp_vs_linf_and_monotone_in_p():
    g = unit_square(16)  # unit measure domain
    rng = np.random.default_rng(11)
    f = rng.normal(size=g.shape)
    linf = linf_norm(f)
    prev = 0.0
    for p in (1.0, 1.5, 2.0, 4.0, 8.0):
        val = lp_norm(f, p, g)
        assert val <= g.domain_volume ** (1.0 / p) * linf + 1e-12
        assert val >= prev - 1e-12  # Hoelder ordering on |Omega| = 1
        prev = val


def test_linf_examples():
    g = unit_square(5)
    assert linf_norm(g.new_field(-4.0)) == 4.0
    assert linf_norm(g.new_field(0.0)) == 0.0
    f = g.new_field(0.0)
    f[2, 3] = 7.0
    assert linf_norm(f) == 7.0


def test_grid_validation():
    with pytest.raises(ValueError):
        Grid(extents=(1.0,), cells=(1, 2))
    with pytest.raises(ValueError):
        Grid(extents=(-1.0,), cells=(4,))
    with pytest.raises(ValueError):
        Grid(extents=(1.0, 1.0), cells=(0, 4))
    with pytest.raises(ValueError):
        Grid(extents=(1.0, 1.0, 1.0), cells=(2, 2, 2))


def test_spacing_and_volumes():
    g = Grid(extents=(2.0, 0.5), cells=(8, 4))
    assert g.spacing == (0.25, 0.125)
    assert g.cell_volume == pytest.approx(0.03125)
    assert g.domain_volume == pytest.approx(1.0)
    assert g.num_cells == 32


def test_snapshot_roundtrip(tmp_path):
    g = Grid(extents=(2.0, 1.0), cells=(6, 9))
    rng = np.random.default_rng(5)
    f = rng.normal(size=g.shape)
    path = tmp_path / "field.csv"
    write_snapshot(path, f, g)
    f2, g2 = read_snapshot(path)
    assert g2 == g
    assert np.array_equal(f, f2)  # repr round-trip is exact


def test_snapshot_roundtrip_1d(tmp_path):
    g = Grid(extents=(3.0,), cells=(11,))
    f = np.linspace(0, 1, 11)
    path = tmp_path / "field1d.csv"
    write_snapshot(path, f, g)
    f2, g2 = read_snapshot(path)
    assert g2 == g
    assert np.array_equal(f, f2)
