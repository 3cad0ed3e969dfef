import cmath
import math

import numpy as np
import pytest

from kkdelta.core import CompactGeometry, PhysicalConfig, make_setup
from kkdelta.currents import (
    CurrentField,
    SurfacePoint,
    angular_factor,
    coefficients_from_currents,
    current_closed_form,
    current_field,
    current_numerical,
    numerical_current_components,
    probability_current,
    region_points,
    surface_grid,
    wavefunction,
)
from kkdelta.scattering import coefficients

PARTS = ("incident", "reflected", "transmitted")


def random_case(rng):
    setup = make_setup(
        lam=rng.uniform(-5, 5),
        k1=rng.uniform(0.1, 5),
        n=int(rng.integers(-4, 5)),
        F1=complex(rng.normal(), rng.normal()),
        G1=complex(rng.normal(), rng.normal()),
        config=PhysicalConfig(rng.uniform(0.5, 2), rng.uniform(0.5, 2)),
        geometry=CompactGeometry((rng.uniform(0.5, 3),)),
    )
    point = SurfacePoint(rng.uniform(0, 2 * math.pi), rng.uniform(-3, 3))
    A1 = complex(rng.normal(), rng.normal())
    return setup, point, A1


def test_surface_point_wraps_phi():
    assert SurfacePoint(2 * math.pi + 0.25, 0).phi == pytest.approx(0.25)
    assert SurfacePoint(-0.5, 1).phi == pytest.approx(2 * math.pi - 0.5)


def test_angular_factor():
    assert angular_factor(1.234, 0, 1, 0) == 1
    assert abs(angular_factor(math.pi / 2, 1, 1, 0)) < 1e-16
    for phi in np.linspace(0, 6, 13):
        assert angular_factor(phi, 1, 1, 1j) == pytest.approx(cmath.exp(1j * phi), abs=1e-15)


def test_wavefunction_parts():
    setup = make_setup(1.0, 1.0)
    amps = coefficients(setup)
    origin = SurfacePoint(0, 0)
    assert wavefunction("I", "incident", origin, setup) == 1
    total_I = wavefunction("I", "total", origin, setup)
    assert wavefunction("II", "transmitted", origin, setup) == pytest.approx(total_I, abs=1e-15)
    assert wavefunction("II", "transmitted", origin, setup, amps, A1=2.0) == pytest.approx(2 * amps.t)
    with pytest.raises(ValueError):
        wavefunction("I", "transmitted", origin, setup)
    with pytest.raises(ValueError):
        wavefunction("II", "reflected", origin, setup)
    with pytest.raises(ValueError):
        wavefunction("III", "incident", origin, setup)


def test_derivative_jump_of_total_wave():
    setup = make_setup(1.7, 0.8, 2, 1.0, 0.3j)
    h = 1e-6
    p = SurfacePoint(0.4, 0.0)

    def psi(region, z):
        return wavefunction(region, "total", SurfacePoint(p.phi, z), setup)

    left = (psi("I", 0.0) - psi("I", -h)) / h
    right = (psi("II", h) - psi("II", 0.0)) / h
    expected = 2 * setup.config.mass * setup.lam / setup.config.hbar**2 * psi("II", 0.0)
    assert right - left == pytest.approx(expected, abs=1e-5)


@pytest.mark.parametrize("phi", [0.0, 0.7, 2.0, 5.5])
@pytest.mark.parametrize("z", [-2.0, 0.0, 3.0])
def test_plane_wave_current(phi, z):
    setup = make_setup(1.0, 1.0)
    j = current_closed_form("incident", SurfacePoint(phi, z), setup)
    assert (j.j_phi, j.j_z) == (0.0, 1.0)
    jn = current_numerical("incident", SurfacePoint(phi, z), setup, h=1e-5)
    assert jn.j_phi == pytest.approx(0.0, abs=1e-10)
    assert jn.j_z == pytest.approx(1.0, rel=1e-9)


@pytest.mark.parametrize("phi", np.linspace(0, 2 * np.pi, 7, endpoint=False))
def test_circulating_mode_current(phi):
    # i*(1)*(F G* - F* G) = i*(-2i) = 2, times hbar/2m = 1; |Phi|^2 = 1
    setup = make_setup(1.0, 1.0, 1, 1, 1j)
    j = current_closed_form("incident", SurfacePoint(phi, -1.0), setup)
    assert j.j_phi == pytest.approx(1.0, abs=1e-15)
    assert j.j_z == pytest.approx(1.0, abs=1e-15)


def test_node_of_cosine_mode():
    setup = make_setup(1.0, 1.0, 1, 1, 0)
    j = current_closed_form("incident", SurfacePoint(math.pi / 2, 0), setup)
    assert j.j_phi == 0.0
    assert j.j_z == pytest.approx(0.0, abs=1e-30)


def test_numerical_rejects_bad_step():
    setup = make_setup(1.0, 1.0)
    for h in (0.0, -1e-3):
        with pytest.raises(ValueError):
            current_numerical("incident", SurfacePoint(0, 0), setup, h=h)


def test_unknown_part():
    with pytest.raises(ValueError):
        current_closed_form("total", SurfacePoint(0, 0), make_setup(1, 1))


def test_closed_form_matches_definition_on_random_setups():
    rng = np.random.default_rng(7)
    for _ in range(100):
        setup, point, A1 = random_case(rng)
        amps = coefficients(setup)
        for part in PARTS:
            jc = current_closed_form(part, point, setup, amps, A1)
            jn = current_numerical(part, point, setup, amps, A1, h=1e-5)
            err = math.hypot(jc.j_phi - jn.j_phi, jc.j_z - jn.j_z)
            assert err <= 1e-8 * jc.norm


def test_numerical_residue_is_real():
    rng = np.random.default_rng(11)
    for _ in range(50):
        setup, point, A1 = random_case(rng)
        for part in PARTS:
            j_phi, j_z = numerical_current_components(part, point, setup, A1=A1, h=1e-5)
            scale = math.hypot(j_phi.real, j_z.real)
            assert abs(j_phi.imag) < 1e-10 * max(1.0, scale)
            assert abs(j_z.imag) < 1e-10 * max(1.0, scale)


def test_probability_current_of_exact_gradient():
    # psi = e^{i(k z + n phi)}: J = (hbar/m)(n/R, k)
    cfg = PhysicalConfig(1.3, 0.7)
    k, n, R = 0.9, 2, 1.5
    psi = cmath.exp(1j * 0.3)
    j_phi, j_z = probability_current(psi, 1j * n / R * psi, 1j * k * psi, cfg)
    assert j_phi == pytest.approx(cfg.hbar / cfg.mass * n / R, abs=1e-15)
    assert j_z == pytest.approx(cfg.hbar / cfg.mass * k, abs=1e-15)


def test_second_order_convergence():
    rng = np.random.default_rng(3)
    for _ in range(10):
        setup, point, A1 = random_case(rng)
        jc = current_closed_form("transmitted", point, setup, A1=A1)
        errs = []
        for h in (4e-3, 2e-3, 1e-3):
            jn = current_numerical("transmitted", point, setup, A1=A1, h=h)
            errs.append(math.hypot(jc.j_phi - jn.j_phi, jc.j_z - jn.j_z))
        orders = [math.log2(a / b) for a, b in zip(errs, errs[1:])]
        assert all(1.9 < p < 2.1 for p in orders), orders


def test_axial_flux_balance_and_phi_structure():
    rng = np.random.default_rng(5)
    for _ in range(100):
        setup, point, A1 = random_case(rng)
        amps = coefficients(setup)
        ji, jr, jt = (current_closed_form(p, point, setup, amps, A1) for p in PARTS)
        scale = abs(ji.j_z) + abs(jr.j_z) + abs(jt.j_z)
        assert abs(ji.j_z + jr.j_z - jt.j_z) <= 1e-12 * max(1.0, scale)
        # the phi-hat part has the same sign in all three and scales with |X|^2
        assert jr.j_phi == pytest.approx(ji.j_phi * abs(amps.r) ** 2, rel=1e-12, abs=1e-300)
        assert jt.j_phi == pytest.approx(ji.j_phi * abs(amps.t) ** 2, rel=1e-12, abs=1e-300)
        assert np.sign(jr.j_phi) == np.sign(ji.j_phi) == np.sign(jt.j_phi)


def test_real_angular_amplitudes_do_not_circulate():
    rng = np.random.default_rng(9)
    for _ in range(30):
        setup = make_setup(rng.uniform(-3, 3), rng.uniform(0.1, 3), int(rng.integers(1, 5)),
                           rng.normal(), rng.normal())
        p = SurfacePoint(rng.uniform(0, 6.28), rng.uniform(-2, 2))
        assert all(current_closed_form(part, p, setup).j_phi == 0.0 for part in PARTS)


def test_coefficients_from_currents():
    setup = make_setup(1.0, 1.0)
    R1, T1 = coefficients_from_currents(setup, grid=surface_grid(4, 3, -1, 1))
    assert R1 == pytest.approx(0.5, abs=1e-12)
    assert T1 == pytest.approx(0.5, abs=1e-12)
    assert coefficients_from_currents(make_setup(0.0, 2.0)) == (0.0, 1.0)


def test_coefficients_from_currents_nodal_grid():
    setup = make_setup(1.0, 1.0, 1, 1, 0)
    grid = [SurfacePoint(math.pi / 2, z) for z in (-1.0, 0.0)]
    with pytest.raises(ValueError, match="nodal"):
        coefficients_from_currents(setup, grid=grid)
    with pytest.raises(ValueError):
        coefficients_from_currents(setup, grid=[])


def test_coefficient_ratio_is_point_independent():
    rng = np.random.default_rng(13)
    for _ in range(20):
        setup, _, A1 = random_case(rng)
        amps = coefficients(setup)
        values = [
            coefficients_from_currents(setup, amps, A1, [SurfacePoint(rng.uniform(0, 6.28), rng.uniform(-2, 2))])
            for _ in range(4)
        ]
        for R1, T1 in values:
            assert R1 == pytest.approx(amps.R1, abs=1e-10)
            assert T1 == pytest.approx(amps.T1, abs=1e-10)


def test_norm_choice_does_not_matter():
    # ratio of z-components alone equals ratio of Euclidean norms
    setup = make_setup(0.7, 1.3, 2, 1.0, 0.5 + 0.5j)
    p = SurfacePoint(0.3, -0.4)
    ji, jr = (current_closed_form(part, p, setup) for part in ("incident", "reflected"))
    assert abs(jr.j_z / ji.j_z) == pytest.approx(jr.norm / ji.norm, rel=1e-13)
    assert jr.j_phi / ji.j_phi == pytest.approx(jr.norm / ji.norm, rel=1e-13)


def test_grid_and_field():
    pts = surface_grid(4, 5, -1.0, 1.0)
    assert len(pts) == 20
    assert {p.z for p in pts} == {-1.0, -0.5, 0.0, 0.5, 1.0}
    assert len(region_points("incident", pts)) == 12
    assert len(region_points("transmitted", pts)) == 12
    field = current_field("reflected", region_points("reflected", pts), make_setup(1, 1))
    assert isinstance(field, CurrentField)
    assert all(v.j_z == pytest.approx(-0.5) for _, v in field.grid)
    with pytest.raises(ValueError):
        CurrentField("incident", ())
    with pytest.raises(ValueError):
        surface_grid(0, 1, 0, 1)
