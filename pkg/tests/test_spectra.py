"""Exact-diagonalization layer: hermiticity, ground structure, logical
labelling, dispersions, and convergence of the splitting ratio."""

import numpy as np
import pytest

import surfcode as sc
from surfcode import effective as eff
from surfcode.pauli import PauliString
from surfcode.spectra import (DispersionParams, SpectraError, SpinHamiltonian,
                              _Apply, apply_pauli, assemble, dispersion_grid,
                              fermion_dispersion, fermion_gap, flux_basis,
                              ground_splitting, logical_expectation,
                              lowest_eigs, vortex_dispersion, vortex_gap)


def test_hermiticity_random_vectors(one_hole_lattice):
    lat = one_hole_lattice
    mask = sc.field_mask(lat, {"type": "all"}, (0.03, 0.02, 0.01))
    H = assemble(lat, 1.0, mask)
    apply_h = _Apply(H)
    rng = np.random.default_rng(9)
    for _ in range(4):
        u = rng.standard_normal(H.dimension) + 1j * rng.standard_normal(H.dimension)
        v = rng.standard_normal(H.dimension) + 1j * rng.standard_normal(H.dimension)
        lhs = np.vdot(u, apply_h(v))
        rhs = np.conj(np.vdot(v, apply_h(u)))
        assert abs(lhs - rhs) <= 1e-12 * H.norm_bound * np.linalg.norm(u) * np.linalg.norm(v)


def test_zero_field_term_coefficients(one_hole_lattice):
    H = assemble(one_hole_lattice, 1.3)
    assert all(c == -1.3 for c, _ in H.terms)
    assert H.n_stabilizer_terms == len(H.terms)


def test_uniform_hx_adds_site_terms(one_hole_lattice):
    lat = one_hole_lattice
    mask = sc.field_mask(lat, {"type": "all"}, (0.1, 0, 0))
    H = assemble(lat, 1.0, mask)
    field_terms = [t for t in H.terms if t[0] == 0.1]
    assert len(field_terms) == lat.n_active


def test_dimension_cap():
    lat = sc.build_lattice(6, 5, "open")
    with pytest.raises(SpectraError):
        assemble(lat, 1.0, dimension_cap=24)


def test_identity_operator_eigenvalue():
    H = SpinHamiltonian(4, 1.0, ((2.5, PauliString.identity(4)),),
                        "plain", np.float64, 1)
    spec = lowest_eigs(H, 1, tol=1e-9)
    assert abs(spec.eigenvalues[0] - 2.5) < 1e-8
    assert spec.residual_norms[0] < 1e-8


def test_ground_energy_and_gap(ground_spectrum_one_hole, one_hole_lattice):
    spec = ground_spectrum_one_hole
    e0 = -1.0 * len(one_hole_lattice.stabilizers())
    assert abs(spec.eigenvalues[0] - e0) < 1e-8
    info = ground_splitting(spec, 1)
    assert abs(info["splittings"][1]) < 1e-9
    assert abs(info["excitation_gap"] - 2.0) < 1e-7


def test_torus_degeneracies_ed():
    for (w, h, q) in ((4, 3, 2), (3, 3, 2)):
        lat = sc.build_lattice(w, h, "torus")
        H = assemble(lat, 1.0)
        spec = lowest_eigs(H, q + 1, tol=1e-9)
        vals = spec.eigenvalues
        assert vals[q - 1] - vals[0] < 1e-9
        assert vals[q] - vals[0] > 1.5
        assert sc.ground_degeneracy(lat) == q


def test_commutation_with_stabilizers_on_vectors(one_hole_lattice,
                                                 ground_spectrum_one_hole):
    # [H, W] = 0 at zero field for stabilizers and logicals
    lat = one_hole_lattice
    H = ground_spectrum_one_hole.hamiltonian
    apply_h = _Apply(H)
    rng = np.random.default_rng(31)
    v = rng.standard_normal(H.dimension)
    v /= np.linalg.norm(v)
    pair = sc.logical_pair(lat, 0)
    for W in [lat.stabilizers()[0], lat.stabilizers()[-1],
              pair.tau_z, pair.tau_x]:
        Wf = H.to_frame(W)
        lhs = apply_h(apply_pauli(Wf, v.astype(np.complex128)))
        rhs = apply_pauli(Wf, apply_h(v).astype(np.complex128))
        assert np.linalg.norm(lhs - rhs) < 1e-10 * H.norm_bound


def test_logical_expectation_labels(ground_spectrum_one_hole,
                                    one_hole_lattice):
    spec = ground_spectrum_one_hole
    pair = sc.logical_pair(one_hole_lattice, 0)
    R = flux_basis(spec, pair.tau_z, 2)
    mz = R.conj().T @ logical_expectation(spec, pair.tau_z, 2) @ R
    mx = R.conj().T @ logical_expectation(spec, pair.tau_x, 2) @ R
    assert np.allclose(sorted(np.diag(mz).real), [-1.0, 1.0], atol=1e-7)
    assert abs(mz[0, 1]) < 1e-7
    assert abs(abs(mx[0, 1]) - 1.0) < 1e-7
    assert abs(mx[0, 0]) < 1e-7
    ident = logical_expectation(spec, PauliString.identity(16), 2)
    assert np.allclose(ident, np.eye(2), atol=1e-9)


def test_degeneracy_matches_rank(puncture_lattice):
    H = assemble(puncture_lattice, 1.0)
    spec = lowest_eigs(H, 3, tol=1e-9)
    vals = spec.eigenvalues
    assert vals[1] - vals[0] < 1e-9
    assert vals[2] - vals[0] > 1.5
    assert sc.ground_degeneracy(puncture_lattice) == 2


# -- dispersions ---------------------------------------------------------------


def test_flat_bands_at_zero_field():
    p = DispersionParams(1.0)
    ks = np.linspace(-np.pi, np.pi, 7)
    KX, KY = np.meshgrid(ks, ks)
    assert np.allclose(vortex_dispersion(p, KX, KY), 2.0)
    assert np.allclose(fermion_dispersion(p, KX, KY, "vertical"), 4.0)
    assert np.allclose(fermion_dispersion(p, KX, KY, "parallel"), 4.0)


@pytest.mark.parametrize("hx", [0.0, 0.05, 0.1])
def test_vortex_gap_grid_minimum(hx):
    p = DispersionParams(1.0, hx=hx)
    _, _, E = dispersion_grid(p, "vortex", npts=512)
    assert abs(E.min() - 2.0 * np.sqrt(1 - 4 * hx)) < 1e-9
    assert abs(vortex_gap(p) - 2.0 * np.sqrt(1 - 4 * hx)) < 1e-12


@pytest.mark.parametrize("hy", [0.0, 0.05, 0.1])
@pytest.mark.parametrize("branch", ["vertical", "parallel"])
def test_fermion_gap_grid_minimum(hy, branch):
    p = DispersionParams(1.0, hy=hy)
    _, _, E = dispersion_grid(p, "fermion", npts=512, branch=branch)
    assert abs(E.min() - 4.0 * np.sqrt(1 - 2 * hy)) < 1e-9
    assert abs(fermion_gap(p) - 4.0 * np.sqrt(1 - 2 * hy)) < 1e-12


def test_specific_gap_values():
    assert abs(vortex_gap(DispersionParams(1.0, hx=0.1))
               - 1.5491933384829668) < 1e-12
    assert abs(fermion_gap(DispersionParams(1.0, hy=0.1))
               - 3.5777087639996634) < 1e-12


def test_gap_closing_flagged():
    with pytest.raises(SpectraError):
        vortex_dispersion(DispersionParams(1.0, hx=0.3), 0.0, 0.0)
    with pytest.raises(SpectraError):
        fermion_dispersion(DispersionParams(1.0, hy=0.6), 0.0, 0.0)


# -- splitting ratio convergence -------------------------------------------


def test_chain_matches_ed_on_exact_geometry():
    """Oracle equivalence: where the flip string has length 1 it commutes
    with the stabilizer part, the chain is exact, and the ED spectrum
    matches it to machine precision (well within 25%, shrinking in h)."""
    lat = sc.build_lattice(4, 4, "open", [sc.HoleSpec(0, 1, 0, 2)])
    errs = []
    for hy in (0.1, 0.05):
        mask = sc.field_mask(lat, {"type": "corridor", "hole": 0},
                             (0, hy, 0))
        spec = lowest_eigs(assemble(lat, 1.0, mask), 3, tol=1e-9)
        ed = spec.eigenvalues[1] - spec.eigenvalues[0]
        cs = eff.build_chain(lat, 1.0, mask).spectrum()
        errs.append(abs(ed - (cs[1] - cs[0])) / (cs[1] - cs[0]))
    assert errs[0] <= 0.25 and errs[1] <= 0.25
    assert errs[1] <= errs[0] + 1e-12


def test_splitting_ratio_converges_to_constant(one_hole_lattice):
    """The ED/closed-form ratio approaches a constant as h decreases:
    the ratio sequence is monotone and its increments shrink.  (The
    constant itself is far from 1; the acceptance suite reports it.)"""
    lat = one_hole_lattice
    ratios = []
    for hy in (0.1, 0.05, 0.02):
        mask = sc.field_mask(lat, {"type": "corridor", "hole": 0},
                             (0, hy, 0))
        H = assemble(lat, 1.0, mask)
        spec = lowest_eigs(H, 3, tol=1e-10)
        split = spec.eigenvalues[1] - spec.eigenvalues[0]
        closed = abs(eff.fermion_splitting(1.0, hy, 2))
        ratios.append(split / closed)
    assert ratios[0] < ratios[1] < ratios[2]           # monotone approach
    assert abs(ratios[2] - ratios[1]) < abs(ratios[1] - ratios[0])
    # absolute deviation |ED - closed| decreases with h
    devs = [abs(r - 1) * abs(eff.fermion_splitting(1.0, h, 2))
            for r, h in zip(ratios, (0.1, 0.05, 0.02))]
    assert devs[0] > devs[1] > devs[2]
