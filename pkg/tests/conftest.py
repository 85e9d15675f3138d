import pytest

import surfcode as sc


@pytest.fixture(scope="session")
def one_hole_lattice():
    """16 spins, one vertical domino hole, port on the left edge."""
    return sc.build_lattice(4, 4, "open", [sc.HoleSpec(1, 1, 1, 2)])


@pytest.fixture(scope="session")
def two_hole_lattice():
    """20 spins, two horizontal dominoes stacked along a column."""
    return sc.build_lattice(4, 5, "open", [sc.HoleSpec(1, 1, 2, 1),
                                           sc.HoleSpec(1, 3, 2, 3)])


@pytest.fixture(scope="session")
def puncture_lattice():
    """16 spins, one single-plaquette (X cell) hole, no port."""
    return sc.build_lattice(4, 4, "open", [sc.HoleSpec(2, 1, 2, 1)])


@pytest.fixture(scope="session")
def ground_spectrum_one_hole(one_hole_lattice):
    H = sc.assemble(one_hole_lattice, 1.0)
    return sc.lowest_eigs(H, 3, tol=1e-9)
