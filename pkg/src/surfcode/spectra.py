"""Exact spin-level spectra: matrix-free Hamiltonian application, lowest
eigenpairs, ground-space splittings and the quasiparticle dispersions.

The Hamiltonian is a list of weighted Pauli strings,

    H = -g * sum(stabilizers) + sum_i sum_c h_c(i) sigma^c_i,

applied to state vectors without forming a matrix: each term permutes
basis indices by XOR with its x mask and multiplies by a z-dependent
sign, so one application is a handful of vectorized gathers.

Because sigma^y carries imaginary entries, a term list containing only
{stabilizers, sigma^x} or only {stabilizers, sigma^y} fields is mapped
to a real representation when possible: conjugating every spin by the
phase gate S sends sigma^y -> -sigma^x and X-type plaquettes to Y-type
plaquettes with an even Y count, leaving all matrix elements real.
Spectra are unchanged; eigenvectors live in the chosen frame and
operators evaluated on them are conjugated consistently.

Eigenpairs come from a blocked, seeded LOBPCG iteration.  A block of
random vectors resolves exact ground-state degeneracy, which a
single-vector Lanczos cannot.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.sparse.linalg as spla

from .lattice import FieldMask, HoledLattice
from .pauli import PauliString

DIMENSION_CAP = 24


class SpectraError(RuntimeError):
    def __init__(self, msg, residuals=None):
        super().__init__(msg)
        self.residuals = residuals


def _conjugate_by_s(p: PauliString) -> PauliString:
    """Conjugate by the product of single-site phase gates: X -> iXZ,
    Z -> Z, so sigma^y -> -sigma^x."""
    k = (p.k + bin(p.x).count("1")) % 4
    return PauliString(p.n, p.x, p.z ^ p.x, k)


@dataclass(frozen=True)
class SpinHamiltonian:
    n: int
    g: float
    terms: tuple[tuple[float, PauliString], ...]   # in the working frame
    frame: str                                     # 'plain' or 'sgate'
    dtype: object
    n_stabilizer_terms: int

    @property
    def dimension(self) -> int:
        return 1 << self.n

    @property
    def norm_bound(self) -> float:
        return float(sum(abs(c) for c, _ in self.terms))

    def to_frame(self, p: PauliString) -> PauliString:
        return _conjugate_by_s(p) if self.frame == "sgate" else p


def _term_scalar(coeff: float, p: PauliString) -> complex:
    return coeff * p.phase


def assemble(lat: HoledLattice, g: float, mask: Optional[FieldMask] = None,
             dimension_cap: int = DIMENSION_CAP) -> SpinHamiltonian:
    """Hamiltonian term list: -g per stabilizer plus per-site field terms."""
    n = lat.n_active
    if n > dimension_cap:
        raise SpectraError(
            f"{n} spins exceeds the dimension cap {dimension_cap}")
    raw: list[tuple[float, PauliString]] = []
    for s in lat.stabilizers():
        raw.append((-g, s))
    n_stab = len(raw)
    has = [False, False, False]
    if mask is not None:
        vals = mask.values
        for site in range(n):
            hx, hy, hz = vals[site]
            if hx:
                raw.append((float(hx), PauliString.sx(n, site)))
                has[0] = True
            if hy:
                raw.append((float(hy), PauliString.sy(n, site)))
                has[1] = True
            if hz:
                raw.append((float(hz), PauliString.sz(n, site)))
                has[2] = True

    frame = "plain"
    if has[1] and not has[0]:
        frame = "sgate"
        raw = [(c, _conjugate_by_s(p)) for c, p in raw]
    dtype = np.float64
    for c, p in raw:
        if abs(_term_scalar(c, p).imag) > 0:
            dtype = np.complex128
            break
    return SpinHamiltonian(n, float(g), tuple(raw), frame, dtype, n_stab)


class _Apply:
    """Cached gather-based application of a term list."""

    def __init__(self, H: SpinHamiltonian):
        self.H = H
        self.dim = H.dimension
        self.idx = np.arange(self.dim, dtype=np.uint64)
        self.prepped = []
        for c, p in H.terms:
            scal = _term_scalar(c, p)
            # sign(t ^ x) = (-1)^{z.x} * sign(t)
            scal = scal * ((-1) ** (bin(p.z & p.x).count("1") & 1))
            if H.dtype == np.float64:
                scal = scal.real if isinstance(scal, complex) else scal
            sgn = (1 - 2 * (np.bitwise_count(self.idx & np.uint64(p.z))
                            & np.uint64(1))).astype(np.int8)
            self.prepped.append((scal, np.uint64(p.x), sgn))

    def __call__(self, v):
        v = np.asarray(v).reshape(self.dim)
        dtype = np.result_type(v.dtype, self.H.dtype)
        if v.dtype != dtype:
            v = v.astype(dtype)
        out = np.zeros(self.dim, dtype=dtype)
        for scal, x, sgn in self.prepped:
            if x:
                out += (scal * sgn) * v[self.idx ^ x]
            else:
                out += (scal * sgn) * v
        return out


def apply_pauli(p: PauliString, v: np.ndarray) -> np.ndarray:
    """P|v> for a single Pauli string on a full state vector."""
    dim = 1 << p.n
    v = np.asarray(v).reshape(dim)
    idx = np.arange(dim, dtype=np.uint64)
    sgn = 1.0 - 2.0 * (np.bitwise_count(idx & np.uint64(p.z))
                       & np.uint64(1)).astype(np.float64)
    pref = p.phase * ((-1) ** (bin(p.z & p.x).count("1") & 1))
    out = (pref * sgn) * v[(idx ^ np.uint64(p.x)).astype(np.int64)]
    return out


@dataclass(frozen=True)
class Spectrum:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray       # columns, in the Hamiltonian's frame
    residual_norms: np.ndarray
    hamiltonian: SpinHamiltonian


def lowest_eigs(H: SpinHamiltonian, k_count: int, tol: float = 1e-10,
                seed: int = 2024, maxiter: int = 2000) -> Spectrum:
    """Lowest ``k_count`` eigenpairs by blocked LOBPCG with a seeded
    random start block; deterministic for fixed seed."""
    dim = H.dimension
    k = int(k_count)
    if k < 1 or k >= dim:
        raise SpectraError(f"k_count {k} out of range for dimension {dim}")
    apply_h = _Apply(H)
    block = min(dim - 1, k + 2)
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((dim, block))
    if H.dtype == np.complex128:
        X = X + 1j * rng.standard_normal((dim, block))
    A = spla.LinearOperator((dim, dim), matvec=apply_h, dtype=H.dtype)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        vals, vecs = spla.lobpcg(A, X, largest=False, tol=tol * H.norm_bound,
                                 maxiter=maxiter)
    order = np.argsort(vals)
    vals = np.asarray(vals)[order][:k]
    vecs = np.asarray(vecs)[:, order][:, :k]
    res = np.empty(k)
    for i in range(k):
        r = apply_h(vecs[:, i]) - vals[i] * vecs[:, i]
        res[i] = np.linalg.norm(r)
    bound = max(tol * H.norm_bound, 1e-30)
    if np.any(res > 50 * bound):
        raise SpectraError(
            f"eigensolver did not converge: residuals {res}", residuals=res)
    for arr in (vals, vecs, res):
        arr.flags.writeable = False
    return Spectrum(vals, vecs, res, H)


def ground_splitting(spectrum: Spectrum, n_holes: int) -> dict:
    """Gaps within the lowest 2**n_holes levels and to the next level."""
    need = 2 ** n_holes
    vals = spectrum.eigenvalues
    if len(vals) < need + 1:
        raise SpectraError(
            f"need {need + 1} converged eigenvalues, have {len(vals)}")
    ground = vals[:need]
    return {
        "ground_levels": ground.tolist(),
        "splittings": [float(ground[i] - ground[0]) for i in range(need)],
        "excitation_gap": float(vals[need] - ground[0]),
    }


def logical_expectation(spectrum: Spectrum, logical: PauliString,
                        subspace_dim: int) -> np.ndarray:
    """Matrix <v_a| L |v_b> on the lowest ``subspace_dim`` eigenvectors."""
    H = spectrum.hamiltonian
    L = H.to_frame(logical)
    vecs = spectrum.eigenvectors[:, :subspace_dim].astype(np.complex128)
    out = np.empty((subspace_dim, subspace_dim), dtype=np.complex128)
    for b in range(subspace_dim):
        Lv = apply_pauli(L, vecs[:, b])
        for a in range(subspace_dim):
            out[a, b] = np.vdot(vecs[:, a], Lv)
    return out


def flux_basis(spectrum: Spectrum, tau_z: PauliString,
               subspace_dim: int) -> np.ndarray:
    """Rotation that diagonalizes tau_z on the degenerate subspace,
    labelling ground states by flux.  Returns the unitary R so that an
    operator matrix M on the raw eigenvectors becomes R^+ M R."""
    M = logical_expectation(spectrum, tau_z, subspace_dim)
    _, R = np.linalg.eigh((M + M.conj().T) / 2)
    return R


# ---------------------------------------------------------------------------
# closed-form quasiparticle dispersions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DispersionParams:
    g: float
    hx: float = 0.0
    hy: float = 0.0


def vortex_dispersion(params: DispersionParams, kx, ky):
    """Vortex band sqrt((xi + 2g)^2 - xi^2) with diagonal hopping
    xi = 2 hx [cos(kx+ky) + cos(kx-ky)]; lattice constant 1."""
    g, hx = params.g, params.hx
    if 4 * hx >= g:
        raise SpectraError(
            f"vortex gap closes for 4*hx >= g (hx={hx}, g={g})")
    xi = 2.0 * hx * (np.cos(np.asarray(kx) + np.asarray(ky))
                     + np.cos(np.asarray(kx) - np.asarray(ky)))
    return np.sqrt((xi + 2 * g) ** 2 - xi ** 2)


def fermion_dispersion(params: DispersionParams, kx, ky,
                       branch: str = "vertical"):
    """Fermion branches: straight-line hopping xi = 4 hy cos k along x
    (vertical-link branch) or along y (parallel-link branch)."""
    g, hy = params.g, params.hy
    if 2 * hy >= g:
        raise SpectraError(
            f"fermion gap closes for 2*hy >= g (hy={hy}, g={g})")
    if branch == "vertical":
        xi = 4.0 * hy * np.cos(np.asarray(kx))
    elif branch == "parallel":
        xi = 4.0 * hy * np.cos(np.asarray(ky))
    else:
        raise SpectraError(f"unknown fermion branch {branch!r}")
    return np.sqrt((xi + 4 * g) ** 2 - xi ** 2)


def vortex_gap(params: DispersionParams) -> float:
    g, hx = params.g, params.hx
    if 4 * hx >= g:
        raise SpectraError("vortex gap closes for 4*hx >= g")
    return 2 * g * np.sqrt(1 - 4 * hx / g)


def fermion_gap(params: DispersionParams) -> float:
    g, hy = params.g, params.hy
    if 2 * hy >= g:
        raise SpectraError("fermion gap closes for 2*hy >= g")
    return 4 * g * np.sqrt(1 - 2 * hy / g)


def dispersion_grid(params: DispersionParams, kind: str, npts: int = 512,
                    branch: str = "vertical"):
    """(kx, ky, energy) arrays over an npts x npts Brillouin-zone grid."""
    ks = np.linspace(-np.pi, np.pi, npts, endpoint=False)
    KX, KY = np.meshgrid(ks, ks, indexing="ij")
    if kind == "vortex":
        E = vortex_dispersion(params, KX, KY)
    elif kind == "fermion":
        E = fermion_dispersion(params, KX, KY, branch)
    else:
        raise SpectraError(f"unknown dispersion kind {kind!r}")
    return KX, KY, E
