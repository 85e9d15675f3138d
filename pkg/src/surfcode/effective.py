"""Effective pseudo-spin layer: tunneling closed forms, the anisotropic
Heisenberg chain over the hole qubits, unitary pulse synthesis and
adiabatic initialization.

Closed forms (hbar = 1 throughout; angles are field x duration):

    delta_E(l) = 2 (hy)^Lf / (-8 g)^(Lf - 1)      fermion string, hole l
    eps(l)     = 2 (hx)^Lv / (-4 g)^(Lv - 1)      vortex loop, hole l
    Jxx(l)     =   (hy)^Lff / (-8 g)^(Lff - 1)    fermion string, pair
    Jzz(l)     =   (hx)^Lvv / (-4 g)^(Lvv - 1)    vortex loop, pair

with hole fields hx_tilde = delta_E/2, hz_tilde = eps/2.  These are the
printed perturbative results; exact diagonalization is the oracle that
measures how far their constants sit from the microscopic model (see
the splitting comparison pipeline, which reports the ratio).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .lattice import FieldMask, HoledLattice, PathMetrics, path_metrics

SX = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SY = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SZ = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
ID2 = np.eye(2, dtype=complex)

CHAIN_CAP = 12


class EffectiveError(ValueError):
    pass


# ---------------------------------------------------------------------------
# tunneling closed forms
# ---------------------------------------------------------------------------


def fermion_splitting(g: float, hy: float, length: int) -> float:
    """delta_E = 2 hy^L / (-8g)^(L-1) for a length-L fermion string."""
    if length < 1:
        raise EffectiveError("path length must be >= 1")
    if hy == 0.0:
        return 0.0
    return 2.0 * hy ** length / (-8.0 * g) ** (length - 1)


def vortex_splitting(g: float, hx: float, length: int) -> float:
    """eps = 2 hx^L / (-4g)^(L-1) for a length-L vortex loop."""
    if length < 1:
        raise EffectiveError("loop length must be >= 1")
    if hx == 0.0:
        return 0.0
    return 2.0 * hx ** length / (-4.0 * g) ** (length - 1)


def single_qubit_fields(g: float, hx: float, hy: float,
                        metrics: PathMetrics, l: int) -> tuple[float, float]:
    """(hx_tilde, hz_tilde) of hole ``l`` from the closed forms."""
    if g <= 0:
        raise EffectiveError("g must be positive")
    lf = metrics.fermion_boundary[l]
    lv = metrics.vortex_loop[l]
    hx_t = 0.0 if lf is None else fermion_splitting(g, hy, lf) / 2.0
    hz_t = vortex_splitting(g, hx, lv) / 2.0
    return hx_t, hz_t


def pair_couplings(g: float, hx: float, hy: float,
                   metrics: PathMetrics, l: int) -> tuple[float, float]:
    """(Jxx, Jzz) between holes l and l+1 from the closed forms."""
    if g <= 0:
        raise EffectiveError("g must be positive")
    key = (l, l + 1)
    lff = metrics.fermion_pair[key]
    lvv = metrics.vortex_pair[key]
    jxx = 0.0
    if hy != 0.0 and lff is not None:
        jxx = hy ** lff / (-8.0 * g) ** (lff - 1)
    jzz = 0.0
    if hx != 0.0:
        jzz = hx ** lvv / (-4.0 * g) ** (lvv - 1)
    return jxx, jzz


# ---------------------------------------------------------------------------
# the chain
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EffectiveChain:
    """Open anisotropic pseudo-spin chain
    H = sum_l (Jxx_l tau^x_l tau^x_{l+1} + Jzz_l tau^z_l tau^z_{l+1})
      + sum_l (hx_l tau^x_l + hz_l tau^z_l)."""

    n: int
    jxx: tuple[float, ...]
    jzz: tuple[float, ...]
    hx: tuple[float, ...]
    hz: tuple[float, ...]

    def __post_init__(self):
        if self.n < 1:
            raise EffectiveError("chain needs n >= 1")
        if len(self.jxx) != self.n - 1 or len(self.jzz) != self.n - 1:
            raise EffectiveError("need n-1 pair couplings")
        if len(self.hx) != self.n or len(self.hz) != self.n:
            raise EffectiveError("need n on-site fields")
        for v in (*self.jxx, *self.jzz, *self.hx, *self.hz):
            if not np.isfinite(v):
                raise EffectiveError("chain coefficients must be finite")

    def matrix(self) -> np.ndarray:
        dim = 2 ** self.n
        H = np.zeros((dim, dim), dtype=complex)

        def kron_at(op, l):
            mats = [ID2] * self.n
            mats[l] = op
            out = mats[0]
            for m in mats[1:]:
                out = np.kron(out, m)
            return out

        for l in range(self.n - 1):
            if self.jxx[l]:
                H += self.jxx[l] * (kron_at(SX, l) @ kron_at(SX, l + 1))
            if self.jzz[l]:
                H += self.jzz[l] * (kron_at(SZ, l) @ kron_at(SZ, l + 1))
        for l in range(self.n):
            if self.hx[l]:
                H += self.hx[l] * kron_at(SX, l)
            if self.hz[l]:
                H += self.hz[l] * kron_at(SZ, l)
        return H

    def spectrum(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.matrix())


def _uniform_component(mask: FieldMask, sites: Sequence[int],
                       comp: int) -> float:
    """Field component on a path: must be uniform over the path sites;
    zero anywhere on the path disables the coupling."""
    vals = mask.values[list(sites), comp]
    if np.any(vals == 0.0):
        return 0.0
    v0 = vals[0]
    if not np.allclose(vals, v0):
        raise EffectiveError(
            "field must be uniform along a tunneling path")
    return float(v0)


def build_chain(lat: HoledLattice, g: float, mask: FieldMask) -> EffectiveChain:
    """Chain coefficients from the field mask, nearest neighbours only.

    Each coupling reads the field component on its own tunneling path
    (loop sites for vortex terms, string sites for fermion terms); a
    region with zero field on any path site contributes a zero
    coefficient.
    """
    n = len(lat.holes)
    if n < 1:
        raise EffectiveError("chain needs at least one hole")
    for h in lat.holes:
        if h.kind == "puncture":
            raise EffectiveError(
                "chain coefficients need domino holes (single-plaquette "
                "holes have a charge-flavoured flip string)")
    metrics = path_metrics(lat)
    hx_t, hz_t, jxx, jzz = [], [], [], []
    for l in range(n):
        _, od = lat.hole_even_odd(l)
        loop_sites = lat.cell_sites(*od)
        string_sites = lat._fermion_string_sites(l)
        hx_loc = _uniform_component(mask, loop_sites, 0)
        hy_loc = _uniform_component(mask, string_sites, 1)
        a, b = single_qubit_fields(g, hx_loc, hy_loc, metrics, l)
        hx_t.append(a)
        hz_t.append(b)
    for l in range(n - 1):
        _, o1 = lat.hole_even_odd(l)
        _, o2 = lat.hole_even_odd(l + 1)
        pair_loop = sorted(set(lat.cell_sites(*o1)) | set(lat.cell_sites(*o2)))
        axis, c = lat._string_line()
        h1, h2 = lat.holes[l], lat.holes[l + 1]
        if axis == "row":
            corridor = [lat.site(x, c) for x in range(h1.x0 + 1, h2.x0 + 1)]
        else:
            corridor = [lat.site(c, y) for y in range(h1.y0 + 1, h2.y0 + 1)]
        hx_loc = _uniform_component(mask, pair_loop, 0)
        hy_loc = _uniform_component(mask, corridor, 1)
        a, b = pair_couplings(g, hx_loc, hy_loc, metrics, l)
        jxx.append(a)
        jzz.append(b)
    return EffectiveChain(n, tuple(jxx), tuple(jzz), tuple(hx_t), tuple(hz_t))


# ---------------------------------------------------------------------------
# states and evolution
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PseudoSpinState:
    """Unit vector over the |m_1 ... m_n> basis (m=0 is 'up')."""

    amplitudes: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if v.size == 0 or v.size & (v.size - 1):
            raise EffectiveError("amplitude count must be a power of two")
        nrm = np.linalg.norm(v)
        if abs(nrm - 1.0) > 1e-12:
            raise EffectiveError(f"state norm {nrm} is not 1")
        object.__setattr__(self, "amplitudes", v)

    @property
    def n(self) -> int:
        return int(np.log2(self.amplitudes.size))

    @staticmethod
    def basis(n: int, bits: int = 0) -> "PseudoSpinState":
        v = np.zeros(2 ** n, dtype=complex)
        v[bits] = 1.0
        return PseudoSpinState(v)

    @staticmethod
    def all_up(n: int) -> "PseudoSpinState":
        return PseudoSpinState.basis(n, 0)

    def fidelity(self, other: "PseudoSpinState") -> float:
        return float(abs(np.vdot(self.amplitudes, other.amplitudes)) ** 2)


def evolve(chain: EffectiveChain, state: PseudoSpinState,
           duration: float) -> PseudoSpinState:
    """exp(-i H t)|state> by exact eigendecomposition of the chain."""
    if chain.n > CHAIN_CAP:
        raise EffectiveError(f"chain size exceeds cap {CHAIN_CAP}")
    if chain.n != state.n:
        raise EffectiveError("state size does not match chain")
    H = chain.matrix()
    w, V = np.linalg.eigh(H)
    phases = np.exp(-1j * w * duration)
    amps = V @ (phases * (V.conj().T @ state.amplitudes))
    amps = amps / np.linalg.norm(amps)
    return PseudoSpinState(amps)


# ---------------------------------------------------------------------------
# gate synthesis
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Pulse:
    axis: str        # 'x' or 'z' (pseudo-spin axis)
    fieldval: float  # effective field driving the rotation
    duration: float

    @property
    def angle(self) -> float:
        return self.fieldval * self.duration


@dataclass(frozen=True)
class GateSchedule:
    target: int
    pulses: tuple[Pulse, ...]

    def unitary(self) -> np.ndarray:
        U = np.eye(2, dtype=complex)
        for p in self.pulses:
            gen = SZ if p.axis == "z" else SX
            U = _expi(-p.angle, gen) @ U
        return U


def _expi(angle: float, gen: np.ndarray) -> np.ndarray:
    # exp(i*angle*gen) for gen^2 = 1
    return np.cos(angle) * ID2 + 1j * np.sin(angle) * gen


def rotation_unitary(theta: float, phi: float, gamma: float) -> np.ndarray:
    """Closed-form rotation exp(-i gamma Z) exp(-i phi X) exp(-i theta Z)."""
    return (_expi(-gamma, SZ) @ _expi(-phi, SX) @ _expi(-theta, SZ))


def rotation_gate(l: int, theta: float, phi: float, gamma: float,
                  hx_tilde: float, hz_tilde: float
                  ) -> tuple[GateSchedule, np.ndarray]:
    """Three-pulse schedule realizing the rotation on qubit ``l``.

    Pulse durations are angle / effective field (hbar = 1): the z pulses
    need hz_tilde != 0, the x pulse hx_tilde != 0, unless the angle is
    zero, in which case the pulse is dropped.
    """
    pulses = []
    for angle, axis in ((theta, "z"), (phi, "x"), (gamma, "z")):
        if angle == 0.0:
            continue
        drive = hz_tilde if axis == "z" else hx_tilde
        if drive == 0.0:
            raise EffectiveError(
                f"nonzero {axis} rotation requested with zero drive field")
        pulses.append(Pulse(axis, drive, angle / drive))
    sched = GateSchedule(l, tuple(pulses))
    return sched, rotation_unitary(theta, phi, gamma)


def pi8_gate(hx_tilde: float, hz_tilde: float, l: int = 0):
    return rotation_gate(l, 0.0, np.pi / 8, np.pi / 8, hx_tilde, hz_tilde)


def hadamard_gate(hx_tilde: float, hz_tilde: float, l: int = 0):
    return rotation_gate(l, 7 * np.pi / 4, np.pi / 4, np.pi / 4,
                         hx_tilde, hz_tilde)


# ---------------------------------------------------------------------------
# adiabatic initialization
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AdiabaticSchedule:
    """h(t) = h0 * exp(-t0/|t|) on t in [-T_total, 0); h -> h0 at early
    times and h -> 0 as t -> 0."""

    h0: float
    t0: float
    T_total: float
    steps: int

    def __post_init__(self):
        if self.T_total <= 0 or self.steps < 1 or self.t0 < 0:
            raise EffectiveError("invalid adiabatic schedule")

    def h(self, t: float) -> float:
        if t >= 0.0:
            return 0.0
        return self.h0 * np.exp(-self.t0 / abs(t))


@dataclass(frozen=True)
class ChainTemplate:
    """Static chain data plus the geometry lengths that convert the
    ramped x field into time-dependent z couplings."""

    base: EffectiveChain
    vortex_loop: tuple[int, ...]
    vortex_pair: tuple[int, ...]

    def at_field(self, g: float, hx: float) -> EffectiveChain:
        hz = []
        for l in range(self.base.n):
            hz.append(self.base.hz[l]
                      + vortex_splitting(g, hx, self.vortex_loop[l]) / 2.0)
        jzz = []
        for l in range(self.base.n - 1):
            extra = 0.0
            if hx != 0.0:
                L = self.vortex_pair[l]
                extra = hx ** L / (-4.0 * g) ** (L - 1)
            jzz.append(self.base.jzz[l] + extra)
        return EffectiveChain(self.base.n, self.base.jxx, tuple(jzz),
                              self.base.hx, tuple(hz))


def adiabatic_init(template: ChainTemplate, schedule: AdiabaticSchedule,
                   start_state: Optional[PseudoSpinState] = None,
                   g: float = 1.0,
                   trace: Optional[list] = None
                   ) -> tuple[PseudoSpinState, float]:
    """Propagate through the ramp with piecewise-constant steps.

    Default start state is the ground state of the initial Hamiltonian.
    Returns the final state and its fidelity to |up...up>.  Passing a
    list as ``trace`` records (t, h(t), fidelity) after every step.
    """
    n = template.base.n
    if n > CHAIN_CAP:
        raise EffectiveError(f"chain size exceeds cap {CHAIN_CAP}")
    T, steps = schedule.T_total, schedule.steps
    dt = T / steps
    times = [-T + (i + 0.5) * dt for i in range(steps)]
    if start_state is None:
        H0 = template.at_field(g, schedule.h(-T)).matrix()
        w, V = np.linalg.eigh(H0)
        start_state = PseudoSpinState(V[:, 0])
    if start_state.n != n:
        raise EffectiveError("start state size does not match template")
    target = PseudoSpinState.all_up(n)
    state = start_state
    for t in times:
        chain = template.at_field(g, schedule.h(t))
        state = evolve(chain, state, dt)
        if trace is not None:
            trace.append((t + 0.5 * dt, schedule.h(t),
                          state.fidelity(target)))
    nrm = np.linalg.norm(state.amplitudes)
    if abs(nrm - 1.0) > 1e-8:
        raise EffectiveError(f"norm drift {abs(nrm-1.0):.2e}; step too coarse")
    return state, state.fidelity(target)
