"""Planar spin lattice with checkerboard plaquettes, hole punctures and
boundary-reduced stabilizers.

Geometry
--------
Spins sit on the sites (x, y) of a width x height grid, site index
``y*width + x``.  The plaquette cell (a, b) has corner sites (a, b),
(a+1, b), (a, b+1), (a+1, b+1); its parity is (a+b) mod 2.  Even cells
carry Z-type stabilizers (product of sigma^z on the corners), odd cells
X-type.  Diagonal neighbours share one site and equal parity, edge
neighbours share two sites and opposite parity, so everything commutes.

On an open boundary the interior cells alone would leave a large edge
degeneracy, so every even-parity virtual cell of the surrounding ring
is added as a boundary-reduced stabilizer (weight 2 on the edges,
weight 1 at the corners).  The resulting hole-free lattice has a unique
gapped ground state; this is validated by the degeneracy tests, not
assumed.

Holes
-----
A hole is a puncture: its plaquette stabilizers are dropped from the
group while all spins stay.  Supported shapes (cell rectangles):

* 1x2 / 2x1 domino: one Z cell and one X cell are dropped and their
  product is kept as a single fermion-parity stabilizer.  The hole then
  carries exactly one logical qubit whose label is the sigma^z loop
  around the dropped Z cell and whose flip operator is a straight
  sigma^y string running to a boundary *port* (one ring stabilizer
  excluded next to the first hole).  The string terminates there
  because both virtual cells at the port are absent from the group.
* 1x1 single cell: must be an X cell; the label is the sigma^x loop on
  its corners and the flip operator is a straight sigma^z string to the
  boundary (no port needed).

Rectangles of these sizes contain no strictly interior sites, so no
spins are removed; ``active_sites`` is always the full site set.
Multi-hole chains require same-orientation dominoes on a common band
(vertical dominoes along a row, listed west to east, or horizontal ones
along a column, south to north); pair couplings run along the
shared-corner line.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .pauli import PauliString, multiply


class LatticeError(ValueError):
    pass


OPEN = "open"
TORUS = "torus"

Cell = tuple[int, int]


def cell_parity(a: int, b: int) -> int:
    return (a + b) % 2


@dataclass(frozen=True)
class HoleSpec:
    """Cell rectangle {x0..x1} x {y0..y1} of dropped plaquettes."""

    x0: int
    y0: int
    x1: int
    y1: int

    def __post_init__(self):
        if self.x1 < self.x0 or self.y1 < self.y0:
            raise LatticeError(f"empty hole rectangle {self}")

    @property
    def cells(self) -> tuple[Cell, ...]:
        return tuple((a, b)
                     for b in range(self.y0, self.y1 + 1)
                     for a in range(self.x0, self.x1 + 1))

    @property
    def shape(self) -> tuple[int, int]:
        return (self.x1 - self.x0 + 1, self.y1 - self.y0 + 1)

    @property
    def kind(self) -> str:
        kinds = {(1, 1): "puncture", (1, 2): "domino-v",
                 (2, 1): "domino-h"}
        if self.shape not in kinds:
            raise LatticeError(
                f"unsupported hole rectangle {self.shape}; holes are a "
                f"single X plaquette or a two-plaquette domino")
        return kinds[self.shape]


@dataclass(frozen=True)
class Plaquette:
    center: tuple[float, float]
    cell: Cell
    parity: int                  # 0 = even (Z type), 1 = odd (X type)
    sites: tuple[int, ...]
    boundary_reduced: bool = False


@dataclass(frozen=True)
class HoledLattice:
    width: int
    height: int
    boundary: str
    holes: tuple[HoleSpec, ...]
    plaquettes: tuple[Plaquette, ...]
    composite_stabilizers: tuple[PauliString, ...]
    port: Optional[Cell]         # excluded ring cell, None without domino holes
    torus_form: str = ""         # 'checkerboard' or 'corner' (torus only)

    # -- basic site helpers -------------------------------------------

    @property
    def n_sites(self) -> int:
        return self.width * self.height

    @property
    def n_active(self) -> int:
        # puncture holes drop stabilizers only; every spin stays
        return self.n_sites

    @property
    def active_sites(self) -> frozenset[int]:
        return frozenset(range(self.n_sites))

    def site(self, x: int, y: int) -> int:
        if not (0 <= x < self.width and 0 <= y < self.height):
            raise LatticeError(f"site ({x},{y}) outside lattice")
        return y * self.width + x

    def site_xy(self, s: int) -> tuple[int, int]:
        return s % self.width, s // self.width

    def cell_sites(self, a: int, b: int) -> tuple[int, ...]:
        out = []
        for dx in (0, 1):
            for dy in (0, 1):
                x, y = a + dx, b + dy
                if self.boundary == TORUS:
                    out.append((y % self.height) * self.width + (x % self.width))
                elif 0 <= x < self.width and 0 <= y < self.height:
                    out.append(y * self.width + x)
        return tuple(out)

    # -- stabilizers ----------------------------------------------------

    def _plaquette_string(self, p: Plaquette) -> PauliString:
        if self.boundary == TORUS and self.torus_form == "corner":
            return _corner_form_string(self, p.cell)
        m = 0
        for s in p.sites:
            m |= 1 << s
        if p.parity == 0:
            return PauliString(self.n_sites, 0, m, 0)
        return PauliString(self.n_sites, m, 0, 0)

    def stabilizers(self) -> list[PauliString]:
        """Full generator list: plaquettes, boundary reductions, composites."""
        out = [self._plaquette_string(p) for p in self.plaquettes]
        out.extend(self.composite_stabilizers)
        return out

    def dropped_cells(self, l: int) -> tuple[Cell, ...]:
        return self.holes[l].cells

    def hole_even_odd(self, l: int) -> tuple[Optional[Cell], Optional[Cell]]:
        """(even cell, odd cell) of hole l; a puncture has no even cell."""
        ev = od = None
        for c in self.holes[l].cells:
            if cell_parity(*c) == 0:
                ev = c
            else:
                od = c
        return ev, od

    # -- logical operators -----------------------------------------------

    def logical_operators(self, l: int) -> tuple[PauliString, PauliString]:
        """(tau_z, tau_x) of hole ``l``; validated by pauli.logical_pair."""
        if not 0 <= l < len(self.holes):
            raise LatticeError(f"no hole {l}")
        hole = self.holes[l]
        ev, od = self.hole_even_odd(l)
        n = self.n_sites
        if hole.kind == "puncture":
            # label: the dropped X plaquette itself
            tau_z = PauliString.x_on(n, self.cell_sites(*od))
            # flip: straight sigma^z string from the puncture to the
            # bottom edge (charge path; ends are invisible to the group)
            a, b = od
            col = a + 1
            tau_x = PauliString.z_on(n, [self.site(col, y) for y in range(b + 1)])
            return tau_z, tau_x
        # domino: label = sigma^z loop on the dropped Z cell
        tau_z = PauliString.z_on(n, self.cell_sites(*ev))
        tau_x = PauliString.y_on(n, self._fermion_string_sites(l))
        return tau_z, tau_x

    def _string_line(self) -> tuple[str, int]:
        """(axis, coordinate) of the shared-corner line carrying fermion
        strings: ('row', y) for vertical dominoes, ('col', x) for a
        horizontal one."""
        h0 = self.holes[0]
        if h0.kind == "domino-v":
            return "row", h0.y0 + 1
        if h0.kind == "domino-h":
            return "col", h0.x0 + 1
        raise LatticeError("puncture holes carry no fermion string")

    def _fermion_string_sites(self, l: int) -> list[int]:
        """Sites of the straight sigma^y string from hole ``l`` to the port."""
        axis, c = self._string_line()
        h = self.holes[l]
        if axis == "row":
            return [self.site(x, c) for x in range(h.x0 + 1)]
        return [self.site(c, y) for y in range(h.y0 + 1)]

    # -- config round trip -------------------------------------------------

    def to_config(self) -> dict:
        return {
            "width": self.width,
            "height": self.height,
            "boundary": self.boundary,
            "holes": [{"x0": h.x0, "y0": h.y0, "x1": h.x1, "y1": h.y1}
                      for h in self.holes],
        }


def _corner_form_string(lat: HoledLattice, cell: Cell) -> PauliString:
    """Commuting plaquette operator for tori that admit no checkerboard:
    X on the base and far corner, Y on the two side corners.  The exact
    product of the four factors carries phase power 2 (two Y factors);
    keeping it makes the term set frustration free on odd tori."""
    a, b = cell
    w, h = lat.width, lat.height
    s00 = (b % h) * w + (a % w)
    s10 = (b % h) * w + ((a + 1) % w)
    s01 = ((b + 1) % h) * w + (a % w)
    s11 = ((b + 1) % h) * w + ((a + 1) % w)
    from .pauli import product
    n = lat.n_sites
    return product([PauliString.sx(n, s00), PauliString.sy(n, s10),
                    PauliString.sy(n, s01), PauliString.sx(n, s11)])


def _validate_holes(width: int, height: int,
                    holes: Sequence[HoleSpec]) -> None:
    amax, bmax = width - 2, height - 2
    for i, h in enumerate(holes):
        if h.shape not in ((1, 1), (1, 2), (2, 1)):
            raise LatticeError(
                f"hole {i}: unsupported rectangle {h.shape}; holes are a "
                f"single X plaquette or a two-plaquette domino")
        if not (0 <= h.x0 and h.x1 <= amax and 0 <= h.y0 and h.y1 <= bmax):
            raise LatticeError(f"hole {i} extends beyond the plaquette grid")
        if h.kind == "puncture" and cell_parity(h.x0, h.y0) == 0:
            raise LatticeError(
                f"hole {i}: a single-plaquette hole must sit on an X "
                f"(odd-parity) cell to carry a logical qubit")
    for i in range(len(holes)):
        si = set()
        for c in holes[i].cells:
            si.update({(c[0] + dx, c[1] + dy) for dx in (0, 1) for dy in (0, 1)})
        for j in range(i + 1, len(holes)):
            sj = set()
            for c in holes[j].cells:
                sj.update({(c[0] + dx, c[1] + dy) for dx in (0, 1) for dy in (0, 1)})
            if si & sj:
                raise LatticeError(f"holes {i} and {j} overlap")
    if len(holes) > 1:
        kinds = {h.kind for h in holes}
        if kinds == {"domino-v"}:
            if len({(h.y0, h.y1) for h in holes}) != 1:
                raise LatticeError("domino chain must share one row band")
            xs = [h.x0 for h in holes]
            if xs != sorted(xs) or len(set(xs)) != len(xs):
                raise LatticeError("holes must be listed west to east")
        elif kinds == {"domino-h"}:
            if len({(h.x0, h.x1) for h in holes}) != 1:
                raise LatticeError("domino chain must share one column band")
            ys = [h.y0 for h in holes]
            if ys != sorted(ys) or len(set(ys)) != len(ys):
                raise LatticeError("holes must be listed south to north")
        else:
            raise LatticeError(
                "multi-hole lattices require same-orientation domino holes")


def _port_cell(holes: Sequence[HoleSpec]) -> Optional[Cell]:
    dominoes = [h for h in holes if h.kind.startswith("domino")]
    if not dominoes:
        return None
    h0 = dominoes[0]
    if h0.kind == "domino-v":
        b = h0.y0 if h0.y0 % 2 == 1 else h0.y0 + 1
        return (-1, b)
    a = h0.x0 if h0.x0 % 2 == 1 else h0.x0 + 1
    return (a, -1)


def build_lattice(width: int, height: int, boundary: str,
                  holes: Iterable[HoleSpec] = ()) -> HoledLattice:
    """Construct the lattice with plaquette list and hole data.

    Plaquette ordering is deterministic: interior cells by (b, a), then
    ring reductions by (b, a); parity colouring is fixed by the cell's
    lower-left coordinate sum.
    """
    if width < 4 or height < 4:
        if boundary == TORUS and width >= 3 and height >= 3:
            pass  # small tori are useful and well defined
        else:
            raise LatticeError("lattice too small; need width, height >= 4")
    if boundary not in (OPEN, TORUS):
        raise LatticeError(f"unknown boundary {boundary!r}")
    holes = tuple(holes)
    if boundary == TORUS and holes:
        raise LatticeError("holes require an open boundary")

    if boundary == TORUS:
        form = "checkerboard" if width % 2 == 0 and height % 2 == 0 else "corner"
        plaqs = []
        lat0 = HoledLattice(width, height, boundary, (), (), (), None, form)
        for b in range(height):
            for a in range(width):
                plaqs.append(Plaquette((a + 0.5, b + 0.5), (a, b),
                                       cell_parity(a, b),
                                       lat0.cell_sites(a, b)))
        return HoledLattice(width, height, boundary, (), tuple(plaqs), (),
                            None, form)

    _validate_holes(width, height, holes)
    dropped = set()
    for h in holes:
        dropped.update(h.cells)
    port = _port_cell(holes)

    lat0 = HoledLattice(width, height, OPEN, (), (), (), None)
    plaqs = []
    for b in range(height - 1):
        for a in range(width - 1):
            if (a, b) in dropped:
                continue
            plaqs.append(Plaquette((a + 0.5, b + 0.5), (a, b),
                                   cell_parity(a, b),
                                   lat0.cell_sites(a, b)))
    for b in range(-1, height):
        for a in range(-1, width):
            if 0 <= a < width - 1 and 0 <= b < height - 1:
                continue
            if a > width - 1 or b > height - 1:
                continue
            if cell_parity(a, b) != 0:
                continue
            if port is not None and (a, b) == port:
                continue
            sites = lat0.cell_sites(a, b)
            if not sites:
                continue
            plaqs.append(Plaquette((a + 0.5, b + 0.5), (a, b), 0,
                                   sites, boundary_reduced=True))

    composites = []
    n = width * height
    for h in holes:
        if h.kind == "puncture":
            continue
        cells = h.cells
        ev = cells[0] if cell_parity(*cells[0]) == 0 else cells[1]
        od = cells[1] if ev == cells[0] else cells[0]
        ze = PauliString.z_on(n, lat0.cell_sites(*ev))
        xo = PauliString.x_on(n, lat0.cell_sites(*od))
        composites.append(multiply(ze, xo))

    return HoledLattice(width, height, OPEN, holes, tuple(plaqs),
                        tuple(composites), port)


# ---------------------------------------------------------------------------
# path metrics
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PathMetrics:
    """Hop counts of the shortest quasiparticle tunneling paths.

    vortex_loop[l]      loop length around hole l on the vortex graph
    fermion_boundary[l] straight fermion string, hole l to the port
                        (None for single-plaquette holes, whose flip
                        string is charge-flavoured)
    vortex_pair[(l,m)]  loop length enclosing holes l and m together
    fermion_pair[(l,m)] straight fermion string between holes l and m
    """

    vortex_loop: tuple[int, ...]
    fermion_boundary: tuple[Optional[int], ...]
    vortex_pair: dict
    fermion_pair: dict

    def pair_key(self, l: int) -> tuple[int, int]:
        return (l, l + 1)


def _vortex_graph(lat: HoledLattice):
    """Even-cell diagonal hopping graph, including the virtual ring.

    Nodes are even-parity cells (a, b) with a in [-1, width-1],
    b in [-1, height-1]; a diagonal hop exists iff the shared corner
    site lies in the lattice.
    """
    nodes = []
    for a in range(-1, lat.width):
        for b in range(-1, lat.height):
            if cell_parity(a, b) == 0:
                nodes.append((a, b))
    nodeset = set(nodes)
    adj = {v: [] for v in nodes}
    for (a, b) in nodes:
        for da, db in ((1, 1), (1, -1), (-1, 1), (-1, -1)):
            w = (a + da, b + db)
            if w not in nodeset:
                continue
            # shared corner site of the diagonal pair
            sx = max(a, w[0])
            sy = max(b, w[1])
            if 0 <= sx < lat.width and 0 <= sy < lat.height:
                adj[(a, b)].append(w)
    return nodes, adj


def _hop_crosses_ray(c1: Cell, c2: Cell, origin: Cell) -> bool:
    """Does the diagonal hop c1->c2 cross the upward ray from the centre
    of ``origin``?  Cell centres sit at (a+0.5, b+0.5); the ray is the
    vertical line x = a0+1 restricted to y > b0+0.5."""
    a0, b0 = origin
    west = c1 if c1[0] < c2[0] else c2
    if west[0] != a0:
        return False
    ymid = (c1[1] + c2[1] + 1) / 2.0
    return ymid > b0 + 0.5


def _shortest_enclosing_loop(lat: HoledLattice, origins: Sequence[Cell]) -> int:
    """Shortest closed walk on the vortex graph with odd winding around
    every cell in ``origins`` (breadth-first search on sheeted copies)."""
    from collections import deque

    nodes, adj = _vortex_graph(lat)
    nflags = len(origins)
    full = (1 << nflags) - 1
    best = None
    for start in nodes:
        dist = {(start, 0): 0}
        q = deque([(start, 0)])
        while q:
            v, sheet = q.popleft()
            d = dist[(v, sheet)]
            if best is not None and d >= best:
                continue
            for w in adj[v]:
                ns = sheet
                for i, o in enumerate(origins):
                    if _hop_crosses_ray(v, w, o):
                        ns ^= 1 << i
                key = (w, ns)
                if key not in dist:
                    dist[key] = d + 1
                    q.append(key)
        key = (start, full)
        if key in dist and (best is None or dist[key] < best):
            best = dist[key]
    if best is None:
        raise LatticeError("no enclosing vortex loop exists")
    return best


def path_metrics(lat: HoledLattice) -> PathMetrics:
    """Shortest-path lengths on the quasiparticle hopping graphs."""
    if lat.boundary == TORUS or not lat.holes:
        raise LatticeError("path metrics need an open lattice with holes")
    vortex_loop = []
    fermion_boundary: list[Optional[int]] = []
    for l, h in enumerate(lat.holes):
        _, od = lat.hole_even_odd(l)
        vortex_loop.append(_shortest_enclosing_loop(lat, [od]))
        if h.kind == "puncture":
            fermion_boundary.append(None)
        else:
            fermion_boundary.append(len(lat._fermion_string_sites(l)))
    vortex_pair = {}
    fermion_pair = {}
    for l in range(len(lat.holes) - 1):
        _, o1 = lat.hole_even_odd(l)
        _, o2 = lat.hole_even_odd(l + 1)
        vortex_pair[(l, l + 1)] = _shortest_enclosing_loop(lat, [o1, o2])
        h1, h2 = lat.holes[l], lat.holes[l + 1]
        if h1.kind == "domino-v" and h2.kind == "domino-v":
            fermion_pair[(l, l + 1)] = h2.x0 - h1.x0
        elif h1.kind == "domino-h" and h2.kind == "domino-h":
            fermion_pair[(l, l + 1)] = h2.y0 - h1.y0
        else:
            fermion_pair[(l, l + 1)] = None
    m = PathMetrics(tuple(vortex_loop), tuple(fermion_boundary),
                    vortex_pair, fermion_pair)
    for (l, l2), v in vortex_pair.items():
        if v < max(vortex_loop[l], vortex_loop[l2]):
            raise LatticeError("pair loop shorter than single-hole loop")
    return m


# ---------------------------------------------------------------------------
# field regions and masks
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FieldMask:
    """Per-site (hx, hy, hz) field strengths; shape (n_sites, 3)."""

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 2 or v.shape[1] != 3:
            raise LatticeError("field mask must have shape (n_sites, 3)")
        if not np.all(np.isfinite(v)):
            raise LatticeError("field mask must be finite")
        object.__setattr__(self, "values", v)

    @staticmethod
    def zeros(lat: HoledLattice) -> "FieldMask":
        return FieldMask(np.zeros((lat.n_sites, 3)))

    def __add__(self, other: "FieldMask") -> "FieldMask":
        return FieldMask(self.values + other.values)

    def nonzero_sites(self) -> list[int]:
        return [int(i) for i in np.nonzero(np.any(self.values != 0, axis=1))[0]]


def region_sites(lat: HoledLattice, region) -> list[int]:
    """Resolve a region spec to a site list.

    Region specs (dicts, JSON friendly):
      {"type": "all"}
      {"type": "annulus", "hole": l}          ring encircling hole l
      {"type": "corridor", "hole": l}         fermion string, hole l to port
      {"type": "corridor", "from": l, "to": m}
      {"type": "sites", "sites": [...]}
      {"type": "complement", "rects": [{x0,y0,x1,y1}, ...]}   shadow-free area
    """
    kind = region["type"]
    if kind == "all":
        return list(range(lat.n_sites))
    if kind == "annulus":
        l = region["hole"]
        if not 0 <= l < len(lat.holes):
            raise LatticeError(f"region references unknown hole {l}")
        _, od = lat.hole_even_odd(l)
        return sorted(lat.cell_sites(*od))
    if kind == "corridor":
        if "hole" in region:
            l = region["hole"]
            if not 0 <= l < len(lat.holes):
                raise LatticeError(f"region references unknown hole {l}")
            return sorted(lat._fermion_string_sites(l))
        l, m = region["from"], region["to"]
        if not (0 <= l < len(lat.holes) and 0 <= m < len(lat.holes)):
            raise LatticeError("corridor references unknown hole")
        axis, c = lat._string_line()
        h1, h2 = lat.holes[min(l, m)], lat.holes[max(l, m)]
        if axis == "row":
            return [lat.site(x, c) for x in range(h1.x0 + 1, h2.x0 + 1)]
        return [lat.site(c, y) for y in range(h1.y0 + 1, h2.y0 + 1)]
    if kind == "sites":
        out = []
        for s in region["sites"]:
            if not 0 <= s < lat.n_sites:
                raise LatticeError(f"site {s} outside lattice")
            out.append(int(s))
        return out
    if kind == "complement":
        shadow = set()
        for r in region["rects"]:
            for x in range(r["x0"], r["x1"] + 1):
                for y in range(r["y0"], r["y1"] + 1):
                    if 0 <= x < lat.width and 0 <= y < lat.height:
                        shadow.add(lat.site(x, y))
        return [s for s in range(lat.n_sites) if s not in shadow]
    raise LatticeError(f"unknown region type {kind!r}")


def field_mask(lat: HoledLattice, region, h_vector) -> FieldMask:
    """Uniform field ``h_vector = (hx, hy, hz)`` on a region, zero elsewhere."""
    hx, hy, hz = (float(v) for v in h_vector)
    vals = np.zeros((lat.n_sites, 3))
    for s in region_sites(lat, region):
        vals[s] = (hx, hy, hz)
    return FieldMask(vals)


# ---------------------------------------------------------------------------
# config file I/O
# ---------------------------------------------------------------------------


def lattice_from_config(cfg: dict) -> tuple[HoledLattice, FieldMask]:
    """Build lattice and summed field mask from a config dict
    {width, height, boundary, holes: [{x0,y0,x1,y1}], fields: [...]}
    where each field entry is {region: <spec>, hx, hy, hz}."""
    holes = [HoleSpec(h["x0"], h["y0"], h["x1"], h["y1"])
             for h in cfg.get("holes", [])]
    lat = build_lattice(cfg["width"], cfg["height"],
                        cfg.get("boundary", OPEN), holes)
    mask = FieldMask.zeros(lat)
    for f in cfg.get("fields", []):
        mask = mask + field_mask(lat, f["region"],
                                 (f.get("hx", 0.0), f.get("hy", 0.0),
                                  f.get("hz", 0.0)))
    return lat, mask


def load_config(path: str) -> dict:
    with open(path) as fh:
        return json.load(fh)
