"""Constructive Calderon-Zygmund decomposition into local atoms.

The pipeline thresholds the grand maximal function on dyadic levels,
covers each superlevel set with Whitney cubes, builds a smooth partition
of unity, removes local polynomial projections, and assembles the
cross-level corrected pieces.  The telescoping identity makes the grid
reconstruction exact up to floating-point accumulation; the sub-threshold
remainder is packaged as moment-free unit-cube atoms.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np
from scipy.ndimage import distance_transform_edt

from .errors import ConstructionError, DecompositionRangeError, \
    InvalidDataError, NoBoundaryError, PreconditionError, UnderdeterminedError
from .grid import Cube, GridFunction
from .maximal import grand_maximal
from .reports import Report
from .slice_norms import SliceParams, cube_indicator_slice_norm, slice_norm

WHITNEY_DILATION = 9.0 / 8.0


def overlap_max(n):
    """Bounded-overlap cap for the dilated Whitney cubes."""
    return 12 ** n


# -- polynomials ------------------------------------------------------------

def multi_indices(n, d):
    """All exponent tuples alpha with |alpha| <= d, in graded order."""
    out = []
    for total in range(d + 1):
        if n == 1:
            out.append((total,))
        else:
            out.extend((a, total - a) for a in range(total + 1))
    return out


@dataclass
class Polynomial:
    """A polynomial in coordinates centered/scaled to a reference cube.

    The basis monomials are u^alpha with u = (x - center) / scale, which
    keeps the moment systems well conditioned independently of cube size.
    """

    center: tuple
    scale: float
    degree: int
    coeffs: np.ndarray

    @property
    def n(self):
        return len(self.center)

    def __call__(self, pts):
        pts = np.asarray(pts, dtype=float)
        if self.n == 1 and pts.ndim >= 1 and pts.shape[-1] != 1:
            pts = pts[..., None]
        u = (pts - np.asarray(self.center)) / self.scale
        out = np.zeros(u.shape[:-1])
        for alpha, c in zip(multi_indices(self.n, self.degree), self.coeffs):
            term = np.ones(u.shape[:-1])
            for d, a in enumerate(alpha):
                if a:
                    term = term * u[..., d] ** a
            out += c * term
        return out

    def on_grid(self, g):
        """Sample on the cells of a grid function's box."""
        return GridFunction(g.origin, g.h, self(g.centers()), check=False)


def _design_matrix(pts, center, scale, n, d):
    u = (np.atleast_2d(pts) - np.asarray(center)) / scale
    cols = []
    for alpha in multi_indices(n, d):
        col = np.ones(u.shape[0])
        for dim, a in enumerate(alpha):
            if a:
                col = col * u[:, dim] ** a
        cols.append(col)
    return np.stack(cols, axis=1)


def minimizing_polynomial(f, Q, d):
    """The degree-<= d polynomial matching f's moments on the cube Q.

    Characterized by int_Q (f - P) x^alpha = 0 for all |alpha| <= d and
    solved through the Gram system of the centered/scaled monomials.
    """
    mask = f.cell_mask(Q)
    idx = np.argwhere(mask)
    dim = len(multi_indices(f.n, d))
    if idx.shape[0] < dim:
        raise UnderdeterminedError(
            f"cube holds {idx.shape[0]} cells, need {dim}")
    pts = f.centers()[mask]
    V = _design_matrix(pts, Q.center, Q.side, f.n, d)
    G = V.T @ V
    m = V.T @ f.values[mask]
    try:
        coeffs = np.linalg.solve(G, m)
    except np.linalg.LinAlgError as exc:
        raise UnderdeterminedError("singular moment system") from exc
    return Polynomial(Q.center, Q.side, d, coeffs)


def weighted_projection(g, eta, d):
    """Projection of g onto degree-<= d polynomials in the eta-weighted norm.

    Characterized by <g - c, q eta> = 0 for every polynomial q of degree
    at most d; only cells where eta is positive enter the system.
    """
    g._require_compatible(eta)
    lo, ext = g.union_box(eta)
    gv = g.embed(lo, ext)
    w = eta.embed(lo, ext).values
    mass = float(w.sum())
    if mass <= 0:
        raise UnderdeterminedError("weight has nonpositive mass")
    bounds = eta.support_bounds()
    center = tuple((a + b) / 2 for a, b in zip(*bounds))
    scale = max(float(b - a) for a, b in zip(*bounds))
    mask = w > 0
    pts = gv.centers()[mask]
    V = _design_matrix(pts, center, scale, g.n, d)
    wm = w[mask]
    G = V.T @ (V * wm[:, None])
    m = V.T @ (gv.values[mask] * wm)
    try:
        coeffs = np.linalg.solve(G, m)
    except np.linalg.LinAlgError as exc:
        raise UnderdeterminedError("degenerate weighted moment system") \
            from exc
    return Polynomial(center, scale, d, coeffs)


# -- Whitney covering and partition of unity --------------------------------

def whitney_decompose(O):
    """Dyadic Whitney cubes for the open set {O > 0}.

    Cubes satisfy diam(Q) <= dist(Q, complement) with the distance taken
    to the complement cells (the outside of the box counts as
    complement); single-cell cubes are emitted as-is at the grid floor.
    """
    mask = O.values > 0
    if not mask.any():
        return []
    if mask.all():
        raise NoBoundaryError("open set fills the sampled box")
    n, h = O.n, O.h
    padded = np.pad(mask, 1)
    edt = distance_transform_edt(padded)
    edt = edt[tuple(slice(1, -1) for _ in range(n))] * h
    sqrt_n = np.sqrt(n)
    top = 1 << max(int(m - 1).bit_length() for m in O.extents)
    cubes = []

    def visit(idx0, m):
        sl = tuple(slice(max(i, 0), min(i + m, ext))
                   for i, ext in zip(idx0, O.extents))
        if any(s.start >= s.stop for s in sl):
            return
        sub = mask[sl]
        if not sub.any():
            return
        inside_box = all(s.stop - s.start == m for s in sl)
        if inside_box and sub.all():
            dist = float(edt[sl].min()) - h * sqrt_n
            if dist >= m * h * sqrt_n or m == 1:
                cubes.append(_block_cube(O, idx0, m))
                return
        elif m == 1:
            cubes.append(_block_cube(O, idx0, 1))
            return
        half = m // 2
        for offs in product((0, half), repeat=n):
            visit(tuple(i + o for i, o in zip(idx0, offs)), half)

    visit((0,) * n, top)
    return cubes


def _block_cube(O, idx0, m):
    center = tuple(O.origin[d] + (idx0[d] + m / 2) * O.h for d in range(O.n))
    return Cube(center, m * O.h)


def _axis_bump(u):
    out = np.zeros_like(u)
    inside = np.abs(u) < 1.0
    out[inside] = np.exp(-1.0 / (1.0 - u[inside] ** 2))
    return out


def partition_of_unity(cubes, O):
    """Smooth bumps on the dilated cubes, normalized to sum to 1_O.

    Each bump lives on (9/8)Q as a product of one-dimensional profiles;
    normalization by the total makes the sum exactly 1 on the cells of O
    and exactly 0 off it.
    """
    mask = O.values > 0
    if not cubes:
        if mask.any():
            raise ConstructionError("nonempty open set with no cover")
        return []
    pts = O.centers()
    betas = []
    for Q in cubes:
        rho = WHITNEY_DILATION * Q.side / 2
        b = np.ones(O.extents)
        for d in range(O.n):
            b = b * _axis_bump((pts[..., d] - Q.center[d]) / rho)
        betas.append(b)
    total = np.sum(betas, axis=0)
    if np.any(mask & (total <= 0)):
        raise ConstructionError("partition of unity has an uncovered cell")
    safe = np.where(total > 0, total, 1.0)
    return [GridFunction(O.origin, O.h, np.where(mask, b / safe, 0.0),
                         check=False)
            for b in betas]


# -- atoms and decompositions -----------------------------------------------

@dataclass
class Atom:
    """A local atom: cube, samples, size exponent, degree, provenance."""

    cube: Cube
    values: GridFunction
    r: float
    degree: int
    level: int
    index: int
    lam: float


@dataclass
class CZParams:
    """Free parameters of the decomposition pipeline."""

    slice_params: SliceParams
    maximal: MaximalParams
    d: int = 0
    r: float = np.inf
    s: float = 0.81
    c0: float = 4.5
    tol_moment: float = 1e-8
    tol_rec: float = 1e-6
    max_levels: int = 40

    def require_degree(self, n):
        pmin = min(self.slice_params.phi.p_minus, self.slice_params.q, 1.0)
        need = int(np.floor(n * (1.0 / pmin - 1.0)))
        if self.d < need:
            raise PreconditionError(
                f"degree d={self.d} below the required {need}")


@dataclass
class Decomposition:
    """Atoms by level plus the unpackaged remainder (normally zero)."""

    entries: list
    j_lo: int
    j_hi: int
    residual: GridFunction
    params: CZParams
    pointwise_constant: float = 0.0

    def __len__(self):
        return len(self.entries)


def _level_pieces(f, m, j, params):
    """Whitney cubes, partition of unity and bad parts at one level."""
    O = GridFunction(m.origin, m.h, (m.values > 2.0 ** j).astype(float),
                     check=False)
    cubes = whitney_decompose(O)
    etas = partition_of_unity(cubes, O)
    small = [Q.side < 1.0 for Q in cubes]
    polys = []
    b_parts = []
    for Q, eta, is_small in zip(cubes, etas, small):
        if is_small:
            c = weighted_projection(f, eta, params.d)
            b = (f.values - c.on_grid(f).values) * eta.values
        else:
            c = None
            b = f.values * eta.values
        polys.append(c)
        b_parts.append(b)
    return {"cubes": cubes, "etas": etas, "small": small,
            "polys": polys, "b": b_parts}


def _assemble_level(f, level, nxt, params):
    """The corrected pieces A_{j,k} from levels j and j+1."""
    if nxt is None:
        return [b.copy() for b in level["b"]]
    b_next = np.sum(nxt["b"], axis=0) if nxt["b"] else 0.0
    out = []
    for eta_k, b_k in zip(level["etas"], level["b"]):
        A = b_k - b_next * eta_k.values
        for i, (eta_i, c_i, is_small) in enumerate(
                zip(nxt["etas"], nxt["polys"], nxt["small"])):
            if not is_small:
                continue
            if not np.any(eta_i.values * eta_k.values):
                continue
            g = GridFunction(f.origin, f.h,
                             (f.values - c_i.on_grid(f).values)
                             * eta_k.values, check=False)
            c_ki = weighted_projection(g, eta_i, params.d)
            A = A + c_ki.on_grid(f).values * eta_i.values
        out.append(A)
    return out


def _crop(values, origin, h):
    """Smallest-box grid function holding the nonzero samples."""
    mask = values != 0.0
    if not mask.any():
        return None
    idx = np.argwhere(mask)
    lo = idx.min(axis=0)
    hi = idx.max(axis=0) + 1
    sl = tuple(slice(a, b) for a, b in zip(lo, hi))
    new_origin = tuple(origin[d] + lo[d] * h for d in range(values.ndim))
    return GridFunction(new_origin, h, values[sl].copy(), check=False)


def _moment_slack(g, cube, d):
    """Worst relative moment of g against the tolerance scaling."""
    l1 = g.lp_norm(1)
    if l1 == 0:
        return 0.0
    pts = g.centers()
    if g.n == 1:
        pts = pts[..., None] if pts.ndim == 1 else pts
    worst = 0.0
    for alpha in multi_indices(g.n, d):
        mono = np.ones(g.extents)
        for dim, a in enumerate(alpha):
            if a:
                mono = mono * pts[..., dim] ** a
        mom = float((g.values * mono).sum() * g.cell_volume)
        scale = l1 * cube.side ** sum(alpha)
        worst = max(worst, abs(mom) / scale)
    return worst


def _package_atom(A_vals, grid, Q_star, j, index, params, norms):
    """Wrap one assembled piece as a scaled atom on an enlarged cube."""
    piece = _crop(A_vals, grid.origin, grid.h)
    if piece is None:
        return None
    lo, hi = piece.support_bounds()
    half = max(max(abs(float(a) - c), abs(float(b) - c))
               for a, b, c in zip(lo, hi, Q_star.center))
    side_needed = 2 * half + grid.h
    side = max(params.c0 * Q_star.side, side_needed)
    if side < 1.0:
        if _moment_slack(piece, Cube(Q_star.center, side), params.d) \
                > params.tol_moment:
            side = max(1.0, side_needed)
    cube = Cube(Q_star.center, side)
    key = round(side / grid.h)
    if key not in norms:
        norms[key] = cube_indicator_slice_norm(
            params.slice_params, side, grid.h, grid.n)
    sup = piece.max_abs()
    c_jk = max(params.c0, sup / 2.0 ** j)
    lam = c_jk * 2.0 ** j * norms[key]
    return Atom(cube=cube, values=piece / lam, r=params.r, degree=params.d,
                level=j, index=index, lam=lam)


def cz_decompose(f, params):
    """Decompose f into local atoms along dyadic maximal-function levels.

    Levels run from the top threshold down to the first level whose
    superlevel set swallows the support box dilated to unit size; the
    remainder below that level needs no moment conditions and is emitted
    as unit-cube atoms.
    """
    params.require_degree(f.n)
    if not np.all(np.isfinite(f.values)):
        raise InvalidDataError("non-finite sample in f")
    zero = GridFunction(f.origin, f.h, np.zeros(f.extents), check=False)
    if f.max_abs() == 0:
        return Decomposition([], 0, -1, zero, params)
    mp = params.maximal
    m = grand_maximal(f, mp.dictionary, mp.ladder).pad(2)
    j_hi = int(np.ceil(np.log2(m.max_abs()))) - 1
    target = _unit_dilated_support_mask(f, m)
    j_lo = None
    for j in range(j_hi, j_hi - params.max_levels - 1, -1):
        if np.all(m.values[target] > 2.0 ** j):
            j_lo = j
            break
    if j_lo is None:
        raise DecompositionRangeError(
            f"no level within {params.max_levels} of {j_hi} covers the "
            f"dilated support (min maximal value on it: "
            f"{float(m.values[target].min()):.3e})")

    fb = f.embed(m.origin, m.extents)
    entries = []
    norms = {}
    nxt = None
    b_lo = None
    for j in range(j_hi, j_lo - 1, -1):
        level = _level_pieces(fb, m, j, params)
        pieces = _assemble_level(fb, level, nxt, params)
        for k, A_vals in enumerate(pieces):
            atom = _package_atom(A_vals, fb, level["cubes"][k], j, k,
                                 params, norms)
            if atom is not None:
                entries.append(atom)
        nxt = level
        b_lo = np.sum(level["b"], axis=0) if level["b"] else 0.0
    g_res = fb.values - b_lo
    entries.extend(_residual_atoms(g_res, fb, j_lo, params, norms))
    K = max((a.lam * a.values.max_abs() / 2.0 ** a.level for a in entries),
            default=0.0)
    return Decomposition(entries, j_lo, j_hi, zero, params,
                         pointwise_constant=K)


def _unit_dilated_support_mask(f, m):
    """Cells of m inside f's support box expanded to side >= 1 per axis.

    The support is measured above a relative floor: cells holding only
    denormal-scale values would otherwise drag the level range down by
    dozens of dyadic levels without changing the residual packaging.
    """
    lo, hi = f.support_bounds(tol=f.max_abs() * 1e-12)
    mask = np.ones(m.extents, dtype=bool)
    for d in range(m.n):
        mid = (lo[d] + hi[d]) / 2
        half = max((hi[d] - lo[d]) / 2, 0.5)
        centers = m.axis_centers(d)
        ax = (centers > mid - half) & (centers < mid + half)
        shape = [1] * m.n
        shape[d] = -1
        mask &= ax.reshape(shape)
    return mask


def _residual_atoms(values, grid, j_lo, params, norms):
    """Package the sub-threshold remainder as unit-cube atoms."""
    piece_all = _crop(values, grid.origin, grid.h)
    if piece_all is None:
        return []
    lo, hi = piece_all.support_bounds()
    key = round(1.0 / grid.h)
    if key not in norms:
        norms[key] = cube_indicator_slice_norm(
            params.slice_params, 1.0, grid.h, grid.n)
    out = []
    index = 0
    corners = [range(int(np.floor(a)), int(np.ceil(b)) + 1)
               for a, b in zip(lo, hi)]
    full = GridFunction(grid.origin, grid.h, values, check=False)
    for corner in product(*corners):
        cube = Cube(tuple(c + 0.5 for c in corner), 1.0)
        piece = _crop(full.restrict(cube).values, grid.origin, grid.h)
        if piece is None:
            continue
        lam = piece.max_abs() * norms[key]
        out.append(Atom(cube=cube, values=piece / lam, r=params.r,
                        degree=params.d, level=j_lo, index=index, lam=lam))
        index += 1
    return out


def reconstruct(dec):
    """Sum of lambda * atom plus the remainder, in a fixed entry order."""
    total = dec.residual
    for atom in sorted(dec.entries, key=lambda a: (a.level, a.index,
                                                   a.cube.center)):
        total = total + atom.lam * atom.values
    return total


def validate_atom(atom, slice_params, tol_moment=1e-8, tol_size=1e-6):
    """Check support, size and (small cubes) moment conditions of an atom.

    Violations are rows of the report, not errors; each row carries the
    measured value, the bound and the signed slack in log scale.
    """
    report = Report("atom_validation",
                    ["check", "measured", "bound", "ok"])
    g = atom.values
    outside = g.restrict(atom.cube).values - g.values
    support_err = float(np.abs(outside).max(initial=0.0))
    report.add("support", support_err, 0.0, support_err == 0.0)

    norm_1q = cube_indicator_slice_norm(slice_params, atom.cube.side, g.h,
                                        g.n)
    if np.isinf(atom.r):
        size = g.max_abs()
        bound = 1.0 / norm_1q
    else:
        size = g.lp_norm(atom.r)
        bound = atom.cube.volume ** (1.0 / atom.r) / norm_1q
    report.add("size", size, bound, size <= bound * (1 + tol_size))

    if atom.cube.side < 1.0:
        slack = _moment_slack(g, atom.cube, atom.degree)
        report.add("moments", slack, tol_moment, slack <= tol_moment)
    report.summary["valid"] = all(report.column("ok"))
    report.summary["size_slack"] = np.log(size / bound) if size > 0 \
        else -np.inf
    return report


def atomic_quasinorm(dec, s, tol=1e-10):
    """Slice norm of the s-aggregated cube envelope of the decomposition.

    Evaluates the defining functional of the atomic quasi-norm for the
    given (finite) decomposition, an upper bound for the infimum over all
    decompositions.
    """
    sp = dec.params.slice_params
    s_cap = min(sp.phi.p_minus, sp.q, 1.0)
    if not 0 < s < s_cap:
        raise PreconditionError(
            f"aggregation exponent s={s} outside (0, {s_cap})")
    if not dec.entries:
        return 0.0
    h = dec.entries[0].values.h
    lo = np.min([np.asarray(a.cube.lo) for a in dec.entries], axis=0)
    hi = np.max([np.asarray(a.cube.hi) for a in dec.entries], axis=0)
    origin = np.floor(lo / h) * h
    ext = tuple(int(np.ceil((b - a) / h)) + 1 for a, b in zip(origin, hi))
    acc = GridFunction(origin, h, np.zeros(ext), check=False)
    norms = {}
    for atom in dec.entries:
        key = round(atom.cube.side / h)
        if key not in norms:
            norms[key] = cube_indicator_slice_norm(sp, atom.cube.side, h,
                                                   acc.n)
        mask = acc.cell_mask(atom.cube)
        acc.values[mask] += (atom.lam / norms[key]) ** s
    env = GridFunction(origin, h, acc.values ** (1.0 / s), check=False)
    return slice_norm(env, sp, tol)


# -- serialization ----------------------------------------------------------

def save_decomposition(dec, directory):
    """Write a manifest plus one grid file per atom; bit-exact round trip."""
    import os

    os.makedirs(directory, exist_ok=True)
    lines = [f"decomposition {dec.j_lo} {dec.j_hi} "
             f"{repr(float(dec.pointwise_constant))} "
             f"{len(dec.entries)}"]
    for i, atom in enumerate(dec.entries):
        name = f"atom_{i:04d}.grid"
        atom.values.save(os.path.join(directory, name))
        center = " ".join(repr(float(c)) for c in atom.cube.center)
        lines.append(f"{atom.level} {atom.index} "
                     f"{repr(float(atom.lam))} "
                     f"{repr(float(atom.cube.side))} "
                     f"{atom.r} {atom.degree} {name} {center}")
    dec.residual.save(os.path.join(directory, "residual.grid"))
    with open(os.path.join(directory, "manifest.txt"), "w") as fh:
        fh.write("\n".join(lines) + "\n")


def load_decomposition(directory, params):
    import os

    with open(os.path.join(directory, "manifest.txt")) as fh:
        lines = fh.read().strip().split("\n")
    head = lines[0].split()
    if head[0] != "decomposition":
        raise InvalidDataError("not a decomposition manifest")
    j_lo, j_hi = int(head[1]), int(head[2])
    K = float(head[3])
    entries = []
    for line in lines[1:]:
        parts = line.split()
        level, index = int(parts[0]), int(parts[1])
        lam, side = float(parts[2]), float(parts[3])
        r, degree, name = float(parts[4]), int(parts[5]), parts[6]
        center = tuple(float(v) for v in parts[7:])
        values = GridFunction.load(os.path.join(directory, name))
        entries.append(Atom(cube=Cube(center, side), values=values, r=r,
                            degree=degree, level=level, index=index,
                            lam=lam))
    residual = GridFunction.load(os.path.join(directory, "residual.grid"))
    return Decomposition(entries, j_lo, j_hi, residual, params, K)
