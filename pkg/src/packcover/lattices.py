"""Lattices under arbitrary norms.

Shortest nonzero vector and distance-to-lattice by depth-first enumeration in
Gram-Schmidt coordinates (Euclidean radius bounds derived from the
norm-equivalence constants of the descriptor, results re-verified by direct
norm evaluation), certified covering radii via Lipschitz grids with adaptive
refinement, gamma* of a lattice, simulated-annealing lattice search, Voronoi
gauges, and torus saturation.
"""

from __future__ import annotations

import heapq
import itertools
import json
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .intervals import CertifiedInterval
from .spaces import Space, VoronoiGauge, euclid_bounds, eval_norm, eval_norm_many


class LatticeError(ValueError):
    pass


class DegenerateBasisError(LatticeError):
    pass


class RankDeficientError(LatticeError):
    """Operation requires a full-rank lattice (covering radius is infinite)."""


class EnumerationBudgetError(LatticeError):
    pass


class Lattice:
    """Integer span of `basis` rows (m independent vectors in R^n, m <= n)."""

    def __init__(self, basis):
        B = np.asarray(basis, dtype=float)
        if B.ndim != 2 or B.shape[0] < 1:
            raise LatticeError("basis must be a non-empty 2-d array")
        if B.shape[0] > B.shape[1]:
            raise LatticeError("more basis vectors than ambient dimensions")
        self.basis = B
        self.rank, self.ambient = B.shape
        self.gram = B @ B.T
        scale = float(np.max(np.abs(self.gram))) or 1.0
        det = float(np.linalg.det(self.gram))
        if det <= 1e-12 * scale**self.rank:
            raise DegenerateBasisError("basis vectors are linearly dependent")
        # triangular factor with ||k @ B||_2 = ||R k||_2
        q, r = np.linalg.qr(B.T)
        signs = np.sign(np.diag(r))
        signs[signs == 0] = 1.0
        self.R = r * signs[:, None]
        self._pinv = np.linalg.pinv(B)

    @property
    def is_full_rank(self) -> bool:
        return self.rank == self.ambient

    def gs_lengths(self) -> np.ndarray:
        return np.abs(np.diag(self.R))

    def euclid_cover_bound(self) -> float:
        """Upper bound on the Euclidean covering radius: half GS diagonal."""
        return 0.5 * float(np.sqrt(np.sum(self.gs_lengths() ** 2)))

    def coeffs(self, x) -> np.ndarray:
        """Least-squares coordinates of x in the basis."""
        return np.atleast_2d(x) @ self._pinv.T

    def to_json(self) -> dict:
        return {"basis": self.basis.tolist()}

    @classmethod
    def from_json(cls, doc) -> "Lattice":
        if isinstance(doc, str):
            doc = json.loads(doc)
        return cls(doc["basis"])

    def __repr__(self) -> str:  # pragma: no cover
        return f"Lattice(rank={self.rank}, ambient={self.ambient})"


# ---------------------------------------------------------------------------
# Euclidean enumeration (Fincke-Pohst depth-first search)


def enumerate_near(R: np.ndarray, center: np.ndarray, radius: float, cap: int = 2_000_000) -> np.ndarray:
    """All integer k with ||R (k - center)||_2 <= radius, as an (N, m) array.

    `R` is upper triangular with positive diagonal.  Exhaustive within the
    radius; raises EnumerationBudgetError if more than `cap` points appear.
    """
    m = R.shape[0]
    out: list[list[int]] = []
    ks = np.zeros(m)
    # partial[i] = squared norm contributed by levels > i
    radius2 = radius * radius * (1.0 + 1e-12)

    def descend(level: int, partial: float):
        if len(out) > cap:
            raise EnumerationBudgetError(f"enumeration exceeded {cap} points")
        # c = R[level, level] * (k - center)[level] + sum_{j>level} R[level, j]*(k-center)[j]
        s = 0.0
        for j in range(level + 1, m):
            s += R[level, j] * (ks[j] - center[j])
        rem = radius2 - partial
        if rem < 0:
            return
        bound = math.sqrt(rem)
        d = R[level, level]
        lo = math.ceil(center[level] + (-bound - s) / d - 1e-12)
        hi = math.floor(center[level] + (bound - s) / d + 1e-12)
        for k in range(lo, hi + 1):
            c = d * (k - center[level]) + s
            np_new = partial + c * c
            if np_new > radius2:
                continue
            ks[level] = k
            if level == 0:
                out.append([int(v) for v in ks])
            else:
                descend(level - 1, np_new)
        ks[level] = 0

    descend(m - 1, 0.0)
    if not out:
        return np.zeros((0, m), dtype=int)
    return np.array(out, dtype=int)


def enumerate_ball(R: np.ndarray, radius: float, cap: int = 2_000_000) -> np.ndarray:
    """All integer k (including 0) with ||R k||_2 <= radius."""
    return enumerate_near(R, np.zeros(R.shape[0]), radius, cap)


# ---------------------------------------------------------------------------
# shortest vector / closest vector in the working norm


def shortest_vector(space: Space, lat: Lattice) -> tuple[np.ndarray, float]:
    """Exact minimiser of the working norm over nonzero lattice points."""
    if lat.ambient != space.dim:
        raise LatticeError("lattice ambient dimension does not match the space")
    c1, _ = euclid_bounds(space)
    # initial candidate: best of a small coefficient box around the basis
    if lat.rank <= 4:
        box = np.array(list(itertools.product(*[range(-2, 3)] * lat.rank)), dtype=int)
        box = box[np.any(box != 0, axis=1)]
    else:
        box = np.vstack([np.eye(lat.rank, dtype=int), -np.eye(lat.rank, dtype=int)])
    cand = box @ lat.basis
    norms = eval_norm_many(space, cand)
    best = float(np.min(norms))
    radius = best / c1 * (1.0 + 1e-9)
    ks = enumerate_ball(lat.R, radius)
    ks = ks[np.any(ks != 0, axis=1)]
    if len(ks) == 0:
        i = int(np.argmin(norms))
        return cand[i], best
    vecs = ks @ lat.basis
    norms = eval_norm_many(space, vecs)
    i = int(np.argmin(norms))
    return vecs[i], float(norms[i])


def dist_to_lattice(space: Space, lat: Lattice, x) -> float:
    """Exact min over lattice points of ||x - lambda|| in the working norm."""
    xv = np.asarray(x, dtype=float)
    if xv.shape != (lat.ambient,):
        raise LatticeError("point dimension does not match the lattice ambient dimension")
    c1, _ = euclid_bounds(space)
    t = lat.coeffs(xv)[0]
    k0 = np.round(t)
    d0 = eval_norm(space, xv - k0 @ lat.basis)
    if d0 == 0.0:
        return 0.0
    # orthogonal residue is constant over lattice points
    resid = xv - t @ lat.basis
    perp2 = float(resid @ resid)
    rad2 = (d0 / c1) ** 2 * (1.0 + 1e-9) - perp2
    if rad2 <= 0:
        return d0
    ks = enumerate_near(lat.R, t, math.sqrt(rad2))
    if len(ks) == 0:
        return d0
    norms = eval_norm_many(space, xv[None, :] - ks @ lat.basis)
    return float(min(d0, np.min(norms)))


class _CvpContext:
    """Cached Babai-plus-offsets machinery for batched exact CVP queries."""

    def __init__(self, space: Space, lat: Lattice):
        if not lat.is_full_rank:
            raise RankDeficientError("batched distance queries need a full-rank lattice")
        self.space = space
        self.lat = lat
        self.inv = np.linalg.inv(lat.basis)
        c1, c2 = euclid_bounds(space)
        signs = np.array(list(itertools.product([1.0, -1.0], repeat=lat.rank)))
        corners = 0.5 * signs @ lat.basis
        d2half = float(np.max(np.linalg.norm(corners, axis=1)))
        r_off = d2half * (1.0 + c2 / c1) * (1.0 + 1e-9)
        self.offsets = enumerate_ball(lat.R, r_off) @ lat.basis

    def dists(self, X: np.ndarray, chunk: int = 8192) -> np.ndarray:
        """Exact working-norm distance from each row of X to the lattice."""
        X = np.atleast_2d(np.asarray(X, dtype=float))
        out = np.empty(len(X))
        for s in range(0, len(X), chunk):
            xs = X[s : s + chunk]
            t = xs @ self.inv
            res = xs - np.round(t) @ self.lat.basis
            diffs = res[:, None, :] - self.offsets[None, :, :]
            flat = diffs.reshape(-1, self.lat.ambient)
            norms = eval_norm_many(self.space, flat).reshape(len(xs), -1)
            out[s : s + chunk] = np.min(norms, axis=1)
        return out


def batch_dist_to_lattice(space: Space, lat: Lattice, X) -> np.ndarray:
    return _CvpContext(space, lat).dists(np.atleast_2d(np.asarray(X, dtype=float)))


# ---------------------------------------------------------------------------
# covering radius: Lipschitz grid with optional adaptive refinement


def _cell_radius(space: Space, basis: np.ndarray, half_widths: np.ndarray) -> float:
    """Working-norm radius of the cell {sum s_i b_i : |s_i| <= h_i}."""
    n = basis.shape[0]
    signs = np.array(list(itertools.product([1.0, -1.0], repeat=n)))
    corners = (signs * half_widths[None, :]) @ basis
    return float(np.max(eval_norm_many(space, corners)))


def covering_radius(
    space: Space,
    lat: Lattice,
    mesh: float = 1.0 / 64,
    tol: Optional[float] = None,
    budget: int = 2_000_000,
) -> CertifiedInterval:
    """Certified interval for the covering radius in the working norm.

    lo is the max of dist_to_lattice over cell centers; hi adds the
    working-norm radius of a cell (the distance function is 1-Lipschitz in
    the same norm).  With `tol` set, cells around the arg-max are refined
    until hi - lo <= tol or the evaluation budget runs out.
    """
    if not lat.is_full_rank:
        raise RankDeficientError("covering radius of a rank-deficient lattice is infinite")
    if mesh <= 0:
        raise LatticeError("mesh must be positive")
    n = lat.rank
    ctx = _CvpContext(space, lat)
    steps = max(1, int(math.ceil(1.0 / mesh)))
    h = 0.5 / steps
    axis = (np.arange(steps) + 0.5) / steps
    grid = np.array(list(itertools.product(*[axis] * n)))
    centers = grid @ lat.basis
    dists = ctx.dists(centers)
    evals = len(centers)
    rho = _cell_radius(space, lat.basis, np.full(n, h))
    lo = float(np.max(dists))
    hi = lo + rho

    # λ1/2 is always a valid lower bound for the covering radius
    _, lam1 = shortest_vector(space, lat)
    lo = max(lo, lam1 / 2.0)
    hi = max(hi, lo)

    if tol is None or hi - lo <= tol:
        return CertifiedInterval(lo, hi, "lipschitz-grid", evals)

    # adaptive branch-and-bound: refine the cell with the largest upper bound
    counter = itertools.count()
    heap: list = []
    for g, d in zip(grid, dists):
        heapq.heappush(heap, (-(d + rho), next(counter), g, h))
    best_lo = lo
    while heap and evals < budget:
        neg_up, _, c, hw = heap[0]
        up = -neg_up
        if up - best_lo <= tol:
            break
        heapq.heappop(heap)
        if up <= best_lo:
            continue
        nh = hw / 2.0
        shifts = np.array(list(itertools.product([-nh, nh], repeat=n)))
        children = c[None, :] + shifts
        ds = ctx.dists(children @ lat.basis)
        evals += len(children)
        child_rho = _cell_radius(space, lat.basis, np.full(n, nh))
        best_lo = max(best_lo, float(np.max(ds)))
        for cc, dd in zip(children, ds):
            heapq.heappush(heap, (-(dd + child_rho), next(counter), cc, nh))
    hi = max(best_lo, -heap[0][0]) if heap else best_lo
    return CertifiedInterval(best_lo, hi, "lipschitz-grid", evals)


# ---------------------------------------------------------------------------
# gamma* of a lattice


@dataclass
class GammaStarEstimate:
    """2*mu/lambda1 for one lattice: the gamma* value it witnesses."""

    packing_sep: CertifiedInterval
    covering: CertifiedInterval
    gamma_star: CertifiedInterval
    lattice: Lattice

    def to_json(self) -> dict:
        return {
            "packing_sep": self.packing_sep.to_json(),
            "covering": self.covering.to_json(),
            "gamma_star": self.gamma_star.to_json(),
            "lattice": self.lattice.to_json(),
        }


def gamma_star_of_lattice(
    space: Space,
    lat: Lattice,
    mesh: float = 1.0 / 32,
    tol: Optional[float] = None,
    budget: int = 2_000_000,
) -> GammaStarEstimate:
    """Certified gamma* estimate: rescale so the shortest vector is 2, then
    the covering radius of the rescaled lattice is the witnessed gamma*."""
    _, lam1 = shortest_vector(space, lat)
    cover = covering_radius(space, lat, mesh=mesh, tol=(tol * lam1 / 2.0 if tol else None), budget=budget)
    gamma = CertifiedInterval(
        2.0 * cover.lo / lam1, 2.0 * cover.hi / lam1, cover.method, cover.evaluations
    )
    return GammaStarEstimate(
        packing_sep=CertifiedInterval.exact(lam1, "enumeration"),
        covering=cover,
        gamma_star=gamma,
        lattice=lat,
    )


# ---------------------------------------------------------------------------
# lattice search (simulated annealing over bases)


def _reduce_basis(B: np.ndarray) -> np.ndarray:
    """Cheap Euclidean LLL-style size reduction; leaves the lattice unchanged."""
    B = B.copy()
    n = B.shape[0]
    for _ in range(20):
        changed = False
        # size-reduce
        for i in range(1, n):
            for j in range(i - 1, -1, -1):
                denom = B[j] @ B[j]
                if denom <= 0:
                    continue
                mu = round(float(B[i] @ B[j] / denom))
                if mu != 0:
                    B[i] -= mu * B[j]
                    changed = True
        # swap out-of-order rows
        order = np.argsort(np.linalg.norm(B, axis=1), kind="stable")
        if not np.array_equal(order, np.arange(n)):
            B = B[order]
            changed = True
        if not changed:
            break
    return B


def _proxy_objective(space: Space, grid: np.ndarray, h: float):
    """Sound upper proxy for gamma* on lambda1=2 lattices: grid max of the
    distance function plus the Lipschitz cell slack."""

    def obj(lat: Lattice) -> float:
        ctx = _CvpContext(space, lat)
        rho = _cell_radius(space, lat.basis, np.full(lat.rank, h))
        return float(np.max(ctx.dists(grid @ lat.basis))) + rho

    return obj


def _normalized_lattice(space: Space, B: np.ndarray) -> Optional[Lattice]:
    B = _reduce_basis(B)
    try:
        lat = Lattice(B)
    except LatticeError:
        return None
    _, lam1 = shortest_vector(space, lat)
    if lam1 <= 0:
        return None
    return Lattice(B * (2.0 / lam1))


def optimize_lattice(
    space: Space,
    n: int,
    budget: int = 200_000,
    seed: int = 0,
    n_seeds: int = 8,
    final_tol: float = 0.005,
) -> GammaStarEstimate:
    """Search for a lattice with small gamma* under the given norm.

    Three phases per seed, all deterministic given the seed: simulated
    annealing over bases (one basis vector perturbed per proposal, Gaussian
    scale tied to the temperature, size reduction plus renormalisation to
    lambda1 = 2) against a sound coarse upper proxy; a greedy proxy polish on
    a finer grid; then a certified polish of the best bases against adaptive
    Lipschitz covering intervals.  The winner is re-certified at to
    tolerance `final_tol`.
    """
    if n != space.dim:
        raise LatticeError("search dimension must equal the space dimension")
    if n > 4:
        raise LatticeError("lattice search is capped at dimension 4")
    rng = np.random.default_rng(seed)
    coarse_pts = {1: 48, 2: 16, 3: 10, 4: 6}[n]
    fine_pts = {1: 96, 2: 24, 3: 14, 4: 8}[n]

    def make_grid(pts):
        axis = (np.arange(pts) + 0.5) / pts
        return np.array(list(itertools.product(*[axis] * n)))

    obj_coarse = _proxy_objective(space, make_grid(coarse_pts), 0.5 / coarse_pts)
    obj_fine = _proxy_objective(space, make_grid(fine_pts), 0.5 / fine_pts)

    spent = 0
    anneal_steps = max(200, min(2500, budget // max(1, 2 * n_seeds)))

    def anneal(chain_rng) -> Optional[tuple[float, Lattice]]:
        nonlocal spent
        lat = None
        for _ in range(16):
            lat = _normalized_lattice(space, chain_rng.standard_normal((n, n)) * 1.5)
            if lat is not None:
                break
        if lat is None:
            return None
        cur = obj_coarse(lat)
        best, best_lat = cur, lat
        temp0 = 0.08
        temp = temp0
        for it in range(anneal_steps):
            if spent >= budget:
                break
            spent += 1
            scale = max(0.004, 0.12 * temp / temp0)
            B = lat.basis.copy()
            B[int(chain_rng.integers(n))] += chain_rng.standard_normal(n) * scale * 2.0
            cand = _normalized_lattice(space, B)
            if cand is None:
                continue
            o = obj_coarse(cand)
            if o <= cur or chain_rng.random() < math.exp(-(o - cur) / max(temp, 1e-9)):
                lat, cur = cand, o
            if o < best - 1e-12:
                best, best_lat = o, cand
            if it % 20 == 19:
                temp *= 0.96
        return best, best_lat

    def proxy_polish(lat: Lattice, steps: int, chain_rng) -> tuple[float, Lattice]:
        nonlocal spent
        cur = obj_fine(lat)
        scale = 0.03
        since = 0
        for _ in range(steps):
            if spent >= budget:
                break
            spent += 1
            B = lat.basis.copy()
            B[int(chain_rng.integers(n))] += chain_rng.standard_normal(n) * scale * 2.0
            cand = _normalized_lattice(space, B)
            if cand is None:
                continue
            o = obj_fine(cand)
            if o < cur - 1e-12:
                lat, cur = cand, o
                since = 0
            else:
                since += 1
                if since >= 40:
                    scale = max(scale * 0.6, 1e-3)
                    since = 0
        return cur, lat

    def certified(lat: Lattice, tol: float) -> float:
        return covering_radius(space, lat, mesh=1.0 / 8, tol=tol).hi

    def certified_polish(lat: Lattice, chain_rng) -> tuple[float, Lattice]:
        cur = certified(lat, 0.004)
        step = 0.04
        while step > 3e-4:
            improved = False
            for i in range(n):
                for j in range(n):
                    for s in (1.0, -1.0):
                        B = lat.basis.copy()
                        B[i, j] += s * step
                        cand = _normalized_lattice(space, B)
                        if cand is None:
                            continue
                        o = certified(cand, 0.004)
                        if o < cur - 1e-9:
                            lat, cur = cand, o
                            improved = True
            for _ in range(2 * n):
                B = lat.basis + chain_rng.standard_normal((n, n)) * step
                cand = _normalized_lattice(space, B)
                if cand is None:
                    continue
                o = certified(cand, 0.004)
                if o < cur - 1e-9:
                    lat, cur = cand, o
                    improved = True
            if not improved:
                step /= 2
        return cur, lat

    candidates: list[tuple[float, Lattice]] = []
    for chain in range(n_seeds):
        chain_rng = np.random.default_rng(np.random.SeedSequence([seed, chain]))
        got = anneal(chain_rng)
        if got is None:
            continue
        candidates.append(proxy_polish(got[1], 300, chain_rng))
    if not candidates:
        raise LatticeError("annealing failed to produce a non-degenerate basis")
    candidates.sort(key=lambda c: c[0])

    polish_rng = np.random.default_rng(np.random.SeedSequence([seed, 10_007]))
    best_val, best_lat = math.inf, candidates[0][1]
    for _, lat in candidates[: min(3, len(candidates))]:
        v, plat = certified_polish(lat, polish_rng)
        if v < best_val:
            best_val, best_lat = v, plat
    return gamma_star_of_lattice(space, best_lat, mesh=1.0 / 8, tol=final_tol)


# ---------------------------------------------------------------------------
# Voronoi gauge


def relevant_vectors(lat: Lattice) -> np.ndarray:
    """Lattice vectors within twice the Euclidean covering bound (a superset
    of the Voronoi-relevant vectors), closed under negation."""
    if not lat.is_full_rank:
        raise RankDeficientError("Voronoi gauge needs a full-rank lattice")
    r = 2.0 * lat.euclid_cover_bound() * (1.0 + 1e-9)
    ks = enumerate_ball(lat.R, r)
    ks = ks[np.any(ks != 0, axis=1)]
    if len(ks) == 0:
        raise LatticeError("no candidate Voronoi vectors found")
    return ks @ lat.basis


def voronoi_gauge_space(lat: Lattice) -> VoronoiGauge:
    """Descriptor for the norm whose unit ball is the Euclidean Voronoi cell."""
    rel = relevant_vectors(lat)
    return VoronoiGauge(lat.basis, rel, cover_bound=lat.euclid_cover_bound())


def voronoi_gauge(lat: Lattice, x) -> float:
    """Gauge of the Euclidean Voronoi cell V_0 at x."""
    space = voronoi_gauge_space(lat)
    return eval_norm(space, x)


# ---------------------------------------------------------------------------
# torus saturation


@dataclass
class SaturationResult:
    centers: np.ndarray
    r: float  # certified covering radius of centers + lattice
    r_observed: float
    added: int
    base: Lattice

    def to_json(self) -> dict:
        return {
            "centers": self.centers.tolist(),
            "r": self.r,
            "r_observed": self.r_observed,
            "added": self.added,
            "base": self.base.to_json(),
        }


def saturate_packing(
    space: Space,
    base: Lattice,
    samples: int = 4096,
    seed: int = 0,
    margin: float = 0.0,
    grid_per_axis: int = 48,
) -> SaturationResult:
    """Greedy 2-separated saturation of the torus X / base.

    A shuffled sample of the fundamental domain is scanned; a point joins the
    center set when its torus distance to every current center is >= 2.  The
    returned r is a certified covering radius (grid max plus Lipschitz slack)
    of centers + lattice; maximality of the packing forces r < 2.
    """
    if not base.is_full_rank:
        raise RankDeficientError("torus saturation needs a full-rank base lattice")
    _, lam1 = shortest_vector(space, base)
    if lam1 < 2.0 * (1.0 + margin) - 1e-9:
        raise LatticeError(f"base lattice is not 2-separated: lambda1 = {lam1}")
    n = base.rank
    rng = np.random.default_rng(seed)
    ctx = _CvpContext(space, base)

    pts = rng.random((samples, n)) @ base.basis
    centers = [np.zeros(n)]
    for x in pts:
        diffs = x[None, :] - np.array(centers)
        if float(np.min(ctx.dists(diffs))) >= 2.0 - 1e-12:
            centers.append(x)
    # deterministic grid pass: fill any remaining hole visible at grid scale
    axis = (np.arange(grid_per_axis) + 0.5) / grid_per_axis
    grid = np.array(list(itertools.product(*[axis] * n))) @ base.basis
    for x in grid:
        diffs = x[None, :] - np.array(centers)
        if float(np.min(ctx.dists(diffs))) >= 2.0 - 1e-12:
            centers.append(x)
    C = np.array(centers)

    # certified covering radius of centers + lattice over the same grid
    dmin = np.full(len(grid), np.inf)
    for c in C:
        dmin = np.minimum(dmin, ctx.dists(grid - c[None, :]))
    rho = _cell_radius(space, base.basis, np.full(n, 0.5 / grid_per_axis))
    r_obs = float(np.max(dmin))
    return SaturationResult(centers=C, r=r_obs + rho, r_observed=r_obs, added=len(C) - 1, base=base)
