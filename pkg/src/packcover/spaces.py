"""Finite-dimensional normed spaces given as gauge recipes.

A space descriptor is one of: an l_p space (p in [1, inf]), a weighted l_p
space, a symmetric polytope gauge, a direct sum (X (+)_r Y), or the gauge of
the Euclidean Voronoi cell of a full-rank lattice.  All norm evaluation,
dual-norm evaluation, duality-map functionals and Birkhoff-James
orthogonality tests live here.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

INF = math.inf


class SpaceError(ValueError):
    """Base class for descriptor and evaluation errors."""


class DimensionMismatchError(SpaceError):
    pass


class NonSymmetricPolytopeError(SpaceError):
    pass


class NonSmoothPointError(SpaceError):
    """The duality functional is not unique at the queried point."""


class UnsupportedKindError(SpaceError):
    pass


def _as_vector(x, dim: int) -> np.ndarray:
    v = np.asarray(x, dtype=float)
    if v.shape != (dim,):
        raise DimensionMismatchError(f"expected vector of length {dim}, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise SpaceError("point has non-finite entries")
    return v


def _as_matrix(x, dim: int) -> np.ndarray:
    m = np.asarray(x, dtype=float)
    if m.ndim == 1:
        m = m[None, :]
    if m.shape[1] != dim:
        raise DimensionMismatchError(f"expected points of length {dim}, got shape {m.shape}")
    return m


def conjugate_exponent(p: float) -> float:
    if p == 1:
        return INF
    if p == INF:
        return 1.0
    return p / (p - 1.0)


class Space:
    """Base class for all descriptors; `dim` is the ambient dimension."""

    kind: str = "abstract"
    dim: int

    def norm(self, x) -> float:
        return eval_norm(self, x)

    def __repr__(self) -> str:  # pragma: no cover
        return f"{type(self).__name__}({self.label()})"

    def label(self) -> str:
        return self.kind


class Lp(Space):
    kind = "lp"

    def __init__(self, p: float, n: int):
        if p < 1:
            raise SpaceError(f"l_p requires p >= 1, got {p}")
        if n < 1:
            raise SpaceError("dimension must be positive")
        self.p = float(p)
        self.dim = int(n)

    def label(self) -> str:
        return f"lp p={self.p} n={self.dim}"


class WeightedLp(Space):
    kind = "wlp"

    def __init__(self, p: float, weights: Sequence[float]):
        if p < 1:
            raise SpaceError(f"weighted l_p requires p >= 1, got {p}")
        w = np.asarray(weights, dtype=float)
        if w.ndim != 1 or len(w) < 1:
            raise SpaceError("weights must be a non-empty vector")
        if np.any(w <= 0):
            raise SpaceError("weights must be strictly positive")
        self.p = float(p)
        self.weights = w
        self.dim = len(w)

    def label(self) -> str:
        return f"wlp p={self.p} n={self.dim}"


class Polytope(Space):
    """Gauge of a centrally symmetric polytope given by its vertices.

    The unit ball is conv(vertices).  Facet functionals are precomputed once
    (convex hull at construction); the gauge is the max of the facet
    functionals, which is the dual form of the linear program
    min{t : x in t*conv(vertices)}.
    """

    kind = "polytope"

    def __init__(self, vertices):
        V = np.asarray(vertices, dtype=float)
        if V.ndim != 2 or V.shape[0] < 2:
            raise SpaceError("polytope needs a 2-d array of vertices")
        self.dim = V.shape[1]
        self.vertices = V
        scale = float(np.max(np.abs(V))) or 1.0
        # central symmetry: every vertex must have its exact opposite present
        for v in V:
            d = np.min(np.max(np.abs(V + v), axis=1))
            if d > 1e-9 * scale:
                raise NonSymmetricPolytopeError(f"vertex {v} has no opposite -v")
        from scipy.spatial import ConvexHull, QhullError

        try:
            hull = ConvexHull(V)
        except QhullError as exc:
            raise SpaceError(f"polytope vertices do not span the ambient space: {exc}")
        # hull.equations rows are [normal, offset] with normal.x + offset <= 0
        normals = hull.equations[:, :-1]
        offsets = hull.equations[:, -1]
        if np.any(offsets > -1e-12 * scale):
            raise SpaceError("origin is not interior to the polytope")
        self.facets = normals / (-offsets[:, None])

    def label(self) -> str:
        return f"polytope n={self.dim} v={len(self.vertices)}"


class DirectSum(Space):
    kind = "sum"

    def __init__(self, left: Space, right: Space, r: float):
        if r < 1:
            raise SpaceError(f"direct sum requires r >= 1, got {r}")
        self.left = left
        self.right = right
        self.r = float(r)
        self.dim = left.dim + right.dim

    def label(self) -> str:
        return f"({self.left.label()}) sum_r={self.r} ({self.right.label()})"


class VoronoiGauge(Space):
    """Norm whose unit ball is the Euclidean Voronoi cell of a lattice.

    `relevant` holds the cached Voronoi-relevant candidate vectors (closed
    under negation); the gauge at x is max over them of 2<x,d>/<d,d>.
    Construct via `packcover.lattices.voronoi_gauge_space`.
    """

    kind = "voronoi"

    def __init__(
        self,
        basis: np.ndarray,
        relevant: np.ndarray,
        cover_bound: float,
        base: Optional[Space] = None,
    ):
        basis = np.asarray(basis, dtype=float)
        if basis.shape[0] != basis.shape[1]:
            raise SpaceError("Voronoi gauge needs a full-rank square basis")
        self.basis = basis
        self.dim = basis.shape[1]
        self.base = base if base is not None else Lp(2, self.dim)
        rel = np.asarray(relevant, dtype=float)
        if rel.ndim != 2 or rel.shape[1] != self.dim or len(rel) == 0:
            raise SpaceError("invalid relevant-vector cache")
        self.relevant = rel
        self.cover_bound = float(cover_bound)  # Euclidean covering radius bound
        self._scaled = 2.0 * rel / np.sum(rel * rel, axis=1)[:, None]

    def label(self) -> str:
        return f"voronoi n={self.dim}"


# ---------------------------------------------------------------------------
# norm evaluation


def _lp_norm_many(X: np.ndarray, p: float) -> np.ndarray:
    A = np.abs(X)
    if p == INF:
        return np.max(A, axis=1)
    if p == 1:
        return np.sum(A, axis=1)
    if p == 2:
        return np.sqrt(np.sum(A * A, axis=1))
    # max-rescaled power sum, keeps homogeneity to machine precision
    m = np.max(A, axis=1)
    out = np.zeros(len(A))
    nz = m > 0
    if np.any(nz):
        ratios = A[nz] / m[nz, None]
        out[nz] = m[nz] * np.sum(ratios**p, axis=1) ** (1.0 / p)
    return out


def eval_norm_many(space: Space, X) -> np.ndarray:
    """Vectorised norm of each row of X."""
    X = _as_matrix(X, space.dim)
    if isinstance(space, Lp):
        return _lp_norm_many(X, space.p)
    if isinstance(space, WeightedLp):
        if space.p == INF:
            return np.max(space.weights[None, :] * np.abs(X), axis=1)
        return _lp_norm_many(np.abs(X) * space.weights[None, :] ** (1.0 / space.p), space.p)
    if isinstance(space, Polytope):
        return np.max(np.abs(X @ space.facets.T), axis=1)
    if isinstance(space, DirectSum):
        nl = eval_norm_many(space.left, X[:, : space.left.dim])
        nr = eval_norm_many(space.right, X[:, space.left.dim :])
        return _lp_norm_many(np.column_stack([nl, nr]), space.r)
    if isinstance(space, VoronoiGauge):
        return np.maximum(np.max(np.abs(X @ space._scaled.T), axis=1), 0.0)
    raise UnsupportedKindError(f"unknown descriptor kind {space!r}")


def eval_norm(space: Space, x) -> float:
    """Norm of a single point; exactly zero iff x = 0."""
    return float(eval_norm_many(space, _as_vector(x, space.dim)[None, :])[0])


# ---------------------------------------------------------------------------
# duality


def dual_eval(space: Space, f) -> float:
    """sup{<f,x> : ||x|| <= 1}, the dual norm of the functional f."""
    fv = _as_vector(f, space.dim)
    if isinstance(space, Lp):
        return float(_lp_norm_many(fv[None, :], conjugate_exponent(space.p))[0])
    if isinstance(space, WeightedLp):
        w = space.weights
        if space.p == INF:
            return float(np.sum(np.abs(fv) / w))
        if space.p == 1:
            return float(np.max(np.abs(fv) / w))
        q = conjugate_exponent(space.p)
        return float(_lp_norm_many((np.abs(fv) * w ** (-1.0 / space.p))[None, :], q)[0])
    if isinstance(space, Polytope):
        return float(np.max(space.vertices @ fv))
    if isinstance(space, DirectSum):
        dl = dual_eval(space.left, fv[: space.left.dim])
        dr = dual_eval(space.right, fv[space.left.dim :])
        return float(_lp_norm_many(np.array([[dl, dr]]), conjugate_exponent(space.r))[0])
    raise UnsupportedKindError(f"dual norm is not supported for kind '{space.kind}'")


def duality_functional(space: Space, x, tol: float = 1e-6) -> np.ndarray:
    """The norming functional f with <f,x> = 1 = dual_eval(f) at a smooth unit x.

    Supported where the norm is smooth: l_p and weighted l_p with 1 < p < inf,
    and polytope points interior to a single facet.  Non-smooth points raise
    NonSmoothPointError; callers should fall back to bj_orthogonal.
    """
    xv = _as_vector(x, space.dim)
    nx = eval_norm(space, xv)
    if abs(nx - 1.0) > tol:
        raise SpaceError(f"point must lie on the unit sphere, got norm {nx}")
    if isinstance(space, (Lp, WeightedLp)):
        p = space.p
        if p == 1 or p == INF:
            raise NonSmoothPointError(f"l_{p} norm is not smooth; use bj_orthogonal")
        f = np.sign(xv) * np.abs(xv) ** (p - 1.0)
        if isinstance(space, WeightedLp):
            f = f * space.weights
        return f
    if isinstance(space, Polytope):
        dots = space.facets @ xv
        active = np.abs(dots) >= 1.0 - 1e-9
        idx = np.nonzero(active)[0]
        # opposite facets of a symmetric hull both activate at +-x; the
        # functional is unique iff a single signed facet is active
        signed = {tuple(np.round(space.facets[i] * np.sign(dots[i]), 12)) for i in idx}
        if len(signed) != 1:
            raise NonSmoothPointError("polytope point lies on a vertex or edge")
        i = idx[0]
        return space.facets[i] * np.sign(dots[i])
    raise UnsupportedKindError(f"duality functional not supported for kind '{space.kind}'")


def bj_orthogonal(space: Space, x, v, tol: float = 1e-8) -> bool:
    """Birkhoff-James orthogonality x | v: ||x|| <= ||x + t v|| for all t.

    Decided from the one-sided difference quotients of the convex map
    t -> ||x + t v|| at t = 0; the one-sided slopes are monotone in the step,
    so the test is conservative.
    """
    xv = _as_vector(x, space.dim)
    vv = _as_vector(v, space.dim)
    nx = eval_norm(space, xv)
    nv = eval_norm(space, vv)
    if nx == 0 or nv == 0:
        raise SpaceError("bj_orthogonal requires non-zero x and v")
    h = 1e-6 * max(1.0, nx / nv)
    right = (eval_norm(space, xv + h * vv) - nx) / h
    left = (nx - eval_norm(space, xv - h * vv)) / h
    return left <= tol and right >= -tol


def bj_violation(space: Space, x, v) -> float:
    """Quantitative failure of x | v; zero iff the one-sided slopes bracket 0."""
    xv = _as_vector(x, space.dim)
    vv = _as_vector(v, space.dim)
    nx = eval_norm(space, xv)
    nv = eval_norm(space, vv)
    if nx == 0 or nv == 0:
        raise SpaceError("bj_violation requires non-zero x and v")
    h = 1e-6 * max(1.0, nx / nv)
    right = (eval_norm(space, xv + h * vv) - nx) / h
    left = (nx - eval_norm(space, xv - h * vv)) / h
    return max(0.0, left, -right)


def sphere_sample(space: Space, count: int, seed: int) -> np.ndarray:
    """Deterministic unit-sphere sample: Gaussian draws normalised by the norm."""
    if count < 1:
        raise SpaceError("count must be >= 1")
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((count, space.dim))
    for _ in range(3):
        n = eval_norm_many(space, X)
        bad = n == 0
        if np.any(bad):
            X[bad] = rng.standard_normal((int(np.sum(bad)), space.dim))
            n = eval_norm_many(space, X)
        X = X / n[:, None]
        if np.max(np.abs(eval_norm_many(space, X) - 1.0)) <= 1e-12:
            break
    return X


# ---------------------------------------------------------------------------
# Euclidean equivalence constants  c1*||x||_2 <= ||x|| <= c2*||x||_2


def _lp_euclid_factors(p: float, n: int) -> tuple[float, float]:
    if p == INF:
        return 1.0 / math.sqrt(n), 1.0
    if p >= 2:
        return n ** (1.0 / p - 0.5), 1.0
    return 1.0, n ** (1.0 / p - 0.5)


def euclid_bounds(space: Space) -> tuple[float, float]:
    """Constants (c1, c2) with c1*||x||_2 <= ||x|| <= c2*||x||_2 for all x."""
    if isinstance(space, Lp):
        return _lp_euclid_factors(space.p, space.dim)
    if isinstance(space, WeightedLp):
        w = space.weights
        if space.p == INF:
            c1, c2 = _lp_euclid_factors(INF, space.dim)
            return c1 * float(np.min(w)), c2 * float(np.max(w))
        c1, c2 = _lp_euclid_factors(space.p, space.dim)
        s = 1.0 / space.p
        return c1 * float(np.min(w)) ** s, c2 * float(np.max(w)) ** s
    if isinstance(space, Polytope):
        c2 = float(np.max(np.linalg.norm(space.facets, axis=1)))
        c1 = 1.0 / float(np.max(np.linalg.norm(space.vertices, axis=1)))
        return c1, c2
    if isinstance(space, DirectSum):
        a1, a2 = euclid_bounds(space.left)
        b1, b2 = euclid_bounds(space.right)
        r1, r2 = _lp_euclid_factors(space.r, 2)
        return min(a1, b1) * r1, max(a2, b2) * r2
    if isinstance(space, VoronoiGauge):
        # cell contains the ball of radius lambda1_euc/2 and is contained in
        # the ball of the Euclidean covering radius
        lens = np.linalg.norm(space.relevant, axis=1)
        return 1.0 / space.cover_bound, 2.0 / float(np.min(lens))
    raise UnsupportedKindError(f"no Euclidean bounds for kind '{space.kind}'")


# ---------------------------------------------------------------------------
# JSON serialisation


def _p_to_json(p: float):
    return "inf" if p == INF else p


def _p_from_json(p) -> float:
    return INF if p in ("inf", "Infinity") else float(p)


def space_to_json(space: Space) -> dict:
    if isinstance(space, Lp):
        return {"kind": "lp", "p": _p_to_json(space.p), "n": space.dim}
    if isinstance(space, WeightedLp):
        return {"kind": "wlp", "p": _p_to_json(space.p), "weights": space.weights.tolist()}
    if isinstance(space, Polytope):
        return {"kind": "polytope", "vertices": space.vertices.tolist()}
    if isinstance(space, DirectSum):
        return {
            "kind": "sum",
            "r": _p_to_json(space.r),
            "left": space_to_json(space.left),
            "right": space_to_json(space.right),
        }
    if isinstance(space, VoronoiGauge):
        return {"kind": "voronoi", "basis": space.basis.tolist()}
    raise UnsupportedKindError(f"cannot serialise kind '{space.kind}'")


def space_from_json(doc) -> Space:
    if isinstance(doc, str):
        doc = json.loads(doc)
    kind = doc.get("kind")
    if kind == "lp":
        return Lp(_p_from_json(doc["p"]), int(doc["n"]))
    if kind == "wlp":
        return WeightedLp(_p_from_json(doc["p"]), doc["weights"])
    if kind == "polytope":
        return Polytope(doc["vertices"])
    if kind == "sum":
        return DirectSum(space_from_json(doc["left"]), space_from_json(doc["right"]), _p_from_json(doc["r"]))
    if kind == "voronoi":
        from .lattices import Lattice, voronoi_gauge_space

        return voronoi_gauge_space(Lattice(doc["basis"]))
    raise UnsupportedKindError(f"unknown descriptor kind '{kind}'")


# ---------------------------------------------------------------------------
# small constructors used across tests and experiments


def regular_polygon(sides: int, rotation: float = 0.0) -> Polytope:
    """Regular 2k-gon (sides must be even for central symmetry)."""
    if sides % 2 != 0:
        raise SpaceError("a centrally symmetric polygon needs an even number of sides")
    ang = rotation + 2.0 * np.pi * np.arange(sides) / sides
    return Polytope(np.column_stack([np.cos(ang), np.sin(ang)]))


def random_symmetric_polytope(dim: int, pairs: int, seed: int) -> Polytope:
    """Convex hull of `pairs` random +-v pairs on the Euclidean sphere."""
    rng = np.random.default_rng(seed)
    V = rng.standard_normal((pairs, dim))
    V /= np.linalg.norm(V, axis=1)[:, None]
    return Polytope(np.vstack([V, -V]))
