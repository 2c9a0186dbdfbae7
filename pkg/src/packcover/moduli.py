"""Convexity moduli: delta_X, the local modulus, the tangential modulus
phi_X, the analytic moduli phi_p, compositions, axiom checks, and the derived
quantities t_X and the classical inequality battery.

delta and the tangential modulus are nonconvex global minimisations; the
library reports best-found upper endpoints and only claims certified lower
endpoints where an analytic bound applies (Hilbert closed forms; zero).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .intervals import CertifiedInterval
from .spaces import (
    Lp,
    Space,
    SpaceError,
    WeightedLp,
    bj_orthogonal,
    duality_functional,
    eval_norm,
    eval_norm_many,
    sphere_sample,
)


class ModulusError(ValueError):
    pass


# ---------------------------------------------------------------------------
# modulus objects


class Modulus:
    """A function t -> phi(t) with phi(0) = 0 and t -> phi(t)/t non-decreasing."""

    def __call__(self, t: float) -> float:
        raise NotImplementedError

    def is_valid(self) -> bool:
        return True

    def to_json(self) -> dict:
        raise NotImplementedError


def phi_p(p: float, t: float) -> float:
    """The l_p growth modulus (1 + t^p)^(1/p) - 1."""
    if p < 1:
        raise ModulusError(f"phi_p requires p >= 1, got {p}")
    if t < 0:
        raise ModulusError("phi_p requires t >= 0")
    if t == 0.0:
        return 0.0
    if p == 1:
        return float(t)
    tp = t**p
    if tp < 1e-8:
        # avoid absorbing t^p into 1 + t^p for tiny arguments
        return float(math.expm1(math.log1p(tp) / p))
    return float((1.0 + tp) ** (1.0 / p) - 1.0)


@dataclass(frozen=True)
class PhiP(Modulus):
    p: float

    def __post_init__(self):
        if self.p < 1:
            raise ModulusError(f"phi_p requires p >= 1, got {self.p}")

    def __call__(self, t: float) -> float:
        return phi_p(self.p, t)

    def to_json(self) -> dict:
        return {"form": "phi_p", "p": self.p}


@dataclass(frozen=True)
class Identity(Modulus):
    def __call__(self, t: float) -> float:
        return float(t)

    def to_json(self) -> dict:
        return {"form": "identity"}


class Table(Modulus):
    """Piecewise-linear modulus sampled on an increasing grid from 0.

    The monotone-ratio axiom is checked on the stored grid at construction;
    a violation marks the table invalid and downstream consumers reject it.
    """

    def __init__(self, grid, values, provenance: str = "", ratio_tol: float = 1e-9):
        g = np.asarray(grid, dtype=float)
        v = np.asarray(values, dtype=float)
        if g.ndim != 1 or g.shape != v.shape or len(g) < 2:
            raise ModulusError("table needs matching 1-d grid and values")
        if np.any(np.diff(g) <= 0) or g[0] < 0:
            raise ModulusError("grid must be strictly increasing from 0")
        if np.any(v < -1e-12):
            raise ModulusError("modulus values must be non-negative")
        self.grid = g
        self.values = np.maximum(v, 0.0)
        self.provenance = provenance
        pos = g > 0
        ratios = self.values[pos] / g[pos]
        self.valid = bool(np.all(np.diff(ratios) >= -ratio_tol))
        if g[0] == 0.0 and self.values[0] > 1e-9:
            self.valid = False

    def is_valid(self) -> bool:
        return self.valid

    def __call__(self, t: float) -> float:
        if t <= self.grid[0]:
            # linear through the origin below the grid keeps phi(0) = 0
            if self.grid[0] == 0:
                return float(self.values[0])
            return float(t * self.values[0] / self.grid[0])
        if t >= self.grid[-1]:
            return float(self.values[-1])
        return float(np.interp(t, self.grid, self.values))

    def to_json(self) -> dict:
        return {
            "form": "table",
            "grid": self.grid.tolist(),
            "values": self.values.tolist(),
            "interpolation": "piecewise-linear",
            "provenance": self.provenance,
        }


@dataclass(frozen=True)
class Composed(Modulus):
    outer: Modulus
    inner: Modulus

    def __call__(self, t: float) -> float:
        return self.outer(self.inner(t))

    def is_valid(self) -> bool:
        return self.outer.is_valid() and self.inner.is_valid()

    def to_json(self) -> dict:
        return {"form": "composed", "outer": self.outer.to_json(), "inner": self.inner.to_json()}


@dataclass
class AxiomReport:
    phi1_ok: bool
    phi2_ok: bool
    phi3_ok: bool
    positive: bool

    @property
    def all_ok(self) -> bool:
        return self.phi1_ok and self.phi2_ok and self.phi3_ok


def check_modulus_axioms(phi: Modulus, grid: Sequence[float], tol: float = 1e-9) -> AxiomReport:
    """Grid check of: vanishing near 0, monotone ratio t -> phi(t)/t, and the
    rescaling inequality phi(l*t) <= l*phi(t) for l in (0,1)."""
    g = np.asarray(grid, dtype=float)
    if len(g) < 2 or np.any(np.diff(g) <= 0):
        raise ModulusError("grid must be increasing")
    vals = np.array([phi(t) for t in g])
    if g[0] == 0.0:
        phi1 = vals[0] <= tol
    else:
        # vanishing at 0 at the rate the monotone ratio allows
        phi1 = vals[0] <= g[0] * (vals[-1] / g[-1]) + tol
    pos = g > 0
    ratios = vals[pos] / g[pos]
    phi2 = bool(np.all(np.diff(ratios) >= -tol))
    phi3 = True
    for lam in np.arange(0.1, 1.0, 0.1):
        for t, v in zip(g[pos], vals[pos]):
            if phi(lam * t) > lam * v + tol:
                phi3 = False
    positive = bool(np.all(vals[pos] > 0))
    return AxiomReport(bool(phi1), phi2, phi3, positive)


def compose(outer: Modulus, inner: Modulus) -> Modulus:
    """outer o inner; composition of moduli is a modulus."""
    for m, name in ((outer, "outer"), (inner, "inner")):
        if not m.is_valid():
            raise ModulusError(f"{name} input is marked non-modulus")
    return Composed(outer, inner)


def modulus_from_json(doc: dict) -> Modulus:
    form = doc.get("form")
    if form == "phi_p":
        return PhiP(float(doc["p"]))
    if form == "identity":
        return Identity()
    if form == "table":
        return Table(doc["grid"], doc["values"], doc.get("provenance", ""))
    if form == "composed":
        return Composed(modulus_from_json(doc["outer"]), modulus_from_json(doc["inner"]))
    raise ModulusError(f"unknown modulus form '{form}'")


# ---------------------------------------------------------------------------
# evaluation budget


@dataclass
class EvalBudget:
    """Cap on total norm evaluations for one optimisation call."""

    max_evals: int = 200_000
    used: int = field(default=0, compare=False)

    def spend(self, k: int) -> bool:
        self.used += k
        return self.used <= self.max_evals

    @property
    def exhausted(self) -> bool:
        return self.used > self.max_evals


def _as_budget(budget) -> EvalBudget:
    if budget is None:
        return EvalBudget()
    if isinstance(budget, EvalBudget):
        return budget
    return EvalBudget(int(budget))


def _is_hilbert(space: Space) -> bool:
    return isinstance(space, (Lp, WeightedLp)) and space.p == 2


def hilbert_delta(eps: float) -> float:
    return 1.0 - math.sqrt(max(0.0, 1.0 - eps * eps / 4.0))


def hilbert_tangential(t: float) -> float:
    return math.sqrt(1.0 + t * t) - 1.0


# ---------------------------------------------------------------------------
# batched multi-start descent helpers


def _normalize_rows(space: Space, X: np.ndarray) -> np.ndarray:
    n = eval_norm_many(space, X)
    n[n == 0] = 1.0
    return X / n[:, None]


def _repair_pair(space: Space, X: np.ndarray, Y: np.ndarray, eps: float, iters: int = 60):
    """Pull each y along the chord to x so that ||x - y|| = eps and ||y|| = 1."""
    for _ in range(iters):
        U = Y - X
        d = eval_norm_many(space, U)
        deg = d < 1e-14
        if np.any(deg):
            U[deg] = np.roll(X[deg], 1, axis=1) - X[deg]
            d[deg] = eval_norm_many(space, U[deg])
            d[d == 0] = 1.0
        Y = X + (eps / d)[:, None] * U
        Y = _normalize_rows(space, Y)
        res_d = np.abs(eval_norm_many(space, Y - X) - eps)
        if np.max(res_d) <= 1e-12:
            break
    return Y


def _pair_residual(space: Space, X: np.ndarray, Y: np.ndarray, eps: float) -> np.ndarray:
    return np.abs(eval_norm_many(space, Y - X) - eps) + np.abs(eval_norm_many(space, Y) - 1.0)


def _delta_starts(space: Space, eps: float, starts: int, seed: int):
    n = space.dim
    rng_extra = 1000003
    X = sphere_sample(space, starts, seed)
    Y0 = sphere_sample(space, starts, seed + rng_extra)
    # structured starts help flat-face norms: coordinate and diagonal pairs
    fixed = []
    for i in range(min(n, 4)):
        e = np.zeros(n)
        e[i] = 1.0
        fixed.append(e)
    if n >= 2:
        d = np.zeros(n)
        d[0] = 1.0
        d[1] = 1.0
        fixed.append(d)
        d2 = d.copy()
        d2[1] = -1.0
        fixed.append(d2)
    F = _normalize_rows(space, np.array(fixed))
    k = min(len(F), starts)
    X[:k] = F[:k]
    Y = _repair_pair(space, X, Y0, eps)
    return X, Y


def delta(
    space: Space,
    eps: float,
    budget=None,
    seed: int = 0,
    starts: int = 64,
) -> CertifiedInterval:
    """Modulus of convexity delta_X(eps) as a certified interval.

    hi is the best value of 1 - ||(x+y)/2|| found by multi-start projected
    coordinate descent over unit x, y at distance exactly eps; lo is an
    analytic lower bound (Hilbert closed form, else 0).
    """
    if not 0.0 <= eps <= 2.0:
        raise ModulusError(f"eps must lie in [0, 2], got {eps}")
    bud = _as_budget(budget)
    if eps == 0.0:
        return CertifiedInterval(0.0, 0.0, "exact", 0)

    X, Y = _delta_starts(space, eps, starts, seed)
    feas = _pair_residual(space, X, Y, eps) <= 1e-9

    def value(Xc, Yc):
        return 1.0 - eval_norm_many(space, 0.5 * (Xc + Yc))

    vals = np.where(feas, value(X, Y), np.inf)
    step = np.full(len(X), 0.2)
    n = space.dim
    it = 0
    while np.max(step) > 1e-10 and bud.spend(4 * len(X)):
        moved = np.zeros(len(X), dtype=bool)
        for which in (0, 1):
            for axis_i in range(n):
                for sgn in (1.0, -1.0):
                    if which == 0:
                        Xp = X.copy()
                        Xp[:, axis_i] += sgn * step
                        Xp = _normalize_rows(space, Xp)
                        Yp = _repair_pair(space, Xp, Y, eps, iters=25)
                    else:
                        Xp = X
                        Yp = Y.copy()
                        Yp[:, axis_i] += sgn * step
                        Yp = _repair_pair(space, Xp, Yp, eps, iters=25)
                    ok = _pair_residual(space, Xp, Yp, eps) <= 1e-9
                    v = np.where(ok, value(Xp, Yp), np.inf)
                    better = v < vals - 1e-15
                    if np.any(better):
                        X = np.where(better[:, None], Xp, X)
                        Y = np.where(better[:, None], Yp, Y)
                        vals = np.where(better, v, vals)
                        moved |= better
        step = np.where(moved, step, step * 0.5)
        it += 1
        if bud.exhausted:
            break
    hi = float(max(0.0, np.min(vals)))
    if _is_hilbert(space):
        # parallelogram law pins the exact value from below
        lo = min(hilbert_delta(eps), hi)
        return CertifiedInterval(lo, hi, "best-found/analytic-bound", bud.used)
    return CertifiedInterval(0.0, hi, "best-found", bud.used)


def delta_local(
    space: Space,
    x0,
    eps: float,
    budget=None,
    seed: int = 0,
    starts: int = 64,
) -> CertifiedInterval:
    """Local modulus at x0: inf over unit y at distance eps from the frozen x0.

    hi is clamped at eps/2, which always dominates the local modulus.
    """
    if not 0.0 <= eps <= 2.0:
        raise ModulusError(f"eps must lie in [0, 2], got {eps}")
    x0 = np.asarray(x0, dtype=float)
    if abs(eval_norm(space, x0) - 1.0) > 1e-6:
        raise ModulusError("x0 must lie on the unit sphere")
    bud = _as_budget(budget)
    if eps == 0.0:
        return CertifiedInterval(0.0, 0.0, "exact", 0)

    X = np.repeat(x0[None, :], starts, axis=0)
    Y = _repair_pair(space, X, sphere_sample(space, starts, seed), eps)
    feas = _pair_residual(space, X, Y, eps) <= 1e-9
    vals = np.where(feas, 1.0 - eval_norm_many(space, 0.5 * (X + Y)), np.inf)
    step = np.full(starts, 0.2)
    n = space.dim
    while np.max(step) > 1e-10 and bud.spend(2 * starts):
        moved = np.zeros(starts, dtype=bool)
        for axis_i in range(n):
            for sgn in (1.0, -1.0):
                Yp = Y.copy()
                Yp[:, axis_i] += sgn * step
                Yp = _repair_pair(space, X, Yp, eps, iters=25)
                ok = _pair_residual(space, X, Yp, eps) <= 1e-9
                v = np.where(ok, 1.0 - eval_norm_many(space, 0.5 * (X + Yp)), np.inf)
                better = v < vals - 1e-15
                if np.any(better):
                    Y = np.where(better[:, None], Yp, Y)
                    vals = np.where(better, v, vals)
                    moved |= better
        step = np.where(moved, step, step * 0.5)
        if bud.exhausted:
            break
    hi = float(min(max(0.0, np.min(vals)), eps / 2.0))
    if _is_hilbert(space):
        lo = min(hilbert_delta(eps), hi)
        return CertifiedInterval(lo, hi, "best-found/analytic-bound", bud.used)
    return CertifiedInterval(0.0, hi, "best-found", bud.used)


# ---------------------------------------------------------------------------
# tangential modulus


def _kernel_direction(space: Space, X: np.ndarray, W: np.ndarray) -> np.ndarray:
    """Project each w onto ker(J x) and renormalise (smooth l_p only)."""
    p = space.p
    F = np.sign(X) * np.abs(X) ** (p - 1.0)
    if isinstance(space, WeightedLp):
        F = F * space.weights[None, :]
    fx = np.sum(F * X, axis=1)
    U = W - (np.sum(F * W, axis=1) / fx)[:, None] * X
    nu = eval_norm_many(space, U)
    # near-parallel w: substitute a rolled direction, projected back into the
    # kernel so orthogonality is never silently dropped
    for shift in range(1, X.shape[1] + 1):
        bad = nu < 1e-9
        if not np.any(bad):
            break
        Wb = np.roll(X[bad], shift, axis=1)
        Wb[:, 0] += 0.25 * shift
        Ub = Wb - (np.sum(F[bad] * Wb, axis=1) / fx[bad])[:, None] * X[bad]
        U[bad] = Ub
        nu[bad] = eval_norm_many(space, Ub)
    nu[nu == 0] = 1.0
    V = U / nu[:, None]
    # re-project once after normalising: cancellation in the first projection
    # leaves an O(eps/||U||) component along x that refinement removes
    V = V - (np.sum(F * V, axis=1) / fx)[:, None] * X
    nv = eval_norm_many(space, V)
    nv[nv == 0] = 1.0
    return V / nv[:, None]


def _smooth_supported(space: Space) -> bool:
    return isinstance(space, (Lp, WeightedLp)) and 1.0 < space.p < math.inf


def _bj_violation_many(space: Space, X: np.ndarray, V: np.ndarray) -> np.ndarray:
    h = 1e-6
    nx = eval_norm_many(space, X)
    right = (eval_norm_many(space, X + h * V) - nx) / h
    left = (nx - eval_norm_many(space, X - h * V)) / h
    return np.maximum(0.0, np.maximum(left, -right))


def _tangential_starts(space: Space, starts: int, seed: int):
    n = space.dim
    X = sphere_sample(space, starts, seed)
    W = sphere_sample(space, starts, seed + 2000003)
    fixed_x, fixed_w = [], []
    for i in range(min(n, 3)):
        for j in range(min(n, 3)):
            if i == j:
                continue
            e = np.zeros(n)
            e[i] = 1.0
            f = np.zeros(n)
            f[j] = 1.0
            fixed_x.append(e)
            fixed_w.append(f)
    if n >= 2:
        a = np.zeros(n)
        a[:2] = 1.0
        b = np.zeros(n)
        b[0], b[1] = 1.0, -1.0
        fixed_x += [a, a]
        fixed_w += [b, -b]
    FX = _normalize_rows(space, np.array(fixed_x))
    FW = _normalize_rows(space, np.array(fixed_w))
    k = min(len(FX), starts)
    X[:k] = FX[:k]
    W[:k] = FW[:k]
    return X, W


def tangential(
    space: Space,
    t: float,
    budget=None,
    seed: int = 0,
    starts: int = 64,
) -> CertifiedInterval:
    """Tangential modulus of convexity: inf ||x + t v|| - 1 over unit x, v
    with v Birkhoff-James orthogonal to x.

    Smooth spaces parameterise v inside the kernel of the norming functional
    of x; otherwise orthogonality is enforced as a penalty and re-checked on
    the reported minimiser.
    """
    if t < 0:
        raise ModulusError("t must be non-negative")
    if space.dim < 2:
        raise ModulusError("tangential modulus needs dimension >= 2")
    bud = _as_budget(budget)
    if t == 0.0:
        return CertifiedInterval(0.0, 0.0, "exact", 0)

    X, W = _tangential_starts(space, starts, seed)
    n = space.dim
    smooth = _smooth_supported(space)
    pen = 10.0

    def objective(Xc, Wc):
        if smooth:
            V = _kernel_direction(space, Xc, Wc)
            vals = eval_norm_many(space, Xc + t * V) - 1.0
            return vals, V
        V = _normalize_rows(space, Wc)
        raw = eval_norm_many(space, Xc + t * V) - 1.0
        return raw + pen * _bj_violation_many(space, Xc, V), V

    vals, V = objective(X, W)
    step = np.full(len(X), 0.25)
    while np.max(step) > 1e-10 and bud.spend(6 * len(X)):
        moved = np.zeros(len(X), dtype=bool)
        for which in (0, 1):
            for axis_i in range(n):
                for sgn in (1.0, -1.0):
                    Xp, Wp = X, W
                    if which == 0:
                        Xp = X.copy()
                        Xp[:, axis_i] += sgn * step
                        Xp = _normalize_rows(space, Xp)
                    else:
                        Wp = W.copy()
                        Wp[:, axis_i] += sgn * step
                    v, _ = objective(Xp, Wp)
                    better = v < vals - 1e-15
                    if np.any(better):
                        X = np.where(better[:, None], Xp, X)
                        W = np.where(better[:, None], Wp, W)
                        vals = np.where(better, v, vals)
                        moved |= better
        step = np.where(moved, step, step * 0.5)
        if bud.exhausted:
            break

    _, V = objective(X, W)
    if smooth:
        raw = eval_norm_many(space, X + t * V) - 1.0
        hi = float(max(0.0, np.min(raw)))
    else:
        V = _normalize_rows(space, W)
        viol = _bj_violation_many(space, X, V)
        raw = eval_norm_many(space, X + t * V) - 1.0
        ok = viol <= 1e-6
        if not np.any(ok):
            raise ModulusError("no Birkhoff-James orthogonal pair found within tolerance")
        hi = float(max(0.0, np.min(raw[ok])))
    if _is_hilbert(space):
        lo = min(hilbert_tangential(t), hi)
        return CertifiedInterval(lo, hi, "best-found/analytic-bound", bud.used)
    return CertifiedInterval(0.0, hi, "best-found", bud.used)


def tangential_table(
    space: Space,
    grid: Sequence[float],
    budget=None,
    seed: int = 0,
    starts: int = 64,
) -> Table:
    """Sampled tangential modulus on a grid, as a table with hi endpoints."""
    g = np.asarray(grid, dtype=float)
    vals = []
    for i, t in enumerate(g):
        vals.append(tangential(space, float(t), budget=budget, seed=seed + i, starts=starts).hi)
    return Table(g, vals, provenance=f"tangential {space.label()} seed={seed}")


# ---------------------------------------------------------------------------
# t_X and inequality reports


def t_x(space: Space, budget=None, seed: int = 0, starts: int = 64) -> CertifiedInterval:
    """The threshold sup{t in [0,2): delta_X(t) <= 1 - t}, by bisection on
    certified delta intervals.

    The lower endpoint is certified by the hi curve of delta, the upper by
    the lo curve; the result always lies in [2/sqrt(5), 1] for true moduli.
    """
    bud = _as_budget(budget)
    calls = 0

    def d(tv: float) -> CertifiedInterval:
        nonlocal calls
        calls += 1
        sub = EvalBudget(max(2000, bud.max_evals // 40))
        iv = delta(space, tv, budget=sub, seed=seed + calls, starts=starts)
        bud.spend(sub.used)
        return iv

    # certified lower endpoint: largest t with delta(t).hi <= 1 - t
    a_lo, a_hi = 0.0, 1.0
    if d(1.0).hi <= 0.0 + 1e-12:
        a = 1.0
    else:
        for _ in range(20):
            if bud.exhausted:
                raise ModulusError("budget exhausted before bracketing t_X")
            mid = 0.5 * (a_lo + a_hi)
            if d(mid).hi <= 1.0 - mid:
                a_lo = mid
            else:
                a_hi = mid
        a = a_lo
    # certified upper endpoint: smallest t with delta(t).lo >= 1 - t;
    # always true at t = 1 since delta.lo >= 0
    b_lo, b_hi = a, 1.0
    for _ in range(20):
        if bud.exhausted:
            break
        mid = 0.5 * (b_lo + b_hi)
        if d(mid).lo >= 1.0 - mid:
            b_hi = mid
        else:
            b_lo = mid
    b = b_hi
    return CertifiedInterval(min(a, b), b, "bisection", bud.used)


@dataclass
class GridCheck:
    t: float
    lhs: float
    rhs: float
    ok: bool


@dataclass
class InequalityReport:
    name: str
    checks: list

    @property
    def all_ok(self) -> bool:
        return all(c.ok for c in self.checks)


def nordlander_check(
    space: Space, grid: Sequence[float], budget=None, seed: int = 0, starts: int = 64
) -> InequalityReport:
    """delta_X(t) never exceeds the Hilbert modulus 1 - sqrt(1 - t^2/4)."""
    checks = []
    for i, t in enumerate(np.asarray(grid, dtype=float)):
        iv = delta(space, float(t), budget=budget, seed=seed + i, starts=starts)
        bound = hilbert_delta(float(t))
        checks.append(GridCheck(float(t), iv.lo, bound, iv.lo <= bound + 1e-9))
    return InequalityReport("nordlander", checks)


def varphi_delta_inequalities(
    space: Space,
    grid: Sequence[float],
    budget=None,
    seed: int = 0,
    starts: int = 64,
    slack: float = 1e-9,
) -> InequalityReport:
    """The two comparison inequalities between delta_X and the tangential
    modulus, checked with conservatively oriented interval endpoints.

    (a) delta(t / (1 + phi(t))) <= phi(t) / (1 + phi(t)) for t in [0, 2);
    (b) phi(t/2 - 2 delta(t)) <= delta(t), evaluated only where the argument
        is non-negative.
    """
    checks = []
    for i, t in enumerate(np.asarray(grid, dtype=float)):
        t = float(t)
        if not 0.0 <= t < 2.0:
            continue
        phi_iv = tangential(space, t, budget=budget, seed=seed + 10 * i, starts=starts)
        del_iv = delta(space, t, budget=budget, seed=seed + 10 * i + 1, starts=starts)
        # (a): smaller argument and lo endpoint on the left, hi on the right
        arg_a = t / (1.0 + phi_iv.hi)
        lhs_a = delta(space, arg_a, budget=budget, seed=seed + 10 * i + 2, starts=starts).lo
        rhs_a = phi_iv.hi / (1.0 + phi_iv.hi)
        checks.append(GridCheck(t, lhs_a, rhs_a, lhs_a <= rhs_a + slack))
        # (b)
        arg_b = t / 2.0 - 2.0 * del_iv.hi
        if arg_b >= 0.0:
            lhs_b = tangential(space, arg_b, budget=budget, seed=seed + 10 * i + 3, starts=starts).lo
            checks.append(GridCheck(t, lhs_b, del_iv.hi, lhs_b <= del_iv.hi + slack))
    return InequalityReport("varphi-delta", checks)
