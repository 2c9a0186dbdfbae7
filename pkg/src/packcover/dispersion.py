"""Finite dispersion: maximise the minimum pairwise distance of m points in
the unit ball of a normed space.

Best-found configurations are lower-bound certificates only (the separation
is achieved by the returned points); no upper bound is attempted.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .spaces import Space, eval_norm_many, sphere_sample

MAX_POINTS = 512


class DispersionError(ValueError):
    pass


@dataclass
class DispersionResult:
    points: np.ndarray
    min_separation: float
    method: str
    iterations: int

    def to_json(self) -> dict:
        return {
            "points": self.points.tolist(),
            "min_separation": self.min_separation,
            "method": self.method,
            "iterations": self.iterations,
        }


def verify_separation(space: Space, points) -> float:
    """Exact minimum pairwise distance; full O(m^2) scan."""
    P = np.asarray(points, dtype=float)
    if P.ndim != 2 or len(P) < 2:
        raise DispersionError("need at least two points")
    m = len(P)
    best = np.inf
    for i in range(m - 1):
        d = eval_norm_many(space, P[i + 1 :] - P[i])
        best = min(best, float(np.min(d)))
    return best


def _pairwise_min(space: Space, P: np.ndarray) -> float:
    return verify_separation(space, P)


def _seed_configs(space: Space, m: int, seed: int) -> list[np.ndarray]:
    """Deterministic starting configurations: signed coordinate prefix,
    simplex-like spreads, equiangular points in the plane, random draws."""
    n = space.dim
    configs = []

    axes = []
    for i in range(n):
        e = np.zeros(n)
        e[i] = 1.0
        axes += [e, -e]
    A = np.array(axes)
    A = A / eval_norm_many(space, A)[:, None]
    if m <= len(A):
        configs.append(A[:m])
    else:
        filler = sphere_sample(space, m - len(A), seed + 11)
        configs.append(np.vstack([A, filler]))

    if n == 2:
        ang = 2.0 * np.pi * np.arange(m) / m
        E = np.column_stack([np.cos(ang), np.sin(ang)])
        configs.append(E / eval_norm_many(space, E)[:, None])

    if m == n + 1:
        # regular simplex directions: coordinate corners recentred
        S = np.vstack([np.eye(n), -np.ones(n) / np.sqrt(n)])
        S = S - np.mean(S, axis=0)
        configs.append(S / eval_norm_many(space, S)[:, None])

    configs.append(sphere_sample(space, m, seed))
    configs.append(sphere_sample(space, m, seed + 101))
    return configs


def _repulsion_ascent(space: Space, P: np.ndarray, budget: int) -> tuple[np.ndarray, float, int]:
    """Move each point away from its nearest neighbour (lowest index on
    ties), project back to the ball, accept sweeps that raise the minimum."""
    m, n = P.shape
    cur = _pairwise_min(space, P)
    step = 0.25
    iters = 0
    while step > 1e-9 and iters < budget:
        iters += 1
        diffs = P[:, None, :] - P[None, :, :]
        D = eval_norm_many(space, diffs.reshape(-1, n)).reshape(m, m)
        np.fill_diagonal(D, np.inf)
        nn = np.argmin(D, axis=1)  # argmin takes the lowest index on ties
        dirs = P - P[nn]
        lens = eval_norm_many(space, dirs)
        lens[lens == 0] = 1.0
        Q = P + step * dirs / lens[:, None]
        qn = eval_norm_many(space, Q)
        outside = qn > 1.0
        if np.any(outside):
            Q[outside] = Q[outside] / qn[outside, None]
        val = _pairwise_min(space, Q)
        if val > cur + 1e-15:
            P, cur = Q, val
        else:
            step *= 0.5
    return P, cur, iters


def max_min_separation(space: Space, m: int, budget: int = 2000, seed: int = 0) -> DispersionResult:
    """Best m-point configuration in the unit ball found by deterministic
    seeds plus pairwise-repulsion ascent with renormalising projection."""
    if m < 2:
        raise DispersionError("need m >= 2 points")
    if m > MAX_POINTS:
        raise DispersionError(f"m exceeds the configured maximum {MAX_POINTS}")
    best_P, best_val, total_iters = None, -np.inf, 0
    for idx, P0 in enumerate(_seed_configs(space, m, seed)):
        P, val, iters = _repulsion_ascent(space, P0.copy(), budget)
        total_iters += iters
        if val > best_val:
            best_P, best_val = P, val
    sep = verify_separation(space, best_P)
    return DispersionResult(points=best_P, min_separation=sep, method="repulsion-ascent", iterations=total_iters)
