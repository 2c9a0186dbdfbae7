"""Greedy construction of separated, dense discrete subgroups at finite scale.

Given a list of targets, each target either lies within distance 1 of the
current subgroup (closest-vector query) or contributes a new generator
u - x, where the direction oracle supplies a unit vector x far from the
sphere of the span of everything built so far.  The resulting subgroup is
theta-separated and covers every processed target within 1; rescaling this
trade-off witnesses an upper bound 2(1+eps)/theta for the lattice
simultaneous packing-and-covering constant on the target cloud.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .lattices import Lattice, LatticeError, enumerate_ball
from .spaces import Lp, Space, euclid_bounds, eval_norm, eval_norm_many, space_from_json, space_to_json


class SubgroupError(ValueError):
    pass


class OracleExhaustedError(SubgroupError):
    pass


class OracleDistanceError(SubgroupError):
    """An oracle output failed the sampled theta-distance guardrail."""

    def __init__(self, target_index: int, sample, distance: float):
        self.target_index = target_index
        self.sample = sample
        self.distance = distance
        super().__init__(
            f"oracle output is {distance:.6f} from a sphere sample of the current span "
            f"at target {target_index}; theta requires more"
        )


class SeparationViolation(SubgroupError):
    def __init__(self, combo, norm):
        self.combo = combo
        self.norm = norm
        super().__init__(f"subgroup element with norm {norm:.6g} below theta: coefficients {combo}")


class CoverageViolation(SubgroupError):
    def __init__(self, target_index, distance):
        self.target_index = target_index
        self.distance = distance
        super().__init__(f"target {target_index} is {distance:.6g} from the subgroup")


def _support(v: np.ndarray, tol: float = 0.0) -> set[int]:
    return set(np.nonzero(np.abs(v) > tol)[0].tolist())


class FreshCoordinateOracle:
    """Returns a coordinate direction untouched by every generator and the
    current target; in l_p this is exactly theta-far from the span's sphere
    because disjoint supports add p-th powers.

    `ambient` caps the coordinate budget; exhaustion is an error.
    """

    kind = "fresh-coordinate"

    def __init__(self, ambient: int):
        self.ambient = int(ambient)
        self.used: set[int] = set()

    def propose(self, space: Space, generators: list[np.ndarray], target: np.ndarray) -> np.ndarray:
        blocked = set(self.used)
        blocked |= _support(target)
        for g in generators:
            blocked |= _support(g)
        for alpha in range(min(self.ambient, space.dim)):
            if alpha not in blocked:
                e = np.zeros(space.dim)
                e[alpha] = 1.0
                self.used.add(alpha)
                return e
        raise OracleExhaustedError(
            f"fresh-coordinate budget exhausted: {len(blocked)} of {self.ambient} coordinates blocked"
        )

    def needs_distance_check(self) -> bool:
        return False


class CustomOracle:
    """Finite list of candidate unit vectors with a declared theta; outputs
    are guard-checked against sampled sphere points of the current span."""

    kind = "custom"

    def __init__(self, candidates, theta: float):
        self.candidates = [np.asarray(c, dtype=float) for c in candidates]
        self.theta = float(theta)
        self._next = 0

    def propose(self, space: Space, generators: list[np.ndarray], target: np.ndarray) -> np.ndarray:
        if self._next >= len(self.candidates):
            raise OracleExhaustedError("custom oracle ran out of candidate directions")
        x = self.candidates[self._next]
        self._next += 1
        return x

    def needs_distance_check(self) -> bool:
        return True


@dataclass
class SeparationCertificate:
    radius: float
    enumerated_count: int
    min_nonzero_norm: float
    coverage_ok: bool
    max_coverage_dist: float

    def to_json(self) -> dict:
        return {
            "radius": self.radius,
            "enumerated_count": self.enumerated_count,
            "min_nonzero_norm": None if math.isinf(self.min_nonzero_norm) else self.min_nonzero_norm,
            "coverage_ok": self.coverage_ok,
            "max_coverage_dist": self.max_coverage_dist,
        }


@dataclass
class SubgroupResult:
    space: Space
    generators: list
    theta: float
    eps: float
    targets: np.ndarray
    log: list  # per-target dicts: {target, decision, distance, generator}
    oracle_kind: str
    verified: Optional[SeparationCertificate] = None

    @property
    def fresh_built(self) -> bool:
        return self.oracle_kind == "fresh-coordinate"

    def generator_matrix(self) -> np.ndarray:
        if not self.generators:
            return np.zeros((0, self.space.dim))
        return np.array(self.generators)

    def to_json(self) -> dict:
        return {
            "space": space_to_json(self.space),
            "generators": [g.tolist() for g in self.generators],
            "theta": self.theta,
            "eps": self.eps,
            "targets": self.targets.tolist(),
            "log": self.log,
            "oracle_kind": self.oracle_kind,
            "verified": self.verified.to_json() if self.verified else None,
        }

    @classmethod
    def from_json(cls, doc) -> "SubgroupResult":
        if isinstance(doc, str):
            doc = json.loads(doc)
        cert = None
        if doc.get("verified"):
            c = doc["verified"]
            cert = SeparationCertificate(
                radius=c["radius"],
                enumerated_count=c["enumerated_count"],
                min_nonzero_norm=math.inf if c["min_nonzero_norm"] is None else c["min_nonzero_norm"],
                coverage_ok=c["coverage_ok"],
                max_coverage_dist=c["max_coverage_dist"],
            )
        return cls(
            space=space_from_json(doc["space"]),
            generators=[np.asarray(g, dtype=float) for g in doc["generators"]],
            theta=doc["theta"],
            eps=doc["eps"],
            targets=np.asarray(doc["targets"], dtype=float),
            log=doc["log"],
            oracle_kind=doc["oracle_kind"],
            verified=cert,
        )


# ---------------------------------------------------------------------------
# closest-vector queries on the growing subgroup


def _fresh_cvp(space: Lp, gens: np.ndarray, fresh_idx: list[int], u: np.ndarray, cutoff: float) -> float:
    """Exact distance from u to the integer span when each generator owns an
    exclusive coordinate carrying no target mass: every nonzero coefficient k
    on generator i costs |k|^p at that coordinate, which bounds the search to
    sparse coefficient vectors.

    Returns the true distance when it is below `cutoff`, else `cutoff`.
    """
    p = space.p
    m = len(gens)
    best = min(cutoff, eval_norm(space, u))
    if m == 0 or best == 0.0:
        return best
    if np.any(np.abs(u[np.asarray(fresh_idx, dtype=int)]) > 0):
        return _generic_cvp(space, gens, u, cutoff)

    def kcost(k: int) -> float:
        return float(abs(k)) if p == math.inf else float(abs(k)) ** p

    support: list[tuple[int, int]] = []

    def evaluate():
        nonlocal best
        d = u.copy()
        for i, k in support:
            d = d - k * gens[i]
        val = eval_norm(space, d)
        if val < best:
            best = val

    def descend(start: int, partial: float):
        evaluate()
        for i in range(start, m):
            k = 1
            while True:
                c = kcost(k)
                newp = max(partial, c) if p == math.inf else partial + c
                if (newp >= best) if p == math.inf else (newp >= best**p):
                    break
                for sk in (k, -k):
                    support.append((i, sk))
                    descend(i + 1, newp)
                    support.pop()
                k += 1

    descend(0, 0.0)
    return best


def _generic_cvp(space: Space, gens: np.ndarray, u: np.ndarray, cutoff: float) -> float:
    """Distance from u to the integer span of generator rows.

    Exact via Euclidean enumeration for small independent generator sets;
    above rank 40 (or for dependent rows) a bounded-coefficient heuristic is
    used and the caller records the query as heuristic.
    """
    if len(gens) == 0:
        return min(cutoff, eval_norm(space, u))
    try:
        lat = Lattice(gens)
    except LatticeError:
        lat = None
    best = min(cutoff, eval_norm(space, u))
    if lat is not None and lat.rank <= 40:
        from .lattices import dist_to_lattice

        return min(best, dist_to_lattice(space, lat, u))
    # heuristic: Babai-style rounding plus a +-1 neighbourhood of the rounding
    coeff = np.linalg.lstsq(gens.T, u, rcond=None)[0]
    k0 = np.round(coeff).astype(int)
    best = min(best, eval_norm(space, u - k0 @ gens))
    for i in range(len(gens)):
        for dk in (-1, 1):
            k = k0.copy()
            k[i] += dk
            best = min(best, eval_norm(space, u - k @ gens))
    return best


def _subgroup_dist(space: Space, result_gens: list, fresh_idx: list, fresh: bool, u: np.ndarray, cutoff: float) -> float:
    gens = np.array(result_gens) if result_gens else np.zeros((0, len(u)))
    if fresh and len(gens) > 0:
        return _fresh_cvp(space, gens, fresh_idx, u, cutoff)
    return _generic_cvp(space, gens, u, cutoff)


# ---------------------------------------------------------------------------
# build


def _sampled_span_check(
    space: Space,
    generators: list[np.ndarray],
    target: np.ndarray,
    x: np.ndarray,
    theta: float,
    index: int,
    samples: int = 512,
    seed: int = 0,
) -> None:
    """Guardrail: x must be >= theta - 1e-9 from sampled unit vectors of
    span(generators + target), including the generators' normalisations."""
    basis = [g for g in generators if eval_norm(space, g) > 0]
    tn = eval_norm(space, target)
    if tn > 0:
        basis.append(target)
    if not basis:
        return
    B = np.array(basis)
    rng = np.random.default_rng(seed)
    C = rng.standard_normal((samples, len(basis)))
    Z = C @ B
    norms = eval_norm_many(space, Z)
    keep = norms > 1e-12
    Z = Z[keep] / norms[keep, None]
    for g in basis:
        gn = eval_norm(space, g)
        Z = np.vstack([Z, g / gn, -g / gn])
    d = eval_norm_many(space, Z - x[None, :])
    worst = int(np.argmin(d))
    if d[worst] < theta - 1e-9:
        raise OracleDistanceError(index, Z[worst], float(d[worst]))


def build(
    space: Space,
    targets,
    oracle,
    theta: float,
    eps: float = 0.05,
    coverage_tol: float = 1e-12,
) -> SubgroupResult:
    """Run the greedy subgroup construction over the targets in input order.

    Each target within distance 1 of the current subgroup is logged as
    covered; otherwise the oracle provides a unit direction x and u - x
    becomes a new generator (at distance exactly 1 from u).
    """
    if theta <= 1.0:
        raise SubgroupError(f"theta must exceed 1, got {theta}")
    if eps < 0:
        raise SubgroupError("eps must be non-negative")
    T = np.asarray(targets, dtype=float)
    if T.ndim != 2 or T.shape[1] != space.dim:
        raise SubgroupError("targets must be a list of points of the space dimension")
    fresh = isinstance(oracle, FreshCoordinateOracle)
    if fresh and not isinstance(space, Lp):
        raise SubgroupError("the fresh-coordinate oracle applies to l_p descriptors only")

    generators: list[np.ndarray] = []
    fresh_idx: list[int] = []
    fresh_exclusive = fresh  # exclusive-coordinate CVP stays exact only while
    # no target touches a coordinate an earlier generator consumed
    log = []
    for i, u in enumerate(T):
        if fresh_exclusive and _support(u) & set(fresh_idx):
            fresh_exclusive = False
        # the coverage query only needs a yes/no at distance 1; the cutoff
        # keeps the branch-and-bound tree tiny
        d = _subgroup_dist(space, generators, fresh_idx, fresh_exclusive, u, cutoff=1.0 + 2.0 * coverage_tol + 1e-9)
        if d <= 1.0 + coverage_tol:
            log.append({"target": i, "decision": "covered-by-existing", "distance": d, "generator": None})
            continue
        x = oracle.propose(space, generators, u)
        nx = eval_norm(space, x)
        if abs(nx - 1.0) > 1e-9:
            raise SubgroupError(f"oracle output is not a unit vector (norm {nx})")
        if oracle.needs_distance_check():
            guard_theta = min(theta, getattr(oracle, "theta", theta))
            _sampled_span_check(space, generators, u, x, guard_theta, i, seed=31 * i + 7)
        g = u - x
        generators.append(g)
        if fresh:
            fresh_idx.append(int(np.nonzero(x)[0][0]))
        log.append(
            {"target": i, "decision": "new-generator", "distance": 1.0, "generator": len(generators) - 1}
        )
    return SubgroupResult(
        space=space,
        generators=generators,
        theta=theta,
        eps=eps,
        targets=T,
        log=log,
        oracle_kind=getattr(oracle, "kind", "custom"),
    )


# ---------------------------------------------------------------------------
# verification


def _enumerate_fresh(space: Lp, gens: np.ndarray, fresh_idx: list[int], radius: float, cap: int):
    """Exhaustively enumerate coefficient vectors whose subgroup element can
    have norm <= radius: the exclusive coordinate of generator i contributes
    |k_i|^p, so only sparse coefficient patterns fit inside the ball."""
    p = space.p
    m = len(gens)
    budget = radius if p == math.inf else radius**p
    out = [np.zeros(m, dtype=int)]
    support: list[tuple[int, int]] = []

    def emit():
        if len(out) > cap:
            raise SubgroupError("verification enumeration exceeded its cap; lower the radius")
        ks = np.zeros(m, dtype=int)
        for i, k in support:
            ks[i] = k
        out.append(ks)

    def descend(start: int, partial: float):
        for i in range(start, m):
            k = 1
            while True:
                c = float(k) if p == math.inf else float(k) ** p
                newp = max(partial, c) if p == math.inf else partial + c
                if newp > budget:
                    break
                for sk in (k, -k):
                    support.append((i, sk))
                    emit()
                    descend(i + 1, newp)
                    support.pop()
                k += 1

    descend(0, 0.0)
    return np.array(out, dtype=int)


def verify(space: Space, result: SubgroupResult, radius: float, cap: int = 2_000_000) -> SeparationCertificate:
    """Exhaustive separation certificate plus a coverage re-check.

    Enumerates every subgroup element with norm at most `radius` and asserts
    the nonzero minimum is at least theta; each target must lie within
    1 + eps of the subgroup (closest-vector query).
    """
    if radius < result.theta:
        raise SubgroupError("verification radius must be at least theta")
    gens = result.generator_matrix()
    m = len(gens)
    # recover exclusive coordinates for fresh builds from the generators; the
    # column must be untouched by targets and by every other generator
    fresh = result.fresh_built
    fresh_cols: list[int] = []
    if fresh and m > 0:
        used_by_targets = set()
        for t in result.targets:
            used_by_targets |= _support(t)
        for g in gens:
            cols = [c for c in _support(g) if c not in used_by_targets]
            if len(cols) != 1:
                fresh = False
                break
            fresh_cols.append(cols[0])
        if fresh:
            col_matrix = gens[:, fresh_cols]
            if not np.allclose(col_matrix, -np.eye(m), atol=1e-12):
                fresh = False
    if not fresh:
        fresh_cols = []

    if m == 0:
        ks = np.zeros((1, 0), dtype=int)
        elements = np.zeros((1, space.dim))
    elif fresh:
        ks = _enumerate_fresh(space, gens, fresh_cols, radius * (1 + 1e-12), cap)
        elements = ks @ gens
    else:
        lat = Lattice(gens)  # raises on dependent rows
        c1, _ = euclid_bounds(space)
        ks = enumerate_ball(lat.R, radius * (1 + 1e-12) / c1, cap)
        elements = ks @ gens

    norms = eval_norm_many(space, elements) if len(elements) else np.zeros(0)
    inside = norms <= radius * (1 + 1e-9)
    ks, norms = ks[inside], norms[inside]
    nonzero = np.any(ks != 0, axis=1)
    if np.any(nonzero):
        min_nonzero = float(np.min(norms[nonzero]))
        worst = int(np.argmin(np.where(nonzero, norms, np.inf)))
        if min_nonzero < result.theta - 1e-9:
            raise SeparationViolation(ks[worst].tolist(), min_nonzero)
    else:
        min_nonzero = math.inf

    max_cov = 0.0
    cov_cutoff = 1.0 + result.eps + 1e-6
    for i, u in enumerate(result.targets):
        d = _subgroup_dist(space, list(gens), fresh_cols, fresh, u, cutoff=cov_cutoff)
        max_cov = max(max_cov, d)
        if d > 1.0 + result.eps + 1e-9:
            raise CoverageViolation(i, d)

    cert = SeparationCertificate(
        radius=radius,
        enumerated_count=int(len(ks)),
        min_nonzero_norm=min_nonzero,
        coverage_ok=True,
        max_coverage_dist=max_cov,
    )
    result.verified = cert
    return cert


def gamma_star_upper_from_build(result: SubgroupResult) -> float:
    """2(1+eps)/theta: the packing-covering upper bound the build witnesses."""
    if result.verified is None:
        raise SubgroupError("verify the build before extracting a bound")
    return 2.0 * (1.0 + result.eps) / result.theta


# ---------------------------------------------------------------------------
# product combinator


def product(left: SubgroupResult, right: SubgroupResult, max_targets: int = 4096) -> SubgroupResult:
    """Coordinate-wise product of two builds on the sup-norm direct sum.

    Generators embed as (g, 0) and (0, h); the product of the target clouds
    is covered coordinate-wise, and separation is the smaller of the two
    thetas.  The combined result must be re-verified.
    """
    from .spaces import DirectSum

    space = DirectSum(left.space, right.space, math.inf)
    gens = [np.concatenate([g, np.zeros(right.space.dim)]) for g in left.generators]
    gens += [np.concatenate([np.zeros(left.space.dim), h]) for h in right.generators]
    targets = []
    for u in left.targets:
        for v in right.targets:
            targets.append(np.concatenate([u, v]))
            if len(targets) >= max_targets:
                break
        if len(targets) >= max_targets:
            break
    log = [{"target": i, "decision": "product", "distance": None, "generator": None} for i in range(len(targets))]
    return SubgroupResult(
        space=space,
        generators=gens,
        theta=min(left.theta, right.theta),
        eps=max(left.eps, right.eps),
        targets=np.array(targets),
        log=log,
        oracle_kind="product",
    )
