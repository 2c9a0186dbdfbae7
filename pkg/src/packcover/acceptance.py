"""Acceptance battery: one callable per criterion, shared by the CLI `suite`
subcommand and the pytest suite.  Each criterion returns a result with the
measured numbers so failures are diagnosable from the log alone."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .bounds import chain_report, lp_step1_check, minkowski_type_check, named_gamma
from .lattices import Lattice, gamma_star_of_lattice, optimize_lattice, saturate_packing
from .moduli import (
    EvalBudget,
    delta,
    hilbert_delta,
    phi_p,
    t_x,
    tangential,
    tangential_table,
    varphi_delta_inequalities,
)
from .spaces import Lp, eval_norm_many, regular_polygon, random_symmetric_polytope
from .subgroup import FreshCoordinateOracle, build, gamma_star_upper_from_build, verify
from .suptiling import SimpleFunction, round_even, sup_distance

OCTAGON_BOUND = 2.0 * (2.0 - math.sqrt(2.0))  # planar symmetric optimum
OCTAHEDRON_VALUE = 7.0 / 6.0


@dataclass
class CriterionResult:
    name: str
    passed: bool
    details: dict = field(default_factory=dict)
    elapsed: float = 0.0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        parts = ", ".join(f"{k}={v}" for k, v in self.details.items())
        return f"[{status}] {self.name} ({self.elapsed:.1f}s) {parts}"


def _result(name, passed, details, t0) -> CriterionResult:
    return CriterionResult(name, bool(passed), details, time.time() - t0)


def criterion_octahedron(seed: int = 0) -> CriterionResult:
    """Lattice search under the octahedron norm reaches the 3-d optimum."""
    t0 = time.time()
    est = optimize_lattice(Lp(1, 3), 3, budget=200_000, seed=seed, n_seeds=8)
    hi = est.gamma_star.hi
    ok = hi <= OCTAHEDRON_VALUE + 0.02 and hi >= OCTAHEDRON_VALUE - 0.02
    return _result(
        "octahedron gamma* = 7/6",
        ok,
        {"hi": round(hi, 6), "lo": round(est.gamma_star.lo, 6), "target": round(OCTAHEDRON_VALUE, 6)},
        t0,
    )


def criterion_planar(seed: int = 0, n_random: int = 20) -> CriterionResult:
    """The affinely regular octagon attains the planar bound 2(2 - sqrt 2)
    and no tested symmetric planar body exceeds it."""
    t0 = time.time()
    est = optimize_lattice(regular_polygon(8), 2, budget=16_000, seed=seed, n_seeds=6)
    oct_hi = est.gamma_star.hi
    oct_ok = abs(oct_hi - OCTAGON_BOUND) <= 0.01
    worst = oct_hi
    all_ok = oct_ok
    details = {"octagon_hi": round(oct_hi, 6), "bound": round(OCTAGON_BOUND, 6)}
    others = [regular_polygon(4), regular_polygon(6), Lp(2, 2)]
    others += [random_symmetric_polytope(2, 4 + k % 4, seed=500 + k) for k in range(n_random)]
    for i, sp in enumerate(others):
        g = optimize_lattice(sp, 2, budget=6_000, seed=seed + 1 + i, n_seeds=4)
        worst = max(worst, g.gamma_star.hi)
        if g.gamma_star.hi > OCTAGON_BOUND + 0.02:
            all_ok = False
            details[f"violator_{i}"] = round(g.gamma_star.hi, 6)
    details["worst_hi"] = round(worst, 6)
    return _result("planar symmetric bound 2(2-sqrt2)", all_ok and oct_ok, details, t0)


def criterion_cube_tiling(seed: int = 0, n_functions: int = 10_000) -> CriterionResult:
    """Cube lattices tile sup-norm space, and even-integer rounding is
    1-dense and 2-separated on random simple functions."""
    t0 = time.time()
    ok = True
    details = {}
    for n in (2, 3):
        est = gamma_star_of_lattice(Lp(math.inf, n), Lattice(2.0 * np.eye(n)), mesh=0.25)
        if not (est.gamma_star.contains(1.0) and est.gamma_star.width <= 0.25 + 1e-12):
            ok = False
        details[f"cube_{n}d"] = (round(est.gamma_star.lo, 6), round(est.gamma_star.hi, 6))
    rng = np.random.default_rng(seed)
    vals = rng.uniform(-10.0, 10.0, size=(n_functions, 6))
    worst = 0.0
    for row in vals:
        f = SimpleFunction([f"c{i}" for i in range(len(row))], row)
        g = round_even(f)
        worst = max(worst, sup_distance(f, g))
    dense_ok = worst <= 1.0
    evens = 2 * rng.integers(-5, 6, size=(400, 6))
    sep_ok = True
    for a in range(0, 400, 2):
        g1 = SimpleFunction([f"c{i}" for i in range(6)], evens[a])
        g2 = SimpleFunction([f"c{i}" for i in range(6)], evens[a + 1])
        d = sup_distance(g1, g2)
        if d != 0.0 and d < 2.0:
            sep_ok = False
    details["max_round_dist"] = worst
    return _result("cube tiling + even rounding", ok and dense_ok and sep_ok, details, t0)


def criterion_hexagonal(seed: int = 0) -> CriterionResult:
    """The hexagonal lattice witnesses the planar Euclidean constant."""
    t0 = time.time()
    lat = Lattice([[2.0, 0.0], [1.0, math.sqrt(3.0)]])
    est = gamma_star_of_lattice(Lp(2, 2), lat, mesh=1.0 / 16, tol=0.01)
    target = 2.0 / math.sqrt(3.0)
    ok = est.gamma_star.contains(target) and est.gamma_star.width <= 0.01 + 1e-12
    return _result(
        "hexagonal lattice 2/sqrt(3)",
        ok,
        {"lo": round(est.gamma_star.lo, 6), "hi": round(est.gamma_star.hi, 6), "target": round(target, 6)},
        t0,
    )


def _sparse_ball_targets(p: float, ambient: int, count: int, prefix: int, radius: float, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    raw = rng.standard_normal((count, prefix))
    norms = eval_norm_many(Lp(p, prefix), raw)
    radii = radius * rng.random(count)
    T = np.zeros((count, ambient))
    T[:, :prefix] = raw / norms[:, None] * radii[:, None]
    return T


def criterion_subgroup(seed: int = 0, count: int = 200, ambient: int = 448) -> CriterionResult:
    """Greedy subgroup builds reproduce the l_p constants 2/2^(1/p) within
    the 5 percent coverage slack."""
    t0 = time.time()
    eps = 0.05
    ok = True
    details = {}
    for p in (1.0, 2.0, 3.0):
        theta = 2.0 ** (1.0 / p)
        space = Lp(p, ambient)
        targets = _sparse_ball_targets(p, ambient, count, prefix=8, radius=5.0, seed=seed + int(10 * p))
        res = build(space, targets, FreshCoordinateOracle(ambient), theta=theta, eps=eps)
        cert = verify(space, res, radius=theta * 1.25)
        upper = gamma_star_upper_from_build(res)
        exact = 2.0 / 2.0 ** (1.0 / p)
        sep_ok = cert.min_nonzero_norm >= (1.0 - eps) * 2.0 ** (1.0 / p) - 1e-9
        cov_ok = cert.max_coverage_dist <= 1.0 + 1e-9
        up_ok = upper <= (1.0 + eps) * exact + 1e-9
        ok = ok and sep_ok and cov_ok and up_ok
        details[f"p{p}"] = {
            "generators": len(res.generators),
            "min_nonzero": None if math.isinf(cert.min_nonzero_norm) else round(cert.min_nonzero_norm, 6),
            "coverage": round(cert.max_coverage_dist, 6),
            "upper": round(upper, 6),
            "exact": round(exact, 6),
        }
    return _result("subgroup builds vs l_p constants", ok, details, t0)


def criterion_moduli_golden(seed: int = 0) -> CriterionResult:
    """Hilbert modulus values and the closed-form l_p growth modulus."""
    t0 = time.time()
    ok = True
    details = {}
    for eps in (0.5, 1.0, 1.5):
        iv = delta(Lp(2, 2), eps, seed=seed)
        err = abs(iv.hi - hilbert_delta(eps))
        details[f"delta_{eps}"] = f"{err:.2e}"
        ok = ok and err <= 1e-4
    for n in (2, 3):
        iv = tangential(Lp(2, n), 1.0, seed=seed)
        err = abs(iv.hi - (math.sqrt(2.0) - 1.0))
        details[f"tangential_{n}d"] = f"{err:.2e}"
        ok = ok and err <= 1e-4
    for p in (1, 2, 4):
        ok = ok and phi_p(p, 1.0) == 2.0 ** (1.0 / p) - 1.0
    return _result("moduli golden values", ok, details, t0)


def criterion_inequalities(seed: int = 0) -> CriterionResult:
    """Tangential-modulus property battery, the t_X window, the direct-sum
    norm inequality grid, and the chain-report consistency checks."""
    t0 = time.time()
    ok = True
    details = {}
    ps = (1.0, 1.5, 2.0, 3.0, 4.0)
    grid = np.array([0.25, 0.5, 0.75, 1.0, 1.25, 1.5])
    for p in ps:
        space = Lp(p, 2)
        tab = tangential_table(space, grid, budget=60_000, seed=seed, starts=48)
        vals = tab.values
        lip = bool(np.all(np.abs(np.diff(vals)) <= np.diff(grid) + 1e-6))
        lam_ok = True
        for lam in (0.25, 0.5, 0.75):
            for tt, v in zip(grid, vals):
                if tab(lam * tt) > lam * v + 1e-6:
                    lam_ok = False
        rep = varphi_delta_inequalities(space, [0.4, 0.9, 1.4], budget=60_000, seed=seed, starts=48)
        tx = t_x(space, budget=120_000, seed=seed, starts=48)
        window = tx.hi >= 2.0 / math.sqrt(5.0) - 1e-6 and tx.lo <= 1.0 + 1e-9
        ok = ok and lip and lam_ok and rep.all_ok and window
        details[f"p{p}"] = {
            "lipschitz": lip,
            "rescale": lam_ok,
            "delta_phi": rep.all_ok,
            "t_x": (round(tx.lo, 4), round(tx.hi, 4)),
        }
    mk = minkowski_type_check(np.arange(0.0, 3.01, 0.5), np.arange(0.0, 3.01, 0.5), (1.0, 1.5, 2.0), (2.0, 3.0, 4.0))
    ok = ok and mk.all_ok
    details["minkowski"] = {"checked": mk.checked, "ok": mk.all_ok}
    for p in (1.5, 2.0, 3.0, 4.0):
        rep = chain_report(Lp(p, 2), p_outer=p, budget=EvalBudget(80_000), seed=seed)
        ok = ok and rep.all_checks_hold
        details[f"chain_p{p}"] = rep.all_checks_hold
    return _result("inequality chains", ok, details, t0)


def criterion_saturation(seed: int = 0) -> CriterionResult:
    """Greedy torus saturation over a 2-separated base lattice leaves no hole
    of radius 2: certified covering below 1.95."""
    t0 = time.time()
    ok = True
    details = {}
    base = Lattice(4.0 * np.eye(2))
    for p in (2.0, 1.0):
        res = saturate_packing(Lp(p, 2), base, samples=3000, seed=seed, grid_per_axis=64)
        ok = ok and res.r <= 1.95
        details[f"p{p}"] = {"r": round(res.r, 4), "added": res.added}
    return _result("torus saturation r < 2", ok, details, t0)


def criterion_gamma2_ladder(seed: int = 0) -> CriterionResult:
    """The diverging-exponent ladder prints the expected strictly increasing
    lower bounds 2/2^(1/M)."""
    t0 = time.time()
    ms = (2, 4, 8, 16)
    expected = (1.414214, 1.681793, 1.834008, 1.915207)
    rep = named_gamma("gamma2", ms=list(ms))
    got = [rep.entry(f"lower M={m}") for m in ms]
    ok = all(abs(g - 2.0 / 2.0 ** (1.0 / m)) <= 1e-6 for g, m in zip(got, ms))
    ok = ok and all(abs(g - e) <= 1e-6 for g, e in zip(got, expected))
    ok = ok and all(b > a for a, b in zip(got, got[1:])) and got[-1] < 2.0
    return _result("gamma = 2 ladder", ok, {"ladder": [round(g, 6) for g in got]}, t0)


ALL_CRITERIA = [
    ("1-octahedron", criterion_octahedron),
    ("2-planar", criterion_planar),
    ("3-cube-tiling", criterion_cube_tiling),
    ("4-hexagonal", criterion_hexagonal),
    ("5-subgroup", criterion_subgroup),
    ("6-moduli-golden", criterion_moduli_golden),
    ("7-inequalities", criterion_inequalities),
    ("8-saturation", criterion_saturation),
    ("9-gamma2-ladder", criterion_gamma2_ladder),
]

QUICK_CRITERIA = ["3-cube-tiling", "4-hexagonal", "6-moduli-golden", "9-gamma2-ladder"]


def run_suite(quick: bool = False, verbose: bool = False, seed: int = 0) -> list[CriterionResult]:
    results = []
    for key, fn in ALL_CRITERIA:
        if quick and key not in QUICK_CRITERIA:
            continue
        res = fn(seed=seed)
        results.append(res)
        if verbose:
            print(res.line(), flush=True)
    return results
