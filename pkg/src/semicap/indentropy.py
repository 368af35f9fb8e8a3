"""Product-measure entropy lower bounds for semiconstrained systems.

The best entropy rate of a site-product measure whose placement-averaged
window statistics satisfy a 1-D system transfers unchanged to every
dimension (see `axial_lift`), so maximising

    (1/n) * sum_v H(p_v)   subject to   averaged_marginal(mu) within eps of Γ

over per-site distributions p_0..p_{n-1} yields dimension-independent lower
bounds on axial capacities.  The problem is nonconvex (the constraint is
multilinear in the sites), but each site enters affinely, which the
optimiser exploits:

* for a single mass-cap system the constraint carries one KKT multiplier
  shared by all sites; sites are updated in closed form (a Gibbs/softmax
  step) at fixed multiplier, and the multiplier is found by bisection —
  per-site hard-constraint sweeps would instead stall on a continuum of
  non-stationary fixed points (any split of the budget across sites is
  axis-wise optimal), which is why the multiplier is global;
* zero-budget and multi-constraint systems fall back to per-site entropy
  maximisation over the feasible slice (bisection on the per-site
  multiplier, or a Frank–Wolfe step for several simultaneous constraints);
* everything is repeated from random restarts plus i.i.d. and period-2
  warm starts, and the winner is certified feasible by an LP distance check.

`hind_com_fixed_n` is the combinatorial counterpart: over words whose cells
hold nonempty symbol subsets, maximise the per-cell choice count subject to
every filling avoiding the forbidden patterns.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from semicap.lattice_core import (
    Alphabet,
    PatternDistribution,
    Shape,
    SiteProductMeasure,
    SizeGuardError,
    ValidationError,
    Word,
    averaged_marginal,
    pattern_from_index,
    pattern_space_size,
    product_entropy,
)
from semicap.capacity import Polytope, maximize_concave
from semicap.scs_model import (
    ConstraintSet,
    _single_set_cap,
    find_admissible_word,
    tv_distance_to_set,
)

__all__ = [
    "PeriodicProductMeasure",
    "HindResult",
    "CurvePoint",
    "MultiChoiceWord",
    "HindComResult",
    "IndependenceReport",
    "hind_fixed_n",
    "curve_optimum_01p",
    "axial_lift",
    "fillings_count",
    "hind_com_fixed_n",
    "hind_bound_report",
]

_CERT_TOL = 1e-8


def _h2(x: float) -> float:
    if x <= 0.0 or x >= 1.0:
        return 0.0
    return -x * math.log2(x) - (1.0 - x) * math.log2(1.0 - x)


# ---------------------------------------------------------------------------
# Periodic product measures
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class PeriodicProductMeasure:
    """A 1-D product measure repeating with a fixed period."""

    alphabet: Alphabet
    period: int
    site_dists: np.ndarray  # (period, q)

    def __post_init__(self) -> None:
        rows = np.asarray(self.site_dists, dtype=np.float64)
        if rows.shape != (self.period, self.alphabet.size):
            raise ValidationError("site_dists must be (period, alphabet size)")
        object.__setattr__(self, "site_dists", rows)

    @classmethod
    def iid(cls, alphabet: Alphabet, dist: Sequence[float]) -> "PeriodicProductMeasure":
        return cls(alphabet, 1, np.asarray(dist, dtype=np.float64)[None, :])

    def entropy_rate(self) -> float:
        rates = []
        for row in self.site_dists:
            pos = row[row > 0]
            rates.append(float(-(pos * np.log2(pos)).sum()))
        return float(np.mean(rates))

    def tile(self, side: int) -> SiteProductMeasure:
        """Extend to the length-`side` cycle (side must be a multiple of the
        period so the cyclic extension is well defined)."""
        if side % self.period:
            raise ValidationError("side must be divisible by the period")
        rows = np.vstack([self.site_dists[i % self.period] for i in range(side)])
        return SiteProductMeasure(self.alphabet, 1, side, rows)


# ---------------------------------------------------------------------------
# Fixed-n product-measure optimisation
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class HindResult:
    value: float                       # (1/n) * total entropy, bits per cell
    measure: SiteProductMeasure | None
    side: int
    eps: float
    feasible: bool                     # LP-certified within eps (+ tolerance)
    distance: float                    # LP distance of the averaged marginal
    restarts: int


class _WindowModel:
    """Accounting for the averaged window statistics of a 1-D product measure."""

    def __init__(self, gamma: ConstraintSet, side: int):
        if gamma.shape.dim != 1 or gamma.shape != Shape.segment(len(gamma.shape)):
            raise ValidationError("hind_fixed_n needs a 1-D full-window system")
        self.k = len(gamma.shape)
        if side < self.k:
            raise ValidationError("side must be at least the window length")
        self.side = side
        self.gamma = gamma
        self.q = gamma.alphabet.size
        self.patterns = [
            pattern_from_index(i, self.q, self.k) for i in range(gamma.npatterns)
        ]

    def averaged(self, rows: np.ndarray) -> np.ndarray:
        """Averaged window distribution of the product measure given per-site rows."""
        n, k, q = self.side, self.k, self.q
        out = np.zeros(self.gamma.npatterns)
        for u in range(n):
            block = np.ones(1)
            for j in range(k):
                block = np.multiply.outer(block, rows[(u + j) % n]).reshape(-1)
            out += block
        return out / n

    def site_coeffs(self, rows: np.ndarray, v: int, coeffs: np.ndarray):
        """Write the constraint functional c . averaged(mu) as
        const + lin . p_v;  returns (lin over symbols, const)."""
        n, k, q = self.side, self.k, self.q
        lin = np.zeros(q)
        const = 0.0
        for u in range(n):
            window = [(u + j) % n for j in range(k)]
            try:
                slot = window.index(v)
            except ValueError:
                slot = -1
            for pi, a in enumerate(self.patterns):
                c = coeffs[pi]
                if not c:
                    continue
                prod = 1.0
                for j, site in enumerate(window):
                    if j == slot:
                        continue
                    prod *= rows[site][a[j]]
                if slot < 0:
                    const += c * prod
                else:
                    lin[a[slot]] += c * prod
        return lin / n, const / n


def _entropy_max_capped(lin: np.ndarray, bound: float) -> np.ndarray:
    """Maximise H(p) over the simplex subject to lin . p <= bound, for
    nonnegative lin, by bisection on the KKT multiplier."""
    q = len(lin)
    uniform = np.full(q, 1.0 / q)
    if float(lin @ uniform) <= bound + 1e-15:
        return uniform
    lmin = float(lin.min())
    if bound < lmin - 1e-15:
        raise ValidationError("infeasible site subproblem")
    if bound <= lmin + 1e-15:
        # only the cheapest symbols are allowed
        support = lin <= lmin + 1e-12
        p = np.where(support, 1.0, 0.0)
        return p / p.sum()

    shifted = lin - lmin

    def dist_for(lam: float) -> np.ndarray:
        w = np.exp2(-lam * shifted)
        return w / w.sum()

    lo, hi = 0.0, 1.0
    while float(lin @ dist_for(hi)) > bound:
        hi *= 2.0
        if hi > 1e9:
            break
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if float(lin @ dist_for(mid)) > bound:
            lo = mid
        else:
            hi = mid
    return dist_for(hi)


def _entropy_max_slice(rows_lin: list[np.ndarray], bounds: list[float],
                       current: np.ndarray) -> np.ndarray:
    """Entropy maximisation over {p in simplex : lin_r . p <= bound_r}."""
    active = [(l, b) for l, b in zip(rows_lin, bounds)]
    q = len(current)
    uniform = np.full(q, 1.0 / q)
    if all(float(l @ uniform) <= b + 1e-15 for l, b in active):
        return uniform
    if len(active) == 1 and np.all(active[0][0] >= 0):
        return _entropy_max_capped(active[0][0], active[0][1])
    # general slice: Frank–Wolfe with the LP oracle
    poly = Polytope(
        np.array([l for l, _ in active]),
        np.array([b for _, b in active]),
        np.ones((1, q)),
        np.array([1.0]),
    )

    def f(p):
        pp = p[p > 1e-300]
        return float(-(pp * np.log2(pp)).sum())

    def grad(p):
        return -np.log2(np.clip(p, 1e-18, None)) - 1.0 / math.log(2.0)

    st = maximize_concave(f, grad, poly, [current], max_iter=2000, gap_tol=1e-10)
    return np.clip(st.x, 0.0, None) / np.clip(st.x, 0.0, None).sum()


def _sweep_hard(model: _WindowModel, rows: np.ndarray, bounds_eff: list[float],
                coeff_list: list[np.ndarray], sweeps: int = 400) -> np.ndarray:
    """Cyclic per-site entropy maximisation within the feasible slice."""
    n = model.side
    prev = -math.inf
    for _ in range(sweeps):
        for v in range(n):
            lins, bnds = [], []
            ok = True
            for coeffs, b in zip(coeff_list, bounds_eff):
                lin, const = model.site_coeffs(rows, v, coeffs)
                if np.any(lin < -1e-12):
                    ok = False
                    break
                lins.append(np.clip(lin, 0.0, None))
                bnds.append(b - const)
            if not ok:
                continue
            try:
                rows[v] = _entropy_max_slice(lins, bnds, rows[v].copy())
            except ValidationError:
                continue
        val = sum(_h2_row(rows[v]) for v in range(n))
        if val <= prev + 1e-13:
            break
        prev = val
    return rows


def _h2_row(row: np.ndarray) -> float:
    pos = row[row > 0]
    return float(-(pos * np.log2(pos)).sum())


def _lagrangian_fixed_point(model: _WindowModel, rows: np.ndarray,
                            coeffs: np.ndarray, lam: float,
                            sweeps: int = 300) -> np.ndarray:
    """Cyclic softmax site updates at a fixed shared multiplier."""
    n = model.side
    for _ in range(sweeps):
        delta = 0.0
        for v in range(n):
            lin, _ = model.site_coeffs(rows, v, coeffs)
            w = np.exp2(-lam * (lin - lin.min()))
            new = w / w.sum()
            delta = max(delta, float(np.abs(new - rows[v]).max()))
            rows[v] = new
        if delta < 1e-13:
            break
    return rows


def _optimize_single_cap(model: _WindowModel, start: np.ndarray,
                         coeffs: np.ndarray, bound_eff: float) -> np.ndarray:
    """Shared-multiplier ascent for a single mass-cap constraint."""
    rows = start.copy()
    value_at = lambda r: float(coeffs @ model.averaged(r))
    rows0 = _lagrangian_fixed_point(model, rows.copy(), coeffs, 0.0)
    if value_at(rows0) <= bound_eff + 1e-15:
        return rows0  # the cap is slack at the unconstrained optimum
    lo, hi = 0.0, 1.0
    rows_hi = _lagrangian_fixed_point(model, rows.copy(), coeffs, hi)
    guard = 0
    while value_at(rows_hi) > bound_eff and guard < 60:
        lo, hi = hi, hi * 2.0
        rows_hi = _lagrangian_fixed_point(model, rows_hi, coeffs, hi)
        guard += 1
    best_feasible = rows_hi.copy()
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        rows_mid = _lagrangian_fixed_point(model, best_feasible.copy(), coeffs, mid)
        if value_at(rows_mid) > bound_eff:
            lo = mid
        else:
            hi = mid
            best_feasible = rows_mid
    return best_feasible


def _mix_until_feasible(model: _WindowModel, anchor: np.ndarray,
                        target: np.ndarray, bounds_check, mask=None) -> np.ndarray:
    """Move `anchor` toward `target` (sitewise convex mix, optionally on a
    subset of sites), backing the mixing weight off until feasible."""
    t = 1.0
    for _ in range(40):
        rows = anchor.copy()
        sel = range(model.side) if mask is None else mask
        for v in sel:
            rows[v] = (1.0 - t) * anchor[v] + t * target[v]
        if bounds_check(rows):
            return rows
        t *= 0.5
    return anchor.copy()


def hind_fixed_n(gamma: ConstraintSet, side: int, eps: float = 0.0, *,
                 restarts: int = 20, seed: int = 0) -> HindResult:
    """Best entropy rate of a length-`side` cyclic product measure whose
    averaged window distribution lies within TV distance eps of Γ.

    Returns the best local optimum over `restarts` random starts plus the
    i.i.d. and period-2 warm starts.  The result's `feasible` flag is an LP
    certificate (distance of the averaged marginal re-checked exactly);
    only a certified result is a valid lower bound.
    """
    model = _WindowModel(gamma, side)
    n, q = side, model.q
    rng = np.random.default_rng(seed)
    cap = _single_set_cap(gamma)
    coeff_list = [c.coeffs for c in gamma.constraints]
    bounds_eff = []
    for c in gamma.constraints:
        b = c.bound
        if c.sense == "<=":
            bounds_eff.append(b + eps)
        else:
            # equality row: inside the eps-ball only the zero-bound case is
            # supported by the sweep (treated as a relaxed cap)
            if b != 0.0:
                raise ValidationError(
                    "hind_fixed_n supports <= and zero-equality constraints"
                )
            bounds_eff.append(eps)

    def feasible_rows(rows) -> bool:
        avg = model.averaged(rows)
        if cap is not None:
            ind, b = cap
            return float(ind @ avg) <= b + eps + 1e-12
        mu = PatternDistribution(gamma.alphabet, gamma.shape, avg)
        return tv_distance_to_set(mu, gamma) <= eps + 1e-12

    # deterministic anchor: point mass on an admissible word
    w0 = find_admissible_word(side, gamma, eps)
    anchor = None
    if w0 is not None:
        anchor = np.zeros((n, q))
        anchor[np.arange(n), w0.cells] = 1.0

    uniform = np.full((n, q), 1.0 / q)
    starts: list[np.ndarray] = []
    if feasible_rows(uniform):
        starts.append(uniform.copy())
    if anchor is not None:
        starts.append(_mix_until_feasible(model, anchor, uniform, feasible_rows))
        starts.append(
            _mix_until_feasible(model, anchor, uniform, feasible_rows,
                                mask=range(0, n, 2))
        )
        for _ in range(restarts):
            rand = rng.dirichlet(np.ones(q), size=n)
            starts.append(_mix_until_feasible(model, anchor, rand, feasible_rows))
    else:
        for _ in range(restarts):
            rand = rng.dirichlet(np.ones(q), size=n)
            if feasible_rows(rand):
                starts.append(rand)

    if not starts:
        return HindResult(-math.inf, None, side, eps, False, math.inf, restarts)

    single_cap_positive = cap is not None and (cap[1] + eps) > 1e-12
    best_rows, best_val = None, -math.inf
    for start in starts:
        if single_cap_positive:
            rows = _optimize_single_cap(model, start, cap[0], cap[1] + eps)
            rows = _sweep_hard(model, rows, [cap[1] + eps], [cap[0]])
        else:
            rows = _sweep_hard(model, start.copy(), bounds_eff, coeff_list)
        if not feasible_rows(rows):
            continue
        val = sum(_h2_row(r) for r in rows) / n
        if val > best_val:
            best_val, best_rows = val, rows

    if best_rows is None:
        return HindResult(-math.inf, None, side, eps, False, math.inf, restarts)

    measure = SiteProductMeasure(gamma.alphabet, 1, side, best_rows)
    avg = averaged_marginal(measure, gamma.shape)
    distance = tv_distance_to_set(avg, gamma)
    feasible = distance <= eps + _CERT_TOL
    return HindResult(best_val, measure, side, eps, feasible, distance,
                      len(starts))


# ---------------------------------------------------------------------------
# The closed curve for the window-2 cap family
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CurvePoint:
    p: float
    value: float  # (H2(x) + H2(y)) / 2
    x: float
    y: float      # x >= y


def curve_optimum_01p(p: float) -> CurvePoint:
    """Maximise (H2(x) + H2(y))/2 over x*y <= p on the period-2 product
    measures of the window-2 all-ones cap family.

    For p >= 1/4 the unconstrained optimum x = y = 1/2 is feasible; below
    that the optimum sits on x*y = p and is found by golden-section search
    along the curve, parameterised by the larger coordinate (the symmetric
    point x = y = sqrt(p) stops being optimal for small p, where the search
    picks up the asymmetric branch).
    """
    if p < 0 or p > 1:
        raise ValidationError("p must lie in [0, 1]")
    if p >= 0.25:
        return CurvePoint(p, 1.0, 0.5, 0.5)
    if p == 0.0:
        return CurvePoint(p, 0.5, 0.5, 0.0)

    lo, hi = math.sqrt(p), 1.0
    invphi = (math.sqrt(5.0) - 1.0) / 2.0

    def g(x: float) -> float:
        return 0.5 * (_h2(x) + _h2(p / x))

    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = g(c), g(d)
    for _ in range(200):
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = g(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = g(d)
    x = 0.5 * (a + b)
    y = p / x
    if y > x:
        x, y = y, x
    return CurvePoint(p, g(x), x, y)


# ---------------------------------------------------------------------------
# Lifting 1-D product measures to d dimensions
# ---------------------------------------------------------------------------

def axial_lift(mu: SiteProductMeasure, dim: int) -> SiteProductMeasure:
    """Lift a 1-D cyclic product measure to d dimensions along diagonals:
    position v receives the 1-D site distribution of (sum of coordinates)
    mod side.  Every residue class has the same number of cells, so the
    entropy rate per cell is preserved exactly.
    """
    if mu.dim != 1:
        raise ValidationError("axial_lift expects a 1-D measure")
    if dim < 1:
        raise ValidationError("dimension must be >= 1")
    n = mu.side
    ncells = n ** dim
    rows = np.empty((ncells, mu.alphabet.size))
    for i, v in enumerate(itertools.product(range(n), repeat=dim)):
        rows[i] = mu.site_dists[sum(v) % n]
    return SiteProductMeasure(mu.alphabet, dim, n, rows)


# ---------------------------------------------------------------------------
# Multi-choice words
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class MultiChoiceWord:
    """A cyclic array whose cells hold nonempty symbol subsets (bitmasks)."""

    alphabet: Alphabet
    cells: np.ndarray  # bitmask per cell, 1 .. 2^q - 1

    def __post_init__(self) -> None:
        cells = np.asarray(self.cells, dtype=np.int64)
        full = (1 << self.alphabet.size) - 1
        if cells.size and (cells.min() < 1 or cells.max() > full):
            raise ValidationError("cells must be nonempty symbol subsets")
        object.__setattr__(self, "cells", cells)

    @property
    def side(self) -> int:
        return self.cells.shape[0]

    @property
    def dim(self) -> int:
        return self.cells.ndim

    def sets(self) -> list[tuple[int, ...]]:
        q = self.alphabet.size
        return [
            tuple(c for c in range(q) if m & (1 << c))
            for m in self.cells.reshape(-1)
        ]


def fillings_count(word: MultiChoiceWord) -> int:
    """Number of plain words obtained by picking one symbol per cell."""
    total = 1
    for m in word.cells.reshape(-1):
        total *= int(m).bit_count()
    return total


@dataclass(frozen=True, eq=False)
class HindComResult:
    value: float           # log2(best fillings) / cells
    fillings: int
    witness: MultiChoiceWord | None
    side: int


def _forbidden_of(gamma: ConstraintSet) -> list[tuple[int, ...]]:
    pats = []
    for c in gamma.constraints:
        # a zero-bound 0/1 row forbids each of its patterns outright
        if c.bound != 0.0 or not np.all((c.coeffs == 0.0) | (c.coeffs == 1.0)):
            raise ValidationError("need a fully-constrained system")
        for idx in np.nonzero(c.coeffs)[0]:
            pats.append(pattern_from_index(int(idx), gamma.alphabet.size,
                                           len(gamma.shape)))
    return pats


def hind_com_fixed_n(gamma: ConstraintSet, side: int) -> HindComResult:
    """Best multi-choice word of the given cyclic side: maximise the number
    of fillings subject to every filling avoiding every forbidden pattern at
    every cyclic placement.

    The condition is checked locally: a placement is safe iff no choice of
    one symbol per window cell produces a forbidden pattern.  Branch and
    bound over cells in row-major order (subsets in bitmask order), keeping
    the first witness attaining the maximum.
    """
    forbidden = _forbidden_of(gamma)
    shape = gamma.shape
    d = shape.dim
    q = gamma.alphabet.size
    ncells = side ** d
    nmasks = (1 << q) - 1
    if ncells * math.log2(nmasks) > 30:
        raise SizeGuardError("multi-choice search space too large")

    # placements and their flat cell indices, grouped by completing cell
    placements = []
    for v in itertools.product(range(side), repeat=d):
        cells = []
        for s in shape.points:
            w = tuple((c + dc) % side for c, dc in zip(v, s))
            flat = 0
            for c in w:
                flat = flat * side + c
            cells.append(flat)
        placements.append(cells)
    by_cell: list[list[list[int]]] = [[] for _ in range(ncells)]
    for cells in placements:
        by_cell[max(cells)].append(cells)

    masks = np.zeros(ncells, dtype=np.int64)
    best = {"count": 0, "cells": None}
    log_q = math.log2(q)

    def window_safe(cells: list[int]) -> bool:
        for pat in forbidden:
            if all(masks[cell] & (1 << pat[j]) for j, cell in enumerate(cells)):
                return False
        return True

    def dfs(t: int, prod: int) -> None:
        if t == ncells:
            if prod > best["count"]:
                best["count"] = prod
                best["cells"] = masks.copy()
            return
        remaining = ncells - t - 1
        for m in range(1, nmasks + 1):
            size = int(m).bit_count()
            bound = prod * size * (q ** remaining)
            if bound <= best["count"]:
                continue
            masks[t] = m
            if all(window_safe(cells) for cells in by_cell[t]):
                dfs(t + 1, prod * size)
            masks[t] = 0

    dfs(0, 1)
    if best["cells"] is None:
        return HindComResult(-math.inf, 0, None, side)
    witness = MultiChoiceWord(gamma.alphabet,
                              best["cells"].reshape((side,) * d))
    value = math.log2(best["count"]) / ncells if best["count"] else -math.inf
    return HindComResult(value, best["count"], witness, side)


# ---------------------------------------------------------------------------
# Report assembly
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class IndependenceReport:
    dim: int
    eps_list: tuple[float, ...]
    sides: tuple[int, ...]
    rows: tuple[HindResult, ...]       # one per (eps, side)
    best: HindResult                   # best certified result at the smallest eps
    lift: SiteProductMeasure | None
    lift_rate_error: float
    curve_reference: float | None      # closed-form check for window-2 caps
    lower_bound: float                 # certified d-dimensional lower bound


def hind_bound_report(gamma: ConstraintSet, dim: int,
                      eps_list: Sequence[float] = (0.0, 1e-3, 1e-2),
                      sides: Sequence[int] = (2, 3, 4, 5, 6), *,
                      restarts: int = 20, seed: int = 0) -> IndependenceReport:
    """Run the fixed-n optimiser over a grid of (eps, side), lift the best
    certified measure to `dim` dimensions, and assemble the lower bound."""
    eps_list = tuple(float(e) for e in eps_list)
    sides = tuple(n for n in (int(n) for n in sides) if n >= len(gamma.shape))
    if not sides:
        raise ValidationError("every requested side is shorter than the window")
    rows = []
    for eps in eps_list:
        for n in sides:
            rows.append(hind_fixed_n(gamma, n, eps, restarts=restarts, seed=seed))
    certified = [r for r in rows if r.eps == min(eps_list) and r.feasible]
    if not certified:
        raise ValidationError("no certified product measure found")
    best = max(certified, key=lambda r: r.value)
    lift = axial_lift(best.measure, dim) if best.measure is not None else None
    err = 0.0
    if lift is not None:
        rate_d = product_entropy(lift) / (best.side ** dim)
        err = abs(rate_d - best.value)
    curve_ref = None
    cap = _single_set_cap(gamma)
    if cap is not None and len(gamma.shape) == 2 and gamma.alphabet.size == 2:
        ind, b = cap
        if ind[3] == 1.0 and ind[:3].sum() == 0.0:
            curve_ref = curve_optimum_01p(b).value
    return IndependenceReport(
        dim, eps_list, sides, tuple(rows), best, lift, err, curve_ref,
        best.value,
    )
