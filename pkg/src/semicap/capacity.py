"""Capacity of one-dimensional semiconstrained systems.

The capacity of a 1-D system Γ over length-k windows equals

    sup { H(eta) - H(eta restricted to the first k-1 coordinates) }

over shift-invariant eta in Γ — the conditional entropy of the last window
symbol given the preceding ones, maximised over the polytope cut out by Γ,
the shift-invariance equations and the simplex.  The objective is concave
and smooth on the relative interior, so a Frank–Wolfe scheme whose linear
oracle is the in-house LP solver converges with a computable duality gap;
pairwise (away-step) updates with exact line search are used by default
because the classic 2/(t+2) step cannot certify tight gaps within a sane
iteration budget.

`transfer_matrix_capacity` provides the independent cross-check for fully
constrained systems: the log spectral radius of the forbidden-word de
Bruijn transfer matrix, via power iteration.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from semicap.lattice_core import (
    Alphabet,
    PatternDistribution,
    Shape,
    ValidationError,
)
from semicap.linprog import solve_lp
from semicap.scs_model import ConstraintSet, EmptySystemError, LinearConstraint

__all__ = [
    "ShiftInvariancePolytope",
    "CapacityResult",
    "DimensionBound",
    "CountRow",
    "shift_invariant_equations",
    "capacity_1d",
    "transfer_matrix_capacity",
    "internal_capacity_sequence",
    "elimeysch_lower_bound",
    "Polytope",
    "maximize_concave",
]

_LOG_FLOOR = 1e-18


# ---------------------------------------------------------------------------
# Polytopes and the Frank–Wolfe engine
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Polytope:
    """Feasible region {x >= 0, A_ub x <= b_ub, A_eq x = b_eq} for the solver."""

    a_ub: np.ndarray | None
    b_ub: np.ndarray | None
    a_eq: np.ndarray
    b_eq: np.ndarray

    def lp_max(self, g: np.ndarray) -> np.ndarray:
        """A vertex maximising the linear functional g."""
        res = solve_lp(-g, a_ub=self.a_ub, b_ub=self.b_ub,
                       a_eq=self.a_eq, b_eq=self.b_eq)
        if not res.ok:
            raise EmptySystemError("optimisation polytope is empty")
        return res.x

    def random_vertex(self, rng: np.random.Generator) -> np.ndarray:
        return self.lp_max(rng.normal(size=self.a_eq.shape[1]))

    def max_violation(self, x: np.ndarray) -> float:
        v = 0.0
        if self.a_ub is not None:
            v = max(v, float(np.max(self.a_ub @ x - self.b_ub, initial=0.0)))
        v = max(v, float(np.max(np.abs(self.a_eq @ x - self.b_eq), initial=0.0)))
        v = max(v, float(np.max(-x, initial=0.0)))
        return v


def _golden_max(fun: Callable[[float], float], lo: float, hi: float,
                iters: int = 80) -> float:
    """Argmax of a unimodal function on [lo, hi] by golden-section search."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = fun(c), fun(d)
    for _ in range(iters):
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = fun(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = fun(d)
    return 0.5 * (a + b)


@dataclass
class _FWState:
    x: np.ndarray
    value: float
    gap: float
    iterations: int
    converged: bool


def _fw_run(f, grad, poly: Polytope, x0: np.ndarray, max_iter: int,
            gap_tol: float, step_rule: str) -> _FWState:
    """One Frank–Wolfe run from x0; pairwise steps unless step_rule='classic'."""
    x = x0.copy()
    atoms = [x0.copy()]
    weights = [1.0]
    best_gap = math.inf
    it = 0
    for it in range(1, max_iter + 1):
        g = grad(x)
        s = poly.lp_max(g)
        gap = float(g @ (s - x))
        best_gap = min(best_gap, max(gap, 0.0))
        if gap <= gap_tol:
            return _FWState(x, f(x), max(gap, 0.0), it, True)
        if step_rule == "classic":
            gamma = 2.0 / (it + 2.0)
            x = x + gamma * (s - x)
            continue
        # pairwise step: move weight from the worst active atom toward s
        away_i = min(range(len(atoms)), key=lambda i: float(g @ atoms[i]))
        d = s - atoms[away_i]
        dn = float(np.abs(d).max())
        if dn < 1e-15:
            # toward and away atoms coincide; fall back to a plain FW step
            d = s - x
            gamma_max = 1.0
            if float(np.abs(d).max()) < 1e-15:
                return _FWState(x, f(x), max(gap, 0.0), it, gap <= gap_tol)
            gamma = _golden_max(lambda t: f(x + t * d), 0.0, gamma_max)
            x = x + gamma * d
            atoms, weights = [x.copy()], [1.0]
            continue
        gamma_max = weights[away_i]
        gamma = _golden_max(lambda t: f(x + t * d), 0.0, gamma_max)
        if gamma <= 0.0:
            gamma = 0.0
        x = x + gamma * d
        np.clip(x, 0.0, None, out=x)
        # bookkeeping: transfer weight
        key = None
        for i, a in enumerate(atoms):
            if np.array_equal(a, s):
                key = i
                break
        if key is None:
            atoms.append(s)
            weights.append(0.0)
            key = len(atoms) - 1
        weights[key] += gamma
        weights[away_i] -= gamma
        if weights[away_i] <= 1e-14:
            atoms.pop(away_i)
            weights.pop(away_i)
    g = grad(x)
    s = poly.lp_max(g)
    gap = max(float(g @ (s - x)), 0.0)
    return _FWState(x, f(x), gap, it, gap <= gap_tol)


def maximize_concave(f, grad, poly: Polytope, starts: Sequence[np.ndarray], *,
                     max_iter: int = 50000, gap_tol: float = 1e-6,
                     step_rule: str = "pairwise") -> _FWState:
    """Best Frank–Wolfe result over the given start points.

    The iteration budget is split evenly across starts; the returned state
    carries the total iteration count and the winner's duality gap.
    """
    if not starts:
        raise ValidationError("need at least one start point")
    per = max(1, max_iter // len(starts))
    best: _FWState | None = None
    total = 0
    for x0 in starts:
        st = _fw_run(f, grad, poly, x0, per, gap_tol, step_rule)
        total += st.iterations
        if best is None or st.value > best.value:
            best = st
    best.iterations = total
    return best


# ---------------------------------------------------------------------------
# Shift invariance
# ---------------------------------------------------------------------------

def shift_invariant_equations(k: int, alphabet: Alphabet) -> list[np.ndarray]:
    """Equality rows (right-hand side 0) characterising shift-invariant
    distributions on length-k windows.

    For every middle word m of length k-1, the mass of patterns with suffix
    m equals the mass of patterns with prefix m; k = 1 needs no equations.
    """
    if k < 1:
        raise ValidationError("window length must be >= 1")
    q = alphabet.size
    if k == 1:
        return []
    rows = []
    qk1 = q ** (k - 1)
    for j in range(qk1):  # j indexes the middle word
        row = np.zeros(q ** k)
        for a in range(q):
            row[a * qk1 + j] += 1.0  # a . m  (m as suffix)
            row[j * q + a] -= 1.0    # m . a  (m as prefix)
        rows.append(row)
    return rows


@dataclass(frozen=True, eq=False)
class ShiftInvariancePolytope:
    """Shift-invariant distributions on Σ^k, as equality constraints."""

    alphabet: Alphabet
    k: int
    equations: tuple[np.ndarray, ...]

    @classmethod
    def build(cls, k: int, alphabet: Alphabet) -> "ShiftInvariancePolytope":
        return cls(alphabet, k, tuple(shift_invariant_equations(k, alphabet)))

    def contains(self, dist: PatternDistribution, tol: float = 1e-8) -> bool:
        probs = dist.float_probs()
        return all(abs(float(r @ probs)) <= tol for r in self.equations)


# ---------------------------------------------------------------------------
# Capacity
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class CapacityResult:
    value: float
    optimizer: PatternDistribution
    iterations: int
    duality_gap: float
    converged: bool


def _require_window(gamma: ConstraintSet) -> int:
    shape = gamma.shape
    if shape.dim != 1 or shape != Shape.segment(len(shape)):
        raise ValidationError("capacity_1d needs a 1-D system over a full window")
    return len(shape)


def _capacity_polytope(gamma: ConstraintSet) -> Polytope:
    k = _require_window(gamma)
    q = gamma.alphabet.size
    m = q ** k
    a_ub, b_ub = [], []
    a_eq, b_eq = [np.ones(m)], [1.0]
    for row in shift_invariant_equations(k, gamma.alphabet):
        a_eq.append(row)
        b_eq.append(0.0)
    for con in gamma.constraints:
        if con.sense == "<=":
            a_ub.append(con.coeffs)
            b_ub.append(con.bound)
        else:
            a_eq.append(con.coeffs)
            b_eq.append(con.bound)
    return Polytope(
        np.array(a_ub) if a_ub else None,
        np.array(b_ub) if a_ub else None,
        np.array(a_eq),
        np.array(b_eq),
    )


def _conditional_entropy_objective(q: int, k: int):
    """f(eta) = H(eta) - H(prefix marginal), with its gradient."""

    def f(x: np.ndarray) -> float:
        xp = np.clip(x, 0.0, None)
        h = -np.sum(xp[xp > 0] * np.log2(xp[xp > 0]))
        if k == 1:
            return float(h)
        pref = xp.reshape(-1, q).sum(axis=1)
        hp = -np.sum(pref[pref > 0] * np.log2(pref[pref > 0]))
        return float(h - hp)

    def grad(x: np.ndarray) -> np.ndarray:
        xp = np.clip(x, _LOG_FLOOR, None)
        if k == 1:
            return -np.log2(xp) - 1.0 / math.log(2.0)
        pref = np.clip(x.reshape(-1, q).sum(axis=1), _LOG_FLOOR, None)
        return -np.log2(xp) + np.log2(np.repeat(pref, q))

    return f, grad


def capacity_1d(gamma: ConstraintSet, *, restarts: int = 5,
                max_iter: int = 50000, gap_tol: float = 1e-6, seed: int = 0,
                step_rule: str = "pairwise") -> CapacityResult:
    """Capacity in bits of a 1-D semiconstrained system.

    Maximises the conditional window entropy over Γ intersected with the
    shift-invariance polytope, restarting Frank–Wolfe from `restarts`
    random feasible vertices (plus one deterministic feasible point) and
    reporting the best run with its duality gap.
    """
    k = _require_window(gamma)
    q = gamma.alphabet.size
    poly = _capacity_polytope(gamma)
    f, grad = _conditional_entropy_objective(q, k)
    rng = np.random.default_rng(seed)
    starts = [poly.lp_max(np.zeros(q ** k))]
    for _ in range(restarts):
        starts.append(poly.random_vertex(rng))
    st = maximize_concave(f, grad, poly, starts, max_iter=max_iter,
                          gap_tol=gap_tol, step_rule=step_rule)
    probs = np.clip(st.x, 0.0, None)
    probs /= probs.sum()
    opt = PatternDistribution(gamma.alphabet, gamma.shape, probs)
    value = min(max(st.value, 0.0), math.log2(q))
    return CapacityResult(value, opt, st.iterations, st.gap, st.converged)


# ---------------------------------------------------------------------------
# Transfer-matrix cross-check
# ---------------------------------------------------------------------------

def transfer_matrix_capacity(forbidden: Iterable[Sequence[int]],
                             alphabet: Alphabet | None = None, *,
                             rel_tol: float = 1e-10,
                             max_iter: int = 1_000_000) -> float:
    """log2 growth rate of the words avoiding the given equal-length words.

    Builds the de Bruijn graph on (k-1)-grams with forbidden transitions
    removed and returns log2 of its spectral radius, estimated by power
    iteration (on A + I, which also handles periodic graphs) to the given
    relative tolerance.
    """
    alphabet = alphabet or Alphabet.binary()
    q = alphabet.size
    pats = [tuple(int(a) for a in p) for p in forbidden]
    if not pats:
        return math.log2(q)  # nothing forbidden: the full shift
    k = len(pats[0])
    if any(len(p) != k for p in pats) or k < 1:
        raise ValidationError("forbidden words must share one positive length")
    bad = set()
    for p in pats:
        idx = 0
        for a in p:
            if not 0 <= a < q:
                raise ValidationError("forbidden word symbol out of range")
            idx = idx * q + a
        bad.add(idx)

    nstates = q ** (k - 1)
    a = np.zeros((nstates, nstates))
    for u in range(nstates):
        for c in range(q):
            wordidx = u * q + c          # the k-word  u . c
            v = wordidx % (q ** (k - 1)) if k > 1 else 0
            if wordidx not in bad:
                a[u, v] += 1.0

    # Power iteration on A + I.  Convergence is judged by the eigenpair
    # residual ||(A+I)v - lam*v||: successive Rayleigh-quotient differences
    # can dip through zero spuriously when the subdominant eigenvalues form
    # a complex pair, which this graph family routinely produces.
    v = np.ones(nstates) / math.sqrt(nstates)
    lam = float("nan")
    for _ in range(max_iter):
        w = a @ v + v
        nw = float(np.linalg.norm(w))
        if nw < 1e-300:
            raise ValidationError("empty language: no admissible bi-infinite words")
        lam = float(v @ w)  # Rayleigh quotient of A + I (v has unit norm)
        residual = float(np.linalg.norm(w - lam * v))
        v = w / nw
        if residual <= rel_tol * max(1.0, nw):
            break
    rho = lam - 1.0
    if rho <= 1e-12:
        raise ValidationError("empty language: spectral radius is zero")
    return math.log2(rho)


# ---------------------------------------------------------------------------
# Counting-based capacity sequences and the dimension bound
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CountRow:
    side: int
    count: int
    rate: float  # log2(count) / side^d;  -inf when the count is zero


def internal_capacity_sequence(system, sides: Iterable[int], eps: float = 0.0,
                               *, threads: int = 1) -> list[CountRow]:
    """Admissible-word counts and normalised log-counts over a range of sides."""
    from semicap.scs_model import count_admissible

    if isinstance(system, ConstraintSet):
        d = system.shape.dim
    else:
        d = system.dim
    rows = []
    for n in sides:
        c = count_admissible(n, system, eps, threads=threads)
        rate = math.log2(c) / (n ** d) if c > 0 else -math.inf
        rows.append(CountRow(n, c, rate))
    return rows


@dataclass(frozen=True)
class DimensionBound:
    value: float
    dim: int
    degenerate: bool  # True when the bound is vacuous (below zero)


def elimeysch_lower_bound(cap1: float, dim: int) -> DimensionBound:
    """Prior-work lower bound 1 + d*(cap1 - 1) on the d-dimensional axial
    capacity of a binary system with 1-D capacity cap1; degenerates (goes
    negative) once d exceeds 1/(1 - cap1)."""
    if dim < 1:
        raise ValidationError("dimension must be >= 1")
    value = 1.0 + dim * (cap1 - 1.0)
    return DimensionBound(value, dim, value < 0.0)
