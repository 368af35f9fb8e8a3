"""Monte Carlo and cross-consistency checks.

Three kinds of evidence that the library's quantities hang together:

* `concentration_check` — sample words from a product measure and watch the
  fraction whose empirical window statistics fall within eps of the system
  grow with the word length (the large-deviations behaviour that makes the
  eps-relaxed capacity meaningful);
* `hasse_report` — assemble the computed quantities (product-measure bound,
  lift, dimension-interpolation bound, optimisation capacity, finite-side
  count rates) and assert every inequality that must hold between them;
* `cyclic_vs_noncyclic` — compare the two placement conventions and check
  the per-cell rate gap closes as the side grows.

Sampling uses a pinned generator (SplitMix64, below) so every reported
number is reproducible from its seed across platforms and languages.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from semicap.lattice_core import (
    Alphabet,
    PatternDistribution,
    Shape,
    SiteProductMeasure,
    ValidationError,
    Word,
    averaged_marginal,
    empirical_distribution,
    product_entropy,
)
from semicap.capacity import (
    CountRow,
    capacity_1d,
    elimeysch_lower_bound,
    internal_capacity_sequence,
)
from semicap.indentropy import PeriodicProductMeasure, axial_lift, hind_fixed_n
from semicap.scs_model import (
    ConstraintSet,
    axial_product,
    count_admissible,
    count_admissible_noncyclic,
    tv_distance_to_set,
)

__all__ = [
    "SplitMix64",
    "ConcentrationReport",
    "HasseQuantity",
    "HasseReport",
    "CyclicRow",
    "CyclicReport",
    "sample_word",
    "concentration_check",
    "hasse_report",
    "cyclic_vs_noncyclic",
]

_MASK64 = (1 << 64) - 1


class SplitMix64:
    """The SplitMix64 generator (Steele–Lea–Flood), pinned for
    reproducibility: state advances by the golden-ratio increment
    0x9E3779B97F4A7C15 and the output mixes with the Stafford "mix13"
    constants.  `next_float` takes the top 53 bits, so results are
    bit-identical on every platform.
    """

    GAMMA = 0x9E3779B97F4A7C15
    MIX1 = 0xBF58476D1CE4E5B9
    MIX2 = 0x94D049BB133111EB

    def __init__(self, seed: int):
        self.state = seed & _MASK64

    def next_u64(self) -> int:
        self.state = (self.state + self.GAMMA) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * self.MIX1) & _MASK64
        z = ((z ^ (z >> 27)) * self.MIX2) & _MASK64
        return z ^ (z >> 31)

    def next_float(self) -> float:
        """Uniform in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * 2.0 ** -53


def sample_word(mu, seed: int, side: int | None = None) -> Word:
    """Draw one word cell-by-cell from a product measure.

    `mu` is a SiteProductMeasure (side fixed by the measure) or a
    PeriodicProductMeasure together with `side` (a multiple of the period).
    Cells are filled in row-major order by inverse-CDF lookup on one
    SplitMix64 stream seeded with `seed` — equal seeds give bit-identical
    words everywhere.
    """
    if isinstance(mu, PeriodicProductMeasure):
        if side is None:
            raise ValidationError("side is required for a periodic measure")
        mu = mu.tile(side)
    if not isinstance(mu, SiteProductMeasure):
        raise ValidationError("expected a site-product or periodic measure")
    rng = SplitMix64(seed)
    cums = np.cumsum(mu.site_dists, axis=1)
    ncells = mu.side ** mu.dim
    cells = np.empty(ncells, dtype=np.int64)
    q = mu.alphabet.size
    for i in range(ncells):
        u = rng.next_float()
        c = int(np.searchsorted(cums[i], u, side="right"))
        cells[i] = min(c, q - 1)
    return Word(mu.alphabet, cells.reshape((mu.side,) * mu.dim))


# ---------------------------------------------------------------------------
# Concentration of empirical statistics
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ConcentrationReport:
    eps_list: tuple[float, ...]
    sides: tuple[int, ...]
    trials: int
    seed: int
    fractions: np.ndarray          # (len(eps_list), len(sides)) inside-eps fractions
    base_distance: float           # distance of the measure's averaged statistics
    base_feasible: bool            # base_distance < min eps
    decay_estimates: np.ndarray    # -ln(outside fraction)/side, same shape
    monotone_in_side: tuple[bool, ...]  # per eps

    def fraction(self, eps: float, side: int) -> float:
        return float(
            self.fractions[self.eps_list.index(eps), self.sides.index(side)]
        )


def concentration_check(mu, gamma: ConstraintSet,
                        eps_list: Sequence[float], sides: Sequence[int],
                        trials: int, seed: int) -> ConcentrationReport:
    """Fraction of sampled words within eps of the system, per (eps, side).

    For each side, `trials` words are drawn with per-trial seeds
    seed XOR (global trial index); the same words are reused for every eps
    (one distance computation each), which makes the fraction nondecreasing
    in eps by construction.  The base measure's own averaged statistics
    should sit strictly inside the smallest ball; if not, the report is
    flagged rather than refused.
    """
    eps_list = tuple(sorted(float(e) for e in eps_list))
    sides = tuple(sorted(int(n) for n in sides))
    if isinstance(mu, SiteProductMeasure):
        if mu.dim != 1:
            raise ValidationError("concentration_check samples 1-D words")
        mu = PeriodicProductMeasure(mu.alphabet, mu.side, mu.site_dists)
    if not isinstance(mu, PeriodicProductMeasure):
        raise ValidationError("expected a site-product or periodic measure")
    for n in sides:
        if n % mu.period or n < len(gamma.shape):
            raise ValidationError(f"side {n} incompatible with the measure")

    base = averaged_marginal(mu.tile(sides[0]), gamma.shape)
    base_distance = tv_distance_to_set(base, gamma)
    base_feasible = base_distance < min(eps_list)

    fractions = np.zeros((len(eps_list), len(sides)))
    for j, n in enumerate(sides):
        inside = np.zeros(len(eps_list))
        for t in range(trials):
            w = sample_word(mu, seed ^ (j * trials + t), n)
            dist = tv_distance_to_set(
                empirical_distribution(w, gamma.shape), gamma
            )
            for i, eps in enumerate(eps_list):
                if dist <= eps + 1e-12:
                    inside[i] += 1
        fractions[:, j] = inside / trials

    outside = np.clip(1.0 - fractions, 1.0 / (10 * trials), None)
    decay = -np.log(outside) / np.asarray(sides)[None, :]
    monotone = tuple(
        bool(np.all(np.diff(fractions[i]) >= -1e-12))
        for i in range(len(eps_list))
    )
    return ConcentrationReport(eps_list, sides, trials, seed, fractions,
                               base_distance, base_feasible, decay, monotone)


# ---------------------------------------------------------------------------
# Inequality-chain report
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HasseQuantity:
    name: str
    value: float
    provenance: str  # which module/operation computed it


@dataclass(frozen=True, eq=False)
class HasseReport:
    dim: int
    quantities: tuple[HasseQuantity, ...]
    count_rows: tuple[CountRow, ...]
    edges: tuple[tuple[str, bool, str], ...]  # (description, holds, detail)
    hind_measure: SiteProductMeasure | None = None  # the certified witness

    def value(self, name: str) -> float:
        for qt in self.quantities:
            if qt.name == name:
                return qt.value
        raise KeyError(name)


def hasse_report(gamma: ConstraintSet, dim: int, *,
                 hind_sides: Sequence[int] = (2, 3, 4),
                 count_sides: Sequence[int] = (4, 6, 8),
                 restarts: int = 10, seed: int = 0,
                 tol: float = 1e-6, threads: int = 1) -> HasseReport:
    """Assemble the bound chain for a 1-D system and its d-dimensional
    axial product, then assert every inequality that must hold:

    * product-measure bound <= 1-D capacity (product measures are a
      restriction of the optimisation);
    * the lift to d dimensions preserves the entropy rate to 1e-12;
    * the dimension-interpolation bound never exceeds the 1-D capacity.

    A violated edge raises ValidationError with a diagnostic — a report is
    only ever returned with all required edges holding.
    """
    cap = capacity_1d(gamma, restarts=restarts, seed=seed)
    best = None
    for n in hind_sides:
        if n < len(gamma.shape):
            continue
        r = hind_fixed_n(gamma, n, 0.0, restarts=restarts, seed=seed)
        if r.feasible and (best is None or r.value > best.value):
            best = r
    if best is None:
        raise ValidationError("no certified product measure on the given sides")
    lift = axial_lift(best.measure, dim)
    lift_rate = product_entropy(lift) / (best.side ** dim)
    lift_err = abs(lift_rate - best.value)
    dim_bound = elimeysch_lower_bound(cap.value, dim)
    rows = internal_capacity_sequence(gamma, count_sides, 0.0, threads=threads)

    quantities = (
        HasseQuantity("hind", best.value, "indentropy.hind_fixed_n"),
        HasseQuantity("hind_lift", lift_rate, "indentropy.axial_lift"),
        HasseQuantity("capacity_1d", cap.value, "capacity.capacity_1d"),
        HasseQuantity("dimension_bound", dim_bound.value,
                      "capacity.elimeysch_lower_bound"),
        HasseQuantity("best_lower_bound",
                      max(best.value, dim_bound.value),
                      "validation.hasse_report"),
    )
    edges = (
        ("hind <= capacity_1d", best.value <= cap.value + tol,
         f"{best.value:.12g} vs {cap.value:.12g}"),
        ("lift preserves rate", lift_err <= 1e-12, f"error {lift_err:.3g}"),
        ("dimension_bound <= capacity_1d",
         dim_bound.value <= cap.value + tol,
         f"{dim_bound.value:.12g} vs {cap.value:.12g}"),
    )
    bad = [(desc, detail) for desc, ok, detail in edges if not ok]
    if bad:
        msgs = "; ".join(f"{d} violated ({x})" for d, x in bad)
        raise ValidationError(f"inequality chain broken: {msgs}")
    return HasseReport(dim, quantities, tuple(rows), edges, best.measure)


# ---------------------------------------------------------------------------
# Cyclic vs non-cyclic counting
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CyclicRow:
    side: int
    cyclic: int
    noncyclic: int
    contained: bool   # cyclic <= noncyclic
    gap: float        # (log2 noncyclic - log2 cyclic) / cells


@dataclass(frozen=True, eq=False)
class CyclicReport:
    convention: str
    dim: int
    rows: tuple[CyclicRow, ...]
    gap_decreasing: bool


def cyclic_vs_noncyclic(gamma: ConstraintSet, sides: Sequence[int], *,
                        dim: int = 1, mode: str = "strict",
                        convention: str = "tile",
                        threads: int = 1) -> CyclicReport:
    """Count admissible words under wrapped and non-wrapped placements of a
    fully-constrained system and report the per-cell rate gap.

    Every cyclically admissible word is admissible non-cyclically (fewer
    windows are checked), so cyclic <= noncyclic for each side, and the
    normalised gap should shrink as the side grows — both facts are
    reported per row.
    """
    system = gamma if dim == 1 else axial_product(gamma, dim, mode)
    rows = []
    for n in sorted(int(n) for n in sides):
        cyc = count_admissible(n, system, 0.0, threads=threads)
        noncyc = count_admissible_noncyclic(n, system, convention=convention,
                                            threads=threads)
        cells = n ** dim
        if cyc > 0 and noncyc > 0:
            gap = (math.log2(noncyc) - math.log2(cyc)) / cells
        elif noncyc > 0:
            gap = math.inf
        else:
            gap = 0.0
        rows.append(CyclicRow(n, cyc, noncyc, cyc <= noncyc, gap))
    gaps = [r.gap for r in rows]
    decreasing = all(b <= a + 1e-12 for a, b in zip(gaps, gaps[1:]))
    return CyclicReport(convention, dim, tuple(rows), decreasing)
