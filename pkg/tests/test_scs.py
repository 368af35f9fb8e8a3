"""Constraint sets, distances, admissibility, and exact counting."""
import itertools

import numpy as np
import pytest

from semicap.lattice_core import (
    Alphabet,
    PatternDistribution,
    Shape,
    SizeGuardError,
    ValidationError,
    Word,
)
from semicap.scs_model import (
    AxialSystem,
    ConstraintSet,
    EmptySystemError,
    LinearConstraint,
    axial_product,
    count_admissible,
    count_admissible_noncyclic,
    count_exhaustive,
    find_admissible_word,
    fully_constrained,
    is_admissible,
    rll_constraint,
    tv_distance_to_set,
)

BIN = Alphabet.binary()

# cyclic/non-cyclic counts for the no-adjacent-ones system follow the
# classic integer sequences
LUCAS = {2: 3, 3: 4, 4: 7, 5: 11, 6: 18, 7: 29, 8: 47, 9: 76, 10: 123,
         11: 199, 12: 322, 13: 521, 14: 843}
FIBONACCI_N_PLUS_2 = {2: 3, 3: 5, 4: 8, 5: 13, 6: 21, 7: 34, 8: 55, 9: 89,
                      10: 144}


def test_rll_constraint_structure():
    g = rll_constraint(2, 0.05)
    assert g.shape == Shape.segment(3)
    assert g.npatterns == 8
    (con,) = g.constraints
    assert con.sense == "<="
    assert con.bound == 0.05
    assert con.coeffs[7] == 1.0 and con.coeffs[:7].sum() == 0.0


def test_uniform_membership_threshold():
    # the uniform pair/triple measure has all-ones frequency 2^-(k+1)
    u2 = PatternDistribution.uniform(BIN, Shape.segment(2))
    assert rll_constraint(1, 0.25).contains(u2)
    assert not rll_constraint(1, 0.2).contains(u2)
    u3 = PatternDistribution.uniform(BIN, Shape.segment(3))
    assert rll_constraint(2, 0.125).contains(u3)


def test_distance_closed_form_matches_lp():
    """For a single mass cap the distance is max(0, excess); the LP must
    agree, and a two-row system exercises the LP path directly."""
    shape = Shape.segment(2)
    mu = PatternDistribution.from_floats(BIN, shape, [0.2, 0.2, 0.3, 0.3])
    single = rll_constraint(1, 0.1)
    assert tv_distance_to_set(mu, single) == pytest.approx(0.2)
    generous = rll_constraint(1, 0.5)
    assert tv_distance_to_set(mu, generous) == 0.0
    two_rows = ConstraintSet(BIN, shape, [
        LinearConstraint((0, 0, 0, 1), 0.1, "<="),
        LinearConstraint((1, 0, 0, 0), 0.1, "<="),
    ])
    d = tv_distance_to_set(mu, two_rows)
    # moving 0.2 off pattern 11 and 0.1 off pattern 00 onto the free
    # patterns costs (0.2 + 0.1) of one-sided mass
    assert d == pytest.approx(0.3, abs=1e-8)


def _grid_distance(mu_probs, cons, denom=60):
    """Oracle: minimum TV distance to the constraint set over the grid of
    distributions with the given denominator."""
    best = np.inf
    m = len(mu_probs)
    for comp in itertools.product(range(denom + 1), repeat=m - 1):
        if sum(comp) > denom:
            continue
        nu = np.array(comp + (denom - sum(comp),), dtype=float) / denom
        if all(c.satisfied(nu, tol=1e-9) for c in cons):
            best = min(best, 0.5 * np.abs(nu - mu_probs).sum())
    return best


def test_distance_against_grid_oracle():
    rng = np.random.default_rng(3)
    shape = Shape.segment(2)
    for trial in range(4):
        mu_probs = rng.dirichlet(np.ones(4))
        mu = PatternDistribution.from_floats(BIN, shape, mu_probs)
        if trial % 2 == 0:
            cons = [LinearConstraint((0, 0, 0, 1), 0.15, "<=")]
        else:
            cons = [
                LinearConstraint((0, 0, 0, 1), 0.2, "<="),
                LinearConstraint((0.5, 0.5, 0, 0), 0.45, "<="),
            ]
        gamma = ConstraintSet(BIN, shape, cons)
        lp = tv_distance_to_set(mu, gamma)
        grid = _grid_distance(mu_probs, cons)
        assert lp <= grid + 1e-9          # the grid point is feasible for the LP
        assert grid - lp <= 2.0 / 60      # grid resolution bound


def test_feasible_point_and_empty_system():
    g = rll_constraint(2, 0.05)
    point = g.feasible_point()
    assert g.contains(point)
    empty = ConstraintSet(BIN, Shape.segment(2), [
        LinearConstraint((0, 0, 0, 1), 0.0, "=="),
        LinearConstraint((0, 0, 0, -1), -0.2, "<="),  # mass(11) >= 0.2
    ])
    with pytest.raises(EmptySystemError):
        empty.feasible_point()


def test_is_admissible_exact_and_relaxed():
    g = rll_constraint(1, 0.0)
    assert is_admissible(Word.from_string("0100"), g)
    assert not is_admissible(Word.from_string("0110"), g)
    # 0110 has pair frequency fr(11)=1/4; within eps=0.3 but not 0.2
    assert is_admissible(Word.from_string("0110"), g, eps=0.3)
    assert not is_admissible(Word.from_string("0110"), g, eps=0.2)


def test_cyclic_counts_no_adjacent_ones():
    g = rll_constraint(1, 0.0)
    for n, expect in LUCAS.items():
        assert count_admissible(n, g) == expect


def test_noncyclic_counts_no_adjacent_ones():
    g = rll_constraint(1, 0.0)
    for n, expect in FIBONACCI_N_PLUS_2.items():
        assert count_admissible_noncyclic(n, g) == expect


def test_noncyclic_trailing_window_convention():
    # leaving the last window unchecked doubles the classic count
    g = rll_constraint(1, 0.0)
    for n, expect in {3: 6, 4: 10, 5: 16, 6: 26, 7: 42}.items():
        assert count_admissible_noncyclic(n, g, convention="halfopen") == expect
    for n in range(3, 9):
        tile = count_admissible_noncyclic(n, g, convention="tile")
        halfopen = count_admissible_noncyclic(n, g, convention="halfopen")
        assert tile <= halfopen


def _random_system(rng):
    kind = rng.integers(0, 4)
    if kind == 0:
        k = int(rng.integers(1, 3))
        return rll_constraint(k, float(rng.uniform(0, 0.3))), 1
    if kind == 1:
        length = int(rng.integers(1, 3))
        pats = set()
        for _ in range(rng.integers(1, 3)):
            pats.add(tuple(rng.integers(0, 2, size=length).tolist()))
        return fully_constrained(BIN, Shape.segment(length), sorted(pats)), 1
    if kind == 2:
        rows = [LinearConstraint(tuple(rng.uniform(0, 1, size=4)),
                                 float(rng.uniform(0.3, 1.0)), "<=")
                for _ in range(int(rng.integers(1, 3)))]
        return ConstraintSet(BIN, Shape.segment(2), rows), 1
    factor = rll_constraint(1, float(rng.uniform(0, 0.4)))
    mode = "strict" if rng.integers(0, 2) else "weak"
    return axial_product(factor, 2, mode), 2


def test_pruned_counter_matches_exhaustive_random():
    rng = np.random.default_rng(101)
    done = 0
    while done < 14:
        system, dim = _random_system(rng)
        n = int(rng.integers(3, 5)) if dim == 2 else int(rng.integers(4, 8))
        eps = float(rng.choice([0.0, 0.05]))
        fast = count_admissible(n, system, eps)
        slow = count_exhaustive(n, system, eps)
        assert fast == slow, f"mismatch on {system} n={n} eps={eps}"
        done += 1


def test_count_monotone_in_eps():
    g = rll_constraint(2, 0.05)
    counts = [count_admissible(6, g, e) for e in (0.0, 0.02, 0.1, 0.95)]
    assert counts == sorted(counts)
    # the worst word (all ones) sits at distance 1 - 0.05 from the cap, so
    # the last radius admits every word
    assert counts[-1] == 2 ** 6


def test_strict_subset_of_weak():
    rng = np.random.default_rng(55)
    for _ in range(4):
        factor = rll_constraint(1, float(rng.uniform(0.0, 0.3)))
        strict = count_admissible(3, axial_product(factor, 2, "strict"))
        weak = count_admissible(3, axial_product(factor, 2, "weak"))
        assert strict <= weak


def test_threads_agree_with_serial():
    g = rll_constraint(1, 0.0)
    assert count_admissible(10, g, threads=2) == LUCAS[10]
    system = axial_product(g, 2, "strict")
    assert count_admissible(4, system, threads=2) \
        == count_admissible(4, system, threads=1)


def test_find_admissible_word():
    g = rll_constraint(1, 0.0)
    w = find_admissible_word(5, g)
    assert w is not None and is_admissible(w, g)
    # an unsatisfiable system yields nothing
    empty = fully_constrained(BIN, Shape.segment(1), [(0,), (1,)])
    assert find_admissible_word(3, empty) is None


def test_axial_system_validation():
    factor = rll_constraint(1, 0.1)
    other = rll_constraint(1, 0.2)
    with pytest.raises(ValidationError):
        AxialSystem((factor, other), 2, "weak")  # weak needs one common set
    sys_ = axial_product(factor, 2, "strict")
    assert sys_.axis_shape(0).points == ((0, 0), (1, 0))
    assert sys_.axis_shape(1).points == ((0, 0), (0, 1))


def test_counting_size_guard():
    g = rll_constraint(2, 0.5)
    with pytest.raises(SizeGuardError):
        count_admissible(30, axial_product(g, 3, "strict"), eps=0.4)
