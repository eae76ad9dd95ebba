import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from duality.errors import BadMeasure, DimensionMismatch, GainOrderViolated, GainSumNonzero
from duality.measures import (
    check_axioms,
    evaluate_probs,
    knowledge,
    knowledge_from_probs,
    measure_bet,
    measure_entropy,
    measure_linear,
    measure_one_guess,
    measure_purity,
    measure_renyi,
    measure_renyi_inf,
    measure_renyi_zero,
    parse_measure,
    renyi_limits,
    validate_gains,
)
from duality.states import maximally_mixed, pure_state, validate_density

ALL_KINDS = [
    measure_one_guess(),
    measure_linear(),
    measure_purity(),
    measure_entropy(),
    measure_renyi(2.5),
    measure_renyi_inf(),
    measure_renyi_zero(),
]


def test_validate_gains_one_guess():
    g = validate_gains([1.0, -0.5, -0.5])
    assert np.allclose(g, [1, -0.5, -0.5])


def test_validate_gains_linear():
    validate_gains([1.0, 0.0, -1.0])


def test_validate_gains_two_of_three_limit_forbidden():
    with pytest.raises(GainOrderViolated):
        validate_gains([1.0, 1.0, -2.0])


def test_validate_gains_sum():
    with pytest.raises(GainSumNonzero):
        validate_gains([1.0, -0.25, -0.25])


def test_validate_gains_first_not_one():
    with pytest.raises(GainOrderViolated):
        validate_gains([0.9, 0.1, -1.0])


def test_validate_gains_order():
    with pytest.raises(GainOrderViolated):
        validate_gains([1.0, -1.0, 0.5, -0.5])


def test_parse_measure_forms():
    assert parse_measure("one-guess").kind == "one-guess"
    assert parse_measure("LINEAR").kind == "linear"
    assert parse_measure("bet:1,0,-1").gains == (1.0, 0.0, -1.0)
    assert parse_measure("purity").kind == "purity"
    assert parse_measure("entropy").kind == "entropy"
    assert parse_measure("renyi:2.5").lam == 2.5
    assert parse_measure("renyi:inf").kind == "renyi-inf"
    assert parse_measure("renyi:0").kind == "renyi-0"
    for text in ("nope", "bet:a,b", "renyi:x", "renyi:-1"):
        with pytest.raises(BadMeasure):
            parse_measure(text)


def test_measure_string_roundtrip():
    for m in ALL_KINDS + [measure_bet([1.0, 0.2, -1.2])]:
        assert parse_measure(str(m)) == m


def test_certainty_gives_one_every_measure():
    rho = validate_density(np.diag([1.0, 0.0, 0.0]))
    for m in ALL_KINDS:
        assert knowledge(m, rho) == pytest.approx(1.0, abs=1e-12)


def test_uniform_gives_zero_every_measure():
    rho = maximally_mixed(3)
    for m in ALL_KINDS:
        assert knowledge(m, rho) == pytest.approx(0.0, abs=1e-12)


def test_cusp_distribution_values():
    rho = pure_state([0.5, 0.5, 0.0])
    assert knowledge(measure_one_guess(), rho) == pytest.approx(0.25, abs=1e-14)
    assert knowledge(measure_linear(), rho) == pytest.approx(0.5, abs=1e-14)
    assert knowledge(measure_purity(), rho) == pytest.approx(0.5, abs=1e-14)
    assert knowledge(measure_entropy(), rho) == pytest.approx(
        1 - np.log(2) / np.log(3), abs=1e-14
    )


def test_golden_state_linear_knowledge():
    g = (np.sqrt(5) - 1) / 2
    probs = np.array([g**4, g**2, g**-2, g**-4]) / 10
    rho = pure_state(probs / probs.sum())
    assert knowledge(measure_linear(), rho) == pytest.approx(np.sqrt(5 / 9), abs=1e-12)


def test_bet_requires_matching_length():
    rho = maximally_mixed(3)
    with pytest.raises(DimensionMismatch):
        knowledge(measure_bet([1.0, -1.0]), rho)


def test_renyi_two_equals_purity():
    rng = np.random.default_rng(0)
    probs = rng.dirichlet(np.ones(4), size=200)
    a = evaluate_probs(measure_renyi(2.0), probs)
    b = evaluate_probs(measure_purity(), probs)
    assert np.abs(a - b).max() < 1e-12


def test_renyi_interpolates_entropy_near_one():
    rng = np.random.default_rng(1)
    probs = rng.dirichlet(np.ones(3), size=200)
    ent = evaluate_probs(measure_entropy(), probs)
    for lam in (1 - 1e-4, 1 + 1e-4):
        vals = evaluate_probs(measure_renyi(lam), probs)
        assert np.abs(vals - ent).max() < 1e-6
    # just outside the switch window the raw formula stays continuous
    for lam in (1 - 1.5e-4, 1 + 1.5e-4):
        vals = evaluate_probs(measure_renyi(lam), probs)
        assert np.abs(vals - ent).max() < 1e-3


def test_renyi_limits_branches():
    assert renyi_limits([0.25, 0.25, 0.25, 0.25], "inf") == 0.0
    assert renyi_limits([1.0, 0.0, 0.0], "zero") == 1.0
    assert renyi_limits([0.9, 0.1], "zero") == 0.0
    assert renyi_limits([0.9, 0.1], "inf") == pytest.approx(0.9)
    with pytest.raises(BadMeasure):
        renyi_limits([0.5, 0.5], "both")


def test_renyi_finite_lambda_matches_limits():
    rng = np.random.default_rng(2)
    for _ in range(50):
        p = rng.dirichlet(np.ones(3))
        # keep away from the branch points p1 = 1/n and p1 = 1
        if p.max() < 0.4 or p.max() > 0.95:
            continue
        inf_val = renyi_limits(p, "inf")
        zero_val = renyi_limits(p, "zero")
        assert abs(knowledge_from_probs(measure_renyi(1e6), p) - inf_val) < 1e-3
        assert abs(knowledge_from_probs(measure_renyi(1e-6), p) - zero_val) < 1e-3


def test_qubit_collapse_bet_equals_purity():
    rng = np.random.default_rng(3)
    for _ in range(100):
        d = rng.dirichlet((1.0, 1.0))
        pred = abs(d[0] - d[1])
        assert knowledge_from_probs(measure_one_guess(), d) == pytest.approx(pred, abs=1e-12)
        assert knowledge_from_probs(measure_linear(), d) == pytest.approx(pred, abs=1e-12)
        assert knowledge_from_probs(measure_purity(), d) == pytest.approx(pred, abs=1e-12)


def test_evaluate_probs_vectorization_consistency():
    rng = np.random.default_rng(4)
    probs = rng.dirichlet(np.ones(3), size=64)
    for m in ALL_KINDS:
        batch = evaluate_probs(m, probs)
        scalar = np.array([knowledge_from_probs(m, row) for row in probs])
        assert np.allclose(batch, scalar, atol=1e-14)


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 100_000), lam=st.floats(0.0, 1.0))
def test_convexity_canonical_measures(seed, lam):
    rng = np.random.default_rng(seed)
    d1, d2 = rng.dirichlet(np.ones(4), size=2)
    mix = lam * d1 + (1 - lam) * d2
    for m in ALL_KINDS[:4]:
        lhs = knowledge_from_probs(m, mix)
        rhs = lam * knowledge_from_probs(m, d1) + (1 - lam) * knowledge_from_probs(m, d2)
        assert lhs <= rhs + 1e-10


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 100_000))
def test_permutation_invariance(seed):
    rng = np.random.default_rng(seed)
    d = rng.dirichlet(np.ones(5))
    shuffled = rng.permutation(d)
    for m in ALL_KINDS:
        assert knowledge_from_probs(m, d) == pytest.approx(
            knowledge_from_probs(m, shuffled), abs=1e-12
        )


def test_check_axioms_one_guess_clean():
    rep = check_axioms(measure_one_guess(), 3, trials=10_000, seed=0)
    assert rep.max_violation() <= 1e-10
    # degrading between the two lower probabilities leaves the one-guess
    # value unchanged, so ties must show up
    assert rep.degradation_ties > 0


def test_check_axioms_purity_n4_clean():
    rep = check_axioms(measure_purity(), 4, trials=10_000, seed=0)
    assert rep.max_violation() <= 1e-10
    assert rep.to_dict()["measure"] == "purity"


def test_check_axioms_linear_entropy_clean():
    for m in (measure_linear(), measure_entropy()):
        rep = check_axioms(m, 3, trials=5_000, seed=1)
        assert rep.max_violation() <= 1e-10


def test_renyi_inf_limit_is_not_convex():
    """The lambda -> inf limit jumps from 0 at the uniform point straight to
    ~1/n nearby, so convexity fails on mixtures with the uniform state."""
    m = measure_renyi_inf()
    eps = 1e-3
    uniform = np.full(3, 1 / 3)
    nearby = np.array([1 / 3 + 2 * eps, 1 / 3 - eps, 1 / 3 - eps])
    mix = 0.5 * uniform + 0.5 * nearby
    lhs = knowledge_from_probs(m, mix)
    rhs = 0.5 * knowledge_from_probs(m, uniform) + 0.5 * knowledge_from_probs(m, nearby)
    assert lhs > rhs + 0.1


def test_renyi_above_two_is_not_convex():
    """Finite orders above 2 also lose convexity near the uniform point;
    only orders in (0, 2] are safe for the convexity axiom."""
    m = measure_renyi(2.5)
    eps = 1e-3
    uniform = np.full(3, 1 / 3)
    nearby = np.array([1 / 3 + 2 * eps, 1 / 3 - eps, 1 / 3 - eps])
    mix = 0.5 * uniform + 0.5 * nearby
    lhs = knowledge_from_probs(m, mix)
    rhs = 0.5 * knowledge_from_probs(m, uniform) + 0.5 * knowledge_from_probs(m, nearby)
    assert lhs > rhs + 1e-4


def test_renyi_up_to_two_convex_randomized():
    rng = np.random.default_rng(12)
    for lam in (0.5, 1.5, 2.0):
        m = measure_renyi(lam)
        worst = 0.0
        for _ in range(2000):
            d1, d2 = rng.dirichlet(np.ones(3), size=2)
            w = rng.uniform()
            mix = w * d1 + (1 - w) * d2
            viol = knowledge_from_probs(m, mix) - (
                w * knowledge_from_probs(m, d1) + (1 - w) * knowledge_from_probs(m, d2)
            )
            worst = max(worst, viol)
        assert worst <= 1e-10


def test_evaluate_probs_rejects_single_path():
    from duality.errors import WrongDimension
    with pytest.raises(WrongDimension):
        evaluate_probs(measure_purity(), np.array([1.0]))
