"""Path-knowledge measures P(diag rho).

Every measure maps the path probabilities to [0, 1]: value 1 exactly when
one path is certain, 0 at the uniform distribution, invariant under
permutations, convex, and non-increasing under degradation (moving weight
from a larger probability to a smaller one).  Implemented families:

* betting measures defined by a gain vector g, P = sum g_m p_m with the
  probabilities sorted descending (one-guess and linear bets are the two
  canonical gain choices);
* the purity measure sqrt(n/(n-1) sum p^2 - 1/(n-1));
* the normalized entropic measure sum p log(n p) / log n;
* Renyi-type measures with parameter lambda > 0 interpolating purity
  (lambda = 2) and entropy (lambda -> 1), plus the lambda -> inf and
  lambda -> 0 limit functions.

The infinite limit is discontinuous at the uniform point and provably not
convex, so the axiom checker treats it separately (see check_axioms).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.special import logsumexp, xlogy

from .errors import (
    BadMeasure,
    DimensionMismatch,
    GainOrderViolated,
    GainSumNonzero,
    WrongDimension,
)
from .states import DensityMatrix, sort_descending

GAIN_SUM_TOL = 1e-12
# switch to the entropy branch near lambda = 1 to avoid cancellation in the
# 1/lambda exponent; slightly above 1e-4 so lambda = 1 +/- 1e-4 lands inside
RENYI_ENTROPY_WINDOW = 1.0001e-4
# above this, n**lambda overflows for moderate n; evaluate in log space
RENYI_LOG_SPACE = 50.0

ONE_GUESS = "one-guess"
LINEAR = "linear"
BET = "bet"
PURITY = "purity"
ENTROPY = "entropy"
RENYI = "renyi"
RENYI_INF = "renyi-inf"
RENYI_ZERO = "renyi-0"


def validate_gains(g) -> np.ndarray:
    """Validate a betting gain vector: 1 = g_1 > g_2 >= ... >= g_n, sum 0."""
    g = np.asarray(g, dtype=float)
    if g.ndim != 1 or len(g) < 2:
        raise GainOrderViolated(f"need a flat list of >= 2 gains, got shape {g.shape}")
    if abs(g[0] - 1.0) > GAIN_SUM_TOL:
        raise GainOrderViolated(f"g_1 must be 1, got {g[0]!r}")
    if not g[0] > g[1]:
        raise GainOrderViolated(
            f"g_1 > g_2 must hold strictly, got g_1={g[0]!r}, g_2={g[1]!r}"
        )
    diffs = np.diff(g[1:])
    if len(diffs) and diffs.max() > 0:
        k = int(np.argmax(diffs > 0)) + 2
        raise GainOrderViolated(f"g_{k} < g_{k + 1}: gains must be non-increasing")
    s = g.sum()
    if abs(s) > GAIN_SUM_TOL:
        raise GainSumNonzero(f"gains sum to {s!r}, must be 0")
    return g


def one_guess_gains(n: int) -> np.ndarray:
    g = np.full(n, -1.0 / (n - 1))
    g[0] = 1.0
    return g


def linear_gains(n: int) -> np.ndarray:
    return (n + 1.0 - 2.0 * np.arange(1, n + 1)) / (n - 1.0)


@dataclass(frozen=True)
class MeasureSpec:
    """Which path-knowledge functional to evaluate.

    ``kind`` is one of one-guess | linear | bet | purity | entropy | renyi |
    renyi-inf | renyi-0.  ``gains`` is only set for explicit bets, ``lam``
    only for finite Renyi measures.
    """

    kind: str
    gains: Optional[tuple[float, ...]] = None
    lam: Optional[float] = None

    def __str__(self) -> str:
        if self.kind == BET:
            return "bet:" + ",".join(format(g, "g") for g in self.gains)
        if self.kind == RENYI:
            return f"renyi:{self.lam:g}"
        if self.kind == RENYI_INF:
            return "renyi:inf"
        if self.kind == RENYI_ZERO:
            return "renyi:0"
        return self.kind

    def gain_vector(self, n: int) -> Optional[np.ndarray]:
        if self.kind == ONE_GUESS:
            return one_guess_gains(n)
        if self.kind == LINEAR:
            return linear_gains(n)
        if self.kind == BET:
            g = np.asarray(self.gains, dtype=float)
            if len(g) != n:
                raise DimensionMismatch(
                    f"gain vector has length {len(g)} but the state has n={n}"
                )
            return g
        return None


def measure_one_guess() -> MeasureSpec:
    return MeasureSpec(ONE_GUESS)


def measure_linear() -> MeasureSpec:
    return MeasureSpec(LINEAR)


def measure_bet(gains) -> MeasureSpec:
    return MeasureSpec(BET, gains=tuple(float(x) for x in validate_gains(gains)))


def measure_purity() -> MeasureSpec:
    return MeasureSpec(PURITY)


def measure_entropy() -> MeasureSpec:
    return MeasureSpec(ENTROPY)


def measure_renyi(lam: float) -> MeasureSpec:
    lam = float(lam)
    if not lam > 0:
        raise BadMeasure(f"renyi parameter must be > 0, got {lam!r}")
    return MeasureSpec(RENYI, lam=lam)


def measure_renyi_inf() -> MeasureSpec:
    return MeasureSpec(RENYI_INF)


def measure_renyi_zero() -> MeasureSpec:
    return MeasureSpec(RENYI_ZERO)


CANONICAL_MEASURES = (ONE_GUESS, LINEAR, PURITY, ENTROPY)


def parse_measure(text: str) -> MeasureSpec:
    """Parse CLI syntax: one-guess | linear | bet:1,0,-1 | purity | entropy |
    renyi:2.5 | renyi:inf | renyi:0."""
    s = text.strip().lower()
    if s == ONE_GUESS:
        return measure_one_guess()
    if s == LINEAR:
        return measure_linear()
    if s == PURITY:
        return measure_purity()
    if s == ENTROPY:
        return measure_entropy()
    if s.startswith("bet:"):
        try:
            gains = [float(x) for x in s[4:].split(",")]
        except ValueError as exc:
            raise BadMeasure(f"cannot parse gains in {text!r}") from exc
        return measure_bet(gains)
    if s.startswith("renyi:"):
        arg = s[6:]
        if arg == "inf":
            return measure_renyi_inf()
        try:
            lam = float(arg)
        except ValueError as exc:
            raise BadMeasure(f"cannot parse renyi parameter in {text!r}") from exc
        if lam == 0:
            return measure_renyi_zero()
        return measure_renyi(lam)
    raise BadMeasure(f"unknown measure {text!r}")


# ---------------------------------------------------------------------------
# evaluation


def _entropy_values(probs: np.ndarray, n: int) -> np.ndarray:
    return xlogy(probs, n * probs).sum(axis=-1) / np.log(n)


def _renyi_values(probs: np.ndarray, lam: float, n: int) -> np.ndarray:
    if abs(lam - 1.0) <= RENYI_ENTROPY_WINDOW:
        return _entropy_values(probs, n)
    if lam > RENYI_LOG_SPACE:
        # inner = (e^a - n^{1-lam}) / (1 - n^{1-lam}) with a = log sum p^lam,
        # evaluated fully in log space; ratio_log >= 0 means inner <= 0
        with np.errstate(divide="ignore"):
            logp = np.where(probs > 0, np.log(np.clip(probs, 1e-300, None)), -np.inf)
        a = logsumexp(lam * logp, axis=-1)
        logn = np.log(n)
        ratio_log = (1.0 - lam) * logn - a
        ratio = np.exp(np.minimum(ratio_log, 0.0))
        inner_log = a + np.log1p(-np.minimum(ratio, 1.0 - 1e-16))
        denom_log = np.log1p(-np.exp(min((1.0 - lam) * logn, 0.0)))
        out = np.exp((inner_log - denom_log) / lam)
        return np.clip(np.where(ratio_log >= 0.0, 0.0, out), 0.0, 1.0)
    s = (probs**lam).sum(axis=-1)
    inner = (n**lam * s - n) / (n**lam - n)
    inner = np.clip(inner, 0.0, None)
    with np.errstate(divide="ignore"):
        return np.clip(inner ** (1.0 / lam), 0.0, 1.0)


def evaluate_probs(measure: MeasureSpec, probs: np.ndarray) -> np.ndarray:
    """Vectorized measure evaluation on rows of path probabilities.

    ``probs`` has shape (..., n); rows must be nonnegative and sum to 1.
    This is the hot path shared by the optimizer, the brute-force oracle and
    the click-statistics estimators.
    """
    probs = np.asarray(probs, dtype=float)
    n = probs.shape[-1]
    if n < 2:
        raise WrongDimension(f"need n >= 2 path probabilities, got {n}")
    g = measure.gain_vector(n)
    if g is not None:
        return np.sort(probs, axis=-1)[..., ::-1] @ g
    if measure.kind == PURITY:
        # mean-centered form of sqrt((n sum p^2 - 1)/(n-1)): identical for
        # normalized rows but free of cancellation at the uniform point
        dev = probs - probs.mean(axis=-1, keepdims=True)
        return np.sqrt((dev**2).sum(axis=-1) * (n / (n - 1.0)))
    if measure.kind == ENTROPY:
        return _entropy_values(probs, n)
    if measure.kind == RENYI:
        return _renyi_values(probs, measure.lam, n)
    if measure.kind == RENYI_INF:
        p1 = probs.max(axis=-1)
        return np.where(n * p1 > 1.0 + 1e-12, p1, 0.0)
    if measure.kind == RENYI_ZERO:
        p1 = probs.max(axis=-1)
        return np.where(p1 >= 1.0 - 1e-12, 1.0, 0.0)
    raise BadMeasure(f"unknown measure kind {measure.kind!r}")


def knowledge_from_probs(measure: MeasureSpec, probs) -> float:
    return float(evaluate_probs(measure, np.asarray(probs, dtype=float)))


def knowledge(measure: MeasureSpec, rho: DensityMatrix) -> float:
    """Path knowledge P of a state: the measure applied to diag(rho)."""
    return float(evaluate_probs(measure, rho.diagonal))


def renyi_limits(diag, which: str) -> float:
    """The lambda -> inf / lambda -> 0 limit measures on a distribution."""
    p = sort_descending(np.asarray(diag, dtype=float))
    n = len(p)
    if which == "inf":
        return float(p[0]) if n * p[0] > 1.0 + 1e-12 else 0.0
    if which == "zero":
        return 1.0 if p[0] >= 1.0 - 1e-12 else 0.0
    raise BadMeasure(f"which must be 'inf' or 'zero', got {which!r}")


# ---------------------------------------------------------------------------
# axiom checking


@dataclass
class AxiomReport:
    """Worst observed violation of each path-knowledge axiom over a
    randomized trial run.  All entries are >= 0; an ideal measure scores 0
    everywhere (up to floating-point noise)."""

    measure: str
    n: int
    trials: int
    seed: int
    certainty_dev: float
    uniform_dev: float
    not_only_certainty: float
    permutation_dev: float
    convexity_violation: float
    degradation_violation: float
    degradation_ties: int

    def max_violation(self) -> float:
        return max(
            self.certainty_dev,
            self.uniform_dev,
            self.not_only_certainty,
            self.permutation_dev,
            self.convexity_violation,
            self.degradation_violation,
        )

    def passed(self, tol: float = 1e-10) -> bool:
        return self.max_violation() <= tol

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def _random_density_diags(rng: np.random.Generator, trials: int, n: int) -> np.ndarray:
    """Diagonals of Ginibre-random density matrices, shape (trials, n)."""
    g = rng.normal(size=(trials, n, n)) + 1j * rng.normal(size=(trials, n, n))
    w = (np.abs(g) ** 2).sum(axis=2)
    return w / w.sum(axis=1, keepdims=True)


def check_axioms(
    measure: MeasureSpec, n: int, trials: int = 10_000, seed: int = 0
) -> AxiomReport:
    """Randomized check of the five path-knowledge axioms.

    Samples pairs of density-matrix diagonals and mixing weights, then
    verifies certainty -> 1, uniformity -> 0, "only certainty reaches 1",
    permutation invariance, convexity of the mixture, and monotonicity
    under degradation (transfer of eps <= (p_j - p_i)/2 from a larger p_j
    to a smaller p_i).  Violations are reported, never raised.
    """
    if n < 2:
        raise WrongDimension(f"need n >= 2, got {n}")
    rng = np.random.default_rng(seed)

    certain = np.eye(n)
    certainty_dev = float(np.abs(evaluate_probs(measure, certain) - 1.0).max())
    uniform_dev = float(abs(evaluate_probs(measure, np.full((1, n), 1.0 / n))[0]))

    d1 = _random_density_diags(rng, trials, n)
    d2 = _random_density_diags(rng, trials, n)
    lam = rng.uniform(0.0, 1.0, size=(trials, 1))

    v1 = evaluate_probs(measure, d1)
    not_only = float(np.clip(v1[d1.max(axis=1) < 1.0 - 1e-9] - (1.0 - 1e-12), 0.0, None).max(initial=0.0))

    perm = rng.permuted(d1, axis=1)
    permutation_dev = float(np.abs(evaluate_probs(measure, perm) - v1).max())

    mix = lam * d1 + (1.0 - lam) * d2
    v2 = evaluate_probs(measure, d2)
    vmix = evaluate_probs(measure, mix)
    convexity_violation = float(
        np.clip(vmix - (lam[:, 0] * v1 + (1.0 - lam[:, 0]) * v2), 0.0, None).max()
    )

    # degradation: move eps from the larger entry of a random pair to the
    # smaller one; pairs away from the maximum exhibit the permitted ties
    rows = np.arange(trials)
    a = rng.integers(0, n, size=trials)
    b = (a + rng.integers(1, n, size=trials)) % n
    swap = d1[rows, a] < d1[rows, b]
    hi = np.where(swap, b, a)
    lo = np.where(swap, a, b)
    gap = d1[rows, hi] - d1[rows, lo]
    eps = rng.uniform(0.0, 0.5, size=trials) * gap
    degraded = d1.copy()
    degraded[rows, hi] -= eps
    degraded[rows, lo] += eps
    vdeg = evaluate_probs(measure, degraded)
    degradation_violation = float(np.clip(vdeg - v1, 0.0, None).max())
    active = gap > 1e-12
    ties = int(np.sum(np.abs(vdeg - v1)[active] <= 1e-15))

    return AxiomReport(
        measure=str(measure),
        n=n,
        trials=trials,
        seed=seed,
        certainty_dev=certainty_dev,
        uniform_dev=uniform_dev,
        not_only_certainty=not_only,
        permutation_dev=permutation_dev,
        convexity_violation=convexity_violation,
        degradation_violation=degradation_violation,
        degradation_ties=ties,
    )
