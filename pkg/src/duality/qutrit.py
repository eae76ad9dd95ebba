"""Closed-form three-path results: the four measures' interference strength
on pure states, the border families, the alternative squared-sum pairing,
and the degenerate 2-of-3 bet limit.

Pure qutrit states are described by their ordered probability triple
p1 >= p2 >= p3 >= 0 (phases are irrelevant for every quantity here).  Four
one-parameter families organize the border curves:

    Ia:  p2 = p3              (outer border for one-guess, purity, entropy)
    Ib:  (p1 - p3)^2 + 3 p2 = 1   (outer border for the linear bet)
    II:  p1 = p2              (inner border, low-knowledge side)
    III: p3 = 0               (inner border, high-knowledge side)

The closed forms for the bet and purity measures agree with the numeric
optimizer everywhere.  The entropic form uses the phase alignment that
maximizes |Z| (the transformed distribution (1+2W)/3, (1-W)/3, (1-W)/3);
on family Ia that alignment is optimal, but for states near family III it
is not, and the optimizer finds strictly larger values — see
``v_entropy``'s note.  The closed form is kept as the border-curve value.
"""

from __future__ import annotations

import numpy as np
from scipy.special import xlogy

from .errors import BadParameter, WrongDimension
from .states import DensityMatrix, qutrit_moment

FAMILY_TAGS = ("Ia", "Ib", "II", "III")

PROB_TOL = 1e-9


def validate_qutrit_probs(p) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if p.shape != (3,):
        raise WrongDimension(f"expected 3 probabilities, got shape {p.shape}")
    if p.min() < -PROB_TOL:
        raise BadParameter(f"negative probability {p.min()!r}")
    if abs(p.sum() - 1.0) > 1e-9:
        raise BadParameter(f"probabilities sum to {p.sum()!r}")
    if p[0] < p[1] - PROB_TOL or p[1] < p[2] - PROB_TOL:
        raise BadParameter(f"probabilities must be sorted descending, got {p.tolist()}")
    return np.clip(p, 0.0, None)


def family_state(tag: str, param: float) -> np.ndarray:
    """Probability triple of a border-family member.

    The parameter is p1 for families Ia (p1 in [1/3, 1]), II ([1/3, 1/2])
    and III ([1/2, 1]); for family Ib it is the linear-bet path knowledge
    P in [0, 1] via p1 = (1+P)(2+P)/6, p2 = (1-P^2)/3, p3 = (1-P)(2-P)/6.
    """
    x = float(param)
    if tag == "Ia":
        if not 1.0 / 3.0 - PROB_TOL <= x <= 1.0 + PROB_TOL:
            raise BadParameter(f"family Ia needs p1 in [1/3, 1], got {x!r}")
        p = np.array([x, (1.0 - x) / 2.0, (1.0 - x) / 2.0])
    elif tag == "Ib":
        if not 0.0 <= x <= 1.0:
            raise BadParameter(f"family Ib needs P in [0, 1], got {x!r}")
        p = np.array(
            [(1.0 + x) * (2.0 + x) / 6.0, (1.0 - x * x) / 3.0, (1.0 - x) * (2.0 - x) / 6.0]
        )
    elif tag == "II":
        if not 1.0 / 3.0 - PROB_TOL <= x <= 0.5 + PROB_TOL:
            raise BadParameter(f"family II needs p1 in [1/3, 1/2], got {x!r}")
        p = np.array([x, x, 1.0 - 2.0 * x])
    elif tag == "III":
        if not 0.5 - PROB_TOL <= x <= 1.0 + PROB_TOL:
            raise BadParameter(f"family III needs p1 in [1/2, 1], got {x!r}")
        p = np.array([x, 1.0 - x, 0.0])
    else:
        raise BadParameter(f"unknown family tag {tag!r}")
    return validate_qutrit_probs(np.clip(p, 0.0, None))


def _w_sum(p: np.ndarray) -> float:
    """W = sqrt(p1 p2) + sqrt(p2 p3) + sqrt(p3 p1): the maximal |Z|."""
    p1, p2, p3 = p
    return float(np.sqrt(p1 * p2) + np.sqrt(p2 * p3) + np.sqrt(p3 * p1))


def p_one_guess(p) -> float:
    p = validate_qutrit_probs(p)
    return float(1.5 * p[0] - 0.5)


def v_one_guess(p) -> float:
    """One-guess interference strength of a pure state: W."""
    return _w_sum(validate_qutrit_probs(p))


def p_linear(p) -> float:
    p = validate_qutrit_probs(p)
    return float(p[0] - p[2])


def cubic_root_y(p1: float, p2: float, p3: float) -> float:
    """Nonnegative root of 2 y^3 + y^2 = p1 p2 p3 by the trigonometric form
    y = cos(3 theta) / (6 cos theta), cos(3 theta) = sqrt(27 p1 p2 p3).

    The product never exceeds 1/27, so the arccos argument is clamped only
    against 1e-16 overshoot at the symmetric point; a vanishing product
    short-circuits to y = 0 (the unique nonnegative root) to avoid 0/0.
    """
    prod = p1 * p2 * p3
    if prod <= 0.0:
        return 0.0
    c3 = min(np.sqrt(27.0 * prod), 1.0)
    theta = np.arccos(c3) / 3.0
    return float(np.cos(3.0 * theta) / (6.0 * np.cos(theta)))


def v_linear(p) -> float:
    """Linear-bet interference strength of a pure state:
    (2/sqrt 3) sqrt(p1 p2 + p2 p3 + p3 p1 + 2y + 3y^2)."""
    p = validate_qutrit_probs(p)
    p1, p2, p3 = p
    y = cubic_root_y(p1, p2, p3)
    e2 = p1 * p2 + p2 * p3 + p3 * p1
    return float(2.0 / np.sqrt(3.0) * np.sqrt(max(e2 + 2.0 * y + 3.0 * y * y, 0.0)))


def _require_qutrit(rho: DensityMatrix) -> None:
    if rho.n != 3:
        raise WrongDimension(f"need a 3x3 state, got n={rho.n}")


def p_purity(rho: DensityMatrix) -> float:
    """Purity path knowledge |z| of any 3x3 state (pure or mixed)."""
    _require_qutrit(rho)
    return float(abs(qutrit_moment(rho).z))


def v_purity(rho: DensityMatrix) -> float:
    """Purity interference strength of any 3x3 state:
    |rho_12| + |rho_23| + |rho_31|."""
    _require_qutrit(rho)
    m = rho.matrix
    return float(abs(m[0, 1]) + abs(m[1, 2]) + abs(m[2, 0]))


def p_purity_pure(p) -> float:
    p = validate_qutrit_probs(p)
    p1, p2, p3 = p
    return float(np.sqrt(max(1.0 - 3.0 * (p1 * p2 + p2 * p3 + p3 * p1), 0.0)))


def v_purity_pure(p) -> float:
    return _w_sum(validate_qutrit_probs(p))


def entropic_knowledge3(p) -> float:
    p = np.asarray(p, dtype=float)
    return float(xlogy(p, 3.0 * p).sum() / np.log(3.0))


def p_entropy(p) -> float:
    return entropic_knowledge3(validate_qutrit_probs(p))


def v_entropy(p) -> float:
    """Entropic border value: the entropic knowledge of the aligned-phase
    transform (p~1, p~2, p~3) = ((1+2W)/3, (1-W)/3, (1-W)/3).

    Note: this alignment maximizes |Z|, not necessarily the entropic
    knowledge itself.  On family Ia (the outer border) it is the true
    maximum; near family III the optimizer exceeds it (at p = (1/2, 1/2, 0)
    the maximum is 1 - log_3 2, reached by a transform that reproduces the
    state's own distribution, versus (1/3) log_3 2 for this closed form).
    """
    p = validate_qutrit_probs(p)
    w = _w_sum(p)
    pt = np.array([(1.0 + 2.0 * w) / 3.0, (1.0 - w) / 3.0, (1.0 - w) / 3.0])
    return entropic_knowledge3(pt)


def coherence_pair(rho: DensityMatrix) -> tuple[float, float]:
    """The (P, Vbar) pairing with Vbar = sqrt(3 sum |rho_jk|^2) over the
    upper off-diagonal; satisfies P^2 + Vbar^2 = (3/2) tr rho^2 - 1/2, with
    equality to 1 exactly on pure states."""
    _require_qutrit(rho)
    m = rho.matrix
    vbar = float(
        np.sqrt(3.0 * (abs(m[0, 1]) ** 2 + abs(m[1, 2]) ** 2 + abs(m[2, 0]) ** 2))
    )
    return p_purity(rho), vbar


def two_of_three_limit(p) -> tuple[float, float]:
    """(P, V) of the degenerate bet limit g_2 -> 1 on a pure state.

    P tends to 1 - 3 p3.  V tends to 1 when sqrt(p1) <= sqrt(p2) + sqrt(p3)
    and to 2(sqrt(p1 p2) - sqrt(p2 p3) + sqrt(p3 p1)) otherwise; the two
    branches agree at equality, which is returned as 1 for continuity.
    """
    p = validate_qutrit_probs(p)
    p1, p2, p3 = p
    big_p = float(1.0 - 3.0 * p3)
    lhs = np.sqrt(p1)
    rhs = np.sqrt(p2) + np.sqrt(p3)
    if lhs <= rhs:
        v = 1.0
    else:
        v = float(2.0 * (np.sqrt(p1 * p2) - np.sqrt(p2 * p3) + np.sqrt(p3 * p1)))
    return big_p, v


def two_of_three_gains(g2: float) -> np.ndarray:
    """Valid n=3 gain vector (1, g2, -1-g2) approaching the 2-of-3 bet."""
    if not -0.5 <= g2 < 1.0:
        raise BadParameter(f"g2 must lie in [-1/2, 1), got {g2!r}")
    return np.array([1.0, g2, -1.0 - g2])
