"""Border curves in the (P, V) plane and the conjecture checks across
n = 2, 3, 4 and general n.

Curves are emitted as ordered point lists with provenance (sweep parameter,
state, optimizing Fourier descriptor) and export to CSV with the header
``measure,n,kind,p,v,param``.  ``kind`` distinguishes exact analytic
borders, conjectured curves (reported, never asserted as true borders),
and numeric scans.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.optimize import brentq

from .errors import BadN, BadMeasure, BadParameter
from . import qutrit
from .fourier import central_matrix_n4, transform
from .measures import (
    CANONICAL_MEASURES,
    ENTROPY,
    LINEAR,
    ONE_GUESS,
    PURITY,
    MeasureSpec,
    evaluate_probs,
    knowledge,
    measure_entropy,
    parse_measure,
)
from .states import (
    DensityMatrix,
    haar_random_pure,
    pure_state,
    random_mixed,
)
from .strength import SearchConfig, strength

GOLDEN_RATIO = (np.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class PVPoint:
    p: float
    v: float
    provenance: dict = field(default_factory=dict)

    def duality_residual(self) -> float:
        """How far the point strays into the excluded corners: positive when
        p=1 comes with v>0 or v=1 with p>0 (beyond the usual 1e-9)."""
        r = 0.0
        if self.p >= 1.0 - 1e-9:
            r = max(r, self.v)
        if self.v >= 1.0 - 1e-9:
            r = max(r, self.p)
        return r

    @property
    def param(self) -> Optional[float]:
        return self.provenance.get("param")


@dataclass
class BorderCurve:
    measure: str
    n: int
    kind: str  # analytic | conjectured | numeric-scan
    points: list[PVPoint]

    def __post_init__(self):
        if self.kind not in ("analytic", "conjectured", "numeric-scan"):
            raise BadParameter(f"unknown curve kind {self.kind!r}")
        self.points = sorted(self.points, key=lambda q: q.p)

    def rows(self):
        for q in self.points:
            yield (self.measure, self.n, self.kind, q.p, q.v, q.param)


def _fmt(x) -> str:
    if x is None:
        return ""
    return format(float(x), ".12g")


CSV_HEADER = "measure,n,kind,p,v,param"


def curves_to_csv(curves) -> str:
    """Render one or more curves (or raw PVPoint rows) as CSV text."""
    out = io.StringIO()
    out.write(CSV_HEADER + "\n")
    for curve in curves:
        for measure, n, kind, p, v, param in curve.rows():
            out.write(f"{measure},{n},{kind},{_fmt(p)},{_fmt(v)},{_fmt(param)}\n")
    return out.getvalue()


def points_to_curve(measure: str, n: int, points, kind: str = "numeric-scan") -> BorderCurve:
    return BorderCurve(measure=measure, n=n, kind=kind, points=list(points))


# ---------------------------------------------------------------------------
# n = 2


def qubit_border(measure: MeasureSpec, samples: int = 101) -> BorderCurve:
    """Pure-qubit border: sweep the projector angle in [0, pi/4].

    For two paths the transformed distribution at the optimum is
    ((1+v)/2, (1-v)/2) with v = 2|rho_12|, so P and V are the same function
    of predictability and visibility respectively.
    """
    thetas = np.linspace(np.pi / 4.0, 0.0, samples)
    pts = []
    for th in thetas:
        pred = float(np.cos(2.0 * th))
        vis = float(np.sin(2.0 * th))
        p = float(evaluate_probs(measure, np.array([(1 + pred) / 2, (1 - pred) / 2])))
        v = float(evaluate_probs(measure, np.array([(1 + vis) / 2, (1 - vis) / 2])))
        pts.append(PVPoint(p, v, {"param": float(th)}))
    return BorderCurve(measure=str(measure), n=2, kind="analytic", points=pts)


# ---------------------------------------------------------------------------
# n = 3


_QUTRIT_PV = {
    ONE_GUESS: (qutrit.p_one_guess, lambda p: qutrit.v_one_guess(p)),
    LINEAR: (qutrit.p_linear, lambda p: qutrit.v_linear(p)),
    PURITY: (qutrit.p_purity_pure, lambda p: qutrit.v_purity_pure(p)),
    ENTROPY: (qutrit.p_entropy, lambda p: qutrit.v_entropy(p)),
}


def _qutrit_kind(measure: MeasureSpec) -> str:
    if measure.kind not in _QUTRIT_PV:
        raise BadMeasure(
            f"qutrit borders cover the canonical measures {CANONICAL_MEASURES}, "
            f"got {measure}"
        )
    return measure.kind


def qutrit_region(measure: MeasureSpec, resolution: int = 200) -> tuple[BorderCurve, BorderCurve]:
    """Outer and inner pure-state border curves for a canonical measure.

    The outer border is family Ia (family Ib for the linear bet); the inner
    border is family II up to the cusp state (1/2, 1/2, 0) and family III
    beyond it.
    """
    kind = _qutrit_kind(measure)
    p_of, v_of = _QUTRIT_PV[kind]
    outer_pts = []
    if kind == LINEAR:
        for par in np.linspace(0.0, 1.0, resolution):
            p = qutrit.family_state("Ib", par)
            outer_pts.append(
                PVPoint(p_of(p), v_of(p), {"param": float(par), "family": "Ib"})
            )
    else:
        for par in np.linspace(1.0 / 3.0, 1.0, resolution):
            p = qutrit.family_state("Ia", par)
            outer_pts.append(
                PVPoint(p_of(p), v_of(p), {"param": float(par), "family": "Ia"})
            )
    inner_pts = []
    half = max(resolution // 2, 2)
    for par in np.linspace(1.0 / 3.0, 0.5, half):
        p = qutrit.family_state("II", par)
        inner_pts.append(PVPoint(p_of(p), v_of(p), {"param": float(par), "family": "II"}))
    for par in np.linspace(0.5, 1.0, half)[1:]:
        p = qutrit.family_state("III", par)
        inner_pts.append(PVPoint(p_of(p), v_of(p), {"param": float(par), "family": "III"}))
    outer = BorderCurve(measure=str(measure), n=3, kind="analytic", points=outer_pts)
    inner = BorderCurve(measure=str(measure), n=3, kind="analytic", points=inner_pts)
    return outer, inner


def _invert_monotone(f, target, lo, hi):
    flo, fhi = f(lo), f(hi)
    if target <= min(flo, fhi):
        return lo if flo <= fhi else hi
    if target >= max(flo, fhi):
        return hi if flo <= fhi else lo
    return brentq(lambda x: f(x) - target, lo, hi, xtol=1e-14)


def qutrit_outer_v(measure: MeasureSpec, p_value: float) -> float:
    """V of the outer border at path knowledge p_value (exact inversion)."""
    kind = _qutrit_kind(measure)
    p_value = float(np.clip(p_value, 0.0, 1.0))
    if kind == LINEAR:
        return float(np.sqrt(max(1.0 - p_value * p_value, 0.0)))
    if kind in (ONE_GUESS, PURITY):
        p1 = (2.0 * p_value + 1.0) / 3.0
        return qutrit.v_one_guess(qutrit.family_state("Ia", p1))
    p1 = _invert_monotone(
        lambda x: qutrit.p_entropy(qutrit.family_state("Ia", x)), p_value, 1.0 / 3.0, 1.0
    )
    return qutrit.v_entropy(qutrit.family_state("Ia", p1))


def qutrit_inner_v(measure: MeasureSpec, p_value: float) -> float:
    """V of the inner border (families II / III) at path knowledge p_value."""
    kind = _qutrit_kind(measure)
    p_value = float(np.clip(p_value, 0.0, 1.0))
    if kind == ONE_GUESS:
        tag = "II" if p_value <= 0.25 else "III"
        p1 = (2.0 * p_value + 1.0) / 3.0
        return qutrit.v_one_guess(qutrit.family_state(tag, p1))
    if kind == LINEAR:
        if p_value <= 0.5:
            p = qutrit.family_state("II", (1.0 + p_value) / 3.0)
        else:
            p = qutrit.family_state("III", p_value)
        return qutrit.v_linear(p)
    if kind == PURITY:
        if p_value <= 0.5:
            p = qutrit.family_state("II", (p_value + 1.0) / 3.0)
        else:
            p1 = (3.0 + np.sqrt(max(12.0 * p_value * p_value - 3.0, 0.0))) / 6.0
            p = qutrit.family_state("III", min(p1, 1.0))
        return qutrit.v_purity_pure(p)
    cusp_p = qutrit.p_entropy(np.array([0.5, 0.5, 0.0]))
    if p_value <= cusp_p:
        p1 = _invert_monotone(
            lambda x: qutrit.p_entropy(qutrit.family_state("II", x)), p_value, 1.0 / 3.0, 0.5
        )
        return qutrit.v_entropy(qutrit.family_state("II", p1))
    p1 = _invert_monotone(
        lambda x: qutrit.p_entropy(qutrit.family_state("III", x)), p_value, 0.5, 1.0
    )
    return qutrit.v_entropy(qutrit.family_state("III", p1))


# ---------------------------------------------------------------------------
# n = 4


def ququart_golden_state() -> DensityMatrix:
    """Pure state with path probabilities (G^4, G^2, G^-2, G^-4)/10 along
    the diagonal, G the golden ratio; a fixed point of the real (t=0)
    central Fourier matrix."""
    g = GOLDEN_RATIO
    probs = np.array([g**4, g**2, g**-2, g**-4]) / 10.0
    probs = probs / probs.sum()
    return pure_state(probs)


def ququart_counterexample(cfg: SearchConfig | None = None) -> dict:
    """Check that the golden-ratio state pushes the linear bet beyond the
    quarter circle: P^2 + V^2 >= 10/9 > 1."""
    rho = ququart_golden_state()
    c0 = central_matrix_n4(0.0)
    fixed_residual = float(np.abs(c0 @ rho.matrix @ c0.conj().T - rho.matrix).max())
    lin = parse_measure("linear")
    p = knowledge(lin, rho)
    p_target = float(np.sqrt(5.0 / 9.0))
    res = strength(lin, rho, cfg)
    v = res.v
    report = {
        "fixed_point_residual": fixed_residual,
        "p_linear": p,
        "p_expected": p_target,
        "p_residual": abs(p - p_target),
        "v_numeric": v,
        "v_minus_p": v - p,
        "sum_of_squares": p * p + v * v,
        "sum_target": 10.0 / 9.0,
        "argmax_fourier": res.argmax.to_dict(),
        "checks": {
            "fixed_point": fixed_residual <= 1e-12,
            "p_matches": abs(p - p_target) <= 1e-12,
            "v_at_least_p": v >= p - 1e-9,
            "exceeds_circle": p * p + v * v >= 10.0 / 9.0 - 1e-9,
        },
    }
    report["conjecture_falsified"] = all(report["checks"].values())
    return report


def ququart_conjecture_probs(w: float) -> np.ndarray:
    """Descending path probabilities of the conjectured-border state at
    sweep coordinate w: sinh(vartheta) = e^w / 2, sinh(theta) = e^-w / 2."""
    vt = np.arcsinh(np.exp(w) / 2.0)
    th = np.arcsinh(np.exp(-w) / 2.0)
    p1 = 1.0
    p2 = np.exp(-2.0 * vt)
    p3 = np.tanh(th / 2.0) ** 2
    p4 = p3 * np.exp(-2.0 * vt)
    p = np.array([p1, p2, p3, p4])
    return p / p.sum()


def ququart_conjecture_state(w: float) -> DensityMatrix:
    """The conjectured-border state: probabilities ascending along the
    diagonal, all amplitudes positive."""
    return pure_state(ququart_conjecture_probs(w)[::-1])


def ququart_conjecture_pv(w: float) -> tuple[float, float]:
    vt = float(np.arcsinh(np.exp(w) / 2.0))
    th = float(np.arcsinh(np.exp(-w) / 2.0))
    p = np.tanh(vt) / 3.0 + 2.0 / (3.0 * np.cosh(th))
    v = np.tanh(th) / 3.0 + 2.0 / (3.0 * np.cosh(vt))
    return float(p), float(v)


def ququart_reciprocity_residual(w: float) -> float:
    """Transform the sweep state with the real (e^{it} = 1) central matrix
    and compare against the parameter-swapped state's distribution."""
    rho = ququart_conjecture_state(w)
    rt = transform(rho, central_matrix_n4(0.0))
    expected = ququart_conjecture_probs(-w)[::-1]
    return float(np.abs(rt.diagonal - expected).max())


def ququart_conjectured_border(samples: int = 101, span: float = 4.0) -> BorderCurve:
    """Conjectured linear-bet border for four paths, swept symmetrically
    around the self-reciprocal point (where P = V = sqrt(5)/3)."""
    if samples < 2:
        raise BadParameter(f"need at least 2 samples, got {samples}")
    pts = []
    for w in np.linspace(-span, span, samples):
        p, v = ququart_conjecture_pv(float(w))
        vt = float(np.arcsinh(np.exp(w) / 2.0))
        pts.append(PVPoint(p, v, {"param": float(w), "vartheta": vt}))
    return BorderCurve(measure="linear", n=4, kind="conjectured", points=pts)


# ---------------------------------------------------------------------------
# general n


def _entropic_value(probs: np.ndarray) -> float:
    return float(evaluate_probs(measure_entropy(), probs))


def qunit_conjecture_tilde(n: int, p1: float) -> tuple[float, float]:
    p2 = (1.0 - p1) / (n - 1.0)
    pt1 = (np.sqrt(p1) + (n - 1.0) * np.sqrt(p2)) ** 2 / n
    pt2 = (np.sqrt(p1) - np.sqrt(p2)) ** 2 / n
    return float(pt1), float(pt2)


def qunit_reciprocity_residuals(n: int, p1: float) -> tuple[float, float]:
    """Residuals of the two reciprocity identities linking (p1, p2) with
    (p~1, p~2)."""
    p2 = (1.0 - p1) / (n - 1.0)
    pt1, pt2 = qunit_conjecture_tilde(n, p1)
    r1 = abs(n * p1 + n * pt1 - 2.0 * np.sqrt(n * p1 * pt1) - (n - 1.0))
    r2 = abs(n * p2 + n * pt2 + 2.0 * np.sqrt(n * p2 * pt2) - 1.0)
    return float(r1), float(r2)


def entropic_symmetric_probs(n: int) -> tuple[float, float]:
    p1 = (np.sqrt(n) + 1.0) / (2.0 * np.sqrt(n))
    p2 = 1.0 / (2.0 * np.sqrt(n) * (np.sqrt(n) + 1.0))
    return float(p1), float(p2)


def entropic_symmetric_value(n: int) -> float:
    """Closed-form symmetric P = V of the entropic conjecture curve."""
    rn = np.sqrt(n)
    return float(np.log(rn / 2.0) / np.log(n) + np.log(rn + 1.0) / (rn * np.log(n)))


def _check_qunit_n(n: int) -> None:
    if not 2 <= n <= 64:
        raise BadN(f"supported range is 2 <= n <= 64, got {n}")


def qunit_entropic_conjecture(n: int, samples: int = 101) -> tuple[BorderCurve, PVPoint, dict]:
    """Conjectured entropic border for n paths plus its symmetric point.

    Returns the swept curve, the symmetric P = V point, and a residuals
    dict (reciprocity identities along the sweep, symmetric fixed point,
    closed-form agreement).  The curve is reported as conjectured; nothing
    here asserts it is the true border.
    """
    _check_qunit_n(n)
    pts = []
    worst_r1 = worst_r2 = 0.0
    for p1 in np.linspace(1.0 / n, 1.0, samples):
        p2 = (1.0 - p1) / (n - 1.0)
        pt1, pt2 = qunit_conjecture_tilde(n, p1)
        r1, r2 = qunit_reciprocity_residuals(n, p1)
        worst_r1, worst_r2 = max(worst_r1, r1), max(worst_r2, r2)
        p_val = _entropic_value(np.array([p1] + [p2] * (n - 1)))
        v_val = _entropic_value(np.array([pt1] + [pt2] * (n - 1)))
        pts.append(PVPoint(p_val, v_val, {"param": float(p1)}))
    curve = BorderCurve(measure="entropy", n=n, kind="conjectured", points=pts)
    s1, s2 = entropic_symmetric_probs(n)
    st1, st2 = qunit_conjecture_tilde(n, s1)
    sym_val = _entropic_value(np.array([s1] + [s2] * (n - 1)))
    closed = entropic_symmetric_value(n)
    sym = PVPoint(sym_val, sym_val, {"param": float(s1)})
    checks = {
        "reciprocity_id1_residual": worst_r1,
        "reciprocity_id2_residual": worst_r2,
        "symmetric_fixed_point_residual": max(abs(st1 - s1), abs(st2 - s2)),
        "symmetric_closed_form_residual": abs(sym_val - closed),
        "symmetric_value": sym_val,
    }
    return curve, sym, checks


def p1_measure_borders(n: int, which: str, samples: int = 101) -> BorderCurve:
    """Borders of the measures that depend on the top path probability only.

    one-guess: the full ellipse arc.  renyi-inf: the arc with P, V > 1/n
    plus the two permitted corners (the connecting straight segments are
    excluded).  renyi-0: the two axes.
    """
    if n < 2:
        raise BadN(f"need n >= 2, got {n}")
    pts = []
    if which == ONE_GUESS:
        for p1 in np.linspace(1.0 / n, 1.0, samples):
            pt1, _ = qunit_conjecture_tilde(n, p1)
            p = (n * p1 - 1.0) / (n - 1.0)
            v = (n * pt1 - 1.0) / (n - 1.0)
            pts.append(PVPoint(p, v, {"param": float(p1)}))
        return BorderCurve(measure="one-guess", n=n, kind="analytic", points=pts)
    if which == "renyi-inf":
        pts.append(PVPoint(0.0, 1.0, {"param": 1.0 / n, "corner": True}))
        for p1 in np.linspace(1.0 / n, 1.0, samples + 2)[1:-1]:
            pt1, _ = qunit_conjecture_tilde(n, p1)
            pts.append(PVPoint(float(p1), float(pt1), {"param": float(p1)}))
        pts.append(PVPoint(1.0, 0.0, {"param": 1.0, "corner": True}))
        return BorderCurve(measure="renyi:inf", n=n, kind="analytic", points=pts)
    if which == "renyi-0":
        half = max(samples // 2, 2)
        for v in np.linspace(1.0, 0.0, half):
            pts.append(PVPoint(0.0, float(v), {"param": float(v)}))
        for p in np.linspace(0.0, 1.0, half)[1:]:
            pts.append(PVPoint(float(p), 0.0, {"param": float(p)}))
        return BorderCurve(measure="renyi:0", n=n, kind="analytic", points=pts)
    raise BadMeasure(f"which must be one-guess, renyi-inf or renyi-0, got {which!r}")


# ---------------------------------------------------------------------------
# numeric scans


def random_state_scan(
    n: int,
    measure: MeasureSpec,
    count: int,
    purity_mix: float = 0.0,
    seed: int = 0,
    cfg: SearchConfig | None = None,
) -> list[PVPoint]:
    """(P, V) cloud of Haar-random pure states (optionally blended toward
    the maximally mixed state) with V from the numeric optimizer."""
    if count < 1:
        raise BadParameter(f"count must be >= 1, got {count}")
    rng = np.random.default_rng(seed)
    cfg = cfg or SearchConfig()
    pts = []
    for i in range(count):
        if purity_mix > 0:
            rho = random_mixed(n, rng, purity_mix)
        else:
            rho = haar_random_pure(n, rng)
        p = knowledge(measure, rho)
        res = strength(measure, rho, cfg)
        pts.append(
            PVPoint(
                p,
                res.v,
                {
                    "param": float(i),
                    "diag": [float(x) for x in rho.diagonal],
                    "fourier": res.argmax.to_dict(),
                },
            )
        )
    return pts
