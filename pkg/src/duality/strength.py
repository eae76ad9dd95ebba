"""Induced interference strength V: maximize P over the Fourier transforms
of a state.

The search space is the free input phases of the central Fourier matrix
(the output phases never enter the detector probabilities, and one input
phase is gauged away): one phase for n=2, two for n=3.  For n=4 the central
family carries a parameter t and three column-permutation classes that row
operations cannot undo, so (t, three phases) are searched per class.  For
n >= 5 only the standard DFT family is searched because the full Fourier
catalog is not classified; those results are lower bounds and flagged as
such.

Optimizer: multi-start cyclic coordinate ascent.  Along any single
coordinate (a phase, or t, because |e^{it}|^2 = 1) each detector
probability is exactly a one-frequency sinusoid, so every coordinate line
is reconstructed from four full evaluations and then maximized on the
closed-form line by a dense scan plus golden-section bracketing, which is
robust to the sorting kinks of the bet measures.  Each cycle ends with a
bracketed line search along the net displacement; without it, coordinate
ascent crawls on the near-degenerate ridges of the entropic objective.
All starts advance in lockstep so every evaluation is one vectorized call.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import TooLarge
from .fourier import (
    CENTRAL_N4,
    FourierFamily,
    default_central_family,
    detector_probabilities,
    ququart_column_permutations,
)
from .measures import MeasureSpec, evaluate_probs
from .states import DensityMatrix

INVPHI = (np.sqrt(5.0) - 1.0) / 2.0
TWO_PI = 2.0 * np.pi

# per-phase resolution of the n=4 seeding lattice; t uses T_GRID_DEFAULT
T_GRID_DEFAULT = 48
PHASE_GRID_N4 = 12
LINE_SCAN = 48
GOLDEN_ITERS = 52

# C(t) = _N4_A + e^{it} _N4_B
_N4_A = 0.5 * np.array(
    [[0, -1, 0, 1], [-1, 1, -1, 1], [0, -1, 0, 1], [1, 1, 1, 1]], dtype=complex
)
_N4_B = 0.5 * np.array(
    [[1, 0, -1, 0], [0, 0, 0, 0], [-1, 0, 1, 0], [0, 0, 0, 0]], dtype=complex
)


@dataclass(frozen=True)
class SearchConfig:
    """Knobs of the phase search; ``starts=None`` picks a per-n default
    (16 for n <= 3, 64 for n = 4, 24 above)."""

    starts: Optional[int] = None
    grid: int = 24
    tol: float = 1e-10
    max_iter: int = 60
    seed: int = 0

    def starts_for(self, n: int) -> int:
        if self.starts is not None:
            return max(1, int(self.starts))
        if n <= 3:
            return 16
        if n == 4:
            return 64
        return 24


@dataclass(frozen=True)
class StrengthResult:
    """Maximized interference strength with the maximizing Fourier
    descriptor; ``lower_bound_only`` marks the unclassified n >= 5 search."""

    v: float
    argmax: FourierFamily
    iterations: int
    residual: float
    lower_bound_only: bool = False


class _PhaseObjective:
    """P(diag F rho F+) with F = C diag(e^{i phi}), phi_n = 0 gauged."""

    def __init__(self, central: np.ndarray, rho: np.ndarray, measure: MeasureSpec):
        self.n = rho.shape[0]
        self.dims = self.n - 1
        t = np.einsum("mj,jk,mk->mjk", central, rho, central.conj())
        self.tm = t.reshape(self.n, -1)
        self.measure = measure

    def probs(self, x: np.ndarray) -> np.ndarray:
        u = np.concatenate([np.exp(1j * x), np.ones((x.shape[0], 1))], axis=1)
        v = (u[:, :, None] * u.conj()[:, None, :]).reshape(x.shape[0], -1)
        return np.clip((v @ self.tm.T).real, 0.0, None)

    def __call__(self, x: np.ndarray) -> np.ndarray:
        return evaluate_probs(self.measure, self.probs(x))


class _QuartObjective:
    """n=4 objective over (phi_1, phi_2, phi_3, t) for one column class.

    Phases are indexed by the columns of the permuted central matrix, so
    the state is conjugated by the inverse permutation once up front.
    """

    def __init__(self, rho: np.ndarray, measure: MeasureSpec, perm: tuple[int, ...]):
        inv = np.argsort(np.asarray(perm))
        self.rho_p = rho[np.ix_(inv, inv)]
        self.perm = tuple(perm)
        self.dims = 4
        self.measure = measure

    def probs(self, x: np.ndarray) -> np.ndarray:
        u = np.concatenate([np.exp(1j * x[:, :3]), np.ones((x.shape[0], 1))], axis=1)
        y = u[:, :, None] * self.rho_p[None] * u.conj()[:, None, :]
        e = np.exp(1j * x[:, 3])
        c = _N4_A[None] + e[:, None, None] * _N4_B[None]
        p = np.einsum("smj,sjk,smk->sm", c, y, c.conj()).real
        return np.clip(p, 0.0, None)

    def __call__(self, x: np.ndarray) -> np.ndarray:
        return evaluate_probs(self.measure, self.probs(x))


# ---------------------------------------------------------------------------
# coordinate ascent on exact sinusoidal lines


def _line_model(obj, x: np.ndarray, d: int):
    """probs restricted to coordinate d are alpha + re cos(x_d) - im sin(x_d);
    recover the three coefficient arrays from four full evaluations."""
    evals = []
    xx = x.copy()
    for val in (0.0, 0.5 * np.pi, np.pi, 1.5 * np.pi):
        xx[:, d] = val
        evals.append(obj.probs(xx))
    p0, ph, ppi, p3h = evals
    alpha = 0.5 * (p0 + ppi)
    re = 0.5 * (p0 - ppi)
    im = 0.5 * (p3h - ph)
    return alpha, re, im


def _line_values(measure, alpha, re, im, xval: np.ndarray) -> np.ndarray:
    probs = alpha + re * np.cos(xval)[:, None] - im * np.sin(xval)[:, None]
    np.clip(probs, 0.0, None, out=probs)
    return evaluate_probs(measure, probs)


def _line_maximize(measure, alpha, re, im, scan: int, n_iter: int):
    """Dense scan of the closed-form line plus golden-section refinement."""
    offs = np.linspace(0.0, TWO_PI, scan, endpoint=False)
    probs = (
        alpha[:, None, :]
        + re[:, None, :] * np.cos(offs)[None, :, None]
        - im[:, None, :] * np.sin(offs)[None, :, None]
    )
    np.clip(probs, 0.0, None, out=probs)
    vals = evaluate_probs(measure, probs)
    k = vals.argmax(axis=1)
    step = TWO_PI / scan
    a = offs[k] - step
    b = offs[k] + step
    c = b - INVPHI * (b - a)
    e = a + INVPHI * (b - a)
    fc = _line_values(measure, alpha, re, im, c)
    fe = _line_values(measure, alpha, re, im, e)
    for _ in range(n_iter):
        left = fc > fe
        b = np.where(left, e, b)
        a = np.where(left, a, c)
        c_new = b - INVPHI * (b - a)
        e_new = a + INVPHI * (b - a)
        fq = _line_values(measure, alpha, re, im, np.where(left, c_new, e_new))
        fc_old = fc
        fc = np.where(left, fq, fe)
        fe = np.where(left, fc_old, fq)
        c, e = c_new, e_new
    xbest = np.where(fc > fe, c, e)
    fbest = np.maximum(fc, fe)
    grid_better = vals[np.arange(len(k)), k] > fbest
    xbest = np.where(grid_better, offs[k], xbest)
    fbest = np.maximum(fbest, vals[np.arange(len(k)), k])
    return xbest, fbest


def _accel_step(obj, x, delta, best):
    """Two-stage batched scan along the net cycle displacement."""
    n_starts = x.shape[0]
    s1 = np.linspace(-1.0, 3.0, 65)
    cand = x[:, None, :] + s1[None, :, None] * delta[:, None, :]
    vals = obj(cand.reshape(-1, x.shape[1])).reshape(n_starts, -1)
    k = vals.argmax(axis=1)
    s_best = s1[k]
    h = s1[1] - s1[0]
    s2 = np.linspace(-h, h, 33)
    cand = (
        x[:, None, :]
        + (s_best[:, None] + s2[None, :])[:, :, None] * delta[:, None, :]
    )
    vals2 = obj(cand.reshape(-1, x.shape[1])).reshape(n_starts, -1)
    k2 = vals2.argmax(axis=1)
    s_final = s_best + s2[k2]
    f_final = vals2[np.arange(n_starts), k2]
    x_new = x + s_final[:, None] * delta
    improve = f_final > best
    x = np.where(improve[:, None], x_new, x)
    return x, np.maximum(best, f_final)


def _coordinate_ascent(obj, x0: np.ndarray, tol: float, max_iter: int):
    """Batched cyclic coordinate ascent; returns (x, values, cycles, gain)."""
    x = np.array(x0, dtype=float)
    best = obj(x)
    dims = x.shape[1]
    cycles = 0
    gain = np.inf
    for cyc in range(max_iter):
        cycle_start = float(best.max())
        x_before = x.copy()
        for d in range(dims):
            alpha, re, im = _line_model(obj, x, d)
            xd, fline = _line_maximize(obj.measure, alpha, re, im, LINE_SCAN, GOLDEN_ITERS)
            take = fline >= best - 1e-15
            x[take, d] = xd[take]
        best = obj(x)
        delta = x - x_before
        if np.abs(delta).max() > 1e-15:
            x, best = _accel_step(obj, x, delta, best)
        cycles += 1
        gain = float(best.max()) - cycle_start
        if cyc >= 2 and gain < tol:
            break
    return x, best, cycles, gain


# ---------------------------------------------------------------------------
# seeding


def _torus_local_maxima(vals: np.ndarray) -> np.ndarray:
    mask = np.ones(vals.shape, dtype=bool)
    for ax in range(vals.ndim):
        for shift in (1, -1):
            mask &= vals >= np.roll(vals, shift, axis=ax)
    return np.argwhere(mask)


def _grid_phases(res: int) -> np.ndarray:
    return np.arange(res) * TWO_PI / res


def _phase_grid_starts(obj, n_phases: int, grid: int, starts: int, rng) -> np.ndarray:
    """Best local maxima of the coarse product grid, padded with seeded
    random vectors; local maxima (not top values) spread the starts over
    distinct basins."""
    ph = _grid_phases(grid)
    mesh = np.meshgrid(*([ph] * n_phases), indexing="ij")
    xg = np.stack([m.ravel() for m in mesh], axis=1)
    vals = obj(xg).reshape((grid,) * n_phases)
    loc = _torus_local_maxima(vals)
    lv = vals[tuple(loc.T)]
    order = np.argsort(-lv, kind="stable")
    picks = loc[order[: min(starts, len(order))]]
    x0 = ph[picks]
    if len(x0) < starts:
        extra = rng.uniform(0.0, TWO_PI, size=(starts - len(x0), n_phases))
        x0 = np.concatenate([x0, extra], axis=0)
    return x0


def _quart_starts(obj, grid: int, starts: int, rng) -> np.ndarray:
    """Seed one n=4 column class: sweep the t grid against a coarse phase
    lattice in one shot, keep the t-profile local maxima and the phase-grid
    local maxima at the best t."""
    ph = _grid_phases(grid)
    mesh = np.meshgrid(ph, ph, ph, indexing="ij")
    pts = np.stack([m.ravel() for m in mesh], axis=1)
    tgrid = _grid_phases(T_GRID_DEFAULT)
    u = np.concatenate([np.exp(1j * pts), np.ones((len(pts), 1))], axis=1)
    y = u[:, :, None] * obj.rho_p[None] * u.conj()[:, None, :]
    e = np.exp(1j * tgrid)
    c = _N4_A[None] + e[:, None, None] * _N4_B[None]
    probs = np.einsum("tmj,sjk,tmk->stm", c, y, c.conj()).real
    np.clip(probs, 0.0, None, out=probs)
    vals = evaluate_probs(obj.measure, probs)  # (s, t)
    prof = vals.max(axis=0)
    arg_s = vals.argmax(axis=0)
    cand = []
    tmask = (prof >= np.roll(prof, 1)) & (prof >= np.roll(prof, -1))
    order = np.argsort(-prof[tmask], kind="stable")
    t_hits = np.flatnonzero(tmask)[order]
    for i in t_hits[:starts]:
        cand.append(np.concatenate([pts[arg_s[i]], [tgrid[i]]]))
    i_best = int(prof.argmax())
    grid_vals = vals[:, i_best].reshape(grid, grid, grid)
    loc = _torus_local_maxima(grid_vals)
    lv = grid_vals[tuple(loc.T)]
    for j in np.argsort(-lv, kind="stable"):
        if len(cand) >= starts:
            break
        cand.append(np.concatenate([ph[loc[j]], [tgrid[i_best]]]))
    while len(cand) < starts:
        cand.append(rng.uniform(0.0, TWO_PI, 4))
    return np.stack(cand[:starts], axis=0)


# ---------------------------------------------------------------------------
# public entry points


def _strength_central(measure, rho, central, cfg, n_phases):
    obj = _PhaseObjective(central, rho, measure)
    rng = np.random.default_rng(cfg.seed)
    starts = cfg.starts_for(n_phases + 1)
    if cfg.grid**n_phases <= 2**20:
        x0 = _phase_grid_starts(obj, n_phases, cfg.grid, starts, rng)
    else:
        x0 = np.concatenate(
            [np.zeros((1, n_phases)), rng.uniform(0.0, TWO_PI, (starts - 1, n_phases))]
        )
    x, vals, cycles, gain = _coordinate_ascent(obj, x0, cfg.tol, cfg.max_iter)
    i = int(vals.argmax())
    return float(vals[i]), x[i], cycles, gain


def _strength_n4(measure, rho, cfg):
    rng = np.random.default_rng(cfg.seed)
    perms = ququart_column_permutations()
    per_class = max(4, cfg.starts_for(4) // len(perms))
    grid = min(cfg.grid, PHASE_GRID_N4)
    best = None
    total_cycles = 0
    last_gain = 0.0
    for perm in perms:
        obj = _QuartObjective(rho, measure, perm)
        x0 = _quart_starts(obj, grid, per_class, rng)
        x, vals, cycles, gain = _coordinate_ascent(obj, x0, cfg.tol, cfg.max_iter)
        total_cycles += cycles
        i = int(vals.argmax())
        if best is None or vals[i] > best[0]:
            best = (float(vals[i]), x[i], perm)
            last_gain = gain
    v, x, perm = best
    xfull = np.append(x[:3] % TWO_PI, 0.0)
    family = FourierFamily(
        n=4,
        family=CENTRAL_N4,
        t=float(x[3] % TWO_PI),
        input_phases=tuple(float(xfull[perm[j]]) for j in range(4)),
        column_perm=perm,
    )
    return v, family, total_cycles, last_gain


def strength(
    measure: MeasureSpec, rho: DensityMatrix, cfg: SearchConfig | None = None
) -> StrengthResult:
    """Interference strength V(rho): the largest path knowledge attainable
    among the Fourier transforms of rho.

    Deterministic for a fixed config seed.  For n >= 5 the value is a lower
    bound (standard-DFT family only) and flagged accordingly.
    """
    cfg = cfg or SearchConfig()
    n = rho.n
    if n == 4:
        v, family, cycles, gain = _strength_n4(measure, rho.matrix, cfg)
        return StrengthResult(
            v=min(max(v, 0.0), 1.0),
            argmax=family,
            iterations=cycles,
            residual=gain,
        )
    base = default_central_family(n)
    v, x, cycles, gain = _strength_central(
        measure, rho.matrix, base.central(), cfg, n - 1
    )
    family = FourierFamily(
        n=n,
        family=base.family,
        input_phases=tuple(float(p % TWO_PI) for p in x) + (0.0,),
    )
    return StrengthResult(
        v=min(max(v, 0.0), 1.0),
        argmax=family,
        iterations=cycles,
        residual=gain,
        lower_bound_only=n >= 5,
    )


def strength_lower_bound(measure: MeasureSpec, rho: DensityMatrix, F) -> float:
    """Path knowledge after one specific Fourier transform (a lower bound
    on the interference strength)."""
    if isinstance(F, FourierFamily):
        F = F.matrix()
    probs = detector_probabilities(rho, F)
    return float(evaluate_probs(measure, probs))


# ---------------------------------------------------------------------------
# brute-force oracle

_CHUNK_ROWS = 1 << 17


def _max_over_phase_grid(obj, n_phases: int, res: int) -> float:
    ph = _grid_phases(res)
    mesh = np.meshgrid(*([ph] * n_phases), indexing="ij")
    pts = np.stack([m.ravel() for m in mesh], axis=1)
    best = -np.inf
    for lo in range(0, len(pts), _CHUNK_ROWS):
        best = max(best, float(obj(pts[lo : lo + _CHUNK_ROWS]).max()))
    return best


def brute_force_strength(
    measure: MeasureSpec, rho: DensityMatrix, grid_resolution: int = 360
) -> float:
    """Exhaustive scan of the free input phases on a uniform grid (plus the
    t parameter and surviving column permutations for n=4).

    Monotone non-decreasing under doubling of the resolution (the finer
    grid contains the coarser points).  Only supported for n <= 4; the n=4
    cost grows as resolution^4.
    """
    n = rho.n
    if n > 4:
        raise TooLarge(f"brute force supports n <= 4, got n={n}")
    if grid_resolution < 36:
        raise TooLarge(f"grid_resolution must be >= 36, got {grid_resolution}")
    if n <= 3:
        base = default_central_family(n)
        obj = _PhaseObjective(base.central(), rho.matrix, measure)
        return _max_over_phase_grid(obj, n - 1, grid_resolution)
    best = -np.inf
    ph = _grid_phases(grid_resolution)
    mesh = np.meshgrid(ph, ph, ph, indexing="ij")
    pts = np.stack([m.ravel() for m in mesh], axis=1)
    for perm in ququart_column_permutations():
        obj = _QuartObjective(rho.matrix, measure, perm)
        for t in ph:
            x = np.concatenate([pts, np.full((len(pts), 1), t)], axis=1)
            for lo in range(0, len(x), _CHUNK_ROWS):
                best = max(best, float(obj(x[lo : lo + _CHUNK_ROWS]).max()))
    return best


def shared_grid_strengths(
    measure: MeasureSpec, rhos: np.ndarray, grid_resolution: int = 36
) -> np.ndarray:
    """Grid maxima of many states over one common Fourier grid (n <= 3).

    Because every state is maximized over the *same* finite matrix set,
    pointwise convexity of P carries over to these values exactly; that is
    what makes them the right oracle for the convexity and degradation
    properties of V.
    """
    rhos = np.asarray(rhos, dtype=complex)
    n = rhos.shape[-1]
    if n > 3:
        raise TooLarge("shared-grid oracle supports n <= 3")
    central = default_central_family(n).central()
    ph = _grid_phases(grid_resolution)
    mesh = np.meshgrid(*([ph] * (n - 1)), indexing="ij")
    pts = np.stack([m.ravel() for m in mesh], axis=1)
    u = np.concatenate([np.exp(1j * pts), np.ones((len(pts), 1))], axis=1)
    e = u[:, None, :] * central[None, :, :]  # (G, m, j)
    out = np.empty(len(rhos))
    state_chunk = max(1, _CHUNK_ROWS // max(1, len(pts)))
    for lo in range(0, len(rhos), state_chunk):
        r = rhos[lo : lo + state_chunk]
        probs = np.einsum("gmj,sjk,gmk->sgm", e, r, e.conj()).real
        np.clip(probs, 0.0, None, out=probs)
        vals = evaluate_probs(measure, probs)
        out[lo : lo + state_chunk] = vals.max(axis=1)
    return out
