"""Finite-statistics operation of the interferometer: particle-mode and
wave-mode click records plus plug-in (P, V) estimation.

Wave-mode estimation maximizes only over the Fourier settings the caller
actually ran (the experimentally honest protocol), so the V estimate is a
lower-bound estimator; full optimization lives in :mod:`duality.strength`.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .errors import DimensionMismatch, EmptyRuns
from .fourier import FourierFamily, detector_probabilities
from .measures import MeasureSpec, evaluate_probs
from .states import DensityMatrix

BOOTSTRAP_DEFAULT = 200


@dataclass(frozen=True)
class ClickRecord:
    """Detector counts from one run; ``fourier`` is None in particle mode."""

    mode: str  # "particle" | "wave"
    counts: tuple[int, ...]
    shots: int
    fourier: Optional[FourierFamily] = None

    def __post_init__(self):
        if sum(self.counts) != self.shots:
            raise DimensionMismatch(
                f"counts sum to {sum(self.counts)} but shots={self.shots}"
            )

    @property
    def n(self) -> int:
        return len(self.counts)

    def frequencies(self) -> np.ndarray:
        return np.asarray(self.counts, dtype=float) / self.shots

    def csv_row(self) -> str:
        fourier_json = "" if self.fourier is None else self.fourier.to_json().replace('"', '""')
        counts = ",".join(str(c) for c in self.counts)
        return f'{self.mode},{self.shots},{counts},"{fourier_json}"'


def records_to_csv(records: Sequence[ClickRecord]) -> str:
    """CSV with header mode,shots,count_1..count_n,fourier_json."""
    if not records:
        return ""
    n = records[0].n
    out = io.StringIO()
    counts_header = ",".join(f"count_{i + 1}" for i in range(n))
    out.write(f"mode,shots,{counts_header},fourier_json\n")
    for rec in records:
        out.write(rec.csv_row() + "\n")
    return out.getvalue()


def _draw(probs: np.ndarray, shots: int, rng: np.random.Generator) -> tuple[int, ...]:
    probs = np.clip(probs, 0.0, None)
    probs = probs / probs.sum()
    return tuple(int(c) for c in rng.multinomial(shots, probs))


def sample_particle_mode(rho: DensityMatrix, shots: int, seed: int = 0) -> ClickRecord:
    """Multinomial draw from the path probabilities diag(rho)."""
    if shots < 1:
        raise EmptyRuns(f"shots must be >= 1, got {shots}")
    rng = np.random.default_rng(seed)
    return ClickRecord(
        mode="particle", counts=_draw(rho.diagonal, shots, rng), shots=shots
    )


def sample_wave_mode(rho: DensityMatrix, fourier, shots: int, seed: int = 0) -> ClickRecord:
    """Multinomial draw from diag(F rho F+) for one Fourier setting."""
    if shots < 1:
        raise EmptyRuns(f"shots must be >= 1, got {shots}")
    family: Optional[FourierFamily] = None
    if isinstance(fourier, FourierFamily):
        family = fourier
        matrix = fourier.matrix()
    else:
        matrix = fourier
    probs = detector_probabilities(rho, matrix)
    rng = np.random.default_rng(seed)
    return ClickRecord(
        mode="wave", counts=_draw(probs, shots, rng), shots=shots, fourier=family
    )


class PVEstimate(NamedTuple):
    p: float
    v: float
    p_stderr: float
    v_stderr: float


def estimate_pv(
    measure: MeasureSpec,
    particle: ClickRecord,
    wave_runs: Sequence[ClickRecord],
    resamples: int = BOOTSTRAP_DEFAULT,
    seed: int = 0,
) -> PVEstimate:
    """Plug-in estimates: P on the particle frequencies, V as the max of the
    measure over the supplied wave-run frequencies, with bootstrap standard
    errors (multinomial resampling of each record)."""
    wave_runs = list(wave_runs)
    if not wave_runs:
        raise EmptyRuns("need at least one wave-mode record")
    n = particle.n
    for rec in wave_runs:
        if rec.n != n:
            raise DimensionMismatch(
                f"wave record has {rec.n} detectors, particle record has {n}"
            )
    p_hat = float(evaluate_probs(measure, particle.frequencies()))
    wave_freqs = np.stack([r.frequencies() for r in wave_runs])
    v_hat = float(evaluate_probs(measure, wave_freqs).max())

    rng = np.random.default_rng(seed)
    boot_p = rng.multinomial(particle.shots, particle.frequencies(), size=resamples)
    p_vals = evaluate_probs(measure, boot_p / particle.shots)
    v_samples = np.empty((resamples, len(wave_runs)))
    for j, rec in enumerate(wave_runs):
        boot = rng.multinomial(rec.shots, rec.frequencies(), size=resamples)
        v_samples[:, j] = evaluate_probs(measure, boot / rec.shots)
    v_vals = v_samples.max(axis=1)
    return PVEstimate(
        p=p_hat,
        v=v_hat,
        p_stderr=float(p_vals.std(ddof=1)),
        v_stderr=float(v_vals.std(ddof=1)),
    )
