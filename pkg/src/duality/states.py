"""Density matrices for n-path interferometers and their elementary operations.

A state between the preparation and probing stages is an n x n density
matrix: Hermitian, positive semidefinite, unit trace.  The diagonal holds
the path probabilities; the off-diagonal entries carry everything the wave
mode can reveal.
"""

from __future__ import annotations

import json
from typing import NamedTuple

import numpy as np

from .errors import (
    BadProbabilities,
    NotHermitian,
    NotPositive,
    TraceNotOne,
    WrongDimension,
)

TRACE_TOL = 1e-12
HERMITIAN_TOL = 1e-10
# smallest eigenvalue may dip this far below zero from eigensolver noise (n <= 16)
PSD_TOL = -1e-10

Q3 = np.exp(2j * np.pi / 3)  # basic cubic root of unity


class QutritMoment(NamedTuple):
    """First Fourier moment z of a qutrit diagonal and the invariant angle
    theta of the cyclic off-diagonal product."""

    z: complex
    theta: float


class DensityMatrix:
    """Validated, immutable n x n density matrix.

    The stored matrix is exactly Hermitian: construction keeps the upper
    triangle plus a real diagonal and mirrors the rest, so later consumers
    never see representation noise.  Use :func:`validate_density` to build
    one from raw data.
    """

    __slots__ = ("_m",)

    def __init__(self, matrix: np.ndarray, *, _validated: bool = False):
        if not _validated:
            matrix = _check_density(matrix)
        self._m = matrix
        self._m.setflags(write=False)

    @property
    def n(self) -> int:
        return self._m.shape[0]

    @property
    def matrix(self) -> np.ndarray:
        return self._m

    @property
    def diagonal(self) -> np.ndarray:
        return self._m.diagonal().real

    def purity(self) -> float:
        return float(np.vdot(self._m, self._m).real)

    def __repr__(self) -> str:
        return f"DensityMatrix(n={self.n})"

    def to_json(self) -> str:
        entries = [[[float(v.real), float(v.imag)] for v in row] for row in self._m]
        return json.dumps({"n": self.n, "entries": entries})


def _hermitize(raw: np.ndarray) -> np.ndarray:
    """Mirror the upper triangle onto the lower one; diagonal made real."""
    upper = np.triu(raw, k=1)
    return upper + upper.conj().T + np.diag(raw.diagonal().real)


def _check_density(raw: np.ndarray) -> np.ndarray:
    m = np.asarray(raw, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise WrongDimension(f"expected a square matrix, got shape {m.shape}")
    n = m.shape[0]
    if n < 2:
        raise WrongDimension(f"need at least 2 paths, got n={n}")
    dev = np.abs(m - m.conj().T).max()
    if dev > HERMITIAN_TOL:
        raise NotHermitian(f"matrix deviates from Hermitian symmetry by {dev:.3e}")
    m = _hermitize(m)
    tr = m.trace().real
    if abs(tr - 1.0) > TRACE_TOL:
        raise TraceNotOne(f"trace is {tr!r}, deviates from 1 by {abs(tr - 1.0):.3e}")
    lo = float(np.linalg.eigvalsh(m)[0])
    if lo < PSD_TOL:
        raise NotPositive(f"smallest eigenvalue {lo:.3e} is below {PSD_TOL:.0e}")
    return m


def validate_density(raw) -> DensityMatrix:
    """Validate a raw square complex matrix as a density matrix.

    Raises :class:`NotHermitian`, :class:`TraceNotOne` or :class:`NotPositive`
    naming the violated invariant and the offending magnitude.
    """
    return DensityMatrix(_check_density(raw), _validated=True)


def pure_state(probabilities, phases=None) -> DensityMatrix:
    """Rank-1 state with entries sqrt(p_j p_k) e^{i(phi_j - phi_k)}."""
    p = np.asarray(probabilities, dtype=float)
    if p.ndim != 1 or len(p) < 2:
        raise BadProbabilities(f"need a flat list of >= 2 probabilities, got shape {p.shape}")
    if p.min() < 0:
        raise BadProbabilities(f"negative probability {p.min()!r}")
    if abs(p.sum() - 1.0) > TRACE_TOL:
        raise BadProbabilities(f"probabilities sum to {p.sum()!r}, not 1")
    amps = np.sqrt(p).astype(complex)
    if phases is not None:
        ph = np.asarray(phases, dtype=float)
        if ph.shape != p.shape:
            raise BadProbabilities(f"{len(p)} probabilities but {ph.size} phases")
        amps = amps * np.exp(1j * ph)
    return DensityMatrix(_hermitize(np.outer(amps, amps.conj())), _validated=True)


def maximally_mixed(n: int) -> DensityMatrix:
    return DensityMatrix(np.eye(n, dtype=complex) / n, _validated=True)


def sorted_path_probs(rho: DensityMatrix) -> np.ndarray:
    """Diagonal of rho sorted in descending order.

    Ties keep their original index order so downstream output is
    reproducible bit for bit.
    """
    return sort_descending(rho.diagonal)


def sort_descending(p: np.ndarray) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    order = np.argsort(-p, kind="stable")
    return p[order]


def apply_path_phases(rho: DensityMatrix, phases) -> DensityMatrix:
    """Phase transformation rho_jk -> e^{i(phi_j - phi_k)} rho_jk.

    Leaves the diagonal and every |rho_jk| unchanged; the result is an
    equivalent state for every measure in this package.
    """
    ph = np.asarray(phases, dtype=float)
    if ph.shape != (rho.n,):
        raise WrongDimension(f"expected {rho.n} phases, got shape {ph.shape}")
    u = np.exp(1j * ph)
    m = _hermitize(np.outer(u, u.conj()) * rho.matrix)
    return DensityMatrix(m, _validated=True)


def qutrit_moment(rho: DensityMatrix) -> QutritMoment:
    """Moment z = q rho_11 + q^2 rho_22 + rho_33 (q = e^{2 pi i/3}) plus the
    phase-invariant angle theta of rho_12 rho_23 rho_31.

    theta is 0 when the product vanishes, otherwise in (-pi, pi].  The
    diagonal can be reconstructed from z via
    rho_kk = 1/3 + (2/3) Re(q^{-k} z).
    """
    if rho.n != 3:
        raise WrongDimension(f"qutrit moment needs n=3, got n={rho.n}")
    d = rho.diagonal
    z = complex(Q3 * d[0] + Q3**2 * d[1] + d[2])
    m = rho.matrix
    prod = m[0, 1] * m[1, 2] * m[2, 0]
    theta = 0.0 if prod == 0 else float(np.angle(prod))
    return QutritMoment(z=z, theta=theta)


def qutrit_diag_from_moment(z: complex) -> np.ndarray:
    """Inverse of the moment map: rho_kk = 1/3 + (2/3) Re(q^{-k} z)."""
    k = np.arange(1, 4)
    return 1.0 / 3.0 + (2.0 / 3.0) * (Q3 ** (-k) * z).real


def state_to_dict(rho: DensityMatrix) -> dict:
    return {
        "n": rho.n,
        "entries": [[[float(v.real), float(v.imag)] for v in row] for row in rho.matrix],
    }


def state_from_dict(payload: dict) -> DensityMatrix:
    """Parse the JSON state format {"n": int, "entries": [[[re, im], ...], ...]}."""
    if not isinstance(payload, dict) or "entries" not in payload:
        raise WrongDimension("state payload must be a dict with an 'entries' field")
    entries = payload["entries"]
    try:
        m = np.array(
            [[complex(re, im) for re, im in row] for row in entries], dtype=complex
        )
    except (TypeError, ValueError) as exc:
        raise WrongDimension(f"malformed entries: {exc}") from exc
    if "n" in payload and int(payload["n"]) != m.shape[0]:
        raise WrongDimension(
            f"declared n={payload['n']} but entries are {m.shape[0]}x{m.shape[1]}"
        )
    return validate_density(m)


def state_from_json(text: str) -> DensityMatrix:
    return state_from_dict(json.loads(text))


def haar_random_pure(n: int, rng: np.random.Generator) -> DensityMatrix:
    """Haar-random pure state: normalized vector of standard complex Gaussians."""
    z = rng.normal(size=n) + 1j * rng.normal(size=n)
    z /= np.linalg.norm(z)
    return DensityMatrix(_hermitize(np.outer(z, z.conj())), _validated=True)


def random_mixed(n: int, rng: np.random.Generator, mix: float = 1.0) -> DensityMatrix:
    """Haar pure state blended with the maximally mixed state.

    The blend weight is drawn uniformly from [0, mix]; mix=0 reduces to a
    pure state.
    """
    rho = haar_random_pure(n, rng)
    s = float(rng.uniform(0.0, mix)) if mix > 0 else 0.0
    m = (1.0 - s) * rho.matrix + s * np.eye(n) / n
    return DensityMatrix(_hermitize(m), _validated=True)
