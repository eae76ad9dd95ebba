"""Fourier matrices (complex Hadamard / sqrt(n)) and the wave-mode transform.

A Fourier matrix is unitary with all entries of modulus 1/sqrt(n).  Pulling
input phases out on the right and output phases on the left leaves a
*central* matrix whose last row and column are real positive 1/sqrt(n).
The central sets are: a single matrix for n=2, two row-permuted copies of
one matrix for n=3, and a one-parameter family (plus column permutations
that row operations cannot undo) for n=4.  For n >= 5 only the standard
DFT family is constructed here; the full catalog is not classified.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations
from typing import NamedTuple, Optional

import numpy as np

from .errors import BadLength, DimensionMismatch, NotFourier, WrongDimension
from .states import DensityMatrix, _hermitize

FOURIER_TOL = 1e-10

STANDARD_DFT = "standard-dft"
CENTRAL_N2 = "central-n2"
CENTRAL_N3_FIRST = "central-n3-first"
CENTRAL_N3_SECOND = "central-n3-second"
CENTRAL_N4 = "central-n4"

FAMILIES = (STANDARD_DFT, CENTRAL_N2, CENTRAL_N3_FIRST, CENTRAL_N3_SECOND, CENTRAL_N4)


class FourierCheck(NamedTuple):
    ok: bool
    unitarity_residual: float
    modulus_residual: float


class FourierMatrix:
    """Validated unitary matrix with unimodular entries / sqrt(n)."""

    __slots__ = ("_m",)

    def __init__(self, matrix: np.ndarray, *, _validated: bool = False):
        m = np.asarray(matrix, dtype=complex)
        if not _validated:
            check = is_fourier(m)
            if not check.ok:
                raise NotFourier(
                    f"unitarity residual {check.unitarity_residual:.3e}, "
                    f"modulus residual {check.modulus_residual:.3e} "
                    f"(tolerance {FOURIER_TOL:.0e})"
                )
        self._m = m
        self._m.setflags(write=False)

    @property
    def n(self) -> int:
        return self._m.shape[0]

    @property
    def matrix(self) -> np.ndarray:
        return self._m

    def __repr__(self) -> str:
        return f"FourierMatrix(n={self.n})"


def is_fourier(matrix) -> FourierCheck:
    """Check unitarity and the equal-modulus property, with diagnostics."""
    m = np.asarray(matrix, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return FourierCheck(False, np.inf, np.inf)
    n = m.shape[0]
    uni = float(np.abs(m @ m.conj().T - np.eye(n)).max())
    mod = float(np.abs(np.abs(m) * np.sqrt(n) - 1.0).max())
    return FourierCheck(uni <= FOURIER_TOL and mod <= FOURIER_TOL, uni, mod)


def _phase_diag(phases, n: int, what: str) -> np.ndarray:
    if phases is None:
        return np.ones(n, dtype=complex)
    ph = np.asarray(phases, dtype=float)
    if ph.shape != (n,):
        raise BadLength(f"expected {n} {what} phases, got shape {ph.shape}")
    return np.exp(1j * ph)


def standard_fourier(n: int, input_phases=None, output_phases=None) -> FourierMatrix:
    """Generic Fourier matrix F_jk = e^{2 pi i jk/n} e^{i(phi'_j + phi_k)} / sqrt(n).

    Indices run 1..n, so with zero phases the last row and column are real
    positive and the matrix is already central.
    """
    if n < 2:
        raise WrongDimension(f"need n >= 2, got {n}")
    j = np.arange(1, n + 1)
    core = np.exp(2j * np.pi * np.outer(j, j) / n) / np.sqrt(n)
    out = _phase_diag(output_phases, n, "output")
    inp = _phase_diag(input_phases, n, "input")
    return FourierMatrix(out[:, None] * core * inp[None, :], _validated=True)


def central_matrix_n4(t) -> np.ndarray:
    """Entries of the one-parameter n=4 central family; broadcasts over t."""
    t = np.asarray(t, dtype=float)
    e = np.exp(1j * t)
    one = np.ones_like(e)
    rows = np.stack(
        [
            np.stack([e, -one, -e, one], axis=-1),
            np.stack([-one, one, -one, one], axis=-1),
            np.stack([-e, -one, e, one], axis=-1),
            np.stack([one, one, one, one], axis=-1),
        ],
        axis=-2,
    )
    return 0.5 * rows


def central_fourier_n4(t: float) -> FourierMatrix:
    """Central 4x4 Fourier matrix with (1,1) entry e^{it}/2.

    At t = pi/2 this is the standard DFT matrix; at t = 0 it is a real
    Hadamard / 2 and, after swapping rows 2 and 3, the tensor square of the
    n=2 central matrix.
    """
    return FourierMatrix(central_matrix_n4(float(t)), _validated=True)


_FAMILY_DIMS = {CENTRAL_N2: 2, CENTRAL_N3_FIRST: 3, CENTRAL_N3_SECOND: 3, CENTRAL_N4: 4}


def central_matrix(n: int, family: str = "", t: float | None = None) -> np.ndarray:
    expected = _FAMILY_DIMS.get(family)
    if expected is not None and n != expected:
        raise BadLength(f"family {family!r} is {expected}-dimensional, got n={n}")
    if family in ("", STANDARD_DFT, CENTRAL_N2, CENTRAL_N3_FIRST):
        return standard_fourier(n).matrix
    if family == CENTRAL_N3_SECOND:
        return standard_fourier(3).matrix.conj()
    if family == CENTRAL_N4:
        return central_matrix_n4(0.0 if t is None else float(t))
    raise BadLength(f"unknown Fourier family {family!r}")


def dephase(F) -> tuple[FourierMatrix, np.ndarray, np.ndarray]:
    """Factor F = diag(e^{i phi'}) . central . diag(e^{i phi}).

    Returns (central, input_phases, output_phases) with the gauge
    phi_n = 0, so the central matrix has real positive last row and column.
    """
    m = F.matrix if isinstance(F, FourierMatrix) else np.asarray(F, dtype=complex)
    check = is_fourier(m)
    if not check.ok:
        raise NotFourier(
            f"unitarity residual {check.unitarity_residual:.3e}, "
            f"modulus residual {check.modulus_residual:.3e}"
        )
    out_ph = np.angle(m[:, -1])
    in_ph = np.angle(m[-1, :]) - out_ph[-1]
    in_ph[-1] = 0.0
    central = np.exp(-1j * out_ph)[:, None] * m * np.exp(-1j * in_ph)[None, :]
    # scrub rounding noise on the anchored row/column
    central[:, -1] = np.abs(central[:, -1])
    central[-1, :] = np.abs(central[-1, :])
    return FourierMatrix(central, _validated=True), in_ph, out_ph


def recompose(central, input_phases, output_phases) -> FourierMatrix:
    m = central.matrix if isinstance(central, FourierMatrix) else np.asarray(central)
    n = m.shape[0]
    out = _phase_diag(output_phases, n, "output")
    inp = _phase_diag(input_phases, n, "input")
    return FourierMatrix(out[:, None] * m * inp[None, :], _validated=True)


def transform(rho: DensityMatrix, F) -> DensityMatrix:
    """Wave-mode transform rho -> F rho F^dagger."""
    m = F.matrix if isinstance(F, FourierMatrix) else np.asarray(F, dtype=complex)
    if m.shape[0] != rho.n:
        raise DimensionMismatch(f"state has n={rho.n}, Fourier matrix is {m.shape[0]}x{m.shape[1]}")
    out = m @ rho.matrix @ m.conj().T
    return DensityMatrix(_hermitize(out), _validated=True)


def detector_probabilities(rho: DensityMatrix, F) -> np.ndarray:
    """Diagonal of F rho F^dagger: the click probability of each detector."""
    m = F.matrix if isinstance(F, FourierMatrix) else np.asarray(F, dtype=complex)
    if m.shape[0] != rho.n:
        raise DimensionMismatch(f"state has n={rho.n}, Fourier matrix is {m.shape[0]}x{m.shape[1]}")
    probs = np.einsum("mj,jk,mk->m", m, rho.matrix, m.conj()).real
    return np.clip(probs, 0.0, None)


def _phase_factorable(X: np.ndarray) -> bool:
    # X has unimodular entries; true iff X_rc = a_r b_c for unimodular a, b
    T = X * np.conj(X[:, [0]]) * np.conj(X[[0], :]) * X[0, 0]
    return bool(np.abs(T - 1.0).max() < 1e-9)


def _row_equivalent(M1: np.ndarray, M2: np.ndarray) -> bool:
    """True iff M1 = D_row . (row permutation of M2) . D_col for phase diagonals."""
    n = M1.shape[0]
    for sig in permutations(range(n)):
        X = M1 / M2[list(sig), :]
        if np.abs(np.abs(X) - 1.0).max() > 1e-9:
            continue
        if _phase_factorable(X):
            return True
    return False


@lru_cache(maxsize=1)
def ququart_column_permutations() -> tuple[tuple[int, ...], ...]:
    """Column permutations of the n=4 central family that row operations
    cannot absorb.

    All 24 permutations are enumerated at a generic parameter value and
    deduplicated under (row permutation x row phases x column phases).
    Three classes of eight survive; the returned representatives are the
    identity, the swap of the last two columns, and the swap of the middle
    two columns.
    """
    C = central_matrix_n4(0.7312997)
    reps: list[tuple[int, ...]] = []
    matrices: list[np.ndarray] = []
    for pi in permutations(range(4)):
        M = C[:, list(pi)]
        if not any(_row_equivalent(M, R) for R in matrices):
            reps.append(tuple(pi))
            matrices.append(M)
    return tuple(reps)


@dataclass(frozen=True)
class FourierFamily:
    """Serializable descriptor of a Fourier matrix: family tag, optional
    parameter t (n=4), optional column permutation (n=4), and the pulled-out
    input/output phases."""

    n: int
    family: str
    t: Optional[float] = None
    input_phases: tuple[float, ...] = ()
    output_phases: tuple[float, ...] = ()
    column_perm: Optional[tuple[int, ...]] = None

    def central(self) -> np.ndarray:
        m = central_matrix(self.n, self.family, self.t)
        if self.column_perm is not None:
            m = m[:, list(self.column_perm)]
        return m

    def matrix(self) -> FourierMatrix:
        m = self.central()
        if self.input_phases:
            m = m * _phase_diag(self.input_phases, self.n, "input")[None, :]
        if self.output_phases:
            m = _phase_diag(self.output_phases, self.n, "output")[:, None] * m
        return FourierMatrix(m, _validated=True)

    def to_dict(self) -> dict:
        d = {
            "n": self.n,
            "family": self.family,
            "t": self.t,
            "input_phases": list(self.input_phases),
        }
        if self.output_phases:
            d["output_phases"] = list(self.output_phases)
        if self.column_perm is not None:
            d["column_perm"] = list(self.column_perm)
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "FourierFamily":
        if "n" not in d or "family" not in d:
            raise BadLength("Fourier descriptor needs 'n' and 'family' fields")
        if d["family"] not in FAMILIES:
            raise BadLength(f"unknown Fourier family {d['family']!r}")
        return cls(
            n=int(d["n"]),
            family=d["family"],
            t=None if d.get("t") is None else float(d["t"]),
            input_phases=tuple(float(x) for x in d.get("input_phases", ())),
            output_phases=tuple(float(x) for x in d.get("output_phases", ())),
            column_perm=None
            if d.get("column_perm") is None
            else tuple(int(i) for i in d["column_perm"]),
        )

    @classmethod
    def from_json(cls, text: str) -> "FourierFamily":
        return cls.from_dict(json.loads(text))


def default_central_family(n: int) -> FourierFamily:
    """Zero-phase central descriptor used as the search base for dimension n."""
    if n == 2:
        return FourierFamily(n=2, family=CENTRAL_N2)
    if n == 3:
        return FourierFamily(n=3, family=CENTRAL_N3_FIRST)
    if n == 4:
        return FourierFamily(n=4, family=CENTRAL_N4, t=0.0, column_perm=(0, 1, 2, 3))
    return FourierFamily(n=n, family=STANDARD_DFT)
