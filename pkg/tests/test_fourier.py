import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from duality.errors import DimensionMismatch, NotFourier
from duality.fourier import (
    FourierFamily,
    central_fourier_n4,
    central_matrix_n4,
    dephase,
    detector_probabilities,
    is_fourier,
    ququart_column_permutations,
    recompose,
    standard_fourier,
    transform,
    _row_equivalent,
)
from duality.states import maximally_mixed, pure_state, validate_density

Q = np.exp(2j * np.pi / 3)

CENTRAL_N2 = np.array([[-1, 1], [1, 1]]) / np.sqrt(2)
CENTRAL_N3_FIRST = np.array([[Q, Q**2, 1], [Q**2, Q, 1], [1, 1, 1]]) / np.sqrt(3)
CENTRAL_N3_SECOND = CENTRAL_N3_FIRST.conj()


def test_standard_fourier_n2_is_central():
    assert np.allclose(standard_fourier(2).matrix, CENTRAL_N2, atol=1e-15)


def test_standard_fourier_n3_is_first_central():
    assert np.allclose(standard_fourier(3).matrix, CENTRAL_N3_FIRST, atol=1e-14)


@pytest.mark.parametrize("n", [2, 3, 4, 5, 7])
def test_standard_fourier_symmetric(n):
    m = standard_fourier(n).matrix
    assert np.allclose(m, m.T, atol=1e-13)


def test_is_fourier():
    assert not is_fourier(np.eye(2)).ok
    assert is_fourier(CENTRAL_N2).ok
    rng = np.random.default_rng(0)
    f = standard_fourier(5, input_phases=rng.uniform(0, 2 * np.pi, 5))
    check = is_fourier(f.matrix)
    assert check.ok and check.unitarity_residual < 1e-12


def test_is_fourier_diagnostics():
    check = is_fourier(np.eye(3))
    assert not check.ok
    assert check.modulus_residual > 0.5
    assert check.unitarity_residual < 1e-15


def test_central_n4_t0_real_hadamard():
    m = central_fourier_n4(0.0).matrix
    assert np.allclose(np.abs(m), 0.5, atol=1e-15)
    assert np.allclose(m.imag, 0.0, atol=1e-15)
    expected = 0.5 * np.array(
        [[1, -1, -1, 1], [-1, 1, -1, 1], [-1, -1, 1, 1], [1, 1, 1, 1]]
    )
    assert np.allclose(m, expected)


def test_central_n4_t_pi_flips_corner_signs():
    m0 = central_fourier_n4(0.0).matrix
    mpi = central_fourier_n4(np.pi).matrix
    flip = m0.copy()
    for r in (0, 2):
        for c in (0, 2):
            flip[r, c] = -flip[r, c]
    assert np.allclose(mpi, flip, atol=1e-15)


def test_central_n4_t_half_pi_is_standard_dft():
    assert np.allclose(
        central_fourier_n4(np.pi / 2).matrix, standard_fourier(4).matrix, atol=1e-14
    )


def test_central_n4_t0_tensor_square():
    m = central_fourier_n4(0.0).matrix.copy()
    m[[1, 2]] = m[[2, 1]]
    assert np.allclose(m, np.kron(CENTRAL_N2, CENTRAL_N2), atol=1e-15)


@pytest.mark.parametrize("t", [0.0, 0.3, 1.0, np.pi, 5.5])
def test_central_n4_always_fourier(t):
    assert is_fourier(central_fourier_n4(t).matrix).ok


def test_dephase_fixes_central_matrices():
    for m in (CENTRAL_N2, CENTRAL_N3_FIRST, central_fourier_n4(1.0).matrix):
        central, in_ph, out_ph = dephase(m)
        assert np.allclose(central.matrix, m, atol=1e-12)
        assert np.allclose(in_ph, 0.0, atol=1e-12)
        assert np.allclose(out_ph, 0.0, atol=1e-12)


def test_dephase_recovers_input_phases():
    phases = np.array([0.3, 0.7, 0.0])
    f = standard_fourier(3, input_phases=phases)
    central, in_ph, out_ph = dephase(f)
    assert np.allclose(central.matrix, CENTRAL_N3_FIRST, atol=1e-12)
    assert np.allclose(in_ph, phases, atol=1e-12)
    again = recompose(central, in_ph, out_ph)
    assert np.allclose(again.matrix, f.matrix, atol=1e-10)


def test_dephase_rejects_non_fourier():
    with pytest.raises(NotFourier):
        dephase(np.eye(3))


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 10_000), n=st.sampled_from([2, 3, 4, 5]))
def test_dephase_recompose_roundtrip(seed, n):
    rng = np.random.default_rng(seed)
    f = standard_fourier(
        n,
        input_phases=rng.uniform(0, 2 * np.pi, n),
        output_phases=rng.uniform(0, 2 * np.pi, n),
    )
    central, in_ph, out_ph = dephase(f)
    assert in_ph[-1] == 0.0
    assert np.abs(central.matrix[-1, :] - 1 / np.sqrt(n)).max() < 1e-10
    assert np.abs(central.matrix[:, -1] - 1 / np.sqrt(n)).max() < 1e-10
    again = recompose(central, in_ph, out_ph)
    assert np.abs(again.matrix - f.matrix).max() < 1e-10


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 10_000), n=st.sampled_from([2, 3]))
def test_dephasing_lands_on_finite_central_set(seed, n):
    rng = np.random.default_rng(seed)
    f = standard_fourier(
        n,
        input_phases=rng.uniform(0, 2 * np.pi, n),
        output_phases=rng.uniform(0, 2 * np.pi, n),
    )
    central, _, _ = dephase(f)
    if n == 2:
        candidates = [CENTRAL_N2]
    else:
        candidates = [CENTRAL_N3_FIRST, CENTRAL_N3_SECOND]
    assert any(np.abs(central.matrix - c).max() < 1e-10 for c in candidates)


def test_transform_path_certain_gives_uniform():
    rho = validate_density(np.diag([1.0, 0.0, 0.0]))
    rng = np.random.default_rng(3)
    f = standard_fourier(3, input_phases=rng.uniform(0, 2 * np.pi, 3))
    out = transform(rho, f)
    assert np.allclose(out.diagonal, 1 / 3, atol=1e-14)


def test_transform_fixed_points():
    # the (1/2, 1/2, 0) state with a negative coherence is fixed by both
    # n=3 central matrices
    rho = pure_state([0.5, 0.5, 0.0], [np.pi, 0.0, 0.0])
    for m in (CENTRAL_N3_FIRST, CENTRAL_N3_SECOND):
        out = transform(rho, m)
        assert np.abs(out.matrix - rho.matrix).max() < 1e-14
    # the golden-ratio state is fixed by the real n=4 central matrix
    g = (np.sqrt(5) - 1) / 2
    p = np.array([g**4, g**2, g**-2, g**-4]) / 10
    rho4 = pure_state(p / p.sum())
    out = transform(rho4, central_fourier_n4(0.0))
    assert np.abs(out.matrix - rho4.matrix).max() < 1e-12


def test_transform_preserves_spectrum():
    rng = np.random.default_rng(5)
    g = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    m = g @ g.conj().T
    rho = validate_density(m / m.trace())
    f = standard_fourier(3, input_phases=rng.uniform(0, 2 * np.pi, 3))
    out = transform(rho, f)
    assert abs(out.matrix.trace() - 1.0) < 1e-12
    assert np.allclose(
        np.linalg.eigvalsh(out.matrix), np.linalg.eigvalsh(rho.matrix), atol=1e-10
    )
    assert abs(out.purity() - rho.purity()) < 1e-10


def test_transform_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        transform(maximally_mixed(3), CENTRAL_N2)


def test_detector_probabilities_match_explicit_formulas():
    rng = np.random.default_rng(9)
    n = 4
    z = rng.normal(size=n) + 1j * rng.normal(size=n)
    z /= np.linalg.norm(z)
    rho = validate_density(np.outer(z, z.conj()))
    in_ph = rng.uniform(0, 2 * np.pi, n)
    out_ph = rng.uniform(0, 2 * np.pi, n)
    f = standard_fourier(n, input_phases=in_ph, output_phases=out_ph)
    probs = detector_probabilities(rho, f)
    m = f.matrix
    r = rho.matrix
    # general form: 1/n plus the off-diagonal contributions
    for mm in range(n):
        acc = 1.0 / n
        for j in range(n):
            for k in range(n):
                if j != k:
                    acc += (m[mm, j] * r[j, k] * np.conj(m[mm, k])).real
        assert probs[mm] == pytest.approx(acc, abs=1e-12)
    # generic-family form: output phases drop out, only input phases enter
    for mm in range(n):
        acc = 1.0 / n
        for j in range(n):
            for k in range(n):
                if j != k:
                    acc += (
                        np.exp(2j * np.pi * (mm + 1) * (j - k) / n)
                        * np.exp(1j * (in_ph[j] - in_ph[k]))
                        * r[j, k]
                    ).real / n
        assert probs[mm] == pytest.approx(acc, abs=1e-12)


def test_ququart_column_permutation_classes():
    perms = ququart_column_permutations()
    assert len(perms) == 3
    assert (0, 1, 2, 3) in perms
    c = central_matrix_n4(0.7312997)
    mats = [c[:, list(p)] for p in perms]
    for i in range(len(mats)):
        for j in range(i + 1, len(mats)):
            assert not _row_equivalent(mats[i], mats[j])


def test_fourier_family_roundtrip():
    fam = FourierFamily(
        n=4,
        family="central-n4",
        t=1.25,
        input_phases=(0.1, 0.2, 0.3, 0.0),
        column_perm=(0, 2, 1, 3),
    )
    again = FourierFamily.from_json(fam.to_json())
    assert again == fam
    m = fam.matrix().matrix
    expected = central_matrix_n4(1.25)[:, [0, 2, 1, 3]] * np.exp(
        1j * np.array([0.1, 0.2, 0.3, 0.0])
    )
    assert np.allclose(m, expected, atol=1e-15)


def test_fourier_family_matrices_are_fourier():
    for fam in (
        FourierFamily(n=2, family="central-n2"),
        FourierFamily(n=3, family="central-n3-second", input_phases=(0.4, 0.1, 0.0)),
        FourierFamily(n=5, family="standard-dft"),
    ):
        assert is_fourier(fam.matrix().matrix).ok


def test_phase_length_validation():
    from duality.errors import BadLength

    with pytest.raises(BadLength):
        standard_fourier(3, input_phases=[0.0, 0.1])
    with pytest.raises(BadLength):
        FourierFamily(n=3, family="central-n3-first", input_phases=(0.0,)).matrix()


def test_family_dimension_mismatch():
    from duality.errors import BadLength
    from duality.fourier import central_matrix

    with pytest.raises(BadLength):
        central_matrix(3, "central-n2")
    with pytest.raises(BadLength):
        FourierFamily.from_dict({"n": 2, "family": "sideways"})
