import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from duality.errors import (
    BadProbabilities,
    NotHermitian,
    NotPositive,
    TraceNotOne,
    WrongDimension,
)
from duality.states import (
    apply_path_phases,
    haar_random_pure,
    maximally_mixed,
    pure_state,
    qutrit_diag_from_moment,
    qutrit_moment,
    sorted_path_probs,
    state_from_dict,
    state_from_json,
    state_to_dict,
    validate_density,
)

GOLDEN = (np.sqrt(5) - 1) / 2


def test_validate_density_maximally_mixed():
    rho = validate_density(np.eye(2) / 2)
    assert rho.n == 2
    assert np.allclose(rho.diagonal, [0.5, 0.5])


def test_validate_density_path_certain():
    rho = validate_density(np.diag([1.0, 0.0, 0.0]))
    assert rho.diagonal[0] == 1.0


def test_validate_density_not_positive():
    # eigenvalues of [[.5,.8],[.8,.5]] are .5 +/- .8 (checked below with the
    # eigensolver), so the matrix fails positivity
    raw = np.array([[0.5, 0.8], [0.8, 0.5]])
    assert np.allclose(sorted(np.linalg.eigvalsh(raw)), [-0.3, 1.3])
    with pytest.raises(NotPositive, match="-3"):
        validate_density(raw)


def test_validate_density_not_hermitian():
    raw = np.array([[0.5, 0.5j], [0.5j, 0.5]])
    with pytest.raises(NotHermitian):
        validate_density(raw)


def test_validate_density_trace():
    with pytest.raises(TraceNotOne):
        validate_density(np.eye(3))


def test_validate_density_shape_errors():
    with pytest.raises(WrongDimension):
        validate_density(np.ones((2, 3)))
    with pytest.raises(WrongDimension):
        validate_density(np.array([[1.0]]))


def test_validate_density_stores_exact_hermitian():
    rng = np.random.default_rng(0)
    z = rng.normal(size=4) + 1j * rng.normal(size=4)
    z /= np.linalg.norm(z)
    m = np.outer(z, z.conj())
    rho = validate_density(m)
    assert np.array_equal(rho.matrix, rho.matrix.conj().T)


def test_pure_state_cusp():
    rho = pure_state([0.5, 0.5, 0.0])
    expected = np.array([[0.5, 0.5, 0.0], [0.5, 0.5, 0.0], [0.0, 0.0, 0.0]])
    assert np.allclose(rho.matrix, expected, atol=1e-15)
    assert abs(rho.purity() - 1.0) < 1e-12


def test_pure_state_trivial_cases():
    assert np.allclose(pure_state([1.0, 0.0]).matrix, np.diag([1.0, 0.0]))
    sym = pure_state([1 / 3] * 3)
    assert np.allclose(sym.matrix, np.full((3, 3), 1 / 3), atol=1e-15)


def test_pure_state_phases_and_signs():
    rho = pure_state([0.5, 0.5, 0.0], [np.pi, 0.0, 0.0])
    assert rho.matrix[0, 1].real == pytest.approx(-0.5, abs=1e-15)


def test_pure_state_errors():
    with pytest.raises(BadProbabilities):
        pure_state([0.7, 0.4])
    with pytest.raises(BadProbabilities):
        pure_state([0.5, 0.5, 0.0], [0.0, 0.0])
    with pytest.raises(BadProbabilities):
        pure_state([-0.1, 1.1])


def test_sorted_path_probs():
    rho = validate_density(np.diag([0.2, 0.5, 0.3]))
    assert np.allclose(sorted_path_probs(rho), [0.5, 0.3, 0.2])
    assert np.allclose(sorted_path_probs(maximally_mixed(4)), 0.25)


def test_sorted_path_probs_golden_state():
    probs = np.array([GOLDEN**4, GOLDEN**2, GOLDEN**-2, GOLDEN**-4]) / 10
    probs /= probs.sum()
    rho = pure_state(probs)
    expected = np.array([GOLDEN**-4, GOLDEN**-2, GOLDEN**2, GOLDEN**4]) / 10
    assert np.allclose(sorted_path_probs(rho), expected / expected.sum(), atol=1e-15)


def test_sorted_path_probs_multiset_preserved():
    rng = np.random.default_rng(1)
    for _ in range(50):
        rho = haar_random_pure(4, rng)
        s = sorted_path_probs(rho)
        assert abs(s.sum() - 1.0) < 1e-12
        assert np.allclose(np.sort(s), np.sort(rho.diagonal))


def test_apply_path_phases_identity():
    rho = pure_state([0.5, 0.3, 0.2])
    assert np.allclose(apply_path_phases(rho, [0, 0, 0]).matrix, rho.matrix)
    # a global phase changes nothing
    assert np.allclose(apply_path_phases(rho, [1.3, 1.3, 1.3]).matrix, rho.matrix, atol=1e-15)


def test_apply_path_phases_negates_first_row():
    rho = pure_state([0.5, 0.3, 0.2])
    out = apply_path_phases(rho, [np.pi, 0.0, 0.0])
    # e^{i pi} multiplies row 1 off-diagonal entries
    assert out.matrix[0, 1] == pytest.approx(-rho.matrix[0, 1], abs=1e-15)
    assert out.matrix[0, 2] == pytest.approx(-rho.matrix[0, 2], abs=1e-15)
    assert out.matrix[1, 2] == pytest.approx(rho.matrix[1, 2], abs=1e-15)


@settings(max_examples=40, deadline=None)
@given(
    phases=st.lists(st.floats(-np.pi, np.pi), min_size=3, max_size=3),
    seed=st.integers(0, 10_000),
)
def test_apply_path_phases_preserves_structure(phases, seed):
    rng = np.random.default_rng(seed)
    rho = haar_random_pure(3, rng)
    out = apply_path_phases(rho, phases)
    assert np.allclose(out.diagonal, rho.diagonal)
    assert np.allclose(np.abs(out.matrix), np.abs(rho.matrix), atol=1e-14)


def test_qutrit_moment_basics():
    assert abs(qutrit_moment(maximally_mixed(3)).z) < 1e-15
    rho = validate_density(np.diag([0.0, 0.0, 1.0]))
    assert qutrit_moment(rho).z == pytest.approx(1.0)
    assert qutrit_moment(pure_state([0.5, 0.3, 0.2])).theta == pytest.approx(0.0)
    with pytest.raises(WrongDimension):
        qutrit_moment(maximally_mixed(2))


def test_qutrit_moment_theta_convention():
    rho = apply_path_phases(pure_state([0.5, 0.3, 0.2]), [0.4, 0.0, 0.0])
    # the cyclic product rho_12 rho_23 rho_31 is phase invariant
    assert qutrit_moment(rho).theta == pytest.approx(0.0, abs=1e-12)
    # zero product (a vanishing off-diagonal) pins theta to 0
    assert qutrit_moment(pure_state([0.5, 0.5, 0.0])).theta == 0.0


def test_qutrit_moment_reconstruction_1000_states():
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(1000):
        rho = haar_random_pure(3, rng)
        z = qutrit_moment(rho).z
        worst = max(worst, np.abs(qutrit_diag_from_moment(z) - rho.diagonal).max())
    assert worst < 1e-12


def test_state_json_roundtrip():
    rho = pure_state([0.5, 0.3, 0.2], [0.1, 0.2, 0.3])
    again = state_from_json(rho.to_json())
    assert np.allclose(again.matrix, rho.matrix, atol=1e-15)
    payload = state_to_dict(rho)
    assert payload["n"] == 3
    assert state_from_dict(payload).n == 3


def test_state_from_dict_errors():
    with pytest.raises(WrongDimension):
        state_from_dict({"n": 2, "entries": [[[1.0, 0.0]]]})
    with pytest.raises(WrongDimension):
        state_from_dict({"entries": "nope"})


def test_state_json_applies_validation():
    payload = {"n": 2, "entries": [[[0.5, 0.0], [0.8, 0.0]], [[0.8, 0.0], [0.5, 0.0]]]}
    with pytest.raises(NotPositive):
        state_from_dict(payload)


def test_density_matrix_is_immutable():
    rho = maximally_mixed(3)
    with pytest.raises((ValueError, RuntimeError)):
        rho.matrix[0, 0] = 0.7
