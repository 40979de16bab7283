import numpy as np
import pytest
from oracles import (
    perturbation_dim_brute,
    ptrace_a_bra_ket,
    ptrace_b_bra_ket,
    ptranspose_b_loops,
    random_hermitian,
)

from qmarginals import (
    DimensionMismatch,
    NotHermitian,
    NotPSD,
    NotUnitary,
    TraceNotOne,
    check_rank_bound,
    kron,
    max_entangled_projector,
    numerical_rank,
    parthasarathy_bound,
    partial_trace_a,
    partial_trace_b,
    partial_transpose_a,
    partial_transpose_b,
    perturbation_freedom_dim,
    ppt_check,
    random_separable,
    sampling,
    state_from_json,
    state_to_json,
    state_violations,
    validate_state,
)


def maximally_mixed(n, m):
    d = n * m
    return validate_state(np.eye(d, dtype=complex) / d, n, m)


# ---------------------------------------------------------------------------
# validation


def test_validate_maximally_mixed():
    state = maximally_mixed(2, 3)
    assert state.dim_a == 2 and state.dim_b == 3


def test_validate_example(example_matrix):
    state = validate_state(example_matrix, 2, 3)
    assert not state_violations(state.mat, 2, 3)


def test_validate_rejects_negative(example_matrix):
    bad = example_matrix - np.diag([0.5, 0, 0, 0, 0, 0.0])
    with pytest.raises(NotPSD) as info:
        validate_state(bad, 2, 3)
    assert info.value.min_eigenvalue < -0.1
    kinds = {v.kind for v in state_violations(bad, 2, 3)}
    assert "not_psd" in kinds and "trace_not_one" in kinds


def test_validate_rejects_wrong_dims(example_matrix):
    with pytest.raises(DimensionMismatch):
        validate_state(example_matrix, 2, 2)


def test_validate_rejects_non_hermitian():
    mat = np.eye(4, dtype=complex) / 4
    mat[0, 1] = 0.3
    with pytest.raises(NotHermitian):
        validate_state(mat, 2, 2)


def test_validate_rejects_wrong_trace():
    with pytest.raises(TraceNotOne) as info:
        validate_state(np.eye(4, dtype=complex), 2, 2)
    assert info.value.trace == pytest.approx(4.0)


def test_state_matrix_is_read_only(example_state):
    with pytest.raises(ValueError):
        example_state.mat[0, 0] = 1.0


# ---------------------------------------------------------------------------
# partial trace


def test_partial_trace_of_product_state():
    rng = sampling.generator(10)
    a = sampling.random_density_matrix(rng, 2)
    b = sampling.random_density_matrix(rng, 3)
    state = validate_state(kron(a, b), 2, 3)
    assert np.abs(partial_trace_b(state) - a).max() < 1e-12
    assert np.abs(partial_trace_a(state) - b).max() < 1e-12


def test_partial_trace_example(example_state):
    assert np.abs(partial_trace_b(example_state) - np.eye(2) / 2).max() < 1e-14
    assert np.abs(partial_trace_a(example_state) - np.eye(3) / 3).max() < 1e-14


def test_partial_trace_max_entangled():
    state = max_entangled_projector(np.eye(2))
    assert np.abs(partial_trace_b(state) - np.eye(2) / 2).max() < 1e-14
    assert np.abs(partial_trace_a(state) - np.eye(2) / 2).max() < 1e-14


@pytest.mark.parametrize("seed", range(5))
def test_partial_trace_against_bra_ket_oracle(seed):
    state = random_separable(2, 3, 3, seed)
    assert np.abs(partial_trace_b(state) - ptrace_b_bra_ket(state.mat, 2, 3)).max() < 1e-13
    assert np.abs(partial_trace_a(state) - ptrace_a_bra_ket(state.mat, 2, 3)).max() < 1e-13
    assert np.trace(partial_trace_a(state)).real == pytest.approx(1.0, abs=1e-10)
    assert np.trace(partial_trace_b(state)).real == pytest.approx(1.0, abs=1e-10)


def test_partial_trace_linearity():
    rho = random_separable(2, 3, 2, 0)
    sigma = random_separable(2, 3, 2, 1)
    for alpha in (0.25, 0.5, 0.9):
        mixed = validate_state(alpha * rho.mat + (1 - alpha) * sigma.mat, 2, 3)
        direct = partial_trace_b(mixed)
        combined = alpha * partial_trace_b(rho) + (1 - alpha) * partial_trace_b(sigma)
        assert np.abs(direct - combined).max() < 1e-12


def test_expectation_compatibility(example_state):
    # tr(A rho_1) equals tr((A (x) 1) rho), observable by observable
    rng = np.random.default_rng(77)
    rho1 = partial_trace_b(example_state)
    for _ in range(50):
        obs = random_hermitian(rng, 2)
        lhs = np.trace(obs @ rho1)
        rhs = np.trace(kron(obs, np.eye(3)) @ example_state.mat)
        assert abs(lhs - rhs) <= 1e-10 * np.linalg.norm(obs)


# ---------------------------------------------------------------------------
# partial transpose


def test_partial_transpose_of_product():
    rng = sampling.generator(4)
    a = sampling.random_density_matrix(rng, 2)
    b = sampling.random_density_matrix(rng, 3)
    state = validate_state(kron(a, b), 2, 3)
    assert np.abs(partial_transpose_b(state) - kron(a, b.T)).max() < 1e-14
    assert np.abs(partial_transpose_a(state) - kron(a.T, b)).max() < 1e-14


def test_partial_transpose_is_involution(example_state):
    pt = partial_transpose_b(example_state)
    again = partial_transpose_b(validate_state_like(pt, example_state))
    assert np.array_equal(again, example_state.mat)


def validate_state_like(mat, state):
    # wrap a Hermitian unit-trace (not necessarily PSD) matrix for the
    # transpose involution check without the positivity gate
    from qmarginals import BipartiteState

    return BipartiteState(state.dim_a, state.dim_b, mat)


def test_partial_transpose_matches_loop_oracle(example_state):
    expected = ptranspose_b_loops(example_state.mat, 2, 3)
    assert np.array_equal(partial_transpose_b(example_state), expected)


def test_partial_transpose_example_spectrum(example_state):
    report = ppt_check(example_state)
    expected = np.array([-1 / 6, -1 / 6, 1 / 3, 1 / 3, 1 / 3, 1 / 3])
    assert np.abs(report.spectrum - expected).max() < 1e-12
    assert report.spectrum.sum() == pytest.approx(1.0, abs=1e-10)


# ---------------------------------------------------------------------------
# PPT verdicts


def test_ppt_product_state_separable():
    state = random_separable(2, 3, 1, 5)
    report = ppt_check(state)
    assert report.is_ppt
    assert report.verdict == "separable"


def test_ppt_example_entangled(example_state):
    report = ppt_check(example_state)
    assert not report.is_ppt
    assert report.verdict == "entangled"
    assert report.min_eigenvalue == pytest.approx(-1 / 6, abs=1e-12)


def test_ppt_inconclusive_outside_small_dims():
    report = ppt_check(maximally_mixed(3, 3))
    assert report.is_ppt
    assert report.verdict == "inconclusive"


def test_ppt_failure_is_entangled_in_any_dims():
    # generalized maximally entangled two-qutrit state violates PPT
    vec = np.zeros(9, dtype=complex)
    for i in range(3):
        vec[i * 3 + i] = 1 / np.sqrt(3.0)
    state = validate_state(np.outer(vec, vec.conj()), 3, 3)
    report = ppt_check(state)
    assert not report.is_ppt
    assert report.verdict == "entangled"


def test_ppt_never_separable_outside_conclusive_dims():
    for seed in range(10):
        report = ppt_check(random_separable(3, 3, 4, seed))
        assert report.is_ppt
        assert report.verdict == "inconclusive"


# ---------------------------------------------------------------------------
# maximally entangled projectors


def test_max_entangled_identity_basis():
    state = max_entangled_projector(np.eye(2))
    expected = np.zeros((4, 4), dtype=complex)
    for i in (0, 3):
        for j in (0, 3):
            expected[i, j] = 0.5
    assert np.abs(state.mat - expected).max() < 1e-15
    assert numerical_rank(state.mat) == 1


@pytest.mark.parametrize("seed", range(6))
def test_max_entangled_random_basis(seed):
    u = sampling.random_unitary(sampling.generator(seed), 2)
    state = max_entangled_projector(u)
    assert np.abs(partial_trace_b(state) - np.eye(2) / 2).max() < 1e-12
    assert np.abs(partial_trace_a(state) - np.eye(2) / 2).max() < 1e-12
    assert numerical_rank(state.mat) == 1


def test_max_entangled_rejects_non_unitary():
    with pytest.raises(NotUnitary):
        max_entangled_projector(np.array([[1.0, 0.0], [1.0, 0.0]]))


# ---------------------------------------------------------------------------
# rank bound


def test_parthasarathy_bound_values():
    assert parthasarathy_bound(2, 2) == 2  # floor(sqrt(7))
    assert parthasarathy_bound(2, 3) == 3  # floor(sqrt(12))
    assert parthasarathy_bound(3, 3) == 4  # floor(sqrt(17))


def test_check_rank_bound(example_state):
    assert check_rank_bound(example_state)
    assert not check_rank_bound(maximally_mixed(2, 3))


# ---------------------------------------------------------------------------
# perturbation freedom oracle


def test_perturbation_freedom_pure_product():
    rng = sampling.generator(12)
    a = sampling.random_density_matrix(rng, 2)
    # rank-one factors: project onto the top eigenvector
    w, u = np.linalg.eigh(a)
    pa = np.outer(u[:, -1], u[:, -1].conj())
    b = sampling.random_density_matrix(rng, 3)
    w, u = np.linalg.eigh(b)
    pb = np.outer(u[:, -1], u[:, -1].conj())
    state = validate_state(kron(pa, pb), 2, 3)
    assert perturbation_freedom_dim(state) == 0


def test_perturbation_freedom_example(example_state):
    assert perturbation_freedom_dim(example_state) == 0


def test_perturbation_freedom_maximally_mixed_matches_brute_force():
    state = maximally_mixed(2, 3)
    dim = perturbation_freedom_dim(state)
    assert dim == perturbation_dim_brute(state.mat, 2, 3)
    assert dim == 24  # frozen from the brute-force oracle


def test_perturbation_freedom_mixture_of_entangled_projectors():
    plus = max_entangled_projector(np.eye(2))
    minus = max_entangled_projector(np.diag([1.0, -1.0]))
    state = validate_state(0.5 * (plus.mat + minus.mat), 2, 2)
    dim = perturbation_freedom_dim(state)
    assert dim == perturbation_dim_brute(state.mat, 2, 2)
    assert dim > 0


# ---------------------------------------------------------------------------
# separable sampling


def test_random_separable_deterministic():
    s1 = random_separable(2, 3, 3, 9)
    s2 = random_separable(2, 3, 3, 9)
    assert np.array_equal(s1.mat, s2.mat)


def test_random_separable_product_case():
    state = random_separable(2, 3, 1, 2)
    report = ppt_check(state)
    assert report.is_ppt


@pytest.mark.parametrize("seed", range(30))
def test_random_separable_always_ppt(seed):
    assert ppt_check(random_separable(2, 3, 1 + seed % 4, seed)).is_ppt


def test_random_separable_rejects_zero_terms():
    with pytest.raises(ValueError):
        random_separable(2, 3, 0, 1)


# ---------------------------------------------------------------------------
# JSON


def test_state_json_round_trip(example_state):
    again = state_from_json(state_to_json(example_state))
    assert np.array_equal(again.mat, example_state.mat)
    assert (again.dim_a, again.dim_b) == (2, 3)


def test_state_json_rejects_missing_fields(example_state):
    doc = state_to_json(example_state)
    del doc["dim_a"]
    with pytest.raises(ValueError):
        state_from_json(doc)
