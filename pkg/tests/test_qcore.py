import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from locent.qcore import (
    DensityMatrix,
    PureState,
    Tripartition,
    negativity,
    negativity_trace_norm,
    partial_trace,
    partial_transpose,
    projector_state,
)
from locent.states import GGHZParams, make_gghz

from conftest import random_state_vector

BELL = PureState(2, np.array([1, 0, 0, 1]) / np.sqrt(2))


def test_pure_state_validation():
    with pytest.raises(ValueError):
        PureState(2, np.array([1.0, 0.0]))  # wrong length
    with pytest.raises(ValueError):
        PureState(1, np.array([1.0, 1.0]))  # not normalized
    st = PureState(1, np.array([1.0, 0.0]))
    with pytest.raises(ValueError):
        st.amplitudes[0] = 0.0  # frozen buffer


def test_density_matrix_validation():
    good = np.eye(2) / 2
    DensityMatrix(1, good)
    with pytest.raises(ValueError):
        DensityMatrix(1, np.array([[0.5, 0.1], [0.2, 0.5]]))  # not Hermitian
    with pytest.raises(ValueError):
        DensityMatrix(1, np.eye(2))  # trace 2
    with pytest.raises(ValueError):
        DensityMatrix(1, np.array([[1.5, 0.0], [0.0, -0.5]]))  # negative eigenvalue


def test_tripartition_validation():
    Tripartition((1,), (2, 3), (0,))
    with pytest.raises(ValueError):
        Tripartition((), (1,), (0,))
    with pytest.raises(ValueError):
        Tripartition((1,), (1, 2), (0,))  # overlap
    with pytest.raises(ValueError):
        Tripartition((1,), (3,), (0,))  # gap: qubit 2 missing
    with pytest.raises(ValueError):
        Tripartition((1,), (2,), ())  # B empty
    tri = Tripartition((3, 1), (2,), (0,))
    assert tri.part_a1 == (1, 3)
    assert tri.canonical_order() == (0, 1, 3, 2)


def test_partial_trace_keep_all_is_identity():
    rho = BELL.projector()
    out = partial_trace(rho, (0, 1))
    assert np.allclose(out.matrix, rho.matrix, atol=1e-14)


def test_partial_trace_bell_marginal():
    out = partial_trace(BELL.projector(), (0,))
    assert np.allclose(out.matrix, np.eye(2) / 2, atol=1e-12)


def test_partial_trace_gghz_marginal():
    st = make_gghz(GGHZParams(3, 0.6, 0.8))
    out = partial_trace(st.projector(), (0,))
    assert np.allclose(out.matrix, np.diag([0.36, 0.64]), atol=1e-12)


def test_partial_trace_composition(rng):
    # tracing out B then part of A equals tracing out the union
    psi = PureState(4, random_state_vector(rng, 4))
    rho = psi.projector()
    step1 = partial_trace(rho, (0, 1, 2))
    step2 = partial_trace(step1, (0, 2))  # qubits 0, 2 of the kept (0, 1, 2)
    direct = partial_trace(rho, (0, 2))
    assert np.abs(step2.matrix - direct.matrix).max() < 1e-12
    assert abs(np.trace(step2.matrix) - 1.0) < 1e-12


def test_partial_trace_errors():
    rho = BELL.projector()
    with pytest.raises(IndexError):
        partial_trace(rho, (0, 5))
    with pytest.raises(ValueError):
        partial_trace(rho, ())


def test_partial_transpose_empty_is_identity():
    rho = BELL.projector()
    assert np.array_equal(partial_transpose(rho, ()), rho.matrix)


def test_partial_transpose_bell_eigenvalues():
    pt = partial_transpose(BELL.projector(), (1,))
    w = np.sort(np.linalg.eigvalsh(pt))
    assert np.allclose(w, [-0.5, 0.5, 0.5, 0.5], atol=1e-12)


def test_partial_transpose_gghz_spectrum():
    st = make_gghz(GGHZParams(4, 0.6, 0.8))
    pt = partial_transpose(st.projector(), (2, 3))
    w = np.sort(np.linalg.eigvalsh(pt))
    nonzero = w[np.abs(w) > 1e-12]
    assert np.allclose(sorted(nonzero), sorted([-0.48, 0.36, 0.48, 0.64]), atol=1e-12)


@settings(deadline=None, max_examples=20)
@given(st.integers(0, 10**6), st.integers(2, 4))
def test_partial_transpose_involution(seed, n):
    from locent.states import spawn_rng

    gen = spawn_rng(seed)
    psi = PureState(n, random_state_vector(gen, n))
    cut_size = int(gen.integers(1, n))
    cut = tuple(sorted(gen.choice(n, size=cut_size, replace=False).tolist()))
    rho = psi.projector()
    pt = partial_transpose(rho, cut)
    ptpt = partial_transpose(DensityMatrix(n, pt, validate=False), cut)
    assert np.array_equal(ptpt, rho.matrix)
    assert np.abs(pt - pt.conj().T).max() < 1e-14
    assert abs(np.trace(pt) - 1.0) < 1e-13


def test_negativity_product_state():
    st = PureState(3, np.eye(8)[0])
    for cut in [(0,), (1,), (0, 2)]:
        assert negativity(st, cut) == pytest.approx(0.0, abs=1e-12)


def test_negativity_bell_is_one():
    assert negativity(BELL, (0,)) == pytest.approx(1.0, abs=1e-12)


def test_negativity_gghz_all_cuts():
    st = make_gghz(GGHZParams(4, 0.6, 0.8))
    for cut in [(0,), (3,), (0, 1), (1, 3), (0, 1, 2)]:
        assert negativity(st, cut) == pytest.approx(0.96, abs=1e-12)


def test_negativity_two_formulas_agree(rng):
    for n in (2, 3, 4, 5):
        psi = PureState(n, random_state_vector(rng, n))
        cut = tuple(range(1 + int(rng.integers(0, n - 1))))
        a = negativity(psi, cut)
        b = negativity_trace_norm(psi, cut)
        assert abs(a - b) < 1e-10


def test_negativity_cut_complement_symmetry(rng):
    for n in (3, 4, 5):
        psi = PureState(n, random_state_vector(rng, n))
        cut_size = int(rng.integers(1, n))
        cut = tuple(sorted(rng.choice(n, size=cut_size, replace=False).tolist()))
        comp = tuple(q for q in range(n) if q not in cut)
        assert abs(negativity(psi, cut) - negativity(psi, comp)) < 1e-10


def test_negativity_rejects_trivial_cuts():
    with pytest.raises(ValueError):
        negativity(BELL, ())
    with pytest.raises(ValueError):
        negativity(BELL, (0, 1))


def test_projector_state_examples():
    assert np.allclose(projector_state(0.0, 0.0, 0).amplitudes, [1, 0])
    assert np.allclose(
        projector_state(np.pi / 2, 0.0, 0).amplitudes, np.array([1, 1]) / np.sqrt(2)
    )
    assert np.allclose(
        projector_state(np.pi / 2, np.pi / 2, 1).amplitudes,
        np.array([1, -1j]) / np.sqrt(2),
    )


def test_projector_state_range_errors():
    with pytest.raises(ValueError):
        projector_state(-0.1, 0.0, 0)
    with pytest.raises(ValueError):
        projector_state(0.5, 7.0, 0)
    with pytest.raises(ValueError):
        projector_state(0.5, 0.0, 2)


@settings(deadline=None, max_examples=50)
@given(st.floats(0, np.pi), st.floats(0, 2 * np.pi, exclude_max=True))
def test_projector_completeness(theta, phi):
    b0 = projector_state(theta, phi, 0).amplitudes
    b1 = projector_state(theta, phi, 1).amplitudes
    total = np.outer(b0, b0.conj()) + np.outer(b1, b1.conj())
    assert np.abs(total - np.eye(2)).max() < 1e-14
    assert abs(np.vdot(b0, b1)) < 1e-14
