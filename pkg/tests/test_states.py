import numpy as np
import pytest

from locent.bounds import gw_upper, wclass_negativity
from locent.localize import closed_le_gw, closed_le_wclass, pure_negativity
from locent.qcore import PureState, Tripartition, negativity, permute_qubits
from locent.states import (
    DickeParams,
    GDParams,
    GGHZParams,
    GHZClassParams,
    GWParams,
    WClassParams,
    haar_family,
    haar_pure,
    make_dicke,
    make_gd,
    make_gghz,
    make_ghzclass,
    make_gw,
    make_phi3,
    make_phi4,
    make_psi3,
    make_psi4,
    make_wclass,
    spawn_rng,
)


def test_make_gghz_trivial_and_balanced():
    st = make_gghz(GGHZParams(3, 1.0, 0.0))
    assert st.amplitudes[0] == 1.0 and np.abs(st.amplitudes[1:]).max() == 0.0
    ghz = make_gghz(GGHZParams(3, 1 / np.sqrt(2), 1 / np.sqrt(2)))
    for cut in [(0,), (1,), (0, 2)]:
        assert negativity(ghz, cut) == pytest.approx(1.0, abs=1e-12)


def test_make_gghz_every_cut_matches_closed_form():
    st = make_gghz(GGHZParams(5, 0.6, 0.8))
    for cut in [(0,), (2,), (0, 4), (1, 2, 3)]:
        assert negativity(st, cut) == pytest.approx(0.96, abs=1e-12)


def test_make_gghz_norm_violation():
    with pytest.raises(ValueError):
        GGHZParams(3, 1.0, 0.5)


def test_make_gw_small_cases():
    bell_like = make_gw(GWParams(2, np.array([1, 1]) / np.sqrt(2)))
    assert negativity(bell_like, (0,)) == pytest.approx(1.0, abs=1e-12)
    product = make_gw(GWParams(3, np.array([1.0, 0.0, 0.0])))
    for cut in [(0,), (1,), (2,)]:
        assert negativity(product, cut) == pytest.approx(0.0, abs=1e-12)


def test_make_gw_equal_amplitudes_negativity():
    st = make_gw(GWParams(3, np.full(3, 1 / np.sqrt(3))))
    assert negativity(st, (0,)) == pytest.approx(2 * np.sqrt(2) / 3, abs=1e-12)


def test_make_dicke_endpoints_and_bell():
    prod = make_dicke(DickeParams(4, 0))
    assert prod.amplitudes[0] == 1.0
    full = make_dicke(DickeParams(4, 4))
    assert full.amplitudes[-1] == 1.0
    bell = make_dicke(DickeParams(2, 1))
    assert negativity(bell, (0,)) == pytest.approx(1.0, abs=1e-12)


def test_make_dicke_half_filling_negativity():
    # closed form 2*sqrt(N1(N-N1))/N, cross-checked against the dense route
    st = make_dicke(DickeParams(4, 2))
    assert negativity(st, (0,)) == pytest.approx(1.0, abs=1e-12)
    st = make_dicke(DickeParams(5, 2))
    assert negativity(st, (0,)) == pytest.approx(2 * np.sqrt(6) / 5, abs=1e-12)


def test_dicke_permutation_invariance():
    st = make_dicke(DickeParams(5, 2))
    for perm in ([1, 0, 2, 3, 4], [4, 3, 2, 1, 0], [2, 0, 4, 1, 3]):
        assert np.array_equal(permute_qubits(st, perm).amplitudes, st.amplitudes)


def test_dicke_equal_cut_negativities_for_equal_sizes():
    # permutation symmetry: any two cuts of the same size carry the same value
    st = make_dicke(DickeParams(6, 2))
    ref = negativity(st, (0, 1))
    for cut in [(2, 4), (1, 5), (3, 4)]:
        assert negativity(st, cut) == pytest.approx(ref, abs=1e-10)


def test_make_gd_reduces_to_components():
    zero = make_gd(GDParams(3, np.array([1.0, 0, 0, 0])))
    assert zero.amplitudes[0] == 1.0
    one_sector = make_gd(GDParams(4, np.array([0, 0, 1.0, 0, 0])))
    assert np.allclose(one_sector.amplitudes, make_dicke(DickeParams(4, 2)).amplitudes)
    cat = make_gd(GDParams(3, np.array([1, 0, 0, 1]) / np.sqrt(2)))
    assert np.allclose(
        cat.amplitudes, make_gghz(GGHZParams(3, 1 / np.sqrt(2), 1 / np.sqrt(2))).amplitudes
    )
    assert negativity(cat, (0,)) == pytest.approx(1.0, abs=1e-12)


def test_make_wclass_subset_and_product():
    a = np.array([0.0, 0.6, 0.48, 0.64])
    via_wclass = make_wclass(WClassParams(a))
    via_gw = make_gw(GWParams(3, a[1:]))
    assert np.allclose(via_wclass.amplitudes, via_gw.amplitudes)
    product = make_wclass(WClassParams(np.array([1.0, 0, 0, 0])))
    for cut in [(0,), (1,), (2,)]:
        assert negativity(product, cut) == pytest.approx(0.0, abs=1e-12)


def test_make_ghzclass_uniform_is_product():
    st = make_ghzclass(GHZClassParams(np.full(8, 1 / np.sqrt(8))))
    for cut in [(0,), (1,), (2,)]:
        assert negativity(st, cut) == pytest.approx(0.0, abs=1e-10)


def test_saturating_family_sits_on_upper_curve():
    # the saturating branch of the curve is (2*le - 1)^2 + e_ab^2 = 1; the
    # implicit residual stays well-conditioned at the vertical tangent e = 1
    tri = Tripartition((1,), (2,), (0,))
    for a in np.linspace(0.0, 1 / np.sqrt(2), 7):
        st = make_psi3(a)
        e_ab = negativity(st, (0,))
        le = closed_le_gw(GWParams(3, st_coeffs(st)), tri)
        assert abs((2 * le - 1.0) ** 2 + e_ab**2 - 1.0) < 1e-9
        if a < 0.65:
            assert le == pytest.approx(gw_upper(e_ab), abs=1e-9)


def st_coeffs(state: PureState) -> np.ndarray:
    n = state.n_qubits
    return np.array([state.amplitudes[1 << (n - 1 - i)] for i in range(n)])


def test_psi3_at_zero_localizes_fully():
    st = make_psi3(0.0)
    tri = Tripartition((1,), (2,), (0,))
    assert closed_le_gw(GWParams(3, st_coeffs(st)), tri) == pytest.approx(1.0, abs=1e-12)


def test_psi4_parameter_domain():
    make_psi4(0.4, 0.5)
    with pytest.raises(ValueError):
        make_psi4(0.4, 0.9)  # radicand negative


def test_phi_families_have_unit_loss():
    for a in (0.0, 0.3, 0.6):
        st = make_phi3(a)
        assert negativity(st, (0,)) == pytest.approx(1.0, abs=1e-12)
    st = make_phi4(0.3, 0.4)
    assert negativity(st, (0,)) == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(ValueError):
        make_phi3(0.8)


def test_sampler_determinism():
    a = haar_pure(4, spawn_rng(99)).amplitudes
    b = haar_pure(4, spawn_rng(99)).amplitudes
    assert np.array_equal(a, b)
    c = haar_family("gw", 5, spawn_rng(7, 3), real=True)
    d = haar_family("gw", 5, spawn_rng(7, 3), real=True)
    assert np.array_equal(c.amplitudes, d.amplitudes)


def test_real_slice_has_no_phases():
    st = haar_family("wclass", 3, spawn_rng(5), real=True)
    assert np.abs(st.amplitudes.imag).max() == 0.0


def test_gw_sampler_weight_symmetry():
    # mean excitation weight per site is 1/N by symmetry of the sampler
    rng = spawn_rng(424)
    n_draws = 100000
    acc = np.zeros(3)
    for _ in range(n_draws):
        z = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        acc += np.abs(z / np.linalg.norm(z)) ** 2
    mean = acc / n_draws
    assert np.abs(mean - 1 / 3).max() < 0.01
    # the direct sampler draws from the same distribution
    st = haar_family("gw", 3, spawn_rng(424))
    assert st.amplitudes.size == 8


def test_haar_negativity_two_sample_agreement():
    # two independent 1e4-sample means agree within 3 combined standard errors
    def mean_neg(seed):
        vals = np.empty(10000)
        gen = spawn_rng(seed)
        for i in range(vals.size):
            vals[i] = pure_negativity(haar_pure(3, gen), (0,))
        return vals.mean(), vals.std(ddof=1) / np.sqrt(vals.size)

    m1, s1 = mean_neg(101)
    m2, s2 = mean_neg(202)
    assert abs(m1 - m2) < 3.0 * np.hypot(s1, s2)


def test_wclass_draws_respect_upper_bound():
    # closed forms only: localized value under the curve set by the 0-vs-rest loss
    rng = spawn_rng(11)
    for _ in range(10000):
        st = haar_family("wclass", 3, rng)
        a = np.array([st.amplitudes[0], st.amplitudes[0b100], st.amplitudes[0b010], st.amplitudes[0b001]])
        le = closed_le_wclass(WClassParams(a))
        e = wclass_negativity(a, 0)
        assert le <= gw_upper(min(e, 1.0)) + 1e-9


def test_unknown_family_rejected():
    with pytest.raises(ValueError):
        haar_family("nope", 3, spawn_rng(0))
    with pytest.raises(ValueError):
        haar_family("wclass", 4, spawn_rng(0))


def test_gw_equal_weight_cuts_have_equal_negativity(rng):
    # cuts whose excitation-weight multisets match carry identical negativity
    a = rng.standard_normal(6) + 1j * rng.standard_normal(6)
    a[3:] = a[:3]  # duplicate the weight multiset between {0,1,2} and {3,4,5}
    a = a / np.linalg.norm(a)
    st = make_gw(GWParams(6, a))
    assert negativity(st, (0, 1, 2)) == pytest.approx(negativity(st, (3, 4, 5)), abs=1e-10)
    assert negativity(st, (0,)) == pytest.approx(negativity(st, (3,)), abs=1e-10)
