"""Self-verification suites wiring closed forms against the compute paths.

Each suite cross-checks an independent analytic route (closed-form
post-measurement coefficients, closed-form cut negativities, exact scaling
under dephasing, explicit operator-sum channels) against the production
implementation.  The CLI ``verify`` subcommand runs them and reports one
line per check; the test suite reuses them at acceptance scale.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .bounds import (
    check_state,
    dicke_negativity,
    gghz_negativity,
    gw_negativity,
    wclass_negativity,
)
from .localize import MeasurementBasis, average_entanglement, maximize_le
from .noise import NoiseSpec, apply_phase_flip, kraus_channel_reference
from .qcore import PureState, Tripartition, negativity, permute_qubits
from .states import (
    DickeParams,
    GGHZParams,
    GWParams,
    WClassParams,
    haar_family,
    make_dicke,
    make_gghz,
    make_gw,
    make_wclass,
    spawn_rng,
)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


# ---------------------------------------------------------------------------
# closed-form post-measurement coefficients for single-excitation states
# (the independent oracle for the measurement kernels)


def gw_single_measured_coeffs(a: np.ndarray, theta: float, phi: float):
    """Measure qubit 0 of a single-excitation state; exact coefficients.

    Returns (f, p): f[k] is the unnormalized post-measurement amplitude
    vector over (no-excitation, excitation on A qubit j) components for
    outcome k; p[k] = ||f[k]||^2 is the exact outcome probability.
    """
    a = np.asarray(a, dtype=np.complex128)
    n = a.size
    c, s = np.cos(theta / 2.0), np.sin(theta / 2.0)
    em = np.exp(-1j * phi)
    f = np.zeros((2, n), dtype=np.complex128)
    f[0, 0] = a[0] * em * s
    f[1, 0] = -a[0] * em * c
    f[0, 1:] = a[1:] * c
    f[1, 1:] = a[1:] * s
    p = (np.abs(f) ** 2).sum(axis=1)
    return f, p


def gw_two_measured_coeffs(a: np.ndarray, theta1, phi1, theta2, phi2):
    """Measure qubits 0 and 1 of a single-excitation state; exact coefficients.

    Outcome index k = 2*k0 + k1.  The two excitation amplitudes inside the
    measured pair interfere in the no-excitation component, so the exact
    probabilities are taken as ||f[k]||^2 rather than expanded term by term.
    """
    a = np.asarray(a, dtype=np.complex128)
    n = a.size
    c1, s1 = np.cos(theta1 / 2.0), np.sin(theta1 / 2.0)
    c2, s2 = np.cos(theta2 / 2.0), np.sin(theta2 / 2.0)
    e1 = a[0] * np.exp(-1j * phi1)
    e2 = a[1] * np.exp(-1j * phi2)
    f = np.zeros((4, n - 1), dtype=np.complex128)
    f[0, 0] = e1 * s1 * c2 + e2 * c1 * s2
    f[1, 0] = e1 * s1 * s2 - e2 * c1 * c2
    f[2, 0] = -e1 * c1 * c2 + e2 * s1 * s2
    f[3, 0] = -e1 * c1 * s2 - e2 * s1 * c2
    rest = a[2:]
    f[0, 1:] = rest * c1 * c2
    f[1, 1:] = rest * c1 * s2
    f[2, 1:] = rest * s1 * c2
    f[3, 1:] = rest * s1 * s2
    p = (np.abs(f) ** 2).sum(axis=1)
    return f, p


def wclass_single_measured_coeffs(a: np.ndarray, theta: float, phi: float):
    """Measure qubit 0 of a three-qubit W-class state; exact coefficients."""
    a = np.asarray(a, dtype=np.complex128)
    c, s = np.cos(theta / 2.0), np.sin(theta / 2.0)
    em = np.exp(-1j * phi)
    f = np.zeros((2, 3), dtype=np.complex128)
    f[0, 0] = a[0] * c + a[1] * em * s
    f[1, 0] = a[0] * s - a[1] * em * c
    f[0, 1] = a[2] * c
    f[1, 1] = a[2] * s
    f[0, 2] = a[3] * c
    f[1, 2] = a[3] * s
    p = (np.abs(f) ** 2).sum(axis=1)
    return f, p


def measured_amplitudes(state: PureState, tri: Tripartition, basis: MeasurementBasis, k: int):
    """Unnormalized post-measurement amplitudes on A via the hot kernel."""
    psi = permute_qubits(state, list(tri.canonical_order())).amplitudes
    return np.asarray(
        kernels._measured_vector(
            np.ascontiguousarray(psi), tri.n_measured, k, basis.flat()
        )
    )


def _single_excitation_components(vec: np.ndarray, n_a: int) -> np.ndarray:
    """Project onto (no excitation, one excitation on qubit j) components."""
    out = np.zeros(n_a + 1, dtype=np.complex128)
    out[0] = vec[0]
    for j in range(n_a):
        out[j + 1] = vec[1 << (n_a - 1 - j)]
    return out


# ---------------------------------------------------------------------------
# suites


def _suite_measurement_forms(seed: int, draws: int = 60) -> list[CheckResult]:
    rng = spawn_rng(seed, 1)
    worst1 = worst2 = worstw = 0.0
    for _ in range(draws):
        n = int(rng.integers(3, 7))
        a = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        a /= np.linalg.norm(a)
        theta = rng.uniform(0, np.pi)
        phi = rng.uniform(0, 2 * np.pi)
        st = make_gw(GWParams(n, a))
        tri = Tripartition((1,), tuple(range(2, n)), (0,))
        basis = MeasurementBasis(((theta, phi),))
        f, p = gw_single_measured_coeffs(a, theta, phi)
        for k in range(2):
            vec = measured_amplitudes(st, tri, basis, k)
            comp = _single_excitation_components(vec, n - 1)
            worst1 = max(worst1, np.abs(comp - f[k]).max())
            worst1 = max(worst1, abs(float(np.vdot(vec, vec).real) - p[k]))

        if n >= 4:
            th2 = rng.uniform(0, np.pi)
            ph2 = rng.uniform(0, 2 * np.pi)
            tri2 = Tripartition((2,), tuple(range(3, n)), (0, 1))
            basis2 = MeasurementBasis(((theta, phi), (th2, ph2)))
            f2, p2 = gw_two_measured_coeffs(a, theta, phi, th2, ph2)
            for k in range(4):
                vec = measured_amplitudes(st, tri2, basis2, k)
                comp = _single_excitation_components(vec, n - 2)
                worst2 = max(worst2, np.abs(comp - f2[k]).max())
                worst2 = max(worst2, abs(float(np.vdot(vec, vec).real) - p2[k]))

        aw = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        aw /= np.linalg.norm(aw)
        stw = make_wclass(WClassParams(aw))
        triw = Tripartition((1,), (2,), (0,))
        fw, pw = wclass_single_measured_coeffs(aw, theta, phi)
        for k in range(2):
            vec = measured_amplitudes(stw, triw, basis, k)
            comp = _single_excitation_components(vec, 2)
            worstw = max(worstw, np.abs(comp - fw[k]).max())
            worstw = max(worstw, abs(float(np.vdot(vec, vec).real) - pw[k]))
    tol = 1e-12
    return [
        CheckResult("single-qubit measured coefficients", worst1 <= tol, f"max dev {worst1:.2e}"),
        CheckResult("two-qubit measured coefficients", worst2 <= tol, f"max dev {worst2:.2e}"),
        CheckResult("wclass measured coefficients", worstw <= tol, f"max dev {worstw:.2e}"),
    ]


def _suite_negativity_forms(seed: int, draws: int = 60) -> list[CheckResult]:
    rng = spawn_rng(seed, 2)
    tol = 1e-8
    out = []

    worst = 0.0
    for _ in range(draws):
        n = int(rng.integers(2, 8))
        st = haar_family("gghz", n, rng)
        cut_size = int(rng.integers(1, n))
        cut = tuple(sorted(rng.choice(n, size=cut_size, replace=False).tolist()))
        closed = gghz_negativity(st.amplitudes[0])
        worst = max(worst, abs(closed - negativity(st, cut)))
    out.append(CheckResult("gghz cut negativity closed form", worst <= tol, f"max dev {worst:.2e}"))

    worst = 0.0
    for _ in range(draws):
        n = int(rng.integers(3, 8))
        a = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        a /= np.linalg.norm(a)
        st = make_gw(GWParams(n, a))
        cut_size = int(rng.integers(1, n))
        cut = tuple(sorted(rng.choice(n, size=cut_size, replace=False).tolist()))
        worst = max(worst, abs(gw_negativity(a, cut) - negativity(st, cut)))
    out.append(CheckResult("gw cut negativity closed form", worst <= tol, f"max dev {worst:.2e}"))

    worst = 0.0
    for _ in range(draws):
        a = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        a /= np.linalg.norm(a)
        st = make_wclass(WClassParams(a))
        for q in range(3):
            worst = max(worst, abs(wclass_negativity(a, q) - negativity(st, (q,))))
    out.append(
        CheckResult("wclass cut negativity closed form", worst <= tol, f"max dev {worst:.2e}")
    )

    worst = 0.0
    for n in range(2, 9):
        for k in range(n + 1):
            st = make_dicke(DickeParams(n, k))
            closed = dicke_negativity(n, k)
            worst = max(worst, abs(closed - negativity(st, (0,))))
    out.append(
        CheckResult("dicke 1-vs-rest negativity closed form", worst <= tol, f"max dev {worst:.2e}")
    )
    return out


def _random_tripartition(n: int, rng) -> Tripartition:
    while True:
        nb = int(rng.integers(1, min(4, n - 2) + 1))
        perm = rng.permutation(n)
        b = tuple(sorted(perm[:nb].tolist()))
        rest = perm[nb:]
        na1 = int(rng.integers(1, rest.size))
        a1 = tuple(sorted(rest[:na1].tolist()))
        a2 = tuple(sorted(rest[na1:].tolist()))
        if a1 and a2:
            return Tripartition(a1, a2, b)


def _suite_equality_family(seed: int, draws: int = 30) -> list[CheckResult]:
    rng = spawn_rng(seed, 3)
    worst = 0.0
    worst_noisy = 0.0
    for _ in range(draws):
        n = int(rng.integers(3, 7))
        st = haar_family("gghz", n, rng)
        tri = _random_tripartition(n, rng)
        quantities = [
            maximize_le(st, tri).value,
            negativity(st, tri.part_b),
            negativity(st, tri.part_a1),
            negativity(st, tri.part_a2),
        ]
        worst = max(worst, max(quantities) - min(quantities))
        if n <= 5:
            kind = "markovian" if rng.random() < 0.5 else "non_markovian"
            spec = NoiseSpec(q=float(rng.uniform(0, 0.5)), alpha=float(rng.uniform(0, 1)), kind=kind)
            rho = apply_phase_flip(st, spec)
            quantities = [
                maximize_le(rho, tri).value,
                negativity(rho, tri.part_b),
                negativity(rho, tri.part_a1),
                negativity(rho, tri.part_a2),
            ]
            worst_noisy = max(worst_noisy, max(quantities) - min(quantities))
    return [
        CheckResult("gghz four-way equality", worst <= 1e-7, f"max spread {worst:.2e}"),
        CheckResult(
            "gghz four-way equality under noise", worst_noisy <= 1e-7, f"max spread {worst_noisy:.2e}"
        ),
    ]


def _suite_kraus(seed: int) -> list[CheckResult]:
    rng = spawn_rng(seed, 4)
    worst = 0.0
    for n in range(1, 5):
        for kind in ("markovian", "non_markovian"):
            for q in (0.0, 0.15, 0.5, 0.9, 1.0):
                spec = NoiseSpec(q=q, alpha=0.7, kind=kind)
                z = rng.standard_normal(2**n) + 1j * rng.standard_normal(2**n)
                st = PureState(n, z / np.linalg.norm(z))
                fast = apply_phase_flip(st, spec).matrix
                slow = kraus_channel_reference(st, spec).matrix
                worst = max(worst, np.abs(fast - slow).max())
    return [
        CheckResult(
            "analytic dephasing matches operator sum", worst <= 1e-14, f"max dev {worst:.2e}"
        )
    ]


def _suite_bound_sample(seed: int, draws: int = 150) -> list[CheckResult]:
    rng = spawn_rng(seed, 5)
    out = []
    for family, nq in (("gw", 4), ("wclass", 3), ("ghzclass", 3)):
        for q in (0.0, 0.15):
            spec = NoiseSpec(q=q) if q else None
            n_bad = 0
            worst_margin = np.inf
            for i in range(draws):
                st = haar_family(family, nq, rng)
                tri = Tripartition((1,), tuple(range(2, nq)), (0,))
                report = check_state(st, tri, family, spec, state_id=str(i))
                for c in report.checks:
                    worst_margin = min(worst_margin, c.margin)
                    if not c.satisfied:
                        n_bad += 1
            out.append(
                CheckResult(
                    f"{family} bounds hold (q={q})",
                    n_bad == 0,
                    f"{n_bad} violations, min margin {worst_margin:.2e}",
                )
            )
    return out


def _suite_average_invariance(seed: int, draws: int = 40) -> list[CheckResult]:
    rng = spawn_rng(seed, 6)
    worst_spread = 0.0
    worst_prob = 0.0
    worst_mono = -np.inf
    for _ in range(draws):
        n = int(rng.integers(3, 6))
        a = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        a /= np.linalg.norm(a)
        st = make_gw(GWParams(n, a))
        tri = Tripartition((1,), tuple(range(2, n)), (0,))
        vals = []
        for _ in range(4):
            basis = MeasurementBasis(((rng.uniform(0, np.pi), rng.uniform(0, 2 * np.pi)),))
            vals.append(average_entanglement(st, tri, basis))
        worst_spread = max(worst_spread, max(vals) - min(vals))

        hs = haar_family("haar", n, rng)
        res = maximize_le(hs, tri)
        probs = np.array([p for p, _ in res.per_outcome])
        worst_prob = max(worst_prob, abs(probs.sum() - 1.0))
        mono = res.value - min(negativity(hs, tri.part_a1), negativity(hs, tri.part_a2))
        worst_mono = max(worst_mono, mono)
    return [
        CheckResult(
            "gw average is basis independent", worst_spread <= 1e-10, f"spread {worst_spread:.2e}"
        ),
        CheckResult(
            "outcome probabilities sum to one", worst_prob <= 1e-10, f"max dev {worst_prob:.2e}"
        ),
        CheckResult(
            "monotonicity of localized entanglement",
            worst_mono <= 1e-9,
            f"max excess {worst_mono:.2e}",
        ),
    ]


def _suite_scaling(seed: int) -> list[CheckResult]:
    rng = spawn_rng(seed, 7)
    worst_g = worst_w = 0.0
    for n in (3, 4, 5):
        gg = make_gghz(GGHZParams(n, 0.6, 0.8))
        a = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        a /= np.linalg.norm(a)
        gw = make_gw(GWParams(n, a))
        tri = Tripartition((1,), tuple(range(2, n)), (0,))
        le_g0 = maximize_le(gg, tri).value
        le_w0 = maximize_le(gw, tri).value
        for q in (0.1, 0.3):
            spec = NoiseSpec(q=q)
            worst_g = max(
                worst_g,
                abs(maximize_le(apply_phase_flip(gg, spec), tri).value - (1 - q) ** n * le_g0),
            )
            worst_w = max(
                worst_w,
                abs(maximize_le(apply_phase_flip(gw, spec), tri).value - (1 - q) ** 2 * le_w0),
            )
    return [
        CheckResult("gghz noise scaling (1-q)^N", worst_g <= 1e-8, f"max dev {worst_g:.2e}"),
        CheckResult("gw noise scaling (1-q)^2", worst_w <= 1e-8, f"max dev {worst_w:.2e}"),
    ]


SUITES = {
    "measurement-forms": _suite_measurement_forms,
    "negativity-forms": _suite_negativity_forms,
    "equality-family": _suite_equality_family,
    "kraus": _suite_kraus,
    "bound-sample": _suite_bound_sample,
    "average-invariance": _suite_average_invariance,
    "noise-scaling": _suite_scaling,
}


def run_suites(names, seed: int) -> tuple[list[tuple[str, CheckResult]], bool]:
    results = []
    ok = True
    for name in names:
        if name not in SUITES:
            raise ValueError(f"unknown suite {name!r}; available: {sorted(SUITES)}")
        for res in SUITES[name](seed):
            results.append((name, res))
            ok = ok and res.passed
    return results, ok
