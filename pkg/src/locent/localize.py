"""Localizable entanglement via optimized local projective measurements.

Measurement of every qubit in B with per-qubit rank-1 projectors leaves the
A = A1+A2 subsystem in one of 2**|B| post-measurement states; the localized
entanglement is the probability-weighted negativity across A1:A2, maximized
over the 2|B| measurement angles.  The maximization runs multi-start
Nelder-Mead with three analytic seed bases (sigma-x, sigma-y, sigma-z on
every measured qubit) plus random starts, so it can never fall below the
seed bases' exact optima.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

import numpy as np

from . import kernels
from .qcore import (
    DensityMatrix,
    PureState,
    Tripartition,
    negativity,
    partial_trace,
    permute_qubits,
    permute_qubits_dm,
    projector_state,
)
from .states import DickeParams, GGHZParams, GWParams, WClassParams, spawn_rng

EPS_PROB = kernels.EPS_PROB
#: |delta1| below this counts as zero when classifying gain-vs-loss statistics.
DELTA1_ZERO_TOL = 1e-7

MAX_MEASURED_QUBITS = 4

SEED_LABELS = ("sigma_x", "sigma_y", "sigma_z")
_SEED_ANGLES = {
    "sigma_x": (np.pi / 2, 0.0),
    "sigma_y": (np.pi / 2, np.pi / 2),
    "sigma_z": (0.0, 0.0),
}


@dataclass(frozen=True)
class MeasurementBasis:
    """Per-qubit (theta, phi) pairs, ordered by ascending qubit index in B."""

    angles: tuple[tuple[float, float], ...]

    def __post_init__(self):
        angles = tuple((float(t), float(p)) for t, p in self.angles)
        for t, p in angles:
            if not 0.0 <= t <= np.pi + 1e-12:
                raise ValueError(f"theta must lie in [0, pi], got {t}")
            if not 0.0 <= p < 2.0 * np.pi + 1e-12:
                raise ValueError(f"phi must lie in [0, 2*pi), got {p}")
        object.__setattr__(self, "angles", angles)

    @classmethod
    def uniform(cls, label: str, n: int) -> "MeasurementBasis":
        """The same Pauli basis (sigma_x / sigma_y / sigma_z) on all n qubits."""
        return cls(tuple(_SEED_ANGLES[label] for _ in range(n)))

    def flat(self) -> np.ndarray:
        return np.array([v for pair in self.angles for v in pair], dtype=np.float64)


@dataclass(frozen=True)
class SearchConfig:
    """Multi-start Nelder-Mead budget (defaults are the library-wide policy).

    ``n_random_starts = None`` selects the measured policy: 3 random starts
    for single-qubit measurements (where the three analytic seeds already
    reach the optimum to within the convergence tolerance) and 8 for larger
    measured sets.
    """

    n_random_starts: int | None = None
    max_evals_per_start: int = kernels.NM_MAX_EVAL
    fatol: float = kernels.NM_FATOL
    xatol: float = kernels.NM_XATOL
    seed: int = 0

    def random_starts_for(self, n_measured: int) -> int:
        if self.n_random_starts is not None:
            return self.n_random_starts
        return 3 if n_measured == 1 else 8


@dataclass(frozen=True)
class LocalizationResult:
    value: float
    optimal_basis: MeasurementBasis
    per_outcome: tuple[tuple[float, float], ...]
    evaluations: int
    per_start: tuple[tuple[str, float], ...] = field(default=())
    budget_exhausted: bool = False

    def winning_start(self, tol: float = 1e-9) -> str:
        """Label of the first start whose polished value attains the optimum."""
        for label, val in self.per_start:
            if val >= self.value - tol:
                return label
        return self.per_start[0][0] if self.per_start else ""

    def seed_attains_optimum(self, label: str, tol: float = 1e-9) -> bool:
        for lab, val in self.per_start:
            if lab == label:
                return val >= self.value - tol
        return False


def _canonical_arrays(state, tri: Tripartition):
    order = list(tri.canonical_order())
    if isinstance(state, PureState):
        psi = permute_qubits(state, order).amplitudes
        rho = np.zeros((1, 1), dtype=np.complex128)
        return psi, rho, False
    psi = np.zeros(1, dtype=np.complex128)
    rho = permute_qubits_dm(state, order).matrix
    return psi, rho, True


def _check_tri(state, tri: Tripartition):
    if state.n_qubits != tri.n_qubits:
        raise ValueError("tripartition does not cover the state's qubits")


def measurement_operator(tri: Tripartition, basis: MeasurementBasis, outcome: int) -> np.ndarray:
    """Dense M_k = I_A (x) |b_k><b_k| in the original qubit order.

    Reference construction used for oracle tests; the hot paths contract
    the measured indices directly instead.
    """
    n = tri.n_qubits
    nb = tri.n_measured
    if not 0 <= outcome < 2**nb:
        raise ValueError("outcome index out of range")
    op = np.array([[1.0 + 0.0j]])
    for q in range(n):
        if q in tri.part_b:
            j = tri.part_b.index(q)
            kj = (outcome >> (nb - 1 - j)) & 1
            theta, phi = basis.angles[j]
            b = projector_state(theta, phi, kj).amplitudes
            factor = np.outer(b, b.conj())
        else:
            factor = np.eye(2, dtype=np.complex128)
        op = np.kron(op, factor)
    return op


def post_measurement(
    state: PureState | DensityMatrix, tri: Tripartition, basis: MeasurementBasis, outcome: int
) -> tuple[float, DensityMatrix | None]:
    """Outcome probability and normalized post-measurement state on A.

    The returned density matrix lives on the qubits of A1+A2 in ascending
    original index order.  Outcomes with probability below EPS_PROB are
    numerically undefined: (p, None) is returned and such outcomes are
    excluded from averages.
    """
    _check_tri(state, tri)
    if len(basis.angles) != tri.n_measured:
        raise ValueError("basis must supply one angle pair per measured qubit")
    op = measurement_operator(tri, basis, outcome)
    keep = sorted(tri.part_a1 + tri.part_a2)
    if isinstance(state, PureState):
        vec = op @ state.amplitudes
        p = float(np.vdot(vec, vec).real)
        if p < EPS_PROB:
            return p, None
        full = DensityMatrix(tri.n_qubits, np.outer(vec, vec.conj()) / p, validate=False)
    else:
        mat = op @ state.matrix @ op.conj().T
        p = float(np.trace(mat).real)
        if p < EPS_PROB:
            return p, None
        full = DensityMatrix(tri.n_qubits, mat / p, validate=False)
    return p, partial_trace(full, keep)


def average_entanglement(
    state: PureState | DensityMatrix, tri: Tripartition, basis: MeasurementBasis
) -> float:
    """Sum over outcomes of p_k times the A1:A2 negativity of the k-th state."""
    _check_tri(state, tri)
    if len(basis.angles) != tri.n_measured:
        raise ValueError("basis must supply one angle pair per measured qubit")
    psi, rho, mixed = _canonical_arrays(state, tri)
    return float(
        kernels.objective(
            psi, rho, mixed, tri.n_qubits, tri.n_measured, len(tri.part_a1), basis.flat()
        )
    )


def _canonicalize_angles(flat: np.ndarray) -> np.ndarray:
    """Reduce each (theta, phi) modulo the exact projector-pair symmetries.

    theta -> 2*pi - theta with phi -> phi + pi is a global-phase symmetry;
    theta -> pi - theta with phi -> phi + pi relabels the two outcomes.
    The canonical representative has theta in [0, pi/2] (phi = 0 when the
    basis is outcome-degenerate at theta = 0).
    """
    out = flat.copy()
    two_pi = 2.0 * np.pi
    for j in range(out.size // 2):
        t = out[2 * j] % two_pi
        p = out[2 * j + 1]
        if t > np.pi:
            t = two_pi - t
            p += np.pi
        if t > np.pi / 2:
            t = np.pi - t
            p += np.pi
        p %= two_pi
        if t < 1e-12:
            t, p = 0.0, 0.0
        out[2 * j] = t
        out[2 * j + 1] = p
    return out


def _build_starts(nb: int, config: SearchConfig) -> tuple[np.ndarray, tuple[str, ...]]:
    rng = spawn_rng(config.seed, 0x5747)
    rows = [np.tile(_SEED_ANGLES[lab], nb) for lab in SEED_LABELS]
    labels = list(SEED_LABELS)
    for i in range(config.random_starts_for(nb)):
        thetas = rng.uniform(0.0, np.pi, nb)
        phis = rng.uniform(0.0, 2.0 * np.pi, nb)
        rows.append(np.column_stack([thetas, phis]).ravel())
        labels.append(f"random_{i}")
    return np.array(rows, dtype=np.float64), tuple(labels)


def maximize_le(
    state: PureState | DensityMatrix,
    tri: Tripartition,
    config: SearchConfig | None = None,
) -> LocalizationResult:
    """Localizable entanglement across A1:A2 under measurements on B."""
    _check_tri(state, tri)
    nb = tri.n_measured
    if nb > MAX_MEASURED_QUBITS:
        raise ValueError(
            f"measuring {nb} qubits exceeds the optimization budget "
            f"({MAX_MEASURED_QUBITS} qubits, 2*{MAX_MEASURED_QUBITS} angles)"
        )
    config = config or SearchConfig()
    psi, rho, mixed = _canonical_arrays(state, tri)
    starts, labels = _build_starts(nb, config)
    m = len(tri.part_a1)
    best, best_x, per_start, evals = kernels.le_multistart(
        psi,
        rho,
        mixed,
        tri.n_qubits,
        nb,
        m,
        starts,
        config.max_evals_per_start,
        config.fatol,
        config.xatol,
    )
    canon = _canonicalize_angles(np.asarray(best_x))
    probs, ents = kernels.outcome_table(psi, rho, mixed, tri.n_qubits, nb, m, canon)
    probs = np.asarray(probs)
    ents = np.asarray(ents)
    value = float((probs * ents).sum())
    basis = MeasurementBasis(tuple((canon[2 * j], canon[2 * j + 1]) for j in range(nb)))
    n_starts = starts.shape[0]
    return LocalizationResult(
        value=value,
        optimal_basis=basis,
        per_outcome=tuple(zip(probs.tolist(), ents.tolist())),
        evaluations=int(evals),
        per_start=tuple(zip(labels, np.asarray(per_start).tolist())),
        budget_exhausted=bool(evals >= n_starts * config.max_evals_per_start),
    )


def pure_negativity(state: PureState, cut) -> float:
    """Cut negativity of a pure state via its Schmidt coefficients.

    Fast path for large pure states (the dense partial-transpose route in
    :func:`locent.qcore.negativity` is quadratic in Hilbert-space dimension);
    equal to the reference value within eigensolver tolerance.
    """
    n = state.n_qubits
    qubits = sorted(set(int(q) for q in cut))
    if not 0 < len(qubits) < n:
        raise ValueError("cut must be a proper non-empty subset of the qubits")
    if any(q < 0 or q >= n for q in qubits):
        raise IndexError("qubit index out of range")
    mask = 0
    for q in qubits:
        mask |= 1 << (n - 1 - q)
    return float(kernels.pure_neg_mask(np.ascontiguousarray(state.amplitudes), n, mask))


def delta1(
    state: PureState | DensityMatrix, tri: Tripartition, config: SearchConfig | None = None
) -> float:
    """Localized entanglement minus the pre-measurement A1A2:B negativity."""
    le = maximize_le(state, tri, config).value
    return le - negativity(state, tri.part_b)


def delta2(
    state: PureState | DensityMatrix, tri: Tripartition, config: SearchConfig | None = None
) -> float:
    """Localized entanglement minus min over the two one-vs-rest losses.

    Entanglement monotonicity forbids positive values beyond numerical
    tolerance.
    """
    le = maximize_le(state, tri, config).value
    return le - min(negativity(state, tri.part_a1), negativity(state, tri.part_a2))


def closed_le_gghz(p: GGHZParams) -> float:
    """Exact localizable entanglement of a generalized GHZ state (any cut)."""
    a0 = abs(p.a0)
    return 2.0 * a0 * np.sqrt(max(1.0 - a0 * a0, 0.0))


def closed_le_gw(p: GWParams, tri: Tripartition) -> float:
    """Exact localizable entanglement of a generalized W state.

    The probability-weighted post-measurement negativity is independent of
    the measurement basis, so the maximum equals the plain average:
    2 * sqrt(sum_{A1} |a_i|^2 * sum_{A2} |a_i|^2).
    """
    if tri.n_qubits != p.n_qubits:
        raise ValueError("tripartition size mismatch")
    w = np.abs(p.a) ** 2
    s1 = w[list(tri.part_a1)].sum()
    s2 = w[list(tri.part_a2)].sum()
    return 2.0 * np.sqrt(s1 * s2)


def closed_le_dicke(p: DickeParams) -> float:
    """Exact localizable entanglement of a Dicke state, one measured qubit.

    The optimum is attained in the sigma-z basis, which collapses onto the
    two neighboring Dicke layers of N-1 qubits; A1 holds one qubit.
    """
    n, k = p.n_qubits, p.n_excited
    if n < 3:
        raise ValueError("need at least 3 qubits for a tripartition")

    def layer_neg(nn: int, kk: int) -> float:
        if kk <= 0 or kk >= nn:
            return 0.0
        return 2.0 * np.sqrt(comb(nn - 1, kk) * comb(nn - 1, kk - 1)) / comb(nn, kk)

    return ((n - k) / n) * layer_neg(n - 1, k) + (k / n) * layer_neg(n - 1, k - 1)


def closed_le_wclass(p: WClassParams) -> float:
    """Exact localizable entanglement of a three-qubit W-class state.

    B = qubit 0 measured, A1 = qubit 1, A2 = qubit 2; the average is
    basis-independent, equal to 2 |a2| |a3|.
    """
    return 2.0 * abs(p.a[2]) * abs(p.a[3])
