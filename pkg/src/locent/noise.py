"""Independent single-qubit phase-flip channels, Markovian and non-Markovian.

Each qubit passes through the channel with Kraus operators
{sqrt(p0) I, sqrt(p1) sigma_z}; the N-qubit channel is their tensor product.
Acting on any density matrix, this multiplies each element by
(p0 - p1)**h, with h the Hamming distance between the row and column basis
indices, so the channel is applied analytically in O(4**N) instead of
summing 2**N Kraus terms.  The explicit operator-sum route is retained as a
verification oracle.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .localize import LocalizationResult, SearchConfig, maximize_le
from .qcore import DensityMatrix, PureState, Tripartition

KINDS = ("markovian", "non_markovian")


@dataclass(frozen=True)
class NoiseSpec:
    """Phase-flip channel parameters.

    q is the noise strength, alpha the memory (non-Markovianity) parameter;
    alpha is ignored for the Markovian kind.
    """

    q: float
    alpha: float = 0.0
    kind: str = "markovian"

    def __post_init__(self):
        if not 0.0 <= self.q <= 1.0:
            raise ValueError(f"q must lie in [0, 1], got {self.q}")
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must lie in [0, 1], got {self.alpha}")
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {self.kind!r}")


def kraus_probs(spec: NoiseSpec) -> tuple[float, float]:
    """Per-qubit probabilities (p0, p1) of identity vs. sigma_z.

    Both assignments sum to 1 exactly: the non-Markovian pair expands to
    p0 + p1 = 1 identically in q and alpha.
    """
    q = spec.q
    if spec.kind == "markovian":
        return 1.0 - q / 2.0, q / 2.0
    a = spec.alpha
    p0 = (1.0 - q / 2.0) * (1.0 - a * q / 2.0)
    p1 = (1.0 + a * (1.0 - q / 2.0)) * (q / 2.0)
    return p0, p1


def dephasing_factor(spec: NoiseSpec) -> float:
    """Signed per-qubit off-diagonal multiplier p0 - p1.

    Markovian: 1 - q.  Non-Markovian: crosses zero at the critical noise
    strength and is negative beyond it, producing the entanglement revival.
    """
    p0, p1 = kraus_probs(spec)
    return p0 - p1


def apply_phase_flip(state: PureState | DensityMatrix, spec: NoiseSpec) -> DensityMatrix:
    """Send every qubit through the phase-flip channel.

    Implemented as the analytic per-element dephasing; agrees with the
    explicit Kraus summation (see kraus_channel_reference) to machine
    precision.
    """
    from .qcore import MAX_DM_QUBITS

    n = state.n_qubits
    if n > MAX_DM_QUBITS:
        raise ValueError(f"density-matrix budget is {MAX_DM_QUBITS} qubits, got {n}")
    eta = dephasing_factor(spec)
    if isinstance(state, PureState):
        mat = np.outer(state.amplitudes, state.amplitudes.conj())
    else:
        mat = state.matrix
    d = 2**n
    idx = np.arange(d, dtype=np.uint32)
    ham = np.bitwise_count(idx[:, None] ^ idx[None, :]).astype(np.int64)
    powers = np.array([eta**h for h in range(n + 1)])
    return DensityMatrix(n, mat * powers[ham], validate=False)


def kraus_channel_reference(state: PureState | DensityMatrix, spec: NoiseSpec) -> DensityMatrix:
    """Explicit operator-sum evaluation, exponential in N; oracle use only."""
    n = state.n_qubits
    p0, p1 = kraus_probs(spec)
    if isinstance(state, PureState):
        rho0 = np.outer(state.amplitudes, state.amplitudes.conj())
    else:
        rho0 = state.matrix
    d = 2**n
    idx = np.arange(d)
    out = np.zeros((d, d), dtype=np.complex128)
    for alpha in range(2**n):
        prob = 1.0
        signs = np.ones(d)
        for i in range(n):
            bit = (alpha >> (n - 1 - i)) & 1
            prob *= p1 if bit else p0
            if bit:
                signs = signs * np.where((idx >> (n - 1 - i)) & 1, -1.0, 1.0)
        out += prob * (signs[:, None] * rho0 * signs[None, :])
    return DensityMatrix(n, out, validate=False)


def le_noisy(
    state: PureState,
    tri: Tripartition,
    spec: NoiseSpec,
    config: SearchConfig | None = None,
) -> LocalizationResult:
    """Localizable entanglement after the phase-flip channel on all qubits."""
    return maximize_le(apply_phase_flip(state, spec), tri, config)


def dephased_projector(psi: np.ndarray, n_qubits: int, eta: float) -> np.ndarray:
    """Raw dephased projector used by the batch kernels (no validation)."""
    return kernels.dephased_outer(np.ascontiguousarray(psi, dtype=np.complex128), eta, n_qubits)
