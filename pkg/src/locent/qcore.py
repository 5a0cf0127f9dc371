"""Dense linear algebra over multi-qubit Hilbert spaces.

State and operator containers plus the partial trace / partial transpose /
negativity primitives.  Everything here is plain, vectorized numpy: this
module is the slow-but-obviously-correct reference layer that the fast
kernels are tested against, so it deliberately shares no code with
:mod:`locent.kernels`.

Index convention: qubit 0 is the most significant bit of the computational
basis index, so ``|q0 q1 ... q_{N-1}>`` maps to index ``sum q_i 2**(N-1-i)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

NORM_ATOL = 1e-12
HERM_ATOL = 1e-12
TRACE_ATOL = 1e-12
PSD_ATOL = 1e-10
EPS_EIG = 1e-12

MAX_DM_QUBITS = 14
MAX_PURE_QUBITS = 20


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class PureState:
    """Normalized complex amplitude vector over n_qubits qubits."""

    n_qubits: int
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValueError("n_qubits must be positive")
        if self.n_qubits > MAX_PURE_QUBITS:
            raise ValueError(f"pure-state budget is {MAX_PURE_QUBITS} qubits")
        amps = np.ascontiguousarray(self.amplitudes, dtype=np.complex128)
        if amps.shape != (2**self.n_qubits,):
            raise ValueError(
                f"amplitude vector must have length 2**{self.n_qubits}, got shape {amps.shape}"
            )
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > 1e-9:
            raise ValueError(f"state is not normalized: |norm - 1| = {abs(norm - 1.0):.3g}")
        if abs(norm - 1.0) > NORM_ATOL:
            amps = amps / norm
        object.__setattr__(self, "amplitudes", _freeze(amps))

    @property
    def dim(self) -> int:
        return 2**self.n_qubits

    def projector(self) -> "DensityMatrix":
        return DensityMatrix(
            self.n_qubits, np.outer(self.amplitudes, self.amplitudes.conj()), validate=False
        )


@dataclass(frozen=True)
class DensityMatrix:
    """Unit-trace positive-semidefinite Hermitian matrix over n_qubits."""

    n_qubits: int
    matrix: np.ndarray = field(repr=False)
    validate: bool = True

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValueError("n_qubits must be positive")
        if self.n_qubits > MAX_DM_QUBITS:
            raise ValueError(f"density-matrix budget is {MAX_DM_QUBITS} qubits")
        mat = np.ascontiguousarray(self.matrix, dtype=np.complex128)
        d = 2**self.n_qubits
        if mat.shape != (d, d):
            raise ValueError(f"matrix must be {d}x{d}, got {mat.shape}")
        if self.validate:
            herm_dev = np.abs(mat - mat.conj().T).max()
            if herm_dev > HERM_ATOL:
                raise ValueError(f"matrix is not Hermitian: max deviation {herm_dev:.3g}")
            tr_dev = abs(np.trace(mat).real - 1.0)
            if tr_dev > TRACE_ATOL:
                raise ValueError(f"trace differs from 1 by {tr_dev:.3g}")
            wmin = np.linalg.eigvalsh(mat)[0]
            if wmin < -PSD_ATOL:
                raise ValueError(f"matrix is not PSD: min eigenvalue {wmin:.3g}")
        object.__setattr__(self, "matrix", _freeze(mat))

    @property
    def dim(self) -> int:
        return 2**self.n_qubits


@dataclass(frozen=True)
class Tripartition:
    """Disjoint qubit sets (A1, A2, B) covering all N qubits.

    B is the measured subsystem; entanglement is localized across A1:A2.
    """

    part_a1: tuple[int, ...]
    part_a2: tuple[int, ...]
    part_b: tuple[int, ...]

    def __post_init__(self):
        a1 = tuple(sorted(self.part_a1))
        a2 = tuple(sorted(self.part_a2))
        b = tuple(sorted(self.part_b))
        object.__setattr__(self, "part_a1", a1)
        object.__setattr__(self, "part_a2", a2)
        object.__setattr__(self, "part_b", b)
        n = len(a1) + len(a2) + len(b)
        combined = set(a1) | set(a2) | set(b)
        if len(combined) != n or combined != set(range(n)):
            raise ValueError("parts must be disjoint and cover qubits 0..N-1 exactly")
        if not a1 or not a2:
            raise ValueError("A1 and A2 must be non-empty")
        if not 0 < len(b) < n - 1:
            raise ValueError("B must hold between 1 and N-2 qubits")

    @property
    def n_qubits(self) -> int:
        return len(self.part_a1) + len(self.part_a2) + len(self.part_b)

    @property
    def n_measured(self) -> int:
        return len(self.part_b)

    def canonical_order(self) -> tuple[int, ...]:
        """Qubit permutation placing B first, then A1, then A2."""
        return self.part_b + self.part_a1 + self.part_a2


def _as_qubit_tuple(qubits, n: int) -> tuple[int, ...]:
    out = tuple(sorted(set(int(q) for q in qubits)))
    if any(q < 0 or q >= n for q in out):
        raise IndexError(f"qubit index out of range 0..{n - 1}: {out}")
    return out


def permute_qubits(psi: PureState, order) -> PureState:
    """Reorder qubits so new qubit j is old qubit order[j]."""
    order = list(order)
    if sorted(order) != list(range(psi.n_qubits)):
        raise ValueError("order must be a permutation of all qubits")
    amps = psi.amplitudes.reshape((2,) * psi.n_qubits).transpose(order).ravel()
    return PureState(psi.n_qubits, amps)


def permute_qubits_dm(rho: DensityMatrix, order) -> DensityMatrix:
    order = list(order)
    n = rho.n_qubits
    if sorted(order) != list(range(n)):
        raise ValueError("order must be a permutation of all qubits")
    axes = order + [n + q for q in order]
    mat = rho.matrix.reshape((2,) * (2 * n)).transpose(axes).reshape(rho.dim, rho.dim)
    return DensityMatrix(n, mat, validate=False)


def partial_trace(rho: DensityMatrix, keep) -> DensityMatrix:
    """Trace out every qubit not in ``keep``."""
    n = rho.n_qubits
    kept = _as_qubit_tuple(keep, n)
    if not kept:
        raise ValueError("keep set must be non-empty")
    traced = [q for q in range(n) if q not in kept]
    dk = 2 ** len(kept)
    dt = 2 ** len(traced)
    axes = list(kept) + traced
    tensor = rho.matrix.reshape((2,) * (2 * n))
    tensor = tensor.transpose(axes + [n + a for a in axes]).reshape(dk, dt, dk, dt)
    reduced = np.einsum("abcb->ac", tensor)
    return DensityMatrix(len(kept), reduced, validate=False)


def _index_mask(qubits, n: int) -> int:
    mask = 0
    for q in qubits:
        mask |= 1 << (n - 1 - q)
    return mask


def partial_transpose(rho: DensityMatrix, transposed) -> np.ndarray:
    """Transpose the given qubits only; returns a plain Hermitian matrix."""
    n = rho.n_qubits
    qubits = _as_qubit_tuple(transposed, n)
    if not qubits:
        return rho.matrix.copy()
    mask = _index_mask(qubits, n)
    d = rho.dim
    inv = (d - 1) ^ mask
    idx = np.arange(d)
    r = idx[:, None]
    c = idx[None, :]
    out = np.empty((d, d), dtype=np.complex128)
    out[(r & inv) | (c & mask), (c & inv) | (r & mask)] = rho.matrix
    return out


def negativity(state: PureState | DensityMatrix, cut) -> float:
    """Twice the absolute sum of negative partial-transpose eigenvalues.

    ``cut`` is the qubit set defining the bipartition (cut vs. complement);
    this normalization gives 1 for a two-qubit Bell pair.  Eigenvalues in
    (-EPS_EIG, 0) count as zero.
    """
    rho = state.projector() if isinstance(state, PureState) else state
    qubits = _as_qubit_tuple(cut, rho.n_qubits)
    if len(qubits) in (0, rho.n_qubits):
        raise ValueError("cut must be a proper non-empty subset of the qubits")
    pt = partial_transpose(rho, qubits)
    w = np.linalg.eigvalsh(pt)
    return float(-2.0 * w[w < -EPS_EIG].sum() + 0.0)


def negativity_trace_norm(state: PureState | DensityMatrix, cut) -> float:
    """Same quantity via the trace norm of the partial transpose."""
    rho = state.projector() if isinstance(state, PureState) else state
    qubits = _as_qubit_tuple(cut, rho.n_qubits)
    pt = partial_transpose(rho, qubits)
    sv = np.linalg.svd(pt, compute_uv=False)
    return float(sv.sum() - 1.0)


def projector_state(theta: float, phi: float, outcome: int) -> PureState:
    """Single-qubit measurement-basis state for the given outcome.

    Outcome 0 gives cos(t/2)|0> + e^{i phi} sin(t/2)|1>, outcome 1 its
    orthogonal partner sin(t/2)|0> - e^{i phi} cos(t/2)|1>.
    """
    if not 0.0 <= theta <= np.pi:
        raise ValueError(f"theta must lie in [0, pi], got {theta}")
    if not 0.0 <= phi < 2.0 * np.pi:
        raise ValueError(f"phi must lie in [0, 2*pi), got {phi}")
    if outcome not in (0, 1):
        raise ValueError("outcome must be 0 or 1")
    c, s = np.cos(theta / 2.0), np.sin(theta / 2.0)
    e = np.exp(1j * phi)
    if outcome == 0:
        amps = np.array([c, e * s], dtype=np.complex128)
    else:
        amps = np.array([s, -e * c], dtype=np.complex128)
    return PureState(1, amps)
