"""Spin-1/2 chain ground states: TXY and XXZ-in-field models with PBC.

The Hamiltonian is built in units of the xy coupling (J_xy = 1), with
two-spin couplings carrying a factor 1/2 so that the dimensionless field
g = h / J_xy hits the known critical points: the transverse-XY transition
at g = 1 for every anisotropy, and the XXZ saturation at g = +/-(1 + Delta)
(verified in the test suite via the entanglement drop).  Matrices are real
symmetric and stored sparse; ground states come from ARPACK with a fixed,
deterministic start vector (dense eigensolve below 10 sites), so repeated
runs are bit-identical.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sparse
import scipy.sparse.linalg as spla

from .localize import SearchConfig, maximize_le, pure_negativity
from .qcore import PureState, Tripartition
from .states import spawn_rng

MIN_SITES = 2
MAX_SITES = 14
DENSE_CUTOFF_SITES = 10
#: near-degeneracy threshold, as a fraction of the spectral-width bound
DEGENERACY_REL_TOL = 1e-10

MODELS = ("txy", "xxz")

#: windows used for the scatter/fit experiments, deep on both sides of the
#: TXY transition at g = 1; 31 uniform points each
DEFAULT_WINDOWS = ((0.2, 0.8, 31), (1.2, 1.8, 31))


@dataclass(frozen=True)
class SpinModelSpec:
    """One chain configuration: model, anisotropy, and uniform field g."""

    n_sites: int
    model: str
    g: float
    gamma: float = 0.0
    delta: float = 0.0

    def __post_init__(self):
        if not MIN_SITES <= self.n_sites <= MAX_SITES:
            raise ValueError(f"n_sites must lie in {MIN_SITES}..{MAX_SITES}")
        if self.model not in MODELS:
            raise ValueError(f"model must be one of {MODELS}")
        if self.model == "txy":
            if not 0.0 < self.gamma <= 1.0:
                raise ValueError("txy needs anisotropy gamma in (0, 1]")
            if self.delta != 0.0:
                raise ValueError("delta applies to the xxz model only")
        else:
            if not -1.0 <= self.delta <= 1.0:
                raise ValueError("xxz needs delta in [-1, 1]")
            if self.gamma != 0.0:
                raise ValueError("gamma applies to the txy model only")


@dataclass(frozen=True)
class DisorderSpec:
    """Gaussian field disorder: g ~ Normal(mean_g, sigma_g), quenched."""

    mean_g: float
    sigma_g: float
    n_realizations: int
    seed: int

    def __post_init__(self):
        if self.sigma_g < 0.0:
            raise ValueError("sigma_g must be non-negative")
        if self.n_realizations < 1:
            raise ValueError("need at least one realization")


@dataclass(frozen=True)
class GroundStateResult:
    energy: float
    state: PureState
    degenerate: bool
    gap: float


def build_hamiltonian(spec: SpinModelSpec, field_values=None) -> sparse.csr_matrix:
    """Sparse real-symmetric Hamiltonian; per-site fields override uniform g."""
    n = spec.n_sites
    d = 1 << n
    if field_values is None:
        gs = np.full(n, float(spec.g))
    else:
        gs = np.asarray(field_values, dtype=np.float64)
        if gs.shape != (n,):
            raise ValueError("need one field value per site")
    if spec.model == "txy":
        cxx = 0.5 * (1.0 + spec.gamma)
        cyy = 0.5 * (1.0 - spec.gamma)
        czz = 0.0
    else:
        cxx = cyy = 0.5
        czz = 0.5 * spec.delta

    idx = np.arange(d)
    bit = [(idx >> (n - 1 - q)) & 1 for q in range(n)]
    z = [1.0 - 2.0 * b for b in bit]

    diag = np.zeros(d)
    for q in range(n):
        diag += gs[q] * z[q]
        if czz != 0.0:
            diag += czz * z[q] * z[(q + 1) % n]

    rows = [idx]
    cols = [idx]
    vals = [diag]
    for q in range(n):
        r = (q + 1) % n
        flip = (1 << (n - 1 - q)) | (1 << (n - 1 - r))
        # sigma_x sigma_x contributes cxx on every double flip; sigma_y
        # sigma_y contributes -cyy when the two bits agree, +cyy otherwise.
        same = bit[q] == bit[r]
        vals.append(np.where(same, cxx - cyy, cxx + cyy))
        rows.append(idx)
        cols.append(idx ^ flip)
    mat = sparse.coo_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(d, d)
    )
    return mat.tocsr()


def _spectral_width_bound(ham: sparse.csr_matrix) -> float:
    row_sums = np.abs(ham).sum(axis=1)
    return 2.0 * float(row_sums.max())


def _default_v0(d: int) -> np.ndarray:
    # fixed pseudo-random direction so ARPACK runs are reproducible
    return spawn_rng(0xED04).standard_normal(d)


def ground_state(
    spec: SpinModelSpec, field_values=None, v0: np.ndarray | None = None
) -> GroundStateResult:
    """Lowest eigenpair; flags near-degenerate ground spaces.

    Degenerate ground spaces are flagged, not symmetrized: the solver's
    deterministic eigenvector is returned as-is.  ``v0`` warm-starts the
    Lanczos iteration (useful across nearby disorder realizations).
    """
    ham = build_hamiltonian(spec, field_values)
    d = ham.shape[0]
    if spec.n_sites < DENSE_CUTOFF_SITES:
        w, v = np.linalg.eigh(ham.toarray())
        e0, e1 = w[0], w[1]
        vec = v[:, 0]
    else:
        if v0 is None:
            v0 = _default_v0(d)
        try:
            # tol is ARPACK's relative residual bound; 1e-13 is the practical
            # floor for near-degenerate pairs (tol=0 -> machine eps stalls)
            w, v = spla.eigsh(ham, k=2, which="SA", v0=v0, tol=1e-13, ncv=40, maxiter=20000)
        except spla.ArpackNoConvergence:
            w, v = np.linalg.eigh(ham.toarray())
        order = np.argsort(w)
        e0, e1 = w[order[0]], w[order[1]]
        vec = v[:, order[0]]
    gap = float(e1 - e0)
    width = _spectral_width_bound(ham)
    state = PureState(spec.n_sites, vec.astype(np.complex128))
    return GroundStateResult(float(e0), state, gap < DEGENERACY_REL_TOL * width, gap)


@dataclass(frozen=True)
class SpinPoint:
    """Entanglement quantities of one ground state for a fixed tripartition."""

    g: float
    energy: float
    e_ab: float
    e_a1: float
    e_a2: float
    le: float
    degenerate: bool

    @property
    def delta1(self) -> float:
        return self.le - self.e_ab

    @property
    def delta2(self) -> float:
        return self.le - min(self.e_a1, self.e_a2)

    @property
    def pbc_deviation(self) -> float:
        """|E_AB - E_A1|; vanishes for adjacent single-qubit B, A1 under PBC."""
        return abs(self.e_ab - self.e_a1)


def _check_spin_tri(tri: Tripartition):
    if len(tri.part_b) != 1 or len(tri.part_a1) != 1:
        raise ValueError("spin-chain experiments use single-qubit B and A1")


def scatter_point(
    spec: SpinModelSpec,
    tri: Tripartition,
    config: SearchConfig | None = None,
    field_values=None,
    v0: np.ndarray | None = None,
) -> SpinPoint:
    """Ground-state entanglement quantities at one parameter point."""
    _check_spin_tri(tri)
    if tri.n_qubits != spec.n_sites:
        raise ValueError("tripartition size must match the chain length")
    gs = ground_state(spec, field_values, v0)
    psi = gs.state
    return SpinPoint(
        g=spec.g,
        energy=gs.energy,
        e_ab=pure_negativity(psi, tri.part_b),
        e_a1=pure_negativity(psi, tri.part_a1),
        e_a2=pure_negativity(psi, tri.part_a2),
        le=maximize_le(psi, tri, config).value,
        degenerate=gs.degenerate,
    )


_QUANTITIES = ("le", "e_ab", "e_a1", "e_a2", "delta1", "delta2")


def _point_quantity(point: SpinPoint, tag: str) -> float:
    if tag not in _QUANTITIES:
        raise ValueError(f"unknown quantity {tag!r}; expected one of {_QUANTITIES}")
    return float(getattr(point, tag))


def disorder_realizations(
    dspec: DisorderSpec,
    spec: SpinModelSpec,
    tri: Tripartition,
    config: SearchConfig | None = None,
) -> list[SpinPoint]:
    """Solve every disorder realization at one mean-field point.

    Gaussian draws are untruncated, one independent field value per site.
    sigma_g = 0 short-circuits to the single ordered evaluation.  The
    previous realization's ground state warm-starts the next solve.
    """
    _check_spin_tri(tri)
    base = SpinModelSpec(
        spec.n_sites, spec.model, dspec.mean_g, gamma=spec.gamma, delta=spec.delta
    )
    if dspec.sigma_g == 0.0:
        return [scatter_point(base, tri, config)]
    rng = spawn_rng(dspec.seed, 0xD150)
    points = []
    v0 = None
    for _ in range(dspec.n_realizations):
        fields = rng.normal(dspec.mean_g, dspec.sigma_g, spec.n_sites)
        gs = ground_state(base, field_values=fields, v0=v0)
        v0 = gs.state.amplitudes.real.copy()
        psi = gs.state
        points.append(
            SpinPoint(
                g=dspec.mean_g,
                energy=gs.energy,
                e_ab=pure_negativity(psi, tri.part_b),
                e_a1=pure_negativity(psi, tri.part_a1),
                e_a2=pure_negativity(psi, tri.part_a2),
                le=maximize_le(psi, tri, config).value,
                degenerate=gs.degenerate,
            )
        )
    return points


def quenched_average(
    dspec: DisorderSpec,
    spec: SpinModelSpec,
    tri: Tripartition,
    quantity: str,
    config: SearchConfig | None = None,
) -> tuple[float, float]:
    """Monte-Carlo quenched mean and standard error of one quantity."""
    points = disorder_realizations(dspec, spec, tri, config)
    vals = np.array([_point_quantity(p, quantity) for p in points])
    if vals.size == 1:
        return float(vals[0]), 0.0
    return float(vals.mean()), float(vals.std(ddof=1) / np.sqrt(vals.size))


def average_point(points: list[SpinPoint]) -> SpinPoint:
    """Component-wise quenched average of realization points."""
    return SpinPoint(
        g=points[0].g,
        energy=float(np.mean([p.energy for p in points])),
        e_ab=float(np.mean([p.e_ab for p in points])),
        e_a1=float(np.mean([p.e_a1 for p in points])),
        e_a2=float(np.mean([p.e_a2 for p in points])),
        le=float(np.mean([p.le for p in points])),
        degenerate=any(p.degenerate for p in points),
    )


@dataclass(frozen=True)
class QuadraticFit:
    """OLS fit of y = lam2 x^2 + lam1 x + lam0 with residual-based errors."""

    lam0: float
    lam1: float
    lam2: float
    se: tuple[float, float, float]
    r_squared: float
    rss: float
    n_points: int

    def coefficients(self) -> tuple[float, float, float]:
        return (self.lam0, self.lam1, self.lam2)


def quadratic_fit(points) -> QuadraticFit:
    """Ordinary least squares on the quadratic model.

    ``points`` is a sequence of (x, y) pairs with x the pre-measurement
    A1A2:B negativity and y the localized entanglement.  Standard errors
    come from the residual covariance; inputs lying exactly on a quadratic
    are recovered with residual below 1e-12.
    """
    pts = np.asarray(list(points), dtype=np.float64)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ValueError("points must be (x, y) pairs")
    n = pts.shape[0]
    if n < 4:
        raise ValueError("need at least 4 points to fit and estimate errors")
    x, y = pts[:, 0], pts[:, 1]
    design = np.column_stack([np.ones(n), x, x * x])
    if np.linalg.matrix_rank(design) < 3:
        raise ValueError("rank-deficient design matrix (x values too degenerate)")
    beta, _, _, _ = np.linalg.lstsq(design, y, rcond=None)
    resid = y - design @ beta
    rss = float(resid @ resid)
    sigma2 = rss / (n - 3)
    cov = sigma2 * np.linalg.inv(design.T @ design)
    se = tuple(float(v) for v in np.sqrt(np.diag(cov)))
    tss = float(((y - y.mean()) ** 2).sum())
    r2 = 1.0 - rss / tss if tss > 0 else 1.0
    return QuadraticFit(
        lam0=float(beta[0]),
        lam1=float(beta[1]),
        lam2=float(beta[2]),
        se=se,
        r_squared=float(r2),
        rss=rss,
        n_points=n,
    )


def window_grid(windows=DEFAULT_WINDOWS) -> np.ndarray:
    """Concatenated uniform g grids for the given (lo, hi, count) windows."""
    parts = [np.linspace(lo, hi, int(count)) for lo, hi, count in windows]
    return np.concatenate(parts)


def adjacent_tripartition(n_sites: int) -> Tripartition:
    """B = site 0, A1 = site 1 (adjacent under PBC), A2 = the rest."""
    return Tripartition((1,), tuple(range(2, n_sites)), (0,))
