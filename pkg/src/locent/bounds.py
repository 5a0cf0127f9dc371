"""Closed-form bound curves, family predicates, and per-state bound checks.

The single-excitation (gW) and W-class families admit exact curves bounding
the localizable entanglement in terms of the pre-measurement negativities;
under phase-flip noise the same curves survive with every unit scale
replaced by the squared dephasing factor.  This module hosts those curves,
the closed-form cut negativities of the paradigmatic families (used as
oracles against the brute-force route), and ``check_state``, which computes
all four quantities for a state and evaluates every applicable bound.

A bound counts as violated only when exceeded by more than MARGIN_TOL,
separating genuine counterexamples from eigensolver noise.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from math import comb

import numpy as np

from .localize import SearchConfig, maximize_le
from .noise import NoiseSpec, apply_phase_flip, dephasing_factor
from .qcore import DensityMatrix, PureState, Tripartition, negativity

MARGIN_TOL = 1e-9
EQUALITY_TOL = 1e-8


# ---------------------------------------------------------------------------
# bound curves


def _check_unit_interval(x: float, name: str, upper: float = 1.0):
    if not -1e-12 <= x <= upper + 1e-9:
        raise ValueError(f"{name} must lie in [0, {upper:.6g}], got {x}")


def gw_upper(e_ab: float) -> float:
    """Upper bound on localized entanglement given the A1A2:B negativity."""
    _check_unit_interval(e_ab, "e_ab")
    e = min(max(e_ab, 0.0), 1.0)
    return 0.5 * (1.0 + np.sqrt(1.0 - e * e))


def gw_lower(e_min: float) -> float:
    """Lower bound given the smaller of the two one-side-vs-rest negativities.

    Smaller root of x**2 - 2x + e_min**2 = 0, i.e. 1 - sqrt(1 - e_min**2).
    """
    _check_unit_interval(e_min, "e_min")
    e = min(max(e_min, 0.0), 1.0)
    return 1.0 - np.sqrt(1.0 - e * e)


def _upper_scaled(e_ab: float, s: float) -> float:
    e = min(max(e_ab, 0.0), s)
    return 0.5 * (s + np.sqrt(max(s * s - e * e, 0.0)))


def _lower_scaled(e_min: float, s: float) -> float:
    e = min(max(e_min, 0.0), s)
    return s - np.sqrt(max(s * s - e * e, 0.0))


def gw_upper_noisy(e_ab: float, q: float) -> float:
    """Markovian-noise upper curve; the unit scale becomes (1-q)**2."""
    _check_unit_interval(q, "q")
    s = (1.0 - q) ** 2
    _check_unit_interval(e_ab, "e_ab", upper=s)
    return _upper_scaled(e_ab, s)


def gw_lower_noisy(e_min: float, q: float) -> float:
    """Markovian-noise lower curve: smaller root of x**2 - 2(1-q)**2 x + e**2."""
    _check_unit_interval(q, "q")
    s = (1.0 - q) ** 2
    _check_unit_interval(e_min, "e_min", upper=s)
    return _lower_scaled(e_min, s)


def gw_boundary_line(q: float) -> float:
    """Rightmost reachable A1A2:B negativity under Markovian noise."""
    _check_unit_interval(q, "q")
    return (1.0 - q) ** 2


def nonmarkovian_factor(q: float, alpha: float) -> float:
    """Squared dephasing scale |1 - f(q, alpha)|**2, f = q(1 + alpha(1 - q/2))."""
    _check_unit_interval(q, "q")
    _check_unit_interval(alpha, "alpha")
    f = q * (1.0 + alpha * (1.0 - q / 2.0))
    return (1.0 - f) ** 2


def q_critical(alpha: float) -> float:
    """Noise strength at which non-Markovian dephasing kills all entanglement.

    (1 + alpha - sqrt(1 + alpha**2)) / alpha; monotonically decreasing in
    alpha and -> 1 in the memoryless limit alpha -> 0, where no finite
    critical strength exists (a warning is emitted and 1.0 returned).
    """
    _check_unit_interval(alpha, "alpha")
    if alpha == 0.0:
        warnings.warn("alpha = 0 has no finite critical q; returning the limit 1.0")
        return 1.0
    return (1.0 + alpha - np.sqrt(1.0 + alpha * alpha)) / alpha


def noise_scale(spec: NoiseSpec | None) -> float:
    """Squared per-qubit dephasing factor appearing in the noisy curves."""
    if spec is None or spec.q == 0.0:
        return 1.0
    return dephasing_factor(spec) ** 2


# ---------------------------------------------------------------------------
# closed-form cut negativities (oracle-checked against qcore.negativity)


def gghz_negativity(a0: complex) -> float:
    """Any-cut negativity of a generalized GHZ state: 2|a0|sqrt(1-|a0|^2)."""
    m = abs(a0)
    return 2.0 * m * np.sqrt(max(1.0 - m * m, 0.0))


def gw_negativity(a: np.ndarray, cut) -> float:
    """Cut negativity of a single-excitation state: 2 sqrt(w_cut * w_rest)."""
    w = np.abs(np.asarray(a)) ** 2
    cut = list(cut)
    s_cut = w[cut].sum()
    return 2.0 * np.sqrt(max(s_cut * (w.sum() - s_cut), 0.0))


def wclass_negativity(a: np.ndarray, cut_qubit: int) -> float:
    """One-vs-rest negativity of a three-qubit W-class state.

    2 |a_{i+1}| sqrt(sum of the other excitation weights); the |000>
    coefficient drops out.  Exact for complex coefficients.
    """
    if cut_qubit not in (0, 1, 2):
        raise ValueError("cut_qubit must be 0, 1, or 2")
    w = np.abs(np.asarray(a)) ** 2
    exc = [w[1], w[2], w[3]]
    own = exc.pop(cut_qubit)
    return 2.0 * np.sqrt(max(own * sum(exc), 0.0))


def dicke_negativity(n_qubits: int, n_excited: int) -> float:
    """One-vs-rest negativity of a Dicke state.

    2 sqrt(C(N-1, N1) C(N-1, N1-1)) / C(N, N1) = 2 sqrt(N1 (N - N1)) / N.
    """
    n, k = n_qubits, n_excited
    if not 0 <= k <= n:
        raise ValueError("n_excited out of range")
    if k == 0 or k == n:
        return 0.0
    return 2.0 * np.sqrt(comb(n - 1, k) * comb(n - 1, k - 1)) / comb(n, k)


# ---------------------------------------------------------------------------
# family predicates


def family_predicates(params, family_tag: str, tri: Tripartition | None = None) -> bool:
    """Test the amplitude constraint defining a special family.

    Tags: 'gw-saturating' (equal A1/A2 weights at half the A weight, which
    saturates the upper curve), 'gw-unit-loss' (A1A2:B negativity exactly
    1), 'wclass-saturating' (the W-class analogue).  Constraints are tested
    within 1e-10 on the coefficient weights.
    """
    tol = 1e-10
    if family_tag == "gw-saturating":
        if tri is None:
            raise ValueError("gw predicates need the tripartition")
        w = np.abs(np.asarray(params.a)) ** 2
        s_b = w[list(tri.part_b)].sum()
        s1 = w[list(tri.part_a1)].sum()
        s2 = w[list(tri.part_a2)].sum()
        half = 0.5 * (1.0 - s_b)
        return abs(s1 - half) < tol and abs(s2 - half) < tol
    if family_tag == "gw-unit-loss":
        if tri is None:
            raise ValueError("gw predicates need the tripartition")
        w = np.abs(np.asarray(params.a)) ** 2
        s_b = w[list(tri.part_b)].sum()
        return abs(4.0 * s_b * (1.0 - s_b) - 1.0) < tol
    if family_tag == "wclass-saturating":
        w = np.abs(np.asarray(params.a)) ** 2
        half = 0.5 * (1.0 - w[1])
        return abs(w[2] - half) < tol and abs(w[3] - half) < tol
    raise ValueError(f"unknown family predicate {family_tag!r}")


# ---------------------------------------------------------------------------
# per-state checking


@dataclass(frozen=True)
class BoundCheck:
    tag: str
    satisfied: bool
    margin: float


@dataclass(frozen=True)
class BoundReport:
    state_id: str
    quantities: tuple[float, float, float, float]  # (e_ab, e_a1, e_a2, le)
    checks: tuple[BoundCheck, ...]

    def failed(self) -> tuple[BoundCheck, ...]:
        return tuple(c for c in self.checks if not c.satisfied)


def evaluate_checks(
    family: str,
    e_ab: float,
    e_a1: float,
    e_a2: float,
    le: float,
    spec: NoiseSpec | None = None,
) -> tuple[BoundCheck, ...]:
    """Evaluate every bound applicable to the family at these quantities.

    Margin convention: distance to the bound, positive inside; a check is
    satisfied when margin >= -MARGIN_TOL.  Unknown family tags get only the
    monotonicity check, which holds for every state.
    """

    def check(tag: str, margin: float) -> BoundCheck:
        return BoundCheck(tag, bool(margin >= -MARGIN_TOL), float(margin))

    e_min = min(e_a1, e_a2)
    checks = [check("monotonicity", e_min - le)]
    s = noise_scale(spec)
    noisy = s != 1.0

    if family == "gghz":
        quantities = (e_ab, e_a1, e_a2, le)
        maxdev = max(quantities) - min(quantities)
        checks.append(check("equality-chain", EQUALITY_TOL - maxdev))
    elif family in ("gw", "wclass"):
        if noisy:
            checks.append(check("loss-line", s - e_ab))
            checks.append(check("upper-curve", _upper_scaled(e_ab, s) - le))
            checks.append(check("lower-curve", le - _lower_scaled(min(e_min, s), s)))
        else:
            checks.append(check("upper-curve", gw_upper(min(e_ab, 1.0)) - le))
            checks.append(check("lower-curve", le - gw_lower(min(e_min, 1.0))))
    elif family == "ghzclass":
        # No upper bound exists on the (e_ab, le) plane for this class; the
        # lower curve is checked and any violation recorded.
        checks.append(check("lower-curve", le - _lower_scaled(min(e_min, s), s)))
    elif family in ("dicke", "gd"):
        checks.append(check("loss-dominates", e_ab - le))
    return tuple(checks)


def check_state(
    state: PureState | DensityMatrix,
    tri: Tripartition,
    family: str,
    spec: NoiseSpec | None = None,
    config: SearchConfig | None = None,
    state_id: str = "",
) -> BoundReport:
    """Compute (E_AB, E_A1, E_A2, LE) for one state and run its bound checks.

    If a noise spec with q > 0 is given and the state is pure, the channel
    is applied first.  Quantities are computed through the reference
    negativity route plus the measurement optimizer.
    """
    if spec is not None and spec.q > 0.0 and isinstance(state, PureState):
        state = apply_phase_flip(state, spec)
    e_ab = negativity(state, tri.part_b)
    e_a1 = negativity(state, tri.part_a1)
    e_a2 = negativity(state, tri.part_a2)
    le = maximize_le(state, tri, config).value
    return BoundReport(
        state_id=state_id,
        quantities=(e_ab, e_a1, e_a2, le),
        checks=evaluate_checks(family, e_ab, e_a1, e_a2, le, spec),
    )
