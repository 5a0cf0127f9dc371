"""Constructors and Haar samplers for the multi-qubit state families.

Families: generalized GHZ (two-amplitude cat state), generalized W
(single-excitation superposition), Dicke (uniform fixed-Hamming-weight
superposition), generalized Dicke (superposition of Dicke layers), the
three-qubit W and GHZ classes, and arbitrary pure states.  Haar sampling of
a coefficient manifold draws i.i.d. standard complex Gaussians on the
manifold's coordinates and normalizes, which is unitarily invariant.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from itertools import combinations

import numpy as np

from .qcore import PureState

NORM_ATOL = 1e-12

FAMILIES = ("gghz", "gw", "dicke", "gd", "wclass", "ghzclass", "haar")


def _check_norm(v: np.ndarray, what: str) -> np.ndarray:
    v = np.asarray(v, dtype=np.complex128)
    dev = abs(np.sum(np.abs(v) ** 2) - 1.0)
    if dev > 1e-9:
        raise ValueError(f"{what} coefficients are not normalized (|sum-1| = {dev:.3g})")
    if dev > NORM_ATOL:
        v = v / np.linalg.norm(v)
    return v


@dataclass(frozen=True)
class GGHZParams:
    n_qubits: int
    a0: complex
    a1: complex

    def __post_init__(self):
        if self.n_qubits < 2:
            raise ValueError("gGHZ needs at least 2 qubits")
        _check_norm(np.array([self.a0, self.a1]), "gGHZ")


@dataclass(frozen=True)
class GWParams:
    n_qubits: int
    a: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.n_qubits < 2:
            raise ValueError("gW needs at least 2 qubits")
        a = _check_norm(self.a, "gW")
        if a.shape != (self.n_qubits,):
            raise ValueError("gW needs one coefficient per qubit")
        object.__setattr__(self, "a", a)


@dataclass(frozen=True)
class DickeParams:
    n_qubits: int
    n_excited: int

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValueError("n_qubits must be positive")
        if not 0 <= self.n_excited <= self.n_qubits:
            raise ValueError(f"n_excited must lie in 0..{self.n_qubits}")


@dataclass(frozen=True)
class GDParams:
    n_qubits: int
    a: np.ndarray = field(repr=False)

    def __post_init__(self):
        a = _check_norm(self.a, "generalized Dicke")
        if a.shape != (self.n_qubits + 1,):
            raise ValueError("need one coefficient per excitation sector (N+1 total)")
        object.__setattr__(self, "a", a)


@dataclass(frozen=True)
class WClassParams:
    """Coefficients (a0, a1, a2, a3) over {|000>, |100>, |010>, |001>}."""

    a: np.ndarray = field(repr=False)

    def __post_init__(self):
        a = _check_norm(self.a, "W-class")
        if a.shape != (4,):
            raise ValueError("W-class states take exactly 4 coefficients")
        object.__setattr__(self, "a", a)


@dataclass(frozen=True)
class GHZClassParams:
    """Coefficients c0..c7 over the three-qubit product basis."""

    c: np.ndarray = field(repr=False)

    def __post_init__(self):
        c = _check_norm(self.c, "GHZ-class")
        if c.shape != (8,):
            raise ValueError("GHZ-class states take exactly 8 coefficients")
        object.__setattr__(self, "c", c)


def make_gghz(p: GGHZParams) -> PureState:
    """a0 |0...0> + a1 |1...1>."""
    amps = np.zeros(2**p.n_qubits, dtype=np.complex128)
    amps[0] = p.a0
    amps[-1] = p.a1
    return PureState(p.n_qubits, amps)


def make_gw(p: GWParams) -> PureState:
    """Single-excitation superposition: coefficient a[i] on qubit i excited."""
    n = p.n_qubits
    amps = np.zeros(2**n, dtype=np.complex128)
    for i in range(n):
        amps[1 << (n - 1 - i)] = p.a[i]
    return PureState(n, amps)


def make_dicke(p: DickeParams) -> PureState:
    """Uniform superposition of all basis states with n_excited ones."""
    n, k = p.n_qubits, p.n_excited
    amps = np.zeros(2**n, dtype=np.complex128)
    coeff = 1.0 / np.sqrt(comb(n, k))
    for positions in combinations(range(n), k):
        idx = 0
        for q in positions:
            idx |= 1 << (n - 1 - q)
        amps[idx] = coeff
    return PureState(n, amps)


def make_gd(p: GDParams) -> PureState:
    """Superposition of Dicke layers with the given sector coefficients."""
    n = p.n_qubits
    amps = np.zeros(2**n, dtype=np.complex128)
    for k in range(n + 1):
        if p.a[k] != 0:
            amps += p.a[k] * make_dicke(DickeParams(n, k)).amplitudes
    return PureState(n, amps)


def make_wclass(p: WClassParams) -> PureState:
    amps = np.zeros(8, dtype=np.complex128)
    amps[0b000] = p.a[0]
    amps[0b100] = p.a[1]
    amps[0b010] = p.a[2]
    amps[0b001] = p.a[3]
    return PureState(3, amps)


def make_ghzclass(p: GHZClassParams) -> PureState:
    return PureState(3, p.c.copy())


def make_psi3(a: float) -> PureState:
    """a|100> + sqrt((1-a^2)/2) (|010> + |001>); saturates the gW upper bound."""
    if not abs(a) <= 1.0:
        raise ValueError("need |a| <= 1")
    t = np.sqrt((1.0 - a * a) / 2.0)
    return make_gw(GWParams(3, np.array([a, t, t])))


def make_psi4(a: float, b: float) -> PureState:
    """Four-qubit member of the upper-bound-saturating single-excitation family."""
    r = 1.0 - a * a - 2.0 * b * b
    if abs(a) > 1.0 or r < -NORM_ATOL:
        raise ValueError("need a^2 + 2 b^2 <= 1")
    t = np.sqrt((1.0 - a * a) / 2.0)
    return make_gw(GWParams(4, np.array([a, t, b, np.sqrt(max(r, 0.0) / 2.0)])))


def make_phi3(a: float) -> PureState:
    """sqrt(1/2)|100> + a|010> + sqrt(1/2 - a^2)|001>; unit cut entanglement."""
    r = 0.5 - a * a
    if r < -NORM_ATOL:
        raise ValueError("need a^2 <= 1/2")
    return make_gw(GWParams(3, np.array([np.sqrt(0.5), a, np.sqrt(max(r, 0.0))])))


def make_phi4(a: float, b: float) -> PureState:
    """Four-qubit member of the unit-cut-entanglement single-excitation family."""
    r = 0.5 - a * a - b * b
    if r < -NORM_ATOL:
        raise ValueError("need a^2 + b^2 <= 1/2")
    return make_gw(GWParams(4, np.array([np.sqrt(0.5), a, b, np.sqrt(max(r, 0.0))])))


def spawn_rng(seed: int, *key: int) -> np.random.Generator:
    """Independent, reproducible PCG64 stream for (seed, key...).

    Streams with distinct keys are statistically independent, so parallel
    workers can each own one without any shared mutable RNG state.
    """
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=key)))


def _gaussian_coeffs(k: int, rng: np.random.Generator, real: bool) -> np.ndarray:
    z = rng.standard_normal(k).astype(np.complex128)
    if not real:
        z = z + 1j * rng.standard_normal(k)
    return z / np.linalg.norm(z)


def haar_pure(n_qubits: int, rng: np.random.Generator, real: bool = False) -> PureState:
    """Haar-uniform pure state on the full 2**n Hilbert space."""
    return PureState(n_qubits, _gaussian_coeffs(2**n_qubits, rng, real))


def haar_family(
    family: str, n_qubits: int, rng: np.random.Generator, real: bool = False
) -> PureState:
    """Haar-uniform sample from a family's coefficient manifold.

    ``real=True`` restricts to the real-coefficient slice (zero phases),
    the sub-family over which the closed-form bounds were derived.
    """
    if family == "gghz":
        a = _gaussian_coeffs(2, rng, real)
        return make_gghz(GGHZParams(n_qubits, a[0], a[1]))
    if family == "gw":
        return make_gw(GWParams(n_qubits, _gaussian_coeffs(n_qubits, rng, real)))
    if family == "gd":
        return make_gd(GDParams(n_qubits, _gaussian_coeffs(n_qubits + 1, rng, real)))
    if family == "wclass":
        if n_qubits != 3:
            raise ValueError("W-class states are defined for 3 qubits")
        return make_wclass(WClassParams(_gaussian_coeffs(4, rng, real)))
    if family == "ghzclass":
        # Haar sampling of the full 3-qubit space lands in the GHZ class
        # with probability 1 (the W class has measure zero).
        if n_qubits != 3:
            raise ValueError("GHZ-class states are defined for 3 qubits")
        return make_ghzclass(GHZClassParams(_gaussian_coeffs(8, rng, real)))
    if family == "haar":
        return haar_pure(n_qubits, rng, real)
    raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")
