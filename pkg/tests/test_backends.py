"""Kernel-vs-reference equivalence and the numpy fallback backend."""

import os
import subprocess
import sys

import numpy as np
import pytest

from locent import backend, kernels
from locent.noise import NoiseSpec, apply_phase_flip, dephased_projector
from locent.qcore import PureState, negativity

from conftest import random_state_vector


def test_active_backend_is_numba_here():
    # the test environment has numba installed; auto selection must use it
    assert backend.ACTIVE == "numba"


def test_pure_neg_mask_matches_reference(rng):
    for n in (2, 3, 4, 5):
        psi = random_state_vector(rng, n)
        cut_size = int(rng.integers(1, n))
        cut = tuple(sorted(rng.choice(n, size=cut_size, replace=False).tolist()))
        mask = 0
        for q in cut:
            mask |= 1 << (n - 1 - q)
        fast = kernels.pure_neg_mask(psi, n, mask)
        slow = negativity(PureState(n, psi), cut)
        assert fast == pytest.approx(slow, abs=1e-10)


def test_dm_neg_mask_matches_reference(rng):
    for n in (2, 3, 4):
        psi = PureState(n, random_state_vector(rng, n))
        rho = apply_phase_flip(psi, NoiseSpec(q=0.35))
        cut = (0,) if n == 2 else (0, n - 1)
        mask = 0
        for q in cut:
            mask |= 1 << (n - 1 - q)
        fast = kernels.dm_neg_mask(np.ascontiguousarray(rho.matrix), n, mask)
        assert fast == pytest.approx(negativity(rho, cut), abs=1e-10)


def test_dephased_outer_matches_channel(rng):
    psi = random_state_vector(rng, 4)
    idx = np.arange(16)
    ham = np.bitwise_count((idx[:, None] ^ idx[None, :]).astype(np.uint32))
    for eta in (1.0, 0.55, -0.2, 0.0):
        fast = dephased_projector(psi, 4, eta)
        slow = np.outer(psi, psi.conj()) * (float(eta) ** ham)
        assert np.abs(fast - slow).max() < 1e-14
        if 0.0 <= 1.0 - eta <= 1.0:
            via_channel = apply_phase_flip(PureState(4, psi), NoiseSpec(q=1.0 - eta)).matrix
            assert np.abs(fast - via_channel).max() < 1e-14


FALLBACK_SCRIPT = r"""
import numpy as np
import locent as lc
from locent import backend

assert backend.ACTIVE == "numpy", backend.ACTIVE

st = lc.make_gghz(lc.GGHZParams(3, 0.6, 0.8))
tri = lc.Tripartition((1,), (2,), (0,))
res = lc.maximize_le(st, tri)
gw = lc.make_gw(lc.GWParams(3, np.full(3, 1 / np.sqrt(3))))
noisy = lc.le_noisy(gw, tri, lc.NoiseSpec(q=0.2))
print(f"{res.value:.15f} {noisy.value:.15f}")
"""


def test_numpy_fallback_agrees():
    env = dict(os.environ, LOCENT_BACKEND="numpy")
    proc = subprocess.run(
        [sys.executable, "-c", FALLBACK_SCRIPT], capture_output=True, text=True, env=env
    )
    assert proc.returncode == 0, proc.stderr
    a, b = (float(x) for x in proc.stdout.split())
    assert a == pytest.approx(0.96, abs=1e-9)
    assert b == pytest.approx(0.64 * 2 / 3, abs=1e-9)


def test_invalid_backend_env_rejected():
    env = dict(os.environ, LOCENT_BACKEND="cuda")
    proc = subprocess.run(
        [sys.executable, "-c", "import locent"], capture_output=True, text=True, env=env
    )
    assert proc.returncode != 0
    assert "LOCENT_BACKEND" in proc.stderr
