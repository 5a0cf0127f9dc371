"""Hot numeric kernels shared by the localization, noise, and harness layers.

Everything here is written in the numba-compilable subset of numpy and is
compiled via :mod:`locent.backend` (``@njit`` by default, plain Python under
``LOCENT_BACKEND=numpy``).  The layout convention for all kernels is the
*canonical order*: the state/density matrix has been permuted so that the
measured qubits B occupy the most significant index bits, followed by the
qubits of A1, then A2.  Callers (see :mod:`locent.localize`) do that
permutation once per state, outside the hot loop.

Bitmask arguments address *index bits*: bit ``p`` of the mask selects the
index bit of weight ``2**p``, i.e. qubit ``n_qubits - 1 - p``.

These kernels are the fast path only; :mod:`locent.qcore` implements the
same quantities independently (dense partial transpose + Hermitian
eigensolve) and serves as the oracle the test suite compares against.
"""

from __future__ import annotations

import numpy as np

from .backend import jit, pjit, prange

# Outcomes with probability below EPS_PROB are excluded from averages; the
# post-measurement state is numerically undefined there and the contribution
# is O(EPS_PROB) anyway.  EPS_EIG: partial-transpose eigenvalues in
# (-EPS_EIG, 0) count as zero (eigensolver noise floor).
EPS_PROB = 1e-12
EPS_EIG = 1e-12

# Nelder-Mead defaults: tolerance on the objective per the optimizer design,
# plus a simplex-size stop for flat objectives, and the per-start budget.
NM_FATOL = 1e-8
NM_XATOL = 1e-6
NM_MAX_EVAL = 500
NM_STEP = 0.35


@jit
def _schmidt_raw(mat):
    """(weight, raw entanglement) of an unnormalized pure-state matrix.

    For ``mat`` the (d1, d2) coefficient matrix of an unnormalized vector,
    returns ``p = ||mat||_F^2`` and ``e_raw = (sum_i s_i)^2 - p`` with
    ``s_i`` the singular values, so that ``e_raw = p * E`` where E is the
    negativity of the normalized state across the (d1, d2) split.
    """
    d1, d2 = mat.shape
    if d1 == 1 or d2 == 1:
        p = 0.0
        for i in range(d1):
            for j in range(d2):
                v = mat[i, j]
                p += v.real * v.real + v.imag * v.imag
        return p, 0.0
    if d1 <= d2:
        g = mat @ np.conj(mat.T)
    else:
        g = np.conj(mat.T) @ mat
    dg = g.shape[0]
    if dg == 2:
        a = g[0, 0].real
        d = g[1, 1].real
        b = g[0, 1]
        det = a * d - (b.real * b.real + b.imag * b.imag)
        e = 2.0 * np.sqrt(det) if det > 0.0 else 0.0
        return a + d, e
    w = np.linalg.eigvalsh(g)
    p = 0.0
    ssum = 0.0
    for i in range(dg):
        wi = w[i]
        p += wi
        if wi > 0.0:
            ssum += np.sqrt(wi)
    e = ssum * ssum - p
    if e < 0.0:
        e = 0.0
    return p, e


@jit
def _measured_vector(psi, nb, k, angles):
    """Contract the nb leading qubits of psi with the outcome-k basis bras."""
    size = psi.shape[0]
    cur = psi
    for j in range(nb):
        half = size >> 1
        kj = (k >> (nb - 1 - j)) & 1
        ct = np.cos(0.5 * angles[2 * j])
        st = np.sin(0.5 * angles[2 * j])
        em = np.exp(-1j * angles[2 * j + 1])
        if kj == 0:
            w0 = ct + 0.0j
            w1 = em * st
        else:
            w0 = st + 0.0j
            w1 = -em * ct
        out = np.empty(half, np.complex128)
        for x in range(half):
            out[x] = w0 * cur[x] + w1 * cur[half + x]
        cur = out
        size = half
    return cur


@jit
def _avg_pure(psi, nq, nb, m, angles):
    """Probability-weighted post-measurement negativity, pure-state input."""
    na = nq - nb
    d1 = 1 << m
    d2 = 1 << (na - m)
    total = 0.0
    for k in range(1 << nb):
        vec = _measured_vector(psi, nb, k, angles)
        p, e_raw = _schmidt_raw(vec.reshape((d1, d2)))
        if p >= EPS_PROB:
            total += e_raw
    return total


@jit
def _measured_matrix(rho, nb, k, angles):
    """Contract the nb leading qubits of rho (both sides) with outcome k."""
    size = rho.shape[0]
    cur = rho
    for j in range(nb):
        half = size >> 1
        kj = (k >> (nb - 1 - j)) & 1
        ct = np.cos(0.5 * angles[2 * j])
        st = np.sin(0.5 * angles[2 * j])
        ep = np.exp(1j * angles[2 * j + 1])
        if kj == 0:
            b0 = ct + 0.0j
            b1 = ep * st
        else:
            b0 = st + 0.0j
            b1 = -ep * ct
        w0 = np.conj(b0)
        w1 = np.conj(b1)
        out = np.empty((half, half), np.complex128)
        for r in range(half):
            for c in range(half):
                out[r, c] = (
                    w0 * b0 * cur[r, c]
                    + w0 * b1 * cur[r, half + c]
                    + w1 * b0 * cur[half + r, c]
                    + w1 * b1 * cur[half + r, half + c]
                )
        cur = out
        size = half
    return cur


@jit
def _pt_trailing(mat, n_bits, n_low):
    """Partial transpose over the n_low least significant index bits."""
    d = 1 << n_bits
    lo = (1 << n_low) - 1
    hi = (d - 1) ^ lo
    out = np.empty((d, d), np.complex128)
    for r in range(d):
        for c in range(d):
            out[r, c] = mat[(r & hi) | (c & lo), (c & hi) | (r & lo)]
    return out


@jit
def _avg_mixed(rho, nq, nb, m, angles):
    """Probability-weighted post-measurement negativity, mixed-state input."""
    na = nq - nb
    total = 0.0
    for k in range(1 << nb):
        cur = _measured_matrix(rho, nb, k, angles)
        p = 0.0
        for i in range(cur.shape[0]):
            p += cur[i, i].real
        if p < EPS_PROB:
            continue
        pt = _pt_trailing(cur, na, na - m)
        w = np.linalg.eigvalsh(pt)
        s = 0.0
        thr = -EPS_EIG * p
        for i in range(w.shape[0]):
            if w[i] < thr:
                s += w[i]
        total += -2.0 * s
    return total


@jit
def objective(psi, rho, is_mixed, nq, nb, m, angles):
    """Average localized negativity for one measurement-angle vector."""
    if is_mixed:
        return _avg_mixed(rho, nq, nb, m, angles)
    return _avg_pure(psi, nq, nb, m, angles)


@jit
def outcome_table(psi, rho, is_mixed, nq, nb, m, angles):
    """Per-outcome (probability, negativity) at a fixed basis."""
    na = nq - nb
    nk = 1 << nb
    probs = np.zeros(nk)
    ents = np.zeros(nk)
    for k in range(nk):
        if is_mixed:
            cur = _measured_matrix(rho, nb, k, angles)
            p = 0.0
            for i in range(cur.shape[0]):
                p += cur[i, i].real
            probs[k] = p
            if p < EPS_PROB:
                continue
            pt = _pt_trailing(cur, na, na - m)
            w = np.linalg.eigvalsh(pt)
            s = 0.0
            thr = -EPS_EIG * p
            for i in range(w.shape[0]):
                if w[i] < thr:
                    s += w[i]
            ents[k] = -2.0 * s / p
        else:
            vec = _measured_vector(psi, nb, k, angles)
            p, e_raw = _schmidt_raw(vec.reshape((1 << m, 1 << (na - m))))
            probs[k] = p
            if p >= EPS_PROB:
                ents[k] = e_raw / p
    return probs, ents


@jit
def nm_maximize(psi, rho, is_mixed, nq, nb, m, x0, max_eval, fatol, xatol):
    """Nelder-Mead ascent of the measurement objective from one start.

    Standard reflect/expand/contract/shrink simplex on the unconstrained
    angle vector (the objective is periodic, so no bounds are needed).
    Stops when the simplex function spread falls below fatol, when the
    simplex collapses below xatol, or when the evaluation budget runs out.
    Returns (best value, best angles, evaluations used).
    """
    dim = x0.shape[0]
    npts = dim + 1
    sim = np.empty((npts, dim))
    fs = np.empty(npts)
    for d in range(dim):
        sim[0, d] = x0[d]
    fs[0] = -objective(psi, rho, is_mixed, nq, nb, m, sim[0])
    nev = 1
    for i in range(dim):
        for d in range(dim):
            sim[i + 1, d] = x0[d]
        sim[i + 1, i] += NM_STEP
        fs[i + 1] = -objective(psi, rho, is_mixed, nq, nb, m, sim[i + 1])
        nev += 1

    cen = np.empty(dim)
    xr = np.empty(dim)
    xe = np.empty(dim)
    xc = np.empty(dim)
    while nev < max_eval:
        ib = 0
        iw = 0
        for i in range(1, npts):
            if fs[i] < fs[ib]:
                ib = i
            if fs[i] > fs[iw]:
                iw = i
        fsw = -np.inf
        for i in range(npts):
            if i != iw and fs[i] > fsw:
                fsw = fs[i]

        fspread = fs[iw] - fs[ib]
        xspread = 0.0
        for i in range(npts):
            for d in range(dim):
                diff = abs(sim[i, d] - sim[ib, d])
                if diff > xspread:
                    xspread = diff
        if fspread <= fatol or xspread <= xatol:
            break

        for d in range(dim):
            acc = 0.0
            for i in range(npts):
                if i != iw:
                    acc += sim[i, d]
            cen[d] = acc / dim

        for d in range(dim):
            xr[d] = cen[d] + (cen[d] - sim[iw, d])
        fr = -objective(psi, rho, is_mixed, nq, nb, m, xr)
        nev += 1
        if fr < fs[ib]:
            for d in range(dim):
                xe[d] = cen[d] + 2.0 * (cen[d] - sim[iw, d])
            fe = -objective(psi, rho, is_mixed, nq, nb, m, xe)
            nev += 1
            if fe < fr:
                for d in range(dim):
                    sim[iw, d] = xe[d]
                fs[iw] = fe
            else:
                for d in range(dim):
                    sim[iw, d] = xr[d]
                fs[iw] = fr
        elif fr < fsw:
            for d in range(dim):
                sim[iw, d] = xr[d]
            fs[iw] = fr
        else:
            shrink = False
            if fr < fs[iw]:
                for d in range(dim):
                    xc[d] = cen[d] + 0.5 * (cen[d] - sim[iw, d])
                fc = -objective(psi, rho, is_mixed, nq, nb, m, xc)
                nev += 1
                if fc <= fr:
                    for d in range(dim):
                        sim[iw, d] = xc[d]
                    fs[iw] = fc
                else:
                    shrink = True
            else:
                for d in range(dim):
                    xc[d] = cen[d] - 0.5 * (cen[d] - sim[iw, d])
                fc = -objective(psi, rho, is_mixed, nq, nb, m, xc)
                nev += 1
                if fc < fs[iw]:
                    for d in range(dim):
                        sim[iw, d] = xc[d]
                    fs[iw] = fc
                else:
                    shrink = True
            if shrink:
                for i in range(npts):
                    if i == ib:
                        continue
                    for d in range(dim):
                        sim[i, d] = sim[ib, d] + 0.5 * (sim[i, d] - sim[ib, d])
                    fs[i] = -objective(psi, rho, is_mixed, nq, nb, m, sim[i])
                    nev += 1

    ib = 0
    for i in range(1, npts):
        if fs[i] < fs[ib]:
            ib = i
    best_x = np.empty(dim)
    for d in range(dim):
        best_x[d] = sim[ib, d]
    return -fs[ib], best_x, nev


@jit
def le_multistart(psi, rho, is_mixed, nq, nb, m, starts, max_eval, fatol, xatol):
    """Run Nelder-Mead from every start row; keep the best.

    Returns (best value, best angles, per-start values, total evaluations).
    Ties go to the earliest start, so the analytic seed bases (placed first
    by the caller) win whenever they already attain the optimum.
    """
    ns = starts.shape[0]
    per = np.empty(ns)
    best = -1.0
    best_x = np.empty(starts.shape[1])
    total_ev = 0
    for i in range(ns):
        f, x, nev = nm_maximize(
            psi, rho, is_mixed, nq, nb, m, starts[i].copy(), max_eval, fatol, xatol
        )
        per[i] = f
        total_ev += nev
        if f > best:
            best = f
            for d in range(x.shape[0]):
                best_x[d] = x[d]
    return best, best_x, per, total_ev


@jit
def pure_neg_mask(psi, nq, mask):
    """Negativity of a normalized pure state across the masked-bit cut."""
    nr = 0
    for p in range(nq):
        if (mask >> p) & 1:
            nr += 1
    d1 = 1 << nr
    d2 = 1 << (nq - nr)
    mat = np.empty((d1, d2), np.complex128)
    for i in range(1 << nq):
        r = 0
        c = 0
        for p in range(nq - 1, -1, -1):
            bit = (i >> p) & 1
            if (mask >> p) & 1:
                r = (r << 1) | bit
            else:
                c = (c << 1) | bit
        mat[r, c] = psi[i]
    p, e_raw = _schmidt_raw(mat)
    if p <= 0.0:
        return 0.0
    return e_raw / p


@jit
def dm_neg_mask(rho, nq, mask):
    """Negativity of a unit-trace density matrix across the masked-bit cut."""
    d = 1 << nq
    lo = mask
    hi = (d - 1) ^ lo
    pt = np.empty((d, d), np.complex128)
    for r in range(d):
        for c in range(d):
            pt[r, c] = rho[(r & hi) | (c & lo), (c & hi) | (r & lo)]
    w = np.linalg.eigvalsh(pt)
    s = 0.0
    for i in range(d):
        if w[i] < -EPS_EIG:
            s += w[i]
    return -2.0 * s + 0.0


@jit
def dephased_outer(psi, eta, nq):
    """Projector of psi with each off-diagonal scaled by eta**hamming(r^c)."""
    d = 1 << nq
    pows = np.empty(nq + 1)
    pows[0] = 1.0
    for h in range(1, nq + 1):
        pows[h] = pows[h - 1] * eta
    rho = np.empty((d, d), np.complex128)
    for r in range(d):
        for c in range(d):
            x = r ^ c
            h = 0
            while x:
                h += x & 1
                x >>= 1
            rho[r, c] = psi[r] * np.conj(psi[c]) * pows[h]
    return rho


@pjit
def scatter_pure_batch(psis, nq, nb, m, starts, max_eval, fatol, xatol):
    """Per-sample (LE, E_AB, E_A1, E_A2) for a batch of pure states.

    psis: (S, 2**nq) canonical-order amplitudes; starts: (S, n_starts, 2*nb)
    angle starts (analytic seeds first).  Samples are independent, so the
    loop is a prange.
    """
    S = psis.shape[0]
    na = nq - nb
    mask_b = ((1 << nb) - 1) << na
    mask_a1 = ((1 << m) - 1) << (na - m)
    mask_a2 = (1 << (na - m)) - 1
    out = np.empty((S, 4))
    dummy = np.zeros((1, 1), np.complex128)
    for s in prange(S):
        psi = psis[s]
        le, _, _, _ = le_multistart(
            psi, dummy, False, nq, nb, m, starts[s], max_eval, fatol, xatol
        )
        out[s, 0] = le
        out[s, 1] = pure_neg_mask(psi, nq, mask_b)
        out[s, 2] = pure_neg_mask(psi, nq, mask_a1)
        out[s, 3] = pure_neg_mask(psi, nq, mask_a2)
    return out


@pjit
def scatter_dephased_batch(psis, eta, nq, nb, m, starts, max_eval, fatol, xatol):
    """Like scatter_pure_batch, after a phase-flip channel with factor eta."""
    S = psis.shape[0]
    na = nq - nb
    mask_b = ((1 << nb) - 1) << na
    mask_a1 = ((1 << m) - 1) << (na - m)
    mask_a2 = (1 << (na - m)) - 1
    out = np.empty((S, 4))
    dummy = np.zeros(1, np.complex128)
    for s in prange(S):
        rho = dephased_outer(psis[s], eta, nq)
        le, _, _, _ = le_multistart(
            dummy, rho, True, nq, nb, m, starts[s], max_eval, fatol, xatol
        )
        out[s, 0] = le
        out[s, 1] = dm_neg_mask(rho, nq, mask_b)
        out[s, 2] = dm_neg_mask(rho, nq, mask_a1)
        out[s, 3] = dm_neg_mask(rho, nq, mask_a2)
    return out
