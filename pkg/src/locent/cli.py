"""Experiment command line: scatter, table1, noise-curve, spin, verify.

Every command is deterministic for a fixed (command line, config, seed):
per-sample RNG streams are derived from (seed, state_index), worker output
is merged in state-index order, and CSV bodies are byte-stable.  Progress
and diagnostics go to stderr; data goes to files (or stdout with
``--out -``).

Exit codes: 0 success, 1 invariant or bound violation detected, 2 usage
error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from hashlib import sha256

import numpy as np

from . import __version__, backend, kernels
from .bounds import evaluate_checks
from .localize import DELTA1_ZERO_TOL, SearchConfig, _build_starts
from .noise import NoiseSpec, dephasing_factor
from .records import (
    InvariantViolation,
    RunManifest,
    ScatterRecord,
    csv_body,
    write_manifest,
)
from .spinchain import (
    DEFAULT_WINDOWS,
    DisorderSpec,
    SpinModelSpec,
    adjacent_tripartition,
    average_point,
    disorder_realizations,
    quadratic_fit,
    scatter_point,
    window_grid,
)
from .states import FAMILIES, haar_family, make_dicke, DickeParams, spawn_rng
from .verify import SUITES, run_suites

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2

DEFAULTS = {
    "seed": 0,
    "samples": 10000,
    "threads": 0,
    "q": 0.0,
    "alpha": 0.0,
    "kind": "markovian",
}

TABLE1_CELLS = "3:1:1,4:1:1,5:1:1,5:1:2"
TABLE1_QS = "0.0,0.1,0.2,0.3,0.4"


def _read_config(path: str | None) -> tuple[dict, str]:
    """Parse a line-based ``key = value`` file; '#' starts a comment."""
    if not path:
        return {}, "-"
    out = {}
    with open(path) as fh:
        raw = fh.read()
    for lineno, line in enumerate(raw.splitlines(), 1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ValueError(f"{path}:{lineno}: expected 'key = value', got {line!r}")
        key, val = stripped.split("=", 1)
        out[key.strip().replace("-", "_")] = val.strip()
    return out, sha256(raw.encode()).hexdigest()


def _effective(args, config: dict, key: str, cast=str):
    val = getattr(args, key, None)
    if val is not None:
        return val
    if key in config:
        return cast(config[key])
    return DEFAULTS.get(key)


def _emit(args, header, rows, t0: float, config_hash: str) -> None:
    body_hash_rows = [list(r) for r in rows]
    if args.out == "-":
        sys.stdout.write(csv_body(header, body_hash_rows))
        digest = sha256(csv_body(header, body_hash_rows).encode()).hexdigest()
        path = "-"
    else:
        from .records import write_csv

        digest = write_csv(args.out, header, body_hash_rows)
        path = args.out
    if path != "-":
        write_manifest(
            RunManifest(
                command=" ".join(sys.argv),
                config_hash=config_hash,
                seed=args._seed,
                code_version=__version__,
                wall_time_s=time.perf_counter() - t0,
                csv_path=path,
                csv_sha256=digest,
                rows=len(rows),
            )
        )


def _log(msg: str) -> None:
    print(msg, file=sys.stderr)


def _canonical_states(family, n_qubits, nb, m, samples, seed, real, config: SearchConfig):
    """Sampled amplitudes (canonical order: B, A1, A2 = leading qubits) + starts."""
    dim = 1 << n_qubits
    n_random = config.random_starts_for(nb)
    psis = np.empty((samples, dim), dtype=np.complex128)
    starts = np.empty((samples, 3 + n_random, 2 * nb))
    seed_rows, _ = _build_starts(nb, config)
    for i in range(samples):
        rng = spawn_rng(seed, i)
        st = haar_family(family, n_qubits, rng, real)
        psis[i] = st.amplitudes
        starts[i, :3] = seed_rows[:3]
        thetas = rng.uniform(0.0, np.pi, (n_random, nb))
        phis = rng.uniform(0.0, 2 * np.pi, (n_random, nb))
        starts[i, 3:] = np.stack([thetas, phis], axis=-1).reshape(n_random, 2 * nb)
    return psis, starts


def _batch_quantities(psis, starts, n_qubits, nb, m, spec: NoiseSpec | None, config: SearchConfig):
    """(le, e_ab, e_a1, e_a2) per sample via the batch kernels."""
    if spec is None or spec.q == 0.0:
        out = kernels.scatter_pure_batch(
            psis, n_qubits, nb, m, starts, config.max_evals_per_start, config.fatol, config.xatol
        )
    else:
        eta = dephasing_factor(spec)
        out = kernels.scatter_dephased_batch(
            psis,
            eta,
            n_qubits,
            nb,
            m,
            starts,
            config.max_evals_per_start,
            config.fatol,
            config.xatol,
        )
    return np.asarray(out)


def _noise_spec(args, config) -> NoiseSpec:
    q = float(_effective(args, config, "q", float))
    alpha = float(_effective(args, config, "alpha", float))
    kind = _effective(args, config, "kind")
    return NoiseSpec(q=q, alpha=alpha, kind=kind)


def _check_columns(family: str, spec: NoiseSpec | None):
    probe = evaluate_checks(family, 0.0, 0.0, 0.0, 0.0, spec)
    return [f"{c.tag}_margin" for c in probe], [c.tag for c in probe]


def cmd_scatter(args, config, config_hash) -> int:
    t0 = time.perf_counter()
    n_qubits = args.n_qubits
    nb, m = args.n, args.m
    if nb + m >= n_qubits:
        raise SystemExit("need n + m < n_qubits so that A2 is non-empty")
    samples = int(_effective(args, config, "samples", int))
    seed = args._seed
    spec = _noise_spec(args, config)
    sc = SearchConfig(seed=seed)
    family = args.family
    eff_spec = spec if spec.q > 0 else None

    if family == "dicke":
        # discrete family: one record per excitation number
        psis = np.empty((n_qubits - 1, 1 << n_qubits), dtype=np.complex128)
        starts = np.empty((n_qubits - 1, 3 + sc.random_starts_for(nb), 2 * nb))
        seed_rows, _ = _build_starts(nb, sc)
        for i, k in enumerate(range(1, n_qubits)):
            psis[i] = make_dicke(DickeParams(n_qubits, k)).amplitudes
            starts[i] = seed_rows
        samples = n_qubits - 1
    else:
        psis, starts = _canonical_states(family, n_qubits, nb, m, samples, seed, args.real, sc)

    quant = _batch_quantities(psis, starts, n_qubits, nb, m, eff_spec, sc)
    margin_cols, tags = _check_columns(family, eff_spec)
    header = list(ScatterRecord.COLUMNS) + margin_cols
    rows = []
    n_violations = 0
    for i in range(samples):
        le, e_ab, e_a1, e_a2 = quant[i]
        rec = ScatterRecord(
            family=family,
            n_qubits=n_qubits,
            n=nb,
            m=m,
            q=spec.q,
            alpha=spec.alpha if spec.kind == "non_markovian" else 0.0,
            e_ab=float(e_ab),
            e_a1=float(e_a1),
            e_a2=float(e_a2),
            le=float(le),
            delta1=float(le - e_ab),
            delta2=float(le - min(e_a1, e_a2)),
            seed=seed,
            state_index=i,
        )
        rec.validate()
        checks = evaluate_checks(family, rec.e_ab, rec.e_a1, rec.e_a2, rec.le, eff_spec)
        for c in checks:
            if not c.satisfied:
                n_violations += 1
                _log(f"bound violation: state {i} fails {c.tag} by {-c.margin:.3e}")
        rows.append(rec.row() + [c.margin for c in checks])
    _emit(args, header, rows, t0, config_hash)
    _log(f"scatter: {samples} records, {n_violations} bound violations")
    return EXIT_VIOLATION if n_violations else EXIT_OK


def cmd_table1(args, config, config_hash) -> int:
    t0 = time.perf_counter()
    cells = []
    for part in (args.cells or TABLE1_CELLS).split(","):
        nq, nb, m = (int(x) for x in part.strip().split(":"))
        cells.append((nq, nb, m))
    qs = [float(x) for x in (args.q_list or TABLE1_QS).split(",")]
    samples = int(_effective(args, config, "samples", int))
    seed = args._seed
    sc = SearchConfig(seed=seed)
    header = [
        "n_qubits",
        "n",
        "m",
        "q",
        "samples",
        "n_delta1_pos",
        "frac_delta1_pos_pct",
        "n_delta2_violations",
    ]
    rows = []
    bad = 0
    for nq, nb, m in cells:
        psis, starts = _canonical_states("haar", nq, nb, m, samples, seed, False, sc)
        for q in qs:
            spec = NoiseSpec(q=q) if q > 0 else None
            quant = _batch_quantities(psis, starts, nq, nb, m, spec, sc)
            d1 = quant[:, 0] - quant[:, 1]
            d2 = quant[:, 0] - np.minimum(quant[:, 2], quant[:, 3])
            n_pos = int((d1 > DELTA1_ZERO_TOL).sum())
            n_bad = int((d2 > 1e-9).sum())
            bad += n_bad
            rows.append([nq, nb, m, q, samples, n_pos, 100.0 * n_pos / samples, n_bad])
            _log(
                f"table1 cell N={nq} n={nb} m={m} q={q}: {100.0 * n_pos / samples:.3f}% "
                f"delta1>0 ({n_bad} monotonicity violations)"
            )
    _emit(args, header, rows, t0, config_hash)
    return EXIT_VIOLATION if bad else EXIT_OK


def _parse_grid(spec: str) -> np.ndarray:
    lo, hi, count = spec.split(":")
    return np.linspace(float(lo), float(hi), int(count))


def cmd_noise_curve(args, config, config_hash) -> int:
    t0 = time.perf_counter()
    n_qubits = args.n_qubits
    nb, m = 1, 1
    kind = _effective(args, config, "kind")
    alpha = float(_effective(args, config, "alpha", float))
    seed = args._seed
    sc = SearchConfig(seed=seed)
    rng = spawn_rng(seed, 0)
    if args.family == "gghz":
        st = haar_family("gghz", n_qubits, rng, real=args.real)
        power = n_qubits
    elif args.family == "gw":
        st = haar_family("gw", n_qubits, rng, real=args.real)
        power = 2
    else:
        raise SystemExit("noise-curve supports families gghz and gw")
    psi = st.amplitudes
    qs = _parse_grid(args.q_grid) if args.q_grid else np.linspace(0.0, 1.0, 21)
    seed_rows, _ = _build_starts(nb, sc)
    starts = np.broadcast_to(seed_rows, (1,) + seed_rows.shape).copy()
    header = ["q", "alpha", "factor", "le", "e_ab"]
    rows = []
    psis = psi[None, :].copy()
    for q in qs:
        spec = NoiseSpec(q=float(q), alpha=alpha, kind=kind)
        eta = dephasing_factor(spec)
        factor = abs(eta) ** power
        quant = _batch_quantities(
            psis, starts, n_qubits, nb, m, spec if q > 0 else None, sc
        )
        rows.append([float(q), alpha if kind == "non_markovian" else 0.0, factor,
                     float(quant[0, 0]), float(quant[0, 1])])
    _emit(args, header, rows, t0, config_hash)
    return EXIT_OK


def _try_fit(points, label):
    """Fit if the grid produced enough spread; plateaus make x degenerate."""
    try:
        fit = quadratic_fit(points)
    except ValueError as exc:
        _log(f"spin {label}: fit skipped ({exc})")
        return None
    _log(
        f"spin {label}: lam=({fit.lam0:.4f}, {fit.lam1:.4f}, {fit.lam2:.4f}) "
        f"+/- ({fit.se[0]:.4f}, {fit.se[1]:.4f}, {fit.se[2]:.4f}), R^2={fit.r_squared:.4f}"
    )
    return fit


def cmd_spin(args, config, config_hash) -> int:
    t0 = time.perf_counter()
    seed = args._seed
    sc = SearchConfig(seed=seed)
    sizes = [int(s) for s in args.sites.split(",")]
    windows = []
    for w in (args.windows.split(",") if args.windows else None) or [
        f"{lo}:{hi}:{count}" for lo, hi, count in DEFAULT_WINDOWS
    ]:
        lo, hi, count = w.split(":")
        windows.append((float(lo), float(hi), int(count)))
    sigma_g = args.sigma_g or 0.0
    realizations = args.realizations or 1
    model = args.model
    gamma = args.gamma if model == "txy" else 0.0
    delta = args.delta if model == "xxz" else 0.0

    header = list(ScatterRecord.COLUMNS) + ["g", "sigma_g", "energy", "pbc_dev", "degenerate"]
    rows = []
    fits = {}
    per_n_points = {}
    idx = 0
    for n_sites in sizes:
        tri = adjacent_tripartition(n_sites)
        pts = []
        for g in window_grid(windows):
            spec = SpinModelSpec(
                n_sites, model, float(g), gamma=float(gamma), delta=float(delta)
            )
            if sigma_g > 0:
                # one independent disorder stream per grid point
                dspec = DisorderSpec(float(g), sigma_g, realizations, seed + idx)
                point = average_point(disorder_realizations(dspec, spec, tri, sc))
            else:
                point = scatter_point(spec, tri, sc)
            rec = ScatterRecord(
                family=model,
                n_qubits=n_sites,
                n=1,
                m=1,
                q=0.0,
                alpha=0.0,
                e_ab=point.e_ab,
                e_a1=point.e_a1,
                e_a2=point.e_a2,
                le=point.le,
                delta1=point.delta1,
                delta2=point.delta2,
                seed=seed,
                state_index=idx,
            )
            rec.validate()  # aborts the run with a diagnostic on violation
            rows.append(
                rec.row()
                + [float(g), sigma_g, point.energy, point.pbc_deviation, point.degenerate]
            )
            pts.append((point.e_ab, point.le))
            idx += 1
        per_n_points[n_sites] = pts
        fit = _try_fit(pts, f"{model} N={n_sites}")
        if fit is not None:
            fits[f"N={n_sites}"] = fit
    pooled = _try_fit([p for pts in per_n_points.values() for p in pts], f"{model} pooled")
    if pooled is not None:
        fits["pooled"] = pooled
    _emit(args, header, rows, t0, config_hash)
    if args.out != "-":
        fit_path = args.out + ".fit.json"
        with open(fit_path, "w") as fh:
            json.dump(
                {
                    key: {
                        "lam0": f.lam0,
                        "lam1": f.lam1,
                        "lam2": f.lam2,
                        "se": list(f.se),
                        "r_squared": f.r_squared,
                        "n_points": f.n_points,
                    }
                    for key, f in fits.items()
                },
                fh,
                indent=2,
                sort_keys=True,
            )
            fh.write("\n")
        _log(f"fit report written to {fit_path}")
    return EXIT_OK


def cmd_verify(args, config, config_hash) -> int:
    names = args.suite or sorted(SUITES)
    results, ok = run_suites(names, args._seed)
    for suite, res in results:
        status = "PASS" if res.passed else "FAIL"
        print(f"[{status}] {suite}: {res.name} ({res.detail})")
    n_fail = sum(1 for _, r in results if not r.passed)
    print(f"verify: {len(results) - n_fail} passed, {n_fail} failed")
    return EXIT_OK if ok else EXIT_VIOLATION


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="locent",
        description="Localizable entanglement vs. measurement-lost entanglement experiments",
    )
    parser.add_argument("--version", action="version", version=f"locent {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--seed", type=int, default=None, help="base RNG seed (default 0)")
        p.add_argument("--samples", type=int, default=None, help="sample count (default 10000)")
        p.add_argument("--out", default="-", help="output CSV path ('-' for stdout)")
        p.add_argument("--config", default=None, help="key = value config file")
        p.add_argument("--threads", type=int, default=None, help="kernel threads (default all)")

    p = sub.add_parser("scatter", help="sample a state family and record all quantities")
    common(p)
    p.add_argument("--family", required=True, choices=FAMILIES)
    p.add_argument("--n-qubits", type=int, required=True)
    p.add_argument("--n", type=int, default=1, help="measured qubits |B|")
    p.add_argument("--m", type=int, default=1, help="qubits in A1")
    p.add_argument("--q", type=float, default=None, help="phase-flip strength")
    p.add_argument("--alpha", type=float, default=None, help="memory parameter")
    p.add_argument("--kind", choices=("markovian", "non_markovian"), default=None)
    p.add_argument("--real", action="store_true", help="sample the real-coefficient slice")
    p.set_defaults(func=cmd_scatter)

    p = sub.add_parser("table1", help="fractions of states with positive localization gain")
    common(p)
    p.add_argument("--cells", default=None, help=f"N:n:m list (default {TABLE1_CELLS})")
    p.add_argument("--q-list", default=None, help=f"noise strengths (default {TABLE1_QS})")
    p.set_defaults(func=cmd_table1)

    p = sub.add_parser("noise-curve", help="entanglement decay along a noise-strength grid")
    common(p)
    p.add_argument("--family", required=True, choices=("gghz", "gw"))
    p.add_argument("--n-qubits", type=int, required=True)
    p.add_argument("--q-grid", default=None, help="lo:hi:count (default 0:1:21)")
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--kind", choices=("markovian", "non_markovian"), default=None)
    p.add_argument("--real", action="store_true")
    p.set_defaults(func=cmd_noise_curve)

    p = sub.add_parser("spin", help="spin-chain ground-state scatter and quadratic fit")
    common(p)
    p.add_argument("--model", required=True, choices=("txy", "xxz"))
    p.add_argument("--gamma", type=float, default=0.5, help="xy anisotropy (txy)")
    p.add_argument("--delta", type=float, default=0.5, help="z anisotropy (xxz)")
    p.add_argument("--sites", default="8,10,12", help="comma list of chain lengths")
    p.add_argument("--windows", default=None, help="lo:hi:count[,lo:hi:count...]")
    p.add_argument("--sigma-g", type=float, default=0.0, help="field disorder strength")
    p.add_argument("--realizations", type=int, default=50, help="disorder realizations/point")
    p.set_defaults(func=cmd_spin)

    p = sub.add_parser("verify", help="run the closed-form verification suites")
    common(p)
    p.add_argument("--suite", action="append", choices=sorted(SUITES), default=None)
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config, config_hash = _read_config(args.config)
        args._seed = int(_effective(args, config, "seed", int))
        threads = int(_effective(args, config, "threads", int))
        if threads > 0:
            backend.set_num_threads(threads)
        return args.func(args, config, config_hash)
    except (ValueError, OSError, InvariantViolation) as exc:
        _log(f"error: {exc}")
        return EXIT_VIOLATION if isinstance(exc, InvariantViolation) else EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
