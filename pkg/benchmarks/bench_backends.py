"""Timing comparison of the numba and numpy kernel backends.

Runs a fixed workload per backend in a subprocess (backend choice happens at
import time) and prints the per-item timings side by side.

    python3 benchmarks/bench_backends.py [--samples 200]
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys

WORKLOAD = r"""
import json, sys, time
import numpy as np
import locent as lc
from locent import backend
from locent.cli import _canonical_states, _batch_quantities
from locent.localize import SearchConfig
from locent.noise import NoiseSpec
from locent.spinchain import SpinModelSpec, adjacent_tripartition, scatter_point

samples = int(sys.argv[1])
sc = SearchConfig(seed=5)
timings = {}

def clock(label, fn, reps=1):
    fn()  # warm (compilation on the numba backend)
    t0 = time.perf_counter()
    for _ in range(reps):
        fn()
    timings[label] = (time.perf_counter() - t0) / reps

psis, starts = _canonical_states("haar", 4, 1, 1, samples, 5, False, sc)
clock("pure scatter batch (N=4)", lambda: _batch_quantities(psis, starts, 4, 1, 1, None, sc))
spec = NoiseSpec(q=0.2)
small = max(samples // 4, 8)
clock(
    "dephased scatter batch (N=4)",
    lambda: _batch_quantities(psis[:small], starts[:small], 4, 1, 1, spec, sc),
)
st = lc.make_gghz(lc.GGHZParams(6, 0.6, 0.8))
tri = lc.Tripartition((1,), tuple(range(2, 6)), (0,))
clock("single LE optimization (N=6)", lambda: lc.maximize_le(st, tri, sc), reps=5)
chain = SpinModelSpec(10, "txy", 0.5, gamma=0.5)
clock("spin-chain point (N=10)", lambda: scatter_point(chain, adjacent_tripartition(10), sc))

print(json.dumps({"backend": backend.ACTIVE, "samples": samples, "timings": timings}))
"""


def run(backend: str, samples: int) -> dict:
    env = dict(os.environ, LOCENT_BACKEND=backend)
    proc = subprocess.run(
        [sys.executable, "-c", WORKLOAD, str(samples)],
        capture_output=True,
        text=True,
        env=env,
        check=True,
    )
    return json.loads(proc.stdout.splitlines()[-1])


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--samples", type=int, default=100)
    args = parser.parse_args()

    results = {}
    for name in ("numba", "numpy"):
        print(f"running {name} backend ...", file=sys.stderr)
        results[name] = run(name, args.samples)

    labels = list(results["numba"]["timings"])
    width = max(len(lab) for lab in labels)
    print(f"{'workload':<{width}}  {'numba':>10}  {'numpy':>10}  {'speedup':>8}")
    for lab in labels:
        a = results["numba"]["timings"][lab]
        b = results["numpy"]["timings"][lab]
        print(f"{lab:<{width}}  {a * 1e3:9.1f}ms  {b * 1e3:9.1f}ms  {b / a:7.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
