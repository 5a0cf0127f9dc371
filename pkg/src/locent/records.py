"""Record types, CSV emission, and run manifests for the experiment CLI.

CSV bodies are deterministic for a fixed (command, config, seed): fixed
column order, 12-significant-digit decimal formatting, '\\n' line endings.
Run metadata that varies between runs (wall time) lives in a sidecar
manifest, never in the CSV.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass

DELTA2_TOL = 1e-9
ENT_FLOOR = -1e-12


class InvariantViolation(Exception):
    """A record failed one of its declared invariants."""


@dataclass(frozen=True)
class ScatterRecord:
    """One sampled state's entanglement tuple; the unit of experiment output."""

    family: str
    n_qubits: int
    n: int
    m: int
    q: float
    alpha: float
    e_ab: float
    e_a1: float
    e_a2: float
    le: float
    delta1: float
    delta2: float
    seed: int
    state_index: int

    COLUMNS = (
        "family",
        "n_qubits",
        "n",
        "m",
        "q",
        "alpha",
        "e_ab",
        "e_a1",
        "e_a2",
        "le",
        "delta1",
        "delta2",
        "seed",
        "state_index",
    )

    def validate(self) -> None:
        """Raise InvariantViolation naming the first failing invariant."""
        if self.delta2 > DELTA2_TOL:
            raise InvariantViolation(
                f"delta2 <= {DELTA2_TOL} violated: delta2 = {self.delta2!r} "
                f"(family={self.family}, state_index={self.state_index})"
            )
        if self.le < 0.0:
            raise InvariantViolation(
                f"le >= 0 violated: le = {self.le!r} (state_index={self.state_index})"
            )
        for name in ("e_ab", "e_a1", "e_a2"):
            v = getattr(self, name)
            if v < ENT_FLOOR:
                raise InvariantViolation(
                    f"{name} >= {ENT_FLOOR} violated: {name} = {v!r} "
                    f"(state_index={self.state_index})"
                )

    def row(self) -> list:
        return [getattr(self, c) for c in self.COLUMNS]


def format_value(v) -> str:
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, float):
        return format(v, ".12g")
    return str(v)


def csv_body(header: list[str], rows: list[list]) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(format_value(v) for v in row))
    return "\n".join(lines) + "\n"


def write_csv(path: str, header: list[str], rows: list[list]) -> str:
    body = csv_body(header, rows)
    with open(path, "w", newline="") as fh:
        fh.write(body)
    return hashlib.sha256(body.encode()).hexdigest()


@dataclass(frozen=True)
class RunManifest:
    command: str
    config_hash: str
    seed: int
    code_version: str
    wall_time_s: float
    csv_path: str
    csv_sha256: str
    rows: int


def write_manifest(manifest: RunManifest) -> str:
    path = manifest.csv_path + ".manifest.json"
    with open(path, "w") as fh:
        json.dump(asdict(manifest), fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path
