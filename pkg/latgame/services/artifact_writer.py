"""Artifact writers: PGM snapshots, density CSVs, RLE checkpoints and manifests."""
import hashlib
import logging
import os
from pathlib import Path
from typing import Dict, Iterable, List, Sequence, Union

import numpy as np

from latgame.exceptions import ArtifactError, UnsupportedDimensionError
from latgame.models.experiment import RunManifest
from latgame.models.field import StrategyField
from latgame.models.lattice import LatticeGeometry
from latgame.models.reports import RunReport, SeriesSample


logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

CSV_HEADER = "t,density1,flips,active"
MANIFEST_NAME = "manifest.txt"


def _write_bytes(path: PathLike, payload: bytes) -> Path:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(payload)
    except OSError as e:
        raise ArtifactError(f"cannot write artifact: {e.strerror}", str(path))
    logger.debug("Wrote %s (%d bytes)", path, len(payload))
    return path


def write_lines(path: PathLike, lines: Iterable[str]) -> Path:
    return _write_bytes(path, "".join(line + "\n" for line in lines).encode("utf-8"))


def _read_text(path: PathLike) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ArtifactError(f"cannot read artifact: {e.strerror}", str(path))


def write_snapshot(field: StrategyField, path: PathLike) -> Path:
    """Binary greyscale PGM: strategy 1 black (0), strategy 2 white (255), rows first.

    Raises:
        UnsupportedDimensionError: if the lattice is not two-dimensional.
    """
    geometry = field.geometry
    if geometry.d != 2:
        raise UnsupportedDimensionError(f"PGM snapshots need d = 2, got d = {geometry.d}")
    rows, cols = geometry.sides
    header = f"P5\n{cols} {rows}\n255\n".encode("ascii")
    pixels = np.where(field.to_array(), 0, 255).astype(np.uint8)
    return _write_bytes(path, header + pixels.tobytes())


def _row(sample: SeriesSample) -> str:
    return f"{sample.t!r},{sample.density1!r},{sample.flips},{sample.active}"


def write_density_csv(report: Union[RunReport, Sequence[SeriesSample]], path: PathLike) -> Path:
    """One row per series sample under the header `t,density1,flips,active`."""
    series = report.series if isinstance(report, RunReport) else report
    return write_lines(path, [CSV_HEADER] + [_row(sample) for sample in series])


def write_aggregate_csv(reports: Sequence[RunReport], path: PathLike) -> Path:
    """All replicas in index order, with a leading `seed` column."""
    lines = ["seed," + CSV_HEADER]
    for report in reports:
        lines.extend(f"{report.seed},{_row(sample)}" for sample in report.series)
    return write_lines(path, lines)


def encode_runs(field: StrategyField) -> List[int]:
    """Alternating run lengths over the row-major indicator, starting with a strategy-2 run."""
    flat = field.indicator().astype(np.int8)
    if flat.size == 0:
        return []
    edges = np.flatnonzero(np.diff(flat)) + 1
    bounds = np.concatenate(([0], edges, [flat.size]))
    runs = np.diff(bounds).tolist()
    if flat[0]:
        runs.insert(0, 0)
    return runs


def decode_runs(geometry: LatticeGeometry, runs: Sequence[int]) -> StrategyField:
    if any(r < 0 for r in runs) or sum(runs) != geometry.n_sites:
        raise ValueError(f"run lengths sum to {sum(runs)}, expected {geometry.n_sites}")
    values = np.arange(len(runs)) % 2 == 1
    return StrategyField.from_indicator(geometry, np.repeat(values, runs))


def write_checkpoint(field: StrategyField, path: PathLike) -> Path:
    """Text checkpoint with `d`, `sides` and the run lengths (see docs/checkpoint_format.md)."""
    geometry = field.geometry
    lines = [
        "# latgame checkpoint",
        f"d = {geometry.d}",
        "sides = " + ",".join(str(s) for s in geometry.sides),
        "rle = " + " ".join(str(r) for r in encode_runs(field)),
    ]
    return write_lines(path, lines)


def read_checkpoint(path: PathLike) -> StrategyField:
    """Inverse of write_checkpoint."""
    entries: Dict[str, str] = {}
    for raw in _read_text(path).splitlines():
        content = raw.split("#", 1)[0].strip()
        if not content:
            continue
        key, sep, value = content.partition("=")
        if not sep:
            raise ArtifactError(f"malformed checkpoint line {raw!r}", str(path))
        entries[key.strip()] = value.strip()
    try:
        sides = tuple(int(s) for s in entries["sides"].split(","))
        geometry = LatticeGeometry(d=int(entries["d"]), sides=sides)
        runs = [int(r) for r in entries.get("rle", "").split()]
        return decode_runs(geometry, runs)
    except (KeyError, ValueError) as e:
        raise ArtifactError(f"invalid checkpoint: {e}", str(path))


def sha256_file(path: PathLike) -> str:
    digest = hashlib.sha256()
    try:
        with open(path, "rb") as f:
            for block in iter(lambda: f.read(1 << 16), b""):
                digest.update(block)
    except OSError as e:
        raise ArtifactError(f"cannot hash artifact: {e.strerror}", str(path))
    return digest.hexdigest()


def record_artifact(manifest: RunManifest, output_dir: PathLike, path: PathLike) -> None:
    """Add a written file to the manifest under its path relative to output_dir."""
    name = os.path.relpath(path, output_dir).replace(os.sep, "/")
    manifest.artifacts[name] = sha256_file(path)


def write_manifest(manifest: RunManifest, output_dir: PathLike) -> Path:
    path = Path(output_dir) / MANIFEST_NAME
    write_lines(path, manifest.to_text().splitlines())
    logger.info("Manifest written to %s (%d artifacts)", path, len(manifest.artifacts))
    return path


def verify_manifest(output_dir: PathLike) -> List[str]:
    """Recompute every listed checksum.

    Returns:
        Names of artifacts that are missing or whose checksum differs; empty when all match.
    """
    mismatched = []
    for raw in _read_text(Path(output_dir) / MANIFEST_NAME).splitlines():
        key, _, digest = raw.partition(" = ")
        if not key.startswith("artifact."):
            continue
        name = key[len("artifact."):]
        target = Path(output_dir) / name
        if not target.is_file() or sha256_file(target) != digest.strip():
            mismatched.append(name)
    return mismatched
