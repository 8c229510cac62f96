"""File formats: state JSON, coefficient/QMI CSV, run manifests, atomic writes."""

from __future__ import annotations

import datetime
import hashlib
import json
import os
import tempfile
from pathlib import Path

import numpy as np

from .states import DenseState


def atomic_write(path, text: str) -> None:
    """Write via a temporary file in the same directory, then rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def dumps(doc) -> str:
    # json writes floats with repr, the shortest string that round-trips exactly
    return json.dumps(doc, indent=1, allow_nan=False) + "\n"


def fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, str):
        return x
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x)).lower()
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


def csv_text(header, rows) -> str:
    lines = [",".join(header)] if header else []
    lines += [",".join(fmt(x) for x in row) for row in rows]
    return "\n".join(lines) + "\n"


def sha256_file(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def content_hash(path) -> str:
    """SHA-256 of an input file, ignoring any manifest embedded in a JSON report.

    Reports carry a run timestamp; hashing them without it keeps the hash,
    and so every downstream manifest, identical across reruns.
    """
    if str(path).endswith(".json"):
        try:
            with open(path) as fh:
                doc = json.load(fh)
        except (json.JSONDecodeError, UnicodeDecodeError):
            doc = None
        if isinstance(doc, dict) and "manifest" in doc:
            doc.pop("manifest")
            return hashlib.sha256(dumps(doc).encode()).hexdigest()
    return sha256_file(path)


def make_manifest(command: str, argv, seeds=None, inputs=()) -> dict:
    from . import __version__

    return {
        "command": command,
        "argv": list(argv),
        "seeds": seeds or {},
        "version": __version__,
        "inputs": {str(p): content_hash(p) for p in inputs},
        "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds"),
    }


def write_json(path, doc: dict, manifest: dict) -> None:
    atomic_write(path, dumps(dict(doc, manifest=manifest)))


def write_with_sidecar(path, text: str, manifest: dict) -> None:
    """Write ``text`` as is and the manifest next to it as ``<path>.manifest.json``."""
    atomic_write(path, text)
    atomic_write(f"{path}.manifest.json", dumps(manifest))


# -- states ---------------------------------------------------------------------


def state_to_json(state: DenseState) -> dict:
    return {
        "L": state.L,
        "d": state.d,
        "kind": state.kind,
        "amplitudes": [[float(a.real), float(a.imag)] for a in state.amplitudes],
    }


def state_from_json(doc: dict) -> DenseState:
    try:
        L, d = int(doc["L"]), int(doc["d"])
        amps = np.asarray(doc["amplitudes"], dtype=float)
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed state document: {exc}") from None
    if amps.ndim != 2 or amps.shape[1] != 2:
        raise ValueError("amplitudes must be a list of [re, im] pairs")
    return DenseState(L, d, amps[:, 0] + 1j * amps[:, 1], str(doc.get("kind", "generic")))


def read_state(path) -> DenseState:
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(f"{path} is not valid JSON: {exc}") from None
    return state_from_json(doc)


def read_matrix_csv(path) -> np.ndarray:
    """Numeric CSV, row-major, no header; ``#`` lines are ignored."""
    rows = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            try:
                rows.append([float(x) for x in line.split(",")])
            except ValueError:
                raise ValueError(f"{path}: non-numeric entry in line {line!r}") from None
    if not rows or len({len(r) for r in rows}) != 1:
        raise ValueError(f"{path}: expected a rectangular numeric table")
    return np.array(rows)
