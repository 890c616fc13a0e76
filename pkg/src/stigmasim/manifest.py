"""Run manifests: the resolved configuration plus digests of every output."""

from __future__ import annotations

import hashlib
import json
from pathlib import Path
from typing import Optional

from .errors import ConfigError

ARTIFACT_VERSION = 1


def file_digest(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            h.update(chunk)
    return h.hexdigest()


def build_manifest(subcommand: str, config_doc: dict, master_seed: int,
                   out_dir, output_names: list,
                   extra: Optional[dict] = None) -> dict:
    outputs = [{"name": name, "sha256": file_digest(Path(out_dir) / name)}
               for name in output_names]
    doc = {
        "artifact_version": ARTIFACT_VERSION,
        "subcommand": subcommand,
        "master_seed": master_seed,
        "config": config_doc,
        "outputs": outputs,
    }
    if extra:
        doc.update(extra)
    return doc


def write_manifest(path, manifest: dict) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(json.dumps(manifest, indent=2, sort_keys=True) + "\n")


def read_config_doc(path) -> tuple[dict, Optional[str], dict]:
    """Load a config file. A manifest from a previous run is accepted in
    place of a bare config; returns (config doc, manifest subcommand or None,
    extra manifest settings such as measure_every)."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ConfigError("config", f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError("config", f"invalid JSON in {path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError("config", "expected a JSON object at the top level")
    if "subcommand" in doc and "config" in doc:
        extras = {}
        if "measure_every" in doc:
            extras["measure_every"] = doc["measure_every"]
        return doc["config"], doc["subcommand"], extras
    return doc, None, {}
