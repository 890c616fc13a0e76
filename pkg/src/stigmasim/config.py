"""Run configuration: the full parameter vector of one simulation.

A config is a plain JSON document with one key per field; the optional
``classifier`` sub-document mirrors the sentencing rate (see
:mod:`stigmasim.justice`). All defaults are materialized on load so a
serialized config is always complete and self-describing.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, replace
from pathlib import Path

from .errors import ConfigError
from .justice import ClassifierSpec

COP_RULES = ("exclusive", "sequential")

_PROBABILITY_FIELDS = (
    "crime_rate",
    "recidivism_rate",
    "sentencing_rate",
    "arrest_rate",
    "cop_bias",
    "stigma_follow",
    "long_move_prob",
)


@dataclass(frozen=True)
class SimConfig:
    """Parameters of one run: world geometry, rates, policy knobs, seed.

    Rate semantics: crime_rate is the per-tick chance a civilian commits
    a crime; recidivism_rate the chance an arrestee truly recidivates;
    sentencing_rate the random classifier's positive rate; arrest_rate
    the per-cop chance an adjacent flagged civilian is arrested;
    cop_bias the fraction of cops initially placed in region 1;
    stigma_follow the chance a cop follows the stigma field instead of
    moving at random.
    """

    grid_width: int = 50
    grid_height: int = 50
    n_per_group: int = 500
    n_cops: int = 10
    crime_rate: float = 0.01
    recidivism_rate: float = 0.4
    sentencing_rate: float = 0.5
    arrest_rate: float = 1.0
    cop_bias: float = 0.8
    stigma_follow: float = 0.5
    long_move_prob: float = 0.1
    long_move_len: int = 3
    stigma_bump_center: float = 1.0
    stigma_bump_neighbor: float = 0.5
    max_ticks: int = 5000
    seed: int = 0
    cop_rule: str = "exclusive"

    def validate(self) -> None:
        for name in _PROBABILITY_FIELDS:
            value = getattr(self, name)
            if not isinstance(value, (int, float)) or not 0.0 <= float(value) <= 1.0:
                raise ConfigError(name, f"must be a probability in [0, 1], got {value!r}")
        if self.grid_width < 2 or self.grid_width % 2 != 0:
            raise ConfigError("grid_width", f"must be even and >= 2 (two equal regions), got {self.grid_width}")
        if self.grid_height < 1:
            raise ConfigError("grid_height", f"must be >= 1, got {self.grid_height}")
        if self.n_per_group < 1:
            raise ConfigError("n_per_group", f"must be >= 1, got {self.n_per_group}")
        if self.n_cops < 1:
            raise ConfigError("n_cops", f"must be >= 1, got {self.n_cops}")
        if self.long_move_len < 1:
            raise ConfigError("long_move_len", f"must be >= 1, got {self.long_move_len}")
        if self.stigma_bump_neighbor <= 0:
            raise ConfigError("stigma_bump_neighbor", f"must be > 0, got {self.stigma_bump_neighbor}")
        if self.stigma_bump_neighbor >= self.stigma_bump_center:
            raise ConfigError(
                "stigma_bump_neighbor",
                f"must be < stigma_bump_center ({self.stigma_bump_center}), got {self.stigma_bump_neighbor}",
            )
        if self.max_ticks < 0:
            raise ConfigError("max_ticks", f"must be >= 0, got {self.max_ticks}")
        if not 0 <= int(self.seed) < 2**64:
            raise ConfigError("seed", f"must fit in 64 unsigned bits, got {self.seed}")
        if self.cop_rule not in COP_RULES:
            raise ConfigError("cop_rule", f"must be one of {COP_RULES}, got {self.cop_rule!r}")

    @property
    def classifier(self) -> ClassifierSpec:
        return ClassifierSpec(kind="random", sentencing_rate=self.sentencing_rate)

    def with_overrides(self, **changes) -> "SimConfig":
        cfg = replace(self, **changes)
        cfg.validate()
        return cfg

    def to_json(self) -> dict:
        doc = asdict(self)
        doc["classifier"] = self.classifier.to_json()
        return doc

    @classmethod
    def from_json(cls, doc: dict) -> "SimConfig":
        if not isinstance(doc, dict):
            raise ConfigError("config", f"expected a JSON object, got {type(doc).__name__}")
        known = set(cls.__dataclass_fields__)
        fields = {}
        for key, value in doc.items():
            if key == "classifier":
                continue
            if key not in known:
                raise ConfigError(key, "unknown configuration field")
            fields[key] = value
        if "classifier" in doc:
            spec = ClassifierSpec.from_json(doc["classifier"])
            flat = fields.get("sentencing_rate")
            if flat is not None and flat != spec.sentencing_rate:
                raise ConfigError(
                    "sentencing_rate",
                    f"flat value {flat} conflicts with classifier.sentencing_rate {spec.sentencing_rate}",
                )
            fields["sentencing_rate"] = spec.sentencing_rate
        cfg = cls(**fields)
        cfg.validate()
        return cfg


def load_config(path: str | Path) -> SimConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return SimConfig.from_json(json.load(fh))
