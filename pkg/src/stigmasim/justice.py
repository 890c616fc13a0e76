"""Adjudication of arrests: classifier verdict and true-recidivism draw.

The only classifier shipped is the random one: a hard 0/1 verdict drawn
at the sentencing rate, independent of everything about the defendant.
The interface is deliberately wider than that, so that
covariate-based classifiers can plug in later without touching the
engine: ``adjudicate`` receives the full agent record and ignores it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

from .errors import ConfigError

if TYPE_CHECKING:
    from .engine import Civilian

CLASSIFIER_KINDS = ("random",)


@dataclass(frozen=True)
class ClassifierSpec:
    """Which classifier adjudicates arrests and at what sentencing rate."""

    kind: str = "random"
    sentencing_rate: float = 0.5

    def validate(self) -> None:
        if self.kind not in CLASSIFIER_KINDS:
            raise ConfigError("classifier.kind", f"unknown kind {self.kind!r}, expected one of {CLASSIFIER_KINDS}")
        if not 0.0 <= self.sentencing_rate <= 1.0:
            raise ConfigError("classifier.sentencing_rate", f"must be in [0, 1], got {self.sentencing_rate}")

    def to_json(self) -> dict:
        return {"kind": self.kind, "sentencing_rate": self.sentencing_rate}

    @classmethod
    def from_json(cls, doc: dict) -> "ClassifierSpec":
        spec = cls(kind=doc.get("kind", "random"), sentencing_rate=doc.get("sentencing_rate", 0.5))
        spec.validate()
        return spec


def adjudicate(agent: "Civilian", classifier: ClassifierSpec, recidivism_rate: float, rng) -> tuple[bool, bool]:
    """Judge one arrested agent and draw its true-recidivism label.

    Returns (judged_positive, recidivated). The two draws are independent
    of each other, of the agent's group, and of anything in the agent's
    history; the verdict does not feed back into future behavior. The
    agent's arrest_count / ever_positive_j / ever_recidivist bookkeeping
    is updated in place.
    """
    classifier.validate()
    judged = bool(rng.random() < classifier.sentencing_rate)
    recid = bool(rng.random() < recidivism_rate)
    agent.arrest_count += 1
    if judged:
        agent.ever_positive_j = True
    if recid:
        agent.ever_recidivist = True
    return judged, recid
