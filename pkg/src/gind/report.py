"""Verification records and their JSON encoding."""

import dataclasses
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .norms import (
    matrix_from_json,
    matrix_to_json,
    norm_eval,
    spec_from_json,
    spec_to_json,
    spec_to_text,
    vector_from_json,
    vector_to_json,
)

EQUAL = "equal"
AT_MOST = "at_most"
AT_LEAST = "at_least"


@dataclass(frozen=True)
class Check:
    """``achieved`` compared against ``predicted`` with relative slack
    ``tolerance * max(|predicted|, 1)``."""

    name: str
    predicted: float
    achieved: float
    tolerance: float
    compare: str = EQUAL

    @property
    def slack(self):
        return self.tolerance * max(abs(self.predicted), 1.0)

    @property
    def passed(self):
        if not (math.isfinite(self.predicted) and math.isfinite(self.achieved)):
            return False
        if self.compare == EQUAL:
            return abs(self.achieved - self.predicted) <= self.slack
        if self.compare == AT_MOST:
            return self.achieved <= self.predicted + self.slack
        return self.achieved >= self.predicted - self.slack

    def to_json(self):
        return {"name": self.name, "predicted": self.predicted, "achieved": self.achieved,
                "tolerance": self.tolerance, "compare": self.compare, "passed": self.passed}


@dataclass(frozen=True)
class Witness:
    """A named vector or matrix. ``norms`` is ``(spec,)`` for a vector whose
    norm is ``claim``, or ``(d, c)`` for a matrix whose g-ind lower bound is
    ``claim``."""

    name: str
    value: np.ndarray
    claim: Optional[float] = None
    norms: tuple = ()

    def reevaluate(self, seed=0):
        from .core import gind

        if self.claim is None or not self.norms:
            return None
        if len(self.norms) == 1:
            return norm_eval(self.norms[0], self.value)
        return gind(self.value, self.norms[0], self.norms[1], seed).lower

    def to_json(self):
        v = np.asarray(self.value)
        out = {"name": self.name,
               "kind": "matrix" if v.ndim == 2 else "vector",
               "value": matrix_to_json(v) if v.ndim == 2 else vector_to_json(v)}
        if self.claim is not None:
            out["claim"] = self.claim
        if self.norms:
            out["norms"] = [spec_to_json(s) for s in self.norms]
            out["norms_text"] = [spec_to_text(s) for s in self.norms]
        return out

    @classmethod
    def from_json(cls, obj):
        value = (matrix_from_json(obj["value"]) if obj["kind"] == "matrix"
                 else vector_from_json(obj["value"]))
        norms = tuple(spec_from_json(s) for s in obj.get("norms", ()))
        return cls(obj["name"], value, obj.get("claim"), norms)


@dataclass(frozen=True)
class WitnessReport:
    """Outcome of one theorem check.

    ``predicted``/``achieved``/``tolerance`` mirror the first entry of
    ``checks``; ``passed`` requires every check to pass.
    """

    theorem: str
    inputs: dict
    checks: tuple
    seed: int = 0
    witnesses: tuple = ()
    verdict: Optional[bool] = None
    details: dict = field(default_factory=dict)

    @property
    def predicted(self):
        return self.checks[0].predicted

    @property
    def achieved(self):
        return self.checks[0].achieved

    @property
    def tolerance(self):
        return self.checks[0].tolerance

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def with_tolerance(self, tol):
        checks = tuple(dataclasses.replace(c, tolerance=tol) for c in self.checks)
        return dataclasses.replace(self, checks=checks)

    def to_json(self):
        out = {
            "theorem": self.theorem,
            "inputs": self.inputs,
            "predicted": self.predicted,
            "achieved": self.achieved,
            "tolerance": self.tolerance,
            "seed": self.seed,
            "passed": self.passed,
            "checks": [c.to_json() for c in self.checks],
            "witnesses": [w.to_json() for w in self.witnesses],
        }
        if self.verdict is not None:
            out["verdict"] = self.verdict
        if self.details:
            out["details"] = self.details
        return out


@dataclass(frozen=True)
class CongruenceVerdict:
    congruent: bool
    gamma: Optional[float] = None
    alpha: Optional[float] = None
    beta: Optional[float] = None
    separating_vectors: Optional[tuple] = None

    def to_json(self):
        out = {"congruent": self.congruent}
        if self.congruent:
            out.update(gamma=self.gamma, alpha=self.alpha, beta=self.beta)
        else:
            out["separating_vectors"] = [vector_to_json(v) for v in self.separating_vectors]
        return out
