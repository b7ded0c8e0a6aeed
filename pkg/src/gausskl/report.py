"""Run reports and the JSON input schemas used by the command-line tool."""

import json
from dataclasses import asdict, dataclass, field

_NUMBERS = {"type": "array", "items": {"type": "number"}, "minItems": 1}
_MATRIX = {"type": "array", "items": _NUMBERS, "minItems": 1}

DISTRIBUTION_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "DistributionSpec",
    "type": "object",
    "properties": {"mean": _NUMBERS, "cov": _MATRIX, "var": _NUMBERS},
    "required": ["mean"],
    "oneOf": [{"required": ["cov"]}, {"required": ["var"]}],
    "additionalProperties": False,
}

VAE_PARAMS_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "VaeKlParams",
    "type": "object",
    "properties": {
        "mu": {"oneOf": [_NUMBERS, _MATRIX]},
        "log_var": {"oneOf": [_NUMBERS, _MATRIX]},
    },
    "required": ["mu", "log_var"],
    "additionalProperties": False,
}


@dataclass
class RunReport:
    """Everything one CLI invocation computed.

    ``status`` maps each enabled check to ``"PASS"`` or ``"FAIL"``.
    """

    command: str
    inputs: dict
    closed_form: dict = field(default_factory=dict)
    mc: dict | None = None
    gradient_check: float | None = None
    identities: list | None = None
    status: dict = field(default_factory=dict)

    @property
    def passed(self):
        return all(v == "PASS" for v in self.status.values())

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, d):
        return cls(**d)

    def to_json(self):
        # Python floats serialize as their shortest round-trip repr.
        return json.dumps(self.to_dict(), indent=2, allow_nan=False)

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(loads_strict(text))


def _reject_constant(name):
    raise ValueError(f"non-standard JSON constant {name!r}")


def loads_strict(text):
    """``json.loads`` that refuses ``NaN``/``Infinity`` literals."""
    return json.loads(text, parse_constant=_reject_constant)
