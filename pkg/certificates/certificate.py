"""
Certificates
Machine-checkable records saying which result fired, with the witnesses that
let a checker replay it.
"""

from dataclasses import dataclass, field
from enum import Enum
import math
import numbers

import numpy as np


class CertificateKind(str, Enum):
    NOT_WEAKLY_HYPERCYCLIC = "NotWeaklyHypercyclic"
    WEAKLY_CLOSED_ORBIT = "WeaklyClosedOrbit"
    CLOSED_RANGE = "ClosedRange"
    LAMBDA_HYPONORMAL = "LambdaHyponormal"
    NO_LAMBDA_EXISTS = "NoLambdaExists"


# Result tags, one per implication a certificate relies on
GEOMETRIC_GROWTH = "geometric-growth-weakly-closed"
WEAKLY_CLOSED_ORBIT = "expanding-vector-weakly-closed-orbit"
LAMBDA_NOT_HYPERCYCLIC = "lambda-le-1-not-weakly-hypercyclic"
CONTRACTIVE_FACTOR = "contractive-douglas-factor"
WCO_LAMBDA_CRITERION = "wco-pointwise-lambda-criterion"
WCO_SUPPORT_GATE = "wco-support-inclusion-gate"
WCO_CLOSED_RANGE = "wco-multiplier-bounded-below"
WCO_NOT_HYPERCYCLIC = "wco-criterion-not-weakly-hypercyclic"
DENSE_PSD = "dense-psd-minimal-lambda"

# Scopes
SCOPE_EXACT = "exact"
SCOPE_PREFIX = "prefix-evidence"
SCOPE_TAIL_ASSERTED = "tail-asserted"

SCOPE_NOTES = {
    SCOPE_EXACT: "exact for the finite system",
    SCOPE_PREFIX: "prefix evidence only",
    SCOPE_TAIL_ASSERTED: "prefix checked, tail bound asserted by the user",
}

INFINITY_TOKEN = "infinity"


def encode_number(value):
    """Numbers for JSON: +∞ becomes the string token, numpy scalars become Python"""
    if value is None or isinstance(value, str):
        return value
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, numbers.Integral):
        return int(value)
    number = float(value)
    if math.isinf(number) and number > 0:
        return INFINITY_TOKEN
    if not math.isfinite(number):
        raise ValueError(f"cannot encode {value!r}")
    return number


def decode_number(value):
    if value == INFINITY_TOKEN:
        return math.inf
    return value


@dataclass(frozen=True)
class Certificate:
    """
    Attributes:
        kind: CertificateKind
        theorem: result tag the certificate relies on
        witnesses: dict of witness values (λ, δ, indices, ...)
        scope: SCOPE_EXACT, SCOPE_PREFIX or SCOPE_TAIL_ASSERTED
    """

    kind: CertificateKind
    theorem: str
    witnesses: dict = field(default_factory=dict)
    scope: str = SCOPE_EXACT

    @property
    def scope_note(self):
        return SCOPE_NOTES[self.scope]

    def to_dict(self):
        return {
            "kind": self.kind.value,
            "theorem": self.theorem,
            "witnesses": {key: _encode_witness(value) for key, value in self.witnesses.items()},
            "scope": self.scope,
        }

    @classmethod
    def from_dict(cls, data):
        return cls(kind=CertificateKind(data["kind"]),
                   theorem=data["theorem"],
                   witnesses={key: _decode_witness(value)
                              for key, value in data.get("witnesses", {}).items()},
                   scope=data.get("scope", SCOPE_EXACT))

    def describe(self):
        details = ", ".join(f"{key}={_encode_witness(value)}" for key, value in self.witnesses.items())
        return f"{self.kind.value} [{self.theorem}] ({self.scope_note}): {details}"


def _encode_witness(value):
    if isinstance(value, (list, tuple)):
        return [_encode_witness(v) for v in value]
    return encode_number(value)


def _decode_witness(value):
    if isinstance(value, list):
        return [_decode_witness(v) for v in value]
    return decode_number(value)
