"""Three-valued comparison verdicts shared by every comparator."""
from __future__ import annotations

from dataclasses import dataclass

ISOMORPHIC = "isomorphic"
NOT_ISOMORPHIC = "not_isomorphic"
UNKNOWN = "unknown"


@dataclass(frozen=True)
class IsoVerdict:
    """Outcome of an invariant comparison.

    A witness accompanies only "isomorphic", a certificate (the reason
    the invariants differ) only "not_isomorphic", and a reason only
    "unknown".  A wrong definite verdict is a bug; unknown is legal.
    """
    status: str
    witness: dict | None = None
    certificate: str | None = None
    reason: str | None = None

    def __post_init__(self):
        if self.status not in (ISOMORPHIC, NOT_ISOMORPHIC, UNKNOWN):
            raise ValueError(f"bad verdict status: {self.status}")
        if self.witness is not None and self.status != ISOMORPHIC:
            raise ValueError("witness only accompanies an isomorphic verdict")
        if self.certificate is not None and self.status != NOT_ISOMORPHIC:
            raise ValueError("certificate only accompanies a not_isomorphic verdict")
        if self.reason is not None and self.status != UNKNOWN:
            raise ValueError("reason only accompanies an unknown verdict")

    def to_json(self) -> dict:
        out: dict = {"verdict": self.status}
        if self.witness is not None:
            out["witness"] = self.witness
        if self.certificate is not None:
            out["certificate"] = self.certificate
        if self.reason is not None:
            out["reason"] = self.reason
        return out


def isomorphic(witness: dict | None = None) -> IsoVerdict:
    return IsoVerdict(ISOMORPHIC, witness=witness)


def not_isomorphic(certificate: str) -> IsoVerdict:
    return IsoVerdict(NOT_ISOMORPHIC, certificate=certificate)


def unknown(reason: str) -> IsoVerdict:
    return IsoVerdict(UNKNOWN, reason=reason)
