"""Certified numeric intervals: the only way estimates leave the library."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class CertifiedInterval:
    """[lo, hi] with the certificate method recorded.

    `method` names how the endpoints were obtained (e.g. "lipschitz-grid",
    "best-found", "best-found/analytic-bound"); `evaluations` counts the norm
    evaluations spent.
    """

    lo: float
    hi: float
    method: str = "best-found"
    evaluations: int = 0

    def __post_init__(self):
        if self.lo > self.hi + 1e-12:
            raise ValueError(f"invalid interval [{self.lo}, {self.hi}]")

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def contains(self, x: float, slack: float = 0.0) -> bool:
        return self.lo - slack <= x <= self.hi + slack

    def scale(self, c: float) -> "CertifiedInterval":
        if c < 0:
            raise ValueError("scale factor must be non-negative")
        return CertifiedInterval(self.lo * c, self.hi * c, self.method, self.evaluations)

    def to_json(self) -> dict:
        return {"lo": self.lo, "hi": self.hi, "method": self.method, "evaluations": self.evaluations}

    @classmethod
    def exact(cls, x: float, method: str = "exact") -> "CertifiedInterval":
        return cls(x, x, method)
