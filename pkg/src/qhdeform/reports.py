"""Verification result records."""
from __future__ import annotations

from dataclasses import asdict, dataclass, field


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of one identity check.

    For exact checks ``max_residual`` is 0 on a pass and otherwise the number
    of nonzero entries of the cleared residual; numeric checks store the
    largest entry of |lhs - rhs| divided by max(1, |lhs|_max, |rhs|_max).
    """

    identity: str
    mode: str
    max_residual: float
    passed: bool
    tag: str
    two_j: int | None = None
    detail: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = asdict(self)
        out["max_residual"] = float(self.max_residual)
        return out

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        where = "" if self.two_j is None else f" twoJ={self.two_j}"
        return f"[{status}] {self.tag} {self.identity} ({self.mode}{where}) residual={self.max_residual:.3g}"
