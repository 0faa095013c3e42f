"""Structured verification results shared by the checkers and the CLI."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple, Union

from .numerics import ScalarMode, float_str, rational_str


@dataclass(frozen=True)
class LatticeBox:
    """Rectangular verification window over variables (i, k) and degrees (m, n)."""

    max_i: int
    max_k: int
    max_m: int
    max_n: int

    def __post_init__(self):
        if min(self.max_i, self.max_k, self.max_m, self.max_n) < 0:
            raise ValueError("box bounds must be non-negative")

    def degree_pairs(self):
        for m in range(self.max_m + 1):
            for n in range(self.max_n + 1):
                yield m, n

    def variable_pairs(self):
        for i in range(self.max_i + 1):
            for k in range(self.max_k + 1):
                yield i, k


@dataclass(frozen=True)
class EvalReport:
    """Outcome of one identity-verification run.

    In exact mode a pass means the maximum discrepancy is literally zero;
    in float mode it means the maximum discrepancy is within `tol`.  The
    counterexample, when present, is the first failing index tuple in
    lexicographic lattice order.
    """

    identity: str
    box: object
    mode: ScalarMode
    max_abs_discrepancy: Union[Fraction, float]
    counterexample: Optional[Tuple] = None
    tol: Optional[float] = None

    @property
    def passed(self) -> bool:
        if self.mode is ScalarMode.EXACT:
            return self.max_abs_discrepancy == 0
        return float(self.max_abs_discrepancy) <= self.tol

    def _box_obj(self):
        if isinstance(self.box, LatticeBox):
            return {
                "max_i": self.box.max_i,
                "max_k": self.box.max_k,
                "max_m": self.box.max_m,
                "max_n": self.box.max_n,
            }
        return self.box

    def to_json_obj(self) -> dict:
        if isinstance(self.max_abs_discrepancy, Fraction):
            disc = rational_str(self.max_abs_discrepancy)
        else:
            disc = float_str(float(self.max_abs_discrepancy))
        return {
            "suite": self.identity,
            "box": self._box_obj(),
            "mode": self.mode.value,
            "max_discrepancy": disc,
            "counterexample": list(self.counterexample) if self.counterexample else None,
            "pass": self.passed,
        }

    def render(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        if isinstance(self.max_abs_discrepancy, Fraction):
            disc = rational_str(self.max_abs_discrepancy)
        else:
            disc = float_str(float(self.max_abs_discrepancy))
        parts = [
            f"{status} {self.identity}",
            f"mode={self.mode.value}",
            f"box={self._box_obj()}",
            f"max_discrepancy={disc}",
        ]
        if self.tol is not None:
            parts.append(f"tol={float_str(self.tol)}")
        if self.counterexample is not None:
            parts.append(f"counterexample={self.counterexample}")
        return "  ".join(parts)
