"""Run configuration shared by the auditor, the certificate writer and the CLI."""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .errors import DomainError
from .interval import (
    MAX_PRECISION,
    PRECISION_ENV,
    Interval,
    default_precision,
    iv_from_decimal,
)
from .primes import build_gap_table

LAMBDA_MODES = ("empirical", "assumed")
DEFAULT_THETA = Fraction(21, 40)
DEFAULT_GAP_PMAX = 10**5


def _precision_source() -> str:
    return f"env:{PRECISION_ENV}" if PRECISION_ENV in os.environ else "default"


@dataclass(frozen=True)
class Config:
    nu: int = 1
    theta: Fraction = DEFAULT_THETA
    lambda_mode: str = "empirical"
    lambda_value: str | None = None
    precision_bits: int = field(default_factory=default_precision)
    candidate_window: int = 5
    jobs: int = field(default_factory=lambda: os.cpu_count() or 1)
    gap_pmax: int = DEFAULT_GAP_PMAX
    precision_source: str = field(default_factory=_precision_source)

    def __post_init__(self):
        object.__setattr__(self, "theta", Fraction(self.theta))
        if isinstance(self.nu, bool) or not isinstance(self.nu, int) or self.nu < 1:
            raise DomainError(f"nu must be a positive integer, got {self.nu!r}")
        if not 0 < self.theta < 1:
            raise DomainError(f"theta must lie in (0, 1), got {self.theta}")
        if self.lambda_mode not in LAMBDA_MODES:
            raise DomainError(f"lambda_mode must be one of {LAMBDA_MODES}")
        if self.lambda_mode == "assumed":
            if self.lambda_value is None:
                raise DomainError("assumed lambda mode needs a lambda value")
            if iv_from_decimal(self.lambda_value).lo_fraction() < 1:
                raise DomainError("assumed lambda must be at least 1")
        if not 2 <= self.precision_bits <= MAX_PRECISION:
            raise DomainError(f"precision_bits must lie in [2, {MAX_PRECISION}]")
        if self.candidate_window < 1:
            raise DomainError("candidate_window must be at least 1")
        if self.jobs < 1:
            raise DomainError("jobs must be at least 1")
        if self.gap_pmax < 3:
            raise DomainError("gap_pmax must be at least 3")

    def lambda_interval(self, p_max: int | None = None) -> Interval:
        """The gap constant: sieve-verified maximum, or the user's value."""
        if self.lambda_mode == "assumed":
            return iv_from_decimal(self.lambda_value, self.precision_bits)
        return _empirical_lambda(p_max or self.gap_pmax, self.theta, self.precision_bits)


@lru_cache(maxsize=16)
def _empirical_lambda(p_max: int, theta: Fraction, prec: int) -> Interval:
    return build_gap_table(p_max, theta, prec).lambda_emp
