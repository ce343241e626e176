"""Named, certified inequality checks."""

from __future__ import annotations

from dataclasses import dataclass

from mpmath import libmp as lm

from .interval import Interval

RELATIONS = ("<", "<=", ">=")


@dataclass(frozen=True)
class Check:
    name: str
    lhs: Interval
    rhs: Interval
    relation: str
    verdict: bool

    def __bool__(self) -> bool:
        return self.verdict


def decide(lhs: Interval, rhs: Interval, relation: str) -> bool:
    """Whether ``lhs relation rhs`` holds for every pair of enclosed values."""
    if relation == "<":
        return lm.mpf_lt(lhs.hi, rhs.lo)
    if relation == "<=":
        return lm.mpf_le(lhs.hi, rhs.lo)
    if relation == ">=":
        return lm.mpf_ge(lhs.lo, rhs.hi)
    raise ValueError(f"unknown relation {relation!r}")


def check(name: str, lhs: Interval, relation: str, rhs: Interval) -> Check:
    return Check(name, lhs, rhs, relation, decide(lhs, rhs, relation))
