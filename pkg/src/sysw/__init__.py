"""Certified witnesses for logarithmic systolic growth in every genus."""

from .audit import Witness, asymptotic_constant, audit_range, find_witness
from .certificate import emit_certificate, parse_certificate, verify_certificate
from .config import Config
from .congruence import BaseSurface, base_surface
from .interval import Interval
from .surgery import SurgeryPlan, optimize_parameters, paper_parameters

__all__ = [
    "BaseSurface",
    "Config",
    "Interval",
    "SurgeryPlan",
    "Witness",
    "asymptotic_constant",
    "audit_range",
    "base_surface",
    "emit_certificate",
    "find_witness",
    "optimize_parameters",
    "paper_parameters",
    "parse_certificate",
    "verify_certificate",
]
