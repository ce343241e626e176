"""Self-contained witness certificates (``.sysw.json``) and their verifier.

A certificate states ``(genus, p, nu, k, r, d)`` and a claimed systole floor,
together with every inequality that justifies it.  Endpoints are written as
exact decimal expansions of the binary endpoints, so parsing an emitted
document reproduces it bit for bit.

The verifier trusts none of the producer's enclosures.  It recomputes the
base genus, ``4 log p``, the packing count and the three surgery terms from
the stated inputs at twice the producer's precision, and treats the stored
intervals only as claims to be checked.  It depends on the interval kernel,
the hyperbolic formulas and the congruence model, never on the optimizer.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from mpmath import libmp as lm

from .checks import Check, check
from .config import Config
from .congruence import genus_of
from .errors import DomainError, ParseError
from .hyperbolic import disk_perimeter, sinh_squared, systole_upper_bound
from .interval import (
    MAX_PRECISION,
    Interval,
    as_interval,
    dyadic_from_fraction,
    exact_decimal,
    iv_from_rational,
    iv_min,
    log,
    scale2,
)
from .primes import is_prime

FORMAT = "sysw-certificate"
VERSION = 1
EXTENSION = ".sysw.json"

ASSUMPTIONS = (
    "For the stated odd prime p and multiplier nu there is a closed hyperbolic "
    "surface of genus (p^3 - p)*nu + 1 whose systole is at least 4 log p "
    "(a principal congruence cover of a fixed arithmetic surface).",
    "Among all closed CAT(-1) surfaces of a fixed genus, the maximal systole is "
    "attained by a hyperbolic metric, so the floor certified for the surgered "
    "CAT(-1) surface is a floor for the hyperbolic maximum.",
)

# name -> the inequality it certifies
CHECK_DOCS = {
    "positivity": "0 < min(r, d)",
    "separation": "s = r + d < (1/4) * 4 log p",
    "handle-count": "2k <= N, with N >= (g_p - 1) / sinh(s)^2 from the packing count",
    "base-floor": "claimed floors <= 4 log p",
    "lemma-min": "bound <= min(4 log p, 2 pi sinh r, 2 d)",
    "sanity": "bound <= 2 log(4g - 2)",
    "genus": "genus = (p^3 - p) nu + 1 + k",
    "checks": "the document lists every required check with a true verdict",
}
REQUIRED_SURGERY = ("separation", "handle-count", "lemma-min", "sanity")


@dataclass(frozen=True)
class Certificate:
    genus: int
    p: int
    nu: int
    k: int
    theta: Fraction
    lambda_mode: str
    lam: Interval
    lambda_pmax: int | None
    precision_bits: int
    precision_source: str
    r: Interval | None
    d: Interval | None
    s: Interval | None
    sys_base_floor: Interval
    bound: Interval
    packing_N: int | None
    checks: tuple[Check, ...]
    assumptions: tuple[str, ...] = ASSUMPTIONS
    version: int = VERSION

    # -- serialization ------------------------------------------------------

    def to_dict(self) -> dict:
        out: dict = {
            "format": FORMAT,
            "version": self.version,
            "genus": self.genus,
            "p": self.p,
            "nu": self.nu,
            "k": self.k,
            "theta": f"{self.theta.numerator}/{self.theta.denominator}",
            "lambda_mode": self.lambda_mode,
            "lambda": _iv_dump(self.lam),
            "lambda_pmax": self.lambda_pmax,
            "precision_bits": self.precision_bits,
            "precision_source": self.precision_source,
        }
        if self.k > 0:
            out["r"] = _iv_dump(self.r)
            out["d"] = _iv_dump(self.d)
            out["s"] = _iv_dump(self.s)
        out["sys_base_floor"] = _iv_dump(self.sys_base_floor)
        out["bound"] = _iv_dump(self.bound)
        if self.k > 0:
            out["packing_N"] = self.packing_N
        out["checks"] = [
            {
                "name": c.name,
                "inequality": CHECK_DOCS.get(c.name, ""),
                "lhs": _iv_dump(c.lhs),
                "relation": c.relation,
                "rhs": _iv_dump(c.rhs),
                "verdict": c.verdict,
            }
            for c in self.checks
        ]
        out["assumptions"] = list(self.assumptions)
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def _iv_dump(x: Interval) -> dict:
    return {"lo": exact_decimal(x.lo), "hi": exact_decimal(x.hi)}


# -- emission ---------------------------------------------------------------


def emit_certificate(w, config: Config | None = None) -> Certificate:
    """Certificate for an auditor :class:`~sysw.audit.Witness`."""
    config = config or Config(nu=w.plan.base.nu)
    plan = w.plan
    base = plan.base
    prec = base.sys_floor.prec
    lam = config.lambda_interval()
    lam_pmax = config.gap_pmax if config.lambda_mode == "empirical" else None
    low = Interval.point(plan.bound.lo, prec)
    sanity = check("sanity", low, "<=", systole_upper_bound(w.genus, prec))
    if plan.k == 0:
        checks: tuple[Check, ...] = (sanity,)
    else:
        r, d, s = plan.r, plan.d, plan.s
        terms = iv_min(base.sys_floor, disk_perimeter(r), scale2(d, 1))
        checks = (
            check("positivity", Interval.point(0, prec), "<", iv_min(r, d)),
            check("separation", s, "<", base.log_p),
            check(
                "handle-count",
                Interval.point(2 * plan.k, prec),
                "<=",
                (base.genus - 1) / sinh_squared(s),
            ),
            check("lemma-min", low, "<=", terms),
            sanity,
        )
    return Certificate(
        genus=w.genus,
        p=base.p,
        nu=base.nu,
        k=plan.k,
        theta=config.theta,
        lambda_mode=config.lambda_mode,
        lam=lam,
        lambda_pmax=lam_pmax,
        precision_bits=prec,
        precision_source=config.precision_source,
        r=plan.r,
        d=plan.d,
        s=plan.s,
        sys_base_floor=base.sys_floor,
        bound=plan.bound,
        packing_N=plan.packing_N if plan.k > 0 else None,
        checks=checks,
    )


# -- parsing ----------------------------------------------------------------


def _endpoint(text, upward: bool, prec: int) -> tuple:
    if not isinstance(text, str):
        raise ParseError(f"interval endpoint must be a decimal string, got {text!r}")
    try:
        q = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad decimal endpoint {text!r}") from exc
    exact = dyadic_from_fraction(q)
    if exact is not None:
        return exact
    iv = iv_from_rational(q, prec)
    return iv.hi if upward else iv.lo


def _iv_load(obj, prec: int, what: str) -> Interval:
    if not isinstance(obj, dict) or set(obj) != {"lo", "hi"}:
        raise ParseError(f"{what}: expected an object with 'lo' and 'hi'")
    lo = _endpoint(obj["lo"], False, prec)
    hi = _endpoint(obj["hi"], True, prec)
    if lm.mpf_gt(lo, hi):
        raise ParseError(f"{what}: lo exceeds hi")
    return Interval(lo, hi, prec)


def _int(obj: dict, key: str, minimum: int | None = None) -> int:
    v = obj.get(key)
    if isinstance(v, bool) or not isinstance(v, int):
        raise ParseError(f"{key}: expected an integer")
    if minimum is not None and v < minimum:
        raise ParseError(f"{key}: must be at least {minimum}")
    return v


def parse_certificate(text: str) -> Certificate:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"not JSON: {exc}") from exc
    if not isinstance(obj, dict) or obj.get("format") != FORMAT:
        raise ParseError("not a sysw certificate")
    version = _int(obj, "version")
    if version != VERSION:
        raise ParseError(f"unsupported version {version}")
    prec = _int(obj, "precision_bits", 2)
    if prec > MAX_PRECISION:
        raise ParseError("precision_bits above the supported cap")
    k = _int(obj, "k", 0)
    try:
        theta = Fraction(obj["theta"])
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise ParseError("theta: expected a rational string") from exc
    mode = obj.get("lambda_mode")
    if mode not in ("empirical", "assumed"):
        raise ParseError("lambda_mode: expected 'empirical' or 'assumed'")
    pmax = obj.get("lambda_pmax")
    if pmax is not None and (isinstance(pmax, bool) or not isinstance(pmax, int)):
        raise ParseError("lambda_pmax: expected an integer or null")
    surgery_keys = ("r", "d", "s", "packing_N")
    if k > 0:
        missing = [key for key in surgery_keys if key not in obj]
        if missing:
            raise ParseError(f"k >= 1 requires fields {missing}")
        r, d, s = (_iv_load(obj[key], prec, key) for key in ("r", "d", "s"))
        packing = _int(obj, "packing_N", 0)
    else:
        if any(key in obj for key in surgery_keys):
            raise ParseError("k = 0 certificates carry no surgery fields")
        r = d = s = None
        packing = None
    raw_checks = obj.get("checks")
    if not isinstance(raw_checks, list):
        raise ParseError("checks: expected a list")
    checks = []
    for i, c in enumerate(raw_checks):
        if not isinstance(c, dict):
            raise ParseError(f"checks[{i}]: expected an object")
        name, rel, verdict = c.get("name"), c.get("relation"), c.get("verdict")
        if not isinstance(name, str) or rel not in ("<", "<=", ">=") or not isinstance(verdict, bool):
            raise ParseError(f"checks[{i}]: bad name, relation or verdict")
        lhs = _iv_load(c.get("lhs"), prec, f"checks[{i}].lhs")
        rhs = _iv_load(c.get("rhs"), prec, f"checks[{i}].rhs")
        checks.append(Check(name, lhs, rhs, rel, verdict))
    assumptions = obj.get("assumptions")
    if not isinstance(assumptions, list) or not all(isinstance(a, str) for a in assumptions):
        raise ParseError("assumptions: expected a list of strings")
    source = obj.get("precision_source")
    if not isinstance(source, str):
        raise ParseError("precision_source: expected a string")
    return Certificate(
        genus=_int(obj, "genus"),
        p=_int(obj, "p"),
        nu=_int(obj, "nu", 1),
        k=k,
        theta=theta,
        lambda_mode=mode,
        lam=_iv_load(obj.get("lambda"), prec, "lambda"),
        lambda_pmax=pmax,
        precision_bits=prec,
        precision_source=source,
        r=r,
        d=d,
        s=s,
        sys_base_floor=_iv_load(obj.get("sys_base_floor"), prec, "sys_base_floor"),
        bound=_iv_load(obj.get("bound"), prec, "bound"),
        packing_N=packing,
        checks=tuple(checks),
        assumptions=tuple(assumptions),
        version=version,
    )


# -- verification -----------------------------------------------------------


@dataclass(frozen=True)
class Verdict:
    accepted: bool
    failed_check: str | None
    checks: tuple[Check, ...] = field(default=())
    message: str = ""

    def __bool__(self) -> bool:
        return self.accepted


class _Reject(Exception):
    def __init__(self, name: str, message: str):
        self.name = name
        self.message = message


def _floor_count(g: int, s: Interval) -> int:
    """``floor((g - 1) / sinh(s)**2)`` from below, escalating for exact ``s``."""
    prec = s.prec
    while True:
        v = (g - 1) / sinh_squared(s.with_prec(prec))
        lo = int(lm.to_int(v.lo, "f"))
        if not s.is_point or lo == lm.to_int(v.hi, "f") or prec >= MAX_PRECISION:
            return lo
        prec = min(2 * prec, MAX_PRECISION)


def verify_certificate(doc) -> Verdict:
    """Accept iff every inequality holds when recomputed from the inputs.

    ``doc`` may be a :class:`Certificate` or its JSON text; malformed text
    raises :class:`~sysw.errors.ParseError`.
    """
    if isinstance(doc, str):
        doc = parse_certificate(doc)
    prec = min(2 * doc.precision_bits, MAX_PRECISION)
    done: list[Check] = []

    def require(c: Check, why: str):
        done.append(c)
        if not c.verdict:
            raise _Reject(c.name, why)

    def fail(name: str, why: str):
        raise _Reject(name, why)

    try:
        if doc.p < 3 or doc.p % 2 == 0 or not is_prime(doc.p):
            fail("genus", f"p = {doc.p} is not an odd prime")
        base_genus = genus_of(doc.p, doc.nu)
        log_p = log(as_interval(doc.p, prec))
        sys_floor = scale2(log_p, 2)
        claim = Interval.point(doc.bound.lo, prec)

        if doc.k > 0:
            r = doc.r.with_prec(prec)
            d = doc.d.with_prec(prec)
            require(
                check("positivity", Interval.point(0, prec), "<", iv_min(r, d)),
                "radii are not certainly positive",
            )
            s = r + d
            require(check("separation", s, "<", log_p), "r + d is not certainly below log p")
            two_k = Interval.point(2 * doc.k, prec)
            require(
                check("handle-count", two_k, "<=", (base_genus - 1) / sinh_squared(s)),
                f"2k = {2 * doc.k} exceeds the packing count",
            )
            n = _floor_count(base_genus, s)
            if not 2 * doc.k <= doc.packing_N <= n:
                fail("handle-count", f"stated N = {doc.packing_N} is not in [2k, {n}]")
            if lm.mpf_gt(doc.sys_base_floor.lo, sys_floor.lo):
                fail("base-floor", "stated base floor exceeds 4 log p")
            terms = iv_min(sys_floor, disk_perimeter(r), scale2(d, 1))
            require(check("lemma-min", claim, "<=", terms), "bound exceeds a surgery term")
            # the stated s is only a claim; the inequalities above used r + d
            if not doc.s.with_prec(prec).contains(s):
                fail("separation", "stated s does not enclose r + d")
        else:
            if lm.mpf_gt(doc.sys_base_floor.lo, sys_floor.lo):
                fail("base-floor", "stated base floor exceeds 4 log p")
            require(check("base-floor", claim, "<=", sys_floor), "bound exceeds 4 log p")

        if doc.genus < 2:
            fail("sanity", "genus below 2")
        require(
            check("sanity", claim, "<=", systole_upper_bound(doc.genus, prec)),
            "bound exceeds 2 log(4g - 2)",
        )
        if doc.genus != base_genus + doc.k:
            fail("genus", f"genus {doc.genus} != g_p + k = {base_genus + doc.k}")

        stated = {c.name: c.verdict for c in doc.checks}
        needed = REQUIRED_SURGERY if doc.k > 0 else ("sanity",)
        missing = [n for n in needed if n not in stated]
        if missing:
            fail("checks", f"document lacks checks {missing}")
        false = [n for n, v in stated.items() if not v]
        if false:
            fail("checks", f"document records failing checks {false}")
    except _Reject as rej:
        return Verdict(False, rej.name, tuple(done), rej.message)
    except DomainError as exc:
        return Verdict(False, "domain", tuple(done), str(exc))
    return Verdict(True, None, tuple(done), "all checks certified")
