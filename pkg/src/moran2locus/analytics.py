"""Closed-form predictions for the two-locus sweep.

Covers the finite-N diagnostics of the asymptotic parameter conditions,
the recombination/mutation regime split, the fixation-time prediction
``t_star``, the chain of proof constants and the phase-time schedule with
the population windows expected at each phase boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields
from typing import Optional

from .model import Parameters, ln_plus

__all__ = [
    "DomainError",
    "DegenerateParameterError",
    "ScheduleError",
    "RatioCheck",
    "ValidationReport",
    "validate_parameters",
    "power_law_check",
    "Regime",
    "classify_regime",
    "dominant_branch",
    "t_star",
    "ConstantChain",
    "derive_constants",
    "chain_relations",
    "PhaseSchedule",
    "phase_schedule",
    "Window",
    "phase_predictions",
    "RECOMBINATION",
    "MUTATION",
    "INDETERMINATE",
    "DEFAULT_EPSILON",
    "DEFAULT_DELTA",
]

RECOMBINATION = "recombination_dominating"
MUTATION = "mutation_dominating"
INDETERMINATE = "indeterminate"

DEFAULT_EPSILON = 1.0 / 32
DEFAULT_DELTA = 1.0 / 8
DEFAULT_SLACK = 0.01


class DomainError(ValueError):
    """Input outside the domain of a closed-form expression."""


class DegenerateParameterError(DomainError):
    """Parameters for which a prediction is undefined (e.g. ``mu = 0``)."""


class ScheduleError(DomainError):
    """A phase time has a nonpositive logarithm argument."""


# ---------------------------------------------------------------------------
# parameter diagnostics

DEFAULT_THRESHOLDS = {
    "s": 0.25,
    "1/(N mu)": 0.25,
    "N mu^2 / s": 0.25,
    "r ln+(N r) / s": 0.25,
    "(r/s) ln(N s)": 0.25,
    "(r/s) ln(s/mu)": 0.25,
}


@dataclass(frozen=True)
class RatioCheck:
    name: str
    value: float
    threshold: float

    @property
    def verdict(self) -> str:
        return "pass" if self.value < self.threshold else "warn"


@dataclass(frozen=True)
class ValidationReport:
    params: Parameters
    checks: tuple

    @property
    def passed(self) -> bool:
        return all(c.verdict == "pass" for c in self.checks)

    def __getitem__(self, name: str) -> RatioCheck:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def table(self) -> str:
        lines = [f"{'ratio':<18} {'value':>12} {'threshold':>10}  verdict"]
        for c in self.checks:
            lines.append(f"{c.name:<18} {c.value:>12.5g} {c.threshold:>10.3g}  {c.verdict}")
        return "\n".join(lines)


def _times(r: float, x: float) -> float:
    # r * x with 0 * inf = 0
    return 0.0 if r == 0.0 else r * x


def validate_parameters(params: Parameters, thresholds: Optional[dict] = None) -> ValidationReport:
    """Finite-N sizes of the quantities the asymptotics need to be small.

    Never fails on the ratios themselves; each gets a pass/warn verdict.
    """
    if not isinstance(params, Parameters):
        raise DomainError(f"expected Parameters, got {type(params).__name__}")
    th = dict(DEFAULT_THRESHOLDS)
    if thresholds:
        unknown = set(thresholds) - set(th)
        if unknown:
            raise DomainError(f"unknown thresholds {sorted(unknown)}")
        th.update(thresholds)
    n, mu, s, r = params.N, params.mu, params.s, params.r
    inv_nmu = math.inf if mu == 0 else 1.0 / (n * mu)
    log_s_mu = math.inf if mu == 0 else math.log(s / mu)
    values = {
        "s": s,
        "1/(N mu)": inv_nmu,
        "N mu^2 / s": n * mu * mu / s,
        "r ln+(N r) / s": r * ln_plus(n * r) / s,
        "(r/s) ln(N s)": _times(r / s, math.log(n * s)),
        "(r/s) ln(s/mu)": _times(r / s, log_s_mu),
    }
    return ValidationReport(params, tuple(RatioCheck(k, v, th[k]) for k, v in values.items()))


def power_law_check(a: float, b: float, c: float) -> tuple[bool, str]:
    """Whether ``mu = N^-a, r = N^-b, s = N^-c`` meets the conditions.

    They hold iff ``0 < c < b`` and ``(1 + c)/2 < a < 1``.
    """
    problems = []
    if not 0 < c:
        problems.append(f"c={c} must be positive")
    if not c < b:
        problems.append(f"need c < b, got c={c}, b={b}")
    if not (1 + c) / 2 < a:
        problems.append(f"need a > (1+c)/2 = {(1 + c) / 2:g}, got a={a}")
    if not a < 1:
        problems.append(f"need a < 1, got a={a}")
    if problems:
        return False, "; ".join(problems)
    return True, f"0 < c={c} < b={b} and {(1 + c) / 2:g} < a={a} < 1"


# ---------------------------------------------------------------------------
# regimes and the fixation-time law


@dataclass(frozen=True)
class Regime:
    """Which mechanism makes the first AB lineages, judged by
    ``rho = r ln+(N r) / (N mu^2)``."""

    tag: str
    rho: float
    threshold_hi: float = 10.0
    threshold_lo: float = 1.0


def _rho(params: Parameters) -> float:
    if params.mu == 0:
        raise DegenerateParameterError("mu = 0: the regime ratio is undefined")
    return params.r * ln_plus(params.N * params.r) / (params.N * params.mu ** 2)


def classify_regime(params: Parameters, hi: float = 10.0, lo: float = 1.0) -> Regime:
    if not lo <= hi:
        raise DomainError(f"need lo <= hi, got lo={lo}, hi={hi}")
    rho = _rho(params)
    if rho > hi:
        tag = RECOMBINATION
    elif rho <= lo:
        tag = MUTATION
    else:
        tag = INDETERMINATE
    return Regime(tag, rho, hi, lo)


def dominant_branch(regime: Regime) -> str:
    """Definite regime to use for formulas; an indeterminate regime goes to
    whichever of ``r ln+(N r)`` and ``N mu^2`` is larger."""
    if regime.tag != INDETERMINATE:
        return regime.tag
    return RECOMBINATION if regime.rho > 1.0 else MUTATION


def t_star(params: Parameters, r: Optional[float] = None) -> float:
    """Predicted fixation time of AB.

    ``(1/s) ln(N s^3 / (mu max(N mu^2, r ln+(N r))))``; ``r`` overrides the
    recombination probability in ``params``.
    """
    n, mu, s = params.N, params.mu, params.s
    r = params.r if r is None else r
    if mu <= 0 or s <= 0:
        raise DomainError("t_star needs mu > 0 and s > 0")
    denom = mu * max(n * mu * mu, r * ln_plus(n * r))
    arg = n * s ** 3 / denom
    if not arg > 0:
        raise DomainError(f"nonpositive logarithm argument {arg}")
    return math.log(arg) / s


# ---------------------------------------------------------------------------
# constant chain


@dataclass(frozen=True)
class ConstantChain:
    """Constants of the phase analysis for given ``(epsilon, delta)``.

    Strict-inequality constants sit a fixed relative ``slack`` above their
    lower bounds; the rest follow from their defining equalities.  The
    phase-3/4 constants depend on the regime and are kept for both
    (``_r`` recombination, ``_m`` mutation); ``branch`` selects the one
    exposed as ``C3``, ``K3``, ``C4``.
    """

    epsilon: float
    delta: float
    slack: float
    K: float
    C1: float
    C0m: float
    C0m_plus: float
    C0r: float
    eta: float
    C2: float
    con22_C: float
    K1r_plus: float
    K1r_minus: float
    K1m_plus: float
    K1m_minus: float
    K0r: float
    K0m: float
    Kp1: float
    Kp2: float
    K2r_plus: float
    K2r_minus: float
    K2m_plus: float
    K2m_minus: float
    C3_r: float
    C3_m: float
    K3_r: float
    K3_m: float
    C4_r: float
    C4_m: float
    branch: str

    @property
    def C3(self) -> float:
        return self.C3_r if self.branch == RECOMBINATION else self.C3_m

    @property
    def K3(self) -> float:
        return self.K3_r if self.branch == RECOMBINATION else self.K3_m

    @property
    def C4(self) -> float:
        return self.C4_r if self.branch == RECOMBINATION else self.C4_m

    def as_dict(self) -> dict:
        d = {f.name: getattr(self, f.name) for f in fields(self)}
        d.update(C3=self.C3, K3=self.K3, C4=self.C4)
        return d


def _safe_log(x: float) -> float:
    return math.log(x) if x > 0 else math.nan


def derive_constants(epsilon: float = DEFAULT_EPSILON, delta: float = DEFAULT_DELTA,
                     params: Optional[Parameters] = None, slack: float = DEFAULT_SLACK,
                     branch: Optional[str] = None) -> ConstantChain:
    """Materialize the constant chain.

    ``params`` only enters through ``con22_C = max(1, rho)`` and the default
    ``branch`` (the dominant regime); without it ``con22_C = 1``.
    """
    if not 0 < epsilon < 1 / 16:
        raise DomainError(f"epsilon must lie in (0, 1/16), got {epsilon}")
    if not 0 < delta < 1 / 4:
        raise DomainError(f"delta must lie in (0, 1/4), got {delta}")
    if not slack > 0:
        raise DomainError(f"slack must be positive, got {slack}")
    if params is not None and params.mu > 0:
        regime = classify_regime(params)
        con22_C = max(1.0, regime.rho)
        default_branch = dominant_branch(regime)
    else:
        con22_C = 1.0
        default_branch = MUTATION
    branch = default_branch if branch is None else branch
    if branch not in (RECOMBINATION, MUTATION):
        raise DomainError(f"branch must be {RECOMBINATION!r} or {MUTATION!r}")

    up = 1.0 + slack
    eps, d2 = epsilon, delta * delta
    K = up * 6.0 / eps
    C1 = up * max(math.log(5 * K / eps), math.log(8 / d2))
    C0m = up * 2 * math.log(2 * K / eps)
    C0m_plus = up * max(C0m, 14 * math.exp(-C1) + math.log(48 * K / (eps * (1 - d2) ** 2)))
    C0r = up * max(math.log(K * K / eps), C1 + math.log(4))
    eta = 2 * K * math.exp(-C1)
    C2 = -C1 + math.log(math.exp(C1) / (2 * (1 + d2)) - 1) + math.log(1 / d2 - 1)

    e2C1 = math.exp(-2 * C1)
    spread = K * K * e2C1 * (2 * (C0r - C1) + 1)
    K1r_plus = spread / eps
    K1m_plus = (4 * K * math.exp(-2 * C1 + C0m) + spread * con22_C) / (2 * eps)
    K1r_minus = math.exp(-7 * math.exp(-C1)) * (1 - 5 * math.exp(-C1)) * (1 - d2) ** 2 * e2C1 / 3
    K1m_minus = ((1 - d2) * math.exp(-7 * math.exp(-C1) - 2 * C1 - C0m_plus)
                 - math.sqrt(48 * K * math.exp(C0m_plus) / eps) * math.exp(-2 * C1 - 2 * C0m_plus))
    grow = math.exp(2 * (C2 + C1))
    K0r = 2 * grow * K1r_plus
    K0m = 2 * grow * K1m_plus
    Kp1 = grow * (C2 + C1)
    Kp2 = math.exp(3 * (C2 + C1)) * (C2 + C1)
    K2r_plus = 2 * K1r_plus * grow
    K2r_minus = K1r_minus / 2
    K2m_plus = 2 * K1m_plus * grow
    K2m_minus = K1m_minus / 2

    def phase34(k2_plus, k2_minus):
        c3 = C2 - 3 - _safe_log(k2_plus / d2)
        k3 = k2_minus * math.exp(c3 - C2 - 2) / 2
        c4 = c3 + _safe_log((1 / d2 - 1) * (1 / k3 - 1)) if k3 > 0 else math.nan
        return c3, k3, c4

    C3_r, K3_r, C4_r = phase34(K2r_plus, K2r_minus)
    C3_m, K3_m, C4_m = phase34(K2m_plus, K2m_minus)
    return ConstantChain(
        epsilon=eps, delta=delta, slack=slack, K=K, C1=C1, C0m=C0m, C0m_plus=C0m_plus,
        C0r=C0r, eta=eta, C2=C2, con22_C=con22_C, K1r_plus=K1r_plus, K1r_minus=K1r_minus,
        K1m_plus=K1m_plus, K1m_minus=K1m_minus, K0r=K0r, K0m=K0m, Kp1=Kp1, Kp2=Kp2,
        K2r_plus=K2r_plus, K2r_minus=K2r_minus, K2m_plus=K2m_plus, K2m_minus=K2m_minus,
        C3_r=C3_r, C3_m=C3_m, K3_r=K3_r, K3_m=K3_m, C4_r=C4_r, C4_m=C4_m, branch=branch,
    )


@dataclass(frozen=True)
class Relation:
    label: str
    lhs: float
    op: str
    rhs: float

    @property
    def holds(self) -> bool:
        if self.op == ">":
            return self.lhs > self.rhs
        if self.op == "<":
            return self.lhs < self.rhs
        return math.isclose(self.lhs, self.rhs, rel_tol=1e-12, abs_tol=0.0)


def chain_relations(chain: ConstantChain) -> list[Relation]:
    """Every defining (in)equality of the chain evaluated on its values."""
    c = chain
    eps, d2 = c.epsilon, c.delta ** 2
    rel = [
        Relation("epsilon > 0", eps, ">", 0.0),
        Relation("epsilon < 1/16", eps, "<", 1 / 16),
        Relation("delta > 0", c.delta, ">", 0.0),
        Relation("delta < 1/4", c.delta, "<", 1 / 4),
        Relation("K > 6/epsilon", c.K, ">", 6 / eps),
        Relation("C1 > ln(5K/epsilon)", c.C1, ">", math.log(5 * c.K / eps)),
        Relation("C1 > ln(8/delta^2)", c.C1, ">", math.log(8 / d2)),
        Relation("C0m > 2 ln(2K/epsilon)", c.C0m, ">", 2 * math.log(2 * c.K / eps)),
        Relation("C0m+ > C0m", c.C0m_plus, ">", c.C0m),
        Relation("C0m+ > 14e^-C1 + ln(48K/(epsilon(1-delta^2)^2))", c.C0m_plus, ">",
                 14 * math.exp(-c.C1) + math.log(48 * c.K / (eps * (1 - d2) ** 2))),
        Relation("C0r > ln(K^2/epsilon)", c.C0r, ">", math.log(c.K ** 2 / eps)),
        Relation("C0r > C1 + ln 4", c.C0r, ">", c.C1 + math.log(4)),
        Relation("eta = 2K e^-C1", c.eta, "=", 2 * c.K * math.exp(-c.C1)),
        Relation("eta < 2 epsilon/5", c.eta, "<", 2 * eps / 5),
        Relation("C2 = -C1 + ln(e^C1/(2(1+delta^2)) - 1) + ln(1/delta^2 - 1)", c.C2, "=",
                 -c.C1 + math.log(math.exp(c.C1) / (2 * (1 + d2)) - 1) + math.log(1 / d2 - 1)),
        Relation("K1r+ = K^2 e^-2C1 (2(C0r-C1)+1)/epsilon", c.K1r_plus, "=",
                 c.K ** 2 * math.exp(-2 * c.C1) * (2 * (c.C0r - c.C1) + 1) / eps),
        Relation("K1m+ = (4K e^(C0m-2C1) + K^2 e^-2C1 (2(C0r-C1)+1) C)/(2 epsilon)",
                 c.K1m_plus, "=",
                 (4 * c.K * math.exp(c.C0m - 2 * c.C1)
                  + c.K ** 2 * math.exp(-2 * c.C1) * (2 * (c.C0r - c.C1) + 1) * c.con22_C)
                 / (2 * eps)),
        Relation("K1r- > 0", c.K1r_minus, ">", 0.0),
        Relation("K1m- > 0", c.K1m_minus, ">", 0.0),
        Relation("K0r = 2 e^2(C2+C1) K1r+", c.K0r, "=",
                 2 * math.exp(2 * (c.C2 + c.C1)) * c.K1r_plus),
        Relation("K0m = 2 e^2(C2+C1) K1m+", c.K0m, "=",
                 2 * math.exp(2 * (c.C2 + c.C1)) * c.K1m_plus),
        Relation("K'1 = e^2(C2+C1) (C2+C1)", c.Kp1, "=",
                 math.exp(2 * (c.C2 + c.C1)) * (c.C2 + c.C1)),
        Relation("K'2 = e^3(C2+C1) (C2+C1)", c.Kp2, "=",
                 math.exp(3 * (c.C2 + c.C1)) * (c.C2 + c.C1)),
        Relation("K2r+ = 2 K1r+ e^2(C2+C1)", c.K2r_plus, "=",
                 2 * c.K1r_plus * math.exp(2 * (c.C2 + c.C1))),
        Relation("K2r- = K1r-/2", c.K2r_minus, "=", c.K1r_minus / 2),
        Relation("K2m+ = 2 K1m+ e^2(C2+C1)", c.K2m_plus, "=",
                 2 * c.K1m_plus * math.exp(2 * (c.C2 + c.C1))),
        Relation("K2m- = K1m-/2", c.K2m_minus, "=", c.K1m_minus / 2),
    ]
    for tag, k2p, k2m, c3, k3, c4 in (
        ("r", c.K2r_plus, c.K2r_minus, c.C3_r, c.K3_r, c.C4_r),
        ("m", c.K2m_plus, c.K2m_minus, c.C3_m, c.K3_m, c.C4_m),
    ):
        rel += [
            Relation(f"C3_{tag} = C2 - 3 - ln(K2{tag}+/delta^2)", c3, "=",
                     c.C2 - 3 - math.log(k2p / d2)),
            Relation(f"K3_{tag} = K2{tag}- e^(C3-C2-2)/2", k3, "=",
                     k2m * math.exp(c3 - c.C2 - 2) / 2),
            Relation(f"C4_{tag} = C3 + ln((1/delta^2-1)(1/K3-1))", c4, "=",
                     c3 + _safe_log((1 / d2 - 1) * (1 / k3 - 1))),
        ]
    return rel


# ---------------------------------------------------------------------------
# phase schedule


@dataclass(frozen=True)
class PhaseSchedule:
    """Phase boundary times.

    ``t3``, ``t4`` and ``t5_*`` follow ``branch``; ``variants`` holds them
    for both regimes (NaN where a logarithm argument is nonpositive).
    ``violations`` lists every failure of the expected ordering
    ``0 < t0m < t0m+ < t1 < t2 < t3 < t4 < t5- < t5+`` and ``0 < t0r < t1``.
    """

    t0r: float
    t0m: float
    t0m_plus: float
    t1: float
    t2: float
    t3: float
    t4: float
    t5_minus: float
    t5_plus: float
    regime: Regime
    constants: ConstantChain
    branch: str
    variants: dict = field(default_factory=dict)
    violations: tuple = ()

    @property
    def ordered(self) -> bool:
        return not self.violations

    def times(self) -> dict:
        return {
            "t0r": self.t0r, "t0m": self.t0m, "t0m_plus": self.t0m_plus, "t1": self.t1,
            "t2": self.t2, "t3": self.t3, "t4": self.t4,
            "t5_minus": self.t5_minus, "t5_plus": self.t5_plus,
        }


def _ln(term: str, x: float) -> float:
    if not x > 0:
        raise ScheduleError(f"{term}: nonpositive logarithm argument {x!r}")
    return math.log(x)


def _late_times(params: Parameters, chain: ConstantChain, branch: str) -> tuple:
    n, mu, s, r = params.N, params.mu, params.s, params.r
    d = chain.delta
    if branch == RECOMBINATION:
        nr = n * r
        log_nr = _ln("ln(N r)", nr)
        if not log_nr > 0:
            raise ScheduleError(f"ln(N r): logarithm {log_nr!r} is not positive (N r = {nr!r})")
        base = _ln("ln(s^2/(mu r ln(N r)))", s * s / (mu * r * log_nr))
        c3, c4 = chain.C3_r, chain.C4_r
    else:
        base = _ln("ln(s^2/(N mu^3))", s * s / (n * mu ** 3))
        c3, c4 = chain.C3_m, chain.C4_m
    t3 = (base + c3) / s
    t4 = (base + c4) / s
    sweep = _ln("ln(N s)", n * s) / s
    t5m = t4 + (1 - d) * sweep
    t5p = t4 + sweep / (1 - 2 * d * d)
    return t3, t4, t5m, t5p


def phase_schedule(params: Parameters, chain: ConstantChain) -> PhaseSchedule:
    """Evaluate every phase time for ``params`` under ``chain``.

    Raises :class:`ScheduleError` naming the offending term if a time of
    the chain's branch has a nonpositive logarithm argument.
    """
    n, mu, s, r = params.N, params.mu, params.s, params.r
    if mu <= 0:
        raise DegenerateParameterError("phase times need mu > 0")
    regime = classify_regime(params)
    c = chain
    log_s_mu = _ln("ln(s/mu)", s / mu)
    nr = n * r
    if c.branch == RECOMBINATION or nr >= math.e:
        t0r = (_ln("ln(s/(mu sqrt(N r)))", s / (mu * math.sqrt(nr))) - c.C0r) / s
    else:
        t0r = (log_s_mu - c.C0r) / s
    log_mut = _ln("ln(s/(N mu^2))", s / (n * mu * mu))
    t0m = (log_mut - c.C0m) / s
    t0m_plus = (log_mut + c.C0m_plus) / s
    t1 = (log_s_mu - c.C1) / s
    t2 = (log_s_mu + c.C2) / s

    variants = {}
    for b in (RECOMBINATION, MUTATION):
        try:
            variants[b] = _late_times(params, c, b)
        except ScheduleError:
            if b == c.branch:
                raise
            variants[b] = (math.nan,) * 4
    t3, t4, t5m, t5p = variants[c.branch]

    order = [("0", 0.0), ("t0m", t0m), ("t0m_plus", t0m_plus), ("t1", t1), ("t2", t2),
             ("t3", t3), ("t4", t4), ("t5_minus", t5m), ("t5_plus", t5p)]
    violations = [f"{a} < {b} fails ({va:.6g} >= {vb:.6g})"
                  for (a, va), (b, vb) in zip(order, order[1:]) if not va < vb]
    if not 0 < t0r:
        violations.append(f"0 < t0r fails (t0r = {t0r:.6g})")
    if not t0r < t1:
        violations.append(f"t0r < t1 fails ({t0r:.6g} >= {t1:.6g})")
    return PhaseSchedule(t0r, t0m, t0m_plus, t1, t2, t3, t4, t5m, t5p, regime, c, c.branch,
                         variants, tuple(violations))


@dataclass(frozen=True)
class Window:
    """Predicted range of ``quantity`` (a type fraction, a sum of them, or
    the fixation time ``T``) at phase time ``at``.

    ``form`` says how a slack factor widens it: ``"ratio"`` scales the
    bounds themselves, ``"gap_half"``/``"gap_one"`` scale the distance of
    the quantity below 1/2 or 1, and ``"upper_only"``/``"lower_only"`` move
    a single bound.
    """

    name: str
    at: str
    time: float
    quantity: str
    lower: float
    upper: float
    form: str = "ratio"

    def widened(self, slack: float) -> "Window":
        lo, hi = self.lower, self.upper
        if slack == 1.0:
            return self
        if self.form == "ratio":
            lo, hi = lo / slack, hi * slack
        elif self.form in ("gap_half", "gap_one"):
            top = 0.5 if self.form == "gap_half" else 1.0
            gap_lo, gap_hi = top - hi, top - lo
            lo, hi = top - gap_hi * slack, top - gap_lo / slack
        elif self.form == "upper_only":
            hi = hi * slack
        elif self.form == "lower_only":
            lo = lo / slack
        return Window(self.name, self.at, self.time, self.quantity, lo, hi, self.form)

    def contains(self, value: float) -> bool:
        return self.lower <= value <= self.upper


def phase_predictions(schedule: PhaseSchedule, params: Parameters,
                      chain: ConstantChain) -> list[Window]:
    """Windows predicted at ``t1 .. t4`` and for the fixation time."""
    n, mu, s, r = params.N, params.mu, params.s, params.r
    c = chain
    d, d2 = c.delta, c.delta ** 2
    rec = schedule.branch == RECOMBINATION
    scale = r * math.log(n * r) if rec else n * mu * mu
    k1m, k1p = (c.K1r_minus, c.K1r_plus) if rec else (c.K1m_minus, c.K1m_plus)
    k2m, k2p = (c.K2r_minus, c.K2r_plus) if rec else (c.K2m_minus, c.K2m_plus)
    e1 = math.exp(-c.C1)
    sch = schedule
    x0_cap = d * math.exp(-(1 - 3 * d) * (c.C3 - c.C2)) * (scale / s) ** (1 - 3 * d)
    return [
        Window("t1_x1", "t1", sch.t1, "x1", (1 - d2) * e1, (1 + d2) * e1),
        Window("t1_x2", "t1", sch.t1, "x2", (1 - d2) * e1, (1 + d2) * e1),
        Window("t1_x3", "t1", sch.t1, "x3", k1m * scale / s, k1p * scale / s),
        Window("t2_x1", "t2", sch.t2, "x1", 0.5 - 1.5 * d2, 0.5 - d2 * d2 / 4, "gap_half"),
        Window("t2_x2", "t2", sch.t2, "x2", 0.5 - 1.5 * d2, 0.5 - d2 * d2 / 4, "gap_half"),
        Window("t2_x3", "t2", sch.t2, "x3", k2m * scale / s, k2p * scale / s),
        Window("t3_x0", "t3", sch.t3, "x0", 0.0, x0_cap, "upper_only"),
        Window("t3_x3", "t3", sch.t3, "x3", c.K3, d2),
        Window("t4_x3", "t4", sch.t4, "x3", 1 - 1.25 * d2, 1 - 0.75 * c.K3, "gap_one"),
        Window("t4_x12", "t4", sch.t4, "x1+x2", c.K3 / 2, 1.0, "lower_only"),
        Window("T_fix", "t5", math.nan, "T", sch.t5_minus, sch.t5_plus),
    ]
