"""
Continued-fraction reduction of the bounds on ell, m and n.

Each case is an inequality |u tau - v + mu| < A B^(-w) with tau = log(rho)/log(alpha).
If q is a convergent denominator of tau with q > 6M and

    eps = ||mu q|| - M ||tau q|| > 0,

then every solution with u < M has w < log(A q / eps) / log B. The three
steps differ only in mu (through the integer argument X of
mu = log(X / ((rho-1) a)) / log(alpha)) and in A:

    step 1: X = d1                                          A = 6/log(alpha)   w = ell - 1
    step 2: X = d1 rho^ell - (d1-d2)                        A = 4/log(alpha)   w = m - 1
    step 3: X = d1 rho^(ell+m) - (d1-d2) rho^m - (d2-d3)     A = 10/log(alpha)  w = n
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Dict, Iterator, List, NamedTuple, Optional, Sequence, Tuple

from mpmath import mp

from ..utils import format_sci
from .error_handler import EpsilonNeverPositive, NotReached, PrecisionExhausted
from .hp_arith import (
    DEFAULT_PRECISION,
    ContinuedFraction,
    PrecisionReal,
    alpha,
    binet_coefficient_a,
    cf_expand,
    convergent_exceeding,
    floor_int,
    log_alpha,
    nearest_int_distance,
    with_precision_escalation,
)

logger = logging.getLogger(__name__)

DEFAULT_BIG_M = 2 * 10 ** 51
MAX_EXTRA_CONVERGENTS = 20
AGREEMENT_BITS = 20
CF_TERMS = 600
ELL_BLOCK = 16
STEP3_BASES = ("rho", "alpha")

_EPSILON_THRESHOLD = mp.mpf("1e-12")


class StepParameters(NamedTuple):
    step: int
    a_numerator: int   # A = a_numerator / log(alpha)
    c: int             # |exp(Gamma) - 1| < c / B^w, needs B^w > 2c
    variable: str
    offset: int        # bound on the variable = w bound + offset


STEP_PARAMETERS: Dict[int, StepParameters] = {
    1: StepParameters(1, 6, 3, "ell", 1),
    2: StepParameters(2, 4, 2, "m", 1),
    3: StepParameters(3, 10, 5, "n", 0),
}


class CaseLabel(NamedTuple):
    """Provenance of a case; unused fields are -1."""

    step: int
    rho: int
    d1: int
    d2: int = -1
    d3: int = -1
    ell: int = -1
    m: int = -1

    def argument(self) -> int:
        """The integer X with mu = log(X / ((rho-1) a)) / log(alpha)."""
        rho, d1 = self.rho, self.d1
        if self.step == 1:
            x = d1
        elif self.step == 2:
            x = d1 * rho ** self.ell - (d1 - self.d2)
        else:
            x = d1 * rho ** (self.ell + self.m) - (d1 - self.d2) * rho ** self.m - (self.d2 - self.d3)
        assert x > 0, f"non-positive argument for {self}"
        return x


@dataclass(frozen=True)
class ReductionCase:
    """One instance |u tau - v + mu| < A B^(-w) with u < M."""

    tau: PrecisionReal
    mu: PrecisionReal
    A: PrecisionReal
    B: PrecisionReal
    M: int
    label: Optional[CaseLabel] = None

    def validate(self) -> None:
        if not self.A.is_positive():
            raise ValueError(f"A must be positive, got {self.A!r}")
        if not self.B.lower > 1:
            raise ValueError(f"B must exceed 1, got {self.B!r}")
        if self.M < 1:
            raise ValueError(f"M must be at least 1, got {self.M}")


@dataclass(frozen=True)
class ReductionOutcome:
    convergent_index: int  # numbered from 1, see convergent_exceeding
    q: int
    epsilon: PrecisionReal
    w_max: int
    certified: bool
    attempts: int = 1
    label: Optional[CaseLabel] = None


@dataclass
class StepReport:
    """Aggregate of one reduction step over all digit and length cases of a base."""

    step: int
    rho: int
    cases_evaluated: int
    worst_case: CaseLabel
    worst_outcome: ReductionOutcome
    min_epsilon: PrecisionReal
    min_epsilon_case: CaseLabel
    bound: int
    w_floor: int
    convergent_indices: Tuple[int, ...]
    base_mode: str = "rho"
    failures: Tuple[CaseLabel, ...] = ()

    @property
    def variable(self) -> str:
        return STEP_PARAMETERS[self.step].variable

    @property
    def certified(self) -> bool:
        return not self.failures and self.worst_outcome.certified

    def to_row(self) -> Dict[str, object]:
        return {
            "step": self.step,
            "rho": self.rho,
            "convergent_index": self.worst_outcome.convergent_index,
            "q": str(self.worst_outcome.q),
            "epsilon_lower": format_sci(self.min_epsilon.lower, 4),
            "bound": self.bound,
            "variable": self.variable,
            "cases": self.cases_evaluated,
            "w_floor": self.w_floor,
            "base_mode": self.base_mode,
            "certified": self.certified,
        }


@dataclass
class ReductionSummary:
    rho: int
    M: int
    ell_max: int
    m_max: int
    n_max: int
    steps: Tuple[StepReport, ...] = field(default_factory=tuple)

    def to_rows(self) -> List[Dict[str, object]]:
        return [s.to_row() for s in self.steps]


# ----------------------------------------------------------------------
# Shared per-base context
# ----------------------------------------------------------------------

@lru_cache(maxsize=64)
def _mu_constants(rho: int, bits: int) -> Tuple[PrecisionReal, PrecisionReal]:
    """(log((rho-1) a), log(alpha)) at `bits`."""
    return ((rho - 1) * binet_coefficient_a(bits)).log(), log_alpha(bits)


def mu_for_argument(rho: int, x: int, bits: int) -> PrecisionReal:
    log_coefficient, la = _mu_constants(rho, bits)
    return (PrecisionReal.exact(x, bits).log() - log_coefficient) / la


def tau_for_base(rho: int, bits: int) -> PrecisionReal:
    return PrecisionReal.exact(rho, bits).log() / log_alpha(bits)


@dataclass(frozen=True)
class ReductionContext:
    """
    Everything shared by the cases of one base: tau, its expansion, the
    start convergent and the penalties M ||tau q_i|| for the convergents
    that may be tried.
    """

    rho: int
    M: int
    precision_bits: int
    tau: PrecisionReal
    cf: ContinuedFraction
    start_index: int
    last_index: int
    mu_bits: int
    penalties: Tuple[PrecisionReal, ...]

    def penalty(self, index: int) -> PrecisionReal:
        return self.penalties[index - self.start_index]

    def mu(self, x: int, bits: Optional[int] = None) -> PrecisionReal:
        return mu_for_argument(self.rho, x, bits or self.mu_bits)

    def step_constants(self, step: int, base_mode: str = "rho") -> Tuple[PrecisionReal, PrecisionReal]:
        """(A, log B) for a step."""
        la = log_alpha(self.precision_bits)
        a_value = STEP_PARAMETERS[step].a_numerator / la
        if step == 3 and base_mode == "alpha":
            return a_value, la
        return a_value, PrecisionReal.exact(self.rho, self.precision_bits).log()


@lru_cache(maxsize=64)
def reduction_context(rho: int, M: int, precision_bits: int = DEFAULT_PRECISION,
                      max_extra: int = MAX_EXTRA_CONVERGENTS) -> ReductionContext:
    """Build (once per process) the context for base rho."""
    tau = tau_for_base(rho, precision_bits)
    cf = cf_expand(tau, CF_TERMS, strict=False)
    try:
        number, _ = convergent_exceeding(cf, 6 * M)
        start = number - 1
    except NotReached:
        raise PrecisionExhausted(
            f"tau(rho={rho}) certified only {len(cf)} terms at {precision_bits} bits, "
            f"none with q > 6M", certified_terms=len(cf))
    last = min(start + max_extra, len(cf) - 1)
    if last < start + max_extra:
        logger.warning(f"rho={rho}: only {last - start} extra convergents certified "
                       f"at {precision_bits} bits")
    q_bits = cf.convergents[last].q.bit_length()
    mu_bits = min(precision_bits, max(256, q_bits + 192))
    penalties = tuple(M * nearest_int_distance(tau * cf.convergents[i].q)
                      for i in range(start, last + 1))
    logger.debug(f"rho={rho}: tau CF {cf.partial_quotients[:8]}..., start index {start}, "
                 f"mu precision {mu_bits}")
    return ReductionContext(rho, M, precision_bits, tau, cf, start, last, mu_bits, penalties)


def _first_positive_epsilon(mu: PrecisionReal, cf: ContinuedFraction,
                            penalty: Callable[[int], PrecisionReal],
                            start: int, last: int) -> Tuple[Optional[int], Optional[PrecisionReal], int]:
    for index in range(start, last + 1):
        q = cf.convergents[index].q
        eps = nearest_int_distance(mu * q) - penalty(index)
        if eps.lower > _EPSILON_THRESHOLD:
            return index, eps, index - start + 1
    return None, None, last - start + 1


def _w_max(A: PrecisionReal, q: int, eps: PrecisionReal, log_b: PrecisionReal) -> int:
    eps_lower = PrecisionReal(eps.lower, eps.precision_bits)
    return floor_int(((A * q / eps_lower).log() / log_b).upper)


def _signs_agree(first: PrecisionReal, second: PrecisionReal) -> bool:
    return (first.is_positive() and second.is_positive()
            and first.agrees_with(second, AGREEMENT_BITS))


# ----------------------------------------------------------------------
# Single case
# ----------------------------------------------------------------------

@lru_cache(maxsize=32)
def _expansion(tau: PrecisionReal) -> ContinuedFraction:
    return cf_expand(tau, CF_TERMS, strict=False)


def reduce_case(case: ReductionCase, max_extra_convergents: int = MAX_EXTRA_CONVERGENTS,
                rebuild: Optional[Callable[[int], ReductionCase]] = None) -> ReductionOutcome:
    """
    Apply the reduction to one case.

    Starts at the least convergent with q > 6M and moves on to the next one
    while eps is not certainly above 1e-12. A certified outcome is recomputed
    at twice the precision (through `rebuild`, or from the case label) and
    must agree in sign and to 20 bits.

    Args:
        case: The instance
        max_extra_convergents: Convergents to try after the first
        rebuild: Builds the same case at another precision

    Returns:
        ReductionOutcome

    Raises:
        EpsilonNeverPositive: no tried convergent gives eps > 1e-12
    """
    case.validate()
    cf = _expansion(case.tau)
    try:
        number, _ = convergent_exceeding(cf, 6 * case.M)
        start = number - 1
    except NotReached:
        if cf.exhausted:
            raise PrecisionExhausted(f"expansion of tau too short for M={case.M}",
                                     certified_terms=len(cf))
        raise
    last = min(start + max_extra_convergents, len(cf) - 1)

    def penalty(index: int) -> PrecisionReal:
        return case.M * nearest_int_distance(case.tau * cf.convergents[index].q)

    index, eps, attempts = _first_positive_epsilon(case.mu, cf, penalty, start, last)
    if index is None:
        raise EpsilonNeverPositive(
            f"eps <= 0 for convergents {start + 1}..{last + 1} of case {case.label}",
            case=case, attempts=attempts)
    if attempts > 1:
        logger.info(f"case {case.label}: first convergent failed, certified at convergent {index + 1}")

    q = cf.convergents[index].q
    w_max = _w_max(case.A, q, eps, case.B.log())

    if rebuild is None and case.label is not None:
        label = case.label

        def rebuild(bits: int) -> ReductionCase:
            return build_case(label, case.M, bits)

    certified = True
    if rebuild is not None:
        doubled = rebuild(2 * case.tau.precision_bits)
        cf2 = _expansion(doubled.tau)
        eps2 = (nearest_int_distance(doubled.mu * q)
                - doubled.M * nearest_int_distance(doubled.tau * cf2.convergents[index].q))
        certified = cf2.convergents[index].q == q and _signs_agree(eps, eps2)
        if not certified:
            logger.error(f"case {case.label}: eps {eps} not reproduced at double precision ({eps2})")

    return ReductionOutcome(index + 1, q, eps, w_max, certified, attempts, case.label)


def build_case(label: CaseLabel, M: int, precision_bits: int = DEFAULT_PRECISION,
               base_mode: str = "rho") -> ReductionCase:
    """Construct the case described by a label at the given precision."""
    rho = label.rho
    la = log_alpha(precision_bits)
    tau = tau_for_base(rho, precision_bits)
    mu = mu_for_argument(rho, label.argument(), precision_bits)
    A = STEP_PARAMETERS[label.step].a_numerator / la
    B = alpha(precision_bits) if label.step == 3 and base_mode == "alpha" \
        else PrecisionReal.exact(rho, precision_bits)
    return ReductionCase(tau, mu, A, B, M, label)


# ----------------------------------------------------------------------
# Sweeps
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class _SweepParams:
    step: int
    rho: int
    M: int
    precision_bits: int
    max_extra: int
    base_mode: str
    ell_max: int = 0
    m_max: int = 0


@dataclass(frozen=True)
class _CaseResult:
    label: CaseLabel
    index: int
    q: int
    eps: PrecisionReal
    w_max: int


@dataclass
class _ChunkResult:
    count: int = 0
    worst: Optional[_CaseResult] = None
    smallest: Optional[_CaseResult] = None
    indices: Tuple[int, ...] = ()
    failures: List[Tuple[CaseLabel, int]] = field(default_factory=list)

    def absorb(self, other: "_ChunkResult") -> None:
        self.count += other.count
        if other.worst is not None and _is_worse(other.worst, self.worst):
            self.worst = other.worst
        if other.smallest is not None and _is_smaller(other.smallest, self.smallest):
            self.smallest = other.smallest
        self.indices = tuple(sorted(set(self.indices) | set(other.indices)))
        self.failures.extend(other.failures)


def _is_worse(candidate: _CaseResult, current: Optional[_CaseResult]) -> bool:
    if current is None:
        return True
    if candidate.w_max != current.w_max:
        return candidate.w_max > current.w_max
    return candidate.label < current.label


def _is_smaller(candidate: _CaseResult, current: Optional[_CaseResult]) -> bool:
    if current is None:
        return True
    if candidate.eps.lower != current.eps.lower:
        return candidate.eps.lower < current.eps.lower
    return candidate.label < current.label


def _digit_range(rho: int, strict_paper: bool) -> range:
    return range(1, rho) if strict_paper else range(0, rho)


def _chunk_keys(step: int, rho: int, strict_paper: bool, ell_max: int) -> List[Tuple[int, ...]]:
    """Deterministic partition of a step's cases; independent of worker count."""
    if step == 1:
        return [(d1,) for d1 in range(1, rho)]
    digits = _digit_range(rho, strict_paper)
    if step == 2:
        return [(d1, d2) for d1 in range(1, rho) for d2 in digits]
    return [(d1, d2, d3, ell_start)
            for d1 in range(1, rho) for d2 in digits for d3 in digits
            for ell_start in range(1, ell_max + 1, ELL_BLOCK)]


def _chunk_labels(params: _SweepParams, key: Tuple[int, ...]) -> Iterator[CaseLabel]:
    step, rho = params.step, params.rho
    if step == 1:
        yield CaseLabel(1, rho, key[0])
    elif step == 2:
        d1, d2 = key
        for ell in range(1, params.ell_max + 1):
            yield CaseLabel(2, rho, d1, d2, ell=ell)
    else:
        d1, d2, d3, ell_start = key
        ell_stop = min(ell_start + ELL_BLOCK, params.ell_max + 1)
        for ell in range(ell_start, ell_stop):
            for m in range(1, params.m_max + 1):
                # with d1 == d2 only ell + m matters; keep the smallest admissible ell
                if d1 == d2 and ell != max(1, ell + m - params.m_max):
                    continue
                yield CaseLabel(3, rho, d1, d2, d3, ell, m)


def _sweep_chunk(params: _SweepParams, key: Tuple[int, ...]) -> _ChunkResult:
    ctx = reduction_context(params.rho, params.M, params.precision_bits, params.max_extra)
    A, log_b = ctx.step_constants(params.step, params.base_mode)
    last = min(ctx.start_index + params.max_extra, ctx.last_index)
    result = _ChunkResult()
    indices = set()
    seen = set()
    for label in _chunk_labels(params, key):
        x = label.argument()
        if x in seen:
            continue
        seen.add(x)
        result.count += 1
        index, eps, attempts = _first_positive_epsilon(ctx.mu(x), ctx.cf, ctx.penalty,
                                                       ctx.start_index, last)
        if index is None:
            result.failures.append((label, attempts))
            continue
        q = ctx.cf.convergents[index].q
        case_result = _CaseResult(label, index, q, eps, _w_max(A, q, eps, log_b))
        indices.add(index + 1)
        if _is_worse(case_result, result.worst):
            result.worst = case_result
        if _is_smaller(case_result, result.smallest):
            result.smallest = case_result
    result.indices = tuple(sorted(indices))
    return result


def _recheck(params: _SweepParams, case_result: _CaseResult) -> bool:
    """Recompute eps of one case with tau and mu at twice the precision."""
    ctx = reduction_context(params.rho, params.M, params.precision_bits, params.max_extra)
    ctx2 = reduction_context(params.rho, params.M, 2 * params.precision_bits, params.max_extra)
    index = case_result.index
    if index > ctx2.last_index or ctx2.cf.convergents[index].q != case_result.q:
        return False
    mu2 = ctx2.mu(case_result.label.argument(), 2 * ctx.mu_bits)
    eps2 = nearest_int_distance(mu2 * case_result.q) - ctx2.penalty(index)
    return _signs_agree(case_result.eps, eps2)


def w_floor(step: int, rho: int, base_mode: str = "rho", precision_bits: int = 128) -> int:
    """Least w with B^w > 2c: below it the exponential estimate does not apply."""
    c2 = 2 * STEP_PARAMETERS[step].c
    w = 1
    if step == 3 and base_mode == "alpha":
        x = alpha(precision_bits)
        while (x ** w).lower <= c2:
            w += 1
        return w
    while rho ** w <= c2:
        w += 1
    return w


def _run_step(params: _SweepParams, strict_paper: bool, workers: int) -> StepReport:
    keys = _chunk_keys(params.step, params.rho, strict_paper, params.ell_max)
    total = _ChunkResult()
    # Build the shared context in this process first so precision problems surface here.
    reduction_context(params.rho, params.M, params.precision_bits, params.max_extra)
    if workers > 1 and len(keys) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for chunk in pool.map(_sweep_chunk, [params] * len(keys), keys):
                total.absorb(chunk)
    else:
        for key in keys:
            total.absorb(_sweep_chunk(params, key))

    floor_w = w_floor(params.step, params.rho, params.base_mode)
    offset = STEP_PARAMETERS[params.step].offset
    failures = tuple(label for label, _ in total.failures)

    if total.worst is None:
        label, attempts = total.failures[0]
        raise EpsilonNeverPositive(f"step {params.step}, rho={params.rho}: no case certified",
                                   case=label, attempts=attempts)

    certified = _recheck(params, total.worst) and _recheck(params, total.smallest)
    if not certified:
        raise PrecisionExhausted(
            f"step {params.step}, rho={params.rho}: eps not reproduced at double precision")

    worst = total.worst
    outcome = ReductionOutcome(worst.index + 1, worst.q, worst.eps, worst.w_max, certified, label=worst.label)
    bound = max(worst.w_max, floor_w - 1) + offset
    report = StepReport(
        step=params.step,
        rho=params.rho,
        cases_evaluated=total.count,
        worst_case=worst.label,
        worst_outcome=outcome,
        min_epsilon=PrecisionReal(total.smallest.eps.lower, total.smallest.eps.precision_bits),
        min_epsilon_case=total.smallest.label,
        bound=bound,
        w_floor=floor_w,
        convergent_indices=total.indices,
        base_mode=params.base_mode,
        failures=failures,
    )
    logger.info(f"step {params.step} rho={params.rho}: {report.variable} <= {bound} "
                f"({total.count} cases, min eps {format_sci(total.smallest.eps.lower)})")
    if failures:
        label, attempts = total.failures[0]
        raise EpsilonNeverPositive(
            f"step {params.step}, rho={params.rho}: {len(failures)} cases never gave eps > 0 "
            f"(first {label})", case=label, attempts=attempts, report=report)
    return report


def _step(step: int, rho: int, M: int, precision: int, workers: int, strict_paper: bool = False,
          base_mode: str = "rho", ell_max: int = 0, m_max: int = 0,
          max_extra: int = MAX_EXTRA_CONVERGENTS) -> StepReport:
    if rho < 2:
        raise ValueError(f"base must be at least 2, got {rho}")
    if M < 1:
        raise ValueError(f"M must be at least 1, got {M}")
    if base_mode not in STEP3_BASES:
        raise ValueError(f"step-3 base must be one of {STEP3_BASES}, got {base_mode!r}")

    def attempt(bits: int) -> StepReport:
        params = _SweepParams(step, rho, M, bits, max_extra, base_mode, ell_max, m_max)
        return _run_step(params, strict_paper, workers)

    return with_precision_escalation(attempt, precision)


def step1(rho: int, M: int = DEFAULT_BIG_M, precision: int = DEFAULT_PRECISION,
          workers: int = 1, max_extra: int = MAX_EXTRA_CONVERGENTS) -> StepReport:
    """Bound on ell over d1 in 1..rho-1; report.bound is the ell bound."""
    return _step(1, rho, M, precision, workers, max_extra=max_extra)


def step2(rho: int, M: int, ell_max: int, precision: int = DEFAULT_PRECISION,
          strict_paper: bool = False, workers: int = 1,
          max_extra: int = MAX_EXTRA_CONVERGENTS) -> StepReport:
    """Bound on m over d1, d2 and 1 <= ell <= ell_max."""
    if ell_max < 1:
        raise ValueError(f"ell_max must be positive, got {ell_max}")
    return _step(2, rho, M, precision, workers, strict_paper, ell_max=ell_max, max_extra=max_extra)


def step3(rho: int, M: int, ell_max: int, m_max: int, precision: int = DEFAULT_PRECISION,
          strict_paper: bool = False, step3_base: str = "rho", workers: int = 1,
          max_extra: int = MAX_EXTRA_CONVERGENTS) -> StepReport:
    """Bound on n over d1, d2, d3, ell <= ell_max and m <= m_max."""
    if ell_max < 1 or m_max < 1:
        raise ValueError(f"ell_max and m_max must be positive, got {ell_max}, {m_max}")
    return _step(3, rho, M, precision, workers, strict_paper, step3_base,
                 ell_max=ell_max, m_max=m_max, max_extra=max_extra)


def full_reduction(rho: int, M: int = DEFAULT_BIG_M, precision: int = DEFAULT_PRECISION,
                   strict_paper: bool = False, step3_base: str = "rho",
                   workers: int = 1) -> ReductionSummary:
    """Chain the three steps, each feeding its bound into the next."""
    first = step1(rho, M, precision, workers)
    second = step2(rho, M, first.bound, precision, strict_paper, workers)
    third = step3(rho, M, first.bound, second.bound, precision, strict_paper, step3_base, workers)
    return ReductionSummary(rho, M, first.bound, second.bound, third.bound, (first, second, third))
