"""
Numeric evaluation of the linear-forms-in-logarithms bound chain.

All values are certified balls; callers that need a majorant use `.upper`.
The three linear forms are

    L1: eta1 = (rho-1) a / d1
    L2: eta1 = (rho-1) a / (d1 rho^ell - (d1-d2))
    L3: eta1 = (rho-1) a / (d1 rho^(ell+m) - (d1-d2) rho^m - (d2-d3))

each with eta2 = alpha, eta3 = rho, field degree 3 and B = n. The heights
of eta1 enter only through their closed-form majorants.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple, Union

from ..utils import format_sci
from .error_handler import HypothesisViolated, InvalidInstance
from .hp_arith import PrecisionReal, log_alpha

logger = logging.getLogger(__name__)

BOUND_PRECISION = 128
_MIN_A = Fraction(4, 25)

Number = Union[PrecisionReal, int, Fraction, float, str]

# A1 = factor * log(rho)^p * (1 + log n)^q  ->  (factor, p, q)
A1_FACTORS: Dict[str, Tuple[Fraction, int, int]] = {
    "L1": (Fraction(12), 1, 0),
    "L2": (Fraction(1125 * 10 ** 11), 2, 1),
    "L3": (Fraction(42 * 10 ** 26), 3, 2),
}
# h(eta1) <= factor * log(rho)^p * (1 + log n)^q
HEIGHT_MAJORANTS: Dict[str, Tuple[Fraction, int, int]] = {
    "L1": (Fraction(4), 1, 0),
    "L2": (Fraction(375 * 10 ** 11), 2, 1),
    "L3": (Fraction(14 * 10 ** 26), 3, 2),
}
PUBLISHED_CEILINGS: Dict[str, Fraction] = {
    "L1": Fraction(373 * 10 ** 11),
    "L2": Fraction(349 * 10 ** 24),
    "L3": Fraction(131 * 10 ** 38),
}
LINEAR_FORMS = tuple(A1_FACTORS)

ELL_BOUND_FACTOR = Fraction(374 * 10 ** 11)
M_BOUND_FACTOR = Fraction(35 * 10 ** 25)
N_BOUND_FACTOR = Fraction(275 * 10 ** 39)
THEOREM_CAP_FACTOR = Fraction(56 * 10 ** 47)
LOG_H_OFFSET = Fraction("95.42")
LOG_H_SLOPE = 136


def _ball(x: Number, precision_bits: int) -> PrecisionReal:
    if isinstance(x, PrecisionReal):
        return x
    if isinstance(x, int):
        return PrecisionReal.exact(x, precision_bits)
    return PrecisionReal.from_fraction(Fraction(x), precision_bits)


def _upper_fraction(x: Number) -> Fraction:
    if isinstance(x, PrecisionReal):
        return x.enclosure()[1]
    return Fraction(x)


def _log(x: Number, precision_bits: int) -> PrecisionReal:
    return _ball(x, precision_bits).log()


@dataclass(frozen=True)
class MatveevInstance:
    """
    Parameters of one lower bound for a nonzero linear form in s logarithms.

    Attributes:
        s: Number of logarithms
        dL: Degree of the number field
        B: Bound on the exponent magnitudes (>= 3)
        A: One value per logarithm, each >= 0.16
    """

    s: int
    dL: int
    B: Number
    A: Tuple[Number, ...]
    precision_bits: int = BOUND_PRECISION

    def validate(self) -> None:
        if self.s < 1:
            raise InvalidInstance(f"s must be at least 1, got {self.s}")
        if self.dL < 1:
            raise InvalidInstance(f"dL must be at least 1, got {self.dL}")
        if len(self.A) != self.s:
            raise InvalidInstance(f"expected {self.s} A-values, got {len(self.A)}")
        for i, a in enumerate(self.A, start=1):
            if _upper_fraction(a) < _MIN_A:
                raise InvalidInstance(f"A{i} = {format_sci(a)} is below 0.16")
        if _upper_fraction(self.B) < 3:
            raise InvalidInstance(f"B = {format_sci(self.B)} is below 3")


def matveev_constant(s: int, dL: int, precision_bits: int = BOUND_PRECISION) -> PrecisionReal:
    """1.4 * 30^(s+3) * s^4.5 * dL^2 * (1 + log dL)."""
    one = PrecisionReal.exact(1, precision_bits)
    s_power = PrecisionReal.exact(s ** 9, precision_bits).sqrt()
    c = PrecisionReal.from_fraction(Fraction(14, 10), precision_bits) * (30 ** (s + 3)) * s_power
    return c * (dL ** 2) * (one + _log(dL, precision_bits))


def matveev_lower_bound(inst: MatveevInstance) -> PrecisionReal:
    """
    Lower bound for log|Lambda|, a negative real:

        -1.4 * 30^(s+3) * s^4.5 * dL^2 * (1 + log dL) * (1 + log B) * A_1 ... A_s
    """
    inst.validate()
    bits = inst.precision_bits
    result = matveev_constant(inst.s, inst.dL, bits) * (1 + _log(inst.B, bits))
    for a in inst.A:
        result = result * _ball(a, bits)
    return -result


def _structured(factor: Fraction, log_rho_power: int, log_n_power: int,
                rho: int, n: Number, precision_bits: int) -> PrecisionReal:
    value = PrecisionReal.from_fraction(factor, precision_bits)
    if log_rho_power:
        value = value * _log(rho, precision_bits) ** log_rho_power
    if log_n_power:
        value = value * (1 + _log(n, precision_bits)) ** log_n_power
    return value


@dataclass(frozen=True)
class LinearFormSpec:
    """
    One of the three linear forms: A2 = log(alpha), A3 = 3 log(rho) always;
    A1 depends on the form.
    """

    which: str
    rho: int
    n_symbolic: bool = True

    def __post_init__(self):
        if self.which not in A1_FACTORS:
            raise ValueError(f"unknown linear form {self.which!r}, expected one of {LINEAR_FORMS}")
        if self.rho < 2:
            raise ValueError(f"base must be at least 2, got {self.rho}")

    def a_values(self, n: Number, precision_bits: int = BOUND_PRECISION) -> Tuple[PrecisionReal, ...]:
        factor, p, q = A1_FACTORS[self.which]
        a1 = _structured(factor, p, q, self.rho, n, precision_bits)
        a3 = 3 * _log(self.rho, precision_bits)
        return a1, log_alpha(precision_bits), a3

    def instance(self, n: Number, precision_bits: int = BOUND_PRECISION) -> MatveevInstance:
        return MatveevInstance(s=3, dL=3, B=n, A=self.a_values(n, precision_bits),
                               precision_bits=precision_bits)

    def height_majorant(self, n: Number, precision_bits: int = BOUND_PRECISION) -> PrecisionReal:
        factor, p, q = HEIGHT_MAJORANTS[self.which]
        return _structured(factor, p, q, self.rho, n, precision_bits)

    @property
    def log_rho_power(self) -> int:
        return A1_FACTORS[self.which][1] + 1

    @property
    def log_n_power(self) -> int:
        return A1_FACTORS[self.which][2] + 1


def linear_form_coefficient(which: str, precision_bits: int = BOUND_PRECISION) -> PrecisionReal:
    """
    Constant K with log|Lambda| > -K * log(rho)^p * (1 + log n)^q.

    Obtained from the lower bound by stripping the rho- and n-dependent
    factors of A1, A3 and (1 + log B).
    """
    factor = A1_FACTORS[which][0]
    return (matveev_constant(3, 3, precision_bits)
            * PrecisionReal.from_fraction(factor, precision_bits)
            * log_alpha(precision_bits) * 3)


@dataclass(frozen=True)
class CoefficientAudit:
    which: str
    value: PrecisionReal
    ceiling: Fraction

    @property
    def within_ceiling(self) -> bool:
        return self.value.enclosure()[1] <= self.ceiling

    @property
    def relative_gap(self) -> float:
        return float(1 - self.value.enclosure()[1] / self.ceiling)


def reproduce_matveev_coefficients(precision_bits: int = BOUND_PRECISION) -> List[CoefficientAudit]:
    """The three constants next to the ceilings they must not exceed."""
    return [CoefficientAudit(which, linear_form_coefficient(which, precision_bits),
                             PUBLISHED_CEILINGS[which])
            for which in LINEAR_FORMS]


def eta1_height_check(rho: int, precision_bits: int = BOUND_PRECISION) -> bool:
    """2 log(rho) + (1/3) log 31 <= 4 log(rho), the majorant used for L1."""
    log_rho = _log(rho, precision_bits)
    lhs = 2 * log_rho + _log(31, precision_bits) / 3
    return lhs.upper <= (4 * log_rho).lower


def lemma2_digit_bounds(n: int, rho: int, precision_bits: int = BOUND_PRECISION) -> Tuple[int, int]:
    """
    Integer bracket for the digit count S = ell + m + k of N_n in base rho,
    from (S-1) log rho + log alpha < n log alpha < S log rho + 1.
    """
    if n < 1 or rho < 2:
        raise ValueError(f"need n >= 1 and rho >= 2, got n={n}, rho={rho}")
    la = log_alpha(precision_bits)
    lr = _log(rho, precision_bits)
    s_min = max(1, ((n * la - 1) / lr).floor_lower() + 1)
    s_max = max(s_min, (((n - 1) * la) / lr).ceil_upper())
    return s_min, s_max


def ell_bound(rho: int, n: Number, precision_bits: int = BOUND_PRECISION) -> PrecisionReal:
    """ell < 3.74e13 * log(rho) * (1 + log n)."""
    return _structured(ELL_BOUND_FACTOR, 1, 1, rho, n, precision_bits)


def m_bound(rho: int, n: Number, precision_bits: int = BOUND_PRECISION) -> PrecisionReal:
    """m < 3.5e26 * log(rho)^2 * (1 + log n)^2."""
    return _structured(M_BOUND_FACTOR, 2, 2, rho, n, precision_bits)


def resolve_recursive_bound(r: int, H: Number, precision_bits: int = BOUND_PRECISION) -> PrecisionReal:
    """
    If x / (log x)^r < H with H > (4r^2)^r, then x < 2^r H (log H)^r.

    Raises:
        HypothesisViolated: when H is not certainly above (4r^2)^r
    """
    if r < 1:
        raise ValueError(f"r must be positive, got {r}")
    h = _ball(H, precision_bits)
    threshold = (4 * r * r) ** r
    if not h.enclosure()[0] > threshold:
        raise HypothesisViolated(f"H = {format_sci(h)} does not exceed (4r^2)^r = {threshold}")
    return (2 ** r) * h * h.log() ** r


@dataclass
class InitialBoundReport:
    """Resolution of n < 2.75e41 log^4(rho) log^3(n) for one base."""

    rho: int
    H: PrecisionReal
    lemma3_bound: PrecisionReal
    capped_bound: PrecisionReal
    theorem_cap: PrecisionReal
    log_h_check: bool
    audit: List[Tuple[str, str]] = field(default_factory=list)

    def to_dict(self) -> Dict[str, object]:
        return {
            "rho": self.rho,
            "H": format_sci(self.H.upper, 6),
            "lemma3_bound": format_sci(self.lemma3_bound.upper, 6),
            "capped_bound": format_sci(self.capped_bound.upper, 6),
            "theorem_cap": format_sci(self.theorem_cap.upper, 6),
            "log_h_check": self.log_h_check,
            "audit": [list(row) for row in self.audit],
        }


def initial_n_bound(rho: int, precision_bits: int = BOUND_PRECISION) -> InitialBoundReport:
    """Initial bound on n for base rho, with every intermediate constant in the audit."""
    if rho < 2:
        raise ValueError(f"base must be at least 2, got {rho}")
    bits = precision_bits
    audit: List[Tuple[str, str]] = []
    log_rho = _log(rho, bits)

    for which in LINEAR_FORMS:
        coefficient = linear_form_coefficient(which, bits)
        spec = LinearFormSpec(which, rho)
        audit.append((f"{which} coefficient (log^{spec.log_rho_power} rho, (1+log n)^{spec.log_n_power})",
                      format_sci(coefficient.upper, 6)))
        audit.append((f"{which} h(eta1) majorant factor", format_sci(HEIGHT_MAJORANTS[which][0], 4)))
    audit.append(("eta1 height check 2log(rho)+log(31)/3 <= 4log(rho)", str(eta1_height_check(rho, bits))))

    derived = PrecisionReal.from_fraction(PUBLISHED_CEILINGS["L3"], bits) * 8 / log_alpha(bits)
    audit.append(("1.31e40 * 8 / log(alpha)", format_sci(derived.upper, 6)))
    audit.append(("  <= 2.75e41", str(derived.enclosure()[1] <= N_BOUND_FACTOR)))

    H = PrecisionReal.from_fraction(N_BOUND_FACTOR, bits) * log_rho ** 4
    audit.append(("H = 2.75e41 * log^4(rho)", format_sci(H.upper, 6)))
    audit.append(("log H", format_sci(H.log().upper, 6)))

    lemma3 = resolve_recursive_bound(3, H, bits)
    audit.append(("8 H (log H)^3", format_sci(lemma3.upper, 6)))

    slack = LOG_H_SLOPE * log_rho - PrecisionReal.from_fraction(LOG_H_OFFSET, bits) - 4 * log_rho.log()
    log_h_check = slack.is_positive()
    audit.append(("95.42 + 4 loglog(rho) < 136 log(rho)", str(log_h_check)))

    cap = PrecisionReal.from_fraction(THEOREM_CAP_FACTOR, bits) * log_rho ** 7
    audit.append(("5.6e48 * log^7(rho)", format_sci(cap.upper, 6)))

    if lemma3.upper <= cap.upper:
        capped = lemma3
    else:
        logger.warning(f"rho={rho}: lemma bound {format_sci(lemma3.upper)} above cap {format_sci(cap.upper)}")
        capped = cap
    audit.append(("capped bound", format_sci(capped.upper, 6)))

    logger.info(f"Initial bound for rho={rho}: n < {format_sci(capped.upper)}")
    return InitialBoundReport(rho, H, lemma3, capped, cap, log_h_check, audit)
