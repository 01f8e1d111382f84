"""2x2 contingency tables: Fisher exact, odds ratio and chi-square tests.

Cell layout (rows: vulnerable / not vulnerable, columns: smelly / clean)::

              smell   no smell
    vuln        a        b
    not vuln    c        d
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln, logsumexp
from scipy.stats import chi2_contingency

from smellscope.errors import ZeroMarginError

logger = logging.getLogger(__name__)

CRITICAL_VALUE_05 = 3.84
ALPHA = 0.05
TIE_SLACK = 1e-12


@dataclass(frozen=True)
class ContingencyTable:
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self) -> None:
        for name in ("a", "b", "c", "d"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, np.integer)) or value < 0:
                raise ValueError(f"cell {name} must be a non-negative integer, got {value!r}")

    def __add__(self, other: ContingencyTable) -> ContingencyTable:
        return ContingencyTable(self.a + other.a, self.b + other.b,
                                self.c + other.c, self.d + other.d)

    @property
    def total(self) -> int:
        return self.a + self.b + self.c + self.d

    @property
    def margins(self) -> dict[str, int]:
        return {
            "vulnerable (a+b)": self.a + self.b,
            "not vulnerable (c+d)": self.c + self.d,
            "smelly (a+c)": self.a + self.c,
            "not smelly (b+d)": self.b + self.d,
        }

    def transpose(self) -> ContingencyTable:
        return ContingencyTable(self.a, self.c, self.b, self.d)

    def as_array(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]], dtype=np.int64)


@dataclass(frozen=True)
class TestResult:
    __test__ = False  # not a pytest class

    method: str
    table: ContingencyTable
    p_value: float | None
    odds_ratio: float
    chi_square: float | None = None
    chi_square_yates: float | None = None
    df: int = 1
    reject_at_05: bool = False
    computable: bool = True
    degenerate: bool = False


# ====================================================================
#  Fisher exact
# ====================================================================

def _log_kernel(k: np.ndarray, rows: int, cols: int, total: int) -> np.ndarray:
    """Log hypergeometric weight of each table with top-left cell k, up to a constant."""
    return -(gammaln(k + 1) + gammaln(rows - k + 1) + gammaln(cols - k + 1)
             + gammaln(total - rows - cols + k + 1))


def fisher_exact_two_sided(t: ContingencyTable) -> float:
    """Two-sided p by summing every table no more probable than the observed one."""
    total = t.total
    if total == 0:
        logger.debug("all-zero table: Fisher p defined as 1.0")
        return 1.0
    rows, cols = t.a + t.b, t.a + t.c
    low, high = max(0, rows + cols - total), min(rows, cols)
    support = np.arange(low, high + 1, dtype=np.float64)
    weights = _log_kernel(support, rows, cols, total)
    observed = weights[t.a - low]
    small = weights <= observed + math.log1p(TIE_SLACK)
    p = math.exp(logsumexp(weights[small]) - logsumexp(weights))
    return min(p, 1.0)


def odds_ratio(t: ContingencyTable) -> float:
    """Odds ratio with 0.5 added to every cell."""
    return ((t.a + 0.5) * (t.d + 0.5)) / ((t.b + 0.5) * (t.c + 0.5))


# ====================================================================
#  Chi-square
# ====================================================================

def rejects_at_05(statistic: float) -> bool:
    return statistic >= CRITICAL_VALUE_05


def check_margins(t: ContingencyTable) -> None:
    for name, value in t.margins.items():
        if value == 0:
            raise ZeroMarginError(name)


def chi_square(t: ContingencyTable, yates: bool = False) -> tuple[float, float]:
    """(statistic, p) with df = 1; Yates uses the clamped |O - E| - 0.5 form."""
    check_margins(t)
    statistic, p, _, _ = chi2_contingency(t.as_array(), correction=yates)
    return float(statistic), float(p)


def fisher_test(t: ContingencyTable) -> TestResult:
    p = fisher_exact_two_sided(t)
    return TestResult(method="fisher", table=t, p_value=p, odds_ratio=odds_ratio(t),
                      reject_at_05=p < ALPHA, degenerate=t.total == 0)


def chi_square_test(t: ContingencyTable) -> TestResult:
    """Uncorrected and Yates statistics; significance is judged on the Yates value."""
    try:
        plain, _ = chi_square(t, yates=False)
        corrected, p = chi_square(t, yates=True)
    except ZeroMarginError as exc:
        logger.debug("chi-square not computable: %s", exc)
        return TestResult(method="chi_square", table=t, p_value=None, odds_ratio=odds_ratio(t),
                          computable=False, degenerate=t.total == 0)
    return TestResult(method="chi_square", table=t, p_value=p, odds_ratio=odds_ratio(t),
                      chi_square=plain, chi_square_yates=corrected,
                      reject_at_05=rejects_at_05(corrected))
