"""Statistics for the roaming study: normality screening, correlations,
and simple linear regression with a mean-response confidence band.

The normality test is a Kolmogorov-Smirnov test against a normal
distribution with mean and standard deviation estimated from the sample,
so the p-value comes from seeded Monte-Carlo resampling of the null
distribution rather than the classical asymptotic formula.  Following the
usual reporting convention of stats packages, p-values above 0.2 carry a
``capped`` display flag; the true Monte-Carlo p is always kept.

Correlation tests use the t approximation with n-2 degrees of freedom for
two-sided p-values.  Spearman is the Pearson correlation of average ranks.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr, stdtr, stdtrit


class UndefinedCorrelationError(ValueError):
    """Raised when a correlation is undefined (zero variance input)."""


class DegenerateSampleError(ValueError):
    """Raised when a sample cannot be tested for normality (zero variance)."""


class UndefinedFitError(ValueError):
    """Raised when a regression fit is undefined (zero predictor variance)."""


DEFAULT_KS_REPLICATES = 10_000
P_DISPLAY_CAP = 0.2


def _as_sample(x, min_n: int, what: str = "sample") -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if arr.ndim != 1:
        raise ValueError(f"{what} must be one-dimensional")
    if len(arr) < min_n:
        raise ValueError(f"{what} needs at least {min_n} observations, got {len(arr)}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{what} must be finite")
    return arr


@dataclass(frozen=True)
class CorrelationResult:
    method: str
    r: float
    p_value: float
    n: int

    def to_dict(self) -> dict:
        return {"method": self.method, "r": self.r, "p_value": self.p_value, "n": self.n}


@dataclass(frozen=True)
class NormalityResult:
    """K-S statistic against the fitted normal, with Monte-Carlo p-value."""

    d: float
    p_value: float
    n: int

    @property
    def capped(self) -> bool:
        return self.p_value > P_DISPLAY_CAP

    @property
    def p_display(self) -> float:
        return min(self.p_value, P_DISPLAY_CAP)

    def to_dict(self) -> dict:
        return {
            "D": self.d,
            "p_value": self.p_value,
            "p_display": self.p_display,
            "capped": self.capped,
            "n": self.n,
        }


def _t_two_sided_p(t_stat: float, dof: int) -> float:
    if math.isinf(t_stat):
        return 0.0
    return float(2.0 * stdtr(dof, -abs(t_stat)))


def pearson(x, y) -> CorrelationResult:
    """Pearson correlation with two-sided p from the t distribution (n-2 df)."""
    x = _as_sample(x, 3, "x")
    y = _as_sample(y, 3, "y")
    if len(x) != len(y):
        raise ValueError(f"x and y lengths differ: {len(x)} vs {len(y)}")
    n = len(x)
    dx = x - x.mean()
    dy = y - y.mean()
    sxx = float(np.dot(dx, dx))
    syy = float(np.dot(dy, dy))
    if sxx == 0.0 or syy == 0.0:
        raise UndefinedCorrelationError("correlation undefined for zero-variance input")
    r = float(np.dot(dx, dy) / math.sqrt(sxx * syy))
    r = max(-1.0, min(1.0, r))
    if abs(r) == 1.0:
        t_stat = math.inf
    else:
        t_stat = r * math.sqrt((n - 2) / (1.0 - r * r))
    return CorrelationResult("pearson", r, _t_two_sided_p(t_stat, n - 2), n)


def average_ranks(x) -> np.ndarray:
    """Ranks 1..n with tied values sharing the average of their positions."""
    x = np.asarray(x, dtype=float)
    order = np.argsort(x, kind="stable")
    ranks = np.empty(len(x), dtype=float)
    i = 0
    while i < len(x):
        j = i
        while j + 1 < len(x) and x[order[j + 1]] == x[order[i]]:
            j += 1
        ranks[order[i:j + 1]] = 0.5 * (i + j) + 1.0
        i = j + 1
    return ranks


def spearman(x, y) -> CorrelationResult:
    """Spearman rank correlation (average ranks for ties), t-approximated p."""
    x = _as_sample(x, 3, "x")
    y = _as_sample(y, 3, "y")
    if len(x) != len(y):
        raise ValueError(f"x and y lengths differ: {len(x)} vs {len(y)}")
    result = pearson(average_ranks(x), average_ranks(y))
    return CorrelationResult("spearman", result.r, result.p_value, result.n)


def ks_statistic_normal(x) -> float:
    """Largest deviation between the sample ECDF and the fitted normal CDF."""
    x = _as_sample(x, 4)
    sd = x.std(ddof=1)
    if sd == 0.0:
        raise DegenerateSampleError("normality test undefined for zero-variance sample")
    z = np.sort((x - x.mean()) / sd)
    n = len(z)
    cdf = ndtr(z)
    d_plus = (np.arange(1, n + 1) / n - cdf).max()
    d_minus = (cdf - np.arange(0, n) / n).max()
    return float(max(d_plus, d_minus))


def lilliefors_null(n: int, replicates: int = DEFAULT_KS_REPLICATES, seed: int = 0) -> np.ndarray:
    """Sorted null distribution of the K-S statistic with estimated parameters.

    Simulates ``replicates`` standard-normal samples of size n and computes
    each one's statistic the same way ks_statistic_normal does.
    """
    if n < 4:
        raise ValueError(f"need n >= 4, got {n}")
    if replicates < 1:
        raise ValueError(f"need at least 1 replicate, got {replicates}")
    rng = np.random.default_rng(seed)
    z = rng.standard_normal((replicates, n))
    z = (z - z.mean(axis=1, keepdims=True)) / z.std(axis=1, ddof=1, keepdims=True)
    z.sort(axis=1)
    cdf = ndtr(z)
    hi = np.arange(1, n + 1) / n
    lo = np.arange(0, n) / n
    d = np.maximum((hi - cdf).max(axis=1), (cdf - lo).max(axis=1))
    d.sort()
    return d


def lilliefors_pvalue(d: float, null: np.ndarray) -> float:
    """Monte-Carlo p-value of an observed statistic against a sorted null set.

    Uses the add-one estimator (1 + #{null >= d}) / (B + 1), which keeps the
    test exact under the null.
    """
    exceed = len(null) - int(np.searchsorted(null, d, side="left"))
    return (1 + exceed) / (len(null) + 1)


def ks_normality(x, replicates: int = DEFAULT_KS_REPLICATES, seed: int = 0) -> NormalityResult:
    """Normality test with Monte-Carlo calibrated p (parameters estimated)."""
    x = _as_sample(x, 4)
    d = ks_statistic_normal(x)
    null = lilliefors_null(len(x), replicates, seed)
    return NormalityResult(d=d, p_value=lilliefors_pvalue(d, null), n=len(x))


@dataclass(frozen=True)
class RegressionFit:
    """Ordinary least squares line with a mean-response confidence band."""

    slope: float
    intercept: float
    n: int
    x_mean: float
    sxx: float
    resid_std: float
    confidence: float
    t_crit: float

    def predict(self, x):
        return self.intercept + self.slope * np.asarray(x, dtype=float)

    def band(self, x):
        """(lower, upper) of the confidence band for the mean response at x."""
        x = np.asarray(x, dtype=float)
        fitted = self.predict(x)
        margin = self.t_crit * self.resid_std * np.sqrt(
            1.0 / self.n + (x - self.x_mean) ** 2 / self.sxx
        )
        return fitted - margin, fitted + margin


def linear_fit_with_band(x, y, confidence: float = 0.95) -> RegressionFit:
    """Fit y = intercept + slope*x by least squares with a confidence band.

    The band covers the mean response: half-width
    t_{1-alpha/2, n-2} * s * sqrt(1/n + (x - xbar)^2 / Sxx), narrowest at
    the predictor mean.
    """
    x = _as_sample(x, 3, "x")
    y = _as_sample(y, 3, "y")
    if len(x) != len(y):
        raise ValueError(f"x and y lengths differ: {len(x)} vs {len(y)}")
    if not 0.0 < confidence < 1.0:
        raise ValueError(f"confidence must be in (0, 1), got {confidence!r}")
    n = len(x)
    dx = x - x.mean()
    sxx = float(np.dot(dx, dx))
    if sxx == 0.0:
        raise UndefinedFitError("regression undefined for zero-variance x")
    slope = float(np.dot(dx, y - y.mean()) / sxx)
    intercept = float(y.mean() - slope * x.mean())
    resid = y - (intercept + slope * x)
    resid_std = math.sqrt(float(np.dot(resid, resid)) / (n - 2))
    t_crit = float(stdtrit(n - 2, 0.5 + confidence / 2.0))
    return RegressionFit(
        slope=slope,
        intercept=intercept,
        n=n,
        x_mean=float(x.mean()),
        sxx=sxx,
        resid_std=resid_std,
        confidence=confidence,
        t_crit=t_crit,
    )


# --- study data -----------------------------------------------------------

STUDY_HEADER = ["participant", "enjoyment", "engagement", "time_s", "collisions", "accuracy"]

# Questionnaire scores are sums of five 1-5 items.
SCORE_MIN, SCORE_MAX = 5, 25


@dataclass(frozen=True)
class StudyRecord:
    """One participant's questionnaire scores and task metrics."""

    participant: str
    enjoyment: int
    engagement: int
    time_s: float
    collisions: int
    accuracy: float

    def __post_init__(self):
        for name in ("enjoyment", "engagement"):
            score = getattr(self, name)
            if not isinstance(score, int) or not SCORE_MIN <= score <= SCORE_MAX:
                raise ValueError(
                    f"{name} must be an integer in [{SCORE_MIN}, {SCORE_MAX}], got {score!r}"
                )
        if not (math.isfinite(self.time_s) and self.time_s >= 0):
            raise ValueError(f"time_s must be >= 0, got {self.time_s!r}")
        if not isinstance(self.collisions, int) or self.collisions < 0:
            raise ValueError(f"collisions must be a nonnegative integer, got {self.collisions!r}")
        if not (math.isfinite(self.accuracy) and 0.0 <= self.accuracy <= 1.0):
            raise ValueError(f"accuracy must be in [0, 1], got {self.accuracy!r}")


def load_study(source: str) -> list[StudyRecord]:
    """Parse study CSV content (header: participant,enjoyment,engagement,
    time_s,collisions,accuracy).  Data rows are numbered from 1 in errors."""
    rows = [r for r in csv.reader(io.StringIO(source)) if r]
    if not rows:
        raise ValueError("study file is empty")
    header = [c.strip().lower() for c in rows[0]]
    if header != STUDY_HEADER:
        raise ValueError(
            f"expected header '{','.join(STUDY_HEADER)}', got {','.join(header)}"
        )
    records = []
    for i, row in enumerate(rows[1:], start=1):
        if len(row) != len(STUDY_HEADER):
            raise ValueError(f"row {i}: expected {len(STUDY_HEADER)} columns, got {len(row)}")
        try:
            records.append(StudyRecord(
                participant=row[0],
                enjoyment=int(row[1]),
                engagement=int(row[2]),
                time_s=float(row[3]),
                collisions=int(row[4]),
                accuracy=float(row[5]),
            ))
        except ValueError as exc:
            raise ValueError(f"row {i}: {exc}") from None
    return records


def serialize_study(records: list[StudyRecord]) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(STUDY_HEADER)
    for r in records:
        writer.writerow([
            r.participant, r.enjoyment, r.engagement,
            repr(r.time_s), r.collisions, repr(r.accuracy),
        ])
    return out.getvalue()


STUDY_VARIABLES = ("enjoyment", "engagement", "time_s", "collisions", "accuracy")
CORRELATION_PAIRS = (
    ("engagement", "enjoyment"),
    ("engagement", "time_s"),
    ("engagement", "collisions"),
    ("engagement", "accuracy"),
)


@dataclass(frozen=True)
class StatsReport:
    """Normality screen plus the four engagement correlations."""

    n: int
    alpha: float
    normality: dict[str, NormalityResult]
    correlations: dict[str, CorrelationResult]

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "alpha": self.alpha,
            "normality": {k: v.to_dict() for k, v in self.normality.items()},
            "correlations": {k: v.to_dict() for k, v in self.correlations.items()},
        }


def analyze_study(
    records: list[StudyRecord],
    alpha: float = 0.05,
    seed: int = 0,
    replicates: int = DEFAULT_KS_REPLICATES,
) -> StatsReport:
    """Run the study pipeline: normality screen, then gated correlations.

    Each variable is K-S tested against a fitted normal; a correlation pair
    uses Pearson when both variables pass (p > alpha) and Spearman when
    either fails.  Per-variable Monte-Carlo seeds derive deterministically
    from ``seed``.
    """
    if len(records) < 4:
        raise ValueError(
            f"insufficient sample: need at least 4 study records, got {len(records)}"
        )
    columns = {
        "enjoyment": np.array([r.enjoyment for r in records], dtype=float),
        "engagement": np.array([r.engagement for r in records], dtype=float),
        "time_s": np.array([r.time_s for r in records], dtype=float),
        "collisions": np.array([r.collisions for r in records], dtype=float),
        "accuracy": np.array([r.accuracy for r in records], dtype=float),
    }
    for name, values in columns.items():
        if values.max() == values.min():
            raise UndefinedCorrelationError(
                f"column '{name}' has zero variance; correlation undefined"
            )

    child_seeds = np.random.SeedSequence(seed).generate_state(len(STUDY_VARIABLES))
    normality = {
        name: ks_normality(columns[name], replicates=replicates, seed=int(child_seeds[i]))
        for i, name in enumerate(STUDY_VARIABLES)
    }
    is_normal = {name: normality[name].p_value > alpha for name in STUDY_VARIABLES}

    correlations = {}
    for a, b in CORRELATION_PAIRS:
        test = pearson if (is_normal[a] and is_normal[b]) else spearman
        correlations[f"{a}_vs_{b}"] = test(columns[a], columns[b])

    return StatsReport(
        n=len(records), alpha=alpha, normality=normality, correlations=correlations
    )


DEFAULT_STUDY_SEED = 26
DEFAULT_STUDY_SIZE = 50


def synthesize_study(
    n: int = DEFAULT_STUDY_SIZE, seed: int = DEFAULT_STUDY_SEED
) -> list[StudyRecord]:
    """Generate a seeded synthetic study dataset.

    A latent skill variable drives all columns so that engagement
    correlates positively with enjoyment and accuracy and negatively with
    completion time and collisions; collisions are Poisson counts (skewed,
    non-normal) while the other variables stay approximately normal.
    """
    if n < 4:
        raise ValueError(f"need at least 4 participants, got {n}")
    rng = np.random.default_rng(seed)
    skill = rng.standard_normal(n)

    engagement = np.clip(np.rint(18.5 + 3.2 * skill + rng.normal(0.0, 1.5, n)), 5, 25)
    enjoyment = np.clip(np.rint(20.3 + 2.6 * skill + rng.normal(0.0, 1.6, n)), 5, 25)
    time_s = 220.0 - 6.0 * (engagement - 18.5) + rng.normal(0.0, 16.0, n)
    time_s = np.maximum(time_s, 30.0)
    rate = np.exp(0.8 - 0.22 * (engagement - 18.5))
    collisions = rng.poisson(rate)
    accuracy = np.clip(
        0.72 + 0.035 * (engagement - 18.5) + rng.normal(0.0, 0.09, n), 0.0, 1.0
    )

    return [
        StudyRecord(
            participant=f"P{i + 1:02d}",
            enjoyment=int(enjoyment[i]),
            engagement=int(engagement[i]),
            time_s=float(np.round(time_s[i], 3)),
            collisions=int(collisions[i]),
            accuracy=float(np.round(accuracy[i], 4)),
        )
        for i in range(n)
    ]
