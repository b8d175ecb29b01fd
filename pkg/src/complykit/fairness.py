"""Group fairness metrics over binary predictions.

Every metric is reported as a signed gap, oriented unprivileged minus
privileged, so that a policy interval check reads the same way for all of
them. Metrics that the literature states as a pair of equalities are
scalarized as the max of the absolute component gaps.

Division by zero never raises: a rate with an empty denominator is
Undefined, and a metric built from an Undefined rate is itself Undefined
with a human-readable reason.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Optional

PRIVILEGED = "privileged"
UNPRIVILEGED = "unprivileged"
GROUPS = (UNPRIVILEGED, PRIVILEGED)


@dataclass(frozen=True)
class Record:
    """One scored/labelled observation for one group."""

    group: str  # "privileged" or "unprivileged"
    predicted: int  # 0 or 1
    actual: int  # 0 or 1
    score: Optional[float] = None  # in [0, 1] when present
    legitimate: Optional[str] = None  # stratification factor

    def __post_init__(self):
        if self.group not in GROUPS:
            raise ValueError(f"unknown group {self.group!r}")
        if self.predicted not in (0, 1) or self.actual not in (0, 1):
            raise ValueError("labels must be binary")
        if self.score is not None and not 0.0 <= self.score <= 1.0:
            raise ValueError(f"score {self.score} outside [0, 1]")


@dataclass(frozen=True)
class GroupedPredictions:
    records: tuple

    def __init__(self, records: Iterable[Record]):
        object.__setattr__(self, "records", tuple(records))

    def by_group(self, group: str):
        return [r for r in self.records if r.group == group]

    def swapped(self) -> "GroupedPredictions":
        """Same data with the privileged/unprivileged assignment flipped."""
        flip = {PRIVILEGED: UNPRIVILEGED, UNPRIVILEGED: PRIVILEGED}
        return GroupedPredictions(
            Record(flip[r.group], r.predicted, r.actual, r.score, r.legitimate)
            for r in self.records
        )


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int = 0
    fp: int = 0
    tn: int = 0
    fn: int = 0

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn


@dataclass(frozen=True)
class Rates:
    """Confusion-matrix rates; None marks a zero-denominator rate."""

    tpr: Optional[float]
    tnr: Optional[float]
    fpr: Optional[float]
    fnr: Optional[float]
    ppv: Optional[float]
    npv: Optional[float]
    fdr: Optional[float]
    for_: Optional[float]


@dataclass
class MetricValue:
    """A metric result: either a real value or Undefined with a reason."""

    metric_id: str
    value: Optional[float]
    reason: Optional[str] = None
    trace: dict = field(default_factory=dict)

    @property
    def is_defined(self) -> bool:
        return self.value is not None

    @staticmethod
    def undefined(metric_id: str, reason: str, trace=None) -> "MetricValue":
        return MetricValue(metric_id, None, reason, trace or {})


def confusion(records: Iterable[Record]) -> ConfusionCounts:
    """Tally (predicted, actual) quadrants for one group's records."""
    tp = fp = tn = fn = 0
    for r in records:
        if r.predicted == 1:
            if r.actual == 1:
                tp += 1
            else:
                fp += 1
        else:
            if r.actual == 1:
                fn += 1
            else:
                tn += 1
    return ConfusionCounts(tp=tp, fp=fp, tn=tn, fn=fn)


def _ratio(num: int, den: int) -> Optional[float]:
    return num / den if den else None


def rates(c: ConfusionCounts) -> Rates:
    return Rates(
        tpr=_ratio(c.tp, c.tp + c.fn),
        tnr=_ratio(c.tn, c.fp + c.tn),
        fpr=_ratio(c.fp, c.fp + c.tn),
        fnr=_ratio(c.fn, c.tp + c.fn),
        ppv=_ratio(c.tp, c.tp + c.fp),
        npv=_ratio(c.tn, c.tn + c.fn),
        fdr=_ratio(c.fp, c.tp + c.fp),
        for_=_ratio(c.fn, c.tn + c.fn),
    )


def _group_confusions(gp: GroupedPredictions):
    return {g: confusion(gp.by_group(g)) for g in GROUPS}


def _rate_gap(gp: GroupedPredictions, metric_id: str, rate_name: str,
              denominator_desc: str) -> MetricValue:
    """Generic unprivileged-minus-privileged gap for one confusion rate."""
    cs = _group_confusions(gp)
    rs = {g: rates(cs[g]) for g in GROUPS}
    trace = {
        g: {"counts": cs[g], rate_name: getattr(rs[g], rate_name)}
        for g in GROUPS
    }
    for g in GROUPS:
        if getattr(rs[g], rate_name) is None:
            return MetricValue.undefined(
                metric_id, f"{g} group has no {denominator_desc}", trace)
    gap = getattr(rs[UNPRIVILEGED], rate_name) - getattr(rs[PRIVILEGED], rate_name)
    return MetricValue(metric_id, gap, trace=trace)


def statistical_parity_from_counts(favorable_unpriv: int, total_unpriv: int,
                                   favorable_priv: int, total_priv: int) -> MetricValue:
    """P(favorable | unprivileged) - P(favorable | privileged) from raw tallies."""
    mid = "statistical_parity_difference"
    if total_unpriv == 0 or total_priv == 0:
        empty = UNPRIVILEGED if total_unpriv == 0 else PRIVILEGED
        return MetricValue.undefined(mid, f"empty group: {empty}")
    p_u = favorable_unpriv / total_unpriv
    p_p = favorable_priv / total_priv
    trace = {
        UNPRIVILEGED: {"favorable": favorable_unpriv, "total": total_unpriv,
                       "proportion": p_u},
        PRIVILEGED: {"favorable": favorable_priv, "total": total_priv,
                     "proportion": p_p},
    }
    return MetricValue(mid, p_u - p_p, trace=trace)


def _parity_on(gp: GroupedPredictions, metric_id: str, label_of) -> MetricValue:
    counts = {}
    for g in GROUPS:
        recs = gp.by_group(g)
        counts[g] = (sum(label_of(r) for r in recs), len(recs))
    mv = statistical_parity_from_counts(
        counts[UNPRIVILEGED][0], counts[UNPRIVILEGED][1],
        counts[PRIVILEGED][0], counts[PRIVILEGED][1])
    mv.metric_id = metric_id
    return mv


def statistical_parity_difference(gp: GroupedPredictions) -> MetricValue:
    """Favorable-outcome rate gap, computed over actual outcomes."""
    return _parity_on(gp, "statistical_parity_difference", lambda r: r.actual)


def equal_acceptance_rate_gap(gp: GroupedPredictions) -> MetricValue:
    """Positive-decision rate gap, computed over predicted labels."""
    return _parity_on(gp, "equal_acceptance_rate", lambda r: r.predicted)


def predictive_parity_gap(gp: GroupedPredictions) -> MetricValue:
    return _rate_gap(gp, "predictive_parity", "ppv", "predicted positives")


def equal_opportunity_gap(gp: GroupedPredictions) -> MetricValue:
    return _rate_gap(gp, "equal_opportunity", "fnr", "actual positives")


def predictive_equality_gap(gp: GroupedPredictions) -> MetricValue:
    return _rate_gap(gp, "predictive_equality", "fpr", "actual negatives")


def accuracy_equality_gap(gp: GroupedPredictions) -> MetricValue:
    mid = "accuracy_equality"
    cs = _group_confusions(gp)
    acc = {}
    for g in GROUPS:
        c = cs[g]
        if c.total == 0:
            return MetricValue.undefined(
                mid, f"empty group: {g}", {h: {"counts": cs[h]} for h in GROUPS})
        acc[g] = (c.tp + c.tn) / c.total
    trace = {g: {"counts": cs[g], "accuracy": acc[g]} for g in GROUPS}
    return MetricValue(mid, acc[UNPRIVILEGED] - acc[PRIVILEGED], trace=trace)


def _max_abs_pair(gp: GroupedPredictions, metric_id: str,
                  first: MetricValue, second: MetricValue) -> MetricValue:
    trace = {"components": {first.metric_id: first, second.metric_id: second}}
    for part in (first, second):
        if not part.is_defined:
            return MetricValue.undefined(metric_id, part.reason, trace)
    return MetricValue(metric_id, max(abs(first.value), abs(second.value)), trace=trace)


def equalized_odds_gap(gp: GroupedPredictions) -> MetricValue:
    """max(|TPR gap|, |FPR gap|)."""
    tpr_gap = _rate_gap(gp, "tpr_gap", "tpr", "actual positives")
    fpr_gap = predictive_equality_gap(gp)
    return _max_abs_pair(gp, "equalized_odds", tpr_gap, fpr_gap)


def conditional_use_accuracy_gap(gp: GroupedPredictions) -> MetricValue:
    """max(|PPV gap|, |NPV gap|)."""
    ppv_gap = predictive_parity_gap(gp)
    npv_gap = _rate_gap(gp, "npv_gap", "npv", "predicted negatives")
    return _max_abs_pair(gp, "conditional_use_accuracy", ppv_gap, npv_gap)


def treatment_equality(gp: GroupedPredictions) -> MetricValue:
    """FN/FP ratio balance, evaluated by cross-multiplication.

    (FN_u * FP_p - FN_p * FP_u) / max(1, FN_u * FP_p + FN_p * FP_u) is total
    and stays in [-1, 1] even when a group has FP = 0.
    """
    cs = _group_confusions(gp)
    a = cs[UNPRIVILEGED].fn * cs[PRIVILEGED].fp
    b = cs[PRIVILEGED].fn * cs[UNPRIVILEGED].fp
    value = (a - b) / max(1, a + b)
    trace = {g: {"fn": cs[g].fn, "fp": cs[g].fp} for g in GROUPS}
    return MetricValue("treatment_equality", value, trace=trace)


def conditional_statistical_parity(gp: GroupedPredictions,
                                   legitimate_values=None) -> MetricValue:
    """Worst positive-decision rate gap across legitimate-factor strata.

    Strata where either group is absent are skipped and listed in the trace.
    """
    mid = "conditional_statistical_parity"
    strata = defaultdict(lambda: {g: [0, 0] for g in GROUPS})  # [positives, total]
    for r in gp.records:
        if legitimate_values is not None and r.legitimate not in legitimate_values:
            continue
        cell = strata[r.legitimate][r.group]
        cell[0] += r.predicted
        cell[1] += 1
    gaps = {}
    skipped = []
    for stratum in sorted(strata, key=lambda s: ("", s) if s is None else (str(s), "")):
        cells = strata[stratum]
        if any(cells[g][1] == 0 for g in GROUPS):
            skipped.append(stratum)
            continue
        p_u = cells[UNPRIVILEGED][0] / cells[UNPRIVILEGED][1]
        p_p = cells[PRIVILEGED][0] / cells[PRIVILEGED][1]
        gaps[stratum] = p_u - p_p
    trace = {"per_stratum_gap": gaps, "skipped_strata": skipped}
    if not gaps:
        return MetricValue.undefined(mid, "no comparable stratum", trace)
    return MetricValue(mid, max(abs(v) for v in gaps.values()), trace=trace)


def _require_scores(gp: GroupedPredictions, metric_id: str):
    missing = sum(1 for r in gp.records if r.score is None)
    if missing:
        return MetricValue.undefined(
            metric_id, f"{missing} record(s) lack scores required by this metric")
    return None


def calibration_gap(gp: GroupedPredictions, bins: int = 10) -> MetricValue:
    """Worst per-bin positive-rate gap over equal-width score bins.

    Bins with only one group present are skipped and logged in the trace.
    """
    mid = "calibration"
    if bins < 2:
        raise ValueError("bins must be >= 2")
    problem = _require_scores(gp, mid)
    if problem:
        return problem
    tally = defaultdict(lambda: {g: [0, 0] for g in GROUPS})  # [positives, total]
    for r in gp.records:
        b = min(int(r.score * bins), bins - 1)
        cell = tally[b][r.group]
        cell[0] += r.actual
        cell[1] += 1
    per_bin = {}
    skipped = []
    for b in sorted(tally):
        cells = tally[b]
        if any(cells[g][1] == 0 for g in GROUPS):
            skipped.append(b)
            continue
        per_bin[b] = (cells[UNPRIVILEGED][0] / cells[UNPRIVILEGED][1]
                      - cells[PRIVILEGED][0] / cells[PRIVILEGED][1])
    trace = {"bins": bins, "per_bin_gap": per_bin, "skipped_bins": skipped}
    if not per_bin:
        return MetricValue.undefined(mid, "no comparable bin", trace)
    return MetricValue(mid, max(abs(v) for v in per_bin.values()), trace=trace)


def _balance_gap(gp: GroupedPredictions, metric_id: str, actual_class: int) -> MetricValue:
    problem = _require_scores(gp, metric_id)
    if problem:
        return problem
    means = {}
    for g in GROUPS:
        scores = [r.score for r in gp.by_group(g) if r.actual == actual_class]
        if not scores:
            cls = "positives" if actual_class == 1 else "negatives"
            return MetricValue.undefined(metric_id, f"{g} group has no actual {cls}")
        # fsum keeps the mean independent of record order
        means[g] = math.fsum(scores) / len(scores)
    trace = {g: {"mean_score": means[g]} for g in GROUPS}
    return MetricValue(metric_id, means[UNPRIVILEGED] - means[PRIVILEGED], trace=trace)


def balance_positive_gap(gp: GroupedPredictions) -> MetricValue:
    """Mean score gap among actual positives."""
    return _balance_gap(gp, "balance_positive", 1)


def balance_negative_gap(gp: GroupedPredictions) -> MetricValue:
    """Mean score gap among actual negatives."""
    return _balance_gap(gp, "balance_negative", 0)


@dataclass(frozen=True)
class MetricInfo:
    metric_id: str
    compute: object  # callable(gp, constraint) -> MetricValue
    needs_predictions: bool = True
    needs_scores: bool = False
    dataset_level: bool = False


def _mk_registry():
    def plain(fn):
        return lambda gp, constraint: fn(gp)

    entries = [
        MetricInfo("statistical_parity_difference",
                   plain(statistical_parity_difference),
                   needs_predictions=False, dataset_level=True),
        MetricInfo("equal_acceptance_rate", plain(equal_acceptance_rate_gap)),
        MetricInfo("predictive_parity", plain(predictive_parity_gap)),
        MetricInfo("equal_opportunity", plain(equal_opportunity_gap)),
        MetricInfo("predictive_equality", plain(predictive_equality_gap)),
        MetricInfo("equalized_odds", plain(equalized_odds_gap)),
        MetricInfo("accuracy_equality", plain(accuracy_equality_gap)),
        MetricInfo("conditional_use_accuracy", plain(conditional_use_accuracy_gap)),
        MetricInfo("treatment_equality", plain(treatment_equality)),
        MetricInfo("conditional_statistical_parity",
                   plain(conditional_statistical_parity)),
        MetricInfo("calibration",
                   lambda gp, c: calibration_gap(gp, c.bins if c else 10),
                   needs_scores=True),
        MetricInfo("balance_positive", plain(balance_positive_gap), needs_scores=True),
        MetricInfo("balance_negative", plain(balance_negative_gap), needs_scores=True),
    ]
    return {e.metric_id: e for e in entries}


METRIC_REGISTRY = _mk_registry()

# Accepted legacy spelling from existing operational-context dictionaries.
METRIC_ALIASES = {"stat_mean_difference": "statistical_parity_difference"}


def resolve_metric_id(name: str) -> Optional[str]:
    name = METRIC_ALIASES.get(name, name)
    return name if name in METRIC_REGISTRY else None
