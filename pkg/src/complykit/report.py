"""Comply-or-explain reports.

Every policy constraint yields exactly one verdict: `comply` when the
metric is defined and inside its legitimate interval, `explain` when it
is outside or Undefined (with the reason attached), `error` when the
metric could not be computed at all. Reports are complete regardless of
the policy's violation mode, and rendering is deterministic: the same
report (with the timestamp suppressed) always produces byte-identical
text and JSON.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .decisions import StrategyChoice
from .fairness import MetricValue
from .ingest import CompositionAudit
from .intervals import Interval
from .policy import MetricConstraint, PolicyDocument

SCHEMA_VERSION = 1

COMPLY = "comply"
EXPLAIN = "explain"
ERROR = "error"


@dataclass(frozen=True)
class ConstraintVerdict:
    constraint_id: str  # metric id as declared in the policy
    value: Optional[float]
    reason: Optional[str]  # Undefined reason, if any
    interval: Interval
    tolerance: float
    status: str  # comply | explain | error
    explanation: str
    trace: dict = field(default_factory=dict)


@dataclass(frozen=True)
class ComplianceReport:
    policy_name: str
    findings: tuple  # ContextFindings
    verdicts: tuple  # ConstraintVerdicts
    audit: Optional[CompositionAudit]
    strategy: Optional[StrategyChoice]
    overall_status: str  # comply | explain
    display_mode: bool = True
    agent_mode: bool = True
    created_at: Optional[str] = None  # ISO timestamp; None when suppressed


def judge_constraint(constraint: MetricConstraint,
                     metric: Optional[MetricValue]) -> ConstraintVerdict:
    """Verdict for one policy constraint given its computed metric."""
    interval = constraint.range
    if metric is None:
        return ConstraintVerdict(
            constraint.metric_id, None, None, interval, constraint.tolerance,
            ERROR, "metric was not computed (missing input)")
    if not metric.is_defined:
        return ConstraintVerdict(
            constraint.metric_id, None, metric.reason, interval,
            constraint.tolerance, EXPLAIN,
            f"value undefined: {metric.reason}", metric.trace)
    effective = interval.widened(constraint.tolerance)
    if effective.contains(metric.value):
        return ConstraintVerdict(
            constraint.metric_id, metric.value, None, interval,
            constraint.tolerance, COMPLY,
            f"value {metric.value!r} within legitimate interval {interval}",
            metric.trace)
    return ConstraintVerdict(
        constraint.metric_id, metric.value, None, interval,
        constraint.tolerance, EXPLAIN,
        f"value outside legitimate interval: {metric.value!r} not in "
        f"{interval}", metric.trace)


def evaluate(policy: PolicyDocument, metrics, audit=None, findings=(),
             strategy=None, display_mode: bool = True, agent_mode: bool = True,
             created_at: Optional[str] = None) -> ComplianceReport:
    """Assemble the full report.

    `metrics` maps metric id -> MetricValue (or None for uncomputable).
    Every constraint in the policy appears exactly once among verdicts,
    in declaration order.
    """
    if not isinstance(metrics, dict):
        metrics = {m.metric_id: m for m in metrics}
    verdicts = tuple(judge_constraint(c, metrics.get(c.metric_id))
                     for c in policy.metrics)
    ok = (all(v.status == COMPLY for v in verdicts)
          and all(f.is_approved for f in findings)
          and (audit is None or audit.within_range))
    return ComplianceReport(
        policy_name=policy.name,
        findings=tuple(findings),
        verdicts=verdicts,
        audit=audit,
        strategy=strategy,
        overall_status=COMPLY if ok else EXPLAIN,
        display_mode=display_mode,
        agent_mode=agent_mode,
        created_at=created_at,
    )


# ---------------------------------------------------------------------------
# Text rendering

def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _agent_lines(report: ComplianceReport):
    lines = [f"Policy {report.policy_name}: {report.overall_status}"]
    for f in report.findings:
        if f.is_approved:
            lines.append(f"Context {f.subject}: approved")
        else:
            lines.append(f"Context {f.subject}: violation — {f.reason}")
    for v in report.verdicts:
        if v.status == COMPLY:
            lines.append(f"Constraint {v.constraint_id}: comply")
        else:
            lines.append(f"Constraint {v.constraint_id}: {v.status} — "
                         f"{v.explanation}")
    if report.audit is not None:
        a = report.audit
        status = COMPLY if a.within_range else EXPLAIN
        lines.append(f"Composition audit: {status} — deviation "
                     f"{_fmt(a.deviation)} vs range {a.range}")
    if report.strategy is not None:
        s = report.strategy
        lines.append(f"Strategy ({s.criterion}): {s.action_label} "
                     f"(value {_fmt(s.value)})")
    return lines


def _trace_lines(trace: dict, indent: str):
    lines = []
    for key in sorted(trace, key=str):
        value = trace[key]
        if isinstance(value, dict):
            lines.append(f"{indent}{key}:")
            lines.extend(_trace_lines(value, indent + "  "))
        elif isinstance(value, MetricValue):
            rendered = _fmt(value.value) if value.is_defined \
                else f"undefined ({value.reason})"
            lines.append(f"{indent}{key} = {rendered}")
        else:
            lines.append(f"{indent}{key} = {_fmt(value)}")
    return lines


def _display_lines(report: ComplianceReport):
    lines = [f"Policy: {report.policy_name}",
             f"Overall: {report.overall_status}"]
    if report.created_at is not None:
        lines.append(f"Created: {report.created_at}")
    if report.findings:
        lines.append("")
        lines.append("Operational context:")
        for f in report.findings:
            lines.append(f"  [{f.status}] {f.subject} — {f.reason}")
    if report.verdicts:
        lines.append("")
        lines.append("Constraints:")
        for v in report.verdicts:
            shown = _fmt(v.value) if v.value is not None else "undefined"
            lines.append(f"  [{v.status}] {v.constraint_id} = {shown}, "
                         f"legitimate interval {v.interval}"
                         + (f", tolerance {_fmt(v.tolerance)}"
                            if v.tolerance else ""))
            lines.append(f"    {v.explanation}")
            lines.extend(_trace_lines(v.trace, "    "))
    if report.audit is not None:
        a = report.audit
        lines.append("")
        lines.append("Composition audit:")
        for value, share in a.shares.items():
            lines.append(f"  share {value!r} = {_fmt(share)}")
        lines.append(f"  reference share for {a.unprivileged_value!r} = "
                     f"{_fmt(a.reference_share)}")
        lines.append(f"  deviation = {_fmt(a.deviation)}, range {a.range} "
                     f"-> {'comply' if a.within_range else 'violation'}")
    if report.strategy is not None:
        s = report.strategy
        lines.append("")
        lines.append(f"Strategy ({s.criterion}):")
        lines.append(f"  chosen: {s.action_label} (index {s.action_index}, "
                     f"value {_fmt(s.value)})")
        lines.append("  per-action scores: ["
                     + ", ".join(_fmt(x) for x in s.scores) + "]")
        if s.regret_matrix is not None:
            lines.append("  regret matrix:")
            for row in s.regret_matrix:
                lines.append("    [" + ", ".join(_fmt(x) for x in row) + "]")
        if s.hurwicz_lambda is not None:
            lines.append(f"  lambda = {_fmt(s.hurwicz_lambda)}")
    return lines


def render(report: ComplianceReport, mode: str = "display") -> str:
    """Render the report in one modality.

    `agent` mode is one summary sentence per verdict; `display` mode is
    the full trace (per-group counts, regret matrix, bin tables).
    """
    if mode == "agent":
        return "\n".join(_agent_lines(report)) + "\n"
    if mode == "display":
        return "\n".join(_display_lines(report)) + "\n"
    raise ValueError(f"unknown render mode {mode!r}")


def render_auto(report: ComplianceReport) -> str:
    """Render per the report's modality flags.

    When both flags are set the agent summary comes first, then the full
    display trace.
    """
    parts = []
    if report.agent_mode:
        parts.append(render(report, "agent"))
    if report.display_mode:
        parts.append(render(report, "display"))
    if not parts:
        parts.append(render(report, "agent"))
    return "\n".join(parts)


# ---------------------------------------------------------------------------
# JSON serialization

def _json_value(v) -> str:
    if v is None:
        return "null"
    if v is True:
        return "true"
    if v is False:
        return "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return format(v, ".17g")
    if isinstance(v, str):
        out = ['"']
        for ch in v:
            if ch == '"':
                out.append('\\"')
            elif ch == "\\":
                out.append("\\\\")
            elif ord(ch) < 0x20:
                out.append(f"\\u{ord(ch):04x}")
            else:
                out.append(ch)
        out.append('"')
        return "".join(out)
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_json_value(x) for x in v) + "]"
    if isinstance(v, dict):
        return "{" + ", ".join(
            f"{_json_value(str(k))}: {_json_value(val)}"
            for k, val in v.items()) + "}"
    raise TypeError(f"cannot serialize {type(v).__name__}")


def _interval_obj(i: Interval) -> dict:
    return {"lo": i.lo, "hi": i.hi}


def _trace_obj(trace):
    if isinstance(trace, dict):
        return {str(k): _trace_obj(v) for k, v in
                sorted(trace.items(), key=lambda kv: str(kv[0]))}
    if isinstance(trace, MetricValue):
        return {"value": trace.value, "reason": trace.reason,
                "trace": _trace_obj(trace.trace)}
    if hasattr(trace, "tp"):  # ConfusionCounts
        return {"tp": trace.tp, "fp": trace.fp, "tn": trace.tn,
                "fn": trace.fn}
    if isinstance(trace, (list, tuple)):
        return [_trace_obj(v) for v in trace]
    return trace


def report_object(report: ComplianceReport) -> dict:
    """The report as a plain dict matching docs/report-schema.json."""
    obj = {
        "schema_version": SCHEMA_VERSION,
        "policy": report.policy_name,
        "overall_status": report.overall_status,
        "created_at": report.created_at,
        "modes": {"display": report.display_mode,
                  "agent": report.agent_mode},
        "findings": [
            {"subject": f.subject, "status": f.status, "reason": f.reason}
            for f in report.findings
        ],
        "verdicts": [
            {
                "constraint": v.constraint_id,
                "value": v.value,
                "reason": v.reason,
                "interval": _interval_obj(v.interval),
                "tolerance": v.tolerance,
                "status": v.status,
                "explanation": v.explanation,
                "trace": _trace_obj(v.trace),
            }
            for v in report.verdicts
        ],
        "composition_audit": None,
        "strategy": None,
    }
    if report.audit is not None:
        a = report.audit
        obj["composition_audit"] = {
            "shares": {str(k): v for k, v in a.shares.items()},
            "unprivileged_value": a.unprivileged_value,
            "reference_share": a.reference_share,
            "deviation": a.deviation,
            "range": _interval_obj(a.range),
            "within_range": a.within_range,
        }
    if report.strategy is not None:
        s = report.strategy
        obj["strategy"] = {
            "criterion": s.criterion,
            "action_index": s.action_index,
            "action": s.action_label,
            "value": s.value,
            "scores": list(s.scores),
            "regret_matrix": [list(r) for r in s.regret_matrix]
            if s.regret_matrix is not None else None,
            "lambda": s.hurwicz_lambda,
        }
    return obj


def to_json(report: ComplianceReport) -> bytes:
    """Stable-order JSON with floats at 17 significant digits."""
    return _json_value(report_object(report)).encode("utf-8")
