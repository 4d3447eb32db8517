"""Human-readable text summaries."""

from weinstein_tube.formatters.base import BaseFormatter
from weinstein_tube.models import CheckReport, MoserReport, SuiteReport


def _number(value: float | None) -> str:
    return "-" if value is None else f"{value:.6g}"


def _check_line(check: CheckReport) -> str:
    status = check.verdict.upper()
    if check.verdict == "hypothesis-not-met":
        detail = f"hypothesis {check.hypothesis!r} does not hold"
    else:
        detail = (
            f"margin {_number(check.worst_margin)} "
            f"(lhs {_number(check.worst_lhs)}, rhs {_number(check.worst_rhs)}, "
            f"{check.n_samples} samples)"
        )
    line = f"[{status}] {check.check_id} <{check.anchor}>: {detail}"
    if check.failing_sample:
        state = ", ".join(f"{k}={v}" for k, v in check.failing_sample.items())
        line += f"\n    worst sample: {state}"
    return line


class TextFormatter(BaseFormatter):
    """Plain text: certificates first, then one line per check."""

    def format(self, report: SuiteReport) -> str:
        lines = [
            f"scene: {report.scene or '-'}  seed: {report.seed}  "
            f"radius: {_number(report.radius)}"
        ]
        if report.certificates:
            lines.append("")
            lines.append("certificates:")
            for cert in report.certificates:
                lines.append(f"  {cert.name:<18} = {cert.display}  [{cert.formula_id}]")
                for note in cert.notes:
                    lines.append(f"      note: {note}")
        lines.append("")
        if not report.checks:
            lines.append("no checks")
        else:
            lines.extend(_check_line(c) for c in report.checks)
            failed = sum(c.verdict == "fail" for c in report.checks)
            lines.append("")
            lines.append(f"{len(report.checks)} checks, {failed} failed")
        return "\n".join(lines) + "\n"

    def format_moser(self, report: MoserReport) -> str:
        lines = [
            f"scene: {report.scene}  radius: {report.radius:.6g}  "
            f"start radius: {report.start_radius:.6g}  "
            f"alpha: {report.alpha_practical:.6g}",
            f"starts: {len(report.samples)}  all inside: {report.all_inside}  "
            f"max residual: {_number(report.max_residual)}  "
            f"max method gap: {_number(report.max_method_gap)}",
        ]
        lines.extend(f"  note: {note}" for note in report.alpha_notes)
        for s in report.samples:
            lines.append(
                f"  x={s.x} xi={s.xi} -> x={s.endpoint_x} xi={s.endpoint_xi} "
                f"({s.method}, {s.steps} steps, inside={s.stayed_inside}, "
                f"residual {_number(s.residual)})"
            )
        return "\n".join(lines) + "\n"
