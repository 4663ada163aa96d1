"""Durable text forms: plan files, report/trace/pareto/certification text.

Plan file (bit-exact): line 1 is ``g k``, line 2 the row-major district ids
(bottom row first) separated by single spaces.  Everything else here is
tab-delimited text with exact rationals alongside float renderings, so the
numbers can be consumed by scripts without re-deriving them.
"""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path

from .anneal import ParetoPoint
from .certifier import CertificationReport, OracleSummary
from .errors import FileFormatError
from .grid import CellPartition
from .metrics import PlanReport

__all__ = [
    "save_plan",
    "load_plan",
    "render_report",
    "report_to_dict",
    "render_certification",
    "render_oracle",
    "render_pareto",
    "render_trace",
]


def save_plan(p: CellPartition, path) -> None:
    """Write the two-line plan file."""
    text = f"{p.g} {p.k}\n" + " ".join(str(d) for d in p.assignment) + "\n"
    Path(path).write_text(text, encoding="utf-8")


def load_plan(path) -> CellPartition:
    """Read a plan file back; raises FileFormatError on malformed input."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise FileFormatError(f"cannot read plan file: {exc}") from exc
    lines = text.splitlines()
    if len(lines) < 2:
        raise FileFormatError("plan file needs two lines: 'g k' and the assignment")
    head = lines[0].split()
    if len(head) != 2:
        raise FileFormatError(f"malformed plan header {lines[0]!r}; expected 'g k'")
    try:
        g, k = int(head[0]), int(head[1])
    except ValueError as exc:
        raise FileFormatError(f"non-integer plan header {lines[0]!r}") from exc
    if g < 1 or k < 1:
        raise FileFormatError(f"g and k must be positive, got g={g} k={k}")
    try:
        ids = tuple(int(tok) for tok in lines[1].split())
    except ValueError as exc:
        raise FileFormatError("assignment line contains a non-integer") from exc
    if len(ids) != g * g:
        raise FileFormatError(f"expected {g * g} district ids, found {len(ids)}")
    bad = [d for d in ids if not 1 <= d <= k]
    if bad:
        raise FileFormatError(f"district id {bad[0]} outside 1..{k}")
    return CellPartition(g, k, ids)


def _frac(x: Fraction) -> str:
    return str(x)


def _num(x) -> str:
    if x is None:
        return "-"
    return f"{float(x):.6f}"


def render_report(r: PlanReport) -> str:
    """Tab-delimited plan report: plan-level fields, then one row per district."""
    lines = [
        "plan report",
        f"g\t{r.g}",
        f"k\t{r.k}",
        f"voters_a\t{r.total_a}",
        f"voters_b\t{r.total_b}",
        f"eg\t{_frac(r.eg)}\t{_num(r.eg)}",
        f"delta\t{_frac(r.delta_achieved)}\t{_num(r.delta_achieved)}",
        f"min_pp\t{_num(r.min_pp)}",
        f"seats_a\t{r.seats_a}",
        f"seats_b\t{r.seats_b}",
        f"ties\t{r.ties}",
        "empty_districts\t"
        + (",".join(str(d) for d in r.empty_districts) if r.empty_districts else "-"),
    ]
    if r.desiderata is not None:
        d = r.desiderata
        for name, res in (
            ("balance", d.balance),
            ("compactness", d.compactness),
            ("efficiency", d.efficiency),
        ):
            lines.append(f"{name}\t{'pass' if res.passed else 'fail'}\t{res.detail}")
        lines.append(f"all_pass\t{'yes' if d.all_pass else 'no'}")
    lines.append("district\tpop\ta\tb\twinner\twasted_a\twasted_b\tpp")
    for t, pp in zip(r.tallies, r.pp_scores):
        lines.append(
            f"{t.district}\t{t.pop}\t{t.a_count}\t{t.b_count}\t{t.winner}"
            f"\t{t.wasted_a}\t{t.wasted_b}\t{_num(pp)}"
        )
    return "\n".join(lines) + "\n"


def report_to_dict(r: PlanReport) -> dict:
    """JSON-ready view of a PlanReport; exact values ride along as strings."""
    out = {
        "g": r.g,
        "k": r.k,
        "total_a": r.total_a,
        "total_b": r.total_b,
        "eg": {"exact": _frac(r.eg), "value": float(r.eg)},
        "delta": {"exact": _frac(r.delta_achieved), "value": float(r.delta_achieved)},
        "min_pp": r.min_pp,
        "seats": {"a": r.seats_a, "b": r.seats_b, "ties": r.ties},
        "empty_districts": list(r.empty_districts),
        "districts": [
            {
                "id": t.district,
                "pop": t.pop,
                "a": t.a_count,
                "b": t.b_count,
                "winner": t.winner,
                "wasted_a": t.wasted_a,
                "wasted_b": t.wasted_b,
                "pp": pp,
                "pp_exact": None if coeff is None else f"{_frac(coeff)}*pi",
            }
            for t, pp, coeff in zip(r.tallies, r.pp_scores, r.pp_pi_coeffs)
        ],
    }
    if r.desiderata is None:
        out["desiderata"] = None
    else:
        d = r.desiderata
        out["desiderata"] = {
            "balance": {"passed": d.balance.passed, "detail": d.balance.detail},
            "compactness": {"passed": d.compactness.passed, "detail": d.compactness.detail},
            "efficiency": {"passed": d.efficiency.passed, "detail": d.efficiency.detail},
            "all_pass": d.all_pass,
        }
    return out


def _yn(flag: bool) -> str:
    return "yes" if flag else "no"


def render_certification(r: CertificationReport) -> str:
    """Certification report: parameter trail, bound values, verdicts."""
    w, p = r.witness, r.params
    lines = [
        "impossibility certification",
        f"delta\t{p.delta}",
        f"compactness_c\t{p.compactness_c}",
        f"alpha\t{p.alpha}",
        f"beta\t{p.beta}",
        f"k\t{p.k}",
        f"witness_n\t{w.n}",
        f"witness_l\t{w.l}",
        f"witness_a\t{w.a}",
        f"witness_b\t{w.b}",
        f"gamma\t{_frac(w.gamma)}\t{_num(w.gamma)}",
        f"eps\t{_frac(w.eps)}\t{_num(w.eps)}",
        f"min_perimeter_F\t{w.min_perimeter!r}",
        f"ratio_bound\t{w.ratio_bound_value!r}",
        f"required_ratio\t{_frac(Fraction(w.b, w.a))}",
        f"predicted_eg_bound\t{_frac(w.eg_bound)}\t{_num(w.eg_bound)}",
        f"predicted_imbalance\t{_frac(w.imbalance)}\t{_num(w.imbalance)}",
        f"balance\t{'pass' if r.balance.passed else 'fail'}\t{r.balance.detail}",
        f"compactness\t{'pass' if r.compactness.passed else 'fail'}\t{r.compactness.detail}",
        f"applicable\t{_yn(r.applicable)}",
        f"seats\t{r.seats_a}\t{r.seats_b}\t{r.ties}",
        f"a_sweep\t{_yn(r.a_sweep)}",
        f"eg\t{_frac(r.eg)}\t{_num(r.eg)}",
        f"eg_magnitude_ok\t{_yn(r.eg_magnitude_ok)}",
        f"eg_within_predicted\t{_yn(r.eg_within_predicted)}",
        f"imbalance\t{_frac(r.imbalance)}\t{_num(r.imbalance)}",
        f"imbalance_ok\t{_yn(r.imbalance_ok)}",
        f"certified\t{_yn(r.certified)}",
        f"verdict\t{r.verdict}",
    ]
    return "\n".join(lines) + "\n"


def render_oracle(s: OracleSummary) -> str:
    lines = [
        "exhaustive oracle summary",
        f"g\t{s.g}",
        f"k\t{s.k}",
        f"assignments\t{s.assignments}",
        f"valid_partitions\t{s.valid_partitions}",
        f"survivors\t{s.survivors}",
        f"a_sweep_survivors\t{s.a_sweep_survivors}",
        f"b_majority_survivors\t{s.b_majority_survivors}",
        f"counterexamples\t{s.counterexamples}",
        f"imbalance\t{_frac(s.imbalance)}\t{_num(s.imbalance)}",
        "min_abs_eg\t"
        + ("-" if s.min_abs_eg is None else f"{_frac(s.min_abs_eg)}\t{_num(s.min_abs_eg)}"),
        "best_assignment\t"
        + ("-" if s.best_assignment is None else " ".join(str(d) for d in s.best_assignment)),
    ]
    return "\n".join(lines) + "\n"


def render_pareto(points: list[ParetoPoint]) -> str:
    lines = ["pp_floor\tmin_pp\tabs_eg\tdelta\tabs_eg_exact\tdelta_exact"]
    for pt in points:
        lines.append(
            f"{pt.pp_floor:.6f}\t{_num(pt.min_pp)}\t{_num(pt.abs_eg)}\t{_num(pt.delta)}"
            f"\t{_frac(pt.abs_eg)}\t{_frac(pt.delta)}"
        )
    return "\n".join(lines) + "\n"


def render_trace(trace) -> str:
    lines = ["step\ttemperature\tobjective\taccepted\tbest_objective"]
    for entry in trace:
        lines.append(
            f"{entry.step}\t{entry.temperature:.9g}\t{entry.objective:.9g}"
            f"\t{int(entry.accepted)}\t{entry.best_objective:.9g}"
        )
    return "\n".join(lines) + "\n"
