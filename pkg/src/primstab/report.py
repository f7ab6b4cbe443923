"""Rendering of stability reports: delimited text, JSON, and figures.

The CSV layout is byte-stable: fixed column set, 12 significant digits,
'.' decimal separator, lowercase booleans, "inf"/"nan" for non-finite
values, and a '#'-prefixed summary footer.  Figures are rendered from
the same in-memory table the CSV comes from, never recomputed.
"""

from __future__ import annotations

import json
from pathlib import Path

from .reps import PSMetrics, PSReport

__all__ = [
    "format_float",
    "report_to_csv",
    "report_to_json",
    "enumeration_to_csv",
    "enumeration_to_json",
    "render_figures",
]

CSV_COLUMNS = (
    "class",
    "length",
    "trace_class",
    "translation_length",
    "slope_lower",
    "axis_margin",
    "degenerate",
)


def format_float(x: float) -> str:
    """12 significant digits, ASCII, negative zero collapsed."""
    if x != x:
        return "nan"
    if x == float("inf"):
        return "inf"
    if x == float("-inf"):
        return "-inf"
    if x == 0.0:
        x = 0.0
    return f"{x:.12g}"


def _row_cells(r: PSMetrics) -> list[str]:
    kind = "overflow" if r.overflow else r.trace_class.value
    return [
        str(r.word),
        str(r.word_length),
        kind,
        format_float(r.translation_length),
        format_float(r.slope_lower),
        format_float(r.axis_margin),
        "true" if r.degenerate else "false",
    ]


def report_to_csv(report: PSReport) -> str:
    lines = [",".join(CSV_COLUMNS)]
    for r in report.rows:
        lines.append(",".join(_row_cells(r)))
    s = report.summary
    reps = "auto" if report.repetitions is None else str(report.repetitions)
    base = report.base
    lines.append(
        f"# representation: {report.label} rank={report.rank}"
    )
    lines.append(
        f"# params: max_length={report.max_length} repetitions={reps}"
        f" window={report.window}"
        f" base_point={format_float(base.z.real)},{format_float(base.z.imag)},{format_float(base.t)}"
    )
    lines.append(
        "# summary:"
        f" classes={len(report.rows)}"
        f" min_slope_lower={format_float(s.min_slope_lower)}"
        f" max_axis_margin={format_float(s.max_axis_margin)}"
        f" degenerate={s.degenerate_count}"
        f" near_parabolic={s.near_parabolic_count}"
        f" overflow={s.overflow_count}"
        f" certificate={s.certificate.value}"
    )
    for t in s.by_length:
        lines.append(
            f"# length {t.length}: classes={t.n_classes}"
            f" min_slope_lower={format_float(t.min_slope_lower)}"
            f" max_axis_margin={format_float(t.max_axis_margin)}"
        )
    return "\n".join(lines) + "\n"


def _json_num(x: float):
    """Strict JSON has no Infinity/NaN, so those become strings."""
    if x != x:
        return "nan"
    if x == float("inf"):
        return "inf"
    if x == float("-inf"):
        return "-inf"
    return x


def report_to_json(report: PSReport) -> dict:
    rows = []
    for r in report.rows:
        rows.append(
            {
                "class": str(r.word),
                "length": r.word_length,
                "trace_class": "overflow" if r.overflow else r.trace_class.value,
                "translation_length": _json_num(r.translation_length),
                "slope_lower": _json_num(r.slope_lower),
                "slope_upper": _json_num(r.slope_upper),
                "additive_defect": _json_num(r.additive_defect),
                "axis_margin": _json_num(r.axis_margin),
                "near_parabolic": r.near_parabolic,
                "degenerate": r.degenerate,
                "overflow": r.overflow,
            }
        )
    s = report.summary
    return {
        "label": report.label,
        "rank": report.rank,
        "max_length": report.max_length,
        "repetitions": report.repetitions,
        "window": report.window,
        "base_point": {
            "re": report.base.z.real,
            "im": report.base.z.imag,
            "t": report.base.t,
        },
        "rows": rows,
        "summary": {
            "classes": len(report.rows),
            "min_slope_lower": _json_num(s.min_slope_lower),
            "max_axis_margin": _json_num(s.max_axis_margin),
            "degenerate": s.degenerate_count,
            "near_parabolic": s.near_parabolic_count,
            "overflow": s.overflow_count,
            "certificate": s.certificate.value,
            "by_length": [
                {
                    "length": t.length,
                    "classes": t.n_classes,
                    "min_slope_lower": _json_num(t.min_slope_lower),
                    "max_axis_margin": _json_num(t.max_axis_margin),
                }
                for t in s.by_length
            ],
        },
    }


def dumps_json(data) -> str:
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def enumeration_to_csv(classes) -> str:
    lines = ["class,length"]
    lines.extend(f"{c},{len(c)}" for c in classes)
    return "\n".join(lines) + "\n"


def enumeration_to_json(classes) -> list[dict]:
    return [{"class": str(c), "length": len(c)} for c in classes]


def render_figures(report: PSReport, outdir: "str | Path") -> list[Path]:
    """Write trend and per-class figures next to the delimited output.

    Infinite margins (degenerate classes) are left off the axes; the
    counts in the titles keep them visible.
    """
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    trends = report.summary.by_length
    lengths = [t.length for t in trends]
    fig, (ax1, ax2) = plt.subplots(2, 1, sharex=True, figsize=(7, 6))
    ax1.plot(lengths, [t.min_slope_lower for t in trends], "o-", color="tab:blue")
    ax1.set_ylabel("min slope (lower)")
    ax1.grid(True, alpha=0.3)
    finite_margins = [
        t.max_axis_margin if t.max_axis_margin != float("inf") else float("nan")
        for t in trends
    ]
    ax2.plot(lengths, finite_margins, "s-", color="tab:red")
    ax2.set_ylabel("max axis margin")
    ax2.set_xlabel("class length")
    ax2.grid(True, alpha=0.3)
    s = report.summary
    fig.suptitle(
        f"{report.label}: per-length trends "
        f"(degenerate {s.degenerate_count}, certificate {s.certificate.value})"
    )
    path = outdir / "psreport_trends.png"
    fig.savefig(path, dpi=110)
    plt.close(fig)
    written.append(path)

    fig, ax = plt.subplots(figsize=(7, 5))
    xs, ys, cs = [], [], []
    for r in report.rows:
        if r.overflow or r.axis_margin == float("inf"):
            continue
        xs.append(r.slope_lower)
        ys.append(r.axis_margin)
        cs.append(r.word_length)
    if xs:
        sc = ax.scatter(xs, ys, c=cs, cmap="viridis", s=30)
        fig.colorbar(sc, ax=ax, label="class length")
    ax.set_xlabel("slope (lower)")
    ax.set_ylabel("axis margin")
    ax.grid(True, alpha=0.3)
    skipped = sum(
        1 for r in report.rows if r.overflow or r.axis_margin == float("inf")
    )
    ax.set_title(f"{report.label}: classes up to length {report.max_length}"
                 + (f" ({skipped} off-scale)" if skipped else ""))
    path = outdir / "psreport_classes.png"
    fig.savefig(path, dpi=110)
    plt.close(fig)
    written.append(path)

    return written
