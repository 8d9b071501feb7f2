"""Static SVG renderings of the streaming diagram and histogram.

Pure string templating: the dashboard is the rich renderer, these files
are for reports and quick looks.
"""
from __future__ import annotations

from xml.sax.saxutils import escape

from .streaming.evaluate import PartialAlignmentRow, StreamingHistogram, WordCategory

CATEGORY_COLORS = {
    WordCategory.CORRECT: "#2e9e4f",
    WordCategory.ERROR: "#d64541",
    WordCategory.NOT_YET_TRANSCRIBED: "#9aa0a6",
    WordCategory.WILDCARD_ABSORBED: "#c8d1dc",
}


def _svg(width: int, height: int, body: list[str]) -> str:
    head = (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}" '
        'font-family="sans-serif" font-size="10">'
    )
    return "\n".join([head, *body, "</svg>"]) + "\n"


def render_streaming_diagram(rows: list[PartialAlignmentRow], width: int = 860) -> str:
    """One band per probe time over an audio-time axis: word spans colored
    by category, insertions as dots at their fictitious timestamps, the
    audio-sent frontier as a blue tick."""
    if not rows:
        return _svg(width, 40, ['<text x="10" y="20">no rows</text>'])

    margin_left, margin_top, row_h, gap = 60, 24, 16, 6
    spans = [
        v
        for row in rows
        for s in row.steps
        for v in (s.start, s.end, s.center)
        if v is not None
    ]
    t_max = max([*spans, *(r.audio_sent for r in rows), 1e-9])
    scale = (width - margin_left - 20) / t_max
    height = margin_top + len(rows) * (row_h + gap) + 30

    body = []
    body.append(
        f'<text x="{margin_left}" y="14" fill="#444">audio time &#8594; '
        f'(0 .. {t_max:.2f}s)</text>'
    )
    for i, row in enumerate(rows):
        y = margin_top + i * (row_h + gap)
        body.append(
            f'<text x="4" y="{y + row_h - 4}" fill="#444">'
            f"t={row.eval_time:.2f}</text>"
        )
        for step in row.steps:
            color = CATEGORY_COLORS[step.category]
            title = escape(f"{step.kind.value}: {step.ref or ''}/{step.hyp or ''}")
            if step.start is not None and step.end is not None:
                x = margin_left + step.start * scale
                w = max((step.end - step.start) * scale - 1, 1.5)
                body.append(
                    f'<rect x="{x:.1f}" y="{y}" width="{w:.1f}" height="{row_h - 2}" '
                    f'fill="{color}"><title>{title}</title></rect>'
                )
            elif step.center is not None:
                cx = margin_left + step.center * scale
                body.append(
                    f'<circle cx="{cx:.1f}" cy="{y + row_h / 2}" r="3" '
                    f'fill="{color}"><title>{title}</title></circle>'
                )
        fx = margin_left + row.audio_sent * scale
        body.append(
            f'<line x1="{fx:.1f}" y1="{y - 2}" x2="{fx:.1f}" y2="{y + row_h}" '
            'stroke="#1565c0" stroke-width="1.5"/>'
        )
    legend_y = margin_top + len(rows) * (row_h + gap) + 12
    x = margin_left
    for cat, label in [
        (WordCategory.CORRECT, "correct"),
        (WordCategory.ERROR, "error"),
        (WordCategory.NOT_YET_TRANSCRIBED, "not yet transcribed"),
        (WordCategory.WILDCARD_ABSORBED, "wildcard"),
    ]:
        body.append(
            f'<rect x="{x}" y="{legend_y - 9}" width="10" height="10" '
            f'fill="{CATEGORY_COLORS[cat]}"/>'
        )
        body.append(f'<text x="{x + 14}" y="{legend_y}" fill="#444">{label}</text>')
        x += 14 + 7 * len(label) + 18
    return _svg(width, height, body)


def render_histogram(hist: StreamingHistogram, width: int = 860, height: int = 240) -> str:
    """Stacked per-bin fractions: correct, error, not-yet over prescription."""
    n = len(hist.correct)
    margin_left, margin_bottom, margin_top = 46, 34, 10
    plot_w = width - margin_left - 10
    plot_h = height - margin_top - margin_bottom
    bar_w = plot_w / max(n, 1)

    body = []
    for i in range(n):
        total = hist.correct[i] + hist.error[i] + hist.not_yet[i]
        if not total:
            continue
        x = margin_left + i * bar_w
        y = margin_top
        for count, color in [
            (hist.not_yet[i], CATEGORY_COLORS[WordCategory.NOT_YET_TRANSCRIBED]),
            (hist.error[i], CATEGORY_COLORS[WordCategory.ERROR]),
            (hist.correct[i], CATEGORY_COLORS[WordCategory.CORRECT]),
        ]:
            if not count:
                continue
            h = plot_h * count / total
            body.append(
                f'<rect x="{x:.1f}" y="{y:.1f}" width="{max(bar_w - 1, 1):.1f}" '
                f'height="{h:.1f}" fill="{color}">'
                f"<title>{count}/{total}</title></rect>"
            )
            y += h
    ticks = range(0, n + 1, max(n // 8, 1))
    axis_y = margin_top + plot_h
    body.append(
        f'<line x1="{margin_left}" y1="{axis_y}" x2="{margin_left + plot_w}" '
        f'y2="{axis_y}" stroke="#444"/>'
    )
    for i in ticks:
        x = margin_left + i * bar_w
        edge = hist.bin_edges[i] if i < len(hist.bin_edges) else hist.bin_edges[-1]
        body.append(
            f'<text x="{x:.1f}" y="{axis_y + 14}" text-anchor="middle" '
            f'fill="#444">{edge:g}</text>'
        )
    body.append(
        f'<text x="{margin_left + plot_w / 2:.0f}" y="{height - 4}" '
        'text-anchor="middle" fill="#444">prescription, s (audio sent &#8722; '
        "word center)</text>"
    )
    return _svg(width, height, body)
