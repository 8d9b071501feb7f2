/** HTML-string renderers. Each takes server JSON plus view options and
 * returns markup; no fetching, no state. */
import type {
  EditDiagnostics,
  Histogram,
  MultiAlignResponse,
  SampleSummary,
  StreamingPayload,
} from "./types.js";
import {
  Palette,
  SortKey,
  categoryColor,
  columnGroups,
  disagreementMap,
  formatWer,
  kindColor,
  multialignShapeProblem,
  sortSamples,
} from "./viewmodel.js";

export function escapeHtml(text: string): string {
  return text
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;")
    .replaceAll('"', "&quot;");
}

export function renderSampleList(
  samples: SampleSummary[],
  sortKey: SortKey,
  selectedId: string | null,
): string {
  const rows = sortSamples(samples, sortKey)
    .map((s) => {
      const cls = s.id === selectedId ? "sample selected" : "sample";
      const badge = s.has_streaming ? '<span class="stream-badge">stream</span>' : "";
      const disagreement =
        s.max_disagreement !== null && s.max_disagreement > 0
          ? `<span class="disagree">${(s.max_disagreement * 100).toFixed(0)}%</span>`
          : "";
      return (
        `<li class="${cls}" data-sample="${escapeHtml(s.id)}">` +
        `<span class="sample-id">${escapeHtml(s.id)}</span>` +
        `<span class="sample-wer">${formatWer(s.wer)}</span>` +
        disagreement +
        badge +
        "</li>"
      );
    })
    .join("");
  return `<ul class="sample-list">${rows}</ul>`;
}

export function schemaBanner(problem: string): string {
  return `<div class="banner error">payload does not match the expected schema: ${escapeHtml(problem)}</div>`;
}

export function renderGrid(
  resp: MultiAlignResponse,
  palette: Palette,
  threshold: number,
): string {
  const problem = multialignShapeProblem(resp.multialign);
  if (problem) {
    return schemaBanner(problem);
  }
  const { columns, rows } = resp.multialign;
  const badges = disagreementMap(resp.disagreements, threshold);
  const groups = columnGroups(columns);

  const groupHeader = groups
    .map((g) => {
      const first = columns[g.columns[0]!]!;
      const isBlock = g.columns.length > 1 || (first.option !== null && first.kind === "ref");
      const label = first.kind === "insertion" ? "+" : isBlock ? `block ${g.segment}` : "";
      return `<th colspan="${g.columns.length}" class="group">${escapeHtml(label)}</th>`;
    })
    .join("");

  const header = columns
    .map((col, idx) => {
      const badge = badges.has(idx)
        ? `<span class="badge" title="fraction of models in error here">${((badges.get(idx) ?? 0) * 100).toFixed(0)}%</span>`
        : "";
      if (col.kind === "insertion") {
        return `<th class="col-ins">&#8230;${badge}</th>`;
      }
      if (col.kind === "wildcard") {
        return `<th class="col-wild">&lt;*&gt;${badge}</th>`;
      }
      const option = col.option !== null ? `<sub>${col.option}</sub>` : "";
      return `<th>${escapeHtml(col.text ?? "")}${option}${badge}</th>`;
    })
    .join("");

  const body = rows
    .map((row) => {
      const cells = row.cells
        .map((cell) => {
          if (cell === null) {
            return '<td class="empty"></td>';
          }
          const color = kindColor(cell.kind, palette);
          const shown = cell.kind === "deletion" ? "&#8709;" : escapeHtml(cell.hyp.join(" "));
          const pair = `${cell.ref ?? ""} / ${cell.hyp.join(" ")}`;
          const title = escapeHtml(
            `${cell.kind}: ${pair} (char_errors ${cell.char_errors})`,
          );
          const muted = cell.kind === "wildcard_absorbed" ? " muted" : "";
          return (
            `<td class="cell ${cell.kind}${muted}" style="background:${color}" ` +
            `title="${title}">${shown}</td>`
          );
        })
        .join("");
      return (
        `<tr><th class="row-name">${escapeHtml(row.name)}` +
        `<span class="row-wer">${formatWer(row.report.wer)}</span></th>${cells}</tr>`
      );
    })
    .join("");

  return (
    '<table class="grid">' +
    `<thead><tr><th></th>${groupHeader}</tr><tr><th></th>${header}</tr></thead>` +
    `<tbody>${body}</tbody></table>`
  );
}

export function renderStreaming(payload: StreamingPayload, palette: Palette): string {
  if (!payload.rows.length) {
    return '<div class="empty-state">no streaming rows for this sample</div>';
  }
  const spans = payload.rows.flatMap((r) =>
    r.steps.flatMap((s) => [s.start ?? null, s.end ?? null, s.center]),
  );
  const tMax = Math.max(...spans.filter((v): v is number => v !== null), ...payload.rows.map((r) => r.audio_sent), 1e-9);
  const width = 820;
  const left = 70;
  const rowH = 16;
  const scale = (width - left - 16) / tMax;
  const parts: string[] = [];
  payload.rows.forEach((row, i) => {
    const y = 8 + i * (rowH + 5);
    parts.push(
      `<text x="2" y="${y + 12}" class="axis">t=${row.eval_time.toFixed(2)}</text>`,
    );
    for (const step of row.steps) {
      const color = categoryColor(step.category, palette);
      const title = escapeHtml(`${step.category}: ${step.ref ?? step.hyp ?? ""}`);
      if (step.start != null && step.end != null) {
        const x = left + step.start * scale;
        const w = Math.max((step.end - step.start) * scale - 1, 1.5);
        parts.push(
          `<rect x="${x.toFixed(1)}" y="${y}" width="${w.toFixed(1)}" height="${rowH - 2}" fill="${color}"><title>${title}</title></rect>`,
        );
      } else if (step.center != null) {
        parts.push(
          `<circle cx="${(left + step.center * scale).toFixed(1)}" cy="${y + rowH / 2}" r="3" fill="${color}"><title>${title}</title></circle>`,
        );
      }
    }
    const fx = left + row.audio_sent * scale;
    parts.push(
      `<line x1="${fx.toFixed(1)}" y1="${y - 2}" x2="${fx.toFixed(1)}" y2="${y + rowH}" class="frontier"/>`,
    );
  });
  const height = 8 + payload.rows.length * (rowH + 5) + 10;
  return (
    `<svg class="diagram" viewBox="0 0 ${width} ${height}" width="${width}" height="${height}">` +
    parts.join("") +
    "</svg>"
  );
}

export function renderHistogram(hist: Histogram, palette: Palette): string {
  const n = hist.correct.length;
  const total = hist.correct.reduce((a, b) => a + b, 0) +
    hist.error.reduce((a, b) => a + b, 0) +
    hist.not_yet.reduce((a, b) => a + b, 0);
  if (!n || !total) {
    return '<div class="empty-state">histogram is empty</div>';
  }
  const width = 820;
  const height = 180;
  const left = 40;
  const plotW = width - left - 10;
  const plotH = height - 34;
  const barW = plotW / n;
  const parts: string[] = [];
  for (let i = 0; i < n; i++) {
    const binTotal = hist.correct[i]! + hist.error[i]! + hist.not_yet[i]!;
    if (!binTotal) continue;
    let y = 6;
    const x = left + i * barW;
    for (const [count, color] of [
      [hist.not_yet[i]!, palette.notYet],
      [hist.error[i]!, palette.insertion],
      [hist.correct[i]!, palette.correct],
    ] as [number, string][]) {
      if (!count) continue;
      const h = (plotH * count) / binTotal;
      parts.push(
        `<rect x="${x.toFixed(1)}" y="${y.toFixed(1)}" width="${Math.max(barW - 1, 1).toFixed(1)}" height="${h.toFixed(1)}" fill="${color}"><title>${count}/${binTotal}</title></rect>`,
      );
      y += h;
    }
  }
  const step = Math.max(Math.floor(n / 8), 1);
  for (let i = 0; i <= n; i += step) {
    const edge = hist.bin_edges[Math.min(i, hist.bin_edges.length - 1)]!;
    parts.push(
      `<text x="${(left + i * barW).toFixed(1)}" y="${height - 14}" class="axis" text-anchor="middle">${edge}</text>`,
    );
  }
  parts.push(
    `<text x="${left + plotW / 2}" y="${height - 2}" class="axis" text-anchor="middle">prescription, s</text>`,
  );
  return `<svg class="histogram" viewBox="0 0 ${width} ${height}" width="${width}" height="${height}">${parts.join("")}</svg>`;
}

export function renderDiagnostics(diag: EditDiagnostics): string {
  const where = diag.offset !== null ? ` at offset ${diag.offset}` : "";
  const span = diag.span ? ` near <code>${escapeHtml(diag.span)}</code>` : "";
  return (
    `<div class="diagnostics">` +
    `<strong>${escapeHtml(diag.error)}</strong>${where}${span}<br>` +
    `${escapeHtml(diag.message)}</div>`
  );
}

export function renderToast(message: string): string {
  return `<div class="toast">${escapeHtml(message)}</div>`;
}
