/** Pure renderers: server payloads in, HTML strings out.
 *
 * Single source of truth: every probability shown on screen is the
 * server's own pair of strings, `fraction` and `decimal`, untouched.
 * The only numeric use of a payload value is parseFloat(decimal) to set
 * a bar's CSS width — presentation geometry, never a displayed number.
 */

import type {
  ChessboardCell,
  Diagram,
  HistoryDay,
  ProbabilityMap,
  ProbabilityText,
  ServeResult,
  StateResult,
  StrategyReport,
  WhatIfResult,
} from "./protocol.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

/** The server's two forms, verbatim, side by side. */
export function probabilityText(p: ProbabilityText): string {
  return `<span class="prob"><b class="frac">${escapeHtml(p.fraction)}</b>` +
    ` <span class="dec">= ${escapeHtml(p.decimal)}</span></span>`;
}

function barWidth(p: ProbabilityText): string {
  const fraction = Number.parseFloat(p.decimal);
  const percent = Number.isFinite(fraction) ? Math.min(100, Math.max(0, fraction * 100)) : 0;
  return percent.toFixed(2);
}

export function renderBars(title: string, map: ProbabilityMap, kind: string): string {
  const rows = Object.entries(map)
    .map(
      ([label, p]) => `
      <div class="bar-row" data-label="${escapeHtml(label)}">
        <span class="bar-label">${escapeHtml(label)}</span>
        <span class="bar-track"><span class="bar-fill ${kind}" style="width:${barWidth(p)}%"></span></span>
        ${probabilityText(p)}
      </div>`,
    )
    .join("");
  return `<section class="card" data-panel="${kind}">
    <h2>${escapeHtml(title)}</h2>
    ${rows}
  </section>`;
}

export function renderPosterior(state: StateResult): string {
  return renderBars("Belief over compositions", state.posterior, "posterior");
}

export function renderPredictive(state: StateResult): string {
  const hat = renderBars("Tomorrow's hat", state.predictive, "predictive");
  if (!state.taste_predictive) {
    return hat;
  }
  return hat + renderBars("Tomorrow's taste", state.taste_predictive, "taste");
}

export function renderToday(state: StateResult): string {
  const last = state.history[state.history.length - 1];
  const hat = last
    ? `<span class="hat hat-${escapeHtml(last.hat)}">${escapeHtml(last.hat)}</span>`
    : `<span class="hat hat-none">—</span>`;
  const openNote =
    state.open_day !== null
      ? `<p class="open-note">A guest is waiting — choose what to serve.</p>`
      : "";
  return `<section class="card" data-panel="today">
    <h2>Day ${state.day_count}</h2>
    <p class="today-hat">Latest hat: ${hat}</p>
    <p class="hats-seen">Hats so far: <code>${escapeHtml(state.hats_seen) || "(none)"}</code></p>
    ${openNote}
  </section>`;
}

export function renderHistory(history: readonly HistoryDay[]): string {
  const chips = history
    .map((day) => {
      const served =
        day.served === null
          ? ""
          : `<span class="served ${day.angry ? "angry" : "happy"}">${escapeHtml(day.served)}${
              day.angry ? " ✗" : " ✓"
            }</span>`;
      return `<li class="day-chip">
        <span class="day-number">${day.day}</span>
        <span class="hat hat-${escapeHtml(day.hat)}">${escapeHtml(day.hat)}</span>
        ${served}
      </li>`;
    })
    .join("");
  return `<section class="card" data-panel="history">
    <h2>Timeline</h2>
    <ol class="timeline">${chips || "<li class='day-chip empty'>no days yet</li>"}</ol>
  </section>`;
}

export function renderOutcome(result: ServeResult): string {
  const mood = result.angry
    ? `<strong class="angry">she stormed off angry</strong>`
    : `<strong class="happy">she left satisfied</strong>`;
  return `<div class="banner outcome ${result.angry ? "angry" : "happy"}" data-panel="outcome">
    Day ${result.day}: served ${escapeHtml(result.served)} — ${mood}.
    <span class="totals">${result.angry_total} angry of ${result.served_total} served.</span>
  </div>`;
}

export function renderRecommended(recommended: Readonly<Record<string, string>>): string {
  const rules = Object.entries(recommended)
    .map(([hat, food]) => `${escapeHtml(hat)} → ${escapeHtml(food)}`)
    .join(", ");
  return `<p class="recommended" data-panel="recommended">Recommended: ${rules}</p>`;
}

export function renderStrategies(
  strategies: Readonly<Record<string, StrategyReport>>,
  recommended?: Readonly<Record<string, string>>,
): string {
  const hats = Object.keys(Object.values(strategies)[0]?.per_hat ?? {});
  const header = hats.map((h) => `<th>angry | ${escapeHtml(h)}</th>`).join("");
  const rows = Object.entries(strategies)
    .map(([name, report]) => {
      const cells = hats
        .map((h) => `<td>${probabilityText(report.per_hat[h] as ProbabilityText)}</td>`)
        .join("");
      return `<tr data-strategy="${escapeHtml(name)}">
        <th scope="row">${escapeHtml(name)}</th>${cells}
        <td>${probabilityText(report.marginal)}</td>
      </tr>`;
    })
    .join("");
  return `<section class="card" data-panel="strategies">
    <h2>Strategy comparison</h2>
    <table class="strategies">
      <thead><tr><th>strategy</th>${header}<th>marginal anger</th></tr></thead>
      <tbody>${rows}</tbody>
    </table>
    ${recommended ? renderRecommended(recommended) : ""}
  </section>`;
}

/** Expand the server's integer counts into an ordered list of labels.
 *
 * Pure layout: the grid's columns are the `size` equally likely guests
 * and its rows the `size` equally likely pulls from the mirrored bag,
 * exactly as the server's counts dictate. No probabilities involved.
 */
export function expandCounts(cell: ChessboardCell): string[] {
  const labels: string[] = [];
  for (const [label, count] of Object.entries(cell.counts)) {
    for (let i = 0; i < count; i += 1) {
      labels.push(label);
    }
  }
  return labels;
}

export function renderChessboard(hat: string, cell: ChessboardCell): string {
  const labels = expandCounts(cell);
  const cells = labels
    .flatMap((rowLabel) =>
      labels.map((colLabel) => {
        const ok = rowLabel === colLabel;
        return `<span class="cell ${ok ? "ok" : "bad"}" title="guest ${escapeHtml(
          colLabel,
        )}, pulled ${escapeHtml(rowLabel)}"></span>`;
      }),
    )
    .join("");
  return `<section class="card" data-panel="chessboard" data-hat="${escapeHtml(hat)}">
    <h2>Mixing grid for hat ${escapeHtml(hat)}</h2>
    <div class="board" style="grid-template-columns:repeat(${cell.size},1fr)">${cells}</div>
    <p class="board-legend">
      <span class="ok-count">${cell.satisfied} matched</span> ·
      <span class="bad-count">${cell.angry} angry</span>
      of ${cell.size * cell.size} cells
    </p>
  </section>`;
}

export function renderWhatIf(result: WhatIfResult): string {
  const taste = result.taste_predictive
    ? renderBars("Taste after that run", result.taste_predictive, "whatif-taste")
    : "";
  return `<div class="whatif-result" data-panel="whatif">
    <p>After ${result.day_count} days (suffix ${escapeHtml(result.suffix.join("") || "—")}):</p>
    ${renderBars("Belief", result.posterior, "whatif-posterior")}
    ${renderBars("Next hat", result.predictive, "whatif-predictive")}
    ${taste}
  </div>`;
}

const STROKE_WIDTHS: Readonly<Record<number, string>> = {
  1: "0.6",
  2: "1.2",
  3: "1.8",
  4: "2.6",
  5: "3.4",
};

/** Layered SVG of the scenario network.
 *
 * Edge thickness is the server's weight_class mapped straight onto a
 * stroke width (class 1 additionally dashed); edge labels are the exact
 * probability strings.
 */
export function renderNetwork(diagram: Diagram): string {
  const layers: string[] = [];
  for (const node of diagram.nodes) {
    if (!layers.includes(node.layer)) {
      layers.push(node.layer);
    }
  }
  const width = 220 * layers.length;
  const height = 320;
  const position = new Map<string, { x: number; y: number }>();
  for (const [index, layer] of layers.entries()) {
    const members = diagram.nodes.filter((node) => node.layer === layer);
    members.forEach((node, row) => {
      position.set(node.id, {
        x: 110 + index * 220,
        y: Math.round(((row + 1) * height) / (members.length + 1)),
      });
    });
  }
  const edges = diagram.edges
    .map((edge) => {
      const from = position.get(edge.source);
      const to = position.get(edge.target);
      if (!from || !to) {
        return "";
      }
      const dash = edge.weight_class === 1 ? ' stroke-dasharray="6 4"' : "";
      const widthAttr = STROKE_WIDTHS[edge.weight_class] ?? "1.2";
      const midX = (from.x + to.x) / 2;
      const midY = (from.y + to.y) / 2 - 5;
      return `<g class="edge" data-weight-class="${edge.weight_class}">
        <line x1="${from.x}" y1="${from.y}" x2="${to.x}" y2="${to.y}"
          stroke-width="${widthAttr}"${dash}></line>
        <text x="${midX}" y="${midY}" class="edge-label">${escapeHtml(edge.probability)}</text>
      </g>`;
    })
    .join("");
  const nodes = diagram.nodes
    .map((node) => {
      const spot = position.get(node.id);
      if (!spot) {
        return "";
      }
      const check = node.observed ? " ✓" : "";
      const annotation = node.annotation
        ? `<text x="${spot.x}" y="${spot.y + 34}" class="node-annotation">${escapeHtml(
            node.annotation,
          )}</text>`
        : "";
      return `<g class="node layer-${escapeHtml(node.layer)}"${
        node.observed ? ' data-observed="true"' : ""
      }>
        <ellipse cx="${spot.x}" cy="${spot.y}" rx="52" ry="22"></ellipse>
        <text x="${spot.x}" y="${spot.y + 5}" class="node-label">${escapeHtml(
          node.label,
        )}${check}</text>
        ${annotation}
      </g>`;
    })
    .join("");
  return `<section class="card" data-panel="network">
    <h2>Scenario network</h2>
    <svg viewBox="0 0 ${width} ${height}" role="img" aria-label="scenario network">
      ${edges}${nodes}
    </svg>
  </section>`;
}

export function renderRetryBanner(message: string): string {
  return `<div class="banner error" data-panel="retry">
    Connection lost: ${escapeHtml(message)}
    <button type="button" data-action="retry">Retry</button>
  </div>`;
}

export function renderStaleBanner(message: string): string {
  return `<div class="banner warning" data-panel="stale">
    This session is gone (${escapeHtml(message)}).
    <button type="button" data-action="recreate">Start a new session</button>
  </div>`;
}

export function renderProtocolBanner(message: string): string {
  return `<div class="banner warning" data-panel="protocol-error">
    ${escapeHtml(message)}
  </div>`;
}

export function renderFoodButtons(foods: readonly string[], enabled: boolean): string {
  const buttons = foods
    .map(
      (food) =>
        `<button type="button" data-action="serve" data-food="${escapeHtml(food)}"${
          enabled ? "" : " disabled"
        }>Serve ${escapeHtml(food)}</button>`,
    )
    .join("");
  return `<div class="food-buttons" data-panel="foods">${buttons}</div>`;
}
