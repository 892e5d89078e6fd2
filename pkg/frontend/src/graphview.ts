/**
 * Component node-link view model: sentiment-colored, interaction-sized
 * nodes on a deterministic circular layout (layout is presentational; the
 * colors, sizes, badges and table values are the tested surface).
 */

import type { ComponentDetail, ComponentProfile } from "./api.js";
import { nodeRadius, sentimentColor } from "./colors.js";

export interface NodeCircle {
  id: string;
  cx: number;
  cy: number;
  r: number;
  fill: string;
  sentiment: string | null;
  interactionCount: number | null;
}

export interface EdgeLine {
  src: string;
  dst: string;
  x1: number;
  y1: number;
  x2: number;
  y2: number;
}

export interface ComponentView {
  width: number;
  height: number;
  circles: NodeCircle[];
  lines: EdgeLine[];
  badges: string[]; // bot flags, verbatim
  linearity: number | null;
  truncatedNotice: string | null;
}

export function componentView(detail: ComponentDetail, size = 420): ComponentView {
  const nodes = [...detail.nodes].sort((a, b) => (a.id < b.id ? -1 : 1));
  const maxCount = nodes.reduce((m, n) => Math.max(m, n.interaction_count ?? 0), 0);
  const cx = size / 2;
  const cy = size / 2;
  const ring = size / 2 - 30;
  const circles: NodeCircle[] = nodes.map((n, i) => {
    const angle = (2 * Math.PI * i) / Math.max(1, nodes.length);
    return {
      id: n.id,
      cx: cx + ring * Math.cos(angle),
      cy: cy + ring * Math.sin(angle),
      r: nodeRadius(n.interaction_count, maxCount),
      fill: sentimentColor(n.sentiment, n.sentiment_score),
      sentiment: n.sentiment,
      interactionCount: n.interaction_count,
    };
  });
  const at = new Map(circles.map((c) => [c.id, c]));
  const lines: EdgeLine[] = [];
  for (const e of detail.edges) {
    const a = at.get(e.src);
    const b = at.get(e.dst);
    if (a && b) {
      lines.push({ src: e.src, dst: e.dst, x1: a.cx, y1: a.cy, x2: b.cx, y2: b.cy });
    }
  }
  return {
    width: size,
    height: size,
    circles,
    lines,
    badges: detail.profile.bot_flags,
    linearity: detail.profile.linearity_score,
    truncatedNotice: detail.truncated
      ? `showing ${detail.nodes.length} of ${detail.node_total} nodes`
      : null,
  };
}

export function renderComponentSvg(view: ComponentView): string {
  const lines = view.lines
    .map(
      (l) =>
        `<line x1="${l.x1.toFixed(1)}" y1="${l.y1.toFixed(1)}" x2="${l.x2.toFixed(1)}" y2="${l.y2.toFixed(1)}" stroke="#ccc" stroke-width="0.8"/>`,
    )
    .join("");
  const circles = view.circles
    .map(
      (c) =>
        `<circle cx="${c.cx.toFixed(1)}" cy="${c.cy.toFixed(1)}" r="${c.r.toFixed(1)}" fill="${c.fill}"><title>${c.id}</title></circle>`,
    )
    .join("");
  return `<svg viewBox="0 0 ${view.width} ${view.height}" xmlns="http://www.w3.org/2000/svg" role="img">${lines}${circles}</svg>`;
}

export interface ProfileRow {
  label: string;
  within: number | string;
  reachable: number | string;
}

/** Profile table rows, values verbatim from the payload. */
export function profileTable(profile: ComponentProfile): ProfileRow[] {
  const cell = (v: number | null) => (v === null ? "n/a" : v);
  return [
    { label: "nodes", within: profile.size, reachable: profile.reachable_set_size },
    { label: "mean friends", within: cell(profile.within.mean_friends), reachable: cell(profile.reachable.mean_friends) },
    { label: "median friends", within: cell(profile.within.median_friends), reachable: cell(profile.reachable.median_friends) },
    { label: "mean followers", within: cell(profile.within.mean_followers), reachable: cell(profile.reachable.mean_followers) },
    { label: "median followers", within: cell(profile.within.median_followers), reachable: cell(profile.reachable.median_followers) },
  ];
}
