/**
 * Deterministic color and size mappings shared by the result badges and the
 * node-link view: negative sentiment in shades of red (darker = stronger),
 * neutral yellow, positive in shades of blue; timeline series use
 * blue/red/gray/green for positive/negative/neutral/average. Node radius
 * scales with the square root of the interaction count.
 */

import type { Sentiment } from "./api.js";

export const SERIES_COLORS = {
  positive: "#1f77d0", // blue
  negative: "#d62728", // red
  neutral: "#8a8a8a", // gray
  average: "#2ca02c", // green
} as const;

const NEUTRAL_NODE = "#e8c522"; // yellow
const EXTERNAL_NODE = "#bbbbbb";

function clamp01(x: number): number {
  return Math.min(1, Math.max(0, x));
}

function hex(value: number): string {
  return Math.round(value).toString(16).padStart(2, "0");
}

/** Shade between a pale base and a dark full-strength tone by |score|. */
function shade(base: [number, number, number], dark: [number, number, number], t: number): string {
  const mix = (a: number, b: number) => a + (b - a) * clamp01(t);
  return `#${hex(mix(base[0], dark[0]))}${hex(mix(base[1], dark[1]))}${hex(mix(base[2], dark[2]))}`;
}

export function sentimentColor(sentiment: Sentiment | null, score: number | null): string {
  if (sentiment === null) return EXTERNAL_NODE;
  if (sentiment === "neutral") return NEUTRAL_NODE;
  const strength = clamp01(Math.abs(score ?? 1));
  if (sentiment === "positive") {
    return shade([173, 205, 245], [13, 59, 140], strength);
  }
  return shade([246, 178, 178], [139, 16, 16], strength);
}

export function nodeRadius(interactionCount: number | null, maxCount: number): number {
  const MIN = 3;
  const MAX = 18;
  if (interactionCount === null || maxCount <= 0) return MIN;
  const t = Math.sqrt(clamp01(interactionCount / maxCount));
  return MIN + (MAX - MIN) * t;
}

export function badgeClass(sentiment: Sentiment | null): string {
  return sentiment === null ? "badge unknown" : `badge ${sentiment}`;
}
