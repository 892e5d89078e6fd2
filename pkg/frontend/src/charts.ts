/**
 * Chart view models and SVG rendering. Every plotted value is carried
 * verbatim from the API payload into the view model (no client-side
 * recomputation); scaling only maps values to pixels.
 */

import type { CurvePoint, TimelineBin, TimelinePayload, VolumePayload } from "./api.js";
import { SERIES_COLORS } from "./colors.js";

export interface SeriesPoint {
  startMs: number;
  value: number; // verbatim payload value
  x: number;
  y: number;
}

export interface TimelineChart {
  width: number;
  height: number;
  binWidthMs: number;
  bins: TimelineBin[]; // payload bins, untouched
  series: {
    positive: SeriesPoint[];
    negative: SeriesPoint[];
    neutral: SeriesPoint[];
    average: SeriesPoint[];
  };
}

const PAD = 24;

function xScale(startMs: number, t0: number, t1: number, width: number): number {
  if (t1 === t0) return width / 2;
  return PAD + ((startMs - t0) / (t1 - t0)) * (width - 2 * PAD);
}

/** Ratio scale: [0,1] onto the drawing area. */
function yRatio(value: number, height: number): number {
  return height - PAD - value * (height - 2 * PAD);
}

/** Average-sentiment scale: [-1,1] onto the drawing area. */
function yAvg(value: number, height: number): number {
  return height - PAD - ((value + 1) / 2) * (height - 2 * PAD);
}

export function timelineChart(payload: TimelinePayload, width = 680, height = 200): TimelineChart {
  const bins = payload.bins;
  const stamps = bins.map((b) => b.start_ms);
  const t0 = stamps.length ? Math.min(...stamps) : 0;
  const t1 = stamps.length ? Math.max(...stamps) : 1;
  const series: TimelineChart["series"] = { positive: [], negative: [], neutral: [], average: [] };
  for (const bin of bins) {
    if (bin.n === 0) continue; // empty bins carry null ratios
    const x = xScale(bin.start_ms, t0, t1, width);
    series.positive.push({ startMs: bin.start_ms, value: bin.ratio_pos!, x, y: yRatio(bin.ratio_pos!, height) });
    series.negative.push({ startMs: bin.start_ms, value: bin.ratio_neg!, x, y: yRatio(bin.ratio_neg!, height) });
    series.neutral.push({ startMs: bin.start_ms, value: bin.ratio_neu!, x, y: yRatio(bin.ratio_neu!, height) });
    series.average.push({ startMs: bin.start_ms, value: bin.avg_sentiment!, x, y: yAvg(bin.avg_sentiment!, height) });
  }
  return { width, height, binWidthMs: payload.bin_width_ms, bins, series };
}

function polyline(points: SeriesPoint[], color: string, dash = ""): string {
  if (!points.length) return "";
  const attr = points.map((p) => `${p.x.toFixed(1)},${p.y.toFixed(1)}`).join(" ");
  const dashAttr = dash ? ` stroke-dasharray="${dash}"` : "";
  return `<polyline fill="none" stroke="${color}" stroke-width="1.8"${dashAttr} points="${attr}"/>`;
}

export function renderTimelineSvg(chart: TimelineChart): string {
  const { width, height } = chart;
  const zero = yAvg(0, height);
  return [
    `<svg viewBox="0 0 ${width} ${height}" xmlns="http://www.w3.org/2000/svg" role="img">`,
    `<line x1="${PAD}" y1="${zero.toFixed(1)}" x2="${width - PAD}" y2="${zero.toFixed(1)}" stroke="#ddd"/>`,
    polyline(chart.series.positive, SERIES_COLORS.positive),
    polyline(chart.series.negative, SERIES_COLORS.negative),
    polyline(chart.series.neutral, SERIES_COLORS.neutral),
    polyline(chart.series.average, SERIES_COLORS.average, "4 3"),
    `</svg>`,
  ].join("");
}

export interface VolumeChart {
  width: number;
  height: number;
  bars: { startMs: number; count: number; x: number; y: number; w: number; h: number }[];
  total: number;
}

export function volumeChart(payload: VolumePayload, width = 680, height = 160): VolumeChart {
  const bins = payload.bins;
  const max = bins.reduce((m, b) => Math.max(m, b.count), 0);
  const w = bins.length ? (width - 2 * PAD) / bins.length : 0;
  const bars = bins.map((b, i) => {
    const h = max ? (b.count / max) * (height - 2 * PAD) : 0;
    return {
      startMs: b.start_ms,
      count: b.count,
      x: PAD + i * w,
      y: height - PAD - h,
      w: Math.max(1, w - 1),
      h,
    };
  });
  return { width, height, bars, total: payload.total };
}

export function renderVolumeSvg(chart: VolumeChart): string {
  const bars = chart.bars
    .map(
      (b) =>
        `<rect x="${b.x.toFixed(1)}" y="${b.y.toFixed(1)}" width="${b.w.toFixed(1)}" height="${b.h.toFixed(1)}" fill="#4a7db8"><title>${b.count}</title></rect>`,
    )
    .join("");
  return `<svg viewBox="0 0 ${chart.width} ${chart.height}" xmlns="http://www.w3.org/2000/svg" role="img">${bars}</svg>`;
}

export interface CurveChart {
  width: number;
  height: number;
  points: { timestampMs: number; count: number; x: number; y: number }[];
}

export function curveChart(curve: CurvePoint[], width = 420, height = 140): CurveChart {
  if (!curve.length) return { width, height, points: [] };
  const t0 = curve[0]!.timestamp_ms;
  const t1 = curve[curve.length - 1]!.timestamp_ms;
  const max = curve[curve.length - 1]!.cumulative_count;
  const points = curve.map((p) => ({
    timestampMs: p.timestamp_ms,
    count: p.cumulative_count,
    x: xScale(p.timestamp_ms, t0, t1, width),
    y: height - PAD - (max ? (p.cumulative_count / max) * (height - 2 * PAD) : 0),
  }));
  return { width, height, points };
}

export function renderCurveSvg(chart: CurveChart): string {
  const pts = chart.points.map((p) => `${p.x.toFixed(1)},${p.y.toFixed(1)}`).join(" ");
  return [
    `<svg viewBox="0 0 ${chart.width} ${chart.height}" xmlns="http://www.w3.org/2000/svg" role="img">`,
    `<polyline fill="none" stroke="#444" stroke-width="1.6" points="${pts}"/>`,
    `</svg>`,
  ].join("");
}
