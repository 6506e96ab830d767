/** SVG assembly for line plots: scales, ticks, axes, series, markers. */

import type { ReferencePoint } from "./manifest.js";

export interface Series {
  name: string;
  x: number[];
  y: number[];
}

export interface PlotLayout {
  title: string;
  xLabel: string;
  yLabel: string;
  width?: number;
  height?: number;
  xRange?: [number, number];
  yRange?: [number, number];
}

const PALETTE = [
  "#1f77b4",
  "#d62728",
  "#2ca02c",
  "#9467bd",
  "#ff7f0e",
  "#8c564b",
  "#17becf",
  "#7f7f7f",
  "#bcbd22",
  "#e377c2",
];

const MARGIN = { top: 44, right: 180, bottom: 52, left: 64 };

export function niceTicks(lo: number, hi: number, count = 6): number[] {
  if (!(hi > lo)) {
    return [lo];
  }
  const span = hi - lo;
  const raw = span / count;
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  const norm = raw / mag;
  const step = (norm >= 5 ? 10 : norm >= 2 ? 5 : norm >= 1 ? 2 : 1) * mag;
  const ticks: number[] = [];
  for (let v = Math.ceil(lo / step) * step; v <= hi + step * 1e-9; v += step) {
    ticks.push(Math.abs(v) < step * 1e-9 ? 0 : v);
  }
  return ticks;
}

function formatTick(value: number): string {
  if (value === 0) return "0";
  const abs = Math.abs(value);
  if (abs >= 1e4 || abs < 1e-3) return value.toExponential(1);
  return String(Number(value.toPrecision(4)));
}

function escapeXml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function extent(values: number[]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  return [lo, hi];
}

/** Build a complete SVG document for the given series and annotations. */
export function buildSvg(
  series: Series[],
  layout: PlotLayout,
  markers: ReferencePoint[],
  metadata: Record<string, string>,
): string {
  if (series.length === 0) {
    throw new Error("nothing to plot: no series");
  }
  const width = layout.width ?? 860;
  const height = layout.height ?? 520;
  const plotW = width - MARGIN.left - MARGIN.right;
  const plotH = height - MARGIN.top - MARGIN.bottom;

  let [xLo, xHi] = layout.xRange ?? extent(series.flatMap((s) => s.x));
  let [yLo, yHi] = layout.yRange ?? extent(series.flatMap((s) => s.y));
  for (const m of markers) {
    xLo = Math.min(xLo, m.x);
    xHi = Math.max(xHi, m.x);
    yLo = Math.min(yLo, m.y);
    yHi = Math.max(yHi, m.y);
  }
  if (xHi === xLo) [xLo, xHi] = [xLo - 1, xHi + 1];
  if (yHi === yLo) [yLo, yHi] = [yLo - 1, yHi + 1];
  const yPad = 0.06 * (yHi - yLo);
  yLo -= yPad;
  yHi += yPad;

  const sx = (v: number) => MARGIN.left + ((v - xLo) / (xHi - xLo)) * plotW;
  const sy = (v: number) => MARGIN.top + plotH - ((v - yLo) / (yHi - yLo)) * plotH;

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
      `viewBox="0 0 ${width} ${height}" font-family="sans-serif">`,
  );
  const metaLines = Object.entries(metadata)
    .map(([k, v]) => `${escapeXml(k)}: ${escapeXml(v)}`)
    .join("\n");
  parts.push(`<metadata>${metaLines}</metadata>`);
  parts.push(`<rect width="${width}" height="${height}" fill="white"/>`);
  parts.push(
    `<text x="${width / 2}" y="24" text-anchor="middle" font-size="16">` +
      `${escapeXml(layout.title)}</text>`,
  );

  // axes and grid
  for (const t of niceTicks(xLo, xHi)) {
    const x = sx(t);
    parts.push(
      `<line x1="${x}" y1="${MARGIN.top}" x2="${x}" y2="${MARGIN.top + plotH}" ` +
        `stroke="#dddddd"/>`,
      `<text x="${x}" y="${MARGIN.top + plotH + 18}" text-anchor="middle" ` +
        `font-size="11">${formatTick(t)}</text>`,
    );
  }
  for (const t of niceTicks(yLo, yHi)) {
    const y = sy(t);
    parts.push(
      `<line x1="${MARGIN.left}" y1="${y}" x2="${MARGIN.left + plotW}" y2="${y}" ` +
        `stroke="#dddddd"/>`,
      `<text x="${MARGIN.left - 8}" y="${y + 4}" text-anchor="end" ` +
        `font-size="11">${formatTick(t)}</text>`,
    );
  }
  parts.push(
    `<rect x="${MARGIN.left}" y="${MARGIN.top}" width="${plotW}" height="${plotH}" ` +
      `fill="none" stroke="#333333"/>`,
    `<text x="${MARGIN.left + plotW / 2}" y="${height - 12}" text-anchor="middle" ` +
      `font-size="13">${escapeXml(layout.xLabel)}</text>`,
    `<text x="18" y="${MARGIN.top + plotH / 2}" text-anchor="middle" font-size="13" ` +
      `transform="rotate(-90 18 ${MARGIN.top + plotH / 2})">` +
      `${escapeXml(layout.yLabel)}</text>`,
  );

  // series
  series.forEach((s, i) => {
    const color = PALETTE[i % PALETTE.length];
    const d = s.x
      .map((x, j) => `${j === 0 ? "M" : "L"}${sx(x).toFixed(2)},${sy(s.y[j]).toFixed(2)}`)
      .join("");
    parts.push(`<path d="${d}" fill="none" stroke="${color}" stroke-width="1.6"/>`);
    const ly = MARGIN.top + 14 + 16 * i;
    const lx = MARGIN.left + plotW + 12;
    parts.push(
      `<line x1="${lx}" y1="${ly - 4}" x2="${lx + 18}" y2="${ly - 4}" ` +
        `stroke="${color}" stroke-width="2"/>`,
      `<text x="${lx + 24}" y="${ly}" font-size="11">${escapeXml(s.name)}</text>`,
    );
  });

  // annotated reference markers
  markers.forEach((m) => {
    const x = sx(m.x);
    const y = sy(m.y);
    parts.push(
      `<circle cx="${x}" cy="${y}" r="4" fill="none" stroke="#000000" ` +
        `stroke-width="1.4" class="reference-marker"/>`,
      `<text x="${x + 7}" y="${y - 6}" font-size="10" fill="#000000">` +
        `${escapeXml(m.label)}</text>`,
    );
  });

  parts.push("</svg>");
  return parts.join("\n") + "\n";
}
