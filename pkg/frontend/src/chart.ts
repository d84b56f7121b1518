/** Deterministic SVG chart: one mean-regret curve per group with a
 * translucent +/- std band, legend, and labeled axes. */
import { GroupStats } from "./stats.js";

export interface ChartOptions {
  title?: string;
  width?: number;
  height?: number;
}

const PALETTE = [
  "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
  "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
];

const MARGIN = { top: 48, right: 24, bottom: 52, left: 72 };

function fmt(x: number): string {
  // fixed, locale-independent formatting so identical inputs give
  // byte-identical markup
  return Number(x.toPrecision(8)).toString();
}

function niceTicks(lo: number, hi: number, count: number): number[] {
  if (hi === lo) hi = lo + 1;
  const raw = (hi - lo) / count;
  const mag = 10 ** Math.floor(Math.log10(raw));
  const steps = [1, 2, 2.5, 5, 10];
  const step = mag * (steps.find((s) => s * mag >= raw) ?? 10);
  const ticks: number[] = [];
  for (let v = Math.ceil(lo / step) * step; v <= hi + step * 1e-9; v += step) {
    ticks.push(Number(v.toPrecision(10)));
  }
  return ticks;
}

export function renderSvg(groups: GroupStats[], opts: ChartOptions = {}): string {
  if (groups.length === 0) throw new Error("nothing to plot: no groups");
  const width = opts.width ?? 800;
  const height = opts.height ?? 500;
  const plotW = width - MARGIN.left - MARGIN.right;
  const plotH = height - MARGIN.top - MARGIN.bottom;

  let xMax = 1;
  let yMax = 1;
  for (const g of groups) {
    xMax = Math.max(xMax, g.rounds[g.rounds.length - 1]);
    for (let t = 0; t < g.mean.length; t++) {
      yMax = Math.max(yMax, g.mean[t] + g.std[t]);
    }
  }
  const x = (round: number) => MARGIN.left + (round / xMax) * plotW;
  const y = (value: number) => MARGIN.top + plotH - (value / yMax) * plotH;

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
      `viewBox="0 0 ${width} ${height}" font-family="sans-serif">`,
  );
  parts.push(`<rect width="${width}" height="${height}" fill="white"/>`);
  if (opts.title) {
    parts.push(
      `<text x="${width / 2}" y="24" text-anchor="middle" font-size="16">` +
        `${escapeXml(opts.title)}</text>`,
    );
  }

  // axes and ticks
  const axisY = MARGIN.top + plotH;
  parts.push(
    `<line x1="${MARGIN.left}" y1="${axisY}" x2="${MARGIN.left + plotW}" y2="${axisY}" stroke="black"/>`,
    `<line x1="${MARGIN.left}" y1="${MARGIN.top}" x2="${MARGIN.left}" y2="${axisY}" stroke="black"/>`,
  );
  for (const tick of niceTicks(0, xMax, 8)) {
    const px = x(tick);
    parts.push(
      `<line x1="${fmt(px)}" y1="${axisY}" x2="${fmt(px)}" y2="${axisY + 5}" stroke="black"/>`,
      `<text x="${fmt(px)}" y="${axisY + 20}" text-anchor="middle" font-size="11">${fmt(tick)}</text>`,
    );
  }
  for (const tick of niceTicks(0, yMax, 6)) {
    const py = y(tick);
    parts.push(
      `<line x1="${MARGIN.left - 5}" y1="${fmt(py)}" x2="${MARGIN.left}" y2="${fmt(py)}" stroke="black"/>`,
      `<text x="${MARGIN.left - 9}" y="${fmt(py + 4)}" text-anchor="end" font-size="11">${fmt(tick)}</text>`,
    );
  }
  parts.push(
    `<text x="${MARGIN.left + plotW / 2}" y="${height - 12}" text-anchor="middle" font-size="13">round</text>`,
    `<text x="20" y="${MARGIN.top + plotH / 2}" text-anchor="middle" font-size="13" ` +
      `transform="rotate(-90 20 ${MARGIN.top + plotH / 2})">cumulative regret</text>`,
  );

  groups.forEach((g, gi) => {
    const color = PALETTE[gi % PALETTE.length];
    // band polygon: upper edge forward, lower edge back
    const upper = g.rounds.map((r, t) => `${fmt(x(r))},${fmt(y(g.mean[t] + g.std[t]))}`);
    const lower = g.rounds.map((r, t) => `${fmt(x(r))},${fmt(y(g.mean[t] - g.std[t]))}`);
    parts.push(
      `<polygon points="${upper.join(" ")} ${lower.reverse().join(" ")}" ` +
        `fill="${color}" fill-opacity="0.18" stroke="none"/>`,
    );
    const line = g.rounds.map((r, t) => `${fmt(x(r))},${fmt(y(g.mean[t]))}`).join(" ");
    parts.push(
      `<polyline points="${line}" fill="none" stroke="${color}" stroke-width="1.8"/>`,
    );
    // legend entry
    const ly = MARGIN.top + 8 + gi * 20;
    const lx = MARGIN.left + 14;
    parts.push(
      `<line x1="${lx}" y1="${ly}" x2="${lx + 26}" y2="${ly}" stroke="${color}" stroke-width="2.5"/>`,
      `<text x="${lx + 32}" y="${ly + 4}" font-size="12">${escapeXml(g.label)} ` +
        `(n=${g.runCount})</text>`,
    );
  });

  parts.push("</svg>");
  return parts.join("\n");
}

function escapeXml(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}
